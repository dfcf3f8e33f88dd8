//! Order-theoretic and designated-set property checks.
//!
//! Every check is an exhaustive quantification over the carrier in element
//! index order. A failing check carries the first witness found.

use crate::error::{Error, Result};
use crate::lattice::{Elem, ElemSet, ImplicationTable, Lattice, Matrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Witness {
    Element(Elem),
    Pair(Elem, Elem),
    Subsets(ElemSet, ElemSet),
}

impl Witness {
    pub fn describe(&self, lattice: &Lattice) -> String {
        match *self {
            Witness::Element(a) => lattice.name(a).to_string(),
            Witness::Pair(a, b) => format!("({}, {})", lattice.name(a), lattice.name(b)),
            Witness::Subsets(a, b) => {
                format!("A={} B={}", lattice.format_set(a), lattice.format_set(b))
            }
        }
    }
}

/// Outcome of one property check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Check {
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl Check {
    pub const PASS: Check = Check {
        holds: true,
        witness: None,
    };

    pub fn fail(witness: Witness) -> Check {
        Check {
            holds: false,
            witness: Some(witness),
        }
    }

    fn from_witness(witness: Option<Witness>) -> Check {
        match witness {
            Some(w) => Check::fail(w),
            None => Check::PASS,
        }
    }

    pub fn pair(&self) -> Option<(Elem, Elem)> {
        match self.witness {
            Some(Witness::Pair(a, b)) => Some((a, b)),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DesignatedReport {
    pub upward_closed: Check,
    /// Witness is a pair of designated elements whose meet is not designated.
    pub is_filter: Check,
    /// `None` when the lattice carries no implication table.
    pub is_implicative: Option<Check>,
    /// Witness `(x, y)`: `x` is not designated and is incomparable with `y`.
    pub linear_outside: Check,
}

pub fn check_designated(matrix: &Matrix) -> DesignatedReport {
    let l = &matrix.lattice;
    let d = matrix.designated.set();
    DesignatedReport {
        upward_closed: check_upward_closed(l, d),
        is_filter: check_filter(l, d),
        is_implicative: l.imp_table().map(|imp| implicative_with(l, imp, d)),
        linear_outside: check_linear_outside(l, d),
    }
}

pub fn check_upward_closed(l: &Lattice, d: ElemSet) -> Check {
    let w = d.iter().find_map(|a| {
        l.up_set(a)
            .difference(d)
            .iter()
            .next()
            .map(|b| Witness::Pair(a, b))
    });
    Check::from_witness(w)
}

/// Upward closed and closed under binary meet. The empty set passes.
pub fn check_filter(l: &Lattice, d: ElemSet) -> Check {
    let up = check_upward_closed(l, d);
    if !up.holds {
        return up;
    }
    for a in d.iter() {
        for b in d.iter() {
            if !d.contains(l.meet(a, b)) {
                return Check::fail(Witness::Pair(a, b));
            }
        }
    }
    Check::PASS
}

/// `a ≤ b ⇒ a ⊃ b ∈ D`.
pub fn check_implicative(matrix: &Matrix) -> Result<Check> {
    let imp = matrix
        .lattice
        .imp_table()
        .ok_or(Error::MissingOperation("imp"))?;
    Ok(implicative_with(&matrix.lattice, imp, matrix.designated.set()))
}

fn implicative_with(l: &Lattice, imp: &ImplicationTable, d: ElemSet) -> Check {
    for a in l.elements() {
        for b in l.up_set(a).iter() {
            if !d.contains(imp.get(a, b)) {
                return Check::fail(Witness::Pair(a, b));
            }
        }
    }
    Check::PASS
}

/// Every element incomparable with something lies in `D`.
pub fn check_linear_outside(l: &Lattice, d: ElemSet) -> Check {
    for x in l.all().difference(d).iter() {
        if let Some(y) = l.elements().find(|&y| !l.comparable(x, y)) {
            return Check::fail(Witness::Pair(x, y));
        }
    }
    Check::PASS
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum DownDistMode {
    /// All pairs of non-empty subsets. Limited to 10 elements.
    #[default]
    Exhaustive,
    /// Binary distributive law over all triples.
    Fast,
}

pub const EXHAUSTIVE_DOWN_DIST_MAX: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LatticeReport {
    /// `None` without a complementation table.
    pub anti_monotone: Option<Check>,
    pub involutive: Option<Check>,
    pub down_distribution: Check,
}

pub fn check_lattice_properties(l: &Lattice, mode: DownDistMode) -> Result<LatticeReport> {
    Ok(LatticeReport {
        anti_monotone: l.neg_table().map(|neg| anti_monotone_with(l, neg)),
        involutive: l.neg_table().map(involutive_with),
        down_distribution: check_down_distribution(l, mode)?,
    })
}

/// `a ≤ b ⇒ −b ≤ −a`.
pub fn check_anti_monotone(l: &Lattice) -> Result<Check> {
    let neg = l.neg_table().ok_or(Error::MissingOperation("neg"))?;
    Ok(anti_monotone_with(l, neg))
}

/// `−−a = a`.
pub fn check_involutive(l: &Lattice) -> Result<Check> {
    let neg = l.neg_table().ok_or(Error::MissingOperation("neg"))?;
    Ok(involutive_with(neg))
}

pub(crate) fn anti_monotone_with(l: &Lattice, neg: &[Elem]) -> Check {
    for a in l.elements() {
        for b in l.up_set(a).iter() {
            if !l.leq(neg[b.index()], neg[a.index()]) {
                return Check::fail(Witness::Pair(a, b));
            }
        }
    }
    Check::PASS
}

pub(crate) fn involutive_with(neg: &[Elem]) -> Check {
    let w = (0..neg.len())
        .map(Elem::new)
        .find(|a| neg[neg[a.index()].index()] != *a);
    Check::from_witness(w.map(Witness::Element))
}

/// `⋀(A + B) = ⋀A + ⋀B` for non-empty `A`, `B`.
pub fn check_down_distribution(l: &Lattice, mode: DownDistMode) -> Result<Check> {
    match mode {
        DownDistMode::Exhaustive => {
            let n = l.size();
            if n > EXHAUSTIVE_DOWN_DIST_MAX {
                return Err(Error::BoundTooLarge {
                    what: "lattice size for exhaustive down-distribution",
                    value: n,
                    max: EXHAUSTIVE_DOWN_DIST_MAX,
                });
            }
            let count = 1u64 << n;
            // ⋀ of every subset, indexed by bitmask
            let meets: Vec<Elem> = (0..count)
                .map(|bits| l.big_meet(ElemSet::from_bits(bits)))
                .collect();
            for a in 1..count {
                let set_a = ElemSet::from_bits(a);
                for b in 1..count {
                    let set_b = ElemSet::from_bits(b);
                    let lhs = meets[l.subset_join(set_a, set_b).bits() as usize];
                    let rhs = l.join(meets[a as usize], meets[b as usize]);
                    if lhs != rhs {
                        return Ok(Check::fail(Witness::Subsets(set_a, set_b)));
                    }
                }
            }
            Ok(Check::PASS)
        }
        DownDistMode::Fast => {
            for a in l.elements() {
                for b in l.elements() {
                    for c in l.elements() {
                        let lhs = l.join(a, l.meet(b, c));
                        let rhs = l.meet(l.join(a, b), l.join(a, c));
                        if lhs != rhs {
                            let set_b = ElemSet::singleton(b).union(ElemSet::singleton(c));
                            return Ok(Check::fail(Witness::Subsets(
                                ElemSet::singleton(a),
                                set_b,
                            )));
                        }
                    }
                }
            }
            Ok(Check::PASS)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ImplicationReport {
    pub deductive: Check,
    pub strictly_deductive: Check,
}

/// Deductive: `a ≤ b ⇒ b ≤ (a ⊃ b) ∈ D` and `a ≰ b ⇒ a ⊃ b = b`.
/// Strictly deductive additionally demands `a ⊃ b = 1` whenever `a ≤ b`.
pub fn classify_implication(matrix: &Matrix) -> Result<ImplicationReport> {
    let l = &matrix.lattice;
    let imp = l.imp_table().ok_or(Error::MissingOperation("imp"))?;
    let d = matrix.designated.set();
    let mut deductive = None;
    let mut strict = None;
    for a in l.elements() {
        for b in l.elements() {
            let v = imp.get(a, b);
            let ok = if l.leq(a, b) {
                l.leq(b, v) && d.contains(v)
            } else {
                v == b
            };
            if !ok && deductive.is_none() {
                deductive = Some(Witness::Pair(a, b));
            }
            let strict_ok = ok && (!l.leq(a, b) || v == l.top());
            if !strict_ok && strict.is_none() {
                strict = Some(Witness::Pair(a, b));
            }
        }
    }
    Ok(ImplicationReport {
        deductive: Check::from_witness(deductive),
        strictly_deductive: Check::from_witness(strict),
    })
}
