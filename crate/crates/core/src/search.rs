//! Frame enumeration, counterexample search, regularity checking, and the
//! explicit falsifying models used to witness structural defects.

use rayon::prelude::*;

use crate::compiled::{Program, Runner};
use crate::consequence::advance;
use crate::error::{Error, Result};
use crate::formula::{axiom_k, box_disjunction, Formula};
use crate::kripke::{evaluate, frame_valid_with, BoxMode, Frame, KripkeModel, Valuation};
use crate::lattice::{DesignatedSet, Elem, Matrix};
use crate::properties::{check_filter, Check};

/// Guards against accidental super-exponential runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_lattice: usize,
    pub max_worlds: usize,
    pub max_vars: usize,
    pub max_enumeration: usize,
    pub max_all_maps: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_lattice: 12,
            max_worlds: 4,
            max_vars: 3,
            max_enumeration: 7,
            max_all_maps: 4,
        }
    }
}

impl Limits {
    pub fn unbounded() -> Self {
        Limits {
            max_lattice: crate::lattice::MAX_ELEMENTS,
            max_worlds: 6,
            max_vars: usize::MAX,
            max_enumeration: 9,
            max_all_maps: 8,
        }
    }

    pub(crate) fn check(&self, what: &'static str, value: usize, max: usize) -> Result<()> {
        if value > max {
            Err(Error::BoundTooLarge { what, value, max })
        } else {
            Ok(())
        }
    }
}

/// A concrete model, world and value on which a formula is not designated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CounterexampleReport {
    pub model: KripkeModel,
    pub designated: DesignatedSet,
    pub world: usize,
    pub value: Elem,
    pub formula: Formula,
    pub mode: BoxMode,
}

impl CounterexampleReport {
    pub fn matrix(&self) -> Matrix {
        Matrix {
            lattice: self.model.lattice.clone(),
            designated: self.designated,
        }
    }

    /// Re-evaluates the report's own data with the reference evaluator:
    /// true iff it yields the recorded value and that value is undesignated.
    pub fn recheck(&self) -> Result<bool> {
        let v = evaluate(&self.model, self.world, &self.formula, self.mode, None)?;
        Ok(v == self.value && !self.designated.contains(v))
    }
}

/// Code of a relation on `n` worlds: bit `i * n + j` set iff `i R j`.
fn relation_code(n: usize, rel: u32, perm: &[usize]) -> u32 {
    let mut out = 0;
    for i in 0..n {
        for j in 0..n {
            if rel >> (i * n + j) & 1 == 1 {
                out |= 1 << (perm[i] * n + perm[j]);
            }
        }
    }
    out
}

pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// All frames on `1..=max_worlds` worlds up to isomorphism. A relation is
/// emitted iff its code is minimal among all relabelings; frames are ordered
/// by size, then by code.
pub fn enumerate_frames(max_worlds: usize, limits: &Limits) -> Result<Vec<Frame>> {
    if max_worlds == 0 {
        return Err(Error::InvalidArgument("max_worlds must be at least 1".into()));
    }
    limits.check("max_worlds", max_worlds, limits.max_worlds)?;
    let mut frames = Vec::new();
    for n in 1..=max_worlds {
        let perms = permutations(n);
        for code in 0u32..(1u32 << (n * n)) {
            let canonical = perms.iter().all(|p| relation_code(n, code, p) >= code);
            if canonical {
                let rel: Vec<(usize, usize)> = (0..n * n)
                    .filter(|b| code >> b & 1 == 1)
                    .map(|b| (b / n, b % n))
                    .collect();
                frames.push(Frame::numbered(n, &rel)?);
            }
        }
    }
    Ok(frames)
}

/// Scans [`enumerate_frames`] in order and returns the first counterexample
/// of the first frame that has one.
pub fn find_frame_counterexample(
    matrix: &Matrix,
    f: &Formula,
    max_worlds: usize,
    mode: BoxMode,
    limits: &Limits,
) -> Result<Option<CounterexampleReport>> {
    let frames = enumerate_frames(max_worlds, limits)?;
    find_in_frames(matrix, f, &frames, mode, limits)
}

pub(crate) fn find_in_frames(
    matrix: &Matrix,
    f: &Formula,
    frames: &[Frame],
    mode: BoxMode,
    limits: &Limits,
) -> Result<Option<CounterexampleReport>> {
    limits.check("lattice size", matrix.lattice.size(), limits.max_lattice)?;
    let program = Program::compile(f);
    limits.check("variables", program.vars().len(), limits.max_vars)?;
    // Workers each take a frame; find_map_first keeps the lowest frame index.
    let found = frames
        .par_iter()
        .map(|frame| -> Result<Option<CounterexampleReport>> {
            let mut runner = Runner::new(&program, &matrix.lattice, frame, mode)?;
            frame_valid_with(matrix, frame, f, mode, &program, &mut runner)
        })
        .find_map_first(|r| match r {
            Ok(None) => None,
            other => Some(other),
        });
    found.transpose().map(Option::flatten)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Structural {
    pub is_filter: bool,
    /// `⋀D ∈ D`
    pub meet_in_f: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularityWitness {
    pub model: KripkeModel,
    pub world: usize,
    /// Whether `w ⊩ □p` held at the witness world (the successors disagree).
    pub box_designated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularityReport {
    pub regular: bool,
    pub structural: Structural,
    pub witness: Option<RegularityWitness>,
}

impl RegularityReport {
    pub fn agrees(&self) -> bool {
        self.regular == (self.structural.is_filter && self.structural.meet_in_f)
    }
}

/// Semantic check of "necessity means true in all accessible worlds" for
/// the single formula `□p` over all models with at most `max_worlds` worlds,
/// reported next to the structural filter check.
pub fn check_regularity(matrix: &Matrix, max_worlds: usize, limits: &Limits) -> Result<RegularityReport> {
    let l = &matrix.lattice;
    limits.check("lattice size", l.size(), limits.max_lattice)?;
    let d = matrix.designated.set();
    let structural = Structural {
        is_filter: check_filter(l, d).holds,
        meet_in_f: d.contains(l.big_meet(d)),
    };
    let frames = enumerate_frames(max_worlds, limits)?;
    let witness = frames.iter().find_map(|frame| regularity_witness(matrix, frame));
    Ok(RegularityReport {
        regular: witness.is_none(),
        structural,
        witness,
    })
}

fn regularity_witness(matrix: &Matrix, frame: &Frame) -> Option<RegularityWitness> {
    let l = &matrix.lattice;
    let worlds = frame.size();
    let mut digits = vec![0usize; worlds];
    loop {
        for w in 0..worlds {
            let succ = frame.successors(w);
            let boxed = succ
                .iter()
                .fold(l.top(), |acc, &s| l.meet(acc, Elem::new(digits[s])));
            let box_sat = matrix.is_designated(boxed);
            let all_sat = succ.iter().all(|&s| matrix.is_designated(Elem::new(digits[s])));
            if box_sat != all_sat {
                let mut v = Valuation::new(worlds);
                for (i, &d) in digits.iter().enumerate() {
                    v.set(i, "p", Elem::new(d));
                }
                let model = KripkeModel::new(frame.clone(), l.clone(), v).ok()?;
                return Some(RegularityWitness {
                    model,
                    world: w,
                    box_designated: box_sat,
                });
            }
        }
        if !advance(&mut digits, l.size()) {
            return None;
        }
    }
}

/// The falsifying constructions behind each structural characterization.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessKind {
    /// `(x, y)` designated with `x.y` not: two worlds where `□p` fails
    /// although every successor satisfies `p`.
    NonFilter,
    /// `a ≤ b` with `a ⊃ b` undesignated: three worlds falsifying
    /// `(□p ∨ □q) → □(p ∨ q)`.
    NonImplicative,
    /// `a`, `b` incomparable with `a.b` undesignated: three worlds
    /// falsifying axiom K under a strictly deductive implication.
    NonLinearK,
    /// `a ≤ b` with `−a + b` undesignated: three worlds falsifying axiom K
    /// under material implication with an anti-monotone involution.
    NonImplicativeKMaterial,
}

impl WitnessKind {
    pub fn as_str(self) -> &'static str {
        match self {
            WitnessKind::NonFilter => "nonfilter",
            WitnessKind::NonImplicative => "nonimplicative",
            WitnessKind::NonLinearK => "nonlinear_k",
            WitnessKind::NonImplicativeKMaterial => "nonimplicative_k_material",
        }
    }

    /// The formula the construction falsifies at its root world.
    pub fn formula(self) -> Formula {
        match self {
            WitnessKind::NonFilter => Formula::boxed(Formula::var("p")),
            WitnessKind::NonImplicative => box_disjunction(),
            WitnessKind::NonLinearK | WitnessKind::NonImplicativeKMaterial => axiom_k(),
        }
    }
}

/// A constructed model together with the world and formula it falsifies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessModel {
    pub kind: WitnessKind,
    pub model: KripkeModel,
    pub world: usize,
    pub formula: Formula,
    pub value: Elem,
}

impl WitnessModel {
    pub fn into_report(self, matrix: &Matrix) -> CounterexampleReport {
        CounterexampleReport {
            model: self.model,
            designated: matrix.designated,
            world: self.world,
            value: self.value,
            formula: self.formula,
            mode: BoxMode::NormalMeet,
        }
    }
}

/// Builds the model for `kind` from the defect pair `(a, b)`, then evaluates
/// it; fails with `WitnessNotApplicable` unless the model really falsifies
/// the formula (for `NonFilter`: unless `□p` fails at the root while every
/// successor satisfies `p`).
pub fn construct_witness(kind: WitnessKind, matrix: &Matrix, a: Elem, b: Elem) -> Result<WitnessModel> {
    let l = &matrix.lattice;
    let not_applicable = |reason: String| Error::WitnessNotApplicable {
        kind: kind.as_str(),
        reason,
    };
    if a.index() >= l.size() || b.index() >= l.size() {
        return Err(not_applicable("elements outside the carrier".into()));
    }
    let (na, nb) = (l.name(a).to_string(), l.name(b).to_string());
    let (frame, assignments): (Frame, Vec<(usize, &str, Elem)>) = match kind {
        WitnessKind::NonFilter => {
            if !(matrix.is_designated(a) && matrix.is_designated(b)) || matrix.is_designated(l.meet(a, b)) {
                return Err(not_applicable(format!(
                    "need {na}, {nb} designated with undesignated meet"
                )));
            }
            // w R w, w R w'
            let frame = Frame::numbered(2, &[(0, 0), (0, 1)])?;
            (frame, vec![(0, "p", a), (1, "p", b)])
        }
        WitnessKind::NonImplicative => {
            if !l.leq(a, b) {
                return Err(not_applicable(format!("{na} is not below {nb}")));
            }
            let frame = Frame::numbered(3, &[(0, 1), (0, 2)])?;
            (
                frame,
                vec![
                    (0, "p", a),
                    (0, "q", a),
                    (1, "p", a),
                    (1, "q", b),
                    (2, "p", b),
                    (2, "q", a),
                ],
            )
        }
        WitnessKind::NonLinearK => {
            if l.comparable(a, b) || matrix.is_designated(l.meet(a, b)) {
                return Err(not_applicable(format!(
                    "need {na}, {nb} incomparable with undesignated meet"
                )));
            }
            let frame = Frame::numbered(3, &[(0, 1), (0, 2)])?;
            (
                frame,
                vec![
                    (0, "p", a),
                    (0, "q", a),
                    (1, "p", a),
                    (1, "q", b),
                    (2, "p", a),
                    (2, "q", a),
                ],
            )
        }
        WitnessKind::NonImplicativeKMaterial => {
            if !l.leq(a, b) {
                return Err(not_applicable(format!("{na} is not below {nb}")));
            }
            let neg_a = l.neg(a)?;
            let neg_b = l.neg(b)?;
            let frame = Frame::numbered(3, &[(0, 1), (0, 2)])?;
            (
                frame,
                vec![
                    (0, "p", a),
                    (0, "q", a),
                    (1, "p", neg_a),
                    (1, "q", a),
                    (2, "p", neg_b),
                    (2, "q", a),
                ],
            )
        }
    };
    let mut v = Valuation::new(frame.size());
    for (w, var, e) in assignments {
        v.set(w, var, e);
    }
    let model = KripkeModel::new(frame, l.clone(), v)?;
    let formula = kind.formula();
    let value = evaluate(&model, 0, &formula, BoxMode::NormalMeet, None)?;
    let falsified = match kind {
        WitnessKind::NonFilter => {
            let succ_ok = model
                .frame
                .successors(0)
                .iter()
                .all(|&s| model.valuation.get(s, "p").is_some_and(|e| matrix.is_designated(e)));
            succ_ok && !matrix.is_designated(value)
        }
        _ => !matrix.is_designated(value),
    };
    if !falsified {
        return Err(not_applicable(format!(
            "the model evaluates to the designated value {}",
            l.name(value)
        )));
    }
    Ok(WitnessModel {
        kind,
        model,
        world: 0,
        formula,
        value,
    })
}

/// Picks the witness kind and pair for a failed structural check.
pub fn witness_from_check(kind: WitnessKind, check: &Check, matrix: &Matrix) -> Result<WitnessModel> {
    let (a, b) = check.pair().ok_or_else(|| Error::WitnessNotApplicable {
        kind: kind.as_str(),
        reason: "the check passed or produced no pair".into(),
    })?;
    construct_witness(kind, matrix, a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{validate_lattice, ImpMode, Lattice};

    fn m2() -> Lattice {
        validate_lattice(
            &["0", "a", "b", "1"],
            &[("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")],
        )
        .unwrap()
    }

    fn c3() -> Lattice {
        validate_lattice(&["0", "h", "1"], &[("0", "h"), ("h", "1")])
            .unwrap()
            .with_neg(vec![Elem::new(2), Elem::new(1), Elem::new(0)])
            .unwrap()
    }

    fn e(l: &Lattice, n: &str) -> Elem {
        l.elem(n).unwrap()
    }

    #[test]
    fn frame_counts() {
        let lim = Limits::default();
        assert_eq!(enumerate_frames(1, &lim).unwrap().len(), 2);
        let two = enumerate_frames(2, &lim).unwrap();
        assert_eq!(two.iter().filter(|f| f.size() == 2).count(), 10);
        assert_eq!(enumerate_frames(3, &lim).unwrap().len(), 2 + 10 + 104);
        assert!(matches!(
            enumerate_frames(5, &lim),
            Err(Error::BoundTooLarge { .. })
        ));
        for f in &two {
            assert!(f.rel().iter().all(|&(a, b)| a < f.size() && b < f.size()));
        }
    }

    #[test]
    fn k_fails_on_diamond_with_eq1() {
        let l = m2().with_imp_mode(ImpMode::DeductiveEq1).unwrap();
        let m = Matrix::with_names(l, &["1"]).unwrap();
        let r = find_frame_counterexample(&m, &axiom_k(), 3, BoxMode::NormalMeet, &Limits::default())
            .unwrap()
            .expect("counterexample");
        assert!(r.model.frame.size() <= 3);
        assert!(r.recheck().unwrap());
    }

    #[test]
    fn k_holds_in_lp_material() {
        let l = c3().with_imp_mode(ImpMode::Material).unwrap();
        let m = Matrix::with_names(l, &["h", "1"]).unwrap();
        let r = find_frame_counterexample(&m, &axiom_k(), 3, BoxMode::NormalMeet, &Limits::default()).unwrap();
        assert!(r.is_none());
    }

    #[test]
    fn tautology_has_no_counterexample() {
        let l = m2().with_imp_mode(ImpMode::DeductiveEq1).unwrap();
        let m = Matrix::with_names(l, &["1"]).unwrap();
        let f = Formula::parse("p -> p").unwrap();
        assert!(find_frame_counterexample(&m, &f, 3, BoxMode::NormalMeet, &Limits::default())
            .unwrap()
            .is_none());
    }

    #[test]
    fn regularity_examples() {
        let lim = Limits::default();
        let b2 = validate_lattice(&["0", "1"], &[("0", "1")]).unwrap();
        let r = check_regularity(&Matrix::with_names(b2, &["1"]).unwrap(), 2, &lim).unwrap();
        assert!(r.regular && r.agrees());

        let r = check_regularity(&Matrix::with_names(m2(), &["a", "b", "1"]).unwrap(), 2, &lim).unwrap();
        assert!(!r.regular && r.agrees());
        let w = r.witness.unwrap();
        assert_eq!(w.model.frame.size(), 2);
        assert!(!w.box_designated);

        let r = check_regularity(&Matrix::with_names(c3(), &["h", "1"]).unwrap(), 2, &lim).unwrap();
        assert!(r.regular && r.agrees());
    }

    #[test]
    fn nonfilter_witness_matches_proof_shape() {
        let l = m2();
        let m = Matrix::with_names(l.clone(), &["a", "b", "1"]).unwrap();
        let w = construct_witness(WitnessKind::NonFilter, &m, e(&l, "a"), e(&l, "b")).unwrap();
        assert_eq!(w.model.frame.rel(), &[(0, 0), (0, 1)]);
        assert_eq!(w.value, l.bottom());
        assert!(construct_witness(WitnessKind::NonFilter, &m, e(&l, "a"), e(&l, "1")).is_err());
    }

    #[test]
    fn nonimplicative_witness_values() {
        // LP with material implication and D = {1}: h ≤ h but h ⊃ h = h
        let l = c3().with_imp_mode(ImpMode::Material).unwrap();
        let m = Matrix::with_names(l.clone(), &["1"]).unwrap();
        let h = e(&l, "h");
        let w = construct_witness(WitnessKind::NonImplicative, &m, h, l.top()).unwrap_err();
        assert!(matches!(w, Error::WitnessNotApplicable { .. }));
        let w = construct_witness(WitnessKind::NonImplicative, &m, h, h).unwrap();
        let f = |s: &str| Formula::parse(s).unwrap();
        let at_root = |s: &str| evaluate(&w.model, 0, &f(s), BoxMode::NormalMeet, None).unwrap();
        assert_eq!(at_root("[]p | []q"), h);
        assert_eq!(at_root("[](p | q)"), h);
        assert_eq!(w.value, h);
    }

    #[test]
    fn nonlinear_k_on_diamond() {
        let l = m2().with_imp_mode(ImpMode::DeductiveEq1).unwrap();
        let m = Matrix::with_names(l.clone(), &["1"]).unwrap();
        let (a, b) = (e(&l, "a"), e(&l, "b"));
        let w = construct_witness(WitnessKind::NonLinearK, &m, a, b).unwrap();
        // (b ⊃ a.b) = a.b
        assert_eq!(w.value, l.meet(a, b));
        assert!(w.into_report(&m).recheck().unwrap());
        assert!(construct_witness(WitnessKind::NonLinearK, &m, a, l.top()).is_err());
    }

    #[test]
    fn nonimplicative_k_material_on_belnap() {
        let l = validate_lattice(
            &["F", "N", "B", "T"],
            &[("F", "N"), ("F", "B"), ("N", "T"), ("B", "T")],
        )
        .unwrap()
        .with_neg(vec![Elem::new(3), Elem::new(1), Elem::new(2), Elem::new(0)])
        .unwrap()
        .with_imp_mode(ImpMode::Material)
        .unwrap();
        let m = Matrix::with_names(l.clone(), &["B", "T"]).unwrap();
        let n = e(&l, "N");
        let w = construct_witness(WitnessKind::NonImplicativeKMaterial, &m, n, n).unwrap();
        let f = |s: &str| Formula::parse(s).unwrap();
        // −−b + a = b
        let v = evaluate(&w.model, 0, &f("[]p -> []q"), BoxMode::NormalMeet, None).unwrap();
        assert_eq!(v, n);
        assert_eq!(w.value, n);
    }
}
