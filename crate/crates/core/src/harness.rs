//! Exhaustive checks of the structural/semantic correspondences over every
//! small matrix in a universe.
//!
//! Each theorem pairs a structural predicate on `(L, D)` with a bounded
//! semantic one (no counterexample within `max_worlds` worlds). A case fails
//! when the two disagree, or when the structural side is false but the
//! proof-shaped witness model does not falsify the formula.

use rayon::prelude::*;

use crate::constructions::{boolean_algebra, footnote_k5, k5_with_entry, twist, twist_first_coordinate_top};
use crate::enumeration::{enumerate_complementations, enumerate_lattices, enumerate_upsets, ComplementationMode};
use crate::error::{Error, Result};
use crate::formula::{axiom_k, box_disjunction, Formula};
use crate::kripke::BoxMode;
use crate::lattice::{ImpMode, Lattice, Matrix};
use crate::properties::{
    check_down_distribution, check_filter, check_implicative, check_linear_outside, DownDistMode,
};
use crate::search::{
    check_regularity, construct_witness, find_frame_counterexample, CounterexampleReport, Limits, WitnessKind,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TheoremId {
    Regularity,
    Eq1Implicative,
    DisjDist,
    KLinear,
    KMaterial,
    TwistK,
}

impl TheoremId {
    pub const ALL: [TheoremId; 6] = [
        TheoremId::Regularity,
        TheoremId::Eq1Implicative,
        TheoremId::DisjDist,
        TheoremId::KLinear,
        TheoremId::KMaterial,
        TheoremId::TwistK,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::Regularity => "regularity",
            TheoremId::Eq1Implicative => "eq1_implicative",
            TheoremId::DisjDist => "disj_dist",
            TheoremId::KLinear => "k_linear",
            TheoremId::KMaterial => "k_material",
            TheoremId::TwistK => "twist_k",
        }
    }

    /// Smallest world bound at which the falsifying constructions fit.
    pub fn witness_worlds(self) -> usize {
        match self {
            TheoremId::Regularity => 2,
            TheoremId::Eq1Implicative => 0,
            _ => 3,
        }
    }
}

impl std::str::FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown theorem id `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    /// Largest lattice size enumerated.
    pub max_size: usize,
    pub max_worlds: usize,
    /// Boolean bases for the twist universe have `1..=twist_atoms` atoms.
    pub twist_atoms: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_size: 5,
            max_worlds: 3,
            twist_atoms: 2,
        }
    }
}

impl Bounds {
    /// The world bound actually used for `id`; regularity never needs more
    /// than two worlds.
    pub fn worlds_for(&self, id: TheoremId) -> usize {
        match id {
            TheoremId::Regularity => self.max_worlds.min(2),
            _ => self.max_worlds,
        }
    }
}

/// One matrix on which the structural and semantic sides disagree, or
/// whose witness construction did not go through.
#[derive(Clone, Debug)]
pub struct CaseFailure {
    pub matrix: Matrix,
    pub structural: bool,
    pub semantic: bool,
    pub counterexample: Option<CounterexampleReport>,
    pub reason: String,
}

/// A case where an alternative reading of the structural side disagrees
/// with the semantics. Diagnostic only.
#[derive(Clone, Debug)]
pub struct Divergence {
    pub reading: &'static str,
    pub matrix: Matrix,
    pub structural: bool,
    pub semantic: bool,
}

#[derive(Clone, Debug)]
pub struct TheoremReport {
    pub id: TheoremId,
    pub universe: String,
    pub cases: usize,
    /// Structural-false cases whose constructed witness was checked.
    pub witnesses: usize,
    pub failures: Vec<CaseFailure>,
    pub divergences: Vec<Divergence>,
    /// The world bound is below what the witness constructions need, so
    /// only the bounded direction was exercised.
    pub bounded_only: bool,
    pub notes: Vec<String>,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Outcome for one matrix; assembled into a report in universe order.
struct Outcome {
    failure: Option<CaseFailure>,
    witnessed: bool,
    divergences: Vec<Divergence>,
}

pub fn verify_theorem(id: TheoremId, bounds: &Bounds, limits: &Limits) -> Result<TheoremReport> {
    let worlds = bounds.worlds_for(id);
    limits.check("world bound", worlds, limits.max_worlds)?;
    let bounded_only = worlds < id.witness_worlds();
    let (universe, matrices) = universe(id, bounds, limits)?;
    let outcomes: Vec<Outcome> = matrices
        .par_iter()
        .map(|m| check_case(id, m, worlds, bounded_only, limits))
        .collect::<Result<_>>()?;
    let mut report = TheoremReport {
        id,
        universe,
        cases: matrices.len(),
        witnesses: 0,
        failures: Vec::new(),
        divergences: Vec::new(),
        bounded_only,
        notes: Vec::new(),
    };
    for o in outcomes {
        report.witnesses += o.witnessed as usize;
        report.failures.extend(o.failure);
        report.divergences.extend(o.divergences);
    }
    if bounded_only {
        report
            .notes
            .push("bounded verification only; witness directions not exercised".into());
    }
    if !report.divergences.is_empty() {
        let mut readings: Vec<&str> = report.divergences.iter().map(|d| d.reading).collect();
        readings.dedup();
        for r in readings {
            let n = report.divergences.iter().filter(|d| d.reading == r).count();
            report.notes.push(format!("{n} case(s) diverge under the reading: {r}"));
        }
    }
    Ok(report)
}

fn non_empty_upsets(l: &Lattice) -> Result<Vec<Matrix>> {
    enumerate_upsets(l)
        .into_iter()
        .filter(|d| !d.set().is_empty())
        .map(|d| Matrix::new(l.clone(), d.set()))
        .collect()
}

fn lattices(bounds: &Bounds, limits: &Limits) -> Result<Vec<Lattice>> {
    let mut out = Vec::new();
    for n in 1..=bounds.max_size {
        out.extend(enumerate_lattices(n, limits)?);
    }
    Ok(out)
}

fn universe(id: TheoremId, bounds: &Bounds, limits: &Limits) -> Result<(String, Vec<Matrix>)> {
    let worlds = bounds.worlds_for(id);
    let mut matrices = Vec::new();
    let description = match id {
        TheoremId::Regularity => {
            for l in lattices(bounds, limits)? {
                matrices.extend(non_empty_upsets(&l)?);
            }
            format!("lattices of size <= {}, non-empty upsets, models <= {worlds} worlds", bounds.max_size)
        }
        TheoremId::Eq1Implicative | TheoremId::DisjDist | TheoremId::KLinear => {
            for l in lattices(bounds, limits)? {
                let l = l.with_imp_mode(ImpMode::DeductiveEq1)?;
                matrices.extend(non_empty_upsets(&l)?);
            }
            format!(
                "lattices of size <= {}, deductive_eq1 implication, non-empty upsets, frames <= {worlds} worlds",
                bounds.max_size
            )
        }
        TheoremId::KMaterial => {
            for l in lattices(bounds, limits)? {
                if !check_down_distribution(&l, DownDistMode::Exhaustive)?.holds {
                    continue;
                }
                for neg in enumerate_complementations(&l, ComplementationMode::AntimonotoneInvolutions, limits)? {
                    let l = l.clone().with_neg(neg)?.with_imp_mode(ImpMode::Material)?;
                    matrices.extend(non_empty_upsets(&l)?);
                }
            }
            format!(
                "down-distributive lattices of size <= {} with every anti-monotone involution, \
                 material implication, non-empty upsets, frames <= {worlds} worlds",
                bounds.max_size
            )
        }
        TheoremId::TwistK => {
            for atoms in 1..=bounds.twist_atoms {
                let p = twist(&boolean_algebra(atoms)?, true)?;
                matrices.extend(non_empty_upsets(&p.lattice)?);
            }
            format!(
                "restricted twist algebras over Boolean bases with 1..={} atoms, non-empty upsets, \
                 frames <= {worlds} worlds",
                bounds.twist_atoms
            )
        }
    };
    Ok((description, matrices))
}

fn check_case(id: TheoremId, m: &Matrix, worlds: usize, bounded_only: bool, limits: &Limits) -> Result<Outcome> {
    let l = &m.lattice;
    let d = m.designated.set();
    let mut out = Outcome {
        failure: None,
        witnessed: false,
        divergences: Vec::new(),
    };
    let fail = |structural, semantic, counterexample, reason: String| CaseFailure {
        matrix: m.clone(),
        structural,
        semantic,
        counterexample,
        reason,
    };

    if id == TheoremId::Eq1Implicative {
        let c = check_implicative(m)?;
        if d.contains(l.top()) && !c.holds {
            let w = c.witness.map(|w| w.describe(l)).unwrap_or_default();
            out.failure = Some(fail(true, false, None, format!("not implicative at {w}")));
        }
        return Ok(out);
    }

    if id == TheoremId::Regularity {
        let r = check_regularity(m, worlds, limits)?;
        let structural = r.structural.is_filter && r.structural.meet_in_f;
        if structural != r.regular {
            let reason = match &r.witness {
                Some(w) => format!(
                    "filter, but []p {} at world {} of a {}-world model",
                    if w.box_designated { "designated" } else { "undesignated" },
                    w.model.frame.world_name(w.world),
                    w.model.frame.size()
                ),
                None => "not a filter, yet no model separates []p from its successors".into(),
            };
            out.failure = Some(fail(structural, r.regular, None, reason));
        } else if !structural && !bounded_only {
            out.witnessed = true;
            if let Err(reason) = constructed(WitnessKind::NonFilter, m) {
                out.failure = Some(fail(structural, r.regular, None, reason));
            }
        }
        return Ok(out);
    }

    let (formula, structural, kind): (Formula, bool, Option<WitnessKind>) = match id {
        TheoremId::DisjDist => (
            box_disjunction(),
            check_implicative(m)?.holds,
            Some(WitnessKind::NonImplicative),
        ),
        TheoremId::KLinear => (
            axiom_k(),
            check_filter(l, d).holds && check_linear_outside(l, d).holds,
            Some(WitnessKind::NonLinearK),
        ),
        TheoremId::KMaterial => (
            axiom_k(),
            check_implicative(m)?.holds,
            Some(WitnessKind::NonImplicativeKMaterial),
        ),
        TheoremId::TwistK => (
            axiom_k(),
            twist_first_coordinate_top(m).is_subset(d),
            None,
        ),
        TheoremId::Regularity | TheoremId::Eq1Implicative => unreachable!("handled above"),
    };
    let cex = find_frame_counterexample(m, &formula, worlds, BoxMode::NormalMeet, limits)?;
    let semantic = cex.is_none();
    if structural != semantic {
        let reason = if structural {
            "structural side holds but a counterexample exists".to_string()
        } else {
            format!("structural side fails but no counterexample within {worlds} worlds")
        };
        out.failure = Some(fail(structural, semantic, cex.clone(), reason));
    } else if let (false, Some(kind), false) = (structural, kind, bounded_only) {
        out.witnessed = true;
        if let Err(reason) = constructed(kind, m) {
            out.failure = Some(fail(structural, semantic, cex.clone(), reason));
        }
    }

    let alternate = match id {
        TheoremId::KLinear => Some((
            "linear outside D without requiring D to be a filter",
            check_linear_outside(l, d).holds,
        )),
        TheoremId::DisjDist => Some(("D an implicative filter", structural && check_filter(l, d).holds)),
        _ => None,
    };
    if let Some((reading, alt)) = alternate {
        if alt != semantic {
            out.divergences.push(Divergence {
                reading,
                matrix: m.clone(),
                structural: alt,
                semantic,
            });
        }
    }
    Ok(out)
}

/// Tries every defect pair; succeeds if one yields a falsifying model.
fn constructed(kind: WitnessKind, m: &Matrix) -> std::result::Result<(), String> {
    let l = &m.lattice;
    for a in l.elements() {
        for b in l.elements() {
            if let Ok(w) = construct_witness(kind, m, a, b) {
                return if w.into_report(m).recheck().unwrap_or(false) {
                    Ok(())
                } else {
                    Err(format!("{} witness failed its recheck", kind.as_str()))
                };
            }
        }
    }
    Err(format!("no {} construction falsifies the formula", kind.as_str()))
}

/// Disjunction distribution re-run with material implication over every
/// lattice with an anti-monotone involution. Returns the cases where
/// implicativity and validity disagree.
pub fn disj_dist_material(bounds: &Bounds, limits: &Limits) -> Result<(usize, Vec<Divergence>)> {
    let mut matrices = Vec::new();
    for l in lattices(bounds, limits)? {
        for neg in enumerate_complementations(&l, ComplementationMode::AntimonotoneInvolutions, limits)? {
            let l = l.clone().with_neg(neg)?.with_imp_mode(ImpMode::Material)?;
            matrices.extend(non_empty_upsets(&l)?);
        }
    }
    let f = box_disjunction();
    let diverging: Vec<Option<Divergence>> = matrices
        .par_iter()
        .map(|m| -> Result<Option<Divergence>> {
            let structural = check_implicative(m)?.holds;
            let semantic = find_frame_counterexample(m, &f, bounds.max_worlds, BoxMode::NormalMeet, limits)?.is_none();
            Ok((structural != semantic).then(|| Divergence {
                reading: "material implication",
                matrix: m.clone(),
                structural,
                semantic,
            }))
        })
        .collect::<Result<_>>()?;
    Ok((matrices.len(), diverging.into_iter().flatten().collect()))
}

/// The five-element matrix that should validate K without being linear
/// outside its designated set.
#[derive(Clone, Debug)]
pub struct K5Report {
    pub mutated: bool,
    pub world_bound: usize,
    pub linear_outside: bool,
    pub counterexample: Option<CounterexampleReport>,
}

impl K5Report {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none() && !self.linear_outside
    }
}

/// With `mutated`, the special entry `a ⊃ b = f` is replaced by the Eq. (1)
/// value `b`.
pub fn k5_regression(mutated: bool, world_bound: usize, limits: &Limits) -> Result<K5Report> {
    let m = if mutated { k5_with_entry("a", "b", "b") } else { footnote_k5() };
    let linear_outside = check_linear_outside(&m.lattice, m.designated.set()).holds;
    let counterexample = find_frame_counterexample(&m, &axiom_k(), world_bound, BoxMode::NormalMeet, limits)?;
    Ok(K5Report {
        mutated,
        world_bound,
        linear_outside,
        counterexample,
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SuiteConfig {
    pub bounds: Bounds,
    pub mutate_k5: bool,
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub theorems: Vec<TheoremReport>,
    pub k5: K5Report,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.theorems.iter().all(TheoremReport::passed) && self.k5.passed()
    }
}

pub fn run_suite(config: &SuiteConfig, limits: &Limits) -> Result<SuiteReport> {
    let theorems = TheoremId::ALL
        .into_iter()
        .map(|id| verify_theorem(id, &config.bounds, limits))
        .collect::<Result<_>>()?;
    let k5 = k5_regression(config.mutate_k5, config.bounds.max_worlds, limits)?;
    Ok(SuiteReport { theorems, k5 })
}
