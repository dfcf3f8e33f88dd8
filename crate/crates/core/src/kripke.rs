//! Kripke frames and models valued in a finite lattice, and the normal modal
//! valuation: `v(w, □φ)` is the meet of `v(w', φ)` over the successors `w'`
//! of `w` (top at a dead end).

use std::collections::BTreeMap;

use crate::compiled::{Program, Runner};
use crate::consequence::advance;
use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::lattice::{Elem, ImplicationTable, Lattice, Matrix};
use crate::search::CounterexampleReport;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Frame {
    worlds: Vec<String>,
    rel: Vec<(usize, usize)>,
    succ: Vec<Vec<usize>>,
}

impl Frame {
    /// `rel` holds index pairs `(w, w')` meaning `w R w'`; duplicates are
    /// dropped.
    pub fn new(worlds: Vec<String>, rel: &[(usize, usize)]) -> Result<Frame> {
        let n = worlds.len();
        for (i, w) in worlds.iter().enumerate() {
            if worlds[..i].contains(w) {
                return Err(Error::InvalidArgument(format!("duplicate world `{w}`")));
            }
        }
        if let Some(&(a, b)) = rel.iter().find(|&&(a, b)| a >= n || b >= n) {
            return Err(Error::UnknownWorld(format!("#{}", a.max(b))));
        }
        let mut rel = rel.to_vec();
        rel.sort_unstable();
        rel.dedup();
        let mut succ = vec![Vec::new(); n];
        for &(a, b) in &rel {
            succ[a].push(b);
        }
        Ok(Frame { worlds, rel, succ })
    }

    pub fn from_names<S: AsRef<str>>(worlds: &[S], rel: &[(S, S)]) -> Result<Frame> {
        let worlds: Vec<String> = worlds.iter().map(|w| w.as_ref().to_string()).collect();
        let idx = |name: &str| {
            worlds
                .iter()
                .position(|w| w == name)
                .ok_or_else(|| Error::UnknownWorld(name.to_string()))
        };
        let pairs = rel
            .iter()
            .map(|(a, b)| Ok((idx(a.as_ref())?, idx(b.as_ref())?)))
            .collect::<Result<Vec<_>>>()?;
        Frame::new(worlds, &pairs)
    }

    /// Worlds named `w1..wn`.
    pub fn numbered(n: usize, rel: &[(usize, usize)]) -> Result<Frame> {
        Frame::new((1..=n).map(|i| format!("w{i}")).collect(), rel)
    }

    pub fn size(&self) -> usize {
        self.worlds.len()
    }

    pub fn worlds(&self) -> &[String] {
        &self.worlds
    }

    pub fn world_name(&self, w: usize) -> &str {
        &self.worlds[w]
    }

    pub fn world(&self, name: &str) -> Result<usize> {
        self.worlds
            .iter()
            .position(|w| w == name)
            .ok_or_else(|| Error::UnknownWorld(name.to_string()))
    }

    pub fn rel(&self) -> &[(usize, usize)] {
        &self.rel
    }

    pub fn successors(&self, w: usize) -> &[usize] {
        &self.succ[w]
    }

    pub(crate) fn successor_lists(&self) -> &[Vec<usize>] {
        &self.succ
    }
}

/// Per-world values of propositional variables. Missing entries are
/// reported as `UnboundVariable` when evaluation needs them.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Valuation {
    worlds: usize,
    values: BTreeMap<String, Vec<Option<Elem>>>,
}

impl Valuation {
    pub fn new(worlds: usize) -> Self {
        Valuation {
            worlds,
            values: BTreeMap::new(),
        }
    }

    pub fn worlds(&self) -> usize {
        self.worlds
    }

    pub fn set(&mut self, world: usize, var: &str, value: Elem) {
        assert!(world < self.worlds, "world index out of range");
        let n = self.worlds;
        self.values
            .entry(var.to_string())
            .or_insert_with(|| vec![None; n])[world] = Some(value);
    }

    pub fn get(&self, world: usize, var: &str) -> Option<Elem> {
        self.values.get(var).and_then(|row| row[world])
    }

    pub fn vars(&self) -> impl Iterator<Item = &str> {
        self.values.keys().map(String::as_str)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KripkeModel {
    pub frame: Frame,
    pub lattice: Lattice,
    pub valuation: Valuation,
}

impl KripkeModel {
    pub fn new(frame: Frame, lattice: Lattice, valuation: Valuation) -> Result<Self> {
        if valuation.worlds() != frame.size() {
            return Err(Error::InvalidArgument(format!(
                "valuation covers {} worlds, frame has {}",
                valuation.worlds(),
                frame.size()
            )));
        }
        for row in valuation.values.values() {
            if let Some(e) = row.iter().flatten().find(|e| e.index() >= lattice.size()) {
                return Err(Error::UnknownElement(format!("#{}", e.index())));
            }
        }
        Ok(KripkeModel {
            frame,
            lattice,
            valuation,
        })
    }
}

/// Interpretation of `□`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum BoxMode {
    /// Meet over successors.
    #[default]
    NormalMeet,
    /// `□φ` takes the value of `φ` at the same world.
    Local,
}

impl BoxMode {
    pub fn as_str(self) -> &'static str {
        match self {
            BoxMode::NormalMeet => "normal",
            BoxMode::Local => "local",
        }
    }
}

impl std::str::FromStr for BoxMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "normal" | "normal_meet" => Ok(BoxMode::NormalMeet),
            "local" => Ok(BoxMode::Local),
            other => Err(Error::InvalidArgument(format!("unknown box mode `{other}`"))),
        }
    }
}

/// Value of `f` at `world`. `imp` overrides the lattice's own implication
/// table when given.
pub fn evaluate(
    model: &KripkeModel,
    world: usize,
    f: &Formula,
    mode: BoxMode,
    imp: Option<&ImplicationTable>,
) -> Result<Elem> {
    if world >= model.frame.size() {
        return Err(Error::UnknownWorld(format!("#{world}")));
    }
    let imp = imp.or(model.lattice.imp_table());
    eval_at(model, world, f, mode, imp)
}

fn eval_at(
    model: &KripkeModel,
    w: usize,
    f: &Formula,
    mode: BoxMode,
    imp: Option<&ImplicationTable>,
) -> Result<Elem> {
    let l = &model.lattice;
    Ok(match f {
        Formula::Var(x) => model
            .valuation
            .get(w, x)
            .ok_or_else(|| Error::UnboundVariable {
                world: model.frame.world_name(w).to_string(),
                var: x.clone(),
            })?,
        Formula::Not(c) => l.neg(eval_at(model, w, c, mode, imp)?)?,
        Formula::And(a, b) => l.meet(
            eval_at(model, w, a, mode, imp)?,
            eval_at(model, w, b, mode, imp)?,
        ),
        Formula::Or(a, b) => l.join(
            eval_at(model, w, a, mode, imp)?,
            eval_at(model, w, b, mode, imp)?,
        ),
        Formula::Imp(a, b) => {
            let imp = imp.ok_or(Error::MissingOperation("imp"))?;
            imp.get(
                eval_at(model, w, a, mode, Some(imp))?,
                eval_at(model, w, b, mode, Some(imp))?,
            )
        }
        Formula::Box(c) => match mode {
            BoxMode::Local => eval_at(model, w, c, mode, imp)?,
            BoxMode::NormalMeet => {
                let mut acc = l.top();
                for &s in model.frame.successors(w) {
                    acc = l.meet(acc, eval_at(model, s, c, mode, imp)?);
                }
                acc
            }
        },
    })
}

/// `w ⊩ φ` iff the value of `φ` at `w` is designated.
pub fn world_satisfies(
    matrix: &Matrix,
    model: &KripkeModel,
    world: usize,
    f: &Formula,
    mode: BoxMode,
) -> Result<bool> {
    check_same_carrier(matrix, model)?;
    Ok(matrix.is_designated(evaluate(model, world, f, mode, None)?))
}

/// `None` when every world satisfies `f`, otherwise the first world that
/// does not.
pub fn model_satisfies(
    matrix: &Matrix,
    model: &KripkeModel,
    f: &Formula,
    mode: BoxMode,
) -> Result<Option<usize>> {
    for w in 0..model.frame.size() {
        if !world_satisfies(matrix, model, w, f, mode)? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

fn check_same_carrier(matrix: &Matrix, model: &KripkeModel) -> Result<()> {
    if matrix.lattice.size() != model.lattice.size() {
        return Err(Error::InvalidArgument(
            "model and matrix use lattices of different sizes".into(),
        ));
    }
    Ok(())
}

/// Exhaustive frame validity: every valuation of `vars(f)` over the frame.
///
/// Valuations are enumerated with slots ordered variable-major (variables
/// sorted, then worlds in listed order), the last slot varying fastest and
/// elements in index order. The first failing (valuation, world) is
/// reported.
pub fn frame_valid(
    matrix: &Matrix,
    frame: &Frame,
    f: &Formula,
    mode: BoxMode,
) -> Result<Option<CounterexampleReport>> {
    let program = Program::compile(f);
    let mut runner = Runner::new(&program, &matrix.lattice, frame, mode)?;
    frame_valid_with(matrix, frame, f, mode, &program, &mut runner)
}

pub(crate) fn frame_valid_with(
    matrix: &Matrix,
    frame: &Frame,
    f: &Formula,
    mode: BoxMode,
    program: &Program,
    runner: &mut Runner,
) -> Result<Option<CounterexampleReport>> {
    let worlds = frame.size();
    let n = matrix.lattice.size();
    let slots = program.vars().len() * worlds;
    let designated = matrix.designated.set().bits();
    let mut digits = vec![0usize; slots];
    let mut values = vec![0u8; slots];
    loop {
        for (v, &d) in values.iter_mut().zip(&digits) {
            *v = d as u8;
        }
        let root = runner.run(&values);
        if let Some(w) = (0..worlds).find(|&w| designated >> root[w] & 1 == 0) {
            let value = Elem::new(root[w] as usize);
            let mut valuation = Valuation::new(worlds);
            for (i, var) in program.vars().iter().enumerate() {
                for world in 0..worlds {
                    valuation.set(world, var, Elem::new(values[i * worlds + world] as usize));
                }
            }
            let model = KripkeModel::new(frame.clone(), matrix.lattice.clone(), valuation)?;
            return Ok(Some(CounterexampleReport {
                model,
                designated: matrix.designated,
                world: w,
                value,
                formula: f.clone(),
                mode,
            }));
        }
        if !advance(&mut digits, n) {
            return Ok(None);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::axiom_k;
    use crate::lattice::{validate_lattice, ImpMode};

    fn m2() -> Lattice {
        validate_lattice(
            &["0", "a", "b", "1"],
            &[("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")],
        )
        .unwrap()
    }

    fn c3() -> Lattice {
        validate_lattice(&["0", "h", "1"], &[("0", "h"), ("h", "1")]).unwrap()
    }

    fn fml(s: &str) -> Formula {
        Formula::parse(s).unwrap()
    }

    /// w1 R w2, w1 R w3 with the given (var, [w2 value, w3 value]) entries.
    fn fork(l: &Lattice, vals: &[(&str, [&str; 2])]) -> KripkeModel {
        let frame = Frame::numbered(3, &[(0, 1), (0, 2)]).unwrap();
        let mut v = Valuation::new(3);
        for (var, [x, y]) in vals {
            v.set(0, var, l.bottom());
            v.set(1, var, l.elem(x).unwrap());
            v.set(2, var, l.elem(y).unwrap());
        }
        KripkeModel::new(frame, l.clone(), v).unwrap()
    }

    #[test]
    fn theorem_model_box_values() {
        let l = m2();
        let m = fork(&l, &[("p", ["a", "a"]), ("q", ["b", "a"])]);
        let q = evaluate(&m, 0, &fml("[]q"), BoxMode::NormalMeet, None).unwrap();
        assert_eq!(q, l.meet(l.elem("a").unwrap(), l.elem("b").unwrap()));
        let p = evaluate(&m, 0, &fml("[]p"), BoxMode::NormalMeet, None).unwrap();
        assert_eq!(l.name(p), "a");
    }

    #[test]
    fn dead_end_box_is_top() {
        let l = c3();
        let frame = Frame::numbered(1, &[]).unwrap();
        let mut v = Valuation::new(1);
        v.set(0, "p", l.bottom());
        let m = KripkeModel::new(frame, l.clone(), v).unwrap();
        assert_eq!(evaluate(&m, 0, &fml("[]p"), BoxMode::NormalMeet, None).unwrap(), l.top());
    }

    #[test]
    fn meet_with_top() {
        let l = c3();
        let m = fork(&l, &[("p", ["h", "1"])]);
        let v = evaluate(&m, 0, &fml("[]p"), BoxMode::NormalMeet, None).unwrap();
        assert_eq!(l.name(v), "h");
        let mx = Matrix::with_names(l, &["h", "1"]).unwrap();
        assert!(world_satisfies(&mx, &m, 0, &fml("[]p"), BoxMode::NormalMeet).unwrap());
    }

    #[test]
    fn local_box_stays_put() {
        let l = c3();
        let m = fork(&l, &[("p", ["h", "1"])]);
        let v = evaluate(&m, 0, &fml("[][]p"), BoxMode::Local, None).unwrap();
        assert_eq!(v, l.bottom());
    }

    #[test]
    fn classical_reflexive_point() {
        let l = validate_lattice(&["0", "1"], &[("0", "1")]).unwrap();
        let frame = Frame::numbered(1, &[(0, 0)]).unwrap();
        let mut v = Valuation::new(1);
        v.set(0, "p", l.top());
        let m = KripkeModel::new(frame, l.clone(), v).unwrap();
        let mx = Matrix::with_names(l, &["1"]).unwrap();
        assert!(world_satisfies(&mx, &m, 0, &fml("[]p"), BoxMode::NormalMeet).unwrap());
    }

    #[test]
    fn diamond_atom_not_designated() {
        let l = m2();
        let frame = Frame::numbered(2, &[(0, 1)]).unwrap();
        let mut v = Valuation::new(2);
        v.set(1, "p", l.elem("a").unwrap());
        let m = KripkeModel::new(frame, l.clone(), v).unwrap();
        let mx = Matrix::with_names(l, &["1"]).unwrap();
        // w1's own value of p is never consulted
        assert!(!world_satisfies(&mx, &m, 0, &fml("[]p"), BoxMode::NormalMeet).unwrap());
    }

    #[test]
    fn unbound_and_missing_ops() {
        let l = c3();
        let m = fork(&l, &[("p", ["h", "1"])]);
        assert_eq!(
            evaluate(&m, 0, &fml("[]q"), BoxMode::NormalMeet, None),
            Err(Error::UnboundVariable {
                world: "w2".into(),
                var: "q".into()
            })
        );
        assert_eq!(
            evaluate(&m, 0, &fml("p -> p"), BoxMode::NormalMeet, None),
            Err(Error::MissingOperation("imp"))
        );
        assert_eq!(
            evaluate(&m, 0, &fml("~p"), BoxMode::NormalMeet, None),
            Err(Error::MissingOperation("neg"))
        );
        let imp = crate::lattice::build_implication(&l, ImpMode::DeductiveEq1).unwrap();
        assert_eq!(
            evaluate(&m, 0, &fml("p -> p"), BoxMode::NormalMeet, Some(&imp)).unwrap(),
            l.top()
        );
    }

    #[test]
    fn model_satisfaction() {
        let l = m2().with_imp_mode(ImpMode::DeductiveEq1).unwrap();
        let m = fork(&l, &[("p", ["a", "a"]), ("q", ["b", "a"])]);
        let mx = Matrix::with_names(l.clone(), &["1"]).unwrap();
        assert_eq!(model_satisfies(&mx, &m, &fml("p -> p"), BoxMode::NormalMeet).unwrap(), None);
        assert_eq!(model_satisfies(&mx, &m, &axiom_k(), BoxMode::NormalMeet).unwrap(), Some(0));
        let v = evaluate(&m, 0, &axiom_k(), BoxMode::NormalMeet, None).unwrap();
        assert_eq!(v, l.bottom());
    }

    #[test]
    fn frame_validity_finds_theorem_valuation() {
        let l = m2().with_imp_mode(ImpMode::DeductiveEq1).unwrap();
        let mx = Matrix::with_names(l, &["1"]).unwrap();
        let frame = Frame::numbered(3, &[(0, 1), (0, 2)]).unwrap();
        let report = frame_valid(&mx, &frame, &axiom_k(), BoxMode::NormalMeet)
            .unwrap()
            .expect("K fails on the fork");
        assert_eq!(report.world, 0);
        assert!(report.recheck().unwrap());
        // the exact valuation from the proof is also a counterexample
        let m = fork(&mx.lattice, &[("p", ["a", "a"]), ("q", ["b", "a"])]);
        assert!(!world_satisfies(&mx, &m, 0, &axiom_k(), BoxMode::NormalMeet).unwrap());
    }

    #[test]
    fn frame_rejects_bad_indices() {
        assert!(matches!(Frame::numbered(2, &[(0, 2)]), Err(Error::UnknownWorld(_))));
        assert!(Frame::from_names(&["u", "u"], &[]).is_err());
        let f = Frame::from_names(&["u", "v"], &[("u", "v"), ("u", "v")]).unwrap();
        assert_eq!(f.rel(), &[(0, 1)]);
    }
}
