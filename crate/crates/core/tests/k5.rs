//! The five-element matrix `{0, a, b, f, 1}` with designated `{f, 1}`.
//!
//! It is not linear outside `{f, 1}`, and axiom K is refuted on it: on the
//! frame `w1 R w1, w1 R w2` with `p = a, a` and `q = a, b`, the antecedent
//! `□(p → q) = (a ⊃ a).(a ⊃ b) = f` is designated while `□p ⊃ □q = a ⊃ 0 = 0`,
//! so K takes the value `f ⊃ 0 = 0`. No choice of the entries left open
//! (row `a` and column `b`) rescues K.

use latmod::constructions::{footnote_k5, k5_with_entry};
use latmod::formula::axiom_k;
use latmod::properties::{check_designated, classify_implication};
use latmod::{
    evaluate, find_frame_counterexample, BoxMode, Elem, Frame, KripkeModel, Limits, Matrix, Valuation, Witness,
};

fn e(m: &Matrix, n: &str) -> Elem {
    m.lattice.elem(n).unwrap()
}

#[test]
fn table_and_structure() {
    let m = footnote_k5();
    let l = &m.lattice;
    assert_eq!(l.imp(e(&m, "a"), e(&m, "b")).unwrap(), e(&m, "f"));
    assert_eq!(l.imp(e(&m, "b"), e(&m, "a")).unwrap(), e(&m, "a"));
    assert_eq!(l.imp(e(&m, "f"), e(&m, "f")).unwrap(), e(&m, "1"));
    let d = check_designated(&m);
    assert!(d.is_filter.holds);
    assert!(d.is_implicative.unwrap().holds);
    assert_eq!(d.linear_outside.witness, Some(Witness::Pair(e(&m, "a"), e(&m, "b"))));
    let c = classify_implication(&m).unwrap();
    assert!(!c.deductive.holds && !c.strictly_deductive.holds);
}

#[test]
fn axiom_k_is_refuted_on_two_worlds() {
    let m = footnote_k5();
    let r = find_frame_counterexample(&m, &axiom_k(), 3, BoxMode::NormalMeet, &Limits::default())
        .unwrap()
        .expect("counterexample");
    assert!(r.recheck().unwrap());
    assert_eq!(r.model.frame.rel(), &[(0, 0), (0, 1)]);
    assert_eq!(r.value, e(&m, "0"));

    // the same model written out by hand
    let frame = Frame::numbered(2, &[(0, 0), (0, 1)]).unwrap();
    let mut v = Valuation::new(2);
    for (w, p, q) in [(0, "a", "a"), (1, "a", "b")] {
        v.set(w, "p", e(&m, p));
        v.set(w, "q", e(&m, q));
    }
    let model = KripkeModel::new(frame, m.lattice.clone(), v).unwrap();
    let at = |s: &str| evaluate(&model, 0, &s.parse().unwrap(), BoxMode::NormalMeet, None).unwrap();
    assert_eq!(at("[](p -> q)"), e(&m, "f"));
    assert_eq!(at("[]p"), e(&m, "a"));
    assert_eq!(at("[]q"), e(&m, "0"));
    assert_eq!(at("[]p -> []q"), e(&m, "0"));
    assert_eq!(at("[](p -> q) -> []p -> []q"), e(&m, "0"));
}

#[test]
fn the_variant_with_a_implies_a_designated_also_fails() {
    let m = k5_with_entry("a", "a", "f");
    assert!(find_frame_counterexample(&m, &axiom_k(), 3, BoxMode::NormalMeet, &Limits::default())
        .unwrap()
        .is_some());
}

#[test]
fn mutation_to_eq1_fails() {
    let m = k5_with_entry("a", "b", "b");
    let r = find_frame_counterexample(&m, &axiom_k(), 3, BoxMode::NormalMeet, &Limits::default())
        .unwrap()
        .expect("counterexample");
    assert!(r.recheck().unwrap());
}

/// Every implicative completion of the open entries, checked on all frames
/// with at most three worlds.
#[test]
fn no_completion_of_the_open_entries_validates_k() {
    let base = footnote_k5();
    let l = &base.lattice;
    let d = base.designated.set();
    let cells: Vec<(Elem, Elem)> = ["0", "a", "f", "1"]
        .iter()
        .map(|y| (e(&base, "a"), e(&base, y)))
        .chain(["0", "b", "f", "1"].iter().map(|x| (e(&base, x), e(&base, "b"))))
        .collect();
    let k = axiom_k();
    let lim = Limits::default();
    let mut checked = 0;
    for code in 0..5usize.pow(cells.len() as u32) {
        let mut imp = l.imp_table().unwrap().clone();
        let mut c = code;
        for &(x, y) in &cells {
            imp.set(x, y, Elem::new(c % 5));
            c /= 5;
        }
        let implicative = l
            .elements()
            .all(|x| l.elements().all(|y| !l.leq(x, y) || d.contains(imp.get(x, y))));
        if !implicative {
            continue;
        }
        checked += 1;
        let m = Matrix::new(l.clone().with_imp(imp).unwrap(), d).unwrap();
        let r = find_frame_counterexample(&m, &k, 3, BoxMode::NormalMeet, &lim).unwrap();
        assert!(r.is_some(), "completion {code} validates K");
    }
    assert_eq!(checked, 10_000);
}
