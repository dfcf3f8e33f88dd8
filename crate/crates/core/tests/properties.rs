use proptest::prelude::*;

use latmod::consequence::eval_propositional;
use latmod::constructions::{belnap_four, boolean_algebra, chain, ChainNeg};
use latmod::enumeration::{enumerate_lattices, enumerate_upsets};
use latmod::properties::{check_down_distribution, check_filter, DownDistMode};
use latmod::{
    entails, evaluate, frame_valid, world_satisfies, Assignment, BoxMode, Elem, ElemSet, Formula, Frame, ImpMode,
    KripkeModel, Lattice, Limits, Matrix, Valuation,
};

fn formula(depth: u32) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![Just("p"), Just("q"), Just("r")].prop_map(Formula::var);
    leaf.prop_recursive(depth, 32, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            inner.clone().prop_map(Formula::boxed),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::imp(a, b)),
        ]
    })
}

fn propositional(depth: u32) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![Just("p"), Just("q")].prop_map(Formula::var);
    leaf.prop_recursive(depth, 16, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::imp(a, b)),
        ]
    })
}

/// Formulas built from variables, `&`, `|` and `[]` only.
fn positive(depth: u32) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![Just("p"), Just("q")].prop_map(Formula::var);
    leaf.prop_recursive(depth, 16, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::boxed),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::or(a, b)),
        ]
    })
}

/// A handful of lattices with negation and both implication modes.
fn matrices() -> Vec<Matrix> {
    let bases = [
        (boolean_algebra(1).unwrap(), vec!["1"]),
        (chain(3, ChainNeg::Flip).unwrap(), vec!["h", "1"]),
        (chain(4, ChainNeg::Flip).unwrap(), vec!["1"]),
        (boolean_algebra(2).unwrap(), vec!["a", "1"]),
        (belnap_four(), vec!["B", "T"]),
    ];
    let mut out = Vec::new();
    for (l, d) in bases {
        for mode in [ImpMode::Material, ImpMode::DeductiveEq1] {
            out.push(Matrix::with_names(l.clone().with_imp_mode(mode).unwrap(), &d).unwrap());
        }
    }
    out
}

fn frame_strategy() -> impl Strategy<Value = Frame> {
    (1usize..=3)
        .prop_flat_map(|n| (Just(n), proptest::collection::vec(any::<bool>(), n * n)))
        .prop_map(|(n, bits)| {
            let rel: Vec<(usize, usize)> = (0..n * n).filter(|&i| bits[i]).map(|i| (i / n, i % n)).collect();
            Frame::numbered(n, &rel).unwrap()
        })
}

fn model(frame: &Frame, l: &Lattice, seed: &[usize]) -> KripkeModel {
    let mut v = Valuation::new(frame.size());
    for w in 0..frame.size() {
        for (i, x) in ["p", "q", "r"].iter().enumerate() {
            v.set(w, x, Elem::new(seed[(w * 3 + i) % seed.len()] % l.size()));
        }
    }
    KripkeModel::new(frame.clone(), l.clone(), v).unwrap()
}

proptest! {
    #[test]
    fn render_then_parse_is_identity(f in formula(5)) {
        let text = f.to_string();
        prop_assert_eq!(Formula::parse(&text).unwrap(), f);
    }

    #[test]
    fn propositional_formulas_keep_their_value(
        f in propositional(4),
        which in 0usize..10,
        frame in frame_strategy(),
        seed in proptest::collection::vec(0usize..8, 9),
    ) {
        let m = &matrices()[which];
        let km = model(&frame, &m.lattice, &seed);
        for w in 0..frame.size() {
            let a: Assignment = ["p", "q"]
                .iter()
                .map(|x| (x.to_string(), km.valuation.get(w, x).unwrap()))
                .collect();
            prop_assert_eq!(
                evaluate(&km, w, &f, BoxMode::NormalMeet, None).unwrap(),
                eval_propositional(&m.lattice, &f, &a).unwrap()
            );
        }
    }

    #[test]
    fn box_over_a_filter_is_truth_at_every_successor(
        f in formula(3),
        which in 0usize..10,
        frame in frame_strategy(),
        seed in proptest::collection::vec(0usize..8, 9),
    ) {
        let m = &matrices()[which];
        prop_assume!(check_filter(&m.lattice, m.designated.set()).holds);
        let km = model(&frame, &m.lattice, &seed);
        let boxed = Formula::boxed(f.clone());
        for w in 0..frame.size() {
            let all = frame
                .successors(w)
                .iter()
                .all(|&s| world_satisfies(m, &km, s, &f, BoxMode::NormalMeet).unwrap());
            prop_assert_eq!(world_satisfies(m, &km, w, &boxed, BoxMode::NormalMeet).unwrap(), all);
        }
    }

    #[test]
    fn positive_formulas_are_monotone(
        f in positive(4),
        frame in frame_strategy(),
        low in proptest::collection::vec(0usize..4, 9),
        bump in proptest::collection::vec(0usize..4, 9),
    ) {
        let l = boolean_algebra(2).unwrap();
        let lower = model(&frame, &l, &low);
        let mut upper = lower.clone();
        for w in 0..frame.size() {
            for (i, x) in ["p", "q", "r"].iter().enumerate() {
                let a = lower.valuation.get(w, x).unwrap();
                let b = Elem::new(bump[(w * 3 + i) % bump.len()]);
                upper.valuation.set(w, x, l.join(a, b));
            }
        }
        for w in 0..frame.size() {
            let a = evaluate(&lower, w, &f, BoxMode::NormalMeet, None).unwrap();
            let b = evaluate(&upper, w, &f, BoxMode::NormalMeet, None).unwrap();
            prop_assert!(l.leq(a, b));
        }
    }

    #[test]
    fn compiled_search_agrees_with_recursive_evaluation(
        f in formula(3),
        which in 0usize..10,
        frame in frame_strategy(),
    ) {
        let m = &matrices()[which];
        prop_assume!(f.vars().len() <= 2 && frame.size() <= 2);
        let found = frame_valid(m, &frame, &f, BoxMode::NormalMeet).unwrap();
        // reference: the same enumeration through the recursive evaluator
        let vars: Vec<String> = f.vars().into_iter().collect();
        let slots = vars.len() * frame.size();
        let n = m.lattice.size();
        let mut reference = None;
        'outer: for code in 0..n.pow(slots as u32) {
            let mut v = Valuation::new(frame.size());
            let mut c = code;
            for slot in (0..slots).rev() {
                v.set(slot % frame.size(), &vars[slot / frame.size()], Elem::new(c % n));
                c /= n;
            }
            let km = KripkeModel::new(frame.clone(), m.lattice.clone(), v).unwrap();
            for w in 0..frame.size() {
                if !world_satisfies(m, &km, w, &f, BoxMode::NormalMeet).unwrap() {
                    reference = Some((km, w));
                    break 'outer;
                }
            }
        }
        match (found, reference) {
            (None, None) => {}
            (Some(r), Some((km, w))) => {
                prop_assert!(r.recheck().unwrap());
                prop_assert_eq!(r.model.valuation, km.valuation);
                prop_assert_eq!(r.world, w);
            }
            (a, b) => prop_assert!(false, "search {:?} vs reference {:?}", a.is_some(), b.is_some()),
        }
    }

    #[test]
    fn consequence_is_reflexive_and_monotone(
        a in propositional(3),
        b in propositional(3),
        which in 0usize..10,
    ) {
        let m = &matrices()[which];
        prop_assert!(entails(m, std::slice::from_ref(&a), &a).unwrap().holds());
        if entails(m, std::slice::from_ref(&a), &b).unwrap().holds() {
            prop_assert!(entails(m, &[a.clone(), Formula::var("r")], &b).unwrap().holds());
        }
    }
}

#[test]
fn enumerated_lattices_satisfy_the_lattice_laws() {
    for n in 1..=6 {
        for l in enumerate_lattices(n, &Limits::default()).unwrap() {
            for a in l.elements() {
                assert_eq!(l.meet(a, a), a);
                assert_eq!(l.join(a, l.meet(a, l.top())), a);
                for b in l.elements() {
                    assert_eq!(l.meet(a, b), l.meet(b, a));
                    assert_eq!(l.join(a, l.meet(a, b)), a);
                    assert_eq!(l.meet(a, l.join(a, b)), a);
                    assert_eq!(l.leq(a, b), l.meet(a, b) == a);
                    for c in l.elements() {
                        assert_eq!(l.meet(a, l.meet(b, c)), l.meet(l.meet(a, b), c));
                        assert_eq!(l.join(a, l.join(b, c)), l.join(l.join(a, b), c));
                    }
                }
            }
        }
    }
}

#[test]
fn fast_and_exhaustive_down_distribution_agree() {
    for n in 1..=7 {
        for l in enumerate_lattices(n, &Limits::default()).unwrap() {
            let fast = check_down_distribution(&l, DownDistMode::Fast).unwrap().holds;
            let full = check_down_distribution(&l, DownDistMode::Exhaustive).unwrap().holds;
            assert_eq!(fast, full, "{:?}", l.names());
        }
    }
}

#[test]
fn upsets_are_exactly_the_upward_closed_subsets() {
    for n in 1..=5 {
        for l in enumerate_lattices(n, &Limits::default()).unwrap() {
            let brute: Vec<ElemSet> = (0u64..1 << n)
                .map(ElemSet::from_bits)
                .filter(|s| s.iter().all(|a| l.up_set(a).is_subset(*s)))
                .collect();
            let listed: Vec<ElemSet> = enumerate_upsets(&l).into_iter().map(|d| d.set()).collect();
            assert_eq!(listed, brute);
        }
    }
}
