//! Built-in lattices: Boolean algebras, chains, Belnap's four values, the
//! five-element K counterexample to the linearity converse, and twist
//! algebras over Boolean bases.

use crate::error::{Error, Result};
use crate::lattice::{Elem, ElemSet, ImpMode, Lattice, Matrix};
use crate::properties::{check_down_distribution, DownDistMode};

pub const MAX_ATOMS: usize = 4;

/// Powerset of `atoms` atoms ordered by inclusion, with set complement as
/// negation. Atoms are named `a, b, c, d`; a subset is named by its atoms,
/// the empty set `0` and the full set `1`.
pub fn boolean_algebra(atoms: usize) -> Result<Lattice> {
    if atoms == 0 {
        return Err(Error::InvalidArgument("a Boolean algebra needs at least one atom".into()));
    }
    if atoms > MAX_ATOMS {
        return Err(Error::BoundTooLarge {
            what: "atoms",
            value: atoms,
            max: MAX_ATOMS,
        });
    }
    let size = 1usize << atoms;
    let full = size - 1;
    let names = (0..size)
        .map(|s| match s {
            0 => "0".to_string(),
            s if s == full => "1".to_string(),
            s => (0..atoms)
                .filter(|i| s >> i & 1 == 1)
                .map(|i| (b'a' + i as u8) as char)
                .collect(),
        })
        .collect();
    let mut rel = Vec::new();
    for x in 0..size {
        for y in 0..size {
            if x & y == x {
                rel.push((x, y));
            }
        }
    }
    let neg = (0..size).map(|s| Elem::new(full ^ s)).collect();
    Lattice::from_relation(names, &rel)?.with_neg(neg)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChainNeg {
    None,
    /// `i ↦ n − 1 − i`
    Flip,
}

/// `0 < 1 < … < n−1`, named `0`, then `h` (n = 3) or `c1, c2, …`, then `1`.
pub fn chain(n: usize, neg: ChainNeg) -> Result<Lattice> {
    if n < 2 {
        return Err(Error::InvalidArgument("a chain needs at least two elements".into()));
    }
    let names = (0..n)
        .map(|i| match i {
            0 => "0".to_string(),
            i if i == n - 1 => "1".to_string(),
            _ if n == 3 => "h".to_string(),
            i => format!("c{i}"),
        })
        .collect();
    let rel: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
    let l = Lattice::from_relation(names, &rel)?;
    match neg {
        ChainNeg::None => Ok(l),
        ChainNeg::Flip => l.with_neg((0..n).map(|i| Elem::new(n - 1 - i)).collect()),
    }
}

/// Truth order `F < N, B < T` with `N`, `B` incomparable; negation swaps
/// `T` and `F` and fixes `N` and `B`.
pub fn belnap_four() -> Lattice {
    let l = Lattice::from_relation(
        ["F", "N", "B", "T"].map(String::from).to_vec(),
        &[(0, 1), (0, 2), (1, 3), (2, 3)],
    )
    .expect("static lattice");
    l.with_neg(vec![Elem::new(3), Elem::new(1), Elem::new(2), Elem::new(0)])
        .expect("static table")
}

/// `{0, a, b, f, 1}` with `a, b, f` pairwise incomparable, designated
/// `{f, 1}`, and the Eq. (1) implication except that `a ⊃ b = f`.
///
/// Not linear outside `{f, 1}`. Proposed as a matrix where axiom K is
/// nonetheless frame-valid, but a two-world frame already refutes K here
/// (see `tests/k5.rs`).
pub fn footnote_k5() -> Matrix {
    k5_with_entry("a", "b", "f")
}

/// The same matrix with its one non-standard implication entry set to
/// `x ⊃ y = value`.
pub fn k5_with_entry(x: &str, y: &str, value: &str) -> Matrix {
    let base = Lattice::from_relation(
        ["0", "a", "b", "f", "1"].map(String::from).to_vec(),
        &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)],
    )
    .expect("static lattice");
    let mut imp = crate::lattice::build_implication(&base, ImpMode::DeductiveEq1).expect("eq1 always builds");
    let e = |n: &str| base.elem(n).expect("known element");
    imp.set(e(x), e(y), e(value));
    let l = base.with_imp(imp).expect("matching size");
    Matrix::with_names(l, &["f", "1"]).expect("upward closed")
}

/// Twist algebra over a Boolean base: pairs `⟨a, b⟩` with
///
/// ```text
/// ⟨a, b⟩ + ⟨c, d⟩ = ⟨a + c, b.d⟩
/// ⟨a, b⟩ . ⟨c, d⟩ = ⟨a.c, b + d⟩
///       −⟨a, b⟩   = ⟨b, a⟩
/// ```
///
/// With `restrict_p` only pairs with `a + b = 1` are kept. The order is
/// read off the meet (`x ≤ y` iff `x.y = x`), material implication is
/// attached, and the designated set is `{⟨1, x⟩}`.
pub fn twist(base: &Lattice, restrict_p: bool) -> Result<Matrix> {
    check_boolean(base)?;
    let top = base.top();
    let carrier: Vec<(Elem, Elem)> = base
        .elements()
        .flat_map(|a| base.elements().map(move |b| (a, b)))
        .filter(|&(a, b)| !restrict_p || base.join(a, b) == top)
        .collect();
    let index_of = |p: (Elem, Elem)| -> Result<usize> {
        carrier
            .iter()
            .position(|&q| q == p)
            .ok_or_else(|| Error::NotBoolean("carrier not closed under the twist operations".into()))
    };
    let twist_meet = |(a, b): (Elem, Elem), (c, d): (Elem, Elem)| (base.meet(a, c), base.join(b, d));
    let twist_join = |(a, b): (Elem, Elem), (c, d): (Elem, Elem)| (base.join(a, c), base.meet(b, d));

    let mut rel = Vec::new();
    for (i, &x) in carrier.iter().enumerate() {
        for (j, &y) in carrier.iter().enumerate() {
            if twist_meet(x, y) == x {
                rel.push((i, j));
            }
        }
    }
    let names = carrier
        .iter()
        .map(|&(a, b)| format!("<{},{}>", base.name(a), base.name(b)))
        .collect();
    let lattice = Lattice::from_relation(names, &rel)?;
    for (i, &x) in carrier.iter().enumerate() {
        for (j, &y) in carrier.iter().enumerate() {
            let (xi, yj) = (Elem::new(i), Elem::new(j));
            if lattice.meet(xi, yj).index() != index_of(twist_meet(x, y))?
                || lattice.join(xi, yj).index() != index_of(twist_join(x, y))?
            {
                return Err(Error::NotBoolean(
                    "twist operations disagree with the derived order".into(),
                ));
            }
        }
    }
    let neg = carrier
        .iter()
        .map(|&(a, b)| index_of((b, a)).map(Elem::new))
        .collect::<Result<Vec<_>>>()?;
    let lattice = lattice.with_neg(neg)?.with_imp_mode(ImpMode::Material)?;
    let designated: ElemSet = carrier
        .iter()
        .enumerate()
        .filter(|(_, &(a, _))| a == top)
        .map(|(i, _)| Elem::new(i))
        .collect();
    Matrix::new(lattice, designated)
}

/// Distributive and complemented by its own negation table.
pub fn check_boolean(base: &Lattice) -> Result<()> {
    let neg = base
        .neg_table()
        .ok_or_else(|| Error::NotBoolean("no complementation table".into()))?;
    for a in base.elements() {
        let na = neg[a.index()];
        if base.join(a, na) != base.top() || base.meet(a, na) != base.bottom() {
            return Err(Error::NotBoolean(format!(
                "`{}` is not complemented by `{}`",
                base.name(a),
                base.name(na)
            )));
        }
    }
    if !check_down_distribution(base, DownDistMode::Fast)?.holds {
        return Err(Error::NotBoolean("not distributive".into()));
    }
    Ok(())
}

/// The `⟨1, x⟩` elements of a twist carrier, by name.
pub fn twist_first_coordinate_top(matrix: &Matrix) -> ElemSet {
    let l = &matrix.lattice;
    l.elements().filter(|&e| l.name(e).starts_with("<1,")).collect()
}
