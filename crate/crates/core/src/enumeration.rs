//! Exhaustive generation of small lattices, designated sets and
//! complementations.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::lattice::{DesignatedSet, Elem, ElemSet, Lattice};
use crate::properties::anti_monotone_with;
use crate::search::{permutations, Limits};

/// Names for an enumerated lattice of size `n`: `0`, then `a, b, …`, then `1`.
fn default_names(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| match i {
            0 => "0".to_string(),
            i if i == n - 1 => "1".to_string(),
            i => ((b'a' + (i - 1) as u8) as char).to_string(),
        })
        .collect()
}

/// All lattices with `n` elements up to isomorphism.
///
/// Index 0 is the bottom and `n−1` the top, so only the inner `n−2`
/// elements need an order. Inner orders are generated naturally labeled
/// (`i < j` only for index `i < j`), filtered for transitivity and the
/// lattice laws, and deduplicated by the lexicographically smallest
/// relation code over all relabelings of the inner elements. Output is
/// sorted by that code.
pub fn enumerate_lattices(n: usize, limits: &Limits) -> Result<Vec<Lattice>> {
    if n == 0 {
        return Err(Error::InvalidArgument("lattice size must be at least 1".into()));
    }
    limits.check("lattice size", n, limits.max_enumeration)?;
    if n <= 2 {
        let rel: Vec<(usize, usize)> = if n == 2 { vec![(0, 1)] } else { vec![] };
        return Ok(vec![Lattice::from_relation(default_names(n), &rel)?]);
    }
    let m = n - 2;
    let pairs: Vec<(usize, usize)> = (0..m)
        .flat_map(|i| ((i + 1)..m).map(move |j| (i, j)))
        .collect();
    let perms = permutations(m);
    let mut codes = BTreeSet::new();
    for choice in 0u64..(1u64 << pairs.len()) {
        // strict order among inner elements as row bitmasks
        let mut above = vec![0u64; m];
        for (k, &(i, j)) in pairs.iter().enumerate() {
            if choice >> k & 1 == 1 {
                above[i] |= 1 << j;
            }
        }
        let transitive = (0..m).all(|i| {
            (0..m)
                .filter(|j| above[i] >> j & 1 == 1)
                .all(|j| above[j] & !above[i] == 0)
        });
        if !transitive {
            continue;
        }
        let code = perms
            .iter()
            .map(|p| inner_code(&above, p))
            .min()
            .expect("at least one permutation");
        if codes.contains(&code) {
            continue;
        }
        if lattice_from_inner(n, &above).is_ok() {
            codes.insert(code);
        }
    }
    codes
        .into_iter()
        .map(|code| {
            let above: Vec<u64> = (0..m)
                .map(|i| (0..m).filter(|j| code >> (i * m + j) & 1 == 1).fold(0, |row, j| row | 1 << j))
                .collect();
            lattice_from_inner(n, &above)
        })
        .collect()
}

/// Relation code of the inner order after relabeling by `perm`; bit
/// `i * m + j` of the result is set iff `i < j` after relabeling.
fn inner_code(above: &[u64], perm: &[usize]) -> u64 {
    let m = above.len();
    let mut code = 0u64;
    for i in 0..m {
        for j in 0..m {
            if above[i] >> j & 1 == 1 {
                code |= 1 << (perm[i] * m + perm[j]);
            }
        }
    }
    code
}

fn lattice_from_inner(n: usize, above: &[u64]) -> Result<Lattice> {
    let m = n - 2;
    let top = n - 1;
    let mut rel = vec![(0, top)];
    for (i, row) in above.iter().enumerate() {
        rel.push((0, i + 1));
        rel.push((i + 1, top));
        for j in 0..m {
            if row >> j & 1 == 1 {
                rel.push((i + 1, j + 1));
            }
        }
    }
    Lattice::from_relation(default_names(n), &rel)
}

/// All upward-closed subsets, including `∅` and the whole carrier, sorted
/// by bitmask.
pub fn enumerate_upsets(lattice: &Lattice) -> Vec<DesignatedSet> {
    fn rec(l: &Lattice, inside: ElemSet, outside: ElemSet, out: &mut Vec<ElemSet>) {
        let undecided = l.all().difference(inside.union(outside));
        let Some(x) = undecided.iter().next() else {
            out.push(inside);
            return;
        };
        rec(l, inside, outside.union(l.down_set(x)), out);
        rec(l, inside.union(l.up_set(x)), outside, out);
    }
    let mut out = Vec::new();
    rec(lattice, ElemSet::EMPTY, ElemSet::EMPTY, &mut out);
    out.sort();
    out.into_iter().map(DesignatedSet::new).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComplementationMode {
    /// Every unary map; `n^n` of them.
    AllMaps,
    /// Order-reversing maps with `−−a = a`.
    AntimonotoneInvolutions,
}

/// Unary tables in lexicographic order of their entries.
pub fn enumerate_complementations(
    lattice: &Lattice,
    mode: ComplementationMode,
    limits: &Limits,
) -> Result<Vec<Vec<Elem>>> {
    let n = lattice.size();
    match mode {
        ComplementationMode::AllMaps => {
            limits.check("lattice size for all_maps", n, limits.max_all_maps)?;
            let mut out = Vec::new();
            let mut digits = vec![0usize; n];
            loop {
                out.push(digits.iter().map(|&d| Elem::new(d)).collect());
                if !crate::consequence::advance(&mut digits, n) {
                    return Ok(out);
                }
            }
        }
        ComplementationMode::AntimonotoneInvolutions => {
            limits.check("lattice size", n, limits.max_lattice)?;
            let mut out = Vec::new();
            involutions(lattice, &mut vec![None; n], &mut out);
            out.sort();
            Ok(out)
        }
    }
}

fn involutions(l: &Lattice, table: &mut Vec<Option<Elem>>, out: &mut Vec<Vec<Elem>>) {
    let Some(i) = table.iter().position(Option::is_none) else {
        let t: Vec<Elem> = table.iter().map(|e| e.expect("filled")).collect();
        if anti_monotone_with(l, &t).holds {
            out.push(t);
        }
        return;
    };
    for j in i..table.len() {
        if table[j].is_some() {
            continue;
        }
        table[i] = Some(Elem::new(j));
        table[j] = Some(Elem::new(i));
        involutions(l, table, out);
        table[i] = None;
        table[j] = None;
    }
}
