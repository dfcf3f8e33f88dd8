//! Finite lattices stored as dense tables.
//!
//! Elements are indices `0..n`. The order is kept as one up-set bitmask per
//! element, so a carrier is capped at [`MAX_ELEMENTS`]. Meet and join are
//! precomputed from the order when the lattice is built; complementation and
//! implication are optional extra tables.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Bound, Error, Result};

/// Hard cap on carrier size, imposed by the `u64` set representation.
pub const MAX_ELEMENTS: usize = 64;

/// An element of a lattice, identified by its index in the carrier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem(u8);

impl Elem {
    pub fn new(index: usize) -> Self {
        debug_assert!(index < MAX_ELEMENTS);
        Elem(index as u8)
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A subset of a carrier, as a bitmask over element indices.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElemSet(u64);

impl ElemSet {
    pub const EMPTY: ElemSet = ElemSet(0);

    pub fn from_bits(bits: u64) -> Self {
        ElemSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    /// All elements of a carrier of size `n`.
    pub fn full(n: usize) -> Self {
        if n >= 64 {
            ElemSet(u64::MAX)
        } else {
            ElemSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(e: Elem) -> Self {
        ElemSet(1 << e.index())
    }

    #[inline]
    pub fn contains(self, e: Elem) -> bool {
        self.0 >> e.index() & 1 == 1
    }

    pub fn insert(&mut self, e: Elem) {
        self.0 |= 1 << e.index();
    }

    pub fn remove(&mut self, e: Elem) {
        self.0 &= !(1 << e.index());
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: ElemSet) -> ElemSet {
        ElemSet(self.0 | other.0)
    }

    pub fn intersection(self, other: ElemSet) -> ElemSet {
        ElemSet(self.0 & other.0)
    }

    pub fn difference(self, other: ElemSet) -> ElemSet {
        ElemSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: ElemSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// Elements in increasing index order.
    pub fn iter(self) -> impl Iterator<Item = Elem> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(Elem::new(i))
        })
    }
}

impl FromIterator<Elem> for ElemSet {
    fn from_iter<I: IntoIterator<Item = Elem>>(iter: I) -> Self {
        let mut s = ElemSet::EMPTY;
        for e in iter {
            s.insert(e);
        }
        s
    }
}

/// How an implication table was produced. Advisory only: classification
/// always recomputes from the table itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ImpMode {
    /// `a ⊃ b = −a + b`
    Material,
    /// top when `a ≤ b`, otherwise `b`
    DeductiveEq1,
    Custom,
}

impl ImpMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ImpMode::Material => "material",
            ImpMode::DeductiveEq1 => "deductive_eq1",
            ImpMode::Custom => "table",
        }
    }
}

impl fmt::Display for ImpMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ImplicationTable {
    mode: ImpMode,
    size: usize,
    table: Vec<Elem>,
}

impl ImplicationTable {
    /// A hand-written table, row-major: `table[a * n + b] = a ⊃ b`.
    pub fn custom(size: usize, table: Vec<Elem>) -> Result<Self> {
        if table.len() != size * size {
            return Err(Error::TableShape {
                op: "imp",
                expected: size * size,
                got: table.len(),
            });
        }
        if let Some(bad) = table.iter().find(|e| e.index() >= size) {
            return Err(Error::UnknownElement(format!("#{}", bad.index())));
        }
        Ok(ImplicationTable {
            mode: ImpMode::Custom,
            size,
            table,
        })
    }

    pub fn mode(&self) -> ImpMode {
        self.mode
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn get(&self, a: Elem, b: Elem) -> Elem {
        self.table[a.index() * self.size + b.index()]
    }

    pub fn set(&mut self, a: Elem, b: Elem, value: Elem) {
        self.table[a.index() * self.size + b.index()] = value;
        self.mode = ImpMode::Custom;
    }

    pub fn as_slice(&self) -> &[Elem] {
        &self.table
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Operator {
    Meet,
    Join,
    Neg,
    Imp,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    names: Vec<String>,
    /// `up[a]` is the set of `b` with `a ≤ b`.
    up: Vec<ElemSet>,
    /// `down[a]` is the set of `b` with `b ≤ a`.
    down: Vec<ElemSet>,
    meet: Vec<Elem>,
    join: Vec<Elem>,
    top: Elem,
    bottom: Elem,
    neg: Option<Vec<Elem>>,
    imp: Option<ImplicationTable>,
}

/// Builds a lattice from element names and order pairs `(x, y)` meaning
/// `x ≤ y`. The pairs may be Hasse edges or any relation; the
/// reflexive-transitive closure is taken before the lattice laws are checked.
pub fn validate_lattice<S: AsRef<str>>(names: &[S], pairs: &[(S, S)]) -> Result<Lattice> {
    let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
    let mut index = HashMap::new();
    for (i, n) in names.iter().enumerate() {
        if index.insert(n.as_str(), i).is_some() {
            return Err(Error::DuplicateElement(n.clone()));
        }
    }
    let lookup = |s: &str| {
        index
            .get(s)
            .copied()
            .ok_or_else(|| Error::UnknownElement(s.to_string()))
    };
    let mut rel = Vec::with_capacity(pairs.len());
    for (x, y) in pairs {
        rel.push((lookup(x.as_ref())?, lookup(y.as_ref())?));
    }
    Lattice::from_relation(names, &rel)
}

impl Lattice {
    /// Index-based constructor behind [`validate_lattice`].
    pub fn from_relation(names: Vec<String>, rel: &[(usize, usize)]) -> Result<Lattice> {
        let n = names.len();
        if n == 0 {
            return Err(Error::EmptyCarrier);
        }
        if n > MAX_ELEMENTS {
            return Err(Error::TooManyElements {
                size: n,
                max: MAX_ELEMENTS,
            });
        }
        let mut up: Vec<ElemSet> = (0..n).map(|i| ElemSet::singleton(Elem::new(i))).collect();
        for &(x, y) in rel {
            if x >= n || y >= n {
                return Err(Error::UnknownElement(format!("#{}", x.max(y))));
            }
            up[x].insert(Elem::new(y));
        }
        // Warshall over bit rows.
        for k in 0..n {
            let row_k = up[k];
            for row in up.iter_mut() {
                if row.contains(Elem::new(k)) {
                    *row = row.union(row_k);
                }
            }
        }
        for a in 0..n {
            for b in (a + 1)..n {
                if up[a].contains(Elem::new(b)) && up[b].contains(Elem::new(a)) {
                    return Err(Error::NotAPoset(names[a].clone(), names[b].clone()));
                }
            }
        }
        let mut down = vec![ElemSet::EMPTY; n];
        for (a, row) in up.iter().enumerate() {
            for b in row.iter() {
                down[b.index()].insert(Elem::new(a));
            }
        }

        let mut meet = vec![Elem::new(0); n * n];
        let mut join = vec![Elem::new(0); n * n];
        for a in 0..n {
            for b in a..n {
                let lower = down[a].intersection(down[b]);
                let glb = lower.iter().find(|g| lower.is_subset(down[g.index()]));
                let upper = up[a].intersection(up[b]);
                let lub = upper.iter().find(|l| upper.is_subset(up[l.index()]));
                let (glb, lub) = match (glb, lub) {
                    (Some(g), Some(l)) => (g, l),
                    (None, _) => {
                        return Err(Error::NotALattice {
                            a: names[a].clone(),
                            b: names[b].clone(),
                            bound: Bound::GreatestLower,
                        })
                    }
                    (_, None) => {
                        return Err(Error::NotALattice {
                            a: names[a].clone(),
                            b: names[b].clone(),
                            bound: Bound::LeastUpper,
                        })
                    }
                };
                meet[a * n + b] = glb;
                meet[b * n + a] = glb;
                join[a * n + b] = lub;
                join[b * n + a] = lub;
            }
        }
        // Every pair has a glb, so the whole carrier has one too.
        let all = ElemSet::full(n);
        let bottom = all
            .iter()
            .find(|e| up[e.index()] == all)
            .expect("finite lattice has a bottom");
        let top = all
            .iter()
            .find(|e| down[e.index()] == all)
            .expect("finite lattice has a top");

        Ok(Lattice {
            names,
            up,
            down,
            meet,
            join,
            top,
            bottom,
            neg: None,
            imp: None,
        })
    }

    /// Attaches a complementation table, indexed by element.
    pub fn with_neg(mut self, table: Vec<Elem>) -> Result<Self> {
        if table.len() != self.size() {
            return Err(Error::TableShape {
                op: "neg",
                expected: self.size(),
                got: table.len(),
            });
        }
        if let Some(bad) = table.iter().find(|e| e.index() >= self.size()) {
            return Err(Error::UnknownElement(format!("#{}", bad.index())));
        }
        self.neg = Some(table);
        Ok(self)
    }

    pub fn without_neg(mut self) -> Self {
        self.neg = None;
        self
    }

    pub fn with_imp(mut self, imp: ImplicationTable) -> Result<Self> {
        if imp.size() != self.size() {
            return Err(Error::TableShape {
                op: "imp",
                expected: self.size() * self.size(),
                got: imp.size() * imp.size(),
            });
        }
        self.imp = Some(imp);
        Ok(self)
    }

    /// Convenience for `with_imp(build_implication(self, mode))`.
    pub fn with_imp_mode(self, mode: ImpMode) -> Result<Self> {
        let imp = build_implication(&self, mode)?;
        self.with_imp(imp)
    }

    pub fn size(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, e: Elem) -> &str {
        &self.names[e.index()]
    }

    pub fn elem(&self, name: &str) -> Option<Elem> {
        self.names.iter().position(|n| n == name).map(Elem::new)
    }

    /// Looks up a name, failing with `UnknownElement`.
    pub fn parse_elem(&self, name: &str) -> Result<Elem> {
        self.elem(name)
            .ok_or_else(|| Error::UnknownElement(name.to_string()))
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (0..self.size()).map(Elem::new)
    }

    pub fn all(&self) -> ElemSet {
        ElemSet::full(self.size())
    }

    pub fn top(&self) -> Elem {
        self.top
    }

    pub fn bottom(&self) -> Elem {
        self.bottom
    }

    #[inline]
    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.up[a.index()].contains(b)
    }

    pub fn comparable(&self, a: Elem, b: Elem) -> bool {
        self.leq(a, b) || self.leq(b, a)
    }

    /// Everything at or above `a`.
    pub fn up_set(&self, a: Elem) -> ElemSet {
        self.up[a.index()]
    }

    /// Everything at or below `a`.
    pub fn down_set(&self, a: Elem) -> ElemSet {
        self.down[a.index()]
    }

    #[inline]
    pub fn meet(&self, a: Elem, b: Elem) -> Elem {
        self.meet[a.index() * self.size() + b.index()]
    }

    #[inline]
    pub fn join(&self, a: Elem, b: Elem) -> Elem {
        self.join[a.index() * self.size() + b.index()]
    }

    pub fn neg_table(&self) -> Option<&[Elem]> {
        self.neg.as_deref()
    }

    pub fn neg(&self, a: Elem) -> Result<Elem> {
        self.neg
            .as_ref()
            .map(|t| t[a.index()])
            .ok_or(Error::MissingOperation("neg"))
    }

    pub fn imp_table(&self) -> Option<&ImplicationTable> {
        self.imp.as_ref()
    }

    pub fn imp(&self, a: Elem, b: Elem) -> Result<Elem> {
        self.imp
            .as_ref()
            .map(|t| t.get(a, b))
            .ok_or(Error::MissingOperation("imp"))
    }

    /// Table lookup for any of the four operators. `args` must match the
    /// operator's arity.
    pub fn apply_op(&self, op: Operator, args: &[Elem]) -> Result<Elem> {
        let arity = if op == Operator::Neg { 1 } else { 2 };
        if args.len() != arity {
            return Err(Error::InvalidArgument(format!(
                "{op:?} takes {arity} argument(s), got {}",
                args.len()
            )));
        }
        if let Some(bad) = args.iter().find(|e| e.index() >= self.size()) {
            return Err(Error::UnknownElement(format!("#{}", bad.index())));
        }
        match op {
            Operator::Meet => Ok(self.meet(args[0], args[1])),
            Operator::Join => Ok(self.join(args[0], args[1])),
            Operator::Neg => self.neg(args[0]),
            Operator::Imp => self.imp(args[0], args[1]),
        }
    }

    /// Greatest lower bound of a subset; the empty meet is top.
    pub fn big_meet(&self, subset: ElemSet) -> Elem {
        subset.iter().fold(self.top, |acc, e| self.meet(acc, e))
    }

    /// Least upper bound of a subset; the empty join is bottom.
    pub fn big_join(&self, subset: ElemSet) -> Elem {
        subset.iter().fold(self.bottom, |acc, e| self.join(acc, e))
    }

    /// `X + Y = { x + y | x ∈ X, y ∈ Y }`; empty whenever either side is.
    pub fn subset_join(&self, xs: ElemSet, ys: ElemSet) -> ElemSet {
        let mut out = ElemSet::EMPTY;
        for x in xs.iter() {
            for y in ys.iter() {
                out.insert(self.join(x, y));
            }
        }
        out
    }

    /// Covering pairs `(a, b)` with `a < b` and nothing strictly between.
    pub fn covers(&self) -> Vec<(Elem, Elem)> {
        let mut out = Vec::new();
        for a in self.elements() {
            let above = self.up_set(a).difference(ElemSet::singleton(a));
            for b in above.iter() {
                let between = above
                    .intersection(self.down_set(b))
                    .difference(ElemSet::singleton(b));
                if between.is_empty() {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Renames the elements; the structure is unchanged.
    pub fn renamed(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.size() {
            return Err(Error::InvalidArgument(format!(
                "expected {} names, got {}",
                self.size(),
                names.len()
            )));
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(Error::DuplicateElement(n.clone()));
            }
        }
        self.names = names;
        Ok(self)
    }

    pub fn format_set(&self, set: ElemSet) -> String {
        let parts: Vec<&str> = set.iter().map(|e| self.name(e)).collect();
        format!("{{{}}}", parts.join(","))
    }
}

/// Builds the material (`−a + b`) or Eq.-(1)-style deductive table.
pub fn build_implication(lattice: &Lattice, mode: ImpMode) -> Result<ImplicationTable> {
    let n = lattice.size();
    let mut table = Vec::with_capacity(n * n);
    match mode {
        ImpMode::Material => {
            let neg = lattice.neg_table().ok_or(Error::MissingOperation("neg"))?;
            for a in lattice.elements() {
                for b in lattice.elements() {
                    table.push(lattice.join(neg[a.index()], b));
                }
            }
        }
        ImpMode::DeductiveEq1 => {
            for a in lattice.elements() {
                for b in lattice.elements() {
                    table.push(if lattice.leq(a, b) { lattice.top() } else { b });
                }
            }
        }
        ImpMode::Custom => {
            return Err(Error::InvalidArgument(
                "custom implication tables are built with ImplicationTable::custom".into(),
            ))
        }
    }
    Ok(ImplicationTable {
        mode,
        size: n,
        table,
    })
}

/// A set of designated values. Upward closure is enforced by [`Matrix::new`],
/// not by this type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct DesignatedSet(ElemSet);

impl DesignatedSet {
    pub fn new(set: ElemSet) -> Self {
        DesignatedSet(set)
    }

    pub fn set(self) -> ElemSet {
        self.0
    }

    #[inline]
    pub fn contains(self, e: Elem) -> bool {
        self.0.contains(e)
    }

    pub fn is_empty(self) -> bool {
        self.0.is_empty()
    }
}

/// A lattice together with its designated values.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    pub lattice: Lattice,
    pub designated: DesignatedSet,
}

impl Matrix {
    /// Rejects designated sets that are not upward closed.
    pub fn new(lattice: Lattice, designated: ElemSet) -> Result<Self> {
        if !designated.is_subset(lattice.all()) {
            return Err(Error::InvalidArgument(
                "designated set mentions elements outside the carrier".into(),
            ));
        }
        for a in designated.iter() {
            if let Some(b) = lattice.up_set(a).difference(designated).iter().next() {
                return Err(Error::NotUpwardClosed {
                    below: lattice.name(a).to_string(),
                    above: lattice.name(b).to_string(),
                });
            }
        }
        Ok(Matrix {
            lattice,
            designated: DesignatedSet(designated),
        })
    }

    /// Designated set given by element names.
    pub fn with_names<S: AsRef<str>>(lattice: Lattice, designated: &[S]) -> Result<Self> {
        let set = designated
            .iter()
            .map(|n| lattice.parse_elem(n.as_ref()))
            .collect::<Result<ElemSet>>()?;
        Matrix::new(lattice, set)
    }

    pub fn is_designated(&self, e: Elem) -> bool {
        self.designated.contains(e)
    }

    pub fn describe(&self) -> String {
        format!(
            "{} elements, D = {}",
            self.lattice.size(),
            self.lattice.format_set(self.designated.set())
        )
    }
}
