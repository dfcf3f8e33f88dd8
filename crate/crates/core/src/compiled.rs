//! Flat bottom-up evaluator used by the exhaustive searches.
//!
//! A formula is compiled once into a node list (children before parents,
//! shared subformulas merged); a [`Runner`] then evaluates it at every world
//! of one frame for a whole valuation at a time. The recursive evaluator in
//! [`crate::kripke::evaluate`] is the reference this must agree with.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::kripke::{BoxMode, Frame};
use crate::lattice::Lattice;

#[derive(Clone, Copy, Debug)]
enum Node {
    Var(usize),
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Imp(usize, usize),
    Box(usize),
}

#[derive(Clone, Debug)]
pub struct Program {
    nodes: Vec<Node>,
    vars: Vec<String>,
    uses_neg: bool,
    uses_imp: bool,
}

impl Program {
    pub fn compile(f: &Formula) -> Program {
        let vars: Vec<String> = f.vars().into_iter().collect();
        let mut p = Program {
            nodes: Vec::new(),
            vars,
            uses_neg: false,
            uses_imp: false,
        };
        let mut seen = HashMap::new();
        p.push(f, &mut seen);
        p
    }

    /// Sorted variables; valuation slots are laid out in this order.
    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    fn push<'f>(&mut self, f: &'f Formula, seen: &mut HashMap<&'f Formula, usize>) -> usize {
        if let Some(&i) = seen.get(f) {
            return i;
        }
        let node = match f {
            Formula::Var(x) => Node::Var(self.vars.binary_search(x).expect("collected var")),
            Formula::Not(c) => {
                self.uses_neg = true;
                Node::Not(self.push(c, seen))
            }
            Formula::Box(c) => Node::Box(self.push(c, seen)),
            Formula::And(a, b) => {
                let (a, b) = (self.push(a, seen), self.push(b, seen));
                Node::And(a, b)
            }
            Formula::Or(a, b) => {
                let (a, b) = (self.push(a, seen), self.push(b, seen));
                Node::Or(a, b)
            }
            Formula::Imp(a, b) => {
                self.uses_imp = true;
                let (a, b) = (self.push(a, seen), self.push(b, seen));
                Node::Imp(a, b)
            }
        };
        self.nodes.push(node);
        seen.insert(f, self.nodes.len() - 1);
        self.nodes.len() - 1
    }
}

/// Evaluation state for one program on one frame.
pub struct Runner {
    nodes: Vec<Node>,
    n: usize,
    worlds: usize,
    meet: Vec<u8>,
    join: Vec<u8>,
    neg: Vec<u8>,
    imp: Vec<u8>,
    top: u8,
    succ: Vec<Vec<usize>>,
    mode: BoxMode,
    buf: Vec<u8>,
}

impl Runner {
    pub fn new(program: &Program, lattice: &Lattice, frame: &Frame, mode: BoxMode) -> Result<Runner> {
        let n = lattice.size();
        let mut meet = Vec::with_capacity(n * n);
        let mut join = Vec::with_capacity(n * n);
        for a in lattice.elements() {
            for b in lattice.elements() {
                meet.push(lattice.meet(a, b).index() as u8);
                join.push(lattice.join(a, b).index() as u8);
            }
        }
        let neg = match (program.uses_neg, lattice.neg_table()) {
            (false, _) => Vec::new(),
            (true, Some(t)) => t.iter().map(|e| e.index() as u8).collect(),
            (true, None) => return Err(Error::MissingOperation("neg")),
        };
        let imp = match (program.uses_imp, lattice.imp_table()) {
            (false, _) => Vec::new(),
            (true, Some(t)) => t.as_slice().iter().map(|e| e.index() as u8).collect(),
            (true, None) => return Err(Error::MissingOperation("imp")),
        };
        let worlds = frame.size();
        Ok(Runner {
            nodes: program.nodes.clone(),
            n,
            worlds,
            meet,
            join,
            neg,
            imp,
            top: lattice.top().index() as u8,
            succ: frame.successor_lists().to_vec(),
            mode,
            buf: vec![0; program.nodes.len() * worlds],
        })
    }

    /// `values[var * worlds + w]` is the value of variable `var` at world
    /// `w`. Returns the root's value at each world.
    pub fn run(&mut self, values: &[u8]) -> &[u8] {
        let w_count = self.worlds;
        let n = self.n;
        for (i, node) in self.nodes.iter().enumerate() {
            let (done, rest) = self.buf.split_at_mut(i * w_count);
            let out = &mut rest[..w_count];
            match *node {
                Node::Var(v) => out.copy_from_slice(&values[v * w_count..(v + 1) * w_count]),
                Node::Not(c) => {
                    for (o, &x) in out.iter_mut().zip(&done[c * w_count..]) {
                        *o = self.neg[x as usize];
                    }
                }
                Node::And(a, b) => binary(out, done, a, b, w_count, n, &self.meet),
                Node::Or(a, b) => binary(out, done, a, b, w_count, n, &self.join),
                Node::Imp(a, b) => binary(out, done, a, b, w_count, n, &self.imp),
                Node::Box(c) => {
                    let child = &done[c * w_count..(c + 1) * w_count];
                    match self.mode {
                        BoxMode::Local => out.copy_from_slice(child),
                        BoxMode::NormalMeet => {
                            for (w, o) in out.iter_mut().enumerate() {
                                let mut acc = self.top;
                                for &s in &self.succ[w] {
                                    acc = self.meet[acc as usize * n + child[s] as usize];
                                }
                                *o = acc;
                            }
                        }
                    }
                }
            }
        }
        let root = self.nodes.len() - 1;
        &self.buf[root * w_count..]
    }
}

#[inline]
fn binary(out: &mut [u8], done: &[u8], a: usize, b: usize, w_count: usize, n: usize, table: &[u8]) {
    let xa = &done[a * w_count..(a + 1) * w_count];
    let xb = &done[b * w_count..(b + 1) * w_count];
    for ((o, &x), &y) in out.iter_mut().zip(xa).zip(xb) {
        *o = table[x as usize * n + y as usize];
    }
}
