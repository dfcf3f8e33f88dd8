//! Propositional valuations and the matrix consequence relation.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::lattice::{Elem, Lattice, Matrix};

/// Assignment of lattice values to variable names.
pub type Assignment = BTreeMap<String, Elem>;

/// Homomorphic extension of a variable assignment to a `□`-free formula.
pub fn eval_propositional(lattice: &Lattice, f: &Formula, v: &Assignment) -> Result<Elem> {
    Ok(match f {
        Formula::Var(x) => *v.get(x).ok_or_else(|| Error::UnboundVariable {
            world: "-".into(),
            var: x.clone(),
        })?,
        Formula::Not(c) => lattice.neg(eval_propositional(lattice, c, v)?)?,
        Formula::And(l, r) => lattice.meet(
            eval_propositional(lattice, l, v)?,
            eval_propositional(lattice, r, v)?,
        ),
        Formula::Or(l, r) => lattice.join(
            eval_propositional(lattice, l, v)?,
            eval_propositional(lattice, r, v)?,
        ),
        Formula::Imp(l, r) => lattice.imp(
            eval_propositional(lattice, l, v)?,
            eval_propositional(lattice, r, v)?,
        )?,
        Formula::Box(_) => return Err(Error::ModalFormulaRejected),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Entailment {
    Holds,
    /// First assignment (in canonical order) that designates every premise
    /// but not the conclusion.
    Fails(Assignment),
}

impl Entailment {
    pub fn holds(&self) -> bool {
        matches!(self, Entailment::Holds)
    }
}

/// `Γ ⊨ φ` by brute force over all assignments to the variables involved.
///
/// Assignments are enumerated with variables in sorted order, the last one
/// varying fastest, elements in index order.
pub fn entails(matrix: &Matrix, premises: &[Formula], conclusion: &Formula) -> Result<Entailment> {
    if premises.iter().chain([conclusion]).any(Formula::is_modal) {
        return Err(Error::ModalFormulaRejected);
    }
    let mut vars = conclusion.vars();
    for p in premises {
        vars.extend(p.vars());
    }
    let vars: Vec<String> = vars.into_iter().collect();
    let l = &matrix.lattice;
    let n = l.size();
    let mut digits = vec![0usize; vars.len()];
    loop {
        let v: Assignment = vars
            .iter()
            .zip(&digits)
            .map(|(x, &d)| (x.clone(), Elem::new(d)))
            .collect();
        let mut all_premises = true;
        for p in premises {
            if !matrix.is_designated(eval_propositional(l, p, &v)?) {
                all_premises = false;
                break;
            }
        }
        if all_premises && !matrix.is_designated(eval_propositional(l, conclusion, &v)?) {
            return Ok(Entailment::Fails(v));
        }
        if !advance(&mut digits, n) {
            return Ok(Entailment::Holds);
        }
    }
}

/// Odometer step with the last digit fastest; false after wrapping around.
pub(crate) fn advance(digits: &mut [usize], radix: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < radix {
            return true;
        }
        *d = 0;
    }
    false
}
