//! Knapsack in the Heisenberg group (rank 2) reduced to one quadratic
//! equation.
//!
//! The two generator equations are linear in the exponents. Their general
//! integer solution `e = p + K t` is substituted into the commutator
//! equation, leaving a single equation in the kernel parameters `t`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::group::KpInstance;
use crate::poly::{DiophantineSystem, Equation, Polynomial};
use crate::solvers::lattice::{solve_linear, LinearSolution};
use crate::symbolic::{derive, exponent_name};

/// The reduced equation together with the affine map back to exponents.
#[derive(Debug, Clone, PartialEq)]
pub struct HeisenbergReduction {
    /// Kernel parameters `t1 .. tf`.
    pub parameters: Vec<String>,
    pub equation: Equation<BigInt>,
    /// `None` when the linear part has no integer solution; the equation is
    /// then `0 = 1`.
    pub lift: Option<LinearSolution>,
}

impl HeisenbergReduction {
    pub fn system(&self) -> DiophantineSystem<BigInt> {
        DiophantineSystem {
            variables: self.parameters.clone(),
            equations: vec![self.equation.clone()],
            notes: Vec::new(),
        }
    }

    /// Exponent vector for parameter values `t`.
    pub fn exponents(&self, t: &[BigInt]) -> Option<Vec<BigInt>> {
        self.lift.as_ref().map(|l| l.point(t))
    }
}

pub fn heisenberg_reduce(instance: &KpInstance<BigInt>) -> Result<HeisenbergReduction> {
    instance.validate()?;
    if instance.rank != 2 {
        return Err(Error::NotHeisenberg(instance.rank));
    }
    let k = instance.len();
    let d = derive(instance);
    let names: Vec<String> = (0..k).map(exponent_name).collect();

    let mut a = Vec::new();
    let mut b = Vec::new();
    for gen in 1..=2 {
        let (lhs, rhs) = match d.generator_equations.iter().find(|(g, _)| *g == gen) {
            Some((_, eq)) => (eq.lhs.clone(), eq.rhs.constant_term()),
            None => (Polynomial::zero(), BigInt::zero()),
        };
        let e = lhs.constant_term();
        a.push(names.iter().map(|n| lhs.coefficient(&crate::poly::Monomial::var(n))).collect::<Vec<_>>());
        b.push(rhs - e);
    }

    let quadratic = d
        .commutator_equations
        .iter()
        .find(|(key, _)| *key == (1, 2))
        .map(|(_, eq)| eq.clone())
        .unwrap_or_else(|| Equation::new(Polynomial::zero(), Polynomial::zero()));

    let Some(lift) = solve_linear(&a, &b, k) else {
        return Ok(HeisenbergReduction {
            parameters: Vec::new(),
            equation: Equation::new(Polynomial::zero(), Polynomial::constant(BigInt::from(1))),
            lift: None,
        });
    };

    let parameters: Vec<String> = (1..=lift.kernel.len()).map(|j| format!("t{j}")).collect();
    let map: HashMap<String, Polynomial<BigInt>> = names
        .iter()
        .enumerate()
        .map(|(i, n)| {
            let mut p = Polynomial::constant(lift.particular[i].clone());
            for (t, col) in parameters.iter().zip(&lift.kernel) {
                p = p.add(&Polynomial::var(t).scale(&col[i]));
            }
            (n.clone(), p)
        })
        .collect();
    let residual = quadratic.residual().substitute(&map);
    let constant = residual.constant_term();
    let lhs = residual.sub(&Polynomial::constant(constant.clone()));
    let equation = Equation::new(lhs, Polynomial::constant(-constant));
    Ok(HeisenbergReduction { parameters, equation, lift: Some(lift) })
}

/// Verdict of [`heisenberg_search`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HeisenbergOutcome {
    /// Lexicographically least exponent vector in the box.
    Sat(Vec<BigInt>),
    /// No solution anywhere.
    Unsat,
    /// No solution in the box.
    Unknown,
}

/// Searches exponents in `[-bound, bound]^k` through the reduction.
pub fn heisenberg_search(instance: &KpInstance<BigInt>, bound: i64) -> Result<HeisenbergOutcome> {
    let red = heisenberg_reduce(instance)?;
    let Some(lift) = &red.lift else { return Ok(HeisenbergOutcome::Unsat) };
    let residual = red.equation.residual();
    if residual.is_constant() && !residual.is_zero() {
        return Ok(HeisenbergOutcome::Unsat);
    }
    let bound = BigInt::from(bound.abs());
    let mut best: Option<Vec<BigInt>> = None;
    let mut t = Vec::new();
    let mut e = lift.particular.clone();
    walk(&red, lift, &bound, &mut t, &mut e, &mut best)?;
    Ok(best.map_or(HeisenbergOutcome::Unknown, HeisenbergOutcome::Sat))
}

/// Enumerates `t_j` in the interval its pivot row allows given `t_1 .. t_{j-1}`.
fn walk(
    red: &HeisenbergReduction,
    lift: &LinearSolution,
    bound: &BigInt,
    t: &mut Vec<BigInt>,
    e: &mut Vec<BigInt>,
    best: &mut Option<Vec<BigInt>>,
) -> Result<()> {
    let j = t.len();
    if j == lift.kernel.len() {
        if e.iter().all(|x| x.abs() <= *bound) {
            let env: HashMap<String, BigInt> = red.parameters.iter().cloned().zip(t.iter().cloned()).collect();
            if red.equation.holds(&env)? && best.as_ref().is_none_or(|b| &*e < b) {
                *best = Some(e.clone());
            }
        }
        return Ok(());
    }
    let col = &lift.kernel[j];
    let pivot = col.iter().position(|x| !x.is_zero()).expect("kernel basis vectors are nonzero");
    let c = &col[pivot];
    let base = &e[pivot];
    // |base + c t| <= bound
    let (lo, hi) = if c.is_positive() {
        ((-bound - base).div_ceil(c), (bound - base).div_floor(c))
    } else {
        ((bound - base).div_ceil(c), (-bound - base).div_floor(c))
    };
    let mut v = lo;
    while v <= hi {
        for (x, k) in e.iter_mut().zip(col) {
            *x += k * &v;
        }
        t.push(v.clone());
        walk(red, lift, bound, t, e, best)?;
        t.pop();
        for (x, k) in e.iter_mut().zip(col) {
            *x -= k * &v;
        }
        v += 1;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{evaluate_kp, NormalForm};

    type Nf = NormalForm<BigInt>;

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn x(i: usize) -> Nf {
        Nf::generator(2, i).unwrap()
    }

    #[test]
    fn swapped_generators_have_unique_solution() {
        // x2^a x1^b = x1^2 x2^3 [x1,x2]^-6 forces a = 3, b = 2
        let target = Nf::from_parts(2, vec![b(2), b(3)], [((1, 2), b(-6))]).unwrap();
        let inst = KpInstance::new(2, vec![x(2), x(1)], target).unwrap();
        let red = heisenberg_reduce(&inst).unwrap();
        assert!(red.parameters.is_empty());
        let out = heisenberg_search(&inst, 5).unwrap();
        assert_eq!(out, HeisenbergOutcome::Sat(vec![b(3), b(2)]));
        assert!(evaluate_kp(&inst, &[b(3), b(2)]).unwrap().1);
    }

    #[test]
    fn linear_inconsistency() {
        let target = x(1).power(&b(1));
        let inst = KpInstance::new(2, vec![x(1).power(&b(2))], target).unwrap();
        let red = heisenberg_reduce(&inst).unwrap();
        assert_eq!(red.equation.to_text(&[]), "0 = 1");
        assert!(red.lift.is_none());
        assert_eq!(heisenberg_search(&inst, 5).unwrap(), HeisenbergOutcome::Unsat);
    }

    #[test]
    fn one_parameter_family() {
        let inst = KpInstance::new(2, vec![x(1), x(1).inverse()], Nf::identity(2)).unwrap();
        let red = heisenberg_reduce(&inst).unwrap();
        assert_eq!(red.parameters, vec!["t1".to_string()]);
        assert_eq!(heisenberg_search(&inst, 3).unwrap(), HeisenbergOutcome::Sat(vec![b(-3), b(-3)]));
    }

    #[test]
    fn commutator_out_of_box_is_unknown() {
        // x1^a x2^b x1^c x2^d = [x1,x2]^-50 needs |exponents| >= 5 somewhere
        let target = Nf::commutator_power(2, 1, 2, b(-50)).unwrap();
        let inst = KpInstance::new(2, vec![x(1), x(2), x(1), x(2)], target).unwrap();
        assert_eq!(heisenberg_search(&inst, 3).unwrap(), HeisenbergOutcome::Unknown);
        match heisenberg_search(&inst, 10).unwrap() {
            HeisenbergOutcome::Sat(e) => assert!(evaluate_kp(&inst, &e).unwrap().1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_other_ranks() {
        let inst = KpInstance::new(3, vec![Nf::generator(3, 1).unwrap()], Nf::identity(3)).unwrap();
        assert_eq!(heisenberg_reduce(&inst).unwrap_err(), Error::NotHeisenberg(3));
    }
}
