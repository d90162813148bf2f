//! Gadget encoding that follows the computation tree of each equation side.
//!
//! Realizing a term `t` yields a central commutator `r` such that, once the
//! term's inputs carry their intended exponents, the total exponent of `r`
//! contributed by everything except its consumer, minus its target exponent,
//! equals `t`. Consumers take `r^{-1}` in an input whose exponent is thereby
//! forced to equal `t`:
//!
//! * constant `g`: a fresh `r` with target exponent `-g`;
//! * variable `v`: a fresh tie `r` placed in the carrier of `v`;
//! * `t1 + t2`: inputs `r1^{-1} c`, `r2^{-1} c`, result `c`;
//! * `k * t` for a constant `k`: input `r^{-1} c^k`, result `c`;
//! * `t1 * t2`: fresh letters `x < y` and inputs
//!   `r1^{-1} x^{-1} c1`, `r2^{-1} y^{-1} c2`, `x c1^{-1}`, `y c2^{-1}`,
//!   result `[x, y]`;
//! * `t1 = g`: input `r1^{-1} c` and target `c^g`;
//! * `t1 = t2`: inputs `r1^{-1} c`, `r2^{-1} c^{-1}`.

use std::collections::HashMap;

use crate::compiler::pool::{AllocationMode, Role};
use crate::compiler::{Builder, Compilation, Pending};
use crate::error::{Error, Result};
use crate::poly::{DiophantineSystem, Polynomial};
use crate::scalar::Coefficient;

/// Binary computation tree of a polynomial expression.
#[derive(Debug, Clone, PartialEq)]
pub enum Term<C> {
    Const(C),
    Var(String),
    Sum(Box<Term<C>>, Box<Term<C>>),
    Product(Box<Term<C>>, Box<Term<C>>),
}

impl<C: Coefficient> Term<C> {
    pub fn var(name: &str) -> Self {
        Term::Var(name.to_string())
    }

    pub fn sum(a: Term<C>, b: Term<C>) -> Self {
        Term::Sum(Box::new(a), Box::new(b))
    }

    pub fn product(a: Term<C>, b: Term<C>) -> Self {
        Term::Product(Box::new(a), Box::new(b))
    }

    /// The polynomial the term computes.
    pub fn value(&self) -> Polynomial<C> {
        match self {
            Term::Const(c) => Polynomial::constant(c.clone()),
            Term::Var(v) => Polynomial::var(v),
            Term::Sum(a, b) => a.value().add(&b.value()),
            Term::Product(a, b) => a.value().mul(&b.value()),
        }
    }

    /// Left-folded sum of monomials in canonical order, each monomial a
    /// left-folded product of its variables scaled by its coefficient.
    pub fn from_polynomial(p: &Polynomial<C>, order: &[String]) -> Self {
        let mut summands = p.ordered_terms(order).into_iter().map(|(m, c)| {
            let factors = m.factors(order);
            let Some((first, rest)) = factors.split_first() else {
                return Term::Const(c.clone());
            };
            let chain = rest.iter().fold(Term::var(first), |acc, v| Term::product(acc, Term::var(v)));
            if c.is_one() {
                chain
            } else {
                Term::product(Term::Const(c.clone()), chain)
            }
        });
        match summands.next() {
            None => Term::Const(C::zero()),
            Some(first) => summands.fold(first, Term::sum),
        }
    }

    fn as_const(&self) -> Option<&C> {
        match self {
            Term::Const(c) => Some(c),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TermEquation<C> {
    pub lhs: Term<C>,
    pub rhs: Term<C>,
}

/// One term equation per system equation, keeping the two sides apart.
pub fn system_to_terms<C: Coefficient>(system: &DiophantineSystem<C>) -> Vec<TermEquation<C>> {
    system
        .equations
        .iter()
        .map(|eq| TermEquation {
            lhs: Term::from_polynomial(&eq.lhs, &system.variables),
            rhs: Term::from_polynomial(&eq.rhs, &system.variables),
        })
        .collect()
}

struct TermCompiler<'a, C> {
    b: Builder<C>,
    carrier: HashMap<&'a str, usize>,
}

impl<'a, C: Coefficient> TermCompiler<'a, C> {
    fn realize(&mut self, t: &Term<C>) -> Result<(usize, usize)> {
        let one = C::one();
        match t {
            Term::Const(c) => {
                let g = self.b.pool.begin_gadget();
                let r = self.b.pool.central(g, Role::Term);
                self.b.target.add_comm(r, -c.clone());
                Ok(r)
            }
            Term::Var(v) => {
                let slot = *self.carrier.get(v.as_str()).ok_or_else(|| Error::UndeclaredVariable(v.clone()))?;
                let g = self.b.pool.begin_gadget();
                let r = self.b.pool.central(g, Role::Tie { variable: v.clone() });
                self.b.input_mut(slot).add_comm(r, one);
                Ok(r)
            }
            Term::Sum(l, r) => {
                let r1 = self.realize(l)?;
                let r2 = self.realize(r)?;
                let g = self.b.pool.begin_gadget();
                let c = self.b.pool.central(g, Role::Term);
                self.b.push(Pending::new().comm(r1, -one.clone()).comm(c, one.clone()), l.value());
                self.b.push(Pending::new().comm(r2, -one.clone()).comm(c, one), r.value());
                Ok(c)
            }
            Term::Product(l, r) if l.as_const().is_some() || r.as_const().is_some() => {
                let (k, t) = match l.as_const() {
                    Some(k) => (k.clone(), r),
                    None => (r.as_const().cloned().expect("one side constant"), l),
                };
                let r1 = self.realize(t)?;
                let g = self.b.pool.begin_gadget();
                let c = self.b.pool.central(g, Role::Term);
                self.b.push(Pending::new().comm(r1, -one).comm(c, k), t.value());
                Ok(c)
            }
            Term::Product(l, r) => {
                let r1 = self.realize(l)?;
                let r2 = self.realize(r)?;
                let g = self.b.pool.begin_gadget();
                let (x, y) = self.b.pool.letter_pair(g, Role::Term);
                let c1 = self.b.pool.central(g, Role::Closure);
                let c2 = self.b.pool.central(g, Role::Closure);
                let m = || -C::one();
                self.b.push(Pending::new().comm(r1, m()).letter(x, m()).comm(c1, C::one()), l.value());
                self.b.push(Pending::new().comm(r2, m()).letter(y, m()).comm(c2, C::one()), r.value());
                self.b.push(Pending::new().letter(x, C::one()).comm(c1, m()), l.value());
                self.b.push(Pending::new().letter(y, C::one()).comm(c2, m()), r.value());
                Ok((x, y))
            }
        }
    }

    fn equation(&mut self, n: usize, eq: &TermEquation<C>) -> Result<()> {
        let one = C::one();
        let (lhs, rhs) = match (eq.lhs.as_const(), eq.rhs.as_const()) {
            (Some(_), None) => (&eq.rhs, &eq.lhs),
            _ => (&eq.lhs, &eq.rhs),
        };
        match (lhs.as_const(), rhs.as_const()) {
            (Some(a), Some(b)) => {
                let d = b.clone() - a.clone();
                if !d.is_zero() {
                    let g = self.b.pool.begin_gadget();
                    let c = self.b.pool.central(g, Role::Equation { equation: n });
                    self.b.target.add_comm(c, d);
                }
            }
            (None, Some(gamma)) => {
                let r1 = self.realize(lhs)?;
                let g = self.b.pool.begin_gadget();
                let c = self.b.pool.central(g, Role::Equation { equation: n });
                self.b.push(Pending::new().comm(r1, -one.clone()).comm(c, one), lhs.value());
                self.b.target.add_comm(c, gamma.clone());
            }
            _ => {
                let r1 = self.realize(lhs)?;
                let r2 = self.realize(rhs)?;
                let g = self.b.pool.begin_gadget();
                let c = self.b.pool.central(g, Role::Equation { equation: n });
                self.b.push(Pending::new().comm(r1, -one.clone()).comm(c, one.clone()), lhs.value());
                self.b.push(Pending::new().comm(r2, -one.clone()).comm(c, -one), rhs.value());
            }
        }
        Ok(())
    }
}

/// Compiles term equations over the declared `variables` (one carrier input
/// each, in order).
pub fn compile_terms<C: Coefficient>(
    variables: &[String],
    equations: &[TermEquation<C>],
    mode: AllocationMode,
) -> Result<Compilation<C>> {
    let mut tc = TermCompiler { b: Builder::new(mode), carrier: HashMap::new() };
    for v in variables {
        if tc.carrier.contains_key(v.as_str()) {
            return Err(Error::DuplicateVariable(v.clone()));
        }
        let slot = tc.b.push(Pending::new(), Polynomial::var(v));
        tc.b.bind(v, slot, false);
        tc.carrier.insert(v.as_str(), slot);
    }
    for (n, eq) in equations.iter().enumerate() {
        tc.equation(n, eq)?;
    }
    tc.b.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::evaluate_kp;
    use crate::poly::Equation;
    use num_bigint::BigInt;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn assign(pairs: &[(&str, i64)]) -> HashMap<String, BigInt> {
        pairs.iter().map(|(k, x)| (k.to_string(), BigInt::from(*x))).collect()
    }

    fn accepts(c: &Compilation<BigInt>, sigma: &HashMap<String, BigInt>) -> bool {
        let eps = c.extend_witness(sigma).unwrap();
        evaluate_kp(&c.instance, &eps).unwrap().1
    }

    #[test]
    fn constant_equation() {
        let eqs = [TermEquation { lhs: Term::var("x"), rhs: Term::Const(BigInt::from(5)) }];
        let c = compile_terms(&names(&["x"]), &eqs, AllocationMode::FreshPairs).unwrap();
        assert!(accepts(&c, &assign(&[("x", 5)])));
        assert!(!accepts(&c, &assign(&[("x", 4)])));
    }

    #[test]
    fn square_gadget() {
        let sq = Term::product(Term::var("x"), Term::var("x"));
        let eqs = [TermEquation { lhs: sq, rhs: Term::Const(BigInt::from(4)) }];
        let c = compile_terms(&names(&["x"]), &eqs, AllocationMode::FreshPairs).unwrap();
        for x in -4..=4 {
            assert_eq!(accepts(&c, &assign(&[("x", x)])), x * x == 4);
        }
    }

    #[test]
    fn identical_sides_always_hold() {
        let t = Term::sum(Term::var("x"), Term::var("y"));
        let eqs = [TermEquation { lhs: t.clone(), rhs: t }];
        let c = compile_terms(&names(&["x", "y"]), &eqs, AllocationMode::FreshPairs).unwrap();
        for (x, y) in [(0, 0), (3, -7), (-2, 11)] {
            assert!(accepts(&c, &assign(&[("x", x), ("y", y)])));
        }
    }

    #[test]
    fn cubic_through_terms() {
        // x^3 - 2xy + 3 = y^2 + 1
        let x = Polynomial::<BigInt>::var("x");
        let y = Polynomial::<BigInt>::var("y");
        let lhs = x.pow(3).sub(&x.mul(&y).scale(&BigInt::from(2))).add(&Polynomial::constant(BigInt::from(3)));
        let rhs = y.pow(2).add(&Polynomial::constant(BigInt::from(1)));
        let s = DiophantineSystem::new(names(&["x", "y"]), vec![Equation::new(lhs, rhs)]).unwrap();
        let c = compile_terms(&s.variables, &system_to_terms(&s), AllocationMode::FreshPairs).unwrap();
        for xv in -4..=4 {
            for yv in -4..=4 {
                let sigma = assign(&[("x", xv), ("y", yv)]);
                assert_eq!(accepts(&c, &sigma), s.is_satisfied_by(&sigma).unwrap(), "x={xv} y={yv}");
            }
        }
    }

    #[test]
    fn term_values_match_polynomials() {
        let p =
            Polynomial::<BigInt>::var("a").pow(2).scale(&BigInt::from(-3)).add(&Polynomial::constant(BigInt::from(7)));
        let t = Term::from_polynomial(&p, &names(&["a"]));
        assert_eq!(t.value(), p);
    }
}
