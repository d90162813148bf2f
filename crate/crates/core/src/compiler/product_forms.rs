//! Carrier-free encoding of equations written as sums of products of signed
//! linear forms, e.g. `(K - G18)(K + G18) + G19^2 = 1`.
//!
//! An equation gets letters `a < b` and target `[a, b]^gamma`. A product
//! `beta (s_1 + .. + s_p)(s'_1 + .. + s'_q)` of signed variables gets two
//! closure commutators `c1`, `c2`, one input `a^{-beta} c1` per left
//! occurrence, one input `b^{-1} c2` per right occurrence, and the closers
//! `a^{beta} c1^{-1}` and `b c2^{-1}`. A linear summand `alpha v` is a single
//! input `[a, b]^{alpha}`.
//!
//! Each occurrence slot has exponent `sign * v`. The first occurrence of a
//! variable is its binding; every later occurrence is tied to the previous
//! one by a fresh commutator `t`, the earlier slot taking `t` and the later
//! one `t^{-s s'}` for occurrence signs `s`, `s'`.

use std::collections::HashMap;

use crate::compiler::pool::{AllocationMode, Role};
use crate::compiler::{Builder, Compilation, Pending};
use crate::error::{Error, Result};
use crate::poly::{Equation, Polynomial};
use crate::scalar::Coefficient;

/// Occurrence of a variable with a sign.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signed {
    pub variable: String,
    pub negated: bool,
}

impl Signed {
    pub fn plus(v: &str) -> Self {
        Signed { variable: v.to_string(), negated: false }
    }

    pub fn minus(v: &str) -> Self {
        Signed { variable: v.to_string(), negated: true }
    }

    fn value<C: Coefficient>(&self) -> Polynomial<C> {
        let p = Polynomial::var(&self.variable);
        if self.negated {
            p.neg()
        } else {
            p
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProductForm<C> {
    pub coefficient: C,
    pub left: Vec<Signed>,
    pub right: Vec<Signed>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearSlot<C> {
    pub coefficient: C,
    pub variable: String,
}

/// `sum products + sum linear = rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductFormEquation<C> {
    pub products: Vec<ProductForm<C>>,
    pub linear: Vec<LinearSlot<C>>,
    pub rhs: C,
}

fn sum<C: Coefficient>(occ: &[Signed]) -> Polynomial<C> {
    occ.iter().fold(Polynomial::zero(), |acc, s| acc.add(&s.value()))
}

impl<C: Coefficient> ProductFormEquation<C> {
    /// The expanded polynomial equation.
    pub fn to_equation(&self) -> Equation<C> {
        let mut lhs = Polynomial::zero();
        for p in &self.products {
            lhs = lhs.add(&sum::<C>(&p.left).mul(&sum(&p.right)).scale(&p.coefficient));
        }
        for l in &self.linear {
            lhs = lhs.add(&Polynomial::var(&l.variable).scale(&l.coefficient));
        }
        Equation::new(lhs, Polynomial::constant(self.rhs.clone()))
    }

    /// Reads a degree-2 equation monomial by monomial: `beta x y` becomes
    /// the product `beta (x)(y)`.
    pub fn from_equation(eq: &Equation<C>, order: &[String]) -> Result<Self> {
        let r = eq.residual();
        if r.degree() > 2 {
            return Err(Error::NotQuadratic(1, r.degree() as usize));
        }
        let mut out = ProductFormEquation { products: Vec::new(), linear: Vec::new(), rhs: -r.constant_term() };
        for (m, c) in r.ordered_terms(order) {
            let f = m.factors(order);
            match f.as_slice() {
                [x, y] => out.products.push(ProductForm {
                    coefficient: c.clone(),
                    left: vec![Signed::plus(x)],
                    right: vec![Signed::plus(y)],
                }),
                [x] => out.linear.push(LinearSlot { coefficient: c.clone(), variable: x.clone() }),
                _ => {}
            }
        }
        Ok(out)
    }
}

struct Occurrences {
    last: HashMap<String, (usize, bool)>,
}

impl Occurrences {
    /// Binds or ties the occurrence sitting in `slot`.
    fn place<C: Coefficient>(&mut self, b: &mut Builder<C>, gadget: usize, slot: usize, s: &Signed) {
        let one = C::one();
        match self.last.insert(s.variable.clone(), (slot, s.negated)) {
            None => b.bind(&s.variable, slot, s.negated),
            Some((prev, prev_neg)) => {
                let t = b.pool.central(gadget, Role::Tie { variable: s.variable.clone() });
                b.input_mut(prev).add_comm(t, one.clone());
                let e = if prev_neg == s.negated { -one } else { one };
                b.input_mut(slot).add_comm(t, e);
            }
        }
    }
}

pub fn compile_product_forms<C: Coefficient>(
    variables: &[String],
    equations: &[ProductFormEquation<C>],
    mode: AllocationMode,
) -> Result<Compilation<C>> {
    let mut b = Builder::new(mode);
    let mut occ = Occurrences { last: HashMap::new() };
    let one = C::one();
    for (n, eq) in equations.iter().enumerate() {
        for v in eq.products.iter().flat_map(|p| p.left.iter().chain(&p.right)).map(|s| &s.variable) {
            if !variables.contains(v) {
                return Err(Error::UndeclaredVariable(v.clone()));
            }
        }
        for l in &eq.linear {
            if !variables.contains(&l.variable) {
                return Err(Error::UndeclaredVariable(l.variable.clone()));
            }
        }
        let gadget = b.pool.begin_gadget();
        let role = Role::Equation { equation: n };
        let (pair, letters) = if eq.products.is_empty() {
            (b.pool.central(gadget, role), None)
        } else {
            let ab = b.pool.letter_pair(gadget, role);
            (ab, Some(ab))
        };
        if let Some((a, bl)) = letters {
            for p in &eq.products {
                let beta = p.coefficient.clone();
                let c1 = b.pool.central(gadget, Role::Closure);
                let c2 = b.pool.central(gadget, Role::Closure);
                for s in &p.left {
                    let slot = b.push(Pending::new().letter(a, -beta.clone()).comm(c1, one.clone()), s.value());
                    occ.place(&mut b, gadget, slot, s);
                }
                for s in &p.right {
                    let slot = b.push(Pending::new().letter(bl, -one.clone()).comm(c2, one.clone()), s.value());
                    occ.place(&mut b, gadget, slot, s);
                }
                b.push(Pending::new().letter(a, beta).comm(c1, -one.clone()), sum(&p.left));
                b.push(Pending::new().letter(bl, one.clone()).comm(c2, -one.clone()), sum(&p.right));
            }
        }
        for l in &eq.linear {
            let s = Signed::plus(&l.variable);
            let slot = b.push(Pending::new().comm(pair, l.coefficient.clone()), s.value());
            occ.place(&mut b, gadget, slot, &s);
        }
        b.target.add_comm(pair, eq.rhs.clone());
    }
    b.finish()
}
