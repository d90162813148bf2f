//! Gadget encoding of systems of degree at most 2.
//!
//! Every variable `v` gets a *carrier* input whose exponent is `v`. An
//! equation `sum alpha_v v + sum beta_vw v w = gamma` gets an equation
//! commutator `[a, b]` with target exponent `gamma`: carriers pick up
//! `[a, b]^{alpha_v}` for the linear part, and each quadratic monomial
//! `beta x y` gets four inputs
//!
//! ```text
//! a^{-beta} c1 t1^{-1},   b^{-1} c2 t2^{-1},   a^{beta} c1^{-1},   b c2^{-1}
//! ```
//!
//! whose product is `[a, b]^{beta e1 e2}` once the closure commutators `c1`,
//! `c2` force the closing exponents to match the opening ones. The tie
//! commutators `t1`, `t2` are also added to the carriers of `x` and `y`,
//! which forces `e1 = x` and `e2 = y`. Equations without quadratic part use
//! a central pair as their equation commutator and need no letters.

use std::collections::HashMap;

use crate::compiler::pool::{AllocationMode, Role};
use crate::compiler::{Builder, Compilation, Pending};
use crate::error::{Error, Result};
use crate::poly::{DiophantineSystem, Polynomial};
use crate::scalar::Coefficient;

pub fn compile_quadratic<C: Coefficient>(
    system: &DiophantineSystem<C>,
    mode: AllocationMode,
) -> Result<Compilation<C>> {
    system.validate()?;
    for (n, eq) in system.equations.iter().enumerate() {
        let d = eq.degree();
        if d > 2 {
            return Err(Error::NotQuadratic(n + 1, d as usize));
        }
    }
    let mut b = Builder::new(mode);
    let mut carrier = HashMap::new();
    for v in &system.variables {
        let slot = b.push(Pending::new(), Polynomial::var(v));
        b.bind(v, slot, false);
        carrier.insert(v.as_str(), slot);
    }
    let one = C::one();
    for (n, eq) in system.equations.iter().enumerate() {
        let residual = eq.residual();
        if residual.is_zero() {
            continue;
        }
        let gamma = -residual.constant_term();
        let terms = residual.ordered_terms(&system.variables);
        let quadratic: Vec<_> = terms.iter().filter(|(m, _)| m.degree() == 2).collect();
        let gadget = b.pool.begin_gadget();
        let role = Role::Equation { equation: n };
        let (pair, letters) = if quadratic.is_empty() {
            (b.pool.central(gadget, role), None)
        } else {
            let ab = b.pool.letter_pair(gadget, role);
            (ab, Some(ab))
        };
        for (m, alpha) in terms.iter().filter(|(m, _)| m.degree() == 1) {
            let v = &m.factors(&system.variables)[0];
            b.input_mut(carrier[v.as_str()]).add_comm(pair, (*alpha).clone());
        }
        if let Some((a, bl)) = letters {
            for (m, beta) in quadratic {
                let f = m.factors(&system.variables);
                let (x, y) = (&f[0], &f[1]);
                let beta = (*beta).clone();
                let c1 = b.pool.central(gadget, Role::Closure);
                let c2 = b.pool.central(gadget, Role::Closure);
                let t1 = b.pool.central(gadget, Role::Tie { variable: x.clone() });
                let t2 = b.pool.central(gadget, Role::Tie { variable: y.clone() });
                let g1 = Pending::new().letter(a, -beta.clone()).comm(c1, one.clone()).comm(t1, -one.clone());
                let g2 = Pending::new().letter(bl, -one.clone()).comm(c2, one.clone()).comm(t2, -one.clone());
                let g3 = Pending::new().letter(a, beta).comm(c1, -one.clone());
                let g4 = Pending::new().letter(bl, one.clone()).comm(c2, -one.clone());
                b.push(g1, Polynomial::var(x));
                b.push(g2, Polynomial::var(y));
                b.push(g3, Polynomial::var(x));
                b.push(g4, Polynomial::var(y));
                b.input_mut(carrier[x.as_str()]).add_comm(t1, one.clone());
                b.input_mut(carrier[y.as_str()]).add_comm(t2, one.clone());
            }
        }
        b.target.add_comm(pair, gamma);
    }
    b.finish()
}
