//! Reduction of polynomial systems to degree at most 2 with auxiliary
//! variables.
//!
//! Each monomial of degree above 2 is shortened level by level: its factor
//! list is split into adjacent pairs, each pair `u v` is replaced by an
//! auxiliary variable defined by `w = u*v`, and an odd factor is carried to
//! the next level unchanged. Auxiliary definitions are shared across the
//! whole system and emitted just before the first equation that uses them.

use std::collections::HashMap;

use crate::poly::{DiophantineSystem, Equation, Monomial, Polynomial};
use crate::scalar::Coefficient;

struct Reducer<C> {
    out: DiophantineSystem<C>,
    memo: HashMap<(String, String), String>,
    pending: Vec<Equation<C>>,
}

impl<C: Coefficient> Reducer<C> {
    fn aux(&mut self, u: &str, v: &str) -> String {
        if let Some(w) = self.memo.get(&(u.to_string(), v.to_string())) {
            return w.clone();
        }
        let w = self.out.fresh_name("w");
        self.out.variables.push(w.clone());
        let def = Polynomial::var(u).mul(&Polynomial::var(v));
        self.pending.push(Equation::new(Polynomial::var(&w), def));
        self.memo.insert((u.to_string(), v.to_string()), w.clone());
        w
    }

    fn monomial(&mut self, m: &Monomial, order: &[String]) -> Monomial {
        if m.degree() <= 2 {
            return m.clone();
        }
        let mut factors = m.factors(order);
        while factors.len() > 2 {
            let next = factors
                .chunks(2)
                .map(|c| match c {
                    [u, v] => self.aux(u, v),
                    [u] => u.clone(),
                    _ => unreachable!("chunks of two"),
                })
                .collect();
            factors = next;
        }
        Monomial::from_powers(factors.into_iter().map(|f| (f, 1)))
    }

    fn polynomial(&mut self, p: &Polynomial<C>, order: &[String]) -> Polynomial<C> {
        let mut out = Polynomial::zero();
        for (m, c) in p.ordered_terms(order) {
            let r = self.monomial(m, order);
            out.add_term(r, c.clone());
        }
        out
    }
}

/// Equivalent system of degree at most 2. Solutions of the result restrict
/// to solutions of the input, and every input solution extends uniquely by
/// evaluating the auxiliary definitions. Systems already of degree at most 2
/// are returned unchanged.
pub fn degree_reduce<C: Coefficient>(system: &DiophantineSystem<C>) -> DiophantineSystem<C> {
    if system.max_degree() <= 2 {
        return system.clone();
    }
    let mut r = Reducer {
        out: DiophantineSystem {
            variables: system.variables.clone(),
            equations: Vec::new(),
            notes: system.notes.clone(),
        },
        memo: HashMap::new(),
        pending: Vec::new(),
    };
    let order = system.variables.clone();
    for eq in &system.equations {
        let lhs = r.polynomial(&eq.lhs, &order);
        let rhs = r.polynomial(&eq.rhs, &order);
        let defs = std::mem::take(&mut r.pending);
        r.out.equations.extend(defs);
        r.out.equations.push(Equation::new(lhs, rhs));
    }
    r.out
}
