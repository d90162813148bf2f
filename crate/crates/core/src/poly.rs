//! Sparse multivariate polynomials over named variables, and Diophantine
//! systems built from them.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use num_bigint::BigInt;

use crate::constexpr::ConstExpr;
use crate::error::{Error, Result};
use crate::scalar::{Coefficient, Scalar};

/// Product of variables with positive exponents; the empty monomial is `1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(BTreeMap<String, u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(BTreeMap::new())
    }

    pub fn var(name: &str) -> Self {
        Monomial(BTreeMap::from([(name.to_string(), 1)]))
    }

    pub fn from_powers(powers: impl IntoIterator<Item = (String, u32)>) -> Self {
        let mut m = BTreeMap::new();
        for (v, e) in powers {
            if e > 0 {
                *m.entry(v).or_insert(0) += e;
            }
        }
        Monomial(m)
    }

    pub fn degree(&self) -> u32 {
        self.0.values().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn powers(&self) -> impl Iterator<Item = (&str, u32)> {
        self.0.iter().map(|(v, e)| (v.as_str(), *e))
    }

    pub fn exponent(&self, var: &str) -> u32 {
        self.0.get(var).copied().unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut m = self.0.clone();
        for (v, e) in &other.0 {
            *m.entry(v.clone()).or_insert(0) += e;
        }
        Monomial(m)
    }

    /// Variables with multiplicity, e.g. `x^2 y` -> `[x, x, y]`, ordered by
    /// `order` (unknown names last, by name).
    pub fn factors(&self, order: &[String]) -> Vec<String> {
        let mut vars: Vec<(&String, u32)> = self.0.iter().map(|(v, e)| (v, *e)).collect();
        vars.sort_by_key(|(v, _)| (position(order, v), (*v).clone()));
        vars.into_iter().flat_map(|(v, e)| std::iter::repeat_n(v.clone(), e as usize)).collect()
    }
}

fn position(order: &[String], v: &str) -> usize {
    order.iter().position(|o| o == v).unwrap_or(usize::MAX)
}

/// Polynomial with coefficients in `C`; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial<C> {
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coefficient> Default for Polynomial<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coefficient> Polynomial<C> {
    pub fn zero() -> Self {
        Polynomial { terms: BTreeMap::new() }
    }

    pub fn constant(c: C) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn var(name: &str) -> Self {
        Self::term(C::one(), Monomial::var(name))
    }

    pub fn term(c: C, m: Monomial) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn constant_term(&self) -> C {
        self.coefficient(&Monomial::one())
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.degree() == 0
    }

    pub fn variables(&self) -> BTreeSet<String> {
        self.terms.keys().flat_map(|m| m.0.keys().cloned()).collect()
    }

    pub fn add_term(&mut self, m: Monomial, c: C) {
        let next = match self.terms.remove(&m) {
            Some(old) => old + c,
            None => c,
        };
        if !next.is_zero() {
            self.terms.insert(m, next);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Polynomial { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1.clone() * c2.clone());
            }
        }
        out
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero();
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v.clone() * c.clone());
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::constant(C::one());
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Replaces each variable in `map` by a polynomial.
    pub fn substitute(&self, map: &HashMap<String, Polynomial<C>>) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut acc = Self::constant(c.clone());
            let mut kept = Vec::new();
            for (v, e) in m.powers() {
                match map.get(v) {
                    Some(p) => acc = acc.mul(&p.pow(e)),
                    None => kept.push((v.to_string(), e)),
                }
            }
            acc = acc.mul(&Self::term(C::one(), Monomial::from_powers(kept)));
            out = out.add(&acc);
        }
        out
    }

    pub fn map_coefficients<D: Coefficient>(&self, mut f: impl FnMut(&C) -> D) -> Polynomial<D> {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    pub fn try_map_coefficients<D: Coefficient, E>(
        &self,
        mut f: impl FnMut(&C) -> std::result::Result<D, E>,
    ) -> std::result::Result<Polynomial<D>, E> {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c)?);
        }
        Ok(out)
    }

    /// Terms in graded-lex order (highest degree first) with respect to the
    /// variable order `order`; the order used by the printer and compilers.
    pub fn ordered_terms(&self, order: &[String]) -> Vec<(&Monomial, &C)> {
        let mut keyed: Vec<(Vec<u32>, &Monomial, &C)> =
            self.terms.iter().map(|(m, c)| (grlex_key(m, order), m, c)).collect();
        keyed.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(b.1)));
        keyed.into_iter().map(|(_, m, c)| (m, c)).collect()
    }

    /// Canonical text: monomials in graded-lex order with respect to the
    /// variable order `order`.
    pub fn to_text(&self, order: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (n, (m, c)) in self.ordered_terms(order).into_iter().enumerate() {
            let negative = c.is_negative_hint();
            let magnitude = if negative { -c.clone() } else { c.clone() };
            match (n, negative) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            if m.is_one() {
                let _ = write!(out, "{magnitude}");
            } else {
                if !magnitude.is_one() {
                    let _ = write!(out, "{magnitude}*");
                }
                out.push_str(&monomial_text(m, order));
            }
        }
        out
    }
}

impl<T: Scalar> Polynomial<T> {
    /// Evaluates with every variable assigned; missing variables are an
    /// error.
    pub fn eval(&self, assignment: &HashMap<String, T>) -> Result<T> {
        let mut total = T::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (var, e) in m.powers() {
                let x = assignment.get(var).ok_or_else(|| Error::UndeclaredVariable(var.to_string()))?;
                for _ in 0..e {
                    v = v * x.clone();
                }
            }
            total = total + v;
        }
        Ok(total)
    }
}

impl Polynomial<ConstExpr> {
    pub fn materialize(&self) -> Result<Polynomial<BigInt>> {
        self.try_map_coefficients(ConstExpr::materialize)
    }
}

fn grlex_key(m: &Monomial, order: &[String]) -> Vec<u32> {
    let mut key = Vec::with_capacity(order.len() + 1);
    key.push(m.degree());
    key.extend(order.iter().map(|v| m.exponent(v)));
    key
}

fn monomial_text(m: &Monomial, order: &[String]) -> String {
    let mut vars: Vec<(&str, u32)> = m.powers().collect();
    vars.sort_by_key(|(v, _)| (position(order, v), v.to_string()));
    vars.iter().map(|(v, e)| if *e == 1 { v.to_string() } else { format!("{v}^{e}") }).collect::<Vec<_>>().join("*")
}

/// `lhs = rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct Equation<C> {
    pub lhs: Polynomial<C>,
    pub rhs: Polynomial<C>,
}

impl<C: Coefficient> Equation<C> {
    pub fn new(lhs: Polynomial<C>, rhs: Polynomial<C>) -> Self {
        Equation { lhs, rhs }
    }

    /// `lhs - rhs`, whose zero set is the equation's solution set.
    pub fn residual(&self) -> Polynomial<C> {
        self.lhs.sub(&self.rhs)
    }

    pub fn degree(&self) -> u32 {
        self.residual().degree()
    }

    pub fn variables(&self) -> BTreeSet<String> {
        let mut v = self.lhs.variables();
        v.extend(self.rhs.variables());
        v
    }

    pub fn map_coefficients<D: Coefficient>(&self, mut f: impl FnMut(&C) -> D) -> Equation<D> {
        Equation { lhs: self.lhs.map_coefficients(&mut f), rhs: self.rhs.map_coefficients(&mut f) }
    }

    pub fn to_text(&self, order: &[String]) -> String {
        format!("{} = {}", self.lhs.to_text(order), self.rhs.to_text(order))
    }
}

impl<T: Scalar> Equation<T> {
    pub fn holds(&self, assignment: &HashMap<String, T>) -> Result<bool> {
        Ok(self.residual().eval(assignment)?.is_zero())
    }
}

/// Finite system of polynomial equations over declared integer variables.
#[derive(Debug, Clone, PartialEq)]
pub struct DiophantineSystem<C> {
    pub variables: Vec<String>,
    pub equations: Vec<Equation<C>>,
    /// Free-form provenance notes, kept through serialization.
    pub notes: Vec<String>,
}

impl<C: Coefficient> DiophantineSystem<C> {
    pub fn new(variables: Vec<String>, equations: Vec<Equation<C>>) -> Result<Self> {
        let sys = DiophantineSystem { variables, equations, notes: Vec::new() };
        sys.validate()?;
        Ok(sys)
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        for v in &self.variables {
            if !seen.insert(v.as_str()) {
                return Err(Error::DuplicateVariable(v.clone()));
            }
        }
        for eq in &self.equations {
            for v in eq.variables() {
                if !seen.contains(v.as_str()) {
                    return Err(Error::UndeclaredVariable(v));
                }
            }
        }
        Ok(())
    }

    pub fn max_degree(&self) -> u32 {
        self.equations.iter().map(Equation::degree).max().unwrap_or(0)
    }

    /// A name starting with `base` that is not yet declared.
    pub fn fresh_name(&self, base: &str) -> String {
        (1..).map(|n| format!("{base}{n}")).find(|c| !self.variables.contains(c)).expect("unbounded supply of names")
    }

    pub fn map_coefficients<D: Coefficient>(&self, mut f: impl FnMut(&C) -> D) -> DiophantineSystem<D> {
        DiophantineSystem {
            variables: self.variables.clone(),
            equations: self.equations.iter().map(|e| e.map_coefficients(&mut f)).collect(),
            notes: self.notes.clone(),
        }
    }

    /// Canonical text form; see the `format` module for the grammar.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for n in &self.notes {
            let _ = writeln!(out, "# {n}");
        }
        let _ = writeln!(out, "vars: {}", self.variables.join(" "));
        for eq in &self.equations {
            let _ = writeln!(out, "eq: {}", eq.to_text(&self.variables));
        }
        out
    }
}

impl<T: Scalar> DiophantineSystem<T> {
    pub fn is_satisfied_by(&self, assignment: &HashMap<String, T>) -> Result<bool> {
        for eq in &self.equations {
            if !eq.holds(assignment)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn to_const(&self) -> DiophantineSystem<ConstExpr> {
        self.map_coefficients(|c| ConstExpr::Lit(c.to_bigint()))
    }
}

impl DiophantineSystem<ConstExpr> {
    pub fn materialize(&self) -> Result<DiophantineSystem<BigInt>> {
        let mut equations = Vec::with_capacity(self.equations.len());
        for eq in &self.equations {
            equations.push(Equation { lhs: eq.lhs.materialize()?, rhs: eq.rhs.materialize()? });
        }
        Ok(DiophantineSystem { variables: self.variables.clone(), equations, notes: self.notes.clone() })
    }
}
