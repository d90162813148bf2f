//! Knapsack instance -> Diophantine system, by evaluating
//! `g_1^{e_1} .. g_k^{e_k}` with the exponents kept as unknowns.
//!
//! The product is accumulated left to right. Appending `h = g_i^{e_i}` adds
//! `e_i * alpha(g_i)` to the generator forms and, for every pair `p < q`,
//!
//! ```text
//! e_i * beta_pq(g_i) - C(e_i, 2) * a_p(g_i) a_q(g_i) - A_q * e_i a_p(g_i)
//! ```
//!
//! to the commutator forms, where `A_q` is the generator form accumulated so
//! far. `C(e, 2) = (e^2 - e) / 2` is why the commutator forms live over the
//! rationals; [`kp_to_system`] clears the denominator.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::group::KpInstance;
use crate::poly::{DiophantineSystem, Equation, Monomial, Polynomial};
use crate::scalar::Scalar;

/// `sum_v c_v v + constant`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearForm<T> {
    pub coefficients: BTreeMap<String, T>,
    pub constant: T,
}

/// `sum_{u<=v} q_uv u v + linear`, pair keys ordered by name.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticPolynomial<T> {
    pub quadratic: BTreeMap<(String, String), T>,
    pub linear: LinearForm<T>,
}

impl<T: Scalar> LinearForm<T> {
    pub fn eval(&self, env: &HashMap<String, T>) -> T {
        self.coefficients
            .iter()
            .fold(self.constant.clone(), |acc, (v, c)| acc + c.clone() * env.get(v).cloned().unwrap_or_else(T::zero))
    }
}

impl<T: crate::scalar::Coefficient> LinearForm<T> {
    pub fn to_polynomial(&self) -> Polynomial<T> {
        let mut p = Polynomial::constant(self.constant.clone());
        for (v, c) in &self.coefficients {
            p.add_term(Monomial::var(v), c.clone());
        }
        p
    }

    fn from_polynomial(p: &Polynomial<T>) -> Self {
        let mut coefficients = BTreeMap::new();
        let mut constant = T::zero();
        for (m, c) in p.terms() {
            match m.degree() {
                0 => constant = c.clone(),
                1 => {
                    let (v, _) = m.powers().next().expect("degree one");
                    coefficients.insert(v.to_string(), c.clone());
                }
                d => panic!("linear form built from a degree-{d} term"),
            }
        }
        LinearForm { coefficients, constant }
    }
}

impl<T: crate::scalar::Coefficient> QuadraticPolynomial<T> {
    pub fn to_polynomial(&self) -> Polynomial<T> {
        let mut p = self.linear.to_polynomial();
        for ((u, v), c) in &self.quadratic {
            p.add_term(Monomial::var(u).mul(&Monomial::var(v)), c.clone());
        }
        p
    }

    fn from_polynomial(p: &Polynomial<T>) -> Self {
        let mut quadratic = BTreeMap::new();
        let mut rest = Polynomial::zero();
        for (m, c) in p.terms() {
            if m.degree() == 2 {
                let vars: Vec<String> = m.factors(&[]);
                quadratic.insert((vars[0].clone(), vars[1].clone()), c.clone());
            } else {
                rest.add_term(m.clone(), c.clone());
            }
        }
        QuadraticPolynomial { quadratic, linear: LinearForm::from_polynomial(&rest) }
    }
}

impl QuadraticPolynomial<BigRational> {
    pub fn eval(&self, env: &HashMap<String, BigInt>) -> BigRational {
        let get = |v: &String| BigRational::from_integer(env.get(v).cloned().unwrap_or_default());
        let mut total = self.linear.constant.clone();
        for (v, c) in &self.linear.coefficients {
            total += c * get(v);
        }
        for ((u, v), c) in &self.quadratic {
            total += c * get(u) * get(v);
        }
        total
    }
}

/// Symbolic value of `g_1^{e_1} .. g_k^{e_k}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolicProduct {
    /// Exponent of `x_i` at index `i - 1`.
    pub generators: Vec<LinearForm<BigInt>>,
    /// Exponent of `[x_p, x_q]`; pairs whose form vanishes are omitted.
    pub commutators: BTreeMap<(usize, usize), QuadraticPolynomial<BigRational>>,
}

/// Name of the exponent variable for input `slot` (0-based): `e1`, `e2`, ...
pub fn exponent_name(slot: usize) -> String {
    format!("e{}", slot + 1)
}

pub fn symbolic_evaluate<T: Scalar>(instance: &KpInstance<T>) -> SymbolicProduct {
    type Q = BigRational;
    let n = instance.rank;
    let q = |v: &T| Q::from_integer(v.to_bigint());
    let half = Q::new(BigInt::one(), BigInt::from(2));

    let mut gens: Vec<Polynomial<Q>> = vec![Polynomial::zero(); n];
    let mut comms: BTreeMap<(usize, usize), Polynomial<Q>> = BTreeMap::new();

    for (slot, g) in instance.inputs.iter().enumerate() {
        let e = Polynomial::<Q>::var(&exponent_name(slot));
        let binom = e.mul(&e).sub(&e).scale(&half);
        let support: Vec<usize> = (1..=n).filter(|&p| !g.alpha_of(p).is_zero()).collect();

        for (&(p, r), b) in g.beta() {
            let entry = comms.entry((p, r)).or_default();
            *entry = entry.add(&e.scale(&q(b)));
        }
        for (ix, &p) in support.iter().enumerate() {
            for &r in &support[ix + 1..] {
                let c = q(g.alpha_of(p)) * q(g.alpha_of(r));
                let entry = comms.entry((p, r)).or_default();
                *entry = entry.sub(&binom.scale(&c));
            }
        }
        // cross terms against what has been accumulated so far
        for &p in &support {
            let hp = e.scale(&q(g.alpha_of(p)));
            for r in p + 1..=n {
                if gens[r - 1].is_zero() {
                    continue;
                }
                let entry = comms.entry((p, r)).or_default();
                *entry = entry.sub(&gens[r - 1].mul(&hp));
            }
        }
        for &p in &support {
            gens[p - 1] = gens[p - 1].add(&e.scale(&q(g.alpha_of(p))));
        }
    }

    SymbolicProduct {
        generators: gens.iter().map(|p| LinearForm::from_polynomial(&p.map_coefficients(|c| c.to_integer()))).collect(),
        commutators: comms
            .into_iter()
            .filter(|(_, p)| !p.is_zero())
            .map(|(k, p)| (k, QuadraticPolynomial::from_polynomial(&p)))
            .collect(),
    }
}

/// The derived system, split by origin: one linear equation per generator
/// and one (at most quadratic) equation per basic commutator.
#[derive(Debug, Clone, PartialEq)]
pub struct Derivation {
    pub variables: Vec<String>,
    pub generator_equations: Vec<(usize, Equation<BigInt>)>,
    pub commutator_equations: Vec<((usize, usize), Equation<BigInt>)>,
}

impl Derivation {
    pub fn system(&self) -> DiophantineSystem<BigInt> {
        DiophantineSystem {
            variables: self.variables.clone(),
            equations: self
                .generator_equations
                .iter()
                .map(|(_, e)| e.clone())
                .chain(self.commutator_equations.iter().map(|(_, e)| e.clone()))
                .collect(),
            notes: Vec::new(),
        }
    }
}

pub fn derive<T: Scalar>(instance: &KpInstance<T>) -> Derivation {
    let sym = symbolic_evaluate(instance);
    let variables = (0..instance.inputs.len()).map(exponent_name).collect();

    let mut generator_equations = Vec::new();
    for (ix, form) in sym.generators.iter().enumerate() {
        let target = instance.target.alpha()[ix].to_bigint();
        let lhs = form.to_polynomial();
        if lhs.is_zero() && target.is_zero() {
            continue;
        }
        generator_equations.push((ix + 1, Equation::new(lhs, Polynomial::constant(target))));
    }

    let mut keys: Vec<(usize, usize)> = sym.commutators.keys().copied().collect();
    keys.extend(instance.target.beta().keys().copied());
    keys.sort_unstable();
    keys.dedup();

    let mut commutator_equations = Vec::new();
    for key in keys {
        let target = instance.target.beta_of(key.0, key.1).to_bigint();
        let lhs = sym.commutators.get(&key).map(QuadraticPolynomial::to_polynomial).unwrap_or_default();
        let scale = lhs.terms().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
        let lhs = lhs.map_coefficients(|c| (c * BigRational::from_integer(scale.clone())).to_integer());
        commutator_equations.push((key, Equation::new(lhs, Polynomial::constant(target * scale))));
    }

    Derivation { variables, generator_equations, commutator_equations }
}

/// Equivalent Diophantine system over `e1 .. ek`: `e` satisfies it iff
/// `g_1^{e_1} .. g_k^{e_k}` equals the target.
pub fn kp_to_system<T: Scalar>(instance: &KpInstance<T>) -> DiophantineSystem<BigInt> {
    derive(instance).system()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::NormalForm;

    type Nf = NormalForm<BigInt>;

    fn gen(rank: usize, i: usize) -> Nf {
        Nf::generator(rank, i).unwrap()
    }

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn swapped_generators() {
        let inst = KpInstance::new(2, vec![gen(2, 2), gen(2, 1)], Nf::identity(2)).unwrap();
        let sym = symbolic_evaluate(&inst);
        assert_eq!(sym.generators[0].to_polynomial(), Polynomial::var("e2"));
        assert_eq!(sym.generators[1].to_polynomial(), Polynomial::var("e1"));
        let c = sym.commutators[&(1, 2)].to_polynomial();
        let expected = Polynomial::term(-BigRational::one(), Monomial::var("e1").mul(&Monomial::var("e2")));
        assert_eq!(c, expected);
    }

    #[test]
    fn commuting_letters_have_no_quadratic_part() {
        let inst = KpInstance::new(2, vec![gen(2, 1), gen(2, 1)], Nf::identity(2)).unwrap();
        let sym = symbolic_evaluate(&inst);
        assert_eq!(sym.generators[0].to_polynomial(), Polynomial::var("e1").add(&Polynomial::var("e2")));
        assert!(sym.commutators.is_empty());
    }

    #[test]
    fn empty_instance() {
        let inst = KpInstance::new(3, vec![], Nf::identity(3)).unwrap();
        let sym = symbolic_evaluate(&inst);
        assert!(sym.generators.iter().all(|f| f.to_polynomial().is_zero()));
        assert!(sym.commutators.is_empty());
        assert!(kp_to_system(&inst).equations.is_empty());
    }

    #[test]
    fn derived_system_text() {
        let target = Nf::from_parts(2, vec![b(2), b(3)], [((1, 2), b(-6))]).unwrap();
        let inst = KpInstance::new(2, vec![gen(2, 2), gen(2, 1)], target).unwrap();
        let sys = kp_to_system(&inst);
        assert_eq!(sys.to_text(), "vars: e1 e2\neq: e2 = 2\neq: e1 = 3\neq: -e1*e2 = -6\n");
        let env = HashMap::from([("e1".into(), b(3)), ("e2".into(), b(2))]);
        assert!(sys.is_satisfied_by(&env).unwrap());
    }

    #[test]
    fn unreachable_commutator_kept_as_contradiction() {
        let target = Nf::commutator_power(2, 1, 2, b(1)).unwrap();
        let inst = KpInstance::new(2, vec![gen(2, 1), gen(2, 2)], target).unwrap();
        let sys = kp_to_system(&inst);
        assert_eq!(sys.to_text(), "vars: e1 e2\neq: e1 = 0\neq: e2 = 0\neq: 0 = 1\n");
    }

    #[test]
    fn self_commutator_needs_half_integers() {
        // (x1 x2)^e = x1^e x2^e [x1,x2]^{-(e^2-e)/2}
        let g = Nf::from_parts(2, vec![b(1), b(1)], []).unwrap();
        let inst = KpInstance::new(2, vec![g], Nf::identity(2)).unwrap();
        let sym = symbolic_evaluate(&inst);
        let poly = &sym.commutators[&(1, 2)];
        for e in -4..=4 {
            let env = HashMap::from([("e1".to_string(), b(e))]);
            let (nf, _) = inst.evaluate(&[b(e)]).unwrap();
            assert_eq!(poly.eval(&env), BigRational::from_integer(nf.beta_of(1, 2)));
        }
        let sys = kp_to_system(&inst);
        assert_eq!(sys.equations[2].to_text(&sys.variables), "-e1^2 + e1 = 0");
    }
}
