//! Random generators and brute-force oracles shared by the integration
//! tests.
#![allow(dead_code)]

use std::collections::HashMap;

use nilkp::group::{KpInstance, NormalForm, Word};
use nilkp::poly::{DiophantineSystem, Equation, Monomial, Polynomial};
use nilkp::BigInt;
use num_bigint::Sign;
use num_traits::ToPrimitive;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn random_word(rng: &mut impl Rng, rank: usize, max_len: usize) -> Word<BigInt> {
    let len = rng.gen_range(0..=max_len);
    let letters: Vec<(usize, BigInt)> =
        (0..len).map(|_| (rng.gen_range(1..=rank), int(if rng.gen_bool(0.5) { 1 } else { -1 }))).collect();
    Word::new(rank, letters).unwrap()
}

pub fn random_normal_form(rng: &mut impl Rng, rank: usize, spread: i64) -> NormalForm<BigInt> {
    let alpha = (0..rank).map(|_| int(rng.gen_range(-spread..=spread))).collect();
    let mut beta = Vec::new();
    for i in 1..=rank {
        for j in i + 1..=rank {
            beta.push(((i, j), int(rng.gen_range(-spread..=spread))));
        }
    }
    NormalForm::from_parts(rank, alpha, beta).unwrap()
}

/// Product `g_1^{e_1} .. g_k^{e_k}` computed letter by letter on spelled
/// words, independently of the normal-form multiplication.
pub fn product_by_words(instance: &KpInstance<BigInt>, eps: &[BigInt]) -> NormalForm<BigInt> {
    let mut word = Word::empty(instance.rank);
    for (g, e) in instance.inputs.iter().zip(eps) {
        let spelled = g.spell();
        let n = e.magnitude().to_usize().unwrap();
        let piece = if e.sign() == Sign::Minus { spelled.inverse() } else { spelled };
        for _ in 0..n {
            word = word.concat(&piece).unwrap();
        }
    }
    nilkp::reduce_word(&word)
}

/// Random instance whose target is hit by some exponent vector in
/// `[-reach, reach]^k` about half of the time.
pub fn random_instance(rng: &mut impl Rng, rank: usize, k: usize, reach: i64) -> KpInstance<BigInt> {
    let inputs: Vec<NormalForm<BigInt>> = (0..k).map(|_| random_normal_form(rng, rank, 2)).collect();
    let target = if rng.gen_bool(0.5) {
        let eps: Vec<BigInt> = (0..k).map(|_| int(rng.gen_range(-reach..=reach))).collect();
        inputs.iter().zip(&eps).fold(NormalForm::identity(rank), |acc, (g, e)| acc.multiply(&g.power(e)).unwrap())
    } else {
        random_normal_form(rng, rank, 3)
    };
    KpInstance::new(rank, inputs, target).unwrap()
}

/// Random system of degree at most 2 with coefficients in `[-c, c]`.
pub fn random_quadratic_system(rng: &mut impl Rng, nvars: usize, neqs: usize, c: i64) -> DiophantineSystem<BigInt> {
    let names: Vec<String> = ["x", "y", "z", "w"][..nvars].iter().map(|s| s.to_string()).collect();
    let mut monomials = vec![Monomial::one()];
    for (i, a) in names.iter().enumerate() {
        monomials.push(Monomial::var(a));
        for b in &names[i..] {
            monomials.push(Monomial::var(a).mul(&Monomial::var(b)));
        }
    }
    let equations = (0..neqs)
        .map(|_| {
            let mut lhs = Polynomial::zero();
            for m in &monomials {
                if m.degree() > 0 && rng.gen_bool(0.4) {
                    lhs.add_term(m.clone(), int(rng.gen_range(-c..=c)));
                }
            }
            let rhs = Polynomial::constant(int(rng.gen_range(-c * 3..=c * 3)));
            Equation::new(lhs, rhs)
        })
        .collect();
    DiophantineSystem::new(names, equations).unwrap()
}

/// Every point of `[-bound, bound]^dim` in lexicographic order.
pub fn box_points(dim: usize, bound: i64) -> impl Iterator<Item = Vec<BigInt>> {
    let width = (2 * bound + 1) as u64;
    let total = width.pow(dim as u32);
    (0..total).map(move |mut n| {
        let mut p = vec![int(0); dim];
        for slot in p.iter_mut().rev() {
            *slot = int((n % width) as i64 - bound);
            n /= width;
        }
        p
    })
}

pub fn assignment(names: &[String], values: &[BigInt]) -> HashMap<String, BigInt> {
    names.iter().cloned().zip(values.iter().cloned()).collect()
}

/// Least solution in the box by plain enumeration.
pub fn brute_force_system(system: &DiophantineSystem<BigInt>, bound: i64) -> Option<Vec<BigInt>> {
    box_points(system.variables.len(), bound)
        .find(|p| system.is_satisfied_by(&assignment(&system.variables, p)).unwrap())
}
