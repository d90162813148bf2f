//! Exact arithmetic in the free nilpotent group of class 2 and rank `n`.
//!
//! Every element has a unique normal form
//!
//! ```text
//! x_1^{a_1} ... x_n^{a_n} * prod_{i<j} [x_i, x_j]^{b_ij}
//! ```
//!
//! with `[x, y] = x^-1 y^-1 x y`. Words are collected into this form with the
//! rewriting rule `y x = x y [x, y]^-1`; commutators are central, so the
//! commutator part is accumulated separately from the generator part.
//!
//! Generator indices are 1-based throughout, matching the `x1 .. xn` text
//! syntax.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{Coefficient, Scalar};

/// A generator index `i` raised to a nonzero exponent.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Letter<T> {
    pub generator: usize,
    pub exponent: T,
}

/// Finite word over `x_1^{±1} .. x_n^{±1}`, letters carrying integer exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word<T> {
    rank: usize,
    letters: Vec<Letter<T>>,
}

impl<T: Coefficient> Word<T> {
    /// Builds a word, dropping zero-exponent letters.
    pub fn new(rank: usize, letters: impl IntoIterator<Item = (usize, T)>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::ZeroRank);
        }
        let mut out = Vec::new();
        for (generator, exponent) in letters {
            if generator == 0 || generator > rank {
                return Err(Error::IndexOutOfRange { index: generator, rank });
            }
            if !exponent.is_zero() {
                out.push(Letter { generator, exponent });
            }
        }
        Ok(Word { rank, letters: out })
    }

    pub fn empty(rank: usize) -> Self {
        Word { rank, letters: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[Letter<T>] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &Word<T>) -> Result<Word<T>> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch(self.rank, other.rank));
        }
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().cloned());
        Ok(Word { rank: self.rank, letters })
    }

    /// Formal inverse: letters reversed with negated exponents.
    pub fn inverse(&self) -> Word<T> {
        let letters = self
            .letters
            .iter()
            .rev()
            .map(|l| Letter { generator: l.generator, exponent: -l.exponent.clone() })
            .collect();
        Word { rank: self.rank, letters }
    }
}

/// Unique normal form of an element of the free class-2 nilpotent group.
///
/// `beta` is keyed by `(i, j)` with `1 <= i < j <= rank` and never holds zero
/// entries, so structural equality decides the word problem.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NormalForm<T> {
    rank: usize,
    alpha: Vec<T>,
    beta: BTreeMap<(usize, usize), T>,
}

impl<T: Coefficient> NormalForm<T> {
    pub fn identity(rank: usize) -> Self {
        NormalForm { rank, alpha: vec![T::zero(); rank], beta: BTreeMap::new() }
    }

    /// The generator `x_i`.
    pub fn generator(rank: usize, i: usize) -> Result<Self> {
        Self::generator_power(rank, i, T::one())
    }

    pub fn generator_power(rank: usize, i: usize, e: T) -> Result<Self> {
        check_index(i, rank)?;
        let mut nf = Self::identity(rank);
        nf.alpha[i - 1] = e;
        Ok(nf)
    }

    /// The basic commutator `[x_i, x_j]` raised to `e`. Reversed indices store
    /// the negated exponent on `(j, i)`.
    pub fn commutator_power(rank: usize, i: usize, j: usize, e: T) -> Result<Self> {
        check_index(i, rank)?;
        check_index(j, rank)?;
        let mut nf = Self::identity(rank);
        if i != j {
            nf.add_beta((i, j), e);
        }
        Ok(nf)
    }

    /// Builds a normal form from raw exponents, dropping zero commutator
    /// entries. Keys with `i > j` are folded onto `(j, i)` with negated sign.
    pub fn from_parts(rank: usize, alpha: Vec<T>, beta: impl IntoIterator<Item = ((usize, usize), T)>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::ZeroRank);
        }
        if alpha.len() != rank {
            return Err(Error::LengthMismatch { expected: rank, got: alpha.len() });
        }
        let mut nf = NormalForm { rank, alpha, beta: BTreeMap::new() };
        for ((i, j), e) in beta {
            check_index(i, rank)?;
            check_index(j, rank)?;
            if i == j {
                return Err(Error::Invariant(format!("commutator key ({i},{i}) is not basic")));
            }
            nf.add_beta((i, j), e);
        }
        Ok(nf)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Generator exponents, `alpha()[i - 1]` belonging to `x_i`.
    pub fn alpha(&self) -> &[T] {
        &self.alpha
    }

    pub fn alpha_of(&self, i: usize) -> &T {
        &self.alpha[i - 1]
    }

    pub fn beta(&self) -> &BTreeMap<(usize, usize), T> {
        &self.beta
    }

    /// Exponent of `[x_i, x_j]`, `i < j`; zero when absent.
    pub fn beta_of(&self, i: usize, j: usize) -> T {
        self.beta.get(&(i, j)).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_identity(&self) -> bool {
        self.beta.is_empty() && self.alpha.iter().all(|a| a.is_zero())
    }

    /// True when the element lies in the derived subgroup.
    pub fn is_central(&self) -> bool {
        self.alpha.iter().all(|a| a.is_zero())
    }

    pub(crate) fn add_alpha(&mut self, i: usize, e: T) {
        let slot = &mut self.alpha[i - 1];
        *slot = slot.clone() + e;
    }

    pub(crate) fn add_beta(&mut self, (i, j): (usize, usize), e: T) {
        let (key, e) = if i < j { ((i, j), e) } else { ((j, i), -e) };
        let next = match self.beta.remove(&key) {
            Some(old) => old + e,
            None => e,
        };
        if !next.is_zero() {
            self.beta.insert(key, next);
        }
    }

    /// Applies `f` to every exponent, renormalizing zeros away.
    pub fn map<U: Coefficient>(&self, mut f: impl FnMut(&T) -> U) -> NormalForm<U> {
        let mut out = NormalForm::identity(self.rank);
        for (i, a) in self.alpha.iter().enumerate() {
            out.alpha[i] = f(a);
        }
        for (&k, b) in &self.beta {
            out.add_beta(k, f(b));
        }
        out
    }

    pub fn try_map<U: Coefficient, E>(
        &self,
        mut f: impl FnMut(&T) -> std::result::Result<U, E>,
    ) -> std::result::Result<NormalForm<U>, E> {
        let mut out = NormalForm::identity(self.rank);
        for (i, a) in self.alpha.iter().enumerate() {
            out.alpha[i] = f(a)?;
        }
        for (&k, b) in &self.beta {
            out.add_beta(k, f(b)?);
        }
        Ok(out)
    }

    /// Embeds into a group of larger rank (same generators, more of them).
    pub fn widen(&self, rank: usize) -> NormalForm<T> {
        assert!(rank >= self.rank);
        let mut out = self.clone();
        out.alpha.resize(rank, T::zero());
        out.rank = rank;
        out
    }

    /// Spells the canonical word: `x_1^{a_1} .. x_n^{a_n}` followed by each
    /// `[x_i, x_j]` in lexicographic order, written out letter by letter
    /// `|b_ij|` times. Meant for small commutator exponents.
    pub fn spell(&self) -> Word<T>
    where
        T: Scalar,
    {
        let mut letters = Vec::new();
        for (i, a) in self.alpha.iter().enumerate() {
            if !a.is_zero() {
                letters.push(Letter { generator: i + 1, exponent: a.clone() });
            }
        }
        let one = T::one();
        for (&(i, j), b) in &self.beta {
            let block: [(usize, T); 4] = if b.is_positive() {
                [(i, -one.clone()), (j, -one.clone()), (i, one.clone()), (j, one.clone())]
            } else {
                [(j, -one.clone()), (i, -one.clone()), (j, one.clone()), (i, one.clone())]
            };
            let mut count = b.abs();
            while !count.is_zero() {
                letters.extend(block.iter().map(|(g, e)| Letter { generator: *g, exponent: e.clone() }));
                count = count - T::one();
            }
        }
        Word { rank: self.rank, letters }
    }
}

impl<T: Scalar> NormalForm<T> {
    /// Appends `x_i^e` on the right and re-collects.
    fn push_letter(&mut self, i: usize, e: &T) {
        // moving x_i^e left past x_q^{a_q} for q > i contributes [x_i, x_q]^{-a_q e}
        for q in i + 1..=self.rank {
            let aq = &self.alpha[q - 1];
            if !aq.is_zero() {
                let delta = -(aq.clone() * e.clone());
                self.add_beta((i, q), delta);
            }
        }
        self.add_alpha(i, e.clone());
    }

    /// Group product `self * other`.
    pub fn multiply(&self, other: &NormalForm<T>) -> Result<NormalForm<T>> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch(self.rank, other.rank));
        }
        let mut out = self.clone();
        for (&k, b) in &other.beta {
            out.add_beta(k, b.clone());
        }
        for (p, e) in other.alpha.iter().enumerate() {
            if !e.is_zero() {
                out.push_letter(p + 1, e);
            }
        }
        Ok(out)
    }

    pub fn inverse(&self) -> NormalForm<T> {
        // (x^a C)^-1 = C^-1 x^-a; collecting x^-a contributes -a_i a_j on (i, j)
        let mut out = NormalForm::identity(self.rank);
        for (i, a) in self.alpha.iter().enumerate() {
            out.alpha[i] = -a.clone();
        }
        for (&k, b) in &self.beta {
            out.add_beta(k, -b.clone());
        }
        for i in 1..=self.rank {
            let ai = &self.alpha[i - 1];
            if ai.is_zero() {
                continue;
            }
            for j in i + 1..=self.rank {
                let aj = &self.alpha[j - 1];
                if !aj.is_zero() {
                    out.add_beta((i, j), -(ai.clone() * aj.clone()));
                }
            }
        }
        out
    }

    /// `self^e` by square-and-multiply; negative exponents go through the
    /// inverse.
    pub fn power(&self, e: &T) -> NormalForm<T> {
        let (mut base, mut e) = if e.is_negative() { (self.inverse(), -e.clone()) } else { (self.clone(), e.clone()) };
        let two = T::one() + T::one();
        let mut acc = NormalForm::identity(self.rank);
        while !e.is_zero() {
            let (q, r) = e.div_rem(&two);
            if !r.is_zero() {
                acc = acc.multiply(&base).expect("same rank");
            }
            e = q;
            if !e.is_zero() {
                base = base.multiply(&base).expect("same rank");
            }
        }
        acc
    }

    /// `[a, b] = a^-1 b^-1 a b`.
    pub fn commutator(&self, other: &NormalForm<T>) -> Result<NormalForm<T>> {
        let left = self.inverse().multiply(&other.inverse())?;
        left.multiply(&self.multiply(other)?)
    }

    /// Collects a word into normal form, one letter at a time.
    pub fn reduce_word(word: &Word<T>) -> NormalForm<T> {
        let mut nf = NormalForm::identity(word.rank);
        for l in &word.letters {
            nf.push_letter(l.generator, &l.exponent);
        }
        nf
    }
}

pub fn reduce_word<T: Scalar>(word: &Word<T>) -> NormalForm<T> {
    NormalForm::reduce_word(word)
}

fn check_index(i: usize, rank: usize) -> Result<()> {
    if i == 0 || i > rank {
        Err(Error::IndexOutOfRange { index: i, rank })
    } else {
        Ok(())
    }
}

fn write_token<T: Coefficient>(f: &mut fmt::Formatter<'_>, token: &str, e: &T) -> fmt::Result {
    if e.is_one() {
        write!(f, "{token}")
    } else {
        write!(f, "{token}^{e}")
    }
}

/// Canonical text: `x1^2 x2^3 c1,2^-6`, or `1` for the identity.
impl<T: Coefficient> fmt::Display for NormalForm<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut sep = |f: &mut fmt::Formatter<'_>| {
            if first {
                first = false;
                Ok(())
            } else {
                write!(f, " ")
            }
        };
        for (i, a) in self.alpha.iter().enumerate() {
            if !a.is_zero() {
                sep(f)?;
                write_token(f, &format!("x{}", i + 1), a)?;
            }
        }
        for (&(i, j), b) in &self.beta {
            sep(f)?;
            write_token(f, &format!("c{i},{j}"), b)?;
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

impl<T: Coefficient> fmt::Display for Word<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (n, l) in self.letters.iter().enumerate() {
            if n > 0 {
                write!(f, " ")?;
            }
            write_token(f, &format!("x{}", l.generator), &l.exponent)?;
        }
        Ok(())
    }
}

/// Binding of a system variable to a KP exponent slot. A negated binding means
/// the slot holds minus the variable's value.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VarBinding {
    pub name: String,
    pub slot: usize,
    pub negated: bool,
}

/// Inputs `g_1 .. g_k` and target `g` of a knapsack instance
/// `g_1^{e_1} .. g_k^{e_k} = g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KpInstance<T> {
    pub rank: usize,
    pub inputs: Vec<NormalForm<T>>,
    pub target: NormalForm<T>,
    pub variable_map: Vec<VarBinding>,
}

impl<T: Coefficient> KpInstance<T> {
    pub fn new(rank: usize, inputs: Vec<NormalForm<T>>, target: NormalForm<T>) -> Result<Self> {
        let inst = KpInstance { rank, inputs, target, variable_map: Vec::new() };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<()> {
        if self.rank == 0 {
            return Err(Error::ZeroRank);
        }
        for g in self.inputs.iter().chain(std::iter::once(&self.target)) {
            if g.rank() != self.rank {
                return Err(Error::RankMismatch(self.rank, g.rank()));
            }
        }
        for b in &self.variable_map {
            if b.slot >= self.inputs.len() {
                return Err(Error::IndexOutOfRange { index: b.slot + 1, rank: self.inputs.len() });
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.inputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inputs.is_empty()
    }

    pub fn binding(&self, name: &str) -> Option<&VarBinding> {
        self.variable_map.iter().find(|b| b.name == name)
    }

    pub fn map<U: Coefficient>(&self, mut f: impl FnMut(&T) -> U) -> KpInstance<U> {
        KpInstance {
            rank: self.rank,
            inputs: self.inputs.iter().map(|g| g.map(&mut f)).collect(),
            target: self.target.map(&mut f),
            variable_map: self.variable_map.clone(),
        }
    }

    pub fn try_map<U: Coefficient, E>(
        &self,
        mut f: impl FnMut(&T) -> std::result::Result<U, E>,
    ) -> std::result::Result<KpInstance<U>, E> {
        let mut inputs = Vec::with_capacity(self.inputs.len());
        for g in &self.inputs {
            inputs.push(g.try_map(&mut f)?);
        }
        Ok(KpInstance {
            rank: self.rank,
            inputs,
            target: self.target.try_map(&mut f)?,
            variable_map: self.variable_map.clone(),
        })
    }
}

impl<T: Scalar> KpInstance<T> {
    /// Computes `g_1^{e_1} .. g_k^{e_k}` and whether it equals the target.
    pub fn evaluate(&self, eps: &[T]) -> Result<(NormalForm<T>, bool)> {
        if eps.len() != self.inputs.len() {
            return Err(Error::LengthMismatch { expected: self.inputs.len(), got: eps.len() });
        }
        let mut acc = NormalForm::identity(self.rank);
        for (g, e) in self.inputs.iter().zip(eps) {
            acc = acc.multiply(&g.power(e))?;
        }
        let hit = acc == self.target;
        Ok((acc, hit))
    }
}

pub fn evaluate_kp<T: Scalar>(instance: &KpInstance<T>, eps: &[T]) -> Result<(NormalForm<T>, bool)> {
    instance.evaluate(eps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    type Nf = NormalForm<BigInt>;

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn word(rank: usize, letters: &[(usize, i64)]) -> Word<BigInt> {
        Word::new(rank, letters.iter().map(|&(g, e)| (g, b(e)))).unwrap()
    }

    fn nf(rank: usize, alpha: &[i64], beta: &[((usize, usize), i64)]) -> Nf {
        Nf::from_parts(rank, alpha.iter().map(|&a| b(a)).collect(), beta.iter().map(|&(k, e)| (k, b(e)))).unwrap()
    }

    fn x(rank: usize, i: usize) -> Nf {
        Nf::generator(rank, i).unwrap()
    }

    #[test]
    fn swap_produces_inverse_commutator() {
        assert_eq!(reduce_word(&word(2, &[(2, 1), (1, 1)])), nf(2, &[1, 1], &[((1, 2), -1)]));
    }

    #[test]
    fn cancellation() {
        assert!(reduce_word(&word(2, &[(1, 1), (1, -1)])).is_identity());
    }

    #[test]
    fn conjugated_power() {
        let w = word(2, &[(1, 2), (2, 3), (1, -2)]);
        assert_eq!(reduce_word(&w), nf(2, &[0, 3], &[((1, 2), 6)]));
    }

    #[test]
    fn zero_letters_dropped_and_bad_index_rejected() {
        assert!(word(3, &[(1, 0), (2, 0)]).is_empty());
        assert_eq!(Word::new(2, [(3usize, b(1))]).unwrap_err(), Error::IndexOutOfRange { index: 3, rank: 2 });
    }

    #[test]
    fn multiply_examples() {
        assert_eq!(x(2, 1).multiply(&x(2, 2)).unwrap(), nf(2, &[1, 1], &[]));
        assert_eq!(x(2, 2).multiply(&x(2, 1)).unwrap(), nf(2, &[1, 1], &[((1, 2), -1)]));
        assert_eq!(x(2, 1).multiply(&x(3, 1)).unwrap_err(), Error::RankMismatch(2, 3));
    }

    #[test]
    fn inverse_examples() {
        assert!(Nf::identity(3).inverse().is_identity());
        assert_eq!(x(2, 1).inverse(), nf(2, &[-1, 0], &[]));
        // x1 x2 * (x1^-1 x2^-1 [x1,x2]^-1) = [x1^-1, x2^-1] [x1,x2]^-1 = 1
        let g = nf(2, &[1, 1], &[]);
        assert_eq!(g.inverse(), nf(2, &[-1, -1], &[((1, 2), -1)]));
    }

    #[test]
    fn power_examples() {
        let g = nf(3, &[1, -2, 4], &[((1, 3), 5)]);
        assert!(g.power(&b(0)).is_identity());
        assert_eq!(x(2, 1).power(&b(5)), nf(2, &[5, 0], &[]));
        let xy = reduce_word(&word(2, &[(1, 1), (2, 1)]));
        let thrice = xy.multiply(&xy).unwrap().multiply(&xy).unwrap();
        assert_eq!(xy.power(&b(3)), thrice);
        // (x1 x2)^3 = x1^3 x2^3 [x1,x2]^{-3}
        assert_eq!(thrice, nf(2, &[3, 3], &[((1, 2), -3)]));
    }

    #[test]
    fn commutator_examples() {
        assert_eq!(x(2, 1).commutator(&x(2, 2)).unwrap(), nf(2, &[0, 0], &[((1, 2), 1)]));
        let a = x(2, 1).power(&b(2));
        let c = x(2, 2).power(&b(3));
        assert_eq!(a.commutator(&c).unwrap(), nf(2, &[0, 0], &[((1, 2), 6)]));
        let g = nf(3, &[2, -1, 1], &[((2, 3), 4)]);
        assert!(g.commutator(&g).unwrap().is_identity());
    }

    #[test]
    fn reversed_commutator_key_is_negated() {
        let c = Nf::commutator_power(3, 3, 1, b(2)).unwrap();
        assert_eq!(c, nf(3, &[0, 0, 0], &[((1, 3), -2)]));
    }

    #[test]
    fn evaluate_examples() {
        let inst = KpInstance::new(2, vec![x(2, 1), x(2, 2)], reduce_word(&word(2, &[(1, 1), (2, 1)]))).unwrap();
        assert!(inst.evaluate(&[b(1), b(1)]).unwrap().1);
        assert!(!inst.evaluate(&[b(0), b(0)]).unwrap().1);

        let inst = KpInstance::new(2, vec![x(2, 2), x(2, 1)], nf(2, &[2, 3], &[((1, 2), -6)])).unwrap();
        assert!(inst.evaluate(&[b(3), b(2)]).unwrap().1);
        assert_eq!(inst.evaluate(&[b(1)]).unwrap_err(), Error::LengthMismatch { expected: 2, got: 1 });
    }

    #[test]
    fn display_is_canonical() {
        assert_eq!(nf(2, &[2, 3], &[((1, 2), -6)]).to_string(), "x1^2 x2^3 c1,2^-6");
        assert_eq!(Nf::identity(4).to_string(), "1");
    }

    #[test]
    fn fixed_width_scalar_agrees() {
        let w: Word<i64> = Word::new(3, [(2, 3), (1, -2), (3, 1), (2, -1)]).unwrap();
        let wb = word(3, &[(2, 3), (1, -2), (3, 1), (2, -1)]);
        let small = reduce_word(&w);
        assert_eq!(small.map(|v| BigInt::from(*v)), reduce_word(&wb));
    }
}
