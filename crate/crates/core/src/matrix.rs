//! Faithful representation of the free class-2 nilpotent group of rank `n`
//! into upper unitriangular integer matrices of size `2n + 1`.
//!
//! Generator `x_i` maps to `I + E(i, n+1) + E(n+1, n+1+i)` (1-based). With
//! `N_i = E(i, n+1) + E(n+1, n+1+i)` one has `N_i N_j = E(i, n+1+j)`, so
//!
//! ```text
//! [rho(x_i), rho(x_j)] = I + E(i, n+1+j) - E(j, n+1+i)
//! ```
//!
//! which is central and nontrivial for `i != j`. Decoding reads `alpha_i`
//! from entry `(i, n+1)` and `beta_ij` from entry `(i, n+1+j)` of the central
//! residual.
//!
//! The matrix routines here are plain dense arithmetic and do not use the
//! group's collection formulas, which is what makes them usable as an oracle.

use std::fmt;

use crate::error::{Error, Result};
use crate::group::{NormalForm, Word};
use crate::scalar::Scalar;

/// Square upper unitriangular matrix, entries row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UnitriangularMatrix<T> {
    dim: usize,
    entries: Vec<T>,
}

impl<T: Scalar> UnitriangularMatrix<T> {
    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![T::zero(); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = T::one();
        }
        UnitriangularMatrix { dim, entries }
    }

    /// Builds from rows, checking the unit diagonal and zero lower triangle.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != dim {
                return Err(Error::NotInImage(format!("row {} has length {}, expected {dim}", i + 1, row.len())));
            }
            for (j, v) in row.iter().enumerate() {
                let ok = match j.cmp(&i) {
                    std::cmp::Ordering::Less => v.is_zero(),
                    std::cmp::Ordering::Equal => v.is_one(),
                    std::cmp::Ordering::Greater => true,
                };
                if !ok {
                    return Err(Error::NotInImage(format!("entry ({}, {}) breaks unitriangularity", i + 1, j + 1)));
                }
            }
            entries.extend(row);
        }
        Ok(UnitriangularMatrix { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Entry at 1-based `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.entries[(i - 1) * self.dim + (j - 1)]
    }

    fn set(&mut self, i: usize, j: usize, v: T) {
        self.entries[(i - 1) * self.dim + (j - 1)] = v;
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        self.entries.chunks(self.dim.max(1))
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.dim)
    }

    pub fn multiply(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matrix dimensions differ");
        let n = self.dim;
        let mut out = vec![T::zero(); n * n];
        for i in 0..n {
            for k in i..n {
                let a = &self.entries[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in k..n {
                    let b = &other.entries[k * n + j];
                    if !b.is_zero() {
                        out[i * n + j] = out[i * n + j].clone() + a.clone() * b.clone();
                    }
                }
            }
        }
        UnitriangularMatrix { dim: n, entries: out }
    }

    /// Exact inverse by back substitution (unit diagonal, so no division).
    pub fn inverse(&self) -> Self {
        let n = self.dim;
        let mut inv = Self::identity(n);
        // column by column: solve self * x = e_col with x upper unitriangular
        for col in 0..n {
            for row in (0..col).rev() {
                let mut s = T::zero();
                for k in row + 1..=col {
                    let a = &self.entries[row * n + k];
                    if !a.is_zero() {
                        s = s + a.clone() * inv.entries[k * n + col].clone();
                    }
                }
                inv.entries[row * n + col] = -s;
            }
        }
        inv
    }

    pub fn pow(&self, e: &T) -> Self {
        let (mut base, mut e) = if e.is_negative() { (self.inverse(), -e.clone()) } else { (self.clone(), e.clone()) };
        let two = T::one() + T::one();
        let mut acc = Self::identity(self.dim);
        while !e.is_zero() {
            let (q, r) = e.div_rem(&two);
            if !r.is_zero() {
                acc = acc.multiply(&base);
            }
            e = q;
            if !e.is_zero() {
                base = base.multiply(&base);
            }
        }
        acc
    }

    /// `a^-1 b^-1 a b`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.inverse().multiply(&other.inverse()).multiply(&self.multiply(other))
    }
}

/// Image of the generator `x_i` in rank `n`.
pub fn rho_generator<T: Scalar>(i: usize, n: usize) -> Result<UnitriangularMatrix<T>> {
    if n == 0 {
        return Err(Error::ZeroRank);
    }
    if i == 0 || i > n {
        return Err(Error::IndexOutOfRange { index: i, rank: n });
    }
    let mut m = UnitriangularMatrix::identity(2 * n + 1);
    m.set(i, n + 1, T::one());
    m.set(n + 1, n + 1 + i, T::one());
    Ok(m)
}

/// Product of generator images along the word; negative exponents use
/// matrix inverses.
pub fn rho_word<T: Scalar>(word: &Word<T>) -> UnitriangularMatrix<T> {
    let n = word.rank();
    let gens: Vec<UnitriangularMatrix<T>> = (1..=n).map(|i| rho_generator(i, n).expect("index in range")).collect();
    word.letters()
        .iter()
        .fold(UnitriangularMatrix::identity(2 * n + 1), |acc, l| acc.multiply(&gens[l.generator - 1].pow(&l.exponent)))
}

/// Image of a normal form: `rho(x_1)^{a_1} .. rho(x_n)^{a_n}` times the
/// commutator images `[rho(x_i), rho(x_j)]^{b_ij}`.
pub fn rho_normal_form<T: Scalar>(nf: &NormalForm<T>) -> UnitriangularMatrix<T> {
    let n = nf.rank();
    let gens: Vec<UnitriangularMatrix<T>> = (1..=n).map(|i| rho_generator(i, n).expect("index in range")).collect();
    let mut acc = UnitriangularMatrix::identity(2 * n + 1);
    for (i, a) in nf.alpha().iter().enumerate() {
        if !a.is_zero() {
            acc = acc.multiply(&gens[i].pow(a));
        }
    }
    for (&(i, j), b) in nf.beta() {
        acc = acc.multiply(&gens[i - 1].commutator(&gens[j - 1]).pow(b));
    }
    acc
}

/// Inverse of the embedding on its image.
pub fn matrix_to_normal_form<T: Scalar>(m: &UnitriangularMatrix<T>, n: usize) -> Result<NormalForm<T>> {
    if n == 0 {
        return Err(Error::ZeroRank);
    }
    if m.dim() != 2 * n + 1 {
        return Err(Error::NotInImage(format!("dimension {} is not 2*{n}+1", m.dim())));
    }
    let alpha: Vec<T> = (1..=n).map(|i| m.get(i, n + 1).clone()).collect();
    let head = NormalForm::from_parts(n, alpha, [])?;
    let residual = rho_normal_form(&head).inverse().multiply(m);
    let beta = (1..=n)
        .flat_map(|i| (i + 1..=n).map(move |j| (i, j)))
        .map(|(i, j)| ((i, j), residual.get(i, n + 1 + j).clone()));
    let nf = NormalForm::from_parts(n, head.alpha().to_vec(), beta)?;
    if rho_normal_form(&nf) != *m {
        return Err(Error::NotInImage("entries outside the image pattern".into()));
    }
    Ok(nf)
}

/// Whitespace-separated integer rows.
impl<T: Scalar> fmt::Display for UnitriangularMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::reduce_word;

    type M = UnitriangularMatrix<i64>;

    fn with_ones(dim: usize, ones: &[(usize, usize)]) -> M {
        let mut m = M::identity(dim);
        for &(i, j) in ones {
            m.set(i, j, 1);
        }
        m
    }

    #[test]
    fn generator_images() {
        assert_eq!(rho_generator::<i64>(1, 2).unwrap(), with_ones(5, &[(1, 3), (3, 4)]));
        assert_eq!(rho_generator::<i64>(2, 2).unwrap(), with_ones(5, &[(2, 3), (3, 5)]));
        assert_eq!(rho_generator::<i64>(3, 2).unwrap_err(), Error::IndexOutOfRange { index: 3, rank: 2 });
        assert!(rho_word(&Word::<i64>::empty(3)).is_identity());
    }

    #[test]
    fn inverse_letters_cancel() {
        let w = Word::<i64>::new(2, [(1, 1), (1, -1)]).unwrap();
        assert!(rho_word(&w).is_identity());
    }

    #[test]
    fn commutator_relations() {
        let m: Vec<M> = (1..=3).map(|i| rho_generator(i, 3).unwrap()).collect();
        let c12 = m[0].commutator(&m[1]);
        assert!(!c12.is_identity());
        assert_eq!(c12, m[1].commutator(&m[0]).inverse());
        assert!(c12.commutator(&m[2]).is_identity());
    }

    #[test]
    fn decode_matches_collection() {
        let w = Word::<i64>::new(2, [(2, 1), (1, 1)]).unwrap();
        let nf = matrix_to_normal_form(&rho_word(&w), 2).unwrap();
        assert_eq!(nf, reduce_word(&w));
        assert_eq!(nf.beta_of(1, 2), -1);

        let a = NormalForm::<i64>::generator_power(2, 1, 2).unwrap();
        let b = NormalForm::<i64>::generator_power(2, 2, 3).unwrap();
        let c = a.commutator(&b).unwrap();
        let decoded = matrix_to_normal_form(&rho_word(&c.spell()), 2).unwrap();
        assert_eq!(decoded.beta_of(1, 2), 6);
    }

    #[test]
    fn identity_decodes_to_identity() {
        assert!(matrix_to_normal_form(&M::identity(7), 3).unwrap().is_identity());
    }

    #[test]
    fn decode_rejects_foreign_matrices() {
        // entry (1, 2) is never touched by the embedding
        let m = with_ones(5, &[(1, 2)]);
        assert!(matches!(matrix_to_normal_form(&m, 2), Err(Error::NotInImage(_))));
        assert!(matches!(matrix_to_normal_form(&M::identity(4), 2), Err(Error::NotInImage(_))));
        assert!(M::from_rows(vec![vec![1, 0], vec![1, 1]]).is_err());
    }

    #[test]
    fn inverse_and_power() {
        let m = rho_normal_form(&NormalForm::<i64>::from_parts(3, vec![2, -1, 3], [((1, 3), 4)]).unwrap());
        assert!(m.multiply(&m.inverse()).is_identity());
        assert_eq!(m.pow(&3), m.multiply(&m).multiply(&m));
        assert_eq!(m.pow(&-2), m.inverse().multiply(&m.inverse()));
    }
}
