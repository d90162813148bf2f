//! Exact integer linear algebra: column echelon form by unimodular column
//! operations, and the general integer solution of `A x = b`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// `A U = H` with `U` unimodular and `H` in column echelon form: the first
/// `pivots.len()` columns have strictly increasing pivot rows with zeros
/// above each pivot and a positive pivot, and the remaining columns are zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnEchelon {
    pub h: Vec<Vec<BigInt>>,
    pub u: Vec<Vec<BigInt>>,
    pub pivots: Vec<usize>,
}

impl ColumnEchelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Column `j` of `U`.
    pub fn u_column(&self, j: usize) -> Vec<BigInt> {
        self.u.iter().map(|row| row[j].clone()).collect()
    }
}

fn swap_columns(m: &mut [Vec<BigInt>], a: usize, b: usize) {
    for row in m {
        row.swap(a, b);
    }
}

/// `col[dst] -= q * col[src]`.
fn sub_column(m: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
    for row in m {
        let delta = q * &row[src];
        row[dst] -= delta;
    }
}

fn negate_column(m: &mut [Vec<BigInt>], c: usize) {
    for row in m {
        row[c] = -std::mem::take(&mut row[c]);
    }
}

/// Column echelon form of the `rows x cols` matrix `a`.
pub fn column_echelon(a: &[Vec<BigInt>], cols: usize) -> ColumnEchelon {
    let mut h: Vec<Vec<BigInt>> = a.to_vec();
    let mut u: Vec<Vec<BigInt>> =
        (0..cols).map(|i| (0..cols).map(|j| BigInt::from((i == j) as u8)).collect()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for i in 0..h.len() {
        if r == cols {
            break;
        }
        loop {
            let best = (r..cols).filter(|&j| !h[i][j].is_zero()).min_by_key(|&j| h[i][j].abs());
            let Some(best) = best else { break };
            swap_columns(&mut h, r, best);
            swap_columns(&mut u, r, best);
            let mut done = true;
            for j in r + 1..cols {
                if h[i][j].is_zero() {
                    continue;
                }
                let q = h[i][j].div_floor(&h[i][r]);
                sub_column(&mut h, j, r, &q);
                sub_column(&mut u, j, r, &q);
                done &= h[i][j].is_zero();
            }
            if done {
                break;
            }
        }
        if !h[i][r].is_zero() {
            if h[i][r].is_negative() {
                negate_column(&mut h, r);
                negate_column(&mut u, r);
            }
            pivots.push(i);
            r += 1;
        }
    }
    ColumnEchelon { h, u, pivots }
}

/// Integer solutions of `A x = b`: `particular + kernel * t` for integer `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSolution {
    pub particular: Vec<BigInt>,
    /// Basis vectors of the integer kernel, as columns in column echelon
    /// form.
    pub kernel: Vec<Vec<BigInt>>,
}

impl LinearSolution {
    /// `particular + sum_j t_j kernel_j`.
    pub fn point(&self, t: &[BigInt]) -> Vec<BigInt> {
        let mut x = self.particular.clone();
        for (k, tj) in self.kernel.iter().zip(t) {
            for (xi, ki) in x.iter_mut().zip(k) {
                *xi += ki * tj;
            }
        }
        x
    }
}

/// General integer solution of `A x = b`, `None` when there is none.
pub fn solve_linear(a: &[Vec<BigInt>], b: &[BigInt], cols: usize) -> Option<LinearSolution> {
    let ech = column_echelon(a, cols);
    let r = ech.rank();
    let mut y: Vec<BigInt> = Vec::with_capacity(r);
    for (k, &row) in ech.pivots.iter().enumerate() {
        let rest: BigInt = (0..k).map(|j| &ech.h[row][j] * &y[j]).sum();
        let (q, rem) = (&b[row] - rest).div_rem(&ech.h[row][k]);
        if !rem.is_zero() {
            return None;
        }
        y.push(q);
    }
    for (row, bi) in ech.h.iter().zip(b) {
        let lhs: BigInt = (0..r).map(|j| &row[j] * &y[j]).sum();
        if &lhs != bi {
            return None;
        }
    }
    let particular = (0..cols).map(|i| (0..r).map(|j| &ech.u[i][j] * &y[j]).sum()).collect();
    let raw: Vec<Vec<BigInt>> = (0..cols).map(|i| ech.u[i][r..].to_vec()).collect();
    let basis = column_echelon(&raw, cols - r);
    let kernel = (0..cols - r).map(|j| basis.h.iter().map(|row| row[j].clone()).collect()).collect();
    Some(LinearSolution { particular, kernel })
}
