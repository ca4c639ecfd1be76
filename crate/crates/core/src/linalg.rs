//! Exact linear algebra over `Q`.
//!
//! Elimination is fraction free: each row is cleared of denominators and the
//! Bareiss update `(p * a_ij - a_ic * a_rj) / p_prev` keeps every entry an
//! integer minor of the input. Pivots are chosen deterministically (leftmost
//! column, then smallest row index), so bases come out identical on every run.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::scalar::{reduce_mod, Scalar};

/// Mersenne prime used for the modular full-rank certificate.
pub const CERT_PRIME: u64 = (1 << 61) - 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

/// Result of a fraction-free elimination.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub rows: Vec<Vec<BigInt>>,
    pub pivots: Vec<usize>,
    /// Common value of every pivot entry after a full (Gauss-Jordan) pass.
    pub scale: BigInt,
}

/// Nullspace basis indexed by free columns: basis vector `i` has a `1` at
/// `free[i]` and `0` at every other free column.
#[derive(Clone, Debug)]
pub struct Nullspace {
    pub basis: Vec<Vec<Scalar>>,
    pub pivots: Vec<usize>,
    pub free: Vec<usize>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>, cols: usize) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix");
            data.extend(r);
        }
        Matrix { rows: n, cols, data }
    }

    /// Builds a matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(columns: &[Vec<Scalar>], rows: usize) -> Self {
        let mut m = Matrix::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "ragged matrix");
            for (i, x) in col.iter().enumerate() {
                m.data[i * m.cols + j] = x.clone();
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Scalar) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Scalar::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| integerize(self.row(i))).collect()
    }

    pub fn echelon(&self, reduce_above: bool) -> Echelon {
        bareiss(self.integer_rows(), self.cols, reduce_above)
    }

    /// Exact rank. A full-rank verdict modulo a large prime is a certificate
    /// (reduction mod `p` can only lower the rank); otherwise falls back to
    /// fraction-free elimination over `Q`.
    pub fn rank(&self) -> usize {
        let full = self.rows.min(self.cols);
        if full == 0 {
            return 0;
        }
        if self.rank_mod(CERT_PRIME) == Some(full) {
            return full;
        }
        self.echelon(false).pivots.len()
    }

    /// Rank over `F_p`; `None` when some denominator vanishes mod `p`.
    pub fn rank_mod(&self, p: u64) -> Option<usize> {
        let mut a: Vec<Vec<u64>> = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let row: Option<Vec<u64>> = self.row(i).iter().map(|q| reduce_mod(q, p)).collect();
            a.push(row?);
        }
        Some(rank_mod_rows(a, self.cols, p))
    }

    /// Columns chosen greedily left to right that span the column space.
    pub fn pivot_columns(&self) -> Vec<usize> {
        self.echelon(false).pivots
    }

    pub fn nullspace(&self) -> Nullspace {
        let ech = self.echelon(true);
        let mut is_pivot = vec![false; self.cols];
        for &c in &ech.pivots {
            is_pivot[c] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let scale = Scalar::from_integer(ech.scale.clone());
        let basis = free
            .iter()
            .map(|&f| {
                let mut v = vec![Scalar::zero(); self.cols];
                v[f] = Scalar::one();
                for (row, &pc) in ech.rows.iter().zip(&ech.pivots) {
                    if !row[f].is_zero() {
                        v[pc] = -Scalar::from_integer(row[f].clone()) / &scale;
                    }
                }
                v
            })
            .collect();
        Nullspace { basis, pivots: ech.pivots, free }
    }
}

/// Multiplies a rational row by the lcm of its denominators.
pub fn integerize(row: &[Scalar]) -> Vec<BigInt> {
    let l = row
        .iter()
        .filter(|q| !q.is_zero())
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    row.iter().map(|q| q.numer() * (&l / q.denom())).collect()
}

/// Fraction-free elimination. With `reduce_above` every pivot column is
/// cleared in all other rows and all pivots end equal to `scale`.
pub fn bareiss(mut a: Vec<Vec<BigInt>>, ncols: usize, reduce_above: bool) -> Echelon {
    let m = a.len();
    let mut prev = BigInt::one();
    let mut r = 0;
    let mut pivots = Vec::new();
    for c in 0..ncols {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let piv = a[r][c].clone();
        let (head, tail) = a.split_at_mut(r);
        let (pivot_row, below) = tail.split_first_mut().unwrap();
        let update = |row: &mut Vec<BigInt>| {
            let f = row[c].clone();
            for (x, pr) in row.iter_mut().zip(pivot_row.iter()) {
                if x.is_zero() && (f.is_zero() || pr.is_zero()) {
                    continue;
                }
                let num = &piv * &*x - &f * pr;
                let (q, rem) = num.div_rem(&prev);
                debug_assert!(rem.is_zero(), "inexact fraction-free division");
                *x = q;
            }
        };
        below.iter_mut().for_each(update);
        if reduce_above {
            head.iter_mut().for_each(update);
        }
        prev = piv;
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    Echelon { rows: a, pivots, scale: prev }
}

pub fn rank_mod_rows(mut a: Vec<Vec<u64>>, ncols: usize, p: u64) -> usize {
    use crate::scalar::{invmod, mulmod};
    let m = a.len();
    let mut r = 0;
    for c in 0..ncols {
        if r == m {
            break;
        }
        let Some(pi) = (r..m).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, pi);
        let inv = invmod(a[r][c], p);
        let pivot_row: Vec<u64> = a[r].iter().map(|&x| mulmod(x, inv, p)).collect();
        for row in a.iter_mut().skip(r + 1) {
            let f = row[c];
            if f == 0 {
                continue;
            }
            for (x, &y) in row.iter_mut().zip(&pivot_row) {
                *x = (*x + p - mulmod(f, y, p)) % p;
            }
        }
        r += 1;
    }
    r
}

/// Incrementally built echelon basis of a subspace of `Q^n`.
#[derive(Clone, Debug, Default)]
pub struct EchelonBasis {
    vectors: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl EchelonBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    /// Reduces `v` against the basis; returns the residue.
    pub fn reduce(&self, mut v: Vec<Scalar>) -> Vec<Scalar> {
        for (b, &p) in self.vectors.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let f = v[p].clone();
            for (x, y) in v.iter_mut().zip(b) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v.to_vec()).iter().all(Zero::is_zero)
    }

    /// Adds `v` if independent of the current span; returns whether it was added.
    pub fn insert(&mut self, v: Vec<Scalar>) -> bool {
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[p].recip();
        for x in v.iter_mut() {
            *x *= &inv;
        }
        self.vectors.push(v);
        self.pivots.push(p);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    fn m(rows: &[&[i64]]) -> Matrix {
        let cols = rows[0].len();
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect(), cols)
    }

    #[test]
    fn rank_of_dependent_rows() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        assert_eq!(a.echelon(false).pivots.len(), 2);
        assert_eq!(a.rank_mod(1_000_003), Some(2));
        assert_eq!(Matrix::zeros(3, 0).rank(), 0);
    }

    #[test]
    fn nullspace_is_annihilated() {
        let a = Matrix::from_rows(
            vec![
                vec![int(1), ratio(1, 2), int(0), int(3)],
                vec![int(2), int(1), int(1), int(0)],
            ],
            4,
        );
        let ns = a.nullspace();
        assert_eq!(ns.basis.len(), 2);
        for v in &ns.basis {
            assert!(a.mul_vec(v).iter().all(Zero::is_zero));
        }
        for (i, &f) in ns.free.iter().enumerate() {
            for (j, &g) in ns.free.iter().enumerate() {
                let want = if i == j { int(1) } else { int(0) };
                assert_eq!(ns.basis[i][g], want, "free coordinate {f}");
            }
        }
    }

    #[test]
    fn echelon_basis_tracks_span() {
        let mut e = EchelonBasis::new();
        assert!(e.insert(vec![int(1), int(1), int(0)]));
        assert!(e.insert(vec![int(0), int(1), int(1)]));
        assert!(!e.insert(vec![int(1), int(2), int(1)]));
        assert!(e.contains(&[int(2), int(3), int(1)]));
        assert!(e.insert(vec![int(0), int(0), int(5)]));
        assert_eq!(e.dim(), 3);
    }

    #[test]
    fn modular_rank_can_drop() {
        let a = m(&[&[1, 0], &[0, 7]]);
        assert_eq!(a.rank_mod(7), Some(1));
        assert_eq!(a.rank(), 2);
    }
}
