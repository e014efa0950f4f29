//! Square band matrices and an LU solve with partial pivoting.

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum SolveError {
    #[error("dimension mismatch: matrix is {n}x{n}, right-hand side has {rhs}")]
    Dimension { n: usize, rhs: usize },
    #[error("matrix is singular or ill-conditioned at pivot {row}")]
    Singular { row: usize },
    #[error("solution is not finite")]
    NonFinite,
}

/// Pivots smaller than this times the largest entry count as singular.
const PIVOT_TOL: f64 = 1e-14;

/// `n x n` matrix with `lower` sub- and `upper` super-diagonals.
///
/// Row `i` stores columns `i - lower ..= i + upper + lower`; the extra
/// `lower` slots hold the fill-in created by row interchanges.
#[derive(Debug, Clone, PartialEq)]
pub struct BandMatrix {
    n: usize,
    lower: usize,
    upper: usize,
    width: usize,
    data: Vec<f64>,
}

impl BandMatrix {
    pub fn zeros(n: usize, lower: usize, upper: usize) -> Self {
        let width = 2 * lower + upper + 1;
        BandMatrix {
            n,
            lower,
            upper,
            width,
            data: vec![0.0; n * width],
        }
    }

    pub fn identity(n: usize, lower: usize, upper: usize) -> Self {
        let mut m = Self::zeros(n, lower, upper);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn lower(&self) -> usize {
        self.lower
    }

    pub fn upper(&self) -> usize {
        self.upper
    }

    #[inline]
    fn slot(&self, i: usize, j: usize) -> Option<usize> {
        if j + self.lower < i || j > i + self.upper + self.lower || j >= self.n {
            return None;
        }
        Some(i * self.width + (j + self.lower - i))
    }

    /// Entry `(i, j)`; zero outside the stored band.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.slot(i, j).map_or(0.0, |k| self.data[k])
    }

    /// Sets entry `(i, j)`. Panics outside the declared band.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        assert!(
            j + self.lower >= i && j <= i + self.upper && j < self.n,
            "entry ({i}, {j}) outside band"
        );
        let k = self.slot(i, j).unwrap();
        self.data[k] = value;
    }

    #[inline]
    pub fn add(&mut self, i: usize, j: usize, value: f64) {
        let v = self.get(i, j);
        self.set(i, j, v + value);
    }

    fn col_range(&self, i: usize) -> core::ops::Range<usize> {
        i.saturating_sub(self.lower)..(i + self.upper + 1).min(self.n)
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        (0..self.n)
            .map(|i| self.col_range(i).map(|j| self.get(i, j) * x[j]).sum())
            .collect()
    }

    /// Product of two band matrices; bandwidths add.
    pub fn mul(&self, other: &BandMatrix) -> BandMatrix {
        assert_eq!(self.n, other.n);
        let mut out = BandMatrix::zeros(self.n, self.lower + other.lower, self.upper + other.upper);
        for i in 0..self.n {
            for k in self.col_range(i) {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in other.col_range(k) {
                    out.add(i, j, a * other.get(k, j));
                }
            }
        }
        out
    }

    /// Multiplies every entry by `factor`.
    pub fn scale(&mut self, factor: f64) {
        for v in &mut self.data {
            *v *= factor;
        }
    }

    /// Left-multiplies by a diagonal matrix.
    pub fn scale_rows(&mut self, d: &[f64]) {
        assert_eq!(d.len(), self.n);
        for (row, &s) in self.data.chunks_mut(self.width).zip(d) {
            for v in row {
                *v *= s;
            }
        }
    }

    /// Solves `A x = b` by banded Gaussian elimination with partial pivoting.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>, SolveError> {
        let n = self.n;
        if b.len() != n {
            return Err(SolveError::Dimension { n, rhs: b.len() });
        }
        let scale = self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if scale == 0.0 || !scale.is_finite() {
            return Err(SolveError::Singular { row: 0 });
        }
        let mut lu = self.clone();
        let mut x = b.to_vec();
        let span = self.lower + self.upper;

        for i in 0..n {
            let last_row = (i + self.lower).min(n - 1);
            let mut p = i;
            let mut best = lu.get(i, i).abs();
            for r in i + 1..=last_row {
                let v = lu.get(r, i).abs();
                if v > best {
                    best = v;
                    p = r;
                }
            }
            if !(best > PIVOT_TOL * scale) {
                return Err(SolveError::Singular { row: i });
            }
            let last_col = (i + span).min(n - 1);
            if p != i {
                for c in i..=last_col {
                    let (a, b) = (lu.slot(i, c).unwrap(), lu.slot(p, c).unwrap());
                    lu.data.swap(a, b);
                }
                x.swap(i, p);
            }
            let pivot = lu.get(i, i);
            for r in i + 1..=last_row {
                let f = lu.get(r, i) / pivot;
                if f == 0.0 {
                    continue;
                }
                let k = lu.slot(r, i).unwrap();
                lu.data[k] = 0.0;
                for c in i + 1..=last_col {
                    let v = lu.get(i, c);
                    if v != 0.0 {
                        let k = lu.slot(r, c).unwrap();
                        lu.data[k] -= f * v;
                    }
                }
                x[r] -= f * x[i];
            }
        }
        for i in (0..n).rev() {
            let last_col = (i + span).min(n - 1);
            let mut acc = x[i];
            for c in i + 1..=last_col {
                acc -= lu.get(i, c) * x[c];
            }
            x[i] = acc / lu.get(i, i);
        }
        if x.iter().all(|v| v.is_finite()) {
            Ok(x)
        } else {
            Err(SolveError::NonFinite)
        }
    }
}
