//! Sparse symmetric operators and a banded Cholesky factorisation.

use super::NumericsError;

/// Anything that can apply a symmetric linear map.
pub trait SymmetricOperator: Sync {
    fn dim(&self) -> usize;
    /// `y = A x`.
    fn apply(&self, x: &[f64], y: &mut [f64]);
}

/// Symmetric matrix in CSR form. Built from the upper triangle only, so
/// symmetry holds by construction.
#[derive(Debug, Clone)]
pub struct SparseSymOperator {
    dim: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl SparseSymOperator {
    /// Entries are `(row, col, value)` with `row <= col`; duplicates add.
    pub fn from_upper_triplets(
        dim: usize,
        entries: &[(usize, usize, f64)],
    ) -> Result<Self, NumericsError> {
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); dim];
        for &(i, j, v) in entries {
            if i > j || j >= dim {
                return Err(NumericsError::BadEntry { row: i, col: j });
            }
            if !v.is_finite() {
                return Err(NumericsError::NonFinite { at: v });
            }
            rows[i].push((j, v));
            if i != j {
                rows[j].push((i, v));
            }
        }
        let mut row_ptr = Vec::with_capacity(dim + 1);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0);
        for row in &mut rows {
            row.sort_by_key(|e| e.0);
            let mut last: Option<usize> = None;
            for &(j, v) in row.iter() {
                if last == Some(j) {
                    *values.last_mut().expect("previous entry exists") += v;
                } else {
                    col_idx.push(j);
                    values.push(v);
                    last = Some(j);
                }
            }
            row_ptr.push(col_idx.len());
        }
        Ok(Self {
            dim,
            row_ptr,
            col_idx,
            values,
        })
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Largest `|i - j|` over stored entries.
    pub fn bandwidth(&self) -> usize {
        (0..self.dim)
            .flat_map(|i| {
                self.col_idx[self.row_ptr[i]..self.row_ptr[i + 1]]
                    .iter()
                    .map(move |&j| j.abs_diff(i))
            })
            .max()
            .unwrap_or(0)
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.row_ptr[i]..self.row_ptr[i + 1];
        self.col_idx[span.clone()]
            .iter()
            .copied()
            .zip(self.values[span].iter().copied())
    }
}

impl SymmetricOperator for SparseSymOperator {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            let mut acc = 0.0;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += self.values[k] * x[self.col_idx[k]];
            }
            *yi = acc;
        }
    }
}

/// `A = L Lᵀ` for a symmetric positive definite banded matrix.
#[derive(Debug, Clone)]
pub struct BandedCholesky {
    dim: usize,
    band: usize,
    // Row i holds L[i][i-band..=i], left padded.
    lower: Vec<f64>,
}

impl BandedCholesky {
    pub fn factor(a: &SparseSymOperator) -> Result<Self, NumericsError> {
        let n = a.dim;
        let b = a.bandwidth();
        let w = b + 1;
        let mut l = vec![0.0; n * w];
        for i in 0..n {
            for (j, v) in a.row(i) {
                if j <= i {
                    l[i * w + (j + b - i)] = v;
                }
            }
        }
        for i in 0..n {
            let j0 = i.saturating_sub(b);
            for j in j0..=i {
                let mut sum = l[i * w + (j + b - i)];
                let k0 = j0.max(j.saturating_sub(b));
                for k in k0..j {
                    sum -= l[i * w + (k + b - i)] * l[j * w + (k + b - j)];
                }
                if j == i {
                    if !(sum > 0.0) {
                        return Err(NumericsError::NotPositiveDefinite { row: i });
                    }
                    l[i * w + b] = sum.sqrt();
                } else {
                    l[i * w + (j + b - i)] = sum / l[j * w + b];
                }
            }
        }
        Ok(Self {
            dim: n,
            band: b,
            lower: l,
        })
    }

    pub fn solve(&self, rhs: &[f64], out: &mut [f64]) {
        let (n, b, w) = (self.dim, self.band, self.band + 1);
        let l = &self.lower;
        for i in 0..n {
            let mut s = rhs[i];
            for k in i.saturating_sub(b)..i {
                s -= l[i * w + (k + b - i)] * out[k];
            }
            out[i] = s / l[i * w + b];
        }
        for i in (0..n).rev() {
            let mut s = out[i];
            for k in i + 1..(i + b + 1).min(n) {
                s -= l[k * w + (i + b - k)] * out[k];
            }
            out[i] = s / l[i * w + b];
        }
    }
}

/// The inverse of an SPD matrix, applied through its Cholesky factor.
pub struct InverseOperator {
    factor: BandedCholesky,
}

impl InverseOperator {
    pub fn new(a: &SparseSymOperator) -> Result<Self, NumericsError> {
        Ok(Self {
            factor: BandedCholesky::factor(a)?,
        })
    }
}

impl SymmetricOperator for InverseOperator {
    fn dim(&self) -> usize {
        self.factor.dim
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.factor.solve(x, y);
    }
}
