//! Symmetric tridiagonal matrices and Sturm-sequence bisection.

use super::sparse::SparseSymOperator;
use super::NumericsError;

#[derive(Debug, Clone, PartialEq)]
pub struct TridiagSystem {
    pub diagonal: Vec<f64>,
    pub off_diagonal: Vec<f64>,
}

impl TridiagSystem {
    pub fn new(diagonal: Vec<f64>, off_diagonal: Vec<f64>) -> Result<Self, NumericsError> {
        if diagonal.is_empty() || off_diagonal.len() + 1 != diagonal.len() {
            return Err(NumericsError::BadGrid(
                "off-diagonal length must be one less than the diagonal",
            ));
        }
        Ok(Self {
            diagonal,
            off_diagonal,
        })
    }

    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    /// Number of eigenvalues strictly below `x`: the count of negative
    /// pivots in the LDLᵀ factorisation of `T - xI`.
    pub fn sturm_count(&self, x: f64) -> usize {
        let d = &self.diagonal;
        let e = &self.off_diagonal;
        let guard = f64::MIN_POSITIVE.sqrt() * (1.0 + x.abs());
        let mut count = 0;
        let mut q = d[0] - x;
        for i in 0..d.len() {
            if i > 0 {
                let prev = if q.abs() < guard { guard.copysign(q) } else { q };
                q = (d[i] - x) - e[i - 1] * e[i - 1] / prev;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Gershgorin enclosure of the spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.dim();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.off_diagonal[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { self.off_diagonal[i].abs() } else { 0.0 };
            lo = lo.min(self.diagonal[i] - left - right);
            hi = hi.max(self.diagonal[i] + left + right);
        }
        (lo, hi)
    }

    /// The `count` smallest eigenvalues, ascending, by bisection.
    pub fn smallest_eigenvalues(&self, count: usize) -> Result<Vec<f64>, NumericsError> {
        let n = self.dim();
        if count == 0 || count > n {
            return Err(NumericsError::CountExceedsDimension { count, dim: n });
        }
        let (lo, hi) = self.gershgorin();
        let pad = 1e-12 * (hi - lo).abs().max(1.0);
        let (lo, hi) = (lo - pad, hi + pad);
        let mut out = Vec::with_capacity(count);
        let mut floor = lo;
        for k in 0..count {
            let mut a = floor;
            let mut b = hi;
            for _ in 0..200 {
                let mid = 0.5 * (a + b);
                if mid <= a || mid >= b {
                    break;
                }
                if self.sturm_count(mid) <= k {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            let ev = 0.5 * (a + b);
            out.push(ev);
            floor = a;
        }
        Ok(out)
    }

    pub fn to_sparse(&self) -> SparseSymOperator {
        let n = self.dim();
        let mut entries = Vec::with_capacity(2 * n);
        for i in 0..n {
            entries.push((i, i, self.diagonal[i]));
            if i + 1 < n {
                entries.push((i, i + 1, self.off_diagonal[i]));
            }
        }
        SparseSymOperator::from_upper_triplets(n, &entries).expect("tridiagonal entries are valid")
    }
}
