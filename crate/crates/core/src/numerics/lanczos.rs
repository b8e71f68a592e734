//! Thick-restart Lanczos for a few extreme eigenpairs of a symmetric
//! operator, with full (twice classical Gram-Schmidt) reorthogonalisation.
//!
//! `lanczos_smallest` works on the shift-inverted operator when the matrix
//! band fits in memory, which turns the clustered bottom of a discretised
//! Laplacian into a well separated top.

use super::sparse::{InverseOperator, SparseSymOperator, SymmetricOperator};
use super::NumericsError;
use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seed of the start vector (ChaCha8). Fixed so reports are reproducible.
pub const LANCZOS_SEED: u64 = 0x5EED_1A2C;

/// Above this many stored band entries the factorisation is skipped.
const BAND_ENTRY_CAP: usize = 30_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Spectrum {
    Smallest,
    Largest,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LanczosMode {
    /// Shift-invert when the band fits under the cap, direct otherwise.
    Auto,
    Direct,
    /// Shift-invert about `sigma`, which must lie below the spectrum.
    ShiftInvert { sigma: f64 },
}

#[derive(Debug, Clone, Copy)]
pub struct LanczosOptions {
    pub tol: f64,
    pub max_restarts: usize,
    pub seed: u64,
    pub basis_size: Option<usize>,
    pub mode: LanczosMode,
}

impl LanczosOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            max_restarts: 500,
            seed: LANCZOS_SEED,
            basis_size: None,
            mode: LanczosMode::Auto,
        }
    }
}

#[derive(Debug, Clone)]
pub struct EigenPair {
    pub value: f64,
    /// Unit vector; sign fixed so the largest-magnitude entry is positive.
    pub vector: Vec<f64>,
    /// `‖A v − λ v‖` for the returned pair.
    pub residual: f64,
}

/// The `count` smallest eigenpairs of `a` with `‖Av − λv‖ ≤ tol`.
pub fn lanczos_smallest(
    a: &SparseSymOperator,
    count: usize,
    tol: f64,
) -> Result<Vec<EigenPair>, NumericsError> {
    lanczos_smallest_with(a, count, &LanczosOptions::with_tol(tol))
}

pub fn lanczos_smallest_with(
    a: &SparseSymOperator,
    count: usize,
    opts: &LanczosOptions,
) -> Result<Vec<EigenPair>, NumericsError> {
    check_request(a.dim(), count, opts.tol)?;
    let n = a.dim();
    let band_entries = n.saturating_mul(a.bandwidth() + 1);
    let sigma = match opts.mode {
        LanczosMode::Direct => None,
        LanczosMode::ShiftInvert { sigma } => Some(sigma),
        LanczosMode::Auto if band_entries <= BAND_ENTRY_CAP => Some(default_shift(a)),
        LanczosMode::Auto => None,
    };
    let Some(mut sigma) = sigma else {
        return lanczos_extreme(a, count, Spectrum::Smallest, opts);
    };
    let shifted = |s: f64| shifted_copy(a, s).and_then(|m| InverseOperator::new(&m));
    let inverse = match shifted(sigma) {
        Ok(inv) => inv,
        Err(NumericsError::NotPositiveDefinite { .. }) if opts.mode == LanczosMode::Auto => {
            sigma = gershgorin_low(a) - 1.0;
            shifted(sigma)?
        }
        Err(e) => return Err(e),
    };
    let accept = |_theta: f64, x: &[f64], _inner: f64| {
        let (value, res) = rayleigh(a, x);
        (value, res, res <= opts.tol)
    };
    let mut pairs = thick_restart(&inverse, count, Spectrum::Largest, opts, &accept)?;
    pairs.sort_by(|p, q| p.value.total_cmp(&q.value));
    Ok(pairs)
}

/// Extreme eigenpairs of an arbitrary symmetric operator, residuals
/// measured on the operator itself.
pub fn lanczos_extreme(
    op: &dyn SymmetricOperator,
    count: usize,
    which: Spectrum,
    opts: &LanczosOptions,
) -> Result<Vec<EigenPair>, NumericsError> {
    check_request(op.dim(), count, opts.tol)?;
    let accept = |theta: f64, _x: &[f64], inner: f64| (theta, inner, inner <= opts.tol);
    thick_restart(op, count, which, opts, &accept)
}

fn check_request(dim: usize, count: usize, tol: f64) -> Result<(), NumericsError> {
    if count == 0 || count > dim {
        return Err(NumericsError::CountExceedsDimension { count, dim });
    }
    if !(tol > 0.0) {
        return Err(NumericsError::BadTolerance(tol));
    }
    Ok(())
}

fn gershgorin_low(a: &SparseSymOperator) -> f64 {
    (0..a.dim())
        .map(|i| {
            let mut diag = 0.0;
            let mut off = 0.0;
            for (j, v) in a.row(i) {
                if j == i {
                    diag += v;
                } else {
                    off += v.abs();
                }
            }
            diag - off
        })
        .fold(f64::INFINITY, f64::min)
}

fn max_row_sum(a: &SparseSymOperator) -> f64 {
    (0..a.dim())
        .map(|i| a.row(i).map(|(_, v)| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

// Just below zero: the Dirichlet operators this crate builds are positive
// definite, so their lowest eigenvalues become the largest of the inverse.
fn default_shift(a: &SparseSymOperator) -> f64 {
    -1e-10 * max_row_sum(a).max(f64::MIN_POSITIVE)
}

fn shifted_copy(a: &SparseSymOperator, sigma: f64) -> Result<SparseSymOperator, NumericsError> {
    let mut entries = Vec::with_capacity(a.nnz() / 2 + a.dim());
    for i in 0..a.dim() {
        entries.push((i, i, -sigma));
        for (j, v) in a.row(i) {
            if j >= i {
                entries.push((i, j, v));
            }
        }
    }
    SparseSymOperator::from_upper_triplets(a.dim(), &entries)
}

fn rayleigh(a: &dyn SymmetricOperator, x: &[f64]) -> (f64, f64) {
    let mut ax = vec![0.0; x.len()];
    a.apply(x, &mut ax);
    let value = dot(x, &ax);
    let res = ax
        .iter()
        .zip(x)
        .map(|(p, q)| (p - value * q).powi(2))
        .sum::<f64>()
        .sqrt();
    (value, res)
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(p, q)| p * q).sum()
}

fn norm(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

fn orthogonalize(basis: &[Vec<f64>], f: &mut [f64]) {
    for _ in 0..2 {
        let coeffs: Vec<f64> = basis.iter().map(|v| dot(v, f)).collect();
        for (v, c) in basis.iter().zip(coeffs) {
            for (fi, vi) in f.iter_mut().zip(v) {
                *fi -= c * vi;
            }
        }
    }
}

fn random_unit(rng: &mut ChaCha8Rng, basis: &[Vec<f64>], n: usize) -> Vec<f64> {
    loop {
        let mut v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        orthogonalize(basis, &mut v);
        let nv = norm(&v);
        if nv > 1e-8 {
            v.iter_mut().for_each(|x| *x /= nv);
            return v;
        }
    }
}

fn combine(basis: &[Vec<f64>], coeffs: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut out = vec![0.0; basis[0].len()];
    for (v, c) in basis.iter().zip(coeffs) {
        for (o, vi) in out.iter_mut().zip(v) {
            *o += c * vi;
        }
    }
    out
}

fn fix_sign(v: &mut [f64]) {
    let pivot = v
        .iter()
        .copied()
        .fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m });
    if pivot < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

type Accept<'a> = dyn Fn(f64, &[f64], f64) -> (f64, f64, bool) + 'a;

fn thick_restart(
    op: &dyn SymmetricOperator,
    count: usize,
    which: Spectrum,
    opts: &LanczosOptions,
    accept: &Accept<'_>,
) -> Result<Vec<EigenPair>, NumericsError> {
    let n = op.dim();
    let m = opts
        .basis_size
        .unwrap_or_else(|| (3 * count).max(count + 60))
        .clamp(count.min(n), n);
    let keep = (count + (m - count) / 3).min(m.saturating_sub(1)).max(count.min(m));
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(m);
    let mut images: Vec<Vec<f64>> = Vec::with_capacity(m);
    let mut pending = random_unit(&mut rng, &basis, n);
    let mut last = Vec::new();

    for _restart in 0..=opts.max_restarts {
        while basis.len() < m {
            let mut w = vec![0.0; n];
            op.apply(&pending, &mut w);
            let wn = norm(&w);
            basis.push(pending);
            images.push(w.clone());
            if basis.len() == n {
                pending = Vec::new();
                break;
            }
            let mut f = w;
            orthogonalize(&basis, &mut f);
            let beta = norm(&f);
            pending = if beta <= 1e-12 * wn.max(f64::MIN_POSITIVE) {
                random_unit(&mut rng, &basis, n)
            } else {
                f.iter().map(|x| x / beta).collect()
            };
        }

        let k = basis.len();
        let h = DMatrix::from_fn(k, k, |i, j| 0.5 * (dot(&basis[i], &images[j]) + dot(&basis[j], &images[i])));
        let eig = SymmetricEigen::new(h);
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by(|&i, &j| {
            let (a, b) = (eig.eigenvalues[i], eig.eigenvalues[j]);
            match which {
                Spectrum::Smallest => a.total_cmp(&b),
                Spectrum::Largest => b.total_cmp(&a),
            }
        });

        let mut pairs = Vec::with_capacity(count);
        let mut all_ok = true;
        for &i in order.iter().take(count) {
            let theta = eig.eigenvalues[i];
            let y = eig.eigenvectors.column(i);
            let mut x = combine(&basis, y.iter().copied());
            let ax = combine(&images, y.iter().copied());
            let inner = ax
                .iter()
                .zip(&x)
                .map(|(p, q)| (p - theta * q).powi(2))
                .sum::<f64>()
                .sqrt();
            fix_sign(&mut x);
            let (value, residual, ok) = accept(theta, &x, inner);
            all_ok &= ok;
            pairs.push(EigenPair {
                value,
                vector: x,
                residual,
            });
        }
        if all_ok || k == n {
            if !all_ok {
                // The whole space is spanned; nothing more to gain.
                return Err(NumericsError::NonConvergence {
                    residuals: pairs.iter().map(|p| p.residual).collect(),
                });
            }
            return Ok(pairs);
        }
        last = pairs.iter().map(|p| p.residual).collect();

        let kept: Vec<usize> = order.iter().take(keep).copied().collect();
        let new_basis: Vec<Vec<f64>> = kept
            .iter()
            .map(|&i| combine(&basis, eig.eigenvectors.column(i).iter().copied()))
            .collect();
        let new_images: Vec<Vec<f64>> = kept
            .iter()
            .map(|&i| combine(&images, eig.eigenvectors.column(i).iter().copied()))
            .collect();
        basis = new_basis;
        images = new_images;
        orthogonalize(&basis, &mut pending);
        let pn = norm(&pending);
        if pn > 1e-8 {
            pending.iter_mut().for_each(|x| *x /= pn);
        } else {
            pending = random_unit(&mut rng, &basis, n);
        }
    }
    Err(NumericsError::NonConvergence { residuals: last })
}
