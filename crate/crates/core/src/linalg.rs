//! Dense complex linear algebra on top of `nalgebra`.

use nalgebra::{DMatrix, DVector, Dyn, SVD};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// A linear operator on signals over `G`, as a dense `|G| x |G|` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix(pub CMatrix);

impl OperatorMatrix {
    pub fn identity(n: usize) -> Self {
        OperatorMatrix(CMatrix::identity(n, n))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn compose(&self, other: &OperatorMatrix) -> OperatorMatrix {
        OperatorMatrix(&self.0 * &other.0)
    }

    pub fn spectral_norm(&self) -> f64 {
        spectral_norm(&self.0)
    }

    pub fn max_abs_diff(&self, other: &OperatorMatrix) -> f64 {
        max_abs_diff(&self.0, &other.0)
    }
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch");
    a.iter().zip(b.iter()).fold(0.0, |acc, (x, y)| acc.max((x - y).norm()))
}

pub fn max_abs_diff_slices(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len(), "length mismatch");
    a.iter().zip(b).fold(0.0, |acc, (x, y)| acc.max((x - y).norm()))
}

/// SVD converged to machine precision. nalgebra's default stopping rule
/// leaves complex reconstructions off by up to ~1e-6.
pub fn svd(m: &CMatrix, compute_u: bool, compute_v: bool) -> SVD<Complex64, Dyn, Dyn> {
    m.clone()
        .try_svd(compute_u, compute_v, f64::EPSILON, 100_000)
        .unwrap_or_else(|| m.clone().svd(compute_u, compute_v))
}

pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    let mut values: Vec<f64> = svd(m, false, false).singular_values.iter().copied().collect();
    values.sort_by(|a, b| b.total_cmp(a));
    values
}

pub fn spectral_norm(m: &CMatrix) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Eigenvalues (ascending) and matching orthonormal eigenvectors of a
/// Hermitian matrix.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let hermitian = (m + m.adjoint()).scale(0.5);
    let eig = hermitian
        .clone()
        .try_symmetric_eigen(f64::EPSILON, 100_000)
        .unwrap_or_else(|| hermitian.symmetric_eigen());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(m.nrows(), order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// `f(H)` for a Hermitian `H` through its eigendecomposition.
pub fn hermitian_function(m: &CMatrix, f: impl Fn(f64) -> f64) -> CMatrix {
    let (values, vectors) = hermitian_eigen(m);
    let mut scaled = vectors.clone();
    for (c, &lambda) in values.iter().enumerate() {
        scaled.column_mut(c).scale_mut(f(lambda));
    }
    &scaled * vectors.adjoint()
}

/// Inverse of a square matrix; fails when the smallest singular value is
/// below `rel_tol` times the largest.
pub fn inverse(m: &CMatrix, rel_tol: f64) -> Result<CMatrix> {
    let values = singular_values(m);
    let largest = values.first().copied().unwrap_or(0.0);
    let smallest = values.last().copied().unwrap_or(0.0);
    let threshold = rel_tol * largest;
    if smallest <= threshold || largest == 0.0 {
        return Err(Error::Singular { smallest, threshold });
    }
    m.clone().try_inverse().ok_or(Error::Singular { smallest, threshold })
}

#[derive(Debug, Clone, Serialize)]
pub struct RankDecision {
    pub rank: usize,
    pub threshold: f64,
    /// Smallest retained singular value.
    pub smallest_kept: f64,
    /// Largest discarded singular value (0 when nothing is discarded).
    pub largest_dropped: f64,
}

/// Moore-Penrose pseudoinverse through the SVD with a relative threshold.
///
/// A singular value in `[threshold / 10, 10 * threshold]` makes the rank
/// decision ambiguous and is reported as an error instead of being rounded.
pub fn pseudo_inverse(m: &CMatrix, rel_tol: f64) -> Result<(CMatrix, RankDecision)> {
    let svd = svd(m, true, true);
    let u = svd.u.as_ref().expect("requested U");
    let v_t = svd.v_t.as_ref().expect("requested V^*");
    let largest = svd.singular_values.iter().fold(0.0f64, |a, &s| a.max(s));
    let threshold = rel_tol * largest;
    let mut smallest_kept = f64::INFINITY;
    let mut largest_dropped: f64 = 0.0;
    for &s in svd.singular_values.iter() {
        if s >= threshold / 10.0 && s <= threshold * 10.0 && largest > 0.0 {
            return Err(Error::RankAmbiguous { value: s, threshold });
        }
        if s > threshold && largest > 0.0 {
            smallest_kept = smallest_kept.min(s);
        } else {
            largest_dropped = largest_dropped.max(s);
        }
    }
    let mut result = CMatrix::zeros(m.ncols(), m.nrows());
    let mut rank = 0;
    for (i, &s) in svd.singular_values.iter().enumerate() {
        if s > threshold && largest > 0.0 {
            rank += 1;
            let left = u.column(i);
            let right = v_t.row(i).adjoint();
            result += (right * left.adjoint()).scale(1.0 / s);
        }
    }
    Ok((
        result,
        RankDecision {
            rank,
            threshold,
            smallest_kept: if rank == 0 { 0.0 } else { smallest_kept },
            largest_dropped,
        },
    ))
}

/// Largest residual among the four Moore-Penrose identities.
pub fn moore_penrose_residual(a: &CMatrix, pinv: &CMatrix) -> f64 {
    let apa = a * pinv * a;
    let pap = pinv * a * pinv;
    let ap = a * pinv;
    let pa = pinv * a;
    [
        max_abs_diff(&apa, a),
        max_abs_diff(&pap, pinv),
        max_abs_diff(&ap, &ap.adjoint()),
        max_abs_diff(&pa, &pa.adjoint()),
    ]
    .into_iter()
    .fold(0.0, f64::max)
}
