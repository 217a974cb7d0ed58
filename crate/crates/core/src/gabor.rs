//! Gabor systems `{π(m) g : m ∈ Λ}` over phase-space lattices.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{gcd, Lattice, Side, Subgroup};
use crate::linalg::{hermitian_eigen, hermitian_function, max_abs_diff, CMatrix, OperatorMatrix};
use crate::transforms::{shift_matrix, Signal};

/// `is_frame` requires `A > FRAME_TOL * B`; `is_tight` requires `B - A <= FRAME_TOL * B`.
pub const FRAME_TOL: f64 = 1e-10;
/// Eigenvalues of `S` below this fraction of the largest are treated as zero.
pub const EIGEN_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrameDiagnostics {
    pub lower_bound: f64,
    pub upper_bound: f64,
    pub is_frame: bool,
    pub is_tight: bool,
    /// `|Λ| / |G|`.
    pub redundancy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaborSystem {
    window: Signal,
    lattice: Lattice,
}

impl GaborSystem {
    pub fn new(window: Signal, lattice: Lattice) -> Result<Self> {
        if window.group() != lattice.base() {
            return Err(Error::ModulusMismatch {
                expected: lattice.base().moduli().to_vec(),
                found: window.group().moduli().to_vec(),
            });
        }
        if window.side() != Side::Time {
            return Err(Error::SideMismatch);
        }
        Ok(GaborSystem { window, lattice })
    }

    /// Orthonormal basis `{π(m) χ_K / sqrt|K|}` for a subgroup `K` whose
    /// cosets and whose annihilator's cosets both have complements.
    ///
    /// On each factor `ℤ_N` with `K = aℤ_N` the lattice is
    /// `(N/a)ℤ_N x aℤ_N`, which needs `gcd(a, N/a) = 1`.
    pub fn orthonormal_basis(subgroup: &Subgroup) -> Result<Self> {
        let group = subgroup.ambient().clone();
        let mut position = Vec::with_capacity(group.rank());
        for (&n, &a) in group.moduli().iter().zip(subgroup.steps()) {
            if gcd(a, n / a) != 1 {
                return Err(Error::InvalidGroup(format!(
                    "step {a} in Z_{n} has no complementary subgroup (gcd({a}, {}) != 1)",
                    n / a
                )));
            }
            position.push(n / a);
        }
        let lattice = Lattice::separable(group, &position, subgroup.steps())?;
        let scale = 1.0 / (subgroup.order() as f64).sqrt();
        let window = Signal::indicator(subgroup).scaled(Complex64::new(scale, 0.0));
        GaborSystem::new(window, lattice)
    }

    pub fn window(&self) -> &Signal {
        &self.window
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn len(&self) -> usize {
        self.lattice.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lattice.is_empty()
    }

    pub fn with_window(&self, window: Signal) -> Result<Self> {
        GaborSystem::new(window, self.lattice.clone())
    }

    /// `π(m_k) g` for the `k`-th lattice point.
    pub fn atom(&self, k: usize) -> Signal {
        self.window.shifted(self.lattice.point(k))
    }

    /// `c(m) = ⟨f, π(m) g⟩`.
    pub fn analysis(&self, f: &Signal) -> Result<Vec<Complex64>> {
        (0..self.len()).map(|k| f.inner(&self.atom(k))).collect()
    }

    /// `∑_m c(m) π(m) g`.
    pub fn synthesis(&self, coefficients: &[Complex64]) -> Result<Signal> {
        if coefficients.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: coefficients.len(),
            });
        }
        let mut out = Signal::zeros(self.window.group().clone(), Side::Time);
        for (k, &c) in coefficients.iter().enumerate() {
            out = out.add(&self.atom(k).scaled(c))?;
        }
        Ok(out)
    }

    /// `C_g`, the `|Λ| x |G|` matrix with rows `conj(π(m) g)`.
    pub fn analysis_matrix(&self) -> CMatrix {
        let n = self.window.len();
        let mut c = CMatrix::zeros(self.len(), n);
        for k in 0..self.len() {
            let atom = self.atom(k);
            for (x, value) in atom.data().iter().enumerate() {
                c[(k, x)] = value.conj();
            }
        }
        c
    }

    /// `C_g^*`.
    pub fn synthesis_matrix(&self) -> CMatrix {
        self.analysis_matrix().adjoint()
    }

    /// `S = C_g^* C_g`.
    pub fn frame_operator(&self) -> OperatorMatrix {
        let c = self.analysis_matrix();
        OperatorMatrix(c.adjoint() * c)
    }

    /// `C_g C_g^*`, with entries `⟨π(n) g, π(m) g⟩`; the projector onto
    /// `ran(C_g)` when the frame is tight with bound 1.
    pub fn gram_matrix(&self) -> CMatrix {
        let c = self.analysis_matrix();
        &c * c.adjoint()
    }

    pub fn frame_bounds(&self) -> FrameDiagnostics {
        let (values, _) = hermitian_eigen(self.frame_operator().matrix());
        let lower = values.first().copied().unwrap_or(0.0).max(0.0);
        let upper = values.last().copied().unwrap_or(0.0).max(0.0);
        let is_frame = upper > 0.0 && lower > FRAME_TOL * upper;
        FrameDiagnostics {
            lower_bound: lower,
            upper_bound: upper,
            is_frame,
            is_tight: is_frame && upper - lower <= FRAME_TOL * upper,
            redundancy: self.lattice.redundancy(),
        }
    }

    fn require_frame(&self) -> Result<(CMatrix, FrameDiagnostics)> {
        let diagnostics = self.frame_bounds();
        let floor = EIGEN_FLOOR * diagnostics.upper_bound;
        if !diagnostics.is_frame || diagnostics.lower_bound <= floor {
            return Err(Error::NotAFrame {
                lower: diagnostics.lower_bound,
                upper: diagnostics.upper_bound,
            });
        }
        Ok((self.frame_operator().0, diagnostics))
    }

    fn apply(&self, m: &CMatrix) -> Result<Signal> {
        Signal::from_vector(self.window.group().clone(), Side::Time, &(m * self.window.to_vector()))
    }

    /// Window `S^{-1/2} g`, rescaled so the resulting system has frame
    /// bound exactly 1.
    ///
    /// Rounding in `S^{-1/2}` grows with the condition number of `S`, so the
    /// step is repeated on the nearly tight result (whose frame operator is
    /// close to a multiple of the identity) until the bounds agree.
    pub fn tight_window(&self) -> Result<Signal> {
        const REFINEMENTS: usize = 4;
        let (s, _) = self.require_frame()?;
        let mut current = self.with_window(self.apply(&hermitian_function(&s, |l| l.powf(-0.5)))?)?;
        for _ in 0..REFINEMENTS {
            let diag = current.frame_bounds();
            if diag.upper_bound - diag.lower_bound <= 1e-14 * diag.upper_bound {
                break;
            }
            let (s, _) = current.require_frame()?;
            current = current.with_window(current.apply(&hermitian_function(&s, |l| l.powf(-0.5)))?)?;
        }
        let bound = current.frame_bounds().lower_bound;
        Ok(current.window.scaled(Complex64::new(1.0 / bound.sqrt(), 0.0)))
    }

    /// The tight system with bound 1 built from [`GaborSystem::tight_window`].
    pub fn tightened(&self) -> Result<Self> {
        self.with_window(self.tight_window()?)
    }

    /// Canonical dual window `S^{-1} g`.
    pub fn dual_window(&self) -> Result<Signal> {
        let (s, _) = self.require_frame()?;
        self.apply(&hermitian_function(&s, |l| 1.0 / l))
    }

    /// `max_m ‖S π(m) - π(m) S‖` (entrywise max).
    pub fn frame_commutation_residual(&self) -> f64 {
        let s = self.frame_operator().0;
        (0..self.len())
            .map(|k| {
                let shift = shift_matrix(self.window.group(), self.lattice.point(k));
                max_abs_diff(&(&s * &shift), &(&shift * &s))
            })
            .fold(0.0, f64::max)
    }

    /// `f - ∑_m ⟨f, π(m) γ⟩ π(m) g` with `γ` the canonical dual window.
    pub fn reconstruction_residual(&self, f: &Signal) -> Result<f64> {
        let dual = self.with_window(self.dual_window()?)?;
        let rebuilt = self.synthesis(&dual.analysis(f)?)?;
        rebuilt.max_abs_diff(f)
    }

    /// `max_u ‖π(u) g - ∑_m ⟨π(u) g, π(m) g⟩ π(m) g‖` over a fundamental
    /// domain; zero for tight systems with bound 1.
    pub fn expansion_residual(&self) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for u in self.lattice.fundamental_domain() {
            let target = self.window.shifted(u);
            let rebuilt = self.synthesis(&self.analysis(&target)?)?;
            worst = worst.max(rebuilt.max_abs_diff(&target)?);
        }
        Ok(worst)
    }
}
