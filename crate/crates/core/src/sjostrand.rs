//! Sjöstrand-class norms, Gabor matrices, the weighted algebra `C_v` of
//! matrices with summable diagonal envelopes, and the almost-diagonalization
//! and inversion experiments built on them.
//!
//! Conventions: `M(σ)[m, n] = ⟨K_σ π(n) g, π(m) g⟩ = (C_g K_σ C_g^*)[m, n]`,
//! and for a symbol `σ` with plane window `Ψ`
//! `‖σ‖ = ∑_{ω ∈ Ĝ x G} (1/|G|) sup_z |V_Ψ σ(z, ω)| v(J⁻¹ ω)`.
//! The lattice certificate is `h(k) = sup_z |V_Ψ σ(z, J(-k))|`, which
//! dominates `|M(σ)[m, n]|` at `k = m - n` when `Ψ = R(g, g)`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gabor::GaborSystem;
use crate::group::{Group, Weight};
use crate::linalg::{inverse, max_abs_diff, moore_penrose_residual, pseudo_inverse, CMatrix, RankDecision};
use crate::psido::{kn_matrix, kn_symbol_from_matrix, Symbol};
use crate::transforms::{dft, phase_stft, rihaczek, stft, PhaseDomain, PhaseFunction};

/// Relative tolerance of the pseudoinverse rank decision.
pub const PINV_TOL: f64 = 1e-10;
/// Relative tolerance below which an operator counts as singular.
pub const SINGULAR_TOL: f64 = 1e-12;
/// Slack for domination checks: `|a| <= h (1 + DOMINATION_SLACK) + DOMINATION_SLACK`.
pub const DOMINATION_SLACK: f64 = 1e-12;

/// `sup_z |V_Ψ σ(z, ω)|` for every `ω ∈ Ĝ x G`.
pub fn column_sup(sigma: &Symbol, psi: &PhaseFunction) -> Result<Vec<f64>> {
    Ok(phase_stft(sigma.data(), psi)?.column_sup())
}

/// Sjöstrand norm `‖σ‖_{M^{∞,1}_{v∘J⁻¹}}` for a weight `v` on `G x Ĝ`.
pub fn sjostrand_norm(sigma: &Symbol, psi: &PhaseFunction, v: &Weight) -> Result<f64> {
    let group = sigma.group();
    check_phase_weight(group, v)?;
    let sup = column_sup(sigma, psi)?;
    Ok(weighted_column_sum(group, &sup, v))
}

fn weighted_column_sum(group: &Group, sup: &[f64], v: &Weight) -> f64 {
    let mass = 1.0 / group.order() as f64;
    sup.iter()
        .enumerate()
        .map(|(omega, s)| s * v.value(group.j_inverse(omega)))
        .sum::<f64>()
        * mass
}

fn check_phase_weight(group: &Group, v: &Weight) -> Result<()> {
    if v.group() != &group.phase_space() {
        return Err(Error::ModulusMismatch {
            expected: group.phase_space().moduli().to_vec(),
            found: v.group().moduli().to_vec(),
        });
    }
    Ok(())
}

/// A nonnegative function on an index group together with a weight.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Envelope {
    pub index: Group,
    pub values: Vec<f64>,
    pub weight: Vec<f64>,
}

impl Envelope {
    pub fn new(index: Group, values: Vec<f64>, weight: &Weight) -> Result<Self> {
        if weight.group() != &index || values.len() != index.order() {
            return Err(Error::DimensionMismatch {
                expected: index.order(),
                found: values.len().min(weight.values().len()),
            });
        }
        Ok(Envelope {
            index,
            values,
            weight: weight.values().to_vec(),
        })
    }

    /// `∑_k h(k) v(k)`.
    pub fn weighted_mass(&self) -> f64 {
        self.values.iter().zip(&self.weight).map(|(h, v)| h * v).sum()
    }

    /// Number of entries with `|a[i, j]| > h(i - j)` beyond the slack.
    pub fn violations(&self, a: &CMatrix) -> usize {
        let n = self.index.order();
        assert_eq!(a.shape(), (n, n), "matrix does not match the envelope's index group");
        let mut count = 0;
        for i in 0..n {
            for j in 0..n {
                let h = self.values[self.index.sub(i, j)];
                if a[(i, j)].norm() > h * (1.0 + DOMINATION_SLACK) + DOMINATION_SLACK {
                    count += 1;
                }
            }
        }
        count
    }
}

/// A square matrix indexed by a finite abelian group.
#[derive(Debug, Clone, PartialEq)]
pub struct CvMatrix {
    index: Group,
    entries: CMatrix,
}

impl CvMatrix {
    pub fn new(index: Group, entries: CMatrix) -> Result<Self> {
        let n = index.order();
        if entries.shape() != (n, n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: entries.nrows().max(entries.ncols()),
            });
        }
        Ok(CvMatrix { index, entries })
    }

    pub fn identity(index: Group) -> Self {
        let n = index.order();
        CvMatrix {
            index,
            entries: CMatrix::identity(n, n),
        }
    }

    /// `A[i, j] = δ_{i - j, k0}`.
    pub fn shift(index: Group, k0: usize) -> Self {
        let n = index.order();
        let entries = CMatrix::from_fn(n, n, |i, j| {
            if index.sub(i, j) == k0 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        CvMatrix { index, entries }
    }

    pub fn index(&self) -> &Group {
        &self.index
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_entries(self) -> CMatrix {
        self.entries
    }

    /// `d(k) = max_i |A[i, i - k]|`.
    pub fn diagonal_envelope(&self) -> Vec<f64> {
        let n = self.index.order();
        let mut d = vec![0.0f64; n];
        for i in 0..n {
            for j in 0..n {
                let k = self.index.sub(i, j);
                d[k] = d[k].max(self.entries[(i, j)].norm());
            }
        }
        d
    }

    pub fn envelope(&self, v: &Weight) -> Result<Envelope> {
        Envelope::new(self.index.clone(), self.diagonal_envelope(), v)
    }

    /// `‖A‖_{C_v} = ∑_k d(k) v(k)`.
    pub fn cv_norm(&self, v: &Weight) -> Result<f64> {
        Ok(self.envelope(v)?.weighted_mass())
    }

    pub fn mul(&self, other: &CvMatrix) -> Result<CvMatrix> {
        if self.index != other.index {
            return Err(Error::ModulusMismatch {
                expected: self.index.moduli().to_vec(),
                found: other.index.moduli().to_vec(),
            });
        }
        Ok(CvMatrix {
            index: self.index.clone(),
            entries: &self.entries * &other.entries,
        })
    }
}

pub fn cv_inverse(a: &CvMatrix) -> Result<CvMatrix> {
    CvMatrix::new(a.index.clone(), inverse(&a.entries, SINGULAR_TOL)?)
}

pub fn cv_pseudoinverse(a: &CvMatrix, rel_tol: f64) -> Result<(CvMatrix, RankDecision)> {
    let (p, decision) = pseudo_inverse(&a.entries, rel_tol)?;
    Ok((CvMatrix::new(a.index.clone(), p)?, decision))
}

/// The Gabor matrix `M(σ)` of a symbol in a Gabor system.
#[derive(Debug, Clone)]
pub struct GaborMatrix {
    system: GaborSystem,
    matrix: CvMatrix,
    operator: CMatrix,
    /// Whether the system was a tight frame with bound 1; the intertwining
    /// and factorization identities need this.
    pub tight: bool,
}

impl GaborMatrix {
    pub fn system(&self) -> &GaborSystem {
        &self.system
    }

    pub fn matrix(&self) -> &CvMatrix {
        &self.matrix
    }

    pub fn entries(&self) -> &CMatrix {
        &self.matrix.entries
    }

    /// `C_g K_σ - M(σ) C_g`.
    pub fn intertwining_residual(&self) -> f64 {
        let c = self.system.analysis_matrix();
        max_abs_diff(&(&c * &self.operator), &(self.entries() * &c))
    }

    /// `K_σ - C_g^* M(σ) C_g`.
    pub fn factorization_residual(&self) -> f64 {
        let c = self.system.analysis_matrix();
        max_abs_diff(&self.operator, &(c.adjoint() * self.entries() * &c))
    }

    /// Largest of `(I - P) M P` and `M (I - P)` with `P = C_g C_g^*`, the
    /// statements that `M(σ)` maps `ran(C_g)` into itself and kills its
    /// complement.
    pub fn range_residual(&self) -> f64 {
        let p = self.system.gram_matrix();
        let n = p.nrows();
        let complement = CMatrix::identity(n, n) - &p;
        let zero = CMatrix::zeros(n, n);
        let into = &complement * self.entries() * &p;
        let kills = self.entries() * &complement;
        max_abs_diff(&into, &zero).max(max_abs_diff(&kills, &zero))
    }
}

pub fn gabor_matrix(sigma: &Symbol, sys: &GaborSystem) -> Result<GaborMatrix> {
    if sigma.group() != sys.window().group() {
        return Err(Error::ModulusMismatch {
            expected: sys.window().group().moduli().to_vec(),
            found: sigma.group().moduli().to_vec(),
        });
    }
    let operator = kn_matrix(sigma).0;
    Ok(gabor_matrix_of_operator(operator, sys))
}

fn gabor_matrix_of_operator(operator: CMatrix, sys: &GaborSystem) -> GaborMatrix {
    let c = sys.analysis_matrix();
    let entries = &c * &operator * c.adjoint();
    GaborMatrix {
        system: sys.clone(),
        matrix: CvMatrix {
            index: sys.lattice().index_group(),
            entries,
        },
        operator,
        tight: sys.frame_bounds().is_tight && (sys.frame_bounds().upper_bound - 1.0).abs() < 1e-8,
    }
}

/// Weight `v` on `G x Ĝ` restricted to the lattice and re-indexed by it.
pub fn lattice_weight(sys: &GaborSystem, v: &Weight) -> Result<Weight> {
    v.restrict(sys.lattice().subgroup())
}

/// The lattice certificate `h(k) = sup_z |V_Ψ σ(z, J(-k))|` with `Ψ = R(g, g)`.
pub fn almost_diag_envelope(sigma: &Symbol, sys: &GaborSystem, v: &Weight) -> Result<Envelope> {
    let group = sigma.group().clone();
    check_phase_weight(&group, v)?;
    let phase = group.phase_space();
    let psi = rihaczek(sys.window(), sys.window())?;
    let sup = column_sup(sigma, &psi)?;
    let lattice = sys.lattice();
    let values = (0..lattice.len())
        .map(|k| sup[group.j_map(phase.neg(lattice.point(k)))])
        .collect();
    Envelope::new(lattice.index_group(), values, &lattice_weight(sys, v)?)
}

/// The same certificate over the whole plane: `H(w) = sup_z |V_Ψ σ(z, J(-w))|`
/// dominates `|⟨K_σ π(z) g, π(y) g⟩|` at `w = y - z`.
pub fn continuous_envelope(sigma: &Symbol, g: &crate::transforms::Signal, v: &Weight) -> Result<Envelope> {
    let group = sigma.group().clone();
    check_phase_weight(&group, v)?;
    let phase = group.phase_space();
    let psi = rihaczek(g, g)?;
    let sup = column_sup(sigma, &psi)?;
    let values = (0..phase.order()).map(|w| sup[group.j_map(phase.neg(w))]).collect();
    Envelope::new(phase, values, v)
}

/// `⟨K_σ π(z) g, π(y) g⟩` for all pairs of plane points, rows `y`, columns `z`.
pub fn full_phase_matrix(sigma: &Symbol, g: &crate::transforms::Signal) -> Result<CMatrix> {
    let group = g.group().clone();
    let all = crate::group::Lattice::separable(group.clone(), &vec![1; group.rank()], &vec![1; group.rank()])?;
    let sys = GaborSystem::new(g.clone(), all)?;
    Ok(gabor_matrix(sigma, &sys)?.matrix.entries)
}

/// The reverse construction: from a lattice envelope `h` to a plane
/// envelope `H` through `α(n) = sup_{u ∈ U} |V_g g(n - u)|`,
/// `c = h * α * α̃` and `H(w) = ∑_n c(n) χ_{U-U}(w - n)`.
#[derive(Debug, Clone, Serialize)]
pub struct ReverseEnvelope {
    pub alpha: Vec<f64>,
    /// `(h * α * α̃)(k) = ∑_{m, m'} h(k + m - m') α(m) α(m')`.
    pub convolved: Vec<f64>,
    /// `∑_k c(k) v(k)` over the lattice.
    pub convolved_weighted_mass: f64,
    /// `H` over the plane.
    pub plane: Vec<f64>,
    /// `∑_w H(w) v(w) / |G|`.
    pub plane_weighted_mass: f64,
}

pub fn reverse_envelope(h: &Envelope, sys: &GaborSystem, v: &Weight) -> Result<ReverseEnvelope> {
    let group = sys.window().group().clone();
    check_phase_weight(&group, v)?;
    let phase = group.phase_space();
    let lattice = sys.lattice();
    let index = lattice.index_group();
    let domain = lattice.fundamental_domain();
    let vgg = stft(sys.window(), sys.window())?;
    let alpha: Vec<f64> = (0..lattice.len())
        .map(|k| {
            let n = lattice.point(k);
            domain.iter().fold(0.0f64, |acc, &u| acc.max(vgg.at(phase.sub(n, u)).norm()))
        })
        .collect();
    let len = lattice.len();
    let convolved: Vec<f64> = (0..len)
        .map(|k| {
            let mut total = 0.0;
            for (m, a) in alpha.iter().enumerate() {
                for (m2, a2) in alpha.iter().enumerate() {
                    total += h.values[index.add(k, index.sub(m, m2))] * a * a2;
                }
            }
            total
        })
        .collect();
    let lattice_v = lattice_weight(sys, v)?;
    let convolved_weighted_mass = convolved.iter().enumerate().map(|(k, c)| c * lattice_v.value(k)).sum();
    let mut difference = vec![false; phase.order()];
    for &u in &domain {
        for &u2 in &domain {
            difference[phase.sub(u, u2)] = true;
        }
    }
    let mut plane = vec![0.0f64; phase.order()];
    for (w, slot) in plane.iter_mut().enumerate() {
        for (k, c) in convolved.iter().enumerate() {
            if difference[phase.sub(w, lattice.point(k))] {
                *slot += c;
            }
        }
    }
    let mass = 1.0 / group.order() as f64;
    let plane_weighted_mass = plane.iter().enumerate().map(|(w, x)| x * v.value(w)).sum::<f64>() * mass;
    Ok(ReverseEnvelope {
        alpha,
        convolved,
        convolved_weighted_mass,
        plane,
        plane_weighted_mass,
    })
}

/// Entries of the plane matrix `⟨K_σ π(z) g, π(y) g⟩` exceeding `H(y - z)`.
pub fn reverse_violations(sigma: &Symbol, sys: &GaborSystem, reverse: &ReverseEnvelope) -> Result<usize> {
    let phase = sys.window().group().phase_space();
    let full = full_phase_matrix(sigma, sys.window())?;
    let mut count = 0;
    for y in 0..phase.order() {
        for z in 0..phase.order() {
            let bound = reverse.plane[phase.sub(y, z)];
            if full[(y, z)].norm() > bound * (1.0 + DOMINATION_SLACK) + DOMINATION_SLACK {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// Maximum of an envelope at each distance from the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayPoint {
    pub distance: usize,
    pub value: f64,
}

/// `max { e(k) : d(k) = r }` for every occurring distance `r`, where `d` is
/// the plane metric of the lattice point `k`.
pub fn decay_profile(values: &[f64], sys: &GaborSystem) -> Vec<DecayPoint> {
    let phase = sys.window().group().phase_space();
    let mut profile: Vec<DecayPoint> = Vec::new();
    for (k, &value) in values.iter().enumerate() {
        let distance = phase.metric(sys.lattice().point(k));
        match profile.iter_mut().find(|p| p.distance == distance) {
            Some(p) => p.value = p.value.max(value),
            None => profile.push(DecayPoint { distance, value }),
        }
    }
    profile.sort_by_key(|p| p.distance);
    profile
}

/// Least-squares slope `r` of `ln e(d) ≈ c - r d` over points with
/// `e(d) > floor`; `None` with fewer than two such points.
pub fn decay_rate(profile: &[DecayPoint], floor: f64) -> Option<f64> {
    let points: Vec<(f64, f64)> = profile
        .iter()
        .filter(|p| p.value > floor)
        .map(|p| (p.distance as f64, p.value.ln()))
        .collect();
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    Some(-sxy / sxx)
}

/// Outcome of inverting `K_σ` and comparing Gabor matrices.
#[derive(Debug, Clone, Serialize)]
pub struct WienerReport {
    /// `max |K_τ K_σ - I|`.
    pub inverse_residual: f64,
    /// `max |M(τ) - M(σ)^+|`.
    pub pseudoinverse_residual: f64,
    /// Largest Moore-Penrose residual of the pair `(M(σ), M(τ))`.
    pub moore_penrose_residual: f64,
    pub rank: RankDecision,
    pub condition_number: f64,
    pub sigma_norm: f64,
    pub tau_norm: f64,
    pub sigma_cv_norm: f64,
    pub tau_cv_norm: f64,
    pub sigma_envelope: Vec<f64>,
    pub tau_envelope: Vec<f64>,
    pub sigma_decay: Vec<DecayPoint>,
    pub tau_decay: Vec<DecayPoint>,
    pub sigma_decay_rate: Option<f64>,
    pub tau_decay_rate: Option<f64>,
    #[serde(skip)]
    pub tau: Symbol,
}

/// Inverts `K_σ`, recovers `τ` with `K_τ = K_σ^{-1}`, and compares `M(τ)`
/// with the pseudoinverse of `M(σ)`. The system should be tight with bound 1.
pub fn wiener_experiment(sigma: &Symbol, sys: &GaborSystem, v: &Weight) -> Result<WienerReport> {
    let group = sigma.group().clone();
    check_phase_weight(&group, v)?;
    let k = kn_matrix(sigma);
    let k_inv = inverse(k.matrix(), SINGULAR_TOL)?;
    let tau = kn_symbol_from_matrix(&group, &crate::linalg::OperatorMatrix(k_inv))?;
    let n = group.order();
    let inverse_residual = max_abs_diff(&(kn_matrix(&tau).0 * k.matrix()), &CMatrix::identity(n, n));

    let m_sigma = gabor_matrix(sigma, sys)?;
    let m_tau = gabor_matrix(&tau, sys)?;
    let (pinv, rank) = pseudo_inverse(m_sigma.entries(), PINV_TOL)?;
    let pseudoinverse_residual = max_abs_diff(m_tau.entries(), &pinv);
    let moore_penrose = moore_penrose_residual(m_sigma.entries(), m_tau.entries());

    let singular = crate::linalg::singular_values(k.matrix());
    let condition_number = singular.first().copied().unwrap_or(0.0) / singular.last().copied().unwrap_or(f64::NAN);

    let psi = rihaczek(sys.window(), sys.window())?;
    let lattice_v = lattice_weight(sys, v)?;
    let sigma_envelope = m_sigma.matrix().diagonal_envelope();
    let tau_envelope = m_tau.matrix().diagonal_envelope();
    let sigma_decay = decay_profile(&sigma_envelope, sys);
    let tau_decay = decay_profile(&tau_envelope, sys);
    Ok(WienerReport {
        inverse_residual,
        pseudoinverse_residual,
        moore_penrose_residual: moore_penrose,
        rank,
        condition_number,
        sigma_norm: sjostrand_norm(sigma, &psi, v)?,
        tau_norm: sjostrand_norm(&tau, &psi, v)?,
        sigma_cv_norm: m_sigma.matrix().cv_norm(&lattice_v)?,
        tau_cv_norm: m_tau.matrix().cv_norm(&lattice_v)?,
        sigma_decay_rate: decay_rate(&sigma_decay, 1e-14),
        tau_decay_rate: decay_rate(&tau_decay, 1e-14),
        sigma_envelope,
        tau_envelope,
        sigma_decay,
        tau_decay,
        tau,
    })
}

/// `M(σ)M(τ)` against `M` of the composed symbol.
pub fn gabor_homomorphism_residual(sigma: &Symbol, tau: &Symbol, sys: &GaborSystem) -> Result<f64> {
    let composed = crate::psido::compose_symbols(sigma, tau)?;
    let lhs = gabor_matrix(&composed, sys)?;
    let rhs = gabor_matrix(sigma, sys)?.matrix.mul(gabor_matrix(tau, sys)?.matrix())?;
    let p = sys.gram_matrix();
    Ok(max_abs_diff(&(lhs.entries() * &p), &(rhs.entries * &p)))
}

/// Smallest and largest ratio `‖σ‖_{Ψ1} / ‖σ‖_{Ψ2}` over a set of symbols.
pub fn window_change_ratios(
    symbols: &[Symbol],
    psi1: &PhaseFunction,
    psi2: &PhaseFunction,
    v: &Weight,
) -> Result<(f64, f64)> {
    let mut low = f64::INFINITY;
    let mut high: f64 = 0.0;
    for sigma in symbols {
        let a = sjostrand_norm(sigma, psi1, v)?;
        let b = sjostrand_norm(sigma, psi2, v)?;
        if b > 0.0 {
            low = low.min(a / b);
            high = high.max(a / b);
        }
    }
    Ok((low, high))
}

fn single_factor(group: &Group) -> Result<usize> {
    if group.rank() != 1 {
        return Err(Error::MultiFactorGroup(group.rank()));
    }
    Ok(group.order())
}

/// `A[x, y] = s(x, y - x)` with `s(x, u) = (1/N) ∑_ζ σ(x, ζ) conj<ζ, u>`;
/// the matrix of `K_σ` on `ℤ_N`.
pub fn discrete_case_matrix(sigma: &Symbol) -> Result<CvMatrix> {
    let group = sigma.group().clone();
    let n = single_factor(&group)?;
    let mut a = CMatrix::zeros(n, n);
    for x in 0..n {
        let row = &sigma.data().data()[x * n..(x + 1) * n];
        let s = dft(&group, row, false);
        for y in 0..n {
            a[(x, y)] = s[group.sub(y, x)] / n as f64;
        }
    }
    CvMatrix::new(group, a)
}

/// `A[ξ, ω] = (1/N) F₁σ(ξ - ω, ω)` with `F₁σ(ω, ξ) = ∑_z σ(z, ξ) e^{-2πi zω/N}`;
/// the matrix of `F K_σ F⁻¹` acting on Fourier coefficients.
pub fn periodic_case_matrix(sigma: &Symbol) -> Result<CvMatrix> {
    let group = sigma.group().clone();
    let n = single_factor(&group)?;
    let mut f1 = vec![Complex64::new(0.0, 0.0); n * n];
    let mut column = vec![Complex64::new(0.0, 0.0); n];
    for xi in 0..n {
        for (z, slot) in column.iter_mut().enumerate() {
            *slot = sigma.get(z, xi);
        }
        for (omega, value) in dft(&group, &column, false).into_iter().enumerate() {
            f1[omega * n + xi] = value;
        }
    }
    let a = CMatrix::from_fn(n, n, |xi, omega| f1[group.sub(xi, omega) * n + omega] / n as f64);
    CvMatrix::new(group, a)
}

/// Window `δ ⊗ 1` on the plane.
pub fn discrete_case_window(group: &Group) -> PhaseFunction {
    PhaseFunction::from_fn(group.clone(), PhaseDomain::TimeFrequency, |x, _| {
        Complex64::new(if x == 0 { 1.0 } else { 0.0 }, 0.0)
    })
}

/// Window `1 ⊗ δ` on the plane.
pub fn periodic_case_window(group: &Group) -> PhaseFunction {
    PhaseFunction::from_fn(group.clone(), PhaseDomain::TimeFrequency, |_, xi| {
        Complex64::new(if xi == 0 { 1.0 } else { 0.0 }, 0.0)
    })
}

/// Plane weight `v ⊗ 1`.
pub fn discrete_case_weight(v: &Weight) -> Weight {
    Weight::tensor(v, &Weight::constant(v.group().clone()))
}

/// Plane weight `1 ⊗ v`.
pub fn periodic_case_weight(v: &Weight) -> Weight {
    Weight::tensor(&Weight::constant(v.group().clone()), v)
}

/// `|‖A‖_{C_v} - ‖σ‖|` for the discrete and periodic matrices with their
/// matching windows and weights, where `v` lives on `ℤ_N`.
pub fn discrete_periodic_residuals(sigma: &Symbol, v: &Weight) -> Result<(f64, f64)> {
    let group = sigma.group().clone();
    let discrete = discrete_case_matrix(sigma)?.cv_norm(v)?;
    let discrete_norm = sjostrand_norm(sigma, &discrete_case_window(&group), &discrete_case_weight(v))?;
    let periodic = periodic_case_matrix(sigma)?.cv_norm(v)?;
    let periodic_norm = sjostrand_norm(sigma, &periodic_case_window(&group), &periodic_case_weight(v))?;
    Ok(((discrete - discrete_norm).abs(), (periodic - periodic_norm).abs()))
}
