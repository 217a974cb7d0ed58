//! Kohn-Nirenberg symbol calculus.
//!
//! `K_σ f(x) = (1/|G|) ∑_ξ σ(x, ξ) f̂(ξ) <ξ, x>`. The spreading function is
//! the plane Fourier transform `σ̂ = F σ` (measure `1/|G|` per point), and
//! `K_σ = (1/|G|) ∑_{ω, u} σ̂(ω, u) M_ω T_{-u}`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{Group, Side, Weight};
use crate::linalg::{hermitian_function, spectral_norm, svd, CMatrix, CVector, OperatorMatrix};
use crate::sjostrand::sjostrand_norm;
use crate::transforms::{
    check_exponent, dft, fourier, inverse_phase_fourier, modulation_norm, phase_fourier, rihaczek, shift_matrix,
    stft, PhaseDomain, PhaseFunction, Signal,
};

/// A Kohn-Nirenberg symbol on `G x Ĝ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Symbol(PhaseFunction);

/// A spreading function on `Ĝ x G`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpreadingFunction(PhaseFunction);

impl Symbol {
    pub fn new(data: PhaseFunction) -> Result<Self> {
        if data.domain() != PhaseDomain::TimeFrequency {
            return Err(Error::DomainMismatch);
        }
        Ok(Symbol(data))
    }

    pub fn from_fn(group: Group, f: impl Fn(usize, usize) -> Complex64) -> Self {
        Symbol(PhaseFunction::from_fn(group, PhaseDomain::TimeFrequency, f))
    }

    pub fn zero(group: Group) -> Self {
        Symbol(PhaseFunction::zeros(group, PhaseDomain::TimeFrequency))
    }

    /// `σ ≡ 1`, the identity operator.
    pub fn identity(group: Group) -> Self {
        Symbol::from_fn(group, |_, _| Complex64::new(1.0, 0.0))
    }

    /// Symbol of `π(x0, ξ0) = M_ξ0 T_x0`: `σ(x, ξ) = <ξ0, x> conj<ξ, x0>`.
    pub fn time_frequency_shift(group: Group, phase: usize) -> Self {
        let (x0, xi0) = group.split_phase(phase);
        let g = group.clone();
        Symbol::from_fn(group, move |x, xi| g.character(xi0, x) * g.character(xi, x0).conj())
    }

    /// Symbol of `T_a`.
    pub fn translation(group: Group, a: usize) -> Self {
        let p = group.phase_index(a, 0);
        Symbol::time_frequency_shift(group, p)
    }

    /// Symbol of `M_η`.
    pub fn modulation(group: Group, eta: usize) -> Self {
        let p = group.phase_index(0, eta);
        Symbol::time_frequency_shift(group, p)
    }

    /// Random symbol whose spreading function has i.i.d. complex Gaussian
    /// entries under the envelope `e^{-c d(ω, u)}`.
    pub fn random_decaying<R: Rng + ?Sized>(group: Group, decay: f64, rng: &mut R) -> Self {
        let phase = group.phase_space();
        let data = (0..phase.order())
            .map(|p| {
                let z = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
                z * (-decay * phase.metric(p) as f64).exp()
            })
            .collect();
        let spread = PhaseFunction::new(group, PhaseDomain::FrequencyTime, data).expect("sized to the plane");
        inverse_spreading(&SpreadingFunction(spread))
    }

    /// `1 + p` where `p` is a random decaying symbol rescaled so that
    /// `‖K_p‖ = strength < 1`; the operator is invertible with condition
    /// number at most `(1 + strength) / (1 - strength)`.
    pub fn random_well_conditioned<R: Rng + ?Sized>(group: Group, decay: f64, strength: f64, rng: &mut R) -> Self {
        let p = Symbol::random_decaying(group.clone(), decay, rng);
        let norm = kn_matrix(&p).spectral_norm();
        let scale = if norm > 0.0 { strength / norm } else { 0.0 };
        Symbol::identity(group).add(&p.scaled(Complex64::new(scale, 0.0)))
    }

    pub fn group(&self) -> &Group {
        self.0.base()
    }

    pub fn data(&self) -> &PhaseFunction {
        &self.0
    }

    pub fn into_inner(self) -> PhaseFunction {
        self.0
    }

    pub fn get(&self, x: usize, xi: usize) -> Complex64 {
        self.0.get(x, xi)
    }

    pub fn scaled(&self, c: Complex64) -> Symbol {
        Symbol(self.0.scaled(c))
    }

    pub fn add(&self, other: &Symbol) -> Symbol {
        Symbol(self.0.add(&other.0).expect("symbols over the same group"))
    }

    pub fn max_abs_diff(&self, other: &Symbol) -> Result<f64> {
        self.0.max_abs_diff(&other.0)
    }
}

impl SpreadingFunction {
    pub fn new(data: PhaseFunction) -> Result<Self> {
        if data.domain() != PhaseDomain::FrequencyTime {
            return Err(Error::DomainMismatch);
        }
        Ok(SpreadingFunction(data))
    }

    /// The unit of twisted convolution: `|G|` at `(0, 0)`.
    pub fn identity(group: Group) -> Self {
        let n = group.order() as f64;
        SpreadingFunction(PhaseFunction::from_fn(group, PhaseDomain::FrequencyTime, |a, b| {
            if a == 0 && b == 0 {
                Complex64::new(n, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        }))
    }

    pub fn group(&self) -> &Group {
        self.0.base()
    }

    pub fn data(&self) -> &PhaseFunction {
        &self.0
    }

    pub fn get(&self, omega: usize, u: usize) -> Complex64 {
        self.0.get(omega, u)
    }

    pub fn max_abs_diff(&self, other: &SpreadingFunction) -> Result<f64> {
        self.0.max_abs_diff(&other.0)
    }
}

fn same_group(a: &Group, b: &Group) -> Result<()> {
    if a != b {
        return Err(Error::ModulusMismatch {
            expected: a.moduli().to_vec(),
            found: b.moduli().to_vec(),
        });
    }
    Ok(())
}

/// Matrix-free `K_σ f`.
pub fn kn_apply(sigma: &Symbol, f: &Signal) -> Result<Signal> {
    same_group(sigma.group(), f.group())?;
    if f.side() != Side::Time {
        return Err(Error::SideMismatch);
    }
    let group = f.group().clone();
    let n = group.order();
    let f_hat = fourier(f);
    let scale = 1.0 / n as f64;
    Ok(Signal::from_fn(group.clone(), Side::Time, |x| {
        (0..n).fold(Complex64::new(0.0, 0.0), |acc, xi| {
            acc + sigma.get(x, xi) * f_hat.at(xi) * group.character(xi, x)
        }) * scale
    }))
}

/// `K(x, y) = (1/|G|) ∑_ξ σ(x, ξ) <ξ, x - y>`.
pub fn kn_matrix(sigma: &Symbol) -> OperatorMatrix {
    let group = sigma.group();
    let n = group.order();
    let scale = 1.0 / n as f64;
    let mut k = CMatrix::zeros(n, n);
    for x in 0..n {
        let row = &sigma.data().data()[x * n..(x + 1) * n];
        let s = dft(group, row, true);
        for y in 0..n {
            k[(x, y)] = s[group.sub(x, y)] * scale;
        }
    }
    OperatorMatrix(k)
}

/// Inverse of [`kn_matrix`]: `σ(x, ξ) = ∑_y K(x, y) <ξ, y - x>`.
pub fn kn_symbol_from_matrix(group: &Group, k: &OperatorMatrix) -> Result<Symbol> {
    let n = group.order();
    if k.0.nrows() != n || k.0.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: k.0.nrows().max(k.0.ncols()),
        });
    }
    let mut data = Vec::with_capacity(n * n);
    let mut diag = vec![Complex64::new(0.0, 0.0); n];
    for x in 0..n {
        for (u, slot) in diag.iter_mut().enumerate() {
            *slot = k.0[(x, group.sub(x, u))];
        }
        data.extend(dft(group, &diag, false));
    }
    Symbol::new(PhaseFunction::new(group.clone(), PhaseDomain::TimeFrequency, data)?)
}

pub fn spreading(sigma: &Symbol) -> SpreadingFunction {
    SpreadingFunction(phase_fourier(sigma.data()))
}

pub fn inverse_spreading(spread: &SpreadingFunction) -> Symbol {
    Symbol(inverse_phase_fourier(spread.data()))
}

/// `(1/|G|) ∑_{ω, u} σ̂(ω, u) M_ω T_{-u}` assembled densely.
pub fn spreading_reconstruction(spread: &SpreadingFunction) -> OperatorMatrix {
    let group = spread.group();
    let n = group.order();
    let mut k = CMatrix::zeros(n, n);
    for omega in 0..n {
        for u in 0..n {
            let c = spread.get(omega, u);
            if c.norm() == 0.0 {
                continue;
            }
            let shift = shift_matrix(group, group.phase_index(group.neg(u), omega));
            k += shift * (c / n as f64);
        }
    }
    OperatorMatrix(k)
}

/// `(F ♮ G)(ξ, u) = (1/|G|) ∑_{ζ, y} F(ζ, y) G(ξ - ζ, u - y) <ξ - ζ, y>`.
pub fn twisted_convolution(f: &SpreadingFunction, g: &SpreadingFunction) -> Result<SpreadingFunction> {
    f.0.compatible(&g.0)?;
    let group = f.group().clone();
    let n = group.order();
    let scale = 1.0 / n as f64;
    let mut out = vec![Complex64::new(0.0, 0.0); n * n];
    for zeta in 0..n {
        for y in 0..n {
            let a = f.get(zeta, y);
            if a.norm() == 0.0 {
                continue;
            }
            for xi in 0..n {
                let d = group.sub(xi, zeta);
                let weighted = a * group.character(d, y) * scale;
                for u in 0..n {
                    out[xi * n + u] += weighted * g.get(d, group.sub(u, y));
                }
            }
        }
    }
    Ok(SpreadingFunction(PhaseFunction::new(group, PhaseDomain::FrequencyTime, out)?))
}

/// Symbol of `K_σ K_τ`, via twisted convolution of spreading functions.
pub fn compose_symbols(sigma: &Symbol, tau: &Symbol) -> Result<Symbol> {
    Ok(inverse_spreading(&twisted_convolution(&spreading(sigma), &spreading(tau))?))
}

/// `|⟨K_σ f, g⟩ - ⟨σ, R(g, f)⟩|`.
pub fn kn_rihaczek_residual(sigma: &Symbol, f: &Signal, g: &Signal) -> Result<f64> {
    let lhs = kn_apply(sigma, f)?.inner(g)?;
    let rhs = sigma.data().inner(&rihaczek(g, f)?)?;
    Ok((lhs - rhs).norm())
}

/// Both sides of `⟨K_σ π(y) f, π(x) g⟩ = conj<η, x - y> V_{R(g, f)} σ((x, η), J(y - x))`
/// with `x = (x, ξ)` and `y = (y, η)`.
pub fn rihaczek_stft_sides(
    sigma: &Symbol,
    f: &Signal,
    g: &Signal,
    x_point: usize,
    y_point: usize,
) -> Result<(Complex64, Complex64)> {
    let group = sigma.group().clone();
    let phase = group.phase_space();
    let lhs = kn_apply(sigma, &f.shifted(y_point))?.inner(&g.shifted(x_point))?;
    let (x, _) = group.split_phase(x_point);
    let (y, eta) = group.split_phase(y_point);
    let window = rihaczek(g, f)?;
    let z = group.phase_index(x, eta);
    let omega = group.j_map(phase.sub(y_point, x_point));
    let v = crate::transforms::phase_stft_at(sigma.data(), &window, z, omega)?;
    Ok((lhs, group.character(eta, group.sub(x, y)).conj() * v))
}

/// Outcome of [`kn_bound_on_modulation_space`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModulationBound {
    /// `max ‖K_σ f‖ / ‖f‖` over the probe set, in `M^{p,q}_m`.
    pub ratio: f64,
    /// `‖σ‖` in `M^{∞,1}_{v∘J⁻¹}` with window `R(g, g)`.
    pub symbol_norm: f64,
    /// `ratio / symbol_norm`.
    pub empirical_constant: f64,
    pub probes: usize,
}

/// Number of seeded random probes added to the standard basis.
pub const RANDOM_PROBES: usize = 100;

/// Empirical operator norm of `K_σ` on `M^{p,q}_m`.
///
/// Probes are the standard basis, [`RANDOM_PROBES`] seeded random signals
/// and, at `p = q = 2`, the maximizing vector of the quadratic form, which
/// makes the reported ratio the exact operator norm in that case.
pub fn kn_bound_on_modulation_space(
    sigma: &Symbol,
    g: &Signal,
    p: f64,
    q: f64,
    m: &Weight,
    v: &Weight,
    seed: u64,
) -> Result<ModulationBound> {
    check_exponent(p)?;
    check_exponent(q)?;
    same_group(sigma.group(), g.group())?;
    if g.is_zero() {
        return Err(Error::ZeroWindow);
    }
    m.check_moderate(v)?;
    let group = sigma.group().clone();
    let n = group.order();
    let mut probes: Vec<Signal> = (0..n).map(|i| Signal::delta(group.clone(), i)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    probes.extend((0..RANDOM_PROBES).map(|_| Signal::random(group.clone(), &mut rng)));
    if p == 2.0 && q == 2.0 {
        probes.push(l2_extremal_probe(sigma, g, m)?);
    }
    let mut ratio: f64 = 0.0;
    for f in &probes {
        let denominator = modulation_norm(f, g, p, q, m)?;
        if denominator == 0.0 {
            continue;
        }
        let numerator = modulation_norm(&kn_apply(sigma, f)?, g, p, q, m)?;
        ratio = ratio.max(numerator / denominator);
    }
    let psi = rihaczek(g, g)?;
    let symbol_norm = sjostrand_norm(sigma, &psi, v)?;
    Ok(ModulationBound {
        ratio,
        symbol_norm,
        empirical_constant: if symbol_norm > 0.0 { ratio / symbol_norm } else { 0.0 },
        probes: probes.len(),
    })
}

/// The maximizer of `‖K_σ f‖ / ‖f‖` in `M^{2,2}_m`. With `B = diag(m) V_g`
/// (rows weighted by the plane measure) and `R = (B^* B)^{1/2}` it is
/// `R^{-1} h` for `h` the top right singular vector of `R K R^{-1}`.
fn l2_extremal_probe(sigma: &Symbol, g: &Signal, m: &Weight) -> Result<Signal> {
    let group = sigma.group().clone();
    let n = group.order();
    let mut b = CMatrix::zeros(n * n, n);
    let row_mass = (1.0 / n as f64).sqrt();
    for y in 0..n {
        let column = stft(&Signal::delta(group.clone(), y), g)?;
        for p in 0..n * n {
            b[(p, y)] = column.at(p) * m.value(p) * row_mass;
        }
    }
    let gram = b.adjoint() * &b;
    let r = hermitian_function(&gram, f64::sqrt);
    let r_inv = hermitian_function(&gram, |l| 1.0 / l.sqrt());
    let conjugated = &r * kn_matrix(sigma).matrix() * &r_inv;
    let svd = svd(&conjugated, false, true);
    let v_t = svd.v_t.as_ref().expect("requested V^*");
    let top = (0..svd.singular_values.len())
        .max_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]))
        .unwrap_or(0);
    let h: CVector = v_t.row(top).adjoint();
    Signal::from_vector(group, Side::Time, &(r_inv * h))
}

/// Spectral norm of `K_σ` on `L²(G)`.
pub fn kn_operator_norm(sigma: &Symbol) -> f64 {
    spectral_norm(kn_matrix(sigma).matrix())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;

    fn z(n: usize) -> Group {
        Group::cyclic(n).unwrap()
    }

    /// Dense oracle: `K(x, y)` by the defining double sum.
    fn kernel_oracle(sigma: &Symbol) -> CMatrix {
        let g = sigma.group();
        let n = g.order();
        CMatrix::from_fn(n, n, |x, y| {
            (0..n).map(|xi| sigma.get(x, xi) * g.character(xi, g.sub(x, y))).sum::<Complex64>() / n as f64
        })
    }

    #[test]
    fn identity_symbol_is_identity() {
        let g = Group::new(vec![2, 3]).unwrap();
        let k = kn_matrix(&Symbol::identity(g.clone()));
        assert!(k.max_abs_diff(&OperatorMatrix::identity(6)) < 1e-14);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = Signal::random(g.clone(), &mut rng);
        assert!(kn_apply(&Symbol::identity(g), &f).unwrap().max_abs_diff(&f).unwrap() < 1e-13);
    }

    #[test]
    fn translation_and_modulation_symbols() {
        let g = z(8);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let f = Signal::random(g.clone(), &mut rng);
        for a in 0..8 {
            let t = kn_apply(&Symbol::translation(g.clone(), a), &f).unwrap();
            assert!(t.max_abs_diff(&f.translated(a)).unwrap() < 1e-12);
            let m = kn_apply(&Symbol::modulation(g.clone(), a), &f).unwrap();
            assert!(m.max_abs_diff(&f.modulated(a)).unwrap() < 1e-12);
        }
        for p in [0, 9, 27, 63] {
            let k = kn_matrix(&Symbol::time_frequency_shift(g.clone(), p));
            assert!(max_abs_diff(k.matrix(), &shift_matrix(&g, p)) < 1e-12);
        }
    }

    #[test]
    fn kn_matrix_matches_oracle_and_apply() {
        let g = Group::new(vec![2, 4]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let sigma = Symbol::random_decaying(g.clone(), 0.3, &mut rng);
        let k = kn_matrix(&sigma);
        assert!(max_abs_diff(k.matrix(), &kernel_oracle(&sigma)) < 1e-12);
        let f = Signal::random(g.clone(), &mut rng);
        let applied = k.matrix() * f.to_vector();
        let direct = kn_apply(&sigma, &f).unwrap();
        assert!(crate::linalg::max_abs_diff_slices(applied.as_slice(), direct.data()) < 1e-12);
    }

    #[test]
    fn symbol_round_trip() {
        let g = z(6);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let sigma = Symbol::random_decaying(g.clone(), 0.2, &mut rng);
            let back = kn_symbol_from_matrix(&g, &kn_matrix(&sigma)).unwrap();
            assert!(back.max_abs_diff(&sigma).unwrap() < 1e-10);
        }
        let t = OperatorMatrix(shift_matrix(&g, g.phase_index(2, 0)));
        let sigma = kn_symbol_from_matrix(&g, &t).unwrap();
        assert!(sigma.max_abs_diff(&Symbol::translation(g, 2)).unwrap() < 1e-12);
    }

    #[test]
    fn spreading_of_identity_and_translation() {
        let g = z(6);
        let spread = spreading(&Symbol::identity(g.clone()));
        assert!(spread.max_abs_diff(&SpreadingFunction::identity(g.clone())).unwrap() < 1e-12);
        let a = 2;
        let spread = spreading(&Symbol::translation(g.clone(), a));
        for omega in 0..6 {
            for u in 0..6 {
                if u != g.neg(a) {
                    assert!(spread.get(omega, u).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn spreading_reconstruction_and_inverse() {
        let g = z(6);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let sigma = Symbol::random_decaying(g.clone(), 0.1, &mut rng);
            let spread = spreading(&sigma);
            let k = spreading_reconstruction(&spread);
            assert!(k.max_abs_diff(&kn_matrix(&sigma)) < 1e-10);
            assert!(inverse_spreading(&spread).max_abs_diff(&sigma).unwrap() < 1e-12);
        }
    }

    #[test]
    fn twisted_convolution_identity_and_shifts() {
        let g = z(6);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let f = spreading(&Symbol::random_decaying(g.clone(), 0.1, &mut rng));
        let e = SpreadingFunction::identity(g.clone());
        assert!(twisted_convolution(&f, &e).unwrap().max_abs_diff(&f).unwrap() < 1e-12);
        assert!(twisted_convolution(&e, &f).unwrap().max_abs_diff(&f).unwrap() < 1e-12);
        for (p, q) in [(7, 20), (1, 35), (30, 5)] {
            let a = Symbol::time_frequency_shift(g.clone(), p);
            let b = Symbol::time_frequency_shift(g.clone(), q);
            let product = &shift_matrix(&g, p) * &shift_matrix(&g, q);
            let composed = kn_matrix(&compose_symbols(&a, &b).unwrap());
            assert!(max_abs_diff(composed.matrix(), &product) < 1e-10);
        }
    }

    #[test]
    fn twisted_convolution_is_associative() {
        let g = z(4);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let s: Vec<SpreadingFunction> = (0..3)
            .map(|_| spreading(&Symbol::random_decaying(g.clone(), 0.2, &mut rng)))
            .collect();
        let left = twisted_convolution(&twisted_convolution(&s[0], &s[1]).unwrap(), &s[2]).unwrap();
        let right = twisted_convolution(&s[0], &twisted_convolution(&s[1], &s[2]).unwrap()).unwrap();
        assert!(left.max_abs_diff(&right).unwrap() < 1e-10);
    }

    #[test]
    fn composition_matches_matrix_product() {
        let g = z(6);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let identity = Symbol::identity(g.clone());
        for _ in 0..20 {
            let sigma = Symbol::random_decaying(g.clone(), 0.2, &mut rng);
            let tau = Symbol::random_decaying(g.clone(), 0.2, &mut rng);
            let composed = kn_matrix(&compose_symbols(&sigma, &tau).unwrap());
            let product = kn_matrix(&sigma).compose(&kn_matrix(&tau));
            assert!(composed.max_abs_diff(&product) < 1e-10);
            assert!(compose_symbols(&identity, &tau).unwrap().max_abs_diff(&tau).unwrap() < 1e-10);
        }
        for a in 0..6 {
            for b in 0..6 {
                let c = compose_symbols(&Symbol::translation(g.clone(), a), &Symbol::translation(g.clone(), b)).unwrap();
                assert!(c.max_abs_diff(&Symbol::translation(g.clone(), g.add(a, b))).unwrap() < 1e-10);
            }
        }
    }

    #[test]
    fn kn_rihaczek_pairing() {
        let g = z(6);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..10 {
            let sigma = Symbol::random_decaying(g.clone(), 0.0, &mut rng);
            let f = Signal::random(g.clone(), &mut rng);
            let h = Signal::random(g.clone(), &mut rng);
            assert!(kn_rihaczek_residual(&sigma, &f, &h).unwrap() < 1e-10);
        }
    }

    #[test]
    fn rihaczek_stft_identity_exhaustive_on_z4() {
        let g = z(4);
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let sigma = Symbol::random_decaying(g.clone(), 0.1, &mut rng);
        let f = Signal::random(g.clone(), &mut rng);
        let h = Signal::random(g.clone(), &mut rng);
        for x in 0..16 {
            for y in 0..16 {
                let (lhs, rhs) = rihaczek_stft_sides(&sigma, &f, &h, x, y).unwrap();
                assert!((lhs - rhs).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn modulation_bound_for_identity_is_one() {
        let g = z(6);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let window = Signal::random(g.clone(), &mut rng);
        let v = Weight::polynomial(g.phase_space(), 1.0).unwrap();
        let m = Weight::polynomial_moderate(g.phase_space(), 1.0).unwrap();
        for (p, q) in [(1.0, 1.0), (2.0, 2.0), (1.0, f64::INFINITY), (3.0, 1.5)] {
            let bound = kn_bound_on_modulation_space(&Symbol::identity(g.clone()), &window, p, q, &m, &v, 0).unwrap();
            assert!((bound.ratio - 1.0).abs() < 1e-12, "{p} {q} {bound:?}");
        }
    }

    #[test]
    fn modulation_bound_at_two_two_is_spectral_norm() {
        let g = z(8);
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let window = Signal::random(g.clone(), &mut rng);
        let one = Weight::constant(g.phase_space());
        for _ in 0..3 {
            let sigma = Symbol::random_decaying(g.clone(), 0.3, &mut rng);
            let bound = kn_bound_on_modulation_space(&sigma, &window, 2.0, 2.0, &one, &one, 1).unwrap();
            assert!((bound.ratio - kn_operator_norm(&sigma)).abs() < 1e-8 * kn_operator_norm(&sigma));
            assert!(bound.symbol_norm > 0.0);
        }
    }

    #[test]
    fn shift_symbol_bound_respects_weight() {
        let g = z(8);
        let window = Signal::delta(g.clone(), 0).add(&Signal::delta(g.clone(), 1)).unwrap();
        let v = Weight::polynomial(g.phase_space(), 1.0).unwrap();
        let m = Weight::polynomial_moderate(g.phase_space(), 1.0).unwrap();
        let x0 = g.phase_index(3, 2);
        let bound =
            kn_bound_on_modulation_space(&Symbol::time_frequency_shift(g.clone(), x0), &window, 2.0, 2.0, &m, &v, 0)
                .unwrap();
        let constant = m.moderateness_constant(&v).unwrap();
        assert!(bound.ratio <= constant * v.value(x0) * (1.0 + 1e-12));
    }

    #[test]
    fn modulation_bound_rejects_bad_input() {
        let g = z(4);
        let one = Weight::constant(g.phase_space());
        let sigma = Symbol::identity(g.clone());
        let zero = Signal::zeros(g.clone(), Side::Time);
        assert_eq!(
            kn_bound_on_modulation_space(&sigma, &zero, 2.0, 2.0, &one, &one, 0),
            Err(Error::ZeroWindow)
        );
        let heavy = Weight::polynomial(g.phase_space(), 3.0).unwrap();
        let window = Signal::delta(g.clone(), 0);
        assert!(matches!(
            kn_bound_on_modulation_space(&sigma, &window, 2.0, 2.0, &heavy, &one, 0),
            Err(Error::NotModerate { .. })
        ));
    }
}
