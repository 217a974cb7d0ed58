//! Fourier transform, time-frequency shifts, short-time Fourier transforms
//! and Rihaczek distributions.
//!
//! Measures: counting measure on `G`, `1/|G|` times counting measure on `Ĝ`,
//! and the product measure (`1/|G|` per point) on both `G x Ĝ` and `Ĝ x G`.
//! With these choices Fourier inversion and Plancherel hold without extra
//! constants, so every integral is a literal weighted sum:
//!
//! * `f̂(xi) = sum_x f(x) conj<xi, x>`, `f(x) = (1/|G|) sum_xi f̂(xi) <xi, x>`
//! * `V_g f(x, xi) = sum_y f(y) conj(g(y - x)) conj<xi, y>`
//! * on `Ĝ`, the STFT `V_ĝ f̂` carries the `1/|G|` factor of the dual measure.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Element, Group, PhasePoint, Side, Subgroup, Weight};
use crate::linalg::{max_abs_diff_slices, CMatrix, CVector};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Separable DFT over all cyclic factors. `inverse` selects the sign of the
/// exponent (`+` for inverse); no normalization is applied.
pub(crate) fn dft(group: &Group, data: &[Complex64], inverse: bool) -> Vec<Complex64> {
    debug_assert_eq!(data.len(), group.order());
    let sign = if inverse { 1.0 } else { -1.0 };
    let mut buf = data.to_vec();
    let mut scratch = Vec::new();
    let mut stride = group.order();
    for &n in group.moduli() {
        stride /= n;
        if n == 1 {
            continue;
        }
        let twiddles: Vec<Complex64> = (0..n)
            .map(|k| Complex64::from_polar(1.0, sign * std::f64::consts::TAU * k as f64 / n as f64))
            .collect();
        scratch.resize(n, ZERO);
        let block = n * stride;
        for start in (0..buf.len()).step_by(block) {
            for offset in 0..stride {
                let base = start + offset;
                for (k, slot) in scratch.iter_mut().enumerate() {
                    *slot = (0..n).fold(ZERO, |acc, m| acc + buf[base + m * stride] * twiddles[(k * m) % n]);
                }
                for (k, &value) in scratch.iter().enumerate() {
                    buf[base + k * stride] = value;
                }
            }
        }
    }
    buf
}

/// A complex function on `G` (time side) or `Ĝ` (frequency side).
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    group: Group,
    side: Side,
    data: Vec<Complex64>,
}

impl Signal {
    pub fn new(group: Group, side: Side, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != group.order() {
            return Err(Error::DimensionMismatch {
                expected: group.order(),
                found: data.len(),
            });
        }
        Ok(Signal { group, side, data })
    }

    pub fn zeros(group: Group, side: Side) -> Self {
        let data = vec![ZERO; group.order()];
        Signal { group, side, data }
    }

    pub fn from_fn(group: Group, side: Side, f: impl Fn(usize) -> Complex64) -> Self {
        let data = (0..group.order()).map(f).collect();
        Signal { group, side, data }
    }

    /// Point mass `δ_a` (value 1 at `a`).
    pub fn delta(group: Group, at: usize) -> Self {
        Signal::from_fn(group, Side::Time, |x| if x == at { Complex64::new(1.0, 0.0) } else { ZERO })
    }

    pub fn constant(group: Group, value: Complex64) -> Self {
        Signal::from_fn(group, Side::Time, |_| value)
    }

    /// Indicator function `χ_K` of a subgroup.
    pub fn indicator(subgroup: &Subgroup) -> Self {
        Signal::from_fn(subgroup.ambient().clone(), Side::Time, |x| {
            if subgroup.contains(x) {
                Complex64::new(1.0, 0.0)
            } else {
                ZERO
            }
        })
    }

    /// Periodized discrete Gaussian `∏_j exp(-π d_j(x)² / (width N_j))`,
    /// with `d_j` the circular distance on factor `j`. `width = 1` is the
    /// profile that is nearly invariant under the Fourier transform.
    pub fn gaussian(group: Group, width: f64) -> Result<Self> {
        if !(width.is_finite() && width > 0.0) {
            return Err(Error::InvalidWindow(format!("gaussian width {width} must be positive")));
        }
        let moduli = group.moduli().to_vec();
        let g = group.clone();
        Ok(Signal::from_fn(group, Side::Time, move |x| {
            let exponent: f64 = g
                .coords(x)
                .iter()
                .zip(&moduli)
                .map(|(&c, &n)| {
                    let d = c.min(n - c) as f64;
                    d * d / (width * n as f64)
                })
                .sum();
            Complex64::new((-std::f64::consts::PI * exponent).exp(), 0.0)
        }))
    }

    /// Independent standard complex Gaussian samples.
    pub fn random<R: Rng + ?Sized>(group: Group, rng: &mut R) -> Self {
        let data = (0..group.order())
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        Signal {
            group,
            side: Side::Time,
            data,
        }
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<Complex64> {
        self.data
    }

    pub fn at(&self, index: usize) -> Complex64 {
        self.data[index]
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn point_mass(&self) -> f64 {
        self.side.point_mass(self.group.order())
    }

    pub fn to_vector(&self) -> CVector {
        CVector::from_column_slice(&self.data)
    }

    pub fn from_vector(group: Group, side: Side, v: &CVector) -> Result<Self> {
        Signal::new(group, side, v.iter().copied().collect())
    }

    fn compatible(&self, other: &Signal) -> Result<()> {
        if self.group != other.group {
            return Err(Error::ModulusMismatch {
                expected: self.group.moduli().to_vec(),
                found: other.group.moduli().to_vec(),
            });
        }
        if self.side != other.side {
            return Err(Error::SideMismatch);
        }
        Ok(())
    }

    /// `<f, h> = ∫ f conj(h)` under the side's Haar measure.
    pub fn inner(&self, other: &Signal) -> Result<Complex64> {
        self.compatible(other)?;
        let sum = self
            .data
            .iter()
            .zip(&other.data)
            .fold(ZERO, |acc, (a, b)| acc + a * b.conj());
        Ok(sum * self.point_mass())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.point_mass()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| *z == ZERO)
    }

    pub fn scaled(&self, c: Complex64) -> Signal {
        self.map(|z| z * c)
    }

    pub fn conj(&self) -> Signal {
        self.map(|z| z.conj())
    }

    fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Signal {
        Signal {
            group: self.group.clone(),
            side: self.side,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn add(&self, other: &Signal) -> Result<Signal> {
        self.compatible(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(Signal {
            group: self.group.clone(),
            side: self.side,
            data,
        })
    }

    pub fn sub(&self, other: &Signal) -> Result<Signal> {
        self.add(&other.scaled(Complex64::new(-1.0, 0.0)))
    }

    pub fn max_abs_diff(&self, other: &Signal) -> Result<f64> {
        self.compatible(other)?;
        Ok(max_abs_diff_slices(&self.data, &other.data))
    }

    /// `T_y f(x) = f(x - y)`.
    pub fn translated(&self, y: usize) -> Signal {
        Signal::from_fn(self.group.clone(), self.side, |x| self.data[self.group.sub(x, y)])
            .with_side(self.side)
    }

    /// `M_xi f(x) = <xi, x> f(x)`.
    pub fn modulated(&self, xi: usize) -> Signal {
        Signal::from_fn(self.group.clone(), self.side, |x| self.group.character(xi, x) * self.data[x])
    }

    /// `π(x, xi) f = M_xi T_x f` for a phase index `(x, xi)`.
    pub fn shifted(&self, phase: usize) -> Signal {
        let (x, xi) = self.group.split_phase(phase);
        self.translated(x).modulated(xi)
    }

    /// `f(-x)`.
    pub fn reflected(&self) -> Signal {
        Signal::from_fn(self.group.clone(), self.side, |x| self.data[self.group.neg(x)])
    }

    fn with_side(mut self, side: Side) -> Signal {
        self.side = side;
        self
    }
}

fn check_element(group: &Group, element: &Element) -> Result<usize> {
    group.index(element)
}

/// `f̂(xi) = ∫ f(x) conj<xi, x> dx`; maps time to frequency side and back.
pub fn fourier(f: &Signal) -> Signal {
    let mass = f.point_mass();
    let data = dft(&f.group, &f.data, false).into_iter().map(|z| z * mass).collect();
    Signal {
        group: f.group.clone(),
        side: f.side.dual(),
        data,
    }
}

/// Inverse of [`fourier`].
pub fn inverse_fourier(f: &Signal) -> Signal {
    let mass = f.point_mass();
    let data = dft(&f.group, &f.data, true).into_iter().map(|z| z * mass).collect();
    Signal {
        group: f.group.clone(),
        side: f.side.dual(),
        data,
    }
}

pub fn translate(f: &Signal, y: &Element) -> Result<Signal> {
    Ok(f.translated(check_element(&f.group, y)?))
}

pub fn modulate(f: &Signal, xi: &Element) -> Result<Signal> {
    Ok(f.modulated(check_element(&f.group, xi)?))
}

pub fn tf_shift(f: &Signal, p: &PhasePoint) -> Result<Signal> {
    Ok(f.shifted(p.index_in(&f.group)?))
}

/// Matrix of `π(x, xi)` for a phase index `(x, xi)`.
pub fn shift_matrix(group: &Group, phase: usize) -> CMatrix {
    let n = group.order();
    let (x, xi) = group.split_phase(phase);
    let mut m = CMatrix::zeros(n, n);
    for c in 0..n {
        let r = group.add(c, x);
        m[(r, c)] = group.character(xi, r);
    }
    m
}

/// Which plane a phase-space function lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PhaseDomain {
    /// `G x Ĝ`, indexed `(x, xi)`.
    TimeFrequency,
    /// `Ĝ x G`, indexed `(omega, u)`.
    FrequencyTime,
}

impl PhaseDomain {
    pub fn dual(self) -> PhaseDomain {
        match self {
            PhaseDomain::TimeFrequency => PhaseDomain::FrequencyTime,
            PhaseDomain::FrequencyTime => PhaseDomain::TimeFrequency,
        }
    }
}

/// A complex function on `G x Ĝ` or `Ĝ x G`, with `|G|^2` values.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseFunction {
    base: Group,
    domain: PhaseDomain,
    data: Vec<Complex64>,
}

impl PhaseFunction {
    pub fn new(base: Group, domain: PhaseDomain, data: Vec<Complex64>) -> Result<Self> {
        let expected = base.order() * base.order();
        if data.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: data.len(),
            });
        }
        Ok(PhaseFunction { base, domain, data })
    }

    pub fn zeros(base: Group, domain: PhaseDomain) -> Self {
        let data = vec![ZERO; base.order() * base.order()];
        PhaseFunction { base, domain, data }
    }

    /// Builds from `f(first, second)` with both arguments as element indices.
    pub fn from_fn(base: Group, domain: PhaseDomain, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let n = base.order();
        let data = (0..n * n).map(|i| f(i / n, i % n)).collect();
        PhaseFunction { base, domain, data }
    }

    /// `f1 ⊗ f2`.
    pub fn tensor(first: &Signal, second: &Signal, domain: PhaseDomain) -> Result<Self> {
        if first.group != second.group {
            return Err(Error::ModulusMismatch {
                expected: first.group.moduli().to_vec(),
                found: second.group.moduli().to_vec(),
            });
        }
        Ok(PhaseFunction::from_fn(first.group.clone(), domain, |a, b| {
            first.data[a] * second.data[b]
        }))
    }

    pub fn base(&self) -> &Group {
        &self.base
    }

    pub fn domain(&self) -> PhaseDomain {
        self.domain
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn get(&self, first: usize, second: usize) -> Complex64 {
        self.data[first * self.base.order() + second]
    }

    pub fn at(&self, phase: usize) -> Complex64 {
        self.data[phase]
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn point_mass(&self) -> f64 {
        1.0 / self.base.order() as f64
    }

    pub fn phase_group(&self) -> Group {
        self.base.phase_space()
    }

    pub(crate) fn compatible(&self, other: &PhaseFunction) -> Result<()> {
        if self.base != other.base {
            return Err(Error::ModulusMismatch {
                expected: self.base.moduli().to_vec(),
                found: other.base.moduli().to_vec(),
            });
        }
        if self.domain != other.domain {
            return Err(Error::DomainMismatch);
        }
        Ok(())
    }

    pub fn inner(&self, other: &PhaseFunction) -> Result<Complex64> {
        self.compatible(other)?;
        let sum = self
            .data
            .iter()
            .zip(&other.data)
            .fold(ZERO, |acc, (a, b)| acc + a * b.conj());
        Ok(sum * self.point_mass())
    }

    pub fn norm(&self) -> f64 {
        (self.data.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.point_mass()).sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| *z == ZERO)
    }

    pub fn max_abs_diff(&self, other: &PhaseFunction) -> Result<f64> {
        self.compatible(other)?;
        Ok(max_abs_diff_slices(&self.data, &other.data))
    }

    pub fn scaled(&self, c: Complex64) -> PhaseFunction {
        PhaseFunction {
            base: self.base.clone(),
            domain: self.domain,
            data: self.data.iter().map(|&z| z * c).collect(),
        }
    }

    pub fn add(&self, other: &PhaseFunction) -> Result<PhaseFunction> {
        self.compatible(other)?;
        Ok(PhaseFunction {
            base: self.base.clone(),
            domain: self.domain,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    /// `T_z F(w) = F(w - z)` on the plane.
    pub fn translated(&self, z: usize) -> PhaseFunction {
        let phase = self.phase_group();
        PhaseFunction {
            base: self.base.clone(),
            domain: self.domain,
            data: (0..self.data.len()).map(|w| self.data[phase.sub(w, z)]).collect(),
        }
    }

    /// `M_omega F(z) = <omega, z> F(z)` with `omega` in the dual plane.
    pub fn modulated(&self, omega: usize) -> PhaseFunction {
        let phase = self.phase_group();
        PhaseFunction {
            base: self.base.clone(),
            domain: self.domain,
            data: (0..self.data.len())
                .map(|z| phase.character(omega, z) * self.data[z])
                .collect(),
        }
    }

    /// Moves the function across `J`: a function `F` on `Ĝ x G` becomes
    /// `F ∘ J` on `G x Ĝ`, and a function on `G x Ĝ` becomes `F ∘ J^{-1}`.
    pub fn pull_back_j(&self) -> PhaseFunction {
        let data = (0..self.data.len())
            .map(|p| match self.domain {
                PhaseDomain::FrequencyTime => self.data[self.base.j_map(p)],
                PhaseDomain::TimeFrequency => self.data[self.base.j_inverse(p)],
            })
            .collect();
        PhaseFunction {
            base: self.base.clone(),
            domain: self.domain.dual(),
            data,
        }
    }
}

/// Fourier transform on the plane: `F̂(omega, u) = ∫∫ F(x, xi) conj(<omega, x><xi, u>)`.
pub fn phase_fourier(f: &PhaseFunction) -> PhaseFunction {
    let mass = f.point_mass();
    let data = dft(&f.phase_group(), &f.data, false).into_iter().map(|z| z * mass).collect();
    PhaseFunction {
        base: f.base.clone(),
        domain: f.domain.dual(),
        data,
    }
}

pub fn inverse_phase_fourier(f: &PhaseFunction) -> PhaseFunction {
    let mass = f.point_mass();
    let data = dft(&f.phase_group(), &f.data, true).into_iter().map(|z| z * mass).collect();
    PhaseFunction {
        base: f.base.clone(),
        domain: f.domain.dual(),
        data,
    }
}

/// `V_g f(x, xi) = ⟨f, M_xi T_x g⟩`.
///
/// Time-side inputs give a function on `G x Ĝ`; frequency-side inputs give a
/// function on `Ĝ x G` computed with the dual measure.
pub fn stft(f: &Signal, g: &Signal) -> Result<PhaseFunction> {
    f.compatible(g)?;
    if g.is_zero() {
        return Err(Error::ZeroWindow);
    }
    let group = &f.group;
    let n = group.order();
    let mass = f.point_mass();
    let mut data = Vec::with_capacity(n * n);
    let mut product = vec![ZERO; n];
    for x in 0..n {
        for (y, slot) in product.iter_mut().enumerate() {
            *slot = f.data[y] * g.data[group.sub(y, x)].conj();
        }
        data.extend(dft(group, &product, false).into_iter().map(|z| z * mass));
    }
    let domain = match f.side {
        Side::Time => PhaseDomain::TimeFrequency,
        Side::Frequency => PhaseDomain::FrequencyTime,
    };
    Ok(PhaseFunction {
        base: group.clone(),
        domain,
        data,
    })
}

/// `R(f, g)(x, xi) = f(x) conj(ĝ(xi)) conj<xi, x>`.
pub fn rihaczek(f: &Signal, g: &Signal) -> Result<PhaseFunction> {
    f.compatible(g)?;
    if f.side != Side::Time {
        return Err(Error::SideMismatch);
    }
    let g_hat = fourier(g);
    let group = f.group.clone();
    Ok(PhaseFunction::from_fn(group.clone(), PhaseDomain::TimeFrequency, |x, xi| {
        f.data[x] * g_hat.data[xi].conj() * group.character(xi, x).conj()
    }))
}

/// The STFT of a phase-space function, indexed by `(z, omega)` with `z` in
/// the function's plane and `omega` in the dual plane.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseStft {
    base: Group,
    data: Vec<Complex64>,
}

impl PhaseStft {
    pub fn base(&self) -> &Group {
        &self.base
    }

    fn plane(&self) -> usize {
        self.base.order() * self.base.order()
    }

    pub fn get(&self, z: usize, omega: usize) -> Complex64 {
        self.data[z * self.plane() + omega]
    }

    /// `sup_z |V_Ψ F(z, omega)|` for every `omega` of the dual plane.
    pub fn column_sup(&self) -> Vec<f64> {
        let p = self.plane();
        let mut sup = vec![0.0f64; p];
        for row in self.data.chunks(p) {
            for (s, z) in sup.iter_mut().zip(row) {
                *s = s.max(z.norm());
            }
        }
        sup
    }
}

/// `V_Ψ F(z, omega) = ⟨F, M_omega T_z Ψ⟩` over the whole doubled plane.
pub fn phase_stft(f: &PhaseFunction, window: &PhaseFunction) -> Result<PhaseStft> {
    f.compatible(window)?;
    if window.is_zero() {
        return Err(Error::ZeroWindow);
    }
    let phase = f.phase_group();
    let p = phase.order();
    let mass = f.point_mass();
    let mut data = Vec::with_capacity(p * p);
    let mut product = vec![ZERO; p];
    for z in 0..p {
        for (w, slot) in product.iter_mut().enumerate() {
            *slot = f.data[w] * window.data[phase.sub(w, z)].conj();
        }
        data.extend(dft(&phase, &product, false).into_iter().map(|v| v * mass));
    }
    Ok(PhaseStft {
        base: f.base.clone(),
        data,
    })
}

/// Single value of [`phase_stft`] by direct summation.
pub fn phase_stft_at(f: &PhaseFunction, window: &PhaseFunction, z: usize, omega: usize) -> Result<Complex64> {
    f.compatible(window)?;
    if window.is_zero() {
        return Err(Error::ZeroWindow);
    }
    let shifted = window.translated(z).modulated(omega);
    f.inner(&shifted)
}

/// `‖f‖_{M^{p,q}_m} = ( ∫_Ĝ ( ∫_G |V_g f(x, xi)|^p m(x, xi)^p dx )^{q/p} dxi )^{1/q}`.
pub fn modulation_norm(f: &Signal, g: &Signal, p: f64, q: f64, m: &Weight) -> Result<f64> {
    check_exponent(p)?;
    check_exponent(q)?;
    if m.group() != &f.group.phase_space() {
        return Err(Error::ModulusMismatch {
            expected: f.group.phase_space().moduli().to_vec(),
            found: m.group().moduli().to_vec(),
        });
    }
    let v = stft(f, g)?;
    let n = f.group.order();
    let freq_mass = 1.0 / n as f64;
    let inner: Vec<f64> = (0..n)
        .map(|xi| {
            let values = (0..n).map(|x| v.get(x, xi).norm() * m.value(x * n + xi));
            lp_norm(values, p, 1.0)
        })
        .collect();
    Ok(lp_norm(inner.into_iter(), q, freq_mass))
}

pub(crate) fn check_exponent(p: f64) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidExponent(p));
    }
    Ok(())
}

fn lp_norm(values: impl Iterator<Item = f64>, p: f64, mass: f64) -> f64 {
    if p.is_infinite() {
        values.fold(0.0, f64::max)
    } else {
        (values.map(|a| a.powf(p)).sum::<f64>() * mass).powf(1.0 / p)
    }
}

// ----------------------------------------------------------------------
// Identity residuals. Each returns the max-norm of LHS - RHS.

/// Plancherel `∑|f|^2 = (1/|G|)∑|f̂|^2` and inversion `F^{-1}F f = f`.
pub fn plancherel_residual(f: &Signal) -> f64 {
    let f_hat = fourier(f);
    let energy = (f.norm_sqr() - f_hat.norm_sqr()).abs();
    let inversion = max_abs_diff_slices(&inverse_fourier(&f_hat).data, &f.data);
    energy.max(inversion)
}

/// `T_x M_xi f - conj<xi, x> M_xi T_x f`.
pub fn commutation_residual(f: &Signal, x: usize, xi: usize) -> f64 {
    let lhs = f.modulated(xi).translated(x);
    let rhs = f.translated(x).modulated(xi).scaled(f.group.character(xi, x).conj());
    max_abs_diff_slices(&lhs.data, &rhs.data)
}

/// `V_g f(u, omega) = V_ĝ f̂(omega, -u) conj<omega, u>`, the dual STFT using
/// the `Ĝ` measure.
pub fn stft_fundamental_residual(f: &Signal, g: &Signal) -> Result<f64> {
    let group = &f.group;
    let v = stft(f, g)?;
    let v_hat = stft(&fourier(f), &fourier(g))?;
    let n = group.order();
    let mut worst: f64 = 0.0;
    for u in 0..n {
        for omega in 0..n {
            let rhs = v_hat.get(omega, group.neg(u)) * group.character(omega, u).conj();
            worst = worst.max((v.get(u, omega) - rhs).norm());
        }
    }
    Ok(worst)
}

/// Covariance of the STFT under time-frequency shifts of both arguments:
/// `V_{π(y,η)g} π(x,ξ)f(u, ω) = V_g f(u - x + y, ω - ξ + η) conj<ω - ξ, x> <η, u - x>`.
///
/// Returns `(signed, magnitude)` residuals; the magnitude level drops the
/// phase factors.
pub fn stft_covariance_residual(f: &Signal, g: &Signal, shift_f: usize, shift_g: usize) -> Result<(f64, f64)> {
    let group = &f.group;
    let (x, xi) = group.split_phase(shift_f);
    let (y, eta) = group.split_phase(shift_g);
    let lhs = stft(&f.shifted(shift_f), &g.shifted(shift_g))?;
    let base = stft(f, g)?;
    let n = group.order();
    let (mut signed, mut magnitude) = (0.0f64, 0.0f64);
    for u in 0..n {
        for omega in 0..n {
            let moved = base.get(group.add(group.sub(u, x), y), group.add(group.sub(omega, xi), eta));
            let phase = group.character(group.sub(omega, xi), x).conj() * group.character(eta, group.sub(u, x));
            let left = lhs.get(u, omega);
            signed = signed.max((left - moved * phase).norm());
            magnitude = magnitude.max((left.norm() - moved.norm()).abs());
        }
    }
    Ok((signed, magnitude))
}

/// `(V_{g1}f1 · conj V_{g2}f2)^(ξ, x) = (V_{f2}f1 · conj V_{g2}g1)(-x, ξ)`,
/// with the plane Fourier transform of [`phase_fourier`].
pub fn stft_product_fourier_check(f1: &Signal, f2: &Signal, g1: &Signal, g2: &Signal) -> Result<f64> {
    let group = f1.group.clone();
    let a = stft(f1, g1)?;
    let b = stft(f2, g2)?;
    let product = PhaseFunction::from_fn(group.clone(), PhaseDomain::TimeFrequency, |x, xi| {
        a.get(x, xi) * b.get(x, xi).conj()
    });
    let lhs = phase_fourier(&product);
    let c = stft(f1, f2)?;
    let d = stft(g1, g2)?;
    let n = group.order();
    let mut worst: f64 = 0.0;
    for xi in 0..n {
        for x in 0..n {
            let neg = group.neg(x);
            let rhs = c.get(neg, xi) * d.get(neg, xi).conj();
            worst = worst.max((lhs.get(xi, x) - rhs).norm());
        }
    }
    Ok(worst)
}

/// `(1/|G|) ∑ |V_g f|^2 = ‖f‖^2 ‖g‖^2`.
pub fn moyal_residual(f: &Signal, g: &Signal) -> Result<f64> {
    let v = stft(f, g)?;
    let lhs = v.norm() * v.norm();
    Ok((lhs - f.norm_sqr() * g.norm_sqr()).abs())
}

/// `R(π(x)g, π(y)f) = <η, x - y> M_{J(y - x)} T_{(x, η)} R(g, f)` for
/// `x = (x, ξ)`, `y = (y, η)`.
pub fn rihaczek_covariance_residual(f: &Signal, g: &Signal, shift_g: usize, shift_f: usize) -> Result<f64> {
    let group = &f.group;
    let phase = group.phase_space();
    let (x, _) = group.split_phase(shift_g);
    let (y, eta) = group.split_phase(shift_f);
    let lhs = rihaczek(&g.shifted(shift_g), &f.shifted(shift_f))?;
    let base = rihaczek(g, f)?;
    let rhs = base
        .translated(group.phase_index(x, eta))
        .modulated(group.j_map(phase.sub(shift_f, shift_g)))
        .scaled(group.character(eta, group.sub(x, y)));
    lhs.max_abs_diff(&rhs)
}

/// Both sides of the STFT-of-Rihaczek formula at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RihaczekStft {
    pub direct: Complex64,
    pub closed_form: Complex64,
}

/// `V_Φ R(g, f)(x, ω)` with `Φ = R(φ, ψ)`, `x = (x, ξ)`, `ω = (ω, u)`:
/// direct phase-space evaluation against the closed form
/// `conj<ξ, u> V_φ g(x, ξ + ω) conj(V_ψ f(x + u, ξ))`.
pub fn stft_of_rihaczek(
    f: &Signal,
    g: &Signal,
    phi: &Signal,
    psi: &Signal,
    point: usize,
    dual_point: usize,
) -> Result<RihaczekStft> {
    if phi.is_zero() || psi.is_zero() {
        return Err(Error::ZeroWindow);
    }
    let group = &f.group;
    let big_phi = rihaczek(phi, psi)?;
    let direct = phase_stft_at(&rihaczek(g, f)?, &big_phi, point, dual_point)?;
    let (x, xi) = group.split_phase(point);
    let (omega, u) = group.split_phase(dual_point);
    let first = stft_value(g, phi, x, group.add(xi, omega));
    let second = stft_value(f, psi, group.add(x, u), xi);
    let closed_form = group.character(xi, u).conj() * first * second.conj();
    Ok(RihaczekStft { direct, closed_form })
}

fn stft_value(f: &Signal, g: &Signal, x: usize, xi: usize) -> Complex64 {
    let group = &f.group;
    (0..group.order()).fold(ZERO, |acc, y| {
        acc + f.data[y] * g.data[group.sub(y, x)].conj() * group.character(xi, y).conj()
    }) * f.point_mass()
}
