//! Finite abelian groups `Z_{N_1} x ... x Z_{N_d}`, their duals, subgroups,
//! phase-space lattices and weight functions.
//!
//! Elements are addressed by their position in the lexicographic enumeration
//! of coordinate tuples (first coordinate most significant). Every array in
//! this crate that is indexed by a group uses this order. The dual group is
//! identified with the group itself through the pairing
//! `<xi, x> = exp(2 pi i sum_j xi_j x_j / N_j)`.
//!
//! Phase space `G x Ĝ` is the group with the moduli listed twice; a phase
//! index is `x * |G| + xi`. The same layout is used for `Ĝ x G`, so the
//! standard pairing of the doubled group is exactly the pairing between
//! `(omega, u)` and `(x, xi)` given by `<omega, x> <xi, u>`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which side of the Fourier transform a function lives on.
///
/// The tag fixes the Haar measure: counting measure on `G`, and
/// `1/|G|` times counting measure on `Ĝ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Time,
    Frequency,
}

impl Side {
    pub fn dual(self) -> Side {
        match self {
            Side::Time => Side::Frequency,
            Side::Frequency => Side::Time,
        }
    }

    /// Mass of a single point under the side's Haar measure.
    pub fn point_mass(self, order: usize) -> f64 {
        match self {
            Side::Time => 1.0,
            Side::Frequency => 1.0 / order as f64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Group {
    moduli: Vec<usize>,
    order: usize,
}

impl Group {
    pub fn new(moduli: Vec<usize>) -> Result<Self> {
        if moduli.is_empty() {
            return Err(Error::InvalidGroup("at least one cyclic factor is required".into()));
        }
        if let Some(bad) = moduli.iter().find(|&&n| n == 0) {
            return Err(Error::InvalidGroup(format!("modulus {bad} must be positive")));
        }
        let order = moduli.iter().product();
        Ok(Group { moduli, order })
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        Group::new(vec![n])
    }

    pub fn moduli(&self) -> &[usize] {
        &self.moduli
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    /// `G x Ĝ` (equivalently `Ĝ x G`) as a group in its own right.
    pub fn phase_space(&self) -> Group {
        let mut moduli = self.moduli.clone();
        moduli.extend_from_slice(&self.moduli);
        Group {
            moduli,
            order: self.order * self.order,
        }
    }

    pub fn coords(&self, index: usize) -> Vec<usize> {
        let mut rest = index;
        let mut coords = vec![0; self.moduli.len()];
        for (slot, &n) in coords.iter_mut().zip(&self.moduli).rev() {
            *slot = rest % n;
            rest /= n;
        }
        coords
    }

    /// Index of a coordinate tuple; coordinates are reduced modulo their moduli.
    pub fn index_of(&self, coords: &[usize]) -> usize {
        coords
            .iter()
            .zip(&self.moduli)
            .fold(0, |acc, (&c, &n)| acc * n + c % n)
    }

    pub fn element(&self, coords: &[usize]) -> Result<Element> {
        if coords.len() != self.moduli.len() {
            return Err(Error::DimensionMismatch {
                expected: self.moduli.len(),
                found: coords.len(),
            });
        }
        Ok(Element {
            moduli: self.moduli.clone(),
            coords: coords.iter().zip(&self.moduli).map(|(&c, &n)| c % n).collect(),
        })
    }

    pub fn element_at(&self, index: usize) -> Element {
        Element {
            moduli: self.moduli.clone(),
            coords: self.coords(index),
        }
    }

    pub fn zero(&self) -> Element {
        self.element_at(0)
    }

    /// Index of an element, failing when it belongs to a different group.
    pub fn index(&self, element: &Element) -> Result<usize> {
        self.check(element)?;
        Ok(self.index_of(&element.coords))
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.order).map(move |i| self.element_at(i))
    }

    fn check(&self, element: &Element) -> Result<()> {
        if element.moduli != self.moduli {
            return Err(Error::ModulusMismatch {
                expected: self.moduli.clone(),
                found: element.moduli.clone(),
            });
        }
        Ok(())
    }

    fn combine(&self, a: usize, b: usize, op: impl Fn(usize, usize, usize) -> usize) -> usize {
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        for &n in self.moduli.iter().rev() {
            out += op(a % n, b % n, n) * place;
            a /= n;
            b /= n;
            place *= n;
        }
        out
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.combine(a, b, |x, y, n| (x + y) % n)
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.combine(a, b, |x, y, n| (x + n - y) % n)
    }

    pub fn neg(&self, a: usize) -> usize {
        self.combine(a, 0, |x, _, n| (n - x) % n)
    }

    /// `k * a` in additive notation.
    pub fn scale(&self, k: usize, a: usize) -> usize {
        self.combine(a, 0, |x, _, n| (x * (k % n)) % n)
    }

    /// Additive order of an element.
    pub fn element_order(&self, a: usize) -> usize {
        self.coords(a)
            .iter()
            .zip(&self.moduli)
            .fold(1, |acc, (&c, &n)| lcm(acc, n / gcd(c, n)))
    }

    /// Invariant metric `d(x, 0) = sum_j min(x_j, N_j - x_j)`.
    pub fn metric(&self, a: usize) -> usize {
        self.coords(a)
            .iter()
            .zip(&self.moduli)
            .map(|(&c, &n)| c.min(n - c))
            .sum()
    }

    /// Fraction of a full turn of `<xi, x>`, reduced to `[0, 1)`.
    fn turns(&self, xi: usize, x: usize) -> f64 {
        let (mut a, mut b) = (xi, x);
        let mut turns = 0.0;
        for &n in self.moduli.iter().rev() {
            turns += ((a % n) * (b % n) % n) as f64 / n as f64;
            a /= n;
            b /= n;
        }
        turns.fract()
    }

    /// Character value `<xi, x>` for element indices.
    pub fn character(&self, xi: usize, x: usize) -> Complex64 {
        Complex64::from_polar(1.0, TAU * self.turns(xi, x))
    }

    /// Character value `<xi, x>` for explicit elements.
    pub fn pairing(&self, xi: &Element, x: &Element) -> Result<Complex64> {
        self.check(xi)?;
        self.check(x)?;
        Ok(self.character(self.index_of(&xi.coords), self.index_of(&x.coords)))
    }

    /// Phase index of `(x, xi)` in `G x Ĝ` (or of `(omega, u)` in `Ĝ x G`).
    pub fn phase_index(&self, first: usize, second: usize) -> usize {
        first * self.order + second
    }

    pub fn split_phase(&self, index: usize) -> (usize, usize) {
        (index / self.order, index % self.order)
    }

    /// `J(x, xi) = (-xi, x)`, mapping `G x Ĝ` onto `Ĝ x G`.
    pub fn j_map(&self, index: usize) -> usize {
        let (x, xi) = self.split_phase(index);
        self.phase_index(self.neg(xi), x)
    }

    /// `J^{-1}(omega, u) = (u, -omega)`.
    pub fn j_inverse(&self, index: usize) -> usize {
        let (omega, u) = self.split_phase(index);
        self.phase_index(u, self.neg(omega))
    }
}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// An element of a finite abelian group, always stored reduced.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Element {
    moduli: Vec<usize>,
    coords: Vec<usize>,
}

impl Element {
    pub fn coords(&self) -> &[usize] {
        &self.coords
    }

    pub fn moduli(&self) -> &[usize] {
        &self.moduli
    }

    fn same_group(&self, other: &Element) -> Result<()> {
        if self.moduli != other.moduli {
            return Err(Error::ModulusMismatch {
                expected: self.moduli.clone(),
                found: other.moduli.clone(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        self.same_group(other)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .zip(&self.moduli)
            .map(|((&a, &b), &n)| (a + b) % n)
            .collect();
        Ok(Element {
            moduli: self.moduli.clone(),
            coords,
        })
    }

    pub fn neg(&self) -> Element {
        let coords = self
            .coords
            .iter()
            .zip(&self.moduli)
            .map(|(&a, &n)| (n - a) % n)
            .collect();
        Element {
            moduli: self.moduli.clone(),
            coords,
        }
    }

    pub fn sub(&self, other: &Element) -> Result<Element> {
        self.add(&other.neg())
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    /// Circular distance to zero, summed over coordinates.
    pub fn metric(&self) -> usize {
        self.coords
            .iter()
            .zip(&self.moduli)
            .map(|(&c, &n)| c.min(n - c))
            .sum()
    }
}

/// A point `(x, xi)` of the time-frequency plane `G x Ĝ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub pos: Element,
    pub freq: Element,
}

/// A point `(omega, u)` of the dual plane `Ĝ x G`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualPhasePoint {
    pub freq: Element,
    pub pos: Element,
}

impl PhasePoint {
    pub fn new(pos: Element, freq: Element) -> Result<Self> {
        pos.same_group(&freq)?;
        Ok(PhasePoint { pos, freq })
    }

    pub fn j(&self) -> DualPhasePoint {
        DualPhasePoint {
            freq: self.freq.neg(),
            pos: self.pos.clone(),
        }
    }

    pub fn index_in(&self, group: &Group) -> Result<usize> {
        Ok(group.phase_index(group.index(&self.pos)?, group.index(&self.freq)?))
    }
}

impl DualPhasePoint {
    pub fn new(freq: Element, pos: Element) -> Result<Self> {
        freq.same_group(&pos)?;
        Ok(DualPhasePoint { freq, pos })
    }

    pub fn j_inverse(&self) -> PhasePoint {
        PhasePoint {
            pos: self.pos.clone(),
            freq: self.freq.neg(),
        }
    }

    pub fn index_in(&self, group: &Group) -> Result<usize> {
        Ok(group.phase_index(group.index(&self.freq)?, group.index(&self.pos)?))
    }
}

/// The subgroup `a_1 Z_{N_1} x ... x a_d Z_{N_d}` of a product group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subgroup {
    ambient: Group,
    steps: Vec<usize>,
}

impl Subgroup {
    pub fn new(ambient: Group, steps: Vec<usize>) -> Result<Self> {
        if steps.len() != ambient.rank() {
            return Err(Error::DimensionMismatch {
                expected: ambient.rank(),
                found: steps.len(),
            });
        }
        for (&a, &n) in steps.iter().zip(ambient.moduli()) {
            if a == 0 || n % a != 0 {
                return Err(Error::NotASubgroup { modulus: n, step: a });
            }
        }
        Ok(Subgroup { ambient, steps })
    }

    pub fn whole(ambient: Group) -> Self {
        let steps = vec![1; ambient.rank()];
        Subgroup { ambient, steps }
    }

    pub fn trivial(ambient: Group) -> Self {
        let steps = ambient.moduli().to_vec();
        Subgroup { ambient, steps }
    }

    pub fn ambient(&self) -> &Group {
        &self.ambient
    }

    pub fn steps(&self) -> &[usize] {
        &self.steps
    }

    pub fn order(&self) -> usize {
        self.ambient.order() / self.steps.iter().product::<usize>()
    }

    /// `Z_{N_1/a_1} x ...`, the abstract group the subgroup is isomorphic to.
    pub fn index_group(&self) -> Group {
        let moduli = self
            .steps
            .iter()
            .zip(self.ambient.moduli())
            .map(|(&a, &n)| n / a)
            .collect();
        Group::new(moduli).expect("quotients of positive moduli are positive")
    }

    /// Ambient index of the `k`-th subgroup element.
    pub fn embed(&self, k: usize) -> usize {
        let coords: Vec<usize> = self
            .index_group()
            .coords(k)
            .iter()
            .zip(&self.steps)
            .map(|(&c, &a)| c * a)
            .collect();
        self.ambient.index_of(&coords)
    }

    pub fn points(&self) -> Vec<usize> {
        (0..self.order()).map(|k| self.embed(k)).collect()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.ambient
            .coords(index)
            .iter()
            .zip(&self.steps)
            .all(|(&c, &a)| c % a == 0)
    }

    /// Subgroup index of an ambient element, if it belongs to the subgroup.
    pub fn locate(&self, index: usize) -> Option<usize> {
        if !self.contains(index) {
            return None;
        }
        let coords: Vec<usize> = self
            .ambient
            .coords(index)
            .iter()
            .zip(&self.steps)
            .map(|(&c, &a)| c / a)
            .collect();
        Some(self.index_group().index_of(&coords))
    }

    /// The box `prod_j [0, a_j)`, a fundamental domain for the subgroup.
    pub fn fundamental_domain(&self) -> Vec<usize> {
        let shape = Group::new(self.steps.clone()).expect("steps are positive");
        (0..shape.order())
            .map(|i| self.ambient.index_of(&shape.coords(i)))
            .collect()
    }

    /// Unique decomposition `y = n + u` with `n` in the subgroup and `u` in the
    /// fundamental domain; returns `(subgroup index of n, ambient index of u)`.
    pub fn decompose(&self, index: usize) -> (usize, usize) {
        let coords = self.ambient.coords(index);
        let lattice: Vec<usize> = coords.iter().zip(&self.steps).map(|(&c, &a)| c / a).collect();
        let rest: Vec<usize> = coords.iter().zip(&self.steps).map(|(&c, &a)| c % a).collect();
        (
            self.index_group().index_of(&lattice),
            self.ambient.index_of(&rest),
        )
    }

    /// `K^perp = { xi : <xi, k> = 1 for all k in K }`, again a step subgroup.
    pub fn annihilator(&self) -> Subgroup {
        let steps = self
            .steps
            .iter()
            .zip(self.ambient.moduli())
            .map(|(&a, &n)| n / a)
            .collect();
        Subgroup {
            ambient: self.ambient.clone(),
            steps,
        }
    }
}

/// A lattice `Λ` in the phase space `G x Ĝ`, given by `2d` steps (position
/// steps first, then frequency steps).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lattice {
    base: Group,
    points: Subgroup,
}

impl Lattice {
    pub fn new(base: Group, steps: Vec<usize>) -> Result<Self> {
        let points = Subgroup::new(base.phase_space(), steps)?;
        Ok(Lattice { base, points })
    }

    /// Separable lattice `a G x b Ĝ` from position and frequency steps.
    pub fn separable(base: Group, position: &[usize], frequency: &[usize]) -> Result<Self> {
        let mut steps = position.to_vec();
        steps.extend_from_slice(frequency);
        Lattice::new(base, steps)
    }

    pub fn base(&self) -> &Group {
        &self.base
    }

    pub fn steps(&self) -> &[usize] {
        self.points.steps()
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.order()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `|Λ| / |G|`.
    pub fn redundancy(&self) -> f64 {
        self.len() as f64 / self.base.order() as f64
    }

    /// Group structure on lattice indices; lattice differences `m - n`
    /// correspond to differences in this group.
    pub fn index_group(&self) -> Group {
        self.points.index_group()
    }

    /// Phase index of the `k`-th lattice point.
    pub fn point(&self, k: usize) -> usize {
        self.points.embed(k)
    }

    pub fn points(&self) -> Vec<usize> {
        self.points.points()
    }

    pub fn locate(&self, phase: usize) -> Option<usize> {
        self.points.locate(phase)
    }

    pub fn fundamental_domain(&self) -> Vec<usize> {
        self.points.fundamental_domain()
    }

    pub fn decompose(&self, phase: usize) -> (usize, usize) {
        self.points.decompose(phase)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum WeightKind {
    Submultiplicative,
    /// `m(j + k) <= constant * v(k) * m(j)` for the companion weight `v`.
    Moderate { constant: f64 },
}

/// A positive weight function on a finite group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Weight {
    group: Group,
    values: Vec<f64>,
    kind: WeightKind,
}

impl Weight {
    pub fn from_values(group: Group, values: Vec<f64>, kind: WeightKind) -> Result<Self> {
        if values.len() != group.order() {
            return Err(Error::DimensionMismatch {
                expected: group.order(),
                found: values.len(),
            });
        }
        if let Some(bad) = values.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::InvalidWeight(format!("value {bad} is not positive and finite")));
        }
        Ok(Weight { group, values, kind })
    }

    pub fn constant(group: Group) -> Self {
        let values = vec![1.0; group.order()];
        Weight {
            group,
            values,
            kind: WeightKind::Submultiplicative,
        }
    }

    /// `v(k) = (1 + d(k))^s`, submultiplicative for `s >= 0`.
    pub fn polynomial(group: Group, s: f64) -> Result<Self> {
        if !(s >= 0.0 && s.is_finite()) {
            return Err(Error::InvalidWeight(format!(
                "polynomial exponent {s} must be non-negative for a submultiplicative weight"
            )));
        }
        Ok(Self::polynomial_unchecked(group, s, WeightKind::Submultiplicative))
    }

    /// `m(k) = (1 + d(k))^s` for any real `s`; it is moderate with constant 1
    /// with respect to `(1 + d)^{|s|}`.
    pub fn polynomial_moderate(group: Group, s: f64) -> Result<Self> {
        if !s.is_finite() {
            return Err(Error::InvalidWeight(format!("exponent {s} is not finite")));
        }
        Ok(Self::polynomial_unchecked(group, s, WeightKind::Moderate { constant: 1.0 }))
    }

    fn polynomial_unchecked(group: Group, s: f64, kind: WeightKind) -> Self {
        let values = (0..group.order())
            .map(|k| (1.0 + group.metric(k) as f64).powf(s))
            .collect();
        Weight { group, values, kind }
    }

    /// `v(k) = exp(a d(k)^b)`, submultiplicative for `a >= 0`, `0 <= b <= 1`.
    pub fn subexponential(group: Group, a: f64, b: f64) -> Result<Self> {
        if !(a >= 0.0 && a.is_finite() && (0.0..=1.0).contains(&b)) {
            return Err(Error::InvalidWeight(format!(
                "subexponential weight needs a >= 0 and 0 <= b <= 1, got a = {a}, b = {b}"
            )));
        }
        let values = (0..group.order())
            .map(|k| {
                let d = group.metric(k) as f64;
                if d == 0.0 {
                    1.0
                } else {
                    (a * d.powf(b)).exp()
                }
            })
            .collect();
        Ok(Weight {
            group,
            values,
            kind: WeightKind::Submultiplicative,
        })
    }

    /// `(v ⊗ w)(x, y) = v(x) w(y)` on the product group.
    pub fn tensor(first: &Weight, second: &Weight) -> Weight {
        let mut moduli = first.group.moduli().to_vec();
        moduli.extend_from_slice(second.group.moduli());
        let group = Group::new(moduli).expect("product of valid groups");
        let values = first
            .values
            .iter()
            .flat_map(|&a| second.values.iter().map(move |&b| a * b))
            .collect();
        let kind = match (first.kind, second.kind) {
            (WeightKind::Submultiplicative, WeightKind::Submultiplicative) => {
                WeightKind::Submultiplicative
            }
            (a, b) => WeightKind::Moderate {
                constant: moderate_constant(a) * moderate_constant(b),
            },
        };
        Weight { group, values, kind }
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn kind(&self) -> WeightKind {
        self.kind
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, index: usize) -> f64 {
        self.values[index]
    }

    /// Restriction to a subgroup, re-indexed by the subgroup's index group.
    pub fn restrict(&self, subgroup: &Subgroup) -> Result<Weight> {
        if subgroup.ambient() != &self.group {
            return Err(Error::ModulusMismatch {
                expected: self.group.moduli().to_vec(),
                found: subgroup.ambient().moduli().to_vec(),
            });
        }
        let values = (0..subgroup.order())
            .map(|k| self.values[subgroup.embed(k)])
            .collect();
        Ok(Weight {
            group: subgroup.index_group(),
            values,
            kind: self.kind,
        })
    }

    /// For a weight on `G x Ĝ`, the weight `v ∘ J^{-1}` on `Ĝ x G`.
    pub fn compose_j_inverse(&self, base: &Group) -> Result<Weight> {
        if self.group != base.phase_space() {
            return Err(Error::ModulusMismatch {
                expected: base.phase_space().moduli().to_vec(),
                found: self.group.moduli().to_vec(),
            });
        }
        let values = (0..self.values.len())
            .map(|w| self.values[base.j_inverse(w)])
            .collect();
        Ok(Weight {
            group: self.group.clone(),
            values,
            kind: self.kind,
        })
    }

    pub fn is_normalized(&self) -> bool {
        (self.values[0] - 1.0).abs() <= 1e-12
    }

    pub fn is_even(&self) -> bool {
        (0..self.values.len())
            .all(|k| (self.values[k] - self.values[self.group.neg(k)]).abs() <= 1e-12 * self.values[k])
    }

    /// Largest `v(j + k) / (v(j) v(k))` over all pairs.
    pub fn submultiplicativity_ratio(&self) -> f64 {
        let n = self.values.len();
        let mut worst: f64 = 0.0;
        for j in 0..n {
            for k in 0..n {
                let ratio = self.values[self.group.add(j, k)] / (self.values[j] * self.values[k]);
                worst = worst.max(ratio);
            }
        }
        worst
    }

    /// Smallest `C` with `m(j + k) <= C v(k) m(j)` for all `j, k`.
    pub fn moderateness_constant(&self, v: &Weight) -> Result<f64> {
        if v.group != self.group {
            return Err(Error::ModulusMismatch {
                expected: self.group.moduli().to_vec(),
                found: v.group.moduli().to_vec(),
            });
        }
        let n = self.values.len();
        let mut worst: f64 = 0.0;
        for j in 0..n {
            for k in 0..n {
                let ratio = self.values[self.group.add(j, k)] / (v.values[k] * self.values[j]);
                worst = worst.max(ratio);
            }
        }
        Ok(worst)
    }

    /// Fails unless `m` is moderate with respect to `v` with its declared
    /// constant (submultiplicative weights use constant 1).
    pub fn check_moderate(&self, v: &Weight) -> Result<()> {
        let constant = moderate_constant(self.kind);
        let observed = self.moderateness_constant(v)?;
        if observed > constant * (1.0 + 1e-12) {
            return Err(Error::NotModerate { observed, constant });
        }
        Ok(())
    }

    /// `v(n x)^{1/n}` where `n` is the order of `x`, so the orbit closes at zero.
    pub fn grs_orbit_values(&self) -> Vec<f64> {
        (0..self.values.len())
            .map(|x| {
                let n = self.group.element_order(x);
                self.values[self.group.scale(n, x)].powf(1.0 / n as f64)
            })
            .collect()
    }

    /// Checks normalization, evenness, submultiplicativity and GRS.
    pub fn check_admissible(&self) -> Result<()> {
        if !self.is_normalized() {
            return Err(Error::InvalidWeight(format!("v(0) = {} is not 1", self.values[0])));
        }
        if !self.is_even() {
            return Err(Error::InvalidWeight("weight is not even".into()));
        }
        let ratio = self.submultiplicativity_ratio();
        if ratio > 1.0 + 1e-12 {
            return Err(Error::InvalidWeight(format!(
                "weight is not submultiplicative (worst ratio {ratio})"
            )));
        }
        if self.grs_orbit_values().iter().any(|&g| (g - 1.0).abs() > 1e-12) {
            return Err(Error::InvalidWeight("GRS condition fails".into()));
        }
        Ok(())
    }
}

fn moderate_constant(kind: WeightKind) -> f64 {
    match kind {
        WeightKind::Submultiplicative => 1.0,
        WeightKind::Moderate { constant } => constant,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn pairing_examples() {
        let z4 = Group::cyclic(4).unwrap();
        let one = z4.element(&[1]).unwrap();
        assert!(close(z4.pairing(&one, &one).unwrap(), Complex64::i()));

        let z6 = Group::cyclic(6).unwrap();
        let (a, b) = (z6.element(&[2]).unwrap(), z6.element(&[3]).unwrap());
        assert!(close(z6.pairing(&a, &b).unwrap(), Complex64::new(1.0, 0.0)));

        let g = Group::new(vec![4, 6]).unwrap();
        for x in g.elements() {
            assert!(close(g.pairing(&g.zero(), &x).unwrap(), Complex64::new(1.0, 0.0)));
        }
    }

    #[test]
    fn pairing_rejects_foreign_elements() {
        let z4 = Group::cyclic(4).unwrap();
        let z6 = Group::cyclic(6).unwrap();
        let err = z4.pairing(&z4.zero(), &z6.zero()).unwrap_err();
        assert!(matches!(err, Error::ModulusMismatch { .. }));
    }

    #[test]
    fn pairing_is_a_character() {
        let g = Group::new(vec![3, 4]).unwrap();
        for xi in 0..g.order() {
            for x in 0..g.order() {
                assert!((g.character(xi, x).norm() - 1.0).abs() < 1e-14);
                assert!(close(g.character(g.neg(xi), x), g.character(xi, x).conj()));
                for y in 0..g.order() {
                    let lhs = g.character(xi, g.add(x, y));
                    assert!(close(lhs, g.character(xi, x) * g.character(xi, y)));
                }
            }
        }
    }

    #[test]
    fn metric_examples() {
        let z8 = Group::cyclic(8).unwrap();
        assert_eq!(z8.element(&[5]).unwrap().metric(), 3);
        let g = Group::new(vec![4, 4]).unwrap();
        assert_eq!(g.element(&[2, 3]).unwrap().metric(), 3);
        assert_eq!(g.metric(0), 0);
        for a in 0..g.order() {
            assert_eq!(g.metric(a), g.metric(g.neg(a)));
            for b in 0..g.order() {
                assert!(g.metric(g.add(a, b)) <= g.metric(a) + g.metric(b));
            }
        }
    }

    #[test]
    fn polynomial_weight_examples() {
        let z8 = Group::cyclic(8).unwrap();
        let flat = Weight::polynomial(z8.clone(), 0.0).unwrap();
        assert!(flat.values().iter().all(|&v| v == 1.0));
        let linear = Weight::polynomial(z8.clone(), 1.0).unwrap();
        assert_eq!(linear.value(5), 4.0);
        assert!(matches!(
            Weight::polynomial(z8, -1.0),
            Err(Error::InvalidWeight(_))
        ));
    }

    #[test]
    fn polynomial_weight_is_submultiplicative_exhaustively() {
        let z12 = Group::cyclic(12).unwrap();
        let v = Weight::polynomial(z12.clone(), 2.0).unwrap();
        for j in 0..12 {
            for k in 0..12 {
                assert!(v.value(z12.add(j, k)) <= v.value(j) * v.value(k) + 1e-12);
            }
        }
        v.check_admissible().unwrap();
    }

    #[test]
    fn weights_on_phase_space_are_admissible() {
        let phase = Group::new(vec![4, 6]).unwrap().phase_space();
        Weight::polynomial(phase.clone(), 1.5).unwrap().check_admissible().unwrap();
        Weight::subexponential(phase, 0.5, 0.5).unwrap().check_admissible().unwrap();
    }

    #[test]
    fn grs_orbits_close_at_one() {
        let v = Weight::subexponential(Group::new(vec![6, 4]).unwrap(), 1.0, 0.9).unwrap();
        assert!(v.grs_orbit_values().iter().all(|&g| (g - 1.0).abs() < 1e-12));
    }

    #[test]
    fn negative_polynomial_is_moderate() {
        let g = Group::cyclic(10).unwrap();
        let m = Weight::polynomial_moderate(g.clone(), -1.5).unwrap();
        let v = Weight::polynomial(g, 1.5).unwrap();
        m.check_moderate(&v).unwrap();
        let flat = Weight::constant(v.group().clone());
        assert!(matches!(
            v.check_moderate(&flat),
            Err(Error::NotModerate { .. })
        ));
    }

    #[test]
    fn annihilator_examples() {
        let z12 = Group::cyclic(12).unwrap();
        let whole = Subgroup::whole(z12.clone());
        assert_eq!(whole.annihilator().order(), 1);
        let trivial = Subgroup::trivial(z12.clone());
        assert_eq!(trivial.annihilator().order(), 12);

        let k = Subgroup::new(z12.clone(), vec![3]).unwrap();
        let perp = k.annihilator();
        assert_eq!(k.order(), 4);
        assert_eq!(perp.steps(), &[4]);
        // exhaustive pairing oracle
        let brute: Vec<usize> = (0..12)
            .filter(|&xi| {
                k.points()
                    .iter()
                    .all(|&x| (z12.character(xi, x) - 1.0).norm() < 1e-12)
            })
            .collect();
        assert_eq!(brute, perp.points());
        assert_eq!(k.order() * perp.order(), 12);
    }

    #[test]
    fn subgroup_rejects_non_divisors() {
        let z12 = Group::cyclic(12).unwrap();
        assert_eq!(
            Subgroup::new(z12, vec![5]).unwrap_err(),
            Error::NotASubgroup { modulus: 12, step: 5 }
        );
    }

    #[test]
    fn lattice_decomposition_is_unique() {
        for moduli in [vec![12], vec![4, 6], vec![8]] {
            let base = Group::new(moduli.clone()).unwrap();
            let steps: Vec<usize> = moduli.iter().chain(&moduli).map(|&n| if n % 2 == 0 { 2 } else { 1 }).collect();
            let lattice = Lattice::new(base.clone(), steps).unwrap();
            let phase = base.phase_space();
            let domain = lattice.fundamental_domain();
            assert_eq!(domain.len() * lattice.len(), phase.order());
            for y in 0..phase.order() {
                let hits: Vec<(usize, usize)> = (0..lattice.len())
                    .flat_map(|n| domain.iter().map(move |&u| (n, u)))
                    .filter(|&(n, u)| phase.add(lattice.point(n), u) == y)
                    .collect();
                assert_eq!(hits.len(), 1);
                assert_eq!(hits[0], lattice.decompose(y));
            }
        }
    }

    #[test]
    fn lattice_is_closed() {
        let base = Group::cyclic(12).unwrap();
        let lattice = Lattice::separable(base.clone(), &[2], &[3]).unwrap();
        let phase = base.phase_space();
        let idx = lattice.index_group();
        for a in 0..lattice.len() {
            assert_eq!(lattice.locate(phase.neg(lattice.point(a))), Some(idx.neg(a)));
            for b in 0..lattice.len() {
                let sum = phase.add(lattice.point(a), lattice.point(b));
                assert_eq!(lattice.locate(sum), Some(idx.add(a, b)));
            }
        }
        assert_eq!(lattice.len(), 24);
        assert!((lattice.redundancy() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn j_map_is_a_bijection() {
        let base = Group::new(vec![2, 3]).unwrap();
        let phase = base.phase_space();
        let mut seen = vec![false; phase.order()];
        for p in 0..phase.order() {
            let q = base.j_map(p);
            assert!(!seen[q]);
            seen[q] = true;
            assert_eq!(base.j_inverse(q), p);
            assert_eq!(base.j_map(base.j_inverse(p)), p);
        }
        let point = PhasePoint::new(base.element(&[1, 2]).unwrap(), base.element(&[1, 1]).unwrap())
            .unwrap();
        let dual = point.j();
        assert_eq!(dual.index_in(&base).unwrap(), base.j_map(point.index_in(&base).unwrap()));
        assert_eq!(dual.j_inverse(), point);
    }
}
