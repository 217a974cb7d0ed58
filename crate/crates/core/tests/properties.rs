//! Property-based invariants across the public API.

use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tfpdo::linalg::{max_abs_diff, CMatrix};
use tfpdo::psido::{
    compose_symbols, inverse_spreading, kn_apply, kn_matrix, kn_symbol_from_matrix, spreading, spreading_reconstruction,
    twisted_convolution,
};
use tfpdo::transforms::{fourier, inverse_fourier, moyal_residual, stft, tf_shift};
use tfpdo::{CvMatrix, Group, PhasePoint, Signal, Symbol, Weight};

const SHAPES: &[&[usize]] = &[&[2], &[5], &[8], &[12], &[2, 3], &[4, 6], &[3, 3, 2]];

fn group() -> impl Strategy<Value = Group> {
    prop::sample::select(SHAPES).prop_map(|m| Group::new(m.to_vec()).unwrap())
}

fn group_and_seed() -> impl Strategy<Value = (Group, u64)> {
    (group(), any::<u64>())
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn characters_are_bihomomorphic_unimodular_and_symmetric(g in group(), a in any::<usize>(), b in any::<usize>(), c in any::<usize>()) {
        let n = g.order();
        let (xi, x, y) = (a % n, b % n, c % n);
        let split = g.character(xi, x) * g.character(xi, y);
        prop_assert!((g.character(xi, g.add(x, y)) - split).norm() < 1e-12);
        prop_assert!((g.character(g.add(x, y), xi) - g.character(x, xi) * g.character(y, xi)).norm() < 1e-12);
        prop_assert!((g.character(xi, x).norm() - 1.0).abs() < 1e-14);
        prop_assert!((g.character(xi, x) - g.character(x, xi)).norm() < 1e-14);
        prop_assert!((g.character(xi, g.neg(x)) - g.character(xi, x).conj()).norm() < 1e-12);
    }

    #[test]
    fn metric_is_invariant(g in group(), a in any::<usize>(), b in any::<usize>()) {
        let n = g.order();
        let (x, y) = (a % n, b % n);
        prop_assert_eq!(g.metric(x), g.metric(g.neg(x)));
        prop_assert!(g.metric(g.add(x, y)) <= g.metric(x) + g.metric(y));
        prop_assert_eq!(g.metric(x) == 0, x == 0);
    }

    #[test]
    fn j_is_a_bijection_with_inverse(g in group(), a in any::<usize>()) {
        let p = a % (g.order() * g.order());
        prop_assert_eq!(g.j_inverse(g.j_map(p)), p);
        prop_assert_eq!(g.j_map(g.j_inverse(p)), p);
    }

    #[test]
    fn polynomial_weight_is_submultiplicative(g in group(), s in 0.0f64..3.0, a in any::<usize>(), b in any::<usize>()) {
        let v = Weight::polynomial(g.clone(), s).unwrap();
        let n = g.order();
        let (x, y) = (a % n, b % n);
        prop_assert!(v.value(g.add(x, y)) <= v.value(x) * v.value(y) * (1.0 + 1e-12));
        prop_assert_eq!(v.value(0), 1.0);
    }

    #[test]
    fn fourier_is_unitary_and_invertible((g, seed) in group_and_seed()) {
        let f = Signal::random(g, &mut rng(seed));
        let f_hat = fourier(&f);
        prop_assert!((f_hat.norm() - f.norm()).abs() < 1e-10 * f.norm().max(1.0));
        prop_assert!(inverse_fourier(&f_hat).max_abs_diff(&f).unwrap() < 1e-10);
    }

    #[test]
    fn time_frequency_shifts_are_unitary((g, seed) in group_and_seed(), a in any::<usize>(), b in any::<usize>()) {
        let f = Signal::random(g.clone(), &mut rng(seed));
        let p = PhasePoint::new(g.element_at(a % g.order()), g.element_at(b % g.order())).unwrap();
        let shifted = tf_shift(&f, &p).unwrap();
        prop_assert!((shifted.norm() - f.norm()).abs() < 1e-14 * f.norm().max(1.0) * 10.0);
    }

    #[test]
    fn stft_satisfies_moyal((g, seed) in group_and_seed()) {
        let mut r = rng(seed);
        let f = Signal::random(g.clone(), &mut r);
        let w = Signal::random(g.clone(), &mut r);
        prop_assert!(moyal_residual(&f, &w).unwrap() < 1e-10);
        let v = stft(&f, &w).unwrap();
        prop_assert!((v.get(0, 0) - f.inner(&w).unwrap()).norm() < 1e-10);
    }

    #[test]
    fn symbol_matrix_round_trip((g, seed) in group_and_seed()) {
        let sigma = Symbol::random_decaying(g.clone(), 0.3, &mut rng(seed));
        let k = kn_matrix(&sigma);
        let back = kn_symbol_from_matrix(&g, &k).unwrap();
        prop_assert!(back.max_abs_diff(&sigma).unwrap() < 1e-10);
    }

    #[test]
    fn kn_apply_agrees_with_matrix((g, seed) in group_and_seed()) {
        let mut r = rng(seed);
        let sigma = Symbol::random_decaying(g.clone(), 0.3, &mut r);
        let f = Signal::random(g.clone(), &mut r);
        let direct = kn_apply(&sigma, &f).unwrap();
        let via = kn_matrix(&sigma).matrix() * f.to_vector();
        let via = Signal::from_vector(g, f.side(), &via).unwrap();
        prop_assert!(direct.max_abs_diff(&via).unwrap() < 1e-10);
    }

    #[test]
    fn spreading_round_trip_and_reconstruction((g, seed) in group_and_seed()) {
        let sigma = Symbol::random_decaying(g, 0.3, &mut rng(seed));
        let s = spreading(&sigma);
        prop_assert!(inverse_spreading(&s).max_abs_diff(&sigma).unwrap() < 1e-10);
        prop_assert!(spreading_reconstruction(&s).max_abs_diff(&kn_matrix(&sigma)) < 1e-10);
    }

    #[test]
    fn composition_matches_matrix_product((g, seed) in group_and_seed()) {
        let mut r = rng(seed);
        let sigma = Symbol::random_decaying(g.clone(), 0.3, &mut r);
        let tau = Symbol::random_decaying(g, 0.3, &mut r);
        let composed = kn_matrix(&compose_symbols(&sigma, &tau).unwrap());
        let product = kn_matrix(&sigma).compose(&kn_matrix(&tau));
        prop_assert!(composed.max_abs_diff(&product) < 1e-10);
        let twisted = twisted_convolution(&spreading(&sigma), &spreading(&tau)).unwrap();
        prop_assert!(spreading_reconstruction(&twisted).max_abs_diff(&product) < 1e-10);
    }

    #[test]
    fn cv_norm_is_submultiplicative((g, seed) in group_and_seed(), s in 0.0f64..2.5) {
        let n = g.order();
        let v = Weight::polynomial(g.clone(), s).unwrap();
        let mut r = rng(seed);
        let mut draw = || {
            let noise = Signal::random(Group::cyclic(n * n).unwrap(), &mut r);
            CvMatrix::new(g.clone(), CMatrix::from_fn(n, n, |i, j| noise.at(i * n + j))).unwrap()
        };
        let a = draw();
        let b = draw();
        let ab = a.mul(&b).unwrap();
        prop_assert!(max_abs_diff(ab.entries(), &(a.entries() * b.entries())) < 1e-12);
        prop_assert!(ab.cv_norm(&v).unwrap() <= a.cv_norm(&v).unwrap() * b.cv_norm(&v).unwrap() * (1.0 + 1e-12));
    }

    #[test]
    fn cv_norm_is_a_seminorm((g, seed) in group_and_seed(), c in 0.1f64..10.0) {
        let n = g.order();
        let v = Weight::polynomial(g.clone(), 1.0).unwrap();
        let noise = Signal::random(Group::cyclic(n * n).unwrap(), &mut rng(seed));
        let a = CvMatrix::new(g.clone(), CMatrix::from_fn(n, n, |i, j| noise.at(i * n + j))).unwrap();
        let scaled = CvMatrix::new(g, a.entries() * Complex64::new(0.0, c)).unwrap();
        let na = a.cv_norm(&v).unwrap();
        prop_assert!((scaled.cv_norm(&v).unwrap() - c * na).abs() < 1e-10 * na.max(1.0) * c);
    }
}
