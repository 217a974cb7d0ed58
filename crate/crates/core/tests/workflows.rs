//! End-to-end pipelines across modules.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tfpdo::io::{load_signal, load_symbol, save_signal, save_symbol};
use tfpdo::linalg::max_abs_diff;
use tfpdo::psido::{kn_apply, kn_matrix};
use tfpdo::sjostrand::{
    almost_diag_envelope, gabor_matrix, reverse_envelope, reverse_violations, sjostrand_norm, wiener_experiment,
};
use tfpdo::transforms::{rihaczek, stft};
use tfpdo::{Error, GaborSystem, Group, Lattice, Signal, Subgroup, Symbol, Weight};

fn scratch(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("tfpdo-workflows-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn csv_files_round_trip_and_drive_operators() {
    let g = Group::new(vec![2, 3]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let f = Signal::random(g.clone(), &mut rng);
    let sigma = Symbol::random_decaying(g.clone(), 0.4, &mut rng);
    let (fp, sp) = (scratch("f.csv"), scratch("sigma.csv"));
    save_signal(&f, &fp).unwrap();
    save_symbol(&sigma, &sp).unwrap();
    let f2 = load_signal(&g, &fp).unwrap();
    let sigma2 = load_symbol(&g, &sp).unwrap();
    assert_eq!(kn_apply(&sigma, &f).unwrap(), kn_apply(&sigma2, &f2).unwrap());
    assert!(matches!(load_signal(&g, scratch("missing.csv")), Err(Error::Csv(_))));
}

#[test]
fn rihaczek_pairing_gives_operator_matrix_elements() {
    let g = Group::cyclic(6).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..5 {
        let sigma = Symbol::random_decaying(g.clone(), 0.2, &mut rng);
        let f = Signal::random(g.clone(), &mut rng);
        let h = Signal::random(g.clone(), &mut rng);
        let lhs = kn_apply(&sigma, &f).unwrap().inner(&h).unwrap();
        let rhs = sigma.data().inner(&rihaczek(&h, &f).unwrap()).unwrap();
        assert!((lhs - rhs).norm() < 1e-10);
    }
}

#[test]
fn subgroup_indicator_stft_is_a_product_of_indicators() {
    // on a product group with a non-cyclic subgroup
    let g = Group::new(vec![4, 6]).unwrap();
    let k = Subgroup::new(g.clone(), vec![2, 3]).unwrap();
    let perp = k.annihilator();
    let chi = Signal::indicator(&k);
    let v = stft(&chi, &chi).unwrap();
    for x in 0..g.order() {
        for xi in 0..g.order() {
            let expected = if k.contains(x) && perp.contains(xi) { k.order() as f64 } else { 0.0 };
            assert!((v.get(x, xi) - Complex64::new(expected, 0.0)).norm() < 1e-12);
        }
    }
}

#[test]
fn non_separable_lattice_pipeline() {
    // lattice generated by steps (2, 1 | 3, 2) in phase space of Z_4 x Z_6
    let g = Group::new(vec![4, 6]).unwrap();
    let lattice = Lattice::new(g.clone(), vec![2, 1, 2, 3]).unwrap();
    assert!(lattice.redundancy() >= 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let sys = GaborSystem::new(Signal::random(g.clone(), &mut rng), lattice).unwrap();
    let diag = sys.frame_bounds();
    assert!(diag.is_frame, "{diag:?}");
    let tight = sys.tightened().unwrap();
    let bounds = tight.frame_bounds();
    assert!((bounds.lower_bound - 1.0).abs() < 1e-10 && (bounds.upper_bound - 1.0).abs() < 1e-10);

    let v = Weight::polynomial(g.phase_space(), 1.0).unwrap();
    let sigma = Symbol::random_decaying(g.clone(), 0.5, &mut rng);
    let h = almost_diag_envelope(&sigma, &tight, &v).unwrap();
    let m = gabor_matrix(&sigma, &tight).unwrap();
    assert_eq!(h.violations(m.entries()), 0);
    assert!(m.factorization_residual() < 1e-10);
    let reverse = reverse_envelope(&h, &tight, &v).unwrap();
    assert_eq!(reverse_violations(&sigma, &tight, &reverse).unwrap(), 0);
}

#[test]
fn undersampled_lattice_is_not_a_frame() {
    let g = Group::cyclic(12).unwrap();
    let lattice = Lattice::separable(g.clone(), &[4], &[6]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let sys = GaborSystem::new(Signal::random(g, &mut rng), lattice).unwrap();
    let diag = sys.frame_bounds();
    assert!(!diag.is_frame);
    assert!(diag.lower_bound.abs() < 1e-10);
    assert!(diag.redundancy < 1.0);
    assert!(matches!(sys.tight_window(), Err(Error::NotAFrame { .. })));
}

#[test]
fn wiener_on_orthonormal_basis() {
    // with an orthonormal basis the Gabor matrix is unitarily similar to K_σ
    let g = Group::cyclic(12).unwrap();
    let sys = GaborSystem::orthonormal_basis(&Subgroup::new(g.clone(), vec![3]).unwrap()).unwrap();
    let v = Weight::polynomial(g.phase_space(), 2.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let sigma = Symbol::random_well_conditioned(g.clone(), 0.6, 0.4, &mut rng);
    let report = wiener_experiment(&sigma, &sys, &v).unwrap();
    assert!(report.inverse_residual < 1e-10);
    assert!(report.pseudoinverse_residual < 1e-8);
    assert_eq!(report.rank.rank, 12);
    let k = kn_matrix(&sigma);
    let kt = kn_matrix(&report.tau);
    assert!(max_abs_diff(&(k.matrix() * kt.matrix()), &tfpdo::linalg::CMatrix::identity(12, 12)) < 1e-10);
    let window = rihaczek(sys.window(), sys.window()).unwrap();
    let tau_norm = sjostrand_norm(&report.tau, &window, &v).unwrap();
    assert!(tau_norm.is_finite() && tau_norm > 0.0);
}
