//! The experiment kinds.

use rand::Rng;
use serde::Serialize;
use tfpdo::gabor::GaborSystem;
use tfpdo::linalg::hermitian_eigen;
use tfpdo::psido::{
    compose_symbols, inverse_spreading, kn_matrix, kn_rihaczek_residual, kn_symbol_from_matrix, rihaczek_stft_sides,
    spreading, spreading_reconstruction, twisted_convolution,
};
use tfpdo::sjostrand::{
    almost_diag_envelope, continuous_envelope, decay_profile, decay_rate, discrete_case_matrix, full_phase_matrix,
    gabor_matrix, lattice_weight, periodic_case_matrix, reverse_envelope, reverse_violations, discrete_periodic_residuals,
    sjostrand_norm, wiener_experiment, DecayPoint,
};
use tfpdo::transforms::{
    commutation_residual, moyal_residual, plancherel_residual, rihaczek, rihaczek_covariance_residual,
    stft_covariance_residual, stft_fundamental_residual, stft_of_rihaczek, stft_product_fourier_check,
};
use tfpdo::{Group, Signal, Symbol};

use crate::config::{stream, Experiment, PROBE_STREAM};
use crate::error::CliError;
use crate::report::{EnvelopeRow, Recorder};

/// Floor below which envelope values are ignored when fitting decay rates.
const DECAY_FLOOR: f64 = 1e-13;
/// Largest group order for which the full-plane certificate is checked.
const FULL_PLANE_LIMIT: usize = 16;
/// Largest group order for which the key identity is checked exhaustively.
const EXHAUSTIVE_LIMIT: usize = 8;
const SAMPLED_PAIRS: usize = 256;

pub fn run(e: &Experiment, rec: &mut Recorder) -> Result<(), CliError> {
    rec.summary.symbols = e.symbols.len();
    match e.kind {
        crate::config::Kind::Identities => identities(e, rec),
        crate::config::Kind::Frames => frames(e, rec),
        crate::config::Kind::AlmostDiag => almost_diag(e, rec),
        crate::config::Kind::Wiener => wiener(e, rec),
        crate::config::Kind::DiscretePeriodic => discrete_periodic(e, rec),
    }
}

fn max(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}

fn mean(values: &[f64]) -> Option<f64> {
    (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64)
}

fn min_max(values: &[f64]) -> (Option<f64>, Option<f64>) {
    let lo = values.iter().cloned().reduce(f64::min);
    let hi = values.iter().cloned().reduce(f64::max);
    (lo, hi)
}

fn identities(e: &Experiment, rec: &mut Recorder) -> Result<(), CliError> {
    let g = &e.group;
    let n = g.order();
    let p = n * n;
    let mut rng = stream(e.seed, PROBE_STREAM);
    let mut worst = [0.0f64; 14];
    for sigma in &e.symbols {
        let f = Signal::random(g.clone(), &mut rng);
        let h = Signal::random(g.clone(), &mut rng);
        let f2 = Signal::random(g.clone(), &mut rng);
        let h2 = Signal::random(g.clone(), &mut rng);
        let (s1, s2) = (rng.random_range(0..p), rng.random_range(0..p));
        worst[0] = worst[0].max(plancherel_residual(&f));
        worst[1] = worst[1].max(commutation_residual(&f, rng.random_range(0..n), rng.random_range(0..n)));
        worst[2] = worst[2].max(stft_fundamental_residual(&f, &h)?);
        let (signed, magnitude) = stft_covariance_residual(&f, &h, s1, s2)?;
        worst[3] = worst[3].max(signed).max(magnitude);
        worst[4] = worst[4].max(stft_product_fourier_check(&f, &f2, &h, &h2)?);
        worst[5] = worst[5].max(rihaczek_covariance_residual(&f, &h, s1, s2)?);
        let r = stft_of_rihaczek(&f, &h, &f2, &h2, rng.random_range(0..p), rng.random_range(0..p))?;
        worst[6] = worst[6].max((r.direct - r.closed_form).norm());
        worst[7] = worst[7].max(moyal_residual(&f, &h)? / (f.norm_sqr() * h.norm_sqr()));

        worst[8] = worst[8].max(kn_rihaczek_residual(sigma, &f, &h)?);
        let k = kn_matrix(sigma);
        worst[9] = worst[9].max(kn_symbol_from_matrix(g, &k)?.max_abs_diff(sigma)?);
        let spread = spreading(sigma);
        worst[10] = worst[10]
            .max(spreading_reconstruction(&spread).max_abs_diff(&k))
            .max(inverse_spreading(&spread).max_abs_diff(sigma)?);
        let tau = Symbol::random_decaying(g.clone(), 0.3, &mut rng);
        let product = k.compose(&kn_matrix(&tau));
        worst[11] = worst[11].max(kn_matrix(&compose_symbols(sigma, &tau)?).max_abs_diff(&product));
        let twisted = twisted_convolution(&spread, &spreading(&tau))?;
        worst[12] = worst[12].max(spreading_reconstruction(&twisted).max_abs_diff(&product));

        let pairs: Vec<(usize, usize)> = if n <= EXHAUSTIVE_LIMIT {
            (0..p).flat_map(|x| (0..p).map(move |y| (x, y))).collect()
        } else {
            (0..SAMPLED_PAIRS).map(|_| (rng.random_range(0..p), rng.random_range(0..p))).collect()
        };
        for (x, y) in pairs {
            let (lhs, rhs) = rihaczek_stft_sides(sigma, &f, &h, x, y)?;
            worst[13] = worst[13].max((lhs - rhs).norm());
        }
    }
    let names = [
        "plancherel",
        "commutation",
        "stft_fourier",
        "stft_covariance",
        "stft_product_fourier",
        "rihaczek_covariance",
        "stft_of_rihaczek",
        "moyal_relative",
        "kn_rihaczek_pairing",
        "symbol_round_trip",
        "spreading_reconstruction",
        "composition",
        "twisted_convolution",
        "key_identity",
    ];
    for (name, value) in names.iter().zip(worst) {
        rec.below(name, value, e.tolerances.identity);
    }
    rec.metric("trials", e.symbols.len());
    rec.metric(
        "key_identity_pairs",
        if n <= EXHAUSTIVE_LIMIT { p * p } else { SAMPLED_PAIRS },
    );
    Ok(())
}

fn system(e: &Experiment) -> Result<GaborSystem, CliError> {
    let window = e.window.clone().expect("validated: window present");
    let lattice = e.lattice.clone().expect("validated: lattice present");
    Ok(GaborSystem::new(window, lattice)?)
}

fn export_window(e: &Experiment, window: &Signal) -> Result<(), CliError> {
    if let Some(path) = &e.window_csv {
        tfpdo::io::save_signal(window, path).map_err(|err| CliError::Io(err.to_string()))?;
    }
    Ok(())
}

fn push_envelope(rec: &mut Recorder, series: &str, symbol: usize, values: &[f64], weight: &[f64], sys: &GaborSystem) {
    let phase = sys.window().group().phase_space();
    for (k, (&value, &w)) in values.iter().zip(weight).enumerate() {
        rec.envelopes.push(EnvelopeRow {
            series: series.to_string(),
            symbol,
            k,
            distance: phase.metric(sys.lattice().point(k)),
            value,
            weight: w,
        });
    }
}

fn push_profile(rec: &mut Recorder, series: &str, symbol: usize, profile: &[DecayPoint]) {
    for p in profile {
        rec.envelopes.push(EnvelopeRow {
            series: series.to_string(),
            symbol,
            k: p.distance,
            distance: p.distance,
            value: p.value,
            weight: 1.0,
        });
    }
}

#[derive(Serialize)]
struct DominationStats {
    violations: usize,
    reverse_violations: usize,
    full_plane_violations: Option<usize>,
    weighted_mass: f64,
    reverse_weighted_mass: f64,
    sjostrand_norm: f64,
    cv_norm: f64,
    decay_rate: Option<f64>,
}

/// Entrywise domination of `M(σ)` by the lattice certificate and by the
/// reverse-direction bound, for every configured symbol.
fn domination_suite(e: &Experiment, sys: &GaborSystem, rec: &mut Recorder) -> Result<Vec<DominationStats>, CliError> {
    let psi = rihaczek(sys.window(), sys.window())?;
    let lattice_v = lattice_weight(sys, &e.weight)?;
    let mut stats = Vec::new();
    for (i, sigma) in e.symbols.iter().enumerate() {
        let h = almost_diag_envelope(sigma, sys, &e.weight)?;
        let m = gabor_matrix(sigma, sys)?;
        let reverse = reverse_envelope(&h, sys, &e.weight)?;
        let full_plane_violations = if e.group.order() <= FULL_PLANE_LIMIT {
            let full = continuous_envelope(sigma, sys.window(), &e.weight)?;
            Some(full.violations(&full_phase_matrix(sigma, sys.window())?))
        } else {
            None
        };
        push_envelope(rec, "h", i, &h.values, &h.weight, sys);
        push_envelope(rec, "reverse", i, &reverse.convolved, &h.weight, sys);
        let profile = decay_profile(&h.values, sys);
        push_profile(rec, "h-decay", i, &profile);
        stats.push(DominationStats {
            violations: h.violations(m.entries()),
            reverse_violations: reverse_violations(sigma, sys, &reverse)?,
            full_plane_violations,
            weighted_mass: h.weighted_mass(),
            reverse_weighted_mass: reverse.convolved_weighted_mass,
            sjostrand_norm: sjostrand_norm(sigma, &psi, &e.weight)?,
            cv_norm: m.matrix().cv_norm(&lattice_v)?,
            decay_rate: decay_rate(&profile, DECAY_FLOOR),
        });
    }
    rec.none("domination_violations", stats.iter().map(|s| s.violations).sum());
    rec.none("reverse_bound_violations", stats.iter().map(|s| s.reverse_violations).sum());
    if stats.iter().all(|s| s.full_plane_violations.is_some()) {
        rec.none(
            "full_plane_domination_violations",
            stats.iter().filter_map(|s| s.full_plane_violations).sum(),
        );
    }
    rec.none(
        "non_finite_reverse_mass",
        stats.iter().filter(|s| !s.reverse_weighted_mass.is_finite()).count(),
    );
    let ratios: Vec<f64> = stats
        .iter()
        .filter(|s| s.sjostrand_norm > 0.0)
        .map(|s| s.cv_norm / s.sjostrand_norm)
        .collect();
    let (lo, hi) = min_max(&ratios);
    rec.summary.equivalence_low = lo;
    rec.summary.equivalence_high = hi;
    rec.summary.sigma_norm = stats.iter().map(|s| s.sjostrand_norm).reduce(f64::max);
    rec.summary.sigma_cv_norm = stats.iter().map(|s| s.cv_norm).reduce(f64::max);
    let rates: Vec<f64> = stats.iter().filter_map(|s| s.decay_rate).collect();
    rec.summary.sigma_decay_rate = mean(&rates);
    Ok(stats)
}

#[derive(Serialize)]
struct FrameMetrics {
    lower_bound: f64,
    upper_bound: f64,
    is_frame: bool,
    is_tight: bool,
    redundancy: f64,
    frame_operator_rank: usize,
}

fn frame_metrics(sys: &GaborSystem) -> FrameMetrics {
    let d = sys.frame_bounds();
    let (eigen, _) = hermitian_eigen(sys.frame_operator().matrix());
    let top = eigen.last().copied().unwrap_or(0.0);
    FrameMetrics {
        lower_bound: d.lower_bound,
        upper_bound: d.upper_bound,
        is_frame: d.is_frame,
        is_tight: d.is_tight,
        redundancy: d.redundancy,
        frame_operator_rank: eigen.iter().filter(|&&l| l > 1e-12 * top).count(),
    }
}

fn frames(e: &Experiment, rec: &mut Recorder) -> Result<(), CliError> {
    let sys = system(e)?;
    let m = frame_metrics(&sys);
    rec.summary.redundancy = Some(m.redundancy);
    rec.summary.frame_lower = Some(m.lower_bound);
    rec.summary.frame_upper = Some(m.upper_bound);
    rec.summary.is_frame = Some(m.is_frame);
    let ratio = if m.upper_bound > 0.0 { m.lower_bound / m.upper_bound } else { 0.0 };
    rec.above_or_expected("frame_property_lower_over_upper", ratio, tfpdo::gabor::FRAME_TOL);
    rec.below(
        "frame_operator_commutation",
        sys.frame_commutation_residual() / m.upper_bound.max(f64::MIN_POSITIVE),
        e.tolerances.identity,
    );
    let is_frame = m.is_frame;
    rec.metric("frame", &m);
    if !is_frame {
        // With S singular, reconstruction through S^+ only recovers the
        // projection of f onto ran(C*); record how much is lost.
        let (values, vectors) = hermitian_eigen(sys.frame_operator().matrix());
        let top = values.last().copied().unwrap_or(0.0);
        let f = Signal::random(e.group.clone(), &mut stream(e.seed, PROBE_STREAM));
        let fv = f.to_vector();
        let lost: f64 = values
            .iter()
            .enumerate()
            .filter(|(_, &l)| l <= 1e-12 * top)
            .map(|(i, _)| vectors.column(i).dotc(&fv).norm_sqr())
            .sum();
        let defect = lost.sqrt() / f.norm();
        rec.metric("reconstruction_defect", defect);
        rec.notice("domination suite skipped: the system is not a frame");
        export_window(e, sys.window())?;
        return Ok(());
    }

    let tight = sys.tightened()?;
    let t = tight.frame_bounds();
    rec.below("tight_lower_bound", (t.lower_bound - 1.0).abs(), e.tolerances.frame);
    rec.below("tight_upper_bound", (t.upper_bound - 1.0).abs(), e.tolerances.frame);
    rec.below("tight_expansion", tight.expansion_residual()?, e.tolerances.identity);
    let mut rng = stream(e.seed, PROBE_STREAM);
    let f = Signal::random(e.group.clone(), &mut rng);
    rec.below("dual_reconstruction", sys.reconstruction_residual(&f)? / f.norm(), e.tolerances.identity);
    rec.metric("tight_frame", frame_metrics(&tight));
    let used = if e.tight { tight } else { sys };
    export_window(e, used.window())?;
    let stats = domination_suite(e, &used, rec)?;
    rec.metric("domination", stats);
    Ok(())
}

fn almost_diag(e: &Experiment, rec: &mut Recorder) -> Result<(), CliError> {
    let sys = system(e)?;
    let sys = if e.tight { sys.tightened()? } else { sys };
    let d = sys.frame_bounds();
    rec.summary.redundancy = Some(d.redundancy);
    rec.summary.frame_lower = Some(d.lower_bound);
    rec.summary.frame_upper = Some(d.upper_bound);
    rec.summary.is_frame = Some(d.is_frame);
    export_window(e, sys.window())?;
    let mut factorization: f64 = 0.0;
    for sigma in &e.symbols {
        let m = gabor_matrix(sigma, &sys)?;
        factorization = factorization.max(m.factorization_residual()).max(m.intertwining_residual());
    }
    rec.below("gabor_matrix_factorization", factorization, e.tolerances.identity);
    let stats = domination_suite(e, &sys, rec)?;
    rec.metric("frame", &d);
    rec.metric("domination", stats);
    Ok(())
}

fn wiener(e: &Experiment, rec: &mut Recorder) -> Result<(), CliError> {
    let sys = system(e)?;
    let sys = if e.tight { sys.tightened()? } else { sys };
    let d = sys.frame_bounds();
    rec.summary.redundancy = Some(d.redundancy);
    rec.summary.frame_lower = Some(d.lower_bound);
    rec.summary.frame_upper = Some(d.upper_bound);
    rec.summary.is_frame = Some(d.is_frame);
    export_window(e, sys.window())?;
    let mut reports = Vec::new();
    for (i, sigma) in e.symbols.iter().enumerate() {
        let r = wiener_experiment(sigma, &sys, &e.weight)?;
        let lattice_v = lattice_weight(&sys, &e.weight)?;
        push_envelope(rec, "sigma", i, &r.sigma_envelope, lattice_v.values(), &sys);
        push_envelope(rec, "tau", i, &r.tau_envelope, lattice_v.values(), &sys);
        push_profile(rec, "sigma-decay", i, &r.sigma_decay);
        push_profile(rec, "tau-decay", i, &r.tau_decay);
        reports.push(r);
    }
    rec.below("inverse", max(reports.iter().map(|r| r.inverse_residual)), e.tolerances.inverse);
    rec.below("pseudoinverse", max(reports.iter().map(|r| r.pseudoinverse_residual)), e.tolerances.pseudoinverse);
    rec.below("moore_penrose", max(reports.iter().map(|r| r.moore_penrose_residual)), e.tolerances.pseudoinverse);
    let finite = reports.iter().all(|r| r.sigma_norm.is_finite() && r.tau_norm.is_finite());
    rec.none("non_finite_norms", usize::from(!finite));
    let pick = |f: fn(&tfpdo::sjostrand::WienerReport) -> f64| reports.iter().map(f).reduce(f64::max);
    rec.summary.sigma_norm = pick(|r| r.sigma_norm);
    rec.summary.tau_norm = pick(|r| r.tau_norm);
    rec.summary.sigma_cv_norm = pick(|r| r.sigma_cv_norm);
    rec.summary.tau_cv_norm = pick(|r| r.tau_cv_norm);
    let rates = |f: fn(&tfpdo::sjostrand::WienerReport) -> Option<f64>| {
        mean(&reports.iter().filter_map(f).collect::<Vec<_>>())
    };
    rec.summary.sigma_decay_rate = rates(|r| r.sigma_decay_rate);
    rec.summary.tau_decay_rate = rates(|r| r.tau_decay_rate);
    let ratios: Vec<f64> = reports
        .iter()
        .flat_map(|r| [r.sigma_cv_norm / r.sigma_norm, r.tau_cv_norm / r.tau_norm])
        .filter(|x| x.is_finite())
        .collect();
    let (lo, hi) = min_max(&ratios);
    rec.summary.equivalence_low = lo;
    rec.summary.equivalence_high = hi;
    rec.metric("frame", &d);
    rec.metric("symbols", &reports);
    Ok(())
}

#[derive(Serialize)]
struct DiscretePeriodicStats {
    discrete_residual: f64,
    periodic_residual: f64,
    discrete_cv_norm: f64,
    periodic_cv_norm: f64,
}

fn discrete_periodic(e: &Experiment, rec: &mut Recorder) -> Result<(), CliError> {
    let mut stats = Vec::new();
    let index: &Group = &e.group;
    for (i, sigma) in e.symbols.iter().enumerate() {
        let (d, p) = discrete_periodic_residuals(sigma, &e.weight)?;
        let discrete = discrete_case_matrix(sigma)?;
        let periodic = periodic_case_matrix(sigma)?;
        for (series, m) in [("discrete", &discrete), ("periodic", &periodic)] {
            for (k, value) in m.diagonal_envelope().into_iter().enumerate() {
                rec.envelopes.push(EnvelopeRow {
                    series: series.to_string(),
                    symbol: i,
                    k,
                    distance: index.metric(k),
                    value,
                    weight: e.weight.value(k),
                });
            }
        }
        stats.push(DiscretePeriodicStats {
            discrete_residual: d,
            periodic_residual: p,
            discrete_cv_norm: discrete.cv_norm(&e.weight)?,
            periodic_cv_norm: periodic.cv_norm(&e.weight)?,
        });
    }
    rec.below("discrete_case_identity", max(stats.iter().map(|s| s.discrete_residual)), e.tolerances.discrete_periodic);
    rec.below("periodic_case_identity", max(stats.iter().map(|s| s.periodic_residual)), e.tolerances.discrete_periodic);
    rec.summary.sigma_norm = stats.iter().map(|s| s.discrete_cv_norm).reduce(f64::max);
    rec.summary.sigma_cv_norm = stats.iter().map(|s| s.periodic_cv_norm).reduce(f64::max);
    rec.metric("symbols", stats);
    Ok(())
}
