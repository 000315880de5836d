use riccati_fem::fem::FemField;
use riccati_fem::linalg::{real_schur, Matrix};
use riccati_fem::models::*;
use riccati_fem::riccati::{solve_care, CareOptions, DreConfig};
use riccati_fem::study::{gain_error, ErrorNorm};

fn wave_params() -> WaveParams {
    WaveParams {
        c: 1.0,
        gamma: 1e-4,
        b1: Profile::Zero,
        b2: Profile::Bump1d,
        q1: Profile::Bump1d,
        q2: Profile::Zero,
        beta_weight: 1.0,
    }
}

#[test]
fn scalar_closed_form_and_bound() {
    let sys = ScalarSystem::new(1.0, 1.0, 1.0, 0.1).unwrap();
    assert!((sys.sigma() - (2f64.sqrt() - 1.0)).abs() < 1e-15);
    // (√2 − 1) − (−1.1 + √2.21)
    assert!((sys.sigma() - sys.sigma_eps() - 0.027_607).abs() < 1e-6);
    for (eps, err) in scalar_study(1.0, 1.0, 1.0, &default_eps_grid()).unwrap() {
        assert!(err >= 0.0 && err <= 2.0 * eps);
    }
    // σ solves −2aσ − gσ² + f = 0
    let (a, f, g) = (0.7, 2.0, 3.0);
    let s = scalar_sigma(a, f, g).unwrap();
    assert!((-2.0 * a * s - g * s * s + f).abs() < 1e-14);
    assert!(scalar_sigma(1.0, 1.0, 0.0).is_err());
    assert!(ScalarSystem::new(1.0, 1.0, 1.0, -2.0).is_err());
}

#[test]
fn eps_grid_is_log_spaced() {
    let g = default_eps_grid();
    assert_eq!(g.len(), 16);
    assert!((g[0] - 1e-4).abs() < 1e-18 && (g[15] - 1.0).abs() < 1e-15);
    let ratio = g[1] / g[0];
    assert!(g.windows(2).all(|w| (w[1] / w[0] - ratio).abs() < 1e-12));
}

#[test]
fn profiles() {
    assert_eq!(bump1d(1.0), 0.0);
    assert_eq!(bump1d(-1.2), 0.0);
    assert!((bump1d(0.0) - (-1f64).exp()).abs() < 1e-16);
    assert!((bump2d(0.5, 0.5) - (-4f64).exp()).abs() < 1e-16);
    assert_eq!(bump2d(0.0, 0.3), 0.0);
    assert!((gaussian2d(1.0, 0.0) - (-1f64).exp()).abs() < 1e-16);
    for name in ["zero", "bump1d", "bump2d", "gaussian2d", "delta1d"] {
        assert_eq!(Profile::from_name(name).unwrap().name(), name);
    }
    assert!(matches!(Profile::from_name("boxcar"), Err(ModelError::UnknownProfile(_))));
    assert_eq!(Profile::Delta1d.point(), Some(&[0.0][..]));
}

#[test]
fn thermal_models_are_stable() {
    let m = thermal1d_model(6, 2, 1.0, 1.0, Profile::Bump1d, Profile::Bump1d).unwrap();
    let abscissa = real_schur(&m.a).unwrap().spectral_abscissa();
    // Neumann constants decay at exactly β
    assert!((abscissa + 1.0).abs() < 1e-10);
    assert_eq!(m.kind, ModelKind::Thermal1d);
    let m = thermal2d_model(3, 1, 1e-2, 1.0, Profile::Bump2d, Profile::Bump2d, 1e-4).unwrap();
    assert!(real_schur(&m.a).unwrap().spectral_abscissa() <= -1.0 + 1e-10);
    assert!(thermal1d_model(4, 1, -1.0, 1.0, Profile::Bump1d, Profile::Bump1d).is_err());
}

#[test]
fn wave_model_structure() {
    let m = wave_model(4, 2, &wave_params()).unwrap();
    assert_eq!(m.dim(), 2 * m.component_len());
    let schur = real_schur(&m.a).unwrap();
    for (re, _) in schur.eigenvalues() {
        assert!(re <= 1e-12 && re >= -1e-4 - 1e-10);
    }
    let mut p = wave_params();
    p.gamma = 0.0;
    assert!(wave_model(4, 2, &p).is_err());
    assert!(wave_gain_balanced(4, 2, &p, &CareOptions::default()).is_err());
}

#[test]
fn wave_gain_routes_agree() {
    let p = wave_params();
    let model = wave_model(6, 2, &p).unwrap();
    let sol = solve_care(&model.care_problem().unwrap(), &CareOptions::default()).unwrap();
    let nodal = gain_from_care(&model, &sol.p).unwrap();
    let balanced = wave_gain_balanced(6, 2, &p, &CareOptions::default()).unwrap();
    assert_eq!(balanced.components.len(), 2);
    let zero = GainFunction::new(nodal.components.iter().map(|c| FemField::zeros(c.space().clone())).collect()).unwrap();
    let scale = gain_error(&nodal, &zero, ErrorNorm::H1xL2).unwrap();
    let diff = gain_error(&nodal, &balanced, ErrorNorm::H1xL2).unwrap();
    assert!(diff <= 1e-8 * scale, "{diff:e} vs {scale:e}");
}

#[test]
fn modal_2d_gain_matches_dense() {
    let p = Thermal2dParams {
        alpha: 1e-2,
        beta: 1.0,
        r: 1e-4,
        b: Profile::Gaussian2d,
        q: Profile::Gaussian2d,
    };
    let dense = thermal2d_model(3, 2, p.alpha, p.beta, p.b, p.q, p.r).unwrap();
    let sol = solve_care(&dense.care_problem().unwrap(), &CareOptions::default()).unwrap();
    let g = gain_from_care(&dense, &sol.p).unwrap();
    let modal = thermal2d_gain_modal(3, 2, &p, usize::MAX).unwrap();
    assert_eq!(modal.modes_solved, modal.modes_total);
    let diff = gain_error(&g, &modal.gain, ErrorNorm::L2).unwrap();
    assert!(diff <= 1e-8, "{diff:e}");
}

#[test]
fn thermal_gain_is_even_and_steady_for_long_horizons() {
    let model = thermal1d_model(8, 2, 1.0, 1.0, Profile::Bump1d, Profile::Bump1d).unwrap();
    let n = model.dim();
    let traj = gain_trajectory(&model, &DreConfig::new(30.0, 0.05, Matrix::zeros(n, n))).unwrap();
    let c = traj.initial.coeffs();
    for i in 0..n {
        assert!((c[i] - c[n - 1 - i]).abs() <= 1e-12 * c.iter().fold(0.0f64, |m, v| m.max(v.abs())));
    }
    let sol = solve_care(&model.care_problem().unwrap(), &CareOptions::default()).unwrap();
    let steady = gain_from_care(&model, &sol.p).unwrap();
    assert!(gain_error(&traj.initial, &steady, ErrorNorm::L2).unwrap() < 1e-6);
}

#[test]
fn delta_actuator_gain() {
    let spec = ModelSpec::Thermal1d(Thermal1dParams {
        alpha: 1.0,
        beta: 1.0,
        b: Profile::Delta1d,
        q: Profile::Bump1d,
        tau: 0.1,
        dt: 1e-2,
    });
    let g = spec.gain(4, 2).unwrap();
    assert!(g.coeffs().iter().all(|v| v.is_finite()));
    assert!(g.coeffs().iter().any(|v| *v != 0.0));
}

#[test]
fn reference_order_is_capped() {
    let spec = ModelSpec::Wave(wave_params());
    assert!(reference_1d(&spec, MAX_REFERENCE_ORDER + 1).is_err());
    assert!(reference_1d(&spec, 0).is_err());
    let two_d = ModelSpec::Thermal2d(Thermal2dParams {
        alpha: 1e-2,
        beta: 1.0,
        r: 1e-4,
        b: Profile::Bump2d,
        q: Profile::Bump2d,
    });
    assert!(reference_1d(&two_d, 8).is_err());
}
