use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use riccati_fem::fem::{build_space, BoundaryCondition, DimKind, Domain, FemField};
use riccati_fem::models::{bump1d, GainFunction};
use riccati_fem::study::*;

// ‖bump‖ on (−1, 1) by adaptive quadrature (mpmath)
const BUMP1D_L2: f64 = 0.364_809_704_976_436_0;

fn space(k: usize, n: usize) -> Arc<riccati_fem::fem::FemSpace> {
    Arc::new(build_space(DimKind::OneD, k, n, Domain::Interval(-1.0, 1.0), BoundaryCondition::Neumann).unwrap())
}

fn gain(f: FemField) -> GainFunction {
    GainFunction::new(vec![f]).unwrap()
}

fn small_thermal() -> StudyConfig {
    StudyConfig {
        orders: vec![1, 2],
        mesh_sizes: vec![4, 8],
        dt: 1e-2,
        reference: ReferenceSpec::Spectral(24),
        ..StudyConfig::for_case(Case::Thermal1d)
    }
}

#[test]
fn gain_error_basics() {
    let fine = gain(FemField::interpolate(space(8, 16), |x| bump1d(x[0])));
    assert_eq!(gain_error(&fine, &fine, ErrorNorm::L2).unwrap(), 0.0);
    let zero = gain(FemField::zeros(space(1, 3)));
    let e = gain_error(&zero, &fine, ErrorNorm::L2).unwrap();
    assert!((e - BUMP1D_L2).abs() < 1e-8, "{e}");

    let sq = Arc::new(build_space(DimKind::TwoDTensor, 1, 2, Domain::UnitSquare, BoundaryCondition::Neumann).unwrap());
    assert!(matches!(
        gain_error(&zero, &gain(FemField::zeros(sq)), ErrorNorm::L2),
        Err(StudyError::DomainMismatch)
    ));
}

#[test]
fn gain_error_triangle_inequality() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let s1 = space(2, 5);
    let s2 = space(3, 4);
    for norm in [ErrorNorm::L2, ErrorNorm::H1xL2] {
        for _ in 0..20 {
            let mut field = |s: &Arc<_>| {
                let s: &Arc<riccati_fem::fem::FemSpace> = s;
                FemField::new(s.clone(), (0..s.n_free()).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap()
            };
            let a = gain(field(&s1));
            let b = gain(field(&s2));
            let z = gain(FemField::zeros(s1.clone()));
            let na = gain_error(&a, &z, norm).unwrap();
            let nb = gain_error(&b, &z, norm).unwrap();
            let nab = gain_error(&a, &b, norm).unwrap();
            assert!((na - nb).abs() <= nab * (1.0 + 1e-12) + 1e-14);
        }
    }
}

#[test]
fn fit_rate_examples() {
    let exact: Vec<(f64, f64)> = [0.5, 0.25, 0.125, 0.0625].iter().map(|h| (*h, 3.0 * h * h)).collect();
    assert!((fit_rate(&exact, DEFAULT_FLOOR).unwrap() - 2.0).abs() < 1e-12);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..50 {
        let noisy: Vec<(f64, f64)> =
            exact.iter().map(|(h, e)| (*h, e * (1.0 + rng.gen_range(-0.05..0.05)))).collect();
        assert!((fit_rate(&noisy, DEFAULT_FLOOR).unwrap() - 2.0).abs() <= 0.1);
    }
    let tiny: Vec<(f64, f64)> = exact.iter().map(|(h, e)| (*h, e * 1e-12)).collect();
    assert!(matches!(fit_rate(&tiny, DEFAULT_FLOOR), Err(StudyError::InsufficientPoints { retained: 0 })));
    // points at the floor are dropped, the rest still fit
    let mut mixed = exact.clone();
    mixed.push((0.01, 1e-9));
    assert!((fit_rate(&mixed, DEFAULT_FLOOR).unwrap() - 2.0).abs() < 1e-12);
}

#[test]
fn csv_roundtrip_and_schema() {
    let result = run_study(&small_thermal()).unwrap();
    let text = to_csv(&result);
    assert!(text.starts_with(&format!("{CSV_HEADER}\n")));
    assert!(!text.contains('\r'));
    assert_eq!(text.lines().count(), 1 + 4);
    assert_eq!(parse_csv(&text).unwrap(), result.rows);
    // every row repeats its order's rate; the H1 column stays blank here
    for row in &result.rows {
        assert_eq!(row.rate, result.rate(row.k));
        assert!(row.error_h1l2.is_none());
    }
    assert!(text.lines().nth(1).unwrap().contains(",,"));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    write_csv(&result, &path).unwrap();
    assert_eq!(std::fs::read_to_string(&path).unwrap(), text);
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    assert!(matches!(
        write_csv(&result, &dir.path().join("missing/out.csv")),
        Err(StudyError::Io(_))
    ));
}

#[test]
fn single_row_csv() {
    let result = StudyResult {
        case: Case::Wave,
        norm: ErrorNorm::H1xL2,
        rows: vec![StudyRow {
            case: "wave".into(),
            k: 1,
            n: 4,
            h: 0.5,
            error_l2: Some(0.1),
            error_h1l2: Some(0.2),
            rate: None,
        }],
        rates: BTreeMap::from([(1, None)]),
        failures: vec![],
    };
    let text = to_csv(&result);
    assert_eq!(text.lines().count(), 2);
    assert!(text.ends_with(",\n"));
    assert_eq!(parse_csv(&text).unwrap(), result.rows);
    assert!(parse_csv("bad header\n").is_err());
}

#[test]
fn study_is_deterministic() {
    let cfg = small_thermal();
    let a = to_csv(&run_study(&cfg).unwrap());
    let b = to_csv(&run_study(&cfg).unwrap());
    assert_eq!(a, b);
}

#[test]
fn svg_output() {
    let result = run_study(&small_thermal()).unwrap();
    let svg = to_svg(&result);
    assert_eq!(svg, to_svg(&result));
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    assert_eq!(svg.matches("<polyline").count(), 2);
    assert_eq!(svg.matches("stroke-dasharray").count(), 2);

    let empty = StudyResult {
        case: Case::Thermal1d,
        norm: ErrorNorm::L2,
        rows: vec![],
        rates: BTreeMap::new(),
        failures: vec![],
    };
    let svg = to_svg(&empty);
    assert!(svg.contains("<rect") && !svg.contains("<polyline"));

    let mut two = result.clone();
    two.rows.retain(|r| r.k == 1);
    let svg = to_svg(&two);
    assert_eq!(svg.matches("<polyline").count(), 1);
    let line = svg.lines().find(|l| l.starts_with("<polyline")).unwrap();
    let points = line.split('"').nth(1).unwrap();
    assert_eq!(points.split(' ').count(), 2);
}

#[test]
fn scalar_study_rows() {
    let cfg = StudyConfig::for_case(Case::Scalar);
    let result = run_study(&cfg).unwrap();
    assert_eq!(result.rows.len(), 16);
    assert!(result.rows.iter().all(|r| r.k == 1 && r.error_l2.unwrap() <= 2.0 * r.h));
}

#[test]
fn invalid_configs_are_rejected() {
    let mut bad = small_thermal();
    bad.orders.clear();
    assert!(matches!(run_study(&bad), Err(StudyError::InvalidConfig(_))));
    let mut bad = small_thermal();
    bad.dt = 0.0;
    assert!(matches!(run_study(&bad), Err(StudyError::InvalidConfig(_))));
    let mut bad = StudyConfig::for_case(Case::Thermal2d);
    bad.reference = ReferenceSpec::Spectral(16);
    assert!(matches!(run_study(&bad), Err(StudyError::InvalidConfig(_))));
    let mut bad = StudyConfig::for_case(Case::Scalar);
    bad.eps_grid = vec![0.1, -1.0];
    assert!(matches!(run_study(&bad), Err(StudyError::InvalidConfig(_))));
}

#[test]
fn config_json_roundtrip() {
    for case in [Case::Scalar, Case::Thermal1d, Case::Thermal2d, Case::Wave, Case::ViolationGaussian2d, Case::ViolationDelta1d] {
        let cfg = StudyConfig::paper(case);
        let js = serde_json::to_string(&cfg).unwrap();
        assert_eq!(serde_json::from_str::<StudyConfig>(&js).unwrap(), cfg);
        assert_eq!(Case::from_name(case.name()), Some(case));
    }
    let p = StudyConfig::paper(Case::Thermal1d);
    assert_eq!((p.alpha, p.beta, p.tau, p.dt), (1.0, 1.0, 0.1, 1e-4));
    assert_eq!(p.orders, vec![1, 2, 3, 4]);
    let p = StudyConfig::paper(Case::Thermal2d);
    assert_eq!((p.alpha, p.beta, p.r), (1e-2, 1.0, 1e-4));
    let p = StudyConfig::paper(Case::Wave);
    assert_eq!((p.c, p.gamma, p.r), (1.0, 1e-4, 1.0));
    assert_eq!(p.orders, vec![1, 2, 3, 4]);
}

#[test]
fn thread_cap_env() {
    std::env::set_var(THREADS_ENV, "1");
    let r = run_study(&small_thermal()).unwrap();
    std::env::remove_var(THREADS_ENV);
    assert_eq!(to_csv(&r), to_csv(&run_study(&small_thermal()).unwrap()));
}
