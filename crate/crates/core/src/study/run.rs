use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{fit_rate, gain_error, Case, ErrorNorm, ReferenceSpec, StudyConfig, StudyError};
use crate::models::{reference_1d, scalar_study, GainFunction, ModelError, ModelSpec};

/// Caps worker threads for [`run_study`].
pub const THREADS_ENV: &str = "RICCATI_FEM_THREADS";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyRow {
    pub case: String,
    pub k: usize,
    pub n: usize,
    pub h: f64,
    pub error_l2: Option<f64>,
    pub error_h1l2: Option<f64>,
    /// Fitted rate of this row's order.
    pub rate: Option<f64>,
}

/// A `(k, n)` cell that could not be computed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellFailure {
    pub k: usize,
    pub n: usize,
    pub message: String,
    /// Newton failure or loss of stability, as opposed to bad input.
    pub solver: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyResult {
    pub case: Case,
    pub norm: ErrorNorm,
    pub rows: Vec<StudyRow>,
    /// Fitted rate per order; `None` when too few points clear the floor.
    pub rates: BTreeMap<usize, Option<f64>>,
    pub failures: Vec<CellFailure>,
}

impl StudyResult {
    pub fn rate(&self, k: usize) -> Option<f64> {
        self.rates.get(&k).copied().flatten()
    }

    /// `(h, error)` in the fitted norm for order `k`.
    pub fn series(&self, k: usize) -> Vec<(f64, f64)> {
        self.rows
            .iter()
            .filter(|r| r.k == k)
            .filter_map(|r| self.primary_error(r).map(|e| (r.h, e)))
            .collect()
    }

    pub fn primary_error(&self, row: &StudyRow) -> Option<f64> {
        match self.norm {
            ErrorNorm::L2 => row.error_l2,
            ErrorNorm::H1xL2 => row.error_h1l2,
        }
    }
}

fn is_solver_error(e: &StudyError) -> bool {
    use crate::riccati::RiccatiError as R;
    matches!(
        e,
        StudyError::Model(ModelError::Riccati(
            R::NotStabilizing { .. } | R::MaxIterExceeded { .. } | R::StepRejected { .. } | R::Linalg(_)
        )) | StudyError::Model(ModelError::Linalg(_))
    )
}

/// Runs `f` on a pool capped by `RICCATI_FEM_THREADS` when set.
pub fn with_thread_cap<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    let cap = std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()).filter(|&n| n > 0);
    match cap.and_then(|n| rayon::ThreadPoolBuilder::new().num_threads(n).build().ok()) {
        Some(pool) => pool.install(f),
        None => f(),
    }
}

/// Builds every `(k, n)` model, solves for its gain and measures the error
/// against the reference. Failing cells are recorded and skipped.
pub fn run_study(config: &StudyConfig) -> Result<StudyResult, StudyError> {
    config.validate()?;
    with_thread_cap(|| run_inner(config))
}

fn run_inner(config: &StudyConfig) -> Result<StudyResult, StudyError> {
    let case = config.case;
    let Some(model) = config.model() else {
        return scalar_result(config);
    };
    let norm = if case == Case::Wave { ErrorNorm::H1xL2 } else { ErrorNorm::L2 };
    let mut orders = config.orders.clone();
    orders.sort_unstable();
    orders.dedup();
    let mut sizes = config.mesh_sizes.clone();
    sizes.sort_unstable();
    sizes.dedup();

    let references = build_references(config, &model, &orders, &sizes)?;
    let cells: Vec<(usize, usize)> = orders.iter().flat_map(|&k| sizes.iter().map(move |&n| (k, n))).collect();
    let outcomes: Vec<Result<(f64, Option<f64>), StudyError>> = cells
        .par_iter()
        .map(|&(k, n)| {
            let reference = &references[&k];
            let gain = model.gain(n, k)?;
            let l2 = gain_error(&gain, reference, ErrorNorm::L2)?;
            let h1 = if case == Case::Wave {
                Some(gain_error(&gain, reference, ErrorNorm::H1xL2)?)
            } else {
                None
            };
            Ok((l2, h1))
        })
        .collect();

    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for (&(k, n), out) in cells.iter().zip(outcomes) {
        match out {
            Ok((l2, h1)) => rows.push(StudyRow {
                case: case.name().to_string(),
                k,
                n,
                h: config.h(n),
                error_l2: Some(l2),
                error_h1l2: h1,
                rate: None,
            }),
            Err(e) => failures.push(CellFailure {
                k,
                n,
                solver: is_solver_error(&e),
                message: e.to_string(),
            }),
        }
    }
    let mut result = StudyResult {
        case,
        norm,
        rows,
        rates: BTreeMap::new(),
        failures,
    };
    fill_rates(&mut result, &orders, config.floor);
    Ok(result)
}

fn build_references(
    config: &StudyConfig,
    model: &ModelSpec,
    orders: &[usize],
    sizes: &[usize],
) -> Result<BTreeMap<usize, GainFunction>, StudyError> {
    match config.reference {
        ReferenceSpec::Spectral(p) => {
            let g = reference_1d(model, p)?;
            Ok(orders.iter().map(|&k| (k, g.clone())).collect())
        }
        ReferenceSpec::Refine(factor) => {
            let n_ref = factor * sizes.iter().copied().max().unwrap_or(1);
            orders
                .par_iter()
                .map(|&k| Ok((k, model.gain(n_ref, k)?)))
                .collect::<Result<BTreeMap<_, _>, StudyError>>()
        }
    }
}

fn fill_rates(result: &mut StudyResult, orders: &[usize], floor: f64) {
    for &k in orders {
        let rate = fit_rate(&result.series(k), floor).ok();
        result.rates.insert(k, rate);
        for row in result.rows.iter_mut().filter(|r| r.k == k) {
            row.rate = rate;
        }
    }
}

fn scalar_result(config: &StudyConfig) -> Result<StudyResult, StudyError> {
    let (a, f, g) = (1.0, 1.0, 1.0);
    let data = scalar_study(a, f, g, &config.eps_grid)?;
    let rows = data
        .iter()
        .enumerate()
        .map(|(i, &(eps, err))| StudyRow {
            case: Case::Scalar.name().to_string(),
            k: 1,
            n: i + 1,
            h: eps,
            error_l2: Some(err),
            error_h1l2: None,
            rate: None,
        })
        .collect();
    let mut result = StudyResult {
        case: Case::Scalar,
        norm: ErrorNorm::L2,
        rows,
        rates: BTreeMap::new(),
        failures: Vec::new(),
    };
    fill_rates(&mut result, &[1], config.floor);
    Ok(result)
}
