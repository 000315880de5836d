use super::StudyError;

/// Errors at or below this level are treated as round-off.
pub const DEFAULT_FLOOR: f64 = 1e-8;

/// Least-squares slope of `log(error)` against `log(h)` over the points
/// with `error > floor`.
pub fn fit_rate(points: &[(f64, f64)], floor: f64) -> Result<f64, StudyError> {
    let kept: Vec<(f64, f64)> = points
        .iter()
        .filter(|(h, e)| *e > floor && e.is_finite() && *h > 0.0)
        .map(|(h, e)| (h.ln(), e.ln()))
        .collect();
    if kept.len() < 2 {
        return Err(StudyError::InsufficientPoints { retained: kept.len() });
    }
    let n = kept.len() as f64;
    let mx = kept.iter().map(|p| p.0).sum::<f64>() / n;
    let my = kept.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = kept.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(StudyError::InsufficientPoints { retained: 1 });
    }
    let sxy: f64 = kept.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Ok(sxy / sxx)
}
