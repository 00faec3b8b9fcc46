use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FitError {
    /// Every count is zero.
    EmptySet,
    /// Fewer than two distinct abscissae with a positive count.
    TooFewPoints,
}

impl fmt::Display for FitError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FitError::EmptySet => f.write_str("empty set, exponent undefined"),
            FitError::TooFewPoints => f.write_str("fewer than two usable points, exponent undefined"),
        }
    }
}

/// Least-squares slope of `ln(count)` against `ln(n)`.
///
/// Points with a zero count carry no logarithm and are skipped.
pub fn fit_exponent(points: &[(u64, u64)]) -> Result<f64, FitError> {
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|&&(n, c)| n > 0 && c > 0)
        .map(|&(n, c)| ((n as f64).ln(), (c as f64).ln()))
        .collect();
    if logs.is_empty() {
        return Err(FitError::EmptySet);
    }
    let len = logs.len() as f64;
    let mean_x = logs.iter().map(|p| p.0).sum::<f64>() / len;
    let mean_y = logs.iter().map(|p| p.1).sum::<f64>() / len;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    if logs.len() < 2 || sxx == 0.0 {
        return Err(FitError::TooFewPoints);
    }
    let sxy: f64 = logs.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    Ok(sxy / sxx)
}
