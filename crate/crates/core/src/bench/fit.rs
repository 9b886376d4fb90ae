use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FitError {
    #[error("need at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("point ({0}, {1}) is outside the fit's domain")]
    OutOfDomain(f64, f64),
    #[error("all x values coincide")]
    Degenerate,
}

/// Ordinary least squares `y = a + b x`, returning `(a, b)`.
fn line(points: &[(f64, f64)]) -> Result<(f64, f64), FitError> {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx <= f64::EPSILON * n {
        return Err(FitError::Degenerate);
    }
    let b = sxy / sxx;
    Ok((my - b * mx, b))
}

fn transformed(points: &[(f64, f64)], fx: impl Fn(f64) -> f64) -> Result<(f64, f64), FitError> {
    if points.len() < 3 {
        return Err(FitError::TooFewPoints(points.len()));
    }
    let mut t = Vec::with_capacity(points.len());
    for &(x, y) in points {
        let tx = fx(x);
        if y.is_nan() || y <= 0.0 || !tx.is_finite() {
            return Err(FitError::OutOfDomain(x, y));
        }
        t.push((tx, y.ln()));
    }
    let (a, b) = line(&t)?;
    Ok((a.exp(), b))
}

/// Fits `y = c * x^e` by least squares in log-log space; returns `(c, e)`.
pub fn fit_power_law(points: &[(f64, f64)]) -> Result<(f64, f64), FitError> {
    transformed(points, |x| if x > 0.0 { x.ln() } else { f64::NAN })
}

/// Fits `y = c * ln(x)^e` by least squares in log / log-log space; returns
/// `(c, e)`. Requires `x > 1`.
pub fn fit_polylog(points: &[(f64, f64)]) -> Result<(f64, f64), FitError> {
    transformed(points, |x| if x > 1.0 { x.ln().ln() } else { f64::NAN })
}
