//! Ordinary least squares: straight lines and power laws in log-log space.

use crate::error::{Error, Result};

/// Result of a two-parameter fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    /// `[slope, intercept]` for [`linear_fit`], `[gamma1, gamma2]` for
    /// [`power_fit`].
    pub coefficients: [f64; 2],
    /// Residual sum of squares in the fitted coordinates.
    pub rss: f64,
    pub r_squared: f64,
    pub samples: usize,
}

impl FitResult {
    pub fn slope(&self) -> f64 {
        self.coefficients[0]
    }

    pub fn intercept(&self) -> f64 {
        self.coefficients[1]
    }
}

/// OLS fit of `y = slope * x + intercept`.
pub fn linear_fit(points: &[(f64, f64)]) -> Result<FitResult> {
    let n = points.len();
    if n < 2 {
        return Err(Error::config(format!(
            "linear fit needs at least 2 points, got {n}"
        )));
    }
    let nf = n as f64;
    let xbar = points.iter().map(|p| p.0).sum::<f64>() / nf;
    let ybar = points.iter().map(|p| p.1).sum::<f64>() / nf;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for &(x, y) in points {
        sxx += (x - xbar) * (x - xbar);
        sxy += (x - xbar) * (y - ybar);
        syy += (y - ybar) * (y - ybar);
    }
    if sxx == 0.0 {
        return Err(Error::config("linear fit degenerate: all x identical"));
    }
    let slope = sxy / sxx;
    let intercept = ybar - slope * xbar;
    let rss = (syy - slope * sxy).max(0.0);
    let r_squared = if syy > 0.0 { 1.0 - rss / syy } else { 1.0 };
    Ok(FitResult {
        coefficients: [slope, intercept],
        rss,
        r_squared,
        samples: n,
    })
}

/// Fits `y = gamma1 * (x / x_ref)^gamma2` by OLS on
/// `ln y = ln gamma1 + gamma2 ln(x / x_ref)`.
pub fn power_fit(points: &[(f64, f64)], x_ref: f64) -> Result<FitResult> {
    if !(x_ref > 0.0) {
        return Err(Error::config("power fit reference must be positive"));
    }
    let mut logged = Vec::with_capacity(points.len());
    for &(x, y) in points {
        if !(x > 0.0 && y > 0.0) {
            return Err(Error::config(format!(
                "power fit needs positive data, got ({x}, {y})"
            )));
        }
        logged.push(((x / x_ref).ln(), y.ln()));
    }
    let fit = linear_fit(&logged)?;
    Ok(FitResult {
        coefficients: [fit.intercept().exp(), fit.slope()],
        rss: fit.rss,
        r_squared: fit.r_squared,
        samples: fit.samples,
    })
}
