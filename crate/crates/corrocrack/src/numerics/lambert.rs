//! Principal branch of the Lambert W function on the non-negative reals.

use crate::error::{Error, Result};

/// Solves `w * exp(w) = f` for `f >= 0` (principal branch W0).
///
/// Halley iteration with a bisection safeguard; the iterate is kept inside a
/// bracket that always contains the root, so convergence cannot be lost to an
/// overshoot. Residual target is `|w e^w - f| <= 1e-13 * max(f, tiny)`.
pub fn lambert_w0(f: f64) -> Result<f64> {
    if !f.is_finite() || f < 0.0 {
        return Err(Error::numerical(format!(
            "lambert_w0 defined only for finite f >= 0, got {f}"
        )));
    }
    if f == 0.0 {
        return Ok(0.0);
    }

    // Bracket [lo, hi] with residual(lo) <= 0 <= residual(hi).
    let mut lo = 0.0_f64;
    let mut hi = if f > std::f64::consts::E {
        f.ln() // W(f) <= ln f for f >= e
    } else {
        1.0
    };

    // Initial guess: ln(1+f) tracks W0 within ~20% for all f >= 0; switch to
    // the asymptotic expansion for large arguments.
    let mut w = if f > std::f64::consts::E {
        let l1 = f.ln();
        let l2 = l1.ln();
        l1 - l2 + l2 / l1
    } else {
        f.ln_1p() * (1.0 - 0.5 * f.ln_1p() / (1.0 + f))
    };
    w = w.clamp(lo, hi);

    let tol = 1e-13 * f.max(f64::MIN_POSITIVE);
    for _ in 0..100 {
        let ew = w.exp();
        let r = w * ew - f;
        if r.abs() <= tol {
            return Ok(w);
        }
        if r > 0.0 {
            hi = hi.min(w);
        } else {
            lo = lo.max(w);
        }
        // Halley step on g(w) = w e^w - f.
        let d1 = ew * (1.0 + w);
        let d2 = ew * (2.0 + w);
        let denom = d1 - 0.5 * r * d2 / d1;
        let mut w_next = w - r / denom;
        if !w_next.is_finite() || w_next <= lo || w_next >= hi {
            w_next = 0.5 * (lo + hi);
        }
        if w_next == w {
            return Ok(w);
        }
        w = w_next;
    }

    // The bracket shrinks monotonically, so landing here means we stalled at
    // rounding level; accept if the residual is within a relaxed bound.
    let r = w * w.exp() - f;
    if r.abs() <= 1e-10 * f.max(f64::MIN_POSITIVE) {
        Ok(w)
    } else {
        Err(Error::numerical(format!(
            "lambert_w0 failed to converge for f = {f} (residual {r:e})"
        )))
    }
}
