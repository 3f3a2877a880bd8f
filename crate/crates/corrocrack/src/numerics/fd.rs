//! Central-difference derivative checker.

/// Compares a claimed derivative against a central difference of `f` at `x`
/// with step `h`; returns the relative error.
pub fn fd_check(f: impl Fn(f64) -> f64, df_claimed: f64, x: f64, h: f64) -> f64 {
    assert!(h > 0.0, "fd_check needs h > 0");
    let fd = (f(x + h) - f(x - h)) / (2.0 * h);
    let scale = df_claimed.abs().max(fd.abs()).max(f64::MIN_POSITIVE);
    (fd - df_claimed).abs() / scale
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_has_second_order_error() {
        // f(x) = x^2 at x = 3: the central difference is exact up to rounding.
        let e = fd_check(|x| x * x, 6.0, 3.0, 1e-4);
        assert!(e < 1e-9, "error {e}");
        // x^3 has a genuine O(h^2) truncation term.
        let coarse = fd_check(|x| x * x * x, 27.0, 3.0, 1e-2);
        let fine = fd_check(|x| x * x * x, 27.0, 3.0, 1e-3);
        assert!(fine < coarse / 50.0, "no O(h^2) decay: {coarse} -> {fine}");
    }

    #[test]
    fn constant_function_zero_derivative() {
        assert!(fd_check(|_| 4.2, 0.0, 1.0, 1e-5) < 1e-12);
    }
}
