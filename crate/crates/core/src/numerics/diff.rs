/// Central difference `(f(x + h) - f(x - h)) / 2h` of a vector-valued map.
///
/// Truncation error is `h^2 |f'''| / 6` per component.
pub fn central_diff<F, const N: usize>(f: F, x: f64, h: f64) -> [f64; N]
where
    F: Fn(f64) -> [f64; N],
{
    debug_assert!(h > 0.0);
    let (fp, fm) = (f(x + h), f(x - h));
    let mut out = [0.0; N];
    for i in 0..N {
        out[i] = (fp[i] - fm[i]) / (2.0 * h);
    }
    out
}

pub fn central_diff_scalar<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    central_diff(|t| [f(t)], x, h)[0]
}

/// Composite Simpson rule on `[a, b]` with `intervals` (rounded up to even)
/// subintervals.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, intervals: usize) -> f64 {
    let n = (intervals.max(2) + 1) & !1;
    let h = (b - a) / n as f64;
    let mut sum = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + i as f64 * h);
    }
    sum * h / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_is_exact() {
        let d = central_diff_scalar(|x| x * x, 3.0, 1e-5);
        assert!((d - 6.0).abs() <= 1e-9, "{d}");
    }

    #[test]
    fn log_weight_derivative() {
        // d/dx ln(1/(1+x^2)^2) = -4x/(1+x^2)
        let f = |x: f64| (1.0 / (1.0 + x * x).powi(2)).ln();
        let d = central_diff_scalar(f, 1.0, 1e-5);
        assert!((d + 2.0).abs() <= 1e-6, "{d}");
    }

    #[test]
    fn constant_has_zero_derivative() {
        assert_eq!(central_diff(|_| [7.0, -2.0], 0.3, 1e-5), [0.0, 0.0]);
    }

    #[test]
    fn error_is_second_order() {
        // Bound |err| <= 1.1 * |f'''(x)| / 6 * h^2 for f = sin, f''' = -cos.
        let x = 0.7f64;
        for h in [1e-1, 1e-2, 1e-3] {
            let err = (central_diff_scalar(f64::sin, x, h) - x.cos()).abs();
            let bound = 1.1 * x.cos().abs() / 6.0 * h * h;
            assert!(err <= bound, "h={h} err={err} bound={bound}");
        }
        // and f = exp at 0.5
        for h in [1e-1, 1e-2, 1e-3] {
            let err = (central_diff_scalar(f64::exp, 0.5, h) - 0.5f64.exp()).abs();
            let bound = 1.1 * 0.5f64.exp() / 6.0 * h * h;
            assert!(err <= bound, "h={h} err={err} bound={bound}");
        }
    }

    #[test]
    fn simpson_integrates_cubics_exactly() {
        let v = simpson(|x| x * x * x - 2.0 * x, 0.0, 2.0, 4);
        assert!((v - 0.0).abs() < 1e-14);
        let v = simpson(f64::exp, 0.0, 1.0, 200);
        assert!((v - (1f64.exp() - 1.0)).abs() < 1e-10);
    }
}
