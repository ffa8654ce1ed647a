use crate::error::{Error, Result};

/// One classical RK4 step of size `h` for the autonomous system `y' = f(y)`.
pub fn rk4_step<F, const N: usize>(f: &F, y: &[f64; N], h: f64) -> [f64; N]
where
    F: Fn(&[f64; N]) -> [f64; N],
{
    let axpy = |base: &[f64; N], k: &[f64; N], s: f64| {
        let mut out = *base;
        for i in 0..N {
            out[i] += s * k[i];
        }
        out
    };
    let k1 = f(y);
    let k2 = f(&axpy(y, &k1, h / 2.0));
    let k3 = f(&axpy(y, &k2, h / 2.0));
    let k4 = f(&axpy(y, &k3, h));
    let mut out = *y;
    for i in 0..N {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

/// Fixed-step RK4 from `t0` to `t1` in `steps` steps. Returns the whole
/// trajectory including the initial state.
pub fn rk4<F, const N: usize>(
    f: F,
    y0: [f64; N],
    t0: f64,
    t1: f64,
    steps: usize,
) -> Result<Vec<(f64, [f64; N])>>
where
    F: Fn(&[f64; N]) -> [f64; N],
{
    assert!(steps >= 1, "rk4 needs at least one step");
    assert!(t1 > t0, "rk4 needs t1 > t0");
    let h = (t1 - t0) / steps as f64;
    let mut out = Vec::with_capacity(steps + 1);
    let mut y = y0;
    out.push((t0, y));
    for i in 1..=steps {
        y = rk4_step(&f, &y, h);
        let t = t0 + i as f64 * h;
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteState { t });
        }
        out.push((t, y));
    }
    Ok(out)
}
