//! Independent oracles shared by the integration tests. Nothing here goes
//! through the FFT: convolutions are done by direct quadrature.
#![allow(dead_code)]

/// Composite Simpson rule on `[a, b]` with `panels` (even) subintervals.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let n = panels + panels % 2;
    if n == 0 || a == b {
        return 0.0;
    }
    let h = (b - a) / n as f64;
    let mut sum = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + i as f64 * h);
    }
    sum * h / 3.0
}

/// `int_{-L}^{L} sum_{|n| <= 3} kernel(x - y + 2 L n) f(y) dy`, split at `y = x`
/// where the kernel has its kink.
pub fn periodized_convolution(
    kernel: impl Fn(f64) -> f64,
    f: impl Fn(f64) -> f64,
    x: f64,
    half_length: f64,
    panels: usize,
) -> f64 {
    // one-sided limits at the kink so discontinuous kernels are sampled correctly
    let images = |y: f64, side: f64| -> f64 {
        let z0 = x - y;
        let z0 = if z0 == 0.0 { side * f64::MIN_POSITIVE } else { z0 };
        (-3..=3).map(|n| kernel(z0 + 2.0 * half_length * n as f64)).sum::<f64>() * f(y)
    };
    let left_frac = (x + half_length) / (2.0 * half_length);
    let left = ((panels as f64 * left_frac).ceil() as usize).max(2);
    let right = panels.saturating_sub(left).max(2);
    simpson(|y| images(y, 1.0), -half_length, x, left) + simpson(|y| images(y, -1.0), x, half_length, right)
}

pub fn green(alpha: f64) -> impl Fn(f64) -> f64 {
    move |z: f64| (-z.abs() / alpha).exp() / (2.0 * alpha)
}

/// Derivative of the Green kernel, `-sign(z) p(z) / alpha`.
pub fn green_derivative(alpha: f64) -> impl Fn(f64) -> f64 {
    move |z: f64| -z.signum() * (-z.abs() / alpha).exp() / (2.0 * alpha * alpha)
}

/// `2 p(z)` on `z > 0` (minus) or `z < 0` (plus).
pub fn one_sided(alpha: f64, minus: bool) -> impl Fn(f64) -> f64 {
    move |z: f64| {
        let inside = if minus { z > 0.0 } else { z < 0.0 };
        if inside {
            (-z.abs() / alpha).exp() / alpha
        } else {
            0.0
        }
    }
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Nonuniform composite Simpson for samples `(t_i, g_i)`: each pair of
/// intervals is integrated exactly for the interpolating parabola. A trailing
/// single interval falls back to the parabola through the last three points.
/// Returns the running integral at every sample.
pub fn cumulative_simpson(t: &[f64], g: &[f64]) -> Vec<f64> {
    let n = t.len();
    let mut out = vec![0.0; n];
    if n < 2 {
        return out;
    }
    // integral of the parabola through (t0,g0),(t1,g1),(t2,g2) from t0 to s
    let partial = |i: usize, s: f64| -> f64 {
        let (t0, t1, t2) = (t[i], t[i + 1], t[i + 2]);
        let (g0, g1, g2) = (g[i], g[i + 1], g[i + 2]);
        let lagrange = |ta: f64, tb: f64, tc: f64| {
            // int_{t0}^{s} (x - tb)(x - tc) / ((ta - tb)(ta - tc)) dx
            let anti = |x: f64| x * x * x / 3.0 - (tb + tc) * x * x / 2.0 + tb * tc * x;
            (anti(s) - anti(t0)) / ((ta - tb) * (ta - tc))
        };
        g0 * lagrange(t0, t1, t2) + g1 * lagrange(t1, t0, t2) + g2 * lagrange(t2, t0, t1)
    };
    if n == 2 {
        out[1] = 0.5 * (t[1] - t[0]) * (g[0] + g[1]);
        return out;
    }
    let mut i = 0;
    while i + 2 < n {
        out[i + 1] = out[i] + partial(i, t[i + 1]);
        out[i + 2] = out[i] + partial(i, t[i + 2]);
        i += 2;
    }
    if i + 1 < n {
        // last interval [t_{n-2}, t_{n-1}] from the parabola on the last three points
        let j = n - 3;
        out[n - 1] = out[n - 2] + (partial(j, t[n - 1]) - partial(j, t[n - 2]));
    }
    out
}
