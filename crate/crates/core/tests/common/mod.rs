#![allow(dead_code)]

/// KS critical value at significance 0.01 (asymptotic), one-sample form.
pub fn ks_critical(n: usize) -> f64 {
    1.628 / (n as f64).sqrt()
}

/// Two-sample KS critical value at significance 0.01.
pub fn ks_critical_two(n: usize, m: usize) -> f64 {
    1.628 * ((n + m) as f64 / (n as f64 * m as f64)).sqrt()
}

/// One-sample KS statistic of `samples` against the continuous `cdf`.
pub fn ks_statistic(samples: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
    samples.sort_by(|a, b| a.total_cmp(b));
    let n = samples.len() as f64;
    samples
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

/// Two-sample KS statistic.
pub fn ks_two_sample(a: &mut [f64], b: &mut [f64]) -> f64 {
    a.sort_by(|x, y| x.total_cmp(y));
    b.sort_by(|x, y| x.total_cmp(y));
    let (n, m) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    d
}

/// Cumulative trapezoid on a sorted grid; returns the running integral at
/// every node.
pub fn cumulative_trapezoid(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; xs.len()];
    for i in 1..xs.len() {
        out[i] = out[i - 1] + 0.5 * (xs[i] - xs[i - 1]) * (ys[i] + ys[i - 1]);
    }
    out
}

/// Piecewise-linear interpolation, clamped at both ends.
pub fn interpolate(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    if x <= xs[0] {
        return ys[0];
    }
    let last = xs.len() - 1;
    if x >= xs[last] {
        return ys[last];
    }
    let i = xs.partition_point(|&v| v <= x);
    let t = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
    ys[i - 1] + t * (ys[i] - ys[i - 1])
}

pub fn mean_and_variance(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var)
}

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// K_0 from its ascending series; accurate to ~1e-12 relative for z < 6.
pub fn bessel_k0(z: f64) -> f64 {
    let q = z * z / 4.0;
    let (mut term, mut harmonic) = (1.0, 0.0);
    let (mut i0, mut tail) = (1.0, 0.0);
    for k in 1..60 {
        term *= q / (k * k) as f64;
        harmonic += 1.0 / k as f64;
        i0 += term;
        tail += term * harmonic;
    }
    -((z / 2.0).ln() + EULER_GAMMA) * i0 + tail
}
