/// Evaluation grid on the open half-line: logarithmic below `x = 1` (to
/// resolve the `x^p` behaviour at the origin) and uniform above it.
pub fn log_linear(x_min: f64, x_max: f64, n: usize) -> Vec<f64> {
    assert!(x_min > 0.0 && x_max > x_min && n >= 4);
    let knee = 1.0f64.min(0.5 * x_max).max(x_min);
    let n_log = if knee > x_min { n / 4 } else { 0 };
    let n_lin = n - n_log;
    let mut g = Vec::with_capacity(n);
    let (la, lb) = (x_min.ln(), knee.ln());
    if n_log > 0 {
        g.push(x_min);
    }
    for i in 1..n_log {
        g.push((la + (lb - la) * i as f64 / n_log as f64).exp());
    }
    for i in 0..n_lin {
        g.push(knee + (x_max - knee) * i as f64 / (n_lin - 1) as f64);
    }
    g
}

/// `n` uniformly spaced points from `a` to `b` inclusive.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![a],
        _ => (0..n)
            .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}
