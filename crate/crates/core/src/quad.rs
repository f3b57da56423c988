//! Composite Simpson quadrature.

/// Composite Simpson rule for `f` on `[a, b]` with `intervals` panels
/// (rounded up to an even count).
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, intervals: usize) -> f64 {
    let m = (intervals.max(2) + 1) & !1;
    let h = (b - a) / m as f64;
    let mut odd = 0.0;
    let mut even = 0.0;
    for i in 1..m {
        let v = f(a + i as f64 * h);
        if i % 2 == 1 {
            odd += v;
        } else {
            even += v;
        }
    }
    h / 3.0 * (f(a) + f(b) + 4.0 * odd + 2.0 * even)
}

/// Simpson rule over equally spaced samples; an even number of intervals
/// is required, otherwise the last interval is closed with the trapezoid rule.
pub fn simpson_samples(values: &[f64], h: f64) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let intervals = n - 1;
    let even_part = intervals - intervals % 2;
    let mut acc = 0.0;
    for i in (0..even_part).step_by(2) {
        acc += values[i] + 4.0 * values[i + 1] + values[i + 2];
    }
    let mut total = acc * h / 3.0;
    if intervals % 2 == 1 {
        total += 0.5 * h * (values[n - 2] + values[n - 1]);
    }
    total
}
