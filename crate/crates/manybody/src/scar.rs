//! Scar diagnostics on sampled time series.

fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

/// Residuals of a least-squares line through (t, y).
pub fn detrend(t: &[f64], y: &[f64]) -> Vec<f64> {
    let (mt, my) = (mean(t), mean(y));
    let den: f64 = t.iter().map(|a| (a - mt).powi(2)).sum();
    let slope = if den > 0.0 { t.iter().zip(y).map(|(a, b)| (a - mt) * (b - my)).sum::<f64>() / den } else { 0.0 };
    t.iter().zip(y).map(|(a, b)| b - my - slope * (a - mt)).collect()
}

/// Pearson correlation; NaN when either series is constant.
pub fn correlation(a: &[f64], b: &[f64]) -> f64 {
    let (ma, mb) = (mean(a), mean(b));
    let cov: f64 = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let va: f64 = a.iter().map(|x| (x - ma).powi(2)).sum();
    let vb: f64 = b.iter().map(|x| (x - mb).powi(2)).sum();
    cov / (va * vb).sqrt()
}

/// Correlation of two series after removing a linear trend from each, so the
/// slow overall entropy growth does not mask out-of-phase oscillations.
pub fn detrended_correlation(t: &[f64], a: &[f64], b: &[f64]) -> f64 {
    correlation(&detrend(t, a), &detrend(t, b))
}

/// Time of the first revival of a series that starts at its maximum: the
/// largest value after the first local minimum (revivals decay, so this is the
/// first one). None if the series never turns up.
pub fn revival_time(t: &[f64], y: &[f64]) -> Option<f64> {
    let first_min = (1..y.len().saturating_sub(1)).find(|&i| y[i] <= y[i - 1] && y[i] < y[i + 1])?;
    let best = (first_min..y.len()).max_by(|&a, &b| y[a].total_cmp(&y[b]))?;
    (best > first_min).then(|| t[best])
}
