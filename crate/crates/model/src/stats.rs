//! Small sample-statistics helpers.

use crate::scalar::Real;

/// Sample mean and standard error of the mean.
pub fn mean_stderr<T: Real>(xs: &[T]) -> (T, T) {
    let n = xs.len();
    if n == 0 {
        return (T::nan(), T::nan());
    }
    let nf = T::from_usize_lossy(n);
    let mean = xs.iter().copied().sum::<T>() / nf;
    if n == 1 {
        return (mean, T::zero());
    }
    let var = xs.iter().map(|&x| (x - mean) * (x - mean)).sum::<T>() / (nf - T::one());
    (mean, (var / nf).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit<T> {
    pub slope: T,
    pub intercept: T,
    pub slope_stderr: T,
}

/// Ordinary least squares `y = slope·x + intercept`.
pub fn linear_fit<T: Real>(x: &[T], y: &[T]) -> LinearFit<T> {
    assert_eq!(x.len(), y.len());
    let n = T::from_usize_lossy(x.len());
    let mx = x.iter().copied().sum::<T>() / n;
    let my = y.iter().copied().sum::<T>() / n;
    let sxx = x.iter().map(|&a| (a - mx) * (a - mx)).sum::<T>();
    let sxy = x.iter().zip(y).map(|(&a, &b)| (a - mx) * (b - my)).sum::<T>();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let slope_stderr = if x.len() > 2 {
        let rss = x.iter().zip(y).map(|(&a, &b)| (b - intercept - slope * a).powi(2)).sum::<T>();
        (rss / (n - T::lit(2.0)) / sxx).sqrt()
    } else {
        T::zero()
    };
    LinearFit { slope, intercept, slope_stderr }
}

/// Weighted least squares with per-point standard errors `sigma`.
pub fn weighted_linear_fit<T: Real>(x: &[T], y: &[T], sigma: &[T]) -> LinearFit<T> {
    let w: Vec<T> = sigma.iter().map(|&s| T::one() / (s * s)).collect();
    let sw = w.iter().copied().sum::<T>();
    let mx = x.iter().zip(&w).map(|(&a, &wi)| a * wi).sum::<T>() / sw;
    let my = y.iter().zip(&w).map(|(&b, &wi)| b * wi).sum::<T>() / sw;
    let sxx = x.iter().zip(&w).map(|(&a, &wi)| wi * (a - mx) * (a - mx)).sum::<T>();
    let sxy = x.iter().zip(y).zip(&w).map(|((&a, &b), &wi)| wi * (a - mx) * (b - my)).sum::<T>();
    let slope = sxy / sxx;
    LinearFit { slope, intercept: my - slope * mx, slope_stderr: (T::one() / sxx).sqrt() }
}

/// Pearson correlation coefficient.
pub fn correlation<T: Real>(x: &[T], y: &[T]) -> T {
    let n = T::from_usize_lossy(x.len());
    let mx = x.iter().copied().sum::<T>() / n;
    let my = y.iter().copied().sum::<T>() / n;
    let sxy = x.iter().zip(y).map(|(&a, &b)| (a - mx) * (b - my)).sum::<T>();
    let sxx = x.iter().map(|&a| (a - mx) * (a - mx)).sum::<T>();
    let syy = y.iter().map(|&b| (b - my) * (b - my)).sum::<T>();
    sxy / (sxx * syy).sqrt()
}
