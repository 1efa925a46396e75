use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::YearSeries;

/// `count ≈ amplitude · exp(exponent · (year − origin))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    /// Growth rate per year.
    pub exponent: f64,
    /// Fitted value at `origin`.
    pub amplitude: f64,
    pub r_squared: f64,
    pub origin: i32,
    /// Years with a positive count, i.e. those entering the fit.
    pub years_used: Vec<i32>,
}

impl FitResult {
    pub fn predict(&self, year: i32) -> f64 {
        self.amplitude * (self.exponent * (year - self.origin) as f64).exp()
    }

    /// Years needed for the fitted curve to double.
    pub fn doubling_time(&self) -> Option<f64> {
        (self.exponent > 0.0).then(|| std::f64::consts::LN_2 / self.exponent)
    }
}

/// Least-squares line through `(year − first_year, ln count)` over the
/// years with positive counts.
pub fn fit_exponential(series: &YearSeries) -> Result<FitResult> {
    let points: Vec<(i32, f64)> = series.iter().map(|(y, c)| (y, c as f64)).collect();
    fit_exponential_values(&points, series.first_year())
}

/// [`fit_exponential`] over real-valued points such as normalized counts.
/// Non-positive values are skipped.
pub fn fit_exponential_values(values: &[(i32, f64)], origin: i32) -> Result<FitResult> {
    let points: Vec<(i32, f64)> = values
        .iter()
        .filter(|&&(_, v)| v > 0.0)
        .map(|&(y, v)| (y, v.ln()))
        .collect();
    if points.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "exponential fit needs at least 3 years with positive counts, got {}",
            points.len()
        )));
    }
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|&(y, _)| (y - origin) as f64).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, l)| l).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - (intercept + slope * x)).powi(2))
        .sum();
    let r_squared = if syy == 0.0 { 1.0 } else { (1.0 - ss_res / syy).clamp(0.0, 1.0) };
    Ok(FitResult {
        exponent: slope,
        amplitude: intercept.exp(),
        r_squared,
        origin,
        years_used: points.iter().map(|&(y, _)| y).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_exponential() {
        let pts: Vec<(i32, f64)> = (0..10).map(|t| (2000 + t, 100.0 * (0.2 * t as f64).exp())).collect();
        let f = fit_exponential_values(&pts, 2000).unwrap();
        assert!((f.exponent - 0.2).abs() < 1e-9);
        assert!((f.amplitude - 100.0).abs() < 1e-7);
        assert!((f.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_years_are_skipped() {
        let s = YearSeries::from_counts(1991, vec![0, 2, 0, 4, 8, 0]);
        let f = fit_exponential(&s).unwrap();
        assert_eq!(f.years_used, vec![1992, 1994, 1995]);
        assert_eq!(f.origin, 1991);
        assert!(fit_exponential(&YearSeries::from_counts(1991, vec![0, 1, 0, 1])).is_err());
    }

    #[test]
    fn scaling_changes_amplitude_only() {
        let a = fit_exponential(&YearSeries::from_counts(2000, vec![3, 5, 4, 9, 14])).unwrap();
        let b = fit_exponential(&YearSeries::from_counts(2000, vec![30, 50, 40, 90, 140])).unwrap();
        assert!((a.exponent - b.exponent).abs() < 1e-12);
        assert!((b.amplitude / a.amplitude - 10.0).abs() < 1e-9);
    }
}
