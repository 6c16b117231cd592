//! Rate and coefficient fits over ε-sweeps.

use alloc::vec::Vec;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitModel {
    /// `v ≈ C ε^p`, fitted in log–log coordinates.
    PowerLaw,
    /// `v ≈ c/|log ε| + b`, fitted in `t = 1/|log ε|`.
    LogLaw,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub model: FitModel,
    /// `p` for a power law, `b` (the value extrapolated to `t = 0`) for a
    /// log law.
    pub exponent: f64,
    /// `C` resp. `c`.
    pub coefficient: f64,
    /// Row indices used.
    pub window: Vec<usize>,
    /// Largest relative deviation of the fit from the data in the window.
    pub goodness: f64,
}

impl FitResult {
    pub fn eval(&self, eps: f64) -> f64 {
        match self.model {
            FitModel::PowerLaw => self.coefficient * eps.powf(self.exponent),
            FitModel::LogLaw => self.coefficient / eps.ln().abs() + self.exponent,
        }
    }
}

/// Least-squares line `y ≈ a + b x`, as `(a, b)`.
pub fn line_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let b = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    (my - b * mx, b)
}

/// Default window: every row with a finite value except the coarsest ε.
pub fn default_window(eps: &[f64], values: &[f64]) -> Vec<usize> {
    let coarsest = (0..eps.len()).max_by(|&i, &j| eps[i].total_cmp(&eps[j]));
    (0..eps.len()).filter(|&i| Some(i) != coarsest && usable(eps[i], values[i])).collect()
}

fn usable(eps: f64, v: f64) -> bool {
    eps > 0.0 && eps < 1.0 && v.is_finite()
}

/// Fits `model` to `(eps[i], values[i])` over `window` (all usable rows but
/// the coarsest when `None`).
pub fn fit_rate(eps: &[f64], values: &[f64], model: FitModel, window: Option<&[usize]>) -> Result<FitResult> {
    if eps.len() != values.len() {
        return Err(Error::InvalidInput("column lengths differ".into()));
    }
    let mut rows: Vec<usize> = match window {
        Some(w) => w.iter().copied().filter(|&i| i < eps.len() && usable(eps[i], values[i])).collect(),
        None => default_window(eps, values),
    };
    if model == FitModel::PowerLaw {
        rows.retain(|&i| values[i] != 0.0);
        let sign = rows.first().map(|&i| values[i].signum());
        if rows.iter().any(|&i| Some(values[i].signum()) != sign) {
            return Err(Error::InvalidInput("power-law column changes sign".into()));
        }
    }
    if rows.len() < 3 {
        return Err(Error::InsufficientData { have: rows.len() });
    }
    let result = match model {
        FitModel::PowerLaw => {
            let xs: Vec<f64> = rows.iter().map(|&i| eps[i].ln()).collect();
            let ys: Vec<f64> = rows.iter().map(|&i| values[i].abs().ln()).collect();
            let (a, p) = line_fit(&xs, &ys);
            FitResult {
                model,
                exponent: p,
                coefficient: values[rows[0]].signum() * a.exp(),
                window: rows,
                goodness: 0.0,
            }
        }
        FitModel::LogLaw => {
            let xs: Vec<f64> = rows.iter().map(|&i| 1.0 / eps[i].ln().abs()).collect();
            let ys: Vec<f64> = rows.iter().map(|&i| values[i]).collect();
            let (b, c) = line_fit(&xs, &ys);
            FitResult { model, exponent: b, coefficient: c, window: rows, goodness: 0.0 }
        }
    };
    let goodness = result
        .window
        .iter()
        .map(|&i| (result.eval(eps[i]) - values[i]).abs() / values[i].abs().max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max);
    Ok(FitResult { goodness, ..result })
}

/// Value at `1/|log ε| = 0` of the least-squares line through the window:
/// Richardson extrapolation for quantities converging like `1/|log ε|`.
pub fn richardson_log(eps: &[f64], values: &[f64], window: Option<&[usize]>) -> Result<f64> {
    Ok(fit_rate(eps, values, FitModel::LogLaw, window)?.exponent)
}

/// Value at `ε = 0` of the least-squares line in `ε` through the window.
pub fn richardson_linear(eps: &[f64], values: &[f64], window: Option<&[usize]>) -> Result<f64> {
    let rows: Vec<usize> = match window {
        Some(w) => w.iter().copied().filter(|&i| i < eps.len() && usable(eps[i], values[i])).collect(),
        None => default_window(eps, values),
    };
    if rows.len() < 3 {
        return Err(Error::InsufficientData { have: rows.len() });
    }
    let xs: Vec<f64> = rows.iter().map(|&i| eps[i]).collect();
    let ys: Vec<f64> = rows.iter().map(|&i| values[i]).collect();
    Ok(line_fit(&xs, &ys).0)
}
