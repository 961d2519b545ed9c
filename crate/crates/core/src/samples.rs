use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Normalization {
    UnitL2,
    Raw,
}

/// A radial function sampled on a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialSamples {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub normalization: Normalization,
    /// Interior strict sign changes of `values`.
    pub node_count: usize,
}

impl RadialSamples {
    pub fn raw(grid: Vec<f64>, values: Vec<f64>) -> Self {
        assert_eq!(grid.len(), values.len(), "grid/value length mismatch");
        let node_count = count_sign_changes(&values);
        RadialSamples {
            grid,
            values,
            normalization: Normalization::Raw,
            node_count,
        }
    }

    pub fn norm_squared(&self) -> f64 {
        trapezoid_squared(&self.grid, &self.values)
    }

    /// Rescale to unit trapezoidal L² norm. A zero function is left as is.
    pub fn normalized(mut self) -> Self {
        let norm = self.norm_squared().sqrt();
        if norm > 0.0 && norm.is_finite() {
            self.values.iter_mut().for_each(|v| *v /= norm);
            self.normalization = Normalization::UnitL2;
        }
        self
    }

    /// Flip the overall sign so the first local maximum of |g| is positive.
    pub fn align_sign(mut self) -> Self {
        if let Some(i) = first_peak(&self.values) {
            if self.values[i] < 0.0 {
                self.values.iter_mut().for_each(|v| *v = -*v);
            }
        }
        self
    }

    pub fn max_abs_deviation(&self, other: &RadialSamples) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Number of strict sign changes, skipping exact zeros.
pub fn count_sign_changes(values: &[f64]) -> usize {
    let mut last = 0.0_f64;
    let mut count = 0;
    for &v in values {
        if v == 0.0 || !v.is_finite() {
            continue;
        }
        if last != 0.0 && v.signum() != last.signum() {
            count += 1;
        }
        last = v;
    }
    count
}

/// Trapezoid rule for ∫ values² over a (possibly non-uniform) grid.
pub fn trapezoid_squared(grid: &[f64], values: &[f64]) -> f64 {
    grid.windows(2)
        .zip(values.windows(2))
        .map(|(r, g)| 0.5 * (r[1] - r[0]) * (g[0] * g[0] + g[1] * g[1]))
        .sum()
}

fn first_peak(values: &[f64]) -> Option<usize> {
    let n = values.len();
    if n == 0 {
        return None;
    }
    for i in 1..n.saturating_sub(1) {
        let (a, b, c) = (values[i - 1].abs(), values[i].abs(), values[i + 1].abs());
        if b >= a && b > c {
            return Some(i);
        }
    }
    values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .map(|(i, _)| i)
}
