use std::sync::Arc;

use super::{AxisEvaluator, Evaluator, Potential, Well};
use crate::error::{invalid, Result};

fn double_well_1d(x: f64) -> f64 {
    let t = x * x - 1.0;
    0.5 * t * t
}

/// Quartic polynomial smooth minimum; equals `min(a, b)` once `|a - b| ≥ k`.
fn smooth_min(a: f64, b: f64, k: f64) -> f64 {
    let h = ((k - (a - b).abs()) / k).max(0.0);
    a.min(b) - h * h * h * (4.0 - h) * k / 16.0
}

impl Potential {
    /// Anisotropic harmonic oscillator `½ Σ ω_i² x_i²` with its single well at 0.
    pub fn harmonic(omega: &[f64]) -> Result<Self> {
        if omega.is_empty() {
            return invalid("harmonic potential needs at least one frequency");
        }
        let well = Well::new(vec![0.0; omega.len()], omega.to_vec())?;
        let floor = 0.5 * well.frequencies()[0].powi(2);
        let axes: Vec<AxisEvaluator> = omega
            .iter()
            .map(|&w| Arc::new(move |x: f64| 0.5 * w * w * x * x) as AxisEvaluator)
            .collect();
        let mut p = Self::separable("harmonic", axes, vec![well], 1.0, floor)?;
        // Keep the direct formula as the evaluator; the axis sums are exact anyway.
        let w = omega.to_vec();
        p.eval = Arc::new(move |x: &[f64]| {
            0.5 * w.iter().zip(x).map(|(wi, xi)| wi * wi * xi * xi).sum::<f64>()
        });
        Ok(p)
    }

    /// `½ (x² - 1)²` on the line: wells at ±1 with frequency 2.
    pub fn double_well() -> Self {
        let wells = vec![
            Well::new(vec![-1.0], vec![2.0]).expect("valid well"),
            Well::new(vec![1.0], vec![2.0]).expect("valid well"),
        ];
        let eval: Evaluator = Arc::new(|x: &[f64]| double_well_1d(x[0]));
        let mut p = Self::custom("double_well", 1, eval, wells, 2.0, double_well_1d(2.0))
            .expect("valid potential");
        p.axes = Some(vec![Arc::new(double_well_1d)]);
        p
    }

    /// `Σ_j ½ (x_j² - 1)²`: `2^d` wells at the corners `(±1, …, ±1)`.
    pub fn separable_double_well(dim: usize) -> Result<Self> {
        if dim == 0 {
            return invalid("dimension must be positive");
        }
        let mut wells = Vec::with_capacity(1 << dim);
        for mask in 0..(1usize << dim) {
            let loc = (0..dim)
                .map(|j| if mask >> (dim - 1 - j) & 1 == 1 { 1.0 } else { -1.0 })
                .collect();
            wells.push(Well::new(loc, vec![2.0; dim])?);
        }
        let axes = (0..dim)
            .map(|_| Arc::new(double_well_1d) as AxisEvaluator)
            .collect();
        // |x| > 2√d forces some |x_j| > 2.
        let mut p = Self::separable(
            "double_well_sep",
            axes,
            wells,
            2.0 * (dim as f64).sqrt(),
            double_well_1d(2.0),
        )?;
        if dim == 1 {
            p.name = "double_well".into();
        }
        Ok(p)
    }

    /// Minimum of isotropic harmonic wells `½ ω_l² |x - a_l|²`, blended by a
    /// quartic smooth minimum away from the wells.
    ///
    /// The blending width is `k = min_{l≠m} min(ω_l, ω_m)² |a_l - a_m|² / 16`,
    /// which keeps every well exactly harmonic in a neighbourhood and the
    /// blend nonnegative.
    pub fn harmonic_splice(centers: &[Vec<f64>], omega: &[f64]) -> Result<Self> {
        if centers.len() < 2 || centers.len() != omega.len() {
            return invalid("splice needs at least two centers, one frequency each");
        }
        let dim = centers[0].len();
        if dim == 0 || centers.iter().any(|c| c.len() != dim) {
            return invalid("splice centers must share a positive dimension");
        }
        let mut k = f64::INFINITY;
        for l in 0..centers.len() {
            for m in (l + 1)..centers.len() {
                let d2: f64 = centers[l]
                    .iter()
                    .zip(&centers[m])
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum();
                if d2 == 0.0 {
                    return invalid("splice centers must be distinct");
                }
                k = k.min(omega[l].min(omega[m]).powi(2) * d2 / 16.0);
            }
        }
        let wells = centers
            .iter()
            .zip(omega)
            .map(|(c, &w)| Well::new(c.clone(), vec![w; dim]))
            .collect::<Result<Vec<_>>>()?;
        let cs = centers.to_vec();
        let ws = omega.to_vec();
        let eval: Evaluator = Arc::new(move |x: &[f64]| {
            let mut acc = f64::INFINITY;
            for (c, w) in cs.iter().zip(&ws) {
                let r2: f64 = c.iter().zip(x).map(|(a, b)| (a - b) * (a - b)).sum();
                let q = 0.5 * w * w * r2;
                acc = if acc.is_infinite() { q } else { smooth_min(acc, q, k) };
            }
            acc
        });
        let reach = centers
            .iter()
            .map(|c| c.iter().map(|v| v * v).sum::<f64>().sqrt())
            .fold(0.0, f64::max);
        let radius = reach + 1.0;
        let w_min = omega.iter().copied().fold(f64::INFINITY, f64::min);
        // Outside radius R₀ = max|a_l| + 1 every well is at distance ≥ 1.
        let floor = (0.5 * w_min * w_min - 3.0 * k / 16.0).max(0.0);
        Self::custom("harmonic_splice", dim, eval, wells, radius, floor)
    }

    /// `x⁴`: its minimum at 0 is degenerate.
    pub fn quartic() -> Self {
        let eval: Evaluator = Arc::new(|x: &[f64]| x[0].powi(4));
        Self::custom("quartic", 1, eval, Vec::new(), 1.0, 1.0).expect("valid potential")
    }

    /// `x² - shift`: negative near the origin for `shift > 0`.
    pub fn shifted_quadratic(shift: f64) -> Self {
        let eval: Evaluator = Arc::new(move |x: &[f64]| x[0] * x[0] - shift);
        Self::custom("shifted_quadratic", 1, eval, Vec::new(), 1.0, 1.0 - shift)
            .expect("valid potential")
    }
}
