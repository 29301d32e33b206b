use rayon::prelude::*;
use serde::Serialize;

use super::{check_mesh_list, default_half_width, MAX_DOUBLINGS};
use crate::eigensolve::eigs_auto;
use crate::error::{invalid, Result};
use crate::lattice::{assemble_hn, assemble_hn_scaled, LatticeBox};
use crate::numerics::linear_fit;
use crate::potentials::{Potential, ScalingParams};

/// Largest `N` used for `γ < -1`.
pub const PRESCALED_N_CAP: u64 = 64;

/// Growth exponent `h(γ)`: `1 - γ` for `γ ≥ -1`, `2|γ|` below.
pub fn predicted_exponent(gamma: f64) -> f64 {
    if gamma >= -1.0 {
        1.0 - gamma
    } else {
        2.0 * gamma.abs()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegimeRow {
    pub gamma: f64,
    pub n: usize,
    /// Slope of `ln E_n` against `ln N` over the trailing points.
    pub slope_fit: f64,
    pub slope_pred: f64,
    /// `E_n(H_N)/N^{h(γ)}` at the largest `N`.
    pub limit_const_fit: f64,
    pub limit_const_pred: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegimeSample {
    pub gamma: f64,
    #[serde(rename = "N")]
    pub inverse_mesh: u64,
    pub n: usize,
    pub log_energy: f64,
    /// `E_n(H_N)/N^{h(γ)}`, computed without forming `E_n`.
    pub scaled: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RegimeSweep {
    pub omega: f64,
    pub gammas: Vec<f64>,
    pub inverse_meshes: Vec<u64>,
    pub n_max: usize,
    /// Grouped by `γ`, then level.
    pub rows: Vec<RegimeRow>,
    pub samples: Vec<RegimeSample>,
    /// For `γ = -1`: `max |E_n(H_N)/N² - E_n(H_1)| / E_n(H_1)`.
    pub identity_deviation: Vec<Option<f64>>,
}

impl RegimeSweep {
    pub fn row(&self, gamma_index: usize, n: usize) -> &RegimeRow {
        &self.rows[gamma_index * (self.n_max + 1) + n]
    }

    pub fn samples_for(&self, gamma: f64, n: usize) -> impl Iterator<Item = &RegimeSample> {
        self.samples
            .iter()
            .filter(move |s| s.gamma == gamma && s.n == n)
    }
}

/// `ln E_n` and `E_n/N^{h(γ)}` for `n = 0..=n_max`. Below `γ = -1` the
/// operator is assembled already divided by `N^{2|γ|}`.
fn solve_point(potential: &Potential, omega: f64, gamma: f64, n: u64, n_max: usize) -> Result<Vec<(f64, f64)>> {
    let params = ScalingParams::new(n, gamma, omega)?;
    let start = default_half_width(potential, n, gamma, n_max)?;
    let ln_n = (n as f64).ln();
    let h = predicted_exponent(gamma);
    if gamma < -1.0 {
        let log_scale = h * ln_n;
        let s = eigs_auto(
            |m| assemble_hn_scaled(potential, &params, &LatticeBox::symmetric(1, m)?, log_scale),
            start,
            n_max + 1,
            false,
            MAX_DOUBLINGS,
        )?;
        Ok(s.eigenvalues.iter().map(|e| (e.ln() + log_scale, *e)).collect())
    } else {
        let s = eigs_auto(
            |m| assemble_hn(potential, &params, &LatticeBox::symmetric(1, m)?),
            start,
            n_max + 1,
            false,
            MAX_DOUBLINGS,
        )?;
        Ok(s.eigenvalues
            .iter()
            .map(|e| (e.ln(), e / (n as f64).powf(h)))
            .collect())
    }
}

fn limit_prediction(omega: f64, gamma: f64, n: usize, h1: Option<&[(f64, f64)]>) -> f64 {
    if gamma > -1.0 {
        0.5 * omega * (2 * n + 1) as f64
    } else if gamma == -1.0 {
        h1.map(|v| v[n].1).unwrap_or(f64::NAN)
    } else {
        let m = n.div_ceil(2) as f64;
        0.5 * omega * omega * m * m
    }
}

/// Growth of `E_n(H_N)` in `N` for the one-dimensional harmonic potential
/// across a grid of `γ`.
///
/// For `γ < -1` only the `N ≤` [`PRESCALED_N_CAP`] part of the list is used.
/// Every `γ` needs at least three values of `N`; for `γ > -1` they must
/// also span a decade. At `γ = -1` the identity `E_n(H_N) = N² E_n(H_1)` is
/// checked directly.
pub fn regime_sweep(omega: f64, gammas: &[f64], meshes: &[u64], n_max: usize) -> Result<RegimeSweep> {
    if !(omega > 0.0 && omega.is_finite()) {
        return invalid(format!("omega must be positive, got {omega}"));
    }
    if gammas.is_empty() || gammas.iter().any(|g| !g.is_finite()) {
        return invalid("gamma grid must be nonempty and finite");
    }
    check_mesh_list(meshes)?;
    let potential = Potential::harmonic(&[omega])?;
    let ladders: Vec<Vec<u64>> = gammas
        .iter()
        .map(|&g| {
            let ladder: Vec<u64> = if g < -1.0 {
                meshes.iter().copied().filter(|&n| n <= PRESCALED_N_CAP).collect()
            } else {
                meshes.to_vec()
            };
            if ladder.len() < 3 {
                invalid(format!("gamma = {g}: fewer than three usable N values"))
            } else if g > -1.0 && (ladder[ladder.len() - 1] as f64) < 10.0 * ladder[0] as f64 {
                invalid(format!("gamma = {g}: N list must span at least a decade"))
            } else {
                Ok(ladder)
            }
        })
        .collect::<Result<_>>()?;
    let mut tasks: Vec<(usize, u64)> = Vec::new();
    for (gi, ladder) in ladders.iter().enumerate() {
        tasks.extend(ladder.iter().map(|&n| (gi, n)));
        if gammas[gi] == -1.0 {
            tasks.push((gi, 1));
        }
    }
    let results = tasks
        .par_iter()
        .map(|&(gi, n)| solve_point(&potential, omega, gammas[gi], n, n_max))
        .collect::<Result<Vec<_>>>()?;

    let mut rows = Vec::new();
    let mut samples = Vec::new();
    let mut identity_deviation = Vec::with_capacity(gammas.len());
    let mut cursor = 0;
    for (gi, ladder) in ladders.iter().enumerate() {
        let gamma = gammas[gi];
        let points = &results[cursor..cursor + ladder.len()];
        cursor += ladder.len();
        let h1 = if gamma == -1.0 {
            cursor += 1;
            Some(results[cursor - 1].as_slice())
        } else {
            None
        };
        identity_deviation.push(h1.map(|base| {
            points
                .iter()
                .flat_map(|p| p.iter().zip(base).map(|(a, b)| (a.1 - b.1).abs() / b.1.abs()))
                .fold(0.0, f64::max)
        }));
        let tail = 3.max(ladder.len() / 2).min(ladder.len());
        let logs_n: Vec<f64> = ladder[ladder.len() - tail..].iter().map(|&n| (n as f64).ln()).collect();
        for n in 0..=n_max {
            for (p, &mesh) in points.iter().zip(ladder) {
                samples.push(RegimeSample {
                    gamma,
                    inverse_mesh: mesh,
                    n,
                    log_energy: p[n].0,
                    scaled: p[n].1,
                });
            }
            let logs_e: Vec<f64> = points[points.len() - tail..].iter().map(|p| p[n].0).collect();
            let (slope, _) = linear_fit(&logs_n, &logs_e);
            rows.push(RegimeRow {
                gamma,
                n,
                slope_fit: slope,
                slope_pred: predicted_exponent(gamma),
                limit_const_fit: points.last().unwrap()[n].1,
                limit_const_pred: limit_prediction(omega, gamma, n, h1),
            });
        }
    }
    Ok(RegimeSweep {
        omega,
        gammas: gammas.to_vec(),
        inverse_meshes: meshes.to_vec(),
        n_max,
        rows,
        samples,
        identity_deviation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponent_is_continuous_at_the_kink() {
        assert_eq!(predicted_exponent(-1.0), 2.0);
        assert_eq!(2.0 * (-1.0f64).abs(), 2.0);
        assert!((predicted_exponent(-1.0 - 1e-12) - 2.0).abs() < 1e-11);
        assert_eq!(predicted_exponent(0.5), 0.5);
        assert_eq!(predicted_exponent(-3.0), 6.0);
    }

    #[test]
    fn gamma_minus_one_identity() {
        let s = regime_sweep(1.0, &[-1.0], &[2, 4, 8, 16, 32], 3).unwrap();
        assert!(s.identity_deviation[0].unwrap() <= 1e-12);
        assert!((s.row(0, 0).slope_fit - 2.0).abs() < 1e-10);
    }

    #[test]
    fn short_lists_rejected() {
        assert!(regime_sweep(1.0, &[0.0], &[2, 4], 0).is_err());
        assert!(regime_sweep(1.0, &[0.0], &[2, 4, 8], 0).is_err());
        assert!(regime_sweep(1.0, &[-1.0], &[2, 4, 8], 0).is_ok());
        assert!(regime_sweep(1.0, &[-2.0], &[8, 16, 128, 256], 0).is_err());
    }
}
