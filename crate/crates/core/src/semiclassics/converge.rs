use rayon::prelude::*;
use serde::Serialize;

use super::{
    check_mesh_list, default_half_width, sigma_enumerate, softest_frequency, strictly_decreasing,
    successive_orders, MAX_DOUBLINGS,
};
use crate::eigensolve::{eigs, eigs_auto, eigs_separable, DENSE_LIMIT};
use crate::error::{invalid, Result};
use crate::lattice::{assemble_hn, LatticeBox, SymmetricLatticeOperator};
use crate::potentials::{Potential, ScalingParams};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub gamma: f64,
    #[serde(rename = "N")]
    pub inverse_mesh: u64,
    pub n: usize,
    #[serde(rename = "E_n")]
    pub energy: f64,
    #[serde(rename = "lambda_N")]
    pub lambda: f64,
    /// `E_n(H_N)/λ_N`.
    pub ratio: f64,
    /// `e_n(V)`.
    pub target: f64,
    pub abs_err: f64,
}

/// `E_n(H_N)/λ_N` against `e_n(V)` along a list of `N`.
#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceTable {
    pub potential: String,
    pub gamma: f64,
    pub inverse_meshes: Vec<u64>,
    pub n_max: usize,
    /// Grouped by `N`, then level.
    pub rows: Vec<ConvergenceRow>,
    /// Per level, successive orders of `|ratio - e_n|` in `N`.
    pub orders: Vec<Vec<f64>>,
    pub errors_decreasing: Vec<bool>,
    /// Final box half-width per `N`.
    pub half_widths: Vec<i64>,
}

impl ConvergenceTable {
    pub fn row(&self, mesh_index: usize, n: usize) -> &ConvergenceRow {
        &self.rows[mesh_index * (self.n_max + 1) + n]
    }

    pub fn level(&self, n: usize) -> impl Iterator<Item = &ConvergenceRow> {
        self.rows.iter().filter(move |r| r.n == n)
    }
}

fn one_dimensional(
    potential: &Potential,
    params: &ScalingParams,
    start: i64,
    k: usize,
) -> Result<(Vec<f64>, i64)> {
    let s = eigs_auto(
        |m| assemble_hn(potential, params, &LatticeBox::symmetric(1, m)?),
        start,
        k,
        false,
        MAX_DOUBLINGS,
    )?;
    Ok((s.eigenvalues, s.box_upper[0]))
}

/// Tensorized solve: each axis `(N²/2)Δ + λ_N² V_j(x/N)` on its own line.
fn separable(potential: &Potential, params: &ScalingParams, start: i64, k: usize) -> Result<(Vec<f64>, i64)> {
    let axes = potential.axis_evaluators().expect("separable potential");
    let n = params.inverse_mesh() as f64;
    let scale = params.potential_scale();
    let mut spectra = Vec::with_capacity(axes.len());
    let mut widest = 0;
    for axis in axes {
        let s = eigs_auto(
            |m| {
                let b = LatticeBox::symmetric(1, m)?;
                let values = (-m..=m).map(|x| scale * axis(x as f64 / n)).collect();
                SymmetricLatticeOperator::new(b, params.kinetic_scale(), values)
            },
            start,
            k,
            false,
            MAX_DOUBLINGS,
        )?;
        widest = widest.max(s.box_upper[0]);
        spectra.push(s.eigenvalues);
    }
    Ok((eigs_separable(&spectra, k)?, widest))
}

/// Largest cube the dense solver accepts.
fn dense(potential: &Potential, params: &ScalingParams, k: usize) -> Result<(Vec<f64>, i64)> {
    let d = potential.dim() as i32;
    let mut m = 1i64;
    while (2 * (m + 1) + 1).pow(d as u32) as usize <= DENSE_LIMIT {
        m += 1;
    }
    let op = assemble_hn(potential, params, &LatticeBox::symmetric(potential.dim(), m)?)?;
    Ok((eigs(&op, k, false)?.eigenvalues, m))
}

/// Lowest `n_max + 1` eigenvalues of `H_N` for each `N`, divided by `λ_N`
/// and compared with `Σ(V)`.
///
/// One-dimensional potentials use bisection on auto-sized boxes, separable
/// ones the tensorized fast path, and everything else the dense solver on
/// the largest admissible cube.
pub fn converge_study(potential: &Potential, gamma: f64, meshes: &[u64], n_max: usize) -> Result<ConvergenceTable> {
    if !(gamma > -1.0 && gamma < 1.0) {
        return invalid(format!("gamma must lie in (-1, 1), got {gamma}"));
    }
    check_mesh_list(meshes)?;
    let targets = sigma_enumerate(potential, n_max + 1)?.values();
    let omega = softest_frequency(potential);
    let k = n_max + 1;
    let solved = meshes
        .par_iter()
        .map(|&n| {
            let params = ScalingParams::new(n, gamma, omega)?;
            let start = default_half_width(potential, n, gamma, n_max)?;
            let (values, m) = if potential.dim() == 1 {
                one_dimensional(potential, &params, start, k)?
            } else if potential.is_separable() {
                separable(potential, &params, start, k)?
            } else {
                dense(potential, &params, k)?
            };
            let lambda = params.lambda();
            let rows: Vec<ConvergenceRow> = values
                .iter()
                .zip(&targets)
                .enumerate()
                .map(|(level, (&energy, &target))| {
                    let ratio = energy / lambda;
                    ConvergenceRow {
                        gamma,
                        inverse_mesh: n,
                        n: level,
                        energy,
                        lambda,
                        ratio,
                        target,
                        abs_err: (ratio - target).abs(),
                    }
                })
                .collect();
            Ok((rows, m))
        })
        .collect::<Result<Vec<_>>>()?;
    let half_widths = solved.iter().map(|(_, m)| *m).collect();
    let rows: Vec<ConvergenceRow> = solved.into_iter().flat_map(|(r, _)| r).collect();
    let steps: Vec<f64> = meshes.iter().map(|&n| n as f64).collect();
    let mut orders = Vec::with_capacity(k);
    let mut errors_decreasing = Vec::with_capacity(k);
    for level in 0..k {
        let errs: Vec<f64> = rows.iter().filter(|r| r.n == level).map(|r| r.abs_err).collect();
        orders.push(successive_orders(&steps, &errs));
        errors_decreasing.push(strictly_decreasing(&errs));
    }
    Ok(ConvergenceTable {
        potential: potential.name().to_string(),
        gamma,
        inverse_meshes: meshes.to_vec(),
        n_max,
        rows,
        orders,
        errors_decreasing,
        half_widths,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_ground_state_converges() {
        let v = Potential::harmonic(&[1.0]).unwrap();
        let t = converge_study(&v, 0.0, &[16, 64, 256], 1).unwrap();
        assert_eq!(t.rows.len(), 6);
        assert!(t.errors_decreasing[0]);
        let last = t.row(2, 0);
        assert!((last.ratio - 0.5).abs() < 0.01);
        for r in &t.rows {
            assert!((r.ratio * r.lambda - r.energy).abs() <= 4.0 * f64::EPSILON * r.energy);
        }
    }

    #[test]
    fn separable_path_matches_sum_of_axes() {
        let v = Potential::harmonic(&[1.0, 1.0]).unwrap();
        let t = converge_study(&v, 0.0, &[64], 2).unwrap();
        let one = converge_study(&Potential::harmonic(&[1.0]).unwrap(), 0.0, &[64], 1).unwrap();
        let e0 = 2.0 * one.row(0, 0).energy;
        assert!((t.row(0, 0).energy - e0).abs() < 1e-9 * e0);
        assert!((t.row(0, 1).energy - t.row(0, 2).energy).abs() < 1e-9 * e0);
    }

    #[test]
    fn gamma_outside_window_rejected() {
        let v = Potential::harmonic(&[1.0]).unwrap();
        assert!(converge_study(&v, -1.0, &[4, 8], 0).is_err());
        assert!(converge_study(&v, 1.0, &[4, 8], 0).is_err());
    }
}
