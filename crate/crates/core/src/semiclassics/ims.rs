use serde::Serialize;

use super::sigma_enumerate;
use crate::error::{invalid, Result};
use crate::lattice::{
    assemble_hn, double_commutator, ims_identity_residual, ims_partition, ims_remainder, step_variation,
    LatticeBox,
};
use crate::potentials::{Potential, ScalingParams};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImsWellReport {
    /// Partition index `l ≥ 1`, i.e. well `l - 1`.
    pub index: usize,
    pub center: Vec<f64>,
    pub step_variation: f64,
    pub commutator_norm: f64,
    /// `2‖L‖C²` with `C` the measured step variation.
    pub commutator_bound_measured: f64,
    /// `16 d λ_N / N^{2δ}`.
    pub commutator_bound: f64,
    pub within_bound: bool,
    /// `max_x η_l(x)² λ_N² |V(x/N) - V_l^harm(x/N)|`.
    pub potential_error_norm: f64,
    /// `λ_N² (r/N)³`.
    pub potential_error_scale: f64,
    pub potential_error_constant: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ImsReport {
    pub potential: String,
    #[serde(rename = "N")]
    pub inverse_mesh: u64,
    pub gamma: f64,
    pub lambda: f64,
    pub delta_cut: f64,
    pub inner_radius: f64,
    pub half_width: i64,
    pub identity_residual: f64,
    pub wells: Vec<ImsWellReport>,
    /// Double-commutator norm for `η_0` (no bound is claimed).
    pub outer_commutator_norm: f64,
    /// `min λ_N² V(x/N)` over the support of `η_0`.
    pub outer_floor: f64,
    /// `λ_N² c` from the registered positivity floor.
    pub outer_floor_predicted: f64,
    /// `λ_N e_0(V)`.
    pub ground_target: f64,
}

/// Cube IMS localization of `H_N` around the wells with inner radius
/// `r = N^{1+δ}/λ_N^{1/2}`.
pub fn ims_general_experiment(potential: &Potential, params: &ScalingParams, delta_cut: f64) -> Result<ImsReport> {
    let gamma = params.gamma();
    if !(delta_cut > 0.0 && delta_cut < 0.5 * (1.0 - gamma)) {
        return invalid(format!(
            "cutoff exponent must lie in (0, (1 - gamma)/2), got {delta_cut}"
        ));
    }
    let wells = potential.wells();
    if wells.is_empty() {
        return invalid(format!("potential '{}' has no registered wells", potential.name()));
    }
    let d = potential.dim();
    let n = params.inverse_mesh() as f64;
    let lambda = params.lambda();
    let r = n.powf(1.0 + delta_cut) / lambda.sqrt();
    let centers: Vec<Vec<f64>> = wells
        .iter()
        .map(|w| w.location().iter().map(|a| a * n).collect())
        .collect();
    let reach = centers
        .iter()
        .flat_map(|c| c.iter().map(|x| x.abs()))
        .fold(0.0, f64::max);
    let half_width = (reach + 2.0 * r).ceil() as i64 + 1;
    let lattice = LatticeBox::symmetric(d, half_width)?;
    let etas = ims_partition(&centers, r, &lattice)?;
    let op = assemble_hn(potential, params, &lattice)?;
    let remainder = ims_remainder(&op, &etas)?;
    let identity_residual = ims_identity_residual(&op, &etas, &remainder)?;

    let laplace_norm = op.laplace_norm();
    let scale = params.potential_scale();
    let bound = 16.0 * d as f64 * lambda / n.powf(2.0 * delta_cut);
    let error_scale = scale * (r / n).powi(3);
    let mut x = vec![0.0; d];
    let mut reports = Vec::with_capacity(wells.len());
    for (l, well) in wells.iter().enumerate() {
        let eta = &etas[l + 1];
        let c = step_variation(eta, &lattice);
        let norm = double_commutator(&op, eta).spectral_norm();
        let mut error = 0.0f64;
        for (i, e) in eta.iter().enumerate() {
            if *e == 0.0 {
                continue;
            }
            for (xi, p) in x.iter_mut().zip(lattice.point(i)) {
                *xi = p as f64 / n;
            }
            let diff = potential.eval(&x) - well.harmonic_approximation(&x);
            error = error.max(e * e * scale * diff.abs());
        }
        reports.push(ImsWellReport {
            index: l + 1,
            center: centers[l].clone(),
            step_variation: c,
            commutator_norm: norm,
            commutator_bound_measured: 2.0 * laplace_norm * c * c,
            commutator_bound: bound,
            within_bound: norm <= bound,
            potential_error_norm: error,
            potential_error_scale: error_scale,
            potential_error_constant: error / error_scale,
        });
    }
    let outer = &etas[0];
    let outer_floor = outer
        .iter()
        .zip(op.potential())
        .filter(|(e, _)| **e > 0.0)
        .map(|(_, w)| *w)
        .fold(f64::INFINITY, f64::min);
    let e0 = sigma_enumerate(potential, 1)?.values()[0];
    Ok(ImsReport {
        potential: potential.name().to_string(),
        inverse_mesh: params.inverse_mesh(),
        gamma,
        lambda,
        delta_cut,
        inner_radius: r,
        half_width,
        identity_residual,
        wells: reports,
        outer_commutator_norm: double_commutator(&op, outer).spectral_norm(),
        outer_floor,
        outer_floor_predicted: scale * potential.positivity_floor(),
        ground_target: lambda * e0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn double_well_localization() {
        let v = Potential::double_well();
        let p = ScalingParams::new(128, 0.0, 2.0).unwrap();
        let r = ims_general_experiment(&v, &p, 0.25).unwrap();
        assert!(r.identity_residual <= 1e-12);
        assert_eq!(r.wells.len(), 2);
        for w in &r.wells {
            assert!(w.within_bound, "{w:?}");
            assert!(w.commutator_norm <= w.commutator_bound_measured * (1.0 + 1e-10));
        }
        assert!(r.outer_floor > r.ground_target);
    }

    #[test]
    fn cutoff_exponent_window() {
        let v = Potential::double_well();
        let p = ScalingParams::new(64, 0.0, 2.0).unwrap();
        assert!(ims_general_experiment(&v, &p, 0.5).is_err());
        assert!(ims_general_experiment(&v, &p, 0.0).is_err());
    }
}
