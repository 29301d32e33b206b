use super::{LatticeBox, SymmetricLatticeOperator};
use crate::error::{invalid, Error, Result};
use crate::potentials::{sample_on_lattice, Potential, ScalingParams};

/// Free Dirichlet Laplacian: `2d` on the diagonal, `-1` per neighbour.
pub fn assemble_laplacian(lattice: &LatticeBox) -> SymmetricLatticeOperator {
    SymmetricLatticeOperator::new(lattice.clone(), 1.0, vec![0.0; lattice.size()])
        .expect("zero potential is well formed")
}

/// `v_κ(x) = κ⁴x²`.
pub fn harmonic_lattice_potential(kappa: f64, x: i64) -> f64 {
    let xf = x as f64;
    kappa.powi(4) * xf * xf
}

/// `H_κ = Δ + κ⁴x²` on a one-dimensional box.
pub fn assemble_hkappa(kappa: f64, lattice: &LatticeBox) -> Result<SymmetricLatticeOperator> {
    if !(kappa > 0.0 && kappa.is_finite()) {
        return invalid(format!("kappa must be positive, got {kappa}"));
    }
    if lattice.dim() != 1 {
        return invalid("H_kappa is one-dimensional");
    }
    let lo = lattice.lower()[0];
    let potential = (0..lattice.size())
        .map(|i| harmonic_lattice_potential(kappa, lo + i as i64))
        .collect();
    SymmetricLatticeOperator::new(lattice.clone(), 1.0, potential)
}

/// `H_N = (N²/2)Δ + N^{2(1-γ)} V(x/N)`.
pub fn assemble_hn(
    potential: &Potential,
    params: &ScalingParams,
    lattice: &LatticeBox,
) -> Result<SymmetricLatticeOperator> {
    let scale = params.potential_scale();
    let values = sample_on_lattice(potential, params.inverse_mesh(), lattice)?
        .into_iter()
        .map(|v| scale * v)
        .collect();
    SymmetricLatticeOperator::new(lattice.clone(), params.kinetic_scale(), values)
}

/// `H_N / s` for a positive rescaling `s`, assembled directly from the
/// rescaled coefficients so that very large `N^{2|γ|}` never appear.
pub fn assemble_hn_scaled(
    potential: &Potential,
    params: &ScalingParams,
    lattice: &LatticeBox,
    log_scale: f64,
) -> Result<SymmetricLatticeOperator> {
    let ln_n = (params.inverse_mesh() as f64).ln();
    let kinetic = (2.0 * ln_n - std::f64::consts::LN_2 - log_scale).exp();
    let pot = (2.0 * (1.0 - params.gamma()) * ln_n - log_scale).exp();
    let values = sample_on_lattice(potential, params.inverse_mesh(), lattice)?
        .into_iter()
        .map(|v| pot * v)
        .collect();
    SymmetricLatticeOperator::new(lattice.clone(), kinetic, values)
}

/// Spike data for the modified oscillator `ṽ_κ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModifiedPotentialParams {
    kappa: f64,
    delta: f64,
    spike_location: i64,
    spike_value: f64,
}

impl ModifiedPotentialParams {
    /// Requires `κ > 0` and `δ ∈ (0, 1/2)`; the spike must dominate `κ⁴x_δ²`.
    pub fn new(kappa: f64, delta: f64) -> Result<Self> {
        if !(kappa > 0.0 && kappa.is_finite()) {
            return invalid(format!("kappa must be positive, got {kappa}"));
        }
        if !(delta > 0.0 && delta < 0.5) {
            return invalid(format!("spike exponent must lie in (0, 1/2), got {delta}"));
        }
        let spike_location = kappa.powf(-(1.0 + delta)).floor() as i64;
        let spike_value = kappa.powf(-delta);
        if spike_location < 1 {
            return invalid(format!("kappa = {kappa} too large: spike location is 0"));
        }
        if spike_value <= harmonic_lattice_potential(kappa, spike_location) {
            return invalid(format!(
                "spike value {spike_value} does not exceed v_kappa at x = {spike_location}"
            ));
        }
        Ok(Self {
            kappa,
            delta,
            spike_location,
            spike_value,
        })
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// `x_δ = ⌊κ^{-(1+δ)}⌋`.
    pub fn spike_location(&self) -> i64 {
        self.spike_location
    }

    /// `κ^{-δ}`.
    pub fn spike_value(&self) -> f64 {
        self.spike_value
    }

    /// `ṽ_κ(x)`.
    pub fn potential(&self, x: i64) -> f64 {
        if x.abs() == self.spike_location {
            self.spike_value
        } else {
            harmonic_lattice_potential(self.kappa, x)
        }
    }
}

/// `Δ + ṽ_κ` on a one-dimensional box containing `±x_δ`.
pub fn assemble_modified(
    params: &ModifiedPotentialParams,
    lattice: &LatticeBox,
) -> Result<SymmetricLatticeOperator> {
    if lattice.dim() != 1 {
        return invalid("modified oscillator is one-dimensional");
    }
    let x = params.spike_location();
    if !(lattice.contains(&[x]) && lattice.contains(&[-x])) {
        return Err(Error::BoxTooSmall(format!(
            "box {:?}..={:?} does not contain ±x_delta = ±{x}",
            lattice.lower(),
            lattice.upper()
        )));
    }
    let lo = lattice.lower()[0];
    let potential = (0..lattice.size())
        .map(|i| params.potential(lo + i as i64))
        .collect();
    SymmetricLatticeOperator::new(lattice.clone(), 1.0, potential)
}

/// Like [`assemble_modified`] but on any interval; spikes outside the window
/// are simply absent.
pub fn assemble_modified_window(
    params: &ModifiedPotentialParams,
    lattice: &LatticeBox,
) -> Result<SymmetricLatticeOperator> {
    if lattice.dim() != 1 {
        return invalid("modified oscillator is one-dimensional");
    }
    let lo = lattice.lower()[0];
    let potential = (0..lattice.size())
        .map(|i| params.potential(lo + i as i64))
        .collect();
    SymmetricLatticeOperator::new(lattice.clone(), 1.0, potential)
}
