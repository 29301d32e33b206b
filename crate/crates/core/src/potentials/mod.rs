//! Potentials on `R^d`, their wells, and the `(N, γ, ω)` scaling parameters.
//!
//! A [`Potential`] is a code-level evaluator together with the metadata the
//! limit spectrum needs: the registered zeros `a_l`, the Hessian frequencies
//! `ω_i(a_l)` at each zero, and the positivity data `(R₀, c)` with
//! `|x| > R₀ ⇒ V(x) ≥ c`.

mod builtin;
mod hessian;
mod validate;

use std::fmt;
use std::sync::Arc;

use crate::error::{invalid, Result};
use crate::lattice::LatticeBox;

pub use hessian::{hessian_frequencies, hessian_matrix};
pub use validate::{validate_assumptions, ValidationReport, Verdict};

/// Evaluator for `V: R^d → R`.
pub type Evaluator = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
/// Evaluator for one summand `V_j` of a separable potential.
pub type AxisEvaluator = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A non-degenerate zero of a potential.
#[derive(Debug, Clone, PartialEq)]
pub struct Well {
    location: Vec<f64>,
    frequencies: Vec<f64>,
    /// Row `i` is the principal axis belonging to `frequencies[i]`.
    principal_axes: Vec<Vec<f64>>,
}

impl Well {
    /// Axis-aligned well; frequencies are sorted ascending on construction.
    pub fn new(location: Vec<f64>, frequencies: Vec<f64>) -> Result<Self> {
        let d = location.len();
        let identity = (0..d)
            .map(|i| (0..d).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        Self::with_axes(location, frequencies, identity)
    }

    /// Well with an explicit orthonormal principal frame.
    pub fn with_axes(
        location: Vec<f64>,
        frequencies: Vec<f64>,
        principal_axes: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let d = location.len();
        if d == 0 {
            return invalid("well location must have positive dimension");
        }
        if frequencies.len() != d || principal_axes.len() != d {
            return invalid("well needs one frequency and one principal axis per dimension");
        }
        if let Some(w) = frequencies.iter().find(|w| !(**w > 0.0) || !w.is_finite()) {
            return invalid(format!("well frequency {w} is not positive"));
        }
        for (i, ai) in principal_axes.iter().enumerate() {
            if ai.len() != d {
                return invalid("principal axis has wrong length");
            }
            for (j, aj) in principal_axes.iter().enumerate() {
                let dot: f64 = ai.iter().zip(aj).map(|(x, y)| x * y).sum();
                let expected = if i == j { 1.0 } else { 0.0 };
                if (dot - expected).abs() > 1e-10 {
                    return invalid("principal axes are not orthonormal");
                }
            }
        }
        let mut order: Vec<usize> = (0..d).collect();
        order.sort_by(|&a, &b| frequencies[a].total_cmp(&frequencies[b]));
        Ok(Self {
            location,
            frequencies: order.iter().map(|&i| frequencies[i]).collect(),
            principal_axes: order.iter().map(|&i| principal_axes[i].clone()).collect(),
        })
    }

    pub fn location(&self) -> &[f64] {
        &self.location
    }

    /// `ω_1 ≤ … ≤ ω_d`, square roots of the Hessian eigenvalues.
    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }

    pub fn principal_axes(&self) -> &[Vec<f64>] {
        &self.principal_axes
    }

    /// Quadratic approximation `½ Σ ω_i² ⟨e_i, x - a⟩²` at this well.
    pub fn harmonic_approximation(&self, x: &[f64]) -> f64 {
        let mut total = 0.0;
        for (w, axis) in self.frequencies.iter().zip(&self.principal_axes) {
            let proj: f64 = axis
                .iter()
                .zip(x.iter().zip(&self.location))
                .map(|(e, (xi, ai))| e * (xi - ai))
                .sum();
            total += w * w * proj * proj;
        }
        0.5 * total
    }
}

/// A potential `V: R^d → R` with its registered wells.
#[derive(Clone)]
pub struct Potential {
    name: String,
    dim: usize,
    eval: Evaluator,
    wells: Vec<Well>,
    positivity_radius: f64,
    positivity_floor: f64,
    axes: Option<Vec<AxisEvaluator>>,
}

impl fmt::Debug for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Potential")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("wells", &self.wells)
            .field("positivity_radius", &self.positivity_radius)
            .field("positivity_floor", &self.positivity_floor)
            .field("separable", &self.axes.is_some())
            .finish()
    }
}

impl Potential {
    /// Potential from an arbitrary evaluator and its well metadata.
    ///
    /// `positivity_radius` and `positivity_floor` are the `(R₀, c)` pair;
    /// they are reported by [`validate_assumptions`], never inferred.
    pub fn custom(
        name: impl Into<String>,
        dim: usize,
        eval: Evaluator,
        wells: Vec<Well>,
        positivity_radius: f64,
        positivity_floor: f64,
    ) -> Result<Self> {
        if dim == 0 {
            return invalid("potential dimension must be positive");
        }
        if let Some(w) = wells.iter().find(|w| w.location.len() != dim) {
            return invalid(format!("well at {:?} has wrong dimension", w.location));
        }
        Ok(Self {
            name: name.into(),
            dim,
            eval,
            wells,
            positivity_radius,
            positivity_floor,
            axes: None,
        })
    }

    /// Separable potential `V(x) = Σ_j V_j(x_j)`.
    pub fn separable(
        name: impl Into<String>,
        axes: Vec<AxisEvaluator>,
        wells: Vec<Well>,
        positivity_radius: f64,
        positivity_floor: f64,
    ) -> Result<Self> {
        let summands = axes.clone();
        let eval: Evaluator = Arc::new(move |x: &[f64]| {
            summands.iter().zip(x).map(|(v, xi)| v(*xi)).sum()
        });
        let mut p = Self::custom(
            name,
            axes.len(),
            eval,
            wells,
            positivity_radius,
            positivity_floor,
        )?;
        p.axes = Some(axes);
        Ok(p)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn wells(&self) -> &[Well] {
        &self.wells
    }

    /// `R₀` in `|x| > R₀ ⇒ V(x) ≥ c`.
    pub fn positivity_radius(&self) -> f64 {
        self.positivity_radius
    }

    /// `c` in `|x| > R₀ ⇒ V(x) ≥ c`.
    pub fn positivity_floor(&self) -> f64 {
        self.positivity_floor
    }

    pub fn is_separable(&self) -> bool {
        self.axes.is_some()
    }

    /// Per-axis summands when the potential is separable.
    pub fn axis_evaluators(&self) -> Option<&[AxisEvaluator]> {
        self.axes.as_deref()
    }

    /// `V(x)`.
    pub fn eval(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim);
        (self.eval)(x)
    }

    pub fn evaluator(&self) -> &Evaluator {
        &self.eval
    }
}

/// `V(x)` for a finite point `x`.
pub fn eval_potential(potential: &Potential, x: &[f64]) -> Result<f64> {
    if x.len() != potential.dim {
        return Err(crate::Error::DimensionMismatch {
            expected: potential.dim,
            actual: x.len(),
        });
    }
    if x.iter().any(|v| !v.is_finite()) {
        return invalid("evaluation point must be finite");
    }
    Ok(potential.eval(x))
}

/// `V_N(x) = V(x/N)` at every lattice point of `lattice`, in index order.
pub fn sample_on_lattice(
    potential: &Potential,
    inverse_mesh: u64,
    lattice: &LatticeBox,
) -> Result<Vec<f64>> {
    if inverse_mesh == 0 {
        return invalid("N must be at least 1");
    }
    if lattice.dim() != potential.dim {
        return Err(crate::Error::DimensionMismatch {
            expected: potential.dim,
            actual: lattice.dim(),
        });
    }
    let n = inverse_mesh as f64;
    let mut scaled = vec![0.0; potential.dim];
    Ok((0..lattice.size())
        .map(|idx| {
            for (s, c) in scaled.iter_mut().zip(lattice.point(idx)) {
                *s = c as f64 / n;
            }
            potential.eval(&scaled)
        })
        .collect())
}

/// The coupled scaling `δ_N = 1/N`, `λ_N = N^{1-γ}`, `κ = √(ω / N^{1+γ})`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingParams {
    inverse_mesh: u64,
    gamma: f64,
    omega: f64,
}

impl ScalingParams {
    pub fn new(inverse_mesh: u64, gamma: f64, omega: f64) -> Result<Self> {
        if inverse_mesh == 0 {
            return invalid("N must be at least 1");
        }
        if !gamma.is_finite() {
            return invalid("gamma must be finite");
        }
        if !(omega > 0.0) || !omega.is_finite() {
            return invalid("omega must be positive");
        }
        Ok(Self {
            inverse_mesh,
            gamma,
            omega,
        })
    }

    /// N.
    pub fn inverse_mesh(&self) -> u64 {
        self.inverse_mesh
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Mesh width `δ_N = 1/N`.
    pub fn mesh(&self) -> f64 {
        1.0 / self.inverse_mesh as f64
    }

    /// Semiclassical parameter `λ_N = N^{1-γ}`.
    pub fn lambda(&self) -> f64 {
        (self.inverse_mesh as f64).powf(1.0 - self.gamma)
    }

    /// Coefficient `λ_N² = N^{2(1-γ)}` in front of `V_N`.
    pub fn potential_scale(&self) -> f64 {
        (self.inverse_mesh as f64).powf(2.0 * (1.0 - self.gamma))
    }

    /// Coefficient `N²/2` in front of the lattice Laplacian.
    pub fn kinetic_scale(&self) -> f64 {
        let n = self.inverse_mesh as f64;
        0.5 * n * n
    }

    /// `κ² = ω N^{-(1+γ)}`.
    pub fn kappa_squared(&self) -> f64 {
        self.omega * (self.inverse_mesh as f64).powf(-(1.0 + self.gamma))
    }

    /// `κ = √(ω / N^{1+γ})`.
    pub fn kappa(&self) -> f64 {
        self.kappa_squared().sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_values() {
        let h = Potential::harmonic(&[1.0]).unwrap();
        assert_eq!(eval_potential(&h, &[0.0]).unwrap(), 0.0);
        let h2 = Potential::harmonic(&[1.0, 2.0]).unwrap();
        assert!((eval_potential(&h2, &[1.0, 1.0]).unwrap() - 2.5).abs() < 1e-15);
    }

    #[test]
    fn double_well_value_at_origin() {
        let v = Potential::double_well();
        assert!((v.eval(&[0.0]) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn eval_rejects_non_finite_and_wrong_dim() {
        let v = Potential::double_well();
        assert!(eval_potential(&v, &[f64::NAN]).is_err());
        assert!(eval_potential(&v, &[0.0, 1.0]).is_err());
    }

    #[test]
    fn sampling_scales_coordinates() {
        let h = Potential::harmonic(&[1.0]).unwrap();
        let lattice = LatticeBox::symmetric(1, 20).unwrap();
        let s = sample_on_lattice(&h, 10, &lattice).unwrap();
        let idx = lattice.index_of(&[10]).unwrap();
        assert!((s[idx] - 0.5).abs() < 1e-15);
        assert_eq!(s[lattice.index_of(&[0]).unwrap()], 0.0);

        let dw = Potential::double_well();
        let s = sample_on_lattice(&dw, 4, &lattice).unwrap();
        assert!((s[lattice.index_of(&[2]).unwrap()] - 0.28125).abs() < 1e-15);
        assert!(sample_on_lattice(&dw, 0, &lattice).is_err());
    }

    #[test]
    fn scaling_params_consistency() {
        let p = ScalingParams::new(64, 0.25, 2.0).unwrap();
        let n = 64f64;
        assert!((p.lambda() - n.powf(0.75)).abs() <= 1e-15 * p.lambda());
        assert!((p.kappa_squared() - 2.0 * n.powf(-1.25)).abs() <= 1e-16);
        assert!((p.mesh() - 1.0 / 64.0).abs() < 1e-18);
        assert!(ScalingParams::new(8, 0.0, 0.0).is_err());
        assert!(ScalingParams::new(0, 0.0, 1.0).is_err());
    }

    #[test]
    fn well_sorts_frequencies_with_axes() {
        let w = Well::new(vec![0.0, 0.0], vec![3.0, 1.0]).unwrap();
        assert_eq!(w.frequencies(), &[1.0, 3.0]);
        assert_eq!(w.principal_axes()[0], vec![0.0, 1.0]);
        assert!(Well::new(vec![0.0], vec![-1.0]).is_err());
        assert!(Well::with_axes(vec![0.0, 0.0], vec![1.0, 1.0], vec![vec![1.0, 1.0], vec![0.0, 1.0]]).is_err());
    }
}
