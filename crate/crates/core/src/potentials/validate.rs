use serde::Serialize;

use super::{hessian_frequencies, Potential};
use crate::error::{invalid, Result};

/// Points farther than this from every registered well must not be near-zeros.
const WELL_EXCLUSION_RADIUS: f64 = 0.1;
/// `V` below this value at such a point flags an unregistered minimum.
const ZERO_TOLERANCE: f64 = 1e-8;
const MAX_GRID_POINTS: usize = 50_000_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", content = "detail", rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail(String),
    /// Not numerically checkable.
    Assumed,
}

impl Verdict {
    pub fn is_fail(&self) -> bool {
        matches!(self, Verdict::Fail(_))
    }
}

/// Grid-scan verdicts for the standing assumptions on `V`.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    /// Smoothness of `V`; always [`Verdict::Assumed`].
    pub smoothness: Verdict,
    /// `V ≥ 0` on the scan grid.
    pub nonnegative: Verdict,
    /// Registered wells are non-degenerate and no unregistered zero exists.
    pub wells: Verdict,
    /// `V ≥ c` on grid points with `|x| ∈ (R₀, scan_radius]`.
    pub positive_at_infinity: Verdict,
    /// Number of registered wells `m`.
    pub well_count: usize,
    pub min_value: f64,
    pub grid_points: usize,
    pub warnings: Vec<String>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        !(self.nonnegative.is_fail() || self.wells.is_fail() || self.positive_at_infinity.is_fail())
    }
}

/// Scan `[-scan_radius, scan_radius]^d` with spacing `grid_step` and report on
/// nonnegativity, the well structure and positivity outside `R₀`.
///
/// Failures are report entries; only malformed arguments are errors.
pub fn validate_assumptions(
    potential: &Potential,
    scan_radius: f64,
    grid_step: f64,
) -> Result<ValidationReport> {
    let reach = potential
        .wells()
        .iter()
        .map(|w| w.location().iter().map(|v| v * v).sum::<f64>().sqrt())
        .fold(0.0, f64::max);
    if !(scan_radius > reach + 1.0) {
        return invalid(format!(
            "scan radius {scan_radius} must exceed max |a_l| + 1 = {}",
            reach + 1.0
        ));
    }
    if !(grid_step > 0.0) {
        return invalid("grid step must be positive");
    }
    let d = potential.dim();
    let per_axis = (2.0 * scan_radius / grid_step).round() as usize + 1;
    let total = (per_axis as f64).powi(d as i32);
    if total > MAX_GRID_POINTS as f64 {
        return invalid(format!("scan grid of {total:e} points is too large"));
    }
    let total = per_axis.pow(d as u32);

    let mut warnings = Vec::new();
    let mut well_failures = Vec::new();
    if potential.wells().is_empty() {
        well_failures.push("no registered zeros (need 1 ≤ m < ∞)".to_string());
    }
    for (l, w) in potential.wells().iter().enumerate() {
        if let Err(e) = hessian_frequencies(potential, w.location()) {
            well_failures.push(format!("well {l}: {e}"));
        }
    }

    let r0 = potential.positivity_radius();
    let c = potential.positivity_floor();
    let mut min_value = f64::INFINITY;
    let mut negative = 0usize;
    let mut first_negative = None;
    let mut unregistered = 0usize;
    let mut floor_violations = 0usize;
    let mut first_floor_violation = None;
    let mut x = vec![0.0; d];
    for flat in 0..total {
        let mut rem = flat;
        for xi in x.iter_mut().rev() {
            *xi = -scan_radius + (rem % per_axis) as f64 * grid_step;
            rem /= per_axis;
        }
        let v = potential.eval(&x);
        min_value = min_value.min(v);
        if v < 0.0 {
            negative += 1;
            first_negative.get_or_insert_with(|| x.clone());
        }
        if v < ZERO_TOLERANCE {
            let far = potential.wells().iter().all(|w| {
                let dist2: f64 = w
                    .location()
                    .iter()
                    .zip(&x)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum();
                dist2.sqrt() > WELL_EXCLUSION_RADIUS
            });
            if far {
                unregistered += 1;
            }
        }
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if r > r0 && r <= scan_radius && v < c {
            floor_violations += 1;
            first_floor_violation.get_or_insert_with(|| (x.clone(), v));
        }
    }

    let nonnegative = match first_negative {
        None => Verdict::Pass,
        Some(p) => Verdict::Fail(format!(
            "{negative} grid points with V < 0 (first at {p:?}, min {min_value:e})"
        )),
    };
    if unregistered > 0 {
        let msg = format!(
            "{unregistered} grid points with V < {ZERO_TOLERANCE:e} farther than \
             {WELL_EXCLUSION_RADIUS} from every registered well"
        );
        warnings.push(msg.clone());
        well_failures.push(msg);
    }
    let wells = if well_failures.is_empty() {
        Verdict::Pass
    } else {
        Verdict::Fail(well_failures.join("; "))
    };
    let positive_at_infinity = match first_floor_violation {
        None => Verdict::Pass,
        Some((p, v)) => Verdict::Fail(format!(
            "{floor_violations} grid points outside R0 = {r0} with V < c = {c} (first at {p:?}, V = {v:e})"
        )),
    };
    Ok(ValidationReport {
        smoothness: Verdict::Assumed,
        nonnegative,
        wells,
        positive_at_infinity,
        well_count: potential.wells().len(),
        min_value,
        grid_points: total,
        warnings,
    })
}
