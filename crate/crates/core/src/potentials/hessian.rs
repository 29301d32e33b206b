use super::Potential;
use crate::error::{invalid, Error, Result};
use crate::numerics::jacobi_eigen;

/// Central-difference Hessian of `V` at `a`, row-major `d x d`.
///
/// Step per axis is `ε^{1/3} (1 + |a_i|)`.
pub fn hessian_matrix(potential: &Potential, a: &[f64]) -> Result<Vec<f64>> {
    let d = potential.dim();
    if a.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            actual: a.len(),
        });
    }
    let steps: Vec<f64> = a
        .iter()
        .map(|ai| f64::EPSILON.cbrt() * (1.0 + ai.abs()))
        .collect();
    let f0 = potential.eval(a);
    let mut hess = vec![0.0; d * d];
    let mut x = a.to_vec();
    for i in 0..d {
        let hi = steps[i];
        x[i] = a[i] + hi;
        let fp = potential.eval(&x);
        x[i] = a[i] - hi;
        let fm = potential.eval(&x);
        x[i] = a[i];
        hess[i * d + i] = (fp - 2.0 * f0 + fm) / (hi * hi);
        for j in (i + 1)..d {
            let hj = steps[j];
            let mut corner = |si: f64, sj: f64| {
                x[i] = a[i] + si * hi;
                x[j] = a[j] + sj * hj;
                let v = potential.eval(&x);
                x[i] = a[i];
                x[j] = a[j];
                v
            };
            let mixed = (corner(1.0, 1.0) - corner(1.0, -1.0) - corner(-1.0, 1.0)
                + corner(-1.0, -1.0))
                / (4.0 * hi * hj);
            hess[i * d + j] = mixed;
            hess[j * d + i] = mixed;
        }
    }
    Ok(hess)
}

/// Sorted frequencies `ω_1 ≤ … ≤ ω_d` at a zero `a` of `V`: square roots of
/// the eigenvalues of the central-difference Hessian.
pub fn hessian_frequencies(potential: &Potential, a: &[f64]) -> Result<Vec<f64>> {
    let d = potential.dim();
    if a.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            actual: a.len(),
        });
    }
    if a.iter().any(|v| !v.is_finite()) {
        return invalid("well location must be finite");
    }
    let value = potential.eval(a);
    if value.abs() > 1e-10 {
        return Err(Error::NotAZero {
            location: a.to_vec(),
            value,
        });
    }
    let hess = hessian_matrix(potential, a)?;
    let (eigs, _) = jacobi_eigen(&hess, d);
    let scale = eigs.iter().fold(1.0f64, |m, e| m.max(e.abs()));
    if let Some(&bad) = eigs.iter().find(|&&e| e <= 1e-6 * scale) {
        return Err(Error::NonPositiveHessian {
            location: a.to_vec(),
            eigenvalue: bad,
        });
    }
    Ok(eigs.iter().map(|e| e.sqrt()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::{Evaluator, Well};
    use std::sync::Arc;

    #[test]
    fn harmonic_frequencies() {
        let v = Potential::harmonic(&[3.0, 1.0]).unwrap();
        let w = hessian_frequencies(&v, &[0.0, 0.0]).unwrap();
        assert!((w[0] - 1.0).abs() < 1e-6 && (w[1] - 3.0).abs() < 3e-6);
    }

    #[test]
    fn double_well_frequency() {
        let v = Potential::double_well();
        let w = hessian_frequencies(&v, &[1.0]).unwrap();
        assert!((w[0] - 2.0).abs() < 2e-6);
    }

    #[test]
    fn degenerate_minimum_is_rejected() {
        let v = Potential::quartic();
        assert!(matches!(
            hessian_frequencies(&v, &[0.0]),
            Err(Error::NonPositiveHessian { .. })
        ));
    }

    #[test]
    fn nonzero_point_is_rejected() {
        let v = Potential::double_well();
        assert!(matches!(
            hessian_frequencies(&v, &[0.0]),
            Err(Error::NotAZero { .. })
        ));
    }

    #[test]
    fn rotation_invariance() {
        // ½(ω₁² u² + ω₂² w²) in a frame rotated by θ.
        let theta: f64 = 0.6;
        let (c, s) = (theta.cos(), theta.sin());
        let (w1, w2) = (0.7, 2.3);
        let eval: Evaluator = Arc::new(move |x: &[f64]| {
            let u = c * x[0] + s * x[1];
            let w = -s * x[0] + c * x[1];
            0.5 * (w1 * w1 * u * u + w2 * w2 * w * w)
        });
        let well = Well::with_axes(vec![0.0, 0.0], vec![w1, w2], vec![vec![c, s], vec![-s, c]])
            .unwrap();
        let v = Potential::custom("rotated", 2, eval, vec![well.clone()], 1.0, 0.1).unwrap();
        let fd = hessian_frequencies(&v, &[0.0, 0.0]).unwrap();
        let plain = hessian_frequencies(&Potential::harmonic(&[w1, w2]).unwrap(), &[0.0, 0.0])
            .unwrap();
        for ((a, b), r) in fd.iter().zip(&plain).zip(well.frequencies()) {
            assert!((a - b).abs() <= 1e-8 * b, "{a} vs {b}");
            assert!((a - r).abs() <= 1e-6 * r);
        }
        // quadratic model reproduces V in the registered frame
        let x = [0.3, -0.8];
        assert!((well.harmonic_approximation(&x) - v.eval(&x)).abs() < 1e-14);
    }
}
