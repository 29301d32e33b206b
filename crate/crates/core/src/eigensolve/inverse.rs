//! Inverse iteration on symmetric tridiagonals with a pivoted LU solve.

use crate::error::{Error, Result};
use crate::numerics::{dot, norm2};

const MAX_ITERATIONS: usize = 100;

/// `LU` of a tridiagonal `T - λ` with partial pivoting (second
/// superdiagonal from row swaps), in the layout of LAPACK `dgttrf`.
struct TridiagLu {
    dl: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    swapped: Vec<bool>,
}

impl TridiagLu {
    fn factor(diag: &[f64], off: &[f64], shift: f64) -> Self {
        let n = diag.len();
        let mut dl = off.to_vec();
        let mut d: Vec<f64> = diag.iter().map(|v| v - shift).collect();
        let mut du = off.to_vec();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        let scale = diag
            .iter()
            .map(|v| v.abs())
            .chain(off.iter().map(|v| v.abs()))
            .fold(shift.abs(), f64::max)
            .max(f64::MIN_POSITIVE);
        let tiny = f64::EPSILON * scale;
        for i in 0..n.saturating_sub(1) {
            if d[i].abs() >= dl[i].abs() {
                if d[i] == 0.0 {
                    d[i] = tiny;
                }
                let f = dl[i] / d[i];
                dl[i] = f;
                d[i + 1] -= f * du[i];
            } else {
                let f = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = f;
                let tmp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = tmp - f * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -f;
                }
                swapped[i] = true;
            }
        }
        if let Some(last) = d.last_mut() {
            if *last == 0.0 {
                *last = tiny;
            }
        }
        Self {
            dl,
            d,
            du,
            du2,
            swapped,
        }
    }

    fn solve(&self, b: &mut [f64]) {
        let n = b.len();
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                b.swap(i, i + 1);
                b[i + 1] -= self.dl[i] * b[i];
            } else {
                b[i + 1] -= self.dl[i] * b[i];
            }
        }
        for i in (0..n).rev() {
            let mut v = b[i];
            if i + 1 < n {
                v -= self.du[i] * b[i + 1];
            }
            if i + 2 < n {
                v -= self.du2[i] * b[i + 2];
            }
            b[i] = v / self.d[i];
        }
    }
}

fn tridiag_apply(diag: &[f64], off: &[f64], v: &[f64]) -> Vec<f64> {
    let n = diag.len();
    (0..n)
        .map(|i| {
            let mut s = diag[i] * v[i];
            if i > 0 {
                s += off[i - 1] * v[i - 1];
            }
            if i + 1 < n {
                s += off[i] * v[i + 1];
            }
            s
        })
        .collect()
}

/// `‖Tv - λv‖₂`.
pub fn tridiag_residual(diag: &[f64], off: &[f64], lambda: f64, v: &[f64]) -> f64 {
    let tv = tridiag_apply(diag, off, v);
    let r: Vec<f64> = tv.iter().zip(v).map(|(a, b)| a - lambda * b).collect();
    norm2(&r)
}

/// Make the first entry above `1e-8·‖v‖_∞` positive.
pub fn normalize_sign(v: &mut [f64]) {
    let sup = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if let Some(first) = v.iter().find(|x| x.abs() > 1e-8 * sup) {
        if *first < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

fn start_vector(n: usize, seed: usize) -> Vec<f64> {
    // deterministic, with no special structure w.r.t. x ↦ -x
    (0..n)
        .map(|i| 1.0 + 0.5 * ((i * 7 + seed * 13 + 3) as f64 * 0.618_033_988_749_895).fract())
        .collect()
}

/// Eigenvectors for a group of eigenvalues, orthogonalized against the
/// vectors already found in the group (Gram–Schmidt each sweep).
pub fn eigvecs_inverse_iteration(diag: &[f64], off: &[f64], lambdas: &[f64]) -> Result<Vec<Vec<f64>>> {
    let n = diag.len();
    let mut found: Vec<Vec<f64>> = Vec::with_capacity(lambdas.len());
    for (idx, &lambda) in lambdas.iter().enumerate() {
        let tol = 1e-8 * (1.0 + lambda.abs());
        let lu = TridiagLu::factor(diag, off, lambda);
        let mut v = start_vector(n, idx);
        let mut converged = false;
        for _ in 0..MAX_ITERATIONS {
            for q in &found {
                let c = dot(&v, q);
                v.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
            }
            lu.solve(&mut v);
            for q in &found {
                let c = dot(&v, q);
                v.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
            }
            let nv = norm2(&v);
            if !(nv.is_finite() && nv > 0.0) {
                v = start_vector(n, idx + 17);
                continue;
            }
            v.iter_mut().for_each(|x| *x /= nv);
            if tridiag_residual(diag, off, lambda, &v) <= 0.1 * tol {
                converged = true;
                break;
            }
        }
        if !converged && tridiag_residual(diag, off, lambda, &v) > tol {
            return Err(Error::ConvergenceFailure {
                what: format!("inverse iteration at eigenvalue {lambda:e}"),
                iterations: MAX_ITERATIONS,
            });
        }
        normalize_sign(&mut v);
        found.push(v);
    }
    Ok(found)
}

/// Normalized eigenvector for an isolated computed eigenvalue `λ`.
pub fn eigvec_inverse_iteration(diag: &[f64], off: &[f64], lambda: f64) -> Result<Vec<f64>> {
    Ok(eigvecs_inverse_iteration(diag, off, &[lambda])?.remove(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigensolve::tridiag::tridiag_eigenvalues;

    #[test]
    fn diagonal_two_by_two() {
        let v = eigvec_inverse_iteration(&[0.0, 1.0], &[0.0], 0.0).unwrap();
        assert!((v[0] - 1.0).abs() < 1e-14 && v[1].abs() < 1e-14);
    }

    #[test]
    fn residuals_on_random_tridiagonal() {
        let n = 300;
        let d: Vec<f64> = (0..n).map(|i| 2.0 + ((i * i) as f64 * 0.01).sin()).collect();
        let o: Vec<f64> = (0..n - 1).map(|i| -0.7 - 0.2 * (i as f64).cos()).collect();
        let vals = tridiag_eigenvalues(&d, &o, 10);
        for &l in &vals {
            let v = eigvec_inverse_iteration(&d, &o, l).unwrap();
            assert!((norm2(&v) - 1.0).abs() < 1e-12);
            assert!(tridiag_residual(&d, &o, l, &v) <= 1e-8 * (1.0 + l.abs()));
        }
    }

    #[test]
    fn degenerate_pair_gives_orthonormal_basis() {
        // two decoupled identical blocks
        let d = vec![2.0, 2.0, 2.0, 2.0, 2.0, 2.0];
        let o = vec![-1.0, -1.0, 0.0, -1.0, -1.0];
        let vals = tridiag_eigenvalues(&d, &o, 2);
        let vs = eigvecs_inverse_iteration(&d, &o, &vals).unwrap();
        assert!(dot(&vs[0], &vs[1]).abs() < 1e-12);
        for (v, l) in vs.iter().zip(&vals) {
            assert!(tridiag_residual(&d, &o, *l, v) < 1e-8);
        }
    }
}
