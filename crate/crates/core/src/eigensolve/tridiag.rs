//! Sturm-sequence bisection for symmetric tridiagonal matrices.

use rayon::prelude::*;

/// Relative bracket width at which bisection stops.
pub const BISECTION_RTOL: f64 = 1e-13;

/// Number of eigenvalues strictly below `x` (negative pivots of the
/// `LDLᵀ` factorization of `T - x`).
pub fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let scale = gershgorin_scale(diag, off);
    let tiny = f64::EPSILON * scale.max(f64::MIN_POSITIVE);
    let mut count = 0;
    let mut q = 1.0;
    for i in 0..diag.len() {
        let coupling = if i == 0 { 0.0 } else { off[i - 1] * off[i - 1] / q };
        q = diag[i] - x - coupling;
        if q == 0.0 {
            q = -tiny;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn gershgorin_scale(diag: &[f64], off: &[f64]) -> f64 {
    let (lo, hi) = gershgorin(diag, off);
    lo.abs().max(hi.abs())
}

/// Interval `[lo, hi]` containing the whole spectrum.
pub fn gershgorin(diag: &[f64], off: &[f64]) -> (f64, f64) {
    let n = diag.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { off[i - 1].abs() } else { 0.0 } + if i + 1 < n { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    (lo, hi)
}

/// The `k`-th smallest eigenvalue (0-based), bracketed by bisection to
/// relative width [`BISECTION_RTOL`] (or the rounding floor of `T`).
pub fn kth_eigenvalue(diag: &[f64], off: &[f64], k: usize) -> f64 {
    assert!(k < diag.len(), "eigenvalue index {k} out of range");
    assert_eq!(off.len() + 1, diag.len());
    let (mut lo, mut hi) = gershgorin(diag, off);
    let pad = f64::EPSILON * lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE) * diag.len() as f64;
    lo -= pad;
    hi += pad;
    let floor = 1e-6 * f64::EPSILON * lo.abs().max(hi.abs());
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if hi - lo <= (BISECTION_RTOL * lo.abs().max(hi.abs())).max(floor) {
            break;
        }
        if sturm_count(diag, off, mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Lowest `k` eigenvalues in ascending order.
pub fn tridiag_eigenvalues(diag: &[f64], off: &[f64], k: usize) -> Vec<f64> {
    let k = k.min(diag.len());
    let mut vals: Vec<f64> = (0..k)
        .into_par_iter()
        .map(|i| kth_eigenvalue(diag, off, i))
        .collect();
    // bisection brackets are independent; enforce monotone output
    for i in 1..vals.len() {
        if vals[i] < vals[i - 1] {
            vals[i] = vals[i - 1];
        }
    }
    vals
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_laplacian_three_points() {
        let d = [2.0; 3];
        let o = [-1.0; 2];
        let v = tridiag_eigenvalues(&d, &o, 3);
        let s2 = 2f64.sqrt();
        for (a, b) in v.iter().zip([2.0 - s2, 2.0, 2.0 + s2]) {
            assert!((a - b).abs() <= 2e-13 * b);
        }
    }

    #[test]
    fn one_by_one() {
        assert_eq!(tridiag_eigenvalues(&[3.25], &[], 1), vec![3.25]);
    }

    #[test]
    fn counts_are_monotone() {
        let d: Vec<f64> = (0..50).map(|i| (i as f64 * 0.3).cos()).collect();
        let o: Vec<f64> = (0..49).map(|i| 0.5 + (i as f64).sin()).collect();
        let mut last = 0;
        for s in -40..=40 {
            let c = sturm_count(&d, &o, s as f64 * 0.1);
            assert!(c >= last);
            last = c;
        }
        assert_eq!(sturm_count(&d, &o, 100.0), 50);
    }
}
