//! Hermite polynomials `h_n` (physicists' normalization), the functions
//! `Ψ_n = h_n e^{-y²/2}`, and their lattice samples `ψ_n(x) = Ψ_n(κx)`.

use crate::eigensolve::tridiag;
use crate::error::{invalid, Error, Result};
use crate::lattice::LatticeBox;
use crate::numerics::compensated_sum;
use crate::quadrature::AdaptiveGaussLegendre;

/// Largest degree with zero tables and weighted evaluation guarantees.
pub const MAX_DEGREE: usize = 64;

/// `h_n(y)` by `h_{k+1} = 2y h_k - 2k h_{k-1}`.
pub fn hermite_eval(n: usize, y: f64) -> Result<f64> {
    let (mut prev, mut cur) = (0.0, 1.0);
    for k in 0..n {
        let next = 2.0 * y * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    if !cur.is_finite() {
        return Err(Error::Overflow(format!("h_{n}({y}) exceeds the float range")));
    }
    Ok(cur)
}

/// `Ψ_n(y) = h_n(y) e^{-y²/2}`.
///
/// Runs the recurrence on `P_k = h_k f^{k+1}` with `f = e^{-y²/(2(n+1))}`,
/// so `P_n = Ψ_n(y)` and intermediates stay bounded.
pub fn weighted_eval(n: usize, y: f64) -> f64 {
    let f = (-y * y / (2.0 * (n + 1) as f64)).exp();
    let (mut prev, mut cur) = (0.0, f);
    for k in 0..n {
        let next = 2.0 * y * f * cur - 2.0 * k as f64 * f * f * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Coefficients `c_k` with `Ψ_n^{(order)} = Σ_k c_k Ψ_k`, from
/// `Ψ_k' = k Ψ_{k-1} - ½ Ψ_{k+1}`.
pub fn derivative_expansion(n: usize, order: usize) -> Vec<(usize, f64)> {
    let mut coeffs = vec![0.0; n + order + 1];
    coeffs[n] = 1.0;
    for _ in 0..order {
        let mut next = vec![0.0; coeffs.len()];
        for (k, &c) in coeffs.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            if k > 0 {
                next[k - 1] += c * k as f64;
            }
            if k + 1 < next.len() {
                next[k + 1] -= 0.5 * c;
            }
        }
        coeffs = next;
    }
    coeffs
        .into_iter()
        .enumerate()
        .filter(|(_, c)| *c != 0.0)
        .collect()
}

/// `Ψ_n^{(order)}(y)`.
pub fn weighted_derivative(n: usize, order: usize, y: f64) -> f64 {
    derivative_expansion(n, order)
        .into_iter()
        .map(|(k, c)| c * weighted_eval(k, y))
        .sum()
}

/// Sorted zeros of `h_n`: Golub–Welsch eigenvalues of the Jacobi matrix
/// with off-diagonals `√(k/2)`, Newton-polished and symmetrized.
pub fn hermite_zeros(n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Ok(Vec::new());
    }
    if n > MAX_DEGREE {
        return invalid(format!("degree {n} exceeds the supported maximum {MAX_DEGREE}"));
    }
    let diag = vec![0.0; n];
    let off: Vec<f64> = (1..n).map(|k| (k as f64 / 2.0).sqrt()).collect();
    let mut zeros: Vec<f64> = (0..n)
        .map(|i| tridiag::kth_eigenvalue(&diag, &off, i))
        .collect();
    for z in zeros.iter_mut() {
        *z = newton_polish(n, *z)?;
    }
    for i in 0..n / 2 {
        let m = 0.5 * (zeros[n - 1 - i] - zeros[i]);
        zeros[i] = -m;
        zeros[n - 1 - i] = m;
    }
    if n % 2 == 1 {
        zeros[n / 2] = 0.0;
    }
    Ok(zeros)
}

fn newton_polish(n: usize, mut x: f64) -> Result<f64> {
    let mut last = f64::INFINITY;
    for _ in 0..50 {
        let h = hermite_eval(n, x)?;
        let dh = 2.0 * n as f64 * hermite_eval(n - 1, x)?;
        if h == 0.0 {
            return Ok(x);
        }
        let step = h / dh;
        if !step.is_finite() {
            return Err(Error::ConvergenceFailure {
                what: format!("Newton polish of a zero of h_{n}"),
                iterations: 0,
            });
        }
        // stagnation at rounding level: keep the better iterate
        if step.abs() >= last {
            return Ok(x);
        }
        x -= step;
        if step.abs() <= 1e-15 * x.abs().max(1.0) {
            return Ok(x);
        }
        last = step.abs();
    }
    Err(Error::ConvergenceFailure {
        what: format!("Newton polish of a zero of h_{n}"),
        iterations: 50,
    })
}

/// Zero tables of `h_1, …, h_{n_max}`.
#[derive(Debug, Clone)]
pub struct HermiteBasis {
    zeros: Vec<Vec<f64>>,
}

impl HermiteBasis {
    pub fn new(n_max: usize) -> Result<Self> {
        let zeros = (0..=n_max).map(hermite_zeros).collect::<Result<_>>()?;
        Ok(Self { zeros })
    }

    pub fn max_degree(&self) -> usize {
        self.zeros.len() - 1
    }

    pub fn zeros(&self, n: usize) -> &[f64] {
        &self.zeros[n]
    }

    /// Zeros of `h_n` strictly interlace those of `h_{n+1}`.
    pub fn interlaces(&self, n: usize) -> bool {
        let (a, b) = (&self.zeros[n], &self.zeros[n + 1]);
        a.iter()
            .enumerate()
            .all(|(i, z)| b[i] < *z && *z < b[i + 1])
    }
}

/// Lattice test function `x ↦ Ψ_n(βκ(x - c))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestFunction {
    pub degree: usize,
    pub kappa: f64,
    pub beta: f64,
    pub center: i64,
    /// Evaluate `|Ψ_n|` instead of `Ψ_n`.
    pub absolute: bool,
    /// Beyond `|x - c| > plateau` the value is frozen at `±plateau`.
    pub plateau: Option<i64>,
}

impl TestFunction {
    pub fn new(degree: usize, kappa: f64) -> Result<Self> {
        if !(kappa > 0.0 && kappa.is_finite()) {
            return invalid(format!("kappa must be positive, got {kappa}"));
        }
        Ok(Self {
            degree,
            kappa,
            beta: 1.0,
            center: 0,
            absolute: false,
            plateau: None,
        })
    }

    pub fn stretched(mut self, beta: f64) -> Self {
        self.beta = beta;
        self
    }

    pub fn centered(mut self, center: i64) -> Self {
        self.center = center;
        self
    }

    pub fn absolute(mut self) -> Self {
        self.absolute = true;
        self
    }

    pub fn with_plateau(mut self, plateau: i64) -> Self {
        self.plateau = Some(plateau);
        self
    }

    /// Argument `βκ(x - c)` of `Ψ_n`.
    pub fn argument(&self, x: i64) -> f64 {
        let mut t = x - self.center;
        if let Some(p) = self.plateau {
            t = t.clamp(-p, p);
        }
        self.beta * self.kappa * t as f64
    }

    pub fn eval(&self, x: i64) -> f64 {
        let v = weighted_eval(self.degree, self.argument(x));
        if self.absolute {
            v.abs()
        } else {
            v
        }
    }

    pub fn sample(&self, lattice: &LatticeBox) -> Vec<f64> {
        debug_assert_eq!(lattice.dim(), 1);
        let lo = lattice.lower()[0];
        (0..lattice.size()).map(|i| self.eval(lo + i as i64)).collect()
    }
}

/// Radius `⌈(√(2n+1) + 8)/κ⌉` holding all but a negligible tail of `ψ_n`.
pub fn default_radius(n: usize, kappa: f64) -> i64 {
    ((((2 * n + 1) as f64).sqrt() + 8.0) / kappa).ceil() as i64
}

/// `Σ_{x ∉ box} |f(x)|` for a superexponentially decaying `f` centred at 0.
fn tail_sum(f: impl Fn(i64) -> f64, lo: i64, hi: i64, reach: i64) -> f64 {
    let right: f64 = ((hi + 1)..=reach.max(hi + 1)).map(|x| f(x).abs()).sum();
    let left: f64 = ((-reach).min(lo - 1)..lo).map(|x| f(x).abs()).sum();
    left + right
}

fn tail_reach(n: usize, kappa: f64) -> i64 {
    ((((2 * n + 1) as f64).sqrt() + 40.0) / kappa).ceil() as i64
}

fn check_interval(lattice: &LatticeBox) -> Result<(i64, i64)> {
    if lattice.dim() != 1 {
        return invalid("Hermite test functions live on one-dimensional boxes");
    }
    Ok((lattice.lower()[0], lattice.upper()[0]))
}

/// Samples `ψ_n` on `lattice` and returns it with the pointwise residual
/// `(Δ + v_κ)ψ_n - κ²(2n+1)ψ_n`, the Laplacian taken on all of `Z`.
pub fn quasimode_apply(n: usize, kappa: f64, lattice: &LatticeBox) -> Result<(Vec<f64>, Vec<f64>)> {
    let psi = TestFunction::new(n, kappa)?;
    let (lo, hi) = check_interval(lattice)?;
    let norm2: f64 = (-tail_reach(n, kappa)..=tail_reach(n, kappa))
        .map(|x| psi.eval(x).powi(2))
        .sum();
    let tail = tail_sum(|x| psi.eval(x).powi(2), lo, hi, tail_reach(n, kappa));
    if tail.sqrt() > 1e-12 * norm2.sqrt() {
        return Err(Error::BoxTooSmall(format!(
            "tail of psi_{n} outside [{lo}, {hi}] is {:.3e} of its norm",
            (tail / norm2).sqrt()
        )));
    }
    let values = psi.sample(lattice);
    let k2 = kappa * kappa;
    let k4 = k2 * k2;
    let energy = k2 * (2 * n + 1) as f64;
    let residual = (lo..=hi)
        .zip(&values)
        .map(|(x, &v)| {
            let lap = 2.0 * v - psi.eval(x + 1) - psi.eval(x - 1);
            let xf = x as f64;
            lap + k4 * xf * xf * v - energy * v
        })
        .collect();
    Ok((values, residual))
}

/// Taylor remainder `R(x, κ)` with `(Δ + v_κ)ψ_n(x) = κ²(2n+1)ψ_n(x) - R(x, κ)`:
///
/// `R = ∫_0^κ (κ-t)³/3! [Ψ_n⁽⁴⁾(κx+t) + Ψ_n⁽⁴⁾(κx-t)] dt`.
pub fn residual_integral(n: usize, kappa: f64, x: i64) -> Result<f64> {
    if !(kappa > 0.0 && kappa.is_finite()) {
        return invalid(format!("kappa must be positive, got {kappa}"));
    }
    let y = kappa * x as f64;
    let expansion = derivative_expansion(n, 4);
    let d4 = |s: f64| -> f64 {
        expansion
            .iter()
            .map(|(k, c)| c * weighted_eval(*k, s))
            .sum()
    };
    let quad = AdaptiveGaussLegendre::default();
    quad.integrate(
        |t| (kappa - t).powi(3) / 6.0 * (d4(y + t) + d4(y - t)),
        0.0,
        kappa,
    )
}

/// One-sided remainder `∫_0^κ (κ-t)³/3! Ψ_n⁽⁴⁾(y-t) dt` of the third-order
/// Taylor expansion of `Ψ_n(y - κ)` about `y`.
pub fn one_sided_remainder(n: usize, kappa: f64, y: f64) -> Result<f64> {
    let expansion = derivative_expansion(n, 4);
    let quad = AdaptiveGaussLegendre::default();
    quad.integrate(
        |t| {
            let d4: f64 = expansion
                .iter()
                .map(|(k, c)| c * weighted_eval(*k, y - t))
                .sum();
            (kappa - t).powi(3) / 6.0 * d4
        },
        0.0,
        kappa,
    )
}

/// `Ψ_n(y - κ) - [Ψ_n - κΨ_n' + κ²/2 Ψ_n'' - κ³/6 Ψ_n'''](y)`.
pub fn one_sided_taylor_defect(n: usize, kappa: f64, y: f64) -> f64 {
    let d = |k: usize| weighted_derivative(n, k, y);
    weighted_eval(n, y - kappa)
        - (d(0) - kappa * d(1) + kappa * kappa / 2.0 * d(2) - kappa.powi(3) / 6.0 * d(3))
}

/// `Σ_{x ∈ box} ψ_n(x) ψ_m(x)`.
pub fn gram_entry(n: usize, m: usize, kappa: f64, lattice: &LatticeBox) -> Result<f64> {
    let a = TestFunction::new(n, kappa)?;
    let b = TestFunction::new(m, kappa)?;
    let (lo, hi) = check_interval(lattice)?;
    let reach = tail_reach(n.max(m), kappa);
    let scale = (gram_norm2(n, kappa) * gram_norm2(m, kappa)).sqrt();
    let tail = tail_sum(|x| a.eval(x) * b.eval(x), lo, hi, reach);
    if tail > 1e-14 * scale {
        return Err(Error::BoxTooSmall(format!(
            "tail of psi_{n} psi_{m} outside [{lo}, {hi}] is {:.3e} of the scale",
            tail / scale
        )));
    }
    let g = |x: i64| a.eval(x) * b.eval(x);
    // mirror pairs first so that odd products cancel exactly on symmetric boxes
    let terms: Vec<f64> = if lo <= 0 && 0 <= hi {
        let half = (-lo).min(hi);
        std::iter::once(g(0))
            .chain((1..=half).map(|x| g(x) + g(-x)))
            .chain((lo..=hi).filter(|x| x.abs() > half).map(g))
            .collect()
    } else {
        (lo..=hi).map(g).collect()
    };
    Ok(compensated_sum(terms))
}

/// Continuum normalization `√π 2ⁿ n! / κ`.
pub fn gram_norm2(n: usize, kappa: f64) -> f64 {
    let fact: f64 = (1..=n).map(|k| k as f64).product();
    std::f64::consts::PI.sqrt() * 2f64.powi(n as i32) * fact / kappa
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        assert_eq!(hermite_eval(0, 3.7).unwrap(), 1.0);
        assert_eq!(hermite_eval(2, 1.0).unwrap(), 2.0);
        assert_eq!(hermite_eval(3, 1.0).unwrap(), -4.0);
        assert!(matches!(hermite_eval(400, 1e3), Err(Error::Overflow(_))));
        assert_eq!(weighted_eval(0, 0.0), 1.0);
        assert!((weighted_eval(2, 1.0) - 2.0 * (-0.5f64).exp()).abs() < 1e-15);
        let far = weighted_eval(1, 100.0);
        assert!(far.is_finite() && far.abs() < 1e-300);
        assert!(weighted_eval(64, 1e4).is_finite());
    }

    #[test]
    fn small_zero_sets() {
        assert_eq!(hermite_zeros(1).unwrap(), vec![0.0]);
        let z2 = hermite_zeros(2).unwrap();
        assert!((z2[1] - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        let z3 = hermite_zeros(3).unwrap();
        assert!((z3[2] - 1.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(z3[1], 0.0);
    }

    #[test]
    fn zeros_are_roots_and_interlace() {
        let basis = HermiteBasis::new(40).unwrap();
        for n in 1..40 {
            assert!(basis.interlaces(n), "n={n}");
        }
        for n in 1..=40 {
            for &z in basis.zeros(n) {
                let h = hermite_eval(n, z).unwrap();
                let dh = 2.0 * n as f64 * hermite_eval(n - 1, z).unwrap();
                assert!(h.abs() <= 1e-10 * dh.abs().max(1.0), "n={n} z={z}");
            }
        }
    }

    #[test]
    fn derivative_ladder_matches_finite_difference() {
        let h = 1e-4;
        for n in 0..5 {
            for y in [-1.3, 0.0, 0.4, 2.2] {
                let fd = (weighted_eval(n, y + h) - weighted_eval(n, y - h)) / (2.0 * h);
                let d = weighted_derivative(n, 1, y);
                assert!((fd - d).abs() < 1e-6 * (1.0 + d.abs()));
            }
        }
    }

    #[test]
    fn ground_state_residual_at_origin() {
        let kappa: f64 = 0.1;
        let b = LatticeBox::symmetric(1, default_radius(0, kappa)).unwrap();
        let (_, r) = quasimode_apply(0, kappa, &b).unwrap();
        let want = 2.0 - 2.0 * (-kappa * kappa / 2.0).exp() - kappa * kappa;
        let mid = b.index_of(&[0]).unwrap();
        assert!((r[mid] - want).abs() < 1e-15);
        assert!(matches!(
            quasimode_apply(0, kappa, &LatticeBox::symmetric(1, 20).unwrap()),
            Err(Error::BoxTooSmall(_))
        ));
    }

    #[test]
    fn residual_integral_matches_assembly() {
        for n in 0..4 {
            let kappa = 0.1;
            let b = LatticeBox::symmetric(1, default_radius(n, kappa)).unwrap();
            let (_, r) = quasimode_apply(n, kappa, &b).unwrap();
            for x in [0i64, 3, -7, 15, 31] {
                let i = b.index_of(&[x]).unwrap();
                let integral = residual_integral(n, kappa, x).unwrap();
                assert!((integral + r[i]).abs() < 1e-12, "n={n} x={x}");
            }
        }
    }

    #[test]
    fn one_sided_identity() {
        for n in 0..3 {
            for y in [0.0, 0.3, -1.1] {
                let q = one_sided_remainder(n, 0.1, y).unwrap();
                assert!((q - one_sided_taylor_defect(n, 0.1, y)).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn gram_parity_and_scale() {
        let kappa = 0.1;
        let b = LatticeBox::symmetric(1, default_radius(1, kappa)).unwrap();
        assert_eq!(gram_entry(0, 1, kappa, &b).unwrap(), 0.0);
        let g = gram_entry(0, 0, kappa, &b).unwrap();
        assert!((g - gram_norm2(0, kappa)).abs() < 1e-10);
    }

    #[test]
    fn test_function_variants() {
        let f = TestFunction::new(2, 0.1).unwrap().stretched(1.5).centered(3).absolute();
        assert!(f.eval(0) >= 0.0);
        assert_eq!(f.argument(3), 0.0);
        let p = TestFunction::new(1, 0.1).unwrap().with_plateau(10);
        assert_eq!(p.eval(25), p.eval(10));
        assert_eq!(p.eval(-25), p.eval(-10));
    }
}
