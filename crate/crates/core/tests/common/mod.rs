#![allow(dead_code)]

use lsc_core::potentials::Potential;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Eigenvalues of a symmetric tridiagonal matrix by implicit QL with
/// Wilkinson shifts, ascending. Independent of Sturm counts and of nalgebra.
pub fn ql_eigenvalues(diag: &[f64], off: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.push(0.0);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            assert!(iter < 60, "QL failed to converge");
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(f64::total_cmp);
    d
}

/// `2 - 2cos(kπ/(L+1))`, `k = 1..=L`: Dirichlet Laplacian on `L` points.
pub fn free_laplacian_eigenvalues(points: usize) -> Vec<f64> {
    let h = std::f64::consts::PI / (points + 1) as f64;
    (1..=points).map(|k| 2.0 - 2.0 * (k as f64 * h).cos()).collect()
}

/// Confining tridiagonal with spectrum in `[1, ~1e3]`: quadratic diagonal
/// plus noise, off-diagonal magnitudes at most 1.
pub fn random_confining_tridiagonal(rng: &mut impl Rng, size: usize) -> (Vec<f64>, Vec<f64>) {
    let strength: f64 = rng.gen_range(1.0..1e3);
    let center: f64 = rng.gen_range(0.0..size as f64);
    let diag = (0..size)
        .map(|i| {
            let t = (i as f64 - center) / size as f64;
            3.0 + strength * t * t + rng.gen_range(0.0..1.0)
        })
        .collect();
    let off = (1..size)
        .map(|_| {
            let m: f64 = rng.gen_range(0.05..1.0);
            if rng.gen_bool(0.8) {
                -m
            } else {
                m
            }
        })
        .collect();
    (diag, off)
}

pub type SigmaTriple = (f64, usize, Vec<usize>);

fn harmonic_level(frequencies: &[f64], index: &[usize]) -> f64 {
    let mut s = 0.0;
    for (w, n) in frequencies.iter().zip(index) {
        s += w * (2 * n + 1) as f64;
    }
    0.5 * s
}

/// Every multi-index of every well with level at most the `count`-th value
/// of the softest single-axis ladder, sorted by (value, well, multi-index).
pub fn brute_force_sigma(potential: &Potential, count: usize) -> Vec<SigmaTriple> {
    let wells = potential.wells();
    let cap = wells
        .iter()
        .map(|w| {
            let f = w.frequencies();
            let mut index = vec![0; f.len()];
            index[0] = count - 1;
            harmonic_level(f, &index)
        })
        .fold(f64::INFINITY, f64::min);
    let mut all = Vec::new();
    for (l, w) in wells.iter().enumerate() {
        let f = w.frequencies();
        let mut index = vec![0usize; f.len()];
        fill(f, &mut index, 0, cap, l, &mut all);
    }
    all.sort_by(|a, b| {
        a.0.total_cmp(&b.0)
            .then(a.1.cmp(&b.1))
            .then_with(|| a.2.cmp(&b.2))
    });
    all.truncate(count);
    all
}

fn fill(f: &[f64], index: &mut Vec<usize>, axis: usize, cap: f64, well: usize, out: &mut Vec<SigmaTriple>) {
    if axis == f.len() {
        let v = harmonic_level(f, index);
        if v <= cap {
            out.push((v, well, index.clone()));
        }
        return;
    }
    index[axis] = 0;
    loop {
        index[axis + 1..].iter_mut().for_each(|v| *v = 0);
        if harmonic_level(f, index) > cap {
            break;
        }
        fill(f, index, axis + 1, cap, well, out);
        index[axis] += 1;
    }
    index[axis] = 0;
}
