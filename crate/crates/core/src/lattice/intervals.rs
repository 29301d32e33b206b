use std::collections::BTreeSet;

use serde::Serialize;

use super::LatticeBox;
use crate::error::{invalid, Error, Result};
use crate::hermite::hermite_zeros;

/// One nodal interval `I_j = [lo, hi] ∩ Z`, `None` meaning unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NodalInterval {
    pub index: i64,
    pub lo: Option<i64>,
    pub hi: Option<i64>,
    /// Stretch `β_j` of the interval test function `|ψ_n(β_j x)|`.
    pub beta: f64,
}

impl NodalInterval {
    pub fn is_bounded(&self) -> bool {
        self.lo.is_some() && self.hi.is_some()
    }

    /// Intersection with `[-cap, cap]`, `None` when empty.
    pub fn truncate(&self, cap: i64) -> Option<LatticeBox> {
        let lo = self.lo.unwrap_or(-cap).max(-cap);
        let hi = self.hi.unwrap_or(cap).min(cap);
        LatticeBox::interval(lo, hi).ok()
    }
}

/// Partition of `Z` into intervals between consecutive (rescaled) Hermite
/// zeros plus the excluded points next to each zero.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntervalDecomposition {
    n: usize,
    kappa: f64,
    zeros: Vec<f64>,
    a: Vec<i64>,
    b: Vec<Option<i64>>,
    beta: Vec<f64>,
    intervals: Vec<NodalInterval>,
    excluded: Vec<i64>,
}

impl IntervalDecomposition {
    /// Build the decomposition for degree `n` and scale `κ`.
    ///
    /// For odd `n` the zero `z_1 = 0` gives `a_1 = 1`, `β_1 = 1` and the single
    /// excluded point `0`. For `n = 0` the whole line is one interval.
    pub fn build(n: usize, kappa: f64) -> Result<Self> {
        if !(kappa > 0.0 && kappa.is_finite()) {
            return invalid(format!("kappa must be positive, got {kappa}"));
        }
        if n == 0 {
            return Ok(Self {
                n,
                kappa,
                zeros: Vec::new(),
                a: Vec::new(),
                b: Vec::new(),
                beta: Vec::new(),
                intervals: vec![NodalInterval {
                    index: 0,
                    lo: None,
                    hi: None,
                    beta: 1.0,
                }],
                excluded: Vec::new(),
            });
        }
        let all = hermite_zeros(n)?;
        // nonnegative zeros; the middle one of an odd degree is exactly 0
        let zeros: Vec<f64> = if n % 2 == 1 {
            std::iter::once(0.0).chain(all[n / 2 + 1..].iter().copied()).collect()
        } else {
            all[n / 2..].to_vec()
        };
        let k = zeros.len();

        let mut a = Vec::with_capacity(k);
        let mut beta = Vec::with_capacity(k);
        for j in 0..k {
            let z = zeros[j];
            let aj = if z == 0.0 {
                1
            } else if j == 0 {
                (z / kappa).floor() as i64 + 1
            } else if zeros[j - 1] == 0.0 {
                // β_{j-1} = 1
                (z / kappa).floor() as i64 + 1
            } else {
                // z_j / (β_{j-1} κ) = z_j (a_{j-1} - 1) / z_{j-1}, free of κ rounding
                (z * (a[j - 1] - 1) as f64 / zeros[j - 1]).floor() as i64 + 1
            };
            if z > 0.0 && aj - 1 <= 0 {
                return Err(Error::DegenerateDecomposition(format!(
                    "kappa = {kappa} exceeds zero z_{} = {z} of h_{n}",
                    j + 1
                )));
            }
            let bj = if z == 0.0 { 1.0 } else { z / (kappa * (aj - 1) as f64) };
            a.push(aj);
            beta.push(bj);
        }
        // b_j = ⌊z_{j+1}/(β_j κ)⌋ - 1 = a_{j+1} - 2
        let b: Vec<Option<i64>> = (0..k)
            .map(|j| (j + 1 < k).then(|| a[j + 1] - 2))
            .collect();
        for j in 0..k {
            if let Some(bj) = b[j] {
                if bj < a[j] {
                    return Err(Error::DegenerateDecomposition(format!(
                        "interval I_{} = [{}, {bj}] is empty at kappa = {kappa}",
                        j + 1,
                        a[j]
                    )));
                }
            }
        }

        let mut intervals = Vec::with_capacity(2 * k + 1);
        for j in (0..k).rev() {
            intervals.push(NodalInterval {
                index: -(j as i64 + 1),
                lo: b[j].map(|v| -v),
                hi: Some(-a[j]),
                beta: beta[j],
            });
        }
        if zeros[0] > 0.0 {
            let b0 = a[0] - 2;
            intervals.push(NodalInterval {
                index: 0,
                lo: Some(-b0),
                hi: Some(b0),
                beta: beta[0],
            });
        }
        for j in 0..k {
            intervals.push(NodalInterval {
                index: j as i64 + 1,
                lo: Some(a[j]),
                hi: b[j],
                beta: beta[j],
            });
        }

        let mut excluded: BTreeSet<i64> = BTreeSet::new();
        for &aj in &a {
            excluded.insert(aj - 1);
            excluded.insert(-(aj - 1));
        }

        Ok(Self {
            n,
            kappa,
            zeros,
            a,
            b,
            beta,
            intervals,
            excluded: excluded.into_iter().collect(),
        })
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// Nonnegative zeros `z_1 < … < z_k`.
    pub fn zeros(&self) -> &[f64] {
        &self.zeros
    }

    pub fn k(&self) -> usize {
        self.zeros.len()
    }

    pub fn starts(&self) -> &[i64] {
        &self.a
    }

    /// Right ends `b_1..b_k`; the last is `None` (infinite).
    pub fn ends(&self) -> &[Option<i64>] {
        &self.b
    }

    pub fn betas(&self) -> &[f64] {
        &self.beta
    }

    /// All intervals ordered by index `-k..=k`.
    pub fn intervals(&self) -> &[NodalInterval] {
        &self.intervals
    }

    pub fn interval(&self, index: i64) -> Option<&NodalInterval> {
        self.intervals.iter().find(|iv| iv.index == index)
    }

    /// Sorted excluded points.
    pub fn excluded(&self) -> &[i64] {
        &self.excluded
    }

    /// `|β_j κ (a_j - 1) - z_j|` for every `j` with `z_j > 0`.
    pub fn anchoring_errors(&self) -> Vec<f64> {
        self.zeros
            .iter()
            .zip(&self.a)
            .zip(&self.beta)
            .filter(|((z, _), _)| **z > 0.0)
            .map(|((z, a), b)| (b * self.kappa * (a - 1) as f64 - z).abs())
            .collect()
    }

    /// Smallest truncation radius with `κ⁴M² ≥ 4κ²(2n+1)` that also keeps
    /// every interval nonempty and every bounded interval whole.
    pub fn minimal_cap(&self) -> i64 {
        let wall = (2.0 * ((2 * self.n + 1) as f64).sqrt() / self.kappa).ceil() as i64;
        let reach = self
            .a
            .iter()
            .copied()
            .chain(self.b.iter().flatten().map(|b| b + 1))
            .max()
            .unwrap_or(0);
        wall.max(reach)
    }

    /// Intervals truncated to `[-cap, cap]`, with their indices and stretches.
    pub fn truncated(&self, cap: i64) -> Result<Vec<(NodalInterval, LatticeBox)>> {
        if cap < self.minimal_cap() {
            return Err(Error::BoxTooSmall(format!(
                "cap {cap} below the minimal decomposition cap {}",
                self.minimal_cap()
            )));
        }
        Ok(self
            .intervals
            .iter()
            .filter_map(|iv| iv.truncate(cap).map(|b| (*iv, b)))
            .collect())
    }

    /// Exact set identity: truncated intervals and excluded points tile
    /// `[-cap, cap] ∩ Z` with no overlap.
    pub fn covers(&self, cap: i64) -> bool {
        let Ok(parts) = self.truncated(cap) else {
            return false;
        };
        let mut seen = vec![0u32; (2 * cap + 1) as usize];
        let slot = |x: i64| (x + cap) as usize;
        for (_, b) in &parts {
            for x in b.lower()[0]..=b.upper()[0] {
                seen[slot(x)] += 1;
            }
        }
        for &x in &self.excluded {
            if x.abs() > cap {
                return false;
            }
            seen[slot(x)] += 1;
        }
        seen.iter().all(|&c| c == 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_three_example() {
        let d = IntervalDecomposition::build(3, 0.1).unwrap();
        assert_eq!(d.starts(), &[1, 13]);
        assert_eq!(d.ends(), &[Some(11), None]);
        assert_eq!(d.betas()[0], 1.0);
        assert!((d.betas()[1] - 1.0206207261596576).abs() < 1e-12);
        assert_eq!(d.excluded(), &[-12, 0, 12]);
        assert!(d.interval(0).is_none());
    }

    #[test]
    fn degree_two_example() {
        let d = IntervalDecomposition::build(2, 0.1).unwrap();
        assert_eq!(d.starts(), &[8]);
        assert!((d.betas()[0] - 1.0101525445522108).abs() < 1e-12);
        let i0 = d.interval(0).unwrap();
        assert_eq!((i0.lo, i0.hi), (Some(-6), Some(6)));
        assert_eq!(d.excluded(), &[-7, 7]);
        assert!(d.covers(d.minimal_cap()));
    }

    #[test]
    fn degree_one_excludes_origin() {
        let d = IntervalDecomposition::build(1, 0.05).unwrap();
        assert_eq!(d.excluded(), &[0]);
        assert_eq!(d.intervals().len(), 2);
        assert!(d.covers(100));
    }

    #[test]
    fn ground_state_is_whole_line() {
        let d = IntervalDecomposition::build(0, 0.3).unwrap();
        assert!(d.excluded().is_empty());
        assert_eq!(d.intervals().len(), 1);
        assert!(d.covers(50));
    }

    #[test]
    fn large_kappa_is_degenerate() {
        assert!(matches!(
            IntervalDecomposition::build(2, 1.0),
            Err(Error::DegenerateDecomposition(_))
        ));
    }

    #[test]
    fn cover_and_anchoring_over_sweep() {
        for n in 1..=8 {
            for kappa in [0.2, 0.1, 0.05, 0.025] {
                let d = IntervalDecomposition::build(n, kappa).unwrap();
                let cap = d.minimal_cap();
                assert!(d.covers(cap) && d.covers(cap + 17), "n={n} kappa={kappa}");
                for (e, z) in d.anchoring_errors().iter().zip(d.zeros().iter().filter(|z| **z > 0.0)) {
                    assert!(*e <= 1e-13 * z.max(1.0), "n={n} kappa={kappa} err={e}");
                }
                assert!(d.betas().iter().all(|b| *b >= 1.0));
            }
        }
    }
}
