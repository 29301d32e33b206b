use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashSet};

use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, PartialEq)]
struct State {
    value: f64,
    index: Vec<usize>,
}

impl Eq for State {}

impl Ord for State {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value
            .total_cmp(&other.value)
            .then_with(|| self.index.cmp(&other.index))
    }
}

impl PartialOrd for State {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The `k` smallest sums `Σ_axes λ^{(axis)}_{i_axis}` with their
/// multi-indices; ties ordered lexicographically by multi-index.
pub fn eigs_separable_indexed(axis_spectra: &[Vec<f64>], k: usize) -> Result<Vec<(f64, Vec<usize>)>> {
    if axis_spectra.is_empty() {
        return invalid("at least one axis spectrum is required");
    }
    for s in axis_spectra {
        if s.windows(2).any(|w| w[1] < w[0]) {
            return invalid("axis spectra must be sorted ascending");
        }
    }
    let available = axis_spectra
        .iter()
        .map(Vec::len)
        .try_fold(1usize, |acc, l| acc.checked_mul(l))
        .unwrap_or(usize::MAX);
    if available < k {
        return Err(Error::Exhausted {
            requested: k,
            available,
        });
    }
    let value = |idx: &[usize]| -> f64 {
        idx.iter()
            .zip(axis_spectra)
            .map(|(&i, s)| s[i])
            .sum()
    };
    let mut heap = BinaryHeap::new();
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let origin = vec![0; axis_spectra.len()];
    seen.insert(origin.clone());
    heap.push(Reverse(State {
        value: value(&origin),
        index: origin,
    }));
    let mut out = Vec::with_capacity(k);
    while out.len() < k {
        let Reverse(state) = heap.pop().expect("enough combinations remain");
        for axis in 0..state.index.len() {
            if state.index[axis] + 1 < axis_spectra[axis].len() {
                let mut next = state.index.clone();
                next[axis] += 1;
                if seen.insert(next.clone()) {
                    heap.push(Reverse(State {
                        value: value(&next),
                        index: next,
                    }));
                }
            }
        }
        out.push((state.value, state.index));
    }
    Ok(out)
}

/// Values only, see [`eigs_separable_indexed`].
pub fn eigs_separable(axis_spectra: &[Vec<f64>], k: usize) -> Result<Vec<f64>> {
    Ok(eigs_separable_indexed(axis_spectra, k)?
        .into_iter()
        .map(|(v, _)| v)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_grid() {
        let v = eigs_separable(&[vec![1.0, 3.0], vec![1.0, 3.0]], 3).unwrap();
        assert_eq!(v, vec![2.0, 4.0, 4.0]);
        let idx = eigs_separable_indexed(&[vec![1.0, 3.0], vec![1.0, 3.0]], 3).unwrap();
        assert_eq!(idx[1].1, vec![0, 1]);
        assert_eq!(idx[2].1, vec![1, 0]);
    }

    #[test]
    fn single_axis_is_identity() {
        let s = vec![0.5, 1.5, 2.5];
        assert_eq!(eigs_separable(std::slice::from_ref(&s), 3).unwrap(), s);
    }

    #[test]
    fn exhausted() {
        assert!(matches!(
            eigs_separable(&[vec![1.0], vec![1.0, 2.0]], 3),
            Err(Error::Exhausted { requested: 3, available: 2 })
        ));
    }

    proptest! {
        #[test]
        fn matches_sorted_brute_force(
            a in proptest::collection::vec(0.0f64..10.0, 1..8),
            b in proptest::collection::vec(0.0f64..10.0, 1..8),
        ) {
            let mut a = a; a.sort_by(f64::total_cmp);
            let mut b = b; b.sort_by(f64::total_cmp);
            let mut all: Vec<f64> = a.iter().flat_map(|x| b.iter().map(move |y| x + y)).collect();
            all.sort_by(f64::total_cmp);
            let got = eigs_separable(&[a, b], all.len()).unwrap();
            prop_assert_eq!(got, all);
        }
    }
}
