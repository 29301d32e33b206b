use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashSet};

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::potentials::Potential;

/// `½ Σ_i ω_i (2n_i + 1)`, summed in axis order.
pub fn sigma_value(frequencies: &[f64], multi_index: &[usize]) -> f64 {
    0.5 * frequencies
        .iter()
        .zip(multi_index)
        .map(|(w, n)| w * (2 * n + 1) as f64)
        .sum::<f64>()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SigmaEntry {
    pub value: f64,
    pub well: usize,
    pub multi_index: Vec<usize>,
}

/// The first values `e_0(V) ≤ e_1(V) ≤ …` of the limit spectrum with
/// their provenance.
#[derive(Debug, Clone, Serialize)]
pub struct SigmaSequence {
    pub potential: String,
    pub entries: Vec<SigmaEntry>,
}

impl SigmaSequence {
    pub fn values(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.value).collect()
    }

    pub fn get(&self, n: usize) -> Option<f64> {
        self.entries.get(n).map(|e| e.value)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Debug, PartialEq)]
struct State {
    value: f64,
    well: usize,
    index: Vec<usize>,
}

impl Eq for State {}

impl Ord for State {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value
            .total_cmp(&other.value)
            .then(self.well.cmp(&other.well))
            .then_with(|| self.index.cmp(&other.index))
    }
}

impl PartialOrd for State {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Best-first enumeration of `Σ(V)` across all wells. Ties are ordered by
/// well index, then lexicographically by multi-index.
pub fn sigma_enumerate(potential: &Potential, count: usize) -> Result<SigmaSequence> {
    if count == 0 {
        return invalid("count must be at least 1");
    }
    let wells = potential.wells();
    if wells.is_empty() {
        return invalid(format!("potential '{}' has no registered wells", potential.name()));
    }
    let mut heap = BinaryHeap::new();
    let mut seen: HashSet<(usize, Vec<usize>)> = HashSet::new();
    for (l, w) in wells.iter().enumerate() {
        let index = vec![0; w.frequencies().len()];
        seen.insert((l, index.clone()));
        heap.push(Reverse(State {
            value: sigma_value(w.frequencies(), &index),
            well: l,
            index,
        }));
    }
    let mut entries = Vec::with_capacity(count);
    while entries.len() < count {
        let Reverse(s) = heap.pop().expect("the limit spectrum is infinite");
        let freqs = wells[s.well].frequencies();
        for axis in 0..s.index.len() {
            let mut next = s.index.clone();
            next[axis] += 1;
            if seen.insert((s.well, next.clone())) {
                heap.push(Reverse(State {
                    value: sigma_value(freqs, &next),
                    well: s.well,
                    index: next,
                }));
            }
        }
        entries.push(SigmaEntry {
            value: s.value,
            well: s.well,
            multi_index: s.index,
        });
    }
    Ok(SigmaSequence {
        potential: potential.name().to_string(),
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_one_dimensional() {
        let s = sigma_enumerate(&Potential::harmonic(&[1.0]).unwrap(), 4).unwrap();
        assert_eq!(s.values(), vec![0.5, 1.5, 2.5, 3.5]);
    }

    #[test]
    fn harmonic_two_dimensional() {
        let s = sigma_enumerate(&Potential::harmonic(&[1.0, 1.0]).unwrap(), 7).unwrap();
        assert_eq!(s.values(), vec![1.0, 2.0, 2.0, 3.0, 3.0, 3.0, 4.0]);
        assert_eq!(s.entries[1].multi_index, vec![0, 1]);
        assert_eq!(s.entries[2].multi_index, vec![1, 0]);
    }

    #[test]
    fn double_well_doubles_levels() {
        let s = sigma_enumerate(&Potential::double_well(), 6).unwrap();
        let v = s.values();
        for (a, b) in v.iter().zip([1.0, 1.0, 3.0, 3.0, 5.0, 5.0]) {
            assert!((a - b).abs() < 1e-13);
        }
        assert_eq!((s.entries[0].well, s.entries[1].well), (0, 1));
    }

    #[test]
    fn zero_count_rejected() {
        assert!(sigma_enumerate(&Potential::double_well(), 0).is_err());
    }
}
