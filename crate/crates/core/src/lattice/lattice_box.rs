use crate::error::{invalid, Result};

/// A finite window `Π_i [lo_i, hi_i] ∩ Z^d` with a row-major index map
/// (last axis fastest).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticeBox {
    lo: Vec<i64>,
    hi: Vec<i64>,
    strides: Vec<usize>,
    size: usize,
}

impl LatticeBox {
    pub fn new(lo: Vec<i64>, hi: Vec<i64>) -> Result<Self> {
        if lo.is_empty() || lo.len() != hi.len() {
            return invalid("box bounds must have equal, positive dimension");
        }
        if lo.iter().zip(&hi).any(|(a, b)| a > b) {
            return invalid(format!("empty box {lo:?}..={hi:?}"));
        }
        let d = lo.len();
        let mut strides = vec![1usize; d];
        for axis in (0..d.saturating_sub(1)).rev() {
            strides[axis] = strides[axis + 1] * (hi[axis + 1] - lo[axis + 1] + 1) as usize;
        }
        let size = strides[0] * (hi[0] - lo[0] + 1) as usize;
        Ok(Self {
            lo,
            hi,
            strides,
            size,
        })
    }

    /// `[-M, M]^d`.
    pub fn symmetric(dim: usize, half_width: i64) -> Result<Self> {
        if half_width < 0 {
            return invalid("half-width must be nonnegative");
        }
        Self::new(vec![-half_width; dim], vec![half_width; dim])
    }

    /// One-dimensional interval `[lo, hi] ∩ Z`.
    pub fn interval(lo: i64, hi: i64) -> Result<Self> {
        Self::new(vec![lo], vec![hi])
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn lower(&self) -> &[i64] {
        &self.lo
    }

    pub fn upper(&self) -> &[i64] {
        &self.hi
    }

    pub fn extent(&self, axis: usize) -> usize {
        (self.hi[axis] - self.lo[axis] + 1) as usize
    }

    /// Symmetric under `x ↦ -x`.
    pub fn is_symmetric(&self) -> bool {
        self.lo.iter().zip(&self.hi).all(|(a, b)| *a == -*b)
    }

    pub fn contains(&self, point: &[i64]) -> bool {
        point.len() == self.dim()
            && point
                .iter()
                .zip(self.lo.iter().zip(&self.hi))
                .all(|(p, (a, b))| a <= p && p <= b)
    }

    pub fn index_of(&self, point: &[i64]) -> Option<usize> {
        if !self.contains(point) {
            return None;
        }
        Some(
            point
                .iter()
                .zip(&self.lo)
                .zip(&self.strides)
                .map(|((p, a), s)| (p - a) as usize * s)
                .sum(),
        )
    }

    pub fn point(&self, index: usize) -> Vec<i64> {
        debug_assert!(index < self.size);
        let mut rem = index;
        self.lo
            .iter()
            .zip(&self.strides)
            .map(|(a, s)| {
                let c = rem / s;
                rem %= s;
                a + c as i64
            })
            .collect()
    }

    /// Coordinate of `index` along `axis`.
    pub fn coordinate(&self, index: usize, axis: usize) -> i64 {
        self.lo[axis] + ((index / self.strides[axis]) % self.extent(axis)) as i64
    }

    /// Indices of the nearest neighbours of `index` that lie inside the box.
    pub fn neighbors(&self, index: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.dim()).flat_map(move |axis| {
            let c = self.coordinate(index, axis);
            let s = self.strides[axis];
            let down = (c > self.lo[axis]).then(|| index - s);
            let up = (c < self.hi[axis]).then(|| index + s);
            down.into_iter().chain(up)
        })
    }

    /// Number of the `2d` lattice neighbours that fall outside the box.
    pub fn dropped_neighbors(&self, index: usize) -> usize {
        2 * self.dim() - self.neighbors(index).count()
    }

    /// Index of the mirror point `-x`; requires a symmetric box.
    pub fn mirror(&self, index: usize) -> usize {
        debug_assert!(self.is_symmetric());
        self.size - 1 - index
    }

    pub fn is_subbox_of(&self, other: &LatticeBox) -> bool {
        self.dim() == other.dim()
            && self
                .lo
                .iter()
                .zip(&other.lo)
                .all(|(a, b)| a >= b)
            && self.hi.iter().zip(&other.hi).all(|(a, b)| a <= b)
    }

    pub fn intersect(&self, other: &LatticeBox) -> Option<LatticeBox> {
        if self.dim() != other.dim() {
            return None;
        }
        let lo: Vec<i64> = self.lo.iter().zip(&other.lo).map(|(a, b)| *a.max(b)).collect();
        let hi: Vec<i64> = self.hi.iter().zip(&other.hi).map(|(a, b)| *a.min(b)).collect();
        LatticeBox::new(lo, hi).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sizes_and_strides() {
        let b = LatticeBox::new(vec![-1, 0, 2], vec![1, 3, 2]).unwrap();
        assert_eq!(b.size(), 3 * 4 * 1);
        assert_eq!(b.index_of(&[-1, 0, 2]), Some(0));
        assert_eq!(b.index_of(&[1, 3, 2]), Some(11));
        assert_eq!(b.index_of(&[2, 0, 2]), None);
        assert!(LatticeBox::interval(3, 2).is_err());
    }

    #[test]
    fn neighbors_respect_boundary() {
        let b = LatticeBox::symmetric(2, 1).unwrap();
        let center = b.index_of(&[0, 0]).unwrap();
        assert_eq!(b.neighbors(center).count(), 4);
        let corner = b.index_of(&[1, 1]).unwrap();
        assert_eq!(b.dropped_neighbors(corner), 2);
    }

    #[test]
    fn mirror_maps_to_negated_point() {
        let b = LatticeBox::symmetric(2, 3).unwrap();
        for i in 0..b.size() {
            let p = b.point(i);
            let q: Vec<i64> = p.iter().map(|v| -v).collect();
            assert_eq!(b.index_of(&q), Some(b.mirror(i)));
        }
    }

    proptest! {
        #[test]
        fn index_map_round_trips(lo in proptest::collection::vec(-5i64..5, 1..4), ext in proptest::collection::vec(1i64..5, 3)) {
            let hi: Vec<i64> = lo.iter().zip(&ext).map(|(a, e)| a + e - 1).collect();
            let b = LatticeBox::new(lo.clone(), hi).unwrap();
            let expected: usize = ext.iter().take(lo.len()).map(|e| *e as usize).product();
            prop_assert_eq!(b.size(), expected);
            for i in 0..b.size() {
                prop_assert_eq!(b.index_of(&b.point(i)), Some(i));
                for axis in 0..b.dim() {
                    prop_assert_eq!(b.coordinate(i, axis), b.point(i)[axis]);
                }
            }
        }
    }
}
