//! Dense mixed-radix boxes `[0, d_0) × … × [0, d_{k-1})`, last coordinate fastest.

/// Largest number of points any dense table may hold.
pub const MAX_TABLE_POINTS: u128 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Grid {
    dims: Vec<u64>,
    strides: Vec<usize>,
    len: usize,
}

impl Grid {
    /// Panics if the box holds more than `usize::MAX` points; callers check
    /// [`Grid::count`] against [`MAX_TABLE_POINTS`] first.
    pub fn new(dims: &[u64]) -> Self {
        let mut strides = vec![0; dims.len()];
        let mut acc = 1usize;
        for i in (0..dims.len()).rev() {
            strides[i] = acc;
            acc = acc
                .checked_mul(usize::try_from(dims[i]).expect("dimension fits usize"))
                .expect("grid too large");
        }
        Grid {
            dims: dims.to_vec(),
            strides,
            len: acc,
        }
    }

    /// Number of points, without overflow.
    pub fn count(dims: &[u64]) -> u128 {
        dims.iter()
            .try_fold(1u128, |acc, &d| acc.checked_mul(u128::from(d)))
            .unwrap_or(u128::MAX)
    }

    pub fn dims(&self) -> &[u64] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn stride(&self, coord: usize) -> usize {
        self.strides[coord]
    }

    pub fn index(&self, x: &[u64]) -> usize {
        debug_assert_eq!(x.len(), self.dims.len());
        x.iter()
            .zip(&self.strides)
            .map(|(&xi, &s)| xi as usize * s)
            .sum()
    }

    pub fn point(&self, mut idx: usize) -> Vec<u64> {
        let mut x = vec![0; self.dims.len()];
        for (xi, &s) in x.iter_mut().zip(&self.strides) {
            *xi = (idx / s) as u64;
            idx %= s;
        }
        x
    }

    pub fn contains(&self, x: &[u64]) -> bool {
        x.iter().zip(&self.dims).all(|(a, d)| a < d)
    }

    pub fn points(&self) -> GridIter {
        GridIter {
            dims: self.dims.clone(),
            next: if self.len == 0 {
                None
            } else {
                Some(vec![0; self.dims.len()])
            },
        }
    }
}

/// Points of a box in row-major order.
#[derive(Debug, Clone)]
pub struct GridIter {
    dims: Vec<u64>,
    next: Option<Vec<u64>>,
}

impl Iterator for GridIter {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut i = succ.len();
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            succ[i] += 1;
            if succ[i] < self.dims[i] {
                self.next = Some(succ);
                break;
            }
            succ[i] = 0;
        }
        Some(current)
    }
}

/// Points of the box `[0, hi_0] × … × [0, hi_{k-1}]` (inclusive bounds).
pub fn inclusive(hi: &[u64]) -> GridIter {
    let dims: Vec<u64> = hi.iter().map(|h| h + 1).collect();
    Grid::new(&dims).points()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_round_trip() {
        let g = Grid::new(&[3, 4, 2]);
        assert_eq!(g.len(), 24);
        for (i, p) in g.points().enumerate() {
            assert_eq!(g.index(&p), i);
            assert_eq!(g.point(i), p);
        }
    }

    #[test]
    fn zero_dimensional_box_has_one_point() {
        let g = Grid::new(&[]);
        assert_eq!(g.points().collect::<Vec<_>>(), vec![Vec::<u64>::new()]);
    }
}
