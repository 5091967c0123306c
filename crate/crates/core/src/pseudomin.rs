//! A periodic stand-in for the minimum.
//!
//! For `n ≥ 1` the function `M: Z^n → Z` is increasing, satisfies
//! `M(x + n² e_j) = M(x) + n`, and agrees with `min_j x_j` whenever all
//! coordinates of `x` lie within `n − 1` of each other. It is built from the
//! slab `K = [0, n−1]^n \ [1, n−1]^n`: on each translate `K + n²u + s·1` the
//! partial function `M̂` takes the value `n·Σu_j + s`, and `M(x)` is the
//! largest value of `M̂` at or below `x`.

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::zilep::ZilepFunction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PseudoMin {
    n: usize,
    general: bool,
}

/// `M̂(x)`, or `None` when `x` lies in no translate of `K`.
///
/// Panics if two representations disagree, which would contradict the
/// well-definedness of `M̂`.
pub fn mhat(n: usize, x: &[i64]) -> Option<i64> {
    assert_eq!(x.len(), n, "point has wrong arity");
    let n = n as i64;
    let sq = n * n;
    let mut found: Option<i64> = None;
    for s in 0..sq {
        let mut usum = 0i64;
        let mut has_zero = false;
        let mut inside = true;
        for &xj in x {
            let (u, r) = (xj - s).div_mod_floor(&sq);
            if r > n - 1 {
                inside = false;
                break;
            }
            has_zero |= r == 0;
            usum += u;
        }
        if inside && has_zero {
            let v = n * usum + s;
            if let Some(prev) = found {
                assert_eq!(prev, v, "two representations of {x:?} disagree");
            }
            found = Some(v);
        }
    }
    found
}

impl PseudoMin {
    /// Uses the closed forms `x` for `n = 1` and `⌊(x_1 + x_2)/2⌋` for `n = 2`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "pseudo-minimum needs n at least 1");
        PseudoMin { n, general: false }
    }

    /// Always uses the slab construction, even where a closed form exists.
    pub fn general(n: usize) -> Self {
        assert!(n >= 1, "pseudo-minimum needs n at least 1");
        PseudoMin { n, general: true }
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn eval(&self, x: &[i64]) -> i64 {
        assert_eq!(x.len(), self.n, "point has wrong arity");
        match (self.n, self.general) {
            (1, _) => x[0],
            (2, false) => Integer::div_floor(&(x[0] + x[1]), &2),
            _ => self.eval_slab(x),
        }
    }

    /// Each translate `K + n²u + s·1` has least element `n²u + s·1`, so the
    /// supremum runs over corners below `x`: for each residue `s` the best
    /// `u_j` is `⌊(x_j − s)/n²⌋`.
    fn eval_slab(&self, x: &[i64]) -> i64 {
        let n = self.n as i64;
        let sq = n * n;
        (0..sq)
            .map(|s| s + n * x.iter().map(|&xj| Integer::div_floor(&(xj - s), &sq)).sum::<i64>())
            .max()
            .expect("n is positive")
    }
}

/// `v ↦ M(v + u)` on `N^n` as a ZILP function with periods `n²`.
pub fn pseudomin_zilep(m: &PseudoMin, u: &[i64]) -> Result<ZilepFunction> {
    let n = m.arity();
    if u.len() != n {
        return Err(Error::Function(format!("offset has {} entries, expected {n}", u.len())));
    }
    if m.eval(u) != 0 {
        return Err(Error::Function(format!(
            "offset {u:?} has M(u) = {}, not 0",
            m.eval(u)
        )));
    }
    let sq = (n * n) as u64;
    ZilepFunction::from_fn(n, 1, vec![sq; n], vec![0; n], |v| {
        let shifted: Vec<i64> = v.iter().zip(u).map(|(&a, &b)| a as i64 + b).collect();
        vec![u64::try_from(m.eval(&shifted)).expect("increasing from M(u) = 0")]
    })
}
