//! Increasing functions `N^k → N^ℓ` that are linear plus eventually periodic.
//!
//! A function is stored as its linear coefficients `b`, per-coordinate
//! periods `λ_i` and margins `r_i`, and the explicit table of values over the
//! box `Π [0, r_i + λ_i]`. Outside the box, `f(x + λ_i e_i) = f(x) + λ_i b_i`
//! whenever `x_i ≥ r_i`. With all margins zero the function is ZILP, which
//! is exactly the class computed by recurrent processors.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{self, Grid, MAX_TABLE_POINTS};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ZilepFunction {
    k: usize,
    l: usize,
    /// Row-major `ℓ × k`.
    coeffs: Vec<BigRational>,
    /// `λ_i b_{j,i}`, same layout as `coeffs`.
    quanta: Vec<u64>,
    periods: Vec<u64>,
    margins: Vec<u64>,
    grid: Grid,
    /// `ℓ` values per box point, points in row-major order.
    table: Arc<[u64]>,
}

/// Shape of a function along one coordinate, with the other coordinates
/// free: `F(y, z + L) = F(y, z) + S·L` for `z ≥ R`, and every unit step in
/// `z` raises `F` by at most `W`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerProfile {
    pub coord: usize,
    pub period: u64,
    pub slope: BigRational,
    pub margin: u64,
    pub roughness: u64,
}

impl fmt::Debug for ZilepFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ZilepFunction")
            .field("k", &self.k)
            .field("l", &self.l)
            .field(
                "coeffs",
                &self.coeffs.iter().map(ToString::to_string).collect::<Vec<_>>(),
            )
            .field("periods", &self.periods)
            .field("margins", &self.margins)
            .field("table_len", &self.table.len())
            .finish()
    }
}

fn box_dims(periods: &[u64], margins: &[u64]) -> Vec<u64> {
    periods
        .iter()
        .zip(margins)
        .map(|(p, r)| p + r + 1)
        .collect()
}

fn check_box(dims: &[u64]) -> Result<()> {
    let points = Grid::count(dims);
    if points > MAX_TABLE_POINTS {
        return Err(Error::TableTooLarge {
            points,
            limit: MAX_TABLE_POINTS,
        });
    }
    Ok(())
}

fn rational_to_u64(q: &BigRational) -> Option<u64> {
    if q.is_integer() {
        q.to_integer().to_u64()
    } else {
        None
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Function(format!("cannot parse coefficient {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

impl ZilepFunction {
    pub fn new(
        k: usize,
        l: usize,
        coeffs: Vec<BigRational>,
        periods: Vec<u64>,
        margins: Vec<u64>,
        table: Vec<u64>,
    ) -> Result<Self> {
        if k == 0 || l == 0 {
            return Err(Error::Function("arity and output count must be positive".into()));
        }
        if coeffs.len() != k * l {
            return Err(Error::Function(format!(
                "expected {} coefficients, got {}",
                k * l,
                coeffs.len()
            )));
        }
        if periods.len() != k || margins.len() != k {
            return Err(Error::Function(format!(
                "expected {k} periods and margins, got {} and {}",
                periods.len(),
                margins.len()
            )));
        }
        if let Some(i) = periods.iter().position(|&p| p == 0) {
            return Err(Error::Function(format!("period of coordinate {i} is zero")));
        }
        let dims = box_dims(&periods, &margins);
        check_box(&dims)?;
        let grid = Grid::new(&dims);
        if table.len() != grid.len() * l {
            return Err(Error::Function(format!(
                "table has {} entries, box needs {}",
                table.len(),
                grid.len() * l
            )));
        }
        let mut quanta = Vec::with_capacity(k * l);
        for j in 0..l {
            for i in 0..k {
                let b = &coeffs[j * k + i];
                if b < &BigRational::zero() {
                    return Err(Error::Function(format!(
                        "coefficient b[{j}][{i}] = {b} is negative"
                    )));
                }
                let q = b * BigRational::from_integer(BigInt::from(periods[i]));
                quanta.push(rational_to_u64(&q).ok_or_else(|| {
                    Error::Function(format!(
                        "period {} times coefficient b[{j}][{i}] = {b} is not an integer",
                        periods[i]
                    ))
                })?);
            }
        }
        let f = ZilepFunction {
            k,
            l,
            coeffs,
            quanta,
            periods,
            margins,
            grid,
            table: table.into(),
        };
        f.validate()?;
        Ok(f)
    }

    fn validate(&self) -> Result<()> {
        if self.table[..self.l].iter().any(|&v| v != 0) {
            return Err(Error::Function("f(0) must be 0".into()));
        }
        for (idx, x) in self.grid.points().enumerate() {
            for i in 0..self.k {
                if x[i] + 1 >= self.grid.dims()[i] {
                    continue;
                }
                let up = idx + self.grid.stride(i);
                for j in 0..self.l {
                    if self.table[up * self.l + j] < self.table[idx * self.l + j] {
                        return Err(Error::Function(format!(
                            "not increasing at {x:?} along coordinate {i}"
                        )));
                    }
                }
                if x[i] == self.margins[i] {
                    let far = idx + self.periods[i] as usize * self.grid.stride(i);
                    for j in 0..self.l {
                        let expect = self.table[idx * self.l + j] + self.quanta[j * self.k + i];
                        if self.table[far * self.l + j] != expect {
                            return Err(Error::Function(format!(
                                "periodic extension inconsistent at {x:?} along coordinate {i}"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Tabulates `f` over the box and infers the linear part from the
    /// increments along each axis.
    pub fn from_fn(
        k: usize,
        l: usize,
        periods: Vec<u64>,
        margins: Vec<u64>,
        f: impl Fn(&[u64]) -> Vec<u64>,
    ) -> Result<Self> {
        if periods.len() != k || margins.len() != k {
            return Err(Error::Function("period/margin count differs from arity".into()));
        }
        if periods.contains(&0) {
            return Err(Error::Function("periods must be positive".into()));
        }
        let dims = box_dims(&periods, &margins);
        check_box(&dims)?;
        let grid = Grid::new(&dims);
        let mut table = Vec::with_capacity(grid.len() * l);
        for x in grid.points() {
            let v = f(&x);
            if v.len() != l {
                return Err(Error::Function(format!(
                    "function returned {} outputs, expected {l}",
                    v.len()
                )));
            }
            table.extend(v);
        }
        let mut coeffs = Vec::with_capacity(k * l);
        for j in 0..l {
            for i in 0..k {
                let mut lo = vec![0; k];
                lo[i] = margins[i];
                let mut hi = lo.clone();
                hi[i] += periods[i];
                let a = table[grid.index(&lo) * l + j];
                let b = table[grid.index(&hi) * l + j];
                if b < a {
                    return Err(Error::Function(format!("not increasing along coordinate {i}")));
                }
                coeffs.push(BigRational::new(
                    BigInt::from(b - a),
                    BigInt::from(periods[i]),
                ));
            }
        }
        Self::new(k, l, coeffs, periods, margins, table)
    }

    /// Unary function given by its values on `[0, margin + period]`.
    pub fn from_unary_values(values: &[u64], period: u64, margin: u64) -> Result<Self> {
        if values.len() as u64 != period + margin + 1 {
            return Err(Error::Function(format!(
                "need {} values, got {}",
                period + margin + 1,
                values.len()
            )));
        }
        Self::from_fn(1, 1, vec![period], vec![margin], |x| vec![values[x[0] as usize]])
    }

    /// The function `x ↦ A x` for a nonnegative integer matrix `A` (ℓ rows).
    pub fn linear(matrix: &[Vec<u64>]) -> Result<Self> {
        let l = matrix.len();
        let k = matrix.first().map_or(0, Vec::len);
        if matrix.iter().any(|row| row.len() != k) {
            return Err(Error::Function("ragged matrix".into()));
        }
        Self::from_fn(k, l, vec![1; k], vec![0; k], |x| {
            matrix
                .iter()
                .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
                .collect()
        })
    }

    pub fn zero(k: usize, l: usize) -> Self {
        Self::from_fn(k, l, vec![1; k], vec![0; k], |_| vec![0; l]).expect("zero function")
    }

    pub fn arity(&self) -> usize {
        self.k
    }

    pub fn output_count(&self) -> usize {
        self.l
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, output: usize, coord: usize) -> &BigRational {
        &self.coeffs[output * self.k + coord]
    }

    /// `λ_i b_{j,i}`: the increase of output `j` over one period of coordinate `i`.
    pub fn quantum(&self, output: usize, coord: usize) -> u64 {
        self.quanta[output * self.k + coord]
    }

    pub fn periods(&self) -> &[u64] {
        &self.periods
    }

    pub fn margins(&self) -> &[u64] {
        &self.margins
    }

    /// Box side lengths `r_i + λ_i + 1`.
    pub fn box_dims(&self) -> &[u64] {
        self.grid.dims()
    }

    pub fn table(&self) -> &[u64] {
        &self.table
    }

    /// Table entry at a point inside the box.
    pub fn table_value(&self, x: &[u64]) -> &[u64] {
        let idx = self.grid.index(x) * self.l;
        &self.table[idx..idx + self.l]
    }

    pub fn is_zilp(&self) -> bool {
        self.margins.iter().all(|&r| r == 0)
    }

    pub fn eval(&self, x: &[u64]) -> Vec<u64> {
        assert_eq!(x.len(), self.k, "input vector has wrong arity");
        let mut reduced = x.to_vec();
        let mut shift = vec![0u64; self.k];
        for i in 0..self.k {
            let top = self.margins[i] + self.periods[i];
            if x[i] > top {
                let m = (x[i] - self.margins[i]) / self.periods[i];
                reduced[i] = x[i] - m * self.periods[i];
                shift[i] = m;
            }
        }
        let base = self.table_value(&reduced);
        (0..self.l)
            .map(|j| {
                base[j]
                    + (0..self.k)
                        .map(|i| shift[i] * self.quanta[j * self.k + i])
                        .sum::<u64>()
            })
            .collect()
    }

    /// Single-output evaluation.
    pub fn eval1(&self, x: &[u64]) -> u64 {
        debug_assert_eq!(self.l, 1);
        self.eval(x)[0]
    }

    /// Evaluates the linear-plus-periodic extension at an arbitrary integer
    /// point. Negative coordinates are allowed only where the margin is zero.
    pub fn eval_extended(&self, x: &[i64]) -> Vec<i64> {
        assert_eq!(x.len(), self.k, "input vector has wrong arity");
        let mut reduced = vec![0u64; self.k];
        let mut shift = vec![0i64; self.k];
        for i in 0..self.k {
            let r = self.margins[i] as i64;
            let p = self.periods[i] as i64;
            assert!(x[i] >= 0 || r == 0, "coordinate {i} has a transient margin");
            if x[i] > r + p || x[i] < 0 {
                let m = (x[i] - r).div_euclid(p);
                reduced[i] = (x[i] - m * p) as u64;
                shift[i] = m;
            } else {
                reduced[i] = x[i] as u64;
            }
        }
        let base = self.table_value(&reduced);
        (0..self.l)
            .map(|j| {
                base[j] as i64
                    + (0..self.k)
                        .map(|i| shift[i] * self.quanta[j * self.k + i] as i64)
                        .sum::<i64>()
            })
            .collect()
    }

    /// `Some(J)` with `J` the largest value when every coefficient is zero.
    pub fn bound(&self) -> Option<u64> {
        if self.quanta.iter().all(|&q| q == 0) {
            Some(self.table.iter().copied().max().unwrap_or(0))
        } else {
            None
        }
    }

    pub fn is_bounded(&self) -> bool {
        self.bound().is_some()
    }

    /// Whether `f(λ_c e_c) = 1`, together with the quantum `λ_c b_c`.
    pub fn meager(&self, coord: usize) -> Result<(bool, u64)> {
        if !self.is_zilp() {
            return Err(Error::Function("meagerness is defined for ZILP functions".into()));
        }
        if self.l != 1 {
            return Err(Error::Function("meagerness needs a single output".into()));
        }
        let m = self.quantum(0, coord);
        Ok((m == 1, m))
    }

    /// Whether some unit step along `coord` changes some output.
    pub fn depends_on(&self, coord: usize) -> bool {
        let stride = self.grid.stride(coord);
        let top = self.grid.dims()[coord] - 1;
        self.grid.points().enumerate().any(|(idx, x)| {
            x[coord] < top
                && (0..self.l).any(|j| {
                    self.table[(idx + stride) * self.l + j] != self.table[idx * self.l + j]
                })
        })
    }

    /// Restriction to `x_coord = 0`, as a function of the other coordinates.
    /// Callers use it on coordinates the function does not depend on.
    pub fn drop_coordinate(&self, coord: usize) -> Result<Self> {
        if self.k == 1 {
            return Err(Error::Function("cannot drop the only coordinate".into()));
        }
        let periods = remove(&self.periods, coord);
        let margins = remove(&self.margins, coord);
        Self::from_fn(self.k - 1, self.l, periods, margins, |y| {
            self.eval(&insert(y, coord, 0))
        })
    }

    /// The `j`-th output as a unary-output function.
    pub fn component(&self, j: usize) -> Self {
        let coeffs = self.coeffs[j * self.k..(j + 1) * self.k].to_vec();
        let table: Vec<u64> = self.table.iter().skip(j).step_by(self.l).copied().collect();
        Self::new(
            self.k,
            1,
            coeffs,
            self.periods.clone(),
            self.margins.clone(),
            table,
        )
        .expect("component of a valid function is valid")
        .minimized()
    }

    /// Coefficient matrix when `f(x) = A x` exactly with `A` integral.
    pub fn integer_linear(&self) -> Option<Vec<Vec<u64>>> {
        let mut rows = Vec::with_capacity(self.l);
        for j in 0..self.l {
            let mut row = Vec::with_capacity(self.k);
            for i in 0..self.k {
                row.push(rational_to_u64(self.coeff(j, i))?);
            }
            rows.push(row);
        }
        for (idx, x) in self.grid.points().enumerate() {
            for (j, row) in rows.iter().enumerate() {
                let lin: u64 = row.iter().zip(&x).map(|(a, b)| a * b).sum();
                if self.table[idx * self.l + j] != lin {
                    return None;
                }
            }
        }
        Some(rows)
    }

    fn period_holds(&self, coord: usize, margin: u64, period: u64) -> bool {
        let q: Vec<u64> = match (0..self.l)
            .map(|j| {
                let num = self.quantum(j, coord) * period;
                num.is_multiple_of(self.periods[coord]).then(|| num / self.periods[coord])
            })
            .collect::<Option<Vec<_>>>()
        {
            Some(q) => q,
            None => return false,
        };
        let mut hi: Vec<u64> = (0..self.k)
            .map(|i| self.margins[i] + self.periods[i] - 1)
            .collect();
        hi[coord] = margin.max(self.margins[coord]) + self.periods[coord] - 1;
        grid::inclusive(&hi).all(|mut x| {
            if x[coord] < margin {
                return true;
            }
            let base = self.eval(&x);
            x[coord] += period;
            let up = self.eval(&x);
            up.iter().zip(&base).zip(&q).all(|((u, b), d)| *u == b + d)
        })
    }

    /// Same function with each margin minimized, then each period.
    pub fn minimized(&self) -> Self {
        let mut periods = self.periods.clone();
        let mut margins = self.margins.clone();
        for c in 0..self.k {
            let r = (0..=self.margins[c])
                .find(|&r| self.period_holds(c, r, self.periods[c]))
                .expect("declared margin is valid");
            let p = divisors(self.periods[c])
                .into_iter()
                .find(|&d| self.period_holds(c, r, d))
                .expect("declared period is valid");
            margins[c] = r;
            periods[c] = p;
        }
        if periods == self.periods && margins == self.margins {
            return self.clone();
        }
        Self::from_fn(self.k, self.l, periods, margins, |x| self.eval(x))
            .expect("minimized representation is valid")
    }

    /// Same function over a larger box; `periods` must be multiples of the
    /// current ones and `margins` no smaller.
    pub fn with_shape(&self, periods: Vec<u64>, margins: Vec<u64>) -> Result<Self> {
        for i in 0..self.k {
            if !periods[i].is_multiple_of(self.periods[i]) || margins[i] < self.margins[i] {
                return Err(Error::Function(format!(
                    "shape ({}, {}) does not refine ({}, {}) on coordinate {i}",
                    periods[i], margins[i], self.periods[i], self.margins[i]
                )));
            }
        }
        Self::from_fn(self.k, self.l, periods, margins, |x| self.eval(x))
    }

    /// Equality as functions, regardless of representation.
    pub fn equivalent(&self, other: &Self) -> bool {
        if self.k != other.k || self.l != other.l || self.coeffs != other.coeffs {
            return false;
        }
        let hi: Vec<u64> = (0..self.k)
            .map(|i| {
                self.margins[i].max(other.margins[i]) + self.periods[i].lcm(&other.periods[i])
            })
            .collect();
        grid::inclusive(&hi).all(|x| self.eval(&x) == other.eval(&x))
    }

    pub fn layer_profile(&self, coord: usize) -> LayerProfile {
        assert_eq!(self.l, 1, "layer profiles are defined for unary output");
        let stride = self.grid.stride(coord);
        let top = self.grid.dims()[coord] - 1;
        let roughness = self
            .grid
            .points()
            .enumerate()
            .filter(|(_, x)| x[coord] < top)
            .map(|(idx, _)| self.table[idx + stride] - self.table[idx])
            .max()
            .unwrap_or(0);
        LayerProfile {
            coord,
            period: self.periods[coord],
            slope: self.coeff(0, coord).clone(),
            margin: self.margins[coord],
            roughness,
        }
    }

    /// Default verification box `[0, 2(r_i + λ_i)]`, as inclusive upper bounds.
    pub fn verification_bounds(&self) -> Vec<u64> {
        (0..self.k)
            .map(|i| 2 * (self.margins[i] + self.periods[i]))
            .collect()
    }

    pub fn to_doc(&self) -> ZilepDoc {
        ZilepDoc {
            k: self.k,
            l: self.l,
            coeffs: self
                .coeffs
                .iter()
                .map(|c| format!("{}/{}", c.numer(), c.denom()))
                .collect(),
            periods: self.periods.clone(),
            margins: self.margins.clone(),
            table: self.table.to_vec(),
        }
    }

    pub fn from_doc(doc: ZilepDoc) -> Result<Self> {
        let coeffs = doc
            .coeffs
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()?;
        Self::new(doc.k, doc.l, coeffs, doc.periods, doc.margins, doc.table)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_doc()).expect("function serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_doc(serde_json::from_str(text)?)
    }
}

/// On-disk form of a function. The table lists the `ℓ` outputs of each box
/// point together, points in row-major order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZilepDoc {
    pub k: usize,
    pub l: usize,
    pub coeffs: Vec<String>,
    pub periods: Vec<u64>,
    pub margins: Vec<u64>,
    pub table: Vec<u64>,
}

pub(crate) fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

pub(crate) fn remove(v: &[u64], at: usize) -> Vec<u64> {
    let mut out = v.to_vec();
    out.remove(at);
    out
}

pub(crate) fn insert(v: &[u64], at: usize, value: u64) -> Vec<u64> {
    let mut out = Vec::with_capacity(v.len() + 1);
    out.extend_from_slice(&v[..at]);
    out.push(value);
    out.extend_from_slice(&v[at..]);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn floor_div(q: u64, lambda: u64) -> ZilepFunction {
        ZilepFunction::from_fn(1, 1, vec![lambda], vec![0], |x| vec![(x[0] + q) / lambda])
            .unwrap()
    }

    #[test]
    fn infers_coefficients() {
        let f = floor_div(0, 3);
        assert_eq!(f.coeff(0, 0), &r(1, 3));
        assert_eq!(f.eval1(&[1_000_000]), 333_333);
    }

    #[test]
    fn rejects_nonzero_origin() {
        let err = ZilepFunction::from_unary_values(&[1, 1], 1, 0).unwrap_err();
        assert!(err.to_string().contains("f(0)"));
    }

    #[test]
    fn rejects_decreasing_table() {
        assert!(ZilepFunction::from_unary_values(&[0, 2, 1, 3], 2, 1).is_err());
    }

    #[test]
    fn rejects_inconsistent_extension() {
        // coefficient says +1 per step but the table jumps by 2 at the end
        let err = ZilepFunction::new(1, 1, vec![r(1, 1)], vec![1], vec![1], vec![0, 1, 3]);
        assert!(err.is_err());
    }

    #[test]
    fn rejects_fractional_quantum() {
        let err = ZilepFunction::new(1, 1, vec![r(1, 2)], vec![3], vec![0], vec![0, 0, 1, 1]);
        assert!(err.is_err());
    }

    #[test]
    fn rejects_huge_box() {
        let err = ZilepFunction::from_fn(2, 1, vec![5000, 5000], vec![0, 0], |x| {
            vec![x[0] + x[1]]
        })
        .unwrap_err();
        assert!(matches!(err, Error::TableTooLarge { .. }));
    }

    #[test]
    fn delayer_function() {
        let f = ZilepFunction::from_unary_values(&[0, 0, 1], 1, 1).unwrap();
        assert!(!f.is_zilp());
        assert_eq!(f.eval1(&[5]), 4);
        assert_eq!(f.bound(), None);
    }

    #[test]
    fn presink_is_bounded() {
        let f = ZilepFunction::from_unary_values(&[0, 1, 1], 1, 1).unwrap();
        assert_eq!(f.bound(), Some(1));
        assert_eq!(ZilepFunction::zero(2, 1).bound(), Some(0));
    }

    #[test]
    fn minimization_shrinks_period_and_margin() {
        let f = ZilepFunction::from_fn(1, 1, vec![6], vec![3], |x| vec![x[0] / 2]).unwrap();
        let m = f.minimized();
        assert_eq!(m.periods(), &[2]);
        assert_eq!(m.margins(), &[0]);
        assert!(m.equivalent(&f));
    }

    #[test]
    fn minimization_keeps_needed_margin() {
        let f = ZilepFunction::from_fn(1, 1, vec![2], vec![4], |x| {
            vec![x[0].saturating_sub(3)]
        })
        .unwrap();
        let m = f.minimized();
        assert_eq!((m.periods()[0], m.margins()[0]), (1, 3));
    }

    #[test]
    fn extended_evaluation_matches_floor() {
        let f = floor_div(1, 3);
        for x in -20i64..20 {
            assert_eq!(f.eval_extended(&[x])[0], (x + 1).div_euclid(3));
        }
    }

    #[test]
    fn detects_integer_linear() {
        let f = ZilepFunction::linear(&[vec![2, 3], vec![1, 0]]).unwrap();
        assert_eq!(f.integer_linear(), Some(vec![vec![2, 3], vec![1, 0]]));
        assert_eq!(floor_div(0, 2).integer_linear(), None);
    }

    #[test]
    fn dependence_and_dropping() {
        let f = ZilepFunction::from_fn(2, 1, vec![1, 3], vec![0, 0], |x| vec![x[1] / 3]).unwrap();
        assert!(!f.depends_on(0));
        assert!(f.depends_on(1));
        let g = f.drop_coordinate(0).unwrap();
        assert!(g.equivalent(&floor_div(0, 3)));
    }

    #[test]
    fn json_round_trip() {
        let f = ZilepFunction::from_fn(2, 2, vec![2, 3], vec![1, 0], |x| {
            vec![x[0].saturating_sub(1) / 2 + x[1], x[1] / 3]
        })
        .unwrap();
        let back = ZilepFunction::from_json(&f.to_json()).unwrap();
        assert_eq!(f, back);
    }

    #[test]
    fn layer_profile_of_shifted_floor() {
        let f = ZilepFunction::from_fn(2, 1, vec![1, 2], vec![0, 2], |x| {
            vec![x[0] + 3 * u64::from(x[1] >= 1) + x[1].saturating_sub(2) / 2]
        })
        .unwrap();
        let p = f.layer_profile(1);
        assert_eq!(p.period, 2);
        assert_eq!(p.margin, 2);
        assert_eq!(p.slope, r(1, 2));
        assert_eq!(p.roughness, 3);
    }
}
