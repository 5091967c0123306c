//! Adder, splitter and toppler networks for ZILP functions.

use num_integer::Integer;

use super::{check_identity, table_bounds, Synthesizer};
use crate::error::{Error, Result};
use crate::network::{Network, NetworkBuilder, Wire};
use crate::zilep::ZilepFunction;

/// One variable: `f(x) = Σ_{i=1..λ} d_i ⌊(x + λ − i)/λ⌋` with
/// `d_i = f(i) − f(i−1)`: `d_i` topplers primed `λ − i`.
pub(crate) fn unary_recurrent(f: &ZilepFunction) -> Result<Network> {
    if f.arity() != 1 || f.output_count() != 1 || !f.is_zilp() {
        return Err(Error::Mode(
            "unary recurrent synthesis needs a one-variable ZILP function".into(),
        ));
    }
    let f = f.minimized();
    let lambda = f.periods()[0];
    let d: Vec<u64> = (1..=lambda).map(|i| f.eval1(&[i]) - f.eval1(&[i - 1])).collect();
    let mut b = NetworkBuilder::new();
    let x = b.input();
    let primes: Vec<u64> = (1..=lambda)
        .flat_map(|i| std::iter::repeat_n(lambda - i, d[i as usize - 1] as usize))
        .collect();
    let copies = b.split(x, primes.len());
    let terms: Vec<Wire> = primes
        .iter()
        .zip(copies)
        .map(|(&q, w)| b.toppler(w, lambda, q))
        .collect();
    let s = b.add(terms);
    b.output(s);
    Ok(b.finish())
}

/// `⌊(f + j)/m⌋` for `j < m`; these sum to `f`. Periods grow so that every
/// piece again has integral quanta.
pub(crate) fn meager_pieces(f: &ZilepFunction, m: u64) -> Result<Vec<ZilepFunction>> {
    assert!(m >= 1, "meagerization modulus must be positive");
    if m == 1 {
        return Ok(vec![f.clone()]);
    }
    let periods: Vec<u64> = (0..f.arity())
        .map(|i| f.periods()[i] * (m / m.gcd(&f.quantum(0, i))))
        .collect();
    let mut pieces = Vec::with_capacity(m as usize);
    for j in 0..m {
        let p = ZilepFunction::from_fn(
            f.arity(),
            1,
            periods.clone(),
            f.margins().to_vec(),
            |x| vec![(f.eval1(x) + j) / m],
        )?;
        pieces.push(p);
    }
    if let Some(first) = pieces.first() {
        let hi = table_bounds(first);
        check_identity("meagerize", &hi, f, |x| {
            pieces.iter().map(|p| p.eval1(x)).sum::<u64>() == f.eval1(x)
        })?;
    }
    Ok(pieces.into_iter().map(|p| p.minimized()).collect())
}

/// Splits a ZILP function into pieces that each rise by exactly one over a
/// period of coordinate `coord`.
pub fn meagerize(f: &ZilepFunction, coord: usize) -> Result<Vec<ZilepFunction>> {
    let (_, m) = f.meager(coord)?;
    if m == 0 {
        return Err(Error::Function(format!(
            "function does not grow along coordinate {coord}"
        )));
    }
    meager_pieces(f, m)
}

/// `f(y, z) = ⌊(g(y) + z + c)/λ⌋` for a function meager in its last
/// coordinate with period `λ`.
#[derive(Debug, Clone)]
pub struct MainReduction {
    pub g: ZilepFunction,
    pub lambda: u64,
    pub prime: u64,
}

/// The maximum over a period of `λ f(y, z') − z'` determines `f(y, ·)`
/// completely; `c` is its value at `y = 0`, which lies in `[0, λ)`.
pub(crate) fn main_reduction(f: &ZilepFunction) -> Result<MainReduction> {
    let k = f.arity();
    if k < 2 || f.output_count() != 1 || !f.is_zilp() {
        return Err(Error::Mode(
            "main reduction needs a ZILP function of at least two variables".into(),
        ));
    }
    let last = k - 1;
    let lambda = f.periods()[last];
    if f.quantum(0, last) != 1 {
        return Err(Error::synth(
            "main-reduction",
            format!("not meager in the last coordinate: quantum {}", f.quantum(0, last)),
        ));
    }
    let h = |y: &[u64]| -> i64 {
        let mut x = y.to_vec();
        x.push(0);
        (0..lambda)
            .map(|z| {
                x[last] = z;
                lambda as i64 * f.eval1(&x) as i64 - z as i64
            })
            .max()
            .expect("period is positive")
    };
    let c = h(&vec![0; last]);
    if !(0..lambda as i64).contains(&c) {
        return Err(Error::synth("main-reduction", format!("offset {c} outside [0, {lambda})")));
    }
    let g = ZilepFunction::from_fn(
        last,
        1,
        f.periods()[..last].to_vec(),
        vec![0; last],
        |y| vec![u64::try_from(h(y) - c).expect("g is increasing from g(0) = 0")],
    )?;
    check_identity("main-reduction", &table_bounds(f), f, |x| {
        (g.eval1(&x[..last]) + x[last] + c as u64) / lambda == f.eval1(x)
    })?;
    Ok(MainReduction {
        g: g.minimized(),
        lambda,
        prime: c as u64,
    })
}

impl Synthesizer {
    pub(super) fn build_recurrent(&mut self, f: &ZilepFunction) -> Result<Network> {
        if let Some(net) = self.reduce_trivial(super::Route::Recurrent, f)? {
            return Ok(net);
        }
        let k = f.arity();
        if k == 1 {
            self.fired("unary-recurrent");
            return unary_recurrent(f);
        }
        let last = k - 1;
        let m = f.quantum(0, last);
        if m > 1 {
            self.fired("meagerize");
            let pieces = meager_pieces(f, m)?;
            let nets = pieces
                .iter()
                .map(|p| self.recurrent(p))
                .collect::<Result<Vec<_>>>()?;
            return Ok(sum_networks(k, &nets));
        }
        if m == 0 {
            return Err(Error::synth(
                "main-reduction",
                "flat along a coordinate it depends on, impossible for ZILP",
            ));
        }
        self.fired("main-reduction");
        let red = main_reduction(f)?;
        let g_net = self.recurrent(&red.g)?;
        let mut b = NetworkBuilder::new();
        let xs: Vec<Wire> = (0..k).map(|_| b.input()).collect();
        let gy = b.embed(&g_net, &xs[..last])[0];
        let s = b.add(vec![gy, xs[last]]);
        let out = b.toppler(s, red.lambda, red.prime);
        b.output(out);
        Ok(b.finish())
    }
}

/// Feeds all inputs to every network and adds their single outputs.
pub(crate) fn sum_networks(k: usize, nets: &[std::sync::Arc<Network>]) -> Network {
    let mut b = NetworkBuilder::new();
    let xs: Vec<Wire> = (0..k).map(|_| b.input()).collect();
    let copies = super::split_all(&mut b, &xs, nets.len());
    let outs: Vec<Wire> = nets
        .iter()
        .zip(&copies)
        .map(|(net, ins)| b.embed(net, ins)[0])
        .collect();
    let s = b.add(outs);
    b.output(s);
    b.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid;
    use crate::network::bulk_eval;

    fn agrees(net: &Network, f: &ZilepFunction) {
        for x in grid::inclusive(&f.verification_bounds()) {
            assert_eq!(bulk_eval(net, &x).unwrap().output, f.eval(&x), "at {x:?}");
        }
    }

    #[test]
    fn unary_recurrent_matches() {
        let f = ZilepFunction::from_unary_values(&[0, 0, 2, 3, 3], 4, 0).unwrap();
        let net = unary_recurrent(&f).unwrap();
        agrees(&net, &f);
    }

    #[test]
    fn main_reduction_offset() {
        // ⌊(2x + y + 1)/3⌋
        let f = ZilepFunction::from_fn(2, 1, vec![3, 3], vec![0, 0], |x| {
            vec![(2 * x[0] + x[1] + 1) / 3]
        })
        .unwrap();
        let red = main_reduction(&f).unwrap();
        assert_eq!(red.lambda, 3);
        assert_eq!(red.prime, 1);
        for y in 0..7 {
            assert_eq!(red.g.eval1(&[y]), 2 * y);
        }
    }

    #[test]
    fn meager_pieces_sum() {
        let f = ZilepFunction::from_fn(2, 1, vec![2, 3], vec![0, 0], |x| {
            vec![x[0] + (2 * x[1]) / 3]
        })
        .unwrap();
        let pieces = meagerize(&f, 1).unwrap();
        assert_eq!(pieces.len(), 2);
        for p in &pieces {
            assert_eq!(p.meager(1).unwrap(), (true, 1));
        }
        let mut s = Synthesizer::new();
        let net = s.recurrent(&f).unwrap();
        agrees(&net, &f);
    }
}
