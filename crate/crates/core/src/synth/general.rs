//! Networks of all five gates for functions with a transient part.
//!
//! One variable is handled by peeling the transient off with a delayer
//! chain. With more variables the last coordinate is split into layers: the
//! function is cut into pieces that rise by at most one per step, every
//! `n`-th layer of a piece is computed separately, and the layers are
//! recombined with a periodic pseudo-minimum.

use std::cmp::Reverse;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;

use super::recurrent::{meager_pieces, sum_networks};
use super::{check_identity, split_all, table_bounds, Route, Synthesizer};
use crate::error::{Error, Result};
use crate::network::{Network, NetworkBuilder, Wire};
use crate::pseudomin::{pseudomin_zilep, PseudoMin};
use crate::zilep::ZilepFunction;

/// Which regime the layers of the last coordinate are in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InterleaveCase {
    /// `F(y, z) = F(y, n)` for `z ≥ n`.
    Flat,
    /// `F(y, z + n) = F(y, z) + 1` for `z ≥ n`.
    Rising,
}

/// The data of one interleaving step: layer offsets `u_i = F(0, i)` and the
/// layer functions `G_i(y, ζ) = F(y, nζ + i) − u_i`.
#[derive(Debug, Clone)]
pub struct InterleavePlan {
    pub n: u64,
    pub case: InterleaveCase,
    pub offsets: Vec<i64>,
    pub layers: Vec<ZilepFunction>,
}

/// `ζ_i(z) = ⌊(z + n − i − 1)/n⌋`, the layer index seen by layer `i`.
pub fn layer_index(n: u64, i: u64, z: u64) -> u64 {
    (z + n - i - 1) / n
}

/// `z_i(z) = n·ζ_i(z) + i`: the least `z' ≥ z` with `z' ≡ i (mod n)`.
/// For `i < n` these are a rearrangement of `z, z + 1, …, z + n − 1`.
pub fn interleave_targets(n: u64, i: u64, z: u64) -> u64 {
    n * layer_index(n, i, z) + i
}

pub(crate) fn interleave_plan(
    f: &ZilepFunction,
    case: InterleaveCase,
    n: u64,
) -> Result<InterleavePlan> {
    let k = f.arity();
    if k < 2 || f.output_count() != 1 {
        return Err(Error::Mode("interleaving needs a unary-output function of at least two variables".into()));
    }
    let last = k - 1;
    let p = f.layer_profile(last);
    let slope_fits = match case {
        InterleaveCase::Flat => p.slope.is_zero(),
        InterleaveCase::Rising => p.slope == BigRational::new(1.into(), n.into()),
    };
    let period_fits = case == InterleaveCase::Flat || n.is_multiple_of(p.period);
    if n == 0 || p.roughness > 1 || p.margin > n || !slope_fits || !period_fits {
        return Err(Error::synth(
            "interleave",
            format!(
                "layers do not fit n = {n}: period {}, slope {}, margin {}, roughness {}",
                p.period, p.slope, p.margin, p.roughness
            ),
        ));
    }
    let mut y_periods = f.periods()[..last].to_vec();
    let mut y_margins = f.margins()[..last].to_vec();
    y_periods.push(1);
    y_margins.push(1);
    let mut offsets = Vec::with_capacity(n as usize);
    let mut layers = Vec::with_capacity(n as usize);
    for i in 0..n {
        let mut origin = vec![0; k];
        origin[last] = i;
        let u = f.eval1(&origin);
        let g = ZilepFunction::from_fn(k, 1, y_periods.clone(), y_margins.clone(), |x| {
            let mut x = x.to_vec();
            x[last] = n * x[last] + i;
            vec![f.eval1(&x) - u]
        })?;
        offsets.push(u as i64);
        layers.push(g.minimized());
    }
    let m = PseudoMin::new(n as usize);
    let mut hi = f.verification_bounds();
    hi[last] = hi[last].max(3 * n);
    check_identity("interleave", &hi, f, |x| {
        let z = x[last];
        let args: Vec<i64> = layers
            .iter()
            .zip(&offsets)
            .enumerate()
            .map(|(i, (g, &u))| {
                let mut y = x.to_vec();
                y[last] = layer_index(n, i as u64, z);
                g.eval1(&y) as i64 + u
            })
            .collect();
        m.eval(&args) == f.eval1(x) as i64
    })?;
    Ok(InterleavePlan {
        n,
        case,
        offsets,
        layers,
    })
}

/// Coordinates reordered so that `coord` comes last.
fn move_last(k: usize, coord: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..k).filter(|&i| i != coord).collect();
    order.push(coord);
    order
}

fn permuted(f: &ZilepFunction, order: &[usize]) -> Result<ZilepFunction> {
    let k = f.arity();
    let periods = order.iter().map(|&i| f.periods()[i]).collect();
    let margins = order.iter().map(|&i| f.margins()[i]).collect();
    ZilepFunction::from_fn(k, 1, periods, margins, |y| {
        let mut x = vec![0; k];
        for (&i, &v) in order.iter().zip(y) {
            x[i] = v;
        }
        f.eval(&x)
    })
}

/// Layer size `n` and meagerization modulus for peeling coordinate `coord`.
/// With slope zero each piece later picks its own `n`; the value returned
/// is an upper bound.
fn layer_cost(f: &ZilepFunction, coord: usize) -> (u64, u64) {
    let p = f.layer_profile(coord);
    let l = p.period;
    let w = p.roughness;
    if p.slope.is_zero() {
        (p.margin, w)
    } else {
        let rise = f.quantum(0, coord);
        let n = l * p.margin.div_ceil(l).max(w.div_ceil(rise)).max(1);
        (n, rise * (n / l))
    }
}

impl Synthesizer {
    pub(super) fn build_general(&mut self, f: &ZilepFunction) -> Result<Network> {
        if let Some(net) = self.reduce_trivial(Route::General, f)? {
            return Ok(net);
        }
        if f.is_zilp() {
            return Ok((*self.recurrent(f)?).clone());
        }
        if f.is_bounded() {
            return Ok((*self.bounded(f)?).clone());
        }
        let k = f.arity();
        if k == 1 {
            self.fired("unary-transient");
            return self.unary_transient(f);
        }
        // peel the coordinate needing the smallest pseudo-minimum, preferring the last
        let coord = (0..k)
            .min_by_key(|&c| (layer_cost(f, c).0, Reverse(c)))
            .expect("at least two coordinates");
        if coord != k - 1 {
            self.fired("reorder");
            let order = move_last(k, coord);
            let g = permuted(f, &order)?;
            let net = self.general(&g)?;
            let mut b = NetworkBuilder::new();
            let xs: Vec<Wire> = (0..k).map(|_| b.input()).collect();
            let ins: Vec<Wire> = order.iter().map(|&i| xs[i]).collect();
            let out = b.embed(&net, &ins)[0];
            b.output(out);
            return Ok(b.finish());
        }
        self.peel_last(f)
    }

    fn peel_last(&mut self, f: &ZilepFunction) -> Result<Network> {
        let k = f.arity();
        let last = k - 1;
        let p = f.layer_profile(last);
        let (n, m) = layer_cost(f, last);
        let pieces = meager_pieces(f, m.max(1))?;
        if pieces.len() > 1 {
            self.fired("meagerize");
        }
        let mut nets = Vec::with_capacity(pieces.len());
        for piece in &pieces {
            let net = if p.slope.is_zero() {
                if piece.depends_on(last) {
                    let n = piece.margins()[last];
                    self.interleave(piece, InterleaveCase::Flat, n)?
                } else {
                    self.general(piece)?
                }
            } else {
                self.interleave(piece, InterleaveCase::Rising, n)?
            };
            nets.push(net);
        }
        if nets.len() == 1 {
            return Ok((*nets[0]).clone());
        }
        Ok(sum_networks(k, &nets))
    }

    /// `F(x) = G((x − R)^+) + Σ_{i<R} (F(i+1) − F(i)) 1[x > i]` with
    /// `G(x) = F(x + R) − F(R)` periodic.
    pub(super) fn unary_transient(&mut self, f: &ZilepFunction) -> Result<Network> {
        let r = f.margins()[0];
        let lambda = f.periods()[0];
        let base = f.eval1(&[r]);
        let g = ZilepFunction::from_fn(1, 1, vec![lambda], vec![0], |x| {
            vec![f.eval1(&[x[0] + r]) - base]
        })?;
        check_identity("unary-transient", &table_bounds(f), f, |x| {
            let steps: u64 = (0..r.min(x[0])).map(|i| f.eval1(&[i + 1]) - f.eval1(&[i])).sum();
            g.eval1(&[x[0].saturating_sub(r)]) + steps == f.eval1(x)
        })?;
        let g_net = self.recurrent(&g)?;
        let mut b = NetworkBuilder::new();
        let mut w = b.input();
        let mut terms = Vec::new();
        for i in 0..r {
            let d = f.eval1(&[i + 1]) - f.eval1(&[i]);
            if d > 0 {
                let s = b.split(w, 2);
                let tap = b.presink(s[0]);
                terms.extend(b.split(tap, d as usize));
                w = s[1];
            }
            w = b.delayer(w);
        }
        terms.push(b.embed(&g_net, &[w])[0]);
        let s = b.add(terms);
        b.output(s);
        Ok(b.finish())
    }

    /// Functions that no longer change once the last coordinate is positive.
    pub(crate) fn two_layer(&mut self, f: &ZilepFunction) -> Result<Network> {
        let k = f.arity();
        if k < 2 {
            return Err(Error::Mode("two-layer synthesis needs at least two variables".into()));
        }
        let last = k - 1;
        let at = |y: &[u64], z: u64| {
            let mut x = y.to_vec();
            x.push(z);
            f.eval1(&x)
        };
        let hi = table_bounds(f);
        let y_hi = hi[..last].to_vec();
        let flat = f.quantum(0, last) == 0
            && crate::grid::inclusive(&hi)
                .all(|x| x[last] == 0 || f.eval1(&x) == at(&x[..last], 1));
        if !flat {
            return Err(Error::synth(
                "two-layer",
                "function still changes after the first step of its last coordinate",
            ));
        }
        let w = crate::grid::inclusive(&y_hi)
            .map(|y| at(&y, 1) - at(&y, 0))
            .max()
            .unwrap_or(0);
        if w == 0 {
            return Ok((*self.general(f)?).clone());
        }
        if w > 1 {
            self.fired("meagerize");
            let pieces = meager_pieces(f, w)?;
            let nets = pieces
                .iter()
                .map(|p| self.cached(Route::TwoLayer, p, |s, p| s.two_layer(p)))
                .collect::<Result<Vec<_>>>()?;
            return Ok(sum_networks(k, &nets));
        }
        self.fired("two-layer");
        let u = at(&vec![0; last], 1);
        let y_periods = f.periods()[..last].to_vec();
        let y_margins = f.margins()[..last].to_vec();
        let f0 = ZilepFunction::from_fn(last, 1, y_periods.clone(), y_margins.clone(), |y| {
            vec![at(y, 0)]
        })?;
        let f1 = ZilepFunction::from_fn(last, 1, y_periods, y_margins, |y| vec![at(y, 1) - u])?;
        check_identity("two-layer", &table_bounds(f), f, |x| {
            let y = &x[..last];
            (f0.eval1(y) + f1.eval1(y) + u64::from(x[last] > 0) + u) / 2 == f.eval1(x)
        })?;
        let n0 = self.general(&f0)?;
        let n1 = self.general(&f1)?;
        let mut b = NetworkBuilder::new();
        let xs: Vec<Wire> = (0..k).map(|_| b.input()).collect();
        let ys = split_all(&mut b, &xs[..last], 2);
        let a = b.embed(&n0, &ys[0])[0];
        let c = b.embed(&n1, &ys[1])[0];
        let z = b.presink(xs[last]);
        let s = b.add(vec![a, c, z]);
        let out = b.toppler(s, 2, u);
        b.output(out);
        Ok(b.finish())
    }

    fn interleave(&mut self, f: &ZilepFunction, case: InterleaveCase, n: u64) -> Result<Arc<Network>> {
        self.fired("interleave");
        let plan = interleave_plan(f, case, n)?;
        let k = f.arity();
        let last = k - 1;
        let m = pseudomin_zilep(&PseudoMin::new(n as usize), &plan.offsets)?;
        let m_net = self.recurrent(&m)?;
        let mut layer_nets = Vec::with_capacity(plan.layers.len());
        for g in &plan.layers {
            let net = match case {
                InterleaveCase::Flat => self.cached(Route::TwoLayer, g, |s, g| s.two_layer(g))?,
                InterleaveCase::Rising => Arc::new(self.rising_layer(g)?),
            };
            layer_nets.push(net);
        }
        let mut b = NetworkBuilder::new();
        let xs: Vec<Wire> = (0..k).map(|_| b.input()).collect();
        let ys = split_all(&mut b, &xs[..last], n as usize);
        let zs = b.split(xs[last], n as usize);
        let mut outs = Vec::with_capacity(n as usize);
        for (i, ((net, mut y), z)) in layer_nets.iter().zip(ys).zip(zs).enumerate() {
            let zeta = b.toppler(z, n, n - i as u64 - 1);
            y.push(zeta);
            outs.push(b.embed(net, &y)[0]);
        }
        let out = b.embed(&m_net, &outs)[0];
        b.output(out);
        Ok(Arc::new(b.finish()))
    }

    /// `G(y, ζ) = H(y, ζ) + (ζ − 1)^+` with `H(y, ζ) = G(y, min(ζ, 1))`.
    fn rising_layer(&mut self, g: &ZilepFunction) -> Result<Network> {
        let k = g.arity();
        let last = k - 1;
        let mut margins = g.margins().to_vec();
        margins[last] = 1;
        let mut periods = g.periods().to_vec();
        periods[last] = 1;
        let h = ZilepFunction::from_fn(k, 1, periods, margins, |x| {
            let mut x = x.to_vec();
            x[last] = x[last].min(1);
            g.eval(&x)
        })?;
        check_identity("rising-layer", &table_bounds(g), g, |x| {
            h.eval1(x) + x[last].saturating_sub(1) == g.eval1(x)
        })?;
        let h_net = self.cached(Route::TwoLayer, &h, |s, h| s.two_layer(h))?;
        let mut b = NetworkBuilder::new();
        let mut xs: Vec<Wire> = (0..k).map(|_| b.input()).collect();
        let zs = b.split(xs[last], 2);
        xs[last] = zs[0];
        let hv = b.embed(&h_net, &xs)[0];
        let d = b.delayer(zs[1]);
        let s = b.add(vec![hv, d]);
        b.output(s);
        Ok(b.finish())
    }
}
