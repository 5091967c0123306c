//! Compiling ZILEP functions into acyclic networks of gates.
//!
//! Each pass turns a function into a network fragment, possibly asking for
//! networks of simpler functions (fewer coordinates, or smaller quanta).
//! Every pass checks the identity it relies on over a box large enough to
//! decide equality, so a wrong intermediate function is reported instead of
//! silently producing a wrong network.

mod bounded;
mod general;
mod recurrent;
pub mod report;
pub mod rewrite;

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid;
use crate::network::{Network, NetworkBuilder, Wire};
use crate::zilep::ZilepFunction;

pub use general::{interleave_targets, layer_index, InterleaveCase, InterleavePlan};
pub use recurrent::{meagerize, MainReduction};
pub use report::{report, SynthReport};
pub use rewrite::{rewrite_feedback, rewrite_unprime};

/// Which construction `compile` applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Recurrent when all margins are zero, bounded when all coefficients
    /// are zero, general otherwise.
    Auto,
    Recurrent,
    Bounded,
    General,
}

impl Mode {
    pub fn resolve(self, f: &ZilepFunction) -> Mode {
        match self {
            Mode::Auto if f.is_zilp() => Mode::Recurrent,
            Mode::Auto if f.is_bounded() => Mode::Bounded,
            Mode::Auto => Mode::General,
            m => m,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Route {
    Recurrent,
    Bounded,
    General,
    TwoLayer,
}

/// Runs the passes, caching the network built for each sub-function.
#[derive(Debug, Default)]
pub struct Synthesizer {
    cache: HashMap<(Route, ZilepFunction), Arc<Network>>,
    passes: BTreeMap<&'static str, usize>,
}

impl Synthesizer {
    pub fn new() -> Self {
        Self::default()
    }

    /// How many times each pass fired.
    pub fn passes(&self) -> &BTreeMap<&'static str, usize> {
        &self.passes
    }

    fn fired(&mut self, pass: &'static str) {
        *self.passes.entry(pass).or_default() += 1;
    }

    fn cached(
        &mut self,
        route: Route,
        f: &ZilepFunction,
        build: impl FnOnce(&mut Self, &ZilepFunction) -> Result<Network>,
    ) -> Result<Arc<Network>> {
        let f = f.minimized();
        let key = (route, f);
        if let Some(net) = self.cache.get(&key) {
            return Ok(net.clone());
        }
        let net = Arc::new(build(self, &key.1)?);
        self.cache.insert(key, net.clone());
        Ok(net)
    }

    /// Networks of adders, splitters and topplers for ZILP functions.
    pub fn recurrent(&mut self, f: &ZilepFunction) -> Result<Arc<Network>> {
        require_unary(f)?;
        if !f.is_zilp() {
            return Err(Error::Mode(
                "recurrent synthesis needs all margins zero (a ZILP function)".into(),
            ));
        }
        self.cached(Route::Recurrent, f, |s, f| s.build_recurrent(f))
    }

    /// Networks of adders, splitters, delayers and presinks for bounded functions.
    pub fn bounded(&mut self, f: &ZilepFunction) -> Result<Arc<Network>> {
        require_unary(f)?;
        if !f.is_bounded() {
            return Err(Error::Mode(
                "bounded synthesis needs every linear coefficient zero".into(),
            ));
        }
        self.cached(Route::Bounded, f, |s, f| s.build_bounded(f))
    }

    /// Networks of all five gates for arbitrary ZILEP functions.
    pub fn general(&mut self, f: &ZilepFunction) -> Result<Arc<Network>> {
        require_unary(f)?;
        self.cached(Route::General, f, |s, f| s.build_general(f))
    }

    fn route(&mut self, route: Route, f: &ZilepFunction) -> Result<Arc<Network>> {
        match route {
            Route::Recurrent => self.recurrent(f),
            Route::Bounded => self.bounded(f),
            Route::General => self.general(f),
            Route::TwoLayer => self.cached(route, f, |s, f| s.two_layer(f)),
        }
    }

    /// Common front end: constant zero, integer-linear functions, and
    /// coordinates the function ignores.
    fn reduce_trivial(
        &mut self,
        route: Route,
        f: &ZilepFunction,
    ) -> Result<Option<Network>> {
        let k = f.arity();
        if f.table().iter().all(|&v| v == 0) {
            self.fired("zero");
            return Ok(Some(zero_network(k)));
        }
        if let Some(rows) = f.integer_linear() {
            self.fired("linear");
            return Ok(Some(linear_network(&rows)));
        }
        let keep: Vec<usize> = (0..k).filter(|&i| f.depends_on(i)).collect();
        if keep.len() < k {
            self.fired("drop-coordinate");
            let g = restrict(f, &keep)?;
            let net = self.route(route, &g)?;
            return Ok(Some(lift(&net, k, &keep)));
        }
        Ok(None)
    }
}

fn require_unary(f: &ZilepFunction) -> Result<()> {
    if f.output_count() != 1 {
        return Err(Error::Function(format!(
            "pass expects a single output, got {}",
            f.output_count()
        )));
    }
    Ok(())
}

/// Network computing the constant zero: inputs are discarded.
pub(crate) fn zero_network(k: usize) -> Network {
    let mut b = NetworkBuilder::new();
    for _ in 0..k {
        let x = b.input();
        b.trash(x);
    }
    b.output(Wire::Zero);
    b.finish()
}

/// Splitter and adder trees computing `x ↦ A x` for an integer matrix.
pub(crate) fn linear_network(rows: &[Vec<u64>]) -> Network {
    let k = rows.first().map_or(0, Vec::len);
    let mut b = NetworkBuilder::new();
    let xs: Vec<Wire> = (0..k).map(|_| b.input()).collect();
    let mut copies: Vec<std::vec::IntoIter<Wire>> = (0..k)
        .map(|i| {
            let uses = rows.iter().map(|r| r[i] as usize).sum();
            b.split(xs[i], uses).into_iter()
        })
        .collect();
    for row in rows {
        let mut terms = Vec::new();
        for (i, &a) in row.iter().enumerate() {
            for _ in 0..a {
                terms.push(copies[i].next().expect("copy reserved"));
            }
        }
        let s = b.add(terms);
        b.output(s);
    }
    b.finish()
}

/// Direct construction for integer-linear functions with any number of outputs.
pub fn synth_linear(f: &ZilepFunction) -> Result<Network> {
    let rows = f.integer_linear().ok_or_else(|| {
        Error::Mode("function is not an integer matrix times its input".into())
    })?;
    Ok(linear_network(&rows))
}

/// `f` as a function of the coordinates in `keep`, the others set to zero.
pub(crate) fn restrict(f: &ZilepFunction, keep: &[usize]) -> Result<ZilepFunction> {
    let k = f.arity();
    let periods = keep.iter().map(|&i| f.periods()[i]).collect();
    let margins = keep.iter().map(|&i| f.margins()[i]).collect();
    ZilepFunction::from_fn(keep.len(), f.output_count(), periods, margins, |y| {
        let mut x = vec![0; k];
        for (&i, &v) in keep.iter().zip(y) {
            x[i] = v;
        }
        f.eval(&x)
    })
}

/// Widens a network on the coordinates `keep` to all `k` coordinates,
/// discarding the rest.
pub(crate) fn lift(net: &Network, k: usize, keep: &[usize]) -> Network {
    let mut b = NetworkBuilder::new();
    let xs: Vec<Wire> = (0..k).map(|_| b.input()).collect();
    let ins: Vec<Wire> = keep.iter().map(|&i| xs[i]).collect();
    for (i, &x) in xs.iter().enumerate() {
        if !keep.contains(&i) {
            b.trash(x);
        }
    }
    for w in b.embed(net, &ins) {
        b.output(w);
    }
    b.finish()
}

/// `n` copies of each wire in `ws`: `result[c][i]` is copy `c` of wire `i`.
pub(crate) fn split_all(b: &mut NetworkBuilder, ws: &[Wire], n: usize) -> Vec<Vec<Wire>> {
    let per_wire: Vec<Vec<Wire>> = ws.iter().map(|&w| b.split(w, n)).collect();
    (0..n)
        .map(|c| per_wire.iter().map(|copies| copies[c]).collect())
        .collect()
}

/// Checks `holds` at every point of `[0, hi]`, reporting the first failure.
pub(crate) fn check_identity(
    pass: &'static str,
    hi: &[u64],
    what: &ZilepFunction,
    holds: impl Fn(&[u64]) -> bool,
) -> Result<()> {
    match grid::inclusive(hi).find(|x| !holds(x)) {
        None => Ok(()),
        Some(x) => Err(Error::synth(
            pass,
            format!("identity fails at {x:?} for {}", what.to_json()),
        )),
    }
}

/// Box `[0, r_i + λ_i]` of a function, as inclusive bounds.
pub(crate) fn table_bounds(f: &ZilepFunction) -> Vec<u64> {
    f.box_dims().iter().map(|d| d - 1).collect()
}

/// The unary components of a multi-output function.
pub fn split_outputs(f: &ZilepFunction) -> Vec<ZilepFunction> {
    (0..f.output_count()).map(|j| f.component(j)).collect()
}

/// Feeds every input to each per-output network through splitter trees and
/// collects one output from each.
pub fn fan_out(k: usize, parts: &[Arc<Network>]) -> Network {
    let mut b = NetworkBuilder::new();
    let xs: Vec<Wire> = (0..k).map(|_| b.input()).collect();
    let copies = split_all(&mut b, &xs, parts.len());
    let outs: Vec<Wire> = parts
        .iter()
        .zip(&copies)
        .map(|(net, ins)| b.embed(net, ins)[0])
        .collect();
    for w in outs {
        b.output(w);
    }
    b.finish()
}

/// A compiled network together with its report.
#[derive(Debug, Clone)]
pub struct Compiled {
    pub network: Network,
    pub report: SynthReport,
}

/// Compiles a function with any number of outputs.
pub fn compile(f: &ZilepFunction, mode: Mode) -> Result<Compiled> {
    let mode = mode.resolve(f);
    let route = match mode {
        Mode::Recurrent => {
            if !f.is_zilp() {
                return Err(Error::Mode(format!(
                    "recurrent synthesis needs all margins zero, got margins {:?}; use general",
                    f.margins()
                )));
            }
            Route::Recurrent
        }
        Mode::Bounded => {
            if !f.is_bounded() {
                return Err(Error::Mode(
                    "bounded synthesis needs every linear coefficient zero; use general".into(),
                ));
            }
            Route::Bounded
        }
        Mode::General => Route::General,
        Mode::Auto => unreachable!("resolved above"),
    };
    let mut s = Synthesizer::new();
    let parts = split_outputs(f)
        .iter()
        .map(|g| s.route(route, g))
        .collect::<Result<Vec<_>>>()?;
    let network = if parts.len() == 1 {
        (*parts[0]).clone()
    } else {
        s.fired("split-outputs");
        fan_out(f.arity(), &parts)
    };
    let mut report = report(&network);
    report.passes = s.passes().iter().map(|(k, v)| (k.to_string(), *v)).collect();
    Ok(Compiled { network, report })
}

pub fn synth_recurrent(f: &ZilepFunction) -> Result<Network> {
    Ok((*Synthesizer::new().recurrent(f)?).clone())
}

pub fn synth_bounded(f: &ZilepFunction) -> Result<Network> {
    Ok((*Synthesizer::new().bounded(f)?).clone())
}

pub fn synth_general(f: &ZilepFunction) -> Result<Network> {
    Ok((*Synthesizer::new().general(f)?).clone())
}

pub fn synth_unary_recurrent(f: &ZilepFunction) -> Result<Network> {
    recurrent::unary_recurrent(f)
}

pub fn main_reduction(f: &ZilepFunction) -> Result<MainReduction> {
    recurrent::main_reduction(f)
}

pub fn interleave_plan(f: &ZilepFunction, case: InterleaveCase, n: u64) -> Result<InterleavePlan> {
    general::interleave_plan(f, case, n)
}

pub fn two_layer(f: &ZilepFunction) -> Result<Network> {
    let mut s = Synthesizer::new();
    s.two_layer(f)
}
