//! Worked examples and random generators used by tests, the CLI and the
//! Python bindings.

use std::sync::Arc;

use num_integer::Integer;
use rand::Rng;

use crate::gates::{self, GateSpec, TreeKind};
use crate::network::{network_to_processor, Network, NetworkBuilder, Wire};
use crate::processor::AbelianProcessor;
use crate::synth::{self, rewrite};
use crate::zilep::ZilepFunction;

/// Unary ZILP with period 4 and slope 3/4: `0, 1, 3, 3, 3, 4, 6, 6, 6, …`.
pub fn three_quarters_function() -> ZilepFunction {
    ZilepFunction::from_unary_values(&[0, 1, 3, 3, 3], 4, 0).expect("valid unary function")
}

/// The unary example drawn with multi-way gates: a 3-splitter into
/// 4-topplers primed 3, 2, 2, summed by a 3-adder. `primes` overrides the
/// toppler primes, for building deliberately wrong variants.
pub fn three_quarters_network(primes: [u64; 3]) -> Network {
    let mut b = NetworkBuilder::new();
    let x = b.input();
    let copies = b.gate(GateSpec::Splitter { fan: 3 }, &[x]);
    let tops: Vec<Wire> = copies
        .into_iter()
        .zip(primes)
        .map(|(w, q)| b.toppler(w, 4, q))
        .collect();
    let s = b.gate(GateSpec::Adder { fan: 3 }, &tops)[0];
    b.output(s);
    b.finish()
}

/// Values of the two-variable example on `[0, 4] × [0, 5]`, rows indexed by `x_1`.
const PAIR_TABLE: [[u64; 6]; 5] = [
    [0, 0, 1, 2, 3, 4],
    [0, 1, 1, 2, 3, 4],
    [0, 1, 3, 3, 4, 4],
    [1, 1, 3, 4, 5, 5],
    [2, 2, 3, 4, 5, 6],
];

/// Two-variable ZILP with periods `(4, 5)` and slopes `(1/2, 4/5)`.
pub fn pair_function() -> ZilepFunction {
    ZilepFunction::from_fn(2, 1, vec![4, 5], vec![0, 0], |x| {
        vec![PAIR_TABLE[x[0] as usize][x[1] as usize]]
    })
    .expect("valid ZILP table")
}

/// The same periodic part with transient margins `(2, 1)`:
/// `f((x − 2)^+, (y − 1)^+) + min(x, 2) + min(y, 1)`.
pub fn transient_pair_function() -> ZilepFunction {
    let f = pair_function();
    ZilepFunction::from_fn(2, 1, vec![4, 5], vec![2, 1], |x| {
        let inner = f.eval1(&[x[0].saturating_sub(2), x[1].saturating_sub(1)]);
        vec![inner + x[0].min(2) + x[1].min(1)]
    })
    .expect("valid ZILEP function")
}

/// `⌊((x − 1)^+ + y)/2⌋ + min(x, 1)`: small, but compiled through
/// interleaving, two-layer combination and the main reduction.
pub fn transient_mix_function() -> ZilepFunction {
    ZilepFunction::from_fn(2, 1, vec![2, 2], vec![1, 0], |x| {
        vec![(x[0].saturating_sub(1) + x[1]) / 2 + x[0].min(1)]
    })
    .expect("valid ZILEP function")
}

/// `⌊(a·(x − s)^+ + c)/d⌋`.
#[derive(Debug, Clone)]
struct Term {
    a: Vec<u64>,
    c: u64,
    d: u64,
    s: Vec<u64>,
}

/// A random function kept in closed form alongside its table, so tests can
/// compare against a direct evaluation that does not go through the table.
#[derive(Debug, Clone)]
pub struct Sample {
    pub function: ZilepFunction,
    terms: Vec<Term>,
    /// Generators of nested up-sets; level `j` counts if `x` dominates a
    /// generator of level `j` or deeper.
    levels: Vec<Vec<Vec<u64>>>,
}

impl Sample {
    /// Value of the closed form at `x`.
    pub fn direct(&self, x: &[u64]) -> u64 {
        let floors: u64 = self
            .terms
            .iter()
            .map(|t| {
                let lin: u64 = t
                    .a
                    .iter()
                    .zip(x)
                    .zip(&t.s)
                    .map(|((ai, xi), si)| ai * xi.saturating_sub(*si))
                    .sum();
                (lin + t.c) / t.d
            })
            .sum();
        let above = |p: &Vec<u64>| p.iter().zip(x).all(|(a, b)| a <= b);
        let steps = (0..self.levels.len())
            .filter(|&j| self.levels[j..].iter().flatten().any(above))
            .count() as u64;
        floors + steps
    }

    fn build(
        periods: Vec<u64>,
        margins: Vec<u64>,
        terms: Vec<Term>,
        levels: Vec<Vec<Vec<u64>>>,
    ) -> Sample {
        let mut sample = Sample {
            function: ZilepFunction::zero(1, 1),
            terms,
            levels,
        };
        let k = periods.len();
        sample.function = ZilepFunction::from_fn(k, 1, periods, margins, |x| vec![sample.direct(x)])
            .expect("closed forms of this shape are ZILEP")
            .minimized();
        sample
    }
}

/// One to three floor terms with `d ≤ 5`, each `a_i` a multiple of
/// `d / gcd(d, λ_i)` so that the term has period dividing `λ_i`.
fn floor_terms(rng: &mut impl Rng, periods: &[u64], shifts: &[u64]) -> Vec<Term> {
    let count = rng.gen_range(1..=3);
    (0..count)
        .map(|_| {
            let d = rng.gen_range(1..=5u64);
            let a = periods
                .iter()
                .map(|&l| rng.gen_range(0..=2u64) * (d / d.gcd(&l)))
                .collect();
            let c = rng.gen_range(0..d);
            let s = shifts.iter().map(|&r| rng.gen_range(0..=r)).collect();
            Term { a, c, d, s }
        })
        .collect()
}

/// Random ZILP function with `k ≤ max_k` and periods at most `max_period`.
/// Slope denominators divide the periods.
pub fn random_zilp(rng: &mut impl Rng, max_k: usize, max_period: u64) -> Sample {
    let k = rng.gen_range(1..=max_k);
    let periods: Vec<u64> = (0..k).map(|_| rng.gen_range(1..=max_period)).collect();
    let terms = floor_terms(rng, &periods, &vec![0; k]);
    Sample::build(periods, vec![0; k], terms, Vec::new())
}

/// Random bounded function: a sum of indicators of nested up-sets, each
/// generated by one or two random points of `[0, r]`.
pub fn random_bounded(rng: &mut impl Rng, max_k: usize, max_bound: u64, max_margin: u64) -> Sample {
    let k = rng.gen_range(1..=max_k);
    let margins: Vec<u64> = (0..k).map(|_| rng.gen_range(1..=max_margin)).collect();
    let count = rng.gen_range(1..=max_bound) as usize;
    let levels = random_generators(rng, &margins, count);
    Sample::build(vec![1; k], margins, Vec::new(), levels)
}

fn random_generators(rng: &mut impl Rng, margins: &[u64], levels: usize) -> Vec<Vec<Vec<u64>>> {
    (0..levels)
        .map(|_| {
            let count = rng.gen_range(1..=2);
            (0..count)
                .map(|_| loop {
                    let p: Vec<u64> = margins.iter().map(|&r| rng.gen_range(0..=r)).collect();
                    if p.iter().any(|&v| v > 0) {
                        break p;
                    }
                })
                .collect()
        })
        .collect()
}

/// Random ZILEP function: shifted floor terms plus, usually, a bounded
/// part, with periods at most `max_period` and margins at most `max_margin`.
pub fn random_zilep(rng: &mut impl Rng, max_k: usize, max_period: u64, max_margin: u64) -> Sample {
    let k = rng.gen_range(1..=max_k);
    let periods: Vec<u64> = (0..k).map(|_| rng.gen_range(1..=max_period)).collect();
    let margins: Vec<u64> = (0..k).map(|_| rng.gen_range(0..=max_margin)).collect();
    let terms = floor_terms(rng, &periods, &margins);
    let levels = if margins.iter().any(|&r| r > 0) && rng.gen_bool(0.7) {
        let count = rng.gen_range(1..=2);
        random_generators(rng, &margins, count)
    } else {
        Vec::new()
    };
    Sample::build(periods, margins, terms, levels)
}

/// A small random network of gates, emulated as one processor.
/// Returns `None` when the joint state space exceeds `max_states`.
pub fn random_processor(
    rng: &mut impl Rng,
    max_k: usize,
    max_states: usize,
) -> Option<AbelianProcessor> {
    let k = rng.gen_range(1..=max_k);
    let mut b = NetworkBuilder::new();
    let mut pool: Vec<Wire> = (0..k).map(|_| b.input()).collect();
    let gates = rng.gen_range(1..=3);
    for _ in 0..gates {
        let w = pool.swap_remove(rng.gen_range(0..pool.len()));
        match rng.gen_range(0..5) {
            0 if !pool.is_empty() => {
                let v = pool.swap_remove(rng.gen_range(0..pool.len()));
                pool.push(b.add(vec![w, v]));
            }
            1 => pool.extend(b.split(w, 2)),
            2 => {
                let lambda = rng.gen_range(2..=4);
                let prime = rng.gen_range(0..lambda);
                pool.push(b.toppler(w, lambda, prime));
            }
            3 => pool.push(b.delayer(w)),
            _ => pool.push(b.presink(w)),
        }
    }
    for w in pool {
        b.output(w);
    }
    network_to_processor(&b.finish(), max_states).ok()
}

/// Networks used to exercise execution order: gates, the demo nodes,
/// synthesized networks and feedback loops.
pub fn fixture_networks() -> Vec<(String, Network)> {
    let mut out: Vec<(String, Network)> = Vec::new();
    let single = |g: GateSpec| {
        let mut b = NetworkBuilder::new();
        let ins: Vec<Wire> = (0..g.input_count()).map(|_| b.input()).collect();
        for w in b.gate(g, &ins) {
            b.output(w);
        }
        b.finish()
    };
    out.push(("adder".into(), single(GateSpec::ADDER)));
    out.push(("splitter".into(), single(GateSpec::SPLITTER)));
    out.push(("toppler-3-1".into(), single(GateSpec::toppler(3, 1))));
    out.push(("delayer".into(), single(GateSpec::Delayer)));
    out.push(("presink".into(), single(GateSpec::Presink)));
    for d in [2, 3] {
        out.push((format!("rotor-{d}"), gates::rotor_node(d).expect("valid degree")));
        out.push((format!("sandpile-{d}"), gates::sandpile_node(d).expect("valid degree")));
    }
    out.push((
        "rotor-aggregation-3".into(),
        gates::rotor_aggregation_node(3).expect("valid degree"),
    ));
    out.push((
        "splitter-tree-5".into(),
        gates::multiway_tree(TreeKind::Splitter, 5).expect("valid fan"),
    ));
    let recurrent = |f: &ZilepFunction| synth::synth_recurrent(f).expect("fixture synthesizes");
    out.push(("three-quarters".into(), recurrent(&three_quarters_function())));
    let pair = recurrent(&pair_function());
    out.push(("pair-feedback".into(), rewrite::rewrite_feedback(&pair)));
    out.push(("pair-unprimed".into(), rewrite::rewrite_unprime(&pair)));
    out.push(("pair".into(), pair));
    out.push((
        "transient-mix".into(),
        synth::synth_general(&transient_mix_function()).expect("fixture synthesizes"),
    ));
    out.push(("toppler-loop-5".into(), rewrite::toppler_loop(5, 2)));
    out.push(("toppler-loop-7".into(), rewrite::toppler_loop(7, 0)));
    out.push(("delayer-loop".into(), rewrite::delayer_loop()));
    let p = AbelianProcessor::new(
        vec!["x".into()],
        vec!["y".into()],
        vec!["a".into(), "b".into(), "c".into()],
        0,
        vec![vec![1, 2, 0]],
        vec![vec![vec![0], vec![0], vec![1]]],
    )
    .expect("three-state counter is valid");
    let mut b = NetworkBuilder::new();
    let x = b.input();
    let s = b.split(x, 2);
    let y = b.processor(Arc::new(p), &[s[0]])[0];
    let t = b.toppler(s[1], 2, 1);
    let z = b.add(vec![y, t]);
    b.output(z);
    out.push(("processor-mix".into(), b.finish()));
    out
}
