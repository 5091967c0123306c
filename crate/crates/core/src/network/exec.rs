//! Legal executions: letters are processed one at a time, in an order chosen
//! by a schedule, until every remaining letter sits on an output or trash edge.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Head, Network, NodeKind};
use crate::error::{Error, Result};

/// Which pending letter to process next.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Schedule {
    LowestEdgeId,
    /// Cycles through edge ids, resuming after the last edge served.
    RoundRobin,
    SeededRandom(u64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOptions {
    pub schedule: Schedule,
    /// Maximum number of processed letters; `None` uses [`default_budget`].
    pub budget: Option<u64>,
    pub trace: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            schedule: Schedule::LowestEdgeId,
            budget: None,
            trace: false,
        }
    }
}

impl RunOptions {
    pub fn with_schedule(schedule: Schedule) -> Self {
        RunOptions {
            schedule,
            ..Self::default()
        }
    }
}

/// Node states and per-edge letter counts part way through an execution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExecState {
    pub states: Vec<usize>,
    pub counts: Vec<u64>,
    pub steps: u64,
}

/// Result of a halted execution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub output: Vec<u64>,
    pub trash: Vec<u64>,
    pub states: Vec<usize>,
    pub steps: u64,
    /// Edge served at each step, when tracing.
    pub trace: Option<Vec<usize>>,
}

pub fn default_budget(net: &Network, input: &[u64]) -> u64 {
    let letters: u64 = input.iter().sum();
    1000u64
        .saturating_mul(1 + letters)
        .saturating_mul(net.nodes().len().max(1) as u64)
}

fn check_arity(net: &Network, input: &[u64]) -> Result<()> {
    if input.len() != net.inputs().len() {
        return Err(Error::InputArity {
            expected: net.inputs().len(),
            got: input.len(),
        });
    }
    Ok(())
}

/// Executes the network from its initial states.
pub fn run(net: &Network, input: &[u64], opts: &RunOptions) -> Result<Outcome> {
    run_from(net, net.initial_states(), input, opts)
}

#[allow(clippy::large_enum_variant)]
enum Active {
    Ordered { set: BTreeSet<usize>, cursor: usize, rotate: bool },
    Random { items: Vec<usize>, pos: Vec<usize>, rng: ChaCha8Rng },
}

impl Active {
    fn new(schedule: Schedule, edges: usize) -> Self {
        match schedule {
            Schedule::LowestEdgeId => Active::Ordered {
                set: BTreeSet::new(),
                cursor: 0,
                rotate: false,
            },
            Schedule::RoundRobin => Active::Ordered {
                set: BTreeSet::new(),
                cursor: 0,
                rotate: true,
            },
            Schedule::SeededRandom(seed) => Active::Random {
                items: Vec::new(),
                pos: vec![usize::MAX; edges],
                rng: ChaCha8Rng::seed_from_u64(seed),
            },
        }
    }

    fn insert(&mut self, e: usize) {
        match self {
            Active::Ordered { set, .. } => {
                set.insert(e);
            }
            Active::Random { items, pos, .. } => {
                if pos[e] == usize::MAX {
                    pos[e] = items.len();
                    items.push(e);
                }
            }
        }
    }

    fn remove(&mut self, e: usize) {
        match self {
            Active::Ordered { set, .. } => {
                set.remove(&e);
            }
            Active::Random { items, pos, .. } => {
                let at = pos[e];
                let last = items.pop().expect("edge is active");
                if last != e {
                    items[at] = last;
                    pos[last] = at;
                }
                pos[e] = usize::MAX;
            }
        }
    }

    fn pick(&mut self) -> Option<usize> {
        match self {
            Active::Ordered { set, cursor, rotate } => {
                let e = if *rotate {
                    set.range(*cursor..).next().or_else(|| set.iter().next())
                } else {
                    set.iter().next()
                }
                .copied()?;
                *cursor = e + 1;
                Some(e)
            }
            Active::Random { items, rng, .. } => {
                if items.is_empty() {
                    None
                } else {
                    Some(items[rng.gen_range(0..items.len())])
                }
            }
        }
    }
}

/// Executes from arbitrary node states, one letter per step.
pub fn run_from(
    net: &Network,
    states: Vec<usize>,
    input: &[u64],
    opts: &RunOptions,
) -> Result<Outcome> {
    check_arity(net, input)?;
    let budget = opts.budget.unwrap_or_else(|| default_budget(net, input));
    let edges = net.edges();
    let mut st = ExecState {
        states,
        counts: vec![0; edges.len()],
        steps: 0,
    };
    let mut active = Active::new(opts.schedule, edges.len());
    for (&e, &n) in net.inputs().iter().zip(input) {
        st.counts[e] += n;
        if n > 0 && matches!(edges[e].head, Head::Node { .. }) {
            active.insert(e);
        }
    }
    let mut trace = opts.trace.then(Vec::new);
    let mut buf = Vec::new();
    while let Some(e) = active.pick() {
        if st.steps >= budget {
            return Err(Error::BudgetExceeded {
                budget,
                state: Box::new(st),
            });
        }
        let Head::Node { node, port } = edges[e].head else {
            unreachable!("only node-bound edges are scheduled");
        };
        st.counts[e] -= 1;
        if st.counts[e] == 0 {
            active.remove(e);
        }
        let kind = &net.nodes()[node];
        buf.clear();
        buf.resize(kind.output_count(), 0);
        st.states[node] = kind.fire(st.states[node], port, 1, &mut buf);
        for (&out, &n) in net.node_outputs(node).iter().zip(&buf) {
            if n > 0 {
                st.counts[out] += n;
                if matches!(edges[out].head, Head::Node { .. }) {
                    active.insert(out);
                }
            }
        }
        st.steps += 1;
        if let Some(t) = trace.as_mut() {
            t.push(e);
        }
    }
    if let Some(bound) = step_bound(net, input) {
        assert!(
            u128::from(st.steps) <= bound,
            "acyclic execution took {} steps, above its a-priori bound {bound}",
            st.steps
        );
    }
    Ok(finish(net, st, trace))
}

fn finish(net: &Network, st: ExecState, trace: Option<Vec<usize>>) -> Outcome {
    Outcome {
        output: net.outputs().iter().map(|&e| st.counts[e]).collect(),
        trash: net.trash().iter().map(|&e| st.counts[e]).collect(),
        states: st.states,
        steps: st.steps,
        trace,
    }
}

/// Largest number of letters any node can emit on one output per letter received.
fn amplification(kind: &NodeKind) -> u128 {
    match kind {
        NodeKind::Gate(_) => 1,
        NodeKind::Processor(p) => (0..p.arity())
            .flat_map(|i| (0..p.state_count()).map(move |q| (i, q)))
            .flat_map(|(i, q)| p.output(i, q).iter().copied())
            .max()
            .map_or(0, u128::from),
    }
}

/// For acyclic networks, an upper bound on the number of steps of any
/// execution: letters on each edge are bounded in topological order.
pub fn step_bound(net: &Network, input: &[u64]) -> Option<u128> {
    let order = net.topological_order()?;
    let mut letters = vec![0u128; net.edges().len()];
    for (&e, &n) in net.inputs().iter().zip(input) {
        letters[e] = u128::from(n);
    }
    for v in order {
        let inflow: u128 = net
            .node_inputs(v)
            .iter()
            .map(|&e| letters[e])
            .fold(0, u128::saturating_add);
        let amp = amplification(&net.nodes()[v]);
        for &e in net.node_outputs(v) {
            letters[e] = inflow.saturating_mul(amp);
        }
    }
    Some(
        net.edges()
            .iter()
            .enumerate()
            .filter(|(_, edge)| matches!(edge.head, Head::Node { .. }))
            .map(|(e, _)| letters[e])
            .fold(0, u128::saturating_add),
    )
}

/// Fast evaluation that hands every pending letter of an edge to its node
/// at once. Acyclic networks are swept in topological order; others are
/// driven edge by edge until quiet.
pub fn bulk_eval(net: &Network, input: &[u64]) -> Result<Outcome> {
    bulk_eval_from(net, net.initial_states(), input, None)
}

pub fn bulk_eval_from(
    net: &Network,
    states: Vec<usize>,
    input: &[u64],
    budget: Option<u64>,
) -> Result<Outcome> {
    check_arity(net, input)?;
    let budget = budget.unwrap_or_else(|| default_budget(net, input));
    let edges = net.edges();
    let mut st = ExecState {
        states,
        counts: vec![0; edges.len()],
        steps: 0,
    };
    for (&e, &n) in net.inputs().iter().zip(input) {
        st.counts[e] += n;
    }
    let mut buf = Vec::new();
    let mut fire_edge = |st: &mut ExecState, e: usize, active: &mut Option<&mut BTreeSet<usize>>| {
        let Head::Node { node, port } = edges[e].head else {
            return;
        };
        let n = std::mem::take(&mut st.counts[e]);
        if n == 0 {
            return;
        }
        let kind = &net.nodes()[node];
        buf.clear();
        buf.resize(kind.output_count(), 0);
        st.states[node] = kind.fire(st.states[node], port, n, &mut buf);
        st.steps += n;
        for (&out, &m) in net.node_outputs(node).iter().zip(&buf) {
            st.counts[out] += m;
            if m > 0 && matches!(edges[out].head, Head::Node { .. }) {
                if let Some(a) = active.as_mut() {
                    a.insert(out);
                }
            }
        }
    };
    if let Some(order) = net.topological_order() {
        for v in order {
            for &e in net.node_inputs(v) {
                fire_edge(&mut st, e, &mut None);
            }
        }
    } else {
        let mut active: BTreeSet<usize> = (0..edges.len())
            .filter(|&e| st.counts[e] > 0 && matches!(edges[e].head, Head::Node { .. }))
            .collect();
        while let Some(e) = active.pop_first() {
            if st.steps >= budget {
                return Err(Error::BudgetExceeded {
                    budget,
                    state: Box::new(st),
                });
            }
            fire_edge(&mut st, e, &mut Some(&mut active));
        }
    }
    debug_assert!(edges
        .iter()
        .enumerate()
        .all(|(e, edge)| st.counts[e] == 0 || !matches!(edge.head, Head::Node { .. })));
    Ok(finish(net, st, None))
}
