//! Node-for-fragment substitutions: removing primes from topplers, and
//! replacing large topplers and delayers by loops of 2-topplers.

use crate::gates::GateSpec;
use crate::network::{Edge, Head, Network, NodeKind, Tail};

/// A fragment under construction, wired by raw edge lists so it may
/// contain cycles.
#[derive(Default)]
struct Raw {
    nodes: Vec<NodeKind>,
    edges: Vec<Edge>,
    inputs: Vec<usize>,
    outputs: Vec<usize>,
}

impl Raw {
    fn node(&mut self, g: GateSpec) -> usize {
        self.nodes.push(NodeKind::Gate(g));
        self.nodes.len() - 1
    }

    fn edge(&mut self, tail: Tail, head: Head) -> usize {
        self.edges.push(Edge { tail, head });
        let e = self.edges.len() - 1;
        if tail == Tail::Input {
            self.inputs.push(e);
        }
        if head == Head::Output {
            self.outputs.push(e);
        }
        e
    }

    fn finish(self) -> Network {
        Network::new(self.nodes, self.edges, self.inputs, self.outputs, Vec::new())
            .expect("fragment is well formed")
    }
}

fn port(node: usize, port: usize) -> Head {
    Head::Node { node, port }
}

fn from(node: usize, port: usize) -> Tail {
    Tail::Node { node, port }
}

/// `⌊(x + q)/λ⌋ = ⌊(x + q·min(x, 1))/λ⌋` since `q < λ`.
pub fn unprimed_toppler(lambda: u64, q: u64) -> Network {
    let mut r = Raw::default();
    let t = r.node(GateSpec::toppler(lambda, 0));
    if q == 0 {
        r.edge(Tail::Input, port(t, 0));
        r.edge(from(t, 0), Head::Output);
        return r.finish();
    }
    let s = r.node(GateSpec::SPLITTER);
    let p = r.node(GateSpec::Presink);
    let a = r.node(GateSpec::Adder { fan: q as usize + 1 });
    r.edge(Tail::Input, port(s, 0));
    r.edge(from(s, 0), port(a, 0));
    r.edge(from(s, 1), port(p, 0));
    if q == 1 {
        r.edge(from(p, 0), port(a, 1));
    } else {
        let sq = r.node(GateSpec::Splitter { fan: q as usize });
        r.edge(from(p, 0), port(sq, 0));
        for i in 0..q as usize {
            r.edge(from(sq, i), port(a, i + 1));
        }
    }
    r.edge(from(a, 0), port(t, 0));
    r.edge(from(t, 0), Head::Output);
    r.finish()
}

/// A binary counter of `⌈log₂ λ⌉` 2-topplers that restarts at `2^r − λ`
/// each time it overflows, by feeding the overflow letter back into the
/// stages whose bit is set. Primed `q` starts the counter `q` letters in.
pub fn toppler_loop(lambda: u64, q: u64) -> Network {
    assert!(lambda >= 2 && q < lambda, "toppler loop needs λ ≥ 2 and q < λ");
    let bits = u64::BITS - (lambda - 1).leading_zeros();
    let offset = (1u64 << bits) - lambda;
    let start = offset + q;
    let mut r = Raw::default();
    let stages: Vec<usize> = (0..bits)
        .map(|i| r.node(GateSpec::toppler(2, (start >> i) & 1)))
        .collect();
    let fed: Vec<Option<usize>> = (0..bits)
        .map(|i| ((offset >> i) & 1 == 1).then(|| r.node(GateSpec::ADDER)))
        .collect();
    let entry = |i: usize| match fed[i] {
        Some(a) => port(a, 0),
        None => port(stages[i], 0),
    };
    r.edge(Tail::Input, entry(0));
    for i in 0..bits as usize {
        if let Some(a) = fed[i] {
            r.edge(from(a, 0), port(stages[i], 0));
        }
        if i + 1 < bits as usize {
            r.edge(from(stages[i], 0), entry(i + 1));
        }
    }
    let last = stages[bits as usize - 1];
    let loops: Vec<usize> = fed.iter().flatten().copied().collect();
    if loops.is_empty() {
        r.edge(from(last, 0), Head::Output);
    } else {
        let s = r.node(GateSpec::Splitter { fan: loops.len() + 1 });
        r.edge(from(last, 0), port(s, 0));
        r.edge(from(s, 0), Head::Output);
        for (j, &a) in loops.iter().enumerate() {
            r.edge(from(s, j + 1), port(a, 1));
        }
    }
    r.finish()
}

/// `(x − 1)^+` from a 2-toppler whose every letter after the first returns
/// through an adder to keep it one letter short of firing.
pub fn delayer_loop() -> Network {
    let mut r = Raw::default();
    let a = r.node(GateSpec::ADDER);
    let t = r.node(GateSpec::toppler(2, 0));
    let s = r.node(GateSpec::SPLITTER);
    r.edge(Tail::Input, port(a, 0));
    r.edge(from(a, 0), port(t, 0));
    r.edge(from(t, 0), port(s, 0));
    r.edge(from(s, 0), Head::Output);
    r.edge(from(s, 1), port(a, 1));
    r.finish()
}

/// Replaces every node for which `fragment` returns a network with the
/// same numbers of inputs and outputs.
fn substitute(net: &Network, fragment: impl Fn(&NodeKind) -> Option<Network>) -> Network {
    let mut nodes: Vec<NodeKind> = Vec::new();
    let mut edges: Vec<Edge> = net.edges().to_vec();
    let mut trash: Vec<usize> = net.trash().to_vec();
    for (v, kind) in net.nodes().iter().enumerate() {
        let Some(frag) = fragment(kind) else {
            let w = nodes.len();
            nodes.push(kind.clone());
            for &e in net.node_inputs(v) {
                if let Head::Node { port, .. } = edges[e].head {
                    edges[e].head = Head::Node { node: w, port };
                }
            }
            for &e in net.node_outputs(v) {
                if let Tail::Node { port, .. } = edges[e].tail {
                    edges[e].tail = Tail::Node { node: w, port };
                }
            }
            continue;
        };
        assert_eq!(frag.inputs().len(), kind.input_count(), "fragment input arity");
        assert_eq!(frag.outputs().len(), kind.output_count(), "fragment output arity");
        let offset = nodes.len();
        nodes.extend(frag.nodes().iter().cloned());
        let shift_head = |h: Head| match h {
            Head::Node { node, port } => Head::Node { node: node + offset, port },
            other => other,
        };
        let shift_tail = |t: Tail| match t {
            Tail::Node { node, port } => Tail::Node { node: node + offset, port },
            other => other,
        };
        let mut local = vec![usize::MAX; frag.edges().len()];
        for (fe, edge) in frag.edges().iter().enumerate() {
            let is_in = edge.tail == Tail::Input;
            let is_out = edge.head == Head::Output;
            assert!(!(is_in && is_out), "fragments do not pass inputs straight through");
            if !is_in && !is_out {
                local[fe] = edges.len();
                edges.push(Edge {
                    tail: shift_tail(edge.tail),
                    head: shift_head(edge.head),
                });
                if edge.head == Head::Trash {
                    trash.push(local[fe]);
                }
            }
        }
        for (t, &fe) in frag.inputs().iter().enumerate() {
            let e = net.node_inputs(v)[t];
            edges[e].head = shift_head(frag.edges()[fe].head);
            if edges[e].head == Head::Trash {
                trash.push(e);
            }
        }
        for (t, &fe) in frag.outputs().iter().enumerate() {
            let e = net.node_outputs(v)[t];
            edges[e].tail = shift_tail(frag.edges()[fe].tail);
        }
    }
    trash.sort_unstable();
    Network::new(nodes, edges, net.inputs().to_vec(), net.outputs().to_vec(), trash)
        .expect("substitution preserves wiring")
}

/// Replaces each primed toppler with an unprimed one fed `x + q·min(x, 1)`.
pub fn rewrite_unprime(net: &Network) -> Network {
    substitute(net, |kind| match kind.gate() {
        Some(&GateSpec::Toppler { lambda, prime }) if prime > 0 => {
            Some(unprimed_toppler(lambda, prime))
        }
        _ => None,
    })
}

/// Replaces topplers with threshold at least 3, and delayers, by loops of
/// adders, splitters and 2-topplers. The result has directed cycles.
pub fn rewrite_feedback(net: &Network) -> Network {
    substitute(net, |kind| match kind.gate() {
        Some(&GateSpec::Toppler { lambda, prime }) if lambda >= 3 => {
            Some(toppler_loop(lambda, prime))
        }
        Some(GateSpec::Delayer) => Some(delayer_loop()),
        _ => None,
    })
}
