//! Abelian networks: processors wired together by directed edges.
//!
//! Every edge has a tail (an input of the network, a node output port, or
//! the constant-zero source) and a head (a node input port, an output of the
//! network, or the trash). Letters on an edge are indistinguishable, so an
//! execution only tracks counts.

pub mod emulate;
pub mod exec;
pub mod halting;
pub mod io;

use std::sync::Arc;

use petgraph::algo::toposort;
use petgraph::graph::{DiGraph, NodeIndex};

use crate::error::{Error, Result};
use crate::gates::GateSpec;
use crate::processor::AbelianProcessor;

pub use emulate::network_to_processor;
pub use exec::{bulk_eval, run, ExecState, Outcome, RunOptions, Schedule};
pub use halting::{check_halting, HaltingVerdict};
pub use io::{export_dot, export_json, import_json};

#[derive(Debug, Clone, PartialEq)]
pub enum NodeKind {
    Gate(GateSpec),
    Processor(Arc<AbelianProcessor>),
}

impl NodeKind {
    pub fn input_count(&self) -> usize {
        match self {
            NodeKind::Gate(g) => g.input_count(),
            NodeKind::Processor(p) => p.arity(),
        }
    }

    pub fn output_count(&self) -> usize {
        match self {
            NodeKind::Gate(g) => g.output_count(),
            NodeKind::Processor(p) => p.output_count(),
        }
    }

    pub fn initial_state(&self) -> usize {
        match self {
            NodeKind::Gate(g) => g.initial_state(),
            NodeKind::Processor(p) => p.initial(),
        }
    }

    /// Feeds `n` letters on input `port`; adds the emitted letters to `out`.
    pub fn fire(&self, state: usize, port: usize, n: u64, out: &mut [u64]) -> usize {
        match self {
            NodeKind::Gate(g) => g.fire(state, n, out),
            NodeKind::Processor(p) => {
                let mut q = state;
                for _ in 0..n {
                    for (acc, o) in out.iter_mut().zip(p.output(port, q)) {
                        *acc += o;
                    }
                    q = p.transition(port, q);
                }
                q
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            NodeKind::Gate(g) => g.glyph(),
            NodeKind::Processor(p) => format!("proc[{}]", p.state_count()),
        }
    }

    pub fn gate(&self) -> Option<&GateSpec> {
        match self {
            NodeKind::Gate(g) => Some(g),
            NodeKind::Processor(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tail {
    Input,
    /// Never carries a letter.
    Zero,
    Node { node: usize, port: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Head {
    Node { node: usize, port: usize },
    Output,
    Trash,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub tail: Tail,
    pub head: Head,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    nodes: Vec<NodeKind>,
    edges: Vec<Edge>,
    inputs: Vec<usize>,
    outputs: Vec<usize>,
    trash: Vec<usize>,
    /// Edge feeding each input port of each node.
    node_in: Vec<Vec<usize>>,
    /// Edge leaving each output port of each node.
    node_out: Vec<Vec<usize>>,
}

impl Network {
    /// Checks the wiring: every node port is covered by exactly one edge,
    /// and the input, output and trash lists name exactly the dangling edges.
    pub fn new(
        nodes: Vec<NodeKind>,
        edges: Vec<Edge>,
        inputs: Vec<usize>,
        outputs: Vec<usize>,
        trash: Vec<usize>,
    ) -> Result<Self> {
        for (v, kind) in nodes.iter().enumerate() {
            if let NodeKind::Gate(g) = kind {
                g.validate()
                    .map_err(|e| Error::Network(format!("node {v}: {e}")))?;
            }
        }
        let mut node_in: Vec<Vec<Option<usize>>> =
            nodes.iter().map(|n| vec![None; n.input_count()]).collect();
        let mut node_out: Vec<Vec<Option<usize>>> =
            nodes.iter().map(|n| vec![None; n.output_count()]).collect();
        for (e, edge) in edges.iter().enumerate() {
            if let Tail::Node { node, port } = edge.tail {
                let slot = node_out
                    .get_mut(node)
                    .and_then(|ports| ports.get_mut(port))
                    .ok_or_else(|| {
                        Error::Network(format!("edge {e}: no output port {port} on node {node}"))
                    })?;
                if let Some(other) = slot.replace(e) {
                    return Err(Error::Network(format!(
                        "edge {e}: output port {port} of node {node} already drives edge {other}"
                    )));
                }
            }
            if let Head::Node { node, port } = edge.head {
                let slot = node_in
                    .get_mut(node)
                    .and_then(|ports| ports.get_mut(port))
                    .ok_or_else(|| {
                        Error::Network(format!("edge {e}: no input port {port} on node {node}"))
                    })?;
                if let Some(other) = slot.replace(e) {
                    return Err(Error::Network(format!(
                        "edge {e}: input port {port} of node {node} already fed by edge {other}"
                    )));
                }
            }
        }
        let node_in = unwrap_ports(node_in, "input", "fed")?;
        let node_out = unwrap_ports(node_out, "output", "connected")?;
        check_list(&edges, &inputs, "input", |e| e.tail == Tail::Input)?;
        check_list(&edges, &outputs, "output", |e| e.head == Head::Output)?;
        check_list(&edges, &trash, "trash", |e| e.head == Head::Trash)?;
        Ok(Network {
            nodes,
            edges,
            inputs,
            outputs,
            trash,
            node_in,
            node_out,
        })
    }

    pub fn nodes(&self) -> &[NodeKind] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn inputs(&self) -> &[usize] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[usize] {
        &self.outputs
    }

    pub fn trash(&self) -> &[usize] {
        &self.trash
    }

    pub fn node_inputs(&self, node: usize) -> &[usize] {
        &self.node_in[node]
    }

    pub fn node_outputs(&self, node: usize) -> &[usize] {
        &self.node_out[node]
    }

    pub fn initial_states(&self) -> Vec<usize> {
        self.nodes.iter().map(NodeKind::initial_state).collect()
    }

    pub(crate) fn node_graph(&self) -> DiGraph<(), usize> {
        let mut g = DiGraph::<(), usize>::with_capacity(self.nodes.len(), self.edges.len());
        for _ in &self.nodes {
            g.add_node(());
        }
        for (e, edge) in self.edges.iter().enumerate() {
            if let (Tail::Node { node: a, .. }, Head::Node { node: b, .. }) = (edge.tail, edge.head)
            {
                g.add_edge(NodeIndex::new(a), NodeIndex::new(b), e);
            }
        }
        g
    }

    /// Nodes in an order where every edge points forward, if one exists.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        toposort(&self.node_graph(), None)
            .ok()
            .map(|order| order.into_iter().map(|v| v.index()).collect())
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_some()
    }

    /// Number of nodes holding each gate kind, plus processors.
    pub fn count_kind(&self, kind: &str) -> usize {
        self.nodes
            .iter()
            .filter(|n| match n {
                NodeKind::Gate(g) => g.kind() == kind,
                NodeKind::Processor(_) => kind == "processor",
            })
            .count()
    }
}

fn unwrap_ports(
    ports: Vec<Vec<Option<usize>>>,
    side: &str,
    verb: &str,
) -> Result<Vec<Vec<usize>>> {
    ports
        .into_iter()
        .enumerate()
        .map(|(v, ps)| {
            ps.into_iter()
                .enumerate()
                .map(|(p, e)| {
                    e.ok_or_else(|| {
                        Error::Network(format!("node {v}: {side} port {p} is not {verb}"))
                    })
                })
                .collect()
        })
        .collect()
}

fn check_list(
    edges: &[Edge],
    list: &[usize],
    what: &str,
    belongs: impl Fn(&Edge) -> bool,
) -> Result<()> {
    let mut seen = vec![false; edges.len()];
    for &e in list {
        let edge = edges
            .get(e)
            .ok_or_else(|| Error::Network(format!("{what} list names missing edge {e}")))?;
        if !belongs(edge) {
            return Err(Error::Network(format!(
                "edge {e} is listed as {what} but is not wired as one"
            )));
        }
        if std::mem::replace(&mut seen[e], true) {
            return Err(Error::Network(format!("edge {e} is listed twice as {what}")));
        }
    }
    if let Some(e) = (0..edges.len()).find(|&e| belongs(&edges[e]) && !seen[e]) {
        return Err(Error::Network(format!("edge {e} is a dangling {what} edge missing from the {what} list")));
    }
    Ok(())
}

/// An edge whose head is not connected yet, or the constant-zero signal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Wire {
    Edge(usize),
    Zero,
}

/// Incremental network construction with local simplification: one-way
/// trees and threshold-one topplers are wires, gates fed only zeros are
/// dropped, and nodes whose outputs are all discarded are removed.
#[derive(Debug, Default, Clone)]
pub struct NetworkBuilder {
    nodes: Vec<NodeKind>,
    tails: Vec<Tail>,
    heads: Vec<Option<Head>>,
    inputs: Vec<usize>,
    outputs: Vec<usize>,
}

impl NetworkBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    fn edge(&mut self, tail: Tail) -> usize {
        self.tails.push(tail);
        self.heads.push(None);
        self.tails.len() - 1
    }

    fn connect(&mut self, w: Wire, head: Head) {
        let e = match w {
            Wire::Edge(e) => e,
            Wire::Zero => self.edge(Tail::Zero),
        };
        assert!(self.heads[e].is_none(), "wire {e} connected twice");
        self.heads[e] = Some(head);
    }

    pub fn input(&mut self) -> Wire {
        let e = self.edge(Tail::Input);
        self.inputs.push(e);
        Wire::Edge(e)
    }

    pub fn node(&mut self, kind: NodeKind, ins: &[Wire]) -> Vec<Wire> {
        assert_eq!(ins.len(), kind.input_count(), "wrong number of node inputs");
        let node = self.nodes.len();
        let outs = kind.output_count();
        self.nodes.push(kind);
        for (port, &w) in ins.iter().enumerate() {
            self.connect(w, Head::Node { node, port });
        }
        (0..outs)
            .map(|port| Wire::Edge(self.edge(Tail::Node { node, port })))
            .collect()
    }

    pub fn gate(&mut self, g: GateSpec, ins: &[Wire]) -> Vec<Wire> {
        self.node(NodeKind::Gate(g), ins)
    }

    pub fn processor(&mut self, p: Arc<AbelianProcessor>, ins: &[Wire]) -> Vec<Wire> {
        self.node(NodeKind::Processor(p), ins)
    }

    pub fn gate_wire(&mut self, g: GateSpec, w: Wire) -> Wire {
        self.gate(g, &[w])[0]
    }

    /// `n` copies of `w` through a balanced binary tree of splitters, left
    /// subtrees taking the extra leaf.
    pub fn split(&mut self, w: Wire, n: usize) -> Vec<Wire> {
        match (w, n) {
            (_, 0) => {
                self.trash(w);
                Vec::new()
            }
            (_, 1) => vec![w],
            (Wire::Zero, _) => vec![Wire::Zero; n],
            _ => {
                let s = self.gate(GateSpec::SPLITTER, &[w]);
                let left = n.div_ceil(2);
                let mut out = self.split(s[0], left);
                out.extend(self.split(s[1], n - left));
                out
            }
        }
    }

    /// Sum through a balanced binary tree of adders.
    pub fn add(&mut self, ws: Vec<Wire>) -> Wire {
        let live: Vec<Wire> = ws.into_iter().filter(|w| *w != Wire::Zero).collect();
        self.add_tree(&live)
    }

    fn add_tree(&mut self, ws: &[Wire]) -> Wire {
        match ws.len() {
            0 => Wire::Zero,
            1 => ws[0],
            n => {
                let left = n.div_ceil(2);
                let a = self.add_tree(&ws[..left]);
                let b = self.add_tree(&ws[left..]);
                self.gate(GateSpec::ADDER, &[a, b])[0]
            }
        }
    }

    pub fn toppler(&mut self, w: Wire, lambda: u64, prime: u64) -> Wire {
        assert!(prime < lambda, "prime {prime} not below threshold {lambda}");
        if lambda == 1 || w == Wire::Zero {
            return w;
        }
        self.gate_wire(GateSpec::toppler(lambda, prime), w)
    }

    pub fn delayer(&mut self, w: Wire) -> Wire {
        if w == Wire::Zero {
            return w;
        }
        self.gate_wire(GateSpec::Delayer, w)
    }

    pub fn presink(&mut self, w: Wire) -> Wire {
        if w == Wire::Zero {
            return w;
        }
        self.gate_wire(GateSpec::Presink, w)
    }

    pub fn output(&mut self, w: Wire) {
        let e = match w {
            Wire::Edge(e) => e,
            Wire::Zero => self.edge(Tail::Zero),
        };
        assert!(self.heads[e].is_none(), "wire {e} connected twice");
        self.heads[e] = Some(Head::Output);
        self.outputs.push(e);
    }

    pub fn trash(&mut self, w: Wire) {
        if let Wire::Edge(e) = w {
            assert!(self.heads[e].is_none(), "wire {e} connected twice");
            self.heads[e] = Some(Head::Trash);
        }
    }

    /// Copies `net` into the builder, feeding its inputs from `ins`;
    /// returns wires carrying its outputs.
    pub fn embed(&mut self, net: &Network, ins: &[Wire]) -> Vec<Wire> {
        assert_eq!(ins.len(), net.inputs.len(), "wrong number of inputs for embedded network");
        let offset = self.nodes.len();
        self.nodes.extend(net.nodes.iter().cloned());
        let mut input_pos = vec![usize::MAX; net.edges.len()];
        for (t, &e) in net.inputs.iter().enumerate() {
            input_pos[e] = t;
        }
        let mut output_pos = vec![usize::MAX; net.edges.len()];
        for (t, &e) in net.outputs.iter().enumerate() {
            output_pos[e] = t;
        }
        let mut outs = vec![Wire::Zero; net.outputs.len()];
        for (e, edge) in net.edges.iter().enumerate() {
            let source = match edge.tail {
                Tail::Input => ins[input_pos[e]],
                Tail::Zero => Wire::Zero,
                Tail::Node { node, port } => Wire::Edge(self.edge(Tail::Node {
                    node: node + offset,
                    port,
                })),
            };
            match edge.head {
                Head::Node { node, port } => self.connect(
                    source,
                    Head::Node {
                        node: node + offset,
                        port,
                    },
                ),
                Head::Output => outs[output_pos[e]] = source,
                Head::Trash => self.trash(source),
            }
        }
        outs
    }

    /// Simplifies and validates. Panics on unconnected wires.
    pub fn finish(self) -> Network {
        let mut tails = self.tails;
        let mut heads: Vec<Head> = self
            .heads
            .into_iter()
            .enumerate()
            .map(|(e, h)| h.unwrap_or_else(|| panic!("wire {e} left unconnected")))
            .collect();
        let nodes = self.nodes;
        let mut outputs = self.outputs;
        let mut alive_edge = vec![true; tails.len()];
        let mut alive_node = vec![true; nodes.len()];
        let mut node_in = vec![Vec::new(); nodes.len()];
        let mut node_out = vec![Vec::new(); nodes.len()];
        for e in 0..tails.len() {
            if let Head::Node { node, port } = heads[e] {
                node_in[node].push((port, e));
            }
            if let Tail::Node { node, port } = tails[e] {
                node_out[node].push((port, e));
            }
        }
        for v in 0..nodes.len() {
            node_in[v].sort_unstable();
            node_out[v].sort_unstable();
        }
        let mut node_in: Vec<Vec<usize>> = node_in
            .into_iter()
            .map(|ps| ps.into_iter().map(|(_, e)| e).collect())
            .collect();
        let node_out: Vec<Vec<usize>> = node_out
            .into_iter()
            .map(|ps| ps.into_iter().map(|(_, e)| e).collect())
            .collect();

        let mut changed = true;
        while changed {
            changed = false;
            for v in 0..nodes.len() {
                if !alive_node[v] {
                    continue;
                }
                let ins = node_in[v].clone();
                let outs = node_out[v].clone();
                let all_trash = outs.iter().all(|&e| heads[e] == Head::Trash);
                let all_zero = ins.iter().all(|&e| tails[e] == Tail::Zero);
                let gate = nodes[v].gate().copied();
                if all_trash {
                    // nobody listens: drop the node, discard what feeds it
                    for &e in &ins {
                        heads[e] = Head::Trash;
                    }
                    for &e in &outs {
                        alive_edge[e] = false;
                    }
                    alive_node[v] = false;
                    changed = true;
                } else if all_zero && gate.is_some() {
                    // a gate that never receives a letter never emits one
                    for &e in &ins {
                        alive_edge[e] = false;
                    }
                    for &e in &outs {
                        tails[e] = Tail::Zero;
                    }
                    alive_node[v] = false;
                    changed = true;
                } else if let Some(GateSpec::Splitter { fan: 2 }) = gate {
                    let live: Vec<usize> =
                        outs.iter().copied().filter(|&e| heads[e] != Head::Trash).collect();
                    if live.len() == 1 {
                        let inp = ins[0];
                        splice(&mut heads, &mut node_in, &mut outputs, inp, live[0]);
                        for &e in &outs {
                            alive_edge[e] = false;
                        }
                        alive_node[v] = false;
                        changed = true;
                    }
                } else if let Some(GateSpec::Adder { fan: 2 }) = gate {
                    let live: Vec<usize> =
                        ins.iter().copied().filter(|&e| tails[e] != Tail::Zero).collect();
                    if live.len() == 1 {
                        let out = outs[0];
                        for &e in &ins {
                            if e != live[0] {
                                alive_edge[e] = false;
                            }
                        }
                        splice(&mut heads, &mut node_in, &mut outputs, live[0], out);
                        alive_edge[out] = false;
                        alive_node[v] = false;
                        changed = true;
                    }
                }
            }
        }
        // zero signals nobody reads
        for e in 0..tails.len() {
            if tails[e] == Tail::Zero && heads[e] == Head::Trash {
                alive_edge[e] = false;
            }
        }

        let mut node_map = vec![usize::MAX; nodes.len()];
        let mut new_nodes = Vec::new();
        for (v, kind) in nodes.into_iter().enumerate() {
            if alive_node[v] {
                node_map[v] = new_nodes.len();
                new_nodes.push(kind);
            }
        }
        let mut edge_map = vec![usize::MAX; tails.len()];
        let mut edges = Vec::new();
        for e in 0..tails.len() {
            if !alive_edge[e] {
                continue;
            }
            edge_map[e] = edges.len();
            let tail = match tails[e] {
                Tail::Node { node, port } => Tail::Node {
                    node: node_map[node],
                    port,
                },
                t => t,
            };
            let head = match heads[e] {
                Head::Node { node, port } => Head::Node {
                    node: node_map[node],
                    port,
                },
                h => h,
            };
            edges.push(Edge { tail, head });
        }
        let outputs = outputs.iter().map(|&e| edge_map[e]).collect();
        let inputs = self.inputs.iter().map(|&e| edge_map[e]).collect();
        let trash = edges
            .iter()
            .enumerate()
            .filter(|(_, edge)| edge.head == Head::Trash)
            .map(|(e, _)| e)
            .collect();
        Network::new(new_nodes, edges, inputs, outputs, trash).expect("builder emits valid networks")
    }
}

/// Redirects edge `keep` to the head of edge `drop`; the caller retires `drop`.
fn splice(
    heads: &mut [Head],
    node_in: &mut [Vec<usize>],
    outputs: &mut [usize],
    keep: usize,
    drop: usize,
) {
    let h = heads[drop];
    heads[keep] = h;
    match h {
        Head::Node { node, port } => node_in[node][port] = keep,
        Head::Output => {
            let slot = outputs.iter_mut().find(|e| **e == drop).expect("output edge listed");
            *slot = keep;
        }
        Head::Trash => {}
    }
}
