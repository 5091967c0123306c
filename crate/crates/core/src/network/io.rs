//! JSON and Graphviz forms of a network.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{Edge, Head, Network, NodeKind, Tail};
use crate::error::{Error, Result};
use crate::gates::GateSpec;
use crate::processor::{AbelianProcessor, ProcessorDoc};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkDoc {
    pub nodes: Vec<NodeDoc>,
    pub edges: Vec<EdgeDoc>,
    pub inputs: Vec<u64>,
    pub outputs: Vec<u64>,
    #[serde(default)]
    pub trash: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeDoc {
    pub id: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gate: Option<GateSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub processor: Option<ProcessorDoc>,
}

/// Either a node id or one of `"input"`, `"none"`, `"output"`, `"trash"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Endpoint {
    Node(u64),
    Named(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDoc {
    pub id: u64,
    #[serde(default)]
    pub from: Option<Endpoint>,
    #[serde(default)]
    pub to: Option<Endpoint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub from_port: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub to_port: Option<usize>,
}

pub fn to_doc(net: &Network) -> NetworkDoc {
    let nodes = net
        .nodes()
        .iter()
        .enumerate()
        .map(|(v, kind)| match kind {
            NodeKind::Gate(g) => NodeDoc {
                id: v as u64,
                gate: Some(*g),
                processor: None,
            },
            NodeKind::Processor(p) => NodeDoc {
                id: v as u64,
                gate: None,
                processor: Some(p.to_doc()),
            },
        })
        .collect();
    let edges = net
        .edges()
        .iter()
        .enumerate()
        .map(|(e, edge)| {
            let (from, from_port) = match edge.tail {
                Tail::Input => (Endpoint::Named("input".into()), None),
                Tail::Zero => (Endpoint::Named("none".into()), None),
                Tail::Node { node, port } => (Endpoint::Node(node as u64), Some(port)),
            };
            let (to, to_port) = match edge.head {
                Head::Output => (Endpoint::Named("output".into()), None),
                Head::Trash => (Endpoint::Named("trash".into()), None),
                Head::Node { node, port } => (Endpoint::Node(node as u64), Some(port)),
            };
            EdgeDoc {
                id: e as u64,
                from: Some(from),
                to: Some(to),
                from_port,
                to_port,
            }
        })
        .collect();
    let ids = |list: &[usize]| list.iter().map(|&e| e as u64).collect();
    NetworkDoc {
        nodes,
        edges,
        inputs: ids(net.inputs()),
        outputs: ids(net.outputs()),
        trash: ids(net.trash()),
    }
}

pub fn from_doc(doc: NetworkDoc) -> Result<Network> {
    let mut node_index = HashMap::new();
    let mut nodes = Vec::with_capacity(doc.nodes.len());
    for (pos, n) in doc.nodes.into_iter().enumerate() {
        if node_index.insert(n.id, pos).is_some() {
            return Err(Error::Network(format!("node {} (position {pos}): duplicate id", n.id)));
        }
        let kind = match (n.gate, n.processor) {
            (Some(g), None) => {
                g.validate()
                    .map_err(|e| Error::Network(format!("node {}: {e}", n.id)))?;
                NodeKind::Gate(g)
            }
            (None, Some(p)) => NodeKind::Processor(Arc::new(
                AbelianProcessor::from_doc(p)
                    .map_err(|e| Error::Network(format!("node {}: {e}", n.id)))?,
            )),
            _ => {
                return Err(Error::Network(format!(
                    "node {}: exactly one of \"gate\" and \"processor\" is required",
                    n.id
                )))
            }
        };
        nodes.push(kind);
    }
    let mut edge_docs = doc.edges;
    edge_docs.sort_by_key(|e| e.id);
    if let Some(w) = edge_docs.windows(2).find(|w| w[0].id == w[1].id) {
        return Err(Error::Network(format!("edge {}: duplicate id", w[0].id)));
    }
    let edge_index: HashMap<u64, usize> =
        edge_docs.iter().enumerate().map(|(i, e)| (e.id, i)).collect();
    let mut edges = Vec::with_capacity(edge_docs.len());
    for e in &edge_docs {
        let node = |id: u64, port: Option<usize>, side: &str| -> Result<(usize, usize)> {
            let v = *node_index.get(&id).ok_or_else(|| {
                Error::Network(format!("edge {}: {side} names unknown node {id}", e.id))
            })?;
            let port = port.ok_or_else(|| {
                Error::Network(format!("edge {}: {side}_port is required for node {id}", e.id))
            })?;
            let limit = if side == "from" {
                nodes[v].output_count()
            } else {
                nodes[v].input_count()
            };
            if port >= limit {
                return Err(Error::Network(format!(
                    "edge {}: node {id} has no {side} port {port} (it has {limit})",
                    e.id
                )));
            }
            Ok((v, port))
        };
        let tail = match &e.from {
            None => return Err(Error::Network(format!("edge {} has no source (\"from\")", e.id))),
            Some(Endpoint::Node(id)) => {
                let (node, port) = node(*id, e.from_port, "from")?;
                Tail::Node { node, port }
            }
            Some(Endpoint::Named(s)) if s == "input" => Tail::Input,
            Some(Endpoint::Named(s)) if s == "none" => Tail::Zero,
            Some(Endpoint::Named(s)) => {
                return Err(Error::Network(format!("edge {}: unknown source {s:?}", e.id)))
            }
        };
        let head = match &e.to {
            None => return Err(Error::Network(format!("edge {} has no target (\"to\")", e.id))),
            Some(Endpoint::Node(id)) => {
                let (node, port) = node(*id, e.to_port, "to")?;
                Head::Node { node, port }
            }
            Some(Endpoint::Named(s)) if s == "output" => Head::Output,
            Some(Endpoint::Named(s)) if s == "trash" => Head::Trash,
            Some(Endpoint::Named(s)) => {
                return Err(Error::Network(format!("edge {}: unknown target {s:?}", e.id)))
            }
        };
        edges.push(Edge { tail, head });
    }
    let lookup = |list: &[u64], what: &str| -> Result<Vec<usize>> {
        list.iter()
            .map(|id| {
                edge_index.get(id).copied().ok_or_else(|| {
                    Error::Network(format!("{what} list names unknown edge {id}"))
                })
            })
            .collect()
    };
    let inputs = lookup(&doc.inputs, "input")?;
    let outputs = lookup(&doc.outputs, "output")?;
    let trash = lookup(&doc.trash, "trash")?;
    Network::new(nodes, edges, inputs, outputs, trash).map_err(|err| match err {
        Error::Network(msg) => Error::Network(relabel_edges(&msg, &edge_docs)),
        other => other,
    })
}

/// Rewrites "edge <index>" in a diagnostic to the document's edge id.
fn relabel_edges(msg: &str, docs: &[EdgeDoc]) -> String {
    let mut out = String::new();
    let mut rest = msg;
    while let Some(at) = rest.find("edge ") {
        out.push_str(&rest[..at + 5]);
        rest = &rest[at + 5..];
        let digits = rest.chars().take_while(char::is_ascii_digit).count();
        if digits > 0 {
            let idx: usize = rest[..digits].parse().unwrap_or(usize::MAX);
            match docs.get(idx) {
                Some(d) => write!(out, "{}", d.id).expect("write to string"),
                None => out.push_str(&rest[..digits]),
            }
            rest = &rest[digits..];
        }
    }
    out.push_str(rest);
    out
}

pub fn export_json(net: &Network) -> String {
    serde_json::to_string_pretty(&to_doc(net)).expect("network serializes")
}

pub fn import_json(text: &str) -> Result<Network> {
    from_doc(serde_json::from_str(text)?)
}

fn shape(kind: &NodeKind) -> &'static str {
    match kind {
        NodeKind::Gate(GateSpec::Adder { .. }) => "circle",
        NodeKind::Gate(GateSpec::Splitter { .. }) => "triangle",
        NodeKind::Gate(GateSpec::Toppler { .. }) => "box",
        NodeKind::Gate(GateSpec::Delayer) => "diamond",
        NodeKind::Gate(GateSpec::Presink) => "invtriangle",
        NodeKind::Processor(_) => "box3d",
    }
}

pub fn export_dot(net: &Network) -> String {
    let mut s = String::from("digraph network {\n  rankdir=LR;\n");
    for (t, _) in net.inputs().iter().enumerate() {
        writeln!(s, "  in{t} [shape=plaintext, label=\"x{}\"];", t + 1).unwrap();
    }
    for (v, kind) in net.nodes().iter().enumerate() {
        writeln!(s, "  n{v} [shape={}, label=\"{}\"];", shape(kind), kind.label()).unwrap();
    }
    for (t, _) in net.outputs().iter().enumerate() {
        writeln!(s, "  out{t} [shape=plaintext, label=\"y{}\"];", t + 1).unwrap();
    }
    let input_pos: HashMap<usize, usize> =
        net.inputs().iter().enumerate().map(|(t, &e)| (e, t)).collect();
    let output_pos: HashMap<usize, usize> =
        net.outputs().iter().enumerate().map(|(t, &e)| (e, t)).collect();
    for (e, edge) in net.edges().iter().enumerate() {
        let from = match edge.tail {
            Tail::Input => format!("in{}", input_pos[&e]),
            Tail::Zero => {
                writeln!(s, "  zero{e} [shape=point];").unwrap();
                format!("zero{e}")
            }
            Tail::Node { node, .. } => format!("n{node}"),
        };
        let to = match edge.head {
            Head::Output => format!("out{}", output_pos[&e]),
            Head::Trash => {
                writeln!(s, "  trash{e} [shape=point, color=gray];").unwrap();
                format!("trash{e}")
            }
            Head::Node { node, .. } => format!("n{node}"),
        };
        writeln!(s, "  {from} -> {to} [label=\"e{e}\"];").unwrap();
    }
    s.push_str("}\n");
    s
}
