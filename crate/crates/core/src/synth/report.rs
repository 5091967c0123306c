//! Size and shape summaries of networks.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::gates::GateSpec;
use crate::network::{Network, NodeKind};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SynthReport {
    /// Node counts keyed by gate kind, plus `"processor"`.
    pub counts: BTreeMap<String, usize>,
    pub nodes: usize,
    pub edges: usize,
    pub acyclic: bool,
    /// Largest number of topplers on one directed path, an upper bound on
    /// the nesting depth of floors in the computed function. `None` when
    /// the network has cycles.
    pub max_topplers_on_path: Option<usize>,
    /// Longest directed path, counted in nodes. `None` when cyclic.
    pub depth: Option<usize>,
    /// How often each synthesis pass fired; empty for networks built by hand.
    pub passes: BTreeMap<String, usize>,
}

impl SynthReport {
    pub fn count(&self, kind: &str) -> usize {
        self.counts.get(kind).copied().unwrap_or(0)
    }
}

pub fn report(net: &Network) -> SynthReport {
    let mut counts = BTreeMap::new();
    for kind in ["adder", "splitter", "toppler", "delayer", "presink", "processor"] {
        counts.insert(kind.to_string(), net.count_kind(kind));
    }
    let order = net.topological_order();
    let (depth, topplers) = match &order {
        None => (None, None),
        Some(order) => {
            let n = net.nodes().len();
            let mut depth = vec![0usize; n];
            let mut tops = vec![0usize; n];
            for &v in order {
                let is_toppler =
                    matches!(net.nodes()[v], NodeKind::Gate(GateSpec::Toppler { .. }));
                depth[v] += 1;
                tops[v] += usize::from(is_toppler);
                for w in successors(net, v) {
                    depth[w] = depth[w].max(depth[v]);
                    tops[w] = tops[w].max(tops[v]);
                }
            }
            (
                Some(depth.iter().copied().max().unwrap_or(0)),
                Some(tops.iter().copied().max().unwrap_or(0)),
            )
        }
    };
    SynthReport {
        counts,
        nodes: net.nodes().len(),
        edges: net.edges().len(),
        acyclic: order.is_some(),
        max_topplers_on_path: topplers,
        depth,
        passes: BTreeMap::new(),
    }
}

fn successors(net: &Network, v: usize) -> impl Iterator<Item = usize> + '_ {
    net.node_outputs(v).iter().filter_map(|&e| match net.edges()[e].head {
        crate::network::Head::Node { node, .. } => Some(node),
        _ => None,
    })
}
