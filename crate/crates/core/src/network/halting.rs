//! Halting certificates for networks with feedback.
//!
//! Each node port pair gets the long-run rate at which letters pass through
//! it (the linear coefficient of the node's function). Every node's output
//! is at most that rate times its input plus a constant, so if the rate
//! matrix `P` on node-bound edges has spectral radius below one, the letter
//! counts of any execution are bounded and every legal execution halts.
//! The radius is certified by finding `t ≤ 200` with `‖Pᵗ·1‖_∞ < 1`.

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{Head, Network, NodeKind};
use crate::convert::processor_to_zilep;
use crate::gates::GateSpec;

const MAX_POWER: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HaltingVerdict {
    /// No directed cycle: every execution halts.
    Acyclic,
    /// `‖Pᵗ·1‖_∞ = norm < 1` with `t = power`, so the spectral radius of the
    /// rate matrix is at most `norm^(1/t)`.
    FeedbackOk { power: usize, norm: BigRational },
    Unknown,
}

impl HaltingVerdict {
    pub fn halts(&self) -> bool {
        !matches!(self, HaltingVerdict::Unknown)
    }
}

fn rates(kind: &NodeKind) -> Option<Vec<Vec<BigRational>>> {
    Some(match kind {
        NodeKind::Gate(g) => {
            let r = match *g {
                GateSpec::Adder { .. } | GateSpec::Splitter { .. } | GateSpec::Delayer => {
                    BigRational::one()
                }
                GateSpec::Toppler { lambda, .. } => BigRational::new(1.into(), lambda.into()),
                GateSpec::Presink => BigRational::zero(),
            };
            vec![vec![r; g.output_count()]; g.input_count()]
        }
        NodeKind::Processor(p) => {
            let f = processor_to_zilep(p).ok()?;
            (0..p.arity())
                .map(|i| (0..p.output_count()).map(|j| f.coeff(j, i).clone()).collect())
                .collect()
        }
    })
}

pub fn check_halting(net: &Network) -> HaltingVerdict {
    if net.is_acyclic() {
        return HaltingVerdict::Acyclic;
    }
    let edges = net.edges();
    let internal: Vec<usize> = (0..edges.len())
        .filter(|&e| matches!(edges[e].head, Head::Node { .. }))
        .collect();
    let mut slot = vec![usize::MAX; edges.len()];
    for (i, &e) in internal.iter().enumerate() {
        slot[e] = i;
    }
    let mut node_rates = Vec::with_capacity(net.nodes().len());
    for kind in net.nodes() {
        match rates(kind) {
            Some(r) => node_rates.push(r),
            None => return HaltingVerdict::Unknown,
        }
    }
    // sparse rows: letters on edge e feed the internal edges leaving its head
    let rows: Vec<Vec<(usize, BigRational)>> = internal
        .iter()
        .map(|&e| {
            let Head::Node { node, port } = edges[e].head else {
                unreachable!()
            };
            net.node_outputs(node)
                .iter()
                .enumerate()
                .filter(|(_, &out)| slot[out] != usize::MAX)
                .map(|(j, &out)| (slot[out], node_rates[node][port][j].clone()))
                .filter(|(_, r)| !r.is_zero())
                .collect()
        })
        .collect();
    let mut v = vec![BigRational::one(); internal.len()];
    for power in 1..=MAX_POWER {
        v = rows
            .iter()
            .map(|row| {
                row.iter()
                    .fold(BigRational::zero(), |acc, (c, r)| acc + r * &v[*c])
            })
            .collect();
        let norm = v.iter().max().cloned().unwrap_or_else(BigRational::zero);
        if norm < BigRational::one() {
            return HaltingVerdict::FeedbackOk { power, norm };
        }
    }
    HaltingVerdict::Unknown
}
