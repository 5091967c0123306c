//! The five abelian gates, their multi-way forms, and small demonstration
//! networks built from them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::{Network, NetworkBuilder, Wire};
use crate::processor::AbelianProcessor;

/// One gate. Adders and splitters carry their fan-in or fan-out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum GateSpec {
    Adder {
        #[serde(default = "two")]
        fan: usize,
    },
    Splitter {
        #[serde(default = "two")]
        fan: usize,
    },
    Toppler {
        lambda: u64,
        #[serde(default)]
        prime: u64,
    },
    Delayer,
    Presink,
}

fn two() -> usize {
    2
}

impl GateSpec {
    pub const ADDER: GateSpec = GateSpec::Adder { fan: 2 };
    pub const SPLITTER: GateSpec = GateSpec::Splitter { fan: 2 };

    pub fn toppler(lambda: u64, prime: u64) -> Self {
        GateSpec::Toppler { lambda, prime }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            GateSpec::Adder { fan } | GateSpec::Splitter { fan } if fan < 2 => {
                Err(Error::Network(format!("{} needs fan at least 2", self.kind())))
            }
            GateSpec::Toppler { lambda, .. } if lambda < 2 => {
                Err(Error::Network(format!("toppler threshold {lambda} is below 2")))
            }
            GateSpec::Toppler { lambda, prime } if prime >= lambda => Err(Error::Network(
                format!("toppler prime {prime} must be below its threshold {lambda}"),
            )),
            _ => Ok(()),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            GateSpec::Adder { .. } => "adder",
            GateSpec::Splitter { .. } => "splitter",
            GateSpec::Toppler { .. } => "toppler",
            GateSpec::Delayer => "delayer",
            GateSpec::Presink => "presink",
        }
    }

    pub fn input_count(&self) -> usize {
        match *self {
            GateSpec::Adder { fan } => fan,
            _ => 1,
        }
    }

    pub fn output_count(&self) -> usize {
        match *self {
            GateSpec::Splitter { fan } => fan,
            _ => 1,
        }
    }

    pub fn state_count(&self) -> usize {
        match *self {
            GateSpec::Adder { .. } | GateSpec::Splitter { .. } => 1,
            GateSpec::Toppler { lambda, .. } => lambda as usize,
            GateSpec::Delayer | GateSpec::Presink => 2,
        }
    }

    pub fn initial_state(&self) -> usize {
        match *self {
            GateSpec::Toppler { prime, .. } => prime as usize,
            _ => 0,
        }
    }

    /// Feeds `n` letters on one input port starting from `state`; adds the
    /// emitted letters to `out` and returns the new state.
    pub fn fire(&self, state: usize, n: u64, out: &mut [u64]) -> usize {
        if n == 0 {
            return state;
        }
        match *self {
            GateSpec::Adder { .. } => {
                out[0] += n;
                state
            }
            GateSpec::Splitter { .. } => {
                for o in out.iter_mut() {
                    *o += n;
                }
                state
            }
            GateSpec::Toppler { lambda, .. } => {
                let total = state as u64 + n;
                out[0] += total / lambda;
                (total % lambda) as usize
            }
            GateSpec::Delayer => {
                out[0] += if state == 0 { n - 1 } else { n };
                1
            }
            GateSpec::Presink => {
                if state == 0 {
                    out[0] += 1;
                }
                1
            }
        }
    }

    /// The function computed by the gate from its initial state.
    pub fn eval(&self, x: &[u64]) -> Vec<u64> {
        let mut out = vec![0; self.output_count()];
        let mut q = self.initial_state();
        for &n in x {
            q = self.fire(q, n, &mut out);
        }
        out
    }

    /// Explicit processor tables for the gate.
    pub fn processor(&self) -> AbelianProcessor {
        self.validate().expect("valid gate");
        let k = self.input_count();
        let l = self.output_count();
        let n = self.state_count();
        let mut transitions = vec![vec![0; n]; k];
        let mut outputs = vec![vec![vec![0; l]; n]; k];
        for i in 0..k {
            for q in 0..n {
                transitions[i][q] = self.fire(q, 1, &mut outputs[i][q]);
            }
        }
        let states = match *self {
            GateSpec::Toppler { .. } => (0..n).map(|q| q.to_string()).collect(),
            GateSpec::Delayer | GateSpec::Presink => vec!["fresh".into(), "spent".into()],
            _ => vec!["0".into()],
        };
        AbelianProcessor::new(
            (1..=k).map(|i| format!("x{i}")).collect(),
            (1..=l).map(|j| format!("y{j}")).collect(),
            states,
            self.initial_state(),
            transitions,
            outputs,
        )
        .expect("gate tables are well formed")
    }

    /// Short label used in DOT output and reports, e.g. `T3:0`.
    pub fn glyph(&self) -> String {
        match *self {
            GateSpec::Adder { fan: 2 } => "+".into(),
            GateSpec::Adder { fan } => format!("+{fan}"),
            GateSpec::Splitter { fan: 2 } => "S".into(),
            GateSpec::Splitter { fan } => format!("S{fan}"),
            GateSpec::Toppler { lambda, prime } => format!("T{lambda}:{prime}"),
            GateSpec::Delayer => "D".into(),
            GateSpec::Presink => "P".into(),
        }
    }
}

/// Which multi-way gate a binary tree emulates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeKind {
    Splitter,
    Adder,
}

/// Balanced binary tree of `n − 1` two-way gates.
pub fn multiway_tree(kind: TreeKind, n: usize) -> Result<Network> {
    if n < 2 {
        return Err(Error::Network("multi-way trees need n at least 2".into()));
    }
    let mut b = NetworkBuilder::new();
    match kind {
        TreeKind::Splitter => {
            let x = b.input();
            for w in b.split(x, n) {
                b.output(w);
            }
        }
        TreeKind::Adder => {
            let xs: Vec<Wire> = (0..n).map(|_| b.input()).collect();
            let s = b.add(xs);
            b.output(s);
        }
    }
    Ok(b.finish())
}

/// Rotor of degree `d`: a `d`-adder feeding a `d`-splitter whose branches
/// pass through `d`-topplers primed `d−1, d−2, …, 0`. Output port `i` holds
/// the toppler primed `d−1−i`, so the first letter leaves on port 0.
pub fn rotor_node(d: usize) -> Result<Network> {
    fan_node(d, |i| d as u64 - 1 - i as u64, false)
}

/// Sandpile node of degree `d`: the rotor layout with every toppler unprimed.
pub fn sandpile_node(d: usize) -> Result<Network> {
    fan_node(d, |_| 0, false)
}

/// Rotor node with a delayer between the adder and the splitter, so the
/// first letter to arrive is absorbed.
pub fn rotor_aggregation_node(d: usize) -> Result<Network> {
    fan_node(d, |i| d as u64 - 1 - i as u64, true)
}

fn fan_node(d: usize, prime: impl Fn(usize) -> u64, delay: bool) -> Result<Network> {
    if d == 0 {
        return Err(Error::Network("node degree must be at least 1".into()));
    }
    let mut b = NetworkBuilder::new();
    let xs: Vec<Wire> = (0..d).map(|_| b.input()).collect();
    let mut mid = if d == 1 {
        xs[0]
    } else {
        b.gate(GateSpec::Adder { fan: d }, &xs)[0]
    };
    if delay {
        mid = b.gate(GateSpec::Delayer, &[mid])[0];
    }
    let branches = if d == 1 {
        vec![mid]
    } else {
        b.gate(GateSpec::Splitter { fan: d }, &[mid])
    };
    for (i, w) in branches.into_iter().enumerate() {
        let t = b.toppler(w, d as u64, prime(i));
        b.output(t);
    }
    Ok(b.finish())
}
