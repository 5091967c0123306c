//! Collapsing a halting network into the single processor it emulates.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use super::exec::bulk_eval_from;
use super::Network;
use crate::error::{Error, Result};
use crate::processor::AbelianProcessor;

/// Explores the joint node states reachable from the initial ones, one
/// input letter at a time, running the network to quiescence after each.
pub fn network_to_processor(net: &Network, state_cap: usize) -> Result<AbelianProcessor> {
    let k = net.inputs().len();
    let l = net.outputs().len();
    if k == 0 || l == 0 {
        return Err(Error::Network(
            "a network needs inputs and outputs to emulate a processor".into(),
        ));
    }
    let start = net.initial_states();
    let mut index: HashMap<Arc<[usize]>, usize> = HashMap::new();
    let mut order: Vec<Arc<[usize]>> = Vec::new();
    let first: Arc<[usize]> = start.into();
    index.insert(first.clone(), 0);
    order.push(first);
    let mut queue = VecDeque::from([0usize]);
    let mut transitions: Vec<Vec<usize>> = vec![Vec::new(); k];
    let mut outputs: Vec<Vec<Vec<u64>>> = vec![Vec::new(); k];
    while let Some(q) = queue.pop_front() {
        let states = order[q].clone();
        for i in 0..k {
            let mut letter = vec![0u64; k];
            letter[i] = 1;
            let out = bulk_eval_from(net, states.to_vec(), &letter, None)?;
            let next: Arc<[usize]> = out.states.into();
            let id = match index.get(&next) {
                Some(&id) => id,
                None => {
                    if order.len() >= state_cap {
                        return Err(Error::StateCap(state_cap));
                    }
                    let id = order.len();
                    index.insert(next.clone(), id);
                    order.push(next);
                    queue.push_back(id);
                    id
                }
            };
            transitions[i].push(id);
            outputs[i].push(out.output);
        }
    }
    AbelianProcessor::new(
        (1..=k).map(|i| format!("x{i}")).collect(),
        (1..=l).map(|j| format!("y{j}")).collect(),
        (0..order.len()).map(|q| format!("q{q}")).collect(),
        0,
        transitions,
        outputs,
    )
}
