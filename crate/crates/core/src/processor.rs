//! Finite abelian processors.
//!
//! A processor is a finite automaton with one transition map `t_i` and one
//! output map `o_i` per input letter. It is abelian when every pair of
//! letters commutes both in the state it reaches and in the letters it
//! emits, so the cumulative output depends only on how many copies of each
//! letter were fed in.

use std::collections::VecDeque;

use num_integer::Integer;
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianProcessor {
    input_letters: Vec<String>,
    output_letters: Vec<String>,
    states: Vec<String>,
    initial: usize,
    /// `transitions[i][q]` is `t_i(q)`.
    transitions: Vec<Vec<usize>>,
    /// `outputs[i][q]` is the vector `o_i(q)` indexed by output letter.
    outputs: Vec<Vec<Vec<u64>>>,
}

/// Result of [`AbelianProcessor::check_abelian`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AbelianVerdict {
    Ok,
    /// Letters `i < j` fail to commute at `state`.
    Counterexample { i: usize, j: usize, state: usize },
}

impl AbelianVerdict {
    pub fn is_ok(&self) -> bool {
        matches!(self, AbelianVerdict::Ok)
    }
}

/// Output and final state after feeding an input vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evaluation {
    pub output: Vec<u64>,
    pub state: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Recurrence {
    pub recurrent: bool,
    /// States of the terminal strongly connected component, ascending.
    pub recurrent_states: Vec<usize>,
}

/// Tail and cycle length of the functional graph of one transition map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RhoShape {
    pub tail: u64,
    pub cycle: u64,
}

impl AbelianProcessor {
    pub fn new(
        input_letters: Vec<String>,
        output_letters: Vec<String>,
        states: Vec<String>,
        initial: usize,
        transitions: Vec<Vec<usize>>,
        outputs: Vec<Vec<Vec<u64>>>,
    ) -> Result<Self> {
        let k = input_letters.len();
        let l = output_letters.len();
        let n = states.len();
        if k == 0 {
            return Err(Error::Processor("input alphabet is empty".into()));
        }
        if l == 0 {
            return Err(Error::Processor("output alphabet is empty".into()));
        }
        if n == 0 {
            return Err(Error::Processor("state set is empty".into()));
        }
        if initial >= n {
            return Err(Error::Processor(format!(
                "initial state {initial} out of range (have {n} states)"
            )));
        }
        if transitions.len() != k || outputs.len() != k {
            return Err(Error::Processor(format!(
                "expected transition and output maps for {k} letters, got {} and {}",
                transitions.len(),
                outputs.len()
            )));
        }
        for (i, (row, outs)) in transitions.iter().zip(&outputs).enumerate() {
            if row.len() != n || outs.len() != n {
                return Err(Error::Processor(format!(
                    "letter {i}: maps must cover all {n} states"
                )));
            }
            if let Some(q) = row.iter().position(|&t| t >= n) {
                return Err(Error::Processor(format!(
                    "letter {i}: transition from state {q} leaves the state set"
                )));
            }
            if let Some(q) = outs.iter().position(|o| o.len() != l) {
                return Err(Error::Processor(format!(
                    "letter {i}: output vector at state {q} must have {l} entries"
                )));
            }
        }
        let p = AbelianProcessor {
            input_letters,
            output_letters,
            states,
            initial,
            transitions,
            outputs,
        };
        let reach = p.reachable_from(p.initial);
        if let Some(q) = reach.iter().position(|r| !r) {
            return Err(Error::Processor(format!(
                "state {q} ({}) is not accessible from the initial state",
                p.states[q]
            )));
        }
        Ok(p)
    }

    /// Builds a processor with generated letter and state names.
    pub fn from_maps(
        initial: usize,
        transitions: Vec<Vec<usize>>,
        outputs: Vec<Vec<Vec<u64>>>,
        output_count: usize,
    ) -> Result<Self> {
        let k = transitions.len();
        let n = transitions.first().map_or(0, Vec::len);
        Self::new(
            (0..k).map(|i| format!("a{i}")).collect(),
            (0..output_count).map(|j| format!("b{j}")).collect(),
            (0..n).map(|q| q.to_string()).collect(),
            initial,
            transitions,
            outputs,
        )
    }

    pub fn input_letters(&self) -> &[String] {
        &self.input_letters
    }

    pub fn output_letters(&self) -> &[String] {
        &self.output_letters
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn arity(&self) -> usize {
        self.input_letters.len()
    }

    pub fn output_count(&self) -> usize {
        self.output_letters.len()
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn transition(&self, letter: usize, state: usize) -> usize {
        self.transitions[letter][state]
    }

    pub fn output(&self, letter: usize, state: usize) -> &[u64] {
        &self.outputs[letter][state]
    }

    /// Same processor started from a different state.
    ///
    /// Fails if some state is no longer accessible.
    pub fn with_initial(&self, initial: usize) -> Result<Self> {
        Self::new(
            self.input_letters.clone(),
            self.output_letters.clone(),
            self.states.clone(),
            initial,
            self.transitions.clone(),
            self.outputs.clone(),
        )
    }

    fn reachable_from(&self, start: usize) -> Vec<bool> {
        let mut seen = vec![false; self.state_count()];
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(q) = queue.pop_front() {
            for row in &self.transitions {
                let t = row[q];
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
        seen
    }

    /// Checks both commutation identities for every pair of letters and
    /// every state; reports the lexicographically first failing `(i, j, q)`.
    pub fn check_abelian(&self) -> AbelianVerdict {
        let k = self.arity();
        for i in 0..k {
            for j in i + 1..k {
                for q in 0..self.state_count() {
                    let ti = self.transitions[i][q];
                    let tj = self.transitions[j][q];
                    if self.transitions[i][tj] != self.transitions[j][ti] {
                        return AbelianVerdict::Counterexample { i, j, state: q };
                    }
                    let lhs = self.outputs[i][q].iter().zip(&self.outputs[j][ti]);
                    let rhs = self.outputs[j][q].iter().zip(&self.outputs[i][tj]);
                    if lhs.zip(rhs).any(|((a, b), (c, d))| a + b != c + d) {
                        return AbelianVerdict::Counterexample { i, j, state: q };
                    }
                }
            }
        }
        AbelianVerdict::Ok
    }

    /// Feeds a word letter by letter from `state`.
    pub fn run_word(&self, state: usize, word: &[usize]) -> Evaluation {
        let mut output = vec![0; self.output_count()];
        let mut q = state;
        for &a in word {
            for (acc, o) in output.iter_mut().zip(&self.outputs[a][q]) {
                *acc += o;
            }
            q = self.transitions[a][q];
        }
        Evaluation { output, state: q }
    }

    /// Feeds `x[i]` copies of each letter `i`, letters in ascending order.
    pub fn eval_from(&self, state: usize, x: &[u64]) -> Evaluation {
        assert_eq!(x.len(), self.arity(), "input vector has wrong arity");
        let mut output = vec![0; self.output_count()];
        let mut q = state;
        for (a, &count) in x.iter().enumerate() {
            for _ in 0..count {
                for (acc, o) in output.iter_mut().zip(&self.outputs[a][q]) {
                    *acc += o;
                }
                q = self.transitions[a][q];
            }
        }
        Evaluation { output, state: q }
    }

    /// The function computed by the processor, evaluated at `x`.
    pub fn eval(&self, x: &[u64]) -> Evaluation {
        self.eval_from(self.initial, x)
    }

    /// Strongly connected structure of the state digraph under all `t_i`.
    pub fn classify_recurrence(&self) -> Result<Recurrence> {
        let n = self.state_count();
        let mut g = DiGraph::<(), ()>::with_capacity(n, n * self.arity());
        let idx: Vec<_> = (0..n).map(|_| g.add_node(())).collect();
        for row in &self.transitions {
            for (q, &t) in row.iter().enumerate() {
                g.add_edge(idx[q], idx[t], ());
            }
        }
        let sccs = tarjan_scc(&g);
        let mut comp = vec![0usize; n];
        for (c, members) in sccs.iter().enumerate() {
            for v in members {
                comp[v.index()] = c;
            }
        }
        let terminal: Vec<usize> = (0..sccs.len())
            .filter(|&c| {
                sccs[c].iter().all(|v| {
                    self.transitions
                        .iter()
                        .all(|row| comp[row[v.index()]] == c)
                })
            })
            .collect();
        // every state is accessible, so every terminal component is reachable
        if terminal.len() != 1 {
            return Err(Error::MultipleTerminalComponents(terminal.len()));
        }
        let mut recurrent_states: Vec<usize> =
            sccs[terminal[0]].iter().map(|v| v.index()).collect();
        recurrent_states.sort_unstable();
        Ok(Recurrence {
            recurrent: recurrent_states.len() == n,
            recurrent_states,
        })
    }

    /// Least `m` such that `t_i^m` is the identity on recurrent states for
    /// every letter `i`.
    pub fn exponent(&self) -> Result<u64> {
        let rec = self.classify_recurrence()?;
        let mut in_class = vec![false; self.state_count()];
        for &q in &rec.recurrent_states {
            in_class[q] = true;
        }
        let mut m = 1u64;
        for (i, row) in self.transitions.iter().enumerate() {
            let mut seen = vec![false; self.state_count()];
            for &q in &rec.recurrent_states {
                if seen[q] {
                    continue;
                }
                let mut len = 0u64;
                let mut p = q;
                loop {
                    seen[p] = true;
                    p = row[p];
                    len += 1;
                    if !in_class[p] {
                        return Err(Error::Processor(format!(
                            "letter {i} leaves the recurrent class"
                        )));
                    }
                    if p == q {
                        break;
                    }
                    if seen[p] {
                        return Err(Error::Processor(format!(
                            "letter {i} does not act as a permutation on recurrent states"
                        )));
                    }
                }
                m = m.lcm(&len);
            }
        }
        Ok(m)
    }

    /// Minimal `(r, λ)` with `t_i^(r+λ) = t_i^r` on the whole state set.
    pub fn rho_shape(&self, letter: usize) -> RhoShape {
        let row = &self.transitions[letter];
        let n = self.state_count();
        let mut tail = 0u64;
        let mut cycle = 1u64;
        // position of each state along the current walk, usize::MAX if unvisited
        let mut pos = vec![usize::MAX; n];
        for start in 0..n {
            let mut walk = Vec::new();
            let mut p = start;
            while pos[p] == usize::MAX {
                pos[p] = walk.len();
                walk.push(p);
                p = row[p];
            }
            let mu = pos[p];
            tail = tail.max(mu as u64);
            cycle = cycle.lcm(&((walk.len() - mu) as u64));
            for &w in &walk {
                pos[w] = usize::MAX;
            }
        }
        RhoShape { tail, cycle }
    }

    pub fn to_doc(&self) -> ProcessorDoc {
        ProcessorDoc {
            letters_in: self.input_letters.clone(),
            letters_out: self.output_letters.clone(),
            states: self.states.clone(),
            initial: self.initial,
            transitions: self.transitions.clone(),
            outputs: self.outputs.clone(),
        }
    }

    pub fn from_doc(doc: ProcessorDoc) -> Result<Self> {
        Self::new(
            doc.letters_in,
            doc.letters_out,
            doc.states,
            doc.initial,
            doc.transitions,
            doc.outputs,
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("processor serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_doc(serde_json::from_str(text)?)
    }
}

/// On-disk form of a processor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProcessorDoc {
    pub letters_in: Vec<String>,
    pub letters_out: Vec<String>,
    pub states: Vec<String>,
    pub initial: usize,
    pub transitions: Vec<Vec<usize>>,
    pub outputs: Vec<Vec<Vec<u64>>>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toppler(lambda: usize, prime: usize) -> AbelianProcessor {
        let t = (0..lambda).map(|q| (q + 1) % lambda).collect();
        let o = (0..lambda)
            .map(|q| vec![u64::from(q == lambda - 1)])
            .collect();
        AbelianProcessor::from_maps(prime, vec![t], vec![o], 1).unwrap()
    }

    #[test]
    fn unary_processor_is_abelian() {
        assert!(toppler(3, 0).check_abelian().is_ok());
    }

    #[test]
    fn swapped_transition_is_caught() {
        // two letters on Z/3: t_1 = +1, t_2 = +2, except that t_2 misbehaves on state 1
        let t1 = vec![1, 2, 0];
        let t2 = vec![2, 1, 1];
        let zero = vec![vec![0]; 3];
        let p = AbelianProcessor::from_maps(0, vec![t1, t2], vec![zero.clone(), zero], 1).unwrap();
        assert_eq!(
            p.check_abelian(),
            AbelianVerdict::Counterexample { i: 0, j: 1, state: 0 }
        );
    }

    #[test]
    fn output_commutation_is_checked() {
        let t = vec![vec![0], vec![0]];
        let o = vec![vec![vec![1]], vec![vec![0]]];
        let p = AbelianProcessor::from_maps(0, t, o, 1).unwrap();
        assert!(p.check_abelian().is_ok());
        // state-dependent output that breaks o_i + o_j t_i = o_j + o_i t_j
        let t = vec![vec![1, 1], vec![0, 0]];
        let o = vec![vec![vec![0], vec![0]], vec![vec![0], vec![1]]];
        let p = AbelianProcessor::from_maps(0, t, o, 1).unwrap();
        assert!(!p.check_abelian().is_ok());
    }

    #[test]
    fn eval_primed_toppler() {
        assert_eq!(toppler(4, 3).eval(&[1]).output, vec![1]);
        let e = toppler(4, 3).eval(&[0]);
        assert_eq!(e, Evaluation { output: vec![0], state: 3 });
    }

    #[test]
    fn rejects_inaccessible_state() {
        let t = vec![vec![0, 1]];
        let o = vec![vec![vec![0], vec![0]]];
        assert!(AbelianProcessor::from_maps(0, t, o, 1).is_err());
    }

    #[test]
    fn toppler_is_recurrent_with_exponent_lambda() {
        let p = toppler(5, 2);
        assert!(p.classify_recurrence().unwrap().recurrent);
        assert_eq!(p.exponent().unwrap(), 5);
        assert_eq!(p.rho_shape(0), RhoShape { tail: 0, cycle: 5 });
    }

    #[test]
    fn delayer_is_transient() {
        let p = AbelianProcessor::from_maps(
            0,
            vec![vec![1, 1]],
            vec![vec![vec![0], vec![1]]],
            1,
        )
        .unwrap();
        let r = p.classify_recurrence().unwrap();
        assert!(!r.recurrent);
        assert_eq!(r.recurrent_states, vec![1]);
        assert_eq!(p.exponent().unwrap(), 1);
        assert_eq!(p.rho_shape(0), RhoShape { tail: 1, cycle: 1 });
    }

    #[test]
    fn json_round_trip() {
        let p = toppler(3, 1);
        let back = AbelianProcessor::from_json(&p.to_json()).unwrap();
        assert_eq!(p, back);
    }
}
