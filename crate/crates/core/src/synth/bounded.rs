//! Delayer and presink networks for bounded functions.
//!
//! A bounded increasing function equals `Σ_j 1[f(x) > j]`, and each level set
//! `{f > j}` is an up-set generated by finitely many minimal points. The
//! indicator of `x ≥ p` is an AND of thresholds `1[x_i ≥ p_i]`, which come
//! from taps on a delayer chain per coordinate.

use super::{check_identity, Synthesizer};
use crate::error::Result;
use crate::grid;
use crate::network::{Network, NetworkBuilder, Wire};
use crate::zilep::ZilepFunction;

/// Minimal points of `{f > j}` for each level `j < J`.
pub(crate) fn level_generators(f: &ZilepFunction) -> Vec<Vec<Vec<u64>>> {
    let top = f.bound().expect("bounded function");
    let margins = f.margins().to_vec();
    let mut levels = vec![Vec::new(); top as usize];
    for p in grid::inclusive(&margins) {
        let v = f.eval1(&p);
        // p is minimal for every level between the largest value just below it and v
        let below = (0..p.len())
            .filter(|&i| p[i] > 0)
            .map(|i| {
                let mut q = p.clone();
                q[i] -= 1;
                f.eval1(&q)
            })
            .max()
            .unwrap_or(0);
        for j in below..v {
            levels[j as usize].push(p.clone());
        }
    }
    levels
}

impl Synthesizer {
    pub(super) fn build_bounded(&mut self, f: &ZilepFunction) -> Result<Network> {
        if let Some(net) = self.reduce_trivial(super::Route::Bounded, f)? {
            return Ok(net);
        }
        self.fired("bounded");
        let k = f.arity();
        let levels = level_generators(f);
        check_identity("bounded", f.margins(), f, |x| {
            let hit = |ps: &Vec<Vec<u64>>| ps.iter().any(|p| p.iter().zip(x).all(|(a, b)| a <= b));
            levels.iter().filter(|ps| hit(ps)).count() as u64 == f.eval1(x)
        })?;

        // uses[i][t] = number of times 1[x_i ≥ t] is needed
        let mut uses: Vec<Vec<usize>> = f.margins().iter().map(|&r| vec![0; r as usize + 1]).collect();
        for p in levels.iter().flatten() {
            for (i, &t) in p.iter().enumerate() {
                if t > 0 {
                    uses[i][t as usize] += 1;
                }
            }
        }

        let mut b = NetworkBuilder::new();
        let xs: Vec<Wire> = (0..k).map(|_| b.input()).collect();
        let mut taps: Vec<Vec<std::vec::IntoIter<Wire>>> = Vec::with_capacity(k);
        for (i, &x) in xs.iter().enumerate() {
            let last = uses[i].iter().rposition(|&u| u > 0).unwrap_or(0);
            let mut per_t: Vec<std::vec::IntoIter<Wire>> = vec![Vec::new().into_iter(); last + 1];
            if last == 0 {
                b.trash(x);
            }
            let mut w = x;
            for t in 1..=last {
                let need = uses[i][t];
                if t == last {
                    let p = b.presink(w);
                    per_t[t] = b.split(p, need).into_iter();
                } else {
                    if need > 0 {
                        let s = b.split(w, 2);
                        let p = b.presink(s[0]);
                        per_t[t] = b.split(p, need).into_iter();
                        w = s[1];
                    }
                    w = b.delayer(w);
                }
            }
            taps.push(per_t);
        }

        let mut level_outs = Vec::with_capacity(levels.len());
        for ps in &levels {
            let mut ors: Option<Wire> = None;
            for p in ps {
                let mut and: Option<Wire> = None;
                for (i, &t) in p.iter().enumerate() {
                    if t == 0 {
                        continue;
                    }
                    let tap = taps[i][t as usize].next().expect("tap reserved");
                    and = Some(match and {
                        None => tap,
                        Some(a) => {
                            let s = b.add(vec![a, tap]);
                            b.delayer(s)
                        }
                    });
                }
                let a = and.expect("minimal points of a positive level are nonzero");
                ors = Some(match ors {
                    None => a,
                    Some(o) => {
                        let s = b.add(vec![o, a]);
                        b.presink(s)
                    }
                });
            }
            level_outs.push(ors.expect("every level below the bound is reached"));
        }
        let s = b.add(level_outs);
        b.output(s);
        Ok(b.finish())
    }
}
