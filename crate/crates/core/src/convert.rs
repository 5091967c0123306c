//! Translations between abelian processors and the functions they compute.

use crate::error::{Error, Result};
use crate::grid::{Grid, MAX_TABLE_POINTS};
use crate::processor::{AbelianProcessor, AbelianVerdict};
use crate::zilep::ZilepFunction;

/// The function computed by `p`, with `(r_i, λ_i)` the tail and cycle
/// length of the transition map `t_i` on the full state set.
pub fn processor_to_zilep(p: &AbelianProcessor) -> Result<ZilepFunction> {
    if let AbelianVerdict::Counterexample { i, j, state } = p.check_abelian() {
        return Err(Error::Processor(format!(
            "letters {i} and {j} do not commute at state {state}"
        )));
    }
    let k = p.arity();
    let l = p.output_count();
    let shapes: Vec<_> = (0..k).map(|i| p.rho_shape(i)).collect();
    let periods: Vec<u64> = shapes.iter().map(|s| s.cycle).collect();
    let margins: Vec<u64> = shapes.iter().map(|s| s.tail).collect();
    let dims: Vec<u64> = shapes.iter().map(|s| s.cycle + s.tail + 1).collect();
    let points = Grid::count(&dims);
    if points > MAX_TABLE_POINTS {
        return Err(Error::TableTooLarge {
            points,
            limit: MAX_TABLE_POINTS,
        });
    }
    let grid = Grid::new(&dims);
    // dynamic programming over the box: each point extends its predecessor
    // along the last nonzero coordinate by one letter
    let mut states = vec![p.initial(); grid.len()];
    let mut values = vec![0u64; grid.len() * l];
    for (idx, x) in grid.points().enumerate().skip(1) {
        let i = x.iter().rposition(|&v| v > 0).expect("nonzero point");
        let prev = idx - grid.stride(i);
        let q = states[prev];
        states[idx] = p.transition(i, q);
        for (j, o) in p.output(i, q).iter().enumerate() {
            values[idx * l + j] = values[prev * l + j] + o;
        }
    }
    ZilepFunction::from_fn(k, l, periods, margins, |x| {
        let idx = grid.index(x);
        values[idx * l..(idx + 1) * l].to_vec()
    })
}

/// The canonical processor on the box `Π [0, r_i + λ_i − 1]`: the state
/// records the input seen so far, folded back by `λ_i` past the margin.
pub fn zilep_to_processor(f: &ZilepFunction) -> Result<AbelianProcessor> {
    let k = f.arity();
    let l = f.output_count();
    let dims: Vec<u64> = (0..k).map(|i| f.margins()[i] + f.periods()[i]).collect();
    let points = Grid::count(&dims);
    if points > MAX_TABLE_POINTS {
        return Err(Error::TableTooLarge {
            points,
            limit: MAX_TABLE_POINTS,
        });
    }
    let grid = Grid::new(&dims);
    let mut transitions = vec![vec![0usize; grid.len()]; k];
    let mut outputs = vec![vec![Vec::new(); grid.len()]; k];
    for (idx, x) in grid.points().enumerate() {
        let here = f.table_value(&x).to_vec();
        for i in 0..k {
            let mut up = x.clone();
            up[i] += 1;
            let next = f.table_value(&up);
            outputs[i][idx] = next.iter().zip(&here).map(|(a, b)| a - b).collect();
            if up[i] == dims[i] {
                up[i] = f.margins()[i];
            }
            transitions[i][idx] = grid.index(&up);
        }
    }
    let states = grid
        .points()
        .map(|x| {
            x.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect();
    AbelianProcessor::new(
        (1..=k).map(|i| format!("x{i}")).collect(),
        (1..=l).map(|j| format!("y{j}")).collect(),
        states,
        0,
        transitions,
        outputs,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::inclusive;

    fn toppler(lambda: usize, prime: usize) -> AbelianProcessor {
        let t = (0..lambda).map(|q| (q + 1) % lambda).collect();
        let o = (0..lambda).map(|q| vec![u64::from(q == lambda - 1)]).collect();
        AbelianProcessor::from_maps(prime, vec![t], vec![o], 1).unwrap()
    }

    #[test]
    fn primed_toppler_table() {
        let f = processor_to_zilep(&toppler(4, 2)).unwrap();
        assert_eq!((f.periods()[0], f.margins()[0]), (4, 0));
        assert_eq!(f.coeff(0, 0).to_string(), "1/4");
        assert_eq!(f.table(), &[0, 0, 1, 1, 1]);
    }

    #[test]
    fn floor_half_gives_two_state_toppler() {
        let f = ZilepFunction::from_fn(1, 1, vec![2], vec![0], |x| vec![x[0] / 2]).unwrap();
        let p = zilep_to_processor(&f).unwrap();
        assert_eq!(p.state_count(), 2);
        for q in 0..2 {
            assert_eq!(p.transition(0, q), toppler(2, 0).transition(0, q));
            assert_eq!(p.output(0, q), toppler(2, 0).output(0, q));
        }
    }

    #[test]
    fn adder_is_single_state() {
        let f = ZilepFunction::linear(&[vec![1, 1]]).unwrap();
        let p = zilep_to_processor(&f).unwrap();
        assert_eq!(p.state_count(), 1);
        assert!(p.check_abelian().is_ok());
        assert_eq!(p.eval(&[3, 4]).output, vec![7]);
    }

    #[test]
    fn round_trip_with_margin() {
        let f = ZilepFunction::from_fn(2, 1, vec![2, 3], vec![1, 2], |x| {
            vec![u64::from(x[0] >= 1) + x[0].saturating_sub(1) / 2 + x[1].saturating_sub(2) / 3 * 2]
        })
        .unwrap();
        let p = zilep_to_processor(&f).unwrap();
        assert!(p.check_abelian().is_ok());
        assert!(!p.classify_recurrence().unwrap().recurrent);
        let g = processor_to_zilep(&p).unwrap();
        for x in inclusive(&f.verification_bounds()) {
            assert_eq!(p.eval(&x).output, f.eval(&x));
            assert_eq!(g.eval(&x), f.eval(&x));
        }
    }
}
