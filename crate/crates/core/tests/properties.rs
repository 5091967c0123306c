use abforge::fixtures::{random_processor, random_zilep};
use abforge::gates::GateSpec;
use abforge::network::{bulk_eval, run, RunOptions, Schedule};
use abforge::synth::rewrite::toppler_loop;
use abforge::NetworkBuilder;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Any interleaving of letters gives the same output and state as the
    /// sorted word.
    #[test]
    fn processors_ignore_letter_order(seed in any::<u64>(), word in prop::collection::vec(0usize..2, 0..30)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        if let Some(p) = random_processor(&mut rng, 2, 8) {
            let word: Vec<usize> = word.into_iter().map(|a| a % p.arity()).collect();
            let mut x = vec![0u64; p.arity()];
            for &a in &word {
                x[a] += 1;
            }
            prop_assert_eq!(p.run_word(p.initial(), &word), p.eval(&x));
        }
    }

    #[test]
    fn gates_match_table_one(lambda in 2u64..9, q in 0u64..8, x in 0u64..200, y in 0u64..200) {
        let q = q % lambda;
        prop_assert_eq!(GateSpec::toppler(lambda, q).eval(&[x]), vec![(x + q) / lambda]);
        prop_assert_eq!(GateSpec::ADDER.eval(&[x, y]), vec![x + y]);
        prop_assert_eq!(GateSpec::SPLITTER.eval(&[x]), vec![x, x]);
        prop_assert_eq!(GateSpec::Delayer.eval(&[x]), vec![x.saturating_sub(1)]);
        prop_assert_eq!(GateSpec::Presink.eval(&[x]), vec![x.min(1)]);
    }

    #[test]
    fn loops_halt_with_the_same_result_under_any_schedule(lambda in 2u64..20, x in 0u64..300, seed in any::<u64>()) {
        let net = toppler_loop(lambda, 0);
        let out = run(&net, &[x], &RunOptions::with_schedule(Schedule::SeededRandom(seed))).unwrap();
        prop_assert_eq!(&out.output, &vec![x / lambda]);
        prop_assert_eq!(out.states, bulk_eval(&net, &[x]).unwrap().states);
    }

    #[test]
    fn zilep_functions_are_monotone(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_zilep(&mut rng, 2, 4, 4).function;
        let hi = vec![15u64; f.arity()];
        for x in abforge::grid::inclusive(&hi) {
            let v = f.eval1(&x);
            for c in 0..x.len() {
                let mut y = x.clone();
                y[c] += 1;
                prop_assert!(f.eval1(&y) >= v);
            }
        }
    }

    #[test]
    fn bulk_firing_matches_letter_by_letter(a in 0u64..40, b in 0u64..40, seed in any::<u64>()) {
        let mut nb = NetworkBuilder::new();
        let (x, y) = (nb.input(), nb.input());
        let s = nb.add(vec![x, y]);
        let c = nb.split(s, 3);
        let t = nb.toppler(c[0], 3, 1);
        let d = nb.delayer(c[1]);
        let p = nb.presink(c[2]);
        let sum = nb.add(vec![t, d, p]);
        nb.output(sum);
        let net = nb.finish();
        let bulk = bulk_eval(&net, &[a, b]).unwrap();
        let slow = run(&net, &[a, b], &RunOptions::with_schedule(Schedule::SeededRandom(seed))).unwrap();
        prop_assert_eq!(&bulk.output, &slow.output);
        let n = a + b;
        prop_assert_eq!(bulk.output, vec![(n + 1) / 3 + n.saturating_sub(1) + n.min(1)]);
    }
}
