use abforge::fixtures::{three_quarters_function, three_quarters_network, pair_function};
use abforge::gates::GateSpec;
use abforge::grid;
use abforge::network::network_to_processor;
use abforge::{processor_to_zilep, zilep_to_processor, AbelianProcessor, AbelianVerdict, ZilepFunction};

fn unary(values: &[u64], period: u64, margin: u64) -> ZilepFunction {
    ZilepFunction::from_unary_values(values, period, margin).unwrap()
}

#[test]
fn three_toppler_is_abelian_and_recurrent() {
    let p = GateSpec::toppler(3, 0).processor();
    assert!(p.check_abelian().is_ok());
    assert!(p.classify_recurrence().unwrap().recurrent);
    assert_eq!(p.exponent().unwrap(), 3);
}

#[test]
fn swapped_transitions_give_a_counterexample() {
    // letter 0 cycles 0→1→2→0, letter 1 swaps 1 and 2: they do not commute
    let p = AbelianProcessor::from_maps(
        0,
        vec![vec![1, 2, 0], vec![0, 2, 1]],
        vec![vec![vec![0]; 3], vec![vec![0]; 3]],
        1,
    )
    .unwrap();
    match p.check_abelian() {
        AbelianVerdict::Counterexample { i, j, .. } => assert_eq!((i, j), (0, 1)),
        AbelianVerdict::Ok => panic!("non-commuting letters accepted"),
    }
    assert!(processor_to_zilep(&p).is_err());
}

#[test]
fn table_one_evaluations() {
    assert_eq!(GateSpec::toppler(4, 3).processor().eval(&[1]).output, vec![1]);
    assert_eq!(GateSpec::Delayer.processor().eval(&[5]).output, vec![4]);
    let e = GateSpec::ADDER.processor().eval(&[0, 0]);
    assert_eq!((e.output, e.state), (vec![0], 0));
}

#[test]
fn transient_gates() {
    for g in [GateSpec::Delayer, GateSpec::Presink] {
        let rec = g.processor().classify_recurrence().unwrap();
        assert!(!rec.recurrent);
        assert_eq!(rec.recurrent_states, vec![1]);
    }
    assert_eq!(GateSpec::SPLITTER.processor().exponent().unwrap(), 1);
}

#[test]
fn processor_to_function_examples() {
    let f = processor_to_zilep(&GateSpec::toppler(4, 2).processor()).unwrap();
    assert_eq!((f.periods(), f.margins()), (&[4][..], &[0][..]));
    assert_eq!(f.coeff(0, 0).to_string(), "1/4");
    let vals: Vec<u64> = (0..5).map(|x| f.eval1(&[x])).collect();
    assert_eq!(vals, vec![0, 0, 1, 1, 1]);

    let d = processor_to_zilep(&GateSpec::Delayer.processor()).unwrap();
    assert_eq!((d.periods(), d.margins()), (&[1][..], &[1][..]));
    assert_eq!(d.coeff(0, 0).to_string(), "1");
    assert_eq!((0..3).map(|x| d.eval1(&[x])).collect::<Vec<_>>(), vec![0, 0, 1]);

    let p = network_to_processor(&three_quarters_network([3, 2, 2]), 1000).unwrap();
    let g = processor_to_zilep(&p).unwrap();
    assert_eq!(g.periods(), &[4]);
    assert_eq!(g.coeff(0, 0).to_string(), "3/4");
    assert!(g.equivalent(&three_quarters_function()));
}

#[test]
fn function_to_processor_examples() {
    let half = unary(&[0, 0, 1], 2, 0);
    let p = zilep_to_processor(&half).unwrap();
    assert_eq!(p.state_count(), 2);
    for x in 0..20 {
        assert_eq!(p.eval(&[x]).output, GateSpec::toppler(2, 0).processor().eval(&[x]).output);
    }

    let sum = ZilepFunction::linear(&[vec![1, 1]]).unwrap();
    assert_eq!(zilep_to_processor(&sum).unwrap().state_count(), 1);

    let p6 = zilep_to_processor(&pair_function()).unwrap();
    assert_eq!(p6.state_count(), 20);
    assert!(p6.classify_recurrence().unwrap().recurrent);
    assert!(p6.check_abelian().is_ok());
}

#[test]
fn canonical_processors_are_abelian() {
    for f in [three_quarters_function(), pair_function(), unary(&[0, 0, 1, 1], 1, 2)] {
        let p = zilep_to_processor(&f).unwrap();
        assert!(p.check_abelian().is_ok());
        for x in grid::inclusive(&f.verification_bounds()) {
            assert_eq!(p.eval(&x).output, f.eval(&x));
        }
    }
}

#[test]
fn evaluation_examples() {
    let f = three_quarters_function();
    assert_eq!(f.eval1(&[10]), 9);
    assert_eq!(f.eval1(&[0]), 0);
    let third = unary(&[0, 0, 0, 1], 3, 0);
    assert_eq!(third.eval1(&[1_000_000]), 333_333);
}

#[test]
fn meager_and_bounded_examples() {
    assert_eq!(unary(&[0, 0, 0, 0, 0, 1], 5, 0).meager(0).unwrap(), (true, 1));
    assert_eq!(pair_function().meager(1).unwrap(), (false, 4));
    assert_eq!(unary(&[0, 1], 1, 0).meager(0).unwrap(), (true, 1));

    let presink = unary(&[0, 1, 1], 1, 1);
    assert_eq!(presink.bound(), Some(1));
    assert_eq!(ZilepFunction::linear(&[vec![1, 1]]).unwrap().bound(), None);
    assert_eq!(ZilepFunction::zero(2, 1).bound(), Some(0));
}

#[test]
fn json_round_trip() {
    let f = pair_function();
    assert_eq!(ZilepFunction::from_json(&f.to_json()).unwrap(), f);
    let p = GateSpec::toppler(3, 1).processor();
    assert_eq!(AbelianProcessor::from_json(&p.to_json()).unwrap(), p);
}

#[test]
fn rejects_non_monotone_tables() {
    assert!(ZilepFunction::from_unary_values(&[0, 2, 1], 2, 0).is_err());
    assert!(ZilepFunction::from_unary_values(&[1, 2], 1, 0).is_err());
}
