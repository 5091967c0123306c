use abforge::fixtures::{transient_pair_function, three_quarters_function, three_quarters_network, pair_function, transient_mix_function};
use abforge::gates::GateSpec;
use abforge::grid;
use abforge::network::{bulk_eval, check_halting, HaltingVerdict};
use abforge::pseudomin::{pseudomin_zilep, PseudoMin};
use abforge::synth::{
    self, compile, interleave_plan, interleave_targets, layer_index, main_reduction, meagerize,
    report, rewrite_feedback, rewrite_unprime, split_outputs, synth_bounded, synth_general,
    synth_linear, synth_recurrent, synth_unary_recurrent, two_layer, InterleaveCase, Mode,
};
use abforge::verify::{verify, VerifyConfig};
use abforge::{Error, Network, ZilepFunction};

fn func(periods: &[u64], margins: &[u64], f: impl Fn(&[u64]) -> u64) -> ZilepFunction {
    ZilepFunction::from_fn(periods.len(), 1, periods.to_vec(), margins.to_vec(), |x| vec![f(x)]).unwrap()
}

/// Compares the network with a closed form on `[0, hi]^k`.
fn matches(net: &Network, hi: &[u64], f: impl Fn(&[u64]) -> u64) {
    for x in grid::inclusive(hi) {
        assert_eq!(bulk_eval(net, &x).unwrap().output, vec![f(&x)], "at {x:?}");
    }
}

fn primes(net: &Network) -> Vec<(u64, u64)> {
    let mut v: Vec<(u64, u64)> = net
        .nodes()
        .iter()
        .filter_map(|n| match n.gate() {
            Some(&GateSpec::Toppler { lambda, prime }) => Some((lambda, prime)),
            _ => None,
        })
        .collect();
    v.sort_unstable();
    v
}

#[test]
fn split_outputs_examples() {
    let split = ZilepFunction::from_fn(1, 2, vec![1], vec![0], |x| vec![x[0], x[0]]).unwrap();
    let parts = split_outputs(&split);
    assert_eq!(parts.len(), 2);
    assert!(parts.iter().all(|p| p.integer_linear() == Some(vec![vec![1]])));

    let rotor = ZilepFunction::from_fn(1, 3, vec![3], vec![0], |x| (0..3).map(|i| (x[0] + i) / 3).collect()).unwrap();
    for (i, p) in split_outputs(&rotor).iter().enumerate() {
        for x in 0..20 {
            assert_eq!(p.eval1(&[x]), (x + i as u64) / 3);
        }
    }
    let c = compile(&rotor, Mode::Auto).unwrap();
    assert_eq!(primes(&c.network), vec![(3, 0), (3, 1), (3, 2)]);
    assert_eq!(split_outputs(&three_quarters_function()), vec![three_quarters_function()]);
}

#[test]
fn linear_examples() {
    let double = synth_linear(&ZilepFunction::linear(&[vec![2]]).unwrap()).unwrap();
    assert_eq!((double.count_kind("splitter"), double.count_kind("adder")), (1, 1));
    assert_eq!(bulk_eval(&double, &[3]).unwrap().output, vec![6]);

    let add = synth_linear(&ZilepFunction::linear(&[vec![1, 1]]).unwrap()).unwrap();
    assert_eq!((add.nodes().len(), add.count_kind("adder")), (1, 1));

    let m = ZilepFunction::linear(&[vec![2, 3], vec![1, 0]]).unwrap();
    let net = synth_linear(&m).unwrap();
    for x in grid::inclusive(&[5, 5]) {
        assert_eq!(bulk_eval(&net, &x).unwrap().output, vec![2 * x[0] + 3 * x[1], x[0]]);
    }
}

#[test]
fn unary_recurrent_examples() {
    let three_quarters = synth_unary_recurrent(&three_quarters_function()).unwrap();
    assert_eq!(primes(&three_quarters), vec![(4, 2), (4, 2), (4, 3)]);

    let fifth = ZilepFunction::from_unary_values(&[0, 0, 0, 0, 0, 1], 5, 0).unwrap();
    let net = synth_unary_recurrent(&fifth).unwrap();
    assert_eq!(primes(&net), vec![(5, 0)]);
    assert_eq!(net.nodes().len(), 1);

    let identity = synth_unary_recurrent(&ZilepFunction::linear(&[vec![1]]).unwrap()).unwrap();
    assert_eq!(identity.nodes().len(), 0);
    assert_eq!(bulk_eval(&identity, &[7]).unwrap().output, vec![7]);
}

#[test]
fn meagerize_examples() {
    let f = pair_function();
    assert_eq!(f.meager(0).unwrap(), (false, 2));
    let pieces = meagerize(&f, 0).unwrap();
    assert_eq!(pieces.len(), 2);
    for p in &pieces {
        assert_eq!(p.meager(0).unwrap(), (true, 1));
    }
    for x in grid::inclusive(&[12, 12]) {
        assert_eq!(pieces.iter().map(|p| p.eval1(&x)).sum::<u64>(), f.eval1(&x));
    }
    let half = func(&[2, 2], &[0, 0], |x| (x[0] + x[1]) / 2);
    assert_eq!(meagerize(&half, 1).unwrap(), vec![half.clone()]);
}

#[test]
fn main_reduction_examples() {
    let half = func(&[2, 2], &[0, 0], |x| (x[0] + x[1]) / 2);
    let r = main_reduction(&half).unwrap();
    assert_eq!(r.lambda, 2);
    for y in 0..10 {
        for z in 0..10 {
            assert_eq!((r.g.eval1(&[y]) + z + r.prime) / r.lambda, (y + z) / 2);
        }
    }
    assert!((0..10).all(|y| r.g.eval1(&[y]) == y));

    let third = func(&[1, 3], &[0, 0], |x| x[1] / 3);
    let r = main_reduction(&third).unwrap();
    assert_eq!((r.lambda, r.prime), (3, 0));
    assert_eq!(r.g.bound(), Some(0));

    // a meager piece of the two-variable example, reduced along its first
    // coordinate, leaves a function of the second with period 5
    let piece = meagerize(&pair_function(), 0).unwrap().remove(0);
    let swapped = func(&[5, 4], &[0, 0], |x| piece.eval1(&[x[1], x[0]]));
    let r = main_reduction(&swapped).unwrap();
    assert_eq!(r.g.minimized().periods(), &[5]);
}

#[test]
fn recurrent_examples() {
    let f = pair_function();
    let net = synth_recurrent(&f).unwrap();
    assert!(net.is_acyclic());
    for x in grid::inclusive(&[13, 15]) {
        assert_eq!(bulk_eval(&net, &x).unwrap().output, f.eval(&x));
    }
    assert!(report(&net).max_topplers_on_path.unwrap() <= 2);

    let add = synth_recurrent(&ZilepFunction::linear(&[vec![1, 1]]).unwrap()).unwrap();
    assert_eq!(add.nodes().len(), 1);

    let m = PseudoMin::new(2);
    let net = synth_recurrent(&pseudomin_zilep(&m, &[0, 0]).unwrap()).unwrap();
    matches(&net, &[9, 9], |x| m.eval(&[x[0] as i64, x[1] as i64]) as u64);
}

#[test]
fn pseudomin_networks() {
    for (n, u) in [(2usize, vec![0i64, 1]), (3, vec![0, 1, 1]), (3, vec![0, 0, 0])] {
        let m = PseudoMin::new(n);
        let f = pseudomin_zilep(&m, &u).unwrap();
        assert_eq!(f.eval1(&vec![0; n]), 0);
        let net = synth_recurrent(&f).unwrap();
        let hi = vec![(n * n) as u64; n];
        matches(&net, &hi, |v| {
            let x: Vec<i64> = v.iter().zip(&u).map(|(a, b)| *a as i64 + b).collect();
            m.eval(&x) as u64
        });
    }
}

#[test]
fn bounded_examples() {
    let presink = ZilepFunction::from_unary_values(&[0, 1, 1], 1, 1).unwrap();
    let net = synth_bounded(&presink).unwrap();
    assert_eq!((net.nodes().len(), net.count_kind("presink")), (1, 1));

    let four = ZilepFunction::from_unary_values(&[0, 0, 0, 0, 1, 1], 1, 4).unwrap();
    let net = synth_bounded(&four).unwrap();
    assert_eq!((net.count_kind("delayer"), net.count_kind("presink")), (3, 1));
    matches(&net, &[12], |x| u64::from(x[0] >= 4));

    let min2 = func(&[1, 1], &[2, 2], |x| x[0].min(2).min(x[1].min(2)));
    let net = synth_bounded(&min2).unwrap();
    assert_eq!(net.count_kind("toppler"), 0);
    matches(&net, &[4, 4], |x| x[0].min(2).min(x[1].min(2)));
}

#[test]
fn two_layer_examples() {
    let step = func(&[1, 1], &[0, 1], |x| x[1].min(1));
    let net = two_layer(&step).unwrap();
    matches(&net, &[6, 6], |x| x[1].min(1));

    let first = func(&[1, 1], &[0, 0], |x| x[0]);
    let net = two_layer(&first).unwrap();
    assert_eq!(net.nodes().len(), 0);
    matches(&net, &[6, 6], |x| x[0]);

    let mix = func(&[1, 1], &[0, 1], |x| x[0] + x[1].min(1));
    matches(&two_layer(&mix).unwrap(), &[6, 6], |x| x[0] + x[1].min(1));

    let rising = func(&[1, 1], &[0, 0], |x| x[0] + x[1]);
    assert!(two_layer(&rising).is_err());
}

#[test]
fn interleaving_examples() {
    let z: Vec<u64> = (0..4).map(|i| interleave_targets(4, i, 1)).collect();
    assert_eq!(z, vec![4, 1, 2, 3]);
    for zz in 0..30 {
        let mut t: Vec<u64> = (0..5).map(|i| interleave_targets(5, i, zz)).collect();
        t.sort_unstable();
        assert_eq!(t, (zz..zz + 5).collect::<Vec<_>>());
        assert!((0..5).all(|i| interleave_targets(5, i, zz) == 5 * layer_index(5, i, zz) + i));
    }

    let f = func(&[1, 1], &[0, 2], |x| x[1].min(2));
    let plan = interleave_plan(&f, InterleaveCase::Flat, 2).unwrap();
    assert_eq!(plan.n, 2);
    for g in &plan.layers {
        for y in 0..5 {
            assert_eq!(g.eval1(&[y, 1]), g.eval1(&[y, 4]));
        }
    }

    let half = func(&[1, 2], &[0, 0], |x| x[1] / 2);
    let plan = interleave_plan(&half, InterleaveCase::Rising, 2).unwrap();
    assert_eq!(plan.offsets, vec![0, 0]);
}

#[test]
fn general_examples() {
    let delay = ZilepFunction::from_unary_values(&[0, 0, 1], 1, 1).unwrap();
    let net = synth_general(&delay).unwrap();
    assert_eq!(net.count_kind("delayer"), 1);

    let mix = ZilepFunction::from_unary_values(&[0, 2, 2, 3], 2, 1).unwrap();
    let net = synth_general(&mix).unwrap();
    matches(&net, &[20], |x| x[0].div_ceil(2) + u64::from(x[0] > 0));

    let f = transient_mix_function();
    matches(&synth_general(&f).unwrap(), &[12, 12], |x| {
        (x[0].saturating_sub(1) + x[1]) / 2 + x[0].min(1)
    });
}

#[test]
fn transient_example_verifies() {
    let f = transient_pair_function();
    let c = compile(&f, Mode::General).unwrap();
    let cfg = VerifyConfig {
        schedules: 3,
        ..VerifyConfig::default()
    };
    let rep = verify(&f, &c.network, &cfg).unwrap();
    assert!(rep.passed, "{:?}", rep.failure);
    assert!(c.report.passes.contains_key("interleave"));
}

#[test]
fn unprime_examples() {
    let three_quarters = three_quarters_network([3, 2, 2]);
    let plain = rewrite_unprime(&three_quarters);
    assert!(primes(&plain).iter().all(|&(_, q)| q == 0));
    matches(&plain, &[12], |x| three_quarters_function().eval1(x));

    let unprimed = three_quarters_network([0, 0, 0]);
    assert_eq!(rewrite_unprime(&unprimed), unprimed);
}

#[test]
fn feedback_examples() {
    let three = synth::rewrite::toppler_loop(3, 0);
    assert_eq!(primes(&three), vec![(2, 0), (2, 1)]);
    assert!(!three.is_acyclic());
    let four = synth::rewrite::toppler_loop(4, 0);
    assert!(four.is_acyclic() && four.nodes().len() == 2);
    matches(&synth::rewrite::toppler_loop(5, 0), &[25], |x| x[0] / 5);

    let f = pair_function();
    let net = rewrite_feedback(&synth_recurrent(&f).unwrap());
    assert!(primes(&net).iter().all(|&(l, _)| l == 2));
    assert!(matches!(check_halting(&net), HaltingVerdict::FeedbackOk { .. }));
    for x in grid::inclusive(&[9, 10]) {
        assert_eq!(bulk_eval(&net, &x).unwrap().output, f.eval(&x));
    }
}

#[test]
fn reports() {
    let r = report(&three_quarters_network([3, 2, 2]));
    assert_eq!((r.count("toppler"), r.max_topplers_on_path), (3, Some(1)));
    let r = report(&synth_linear(&ZilepFunction::linear(&[vec![1, 1]]).unwrap()).unwrap());
    assert_eq!((r.count("toppler"), r.max_topplers_on_path), (0, Some(0)));
}

#[test]
fn mode_mismatches() {
    let transient = ZilepFunction::from_unary_values(&[0, 0, 1], 1, 1).unwrap();
    assert!(matches!(compile(&transient, Mode::Recurrent), Err(Error::Mode(_))));
    assert!(matches!(compile(&three_quarters_function(), Mode::Bounded), Err(Error::Mode(_))));
    assert!(compile(&transient, Mode::Auto).is_ok());
}
