use abforge::fixtures::three_quarters_network;
use abforge::gates::{multiway_tree, rotor_aggregation_node, rotor_node, sandpile_node, GateSpec, TreeKind};
use abforge::network::io::{from_doc, to_doc};
use abforge::network::{
    bulk_eval, check_halting, export_dot, export_json, import_json, network_to_processor, run,
    Edge, HaltingVerdict, Head, RunOptions, Schedule, Tail,
};
use abforge::synth::rewrite::{delayer_loop, toppler_loop};
use abforge::{Error, Network, NetworkBuilder, NodeKind};

fn outputs(net: &Network, x: &[u64]) -> Vec<u64> {
    run(net, x, &RunOptions::default()).unwrap().output
}

#[test]
fn gate_cumulative_outputs() {
    let t = GateSpec::toppler(2, 0).processor();
    assert_eq!((1..=3).map(|x| t.eval(&[x]).output[0]).collect::<Vec<_>>(), vec![0, 1, 1]);
    let p = GateSpec::Presink.processor();
    assert!((1..=5).all(|x| p.eval(&[x]).output == vec![1]));
    let s = GateSpec::Splitter { fan: 3 }.processor();
    assert_eq!(s.eval(&[4]).output, vec![4, 4, 4]);
}

#[test]
fn multiway_trees() {
    assert_eq!(multiway_tree(TreeKind::Adder, 2).unwrap().nodes().len(), 1);
    let add5 = multiway_tree(TreeKind::Adder, 5).unwrap();
    assert_eq!(add5.count_kind("adder"), 4);
    assert_eq!(outputs(&add5, &[1, 2, 3, 4, 5]), vec![15]);
    let split7 = multiway_tree(TreeKind::Splitter, 7).unwrap();
    assert_eq!(split7.count_kind("splitter"), 6);
    for x in 0..=20 {
        assert_eq!(outputs(&split7, &[x]), vec![x; 7]);
    }
    assert!(multiway_tree(TreeKind::Splitter, 1).is_err());
}

#[test]
fn demo_nodes() {
    let rotor = rotor_node(3).unwrap();
    let first = outputs(&rotor, &[1, 0, 0]);
    assert_eq!(first.iter().sum::<u64>(), 1);
    // letters are dealt round-robin
    assert_eq!(outputs(&rotor, &[2, 2, 2]), vec![2, 2, 2]);
    assert_eq!(outputs(&sandpile_node(3).unwrap(), &[1, 1, 1]), vec![1, 1, 1]);
    assert_eq!(outputs(&sandpile_node(3).unwrap(), &[1, 1, 0]), vec![0, 0, 0]);
    let agg = rotor_aggregation_node(3).unwrap();
    assert_eq!(outputs(&agg, &[1, 0, 0]), vec![0, 0, 0]);
    assert_eq!(outputs(&agg, &[1, 1, 0]).iter().sum::<u64>(), 1);
}

#[test]
fn run_examples() {
    let three_quarters = three_quarters_network([3, 2, 2]);
    assert_eq!(outputs(&three_quarters, &[2]), vec![3]);
    let idle = run(&three_quarters, &[0], &RunOptions::default()).unwrap();
    assert_eq!((idle.output, idle.steps), (vec![0], 0));
    assert_eq!(outputs(&toppler_loop(3, 0), &[7]), vec![2]);
    assert_eq!(outputs(&delayer_loop(), &[5]), vec![4]);
}

#[test]
fn schedules_agree_and_bulk_matches() {
    let net = toppler_loop(11, 4);
    for x in 0..60 {
        let reference = bulk_eval(&net, &[x]).unwrap();
        for s in [Schedule::LowestEdgeId, Schedule::RoundRobin, Schedule::SeededRandom(x)] {
            let out = run(&net, &[x], &RunOptions::with_schedule(s)).unwrap();
            assert_eq!(out.output, reference.output);
            assert_eq!(out.states, reference.states);
        }
    }
}

#[test]
fn tracing_records_every_step() {
    let opts = RunOptions {
        trace: true,
        ..RunOptions::default()
    };
    let out = run(&toppler_loop(5, 0), &[9], &opts).unwrap();
    assert_eq!(out.trace.unwrap().len() as u64, out.steps);
}

#[test]
fn input_arity_is_checked() {
    let err = run(&three_quarters_network([3, 2, 2]), &[1, 2], &RunOptions::default()).unwrap_err();
    assert!(matches!(err, Error::InputArity { expected: 1, got: 2 }));
}

fn runaway_splitter() -> Network {
    // a splitter whose second output returns to its own input through an adder
    let nodes = vec![NodeKind::Gate(GateSpec::ADDER), NodeKind::Gate(GateSpec::SPLITTER)];
    let node = |node, port| (Tail::Node { node, port }, Head::Node { node, port });
    let edges = vec![
        Edge { tail: Tail::Input, head: node(0, 0).1 },
        Edge { tail: node(0, 0).0, head: node(1, 0).1 },
        Edge { tail: node(1, 0).0, head: Head::Output },
        Edge { tail: node(1, 1).0, head: node(0, 1).1 },
    ];
    Network::new(nodes, edges, vec![0], vec![2], Vec::new()).unwrap()
}

#[test]
fn halting_verdicts() {
    assert_eq!(check_halting(&three_quarters_network([3, 2, 2])), HaltingVerdict::Acyclic);
    assert!(matches!(check_halting(&delayer_loop()), HaltingVerdict::FeedbackOk { .. }));
    let runaway = runaway_splitter();
    assert_eq!(check_halting(&runaway), HaltingVerdict::Unknown);
    let budget = RunOptions {
        budget: Some(1000),
        ..RunOptions::default()
    };
    assert!(matches!(run(&runaway, &[1], &budget), Err(Error::BudgetExceeded { .. })));
}

#[test]
fn emulation_examples() {
    let p = network_to_processor(&three_quarters_network([3, 2, 2]), 1000).unwrap();
    assert_eq!(p.state_count(), 4);
    let want = [0, 1, 3, 3, 3, 4, 6, 6, 6, 7, 9, 9, 9];
    for (x, w) in want.iter().enumerate() {
        assert_eq!(p.eval(&[x as u64]).output, vec![*w]);
    }
    let mut b = NetworkBuilder::new();
    let (x, y) = (b.input(), b.input());
    let s = b.add(vec![x, y]);
    b.output(s);
    assert_eq!(network_to_processor(&b.finish(), 10).unwrap().state_count(), 1);
    let five = network_to_processor(&toppler_loop(5, 0), 1000).unwrap();
    assert_eq!(five.exponent().unwrap() % 5, 0);
    assert!(matches!(
        network_to_processor(&toppler_loop(17, 0), 4),
        Err(Error::StateCap(4))
    ));
}

#[test]
fn exports() {
    let mut b = NetworkBuilder::new();
    let x = b.input();
    let t = b.toppler(x, 3, 0);
    b.output(t);
    let dot = export_dot(&b.finish());
    assert_eq!(dot.matches("T3:0").count(), 1);
    assert!(dot.starts_with("digraph"));

    let three_quarters = three_quarters_network([3, 2, 2]);
    let json = export_json(&three_quarters);
    let back = import_json(&json).unwrap();
    assert_eq!(back.nodes().len(), 5);
    assert_eq!(back, three_quarters);
    assert_eq!(from_doc(to_doc(&three_quarters)).unwrap(), three_quarters);
}

#[test]
fn corrupt_json_names_the_edge() {
    let mut doc: serde_json::Value = serde_json::from_str(&export_json(&three_quarters_network([3, 2, 2]))).unwrap();
    let edges = doc["edges"].as_array_mut().unwrap();
    edges[2].as_object_mut().unwrap().remove("to");
    let err = import_json(&doc.to_string()).unwrap_err().to_string();
    assert!(err.contains("edge 2"), "{err}");
}
