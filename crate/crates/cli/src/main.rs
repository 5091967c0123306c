use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use abforge::fixtures;
use abforge::gates::GateSpec;
use abforge::network::{
    check_halting, export_dot, export_json, import_json, run, HaltingVerdict, Outcome, RunOptions,
    Schedule,
};
use abforge::synth::{compile, report, rewrite_feedback, rewrite_unprime, Mode};
use abforge::verify::{verify, FailureKind, VerifyConfig, DEFAULT_SEED};
use abforge::{AbelianProcessor, AbelianVerdict, Error, Network, ZilepFunction};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(name = "abforge", version, about = "Compile, run and verify abelian networks")]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a processor, function or network file.
    Check { path: PathBuf },
    /// Compile a function file to a network of gates.
    Compile {
        path: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        mode: ModeArg,
        /// Rewrites applied after synthesis, in order.
        #[arg(long, value_enum)]
        rewrite: Vec<RewriteArg>,
        /// Where to write the network JSON; stdout when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Where to write the synthesis report JSON.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Execute a network once on an input vector.
    Run {
        network: PathBuf,
        /// Comma-separated letter counts, one per input edge.
        #[arg(long)]
        input: String,
        #[arg(long, value_enum, default_value = "lowest")]
        schedule: ScheduleArg,
        /// Seed for the random schedule.
        #[arg(long, env = "ABFORGE_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Record the edge served at each step.
        #[arg(long)]
        trace: bool,
        /// Maximum number of processed letters.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Compare a network against a function on a grid and under random schedules.
    Verify {
        function: PathBuf,
        network: PathBuf,
        /// Comma-separated inclusive upper bounds; defaults to 2(r + λ) per coordinate.
        #[arg(long)]
        bounds: Option<String>,
        #[arg(long, default_value_t = 100)]
        schedules: usize,
        #[arg(long, env = "ABFORGE_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        budget_multiplier: u64,
        /// Where to write the verification report JSON.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Print a network as DOT or normalized JSON.
    Export {
        network: PathBuf,
        #[arg(long, value_enum, default_value = "dot")]
        format: FormatArg,
    },
    /// Write a built-in example file, or list the examples of a kind.
    Fixture {
        #[arg(value_enum)]
        kind: FixtureKind,
        name: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Auto,
    Recurrent,
    Bounded,
    General,
}

#[derive(Clone, Copy, ValueEnum)]
enum RewriteArg {
    Unprime,
    Feedback,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScheduleArg {
    Lowest,
    RoundRobin,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Dot,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum FixtureKind {
    Function,
    Processor,
    Network,
}

/// A failed command: exit code and message.
struct Failure(u8, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExceeded { .. } => EXIT_BUDGET,
            Error::Mode(_) | Error::InputArity { .. } => EXIT_USAGE,
            _ => EXIT_FAIL,
        };
        Failure(code, e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure(EXIT_USAGE, msg.into())
}

enum Document {
    Processor(AbelianProcessor),
    Function(ZilepFunction),
    Network(Network),
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| {
        Failure(
            EXIT_FAIL,
            format!("{}: line {}, column {}: {e}", path.display(), e.line(), e.column()),
        )
    })
}

fn load(path: &Path) -> Result<Document, Failure> {
    let v = read_json(path)?;
    let at = |e: Error| Failure(EXIT_FAIL, format!("{}: {e}", path.display()));
    let has = |key: &str| v.get(key).is_some();
    if has("transitions") {
        let doc = serde_json::from_value(v).map_err(|e| at(e.into()))?;
        Ok(Document::Processor(AbelianProcessor::from_doc(doc).map_err(at)?))
    } else if has("table") {
        let doc = serde_json::from_value(v).map_err(|e| at(e.into()))?;
        Ok(Document::Function(ZilepFunction::from_doc(doc).map_err(at)?))
    } else if has("nodes") {
        let doc = serde_json::from_value(v).map_err(|e| at(e.into()))?;
        Ok(Document::Network(abforge::network::io::from_doc(doc).map_err(at)?))
    } else {
        Err(Failure(
            EXIT_FAIL,
            format!("{}: not a processor, function or network document", path.display()),
        ))
    }
}

fn load_function(path: &Path) -> Result<ZilepFunction, Failure> {
    match load(path)? {
        Document::Function(f) => Ok(f),
        Document::Processor(p) => Ok(abforge::processor_to_zilep(&p)?),
        Document::Network(_) => Err(usage(format!("{}: expected a function", path.display()))),
    }
}

fn load_network(path: &Path) -> Result<Network, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    import_json(&text).map_err(|e| Failure(EXIT_FAIL, format!("{}: {e}", path.display())))
}

fn parse_list(s: &str) -> Result<Vec<u64>, Failure> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse::<u64>().map_err(|e| usage(format!("bad number {t:?}: {e}"))))
        .collect()
}

fn write_or_print(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| usage(format!("{}: {e}", p.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

/// Prints `value` as JSON or `text` as is.
fn emit(json_mode: bool, value: &Value, text: &str) {
    if json_mode {
        println!("{}", serde_json::to_string_pretty(value).expect("JSON value"));
    } else {
        println!("{text}");
    }
}

fn halting_name(v: &HaltingVerdict) -> String {
    match v {
        HaltingVerdict::Acyclic => "acyclic".into(),
        HaltingVerdict::FeedbackOk { power, norm } => format!("feedback_ok (power {power}, norm {norm})"),
        HaltingVerdict::Unknown => "unknown".into(),
    }
}

fn cmd_check(path: &Path, json_mode: bool) -> Result<(), Failure> {
    let (value, text) = match load(path)? {
        Document::Processor(p) => {
            if let AbelianVerdict::Counterexample { i, j, state } = p.check_abelian() {
                let msg = format!(
                    "not abelian: letters {} and {} do not commute at state {}",
                    p.input_letters()[i],
                    p.input_letters()[j],
                    p.state_names()[state]
                );
                let v = json!({"kind": "processor", "abelian": false,
                    "counterexample": {"i": i, "j": j, "state": state}});
                emit(json_mode, &v, &msg);
                return Err(Failure(EXIT_FAIL, String::new()));
            }
            let rec = p.classify_recurrence()?;
            let exponent = if rec.recurrent { Some(p.exponent()?) } else { None };
            let text = match exponent {
                Some(e) => format!("abelian, recurrent, exponent {e}, {} states", p.state_count()),
                None => format!(
                    "abelian, transient, recurrent class {:?}, {} states",
                    rec.recurrent_states,
                    p.state_count()
                ),
            };
            let v = json!({"kind": "processor", "abelian": true, "recurrent": rec.recurrent,
                "recurrent_states": rec.recurrent_states, "exponent": exponent,
                "states": p.state_count()});
            (v, text)
        }
        Document::Function(f) => {
            let class = if f.is_zilp() { "ZILP" } else { "ZILEP" };
            let coeffs: Vec<String> = f.coeffs().iter().map(|c| c.to_string()).collect();
            let text = format!(
                "{class}, k={}, outputs={}, periods {:?}, margins {:?}, coefficients [{}]{}",
                f.arity(),
                f.output_count(),
                f.periods(),
                f.margins(),
                coeffs.join(", "),
                f.bound().map(|j| format!(", bounded by {j}")).unwrap_or_default()
            );
            let v = json!({"kind": "function", "class": class, "k": f.arity(),
                "outputs": f.output_count(), "periods": f.periods(), "margins": f.margins(),
                "coeffs": coeffs, "bound": f.bound()});
            (v, text)
        }
        Document::Network(net) => {
            let verdict = check_halting(&net);
            let rep = report(&net);
            let text = format!(
                "network, {} nodes, {} inputs, {} outputs, halting: {}",
                rep.nodes,
                net.inputs().len(),
                net.outputs().len(),
                halting_name(&verdict)
            );
            let v = json!({"kind": "network", "nodes": rep.nodes, "inputs": net.inputs().len(),
                "outputs": net.outputs().len(), "halting": halting_name(&verdict),
                "halts": verdict.halts()});
            (v, text)
        }
    };
    emit(json_mode, &value, &text);
    Ok(())
}

fn cmd_compile(
    path: &Path,
    mode: ModeArg,
    rewrites: &[RewriteArg],
    output: Option<&Path>,
    report_path: Option<&Path>,
    json_mode: bool,
) -> Result<(), Failure> {
    let f = load_function(path)?;
    let mode = match mode {
        ModeArg::Auto => Mode::Auto,
        ModeArg::Recurrent => Mode::Recurrent,
        ModeArg::Bounded => Mode::Bounded,
        ModeArg::General => Mode::General,
    };
    let compiled = compile(&f, mode)?;
    let mut net = compiled.network;
    for r in rewrites {
        net = match r {
            RewriteArg::Unprime => rewrite_unprime(&net),
            RewriteArg::Feedback => rewrite_feedback(&net),
        };
    }
    let mut rep = report(&net);
    rep.passes = compiled.report.passes;
    let verdict = check_halting(&net);
    write_or_print(output, &export_json(&net))?;
    let rep_json = serde_json::to_value(&rep).expect("report serializes");
    if let Some(p) = report_path {
        write_or_print(Some(p), &serde_json::to_string_pretty(&rep_json).expect("JSON value"))?;
    }
    // the network went to stdout, so the summary goes to stderr
    let counts: Vec<String> = rep
        .counts
        .iter()
        .filter(|(_, &n)| n > 0)
        .map(|(k, n)| format!("{n} {k}"))
        .collect();
    let text = format!(
        "{} nodes ({}), {}, floor-depth bound {}, halting: {}",
        rep.nodes,
        counts.join(", "),
        if rep.acyclic { "acyclic" } else { "cyclic" },
        rep.max_topplers_on_path.map_or("n/a".into(), |d| d.to_string()),
        halting_name(&verdict)
    );
    let mut v = rep_json;
    v["halting"] = json!(halting_name(&verdict));
    if output.is_some() {
        emit(json_mode, &v, &text);
    } else if json_mode {
        eprintln!("{}", serde_json::to_string(&v).expect("JSON value"));
    } else {
        eprintln!("{text}");
    }
    Ok(())
}

fn outcome_json(o: &Outcome) -> Value {
    json!({"output": o.output, "trash": o.trash, "states": o.states, "steps": o.steps,
        "trace": o.trace})
}

fn cmd_run(
    path: &Path,
    input: &str,
    schedule: ScheduleArg,
    seed: u64,
    trace: bool,
    budget: Option<u64>,
    json_mode: bool,
) -> Result<(), Failure> {
    let net = load_network(path)?;
    let x = parse_list(input)?;
    let schedule = match schedule {
        ScheduleArg::Lowest => Schedule::LowestEdgeId,
        ScheduleArg::RoundRobin => Schedule::RoundRobin,
        ScheduleArg::Random => Schedule::SeededRandom(seed),
    };
    let opts = RunOptions {
        schedule,
        budget,
        trace,
    };
    let out = match run(&net, &x, &opts) {
        Err(Error::BudgetExceeded { budget, state }) => {
            let v = json!({"budget_exceeded": budget, "states": state.states, "steps": state.steps});
            emit(json_mode, &v, &format!("step budget of {budget} exceeded after {} steps", state.steps));
            return Err(Failure(EXIT_BUDGET, String::new()));
        }
        other => other?,
    };
    let mut text = format!(
        "output {:?}\ntrash {:?}\nstates {:?}\nsteps {}",
        out.output, out.trash, out.states, out.steps
    );
    if let Some(t) = &out.trace {
        text.push_str(&format!("\ntrace {t:?}"));
    }
    emit(json_mode, &outcome_json(&out), &text);
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    function: &Path,
    network: &Path,
    bounds: Option<&str>,
    schedules: usize,
    seed: u64,
    budget_multiplier: u64,
    report_path: Option<&Path>,
    json_mode: bool,
) -> Result<(), Failure> {
    let f = load_function(function)?;
    let net = load_network(network)?;
    let cfg = VerifyConfig {
        bounds: bounds.map(parse_list).transpose()?,
        schedules,
        seed,
        budget_multiplier,
    };
    let rep = verify(&f, &net, &cfg).map_err(|e| usage(e.to_string()))?;
    let v = serde_json::to_value(&rep).expect("report serializes");
    if let Some(p) = report_path {
        write_or_print(Some(p), &serde_json::to_string_pretty(&v).expect("JSON value"))?;
    }
    let text = match &rep.failure {
        None => format!(
            "PASS: {} grid points on {:?}, {} schedules, seed {}",
            rep.grid_points, rep.bounds, rep.schedules, rep.seed
        ),
        Some(fail) => format!(
            "FAIL ({:?}) at x={:?}: expected {:?}, got {:?}{}; seed {}",
            fail.kind,
            fail.input,
            fail.expected,
            fail.got,
            fail.schedule_seed.map(|s| format!(", schedule seed {s}")).unwrap_or_default(),
            rep.seed
        ),
    };
    emit(json_mode, &v, &text);
    match rep.failure.map(|f| f.kind) {
        None => Ok(()),
        Some(FailureKind::Budget) => Err(Failure(EXIT_BUDGET, String::new())),
        Some(_) => Err(Failure(EXIT_FAIL, String::new())),
    }
}

fn cmd_export(path: &Path, format: FormatArg) -> Result<(), Failure> {
    let net = load_network(path)?;
    match format {
        FormatArg::Dot => print!("{}", export_dot(&net)),
        FormatArg::Json => println!("{}", export_json(&net)),
    }
    Ok(())
}

fn fixture_functions() -> Vec<(&'static str, ZilepFunction)> {
    vec![
        ("three-quarters", fixtures::three_quarters_function()),
        ("pair", fixtures::pair_function()),
        ("transient-pair", fixtures::transient_pair_function()),
        ("transient-mix", fixtures::transient_mix_function()),
        ("presink", ZilepFunction::from_unary_values(&[0, 1, 1], 1, 1).expect("valid")),
    ]
}

fn fixture_processors() -> Vec<(&'static str, AbelianProcessor)> {
    vec![
        ("adder", GateSpec::ADDER.processor()),
        ("splitter", GateSpec::SPLITTER.processor()),
        ("toppler-3", GateSpec::toppler(3, 0).processor()),
        ("delayer", GateSpec::Delayer.processor()),
        ("presink", GateSpec::Presink.processor()),
        (
            "noncommuting",
            AbelianProcessor::from_maps(
                0,
                vec![vec![1, 2, 0], vec![0, 2, 1]],
                vec![vec![vec![0]; 3], vec![vec![0]; 3]],
                1,
            )
            .expect("valid processor"),
        ),
    ]
}

fn fixture_networks() -> Vec<(String, Network)> {
    let mut nets = vec![
        ("three-quarters-net".to_string(), fixtures::three_quarters_network([3, 2, 2])),
        ("three-quarters-misprimed".to_string(), fixtures::three_quarters_network([3, 3, 2])),
    ];
    nets.extend(fixtures::fixture_networks());
    nets
}

fn cmd_fixture(kind: FixtureKind, name: Option<&str>, output: Option<&Path>) -> Result<(), Failure> {
    let entries: Vec<(String, String)> = match kind {
        FixtureKind::Function => fixture_functions()
            .into_iter()
            .map(|(n, f)| (n.to_string(), f.to_json()))
            .collect(),
        FixtureKind::Processor => fixture_processors()
            .into_iter()
            .map(|(n, p)| (n.to_string(), p.to_json()))
            .collect(),
        FixtureKind::Network => fixture_networks()
            .into_iter()
            .map(|(n, net)| (n, export_json(&net)))
            .collect(),
    };
    let Some(name) = name else {
        for (n, _) in &entries {
            println!("{n}");
        }
        return Ok(());
    };
    let (_, text) = entries
        .iter()
        .find(|(n, _)| n == name)
        .ok_or_else(|| usage(format!("no such fixture {name:?}")))?;
    write_or_print(output, text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json_mode = cli.json;
    let result = match &cli.command {
        Command::Check { path } => cmd_check(path, json_mode),
        Command::Compile {
            path,
            mode,
            rewrite,
            output,
            report,
        } => cmd_compile(path, *mode, rewrite, output.as_deref(), report.as_deref(), json_mode),
        Command::Run {
            network,
            input,
            schedule,
            seed,
            trace,
            budget,
        } => cmd_run(network, input, *schedule, *seed, *trace, *budget, json_mode),
        Command::Verify {
            function,
            network,
            bounds,
            schedules,
            seed,
            budget_multiplier,
            report,
        } => cmd_verify(
            function,
            network,
            bounds.as_deref(),
            *schedules,
            *seed,
            *budget_multiplier,
            report.as_deref(),
            json_mode,
        ),
        Command::Export { network, format } => cmd_export(network, *format),
        Command::Fixture { kind, name, output } => cmd_fixture(*kind, name.as_deref(), output.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(code, msg)) => {
            if !msg.is_empty() {
                eprintln!("error: {msg}");
            }
            ExitCode::from(code)
        }
    }
}
