use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use trikernel::cycles::{
    check_circuit_hypothesis_with, check_cycle_hypothesis, enumerate_cycles, every_cycle_has_symmetric_arc,
    CircuitCheck, DEFAULT_BUDGET,
};
use trikernel::generators::{GeneratorKind, GeneratorSpec};
use trikernel::harness::{run_campaign, CampaignConfig, PropertyId, DEFAULT_MAX_FAILURES};
use trikernel::kernels::{find_kernel_via_closure, find_kl_kernel, k_closure, KernelQuery};
use trikernel::{format_digraph, parse_digraph_text, CycleCondition, Digraph, Error, HypothesisReport};

mod trace;

#[derive(Parser, Debug)]
#[command(name = "trikernel", version, about = "Kernels, 3-kernels and the 3-substitution method on small digraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Write the report here instead of stdout. For `generate`, the
    /// directory receiving the documents.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Failures kept in a verification report.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_FAILURES)]
    max_failures: usize,

    /// Search-step cap for circuit enumeration.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Size, connectivity and the chord hypotheses of a digraph file.
    Analyze(AnalyzeArgs),
    /// Search for a (k,l)-kernel.
    Kernel(KernelArgs),
    /// Print the k-closure of a digraph.
    Closure(ClosureArgs),
    /// Run the 3-substitution method from one start vertex.
    Substitute(SubstituteArgs),
    /// Run a verification campaign.
    Verify(VerifyArgs),
    /// Write generated digraphs in text form.
    Generate(GenerateArgs),
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    file: PathBuf,
    #[arg(long, default_value_t = 2)]
    min_cycle_len: usize,
    /// Defaults to the arc count.
    #[arg(long)]
    max_circuit_len: Option<usize>,
}

#[derive(Args, Debug)]
struct KernelArgs {
    file: PathBuf,
    #[arg(long, default_value_t = 3)]
    k: usize,
    /// Defaults to k - 1.
    #[arg(long)]
    l: Option<usize>,
    /// Search for a kernel of C^(k-1)(D) instead.
    #[arg(long)]
    via_closure: bool,
    /// Also write C^(k-1)(D) to this path.
    #[arg(long, requires = "via_closure")]
    emit_closure: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ClosureArgs {
    file: PathBuf,
    #[arg(long, default_value_t = 2)]
    k: usize,
}

#[derive(Args, Debug)]
struct SubstituteArgs {
    file: PathBuf,
    #[arg(long)]
    x0: usize,
    /// Write the full trace document (JSON) here.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(value_parser = parse_property)]
    property: PropertyId,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 100)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Enumerate every labeled digraph on 1..=n vertices.
    #[arg(long)]
    exhaustive: bool,
    /// Arc probability; each property has its own default.
    #[arg(long)]
    p: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Cycle,
    Random,
    #[value(name = "random-sc")]
    RandomSc,
    Exhaustive,
}

impl From<Kind> for GeneratorKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Cycle => GeneratorKind::Cycle,
            Kind::Random => GeneratorKind::Random,
            Kind::RandomSc => GeneratorKind::RandomStronglyConnected,
            Kind::Exhaustive => GeneratorKind::ExhaustiveLabeled,
        }
    }
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0.2)]
    p: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn parse_property(s: &str) -> Result<PropertyId, String> {
    s.parse().map_err(|_| {
        let names: Vec<_> = PropertyId::ALL.iter().map(|p| p.as_str()).collect();
        format!("unknown property `{s}`; expected one of {}", names.join(", "))
    })
}

/// Why a command stopped, mapped onto the exit code.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Property,
    Resource(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_resource_bound() {
            return Failure::Resource(e.to_string());
        }
        match e.root() {
            Error::NoBaseKernel { .. } | Error::SubkernelMissing { .. } | Error::NoRoadFound { .. } => {
                eprintln!("error: {e}");
                Failure::Property
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = Result<bool, Failure>;

fn read_digraph(path: &Path) -> Result<Digraph, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    parse_digraph_text(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

/// Prints `text` or `value` according to `--format`, to `--out` if given.
fn emit(cli: &Cli, text: String, value: &Value) -> Result<(), Failure> {
    let rendered = match cli.format {
        Format::Text => text,
        Format::Json => serde_json::to_string_pretty(value).expect("json values serialize") + "\n",
    };
    match &cli.out {
        Some(path) => write_file(path, &rendered),
        None => {
            print!("{rendered}");
            Ok(())
        }
    }
}

fn hypothesis_json(r: &HypothesisReport, keep: usize) -> Value {
    json!({
        "satisfied": r.satisfied,
        "examined": r.examined,
        "violation_count": r.violations.len(),
        "violations": r.violations.iter().take(keep).collect::<Vec<_>>(),
    })
}

fn hypothesis_line(name: &str, r: &HypothesisReport) -> String {
    match r.violations.first() {
        None => format!("{name}: satisfied ({} examined)\n", r.examined),
        Some(v) => format!(
            "{name}: violated by {} of {} examined; first {:?}: {}\n",
            r.violations.len(),
            r.examined,
            v.walk,
            v.reason
        ),
    }
}

fn analyze(cli: &Cli, args: &AnalyzeArgs) -> Outcome {
    let d = read_digraph(&args.file)?;
    let n = d.vertex_count();
    let cycles = enumerate_cycles(&d, args.min_cycle_len.max(2), n).len();
    let symmetric = every_cycle_has_symmetric_arc(&d);
    let consecutive = check_cycle_hypothesis(&d, CycleCondition::TwoConsecutive, args.min_cycle_len);
    let crossing = check_cycle_hypothesis(&d, CycleCondition::ThreeWithCrossing, args.min_cycle_len);
    let opts = CircuitCheck { budget: cli.budget, ..CircuitCheck::new(args.max_circuit_len.unwrap_or(d.arc_count())) };
    let circuit = check_circuit_hypothesis_with(&d, opts)?;

    let mut text = format!(
        "vertices: {n}\narcs: {}\nstrongly connected: {}\ncycles (length >= {}): {cycles}\n",
        d.arc_count(),
        d.is_strongly_connected(),
        args.min_cycle_len.max(2)
    );
    text += &hypothesis_line("symmetric arc on every cycle", &symmetric);
    text += &hypothesis_line("two consecutive short chords", &consecutive);
    text += &hypothesis_line("two consecutive and a crossing short chord", &crossing);
    text += &hypothesis_line(&format!("circuit chord condition (length <= {})", opts.max_len), &circuit);
    let keep = cli.max_failures;
    let value = json!({
        "vertices": n,
        "arcs": d.arc_count(),
        "strongly_connected": d.is_strongly_connected(),
        "min_cycle_len": args.min_cycle_len.max(2),
        "cycles": cycles,
        "symmetric_arc": hypothesis_json(&symmetric, keep),
        "two_consecutive": hypothesis_json(&consecutive, keep),
        "three_with_crossing": hypothesis_json(&crossing, keep),
        "max_circuit_len": opts.max_len,
        "circuit": hypothesis_json(&circuit, keep),
    });
    emit(cli, text, &value)?;
    Ok(true)
}

fn kernel(cli: &Cli, args: &KernelArgs) -> Outcome {
    let d = read_digraph(&args.file)?;
    let l = args.l.unwrap_or(args.k.saturating_sub(1));
    let q = KernelQuery::new(args.k, l)?;
    let result = if args.via_closure {
        if l + 1 != args.k {
            return Err(Failure::Usage("--via-closure searches for k-kernels, so l must be k - 1".into()));
        }
        let result = find_kernel_via_closure(&d, args.k)?;
        if let Some(path) = &args.emit_closure {
            write_file(path, &format_digraph(&k_closure(&d, args.k - 1)?))?;
        }
        result
    } else {
        find_kl_kernel(&d, q)?
    };
    let text = match &result.witness {
        Some(w) => format!("({},{l})-kernel: {w}\n", args.k),
        None => format!("no ({},{l})-kernel\n", args.k),
    };
    let value = json!({
        "k": args.k,
        "l": l,
        "via_closure": args.via_closure,
        "found": result.found(),
        "witness": result.witness,
        "subsets_examined": result.subsets_examined,
    });
    emit(cli, text, &value)?;
    Ok(true)
}

fn closure(cli: &Cli, args: &ClosureArgs) -> Outcome {
    let d = read_digraph(&args.file)?;
    let c = k_closure(&d, args.k)?;
    let text = format_digraph(&c);
    let value = json!({ "k": args.k, "vertices": c.vertex_count(), "arcs": c.arcs() });
    emit(cli, text, &value)?;
    Ok(true)
}

fn substitute(cli: &Cli, args: &SubstituteArgs) -> Outcome {
    let d = read_digraph(&args.file)?;
    d.check_vertex(args.x0)?;
    let out = trikernel::substitution::run_substitution_method(&d, args.x0)?;
    if let Some(path) = &args.trace {
        let doc = trace::document(&out)?;
        write_file(path, &(serde_json::to_string_pretty(&doc).expect("json values serialize") + "\n"))?;
    }
    let mut text = format!(
        "x0: {}\nbase kernel: {}\np: {}\npre-3-kernel: {}\n2-absorbent: {}\n3-kernel: {}\n",
        args.x0, out.trace.base_kernel, out.trace.p, out.pre_3_kernel, out.absorbent, out.is_3_kernel
    );
    if let Some(w) = &out.failure_witness {
        text += &format!("short path between members: {w:?}\n");
    }
    let value = json!({
        "x0": args.x0,
        "base_kernel": out.trace.base_kernel,
        "p": out.trace.p,
        "pre_3_kernel": out.pre_3_kernel,
        "absorbent": out.absorbent,
        "is_3_kernel": out.is_3_kernel,
        "failure_witness": out.failure_witness,
    });
    emit(cli, text, &value)?;
    Ok(out.is_3_kernel)
}

fn verify(cli: &Cli, args: &VerifyArgs) -> Outcome {
    let mut cfg = CampaignConfig::new(args.property, args.n).trials(args.trials).seed(args.seed);
    if args.exhaustive {
        cfg = cfg.exhaustive();
    }
    if let Some(p) = args.p {
        cfg = cfg.arc_prob(p);
    }
    cfg.max_failures = cli.max_failures;
    cfg.budget = cli.budget;
    let report = run_campaign(&cfg)?;
    let value = serde_json::to_value(&report).expect("reports serialize");
    emit(cli, report.summary(), &value)?;
    Ok(report.passed())
}

fn generate(cli: &Cli, args: &GenerateArgs) -> Outcome {
    let spec = GeneratorSpec { kind: args.kind.into(), n: args.n, arc_prob: args.p, seed: args.seed };
    let graphs = spec.generate()?;
    let stem = match args.kind {
        Kind::Cycle => format!("cycle-n{}", args.n),
        Kind::Random => format!("random-n{}-p{}-s{}", args.n, args.p, args.seed),
        Kind::RandomSc => format!("random-sc-n{}-p{}-s{}", args.n, args.p, args.seed),
        Kind::Exhaustive => format!("exhaustive-n{}", args.n),
    };
    let docs: Vec<(String, String)> = graphs
        .iter()
        .enumerate()
        .map(|(i, d)| {
            let name = if graphs.len() == 1 { stem.clone() } else { format!("{stem}-{i:05}") };
            let text = trikernel::textfmt::format_named_digraph(d, &name);
            (name, text)
        })
        .collect();
    match &cli.out {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| Failure::Io(format!("{}: {e}", dir.display())))?;
            for (name, text) in &docs {
                write_file(&dir.join(format!("{name}.txt")), text)?;
            }
            if cli.format == Format::Json {
                let files: Vec<_> = docs.iter().map(|(name, _)| format!("{name}.txt")).collect();
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({ "files": files })).expect("json values serialize")
                );
            }
        }
        None if cli.format == Format::Json => {
            let list: Vec<_> = docs
                .iter()
                .zip(&graphs)
                .map(|((name, _), d)| json!({ "name": name, "vertices": d.vertex_count(), "arcs": d.arcs() }))
                .collect();
            println!("{}", serde_json::to_string_pretty(&list).expect("json values serialize"));
        }
        None => {
            let texts: Vec<&str> = docs.iter().map(|(_, t)| t.as_str()).collect();
            print!("{}", texts.join("\n"));
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    let result = match &cli.command {
        Command::Analyze(a) => analyze(&cli, a),
        Command::Kernel(a) => kernel(&cli, a),
        Command::Closure(a) => closure(&cli, a),
        Command::Substitute(a) => substitute(&cli, a),
        Command::Verify(a) => verify(&cli, a),
        Command::Generate(a) => generate(&cli, a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) | Err(Failure::Property) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Resource(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
