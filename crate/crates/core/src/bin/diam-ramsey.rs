use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use diam_ramsey::checker::{exists_solution, ProblemSpec, WitnessRecord};
use diam_ramsey::coloring::Coloring;
use diam_ramsey::constructions::{verify_avoiding, LowerBoundFamily, Variant};
use diam_ramsey::formulas::{known_value, Family};
use diam_ramsey::lemma::{self, check_lemma22, classify_lemma21, find_extremal_b1, Which};
use diam_ramsey::report::{Envelope, SearchReport, TableRow};
use diam_ramsey::search::{compute_f, CertificateMode, SearchConfig, DEFAULT_SPLIT_DEPTH};
use diam_ramsey::Error;

const EXIT_CONTRADICTION: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INCONCLUSIVE: u8 = 3;

#[derive(Parser)]
#[command(name = "diam-ramsey", version, about = "Nondecreasing-diameter Ramsey numbers on [1, N]")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute f(m1,...,mt;r) by exhaustive search.
    Compute(ComputeArgs),
    /// Print the explicit avoiding coloring for p(m,m,m;2).
    Construct(ConstructArgs),
    /// Check whether a coloring avoids every solution.
    Verify(VerifyArgs),
    /// Validate the structural lemmas on 2-colorings of [1, 3m-2].
    CheckLemma(CheckLemmaArgs),
    /// Print the canonical solution chain of a coloring, or "none".
    Witness(WitnessArgs),
    /// Compare closed forms with computed values.
    Table(TableArgs),
}

#[derive(Args)]
struct SpecArgs {
    /// Comma-separated set sizes, e.g. 2,2,2.
    #[arg(long, value_delimiter = ',', required = true)]
    sizes: Vec<usize>,
    /// Number of colors r.
    #[arg(long, default_value_t = 2)]
    colors: u8,
    /// Require strictly increasing diameters.
    #[arg(long)]
    strict: bool,
}

impl SpecArgs {
    fn spec(&self) -> Result<ProblemSpec, Error> {
        ProblemSpec::new(self.sizes.clone(), self.colors, self.strict)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum CertArg {
    None,
    One,
    All,
}

#[derive(Args)]
struct ComputeArgs {
    #[command(flatten)]
    spec: SpecArgs,
    /// Longest length explored (default: closed form + 2).
    #[arg(long)]
    cap: Option<usize>,
    #[arg(long, value_enum, default_value_t = CertArg::One)]
    certificates: CertArg,
    /// Worker threads (default: DIAM_RAMSEY_WORKERS or all cores).
    #[arg(long)]
    workers: Option<usize>,
    /// Visit every coloring instead of one per color permutation.
    #[arg(long)]
    no_symmetry: bool,
    #[arg(long, default_value_t = DEFAULT_SPLIT_DEPTH)]
    split_depth: usize,
    /// Abort after this many search nodes.
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long)]
    m: usize,
    /// Use the general string even at m = 2 or m = 5.
    #[arg(long)]
    general: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
#[group(id = "input", required = true, multiple = false)]
struct ColoringInput {
    /// Coloring in run-length notation, e.g. 0^210^3 or 0^{12}.
    #[arg(long, group = "input")]
    string: Option<String>,
    /// File holding a run-length string.
    #[arg(long, group = "input")]
    file: Option<PathBuf>,
}

impl ColoringInput {
    fn read(&self, num_colors: u8) -> Result<Coloring, String> {
        let text = match (&self.string, &self.file) {
            (Some(s), _) => s.clone(),
            (None, Some(path)) => std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?,
            (None, None) => return Err("one of --string or --file is required".into()),
        };
        Coloring::parse(text.trim(), num_colors).map_err(|e| e.to_string())
    }
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    input: ColoringInput,
    #[command(flatten)]
    spec: SpecArgs,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct WitnessArgs {
    #[command(flatten)]
    input: ColoringInput,
    #[command(flatten)]
    spec: SpecArgs,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum WhichArg {
    #[value(name = "2.1")]
    L21,
    #[value(name = "2.2")]
    L22,
}

#[derive(Args)]
struct CheckLemmaArgs {
    #[arg(long, value_enum)]
    which: WhichArg,
    #[arg(long)]
    m: usize,
    /// Sweep every 2-coloring of [1, 3m-2].
    #[arg(long, conflicts_with = "string", required_unless_present = "string")]
    exhaustive: bool,
    /// Check a single coloring of length 3m-2.
    #[arg(long)]
    string: Option<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Mm2,
    Mm3,
    Mm4,
    Mmm2,
}

#[derive(Args)]
struct TableArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long)]
    m_max: usize,
    #[arg(long)]
    workers: Option<usize>,
    /// Per-row node budget.
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long)]
    json: bool,
}

fn workers(flag: Option<usize>) -> Result<usize, String> {
    if let Some(w) = flag {
        return if w == 0 { Err("--workers must be positive".into()) } else { Ok(w) };
    }
    if let Ok(v) = std::env::var("DIAM_RAMSEY_WORKERS") {
        return match v.trim().parse::<usize>() {
            Ok(w) if w > 0 => Ok(w),
            _ => Err(format!("DIAM_RAMSEY_WORKERS must be a positive integer, got {v:?}")),
        };
    }
    Ok(std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn print_json<T: Serialize>(env: &Envelope<T>) {
    println!("{}", serde_json::to_string_pretty(env).expect("serializable"));
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_USAGE)
}

fn fail(err: Error) -> ExitCode {
    eprintln!("error: {err}");
    ExitCode::from(match err {
        Error::FormulaContradicted { .. } | Error::LemmaViolation { .. } => EXIT_CONTRADICTION,
        Error::BudgetExceeded { .. } => EXIT_INCONCLUSIVE,
        _ => EXIT_USAGE,
    })
}

fn run_compute(args: &ComputeArgs) -> ExitCode {
    let spec = match args.spec.spec() {
        Ok(s) => s,
        Err(e) => return usage(e),
    };
    let worker_count = match workers(args.workers) {
        Ok(w) => w,
        Err(e) => return usage(e),
    };
    let config = SearchConfig {
        n_cap: args.cap,
        mode: match args.certificates {
            CertArg::None => CertificateMode::ValueOnly,
            CertArg::One => CertificateMode::OneCertificate,
            CertArg::All => CertificateMode::AllCertificates,
        },
        symmetry_reduction: !args.no_symmetry,
        worker_count,
        split_depth: args.split_depth,
        node_budget: args.budget,
    };
    let res = match compute_f(&spec, &config) {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    let report = SearchReport::from_result(&res);
    let code = if report.inconclusive.is_some() { EXIT_INCONCLUSIVE } else { 0 };
    if args.json {
        print_json(&Envelope::new("compute", Some(spec), report, Some(res.stats)));
    } else {
        println!("spec: {spec}");
        match (report.f_value, &report.inconclusive) {
            (Some(f), _) => println!("f={f}"),
            (None, Some(inc)) => println!("inconclusive: f > {}", inc.n_cap),
            _ => unreachable!(),
        }
        if let Some(k) = report.known_value {
            println!("closed form: {k}");
        }
        if !report.certificates.is_empty() {
            println!("certificates ({}):", report.certificates.len());
            for (c, orbit) in report.certificates.iter().zip(&report.orbit_sizes) {
                println!("  {c}  (orbit {orbit})");
            }
        }
        println!(
            "nodes: {}  workers: {}  subtrees: {}  time: {:.3}s",
            res.stats.nodes_expanded, res.stats.worker_count, res.stats.subtrees, res.stats.wall_time_secs
        );
    }
    ExitCode::from(code)
}

#[derive(Serialize)]
struct ConstructResult {
    m: usize,
    variant: Variant,
    length: usize,
    coloring: String,
}

fn run_construct(args: &ConstructArgs) -> ExitCode {
    let family = if args.general {
        LowerBoundFamily::new(args.m, Variant::General)
    } else {
        LowerBoundFamily::for_m(args.m)
    };
    let coloring = match family.and_then(|f| f.coloring().map(|c| (f, c))) {
        Ok(fc) => fc,
        Err(e) => return usage(e),
    };
    let (family, coloring) = coloring;
    if args.json {
        let spec = ProblemSpec::uniform(args.m, 3, 2).ok();
        let result = ConstructResult {
            m: args.m,
            variant: family.variant(),
            length: coloring.len(),
            coloring: coloring.to_run_string(),
        };
        print_json(&Envelope::new("construct", spec, result, None));
    } else {
        println!("{}", coloring.to_run_string());
    }
    ExitCode::SUCCESS
}

fn run_verify(args: &VerifyArgs) -> ExitCode {
    let spec = match args.spec.spec() {
        Ok(s) => s,
        Err(e) => return usage(e),
    };
    let coloring = match args.input.read(spec.num_colors()) {
        Ok(c) => c,
        Err(e) => return usage(e),
    };
    let report = verify_avoiding(&coloring, &spec);
    if args.json {
        print_json(&Envelope::new("verify", Some(spec), report, None));
    } else {
        println!("spec: {spec}  length: {}", report.length);
        if report.avoids {
            println!("avoids: true");
        } else {
            println!("avoids: false");
            if let Some(w) = &report.witness {
                println!("witness: {}", format_witness(w));
            }
        }
    }
    ExitCode::SUCCESS
}

fn format_witness(w: &WitnessRecord) -> String {
    w.sets
        .iter()
        .map(|s| format!("{{{}}}", s.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
        .collect::<Vec<_>>()
        .join(",")
}

fn run_witness(args: &WitnessArgs) -> ExitCode {
    let spec = match args.spec.spec() {
        Ok(s) => s,
        Err(e) => return usage(e),
    };
    let coloring = match args.input.read(spec.num_colors()) {
        Ok(c) => c,
        Err(e) => return usage(e),
    };
    let witness = exists_solution(&coloring, &spec).map(|w| w.to_record());
    if args.json {
        print_json(&Envelope::new("witness", Some(spec), witness, None));
    } else {
        match witness {
            Some(w) => {
                println!("{}", format_witness(&w));
                let join = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
                let colors: Vec<usize> = w.colors.iter().map(|&c| c as usize).collect();
                println!("colors: {}  diams: {}", join(&colors), join(&w.diams));
            }
            None => println!("none"),
        }
    }
    ExitCode::SUCCESS
}

#[derive(Serialize)]
#[serde(untagged)]
enum LemmaResult {
    Sweep(lemma::SweepReport),
    Single(serde_json::Value),
}

fn run_check_lemma(args: &CheckLemmaArgs) -> ExitCode {
    let which = match args.which {
        WhichArg::L21 => Which::Lemma21,
        WhichArg::L22 => Which::Lemma22,
    };
    let label = match which {
        Which::Lemma21 => "2.1",
        Which::Lemma22 => "2.2",
    };
    if let Some(s) = &args.string {
        let c = match Coloring::parse(s, 2) {
            Ok(c) => c,
            Err(e) => return usage(e),
        };
        let outcome = match which {
            Which::Lemma21 => find_extremal_b1(&c, args.m).and_then(|ext| match ext {
                None => Ok(serde_json::json!({ "extremal": null })),
                Some(ext) => classify_lemma21(&c, &ext)
                    .map(|case| serde_json::json!({ "extremal": ext, "case": case })),
            }),
            Which::Lemma22 => check_lemma22(&c, args.m).map(|f| serde_json::to_value(f).expect("serializable")),
        };
        return match outcome {
            Ok(value) => {
                if args.json {
                    print_json(&Envelope::new("check-lemma", None, LemmaResult::Single(value), None));
                } else {
                    println!("lemma {label}, m = {}, coloring {c}: ok", args.m);
                    println!("{}", serde_json::to_string_pretty(&value).expect("serializable"));
                }
                ExitCode::SUCCESS
            }
            Err(e) => fail(e),
        };
    }
    let report = match lemma::sweep(args.m, which) {
        Ok(r) => r,
        Err(e) => return usage(e),
    };
    let passed = report.passed();
    if args.json {
        print_json(&Envelope::new("check-lemma", None, LemmaResult::Sweep(report.clone()), None));
    } else {
        println!("lemma {label}, m = {}: {} colorings of [1, {}]", args.m, report.instances, 3 * args.m - 2);
        println!("  no big set: {}", report.no_big_set);
        for (k, tag) in ["i", "ii", "iii"].iter().enumerate() {
            println!("  first case ({tag}): {}", report.first_case[k]);
        }
        for (mask, count) in report.mask_counts.iter().enumerate().filter(|(_, &n)| n > 0) {
            let tags: Vec<&str> = ["i", "ii", "iii"]
                .iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, t)| *t)
                .collect();
            println!("  cases {{{}}}: {count}", tags.join(","));
        }
        println!("  violations: {}", report.violations.len());
        for v in report.violations.iter().take(10) {
            println!("    {v}");
        }
        println!("{}", if passed { "PASS" } else { "FAIL" });
    }
    if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_CONTRADICTION)
    }
}

fn run_table(args: &TableArgs) -> ExitCode {
    let family = match args.family {
        FamilyArg::Mm2 => Family::Mm2,
        FamilyArg::Mm3 => Family::Mm3,
        FamilyArg::Mm4 => Family::Mm4,
        FamilyArg::Mmm2 => Family::Mmm2,
    };
    let worker_count = match workers(args.workers) {
        Ok(w) => w,
        Err(e) => return usage(e),
    };
    if args.m_max < 2 {
        return usage("--m-max must be at least 2");
    }
    let mut rows = Vec::new();
    let mut code = 0u8;
    for m in 2..=args.m_max {
        let spec = family.spec(m).expect("valid family spec");
        let closed_form = family.value(m).expect("m >= 2");
        debug_assert_eq!(known_value(&spec), Some(closed_form));
        let config = SearchConfig {
            mode: CertificateMode::ValueOnly,
            worker_count,
            node_budget: args.budget,
            ..SearchConfig::default()
        };
        let (computed, note) = match compute_f(&spec, &config) {
            Ok(res) => (res.f_value(), None),
            Err(Error::BudgetExceeded { .. }) => {
                code = code.max(EXIT_INCONCLUSIVE);
                (None, Some("budget exceeded".to_string()))
            }
            Err(e @ Error::FormulaContradicted { .. }) => {
                code = EXIT_CONTRADICTION;
                (None, Some(e.to_string()))
            }
            Err(e) => return fail(e),
        };
        let agrees = computed.map(|f| f == closed_form);
        if !args.json {
            let shown = computed.map_or_else(|| "-".to_string(), |f| f.to_string());
            let status = match agrees {
                Some(true) => "ok",
                Some(false) => "MISMATCH",
                None => note.as_deref().unwrap_or("-"),
            };
            println!("{:<4} {:<14} closed={:<6} computed={:<6} {status}", m, spec.to_string(), closed_form, shown);
        }
        rows.push(TableRow {
            m,
            spec,
            closed_form,
            computed,
            note,
            agrees,
        });
    }
    if args.json {
        print_json(&Envelope::new(&format!("table:{}", family.name()), None, rows, None));
    }
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Compute(a) => run_compute(a),
        Command::Construct(a) => run_construct(a),
        Command::Verify(a) => run_verify(a),
        Command::CheckLemma(a) => run_check_lemma(a),
        Command::Witness(a) => run_witness(a),
        Command::Table(a) => run_table(a),
    }
}
