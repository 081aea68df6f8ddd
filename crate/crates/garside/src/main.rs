use std::fmt;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use garside::conjugacy::{self, CyclingError, SummitBudget, SummitError};
use garside::{
    enumerate_class, find_standard_reduction, is_conjugate, make_element, matrix_text,
    parse_family_braid, parse_matrix_text, parse_signed_word, predicted_size, verify_suite, BitRow,
    Braid, ConjugacyGraph, FamilyElement, SearchBudget, SearchError,
};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "garside",
    version,
    about = "Garside normal forms, conjugacy invariants, and rigid-set enumeration for braid groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Left canonical form of a braid word.
    Nf(WordArgs),
    /// Rigidity of a braid (wrap-around pair left-weighted).
    Rigid(WordArgs),
    /// One cycling step: conjugate the first canonical factor to the tail.
    Cycle(WordArgs),
    /// One decycling step: conjugate the last canonical factor to the head.
    Decycle(WordArgs),
    /// Reduce into the super summit set by iterated cycling and decycling.
    Summit(SummitArgs),
    /// Decide conjugacy of two braids via rigid representatives.
    Conjugate(ConjugateArgs),
    /// Find all standard curve families the braid permutes, if any.
    CheckReduction(WordArgs),
    /// Binary-matrix braid family.
    #[command(subcommand)]
    Family(FamilyCommand),
    /// Enumerate the rigid conjugacy set of a braid.
    Rset(RsetArgs),
    /// Run the verification suite over the given sizes.
    Verify(VerifyArgs),
}

#[derive(Subcommand)]
enum FamilyCommand {
    /// Build the family braid of a 0/1 matrix and report its invariants.
    Build(MatrixArgs),
    /// Closed-form rigid-set graph of a constrained-class matrix.
    Rset(FamilyRsetArgs),
}

#[derive(Args)]
struct WordArgs {
    /// Number of strands.
    #[arg(long)]
    n: usize,
    /// Braid word: whitespace-separated signed integers, i for sigma_i and
    /// -i for its inverse, quoted as one argument.
    #[arg(allow_hyphen_values = true, value_name = "WORD")]
    word: String,
    /// Emit JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SummitArgs {
    #[command(flatten)]
    word: WordArgs,
    /// Cap on cycling/decycling steps.
    #[arg(long, value_name = "N", default_value_t = 100_000)]
    budget_steps: usize,
}

#[derive(Args)]
struct ConjugateArgs {
    /// Number of strands.
    #[arg(long)]
    n: usize,
    /// First braid word.
    #[arg(allow_hyphen_values = true, value_name = "WORD")]
    x: String,
    /// Second braid word.
    #[arg(allow_hyphen_values = true, value_name = "WORD")]
    y: String,
    #[command(flatten)]
    budget: BudgetArgs,
    /// Emit JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct MatrixArgs {
    /// Matrix source: a file path, or inline rows of 0/1 digits separated
    /// by ';' or ','. An optional '|' marks the odd-strand insertion slot.
    #[arg(long, value_name = "FILE|ROWS")]
    matrix: String,
    /// Insertion slot for the vertical strand (odd strand count). Must
    /// agree with a '|' marker when both are given.
    #[arg(long)]
    b: Option<usize>,
    /// Emit JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct FamilyRsetArgs {
    #[command(flatten)]
    matrix: MatrixArgs,
    /// Write the graph in DOT format to this path.
    #[arg(long, value_name = "PATH")]
    dot: Option<PathBuf>,
}

#[derive(Args)]
struct RsetArgs {
    #[command(flatten)]
    word: WordArgs,
    /// Enumerate by exhaustive minimal-conjugator search instead of the
    /// family closed form. Guarded to n <= 11; see --force.
    #[arg(long)]
    oracle: bool,
    /// Run the oracle past the n <= 11 guard.
    #[arg(long)]
    force: bool,
    /// Write the graph in DOT format to this path.
    #[arg(long, value_name = "PATH")]
    dot: Option<PathBuf>,
    #[command(flatten)]
    budget: BudgetArgs,
}

#[derive(Args)]
struct BudgetArgs {
    /// Cap on distinct prefix states per minimal-conjugator search.
    #[arg(long, value_name = "N", default_value_t = SearchBudget::default().max_prefix_states)]
    budget_states: usize,
    /// Cap on nodes of an enumerated conjugacy graph.
    #[arg(long, value_name = "N", default_value_t = SearchBudget::default().max_nodes)]
    budget_nodes: usize,
}

#[derive(Args)]
struct VerifyArgs {
    /// Strand counts, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "10,11,14")]
    n: Vec<usize>,
    /// Row counts, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "2,3")]
    k: Vec<usize>,
    /// Sample size for the randomized checks.
    #[arg(long, default_value_t = 60)]
    samples: usize,
    /// RNG seed; equal seeds give byte-identical reports.
    #[arg(long, default_value_t = 2026)]
    seed: u64,
    /// Emit the report as JSON.
    #[arg(long)]
    json: bool,
}

impl BudgetArgs {
    fn to_budget(&self) -> SearchBudget {
        SearchBudget { max_prefix_states: self.budget_states, max_nodes: self.budget_nodes }
    }
}

enum CliError {
    Usage(String),
    Verification(String),
    Budget(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Budget(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Verification(m) | CliError::Budget(m) => {
                f.write_str(m)
            }
        }
    }
}

fn usage(err: impl fmt::Display) -> CliError {
    CliError::Usage(err.to_string())
}

fn search_error(err: SearchError) -> CliError {
    match err {
        SearchError::BudgetExceeded { .. } => CliError::Budget(err.to_string()),
        _ => CliError::Usage(err.to_string()),
    }
}

fn parse_braid(n: usize, text: &str) -> Result<Braid, CliError> {
    if n < 2 {
        return Err(CliError::Usage(format!("need at least 2 strands, got {n}")));
    }
    let word = parse_signed_word(text).map_err(usage)?;
    Braid::normal_form(n, &word).map_err(usage)
}

fn word_text(word: &[i64]) -> String {
    if word.is_empty() {
        return "(empty)".into();
    }
    word.iter().map(i64::to_string).collect::<Vec<_>>().join(" ")
}

fn print_braid(label: &str, x: &Braid) {
    println!("{label}: {x}");
    println!("  inf {}  canonical length {}  sup {}", x.inf(), x.len(), x.inf() + x.len() as i64);
    println!("  word: {}", word_text(&x.word()));
}

fn load_matrix(args: &MatrixArgs) -> Result<(Vec<BitRow>, Option<usize>), CliError> {
    let text = match fs::metadata(&args.matrix) {
        Ok(meta) if meta.is_file() => fs::read_to_string(&args.matrix)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", args.matrix)))?,
        _ => args.matrix.replace([';', ','], "\n"),
    };
    let (rows, marked) = parse_matrix_text(&text).map_err(usage)?;
    let slot = match (marked, args.b) {
        (Some(m), Some(b)) if m != b => {
            return Err(CliError::Usage(format!(
                "--b {b} disagrees with the | marker at {m}"
            )));
        }
        (Some(m), _) => Some(m),
        (None, b) => b,
    };
    Ok((rows, slot))
}

fn family_element(args: &MatrixArgs) -> Result<FamilyElement, CliError> {
    let (rows, slot) = load_matrix(args)?;
    make_element(rows, slot, false).map_err(usage)
}

fn write_graph(
    graph: &ConjugacyGraph,
    element: Option<&FamilyElement>,
    dot: Option<&PathBuf>,
    json: bool,
) -> Result<(), CliError> {
    if let Some(path) = dot {
        fs::write(path, graph.to_dot())
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
    }
    if json {
        let mut value = graph.to_json();
        if let Some(e) = element {
            value["predicted_size"] = json!(predicted_size(e.k(), e.p()));
            value["matrix"] = json!(matrix_text(e.rows(), e.slot()).trim());
        }
        println!("{value}");
        return Ok(());
    }
    println!("nodes: {}  edges: {}", graph.nodes().len(), graph.edges().len());
    if let Some(e) = element {
        let note = if e.n() < 14 { "  (below n = 14 the flip side may overlap)" } else { "" };
        println!("predicted size k*2^(p-3): {}{note}", predicted_size(e.k(), e.p()));
    }
    for (i, node) in graph.nodes().iter().enumerate() {
        println!("  [{i}] {node}");
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Nf(args) => {
            let x = parse_braid(args.n, &args.word)?;
            if args.json {
                println!("{}", x.to_json());
            } else {
                print_braid("normal form", &x);
            }
        }
        Command::Rigid(args) => {
            let x = parse_braid(args.n, &args.word)?;
            if args.json {
                println!("{}", json!({ "rigid": x.is_rigid() }));
            } else {
                println!("rigid: {}", x.is_rigid());
            }
        }
        Command::Cycle(args) => {
            let x = parse_braid(args.n, &args.word)?;
            let (y, c) = conjugacy::cycling(&x).map_err(|e: CyclingError| usage(e))?;
            if args.json {
                println!("{}", json!({ "result": y.to_json(), "conjugator": c.canonical_word() }));
            } else {
                print_braid("cycling", &y);
                println!("  conjugator: {}", word_text(&c.canonical_word().iter().map(|&l| l as i64).collect::<Vec<_>>()));
            }
        }
        Command::Decycle(args) => {
            let x = parse_braid(args.n, &args.word)?;
            let (y, c) = conjugacy::decycling(&x).map_err(|e: CyclingError| usage(e))?;
            if args.json {
                println!("{}", json!({ "result": y.to_json(), "conjugator": c.to_json() }));
            } else {
                print_braid("decycling", &y);
                println!("  conjugator word: {}", word_text(&c.word()));
            }
        }
        Command::Summit(args) => {
            let x = parse_braid(args.word.n, &args.word.word)?;
            let budget = SummitBudget { max_steps: args.budget_steps };
            let cert = conjugacy::to_super_summit(&x, budget).map_err(|e| match e {
                SummitError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            })?;
            if args.word.json {
                println!(
                    "{}",
                    json!({
                        "representative": cert.representative.to_json(),
                        "conjugator": cert.conjugator.to_json(),
                        "inf_s": cert.inf(),
                        "sup_s": cert.sup(),
                    })
                );
            } else {
                print_braid("summit representative", &cert.representative);
                println!("  inf_s {}  sup_s {}", cert.inf(), cert.sup());
                println!("  conjugator word: {}", word_text(&cert.conjugator.word()));
            }
        }
        Command::Conjugate(args) => {
            let x = parse_braid(args.n, &args.x)?;
            let y = parse_braid(args.n, &args.y)?;
            let budget = args.budget.to_budget();
            let (answer, witness) = is_conjugate(&x, &y, &budget).map_err(search_error)?;
            if args.json {
                println!(
                    "{}",
                    json!({
                        "conjugate": answer,
                        "witness": witness.as_ref().map(Braid::to_json),
                    })
                );
            } else {
                println!("conjugate: {answer}");
                if let Some(g) = witness {
                    println!("  witness word: {}", word_text(&g.word()));
                }
            }
        }
        Command::CheckReduction(args) => {
            let x = parse_braid(args.n, &args.word)?;
            let curves = find_standard_reduction(&x);
            if args.json {
                let items: Vec<_> = curves
                    .iter()
                    .map(|pc| {
                        json!({
                            "curve": [pc.curve.lo, pc.curve.hi],
                            "orbit": pc.orbit.iter().map(|c| [c.lo, c.hi]).collect::<Vec<_>>(),
                            "compatible": pc.compatible,
                        })
                    })
                    .collect();
                println!("{}", json!({ "periodic_curves": items }));
            } else if curves.is_empty() {
                println!("no standard reduction system: no periodic standard curves");
            } else {
                println!("periodic standard curves: {}", curves.len());
                for pc in &curves {
                    let orbit: Vec<String> =
                        pc.orbit.iter().map(|c| format!("{}..{}", c.lo, c.hi)).collect();
                    println!(
                        "  {}..{}  orbit [{}]  compatible: {}",
                        pc.curve.lo,
                        pc.curve.hi,
                        orbit.join(", "),
                        pc.compatible
                    );
                }
            }
        }
        Command::Family(FamilyCommand::Build(args)) => {
            let e = family_element(&args)?;
            let x = e.alpha();
            if args.json {
                let mut value = e.to_json();
                value["braid"] = x.to_json();
                value["rigid"] = json!(x.is_rigid());
                println!("{value}");
            } else {
                print!("{}", matrix_text(e.rows(), e.slot()));
                println!(
                    "n {}  k {}  p {}  constrained class: {}",
                    e.n(),
                    e.k(),
                    e.p(),
                    e.is_m0()
                );
                print_braid("alpha(A)", &x);
                println!("  rigid: {}", x.is_rigid());
            }
        }
        Command::Family(FamilyCommand::Rset(args)) => {
            let e = family_element(&args.matrix)?;
            let graph = garside::family_rigid_graph(&e).map_err(usage)?;
            write_graph(&graph, Some(&e), args.dot.as_ref(), args.matrix.json)?;
        }
        Command::Rset(args) => {
            let x = parse_braid(args.word.n, &args.word.word)?;
            if args.oracle {
                if x.n() > 11 && !args.force {
                    return Err(CliError::Usage(format!(
                        "oracle enumeration is guarded to n <= 11 (got n = {}); pass --force to override",
                        x.n()
                    )));
                }
                let budget = args.budget.to_budget();
                let cert = conjugacy::to_super_summit(&x, SummitBudget::default())
                    .map_err(|e| CliError::Budget(e.to_string()))?;
                let (rigid, _) = conjugacy::rigid_in_cycling_orbit(&cert.representative)
                    .ok_or_else(|| {
                        CliError::Usage("no rigid representative in the cycling orbit; the rigid set is empty or unsupported".into())
                    })?;
                let graph = enumerate_class(&rigid, &budget).map_err(search_error)?;
                write_graph(&graph, None, args.dot.as_ref(), args.word.json)?;
            } else {
                let e = parse_family_braid(&x).ok_or_else(|| {
                    CliError::Usage(
                        "not a family braid; use --oracle for generic enumeration".into(),
                    )
                })?;
                let graph = garside::family_rigid_graph(&e).map_err(usage)?;
                write_graph(&graph, Some(&e), args.dot.as_ref(), args.word.json)?;
            }
        }
        Command::Verify(args) => {
            if args.n.is_empty() || args.k.is_empty() {
                return Err(CliError::Usage("--n and --k need at least one value".into()));
            }
            let report = verify_suite(&args.n, &args.k, args.samples, args.seed);
            if args.json {
                println!("{}", report.to_json());
            } else {
                print!("{report}");
            }
            if !report.all_passed() {
                let (_, fail, _) = report.totals();
                return Err(CliError::Verification(format!("{fail} check(s) failed")));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    // Die quietly when the output pipe closes (e.g. under `head`).
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.code())
        }
    }
}
