use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use twistkit::corpus;
use twistkit::invariants::{
    certify_genus1_fibered, hopf_audit, split_rank_audit, thurston_lower_bound, trivial_link_audit, unknot_audit,
    vanishing_witness_search, AuditOutcome, Engine, FiberednessEvidence, InvariantReport, RelatorChoice,
};
use twistkit::reps::{
    enumerate_perm_reps, perm_family_with, perm_to_matrix, read_rep_file, Enumeration, SearchOptions,
};
use twistkit::{parse_pd, DiagramError, GroupPresentation, InvariantError, LinkDiagram, MatrixRep, RepError};

const DEFAULT_MAX_NODES: u64 = 1_000_000;

/// Twisted Alexander polynomials of links from planar diagram codes.
#[derive(Parser)]
#[command(name = "twistkit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute invariant reports for one or more representations.
    Invariants(InvariantsArgs),
    /// Enumerate homomorphisms of the link group to a symmetric group.
    SearchReps(SearchArgs),
    /// Audit a claim about the link over the trivial and permutation representations.
    Certify(CertifyArgs),
    /// Lower bound for the Thurston norm and evidence about fiberedness.
    NormBound(NormArgs),
    /// Inspect the bundled example links.
    Corpus {
        #[command(subcommand)]
        command: CorpusCommand,
        /// Corpus directory (defaults to the bundled one).
        #[arg(long, global = true)]
        dir: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum RepKind {
    Trivial,
}

#[derive(Args)]
struct InvariantsArgs {
    #[arg(long)]
    pd: PathBuf,
    /// Built-in representation.
    #[arg(long, value_enum, conflicts_with_all = ["rep_file", "perm_degree"])]
    rep: Option<RepKind>,
    /// Dimension of the trivial representation.
    #[arg(long, default_value_t = 1, requires = "rep")]
    k: usize,
    /// Representation file: `k <k>` then one row-major matrix per generator.
    #[arg(long, conflicts_with = "perm_degree")]
    rep_file: Option<PathBuf>,
    /// Every homomorphism to the symmetric group of this degree.
    #[arg(long)]
    perm_degree: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_MAX_NODES)]
    max_nodes: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    pd: PathBuf,
    #[arg(long)]
    degree: usize,
    #[arg(long)]
    transpositions_only: bool,
    #[arg(long)]
    surjective_only: bool,
    #[arg(long)]
    distinct_up_to_conjugacy: bool,
    #[arg(long)]
    limit: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_MAX_NODES)]
    max_nodes: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CertifyArgs {
    #[arg(long)]
    pd: PathBuf,
    /// unknot, trefoil-or-fig8, hopf, split:<s> or trivial-link
    #[arg(long)]
    claim: Claim,
    /// Largest symmetric group degree in the family.
    #[arg(long, default_value_t = 4)]
    budget: usize,
    #[arg(long, default_value_t = DEFAULT_MAX_NODES)]
    max_nodes: u64,
}

#[derive(Args)]
struct NormArgs {
    #[arg(long)]
    pd: PathBuf,
    #[arg(long, default_value_t = 4)]
    budget: usize,
    #[arg(long, default_value_t = DEFAULT_MAX_NODES)]
    max_nodes: u64,
}

#[derive(Subcommand)]
enum CorpusCommand {
    /// List entry names.
    List,
    /// Print an entry's diagram and metadata.
    Show {
        name: String,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, Debug)]
enum Claim {
    Unknot,
    TrefoilOrFig8,
    Hopf,
    Split(usize),
    TrivialLink,
}

impl std::str::FromStr for Claim {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "unknot" => Ok(Claim::Unknot),
            "trefoil-or-fig8" => Ok(Claim::TrefoilOrFig8),
            "hopf" => Ok(Claim::Hopf),
            "trivial-link" => Ok(Claim::TrivialLink),
            _ => s
                .strip_prefix("split:")
                .and_then(|n| n.parse().ok())
                .map(Claim::Split)
                .ok_or_else(|| format!("unknown claim `{s}`")),
        }
    }
}

impl std::fmt::Display for Claim {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Claim::Unknot => write!(f, "unknot"),
            Claim::TrefoilOrFig8 => write!(f, "trefoil-or-fig8"),
            Claim::Hopf => write!(f, "hopf"),
            Claim::Split(s) => write!(f, "split:{s}"),
            Claim::TrivialLink => write!(f, "trivial-link"),
        }
    }
}

/// A run that ends with a specific exit status.
struct Exit {
    code: u8,
    message: Option<String>,
}

impl Exit {
    const FAIL: u8 = 1;
    const INPUT: u8 = 2;
    const INVALID_REP: u8 = 3;
    const BUDGET: u8 = 4;
    const INTERNAL: u8 = 5;

    fn new(code: u8, message: impl Into<String>) -> Self {
        Exit { code, message: Some(message.into()) }
    }

    fn silent(code: u8) -> Self {
        Exit { code, message: None }
    }
}

impl From<InvariantError> for Exit {
    fn from(e: InvariantError) -> Self {
        let code = match e {
            InvariantError::Rep(_) => Exit::INVALID_REP,
            InvariantError::Precondition(_) => Exit::INPUT,
            _ => Exit::INTERNAL,
        };
        Exit::new(code, e.to_string())
    }
}

impl From<RepError> for Exit {
    fn from(e: RepError) -> Self {
        let code = if matches!(e, RepError::Format { .. }) { Exit::INPUT } else { Exit::INVALID_REP };
        Exit::new(code, e.to_string())
    }
}

type Outcome = Result<String, Exit>;

fn read(path: &Path) -> Result<String, Exit> {
    fs::read_to_string(path).map_err(|e| Exit::new(Exit::INPUT, format!("{}: {e}", path.display())))
}

fn load_diagram(path: &Path) -> Result<LinkDiagram, Exit> {
    parse_pd(&read(path)?).map_err(|e: DiagramError| Exit::new(Exit::INPUT, format!("{}: {e}", path.display())))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn render_report(r: &InvariantReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "rep: {} (k = {})", r.rep, r.k);
    let _ = writeln!(s, "  delta0: {}  (breadth {})", r.delta0, r.deg0);
    match r.deg1 {
        Some(d) => {
            let _ = writeln!(s, "  delta1: {}  (breadth {d})", r.delta1);
        }
        None => {
            let _ = writeln!(s, "  delta1: 0");
        }
    }
    let _ = writeln!(s, "  torsion: {}", r.torsion_delta);
    let _ = writeln!(s, "  rank: {}", r.rank);
    match &r.tau {
        Some(t) if t.integral => {
            let _ = writeln!(s, "  tau: {}", t.num);
        }
        Some(t) => {
            let _ = writeln!(s, "  tau: ({}) / ({})", t.num, t.den);
        }
        None => {
            let _ = writeln!(s, "  tau: undefined");
        }
    }
    if let Some(b) = &r.norm_lower_bound {
        let _ = writeln!(s, "  norm lower bound: {b}");
    }
    for (name, a) in &r.audits {
        let _ = writeln!(s, "  audit {name}: {:?}", a.verdict);
    }
    s
}

fn search_options(degree: usize, max_nodes: u64) -> Result<SearchOptions, Exit> {
    if degree == 0 {
        return Err(Exit::new(Exit::INPUT, "degree must be positive"));
    }
    let mut opts = SearchOptions::new(degree);
    opts.max_nodes = Some(max_nodes);
    Ok(opts)
}

fn cmd_invariants(args: &InvariantsArgs) -> Outcome {
    let p = load_diagram(&args.pd)?.wirtinger();
    let mut exhausted = false;
    let reps: Vec<MatrixRep> = if let Some(path) = &args.rep_file {
        vec![read_rep_file(&read(path)?, &p)?]
    } else if let Some(n) = args.perm_degree {
        let e = enumerate_perm_reps(&p, &search_options(n, args.max_nodes)?);
        exhausted = e.budget_exhausted;
        e.assignments.iter().map(|a| perm_to_matrix(&p, a)).collect::<Result<_, _>>()?
    } else {
        if args.k == 0 {
            return Err(Exit::new(Exit::INPUT, "--k must be positive"));
        }
        vec![MatrixRep::trivial(&p, args.k)]
    };
    let reports = Engine::new(&p, RelatorChoice::DropLast).reports(&reps)?;
    let out = if args.json {
        if args.perm_degree.is_some() {
            to_json(&reports)
        } else {
            to_json(&reports[0])
        }
    } else {
        reports.iter().map(render_report).collect()
    };
    if exhausted {
        print!("{out}");
        return Err(Exit::new(Exit::BUDGET, "search node budget exhausted; the report list is partial"));
    }
    Ok(out)
}

#[derive(Serialize)]
struct SearchOutput<'a> {
    degree: usize,
    total: usize,
    surjective: usize,
    truncated: bool,
    budget_exhausted: bool,
    nodes: u64,
    assignments: Vec<String>,
    #[serde(skip)]
    raw: &'a Enumeration,
}

fn cmd_search(args: &SearchArgs) -> Outcome {
    let p = load_diagram(&args.pd)?.wirtinger();
    let mut opts = search_options(args.degree, args.max_nodes)?;
    opts.transpositions_only = args.transpositions_only;
    opts.surjective_only = args.surjective_only;
    opts.distinct_up_to_conjugacy = args.distinct_up_to_conjugacy;
    opts.limit = args.limit;
    let e = enumerate_perm_reps(&p, &opts);
    let out = SearchOutput {
        degree: args.degree,
        total: e.assignments.len(),
        surjective: e.surjective_count,
        truncated: e.truncated,
        budget_exhausted: e.budget_exhausted,
        nodes: e.nodes,
        assignments: e.assignments.iter().map(|a| a.descriptor()).collect(),
        raw: &e,
    };
    let text = if args.json {
        to_json(&out)
    } else {
        let mut s = String::new();
        for (a, surj) in out.raw.assignments.iter().zip(&out.assignments) {
            let mark = if a.is_surjective() { "  (surjective)" } else { "" };
            let _ = writeln!(s, "{surj}{mark}");
        }
        let _ = writeln!(s, "total: {}", out.total);
        let _ = writeln!(s, "surjective: {}", out.surjective);
        let _ = writeln!(s, "truncated: {}", out.truncated);
        let _ = writeln!(s, "budget exhausted: {}", out.budget_exhausted);
        s
    };
    if e.budget_exhausted {
        print!("{text}");
        return Err(Exit::new(Exit::BUDGET, "search node budget exhausted; the listing is partial"));
    }
    Ok(text)
}

/// Trivial representation plus every permutation representation up to the
/// given degree.
fn family(p: &GroupPresentation, budget: usize, max_nodes: u64) -> (Vec<InvariantReport>, bool, Result<(), Exit>) {
    let fam = perm_family_with(p, budget, Some(max_nodes), false);
    match Engine::new(p, RelatorChoice::DropLast).reports(&fam.reps) {
        Ok(r) => (r, fam.budget_exhausted, Ok(())),
        Err(e) => (Vec::new(), fam.budget_exhausted, Err(e.into())),
    }
}

#[derive(Serialize)]
struct CertifyOutput {
    claim: String,
    budget: usize,
    /// False when the search budget ran out and the family is partial.
    family_complete: bool,
    annotation: String,
    #[serde(flatten)]
    outcome: AuditOutcome,
}

fn cmd_certify(args: &CertifyArgs) -> Outcome {
    let d = load_diagram(&args.pd)?;
    let m = d.component_count();
    let p = d.wirtinger();
    let (reports, exhausted, status) = family(&p, args.budget, args.max_nodes);
    status?;
    let outcome = match args.claim {
        Claim::Unknot => unknot_audit(m, &reports),
        Claim::TrefoilOrFig8 => certify_genus1_fibered(m, &reports),
        Claim::Hopf => hopf_audit(m, &reports),
        Claim::Split(s) => split_rank_audit(m, &reports, s),
        Claim::TrivialLink => trivial_link_audit(m, &reports),
    }?;
    let passed = outcome.passed();
    let out = CertifyOutput {
        claim: args.claim.to_string(),
        budget: args.budget,
        family_complete: !exhausted,
        annotation: format!("over family of size {}", reports.len()),
        outcome,
    };
    let text = to_json(&out);
    if exhausted {
        print!("{text}");
        return Err(Exit::new(Exit::BUDGET, "search node budget exhausted; verdict is over a partial family"));
    }
    if !passed {
        print!("{text}");
        return Err(Exit::silent(Exit::FAIL));
    }
    Ok(text)
}

#[derive(Serialize)]
struct NormOutput {
    budget: usize,
    family_size: usize,
    family_complete: bool,
    /// Absent when every polynomial in the family vanishes.
    #[serde(skip_serializing_if = "Option::is_none")]
    norm_lower_bound: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    attained_by: Option<String>,
    fiberedness: FiberednessEvidence,
}

fn cmd_norm(args: &NormArgs) -> Outcome {
    let p = load_diagram(&args.pd)?.wirtinger();
    let (reports, exhausted, status) = family(&p, args.budget, args.max_nodes);
    status?;
    let bound = thurston_lower_bound(&reports).ok();
    let attained_by = bound
        .as_ref()
        .and_then(|b| reports.iter().find(|r| r.norm_lower_bound.as_ref() == Some(b)))
        .map(|r| r.rep.clone());
    let out = NormOutput {
        budget: args.budget,
        family_size: reports.len(),
        family_complete: !exhausted,
        norm_lower_bound: bound.map(|b| b.to_string()),
        attained_by,
        fiberedness: vanishing_witness_search(&reports),
    };
    let text = to_json(&out);
    if exhausted {
        print!("{text}");
        return Err(Exit::new(Exit::BUDGET, "search node budget exhausted; bound is over a partial family"));
    }
    Ok(text)
}

#[derive(Serialize)]
struct CorpusShow<'a> {
    name: &'a str,
    pd: &'a str,
    #[serde(flatten)]
    meta: &'a corpus::EntryMeta,
}

fn cmd_corpus(command: &CorpusCommand, dir: Option<&Path>) -> Outcome {
    let dir = dir.map_or_else(corpus::default_dir, Path::to_path_buf);
    let input = |e: corpus::CorpusError| Exit::new(Exit::INPUT, e.to_string());
    match command {
        CorpusCommand::List => Ok(corpus::list(&dir).map_err(input)?.iter().map(|n| format!("{n}\n")).collect()),
        CorpusCommand::Show { name, json } => {
            let e = corpus::load(&dir, name).map_err(input)?;
            if *json {
                return Ok(to_json(&CorpusShow { name: &e.name, pd: &e.pd_text, meta: &e.meta }));
            }
            let mut s = format!("{}\n", e.name);
            if let Some(desc) = &e.meta.description {
                let _ = writeln!(s, "  {desc}");
            }
            let _ = writeln!(s, "  components: {}", e.meta.components);
            if let Some(g) = &e.meta.genus {
                let _ = writeln!(s, "  genus: {} [{}]", g.value, g.provenance);
            }
            if let Some(f) = &e.meta.fibered {
                let _ = writeln!(s, "  fibered: {} [{}]", f.value, f.provenance);
            }
            if let Some(a) = &e.meta.alexander {
                let _ = writeln!(s, "  alexander: {} [{}]", a.value, a.provenance);
            }
            s.push_str(&e.diagram.to_string());
            Ok(s)
        }
    }
}

fn configure_threads() -> Result<(), Exit> {
    let Ok(value) = std::env::var("TWISTKIT_THREADS") else { return Ok(()) };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Exit::new(Exit::INPUT, format!("TWISTKIT_THREADS must be a positive integer, got `{value}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Exit::new(Exit::INTERNAL, e.to_string()))
}

fn run(cli: &Cli) -> Outcome {
    configure_threads()?;
    match &cli.command {
        Command::Invariants(a) => cmd_invariants(a),
        Command::SearchReps(a) => cmd_search(a),
        Command::Certify(a) => cmd_certify(a),
        Command::NormBound(a) => cmd_norm(a),
        Command::Corpus { command, dir } => cmd_corpus(command, dir.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(exit) => {
            if let Some(msg) = exit.message {
                eprintln!("twistkit: {msg}");
            }
            ExitCode::from(exit.code)
        }
    }
}
