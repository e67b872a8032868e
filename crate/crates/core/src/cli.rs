//! Command-line front end.
//!
//! Every command produces a [`Report`]; `--json` prints it as one JSON
//! object, otherwise as text. Exit codes: 0 ok, 1 fail, 2 error.

use std::collections::BTreeSet;
use std::fs;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::counting::{self, Count, CountingInstance};
use crate::error::{Error, Result};
use crate::formula::{parse, Formula};
use crate::interp::Interpretation;
use crate::lexrep::{self, LexRepresentation};
use crate::orderanalysis::{catalog, Analyzer, Limits};
use crate::qelim::{self, Budget, DEFAULT_MAX_NODES};
use crate::semilinear::{Decomposition, DEFAULT_MAX_PIECES};

/// Environment variable overriding the default node budget.
pub const BUDGET_ENV: &str = "PRESBURGER_BUDGET_NODES";

#[derive(Debug, Parser)]
#[command(name = "presburger", version, about = "Presburger arithmetic and interpreted linear orders")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Print one JSON object instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Node budget for quantifier elimination.
    #[arg(long, global = true, value_name = "N")]
    pub budget_nodes: Option<usize>,
    /// Piece budget for decompositions.
    #[arg(long, global = true, value_name = "N")]
    pub budget_pieces: Option<usize>,
    /// Side of the box `[0, B]^m` used for listings.
    #[arg(long = "box", global = true, value_name = "B")]
    pub box_bound: Option<u64>,
    /// Prefix length for lex-representation checks.
    #[arg(long, global = true, value_name = "N")]
    pub prefix: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eliminate the quantifiers of a formula.
    Qe { formula: String },
    /// Decide a sentence.
    Decide { sentence: String },
    /// Disjoint fundamental decomposition of the set a formula defines.
    Decompose {
        formula: String,
        /// Variable order (default: free variables sorted).
        #[arg(long, value_delimiter = ',')]
        vars: Option<Vec<String>>,
    },
    /// Dimension of the set a formula defines.
    Dim {
        formula: String,
        #[arg(long, value_delimiter = ',')]
        vars: Option<Vec<String>>,
    },
    /// Decide the linear order axioms of an interpretation.
    Validate { interpretation: String },
    /// Order type of the galaxy of a point.
    Galaxy {
        interpretation: String,
        #[arg(long, value_delimiter = ',', required = true)]
        point: Vec<u64>,
    },
    /// Condensation: one point per galaxy.
    Condense {
        interpretation: String,
        /// Split every Z galaxy into its -N and N halves first.
        #[arg(long)]
        split_z: bool,
    },
    /// Iterated condensation rank.
    Rank { interpretation: String },
    /// Built-in interpretations.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Count natural solutions of `A l = u`, or fit the counting function.
    Count(CountArgs),
    /// Lexicographic representations.
    Lexrep {
        #[command(subcommand)]
        action: LexrepAction,
    },
}

#[derive(Debug, Subcommand)]
pub enum CatalogAction {
    List,
    Get { name: String },
}

#[derive(Debug, Args)]
#[command(args_conflicts_with_subcommands = true)]
pub struct CountArgs {
    #[command(subcommand)]
    pub fit: Option<CountFit>,
    /// Matrix, rows separated by `;`, entries by `,`.
    #[arg(short = 'A', allow_hyphen_values = true)]
    pub matrix: Option<String>,
    /// Right-hand side.
    #[arg(short = 'u', allow_hyphen_values = true)]
    pub u: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum CountFit {
    /// Piecewise polynomial fit on the box `[lo, hi]^d`.
    Fit {
        #[arg(short = 'A', allow_hyphen_values = true)]
        matrix: String,
        #[arg(long, default_value = "0:20")]
        range: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum LexrepAction {
    /// Construct and verify a representation.
    Build { interpretation: String },
    /// Verify a representation read from a file.
    Verify { interpretation: String, representation: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Fail,
    Error,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Fail => 1,
            Status::Error => 2,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub status: Status,
    pub payload: Value,
    pub diagnostics: Vec<String>,
    #[serde(skip)]
    pub text: Vec<String>,
}

impl Report {
    fn ok(payload: Value, text: Vec<String>) -> Report {
        Report { status: Status::Ok, payload, diagnostics: Vec::new(), text }
    }

    fn verdict(passed: bool, payload: Value, text: Vec<String>) -> Report {
        let status = if passed { Status::Ok } else { Status::Fail };
        Report { status, payload, diagnostics: Vec::new(), text }
    }

    pub fn error(message: impl Into<String>) -> Report {
        Report { status: Status::Error, payload: json!({}), diagnostics: vec![message.into()], text: Vec::new() }
    }

    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }
}

/// Writes the report: stdout for the result, stderr for diagnostics.
pub fn emit(report: &Report, json: bool) {
    if json {
        println!("{}", serde_json::to_string(report).expect("report serialises"));
    } else {
        for line in &report.text {
            println!("{line}");
        }
        if report.status == Status::Fail && report.text.is_empty() {
            println!("fail");
        }
    }
    for d in &report.diagnostics {
        eprintln!("{d}");
    }
}

struct Settings {
    limits: Limits,
    box_bound: Option<u64>,
    prefix: usize,
}

impl Settings {
    fn from_args(g: &GlobalArgs) -> std::result::Result<Settings, String> {
        let env_nodes = match std::env::var(BUDGET_ENV) {
            Ok(v) => Some(v.trim().parse::<usize>().map_err(|e| format!("{BUDGET_ENV}: {e}"))?),
            Err(_) => None,
        };
        let nodes = g.budget_nodes.or(env_nodes).unwrap_or(DEFAULT_MAX_NODES);
        let limits = Limits { qe: Budget::new(nodes), max_pieces: g.budget_pieces.unwrap_or(DEFAULT_MAX_PIECES) };
        Ok(Settings { limits, box_bound: g.box_bound, prefix: g.prefix.unwrap_or(lexrep::DEFAULT_PREFIX) })
    }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn dispatch<I, T>(argv: I) -> (Report, bool)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let json = args.iter().any(|a| a == "--json");
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return (Report::ok(json!({}), vec![e.to_string().trim_end().to_string()]), json);
            }
            return (Report::error(e.to_string().trim_end().to_string()), json);
        }
    };
    let settings = match Settings::from_args(&cli.global) {
        Ok(s) => s,
        Err(e) => return (Report::error(e), json),
    };
    let report = run(&cli.command, &settings).unwrap_or_else(|e| Report::error(e.to_string()));
    (report, cli.global.json)
}

/// Reads an interpretation from `catalog:<name>` or a JSON file.
pub fn load_interpretation(reference: &str) -> Result<Interpretation> {
    if let Some(name) = reference.strip_prefix("catalog:") {
        return catalog::get(name)
            .ok_or_else(|| Error::InvalidInterpretation(format!("unknown catalog entry `{name}`")));
    }
    let text = fs::read_to_string(reference).map_err(|e| Error::Io(format!("{reference}: {e}")))?;
    Interpretation::from_json_str(&text)
}

fn read_json(path: &str) -> Result<Value> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{path}: {e}")))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::Io(format!("{path}: line {} column {}: {e}", e.line(), e.column())))
}

fn formula_vars(f: &Formula, vars: &Option<Vec<String>>) -> Result<Vec<String>> {
    let free: BTreeSet<String> = f.free_vars();
    match vars {
        None => Ok(free.into_iter().collect()),
        Some(vs) => {
            if let Some(v) = free.iter().find(|v| !vs.contains(v)) {
                return Err(Error::UnboundVariable(v.clone()));
            }
            Ok(vs.clone())
        }
    }
}

fn decomposition_of(f: &str, vars: &Option<Vec<String>>, s: &Settings) -> Result<(Vec<String>, Decomposition)> {
    let f = parse(f)?;
    let vars = formula_vars(&f, vars)?;
    let q = qelim::eliminate_with(&f, &s.limits.qe)?;
    let d = Decomposition::of_formula(&q, &vars, s.limits.max_pieces)?;
    Ok((vars, d))
}

fn run(cmd: &Command, s: &Settings) -> Result<Report> {
    Ok(match cmd {
        Command::Qe { formula } => {
            let q = qelim::eliminate_with(&parse(formula)?, &s.limits.qe)?;
            let text = qelim::simplify(&q).to_string();
            Report::ok(json!({ "formula": text }), vec![text.clone()])
        }
        Command::Decide { sentence } => {
            let v = qelim::decide_with(&parse(sentence)?, &s.limits.qe)?;
            Report::ok(json!({ "value": v }), vec![v.to_string()])
        }
        Command::Decompose { formula, vars } => {
            let (vars, d) = decomposition_of(formula, vars, s)?;
            let mut text = vec![format!("variables: {}", vars.join(", "))];
            text.extend(d.pieces.iter().map(|l| l.to_string()));
            text.push(format!("dimension: {}", d.dimension()));
            let mut payload = json!({ "vars": vars, "decomposition": d.to_json(), "dimension": d.dimension() });
            if let Some(b) = s.box_bound {
                let pts = d.enumerate(b);
                text.push(format!("points in [0,{b}]^{}: {}", d.arity, pts.len()));
                payload["points"] = json!(pts);
            }
            Report::ok(payload, text)
        }
        Command::Dim { formula, vars } => {
            let (_, d) = decomposition_of(formula, vars, s)?;
            Report::ok(json!({ "dimension": d.dimension() }), vec![d.dimension().to_string()])
        }
        Command::Validate { interpretation } => {
            let i = load_interpretation(interpretation)?;
            let r = i.validate_with(&s.limits.qe)?;
            let text = r.axioms.iter().map(|a| format!("{}: {}", a.axiom, if a.holds { "holds" } else { "fails" })).collect();
            Report::verdict(r.all_hold(), serde_json::to_value(&r).expect("report serialises"), text)
        }
        Command::Galaxy { interpretation, point } => {
            let i = load_interpretation(interpretation)?;
            let t = Analyzer::with_limits(&i, s.limits)?.galaxy_type(point)?;
            Report::ok(json!({ "point": point, "galaxy": t, "tag": t.to_string() }), vec![t.to_string()])
        }
        Command::Condense { interpretation, split_z } => {
            let i = load_interpretation(interpretation)?;
            let c = Analyzer::with_limits(&i, s.limits)?.condense_with(*split_z)?;
            let mut payload = json!({
                "interpretation": c.interp.to_json(),
                "decomposition": c.decomposition.to_json(),
                "dimension": c.dimension,
            });
            let mut text = vec![format!("domain: {}", c.domain), format!("dimension: {}", c.dimension)];
            if let Some(b) = s.box_bound {
                let pts = c.decomposition.enumerate(b);
                text.push(format!("representatives in [0,{b}]^{}: {}", i.dim, pts.len()));
                payload["points"] = json!(pts);
            }
            Report::ok(payload, text)
        }
        Command::Rank { interpretation } => {
            let i = load_interpretation(interpretation)?;
            let r = Analyzer::with_limits(&i, s.limits)?.vd_rank()?;
            let chain: Vec<Value> =
                r.chain.iter().map(|c| json!({ "domain": c.domain.to_string(), "dimension": c.dimension })).collect();
            let mut text = vec![format!("rank: {}", r.rank), format!("final size: {}", r.final_size)];
            text.extend(r.chain.iter().enumerate().map(|(k, c)| format!("step {}: dimension {}", k + 1, c.dimension)));
            Report::ok(json!({ "rank": r.rank, "final_size": r.final_size, "chain": chain }), text)
        }
        Command::Catalog { action: CatalogAction::List } => {
            let names = catalog::names();
            Report::ok(json!({ "names": names }), names.iter().map(|n| n.to_string()).collect())
        }
        Command::Catalog { action: CatalogAction::Get { name } } => {
            let i = load_interpretation(&format!("catalog:{name}"))?;
            let j = i.to_json();
            Report::ok(json!({ "interpretation": j }), vec![serde_json::to_string_pretty(&j).expect("json")])
        }
        Command::Count(args) => count(args)?,
        Command::Lexrep { action } => lexrep_command(action, s)?,
    })
}

fn count(args: &CountArgs) -> Result<Report> {
    if let Some(CountFit::Fit { matrix, range }) = &args.fit {
        let a = counting::parse_matrix(matrix)?;
        let (lo, hi) = range
            .split_once(':')
            .and_then(|(l, h)| Some((l.trim().parse::<i64>().ok()?, h.trim().parse::<i64>().ok()?)))
            .ok_or_else(|| Error::Syntax { position: 0, message: format!("range `{range}`: expected lo:hi") })?;
        let pp = counting::fit_piecewise(&a, &counting::sample_box(a.len(), lo, hi))?;
        let ok = counting::verify_degree_bound(&a, &pp);
        let mut text = vec![format!("degree bound n - rank(A) = {}", counting::degree_bound(&a))];
        text.extend(pp.pieces.iter().map(|p| {
            let signs = p.region.signs.as_ref().map_or(String::new(), |s| format!(" signs {s:?}"));
            format!("u = {:?} mod {}{signs}: {}", p.region.residue, p.region.modulus, p.polynomial)
        }));
        text.push(format!("degree bound holds: {ok}"));
        let payload = json!({ "fit": pp, "degree_bound": counting::degree_bound(&a), "degree_bound_holds": ok });
        return Ok(Report::verdict(ok, payload, text));
    }
    let (Some(m), Some(u)) = (&args.matrix, &args.u) else {
        return Ok(Report::error("count needs -A and -u (or `count fit -A ...`)"));
    };
    let inst = CountingInstance::new(counting::parse_matrix(m)?, counting::parse_vector(u)?)?;
    let c = counting::count_solutions(&inst)?;
    let value = match c {
        Count::Finite(n) => json!(n),
        Count::Infinite => json!("infinite"),
    };
    Ok(Report::ok(json!({ "count": value }), vec![c.to_string()]))
}

fn lexrep_command(action: &LexrepAction, s: &Settings) -> Result<Report> {
    let (i, rep) = match action {
        LexrepAction::Build { interpretation } => {
            let i = load_interpretation(interpretation)?;
            let rep = lexrep::construct_lex_rep_with(&i, s.limits)?;
            (i, rep)
        }
        LexrepAction::Verify { interpretation, representation } => {
            let i = load_interpretation(interpretation)?;
            (i, LexRepresentation::from_json(&read_json(representation)?)?)
        }
    };
    let v = lexrep::verify_lex_rep_with(&i, &rep, s.prefix, s.limits)?;
    let mut text = vec![format!("set in Z^{}:", rep.arity)];
    text.extend(rep.set.pieces.iter().map(|l| format!("  {l}")));
    text.push(format!(
        "verification: {} ({} galaxies, {} of {} elements){}",
        if v.passed { "passed" } else { "failed" },
        v.galaxies_compared,
        v.elements_covered,
        v.prefix_length,
        v.first_mismatch.as_ref().map_or(String::new(), |m| format!(": {m}"))
    ));
    if v.truncated {
        text.push("verification truncated".into());
    }
    let payload = json!({ "representation": rep.to_json(), "verification": v });
    Ok(Report::verdict(v.passed, payload, text))
}
