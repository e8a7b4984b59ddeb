//! Command-line front end. `run` parses argv and returns a `CommandResult`;
//! the binary only prints it and exits with its code.

use std::collections::BTreeMap;
use std::io::Read;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use deodhar::diagrams::{i_b_formula, is_le_diagram, validate_filling, GoDiagram, Square};
use deodhar::exact::{format_q, parse_q, Q};
use deodhar::fibers::{
    classify_fiber_point, fiber_components, fiber_poset, nonneg_fiber_components, top_fiber_component, BoundaryPoset,
    FiberComponent, FiberError,
};
use deodhar::networks::{i_b_via_network, plucker_of_network, weighted, NetworkError, Weights};
use deodhar::plucker::{PluckerError, PluckerVector};
use deodhar::wilson::{
    admissibility, boundary_matrix, boundary_minor, boundary_move, boundary_moves, boundary_pattern, c_matrix,
    c_star_matrix, d_star_diagram, matrix_json, monodromy_sign, positive_realization, positivity_violation,
    rotation_sequence, sigma_cell, symbolic_minor, BoundaryMove, Family, WilsonError, WilsonLoopDiagram,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_COMPUTATION: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Ascii,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Success,
    Error,
}

#[derive(Clone, Debug)]
pub struct CommandResult {
    pub status: Status,
    pub payload: Value,
    pub diagnostics: Vec<String>,
    pub exit_code: i32,
    /// What `--format ascii` prints on success.
    pub text: String,
    pub format: Format,
}

impl CommandResult {
    /// The bytes written to standard output.
    pub fn stdout(&self) -> String {
        match (self.format, self.status) {
            (Format::Ascii, Status::Success) => self.text.clone(),
            (Format::Ascii, Status::Error) => String::new(),
            (Format::Json, status) => {
                let doc = json!({
                    "status": if status == Status::Success { "success" } else { "error" },
                    "payload": self.payload,
                    "diagnostics": self.diagnostics,
                });
                serde_json::to_string_pretty(&doc).expect("JSON values serialize") + "\n"
            }
        }
    }

    /// The bytes written to standard error.
    pub fn stderr(&self) -> String {
        self.diagnostics.iter().map(|d| format!("{d}\n")).collect()
    }
}

#[derive(Debug)]
enum CliError {
    Validation(String),
    Computation(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Validation(_) => EXIT_VALIDATION,
            CliError::Computation(_) => EXIT_COMPUTATION,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Validation(m) | CliError::Computation(m) => m,
        }
    }
}

impl From<WilsonError> for CliError {
    fn from(e: WilsonError) -> Self {
        match e {
            WilsonError::Stuck(_)
            | WilsonError::NoRealization(_)
            | WilsonError::NoSharedBoundary
            | WilsonError::NoCommonBasis
            | WilsonError::Rejected(_) => CliError::Computation(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<NetworkError> for CliError {
    fn from(e: NetworkError) -> Self {
        match e {
            NetworkError::NoMaximum => CliError::Computation(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<FiberError> for CliError {
    fn from(e: FiberError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<PluckerError> for CliError {
    fn from(e: PluckerError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<deodhar::diagrams::DiagramError> for CliError {
    fn from(e: deodhar::diagrams::DiagramError) -> Self {
        CliError::Validation(e.to_string())
    }
}

#[derive(Parser, Debug)]
#[command(name = "deodhar", about = "Go-diagrams, Deodhar components and Wilson loop diagrams in exact arithmetic")]
struct Cli {
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate or draw a Go-diagram.
    Diagram {
        #[command(subcommand)]
        action: DiagramAction,
    },
    /// Plücker coordinates of a weighted Go-network.
    Plucker(NetworkArgs),
    /// The Go-network with coordinates, edges and weights.
    Network(NetworkArgs),
    /// I_b of one box, by formula and by network.
    Ib {
        #[arg(long)]
        diagram: String,
        /// Box as i,j.
        #[arg(long = "box")]
        square: String,
    },
    /// Fibers of the column-deletion projection over a component.
    Fiber {
        #[command(subcommand)]
        action: FiberAction,
    },
    /// The fiber component of a point over [n+1].
    Classify {
        #[arg(long)]
        diagram: String,
        #[arg(long)]
        pluckers: String,
    },
    /// Wilson loop diagrams.
    Wld {
        #[command(subcommand)]
        action: WldAction,
    },
}

#[derive(Subcommand, Debug)]
enum DiagramAction {
    Check {
        #[arg(long)]
        diagram: String,
    },
    Render {
        #[arg(long)]
        diagram: String,
    },
}

#[derive(Args, Debug)]
struct NetworkArgs {
    #[arg(long)]
    diagram: String,
    /// Weights as [{"box": [i, j], "weight": "num/den"}].
    #[arg(long, conflicts_with = "seed")]
    weights: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Draw positive weights with --seed.
    #[arg(long, requires = "seed")]
    positive: bool,
}

#[derive(Subcommand, Debug)]
enum FiberAction {
    List {
        #[arg(long)]
        diagram: String,
    },
    Top {
        #[arg(long)]
        diagram: String,
    },
    Poset {
        #[arg(long)]
        diagram: String,
    },
    /// The fiber poset inside the nonnegative part, for a Le-diagram.
    Nonneg {
        #[arg(long)]
        diagram: String,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FamilyArg {
    Series,
    Parallel,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::Series => Family::Series,
            FamilyArg::Parallel => Family::Parallel,
        }
    }
}

#[derive(Subcommand, Debug)]
enum WldAction {
    Admissible {
        #[arg(long)]
        wld: String,
    },
    Cell {
        #[arg(long)]
        wld: String,
    },
    Dstar {
        #[arg(long)]
        wld: String,
    },
    Positivity {
        #[arg(long)]
        wld: String,
    },
    Minor {
        #[arg(long)]
        wld: String,
        #[arg(long = "col-set")]
        col_set: String,
        /// Use C_*(W), with column n+1.
        #[arg(long)]
        star: bool,
    },
    Boundary {
        #[arg(long)]
        wld: String,
        /// 1-based row; with --vertex selects one move, else all are listed.
        #[arg(long, requires = "vertex")]
        propagator: Option<usize>,
        #[arg(long, requires = "propagator")]
        vertex: Option<usize>,
    },
    /// A positive point of Σ(W).
    Realize {
        #[arg(long)]
        wld: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    Rotate {
        #[arg(long)]
        wld: String,
        #[arg(long, value_enum)]
        family: FamilyArg,
    },
    Monodromy {
        #[arg(long)]
        wld: String,
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

/// Parses argv (program name first) and runs one command.
pub fn run<I, S>(argv: I) -> CommandResult
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
            let rendered = e.render().to_string();
            return CommandResult {
                status: if code == EXIT_OK { Status::Success } else { Status::Error },
                payload: Value::Null,
                diagnostics: if code == EXIT_OK { Vec::new() } else { vec![rendered.trim_end().to_string()] },
                exit_code: code,
                text: if code == EXIT_OK { rendered.clone() } else { String::new() },
                format: Format::Ascii,
            };
        }
    };
    let format = cli.format;
    match dispatch(cli.command) {
        Ok((payload, text)) => CommandResult {
            status: Status::Success,
            payload,
            diagnostics: Vec::new(),
            exit_code: EXIT_OK,
            text,
            format,
        },
        Err(e) => CommandResult {
            status: Status::Error,
            payload: Value::Null,
            diagnostics: vec![format!("error: {}", e.message())],
            exit_code: e.code(),
            text: String::new(),
            format,
        },
    }
}

type Output = Result<(Value, String), CliError>;

fn read_source(path: &str) -> Result<String, CliError> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::Validation(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::Validation(format!("{path}: {e}")))
    }
}

fn read_json(path: &str) -> Result<Value, CliError> {
    let text = read_source(path)?;
    serde_json::from_str(&text).map_err(|e| CliError::Validation(format!("{path}: malformed JSON: {e}")))
}

fn read_diagram(path: &str) -> Result<GoDiagram, CliError> {
    Ok(GoDiagram::from_json(&read_json(path)?)?)
}

/// A diagram that must satisfy the Go conditions.
fn read_valid_diagram(path: &str) -> Result<GoDiagram, CliError> {
    let d = read_diagram(path)?;
    let report = validate_filling(&d);
    if !report.is_valid() {
        return Err(CliError::Validation(format!("not a Go-diagram: {}", offending(&report.offending).join(", "))));
    }
    Ok(d)
}

fn read_wld(path: &str) -> Result<WilsonLoopDiagram, CliError> {
    Ok(WilsonLoopDiagram::from_json(&read_json(path)?)?)
}

fn parse_list(s: &str, what: &str) -> Result<Vec<usize>, CliError> {
    s.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| CliError::Validation(format!("bad {what} {s:?}"))))
        .collect()
}

fn read_weights(path: &str) -> Result<BTreeMap<Square, Q>, CliError> {
    let value = read_json(path)?;
    let entries = value.as_array().ok_or_else(|| CliError::Validation("weights must be a JSON array".into()))?;
    let mut out = BTreeMap::new();
    for e in entries {
        let b = e["box"]
            .as_array()
            .filter(|a| a.len() == 2)
            .and_then(|a| Some((a[0].as_u64()? as usize, a[1].as_u64()? as usize)))
            .ok_or_else(|| CliError::Validation(format!("bad weight entry {e}")))?;
        let w = match &e["weight"] {
            Value::String(s) => parse_q(s).map_err(|err| CliError::Validation(err.to_string()))?,
            Value::Number(n) => parse_q(&n.to_string()).map_err(|err| CliError::Validation(err.to_string()))?,
            other => return Err(CliError::Validation(format!("bad weight {other}"))),
        };
        if out.insert(b, w).is_some() {
            return Err(CliError::Validation(format!("box {b:?} weighted twice")));
        }
    }
    Ok(out)
}

fn offending(list: &[(Square, deodhar::diagrams::Violation)]) -> Vec<String> {
    list.iter().map(|((i, j), v)| format!("({i},{j}) {v:?}")).collect()
}

fn subset_str(s: &[usize]) -> String {
    s.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn plucker_text(p: &PluckerVector) -> String {
    p.iter().map(|(s, v)| format!("Δ{{{}}} = {}\n", subset_str(s), format_q(v))).collect()
}

fn poset_text(p: &BoundaryPoset) -> String {
    let mut out = String::new();
    for (idx, d) in p.nodes.iter().enumerate() {
        out.push_str(&format!("node {idx} (dimension {})\n{}", d.dimension(), d.render()));
    }
    for (a, b) in &p.covers {
        out.push_str(&format!("cover {a} > {b}\n"));
    }
    out.push_str(&format!("rank profile {:?}\n", p.rank_profile()));
    out
}

fn component_json(c: &FiberComponent) -> Value {
    json!({
        "diagram": c.extended.to_json(),
        "new_column": c.new_column().iter().map(|f| f.symbol()).collect::<Vec<_>>(),
        "dimension": c.extended.dimension(),
    })
}

fn dispatch(cmd: Command) -> Output {
    match cmd {
        Command::Diagram { action: DiagramAction::Check { diagram } } => {
            let d = read_diagram(&diagram)?;
            let report = validate_filling(&d);
            let valid = report.is_valid();
            let mut payload = json!({
                "valid": valid,
                "offending": offending(&report.offending),
                "boxes": d.shape().box_count(),
            });
            let mut text = format!("valid: {valid}\n");
            if valid {
                let (v, u) = d.permutations();
                payload["dimension"] = json!(d.dimension());
                payload["le"] = json!(is_le_diagram(&d));
                payload["v"] = json!(v.to_string());
                payload["u"] = json!(u.to_string());
                payload["mask"] = json!(d.subexpression().bits());
                text.push_str(&format!("dimension: {}\nle: {}\nv: {v}\nu: {u}\n", d.dimension(), is_le_diagram(&d)));
            } else {
                for o in offending(&report.offending) {
                    text.push_str(&format!("offending: {o}\n"));
                }
            }
            Ok((payload, text))
        }
        Command::Diagram { action: DiagramAction::Render { diagram } } => {
            let d = read_diagram(&diagram)?;
            Ok((json!({ "diagram": d.to_json(), "render": d.render() }), d.render()))
        }
        Command::Plucker(args) => {
            let wn = weighted_network(&args)?;
            let p = plucker_of_network(&wn);
            Ok((p.to_json(), plucker_text(&p)))
        }
        Command::Network(args) => {
            let wn = weighted_network(&args)?;
            let j = wn.to_json();
            let text = serde_json::to_string_pretty(&j).expect("JSON values serialize") + "\n";
            Ok((j, text))
        }
        Command::Ib { diagram, square } => {
            let d = read_valid_diagram(&diagram)?;
            let parts = parse_list(&square, "box")?;
            let [i, j] = parts[..] else {
                return Err(CliError::Validation(format!("box must be i,j, got {square:?}")));
            };
            let formula = i_b_formula(&d, (i, j))?;
            let network = i_b_via_network(&d, (i, j))?;
            let agree = formula == network;
            let text = format!(
                "I_b formula: {{{}}}\nI_b network: {{{}}}\nagree: {agree}\n",
                subset_str(&formula),
                subset_str(&network)
            );
            Ok((json!({ "box": [i, j], "formula": formula, "network": network, "agree": agree }), text))
        }
        Command::Fiber { action } => fiber(action),
        Command::Classify { diagram, pluckers } => {
            let d = read_valid_diagram(&diagram)?;
            let p = PluckerVector::from_json(d.n() + 1, &read_json(&pluckers)?)?;
            let c = classify_fiber_point(&d, &p)?;
            let text = format!("component (dimension {})\n{}", c.extended.dimension(), c.extended.render());
            Ok((component_json(&c), text))
        }
        Command::Wld { action } => wld(action),
    }
}

fn weighted_network(args: &NetworkArgs) -> Result<deodhar::networks::WeightedGoNetwork, CliError> {
    let d = read_valid_diagram(&args.diagram)?;
    let weights = match (&args.weights, args.seed) {
        (Some(path), None) => Weights::Explicit(read_weights(path)?),
        (None, Some(s)) if args.positive => Weights::PositiveSeed(s),
        (None, Some(s)) => Weights::Seed(s),
        _ => return Err(CliError::Validation("give exactly one of --weights and --seed".into())),
    };
    Ok(weighted(&d, weights)?)
}

fn fiber(action: FiberAction) -> Output {
    match action {
        FiberAction::List { diagram } => {
            let d = read_valid_diagram(&diagram)?;
            let comps = fiber_components(&d);
            let text = comps
                .iter()
                .enumerate()
                .map(|(idx, c)| {
                    format!("component {idx} (dimension {})\n{}", c.extended.dimension(), c.extended.render())
                })
                .collect();
            Ok((json!(comps.iter().map(component_json).collect::<Vec<_>>()), text))
        }
        FiberAction::Top { diagram } => {
            let d = read_valid_diagram(&diagram)?;
            let c = top_fiber_component(&d);
            let text = format!("top component (dimension {})\n{}", c.extended.dimension(), c.extended.render());
            Ok((component_json(&c), text))
        }
        FiberAction::Poset { diagram } => {
            let p = fiber_poset(&read_valid_diagram(&diagram)?);
            let mut j = p.to_json();
            j["rank_profile"] = json!(p.rank_profile());
            Ok((j, poset_text(&p)))
        }
        FiberAction::Nonneg { diagram } => {
            let p = nonneg_fiber_components(&read_valid_diagram(&diagram)?)?;
            let mut j = p.to_json();
            j["rank_profile"] = json!(p.rank_profile());
            j["boolean_lattice"] = json!(p.is_boolean_lattice());
            Ok((j, poset_text(&p)))
        }
    }
}

fn wld(action: WldAction) -> Output {
    match action {
        WldAction::Admissible { wld } => {
            let w = read_wld(&wld)?;
            let report = admissibility(&w);
            let reasons = report.reasons();
            let mut text = format!("admissible: {}\n", report.is_admissible());
            for r in &reasons {
                text.push_str(&format!("reason: {r}\n"));
            }
            Ok((json!({ "admissible": report.is_admissible(), "reasons": reasons }), text))
        }
        WldAction::Cell { wld } => {
            let w = read_wld(&wld)?;
            let cell = sigma_cell(&w)?;
            let necklace: Vec<Value> = cell.necklace.sets().iter().map(|s| json!(s)).collect();
            let text = format!(
                "necklace: {}\ndimension: {}\nD(W):\n{}",
                cell.necklace.sets().iter().map(|s| format!("{{{}}}", subset_str(s))).collect::<Vec<_>>().join(" "),
                cell.dimension,
                cell.le.render()
            );
            Ok((
                json!({ "necklace": necklace, "le_diagram": cell.le.to_json(), "dimension": cell.dimension, "matrix": c_matrix(&w).render() }),
                text,
            ))
        }
        WldAction::Dstar { wld } => {
            let w = read_wld(&wld)?;
            let d = d_star_diagram(&w)?;
            let text = format!("dimension: {}\nD_*(W):\n{}", d.dimension(), d.render());
            Ok((
                json!({ "diagram": d.to_json(), "dimension": d.dimension(), "matrix": c_star_matrix(&w).render() }),
                text,
            ))
        }
        WldAction::Positivity { wld } => {
            let w = read_wld(&wld)?;
            let v = positivity_violation(&w)?;
            Ok((json!({ "violation": v }), format!("violation: {v}\n")))
        }
        WldAction::Minor { wld, col_set, star } => {
            let w = read_wld(&wld)?;
            let cols = parse_list(&col_set, "column set")?;
            let m = if star { c_star_matrix(&w) } else { c_matrix(&w) };
            let p = symbolic_minor(&m, &cols)?;
            let s = p.to_string();
            Ok((json!({ "columns": cols, "minor": s }), format!("Δ{{{}}} = {s}\n", subset_str(&cols))))
        }
        WldAction::Boundary { wld, propagator, vertex } => {
            let w = read_wld(&wld)?;
            let moves = match (propagator, vertex) {
                (Some(r), Some(v)) => {
                    if r == 0 {
                        return Err(CliError::Validation("propagators are numbered from 1".into()));
                    }
                    vec![boundary_move(&w, r - 1, v)?]
                }
                _ => boundary_moves(&w),
            };
            let mut text = String::new();
            let mut items = Vec::new();
            for mv in &moves {
                let vertex = match *mv {
                    BoundaryMove::Detach { vertex, .. } | BoundaryMove::Touch { vertex, .. } => vertex,
                };
                let minor = boundary_minor(&w, mv.row(), vertex)?.to_string();
                let matrix = boundary_matrix(&w, mv);
                let pattern = boundary_pattern(&w, mv);
                text.push_str(&format!(
                    "row {} vertex {vertex}: {mv:?}\nminor: {minor}\n{}",
                    mv.row() + 1,
                    matrix.render()
                ));
                items.push(json!({
                    "move": mv,
                    "minor": minor,
                    "matrix": matrix.render(),
                    "supports": pattern.supports,
                    "relation": pattern.relation,
                }));
            }
            Ok((json!(items), text))
        }
        WldAction::Realize { wld, seed } => {
            let w = read_wld(&wld)?;
            let r = positive_realization(&w, seed)?;
            let mj = matrix_json(&r.matrix);
            let text = r
                .matrix
                .rows()
                .iter()
                .map(|row| row.iter().map(format_q).collect::<Vec<_>>().join("  ") + "\n")
                .collect();
            Ok((json!({ "method": r.method, "signs": r.signs, "matrix": mj }), text))
        }
        WldAction::Rotate { wld, family } => {
            let w = read_wld(&wld)?;
            let rot = rotation_sequence(&w, family.into())?;
            let mut text = String::new();
            for (idx, d) in rot.diagrams.iter().enumerate() {
                text.push_str(&format!("W_{}: {}\n", idx + 1, props(d)));
            }
            text.push_str(&format!("sigma: {}\n", rot.sigma));
            Ok((
                json!({
                    "diagrams": rot.diagrams.iter().map(|d| d.to_json()).collect::<Vec<_>>(),
                    "moved_rows": rot.moved_rows.iter().map(|r| r + 1).collect::<Vec<_>>(),
                    "sigma": rot.sigma.to_string(),
                    "relaxed_moves": rot.relaxed,
                }),
                text,
            ))
        }
        WldAction::Monodromy { wld, family, seed } => {
            let w = read_wld(&wld)?;
            let r = monodromy_sign(&w, family.into(), seed)?;
            let mut text = String::new();
            for (idx, d) in r.diagrams.iter().enumerate() {
                let chart = r.charts.get(idx).map(|c| format!("  J = {{{}}}", subset_str(c))).unwrap_or_default();
                text.push_str(&format!("W_{}: {}{chart}\n", idx + 1, props(d)));
            }
            for s in &r.steps {
                let tag = if s.realized { "" } else { " (structural)" };
                text.push_str(&format!("step at W_{}: {:+}{tag}\n", s.diagram + 1, s.sign));
            }
            text.push_str(&format!(
                "sigma: {} (sign {:+})\nwrap: {:+}\ntotal: {:+}\n",
                r.sigma,
                r.sigma.sign(),
                r.wrap_sign,
                r.total_sign
            ));
            Ok((r.to_json(), text))
        }
    }
}

fn props(w: &WilsonLoopDiagram) -> String {
    w.propagators().iter().map(|(i, j)| format!("({i},{j})")).collect::<Vec<_>>().join(" ")
}
