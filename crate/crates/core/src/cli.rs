//! The `qba` command line.
//!
//! [`run`] never panics on bad input and never touches the process: it
//! returns the exit code and both output streams, which keeps it testable.
//! Exit codes: 0 success, 1 a valid but negative answer (an invalid
//! equation, a failed axiom, non-isomorphic algebras, a rejected
//! decomposition, a structure violation), 2 a usage or input error.
//!
//! Elements are always referred to by name. With `--json` every command
//! prints one JSON document whose shape is one of the `*Json` types below;
//! algebra-valued output is in the [`AlgebraTables`](crate::algebra::AlgebraTables)
//! layout and can be passed back in wherever an algebra file is expected.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::algebra::{load_algebra, Element, FiniteAlgebra};
use crate::congruences::{
    all_congruences, compose_flat, compose_nonflat, decompose, extend_from_subalgebra, generated_congruence,
    split_congruence, BlockMapping, CongruenceDecomposition, CongruenceError,
};
use crate::enumeration::{emit, enumerate_all, enumerate_flat, EnumerationReport};
use crate::partition::{split_top_level, Partition};
use crate::quotients::{chi, count_automorphisms, direct_product, find_isomorphism, is_irreducible, quotient, tau};
use crate::terms::{decide, holds_in_named, parse_equation, Equation, Variety, Verdict, Witness};

pub struct CommandResult {
    pub exit_code: u8,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser)]
#[command(name = "qba", version, about = "Finite quasi-Boolean algebras")]
struct Cli {
    /// Print a JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Relation {
    Chi,
    Tau,
}

#[derive(Subcommand)]
enum Command {
    /// Check the QB axioms.
    Validate { file: PathBuf },
    /// Regular elements, clouds, flatness and automorphisms.
    Info { file: PathBuf },
    /// Quotient by χ, by τ or by an explicit congruence.
    Quotient {
        file: PathBuf,
        #[arg(long, value_enum, required_unless_present = "cong", conflicts_with = "cong")]
        rel: Option<Relation>,
        /// Congruence in partition text, e.g. "0,1;a;b".
        #[arg(long)]
        cong: Option<String>,
    },
    /// Direct product of two algebras.
    Product { left: PathBuf, right: PathBuf },
    /// Search for an isomorphism.
    Iso { left: PathBuf, right: PathBuf },
    /// Check an equation in one algebra.
    Check { file: PathBuf, equation: String },
    /// Decide an equation in a variety.
    Decide {
        #[arg(long, default_value = "qb", value_parser = parse_variety)]
        variety: Variety,
        equation: String,
    },
    /// List every congruence.
    Congruences { file: PathBuf },
    /// Least congruence containing the seed; each seed block relates its members.
    Generate { file: PathBuf, seed: String },
    /// Extend a congruence from a subalgebra to the whole algebra.
    Extend {
        file: PathBuf,
        /// Subalgebra carrier, e.g. "0,a,b,1".
        #[arg(long)]
        sub: String,
        /// Congruence on the subalgebra in partition text.
        #[arg(long)]
        cong: String,
    },
    /// Push a congruence onto A/χ and A/τ and check the split lemma.
    Split {
        file: PathBuf,
        #[arg(long)]
        cong: String,
    },
    /// Regular part, irregular part, X, f and mixed pairs of a congruence.
    Decompose {
        file: PathBuf,
        #[arg(long)]
        cong: String,
    },
    /// Rebuild a congruence: from `decompose --json` output for a non-flat
    /// algebra, or from a partition of the irregular elements of a flat one.
    Compose {
        file: PathBuf,
        #[arg(long, required_unless_present = "cong", conflicts_with = "cong")]
        from: Option<PathBuf>,
        #[arg(long)]
        cong: Option<String>,
    },
    /// Generate all algebras of one size and check the structure claims.
    Enumerate {
        #[arg(long)]
        size: usize,
        /// Only flat algebras.
        #[arg(long)]
        flat: bool,
        /// One representative per isomorphism class.
        #[arg(long)]
        up_to_iso: bool,
        /// Write each algebra to DIR as qba_n<size>_<index>.alg.
        #[arg(long, value_name = "DIR")]
        emit: Option<PathBuf>,
    },
}

fn parse_variety(s: &str) -> Result<Variety, String> {
    s.parse()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationJson {
    pub axiom: String,
    pub equation: String,
    pub witness: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidateJson {
    pub valid: bool,
    pub flat: bool,
    pub size: usize,
    pub violations: Vec<ViolationJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CloudJson {
    pub regular: String,
    pub members: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InfoJson {
    pub size: usize,
    pub names: Vec<String>,
    pub valid: bool,
    pub trivial: bool,
    pub flat: bool,
    pub regular: Vec<String>,
    pub irregular: Vec<String>,
    pub clouds: Vec<CloudJson>,
    pub star_fixed: Vec<String>,
    /// Null for flat or invalid algebras.
    pub irreducible: Option<bool>,
    pub automorphisms: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientJson {
    pub congruence: String,
    pub algebra: FiniteAlgebra,
    pub projection: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsoJson {
    pub isomorphic: bool,
    pub map: Option<BTreeMap<String, String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictJson {
    pub algebra: String,
    pub equation: String,
    pub valid: bool,
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruencesJson {
    pub count: usize,
    pub congruences: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerateJson {
    pub seed: Vec<(String, String)>,
    pub congruence: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtendJson {
    pub subalgebra: Vec<String>,
    pub congruence: String,
    pub via_fallback: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitJson {
    pub congruence: String,
    pub boolean_factor: Vec<String>,
    pub theta_chi: String,
    pub flat_factor: Vec<String>,
    pub theta_tau: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockMappingJson {
    pub block: Vec<String>,
    pub image: Vec<String>,
}

/// `decompose --json` output; `compose --from` reads it back.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionJson {
    pub congruence: String,
    pub theta_r: Vec<Vec<String>>,
    pub theta_ir: Vec<Vec<String>>,
    pub x: Vec<Vec<String>>,
    pub f: Vec<BlockMappingJson>,
    pub cross: Vec<(String, String)>,
}

/// Printed with exit code 1 when a split, extension or composition is refused.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RejectedJson {
    pub rejected: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComposeJson {
    pub congruence: String,
}

/// Input problems end with exit code 2, rejections with exit code 1.
enum Failure {
    Input(String),
    Rejected(String),
}

impl From<String> for Failure {
    fn from(message: String) -> Self {
        Failure::Input(message)
    }
}

impl From<CongruenceError> for Failure {
    fn from(e: CongruenceError) -> Self {
        match e {
            CongruenceError::LemmaViolation { .. }
            | CongruenceError::ConditionC1Violated(_)
            | CongruenceError::ConditionC2Violated(_)
            | CongruenceError::ConditionC3Violated(_)
            | CongruenceError::NotStarClosed(_)
            | CongruenceError::NoExtensionFound => Failure::Rejected(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

struct Report {
    text: String,
    json: String,
    negative: bool,
}

impl Report {
    fn new<T: Serialize>(text: String, value: &T, negative: bool) -> Self {
        let json = serde_json::to_string_pretty(value).expect("output types serialise") + "\n";
        Report { text, json, negative }
    }
}

pub fn run<I, T>(argv: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => return usage_error(e, &argv),
    };
    match dispatch(cli.command) {
        Ok(report) => CommandResult {
            exit_code: u8::from(report.negative),
            stdout: if cli.json { report.json } else { report.text },
            stderr: String::new(),
        },
        Err(Failure::Rejected(message)) => CommandResult {
            exit_code: 1,
            stdout: if cli.json {
                serde_json::to_string_pretty(&RejectedJson { rejected: message }).expect("output types serialise")
                    + "\n"
            } else {
                format!("REJECTED: {message}\n")
            },
            stderr: String::new(),
        },
        Err(Failure::Input(message)) => {
            CommandResult { exit_code: 2, stdout: String::new(), stderr: format!("error: {message}\n") }
        }
    }
}

fn usage_error(e: clap::Error, argv: &[OsString]) -> CommandResult {
    use clap::error::ErrorKind;
    let rendered = e.render().to_string();
    if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
        return CommandResult { exit_code: 0, stdout: rendered, stderr: String::new() };
    }
    let mut command = Cli::command();
    let sub = argv.get(1).and_then(|s| s.to_str()).map(str::to_string);
    let help = match sub.as_deref().and_then(|name| command.find_subcommand_mut(name)) {
        Some(sub) => sub.render_help(),
        None => command.render_help(),
    };
    CommandResult { exit_code: 2, stdout: String::new(), stderr: format!("{rendered}\n{help}") }
}

fn dispatch(command: Command) -> Result<Report, Failure> {
    match command {
        Command::Validate { file } => cmd_validate(&read_algebra(&file)?),
        Command::Info { file } => Ok(cmd_info(&read_algebra(&file)?)),
        Command::Quotient { file, rel, cong } => {
            let a = read_qb(&file)?;
            let theta = match (rel, cong) {
                (Some(Relation::Chi), _) => chi(&a),
                (Some(Relation::Tau), _) => tau(&a),
                (None, Some(text)) => parse_partition(&text, a.names())?,
                (None, None) => unreachable!("clap requires --rel or --cong"),
            };
            cmd_quotient(&a, &theta)
        }
        Command::Product { left, right } => {
            let p = direct_product(&read_qb(&left)?, &read_qb(&right)?);
            Ok(Report::new(p.to_file_string(), &p, false))
        }
        Command::Iso { left, right } => Ok(cmd_iso(&read_algebra(&left)?, &read_algebra(&right)?)),
        Command::Check { file, equation } => {
            let a = read_algebra(&file)?;
            let eq = read_equation(&equation)?;
            let name = file.file_stem().map_or_else(|| "A".to_string(), |s| s.to_string_lossy().into_owned());
            Ok(verdict_report(&name, &eq, holds_in_named(&a, &name, &eq)))
        }
        Command::Decide { variety, equation } => {
            let eq = read_equation(&equation)?;
            let (name, _) = variety.generator();
            Ok(verdict_report(name, &eq, decide(variety, &eq)))
        }
        Command::Congruences { file } => {
            let a = read_qb(&file)?;
            let list: Vec<String> =
                all_congruences(&a).map_err(Failure::from)?.iter().map(|p| p.display(a.names())).collect();
            let text = list.iter().fold(String::new(), |s, p| s + p + "\n");
            Ok(Report::new(text, &CongruencesJson { count: list.len(), congruences: list }, false))
        }
        Command::Generate { file, seed } => {
            let a = read_qb(&file)?;
            let blocks = parse_partition(&seed, a.names())?;
            let pairs: Vec<(Element, Element)> =
                blocks.blocks().iter().flat_map(|b| b[1..].iter().map(move |&y| (b[0], y))).collect();
            let theta = generated_congruence(&a, &pairs);
            let shown = theta.display(a.names());
            let seed = pairs.iter().map(|&(x, y)| (a.name(x).to_string(), a.name(y).to_string())).collect();
            Ok(Report::new(format!("{shown}\n"), &GenerateJson { seed, congruence: shown }, false))
        }
        Command::Extend { file, sub, cong } => cmd_extend(&read_qb(&file)?, &sub, &cong),
        Command::Split { file, cong } => {
            let a = read_qb(&file)?;
            cmd_split(&a, &parse_partition(&cong, a.names())?)
        }
        Command::Decompose { file, cong } => {
            let a = read_qb(&file)?;
            let theta = parse_partition(&cong, a.names())?;
            let d = decompose(&a, &theta)?;
            let json = decomposition_to_json(&a, &theta, &d);
            Ok(Report::new(d.display(&a), &json, false))
        }
        Command::Compose { file, from, cong } => cmd_compose(&read_qb(&file)?, from.as_deref(), cong.as_deref()),
        Command::Enumerate { size, flat, up_to_iso, emit: dir } => cmd_enumerate(size, flat, up_to_iso, dir.as_deref()),
    }
}

/// Reads an algebra file, or a JSON document holding algebra tables either
/// at the top level or under an `"algebra"` key.
fn read_algebra(path: &Path) -> Result<FiniteAlgebra, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let parsed = if text.trim_start().starts_with('{') {
        serde_json::from_str::<serde_json::Value>(&text).map_err(|e| e.to_string()).and_then(|mut v| {
            let tables = v.get_mut("algebra").map(serde_json::Value::take).unwrap_or(v);
            serde_json::from_value::<FiniteAlgebra>(tables).map_err(|e| e.to_string())
        })
    } else {
        load_algebra(&text).map_err(|e| e.to_string())
    };
    parsed.map_err(|e| format!("{}: {e}", path.display()))
}

/// Like [`read_algebra`] but rejects tables that break an axiom.
fn read_qb(path: &Path) -> Result<FiniteAlgebra, String> {
    let a = read_algebra(path)?;
    match a.validate().violations.first() {
        None => Ok(a),
        Some(v) => Err(format!("{} is not a QB-algebra: {} fails", path.display(), v.axiom.label())),
    }
}

fn read_equation(text: &str) -> Result<Equation, String> {
    parse_equation(text).map_err(|e| format!("cannot parse equation: {e}"))
}

fn parse_partition(text: &str, names: &[String]) -> Result<Partition, String> {
    Partition::parse(text, names).map_err(|e| format!("bad partition `{text}`: {e}"))
}

fn named(a: &FiniteAlgebra, xs: &[Element]) -> Vec<String> {
    xs.iter().map(|&x| a.name(x).to_string()).collect()
}

fn map_by_name(a: &FiniteAlgebra, b: &FiniteAlgebra, f: impl Fn(Element) -> Element) -> BTreeMap<String, String> {
    a.elements().map(|x| (a.name(x).to_string(), b.name(f(x)).to_string())).collect()
}

fn cmd_validate(a: &FiniteAlgebra) -> Result<Report, Failure> {
    let report = a.validate();
    let violations: Vec<ViolationJson> = report
        .violations
        .iter()
        .map(|v| ViolationJson {
            axiom: v.axiom.label().to_string(),
            equation: v.axiom.equation().to_string(),
            witness: named(a, &v.witness),
        })
        .collect();
    let flat = a.is_flat();
    let text = if report.passed {
        format!("VALID QB-algebra ({}, {} elements)\n", if flat { "flat" } else { "non-flat" }, a.size())
    } else {
        let mut s = String::from("INVALID\n");
        for v in &violations {
            let _ = writeln!(s, "{} fails: {} at ({})", v.axiom, v.equation, v.witness.join(", "));
        }
        s
    };
    let json = ValidateJson { valid: report.passed, flat, size: a.size(), violations };
    Ok(Report::new(text, &json, !report.passed))
}

fn cmd_info(a: &FiniteAlgebra) -> Report {
    let valid = a.is_qb_algebra();
    let regular = a.regular_elements();
    let clouds: Vec<CloudJson> = regular
        .iter()
        .map(|&r| CloudJson { regular: a.name(r).to_string(), members: named(a, &a.cloud_of(r)) })
        .collect();
    let star_fixed: Vec<Element> = a.elements().filter(|&x| a.star(x) == x).collect();
    let irreducible = if valid { is_irreducible(a).ok() } else { None };
    let info = InfoJson {
        size: a.size(),
        names: a.names().to_vec(),
        valid,
        trivial: a.is_trivial(),
        flat: a.is_flat(),
        regular: named(a, &regular),
        irregular: named(a, &a.irregular_elements()),
        clouds,
        star_fixed: named(a, &star_fixed),
        irreducible,
        automorphisms: count_automorphisms(a),
    };
    let mut s = String::new();
    let _ = writeln!(s, "size:          {}", info.size);
    let _ = writeln!(s, "valid:         {}", if valid { "yes" } else { "no" });
    if info.trivial {
        let _ = writeln!(s, "trivial:       yes (0 = 1)");
    }
    let _ = writeln!(s, "flat:          {}", if info.flat { "yes" } else { "no" });
    let _ = writeln!(s, "regular:       {}", a.format_set(&regular));
    let _ = writeln!(s, "irregular:     {}", a.format_set(&a.irregular_elements()));
    for c in &info.clouds {
        let _ = writeln!(
            s,
            "cloud of {}:{}{{{}}}",
            c.regular,
            " ".repeat(5usize.saturating_sub(c.regular.len())),
            c.members.join(",")
        );
    }
    let _ = writeln!(s, "star-fixed:    {}", a.format_set(&star_fixed));
    if let Some(irr) = irreducible {
        let _ = writeln!(s, "irreducible:   {}", if irr { "yes" } else { "no" });
    }
    let _ = writeln!(s, "automorphisms: {}", info.automorphisms);
    Report::new(s, &info, false)
}

fn cmd_quotient(a: &FiniteAlgebra, theta: &Partition) -> Result<Report, Failure> {
    let (q, projection) = quotient(a, theta).map_err(|e| Failure::Input(e.to_string()))?;
    let shown = theta.display(a.names());
    let text = format!("# quotient by {shown}\n{}", q.to_file_string());
    let json = QuotientJson { congruence: shown, projection: map_by_name(a, &q, |x| projection.apply(x)), algebra: q };
    Ok(Report::new(text, &json, false))
}

fn cmd_iso(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Report {
    match find_isomorphism(a, b) {
        Some(f) => {
            let mut text = String::from("ISOMORPHIC\n");
            for x in a.elements() {
                let _ = writeln!(text, "{} -> {}", a.name(x), b.name(f.apply(x)));
            }
            let json = IsoJson { isomorphic: true, map: Some(map_by_name(a, b, |x| f.apply(x))) };
            Report::new(text, &json, false)
        }
        None => Report::new("NOT ISOMORPHIC\n".into(), &IsoJson { isomorphic: false, map: None }, true),
    }
}

fn verdict_report(algebra: &str, eq: &Equation, verdict: Verdict) -> Report {
    let text = format!("{verdict}\n");
    let json = VerdictJson {
        algebra: algebra.to_string(),
        equation: eq.to_string(),
        valid: verdict.valid,
        witness: verdict.witness,
    };
    Report::new(text, &json, !json.valid)
}

fn cmd_extend(a: &FiniteAlgebra, sub: &str, cong: &str) -> Result<Report, Failure> {
    let mut carrier = Vec::new();
    for name in split_top_level(sub.trim(), ',') {
        let name = name.trim();
        let x = a.index_of(name).ok_or_else(|| format!("unknown element name `{name}`"))?;
        if carrier.contains(&x) {
            return Err(format!("element `{name}` listed twice in --sub").into());
        }
        carrier.push(x);
    }
    carrier.sort_unstable();
    let sub_alg = a.subalgebra(&carrier).ok_or(CongruenceError::NotASubalgebra)?;
    let theta0 = parse_partition(cong, sub_alg.names())?;
    let ext = extend_from_subalgebra(a, &carrier, &theta0)?;
    let shown = ext.congruence.display(a.names());
    let json = ExtendJson { subalgebra: named(a, &carrier), congruence: shown.clone(), via_fallback: ext.via_fallback };
    Ok(Report::new(format!("{shown}\n"), &json, false))
}

fn cmd_split(a: &FiniteAlgebra, theta: &Partition) -> Result<Report, Failure> {
    let s = split_congruence(a, theta)?;
    let json = SplitJson {
        congruence: theta.display(a.names()),
        boolean_factor: s.boolean_factor.names().to_vec(),
        theta_chi: s.theta_chi.display(s.boolean_factor.names()),
        flat_factor: s.flat_factor.names().to_vec(),
        theta_tau: s.theta_tau.display(s.flat_factor.names()),
    };
    let text = format!("A/chi: {}\nA/tau: {}\n", json.theta_chi, json.theta_tau);
    Ok(Report::new(text, &json, false))
}

fn decomposition_to_json(a: &FiniteAlgebra, theta: &Partition, d: &CongruenceDecomposition) -> DecompositionJson {
    let blocks = |bs: &[Vec<Element>]| bs.iter().map(|b| named(a, b)).collect();
    DecompositionJson {
        congruence: theta.display(a.names()),
        theta_r: blocks(&d.theta_r),
        theta_ir: blocks(&d.theta_ir),
        x: blocks(&d.x),
        f: d.f.iter().map(|m| BlockMappingJson { block: named(a, &m.block), image: named(a, &m.image) }).collect(),
        cross: d.theta_cross.iter().map(|&(x, y)| (a.name(x).to_string(), a.name(y).to_string())).collect(),
    }
}

fn decomposition_from_json(a: &FiniteAlgebra, j: &DecompositionJson) -> Result<CongruenceDecomposition, String> {
    let index = |name: &String| a.index_of(name).ok_or_else(|| format!("unknown element name `{name}`"));
    let block = |b: &Vec<String>| b.iter().map(index).collect::<Result<Vec<_>, _>>();
    let blocks = |bs: &[Vec<String>]| bs.iter().map(block).collect::<Result<Vec<_>, _>>();
    Ok(CongruenceDecomposition {
        theta_r: blocks(&j.theta_r)?,
        theta_ir: blocks(&j.theta_ir)?,
        x: blocks(&j.x)?,
        f: j.f
            .iter()
            .map(|m| Ok(BlockMapping { block: block(&m.block)?, image: block(&m.image)? }))
            .collect::<Result<_, String>>()?,
        theta_cross: j.cross.iter().map(|(x, y)| Ok((index(x)?, index(y)?))).collect::<Result<_, String>>()?,
    })
}

fn cmd_compose(a: &FiniteAlgebra, from: Option<&Path>, cong: Option<&str>) -> Result<Report, Failure> {
    let theta = match (from, cong) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            let j: DecompositionJson = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
            compose_nonflat(a, &decomposition_from_json(a, &j)?)?
        }
        (None, Some(text)) => {
            if !a.is_flat() {
                return Err(Failure::Input("--cong is for flat algebras; use --from for non-flat ones".into()));
            }
            let irregular = a.irregular_elements();
            let names = named(a, &irregular);
            compose_flat(a, &parse_partition(text, &names)?)?
        }
        (None, None) => unreachable!("clap requires --from or --cong"),
    };
    let shown = theta.display(a.names());
    Ok(Report::new(format!("{shown}\n"), &ComposeJson { congruence: shown }, false))
}

fn cmd_enumerate(size: usize, flat: bool, up_to_iso: bool, dir: Option<&Path>) -> Result<Report, Failure> {
    let report: EnumerationReport = if flat { enumerate_flat(size, up_to_iso) } else { enumerate_all(size, up_to_iso) }
        .map_err(|e| Failure::Input(e.to_string()))?;
    let mut text = String::new();
    let _ = writeln!(
        text,
        "size {}: {} {}, {} labelled with zero at index 0",
        size,
        report.iso_classes.len(),
        if up_to_iso { "isomorphism classes" } else { "algebras" },
        report.total_labeled
    );
    if let Some(dir) = dir {
        let written = emit(&report, dir).map_err(|e| Failure::Input(e.to_string()))?;
        let _ = writeln!(text, "wrote {} files to {}", written.len(), dir.display());
    }
    for v in &report.violations {
        let _ = writeln!(text, "VIOLATION algebra {}: {}", v.algebra, v.claim);
    }
    let negative = !report.violations.is_empty();
    Ok(Report::new(text, &report, negative))
}
