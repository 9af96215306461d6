//! Command-line front end: `list`, `delta`, `scan`, `closed-form`, `verify`,
//! `table`, `threefold`.

pub mod corollary;
pub mod render;
pub mod verify;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::Value;

use crate::catalog::{self, Catalog, Location};
use crate::delta::{DeltaError, DeltaReport, Engine, ExpectedKind};
use crate::exact::{format_rational, int, parse_rational, Rational};
use crate::threefold::{Kind, ThreefoldBoundInput};

use corollary::{ConeDelta, ConeError, ThreefoldResult};
use render::{Cell, Format, Record};

#[derive(Debug, Parser)]
#[command(name = "lfdelta", version, about = "Exact δ-invariants of log Fano pairs (P², λC)")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    format: Format,
    /// Worker threads for parallel commands.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Use a catalog read from a JSON file instead of the built-in one.
    #[arg(long, global = true)]
    catalog: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List catalog cases and aliases.
    List,
    /// δ at a point of the curve for one λ.
    Delta {
        #[arg(long)]
        case: String,
        #[arg(long)]
        degree: u32,
        #[arg(long, value_parser = rational_arg)]
        lambda: Rational,
    },
    /// δ at evenly spaced λ in [from, to).
    Scan {
        #[arg(long)]
        case: String,
        #[arg(long)]
        degree: u32,
        #[arg(long, value_parser = rational_arg)]
        from: Rational,
        #[arg(long, value_parser = rational_arg)]
        to: Rational,
        #[arg(long, default_value_t = 16)]
        samples: u32,
    },
    /// Reconstruct δ as a rational function of λ on the validity window.
    ClosedForm {
        #[arg(long)]
        case: String,
        #[arg(long)]
        degree: u32,
        #[arg(long, default_value_t = 2)]
        num_deg: usize,
        #[arg(long, default_value_t = 2)]
        den_deg: usize,
    },
    /// Check computed values against the catalog's expected closed forms.
    Verify {
        #[arg(long, conflicts_with = "case", required_unless_present = "case")]
        all: bool,
        #[arg(long)]
        case: Option<String>,
    },
    /// Closed forms of every base case, by degree.
    Table,
    /// Bounds for δ of threefold pairs from a plane curve δ.
    Threefold {
        #[arg(value_enum)]
        kind: KindArg,
        /// Degree of the surface S ⊂ P³ (ignored for the quadric).
        #[arg(long)]
        s: Option<u32>,
        /// Multiplicity of the point.
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[arg(long, value_parser = rational_arg)]
        lambda: Rational,
        /// Catalog case of the plane curve (tangent cone or hyperplane section).
        #[arg(long, required_unless_present = "delta2d", conflicts_with = "delta2d")]
        cone: Option<String>,
        /// Use this value of the plane δ directly.
        #[arg(long, value_parser = rational_arg)]
        delta2d: Option<Rational>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KindArg {
    Smooth,
    Blowup,
    Quadric,
}

impl From<KindArg> for Kind {
    fn from(k: KindArg) -> Kind {
        match k {
            KindArg::Smooth => Kind::Smooth,
            KindArg::Blowup => Kind::Blowup,
            KindArg::Quadric => Kind::Quadric,
        }
    }
}

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

/// A failed command: exit 1 for mismatches, 2 for invalid input.
#[derive(Debug)]
enum Failure {
    Mismatch(String),
    Invalid(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Mismatch(_) => 1,
            Failure::Invalid(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Mismatch(m) | Failure::Invalid(m) => m,
        }
    }
}

impl From<DeltaError> for Failure {
    fn from(e: DeltaError) -> Self {
        match e {
            DeltaError::Catalog(_) | DeltaError::LambdaOutOfRange { .. } | DeltaError::UnknownPoint { .. } => {
                Failure::Invalid(e.to_string())
            }
            _ => Failure::Mismatch(e.to_string()),
        }
    }
}

impl From<ConeError> for Failure {
    fn from(e: ConeError) -> Self {
        match e {
            ConeError::Delta(d) => d.into(),
            other => Failure::Invalid(other.to_string()),
        }
    }
}

/// Successful output plus exit code (0, or 1 when a verification failed).
struct Output {
    text: String,
    code: i32,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, code: 0 }
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    2
                }
            };
        }
    };
    let result = match cli.jobs {
        Some(0) => Err(Failure::Invalid("--jobs must be positive".into())),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(&cli)),
            Err(e) => Err(Failure::Invalid(e.to_string())),
        },
        None => dispatch(&cli),
    };
    match result {
        Ok(o) => {
            let _ = write!(out, "{}", o.text);
            o.code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            f.code()
        }
    }
}

/// Reads a catalog file: either a bare catalog or an object with a `catalog` field.
pub fn load_catalog(path: &std::path::Path) -> Result<Catalog, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut v: Value = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    if let Some(inner) = v.get_mut("catalog") {
        v = inner.take();
    }
    serde_json::from_value(v).map_err(|e| format!("{}: {e}", path.display()))
}

fn dispatch(cli: &Cli) -> Result<Output, Failure> {
    let owned;
    let catalog: &Catalog = match &cli.catalog {
        Some(p) => {
            owned = load_catalog(p).map_err(Failure::Invalid)?;
            &owned
        }
        None => catalog::shipped(),
    };
    let engine = Engine::new(catalog);
    let f = cli.format;
    match &cli.command {
        Command::List => Ok(Output::ok(cmd_list(catalog, f))),
        Command::Delta { case, degree, lambda } => cmd_delta(&engine, case, *degree, lambda, f).map(Output::ok),
        Command::Scan { case, degree, from, to, samples } => {
            cmd_scan(&engine, case, *degree, from, to, *samples, f).map(Output::ok)
        }
        Command::ClosedForm { case, degree, num_deg, den_deg } => {
            cmd_closed_form(&engine, case, *degree, *num_deg, *den_deg, f)
        }
        Command::Verify { all, case } => cmd_verify(catalog, *all, case.as_deref(), f),
        Command::Table => Ok(Output::ok(cmd_table(&engine, f))),
        Command::Threefold { kind, s, m, lambda, cone, delta2d } => {
            cmd_threefold(&engine, (*kind).into(), *s, *m, lambda, cone.as_deref(), delta2d.as_ref(), f)
                .map(Output::ok)
        }
    }
}

fn cmd_list(catalog: &Catalog, f: Format) -> String {
    let records: Vec<Record> = catalog
        .list()
        .into_iter()
        .map(|c| {
            Record::new()
                .with("id", c.id)
                .with("label", c.label)
                .with("configuration", c.configuration)
                .with("degrees", Cell::List(c.degrees.iter().map(u32::to_string).collect()))
                .with("validity", format!("[{},{}]", format_rational(&c.validity.lo), format_rational(&c.validity.hi)))
                .with("alias_of", c.alias_of)
        })
        .collect();
    match f {
        Format::Json => render::json_document(
            &records,
            vec![("catalog", serde_json::to_value(catalog).expect("catalog serializes"))],
        ),
        _ => render::render(&records, f, &[]),
    }
}

fn bound_kind(r: &DeltaReport) -> &'static str {
    if r.exact {
        "="
    } else {
        "≥"
    }
}

fn expected_kind_name(k: ExpectedKind) -> &'static str {
    match k {
        ExpectedKind::Exact => "exact",
        ExpectedKind::LowerBound => "lower_bound",
        ExpectedKind::None => "none",
    }
}

fn location_name(l: Option<Location>) -> &'static str {
    match l {
        Some(Location::OnL) => "on_L",
        Some(Location::OnC) => "on_C",
        Some(Location::Isolated) => "isolated",
        None => "generic",
    }
}

fn delta_record(r: &DeltaReport) -> Record {
    Record::new()
        .with("case", r.case.as_str())
        .with("option", r.option.as_str())
        .with("d", r.d)
        .with("lambda", &r.lambda)
        .with("delta", &r.value)
        .with("bound_kind", bound_kind(r))
        .with("exact", r.exact)
        .with("upper", &r.upper)
        .with("lower", &r.lower)
        .with("minimizer", Cell::List(r.minimizers.clone()))
        .with("validity_ok", r.validity_ok)
        .with("expected", r.expected.as_ref())
        .with("expected_kind", expected_kind_name(r.expected_kind))
        .with("match", r.matches)
        .with("clause", r.clause_value.as_ref())
        .with("note", if r.exact { "" } else { "lower bound only" })
}

fn delta_block(r: &DeltaReport) -> String {
    let q = format_rational;
    let mut s = format!("{} ({}), d = {}, λ = {}\n", r.case, r.label, r.d, q(&r.lambda));
    if !r.option.is_empty() {
        s += &format!("  different: {}\n", r.option);
    }
    s += &format!(
        "  Ē: A = {}, S = {}, τ = {}, A/S = {}\n",
        q(&r.a_e),
        q(&r.s_e),
        q(&r.tau),
        q(&r.ratio_e)
    );
    for p in &r.points {
        s += &format!(
            "  point {} [{}]: A = {}, S = {}, A/S = {}\n",
            p.label,
            location_name(p.location),
            q(&p.a),
            q(&p.s),
            q(&p.ratio)
        );
    }
    for c in &r.curve_bounds {
        s += &format!("  {}: A = {}, S = {}, A/S = {}\n", c.label, q(&c.a), q(&c.s), q(&c.ratio));
    }
    s += &format!("  δ {} {}", bound_kind(r), q(&r.value));
    if !r.exact {
        s += &format!(" (lower bound only; upper bound {})", q(&r.upper));
    }
    s += &format!("\n  minimizer: {}\n", r.minimizers.join(", "));
    match (&r.expected, r.matches) {
        (Some(e), Some(m)) => {
            let kind = if r.expected_kind == ExpectedKind::LowerBound { "≥ " } else { "" };
            s += &format!("  expected: {kind}{} ({})\n", q(e), if m { "match" } else { "MISMATCH" });
        }
        _ => s += "  expected: none (outside the validity window)\n",
    }
    if let Some(c) = &r.clause_value {
        s += &format!("  multiplicity clause: {}\n", q(c));
    }
    s
}

fn cmd_delta(engine: &Engine, case: &str, d: u32, lambda: &Rational, f: Format) -> Result<String, Failure> {
    let reports = engine.delta_point_all(case, d, lambda)?;
    Ok(match f {
        Format::Plain => reports.iter().map(delta_block).collect::<Vec<_>>().join("\n"),
        _ => render::render(&reports.iter().map(delta_record).collect::<Vec<_>>(), f, &[]),
    })
}

fn cmd_scan(
    engine: &Engine,
    case: &str,
    d: u32,
    from: &Rational,
    to: &Rational,
    samples: u32,
    f: Format,
) -> Result<String, Failure> {
    if from >= to {
        return Err(Failure::Invalid(format!("empty range: from {} ≥ to {}", format_rational(from), format_rational(to))));
    }
    if from < &int(0) || to > &Rational::new(3.into(), d.into()) {
        return Err(Failure::Invalid(format!(
            "range [{}, {}) not inside [0, 3/{d})",
            format_rational(from),
            format_rational(to)
        )));
    }
    if samples == 0 {
        return Err(Failure::Invalid("--samples must be positive".into()));
    }
    // Validate case and degree once before fanning out.
    engine.catalog().build_case(case, d).map_err(|e| Failure::Invalid(e.to_string()))?;
    let lambdas: Vec<Rational> =
        (0..samples).map(|k| from + (to - from) * Rational::new(k.into(), samples.into())).collect();
    let rows: Vec<Vec<DeltaReport>> = lambdas
        .par_iter()
        .map(|l| engine.delta_point_all(case, d, l))
        .collect::<Result<_, _>>()?;
    let records: Vec<Record> = rows.iter().flatten().map(delta_record).collect();
    Ok(render::render(&records, f, &[]))
}

fn cmd_closed_form(
    engine: &Engine,
    case: &str,
    d: u32,
    num_deg: usize,
    den_deg: usize,
    f: Format,
) -> Result<Output, Failure> {
    let built = engine.catalog().build_case(case, d).map_err(|e| Failure::Invalid(e.to_string()))?;
    let fit = engine.delta_closed_form_with(case, d, num_deg, den_deg)?;
    let expected = built.spec.expected_function(d);
    let matches = fit == expected;
    let record = Record::new()
        .with("case", case)
        .with("d", d)
        .with("closed_form", fit.display("λ"))
        .with("latex", fit.latex())
        .with("expected", expected.display("λ"))
        .with("validity", built.validity().to_string())
        .with("match", matches);
    let text = match f {
        Format::Plain => format!(
            "{case}, d = {d}: δ = {} on {}\nexpected {} ({})\n",
            fit.display("λ"),
            built.validity(),
            expected.display("λ"),
            if matches { "match" } else { "MISMATCH" }
        ),
        _ => render::render(&[record], f, &["latex"]),
    };
    Ok(Output { text, code: if matches { 0 } else { 1 } })
}

fn cmd_verify(catalog: &Catalog, all: bool, case: Option<&str>, f: Format) -> Result<Output, Failure> {
    let report = if all {
        verify::verify_all(catalog)
    } else {
        let id = case.expect("clap requires --all or --case");
        verify::verify_one(catalog, id).ok_or_else(|| Failure::Invalid(format!("unknown case `{id}`")))?
    };
    let records: Vec<Record> = report
        .checks
        .iter()
        .map(|c| {
            Record::new()
                .with("subject", c.subject.as_str())
                .with("d", c.degree)
                .with("closed_form", c.closed_form.clone())
                .with("status", if c.passed() { "PASS" } else { "FAIL" })
                .with("failures", Cell::List(c.failures.clone()))
        })
        .collect();
    let passed = report.checks.iter().filter(|c| c.passed()).count();
    let failed = report.checks.len() - passed;
    let text = match f {
        Format::Plain => {
            let table: Vec<Record> = records
                .iter()
                .map(|r| {
                    Record(r.0.iter().filter(|(k, _)| *k != "failures").cloned().collect())
                })
                .collect();
            let mut s = render::plain(&table);
            for c in report.failures() {
                let d = c.degree.map_or(String::new(), |d| format!(" (d = {d})"));
                for m in &c.failures {
                    s += &format!("FAIL {}{d}: {m}\n", c.subject);
                }
            }
            s + &format!("{passed} passed, {failed} failed\n")
        }
        _ => render::render(&records, f, &[]),
    };
    Ok(Output { text, code: if report.passed() { 0 } else { 1 } })
}

/// Label, degree, closed form (if it fits) and validity window.
pub type TableRow = (String, u32, Option<crate::exact::RationalFunction>, String);

/// Closed forms of base cases at each admissible degree, ordered by degree
/// then catalog order.
pub fn table_rows(engine: &Engine) -> Vec<TableRow> {
    let mut targets: Vec<(&catalog::CaseSpec, u32)> =
        engine.catalog().cases.iter().flat_map(|c| c.degrees.iter().map(move |&d| (c, d))).collect();
    targets.sort_by_key(|(_, d)| *d);
    targets
        .par_iter()
        .map(|(c, d)| {
            let f = engine.delta_closed_form(&c.id, *d).ok();
            (c.label.clone(), *d, f, c.validity_for(*d).to_string())
        })
        .collect()
}

fn cmd_table(engine: &Engine, f: Format) -> String {
    let records: Vec<Record> = table_rows(engine)
        .into_iter()
        .map(|(label, d, func, validity)| {
            let delta = match (&func, f) {
                (Some(x), Format::Latex) => x.latex(),
                (Some(x), _) => x.display("λ"),
                (None, _) => "n/a".to_string(),
            };
            Record::new().with("case", label).with("d", d).with("delta", delta).with("validity", validity)
        })
        .collect();
    render::render(&records, f, &["delta"])
}

#[allow(clippy::too_many_arguments)]
fn cmd_threefold(
    engine: &Engine,
    kind: Kind,
    s: Option<u32>,
    m: u32,
    lambda: &Rational,
    cone: Option<&str>,
    delta2d: Option<&Rational>,
    f: Format,
) -> Result<String, Failure> {
    let s = match (kind, s) {
        (Kind::Quadric, _) => 0,
        (_, Some(s)) => s,
        (_, None) => return Err(Failure::Invalid("--s is required for smooth and blowup".into())),
    };
    if kind == Kind::Smooth && m != 1 {
        return Err(Failure::Invalid("a smooth point has multiplicity 1".into()));
    }
    let cone_degree = if kind == Kind::Smooth { s } else { m };
    let cone_delta: Option<ConeDelta> = match cone {
        Some(case) => {
            engine.catalog().build_case(case, cone_degree).map_err(|e| {
                Failure::Invalid(format!("cone `{case}` does not fit a point of multiplicity {m}: {e}"))
            })?;
            Some(corollary::cone_delta(engine, case, cone_degree, lambda)?)
        }
        None => None,
    };
    let delta2 = match (&cone_delta, delta2d) {
        (Some(c), _) => c.value.clone(),
        (None, Some(v)) => v.clone(),
        (None, None) => unreachable!("clap requires --cone or --delta2d"),
    };
    let input = ThreefoldBoundInput { s, m, lambda: lambda.clone(), delta2d: delta2 };
    let r = corollary::evaluate(kind, input, cone_delta)?;
    Ok(threefold_output(&r, f))
}

fn threefold_output(r: &ThreefoldResult, f: Format) -> String {
    let yes = |b: bool| if b { "yes" } else { "no" };
    let note = if r.bound == int(1) { "bound not strict" } else { "" };
    let cone_kind = r.cone.as_ref().map(|c| if c.kind == ExpectedKind::LowerBound { "≥" } else { "=" });
    let record = Record::new()
        .with("kind", r.kind.name())
        .with("s", r.input.s)
        .with("m", r.input.m)
        .with("lambda", &r.input.lambda)
        .with("cone", r.cone.as_ref().map(|c| c.case.clone()))
        .with("delta2d", &r.input.delta2d)
        .with("delta2d_kind", cone_kind)
        .with("terms", Cell::List(r.terms.iter().map(format_rational).collect()))
        .with("bound", &r.bound)
        .with("k_stable_bound", yes(r.at_least_one()))
        .with("strict", r.strict())
        .with("note", note);
    match f {
        Format::Plain => {
            let mut s = format!("{} bound at λ = {}", r.kind.name(), format_rational(&r.input.lambda));
            if let Some(c) = &r.cone {
                let rel = if c.kind == ExpectedKind::LowerBound { "≥" } else { "=" };
                s += &format!(" (cone {} at d = {}: δ {rel} {})", c.case, c.degree, format_rational(&c.value));
            }
            s += &format!(
                "\nterms: {}\nbound: {}\nK-stable-bound: {}\nstrict: {}\n",
                r.terms.iter().map(format_rational).collect::<Vec<_>>().join(", "),
                format_rational(&r.bound),
                yes(r.at_least_one()),
                yes(r.strict())
            );
            if !note.is_empty() {
                s += &format!("note: {note}\n");
            }
            s
        }
        _ => render::render(&[record], f, &[]),
    }
}
