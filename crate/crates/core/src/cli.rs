//! Command-line front end: argument parsing, dispatch to the library, and
//! report emission. Exit codes: 0 clean, 1 violations, 2 usage or input error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::jacobian::{gamma_preset, jacobian_demo, SampleConfig};
use crate::morphisms::{
    classify_twists, solve_endo, untwist, Classification, ClassifiedFamily, ConstraintSource,
    FamilyClass,
};
use crate::oper::{
    cfz_recovery_numeric, larsson_fi_scan, verify_lars_relations, verify_s_identity,
};
use crate::scalar::{parse_scalar, Bindings, GaussianRational, Symbol, SymbolicScalar};
use crate::ternary::identity::algebra_label;
use crate::ternary::{brute_force_window, verify_identity_symbolic, Algebra, QParam, TwistPair};
use crate::vw::{beta_twist, cfz_algebra, naive_witt_algebra, qvw_algebra, scaling_twist};

pub const EXIT_CLEAN: i32 = 0;
pub const EXIT_VIOLATIONS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Keyword that leaves a parameter free.
const SYMBOLIC: &str = "symbolic";

#[derive(Debug, Parser)]
#[command(
    name = "nambu",
    version,
    about = "Exact checks for ternary Nambu-Lie algebras of Virasoro-Witt type"
)]
pub struct Cli {
    /// Report format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckMode {
    Symbolic,
    Window,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the (Hom-)Nambu identity for an algebra and optional twist
    Verify(VerifyArgs),
    /// Classify twisting pairs within the geometric ansatz
    Classify(ClassifyArgs),
    /// Solve for diagonal endomorphisms
    SolveEndo(SolveEndoArgs),
    /// Recover a Nambu-Lie bracket from an invertible symmetric twist
    Untwist(UntwistArgs),
    /// Check the differential-operator realization
    Realize(RealizeArgs),
    /// Sample the Jacobian bracket on random polynomials
    JacobianDemo(JacobianArgs),
}

#[derive(Debug, Clone, Args)]
pub struct AlgebraArgs {
    /// cfz | qvw | witt
    #[arg(long)]
    pub algebra: String,

    /// Value of z, or `symbolic`
    #[arg(long, default_value = SYMBOLIC, allow_hyphen_values = true)]
    pub z: String,

    /// Value of q, or `symbolic`
    #[arg(long, default_value = SYMBOLIC, allow_hyphen_values = true)]
    pub q: String,
}

#[derive(Debug, Clone, Args)]
pub struct TwistArgs {
    /// none | identity | scaling | beta
    #[arg(long, default_value = "none")]
    pub twist: String,

    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub lambda1: String,

    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub lambda2: String,

    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub beta1: String,

    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub beta2: String,
}

#[derive(Debug, Clone, Args)]
pub struct SourceArgs {
    #[arg(long, value_enum, default_value_t = CheckMode::Symbolic)]
    pub mode: CheckMode,

    /// Inclusive degree window `a..b`, used in window mode
    #[arg(long, default_value = "-2..2", allow_hyphen_values = true)]
    pub window: String,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub algebra: AlgebraArgs,
    #[command(flatten)]
    pub twist: TwistArgs,
    #[command(flatten)]
    pub source: SourceArgs,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub algebra: AlgebraArgs,
    #[command(flatten)]
    pub source: SourceArgs,
}

#[derive(Debug, Args)]
pub struct SolveEndoArgs {
    #[command(flatten)]
    pub algebra: AlgebraArgs,
    #[command(flatten)]
    pub source: SourceArgs,
}

#[derive(Debug, Args)]
pub struct UntwistArgs {
    #[command(flatten)]
    pub algebra: AlgebraArgs,
    #[command(flatten)]
    pub twist: TwistArgs,
}

#[derive(Debug, Args)]
pub struct RealizeArgs {
    /// Real λ other than 0 and 1
    #[arg(long, default_value = "1/4", allow_hyphen_values = true)]
    pub lambda: String,

    #[arg(long, default_value = "-2..2", allow_hyphen_values = true)]
    pub window: String,

    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,

    /// Also scan the identity residuals of the commutator bracket on L and E
    #[arg(long)]
    pub scan: bool,
}

#[derive(Debug, Args)]
pub struct JacobianArgs {
    /// identity | shear
    #[arg(long, default_value = "shear")]
    pub gamma: String,

    #[arg(long, default_value_t = 200)]
    pub samples: usize,

    #[arg(long, default_value_t = 2)]
    pub degree: u32,

    /// Coefficients are drawn from `[-bound, bound]`
    #[arg(long, default_value_t = 3)]
    pub bound: i64,

    #[arg(long, default_value_t = SampleConfig::default().seed)]
    pub seed: u64,
}

/// `None` for the `symbolic` keyword.
fn parse_param(text: &str) -> Result<Option<SymbolicScalar>> {
    if text == SYMBOLIC {
        return Ok(None);
    }
    parse_scalar(text).map(Some)
}

fn parse_q(text: &str) -> Result<QParam> {
    match parse_param(text)? {
        None => Ok(QParam::Formal),
        Some(v) => {
            let c = v.as_constant().ok_or_else(|| {
                Error::Parse(format!("q must be a number or `{SYMBOLIC}`, got `{text}`"))
            })?;
            QParam::value(c)
        }
    }
}

fn parse_window(text: &str) -> Result<RangeInclusive<i64>> {
    let bad = || {
        Error::Parse(format!(
            "window must look like `a..b` with a <= b, got `{text}`"
        ))
    };
    let (a, b) = text.split_once("..").ok_or_else(bad)?;
    let a: i64 = a.trim().parse().map_err(|_| bad())?;
    let b: i64 = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok(a..=b)
}

fn parse_rational(text: &str) -> Result<GaussianRational> {
    parse_scalar(text)?
        .as_constant()
        .ok_or_else(|| Error::Parse(format!("expected a number, got `{text}`")))
}

impl AlgebraArgs {
    pub fn build(&self) -> Result<(Algebra, QParam)> {
        let z = parse_param(&self.z)?.unwrap_or_else(|| SymbolicScalar::param("z"));
        let q = parse_q(&self.q)?;
        let a = match self.algebra.as_str() {
            "cfz" => cfz_algebra(&z)?,
            "qvw" => qvw_algebra(&z, &q)?,
            "witt" => naive_witt_algebra(),
            other => {
                return Err(Error::UnknownName {
                    kind: "algebra",
                    name: other.into(),
                })
            }
        };
        Ok((a, q))
    }
}

impl TwistArgs {
    /// A free twist parameter is named after its flag.
    fn param(text: &str, name: &str) -> Result<SymbolicScalar> {
        Ok(parse_param(text)?.unwrap_or_else(|| SymbolicScalar::param(name)))
    }

    pub fn build(&self, a: &Algebra, q: &QParam) -> Result<Option<TwistPair>> {
        let p = Self::param;
        Ok(match self.twist.as_str() {
            "none" => None,
            "identity" => Some(TwistPair::identity(a.families())),
            "scaling" => Some(scaling_twist(
                &p(&self.lambda1, "lambda1")?,
                &p(&self.lambda2, "lambda2")?,
                q,
            )),
            "beta" => Some(beta_twist(
                &p(&self.beta1, "beta1")?,
                &p(&self.beta2, "beta2")?,
                q,
            )),
            other => {
                return Err(Error::UnknownName {
                    kind: "twist",
                    name: other.into(),
                })
            }
        })
    }
}

impl SourceArgs {
    pub fn build(&self) -> Result<ConstraintSource> {
        Ok(match self.mode {
            CheckMode::Symbolic => ConstraintSource::Symbolic,
            CheckMode::Window => ConstraintSource::Window(parse_window(&self.window)?),
        })
    }
}

/// A finished command: its JSON report, a human-readable rendering, and
/// whether anything failed.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Value,
    pub text: String,
    pub clean: bool,
}

impl Outcome {
    fn new(command: &str, body: impl Serialize, text: String, clean: bool) -> Self {
        let report = json!({
            "command": command,
            "clean": clean,
            "report": serde_json::to_value(body).expect("reports serialize"),
        });
        Outcome {
            report,
            text,
            clean,
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.clean {
            EXIT_CLEAN
        } else {
            EXIT_VIOLATIONS
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.report).expect("reports serialize");
                s.push('\n');
                s
            }
            Format::Text => self.text.clone(),
        }
    }
}

fn verify(args: &VerifyArgs) -> Result<Outcome> {
    let (a, q) = args.algebra.build()?;
    let t = args.twist.build(&a, &q)?;
    verify_outcome(&a, t.as_ref(), &args.source.build()?)
}

/// Checks the identity on `a`, optionally twisted. Window checks need every
/// parameter of `a` to be numeric.
pub fn verify_outcome(
    a: &Algebra,
    t: Option<&TwistPair>,
    source: &ConstraintSource,
) -> Result<Outcome> {
    let report = match source {
        ConstraintSource::Symbolic => verify_identity_symbolic(a, t)?,
        ConstraintSource::Window(window) => {
            let free = a.free_parameters();
            if !free.is_empty() {
                let names: Vec<String> = free.iter().map(ToString::to_string).collect();
                return Err(Error::Precondition(format!(
                    "window mode needs numeric values for: {}",
                    names.join(", ")
                )));
            }
            brute_force_window(a, t, window.clone(), &Bindings::new())?
        }
    };
    Ok(Outcome::new(
        "verify",
        &report,
        report.to_string(),
        report.is_clean(),
    ))
}

fn render_classification(c: &Classification, out: &mut String) {
    let _ = writeln!(out, "algebra: {}", c.algebra);
    let _ = writeln!(out, "ansatz:  {}", c.ansatz);
    let _ = writeln!(
        out,
        "constraints: {} ({})",
        c.constraints.len(),
        c.constraints.source
    );
    for (i, f) in c.families.iter().enumerate() {
        let class = serde_json::to_value(f.class).expect("class serializes");
        let verified = match f.solution.verified {
            Some(true) => "verified",
            Some(false) => "FAILED",
            None => "unchecked",
        };
        let shape = f.shape().map(|s| format!(" [{s}]")).unwrap_or_default();
        let _ = writeln!(
            out,
            "family {i}: {}{shape} {verified}",
            class.as_str().unwrap_or("?")
        );
        for (k, m) in f.maps.iter().enumerate() {
            let _ = writeln!(out, "  map {}: {m}", k + 1);
        }
        for cond in &f.solution.conditions {
            let _ = writeln!(out, "  needs: {cond} = 0");
        }
        for eq in &f.solution.unresolved {
            let _ = writeln!(out, "  unresolved: {eq} = 0");
        }
        if let Some(g) = &f.generic_condition {
            let _ = writeln!(out, "  generic condition: {g}");
        }
    }
}

/// Shapes of the nontrivial families, in report order.
fn nontrivial_shapes(c: &Classification) -> Vec<&'static str> {
    c.of_class(FamilyClass::Nontrivial)
        .filter_map(ClassifiedFamily::shape)
        .collect()
}

fn classify(args: &ClassifyArgs) -> Result<Outcome> {
    let (a, _) = args.algebra.build()?;
    classify_outcome(&a, &args.source.build()?)
}

pub fn classify_outcome(a: &Algebra, source: &ConstraintSource) -> Result<Outcome> {
    let c = classify_twists(a, source)?;
    let mut text = String::new();
    render_classification(&c, &mut text);
    let body = json!({ "nontrivial": nontrivial_shapes(&c), "classification": &c });
    Ok(Outcome::new("classify", body, text, c.all_verified()))
}

fn solve_endomorphisms(args: &SolveEndoArgs) -> Result<Outcome> {
    let (a, _) = args.algebra.build()?;
    solve_endo_outcome(&a, &args.source.build()?)
}

pub fn solve_endo_outcome(a: &Algebra, source: &ConstraintSource) -> Result<Outcome> {
    let cs = solve_endo(a, source)?;
    let mut text = String::new();
    for c in &cs {
        render_classification(c, &mut text);
    }
    let clean = cs.iter().all(Classification::all_verified);
    Ok(Outcome::new("solve-endo", &cs, text, clean))
}

#[derive(Serialize)]
struct UntwistBody {
    algebra: String,
    twist: String,
    untwistable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    untwisted: Option<String>,
    /// Brackets of the untwisted algebra on `(X_k, Y_m, Z_n)`.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    rules: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    equals_cfz: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    nilpotent_order: Option<u32>,
}

fn untwist_command(args: &UntwistArgs) -> Result<Outcome> {
    let (a, q) = args.algebra.build()?;
    let t = args
        .twist
        .build(&a, &q)?
        .ok_or_else(|| Error::Precondition("untwist needs --twist".into()))?;
    untwist_outcome(&a, &t)
}

/// Not being untwistable is a finding, not an error: it yields an unclean
/// outcome carrying the reason.
pub fn untwist_outcome(a: &Algebra, t: &TwistPair) -> Result<Outcome> {
    let mut body = UntwistBody {
        algebra: algebra_label(a),
        twist: t.name.clone(),
        untwistable: false,
        untwisted: None,
        rules: Vec::new(),
        equals_cfz: None,
        reason: None,
        nilpotent_order: None,
    };
    match untwist(a, t) {
        Ok(b) => {
            body.untwistable = true;
            body.untwisted = Some(b.name().to_string());
            body.rules = b
                .rule_table()?
                .into_iter()
                .map(|([f1, f2, f3], e)| format!("[{f1}_k, {f2}_m, {f3}_n] = {e}"))
                .collect();
            if a.name() != "witt" {
                let z = a
                    .specialization()
                    .params
                    .get(&Symbol::new("z"))
                    .cloned()
                    .unwrap_or_else(|| SymbolicScalar::param("z"));
                body.equals_cfz = Some(b.structurally_equal(&cfz_algebra(&z)?)?);
            }
        }
        Err(Error::NotUntwistable {
            reason,
            nilpotent_order,
        }) => {
            body.reason = Some(reason);
            body.nilpotent_order = nilpotent_order;
        }
        Err(e) => return Err(e),
    }
    let mut text = format!("algebra: {}\ntwist:   {}\n", body.algebra, body.twist);
    if body.untwistable {
        for r in &body.rules {
            let _ = writeln!(text, "  {r}");
        }
        if let Some(eq) = body.equals_cfz {
            let _ = writeln!(text, "equals cfz: {eq}");
        }
    } else {
        let _ = writeln!(
            text,
            "not untwistable: {}",
            body.reason.as_deref().unwrap_or("")
        );
        if let Some(n) = body.nilpotent_order {
            let _ = writeln!(text, "nilpotent of order {n}");
        }
    }
    let clean = body.untwistable;
    Ok(Outcome::new("untwist", &body, text, clean))
}

fn realize(args: &RealizeArgs) -> Result<Outcome> {
    let lambda = parse_rational(&args.lambda)?;
    realize_outcome(&lambda, parse_window(&args.window)?, args.tol, args.scan)
}

pub fn realize_outcome(
    lambda: &GaussianRational,
    window: RangeInclusive<i64>,
    tol: f64,
    scan: bool,
) -> Result<Outcome> {
    let lars = verify_lars_relations();
    let s = verify_s_identity()?;
    let recovery = cfz_recovery_numeric(lambda, window.clone(), tol)?;
    let scan = if scan {
        Some(larsson_fi_scan(Some(lambda), window)?)
    } else {
        None
    };
    let clean = lars.is_clean() && s.is_clean() && recovery.passed;

    let mut text = String::new();
    for c in lars.checks.iter().chain(&s.checks) {
        let _ = writeln!(
            text,
            "{:<28} {}",
            c.name,
            if c.clean { "ok" } else { &c.residual }
        );
    }
    let _ = writeln!(
        text,
        "recovery at lambda={} (tol {:e}):",
        recovery.lambda, recovery.tol
    );
    for d in &recovery.shapes {
        let _ = writeln!(
            text,
            "  {:<12} checked {:>5}  max deviation {:.3e}",
            d.shape, d.checked, d.max_deviation
        );
    }
    for e in scan.iter().flatten() {
        let _ = writeln!(
            text,
            "scan {:<32} symbolic zero: {:<5} window violations: {}",
            e.pattern, e.symbolic_zero, e.window_violations
        );
    }
    let body = json!({
        "relations": lars,
        "s_identity": s,
        "recovery": recovery,
        "scan": scan,
    });
    Ok(Outcome::new("realize", body, text, clean))
}

fn jacobian(args: &JacobianArgs) -> Result<Outcome> {
    let config = SampleConfig {
        samples: args.samples,
        degree: args.degree,
        bound: args.bound,
        seed: args.seed,
    };
    jacobian_outcome(&args.gamma, config)
}

/// `gamma` names a substitution preset.
pub fn jacobian_outcome(gamma: &str, config: SampleConfig) -> Result<Outcome> {
    let r = jacobian_demo(gamma_preset(gamma)?, config)?;
    let text = format!(
        "gamma: ({})\nsamples: {}  degree <= {}  coefficients in [-{b}, {b}]  seed {}\n\
         fundamental identity failures: {}\ntwisted identity failures: {}\n\
         antisymmetry failures: {}\ndeterminant multiplicativity failures: {}\n",
        r.gamma.join(", "),
        r.config.samples,
        r.config.degree,
        r.config.seed,
        r.fi_failures,
        r.hfi_failures,
        r.antisymmetry_failures,
        r.det_multiplicativity_failures,
        b = r.config.bound,
    );
    Ok(Outcome::new("jacobian-demo", &r, text, r.is_clean()))
}

/// Runs a parsed command on the current thread pool.
pub fn execute(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Verify(a) => verify(a),
        Command::Classify(a) => classify(a),
        Command::SolveEndo(a) => solve_endomorphisms(a),
        Command::Untwist(a) => untwist_command(a),
        Command::Realize(a) => realize(a),
        Command::JacobianDemo(a) => jacobian(a),
    }
}

/// Worker pool capped by `NAMBU_THREADS` when set.
fn thread_pool() -> std::result::Result<rayon::ThreadPool, String> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("NAMBU_THREADS") {
        let n: usize = v
            .parse()
            .ok()
            .filter(|n| *n > 0)
            .ok_or_else(|| format!("NAMBU_THREADS must be a positive integer, got `{v}`"))?;
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| e.to_string())
}

/// Parses `args` (program name first), runs the command and writes the
/// report. Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_CLEAN
            };
        }
    };
    let pool = match thread_pool() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let outcome = match pool.install(|| execute(&cli)) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let rendered = outcome.render(cli.format);
    let written = match &cli.out {
        Some(path) => {
            std::fs::write(path, rendered).map_err(|e| format!("{}: {e}", path.display()))
        }
        None => match std::io::stdout().write_all(rendered.as_bytes()) {
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
            r => r.map_err(|e| e.to_string()),
        },
    };
    if let Err(e) = written {
        eprintln!("error: cannot write report: {e}");
        return EXIT_USAGE;
    }
    outcome.exit_code()
}
