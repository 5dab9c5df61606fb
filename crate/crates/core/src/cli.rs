//! The `malus-hv` command line.
//!
//! Every subcommand writes its data file plus `<subcommand>.manifest.json`
//! into `--out`. The manifest records the arguments, so
//! `malus-hv replay --manifest <file>` regenerates the same bytes.
//!
//! Exit codes: 0 success, 2 usage or input error, 3 computational failure.

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bell::{chsh_classical_max, seesaw_max, Regime, SeesawConfig};
use crate::cascade::{beta_curve, read_measured, BetaSearch, CascadeModel, ChainRule};
use crate::convolution::{curve, degree_grid, deviation};
use crate::error::{domain, Error, Result};
use crate::fitting::{fit_p1, p1_from_report_json, params_json, FitConfig, FitForm, Objective};
use crate::model::{malus_raw, Angle, P1Params, P1};
use crate::quadrature::{QuadratureConfig, Rule};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_FAILURE: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "malus-hv",
    version,
    about = "Polarizer transmission models, fits, Bell bounds and cascades"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate p1, the convolution M(α) and the Malus law on a grid.
    Curve(CurveArgs),
    /// Fit p1 so that M(α) follows the Malus law.
    Fit(FitArgs),
    /// Maximal CHSH expectation for a commutation regime.
    Bell(BellArgs),
    /// Minimizing third-polarizer angle for each α.
    Cascade(CascadeArgs),
    /// Re-run the command recorded in a manifest.
    Replay(ReplayArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// `lo:hi:step` in degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl GridSpec {
    pub fn angles(&self) -> Vec<Angle> {
        degree_grid(self.lo, self.hi, self.step)
    }
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, step] = parts.as_slice() else {
            return Err(format!("expected lo:hi:step, got {s:?}"));
        };
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| format!("{t:?} is not a finite number"))
        };
        let g = GridSpec {
            lo: num(lo)?,
            hi: num(hi)?,
            step: num(step)?,
        };
        if !(g.step > 0.0) {
            return Err("step must be positive".into());
        }
        if g.hi < g.lo {
            return Err("hi must not be below lo".into());
        }
        if (g.hi - g.lo) / g.step > 1e6 {
            return Err("grid has more than a million points".into());
        }
        Ok(g)
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.lo, self.hi, self.step)
    }
}

/// Where the single-polarizer distribution comes from. Defaults to the
/// published parameters.
#[derive(Debug, Args)]
#[group(multiple = false)]
pub struct P1Source {
    /// a = 1.95, e = 3.56, c = 500.
    #[arg(long)]
    pub paper_params: bool,
    /// Explicit three-parameter form.
    #[arg(long, value_delimiter = ',', num_args = 3, value_names = ["A", "E", "C"])]
    pub params: Option<Vec<f64>>,
    /// p1(λ) = cos²λ.
    #[arg(long)]
    pub belinfante: bool,
    /// A report written by `fit`.
    #[arg(long, value_name = "REPORT")]
    pub fit: Option<PathBuf>,
}

impl P1Source {
    fn is_set(&self) -> bool {
        self.paper_params || self.params.is_some() || self.belinfante || self.fit.is_some()
    }

    fn resolve(&self) -> Result<(P1, Value)> {
        if let Some(v) = &self.params {
            let p = P1Params::new(v[0], v[1], v[2])?;
            let p1 = P1::Parametric(p);
            return Ok((
                p1.clone(),
                json!({ "source": "params", "params": params_json(&p1) }),
            ));
        }
        if self.belinfante {
            return Ok((P1::Belinfante, json!({ "source": "belinfante" })));
        }
        if let Some(path) = &self.fit {
            let p1 = read_fit_report(path)?;
            let described = json!({
                "source": "fit",
                "path": path.to_string_lossy(),
                "form": p1.label(),
                "params": params_json(&p1),
            });
            return Ok((p1, described));
        }
        let p1 = P1::Parametric(P1Params::PUBLISHED);
        Ok((
            p1.clone(),
            json!({ "source": "published", "params": params_json(&p1) }),
        ))
    }
}

fn read_fit_report(path: &Path) -> Result<P1> {
    let input = |message: String| Error::Input {
        path: path.to_path_buf(),
        message,
    };
    let text = std::fs::read_to_string(path).map_err(|e| input(e.to_string()))?;
    p1_from_report_json(&text).map_err(|e| input(e.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RuleArg {
    CompositeSimpson,
    GaussLegendre,
}

#[derive(Debug, Args)]
pub struct QuadArgs {
    /// Panel count (Simpson) or node count (Gauss-Legendre) [default: 256].
    #[arg(long)]
    pub nodes: Option<usize>,
    /// [default: composite-simpson]
    #[arg(long, value_enum)]
    pub rule: Option<RuleArg>,
}

impl QuadArgs {
    fn is_set(&self) -> bool {
        self.nodes.is_some() || self.rule.is_some()
    }

    fn resolve(&self) -> Result<QuadratureConfig> {
        let mut cfg = QuadratureConfig::default();
        if let Some(n) = self.nodes {
            cfg.node_count = n;
        }
        if let Some(r) = self.rule {
            cfg.rule = match r {
                RuleArg::CompositeSimpson => Rule::CompositeSimpson,
                RuleArg::GaussLegendre => Rule::GaussLegendre,
            };
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value = "0:90:1")]
    pub grid: GridSpec,
    #[command(flatten)]
    pub p1: P1Source,
    #[command(flatten)]
    pub quadrature: QuadArgs,
    /// Leakage ε of the Malus reference column.
    #[arg(long, default_value_t = 0.0)]
    pub epsilon: f64,
    /// Report M(α) without dividing by M(0).
    #[arg(long)]
    pub raw: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormArg {
    ThreeParam,
    Flexible,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ObjectiveArg {
    Rms,
    MaxAbs,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value = "0:90:1")]
    pub grid: GridSpec,
    #[arg(long, value_enum, default_value_t = FormArg::ThreeParam)]
    pub form: FormArg,
    /// Knot count of the flexible form [default: 10].
    #[arg(long)]
    pub knots: Option<usize>,
    #[arg(long, value_enum, default_value_t = ObjectiveArg::Rms)]
    pub objective: ObjectiveArg,
    /// Leakage ε of the Malus target.
    #[arg(long, default_value_t = 0.0)]
    pub target_epsilon: f64,
    #[arg(long, default_value_t = 2000)]
    pub max_iterations: usize,
    #[arg(long, default_value_t = 4)]
    pub restarts: usize,
    #[command(flatten)]
    pub quadrature: QuadArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RegimeArg {
    Classical,
    HiddenVariable,
    Copenhagen,
}

#[derive(Debug, Args)]
pub struct BellArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum)]
    pub regime: RegimeArg,
    /// Per-factor dimension (hidden-variable) or total dimension (copenhagen).
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub restarts: Option<usize>,
    /// Include the maximizing observables and state in the JSON.
    #[arg(long)]
    pub witness: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Ideal,
    Real,
    Hv,
}

#[derive(Debug, Args)]
pub struct CascadeArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum)]
    pub model: ModelArg,
    /// α values, `lo:hi:step` in degrees [default: 0:90:5].
    #[arg(long, visible_alias = "grid")]
    pub alphas: Option<GridSpec>,
    /// Polarizer leakage ε (real model) [default: 0].
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Additive constant (real model) [default: 0].
    #[arg(long)]
    pub offset: Option<f64>,
    #[command(flatten)]
    pub p1: P1Source,
    #[command(flatten)]
    pub quadrature: QuadArgs,
    /// Coarse β step in degrees.
    #[arg(long, default_value_t = 0.5)]
    pub step: f64,
    /// Golden-section tolerance in degrees.
    #[arg(long, default_value_t = 0.01)]
    pub refine_tol: f64,
    /// CSV with header `alpha_deg,beta_deg,transmission`; its α values
    /// replace `--alphas` and residual columns are added.
    #[arg(long, value_name = "CSV")]
    pub measured: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    /// Output directory [default: the manifest's directory].
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Written beside every output as `<subcommand>.manifest.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub version: String,
    pub seed: u64,
    /// Command-line arguments after the program name, without `--out`.
    pub args: Vec<String>,
    pub params: Value,
    /// File names relative to the output directory.
    pub outputs: Vec<String>,
}

/// Parse `args` (including the program name), run, and return the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let argv: Vec<String> = args
        .into_iter()
        .map(|a| a.into().to_string_lossy().into_owned())
        .collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let recorded = strip_out(argv.get(1..).unwrap_or_default());
    match execute(cli.command, recorded) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Exit code for a failed run.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Domain(_) | Error::Input { .. } => EXIT_USAGE,
        Error::Evaluation { .. }
        | Error::SimplexInit
        | Error::Fit(_)
        | Error::Io(_)
        | Error::Json(_) => EXIT_FAILURE,
    }
}

fn strip_out(args: &[String]) -> Vec<String> {
    let mut kept = Vec::with_capacity(args.len());
    let mut skip = false;
    for a in args {
        if skip {
            skip = false;
        } else if a == "--out" {
            skip = true;
        } else if !a.starts_with("--out=") {
            kept.push(a.clone());
        }
    }
    kept
}

fn execute(command: Command, recorded: Vec<String>) -> Result<()> {
    match command {
        Command::Curve(a) => cmd_curve(a, recorded),
        Command::Fit(a) => cmd_fit(a, recorded),
        Command::Bell(a) => cmd_bell(a, recorded),
        Command::Cascade(a) => cmd_cascade(a, recorded),
        Command::Replay(a) => cmd_replay(a),
    }
}

fn cmd_curve(a: CurveArgs, recorded: Vec<String>) -> Result<()> {
    let (p1, source) = a.p1.resolve()?;
    let quadrature = a.quadrature.resolve()?;
    if !(0.0..1.0).contains(&a.epsilon) {
        return Err(domain(format!("epsilon {} outside [0, 1)", a.epsilon)));
    }
    let grid = a.grid.angles();
    let c = curve(&p1, &grid, &quadrature, !a.raw)?;
    for (angle, w) in &c.warnings {
        eprintln!(
            "warning: quadrature changed by {:.3e} at {:.6}° on doubling",
            w.change,
            angle.degrees()
        );
    }

    let mut table = Table::new(&["angle_deg", "p1", "convolved", "malus", "residual"]);
    for &(angle, value) in &c.points {
        let m = malus_raw(angle.radians(), a.epsilon);
        table.row(&[
            deg6(angle),
            prob9(p1.eval_angle(angle)),
            prob9(value),
            prob9(m),
            prob9(value - m),
        ]);
    }
    write_atomic(&a.common.out, "curve.csv", &table.finish()?)?;
    if !c.is_empty() {
        let d = deviation(&c, a.epsilon)?;
        println!(
            "{} points, rms {:.6}, max |residual| {:.6} at {:.6}°",
            c.len(),
            d.rms,
            d.max_abs,
            d.argmax.degrees()
        );
    }

    let params = json!({
        "grid": a.grid.to_string(),
        "p1": source,
        "quadrature": quadrature,
        "epsilon": a.epsilon,
        "normalized": !a.raw,
    });
    write_manifest(&a.common, "curve", recorded, params, &["curve.csv"])
}

fn cmd_fit(a: FitArgs, recorded: Vec<String>) -> Result<()> {
    let form = match (a.form, a.knots) {
        (FormArg::ThreeParam, Some(_)) => {
            return Err(domain("--knots applies only to --form flexible"))
        }
        (FormArg::ThreeParam, None) => FitForm::three_param(),
        (FormArg::Flexible, k) => FitForm::flexible(k.unwrap_or(10)),
    };
    let cfg = FitConfig {
        objective: match a.objective {
            ObjectiveArg::Rms => Objective::Rms,
            ObjectiveArg::MaxAbs => Objective::MaxAbs,
        },
        grid: a.grid.angles(),
        target_epsilon: a.target_epsilon,
        max_iterations: a.max_iterations,
        restarts: a.restarts,
        seed: a.common.seed,
        quadrature: a.quadrature.resolve()?,
        ..FitConfig::default()
    };
    cfg.validate()?;
    let report = fit_p1(&form, &cfg)?;
    if !report.converged {
        eprintln!(
            "warning: simplex did not converge within {} iterations; reporting the best point found",
            cfg.max_iterations
        );
    }
    let mut text = report.to_json()?;
    text.push('\n');
    write_atomic(&a.common.out, "fit.json", text.as_bytes())?;
    println!(
        "{}: rms {:.6}, max |residual| {:.6} (start {:.6}), {} iterations",
        report.form,
        report.residual_rms,
        report.residual_max,
        report.initial_objective,
        report.iterations
    );

    let knots = match form {
        FitForm::Flexible { knots, .. } => Some(knots),
        FitForm::ThreeParam { .. } => None,
    };
    let params = json!({
        "form": form.label(),
        "knots": knots,
        "grid": a.grid.to_string(),
        "objective": cfg.objective,
        "target_epsilon": cfg.target_epsilon,
        "max_iterations": cfg.max_iterations,
        "simplex_tolerance": cfg.simplex_tolerance,
        "restarts": cfg.restarts,
        "quadrature": cfg.quadrature,
    });
    write_manifest(&a.common, "fit", recorded, params, &["fit.json"])
}

fn cmd_bell(a: BellArgs, recorded: Vec<String>) -> Result<()> {
    let regime = match a.regime {
        RegimeArg::Classical => Regime::Classical,
        RegimeArg::HiddenVariable => Regime::HiddenVariable,
        RegimeArg::Copenhagen => Regime::CopenhagenQm,
    };
    let estimate = if regime == Regime::Classical {
        if a.dim.is_some() || a.restarts.is_some() {
            return Err(domain(
                "--dim and --restarts do not apply to the classical regime",
            ));
        }
        chsh_classical_max()
    } else {
        let mut cfg = SeesawConfig::new(regime);
        cfg.seed = a.common.seed;
        if let Some(d) = a.dim {
            cfg.dimension = d;
        }
        if let Some(r) = a.restarts {
            cfg.restarts = r;
        }
        seesaw_max(&cfg)?
    };
    let mut text = estimate.to_json(a.witness)?;
    text.push('\n');
    write_atomic(&a.common.out, "bell.json", text.as_bytes())?;
    println!(
        "{}: attained {:.9}, limit {:.9}, gap {:.3e}",
        regime.name(),
        estimate.attained,
        estimate.limit,
        estimate.limit - estimate.attained
    );

    let params = json!({
        "regime": regime,
        "dimension": estimate.dimension,
        "restarts": estimate.restarts,
        "witness": a.witness,
    });
    write_manifest(&a.common, "bell", recorded, params, &["bell.json"])
}

fn cmd_cascade(a: CascadeArgs, recorded: Vec<String>) -> Result<()> {
    let hv_only = a.p1.is_set() || a.quadrature.is_set();
    let real_only = a.epsilon.is_some() || a.offset.is_some();
    let (model, model_json) = match a.model {
        ModelArg::Ideal | ModelArg::Hv if real_only => {
            return Err(domain("--epsilon and --offset apply only to --model real"))
        }
        ModelArg::Ideal | ModelArg::Real if hv_only => {
            return Err(domain("p1 and quadrature flags apply only to --model hv"))
        }
        ModelArg::Ideal => (CascadeModel::IdealQm, json!({ "kind": "ideal" })),
        ModelArg::Real => {
            let (epsilon, offset) = (a.epsilon.unwrap_or(0.0), a.offset.unwrap_or(0.0));
            (
                CascadeModel::RealQm { epsilon, offset },
                json!({ "kind": "real", "epsilon": epsilon, "offset": offset }),
            )
        }
        ModelArg::Hv => {
            let (p1, source) = a.p1.resolve()?;
            let quadrature = a.quadrature.resolve()?;
            let rule = ChainRule::Redistribute;
            (
                CascadeModel::HiddenVariable {
                    p1,
                    rule,
                    quadrature,
                },
                json!({ "kind": "hv", "p1": source, "rule": rule.name(), "quadrature": quadrature }),
            )
        }
    };
    model.validate()?;

    let search = BetaSearch {
        grid_step: Angle::from_degrees(a.step),
        refine_tol: Angle::from_degrees(a.refine_tol),
    };
    let measured = match (&a.measured, a.alphas) {
        (Some(_), Some(_)) => return Err(domain("--measured and --alphas are mutually exclusive")),
        (Some(path), None) => Some(read_measured(path)?),
        (None, _) => None,
    };
    let alpha_spec = a.alphas.unwrap_or(GridSpec {
        lo: 0.0,
        hi: 90.0,
        step: 5.0,
    });
    let alphas: Vec<Angle> = match &measured {
        Some(points) => points.iter().map(|p| p.alpha).collect(),
        None => alpha_spec.angles(),
    };
    let results = beta_curve(&model, &alphas, &search)?;

    let mut header = vec!["alpha_deg", "beta_min_deg", "t_min"];
    if measured.is_some() {
        header.extend([
            "beta_measured_deg",
            "t_measured",
            "beta_residual_deg",
            "t_residual",
        ]);
    }
    let mut table = Table::new(&header);
    for (i, r) in results.iter().enumerate() {
        let mut row = vec![deg6(r.alpha), deg6(r.beta_min), prob9(r.t_min)];
        if let Some(points) = &measured {
            let p = points[i];
            // Axis angles: fold the β difference into [-90°, 90°).
            let db = (p.beta.degrees() - r.beta_min.degrees() + 90.0).rem_euclid(180.0) - 90.0;
            row.extend([
                deg6(p.beta),
                prob9(p.transmission),
                fixed(db, 6),
                prob9(p.transmission - r.t_min),
            ]);
        }
        table.row(&row);
    }
    write_atomic(&a.common.out, "cascade.csv", &table.finish()?)?;
    println!("{} α values, model {}", results.len(), model.name());

    let params = json!({
        "model": model_json,
        "alphas": match &a.measured {
            Some(path) => json!({ "measured": path.to_string_lossy() }),
            None => json!(alpha_spec.to_string()),
        },
        "step_deg": a.step,
        "refine_tol_deg": a.refine_tol,
    });
    write_manifest(&a.common, "cascade", recorded, params, &["cascade.csv"])
}

fn cmd_replay(a: ReplayArgs) -> Result<()> {
    let input = |message: String| Error::Input {
        path: a.manifest.clone(),
        message,
    };
    let text = std::fs::read_to_string(&a.manifest).map_err(|e| input(e.to_string()))?;
    let manifest: RunManifest = serde_json::from_str(&text).map_err(|e| input(e.to_string()))?;
    if manifest.args.first().map(String::as_str) != Some(manifest.subcommand.as_str())
        || manifest.subcommand == "replay"
    {
        return Err(input(
            "manifest arguments do not match its subcommand".into(),
        ));
    }
    if manifest.version != env!("CARGO_PKG_VERSION") {
        eprintln!(
            "warning: manifest written by version {}, replaying with {}",
            manifest.version,
            env!("CARGO_PKG_VERSION")
        );
    }
    let out = match a.out {
        Some(dir) => dir,
        None => match a.manifest.parent() {
            Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
            _ => PathBuf::from("."),
        },
    };
    let argv = std::iter::once("malus-hv".to_string())
        .chain(manifest.args.iter().cloned())
        .chain(["--out".to_string(), out.to_string_lossy().into_owned()]);
    let cli = Cli::try_parse_from(argv).map_err(|e| input(e.to_string()))?;
    execute(cli.command, manifest.args)
}

fn write_manifest(
    common: &Common,
    name: &str,
    args: Vec<String>,
    params: Value,
    outputs: &[&str],
) -> Result<()> {
    let manifest = RunManifest {
        subcommand: name.to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        seed: common.seed,
        args,
        params,
        outputs: outputs.iter().map(|s| s.to_string()).collect(),
    };
    let mut text = serde_json::to_string_pretty(&manifest)?;
    text.push('\n');
    write_atomic(
        &common.out,
        &format!("{name}.manifest.json"),
        text.as_bytes(),
    )
}

/// Write through a temporary file in the same directory, then rename.
fn write_atomic(dir: &Path, name: &str, bytes: &[u8]) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(dir.join(name)).map_err(|e| e.error)?;
    Ok(())
}

struct Table {
    writer: csv::Writer<Vec<u8>>,
    error: Option<csv::Error>,
}

impl Table {
    fn new(header: &[&str]) -> Self {
        let mut writer = csv::Writer::from_writer(Vec::new());
        let error = writer.write_record(header).err();
        Table { writer, error }
    }

    fn row(&mut self, fields: &[String]) {
        if self.error.is_none() {
            self.error = self.writer.write_record(fields).err();
        }
    }

    fn finish(self) -> Result<Vec<u8>> {
        if let Some(e) = self.error {
            return Err(std::io::Error::other(e).into());
        }
        self.writer
            .into_inner()
            .map_err(|e| std::io::Error::other(e.to_string()).into())
    }
}

/// Fixed decimals, with negative zero printed as zero.
pub fn fixed(x: f64, places: usize) -> String {
    let s = format!("{x:.places$}");
    match s.strip_prefix('-') {
        Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => rest.to_string(),
        _ => s,
    }
}

fn deg6(a: Angle) -> String {
    fixed(a.degrees(), 6)
}

fn prob9(x: f64) -> String {
    fixed(x, 9)
}
