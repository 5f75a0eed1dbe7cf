//! Command-line front end.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use ford_rank1_core::ford::{
    compute_region_from, enumerate, reduce, FordRegion, GroupSpec, ReduceError, Tolerances, VerifyOptions,
    DEFAULT_BUDGET,
};
use ford_rank1_core::isometries::{bruhat_decompose_with_phase, q_residual, MatrixLift, FORM_TOL};
use ford_rank1_core::models::HPoint;
use ford_rank1_core::spheres::isometric_sphere;
use ford_rank1_core::Field;
use serde_json::{json, Value};

use crate::error::{exit, CliError};
use crate::format::{self, RawSpec};
use crate::render::{self, Axis, Model, RenderOptions};
use crate::{invariants, parallel};

#[derive(Parser, Debug)]
#[command(name = "ford-rank1", version, about = "Ford fundamental regions for rank-one hyperbolic spaces")]
pub struct Cli {
    /// Tolerance override `KEY=VALUE`; keys: sphere_band, slab_band, dedup, height_slack.
    #[arg(long = "tolerance", global = true, value_name = "KEY=VALUE")]
    pub tolerance: Vec<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct TruncationArgs {
    /// Maximal word length of the enumeration (overrides the spec).
    #[arg(long)]
    pub word_length: Option<usize>,
    /// Spheres below this radius are dropped (overrides the spec).
    #[arg(long)]
    pub min_radius: Option<f64>,
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Group spec JSON.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// Region JSON written by `region`.
    #[arg(long)]
    pub region: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelArg {
    Siegel,
    Upper,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check that every generator preserves the form and lies in the
    /// restricted group, and that stabilizer labels are right.
    Validate { spec: PathBuf },
    /// Bruhat decomposition of a matrix.
    Decompose {
        #[arg(long)]
        field: String,
        /// Matrix JSON, or `@path` to read it from a file.
        #[arg(long)]
        matrix: String,
    },
    /// Isometric spheres of every enumerated element, largest first.
    Spheres {
        spec: PathBuf,
        #[command(flatten)]
        truncation: TruncationArgs,
    },
    /// The truncated Ford region.
    Region {
        spec: PathBuf,
        #[command(flatten)]
        truncation: TruncationArgs,
        /// Write the region here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Membership of a point: Inside, Boundary or Outside.
    Contains {
        #[command(flatten)]
        source: Source,
        /// Point JSON or shorthand such as "(0.25,0)".
        #[arg(long)]
        point: String,
        #[command(flatten)]
        truncation: TruncationArgs,
    },
    /// Move a point into the region by height maximisation.
    Reduce {
        spec: PathBuf,
        #[arg(long)]
        point: String,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        #[command(flatten)]
        truncation: TruncationArgs,
    },
    /// Sample-based check of disjointness and covering.
    Verify {
        spec: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        /// Defaults to the seed in the spec.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        #[command(flatten)]
        truncation: TruncationArgs,
    },
    /// Sampled checks of the geometric identities.
    Invariants {
        #[arg(long)]
        field: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// SVG picture of the region on a 2-plane.
    Render {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value_t = ModelArg::Siegel)]
        model: ModelArg,
        /// Two axes among height, im1..im3, v0, v1, ...
        #[arg(long)]
        axes: Option<String>,
        /// x_min,x_max,y_min,y_max
        #[arg(long, allow_hyphen_values = true)]
        extent: Option<String>,
        #[arg(long, default_value_t = 256)]
        resolution: usize,
        /// Value of an off-plane coordinate, `AXIS=VALUE`.
        #[arg(long = "fix", value_name = "AXIS=VALUE")]
        fix: Vec<String>,
        #[arg(long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        truncation: TruncationArgs,
    },
}

/// What a command printed and how the process should exit.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub stdout: String,
    pub code: u8,
}

fn ok_json(v: &Value) -> Output {
    Output { stdout: format!("{}\n", serde_json::to_string_pretty(v).expect("serializable")), code: exit::OK }
}

pub fn tolerances(overrides: &[String]) -> Result<Tolerances, CliError> {
    let mut tol = Tolerances::default();
    for o in overrides {
        let (key, value) = o
            .split_once('=')
            .ok_or_else(|| CliError::input("config", format!("tolerance override '{o}' is not KEY=VALUE")))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| CliError::input("config", format!("tolerance '{key}': cannot read '{value}' as a number")))?;
        match key.trim() {
            "sphere_band" => tol.sphere_band = value,
            "slab_band" => tol.slab_band = value,
            "dedup" => tol.dedup = value,
            "height_slack" => tol.height_slack = value,
            other => return Err(CliError::input("config", format!("unknown tolerance '{other}'"))),
        }
    }
    tol.validate()?;
    Ok(tol)
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::io(&path.display().to_string(), e))
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::io(&path.display().to_string(), e))
}

fn load_spec(path: &Path, t: &TruncationArgs) -> Result<GroupSpec, CliError> {
    let mut spec = RawSpec::parse(&read(path)?)?.build()?;
    if let Some(l) = t.word_length {
        spec.word_length = l;
    }
    if let Some(r) = t.min_radius {
        if !(r >= 0.0 && r.is_finite()) {
            return Err(CliError::input("config", format!("min-radius must be non-negative, got {r}")));
        }
        spec.min_radius = r;
    }
    Ok(spec)
}

fn parse_point_arg(text: &str, field: Field, len: usize) -> Result<HPoint, CliError> {
    let t = text.trim();
    let v = if t.starts_with('{') || t.starts_with('"') { format::parse_json(t, "point")? } else { Value::String(t.into()) };
    format::parse_point(&v, field, len)
}

fn region_for(spec: &GroupSpec, tol: &Tolerances) -> Result<FordRegion, CliError> {
    Ok(compute_region_from(spec, &enumerate(spec, tol), tol)?)
}

/// Region from a spec or from a stored region file, with field and `n`.
fn load_region(source: &Source, t: &TruncationArgs, tol: &Tolerances) -> Result<(Field, usize, FordRegion), CliError> {
    match (&source.spec, &source.region) {
        (Some(spec), _) => {
            let spec = load_spec(spec, t)?;
            Ok((spec.field, spec.n, region_for(&spec, tol)?))
        }
        (None, Some(region)) => format::parse_region(&read(region)?),
        (None, None) => Err(CliError::input("usage", "one of --spec or --region is required")),
    }
}

fn validate(path: &Path) -> Result<Output, CliError> {
    let raw = RawSpec::parse(&read(path)?)?;
    let mut ok = true;
    let mut gens = Vec::new();
    for (label, m) in &raw.generators {
        let size = raw.n + 1;
        let mut entry = json!({"label": label});
        if m.rows() != size {
            ok = false;
            entry["error"] = json!(format!("expected a {size}x{size} matrix, got {0}x{0}", m.rows()));
            gens.push(entry);
            continue;
        }
        let residual = q_residual(m);
        entry["q_residual"] = json!(residual);
        if residual > FORM_TOL {
            ok = false;
            entry["error"] = json!(format!("does not preserve the form: residual {residual:e} exceeds {FORM_TOL:e}"));
            gens.push(entry);
            continue;
        }
        let lift = MatrixLift::new(m.clone())?;
        entry["fixes_infinity"] = json!(lift.fixes_infinity());
        entry["declared_stabilizer"] = json!(raw.stabilizer_labels.contains(label));
        match bruhat_decompose_with_phase(&lift) {
            Ok((b, _)) => {
                entry["radius"] = json!(b.radius());
            }
            Err(e) => {
                ok = false;
                entry["error"] = json!(e.to_string());
            }
        }
        gens.push(entry);
    }
    let mut report = json!({"generators": gens});
    if ok {
        if let Err(e) = raw.build() {
            ok = false;
            report["error"] = json!(e.to_string());
        }
    }
    report["valid"] = json!(ok);
    let mut out = ok_json(&report);
    if !ok {
        out.code = exit::VERIFICATION_FAILED;
    }
    Ok(out)
}

fn decompose(field: &str, matrix: &str) -> Result<Output, CliError> {
    let field = format::field_from_tag(field)?;
    let text = match matrix.strip_prefix('@') {
        Some(path) => read(Path::new(path))?,
        None => matrix.to_string(),
    };
    let m = format::parse_matrix(&format::parse_json(&text, "matrix")?, field)?;
    let residual = q_residual(&m);
    let lift = MatrixLift::new(m)?;
    let (b, phase) = bruhat_decompose_with_phase(&lift)?;
    let mut v = format::bruhat_json(&b, &phase);
    v["q_residual"] = json!(residual);
    v["fixes_infinity"] = json!(lift.fixes_infinity());
    Ok(ok_json(&v))
}

fn spheres(path: &Path, t: &TruncationArgs, tol: &Tolerances) -> Result<Output, CliError> {
    let spec = load_spec(path, t)?;
    let en = enumerate(&spec, tol);
    let mut list = Vec::new();
    for e in en.general() {
        list.push(isometric_sphere(&e.lift)?.with_word(e.label.clone()));
    }
    list.sort_by(|a, b| b.radius.total_cmp(&a.radius).then_with(|| a.word.cmp(&b.word)));
    Ok(ok_json(&json!({
        "spheres": list.iter().map(format::sphere_json).collect::<Vec<_>>(),
        "elements": en.elements.len(),
        "stabilizer_elements": en.stabilizers().count(),
        "duplicates": en.duplicates,
    })))
}

fn region(path: &Path, t: &TruncationArgs, output: Option<&Path>, tol: &Tolerances) -> Result<Output, CliError> {
    let spec = load_spec(path, t)?;
    let r = region_for(&spec, tol)?;
    let mut v = format::region_json(spec.field, spec.n, &r);
    v["radius_stats"] = format::radius_stats_json(&r.radius_stats());
    let out = ok_json(&v);
    match output {
        Some(p) => {
            write(p, &out.stdout)?;
            Ok(Output { stdout: String::new(), code: exit::OK })
        }
        None => Ok(out),
    }
}

fn contains(source: &Source, point: &str, t: &TruncationArgs, tol: &Tolerances) -> Result<Output, CliError> {
    let (field, n, region) = load_region(source, t, tol)?;
    let z = parse_point_arg(point, field, n - 1)?;
    let c = region.contains(&z, tol)?;
    Ok(ok_json(&json!({"membership": c.membership.to_string(), "word": c.word})))
}

fn reduce_cmd(path: &Path, point: &str, budget: usize, t: &TruncationArgs, tol: &Tolerances) -> Result<Output, CliError> {
    let spec = load_spec(path, t)?;
    let region = region_for(&spec, tol)?;
    let z = parse_point_arg(point, spec.field, spec.v_len())?;
    match reduce(&spec, &region, &z, budget, tol) {
        Ok(r) => Ok(ok_json(&format::reduction_json(&spec, &r))),
        Err(ReduceError::BudgetExhausted(r)) => Err(CliError::Budget {
            message: format!("reduction budget of {budget} sphere moves exhausted"),
            partial: format::reduction_json(&spec, &r),
        }),
        Err(ReduceError::Failed(e)) => Err(e.into()),
    }
}

fn verify(
    path: &Path,
    samples: usize,
    seed: Option<u64>,
    budget: usize,
    t: &TruncationArgs,
    tol: &Tolerances,
) -> Result<Output, CliError> {
    let spec = load_spec(path, t)?;
    let region = region_for(&spec, tol)?;
    let opts = VerifyOptions { samples, seed: seed.unwrap_or(spec.seed), budget, ..VerifyOptions::default() };
    let report = parallel::verify_parallel(&spec, &region, tol, &opts, parallel::thread_cap()?)?;
    let mut v = format::report_json(&report);
    v["warnings"] = format::warnings_json(&region.warnings);
    let mut out = ok_json(&v);
    if !report.passed() {
        out.code = exit::VERIFICATION_FAILED;
    }
    Ok(out)
}

fn invariants_cmd(field: &str, n: usize, samples: usize, seed: u64) -> Result<Output, CliError> {
    let field = format::field_from_tag(field)?;
    if n < 2 {
        return Err(CliError::input("config", "n must be at least 2"));
    }
    let checks = invariants::run(field, n, samples, seed);
    let passed = checks.iter().all(invariants::InvariantCheck::passed);
    let mut out = ok_json(&json!({
        "field": field.tag(), "n": n, "samples": samples, "seed": seed, "passed": passed,
        "checks": checks.iter().map(invariants::InvariantCheck::to_json).collect::<Vec<_>>(),
    }));
    if !passed {
        out.code = exit::VERIFICATION_FAILED;
    }
    Ok(out)
}

fn key_value(s: &str) -> Result<(&str, f64), CliError> {
    let (k, v) = s.split_once('=').ok_or_else(|| CliError::input("render", format!("'{s}' is not AXIS=VALUE")))?;
    let v = v.trim().parse().map_err(|_| CliError::input("render", format!("cannot read '{v}' as a number")))?;
    Ok((k, v))
}

#[allow(clippy::too_many_arguments)]
fn render_cmd(
    source: &Source,
    model: ModelArg,
    axes: Option<&str>,
    extent: Option<&str>,
    resolution: usize,
    fix: &[String],
    output: Option<&Path>,
    t: &TruncationArgs,
    tol: &Tolerances,
) -> Result<Output, CliError> {
    let (field, n, region) = load_region(source, t, tol)?;
    let model = match model {
        ModelArg::Siegel => Model::Siegel,
        ModelArg::Upper => Model::Upper,
    };
    let mut opts = RenderOptions::new(model, n - 1);
    opts.resolution = resolution;
    if let Some(a) = axes {
        let parts: Vec<&str> = a.split(',').collect();
        if parts.len() != 2 {
            return Err(CliError::input("render", "--axes takes exactly two axes"));
        }
        opts.axes = [Axis::parse(parts[0])?, Axis::parse(parts[1])?];
    }
    if let Some(e) = extent {
        let xs: Vec<f64> = e
            .split(',')
            .map(|x| x.trim().parse().map_err(|_| CliError::input("render", format!("cannot read extent '{e}'"))))
            .collect::<Result<_, _>>()?;
        opts.extent = xs.try_into().map_err(|_| CliError::input("render", "--extent takes four numbers"))?;
    }
    for f in fix {
        let (k, v) = key_value(f)?;
        opts.fixed.push((Axis::parse(k)?, v));
    }
    let svg = render::render_svg(&region, field, n - 1, &opts)?;
    match output {
        Some(p) => {
            write(p, &svg)?;
            Ok(Output { stdout: String::new(), code: exit::OK })
        }
        None => Ok(Output { stdout: svg, code: exit::OK }),
    }
}

pub fn execute(cli: &Cli) -> Result<Output, CliError> {
    let tol = tolerances(&cli.tolerance)?;
    match &cli.command {
        Command::Validate { spec } => validate(spec),
        Command::Decompose { field, matrix } => decompose(field, matrix),
        Command::Spheres { spec, truncation } => spheres(spec, truncation, &tol),
        Command::Region { spec, truncation, output } => region(spec, truncation, output.as_deref(), &tol),
        Command::Contains { source, point, truncation } => contains(source, point, truncation, &tol),
        Command::Reduce { spec, point, budget, truncation } => reduce_cmd(spec, point, *budget, truncation, &tol),
        Command::Verify { spec, samples, seed, budget, truncation } => {
            verify(spec, *samples, *seed, *budget, truncation, &tol)
        }
        Command::Invariants { field, n, samples, seed } => invariants_cmd(field, *n, *samples, *seed),
        Command::Render { source, model, axes, extent, resolution, fix, output, truncation } => render_cmd(
            source,
            *model,
            axes.as_deref(),
            extent.as_deref(),
            *resolution,
            fix,
            output.as_deref(),
            truncation,
            &tol,
        ),
    }
}

/// Parses arguments and runs; errors are reported as JSON on stderr. Returns
/// the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn std::io::Write, stderr: &mut dyn std::io::Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { exit::INPUT } else { exit::OK };
            if code == exit::OK {
                let _ = write!(stdout, "{e}");
            } else {
                let _ = write!(stderr, "{e}");
            }
            return code;
        }
    };
    match execute(&cli) {
        Ok(out) => {
            let _ = stdout.write_all(out.stdout.as_bytes());
            out.code
        }
        Err(e) => {
            let _ = writeln!(stderr, "{}", e.to_json());
            e.exit_code()
        }
    }
}
