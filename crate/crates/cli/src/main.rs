//! `covariant`: command-line front end for covariant-core.
//!
//! Exit status is 0 on success, 1 on invalid input and 2 when a numerical
//! contract fails. Failures print one line on stderr:
//!
//! ```text
//! error: kind=<kind> message="<text>"
//! ```

use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use covariant_core::compositions::{
    default_hilbert_scales, hardy_littlewood, hardy_littlewood_centered, hilbert_pv, hilbert_via_conj_poisson,
    sokhotsky_boundary,
};
use covariant_core::covariant::{DEFAULT_A_COUNT, DEFAULT_A_MAX, DEFAULT_A_MIN};
use covariant_core::generators::{generate, Params};
use covariant_core::norms::{carleson_transform, hardy_norm_aff, transported_norm_contra, HalfPlaneMeasure};
use covariant_core::verify::{self, Suite};
use covariant_core::{
    contravariant, covariant, io, Error, Fiducial, FieldAxes, HalfPlaneField, Kernel, LogAxis, Pairing, RealGrid,
    RepIndex, Result, Signal, Vector,
};

/// Environment variable naming the directory that relative `--out` paths
/// resolve against.
const OUT_DIR_ENV: &str = "COVARIANT_OUT_DIR";

#[derive(Parser, Debug)]
#[command(name = "covariant", version, about = "Covariant and contravariant transforms on the ax+b group")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample a named test signal on a uniform grid.
    Gen(GenArgs),
    /// Covariant transform of a signal to a half-plane field.
    Transform(TransformArgs),
    /// Contravariant transform of a field back to a signal.
    Limit(LimitArgs),
    /// Sum of atoms from point masses on the group and a nucleus.
    Atoms(AtomsArgs),
    /// Hilbert transform.
    Hilbert(HilbertArgs),
    /// Hardy-Littlewood maximal function.
    Maximal(MaximalArgs),
    /// Boundary value ½(f + iHf) of the Cauchy integral.
    Boundary(BoundaryArgs),
    /// Norms of a half-plane field.
    Norm(NormArgs),
    /// Carleson box sums of a measure on the half-plane.
    Carleson(CarlesonArgs),
    /// Run the verification suite.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct GenArgs {
    /// Generator name (gaussian, mexican_hat, box, cos_window, cauchy_kernel,
    /// hardy, anti_hardy, poisson_kernel, band_limited, nucleus).
    #[arg(long)]
    expr: String,
    /// Generator parameter, repeatable.
    #[arg(long = "param", value_name = "KEY=VALUE")]
    params: Vec<String>,
    #[arg(long, default_value_t = -20.0, allow_hyphen_values = true)]
    x0: f64,
    #[arg(long, default_value_t = 0.01)]
    dx: f64,
    #[arg(long, default_value_t = 4000)]
    n: usize,
    #[arg(long, default_value = "signal.csv")]
    out: PathBuf,
}

/// Scale axis and optional translation grid of an output field.
#[derive(Args, Debug)]
struct AxesArgs {
    #[arg(long, default_value_t = DEFAULT_A_MIN)]
    a_min: f64,
    #[arg(long, default_value_t = DEFAULT_A_MAX)]
    a_max: f64,
    #[arg(long, default_value_t = DEFAULT_A_COUNT)]
    a_count: usize,
    /// First translation (default: the input grid).
    #[arg(long, allow_hyphen_values = true)]
    b_x0: Option<f64>,
    #[arg(long)]
    b_dx: Option<f64>,
    #[arg(long)]
    b_n: Option<usize>,
}

impl AxesArgs {
    fn axes(&self, default_b: Option<&RealGrid>) -> Result<FieldAxes> {
        let a = LogAxis::from_range(self.a_min, self.a_max, self.a_count)?;
        let b = match (self.b_x0, self.b_dx, self.b_n, default_b) {
            (Some(x0), Some(dx), Some(n), _) => RealGrid::new(x0, dx, n)?,
            (None, None, None, Some(g)) => *g,
            _ => return Err(usage("b-grid", "give all of --b-x0, --b-dx, --b-n")),
        };
        Ok(FieldAxes::new(a, b))
    }
}

#[derive(Args, Debug)]
struct TransformArgs {
    /// Builtin fiducial (cauchy_plus, cauchy_minus, poisson, conj_poisson,
    /// gaussian, mexican_hat, box_average, modulus_average, delta) or a
    /// kernel in signal CSV.
    #[arg(long)]
    fiducial: String,
    #[arg(long, default_value = "2")]
    p: String,
    #[arg(long)]
    input: PathBuf,
    #[command(flatten)]
    axes: AxesArgs,
    #[arg(long, default_value = "field.csv")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct LimitArgs {
    #[arg(long)]
    pairing: Pairing,
    /// vplus, vstar, a builtin kernel name, or a kernel in signal CSV.
    #[arg(long)]
    vector: String,
    #[arg(long)]
    field: PathBuf,
    /// Representation index (default: the field's `p`).
    #[arg(long)]
    p: Option<String>,
    #[arg(long, default_value = "limit.csv")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct AtomsArgs {
    /// JSON array of {lambda_re, lambda_im, a, b}.
    #[arg(long)]
    masses: PathBuf,
    /// Nucleus on [-1, 1] in signal CSV.
    #[arg(long)]
    nucleus: PathBuf,
    #[arg(long, default_value_t = 0.01)]
    dx: f64,
    #[arg(long, default_value = "atoms.csv")]
    out: PathBuf,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum HilbertMethod {
    Pv,
    ConjPoisson,
}

#[derive(Args, Debug)]
struct HilbertArgs {
    #[arg(long, value_enum, default_value_t = HilbertMethod::Pv)]
    method: HilbertMethod,
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value = "hilbert.csv")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct MaximalArgs {
    #[arg(long)]
    input: PathBuf,
    /// Centered balls instead of all intervals containing the point.
    #[arg(long)]
    centered: bool,
    #[arg(long, default_value = "maximal.csv")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct BoundaryArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value = "boundary.csv")]
    out: PathBuf,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum NormKind {
    HardyAff,
    Contra,
}

#[derive(Args, Debug)]
struct NormArgs {
    #[arg(long, value_enum)]
    kind: NormKind,
    #[arg(long)]
    field: PathBuf,
    /// Norm exponent for hardy-aff, representation index for contra
    /// (default: the field's `p`).
    #[arg(long)]
    p: Option<String>,
    #[arg(long, default_value = "hardyinf")]
    pairing: Pairing,
    #[arg(long, default_value = "vplus")]
    vector: String,
}

#[derive(Args, Debug)]
struct CarlesonArgs {
    /// Density in field CSV.
    #[arg(long)]
    measure: Option<PathBuf>,
    /// JSON array of {weight, a, b}.
    #[arg(long)]
    masses: Option<PathBuf>,
    /// Report whether the box sums stay below this bound.
    #[arg(long)]
    threshold: Option<f64>,
    #[command(flatten)]
    axes: AxesArgs,
    #[arg(long, default_value = "carleson.csv")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, default_value = "all")]
    suite: Suite,
    /// JSON report path.
    #[arg(long)]
    report: Option<PathBuf>,
}

fn usage(arg: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidArgument {
        arg,
        reason: reason.into(),
    }
}

fn parse_p(s: &str) -> Result<RepIndex> {
    match s.trim().to_ascii_lowercase().as_str() {
        "inf" | "infinity" | "∞" => Ok(RepIndex::INFINITY),
        t => {
            let p: f64 = t.parse().map_err(|_| usage("p", format!("not a number: `{s}`")))?;
            RepIndex::new(p)
        }
    }
}

fn field_p(u: &HalfPlaneField, flag: Option<&str>) -> Result<RepIndex> {
    match (flag, u.p()) {
        (Some(s), _) => parse_p(s),
        (None, Some(p)) => RepIndex::new(p),
        (None, None) => Err(usage("p", "the field carries no p; pass --p")),
    }
}

fn out_path(p: &Path) -> PathBuf {
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if p.is_relative() => Path::new(&dir).join(p),
        _ => p.to_path_buf(),
    }
}

fn read_signal(path: &Path) -> Result<Signal> {
    io::read_signal(io::open(path)?)
}

fn read_field(path: &Path) -> Result<HalfPlaneField> {
    io::read_field(io::open(path)?)
}

fn save_signal(f: &Signal, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(io::create(out_path(path))?);
    io::write_signal(f, &mut w)?;
    w.flush()?;
    Ok(())
}

fn save_field(u: &HalfPlaneField, path: &Path) -> Result<()> {
    for warning in u.warnings() {
        warn(warning);
    }
    let mut w = BufWriter::new(io::create(out_path(path))?);
    io::write_field(u, &mut w)?;
    w.flush()?;
    Ok(())
}

fn warn(message: &str) {
    eprintln!("warning: message=\"{}\"", escape(message));
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"").replace('\n', " ")
}

fn kernel_arg(name: &str) -> Result<Kernel> {
    let path = Path::new(name);
    if path.extension().is_some_and(|e| e == "csv") || path.exists() {
        return Ok(Kernel::Sampled(read_signal(path)?));
    }
    match Fiducial::builtin(name)? {
        Fiducial::Kernel { kernel, .. } => Ok(kernel),
        _ => Err(usage("vector", format!("`{name}` has no kernel"))),
    }
}

fn fiducial_arg(name: &str) -> Result<Fiducial> {
    let path = Path::new(name);
    if path.extension().is_some_and(|e| e == "csv") || path.exists() {
        return Ok(Fiducial::kernel(Kernel::Sampled(read_signal(path)?), name));
    }
    Fiducial::builtin(name)
}

fn vector_arg(name: &str) -> Result<Vector> {
    match name.to_ascii_lowercase().as_str() {
        "vplus" | "plus" => Ok(Vector::Plus),
        "vstar" | "star" => Ok(Vector::Star),
        _ => Ok(Vector::Kernel(kernel_arg(name)?)),
    }
}

fn gen(args: &GenArgs) -> Result<()> {
    let mut params = Params::new();
    for kv in &args.params {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| usage("param", format!("expected KEY=VALUE, got `{kv}`")))?;
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| usage("param", format!("not a number in `{kv}`")))?;
        params.insert(k.trim().to_string(), v);
    }
    let grid = RealGrid::new(args.x0, args.dx, args.n)?;
    save_signal(&generate(&args.expr, &params, grid)?, &args.out)
}

fn transform(args: &TransformArgs) -> Result<()> {
    let f = read_signal(&args.input)?;
    let fid = fiducial_arg(&args.fiducial)?;
    let p = parse_p(&args.p)?;
    let axes = args.axes.axes(Some(f.grid()))?;
    save_field(&covariant(&fid, p, &f, &axes)?, &args.out)
}

fn limit(args: &LimitArgs) -> Result<()> {
    let u = read_field(&args.field)?;
    let p = field_p(&u, args.p.as_deref())?;
    let w = vector_arg(&args.vector)?;
    save_signal(&contravariant(args.pairing, &w, p, &u)?, &args.out)
}

fn atoms(args: &AtomsArgs) -> Result<()> {
    let masses = io::read_point_masses(io::open(&args.masses)?)?;
    let r = read_signal(&args.nucleus)?;
    let grid = masses.covering_grid(args.dx)?;
    let f = covariant_core::contravariant::extended_contravariant(&masses, |_| r.clone(), grid)?;
    save_signal(&f, &args.out)
}

fn hilbert(args: &HilbertArgs) -> Result<()> {
    let f = read_signal(&args.input)?;
    let h = match args.method {
        HilbertMethod::Pv => hilbert_pv(&f),
        HilbertMethod::ConjPoisson => hilbert_via_conj_poisson(&f, &default_hilbert_scales())?.value,
    };
    save_signal(&h, &args.out)
}

fn maximal(args: &MaximalArgs) -> Result<()> {
    let f = read_signal(&args.input)?;
    let m = if args.centered {
        hardy_littlewood_centered(&f)
    } else {
        hardy_littlewood(&f)
    };
    save_signal(&m, &args.out)
}

fn boundary(args: &BoundaryArgs) -> Result<()> {
    save_signal(&sokhotsky_boundary(&read_signal(&args.input)?), &args.out)
}

fn norm(args: &NormArgs) -> Result<()> {
    let u = read_field(&args.field)?;
    let value = match args.kind {
        NormKind::HardyAff => hardy_norm_aff(&u, field_p(&u, args.p.as_deref())?.p())?,
        NormKind::Contra => {
            let p = field_p(&u, args.p.as_deref())?;
            transported_norm_contra(args.pairing, &vector_arg(&args.vector)?, &u, p)?
        }
    };
    println!("{value:.16e}");
    Ok(())
}

fn carleson(args: &CarlesonArgs) -> Result<()> {
    let density = args.measure.as_deref().map(read_field).transpose()?;
    let masses = match &args.masses {
        Some(path) => io::read_carleson_masses(io::open(path)?)?,
        None => Vec::new(),
    };
    if density.is_none() && masses.is_empty() {
        return Err(usage("measure", "give --measure, --masses or both"));
    }
    let axes = match (&density, args.axes.b_n) {
        (Some(d), None) => args.axes.axes(Some(d.b_grid()))?,
        (None, None) => {
            let lo = masses.iter().map(|m| m.2).fold(f64::INFINITY, f64::min);
            let hi = masses.iter().map(|m| m.2).fold(f64::NEG_INFINITY, f64::max);
            let pad = args.axes.a_max;
            let grid = RealGrid::span(lo - pad, hi + pad, (hi - lo + 2.0 * pad) / 1000.0)?;
            args.axes.axes(Some(&grid))?
        }
        _ => args.axes.axes(None)?,
    };
    let mu = HalfPlaneMeasure::new(density, masses)?;
    let report = carleson_transform(&mu, &axes, args.threshold);
    save_field(&report.field, &args.out)?;
    let verdict = match report.is_carleson {
        Some(true) => " carleson=yes",
        Some(false) => " carleson=no",
        None => "",
    };
    println!(
        "sup={:.16e} a={:.16e} b={:.16e}{verdict}",
        report.sup, report.arg_sup.0, report.arg_sup.1
    );
    Ok(())
}

fn run_verify(args: &VerifyArgs) -> Result<bool> {
    let reports = verify::run(args.suite);
    for r in &reports {
        println!("{:<4} {} ({})", r.verdict, r.check, r.detail);
    }
    if let Some(path) = &args.report {
        let mut w = BufWriter::new(io::create(out_path(path))?);
        serde_json::to_writer_pretty(&mut w, &reports)?;
        writeln!(w)?;
        w.flush()?;
    }
    Ok(verify::all_pass(&reports))
}

fn dispatch(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Gen(a) => gen(a)?,
        Command::Transform(a) => transform(a)?,
        Command::Limit(a) => limit(a)?,
        Command::Atoms(a) => atoms(a)?,
        Command::Hilbert(a) => hilbert(a)?,
        Command::Maximal(a) => maximal(a)?,
        Command::Boundary(a) => boundary(a)?,
        Command::Norm(a) => norm(a)?,
        Command::Carleson(a) => carleson(a)?,
        Command::Verify(a) => return run_verify(a),
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            let first = e.to_string();
            let first = first.lines().next().unwrap_or_default().trim_start_matches("error: ");
            eprintln!("error: kind=usage message=\"{}\"", escape(first));
            return ExitCode::from(1);
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: kind=invalid_argument message=\"--threads must be at least 1\"");
            return ExitCode::from(1);
        }
        // Fails only if a pool already exists.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match dispatch(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: kind=verify_failed message=\"one or more checks failed\"");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: kind={} message=\"{}\"", e.kind(), escape(&e.to_string()));
            ExitCode::from(if e.is_numerical() { 2 } else { 1 })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_schema_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn p_parsing() {
        assert_eq!(parse_p("inf").unwrap(), RepIndex::INFINITY);
        assert_eq!(parse_p("2").unwrap().p(), 2.0);
        assert!(parse_p("0.5").is_err());
        assert!(parse_p("x").is_err());
    }

    #[test]
    fn generator_names_are_listed_in_help() {
        use clap::CommandFactory;
        let mut cmd = Cli::command();
        let help = cmd.find_subcommand_mut("gen").unwrap().render_long_help().to_string();
        for (name, _) in covariant_core::generators::GENERATORS {
            assert!(help.contains(name), "{name} missing from gen help");
        }
    }
}
