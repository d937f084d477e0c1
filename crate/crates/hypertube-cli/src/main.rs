//! `hypertube`: command-line front end for the tube/helicoid/area toolkit.
//!
//! Subcommands: `tube`, `annulus`, `crossover`, `stability`, `shrinkwrap`,
//! `mesh`, `coarea`, `report`. Parameters may also come from a JSON config
//! file named by the `HYPERTUBE_CONFIG` environment variable; command-line
//! flags override config values. Exit codes: 0 success, 1 usage error,
//! 2 domain/numerical error, 3 I/O error.

mod emit;
mod sweep;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use emit::{fmt17, Csv, JsonArr, JsonObj};
use hypertube::comparison::{crossover_twist, main_inequalities, ComparisonReport};
use hypertube::helicoid::{annulus_area, longitude_length, stability_scan};
use hypertube::isometry::{GeodesicLine, HyperboloidPoint, Vec4};
use hypertube::mesh::{
    build_geodesic_disk_mesh, build_helicoid_annulus_mesh, build_meridian_disk_mesh, coarea_verify,
    mesh_area, minimize_area, perturb_free_vertices,
};
use hypertube::shrinkwrap::{
    disk_cross_section_area, minimal_torus_radius, profile, ShrinkwrapParams,
};
use hypertube::tube::{tube_profile, tube_radius};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug)]
enum CliError {
    Usage(String),
    Domain(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Domain(_) => 2,
            CliError::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Domain(m) | CliError::Io(m) => m,
        }
    }
}

impl From<hypertube::Error> for CliError {
    fn from(e: hypertube::Error) -> Self {
        CliError::Domain(e.to_string())
    }
}

#[derive(Parser)]
#[command(name = "hypertube", version, about = "Tubes, helicoids, and area comparisons in hyperbolic 3-space")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Meyerhoff tube quantities for a short geodesic
    Tube(TubeArgs),
    /// Helicoidal annulus area inside a tube
    Annulus(AnnulusArgs),
    /// Area gap between annulus and tube torus; crossover twist
    Crossover(CrossoverArgs),
    /// Jacobi second-variation sign over an escalating patch ladder
    Stability(StabilityArgs),
    /// Conformal shrinkwrap metric profile and barrier torus
    Shrinkwrap(ShrinkwrapArgs),
    /// Build, perturb, minimize and measure discrete meshes
    Mesh(MeshArgs),
    /// Coarea formula check: direct vs sliced area
    Coarea(CoareaArgs),
    /// Run the full verification sweep and write a pass/fail ledger
    Report(ReportArgs),
}

#[derive(Args, Clone)]
struct OutputOpts {
    /// Output format: json or csv
    #[arg(long)]
    format: Option<String>,
    /// Output file (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Random seed recorded in the output and used by perturbations
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct TubeArgs {
    /// Real length of the geodesic
    #[arg(long)]
    l: Option<f64>,
    #[command(flatten)]
    output: OutputOpts,
}

#[derive(Args)]
struct AnnulusArgs {
    #[arg(long)]
    l: Option<f64>,
    /// Twist angle θ
    #[arg(long)]
    theta: Option<f64>,
    /// Outer radius of the annulus
    #[arg(long)]
    r: Option<f64>,
    #[command(flatten)]
    output: OutputOpts,
}

#[derive(Args)]
struct CrossoverArgs {
    #[arg(long)]
    l: Option<f64>,
    /// Evaluate the inequality chain at this twist instead of searching
    #[arg(long)]
    theta: Option<f64>,
    /// Bisection tolerance on the crossover twist
    #[arg(long)]
    tol: Option<f64>,
    /// Number of gap-curve samples around the crossover
    #[arg(long)]
    samples: Option<usize>,
    #[command(flatten)]
    output: OutputOpts,
}

#[derive(Args)]
struct StabilityArgs {
    /// Helicoid pitch
    #[arg(long)]
    a: Option<f64>,
    /// Largest half-width of the patch ladder
    #[arg(long)]
    umax: Option<f64>,
    /// Number of ladder rungs
    #[arg(long)]
    rungs: Option<usize>,
    /// Base grid, e.g. 16 or 16x16
    #[arg(long)]
    grid: Option<String>,
    #[command(flatten)]
    output: OutputOpts,
}

#[derive(Args)]
struct ShrinkwrapArgs {
    /// Initial tube parameter σ
    #[arg(long)]
    sigma: Option<f64>,
    /// Family parameter in [0, 1)
    #[arg(long)]
    t: Option<f64>,
    /// Core geodesic length (validated; the barrier radius is independent of it)
    #[arg(long)]
    l: Option<f64>,
    /// Number of profile samples
    #[arg(long)]
    samples: Option<usize>,
    #[command(flatten)]
    output: OutputOpts,
}

#[derive(Args)]
struct MeshArgs {
    /// Surface to build: helicoid or disk
    #[arg(long)]
    surface: Option<String>,
    #[arg(long)]
    l: Option<f64>,
    #[arg(long)]
    theta: Option<f64>,
    /// Radius (tube clip for helicoid, disk radius for disk); defaults to the tube radius of l
    #[arg(long)]
    r: Option<f64>,
    /// Grid resolution, e.g. 64 or 64x64
    #[arg(long)]
    grid: Option<String>,
    /// Run projected-gradient minimization
    #[arg(long)]
    minimize: bool,
    /// Maximum minimization steps
    #[arg(long)]
    steps: Option<usize>,
    /// Gradient step size
    #[arg(long)]
    step_size: Option<f64>,
    /// Gradient-norm stopping tolerance
    #[arg(long)]
    tol: Option<f64>,
    /// Tangent perturbation magnitude applied before minimizing
    #[arg(long)]
    perturb: Option<f64>,
    /// Write the mesh itself (interchange JSON) to this path
    #[arg(long)]
    mesh_out: Option<PathBuf>,
    #[command(flatten)]
    output: OutputOpts,
}

#[derive(Args)]
struct CoareaArgs {
    /// Surface to slice: helicoid or plane
    #[arg(long)]
    surface: Option<String>,
    #[arg(long)]
    l: Option<f64>,
    #[arg(long)]
    theta: Option<f64>,
    /// Mesh extent (helicoid u-range or plane radius)
    #[arg(long)]
    r: Option<f64>,
    /// Neighborhood radius to clip at
    #[arg(long)]
    s: Option<f64>,
    /// Number of coarea slices
    #[arg(long)]
    slices: Option<usize>,
    /// Tilt angle of the plane against the axis
    #[arg(long)]
    tilt: Option<f64>,
    #[arg(long)]
    grid: Option<String>,
    #[command(flatten)]
    output: OutputOpts,
}

#[derive(Args)]
struct ReportArgs {
    #[command(flatten)]
    output: OutputOpts,
}

// Values from the HYPERTUBE_CONFIG file; flags override them.
struct ConfigFile(serde_json::Map<String, serde_json::Value>);

impl ConfigFile {
    fn load() -> Result<Self, CliError> {
        let Some(path) = std::env::var_os("HYPERTUBE_CONFIG") else {
            return Ok(ConfigFile(serde_json::Map::new()));
        };
        let text = std::fs::read_to_string(&path).map_err(|e| {
            CliError::Io(format!("cannot read config {}: {e}", path.to_string_lossy()))
        })?;
        let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| {
            CliError::Usage(format!("malformed config {}: {e}", path.to_string_lossy()))
        })?;
        match value {
            serde_json::Value::Object(map) => Ok(ConfigFile(map)),
            _ => Err(CliError::Usage("config file must hold a JSON object".into())),
        }
    }

    fn f64(&self, key: &str) -> Option<f64> {
        self.0.get(key).and_then(|v| v.as_f64())
    }

    fn u64(&self, key: &str) -> Option<u64> {
        self.0.get(key).and_then(|v| v.as_u64())
    }

    fn string(&self, key: &str) -> Option<String> {
        self.0.get(key).and_then(|v| v.as_str().map(str::to_owned))
    }
}

fn require(value: Option<f64>, flag: &str) -> Result<f64, CliError> {
    value.ok_or_else(|| CliError::Usage(format!("missing required parameter --{flag}")))
}

fn parse_grid(spec: &str) -> Result<(usize, usize), CliError> {
    let parts: Vec<&str> = spec.split(['x', ',']).collect();
    let parse = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| CliError::Usage(format!("bad grid value '{s}'")))
    };
    match parts.as_slice() {
        [one] => {
            let n = parse(one)?;
            Ok((n, n))
        }
        [m, n] => Ok((parse(m)?, parse(n)?)),
        _ => Err(CliError::Usage(format!("bad grid spec '{spec}'"))),
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Format {
    Json,
    Csv,
}

fn resolve_format(opts: &OutputOpts, cfg: &ConfigFile, default: Format) -> Result<Format, CliError> {
    let chosen = opts.format.clone().or_else(|| cfg.string("format"));
    match chosen.as_deref() {
        None => Ok(default),
        Some("json") => Ok(Format::Json),
        Some("csv") => Ok(Format::Csv),
        Some(other) => Err(CliError::Usage(format!("unknown format '{other}'"))),
    }
}

fn resolve_seed(opts: &OutputOpts, cfg: &ConfigFile) -> u64 {
    opts.seed.or_else(|| cfg.u64("seed")).unwrap_or(0)
}

fn deliver(text: &str, out: &Option<PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.to_string_lossy()))),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            match writeln!(stdout, "{text}") {
                Ok(()) => Ok(()),
                // Downstream consumer (e.g. `head`) closed the pipe.
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                Err(e) => Err(CliError::Io(format!("cannot write to stdout: {e}"))),
            }
        }
    }
}

fn envelope(command: &str, seed: u64, config: &str) -> JsonObj {
    JsonObj::new()
        .string("version", VERSION)
        .string("command", command)
        .uint("seed", seed)
        .raw("config", config)
}

fn csv_preamble(csv: &mut Csv, command: &str, seed: u64, config_pairs: &[(&str, String)]) {
    csv.comment(&format!("version={VERSION}"));
    csv.comment(&format!("command={command}"));
    csv.comment(&format!("seed={seed}"));
    for (k, v) in config_pairs {
        csv.comment(&format!("{k}={v}"));
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = ConfigFile::load()?;
    match cli.cmd {
        Cmd::Tube(args) => cmd_tube(args, &cfg),
        Cmd::Annulus(args) => cmd_annulus(args, &cfg),
        Cmd::Crossover(args) => cmd_crossover(args, &cfg),
        Cmd::Stability(args) => cmd_stability(args, &cfg),
        Cmd::Shrinkwrap(args) => cmd_shrinkwrap(args, &cfg),
        Cmd::Mesh(args) => cmd_mesh(args, &cfg),
        Cmd::Coarea(args) => cmd_coarea(args, &cfg),
        Cmd::Report(args) => cmd_report(args, &cfg),
    }
}

fn cmd_tube(args: TubeArgs, cfg: &ConfigFile) -> Result<(), CliError> {
    let l = require(args.l.or_else(|| cfg.f64("l")), "l")?;
    let seed = resolve_seed(&args.output, cfg);
    let format = resolve_format(&args.output, cfg, Format::Json)?;
    let profile = tube_profile(l)?;
    let config = JsonObj::new().num("l", l).finish();
    let text = match format {
        Format::Json => {
            let result = JsonObj::new()
                .num("l", profile.l)
                .num("kappa", profile.kappa)
                .num("r_max", profile.r_max)
                .num("boundary_area", profile.boundary_area)
                .num("meridian_area", profile.meridian_area)
                .num("volume", profile.volume)
                .finish();
            envelope("tube", seed, &config).raw("result", &result).finish()
        }
        Format::Csv => {
            let mut csv = Csv::new();
            csv_preamble(&mut csv, "tube", seed, &[("l", fmt17(l))]);
            csv.header(&["l", "kappa", "r_max", "boundary_area", "meridian_area", "volume"]);
            csv.row(&[
                profile.l,
                profile.kappa,
                profile.r_max,
                profile.boundary_area,
                profile.meridian_area,
                profile.volume,
            ]);
            csv.finish()
        }
    };
    deliver(&text, &args.output.out)
}

fn cmd_annulus(args: AnnulusArgs, cfg: &ConfigFile) -> Result<(), CliError> {
    let l = require(args.l.or_else(|| cfg.f64("l")), "l")?;
    let theta = require(args.theta.or_else(|| cfg.f64("theta")), "theta")?;
    let r = require(args.r.or_else(|| cfg.f64("r")), "r")?;
    let seed = resolve_seed(&args.output, cfg);
    let format = resolve_format(&args.output, cfg, Format::Json)?;
    let area = annulus_area(l, theta, r)?;
    let longitude = longitude_length(l, theta, r)?;
    let twist_bound = 2.0 * theta * (r.cosh() - 1.0);
    let core_bound = 2.0 * l * r.sinh();
    let config = JsonObj::new().num("l", l).num("theta", theta).num("r", r).finish();
    let text = match format {
        Format::Json => {
            let result = JsonObj::new()
                .num("area", area)
                .num("longitude_length", longitude)
                .num("lower_bound_twist", twist_bound)
                .num("lower_bound_core", core_bound)
                .finish();
            envelope("annulus", seed, &config).raw("result", &result).finish()
        }
        Format::Csv => {
            let mut csv = Csv::new();
            csv_preamble(
                &mut csv,
                "annulus",
                seed,
                &[("l", fmt17(l)), ("theta", fmt17(theta)), ("r", fmt17(r))],
            );
            csv.header(&["area", "longitude_length", "lower_bound_twist", "lower_bound_core"]);
            csv.row(&[area, longitude, twist_bound, core_bound]);
            csv.finish()
        }
    };
    deliver(&text, &args.output.out)
}

fn report_json(report: &ComparisonReport) -> String {
    JsonObj::new()
        .num("l", report.l)
        .num("theta", report.theta)
        .num("r_max", report.r_max)
        .num("annulus_area", report.annulus_area)
        .num("torus_area", report.torus_area)
        .num("gap", report.gap)
        .num("c_theta", report.c_theta)
        .boolean("ineq_growth", report.ineq_growth)
        .boolean("ineq_torus", report.ineq_torus)
        .boolean("holds", report.holds)
        .num("growth_margin", report.growth_margin)
        .num("torus_margin", report.torus_margin)
        .finish()
}

fn cmd_crossover(args: CrossoverArgs, cfg: &ConfigFile) -> Result<(), CliError> {
    let l = require(args.l.or_else(|| cfg.f64("l")), "l")?;
    let theta = args.theta.or_else(|| cfg.f64("theta"));
    let tol = args.tol.or_else(|| cfg.f64("tol")).unwrap_or(1e-10);
    let samples = args
        .samples
        .or_else(|| cfg.u64("samples").map(|v| v as usize))
        .unwrap_or(100);
    let seed = resolve_seed(&args.output, cfg);

    if let Some(theta) = theta {
        // Single-point evaluation of the inequality chain.
        let format = resolve_format(&args.output, cfg, Format::Json)?;
        let report = main_inequalities(l, theta)?;
        let config = JsonObj::new().num("l", l).num("theta", theta).finish();
        let text = match format {
            Format::Json => envelope("crossover", seed, &config)
                .raw("result", &report_json(&report))
                .finish(),
            Format::Csv => {
                let mut csv = Csv::new();
                csv_preamble(
                    &mut csv,
                    "crossover",
                    seed,
                    &[("l", fmt17(l)), ("theta", fmt17(theta))],
                );
                csv.header(&[
                    "l", "theta", "annulus_area", "torus_area", "gap", "c_theta", "holds",
                ]);
                csv.row_cells(&[
                    fmt17(report.l),
                    fmt17(report.theta),
                    fmt17(report.annulus_area),
                    fmt17(report.torus_area),
                    fmt17(report.gap),
                    fmt17(report.c_theta),
                    report.holds.to_string(),
                ]);
                csv.finish()
            }
        };
        return deliver(&text, &args.output.out);
    }

    // Search mode: bisect the crossover twist and emit the gap curve.
    let format = resolve_format(&args.output, cfg, Format::Csv)?;
    let theta_star = crossover_twist(l, tol)?;
    let a_star = theta_star / l;
    let config = JsonObj::new().num("l", l).num("tol", tol).finish();
    let curve: Vec<ComparisonReport> = (0..=samples)
        .map(|k| {
            let theta = theta_star * (0.25 + 1.75 * k as f64 / samples as f64);
            main_inequalities(l, theta)
        })
        .collect::<Result<_, _>>()?;
    let text = match format {
        Format::Csv => {
            let mut csv = Csv::new();
            csv_preamble(&mut csv, "crossover", seed, &[("l", fmt17(l)), ("tol", fmt17(tol))]);
            csv.comment(&format!("theta_star={}", fmt17(theta_star)));
            csv.comment(&format!("a_star={}", fmt17(a_star)));
            csv.header(&["l", "theta", "annulus_area", "torus_area", "gap"]);
            for rep in &curve {
                csv.row(&[rep.l, rep.theta, rep.annulus_area, rep.torus_area, rep.gap]);
            }
            csv.finish()
        }
        Format::Json => {
            let mut arr = JsonArr::new();
            for rep in &curve {
                arr.push_raw(&report_json(rep));
            }
            let result = JsonObj::new()
                .num("theta_star", theta_star)
                .num("a_star", a_star)
                .raw("curve", &arr.finish())
                .finish();
            envelope("crossover", seed, &config).raw("result", &result).finish()
        }
    };
    deliver(&text, &args.output.out)
}

fn cmd_stability(args: StabilityArgs, cfg: &ConfigFile) -> Result<(), CliError> {
    let a = require(args.a.or_else(|| cfg.f64("a")), "a")?;
    let umax = require(args.umax.or_else(|| cfg.f64("umax")), "umax")?;
    let rungs = args
        .rungs
        .or_else(|| cfg.u64("rungs").map(|v| v as usize))
        .unwrap_or(4);
    let grid_spec = args.grid.or_else(|| cfg.string("grid")).unwrap_or_else(|| "16".into());
    let grid = parse_grid(&grid_spec)?;
    let seed = resolve_seed(&args.output, cfg);
    let format = resolve_format(&args.output, cfg, Format::Json)?;
    let scan = stability_scan(a, umax, rungs, grid)?;
    let sign = match scan.certified {
        hypertube::helicoid::StableSign::Positive => "positive",
        hypertube::helicoid::StableSign::Negative => "negative",
        hypertube::helicoid::StableSign::Inconclusive => "inconclusive",
    };
    let config = JsonObj::new()
        .num("a", a)
        .num("umax", umax)
        .uint("rungs", rungs as u64)
        .string("grid", &format!("{}x{}", grid.0, grid.1))
        .finish();
    let text = match format {
        Format::Json => {
            let mut arr = JsonArr::new();
            for rung in &scan.rungs {
                arr.push_raw(
                    &JsonObj::new()
                        .num("u_extent", rung.u_extent)
                        .num("lambda_coarse", rung.lambda_coarse)
                        .num("lambda_refined", rung.lambda_refined)
                        .finish(),
                );
            }
            let result = JsonObj::new()
                .num("lambda_min", scan.lambda_min)
                .string("stable_sign", sign)
                .raw("rungs", &arr.finish())
                .finish();
            envelope("stability", seed, &config).raw("result", &result).finish()
        }
        Format::Csv => {
            let mut csv = Csv::new();
            csv_preamble(
                &mut csv,
                "stability",
                seed,
                &[("a", fmt17(a)), ("umax", fmt17(umax)), ("grid", format!("{}x{}", grid.0, grid.1))],
            );
            csv.comment(&format!("lambda_min={}", fmt17(scan.lambda_min)));
            csv.comment(&format!("stable_sign={sign}"));
            csv.header(&["u_extent", "lambda_coarse", "lambda_refined"]);
            for rung in &scan.rungs {
                csv.row(&[rung.u_extent, rung.lambda_coarse, rung.lambda_refined]);
            }
            csv.finish()
        }
    };
    deliver(&text, &args.output.out)
}

fn cmd_shrinkwrap(args: ShrinkwrapArgs, cfg: &ConfigFile) -> Result<(), CliError> {
    let sigma = require(args.sigma.or_else(|| cfg.f64("sigma")), "sigma")?;
    let t = require(args.t.or_else(|| cfg.f64("t")), "t")?;
    let l = args.l.or_else(|| cfg.f64("l")).unwrap_or(1.0);
    let samples = args
        .samples
        .or_else(|| cfg.u64("samples").map(|v| v as usize))
        .unwrap_or(256);
    let seed = resolve_seed(&args.output, cfg);
    let format = resolve_format(&args.output, cfg, Format::Csv)?;
    let params = ShrinkwrapParams::new(sigma, t)?;
    let barrier = minimal_torus_radius(&params, l)?;
    let disk_area = disk_cross_section_area(&params)?;
    let rows = profile(&params, samples);
    let config = JsonObj::new().num("sigma", sigma).num("t", t).num("l", l).finish();
    let text = match format {
        Format::Csv => {
            let mut csv = Csv::new();
            csv_preamble(
                &mut csv,
                "shrinkwrap",
                seed,
                &[("sigma", fmt17(sigma)), ("t", fmt17(t)), ("l", fmt17(l))],
            );
            csv.comment(&format!("support_radius={}", fmt17(params.support_radius())));
            csv.comment(&format!("minimal_torus_radius={}", fmt17(barrier)));
            csv.comment(&format!("disk_cross_section_area={}", fmt17(disk_area)));
            csv.header(&["s", "w", "torus_area_derivative"]);
            for (s, w, d) in &rows {
                csv.row(&[*s, *w, *d]);
            }
            csv.finish()
        }
        Format::Json => {
            let mut arr = JsonArr::new();
            for (s, w, d) in &rows {
                arr.push_raw(
                    &JsonObj::new().num("s", *s).num("w", *w).num("derivative", *d).finish(),
                );
            }
            let result = JsonObj::new()
                .num("support_radius", params.support_radius())
                .num("minimal_torus_radius", barrier)
                .num("window_lo", 2.0 / 3.0 * params.support_radius())
                .num("window_hi", 3.0 / 4.0 * params.support_radius())
                .num("disk_cross_section_area", disk_area)
                .raw("profile", &arr.finish())
                .finish();
            envelope("shrinkwrap", seed, &config).raw("result", &result).finish()
        }
    };
    deliver(&text, &args.output.out)
}

fn cmd_mesh(args: MeshArgs, cfg: &ConfigFile) -> Result<(), CliError> {
    let surface = args
        .surface
        .or_else(|| cfg.string("surface"))
        .unwrap_or_else(|| "helicoid".into());
    let grid_spec = args.grid.or_else(|| cfg.string("grid")).unwrap_or_else(|| "64".into());
    let (m, n) = parse_grid(&grid_spec)?;
    let seed = resolve_seed(&args.output, cfg);
    let steps = args.steps.or_else(|| cfg.u64("steps").map(|v| v as usize)).unwrap_or(200);
    let step_size = args.step_size.or_else(|| cfg.f64("step_size")).unwrap_or(0.3);
    let tol = args.tol.or_else(|| cfg.f64("tol")).unwrap_or(1e-4);
    let perturb = args.perturb.or_else(|| cfg.f64("perturb")).unwrap_or(0.0);

    let (mut mesh, reference, config) = match surface.as_str() {
        "helicoid" => {
            let l = require(args.l.or_else(|| cfg.f64("l")), "l")?;
            let theta = require(args.theta.or_else(|| cfg.f64("theta")), "theta")?;
            let r = match args.r.or_else(|| cfg.f64("r")) {
                Some(r) => r,
                None => tube_radius(l)?,
            };
            let mesh = build_helicoid_annulus_mesh(l, theta, r, m, n)?;
            let reference = annulus_area(l, theta, r)?;
            let config = JsonObj::new()
                .string("surface", "helicoid")
                .num("l", l)
                .num("theta", theta)
                .num("r", r)
                .string("grid", &format!("{m}x{n}"))
                .num("perturb", perturb)
                .finish();
            (mesh, reference, config)
        }
        "disk" => {
            let r = require(args.r.or_else(|| cfg.f64("r")), "r")?;
            let mesh = build_meridian_disk_mesh(r, m, n)?;
            let reference = hypertube::tube::meridian_disk_area(r)?;
            let config = JsonObj::new()
                .string("surface", "disk")
                .num("r", r)
                .string("grid", &format!("{m}x{n}"))
                .num("perturb", perturb)
                .finish();
            (mesh, reference, config)
        }
        other => return Err(CliError::Usage(format!("unknown surface '{other}'"))),
    };

    let initial_area = mesh_area(&mesh)?;
    if perturb > 0.0 {
        perturb_free_vertices(&mut mesh, perturb, seed)?;
    }
    let perturbed_area = mesh_area(&mesh)?;

    let (final_mesh, final_area, converged, steps_taken, grad_norm) = if args.minimize {
        let report = minimize_area(mesh, steps, step_size, tol)?;
        let area = report.final_area;
        (report.mesh, area, report.converged, report.steps, report.grad_norm)
    } else {
        (mesh, perturbed_area, true, 0, f64::NAN)
    };

    if let Some(path) = &args.mesh_out {
        std::fs::write(path, final_mesh.to_json_string())
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.to_string_lossy())))?;
    }

    let result = JsonObj::new()
        .num("reference_area", reference)
        .num("initial_area", initial_area)
        .num("perturbed_area", perturbed_area)
        .num("final_area", final_area)
        .num("relative_error", (final_area - reference).abs() / reference)
        .boolean("converged", converged)
        .uint("steps", steps_taken as u64)
        .num("grad_norm", grad_norm)
        .uint("vertices", final_mesh.vertices.len() as u64)
        .uint("faces", final_mesh.faces.len() as u64)
        .finish();
    let text = envelope("mesh", seed, &config).raw("result", &result).finish();
    deliver(&text, &args.output.out)
}

fn cmd_coarea(args: CoareaArgs, cfg: &ConfigFile) -> Result<(), CliError> {
    let surface = args
        .surface
        .or_else(|| cfg.string("surface"))
        .unwrap_or_else(|| "helicoid".into());
    let s = require(args.s.or_else(|| cfg.f64("s")), "s")?;
    let slices = args.slices.or_else(|| cfg.u64("slices").map(|v| v as usize)).unwrap_or(40);
    let grid_spec = args.grid.or_else(|| cfg.string("grid")).unwrap_or_else(|| "64".into());
    let (m, n) = parse_grid(&grid_spec)?;
    let seed = resolve_seed(&args.output, cfg);
    let axis = GeodesicLine::t_axis();

    let (mesh, config) = match surface.as_str() {
        "helicoid" => {
            let l = require(args.l.or_else(|| cfg.f64("l")), "l")?;
            let theta = require(args.theta.or_else(|| cfg.f64("theta")), "theta")?;
            let r = match args.r.or_else(|| cfg.f64("r")) {
                Some(r) => r,
                None => tube_radius(l)?,
            };
            let mesh = build_helicoid_annulus_mesh(l, theta, r, m, n)?;
            let config = JsonObj::new()
                .string("surface", "helicoid")
                .num("l", l)
                .num("theta", theta)
                .num("r", r)
                .num("s", s)
                .uint("slices", slices as u64)
                .string("grid", &format!("{m}x{n}"))
                .finish();
            (mesh, config)
        }
        "plane" => {
            let tilt = args.tilt.or_else(|| cfg.f64("tilt")).unwrap_or(0.5);
            let r = args.r.or_else(|| cfg.f64("r")).unwrap_or(1.5);
            let w1 = Vec4::new(0.0, tilt.cos(), 0.0, tilt.sin());
            let w2 = Vec4::new(0.0, 0.0, 1.0, 0.0);
            let mesh = build_geodesic_disk_mesh(&HyperboloidPoint::base(), &w1, &w2, r, m, n)?;
            let config = JsonObj::new()
                .string("surface", "plane")
                .num("tilt", tilt)
                .num("r", r)
                .num("s", s)
                .uint("slices", slices as u64)
                .string("grid", &format!("{m}x{n}"))
                .finish();
            (mesh, config)
        }
        other => return Err(CliError::Usage(format!("unknown surface '{other}'"))),
    };

    let (direct, sliced) = coarea_verify(&mesh, &axis, s, slices)?;
    let rel = (direct - sliced).abs() / direct.abs().max(1e-300);
    let result = JsonObj::new()
        .num("direct", direct)
        .num("sliced", sliced)
        .num("relative_difference", rel)
        .boolean("within_one_percent", rel < 0.01)
        .finish();
    let text = envelope("coarea", seed, &config).raw("result", &result).finish();
    deliver(&text, &args.output.out)
}

fn cmd_report(args: ReportArgs, cfg: &ConfigFile) -> Result<(), CliError> {
    let seed = resolve_seed(&args.output, cfg);
    let checks = sweep::run(seed);
    let all_pass = checks.iter().all(|c| c.pass);
    let mut arr = JsonArr::new();
    for c in &checks {
        arr.push_raw(
            &JsonObj::new()
                .uint("id", c.id as u64)
                .string("name", c.name)
                .boolean("pass", c.pass)
                .string("detail", &c.detail)
                .finish(),
        );
    }
    let config = JsonObj::new().finish();
    let text = envelope("report", seed, &config)
        .raw("checks", &arr.finish())
        .boolean("all_pass", all_pass)
        .finish();
    deliver(&text, &args.output.out)?;
    if all_pass {
        Ok(())
    } else {
        let failed: Vec<&str> = checks.iter().filter(|c| !c.pass).map(|c| c.name).collect();
        Err(CliError::Domain(format!("checks failed: {}", failed.join(", "))))
    }
}
