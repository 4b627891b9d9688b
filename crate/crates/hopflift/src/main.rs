//! Command-line front end: run the fixed-point iteration, verify candidate
//! solutions, evaluate the planar Liouville families, export sample sets,
//! and list the registered seeds.
//!
//! Exit codes: 0 success/pass, 1 verification failure or runtime error,
//! 2 parse/config errors, 3 iteration gave up (size blowup or max
//! iterations), 4 evaluation failure at a sample point.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_rational::Rational64;

use hopflift::config::RunConfig;
use hopflift::expr::Domain;
use hopflift::fields::{sample_points, VectorField};
use hopflift::iterate::{run, solution_record, EquationSystem, IterationStatus};
use hopflift::liouville::{is_half_integer, rect_grid, sector_grid, AnalyticMap, PlanarSolution};
use hopflift::seeds;
use hopflift::verify::{verify_solution, verify_tuple, SolutionTuple, VerificationReport};

#[derive(Parser)]
#[command(
    name = "hopflift",
    about = "Spinor/gauge-potential lifts of 3D vector fields, fixed-point iteration for singular Seiberg-Witten and Freund solutions, and residual verification",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the fixed-point iteration H -> ±curl(A[H]) from a seed field
    Iterate(IterateArgs),
    /// Verify a candidate solution by pointwise residuals
    Verify(VerifyArgs),
    /// Evaluate a planar Liouville-equation solution family on a grid
    Liouville(LiouvilleArgs),
    /// Generate a rejection-sampled point set for a field and export CSV
    Sample(SampleArgs),
    /// List the registered seeds
    Seeds,
}

#[derive(Args, Clone)]
struct ConfigArgs {
    /// Plain-text config file (key = value lines); flags override it
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long)]
    max_iterations: Option<usize>,
    #[arg(long)]
    node_budget: Option<u64>,
    /// Number of sample points
    #[arg(long)]
    samples: Option<usize>,
    /// Sample box lower corner (applied to all three axes)
    #[arg(long)]
    box_min: Option<f64>,
    /// Sample box upper corner (applied to all three axes)
    #[arg(long)]
    box_max: Option<f64>,
    #[arg(long)]
    rng_seed: Option<u64>,
    /// Enable simplification rules valid on the positive octant
    #[arg(long)]
    positive_domain: Option<bool>,
    #[arg(long)]
    threshold: Option<f64>,
    /// Named constant binding NAME=VALUE (repeatable)
    #[arg(long = "param", value_name = "NAME=VALUE")]
    params: Vec<String>,
    /// Output directory for trace/report/CSV files
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

impl ConfigArgs {
    fn build(&self) -> Result<RunConfig, String> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
            cfg.apply_file(&text).map_err(|e| e.to_string())?;
        }
        if let Some(v) = self.tolerance {
            cfg.tolerance = v;
        }
        if let Some(v) = self.max_iterations {
            cfg.max_iterations = v;
        }
        if let Some(v) = self.node_budget {
            cfg.node_budget = v;
        }
        if let Some(v) = self.samples {
            cfg.sample_count = v;
        }
        if let Some(v) = self.box_min {
            cfg.box_min = [v; 3];
        }
        if let Some(v) = self.box_max {
            cfg.box_max = [v; 3];
        }
        if let Some(v) = self.rng_seed {
            cfg.rng_seed = v;
        }
        if let Some(v) = self.positive_domain {
            cfg.positive_domain = v;
        }
        if let Some(v) = self.threshold {
            cfg.threshold = v;
        }
        for p in &self.params {
            let (name, value) = p
                .split_once('=')
                .ok_or_else(|| format!("--param expects NAME=VALUE, got '{p}'"))?;
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| format!("invalid --param value in '{p}'"))?;
            cfg.params.insert(name.trim().to_string(), value);
        }
        cfg.validate().map_err(|e| e.to_string())?;
        Ok(cfg)
    }
}

#[derive(Args, Clone)]
struct FieldArgs {
    /// Registered seed name (see `hopflift seeds`)
    #[arg(long, conflicts_with_all = ["hx", "hy", "hz"])]
    seed: Option<String>,
    /// x-component expression of an inline field
    #[arg(long, requires = "hy", requires = "hz", allow_hyphen_values = true)]
    hx: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    hy: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    hz: Option<String>,
    /// Equation system: sw | freund (required for inline fields, optional
    /// override for seeds)
    #[arg(long)]
    system: Option<String>,
}

#[derive(Args)]
struct IterateArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[command(flatten)]
    config: ConfigArgs,
    /// Zero out wall-clock timings in the trace for byte-identical outputs
    #[arg(long)]
    no_timings: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[command(flatten)]
    config: ConfigArgs,
    /// Verify the seed's transcribed closed-form tuple (ψ, A, B, H) instead
    /// of reconstructing ψ and A from H
    #[arg(long)]
    use_expected: bool,
    /// Scale one component by (1 + delta) before verifying
    #[arg(long, value_name = "DELTA", allow_hyphen_values = true)]
    perturb: Option<f64>,
    /// Component to perturb: h1..h3, a1..a3, b1..b3, psi1, psi2
    /// (default: the first component of A, else of H, that is not 0)
    #[arg(long)]
    perturb_target: Option<String>,
    /// Also write per-point residuals CSV
    #[arg(long)]
    residuals_csv: bool,
}

#[derive(Args)]
struct LiouvilleArgs {
    /// Use the alternative ansatz omega = ln(|g'|/|Im g|)
    #[arg(long, conflicts_with_all = ["ns", "zn"])]
    alt: bool,
    /// Use the conjugate ansatz omega = ln(2|g'|/|1-|g|^2|)
    #[arg(long, conflicts_with = "zn")]
    ns: bool,
    /// Analytic map g(zeta) for --alt/--ns
    #[arg(long, value_name = "EXPR", allow_hyphen_values = true)]
    g: Option<String>,
    /// Evaluate the z^n family; n must be a positive half-integer
    #[arg(long, value_name = "N")]
    zn: Option<String>,
    /// Grid resolution per side
    #[arg(long, default_value_t = 20)]
    grid_n: usize,
    /// Grid lower corner (rectangular grids)
    #[arg(long)]
    grid_min: Option<f64>,
    /// Grid upper corner (rectangular grids)
    #[arg(long)]
    grid_max: Option<f64>,
    /// Finite-difference step for the residual check
    #[arg(long, default_value_t = 1e-4)]
    step: f64,
    /// Residual pass threshold
    #[arg(long, default_value_t = 1e-5)]
    residual_threshold: f64,
    /// Output CSV path (default <out-dir>/liouville.csv)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct SampleArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[command(flatten)]
    config: ConfigArgs,
    /// Output CSV path (default <out-dir>/samples.csv)
    #[arg(long)]
    out: Option<PathBuf>,
}

const EXIT_OK: u8 = 0;
const EXIT_FAIL: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_GAVE_UP: u8 = 3;
const EXIT_EVAL: u8 = 4;

fn main() -> ExitCode {
    // exit quietly when stdout closes early (tables piped into head etc.)
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    hopflift::configure_threads_from_env();
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Iterate(args) => cmd_iterate(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Liouville(args) => cmd_liouville(args),
        Command::Sample(args) => cmd_sample(args),
        Command::Seeds => cmd_seeds(),
    };
    ExitCode::from(code)
}

fn fail(code: u8, message: impl std::fmt::Display) -> u8 {
    eprintln!("error: {message}");
    code
}

// Long expressions go to the JSON files; stdout gets a preview.
fn clip(s: &str) -> String {
    if s.len() > 96 {
        format!("{}...", &s[..93])
    } else {
        s.to_string()
    }
}

/// Resolve (field, system, config) from --seed or inline expressions.
fn resolve_field(
    args: &FieldArgs,
    cfg: &mut RunConfig,
) -> Result<(VectorField, EquationSystem), (u8, String)> {
    let system_override = match &args.system {
        Some(text) => Some(
            EquationSystem::parse(text)
                .ok_or((EXIT_PARSE, format!("unknown system '{text}' (sw | freund)")))?,
        ),
        None => None,
    };
    if let Some(name) = &args.seed {
        let seed = seeds::find(name)
            .ok_or((EXIT_PARSE, format!("unknown seed '{name}' (see `hopflift seeds`)")))?;
        seed.apply_params(cfg);
        return Ok((seed.h0_field(), system_override.unwrap_or(seed.system)));
    }
    match (&args.hx, &args.hy, &args.hz) {
        (Some(hx), Some(hy), Some(hz)) => {
            let field =
                seeds::parse_field_with_config([hx.as_str(), hy.as_str(), hz.as_str()], cfg)
                    .map_err(|e| (EXIT_PARSE, e.to_string()))?;
            let system = system_override
                .ok_or((EXIT_PARSE, "--system is required for inline fields".to_string()))?;
            Ok((field, system))
        }
        _ => Err((
            EXIT_PARSE,
            "provide either --seed NAME or all of --hx --hy --hz".to_string(),
        )),
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), (u8, String)> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .map_err(|e| (EXIT_FAIL, format!("cannot create {}: {e}", parent.display())))?;
        }
    }
    std::fs::write(path, contents)
        .map_err(|e| (EXIT_FAIL, format!("cannot write {}: {e}", path.display())))
}

fn to_pretty_json<T: serde::Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("serialization cannot fail");
    out.push('\n');
    out
}

fn cmd_iterate(args: IterateArgs) -> u8 {
    let mut cfg = match args.config.build() {
        Ok(cfg) => cfg,
        Err(e) => return fail(EXIT_PARSE, e),
    };
    let (field, system) = match resolve_field(&args.field, &mut cfg) {
        Ok(v) => v,
        Err((code, msg)) => return fail(code, msg),
    };
    let trace = match run(&field, system, &cfg) {
        Ok(t) => t,
        Err(e) => return fail(EXIT_PARSE, e),
    };
    let record = trace.to_record(&cfg.params, !args.no_timings);
    let trace_path = args.config.out_dir.join("trace.json");
    if let Err((code, msg)) = write_file(&trace_path, &to_pretty_json(&record)) {
        return fail(code, msg);
    }
    println!(
        "status: {:?} after {} steps (node counts {:?})",
        trace.status,
        trace.iterates.len() - 1,
        trace.node_counts
    );
    for (i, step) in record.steps.iter().enumerate() {
        println!(
            "  step {}: distance {:.3e}, {} nodes",
            i + 1,
            step.distance,
            step.node_count
        );
    }
    println!("trace: {}", trace_path.display());
    match trace.status {
        IterationStatus::Converged | IterationStatus::ExactFixedPoint => {
            let solution = solution_record(&trace, cfg.domain());
            let sol_path = args.config.out_dir.join("solution.json");
            if let Err((code, msg)) = write_file(&sol_path, &to_pretty_json(&solution)) {
                return fail(code, msg);
            }
            println!("solution: {}", sol_path.display());
            for (label, comps) in [("H", &solution.h), ("A", &solution.a), ("B", &solution.b)] {
                println!(
                    "{label} = ({}, {}, {})",
                    clip(&comps[0]),
                    clip(&comps[1]),
                    clip(&comps[2])
                );
            }
            EXIT_OK
        }
        IterationStatus::MaxIterations | IterationStatus::SizeBlowup => EXIT_GAVE_UP,
        IterationStatus::EvaluationFailure => {
            if let Some(f) = &trace.failure {
                eprintln!("evaluation failure: {f}");
            }
            EXIT_EVAL
        }
    }
}

fn parse_perturb_target(text: &str) -> Option<(char, usize)> {
    let (kind, index) = match text {
        "h1" | "h2" | "h3" => ('h', text[1..].parse::<usize>().unwrap() - 1),
        "a1" | "a2" | "a3" => ('a', text[1..].parse::<usize>().unwrap() - 1),
        "b1" | "b2" | "b3" => ('b', text[1..].parse::<usize>().unwrap() - 1),
        "psi1" => ('p', 0),
        "psi2" => ('p', 1),
        _ => return None,
    };
    Some((kind, index))
}

fn first_nonzero(f: &VectorField) -> Option<usize> {
    (0..3).find(|&k| !f.component(k).is_zero())
}

fn scale_component(f: &VectorField, index: usize, factor: f64, domain: Domain) -> VectorField {
    let mut comps = f.components().clone();
    comps[index] = (hopflift::expr::Expr::number(factor) * comps[index].clone()).simplified(domain);
    let [c1, c2, c3] = comps;
    VectorField::new(c1, c2, c3)
}

fn cmd_verify(args: VerifyArgs) -> u8 {
    let mut cfg = match args.config.build() {
        Ok(cfg) => cfg,
        Err(e) => return fail(EXIT_PARSE, e),
    };
    let domain = cfg.domain();
    let factor = 1.0 + args.perturb.unwrap_or(0.0);
    let target = match &args.perturb_target {
        Some(t) => match parse_perturb_target(t) {
            Some(v) => Some(v),
            None => return fail(EXIT_PARSE, format!("unknown perturb target '{t}'")),
        },
        None => None,
    };

    type CsvTuple = (SolutionTuple, VectorField, EquationSystem);
    let report: Result<(VerificationReport, Option<CsvTuple>), _> = if args.use_expected {
        let Some(name) = &args.field.seed else {
            return fail(EXIT_PARSE, "--use-expected requires --seed");
        };
        let Some(seed) = seeds::find(name) else {
            return fail(EXIT_PARSE, format!("unknown seed '{name}'"));
        };
        seed.apply_params(&mut cfg);
        let (Some(h), Some(a), Some(b), Some(psi)) = (
            seed.expected_h_field(),
            seed.expected_a_field(),
            seed.expected_b_field(),
            seed.expected_spinor(),
        ) else {
            return fail(EXIT_PARSE, format!("seed '{name}' has no expected tuple"));
        };
        let system = args
            .field
            .system
            .as_deref()
            .and_then(EquationSystem::parse)
            .unwrap_or(seed.system);
        let mut tuple = SolutionTuple { h, psi, a, b };
        if factor != 1.0 {
            let (kind, index) = target.unwrap_or_else(|| {
                ('a', first_nonzero(&tuple.a).unwrap_or(0))
            });
            match kind {
                'h' => tuple.h = scale_component(&tuple.h, index, factor, domain),
                'a' => tuple.a = scale_component(&tuple.a, index, factor, domain),
                'b' => tuple.b = scale_component(&tuple.b, index, factor, domain),
                'p' => tuple.psi = tuple.psi.scale_component(index, factor),
                _ => unreachable!(),
            }
        }
        let b_actual = tuple.b.clone();
        verify_tuple(&tuple, system, &cfg).map(|r| (r, Some((tuple, b_actual, system))))
    } else {
        let (field, system) = match resolve_field_for_verify(&args.field, &mut cfg) {
            Ok(v) => v,
            Err((code, msg)) => return fail(code, msg),
        };
        let field = if factor != 1.0 {
            let (kind, index) =
                target.unwrap_or_else(|| ('h', first_nonzero(&field).unwrap_or(0)));
            if kind != 'h' {
                return fail(
                    EXIT_PARSE,
                    "only h1..h3 perturbation targets apply without --use-expected",
                );
            }
            scale_component(&field, index, factor, domain)
        } else {
            field
        };
        verify_solution(&field, system, &cfg).map(|r| {
            // rebuild the reconstructed tuple for optional CSV export
            let h = field.simplified(domain);
            let psi = hopflift::lift::lift_spinor(&h, cfg.section, domain);
            let a = hopflift::lift::lift_potential(&h, domain);
            let sign = hopflift::expr::Expr::number(system.sign());
            let b_tuple = h.map(|c| (sign.clone() * c.clone()).simplified(domain));
            let b_actual = a.curl(domain);
            let tuple = SolutionTuple { h, psi, a, b: b_tuple };
            (r, Some((tuple, b_actual, system)))
        })
    };

    let (report, csv_tuple) = match report {
        Ok(r) => r,
        Err(hopflift::verify::VerifyError::Eval(e)) => return fail(EXIT_EVAL, e),
        Err(e) => return fail(EXIT_PARSE, e),
    };
    if args.residuals_csv {
        match csv_tuple {
            Some((tuple, b_actual, system)) => {
                let samples = match hopflift::fields::sample_points(
                    &cfg.sample_config(),
                    &tuple.h,
                    &cfg.binding(),
                    cfg.section,
                ) {
                    Ok(s) => s,
                    Err(e) => return fail(EXIT_EVAL, e),
                };
                match hopflift::verify::residuals_csv(
                    &tuple,
                    &b_actual,
                    system,
                    &samples,
                    &cfg.binding(),
                    domain,
                    cfg.eps_mag,
                ) {
                    Ok(csv) => {
                        let path = args.config.out_dir.join("residuals.csv");
                        if let Err((code, msg)) = write_file(&path, &csv) {
                            return fail(code, msg);
                        }
                        println!("residuals: {}", path.display());
                    }
                    Err(e) => return fail(EXIT_EVAL, e),
                }
            }
            None => return fail(EXIT_PARSE, "internal: no tuple for residual export"),
        }
    }
    let table = report.to_table();
    print!("{table}");
    let json_path = args.config.out_dir.join("report.json");
    let txt_path = args.config.out_dir.join("report.txt");
    if let Err((code, msg)) = write_file(&json_path, &to_pretty_json(&report)) {
        return fail(code, msg);
    }
    if let Err((code, msg)) = write_file(&txt_path, &table) {
        return fail(code, msg);
    }
    println!("report: {} and {}", json_path.display(), txt_path.display());
    if report.pass {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}

/// For `verify --seed` without --use-expected, the candidate field is the
/// seed's expected fixed point (the seed itself is an initial guess, not a
/// solution).
fn resolve_field_for_verify(
    args: &FieldArgs,
    cfg: &mut RunConfig,
) -> Result<(VectorField, EquationSystem), (u8, String)> {
    if let Some(name) = &args.seed {
        let seed = seeds::find(name)
            .ok_or((EXIT_PARSE, format!("unknown seed '{name}' (see `hopflift seeds`)")))?;
        seed.apply_params(cfg);
        let h = seed.expected_h_field().ok_or((
            EXIT_PARSE,
            format!("seed '{name}' has no expected solution; pass --hx/--hy/--hz"),
        ))?;
        let system = args
            .field_system_override()
            .unwrap_or(seed.system);
        return Ok((h, system));
    }
    resolve_field(args, cfg)
}

impl FieldArgs {
    fn field_system_override(&self) -> Option<EquationSystem> {
        self.system.as_deref().and_then(EquationSystem::parse)
    }
}

fn cmd_liouville(args: LiouvilleArgs) -> u8 {
    let threshold = args.residual_threshold;
    let step = args.step;
    let params = hopflift::expr::Binding::new();

    // (grid, omega callable description)
    enum Mode {
        Map { alt: bool, g: AnalyticMap },
        Zn(Rational64),
    }
    let mode = if let Some(n_text) = &args.zn {
        let n = parse_rational(n_text);
        let Some(n) = n else {
            return fail(EXIT_PARSE, format!("cannot parse order '{n_text}'"));
        };
        if !is_half_integer(n) {
            return fail(
                EXIT_PARSE,
                format!("order must be a positive half-integer (1/2, 1, 3/2, ...), got {n}"),
            );
        }
        Mode::Zn(n)
    } else {
        let Some(g_text) = &args.g else {
            return fail(EXIT_PARSE, "provide --g EXPR with --alt/--ns, or --zn N");
        };
        let g = match AnalyticMap::parse(g_text) {
            Ok(g) => g,
            Err(e) => return fail(EXIT_PARSE, e),
        };
        if !args.alt && !args.ns {
            return fail(EXIT_PARSE, "choose an ansatz: --alt or --ns");
        }
        Mode::Map { alt: args.alt, g }
    };

    let (grid, solution): (Vec<[f64; 2]>, PlanarSolution) = match mode {
        Mode::Map { alt: true, g } => {
            let (lo, hi) = (args.grid_min.unwrap_or(0.5), args.grid_max.unwrap_or(1.5));
            (
                rect_grid(lo, hi, args.grid_n),
                PlanarSolution::from_alt(g, params),
            )
        }
        Mode::Map { alt: false, g } => {
            let (lo, hi) = (args.grid_min.unwrap_or(0.1), args.grid_max.unwrap_or(0.55));
            (
                rect_grid(lo, hi, args.grid_n),
                PlanarSolution::from_ns(g, params),
            )
        }
        Mode::Zn(n) => {
            let grid = match sector_grid(n, 0.6, 1.4, args.grid_n, 0.1) {
                Ok(g) => g,
                Err(e) => return fail(EXIT_PARSE, e),
            };
            let solution = match PlanarSolution::from_zn(n) {
                Ok(s) => s,
                Err(e) => return fail(EXIT_PARSE, e),
            };
            (grid, solution)
        }
    };

    let stats = match solution.residual(&grid, step, threshold) {
        Ok(s) => s,
        Err(e) => return fail(EXIT_EVAL, e),
    };

    let mut csv = String::from("u,v,omega,B,residual\n");
    for &[u, v] in &grid {
        let w = match solution.omega(u, v) {
            Ok(w) => w,
            Err(e) => return fail(EXIT_EVAL, e),
        };
        // per-point residual with the same stencil
        let r = match solution.residual(&[[u, v]], step, threshold) {
            Ok(s) => s.max,
            Err(e) => return fail(EXIT_EVAL, e),
        };
        csv.push_str(&format!(
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
            u,
            v,
            w,
            (2.0 * w).exp(),
            r
        ));
    }
    println!("singular locus: {}", solution.singular_locus);
    let out_path = args
        .out
        .unwrap_or_else(|| args.out_dir.join("liouville.csv"));
    if let Err((code, msg)) = write_file(&out_path, &csv) {
        return fail(code, msg);
    }
    println!(
        "residual max {:.3e} mean {:.3e} over {} points (threshold {:.1e}): {}",
        stats.max,
        stats.mean,
        stats.point_count,
        threshold,
        if stats.pass { "pass" } else { "FAIL" }
    );
    println!("csv: {}", out_path.display());
    if stats.pass {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}

fn parse_rational(text: &str) -> Option<Rational64> {
    if let Some((n, d)) = text.split_once('/') {
        let n: i64 = n.trim().parse().ok()?;
        let d: i64 = d.trim().parse().ok()?;
        if d == 0 {
            return None;
        }
        return Some(Rational64::new(n, d));
    }
    let v: f64 = text.trim().parse().ok()?;
    hopflift::expr::rational_from_f64(v)
}

fn cmd_sample(args: SampleArgs) -> u8 {
    let mut cfg = match args.config.build() {
        Ok(cfg) => cfg,
        Err(e) => return fail(EXIT_PARSE, e),
    };
    let (field, _system) = match resolve_field(
        &FieldArgs {
            system: args.field.system.clone().or(Some("sw".into())),
            ..args.field.clone()
        },
        &mut cfg,
    ) {
        Ok(v) => v,
        Err((code, msg)) => return fail(code, msg),
    };
    let samples = match sample_points(&cfg.sample_config(), &field, &cfg.binding(), cfg.section) {
        Ok(s) => s,
        Err(e) => return fail(EXIT_EVAL, e),
    };
    let out_path = args
        .out
        .unwrap_or_else(|| args.config.out_dir.join("samples.csv"));
    if let Err((code, msg)) = write_file(&out_path, &samples.to_csv()) {
        return fail(code, msg);
    }
    println!("{} points -> {}", samples.len(), out_path.display());
    EXIT_OK
}

fn cmd_seeds() -> u8 {
    println!(
        "{:<14} {:<15} {:<34} {:<8} summary",
        "name", "system", "H0", "expected"
    );
    for seed in seeds::registry() {
        println!(
            "{:<14} {:<15} {:<34} {:<8} {}",
            seed.name,
            seed.system.name(),
            format!("({}, {}, {})", seed.h0[0], seed.h0[1], seed.h0[2]),
            if seed.has_expected() { "yes" } else { "no" },
            seed.summary
        );
    }
    EXIT_OK
}
