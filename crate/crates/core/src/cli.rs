//! `covosc` command-line front end.
//!
//! Every subcommand renders a complete document in memory and then writes it
//! to `--output` (or standard output). Output depends only on the flags and
//! `COVOSC_GRID_DEFAULT`, so identical invocations give identical bytes.
//!
//! Exit codes: 0 on success, 2 for invalid flags or inputs, 3 when a numerical
//! tolerance check fails (the document is still written in that case when it
//! could be produced).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::density::{
    self, entropy_report_on, marginal_closed_form, marginal_numeric, reduced_density_kernel,
    von_neumann_entropy_numeric, EntropyMatch, EntropyReport,
};
use crate::error::Error;
use crate::kinematics::{
    from_light_cone, momentum_from_light_cone, LightConeCoords, MomentumLightCone, Rapidity,
    PROTON_MASS_GEV,
};
use crate::numerics::{trapezoid_weights, GridSpec};
use crate::parton::{beam_report, decoherence_report, squeeze_geometry, DecoherenceReport, SqueezeGeometry};
use crate::tolerances;
use crate::wavefunction::{schmidt_coefficients, BoostedGroundState, NORM};

pub const GRID_ENV: &str = "COVOSC_GRID_DEFAULT";

/// Number of points on each sampled 1-σ contour.
pub const CONTOUR_POINTS: usize = 72;

pub const EXIT_INVALID: i32 = 2;
pub const EXIT_TOLERANCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "covosc", version, about = "Covariant harmonic oscillator: wave functions, density matrices, entropy and parton observables")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Space-time wave function and density on a 2D grid
    Wavefunction(FieldArgs),
    /// Momentum-energy wave function and density on a 2D grid
    Momentum(FieldArgs),
    /// Marginal density over z, by quadrature and in closed form
    Marginal(FieldArgs),
    /// Reduced density kernel K(z, z′) with the time separation traced out
    Kernel(FieldArgs),
    /// Entropies over a range of rapidities
    EntropyCurve(CurveArgs),
    /// Schmidt coefficients of the boosted ground state
    Schmidt(SchmidtArgs),
    /// Decoherence ratio and squeeze geometry
    Parton(PartonArgs),
    /// Ellipse axes and 1-σ contours in both planes
    FigureData(FigureArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; standard output when omitted
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct FieldArgs {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub eta: f64,
    /// Grid as min:max:points
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CurveArgs {
    /// start:stop:steps, giving steps + 1 evenly spaced rapidities
    #[arg(long, default_value = "0:2:8", allow_hyphen_values = true)]
    pub eta_range: String,
    /// Kernel grid as min:max:points; chosen per rapidity when omitted
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SchmidtArgs {
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub eta: f64,
    #[arg(long, default_value_t = 20)]
    pub nmax: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct PartonArgs {
    #[arg(long, allow_negative_numbers = true, conflicts_with = "energy")]
    pub eta: Option<f64>,
    /// Beam energy in GeV
    #[arg(long)]
    pub energy: Option<f64>,
    /// Particle mass in GeV (default: proton)
    #[arg(long, requires = "energy")]
    pub mass: Option<f64>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct FigureArgs {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub eta: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

/// A failure with its process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn invalid(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_INVALID,
            message: message.into(),
        }
    }

    fn tolerance(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_TOLERANCE,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError {
            code: if e.is_numerical() { EXIT_TOLERANCE } else { EXIT_INVALID },
            message: e.to_string(),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

/// A rendered document plus any tolerance checks that failed while making it.
pub struct Rendered {
    pub body: String,
    pub failures: Vec<String>,
}

/// Tabular output with metadata.
struct Table {
    metadata: BTreeMap<String, Value>,
    columns: Vec<&'static str>,
    rows: Vec<Vec<f64>>,
}

impl Table {
    fn new(columns: &[&'static str]) -> Self {
        Table {
            metadata: BTreeMap::new(),
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    fn meta(&mut self, key: &str, value: impl Into<Value>) {
        self.metadata.insert(key.to_string(), value.into());
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => {
                let mut s = String::new();
                for (k, v) in &self.metadata {
                    let v = match v {
                        Value::String(s) => s.clone(),
                        other => other.to_string(),
                    };
                    let _ = writeln!(s, "# {k}={v}");
                }
                s.push_str(&self.columns.join(","));
                s.push('\n');
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(|&x| fmt_f64(x)).collect();
                    s.push_str(&cells.join(","));
                    s.push('\n');
                }
                s
            }
            Format::Json => to_json(&json!({
                "metadata": self.metadata,
                "columns": self.columns,
                "rows": self.rows,
            })),
        }
    }
}

/// 17 significant digits.
fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn to_json(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn rapidity(eta: f64) -> Result<Rapidity, CliError> {
    Ok(Rapidity::new(eta)?)
}

fn grid_label(g: &GridSpec) -> String {
    format!("{}:{}:{}", g.min, g.max, g.points)
}

/// `--grid`, then `COVOSC_GRID_DEFAULT`, then `fallback`.
fn resolve_grid(flag: Option<&str>, fallback: GridSpec) -> Result<GridSpec, CliError> {
    if let Some(s) = flag {
        return s.parse().map_err(|e: Error| CliError::invalid(format!("--grid: {e}")));
    }
    match std::env::var(GRID_ENV) {
        Ok(s) => s
            .parse()
            .map_err(|e: Error| CliError::invalid(format!("{GRID_ENV}: {e}"))),
        Err(_) => Ok(fallback),
    }
}

fn parse_eta_range(s: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::invalid(format!("--eta-range: expected start:stop:steps, got {s:?}"));
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let start: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let stop: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let steps: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if steps < 1 || !start.is_finite() || !stop.is_finite() {
        return Err(bad());
    }
    Ok((0..=steps)
        .map(|k| start + (stop - start) * k as f64 / steps as f64)
        .collect())
}

fn check(failures: &mut Vec<String>, what: &str, deviation: f64, limit: f64) {
    if deviation.is_nan() || deviation > limit {
        failures.push(format!("{what}: deviation {deviation:e} exceeds {limit:e}"));
    }
}

/// Samples `f` on the 2D grid in t-major order and checks that the density
/// integrates to one.
fn field_table(
    eta: Rapidity,
    grid: &GridSpec,
    columns: &[&'static str],
    amplitude: impl Fn(f64, f64) -> f64,
) -> (Table, Vec<String>) {
    let x = grid.nodes();
    let w = trapezoid_weights(grid);
    let mut table = Table::new(columns);
    let mut integral = 0.0;
    for (j, &t) in x.iter().enumerate() {
        for (i, &z) in x.iter().enumerate() {
            let a = amplitude(z, t);
            let d = a * a;
            integral += w[i] * w[j] * d;
            table.rows.push(vec![z, t, a, d]);
        }
    }
    let mut failures = Vec::new();
    check(&mut failures, "2D normalization", (integral - 1.0).abs(), tolerances::SAMPLED_2D_NORMALIZATION);
    table.meta("eta", eta.value());
    table.meta("grid", grid_label(grid));
    table.meta("integral", integral);
    table.meta("normalization_tolerance", tolerances::SAMPLED_2D_NORMALIZATION);
    (table, failures)
}

fn cmd_wavefunction(args: &FieldArgs) -> Result<Rendered, CliError> {
    let eta = rapidity(args.eta)?;
    let grid = resolve_grid(args.grid.as_deref(), density::sampling_grid(eta))?;
    let state = BoostedGroundState::new(eta);
    let (table, failures) = field_table(eta, &grid, &["z", "t", "psi", "density"], |z, t| state.psi(z, t));
    Ok(Rendered {
        body: table.render(args.out.format),
        failures,
    })
}

fn cmd_momentum(args: &FieldArgs) -> Result<Rendered, CliError> {
    let eta = rapidity(args.eta)?;
    let grid = resolve_grid(args.grid.as_deref(), density::sampling_grid(eta))?;
    let state = BoostedGroundState::new(eta);
    let (table, failures) = field_table(eta, &grid, &["q_z", "q_0", "phi", "density"], |qz, q0| state.phi(qz, q0));
    Ok(Rendered {
        body: table.render(args.out.format),
        failures,
    })
}

fn cmd_marginal(args: &FieldArgs) -> Result<Rendered, CliError> {
    let eta = rapidity(args.eta)?;
    let grid = resolve_grid(args.grid.as_deref(), density::default_grid(eta))?;
    let marginal = marginal_numeric(eta, &grid)?;
    let mut table = Table::new(&["z", "rho_numeric", "rho_closed_form"]);
    let mut max_diff = 0.0f64;
    for (z, &rho) in grid.nodes().into_iter().zip(&marginal.values) {
        let closed = marginal_closed_form(eta, z);
        max_diff = max_diff.max((rho - closed).abs());
        table.rows.push(vec![z, rho, closed]);
    }
    let integral = marginal.integral();
    let mut failures = Vec::new();
    check(&mut failures, "marginal normalization", (integral - 1.0).abs(), tolerances::NORMALIZATION);
    check(&mut failures, "marginal vs closed form", max_diff, tolerances::QUADRATURE_REFINEMENT);
    table.meta("eta", eta.value());
    table.meta("grid", grid_label(&grid));
    table.meta("integral", integral);
    table.meta("normalization_tolerance", tolerances::NORMALIZATION);
    table.meta("max_abs_diff", max_diff);
    table.meta("pointwise_tolerance", tolerances::QUADRATURE_REFINEMENT);
    Ok(Rendered {
        body: table.render(args.out.format),
        failures,
    })
}

fn cmd_kernel(args: &FieldArgs) -> Result<Rendered, CliError> {
    let eta = rapidity(args.eta)?;
    let grid = resolve_grid(args.grid.as_deref(), density::default_grid(eta))?;
    let kernel = reduced_density_kernel(eta, &grid)?;
    let zs = grid.nodes();
    let mut table = Table::new(&["z", "z_prime", "k"]);
    for (i, &z) in zs.iter().enumerate() {
        for (j, &zp) in zs.iter().enumerate() {
            table.rows.push(vec![z, zp, kernel.value(i, j)]);
        }
    }
    let trace = kernel.trace();
    let mut failures = Vec::new();
    check(&mut failures, "kernel trace", (trace - 1.0).abs(), tolerances::NORMALIZATION);
    table.meta("eta", eta.value());
    table.meta("grid", grid_label(&grid));
    table.meta("weight", kernel.weight);
    table.meta("trace", trace);
    table.meta("trace_tolerance", tolerances::NORMALIZATION);
    table.meta("purity", kernel.purity());
    table.meta("s_numeric", von_neumann_entropy_numeric(&kernel)?);
    Ok(Rendered {
        body: table.render(args.out.format),
        failures,
    })
}

/// The closed form confirmed across the whole curve, if any. Rows at η = 0,
/// where both candidates vanish, do not discriminate.
fn consistent_match(reports: &[EntropyReport]) -> Option<EntropyMatch> {
    let mut found = None;
    for r in reports {
        match r.matched_form {
            EntropyMatch::Both => {}
            EntropyMatch::Neither => return None,
            m => match found {
                None => found = Some(m),
                Some(prev) if prev != m => return None,
                _ => {}
            },
        }
    }
    found.or_else(|| (!reports.is_empty()).then_some(EntropyMatch::Both))
}

fn cmd_entropy_curve(args: &CurveArgs) -> Result<Rendered, CliError> {
    let etas = parse_eta_range(&args.eta_range)?;
    let mut reports = Vec::with_capacity(etas.len());
    for e in etas {
        let eta = rapidity(e)?;
        let grid = resolve_grid(args.grid.as_deref(), density::default_grid(eta))?;
        reports.push(entropy_report_on(eta, &grid)?);
    }
    let matched = consistent_match(&reports);
    let mut failures = Vec::new();
    if matched.is_none() {
        failures.push("numeric entropy does not match a single closed form across the curve".into());
    }
    let matched_label = matched.map_or("inconsistent", EntropyMatch::as_str);

    let body = match args.out.format {
        Format::Csv => {
            let mut table = Table::new(&["eta", "s_numeric", "s_half_rapidity", "s_schmidt", "s_differential"]);
            for r in &reports {
                table.rows.push(vec![
                    r.eta.value(),
                    r.s_numeric,
                    r.s_half_rapidity_form,
                    r.s_schmidt_closed_form,
                    r.s_differential_marginal,
                ]);
            }
            table.meta("eta_range", args.eta_range.clone());
            table.meta("matched_form", matched_label);
            table.meta("match_tolerance", tolerances::ENTROPY_MATCH);
            table.meta("units", "nats");
            table.render(Format::Csv)
        }
        Format::Json => to_json(&json!({
            "eta_range": args.eta_range,
            "matched_form": matched_label,
            "match_tolerance": tolerances::ENTROPY_MATCH,
            "units": "nats",
            "reports": reports,
        })),
    };
    Ok(Rendered { body, failures })
}

fn cmd_schmidt(args: &SchmidtArgs) -> Result<Rendered, CliError> {
    let eta = rapidity(args.eta)?;
    let expansion = schmidt_coefficients(eta, args.nmax)?;
    let mut table = Table::new(&["n", "c_n", "c_n_squared"]);
    for (n, &c) in expansion.coefficients.iter().enumerate() {
        table.rows.push(vec![n as f64, c, c * c]);
    }
    table.meta("eta", eta.value());
    table.meta("nmax", args.nmax);
    table.meta("ratio", expansion.ratio());
    table.meta("max_cross_term", expansion.max_cross_term);
    table.meta("cross_term_tolerance", tolerances::SCHMIDT_CROSS_TERM);
    table.meta("sum_of_squares", expansion.sum_of_squares());
    table.meta("entropy", expansion.entropy());
    Ok(Rendered {
        body: table.render(args.out.format),
        failures: Vec::new(),
    })
}

#[derive(Serialize)]
struct PartonDocument {
    decoherence: DecoherenceReport,
    squeeze: SqueezeGeometry,
}

fn cmd_parton(args: &PartonArgs) -> Result<Rendered, CliError> {
    let report = match (args.eta, args.energy) {
        (Some(e), None) => decoherence_report(rapidity(e)?),
        (None, Some(energy)) => beam_report(energy, args.mass.unwrap_or(PROTON_MASS_GEV))?,
        (None, None) => decoherence_report(Rapidity::ZERO),
        (Some(_), Some(_)) => return Err(CliError::invalid("--eta conflicts with --energy")),
    };
    let squeeze = squeeze_geometry(report.eta);
    let mut failures = Vec::new();
    let expected = (-2.0 * report.eta.value()).exp();
    check(&mut failures, "decoherence ratio", ((report.ratio - expected) / expected).abs(), 1e-12);

    let body = match args.out.format {
        Format::Json => to_json(&PartonDocument {
            decoherence: report,
            squeeze,
        }),
        Format::Csv => {
            let mut table = Table::new(&[
                "eta",
                "period_dilation",
                "interaction_time_scale",
                "ratio",
                "major_axis_scale",
                "minor_axis_scale",
            ]);
            table.rows.push(vec![
                report.eta.value(),
                report.period_dilation,
                report.interaction_time_scale,
                report.ratio,
                squeeze.major_axis_scale,
                squeeze.minor_axis_scale,
            ]);
            if let (Some(energy), Some(mass)) = (report.beam_energy, report.mass) {
                table.meta("beam_energy_gev", energy);
                table.meta("mass_gev", mass);
            }
            table.render(Format::Csv)
        }
    };
    Ok(Rendered { body, failures })
}

/// Points of the ellipse e^{−2η}a² + e^{2η}b² = 1 in light-cone coordinates.
fn light_cone_ellipse(eta: f64) -> Vec<(f64, f64)> {
    (0..CONTOUR_POINTS)
        .map(|k| {
            let theta = std::f64::consts::TAU * k as f64 / CONTOUR_POINTS as f64;
            (eta.exp() * theta.cos(), (-eta).exp() * theta.sin())
        })
        .collect()
}

#[derive(Serialize)]
struct PlaneFigure {
    /// Unit vector of the expanded light-cone axis.
    major_axis_direction: [f64; 2],
    minor_axis_direction: [f64; 2],
    /// Points where the wave function falls to e^{−1/2} of its peak.
    contour: Vec<[f64; 2]>,
}

#[derive(Serialize)]
struct FigureDocument {
    eta: f64,
    semi_axes: [f64; 2],
    contour_level: f64,
    spacetime: PlaneFigure,
    momentum: PlaneFigure,
    congruence_error: f64,
    contour_tolerance: f64,
}

fn cmd_figure_data(args: &FigureArgs) -> Result<Rendered, CliError> {
    let eta = rapidity(args.eta)?;
    let e = eta.value();
    let state = BoostedGroundState::new(eta);
    let geometry = squeeze_geometry(eta);
    let ellipse = light_cone_ellipse(e);

    let spacetime: Vec<[f64; 2]> = ellipse
        .iter()
        .map(|&(u, v)| {
            let p = from_light_cone(LightConeCoords { u, v });
            [p.z, p.t]
        })
        .collect();
    let momentum: Vec<[f64; 2]> = ellipse
        .iter()
        .map(|&(q_u, q_v)| {
            let (qz, q0) = momentum_from_light_cone(MomentumLightCone { q_u, q_v });
            [qz, q0]
        })
        .collect();

    // every contour point must sit on the e^{-1/2} level of its wave function
    let level = NORM * (-0.5f64).exp();
    let mut level_error = 0.0f64;
    for (p, q) in spacetime.iter().zip(&momentum) {
        level_error = level_error.max((state.psi(p[0], p[1]) - level).abs());
        level_error = level_error.max((state.phi(q[0], q[1]) - level).abs());
    }
    // congruence: the momentum contour is the space-time one rotated by 90°
    let congruence_error = spacetime
        .iter()
        .zip(&momentum)
        .map(|(p, q)| (q[0] + p[1]).abs().max((q[1] - p[0]).abs()))
        .fold(0.0, f64::max);

    const CONTOUR_TOLERANCE: f64 = 1e-12;
    let mut failures = Vec::new();
    check(&mut failures, "contour level", level_error, CONTOUR_TOLERANCE);
    check(&mut failures, "contour congruence", congruence_error, CONTOUR_TOLERANCE);

    // in the momentum plane q_u runs along (−1, 1)/√2 and q_v along (1, 1)/√2
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let (q_major, q_minor) = if e >= 0.0 { ([-r, r], [r, r]) } else { ([r, r], [-r, r]) };

    let body = match args.out.format {
        Format::Json => to_json(&FigureDocument {
            eta: e,
            semi_axes: [geometry.major_axis_scale, geometry.minor_axis_scale],
            contour_level: level,
            spacetime: PlaneFigure {
                major_axis_direction: geometry.major_axis_direction,
                minor_axis_direction: geometry.minor_axis_direction,
                contour: spacetime,
            },
            momentum: PlaneFigure {
                major_axis_direction: q_major,
                minor_axis_direction: q_minor,
                contour: momentum,
            },
            congruence_error,
            contour_tolerance: CONTOUR_TOLERANCE,
        }),
        Format::Csv => {
            let mut table = Table::new(&["plane", "index", "x", "y"]);
            for (plane, points) in [(0.0, &spacetime), (1.0, &momentum)] {
                for (k, p) in points.iter().enumerate() {
                    table.rows.push(vec![plane, k as f64, p[0], p[1]]);
                }
            }
            table.meta("eta", e);
            table.meta("plane_0", "spacetime (z, t)");
            table.meta("plane_1", "momentum (q_z, q_0)");
            table.meta("major_axis_scale", geometry.major_axis_scale);
            table.meta("minor_axis_scale", geometry.minor_axis_scale);
            table.meta("congruence_error", congruence_error);
            table.meta("contour_tolerance", CONTOUR_TOLERANCE);
            table.render(Format::Csv)
        }
    };
    Ok(Rendered { body, failures })
}

/// Produces the document for a parsed command line without writing it.
pub fn render(command: &Command) -> Result<Rendered, CliError> {
    match command {
        Command::Wavefunction(a) => cmd_wavefunction(a),
        Command::Momentum(a) => cmd_momentum(a),
        Command::Marginal(a) => cmd_marginal(a),
        Command::Kernel(a) => cmd_kernel(a),
        Command::EntropyCurve(a) => cmd_entropy_curve(a),
        Command::Schmidt(a) => cmd_schmidt(a),
        Command::Parton(a) => cmd_parton(a),
        Command::FigureData(a) => cmd_figure_data(a),
    }
}

fn output_path(command: &Command) -> Option<&PathBuf> {
    let out = match command {
        Command::Wavefunction(a) | Command::Momentum(a) | Command::Marginal(a) | Command::Kernel(a) => &a.out,
        Command::EntropyCurve(a) => &a.out,
        Command::Schmidt(a) => &a.out,
        Command::Parton(a) => &a.out,
        Command::FigureData(a) => &a.out,
    };
    out.output.as_ref()
}

/// Renders and writes the output, then reports failed tolerance checks.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    let rendered = render(&cli.command)?;
    let write_err = |e: std::io::Error| CliError::invalid(format!("writing output: {e}"));
    match output_path(&cli.command) {
        Some(path) => std::fs::write(path, rendered.body.as_bytes()).map_err(write_err)?,
        None => std::io::stdout()
            .lock()
            .write_all(rendered.body.as_bytes())
            .map_err(write_err)?,
    }
    if rendered.failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::tolerance(rendered.failures.join("; ")))
    }
}
