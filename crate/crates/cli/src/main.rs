//! Command-line front end: every diagnostic and certification exposed as a
//! subcommand with reproducible configuration and machine-readable output.
//!
//! Exit status: 0 when all verdicts of the run pass, 1 on a verdict failure,
//! 2 on configuration/schema errors, 3 when quadrature fails to converge.

use clap::{Parser, Subcommand, ValueEnum};
use mumshah::competitors::{
    disk_extension_energies, disk_trace, two_sector_competitor,
};
use mumshah::diagnostics::{
    energy_density, equilibrium_residual, prop31_gap_sweep, radius_grid, scan,
    sharpness_scan, BumpField, GridKind, MonotonicityReport, ScanRow, ScanTolerances,
};
use mumshah::geometry::{circle_crossings, DiskProbe, FieldModel, Point2, UnitVector};
use mumshah::quadrature::QuadratureSpec;
use mumshah::twopoint::{certify_lemma54, f_landscape, f_min};
use mumshah::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

const DLMS_TOL: f64 = 1e-6;
const PROP31_TOL: f64 = 1e-8;
const SLICE_TOL: f64 = 1e-8;
const DENSITY_TOL: f64 = 1e-8;
const EQUILIBRIUM_TOL: f64 = 1e-6;
const PROP31_DIRECTIONS: usize = 720;

#[derive(Parser)]
#[command(name = "mumshah", version, about = "Disk diagnostics for exact planar free-discontinuity minimizers")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// Model description: inline JSON or a path to a JSON file
    #[arg(long, global = true)]
    model: Option<String>,

    /// Probe center "X,Y"
    #[arg(long, global = true, default_value = "0,0", value_parser = parse_point)]
    center: (f64, f64),

    #[arg(long, global = true, default_value_t = 0.05)]
    r_min: f64,

    #[arg(long, global = true, default_value_t = 50.0)]
    r_max: f64,

    #[arg(long, global = true, default_value_t = 400)]
    r_steps: usize,

    #[arg(long, global = true, value_enum, default_value_t = Grid::Geometric)]
    grid: Grid,

    /// Gauss-Legendre nodes per quadrature panel
    #[arg(long, global = true, default_value_t = 16)]
    quad_order: usize,

    /// Relative tolerance for panel-doubling refinement
    #[arg(long, global = true, default_value_t = 1e-9)]
    quad_tol: f64,

    /// Fourier mode cutoff for competitor traces
    #[arg(long, global = true, default_value_t = 64)]
    fourier_modes: usize,

    /// Grid resolution for the two-point certification
    #[arg(long, global = true, default_value_t = 4096)]
    cert_n: usize,

    /// Output file (stdout when absent)
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Seed for sampled families (equilibrium bumps)
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Cmd {
    /// Entropy/density scan over a radius grid with the monotonicity verdict
    Scan,
    /// Tangential/normal balance residual over a radius grid
    Dlms,
    /// Directional circle lower-bound gaps over radii and 720 directions
    Prop31,
    /// Radial slice bound and energy density over a radius grid
    Slice,
    /// Entropy of the offset crack tip F(1, delta e1) over a delta grid
    Sharpness {
        #[arg(long, default_value_t = 0.01)]
        delta_min: f64,
        #[arg(long, default_value_t = 0.1)]
        delta_max: f64,
        #[arg(long, default_value_t = 12)]
        delta_steps: usize,
    },
    /// Harmonic-extension competitor energies at one probe disk
    Competitor {
        /// Probe radius
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        /// Optional path for the boundary-trace JSON export
        #[arg(long)]
        trace_out: Option<PathBuf>,
    },
    /// Two-point certification reports and f-landscape table
    Twopoint {
        /// Landscape grid resolution per alpha axis
        #[arg(long, default_value_t = 48)]
        landscape_n: usize,
    },
    /// Weak equilibrium residuals over a seeded family of test bumps
    Equilibrium {
        #[arg(long, default_value_t = 20)]
        bumps: usize,
    },
}

impl Cmd {
    fn name(&self) -> &'static str {
        match self {
            Cmd::Scan => "scan",
            Cmd::Dlms => "dlms",
            Cmd::Prop31 => "prop31",
            Cmd::Slice => "slice",
            Cmd::Sharpness { .. } => "sharpness",
            Cmd::Competitor { .. } => "competitor",
            Cmd::Twopoint { .. } => "twopoint",
            Cmd::Equilibrium { .. } => "equilibrium",
        }
    }
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum Grid {
    Geometric,
    Linear,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum Format {
    Csv,
    Json,
}

fn parse_point(s: &str) -> Result<(f64, f64), String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("expected \"X,Y\", got {s:?}"));
    }
    let x = parts[0].trim().parse::<f64>().map_err(|e| format!("center.x: {e}"))?;
    let y = parts[1].trim().parse::<f64>().map_err(|e| format!("center.y: {e}"))?;
    Ok((x, y))
}

/// Failures mapped to process exit codes.
enum AppError {
    Config(String),
    NoConvergence(String),
}

impl From<Error> for AppError {
    fn from(e: Error) -> Self {
        match e {
            Error::NoConvergence { .. } => AppError::NoConvergence(e.to_string()),
            other => AppError::Config(other.to_string()),
        }
    }
}

fn fmt(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else {
        format!("{x:.16e}")
    }
}

struct Output {
    config: Value,
    csv_header: String,
    csv_lines: Vec<String>,
    json_rows: Value,
    verdicts: Map<String, Value>,
}

impl Output {
    fn all_pass(&self) -> bool {
        self.verdicts
            .values()
            .filter_map(Value::as_bool)
            .all(|b| b)
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => {
                let mut s = String::new();
                s.push_str(&format!("# mumshah v{}\n", env!("CARGO_PKG_VERSION")));
                s.push_str(&format!("# config = {}\n", self.config));
                s.push_str(&self.csv_header);
                s.push('\n');
                for line in &self.csv_lines {
                    s.push_str(line);
                    s.push('\n');
                }
                s.push_str(&format!(
                    "# verdicts = {}\n",
                    Value::Object(self.verdicts.clone())
                ));
                s
            }
            Format::Json => {
                let doc = json!({
                    "config": self.config,
                    "rows": self.json_rows,
                    "verdicts": Value::Object(self.verdicts.clone()),
                });
                let mut s = serde_json::to_string_pretty(&doc).expect("serialization");
                s.push('\n');
                s
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(output) => {
            let text = output.render(cli.format);
            if let Some(path) = &cli.out {
                if let Err(e) = std::fs::write(path, &text) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            } else {
                let mut stdout = std::io::stdout().lock();
                if stdout.write_all(text.as_bytes()).is_err() {
                    return ExitCode::from(2);
                }
            }
            if output.all_pass() {
                ExitCode::SUCCESS
            } else {
                eprintln!("verdict failure: {}", Value::Object(output.verdicts));
                ExitCode::from(1)
            }
        }
        Err(AppError::Config(msg)) => {
            eprintln!("configuration error: {msg}");
            ExitCode::from(2)
        }
        Err(AppError::NoConvergence(msg)) => {
            eprintln!("quadrature failure: {msg}");
            ExitCode::from(3)
        }
    }
}

fn load_model(cli: &Cli) -> Result<FieldModel, AppError> {
    let raw = cli
        .model
        .as_ref()
        .ok_or_else(|| AppError::Config("--model is required for this command".into()))?;
    let text = if raw.trim_start().starts_with('{') {
        raw.clone()
    } else {
        std::fs::read_to_string(raw)
            .map_err(|e| AppError::Config(format!("cannot read model file {raw:?}: {e}")))?
    };
    FieldModel::from_json(&text).map_err(|e| AppError::Config(e.to_string()))
}

fn quad_spec(cli: &Cli) -> Result<QuadratureSpec, AppError> {
    if cli.quad_order < 4 {
        return Err(AppError::Config("--quad-order must be at least 4".into()));
    }
    if cli.quad_tol <= 0.0 {
        return Err(AppError::Config("--quad-tol must be positive".into()));
    }
    Ok(QuadratureSpec {
        nodes_per_panel: cli.quad_order,
        rel_tolerance: cli.quad_tol,
        ..QuadratureSpec::default()
    })
}

fn radii(cli: &Cli) -> Result<Vec<f64>, AppError> {
    if !(cli.r_min > 0.0 && cli.r_min < cli.r_max) {
        return Err(AppError::Config(format!(
            "need 0 < r_min < r_max, got {} .. {}",
            cli.r_min, cli.r_max
        )));
    }
    if cli.r_steps < 2 {
        return Err(AppError::Config("--r-steps must be at least 2".into()));
    }
    let kind = match cli.grid {
        Grid::Geometric => GridKind::Geometric,
        Grid::Linear => GridKind::Linear,
    };
    Ok(radius_grid(cli.r_min, cli.r_max, cli.r_steps, kind))
}

fn base_config(cli: &Cli, model_json: Option<&FieldModel>) -> Value {
    json!({
        "command": cli.command.name(),
        "model": model_json.map(|m| serde_json::from_str::<Value>(&m.to_json()).unwrap()),
        "center": [cli.center.0, cli.center.1],
        "r_min": cli.r_min,
        "r_max": cli.r_max,
        "r_steps": cli.r_steps,
        "grid": match cli.grid { Grid::Geometric => "geometric", Grid::Linear => "linear" },
        "quad_order": cli.quad_order,
        "quad_tol": cli.quad_tol,
        "quad_panels_per_arc": QuadratureSpec::default().panels_per_arc,
        "quad_refinement_levels": QuadratureSpec::default().refinement_levels,
        "fourier_modes": cli.fourier_modes,
        "fourier_samples_per_mode": 8,
        "cert_n": cli.cert_n,
        "prop31_directions": PROP31_DIRECTIONS,
        "seed": cli.seed,
        "tolerances": {
            "monotonicity": ScanTolerances::default().monotonicity,
            "diff_ineq": ScanTolerances::default().diff_ineq,
            "dlms": DLMS_TOL,
            "prop31": PROP31_TOL,
            "slice": SLICE_TOL,
            "density": DENSITY_TOL,
            "equilibrium": EQUILIBRIUM_TOL,
        },
    })
}

fn run(cli: &Cli) -> Result<Output, AppError> {
    match &cli.command {
        Cmd::Scan => cmd_scan(cli),
        Cmd::Dlms => cmd_dlms(cli),
        Cmd::Prop31 => cmd_prop31(cli),
        Cmd::Slice => cmd_slice(cli),
        Cmd::Sharpness {
            delta_min,
            delta_max,
            delta_steps,
        } => cmd_sharpness(cli, *delta_min, *delta_max, *delta_steps),
        Cmd::Competitor { radius, trace_out } => cmd_competitor(cli, *radius, trace_out.as_ref()),
        Cmd::Twopoint { landscape_n } => cmd_twopoint(cli, *landscape_n),
        Cmd::Equilibrium { bumps } => cmd_equilibrium(cli, *bumps),
    }
}

fn scan_report(cli: &Cli) -> Result<(FieldModel, MonotonicityReport), AppError> {
    let model = load_model(cli)?;
    let spec = quad_spec(cli)?;
    let grid = radii(cli)?;
    let report = scan(
        &model,
        Point2::new(cli.center.0, cli.center.1),
        &grid,
        &spec,
        &ScanTolerances::default(),
    );
    Ok((model, report))
}

fn cmd_scan(cli: &Cli) -> Result<Output, AppError> {
    let (model, report) = scan_report(cli)?;
    let mut verdicts = Map::new();
    verdicts.insert("monotone".into(), json!(report.verdict));
    verdicts.insert("diff_ineq".into(), json!(report.diff_ineq_ok));
    verdicts.insert(
        "min_forward_difference".into(),
        json!(report.min_forward_difference),
    );
    verdicts.insert("worst_radius".into(), json!(report.worst_radius));
    verdicts.insert(
        "diff_ineq_min_slack".into(),
        json!(report.diff_ineq_min_slack),
    );
    Ok(Output {
        config: base_config(cli, Some(&model)),
        csv_header: ScanRow::CSV_HEADER.into(),
        csv_lines: report.rows.iter().map(ScanRow::to_csv_line).collect(),
        json_rows: serde_json::to_value(&report.rows).unwrap(),
        verdicts,
    })
}

fn cmd_dlms(cli: &Cli) -> Result<Output, AppError> {
    let (model, report) = scan_report(cli)?;
    let mut worst = 0.0f64;
    let mut lines = Vec::new();
    let mut rows = Vec::new();
    for row in &report.rows {
        lines.push(format!(
            "{},{},{},{}",
            fmt(row.r),
            fmt(row.dlms_residual.unwrap_or(f64::NAN)),
            row.jump_count,
            row.skipped
        ));
        rows.push(json!({
            "r": row.r,
            "dlms_residual": row.dlms_residual,
            "jump_count": row.jump_count,
            "skipped": row.skipped,
        }));
        if let Some(res) = row.dlms_residual {
            worst = worst.max(res.abs());
        }
    }
    let mut verdicts = Map::new();
    verdicts.insert("dlms_within_tol".into(), json!(worst <= DLMS_TOL));
    verdicts.insert("max_abs_residual".into(), json!(worst));
    Ok(Output {
        config: base_config(cli, Some(&model)),
        csv_header: "r,dlms_residual,jump_count,skipped".into(),
        csv_lines: lines,
        json_rows: Value::Array(rows),
        verdicts,
    })
}

fn cmd_prop31(cli: &Cli) -> Result<Output, AppError> {
    let model = load_model(cli)?;
    let spec = quad_spec(cli)?;
    let grid = radii(cli)?;
    let x0 = Point2::new(cli.center.0, cli.center.1);
    let mut lines = Vec::new();
    let mut rows = Vec::new();
    let mut min_gap = f64::INFINITY;
    let mut min_at = (f64::NAN, f64::NAN);
    let mut skipped = 0usize;
    for &r in &grid {
        let disk = DiskProbe::new(x0, r);
        match prop31_gap_sweep(&model, &disk, PROP31_DIRECTIONS, &spec) {
            Ok(gaps) => {
                for (j, gap) in gaps.iter().enumerate() {
                    let angle =
                        2.0 * std::f64::consts::PI * j as f64 / PROP31_DIRECTIONS as f64;
                    lines.push(format!("{},{},{}", fmt(r), fmt(angle), fmt(*gap)));
                    rows.push(json!({"r": r, "q_angle": angle, "gap": gap}));
                    if *gap < min_gap {
                        min_gap = *gap;
                        min_at = (r, angle);
                    }
                }
            }
            Err(Error::TangentialContact { .. }) => skipped += 1,
            Err(e) => return Err(e.into()),
        }
    }
    let mut verdicts = Map::new();
    verdicts.insert("gap_nonnegative".into(), json!(min_gap >= -PROP31_TOL));
    verdicts.insert("min_gap".into(), json!(min_gap));
    verdicts.insert("min_gap_radius".into(), json!(min_at.0));
    verdicts.insert("min_gap_angle".into(), json!(min_at.1));
    verdicts.insert("skipped_radii".into(), json!(skipped));
    Ok(Output {
        config: base_config(cli, Some(&model)),
        csv_header: "r,q_angle,gap".into(),
        csv_lines: lines,
        json_rows: Value::Array(rows),
        verdicts,
    })
}

fn cmd_slice(cli: &Cli) -> Result<Output, AppError> {
    let (model, report) = scan_report(cli)?;
    let mut lines = Vec::new();
    let mut rows = Vec::new();
    let mut min_slice = f64::INFINITY;
    let mut min_e = f64::INFINITY;
    for row in &report.rows {
        let slice = row
            .circle_dirichlet
            .map(|d| d + row.jump_count as f64 - 2.0);
        lines.push(format!(
            "{},{},{},{},{}",
            fmt(row.r),
            fmt(slice.unwrap_or(f64::NAN)),
            fmt(row.e),
            row.jump_count,
            row.skipped
        ));
        rows.push(json!({
            "r": row.r,
            "slice_bound": slice,
            "E": row.e,
            "jump_count": row.jump_count,
            "skipped": row.skipped,
        }));
        if let Some(s) = slice {
            min_slice = min_slice.min(s);
            min_e = min_e.min(row.e);
        }
    }
    let mut verdicts = Map::new();
    verdicts.insert("slice_bound_holds".into(), json!(min_slice >= -SLICE_TOL));
    verdicts.insert(
        "density_at_least_two".into(),
        json!(min_e >= 2.0 - DENSITY_TOL),
    );
    verdicts.insert("min_slice_bound".into(), json!(min_slice));
    verdicts.insert("min_energy_density".into(), json!(min_e));
    Ok(Output {
        config: base_config(cli, Some(&model)),
        csv_header: "r,slice_bound,E,jump_count,skipped".into(),
        csv_lines: lines,
        json_rows: Value::Array(rows),
        verdicts,
    })
}

fn cmd_sharpness(
    cli: &Cli,
    delta_min: f64,
    delta_max: f64,
    delta_steps: usize,
) -> Result<Output, AppError> {
    if !(delta_min > 0.0 && delta_min <= delta_max && delta_max <= 0.2) {
        return Err(AppError::Config(format!(
            "need 0 < delta_min <= delta_max <= 0.2, got {delta_min} .. {delta_max}"
        )));
    }
    if delta_steps < 1 {
        return Err(AppError::Config("--delta-steps must be at least 1".into()));
    }
    let spec = quad_spec(cli)?;
    let deltas: Vec<f64> = (0..delta_steps)
        .map(|i| {
            if delta_steps == 1 {
                delta_min
            } else {
                let t = i as f64 / (delta_steps - 1) as f64;
                match cli.grid {
                    Grid::Geometric => delta_min * (delta_max / delta_min).powf(t),
                    Grid::Linear => delta_min + (delta_max - delta_min) * t,
                }
            }
        })
        .collect();
    let table = sharpness_scan(&deltas, &spec)?;
    let mut lines = Vec::new();
    let mut rows = Vec::new();
    let mut all_above = true;
    for &(d, f) in &table {
        let excess = f - 1.5;
        let slope = excess / d;
        all_above &= f > 1.5;
        lines.push(format!("{},{},{},{}", fmt(d), fmt(f), fmt(excess), fmt(slope)));
        rows.push(json!({"delta": d, "F": f, "excess": excess, "slope": slope}));
    }
    let first_slope = (table[0].1 - 1.5) / table[0].0;
    let mut verdicts = Map::new();
    verdicts.insert("entropy_above_threshold".into(), json!(all_above));
    verdicts.insert(
        "smallest_delta_slope_in_range".into(),
        json!((0.4..=0.6).contains(&first_slope)),
    );
    verdicts.insert("smallest_delta_slope".into(), json!(first_slope));
    Ok(Output {
        config: base_config(cli, None),
        csv_header: "delta,F,excess,slope".into(),
        csv_lines: lines,
        json_rows: Value::Array(rows),
        verdicts,
    })
}

fn cmd_competitor(
    cli: &Cli,
    radius: f64,
    trace_out: Option<&PathBuf>,
) -> Result<Output, AppError> {
    if radius <= 0.0 {
        return Err(AppError::Config("--radius must be positive".into()));
    }
    let model = load_model(cli)?;
    let spec = quad_spec(cli)?;
    let disk = DiskProbe::new(Point2::new(cli.center.0, cli.center.1), radius);
    let k = cli.fourier_modes;
    let n_samples = 8 * k;
    let crossings = circle_crossings(&model.jump_set(), &disk);
    let mut lines = Vec::new();
    let mut rows = Vec::new();
    let mut verdicts = Map::new();
    let push = |lines: &mut Vec<String>, rows: &mut Vec<Value>, name: &str, value: f64| {
        lines.push(format!("{name},{}", fmt(value)));
        rows.push(json!({"quantity": name, "value": value}));
    };
    match crossings.len() {
        0 => {
            let trace = disk_trace(&model, &disk, k, n_samples)?;
            let (ext, tau) = disk_extension_energies(&trace);
            push(&mut lines, &mut rows, "extension_energy_over_r", ext);
            push(&mut lines, &mut rows, "boundary_tau_energy", tau);
            verdicts.insert(
                "extension_le_boundary".into(),
                json!(ext <= tau + 1e-12),
            );
            if let Some(path) = trace_out {
                std::fs::write(path, trace.to_json())
                    .map_err(|e| AppError::Config(format!("cannot write trace: {e}")))?;
            }
        }
        2 => {
            let rep = two_sector_competitor(&model, &disk, k, n_samples)?;
            push(&mut lines, &mut rows, "competitor_energy", rep.competitor_energy);
            push(&mut lines, &mut rows, "bound", rep.bound);
            push(&mut lines, &mut rows, "longer_arc", rep.longer_arc);
            push(&mut lines, &mut rows, "tau_energy", rep.tau_energy);
            let e = energy_density(&model, &disk, &spec)?;
            push(&mut lines, &mut rows, "energy_density", e);
            verdicts.insert(
                "competitor_le_bound".into(),
                json!(rep.competitor_energy <= rep.bound + 1e-12),
            );
        }
        n => {
            return Err(AppError::Config(format!(
                "competitor requires 0 or 2 crossings at the probe radius, found {n}"
            )))
        }
    }
    Ok(Output {
        config: base_config(cli, Some(&model)),
        csv_header: "quantity,value".into(),
        csv_lines: lines,
        json_rows: Value::Array(rows),
        verdicts,
    })
}

fn cmd_twopoint(cli: &Cli, landscape_n: usize) -> Result<Output, AppError> {
    if cli.cert_n < 1024 {
        return Err(AppError::Config("--cert-n must be at least 1024".into()));
    }
    if landscape_n < 2 {
        return Err(AppError::Config("--landscape-n must be at least 2".into()));
    }
    let reports = certify_lemma54(cli.cert_n)?;
    let (fmin, argmin) = f_min(std::f64::consts::FRAC_PI_2, 256);
    let phis = [
        std::f64::consts::FRAC_PI_8,
        std::f64::consts::FRAC_PI_4,
        3.0 * std::f64::consts::FRAC_PI_8,
        std::f64::consts::FRAC_PI_2,
    ];
    let landscape = f_landscape(&phis, landscape_n);
    let lines: Vec<String> = landscape
        .iter()
        .map(|&(p, a1, a2, f)| format!("{},{},{},{}", fmt(p), fmt(a1), fmt(a2), fmt(f)))
        .collect();
    let rows: Vec<Value> = landscape
        .iter()
        .map(|&(p, a1, a2, f)| json!({"phi_tilde": p, "alpha1": a1, "alpha2": a2, "f": f}))
        .collect();
    let mut verdicts = Map::new();
    for rep in &reports {
        verdicts.insert(rep.claim_id.clone(), json!(rep.verdict));
    }
    verdicts.insert(
        "f_min_right_angle".into(),
        json!({"value": fmin, "argmin": [argmin.0, argmin.1]}),
    );
    verdicts.insert(
        "certification_reports".into(),
        serde_json::to_value(&reports).unwrap(),
    );
    Ok(Output {
        config: base_config(cli, None),
        csv_header: "phi_tilde,alpha1,alpha2,f".into(),
        csv_lines: lines,
        json_rows: Value::Array(rows),
        verdicts,
    })
}

fn cmd_equilibrium(cli: &Cli, bumps: usize) -> Result<Output, AppError> {
    if bumps == 0 {
        return Err(AppError::Config("--bumps must be positive".into()));
    }
    let model = load_model(cli)?;
    let spec = quad_spec(cli)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let mut lines = Vec::new();
    let mut rows = Vec::new();
    let mut worst = 0.0f64;
    for idx in 0..bumps {
        let cx = rng.gen_range(-2.5..2.5);
        let cy = rng.gen_range(-2.5..2.5);
        let radius = rng.gen_range(0.2..0.8);
        let angle = rng.gen_range(0.0..2.0 * std::f64::consts::PI);
        let bump = BumpField::new(
            Point2::new(cx, cy),
            radius,
            UnitVector::from_angle(angle),
            1.0,
        );
        let residual = equilibrium_residual(&model, &bump, &spec)?;
        worst = worst.max(residual.abs());
        lines.push(format!(
            "{idx},{},{},{},{},{}",
            fmt(cx),
            fmt(cy),
            fmt(radius),
            fmt(angle),
            fmt(residual)
        ));
        rows.push(json!({
            "index": idx,
            "center": [cx, cy],
            "radius": radius,
            "direction_angle": angle,
            "residual": residual,
        }));
    }
    let mut verdicts = Map::new();
    verdicts.insert(
        "equilibrium_within_tol".into(),
        json!(worst <= EQUILIBRIUM_TOL),
    );
    verdicts.insert("max_abs_residual".into(), json!(worst));
    Ok(Output {
        config: base_config(cli, Some(&model)),
        csv_header: "index,center_x,center_y,radius,direction_angle,residual".into(),
        csv_lines: lines,
        json_rows: Value::Array(rows),
        verdicts,
    })
}
