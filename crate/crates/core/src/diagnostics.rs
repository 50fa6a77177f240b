//! Disk functionals for the catalog minimizers: truncated entropy, energy
//! density, the dissipation functional in both representations, the circle
//! balance relation, the directional circle lower bound, the radial slice
//! bound, and the radius scans assembling them.
//!
//! Closed forms are used wherever derivable (crack-tip Dirichlet energies,
//! zero-gradient models); 2d singular quadrature cross-checks them.

use crate::error::Error;
use crate::exec;
use crate::geometry::{
    circle_crossings, jump_length_in_disk, CircleCrossing, DiskProbe, FieldModel, Point2,
    UnitVector,
};
use crate::quadrature::{
    gauss_legendre_rule, integrate_circle, integrate_disk, integrate_disk_split, ArcPartition,
    QuadratureSpec,
};
use crate::Result;
use serde::{Deserialize, Serialize};

/// Computed entropy values within this distance of `3/2` count as at or above
/// the truncation threshold, so the indicator in the `D` representations
/// evaluates to zero (the threshold inequality is strict).
pub const ENTROPY_TIE_TOL: f64 = 1e-12;

/// Complete elliptic integral of the second kind, modulus `k` in `[0, 1]`,
/// by the arithmetic-geometric mean with a log series near `k = 1`.
fn complete_elliptic_e(k: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&k));
    let kp2 = (1.0 - k) * (1.0 + k);
    if kp2 <= 1e-8 {
        let kp = kp2.max(0.0).sqrt();
        if kp == 0.0 {
            return 1.0;
        }
        return 1.0 + 0.5 * kp2 * ((4.0 / kp).ln() - 0.5);
    }
    let (mut a, mut b) = (1.0f64, kp2.sqrt());
    let mut sum = 0.5 * k * k;
    let mut pow = 0.5;
    for _ in 0..64 {
        let c = 0.5 * (a - b);
        if c.abs() < 1e-17 {
            break;
        }
        let an = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = an;
        pow *= 2.0;
        sum += pow * c * c;
    }
    std::f64::consts::FRAC_PI_2 / a * (1.0 - sum)
}

/// Dirichlet energy `int_{B_r(x0) \ J_u} |grad u|^2 dx` through the
/// closed-form route.
///
/// Crack tip: in tip-centered polar coordinates the density `1/(2 pi rho)`
/// integrates radially to `1/(2 pi)` times the length of the radial slice,
/// giving `r` for tip-centered disks, `(2r/pi) E(|x0 - tip|/r)` when the tip
/// lies inside the disk, and a one-dimensional window integral of the chord
/// length when it lies outside.
pub fn dirichlet_energy(model: &FieldModel, disk: &DiskProbe, spec: &QuadratureSpec) -> Result<f64> {
    if model.has_zero_gradient() {
        return Ok(0.0);
    }
    match *model {
        FieldModel::CrackTip { tip, .. } => {
            let w = tip.dist(disk.center);
            let r = disk.radius;
            if w <= 1e-14 * r.max(1.0) {
                return Ok(r);
            }
            if w <= r {
                return Ok(2.0 * r / std::f64::consts::PI * complete_elliptic_e(w / r));
            }
            // tip outside: (2/pi) int_0^{psi0} sqrt(r^2 - w^2 sin^2 psi) dpsi,
            // psi0 = arcsin(r/w); square-root endpoint handled by smoothstep
            let psi0 = (r / w).asin();
            let (nodes, weights) = gauss_legendre_rule(16);
            let mut total = 0.0;
            let panels = 8;
            for p in 0..panels {
                let (t0, t1) = (p as f64 / panels as f64, (p + 1) as f64 / panels as f64);
                let (mid, half) = (0.5 * (t0 + t1), 0.5 * (t1 - t0));
                for (x, wt) in nodes.iter().zip(&weights) {
                    let t = mid + half * x;
                    let s = t * t * (3.0 - 2.0 * t);
                    let ds = 6.0 * t * (1.0 - t);
                    let psi = psi0 * s;
                    let val = (r * r - w * w * psi.sin().powi(2)).max(0.0).sqrt();
                    total += half * wt * val * psi0 * ds;
                }
            }
            Ok(2.0 / std::f64::consts::PI * total)
        }
        FieldModel::SmoothHarmonic {
            center,
            ref coefficients,
        } => {
            let r = disk.radius;
            if center.dist(disk.center) <= 1e-14 * r.max(1.0) {
                let sum: f64 = coefficients
                    .iter()
                    .enumerate()
                    .skip(1)
                    .map(|(k, c)| {
                        k as f64 * (c[0] * c[0] + c[1] * c[1]) * r.powi(2 * k as i32)
                    })
                    .sum();
                return Ok(std::f64::consts::PI * sum);
            }
            let (v, _) = integrate_disk(|p| model.gradient_sq_ae(p), disk, None, spec)?;
            Ok(v)
        }
        _ => unreachable!("zero-gradient models handled above"),
    }
}

/// Dirichlet energy through the 2d quadrature route (singular polar rule for
/// the crack tip). Used to cross-check the closed forms.
pub fn dirichlet_energy_quadrature(
    model: &FieldModel,
    disk: &DiskProbe,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if model.has_zero_gradient() {
        return Ok(0.0);
    }
    let v = match *model {
        FieldModel::CrackTip { tip, axis_angle } => {
            integrate_disk_split(
                |p| model.gradient_sq_ae(p),
                disk,
                tip,
                &[axis_angle],
                spec,
            )?
            .0
        }
        _ => integrate_disk(|p| model.gradient_sq_ae(p), disk, None, spec)?.0,
    };
    Ok(v)
}

/// Truncation-free entropy `F(r, x0) = [Dirichlet + H^1/2] / r`.
pub fn entropy(model: &FieldModel, disk: &DiskProbe, spec: &QuadratureSpec) -> Result<f64> {
    let dir = dirichlet_energy(model, disk, spec)?;
    let len = jump_length_in_disk(&model.jump_set(), disk);
    Ok((dir + 0.5 * len) / disk.radius)
}

/// Energy density `E(r, x0) = [Dirichlet + H^1] / r`.
pub fn energy_density(model: &FieldModel, disk: &DiskProbe, spec: &QuadratureSpec) -> Result<f64> {
    let dir = dirichlet_energy(model, disk, spec)?;
    let len = jump_length_in_disk(&model.jump_set(), disk);
    Ok((dir + len) / disk.radius)
}

/// Tangential/normal circle energies on `\partial B_r(x0) \ J_u`.
#[derive(Debug, Clone)]
pub struct CircleEnergies {
    /// `int |d_tau u|^2 dH^1`
    pub tau: f64,
    /// `int |d_nu u|^2 dH^1`
    pub nu: f64,
    /// `int |grad u|^2 dH^1`, integrated independently of `tau + nu`
    pub dirichlet: f64,
    pub crossings: Vec<CircleCrossing>,
}

impl CircleEnergies {
    pub fn sum_inv_nu_dot_t(&self) -> f64 {
        self.crossings.iter().map(|c| 1.0 / c.nu_dot_t).sum()
    }

    pub fn sum_nu_dot_t(&self) -> f64 {
        self.crossings.iter().map(|c| c.nu_dot_t).sum()
    }
}

/// Circle energies with the quadrature partition aligned to the crossings.
/// Fails with `TangentialContact` when a crossing is non-transversal.
pub fn circle_energies(
    model: &FieldModel,
    disk: &DiskProbe,
    spec: &QuadratureSpec,
) -> Result<CircleEnergies> {
    let crossings = circle_crossings(&model.jump_set(), disk);
    if crossings.iter().any(|c| !c.transversal) {
        return Err(Error::TangentialContact {
            radius: disk.radius,
        });
    }
    if model.has_zero_gradient() {
        return Ok(CircleEnergies {
            tau: 0.0,
            nu: 0.0,
            dirichlet: 0.0,
            crossings,
        });
    }
    if let FieldModel::CrackTip { tip, .. } = model {
        // tip-centered circle: |grad u|^2 = 1/(2 pi r) and the angular split
        // of tangential vs normal energy is exactly even
        if tip.dist(disk.center) <= 1e-14 * disk.radius.max(1.0) {
            return Ok(CircleEnergies {
                tau: 0.5,
                nu: 0.5,
                dirichlet: 1.0,
                crossings,
            });
        }
    }
    let partition = ArcPartition::from_crossings(*disk, &crossings);
    let grad_at = |phi: f64| model.gradient_ae(disk.boundary_point(phi));
    let (tau, _) = integrate_circle(
        |phi| {
            let (gx, gy) = grad_at(phi);
            let (s, c) = phi.sin_cos();
            let t = -s * gx + c * gy;
            t * t
        },
        &partition,
        spec,
    )?;
    let (nu, _) = integrate_circle(
        |phi| {
            let (gx, gy) = grad_at(phi);
            let (s, c) = phi.sin_cos();
            let n = c * gx + s * gy;
            n * n
        },
        &partition,
        spec,
    )?;
    let (dirichlet, _) = integrate_circle(
        |phi| {
            let (gx, gy) = grad_at(phi);
            gx * gx + gy * gy
        },
        &partition,
        spec,
    )?;
    Ok(CircleEnergies {
        tau,
        nu,
        dirichlet,
        crossings,
    })
}

fn below_threshold(f: f64) -> bool {
    f < 1.5 - ENTROPY_TIE_TOL
}

/// First representation of the dissipation functional:
/// `chi_{F < 3/2} ( int |grad u|^2 dH^1 + sum 1/(2 |nu.t|) - F )`.
pub fn d_rep1(model: &FieldModel, disk: &DiskProbe, spec: &QuadratureSpec) -> Result<f64> {
    let ce = circle_energies(model, disk, spec)?;
    let f = entropy(model, disk, spec)?;
    if !below_threshold(f) {
        return Ok(0.0);
    }
    Ok(ce.dirichlet + 0.5 * ce.sum_inv_nu_dot_t() - f)
}

/// Second representation:
/// `chi_{F < 3/2} ( 3/2 tau + 1/2 nu + sum (1/|nu.t| + |nu.t|)/2 - E )`.
pub fn d_rep2(model: &FieldModel, disk: &DiskProbe, spec: &QuadratureSpec) -> Result<f64> {
    let ce = circle_energies(model, disk, spec)?;
    let f = entropy(model, disk, spec)?;
    if !below_threshold(f) {
        return Ok(0.0);
    }
    let e = energy_density(model, disk, spec)?;
    Ok(1.5 * ce.tau + 0.5 * ce.nu + 0.5 * (ce.sum_inv_nu_dot_t() + ce.sum_nu_dot_t()) - e)
}

/// Residual of the tangential/normal balance relation
/// `[tau + sum |nu.t|] - [nu + H^1(J cap B_r)/r]`; vanishes for minimizers
/// at a.e. radius.
pub fn dlms_residual(model: &FieldModel, disk: &DiskProbe, spec: &QuadratureSpec) -> Result<f64> {
    let ce = circle_energies(model, disk, spec)?;
    let len = jump_length_in_disk(&model.jump_set(), disk);
    Ok(ce.tau + ce.sum_nu_dot_t() - ce.nu - len / disk.radius)
}

/// Directional circle bound gap `int |grad u|^2 dH^1 - sum q . t`;
/// nonnegative (up to quadrature error) for minimizers.
pub fn prop31_gap(
    model: &FieldModel,
    disk: &DiskProbe,
    q: UnitVector,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let ce = circle_energies(model, disk, spec)?;
    let sum: f64 = ce
        .crossings
        .iter()
        .map(|c| q.dot(c.tangent))
        .sum();
    Ok(ce.dirichlet - sum)
}

/// Gap per direction over an `n_dirs`-point angular grid of `q`.
pub fn prop31_gap_sweep(
    model: &FieldModel,
    disk: &DiskProbe,
    n_dirs: usize,
    spec: &QuadratureSpec,
) -> Result<Vec<f64>> {
    let ce = circle_energies(model, disk, spec)?;
    Ok((0..n_dirs)
        .map(|j| {
            let q = UnitVector::from_angle(2.0 * std::f64::consts::PI * j as f64 / n_dirs as f64);
            let sum: f64 = ce.crossings.iter().map(|c| q.dot(c.tangent)).sum();
            ce.dirichlet - sum
        })
        .collect())
}

/// Radial slice bound `int |grad u|^2 dH^1 + #crossings - 2`; nonnegative at
/// singular centers.
pub fn radial_slice_bound(
    model: &FieldModel,
    disk: &DiskProbe,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let ce = circle_energies(model, disk, spec)?;
    Ok(ce.dirichlet + ce.crossings.len() as f64 - 2.0)
}

/// All diagnostics at one radius. Circle quantities are absent on rows where
/// the jump set meets the circle non-transversally or the quadrature did not
/// converge; such rows carry `skipped = true` and are excluded from
/// differencing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub r: f64,
    #[serde(rename = "F")]
    pub f: f64,
    #[serde(rename = "E")]
    pub e: f64,
    #[serde(rename = "E_dir")]
    pub e_dir: f64,
    pub jump_count: usize,
    #[serde(rename = "D1")]
    pub d1: Option<f64>,
    #[serde(rename = "D2")]
    pub d2: Option<f64>,
    pub dlms_residual: Option<f64>,
    pub circle_dirichlet: Option<f64>,
    pub circle_tau: Option<f64>,
    pub circle_nu: Option<f64>,
    pub skipped: bool,
}

fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else {
        format!("{x:.16e}")
    }
}

fn fmt_opt(x: Option<f64>) -> String {
    match x {
        Some(v) => fmt_f64(v),
        None => "nan".into(),
    }
}

impl ScanRow {
    /// Column contract of the CSV output.
    pub const CSV_HEADER: &'static str =
        "r,F,E,E_dir,jump_count,D1,D2,dlms_residual,circle_tau,circle_nu,skipped";

    pub fn to_csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            fmt_f64(self.r),
            fmt_f64(self.f),
            fmt_f64(self.e),
            fmt_f64(self.e_dir),
            self.jump_count,
            fmt_opt(self.d1),
            fmt_opt(self.d2),
            fmt_opt(self.dlms_residual),
            fmt_opt(self.circle_tau),
            fmt_opt(self.circle_nu),
            self.skipped,
        )
    }

    /// Parse a CSV data line back. The omitted `circle_dirichlet` column is
    /// reconstructed as `tau + nu`.
    pub fn from_csv_line(line: &str) -> Result<ScanRow> {
        let parts: Vec<&str> = line.trim().split(',').collect();
        if parts.len() != 11 {
            return Err(Error::InvalidModel(format!(
                "expected 11 CSV fields, found {}",
                parts.len()
            )));
        }
        let num = |s: &str| -> Result<f64> {
            s.parse::<f64>()
                .map_err(|e| Error::InvalidModel(format!("bad float {s:?}: {e}")))
        };
        let opt = |s: &str| -> Result<Option<f64>> {
            let v = num(s)?;
            Ok(if v.is_nan() { None } else { Some(v) })
        };
        let tau = opt(parts[8])?;
        let nu = opt(parts[9])?;
        Ok(ScanRow {
            r: num(parts[0])?,
            f: num(parts[1])?,
            e: num(parts[2])?,
            e_dir: num(parts[3])?,
            jump_count: parts[4]
                .parse()
                .map_err(|e| Error::InvalidModel(format!("bad count: {e}")))?,
            d1: opt(parts[5])?,
            d2: opt(parts[6])?,
            dlms_residual: opt(parts[7])?,
            circle_dirichlet: tau.zip(nu).map(|(t, n)| t + n),
            circle_tau: tau,
            circle_nu: nu,
            skipped: parts[10]
                .parse()
                .map_err(|e| Error::InvalidModel(format!("bad flag: {e}")))?,
        })
    }
}

/// One fully assembled scan row.
pub fn compute_row(model: &FieldModel, x0: Point2, r: f64, spec: &QuadratureSpec) -> ScanRow {
    let disk = DiskProbe::new(x0, r);
    let len = jump_length_in_disk(&model.jump_set(), &disk);
    let (e_dir, f, e, volume_ok) = match dirichlet_energy(model, &disk, spec) {
        Ok(dir) => (dir / r, (dir + 0.5 * len) / r, (dir + len) / r, true),
        Err(_) => (f64::NAN, f64::NAN, f64::NAN, false),
    };
    match circle_energies(model, &disk, spec) {
        Ok(ce) if volume_ok => {
            let inv_sum = ce.sum_inv_nu_dot_t();
            let t_sum = ce.sum_nu_dot_t();
            let (d1, d2) = if below_threshold(f) {
                (
                    ce.dirichlet + 0.5 * inv_sum - f,
                    1.5 * ce.tau + 0.5 * ce.nu + 0.5 * (inv_sum + t_sum) - e,
                )
            } else {
                (0.0, 0.0)
            };
            ScanRow {
                r,
                f,
                e,
                e_dir,
                jump_count: ce.crossings.len(),
                d1: Some(d1),
                d2: Some(d2),
                dlms_residual: Some(ce.tau + t_sum - ce.nu - len / r),
                circle_dirichlet: Some(ce.dirichlet),
                circle_tau: Some(ce.tau),
                circle_nu: Some(ce.nu),
                skipped: false,
            }
        }
        _ => ScanRow {
            r,
            f,
            e,
            e_dir,
            jump_count: circle_crossings(&model.jump_set(), &disk).len(),
            d1: None,
            d2: None,
            dlms_residual: None,
            circle_dirichlet: None,
            circle_tau: None,
            circle_nu: None,
            skipped: true,
        },
    }
}

/// Radius grid spacing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridKind {
    Geometric,
    Linear,
}

pub fn radius_grid(r_min: f64, r_max: f64, steps: usize, kind: GridKind) -> Vec<f64> {
    assert!(steps >= 2, "need at least two radii");
    assert!(r_min < r_max && r_min > 0.0);
    (0..steps)
        .map(|i| {
            let t = i as f64 / (steps - 1) as f64;
            match kind {
                GridKind::Geometric => r_min * (r_max / r_min).powf(t),
                GridKind::Linear => r_min + (r_max - r_min) * t,
            }
        })
        .collect()
}

/// Tolerances for the scan verdicts.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ScanTolerances {
    /// Allowed negativity of forward differences of `min(F, 3/2)`.
    pub monotonicity: f64,
    /// Allowed slack in the discrete differential inequality
    /// `dF/dr >= min(D1(r_i)/r_i, D1(r_{i+1})/r_{i+1})` at rows with
    /// `F < 3/2` (first-order differencing plus quadrature error on grids
    /// with ratio <= 1.02). The interval minimum is the valid surrogate for
    /// the integral form: `D1/r` has unbounded one-sided variation at radii
    /// where a crossing appears tangentially, so comparing against the left
    /// endpoint alone fails there by O(1) regardless of tolerance.
    pub diff_ineq: f64,
}

impl Default for ScanTolerances {
    fn default() -> Self {
        Self {
            monotonicity: 1e-8,
            diff_ineq: 1e-3,
        }
    }
}

/// Result of a monotonicity scan.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MonotonicityReport {
    pub rows: Vec<ScanRow>,
    /// Minimum forward difference of `min(F, 3/2)` over consecutive
    /// non-skipped rows.
    pub min_forward_difference: f64,
    /// True iff the minimum forward difference is `>= -monotonicity tol`.
    pub verdict: bool,
    /// Left radius of the worst forward difference.
    pub worst_radius: f64,
    /// Minimum of `(F_{i+1}-F_i)/(r_{i+1}-r_i) - min(D1_i/r_i, D1_{i+1}/r_{i+1})`
    /// over rows with `F < 3/2`.
    pub diff_ineq_min_slack: f64,
    pub diff_ineq_ok: bool,
}

/// Scan the diagnostics over a radius grid. Rows are independent and are
/// evaluated in parallel; the report is assembled in radius order.
pub fn scan(
    model: &FieldModel,
    x0: Point2,
    radii: &[f64],
    spec: &QuadratureSpec,
    tol: &ScanTolerances,
) -> MonotonicityReport {
    assert!(radii.len() >= 2, "scan needs at least two radii");
    assert!(
        radii.windows(2).all(|w| w[0] < w[1]),
        "radius grid must be strictly increasing"
    );
    let rows = exec::map_indexed(radii.len(), |i| compute_row(model, x0, radii[i], spec));

    let valid: Vec<&ScanRow> = rows.iter().filter(|row| !row.skipped).collect();
    let mut min_fd = f64::INFINITY;
    let mut worst_radius = f64::NAN;
    let mut min_slack = f64::INFINITY;
    for pair in valid.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let fd = b.f.min(1.5) - a.f.min(1.5);
        if fd < min_fd {
            min_fd = fd;
            worst_radius = a.r;
        }
        if below_threshold(a.f) {
            if let (Some(d1a), Some(d1b)) = (a.d1, b.d1) {
                let rhs = (d1a / a.r).min(d1b / b.r);
                let slack = (b.f - a.f) / (b.r - a.r) - rhs;
                min_slack = min_slack.min(slack);
            }
        }
    }
    MonotonicityReport {
        verdict: min_fd >= -tol.monotonicity,
        min_forward_difference: min_fd,
        worst_radius,
        diff_ineq_min_slack: min_slack,
        diff_ineq_ok: min_slack >= -tol.diff_ineq,
        rows,
    }
}

/// Entropy of the standard crack tip (tip at the origin, jump along `e1`)
/// on `B_1(delta e1)` for each `delta`, computed through the singular
/// quadrature route. `delta = 0` returns the exact `3/2`.
pub fn sharpness_scan(deltas: &[f64], spec: &QuadratureSpec) -> Result<Vec<(f64, f64)>> {
    assert!(
        deltas.iter().all(|d| (0.0..=0.2).contains(d)),
        "sharpness offsets must lie in [0, 0.2]"
    );
    let model = FieldModel::crack_tip(Point2::new(0.0, 0.0), 0.0);
    let results = exec::map_indexed(deltas.len(), |i| -> Result<(f64, f64)> {
        let d = deltas[i];
        if d == 0.0 {
            return Ok((0.0, 1.5));
        }
        let disk = DiskProbe::new(Point2::new(d, 0.0), 1.0);
        let (dir, _) = integrate_disk_split(
            |p| model.gradient_sq_ae(p),
            &disk,
            Point2::new(0.0, 0.0),
            &[0.0],
            spec,
        )?;
        Ok((d, dir + 0.5 * (1.0 + d)))
    });
    results.into_iter().collect()
}

/// Compactly supported C^1 test vector field: constant direction times the
/// radial cutoff `psi(t) = (1 - t^2)^2` on `B_radius(center)`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct BumpField {
    pub center: Point2,
    pub radius: f64,
    pub direction: UnitVector,
    pub amplitude: f64,
}

impl BumpField {
    pub fn new(center: Point2, radius: f64, direction: UnitVector, amplitude: f64) -> Self {
        assert!(radius > 0.0);
        Self {
            center,
            radius,
            direction,
            amplitude,
        }
    }

    fn dpsi(t: f64) -> f64 {
        if t < 1.0 {
            -4.0 * t * (1.0 - t * t)
        } else {
            0.0
        }
    }

    /// `(q . grad psi)(p)` data: returns `(e_x, e_y, dpsi/R)` or zero at the center.
    fn cutoff_gradient(&self, p: Point2) -> (f64, f64, f64) {
        let (wx, wy) = (p.x - self.center.x, p.y - self.center.y);
        let s = wx.hypot(wy);
        if s == 0.0 || s >= self.radius {
            return (0.0, 0.0, 0.0);
        }
        (
            wx / s,
            wy / s,
            self.amplitude * Self::dpsi(s / self.radius) / self.radius,
        )
    }
}

/// Weak residual of the inner-variation stationarity equation for the test
/// field `eta`: bulk term `int (2 grad u (x) grad u - |grad u|^2 Id) : grad eta`
/// minus the jump term `int_{J_u} t (x) t : grad eta dH^1`. Vanishes for the
/// catalog minimizers up to quadrature error.
pub fn equilibrium_residual(
    model: &FieldModel,
    bump: &BumpField,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let support = DiskProbe::new(bump.center, bump.radius);
    let q = bump.direction;

    let bulk = if model.has_zero_gradient() {
        0.0
    } else {
        let integrand = |p: Point2| {
            let (ex, ey, dps) = bump.cutoff_gradient(p);
            if dps == 0.0 {
                return 0.0;
            }
            let (gx, gy) = model.gradient_ae(p);
            let ge = gx * ex + gy * ey;
            let gq = gx * q.x() + gy * q.y();
            let eq = ex * q.x() + ey * q.y();
            dps * (2.0 * ge * gq - (gx * gx + gy * gy) * eq)
        };
        match *model {
            FieldModel::CrackTip { tip, axis_angle } if tip.dist(bump.center) < bump.radius => {
                integrate_disk_split(integrand, &support, tip, &[axis_angle], spec)?.0
            }
            _ => integrate_disk(integrand, &support, None, spec)?.0,
        }
    };

    let mut jump_term = 0.0;
    let (nodes, weights) = gauss_legendre_rule(16);
    for curve in &model.jump_set().curves {
        // clip the curve to the support disk
        let (base, dir, lo, hi) = curve.parametrization();
        let (wx, wy) = (base.x - bump.center.x, base.y - bump.center.y);
        let b = dir.dot_xy(wx, wy);
        let disc = b * b - (wx * wx + wy * wy - bump.radius * bump.radius);
        if disc <= 0.0 {
            continue;
        }
        let sq = disc.sqrt();
        let (a0, b0) = ((-b - sq).max(lo), (-b + sq).min(hi));
        if b0 <= a0 {
            continue;
        }
        // split where the curve passes the bump center (direction flip of e)
        let foot = -b;
        let mut cuts = vec![a0, b0];
        if foot > a0 && foot < b0 {
            cuts.insert(1, foot);
        }
        let f = |s: f64| {
            let p = Point2::new(base.x + s * dir.x(), base.y + s * dir.y());
            let (ex, ey, dps) = bump.cutoff_gradient(p);
            let te = dir.dot_xy(ex, ey);
            let tq = dir.dot(q);
            dps * te * tq
        };
        for w in cuts.windows(2) {
            let mut panels = spec.panels_per_arc.max(1);
            let mut prev = composite_on(&f, w[0], w[1], panels, &nodes, &weights);
            let mut converged = false;
            for _ in 0..spec.refinement_levels {
                panels *= 2;
                let next = composite_on(&f, w[0], w[1], panels, &nodes, &weights);
                let err = (next - prev).abs();
                prev = next;
                if err <= spec.rel_tolerance * next.abs().max(1.0) {
                    converged = true;
                    break;
                }
            }
            if !converged {
                return Err(Error::NoConvergence {
                    last_error: f64::NAN,
                    tolerance: spec.rel_tolerance,
                });
            }
            jump_term += prev;
        }
    }
    Ok(bulk - jump_term)
}

fn composite_on<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    panels: usize,
    nodes: &[f64],
    weights: &[f64],
) -> f64 {
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let (lo, hi) = (a + p as f64 * h, a + (p + 1) as f64 * h);
        let (mid, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
        for (x, w) in nodes.iter().zip(weights) {
            total += half * w * f(mid + half * x);
        }
    }
    total
}
