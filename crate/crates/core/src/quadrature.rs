//! Composite Gauss-Legendre quadrature on circles punctured by jump crossings
//! and on disks containing integrable point singularities.
//!
//! Circle integrands are split exactly at the crossing angles so each arc
//! stays smooth and the panels retain spectral order. Disk integrands with a
//! `1/distance` singularity are integrated in polar coordinates centered at
//! the singular point: the area element `rho drho dphi` cancels the blowup.
//! Error estimates come from one panel-doubling refinement.

use crate::error::Error;
use crate::geometry::{CircleCrossing, DiskProbe, Point2};
use crate::Result;

const TAU: f64 = 2.0 * std::f64::consts::PI;

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`,
/// computed by Newton iteration on the Legendre recurrence.
pub fn gauss_legendre_rule(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Plain composite Gauss-Legendre integral of `f` over `[a, b]`.
pub fn integrate_interval<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize, order: usize) -> f64 {
    let (nodes, weights) = gauss_legendre_rule(order);
    composite(&f, a, b, panels, &nodes, &weights)
}

fn composite<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, panels: usize, nodes: &[f64], weights: &[f64]) -> f64 {
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

/// Composite rule under the smoothstep substitution `x = a + (b-a) t^2 (3-2t)`,
/// whose Jacobian vanishes at both ends and absorbs inverse-square-root
/// endpoint singularities.
fn composite_smoothstep<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    panels: usize,
    nodes: &[f64],
    weights: &[f64],
) -> f64 {
    composite(
        &|t: f64| {
            let s = t * t * (3.0 - 2.0 * t);
            f(a + (b - a) * s) * (b - a) * 6.0 * t * (1.0 - t)
        },
        0.0,
        1.0,
        panels,
        nodes,
        weights,
    )
}

/// Quadrature resolution and convergence policy.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub nodes_per_panel: usize,
    pub panels_per_arc: usize,
    pub refinement_levels: usize,
    pub rel_tolerance: f64,
}

use serde::{Deserialize, Serialize};

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            nodes_per_panel: 16,
            panels_per_arc: 4,
            refinement_levels: 6,
            rel_tolerance: 1e-9,
        }
    }
}

impl QuadratureSpec {
    /// Looser preset used inside radius scans.
    pub fn scan() -> Self {
        Self {
            rel_tolerance: 1e-7,
            ..Self::default()
        }
    }

    fn validate(&self) {
        assert!(self.nodes_per_panel >= 4, "need at least 4 nodes per panel");
        assert!(self.rel_tolerance > 0.0);
    }
}

/// Panel-doubling driver: `eval(panels)` is called with a doubling panel
/// count until two successive values agree within the tolerance (relative
/// above unit scale, absolute below).
fn refine<F: Fn(usize) -> f64>(eval: F, spec: &QuadratureSpec) -> Result<(f64, f64)> {
    let mut panels = spec.panels_per_arc.max(1);
    let mut prev = eval(panels);
    let mut last_err = f64::INFINITY;
    for _ in 0..spec.refinement_levels {
        panels *= 2;
        let next = eval(panels);
        last_err = (next - prev).abs();
        if last_err <= spec.rel_tolerance * next.abs().max(1.0) {
            return Ok((next, last_err));
        }
        prev = next;
    }
    Err(Error::NoConvergence {
        last_error: last_err,
        tolerance: spec.rel_tolerance,
    })
}

/// A probe circle partitioned at the angles where jump curves cross it.
#[derive(Debug, Clone)]
pub struct ArcPartition {
    pub disk: DiskProbe,
    /// Strictly increasing angles in `[0, 2 pi)`.
    pub breakpoints: Vec<f64>,
}

impl ArcPartition {
    pub fn new(disk: DiskProbe, mut angles: Vec<f64>) -> Self {
        for a in &mut angles {
            *a = a.rem_euclid(TAU);
        }
        angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
        angles.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
        Self {
            disk,
            breakpoints: angles,
        }
    }

    pub fn from_crossings(disk: DiskProbe, crossings: &[CircleCrossing]) -> Self {
        let angles = crossings.iter().map(|c| c.angle(&disk)).collect();
        Self::new(disk, angles)
    }

    /// Arcs `(start, end)` with `end > start`, covering the circle.
    fn arcs(&self) -> Vec<(f64, f64)> {
        if self.breakpoints.is_empty() {
            return vec![(0.0, TAU)];
        }
        let mut arcs = Vec::with_capacity(self.breakpoints.len());
        for w in self.breakpoints.windows(2) {
            arcs.push((w[0], w[1]));
        }
        let first = self.breakpoints[0];
        let last = *self.breakpoints.last().unwrap();
        arcs.push((last, first + TAU));
        arcs
    }
}

/// Integral of `f(phi)` over the partitioned circle with the line element
/// `r dphi` included. Returns the value and the panel-doubling error estimate.
pub fn integrate_circle<F: Fn(f64) -> f64>(
    f: F,
    partition: &ArcPartition,
    spec: &QuadratureSpec,
) -> Result<(f64, f64)> {
    spec.validate();
    let (nodes, weights) = gauss_legendre_rule(spec.nodes_per_panel);
    let arcs = partition.arcs();
    let r = partition.disk.radius;
    refine(
        |panels| {
            arcs.iter()
                .map(|&(a, b)| composite(&|phi| f(phi) * r, a, b, panels, &nodes, &weights))
                .sum()
        },
        spec,
    )
}

/// Integral of `f` over the disk. With `singular_point = Some(s)` the
/// integration runs in polar coordinates centered at `s` (admissible for
/// integrands with at worst a `1/|x - s|` blowup); otherwise a tensor polar
/// rule about the disk center is used.
pub fn integrate_disk<F: Fn(Point2) -> f64>(
    f: F,
    disk: &DiskProbe,
    singular_point: Option<Point2>,
    spec: &QuadratureSpec,
) -> Result<(f64, f64)> {
    match singular_point {
        Some(s) => integrate_disk_split(f, disk, s, &[], spec),
        None => plain_polar(f, disk, spec),
    }
}

/// Singular-point polar rule with the angular range additionally split at
/// `angular_breaks` (absolute world angles of rays from the singular point
/// across which the integrand may be non-smooth).
pub fn integrate_disk_split<F: Fn(Point2) -> f64>(
    f: F,
    disk: &DiskProbe,
    singular_point: Point2,
    angular_breaks: &[f64],
    spec: &QuadratureSpec,
) -> Result<(f64, f64)> {
    spec.validate();
    let w = singular_point.dist(disk.center);
    if w < disk.radius {
        singular_polar_inside(f, disk, singular_point, angular_breaks, spec)
    } else {
        singular_polar_outside(f, disk, singular_point, angular_breaks, spec)
    }
}

fn plain_polar<F: Fn(Point2) -> f64>(
    f: F,
    disk: &DiskProbe,
    spec: &QuadratureSpec,
) -> Result<(f64, f64)> {
    spec.validate();
    let (nodes, weights) = gauss_legendre_rule(spec.nodes_per_panel);
    let c = disk.center;
    let r = disk.radius;
    refine(
        |panels| {
            composite(
                &|phi: f64| {
                    let (s, co) = phi.sin_cos();
                    composite(
                        &|rho: f64| f(Point2::new(c.x + rho * co, c.y + rho * s)) * rho,
                        0.0,
                        r,
                        panels,
                        &nodes,
                        &weights,
                    )
                },
                0.0,
                TAU,
                2 * panels,
                &nodes,
                &weights,
            )
        },
        spec,
    )
}

/// Angular arcs of `[base, base + 2 pi)` split at the given break angles.
fn split_full_angle(breaks: &[f64]) -> Vec<(f64, f64)> {
    let mut angles: Vec<f64> = breaks.iter().map(|a| a.rem_euclid(TAU)).collect();
    angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
    angles.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
    if angles.is_empty() {
        return vec![(0.0, TAU)];
    }
    let mut arcs = Vec::with_capacity(angles.len());
    for w in angles.windows(2) {
        arcs.push((w[0], w[1]));
    }
    arcs.push((*angles.last().unwrap(), angles[0] + TAU));
    arcs
}

fn singular_polar_inside<F: Fn(Point2) -> f64>(
    f: F,
    disk: &DiskProbe,
    s: Point2,
    angular_breaks: &[f64],
    spec: &QuadratureSpec,
) -> Result<(f64, f64)> {
    let (nodes, weights) = gauss_legendre_rule(spec.nodes_per_panel);
    let (vx, vy) = (disk.center.x - s.x, disk.center.y - s.y);
    let w2 = vx * vx + vy * vy;
    let r2 = disk.radius * disk.radius;
    let arcs = split_full_angle(angular_breaks);
    refine(
        |panels| {
            let radial = |phi: f64| {
                let (si, co) = phi.sin_cos();
                // positive root of |s + rho e - c| = r
                let b = co * vx + si * vy;
                let rho_max = b + (b * b + r2 - w2).max(0.0).sqrt();
                composite(
                    &|rho: f64| f(Point2::new(s.x + rho * co, s.y + rho * si)) * rho,
                    0.0,
                    rho_max,
                    panels,
                    &nodes,
                    &weights,
                )
            };
            arcs.iter()
                .map(|&(a, b)| composite(&radial, a, b, panels, &nodes, &weights))
                .sum()
        },
        spec,
    )
}

fn singular_polar_outside<F: Fn(Point2) -> f64>(
    f: F,
    disk: &DiskProbe,
    s: Point2,
    angular_breaks: &[f64],
    spec: &QuadratureSpec,
) -> Result<(f64, f64)> {
    let (nodes, weights) = gauss_legendre_rule(spec.nodes_per_panel);
    let (vx, vy) = (disk.center.x - s.x, disk.center.y - s.y);
    let w = vx.hypot(vy);
    let r = disk.radius;
    let phi_v = vy.atan2(vx);
    let psi0 = (r / w).min(1.0).asin();
    // angular window [phi_v - psi0, phi_v + psi0], radial chord [rho-, rho+];
    // the chord length vanishes like a square root at the window ends, so the
    // window pieces run under the smoothstep substitution
    let mut cuts = vec![phi_v - psi0];
    for brk in angular_breaks {
        let d = (brk - phi_v).rem_euclid(TAU);
        let d = if d > std::f64::consts::PI { d - TAU } else { d };
        if d.abs() < psi0 * (1.0 - 1e-12) {
            cuts.push(phi_v + d);
        }
    }
    cuts.push(phi_v + psi0);
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    refine(
        |panels| {
            let radial = |phi: f64| {
                let (si, co) = phi.sin_cos();
                let b = co * vx + si * vy;
                let disc = (b * b + r * r - w * w).max(0.0).sqrt();
                let (lo, hi) = (b - disc, b + disc);
                if hi <= lo {
                    return 0.0;
                }
                composite(
                    &|rho: f64| f(Point2::new(s.x + rho * co, s.y + rho * si)) * rho,
                    lo,
                    hi,
                    panels,
                    &nodes,
                    &weights,
                )
            };
            cuts.windows(2)
                .map(|wd| composite_smoothstep(&radial, wd[0], wd[1], panels, &nodes, &weights))
                .sum()
        },
        spec,
    )
}
