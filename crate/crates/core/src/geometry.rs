//! Catalog of exact planar minimizers and the geometry of their jump sets
//! relative to probe disks.
//!
//! Jump curves are straight segments, rays, and lines: every explicit model
//! in the catalog has a straight jump set. Tangent vectors at circle
//! crossings follow the sign convention `nu . t >= 0` with `nu` the outward
//! normal of the probe circle.

use crate::error::Error;
use crate::quadrature::gauss_legendre_rule;
use crate::Result;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Distance below which a point counts as lying on a jump curve.
pub const ON_JUMP_TOL: f64 = 1e-12;

/// `|nu . t|` below which a circle crossing is flagged non-transversal.
/// Radii with such contacts form a null set and are skipped in scans.
pub const TANGENCY_TOL: f64 = 1e-9;

const SQRT_2_OVER_PI: f64 = 0.7978845608028654; // sqrt(2/pi)

/// A point of the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dist(self, other: Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    fn sub(self, other: Point2) -> (f64, f64) {
        (self.x - other.x, self.y - other.y)
    }

    /// Rotation about the origin by `theta` radians.
    pub fn rotated(self, theta: f64) -> Point2 {
        let (s, c) = theta.sin_cos();
        Point2::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }
}

impl Serialize for Point2 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.x, self.y].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Point2 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [x, y] = <[f64; 2]>::deserialize(d)?;
        Ok(Point2::new(x, y))
    }
}

/// A unit direction vector; construction normalizes the input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitVector {
    ux: f64,
    uy: f64,
}

impl UnitVector {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        let n = x.hypot(y);
        if !n.is_finite() || n < 1e-300 {
            return Err(Error::InvalidModel(format!(
                "direction ({x}, {y}) cannot be normalized"
            )));
        }
        Ok(Self { ux: x / n, uy: y / n })
    }

    pub fn from_angle(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self { ux: c, uy: s }
    }

    pub fn x(self) -> f64 {
        self.ux
    }

    pub fn y(self) -> f64 {
        self.uy
    }

    pub fn dot(self, other: UnitVector) -> f64 {
        self.ux * other.ux + self.uy * other.uy
    }

    pub fn dot_xy(self, x: f64, y: f64) -> f64 {
        self.ux * x + self.uy * y
    }

    /// Counterclockwise perpendicular, convention `e1-perp = e2`.
    pub fn perp(self) -> UnitVector {
        Self { ux: -self.uy, uy: self.ux }
    }

    pub fn neg(self) -> UnitVector {
        Self { ux: -self.ux, uy: -self.uy }
    }

    pub fn angle(self) -> f64 {
        self.uy.atan2(self.ux)
    }

    pub fn rotated(self, theta: f64) -> UnitVector {
        let (s, c) = theta.sin_cos();
        Self {
            ux: c * self.ux - s * self.uy,
            uy: s * self.ux + c * self.uy,
        }
    }
}

impl Serialize for UnitVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.ux, self.uy].serialize(s)
    }
}

impl<'de> Deserialize<'de> for UnitVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [x, y] = <[f64; 2]>::deserialize(d)?;
        UnitVector::new(x, y).map_err(serde::de::Error::custom)
    }
}

/// A straight jump curve.
#[derive(Debug, Clone, Copy)]
pub enum JumpCurve {
    Segment { p: Point2, q: Point2 },
    Ray { origin: Point2, direction: UnitVector },
    Line { point: Point2, direction: UnitVector },
}

impl JumpCurve {
    /// Base point, unit direction, and parameter range `[0, len]`
    /// (`len = +inf` for rays, the range is all of `R` for lines).
    pub(crate) fn parametrization(&self) -> (Point2, UnitVector, f64, f64) {
        match *self {
            JumpCurve::Segment { p, q } => {
                let (dx, dy) = q.sub(p);
                let len = dx.hypot(dy);
                let dir = UnitVector::new(dx, dy).expect("segment endpoints must differ");
                (p, dir, 0.0, len)
            }
            JumpCurve::Ray { origin, direction } => (origin, direction, 0.0, f64::INFINITY),
            JumpCurve::Line { point, direction } => {
                (point, direction, f64::NEG_INFINITY, f64::INFINITY)
            }
        }
    }

    fn point_at(&self, s: f64) -> Point2 {
        let (base, dir, _, _) = self.parametrization();
        Point2::new(base.x + s * dir.x(), base.y + s * dir.y())
    }

    /// Distance from `p` to the curve (as a point set).
    pub fn distance(&self, p: Point2) -> f64 {
        let (base, dir, lo, hi) = self.parametrization();
        let (wx, wy) = p.sub(base);
        let s = dir.dot_xy(wx, wy).clamp(lo, hi);
        p.dist(self.point_at(s))
    }

    pub fn rotated(&self, theta: f64) -> JumpCurve {
        match *self {
            JumpCurve::Segment { p, q } => JumpCurve::Segment {
                p: p.rotated(theta),
                q: q.rotated(theta),
            },
            JumpCurve::Ray { origin, direction } => JumpCurve::Ray {
                origin: origin.rotated(theta),
                direction: direction.rotated(theta),
            },
            JumpCurve::Line { point, direction } => JumpCurve::Line {
                point: point.rotated(theta),
                direction: direction.rotated(theta),
            },
        }
    }
}

/// A finite collection of straight jump curves.
#[derive(Debug, Clone, Default)]
pub struct JumpSet {
    pub curves: Vec<JumpCurve>,
}

impl JumpSet {
    pub fn empty() -> Self {
        Self { curves: Vec::new() }
    }

    pub fn distance(&self, p: Point2) -> f64 {
        self.curves
            .iter()
            .map(|c| c.distance(p))
            .fold(f64::INFINITY, f64::min)
    }
}

/// A probe disk `B_r(x0)`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DiskProbe {
    pub center: Point2,
    pub radius: f64,
}

impl DiskProbe {
    pub fn new(center: Point2, radius: f64) -> Self {
        assert!(radius > 0.0, "probe radius must be positive");
        Self { center, radius }
    }

    /// Point on the boundary circle at polar angle `phi` (measured at the center).
    pub fn boundary_point(&self, phi: f64) -> Point2 {
        Point2::new(
            self.center.x + self.radius * phi.cos(),
            self.center.y + self.radius * phi.sin(),
        )
    }
}

/// An intersection of a jump curve with a probe circle, with the tangent
/// oriented so that `nu . t >= 0`.
#[derive(Debug, Clone, Copy)]
pub struct CircleCrossing {
    pub point: Point2,
    pub tangent: UnitVector,
    pub nu_dot_t: f64,
    pub transversal: bool,
}

impl CircleCrossing {
    /// Angle of the crossing point as seen from the disk center.
    pub fn angle(&self, disk: &DiskProbe) -> f64 {
        let (wx, wy) = self.point.sub(disk.center);
        wy.atan2(wx)
    }
}

/// Which side of a jump curve a one-sided evaluation refers to
/// (sign of the local coordinate across the curve).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JumpSide {
    Plus,
    Minus,
}

/// An exact minimizer of the catalog.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FieldModel {
    /// `u(rho, phi) = sqrt(2/pi) rho^{1/2} cos(phi/2)` in tip-centered
    /// coordinates rotated so the jump ray points along `axis_angle`.
    CrackTip { tip: Point2, axis_angle: f64 },
    /// Piecewise constant across the line through `point` with normal `normal`:
    /// `alpha` on the positive side, `beta` on the negative side.
    PlanarInterface {
        point: Point2,
        normal: UnitVector,
        alpha: f64,
        beta: f64,
    },
    /// Three rays at mutual angle `2 pi / 3` from `center`, the first along
    /// `axis_angle`; constant `values[i]` on the i-th sector (counterclockwise).
    Propeller {
        center: Point2,
        axis_angle: f64,
        values: [f64; 3],
    },
    /// `u(rho, phi) = sum_k rho^k (a_k cos k phi + b_k sin k phi)` about `center`.
    SmoothHarmonic {
        #[serde(default)]
        center: Point2,
        coefficients: Vec<[f64; 2]>,
    },
}

impl FieldModel {
    pub fn crack_tip(tip: Point2, axis_angle: f64) -> Self {
        FieldModel::CrackTip { tip, axis_angle }
    }

    pub fn planar_interface(point: Point2, normal: UnitVector, alpha: f64, beta: f64) -> Self {
        FieldModel::PlanarInterface {
            point,
            normal,
            alpha,
            beta,
        }
    }

    pub fn propeller(center: Point2, axis_angle: f64, values: [f64; 3]) -> Self {
        FieldModel::Propeller {
            center,
            axis_angle,
            values,
        }
    }

    pub fn smooth_harmonic(center: Point2, coefficients: Vec<[f64; 2]>) -> Self {
        FieldModel::SmoothHarmonic {
            center,
            coefficients,
        }
    }

    /// Parse and validate a model from its JSON description.
    pub fn from_json(text: &str) -> Result<Self> {
        let model: FieldModel =
            serde_json::from_str(text).map_err(|e| Error::InvalidModel(e.to_string()))?;
        model.validate()?;
        Ok(model)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("model serialization cannot fail")
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            FieldModel::CrackTip { tip, axis_angle } => {
                if !(tip.x.is_finite() && tip.y.is_finite() && axis_angle.is_finite()) {
                    return Err(Error::InvalidModel("crack_tip: non-finite parameter".into()));
                }
            }
            FieldModel::PlanarInterface { alpha, beta, .. } => {
                if !(alpha.is_finite() && beta.is_finite()) {
                    return Err(Error::InvalidModel(
                        "planar_interface: non-finite value".into(),
                    ));
                }
                if alpha == beta {
                    return Err(Error::InvalidModel(
                        "planar_interface: alpha and beta must differ".into(),
                    ));
                }
            }
            FieldModel::Propeller { values, .. } => {
                if values.iter().any(|v| !v.is_finite()) {
                    return Err(Error::InvalidModel("propeller: non-finite value".into()));
                }
                if values[0] == values[1] || values[1] == values[2] || values[0] == values[2] {
                    return Err(Error::InvalidModel(
                        "propeller: the three sector values must be pairwise distinct".into(),
                    ));
                }
            }
            FieldModel::SmoothHarmonic { coefficients, .. } => {
                if coefficients
                    .iter()
                    .any(|c| !(c[0].is_finite() && c[1].is_finite()))
                {
                    return Err(Error::InvalidModel(
                        "smooth_harmonic: non-finite coefficient".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// The jump set of the model.
    pub fn jump_set(&self) -> JumpSet {
        match *self {
            FieldModel::CrackTip { tip, axis_angle } => JumpSet {
                curves: vec![JumpCurve::Ray {
                    origin: tip,
                    direction: UnitVector::from_angle(axis_angle),
                }],
            },
            FieldModel::PlanarInterface { point, normal, .. } => JumpSet {
                curves: vec![JumpCurve::Line {
                    point,
                    direction: normal.perp(),
                }],
            },
            FieldModel::Propeller {
                center, axis_angle, ..
            } => JumpSet {
                curves: (0..3)
                    .map(|k| JumpCurve::Ray {
                        origin: center,
                        direction: UnitVector::from_angle(
                            axis_angle + k as f64 * 2.0 * std::f64::consts::PI / 3.0,
                        ),
                    })
                    .collect(),
            },
            FieldModel::SmoothHarmonic { .. } => JumpSet::empty(),
        }
    }

    /// True when the absolutely continuous part of the gradient vanishes
    /// identically (piecewise constant fields).
    pub fn has_zero_gradient(&self) -> bool {
        matches!(
            self,
            FieldModel::PlanarInterface { .. } | FieldModel::Propeller { .. }
        )
    }

    /// The gradient singularity of the field, if any (the crack tip).
    pub fn singular_point(&self) -> Option<Point2> {
        match *self {
            FieldModel::CrackTip { tip, .. } => Some(tip),
            _ => None,
        }
    }

    /// Exact analytic gradient at `p`, which must lie off the jump set and
    /// away from the crack tip.
    pub fn eval_gradient(&self, p: Point2) -> Result<(f64, f64)> {
        if let Some(tip) = self.singular_point() {
            if p.dist(tip) <= ON_JUMP_TOL {
                return Err(Error::AtSingularPoint { x: p.x, y: p.y });
            }
        }
        if self.jump_set().distance(p) <= ON_JUMP_TOL {
            return Err(Error::OnJumpSet { x: p.x, y: p.y });
        }
        Ok(self.gradient_ae(p))
    }

    /// Gradient defined almost everywhere; on the (measure zero) jump set it
    /// returns the limit from the `Plus` side. Quadrature nodes are the only
    /// intended callers of the on-jump case.
    pub fn gradient_ae(&self, p: Point2) -> (f64, f64) {
        match *self {
            FieldModel::CrackTip { tip, axis_angle } => {
                let (lx, ly) = local_frame_coords(p, tip, axis_angle);
                let rho = lx.hypot(ly);
                if rho == 0.0 {
                    return (0.0, 0.0);
                }
                let phi = wrap_angle(ly.atan2(lx));
                let g = 0.5 * SQRT_2_OVER_PI / rho.sqrt();
                let (glx, gly) = (g * (0.5 * phi).cos(), g * (0.5 * phi).sin());
                rotate_xy(glx, gly, axis_angle)
            }
            FieldModel::PlanarInterface { .. } | FieldModel::Propeller { .. } => (0.0, 0.0),
            FieldModel::SmoothHarmonic {
                center,
                ref coefficients,
            } => {
                let (zx, zy) = p.sub(center);
                // grad(Re z^k) = k (Re z^{k-1}, -Im z^{k-1}),
                // grad(Im z^k) = k (Im z^{k-1},  Re z^{k-1})
                let (mut px, mut py) = (1.0, 0.0); // z^{k-1}
                let (mut gx, mut gy) = (0.0, 0.0);
                for (k, c) in coefficients.iter().enumerate().skip(1) {
                    let kf = k as f64;
                    gx += kf * (c[0] * px + c[1] * py);
                    gy += kf * (-c[0] * py + c[1] * px);
                    let nx = px * zx - py * zy;
                    py = px * zy + py * zx;
                    px = nx;
                }
                (gx, gy)
            }
        }
    }

    /// `|grad u|^2`, defined almost everywhere.
    pub fn gradient_sq_ae(&self, p: Point2) -> f64 {
        let (gx, gy) = self.gradient_ae(p);
        gx * gx + gy * gy
    }

    /// One-sided field value. The `side` flag selects the branch when `p`
    /// lies on a jump curve; elsewhere it is ignored.
    pub fn value(&self, p: Point2, side: JumpSide) -> f64 {
        match *self {
            FieldModel::CrackTip { tip, axis_angle } => {
                let (lx, ly) = local_frame_coords(p, tip, axis_angle);
                let rho = lx.hypot(ly);
                let on_axis = ly.abs() <= ON_JUMP_TOL && lx > 0.0;
                let phi = if on_axis {
                    match side {
                        JumpSide::Plus => 0.0,
                        JumpSide::Minus => 2.0 * std::f64::consts::PI,
                    }
                } else {
                    wrap_angle(ly.atan2(lx))
                };
                SQRT_2_OVER_PI * rho.sqrt() * (0.5 * phi).cos()
            }
            FieldModel::PlanarInterface {
                point,
                normal,
                alpha,
                beta,
            } => {
                let (wx, wy) = p.sub(point);
                let s = normal.dot_xy(wx, wy);
                let positive = if s.abs() <= ON_JUMP_TOL {
                    side == JumpSide::Plus
                } else {
                    s > 0.0
                };
                if positive {
                    alpha
                } else {
                    beta
                }
            }
            FieldModel::Propeller {
                center,
                axis_angle,
                values,
            } => {
                let (lx, ly) = local_frame_coords(p, center, axis_angle);
                let mut phi = wrap_angle(ly.atan2(lx));
                let third = 2.0 * std::f64::consts::PI / 3.0;
                // on a ray boundary the side flag nudges into the adjacent sector
                let frac = (phi / third).rem_euclid(1.0);
                if frac < 1e-12 || frac > 1.0 - 1e-12 {
                    phi += match side {
                        JumpSide::Plus => 1e-9,
                        JumpSide::Minus => -1e-9,
                    };
                    phi = phi.rem_euclid(2.0 * std::f64::consts::PI);
                }
                values[((phi / third) as usize).min(2)]
            }
            FieldModel::SmoothHarmonic {
                center,
                ref coefficients,
            } => {
                let (zx, zy) = p.sub(center);
                let (mut px, mut py) = (1.0, 0.0); // z^k
                let mut v = 0.0;
                for c in coefficients {
                    v += c[0] * px + c[1] * py;
                    let nx = px * zx - py * zy;
                    py = px * zy + py * zx;
                    px = nx;
                }
                v
            }
        }
    }

    /// The model rotated about the origin by `theta`.
    pub fn rotated(&self, theta: f64) -> FieldModel {
        match *self {
            FieldModel::CrackTip { tip, axis_angle } => FieldModel::CrackTip {
                tip: tip.rotated(theta),
                axis_angle: axis_angle + theta,
            },
            FieldModel::PlanarInterface {
                point,
                normal,
                alpha,
                beta,
            } => FieldModel::PlanarInterface {
                point: point.rotated(theta),
                normal: normal.rotated(theta),
                alpha,
                beta,
            },
            FieldModel::Propeller {
                center,
                axis_angle,
                values,
            } => FieldModel::Propeller {
                center: center.rotated(theta),
                axis_angle: axis_angle + theta,
                values,
            },
            FieldModel::SmoothHarmonic {
                center,
                ref coefficients,
            } => {
                let rotated_coeffs = coefficients
                    .iter()
                    .enumerate()
                    .map(|(k, c)| {
                        let (s, co) = (k as f64 * theta).sin_cos();
                        [c[0] * co - c[1] * s, c[0] * s + c[1] * co]
                    })
                    .collect();
                FieldModel::SmoothHarmonic {
                    center: center.rotated(theta),
                    coefficients: rotated_coeffs,
                }
            }
        }
    }
}

fn rotate_xy(x: f64, y: f64, theta: f64) -> (f64, f64) {
    let (s, c) = theta.sin_cos();
    (c * x - s * y, s * x + c * y)
}

/// Coordinates of `p` in the frame centered at `base` with x-axis along `axis_angle`.
fn local_frame_coords(p: Point2, base: Point2, axis_angle: f64) -> (f64, f64) {
    let (wx, wy) = p.sub(base);
    let (s, c) = axis_angle.sin_cos();
    (c * wx + s * wy, -s * wx + c * wy)
}

/// Wrap an `atan2` result into `[0, 2 pi)`.
fn wrap_angle(phi: f64) -> f64 {
    let tau = 2.0 * std::f64::consts::PI;
    let w = phi.rem_euclid(tau);
    if w == tau {
        0.0
    } else {
        w
    }
}

/// All intersection points of the jump curves with the probe circle, tangents
/// oriented to `nu . t >= 0`. Tangential contacts and crossings that coincide
/// with a curve endpoint are flagged non-transversal: at such radii the
/// crossing structure changes and the circle identities only hold a.e.
pub fn circle_crossings(jumps: &JumpSet, disk: &DiskProbe) -> Vec<CircleCrossing> {
    let mut out = Vec::new();
    let r = disk.radius;
    let endpoint_tol = 1e-9 * r.max(1.0);
    for curve in &jumps.curves {
        let (base, dir, lo, hi) = curve.parametrization();
        let (wx, wy) = base.sub(disk.center);
        let b = dir.dot_xy(wx, wy);
        // discriminant through the perpendicular distance of the supporting
        // line; the textbook b^2 - (|w|^2 - r^2) cancels catastrophically
        // for small radii
        let d_perp = (wx * dir.y() - wy * dir.x()).abs();
        let disc = (r - d_perp) * (r + d_perp);
        if disc < 0.0 {
            continue;
        }
        let sq = disc.sqrt();
        // root s = -b +- sq; there nu . dir = +- sq / r
        for (root, sign) in [(-b + sq, 1.0), (-b - sq, -1.0)] {
            if disc == 0.0 && sign < 0.0 {
                continue; // double root reported once
            }
            if root < lo - endpoint_tol || root > hi + endpoint_tol {
                continue;
            }
            let point = curve.point_at(root);
            let nu_dot_dir = sign * sq / r;
            let tangent = if nu_dot_dir >= 0.0 { dir } else { dir.neg() };
            let nu_dot_t = nu_dot_dir.abs();
            let at_endpoint = (root - lo).abs() <= endpoint_tol
                || (hi.is_finite() && (root - hi).abs() <= endpoint_tol);
            out.push(CircleCrossing {
                point,
                tangent,
                nu_dot_t,
                transversal: nu_dot_t >= TANGENCY_TOL && !at_endpoint,
            });
        }
    }
    out
}

/// Exact length of the jump set clipped to the open disk.
pub fn jump_length_in_disk(jumps: &JumpSet, disk: &DiskProbe) -> f64 {
    let r = disk.radius;
    let mut total = 0.0;
    for curve in &jumps.curves {
        let (base, dir, lo, hi) = curve.parametrization();
        let (wx, wy) = base.sub(disk.center);
        let b = dir.dot_xy(wx, wy);
        let d_perp = (wx * dir.y() - wy * dir.x()).abs();
        let disc = (r - d_perp) * (r + d_perp);
        if disc <= 0.0 {
            continue;
        }
        let sq = disc.sqrt();
        let (s_in, s_out) = (-b - sq, -b + sq);
        let overlap = s_out.min(hi) - s_in.max(lo);
        if overlap > 0.0 {
            total += overlap;
        }
    }
    total
}

/// Radii at which the crossing structure of `curve` around `x0` can change:
/// the tangency distance and the endpoint distances.
fn critical_radii(curve: &JumpCurve, x0: Point2) -> Vec<f64> {
    let (base, dir, lo, hi) = curve.parametrization();
    let (wx, wy) = x0.sub(base);
    let t_foot = dir.dot_xy(wx, wy);
    let mut out = Vec::new();
    if t_foot >= lo && t_foot <= hi {
        out.push(x0.dist(curve.point_at(t_foot)));
    }
    if lo.is_finite() {
        out.push(x0.dist(curve.point_at(lo)));
    }
    if hi.is_finite() {
        out.push(x0.dist(curve.point_at(hi)));
    }
    out
}

/// Two sides of the coarea identity on `[0, R]`: the exact clipped jump
/// length and the radial quadrature of `sum 1/|nu . t|` over the circle
/// crossings. The radial axis is split at the critical radii of each curve
/// and each piece is integrated with a Gauss-Legendre rule under a smoothstep
/// substitution, which absorbs the inverse-square-root blowup at tangency
/// radii. Nodes falling on non-transversal radii are skipped.
pub fn coarea_two_sides(jumps: &JumpSet, x0: Point2, big_r: f64, n_r: usize) -> (f64, f64) {
    assert!(n_r >= 16, "coarea quadrature needs at least 16 nodes");
    assert!(big_r > 0.0);
    let length = jump_length_in_disk(jumps, &DiskProbe::new(x0, big_r));

    let mut breaks: Vec<f64> = vec![0.0, big_r];
    for curve in &jumps.curves {
        for rad in critical_radii(curve, x0) {
            if rad > 1e-12 * big_r && rad < big_r * (1.0 - 1e-12) {
                breaks.push(rad);
            }
        }
    }
    breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
    breaks.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * big_r);

    let n_sub = breaks.len() - 1;
    let nodes_per_sub = (n_r / n_sub).max(32);
    let panels = nodes_per_sub.div_ceil(16);
    let (gl_nodes, gl_weights) = gauss_legendre_rule(16);

    let integrand = |r: f64| -> f64 {
        let crossings = circle_crossings(jumps, &DiskProbe::new(x0, r));
        if crossings.iter().any(|c| !c.transversal) {
            return 0.0;
        }
        crossings.iter().map(|c| 1.0 / c.nu_dot_t).sum()
    };

    let mut integral = 0.0;
    for w in breaks.windows(2) {
        let (a, b) = (w[0], w[1]);
        // r = a + (b-a) s(t), s = t^2 (3 - 2t): ds/dt vanishes at both ends
        for p in 0..panels {
            let (t0, t1) = (p as f64 / panels as f64, (p + 1) as f64 / panels as f64);
            let (mid, half) = (0.5 * (t0 + t1), 0.5 * (t1 - t0));
            for (xi, wi) in gl_nodes.iter().zip(&gl_weights) {
                let t = mid + half * xi;
                let s = t * t * (3.0 - 2.0 * t);
                let ds = 6.0 * t * (1.0 - t);
                let r = a + (b - a) * s;
                integral += half * wi * integrand(r) * (b - a) * ds;
            }
        }
    }
    (length, integral)
}
