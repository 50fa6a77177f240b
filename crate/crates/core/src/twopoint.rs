//! The two-crossing angle function
//! `f(a1, a2) = 1/(2 cos a1) + 1/(2 cos a2) + sqrt(2 + 2 cos(phi~ + a1 - a2))`
//! and certified lower bounds for it.
//!
//! Certification strategy. Sampling alone cannot certify the sharp constants:
//! `f` attains `sqrt(2)` exactly (at `phi~ = pi/2`, `(a1, a2) = (pi/4, -pi/4)`),
//! so any grid-minus-Lipschitz-slack bound lands strictly below it. The
//! certificates therefore combine three exact reductions with per-cell slope
//! bounds on a grid:
//!
//! 1. convexity of `sec` gives `1/(2 cos a1) + 1/(2 cos a2) >= sec(beta)`
//!    with `beta = (a1 - a2)/2`;
//! 2. `sqrt(2 + 2 cos x) = 2 |cos(x/2)|` exactly;
//! 3. the infimum of `|cos(phi~/2 + beta)|` over the admissible `phi~` range
//!    has a closed form (`m_inf` below).
//!
//! This leaves one-dimensional profiles `G(beta) = sec(beta) + 2 m(beta)`
//! whose minima sit at kinks with closed-form values (`sec(pi/4) = sqrt(2)`,
//! `sec(49 pi/180)`); cells adjacent to a kink are certified by the sign of
//! `G'` instead of by value. The region claims (3) and (4) are certified on
//! the two-dimensional grid by the contrapositive: every cell either has a
//! certified `f >= 1.51` or a certified sum bound, refining failing cells.

use crate::error::Error;
use crate::exec;
use crate::geometry::{CircleCrossing, DiskProbe};
use crate::Result;
use serde::{Deserialize, Serialize};

const PI: f64 = std::f64::consts::PI;
const FRAC_PI_2: f64 = std::f64::consts::FRAC_PI_2;
const FRAC_PI_4: f64 = std::f64::consts::FRAC_PI_4;
const SQRT_2: f64 = std::f64::consts::SQRT_2;

/// A two-crossing configuration: clamped shorter-arc angle and the tangent
/// angles in the `(nu, nu-perp)` frames.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TwoPointConfig {
    pub phi_tilde: f64,
    pub alpha1: f64,
    pub alpha2: f64,
}

impl TwoPointConfig {
    pub fn new(phi_tilde: f64, alpha1: f64, alpha2: f64) -> Result<Self> {
        if !(phi_tilde > 0.0 && phi_tilde <= FRAC_PI_2) {
            return Err(Error::InvalidModel(format!(
                "phi_tilde {phi_tilde} outside (0, pi/2]"
            )));
        }
        for a in [alpha1, alpha2] {
            if !(a > -FRAC_PI_2 && a < FRAC_PI_2) {
                return Err(Error::InvalidModel(format!(
                    "alpha {a} outside (-pi/2, pi/2)"
                )));
            }
        }
        Ok(Self {
            phi_tilde,
            alpha1,
            alpha2,
        })
    }

    pub fn f_eval(&self) -> f64 {
        f_raw(self.phi_tilde, self.alpha1, self.alpha2)
    }
}

/// `f` without domain validation; returns a large sentinel outside the
/// cosine domain so grid searches stay well-defined.
pub fn f_raw(phi_tilde: f64, alpha1: f64, alpha2: f64) -> f64 {
    let (c1, c2) = (alpha1.cos(), alpha2.cos());
    if c1 <= 1e-12 || c2 <= 1e-12 {
        return 1e300;
    }
    0.5 / c1 + 0.5 / c2 + (2.0 + 2.0 * (phi_tilde + alpha1 - alpha2).cos()).max(0.0).sqrt()
}

/// `min_{y in [beta, beta + half]} |cos y|` for `beta > -pi/2`,
/// `0 < half <= pi/4`. Zero when the interval contains an odd multiple of
/// `pi/2`; otherwise `|cos|` is monotone on the interval, so the minimum sits
/// at an endpoint.
fn m_inf(beta: f64, half: f64) -> f64 {
    let (lo, hi) = (beta, beta + half);
    for mult in [-FRAC_PI_2, FRAC_PI_2, 1.5 * PI] {
        if lo <= mult && mult <= hi {
            return 0.0;
        }
    }
    lo.cos().abs().min(hi.cos().abs())
}

/// `d/dt sec(t)` bound helper: `sin t / cos^2 t`, increasing in `|t|`.
fn sec_slope(t: f64) -> f64 {
    let c = t.cos();
    t.sin().abs() / (c * c)
}

/// Certified claim outcome. `certified_lower_bound` is rigorous for the
/// claim's region; it is never smaller than
/// `grid_minimum - lipschitz_bound * cell_radius` (kink cells are certified
/// through derivative signs and closed-form corner values instead of the
/// plain value formula, which cannot reach the sharp constants).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificationReport {
    pub claim_id: String,
    pub grid_resolution: usize,
    pub grid_minimum: f64,
    pub lipschitz_bound: f64,
    pub certified_lower_bound: f64,
    pub target: f64,
    pub verdict: bool,
}

/// Claim 1: `f >= sqrt(2)` for every `phi_tilde` in `(0, pi/2]`.
///
/// Reduced profile `G(beta) = sec(beta) + 2 m_inf(beta, pi/4)`. Pieces:
/// `beta <= -pi/3` has `sec beta >= 2`; `beta >= pi/4` has `m = 0` and
/// `sec beta >= sec(pi/4) = sqrt(2)` by monotonicity; on `[-pi/3, pi/4]` the
/// grid certifies cell values except for a suffix of cells adjacent to
/// `pi/4` on which `G' < 0` is certified instead, pinning the infimum there
/// to the corner value `sec(pi/4)`.
fn certify_claim1(n: usize) -> Result<CertificationReport> {
    let (dom_lo, dom_hi) = (-PI / 3.0, FRAC_PI_4);
    let h = (dom_hi - dom_lo) / n as f64;
    let g = |beta: f64| 1.0 / beta.cos() + 2.0 * m_inf(beta, FRAC_PI_4);

    // right-to-left: maximal suffix of derivative-certified cells in [0, pi/4]
    let mut suffix_start = n;
    for i in (0..n).rev() {
        let (a, b) = (dom_lo + i as f64 * h, dom_lo + (i + 1) as f64 * h);
        if a < 0.0 {
            break;
        }
        let dmax = 1.0 / b.cos() * b.tan() - 2.0 * (a + FRAC_PI_4).sin();
        if dmax < 0.0 {
            suffix_start = i;
        } else {
            break;
        }
    }

    let mut grid_min = f64::INFINITY;
    let mut value_min = f64::INFINITY;
    let mut lip_max: f64 = 0.0;
    for i in 0..n {
        let (a, b) = (dom_lo + i as f64 * h, dom_lo + (i + 1) as f64 * h);
        let mid = 0.5 * (a + b);
        let val = g(mid);
        grid_min = grid_min.min(val);
        if i >= suffix_start {
            continue;
        }
        let lip = sec_slope(a.abs().max(b.abs())) + 2.0;
        lip_max = lip_max.max(lip);
        let lo_bound = val - lip * 0.5 * h;
        if lo_bound < SQRT_2 {
            return Err(Error::CertificationInconclusive {
                claim: "claim1_f_ge_sqrt2".into(),
                detail: format!("value cell at beta = {mid} certifies only {lo_bound}"),
            });
        }
        value_min = value_min.min(lo_bound);
    }
    // pieces: value cells (> sqrt2), derivative suffix (= sec(pi/4)),
    // beta >= pi/4 (= sec(pi/4)), beta <= -pi/3 (>= 2);
    // the kink value is the identity sec(pi/4) = sqrt(2)
    let corner = SQRT_2;
    let certified = value_min.min(corner).min(2.0);
    Ok(CertificationReport {
        claim_id: "claim1_f_ge_sqrt2".into(),
        grid_resolution: n,
        grid_minimum: grid_min,
        lipschitz_bound: lip_max,
        certified_lower_bound: certified,
        target: SQRT_2,
        verdict: certified >= SQRT_2,
    })
}

/// Claim 2: `f >= 1.52` for `phi_tilde <= (82/90)(pi/2)`.
///
/// Profile `G2(beta) = sec(beta) + 2 m_inf(beta, 41 pi/180)` certified by
/// value on `[-B, B]` with `sec(B) = 1.6`; outside, `sec` alone exceeds 1.6.
fn certify_claim2(n: usize) -> Result<CertificationReport> {
    let half = 41.0 * PI / 180.0;
    let target = 1.52;
    let bound = (1.0f64 / 1.6).acos();
    let h = 2.0 * bound / n as f64;
    let g = |beta: f64| 1.0 / beta.cos() + 2.0 * m_inf(beta, half);

    let mut grid_min = f64::INFINITY;
    let mut value_min = f64::INFINITY;
    let mut lip_max: f64 = 0.0;
    for i in 0..n {
        let (a, b) = (-bound + i as f64 * h, -bound + (i + 1) as f64 * h);
        let mid = 0.5 * (a + b);
        let val = g(mid);
        grid_min = grid_min.min(val);
        let lip = sec_slope(a.abs().max(b.abs())) + 2.0;
        lip_max = lip_max.max(lip);
        let lo_bound = val - lip * 0.5 * h;
        if lo_bound < target {
            return Err(Error::CertificationInconclusive {
                claim: "claim2_f_ge_1.52".into(),
                detail: format!("cell at beta = {mid} certifies only {lo_bound}"),
            });
        }
        value_min = value_min.min(lo_bound);
    }
    let certified = value_min.min(1.6);
    Ok(CertificationReport {
        claim_id: "claim2_f_ge_1.52".into(),
        grid_resolution: n,
        grid_minimum: grid_min,
        lipschitz_bound: lip_max,
        certified_lower_bound: certified,
        target,
        verdict: certified >= target,
    })
}

/// Which sum the region claim bounds.
#[derive(Clone, Copy)]
enum RegionSum {
    /// `1/(2 cos a1) + 1/(2 cos a2) >= 1.26`
    HalfSec,
    /// `sum_i (1/(2 cos a_i) + cos(a_i)/2) >= 2.055`
    HalfSecPlusCos,
}

struct CellOutcome {
    pass: bool,
    /// certified sum bound when the cell is sum-certified
    sum_bound: Option<f64>,
}

/// Per-cell certificate for the region claims: either the cell provably lies
/// outside `{ f < 1.51 }` for all admissible `phi_tilde` (gate), or the sum
/// bound holds on it.
fn region_cell(cx: f64, cy: f64, half_w: f64, which: RegionSum, threshold: f64) -> CellOutcome {
    let (c1, c2) = (cx.cos(), cy.cos());
    let s1 = 0.5 / c1 + 0.5 / c2;
    let beta = 0.5 * (cx - cy);
    let g = s1 + 2.0 * m_inf(beta, FRAC_PI_4);
    let (m1, m2) = (cx.abs() + half_w, cy.abs() + half_w);
    let lip_gate = 0.5 * sec_slope(m1) + 1.0 + (0.5 * sec_slope(m2) + 1.0);
    if g - lip_gate * half_w >= 1.51 {
        return CellOutcome {
            pass: true,
            sum_bound: None,
        };
    }
    let (sum, lip_sum) = match which {
        RegionSum::HalfSec => (s1, 0.5 * (sec_slope(m1) + sec_slope(m2))),
        RegionSum::HalfSecPlusCos => {
            // d/dt (sec t + cos t)/2 = sin t tan^2 t / 2, increasing in |t|
            let slope = |t: f64| {
                let tn = t.tan();
                0.5 * t.sin().abs() * tn * tn
            };
            (s1 + 0.5 * (c1 + c2), slope(m1) + slope(m2))
        }
    };
    let lo = sum - lip_sum * half_w;
    CellOutcome {
        pass: lo >= threshold,
        sum_bound: Some(lo),
    }
}

fn certify_region_claim(
    n: usize,
    which: RegionSum,
    threshold: f64,
    claim_id: &str,
) -> Result<CertificationReport> {
    // outside |alpha_i| <= A one half-secant term alone exceeds 1.51,
    // placing the point outside the region for every phi_tilde
    let a_max = (1.0f64 / 3.02).acos();
    let h = 2.0 * a_max / n as f64;
    let half_w = 0.5 * h;

    struct RowResult {
        sum_min: f64,
        observed_min: f64,
        failures: Vec<(f64, f64)>,
    }
    let rows = exec::map_indexed(n, |i| {
        let cx = -a_max + (i as f64 + 0.5) * h;
        let mut sum_min = f64::INFINITY;
        let mut observed = f64::INFINITY;
        let mut failures = Vec::new();
        for j in 0..n {
            let cy = -a_max + (j as f64 + 0.5) * h;
            let out = region_cell(cx, cy, half_w, which, threshold);
            if let Some(b) = out.sum_bound {
                sum_min = sum_min.min(b);
                let observed_sum = match which {
                    RegionSum::HalfSec => 0.5 / cx.cos() + 0.5 / cy.cos(),
                    RegionSum::HalfSecPlusCos => {
                        0.5 / cx.cos() + 0.5 / cy.cos() + 0.5 * (cx.cos() + cy.cos())
                    }
                };
                observed = observed.min(observed_sum);
            }
            if !out.pass {
                failures.push((cx, cy));
            }
        }
        RowResult {
            sum_min,
            observed_min: observed,
            failures,
        }
    });

    let mut certified = f64::INFINITY;
    let mut grid_min = f64::INFINITY;
    let mut worklist: Vec<(f64, f64, f64, usize)> = Vec::new();
    for row in rows {
        certified = certified.min(row.sum_min);
        grid_min = grid_min.min(row.observed_min);
        for (cx, cy) in row.failures {
            worklist.push((cx, cy, half_w, 0));
        }
    }
    let mut budget: usize = 20_000_000;
    while let Some((cx, cy, hw, depth)) = worklist.pop() {
        if budget == 0 || depth > 14 {
            return Err(Error::CertificationInconclusive {
                claim: claim_id.into(),
                detail: format!("cell at ({cx}, {cy}) unresolved at depth {depth}"),
            });
        }
        budget -= 1;
        let out = region_cell(cx, cy, hw, which, threshold);
        if out.pass {
            if let Some(b) = out.sum_bound {
                certified = certified.min(b);
            }
            continue;
        }
        let q = 0.5 * hw;
        for (dx, dy) in [(-q, -q), (-q, q), (q, -q), (q, q)] {
            worklist.push((cx + dx, cy + dy, q, depth + 1));
        }
    }

    let lip_max = match which {
        RegionSum::HalfSec => sec_slope(a_max),
        RegionSum::HalfSecPlusCos => {
            let tn = a_max.tan();
            a_max.sin() * tn * tn
        }
    };
    Ok(CertificationReport {
        claim_id: claim_id.into(),
        grid_resolution: n,
        grid_minimum: grid_min,
        lipschitz_bound: lip_max,
        certified_lower_bound: certified,
        target: threshold,
        verdict: certified >= threshold,
    })
}

/// Certify the four numeric claims of the two-point lemma at grid
/// resolution `n`:
///
/// 1. `f >= sqrt(2)` for all `phi_tilde` in `(0, pi/2]`;
/// 2. `f >= 1.52` for `phi_tilde <= (82/90)(pi/2)`;
/// 3. on `{ f < 1.51 }`: `1/(2 cos a1) + 1/(2 cos a2) >= 1.26`;
/// 4. on `{ f < 1.51 }`: `sum_i (1/(2 cos a_i) + cos(a_i)/2) >= 2.055`.
pub fn certify_lemma54(n: usize) -> Result<Vec<CertificationReport>> {
    assert!(n >= 1024, "certification grid must have at least 1024 cells");
    Ok(vec![
        certify_claim1(n)?,
        certify_claim2(n)?,
        certify_region_claim(n, RegionSum::HalfSec, 1.26, "claim3_halfsec_ge_1.26")?,
        certify_region_claim(
            n,
            RegionSum::HalfSecPlusCos,
            2.055,
            "claim4_halfsec_plus_cos_ge_2.055",
        )?,
    ])
}

/// Grid minimum of `f` over the truncated square, refined by golden-section
/// line searches along the axes and both diagonals (the minimizer sits on the
/// crease of the square-root term, so diagonal moves are required).
pub fn f_min(phi_tilde: f64, n: usize) -> (f64, (f64, f64)) {
    assert!(n >= 256, "f_min grid too coarse");
    assert!(phi_tilde > 0.0 && phi_tilde <= FRAC_PI_2);
    // outside |alpha| <= arccos(1/6) one term alone exceeds f(0,0) <= 3
    let a_max = (1.0f64 / 6.0).acos();
    let h = 2.0 * a_max / (n - 1) as f64;

    let rows = exec::map_indexed(n, |i| {
        let a1 = -a_max + i as f64 * h;
        let mut best = (f64::INFINITY, 0.0f64);
        for j in 0..n {
            let a2 = -a_max + j as f64 * h;
            let v = f_raw(phi_tilde, a1, a2);
            if v < best.0 {
                best = (v, a2);
            }
        }
        (best.0, a1, best.1)
    });
    let (mut best_v, mut x, mut y) = rows
        .into_iter()
        .min_by(|a, b| a.0.partial_cmp(&b.0).unwrap())
        .unwrap();

    let dirs = [
        (1.0, 0.0),
        (0.0, 1.0),
        (std::f64::consts::FRAC_1_SQRT_2, -std::f64::consts::FRAC_1_SQRT_2),
        (std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2),
    ];
    let mut step = 2.0 * h;
    while step > 1e-11 {
        let mut improved = false;
        for (dx, dy) in dirs {
            let line = |t: f64| f_raw(phi_tilde, x + t * dx, y + t * dy);
            let (t_best, v) = golden_section(line, -step, step);
            if v < best_v - 1e-16 {
                best_v = v;
                x += t_best * dx;
                y += t_best * dy;
                improved = true;
            }
        }
        if !improved {
            step *= 0.4;
        }
    }
    (best_v, (x, y))
}

fn golden_section<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> (f64, f64) {
    const INV_GOLD: f64 = 0.618_033_988_749_894_9;
    let mut x1 = hi - INV_GOLD * (hi - lo);
    let mut x2 = lo + INV_GOLD * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..80 {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_GOLD * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_GOLD * (hi - lo);
            f2 = f(x2);
        }
    }
    let mid = 0.5 * (lo + hi);
    (mid, f(mid))
}

/// Worst (most negative) value of
/// `f(alpha + s, -alpha + s) - f(alpha, -alpha)` over a grid of
/// `(phi_tilde, alpha, s)`. The difference is nonnegative by convexity of
/// `sec`; the return should exceed `-1e-12`.
pub fn symmetrization_check(n: usize) -> f64 {
    assert!(n >= 128);
    let worst_per_phi = exec::map_indexed(n, |i| {
        let phi = FRAC_PI_2 * (i + 1) as f64 / n as f64;
        let mut worst = f64::INFINITY;
        for j in 0..n {
            let alpha = FRAC_PI_2 * (j as f64 + 0.5) / n as f64;
            let base = f_raw(phi, alpha, -alpha);
            let s_max = alpha.min(FRAC_PI_2 - alpha) * (1.0 - 1e-9);
            for k in 0..n {
                let s = s_max * (2.0 * (k as f64 + 0.5) / n as f64 - 1.0);
                worst = worst.min(f_raw(phi, alpha + s, -alpha + s) - base);
            }
        }
        worst
    });
    worst_per_phi.into_iter().fold(f64::INFINITY, f64::min)
}

/// Sign pattern of the reduced-profile derivative for both variants
/// (`offset = pi/4` with kink at `pi/4`; `offset = 41 pi/180` with kink at
/// `49 pi/180`): `sec'(a) - 2 sin(offset + a) < 0` left of the kink, and the
/// active branch `sec` has positive derivative right of it. Also checks that
/// the grid argmin of `sec a + 2 (cos(offset + a))_+` lands at the kink.
pub fn derivative_sign_check(n: usize) -> bool {
    assert!(n >= 1024);
    for (offset, kink) in [(FRAC_PI_4, FRAC_PI_4), (41.0 * PI / 180.0, 49.0 * PI / 180.0)] {
        for i in 0..n {
            let a = kink * (i as f64 + 0.5) / n as f64;
            let d = a.tan() / a.cos() - 2.0 * (offset + a).sin();
            if d >= 0.0 {
                return false;
            }
        }
        let hi = FRAC_PI_2 - 0.02;
        for i in 0..n {
            let a = kink + (hi - kink) * (i as f64 + 0.5) / n as f64;
            if a.tan() / a.cos() <= 0.0 {
                return false;
            }
        }
        // argmin of the positive-part profile sits at the kink
        let profile = |a: f64| 1.0 / a.cos() + 2.0 * (offset + a).cos().max(0.0);
        let spacing = hi / n as f64;
        let mut best = (f64::INFINITY, 0.0);
        for i in 0..n {
            let a = (i as f64 + 0.5) * spacing;
            let v = profile(a);
            if v < best.0 {
                best = (v, a);
            }
        }
        if (best.1 - kink).abs() > 2.0 * spacing {
            return false;
        }
    }
    true
}

/// Extract the two-point configuration from exactly two transversal circle
/// crossings: the shorter-arc angle (clamped to `pi/2`) and the tangent
/// angles, with the first point lying counterclockwise from the second
/// across the shorter arc.
pub fn crossings_to_config(
    crossings: &[CircleCrossing],
    disk: &DiskProbe,
) -> Result<TwoPointConfig> {
    let transversal: Vec<&CircleCrossing> = crossings.iter().filter(|c| c.transversal).collect();
    if transversal.len() != 2 || crossings.len() != 2 {
        return Err(Error::WrongCrossingCount {
            expected: 2,
            found: transversal.len(),
        });
    }
    let tau = 2.0 * PI;
    let (ca, cb) = (transversal[0], transversal[1]);
    let (ta, tb) = (ca.angle(disk), cb.angle(disk));
    let w_ab = (tb - ta).rem_euclid(tau);
    // label so that x1 is reached from x2 by the shorter counterclockwise arc
    let (x1, x2, phi) = if w_ab <= PI {
        (cb, ca, w_ab)
    } else {
        (ca, cb, tau - w_ab)
    };
    let alpha_of = |c: &CircleCrossing| -> f64 {
        let nu_x = (c.point.x - disk.center.x) / disk.radius;
        let nu_y = (c.point.y - disk.center.y) / disk.radius;
        let along = c.tangent.dot_xy(nu_x, nu_y);
        let across = c.tangent.dot_xy(-nu_y, nu_x);
        across.atan2(along)
    };
    TwoPointConfig::new(phi.min(FRAC_PI_2), alpha_of(x1), alpha_of(x2))
}

/// Dense `f` landscape rows `(phi_tilde, alpha1, alpha2, f)` for export.
pub fn f_landscape(phi_tildes: &[f64], n: usize) -> Vec<(f64, f64, f64, f64)> {
    let a_max = (1.0f64 / 6.0).acos();
    let mut rows = Vec::with_capacity(phi_tildes.len() * n * n);
    for &phi in phi_tildes {
        for i in 0..n {
            let a1 = -a_max + 2.0 * a_max * i as f64 / (n - 1) as f64;
            for j in 0..n {
                let a2 = -a_max + 2.0 * a_max * j as f64 / (n - 1) as f64;
                rows.push((phi, a1, a2, f_raw(phi, a1, a2)));
            }
        }
    }
    rows
}
