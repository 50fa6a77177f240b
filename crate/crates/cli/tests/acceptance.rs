//! Acceptance suite: every criterion runs at its stated tolerance and prints
//! one pass/fail line. Run with `--nocapture` to see the per-criterion lines:
//!
//! ```text
//! cargo test -p mumshah-cli --test acceptance -- --nocapture
//! ```

use mumshah::competitors::{
    disk_extension_energies, sector_extension_energies, sector_trace_from_arc, FourierTrace,
    SectorTrace,
};
use mumshah::diagnostics::{
    dirichlet_energy_quadrature, dlms_residual, energy_density, entropy, equilibrium_residual,
    prop31_gap, prop31_gap_sweep, radial_slice_bound, radius_grid, scan, sharpness_scan,
    BumpField, GridKind, ScanTolerances,
};
use mumshah::geometry::{
    circle_crossings, jump_length_in_disk, DiskProbe, FieldModel, Point2, UnitVector,
};
use mumshah::quadrature::{gauss_legendre_rule, integrate_disk, QuadratureSpec};
use mumshah::twopoint::{certify_lemma54, f_min, symmetrization_check};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::{Duration, Instant};

type CriterionResult = Result<String, String>;

fn check_budget(start: Instant, budget: Duration, what: &str) -> Result<(), String> {
    let elapsed = start.elapsed();
    if elapsed > budget {
        return Err(format!("{what} took {elapsed:.2?}, budget {budget:.2?}"));
    }
    Ok(())
}

fn crack_tip() -> FieldModel {
    FieldModel::crack_tip(Point2::new(0.0, 0.0), 0.0)
}

fn interface() -> FieldModel {
    FieldModel::planar_interface(
        Point2::new(0.0, 0.0),
        UnitVector::new(0.0, 1.0).unwrap(),
        1.0,
        0.0,
    )
}

fn propeller() -> FieldModel {
    FieldModel::propeller(Point2::new(0.0, 0.0), 0.2, [0.0, 4.0, 9.0])
}

/// 1. Crack-tip constants F = 3/2 and E = 2 by closed form (1e-9) and by the
///    singular quadrature route (1e-7), within one second.
fn criterion_1() -> CriterionResult {
    let start = Instant::now();
    let spec = QuadratureSpec::default();
    let model = crack_tip();
    let mut worst_closed = 0.0f64;
    let mut worst_quad = 0.0f64;
    for r in [0.1, 1.0, 10.0] {
        let disk = DiskProbe::new(Point2::new(0.0, 0.0), r);
        let f = entropy(&model, &disk, &spec).map_err(|e| e.to_string())?;
        let e = energy_density(&model, &disk, &spec).map_err(|e| e.to_string())?;
        worst_closed = worst_closed.max((f - 1.5).abs()).max((e - 2.0).abs());
        let dir = dirichlet_energy_quadrature(&model, &disk, &spec).map_err(|e| e.to_string())?;
        let len = jump_length_in_disk(&model.jump_set(), &disk);
        let f_q = (dir + 0.5 * len) / r;
        let e_q = (dir + len) / r;
        worst_quad = worst_quad.max((f_q - 1.5).abs()).max((e_q - 2.0).abs());
    }
    if worst_closed >= 1e-9 {
        return Err(format!("closed-form error {worst_closed:.3e} >= 1e-9"));
    }
    if worst_quad >= 1e-7 {
        return Err(format!("quadrature error {worst_quad:.3e} >= 1e-7"));
    }
    check_budget(start, Duration::from_secs(1), "crack-tip constants")?;
    Ok(format!(
        "closed {worst_closed:.2e}, quadrature {worst_quad:.2e}"
    ))
}

/// 2. Truncated-entropy monotonicity and the discrete derivative inequality
///    on 400-point geometric scans of six catalog probes, within 30 s.
fn criterion_2() -> CriterionResult {
    let start = Instant::now();
    let spec = QuadratureSpec::scan();
    let tol = ScanTolerances::default();
    let radii = radius_grid(0.05, 50.0, 400, GridKind::Geometric);
    let cases: Vec<(FieldModel, Point2, &str)> = vec![
        (crack_tip(), Point2::new(0.0, 0.0), "tip"),
        (crack_tip(), Point2::new(1.0, 0.0), "tip+e1"),
        (crack_tip(), Point2::new(0.0, 0.5), "tip+0.5e2"),
        (interface(), Point2::new(0.0, 0.0), "interface-on"),
        (interface(), Point2::new(0.0, 1.0), "interface-off"),
        (propeller(), Point2::new(0.0, 0.0), "propeller-center"),
    ];
    let mut min_fd = f64::INFINITY;
    let mut min_slack = f64::INFINITY;
    let mut skipped_total = 0usize;
    for (model, x0, label) in &cases {
        let report = scan(model, *x0, &radii, &spec, &tol);
        skipped_total += report.rows.iter().filter(|r| r.skipped).count();
        if report.min_forward_difference < -1e-8 {
            return Err(format!(
                "{label}: min forward difference {} at r {}",
                report.min_forward_difference, report.worst_radius
            ));
        }
        if report.diff_ineq_min_slack < -1e-3 {
            return Err(format!(
                "{label}: differential-inequality slack {}",
                report.diff_ineq_min_slack
            ));
        }
        min_fd = min_fd.min(report.min_forward_difference);
        min_slack = min_slack.min(report.diff_ineq_min_slack);
    }
    check_budget(start, Duration::from_secs(30), "six 400-point scans")?;
    Ok(format!(
        "min forward difference {min_fd:.2e}, min slack {min_slack:.2e}, skipped rows {skipped_total}"
    ))
}

/// 3. Sharpness of the 3/2 threshold: F(1, delta e1) > 3/2 with slope near
///    1/2, and the quadrature validated against a 1e7-sample Monte Carlo
///    oracle to three significant digits; within 10 s.
fn criterion_3() -> CriterionResult {
    let start = Instant::now();
    let spec = QuadratureSpec::default();
    let table = sharpness_scan(&[0.01, 0.05, 0.1], &spec).map_err(|e| e.to_string())?;
    for &(d, f) in &table {
        if f <= 1.5 {
            return Err(format!("F(1, {d}) = {f} not above 3/2"));
        }
    }
    let slope = (table[0].1 - 1.5) / table[0].0;
    if !(0.4..=0.6).contains(&slope) {
        return Err(format!("slope at delta = 0.01 is {slope}, outside [0.4, 0.6]"));
    }
    // Monte Carlo oracle for the offset Dirichlet integral at delta = 0.1
    let model = crack_tip();
    let disk = DiskProbe::new(Point2::new(0.1, 0.0), 1.0);
    let (quad, _) = integrate_disk(
        |p| model.gradient_sq_ae(p),
        &disk,
        Some(Point2::new(0.0, 0.0)),
        &spec,
    )
    .map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let samples = 10_000_000usize;
    let mut hits = 0usize;
    for _ in 0..samples {
        let rho = rng.gen_range(0.0..1.1);
        let phi = rng.gen_range(0.0..2.0 * std::f64::consts::PI);
        let (x, y) = (rho * phi.cos(), rho * phi.sin());
        if (x - 0.1) * (x - 0.1) + y * y < 1.0 {
            hits += 1;
        }
    }
    let mc = 1.1 * hits as f64 / samples as f64;
    if (quad - mc).abs() >= 5e-4 {
        return Err(format!("quadrature {quad} vs Monte Carlo {mc}"));
    }
    check_budget(start, Duration::from_secs(10), "sharpness scan")?;
    Ok(format!(
        "F(1,0.01) = {:.6}, slope {slope:.4}, MC agreement {:.1e}",
        table[0].1,
        (quad - mc).abs()
    ))
}

fn probe_catalog() -> Vec<FieldModel> {
    vec![
        crack_tip(),
        FieldModel::crack_tip(Point2::new(0.2, -0.1), 0.8),
        interface(),
        FieldModel::planar_interface(
            Point2::new(0.3, 0.1),
            UnitVector::new(0.6, 0.8).unwrap(),
            2.0,
            -3.0,
        ),
        propeller(),
        FieldModel::smooth_harmonic(
            Point2::new(0.0, 0.0),
            vec![[0.0, 0.0], [0.4, 0.1], [0.0, 0.2]],
        ),
    ]
}

fn random_probes(seed: u64, count: usize) -> Vec<(FieldModel, DiskProbe)> {
    let models = probe_catalog();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let model = models[rng.gen_range(0..models.len())].clone();
        let disk = DiskProbe::new(
            Point2::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)),
            rng.gen_range(0.1..3.0),
        );
        let crossings = circle_crossings(&model.jump_set(), &disk);
        if crossings
            .iter()
            .any(|c| !c.transversal || c.nu_dot_t < 0.05)
        {
            continue;
        }
        if let Some(tip) = model.singular_point() {
            if (tip.dist(disk.center) - disk.radius).abs() < 0.05 * disk.radius {
                continue;
            }
        }
        out.push((model, disk));
    }
    out
}

/// 4. Balance identity at 100 random non-tangential probes, |residual| below
///    1e-6, within 20 s.
fn criterion_4() -> CriterionResult {
    let start = Instant::now();
    let spec = QuadratureSpec::default();
    let mut worst = 0.0f64;
    for (model, disk) in random_probes(2024, 100) {
        let res = dlms_residual(&model, &disk, &spec).map_err(|e| e.to_string())?;
        worst = worst.max(res.abs());
        if res.abs() >= 1e-6 {
            return Err(format!(
                "probe ({}, {}; {}) on {model:?}: residual {res}",
                disk.center.x, disk.center.y, disk.radius
            ));
        }
    }
    check_budget(start, Duration::from_secs(20), "100 balance probes")?;
    Ok(format!("max |residual| {worst:.2e}"))
}

/// 5. Directional circle bound: gaps nonnegative over 720 directions and all
///    probes, with equality at the tip-centered probe along the crack axis.
fn criterion_5() -> CriterionResult {
    let spec = QuadratureSpec::default();
    let mut min_gap = f64::INFINITY;
    for (model, disk) in random_probes(3024, 40) {
        let gaps = prop31_gap_sweep(&model, &disk, 720, &spec).map_err(|e| e.to_string())?;
        min_gap = min_gap.min(gaps.iter().cloned().fold(f64::INFINITY, f64::min));
    }
    if min_gap < -1e-8 {
        return Err(format!("min gap {min_gap}"));
    }
    let axis_gap = prop31_gap(
        &crack_tip(),
        &DiskProbe::new(Point2::new(0.0, 0.0), 1.0),
        UnitVector::new(1.0, 0.0).unwrap(),
        &spec,
    )
    .map_err(|e| e.to_string())?;
    if axis_gap.abs() >= 1e-8 {
        return Err(format!("axis-direction gap {axis_gap} not an equality"));
    }
    Ok(format!("min gap {min_gap:.2e}, axis equality {axis_gap:.2e}"))
}

/// 6. Density and radial slice lower bounds at every catalog singular point
///    over 200-point scans.
fn criterion_6() -> CriterionResult {
    let spec = QuadratureSpec::scan();
    let cases: Vec<(FieldModel, Point2)> = vec![
        (crack_tip(), Point2::new(0.0, 0.0)),
        (interface(), Point2::new(0.7, 0.0)),
        (propeller(), Point2::new(0.0, 0.0)),
    ];
    let mut min_e = f64::INFINITY;
    let mut min_slice = f64::INFINITY;
    for (model, x0) in &cases {
        for r in radius_grid(0.05, 50.0, 200, GridKind::Geometric) {
            let disk = DiskProbe::new(*x0, r);
            let e = energy_density(model, &disk, &spec).map_err(|e| e.to_string())?;
            let s = radial_slice_bound(model, &disk, &spec).map_err(|e| e.to_string())?;
            min_e = min_e.min(e);
            min_slice = min_slice.min(s);
        }
    }
    if min_e < 2.0 - 1e-8 {
        return Err(format!("min energy density {min_e}"));
    }
    if min_slice < -1e-8 {
        return Err(format!("min slice bound {min_slice}"));
    }
    Ok(format!("min E {min_e:.10}, min slice {min_slice:.2e}"))
}

/// 7. Competitor identities: coefficient energies against 2d quadrature,
///    the sector inequality over 1e4 random draws with its exact equality
///    cases, and the slit-disk self-consistency of the crack tip.
fn criterion_7() -> CriterionResult {
    let spec = QuadratureSpec::default();
    let mut rng = ChaCha8Rng::seed_from_u64(4024);
    // coefficient formulas against 2d quadrature, K <= 8
    for _ in 0..4 {
        let k_max = rng.gen_range(1..=8usize);
        let r = rng.gen_range(0.6..2.0);
        let trace = FourierTrace {
            r,
            a: (0..=k_max).map(|_| rng.gen_range(-1.0..1.0)).collect(),
            b: (0..k_max).map(|_| rng.gen_range(-1.0..1.0)).collect(),
        };
        let (ext_coeff, _) = disk_extension_energies(&trace);
        let (quad, _) = integrate_disk(
            |p: Point2| trace.extension_gradient_sq(p.x.hypot(p.y), p.y.atan2(p.x)),
            &DiskProbe::new(Point2::new(0.0, 0.0), r),
            None,
            &spec,
        )
        .map_err(|e| e.to_string())?;
        if (ext_coeff - quad / r).abs() >= 1e-6 {
            return Err(format!(
                "disk energy mismatch: {ext_coeff} vs {}",
                quad / r
            ));
        }
    }
    // sector energies against 2d quadrature under the polynomial substitution
    let (nodes, weights) = gauss_legendre_rule(16);
    for _ in 0..4 {
        let k_max = rng.gen_range(1..=8usize);
        let r: f64 = rng.gen_range(0.6..2.0);
        let theta: f64 = rng.gen_range(0.3..6.2);
        let trace = SectorTrace::new(
            r,
            theta,
            (0..=k_max).map(|_| rng.gen_range(-1.0..1.0)).collect(),
        )
        .map_err(|e| e.to_string())?;
        let (ext_coeff, _, _) = sector_extension_energies(&trace);
        let lambda = std::f64::consts::PI / theta;
        let panels = 24;
        let mut quad = 0.0;
        for ip in 0..panels {
            let (p0, p1) = (
                theta * ip as f64 / panels as f64,
                theta * (ip + 1) as f64 / panels as f64,
            );
            let (pm, ph) = (0.5 * (p0 + p1), 0.5 * (p1 - p0));
            for (xp, wp) in nodes.iter().zip(&weights) {
                let phi = pm + ph * xp;
                let mut radial = 0.0;
                for ir in 0..panels {
                    let (s0, s1) = (ir as f64 / panels as f64, (ir + 1) as f64 / panels as f64);
                    let (sm, sh) = (0.5 * (s0 + s1), 0.5 * (s1 - s0));
                    for (xs, ws) in nodes.iter().zip(&weights) {
                        let s: f64 = sm + sh * xs;
                        let rho = r * s.powf(1.0 / lambda);
                        let jac = rho * (r / lambda) * s.powf(1.0 / lambda - 1.0);
                        radial += sh * ws * trace.extension_gradient_sq(rho, phi) * jac;
                    }
                }
                quad += ph * wp * radial;
            }
        }
        if (ext_coeff - quad / r).abs() >= 1e-6 {
            return Err(format!(
                "sector energy mismatch: {ext_coeff} vs {}",
                quad / r
            ));
        }
    }
    // inequality and its exact equality cases over 1e4 draws
    for _ in 0..10_000 {
        let theta = rng.gen_range(0.05..2.0 * std::f64::consts::PI - 1e-9);
        let r = rng.gen_range(0.5..2.0);
        let k_max = rng.gen_range(1..10usize);
        let coeffs: Vec<f64> = (0..=k_max).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let trace = SectorTrace::new(r, theta, coeffs.clone()).map_err(|e| e.to_string())?;
        let (ext, _, bound) = sector_extension_energies(&trace);
        if ext > bound + 1e-12 {
            return Err(format!("inequality violated: {ext} > {bound}"));
        }
        let low = SectorTrace::new(r, theta, coeffs[..2].to_vec()).map_err(|e| e.to_string())?;
        let (ext_low, _, bound_low) = sector_extension_energies(&low);
        if (ext_low - bound_low).abs() >= 1e-12 {
            return Err(format!(
                "k <= 1 equality violated: gap {}",
                (ext_low - bound_low).abs()
            ));
        }
    }
    // slit-disk self-consistency: the crack tip is its own extension
    let trace = sector_trace_from_arc(
        &crack_tip(),
        &DiskProbe::new(Point2::new(0.0, 0.0), 1.0),
        0.0,
        2.0 * std::f64::consts::PI,
        64,
        512,
    )
    .map_err(|e| e.to_string())?;
    let (ext, _, _) = sector_extension_energies(&trace);
    if (ext - 1.0).abs() >= 2e-3 {
        return Err(format!("slit-disk energy {ext} vs 1"));
    }
    Ok(format!("slit-disk energy {ext:.8}"))
}

/// 8. Two-point certification at n = 4096 with the sharp certified bounds,
///    the minimizer location, and the symmetrization check; within 60 s.
fn criterion_8() -> CriterionResult {
    let start = Instant::now();
    let reports = certify_lemma54(4096).map_err(|e| e.to_string())?;
    let targets = [std::f64::consts::SQRT_2, 1.52, 1.26, 2.055];
    for (rep, target) in reports.iter().zip(targets) {
        if !rep.verdict || rep.certified_lower_bound < target {
            return Err(format!(
                "{}: certified {} below {target}",
                rep.claim_id, rep.certified_lower_bound
            ));
        }
    }
    let (v, (a1, a2)) = f_min(std::f64::consts::FRAC_PI_2, 256);
    if (v - std::f64::consts::SQRT_2).abs() >= 1e-6 {
        return Err(format!("f_min(pi/2) = {v}"));
    }
    if (a1 - std::f64::consts::FRAC_PI_4).abs() >= 1e-3
        || (a2 + std::f64::consts::FRAC_PI_4).abs() >= 1e-3
    {
        return Err(format!("argmin ({a1}, {a2}) off (pi/4, -pi/4)"));
    }
    let worst = symmetrization_check(256);
    if worst < -1e-12 {
        return Err(format!("symmetrization violation {worst}"));
    }
    check_budget(start, Duration::from_secs(60), "two-point certification")?;
    Ok(format!(
        "bounds {:.10} {:.6} {:.6} {:.6}, f_min {v:.10}, sym worst {worst:.1e}",
        reports[0].certified_lower_bound,
        reports[1].certified_lower_bound,
        reports[2].certified_lower_bound,
        reports[3].certified_lower_bound
    ))
}

/// 9. Weak equilibrium residual below 1e-6 for 20 random bump fields against
///    the crack-tip and planar-interface models.
fn criterion_9() -> CriterionResult {
    let spec = QuadratureSpec::default();
    let models = [crack_tip(), interface()];
    let mut rng = ChaCha8Rng::seed_from_u64(5024);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let bump = BumpField::new(
            Point2::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5)),
            rng.gen_range(0.2..0.7),
            UnitVector::from_angle(rng.gen_range(0.0..6.28)),
            1.0,
        );
        for model in &models {
            let res = equilibrium_residual(model, &bump, &spec).map_err(|e| e.to_string())?;
            worst = worst.max(res.abs());
            if res.abs() >= 1e-6 {
                return Err(format!(
                    "bump ({}, {}; {}): residual {res} on {model:?}",
                    bump.center.x, bump.center.y, bump.radius
                ));
            }
        }
    }
    Ok(format!("max |residual| {worst:.2e}"))
}

/// 10. Byte-identical outputs for repeated CLI runs with identical configs.
fn criterion_10() -> CriterionResult {
    let bin = env!("CARGO_BIN_EXE_mumshah");
    let dir = std::env::temp_dir().join("mumshah-acceptance");
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let tip = r#"{"kind":"crack_tip","tip":[0,0],"axis_angle":0}"#;
    let iface =
        r#"{"kind":"planar_interface","point":[0,0],"normal":[0,1],"alpha":1.0,"beta":0.0}"#;
    let runs: Vec<(&str, Vec<String>)> = vec![
        (
            "scan",
            vec![
                "scan".into(),
                "--model".into(),
                tip.into(),
                "--center".into(),
                "1,0".into(),
                "--r-min".into(),
                "0.05".into(),
                "--r-max".into(),
                "50".into(),
                "--r-steps".into(),
                "40".into(),
            ],
        ),
        (
            "dlms",
            vec![
                "dlms".into(),
                "--model".into(),
                tip.into(),
                "--center".into(),
                "0.3,0.2".into(),
                "--r-steps".into(),
                "16".into(),
                "--r-max".into(),
                "3".into(),
                "--format".into(),
                "json".into(),
            ],
        ),
        (
            "prop31",
            vec![
                "prop31".into(),
                "--model".into(),
                iface.into(),
                "--r-steps".into(),
                "8".into(),
                "--r-max".into(),
                "2".into(),
            ],
        ),
        (
            "slice",
            vec![
                "slice".into(),
                "--model".into(),
                iface.into(),
                "--r-steps".into(),
                "16".into(),
                "--r-max".into(),
                "5".into(),
            ],
        ),
        (
            "sharpness",
            vec![
                "sharpness".into(),
                "--delta-steps".into(),
                "4".into(),
                "--grid".into(),
                "linear".into(),
            ],
        ),
        (
            "competitor",
            vec![
                "competitor".into(),
                "--model".into(),
                iface.into(),
                "--radius".into(),
                "1".into(),
                "--fourier-modes".into(),
                "16".into(),
            ],
        ),
        (
            "twopoint",
            vec![
                "twopoint".into(),
                "--cert-n".into(),
                "1024".into(),
                "--landscape-n".into(),
                "8".into(),
                "--format".into(),
                "json".into(),
            ],
        ),
        (
            "equilibrium",
            vec![
                "equilibrium".into(),
                "--model".into(),
                tip.into(),
                "--bumps".into(),
                "3".into(),
                "--seed".into(),
                "7".into(),
            ],
        ),
    ];
    for (name, args) in &runs {
        let mut outputs = Vec::new();
        for pass in 0..2 {
            let path = dir.join(format!("{name}-{pass}.out"));
            let status = std::process::Command::new(bin)
                .args(args)
                .arg("--out")
                .arg(&path)
                .status()
                .map_err(|e| e.to_string())?;
            if status.code() == Some(2) || status.code() == Some(3) {
                return Err(format!("{name}: unexpected exit {:?}", status.code()));
            }
            outputs.push(std::fs::read(&path).map_err(|e| e.to_string())?);
        }
        if outputs[0] != outputs[1] {
            return Err(format!("{name}: outputs differ between identical runs"));
        }
    }
    Ok(format!("{} commands byte-identical", runs.len()))
}

#[test]
fn acceptance_suite() {
    let criteria: Vec<(&str, fn() -> CriterionResult)> = vec![
        ("1 crack-tip constants", criterion_1),
        ("2 entropy monotonicity", criterion_2),
        ("3 threshold sharpness", criterion_3),
        ("4 balance identity", criterion_4),
        ("5 directional circle bound", criterion_5),
        ("6 density lower bound", criterion_6),
        ("7 competitor identities", criterion_7),
        ("8 two-point certification", criterion_8),
        ("9 equilibrium equation", criterion_9),
        ("10 deterministic output", criterion_10),
    ];
    let mut failures = Vec::new();
    for (name, run) in criteria {
        let start = Instant::now();
        match run() {
            Ok(detail) => {
                println!("ACCEPTANCE {name}: PASS [{:.2?}] ({detail})", start.elapsed());
            }
            Err(msg) => {
                println!("ACCEPTANCE {name}: FAIL [{:.2?}] ({msg})", start.elapsed());
                failures.push(format!("{name}: {msg}"));
            }
        }
    }
    assert!(failures.is_empty(), "failed criteria:\n{}", failures.join("\n"));
}
