//! Independent oracles for the singular quadrature: Monte Carlo with polar
//! importance sampling, the Fubini consistency between disk and circle
//! integrals, and the closed-form vs quadrature cross-checks.

use mumshah::diagnostics::{dirichlet_energy, dirichlet_energy_quadrature};
use mumshah::geometry::{DiskProbe, FieldModel, Point2};
use mumshah::quadrature::{integrate_disk, integrate_interval, QuadratureSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn crack_tip() -> FieldModel {
    FieldModel::crack_tip(Point2::new(0.0, 0.0), 0.0)
}

/// Polar importance sampling about the tip: with `x = rho e(phi)` sampled
/// uniformly in `[0, 1 + d] x [0, 2 pi)`, the integrand times the area
/// element collapses to `(1 + d) * indicator(x in B_1(d e1))`.
fn mc_offset_dirichlet(delta: f64, samples: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0usize;
    for _ in 0..samples {
        let rho = rng.gen_range(0.0..1.0 + delta);
        let phi = rng.gen_range(0.0..2.0 * std::f64::consts::PI);
        let (x, y) = (rho * phi.cos(), rho * phi.sin());
        if (x - delta) * (x - delta) + y * y < 1.0 {
            hits += 1;
        }
    }
    (1.0 + delta) * hits as f64 / samples as f64
}

#[test]
fn monte_carlo_validates_offset_disk_quadrature() {
    let model = crack_tip();
    let disk = DiskProbe::new(Point2::new(0.1, 0.0), 1.0);
    let (quad, _) = integrate_disk(
        |p| model.gradient_sq_ae(p),
        &disk,
        Some(Point2::new(0.0, 0.0)),
        &QuadratureSpec::default(),
    )
    .unwrap();
    let mc = mc_offset_dirichlet(0.1, 10_000_000, 42);
    // 1e7 samples give sigma ~ 1e-4; 5e-4 pins three significant digits
    assert!(
        (quad - mc).abs() < 5e-4,
        "quadrature {quad} vs Monte Carlo {mc}"
    );
    // elliptic closed form, frozen: (2/pi) E(0.1) = 0.9974952929
    assert!((quad - 0.9974952929).abs() < 1e-8);
}

#[test]
fn fubini_disk_equals_radial_circle_integral() {
    // tip outside the disk keeps the circle integrals bounded at every radius
    let model = crack_tip();
    let x0 = Point2::new(1.5, 0.3);
    let r_max = 0.8;
    let spec = QuadratureSpec::default();
    let (disk_val, _) = integrate_disk(
        |p| model.gradient_sq_ae(p),
        &DiskProbe::new(x0, r_max),
        Some(Point2::new(0.0, 0.0)),
        &spec,
    )
    .unwrap();
    let radial = integrate_interval(
        |rho: f64| {
            let part = mumshah::quadrature::ArcPartition::new(DiskProbe::new(x0, rho), vec![]);
            let (v, _) = mumshah::quadrature::integrate_circle(
                |phi| {
                    model.gradient_sq_ae(DiskProbe::new(x0, rho).boundary_point(phi))
                },
                &part,
                &spec,
            )
            .unwrap();
            v
        },
        1e-6,
        r_max,
        24,
        16,
    );
    assert!(
        (disk_val - radial).abs() < 1e-8,
        "disk {disk_val} vs radial {radial}"
    );
}

#[test]
fn closed_form_matches_quadrature_route() {
    let model = crack_tip();
    let spec = QuadratureSpec::default();
    // tip inside, tip centered, and tip outside probes
    let probes = [
        (0.0, 0.0, 1.0),
        (0.3, 0.2, 1.0),
        (0.1, 0.0, 0.5),
        (1.5, 0.3, 0.8),
        (0.0, 2.0, 1.2),
        (-0.7, 0.4, 2.5),
    ];
    for (x, y, r) in probes {
        let disk = DiskProbe::new(Point2::new(x, y), r);
        let closed = dirichlet_energy(&model, &disk, &spec).unwrap();
        let quad = dirichlet_energy_quadrature(&model, &disk, &spec).unwrap();
        assert!(
            (closed - quad).abs() < 1e-7,
            "probe ({x}, {y}, {r}): closed {closed} vs quadrature {quad}"
        );
    }
}

#[test]
fn harmonic_closed_form_matches_quadrature() {
    let model = FieldModel::smooth_harmonic(
        Point2::new(0.2, -0.1),
        vec![[1.0, 0.0], [0.5, -0.3], [0.0, 0.25], [0.1, 0.0]],
    );
    let spec = QuadratureSpec::default();
    // centered: coefficient formula; offset: plain quadrature
    let centered = DiskProbe::new(Point2::new(0.2, -0.1), 1.3);
    let closed = dirichlet_energy(&model, &centered, &spec).unwrap();
    let quad = dirichlet_energy_quadrature(&model, &centered, &spec).unwrap();
    assert!((closed - quad).abs() < 1e-8);
}

#[test]
fn panel_doubling_bounds_error_on_catalog_integrands() {
    let model = crack_tip();
    let spec = QuadratureSpec::default();
    let fine = QuadratureSpec {
        panels_per_arc: 32,
        ..spec
    };
    for (x, y, r) in [(0.4, 0.25, 1.0), (1.2, -0.3, 0.7)] {
        let disk = DiskProbe::new(Point2::new(x, y), r);
        let part = mumshah::quadrature::ArcPartition::new(disk, vec![0.0]);
        let f = |phi: f64| model.gradient_sq_ae(disk.boundary_point(phi));
        let (v, err) = mumshah::quadrature::integrate_circle(f, &part, &spec).unwrap();
        let (v_fine, _) = mumshah::quadrature::integrate_circle(f, &part, &fine).unwrap();
        assert!((v - v_fine).abs() <= err.max(1e-12));
    }
}
