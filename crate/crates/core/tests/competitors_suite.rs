//! Cross-checks of the coefficient-form competitor energies against direct
//! two-dimensional quadrature and against the circle quadrature of the
//! boundary tangential energy.

use mumshah::competitors::{
    disk_extension_energies, disk_trace, sector_extension_energies, FourierTrace, SectorTrace,
};
use mumshah::geometry::{DiskProbe, FieldModel, Point2};
use mumshah::quadrature::{
    gauss_legendre_rule, integrate_circle, integrate_disk, ArcPartition, QuadratureSpec,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn parseval_boundary_energy_matches_circle_quadrature() {
    let model = FieldModel::smooth_harmonic(
        Point2::new(0.0, 0.0),
        vec![[0.3, 0.0], [1.0, -0.4], [0.2, 0.5], [0.0, -0.1], [0.05, 0.02]],
    );
    let disk = DiskProbe::new(Point2::new(0.0, 0.0), 1.3);
    let trace = disk_trace(&model, &disk, 32, 256).unwrap();
    let (_, tau_coeff) = disk_extension_energies(&trace);
    let part = ArcPartition::new(disk, vec![]);
    let (tau_quad, _) = integrate_circle(
        |phi| {
            let (gx, gy) = model.gradient_ae(disk.boundary_point(phi));
            let (s, c) = phi.sin_cos();
            let t = -s * gx + c * gy;
            t * t
        },
        &part,
        &QuadratureSpec::default(),
    )
    .unwrap();
    assert!(
        (tau_coeff - tau_quad).abs() < 1e-8,
        "coefficients {tau_coeff} vs quadrature {tau_quad}"
    );
}

#[test]
fn disk_extension_energy_matches_2d_quadrature() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..6 {
        let k_max = rng.gen_range(1..=8usize);
        let r = rng.gen_range(0.6..2.0);
        let trace = FourierTrace {
            r,
            a: (0..=k_max).map(|_| rng.gen_range(-1.0..1.0)).collect(),
            b: (0..k_max).map(|_| rng.gen_range(-1.0..1.0)).collect(),
        };
        let (ext_coeff, _) = disk_extension_energies(&trace);
        let disk = DiskProbe::new(Point2::new(0.0, 0.0), r);
        let (quad, _) = integrate_disk(
            |p: Point2| {
                let rho = p.x.hypot(p.y);
                let phi = p.y.atan2(p.x);
                trace.extension_gradient_sq(rho, phi)
            },
            &disk,
            None,
            &QuadratureSpec::default(),
        )
        .unwrap();
        assert!(
            (ext_coeff - quad / r).abs() < 1e-6,
            "K {k_max} r {r}: coefficients {ext_coeff} vs quadrature {}",
            quad / r
        );
    }
}

#[test]
fn sector_extension_energy_matches_2d_quadrature() {
    // radial substitution s = (rho/r)^{pi/theta} turns the integrand into a
    // polynomial, which also covers opening angles above pi
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    let (nodes, weights) = gauss_legendre_rule(16);
    for _ in 0..6 {
        let k_max = rng.gen_range(1..=8usize);
        let r: f64 = rng.gen_range(0.6..2.0);
        let theta: f64 = rng.gen_range(0.3..6.2);
        let trace = SectorTrace::new(
            r,
            theta,
            (0..=k_max).map(|_| rng.gen_range(-1.0..1.0)).collect(),
        )
        .unwrap();
        let (ext_coeff, _, _) = sector_extension_energies(&trace);
        let lambda = std::f64::consts::PI / theta;
        let mut quad = 0.0;
        let panels = 24;
        for pi_idx in 0..panels {
            let (p0, p1) = (
                theta * pi_idx as f64 / panels as f64,
                theta * (pi_idx + 1) as f64 / panels as f64,
            );
            let (pm, ph) = (0.5 * (p0 + p1), 0.5 * (p1 - p0));
            for (xp, wp) in nodes.iter().zip(&weights) {
                let phi = pm + ph * xp;
                let mut radial = 0.0;
                for pr in 0..panels {
                    let (s0, s1) = (pr as f64 / panels as f64, (pr + 1) as f64 / panels as f64);
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
        assert!(
            (ext_coeff - quad / r).abs() < 1e-6,
            "K {k_max} r {r} theta {theta}: coefficients {ext_coeff} vs quadrature {}",
            quad / r
        );
    }
}

#[test]
fn disk_equality_cases() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..10_000 {
        let r = rng.gen_range(0.5..2.0);
        let a1 = rng.gen_range(-1.0..1.0);
        let b1 = rng.gen_range(-1.0..1.0);
        let trace = FourierTrace {
            r,
            a: vec![rng.gen_range(-1.0..1.0), a1],
            b: vec![b1],
        };
        let (ext, tau) = disk_extension_energies(&trace);
        assert!((ext - tau).abs() < 1e-12, "modes k <= 1 must saturate");
    }
}
