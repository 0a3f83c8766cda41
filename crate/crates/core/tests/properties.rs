use std::f64::consts::PI;

use bertrand::bertrand::{
    detect_bertrand, f_bertrand_coefficients, v_bertrand_mate, BertrandKind, BranchId,
};
use bertrand::direction::{inverse_transform, transform_curvatures, FrameField};
use bertrand::frenet::{frenet_apparatus, integrate_frenet_ode, InitialFrame};
use bertrand::spherical::spherical_test;
use bertrand::surface::{bertrand_surface, branch_coefficients, to_mesh, SurfaceParams};
use bertrand::{build_curve, CurveSpec, Vec3};
use nalgebra::{Rotation3, Unit};
use proptest::prelude::*;

fn helix_spec(a: f64, b: f64) -> CurveSpec {
    CurveSpec::helix(a, b)
        .with_domain(0.0, 6.0)
        .with_samples(128)
}

fn rotation() -> impl Strategy<Value = Rotation3<f64>> {
    (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64, -PI..PI)
        .prop_filter("axis", |(x, y, z, _)| x * x + y * y + z * z > 0.01)
        .prop_map(|(x, y, z, angle)| {
            Rotation3::from_axis_angle(&Unit::new_normalize(Vec3::new(x, y, z)), angle)
        })
}

fn unit_pair() -> impl Strategy<Value = (f64, f64)> {
    (-PI..PI).prop_map(|psi: f64| (psi.cos(), psi.sin()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn frenet_frame_is_orthonormal_and_right_handed(a in 0.3..3.0f64, b in -3.0..3.0f64) {
        let d = frenet_apparatus(&build_curve(&helix_spec(a, b)).unwrap()).unwrap();
        prop_assert!(d.orthonormality_defect() < 1e-10);
        prop_assert!(d.handedness_defect() < 1e-10);
    }

    #[test]
    fn helix_curvatures_match_closed_form(a in 0.3..3.0f64, b in -3.0..3.0f64) {
        let d = frenet_apparatus(&build_curve(&helix_spec(a, b)).unwrap()).unwrap();
        let c2 = a * a + b * b;
        for i in 0..d.len() {
            prop_assert!((d.kappa[i] - a / c2).abs() < 1e-8);
            prop_assert!((d.tau[i] - b / c2).abs() < 1e-8);
        }
    }

    #[test]
    fn curvatures_survive_rigid_motions(
        a in 0.5..2.0f64,
        b in -2.0..2.0f64,
        rot in rotation(),
        shift in prop::array::uniform3(-5.0..5.0f64),
    ) {
        let curve = build_curve(&helix_spec(a, b)).unwrap();
        let moved = curve.transformed(rot, Vec3::from(shift));
        let d0 = frenet_apparatus(&curve).unwrap();
        let d1 = frenet_apparatus(&moved).unwrap();
        for i in 0..d0.len() {
            prop_assert!((d0.kappa[i] - d1.kappa[i]).abs() < 1e-8);
            prop_assert!((d0.tau[i] - d1.tau[i]).abs() < 1e-8);
        }
    }

    #[test]
    fn reported_fit_residual_is_the_measured_one(a in 0.3..3.0f64, b in 0.1..3.0f64) {
        let d = frenet_apparatus(&build_curve(&helix_spec(a, b)).unwrap()).unwrap();
        let fit = detect_bertrand(&d, BertrandKind::Bertrand, 1e-6).unwrap();
        let measured = d.kappa.iter().zip(&d.tau)
            .map(|(k, t)| (fit.lambda * k + fit.mu * t - 1.0).abs())
            .fold(0.0, f64::max);
        prop_assert!((measured - fit.residual).abs() < 1e-12);
        prop_assert!(fit.residual < 1e-6);
    }

    #[test]
    fn both_kinds_fit_a_helix_with_opposite_coefficients(a in 0.3..3.0f64, b in 0.1..3.0f64) {
        let d = frenet_apparatus(&build_curve(&helix_spec(a, b)).unwrap()).unwrap();
        let plain = detect_bertrand(&d, BertrandKind::Bertrand, 1e-6).unwrap();
        let flipped = detect_bertrand(&d, BertrandKind::BBertrand, 1e-6).unwrap();
        prop_assert!((plain.lambda + flipped.lambda).abs() < 1e-12);
        prop_assert!((plain.mu + flipped.mu).abs() < 1e-12);
        prop_assert!((plain.residual - flipped.residual).abs() < 1e-12);
    }

    #[test]
    fn valid_branches_satisfy_both_identities(theta in -1.5..1.5f64, frac in -1.0..1.0f64) {
        let f = frac * (1.0 + theta.tan().powi(2)).sqrt();
        let c = f_bertrand_coefficients(f, theta).unwrap();
        prop_assert!(c.valid().count() >= 2);
        for b in c.valid() {
            prop_assert!((b.u * b.u + b.w * b.w - 1.0).abs() < 1e-8);
            prop_assert!((b.u * theta.tan() - b.w - f).abs() < 1e-8);
        }
    }

    #[test]
    fn curvature_transform_round_trips(
        kappa in 0.01..10.0f64,
        tau in -10.0..10.0f64,
        (u, w) in unit_pair(),
    ) {
        let tc = transform_curvatures(&[kappa], &[tau], u, w).unwrap();
        prop_assert!((tc.kappa_v[0].hypot(tc.tau_v[0]) - kappa.hypot(tau)).abs() < 1e-12);
        let (k, t) = inverse_transform(&tc, u, w).unwrap();
        prop_assert!((k[0] - kappa).abs() < 1e-12);
        prop_assert!((t[0] - tau).abs() < 1e-12);
    }

    #[test]
    fn surface_coefficients_are_unit(theta in -1.4..1.4f64, frac in -0.999..0.999f64, k in 0usize..4) {
        let t = frac * (1.0 + theta.tan().powi(2)).sqrt();
        let (u, w) = branch_coefficients(BranchId::ALL[k], t, theta).unwrap();
        prop_assert!((u * u + w * w - 1.0).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn sphere_fit_ignores_rigid_motions(rot in rotation(), shift in prop::array::uniform3(-3.0..3.0f64)) {
        let c = integrate_frenet_ode(
            |s| 1.0 / (2.0 * (0.5 * s + 0.3).cos()),
            |_| 0.5,
            InitialFrame::default(),
            2.0,
        ).unwrap();
        let before = spherical_test(&frenet_apparatus(&c).unwrap(), 1e-6);
        let moved = c.transformed(rot, Vec3::from(shift));
        let after = spherical_test(&frenet_apparatus(&moved).unwrap(), 1e-6);
        prop_assert!(before.accepted && after.accepted);
        prop_assert!((before.radius - after.radius).abs() < 1e-8);
        prop_assert!((before.theta0 - after.theta0).abs() < 1e-8);
        let center = rot * before.center + Vec3::from(shift);
        prop_assert!((center - after.center).norm() < 1e-6);
    }

    #[test]
    fn constructed_mates_keep_a_constant_angle((u, w) in unit_pair(), lambda in 0.3..3.0f64) {
        let curve = build_curve(&helix_spec(2.0, 1.0)).unwrap();
        let (along_t, along_b) = (u - lambda * 0.4, w + lambda * 0.2);
        prop_assume!(along_t.hypot(along_b) > 0.05 && along_t.abs() > 1e-3);
        let theta = (along_b / along_t).atan();
        let (_, report) = v_bertrand_mate(&curve, &FrameField::constant(u, 0.0, w), lambda, theta).unwrap();
        prop_assert!(report.accepted);
        prop_assert!(report.theta_deviation < 1e-5);
        prop_assert!(report.normal_collinearity > 1.0 - 1e-6);
    }

    #[test]
    fn mesh_has_two_triangles_per_cell(nt in 2usize..12, ns in 2usize..40, k in 0usize..4) {
        let curve = build_curve(&helix_spec(1.0, 1.0)).unwrap();
        let fit = detect_bertrand(&frenet_apparatus(&curve).unwrap(), BertrandKind::Bertrand, 1e-6).unwrap();
        let grid = bertrand_surface(&curve, &fit, &SurfaceParams::new(BranchId::ALL[k], nt, ns)).unwrap();
        let mesh = to_mesh(&grid).unwrap();
        prop_assert_eq!(mesh.vertices.len(), nt * ns);
        prop_assert_eq!(mesh.triangles.len(), 2 * (nt - 1) * (ns - 1));
    }
}
