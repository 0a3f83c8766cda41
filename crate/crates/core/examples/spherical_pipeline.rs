//! Sphere test on a prescribed-curvature curve, then the Bertrand curve built from a circle.

use std::f64::consts::FRAC_PI_4;

use bertrand::frenet::{frenet_apparatus, integrate_frenet_ode, InitialFrame};
use bertrand::spherical::{bertrand_from_spherical, donor_duality_check, spherical_test};
use bertrand::{build_curve, CurveSpec};

fn main() {
    let on_sphere = integrate_frenet_ode(
        |s| 1.0 / (2.0 * (0.5 * s + 0.3).cos()),
        |_| 0.5,
        InitialFrame::default(),
        2.0,
    )
    .unwrap();
    let fit = spherical_test(&frenet_apparatus(&on_sphere).unwrap(), 1e-6);
    println!(
        "sphere fit: accepted {}, R = {:.8}, theta0 = {:.8}, centre ({:.4}, {:.4}, {:.4})",
        fit.accepted, fit.radius, fit.theta0, fit.center.x, fit.center.y, fit.center.z
    );

    let circle = build_curve(&CurveSpec::circle(1.0)).unwrap();
    let (k, outcome) = bertrand_from_spherical(&circle, FRAC_PI_4).unwrap();
    let d = frenet_apparatus(&k).unwrap();
    println!(
        "from circle: kappa = {:.8}, tau = {:.8}",
        d.kappa[0], d.tau[0]
    );
    match outcome {
        Ok(fit) => println!(
            "{} fit: lambda = {:.6}, mu = {:.6}, residual {:.2e}",
            fit.kind, fit.lambda, fit.mu, fit.residual
        ),
        Err(r) => println!(
            "no fit: residuals {:.3} / {:.3}",
            r[0].residual, r[1].residual
        ),
    }
    let dual = donor_duality_check(&circle, &k, FRAC_PI_4).unwrap();
    println!(
        "duality: tangent {:.2e}, reconstruction {:.2e}, epsilon {}",
        dual.tangent_residual, dual.reconstruction_residual, dual.epsilon
    );
}
