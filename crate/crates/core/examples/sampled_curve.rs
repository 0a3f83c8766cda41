//! Analysis of a curve known only through clean samples of a helix.

use bertrand::bertrand::detect_any;
use bertrand::frenet::frenet_apparatus;
use bertrand::{build_curve, CurveSpec, Vec3};

fn main() {
    let points: Vec<Vec3> = (0..400)
        .map(|i| {
            let t = i as f64 * 0.025;
            Vec3::new(2.0 * t.cos(), 2.0 * t.sin(), t)
        })
        .collect();
    let curve = build_curve(&CurveSpec::sampled(points)).unwrap();
    println!(
        "length {:.6} (exact {:.6})",
        curve.length(),
        5f64.sqrt() * 399.0 * 0.025
    );

    let d = frenet_apparatus(&curve).unwrap();
    let (lo, hi) = (d.len() / 10, 9 * d.len() / 10);
    let max_err = (lo..hi)
        .map(|i| (d.kappa[i] - 0.4).abs().max((d.tau[i] - 0.2).abs()))
        .fold(0.0, f64::max);
    println!("interior curvature/torsion error vs (0.4, 0.2): {max_err:.2e}");

    match detect_any(&d, d.default_tolerance()) {
        Ok(fit) => println!(
            "{} fit: lambda = {:.5}, mu = {:.5}, residual {:.2e}",
            fit.kind, fit.lambda, fit.mu, fit.residual
        ),
        Err(r) => println!(
            "not Bertrand: residuals {:.2e} / {:.2e}",
            r[0].residual, r[1].residual
        ),
    }
}
