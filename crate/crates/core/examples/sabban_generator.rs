//! Bertrand curves generated from spherical curves through their Sabban frame.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

use bertrand::spherical::sabban_bertrand;
use bertrand::{build_curve, CurveSpec};

fn main() {
    for polar in [FRAC_PI_2, FRAC_PI_3] {
        let c = build_curve(&CurveSpec::sphere_circle(polar)).unwrap();
        for (a, theta) in [
            (1.0, PI / 4.0),
            (2.0, PI / 5.0),
            (0.5, 3.0 * PI / 4.0),
            (1.0, FRAC_PI_2),
        ] {
            let (_, fit) = sabban_bertrand(&c, a, theta).unwrap();
            match fit {
                Ok(f) => println!(
                    "polar {polar:.4}, a = {a}, theta = {theta:.4}: {} (lambda {:+.5}, mu {:+.5}) residual {:.1e}{}",
                    f.kind,
                    f.lambda,
                    f.mu,
                    f.residual,
                    if f.planar_special { ", planar" } else { "" }
                ),
                Err(r) => println!("polar {polar:.4}, a = {a}, theta = {theta:.4}: rejected {:.3}", r[0].residual),
            }
        }
    }
}
