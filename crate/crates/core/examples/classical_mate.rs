//! The tangent-field mate of helix(1,1) at offset 1 is the helix axis.

use std::f64::consts::FRAC_PI_4;

use bertrand::bertrand::{detect_bertrand, v_bertrand_mate, BertrandKind};
use bertrand::direction::FrameField;
use bertrand::frenet::frenet_apparatus;
use bertrand::{build_curve, CurveSpec};

fn main() {
    let helix = build_curve(&CurveSpec::helix(1.0, 1.0)).unwrap();
    let fit = detect_bertrand(
        &frenet_apparatus(&helix).unwrap(),
        BertrandKind::Bertrand,
        1e-8,
    )
    .unwrap();
    println!(
        "lambda kappa + mu tau = 1 with lambda = {:.6}, mu = {:.6}",
        fit.lambda, fit.mu
    );

    let (mate, report) = v_bertrand_mate(&helix, &FrameField::tangent(), 1.0, FRAC_PI_4).unwrap();
    println!(
        "accepted {}  |N.Nbar| >= {:.12}  theta = {:.6}",
        report.accepted, report.normal_collinearity, report.theta_mean
    );
    for s in [0.0, 2.5, 5.0, 7.5, 10.0] {
        let p = mate.position(s).unwrap();
        println!(
            "s = {s:>4}: ({:+.9}, {:+.9}, {:.9})   s/sqrt2 = {:.9}",
            p.x,
            p.y,
            p.z,
            s / 2f64.sqrt()
        );
    }
}
