//! Coefficient branches of `u tan(theta) - w = f` and the mates they build.

use std::f64::consts::FRAC_PI_6;

use bertrand::bertrand::{f_bertrand_coefficients, f_bertrand_mates, BranchOutcome};
use bertrand::{build_curve, CurveSpec};

fn main() {
    let theta = FRAC_PI_6;
    for f in [0.0, 0.5, 1.0, theta.tan()] {
        let c = f_bertrand_coefficients(f, theta).unwrap();
        print!("f = {f:.4}: u+ = {:+.6}, u- = {:+.6};", c.u_plus, c.u_minus);
        for b in c.valid() {
            print!("  {} (u, w) = ({:+.4}, {:+.4})", b.id.label(), b.u, b.w);
        }
        println!();
    }

    let helix = build_curve(&CurveSpec::helix(2.0, 1.0)).unwrap();
    for m in f_bertrand_mates(&helix, 1.0, theta).unwrap() {
        match m.outcome {
            BranchOutcome::Mate { report, .. } => println!(
                "branch {}: mate accepted {} (theta {:.6}, collinearity {:.12})",
                m.id.label(),
                report.accepted,
                report.theta_mean,
                report.normal_collinearity
            ),
            BranchOutcome::Omitted { reason } => {
                println!("branch {}: omitted, {reason}", m.id.label())
            }
        }
    }
}
