//! Integral curves of frame fields, the principal donor, and curvature transfer.

use bertrand::direction::{
    bertrand_transfer_check, donor_curvatures, integral_curve, principal_donor_clipped, FrameField,
};
use bertrand::frenet::frenet_apparatus;
use bertrand::{build_curve, CurveSpec};

fn main() {
    let helix = build_curve(&CurveSpec::helix(2.0, 1.0)).unwrap();
    for (name, field) in [
        ("normal", FrameField::normal()),
        ("binormal", FrameField::binormal()),
        ("0.6 T + 0.8 B", FrameField::constant(0.6, 0.0, 0.8)),
    ] {
        let d = frenet_apparatus(&integral_curve(&helix, &field).unwrap()).unwrap();
        println!(
            "{name:<14} kappa = {:.6}  tau = {:+.6}",
            d.kappa[0], d.tau[0]
        );
    }

    // cos of the torsion integral first vanishes at s = 5 pi, inside [0, 20]
    let long = build_curve(&CurveSpec::helix(2.0, 1.0).with_domain(0.0, 20.0)).unwrap();
    let donor = principal_donor_clipped(&long).unwrap();
    println!(
        "donor built on [{:.4}, {:.4}], crossings {:?}",
        donor.domain.0, donor.domain.1, donor.crossings
    );
    let base = long.restrict(donor.domain.0, donor.domain.1).unwrap();
    let measured = frenet_apparatus(&donor.curve).unwrap();
    let (kappa, tau) = donor_curvatures(&base, &frenet_apparatus(&base).unwrap()).unwrap();
    // torsion is ill-conditioned where the donor curvature runs out at the clip
    let err = (0..measured.len())
        .filter(|&i| kappa[i] > 1e-2)
        .map(|i| {
            (measured.kappa[i] - kappa[i])
                .abs()
                .max((measured.tau[i] - tau[i]).abs())
        })
        .fold(0.0, f64::max);
    println!("donor curvature error where kappa > 0.01: {err:.2e}");

    let t = bertrand_transfer_check(&helix, 0.6, 0.8).unwrap();
    println!(
        "transfer: (lambda, mu) = ({:.4}, {:.4}) -> ({:.4}, {:.4}), residual {:.2e}",
        t.lambda, t.mu, t.lambda_bar, t.mu_bar, t.predicted_residual
    );
}
