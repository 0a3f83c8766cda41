//! Curvature, torsion and curve class for a few standard curves.

use bertrand::frenet::{classify, frenet_apparatus, integrate_frenet_ode, InitialFrame};
use bertrand::{build_curve, Curve, CurveSpec};

fn summarize(name: &str, curve: &Curve) {
    let d = frenet_apparatus(curve).expect("regular curve with curvature");
    let class = classify(&d, d.default_tolerance());
    let mid = d.len() / 2;
    println!(
        "{name:<16} kappa(mid) = {:.6}  tau(mid) = {:.6}  planar {}  general helix {}  salkowski {}  anti-salkowski {}",
        d.kappa[mid], d.tau[mid], class.is_planar, class.is_general_helix, class.is_salkowski, class.is_anti_salkowski
    );
}

fn main() {
    summarize(
        "helix(1,1)",
        &build_curve(&CurveSpec::helix(1.0, 1.0)).unwrap(),
    );
    summarize(
        "helix(2,1)",
        &build_curve(&CurveSpec::helix(2.0, 1.0)).unwrap(),
    );
    summarize("circle(2)", &build_curve(&CurveSpec::circle(2.0)).unwrap());

    let salkowski = integrate_frenet_ode(|_| 1.0, |s| s, InitialFrame::default(), 4.0).unwrap();
    summarize("kappa=1, tau=s", &salkowski);
    let anti = integrate_frenet_ode(|s| s + 2.0, |_| 1.0, InitialFrame::default(), 4.0).unwrap();
    summarize("kappa=s+2, tau=1", &anti);
}
