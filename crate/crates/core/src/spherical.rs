//! Spherical curves: testing `1/kappa = R cos(integral of tau + theta0)`, the
//! Bertrand curve built from a spherical curve, and the Sabban-frame generator.

use std::f64::consts::TAU;

use nalgebra::{Matrix2, Vector2};

use crate::bertrand::{detect_any, BertrandFit, FitRejection};
use crate::curve::{Curve, Vec3};
use crate::direction::{frames_with_midpoints, torsion_integral};
use crate::error::{Error, Result};
use crate::frenet::{frenet_apparatus, FrenetData};
use crate::interp::UniformSamples;
use crate::quadrature::{cumulative_simpson_values, gauss_kronrod15, midpoints};

/// Largest allowed `| |gamma| - 1 |` for curves fed to the unit-sphere constructions.
pub const UNIT_SPHERE_TOL: f64 = 1e-6;
/// Largest allowed departure of the constructed curve from unit speed.
pub const SPEED_DRIFT_TOL: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq)]
pub struct SphereFit {
    pub radius: f64,
    /// Phase in `[0, 2 pi)`.
    pub theta0: f64,
    pub center: Vec3,
    /// Sup-norm of `1/kappa - R cos(Theta + theta0)` over the grid.
    pub residual: f64,
    /// `R0 / R = cos(theta0)` where `R0` is the osculating radius at `s_min`.
    pub osculating_ratio: f64,
    /// Zero torsion: `R` and `theta0` cannot be separated; `theta0 = 0`, `R = 1/kappa`.
    pub radius_degenerate: bool,
    pub accepted: bool,
}

/// Cumulative integral from `s[0]` of values sampled on a uniform grid,
/// integrating the local interpolant cell by cell.
fn cumulative_on_grid(s: &[f64], values: &[f64]) -> Vec<f64> {
    let n = s.len();
    let step = (s[n - 1] - s[0]) / (n - 1) as f64;
    let table = UniformSamples::new(s[0], step, values.to_vec());
    let mut out = Vec::with_capacity(n);
    let mut acc = 0.0;
    out.push(acc);
    for w in s.windows(2) {
        acc += gauss_kronrod15(&|x| table.eval(x, 0), w[0], w[1]).0;
        out.push(acc);
    }
    out
}

/// Tests whether the curve behind `data` lies on a sphere.
///
/// `(A, B)` in `1/kappa = A cos(Theta) - B sin(Theta)` are fitted by least
/// squares over the grid, giving `R = hypot(A, B)` and `theta0 = atan2(B, A)`;
/// the fit is accepted when the pointwise defect stays below `tol`.
pub fn spherical_test(data: &FrenetData, tol: f64) -> SphereFit {
    let rho: Vec<f64> = data.kappa.iter().map(|k| 1.0 / k).collect();
    let tau_arc: Vec<f64> = data
        .tau
        .iter()
        .zip(&data.speed)
        .map(|(t, v)| t * v)
        .collect();
    let theta = cumulative_on_grid(&data.s, &tau_arc);
    let max_tau = data.tau.iter().fold(0.0f64, |m, t| m.max(t.abs()));
    let sup = |f: &dyn Fn(usize) -> f64| (0..rho.len()).fold(0.0f64, |m, i| m.max(f(i).abs()));

    if max_tau < tol {
        let radius = rho.iter().sum::<f64>() / rho.len() as f64;
        let residual = sup(&|i| rho[i] - radius);
        let center = mean((0..rho.len()).map(|i| data.position[i] + data.n[i] * rho[i]));
        return SphereFit {
            radius,
            theta0: 0.0,
            center,
            residual,
            osculating_ratio: 1.0,
            radius_degenerate: true,
            accepted: residual < tol,
        };
    }

    let mut m = Matrix2::zeros();
    let mut r = Vector2::zeros();
    for (t, p) in theta.iter().zip(&rho) {
        let row = Vector2::new(t.cos(), -t.sin());
        m += row * row.transpose();
        r += row * *p;
    }
    let (a, b) = match m.try_inverse() {
        Some(inv) => {
            let x = inv * r;
            (x[0], x[1])
        }
        None => (0.0, 0.0),
    };
    let radius = a.hypot(b);
    let theta0 = b.atan2(a).rem_euclid(TAU);
    let residual = sup(&|i| rho[i] - radius * (theta[i] + theta0).cos());
    let center = mean((0..rho.len()).map(|i| {
        let phase = theta[i] + theta0;
        data.position[i] + data.n[i] * rho[i] - data.b[i] * (radius * phase.sin())
    }));
    SphereFit {
        radius,
        theta0,
        center,
        residual,
        osculating_ratio: theta0.cos(),
        radius_degenerate: false,
        accepted: residual < tol && radius > 0.0,
    }
}

fn mean(points: impl Iterator<Item = Vec3>) -> Vec3 {
    let (sum, n) = points.fold((Vec3::zeros(), 0usize), |(s, n), p| (s + p, n + 1));
    sum / n.max(1) as f64
}

fn check_unit_sphere(curve: &Curve) -> Result<()> {
    let mut worst = 0.0f64;
    for s in curve.grid() {
        worst = worst.max((curve.position(s)?.norm() - 1.0).abs());
    }
    if worst < UNIT_SPHERE_TOL {
        Ok(())
    } else {
        Err(Error::NotOnUnitSphere(worst))
    }
}

/// `S_M(s) = |gamma'| cos(integral of det(gamma, gamma', gamma'') / |gamma'|^2 + theta0)` on the curve's grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SmFactor {
    pub s: Vec<f64>,
    pub values: Vec<f64>,
}

pub fn s_m_factor(curve: &Curve, theta0: f64) -> Result<SmFactor> {
    check_unit_sphere(curve)?;
    let integrand = |t: f64| {
        let j = curve.jet(t).expect("grid inside domain");
        j[0].dot(&j[1].cross(&j[2])) / j[1].norm_squared()
    };
    let s = curve.grid();
    let mut values = Vec::with_capacity(s.len());
    let mut acc = 0.0;
    for (i, &si) in s.iter().enumerate() {
        if i > 0 {
            acc += gauss_kronrod15(&integrand, s[i - 1], si).0;
        }
        values.push(curve.derivative(si, 1)?.norm() * (acc + theta0).cos());
    }
    Ok(SmFactor { s, values })
}

pub type FitOutcome = std::result::Result<BertrandFit, [FitRejection; 2]>;

/// Builds `K` with `K'' = kappa cos(Theta + theta0) T` and
/// `K'(s_min) = -cos(theta0) N + sin(theta0) B`, starting at the origin.
///
/// `K'` equals `-cos(Theta + theta0) N + sin(Theta + theta0) B` along the
/// whole curve, so it is stored in that form. Returns `K` together with the
/// Bertrand fit of its measured curvatures.
pub fn bertrand_from_spherical(curve: &Curve, theta0: f64) -> Result<(Curve, FitOutcome)> {
    let base = curve.reparameterize_arclength()?;
    let phase = torsion_integral(&base)?;
    let nodes = base.grid();
    let (frames, mids, mid_frames) = frames_with_midpoints(&base, &nodes)?;
    let tangent = |s: f64, f: &crate::frenet::FramePoint| {
        let (sn, cs) = (phase.eval(s, 0) + theta0).sin_cos();
        f.b * sn - f.n * cs
    };
    let vel: Vec<Vec3> = nodes
        .iter()
        .zip(&frames)
        .map(|(s, f)| tangent(*s, f))
        .collect();
    let vel_mid: Vec<Vec3> = mids
        .iter()
        .zip(&mid_frames)
        .map(|(s, f)| tangent(*s, f))
        .collect();
    let acc: Vec<Vec3> = nodes
        .iter()
        .zip(&frames)
        .map(|(s, f)| f.t * (f.kappa * (phase.eval(*s, 0) + theta0).cos()))
        .collect();
    let pos = cumulative_simpson_values(&nodes, &vel, &vel_mid, Vec3::zeros());
    let k = Curve::from_uniform_samples(&nodes, pos, Some(vel), Some(acc), true, base.samples());

    let mut drift = 0.0f64;
    for (s, expect) in mids.iter().zip(&vel_mid) {
        let d = k.derivative(*s, 1)?;
        drift = drift.max((d.norm() - 1.0).abs()).max((d - expect).norm());
    }
    if !(drift <= SPEED_DRIFT_TOL) {
        return Err(Error::SpeedDrift(drift));
    }
    let data = frenet_apparatus(&k)?;
    let tol = if base.is_exact() { 1e-6 } else { 1e-3 };
    let fit = detect_any(&data, tol);
    Ok((k, fit))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DualityReport {
    /// Sup-norm of `T_K - (-cos(Theta + theta0) N + sin(Theta + theta0) B)`.
    pub tangent_residual: f64,
    /// Sup-norm of `epsilon * integral of N_K - (M - M(s_min))`.
    pub reconstruction_residual: f64,
    /// Sign of `N_K . T_M` at `s_min`.
    pub epsilon: f64,
}

impl DualityReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.tangent_residual < tol && self.reconstruction_residual < tol
    }
}

/// Checks that `K` is the principal-donor curve of `M`, and that `M` is the
/// principal-direction curve of `K`. `K` must share `M`'s arc-length parameter.
pub fn donor_duality_check(m: &Curve, k: &Curve, theta0: f64) -> Result<DualityReport> {
    let base = m.reparameterize_arclength()?;
    let phase = torsion_integral(&base)?;
    let nodes = base.grid();
    let (m_frames, _, _) = frames_with_midpoints(&base, &nodes)?;
    let (k_frames, mids, k_mid_frames) = frames_with_midpoints(k, &nodes)?;

    let mut tangent_residual = 0.0f64;
    for ((s, mf), kf) in nodes.iter().zip(&m_frames).zip(&k_frames) {
        let (sn, cs) = (phase.eval(*s, 0) + theta0).sin_cos();
        tangent_residual = tangent_residual.max((kf.t - (mf.b * sn - mf.n * cs)).norm());
    }
    let epsilon = k_frames[0].n.dot(&m_frames[0].t).signum();
    let n_nodes: Vec<Vec3> = k_frames.iter().map(|f| f.n * epsilon).collect();
    let n_mids: Vec<Vec3> = k_mid_frames.iter().map(|f| f.n * epsilon).collect();
    let rebuilt = cumulative_simpson_values(&nodes, &n_nodes, &n_mids, Vec3::zeros());
    let origin = m_frames[0].position;
    let reconstruction_residual = rebuilt
        .iter()
        .zip(&m_frames)
        .map(|(r, f)| (r - (f.position - origin)).norm())
        .fold(0.0, f64::max);
    debug_assert_eq!(mids.len() + 1, nodes.len());
    Ok(DualityReport {
        tangent_residual,
        reconstruction_residual,
        epsilon,
    })
}

/// The Sabban frame `{gamma, T, Y = gamma x T}` and geodesic curvature
/// `kappa_g = det(gamma, T, T')` of a unit-speed curve on the unit sphere.
#[derive(Debug, Clone, Default)]
pub struct SabbanFrame {
    pub s: Vec<f64>,
    pub gamma: Vec<Vec3>,
    pub t: Vec<Vec3>,
    pub y: Vec<Vec3>,
    pub kappa_g: Vec<f64>,
}

pub fn sabban_frame(curve: &Curve) -> Result<SabbanFrame> {
    check_unit_sphere(curve)?;
    let base = curve.reparameterize_arclength()?;
    let mut out = SabbanFrame::default();
    for s in base.grid() {
        let [g, t, dt, _] = base.jet(s)?;
        out.s.push(s);
        out.gamma.push(g);
        out.t.push(t);
        out.y.push(g.cross(&t));
        out.kappa_g.push(g.dot(&t.cross(&dt)));
    }
    Ok(out)
}

/// `a (integral of gamma) + a cot(theta) (integral of Y)`, rescaled to arc length.
///
/// The construction has constant speed `|a| / |sin(theta)|`, so the arc-length
/// version is obtained by scaling the parameter.
pub fn sabban_bertrand(curve: &Curve, a: f64, theta: f64) -> Result<(Curve, FitOutcome)> {
    if a == 0.0 || theta.sin().abs() < 1e-12 || !a.is_finite() || !theta.is_finite() {
        return Err(Error::DegenerateParameters(format!(
            "need a != 0 and sin(theta) != 0, got a = {a}, theta = {theta}"
        )));
    }
    check_unit_sphere(curve)?;
    let base = curve.reparameterize_arclength()?;
    let nodes = base.grid();
    let mids = midpoints(&nodes);
    let cot = theta.cos() / theta.sin();
    let speed = a.abs() / theta.sin().abs();
    let jets = |params: &[f64]| -> Result<Vec<(Vec3, Vec3)>> {
        params
            .iter()
            .map(|s| {
                let [g, t, dt, _] = base.jet(*s)?;
                // (d/ds)(gamma + cot Y) = T + cot (gamma x T')
                Ok(((g + g.cross(&t) * cot) * a, (t + g.cross(&dt) * cot) * a))
            })
            .collect()
    };
    let at_nodes = jets(&nodes)?;
    let at_mids = jets(&mids)?;
    let vel: Vec<Vec3> = at_nodes.iter().map(|(v, _)| v / speed).collect();
    let vel_mid: Vec<Vec3> = at_mids.iter().map(|(v, _)| v / speed).collect();
    let acc: Vec<Vec3> = at_nodes.iter().map(|(_, d)| d / (speed * speed)).collect();
    let s0 = nodes[0];
    let scaled: Vec<f64> = nodes.iter().map(|s| (s - s0) * speed).collect();
    let pos = cumulative_simpson_values(&scaled, &vel, &vel_mid, Vec3::zeros());
    let out = Curve::from_uniform_samples(&scaled, pos, Some(vel), Some(acc), true, base.samples());
    let data = frenet_apparatus(&out)?;
    let fit = detect_any(&data, data.default_tolerance());
    Ok((out, fit))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bertrand::BertrandKind;
    use crate::curve::{build_curve, CurveSpec};
    use crate::frenet::{classify, integrate_frenet_ode, InitialFrame};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, PI};

    fn spherical_fixture(r: f64, theta0: f64, tau: f64, length: f64) -> Curve {
        integrate_frenet_ode(
            move |s| 1.0 / (r * (tau * s + theta0).cos()),
            move |_| tau,
            InitialFrame::default(),
            length,
        )
        .unwrap()
    }

    #[test]
    fn recovers_sphere_of_fixture() {
        let c = spherical_fixture(2.0, 0.3, 0.5, 2.0);
        let fit = spherical_test(&frenet_apparatus(&c).unwrap(), 1e-6);
        assert!(fit.accepted, "{fit:?}");
        assert!((fit.radius - 2.0).abs() < 1e-6);
        assert!((fit.theta0 - 0.3).abs() < 1e-6);
        for s in c.grid() {
            assert!(((c.position(s).unwrap() - fit.center).norm() - 2.0).abs() < 1e-6);
        }
    }

    #[test]
    fn small_circle_is_radius_degenerate() {
        let c = build_curve(&CurveSpec::sphere_circle(FRAC_PI_3)).unwrap();
        let fit = spherical_test(&frenet_apparatus(&c).unwrap(), 1e-6);
        assert!(fit.accepted && fit.radius_degenerate);
        assert!((fit.radius - FRAC_PI_3.sin()).abs() < 1e-10);
        assert_eq!(fit.theta0, 0.0);
    }

    #[test]
    fn helix_is_not_spherical() {
        let h = build_curve(&CurveSpec::helix(1.0, 1.0)).unwrap();
        let fit = spherical_test(&frenet_apparatus(&h).unwrap(), 1e-6);
        assert!(!fit.accepted);
        assert!(fit.residual > 0.1);
    }

    #[test]
    fn s_m_factor_of_circles() {
        let g = build_curve(&CurveSpec::sphere_circle(FRAC_PI_2)).unwrap();
        let sm = s_m_factor(&g, 0.4).unwrap();
        assert!(sm.values.iter().all(|v| (v - 0.4f64.cos()).abs() < 1e-12));

        let fast = Curve::from_fn((0.0, 3.0), 256, |t: f64| {
            let (sn, cs) = (2.0 * t).sin_cos();
            [
                Vec3::new(cs, sn, 0.0),
                Vec3::new(-2.0 * sn, 2.0 * cs, 0.0),
                Vec3::new(-4.0 * cs, -4.0 * sn, 0.0),
                Vec3::new(8.0 * sn, -8.0 * cs, 0.0),
            ]
        })
        .unwrap();
        let sm = s_m_factor(&fast, 0.0).unwrap();
        assert!(sm.values.iter().all(|v| (v - 2.0).abs() < 1e-12));

        let off = build_curve(&CurveSpec::circle(2.0)).unwrap();
        assert!(matches!(
            s_m_factor(&off, 0.0),
            Err(Error::NotOnUnitSphere(_))
        ));
    }

    #[test]
    fn circle_gives_helix() {
        let c = build_curve(&CurveSpec::circle(1.0)).unwrap();
        let theta0 = PI / 6.0;
        let (k, fit) = bertrand_from_spherical(&c, theta0).unwrap();
        let d = frenet_apparatus(&k).unwrap();
        for i in 0..d.len() {
            assert!((d.kappa[i] - theta0.cos()).abs() < 1e-8);
            assert!((d.tau[i] - theta0.sin()).abs() < 1e-8);
        }
        let fit = fit.unwrap();
        assert!(fit.residual < 1e-6);
        let dual = donor_duality_check(&c, &k, theta0).unwrap();
        assert!(dual.passes(1e-6), "{dual:?}");
    }

    #[test]
    fn matched_phase_gives_salkowski_and_shifted_gives_anti() {
        let m = spherical_fixture(2.0, 0.3, 0.5, 2.0);
        let (k, _) = bertrand_from_spherical(&m, 0.3).unwrap();
        let class = classify(&frenet_apparatus(&k).unwrap(), 1e-3);
        assert!(class.is_salkowski, "{class:?}");

        let (k, fit) = bertrand_from_spherical(&m, 0.3 - FRAC_PI_2).unwrap();
        let class = classify(&frenet_apparatus(&k).unwrap(), 1e-3);
        assert!(class.is_anti_salkowski, "{class:?}");
        assert_eq!(fit.unwrap().kind, BertrandKind::BBertrand);
    }

    #[test]
    fn sabban_frame_is_orthonormal() {
        let c = build_curve(&CurveSpec::sphere_circle(FRAC_PI_4)).unwrap();
        let f = sabban_frame(&c).unwrap();
        for i in 0..f.s.len() {
            assert!(f.gamma[i].dot(&f.t[i]).abs() < 1e-12);
            assert!((f.y[i] - f.gamma[i].cross(&f.t[i])).norm() < 1e-12);
            assert!((f.kappa_g[i].abs() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn sabban_outputs_are_bertrand() {
        let great = build_curve(&CurveSpec::sphere_circle(FRAC_PI_2)).unwrap();
        let (g, fit) = sabban_bertrand(&great, 1.0, FRAC_PI_4).unwrap();
        let fit = fit.unwrap();
        assert!(!fit.planar_special && fit.residual < 1e-5);
        assert!((g.length() - 10.0 * 2f64.sqrt()).abs() < 1e-9);

        let (_, fit) = sabban_bertrand(&great, 1.0, FRAC_PI_2).unwrap();
        assert!(fit.unwrap().planar_special);

        let small = build_curve(&CurveSpec::sphere_circle(FRAC_PI_3)).unwrap();
        let (_, fit) = sabban_bertrand(&small, 0.5, FRAC_PI_3).unwrap();
        assert!(fit.unwrap().residual < 1e-5);

        assert!(matches!(
            sabban_bertrand(&great, 0.0, 1.0),
            Err(Error::DegenerateParameters(_))
        ));
    }
}
