//! The Frenet apparatus `{T, N, B, kappa, tau}` of a curve, curve
//! classification, and integration of the Frenet equations for prescribed
//! curvature and torsion.

use crate::curve::{uniform_grid, Curve, Jet, Vec3, DEFAULT_SAMPLES};
use crate::error::{Error, Result};

/// Curvature below which the principal normal is considered undefined.
pub const KAPPA_MIN: f64 = 1e-8;

pub const CONSTANCY_TOL_EXACT: f64 = 1e-6;
pub const CONSTANCY_TOL_SAMPLED: f64 = 1e-3;

/// Frenet apparatus at a single parameter value. `speed` is `|gamma'|` in the
/// curve's own parameter (1 for arc-length curves).
#[derive(Debug, Clone, Copy)]
pub struct FramePoint {
    pub position: Vec3,
    pub t: Vec3,
    pub n: Vec3,
    pub b: Vec3,
    pub kappa: f64,
    pub tau: f64,
    pub speed: f64,
}

/// Frame and curvatures from a jet; `None` when the curvature is below [`KAPPA_MIN`].
pub fn frame_from_jet(jet: &Jet) -> Option<FramePoint> {
    let [p, d1, d2, d3] = *jet;
    let speed = d1.norm();
    let cross = d1.cross(&d2);
    let cross_norm = cross.norm();
    let kappa = cross_norm / speed.powi(3);
    if !(kappa >= KAPPA_MIN) || !kappa.is_finite() {
        return None;
    }
    let t = d1 / speed;
    let b = cross / cross_norm;
    let n = b.cross(&t);
    let tau = cross.dot(&d3) / (cross_norm * cross_norm);
    Some(FramePoint {
        position: p,
        t,
        n,
        b,
        kappa,
        tau,
        speed,
    })
}

pub fn frame_at(curve: &Curve, s: f64) -> Result<FramePoint> {
    frame_from_jet(&curve.jet(s)?).ok_or(Error::FrameUndefined { at: vec![s] })
}

/// The Frenet apparatus sampled on a curve's grid.
///
/// `s` holds the curve's own parameter values; for arc-length curves these
/// are arc-length values and every `speed` entry is 1.
#[derive(Debug, Clone, Default)]
pub struct FrenetData {
    pub s: Vec<f64>,
    pub position: Vec<Vec3>,
    pub t: Vec<Vec3>,
    pub n: Vec<Vec3>,
    pub b: Vec<Vec3>,
    pub kappa: Vec<f64>,
    pub tau: Vec<f64>,
    pub speed: Vec<f64>,
    /// Whether the source curve had closed-form derivatives.
    pub exact: bool,
}

pub fn frenet_apparatus(curve: &Curve) -> Result<FrenetData> {
    frenet_on_grid(curve, &curve.grid())
}

pub fn frenet_on_grid(curve: &Curve, grid: &[f64]) -> Result<FrenetData> {
    let mut data = FrenetData {
        exact: curve.is_exact(),
        ..Default::default()
    };
    let mut undefined = Vec::new();
    for &s in grid {
        match frame_from_jet(&curve.jet(s)?) {
            Some(f) => data.push(s, &f),
            None => undefined.push(s),
        }
    }
    if undefined.is_empty() {
        Ok(data)
    } else {
        Err(Error::FrameUndefined { at: undefined })
    }
}

impl FrenetData {
    fn push(&mut self, s: f64, f: &FramePoint) {
        self.s.push(s);
        self.position.push(f.position);
        self.t.push(f.t);
        self.n.push(f.n);
        self.b.push(f.b);
        self.kappa.push(f.kappa);
        self.tau.push(f.tau);
        self.speed.push(f.speed);
    }

    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    pub fn point(&self, i: usize) -> FramePoint {
        FramePoint {
            position: self.position[i],
            t: self.t[i],
            n: self.n[i],
            b: self.b[i],
            kappa: self.kappa[i],
            tau: self.tau[i],
            speed: self.speed[i],
        }
    }

    /// Largest departure from an orthonormal frame over the grid.
    pub fn orthonormality_defect(&self) -> f64 {
        (0..self.len())
            .map(|i| {
                let (t, n, b) = (self.t[i], self.n[i], self.b[i]);
                [
                    t.dot(&n).abs(),
                    t.dot(&b).abs(),
                    n.dot(&b).abs(),
                    (t.norm() - 1.0).abs(),
                    (n.norm() - 1.0).abs(),
                    (b.norm() - 1.0).abs(),
                ]
                .into_iter()
                .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }

    /// Largest `|det(T, N, B) - 1|` over the grid.
    pub fn handedness_defect(&self) -> f64 {
        (0..self.len())
            .map(|i| (self.t[i].cross(&self.n[i]).dot(&self.b[i]) - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Sup-norm residuals of the three Frenet equations, with frame
    /// derivatives taken by fourth-order central differences on the grid.
    pub fn frenet_residual(&self) -> [f64; 3] {
        let n = self.len();
        let mut worst = [0.0f64; 3];
        if n < 5 {
            return worst;
        }
        let h = (self.s[n - 1] - self.s[0]) / (n - 1) as f64;
        let diff = |v: &[Vec3], i: usize| {
            (v[i - 2] - v[i - 1] * 8.0 + v[i + 1] * 8.0 - v[i + 2]) / (12.0 * h)
        };
        for i in 2..n - 2 {
            let (k, tau, v) = (self.kappa[i], self.tau[i], self.speed[i]);
            let (t, nn, b) = (self.t[i], self.n[i], self.b[i]);
            let r = [
                (diff(&self.t, i) - nn * (v * k)).norm(),
                (diff(&self.n, i) + t * (v * k) - b * (v * tau)).norm(),
                (diff(&self.b, i) + nn * (v * tau)).norm(),
            ];
            for (w, x) in worst.iter_mut().zip(r) {
                *w = w.max(x);
            }
        }
        worst
    }

    /// Default constancy tolerance for this data's provenance.
    pub fn default_tolerance(&self) -> f64 {
        if self.exact {
            CONSTANCY_TOL_EXACT
        } else {
            CONSTANCY_TOL_SAMPLED
        }
    }
}

/// `(max - min) / max(1, mean |v|)`.
pub fn spread(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    let mean = values.iter().map(|v| v.abs()).sum::<f64>() / values.len() as f64;
    (hi - lo) / mean.max(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveClass {
    pub is_planar: bool,
    pub is_general_helix: bool,
    pub is_salkowski: bool,
    pub is_anti_salkowski: bool,
    pub constancy_tolerance: f64,
}

pub fn classify(data: &FrenetData, tol: f64) -> CurveClass {
    let max_tau = data.tau.iter().fold(0.0f64, |m, t| m.max(t.abs()));
    let ratio: Vec<f64> = data
        .tau
        .iter()
        .zip(&data.kappa)
        .map(|(t, k)| t / k)
        .collect();
    let kappa_const = spread(&data.kappa) < tol;
    let tau_const = spread(&data.tau) < tol;
    let is_planar = max_tau < tol;
    CurveClass {
        is_planar,
        is_general_helix: is_planar || spread(&ratio) < tol,
        is_salkowski: kappa_const && !tau_const,
        is_anti_salkowski: tau_const && !kappa_const,
        constancy_tolerance: tol,
    }
}

/// Starting point and frame for [`integrate_frenet_ode`]; `B = T x N`.
#[derive(Debug, Clone, Copy)]
pub struct InitialFrame {
    pub origin: Vec3,
    pub tangent: Vec3,
    pub normal: Vec3,
}

impl Default for InitialFrame {
    fn default() -> Self {
        Self {
            origin: Vec3::zeros(),
            tangent: Vec3::x(),
            normal: Vec3::y(),
        }
    }
}

pub const ODE_MIN_STEPS: usize = 4096;

/// Unit-speed curve on `[0, length]` with the prescribed curvature and torsion.
///
/// Classical fourth-order Runge-Kutta on `(x, T, N, B)` with
/// `length / ODE_MIN_STEPS` steps; the frame is re-orthonormalized after every step.
pub fn integrate_frenet_ode<K, W>(
    kappa: K,
    tau: W,
    initial: InitialFrame,
    length: f64,
) -> Result<Curve>
where
    K: Fn(f64) -> f64,
    W: Fn(f64) -> f64,
{
    integrate_frenet_ode_with_steps(kappa, tau, initial, length, ODE_MIN_STEPS)
}

pub fn integrate_frenet_ode_with_steps<K, W>(
    kappa: K,
    tau: W,
    initial: InitialFrame,
    length: f64,
    steps: usize,
) -> Result<Curve>
where
    K: Fn(f64) -> f64,
    W: Fn(f64) -> f64,
{
    if !(length > 0.0 && length.is_finite()) {
        return Err(Error::InvalidSpec(format!(
            "length must be positive, got {length}"
        )));
    }
    let steps = steps.max(ODE_MIN_STEPS);
    let h = length / steps as f64;
    let nodes = uniform_grid((0.0, length), steps + 1);
    for i in 0..=2 * steps {
        let s = 0.5 * h * i as f64;
        if !(kappa(s) > 0.0) {
            return Err(Error::NonPositiveKappa(s));
        }
    }
    let t0 = initial.tangent.normalize();
    let n0 = (initial.normal - t0 * t0.dot(&initial.normal)).normalize();
    let mut state = [initial.origin, t0, n0, t0.cross(&n0)];
    let rhs = |s: f64, y: &[Vec3; 4]| -> [Vec3; 4] {
        let (k, w) = (kappa(s), tau(s));
        [y[1], y[2] * k, y[3] * w - y[1] * k, -y[2] * w]
    };
    let add = |y: &[Vec3; 4], d: &[Vec3; 4], f: f64| -> [Vec3; 4] {
        [
            y[0] + d[0] * f,
            y[1] + d[1] * f,
            y[2] + d[2] * f,
            y[3] + d[3] * f,
        ]
    };
    let mut pos = Vec::with_capacity(steps + 1);
    let mut vel = Vec::with_capacity(steps + 1);
    let mut acc = Vec::with_capacity(steps + 1);
    let record =
        |y: &[Vec3; 4], s: f64, pos: &mut Vec<Vec3>, vel: &mut Vec<Vec3>, acc: &mut Vec<Vec3>| {
            pos.push(y[0]);
            vel.push(y[1]);
            acc.push(y[2] * kappa(s));
        };
    record(&state, 0.0, &mut pos, &mut vel, &mut acc);
    for i in 0..steps {
        let s = nodes[i];
        let k1 = rhs(s, &state);
        let k2 = rhs(s + 0.5 * h, &add(&state, &k1, 0.5 * h));
        let k3 = rhs(s + 0.5 * h, &add(&state, &k2, 0.5 * h));
        let k4 = rhs(s + h, &add(&state, &k3, h));
        for j in 0..4 {
            state[j] += (k1[j] + k2[j] * 2.0 + k3[j] * 2.0 + k4[j]) * (h / 6.0);
        }
        let t = state[1].normalize();
        let n = (state[2] - t * t.dot(&state[2])).normalize();
        state[1] = t;
        state[2] = n;
        state[3] = t.cross(&n);
        record(&state, nodes[i + 1], &mut pos, &mut vel, &mut acc);
    }
    Ok(Curve::from_uniform_samples(
        &nodes,
        pos,
        Some(vel),
        Some(acc),
        true,
        DEFAULT_SAMPLES,
    ))
}
