//! Space curves: closed-form families, sampled curves and arc-length
//! reparameterization, all queryable for position and derivatives up to
//! third order at any parameter value.

use std::fmt;
use std::sync::Arc;

use nalgebra::{Rotation3, Vector3};

use crate::error::{Error, Result};
use crate::interp::{UniformSamples, STENCIL};
use crate::quadrature;

pub type Vec3 = Vector3<f64>;

/// Position followed by the first three derivatives.
pub type Jet = [Vec3; 4];

pub const DEFAULT_SAMPLES: usize = 1024;
pub const MIN_SAMPLES: usize = 64;
pub const DEFAULT_DOMAIN: (f64, f64) = (0.0, 10.0);

/// Speed below which a curve is treated as singular.
pub const REGULARITY_FLOOR: f64 = 1e-10;

/// Named curve families accepted by [`build_curve`].
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// `(a cos(s/c), a sin(s/c), b s/c)` with `c = sqrt(a^2 + b^2)`.
    Helix { a: f64, b: f64 },
    /// Circle of radius `r` in the xy-plane, centred at the origin.
    Circle { r: f64 },
    /// Straight line through the origin.
    Line { direction: Vec3 },
    /// Circle on the unit sphere at polar angle `polar` (great circle at pi/2).
    SphereCircle { polar: f64 },
    /// Ordered points, interpolated and reparameterized by arc length.
    Sampled { points: Vec<Vec3> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveSpec {
    pub family: Family,
    /// Arc-length domain; ignored for sampled families, which always start at 0.
    pub domain: Option<(f64, f64)>,
    pub samples: usize,
}

impl CurveSpec {
    pub fn new(family: Family) -> Self {
        Self {
            family,
            domain: None,
            samples: DEFAULT_SAMPLES,
        }
    }

    pub fn helix(a: f64, b: f64) -> Self {
        Self::new(Family::Helix { a, b })
    }

    pub fn circle(r: f64) -> Self {
        Self::new(Family::Circle { r })
    }

    pub fn line(direction: Vec3) -> Self {
        Self::new(Family::Line { direction })
    }

    pub fn sphere_circle(polar: f64) -> Self {
        Self::new(Family::SphereCircle { polar })
    }

    pub fn sampled(points: Vec<Vec3>) -> Self {
        Self::new(Family::Sampled { points })
    }

    pub fn with_domain(mut self, s_min: f64, s_max: f64) -> Self {
        self.domain = Some((s_min, s_max));
        self
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSpec(msg));
        if self.samples < MIN_SAMPLES {
            return bad(format!(
                "sample count {} below minimum {MIN_SAMPLES}",
                self.samples
            ));
        }
        if let Some((lo, hi)) = self.domain {
            if !(lo.is_finite() && hi.is_finite() && hi > lo) {
                return bad(format!("domain [{lo}, {hi}] is empty or not finite"));
            }
        }
        match &self.family {
            Family::Helix { a, b } if !(*a > 0.0 && b.is_finite()) => {
                bad(format!("helix requires a > 0 (got a = {a}, b = {b})"))
            }
            Family::Circle { r } if !(*r > 0.0 && r.is_finite()) => {
                bad(format!("circle requires r > 0 (got {r})"))
            }
            Family::Line { direction } if !(direction.norm() > 0.0) => {
                bad("line direction must be non-zero".into())
            }
            Family::SphereCircle { polar } if !(*polar > 0.0 && *polar < std::f64::consts::PI) => {
                bad(format!(
                    "sphere circle polar angle must lie in (0, pi), got {polar}"
                ))
            }
            Family::Sampled { points } if points.len() < STENCIL => bad(format!(
                "sampled curve needs at least {STENCIL} points, got {}",
                points.len()
            )),
            _ => Ok(()),
        }
    }
}

/// A user-supplied parametric curve: the closure returns the jet at `t`.
#[derive(Clone)]
pub struct JetFn(Arc<dyn Fn(f64) -> Jet + Send + Sync>);

impl fmt::Debug for JetFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("JetFn(..)")
    }
}

/// Uniform samples of a curve and, optionally, of its first two derivatives.
/// Higher derivatives are taken from the highest stored jet.
#[derive(Debug, Clone)]
pub(crate) struct SampledJets {
    pos: UniformSamples<Vec3>,
    vel: Option<UniformSamples<Vec3>>,
    acc: Option<UniformSamples<Vec3>>,
    unit_speed: bool,
}

impl SampledJets {
    fn jet(&self, t: f64) -> Jet {
        let mut out = [Vec3::zeros(); 4];
        for (k, slot) in out.iter_mut().enumerate() {
            *slot = match (k, &self.vel, &self.acc) {
                (2.., _, Some(acc)) => acc.eval(t, k - 2),
                (1.., Some(vel), _) => vel.eval(t, k - 1),
                _ => self.pos.eval(t, k),
            };
        }
        out
    }
}

#[derive(Debug)]
pub(crate) struct ArcLengthMap {
    base: Curve,
    t_nodes: Vec<f64>,
    s_nodes: Vec<f64>,
}

impl ArcLengthMap {
    fn speed(&self, t: f64) -> f64 {
        self.base.jet_raw(t)[1].norm()
    }

    fn length(&self) -> f64 {
        *self.s_nodes.last().unwrap()
    }

    /// Base parameter at arc length `s`: monotone Newton iteration safeguarded by bisection.
    fn param_at(&self, s: f64) -> f64 {
        let n = self.s_nodes.len();
        let s = s.clamp(0.0, self.length());
        let i = match self.s_nodes.binary_search_by(|x| x.total_cmp(&s)) {
            Ok(i) => return self.t_nodes[i],
            Err(i) => i.clamp(1, n - 1) - 1,
        };
        let (mut lo, mut hi) = (self.t_nodes[i], self.t_nodes[i + 1]);
        let (s_lo, s_hi) = (self.s_nodes[i], self.s_nodes[i + 1]);
        let t0 = lo;
        let mut t = lo + (hi - lo) * (s - s_lo) / (s_hi - s_lo);
        for _ in 0..60 {
            let g = s_lo + quadrature::gauss_kronrod15(&|x| self.speed(x), t0, t).0 - s;
            if g.abs() < 1e-13 {
                break;
            }
            if g > 0.0 {
                hi = t;
            } else {
                lo = t;
            }
            let newton = t - g / self.speed(t);
            t = if newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
            if hi - lo < 1e-15 * (1.0 + t.abs()) {
                break;
            }
        }
        t
    }

    fn jet(&self, s: f64) -> Jet {
        let t = self.param_at(s);
        let [p, d1, d2, d3] = self.base.jet_raw(t);
        let sigma = d1.norm();
        let sigma_t = d1.dot(&d2) / sigma;
        let sigma_tt = (d2.dot(&d2) + d1.dot(&d3) - sigma_t * sigma_t) / sigma;
        let t1 = 1.0 / sigma;
        let t2 = -sigma_t / sigma.powi(3);
        let t3 = -sigma_tt / sigma.powi(4) + 3.0 * sigma_t * sigma_t / sigma.powi(5);
        [
            p,
            d1 * t1,
            d2 * (t1 * t1) + d1 * t2,
            d3 * t1.powi(3) + d2 * (3.0 * t1 * t2) + d1 * t3,
        ]
    }
}

#[derive(Debug, Clone)]
enum Repr {
    Helix {
        a: f64,
        b: f64,
        c: f64,
    },
    Circle {
        r: f64,
    },
    Line {
        direction: Vec3,
    },
    SphereCircle {
        rho: f64,
        height: f64,
    },
    Function(JetFn),
    Samples(Arc<SampledJets>),
    ArcLength(Arc<ArcLengthMap>),
    Rigid {
        inner: Arc<Curve>,
        rotation: Rotation3<f64>,
        translation: Vec3,
    },
}

/// A regular space curve over a closed parameter interval.
///
/// Closed-form families and arc-length reparameterized curves are unit-speed;
/// curves created with [`Curve::from_fn`] or produced by offset constructions
/// keep their own parameter until [`Curve::reparameterize_arclength`] is called.
/// `samples` is the grid resolution used by downstream numerical work.
#[derive(Debug, Clone)]
pub struct Curve {
    repr: Repr,
    domain: (f64, f64),
    samples: usize,
}

pub fn build_curve(spec: &CurveSpec) -> Result<Curve> {
    spec.validate()?;
    let domain = spec.domain.unwrap_or(DEFAULT_DOMAIN);
    let repr = match &spec.family {
        Family::Helix { a, b } => Repr::Helix {
            a: *a,
            b: *b,
            c: a.hypot(*b),
        },
        Family::Circle { r } => Repr::Circle { r: *r },
        Family::Line { direction } => Repr::Line {
            direction: direction.normalize(),
        },
        Family::SphereCircle { polar } => Repr::SphereCircle {
            rho: polar.sin(),
            height: polar.cos(),
        },
        Family::Sampled { points } => return sampled_curve(points, spec.samples),
    };
    Ok(Curve {
        repr,
        domain,
        samples: spec.samples,
    })
}

fn sampled_curve(points: &[Vec3], samples: usize) -> Result<Curve> {
    let scale = points.iter().map(|p| p.norm()).fold(1.0, f64::max);
    for (i, pair) in points.windows(2).enumerate() {
        if (pair[1] - pair[0]).norm() <= 1e-12 * scale {
            return Err(Error::DegenerateSamples(format!(
                "points {i} and {} coincide",
                i + 1
            )));
        }
    }
    let n = points.len();
    let raw = Curve {
        repr: Repr::Samples(Arc::new(SampledJets {
            pos: UniformSamples::new(0.0, 1.0, points.to_vec()),
            vel: None,
            acc: None,
            unit_speed: false,
        })),
        domain: (0.0, (n - 1) as f64),
        samples: samples.max(n),
    };
    raw.reparameterize_arclength().map_err(|e| match e {
        Error::NotRegular { at, speed } => Error::DegenerateSamples(format!(
            "interpolated speed {speed:e} at sample parameter {at}"
        )),
        other => other,
    })
}

impl Curve {
    /// Curve given by a closure returning `[position, d1, d2, d3]` at parameter `t`.
    pub fn from_fn<F>(domain: (f64, f64), samples: usize, f: F) -> Result<Self>
    where
        F: Fn(f64) -> Jet + Send + Sync + 'static,
    {
        if !(domain.1 > domain.0) {
            return Err(Error::InvalidSpec(format!(
                "domain [{}, {}] is empty",
                domain.0, domain.1
            )));
        }
        if samples < MIN_SAMPLES {
            return Err(Error::InvalidSpec(format!(
                "sample count {samples} below minimum {MIN_SAMPLES}"
            )));
        }
        Ok(Self {
            repr: Repr::Function(JetFn(Arc::new(f))),
            domain,
            samples,
        })
    }

    /// Curve from values on the uniform grid `nodes` (position plus optional
    /// exact first and second derivatives).
    pub(crate) fn from_uniform_samples(
        nodes: &[f64],
        pos: Vec<Vec3>,
        vel: Option<Vec<Vec3>>,
        acc: Option<Vec<Vec3>>,
        unit_speed: bool,
        samples: usize,
    ) -> Self {
        let start = nodes[0];
        let step = (nodes[nodes.len() - 1] - start) / (nodes.len() - 1) as f64;
        let wrap = |v: Vec<Vec3>| UniformSamples::new(start, step, v);
        Self {
            repr: Repr::Samples(Arc::new(SampledJets {
                pos: wrap(pos),
                vel: vel.map(wrap),
                acc: acc.map(wrap),
                unit_speed,
            })),
            domain: (start, nodes[nodes.len() - 1]),
            samples,
        }
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn s_min(&self) -> f64 {
        self.domain.0
    }

    pub fn s_max(&self) -> f64 {
        self.domain.1
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples.max(MIN_SAMPLES);
        self
    }

    /// The same curve on the sub-interval `[lo, hi]` of its domain.
    pub fn restrict(&self, lo: f64, hi: f64) -> Result<Curve> {
        self.check_domain(lo)?;
        self.check_domain(hi)?;
        if !(hi > lo) {
            return Err(Error::InvalidSpec(format!(
                "empty restriction [{lo}, {hi}]"
            )));
        }
        let mut out = self.clone();
        out.domain = (lo.max(self.domain.0), hi.min(self.domain.1));
        Ok(out)
    }

    /// Uniform grid of `samples` parameter values spanning the domain.
    pub fn grid(&self) -> Vec<f64> {
        uniform_grid(self.domain, self.samples)
    }

    pub fn is_unit_speed(&self) -> bool {
        match &self.repr {
            Repr::Function(_) => false,
            Repr::Samples(s) => s.unit_speed,
            Repr::Rigid { inner, .. } => inner.is_unit_speed(),
            _ => true,
        }
    }

    /// True when derivatives come from closed forms rather than interpolated samples.
    pub fn is_exact(&self) -> bool {
        match &self.repr {
            Repr::Samples(_) => false,
            Repr::ArcLength(map) => map.base.is_exact(),
            Repr::Rigid { inner, .. } => inner.is_exact(),
            _ => true,
        }
    }

    fn check_domain(&self, s: f64) -> Result<()> {
        let (lo, hi) = self.domain;
        let slack = 1e-9 * (hi - lo).max(1.0);
        if s.is_finite() && s >= lo - slack && s <= hi + slack {
            Ok(())
        } else {
            Err(Error::OutOfDomain {
                at: s,
                min: lo,
                max: hi,
            })
        }
    }

    /// Position and derivatives 1..=3 at `s`.
    pub fn jet(&self, s: f64) -> Result<Jet> {
        self.check_domain(s)?;
        Ok(self.jet_raw(s.clamp(self.domain.0, self.domain.1)))
    }

    pub fn position(&self, s: f64) -> Result<Vec3> {
        Ok(self.jet(s)?[0])
    }

    pub fn derivative(&self, s: f64, order: usize) -> Result<Vec3> {
        if !(1..=3).contains(&order) {
            return Err(Error::BadOrder(order));
        }
        Ok(self.jet(s)?[order])
    }

    pub(crate) fn jet_raw(&self, s: f64) -> Jet {
        match &self.repr {
            Repr::Helix { a, b, c } => {
                let (sn, cs) = (s / c).sin_cos();
                let (a, b, c) = (*a, *b, *c);
                [
                    Vec3::new(a * cs, a * sn, b * s / c),
                    Vec3::new(-a * sn / c, a * cs / c, b / c),
                    Vec3::new(-a * cs, -a * sn, 0.0) / (c * c),
                    Vec3::new(a * sn, -a * cs, 0.0) / (c * c * c),
                ]
            }
            Repr::Circle { r } => circle_jet(*r, 0.0, s),
            Repr::SphereCircle { rho, height } => circle_jet(*rho, *height, s),
            Repr::Line { direction } => [*direction * s, *direction, Vec3::zeros(), Vec3::zeros()],
            Repr::Function(f) => (f.0)(s),
            Repr::Samples(samples) => samples.jet(s),
            Repr::ArcLength(map) => map.jet(s),
            Repr::Rigid {
                inner,
                rotation,
                translation,
            } => {
                let j = inner.jet_raw(s);
                [
                    rotation * j[0] + translation,
                    rotation * j[1],
                    rotation * j[2],
                    rotation * j[3],
                ]
            }
        }
    }

    /// The same curve moved by a rigid motion `x -> rotation * x + translation`.
    pub fn transformed(&self, rotation: Rotation3<f64>, translation: Vec3) -> Curve {
        Curve {
            repr: Repr::Rigid {
                inner: Arc::new(self.clone()),
                rotation,
                translation,
            },
            domain: self.domain,
            samples: self.samples,
        }
    }

    /// Total arc length over the domain.
    pub fn length(&self) -> f64 {
        if self.is_unit_speed() {
            return self.domain.1 - self.domain.0;
        }
        let grid = self.grid();
        grid.windows(2)
            .map(|w| quadrature::integrate(&|t| self.jet_raw(t)[1].norm(), w[0], w[1], 1e-13))
            .sum()
    }

    /// Unit-speed copy of this curve with arc-length domain `[0, L]`.
    ///
    /// Curves that are already unit-speed are returned unchanged.
    pub fn reparameterize_arclength(&self) -> Result<Curve> {
        if self.is_unit_speed() {
            return Ok(self.clone());
        }
        let t_nodes = match &self.repr {
            Repr::Samples(s) => {
                let n = s.pos.values.len();
                (0..n)
                    .map(|i| s.pos.start + s.pos.step * i as f64)
                    .collect()
            }
            _ => self.grid(),
        };
        for &t in &t_nodes {
            let speed = self.jet_raw(t)[1].norm();
            if !(speed > REGULARITY_FLOOR) {
                return Err(Error::NotRegular { at: t, speed });
            }
        }
        let mut s_nodes = Vec::with_capacity(t_nodes.len());
        let mut acc = 0.0;
        s_nodes.push(0.0);
        for w in t_nodes.windows(2) {
            acc += quadrature::integrate(&|t| self.jet_raw(t)[1].norm(), w[0], w[1], 1e-14);
            s_nodes.push(acc);
        }
        let length = acc;
        Ok(Curve {
            repr: Repr::ArcLength(Arc::new(ArcLengthMap {
                base: self.clone(),
                t_nodes,
                s_nodes,
            })),
            domain: (0.0, length),
            samples: self.samples,
        })
    }
}

fn circle_jet(r: f64, height: f64, s: f64) -> Jet {
    let (sn, cs) = (s / r).sin_cos();
    [
        Vec3::new(r * cs, r * sn, height),
        Vec3::new(-sn, cs, 0.0),
        Vec3::new(-cs, -sn, 0.0) / r,
        Vec3::new(sn, -cs, 0.0) / (r * r),
    ]
}

pub fn uniform_grid((lo, hi): (f64, f64), n: usize) -> Vec<f64> {
    let n = n.max(2);
    let h = (hi - lo) / (n - 1) as f64;
    (0..n)
        .map(|i| if i + 1 == n { hi } else { lo + h * i as f64 })
        .collect()
}

/// Least-squares rigid motion taking `source` onto `target` (Kabsch).
/// Returns the motion and the largest residual distance after applying it.
pub fn rigid_align(source: &[Vec3], target: &[Vec3]) -> (Rotation3<f64>, Vec3, f64) {
    assert_eq!(source.len(), target.len());
    let n = source.len() as f64;
    let cs = source.iter().sum::<Vec3>() / n;
    let ct = target.iter().sum::<Vec3>() / n;
    let mut cov = nalgebra::Matrix3::zeros();
    for (p, q) in source.iter().zip(target) {
        cov += (q - ct) * (p - cs).transpose();
    }
    let svd = cov.svd(true, true);
    let (u, vt) = (svd.u.unwrap(), svd.v_t.unwrap());
    let d = (u * vt).determinant().signum();
    let fix = nalgebra::Matrix3::from_diagonal(&Vec3::new(1.0, 1.0, d));
    let rotation = Rotation3::from_matrix_unchecked(u * fix * vt);
    let translation = ct - rotation * cs;
    let worst = source
        .iter()
        .zip(target)
        .map(|(p, q)| (rotation * p + translation - q).norm())
        .fold(0.0, f64::max);
    (rotation, translation, worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn helix(a: f64, b: f64) -> Curve {
        build_curve(&CurveSpec::helix(a, b)).unwrap()
    }

    #[test]
    fn helix_starts_on_x_axis_with_unit_speed() {
        let h = helix(1.0, 1.0);
        assert!((h.position(0.0).unwrap() - Vec3::new(1.0, 0.0, 0.0)).norm() < 1e-15);
        for s in h.grid() {
            assert!((h.derivative(s, 1).unwrap().norm() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn flat_helix_is_unit_circle() {
        let h = helix(1.0, 0.0);
        for s in [0.0, 1.0, 2.5, 7.0] {
            let p = h.position(s).unwrap();
            assert!((p.norm() - 1.0).abs() < 1e-14 && p.z.abs() < 1e-15);
        }
    }

    #[test]
    fn circle_second_derivative_points_inward() {
        let c = build_curve(&CurveSpec::circle(1.0)).unwrap();
        assert!((c.derivative(0.0, 2).unwrap() - Vec3::new(-1.0, 0.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn invalid_specs_rejected() {
        assert!(matches!(
            build_curve(&CurveSpec::helix(0.0, 1.0)),
            Err(Error::InvalidSpec(_))
        ));
        assert!(matches!(
            build_curve(&CurveSpec::circle(-1.0)),
            Err(Error::InvalidSpec(_))
        ));
        let few = vec![Vec3::zeros(); 5];
        assert!(matches!(
            build_curve(&CurveSpec::sampled(few)),
            Err(Error::InvalidSpec(_))
        ));
        assert!(matches!(
            build_curve(&CurveSpec::helix(1.0, 1.0).with_domain(2.0, 2.0)),
            Err(Error::InvalidSpec(_))
        ));
    }

    #[test]
    fn coincident_samples_rejected() {
        let mut pts: Vec<Vec3> = (0..10)
            .map(|i| Vec3::new(i as f64, (i as f64).sin(), 0.0))
            .collect();
        pts[4] = pts[3];
        assert!(matches!(
            build_curve(&CurveSpec::sampled(pts)),
            Err(Error::DegenerateSamples(_))
        ));
    }

    #[test]
    fn out_of_domain_and_bad_order() {
        let h = helix(1.0, 1.0);
        assert!(matches!(
            h.derivative(11.0, 1),
            Err(Error::OutOfDomain { .. })
        ));
        assert!(matches!(h.derivative(1.0, 4), Err(Error::BadOrder(4))));
    }

    #[test]
    fn angle_parameterized_circle_has_length_4pi() {
        let c = Curve::from_fn((0.0, 2.0 * PI), 256, |t| {
            let (s, c) = t.sin_cos();
            [
                Vec3::new(2.0 * c, 2.0 * s, 0.0),
                Vec3::new(-2.0 * s, 2.0 * c, 0.0),
                Vec3::new(-2.0 * c, -2.0 * s, 0.0),
                Vec3::new(2.0 * s, -2.0 * c, 0.0),
            ]
        })
        .unwrap();
        let r = c.reparameterize_arclength().unwrap();
        assert!((r.s_max() - 4.0 * PI).abs() < 1e-12);
        for s in r.grid() {
            assert!((r.derivative(s, 1).unwrap().norm() - 1.0).abs() < 1e-10);
            // exact arc-length form: (2 cos(s/2), 2 sin(s/2), 0)
            let p = r.position(s).unwrap();
            assert!(
                (p - Vec3::new(2.0 * (s / 2.0).cos(), 2.0 * (s / 2.0).sin(), 0.0)).norm() < 1e-10
            );
            let d3 = r.derivative(s, 3).unwrap();
            assert!((d3 - Vec3::new((s / 2.0).sin(), -(s / 2.0).cos(), 0.0) / 4.0).norm() < 1e-9);
        }
    }

    #[test]
    fn sampled_helix_derivatives() {
        let h = helix(1.0, 1.0);
        let points: Vec<Vec3> = (0..=500)
            .map(|i| h.position(i as f64 * 0.02).unwrap())
            .collect();
        let c = build_curve(&CurveSpec::sampled(points)).unwrap();
        assert!((c.s_max() - 10.0).abs() < 1e-8);
        let d3 = c.derivative(1.0, 3).unwrap();
        assert!((d3 - h.derivative(1.0, 3).unwrap()).norm() < 1e-5);
        assert!((c.position(1.0).unwrap() - h.position(1.0).unwrap()).norm() < 1e-8);
    }

    #[test]
    fn ellipse_length_matches_simpson() {
        let e = Curve::from_fn((0.0, 2.0 * PI), 256, |t| {
            let (s, c) = t.sin_cos();
            [
                Vec3::new(2.0 * c, s, 0.0),
                Vec3::new(-2.0 * s, c, 0.0),
                Vec3::new(-2.0 * c, -s, 0.0),
                Vec3::new(2.0 * s, -c, 0.0),
            ]
        })
        .unwrap();
        let n = 20_000;
        let h = 2.0 * PI / n as f64;
        let speed = |t: f64| (4.0 * t.sin().powi(2) + t.cos().powi(2)).sqrt();
        let simpson = (0..n)
            .map(|i| {
                let a = i as f64 * h;
                h / 6.0 * (speed(a) + 4.0 * speed(a + 0.5 * h) + speed(a + h))
            })
            .sum::<f64>();
        assert!((e.length() - simpson).abs() < 1e-10);
        let r = e.reparameterize_arclength().unwrap();
        assert!((r.s_max() - simpson).abs() < 1e-10);
    }

    #[test]
    fn reparameterizing_unit_speed_curve_is_identity() {
        let h = helix(1.0, 1.0);
        let r = h.reparameterize_arclength().unwrap();
        let rr = r.reparameterize_arclength().unwrap();
        for s in h.grid() {
            assert!((h.position(s).unwrap() - rr.position(s).unwrap()).norm() < 1e-10);
        }
    }

    #[test]
    fn kabsch_recovers_motion() {
        let pts: Vec<Vec3> = (0..20)
            .map(|i| Vec3::new(i as f64, (i as f64).sin(), (i * i) as f64 * 0.1))
            .collect();
        let rot = Rotation3::from_euler_angles(0.3, -1.1, 2.0);
        let moved: Vec<Vec3> = pts
            .iter()
            .map(|p| rot * p + Vec3::new(1.0, 2.0, 3.0))
            .collect();
        let (r, t, worst) = rigid_align(&pts, &moved);
        assert!(worst < 1e-10);
        assert!((r.matrix() - rot.matrix()).norm() < 1e-10);
        assert!((t - Vec3::new(1.0, 2.0, 3.0)).norm() < 1e-10);
    }
}
