//! Integral curves of unit vector fields expressed in a curve's Frenet frame,
//! principal-donor curves, and the rotation of `(kappa, tau)` induced by a
//! constant field `V = uT + wB`.

use std::fmt;
use std::sync::Arc;

use crate::bertrand::{detect_bertrand, BertrandKind};
use crate::curve::{Curve, Vec3};
use crate::error::{Error, Result};
use crate::frenet::{frame_at, frenet_apparatus, FramePoint, FrenetData};
use crate::interp::UniformSamples;
use crate::quadrature::{cumulative_simpson_values, midpoints};

/// Tolerance on `u^2 + v^2 + w^2 = 1`.
pub const UNIT_FIELD_TOL: f64 = 1e-8;

/// A unit vector field `V = uT + vN + wB` given by its Frenet coefficients.
#[derive(Clone)]
pub struct FrameField {
    coeffs: Arc<dyn Fn(f64) -> [f64; 3] + Send + Sync>,
    constant: Option<[f64; 3]>,
}

impl fmt::Debug for FrameField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.constant {
            Some([u, v, w]) => write!(f, "FrameField({u}, {v}, {w})"),
            None => f.write_str("FrameField(fn)"),
        }
    }
}

impl FrameField {
    pub fn constant(u: f64, v: f64, w: f64) -> Self {
        Self {
            coeffs: Arc::new(move |_| [u, v, w]),
            constant: Some([u, v, w]),
        }
    }

    pub fn from_fn<F>(f: F) -> Self
    where
        F: Fn(f64) -> [f64; 3] + Send + Sync + 'static,
    {
        Self {
            coeffs: Arc::new(f),
            constant: None,
        }
    }

    pub fn tangent() -> Self {
        Self::constant(1.0, 0.0, 0.0)
    }

    pub fn normal() -> Self {
        Self::constant(0.0, 1.0, 0.0)
    }

    pub fn binormal() -> Self {
        Self::constant(0.0, 0.0, 1.0)
    }

    pub fn coefficients(&self, s: f64) -> [f64; 3] {
        (self.coeffs)(s)
    }

    pub fn as_constant(&self) -> Option<[f64; 3]> {
        self.constant
    }

    /// `V(s)` in ambient coordinates.
    pub fn vector(&self, s: f64, frame: &FramePoint) -> Vec3 {
        let [u, v, w] = self.coefficients(s);
        frame.t * u + frame.n * v + frame.b * w
    }

    pub fn check_unit(&self, params: &[f64]) -> Result<()> {
        for &s in params {
            let [u, v, w] = self.coefficients(s);
            let defect = u * u + v * v + w * w - 1.0;
            if !(defect.abs() <= UNIT_FIELD_TOL) {
                return Err(Error::NonUnitField { at: s, defect });
            }
        }
        Ok(())
    }
}

/// Frames at the grid nodes and at the cell midpoints.
pub(crate) fn frames_with_midpoints(
    curve: &Curve,
    nodes: &[f64],
) -> Result<(Vec<FramePoint>, Vec<f64>, Vec<FramePoint>)> {
    let mids = midpoints(nodes);
    let mut bad = Vec::new();
    let mut collect = |params: &[f64]| -> Result<Vec<FramePoint>> {
        let mut out = Vec::with_capacity(params.len());
        for &s in params {
            match frame_at(curve, s) {
                Ok(f) => out.push(f),
                Err(Error::FrameUndefined { at }) => bad.extend(at),
                Err(e) => return Err(e),
            }
        }
        Ok(out)
    };
    let at_nodes = collect(nodes)?;
    let at_mids = collect(&mids)?;
    if !bad.is_empty() {
        bad.sort_by(f64::total_cmp);
        return Err(Error::FrameUndefined { at: bad });
    }
    Ok((at_nodes, mids, at_mids))
}

/// `gamma_V(s) = integral of V from s_min`, sharing the base curve's arc-length parameter.
pub fn integral_curve(curve: &Curve, field: &FrameField) -> Result<Curve> {
    let base = curve.reparameterize_arclength()?;
    let nodes = base.grid();
    let (frames, mids, mid_frames) = frames_with_midpoints(&base, &nodes)?;
    field.check_unit(&nodes)?;
    field.check_unit(&mids)?;
    let v_nodes: Vec<Vec3> = nodes
        .iter()
        .zip(&frames)
        .map(|(s, f)| field.vector(*s, f))
        .collect();
    let v_mids: Vec<Vec3> = mids
        .iter()
        .zip(&mid_frames)
        .map(|(s, f)| field.vector(*s, f))
        .collect();
    let pos = cumulative_simpson_values(&nodes, &v_nodes, &v_mids, Vec3::zeros());
    Ok(Curve::from_uniform_samples(
        &nodes,
        pos,
        Some(v_nodes),
        None,
        true,
        base.samples(),
    ))
}

/// `Theta(s) = integral of tau from s_min`, as a smooth interpolant.
pub(crate) fn torsion_integral(curve: &Curve) -> Result<UniformSamples<f64>> {
    let (lo, hi) = curve.domain();
    let fine = crate::curve::uniform_grid((lo, hi), 4 * (curve.samples() - 1) + 1);
    let (frames, _, mid_frames) = frames_with_midpoints(curve, &fine)?;
    let tau: Vec<f64> = frames.iter().map(|f| f.tau * f.speed).collect();
    let tau_mid: Vec<f64> = mid_frames.iter().map(|f| f.tau * f.speed).collect();
    let theta = cumulative_simpson_values(&fine, &tau, &tau_mid, 0.0);
    Ok(UniformSamples::new(
        lo,
        (hi - lo) / (fine.len() - 1) as f64,
        theta,
    ))
}

/// |v| below which the donor field is treated as vanishing.
pub const DONOR_V_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct DonorCurve {
    pub curve: Curve,
    /// Sub-interval of the base domain on which the donor is built.
    pub domain: (f64, f64),
    /// Parameters where `cos(Theta)` vanishes inside the base domain.
    pub crossings: Vec<f64>,
}

fn donor_field(theta: Arc<UniformSamples<f64>>) -> FrameField {
    FrameField::from_fn(move |s| {
        let (sn, cs) = theta.eval(s, 0).sin_cos();
        [0.0, -cs, sn]
    })
}

/// Principal-donor curve over the whole domain; fails with `VanishingV` when
/// `cos(Theta)` reaches zero inside it.
pub fn principal_donor(curve: &Curve) -> Result<Curve> {
    let donor = principal_donor_clipped(curve)?;
    if donor.crossings.is_empty() {
        Ok(donor.curve)
    } else {
        Err(Error::VanishingV {
            crossings: donor.crossings,
        })
    }
}

/// Principal-donor curve on the largest interval starting at `s_min` where
/// `|cos(Theta)| > DONOR_V_FLOOR`.
pub fn principal_donor_clipped(curve: &Curve) -> Result<DonorCurve> {
    let base = curve.reparameterize_arclength()?;
    let theta = Arc::new(torsion_integral(&base)?);
    let (lo, _) = base.domain();
    let nodes: Vec<f64> = (0..theta.values.len())
        .map(|i| lo + theta.step * i as f64)
        .collect();
    let cos: Vec<f64> = theta.values.iter().map(|t| t.cos()).collect();
    let mut crossings = Vec::new();
    let mut clip_end = None;
    for i in 0..cos.len() {
        let vanishing = cos[i].abs() <= DONOR_V_FLOOR;
        let flips = i + 1 < cos.len() && cos[i].signum() != cos[i + 1].signum();
        if vanishing {
            crossings.push(nodes[i]);
        } else if flips {
            let frac = cos[i] / (cos[i] - cos[i + 1]);
            crossings.push(nodes[i] + frac * theta.step);
        }
        if clip_end.is_none() && (vanishing || flips) {
            clip_end = Some(if vanishing { i.saturating_sub(1) } else { i });
        }
    }
    crossings.dedup_by(|a, b| (*a - *b).abs() < theta.step);
    let hi = clip_end.map_or(base.s_max(), |i| nodes[i]);
    if !(hi > lo) || clip_end == Some(0) {
        return Err(Error::VanishingV { crossings });
    }
    let restricted = base.restrict(lo, hi)?;
    let donor = integral_curve(&restricted, &donor_field(theta))?;
    Ok(DonorCurve {
        curve: donor,
        domain: (lo, hi),
        crossings,
    })
}

/// Predicted `(kappa cos Theta, kappa sin Theta)` of the principal donor on the data grid.
pub fn donor_curvatures(curve: &Curve, data: &FrenetData) -> Result<(Vec<f64>, Vec<f64>)> {
    let theta = torsion_integral(&curve.reparameterize_arclength()?)?;
    Ok(data
        .s
        .iter()
        .zip(&data.kappa)
        .map(|(s, k)| {
            let (sn, cs) = theta.eval(*s, 0).sin_cos();
            (k * cs, k * sn)
        })
        .unzip())
}

/// Curvatures of the principal-direction curve `integral of N`:
/// `kappa_1 = sqrt(kappa^2 + tau^2)` and
/// `tau_1 = kappa^2 / (kappa^2 + tau^2) * (tau / kappa)'`.
pub fn principal_direction_curvatures(data: &FrenetData) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = data.len();
    let ratio: Vec<f64> = data
        .tau
        .iter()
        .zip(&data.kappa)
        .map(|(t, k)| t / k)
        .collect();
    let h = (data.s[n - 1] - data.s[0]) / (n - 1) as f64;
    let d_ratio = |i: usize| -> f64 {
        if i >= 2 && i + 2 < n {
            (ratio[i - 2] - 8.0 * ratio[i - 1] + 8.0 * ratio[i + 1] - ratio[i + 2]) / (12.0 * h)
        } else if i < 2 {
            (-25.0 * ratio[i] + 48.0 * ratio[i + 1] - 36.0 * ratio[i + 2] + 16.0 * ratio[i + 3]
                - 3.0 * ratio[i + 4])
                / (12.0 * h)
        } else {
            (25.0 * ratio[i] - 48.0 * ratio[i - 1] + 36.0 * ratio[i - 2] - 16.0 * ratio[i - 3]
                + 3.0 * ratio[i - 4])
                / (12.0 * h)
        }
    };
    let mut k1 = Vec::with_capacity(n);
    let mut t1 = Vec::with_capacity(n);
    for i in 0..n {
        let (k, t) = (data.kappa[i], data.tau[i]);
        let norm = k.hypot(t);
        if norm * data.speed[i] <= 1e-8 {
            return Err(Error::VanishingNormalDerivative(data.s[i]));
        }
        k1.push(norm);
        t1.push(k * k / (norm * norm) * d_ratio(i) / data.speed[i]);
    }
    Ok((k1, t1))
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransformedCurvatures {
    /// Signed: may be negative before the frame of the realized curve is re-oriented.
    pub kappa_v: Vec<f64>,
    pub tau_v: Vec<f64>,
}

fn check_unit_pair(u: f64, w: f64) -> Result<()> {
    let defect = u * u + w * w - 1.0;
    if defect.abs() <= 1e-10 {
        Ok(())
    } else {
        Err(Error::NonUnitCoefficients(defect))
    }
}

/// `kappa_V = u kappa - w tau`, `tau_V = w kappa + u tau`.
pub fn transform_curvatures(
    kappa: &[f64],
    tau: &[f64],
    u: f64,
    w: f64,
) -> Result<TransformedCurvatures> {
    check_unit_pair(u, w)?;
    let (kappa_v, tau_v) = kappa
        .iter()
        .zip(tau)
        .map(|(k, t)| (u * k - w * t, w * k + u * t))
        .unzip();
    Ok(TransformedCurvatures { kappa_v, tau_v })
}

/// Inverse of [`transform_curvatures`]: `kappa = u kappa_V + w tau_V`, `tau = -w kappa_V + u tau_V`.
pub fn inverse_transform(
    tc: &TransformedCurvatures,
    u: f64,
    w: f64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    check_unit_pair(u, w)?;
    Ok(tc
        .kappa_v
        .iter()
        .zip(&tc.tau_v)
        .map(|(kv, tv)| (u * kv + w * tv, -w * kv + u * tv))
        .unzip())
}

/// Outcome of transporting a Bertrand relation to the integral curve of `V = uT + wB`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferReport {
    pub lambda: f64,
    pub mu: f64,
    pub lambda_bar: f64,
    pub mu_bar: f64,
    /// Sup-norm of `lambda_bar kappa_V + mu_bar tau_V - 1` with the transformed curvatures.
    pub predicted_residual: f64,
    /// Same residual with curvatures measured on the realized integral curve
    /// (signed by `epsilon`); `None` when that curve has no Frenet frame.
    pub measured_residual: Option<f64>,
    /// Orientation of the realized curve's normal relative to the base normal.
    pub epsilon: Option<f64>,
}

/// Transfer of `lambda kappa + mu tau = 1` to the `V = uT + wB` integral curve,
/// with `lambda_bar = lambda u - mu w` and `mu_bar = lambda w + mu u`.
pub fn bertrand_transfer_check(curve: &Curve, u: f64, w: f64) -> Result<TransferReport> {
    check_unit_pair(u, w)?;
    let data = frenet_apparatus(&curve.reparameterize_arclength()?)?;
    let fit = detect_bertrand(&data, BertrandKind::Bertrand, data.default_tolerance())
        .map_err(|r| Error::NotBertrand(format!("fit residual {:e}", r.residual)))?;
    transfer_with(curve, &data, fit.lambda, fit.mu, u, w)
}

/// As [`bertrand_transfer_check`], with the base coefficients supplied.
pub fn transfer_with(
    curve: &Curve,
    data: &FrenetData,
    lambda: f64,
    mu: f64,
    u: f64,
    w: f64,
) -> Result<TransferReport> {
    let tc = transform_curvatures(&data.kappa, &data.tau, u, w)?;
    let lambda_bar = lambda * u - mu * w;
    let mu_bar = lambda * w + mu * u;
    let residual = |k: &[f64], t: &[f64]| {
        k.iter()
            .zip(t)
            .map(|(k, t)| (lambda_bar * k + mu_bar * t - 1.0).abs())
            .fold(0.0, f64::max)
    };
    let predicted_residual = residual(&tc.kappa_v, &tc.tau_v);
    let realized = integral_curve(curve, &FrameField::constant(u, 0.0, w))?;
    let (measured_residual, epsilon) = match frenet_apparatus(&realized) {
        Ok(measured) => {
            let eps = measured.n[0].dot(&data.n[0]).signum();
            let signed: Vec<f64> = measured.kappa.iter().map(|k| eps * k).collect();
            (Some(residual(&signed, &measured.tau)), Some(eps))
        }
        Err(Error::FrameUndefined { .. }) => (None, None),
        Err(e) => return Err(e),
    };
    Ok(TransferReport {
        lambda,
        mu,
        lambda_bar,
        mu_bar,
        predicted_residual,
        measured_residual,
        epsilon,
    })
}
