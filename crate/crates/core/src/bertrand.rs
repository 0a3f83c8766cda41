//! Bertrand-type relations between curvature and torsion, and the
//! construction and verification of V-Bertrand and f-Bertrand mates.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use nalgebra::{Matrix2, SymmetricEigen, Vector2};

use crate::curve::{Curve, Vec3};
use crate::direction::{frames_with_midpoints, FrameField};
use crate::error::{Error, Result};
use crate::frenet::{frame_from_jet, frenet_apparatus, FrenetData};
use crate::quadrature::cumulative_simpson_values;

/// Which linear relation is being fitted: `lambda kappa + mu tau = 1` or `= -1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BertrandKind {
    Bertrand,
    BBertrand,
}

impl BertrandKind {
    pub fn rhs(self) -> f64 {
        match self {
            BertrandKind::Bertrand => 1.0,
            BertrandKind::BBertrand => -1.0,
        }
    }
}

impl fmt::Display for BertrandKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BertrandKind::Bertrand => "bertrand",
            BertrandKind::BBertrand => "b-bertrand",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BertrandFit {
    pub kind: BertrandKind,
    pub lambda: f64,
    pub mu: f64,
    /// `atan2(lambda, mu)`, so `lambda = c sin(theta)` and `mu = c cos(theta)`.
    pub theta: f64,
    /// Sup-norm of `lambda kappa + mu tau - rhs` over the grid.
    pub residual: f64,
    /// Planar curve: the relation holds with `mu = 0` and any angle.
    pub planar_special: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RejectReason {
    Residual,
    VanishingCoefficient,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitRejection {
    pub kind: BertrandKind,
    pub lambda: f64,
    pub mu: f64,
    pub residual: f64,
    pub reason: RejectReason,
}

fn sup_abs(values: impl Iterator<Item = f64>) -> f64 {
    values.fold(0.0, |m, x| m.max(x.abs()))
}

/// Minimum-norm least-squares solution of `lambda kappa + mu tau = rhs`.
fn least_squares(kappa: &[f64], tau: &[f64], rhs: f64) -> (f64, f64) {
    let mut m = Matrix2::zeros();
    let mut r = Vector2::zeros();
    for (k, t) in kappa.iter().zip(tau) {
        let row = Vector2::new(*k, *t);
        m += row * row.transpose();
        r += row * rhs;
    }
    let eig = SymmetricEigen::new(m);
    let top = eig.eigenvalues.abs().max();
    let mut x = Vector2::zeros();
    for i in 0..2 {
        let ev = eig.eigenvalues[i];
        if ev.abs() > 1e-12 * top {
            let v = eig.eigenvectors.column(i);
            x += v * (v.dot(&r) / ev);
        }
    }
    (x[0], x[1])
}

/// Fits `lambda kappa + mu tau = +-1` and accepts when the sup residual is below `tol`
/// and the defining coefficient (`lambda` for the Bertrand kind, `mu` for the
/// B-Bertrand kind) does not vanish.
pub fn detect_bertrand(
    data: &FrenetData,
    kind: BertrandKind,
    tol: f64,
) -> std::result::Result<BertrandFit, FitRejection> {
    let rhs = kind.rhs();
    let planar = sup_abs(data.tau.iter().copied());
    if planar < tol {
        let (sk, skk) = data
            .kappa
            .iter()
            .fold((0.0, 0.0), |(a, b), k| (a + k, b + k * k));
        let lambda = rhs * sk / skk;
        return Ok(BertrandFit {
            kind,
            lambda,
            mu: 0.0,
            theta: lambda.signum() * FRAC_PI_2,
            residual: planar,
            planar_special: true,
        });
    }
    let (lambda, mu) = least_squares(&data.kappa, &data.tau, rhs);
    let defining = match kind {
        BertrandKind::Bertrand => lambda,
        BertrandKind::BBertrand => mu,
    };
    if defining.abs() < tol.sqrt() * lambda.hypot(mu).max(1.0) {
        // With the defining coefficient forced to zero the relation collapses
        // to 0 = rhs.
        return Err(FitRejection {
            kind,
            lambda,
            mu,
            residual: 1.0,
            reason: RejectReason::VanishingCoefficient,
        });
    }
    let residual = sup_abs(
        data.kappa
            .iter()
            .zip(&data.tau)
            .map(|(k, t)| lambda * k + mu * t - rhs),
    );
    if !(residual < tol) {
        return Err(FitRejection {
            kind,
            lambda,
            mu,
            residual,
            reason: RejectReason::Residual,
        });
    }
    Ok(BertrandFit {
        kind,
        lambda,
        mu,
        theta: lambda.atan2(mu),
        residual,
        planar_special: false,
    })
}

/// Tries the Bertrand kind, then the B-Bertrand kind.
pub fn detect_any(
    data: &FrenetData,
    tol: f64,
) -> std::result::Result<BertrandFit, [FitRejection; 2]> {
    match detect_bertrand(data, BertrandKind::Bertrand, tol) {
        Ok(fit) => Ok(fit),
        Err(first) => {
            detect_bertrand(data, BertrandKind::BBertrand, tol).map_err(|second| [first, second])
        }
    }
}

/// Frame agreement between a base curve and a candidate mate.
#[derive(Debug, Clone, PartialEq)]
pub struct MateReport {
    /// `min |N_bar . N|` over the grid.
    pub normal_collinearity: f64,
    /// Sign of `N_bar . N` at the first grid point.
    pub epsilon: f64,
    pub epsilon_uniform: bool,
    /// Circular mean of the angle from `T` to `T_bar` measured towards `B`.
    pub theta_mean: f64,
    /// Largest deviation of that angle from its mean.
    pub theta_deviation: f64,
    /// Sup-norm of the mate condition, when the construction defines one.
    pub condition_residual: Option<f64>,
    pub accepted: bool,
}

pub const COLLINEARITY_TOL: f64 = 1e-6;
pub const ANGLE_TOL: f64 = 1e-5;

fn wrap_angle(a: f64) -> f64 {
    let r = a.rem_euclid(2.0 * std::f64::consts::PI);
    if r > std::f64::consts::PI {
        r - 2.0 * std::f64::consts::PI
    } else {
        r
    }
}

/// Builds a report from base and candidate frames sampled at matching points.
pub(crate) fn compare_frames(
    base_t: &[Vec3],
    base_n: &[Vec3],
    base_b: &[Vec3],
    cand_t: &[Vec3],
    cand_n: &[Vec3],
    condition_residual: Option<f64>,
) -> MateReport {
    let dots: Vec<f64> = base_n.iter().zip(cand_n).map(|(a, b)| a.dot(b)).collect();
    let epsilon = if dots[0] < 0.0 { -1.0 } else { 1.0 };
    let epsilon_uniform = dots.iter().all(|d| d * epsilon > 0.5);
    let normal_collinearity = dots.iter().fold(f64::INFINITY, |m, d| m.min(d.abs()));
    let angles: Vec<f64> = (0..base_t.len())
        .map(|i| cand_t[i].dot(&base_b[i]).atan2(cand_t[i].dot(&base_t[i])))
        .collect();
    let (ss, cs) = angles
        .iter()
        .fold((0.0, 0.0), |(s, c), a| (s + a.sin(), c + a.cos()));
    let theta_mean = ss.atan2(cs);
    let theta_deviation = angles
        .iter()
        .fold(0.0, |m: f64, a| m.max(wrap_angle(a - theta_mean).abs()));
    let accepted = epsilon_uniform
        && normal_collinearity > 1.0 - COLLINEARITY_TOL
        && theta_deviation < ANGLE_TOL;
    MateReport {
        normal_collinearity,
        epsilon,
        epsilon_uniform,
        theta_mean,
        theta_deviation,
        condition_residual,
        accepted,
    }
}

/// Frame of a candidate curve at `s`. Where the candidate has no Frenet
/// frame, `fallback` supplies the normal delivered by its construction.
fn candidate_frame(
    candidate: &Curve,
    s: f64,
    fallback: Option<Vec3>,
) -> Result<Option<(Vec3, Vec3)>> {
    let jet = candidate.jet(s)?;
    if let Some(f) = frame_from_jet(&jet) {
        return Ok(Some((f.t, f.n)));
    }
    let Some(normal) = fallback else {
        return Ok(None);
    };
    let speed = jet[1].norm();
    if !(speed > crate::curve::REGULARITY_FLOOR) {
        return Err(Error::NotRegular { at: s, speed });
    }
    let t = jet[1] / speed;
    let n = (normal - t * t.dot(&normal)).normalize();
    Ok(Some((t, n)))
}

fn verify_impl(
    base: &Curve,
    candidate: &Curve,
    fallback: Option<&dyn Fn(usize) -> Vec3>,
    condition_residual: Option<f64>,
) -> Result<MateReport> {
    let base = base.reparameterize_arclength()?;
    let data = frenet_apparatus(&base)?;
    let same_param = {
        let (a, b) = (base.domain(), candidate.domain());
        (a.0 - b.0).abs() < 1e-9 && (a.1 - b.1).abs() < 1e-9
    };
    let cand_params: Vec<f64> = if same_param {
        data.s.clone()
    } else {
        let (lo, hi) = candidate.domain();
        let (blo, bhi) = base.domain();
        data.s
            .iter()
            .map(|s| lo + (hi - lo) * (s - blo) / (bhi - blo))
            .collect()
    };
    let mut offsets = Vec::with_capacity(data.len());
    for (i, t) in cand_params.iter().enumerate() {
        offsets.push(candidate.position(*t)? - data.position[i]);
    }
    let drift = offsets
        .iter()
        .map(|d| (d - offsets[0]).norm())
        .fold(0.0, f64::max);
    if drift < 1e-10 * offsets[0].norm().max(1.0) {
        return Err(Error::DegenerateOffset);
    }
    let mut cand_t = Vec::with_capacity(data.len());
    let mut cand_n = Vec::with_capacity(data.len());
    let mut undefined = Vec::new();
    for (i, t) in cand_params.iter().enumerate() {
        match candidate_frame(candidate, *t, fallback.map(|f| f(i)))? {
            Some((tt, nn)) => {
                cand_t.push(tt);
                cand_n.push(nn);
            }
            None => undefined.push(*t),
        }
    }
    if !undefined.is_empty() {
        return Err(Error::FrameUndefined { at: undefined });
    }
    Ok(compare_frames(
        &data.t,
        &data.n,
        &data.b,
        &cand_t,
        &cand_n,
        condition_residual,
    ))
}

/// Compares the Frenet frames of `base` and `candidate`.
///
/// When both share a parameter domain they are compared point by point;
/// otherwise the candidate's domain is mapped linearly onto the base's.
pub fn verify_mate(base: &Curve, candidate: &Curve) -> Result<MateReport> {
    verify_impl(base, candidate, None, None)
}

/// As [`verify_mate`], but wherever the candidate is locally straight its
/// normal is taken to be the base normal, as in the offset construction.
pub fn verify_constructed_mate(base: &Curve, candidate: &Curve) -> Result<MateReport> {
    let unit = base.reparameterize_arclength()?;
    let data = frenet_apparatus(&unit)?;
    let normals = data.n.clone();
    verify_impl(base, candidate, Some(&move |i| normals[i]), None)
}

/// `lambda(s) = lambda0 - integral of v` and the offset curve
/// `beta = integral of V + lambda N`, on the base grid. The integral starts
/// from the base point `gamma(s_min)`, so `V = T` gives `gamma + lambda N`.
pub struct Offset {
    pub curve: Curve,
    pub lambda: Vec<f64>,
    pub data: FrenetData,
    pub coefficients: Vec<[f64; 3]>,
}

/// Offset construction along a unit-speed base. Fails with `DegenerateOffset`
/// when `lambda` vanishes identically.
pub fn offset_curve(curve: &Curve, field: &FrameField, lambda0: f64) -> Result<Offset> {
    let base = curve.reparameterize_arclength()?;
    let nodes = base.grid();
    let (frames, mids, mid_frames) = frames_with_midpoints(&base, &nodes)?;
    field.check_unit(&nodes)?;
    field.check_unit(&mids)?;
    let coefficients: Vec<[f64; 3]> = nodes.iter().map(|s| field.coefficients(*s)).collect();
    let v_nodes: Vec<f64> = coefficients.iter().map(|c| c[1]).collect();
    let v_mids: Vec<f64> = mids.iter().map(|s| field.coefficients(*s)[1]).collect();
    let lambda: Vec<f64> = cumulative_simpson_values(&nodes, &v_nodes, &v_mids, 0.0)
        .into_iter()
        .map(|i| lambda0 - i)
        .collect();
    if lambda.iter().all(|l| l.abs() < 1e-10) {
        return Err(Error::DegenerateOffset);
    }
    let vec_nodes: Vec<Vec3> = nodes
        .iter()
        .zip(&frames)
        .map(|(s, f)| field.vector(*s, f))
        .collect();
    let vec_mids: Vec<Vec3> = mids
        .iter()
        .zip(&mid_frames)
        .map(|(s, f)| field.vector(*s, f))
        .collect();
    let integral = cumulative_simpson_values(&nodes, &vec_nodes, &vec_mids, Vec3::zeros());
    let mut pos = Vec::with_capacity(nodes.len());
    let mut vel = Vec::with_capacity(nodes.len());
    for i in 0..nodes.len() {
        let f = &frames[i];
        let [u, _, w] = coefficients[i];
        let l = lambda[i];
        pos.push(frames[0].position + integral[i] + f.n * l);
        // lambda' = -v cancels the N component of V
        vel.push(f.t * (u - l * f.kappa) + f.b * (w + l * f.tau));
    }
    let mut data = FrenetData {
        exact: base.is_exact(),
        ..Default::default()
    };
    for (s, f) in nodes.iter().zip(&frames) {
        data.s.push(*s);
        data.position.push(f.position);
        data.t.push(f.t);
        data.n.push(f.n);
        data.b.push(f.b);
        data.kappa.push(f.kappa);
        data.tau.push(f.tau);
        data.speed.push(f.speed);
    }
    Ok(Offset {
        curve: Curve::from_uniform_samples(&nodes, pos, Some(vel), None, false, base.samples()),
        lambda,
        data,
        coefficients,
    })
}

/// Sup-norm over the grid of `lambda (kappa sin theta + tau cos theta) - (u sin theta - w cos theta)`,
/// the mate condition multiplied through by `cos theta`.
pub fn mate_condition_residual(offset: &Offset, theta: f64) -> f64 {
    let (sn, cs) = theta.sin_cos();
    let d = &offset.data;
    sup_abs((0..d.len()).map(|i| {
        let [u, _, w] = offset.coefficients[i];
        offset.lambda[i] * (d.kappa[i] * sn + d.tau[i] * cs) - (u * sn - w * cs)
    }))
}

fn mate_report(offset: &Offset, theta: f64) -> Result<MateReport> {
    let d = &offset.data;
    let mut cand_t = Vec::with_capacity(d.len());
    let mut cand_n = Vec::with_capacity(d.len());
    for (i, s) in d.s.iter().enumerate() {
        let (t, n) = candidate_frame(&offset.curve, *s, Some(d.n[i]))?.expect("fallback supplied");
        cand_t.push(t);
        cand_n.push(n);
    }
    Ok(compare_frames(
        &d.t,
        &d.n,
        &d.b,
        &cand_t,
        &cand_n,
        Some(mate_condition_residual(offset, theta)),
    ))
}

/// V-Bertrand mate `beta = integral of V + lambda N` with `lambda(s_min) = lambda0`.
///
/// The mate condition at angle `theta` must hold to the curve's default
/// tolerance, otherwise `ConditionViolated` is returned.
pub fn v_bertrand_mate(
    curve: &Curve,
    field: &FrameField,
    lambda0: f64,
    theta: f64,
) -> Result<(Curve, MateReport)> {
    let offset = offset_curve(curve, field, lambda0)?;
    let tolerance = offset.data.default_tolerance();
    let residual = mate_condition_residual(&offset, theta);
    if !(residual < tolerance) {
        return Err(Error::ConditionViolated {
            residual,
            tolerance,
        });
    }
    let report = mate_report(&offset, theta)?;
    Ok((offset.curve, report))
}

/// Offset mate without a prescribed angle; the report carries the measured angle.
pub fn offset_mate(curve: &Curve, field: &FrameField, lambda0: f64) -> Result<(Curve, MateReport)> {
    let offset = offset_curve(curve, field, lambda0)?;
    let report = mate_report(&offset, 0.0)?;
    let residual = mate_condition_residual(&offset, report.theta_mean);
    Ok((
        offset.curve,
        MateReport {
            condition_residual: Some(residual),
            ..report
        },
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchId {
    OnePlus,
    OneMinus,
    TwoPlus,
    TwoMinus,
}

impl BranchId {
    pub const ALL: [BranchId; 4] = [
        BranchId::OnePlus,
        BranchId::OneMinus,
        BranchId::TwoPlus,
        BranchId::TwoMinus,
    ];

    pub fn label(self) -> &'static str {
        match self {
            BranchId::OnePlus => "1+",
            BranchId::OneMinus => "1-",
            BranchId::TwoPlus => "2+",
            BranchId::TwoMinus => "2-",
        }
    }
}

/// One `(u, w)` candidate for `V = uT + wB`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Branch {
    pub id: BranchId,
    pub u: f64,
    pub w: f64,
    /// `|u| <= 1` and `u tan(theta) - w = f`.
    pub valid: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FBertrandCoefficients {
    pub f: f64,
    pub theta: f64,
    pub u_plus: f64,
    pub u_minus: f64,
    /// Branches `1+, 1-` pair with `u_plus`; `2+, 2-` with `u_minus`.
    pub branches: [Branch; 4],
}

impl FBertrandCoefficients {
    pub fn branch(&self, id: BranchId) -> Branch {
        self.branches[id as usize]
    }

    pub fn valid(&self) -> impl Iterator<Item = &Branch> {
        self.branches.iter().filter(|b| b.valid)
    }
}

pub const BRANCH_TOL: f64 = 1e-8;

/// Solves `u^2 + w^2 = 1`, `u tan(theta) - w = f` for the four labelled branches
/// `u = (f tan(theta) +- sqrt(1 + tan^2(theta) - f^2)) / (1 + tan^2(theta))`,
/// `w = +- sqrt(1 - u^2)`.
pub fn f_bertrand_coefficients(f: f64, theta: f64) -> Result<FBertrandCoefficients> {
    if !(theta.abs() < FRAC_PI_2) || !f.is_finite() {
        return Err(Error::DegenerateParameters(format!(
            "need |theta| < pi/2 and finite f, got theta = {theta}, f = {f}"
        )));
    }
    let tan = theta.tan();
    let sec2 = 1.0 + tan * tan;
    let disc = sec2 - f * f;
    if disc < 0.0 {
        return Err(Error::NoRealBranch(disc));
    }
    let root = disc.sqrt();
    let u_plus = (f * tan + root) / sec2;
    let u_minus = (f * tan - root) / sec2;
    let make = |id: BranchId, u: f64, sign: f64| {
        // The relation fixes w; the branch is valid when its sign matches.
        let w_rel = u * tan - f;
        let w_pyth = sign * (1.0 - u * u).max(0.0).sqrt();
        let scale = f.abs().max(1.0);
        let valid =
            u.abs() <= 1.0 + BRANCH_TOL && (w_rel.abs() < BRANCH_TOL * scale || w_rel * sign > 0.0);
        let w = if valid {
            if w_rel.abs() < BRANCH_TOL * scale {
                sign * 0.0
            } else {
                w_rel
            }
        } else {
            w_pyth
        };
        Branch { id, u, w, valid }
    };
    Ok(FBertrandCoefficients {
        f,
        theta,
        u_plus,
        u_minus,
        branches: [
            make(BranchId::OnePlus, u_plus, 1.0),
            make(BranchId::OneMinus, u_plus, -1.0),
            make(BranchId::TwoPlus, u_minus, 1.0),
            make(BranchId::TwoMinus, u_minus, -1.0),
        ],
    })
}

#[derive(Debug, Clone)]
pub enum BranchOutcome {
    Mate { curve: Curve, report: MateReport },
    Omitted { reason: String },
}

#[derive(Debug, Clone)]
pub struct BranchMate {
    pub id: BranchId,
    /// Coefficients at `s_min`.
    pub u: f64,
    pub w: f64,
    pub outcome: BranchOutcome,
}

/// Shared offset `lambda = f / (kappa tan(theta) + tau)`; must be constant along the curve.
fn f_offset(data: &FrenetData, f: &dyn Fn(f64) -> f64, theta: f64) -> Result<f64> {
    let tan = theta.tan();
    let mut values = Vec::with_capacity(data.len());
    for i in 0..data.len() {
        let denom = data.kappa[i] * tan + data.tau[i];
        if denom.abs() < 1e-12 {
            return Err(Error::NotBertrand(format!(
                "kappa tan(theta) + tau vanishes at s = {}",
                data.s[i]
            )));
        }
        values.push(f(data.s[i]) / denom);
    }
    let tolerance = data.default_tolerance();
    let spread = crate::frenet::spread(&values);
    if !(spread < tolerance) {
        return Err(Error::ConditionViolated {
            residual: spread,
            tolerance,
        });
    }
    Ok(values.iter().sum::<f64>() / values.len() as f64)
}

/// The f-Bertrand mates for constant `f`.
pub fn f_bertrand_mates(curve: &Curve, f: f64, theta: f64) -> Result<Vec<BranchMate>> {
    f_bertrand_mates_with(curve, &move |_| f, theta)
}

/// The f-Bertrand mates for `f` varying along the arc-length parameter.
/// Every branch is built whose coefficients are valid along the whole curve;
/// the others are reported as omitted.
pub fn f_bertrand_mates_with(
    curve: &Curve,
    f: &dyn Fn(f64) -> f64,
    theta: f64,
) -> Result<Vec<BranchMate>> {
    let base = curve.reparameterize_arclength()?;
    let data = frenet_apparatus(&base)?;
    let lambda = f_offset(&data, f, theta)?;
    let grid = &data.s;
    let mut tables = Vec::with_capacity(grid.len());
    for s in grid {
        tables.push(f_bertrand_coefficients(f(*s), theta)?);
    }
    let mut out = Vec::with_capacity(4);
    for id in BranchId::ALL {
        let first = tables[0].branch(id);
        let invalid_at = grid
            .iter()
            .zip(&tables)
            .find(|(_, t)| !t.branch(id).valid)
            .map(|(s, _)| *s);
        let outcome = if let Some(s) = invalid_at {
            let b = tables[grid.iter().position(|x| *x == s).unwrap()].branch(id);
            BranchOutcome::Omitted {
                reason: format!(
                    "u tan(theta) - w = {:.6} differs from f at s = {s}",
                    b.u * theta.tan() - b.w
                ),
            }
        } else {
            let field = if let Some(fc) = constant_value(&tables) {
                let b = fc.branch(id);
                FrameField::constant(b.u, 0.0, b.w)
            } else {
                let f = ClonedFn::new(f, &base);
                FrameField::from_fn(move |s| {
                    let b = f_bertrand_coefficients(f.eval(s), theta)
                        .map(|c| c.branch(id))
                        .unwrap_or(first);
                    [b.u, 0.0, b.w]
                })
            };
            let offset = offset_curve(&base, &field, lambda)?;
            let report = mate_report(&offset, theta)?;
            BranchOutcome::Mate {
                curve: offset.curve,
                report,
            }
        };
        out.push(BranchMate {
            id,
            u: first.u,
            w: first.w,
            outcome,
        });
    }
    Ok(out)
}

fn constant_value(tables: &[FBertrandCoefficients]) -> Option<&FBertrandCoefficients> {
    let f0 = tables[0].f;
    tables.iter().all(|t| t.f == f0).then(|| &tables[0])
}

/// Owned, sampled copy of a borrowed `f` so a field closure can outlive it.
struct ClonedFn {
    table: crate::interp::UniformSamples<f64>,
}

impl ClonedFn {
    fn new(f: &dyn Fn(f64) -> f64, base: &Curve) -> Self {
        let (lo, hi) = base.domain();
        let n = 8 * base.samples();
        let step = (hi - lo) / (n - 1) as f64;
        let values = (0..n).map(|i| f(lo + step * i as f64)).collect();
        Self {
            table: crate::interp::UniformSamples::new(lo, step, values),
        }
    }

    fn eval(&self, s: f64) -> f64 {
        self.table.eval(s, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{build_curve, CurveSpec};
    use crate::frenet::{integrate_frenet_ode, InitialFrame};
    use std::f64::consts::{FRAC_PI_4, PI};

    fn helix(a: f64, b: f64) -> Curve {
        build_curve(&CurveSpec::helix(a, b)).unwrap()
    }

    fn data(c: &Curve) -> FrenetData {
        frenet_apparatus(c).unwrap()
    }

    #[test]
    fn helix_fits_its_own_coefficients() {
        for (a, b) in [(1.0, 1.0), (2.0, 1.0), (0.5, 3.0)] {
            let fit = detect_bertrand(&data(&helix(a, b)), BertrandKind::Bertrand, 1e-6).unwrap();
            assert!(
                (fit.lambda - a).abs() < 1e-9 && (fit.mu - b).abs() < 1e-9,
                "{fit:?}"
            );
            assert!(fit.residual < 1e-10);
            let bb = detect_bertrand(&data(&helix(a, b)), BertrandKind::BBertrand, 1e-6).unwrap();
            assert!((bb.lambda + a).abs() < 1e-9 && (bb.mu + b).abs() < 1e-9);
        }
    }

    #[test]
    fn circle_is_planar_special() {
        let c = build_curve(&CurveSpec::circle(2.0)).unwrap();
        let fit = detect_bertrand(&data(&c), BertrandKind::Bertrand, 1e-6).unwrap();
        assert!(fit.planar_special);
        assert!((fit.lambda - 2.0).abs() < 1e-12);
        assert_eq!(fit.mu, 0.0);
    }

    #[test]
    fn salkowski_is_bertrand_not_b_bertrand() {
        let c = integrate_frenet_ode(|_| 1.0, |s| s, InitialFrame::default(), 4.0).unwrap();
        let fit = detect_bertrand(&data(&c), BertrandKind::Bertrand, 1e-6).unwrap();
        assert!((fit.lambda - 1.0).abs() < 1e-9 && fit.mu.abs() < 1e-9);
        let r = detect_bertrand(&data(&c), BertrandKind::BBertrand, 1e-6).unwrap_err();
        assert_eq!(r.reason, RejectReason::VanishingCoefficient);
        assert!(r.residual > 0.1);
    }

    #[test]
    fn anti_salkowski_is_b_bertrand_not_bertrand() {
        let c = integrate_frenet_ode(|s| s + 2.0, |_| 1.0, InitialFrame::default(), 4.0).unwrap();
        let fit = detect_bertrand(&data(&c), BertrandKind::BBertrand, 1e-6).unwrap();
        assert!(fit.lambda.abs() < 1e-9 && (fit.mu + 1.0).abs() < 1e-9);
        let r = detect_bertrand(&data(&c), BertrandKind::Bertrand, 1e-6).unwrap_err();
        assert!(r.residual > 0.1);
    }

    #[test]
    fn offset_mate_of_helix_is_straight_line() {
        let h = helix(1.0, 1.0);
        let (mate, rep) = v_bertrand_mate(&h, &FrameField::tangent(), 1.0, FRAC_PI_4).unwrap();
        assert!(rep.accepted);
        assert!(rep.normal_collinearity > 1.0 - 1e-9);
        for s in h.grid() {
            let p = mate.position(s).unwrap();
            let expect = Vec3::new(0.0, 0.0, s / 2f64.sqrt());
            assert!((p - expect).norm() < 1e-8, "{s} {p:?}");
        }
    }

    #[test]
    fn condition_violation_is_reported() {
        let r = v_bertrand_mate(&helix(1.0, 1.0), &FrameField::tangent(), 1.0, 0.2);
        assert!(matches!(r, Err(Error::ConditionViolated { .. })));
    }

    #[test]
    fn offset_with_lambda_two_on_unit_helix() {
        // tan(theta) = lambda tau / (1 - lambda kappa) with kappa = tau = 1/2
        let h = helix(1.0, 1.0);
        let (_, rep) = offset_mate(&h, &FrameField::tangent(), 2.0).unwrap();
        assert!(rep.accepted);
        assert!((rep.theta_mean.abs() - FRAC_PI_2).abs() < 1e-8, "{rep:?}");
        assert!(rep.condition_residual.unwrap() < 1e-8);
    }

    #[test]
    fn normal_field_mate_with_varying_offset() {
        // helix(2, 1): kappa = 2/5, tau = 1/5; V = N gives lambda = -s
        let h = build_curve(&CurveSpec::helix(2.0, 1.0).with_domain(1.0, 10.0)).unwrap();
        let (_, rep) = offset_mate(&h, &FrameField::normal(), -1.0).unwrap();
        assert!(rep.epsilon_uniform);
        assert!(rep.normal_collinearity > 1.0 - 1e-8);
    }

    #[test]
    fn translation_is_degenerate() {
        let h = helix(1.0, 1.0);
        let moved = h.transformed(nalgebra::Rotation3::identity(), Vec3::new(1.0, 2.0, 3.0));
        assert!(matches!(
            verify_mate(&h, &moved),
            Err(Error::DegenerateOffset)
        ));
    }

    #[test]
    fn straight_mate_needs_construction_frame() {
        let h = helix(1.0, 1.0);
        let (mate, _) = v_bertrand_mate(&h, &FrameField::tangent(), 1.0, FRAC_PI_4).unwrap();
        assert!(matches!(
            verify_mate(&h, &mate),
            Err(Error::FrameUndefined { .. })
        ));
        assert!(verify_constructed_mate(&h, &mate).unwrap().accepted);
    }

    #[test]
    fn coefficient_branches_for_unit_offset() {
        let theta = PI / 6.0;
        let c = f_bertrand_coefficients(1.0, theta).unwrap();
        let t = theta.tan();
        assert!((c.u_plus - 2.0 * t / (1.0 + t * t)).abs() < 1e-12);
        assert!(c.u_minus.abs() < 1e-12);
        let valid: Vec<_> = c.valid().map(|b| b.id).collect();
        assert_eq!(valid, vec![BranchId::OneMinus, BranchId::TwoMinus]);
        let b = c.branch(BranchId::OneMinus);
        assert!((b.w + (2.0 * theta).cos()).abs() < 1e-12);
        let b = c.branch(BranchId::TwoMinus);
        assert!((b.w + 1.0).abs() < 1e-12);
        for b in c.valid() {
            assert!((b.u * t - b.w - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_offset_branches() {
        let theta = 0.4;
        let c = f_bertrand_coefficients(0.0, theta).unwrap();
        assert!((c.u_plus - theta.cos()).abs() < 1e-12);
        assert!((c.u_minus + theta.cos()).abs() < 1e-12);
        let valid: Vec<_> = c.valid().map(|b| b.id).collect();
        assert_eq!(valid, vec![BranchId::OnePlus, BranchId::TwoMinus]);
    }

    #[test]
    fn branch_errors() {
        assert!(matches!(
            f_bertrand_coefficients(3.0, 0.1),
            Err(Error::NoRealBranch(_))
        ));
        assert!(matches!(
            f_bertrand_coefficients(1.0, FRAC_PI_2),
            Err(Error::DegenerateParameters(_))
        ));
    }

    #[test]
    fn f_mates_of_helix() {
        let mates = f_bertrand_mates(&helix(2.0, 1.0), 1.0, PI / 6.0).unwrap();
        let built: Vec<_> = mates
            .iter()
            .filter_map(|m| match &m.outcome {
                BranchOutcome::Mate { report, .. } => Some((m.id, report.clone())),
                BranchOutcome::Omitted { .. } => None,
            })
            .collect();
        assert_eq!(built.len(), 2);
        for (_, rep) in &built {
            assert!(rep.accepted, "{rep:?}");
            assert!(rep.condition_residual.unwrap() < 1e-9);
        }
    }
}
