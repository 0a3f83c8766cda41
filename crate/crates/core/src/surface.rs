//! Bertrand surfaces: the family of offset mates `u(t) integral of T + w(t) integral of B + lambda N`
//! swept over the offset parameter `t`, and their triangle meshes.

use std::fmt::Write as _;

use crate::bertrand::{
    detect_any, offset_mate, verify_constructed_mate, BertrandFit, BranchId, MateReport,
};
use crate::curve::{uniform_grid, Curve, Vec3};
use crate::direction::FrameField;
use crate::error::{Error, Result};
use crate::frenet::frame_at;
use crate::quadrature::{cumulative_simpson_values, midpoints};

/// Margin kept from the edge of the real branch domain by the default `t` range.
pub const DEFAULT_T_MARGIN: f64 = 1e-3;
/// Requested `t` values must stay this far inside the real branch domain.
pub const BRANCH_EDGE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceParams {
    pub branch: BranchId,
    /// Defaults to the real branch domain shrunk by [`DEFAULT_T_MARGIN`].
    pub t_range: Option<(f64, f64)>,
    pub nt: usize,
    pub ns: usize,
    /// Offset along the normal; defaults to the fitted `mu`.
    pub lambda: Option<f64>,
}

impl SurfaceParams {
    pub fn new(branch: BranchId, nt: usize, ns: usize) -> Self {
        Self {
            branch,
            t_range: None,
            nt,
            ns,
            lambda: None,
        }
    }

    pub fn with_t_range(mut self, lo: f64, hi: f64) -> Self {
        self.t_range = Some((lo, hi));
        self
    }
}

#[derive(Debug, Clone)]
pub struct SurfaceGrid {
    pub t_values: Vec<f64>,
    pub s_values: Vec<f64>,
    /// Row-major in `(t, s)`: `points[i * ns + j]` is at `(t_values[i], s_values[j])`.
    pub points: Vec<Vec3>,
    /// `(u, w)` of each row.
    pub coefficients: Vec<(f64, f64)>,
    pub branch: BranchId,
    pub theta: f64,
    pub lambda: f64,
}

impl SurfaceGrid {
    pub fn nt(&self) -> usize {
        self.t_values.len()
    }

    pub fn ns(&self) -> usize {
        self.s_values.len()
    }

    pub fn point(&self, i: usize, j: usize) -> Vec3 {
        self.points[i * self.ns() + j]
    }

    pub fn row(&self, i: usize) -> &[Vec3] {
        let ns = self.ns();
        &self.points[i * ns..(i + 1) * ns]
    }
}

/// `u(t) = (t tan(theta) +- sqrt(1 + tan^2(theta) - t^2)) / (1 + tan^2(theta))` and
/// `w(t) = +-sqrt(1 - u^2)` for the requested branch.
pub fn branch_coefficients(branch: BranchId, t: f64, theta: f64) -> Result<(f64, f64)> {
    let tan = theta.tan();
    let sec2 = 1.0 + tan * tan;
    let limit = sec2.sqrt();
    let disc = sec2 - t * t;
    if disc < 0.0 {
        return Err(Error::OutOfBranchDomain { t, limit });
    }
    let (u_sign, w_sign) = match branch {
        BranchId::OnePlus => (1.0, 1.0),
        BranchId::OneMinus => (1.0, -1.0),
        BranchId::TwoPlus => (-1.0, 1.0),
        BranchId::TwoMinus => (-1.0, -1.0),
    };
    let u = (t * tan + u_sign * disc.sqrt()) / sec2;
    let w = w_sign * (1.0 - u * u).max(0.0).sqrt();
    Ok((u, w))
}

fn t_values(params: &SurfaceParams, theta: f64) -> Result<Vec<f64>> {
    let limit = (1.0 + theta.tan().powi(2)).sqrt();
    let (lo, hi) = params
        .t_range
        .unwrap_or((-limit + DEFAULT_T_MARGIN, limit - DEFAULT_T_MARGIN));
    for t in [lo, hi] {
        if !(t.abs() <= limit - BRANCH_EDGE) {
            return Err(Error::OutOfBranchDomain { t, limit });
        }
    }
    if params.nt < 2 || params.ns < 2 || !(hi >= lo) {
        return Err(Error::InvalidSpec(format!(
            "surface resolution {}x{} over t in [{lo}, {hi}]",
            params.nt, params.ns
        )));
    }
    Ok(uniform_grid((lo, hi), params.nt))
}

/// Position, velocity and the normal used for the offset, in the parameter of `curve`.
struct Sweep<'a> {
    curve: &'a Curve,
    normal: Box<dyn Fn(f64) -> Result<Vec3> + 'a>,
}

impl Sweep<'_> {
    /// Returns `(s_values, integral of T, integral of B, N)` on `ns` nodes.
    /// `T` and `B` are integrated against arc length, with Simpson cells no
    /// wider than the curve's own sampling step.
    #[allow(clippy::type_complexity)]
    fn integrals(&self, ns: usize) -> Result<(Vec<f64>, Vec<Vec3>, Vec<Vec3>, Vec<Vec3>)> {
        let domain = self.curve.domain();
        let stride = (self.curve.samples() - 1).div_ceil(ns - 1).max(1);
        let fine = uniform_grid(domain, (ns - 1) * stride + 1);
        let mids = midpoints(&fine);
        let binormal_rate = |s: f64| -> Result<Vec3> {
            let v = self.curve.derivative(s, 1)?;
            let n = (self.normal)(s)?;
            Ok(v.cross(&n))
        };
        let at_nodes = fine
            .iter()
            .map(|s| binormal_rate(*s))
            .collect::<Result<Vec<_>>>()?;
        let at_mids = mids
            .iter()
            .map(|s| binormal_rate(*s))
            .collect::<Result<Vec<_>>>()?;
        let int_b = cumulative_simpson_values(&fine, &at_nodes, &at_mids, Vec3::zeros());
        let origin = self.curve.position(domain.0)?;
        let mut s_values = Vec::with_capacity(ns);
        let mut int_t = Vec::with_capacity(ns);
        let mut int_bs = Vec::with_capacity(ns);
        let mut normals = Vec::with_capacity(ns);
        for j in 0..ns {
            let s = fine[j * stride];
            s_values.push(s);
            int_t.push(self.curve.position(s)? - origin);
            int_bs.push(int_b[j * stride]);
            normals.push((self.normal)(s)?);
        }
        Ok((s_values, int_t, int_bs, normals))
    }
}

fn assemble(
    sweep: Sweep<'_>,
    params: &SurfaceParams,
    theta: f64,
    lambda: f64,
) -> Result<SurfaceGrid> {
    let t_values = t_values(params, theta)?;
    let (s_values, int_t, int_b, normals) = sweep.integrals(params.ns)?;
    let mut points = Vec::with_capacity(t_values.len() * s_values.len());
    let mut coefficients = Vec::with_capacity(t_values.len());
    for &t in &t_values {
        let (u, w) = branch_coefficients(params.branch, t, theta)?;
        coefficients.push((u, w));
        for j in 0..s_values.len() {
            points.push(int_t[j] * u + int_b[j] * w + normals[j] * lambda);
        }
    }
    Ok(SurfaceGrid {
        t_values,
        s_values,
        points,
        coefficients,
        branch: params.branch,
        theta,
        lambda,
    })
}

/// Surface `phi(t, s) = u(t) integral of T + w(t) integral of B + lambda N` over a Bertrand curve,
/// with `tan(theta) = lambda_fit / mu_fit`.
pub fn bertrand_surface(
    base: &Curve,
    fit: &BertrandFit,
    params: &SurfaceParams,
) -> Result<SurfaceGrid> {
    if fit.planar_special || fit.mu == 0.0 {
        return Err(Error::NotBertrand(
            "surface needs a fit with nonzero mu (tan(theta) = lambda / mu)".into(),
        ));
    }
    let theta = (fit.lambda / fit.mu).atan();
    let lambda = params.lambda.unwrap_or(fit.mu);
    if lambda == 0.0 {
        return Err(Error::NotBertrand("zero offset".into()));
    }
    let unit = base.reparameterize_arclength()?;
    let sweep = Sweep {
        curve: &unit,
        normal: Box::new(|s| Ok(frame_at(&unit, s)?.n)),
    };
    assemble(sweep, params, theta, lambda)
}

/// Rebuilds each row on the base curve's own grid and compares frames.
pub fn verify_rows(base: &Curve, grid: &SurfaceGrid) -> Result<Vec<MateReport>> {
    grid.coefficients
        .iter()
        .map(|&(u, w)| {
            offset_mate(base, &FrameField::constant(u, 0.0, w), grid.lambda).map(|(_, r)| r)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairReport {
    pub mate: MateReport,
    /// Mean of `(beta - alpha) . N_alpha`.
    pub offset: f64,
    /// Angle used for the second surface.
    pub theta_b: f64,
}

/// Surfaces over a mate pair `(alpha, beta)`.
///
/// `beta` is swept with the frame delivered by the mate relation:
/// `T_beta` from its velocity, `N_beta = epsilon N_alpha`, and offset
/// `-epsilon * offset` back towards `alpha`.
pub fn surface_mate_pair(
    alpha: &Curve,
    beta: &Curve,
    params: &SurfaceParams,
) -> Result<(SurfaceGrid, SurfaceGrid, PairReport)> {
    let mate = match verify_constructed_mate(alpha, beta) {
        Ok(r) if r.accepted => r,
        Ok(r) => {
            return Err(Error::NotMates(format!(
                "normal collinearity {:.3e}, angle deviation {:.3e}",
                1.0 - r.normal_collinearity,
                r.theta_deviation
            )))
        }
        Err(Error::DegenerateOffset) => return Err(Error::NotMates("zero offset".into())),
        Err(e) => return Err(e),
    };
    let unit = alpha.reparameterize_arclength()?;
    let data = crate::frenet::frenet_apparatus(&unit)?;
    let fit = detect_any(&data, data.default_tolerance()).map_err(|r| {
        Error::NotBertrand(format!(
            "fit residual {:e}",
            r[0].residual.min(r[1].residual)
        ))
    })?;
    let surface_a = bertrand_surface(&unit, &fit, params)?;

    let (alo, ahi) = unit.domain();
    let (blo, bhi) = beta.domain();
    let to_alpha = |s: f64| alo + (ahi - alo) * (s - blo) / (bhi - blo);
    // beta - alpha = c + offset * N_alpha for some constant c
    let mut diffs = Vec::with_capacity(data.len());
    for (i, s) in data.s.iter().enumerate() {
        let sb = blo + (bhi - blo) * (s - alo) / (ahi - alo);
        diffs.push(beta.position(sb)? - data.position[i]);
    }
    let n = data.len() as f64;
    let d_mean = diffs.iter().sum::<Vec3>() / n;
    let n_mean = data.n.iter().sum::<Vec3>() / n;
    let (num, den) = diffs
        .iter()
        .zip(&data.n)
        .fold((0.0, 0.0), |(a, b), (d, nn)| {
            let dn = nn - n_mean;
            (a + (d - d_mean).dot(&dn), b + dn.norm_squared())
        });
    if den < 1e-12 * n {
        return Err(Error::NotMates(
            "principal normal is constant; offset undetermined".into(),
        ));
    }
    let offset = num / den;
    let eps = mate.epsilon;
    let theta_b = {
        let t = -mate.theta_mean;
        (t.sin() / t.cos()).atan()
    };
    let sweep = Sweep {
        curve: beta,
        normal: Box::new(|s| Ok(frame_at(&unit, to_alpha(s).clamp(alo, ahi))?.n * eps)),
    };
    let params_b = SurfaceParams {
        lambda: Some(-eps * offset),
        ..params.clone()
    };
    let surface_b = assemble(sweep, &params_b, theta_b, -eps * offset)?;
    Ok((
        surface_a,
        surface_b,
        PairReport {
            mate,
            offset,
            theta_b,
        },
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub vertices: Vec<Vec3>,
    /// Zero-based vertex indices.
    pub triangles: Vec<[usize; 3]>,
}

impl Mesh {
    /// Wavefront OBJ text with only `v` and `f` records.
    pub fn to_obj(&self) -> String {
        let mut out = String::new();
        for v in &self.vertices {
            let _ = writeln!(out, "v {:.16e} {:.16e} {:.16e}", v.x, v.y, v.z);
        }
        for [a, b, c] in &self.triangles {
            let _ = writeln!(out, "f {} {} {}", a + 1, b + 1, c + 1);
        }
        out
    }
}

/// Two triangles per grid cell, wound the same way in the `(t, s)` parameter plane.
pub fn to_mesh(grid: &SurfaceGrid) -> Result<Mesh> {
    let (nt, ns) = (grid.nt(), grid.ns());
    if nt < 2 || ns < 2 || grid.points.len() != nt * ns {
        return Err(Error::IncompleteGrid(format!(
            "{} points for a {nt}x{ns} grid",
            grid.points.len()
        )));
    }
    if let Some(k) = grid
        .points
        .iter()
        .position(|p| !p.iter().all(|x| x.is_finite()))
    {
        return Err(Error::IncompleteGrid(format!(
            "non-finite point at row {}, column {}",
            k / ns,
            k % ns
        )));
    }
    // Every row starts at the same point (the integrals vanish at s_min), so
    // cells touching the first column may be slivers; a row whose own points
    // repeat cannot be meshed.
    let scale = grid.points.iter().fold(1.0f64, |m, p| m.max(p.norm()));
    for i in 0..nt {
        if let Some(j) = grid
            .row(i)
            .windows(2)
            .position(|w| (w[1] - w[0]).norm() <= 1e-12 * scale)
        {
            return Err(Error::IncompleteGrid(format!(
                "repeated point in row {i} at column {j}"
            )));
        }
    }
    let mut triangles = Vec::with_capacity(2 * (nt - 1) * (ns - 1));
    for i in 0..nt - 1 {
        for j in 0..ns - 1 {
            let v00 = i * ns + j;
            let (v01, v10, v11) = (v00 + 1, v00 + ns, v00 + ns + 1);
            triangles.push([v00, v10, v11]);
            triangles.push([v00, v11, v01]);
        }
    }
    Ok(Mesh {
        vertices: grid.points.clone(),
        triangles,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bertrand::{detect_bertrand, v_bertrand_mate, BertrandKind};
    use crate::curve::{build_curve, CurveSpec};
    use crate::frenet::frenet_apparatus;
    use std::collections::HashMap;

    fn helix_fit(a: f64, b: f64) -> (Curve, BertrandFit) {
        let h = build_curve(&CurveSpec::helix(a, b)).unwrap();
        let fit =
            detect_bertrand(&frenet_apparatus(&h).unwrap(), BertrandKind::Bertrand, 1e-6).unwrap();
        (h, fit)
    }

    fn closed_form(t: f64, s: f64) -> Vec3 {
        let root = (2.0 - t * t).sqrt();
        let u = (t + root) / 2.0;
        let w = (1.0 - t * root).max(0.0).sqrt() / 2f64.sqrt();
        let (a, b) = (u - w - 1.0, u + w);
        let q = s / 2f64.sqrt();
        Vec3::new(a * q.cos(), a * q.sin(), b * q)
    }

    #[test]
    fn unit_helix_surface_matches_closed_form() {
        let (h, fit) = helix_fit(1.0, 1.0);
        let grid =
            bertrand_surface(&h, &fit, &SurfaceParams::new(BranchId::OnePlus, 10, 100)).unwrap();
        for i in 0..grid.nt() {
            let t = grid.t_values[i];
            let shift = grid.point(i, 0) - closed_form(t, 0.0);
            for j in 0..grid.ns() {
                let expect = closed_form(t, grid.s_values[j]) + shift;
                assert!((grid.point(i, j) - expect).norm() < 1e-6);
            }
            let (u, w) = grid.coefficients[i];
            assert!((u * u + w * w - 1.0).abs() < 1e-10);
        }
        let mesh = to_mesh(&grid).unwrap();
        assert_eq!(mesh.triangles.len(), 1782);
    }

    #[test]
    fn row_at_unit_offset_is_classical_mate() {
        let (h, fit) = helix_fit(1.0, 1.0);
        let params = SurfaceParams::new(BranchId::OnePlus, 3, 64).with_t_range(0.0, 1.0);
        let grid = bertrand_surface(&h, &fit, &params).unwrap();
        let (u, w) = grid.coefficients[2];
        assert!((u - 1.0).abs() < 1e-12 && w.abs() < 1e-7);
        for (j, s) in grid.s_values.iter().enumerate() {
            let p = grid.point(2, j) - grid.point(2, 0);
            assert!((p - Vec3::new(0.0, 0.0, s / 2f64.sqrt())).norm() < 1e-6);
        }
    }

    #[test]
    fn rows_of_second_branch_are_mates() {
        let (h, fit) = helix_fit(2.0, 1.0);
        let params = SurfaceParams::new(BranchId::TwoMinus, 9, 64).with_t_range(-1.0, 1.0);
        let grid = bertrand_surface(&h, &fit, &params).unwrap();
        for rep in verify_rows(&h, &grid).unwrap() {
            assert!(
                rep.accepted && rep.normal_collinearity > 1.0 - 1e-5,
                "{rep:?}"
            );
        }
    }

    #[test]
    fn out_of_domain_offset() {
        let (h, fit) = helix_fit(1.0, 1.0);
        let params = SurfaceParams::new(BranchId::OnePlus, 4, 16).with_t_range(-2.0, 0.0);
        assert!(matches!(
            bertrand_surface(&h, &fit, &params),
            Err(Error::OutOfBranchDomain { .. })
        ));
    }

    #[test]
    fn mesh_shape_and_edges() {
        let (h, fit) = helix_fit(1.0, 1.0);
        let grid =
            bertrand_surface(&h, &fit, &SurfaceParams::new(BranchId::OnePlus, 2, 2)).unwrap();
        assert_eq!(to_mesh(&grid).unwrap().triangles.len(), 2);

        let grid =
            bertrand_surface(&h, &fit, &SurfaceParams::new(BranchId::OnePlus, 5, 7)).unwrap();
        let mesh = to_mesh(&grid).unwrap();
        let mut edges: HashMap<(usize, usize), Vec<(usize, usize)>> = HashMap::new();
        for [a, b, c] in &mesh.triangles {
            for (p, q) in [(*a, *b), (*b, *c), (*c, *a)] {
                edges.entry((p.min(q), p.max(q))).or_default().push((p, q));
            }
        }
        for ((p, q), uses) in edges {
            let interior = {
                let (ip, jp, iq, jq) = (p / 7, p % 7, q / 7, q % 7);
                !((ip == iq && (ip == 0 || ip == 4)) || (jp == jq && (jp == 0 || jp == 6)))
            };
            if interior {
                assert_eq!(uses.len(), 2);
                // opposite directions: consistent winding
                assert_ne!(uses[0], uses[1]);
            } else {
                assert_eq!(uses.len(), 1);
            }
        }
    }

    #[test]
    fn degenerate_row_rejected() {
        let (h, fit) = helix_fit(1.0, 1.0);
        let mut grid =
            bertrand_surface(&h, &fit, &SurfaceParams::new(BranchId::OnePlus, 3, 8)).unwrap();
        let p = grid.point(1, 0);
        for j in 0..8 {
            grid.points[8 + j] = p;
        }
        assert!(matches!(to_mesh(&grid), Err(Error::IncompleteGrid(_))));
    }

    #[test]
    fn pair_with_straight_mate() {
        let (h, _) = helix_fit(1.0, 1.0);
        let (line, _) =
            v_bertrand_mate(&h, &FrameField::tangent(), 1.0, std::f64::consts::FRAC_PI_4).unwrap();
        let params = SurfaceParams::new(BranchId::OnePlus, 4, 32).with_t_range(-1.0, 1.0);
        let (a, b, rep) = surface_mate_pair(&h, &line, &params).unwrap();
        assert!(rep.mate.accepted);
        assert!((rep.offset - 1.0).abs() < 1e-9);
        assert_eq!(a.points.len(), b.points.len());
        assert!(b.points.iter().all(|p| p.iter().all(|x| x.is_finite())));

        assert!(matches!(
            surface_mate_pair(&h, &h, &params),
            Err(Error::NotMates(_))
        ));
    }

    #[test]
    fn pair_with_offset_helix() {
        let (h, _) = helix_fit(2.0, 1.0);
        let (mate, _) = crate::bertrand::offset_mate(&h, &FrameField::tangent(), 2.0).unwrap();
        let params = SurfaceParams::new(BranchId::OnePlus, 3, 32).with_t_range(-0.5, 0.5);
        let (_, _, rep) = surface_mate_pair(&h, &mate, &params).unwrap();
        assert!(rep.mate.accepted);
        assert!((rep.offset - 2.0).abs() < 1e-9);
    }
}
