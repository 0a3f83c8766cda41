//! Quadrature along a parameter interval.
//!
//! Adaptive Gauss-Kronrod (7/15) is used where a single definite integral is
//! needed to high accuracy (arc length). Cumulative integrals on a fixed grid
//! use composite Simpson with one midpoint per grid cell, so the error is a
//! smooth function of the upper limit.

use std::ops::{Add, Mul};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One Gauss-Kronrod 15-point panel; returns (Kronrod estimate, |Kronrod - Gauss|).
pub fn gauss_kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let pair = f(c - dx) + f(c + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// Adaptive Gauss-Kronrod integration with absolute tolerance `tol`.
///
/// A nearly resolved panel is no longer split once splitting stops reducing
/// its error estimate, which happens when the integrand is only known to round-off.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        whole: (f64, f64),
        tol: f64,
        depth: u32,
    ) -> f64 {
        if whole.1 <= tol || depth == 0 || (b - a).abs() < 1e-14 {
            return whole.0;
        }
        let m = 0.5 * (a + b);
        let (left, right) = (gauss_kronrod15(f, a, m), gauss_kronrod15(f, m, b));
        let resolved = whole.1 < 1e-9 * whole.0.abs().max(b - a);
        if resolved && left.1 + right.1 > 0.5 * whole.1 {
            return left.0 + right.0;
        }
        recurse(f, a, m, left, 0.5 * tol, depth - 1) + recurse(f, m, b, right, 0.5 * tol, depth - 1)
    }
    if a == b {
        return 0.0;
    }
    recurse(f, a, b, gauss_kronrod15(f, a, b), tol, 40)
}

/// Cumulative integral of `f` over the ordered `nodes`, starting from `zero`
/// at `nodes[0]`. Each cell is split into `panels` Simpson panels.
pub fn cumulative_simpson<T, F>(f: F, nodes: &[f64], panels: usize, zero: T) -> Vec<T>
where
    T: Copy + Add<Output = T> + Mul<f64, Output = T>,
    F: Fn(f64) -> T,
{
    let panels = panels.max(1);
    let mut out = Vec::with_capacity(nodes.len());
    if nodes.is_empty() {
        return out;
    }
    out.push(zero);
    let mut acc = zero;
    let mut f_left = f(nodes[0]);
    for pair in nodes.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let h = (b - a) / panels as f64;
        for p in 0..panels {
            let lo = a + h * p as f64;
            let hi = if p + 1 == panels { b } else { lo + h };
            let f_mid = f(0.5 * (lo + hi));
            let f_right = f(hi);
            acc = acc + (f_left + f_mid * 4.0 + f_right) * ((hi - lo) / 6.0);
            f_left = f_right;
        }
        out.push(acc);
    }
    out
}

/// Cumulative composite Simpson from precomputed values at the nodes and at
/// the cell midpoints (`mids[i]` belongs to `[nodes[i], nodes[i + 1]]`).
pub fn cumulative_simpson_values<T>(nodes: &[f64], at_nodes: &[T], mids: &[T], zero: T) -> Vec<T>
where
    T: Copy + Add<Output = T> + Mul<f64, Output = T>,
{
    assert_eq!(nodes.len(), at_nodes.len());
    assert_eq!(nodes.len(), mids.len() + 1);
    let mut out = Vec::with_capacity(nodes.len());
    let mut acc = zero;
    out.push(acc);
    for i in 0..mids.len() {
        let h = nodes[i + 1] - nodes[i];
        acc = acc + (at_nodes[i] + mids[i] * 4.0 + at_nodes[i + 1]) * (h / 6.0);
        out.push(acc);
    }
    out
}

pub fn midpoints(nodes: &[f64]) -> Vec<f64> {
    nodes.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
}
