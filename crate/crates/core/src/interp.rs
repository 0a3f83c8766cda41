//! Local polynomial interpolation on uniform grids.
//!
//! Values and derivatives are read off a degree-7 Lagrange polynomial through
//! the 8 grid nodes nearest the query point. Near the ends of the grid the
//! stencil slides inward instead of shrinking.

use std::ops::{Add, Mul};

pub const STENCIL: usize = 8;

/// Weights `w_i` such that `sum_i w_i f(i)` approximates `f^(k)(x)` for a
/// polynomial through the nodes `0, 1, ..., STENCIL - 1` (unit spacing).
pub fn lagrange_weights(x: f64, k: usize) -> [f64; STENCIL] {
    let mut out = [0.0; STENCIL];
    for (i, slot) in out.iter_mut().enumerate() {
        // Coefficients of the i-th basis polynomial, lowest degree first.
        let mut coef = [0.0; STENCIL];
        coef[0] = 1.0;
        let mut deg = 0;
        let mut denom = 1.0;
        for j in 0..STENCIL {
            if j == i {
                continue;
            }
            let root = j as f64;
            for p in (0..=deg).rev() {
                coef[p + 1] += coef[p];
                coef[p] *= -root;
            }
            deg += 1;
            denom *= i as f64 - root;
        }
        let mut acc = 0.0;
        for p in (k..STENCIL).rev() {
            let falling: f64 = ((p - k + 1)..=p).map(|q| q as f64).product();
            acc = acc * x + coef[p] * falling;
        }
        *slot = acc / denom;
    }
    out
}

/// Uniformly spaced samples of some quantity, `values[i]` taken at `start + i * step`.
#[derive(Debug, Clone)]
pub struct UniformSamples<T> {
    pub start: f64,
    pub step: f64,
    pub values: Vec<T>,
}

impl<T> UniformSamples<T>
where
    T: Copy + Add<Output = T> + Mul<f64, Output = T>,
{
    pub fn new(start: f64, step: f64, values: Vec<T>) -> Self {
        assert!(values.len() >= STENCIL, "need at least {STENCIL} samples");
        assert!(step > 0.0);
        Self {
            start,
            step,
            values,
        }
    }

    pub fn end(&self) -> f64 {
        self.start + self.step * (self.values.len() - 1) as f64
    }

    /// k-th derivative of the local interpolant at `t`.
    pub fn eval(&self, t: f64, k: usize) -> T {
        let n = self.values.len();
        let pos = (t - self.start) / self.step;
        let cell = pos.floor().clamp(0.0, (n - 1) as f64) as usize;
        let first = cell.saturating_sub(STENCIL / 2 - 1).min(n - STENCIL);
        let w = lagrange_weights(pos - first as f64, k);
        let scale = self.step.powi(-(k as i32));
        let mut acc = self.values[first] * w[0];
        for (j, wj) in w.iter().enumerate().skip(1) {
            acc = acc + self.values[first + j] * *wj;
        }
        acc * scale
    }
}
