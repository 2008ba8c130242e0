//! Tabulated cdf for fast repeated evaluation and inverse-cdf sampling.
//!
//! Nodes sit at `x = c + s·sinh(w)` for equally spaced `w`, so cells are
//! narrow in the body and widen geometrically in the tails. Cumulative
//! masses come from a K21 panel per cell; in-cell evaluation uses a 10-point
//! Gauss–Legendre rule from the left node. Points outside the table fall back
//! to the adaptive routines.

use rayon::prelude::*;

use super::{numeric, Density};
use crate::error::{domain, Result};
use crate::quadrature::{gauss_kronrod_21, gauss_legendre_10, integrate_from, integrate_to, QuadOptions};
use crate::rng::{open_unit, streams, substream};

const HALF_RANGE: f64 = 1e4;
const STEP: f64 = 0.02;

pub struct TabulatedCdf<'a, D: Density + ?Sized> {
    density: &'a D,
    center: f64,
    scale: f64,
    w_min: f64,
    nodes: Vec<f64>,
    pdf_at: Vec<f64>,
    cumulative: Vec<f64>,
}

impl<'a, D: Density + ?Sized> TabulatedCdf<'a, D> {
    pub fn build(density: &'a D) -> Result<Self> {
        numeric::check_normalization(density)?;
        let shape = density.shape();
        let w_max = HALF_RANGE.asinh();
        let cells = (2.0 * w_max / STEP).ceil() as usize;
        let step = 2.0 * w_max / cells as f64;
        let nodes: Vec<f64> = (0..=cells)
            .map(|i| shape.center + shape.scale * (-w_max + i as f64 * step).sinh())
            .collect();
        let opts = QuadOptions::with_abs_tol(numeric::CDF_TOL);
        let head = integrate_to(|t| density.pdf(t), nodes[0], shape, opts)?.value;
        let mut cumulative = Vec::with_capacity(nodes.len());
        cumulative.push(head);
        for w in nodes.windows(2) {
            let (mass, _) = gauss_kronrod_21(&mut |t| density.pdf(t), w[0], w[1]);
            let prev = *cumulative.last().expect("non-empty");
            cumulative.push(prev + mass);
        }
        let pdf_at = nodes.iter().map(|&x| density.pdf(x)).collect();
        Ok(Self { density, center: shape.center, scale: shape.scale, w_min: -w_max, nodes, pdf_at, cumulative })
    }

    fn cell_of(&self, x: f64) -> Option<usize> {
        if x < self.nodes[0] || x >= *self.nodes.last().expect("non-empty") {
            return None;
        }
        let step = (self.nodes.len() - 1) as f64;
        let w = ((x - self.center) / self.scale).asinh();
        let mut i = ((w - self.w_min) / (-2.0 * self.w_min) * step).floor() as usize;
        i = i.min(self.nodes.len() - 2);
        // asinh rounding can land one cell off.
        while i > 0 && x < self.nodes[i] {
            i -= 1;
        }
        while i + 2 < self.nodes.len() && x >= self.nodes[i + 1] {
            i += 1;
        }
        Some(i)
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        if x.is_nan() {
            return Err(domain("cdf at NaN"));
        }
        match self.cell_of(x) {
            Some(i) => Ok(self.in_cell(i, x).clamp(0.0, 1.0)),
            None => {
                let shape = self.density.shape();
                let opts = QuadOptions::with_abs_tol(numeric::CDF_TOL);
                if x < self.nodes[0] {
                    Ok(integrate_to(|t| self.density.pdf(t), x, shape, opts)?.value.max(0.0))
                } else if x.is_infinite() {
                    Ok(1.0)
                } else {
                    Ok((1.0 - integrate_from(|t| self.density.pdf(t), x, shape, opts)?.value).min(1.0))
                }
            }
        }
    }

    fn in_cell(&self, i: usize, x: f64) -> f64 {
        self.cumulative[i] + gauss_legendre_10(|t| self.density.pdf(t), self.nodes[i], x)
    }

    /// Inverse cdf: cubic Hermite guess within the cell, then Newton steps.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u < 1.0) {
            return Err(domain(format!("quantile requires p in (0, 1), got {u}")));
        }
        let last = self.cumulative.len() - 1;
        if u < self.cumulative[0] || u >= self.cumulative[last] {
            return self.density.quantile(u);
        }
        // Largest i with cumulative[i] <= u.
        let i = self.cumulative.partition_point(|&c| c <= u).saturating_sub(1).min(last - 1);
        let (x0, x1) = (self.nodes[i], self.nodes[i + 1]);
        let (c0, c1) = (self.cumulative[i], self.cumulative[i + 1]);
        let h = c1 - c0;
        let mut x = if h > 0.0 && self.pdf_at[i] > 0.0 && self.pdf_at[i + 1] > 0.0 {
            let t = (u - c0) / h;
            let (t2, t3) = (t * t, t * t * t);
            let m0 = h / self.pdf_at[i];
            let m1 = h / self.pdf_at[i + 1];
            let guess = (2.0 * t3 - 3.0 * t2 + 1.0) * x0
                + (t3 - 2.0 * t2 + t) * m0
                + (-2.0 * t3 + 3.0 * t2) * x1
                + (t3 - t2) * m1;
            guess.clamp(x0, x1)
        } else {
            x0 + (x1 - x0) * if h > 0.0 { (u - c0) / h } else { 0.5 }
        };
        let (mut lo, mut hi) = (x0, x1);
        for _ in 0..60 {
            let gap = self.in_cell(i, x) - u;
            if gap.abs() <= 1e-14 {
                break;
            }
            if gap < 0.0 {
                lo = x;
            } else {
                hi = x;
            }
            let d = self.density.pdf(x);
            let newton = x - gap / d;
            let next = if d > 0.0 && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
            if (next - x).abs() <= 4.0 * f64::EPSILON * (x.abs() + self.scale) {
                x = next;
                break;
            }
            x = next;
        }
        Ok(x)
    }

    /// Seeded inverse-cdf draws. Uniforms come from one substream in order,
    /// so the output is independent of how the inversion is scheduled.
    pub fn sample(&self, n: usize, seed: u64) -> Result<Vec<f64>> {
        let mut rng = substream(seed, streams::SAMPLE);
        let uniforms: Vec<f64> = (0..n).map(|_| open_unit(&mut rng)).collect();
        uniforms.par_iter().map(|&u| self.quantile(u)).collect()
    }

    /// Kolmogorov–Smirnov distance between `samples` and this cdf.
    pub fn ks_distance(&self, samples: &[f64]) -> Result<f64> {
        crate::oracle::ks_distance_with(samples, |x| self.cdf(x))
    }
}
