//! Single- and double-layer potentials on smooth closed curves, with
//! one-sided limits by Richardson extrapolation along the normal.

use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use crate::Point;

/// Closed curve sampled at `n` equispaced parameters (trapezoid rule).
#[derive(Debug, Clone)]
pub struct ClosedCurve {
    pub points: Vec<Point>,
    /// Outward unit normals.
    pub normals: Vec<Point>,
    /// Arc-length weights.
    pub weights: Vec<f64>,
    pub params: Vec<f64>,
}

impl ClosedCurve {
    /// Counter-clockwise parametrization `t ↦ pos(t)` on `[0, 2π)` with
    /// derivative `vel`.
    pub fn from_param(n: usize, pos: impl Fn(f64) -> Point, vel: impl Fn(f64) -> Point) -> Self {
        let mut out = Self { points: Vec::new(), normals: Vec::new(), weights: Vec::new(), params: Vec::new() };
        for i in 0..n {
            let t = TAU * i as f64 / n as f64;
            let v = vel(t);
            let speed = (v[0] * v[0] + v[1] * v[1]).sqrt();
            out.points.push(pos(t));
            out.normals.push([v[1] / speed, -v[0] / speed]);
            out.weights.push(speed * TAU / n as f64);
            out.params.push(t);
        }
        out
    }

    pub fn circle(center: Point, radius: f64, n: usize) -> Self {
        Self::from_param(
            n,
            |t| [center[0] + radius * t.cos(), center[1] + radius * t.sin()],
            |t| [-radius * t.sin(), radius * t.cos()],
        )
    }

    /// `𝒮φ(x) = ∫ G(x, y) φ(y) ds(y)`.
    pub fn single_layer(&self, phi: &[f64], x: Point) -> f64 {
        let mut s = 0.0;
        for j in 0..self.points.len() {
            let (dx, dy) = (x[0] - self.points[j][0], x[1] - self.points[j][1]);
            s += -(dx * dx + dy * dy).ln() / (4.0 * PI) * phi[j] * self.weights[j];
        }
        s
    }

    /// `∇𝒮φ(x)`.
    pub fn single_layer_grad(&self, phi: &[f64], x: Point) -> Point {
        let mut g = [0.0; 2];
        for j in 0..self.points.len() {
            let (dx, dy) = (x[0] - self.points[j][0], x[1] - self.points[j][1]);
            let c = -phi[j] * self.weights[j] / (TAU * (dx * dx + dy * dy));
            g[0] += c * dx;
            g[1] += c * dy;
        }
        g
    }

    /// `𝒟φ(x) = ∫ ∂G/∂n_y(x, y) φ(y) ds(y)`.
    pub fn double_layer(&self, phi: &[f64], x: Point) -> f64 {
        let mut s = 0.0;
        for j in 0..self.points.len() {
            let (dx, dy) = (x[0] - self.points[j][0], x[1] - self.points[j][1]);
            let n = self.normals[j];
            s += (dx * n[0] + dy * n[1]) / (TAU * (dx * dx + dy * dy)) * phi[j] * self.weights[j];
        }
        s
    }

    /// `∇𝒟φ(x)`.
    pub fn double_layer_grad(&self, phi: &[f64], x: Point) -> Point {
        let mut g = [0.0; 2];
        for j in 0..self.points.len() {
            let (dx, dy) = (x[0] - self.points[j][0], x[1] - self.points[j][1]);
            let n = self.normals[j];
            let r2 = dx * dx + dy * dy;
            let dn = dx * n[0] + dy * n[1];
            let c = phi[j] * self.weights[j] / TAU;
            g[0] += c * (n[0] / r2 - 2.0 * dn * dx / (r2 * r2));
            g[1] += c * (n[1] / r2 - 2.0 * dn * dy / (r2 * r2));
        }
        g
    }
}

/// One-sided limits at a boundary node and the resulting jumps, exterior
/// minus interior.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpReport {
    pub phi: f64,
    pub single_in: f64,
    pub single_out: f64,
    pub single_flux_in: f64,
    pub single_flux_out: f64,
    pub double_in: f64,
    pub double_out: f64,
    pub double_flux_in: f64,
    pub double_flux_out: f64,
}

impl JumpReport {
    /// `[𝒮φ]`, expected 0.
    pub fn single_jump(&self) -> f64 {
        self.single_out - self.single_in
    }

    /// `[∂_n 𝒮φ]`, expected `-φ`.
    pub fn single_flux_jump(&self) -> f64 {
        self.single_flux_out - self.single_flux_in
    }

    /// `[𝒟φ]`, expected `φ`.
    pub fn double_jump(&self) -> f64 {
        self.double_out - self.double_in
    }

    /// `[∂_n 𝒟φ]`, expected 0.
    pub fn double_flux_jump(&self) -> f64 {
        self.double_flux_out - self.double_flux_in
    }

    /// Largest deviation from the four jump relations.
    pub fn max_defect(&self) -> f64 {
        self.single_jump()
            .abs()
            .max((self.single_flux_jump() + self.phi).abs())
            .max((self.double_jump() - self.phi).abs())
            .max(self.double_flux_jump().abs())
    }
}

/// One-sided traces and normal derivatives of both potentials at node `i`,
/// evaluated at offsets `{4h, 2h, h}` along the normal and extrapolated to
/// the boundary.
pub fn jump_check(curve: &ClosedCurve, phi: &[f64], i: usize, h: f64) -> JumpReport {
    let p = curve.points[i];
    let n = curve.normals[i];
    let side = |s: f64| -> [f64; 4] {
        let mut acc = [0.0; 4];
        for (c, k) in [(8.0 / 3.0, 1.0), (-2.0, 2.0), (1.0 / 3.0, 4.0)] {
            let x = [p[0] + s * k * h * n[0], p[1] + s * k * h * n[1]];
            let gs = curve.single_layer_grad(phi, x);
            let gd = curve.double_layer_grad(phi, x);
            let vals = [
                curve.single_layer(phi, x),
                gs[0] * n[0] + gs[1] * n[1],
                curve.double_layer(phi, x),
                gd[0] * n[0] + gd[1] * n[1],
            ];
            for q in 0..4 {
                acc[q] += c * vals[q];
            }
        }
        acc
    };
    let out = side(1.0);
    let inn = side(-1.0);
    JumpReport {
        phi: phi[i],
        single_in: inn[0],
        single_out: out[0],
        single_flux_in: inn[1],
        single_flux_out: out[1],
        double_in: inn[2],
        double_out: out[2],
        double_flux_in: inn[3],
        double_flux_out: out[3],
    }
}

/// Trigonometric polynomial of degree `degree` with coefficients drawn from
/// `coeffs` (cycled), evaluated at the curve parameters.
pub fn random_smooth_density(curve: &ClosedCurve, coeffs: &[f64], degree: usize) -> Vec<f64> {
    curve
        .params
        .iter()
        .map(|&t| {
            let mut v = coeffs[0];
            for k in 1..=degree {
                let a = coeffs[(2 * k - 1) % coeffs.len()];
                let b = coeffs[(2 * k) % coeffs.len()];
                v += (a * (k as f64 * t).cos() + b * (k as f64 * t).sin()) / k as f64;
            }
            v
        })
        .collect()
}
