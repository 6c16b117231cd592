//! Capacity functionals by truncated energy minimization.
//!
//! `cap(ω)` minimizes `∫ v² + |∇v|²` over `v = 1` on ω. The Neumann
//! capacity `e(ω)` is the energy of the exterior solution of `-Δz + z = 0`
//! with normal flux `κ = ±1` on the two faces of ω. Both are computed on a
//! ball of radius `R`, once with `v = 0` on `|x| = R` and once with a free
//! outer boundary; the two values bracket the whole-space quantity.
//!
//! Three-dimensional flat disks are handled in the meridian half-plane.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use crate::fem::{Operator, ScalarField};
use crate::geometry::Arc2;
use crate::linalg::dot;
use crate::mesh::{distribute, split_crack, triangulate, EdgeLabel, Grading, Locator, Mesh, MeshInput};
use crate::quadrature::integrate_adaptive;
use crate::{Error, Point, Result};

/// Maximum number of components for the sign-pattern search in `e(ω)`.
pub const MAX_COMPONENTS: usize = 8;

/// A smooth open curve in the plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Curve {
    Segment { a: Point, b: Point },
    /// Counter-clockwise arc of a circle.
    Arc { center: Point, radius: f64, start: f64, len: f64 },
}

impl Curve {
    pub fn length(&self) -> f64 {
        match *self {
            Curve::Segment { a, b } => dist(a, b),
            Curve::Arc { radius, len, .. } => radius * len,
        }
    }

    /// Point at arc length `s`.
    pub fn point(&self, s: f64) -> Point {
        match *self {
            Curve::Segment { a, b } => {
                let t = s / dist(a, b);
                [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]
            }
            Curve::Arc { center, radius, start, .. } => {
                let t = start + s / radius;
                [center[0] + radius * t.cos(), center[1] + radius * t.sin()]
            }
        }
    }

    pub fn endpoints(&self) -> [Point; 2] {
        [self.point(0.0), self.point(self.length())]
    }

    /// Unit normal on the left of the direction of travel.
    pub fn normal(&self, p: Point) -> Point {
        match *self {
            Curve::Segment { a, b } => {
                let l = dist(a, b);
                [-(b[1] - a[1]) / l, (b[0] - a[0]) / l]
            }
            Curve::Arc { center, .. } => {
                let (dx, dy) = (p[0] - center[0], p[1] - center[1]);
                let l = (dx * dx + dy * dy).sqrt();
                [-dx / l, -dy / l]
            }
        }
    }

    pub fn distance(&self, x: Point) -> f64 {
        match *self {
            Curve::Segment { a, b } => {
                let (ux, uy) = (b[0] - a[0], b[1] - a[1]);
                let t = (((x[0] - a[0]) * ux + (x[1] - a[1]) * uy) / (ux * ux + uy * uy)).clamp(0.0, 1.0);
                dist(x, [a[0] + t * ux, a[1] + t * uy])
            }
            Curve::Arc { center, radius, start, len } => {
                let (dx, dy) = (x[0] - center[0], x[1] - center[1]);
                let theta = dy.atan2(dx);
                if (Arc2 { start, len }).contains(theta) {
                    ((dx * dx + dy * dy).sqrt() - radius).abs()
                } else {
                    let [p, q] = self.endpoints();
                    dist(x, p).min(dist(x, q))
                }
            }
        }
    }
}

/// The set ω whose capacity is computed.
#[derive(Debug, Clone, PartialEq)]
pub enum PatchShape {
    Empty,
    /// One or more disjoint planar curves.
    Curves(Vec<Curve>),
    /// Flat disk `{|x'| ≤ radius, x₃ = 0}` in three dimensions.
    Disk3 { radius: f64 },
}

impl PatchShape {
    /// Segment `[-half, half] × {0}`.
    pub fn segment(half: f64) -> Self {
        PatchShape::Curves(vec![Curve::Segment { a: [-half, 0.0], b: [half, 0.0] }])
    }

    /// Arc of the unit circle of geodesic half-length `half` around `center`.
    pub fn unit_arc(center: f64, half: f64) -> Self {
        PatchShape::Curves(vec![Curve::Arc { center: [0.0, 0.0], radius: 1.0, start: center - half, len: 2.0 * half }])
    }

    /// Collinear segments `[a_k, b_k] × {0}`.
    pub fn segments(parts: &[[f64; 2]]) -> Self {
        PatchShape::Curves(parts.iter().map(|p| Curve::Segment { a: [p[0], 0.0], b: [p[1], 0.0] }).collect())
    }

    fn size_scale(&self) -> f64 {
        match self {
            PatchShape::Empty => 0.0,
            PatchShape::Curves(c) => c.iter().map(|c| c.length()).fold(0.0, f64::max),
            PatchShape::Disk3 { radius } => 2.0 * radius,
        }
    }

    fn center(&self) -> Point {
        match self {
            PatchShape::Curves(c) if !c.is_empty() => {
                let mut s = [0.0; 2];
                for cv in c {
                    let m = cv.point(0.5 * cv.length());
                    s[0] += m[0] / c.len() as f64;
                    s[1] += m[1] / c.len() as f64;
                }
                s
            }
            _ => [0.0, 0.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CapacityResult {
    /// Energy of the minimizer with `v = 0` on the outer sphere.
    pub value: f64,
    pub truncation_radius: f64,
    pub mesh_h: f64,
    /// Extrapolation over the radii `R/2` and `R`.
    pub richardson_estimate: f64,
    /// One-sided values at `R`: free outer boundary and clamped one.
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NeumannCapacityResult {
    /// Energy with a free outer boundary (an upper bound).
    pub value: f64,
    /// `κ` per component; the first is always `+1`.
    pub sign_pattern: Vec<i8>,
    pub truncation_radius: f64,
    pub richardson_estimate: f64,
    pub lower: f64,
    pub upper: f64,
}

fn dist(a: Point, b: Point) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

/// Triangulation of the ball `|x - c| < radius` (or, for `Disk3`, the
/// meridian half-disk) with ω embedded, graded toward the ends of ω.
///
/// `h` is the mesh size on ω away from its ends. The outer circle carries
/// `outer`, the symmetry axis `Neumann`, ω the label `Patch` with tag
/// `k + 1` for component `k`.
pub fn exterior_mesh(shape: &PatchShape, radius: f64, h: f64, outer: EdgeLabel) -> Result<Mesh> {
    if !(h > 0.0) || !(radius > 0.0) {
        return Err(Error::InvalidInput(alloc::format!("mesh size {h} and radius {radius} must be positive")));
    }
    let c = shape.center();
    let far = radius / 8.0;
    let curves: Vec<Curve> = match shape {
        PatchShape::Empty => Vec::new(),
        PatchShape::Curves(cs) => cs.clone(),
        PatchShape::Disk3 { radius: a } => vec![Curve::Segment { a: [0.0, 0.0], b: [*a, 0.0] }],
    };
    let ends: Vec<Point> = match shape {
        PatchShape::Disk3 { radius: a } => vec![[*a, 0.0]],
        _ => curves.iter().flat_map(|cv| cv.endpoints()).collect(),
    };
    let half = 0.5 * shape.size_scale();
    let size = |x: Point| -> f64 {
        let mut s = far;
        for cv in &curves {
            let d_e = ends.iter().map(|q| dist(x, *q)).fold(f64::INFINITY, f64::min);
            let layer = (d_e / half).clamp(0.5f64.powi(6), 1.0);
            s = s.min(h * layer + 0.3 * cv.distance(x));
        }
        s.min(h.max(0.02 * radius) + 0.3 * dist(x, c))
    };
    let axisym = matches!(shape, PatchShape::Disk3 { .. });
    let grading = Grading { h: far, h_patch: h, ratio: 0.5, layers: 6 };

    let mut loop_pts = Vec::new();
    let mut loop_labels = Vec::new();
    if axisym {
        let arc = |s: f64| {
            let t = -0.5 * PI + s / radius;
            [radius * t.cos(), radius * t.sin()]
        };
        let params = distribute(PI * radius, &arc, &size);
        for s in &params[..params.len() - 1] {
            loop_pts.push(arc(*s));
            loop_labels.push(outer);
        }
        // axis from the north pole down, through the disk center
        for (a, b) in [(radius, 0.0), (0.0, -radius)] {
            let seg = |s: f64| [0.0, a - s * (a - b).signum()];
            let params = distribute((a - b).abs(), &seg, &size);
            for s in &params[..params.len() - 1] {
                loop_pts.push(seg(*s));
                loop_labels.push(EdgeLabel::Neumann);
            }
        }
    } else {
        let circ = |s: f64| {
            let t = s / radius;
            [c[0] + radius * t.cos(), c[1] + radius * t.sin()]
        };
        let params = distribute(TAU * radius, &circ, &size);
        for s in &params[..params.len() - 1] {
            loop_pts.push(circ(*s));
            loop_labels.push(outer);
        }
    }
    let mut embedded = Vec::new();
    for (k, cv) in curves.iter().enumerate() {
        let at = |s: f64| cv.point(s);
        let params = distribute(cv.length(), &at, &size);
        let mut pts: Vec<Point> = params.iter().map(|&s| cv.point(s)).collect();
        if axisym {
            pts[0] = [0.0, 0.0];
        }
        embedded.push((pts, EdgeLabel::Patch, k as u32 + 1));
    }
    let inside = |x: Point| {
        let r = radius - dist(x, c);
        if axisym {
            r.min(x[0])
        } else {
            r
        }
    };
    let lo = if axisym { [0.0, -radius] } else { [c[0] - radius, c[1] - radius] };
    let input = MeshInput {
        loop_pts,
        loop_labels,
        embedded,
        inside: &inside,
        size: &size,
        bbox: [lo, [c[0] + radius, c[1] + radius]],
        grading,
    };
    triangulate(&input)
}

fn energy_weight(axisym: bool) -> f64 {
    if axisym {
        TAU
    } else {
        1.0
    }
}

/// `min ∫ v² + |∇v|²` over `v = 1` on ω, on the given mesh. `clamp` adds
/// `v = 0` on the outer boundary. Returns the energy and the minimizer.
fn cap_on_mesh(mesh: &Arc<Mesh>, clamp: bool, axisym: bool) -> Result<(f64, ScalarField)> {
    let op = Operator::assemble(mesh, &|_| 1.0, 1.0, axisym);
    let labels: &[EdgeLabel] = if clamp { &[EdgeLabel::Patch, EdgeLabel::Dirichlet] } else { &[EdgeLabel::Patch] };
    let mut essential = mesh.nodes_with_labels(labels);
    let patch = mesh.nodes_with_labels(&[EdgeLabel::Patch]);
    if axisym {
        // the axis point of the disk is a regular interior point of ω
        for (i, p) in mesh.nodes.iter().enumerate() {
            if patch[i] && p[0] == 0.0 {
                essential[i] = true;
            }
        }
    }
    let fixed: Vec<f64> = patch.iter().map(|&p| if p { 1.0 } else { 0.0 }).collect();
    let zero = vec![0.0; mesh.nodes.len()];
    let v = op.factor(&essential)?.solve(&zero, &zero, &fixed)?;
    let ku = op.matrix.matvec(&v.values);
    Ok((energy_weight(axisym) * dot(&ku, &v.values), v))
}

/// Extrapolates a quantity converging like `exp(-2R)` from its values at
/// `R/2` and `R`.
fn extrapolate(v_half: f64, v_full: f64, radius: f64) -> f64 {
    let q = (-radius).exp();
    v_full - (v_half - v_full) * q / (1.0 - q)
}

fn check_bracket(lower: f64, upper: f64) -> Result<()> {
    if (upper - lower).abs() > 0.2 * upper.abs().max(lower.abs()) {
        return Err(Error::TruncationTooSmall { lower, upper });
    }
    Ok(())
}

/// `H¹` capacity of ω.
///
/// `h` is the mesh size on ω; endpoints get six extra halving layers.
pub fn cap(shape: &PatchShape, truncation_radius: f64, h: f64) -> Result<CapacityResult> {
    let empty = match shape {
        PatchShape::Empty => true,
        PatchShape::Curves(c) => c.is_empty(),
        PatchShape::Disk3 { radius } => *radius <= 0.0,
    };
    if empty {
        return Ok(CapacityResult {
            value: 0.0,
            truncation_radius,
            mesh_h: h,
            richardson_estimate: 0.0,
            lower: 0.0,
            upper: 0.0,
        });
    }
    let axisym = matches!(shape, PatchShape::Disk3 { .. });
    let mesh = Arc::new(exterior_mesh(shape, truncation_radius, h, EdgeLabel::Dirichlet)?);
    let (upper, _) = cap_on_mesh(&mesh, true, axisym)?;
    let (lower, _) = cap_on_mesh(&mesh, false, axisym)?;
    check_bracket(lower, upper)?;
    let half = Arc::new(exterior_mesh(shape, 0.5 * truncation_radius, h, EdgeLabel::Dirichlet)?);
    let (upper_half, _) = cap_on_mesh(&half, true, axisym)?;
    Ok(CapacityResult {
        value: upper,
        truncation_radius,
        mesh_h: h,
        richardson_estimate: extrapolate(upper_half, upper, truncation_radius),
        lower,
        upper,
    })
}

/// Energy matrix `E_kl = ⟨load_k, z_l⟩` of the unit-flux solutions per
/// component. `clamp` puts `z = 0` on the outer circle.
fn neumann_energy_matrix(mesh: &Arc<Mesh>, curves: &[Curve], clamp: bool) -> Result<Vec<Vec<f64>>> {
    let op = Operator::assemble(mesh, &|_| 1.0, 1.0, false);
    let essential = if clamp { mesh.nodes_with_labels(&[EdgeLabel::Dirichlet]) } else { vec![false; mesh.nodes.len()] };
    let fact = op.factor(&essential)?;
    let zero = vec![0.0; mesh.nodes.len()];
    let mut loads = Vec::new();
    let mut sols = Vec::new();
    for (k, cv) in curves.iter().enumerate() {
        let tag = k as u32 + 1;
        let load = op.load_flux(&[EdgeLabel::Patch], &|e, p, n| {
            if e.tag != tag {
                return 0.0;
            }
            let nu = cv.normal(p);
            n[0] * nu[0] + n[1] * nu[1]
        });
        let z = fact.solve(&load, &zero, &zero)?;
        loads.push(load);
        sols.push(z.values);
    }
    let m = curves.len();
    Ok((0..m).map(|k| (0..m).map(|l| dot(&loads[k], &sols[l])).collect()).collect())
}

/// Maximizes `sᵀ E s` over sign vectors with `s₀ = +1`.
fn best_pattern(e: &[Vec<f64>]) -> (f64, Vec<i8>) {
    let m = e.len();
    let mut best = (f64::NEG_INFINITY, vec![1i8; m]);
    for bits in 0..(1usize << (m - 1)) {
        let s: Vec<f64> = (0..m).map(|k| if k > 0 && bits >> (k - 1) & 1 == 1 { -1.0 } else { 1.0 }).collect();
        let mut v = 0.0;
        for k in 0..m {
            for l in 0..m {
                v += s[k] * e[k][l] * s[l];
            }
        }
        if v > best.0 {
            best = (v, s.iter().map(|&x| x as i8).collect());
        }
    }
    best
}

fn pattern_energy(e: &[Vec<f64>], s: &[i8]) -> f64 {
    let mut v = 0.0;
    for k in 0..e.len() {
        for l in 0..e.len() {
            v += s[k] as f64 * e[k][l] * s[l] as f64;
        }
    }
    v
}

fn crack_mesh(shape: &PatchShape, radius: f64, h: f64, outer: EdgeLabel, m: usize) -> Result<Arc<Mesh>> {
    let mut mesh = exterior_mesh(shape, radius, h, outer)?;
    for k in 0..m {
        split_crack(&mut mesh, k as u32 + 1)?;
    }
    Ok(Arc::new(mesh))
}

/// Neumann capacity `e(ω)` of planar curves, maximized over the signs of
/// the unit flux on each component.
pub fn neumann_capacity(shape: &PatchShape, truncation_radius: f64, h: f64) -> Result<NeumannCapacityResult> {
    let curves = match shape {
        PatchShape::Empty => Vec::new(),
        PatchShape::Curves(c) => c.clone(),
        PatchShape::Disk3 { .. } => {
            return Err(Error::UnsupportedGeometry("Neumann capacity is planar only".into()));
        }
    };
    if curves.is_empty() {
        return Ok(NeumannCapacityResult {
            value: 0.0,
            sign_pattern: Vec::new(),
            truncation_radius,
            richardson_estimate: 0.0,
            lower: 0.0,
            upper: 0.0,
        });
    }
    if curves.len() > MAX_COMPONENTS {
        return Err(Error::InvalidInput(alloc::format!(
            "{} components exceed the limit of {MAX_COMPONENTS}",
            curves.len()
        )));
    }
    let m = curves.len();
    let free = crack_mesh(shape, truncation_radius, h, EdgeLabel::Neumann, m)?;
    let (upper, pattern) = best_pattern(&neumann_energy_matrix(&free, &curves, false)?);
    let clamped = crack_mesh(shape, truncation_radius, h, EdgeLabel::Dirichlet, m)?;
    let lower = pattern_energy(&neumann_energy_matrix(&clamped, &curves, true)?, &pattern);
    check_bracket(lower, upper)?;
    let half = crack_mesh(shape, 0.5 * truncation_radius, h, EdgeLabel::Neumann, m)?;
    let upper_half = pattern_energy(&neumann_energy_matrix(&half, &curves, false)?, &pattern);
    Ok(NeumannCapacityResult {
        value: upper,
        sign_pattern: pattern,
        truncation_radius,
        richardson_estimate: extrapolate(upper_half, upper, truncation_radius),
        lower,
        upper,
    })
}

/// Energy of `z` for one explicit sign pattern (free outer boundary).
pub fn neumann_energy_for_pattern(shape: &PatchShape, truncation_radius: f64, h: f64, pattern: &[i8]) -> Result<f64> {
    let PatchShape::Curves(curves) = shape else {
        return Err(Error::UnsupportedGeometry("Neumann capacity is planar only".into()));
    };
    if pattern.len() != curves.len() {
        return Err(Error::InvalidInput("one sign per component".into()));
    }
    let mesh = crack_mesh(shape, truncation_radius, h, EdgeLabel::Neumann, curves.len())?;
    Ok(pattern_energy(&neumann_energy_matrix(&mesh, curves, false)?, pattern))
}

/// `ρ_ω(x) = ∫_{∂Ω∖ω̄} |x - y|⁻² ds(y)` for `x` at angle `theta` on the
/// circle of radius `radius`, with ω the arc `patch`.
pub fn rho_weight(theta: f64, patch: &Arc2, radius: f64) -> Result<f64> {
    let o = patch.offset(theta);
    if !(o > 0.0 && o < patch.len) {
        return Err(Error::InvalidInput("point must lie strictly inside the patch".into()));
    }
    // y = x rotated by φ, φ ∈ [a, 2π - c]; |x - y| = 2r sin(φ/2)
    let a = patch.len - o;
    let c = o;
    let f = |phi: f64| {
        let s = (0.5 * phi).sin();
        1.0 / (4.0 * radius * s * s)
    };
    split_integral(&f, a, TAU - c, a.min(c))
}

/// Integral over `[lo, hi]` of a function singular like `1/δ²` at both
/// ends, split geometrically toward each end.
fn split_integral(f: &impl Fn(f64) -> f64, lo: f64, hi: f64, scale: f64) -> Result<f64> {
    let mid = 0.5 * (lo + hi);
    let mut total = 0.0;
    for (end, dir) in [(lo, 1.0), (hi, -1.0)] {
        let mut d0 = 0.0;
        let mut d1 = scale.min(mid - lo);
        loop {
            let (p, q) = (end + dir * d0, end + dir * d1);
            let (a, b) = if p < q { (p, q) } else { (q, p) };
            let piece = integrate_adaptive(f, a, b, 1e-12 * (1.0 + total), 30)?;
            total += piece;
            if d1 >= mid - lo {
                break;
            }
            d0 = d1;
            d1 = (2.0 * d1).min(mid - lo);
        }
    }
    Ok(total)
}

/// `D(ω) = ∫_ω ρ_ω(x)⁻¹ ds(x)` for an arc of the circle of radius `radius`.
pub fn d_surrogate(patch: Option<&Arc2>, radius: f64) -> Result<f64> {
    let Some(p) = patch else {
        return Ok(0.0);
    };
    if !(p.len > 0.0) {
        return Ok(0.0);
    }
    let err = core::cell::RefCell::new(None);
    let g = |s: f64| match rho_weight(p.start + s, p, radius) {
        Ok(r) => 1.0 / r,
        Err(e) => {
            err.borrow_mut().get_or_insert(e);
            0.0
        }
    };
    let half = 0.5 * p.len;
    let left = integrate_adaptive(&g, 0.0, half, 1e-12, 30);
    let right = integrate_adaptive(&g, half, p.len, 1e-12, 30);
    let total = radius * (left? + right?);
    match err.into_inner() {
        Some(e) => Err(e),
        None => Ok(total),
    }
}

/// `∫_ω dist(x, ∂ω) ds(x)` with the geodesic distance on the circle.
pub fn arc_dist_integral(patch: &Arc2, radius: f64) -> Result<f64> {
    let half = 0.5 * patch.len * radius;
    let f = |s: f64| half - (s - half).abs();
    Ok(integrate_adaptive(&f, 0.0, half, 1e-14, 30)? + integrate_adaptive(&f, half, 2.0 * half, 1e-14, 30)?)
}

/// `chi_energy / cap_value`.
pub fn check_cap_sandwich(chi_energy: f64, cap_value: f64) -> f64 {
    chi_energy / cap_value
}

/// Extends `χ` (a field on the unit disk with `χ = 1` on ω) to the ball of
/// radius `truncation_radius` by the discrete exterior minimizer with
/// `v = 0` at the outer circle, and returns `(‖extension‖²_{H¹}, cap)` with
/// both values computed on the same ball mesh.
pub fn extension_energy(chi: &ScalarField, shape: &PatchShape, truncation_radius: f64, h: f64) -> Result<(f64, f64)> {
    let mesh = Arc::new(exterior_mesh(shape, truncation_radius, h, EdgeLabel::Dirichlet)?);
    let (cap_value, _) = cap_on_mesh(&mesh, true, false)?;
    let loc = Locator::new(&chi.mesh);
    let op = Operator::assemble(&mesh, &|_| 1.0, 1.0, false);
    let patch = mesh.nodes_with_labels(&[EdgeLabel::Patch]);
    let outer = mesh.nodes_with_labels(&[EdgeLabel::Dirichlet]);
    let mut essential = vec![false; mesh.nodes.len()];
    let mut fixed = vec![0.0; mesh.nodes.len()];
    for (i, p) in mesh.nodes.iter().enumerate() {
        if patch[i] {
            essential[i] = true;
            fixed[i] = 1.0;
        } else if outer[i] {
            essential[i] = true;
        } else if p[0] * p[0] + p[1] * p[1] <= 1.0 {
            essential[i] = true;
            fixed[i] = chi.eval(&loc, *p).unwrap_or(0.0);
        }
    }
    let zero = vec![0.0; mesh.nodes.len()];
    let v = op.factor(&essential)?.solve(&zero, &zero, &fixed)?;
    let ku = op.matrix.matvec(&v.values);
    Ok((dot(&ku, &v.values), cap_value))
}
