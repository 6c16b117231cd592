//! Domains, boundary partitions, patches, and the flattening map near the
//! patch center.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};
use core::fmt;

use crate::linalg::{sym_eigen, DenseMatrix};
use crate::{Error, Point, Result};

/// Scalar conductivity field.
#[derive(Clone)]
pub enum Conductivity {
    Constant(f64),
    /// `base + grad · x`; positivity on the domain is the caller's job.
    Affine { base: f64, grad: [f64; 2] },
    Custom(Arc<dyn Fn(Point) -> f64 + Send + Sync>),
}

impl fmt::Debug for Conductivity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Constant(c) => write!(f, "Constant({c})"),
            Self::Affine { base, grad } => write!(f, "Affine({base}, {grad:?})"),
            Self::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

impl Conductivity {
    pub fn value(&self, x: Point) -> f64 {
        match self {
            Self::Constant(c) => *c,
            Self::Affine { base, grad } => base + grad[0] * x[0] + grad[1] * x[1],
            Self::Custom(f) => f(x),
        }
    }

    pub fn gradient(&self, x: Point) -> [f64; 2] {
        match self {
            Self::Constant(_) => [0.0, 0.0],
            Self::Affine { grad, .. } => *grad,
            Self::Custom(f) => {
                let h = 1e-6;
                [
                    (f([x[0] + h, x[1]]) - f([x[0] - h, x[1]])) / (2.0 * h),
                    (f([x[0], x[1] + h]) - f([x[0], x[1] - h])) / (2.0 * h),
                ]
            }
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, Self::Constant(_))
    }

    /// Min and max over the given sample points.
    pub fn bounds(&self, samples: &[Point]) -> (f64, f64) {
        samples.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &p| {
            let v = self.value(p);
            (lo.min(v), hi.max(v))
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainKind {
    UnitDisk,
    MappedHalfPlane,
}

#[derive(Debug, Clone)]
pub struct DomainSpec {
    pub kind: DomainKind,
    pub radius: f64,
    pub patch_center_angle: f64,
    pub gamma: Conductivity,
}

impl DomainSpec {
    pub fn unit_disk(patch_center_angle: f64, gamma: Conductivity) -> Self {
        Self { kind: DomainKind::UnitDisk, radius: 1.0, patch_center_angle, gamma }
    }

    /// Polar grid of sample points covering the closed disk.
    pub fn sample_points(&self) -> Vec<Point> {
        let mut pts = Vec::new();
        for i in 0..=10 {
            let r = self.radius * i as f64 / 10.0;
            for j in 0..24 {
                let t = TAU * j as f64 / 24.0;
                pts.push([r * t.cos(), r * t.sin()]);
            }
        }
        pts
    }

    /// Checks `0 < α ≤ γ ≤ β` on the sample grid and returns `(α, β)`.
    pub fn conductivity_bounds(&self) -> Result<(f64, f64)> {
        let (lo, hi) = self.gamma.bounds(&self.sample_points());
        if !(lo > 0.0) || !hi.is_finite() {
            return Err(Error::InvalidInput(format!("conductivity bounds [{lo}, {hi}] not positive")));
        }
        Ok((lo, hi))
    }

    pub fn boundary_point(&self, angle: f64) -> Point {
        [self.radius * angle.cos(), self.radius * angle.sin()]
    }
}

/// Oriented angular interval `[start, start + len]` on a circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc2 {
    pub start: f64,
    pub len: f64,
}

impl Arc2 {
    pub fn new(start: f64, end: f64) -> Self {
        Self { start, len: end - start }
    }

    pub fn centered(center: f64, half: f64) -> Self {
        Self { start: center - half, len: 2.0 * half }
    }

    pub fn end(&self) -> f64 {
        self.start + self.len
    }

    pub fn center(&self) -> f64 {
        self.start + 0.5 * self.len
    }

    /// Offset of `theta` from `start` in `[0, 2π)`.
    pub fn offset(&self, theta: f64) -> f64 {
        (theta - self.start).rem_euclid(TAU)
    }

    pub fn contains(&self, theta: f64) -> bool {
        self.offset(theta) < self.len
    }

    /// Angular distance from `theta` to the closed arc.
    pub fn distance(&self, theta: f64) -> f64 {
        let o = self.offset(theta);
        if o <= self.len {
            0.0
        } else {
            (o - self.len).min(TAU - o)
        }
    }
}

/// Which boundary condition a region carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BcType {
    Dirichlet,
    Neumann,
}

/// Partition of a circle of radius `radius` into Dirichlet and Neumann arcs,
/// with an optional patch of swapped type.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryPartition {
    pub radius: f64,
    pub dirichlet_arcs: Vec<Arc2>,
    pub neumann_arcs: Vec<Arc2>,
    pub patch: Option<Arc2>,
    pub patch_center_angle: f64,
    pub d_min: f64,
}

impl BoundaryPartition {
    /// Unit circle with `Γ_D` the lower half and `Γ_N` the upper half
    /// (`dirichlet_below = true`), or the reverse.
    ///
    /// The patch center is at `π/2`, and `d_min` defaults to 10% of the
    /// host region's arc length.
    pub fn half_split(dirichlet_below: bool) -> Self {
        let (lower, upper) = (Arc2::new(PI, TAU), Arc2::new(0.0, PI));
        let (d, n) = if dirichlet_below { (lower, upper) } else { (upper, lower) };
        Self {
            radius: 1.0,
            dirichlet_arcs: alloc::vec![d],
            neumann_arcs: alloc::vec![n],
            patch: None,
            patch_center_angle: 0.5 * PI,
            d_min: 0.1 * PI,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dirichlet_arcs.is_empty() || self.neumann_arcs.is_empty() {
            return Err(Error::InvalidInput("both boundary regions must be nonempty".into()));
        }
        let total: f64 = self.dirichlet_arcs.iter().chain(&self.neumann_arcs).map(|a| a.len).sum();
        if (total - TAU).abs() > 1e-9 {
            return Err(Error::InvalidInput(format!("arcs cover {total} radians, not 2π")));
        }
        for a in &self.dirichlet_arcs {
            for b in &self.neumann_arcs {
                let mid = a.center();
                if b.contains(mid) && b.offset(mid) > 1e-12 {
                    return Err(Error::InvalidInput("Dirichlet and Neumann arcs overlap".into()));
                }
            }
        }
        Ok(())
    }

    /// Boundary condition type of the unperturbed problem at `theta`.
    pub fn host_type(&self, theta: f64) -> BcType {
        if self.dirichlet_arcs.iter().any(|a| a.contains(theta)) {
            BcType::Dirichlet
        } else {
            BcType::Neumann
        }
    }

    /// Type of the region hosting the patch center.
    pub fn patch_host(&self) -> BcType {
        self.host_type(self.patch_center_angle)
    }

    /// Angles of the interface set Σ.
    pub fn interface_angles(&self) -> Vec<f64> {
        let mut out: Vec<f64> = Vec::new();
        for a in &self.dirichlet_arcs {
            for t in [a.start, a.end()] {
                let t = t.rem_euclid(TAU);
                if !out.iter().any(|s| circ_dist(*s, t) < 1e-12) {
                    out.push(t);
                }
            }
        }
        out
    }

    /// Geodesic gap between the patch (if any) and Σ.
    pub fn patch_gap(&self) -> Option<f64> {
        let p = self.patch?;
        let gap = self
            .interface_angles()
            .iter()
            .map(|&s| p.distance(s) * self.radius)
            .fold(f64::INFINITY, f64::min);
        Some(gap)
    }
}

fn circ_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// Places the patch of geodesic radius `eps` at the configured center.
pub fn make_patch(partition: &BoundaryPartition, eps: f64) -> Result<BoundaryPartition> {
    if eps < 0.0 || !eps.is_finite() {
        return Err(Error::InvalidInput(format!("patch radius {eps} must be nonnegative")));
    }
    let mut out = partition.clone();
    if eps == 0.0 {
        out.patch = None;
        return Ok(out);
    }
    let half = eps / partition.radius;
    let arc = Arc2::centered(partition.patch_center_angle, half);
    out.patch = Some(arc);
    let gap = out.patch_gap().unwrap_or(f64::INFINITY);
    // the whole patch must sit in one host region
    let host = partition.host_type(partition.patch_center_angle);
    let same_host = [arc.start, arc.end()].iter().all(|&t| partition.host_type(t) == host);
    if gap < partition.d_min || !same_host {
        return Err(Error::SeparationViolation { eps, d_min: partition.d_min, gap });
    }
    Ok(out)
}

/// A point on a supported boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryPoint {
    Circle { radius: f64, angle: f64 },
    Sphere { radius: f64, x: [f64; 3] },
}

/// Intrinsic distance between two boundary points.
pub fn geodesic_distance(p: BoundaryPoint, q: BoundaryPoint) -> Result<f64> {
    match (p, q) {
        (BoundaryPoint::Circle { radius: r1, angle: a }, BoundaryPoint::Circle { radius: r2, angle: b })
            if r1 == r2 =>
        {
            Ok(r1 * circ_dist(a, b))
        }
        (BoundaryPoint::Sphere { radius: r1, x }, BoundaryPoint::Sphere { radius: r2, x: y }) if r1 == r2 => {
            let nx = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
            let ny = (y[0] * y[0] + y[1] * y[1] + y[2] * y[2]).sqrt();
            let c = (x[0] * y[0] + x[1] * y[1] + x[2] * y[2]) / (nx * ny);
            Ok(r1 * c.clamp(-1.0, 1.0).acos())
        }
        _ => Err(Error::UnsupportedGeometry("points lie on different boundaries".into())),
    }
}

/// Euclidean position of a boundary point (3D for spheres, z = 0 for circles).
pub fn boundary_point_position(p: BoundaryPoint) -> [f64; 3] {
    match p {
        BoundaryPoint::Circle { radius, angle } => [radius * angle.cos(), radius * angle.sin(), 0.0],
        BoundaryPoint::Sphere { x, .. } => x,
    }
}

pub type Mat2 = [[f64; 2]; 2];

/// Flattening diffeomorphism `T` from the lower half-plane onto the disk,
/// written in the patch-local frame: the patch center is the origin and
/// `e₂` is the outward normal there.
///
/// `T(z) = z / (1 + i z / (2r))` in complex notation. It is conformal, so
/// the induced coefficient field is `A(y) = γ(T(y)) I`.
#[derive(Debug, Clone)]
pub struct FlatteningMap {
    radius: f64,
    center: Point,
    e1: Point,
    e2: Point,
    gamma: Conductivity,
}

pub fn build_flattening(spec: &DomainSpec) -> Result<FlatteningMap> {
    if spec.kind != DomainKind::MappedHalfPlane {
        return Err(Error::UnsupportedGeometry("flattening needs a MappedHalfPlane domain".into()));
    }
    let th = spec.patch_center_angle;
    Ok(FlatteningMap {
        radius: spec.radius,
        center: [spec.radius * th.cos(), spec.radius * th.sin()],
        e1: [th.sin(), -th.cos()],
        e2: [th.cos(), th.sin()],
        gamma: spec.gamma.clone(),
    })
}

impl FlatteningMap {
    fn denom(&self, y: Point) -> (f64, f64) {
        // 1 + i z / (2r) with z = y1 + i y2
        let k = 0.5 / self.radius;
        (1.0 - k * y[1], k * y[0])
    }

    /// `T(y)` in local coordinates.
    pub fn forward(&self, y: Point) -> Point {
        let (dr, di) = self.denom(y);
        let d2 = dr * dr + di * di;
        [(y[0] * dr + y[1] * di) / d2, (y[1] * dr - y[0] * di) / d2]
    }

    /// Local to global coordinates of the disk centered at the origin.
    pub fn to_global(&self, x: Point) -> Point {
        [
            self.center[0] + x[0] * self.e1[0] + x[1] * self.e2[0],
            self.center[1] + x[0] * self.e1[1] + x[1] * self.e2[1],
        ]
    }

    pub fn jacobian(&self, y: Point) -> Mat2 {
        // T'(z) = 1 / (1 + i z/(2r))²
        let (dr, di) = self.denom(y);
        let (sr, si) = (dr * dr - di * di, 2.0 * dr * di);
        let s2 = sr * sr + si * si;
        let (a, b) = (sr / s2, -si / s2);
        [[a, -b], [b, a]]
    }

    pub fn gamma_at(&self, y: Point) -> f64 {
        self.gamma.value(self.to_global(self.forward(y)))
    }

    /// `A(y) = |det ∇T| γ(T(y)) ∇T⁻¹ ∇T⁻ᵀ`.
    pub fn a_field(&self, y: Point) -> Mat2 {
        let j = self.jacobian(y);
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        let inv = [[j[1][1] / det, -j[0][1] / det], [-j[1][0] / det, j[0][0] / det]];
        let g = det.abs() * self.gamma_at(y);
        let mut a = [[0.0; 2]; 2];
        for (r, row) in a.iter_mut().enumerate() {
            for (c, v) in row.iter_mut().enumerate() {
                *v = g * (inv[r][0] * inv[c][0] + inv[r][1] * inv[c][1]);
            }
        }
        a
    }

    /// `g(y) = |det ∇T(y)| f(T(y))` for a source given in global coordinates.
    pub fn g_field(&self, y: Point, f: &dyn Fn(Point) -> f64) -> f64 {
        let j = self.jacobian(y);
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        det.abs() * f(self.to_global(self.forward(y)))
    }

    /// Eigenvalues of `A(y)`, ascending.
    pub fn a_eigenvalues(&self, y: Point) -> [f64; 2] {
        let a = self.a_field(y);
        let (mut l, _) = sym_eigen(&DenseMatrix::from_fn(2, 2, |i, j| a[i][j]));
        l.sort_by(|x, y| x.partial_cmp(y).unwrap_or(core::cmp::Ordering::Equal));
        [l[0], l[1]]
    }
}
