//! P1 finite elements for `-div(γ∇u) + c·u = f` with mixed boundary
//! conditions, plus the auxiliary problems χ_ε, ζ_ε, v_ε and
//! post-processing (fluxes, norms, compliance).
//!
//! Essential conditions are imposed by symmetric elimination; natural
//! conditions by boundary load assembly. The optional axisymmetric mode
//! weights every integral by the first coordinate, for meridian-plane
//! problems.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::geometry::{BcType, BoundaryPartition, Conductivity};
use crate::linalg::{norm2, EnvelopeCholesky, SparseSym};
use crate::mesh::{EdgeLabel, LabeledEdge, Locator, Mesh};
use crate::quadrature::TRI7;
use crate::{Error, Point, Result};

/// Three-point Gauss–Legendre on `[0, 1]`.
const EDGE_GL: [(f64, f64); 3] = [
    (0.112_701_665_379_258_3, 5.0 / 18.0),
    (0.5, 8.0 / 18.0),
    (0.887_298_334_620_741_7, 5.0 / 18.0),
];

/// Gradients of the barycentric coordinates and the area of triangle `t`.
pub fn p1_gradients(mesh: &Mesh, t: usize) -> ([[f64; 2]; 3], f64) {
    let [a, b, c] = mesh.triangles[t];
    let p = [mesh.nodes[a], mesh.nodes[b], mesh.nodes[c]];
    let area = mesh.signed_area(t);
    let mut g = [[0.0; 2]; 3];
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        g[i] = [(p[j][1] - p[k][1]) / (2.0 * area), (p[k][0] - p[j][0]) / (2.0 * area)];
    }
    (g, area)
}

fn tri_point(mesh: &Mesh, t: usize, l: [f64; 3]) -> Point {
    let [a, b, c] = mesh.triangles[t];
    let (pa, pb, pc) = (mesh.nodes[a], mesh.nodes[b], mesh.nodes[c]);
    [
        l[0] * pa[0] + l[1] * pb[0] + l[2] * pc[0],
        l[0] * pa[1] + l[1] * pb[1] + l[2] * pc[1],
    ]
}

/// Barycentric corners of the `4^levels` congruent pieces of a triangle.
fn subdivide(levels: u32) -> Vec<[[f64; 3]; 3]> {
    let mut out = vec![[[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]];
    for _ in 0..levels {
        let mut next = Vec::with_capacity(out.len() * 4);
        for [a, b, c] in out {
            let mid = |p: [f64; 3], q: [f64; 3]| [0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1]), 0.5 * (p[2] + q[2])];
            let (ab, bc, ca) = (mid(a, b), mid(b, c), mid(c, a));
            next.extend([[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]]);
        }
        out = next;
    }
    out
}

/// Assembled operator `-div(γ∇·) + c` on a mesh.
#[derive(Debug, Clone)]
pub struct Operator {
    pub mesh: Arc<Mesh>,
    pub matrix: SparseSym,
    pub axisymmetric: bool,
    gamma_nodes: Vec<f64>,
}

impl Operator {
    pub fn assemble(mesh: &Arc<Mesh>, gamma: &dyn Fn(Point) -> f64, reaction: f64, axisymmetric: bool) -> Self {
        let weight = |p: Point| if axisymmetric { p[0] } else { 1.0 };
        let mut trip = Vec::with_capacity(mesh.triangles.len() * 6);
        for t in 0..mesh.triangles.len() {
            let (g, area) = p1_gradients(mesh, t);
            let mut kint = 0.0;
            let mut mass = [[0.0; 3]; 3];
            for (l, w) in TRI7.iter() {
                let x = tri_point(mesh, t, *l);
                let wx = weight(x) * w * area;
                kint += gamma(x) * wx;
                if reaction != 0.0 {
                    for i in 0..3 {
                        for j in 0..3 {
                            mass[i][j] += reaction * wx * l[i] * l[j];
                        }
                    }
                }
            }
            let tri = mesh.triangles[t];
            for i in 0..3 {
                for j in 0..=i {
                    let k = kint * (g[i][0] * g[j][0] + g[i][1] * g[j][1]) + mass[i][j];
                    let (a, b) = (tri[i].max(tri[j]), tri[i].min(tri[j]));
                    trip.push((a, b, k));
                }
            }
        }
        let matrix = SparseSym::from_lower_triplets(mesh.nodes.len(), &trip);
        let gamma_nodes = mesh.nodes.iter().map(|&p| gamma(p)).collect();
        Self { mesh: mesh.clone(), matrix, axisymmetric, gamma_nodes }
    }

    fn weight(&self, p: Point) -> f64 {
        if self.axisymmetric {
            p[0]
        } else {
            1.0
        }
    }

    /// `∫ f λ_i` (weighted).
    pub fn load_volume(&self, f: &dyn Fn(Point) -> f64) -> Vec<f64> {
        let mesh = &self.mesh;
        let mut b = vec![0.0; mesh.nodes.len()];
        for t in 0..mesh.triangles.len() {
            let area = mesh.signed_area(t);
            let tri = mesh.triangles[t];
            for (l, w) in TRI7.iter() {
                let x = tri_point(mesh, t, *l);
                let v = f(x) * self.weight(x) * w * area;
                for i in 0..3 {
                    b[tri[i]] += v * l[i];
                }
            }
        }
        b
    }

    /// `∫ f λ_i` with the triangles whose centroid lies within `radius` of
    /// `center` split into `4^levels` pieces, for sources with an
    /// integrable point singularity at `center`.
    pub fn load_volume_near(&self, f: &dyn Fn(Point) -> f64, center: Point, radius: f64, levels: u32) -> Vec<f64> {
        let mesh = &self.mesh;
        let mut b = vec![0.0; mesh.nodes.len()];
        let pieces = subdivide(levels);
        for t in 0..mesh.triangles.len() {
            let area = mesh.signed_area(t);
            let tri = mesh.triangles[t];
            let c = tri_point(mesh, t, [1.0 / 3.0; 3]);
            let near = (c[0] - center[0]).powi(2) + (c[1] - center[1]).powi(2) <= radius * radius;
            let single = [[[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]];
            let parts: &[[[f64; 3]; 3]] = if near { &pieces } else { &single };
            let scale = area / parts.len() as f64;
            for corners in parts {
                for (l, w) in TRI7.iter() {
                    let mut lam = [0.0; 3];
                    for k in 0..3 {
                        for i in 0..3 {
                            lam[i] += l[k] * corners[k][i];
                        }
                    }
                    let x = tri_point(mesh, t, lam);
                    let v = f(x) * self.weight(x) * w * scale;
                    for i in 0..3 {
                        b[tri[i]] += v * lam[i];
                    }
                }
            }
        }
        b
    }

    /// `∫ g λ_i ds` over boundary edges with one of `labels`. `g` gets the
    /// edge, the point, and the outward unit normal.
    pub fn load_flux(
        &self,
        labels: &[EdgeLabel],
        g: &dyn Fn(&LabeledEdge, Point, Point) -> f64,
    ) -> Vec<f64> {
        let mesh = &self.mesh;
        let mut b = vec![0.0; mesh.nodes.len()];
        for e in mesh.boundary_edges.iter().filter(|e| labels.contains(&e.label)) {
            let (pa, pb) = (mesh.nodes[e.nodes[0]], mesh.nodes[e.nodes[1]]);
            let len = mesh.edge_length(e);
            let nrm = mesh.edge_normal(e);
            for (s, w) in EDGE_GL {
                let x = [pa[0] + s * (pb[0] - pa[0]), pa[1] + s * (pb[1] - pa[1])];
                let v = g(e, x, nrm) * self.weight(x) * w * len;
                b[e.nodes[0]] += v * (1.0 - s);
                b[e.nodes[1]] += v * s;
            }
        }
        b
    }

    /// Factors the block of free (non-essential) nodes.
    pub fn factor(&self, essential: &[bool]) -> Result<Factored<'_>> {
        let n = self.mesh.nodes.len();
        let mut index = vec![usize::MAX; n];
        let mut free = Vec::new();
        for i in 0..n {
            if !essential[i] {
                index[i] = free.len();
                free.push(i);
            }
        }
        let mut trip = Vec::new();
        for (fi, &i) in free.iter().enumerate() {
            for &(j, v) in self.matrix.row(i) {
                let fj = index[j];
                if fj != usize::MAX && fj <= fi {
                    trip.push((fi, fj, v));
                }
            }
        }
        let kff = SparseSym::from_lower_triplets(free.len(), &trip);
        let chol = EnvelopeCholesky::factor_rcm(&kff)?;
        Ok(Factored { op: self, essential: essential.to_vec(), index, free, kff, chol })
    }
}

/// Factorization of the free block of an [`Operator`].
pub struct Factored<'a> {
    op: &'a Operator,
    essential: Vec<bool>,
    index: Vec<usize>,
    free: Vec<usize>,
    kff: SparseSym,
    chol: EnvelopeCholesky,
}

impl Factored<'_> {
    /// Solves with nodal load `load` (volume plus natural terms) and
    /// essential values `fixed` (read at essential nodes only).
    ///
    /// `volume_load` is the volume part alone; it is kept to recover
    /// boundary fluxes by the residual method.
    pub fn solve(&self, load: &[f64], volume_load: &[f64], fixed: &[f64]) -> Result<ScalarField> {
        let op = self.op;
        let n = op.mesh.nodes.len();
        let mut u = vec![0.0; n];
        for i in 0..n {
            if self.essential[i] {
                u[i] = fixed[i];
            }
        }
        let mut rhs: Vec<f64> = self.free.iter().map(|&i| load[i]).collect();
        for (fi, &i) in self.free.iter().enumerate() {
            for &(j, v) in op.matrix.row(i) {
                if self.essential[j] {
                    rhs[fi] -= v * u[j];
                }
            }
        }
        let mut x = self.chol.solve(&rhs);
        let scale = norm2(&rhs);
        let mut rel = 0.0;
        for _ in 0..3 {
            let ax = self.kff.matvec(&x);
            let r: Vec<f64> = rhs.iter().zip(&ax).map(|(b, a)| b - a).collect();
            rel = if scale > 0.0 { norm2(&r) / scale } else { norm2(&r) };
            if rel <= 1e-12 {
                break;
            }
            let dx = self.chol.solve(&r);
            x.iter_mut().zip(&dx).for_each(|(a, d)| *a += d);
        }
        if rel > 1e-10 {
            return Err(Error::SolverFailure(alloc::format!("relative residual {rel:e}")));
        }
        for (fi, &i) in self.free.iter().enumerate() {
            u[i] = x[fi];
        }
        let _ = &self.index;
        let ku = op.matrix.matvec(&u);
        let residual: Vec<f64> = ku.iter().zip(volume_load).map(|(a, b)| a - b).collect();
        Ok(ScalarField {
            mesh: op.mesh.clone(),
            values: u,
            essential: self.essential.clone(),
            residual,
            gamma_nodes: op.gamma_nodes.clone(),
            axisymmetric: op.axisymmetric,
            relative_residual: rel,
        })
    }
}

/// P1 function on a mesh.
#[derive(Debug, Clone)]
pub struct ScalarField {
    pub mesh: Arc<Mesh>,
    pub values: Vec<f64>,
    pub essential: Vec<bool>,
    /// `K u - ∫ f λ_i`: the weak boundary flux at every node.
    residual: Vec<f64>,
    gamma_nodes: Vec<f64>,
    pub axisymmetric: bool,
    /// Relative residual of the final linear solve.
    pub relative_residual: f64,
}

/// Nodal boundary values.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryFunction {
    pub nodes: Vec<usize>,
    pub points: Vec<Point>,
    pub values: Vec<f64>,
}

impl BoundaryFunction {
    /// Value at the listed node closest to `p`.
    pub fn value_near(&self, p: Point) -> f64 {
        let mut best = (f64::INFINITY, 0.0);
        for (q, v) in self.points.iter().zip(&self.values) {
            let d = (q[0] - p[0]).powi(2) + (q[1] - p[1]).powi(2);
            if d < best.0 {
                best = (d, *v);
            }
        }
        best.1
    }
}

impl ScalarField {
    fn weight(&self, p: Point) -> f64 {
        if self.axisymmetric {
            p[0]
        } else {
            1.0
        }
    }

    /// `∫ |∇u|²` (weighted), exact for P1.
    pub fn h1_seminorm_sq(&self) -> f64 {
        let mesh = &self.mesh;
        let mut s = 0.0;
        for t in 0..mesh.triangles.len() {
            let (g, area) = p1_gradients(mesh, t);
            let tri = mesh.triangles[t];
            let mut grad = [0.0; 2];
            for i in 0..3 {
                grad[0] += g[i][0] * self.values[tri[i]];
                grad[1] += g[i][1] * self.values[tri[i]];
            }
            let wbar = if self.axisymmetric {
                (mesh.nodes[tri[0]][0] + mesh.nodes[tri[1]][0] + mesh.nodes[tri[2]][0]) / 3.0
            } else {
                1.0
            };
            s += (grad[0] * grad[0] + grad[1] * grad[1]) * area * wbar;
        }
        s
    }

    /// `∫ u²` (weighted), exact for P1.
    pub fn l2_norm_sq(&self) -> f64 {
        self.integrate(&|_, u| u * u)
    }

    pub fn h1_norm_sq(&self) -> f64 {
        self.h1_seminorm_sq() + self.l2_norm_sq()
    }

    /// `∫ F(x, u(x)) dx` with the degree-5 triangle rule.
    pub fn integrate(&self, f: &dyn Fn(Point, f64) -> f64) -> f64 {
        let mesh = &self.mesh;
        let mut s = 0.0;
        for t in 0..mesh.triangles.len() {
            let area = mesh.signed_area(t);
            let tri = mesh.triangles[t];
            for (l, w) in TRI7.iter() {
                let x = tri_point(mesh, t, *l);
                let u = l[0] * self.values[tri[0]] + l[1] * self.values[tri[1]] + l[2] * self.values[tri[2]];
                s += f(x, u) * self.weight(x) * w * area;
            }
        }
        s
    }

    pub fn sub(&self, other: &ScalarField) -> ScalarField {
        let mut out = self.clone();
        out.values.iter_mut().zip(&other.values).for_each(|(a, b)| *a -= b);
        out.residual.iter_mut().zip(&other.residual).for_each(|(a, b)| *a -= b);
        out
    }

    /// Value at `p` by P1 interpolation; `None` outside the mesh.
    pub fn eval(&self, locator: &Locator, p: Point) -> Option<f64> {
        let (t, l) = locator.locate(&self.mesh, p, 1e-3)?;
        let tri = self.mesh.triangles[t];
        Some(l[0] * self.values[tri[0]] + l[1] * self.values[tri[1]] + l[2] * self.values[tri[2]])
    }

    pub fn locator(&self) -> Locator {
        Locator::new(&self.mesh)
    }
}

/// Variationally consistent normal derivative `∂u/∂n` on the nodes of edges
/// labeled `label`, computed from the discrete residual (not from element
/// gradients): the weak flux is projected with the boundary mass matrix.
pub fn normal_flux(field: &ScalarField, label: EdgeLabel) -> Result<BoundaryFunction> {
    let mesh = &field.mesh;
    let n = mesh.nodes.len();
    let mut index = vec![usize::MAX; n];
    let mut bnodes = Vec::new();
    for e in &mesh.boundary_edges {
        for &v in &e.nodes {
            if index[v] == usize::MAX {
                index[v] = bnodes.len();
                bnodes.push(v);
            }
        }
    }
    let mut trip = Vec::new();
    for e in &mesh.boundary_edges {
        let (a, b) = (index[e.nodes[0]], index[e.nodes[1]]);
        let (pa, pb) = (mesh.nodes[e.nodes[0]], mesh.nodes[e.nodes[1]]);
        let len = mesh.edge_length(e);
        let mut m = [[0.0; 2]; 2];
        for (s, w) in EDGE_GL {
            let x = [pa[0] + s * (pb[0] - pa[0]), pa[1] + s * (pb[1] - pa[1])];
            let phi = [1.0 - s, s];
            for i in 0..2 {
                for j in 0..2 {
                    m[i][j] += field.weight(x) * w * len * phi[i] * phi[j];
                }
            }
        }
        trip.push((a, a, m[0][0]));
        trip.push((b, b, m[1][1]));
        trip.push((a.max(b), a.min(b), m[0][1]));
    }
    let mb = SparseSym::from_lower_triplets(bnodes.len(), &trip);
    let chol = EnvelopeCholesky::factor_rcm(&mb)?;
    let r: Vec<f64> = bnodes.iter().map(|&v| field.residual[v]).collect();
    let flux = chol.solve(&r);
    let mut out = BoundaryFunction { nodes: Vec::new(), points: Vec::new(), values: Vec::new() };
    let mask = mesh.nodes_with_labels(&[label]);
    for (k, &v) in bnodes.iter().enumerate() {
        let on_label = mesh.boundary_edges.iter().any(|e| e.label == label && e.nodes.contains(&v));
        if mask[v] && on_label {
            out.nodes.push(v);
            out.points.push(mesh.nodes[v]);
            out.values.push(flux[k] / field.gamma_nodes[v]);
        }
    }
    Ok(out)
}

/// `∫ f u dx`.
pub fn compliance(field: &ScalarField, f: &dyn Fn(Point) -> f64) -> f64 {
    field.integrate(&|x, u| f(x) * u)
}

/// Solves `-div(γ∇u) = f`, `u = essential_data` on edges with
/// `essential_labels`, `γ∂u/∂n = flux_data` on edges with `flux_labels`,
/// and `γ∂u/∂n = 0` elsewhere.
///
/// The flux callback receives the edge, the point, and the outward normal.
pub fn solve_mixed(
    mesh: &Arc<Mesh>,
    gamma: &Conductivity,
    f: &dyn Fn(Point) -> f64,
    essential_labels: &[EdgeLabel],
    essential_data: &dyn Fn(Point, EdgeLabel) -> f64,
    flux_labels: &[EdgeLabel],
    flux_data: &dyn Fn(&LabeledEdge, Point, Point) -> f64,
) -> Result<ScalarField> {
    solve_mixed_singular(mesh, gamma, f, None, essential_labels, essential_data, flux_labels, flux_data)
}

/// [`solve_mixed`] for a source with a point singularity at `singular.0`:
/// elements within `singular.1` of it get a subdivided load quadrature.
#[allow(clippy::too_many_arguments)]
pub fn solve_mixed_singular(
    mesh: &Arc<Mesh>,
    gamma: &Conductivity,
    f: &dyn Fn(Point) -> f64,
    singular: Option<(Point, f64)>,
    essential_labels: &[EdgeLabel],
    essential_data: &dyn Fn(Point, EdgeLabel) -> f64,
    flux_labels: &[EdgeLabel],
    flux_data: &dyn Fn(&LabeledEdge, Point, Point) -> f64,
) -> Result<ScalarField> {
    let essential = mesh.nodes_with_labels(essential_labels);
    if !essential.iter().any(|&e| e) {
        return Err(Error::SingularSystem);
    }
    let op = Operator::assemble(mesh, &|p| gamma.value(p), 0.0, false);
    let vol = match singular {
        Some((c, r)) => op.load_volume_near(f, c, r, 4),
        None => op.load_volume(f),
    };
    let nat = op.load_flux(flux_labels, flux_data);
    let load: Vec<f64> = vol.iter().zip(&nat).map(|(a, b)| a + b).collect();
    let fixed = essential_values(mesh, essential_labels, essential_data);
    op.factor(&essential)?.solve(&load, &vol, &fixed)
}

/// Nodal essential data. A node shared by edges of several essential labels
/// takes the value of the first label in `labels`.
fn essential_values(mesh: &Mesh, labels: &[EdgeLabel], data: &dyn Fn(Point, EdgeLabel) -> f64) -> Vec<f64> {
    let mut fixed = vec![0.0; mesh.nodes.len()];
    let mut set = vec![false; mesh.nodes.len()];
    for &lab in labels {
        for e in mesh.boundary_edges.iter().chain(&mesh.embedded_edges).filter(|e| e.label == lab) {
            for &v in &e.nodes {
                if !set[v] {
                    set[v] = true;
                    fixed[v] = data(mesh.nodes[v], lab);
                }
            }
        }
    }
    fixed
}

/// Which labels are essential for the unperturbed problem and for the
/// perturbed one, given where the patch lives.
pub fn essential_labels(partition: &BoundaryPartition, perturbed: bool) -> Vec<EdgeLabel> {
    let patch_dirichlet = match partition.patch_host() {
        BcType::Neumann => perturbed,
        BcType::Dirichlet => !perturbed,
    };
    if patch_dirichlet {
        vec![EdgeLabel::Dirichlet, EdgeLabel::Patch]
    } else {
        vec![EdgeLabel::Dirichlet]
    }
}

/// Background (`perturbed = false`) or perturbed potential with homogeneous
/// boundary data.
pub fn solve_potential(
    mesh: &Arc<Mesh>,
    partition: &BoundaryPartition,
    gamma: &Conductivity,
    f: &dyn Fn(Point) -> f64,
    perturbed: bool,
) -> Result<ScalarField> {
    let labels = essential_labels(partition, perturbed);
    solve_mixed(mesh, gamma, f, &labels, &|_, _| 0.0, &[], &|_, _, _| 0.0)
}

/// `-Δχ = 0`, `χ = 1` on the patch, `χ = 0` on `Γ_D`, natural elsewhere.
pub fn solve_chi_eps(mesh: &Arc<Mesh>, partition: &BoundaryPartition) -> Result<ScalarField> {
    if partition.patch.is_some() && partition.patch_host() != BcType::Neumann {
        return Err(Error::InvalidInput("χ_ε needs the patch in the Neumann region".into()));
    }
    let one = Conductivity::Constant(1.0);
    solve_mixed(
        mesh,
        &one,
        &|_| 0.0,
        &[EdgeLabel::Dirichlet, EdgeLabel::Patch],
        &|_, lab| if lab == EdgeLabel::Patch { 1.0 } else { 0.0 },
        &[],
        &|_, _, _| 0.0,
    )
}

/// `-Δζ = 0`, `ζ = 0` on `Γ_D` off the patch, `∂ζ/∂n = 1` on the patch.
pub fn solve_zeta_eps(mesh: &Arc<Mesh>, partition: &BoundaryPartition) -> Result<ScalarField> {
    if partition.patch.is_some() && partition.patch_host() != BcType::Dirichlet {
        return Err(Error::InvalidInput("ζ_ε needs the patch in the Dirichlet region".into()));
    }
    let one = Conductivity::Constant(1.0);
    solve_mixed(mesh, &one, &|_| 0.0, &[EdgeLabel::Dirichlet], &|_, _| 0.0, &[EdgeLabel::Patch], &|_, _, _| 1.0)
}

/// `-div(γ∇v) = 0`, `v = 0` on `Γ_D` off the patch, and on the patch either
/// `v = g` (patch in the Neumann region) or `γ∂v/∂n = g` (patch in the
/// Dirichlet region).
pub fn solve_v_eps(
    mesh: &Arc<Mesh>,
    partition: &BoundaryPartition,
    gamma: &Conductivity,
    g: &dyn Fn(Point) -> f64,
) -> Result<ScalarField> {
    match partition.patch_host() {
        BcType::Neumann => solve_mixed(
            mesh,
            gamma,
            &|_| 0.0,
            &[EdgeLabel::Dirichlet, EdgeLabel::Patch],
            &|p, lab| if lab == EdgeLabel::Patch { g(p) } else { 0.0 },
            &[],
            &|_, _, _| 0.0,
        ),
        BcType::Dirichlet => solve_mixed(
            mesh,
            gamma,
            &|_| 0.0,
            &[EdgeLabel::Dirichlet],
            &|_, _| 0.0,
            &[EdgeLabel::Patch],
            &|_, p, _| g(p),
        ),
    }
}
