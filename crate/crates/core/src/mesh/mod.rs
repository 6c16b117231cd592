//! Triangular meshes with labeled boundary edges, graded toward patch
//! endpoints.

mod kdtree;
mod locate;

pub use locate::Locator;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use crate::geometry::{BcType, BoundaryPartition, DomainKind, DomainSpec};
use crate::{Error, Point, Result};
use kdtree::KdTree;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeLabel {
    Dirichlet,
    Neumann,
    Patch,
}

impl EdgeLabel {
    pub fn name(self) -> &'static str {
        match self {
            Self::Dirichlet => "dirichlet",
            Self::Neumann => "neumann",
            Self::Patch => "patch",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "dirichlet" => Some(Self::Dirichlet),
            "neumann" => Some(Self::Neumann),
            "patch" => Some(Self::Patch),
            _ => None,
        }
    }
}

/// An edge with a label. Boundary edges are oriented with the domain on
/// their left. `tag` distinguishes patch components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LabeledEdge {
    pub nodes: [usize; 2],
    pub label: EdgeLabel,
    pub tag: u32,
}

/// Geometric refinement toward patch endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grading {
    /// Background size.
    pub h: f64,
    /// Size on the patch away from its endpoints (0 without a patch).
    pub h_patch: f64,
    /// Size reduction per layer toward an endpoint.
    pub ratio: f64,
    pub layers: u32,
}

impl Grading {
    pub fn uniform(h: f64) -> Self {
        Self { h, h_patch: 0.0, ratio: 1.0, layers: 0 }
    }

    pub fn h_min(&self) -> f64 {
        if self.h_patch > 0.0 {
            self.h_patch * self.ratio.powi(self.layers as i32)
        } else {
            self.h
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub nodes: Vec<Point>,
    pub triangles: Vec<[usize; 3]>,
    pub boundary_edges: Vec<LabeledEdge>,
    /// Interior edges carrying a label (embedded patches of capacity meshes).
    pub embedded_edges: Vec<LabeledEdge>,
    pub grading: Grading,
}

impl Mesh {
    pub fn signed_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangles[t];
        let (p, q, r) = (self.nodes[a], self.nodes[b], self.nodes[c]);
        0.5 * ((q[0] - p[0]) * (r[1] - p[1]) - (r[0] - p[0]) * (q[1] - p[1]))
    }

    pub fn total_area(&self) -> f64 {
        (0..self.triangles.len()).map(|t| self.signed_area(t)).sum()
    }

    /// Unique undirected edges.
    pub fn edges(&self) -> Vec<[usize; 2]> {
        let mut set = BTreeSet::new();
        for t in &self.triangles {
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                set.insert([a.min(b), a.max(b)]);
            }
        }
        set.into_iter().collect()
    }

    /// `V - E + F`.
    pub fn euler_characteristic(&self) -> i64 {
        self.nodes.len() as i64 - self.edges().len() as i64 + self.triangles.len() as i64
    }

    /// Nodes touched by boundary or embedded edges with one of `labels`.
    pub fn nodes_with_labels(&self, labels: &[EdgeLabel]) -> Vec<bool> {
        let mut mask = vec![false; self.nodes.len()];
        for e in self.boundary_edges.iter().chain(&self.embedded_edges) {
            if labels.contains(&e.label) {
                mask[e.nodes[0]] = true;
                mask[e.nodes[1]] = true;
            }
        }
        mask
    }

    pub fn edge_length(&self, e: &LabeledEdge) -> f64 {
        dist(self.nodes[e.nodes[0]], self.nodes[e.nodes[1]])
    }

    /// Outward unit normal of an oriented boundary edge.
    pub fn edge_normal(&self, e: &LabeledEdge) -> Point {
        let (a, b) = (self.nodes[e.nodes[0]], self.nodes[e.nodes[1]]);
        let l = dist(a, b);
        [(b[1] - a[1]) / l, -(b[0] - a[0]) / l]
    }

    /// Longest edge labeled `label`, or 0.
    pub fn max_edge_with_label(&self, label: EdgeLabel) -> f64 {
        self.boundary_edges
            .iter()
            .chain(&self.embedded_edges)
            .filter(|e| e.label == label)
            .map(|e| self.edge_length(e))
            .fold(0.0, f64::max)
    }

    pub fn min_edge_with_label(&self, label: EdgeLabel) -> f64 {
        self.boundary_edges
            .iter()
            .chain(&self.embedded_edges)
            .filter(|e| e.label == label)
            .map(|e| self.edge_length(e))
            .fold(f64::INFINITY, f64::min)
    }

    /// Node whose position is closest to `p`.
    pub fn nearest_node(&self, p: Point) -> usize {
        let mut best = (0, f64::INFINITY);
        for (i, q) in self.nodes.iter().enumerate() {
            let d = dist(*q, p);
            if d < best.1 {
                best = (i, d);
            }
        }
        best.0
    }

    /// Applies a node permutation `perm[new] = old`.
    pub fn renumbered(&self, perm: &[usize]) -> Mesh {
        let mut inv = vec![0; perm.len()];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let map_edge = |e: &LabeledEdge| LabeledEdge { nodes: [inv[e.nodes[0]], inv[e.nodes[1]]], ..*e };
        Mesh {
            nodes: perm.iter().map(|&o| self.nodes[o]).collect(),
            triangles: self.triangles.iter().map(|t| [inv[t[0]], inv[t[1]], inv[t[2]]]).collect(),
            boundary_edges: self.boundary_edges.iter().map(map_edge).collect(),
            embedded_edges: self.embedded_edges.iter().map(map_edge).collect(),
            grading: self.grading,
        }
    }

    /// Checks positive areas and that every edge has at most two triangles.
    pub fn validate(&self) -> Result<()> {
        for t in 0..self.triangles.len() {
            if !(self.signed_area(t) > 0.0) {
                return Err(Error::MeshFailure(format!("triangle {t} is inverted or degenerate")));
            }
        }
        let mut count: BTreeMap<[usize; 2], u32> = BTreeMap::new();
        for t in &self.triangles {
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                *count.entry([a.min(b), a.max(b)]).or_default() += 1;
            }
        }
        if count.values().any(|&c| c > 2) {
            return Err(Error::MeshFailure("non-manifold edge".into()));
        }
        Ok(())
    }
}

pub(crate) fn dist(a: Point, b: Point) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

/// Input to [`triangulate`].
pub struct MeshInput<'a> {
    /// Outer boundary, counter-clockwise, implicitly closed.
    pub loop_pts: Vec<Point>,
    /// Label of edge `i -> i+1`.
    pub loop_labels: Vec<EdgeLabel>,
    /// Open polylines that must appear as mesh edges. Endpoints may repeat
    /// loop points exactly.
    pub embedded: Vec<(Vec<Point>, EdgeLabel, u32)>,
    /// Signed distance to the outer boundary, positive inside.
    pub inside: &'a dyn Fn(Point) -> f64,
    pub size: &'a dyn Fn(Point) -> f64,
    pub bbox: [Point; 2],
    pub grading: Grading,
}

/// Places parameters in `[0, len]` along a curve so that consecutive points
/// are about `size` apart. Includes both ends.
pub fn distribute(len: f64, at: &dyn Fn(f64) -> Point, size: &dyn Fn(Point) -> f64) -> Vec<f64> {
    let mut table = vec![(0.0, 0.0)];
    let (mut s, mut acc) = (0.0, 0.0);
    while s < len {
        let ds = (0.2 * size(at(s))).min(len - s);
        acc += ds / size(at(s + 0.5 * ds));
        s += ds;
        table.push((s, acc));
    }
    let n = (acc.round() as usize).max(1);
    let mut out = Vec::with_capacity(n + 1);
    out.push(0.0);
    let mut j = 0;
    for k in 1..n {
        let target = acc * k as f64 / n as f64;
        while table[j + 1].1 < target {
            j += 1;
        }
        let (s0, a0) = table[j];
        let (s1, a1) = table[j + 1];
        out.push(s0 + (s1 - s0) * (target - a0) / (a1 - a0));
    }
    out.push(len);
    out
}

/// Delaunay triangulation of the loop, the embedded polylines, and
/// quadtree interior points. Fails if a required edge is missing.
pub fn triangulate(input: &MeshInput<'_>) -> Result<Mesh> {
    let mut nodes: Vec<Point> = Vec::new();
    let mut key: BTreeMap<(u64, u64), usize> = BTreeMap::new();
    let mut add = |p: Point, nodes: &mut Vec<Point>| -> usize {
        *key.entry((p[0].to_bits(), p[1].to_bits())).or_insert_with(|| {
            nodes.push(p);
            nodes.len() - 1
        })
    };
    let loop_ids: Vec<usize> = input.loop_pts.iter().map(|&p| add(p, &mut nodes)).collect();
    let mut boundary_edges = Vec::new();
    let nl = loop_ids.len();
    for i in 0..nl {
        boundary_edges.push(LabeledEdge {
            nodes: [loop_ids[i], loop_ids[(i + 1) % nl]],
            label: input.loop_labels[i],
            tag: 0,
        });
    }
    let mut embedded_edges = Vec::new();
    for (poly, label, tag) in &input.embedded {
        let ids: Vec<usize> = poly.iter().map(|&p| add(p, &mut nodes)).collect();
        for w in ids.windows(2) {
            embedded_edges.push(LabeledEdge { nodes: [w[0], w[1]], label: *label, tag: *tag });
        }
    }

    let fixed_tree = KdTree::new(nodes.clone());
    let seg_len: Vec<f64> = boundary_edges
        .iter()
        .chain(&embedded_edges)
        .map(|e| dist(nodes[e.nodes[0]], nodes[e.nodes[1]]))
        .collect();
    let seg_mid: Vec<Point> = boundary_edges
        .iter()
        .chain(&embedded_edges)
        .map(|e| {
            let (a, b) = (nodes[e.nodes[0]], nodes[e.nodes[1]]);
            [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])]
        })
        .collect();
    let max_seg = seg_len.iter().copied().fold(0.0, f64::max);
    let mid_tree = KdTree::new(seg_mid.clone());

    let [lo, hi] = input.bbox;
    let half0 = 0.5 * (hi[0] - lo[0]).max(hi[1] - lo[1]);
    let mut stack = vec![([0.5 * (lo[0] + hi[0]), 0.5 * (lo[1] + hi[1])], half0, 0u32)];
    let mut near = Vec::new();
    while let Some((c, half, depth)) = stack.pop() {
        let d_in = (input.inside)(c);
        if d_in < -half * core::f64::consts::SQRT_2 {
            continue;
        }
        let h = (input.size)(c);
        if 2.0 * half > 0.9 * h && depth < 48 {
            let q = 0.5 * half;
            for (dx, dy) in [(-q, -q), (q, -q), (-q, q), (q, q)] {
                stack.push(([c[0] + dx, c[1] + dy], q, depth + 1));
            }
            continue;
        }
        if d_in < 0.45 * h || fixed_tree.any_within(c, 0.7 * h) {
            continue;
        }
        mid_tree.within(c, (2.0 * h).max(0.56 * max_seg.min(4.0 * h)), &mut near);
        if near.iter().any(|&j| dist(c, seg_mid[j]) < 0.55 * seg_len[j]) {
            continue;
        }
        nodes.push(c);
    }

    let dpts: Vec<delaunator::Point> = nodes.iter().map(|p| delaunator::Point { x: p[0], y: p[1] }).collect();
    let tri = delaunator::triangulate(&dpts);
    let mut triangles = Vec::with_capacity(tri.triangles.len() / 3);
    for t in tri.triangles.chunks_exact(3) {
        let (a, b, c) = (t[0], t[1], t[2]);
        let (p, q, r) = (nodes[a], nodes[b], nodes[c]);
        let area = 0.5 * ((q[0] - p[0]) * (r[1] - p[1]) - (r[0] - p[0]) * (q[1] - p[1]));
        let cen = [(p[0] + q[0] + r[0]) / 3.0, (p[1] + q[1] + r[1]) / 3.0];
        if (input.inside)(cen) < 0.0 || area.abs() <= 1e-300 {
            continue;
        }
        triangles.push(if area > 0.0 { [a, b, c] } else { [a, c, b] });
    }

    let mut present = BTreeSet::new();
    for t in &triangles {
        for k in 0..3 {
            let (a, b) = (t[k], t[(k + 1) % 3]);
            present.insert([a.min(b), a.max(b)]);
        }
    }
    let missing = boundary_edges
        .iter()
        .chain(&embedded_edges)
        .filter(|e| !present.contains(&[e.nodes[0].min(e.nodes[1]), e.nodes[0].max(e.nodes[1])]))
        .count();
    if missing > 0 {
        return Err(Error::MeshFailure(format!("{missing} constrained edges missing from the triangulation")));
    }
    let mesh = Mesh { nodes, triangles, boundary_edges, embedded_edges, grading: input.grading };
    mesh.validate()?;
    Ok(mesh)
}

/// Size field of the disk meshes: background `h`, geometric layers toward
/// the patch endpoints, mild refinement toward Σ and the patch center.
pub fn disk_size_field(
    spec: &DomainSpec,
    partition: &BoundaryPartition,
    h: f64,
) -> (Grading, impl Fn(Point) -> f64 + use<>) {
    let r = spec.radius;
    let sigma: Vec<Point> = partition.interface_angles().iter().map(|&t| spec.boundary_point(t)).collect();
    let center = spec.boundary_point(partition.patch_center_angle);
    let patch = partition.patch;
    let eps = patch.map_or(0.0, |p| 0.5 * p.len * r);
    let grading = if eps > 0.0 {
        Grading { h, h_patch: eps / 8.0, ratio: 0.5, layers: 6 }
    } else {
        Grading::uniform(h)
    };
    let ends: Vec<Point> = patch.map_or(Vec::new(), |p| alloc::vec![spec.boundary_point(p.start), spec.boundary_point(p.end())]);
    let size = move |x: Point| -> f64 {
        let mut s = h;
        for q in &sigma {
            s = s.min(0.25 * h + 0.3 * dist(x, *q));
        }
        s = s.min(0.125 * h + 0.3 * dist(x, center));
        if let Some(p) = patch {
            let d_e = ends.iter().map(|q| dist(x, *q)).fold(f64::INFINITY, f64::min);
            let theta = x[1].atan2(x[0]);
            let d_p = if p.contains(theta) { (r - (x[0] * x[0] + x[1] * x[1]).sqrt()).abs() } else { d_e };
            let layer = (d_e / eps).clamp(0.5f64.powi(6), 1.0);
            s = s.min(eps / 8.0 * layer + 0.3 * d_p);
        }
        s
    };
    (grading, size)
}

/// Conforming mesh of the disk with edges labeled by `partition`.
pub fn generate_mesh(spec: &DomainSpec, partition: &BoundaryPartition, h: f64) -> Result<Mesh> {
    if !(h > 0.0) {
        return Err(Error::MeshFailure(format!("mesh size {h} must be positive")));
    }
    if spec.kind != DomainKind::UnitDisk {
        return Err(Error::UnsupportedGeometry("meshing supports the disk only".into()));
    }
    let r = spec.radius;
    let (grading, size) = disk_size_field(spec, partition, h);
    let mut breaks: Vec<f64> = partition.interface_angles();
    breaks.push(partition.patch_center_angle);
    if let Some(p) = partition.patch {
        breaks.push(p.start);
        breaks.push(p.end());
    }
    let mut breaks: Vec<f64> = breaks.iter().map(|t| t.rem_euclid(TAU)).collect();
    breaks.sort_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal));
    breaks.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
    let mut angles = Vec::new();
    for i in 0..breaks.len() {
        let a = breaks[i];
        let b = if i + 1 < breaks.len() { breaks[i + 1] } else { breaks[0] + TAU };
        let at = |s: f64| spec.boundary_point(a + s / r);
        let params = distribute((b - a) * r, &at, &size);
        for s in &params[..params.len() - 1] {
            angles.push(a + s / r);
        }
    }
    let loop_pts: Vec<Point> = angles.iter().map(|&t| spec.boundary_point(t)).collect();
    let loop_labels: Vec<EdgeLabel> = (0..angles.len())
        .map(|i| {
            let a = angles[i];
            let mut b = angles[(i + 1) % angles.len()];
            if b < a {
                b += TAU;
            }
            let mid = 0.5 * (a + b);
            match partition.patch {
                Some(p) if p.contains(mid) => EdgeLabel::Patch,
                _ => match partition.host_type(mid) {
                    BcType::Dirichlet => EdgeLabel::Dirichlet,
                    BcType::Neumann => EdgeLabel::Neumann,
                },
            }
        })
        .collect();
    let inside = |x: Point| r - (x[0] * x[0] + x[1] * x[1]).sqrt();
    let input = MeshInput {
        loop_pts,
        loop_labels,
        embedded: Vec::new(),
        inside: &inside,
        size: &size,
        bbox: [[-r, -r], [r, r]],
        grading,
    };
    triangulate(&input)
}

/// Turns the embedded edges with `tag` into a two-sided crack: nodes off
/// the crack tips are duplicated, and the triangles on the right of the
/// polyline direction get the copies.
///
/// Each crack edge becomes two boundary edges labeled like the original,
/// one per face, both oriented with the domain on their left.
pub fn split_crack(mesh: &mut Mesh, tag: u32) -> Result<()> {
    let crack: Vec<LabeledEdge> = mesh.embedded_edges.iter().copied().filter(|e| e.tag == tag).collect();
    if crack.is_empty() {
        return Ok(());
    }
    mesh.embedded_edges.retain(|e| e.tag != tag);
    let n = mesh.nodes.len();
    let mut deg = vec![0u32; n];
    let mut normal = vec![[0.0f64; 2]; n];
    for e in &crack {
        let (a, b) = (mesh.nodes[e.nodes[0]], mesh.nodes[e.nodes[1]]);
        let l = dist(a, b);
        let nl = [-(b[1] - a[1]) / l, (b[0] - a[0]) / l];
        for &v in &e.nodes {
            deg[v] += 1;
            normal[v][0] += nl[0];
            normal[v][1] += nl[1];
        }
    }
    let mut on_outer = vec![false; n];
    for e in &mesh.boundary_edges {
        on_outer[e.nodes[0]] = true;
        on_outer[e.nodes[1]] = true;
    }
    let mut copy = vec![usize::MAX; n];
    for v in 0..n {
        if deg[v] >= 2 || (deg[v] == 1 && on_outer[v]) {
            copy[v] = mesh.nodes.len();
            mesh.nodes.push(mesh.nodes[v]);
        }
    }
    let below = |p: Point, v: usize, nodes: &[Point]| -> bool {
        let x = nodes[v];
        (p[0] - x[0]) * normal[v][0] + (p[1] - x[1]) * normal[v][1] < 0.0
    };
    let nodes_snapshot = mesh.nodes.clone();
    for t in mesh.triangles.iter_mut() {
        let cen = [
            (nodes_snapshot[t[0]][0] + nodes_snapshot[t[1]][0] + nodes_snapshot[t[2]][0]) / 3.0,
            (nodes_snapshot[t[0]][1] + nodes_snapshot[t[1]][1] + nodes_snapshot[t[2]][1]) / 3.0,
        ];
        for v in t.iter_mut() {
            if *v < n && copy[*v] != usize::MAX && below(cen, *v, &nodes_snapshot) {
                *v = copy[*v];
            }
        }
    }
    for e in mesh.boundary_edges.iter_mut() {
        let (a, b) = (nodes_snapshot[e.nodes[0]], nodes_snapshot[e.nodes[1]]);
        let mid = [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])];
        for v in e.nodes.iter_mut() {
            if copy[*v] != usize::MAX && below(mid, *v, &nodes_snapshot) {
                *v = copy[*v];
            }
        }
    }
    for e in &crack {
        let [a, b] = e.nodes;
        let ca = if copy[a] == usize::MAX { a } else { copy[a] };
        let cb = if copy[b] == usize::MAX { b } else { copy[b] };
        mesh.boundary_edges.push(LabeledEdge { nodes: [a, b], label: e.label, tag });
        mesh.boundary_edges.push(LabeledEdge { nodes: [cb, ca], label: e.label, tag });
    }
    mesh.validate()
}
