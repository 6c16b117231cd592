use alloc::vec;
use alloc::vec::Vec;

use super::Mesh;
use crate::Point;

/// Bucket grid over triangle bounding boxes for point location.
#[derive(Debug, Clone)]
pub struct Locator {
    origin: Point,
    cell: [f64; 2],
    nx: usize,
    ny: usize,
    buckets: Vec<Vec<u32>>,
}

impl Locator {
    pub fn new(mesh: &Mesh) -> Self {
        let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for p in &mesh.nodes {
            for k in 0..2 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        let n = ((mesh.triangles.len() as f64).sqrt().ceil() as usize).clamp(1, 2048);
        let cell = [((hi[0] - lo[0]) / n as f64).max(1e-300), ((hi[1] - lo[1]) / n as f64).max(1e-300)];
        let mut loc = Self { origin: lo, cell, nx: n, ny: n, buckets: vec![Vec::new(); n * n] };
        for (t, tri) in mesh.triangles.iter().enumerate() {
            let (mut a, mut b) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
            for &v in tri {
                for k in 0..2 {
                    a[k] = a[k].min(mesh.nodes[v][k]);
                    b[k] = b[k].max(mesh.nodes[v][k]);
                }
            }
            let (i0, j0) = loc.cell_of(a);
            let (i1, j1) = loc.cell_of(b);
            for i in i0..=i1 {
                for j in j0..=j1 {
                    loc.buckets[j * loc.nx + i].push(t as u32);
                }
            }
        }
        loc
    }

    fn cell_of(&self, p: Point) -> (usize, usize) {
        let i = ((p[0] - self.origin[0]) / self.cell[0]).floor();
        let j = ((p[1] - self.origin[1]) / self.cell[1]).floor();
        (
            (i.max(0.0) as usize).min(self.nx - 1),
            (j.max(0.0) as usize).min(self.ny - 1),
        )
    }

    /// Triangle containing `p` and its barycentric coordinates. Points
    /// slightly outside the mesh (within `tol` in barycentric terms) are
    /// clamped to the best triangle.
    pub fn locate(&self, mesh: &Mesh, p: Point, tol: f64) -> Option<(usize, [f64; 3])> {
        let (ci, cj) = self.cell_of(p);
        let mut best: Option<(usize, [f64; 3], f64)> = None;
        for ring in 0..3usize {
            let (i0, i1) = (ci.saturating_sub(ring), (ci + ring).min(self.nx - 1));
            let (j0, j1) = (cj.saturating_sub(ring), (cj + ring).min(self.ny - 1));
            for i in i0..=i1 {
                for j in j0..=j1 {
                    if ring > 0 && i != i0 && i != i1 && j != j0 && j != j1 {
                        continue;
                    }
                    for &t in &self.buckets[j * self.nx + i] {
                        let l = barycentric(mesh, t as usize, p);
                        let worst = l[0].min(l[1]).min(l[2]);
                        if best.map_or(true, |b| worst > b.2) {
                            best = Some((t as usize, l, worst));
                        }
                    }
                }
            }
            if let Some((t, l, w)) = best {
                if w >= -1e-12 {
                    return Some((t, l));
                }
                if ring == 2 && w >= -tol {
                    let c = [l[0].max(0.0), l[1].max(0.0), l[2].max(0.0)];
                    let s = c[0] + c[1] + c[2];
                    return Some((t, [c[0] / s, c[1] / s, c[2] / s]));
                }
            }
        }
        None
    }
}

pub(crate) fn barycentric(mesh: &Mesh, t: usize, p: Point) -> [f64; 3] {
    let [a, b, c] = mesh.triangles[t];
    let (pa, pb, pc) = (mesh.nodes[a], mesh.nodes[b], mesh.nodes[c]);
    let det = (pb[0] - pa[0]) * (pc[1] - pa[1]) - (pc[0] - pa[0]) * (pb[1] - pa[1]);
    let l1 = ((p[0] - pa[0]) * (pc[1] - pa[1]) - (pc[0] - pa[0]) * (p[1] - pa[1])) / det;
    let l2 = ((pb[0] - pa[0]) * (p[1] - pa[1]) - (p[0] - pa[0]) * (pb[1] - pa[1])) / det;
    [1.0 - l1 - l2, l1, l2]
}
