use alloc::vec::Vec;

use crate::Point;

/// Static 2-d tree over a point set.
#[derive(Debug, Clone)]
pub(crate) struct KdTree {
    pts: Vec<Point>,
    idx: Vec<usize>,
}

impl KdTree {
    pub fn new(pts: Vec<Point>) -> Self {
        let mut idx: Vec<usize> = (0..pts.len()).collect();
        build(&pts, &mut idx, 0);
        Self { pts, idx }
    }

    /// Indices of points with `|p - q| < r`.
    pub fn within(&self, q: Point, r: f64, out: &mut Vec<usize>) {
        out.clear();
        query(&self.pts, &self.idx, 0, q, r * r, out);
    }

    /// True when some point lies within distance `r` of `q`.
    pub fn any_within(&self, q: Point, r: f64) -> bool {
        any(&self.pts, &self.idx, 0, q, r * r)
    }
}

fn build(pts: &[Point], idx: &mut [usize], depth: usize) {
    if idx.len() <= 1 {
        return;
    }
    let axis = depth % 2;
    let mid = idx.len() / 2;
    idx.select_nth_unstable_by(mid, |&a, &b| {
        pts[a][axis].partial_cmp(&pts[b][axis]).unwrap_or(core::cmp::Ordering::Equal)
    });
    let (l, r) = idx.split_at_mut(mid);
    build(pts, l, depth + 1);
    build(pts, &mut r[1..], depth + 1);
}

fn query(pts: &[Point], idx: &[usize], depth: usize, q: Point, r2: f64, out: &mut Vec<usize>) {
    if idx.is_empty() {
        return;
    }
    let axis = depth % 2;
    let mid = idx.len() / 2;
    let p = pts[idx[mid]];
    let dx = p[0] - q[0];
    let dy = p[1] - q[1];
    if dx * dx + dy * dy < r2 {
        out.push(idx[mid]);
    }
    let d = q[axis] - p[axis];
    if d <= 0.0 || d * d < r2 {
        query(pts, &idx[..mid], depth + 1, q, r2, out);
    }
    if d >= 0.0 || d * d < r2 {
        query(pts, &idx[mid + 1..], depth + 1, q, r2, out);
    }
}

fn any(pts: &[Point], idx: &[usize], depth: usize, q: Point, r2: f64) -> bool {
    if idx.is_empty() {
        return false;
    }
    let axis = depth % 2;
    let mid = idx.len() / 2;
    let p = pts[idx[mid]];
    let dx = p[0] - q[0];
    let dy = p[1] - q[1];
    if dx * dx + dy * dy < r2 {
        return true;
    }
    let d = q[axis] - p[axis];
    ((d <= 0.0 || d * d < r2) && any(pts, &idx[..mid], depth + 1, q, r2))
        || ((d >= 0.0 || d * d < r2) && any(pts, &idx[mid + 1..], depth + 1, q, r2))
}
