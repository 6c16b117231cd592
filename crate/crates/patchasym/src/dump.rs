//! Plain-text dumps of meshes, matrices and densities.
//!
//! Mesh format, whitespace separated, `#` starts a comment line:
//!
//! ```text
//! grading <h> <h_patch> <ratio> <layers>
//! nodes <count>
//! <index> <x> <y>                       one line per node
//! triangles <count>
//! <index> <a> <b> <c>                   counter-clockwise node indices
//! edges <count>
//! <kind> <a> <b> <label> <tag>          kind: boundary | embedded
//! ```
//!
//! Numbers are written in shortest round-trip form, so reading a dump
//! gives back the same mesh.

use std::io::{BufRead, Write};

use patchasym_core::layer_ops::{BoundaryDensity, KernelMatrix};
use patchasym_core::linalg::DenseMatrix;
use patchasym_core::mesh::{EdgeLabel, Grading, LabeledEdge, Mesh};

use crate::error::{HarnessError, Result};

pub fn write_mesh<W: Write>(mut w: W, mesh: &Mesh) -> Result<()> {
    let g = &mesh.grading;
    writeln!(w, "# patchasym mesh")?;
    writeln!(w, "# grading h h_patch ratio layers")?;
    writeln!(w, "grading {:e} {:e} {:e} {}", g.h, g.h_patch, g.ratio, g.layers)?;
    writeln!(w, "# index x y")?;
    writeln!(w, "nodes {}", mesh.nodes.len())?;
    for (i, p) in mesh.nodes.iter().enumerate() {
        writeln!(w, "{i} {:e} {:e}", p[0], p[1])?;
    }
    writeln!(w, "# index a b c")?;
    writeln!(w, "triangles {}", mesh.triangles.len())?;
    for (i, t) in mesh.triangles.iter().enumerate() {
        writeln!(w, "{i} {} {} {}", t[0], t[1], t[2])?;
    }
    writeln!(w, "# kind a b label tag")?;
    writeln!(w, "edges {}", mesh.boundary_edges.len() + mesh.embedded_edges.len())?;
    for (kind, list) in [("boundary", &mesh.boundary_edges), ("embedded", &mesh.embedded_edges)] {
        for e in list {
            writeln!(w, "{kind} {} {} {} {}", e.nodes[0], e.nodes[1], e.label.name(), e.tag)?;
        }
    }
    Ok(())
}

struct Lines<R> {
    inner: std::io::Lines<R>,
    line: usize,
}

impl<R: BufRead> Lines<R> {
    /// Next non-comment line, split into fields.
    fn next_fields(&mut self) -> Result<Vec<String>> {
        loop {
            self.line += 1;
            let Some(l) = self.inner.next() else {
                return Err(self.err("unexpected end of input"));
            };
            let l = l?;
            let t = l.trim();
            if !t.is_empty() && !t.starts_with('#') {
                return Ok(t.split_whitespace().map(str::to_string).collect());
            }
        }
    }

    fn err(&self, msg: &str) -> HarnessError {
        HarnessError::Parse { line: self.line, msg: msg.into() }
    }

    fn num<T: std::str::FromStr>(&self, s: &str) -> Result<T> {
        s.parse().map_err(|_| self.err(&format!("bad number `{s}`")))
    }

    fn section(&mut self, name: &str) -> Result<usize> {
        let f = self.next_fields()?;
        if f.len() != 2 || f[0] != name {
            return Err(self.err(&format!("expected `{name} <count>`")));
        }
        self.num(&f[1])
    }

    fn fields(&mut self, n: usize) -> Result<Vec<String>> {
        let f = self.next_fields()?;
        if f.len() != n {
            return Err(self.err(&format!("expected {n} fields, found {}", f.len())));
        }
        Ok(f)
    }
}

pub fn read_mesh<R: BufRead>(r: R) -> Result<Mesh> {
    let mut rd = Lines { inner: r.lines(), line: 0 };
    let g = rd.fields(5)?;
    if g[0] != "grading" {
        return Err(rd.err("expected `grading`"));
    }
    let grading = Grading { h: rd.num(&g[1])?, h_patch: rd.num(&g[2])?, ratio: rd.num(&g[3])?, layers: rd.num(&g[4])? };
    let n = rd.section("nodes")?;
    let mut nodes = Vec::with_capacity(n);
    for i in 0..n {
        let f = rd.fields(3)?;
        if rd.num::<usize>(&f[0])? != i {
            return Err(rd.err("node indices must be consecutive"));
        }
        nodes.push([rd.num(&f[1])?, rd.num(&f[2])?]);
    }
    let nt = rd.section("triangles")?;
    let mut triangles = Vec::with_capacity(nt);
    for _ in 0..nt {
        let f = rd.fields(4)?;
        let t = [rd.num(&f[1])?, rd.num(&f[2])?, rd.num(&f[3])?];
        if t.iter().any(|&v: &usize| v >= n) {
            return Err(rd.err("triangle refers to a missing node"));
        }
        triangles.push(t);
    }
    let ne = rd.section("edges")?;
    let (mut boundary_edges, mut embedded_edges) = (Vec::new(), Vec::new());
    for _ in 0..ne {
        let f = rd.fields(5)?;
        let label = EdgeLabel::parse(&f[3]).ok_or_else(|| rd.err(&format!("unknown label `{}`", f[3])))?;
        let e = LabeledEdge { nodes: [rd.num(&f[1])?, rd.num(&f[2])?], label, tag: rd.num(&f[4])? };
        match f[0].as_str() {
            "boundary" => boundary_edges.push(e),
            "embedded" => embedded_edges.push(e),
            k => return Err(rd.err(&format!("unknown edge kind `{k}`"))),
        }
    }
    Ok(Mesh { nodes, triangles, boundary_edges, embedded_edges, grading })
}

/// `rows cols` on the first data line, then one row per line.
pub fn write_matrix<W: Write>(mut w: W, comment: &str, m: &DenseMatrix) -> Result<()> {
    for l in comment.lines() {
        writeln!(w, "# {l}")?;
    }
    writeln!(w, "{} {}", m.rows, m.cols)?;
    for i in 0..m.rows {
        let row: Vec<String> = m.row(i).iter().map(|v| format!("{v:e}")).collect();
        writeln!(w, "{}", row.join(" "))?;
    }
    Ok(())
}

pub fn read_matrix<R: BufRead>(r: R) -> Result<DenseMatrix> {
    let mut rd = Lines { inner: r.lines(), line: 0 };
    let f = rd.fields(2)?;
    let (rows, cols): (usize, usize) = (rd.num(&f[0])?, rd.num(&f[1])?);
    let mut data = Vec::with_capacity(rows * cols);
    for _ in 0..rows {
        for v in rd.fields(cols)? {
            data.push(rd.num(&v)?);
        }
    }
    Ok(DenseMatrix { rows, cols, data })
}

/// Operator matrix with its nodes and weights as a leading comment block.
pub fn write_kernel_matrix<W: Write>(mut w: W, k: &KernelMatrix) -> Result<()> {
    writeln!(w, "# operator {:?}, densities {:?}", k.tag, k.weight_class)?;
    if let Some(e) = k.eps {
        writeln!(w, "# eps {e:e}")?;
    }
    writeln!(w, "# node x y weight")?;
    for (i, (p, wt)) in k.nodes.iter().zip(&k.weights).enumerate() {
        writeln!(w, "# {i} {:e} {:e} {wt:e}", p[0], p[1])?;
    }
    write_matrix(w, "nodal matrix", &k.matrix)
}

/// Columns `x y weight value` with the regular part `ψ` as `value`.
pub fn write_density<W: Write>(mut w: W, d: &BoundaryDensity) -> Result<()> {
    writeln!(w, "# density on {:?}, class {:?}", d.geometry, d.weight_class)?;
    writeln!(w, "# x y weight value")?;
    for ((p, wt), v) in d.nodes.iter().zip(&d.weights).zip(&d.values) {
        writeln!(w, "{:e} {:e} {wt:e} {v:e}", p[0], p[1])?;
    }
    Ok(())
}
