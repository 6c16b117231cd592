use std::io::BufReader;
use std::sync::Arc;

use patchasym::dump::{read_matrix, read_mesh, write_density, write_kernel_matrix, write_matrix, write_mesh};
use patchasym_core::capacity::{exterior_mesh, PatchShape};
use patchasym_core::geometry::{make_patch, BoundaryPartition, Conductivity, DomainSpec};
use patchasym_core::layer_ops::{op_S1, solve_S1, RefGeometry};
use patchasym_core::linalg::DenseMatrix;
use patchasym_core::mesh::{generate_mesh, EdgeLabel};

#[test]
fn disk_mesh_round_trips() {
    let part = make_patch(&BoundaryPartition::half_split(true), 0.05).unwrap();
    let spec = DomainSpec::unit_disk(part.patch_center_angle, Conductivity::Constant(1.0));
    let mesh = Arc::new(generate_mesh(&spec, &part, 0.2).unwrap());
    let mut buf = Vec::new();
    write_mesh(&mut buf, &mesh).unwrap();
    assert_eq!(read_mesh(BufReader::new(buf.as_slice())).unwrap(), *mesh);
}

#[test]
fn embedded_edges_round_trip() {
    let mesh = exterior_mesh(&PatchShape::segment(0.1), 1.0, 0.05, EdgeLabel::Dirichlet).unwrap();
    assert!(!mesh.embedded_edges.is_empty());
    let mut buf = Vec::new();
    write_mesh(&mut buf, &mesh).unwrap();
    assert_eq!(read_mesh(buf.as_slice()).unwrap(), mesh);
}

#[test]
fn malformed_mesh_is_rejected() {
    let bad = [
        "",
        "grading 1 0 1 0\nnodes 1\n0 0 0\ntriangles 1\n0 0 1 2\nedges 0\n",
        "grading 1 0 1 0\nnodes 1\n0 0 0\ntriangles 0\nedges 1\nboundary 0 0 lava 0\n",
        "grading 1 0 1 0\nnodes 2\n0 0 0\n",
    ];
    for t in bad {
        assert!(read_mesh(t.as_bytes()).is_err(), "accepted {t:?}");
    }
}

#[test]
fn matrix_round_trips() {
    let m = DenseMatrix::from_fn(3, 4, |i, j| (i as f64 + 1.0).ln() - 0.1 * j as f64 + 1e-300);
    let mut buf = Vec::new();
    write_matrix(&mut buf, "two\nlines", &m).unwrap();
    assert_eq!(read_matrix(buf.as_slice()).unwrap(), m);
}

#[test]
fn operator_and_density_dumps() {
    let s1 = op_S1(RefGeometry::Segment, 8).unwrap();
    let mut buf = Vec::new();
    write_kernel_matrix(&mut buf, &s1).unwrap();
    assert_eq!(read_matrix(buf.as_slice()).unwrap(), s1.matrix);
    let sol = solve_S1(&s1, &s1.density(vec![1.0; 8])).unwrap();
    let mut buf = Vec::new();
    write_density(&mut buf, &sol).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let rows: Vec<Vec<f64>> = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split_whitespace().map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 8);
    assert!(rows.iter().zip(&sol.values).all(|(r, v)| r.len() == 4 && r[3] == *v));
}
