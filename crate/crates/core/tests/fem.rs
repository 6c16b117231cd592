use std::sync::Arc;

use patchasym_core::fem::{compliance, normal_flux, solve_chi_eps, solve_mixed, solve_zeta_eps};
use patchasym_core::geometry::{make_patch, BoundaryPartition, Conductivity, DomainSpec};
use patchasym_core::mesh::{generate_mesh, EdgeLabel};

fn harmonic(p: [f64; 2]) -> f64 {
    p[0] * p[0] - p[1] * p[1] + 0.5 * p[0]
}

fn harmonic_grad(p: [f64; 2]) -> [f64; 2] {
    [2.0 * p[0] + 0.5, -2.0 * p[1]]
}

fn disk_mesh(h: f64, dirichlet_below: bool, eps: f64) -> (Arc<patchasym_core::mesh::Mesh>, BoundaryPartition) {
    let part = make_patch(&BoundaryPartition::half_split(dirichlet_below), eps).unwrap();
    let spec = DomainSpec::unit_disk(part.patch_center_angle, Conductivity::Constant(1.0));
    (Arc::new(generate_mesh(&spec, &part, h).unwrap()), part)
}

fn max_nodal_error(h: f64) -> f64 {
    let (mesh, _) = disk_mesh(h, true, 0.0);
    let u = solve_mixed(
        &mesh,
        &Conductivity::Constant(1.0),
        &|_| 0.0,
        &[EdgeLabel::Dirichlet],
        &|p, _| harmonic(p),
        &[EdgeLabel::Neumann],
        &|_, p, n| {
            let g = harmonic_grad(p);
            g[0] * n[0] + g[1] * n[1]
        },
    )
    .unwrap();
    assert!(u.relative_residual <= 1e-10);
    mesh.nodes.iter().zip(&u.values).map(|(p, v)| (harmonic(*p) - v).abs()).fold(0.0, f64::max)
}

#[test]
fn mesh_is_a_valid_disk_triangulation() {
    let (mesh, _) = disk_mesh(0.1, true, 0.2);
    mesh.validate().unwrap();
    assert!((mesh.total_area() - std::f64::consts::PI).abs() < 0.02);
    assert_eq!(mesh.euler_characteristic(), 1);
    assert!(mesh.boundary_edges.iter().any(|e| e.label == EdgeLabel::Patch));
    // graded toward the patch
    assert!(mesh.min_edge_with_label(EdgeLabel::Patch) < 0.2 / 8.0);
}

#[test]
fn manufactured_mixed_problem_converges() {
    let e1 = max_nodal_error(0.2);
    let e2 = max_nodal_error(0.1);
    assert!(e2 < 0.02, "error {e2}");
    assert!(e1 / e2 > 2.5, "rate {e1} / {e2}");
}

#[test]
fn residual_flux_matches_exact_normal_derivative() {
    let (mesh, _) = disk_mesh(0.05, true, 0.0);
    let u = solve_mixed(
        &mesh,
        &Conductivity::Constant(1.0),
        &|_| 0.0,
        &[EdgeLabel::Dirichlet],
        &|p, _| harmonic(p),
        &[EdgeLabel::Neumann],
        &|_, p, n| {
            let g = harmonic_grad(p);
            g[0] * n[0] + g[1] * n[1]
        },
    )
    .unwrap();
    let flux = normal_flux(&u, EdgeLabel::Dirichlet).unwrap();
    let mut worst: f64 = 0.0;
    for (p, v) in flux.points.iter().zip(&flux.values) {
        // stay away from the interface points where the flux projection smears
        if p[1] > -0.2 {
            continue;
        }
        let g = harmonic_grad(*p);
        worst = worst.max((g[0] * p[0] + g[1] * p[1] - v).abs());
    }
    assert!(worst < 0.05, "flux error {worst}");
}

#[test]
fn chi_obeys_maximum_principle_and_zeta_is_nonnegative() {
    let (mesh, part) = disk_mesh(0.1, true, 0.1);
    let chi = solve_chi_eps(&mesh, &part).unwrap();
    assert!(chi.values.iter().all(|&v| (-1e-12..=1.0 + 1e-12).contains(&v)));
    let (mesh, part) = disk_mesh(0.1, false, 0.1);
    let zeta = solve_zeta_eps(&mesh, &part).unwrap();
    assert!(zeta.values.iter().all(|&v| v >= -1e-12));
    assert!(zeta.h1_seminorm_sq() > 0.0);
}

#[test]
fn compliance_equals_energy_for_homogeneous_data() {
    let (mesh, _) = disk_mesh(0.1, true, 0.0);
    let u = solve_mixed(
        &mesh,
        &Conductivity::Constant(1.0),
        &|_| 1.0,
        &[EdgeLabel::Dirichlet],
        &|_, _| 0.0,
        &[],
        &|_, _, _| 0.0,
    )
    .unwrap();
    let c = compliance(&u, &|_| 1.0);
    assert!((c - u.h1_seminorm_sq()).abs() < 1e-9 * c);
}
