//! Per-ε computations of the five sweep scenarios.
//!
//! All disk scenarios use the unit disk split at the horizontal diameter
//! with the patch centered at `(0, 1)`. `dirichlet2d` has `Γ_D` below and
//! the patch (a Dirichlet patch) in `Γ_N`; `neumann2d` swaps the halves.
//! Both potentials of a row are solved on the same mesh, which is refined
//! around the patch of that row.

use std::f64::consts::FRAC_PI_2;
use std::sync::Arc;

use patchasym_core::asymptotics::{
    predict_compliance_delta, predict_dirichlet_patch, predict_neumann_patch, ExpansionVariant, FundamentalSolution,
};
use patchasym_core::capacity::{arc_dist_integral, cap, d_surrogate, neumann_capacity, PatchShape};
use patchasym_core::fem::{compliance, essential_labels, normal_flux, solve_chi_eps, solve_potential, solve_zeta_eps, ScalarField};
use patchasym_core::geometry::{
    build_flattening, make_patch, Arc2, BoundaryPartition, Conductivity, DomainKind, DomainSpec, FlatteningMap,
};
use patchasym_core::layer_ops::{class_defects, k_eps_3d, teps_residual, veps_inverse_identities, TepsVariant};
use patchasym_core::linalg::DenseMatrix;
use patchasym_core::mesh::{generate_mesh, EdgeLabel, Mesh};
use patchasym_core::{Error, Point, Result};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{Config, Scenario};
use crate::record::SweepRecord;

pub fn conductivity(cfg: &Config) -> Conductivity {
    if cfg.gamma_grad == [0.0, 0.0] {
        Conductivity::Constant(cfg.gamma)
    } else {
        Conductivity::Affine { base: cfg.gamma, grad: cfg.gamma_grad }
    }
}

/// One row. Errors are caught and recorded in `status`.
pub fn run_row(cfg: &Config, index: usize, eps: f64) -> SweepRecord {
    let start = std::time::Instant::now();
    let rec = match cfg.scenario {
        Scenario::Dirichlet2d => dirichlet2d(cfg, eps),
        Scenario::Neumann2d => neumann2d(cfg, eps),
        Scenario::Capacity2d => capacity2d(cfg, eps),
        Scenario::Kernels2d => kernels2d(cfg, index, eps),
        Scenario::Kernels3d => kernels3d(cfg, index, eps),
    };
    let mut rec = match rec {
        Ok(r) => r.finish(),
        Err(e) => SweepRecord::failed(eps, &e.to_string()),
    };
    if cfg.record_wall_time {
        rec.wall_time = Some(start.elapsed().as_secs_f64());
    }
    rec
}

struct DiskRow {
    part: BoundaryPartition,
    mesh: Arc<Mesh>,
    center: Point,
    u0: ScalarField,
    ueps: ScalarField,
}

fn disk_row(cfg: &Config, gamma: &Conductivity, eps: f64, dirichlet_below: bool) -> Result<DiskRow> {
    let part = make_patch(&BoundaryPartition::half_split(dirichlet_below), eps)?;
    let spec = DomainSpec::unit_disk(part.patch_center_angle, gamma.clone());
    let mesh = Arc::new(generate_mesh(&spec, &part, cfg.mesh_h)?);
    let f = |_: Point| cfg.source;
    let u0 = solve_potential(&mesh, &part, gamma, &f, false)?;
    let ueps = solve_potential(&mesh, &part, gamma, &f, true)?;
    let center = spec.boundary_point(part.patch_center_angle);
    Ok(DiskRow { part, mesh, center, u0, ueps })
}

fn fill_common(rec: &mut SweepRecord, cfg: &Config, row: &DiskRow) -> Result<()> {
    let at = |u: &ScalarField| {
        u.eval(&u.locator(), cfg.x).ok_or_else(|| Error::InvalidInput("observation point outside the mesh".into()))
    };
    rec.u0_at_x = Some(at(&row.u0)?);
    rec.ueps_at_x = Some(at(&row.ueps)?);
    rec.computed_delta = Some(rec.ueps_at_x.unwrap() - rec.u0_at_x.unwrap());
    let f = |_: Point| cfg.source;
    rec.compliance_0 = Some(compliance(&row.u0, &f));
    rec.compliance_eps = Some(compliance(&row.ueps, &f));
    let diff = row.ueps.sub(&row.u0);
    rec.h1_delta = Some(diff.h1_norm_sq().sqrt());
    rec.l2_delta = Some(diff.l2_norm_sq().sqrt());
    Ok(())
}

fn dirichlet2d(cfg: &Config, eps: f64) -> Result<SweepRecord> {
    let gamma = conductivity(cfg);
    let row = disk_row(cfg, &gamma, eps, true)?;
    let mut rec = SweepRecord::new(eps);
    fill_common(&mut rec, cfg, &row)?;
    let u00 = row.u0.values[row.mesh.nearest_node(row.center)];
    let n = FundamentalSolution::new(&row.mesh, &gamma, &essential_labels(&row.part, false), cfg.x)?;
    let n_val = n.eval(row.center)?;
    let g0 = gamma.value(row.center);
    rec.boundary_value = Some(u00);
    rec.kernel_value = Some(n_val);
    rec.predicted_delta = Some(predict_dirichlet_patch(&cfg.x, eps, n_val, u00, g0, 2));
    rec.predicted_compliance_delta = Some(predict_compliance_delta(ExpansionVariant::DirichletPatch2D, eps, g0, u00));
    rec.chi_energy = Some(solve_chi_eps(&row.mesh, &row.part)?.h1_norm_sq());
    let shape = PatchShape::unit_arc(row.part.patch_center_angle, eps);
    rec.cap_value = Some(cap(&shape, cfg.truncation_radius, eps / 8.0)?.value);
    Ok(rec)
}

fn neumann2d(cfg: &Config, eps: f64) -> Result<SweepRecord> {
    let gamma = conductivity(cfg);
    let row = disk_row(cfg, &gamma, eps, false)?;
    let mut rec = SweepRecord::new(eps);
    fill_common(&mut rec, cfg, &row)?;
    let du0 = normal_flux(&row.u0, EdgeLabel::Patch)?.value_near(row.center);
    let n = FundamentalSolution::new(&row.mesh, &gamma, &essential_labels(&row.part, false), cfg.x)?;
    let dn = n.normal_derivative(row.center, row.center, 0.5 * cfg.mesh_h)?;
    let g0 = gamma.value(row.center);
    rec.boundary_value = Some(du0);
    rec.kernel_value = Some(dn);
    rec.predicted_delta = Some(predict_neumann_patch(&cfg.x, eps, dn, du0, g0, 2));
    rec.predicted_compliance_delta = Some(predict_compliance_delta(ExpansionVariant::NeumannPatch2D, eps, g0, du0));
    rec.zeta_energy = Some(solve_zeta_eps(&row.mesh, &row.part)?.h1_norm_sq());
    let shape = PatchShape::unit_arc(row.part.patch_center_angle, eps);
    rec.e_value = Some(neumann_capacity(&shape, cfg.truncation_radius, eps / 8.0)?.value);
    Ok(rec)
}

fn capacity2d(cfg: &Config, eps: f64) -> Result<SweepRecord> {
    let mut rec = SweepRecord::new(eps);
    let shape = PatchShape::segment(eps);
    rec.cap_value = Some(cap(&shape, cfg.truncation_radius, eps / 8.0)?.value);
    rec.e_value = Some(neumann_capacity(&shape, cfg.truncation_radius, eps / 8.0)?.value);
    let arc = Arc2::centered(FRAC_PI_2, eps);
    rec.d_value = Some(d_surrogate(Some(&arc), 1.0)?);
    rec.dist_integral = Some(arc_dist_integral(&arc, 1.0)?);
    Ok(rec)
}

/// Flattening of the disk at the patch center with the configured `γ`.
pub fn flattening(cfg: &Config) -> Result<FlatteningMap> {
    let spec = DomainSpec { kind: DomainKind::MappedHalfPlane, radius: 1.0, patch_center_angle: 0.0, gamma: conductivity(cfg) };
    build_flattening(&spec)
}

fn row_rng(cfg: &Config, index: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(index as u64))
}

fn kernels2d(cfg: &Config, index: usize, eps: f64) -> Result<SweepRecord> {
    let flat = flattening(cfg)?;
    let mut rec = SweepRecord::new(eps);
    rec.teps_dirichlet = Some(teps_residual(&flat, eps, cfg.nodes, TepsVariant::DirichletPatch)?);
    rec.teps_neumann = Some(teps_residual(&flat, eps, cfg.nodes, TepsVariant::NeumannPatch)?);
    let mut rng = row_rng(cfg, index);
    let g: Vec<f64> = (0..cfg.nodes).map(|_| rng.random_range(-1.0..1.0)).collect();
    let id = veps_inverse_identities(eps, flat.gamma_at([0.0, 0.0]), cfg.nodes, &g)?;
    rec.veps_inverse = Some(id.vs_direct.max(id.inverse_residual));
    rec.veps_mean = Some(id.mean_defect);
    Ok(rec)
}

/// A smooth SPD coefficient field in 3D with `A(0) = I`.
pub fn sample_field_3d(y: &[f64]) -> DenseMatrix {
    let s = 1.0 + 0.4 * y[0] - 0.2 * y[2];
    DenseMatrix::from_fn(3, 3, |i, j| if i == j { s + 0.1 * i as f64 * y[1] } else { 0.05 * y[1] })
}

fn kernels3d(cfg: &Config, index: usize, eps: f64) -> Result<SweepRecord> {
    let mut rec = SweepRecord::new(eps);
    let k3 = k_eps_3d(sample_field_3d, 1.0, eps);
    let mut rng = row_rng(cfg, index);
    let (mut par, mut hom) = (0.0f64, 0.0f64);
    for _ in 0..10 {
        let x = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), 0.0];
        let z = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
        let t = rng.random_range(0.2..5.0);
        let (p, h) = class_defects(&k3, 1, &x, &z, t);
        par = par.max(p);
        hom = hom.max(h);
    }
    rec.class_parity = Some(par);
    rec.class_homogeneity = Some(hom);
    // Dirichlet disk of radius ε: the 3D leading term with unit data against cap/2
    rec.cap_value = Some(cap(&PatchShape::Disk3 { radius: eps }, cfg.truncation_radius, eps / 8.0)?.value);
    rec.predicted_delta = Some(ExpansionVariant::DirichletPatch3DFormula.coefficient() * eps);
    rec.computed_delta = Some(rec.cap_value.unwrap() / 2.0);
    Ok(rec)
}
