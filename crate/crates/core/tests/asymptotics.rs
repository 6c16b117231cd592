use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::Arc;

use patchasym_core::asymptotics::{
    coefficient_cross_checks, fundamental_solution_N, predict_compliance_delta, predict_dirichlet_patch,
    predict_neumann_patch, ExpansionPrediction, ExpansionVariant, FundamentalSolution,
};
use patchasym_core::fem::{essential_labels, solve_potential};
use patchasym_core::geometry::{BoundaryPartition, Conductivity, DomainSpec};
use patchasym_core::mesh::{generate_mesh, EdgeLabel, Mesh};
use patchasym_core::Error;

type C = (f64, f64);

fn mul(a: C, b: C) -> C {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

fn div(a: C, b: C) -> C {
    let d = b.0 * b.0 + b.1 * b.1;
    ((a.0 * b.0 + a.1 * b.1) / d, (a.1 * b.0 - a.0 * b.1) / d)
}

fn csqrt(a: C) -> C {
    let r = a.0.hypot(a.1).sqrt();
    let t = a.1.atan2(a.0) / 2.0;
    (r * t.cos(), r * t.sin())
}

fn dist(a: C, b: C) -> f64 {
    (a.0 - b.0).hypot(a.1 - b.1)
}

/// Disk to first quadrant: `z ↦ √(i(1+z)/(1-z))`; the lower half circle
/// goes to the positive real axis, the upper half to the imaginary axis.
fn to_quadrant(p: [f64; 2]) -> C {
    let z = (p[0], p[1]);
    let w = mul((0.0, 1.0), div((1.0 + z.0, z.1), (1.0 - z.0, -z.1)));
    csqrt(w)
}

/// Green's function of the unit disk with `u = 0` on the lower half circle
/// and `∂u/∂n = 0` on the upper half, by conformal images.
fn exact_n(x: [f64; 2], y: [f64; 2]) -> f64 {
    let (a, b) = (to_quadrant(x), to_quadrant(y));
    let bc = (b.0, -b.1);
    let nb = (-b.0, -b.1);
    let nbc = (-b.0, b.1);
    -(dist(a, b).ln() - dist(a, bc).ln() - dist(a, nb).ln() + dist(a, nbc).ln()) / (2.0 * PI)
}

fn disk_mesh(part: &BoundaryPartition, gamma: Conductivity, h: f64) -> Arc<Mesh> {
    Arc::new(generate_mesh(&DomainSpec::unit_disk(FRAC_PI_2, gamma), part, h).unwrap())
}

#[test]
fn image_oracle_satisfies_its_boundary_conditions() {
    let x = [0.2, 0.1];
    for t in [3.5f64, 4.2, 5.9] {
        assert!(exact_n(x, [t.cos(), t.sin()]).abs() < 1e-12);
    }
    let t: f64 = 1.1;
    let (d, h) = (1e-5, 1e-5);
    let inner = exact_n(x, [(1.0 - d) * t.cos(), (1.0 - d) * t.sin()]);
    let outer = exact_n(x, [(1.0 - d - h) * t.cos(), (1.0 - d - h) * t.sin()]);
    assert!(((inner - outer) / h).abs() < 1e-3);
}

#[test]
fn fundamental_solution_matches_conformal_oracle() {
    let part = BoundaryPartition::half_split(true);
    let labels = essential_labels(&part, false);
    let x = [0.1, 0.2];
    let mut errs = Vec::new();
    for h in [0.08, 0.04] {
        let mesh = disk_mesh(&part, Conductivity::Constant(1.0), h);
        let n = FundamentalSolution::new(&mesh, &Conductivity::Constant(1.0), &labels, x).unwrap();
        let mut worst = 0.0f64;
        for y in [[0.0, 1.0], [0.5, -0.3], [-0.6, 0.4], [0.0, 0.9]] {
            worst = worst.max((n.eval(y).unwrap() - exact_n(x, y)).abs());
        }
        errs.push(worst);
    }
    assert!(errs[1] < 2e-3, "{errs:?}");
    assert!(errs[1] < errs[0]);
}

#[test]
fn normal_derivative_on_dirichlet_side() {
    // Dirichlet upper half: rotate the oracle by π
    let part = BoundaryPartition::half_split(false);
    let labels = essential_labels(&part, false);
    let x = [0.2, -0.1];
    let mesh = disk_mesh(&part, Conductivity::Constant(1.0), 0.03);
    let n = FundamentalSolution::new(&mesh, &Conductivity::Constant(1.0), &labels, x).unwrap();
    let exact = |y: [f64; 2]| exact_n([-x[0], -x[1]], [-y[0], -y[1]]);
    let d = 1e-6;
    let want = -exact([0.0, 1.0 - d]) / d;
    let got = n.normal_derivative([0.0, 1.0], [0.0, 1.0], 0.06).unwrap();
    assert!((got - want).abs() <= 0.03 * want.abs(), "{got} vs {want}");
}

#[test]
fn fundamental_solution_is_symmetric() {
    let part = BoundaryPartition::half_split(true);
    let labels = essential_labels(&part, false);
    let gamma = Conductivity::Affine { base: 2.0, grad: [0.5, -0.3] };
    let (x, y) = ([0.3, 0.1], [-0.4, -0.2]);
    let mut defects = Vec::new();
    for h in [0.1, 0.05, 0.025, 0.0125] {
        let mesh = disk_mesh(&part, gamma.clone(), h);
        let a = fundamental_solution_N(&mesh, &gamma, &labels, x, y).unwrap();
        let b = fundamental_solution_N(&mesh, &gamma, &labels, y, x).unwrap();
        defects.push((a - b).abs() / a.abs());
    }
    // pointwise P1 interpolation makes single steps noisy
    assert!(defects.iter().all(|&d| d < 1e-2), "{defects:?}");
    assert!(defects[3] < defects[0] / 3.0, "{defects:?}");
}

#[test]
fn fundamental_solution_reproduces_background_potential() {
    let part = BoundaryPartition::half_split(true);
    let labels = essential_labels(&part, false);
    let gamma = Conductivity::Affine { base: 1.5, grad: [0.3, 0.2] };
    let mesh = disk_mesh(&part, gamma.clone(), 0.03);
    let f = |p: [f64; 2]| 1.0 + p[0];
    let u0 = solve_potential(&mesh, &part, &gamma, &f, false).unwrap();
    let loc = u0.locator();
    for x in [[0.1, 0.2], [-0.3, -0.4]] {
        let n = FundamentalSolution::new(&mesh, &gamma, &labels, x).unwrap();
        let val = n.corrector.integrate(&|y, r| {
            let r2 = (x[0] - y[0]).powi(2) + (x[1] - y[1]).powi(2);
            (-r2.ln() / (4.0 * PI) / n.gamma_x + r) * f(y)
        });
        let want = u0.eval(&loc, x).unwrap();
        assert!((val - want).abs() <= 1e-2 * want.abs(), "{val} vs {want}");
    }
}

#[test]
fn fundamental_solution_boundary_conditions() {
    let part = BoundaryPartition::half_split(true);
    let labels = essential_labels(&part, false);
    let gamma = Conductivity::Constant(1.0);
    let mesh = disk_mesh(&part, gamma.clone(), 0.04);
    let x = [0.2, -0.1];
    let n = FundamentalSolution::new(&mesh, &gamma, &labels, x).unwrap();
    let scale = n.eval([0.0, 0.0]).unwrap().abs();
    for e in mesh.boundary_edges.iter().filter(|e| e.label == EdgeLabel::Dirichlet) {
        let (a, b) = (mesh.nodes[e.nodes[0]], mesh.nodes[e.nodes[1]]);
        let m = [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])];
        assert!(n.eval(a).unwrap().abs() <= 1e-3);
        assert!(n.eval(m).unwrap().abs() <= 1e-3 * scale.max(1.0));
    }
    for t in [1.0f64, 1.4, 1.8, 2.1] {
        let y0 = [t.cos(), t.sin()];
        let flux = n.normal_derivative(y0, y0, 0.08).unwrap();
        assert!(flux.abs() <= 1e-2, "flux {flux} at {t}");
    }
}

#[test]
fn source_near_boundary_is_rejected() {
    let part = BoundaryPartition::half_split(true);
    let mesh = disk_mesh(&part, Conductivity::Constant(1.0), 0.1);
    let r = FundamentalSolution::new(&mesh, &Conductivity::Constant(1.0), &[EdgeLabel::Dirichlet], [0.0, 0.8]);
    assert!(matches!(r, Err(Error::SourceTooCloseToBoundary { .. })));
}

#[test]
fn prediction_formulas() {
    let x = [0.1, 0.2];
    assert_eq!(predict_dirichlet_patch(&x, 0.01, 0.7, 0.0, 1.0, 2), 0.0);
    let eps = 0.01f64;
    let v = predict_dirichlet_patch(&x, eps, 0.7, 0.5, 2.0, 2);
    assert!((v + PI / eps.ln().abs() * 2.0 * 0.5 * 0.7).abs() < 1e-15);
    let v3 = predict_dirichlet_patch(&[0.1, 0.2, 0.3], eps, 0.7, 0.5, 2.0, 3);
    assert!((v3 + 4.0 * eps * 2.0 * 0.5 * 0.7).abs() < 1e-15);
    let w = predict_neumann_patch(&x, eps, -0.3, 1.2, 1.5, 2);
    assert!((w - FRAC_PI_2 * eps * eps * 1.5 * 1.2 * -0.3).abs() < 1e-15);
    let w3 = predict_neumann_patch(&x, eps, -0.3, 1.2, 1.5, 3);
    assert!((w3 - eps.powi(3) / 3.0 * 1.5 * 1.2 * -0.3).abs() < 1e-15);
    // linear in the boundary datum
    let a = predict_dirichlet_patch(&x, eps, 0.7, 2.0, 1.0, 2);
    let b = predict_dirichlet_patch(&x, eps, 0.7, 6.0, 1.0, 2);
    assert!((b - 3.0 * a).abs() < 1e-14);
    let p = ExpansionPrediction::neumann(&x, 1.0, 1.0, 1.0, 2);
    assert_eq!(p.variant, ExpansionVariant::NeumannPatch2D);
    assert_eq!(p.leading_order(0.1), 0.1 * 0.1);
    assert_eq!(ExpansionVariant::DirichletPatch2D.leading_order(0.1), 1.0 / 0.1f64.ln().abs());
    assert_eq!(ExpansionVariant::DirichletPatch3DFormula.leading_order(0.1), 0.1);
    assert_eq!(ExpansionVariant::NeumannPatch3DFormula.leading_order(0.5), 0.125);
}

#[test]
fn compliance_prediction_signs() {
    for eps in [0.1, 0.01] {
        assert!(predict_compliance_delta(ExpansionVariant::DirichletPatch2D, eps, 1.0, 0.4) < 0.0);
        assert!(predict_compliance_delta(ExpansionVariant::DirichletPatch3DFormula, eps, 1.0, -0.4) < 0.0);
        assert!(predict_compliance_delta(ExpansionVariant::NeumannPatch2D, eps, 1.0, -0.4) > 0.0);
        assert!(predict_compliance_delta(ExpansionVariant::NeumannPatch3DFormula, eps, 1.0, 0.4) > 0.0);
    }
    assert_eq!(predict_compliance_delta(ExpansionVariant::DirichletPatch2D, 0.1, 1.0, 0.0), 0.0);
}

#[test]
fn coefficients_agree_with_equilibrium_means() {
    for c in coefficient_cross_checks() {
        assert!(c.defect() <= 1e-12, "{}", c.name);
    }
}
