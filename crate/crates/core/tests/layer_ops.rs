use std::f64::consts::{LN_2, PI, TAU};

use patchasym_core::geometry::{build_flattening, Conductivity, DomainKind, DomainSpec};
use patchasym_core::layer_ops::{
    class_defects, equilibrium, green_free, green_grad_y, jump_check, k_eps_2d, k_eps_3d, op_R1, op_S1,
    op_Teps_P, op_Veps, random_smooth_density, solve_R1, solve_S1, teps_residual, veps_alpha,
    veps_inverse_identities, ClosedCurve, HalfSpaceKernel, ImageType, RefGeometry, TepsVariant,
};
use patchasym_core::linalg::DenseMatrix;
use patchasym_core::quadrature::gauss_legendre;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Composite Gauss–Legendre on `[a, b]` with geometric grading towards
/// both ends.
fn graded(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let gl = gauss_legendre(24);
    let mut cuts = vec![0.0, 1.0];
    for k in 1..30 {
        let s = 0.5f64.powi(k);
        cuts.push(0.5 * s);
        cuts.push(1.0 - 0.5 * s);
    }
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let mut total = 0.0;
    for w in cuts.windows(2) {
        let (lo, hi) = (a + (b - a) * w[0], a + (b - a) * w[1]);
        total += gl.mapped(lo, hi).integrate(f);
    }
    total
}

/// `-(1/2π)∫ log|x-y| ψ(y)/√(1-y²) dy` with `y = cos θ`.
fn s1_segment_oracle(psi: &dyn Fn(f64) -> f64, x: f64) -> f64 {
    let t0 = x.acos();
    let f = |t: f64| {
        let d = 2.0 * ((t + t0) / 2.0).sin() * ((t - t0) / 2.0).sin();
        -d.abs().ln() / TAU * psi(t.cos())
    };
    graded(&f, 0.0, t0) + graded(&f, t0, PI)
}

/// `(1/2π) f.p.∫ φ(y)/(x-y)² dy` by subtracting the first-order Taylor
/// polynomial at `x`.
fn r1_segment_oracle(phi: &dyn Fn(f64) -> f64, dphi: &dyn Fn(f64) -> f64, x: f64) -> f64 {
    let (p, dp) = (phi(x), dphi(x));
    let t0 = x.acos();
    let f = |t: f64| {
        let y = t.cos();
        (phi(y) - p - dp * (y - x)) / ((y - x) * (y - x)) * t.sin()
    };
    let gl = gauss_legendre(200);
    let reg = gl.mapped(0.0, t0).integrate(f) + gl.mapped(t0, PI).integrate(f);
    let fp = -2.0 / (1.0 - x * x);
    let pv = ((1.0 - x) / (1.0 + x)).ln();
    (reg + p * fp + dp * pv) / TAU
}

/// Distances `(s₊, s₋)` with `|x + s e| = 1`, `s₋ < 0 < s₊`.
fn chord(x: [f64; 2], e: [f64; 2]) -> (f64, f64) {
    let b = x[0] * e[0] + x[1] * e[1];
    let disc = (b * b + 1.0 - x[0] * x[0] - x[1] * x[1]).sqrt();
    (-b + disc, -b - disc)
}

/// `(1/4π)∫ ψ(y)/(√(1-|y|²)|x-y|) dy` in polar coordinates around `x`.
fn s1_disk_oracle(psi: &dyn Fn([f64; 2]) -> f64, x: [f64; 2]) -> f64 {
    let gl = gauss_legendre(48);
    let na = 256;
    let mut total = 0.0;
    for k in 0..na {
        let a = TAU * k as f64 / na as f64;
        let e = [a.cos(), a.sin()];
        let (sp, sm) = chord(x, e);
        // s = s₊(1 - v²)
        let inner = gl.mapped(0.0, 1.0).integrate(|v| {
            let s = sp * (1.0 - v * v);
            let y = [x[0] + s * e[0], x[1] + s * e[1]];
            let root = ((sp - s) * (s - sm)).sqrt();
            psi(y) / root * 2.0 * sp * v
        });
        total += inner * TAU / na as f64;
    }
    total / (4.0 * PI)
}

/// `(1/4π) f.p.∫ φ(y)/|x-y|³ dy` with `φ = √(1-|y|²) p(y)`, by subtracting
/// the first-order Taylor polynomial of `φ` at `x` along each ray.
fn r1_disk_oracle(p: &dyn Fn([f64; 2]) -> f64, grad_p: &dyn Fn([f64; 2]) -> [f64; 2], x: [f64; 2]) -> f64 {
    let gl = gauss_legendre(64);
    let na = 256;
    let rx = (1.0 - x[0] * x[0] - x[1] * x[1]).sqrt();
    let phi_x = rx * p(x);
    let gp = grad_p(x);
    let grad_phi = [-x[0] / rx * p(x) + rx * gp[0], -x[1] / rx * p(x) + rx * gp[1]];
    let mut total = 0.0;
    for k in 0..na {
        let a = TAU * k as f64 / na as f64;
        let e = [a.cos(), a.sin()];
        let (sp, sm) = chord(x, e);
        let de = grad_phi[0] * e[0] + grad_phi[1] * e[1];
        let reg = gl.mapped(0.0, 1.0).integrate(|v| {
            let s = sp * (1.0 - v * v);
            let y = [x[0] + s * e[0], x[1] + s * e[1]];
            let phi = ((sp - s) * (s - sm)).sqrt() * p(y);
            (phi - phi_x - s * de) / (s * s) * 2.0 * sp * v
        });
        total += (reg - phi_x / sp + de * sp.ln()) * TAU / na as f64;
    }
    total / (4.0 * PI)
}

fn node_near_radius(nodes: &[[f64; 2]], rho: f64) -> usize {
    (0..nodes.len())
        .min_by(|&i, &j| {
            let di = ((nodes[i][0].hypot(nodes[i][1])) - rho).abs();
            let dj = ((nodes[j][0].hypot(nodes[j][1])) - rho).abs();
            di.partial_cmp(&dj).unwrap()
        })
        .unwrap()
}

fn random_spd(rng: &mut ChaCha8Rng, d: usize) -> DenseMatrix {
    let b = DenseMatrix::from_fn(d, d, |_, _| rng.random_range(-1.0..1.0));
    let mut a = b.matmul(&b.transpose());
    for i in 0..d {
        a[(i, i)] += 0.3;
    }
    a
}

#[test]
fn green_is_harmonic_and_symmetric() {
    let x = [0.3, -0.2];
    let h = 1e-4;
    for y in [[1.0, 0.5], [-0.7, 0.9], [0.31, 0.4]] {
        let g = |p: [f64; 2]| green_free(&x, &p).unwrap();
        let lap = (g([y[0] + h, y[1]]) + g([y[0] - h, y[1]]) + g([y[0], y[1] + h]) + g([y[0], y[1] - h])
            - 4.0 * g(y))
            / (h * h);
        assert!(lap.abs() <= 1e-6, "laplacian {lap}");
        assert_eq!(green_free(&x, &y).unwrap(), green_free(&y, &x).unwrap());
    }
    let x3 = [0.1, 0.2, -0.3];
    let y3 = [0.5, -0.4, 0.2];
    let mut lap = 0.0;
    for i in 0..3 {
        let mut p = y3;
        let mut m = y3;
        p[i] += h;
        m[i] -= h;
        lap += green_free(&x3, &p).unwrap() + green_free(&x3, &m).unwrap() - 2.0 * green_free(&x3, &y3).unwrap();
    }
    assert!((lap / (h * h)).abs() <= 1e-5);
    assert!(green_free(&x, &x).is_err());
    assert!(green_grad_y(&x3, &x3).is_err());
}

#[test]
fn green_gradient_matches_difference_quotient() {
    let x = [0.3, -0.2];
    let y = [1.1, 0.4];
    let h = 1e-6;
    let g = green_grad_y(&x, &y).unwrap();
    let fd0 = (green_free(&x, &[y[0] + h, y[1]]).unwrap() - green_free(&x, &[y[0] - h, y[1]]).unwrap()) / (2.0 * h);
    assert!((g[0] - fd0).abs() < 1e-8);
}

#[test]
fn jump_relations_on_circle_and_ellipse() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let n = 1 << 14;
    let circle = ClosedCurve::circle([0.0, 0.0], 1.0, n);
    let ellipse = ClosedCurve::from_param(n, |t| [1.5 * t.cos(), 0.8 * t.sin()], |t| [-1.5 * t.sin(), 0.8 * t.cos()]);
    for curve in [&circle, &ellipse] {
        for _ in 0..5 {
            let coeffs: Vec<f64> = (0..9).map(|_| rng.random_range(-1.0..1.0)).collect();
            let phi = random_smooth_density(curve, &coeffs, 4);
            for i in [0, n / 7, n / 3, 5 * n / 8] {
                let r = jump_check(curve, &phi, i, 0.01);
                assert!(r.max_defect() <= 1e-3, "defect {} at node {i}", r.max_defect());
            }
        }
    }
}

#[test]
fn single_layer_far_field() {
    let curve = ClosedCurve::circle([0.2, -0.1], 0.7, 512);
    let phi = random_smooth_density(&curve, &[0.5, 0.3, -0.2, 0.1, 0.4], 2);
    let total: f64 = phi.iter().zip(&curve.weights).map(|(p, w)| p * w).sum();
    let mut prev = f64::INFINITY;
    for r in [10.0, 100.0, 1000.0] {
        let x = [r * 0.6, r * 0.8];
        let rem = (curve.single_layer(&phi, x) + total / TAU * f64::ln(r)).abs();
        assert!(rem * r < 2.0, "remainder {rem} at {r}");
        assert!(rem < prev);
        prev = rem;
    }
}

#[test]
fn half_space_kernels() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut count = 0;
    for trial in 0..120 {
        let d = if trial % 2 == 0 { 2 } else { 3 };
        let a = random_spd(&mut rng, d);
        let neu = HalfSpaceKernel::new(a.clone(), ImageType::NeumannImage).unwrap();
        let dir = HalfSpaceKernel::new(a.clone(), ImageType::DirichletImage).unwrap();
        assert!(neu.m_squared_defect() <= 1e-12);
        let mut x: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
        x[d - 1] = -rng.random_range(0.1..1.0);
        let mut y: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
        y[d - 1] = 0.0;
        // wall conditions
        let (_, g) = neu.eval(&x, &y).unwrap();
        let flux: f64 = (0..d).map(|j| a[(d - 1, j)] * g[j]).sum();
        let scale = g.iter().map(|v| v * v).sum::<f64>().sqrt() * a.max_abs();
        assert!(flux.abs() <= 1e-8 * scale, "co-normal flux {flux}");
        let (v, _) = dir.eval(&x, &y).unwrap();
        assert!(v.abs() <= 1e-12, "dirichlet trace {v}");
        // reflection identity for a point on the wall
        let mut z: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
        z[d - 1] = -rng.random_range(0.0..1.0);
        while x.iter().zip(&z).map(|(p, q)| (p - q).powi(2)).sum::<f64>() < 0.04 {
            z[0] += 0.3;
        }
        assert!(neu.reflection_defect(&y, &z) <= 1e-12);
        // PDE in y away from x, fourth-order differences of the flux
        let h = 1e-3;
        for k in [&neu, &dir] {
            let mut div = 0.0;
            for i in 0..d {
                let flux = |s: f64| {
                    let mut zs = z.clone();
                    zs[i] += s;
                    let g = k.eval(&x, &zs).unwrap().1;
                    (0..d).map(|j| a[(i, j)] * g[j]).sum::<f64>()
                };
                div += (-flux(2.0 * h) + 8.0 * flux(h) - 8.0 * flux(-h) + flux(-2.0 * h)) / (12.0 * h);
            }
            let r: f64 = x.iter().zip(&z).map(|(p, q)| (p - q).powi(2)).sum::<f64>().sqrt();
            let gz = k.eval(&x, &z).unwrap().1;
            let scale = gz.iter().map(|v| v * v).sum::<f64>().sqrt() * a.max_abs() / r;
            assert!(div.abs() <= 1e-5 * scale, "div {div} scale {scale}");
        }
        // gradient against difference quotients
        let (v0, g0) = neu.eval(&x, &z).unwrap();
        for i in 0..d {
            let mut zp = z.clone();
            zp[i] += 1e-6;
            let fd = (neu.eval(&x, &zp).unwrap().0 - v0) / 1e-6;
            assert!((fd - g0[i]).abs() <= 1e-4 * (1.0 + g0[i].abs()));
        }
        count += 1;
    }
    assert!(count >= 100);
    let bad = DenseMatrix::from_fn(2, 2, |i, j| if i == j { -1.0 } else { 0.0 });
    assert!(HalfSpaceKernel::new(bad, ImageType::NeumannImage).is_err());
}

#[test]
fn segment_s1_equilibrium_and_quadrature() {
    let s1 = op_S1(RefGeometry::Segment, 256).unwrap();
    assert!(s1.matrix.asymmetry() <= 1e-12);
    let phi = s1.density_from(|_| 2.0 / LN_2);
    for v in s1.apply(&phi) {
        assert!((v - 1.0).abs() <= 1e-3);
    }
    let one = s1.density(vec![1.0; 256]);
    let sol = solve_S1(&s1, &one).unwrap();
    assert!((sol.mean() - equilibrium::S1_SEGMENT_MEAN).abs() <= 1e-3 * equilibrium::S1_SEGMENT_MEAN);
    let mid = sol.nodes.iter().position(|p| p[0].abs() < 0.02).unwrap();
    let at0 = sol.density_at(mid) * (1.0 - sol.nodes[mid][0].powi(2)).sqrt();
    assert!((at0 - 2.0 / LN_2).abs() <= 1e-2);
    // a non-equilibrium density against direct quadrature of the log kernel
    let psi = |y: f64| (2.0 * y).cos() + y * y * y;
    let s1s = op_S1(RefGeometry::Segment, 48).unwrap();
    let out = s1s.apply(&s1s.density_from(|p| psi(p[0])));
    for i in [0, 7, 23, 40] {
        let want = s1_segment_oracle(&psi, s1s.nodes[i][0]);
        assert!((out[i] - want).abs() <= 1e-9, "node {i}: {} vs {want}", out[i]);
    }
}

#[test]
fn segment_s1_is_positive_on_mean_zero_densities() {
    let s1 = op_S1(RefGeometry::Segment, 64).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..10 {
        let mut psi: Vec<f64> = (0..64).map(|_| rng.random_range(-1.0..1.0)).collect();
        let mean: f64 = psi.iter().zip(&s1.weights).map(|(p, w)| p * w).sum::<f64>() / PI;
        psi.iter_mut().for_each(|p| *p -= mean);
        let s = s1.matrix.matvec(&psi);
        let pairing: f64 = s.iter().zip(&psi).zip(&s1.weights).map(|((a, b), w)| a * b * w).sum();
        assert!(pairing > 0.0);
    }
}

#[test]
fn segment_r1_equilibrium_and_finite_part() {
    let r1 = op_R1(RefGeometry::Segment, 256).unwrap();
    let phi = r1.density_from(|_| -2.0);
    for v in r1.apply(&phi) {
        assert!((v - 1.0).abs() <= 1e-2);
    }
    let sol = solve_R1(&r1, &r1.density(vec![1.0; 256])).unwrap();
    assert!((sol.mean() - equilibrium::R1_SEGMENT_MEAN).abs() <= 1e-2 * PI);
    let mid = sol.nodes.iter().position(|p| p[0].abs() < 0.02).unwrap();
    assert!((sol.density_at(mid) / (1.0 - sol.nodes[mid][0].powi(2)).sqrt() - (-2.0)).abs() <= 2e-2);
    // φ = √(1-y²)(1 + y + y³)
    let p = |y: f64| 1.0 + y + y * y * y;
    let phi = |y: f64| (1.0 - y * y).sqrt() * p(y);
    let dphi = |y: f64| -y / (1.0 - y * y).sqrt() * p(y) + (1.0 - y * y).sqrt() * (1.0 + 3.0 * y * y);
    let r1s = op_R1(RefGeometry::Segment, 32).unwrap();
    let out = r1s.apply(&r1s.density_from(|q| p(q[0])));
    for i in [3, 10, 16, 27] {
        let want = r1_segment_oracle(&phi, &dphi, r1s.nodes[i][0]);
        assert!((out[i] - want).abs() <= 1e-6 * (1.0 + want.abs()), "node {i}: {} vs {want}", out[i]);
    }
    let scaled = r1s.apply(&r1s.density_from(|q| 3.0 * p(q[0])));
    for (a, b) in scaled.iter().zip(&out) {
        assert!((a - 3.0 * b).abs() <= 1e-12 * (1.0 + a.abs()));
    }
}

#[test]
fn disk_s1_equilibrium_and_quadrature() {
    let s1 = op_S1(RefGeometry::Disk, 24).unwrap();
    // symmetric as a bilinear form: diag(w)·S₁
    let form = s1.matrix.scale_rows(&s1.weights);
    assert!(form.asymmetry() <= 1e-12 * form.max_abs());
    let out = s1.apply(&s1.density_from(|_| 4.0 / PI));
    for v in &out {
        assert!((v - 1.0).abs() <= 1e-3);
    }
    let sol = solve_S1(&s1, &s1.density(vec![1.0; s1.nodes.len()])).unwrap();
    assert!((sol.mean() - 8.0).abs() <= 8e-3);
    let psi = |y: [f64; 2]| 1.0 + y[0] + y[0] * y[1];
    let img = s1.apply(&s1.density_from(psi));
    for rho in [0.0, 0.3, 0.6] {
        let i = node_near_radius(&s1.nodes, rho);
        let want = s1_disk_oracle(&psi, s1.nodes[i]);
        assert!((img[i] - want).abs() <= 1e-6, "|x| = {rho}: {} vs {want}", img[i]);
    }
}

#[test]
fn disk_r1_against_finite_part_quadrature() {
    let r1 = op_R1(RefGeometry::Disk, 24).unwrap();
    let one = |_: [f64; 2]| 1.0;
    let zero = |_: [f64; 2]| [0.0, 0.0];
    let lin = |y: [f64; 2]| y[0];
    let dlin = |_: [f64; 2]| [1.0, 0.0];
    let img1 = r1.apply(&r1.density_from(one));
    let img2 = r1.apply(&r1.density_from(lin));
    for rho in [0.0, 0.3, 0.6] {
        let i = node_near_radius(&r1.nodes, rho);
        let x = r1.nodes[i];
        let w1 = r1_disk_oracle(&one, &zero, x);
        let w2 = r1_disk_oracle(&lin, &dlin, x);
        assert!((w1 + PI / 4.0).abs() <= 1e-5, "oracle {w1}");
        assert!((img1[i] - w1).abs() <= 1e-5, "|x| = {rho}: {} vs {w1}", img1[i]);
        assert!((img2[i] - w2).abs() <= 1e-5, "|x| = {rho}: {} vs {w2}", img2[i]);
    }
}

#[test]
fn solvers_invert_forward_operators() {
    for geo in [RefGeometry::Segment, RefGeometry::Disk] {
        let n = if geo == RefGeometry::Segment { 64 } else { 12 };
        let s1 = op_S1(geo, n).unwrap();
        let psi = s1.density_from(|p| 1.0 + 0.5 * p[0] - p[1] * p[0]);
        let back = solve_S1(&s1, &s1.density(s1.apply(&psi))).unwrap();
        let err = back.values.iter().zip(&psi.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(err <= 1e-8, "{geo:?}: {err}");
        assert!(solve_R1(&s1, &psi).is_err());
    }
}

#[test]
fn veps_identities() {
    assert_eq!(veps_alpha(1.0), 0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (eps, g0) in [(0.1, 1.0), (1e-3, 2.5), (1e-6, 0.7)] {
        let g: Vec<f64> = (0..64).map(|_| rng.random_range(-1.0..1.0)).collect();
        let id = veps_inverse_identities(eps, g0, 64, &g).unwrap();
        assert!(id.inverse_residual <= 1e-8);
        assert!(id.vs_direct <= 1e-8);
        assert!(id.mean_defect <= 1e-10);
    }
    let mut prev = f64::INFINITY;
    for k in [4, 8, 16, 32] {
        let eps = 2f64.powi(-k);
        let v = op_Veps(eps, 1.0, 64).unwrap();
        let s = patchasym_core::layer_ops::veps_inverse_apply(&op_S1(RefGeometry::Segment, 64).unwrap(), eps, 0.0, &vec![1.0; 64]).unwrap();
        let mean: f64 = s.iter().zip(&v.weights).map(|(a, w)| a * w).sum();
        let l = eps.ln().abs();
        let gap = (mean * l - 1.0).abs();
        let c = equilibrium::S1_SEGMENT_MEAN;
        assert!((gap - TAU / (TAU + l * c)).abs() <= 1e-10);
        assert!(gap < prev);
        prev = gap;
    }
    assert!(prev < 0.035);
    assert!(op_Veps(1.5, 1.0, 16).is_err());
}

fn flattening(gamma: Conductivity) -> patchasym_core::geometry::FlatteningMap {
    let spec = DomainSpec { kind: DomainKind::MappedHalfPlane, radius: 1.0, patch_center_angle: 0.0, gamma };
    build_flattening(&spec).unwrap()
}

#[test]
fn teps_constant_coefficients() {
    let flat = flattening(Conductivity::Constant(1.0));
    let eps = 0.01;
    let t = op_Teps_P(&flat, eps, 32, TepsVariant::DirichletPatch).unwrap();
    let s1 = op_S1(RefGeometry::Segment, 32).unwrap();
    // A = I + O(ε) on the patch
    let want = DenseMatrix::from_fn(32, 32, |i, j| eps.ln().abs() / PI * s1.weights[j] + 2.0 * s1.matrix[(i, j)]);
    assert!(t.matrix.sub(&want).max_abs() <= 1e-3);
    assert!(teps_residual(&flat, eps, 32, TepsVariant::DirichletPatch).unwrap() <= 1e-3);
}

#[test]
fn teps_residuals_decrease() {
    let flat = flattening(Conductivity::Affine { base: 2.0, grad: [0.6, 0.4] });
    for variant in [TepsVariant::DirichletPatch, TepsVariant::NeumannPatch] {
        let mut prev = f64::INFINITY;
        for k in 2..8 {
            let r = teps_residual(&flat, 2f64.powi(-k), 32, variant).unwrap();
            assert!(r < prev, "{variant:?} at 2^-{k}: {r} after {prev}");
            prev = r;
        }
        assert!(prev > 0.0);
    }
}

#[test]
fn remainder_kernels_are_homogeneous() {
    let flat = flattening(Conductivity::Affine { base: 1.5, grad: [0.8, -0.5] });
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let k2 = k_eps_2d(&flat, 0.2);
    let a3 = |y: &[f64]| {
        let s = 1.0 + 0.4 * y[0] - 0.2 * y[2];
        DenseMatrix::from_fn(3, 3, |i, j| if i == j { s + 0.1 * i as f64 } else { 0.05 * y[1] })
    };
    let k3 = k_eps_3d(a3, 1.0, 0.2);
    for _ in 0..20 {
        let x = [rng.random_range(-1.0..1.0), 0.0];
        let z = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
        let t = rng.random_range(0.2..5.0);
        let (par, hom) = class_defects(&k2, 1, &x, &z, t);
        assert!(par <= 1e-6 && hom <= 1e-6, "2d: {par} {hom}");
        let x3 = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), 0.0];
        let z3 = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
        let (par, hom) = class_defects(&k3, 1, &x3, &z3, t);
        assert!(par <= 1e-6 && hom <= 1e-6, "3d: {par} {hom}");
    }
    // the kernel itself is even, not odd
    let (par, _) = class_defects(&k3, 0, &[0.1, 0.2, 0.0], &[0.3, -0.4, 0.5], 2.0);
    assert!(par > 1.0);
}
