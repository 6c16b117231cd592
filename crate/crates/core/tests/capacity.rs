use std::f64::consts::PI;

use patchasym_core::capacity::{
    arc_dist_integral, cap, check_cap_sandwich, d_surrogate, extension_energy, neumann_capacity,
    neumann_energy_for_pattern, rho_weight, PatchShape,
};
use patchasym_core::fem::solve_chi_eps;
use patchasym_core::geometry::{make_patch, Arc2, BoundaryPartition, Conductivity, DomainSpec};
use patchasym_core::mesh::generate_mesh;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Small-set asymptotics of the `-Δ + 1` capacity of a segment of half
/// length ε: logarithmic capacity ε/2 inserted in `K₀(r) ≈ -log(r/2) - γ`.
fn segment_cap_oracle(eps: f64) -> f64 {
    2.0 * PI / ((4.0 / eps).ln() - EULER_GAMMA)
}

#[test]
fn empty_patch_has_zero_capacities() {
    assert_eq!(cap(&PatchShape::Empty, 8.0, 0.1).unwrap().value, 0.0);
    assert_eq!(neumann_capacity(&PatchShape::Empty, 8.0, 0.1).unwrap().value, 0.0);
    assert_eq!(d_surrogate(None, 1.0).unwrap(), 0.0);
}

#[test]
fn segment_capacity_matches_log_asymptotics() {
    for eps in [1.0 / 32.0, 1.0 / 128.0] {
        let r = cap(&PatchShape::segment(eps), 8.0, eps / 8.0).unwrap();
        assert!(r.lower <= r.upper);
        let rel = (r.value / segment_cap_oracle(eps) - 1.0).abs();
        assert!(rel < 0.03, "eps {eps}: {} vs {}", r.value, segment_cap_oracle(eps));
    }
}

#[test]
fn capacity_is_monotone_in_the_patch() {
    let a = cap(&PatchShape::segment(1.0 / 64.0), 8.0, 1.0 / 512.0).unwrap().value;
    let b = cap(&PatchShape::segment(1.0 / 32.0), 8.0, 1.0 / 512.0).unwrap().value;
    assert!(a <= b);
}

#[test]
fn flat_disk_capacity_approaches_eight_times_radius() {
    // for a ≪ 1 the reaction term is negligible and Laplace gives 8a
    let a = 1.0 / 32.0;
    let r = cap(&PatchShape::Disk3 { radius: a }, 8.0, a / 8.0).unwrap();
    assert!((r.value / (8.0 * a) - 1.0).abs() < 0.08, "{}", r.value / a);
}

#[test]
fn neumann_capacity_of_segment_scales_like_pi_eps_squared() {
    for eps in [1.0 / 16.0, 1.0 / 64.0] {
        let r = neumann_capacity(&PatchShape::segment(eps), 8.0, eps / 8.0).unwrap();
        assert!(r.lower <= r.upper * (1.0 + 1e-12));
        let ratio = r.value / (PI * eps * eps);
        assert!((ratio - 1.0).abs() < 0.05, "eps {eps}: ratio {ratio}");
    }
}

#[test]
fn neumann_capacity_is_sign_symmetric_for_connected_patches() {
    let shape = PatchShape::segment(1.0 / 16.0);
    let plus = neumann_energy_for_pattern(&shape, 8.0, 1.0 / 128.0, &[1]).unwrap();
    let minus = neumann_energy_for_pattern(&shape, 8.0, 1.0 / 128.0, &[-1]).unwrap();
    assert!((plus - minus).abs() <= 1e-8 * plus);
}

#[test]
fn two_component_patch_picks_the_best_sign_pattern() {
    let shape = PatchShape::segments(&[[-0.1, -0.02], [0.02, 0.1]]);
    let r = neumann_capacity(&shape, 8.0, 0.01).unwrap();
    let same = neumann_energy_for_pattern(&shape, 8.0, 0.01, &[1, 1]).unwrap();
    let flip = neumann_energy_for_pattern(&shape, 8.0, 0.01, &[1, -1]).unwrap();
    assert!((r.value - same.max(flip)).abs() <= 1e-9 * r.value);
    assert_eq!(r.sign_pattern.len(), 2);
}

fn rho_closed_form(theta: f64, patch: &Arc2) -> f64 {
    let o = patch.offset(theta);
    let (a, c) = (patch.len - o, o);
    0.5 * (1.0 / (0.5 * a).tan() + 1.0 / (0.5 * c).tan())
}

/// Brute-force trapezoid over the complement arc with 10⁶ points.
fn rho_trapezoid(theta: f64, patch: &Arc2) -> f64 {
    let n = 1_000_000;
    let (lo, hi) = (patch.end(), patch.start + std::f64::consts::TAU);
    let dh = (hi - lo) / n as f64;
    let x = [theta.cos(), theta.sin()];
    let f = |t: f64| {
        let y = [t.cos(), t.sin()];
        1.0 / ((x[0] - y[0]).powi(2) + (x[1] - y[1]).powi(2))
    };
    let mut s = 0.5 * (f(lo) + f(hi));
    for i in 1..n {
        s += f(lo + i as f64 * dh);
    }
    s * dh
}

#[test]
fn rho_weight_matches_brute_force_at_center() {
    let patch = Arc2::centered(PI / 2.0, 1.0 / 16.0);
    let v = rho_weight(PI / 2.0, &patch, 1.0).unwrap();
    let brute = rho_trapezoid(PI / 2.0, &patch);
    assert!((v / brute - 1.0).abs() < 0.05);
    assert!((v / rho_closed_form(PI / 2.0, &patch) - 1.0).abs() < 1e-9);
}

#[test]
fn rho_weight_blows_up_at_the_patch_edge() {
    let patch = Arc2::centered(0.0, 0.1);
    for delta in [1e-2, 1e-3, 1e-4] {
        let v = rho_weight(patch.end() - delta, &patch, 1.0).unwrap();
        assert!(v * delta >= 0.5, "delta {delta}: {v}");
    }
    let small = Arc2::centered(0.0, 0.05);
    assert!(rho_weight(0.0, &small, 1.0).unwrap() >= rho_weight(0.0, &patch, 1.0).unwrap());
}

#[test]
fn d_surrogate_tracks_the_distance_integral() {
    let mut ratios = Vec::new();
    for k in 4..=9 {
        let eps = 0.5f64.powi(k);
        let patch = Arc2::centered(PI / 2.0, eps);
        let di = arc_dist_integral(&patch, 1.0).unwrap();
        assert!((di - eps * eps).abs() < 1e-14);
        ratios.push(d_surrogate(Some(&patch), 1.0).unwrap() / di);
    }
    let (lo, hi) = ratios.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &r| (a.min(r), b.max(r)));
    assert!(lo > 0.0 && hi / lo < 1.5, "{ratios:?}");
}

#[test]
fn extension_of_chi_bounds_capacity_from_above() {
    let eps = 1.0 / 16.0;
    let part = make_patch(&BoundaryPartition::half_split(true), eps).unwrap();
    let spec = DomainSpec::unit_disk(part.patch_center_angle, Conductivity::Constant(1.0));
    let mesh = std::sync::Arc::new(generate_mesh(&spec, &part, 0.1).unwrap());
    let chi = solve_chi_eps(&mesh, &part).unwrap();
    let shape = PatchShape::unit_arc(PI / 2.0, eps);
    let (ext, cap_same) = extension_energy(&chi, &shape, 8.0, eps / 8.0).unwrap();
    assert!(cap_same <= ext);
    assert!(check_cap_sandwich(chi.h1_norm_sq(), cap_same) > 0.0);
}
