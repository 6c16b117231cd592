//! The twelve acceptance criteria, each evaluated at its stated tolerance.

use std::f64::consts::{LN_2, PI};

use patchasym_core::asymptotics::coefficient_cross_checks;
use patchasym_core::fit::{fit_rate, default_window, richardson_linear, richardson_log, FitModel};
use patchasym_core::layer_ops::{
    equilibrium, jump_check, op_R1, op_S1, random_smooth_density, solve_R1, solve_S1, ClosedCurve, HalfSpaceKernel,
    ImageType, KernelMatrix, RefGeometry,
};
use patchasym_core::linalg::DenseMatrix;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{Config, Scenario};
use crate::error::Result;
use crate::record::SweepRecord;
use crate::sweep::run_sweep;

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!("criterion {:>2} {:<34} {}  {}", self.id, self.name, if self.passed { "PASS" } else { "FAIL" }, self.detail)
    }
}

/// Accumulates named sub-checks of one criterion.
struct Checks {
    ok: bool,
    parts: Vec<String>,
}

impl Checks {
    fn new() -> Self {
        Self { ok: true, parts: Vec::new() }
    }

    fn check(&mut self, pass: bool, text: String) {
        self.ok &= pass;
        self.parts.push(if pass { text } else { format!("{text} [FAIL]") });
    }

    fn finish(self, id: usize, name: &'static str) -> CriterionResult {
        CriterionResult { id, name, passed: self.ok, detail: self.parts.join("; ") }
    }
}

fn wrap(id: usize, name: &'static str, f: impl FnOnce() -> Result<Checks>) -> CriterionResult {
    match f() {
        Ok(c) => c.finish(id, name),
        Err(e) => CriterionResult { id, name, passed: false, detail: format!("error: {e}") },
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// Sweeps feeding criteria 5 to 11, run once with the default configs.
pub struct Sweeps {
    pub dirichlet: Vec<SweepRecord>,
    pub neumann: Vec<SweepRecord>,
    pub capacity: Vec<SweepRecord>,
    pub kernels2d: Vec<SweepRecord>,
}

impl Sweeps {
    pub fn run(threads: usize, seed: u64) -> Result<Self> {
        let go = |s: Scenario| {
            let mut cfg = Config::default_for(s);
            cfg.threads = threads;
            cfg.seed = seed;
            run_sweep(&cfg)
        };
        Ok(Self {
            dirichlet: go(Scenario::Dirichlet2d)?,
            neumann: go(Scenario::Neumann2d)?,
            capacity: go(Scenario::Capacity2d)?,
            kernels2d: go(Scenario::Kernels2d)?,
        })
    }
}

fn col(recs: &[SweepRecord], name: &str) -> Vec<f64> {
    recs.iter().map(|r| r.column(name).unwrap_or(f64::NAN)).collect()
}

fn eps_of(recs: &[SweepRecord]) -> Vec<f64> {
    recs.iter().map(|r| r.eps).collect()
}

fn all_ok(c: &mut Checks, recs: &[SweepRecord]) {
    let failed: Vec<String> = recs.iter().filter(|r| !r.is_ok()).map(|r| format!("ε={:e}: {}", r.eps, r.status)).collect();
    c.check(failed.is_empty() && !recs.is_empty(), format!("{} rows, {} failed{}", recs.len(), failed.len(), if failed.is_empty() { String::new() } else { format!(" ({})", failed.join(", ")) }));
}

/// `(mean, worst relative profile error away from the endpoints)` of the
/// equilibrium solve with right-hand side 1.
pub fn equilibrium_solve(k: &KernelMatrix, hypersingular: bool, profile: f64) -> patchasym_core::Result<(f64, f64)> {
    let one = k.density(vec![1.0; k.nodes.len()]);
    let sol = if hypersingular { solve_R1(k, &one)? } else { solve_S1(k, &one)? };
    let mut worst = 0.0f64;
    for (p, v) in sol.nodes.iter().zip(&sol.values) {
        if p[0] * p[0] + p[1] * p[1] <= 0.81 {
            worst = worst.max(rel(*v, profile));
        }
    }
    Ok((sol.mean(), worst))
}

pub fn criterion_1() -> CriterionResult {
    wrap(1, "equilibrium densities", || {
        let mut c = Checks::new();
        let cases = [
            ("S1 segment", RefGeometry::Segment, false, 256, equilibrium::S1_SEGMENT_MEAN, 2.0 / LN_2, 1e-3),
            ("S1 disk", RefGeometry::Disk, false, 64, equilibrium::S1_DISK_MEAN, 4.0 / PI, 1e-3),
            ("R1 segment", RefGeometry::Segment, true, 256, equilibrium::R1_SEGMENT_MEAN, -2.0, 1e-2),
            ("R1 disk", RefGeometry::Disk, true, 64, equilibrium::R1_DISK_MEAN, -1.0 / PI, 1e-2),
        ];
        for (name, geo, hyper, n, mean, profile, tol) in cases {
            let k = if hyper { op_R1(geo, n)? } else { op_S1(geo, n)? };
            let (m, prof) = equilibrium_solve(&k, hyper, profile)?;
            c.check(rel(m, mean) <= tol, format!("{name} mean {m:.6} vs {mean:.6}"));
            c.check(prof <= 1e-2, format!("{name} profile error {prof:.2e}"));
        }
        Ok(c)
    })
}

pub fn criterion_2() -> CriterionResult {
    wrap(2, "forward application", || {
        let mut c = Checks::new();
        let cases = [
            ("S1 segment", RefGeometry::Segment, false, 256, 2.0 / LN_2, 1e-3),
            ("S1 disk", RefGeometry::Disk, false, 64, 4.0 / PI, 1e-3),
            ("R1 segment", RefGeometry::Segment, true, 256, -2.0, 2e-2),
            ("R1 disk", RefGeometry::Disk, true, 64, -1.0 / PI, 2e-2),
        ];
        for (name, geo, hyper, n, psi, tol) in cases {
            let k = if hyper { op_R1(geo, n)? } else { op_S1(geo, n)? };
            let img = k.apply(&k.density_from(|_| psi));
            let sup = img.iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max);
            let mid = img.iter().sum::<f64>() / img.len() as f64;
            c.check(sup <= tol, format!("{name} sup|Kφ-1| {sup:.2e} (mean image {mid:.4})"));
        }
        Ok(c)
    })
}

pub fn criterion_3(seed: u64) -> CriterionResult {
    wrap(3, "jump relations", || {
        let mut c = Checks::new();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 3);
        let n = 1 << 14;
        let circle = ClosedCurve::circle([0.0, 0.0], 1.0, n);
        let mut worst = 0.0f64;
        for _ in 0..5 {
            let coeffs: Vec<f64> = (0..9).map(|_| rng.random_range(-1.0..1.0)).collect();
            let phi = random_smooth_density(&circle, &coeffs, 4);
            for i in [0, n / 7, n / 3, 5 * n / 8] {
                worst = worst.max(jump_check(&circle, &phi, i, 0.01).max_defect());
            }
        }
        c.check(worst <= 1e-3, format!("worst relative jump defect {worst:.2e} over 5 densities"));
        Ok(c)
    })
}

fn random_spd(rng: &mut ChaCha8Rng, d: usize) -> DenseMatrix {
    let b = DenseMatrix::from_fn(d, d, |_, _| rng.random_range(-1.0..1.0));
    let mut a = b.matmul(&b.transpose());
    for i in 0..d {
        a[(i, i)] += 0.3;
    }
    a
}

pub fn criterion_4(seed: u64) -> CriterionResult {
    wrap(4, "half-space kernels", || {
        let mut c = Checks::new();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 4);
        let (mut bc, mut refl, mut pde) = (0.0f64, 0.0f64, 0.0f64);
        let trials = 120;
        for trial in 0..trials {
            let d = if trial % 2 == 0 { 2 } else { 3 };
            let a = random_spd(&mut rng, d);
            let neu = HalfSpaceKernel::new(a.clone(), ImageType::NeumannImage)?;
            let dir = HalfSpaceKernel::new(a.clone(), ImageType::DirichletImage)?;
            let mut x: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
            x[d - 1] = -rng.random_range(0.1..1.0);
            let mut y: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
            y[d - 1] = 0.0;
            let (_, g) = neu.eval(&x, &y)?;
            let flux: f64 = (0..d).map(|j| a[(d - 1, j)] * g[j]).sum();
            let scale = g.iter().map(|v| v * v).sum::<f64>().sqrt() * a.max_abs();
            bc = bc.max(flux.abs() / scale);
            let (v, _) = dir.eval(&x, &y)?;
            bc = bc.max(v.abs());
            let mut z: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
            z[d - 1] = -rng.random_range(0.0..1.0);
            while x.iter().zip(&z).map(|(p, q)| (p - q).powi(2)).sum::<f64>() < 0.04 {
                z[0] += 0.3;
            }
            refl = refl.max(neu.reflection_defect(&y, &z));
            let h = 1e-3;
            for k in [&neu, &dir] {
                let mut div = 0.0;
                for i in 0..d {
                    let flux = |s: f64| -> Result<f64> {
                        let mut zs = z.clone();
                        zs[i] += s;
                        let g = k.eval(&x, &zs)?.1;
                        Ok((0..d).map(|j| a[(i, j)] * g[j]).sum::<f64>())
                    };
                    div += (-flux(2.0 * h)? + 8.0 * flux(h)? - 8.0 * flux(-h)? + flux(-2.0 * h)?) / (12.0 * h);
                }
                let r: f64 = x.iter().zip(&z).map(|(p, q)| (p - q).powi(2)).sum::<f64>().sqrt();
                let gz = k.eval(&x, &z)?.1;
                let scale = gz.iter().map(|v| v * v).sum::<f64>().sqrt() * a.max_abs() / r;
                pde = pde.max(div.abs() / scale);
            }
        }
        c.check(bc <= 1e-8, format!("boundary residual {bc:.2e}"));
        c.check(refl <= 1e-12, format!("reflection defect {refl:.2e}"));
        c.check(pde <= 1e-5, format!("PDE residual {pde:.2e} ({trials} matrices)"));
        Ok(c)
    })
}

/// `c(ε) = π · computed / predicted` for the Dirichlet-patch sweep.
pub fn dirichlet_coefficients(recs: &[SweepRecord]) -> Vec<f64> {
    recs.iter()
        .map(|r| match (r.computed_delta, r.predicted_delta) {
            (Some(c), Some(p)) if p != 0.0 => PI * c / p,
            _ => f64::NAN,
        })
        .collect()
}

pub fn criterion_5(s: &Sweeps) -> CriterionResult {
    wrap(5, "Dirichlet patch, 1/|log ε| law", || {
        let mut c = Checks::new();
        all_ok(&mut c, &s.dirichlet);
        let coeff = dirichlet_coefficients(&s.dirichlet);
        let extrap = richardson_log(&eps_of(&s.dirichlet), &coeff, None)?;
        c.check(rel(extrap, PI) <= 0.1, format!("extrapolated coefficient {extrap:.4} vs π (last row {:.4})", coeff.last().copied().unwrap_or(f64::NAN)));
        let rr = col(&s.dirichlet, "residual_ratio");
        let tail = &rr[rr.len().saturating_sub(3)..];
        let dec = tail.len() == 3 && tail.windows(2).all(|w| w[1] < w[0]);
        c.check(dec, format!("last residual ratios {}", fmt_list(tail)));
        Ok(c)
    })
}

fn fmt_list(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:.3e}")).collect::<Vec<_>>().join(", ")
}

/// `(fitted ε² coefficient, predicted coefficient at the finest row)`.
pub fn neumann_coefficients(recs: &[SweepRecord]) -> Option<(f64, f64)> {
    let eps = eps_of(recs);
    let comp = col(recs, "computed_delta");
    let rows = default_window(&eps, &comp);
    let (num, den) = rows.iter().fold((0.0, 0.0), |(n, d), &i| (n + comp[i] * eps[i].powi(2), d + eps[i].powi(4)));
    let last = recs.last()?;
    Some((num / den, last.predicted_delta? / last.eps.powi(2)))
}

pub fn criterion_6(s: &Sweeps) -> CriterionResult {
    wrap(6, "Neumann patch, ε² law", || {
        let mut c = Checks::new();
        all_ok(&mut c, &s.neumann);
        let fit = fit_rate(&eps_of(&s.neumann), &col(&s.neumann, "computed_delta"), FitModel::PowerLaw, None)?;
        c.check((1.85..=2.15).contains(&fit.exponent), format!("exponent {:.4}", fit.exponent));
        match neumann_coefficients(&s.neumann) {
            Some((fitted, predicted)) => c.check(rel(fitted, predicted) <= 0.1, format!("ε² coefficient {fitted:.5e} vs {predicted:.5e}")),
            None => c.check(false, "no prediction".into()),
        }
        Ok(c)
    })
}

fn spread(v: &[f64]) -> f64 {
    let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = v.iter().copied().fold(f64::INFINITY, f64::min);
    max / min
}

pub fn criterion_7(s: &Sweeps) -> CriterionResult {
    wrap(7, "capacity scaling", || {
        let mut c = Checks::new();
        all_ok(&mut c, &s.capacity);
        let scaled: Vec<f64> = s.capacity.iter().filter_map(|r| Some(r.cap_value? * r.eps.ln().abs())).collect();
        let mean = scaled.iter().sum::<f64>() / scaled.len() as f64;
        let dev = scaled.iter().map(|v| rel(*v, mean)).fold(0.0, f64::max);
        c.check(!scaled.is_empty() && dev <= 0.2, format!("cap·|log ε| {} (max deviation from mean {:.1}%)", fmt_list(&scaled), 100.0 * dev));
        let fit = fit_rate(&eps_of(&s.capacity), &col(&s.capacity, "e_value"), FitModel::PowerLaw, None)?;
        c.check((1.8..=2.2).contains(&fit.exponent), format!("e exponent {:.4}", fit.exponent));
        Ok(c)
    })
}

fn ratio_series(recs: &[SweepRecord], num: &str, den: &str, power: f64) -> Vec<f64> {
    recs.iter().map(|r| r.column(num).unwrap_or(f64::NAN) / r.column(den).unwrap_or(f64::NAN).powf(power)).collect()
}

pub fn criterion_8(s: &Sweeps) -> CriterionResult {
    wrap(8, "energy equivalences", || {
        let mut c = Checks::new();
        for (name, recs, energy, capname) in [
            ("χ/cap", &s.dirichlet, "chi_energy", "cap_value"),
            ("ζ/e", &s.neumann, "zeta_energy", "e_value"),
        ] {
            let r = ratio_series(recs, energy, capname, 1.0);
            let sp = spread(&r);
            c.check(sp.is_finite() && sp <= 3.0, format!("{name} spread {sp:.3}"));
            for (norm, p) in [("h1_delta", 0.5), ("l2_delta", 0.75)] {
                let q = ratio_series(recs, norm, capname, p);
                let first = q.first().copied().unwrap_or(f64::NAN);
                let max = q.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                c.check(max.is_finite() && max <= 3.0 * first, format!("{norm}/{capname}^{p} max {max:.3} vs first {first:.3}"));
            }
        }
        Ok(c)
    })
}

pub fn criterion_9(s: &Sweeps) -> CriterionResult {
    wrap(9, "compliance sign and size", || {
        let mut c = Checks::new();
        for (name, recs, dirichlet) in [("Dirichlet", &s.dirichlet, true), ("Neumann", &s.neumann, false)] {
            let comp: Vec<f64> = recs.iter().map(|r| r.compliance_eps.unwrap_or(f64::NAN) - r.compliance_0.unwrap_or(f64::NAN)).collect();
            let pred = col(recs, "predicted_compliance_delta");
            let signs = !recs.is_empty() && comp.iter().zip(&pred).all(|(a, b)| a.signum() == b.signum() && *a != 0.0);
            c.check(signs, format!("{name} signs agree on every row"));
            let q: Vec<f64> = comp.iter().zip(&pred).map(|(a, b)| a / b).collect();
            let eps = eps_of(recs);
            let lim = if dirichlet { richardson_log(&eps, &q, None)? } else { richardson_linear(&eps, &q, None)? };
            c.check(rel(1.0 / lim, 1.0) <= 0.15, format!("{name} extrapolated predicted/computed {:.4}", 1.0 / lim));
        }
        Ok(c)
    })
}

pub fn criterion_10(s: &Sweeps) -> CriterionResult {
    wrap(10, "V_ε identities", || {
        let mut c = Checks::new();
        all_ok(&mut c, &s.kernels2d);
        let inv = col(&s.kernels2d, "veps_inverse").into_iter().fold(0.0, f64::max);
        let mean = col(&s.kernels2d, "veps_mean").into_iter().fold(0.0, f64::max);
        c.check(inv <= 1e-8, format!("inverse vs direct {inv:.2e}"));
        c.check(mean <= 1e-10, format!("mean formula {mean:.2e}"));
        Ok(c)
    })
}

pub fn criterion_11(s: &Sweeps) -> CriterionResult {
    wrap(11, "T_ε approximation residuals", || {
        let mut c = Checks::new();
        all_ok(&mut c, &s.kernels2d);
        for name in ["teps_dirichlet", "teps_neumann"] {
            let v = col(&s.kernels2d, name);
            let dec = v.len() >= 2 && v.windows(2).all(|w| w[1] < w[0]);
            c.check(dec, format!("{name} {}", fmt_list(&v)));
        }
        Ok(c)
    })
}

pub fn criterion_12() -> CriterionResult {
    wrap(12, "coefficient cross-checks", || {
        let mut c = Checks::new();
        for x in coefficient_cross_checks() {
            c.check(x.defect() <= 1e-12, format!("{} defect {:.1e}", x.name, x.defect()));
        }
        Ok(c)
    })
}

/// All twelve criteria in order.
pub fn run_all(threads: usize, seed: u64) -> Vec<CriterionResult> {
    let mut out = vec![criterion_1(), criterion_2(), criterion_3(seed), criterion_4(seed)];
    match Sweeps::run(threads, seed) {
        Ok(s) => out.extend([
            criterion_5(&s),
            criterion_6(&s),
            criterion_7(&s),
            criterion_8(&s),
            criterion_9(&s),
            criterion_10(&s),
            criterion_11(&s),
        ]),
        Err(e) => {
            let names = ["Dirichlet patch", "Neumann patch", "capacity scaling", "energy equivalences", "compliance", "V_ε identities", "T_ε residuals"];
            for (k, name) in names.into_iter().enumerate() {
                out.push(CriterionResult { id: 5 + k, name, passed: false, detail: format!("sweep error: {e}") });
            }
        }
    }
    out.push(criterion_12());
    out
}
