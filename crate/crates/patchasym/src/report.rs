//! CSV, SVG and markdown output of a sweep.

use std::f64::consts::{LN_2, PI};
use std::fmt::Write as _;
use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

use patchasym_core::asymptotics::{coefficient_cross_checks, NEUMANN_COEFF_3D};
use patchasym_core::fit::{fit_rate, richardson_log, FitModel, FitResult};
use patchasym_core::layer_ops::{equilibrium, op_R1, op_S1, RefGeometry};

use crate::acceptance::{dirichlet_coefficients, equilibrium_solve, neumann_coefficients, CriterionResult};
use crate::config::{Config, Scenario};
use crate::error::Result;
use crate::record::{write_csv, SweepRecord};

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

/// Dashed reference curve through the first point of the first series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Guide {
    Power(f64),
    InverseLog,
}

impl Guide {
    fn eval(self, eps: f64) -> f64 {
        match self {
            Guide::Power(p) => eps.powf(p),
            Guide::InverseLog => 1.0 / eps.ln().abs(),
        }
    }

    fn label(self) -> String {
        match self {
            Guide::Power(p) => format!("slope {p}"),
            Guide::InverseLog => "1/|log ε|".into(),
        }
    }
}

fn series(name: &str, recs: &[SweepRecord], f: impl Fn(&SweepRecord) -> Option<f64>) -> Series {
    let points = recs
        .iter()
        .filter(|r| r.is_ok())
        .filter_map(|r| f(r).map(|v| (r.eps, v.abs())))
        .filter(|(_, v)| v.is_finite() && *v > 0.0)
        .collect();
    Series { name: name.into(), points }
}

/// Plotted series and guides for a scenario.
pub fn plot_series(scenario: Scenario, recs: &[SweepRecord]) -> (Vec<Series>, Vec<Guide>) {
    match scenario {
        Scenario::Dirichlet2d => (
            vec![
                series("|u_ε(x) - u₀(x)|", recs, |r| r.computed_delta),
                series("predicted", recs, |r| r.predicted_delta),
                series("cap", recs, |r| r.cap_value),
                series("χ energy", recs, |r| r.chi_energy),
            ],
            vec![Guide::InverseLog],
        ),
        Scenario::Neumann2d => (
            vec![
                series("|u_ε(x) - u₀(x)|", recs, |r| r.computed_delta),
                series("predicted", recs, |r| r.predicted_delta),
                series("e", recs, |r| r.e_value),
                series("ζ energy", recs, |r| r.zeta_energy),
            ],
            vec![Guide::Power(2.0)],
        ),
        Scenario::Capacity2d => (
            vec![
                series("cap", recs, |r| r.cap_value),
                series("e", recs, |r| r.e_value),
                series("D", recs, |r| r.d_value),
                series("∫ dist", recs, |r| r.dist_integral),
            ],
            vec![Guide::InverseLog, Guide::Power(2.0)],
        ),
        Scenario::Kernels2d => (
            vec![
                series("T_ε residual, Dirichlet", recs, |r| r.teps_dirichlet),
                series("T_ε residual, Neumann", recs, |r| r.teps_neumann),
            ],
            vec![Guide::Power(1.0)],
        ),
        Scenario::Kernels3d => (
            vec![series("cap(disk)/2", recs, |r| r.computed_delta), series("4ε", recs, |r| r.predicted_delta)],
            vec![Guide::Power(1.0)],
        ),
    }
}

const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

/// Log-log plot with one `<polyline>` per series.
pub fn svg_loglog(title: &str, series: &[Series], guides: &[Guide]) -> String {
    let (w, h) = (640.0, 440.0);
    let (l, r, t, b) = (70.0, 190.0, 40.0, 50.0);
    let pts: Vec<(f64, f64)> = series.iter().flat_map(|s| s.points.iter().copied()).collect();
    let mut svg = String::new();
    let _ = writeln!(svg, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#);
    let _ = writeln!(svg, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(svg, r#"<text x="{l}" y="24" font-family="sans-serif" font-size="14">{}</text>"#, escape(title));
    if pts.is_empty() {
        let _ = writeln!(svg, r#"<text x="{l}" y="{}" font-family="sans-serif" font-size="12">no data</text>"#, h / 2.0);
        svg.push_str("</svg>\n");
        return svg;
    }
    let lx: Vec<f64> = pts.iter().map(|p| p.0.log10()).collect();
    let ly: Vec<f64> = pts.iter().map(|p| p.1.log10()).collect();
    let pad = |lo: f64, hi: f64| if hi - lo < 1e-9 { (lo - 0.5, hi + 0.5) } else { (lo - 0.05 * (hi - lo), hi + 0.05 * (hi - lo)) };
    let (x0, x1) = pad(lx.iter().copied().fold(f64::INFINITY, f64::min), lx.iter().copied().fold(f64::NEG_INFINITY, f64::max));
    let (y0, y1) = pad(ly.iter().copied().fold(f64::INFINITY, f64::min), ly.iter().copied().fold(f64::NEG_INFINITY, f64::max));
    let px = |x: f64| l + (x.log10() - x0) / (x1 - x0) * (w - l - r);
    let py = |y: f64| h - b - (y.log10() - y0) / (y1 - y0) * (h - t - b);
    let _ = writeln!(svg, r#"<rect x="{l}" y="{t}" width="{}" height="{}" fill="none" stroke="black"/>"#, w - l - r, h - t - b);
    for k in (x0.ceil() as i32)..=(x1.floor() as i32) {
        let x = px(10f64.powi(k));
        let _ = writeln!(svg, r#"<text x="{x:.1}" y="{}" font-family="sans-serif" font-size="11" text-anchor="middle">1e{k}</text>"#, h - b + 16.0);
    }
    for k in (y0.ceil() as i32)..=(y1.floor() as i32) {
        let y = py(10f64.powi(k));
        let _ = writeln!(svg, r#"<text x="{}" y="{:.1}" font-family="sans-serif" font-size="11" text-anchor="end">1e{k}</text>"#, l - 6.0, y + 4.0);
    }
    let _ = writeln!(svg, r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle">ε</text>"#, l + 0.5 * (w - l - r), h - 12.0);
    if let Some(&(ea, va)) = series.iter().find_map(|s| s.points.first()) {
        let (e_lo, e_hi) = (10f64.powf(x0), 10f64.powf(x1));
        for (k, g) in guides.iter().enumerate() {
            let scale = va / g.eval(ea);
            let d: Vec<String> = (0..=32)
                .map(|i| {
                    let e = e_lo * (e_hi / e_lo).powf(i as f64 / 32.0);
                    let v = (scale * g.eval(e)).clamp(10f64.powf(y0), 10f64.powf(y1));
                    format!("{:.1},{:.1}", px(e), py(v))
                })
                .collect();
            let _ = writeln!(svg, r#"<path d="M{}" fill="none" stroke="gray" stroke-dasharray="5,4"/>"#, d.join(" L"));
            let _ = writeln!(svg, r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11" fill="gray">- - {}</text>"#, w - r + 10.0, t + 14.0 * (series.len() + k) as f64 + 10.0, escape(&g.label()));
        }
    }
    for (k, s) in series.iter().enumerate() {
        let c = COLORS[k % COLORS.len()];
        let p: Vec<String> = s.points.iter().map(|&(e, v)| format!("{:.1},{:.1}", px(e), py(v))).collect();
        let _ = writeln!(svg, r#"<polyline points="{}" fill="none" stroke="{c}" stroke-width="1.5"/>"#, p.join(" "));
        for &(e, v) in &s.points {
            let _ = writeln!(svg, r#"<circle cx="{:.1}" cy="{:.1}" r="2.5" fill="{c}"/>"#, px(e), py(v));
        }
        let _ = writeln!(svg, r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11" fill="{c}">{}</text>"#, w - r + 10.0, t + 14.0 * k as f64 + 10.0, escape(&s.name));
    }
    svg.push_str("</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// A labeled summary value.
#[derive(Debug, Clone, PartialEq)]
pub struct Finding {
    pub label: String,
    pub value: String,
}

fn finding(label: &str, value: String) -> Finding {
    Finding { label: label.into(), value }
}

fn describe_fit(r: patchasym_core::Result<FitResult>) -> String {
    match r {
        Ok(f) => match f.model {
            FitModel::PowerLaw => format!("ε^{:.4} × {:.4e}, rows {:?}, max deviation {:.2e}", f.exponent, f.coefficient, f.window, f.goodness),
            FitModel::LogLaw => format!("{:.4e} + {:.4e}/|log ε|, rows {:?}, max deviation {:.2e}", f.exponent, f.coefficient, f.window, f.goodness),
        },
        Err(e) => format!("n/a ({e})"),
    }
}

fn column(recs: &[SweepRecord], name: &str) -> (Vec<f64>, Vec<f64>) {
    let ok: Vec<&SweepRecord> = recs.iter().filter(|r| r.is_ok()).collect();
    (ok.iter().map(|r| r.eps).collect(), ok.iter().map(|r| r.column(name).unwrap_or(f64::NAN)).collect())
}

fn fit_col(recs: &[SweepRecord], name: &str, model: FitModel) -> String {
    let (e, v) = column(recs, name);
    describe_fit(fit_rate(&e, &v, model, None))
}

fn mean_finding(label: &str, geo: RefGeometry, hyper: bool, n: usize, published: f64, profile: f64) -> Finding {
    let k = if hyper { op_R1(geo, n) } else { op_S1(geo, n) };
    let v = k.and_then(|k| equilibrium_solve(&k, hyper, profile));
    finding(label, match v {
        Ok((m, _)) => format!("{m:.6} (published {published:.6})"),
        Err(e) => format!("n/a ({e})"),
    })
}

/// Fits and constants for the summary.
pub fn findings(cfg: &Config, recs: &[SweepRecord]) -> Vec<Finding> {
    let mut out = Vec::new();
    let ok: Vec<SweepRecord> = recs.iter().filter(|r| r.is_ok()).cloned().collect();
    match cfg.scenario {
        Scenario::Dirichlet2d => {
            let c = dirichlet_coefficients(&ok);
            let eps: Vec<f64> = ok.iter().map(|r| r.eps).collect();
            out.push(finding("c(ε) = π·computed/predicted", c.iter().map(|v| format!("{v:.4}")).collect::<Vec<_>>().join(", ")));
            out.push(finding("c extrapolated in 1/|log ε|", match richardson_log(&eps, &c, None) {
                Ok(v) => format!("{v:.4} (π = {PI:.4}, {:.1}% off)", 100.0 * (v - PI).abs() / PI),
                Err(e) => format!("n/a ({e})"),
            }));
            out.push(finding("|u_ε(x) - u₀(x)| fit", fit_col(&ok, "computed_delta", FitModel::LogLaw)));
            out.push(finding("cap fit", fit_col(&ok, "cap_value", FitModel::LogLaw)));
        }
        Scenario::Neumann2d => {
            out.push(finding("u_ε(x) - u₀(x) fit", fit_col(&ok, "computed_delta", FitModel::PowerLaw)));
            out.push(finding("ε² coefficient, fitted vs predicted", match neumann_coefficients(&ok) {
                Some((f, p)) => format!("{f:.5e} vs {p:.5e}"),
                None => "n/a".into(),
            }));
            out.push(finding("e fit", fit_col(&ok, "e_value", FitModel::PowerLaw)));
        }
        Scenario::Capacity2d => {
            let s: Vec<String> = ok.iter().filter_map(|r| Some(format!("{:.4}", r.cap_value? * r.eps.ln().abs()))).collect();
            out.push(finding("cap·|log ε|", s.join(", ")));
            out.push(finding("e fit", fit_col(&ok, "e_value", FitModel::PowerLaw)));
            out.push(finding("D fit", fit_col(&ok, "d_value", FitModel::PowerLaw)));
            let s: Vec<String> = ok.iter().filter_map(|r| Some(format!("{:.4}", r.d_value? / r.dist_integral?))).collect();
            out.push(finding("D / ∫dist", s.join(", ")));
        }
        Scenario::Kernels2d => {
            out.push(finding("T_ε Dirichlet residual fit", fit_col(&ok, "teps_dirichlet", FitModel::PowerLaw)));
            out.push(finding("T_ε Neumann residual fit", fit_col(&ok, "teps_neumann", FitModel::PowerLaw)));
            let n = cfg.nodes.max(256);
            out.push(mean_finding("⟨S₁⁻¹1, 1⟩, segment", RefGeometry::Segment, false, n, equilibrium::S1_SEGMENT_MEAN, 2.0 / LN_2));
            out.push(mean_finding("⟨R₁⁻¹1, 1⟩, segment", RefGeometry::Segment, true, n, equilibrium::R1_SEGMENT_MEAN, -2.0));
        }
        Scenario::Kernels3d => {
            out.push(finding("cap(disk)/2 fit", fit_col(&ok, "computed_delta", FitModel::PowerLaw)));
            out.push(mean_finding("⟨S₁⁻¹1, 1⟩, disk", RefGeometry::Disk, false, cfg.nodes, equilibrium::S1_DISK_MEAN, 4.0 / PI));
            out.push(mean_finding("⟨R₁⁻¹1, 1⟩, disk", RefGeometry::Disk, true, cfg.nodes, equilibrium::R1_DISK_MEAN, -1.0 / PI));
            let a3 = op_R1(RefGeometry::Disk, cfg.nodes).and_then(|k| equilibrium_solve(&k, true, -1.0 / PI));
            out.push(finding("a₃ = -⟨R₁⁻¹1, 1⟩/2", match a3 {
                Ok((m, _)) => format!("{:.6} computed, {NEUMANN_COEFF_3D:.6} published", -m / 2.0),
                Err(e) => format!("n/a ({e})"),
            }));
            for x in coefficient_cross_checks() {
                out.push(finding(x.name, format!("defect {:.1e}", x.defect())));
            }
        }
    }
    let failed = recs.iter().filter(|r| !r.is_ok()).count();
    out.push(finding("rows", format!("{} ({} failed)", recs.len(), failed)));
    out
}

pub fn markdown(cfg: &Config, findings: &[Finding], acceptance: Option<&[CriterionResult]>) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# {} sweep\n", cfg.scenario);
    let eps: Vec<String> = cfg.eps_list.iter().map(|e| format!("{e:e}")).collect();
    let _ = writeln!(s, "ε: {}\n", if eps.is_empty() { "(none)".into() } else { eps.join(", ") });
    let _ = writeln!(s, "| quantity | value |\n|---|---|");
    for f in findings {
        let _ = writeln!(s, "| {} | {} |", f.label, f.value.replace('|', "\\|"));
    }
    if let Some(acc) = acceptance {
        s.push_str(&acceptance_markdown(acc));
    }
    s
}

pub fn acceptance_markdown(acc: &[CriterionResult]) -> String {
    let mut s = String::from("\n## Acceptance\n\n| # | criterion | result | details |\n|---|---|---|---|\n");
    for r in acc {
        let _ = writeln!(s, "| {} | {} | {} | {} |", r.id, r.name, if r.passed { "pass" } else { "FAIL" }, r.detail.replace('|', "\\|"));
    }
    s
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportPaths {
    pub csv: PathBuf,
    pub svg: PathBuf,
    pub summary: PathBuf,
}

pub fn report_paths(cfg: &Config) -> ReportPaths {
    let base = cfg.out_dir.join(cfg.scenario.name());
    ReportPaths { csv: base.with_extension("csv"), svg: base.with_extension("svg"), summary: base.with_extension("md") }
}

/// Writes the plot and the summary, and the CSV unless the sweep already
/// streamed it.
pub fn emit_report(cfg: &Config, recs: &[SweepRecord], acceptance: Option<&[CriterionResult]>, with_csv: bool) -> Result<ReportPaths> {
    std::fs::create_dir_all(&cfg.out_dir)?;
    let paths = report_paths(cfg);
    if with_csv {
        write_csv(BufWriter::new(File::create(&paths.csv)?), recs)?;
    }
    let (series, guides) = plot_series(cfg.scenario, recs);
    std::fs::write(&paths.svg, svg_loglog(&format!("{} sweep", cfg.scenario), &series, &guides))?;
    std::fs::write(&paths.summary, markdown(cfg, &findings(cfg, recs), acceptance))?;
    Ok(paths)
}
