use patchasym::config::{Config, Scenario};
use patchasym::record::{read_csv, SweepRecord};
use patchasym::report::{emit_report, findings, markdown, plot_series, svg_loglog, Guide, Series};

fn count(s: &str, pat: &str) -> usize {
    s.matches(pat).count()
}

#[test]
fn one_polyline_per_series() {
    let series: Vec<Series> = (0..3)
        .map(|k| Series { name: format!("s{k}"), points: (1..6).map(|i| (0.5f64.powi(i), (k + 1) as f64 * 0.5f64.powi(2 * i))).collect() })
        .collect();
    let svg = svg_loglog("t", &series, &[Guide::Power(2.0), Guide::InverseLog]);
    assert_eq!(count(&svg, "<polyline"), 3);
    assert_eq!(count(&svg, "stroke-dasharray"), 2);
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    let empty = svg_loglog("t", &[], &[Guide::Power(1.0)]);
    assert_eq!(count(&empty, "<polyline"), 0);
}

#[test]
fn nonpositive_and_failed_rows_are_not_plotted() {
    let mut a = SweepRecord::new(0.1);
    a.teps_dirichlet = Some(0.0);
    a.teps_neumann = Some(1.0);
    let b = SweepRecord::failed(0.05, "boom");
    let (s, _) = plot_series(Scenario::Kernels2d, &[a, b]);
    assert_eq!(s.len(), 2);
    assert!(s[0].points.is_empty());
    assert_eq!(s[1].points, vec![(0.1, 1.0)]);
}

#[test]
fn report_files_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = Config::default_for(Scenario::Capacity2d);
    cfg.out_dir = dir.path().to_path_buf();
    cfg.eps_list = vec![];
    let paths = emit_report(&cfg, &[], None, true).unwrap();
    assert!(read_csv(std::fs::File::open(&paths.csv).unwrap()).unwrap().is_empty());
    assert!(std::fs::read_to_string(&paths.svg).unwrap().contains("no data"));
    let md = std::fs::read_to_string(&paths.summary).unwrap();
    assert!(md.contains("| rows | 0 (0 failed) |"));
}

#[test]
fn summary_lists_findings() {
    let cfg = Config::default_for(Scenario::Neumann2d);
    let recs: Vec<SweepRecord> = cfg
        .eps_list
        .iter()
        .map(|&e| {
            let mut r = SweepRecord::new(e);
            r.computed_delta = Some(0.3 * e * e);
            r.predicted_delta = Some(0.31 * e * e);
            r.e_value = Some(3.0 * e * e);
            r.finish()
        })
        .collect();
    let f = findings(&cfg, &recs);
    let md = markdown(&cfg, &f, None);
    assert!(md.contains("ε^2.0000"), "{md}");
    assert!(md.contains("3.00000e-1 vs 3.10000e-1"), "{md}");
}
