use patchasym::config::{Config, Scenario};
use patchasym::record::{to_csv_string, CsvSink};
use patchasym::sweep::{run_sweep, run_sweep_into, run_sweep_serial};

fn small(s: Scenario) -> Config {
    let mut cfg = Config::default_for(s);
    cfg.eps_list = vec![1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0];
    cfg.threads = 3;
    cfg.seed = 5;
    cfg
}

#[test]
fn identical_config_gives_identical_csv() {
    for s in Scenario::ALL {
        let cfg = small(s);
        let a = to_csv_string(&run_sweep(&cfg).unwrap());
        let b = to_csv_string(&run_sweep(&cfg).unwrap());
        assert_eq!(a, b, "{s}");
    }
}

#[test]
fn pooled_equals_serial() {
    for s in Scenario::ALL {
        let cfg = small(s);
        let pooled = run_sweep(&cfg).unwrap();
        let serial = run_sweep_serial(&cfg).unwrap();
        assert_eq!(pooled, serial, "{s}");
        assert!(pooled.iter().all(|r| r.is_ok()), "{s}: {pooled:?}");
        assert_eq!(pooled.iter().map(|r| r.eps).collect::<Vec<_>>(), cfg.eps_list);
    }
}

#[test]
fn streamed_csv_matches_records() {
    let cfg = small(Scenario::Kernels2d);
    let mut sink = CsvSink::new(Vec::new()).unwrap();
    let recs = run_sweep_into(&cfg, Some(&mut sink)).unwrap();
    let text = String::from_utf8(sink.into_inner().unwrap()).unwrap();
    assert_eq!(text, to_csv_string(&recs));
}

#[test]
fn empty_list_gives_no_rows() {
    let mut cfg = small(Scenario::Dirichlet2d);
    cfg.eps_list.clear();
    assert!(run_sweep(&cfg).unwrap().is_empty());
}

#[test]
fn row_errors_are_recorded_not_raised() {
    // the observation point sits too close to the boundary for N(x, ·)
    let mut cfg = small(Scenario::Dirichlet2d);
    cfg.x = [0.0, 0.89];
    cfg.mesh_h = 0.3;
    let recs = run_sweep(&cfg).unwrap();
    assert_eq!(recs.len(), 3);
    assert!(recs.iter().all(|r| r.status.starts_with("failed: ")), "{recs:?}");
}

#[test]
fn wall_time_is_opt_in() {
    let mut cfg = small(Scenario::Kernels3d);
    assert!(run_sweep(&cfg).unwrap().iter().all(|r| r.wall_time.is_none()));
    cfg.record_wall_time = true;
    assert!(run_sweep(&cfg).unwrap().iter().all(|r| r.wall_time.is_some_and(|t| t >= 0.0)));
}
