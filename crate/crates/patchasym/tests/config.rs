use patchasym::config::{parse_list, Config, Scenario};
use patchasym::HarnessError;

#[test]
fn parses_flat_key_value_files() {
    let text = "# a comment\nscenario = neumann2d\n\neps_list = 2^-3, 2^-4, 0.01\nmesh_h = 0.05\nx = 0.1, -0.2\nthreads = 2\n";
    let cfg = Config::parse(text).unwrap();
    assert_eq!(cfg.scenario, Scenario::Neumann2d);
    assert_eq!(cfg.eps_list, vec![0.125, 0.0625, 0.01]);
    assert_eq!(cfg.mesh_h, 0.05);
    assert_eq!(cfg.x, [0.1, -0.2]);
    assert_eq!(cfg.threads, 2);
    assert_eq!(cfg.out_dir, Config::default_for(Scenario::Neumann2d).out_dir);
}

#[test]
fn defaults_are_the_dyadic_grid() {
    let cfg = Config::default_for(Scenario::Dirichlet2d);
    assert_eq!(cfg.eps_list.len(), 6);
    assert_eq!(cfg.eps_list[0], 1.0 / 16.0);
    assert_eq!(cfg.eps_list[5], 1.0 / 512.0);
    assert!(!cfg.record_wall_time);
    cfg.validate().unwrap();
}

#[test]
fn text_form_reads_back() {
    let mut cfg = Config::default_for(Scenario::Kernels2d);
    cfg.seed = 17;
    cfg.eps_list = vec![0.3, 0.1 + 0.2 * 1e-3];
    assert_eq!(Config::parse(&cfg.to_text()).unwrap(), cfg);
}

#[test]
fn rejects_bad_input() {
    let bad = [
        "eps_list = 0.1\n",
        "scenario = nope\n",
        "scenario = capacity2d\nfoo = 1\n",
        "scenario = capacity2d\neps_list = 0.1, 0.2\n",
        "scenario = capacity2d\neps_list = 0.1, x\n",
        "scenario = capacity2d\neps_list = 1.5\n",
        "scenario = capacity2d\nmesh_h = -1\n",
        "scenario = capacity2d\nx = 0.95, 0\n",
        "scenario = capacity2d\ngamma = 1\ngamma_grad = 1, 1\n",
        "scenario = capacity2d\nno equals sign\n",
    ];
    for t in bad {
        assert!(matches!(Config::parse(t), Err(HarnessError::Config(_))), "accepted {t:?}");
    }
}

#[test]
fn empty_list_is_allowed() {
    assert_eq!(parse_list("").unwrap(), Vec::<f64>::new());
    let cfg = Config::parse("scenario = kernels3d\neps_list =\n").unwrap();
    assert!(cfg.eps_list.is_empty());
}

#[test]
fn later_settings_override() {
    let mut cfg = Config::parse("scenario = dirichlet2d\nseed = 3\n").unwrap();
    cfg.set("seed", "9").unwrap();
    cfg.set("eps_list", "0.2,0.1").unwrap();
    assert_eq!(cfg.seed, 9);
    assert_eq!(cfg.eps_list, vec![0.2, 0.1]);
}
