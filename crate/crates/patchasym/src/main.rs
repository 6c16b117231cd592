use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::Parser;
use patchasym::acceptance::{run_all, CriterionResult};
use patchasym::config::{Config, Scenario};
use patchasym::dump::{write_density, write_kernel_matrix, write_mesh};
use patchasym::error::{HarnessError, Result};
use patchasym::record::CsvSink;
use patchasym::report::{acceptance_markdown, emit_report, report_paths};
use patchasym::sweep::run_sweep_into;
use patchasym_core::geometry::{make_patch, BoundaryPartition, DomainSpec};
use patchasym_core::layer_ops::{op_R1, op_S1, solve_R1, solve_S1, RefGeometry};
use patchasym_core::mesh::generate_mesh;

/// ε-sweeps for small boundary patches of swapped condition type.
#[derive(Parser, Debug)]
#[command(version)]
struct Cli {
    /// Flat `key = value` config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// dirichlet2d, neumann2d, capacity2d, kernels2d or kernels3d.
    #[arg(long)]
    scenario: Option<String>,
    /// Comma-separated, strictly decreasing; `2^-5` style entries allowed.
    #[arg(long, allow_hyphen_values = true)]
    eps_list: Option<String>,
    #[arg(long)]
    mesh_h: Option<String>,
    #[arg(long)]
    out_dir: Option<String>,
    #[arg(long)]
    threads: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// Run the acceptance suite; exit status 1 if any criterion fails.
    #[arg(long)]
    acceptance: bool,
    /// Write the mesh of the first ε (disk scenarios) to this file.
    #[arg(long)]
    dump_mesh: Option<PathBuf>,
    /// Write the reference operator matrices and equilibrium densities here.
    #[arg(long)]
    dump_operators: Option<PathBuf>,
}

fn config(cli: &Cli) -> Result<Option<Config>> {
    let mut cfg = match (&cli.config, &cli.scenario) {
        (Some(p), _) => Config::load(p)?,
        (None, Some(s)) => Config::default_for(s.parse()?),
        (None, None) => return Ok(None),
    };
    let flags = [
        ("scenario", &cli.scenario),
        ("eps_list", &cli.eps_list),
        ("mesh_h", &cli.mesh_h),
        ("out_dir", &cli.out_dir),
        ("threads", &cli.threads),
        ("seed", &cli.seed),
    ];
    for (k, v) in flags {
        if let Some(v) = v {
            cfg.set(k, v)?;
        }
    }
    cfg.validate()?;
    Ok(Some(cfg))
}

fn dump_mesh(cfg: &Config, path: &Path) -> Result<()> {
    let below = match cfg.scenario {
        Scenario::Dirichlet2d => true,
        Scenario::Neumann2d => false,
        s => return Err(HarnessError::Config(format!("{s} has no disk mesh to dump"))),
    };
    let base = BoundaryPartition::half_split(below);
    let part = match cfg.eps_list.first() {
        Some(&e) => make_patch(&base, e)?,
        None => base,
    };
    let spec = DomainSpec::unit_disk(part.patch_center_angle, patchasym::scenarios::conductivity(cfg));
    let mesh = Arc::new(generate_mesh(&spec, &part, cfg.mesh_h)?);
    write_mesh(BufWriter::new(File::create(path)?), &mesh)
}

fn dump_operators(n: usize, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    for (geo, name) in [(RefGeometry::Segment, "segment"), (RefGeometry::Disk, "disk")] {
        let n = if geo == RefGeometry::Disk { n.min(32) } else { n };
        let s1 = op_S1(geo, n)?;
        let r1 = op_R1(geo, n)?;
        write_kernel_matrix(BufWriter::new(File::create(dir.join(format!("s1_{name}.txt")))?), &s1)?;
        write_kernel_matrix(BufWriter::new(File::create(dir.join(format!("r1_{name}.txt")))?), &r1)?;
        let one = s1.density(vec![1.0; s1.nodes.len()]);
        write_density(BufWriter::new(File::create(dir.join(format!("s1_{name}_equilibrium.txt")))?), &solve_S1(&s1, &one)?)?;
        let one = r1.density(vec![1.0; r1.nodes.len()]);
        write_density(BufWriter::new(File::create(dir.join(format!("r1_{name}_equilibrium.txt")))?), &solve_R1(&r1, &one)?)?;
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<bool> {
    let cfg = config(cli)?;
    if cfg.is_none() && !cli.acceptance && cli.dump_operators.is_none() {
        return Err(HarnessError::Config("give --config or --scenario (or --acceptance)".into()));
    }
    let acceptance: Option<Vec<CriterionResult>> = cli.acceptance.then(|| {
        let (threads, seed) = cfg.as_ref().map_or((0, 0), |c| (c.threads, c.seed));
        let r = run_all(threads, seed);
        for c in &r {
            println!("{}", c.line());
        }
        r
    });
    let out_dir = cfg.as_ref().map_or_else(|| PathBuf::from("out"), |c| c.out_dir.clone());
    if let Some(acc) = &acceptance {
        std::fs::create_dir_all(&out_dir)?;
        std::fs::write(out_dir.join("acceptance.md"), format!("# Acceptance{}", acceptance_markdown(acc).trim_start_matches("\n## Acceptance")))?;
    }
    if let Some(dir) = &cli.dump_operators {
        dump_operators(cfg.as_ref().map_or(64, |c| c.nodes), dir)?;
    }
    if let Some(cfg) = &cfg {
        if let Some(p) = &cli.dump_mesh {
            dump_mesh(cfg, p)?;
        }
        std::fs::create_dir_all(&cfg.out_dir)?;
        let paths = report_paths(cfg);
        let mut sink = CsvSink::new(BufWriter::new(File::create(&paths.csv)?))?;
        let records = run_sweep_into(cfg, Some(&mut sink))?;
        sink.into_inner()?;
        emit_report(cfg, &records, acceptance.as_deref(), false)?;
        let failed = records.iter().filter(|r| !r.is_ok()).count();
        eprintln!("{}: {} rows ({} failed) -> {}", cfg.scenario, records.len(), failed, paths.csv.display());
    }
    Ok(acceptance.is_none_or(|a| a.iter().all(|c| c.passed)))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e @ HarnessError::Config(_)) => {
            eprintln!("{e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(3)
        }
    }
}
