//! Flat `key = value` configuration.
//!
//! Blank lines and lines starting with `#` are ignored. Unknown keys are
//! rejected. Lists are comma separated; `2^-k` is accepted for numbers.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    Dirichlet2d,
    Neumann2d,
    Capacity2d,
    Kernels2d,
    Kernels3d,
}

impl Scenario {
    pub const ALL: [Scenario; 5] =
        [Self::Dirichlet2d, Self::Neumann2d, Self::Capacity2d, Self::Kernels2d, Self::Kernels3d];

    pub fn name(self) -> &'static str {
        match self {
            Self::Dirichlet2d => "dirichlet2d",
            Self::Neumann2d => "neumann2d",
            Self::Capacity2d => "capacity2d",
            Self::Kernels2d => "kernels2d",
            Self::Kernels3d => "kernels3d",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|sc| sc.name() == s.trim())
            .ok_or_else(|| HarnessError::Config(format!("unknown scenario `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub scenario: Scenario,
    /// Strictly decreasing.
    pub eps_list: Vec<f64>,
    /// Background mesh size for the disk problems.
    pub mesh_h: f64,
    pub out_dir: PathBuf,
    /// Worker threads; 0 means one per core.
    pub threads: usize,
    pub seed: u64,
    /// `γ(x) = gamma + gamma_grad · x`.
    pub gamma: f64,
    pub gamma_grad: [f64; 2],
    /// Constant source `f`.
    pub source: f64,
    /// Interior observation point.
    pub x: [f64; 2],
    /// Radius of the truncated exterior problems.
    pub truncation_radius: f64,
    /// Reference-operator nodes for the kernel scenarios.
    pub nodes: usize,
    pub record_wall_time: bool,
}

impl Config {
    pub fn default_for(scenario: Scenario) -> Self {
        let gamma_grad = match scenario {
            // with γ ≡ 1 the frozen-coefficient approximations are exact
            Scenario::Kernels2d => [0.6, 0.4],
            _ => [0.0, 0.0],
        };
        let gamma = if scenario == Scenario::Kernels2d { 2.0 } else { 1.0 };
        Self {
            scenario,
            eps_list: (4..=9).map(|k| 2f64.powi(-k)).collect(),
            mesh_h: 0.1,
            out_dir: PathBuf::from("out"),
            threads: 0,
            seed: 0,
            gamma,
            gamma_grad,
            source: 1.0,
            x: [0.0, 0.0],
            truncation_radius: 8.0,
            nodes: 64,
            record_wall_time: false,
        }
    }

    /// Parses a config file's text. `scenario` must be present.
    pub fn parse(text: &str) -> Result<Self> {
        let pairs = parse_pairs(text)?;
        let scenario = pairs
            .iter()
            .find(|(k, _)| k == "scenario")
            .ok_or_else(|| HarnessError::Config("missing key `scenario`".into()))?
            .1
            .parse()?;
        let mut cfg = Self::default_for(scenario);
        for (k, v) in &pairs {
            cfg.set(k, v)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Sets one key. Values are not cross-checked until [`Config::validate`].
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = |what: &str| HarnessError::Config(format!("`{key}`: {what} `{value}`"));
        match key {
            "scenario" => self.scenario = value.parse()?,
            "eps_list" => self.eps_list = parse_list(value).ok_or_else(|| bad("bad number list"))?,
            "mesh_h" => self.mesh_h = parse_num(value).ok_or_else(|| bad("bad number"))?,
            "out_dir" => self.out_dir = PathBuf::from(value),
            "threads" => self.threads = value.parse().map_err(|_| bad("bad count"))?,
            "seed" => self.seed = value.parse().map_err(|_| bad("bad seed"))?,
            "gamma" => self.gamma = parse_num(value).ok_or_else(|| bad("bad number"))?,
            "gamma_grad" => self.gamma_grad = parse_pair(value).ok_or_else(|| bad("need two numbers"))?,
            "source" => self.source = parse_num(value).ok_or_else(|| bad("bad number"))?,
            "x" => self.x = parse_pair(value).ok_or_else(|| bad("need two numbers"))?,
            "truncation_radius" => self.truncation_radius = parse_num(value).ok_or_else(|| bad("bad number"))?,
            "nodes" => self.nodes = value.parse().map_err(|_| bad("bad count"))?,
            "record_wall_time" => self.record_wall_time = value.parse().map_err(|_| bad("need true or false"))?,
            _ => return Err(HarnessError::Config(format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let err = |m: String| Err(HarnessError::Config(m));
        if self.eps_list.iter().any(|e| !(*e > 0.0 && *e < 1.0)) {
            return err("eps_list entries must lie in (0, 1)".into());
        }
        if self.eps_list.windows(2).any(|w| w[1] >= w[0]) {
            return err("eps_list must be strictly decreasing".into());
        }
        if !(self.mesh_h > 0.0 && self.mesh_h <= 0.5) {
            return err(format!("mesh_h = {} must lie in (0, 0.5]", self.mesh_h));
        }
        if self.truncation_radius.is_nan() || self.truncation_radius <= 1.0 {
            return err("truncation_radius must exceed 1".into());
        }
        if self.nodes < 4 {
            return err("nodes must be at least 4".into());
        }
        let r2 = self.x[0] * self.x[0] + self.x[1] * self.x[1];
        if r2 >= 0.81 {
            return err("x must lie inside the disk |x| < 0.9".into());
        }
        // γ is affine, so its extremes over the closed unit disk are these
        let g = (self.gamma_grad[0].powi(2) + self.gamma_grad[1].powi(2)).sqrt();
        if (self.gamma - g).is_nan() || self.gamma - g <= 0.0 {
            return err("gamma must stay positive on the closed unit disk".into());
        }
        Ok(())
    }

    /// The config as `key = value` text that [`Config::parse`] reads back.
    pub fn to_text(&self) -> String {
        let list: Vec<String> = self.eps_list.iter().map(|e| format!("{e:e}")).collect();
        format!(
            "scenario = {}\neps_list = {}\nmesh_h = {}\nout_dir = {}\nthreads = {}\nseed = {}\ngamma = {}\n\
             gamma_grad = {}, {}\nsource = {}\nx = {}, {}\ntruncation_radius = {}\nnodes = {}\nrecord_wall_time = {}\n",
            self.scenario,
            list.join(", "),
            self.mesh_h,
            self.out_dir.display(),
            self.threads,
            self.seed,
            self.gamma,
            self.gamma_grad[0],
            self.gamma_grad[1],
            self.source,
            self.x[0],
            self.x[1],
            self.truncation_radius,
            self.nodes,
            self.record_wall_time
        )
    }
}

fn parse_pairs(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| HarnessError::Config(format!("line {}: expected key = value", i + 1)))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

/// A number, or `b^e` with numeric base and exponent.
pub fn parse_num(s: &str) -> Option<f64> {
    let s = s.trim();
    if let Some((b, e)) = s.split_once('^') {
        let b: f64 = b.trim().parse().ok()?;
        let e: f64 = e.trim().parse().ok()?;
        return Some(b.powf(e));
    }
    s.parse().ok()
}

/// Comma-separated numbers; an empty string is the empty list.
pub fn parse_list(s: &str) -> Option<Vec<f64>> {
    if s.trim().is_empty() {
        return Some(Vec::new());
    }
    s.split(',').map(parse_num).collect()
}

fn parse_pair(s: &str) -> Option<[f64; 2]> {
    match parse_list(s)?.as_slice() {
        [a, b] => Some([*a, *b]),
        _ => None,
    }
}
