//! Experiment configuration.
//!
//! A configuration is a TOML document. Every experiment has a complete set of
//! defaults; a user file and `key=value` overrides are merged on top, so a
//! file only needs the keys it changes. Nested keys use dots on the command
//! line (`grid.pts_per_segment=1001`).
//!
//! ```toml
//! experiment = "gaussian"
//! name = "gaussian"            # prefix of the output files
//! record_wall_time = true      # false writes wall_ms = 0 for reproducible files
//! svd_eps = 1e-14              # singular value cutoff
//! svd_cutoff = "relative"      # keep σ ≥ svd_eps·σ_max; "absolute" keeps σ ≥ svd_eps
//!
//! [space]
//! extended_exponent = -0.3333333333333333
//! weighted_exponent = 0.3333333333333333
//! extended_offset = 0          # first degree of the extended families
//! n_schedule = [10, 30, 50]    # column counts N to try
//!
//! [grid]
//! breaks = [-5.0, -3.0, -1.0, 1.0, 3.0, 5.0]
//! pads = [[-10.0, -5.0], [5.0, 10.0]]
//! pts_per_segment = 501
//! eps_offset = 1e-2
//!
//! [operator]
//! terms = [[1.0, 0.0], [1.0, 0.3333333333333333]]   # (λ, s) pairs
//! ```

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};

/// The built-in experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Gaussian,
    MultExponents,
    Gaussian2d,
    FracHeat,
    VariableS,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 5] = [
        ExperimentKind::Gaussian,
        ExperimentKind::MultExponents,
        ExperimentKind::Gaussian2d,
        ExperimentKind::FracHeat,
        ExperimentKind::VariableS,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::Gaussian => "gaussian",
            ExperimentKind::MultExponents => "mult-exponents",
            ExperimentKind::Gaussian2d => "gaussian2d",
            ExperimentKind::FracHeat => "frac-heat",
            ExperimentKind::VariableS => "variable-s",
        }
    }

    pub fn is_time_dependent(&self) -> bool {
        matches!(self, ExperimentKind::FracHeat | ExperimentKind::VariableS)
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| {
            let names: Vec<_> = Self::ALL.iter().map(|k| k.name()).collect();
            anyhow!("unknown experiment {s:?}; expected one of {}", names.join(", "))
        })
    }
}

/// The families of the sum space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceConfig {
    /// Exponent (a = s) of the extended families.
    pub extended_exponent: f64,
    /// Exponent of the weighted families.
    pub weighted_exponent: f64,
    /// First degree of the extended families (0 or 1).
    pub extended_offset: usize,
    /// Column counts to solve with; time-dependent runs use the last one.
    pub n_schedule: Vec<usize>,
    /// Disk radii of the 2D families.
    #[serde(default)]
    pub disk_radii: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    /// Interval endpoints in 1D, radial breaks in 2D.
    pub breaks: Vec<f64>,
    /// Exterior segments (1D only).
    #[serde(default)]
    pub pads: Vec<[f64; 2]>,
    pub pts_per_segment: usize,
    pub eps_offset: f64,
    /// Angles of the 2D tensor grid.
    #[serde(default)]
    pub n_angles: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorConfig {
    /// (λ, s) pairs of Σ λ (−Δ)^s; s = 0 is the identity.
    pub terms: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeConfig {
    /// Tableau names (see `fracframes::timestep::Method`).
    pub methods: Vec<String>,
    pub dts: Vec<f64>,
    pub t_end: f64,
    /// Points where the t_end solution is compared pointwise.
    #[serde(default)]
    pub tail_points: Vec<f64>,
    /// s(t) = s_start − s_rate·t for the variable-exponent run.
    #[serde(default)]
    pub s_start: f64,
    #[serde(default)]
    pub s_rate: f64,
    /// Constant exponents run alongside the variable one for comparison.
    #[serde(default)]
    pub compare_s: Vec<f64>,
    /// Range [lo, hi] of x on which decay slopes are fitted; it must avoid
    /// interval endpoints, where the extended functions are singular.
    #[serde(default)]
    pub tail_range: Option<[f64; 2]>,
}

/// How `svd_eps` is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum CutoffKind {
    /// Keep σ ≥ svd_eps · σ_max.
    #[default]
    Relative,
    /// Keep σ ≥ svd_eps.
    Absolute,
}

/// Right-hand side of a stationary solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum RhsSpec {
    /// Σ λ (−Δ)^s e^{−|x|²}, with exact solution e^{−|x|²}.
    #[default]
    Gaussian,
    /// Column j of the operator image, with exact solution column j of the space.
    Column(usize),
    /// One value per collocation point, read from a single-column CSV with header `f`.
    Samples(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    #[serde(default)]
    pub rhs: RhsSpec,
    /// Points where `solve` tabulates the solution; empty means the collocation points.
    #[serde(default)]
    pub eval_x: Vec<f64>,
    /// Second coordinates of the evaluation points in 2D (paired with eval_x).
    #[serde(default)]
    pub eval_y: Vec<f64>,
}

/// A fully resolved experiment configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub experiment: ExperimentKind,
    /// Prefix of the output files.
    pub name: String,
    /// When false the wall_ms column is written as 0, making every output
    /// bit-reproducible.
    pub record_wall_time: bool,
    pub svd_eps: f64,
    #[serde(default)]
    pub svd_cutoff: CutoffKind,
    pub space: SpaceConfig,
    pub grid: GridConfig,
    pub operator: OperatorConfig,
    #[serde(default)]
    pub problem: ProblemConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time: Option<TimeConfig>,
}

const THIRD: f64 = 1.0 / 3.0;

fn unit_intervals() -> Vec<f64> {
    vec![-5.0, -3.0, -1.0, 1.0, 3.0, 5.0]
}

fn schedule(lo: usize, hi: usize, step: usize) -> Vec<usize> {
    (lo..=hi).step_by(step).collect()
}

impl Config {
    /// Desk-scale defaults of an experiment.
    pub fn defaults(kind: ExperimentKind) -> Config {
        let heat_time = TimeConfig {
            methods: vec![
                "backward-euler".into(),
                "implicit-midpoint".into(),
                "gauss-legendre-4".into(),
                "gauss-legendre-6".into(),
            ],
            dts: vec![1e-1, 1e-2, 1e-3],
            t_end: 1.0,
            tail_points: vec![-1e3, 1e3],
            s_start: 0.5,
            s_rate: 0.0,
            compare_s: vec![],
            tail_range: None,
        };
        let grid_1d = |pts: usize, eps: f64, pad: f64| GridConfig {
            breaks: unit_intervals(),
            pads: vec![[-pad, -5.0], [5.0, pad]],
            pts_per_segment: pts,
            eps_offset: eps,
            n_angles: 0,
        };
        match kind {
            ExperimentKind::Gaussian => Config {
                experiment: kind,
                name: kind.name().into(),
                record_wall_time: true,
                svd_eps: 1e-14,
                svd_cutoff: CutoffKind::Relative,
                problem: ProblemConfig::default(),
                space: SpaceConfig {
                    extended_exponent: -THIRD,
                    weighted_exponent: THIRD,
                    extended_offset: 0,
                    n_schedule: schedule(10, 150, 10),
                    disk_radii: vec![],
                },
                grid: grid_1d(501, 1e-2, 10.0),
                operator: OperatorConfig { terms: vec![[1.0, 0.0], [1.0, THIRD]] },
                time: None,
            },
            ExperimentKind::MultExponents => Config {
                experiment: kind,
                name: kind.name().into(),
                record_wall_time: true,
                svd_eps: 1e-14,
                svd_cutoff: CutoffKind::Relative,
                problem: ProblemConfig::default(),
                space: SpaceConfig {
                    extended_exponent: -0.25,
                    weighted_exponent: 0.25,
                    extended_offset: 0,
                    n_schedule: schedule(10, 150, 10),
                    disk_radii: vec![],
                },
                grid: grid_1d(501, 1e-2, 10.0),
                operator: OperatorConfig { terms: vec![[1.0, 0.0], [1.0, THIRD], [1.0, 0.2]] },
                time: None,
            },
            ExperimentKind::Gaussian2d => Config {
                experiment: kind,
                name: kind.name().into(),
                record_wall_time: true,
                svd_eps: 1e-14,
                svd_cutoff: CutoffKind::Relative,
                problem: ProblemConfig::default(),
                space: SpaceConfig {
                    extended_exponent: -0.5,
                    weighted_exponent: 0.5,
                    extended_offset: 0,
                    n_schedule: schedule(10, 150, 10),
                    disk_radii: vec![1.0, 1.5, 2.0, 3.0, 4.0],
                },
                grid: GridConfig {
                    breaks: vec![0.0, 1.0, 1.5, 2.0, 3.0, 4.0, 10.0],
                    pads: vec![],
                    pts_per_segment: 201,
                    eps_offset: 1e-3,
                    n_angles: 16,
                },
                operator: OperatorConfig { terms: vec![[1.0, 0.5]] },
                time: None,
            },
            ExperimentKind::FracHeat => Config {
                experiment: kind,
                name: kind.name().into(),
                record_wall_time: true,
                svd_eps: 1e-14,
                svd_cutoff: CutoffKind::Relative,
                problem: ProblemConfig::default(),
                space: SpaceConfig {
                    extended_exponent: -0.5,
                    weighted_exponent: 0.5,
                    extended_offset: 1,
                    n_schedule: vec![250],
                    disk_radii: vec![],
                },
                grid: grid_1d(1001, 1e-4, 20.0),
                operator: OperatorConfig { terms: vec![[1.0, 0.5]] },
                time: Some(heat_time),
            },
            ExperimentKind::VariableS => Config {
                experiment: kind,
                name: kind.name().into(),
                record_wall_time: true,
                svd_eps: 1e-14,
                svd_cutoff: CutoffKind::Relative,
                problem: ProblemConfig::default(),
                space: SpaceConfig {
                    extended_exponent: -0.5,
                    weighted_exponent: 0.5,
                    extended_offset: 1,
                    n_schedule: vec![150],
                    disk_radii: vec![],
                },
                grid: grid_1d(201, 1e-4, 20.0),
                operator: OperatorConfig { terms: vec![[1.0, 0.5]] },
                time: Some(TimeConfig {
                    methods: vec!["implicit-midpoint".into()],
                    dts: vec![1e-2],
                    t_end: 1.0,
                    tail_points: vec![],
                    s_start: 0.5,
                    s_rate: THIRD,
                    compare_s: vec![0.5, THIRD, 1.0 / 6.0],
                    tail_range: Some([5.5, 19.5]),
                }),
            },
        }
    }

    /// Defaults of `kind` with a TOML document and then `overrides` merged on top.
    pub fn resolve(kind: ExperimentKind, document: Option<&str>, overrides: &[String]) -> Result<Config> {
        let mut table = toml::Table::try_from(Config::defaults(kind)).context("serializing defaults")?;
        if let Some(doc) = document {
            let user: toml::Table = toml::from_str(doc).context("parsing configuration")?;
            merge(&mut table, user);
        }
        for ov in overrides {
            apply_override(&mut table, ov)?;
        }
        // Round-trip through text so deserialization errors point at the key.
        let text = toml::to_string(&table).context("serializing configuration")?;
        let config: Config = toml::from_str(&text).map_err(|e| anyhow!("invalid configuration: {e}"))?;
        if config.experiment != kind {
            bail!("configuration names experiment {} but {} was requested", config.experiment, kind);
        }
        config.validate()?;
        Ok(config)
    }

    /// Reads a configuration file; the experiment comes from its `experiment` key.
    pub fn from_file(path: &Path, overrides: &[String]) -> Result<Config> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let peek: toml::Table = toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        let kind = peek
            .get("experiment")
            .and_then(|v| v.as_str())
            .ok_or_else(|| anyhow!("{} has no `experiment` key", path.display()))?
            .parse()?;
        let mut config = Config::resolve(kind, Some(&text), overrides)?;
        if let RhsSpec::Samples(p) = &mut config.problem.rhs {
            if p.is_relative() {
                if let Some(dir) = path.parent() {
                    *p = dir.join(&*p);
                }
            }
        }
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.svd_eps.is_nan() || self.svd_eps <= 0.0 {
            bail!("svd_eps must be positive");
        }
        if self.space.n_schedule.is_empty() || self.space.n_schedule.contains(&0) {
            bail!("space.n_schedule needs positive column counts");
        }
        if self.space.n_schedule.windows(2).any(|w| w[0] >= w[1]) {
            bail!("space.n_schedule must be increasing");
        }
        if self.name.is_empty() || self.name.contains(['/', '\\']) {
            bail!("name must be a non-empty file name prefix");
        }
        if !self.problem.eval_y.is_empty() && self.problem.eval_y.len() != self.problem.eval_x.len() {
            bail!("problem.eval_y must pair with problem.eval_x");
        }
        if self.grid.pts_per_segment == 0 {
            bail!("grid.pts_per_segment must be positive");
        }
        if self.grid.breaks.len() < 2 {
            bail!("grid.breaks needs at least two entries");
        }
        if self.experiment == ExperimentKind::Gaussian2d
            && (self.space.disk_radii.is_empty() || self.grid.n_angles == 0)
        {
            bail!("2D runs need space.disk_radii and grid.n_angles");
        }
        if self.experiment.is_time_dependent() {
            let time = self.time.as_ref().ok_or_else(|| anyhow!("time-dependent runs need a [time] table"))?;
            if time.methods.is_empty() || time.dts.is_empty() {
                bail!("time.methods and time.dts must be non-empty");
            }
            if time.dts.iter().any(|dt| dt.is_nan() || *dt <= 0.0) {
                bail!("time steps must be positive");
            }
        }
        Ok(())
    }

    /// Largest column count of the schedule.
    pub fn n_max(&self) -> usize {
        self.space.n_schedule.iter().copied().max().unwrap_or(0)
    }
}

fn merge(base: &mut toml::Table, over: toml::Table) {
    for (k, v) in over {
        match (base.get_mut(&k), v) {
            (Some(toml::Value::Table(b)), toml::Value::Table(o)) => merge(b, o),
            (_, v) => {
                base.insert(k, v);
            }
        }
    }
}

/// Applies `a.b.c=value`; the value is parsed as TOML and falls back to a string.
pub fn apply_override(table: &mut toml::Table, ov: &str) -> Result<()> {
    let (key, raw) = ov.split_once('=').ok_or_else(|| anyhow!("override {ov:?} is not key=value"))?;
    let key = key.trim();
    if key.is_empty() {
        bail!("override {ov:?} has an empty key");
    }
    let value = toml::from_str::<toml::Table>(&format!("v = {}", raw.trim()))
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.trim().to_string()));
    let mut parts: Vec<&str> = key.split('.').collect();
    let last = parts.pop().expect("split yields at least one part");
    let mut cur = table;
    for p in parts {
        cur = cur
            .entry(p.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()))
            .as_table_mut()
            .ok_or_else(|| anyhow!("override {ov:?}: {p} is not a table"))?;
    }
    cur.insert(last.to_string(), value);
    Ok(())
}
