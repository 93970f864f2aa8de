//! Run configuration: a flat `key = value` (TOML) file, presets and
//! command-line overrides, validated into a [`RunConfig`].
//!
//! Precedence, lowest first: built-in reference defaults, config file,
//! preset (`--desk` / `--paper`), explicit flags.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use thiserror::Error;
use toml::Value;

use crate::channel::{dbm_to_watts, ChannelParams};
use crate::montecarlo::{threshold_grid, DEFAULT_GUARD_FRACTION};
use crate::scenario::Scheme;

pub const DEFAULT_WINDOW_KM: f64 = 200.0;
pub const DEFAULT_LAMBDA_C: f64 = 0.02;
pub const DEFAULT_NOISE_DBM: f64 = -174.0;
pub const DEFAULT_ALPHA: f64 = 4.0;
pub const DEFAULT_P_B_DBM: f64 = 40.0;
pub const DEFAULT_P_M_DBM: f64 = 20.0;
pub const PAPER_DROPS: usize = 10_000;
pub const DESK_WINDOW_KM: f64 = 50.0;
pub const DESK_DROPS: usize = 2000;

/// Table name in a config file that is carried along but never interpreted.
pub const PROVENANCE_TABLE: &str = "provenance";

const KNOWN_KEYS: &[&str] = &[
    "window_km",
    "lambda_c",
    "lambda_f",
    "noise_dbm",
    "noise_w",
    "alpha",
    "mu",
    "p_b_dbm",
    "p_b_w",
    "p_m_dbm",
    "p_m_w",
    "beta_db",
    "drops",
    "seed",
    "guard_fraction",
    "mode",
    "schemes",
    "figure",
    "out",
    "typical_only",
];

#[derive(Debug, Error, Clone, PartialEq)]
#[error("config error in `{field}`: {message}")]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Mc,
    Analytic,
    Both,
}

impl Mode {
    pub fn includes_mc(self) -> bool {
        matches!(self, Mode::Mc | Mode::Both)
    }

    pub fn includes_analytic(self) -> bool {
        matches!(self, Mode::Analytic | Mode::Both)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Mc => "mc",
            Mode::Analytic => "analytic",
            Mode::Both => "both",
        }
    }
}

impl FromStr for Mode {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        match s {
            "mc" => Ok(Mode::Mc),
            "analytic" => Ok(Mode::Analytic),
            "both" => Ok(Mode::Both),
            other => Err(ConfigError::new(
                "mode",
                format!("expected mc, analytic or both, got '{other}'"),
            )),
        }
    }
}

/// Which reference figure to reproduce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    /// Uplink success curves.
    UplinkSuccess,
    /// Downlink success curves.
    DownlinkSuccess,
    /// Link-distance CDFs.
    DistanceCdfs,
}

impl Figure {
    pub fn from_number(n: i64) -> Result<Self, ConfigError> {
        match n {
            3 => Ok(Figure::UplinkSuccess),
            4 => Ok(Figure::DownlinkSuccess),
            5 => Ok(Figure::DistanceCdfs),
            other => Err(ConfigError::new(
                "figure",
                format!("expected 3, 4 or 5, got {other}"),
            )),
        }
    }

    pub fn number(self) -> i64 {
        match self {
            Figure::UplinkSuccess => 3,
            Figure::DownlinkSuccess => 4,
            Figure::DistanceCdfs => 5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// 50 km window, 2000 drops.
    Desk,
    /// 200 km window, 10⁴ drops.
    Paper,
}

/// Scheme selection string: `compflex`, `fd` or `both`.
pub fn parse_schemes(s: &str) -> Result<Vec<Scheme>, ConfigError> {
    match s {
        "both" => Ok(vec![Scheme::CompFlex, Scheme::FullDuplex]),
        other => other
            .parse::<Scheme>()
            .map(|x| vec![x])
            .map_err(|e| ConfigError::new("schemes", e.to_string())),
    }
}

fn schemes_str(schemes: &[Scheme]) -> &'static str {
    match schemes {
        [Scheme::CompFlex] => "compflex",
        [Scheme::FullDuplex] => "fd",
        _ => "both",
    }
}

/// Command-line overrides; `None` leaves the lower-precedence value.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub preset: Option<Preset>,
    pub figure: Option<Figure>,
    pub seed: Option<u64>,
    pub drops: Option<usize>,
    pub mode: Option<Mode>,
    pub schemes: Option<Vec<Scheme>>,
    pub out: Option<PathBuf>,
}

/// Fully validated experiment configuration. Powers are in dBm.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub window_km: f64,
    pub lambda_c: f64,
    pub lambda_f: f64,
    pub noise_dbm: f64,
    pub alpha: f64,
    pub mu: f64,
    pub p_b_dbm: f64,
    pub p_m_dbm: f64,
    pub beta_db: Vec<f64>,
    pub drops: usize,
    pub seed: u64,
    pub guard_fraction: f64,
    pub mode: Mode,
    pub schemes: Vec<Scheme>,
    pub figure: Option<Figure>,
    pub out_dir: PathBuf,
    pub typical_only: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            window_km: DEFAULT_WINDOW_KM,
            lambda_c: DEFAULT_LAMBDA_C,
            lambda_f: 0.5 * DEFAULT_LAMBDA_C,
            noise_dbm: DEFAULT_NOISE_DBM,
            alpha: DEFAULT_ALPHA,
            mu: 1.0,
            p_b_dbm: DEFAULT_P_B_DBM,
            p_m_dbm: DEFAULT_P_M_DBM,
            beta_db: threshold_grid(-20.0, 20.0, 5.0),
            drops: PAPER_DROPS,
            seed: 1,
            guard_fraction: DEFAULT_GUARD_FRACTION,
            mode: Mode::Both,
            schemes: vec![Scheme::CompFlex, Scheme::FullDuplex],
            figure: None,
            out_dir: PathBuf::from("out"),
            typical_only: false,
        }
    }
}

impl RunConfig {
    pub fn channel(&self) -> ChannelParams {
        ChannelParams {
            alpha: self.alpha,
            mu: self.mu,
            noise: dbm_to_watts(self.noise_dbm),
            p_bs: dbm_to_watts(self.p_b_dbm),
            p_ms: dbm_to_watts(self.p_m_dbm),
        }
    }

    pub fn lambda(&self, scheme: Scheme) -> f64 {
        match scheme {
            Scheme::CompFlex => self.lambda_c,
            Scheme::FullDuplex => self.lambda_f,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let positive = |field: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(ConfigError::new(
                    field,
                    format!("must be positive and finite, got {v}"),
                ))
            }
        };
        positive("window_km", self.window_km)?;
        positive("lambda_c", self.lambda_c)?;
        positive("lambda_f", self.lambda_f)?;
        positive("mu", self.mu)?;
        if !(self.alpha.is_finite() && self.alpha > 2.0) {
            return Err(ConfigError::new(
                "alpha",
                format!(
                    "path-loss exponent must exceed 2 for convergence, got {}",
                    self.alpha
                ),
            ));
        }
        for (field, v) in [
            ("noise_dbm", self.noise_dbm),
            ("p_b_dbm", self.p_b_dbm),
            ("p_m_dbm", self.p_m_dbm),
        ] {
            if !v.is_finite() {
                return Err(ConfigError::new(field, format!("must be finite, got {v}")));
            }
        }
        if self.beta_db.is_empty() {
            return Err(ConfigError::new("beta_db", "threshold grid is empty"));
        }
        if self.beta_db.iter().any(|b| !b.is_finite()) {
            return Err(ConfigError::new("beta_db", "thresholds must be finite"));
        }
        if self.beta_db.windows(2).any(|w| w[1] <= w[0]) {
            return Err(ConfigError::new(
                "beta_db",
                "thresholds must be strictly increasing",
            ));
        }
        if self.drops == 0 {
            return Err(ConfigError::new("drops", "must be at least 1"));
        }
        if !(0.0..1.0).contains(&self.guard_fraction) {
            return Err(ConfigError::new(
                "guard_fraction",
                format!("must lie in [0, 1), got {}", self.guard_fraction),
            ));
        }
        if self.schemes.is_empty() {
            return Err(ConfigError::new("schemes", "no scheme selected"));
        }
        Ok(())
    }

    /// Renders every input as a config file that parses back to `self`.
    pub fn to_toml(&self) -> String {
        let mut t = toml::Table::new();
        t.insert("window_km".into(), Value::Float(self.window_km));
        t.insert("lambda_c".into(), Value::Float(self.lambda_c));
        t.insert("lambda_f".into(), Value::Float(self.lambda_f));
        t.insert("noise_dbm".into(), Value::Float(self.noise_dbm));
        t.insert("alpha".into(), Value::Float(self.alpha));
        t.insert("mu".into(), Value::Float(self.mu));
        t.insert("p_b_dbm".into(), Value::Float(self.p_b_dbm));
        t.insert("p_m_dbm".into(), Value::Float(self.p_m_dbm));
        t.insert(
            "beta_db".into(),
            Value::Array(self.beta_db.iter().map(|&b| Value::Float(b)).collect()),
        );
        t.insert("drops".into(), Value::Integer(self.drops as i64));
        t.insert("seed".into(), Value::Integer(self.seed as i64));
        t.insert("guard_fraction".into(), Value::Float(self.guard_fraction));
        t.insert("mode".into(), Value::String(self.mode.as_str().into()));
        t.insert(
            "schemes".into(),
            Value::String(schemes_str(&self.schemes).into()),
        );
        if let Some(f) = self.figure {
            t.insert("figure".into(), Value::Integer(f.number()));
        }
        t.insert(
            "out".into(),
            Value::String(self.out_dir.display().to_string()),
        );
        t.insert("typical_only".into(), Value::Boolean(self.typical_only));
        toml::to_string(&t).expect("flat table always serialises")
    }
}

impl fmt::Display for RunConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_toml())
    }
}

/// Loads and validates a configuration from an optional file plus overrides.
pub fn parse_config(path: Option<&Path>, overrides: &Overrides) -> Result<RunConfig, ConfigError> {
    let text = match path {
        Some(p) => std::fs::read_to_string(p)
            .map_err(|e| ConfigError::new("config", format!("{}: {e}", p.display())))?,
        None => String::new(),
    };
    parse_config_str(&text, overrides)
}

/// Same as [`parse_config`] for in-memory config text.
pub fn parse_config_str(text: &str, overrides: &Overrides) -> Result<RunConfig, ConfigError> {
    let table: toml::Table = text
        .parse()
        .map_err(|e: toml::de::Error| ConfigError::new("config", e.message().to_string()))?;
    let mut entries = BTreeMap::new();
    for (key, value) in table {
        if key == PROVENANCE_TABLE {
            continue;
        }
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(ConfigError::new(key, "unknown key"));
        }
        entries.insert(key, value);
    }

    let mut cfg = RunConfig::default();
    let float = |key: &str, v: &Value| -> Result<f64, ConfigError> {
        match v {
            Value::Float(x) => Ok(*x),
            Value::Integer(i) => Ok(*i as f64),
            _ => Err(ConfigError::new(key, "expected a number")),
        }
    };
    let integer = |key: &str, v: &Value| -> Result<i64, ConfigError> {
        v.as_integer()
            .ok_or_else(|| ConfigError::new(key, "expected an integer"))
    };
    let string = |key: &str, v: &Value| -> Result<String, ConfigError> {
        v.as_str()
            .map(str::to_owned)
            .ok_or_else(|| ConfigError::new(key, "expected a string"))
    };
    let watts_to_dbm = |key: &str, w: f64| -> Result<f64, ConfigError> {
        if !(w.is_finite() && w > 0.0) {
            return Err(ConfigError::new(
                key,
                format!("power must be positive watts, got {w}"),
            ));
        }
        Ok(crate::channel::watts_to_dbm(w))
    };
    for (dbm, w) in [
        ("noise_dbm", "noise_w"),
        ("p_b_dbm", "p_b_w"),
        ("p_m_dbm", "p_m_w"),
    ] {
        if entries.contains_key(dbm) && entries.contains_key(w) {
            return Err(ConfigError::new(w, format!("conflicts with `{dbm}`")));
        }
    }

    let mut lambda_f_given = false;
    for (key, v) in &entries {
        let k = key.as_str();
        match k {
            "window_km" => cfg.window_km = float(k, v)?,
            "lambda_c" => cfg.lambda_c = float(k, v)?,
            "lambda_f" => {
                cfg.lambda_f = float(k, v)?;
                lambda_f_given = true;
            }
            "noise_dbm" => cfg.noise_dbm = float(k, v)?,
            "noise_w" => cfg.noise_dbm = watts_to_dbm(k, float(k, v)?)?,
            "alpha" => cfg.alpha = float(k, v)?,
            "mu" => cfg.mu = float(k, v)?,
            "p_b_dbm" => cfg.p_b_dbm = float(k, v)?,
            "p_b_w" => cfg.p_b_dbm = watts_to_dbm(k, float(k, v)?)?,
            "p_m_dbm" => cfg.p_m_dbm = float(k, v)?,
            "p_m_w" => cfg.p_m_dbm = watts_to_dbm(k, float(k, v)?)?,
            "beta_db" => {
                let arr = v
                    .as_array()
                    .ok_or_else(|| ConfigError::new(k, "expected an array of numbers"))?;
                cfg.beta_db = arr.iter().map(|x| float(k, x)).collect::<Result<_, _>>()?;
            }
            "drops" => {
                let d = integer(k, v)?;
                cfg.drops = usize::try_from(d)
                    .map_err(|_| ConfigError::new(k, format!("must be non-negative, got {d}")))?;
            }
            "seed" => {
                let s = integer(k, v)?;
                cfg.seed = u64::try_from(s)
                    .map_err(|_| ConfigError::new(k, format!("must be non-negative, got {s}")))?;
            }
            "guard_fraction" => cfg.guard_fraction = float(k, v)?,
            "mode" => cfg.mode = string(k, v)?.parse()?,
            "schemes" => cfg.schemes = parse_schemes(&string(k, v)?)?,
            "figure" => cfg.figure = Some(Figure::from_number(integer(k, v)?)?),
            "out" => cfg.out_dir = PathBuf::from(string(k, v)?),
            "typical_only" => {
                cfg.typical_only = v
                    .as_bool()
                    .ok_or_else(|| ConfigError::new(k, "expected true or false"))?
            }
            _ => unreachable!("key list checked above"),
        }
    }

    match overrides.preset {
        Some(Preset::Desk) => {
            cfg.window_km = DESK_WINDOW_KM;
            cfg.drops = DESK_DROPS;
        }
        Some(Preset::Paper) => {
            cfg.window_km = DEFAULT_WINDOW_KM;
            cfg.drops = PAPER_DROPS;
        }
        None => {}
    }
    if let Some(f) = overrides.figure {
        cfg.figure = Some(f);
    }
    if let Some(s) = overrides.seed {
        cfg.seed = s;
    }
    if let Some(d) = overrides.drops {
        cfg.drops = d;
    }
    if let Some(m) = overrides.mode {
        cfg.mode = m;
    }
    if let Some(s) = &overrides.schemes {
        cfg.schemes = s.clone();
    }
    if let Some(o) = &overrides.out {
        cfg.out_dir = o.clone();
    }

    if !lambda_f_given {
        cfg.lambda_f = 0.5 * cfg.lambda_c;
    } else if cfg.schemes.len() > 1
        && (cfg.lambda_f - 0.5 * cfg.lambda_c).abs() > 1e-9 * cfg.lambda_c
    {
        return Err(ConfigError::new(
            "lambda_f",
            format!(
                "comparing both schemes requires lambda_f = lambda_c / 2 = {}, got {}",
                0.5 * cfg.lambda_c,
                cfg.lambda_f
            ),
        ));
    }
    cfg.validate()?;
    Ok(cfg)
}
