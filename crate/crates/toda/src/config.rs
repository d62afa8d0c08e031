//! Line-oriented `key = value` run configuration with total validation and
//! line-numbered errors.

use crate::continuum::{FieldState, Grid1D};
use crate::error::TodaError;
use crate::lattice::FlaschkaState;
use std::fmt;
use std::path::PathBuf;

/// Which system a run integrates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SystemKind {
    Deterministic,
    Stochastic,
    Isospectral,
    Dissipative,
    Combined,
    Continuum,
}

impl SystemKind {
    pub const ALL: [SystemKind; 6] = [
        SystemKind::Deterministic,
        SystemKind::Stochastic,
        SystemKind::Isospectral,
        SystemKind::Dissipative,
        SystemKind::Combined,
        SystemKind::Continuum,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SystemKind::Deterministic => "deterministic",
            SystemKind::Stochastic => "stochastic",
            SystemKind::Isospectral => "isospectral",
            SystemKind::Dissipative => "dissipative",
            SystemKind::Combined => "combined",
            SystemKind::Continuum => "continuum",
        }
    }
}

/// Initial-condition descriptor.
#[derive(Clone, Debug, PartialEq)]
pub enum InitSpec {
    /// a = 0, b = 1/2 (particles at rest, equal spacing).
    RestEqualSpacing,
    /// Two localized bond excitations that split into soliton-like pulses.
    TwoSolitonLike,
    /// Uniform perturbation of the rest state, own seed and amplitude.
    Random { seed: u64, scale: f64 },
    /// Smooth periodic profiles for the continuum system.
    SmoothSine,
    /// Explicit `a` / `b` lists from the config file.
    Explicit { a: Vec<f64>, b: Vec<f64> },
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

fn uniform01(state: &mut u64) -> f64 {
    (splitmix64(state) >> 11) as f64 * (1.0 / 9007199254740992.0)
}

fn sech2(x: f64) -> f64 {
    let c = x.cosh();
    1.0 / (c * c)
}

impl InitSpec {
    /// Materialize the lattice initial state at size n.
    pub fn build_lattice(&self, n: usize) -> Result<FlaschkaState, TodaError> {
        match self {
            InitSpec::RestEqualSpacing => {
                FlaschkaState::new(vec![0.0; n], vec![0.5; n - 1])
            }
            InitSpec::TwoSolitonLike => {
                let a = vec![0.0; n];
                let c1 = n as f64 / 4.0;
                let c2 = 3.0 * n as f64 / 4.0;
                let b = (0..n - 1)
                    .map(|i| {
                        let x = i as f64 + 0.5;
                        0.5 + 0.4 * (sech2(0.5 * (x - c1)) + sech2(0.5 * (x - c2)))
                    })
                    .collect();
                FlaschkaState::new(a, b)
            }
            InitSpec::Random { seed, scale } => {
                let mut s = *seed;
                let a = (0..n)
                    .map(|_| scale * (2.0 * uniform01(&mut s) - 1.0))
                    .collect();
                let b = (0..n - 1)
                    .map(|_| 0.5 + 0.5 * scale * (2.0 * uniform01(&mut s) - 1.0))
                    .collect();
                FlaschkaState::new(a, b)
            }
            InitSpec::SmoothSine => Err(TodaError::InvalidSpec(
                "init smooth-sine is only defined for the continuum system".into(),
            )),
            InitSpec::Explicit { a, b } => FlaschkaState::new(a.clone(), b.clone()),
        }
    }

    /// Materialize the continuum fields on the grid.
    pub fn build_field(&self, grid: &Grid1D) -> Result<FieldState, TodaError> {
        let n = grid.n_points;
        let len = grid.length();
        match self {
            InitSpec::RestEqualSpacing => FieldState::new(vec![0.0; n], vec![0.5; n]),
            InitSpec::SmoothSine => {
                let k = std::f64::consts::TAU / len;
                let a = (0..n).map(|j| 0.3 * (k * grid.x(j)).sin()).collect();
                let b = (0..n).map(|j| 0.5 + 0.1 * (k * grid.x(j)).cos()).collect();
                FieldState::new(a, b)
            }
            InitSpec::Random { seed, scale } => {
                let mut s = *seed;
                let a = (0..n)
                    .map(|_| scale * (2.0 * uniform01(&mut s) - 1.0))
                    .collect();
                let b = (0..n)
                    .map(|_| 0.5 + 0.5 * scale * (2.0 * uniform01(&mut s) - 1.0))
                    .collect();
                FieldState::new(a, b)
            }
            InitSpec::Explicit { a, b } => FieldState::new(a.clone(), b.clone()),
            InitSpec::TwoSolitonLike => Err(TodaError::InvalidSpec(
                "init two-soliton-like is only defined for lattice systems".into(),
            )),
        }
    }
}

/// Noise amplitude as given in the config; broadcast to bonds at build time.
#[derive(Clone, Debug, PartialEq)]
pub enum SigmaSpec {
    Scalar(f64),
    PerBond(Vec<f64>),
}

impl SigmaSpec {
    pub fn broadcast(&self, n_bonds: usize) -> Result<Vec<f64>, TodaError> {
        match self {
            SigmaSpec::Scalar(s) => Ok(vec![*s; n_bonds]),
            SigmaSpec::PerBond(v) => {
                if v.len() != n_bonds {
                    return Err(TodaError::DimensionMismatch(v.len(), n_bonds));
                }
                Ok(v.clone())
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            SigmaSpec::Scalar(s) => *s == 0.0,
            SigmaSpec::PerBond(v) => v.iter().all(|s| *s == 0.0),
        }
    }
}

/// Fully validated run configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub system: SystemKind,
    pub n: usize,
    pub dt: f64,
    pub t_end: f64,
    pub record_every: usize,
    pub sigma: SigmaSpec,
    pub theta: f64,
    pub seed: u64,
    pub n_paths: usize,
    pub output_dir: Option<PathBuf>,
    pub init: InitSpec,
    /// Continuum grid spacing; defaults to 1/n.
    pub eps: Option<f64>,
}

impl RunConfig {
    pub fn grid(&self) -> Result<Grid1D, TodaError> {
        Grid1D::new(self.n, self.eps.unwrap_or(1.0 / self.n as f64))
    }
}

/// Parse failure with the 1-based line it occurred on (0 for whole-file
/// problems such as missing keys).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line > 0 {
            write!(f, "line {}: {}", self.line, self.message)
        } else {
            write!(f, "{}", self.message)
        }
    }
}

impl std::error::Error for ConfigError {}

fn err(line: usize, message: impl Into<String>) -> ConfigError {
    ConfigError {
        line,
        message: message.into(),
    }
}

fn parse_f64(line: usize, key: &str, v: &str) -> Result<f64, ConfigError> {
    v.parse::<f64>()
        .map_err(|_| err(line, format!("{key}: expected a number, got `{v}`")))
}

fn parse_usize(line: usize, key: &str, v: &str) -> Result<usize, ConfigError> {
    v.parse::<usize>()
        .map_err(|_| err(line, format!("{key}: expected a nonnegative integer, got `{v}`")))
}

fn parse_u64(line: usize, key: &str, v: &str) -> Result<u64, ConfigError> {
    v.parse::<u64>()
        .map_err(|_| err(line, format!("{key}: expected a 64-bit seed, got `{v}`")))
}

fn parse_list(line: usize, key: &str, v: &str) -> Result<Vec<f64>, ConfigError> {
    v.split(',')
        .map(|s| parse_f64(line, key, s.trim()))
        .collect()
}

fn parse_init(line: usize, v: &str) -> Result<InitSpec, ConfigError> {
    match v {
        "rest-equal-spacing" => Ok(InitSpec::RestEqualSpacing),
        "two-soliton-like" => Ok(InitSpec::TwoSolitonLike),
        "smooth-sine" => Ok(InitSpec::SmoothSine),
        "explicit" => Ok(InitSpec::Explicit {
            a: Vec::new(),
            b: Vec::new(),
        }),
        other => {
            if let Some(args) = other
                .strip_prefix("random(")
                .and_then(|s| s.strip_suffix(')'))
            {
                let parts: Vec<&str> = args.split(',').map(str::trim).collect();
                if parts.len() != 2 {
                    return Err(err(line, format!("init: random takes (seed, scale), got `{v}`")));
                }
                let seed = parse_u64(line, "init.seed", parts[0])?;
                let scale = parse_f64(line, "init.scale", parts[1])?;
                if !(scale > 0.0) || !scale.is_finite() {
                    return Err(err(line, format!("init.scale must be > 0, got {scale}")));
                }
                return Ok(InitSpec::Random { seed, scale });
            }
            Err(err(
                line,
                format!(
                    "init: unknown generator `{other}` (expected rest-equal-spacing, \
                     two-soliton-like, random(seed, scale), smooth-sine, or explicit)"
                ),
            ))
        }
    }
}

/// Raw key assignment; shared by the file parser and `--override`.
struct Raw {
    system: Option<SystemKind>,
    n: Option<usize>,
    dt: Option<f64>,
    t_end: Option<f64>,
    record_every: Option<usize>,
    sigma: Option<SigmaSpec>,
    theta: Option<f64>,
    seed: Option<u64>,
    n_paths: Option<usize>,
    output_dir: Option<PathBuf>,
    init: Option<InitSpec>,
    a: Option<Vec<f64>>,
    b: Option<Vec<f64>>,
    eps: Option<f64>,
}

impl Raw {
    fn empty() -> Self {
        Raw {
            system: None,
            n: None,
            dt: None,
            t_end: None,
            record_every: None,
            sigma: None,
            theta: None,
            seed: None,
            n_paths: None,
            output_dir: None,
            init: None,
            a: None,
            b: None,
            eps: None,
        }
    }

    fn apply(&mut self, line: usize, key: &str, value: &str) -> Result<(), ConfigError> {
        match key {
            "system" => {
                self.system = Some(
                    SystemKind::ALL
                        .iter()
                        .find(|s| s.name() == value)
                        .copied()
                        .ok_or_else(|| {
                            err(line, format!("system: unknown value `{value}`"))
                        })?,
                )
            }
            "n" => self.n = Some(parse_usize(line, key, value)?),
            "dt" => self.dt = Some(parse_f64(line, key, value)?),
            "t_end" => self.t_end = Some(parse_f64(line, key, value)?),
            "record_every" => self.record_every = Some(parse_usize(line, key, value)?),
            "sigma" => {
                self.sigma = Some(if value.contains(',') {
                    SigmaSpec::PerBond(parse_list(line, key, value)?)
                } else {
                    SigmaSpec::Scalar(parse_f64(line, key, value)?)
                })
            }
            "theta" => self.theta = Some(parse_f64(line, key, value)?),
            "seed" => self.seed = Some(parse_u64(line, key, value)?),
            "n_paths" => self.n_paths = Some(parse_usize(line, key, value)?),
            "output_dir" => self.output_dir = Some(PathBuf::from(value)),
            "init" => self.init = Some(parse_init(line, value)?),
            "a" => self.a = Some(parse_list(line, key, value)?),
            "b" => self.b = Some(parse_list(line, key, value)?),
            "eps" => self.eps = Some(parse_f64(line, key, value)?),
            other => return Err(err(line, format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    fn finish(self) -> Result<RunConfig, ConfigError> {
        let system = self.system.ok_or_else(|| err(0, "missing key `system`"))?;
        let n = self.n.ok_or_else(|| err(0, "missing key `n`"))?;
        let min_n = if system == SystemKind::Continuum { 8 } else { 2 };
        if n < min_n || n > 256 {
            return Err(err(0, format!("n = {n} out of range {min_n}..=256")));
        }
        let mut init = self.init.ok_or_else(|| err(0, "missing key `init`"))?;
        if let InitSpec::Explicit { a, b } = &mut init {
            *a = self.a.ok_or_else(|| err(0, "init = explicit requires key `a`"))?;
            let expect_b = if system == SystemKind::Continuum { n } else { n - 1 };
            *b = self.b.ok_or_else(|| err(0, "init = explicit requires key `b`"))?;
            if a.len() != n || b.len() != expect_b {
                return Err(err(
                    0,
                    format!(
                        "explicit init needs {} a-values and {} b-values, got {} and {}",
                        n,
                        expect_b,
                        a.len(),
                        b.len()
                    ),
                ));
            }
        } else if self.a.is_some() || self.b.is_some() {
            return Err(err(0, "keys `a`/`b` require init = explicit"));
        }

        let dt = self.dt.unwrap_or(1e-3);
        let t_end = self.t_end.unwrap_or(1.0);
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(err(0, format!("dt = {dt} must be > 0")));
        }
        if !(t_end >= dt) || !t_end.is_finite() {
            return Err(err(0, format!("t_end = {t_end} must be >= dt = {dt}")));
        }
        let record_every = self.record_every.unwrap_or(10);
        if record_every == 0 {
            return Err(err(0, "record_every must be >= 1"));
        }
        let sigma = self.sigma.unwrap_or(SigmaSpec::Scalar(0.0));
        let bad_sigma = match &sigma {
            SigmaSpec::Scalar(s) => !s.is_finite() || *s < 0.0,
            SigmaSpec::PerBond(v) => {
                v.iter().any(|s| !s.is_finite() || *s < 0.0)
                    || v.len() != if system == SystemKind::Continuum { n } else { n - 1 }
            }
        };
        if bad_sigma {
            return Err(err(
                0,
                "sigma must be finite, >= 0, and (if a list) one value per bond",
            ));
        }
        let theta = self.theta.unwrap_or(0.0);
        if !theta.is_finite() || theta < 0.0 {
            return Err(err(0, format!("theta = {theta} must be finite and >= 0")));
        }
        let n_paths = self.n_paths.unwrap_or(1);
        if n_paths == 0 || n_paths > 1_000_000 {
            return Err(err(0, format!("n_paths = {n_paths} out of range 1..=1000000")));
        }
        if let Some(eps) = self.eps {
            if system != SystemKind::Continuum {
                return Err(err(0, "key `eps` applies to the continuum system only"));
            }
            if !(eps > 0.0) || !eps.is_finite() {
                return Err(err(0, format!("eps = {eps} must be > 0")));
            }
        }
        if system == SystemKind::Continuum && matches!(init, InitSpec::TwoSolitonLike) {
            return Err(err(0, "init two-soliton-like is for lattice systems"));
        }
        if system != SystemKind::Continuum && matches!(init, InitSpec::SmoothSine) {
            return Err(err(0, "init smooth-sine is for the continuum system"));
        }
        Ok(RunConfig {
            system,
            n,
            dt,
            t_end,
            record_every,
            sigma,
            theta,
            seed: self.seed.unwrap_or(0),
            n_paths,
            output_dir: self.output_dir,
            init,
            eps: self.eps,
        })
    }
}

fn split_line(line_no: usize, line: &str) -> Result<Option<(String, String)>, ConfigError> {
    let stripped = match line.find('#') {
        Some(pos) => &line[..pos],
        None => line,
    }
    .trim();
    if stripped.is_empty() {
        return Ok(None);
    }
    let (key, value) = stripped
        .split_once('=')
        .ok_or_else(|| err(line_no, format!("expected `key = value`, got `{stripped}`")))?;
    Ok(Some((key.trim().to_string(), value.trim().to_string())))
}

/// Parse a config file, then apply `key=value` overrides in order.
pub fn parse_config_with_overrides(
    text: &str,
    overrides: &[String],
) -> Result<RunConfig, ConfigError> {
    let mut raw = Raw::empty();
    for (idx, line) in text.lines().enumerate() {
        if let Some((key, value)) = split_line(idx + 1, line)? {
            raw.apply(idx + 1, &key, &value)?;
        }
    }
    for ov in overrides {
        let (key, value) = ov
            .split_once('=')
            .ok_or_else(|| err(0, format!("override `{ov}` is not key=value")))?;
        raw.apply(0, key.trim(), value.trim())?;
    }
    raw.finish()
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    parse_config_with_overrides(text, &[])
}
