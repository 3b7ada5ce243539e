//! Scenario configuration: a flat `key = value` text format with `#`
//! comments, plus parsers for sweep axes.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use dipolar_qb::dynamics::{ChargeOrdering, TimeGrid, DEFAULT_DT, DEFAULT_SAMPLES};
use dipolar_qb::linalg::Subsystem;
use dipolar_qb::{ModelParams, ParamName};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    Spectrum,
    Gibbs,
    Dephasing,
    ThermalSweep,
    Charge,
    Grid2d,
}

impl Scenario {
    pub const ALL: [Scenario; 6] = [
        Scenario::Spectrum,
        Scenario::Gibbs,
        Scenario::Dephasing,
        Scenario::ThermalSweep,
        Scenario::Charge,
        Scenario::Grid2d,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Scenario::Spectrum => "spectrum",
            Scenario::Gibbs => "gibbs",
            Scenario::Dephasing => "dephasing",
            Scenario::ThermalSweep => "thermal-sweep",
            Scenario::Charge => "charge",
            Scenario::Grid2d => "grid2d",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scenario {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.as_str() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Scenario::ALL.iter().map(|s| s.as_str()).collect();
                CliError::Config(format!("unknown scenario '{s}' (expected one of {})", names.join(", ")))
            })
    }
}

/// Values taken by a swept parameter.
#[derive(Debug, Clone, PartialEq)]
pub enum AxisValues {
    Linear { min: f64, max: f64, count: usize },
    Log { min: f64, max: f64, count: usize },
    List(Vec<f64>),
}

/// `name:min:max:count[:log]` or `name:v1,v2,...`.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisSpec {
    pub name: ParamName,
    pub values: AxisValues,
}

impl AxisSpec {
    pub fn points(&self) -> Vec<f64> {
        match self.values {
            AxisValues::Linear { min, max, count } => (0..count)
                .map(|k| {
                    if k + 1 == count {
                        max
                    } else {
                        min + (max - min) * k as f64 / (count - 1) as f64
                    }
                })
                .collect(),
            AxisValues::Log { min, max, count } => {
                let (a, b) = (min.ln(), max.ln());
                (0..count)
                    .map(|k| {
                        if k + 1 == count {
                            max
                        } else {
                            (a + (b - a) * k as f64 / (count - 1) as f64).exp()
                        }
                    })
                    .collect()
            }
            AxisValues::List(ref v) => v.clone(),
        }
    }

    fn validate(&self) -> CliResult<()> {
        let bad = |msg: String| Err(CliError::Config(format!("axis '{self}': {msg}")));
        match self.values {
            AxisValues::Linear { min, max, count } | AxisValues::Log { min, max, count } => {
                if count < 2 {
                    return bad("count must be >= 2".into());
                }
                if !(min.is_finite() && max.is_finite()) || min >= max {
                    return bad("need finite min < max".into());
                }
                if matches!(self.values, AxisValues::Log { .. }) && min <= 0.0 {
                    return bad("log scale needs min > 0".into());
                }
            }
            AxisValues::List(ref v) => {
                if v.len() < 2 {
                    return bad("a value list needs at least 2 entries".into());
                }
                if v.iter().any(|x| !x.is_finite()) {
                    return bad("values must be finite".into());
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for AxisSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.values {
            AxisValues::Linear { min, max, count } => write!(f, "{}:{min:?}:{max:?}:{count}", self.name),
            AxisValues::Log { min, max, count } => write!(f, "{}:{min:?}:{max:?}:{count}:log", self.name),
            AxisValues::List(v) => {
                let items: Vec<String> = v.iter().map(|x| format!("{x:?}")).collect();
                write!(f, "{}:{}", self.name, items.join(","))
            }
        }
    }
}

fn parse_f64(key: &str, s: &str) -> CliResult<f64> {
    s.trim()
        .parse()
        .map_err(|_| CliError::Config(format!("{key}: '{s}' is not a number")))
}

fn parse_usize(key: &str, s: &str) -> CliResult<usize> {
    s.trim()
        .parse()
        .map_err(|_| CliError::Config(format!("{key}: '{s}' is not a non-negative integer")))
}

impl FromStr for AxisSpec {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let name: ParamName = parts[0]
            .trim()
            .parse()
            .map_err(|_| CliError::Config(format!("axis '{s}': unknown parameter '{}'", parts[0])))?;
        let values = match parts.len() {
            2 => AxisValues::List(
                parts[1]
                    .split(',')
                    .map(|v| parse_f64("axis value", v))
                    .collect::<CliResult<_>>()?,
            ),
            4 | 5 => {
                let min = parse_f64("axis min", parts[1])?;
                let max = parse_f64("axis max", parts[2])?;
                let count = parse_usize("axis count", parts[3])?;
                match parts.get(4).map(|x| x.trim()) {
                    None | Some("linear") => AxisValues::Linear { min, max, count },
                    Some("log") => AxisValues::Log { min, max, count },
                    Some(other) => {
                        return Err(CliError::Config(format!("axis '{s}': unknown scale '{other}'")));
                    }
                }
            }
            _ => {
                return Err(CliError::Config(format!(
                    "axis '{s}': expected name:min:max:count[:log] or name:v1,v2,..."
                )))
            }
        };
        let axis = AxisSpec { name, values };
        axis.validate()?;
        Ok(axis)
    }
}

/// Initial state of the dephasing scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InitialState {
    /// `|00⟩⟨00|`.
    #[default]
    Ground,
    /// Thermal state of the model at the configured temperature.
    Gibbs,
    /// `(|00⟩ + |11⟩)/√2`.
    Bell,
}

impl InitialState {
    pub fn as_str(self) -> &'static str {
        match self {
            InitialState::Ground => "ground",
            InitialState::Gibbs => "gibbs",
            InitialState::Bell => "bell",
        }
    }
}

impl FromStr for InitialState {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "ground" => Ok(InitialState::Ground),
            "gibbs" => Ok(InitialState::Gibbs),
            "bell" => Ok(InitialState::Bell),
            _ => Err(CliError::Config(format!("unknown initial state '{s}' (ground, gibbs, bell)"))),
        }
    }
}

pub fn parse_ordering(s: &str) -> CliResult<ChargeOrdering> {
    match s {
        "forward" => Ok(ChargeOrdering::Forward),
        "adjoint" => Ok(ChargeOrdering::Adjoint),
        _ => Err(CliError::Config(format!("unknown ordering '{s}' (forward, adjoint)"))),
    }
}

fn ordering_str(o: ChargeOrdering) -> &'static str {
    match o {
        ChargeOrdering::Forward => "forward",
        ChargeOrdering::Adjoint => "adjoint",
    }
}

pub fn parse_side(s: &str) -> CliResult<Subsystem> {
    match s {
        "a" | "A" => Ok(Subsystem::A),
        "b" | "B" => Ok(Subsystem::B),
        _ => Err(CliError::Config(format!("unknown measurement side '{s}' (a, b)"))),
    }
}

fn side_str(s: Subsystem) -> &'static str {
    match s {
        Subsystem::A => "a",
        Subsystem::B => "b",
    }
}

fn parse_bool(key: &str, s: &str) -> CliResult<bool> {
    match s {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(CliError::Config(format!("{key}: '{s}' is not a boolean"))),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    pub params: ModelParams,
    pub sweep: Option<AxisSpec>,
    pub second_axis: Option<AxisSpec>,
    /// Restrict the CSV to these metric columns (axis columns are always kept).
    pub outputs: Vec<String>,
    pub grid: TimeGrid,
    pub out_path: Option<PathBuf>,
    pub seed: u64,
    pub initial: InitialState,
    pub ordering: ChargeOrdering,
    pub with_discord: bool,
    pub measure_side: Subsystem,
}

impl ScenarioConfig {
    pub fn new(scenario: Scenario) -> Self {
        ScenarioConfig {
            scenario,
            params: ModelParams::default(),
            sweep: None,
            second_axis: None,
            outputs: Vec::new(),
            grid: TimeGrid {
                t0: 0.0,
                t1: 10.0,
                dt: DEFAULT_DT,
                samples: DEFAULT_SAMPLES,
            },
            out_path: None,
            seed: 0,
            initial: InitialState::default(),
            ordering: ChargeOrdering::default(),
            with_discord: false,
            measure_side: Subsystem::A,
        }
    }

    /// Parse the flat text format. `scenario` must be present unless a
    /// fallback is given.
    pub fn parse(text: &str, fallback: Option<Scenario>) -> CliResult<Self> {
        let mut entries = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected 'key = value'", lineno + 1)))?;
            entries.push((key.trim().to_string(), value.trim().to_string()));
        }
        let scenario = match entries.iter().find(|(k, _)| k == "scenario") {
            Some((_, v)) => v.parse()?,
            None => fallback.ok_or_else(|| CliError::Config("config does not name a scenario".into()))?,
        };
        let mut cfg = ScenarioConfig::new(scenario);
        for (key, value) in &entries {
            cfg.set(key, value)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Apply one `key = value` assignment.
    pub fn set(&mut self, key: &str, value: &str) -> CliResult<()> {
        if let Ok(name) = key.parse::<ParamName>() {
            self.params.set(name, parse_f64(key, value)?);
            return Ok(());
        }
        match key {
            "scenario" => self.scenario = value.parse()?,
            "sweep" => self.sweep = Some(value.parse()?),
            "sweep2" => self.second_axis = Some(value.parse()?),
            "outputs" => {
                self.outputs = value
                    .split(',')
                    .map(|s| s.trim().to_string())
                    .filter(|s| !s.is_empty())
                    .collect()
            }
            "t0" => self.grid.t0 = parse_f64(key, value)?,
            "t1" => self.grid.t1 = parse_f64(key, value)?,
            "dt" => self.grid.dt = parse_f64(key, value)?,
            "samples" => self.grid.samples = parse_usize(key, value)?,
            "out" => self.out_path = Some(PathBuf::from(value)),
            "seed" => {
                self.seed = value
                    .parse()
                    .map_err(|_| CliError::Config(format!("seed: '{value}' is not an integer")))?
            }
            "initial" => self.initial = value.parse()?,
            "ordering" => self.ordering = parse_ordering(value)?,
            "with_discord" => self.with_discord = parse_bool(key, value)?,
            "measure_side" => self.measure_side = parse_side(value)?,
            _ => return Err(CliError::Config(format!("unknown key '{key}'"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> CliResult<()> {
        self.grid
            .validate()
            .map_err(|e| CliError::Config(format!("time grid: {e}")))?;
        // Swept parameters are checked per point when the scenario runs;
        // here only the fixed ones must be valid.
        let mut probe = self.params;
        for axis in self.sweep.iter().chain(&self.second_axis) {
            probe.set(axis.name, axis.points()[0]);
        }
        probe
            .validate()
            .map_err(|e| CliError::Config(format!("parameters: {e}")))?;
        if self.scenario == Scenario::Grid2d && (self.sweep.is_none() || self.second_axis.is_none()) {
            return Err(CliError::Config("grid2d needs both sweep and sweep2".into()));
        }
        if let (Some(a), Some(b)) = (&self.sweep, &self.second_axis) {
            if a.name == b.name {
                return Err(CliError::Config(format!("sweep and sweep2 both vary '{}'", a.name)));
            }
        }
        Ok(())
    }

    /// Inverse of [`ScenarioConfig::parse`].
    pub fn to_config_string(&self) -> String {
        let mut out = format!("scenario = {}\n", self.scenario);
        for name in ParamName::ALL {
            out += &format!("{name} = {:?}\n", self.params.get(name));
        }
        if let Some(a) = &self.sweep {
            out += &format!("sweep = {a}\n");
        }
        if let Some(a) = &self.second_axis {
            out += &format!("sweep2 = {a}\n");
        }
        if !self.outputs.is_empty() {
            out += &format!("outputs = {}\n", self.outputs.join(","));
        }
        out += &format!("t0 = {:?}\nt1 = {:?}\ndt = {:?}\nsamples = {}\n", self.grid.t0, self.grid.t1, self.grid.dt, self.grid.samples);
        if let Some(p) = &self.out_path {
            out += &format!("out = {}\n", p.display());
        }
        out += &format!(
            "seed = {}\ninitial = {}\nordering = {}\nwith_discord = {}\nmeasure_side = {}\n",
            self.seed,
            self.initial.as_str(),
            ordering_str(self.ordering),
            self.with_discord,
            side_str(self.measure_side)
        );
        out
    }
}
