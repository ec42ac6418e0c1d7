//! Sectioned key-value sweep configuration.
//!
//! ```text
//! [sweep]
//! experiment = fig2bc_capacity_maps
//! output = fig2b.csv
//! emit_svg = true
//!
//! [fixed]
//! zeta_o = 0.8
//! n_th = 0
//!
//! [axis.C_om]
//! min = 0.1
//! max = 10
//! points = 100
//! scale = log
//! ```
//!
//! Axis sections appear in loop order: the first is the outer loop. When a
//! file declares no axis the experiment's default grid is used.

use std::fmt;
use std::path::{Path, PathBuf};

use crate::transducer::DeviceSpec;

/// Configuration problem, with the line and field when known.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub field: Option<String>,
    pub message: String,
}

impl ConfigError {
    fn at(line: usize, field: impl Into<Option<String>>, message: impl Into<String>) -> Self {
        Self {
            line: Some(line),
            field: field.into(),
            message: message.into(),
        }
    }

    fn field(field: &str, message: impl Into<String>) -> Self {
        Self {
            line: None,
            field: Some(field.to_string()),
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(line) = self.line {
            write!(f, "line {line}: ")?;
        }
        if let Some(field) = &self.field {
            write!(f, "field `{field}`: ")?;
        }
        f.write_str(&self.message)
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Experiment {
    Fig1aDqtBoundary,
    Fig1bEqtIdeal,
    Fig2aGainCurves,
    Fig2bcCapacityMaps,
    Fig2dEofMap,
    Fig4aMmEof,
    Fig4bMmCapacity,
    Fig5aClickRate,
    Fig5bHomodyneRate,
    Custom,
}

impl Experiment {
    pub const ALL: [Experiment; 10] = [
        Self::Fig1aDqtBoundary,
        Self::Fig1bEqtIdeal,
        Self::Fig2aGainCurves,
        Self::Fig2bcCapacityMaps,
        Self::Fig2dEofMap,
        Self::Fig4aMmEof,
        Self::Fig4bMmCapacity,
        Self::Fig5aClickRate,
        Self::Fig5bHomodyneRate,
        Self::Custom,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Fig1aDqtBoundary => "fig1a_dqt_boundary",
            Self::Fig1bEqtIdeal => "fig1b_eqt_ideal",
            Self::Fig2aGainCurves => "fig2a_gain_curves",
            Self::Fig2bcCapacityMaps => "fig2bc_capacity_maps",
            Self::Fig2dEofMap => "fig2d_eof_map",
            Self::Fig4aMmEof => "fig4a_mm_eof",
            Self::Fig4bMmCapacity => "fig4b_mm_capacity",
            Self::Fig5aClickRate => "fig5a_click_rate",
            Self::Fig5bHomodyneRate => "fig5b_homodyne_rate",
            Self::Custom => "custom",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|e| e.name() == name)
    }

    /// Metric columns written after the axes and the `stable` flag.
    pub fn metrics(self) -> &'static [&'static str] {
        match self {
            Self::Fig1aDqtBoundary => &["product", "boundary", "eta", "n_e", "q_lb_dqt"],
            Self::Fig1bEqtIdeal => &["u", "v", "w", "kappa_opt", "q_lb_eqt", "q_lb_dqt", "boundary"],
            Self::Fig2aGainCurves => &["eta", "noise", "q_lb"],
            Self::Fig2bcCapacityMaps => &["u", "v", "w", "kappa_opt", "q_lb_eqt", "q_lb_dqt"],
            Self::Fig2dEofMap => &["u", "v", "w", "e_f", "duan"],
            Self::Fig4aMmEof => &["u_mm", "w_mm", "e_f_mm", "e_f_mo"],
            Self::Fig4bMmCapacity => &["u_mm", "w_mm", "kappa_opt", "q_lb_mm"],
            Self::Fig5aClickRate => &["r_t", "r_b"],
            Self::Fig5bHomodyneRate => &["e_r"],
            Self::Custom => &[
                "u", "v", "w", "e_f", "duan", "kappa_opt", "q_lb_eqt", "q_lb_kappa", "q_lb_dqt",
            ],
        }
    }

    /// Metric drawn by default in heatmaps.
    pub fn default_metric(self) -> &'static str {
        match self {
            Self::Fig1aDqtBoundary => "q_lb_dqt",
            Self::Fig1bEqtIdeal | Self::Fig2bcCapacityMaps => "q_lb_eqt",
            Self::Fig2aGainCurves => "q_lb",
            Self::Fig2dEofMap | Self::Custom => "e_f",
            Self::Fig4aMmEof => "e_f_mm",
            Self::Fig4bMmCapacity => "q_lb_mm",
            Self::Fig5aClickRate => "r_b",
            Self::Fig5bHomodyneRate => "e_r",
        }
    }

    /// Whether the experiment reads this quantity.
    pub fn uses(self, axis: AxisName) -> bool {
        use AxisName::*;
        match self {
            Self::Fig1aDqtBoundary | Self::Fig1bEqtIdeal | Self::Fig2bcCapacityMaps => {
                matches!(axis, COm | CEm | NTh)
            }
            Self::Fig2aGainCurves => matches!(axis, COm | CEm | NTh | Kappa),
            Self::Fig2dEofMap
            | Self::Fig4aMmEof
            | Self::Fig4bMmCapacity
            | Self::Fig5aClickRate
            | Self::Fig5bHomodyneRate => matches!(axis, COm | CEm | NTh | Tau),
            Self::Custom => true,
        }
    }

    /// Fixed parameters taken from the corresponding figure.
    pub fn default_fixed(self) -> FixedParams {
        let base = FixedParams::default();
        match self {
            Self::Fig2aGainCurves | Self::Fig2bcCapacityMaps | Self::Fig2dEofMap => FixedParams {
                zeta_o: 0.8,
                ..base
            },
            Self::Fig5aClickRate | Self::Fig5bHomodyneRate => FixedParams { c_em: 10.0, ..base },
            _ => base,
        }
    }

    /// Default grid, 100 points per axis unless the figure is a line plot.
    pub fn default_axes(self) -> Vec<Axis> {
        let coop = |name| Axis::new(name, 0.1, 10.0, 100, Scale::Log);
        match self {
            Self::Fig2aGainCurves => vec![
                Axis::new(AxisName::NTh, 0.0, 1.0, 3, Scale::Linear),
                Axis::new(AxisName::Kappa, 0.5, 3.0, 200, Scale::Linear),
            ],
            Self::Fig5aClickRate | Self::Fig5bHomodyneRate => vec![
                coop(AxisName::COm),
                Axis::new(AxisName::Tau, 0.0, 1.0, 100, Scale::Linear),
            ],
            _ => vec![coop(AxisName::COm), coop(AxisName::CEm)],
        }
    }
}

/// Quantities that may be swept.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AxisName {
    COm,
    CEm,
    Kappa,
    NTh,
    Tau,
}

impl AxisName {
    pub const ALL: [AxisName; 5] = [Self::COm, Self::CEm, Self::Kappa, Self::NTh, Self::Tau];

    pub fn name(self) -> &'static str {
        match self {
            Self::COm => "C_om",
            Self::CEm => "C_em",
            Self::Kappa => "kappa",
            Self::NTh => "n_th",
            Self::Tau => "tau",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|a| a.name() == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub name: AxisName,
    pub min: f64,
    pub max: f64,
    pub points: usize,
    pub scale: Scale,
}

impl Axis {
    pub fn new(name: AxisName, min: f64, max: f64, points: usize, scale: Scale) -> Self {
        Self {
            name,
            min,
            max,
            points,
            scale,
        }
    }

    /// Grid values including both end points.
    pub fn values(&self) -> Vec<f64> {
        let steps = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                let t = i as f64 / steps;
                if i + 1 == self.points {
                    return self.max;
                }
                match self.scale {
                    Scale::Linear => self.min + t * (self.max - self.min),
                    Scale::Log => self.min * (t * (self.max / self.min).ln()).exp(),
                }
            })
            .collect()
    }
}

/// Parameters held constant over a sweep. Rates are in units of `κ_m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedParams {
    pub c_om: f64,
    pub c_em: f64,
    pub zeta_o: f64,
    pub zeta_e: f64,
    pub n_th: f64,
    /// Optical path transmissivity.
    pub tau: f64,
    /// Pulse duration of the click scheme.
    pub dt: f64,
    /// Teleportation gain.
    pub kappa: f64,
    pub kappa_o: f64,
    pub kappa_e: f64,
}

impl Default for FixedParams {
    fn default() -> Self {
        Self {
            c_om: 1.0,
            c_em: 1.0,
            zeta_o: 1.0,
            zeta_e: 1.0,
            n_th: 0.0,
            tau: 1.0,
            dt: 10.0,
            kappa: 1.0,
            kappa_o: 1.0,
            kappa_e: 1.0,
        }
    }
}

impl FixedParams {
    pub fn set(&mut self, axis: AxisName, value: f64) {
        match axis {
            AxisName::COm => self.c_om = value,
            AxisName::CEm => self.c_em = value,
            AxisName::Kappa => self.kappa = value,
            AxisName::NTh => self.n_th = value,
            AxisName::Tau => self.tau = value,
        }
    }

    pub fn device(&self) -> DeviceSpec {
        DeviceSpec {
            c_om: self.c_om,
            c_em: self.c_em,
            zeta_o: self.zeta_o,
            zeta_e: self.zeta_e,
            n_th: self.n_th,
            kappa_o: self.kappa_o,
            kappa_e: self.kappa_e,
            kappa_m: 1.0,
        }
    }

    fn slot(&mut self, key: &str) -> Option<&mut f64> {
        Some(match key {
            "C_om" => &mut self.c_om,
            "C_em" => &mut self.c_em,
            "zeta_o" => &mut self.zeta_o,
            "zeta_e" => &mut self.zeta_e,
            "n_th" => &mut self.n_th,
            "tau" => &mut self.tau,
            "dt" => &mut self.dt,
            "kappa" => &mut self.kappa,
            "kappa_o" => &mut self.kappa_o,
            "kappa_e" => &mut self.kappa_e,
            _ => return None,
        })
    }
}

fn check_range(field: &str, value: f64) -> Result<(), String> {
    let ok = match field {
        "C_om" | "C_em" | "n_th" => value >= 0.0,
        "zeta_o" | "zeta_e" => value > 0.0 && value <= 1.0,
        "tau" => (0.0..=1.0).contains(&value),
        "dt" | "kappa" | "kappa_o" | "kappa_e" => value > 0.0,
        _ => true,
    };
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(format!("value {value} is out of range"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub experiment: Experiment,
    pub fixed: FixedParams,
    pub axes: Vec<Axis>,
    /// CSV path; relative paths resolve against the output directory.
    pub output: PathBuf,
    pub emit_svg: bool,
    /// Heatmap metric; the experiment default when absent.
    pub metric: Option<String>,
}

impl SweepConfig {
    /// Figure defaults for `experiment`, written to `<name>.csv`.
    pub fn figure_default(experiment: Experiment) -> Self {
        Self {
            experiment,
            fixed: experiment.default_fixed(),
            axes: experiment.default_axes(),
            output: PathBuf::from(format!("{}.csv", experiment.name())),
            emit_svg: false,
            metric: None,
        }
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
            line: None,
            field: None,
            message: format!("cannot read {}: {e}", path.display()),
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut experiment = None;
        let mut output = None;
        let mut emit_svg = false;
        let mut metric = None;
        let mut fixed_entries: Vec<(usize, String, f64)> = Vec::new();
        let mut axes: Vec<(usize, AxisDraft)> = Vec::new();
        let mut section: Option<String> = None;
        let mut seen: Vec<(String, String)> = Vec::new();

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
                continue;
            }
            if let Some(inner) = line.strip_prefix('[') {
                let name = inner
                    .strip_suffix(']')
                    .ok_or_else(|| ConfigError::at(line_no, None, "unterminated section header"))?
                    .trim()
                    .to_string();
                if seen.iter().any(|(s, k)| s == &name && k.is_empty()) {
                    return Err(ConfigError::at(line_no, None, format!("duplicate section [{name}]")));
                }
                if let Some(axis) = name.strip_prefix("axis.") {
                    let axis_name = AxisName::from_name(axis).ok_or_else(|| {
                        ConfigError::at(line_no, Some(axis.to_string()), "unknown axis; expected C_om, C_em, kappa, n_th or tau")
                    })?;
                    axes.push((line_no, AxisDraft::new(axis_name)));
                } else if name != "sweep" && name != "fixed" {
                    return Err(ConfigError::at(line_no, None, format!("unknown section [{name}]")));
                }
                seen.push((name.clone(), String::new()));
                section = Some(name);
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| ConfigError::at(line_no, None, "expected `key = value`"))?;
            let sec = section
                .clone()
                .ok_or_else(|| ConfigError::at(line_no, Some(key.to_string()), "key outside any section"))?;
            if seen.iter().any(|(s, k)| s == &sec && k == key) {
                return Err(ConfigError::at(line_no, Some(key.to_string()), "duplicate key"));
            }
            seen.push((sec.clone(), key.to_string()));
            let field = Some(key.to_string());
            match sec.as_str() {
                "sweep" => match key {
                    "experiment" => {
                        experiment = Some(Experiment::from_name(value).ok_or_else(|| {
                            ConfigError::at(line_no, field.clone(), format!("unknown experiment `{value}`"))
                        })?)
                    }
                    "output" => {
                        if value.is_empty() {
                            return Err(ConfigError::at(line_no, field, "empty path"));
                        }
                        output = Some(PathBuf::from(value));
                    }
                    "emit_svg" => {
                        emit_svg = parse_bool(value)
                            .ok_or_else(|| ConfigError::at(line_no, field.clone(), "expected true or false"))?
                    }
                    "metric" => metric = Some(value.to_string()),
                    _ => return Err(ConfigError::at(line_no, field, "unknown key in [sweep]")),
                },
                "fixed" => {
                    let v = parse_f64(value).map_err(|m| ConfigError::at(line_no, field.clone(), m))?;
                    if FixedParams::default().slot(key).is_none() {
                        return Err(ConfigError::at(line_no, field, "unknown fixed parameter"));
                    }
                    check_range(key, v).map_err(|m| ConfigError::at(line_no, field.clone(), m))?;
                    fixed_entries.push((line_no, key.to_string(), v));
                }
                _ => {
                    let draft = &mut axes.last_mut().expect("axis section registered").1;
                    draft.set(key, value).map_err(|m| ConfigError::at(line_no, field, m))?;
                }
            }
        }

        let experiment =
            experiment.ok_or_else(|| ConfigError::field("experiment", "missing from [sweep]"))?;
        let mut fixed = experiment.default_fixed();
        for (line_no, key, v) in fixed_entries {
            let name = AxisName::from_name(&key);
            if let Some(a) = name {
                if !experiment.uses(a) {
                    return Err(ConfigError::at(line_no, Some(key), format!("not used by {}", experiment.name())));
                }
            }
            *fixed.slot(&key).expect("checked above") = v;
        }
        let axes = if axes.is_empty() {
            experiment.default_axes()
        } else {
            axes.into_iter()
                .map(|(line_no, d)| d.finish(line_no))
                .collect::<Result<Vec<_>, _>>()?
        };
        let config = Self {
            experiment,
            fixed,
            axes,
            output: output.unwrap_or_else(|| PathBuf::from(format!("{}.csv", experiment.name()))),
            emit_svg,
            metric,
        };
        config.validate()?;
        Ok(config)
    }

    /// Checks axis count, ranges and metric names.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.axes.is_empty() || self.axes.len() > 2 {
            return Err(ConfigError::field("axis", format!("need one or two axes, got {}", self.axes.len())));
        }
        for (i, a) in self.axes.iter().enumerate() {
            let name = a.name.name();
            if self.axes[..i].iter().any(|b| b.name == a.name) {
                return Err(ConfigError::field(name, "axis declared twice"));
            }
            if !self.experiment.uses(a.name) {
                return Err(ConfigError::field(name, format!("not used by {}", self.experiment.name())));
            }
            if a.points < 2 {
                return Err(ConfigError::field(name, "points must be at least 2"));
            }
            if !(a.min < a.max) {
                return Err(ConfigError::field(name, "min must be below max"));
            }
            if a.scale == Scale::Log && !(a.min > 0.0) {
                return Err(ConfigError::field(name, "log scale needs min > 0"));
            }
            for v in [a.min, a.max] {
                check_range(name, v).map_err(|m| ConfigError::field(name, m))?;
            }
        }
        for key in ["zeta_o", "zeta_e", "n_th", "tau", "dt", "kappa", "kappa_o", "kappa_e", "C_om", "C_em"] {
            let v = *self.fixed.clone().slot(key).expect("known key");
            check_range(key, v).map_err(|m| ConfigError::field(key, m))?;
        }
        if let Some(m) = &self.metric {
            if !self.experiment.metrics().contains(&m.as_str()) {
                return Err(ConfigError::field("metric", format!("`{m}` is not produced by {}", self.experiment.name())));
            }
        }
        Ok(())
    }

    /// Number of grid points.
    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.points).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn heatmap_metric(&self) -> &str {
        self.metric.as_deref().unwrap_or(self.experiment.default_metric())
    }
}

#[derive(Debug)]
struct AxisDraft {
    name: AxisName,
    min: Option<f64>,
    max: Option<f64>,
    points: Option<usize>,
    scale: Scale,
}

impl AxisDraft {
    fn new(name: AxisName) -> Self {
        Self {
            name,
            min: None,
            max: None,
            points: None,
            scale: Scale::Linear,
        }
    }

    fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        match key {
            "min" => self.min = Some(parse_f64(value)?),
            "max" => self.max = Some(parse_f64(value)?),
            "points" => {
                self.points = Some(value.parse().map_err(|_| format!("`{value}` is not a count"))?)
            }
            "scale" => {
                self.scale = match value {
                    "linear" => Scale::Linear,
                    "log" => Scale::Log,
                    _ => return Err(format!("scale must be linear or log, got `{value}`")),
                }
            }
            _ => return Err("unknown axis key; expected min, max, points or scale".into()),
        }
        Ok(())
    }

    fn finish(self, line_no: usize) -> Result<Axis, ConfigError> {
        let field = |k: &str| Some(format!("{}.{k}", self.name.name()));
        let min = self.min.ok_or_else(|| ConfigError::at(line_no, field("min"), "missing"))?;
        let max = self.max.ok_or_else(|| ConfigError::at(line_no, field("max"), "missing"))?;
        let points = self.points.ok_or_else(|| ConfigError::at(line_no, field("points"), "missing"))?;
        Ok(Axis::new(self.name, min, max, points, self.scale))
    }
}

fn parse_f64(value: &str) -> Result<f64, String> {
    match value.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(format!("`{value}` is not a finite number")),
    }
}

fn parse_bool(value: &str) -> Option<bool> {
    match value {
        "true" | "yes" | "1" => Some(true),
        "false" | "no" | "0" => Some(false),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# capacity map
[sweep]
experiment = fig2bc_capacity_maps
output = out/map.csv
emit_svg = true

[fixed]
n_th = 0.5

[axis.C_om]
min = 0.1
max = 10
points = 5
scale = log

[axis.C_em]
min = 0
max = 4
points = 3
";

    #[test]
    fn parses_sample() {
        let c = SweepConfig::parse(SAMPLE).unwrap();
        assert_eq!(c.experiment, Experiment::Fig2bcCapacityMaps);
        assert_eq!(c.fixed.n_th, 0.5);
        assert_eq!(c.fixed.zeta_o, 0.8);
        assert_eq!(c.axes.len(), 2);
        assert_eq!(c.axes[0].scale, Scale::Log);
        assert_eq!(c.axes[1].values(), vec![0.0, 2.0, 4.0]);
        assert_eq!(c.len(), 15);
        assert!(c.emit_svg);
        assert_eq!(c.output, PathBuf::from("out/map.csv"));
    }

    #[test]
    fn log_axis_hits_end_points() {
        let a = Axis::new(AxisName::COm, 0.1, 10.0, 3, Scale::Log);
        let v = a.values();
        assert_eq!(v[0], 0.1);
        assert!((v[1] - 1.0).abs() < 1e-15);
        assert_eq!(v[2], 10.0);
    }

    #[test]
    fn errors_carry_line_and_field() {
        let err = SweepConfig::parse("[sweep]\nexperiment = fig1a_dqt_boundary\n[fixed]\nzeta_o = 2\n").unwrap_err();
        assert_eq!(err.line, Some(4));
        assert_eq!(err.field.as_deref(), Some("zeta_o"));
        let err = SweepConfig::parse("[sweep]\nexperiment = nope\n").unwrap_err();
        assert_eq!(err.line, Some(2));
        let err = SweepConfig::parse("[fixed]\nn_th = 0\n").unwrap_err();
        assert_eq!(err.field.as_deref(), Some("experiment"));
        let err = SweepConfig::parse("[sweep]\nexperiment = custom\n[axis.tau]\nmin = 0\nmax = 1\npoints = 1\n")
            .unwrap_err();
        assert!(err.to_string().contains("at least 2"));
        let err = SweepConfig::parse("[sweep]\nexperiment = fig1a_dqt_boundary\n[axis.tau]\nmin = 0\nmax = 1\npoints = 2\n")
            .unwrap_err();
        assert!(err.to_string().contains("not used"));
        let err = SweepConfig::parse("[sweep]\nexperiment = custom\nexperiment = custom\n").unwrap_err();
        assert_eq!(err.line, Some(3));
        let err = SweepConfig::parse("[sweep]\nexperiment = custom\nmetric = nothing\n").unwrap_err();
        assert_eq!(err.field.as_deref(), Some("metric"));
    }

    #[test]
    fn every_experiment_has_valid_defaults() {
        for e in Experiment::ALL {
            let c = SweepConfig::figure_default(e);
            c.validate().unwrap();
            assert!(e.metrics().contains(&e.default_metric()));
            assert_eq!(Experiment::from_name(e.name()), Some(e));
        }
    }
}
