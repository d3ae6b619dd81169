//! Study configuration files (TOML).
//!
//! ```toml
//! study = "long-time"
//! data = "accuracy-1d"
//! M = 64
//! tau = 0.01
//! eps = [0.5, 0.25]
//! T = 1.0
//! ```

use std::fmt;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::harness::{StudySetup, TABLE_ONE_EPSILONS, TABLE_ONE_KAPPAS};
use crate::integrators::Scheme;
use crate::model::{InitialData, Regime};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("malformed config: {0}")]
    Syntax(String),
    #[error("invalid `{key}`: {reason}")]
    Invalid { key: &'static str, reason: String },
}

fn invalid(key: &'static str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        key,
        reason: reason.into(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StudyKind {
    Run,
    Temporal,
    Spatial,
    LongTime,
    OscillatoryTable,
    EnergyDrift,
}

impl StudyKind {
    pub fn name(&self) -> &'static str {
        match self {
            StudyKind::Run => "run",
            StudyKind::Temporal => "temporal",
            StudyKind::Spatial => "spatial",
            StudyKind::LongTime => "long-time",
            StudyKind::OscillatoryTable => "oscillatory-table",
            StudyKind::EnergyDrift => "energy-drift",
        }
    }
}

impl fmt::Display for StudyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T> OneOrMany<T> {
    fn into_vec(self) -> Vec<T> {
        match self {
            OneOrMany::One(v) => vec![v],
            OneOrMany::Many(v) => v,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum RawDomain {
    Line([f64; 2]),
    Rectangle([[f64; 2]; 2]),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    study: StudyKind,
    data: Option<String>,
    domain: Option<RawDomain>,
    #[serde(rename = "M")]
    modes: Option<OneOrMany<i64>>,
    tau: Option<OneOrMany<f64>>,
    kappa: Option<OneOrMany<f64>>,
    eps: Option<OneOrMany<f64>>,
    lambda1: Option<f64>,
    lambda2: Option<f64>,
    scheme: Option<Scheme>,
    #[serde(rename = "T")]
    horizon: Option<f64>,
    stride: Option<i64>,
    tau_ref: Option<f64>,
    #[serde(rename = "M_ref")]
    reference_modes: Option<i64>,
    out: Option<String>,
}

/// A validated study description with every default filled in.
#[derive(Clone, Debug, PartialEq)]
pub struct StudyConfig {
    pub study: StudyKind,
    pub data: InitialData,
    pub domain: Vec<(f64, f64)>,
    /// Modes per axis; a sweep for spatial studies, one value otherwise.
    pub modes: Vec<usize>,
    pub regime: Regime,
    /// `tau` values in the long-time regime, `kappa` values in the oscillatory one.
    pub steps: Vec<f64>,
    pub epsilons: Vec<f64>,
    pub lambda1: f64,
    pub lambda2: f64,
    pub scheme: Scheme,
    pub horizon: f64,
    pub stride: u64,
    pub reference_step: Option<f64>,
    pub reference_modes: usize,
    pub out: PathBuf,
}

pub const DEFAULT_STRIDE: u64 = 10;
pub const DEFAULT_SPATIAL_MODES: [usize; 4] = [8, 16, 32, 64];

pub fn parse_config(text: &str) -> Result<StudyConfig, ConfigError> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| {
        let at = e
            .span()
            .and_then(|span| text.get(span))
            .map(|s| format!(" at `{}`", s.trim()))
            .unwrap_or_default();
        ConfigError::Syntax(format!("{}{at}", e.message()))
    })?;
    raw.validate()
}

fn finite_positive(key: &'static str, values: &[f64]) -> Result<(), ConfigError> {
    if values.is_empty() {
        return Err(invalid(key, "list must not be empty"));
    }
    match values.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
        Some(v) => Err(invalid(key, format!("value {v} must be finite and positive"))),
        None => Ok(()),
    }
}

fn single<T: Copy>(key: &'static str, study: StudyKind, values: &[T]) -> Result<(), ConfigError> {
    if values.len() != 1 {
        return Err(invalid(key, format!("study `{study}` takes a single value")));
    }
    Ok(())
}

impl RawConfig {
    fn validate(self) -> Result<StudyConfig, ConfigError> {
        let study = self.study;
        let table = study == StudyKind::OscillatoryTable;

        let data = match &self.data {
            Some(key) => key
                .parse::<InitialData>()
                .map_err(|e| invalid("data", e.to_string()))?,
            None if table => InitialData::Oscillatory1d,
            None => InitialData::Accuracy1d,
        };

        let domain = match self.domain {
            None => data.domain(),
            Some(RawDomain::Line([a, b])) => vec![(a, b)],
            Some(RawDomain::Rectangle([[a, b], [c, d]])) => vec![(a, b), (c, d)],
        };
        let expected = data.domain();
        let matches = domain.len() == expected.len()
            && domain
                .iter()
                .zip(&expected)
                .all(|(x, y)| (x.0 - y.0).abs() <= 1e-12 && (x.1 - y.1).abs() <= 1e-12);
        if !matches {
            return Err(invalid(
                "domain",
                format!("{domain:?} does not match `{data}` on {expected:?}"),
            ));
        }

        let regime = match (&self.tau, &self.kappa) {
            (Some(_), Some(_)) => return Err(invalid("tau", "give either `tau` or `kappa`, not both")),
            (None, Some(_)) => Regime::Oscillatory,
            (Some(_), None) => Regime::LongTime,
            (None, None) if table => Regime::Oscillatory,
            (None, None) => Regime::LongTime,
        };
        match (study, regime) {
            (StudyKind::OscillatoryTable, Regime::LongTime) => {
                return Err(invalid("tau", "oscillatory-table steps are given as `kappa`"))
            }
            (StudyKind::LongTime | StudyKind::Spatial | StudyKind::EnergyDrift, Regime::Oscillatory) => {
                return Err(invalid("kappa", format!("study `{study}` steps are given as `tau`")))
            }
            _ => {}
        }
        let step_key = match regime {
            Regime::LongTime => "tau",
            Regime::Oscillatory => "kappa",
        };

        let steps = match self.tau.or(self.kappa) {
            Some(v) => v.into_vec(),
            None if table => TABLE_ONE_KAPPAS.to_vec(),
            None if study == StudyKind::Spatial => {
                vec![self.tau_ref.unwrap_or(crate::harness::REFERENCE_STEP)]
            }
            None => return Err(invalid(step_key, "required for this study")),
        };
        finite_positive(step_key, &steps)?;

        let epsilons = match self.eps {
            Some(v) => v.into_vec(),
            None if table => TABLE_ONE_EPSILONS.to_vec(),
            None => return Err(invalid("eps", "required for this study")),
        };
        if epsilons.is_empty() {
            return Err(invalid("eps", "list must not be empty"));
        }
        if let Some(e) = epsilons.iter().find(|e| !(**e > 0.0 && **e <= 1.0)) {
            return Err(invalid("eps", format!("{e} out of (0,1]")));
        }

        let default_modes: Vec<usize> = match study {
            StudyKind::Spatial => DEFAULT_SPATIAL_MODES.to_vec(),
            _ if data.dim() == 2 || table => vec![64],
            _ => vec![128],
        };
        let modes = match self.modes {
            Some(v) => v
                .into_vec()
                .into_iter()
                .map(|m| {
                    if m >= 4 && m % 2 == 0 {
                        Ok(m as usize)
                    } else {
                        Err(invalid("M", format!("{m} must be even and at least 4")))
                    }
                })
                .collect::<Result<Vec<_>, _>>()?,
            None => default_modes,
        };
        if modes.is_empty() {
            return Err(invalid("M", "list must not be empty"));
        }

        let reference_modes = match self.reference_modes {
            Some(m) if m >= 4 && m % 2 == 0 => m as usize,
            Some(m) => return Err(invalid("M_ref", format!("{m} must be even and at least 4"))),
            None if study == StudyKind::Spatial => 128,
            None => modes[0],
        };
        if let Some(m) = modes.iter().find(|m| reference_modes % **m != 0) {
            return Err(invalid(
                "M_ref",
                format!("M = {m} does not divide M_ref = {reference_modes}"),
            ));
        }

        match study {
            StudyKind::Run => {
                single("eps", study, &epsilons)?;
                single(step_key, study, &steps)?;
                single("M", study, &modes)?;
            }
            StudyKind::Temporal | StudyKind::OscillatoryTable => single("M", study, &modes)?,
            StudyKind::LongTime => {
                single(step_key, study, &steps)?;
                single("M", study, &modes)?;
            }
            StudyKind::Spatial => single(step_key, study, &steps)?,
            StudyKind::EnergyDrift => single("M", study, &modes)?,
        }

        let (default_l1, default_l2) = if table { (-1.0, 0.0) } else { (0.0, 1.0) };
        let lambda1 = self.lambda1.unwrap_or(default_l1);
        let lambda2 = self.lambda2.unwrap_or(default_l2);
        if !lambda1.is_finite() {
            return Err(invalid("lambda1", "must be finite"));
        }
        if !lambda2.is_finite() {
            return Err(invalid("lambda2", "must be finite"));
        }

        let horizon = self.horizon.unwrap_or(1.0);
        if !(horizon.is_finite() && horizon >= 0.0) {
            return Err(invalid("T", format!("{horizon} must be finite and nonnegative")));
        }
        let stride = match self.stride {
            Some(s) if s >= 1 => s as u64,
            Some(s) => return Err(invalid("stride", format!("{s} must be at least 1"))),
            None => DEFAULT_STRIDE,
        };
        if let Some(r) = self.tau_ref {
            finite_positive("tau_ref", &[r])?;
        }

        Ok(StudyConfig {
            study,
            data,
            domain,
            modes,
            regime,
            steps,
            epsilons,
            lambda1,
            lambda2,
            scheme: self.scheme.unwrap_or(Scheme::Strang),
            horizon,
            stride,
            reference_step: self.tau_ref,
            reference_modes,
            out: PathBuf::from(self.out.unwrap_or_else(|| "out".to_string())),
        })
    }
}

#[derive(Serialize)]
struct EffectiveConfig<'a> {
    study: StudyKind,
    data: &'a str,
    domain: RawDomain,
    #[serde(rename = "M")]
    modes: &'a [usize],
    #[serde(skip_serializing_if = "Option::is_none")]
    tau: Option<&'a [f64]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    kappa: Option<&'a [f64]>,
    eps: &'a [f64],
    lambda1: f64,
    lambda2: f64,
    scheme: Scheme,
    #[serde(rename = "T")]
    horizon: f64,
    stride: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    tau_ref: Option<f64>,
    #[serde(rename = "M_ref")]
    reference_modes: usize,
    out: String,
}

impl StudyConfig {
    /// The effective configuration as config text; parsing it yields `self`.
    pub fn to_toml(&self) -> String {
        let domain = match self.domain.as_slice() {
            [(a, b)] => RawDomain::Line([*a, *b]),
            [(a, b), (c, d)] => RawDomain::Rectangle([[*a, *b], [*c, *d]]),
            _ => unreachable!("validated domains are 1D or 2D"),
        };
        let (tau, kappa) = match self.regime {
            Regime::LongTime => (Some(self.steps.as_slice()), None),
            Regime::Oscillatory => (None, Some(self.steps.as_slice())),
        };
        let effective = EffectiveConfig {
            study: self.study,
            data: self.data.key(),
            domain,
            modes: &self.modes,
            tau,
            kappa,
            eps: &self.epsilons,
            lambda1: self.lambda1,
            lambda2: self.lambda2,
            scheme: self.scheme,
            horizon: self.horizon,
            stride: self.stride,
            tau_ref: self.reference_step,
            reference_modes: self.reference_modes,
            out: self.out.display().to_string(),
        };
        toml::to_string(&effective).expect("effective config serializes")
    }

    /// Harness setup for the first (or only) study grid.
    pub fn setup(&self) -> StudySetup {
        StudySetup {
            data: self.data,
            modes: self.modes[0],
            reference_modes: self.reference_modes,
            lambda1: self.lambda1,
            lambda2: self.lambda2,
            regime: self.regime,
            scheme: self.scheme,
            horizon: self.horizon,
            reference_step: self.reference_step,
            validate_reference: true,
        }
    }
}
