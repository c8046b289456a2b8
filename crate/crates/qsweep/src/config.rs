//! Sweep configuration: JSON file layer, flag overrides, and the merged,
//! validated form the runners consume.

use std::fmt;
use std::str::FromStr;

use serde::Deserialize;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("config: {0}")]
    Invalid(String),
    #[error("config: {0}")]
    Json(#[from] serde_json::Error),
    #[error("config: {0}")]
    Io(#[from] std::io::Error),
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError::Invalid(msg.into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    Aligned,
    CyclicNn,
    OpenNn,
    FullyConnected,
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Model::Aligned => "aligned",
            Model::CyclicNn => "cyclic_nn",
            Model::OpenNn => "open_nn",
            Model::FullyConnected => "fully_connected",
        };
        f.write_str(name)
    }
}

/// Inclusive, strictly increasing, evenly spaced grid.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldGrid {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl FieldGrid {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if !self.min.is_finite() || !self.max.is_finite() {
            return invalid("grid endpoints must be finite");
        }
        if !(self.min < self.max) {
            return invalid(format!("grid must be strictly increasing, got {}:{}", self.min, self.max));
        }
        if !(self.max - self.min).is_finite() {
            return invalid("grid span overflows");
        }
        if self.points < 2 {
            return invalid(format!("grid needs at least two points, got {}", self.points));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let step = (self.max - self.min) / (self.points - 1) as f64;
        (0..self.points).map(|i| self.min + step * i as f64).collect()
    }
}

impl FromStr for FieldGrid {
    type Err = ConfigError;

    /// Parses the `min:max:points` flag form.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return invalid(format!("grid spec must be min:max:points, got {s:?}"));
        }
        let min: f64 = parts[0]
            .trim()
            .parse()
            .map_err(|_| ConfigError::Invalid(format!("bad grid minimum {:?}", parts[0])))?;
        let max: f64 = parts[1]
            .trim()
            .parse()
            .map_err(|_| ConfigError::Invalid(format!("bad grid maximum {:?}", parts[1])))?;
        let points: usize = parts[2]
            .trim()
            .parse()
            .map_err(|_| ConfigError::Invalid(format!("bad grid point count {:?}", parts[2])))?;
        let grid = FieldGrid { min, max, points };
        grid.validate()?;
        Ok(grid)
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Separations {
    Keyword(String),
    List(Vec<usize>),
}

impl Separations {
    pub fn resolve(&self, n: usize) -> Result<Vec<usize>, ConfigError> {
        match self {
            Separations::Keyword(word) if word == "all" => Ok((1..=n / 2).collect()),
            Separations::Keyword(word) => invalid(format!("separations must be a list or \"all\", got {word:?}")),
            Separations::List(list) => {
                if list.is_empty() {
                    return invalid("separations list is empty");
                }
                for &l in list {
                    if l < 1 || l > n / 2 {
                        return invalid(format!("separation {l} outside 1..={} for n={n}", n / 2));
                    }
                }
                let mut sorted = list.clone();
                sorted.sort_unstable();
                sorted.dedup();
                Ok(sorted)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Measure {
    Discord,
    Deficit1,
    Deficit2,
    Deficit3,
    DeficitQ(f64),
    Concurrence,
}

impl Measure {
    fn parse_token(token: &str) -> Result<Self, ConfigError> {
        match token {
            "D" => Ok(Measure::Discord),
            "I1" => Ok(Measure::Deficit1),
            "I2" => Ok(Measure::Deficit2),
            "I3" => Ok(Measure::Deficit3),
            "C" => Ok(Measure::Concurrence),
            _ => {
                if let Some(inner) = token.strip_prefix("Iq(").and_then(|r| r.strip_suffix(')')) {
                    let q: f64 = inner.trim().parse().map_err(|_| {
                        ConfigError::Invalid(format!("bad entropy index in {token:?}"))
                    })?;
                    if !(q.is_finite() && q > 0.0) {
                        return invalid(format!("entropy index must be positive, got {q}"));
                    }
                    Ok(Measure::DeficitQ(q))
                } else {
                    invalid(format!("unknown measure {token:?} (expected D, I1, I2, I3, Iq(q), C)"))
                }
            }
        }
    }
}

/// Which measures a sweep evaluates. At most one `Iq(q)` is accepted since
/// the output reserves a single column for it.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureSet {
    pub discord: bool,
    pub deficit1: bool,
    pub deficit2: bool,
    pub deficit3: bool,
    pub deficit_q: Option<f64>,
    pub concurrence: bool,
}

impl Default for MeasureSet {
    fn default() -> Self {
        MeasureSet {
            discord: true,
            deficit1: true,
            deficit2: true,
            deficit3: true,
            deficit_q: None,
            concurrence: true,
        }
    }
}

impl MeasureSet {
    pub fn from_tokens<I: IntoIterator<Item = impl AsRef<str>>>(tokens: I) -> Result<Self, ConfigError> {
        let mut set = MeasureSet {
            discord: false,
            deficit1: false,
            deficit2: false,
            deficit3: false,
            deficit_q: None,
            concurrence: false,
        };
        let mut any = false;
        for token in tokens {
            let token = token.as_ref().trim();
            if token.is_empty() {
                continue;
            }
            any = true;
            match Measure::parse_token(token)? {
                Measure::Discord => set.discord = true,
                Measure::Deficit1 => set.deficit1 = true,
                Measure::Deficit2 => set.deficit2 = true,
                Measure::Deficit3 => set.deficit3 = true,
                Measure::Concurrence => set.concurrence = true,
                Measure::DeficitQ(q) => {
                    if let Some(prev) = set.deficit_q {
                        if (prev - q).abs() > 0.0 {
                            return invalid(format!(
                                "at most one Iq(q) measure is supported, got Iq({prev}) and Iq({q})"
                            ));
                        }
                    }
                    set.deficit_q = Some(q);
                }
            }
        }
        if !any {
            return invalid("measure list is empty");
        }
        Ok(set)
    }

    /// Parses the comma separated flag form, e.g. `D,I2,Iq(2.5)`.
    pub fn parse_list(list: &str) -> Result<Self, ConfigError> {
        let mut tokens = Vec::new();
        let mut depth = 0usize;
        let mut current = String::new();
        for ch in list.chars() {
            match ch {
                '(' => {
                    depth += 1;
                    current.push(ch);
                }
                ')' => {
                    depth = depth.saturating_sub(1);
                    current.push(ch);
                }
                ',' if depth == 0 => {
                    tokens.push(std::mem::take(&mut current));
                }
                _ => current.push(ch),
            }
        }
        tokens.push(current);
        Self::from_tokens(tokens)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub path: String,
    #[serde(default)]
    pub format: Option<OutputFormat>,
}

/// The config file as written on disk; everything optional so flags can
/// supply the rest.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub model: Option<Model>,
    pub n: Option<usize>,
    pub chi: Option<f64>,
    pub jx: Option<f64>,
    pub field_grid: Option<FieldGrid>,
    pub separations: Option<Separations>,
    pub measures: Option<Vec<String>>,
    pub output: Option<OutputSpec>,
}

impl FileConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self, ConfigError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

/// Flag-level overrides; these win over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub n: Option<usize>,
    pub chi: Option<f64>,
    pub grid: Option<FieldGrid>,
    pub measures: Option<MeasureSet>,
    pub out: Option<String>,
}

/// Fully resolved sweep parameters.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub model: Model,
    pub n: usize,
    pub chi: f64,
    pub jx: f64,
    pub grid: FieldGrid,
    pub separations: Vec<usize>,
    pub measures: MeasureSet,
    pub output: Output,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Output {
    Stdout(OutputFormat),
    File(String, OutputFormat),
}

fn format_for(path: &str, declared: Option<OutputFormat>) -> OutputFormat {
    declared.unwrap_or(if path.ends_with(".json") { OutputFormat::Json } else { OutputFormat::Csv })
}

pub fn resolve(
    model: Model,
    file: &FileConfig,
    flags: &Overrides,
) -> Result<SweepConfig, ConfigError> {
    if let Some(declared) = file.model {
        if declared != model {
            return invalid(format!(
                "config file is for model {declared} but the {model} command was invoked"
            ));
        }
    }

    let jx = file.jx.unwrap_or(1.0);
    if !(jx.is_finite() && jx > 0.0) {
        return invalid(format!("Jx must be positive, got {jx}"));
    }

    let chi = flags.chi.or(file.chi);
    let chi = match model {
        Model::Aligned => chi.unwrap_or(0.0),
        _ => chi.ok_or_else(|| ConfigError::Invalid("chi is required (flag --chi or config)".into()))?,
    };
    if !chi.is_finite() {
        return invalid("chi must be finite");
    }

    let n = flags.n.or(file.n);
    let n = match model {
        Model::Aligned => n.unwrap_or(0),
        _ => n.ok_or_else(|| ConfigError::Invalid("n is required (flag --n or config)".into()))?,
    };
    if model != Model::Aligned && n < 2 {
        return invalid(format!("n must be at least 2, got {n}"));
    }

    let grid = flags.grid.or(file.field_grid).unwrap_or(match model {
        Model::Aligned => FieldGrid { min: 0.0, max: std::f64::consts::FRAC_PI_2, points: 201 },
        _ => FieldGrid { min: 0.0, max: 1.5, points: 61 },
    });
    grid.validate()?;

    let separations = match model {
        Model::CyclicNn | Model::OpenNn => file
            .separations
            .clone()
            .unwrap_or(Separations::Keyword("all".into()))
            .resolve(n)?,
        _ => Vec::new(),
    };

    let measures = match &flags.measures {
        Some(set) => set.clone(),
        None => match &file.measures {
            Some(tokens) => MeasureSet::from_tokens(tokens)?,
            None => MeasureSet::default(),
        },
    };

    let output = match (&flags.out, &file.output) {
        (Some(path), file_out) if path != "-" => {
            Output::File(path.clone(), format_for(path, file_out.as_ref().and_then(|o| o.format)))
        }
        (Some(_), file_out) => Output::Stdout(
            file_out.as_ref().and_then(|o| o.format).unwrap_or(OutputFormat::Csv),
        ),
        (None, Some(out)) if out.path != "-" => {
            Output::File(out.path.clone(), format_for(&out.path, out.format))
        }
        (None, Some(out)) => Output::Stdout(out.format.unwrap_or(OutputFormat::Csv)),
        (None, None) => Output::Stdout(OutputFormat::Csv),
    };

    Ok(SweepConfig { model, n, chi, jx, grid, separations, measures, output })
}
