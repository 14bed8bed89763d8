//! Configuration, report documents and output writers behind the `newcomb`
//! binary.

use std::io::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::decision::{
    choose, decision_boundary, dominant_choice, expected_utilities, Choice, DecisionBoundary,
    PredictorProfile, RegionGrid, UtilityMatrix,
};
use crate::error::{Error, Result};
use crate::sim::ComparisonTable;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub const DEFAULT_TRIALS: u64 = 50_000;
pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_RESOLUTION: usize = 101;

/// Exit status for a failed command: 2 for bad input, 3 for I/O failures.
pub fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Validation { .. } | Error::Argument(_) | Error::Parse { .. } => 2,
        Error::Io { .. } => 3,
        Error::Structure(_) | Error::UnsupportedGraph(_) | Error::Invariant(_) => 1,
    }
}

pub fn default_parallelism() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

#[derive(Debug, Clone, PartialEq)]
pub struct GameConfig {
    pub utilities: UtilityMatrix,
    pub predictor: PredictorProfile,
    pub trials: u64,
    pub seed: u64,
    pub resolution: usize,
    pub parallelism: usize,
}

impl GameConfig {
    /// Classic utilities with the given predictor and default run settings.
    pub fn classic(predictor: PredictorProfile) -> Self {
        GameConfig {
            utilities: UtilityMatrix::classic(),
            predictor,
            trials: DEFAULT_TRIALS,
            seed: DEFAULT_SEED,
            resolution: DEFAULT_RESOLUTION,
            parallelism: default_parallelism(),
        }
    }

    fn from_file(file: ConfigFile) -> Result<Self> {
        let utilities = file
            .utilities
            .ok_or_else(|| Error::validation("utilities", "required"))?;
        let predictor = file
            .predictor
            .ok_or_else(|| Error::validation("predictor", "required"))?;
        let config = GameConfig {
            utilities: UtilityMatrix::from_rows(utilities)?,
            predictor: PredictorProfile::new(predictor[0], predictor[1])?,
            trials: file.trials.unwrap_or(DEFAULT_TRIALS),
            seed: file.seed.unwrap_or(DEFAULT_SEED),
            resolution: file.resolution.unwrap_or(DEFAULT_RESOLUTION),
            parallelism: file.parallelism.unwrap_or_else(default_parallelism),
        };
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::validation("trials", "must be at least 1"));
        }
        if self.resolution < 2 {
            return Err(Error::validation("resolution", "must be at least 2"));
        }
        if self.parallelism == 0 {
            return Err(Error::validation("parallelism", "must be at least 1"));
        }
        Ok(())
    }

    /// Replaces run settings with any values given on the command line.
    pub fn with_overrides(
        mut self,
        seed: Option<u64>,
        trials: Option<u64>,
        resolution: Option<usize>,
        parallelism: Option<usize>,
    ) -> Result<Self> {
        self.seed = seed.unwrap_or(self.seed);
        self.trials = trials.unwrap_or(self.trials);
        self.resolution = resolution.unwrap_or(self.resolution);
        self.parallelism = parallelism.unwrap_or(self.parallelism);
        self.validate()?;
        Ok(self)
    }

    pub fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            utilities: self.utilities.rows(),
            predictor: [self.predictor.p1(), self.predictor.p2()],
            trials: self.trials,
            seed: self.seed,
            resolution: self.resolution,
            parallelism: self.parallelism,
        }
    }

    /// The config file text for this configuration.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.echo()).expect("config serializes")
    }
}

/// Config file as written by users; every key but `utilities` and
/// `predictor` is optional.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    utilities: Option<[[f64; 2]; 2]>,
    predictor: Option<[f64; 2]>,
    trials: Option<u64>,
    seed: Option<u64>,
    resolution: Option<usize>,
    parallelism: Option<usize>,
}

/// A fully resolved configuration, as echoed in reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigEcho {
    pub utilities: [[f64; 2]; 2],
    pub predictor: [f64; 2],
    pub trials: u64,
    pub seed: u64,
    pub resolution: usize,
    pub parallelism: usize,
}

pub fn parse_config(text: &str) -> Result<GameConfig> {
    let file: ConfigFile = serde_json::from_str(text).map_err(|e| {
        use serde_json::error::Category;
        match e.classify() {
            Category::Data => Error::validation("config", e.to_string()),
            Category::Io | Category::Syntax | Category::Eof => Error::Parse {
                line: e.line(),
                column: e.column(),
                message: e.to_string(),
            },
        }
    })?;
    GameConfig::from_file(file)
}

pub fn load_config(path: &Path) -> Result<GameConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::io(format!("cannot read config {}", path.display()), e))?;
    parse_config(&text)
}

/// Per-choice values keyed `C1` / `C2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChoicePair {
    #[serde(rename = "C1")]
    pub c1: f64,
    #[serde(rename = "C2")]
    pub c2: f64,
}

impl From<(f64, f64)> for ChoicePair {
    fn from((c1, c2): (f64, f64)) -> Self {
        ChoicePair { c1, c2 }
    }
}

/// Output of `newcomb expected`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpectedDocument {
    pub config: ConfigEcho,
    pub expected_utility: ChoicePair,
    pub choice: Choice,
    pub boundary: DecisionBoundary,
    pub dominant: Option<Choice>,
    pub version: String,
}

pub fn expected_document(config: &GameConfig) -> ExpectedDocument {
    let v = &config.utilities;
    let p = &config.predictor;
    ExpectedDocument {
        config: config.echo(),
        expected_utility: expected_utilities(v, p).into(),
        choice: choose(v, p),
        boundary: decision_boundary(v),
        dominant: dominant_choice(v),
        version: VERSION.to_string(),
    }
}

/// Output of `newcomb simulate`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationDocument {
    pub config: ConfigEcho,
    pub theoretical: ChoicePair,
    pub numerical: ChoicePair,
    pub standard_error: ChoicePair,
    pub seed: u64,
    pub trials: u64,
    pub elapsed_seconds: f64,
    pub version: String,
}

pub fn simulation_document(config: &GameConfig, table: &ComparisonTable) -> SimulationDocument {
    SimulationDocument {
        config: config.echo(),
        theoretical: table.theoretical().into(),
        numerical: table.empirical().into(),
        standard_error: (table.c1.standard_error, table.c2.standard_error).into(),
        seed: config.seed,
        trials: config.trials,
        elapsed_seconds: table.c1.elapsed_seconds + table.c2.elapsed_seconds,
        version: VERSION.to_string(),
    }
}

pub fn to_json_text<T: Serialize>(doc: &T) -> String {
    let mut text = serde_json::to_string_pretty(doc).expect("document serializes");
    text.push('\n');
    text
}

/// Formats a probability with at most 6 significant digits and no trailing
/// zeros: `0.5`, `1`, `0.333333`, `0.01`.
pub fn format_probability(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (5 - magnitude).max(0) as usize;
    let mut s = format!("{x:.decimals$}");
    if s.contains('.') {
        let trimmed = s.trim_end_matches('0').trim_end_matches('.').len();
        s.truncate(trimmed);
    }
    s
}

/// `p1,p2,choice` rows with `p1` in the outer loop, both ascending.
pub fn region_csv(grid: &RegionGrid) -> String {
    let r = grid.resolution();
    let mut out = String::with_capacity(16 * r * r + 16);
    out.push_str("p1,p2,choice\n");
    for i in 0..r {
        let p1 = format_probability(grid.coordinate(i));
        for j in 0..r {
            out.push_str(&p1);
            out.push(',');
            out.push_str(&format_probability(grid.coordinate(j)));
            out.push(',');
            out.push_str(&grid.cell(i, j).to_string());
            out.push('\n');
        }
    }
    out
}

/// Writes `contents` to `path` through a temporary file in the same
/// directory, so a failed write never leaves a partial file. Existing
/// read-only files are refused.
pub fn write_output(path: &Path, contents: &str) -> Result<()> {
    let context = || format!("cannot write {}", path.display());
    if let Ok(meta) = std::fs::metadata(path) {
        if meta.permissions().readonly() {
            return Err(Error::io(
                context(),
                std::io::Error::new(std::io::ErrorKind::PermissionDenied, "file is read-only"),
            ));
        }
    }
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(context(), e))?;
    tmp.write_all(contents.as_bytes())
        .and_then(|()| tmp.flush())
        .map_err(|e| Error::io(context(), e))?;
    tmp.persist(path)
        .map_err(|e| Error::io(context(), e.error))?;
    Ok(())
}
