//! Run configuration: JSON file, environment, and flag resolution.
//!
//! Settings resolve in order config file < `FOMC_OUT_DIR` (output directory
//! only) < command-line flags. The resolved configuration is hashed into
//! every output's provenance header, so artifacts are traceable to the exact
//! settings that produced them.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

use fomc_core::econ;
use fomc_core::lexicon::{Lexicon, PanelId};
use fomc_core::provenance;
use fomc_core::stance::TieRule;

/// Environment variable overriding the output directory.
pub const OUT_DIR_ENV: &str = "FOMC_OUT_DIR";

/// Alignment of measure points to monthly econ prints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Alignment {
    /// First print on or after the release date.
    #[default]
    Next,
    /// Print of the release month.
    SameMonth,
}

impl std::str::FromStr for Alignment {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "next" => Ok(Alignment::Next),
            "same-month" | "same_month" => Ok(Alignment::SameMonth),
            other => anyhow::bail!("unknown alignment `{other}` (expected next|same-month)"),
        }
    }
}

impl Alignment {
    pub fn align(
        self,
        points: &[fomc_core::MeasurePoint],
        series: &econ::EconSeries,
    ) -> (Vec<(f64, f64)>, Vec<String>) {
        match self {
            Alignment::Next => econ::align_next_release(points, series),
            Alignment::SameMonth => econ::align_same_month(points, series),
        }
    }
}

/// On-disk configuration file. Every field is optional; flags fill the gaps.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default)]
    pub corpora: CorpusPaths,
    pub cpi: Option<PathBuf>,
    pub ppi: Option<PathBuf>,
    pub treasury: Option<PathBuf>,
    pub prices: Option<PathBuf>,
    /// External prediction file applied instead of the rule classifier.
    pub labels: Option<PathBuf>,
    pub lexicon: Option<PathBuf>,
    pub seeds: Option<Vec<u64>>,
    pub tie_rule: Option<TieRule>,
    pub alignment: Option<Alignment>,
    pub validity_panels: Option<Vec<String>>,
    pub short_convention: Option<String>,
    pub output_dir: Option<PathBuf>,
    pub backtest_start: Option<String>,
    pub backtest_end: Option<String>,
    /// Measure series produced by `fomc measure`, consumed by `fomc report`.
    #[serde(default)]
    pub measures: CorpusPaths,
}

/// Per-kind file paths.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct CorpusPaths {
    pub meeting_minutes: Option<PathBuf>,
    pub press_conference: Option<PathBuf>,
    pub speech: Option<PathBuf>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let raw = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        serde_json::from_str(&raw).with_context(|| format!("invalid config {}", path.display()))
    }
}

/// Fully resolved settings for one invocation.
#[derive(Debug, Clone, Serialize)]
pub struct Settings {
    pub file: ConfigFile,
    /// Destination only; not part of the config hash, so identical runs into
    /// different directories produce identical bytes.
    #[serde(skip)]
    pub output_dir: PathBuf,
    pub seeds: Vec<u64>,
    pub tie_rule: TieRule,
    pub alignment: Alignment,
    pub validity_panels: Vec<PanelId>,
    pub short_convention: fomc_core::backtest::ShortConvention,
    pub stamp: bool,
    #[serde(skip)]
    pub lexicon: Lexicon,
}

impl Settings {
    pub fn resolve(
        config_path: Option<&Path>,
        out_flag: Option<&Path>,
        lexicon_flag: Option<&Path>,
        stamp: bool,
    ) -> Result<Self> {
        let file = match config_path {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };

        let output_dir = out_flag
            .map(PathBuf::from)
            .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
            .or_else(|| file.output_dir.clone())
            .unwrap_or_else(|| PathBuf::from("out"));

        let lexicon_path = lexicon_flag
            .map(PathBuf::from)
            .or_else(|| file.lexicon.clone());
        let lexicon = match &lexicon_path {
            Some(p) => Lexicon::from_json_file(p)?,
            None => Lexicon::default(),
        };

        let seeds = file
            .seeds
            .clone()
            .unwrap_or_else(|| fomc_core::eval::DEFAULT_SEEDS.to_vec());
        let tie_rule = file.tie_rule.unwrap_or_default();
        let alignment = file.alignment.unwrap_or_default();
        let validity_panels = match &file.validity_panels {
            Some(names) => names
                .iter()
                .map(|n| n.parse::<PanelId>().map_err(anyhow::Error::from))
                .collect::<Result<Vec<_>>>()?,
            None => fomc_core::splitter::DEFAULT_VALIDITY_PANELS.to_vec(),
        };
        let short_convention = match &file.short_convention {
            Some(raw) => raw.parse()?,
            None => Default::default(),
        };

        Ok(Settings {
            file,
            output_dir,
            seeds,
            tie_rule,
            alignment,
            validity_panels,
            short_convention,
            stamp,
            lexicon,
        })
    }

    /// Fingerprint of the resolved settings (everything that shapes output
    /// content; destinations are excluded).
    pub fn config_hash(&self) -> String {
        let mut hashed = self.clone();
        hashed.file.output_dir = None;
        let serialized = serde_json::to_string(&hashed).expect("settings serialize");
        provenance::fingerprint(serialized.as_bytes())
    }

    pub fn provenance(&self, command: &str) -> provenance::Provenance {
        let mut p = provenance::Provenance::new(
            crate::TOOL_VERSION,
            command,
            self.config_hash(),
            self.lexicon.fingerprint(),
        );
        if self.stamp {
            p.timestamp = Some(format!("{:?}", std::time::SystemTime::now()));
        }
        p
    }
}
