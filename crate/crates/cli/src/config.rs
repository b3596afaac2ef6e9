use std::path::{Path, PathBuf};

use purify::families::{PdfSpec, StateFamily};
use purify::optimizer::{GradientMode, OptimizerConfig, SequenceKind};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Settings read from `--config`. Command-line flags override them.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    /// Present in config echoes; must match the command being run.
    pub command: Option<String>,
    pub family: Option<String>,
    pub pdf: Option<String>,
    pub gate: Option<String>,
    pub iterations: Option<usize>,
    pub grid: Option<usize>,
    pub out: Option<PathBuf>,
    pub optimizer: Option<OptimizerConfig>,
}

impl FileConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}

/// Flags shared by every run command; `None` means "not given".
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub family: Option<String>,
    pub pdf: Option<String>,
    pub gate: Option<String>,
    pub iterations: Option<usize>,
    pub grid: Option<usize>,
    pub out: Option<PathBuf>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub restarts: Option<usize>,
    pub max_iterations: Option<usize>,
    pub sequence: Option<SequenceKind>,
    pub gradient: Option<GradientMode>,
}

/// Fully resolved settings, echoed next to every run's output.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub family: StateFamily,
    pub pdf: PdfSpec,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gate: Option<String>,
    pub iterations: usize,
    pub grid: usize,
    pub out: PathBuf,
    pub optimizer: OptimizerConfig,
}

pub const DEFAULT_GRID: usize = 101;

impl RunConfig {
    pub fn resolve(command: &str, file: FileConfig, flags: Overrides) -> CliResult<Self> {
        if let Some(c) = file.command.as_deref().filter(|c| *c != command) {
            return Err(CliError::Config(format!("config was written by `{c}`, not `{command}`")));
        }
        let family: StateFamily = flags
            .family
            .or(file.family)
            .ok_or_else(|| CliError::Config("a family is required (--family)".into()))?
            .parse()?;
        let pdf = match flags.pdf.or(file.pdf) {
            Some(p) => p.parse()?,
            None => family.default_pdf(),
        };
        if !pdf.fits(family) {
            return Err(CliError::Config(format!("pdf {pdf} does not fit the domain of {family}")));
        }
        let mut optimizer = file.optimizer.unwrap_or_default();
        if let Some(m) = flags.samples {
            optimizer.samples = m;
        }
        if let Some(s) = flags.seed {
            optimizer.sample_seed = s;
            optimizer.restart_seed = s;
        }
        if let Some(t) = flags.threads {
            optimizer.threads = t;
        }
        if let Some(r) = flags.restarts {
            optimizer.restarts = r;
        }
        if let Some(n) = flags.max_iterations {
            optimizer.max_iterations = n;
        }
        if let Some(s) = flags.sequence {
            optimizer.sequence = s;
        }
        if let Some(g) = flags.gradient {
            optimizer.gradient_mode = g;
        }
        optimizer.validate()?;
        let iterations = flags.iterations.or(file.iterations).unwrap_or(1);
        if iterations == 0 || iterations > optimizer.max_depth {
            return Err(CliError::Config(format!(
                "iterations must be in 1..={}, got {iterations}",
                optimizer.max_depth
            )));
        }
        let grid = flags.grid.or(file.grid).unwrap_or(DEFAULT_GRID);
        if grid < 2 {
            return Err(CliError::Config(format!("grid needs at least 2 points, got {grid}")));
        }
        Ok(Self {
            command: command.into(),
            family,
            pdf,
            gate: flags.gate.or(file.gate),
            iterations,
            grid,
            out: flags.out.or(file.out).unwrap_or_else(|| PathBuf::from("out")),
            optimizer,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let file: FileConfig = serde_json::from_str(
            r#"{"family": "maz", "iterations": 2, "optimizer": {"samples": 64, "restarts": 3}}"#,
        )
        .unwrap();
        let flags = Overrides {
            iterations: Some(1),
            samples: Some(16),
            ..Overrides::default()
        };
        let c = RunConfig::resolve("optimize", file, flags).unwrap();
        assert_eq!(c.family, StateFamily::Maz);
        assert_eq!(c.iterations, 1);
        assert_eq!(c.optimizer.samples, 16);
        assert_eq!(c.optimizer.restarts, 3);
        assert_eq!(c.pdf, StateFamily::Maz.default_pdf());
    }

    #[test]
    fn rejects_bad_settings() {
        let family = |f: &str| Overrides {
            family: Some(f.into()),
            ..Overrides::default()
        };
        assert!(RunConfig::resolve("x", FileConfig::default(), Overrides::default()).is_err());
        assert!(RunConfig::resolve("x", FileConfig::default(), family("nope")).is_err());
        let disk_on_line = Overrides {
            pdf: Some("disk".into()),
            ..family("maz")
        };
        assert!(RunConfig::resolve("x", FileConfig::default(), disk_on_line).is_err());
        let too_deep = Overrides {
            iterations: Some(9),
            ..family("maz")
        };
        assert!(RunConfig::resolve("x", FileConfig::default(), too_deep).is_err());
        assert!(serde_json::from_str::<FileConfig>(r#"{"famly": "maz"}"#).is_err());
    }
}
