use std::path::{Path, PathBuf};

use depsig::features::PosSoftmaxInput;
use depsig::{FeatureSet, TrainConfig};
use serde::{Deserialize, Serialize};

use crate::args::{Cli, FeatureSetArg, OutputFormat, PosInputArg, TrainArgs};
use crate::CliError;

/// Settings accepted in a `--config` TOML file.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub output: Option<OutputFormat>,
    pub features: Option<FeatureSetArg>,
    pub l2: Option<f64>,
    pub max_iter: Option<usize>,
    pub grad_tol: Option<f64>,
    pub pos_softmax_input: Option<PosInputArg>,
}

impl FileConfig {
    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))
    }
}

/// Fully resolved settings of one invocation, logged before any work starts.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub subcommand: &'static str,
    pub inputs: Vec<PathBuf>,
    pub outputs: Vec<PathBuf>,
    pub features: FeatureSet,
    pub pos_softmax_input: PosSoftmaxInput,
    pub train: TrainConfig,
    pub seed: u64,
    pub threads: usize,
    pub output: OutputFormat,
}

impl RunConfig {
    pub fn resolve(cli: &Cli, file: &FileConfig, subcommand: &'static str, train: Option<&TrainArgs>) -> Self {
        let empty = TrainArgs::default();
        let t = train.unwrap_or(&empty);
        let seed = cli.seed.or(file.seed).unwrap_or(0);
        let defaults = TrainConfig::default();
        let features = match t.features.or(file.features).unwrap_or(FeatureSetArg::Model2) {
            FeatureSetArg::Model1 => FeatureSet::Model1,
            FeatureSetArg::Model2 => FeatureSet::Model2,
        };
        let pos_softmax_input = match t
            .pos_softmax_input
            .or(file.pos_softmax_input)
            .unwrap_or(PosInputArg::Counts)
        {
            PosInputArg::Counts => PosSoftmaxInput::Counts,
            PosInputArg::Relfreq => PosSoftmaxInput::RelFreq,
        };
        RunConfig {
            subcommand,
            inputs: Vec::new(),
            outputs: Vec::new(),
            features,
            pos_softmax_input,
            train: TrainConfig {
                l2_strength: t.l2.or(file.l2).unwrap_or(defaults.l2_strength),
                max_iter: t.max_iter.or(file.max_iter).unwrap_or(defaults.max_iter),
                grad_tol: t.grad_tol.or(file.grad_tol).unwrap_or(defaults.grad_tol),
                seed,
            },
            seed,
            threads: cli.threads.or(file.threads).unwrap_or(1),
            output: cli.output.or(file.output).unwrap_or(OutputFormat::Json),
        }
    }

    pub fn input(mut self, path: &Path) -> Self {
        self.inputs.push(path.to_path_buf());
        self
    }

    pub fn maybe_output(mut self, path: Option<&PathBuf>) -> Self {
        self.outputs.extend(path.cloned());
        self
    }

    pub fn output_path(mut self, path: &Path) -> Self {
        self.outputs.push(path.to_path_buf());
        self
    }

    /// Input files must exist and output directories must be writable targets.
    pub fn validate(&self) -> Result<(), CliError> {
        for p in &self.inputs {
            if p.as_os_str() != "-" && !p.is_file() {
                return Err(CliError::Data(format!("input file not found: {}", p.display())));
            }
        }
        for p in &self.outputs {
            let parent = p.parent().filter(|d| !d.as_os_str().is_empty());
            if let Some(dir) = parent {
                if !dir.is_dir() {
                    return Err(CliError::Data(format!(
                        "output directory does not exist: {}",
                        dir.display()
                    )));
                }
            }
        }
        if self.threads == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        self.train.validate().map_err(|e| CliError::Usage(e.to_string()))
    }

    pub fn log(&self) {
        let json = serde_json::to_string(self).unwrap_or_default();
        eprintln!("depsig: config {json}");
    }
}
