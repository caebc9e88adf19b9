use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use sample_mst::ingest::{ZeroPolicy, DEFAULT_THRESHOLD};
use sample_mst::{BootstrapMode, GeneratorConfig, GraphKind, SampleDesign, SamplingKind};
use serde::{Deserialize, Serialize};

fn default_replications() -> usize {
    1000
}

fn default_bootstraps() -> usize {
    100
}

fn default_threshold() -> f64 {
    DEFAULT_THRESHOLD
}

/// A `simulate` run: one or more experiment blocks sharing a master seed.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub master_seed: Option<u64>,
    #[serde(default)]
    pub out_dir: Option<PathBuf>,
    /// Thread count; never affects output, so it is left out of the manifest.
    #[serde(default, skip_serializing)]
    pub workers: Option<usize>,
    pub experiments: Vec<ExperimentBlock>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentBlock {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<GeneratorConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<InputSpec>,
    pub designs: Vec<SampleDesign>,
    /// Sample sizes; quadrant designs ignore them.
    #[serde(default)]
    pub n: Vec<usize>,
    #[serde(default = "default_replications")]
    pub replications: usize,
    #[serde(default = "default_bootstraps")]
    pub bootstraps: usize,
    #[serde(default)]
    pub bootstrap_mode: BootstrapMode,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputSpec {
    pub path: PathBuf,
    #[serde(default = "default_threshold")]
    pub threshold: f64,
    #[serde(default)]
    pub zero_policy: ZeroPolicy,
    /// Seed of the shared tie-breaking ordering; defaults to the master seed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ordering_seed: Option<u64>,
}

impl ExperimentBlock {
    pub fn label(&self) -> String {
        if let Some(name) = &self.name {
            return name.clone();
        }
        match (&self.generator, &self.input) {
            (Some(g), _) => g.kind.name().to_string(),
            (_, Some(i)) => i.path.file_stem().map_or("edgelist".into(), |s| s.to_string_lossy().into_owned()),
            _ => "unnamed".into(),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let mut cfg: RunConfig =
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new("."));
        for block in &mut cfg.experiments {
            if let Some(input) = &mut block.input {
                if input.path.is_relative() {
                    input.path = base.join(&input.path);
                }
            }
        }
        Ok(cfg)
    }

    /// Reject configs that cannot run, before any work starts.
    pub fn validate(&self) -> anyhow::Result<()> {
        if self.master_seed.is_none() {
            bail!("master_seed is required");
        }
        if self.experiments.is_empty() {
            bail!("no experiments configured");
        }
        if self.workers == Some(0) {
            bail!("workers must be at least 1");
        }
        for (i, b) in self.experiments.iter().enumerate() {
            let at = || format!("experiment {i} ({})", b.label());
            let nodes = match (&b.generator, &b.input) {
                (Some(g), None) => {
                    g.validate().with_context(at)?;
                    Some(g.n_nodes)
                }
                (None, Some(input)) => {
                    if !input.path.is_file() {
                        bail!("{}: input file {} does not exist", at(), input.path.display());
                    }
                    if !(input.threshold > 0.0) {
                        bail!("{}: threshold must be positive", at());
                    }
                    None
                }
                _ => bail!("{}: exactly one of generator and input is required", at()),
            };
            if b.replications == 0 {
                bail!("{}: replications must be at least 1", at());
            }
            if b.designs.is_empty() {
                bail!("{}: no sampling designs", at());
            }
            for d in &b.designs {
                match d.kind {
                    SamplingKind::Quadrant => {
                        if d.quadrants.is_empty() {
                            bail!("{}: quadrant design needs a quadrant list", at());
                        }
                        if b.generator.as_ref().map(|g| g.kind) != Some(GraphKind::Normal) {
                            bail!("{}: quadrant sampling needs a normal generator", at());
                        }
                    }
                    _ if b.n.is_empty() => bail!("{}: design {} needs at least one n", at(), d.label()),
                    _ => {}
                }
            }
            if let (Some(nodes), Some(&big)) = (nodes, b.n.iter().max()) {
                if big > nodes {
                    bail!("{}: n = {big} exceeds the {nodes} generated nodes", at());
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> anyhow::Result<RunConfig> {
        Ok(serde_json::from_str(s)?)
    }

    #[test]
    fn minimal_config_gets_defaults() {
        let cfg = parse(
            r#"{"master_seed": 7, "experiments": [
                {"generator": {"kind": "complete", "n_nodes": 100}, "designs": [{"kind": "uniform"}], "n": [50]}
            ]}"#,
        )
        .unwrap();
        cfg.validate().unwrap();
        let b = &cfg.experiments[0];
        assert_eq!((b.replications, b.bootstraps, b.bootstrap_mode), (1000, 100, BootstrapMode::Mirror));
        assert_eq!(b.label(), "complete");
    }

    #[test]
    fn invalid_configs() {
        let bad = [
            r#"{"experiments": [{"generator": {"kind": "complete", "n_nodes": 10}, "designs": [{"kind": "uniform"}], "n": [5]}]}"#,
            r#"{"master_seed": 1, "experiments": []}"#,
            r#"{"master_seed": 1, "experiments": [{"generator": {"kind": "complete", "n_nodes": 10}, "designs": [{"kind": "uniform"}], "n": [50]}]}"#,
            r#"{"master_seed": 1, "experiments": [{"generator": {"kind": "gnp", "n_nodes": 10}, "designs": [{"kind": "quadrant", "quadrants": ["I"]}]}]}"#,
            r#"{"master_seed": 1, "experiments": [{"generator": {"kind": "normal", "n_nodes": 10}, "designs": [{"kind": "near"}]}]}"#,
            r#"{"master_seed": 1, "experiments": [{"input": {"path": "/nonexistent.csv"}, "designs": [{"kind": "uniform"}], "n": [5]}]}"#,
            r#"{"master_seed": 1, "experiments": [{"generator": {"kind": "complete", "n_nodes": 10}, "designs": [{"kind": "uniform"}], "n": [5], "replications": 0}]}"#,
        ];
        for text in bad {
            assert!(parse(text).unwrap().validate().is_err(), "{text}");
        }
        assert!(parse(r#"{"master_seed": 1, "experiments": [], "colour": 3}"#).is_err());
    }
}
