//! `ghlab run experiment.json`: one command described in a file.
//!
//! ```json
//! {"schema": 1, "kind": "gh", "inputs": ["a.json", "b.json"],
//!  "params": {"mode": "bound", "restarts": 16}, "seed": 7, "output": "gh.json"}
//! ```
//!
//! Paths are relative to the experiment file. A CSV table, when the command
//! produces one, goes next to `output` with the extension `.csv`.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use serde::Deserialize;
use serde_json::{Map, Value};

use crate::commands::{self, Artifact};
use ghlab::io::SCHEMA_VERSION;

#[derive(Debug, Deserialize)]
#[serde(rename_all = "snake_case")]
enum Kind {
    Construct,
    Gh,
    Analyze,
    Geodesic,
    Bunch,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExperimentSpec {
    #[serde(default)]
    schema: Option<u32>,
    kind: Kind,
    #[serde(default)]
    inputs: Vec<PathBuf>,
    #[serde(default)]
    params: Map<String, Value>,
    #[serde(default)]
    seed: u64,
    output: PathBuf,
}

struct Params<'a>(&'a Map<String, Value>);

impl Params<'_> {
    fn f64(&self, key: &str) -> anyhow::Result<Option<f64>> {
        self.0
            .get(key)
            .map(|v| v.as_f64().ok_or_else(|| anyhow!("param {key} must be a number")))
            .transpose()
    }

    fn u64(&self, key: &str) -> anyhow::Result<Option<u64>> {
        self.0
            .get(key)
            .map(|v| v.as_u64().ok_or_else(|| anyhow!("param {key} must be a nonnegative integer")))
            .transpose()
    }

    fn usize(&self, key: &str) -> anyhow::Result<Option<usize>> {
        Ok(self.u64(key)?.map(|v| v as usize))
    }

    fn str(&self, key: &str) -> anyhow::Result<Option<&str>> {
        self.0
            .get(key)
            .map(|v| v.as_str().ok_or_else(|| anyhow!("param {key} must be a string")))
            .transpose()
    }

    fn required_f64(&self, key: &str) -> anyhow::Result<f64> {
        self.f64(key)?.ok_or_else(|| anyhow!("missing param {key}"))
    }
}

fn inputs<const N: usize>(paths: &[PathBuf]) -> anyhow::Result<&[PathBuf; N]> {
    paths
        .try_into()
        .map_err(|_| anyhow!("expected {N} input file(s), got {}", paths.len()))
}

pub fn run(path: &Path) -> anyhow::Result<()> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let spec: ExperimentSpec = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    if let Some(v) = spec.schema.filter(|&v| v != SCHEMA_VERSION) {
        bail!("unsupported schema version {v}");
    }
    let base = path.parent().unwrap_or(Path::new("."));
    let input_paths: Vec<PathBuf> = spec.inputs.iter().map(|p| base.join(p)).collect();
    for p in &input_paths {
        if !p.exists() {
            bail!("input {} does not exist", p.display());
        }
    }
    let output = base.join(&spec.output);
    let params = Params(&spec.params);
    let seed = spec.seed;

    let artifact: Artifact = match spec.kind {
        Kind::Construct => {
            let space = match params.str("kind")?.ok_or_else(|| anyhow!("missing param kind"))? {
                "cantor" => commands::construct_cantor(
                    params.required_f64("c")?,
                    params.u64("depth")?.ok_or_else(|| anyhow!("missing param depth"))? as u32,
                )?,
                "telescope" => commands::construct_telescope(&input_paths)?,
                "u-space" | "u_space" => {
                    let q = spec
                        .params
                        .get("q")
                        .and_then(Value::as_array)
                        .ok_or_else(|| anyhow!("param q must be an array of numbers"))?
                        .iter()
                        .map(|v| v.as_f64().ok_or_else(|| anyhow!("param q must be an array of numbers")))
                        .collect::<anyhow::Result<Vec<_>>>()?;
                    commands::construct_u_space(
                        q,
                        params.usize("depth")?,
                        params.f64("part_c")?,
                        params.u64("part_depth")?.unwrap_or(2) as u32,
                    )?
                }
                "triple" => commands::construct_triple(
                    params.usize("stage")?.ok_or_else(|| anyhow!("missing param stage"))?,
                    params.required_f64("q")?,
                )?,
                "product" => {
                    let [a, b] = inputs::<2>(&input_paths)?;
                    commands::construct_product(a, b)?
                }
                "scale" => {
                    let [a] = inputs::<1>(&input_paths)?;
                    commands::construct_scale(a, params.required_f64("factor")?)?
                }
                other => bail!("unknown construction {other:?}"),
            };
            return commands::write_space_artifact(&space, Some(&output));
        }
        Kind::Gh => {
            let [a, b] = inputs::<2>(&input_paths)?;
            match params.str("mode")?.unwrap_or("exact") {
                "exact" => commands::gh_exact_cmd(
                    a,
                    b,
                    params.u64("budget")?.unwrap_or(ghlab::gh::DEFAULT_NODE_BUDGET),
                )?,
                "bound" => commands::gh_bound_cmd(
                    a,
                    b,
                    params.usize("restarts")?.unwrap_or(ghlab::gh::DEFAULT_RESTARTS),
                    seed,
                )?,
                other => bail!("unknown gh mode {other:?}"),
            }
        }
        Kind::Analyze => {
            let [x] = inputs::<1>(&input_paths)?;
            commands::analyze_cmd(x, params.f64("t")?)?
        }
        Kind::Geodesic => {
            let [a, b] = inputs::<2>(&input_paths)?;
            commands::straight_cmd(
                a,
                b,
                params.usize("grid")?.unwrap_or(11),
                params.u64("budget")?.unwrap_or(ghlab::gh::DEFAULT_NODE_BUDGET),
                None,
            )?
        }
        Kind::Bunch => {
            let [description] = inputs::<1>(&input_paths)?;
            commands::bunch_cmd(
                description,
                params.usize("s_grid")?.unwrap_or(11),
                params.usize("q_samples")?.unwrap_or(8),
                seed,
            )?
        }
    };
    let csv = output.with_extension("csv");
    artifact.deliver(Some(&output), Some(&csv))
}
