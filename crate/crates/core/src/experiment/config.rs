use std::path::{Path as FsPath, PathBuf};

use serde::{Deserialize, Serialize};

use crate::cayley::{GroupSpec, DEFAULT_MAX_VERTICES};
use crate::error::{Error, Result};
use crate::graph::VertexId;
use crate::horoball::MAX_DEPTH;
use crate::rational::Rational;
use crate::shortcut::LambdaRange;

pub const CONFIG_VERSION: u32 = 1;

/// A complete, self-describing experiment run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub version: u32,
    #[serde(default)]
    pub seed: u64,
    pub instance: InstanceSpec,
    pub experiment: ExperimentParams,
    #[serde(default)]
    pub output: OutputSpec,
    #[serde(default)]
    pub limits: Limits,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case", deny_unknown_fields)]
pub enum InstanceSpec {
    /// A ball in a Cayley graph; parabolics come from the group structure.
    Group {
        group: GroupSpec,
        radius: u32,
        /// Defaults to the factor cosets for free products and to no
        /// parabolics otherwise.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        parabolics: Option<ParabolicChoice>,
    },
    /// A graph document on disk. Relative paths resolve against the config
    /// file's directory.
    GraphFile {
        path: PathBuf,
        #[serde(default)]
        family: Vec<Vec<VertexId>>,
    },
    Builtin {
        graph: BuiltinGraph,
        #[serde(default)]
        family: Vec<Vec<VertexId>>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParabolicChoice {
    /// Every coset of every free factor meeting the ball.
    Factors,
    /// The ball itself as the only parabolic.
    Whole,
    None,
}

impl ParabolicChoice {
    pub fn resolve(group: &GroupSpec, choice: Option<ParabolicChoice>) -> ParabolicChoice {
        choice.unwrap_or(if group.is_free_product() {
            ParabolicChoice::Factors
        } else {
            ParabolicChoice::None
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum BuiltinGraph {
    Path { edges: usize },
    Cycle { vertices: usize },
    Complete { vertices: usize },
    Grid { width: usize, height: usize },
    Tree { arity: usize, depth: usize },
    Petersen,
    Random { vertices: usize, extra_edge_p: f64, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ExperimentParams {
    BuildHoroball {
        depth: u32,
    },
    Augment {
        depth: u32,
    },
    Delta {
        #[serde(default)]
        sample: SampleSpec,
        /// Measure the depth-`n` augmentation instead of the instance graph.
        #[serde(default)]
        depth: Option<u32>,
    },
    Convexity {
        subset: Vec<VertexId>,
        #[serde(default)]
        pairs: PairSpec,
        #[serde(default)]
        geodesic_cap: Option<usize>,
        #[serde(default = "default_witness_limit")]
        witness_limit: usize,
        #[serde(default)]
        depth: Option<u32>,
    },
    Shortcut {
        k: Rational,
        cycle_lengths: Vec<usize>,
        lambdas: LambdaRange,
        #[serde(default)]
        restriction: Option<Vec<VertexId>>,
        #[serde(default)]
        anchors: Option<Vec<VertexId>>,
        #[serde(default)]
        node_cap: Option<u64>,
        #[serde(default)]
        depth: Option<u32>,
    },
    MilnorSvarc {
        depth: u32,
        t: Vec<u32>,
    },
    ConvexifyExperiment {
        depths: Vec<u32>,
        #[serde(default = "default_witness_limit")]
        witness_limit: usize,
    },
}

fn default_witness_limit() -> usize {
    16
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SampleSpec {
    #[default]
    All,
    /// Uniform quadruples drawn with the config seed.
    Random { count: u64 },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum PairSpec {
    #[default]
    All,
    Interior { center: VertexId, radius: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    /// Directory for the report and artifacts; the CLI's `--out` overrides it.
    #[serde(default)]
    pub dir: Option<PathBuf>,
    #[serde(default = "yes")]
    pub csv: bool,
    #[serde(default)]
    pub dot: bool,
}

fn yes() -> bool {
    true
}

impl Default for OutputSpec {
    fn default() -> Self {
        OutputSpec { dir: None, csv: true, dot: false }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Limits {
    #[serde(default = "default_max_vertices")]
    pub max_vertices: usize,
}

fn default_max_vertices() -> usize {
    DEFAULT_MAX_VERTICES
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_vertices: DEFAULT_MAX_VERTICES }
    }
}

impl ExperimentParams {
    pub fn kind(&self) -> &'static str {
        match self {
            ExperimentParams::BuildHoroball { .. } => "build-horoball",
            ExperimentParams::Augment { .. } => "augment",
            ExperimentParams::Delta { .. } => "delta",
            ExperimentParams::Convexity { .. } => "convexity",
            ExperimentParams::Shortcut { .. } => "shortcut",
            ExperimentParams::MilnorSvarc { .. } => "milnor-svarc",
            ExperimentParams::ConvexifyExperiment { .. } => "convexify-experiment",
        }
    }
}

fn config_error(path: &str, message: impl Into<String>) -> Error {
    Error::Config {
        path: path.to_owned(),
        message: message.into(),
    }
}

fn check_depth_at(path: &str, depth: u32) -> Result<()> {
    if depth == 0 || depth > MAX_DEPTH {
        return Err(config_error(path, format!("depth must be in 1..={MAX_DEPTH}, got {depth}")));
    }
    Ok(())
}

impl ExperimentConfig {
    /// Parses and validates a config document. Relative file references are
    /// resolved against `base_dir`.
    pub fn from_json(text: &str, base_dir: Option<&FsPath>) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let mut cfg: ExperimentConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            config_error(if path.is_empty() { "." } else { &path }, e.into_inner().to_string())
        })?;
        if let (Some(dir), InstanceSpec::GraphFile { path, .. }) = (base_dir, &mut cfg.instance) {
            if path.is_relative() {
                *path = dir.join(&*path);
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn read(path: &FsPath) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text, path.parent())
    }

    /// Checks everything that does not need the instance built.
    pub fn validate(&self) -> Result<()> {
        if self.version != CONFIG_VERSION {
            return Err(config_error(
                "version",
                format!("unsupported config version {} (expected {CONFIG_VERSION})", self.version),
            ));
        }
        match &self.instance {
            InstanceSpec::Group { group, radius, parabolics } => {
                if *radius == 0 {
                    return Err(config_error("instance.radius", "radius must be at least 1"));
                }
                if *parabolics == Some(ParabolicChoice::Factors) && !group.is_free_product() {
                    return Err(config_error(
                        "instance.parabolics",
                        format!("{group} is not a free product; use \"whole\" or \"none\""),
                    ));
                }
            }
            InstanceSpec::GraphFile { path, .. } => {
                if !path.is_file() {
                    return Err(config_error(
                        "instance.path",
                        format!("graph file {} does not exist", path.display()),
                    ));
                }
            }
            InstanceSpec::Builtin { .. } => {}
        }
        let group_only = |what: &str| -> Result<()> {
            if !matches!(self.instance, InstanceSpec::Group { .. }) {
                return Err(config_error(
                    "instance",
                    format!("{what} needs a group instance (its interior pairs are measured from the identity)"),
                ));
            }
            Ok(())
        };
        match &self.experiment {
            ExperimentParams::BuildHoroball { depth } | ExperimentParams::Augment { depth } => {
                check_depth_at("experiment.depth", *depth)?;
            }
            ExperimentParams::Delta { sample, depth } => {
                if let SampleSpec::Random { count: 0 } = sample {
                    return Err(config_error("experiment.sample.random.count", "sample count must be positive"));
                }
                if let Some(d) = depth {
                    check_depth_at("experiment.depth", *d)?;
                }
            }
            ExperimentParams::Convexity { subset, depth, .. } => {
                if subset.is_empty() {
                    return Err(config_error("experiment.subset", "subset must be nonempty"));
                }
                if let Some(d) = depth {
                    check_depth_at("experiment.depth", *d)?;
                }
            }
            ExperimentParams::Shortcut { k, cycle_lengths, lambdas, depth, .. } => {
                if k.0 < Rational::integer(1).0 {
                    return Err(config_error("experiment.k", "K must be at least 1"));
                }
                if cycle_lengths.is_empty() {
                    return Err(config_error("experiment.cycle_lengths", "list must be nonempty"));
                }
                if let Some((i, n)) = cycle_lengths.iter().enumerate().find(|(_, &n)| n < 3) {
                    return Err(config_error(
                        &format!("experiment.cycle_lengths[{i}]"),
                        format!("cycle length must be at least 3, got {n}"),
                    ));
                }
                lambdas
                    .validate()
                    .map_err(|e| config_error("experiment.lambdas", e.to_string()))?;
                if lambdas.values().is_empty() {
                    return Err(config_error("experiment.lambdas", "lambda grid is empty"));
                }
                if let Some(d) = depth {
                    check_depth_at("experiment.depth", *d)?;
                }
            }
            ExperimentParams::MilnorSvarc { depth, t } => {
                group_only("milnor-svarc")?;
                check_depth_at("experiment.depth", *depth)?;
                if t.is_empty() {
                    return Err(config_error("experiment.t", "t list must be nonempty"));
                }
            }
            ExperimentParams::ConvexifyExperiment { depths, .. } => {
                group_only("convexify-experiment")?;
                if depths.is_empty() {
                    return Err(config_error("experiment.depths", "depth list must be nonempty"));
                }
                for (i, &d) in depths.iter().enumerate() {
                    check_depth_at(&format!("experiment.depths[{i}]"), d)?;
                }
                if let InstanceSpec::Group { group, parabolics, .. } = &self.instance {
                    if ParabolicChoice::resolve(group, *parabolics) != ParabolicChoice::Factors {
                        return Err(config_error(
                            "instance.parabolics",
                            "convexify-experiment needs a free product with its factor cosets as parabolics",
                        ));
                    }
                }
            }
        }
        if self.limits.max_vertices == 0 {
            return Err(config_error("limits.max_vertices", "budget must be positive"));
        }
        Ok(())
    }
}
