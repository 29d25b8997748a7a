use std::fmt::Write as _;
use std::path::Path as FsPath;
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

use super::config::{ExperimentConfig, ExperimentParams, PairSpec, SampleSpec};
use super::instance::{Instance, InstanceSummary};
use super::pipelines::{
    convexify_checks, convexify_experiment, level_gap_scan, milnor_svarc_experiment, Check,
};
use crate::analysis::{convexity_defect, four_point_delta, ConvexityOptions, PairFilter, QuadrupleSample};
use crate::error::{Error, ErrorKind, Result};
use crate::graph::{io, Graph};
use crate::horoball::{build_augmented, RestrictedHoroball};
use crate::shortcut::{shortcut_profile, ProfileSpec};

pub const REPORT_FORMAT: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Ok,
    PropertyViolation,
    InputError,
    ResourceError,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Environment {
    pub tool: &'static str,
    pub version: &'static str,
    pub instance: Option<InstanceSummary>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Timing {
    pub stage: String,
    pub seconds: f64,
}

/// A file produced alongside the report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Artifact {
    pub name: String,
    pub contents: String,
}

/// Everything a run produced. The serialized form excludes timings and
/// artifacts, so identical configs give identical bytes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub format: u32,
    pub experiment: &'static str,
    pub seed: u64,
    pub config: ExperimentConfig,
    pub environment: Environment,
    pub status: RunStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub rows: Vec<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub summary: Option<Value>,
    pub checks: Vec<Check>,
    #[serde(skip)]
    pub timings: Vec<Timing>,
    #[serde(skip)]
    pub artifacts: Vec<Artifact>,
}

impl Report {
    fn new(config: &ExperimentConfig) -> Report {
        Report {
            format: REPORT_FORMAT,
            experiment: config.experiment.kind(),
            seed: config.seed,
            config: config.clone(),
            environment: Environment {
                tool: "horolab",
                version: env!("CARGO_PKG_VERSION"),
                instance: None,
            },
            status: RunStatus::Ok,
            error: None,
            rows: Vec::new(),
            summary: None,
            checks: Vec::new(),
            timings: Vec::new(),
            artifacts: Vec::new(),
        }
    }

    /// Pretty-printed JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialize");
        s.push('\n');
        s
    }

    pub fn timings_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.timings).expect("timings always serialize");
        s.push('\n');
        s
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    /// Writes `report.json`, `timings.json` and every artifact into `dir`.
    pub fn write(&self, dir: &FsPath) -> Result<()> {
        let io_err = |path: &FsPath| {
            let path = path.display().to_string();
            move |source| Error::Io { path, source }
        };
        std::fs::create_dir_all(dir).map_err(io_err(dir))?;
        let mut files = vec![
            ("report.json".to_owned(), self.to_json()),
            ("timings.json".to_owned(), self.timings_json()),
        ];
        files.extend(self.artifacts.iter().map(|a| (a.name.clone(), a.contents.clone())));
        for (name, contents) in files {
            let path = dir.join(name);
            std::fs::write(&path, contents).map_err(io_err(&path))?;
        }
        Ok(())
    }

    fn time<T>(&mut self, stage: &str, f: impl FnOnce(&mut Report) -> T) -> T {
        let start = Instant::now();
        let out = f(self);
        self.timings.push(Timing {
            stage: stage.to_owned(),
            seconds: start.elapsed().as_secs_f64(),
        });
        out
    }

    fn push_rows<T: Serialize>(&mut self, rows: &[T]) {
        self.rows
            .extend(rows.iter().map(|r| serde_json::to_value(r).expect("rows always serialize")));
    }

    fn artifact(&mut self, name: &str, contents: String) {
        self.artifacts.push(Artifact {
            name: name.to_owned(),
            contents,
        });
    }
}

/// Executes the configured pipeline. Failures after the config was accepted
/// are recorded in the report rather than returned.
pub fn run(config: &ExperimentConfig) -> Report {
    let mut report = Report::new(config);
    let result = report
        .time("instance", |_| Instance::build(&config.instance, config.limits.max_vertices))
        .and_then(|instance| {
            report.environment.instance = Some(instance.summary());
            if config.output.dot {
                report.artifact("instance.dot", io::to_dot(&instance.graph, "instance", None));
            }
            report.time("pipeline", |r| dispatch(config, &instance, r))
        });
    match result {
        Ok(()) => {
            if report.failed_checks().next().is_some() {
                report.status = RunStatus::PropertyViolation;
            }
        }
        Err(e) => {
            report.status = match e.kind() {
                ErrorKind::Resource => RunStatus::ResourceError,
                ErrorKind::Input | ErrorKind::Config => RunStatus::InputError,
            };
            report.error = Some(e.to_string());
        }
    }
    report
}

#[derive(Serialize)]
struct SizeRow {
    depth: u32,
    base_vertices: usize,
    parabolics: usize,
    vertices: usize,
    edges: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    level_gap: Option<super::pipelines::LevelGap>,
}

#[derive(Serialize)]
struct MeasuredGraph<T: Serialize> {
    vertices: usize,
    #[serde(flatten)]
    result: T,
}

/// The instance graph, or a depth-`n` construction over it: the
/// augmentation when a parabolic family is present, else the horoball over
/// the whole graph.
fn measured_graph(instance: &Instance, depth: Option<u32>, config: &ExperimentConfig) -> Result<Graph> {
    match depth {
        None => Ok(instance.graph.clone()),
        Some(n) if instance.family.is_empty() => {
            Ok(RestrictedHoroball::new(instance.graph.clone(), n)?.carrier().clone())
        }
        Some(n) => Ok(build_augmented(&instance.graph, instance.family.clone(), n, config.limits.max_vertices)?
            .carrier()
            .clone()),
    }
}

fn dispatch(config: &ExperimentConfig, instance: &Instance, report: &mut Report) -> Result<()> {
    let max_vertices = config.limits.max_vertices;
    match &config.experiment {
        &ExperimentParams::BuildHoroball { depth } => {
            let h = RestrictedHoroball::new(instance.graph.clone(), depth)?;
            let c = h.carrier();
            let expected = instance.graph.vertex_count() * (depth as usize + 1);
            report.push_rows(&[SizeRow {
                depth,
                base_vertices: instance.graph.vertex_count(),
                parabolics: 1,
                vertices: c.vertex_count(),
                edges: c.edge_count(),
                level_gap: None,
            }]);
            report.checks.push(Check::new(
                "vertex_count",
                c.vertex_count() == expected,
                format!("{} vertices, expected {expected}", c.vertex_count()),
            ));
            report.artifact("horoball.json", io::to_json_string(c, Some(&|v| h.vertex_meta(v))));
            if config.output.dot {
                report.artifact("horoball.dot", io::to_dot(c, "horoball", Some(&|v| h.level_of(v))));
            }
        }
        &ExperimentParams::Augment { depth } => {
            if instance.family.is_empty() {
                return Err(Error::input("parabolic family is empty"));
            }
            let aug = build_augmented(&instance.graph, instance.family.clone(), depth, max_vertices)?;
            let c = aug.carrier();
            let level_gap = instance.ball.as_ref().map(|ball| level_gap_scan(ball, instance, &aug));
            if let Some(gap) = &level_gap {
                report.checks.push(Check::new(
                    "level_gap_within_2n",
                    gap.holds(),
                    format!("max gap {} over {} interior pairs, bound {}", gap.max_gap, gap.pairs_checked, gap.bound),
                ));
            }
            report.push_rows(&[SizeRow {
                depth,
                base_vertices: instance.graph.vertex_count(),
                parabolics: instance.family.len(),
                vertices: c.vertex_count(),
                edges: c.edge_count(),
                level_gap,
            }]);
            report.artifact("augmented.json", io::to_json_string(c, Some(&|v| aug.vertex_meta(v))));
            if config.output.dot {
                report.artifact("augmented.dot", io::to_dot(c, "augmented", Some(&|v| aug.level(v))));
            }
        }
        &ExperimentParams::Delta { sample, depth } => {
            let g = measured_graph(instance, depth, config)?;
            let sample = match sample {
                SampleSpec::All => QuadrupleSample::All,
                SampleSpec::Random { count } => QuadrupleSample::Random { count, seed: config.seed },
            };
            let est = four_point_delta(&g, sample)?;
            report.push_rows(&[MeasuredGraph { vertices: g.vertex_count(), result: est }]);
        }
        ExperimentParams::Convexity { subset, pairs, geodesic_cap, witness_limit, depth } => {
            let g = measured_graph(instance, *depth, config)?;
            let filter = match *pairs {
                PairSpec::All => PairFilter::All,
                PairSpec::Interior { center, radius } => PairFilter::Interior { center, radius },
            };
            let opts = ConvexityOptions {
                geodesic_cap: *geodesic_cap,
                witness_limit: *witness_limit,
            };
            let r = convexity_defect(&g, subset, &filter, &opts)?;
            report.push_rows(&[MeasuredGraph { vertices: g.vertex_count(), result: r }]);
        }
        ExperimentParams::Shortcut { k, cycle_lengths, lambdas, restriction, anchors, node_cap, depth } => {
            let g = measured_graph(instance, *depth, config)?;
            let spec = ProfileSpec {
                k: *k,
                cycle_lengths: cycle_lengths.clone(),
                lambdas: *lambdas,
                restriction: restriction.clone(),
                anchors: anchors.clone(),
                node_cap: *node_cap,
            };
            let prof = shortcut_profile(&g, &spec)?;
            report.push_rows(&prof.rows);
            report.summary = Some(serde_json::to_value(&prof.summary)?);
            for (row, t) in prof.rows.iter().zip(&prof.timings) {
                let lambda = row.lambda.map_or_else(|| "-".to_owned(), |l| l.to_string());
                report.timings.push(Timing {
                    stage: format!("cell n={} lambda={lambda}", row.n),
                    seconds: t.as_secs_f64(),
                });
            }
            if config.output.csv {
                report.artifact("profile.csv", prof.to_csv());
            }
        }
        ExperimentParams::MilnorSvarc { depth, t } => {
            let res = milnor_svarc_experiment(instance, *depth, t, max_vertices)?;
            report.push_rows(&res.rows);
            report.checks.extend(res.checks);
            if config.output.csv {
                let mut csv = String::from("t,generators,flagged,k_exact,k\n");
                for r in &res.rows {
                    let fit = |f: Option<crate::rational::Rational>| f.map_or_else(|| "inf".to_owned(), |x| x.to_string());
                    let (exact, value) = match r.k {
                        Some(k) => (fit(k.exact), fit(k.value)),
                        None => (String::new(), String::new()),
                    };
                    let _ = writeln!(csv, "{},{},{},{exact},{value}", r.t, r.generators, r.flagged);
                }
                report.artifact("milnor_svarc.csv", csv);
            }
        }
        ExperimentParams::ConvexifyExperiment { depths, witness_limit } => {
            let rows = convexify_experiment(instance, depths, *witness_limit, max_vertices)?;
            report.push_rows(&rows);
            report.checks.extend(convexify_checks(&rows));
            if config.output.csv {
                let mut csv = String::from("n,defect,witness_count,pairs_checked,parabolics_checked\n");
                for r in &rows {
                    let _ = writeln!(
                        csv,
                        "{},{},{},{},{}",
                        r.depth, r.defect, r.witness_count, r.pairs_checked, r.parabolics_checked
                    );
                }
                report.artifact("convexify.csv", csv);
            }
        }
    }
    Ok(())
}
