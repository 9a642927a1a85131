//! The `run` and `compare` commands.
//!
//! Exit status: 0 when every goal is reached within the step budget, 1 on
//! planning failure, 2 on scenario or output errors.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::planner::{ExecuteError, Mission, MissionOutcome};
use crate::scenario::{load_scenario, render_frames, write_trace, ScenarioError, ScenarioSpec};
use crate::simulator::ExecutionTrace;
use crate::world::Mode;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error("{path}: {source}")]
    Output {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("execution failed: {0}")]
    Execute(#[from] ExecuteError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Execute(_) => 1,
            CliError::Scenario(_) | CliError::Output { .. } => 2,
        }
    }
}

fn output_error(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Output {
        path: path.to_path_buf(),
        source,
    }
}

/// Options of `run`. Overrides win over scenario fields.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub scenario: PathBuf,
    pub mode_override: Option<Mode>,
    /// Created if absent.
    pub out_dir: PathBuf,
    pub emit_frames: bool,
    pub step_budget_override: Option<usize>,
    /// Extra copy of the metrics summary.
    pub metrics_out: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(scenario: impl Into<PathBuf>, out_dir: impl Into<PathBuf>) -> Self {
        Self {
            scenario: scenario.into(),
            mode_override: None,
            out_dir: out_dir.into(),
            emit_frames: false,
            step_budget_override: None,
            metrics_out: None,
        }
    }
}

/// Metrics summary of one run, written as `metrics.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub scenario: String,
    pub mode: Mode,
    pub goals: usize,
    pub goals_reached: usize,
    pub outcomes: Vec<MissionOutcome>,
    pub path_length: f64,
    pub pushes: usize,
    pub replans: usize,
    pub taboo_violations: usize,
    pub steps: usize,
}

impl RunSummary {
    pub fn all_reached(&self) -> bool {
        self.outcomes.iter().all(|o| *o == MissionOutcome::Reached)
    }

    pub fn exit_code(&self) -> i32 {
        if self.all_reached() {
            0
        } else {
            1
        }
    }
}

/// A finished simulation of one scenario in one mode.
#[derive(Clone, Debug)]
pub struct RunResult {
    pub summary: RunSummary,
    pub trace: ExecutionTrace,
    pub mission: Mission,
}

/// Pursues every goal of `spec` in order from the scenario start. Knowledge
/// and robot pose carry over between goals.
pub fn simulate(spec: &ScenarioSpec, mode: Mode, budget: usize) -> Result<RunResult, ExecuteError> {
    let mut mission = Mission::new(spec.ground_truth(), mode, budget)?;
    let outcomes = mission.run(&spec.goals)?;
    let trace = mission.trace.clone();
    let m = &trace.metrics;
    let summary = RunSummary {
        scenario: spec.name.clone(),
        mode,
        goals: spec.goals.len(),
        goals_reached: m.goals_reached,
        outcomes,
        path_length: m.path_length,
        pushes: m.pushes,
        replans: m.replans,
        taboo_violations: m.taboo_violations,
        steps: mission.steps_used(),
    };
    Ok(RunResult { summary, trace, mission })
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| ScenarioError::Serialize(e.to_string()))?;
    fs::write(path, text + "\n").map_err(output_error(path))
}

fn write_outputs(spec: &ScenarioSpec, result: &RunResult, out_dir: &Path, frames: bool) -> Result<(), CliError> {
    fs::create_dir_all(out_dir).map_err(output_error(out_dir))?;
    write_trace(&result.trace, out_dir.join("trace.jsonl"))?;
    write_json(&out_dir.join("metrics.json"), &result.summary)?;
    if frames {
        render_frames(&result.trace, spec, out_dir.join("frames"))?;
    }
    Ok(())
}

/// Runs one scenario and writes `trace.jsonl`, `metrics.json` and, when
/// asked, `frames/` into the output directory.
pub fn run(config: &RunConfig) -> Result<RunSummary, CliError> {
    let spec = load_scenario(&config.scenario)?;
    let mode = config.mode_override.unwrap_or(spec.mode);
    let budget = config.step_budget_override.unwrap_or(spec.step_budget);
    let result = simulate(&spec, mode, budget)?;
    write_outputs(&spec, &result, &config.out_dir, config.emit_frames)?;
    if let Some(path) = &config.metrics_out {
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            fs::create_dir_all(parent).map_err(output_error(parent))?;
        }
        write_json(path, &result.summary)?;
    }
    Ok(result.summary)
}

/// Both modes side by side on identical ground truth.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub scenario: String,
    pub namo: RunSummary,
    pub snamo: RunSummary,
}

impl Comparison {
    /// Fixed-width text table.
    pub fn table(&self) -> String {
        let mut t = String::new();
        let _ = writeln!(t, "scenario: {}", self.scenario);
        let _ = writeln!(t, "{:<18}{:>12}{:>12}", "metric", "namo", "snamo");
        let rows: [(&str, String, String); 6] = [
            ("goals_reached", format!("{}/{}", self.namo.goals_reached, self.namo.goals), format!("{}/{}", self.snamo.goals_reached, self.snamo.goals)),
            ("path_length", format!("{:.3}", self.namo.path_length), format!("{:.3}", self.snamo.path_length)),
            ("pushes", self.namo.pushes.to_string(), self.snamo.pushes.to_string()),
            ("replans", self.namo.replans.to_string(), self.snamo.replans.to_string()),
            ("taboo_violations", self.namo.taboo_violations.to_string(), self.snamo.taboo_violations.to_string()),
            ("steps", self.namo.steps.to_string(), self.snamo.steps.to_string()),
        ];
        for (name, a, b) in rows {
            let _ = writeln!(t, "{name:<18}{a:>12}{b:>12}");
        }
        t
    }
}

/// Runs the scenario in both modes and writes `compare.json`,
/// `compare.txt`, and each mode's run outputs under `namo/` and `snamo/`.
/// Succeeds whenever both runs complete, whatever their goal outcomes.
pub fn compare(scenario: &Path, out_dir: &Path) -> Result<Comparison, CliError> {
    let spec = load_scenario(scenario)?;
    let (namo, snamo) = std::thread::scope(|s| {
        let namo = s.spawn(|| simulate(&spec, Mode::Namo, spec.step_budget));
        let snamo = simulate(&spec, Mode::Snamo, spec.step_budget);
        (namo.join().expect("namo run panicked"), snamo)
    });
    let (namo, snamo) = (namo?, snamo?);
    write_outputs(&spec, &namo, &out_dir.join("namo"), false)?;
    write_outputs(&spec, &snamo, &out_dir.join("snamo"), false)?;
    let cmp = Comparison {
        scenario: spec.name.clone(),
        namo: namo.summary,
        snamo: snamo.summary,
    };
    write_json(&out_dir.join("compare.json"), &cmp)?;
    let txt = out_dir.join("compare.txt");
    fs::write(&txt, cmp.table()).map_err(output_error(&txt))?;
    Ok(cmp)
}
