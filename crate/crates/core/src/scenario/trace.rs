//! Line-delimited JSON traces: one `StepEvent` per line, fields in
//! declaration order.

use std::fs;
use std::io::{BufRead, BufReader};
use std::path::Path;

use super::ScenarioError;
use crate::simulator::{ExecutionTrace, StepEvent};

pub fn trace_to_string(trace: &ExecutionTrace) -> Result<String, ScenarioError> {
    let mut out = String::new();
    for e in &trace.events {
        out.push_str(&serde_json::to_string(e).map_err(|e| ScenarioError::Serialize(e.to_string()))?);
        out.push('\n');
    }
    Ok(out)
}

/// Writes the events of `trace`. An empty trace gives an empty file.
pub fn write_trace(trace: &ExecutionTrace, path: impl AsRef<Path>) -> Result<(), ScenarioError> {
    let path = path.as_ref();
    fs::write(path, trace_to_string(trace)?).map_err(|e| ScenarioError::io(path, e))
}

/// Reads a trace written by [`write_trace`]. Metrics are recomputed from
/// the events.
pub fn read_trace(path: impl AsRef<Path>) -> Result<ExecutionTrace, ScenarioError> {
    let path = path.as_ref();
    let file = fs::File::open(path).map_err(|e| ScenarioError::io(path, e))?;
    let mut events = Vec::new();
    for (k, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| ScenarioError::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let e: StepEvent = serde_json::from_str(&line).map_err(|e| ScenarioError::Parse {
            path: path.to_path_buf(),
            message: format!("line {}: {e}", k + 1),
        })?;
        events.push(e);
    }
    Ok(ExecutionTrace::from_events(events))
}
