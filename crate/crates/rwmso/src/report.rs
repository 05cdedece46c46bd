//! Machine-readable command reports.

use serde::Serialize;

/// Version of the JSON layout of [`RunReport`].
pub const REPORT_SCHEMA: u32 = 1;

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct RunReport {
    pub schema: u32,
    pub command: &'static str,
    /// `true`/`false`, an optimum, a width or a count, depending on the
    /// command.
    pub answer: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub char_tree_nodes: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parse_tree_nodes: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub peak_interned: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    pub wall_time_ms: f64,
}

impl RunReport {
    pub fn new(command: &'static str, answer: serde_json::Value) -> RunReport {
        RunReport {
            schema: REPORT_SCHEMA,
            command,
            answer,
            char_tree_nodes: None,
            parse_tree_nodes: None,
            peak_interned: None,
            depth: None,
            wall_time_ms: 0.0,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }
}
