//! File formats, reports and the benchmark harness behind the `rwmso`
//! command-line tool.

pub mod bench;
pub mod format;
pub mod report;
