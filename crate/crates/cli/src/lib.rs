//! Library surface of the command-line tool: run configuration, report
//! schema, and the command pipelines, shared by the binary and its tests.

pub mod config;
pub mod pipeline;
pub mod report;
