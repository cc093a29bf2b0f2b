//! File formats, run configuration and the command pipeline.

pub mod commands;
pub mod config;
pub mod counts;
pub mod graph_file;
pub mod plan_file;
pub mod report;

pub use commands::{
    cmd_analyze, cmd_extract, cmd_orbit, cmd_simulate, cmd_sweep, load_counts, resource_name,
    ExtractOutput, OrbitListing,
};
pub use config::{Pipeline, ProtocolChoice, Roles, RunConfig, SweepConfig, TargetConfig};
pub use counts::{CountsFile, CountsMeta};
pub use graph_file::{parse_graph, parse_graph_str, write_graph};
pub use plan_file::PlanFile;
pub use report::{
    round_significant, sha256_hex, sweep_csv, to_json_rounded, Report, SweepSummary, ToolInfo,
    SIGNIFICANT_DIGITS,
};
