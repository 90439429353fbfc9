//! The benchmark runner: configuration, the (threshold x transform) grid,
//! table emission, and the watermark-survival study.

pub mod config;
pub mod emit;
pub mod robustness;
pub mod runner;

pub use config::{
    BenchConfig, ConfigOverlay, MetricReference, OutputFormat, TransformChoice, WatermarkSetting,
};
pub use emit::emit;
pub use robustness::{
    render_robustness, run_robustness_study, run_robustness_study_on, ComparisonCell,
    RobustnessReport, SurvivalEntry,
};
pub use runner::{run_matrix, run_matrix_on, BenchRow, WatermarkScore};
