//! Configuration, experiment drivers, post-processing and output writers.

pub mod config;
pub mod homogenize;
pub mod impact;
pub mod metrics;
pub mod model;
pub mod output;
pub mod presets;
pub mod wave;

pub use config::{ScenarioConfig, ScenarioKind};
pub use homogenize::run_homogenize_sweep;
pub use impact::{run_impact, ImpactOptions, ImpactReport, RunMetrics};
pub use wave::{run_wave_modulus, WaveReport};
