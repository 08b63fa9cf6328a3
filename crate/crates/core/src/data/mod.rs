//! Dataset documents, warping, matching-subset extraction, and synthetic task generation.

pub mod dataset;
pub mod matching;
pub mod synth;
pub mod warp;

pub use dataset::{
    dataset_to_string, load_dataset, parse_dataset, save_dataset, DatasetDocument, MultiTaskDataset, RawTrial, Task,
    TaskDocument,
};
pub use matching::{extract_matching, MATCH_TOL};
pub use synth::{default_grid_per_dim, synth_generate, SynthConfig, SynthOutput, TestFunction, DEFAULT_FEATURES};
pub use warp::{lower_median, online_map, warp_output, OutputWarping, INFEASIBLE_VALUE};

use crate::error::Result;
use crate::space::SearchSpace;

/// Raw point to the unit box.
pub fn warp_input(x_raw: &[f64], space: &SearchSpace) -> Result<Vec<f64>> {
    space.warp(x_raw)
}

/// Unit-box point back to raw units.
pub fn unwarp_input(point: &[f64], space: &SearchSpace) -> Result<Vec<f64>> {
    space.unwarp(point)
}
