//! Pre-training objectives and the optimizer loop that fits a GP prior to many tasks.

pub mod gradient;
pub mod moments;
pub mod objectives;
pub mod optim;
pub mod train;

pub use crate::data::MultiTaskDataset;
pub use gradient::{finite_difference_gradient, objective_gradient, DifferentiableObjective, FnObjective, GradientMode};
pub use moments::{estimate_moments, MatchingMoments};
pub use objectives::{
    combined_objective, combined_value_and_grad, kl_epsilon, kl_objective, kl_objective_with, kl_value_and_grad, moment_rank, nll_objective,
    nll_value_and_grad, pseudo_kl, task_nll, KlForm, RANK_THRESHOLD,
};
pub use optim::{IterLog, LOG_HEADER};
pub use train::{
    initial_params, pretrain, pretrain_from, pretrain_logged, BatchSize, ObjectiveKind, TrainConfig, TrainReport,
    TrainingObjective,
};
