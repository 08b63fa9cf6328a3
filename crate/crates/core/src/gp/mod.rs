//! Exact Gaussian-process machinery: kernels, mean functions, marginals, and conditioning.

pub mod empirical;
pub mod kernel;
pub mod model;
pub mod params;

pub use empirical::{empirical_gp, EmpiricalGp};
pub use kernel::KernelFamily;
pub use model::{
    condition, log_marginal_likelihood, prior_marginal, GaussianMarginal, GpModel, GpPrior, ObservationSet,
    PosteriorGp,
};
pub use params::{Architecture, GpParams, ParamLayout, MLP_WIDTH, MODEL_DOC_HEADER};
