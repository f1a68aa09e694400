//! Multilayer perceptron trained by online backpropagation with momentum,
//! plus the dataset split and evaluation used around it.

mod data;
mod model;
mod rng;
mod train;

pub use data::{evaluate, fit_feature_norm, split_dataset, Dataset, EvalReport, Sample};
pub use model::{init_model, sigmoid, Gradients, Layer, MlpModel, MODEL_MAGIC, MODEL_VERSION};
pub use rng::XorShift64;
pub use train::{
    target_for, train, train_on, TrainConfig, TrainingOutcome, TARGET_HIGH, TARGET_LOW,
};
