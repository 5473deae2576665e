//! One-vs-rest linear SVM trained by averaged SGD on the primal objective.

mod model;
mod sgd;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use model::{argmax, ClassTraces, train, train_ordered, train_with_trace, LinearModel, ModelMetadata};
pub use sgd::{binary_objective, epoch_orders, train_binary, train_binary_ordered, BinaryModel};

#[derive(Debug, Error)]
pub enum ClassifierError {
    #[error("need at least 2 training examples, got {0}")]
    TooFewExamples(usize),
    #[error("{features} feature vectors but {labels} labels")]
    LengthMismatch { features: usize, labels: usize },
    #[error("training labels contain a single class")]
    SingleClass,
    #[error("feature dimension {found}, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid training config: {0}")]
    InvalidConfig(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Loss {
    #[default]
    Hinge,
    SquaredHinge,
}

impl Loss {
    /// Loss at margin `z = y·f(x)`.
    pub fn value(self, z: f64) -> f64 {
        let slack = (1.0 - z).max(0.0);
        match self {
            Loss::Hinge => slack,
            Loss::SquaredHinge => slack * slack,
        }
    }

    /// Negative derivative with respect to `z`.
    fn neg_derivative(self, z: f64) -> f64 {
        let slack = (1.0 - z).max(0.0);
        match self {
            Loss::Hinge => {
                if slack > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Loss::SquaredHinge => 2.0 * slack,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassWeight {
    #[default]
    Uniform,
    /// Each example weighs `n / (K · count(class))`, scaling C per class.
    Balanced,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainConfig {
    pub c: f64,
    pub epochs: usize,
    pub seed: u64,
    pub loss: Loss,
    pub class_weight: ClassWeight,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            c: 1.0,
            epochs: 15,
            seed: 0,
            loss: Loss::Hinge,
            class_weight: ClassWeight::Uniform,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<(), ClassifierError> {
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(ClassifierError::InvalidConfig(format!("C must be positive, got {}", self.c)));
        }
        if self.epochs == 0 {
            return Err(ClassifierError::InvalidConfig("epochs must be at least 1".into()));
        }
        Ok(())
    }
}
