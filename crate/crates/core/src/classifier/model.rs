use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::sgd::{epoch_orders, train_binary_ordered};
use super::{ClassWeight, ClassifierError, Loss, TrainConfig};
use crate::corpus::{label_counts, Emotion};
use crate::features::SparseVector;

/// Per-class objective traces, one value per epoch.
pub type ClassTraces = Vec<(Emotion, Vec<f64>)>;

const FORMAT: &str = "emoreact-model";
const VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelMetadata {
    pub c: f64,
    pub epochs: usize,
    pub seed: u64,
    pub loss: Loss,
    pub class_weight: ClassWeight,
    pub dim: usize,
    pub n_train: usize,
}

/// One weight vector and bias per class seen in training, classes in
/// ordinal order.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearModel {
    classes: Vec<Emotion>,
    weights: Vec<Vec<f64>>,
    biases: Vec<f64>,
    metadata: ModelMetadata,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    format: String,
    version: u32,
    classes: Vec<Emotion>,
    biases: Vec<f64>,
    weights: Vec<Vec<f64>>,
    metadata: ModelMetadata,
}

impl LinearModel {
    pub fn new(
        classes: Vec<Emotion>,
        weights: Vec<Vec<f64>>,
        biases: Vec<f64>,
        metadata: ModelMetadata,
    ) -> Result<Self, ClassifierError> {
        let bad = |m: String| Err(ClassifierError::InvalidModel(m));
        if classes.is_empty() {
            return bad("no classes".into());
        }
        if !classes.windows(2).all(|p| p[0] < p[1]) {
            return bad("classes must be distinct and in ordinal order".into());
        }
        if weights.len() != classes.len() || biases.len() != classes.len() {
            return bad(format!(
                "{} classes but {} weight vectors and {} biases",
                classes.len(),
                weights.len(),
                biases.len()
            ));
        }
        if let Some(w) = weights.iter().find(|w| w.len() != metadata.dim) {
            return bad(format!("weight vector of length {} in a model of dimension {}", w.len(), metadata.dim));
        }
        if weights.iter().flatten().chain(&biases).any(|v| !v.is_finite()) {
            return bad("non-finite parameter".into());
        }
        Ok(LinearModel { classes, weights, biases, metadata })
    }

    pub fn classes(&self) -> &[Emotion] {
        &self.classes
    }

    pub fn weights(&self, class: Emotion) -> Option<&[f64]> {
        self.position(class).map(|i| self.weights[i].as_slice())
    }

    pub fn bias(&self, class: Emotion) -> Option<f64> {
        self.position(class).map(|i| self.biases[i])
    }

    fn position(&self, class: Emotion) -> Option<usize> {
        self.classes.iter().position(|&c| c == class)
    }

    pub fn metadata(&self) -> &ModelMetadata {
        &self.metadata
    }

    pub fn dim(&self) -> usize {
        self.metadata.dim
    }

    /// `w_c · x + b_c` for every class, in ordinal order.
    pub fn decision_scores(&self, x: &SparseVector) -> Result<Vec<(Emotion, f64)>, ClassifierError> {
        if x.dim() != self.dim() {
            return Err(ClassifierError::DimensionMismatch { expected: self.dim(), found: x.dim() });
        }
        Ok(self
            .classes
            .iter()
            .zip(self.weights.iter().zip(&self.biases))
            .map(|(&c, (w, b))| (c, x.dot_dense(w) + b))
            .collect())
    }

    pub fn predict(&self, x: &SparseVector) -> Result<Emotion, ClassifierError> {
        Ok(argmax(&self.decision_scores(x)?).expect("model has classes"))
    }

    pub fn predict_many(&self, xs: &[SparseVector]) -> Result<Vec<Emotion>, ClassifierError> {
        xs.par_iter().map(|x| self.predict(x)).collect()
    }

    pub fn to_json(&self) -> String {
        let file = ModelFile {
            format: FORMAT.into(),
            version: VERSION,
            classes: self.classes.clone(),
            biases: self.biases.clone(),
            weights: self.weights.clone(),
            metadata: self.metadata.clone(),
        };
        let mut json = serde_json::to_string(&file).expect("model serializes");
        json.push('\n');
        json
    }

    pub fn from_json(json: &str) -> Result<Self, ClassifierError> {
        let file: ModelFile =
            serde_json::from_str(json).map_err(|e| ClassifierError::InvalidModel(e.to_string()))?;
        if file.format != FORMAT {
            return Err(ClassifierError::InvalidModel(format!("not a model file (format {:?})", file.format)));
        }
        if file.version != VERSION {
            return Err(ClassifierError::InvalidModel(format!("unsupported model version {}", file.version)));
        }
        LinearModel::new(file.classes, file.weights, file.biases, file.metadata)
    }
}

/// Highest score; ties go to the earliest entry.
pub fn argmax(scores: &[(Emotion, f64)]) -> Option<Emotion> {
    let mut best: Option<(Emotion, f64)> = None;
    for &(c, s) in scores {
        if best.is_none_or(|(_, b)| s > b) {
            best = Some((c, s));
        }
    }
    best.map(|(c, _)| c)
}

/// Trains one binary separator per class present in `y`.
pub fn train(x: &[SparseVector], y: &[Emotion], cfg: &TrainConfig) -> Result<LinearModel, ClassifierError> {
    train_with_trace(x, y, cfg).map(|(m, _)| m)
}

/// Also returns each class's per-epoch objective trace.
pub fn train_with_trace(
    x: &[SparseVector],
    y: &[Emotion],
    cfg: &TrainConfig,
) -> Result<(LinearModel, ClassTraces), ClassifierError> {
    cfg.validate()?;
    train_ordered(x, y, cfg, &epoch_orders(x.len(), cfg.epochs, cfg.seed))
}

/// Trains with explicit per-epoch visiting orders shared by all classes.
pub fn train_ordered(
    x: &[SparseVector],
    y: &[Emotion],
    cfg: &TrainConfig,
    orders: &[Vec<usize>],
) -> Result<(LinearModel, ClassTraces), ClassifierError> {
    cfg.validate()?;
    if x.len() != y.len() {
        return Err(ClassifierError::LengthMismatch { features: x.len(), labels: y.len() });
    }
    if x.len() < 2 {
        return Err(ClassifierError::TooFewExamples(x.len()));
    }
    let counts = label_counts(y);
    let classes: Vec<Emotion> = Emotion::ALL.into_iter().filter(|c| counts[c.index()] > 0).collect();
    if classes.len() < 2 {
        return Err(ClassifierError::SingleClass);
    }
    let sample_weights: Option<Vec<f64>> = match cfg.class_weight {
        ClassWeight::Uniform => None,
        ClassWeight::Balanced => {
            let n = y.len() as f64;
            let k = classes.len() as f64;
            Some(y.iter().map(|c| n / (k * counts[c.index()] as f64)).collect())
        }
    };

    let fitted = classes
        .par_iter()
        .map(|&class| {
            let target: Vec<bool> = y.iter().map(|&c| c == class).collect();
            train_binary_ordered(x, &target, sample_weights.as_deref(), cfg, orders)
        })
        .collect::<Result<Vec<_>, _>>()?;

    let metadata = ModelMetadata {
        c: cfg.c,
        epochs: orders.len(),
        seed: cfg.seed,
        loss: cfg.loss,
        class_weight: cfg.class_weight,
        dim: x[0].dim(),
        n_train: x.len(),
    };
    let traces = classes.iter().copied().zip(fitted.iter().map(|m| m.trace.clone())).collect();
    let (weights, biases) = fitted.into_iter().map(|m| (m.weights, m.bias)).unzip();
    Ok((LinearModel::new(classes, weights, biases, metadata)?, traces))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{synth_corpus, SynthSpec};
    use crate::features::{FeatureConfig, Featurizer};
    use proptest::prelude::*;

    fn meta(dim: usize) -> ModelMetadata {
        ModelMetadata {
            c: 1.0,
            epochs: 1,
            seed: 0,
            loss: Loss::Hinge,
            class_weight: ClassWeight::Uniform,
            dim,
            n_train: 0,
        }
    }

    fn hand_model() -> LinearModel {
        LinearModel::new(
            vec![Emotion::Anger, Emotion::Joy],
            vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            vec![0.0, 0.5],
            meta(2),
        )
        .unwrap()
    }

    #[test]
    fn hand_scores() {
        let m = hand_model();
        let x = SparseVector::from_pairs(2, vec![(0, 3.0)]).unwrap();
        assert_eq!(m.decision_scores(&x).unwrap(), [(Emotion::Anger, 3.0), (Emotion::Joy, 0.5)]);
        let zero = SparseVector::zeros(2);
        assert_eq!(m.decision_scores(&zero).unwrap(), [(Emotion::Anger, 0.0), (Emotion::Joy, 0.5)]);
        assert!(matches!(
            m.decision_scores(&SparseVector::zeros(3)),
            Err(ClassifierError::DimensionMismatch { expected: 2, found: 3 })
        ));
    }

    #[test]
    fn argmax_ties_and_order() {
        let s = |v: [f64; 4]| Emotion::ALL.into_iter().zip(v).collect::<Vec<_>>();
        assert_eq!(argmax(&s([1.0, 3.0, 2.0, 0.0])), Some(Emotion::Joy));
        assert_eq!(argmax(&s([2.0; 4])), Some(Emotion::Anger));
        assert_eq!(argmax(&s([8.0, 10.0, 9.0, 7.0])), Some(Emotion::Joy));
        assert_eq!(argmax(&[]), None);
    }

    #[test]
    fn invalid_models_rejected() {
        assert!(LinearModel::new(vec![Emotion::Joy, Emotion::Anger], vec![vec![0.0], vec![0.0]], vec![0.0; 2], meta(1)).is_err());
        assert!(LinearModel::new(vec![Emotion::Joy], vec![vec![f64::NAN]], vec![0.0], meta(1)).is_err());
        assert!(LinearModel::new(vec![Emotion::Joy], vec![vec![0.0, 1.0]], vec![0.0], meta(1)).is_err());
    }

    #[test]
    fn single_class_and_mismatch() {
        let x = vec![SparseVector::zeros(2); 3];
        let cfg = TrainConfig::default();
        assert!(matches!(train(&x, &[Emotion::Joy; 3], &cfg), Err(ClassifierError::SingleClass)));
        assert!(matches!(train(&x, &[Emotion::Joy; 2], &cfg), Err(ClassifierError::LengthMismatch { .. })));
        let bad = TrainConfig { c: 0.0, ..cfg };
        assert!(matches!(train(&x, &[Emotion::Joy, Emotion::Anger, Emotion::Joy], &bad), Err(ClassifierError::InvalidConfig(_))));
    }

    fn planted(n: usize, noise: f64, seed: u64) -> (Vec<SparseVector>, Vec<Emotion>) {
        let docs = synth_corpus(&SynthSpec::new(n, 20, noise, seed)).unwrap();
        let texts: Vec<&str> = docs.iter().map(|d| d.text()).collect();
        let f = Featurizer::fit(&texts, &FeatureConfig::tfidf_only(), None, None).unwrap();
        (f.transform_many(&texts), docs.iter().map(|d| d.label()).collect())
    }

    #[test]
    fn planted_corpus_is_fit_exactly() {
        let (x, y) = planted(400, 0.0, 11);
        let (m, traces) = train_with_trace(&x, &y, &TrainConfig::default()).unwrap();
        assert_eq!(m.classes(), Emotion::ALL);
        assert_eq!(m.predict_many(&x).unwrap(), y);
        for (_, trace) in traces {
            assert!(trace.windows(2).all(|p| p[1] <= p[0]));
        }
    }

    #[test]
    fn deterministic_and_round_trips() {
        let (x, y) = planted(120, 0.1, 5);
        let cfg = TrainConfig { class_weight: ClassWeight::Balanced, loss: Loss::SquaredHinge, ..Default::default() };
        let a = train(&x, &y, &cfg).unwrap();
        let b = train(&x, &y, &cfg).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        let back = LinearModel::from_json(&a.to_json()).unwrap();
        assert_eq!(back, a);
        assert_eq!(back.to_json(), a.to_json());
        assert!(LinearModel::from_json(&a.to_json().replace("\"version\":1", "\"version\":7")).is_err());
    }

    #[test]
    fn permuted_data_with_matching_orders_gives_same_model() {
        let (x, y) = planted(60, 0.2, 9);
        let cfg = TrainConfig { epochs: 4, seed: 21, ..Default::default() };
        let orders = epoch_orders(x.len(), cfg.epochs, cfg.seed);
        let (base, _) = train_ordered(&x, &y, &cfg, &orders).unwrap();

        // New position p holds old example perm[p]; old index i sits at inverse[i].
        let perm = epoch_orders(x.len(), 1, 99).remove(0);
        let mut inverse = vec![0; x.len()];
        for (p, &i) in perm.iter().enumerate() {
            inverse[i] = p;
        }
        let px: Vec<_> = perm.iter().map(|&i| x[i].clone()).collect();
        let py: Vec<_> = perm.iter().map(|&i| y[i]).collect();
        let porders: Vec<Vec<usize>> = orders.iter().map(|o| o.iter().map(|&i| inverse[i]).collect()).collect();
        let (permuted, _) = train_ordered(&px, &py, &cfg, &porders).unwrap();
        assert_eq!(permuted.to_json(), base.to_json());
    }

    proptest! {
        #[test]
        fn prediction_invariant_under_shared_monotone_map(scores in prop::collection::vec(-50.0f64..50.0, 4), shift in -10.0f64..10.0, scale in 0.1f64..10.0) {
            let base: Vec<_> = Emotion::ALL.into_iter().zip(scores.iter().copied()).collect();
            let moved: Vec<_> = base.iter().map(|&(c, s)| (c, (s * scale + shift).exp())).collect();
            prop_assert_eq!(argmax(&base), argmax(&moved));
        }

        #[test]
        fn scores_are_linear(v in prop::collection::vec(-3.0f64..3.0, 2)) {
            let m = hand_model();
            let x = SparseVector::from_dense(&v);
            let mut x2 = x.clone();
            x2.scale(2.0);
            let s1 = m.decision_scores(&x).unwrap();
            let s2 = m.decision_scores(&x2).unwrap();
            for (((_, a), (_, b)), bias) in s1.iter().zip(&s2).zip([0.0, 0.5]) {
                prop_assert!(((b - bias) - 2.0 * (a - bias)).abs() < 1e-9);
            }
        }
    }
}
