use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{ClassifierError, Loss, TrainConfig};
use crate::features::SparseVector;

/// Examples used to pick the initial learning rate.
const CALIBRATION_SAMPLES: usize = 1000;
/// Divisor size that triggers folding the lazy scales into the vectors.
const RENORM_LIMIT: f64 = 1e5;

/// A trained binary separator `f(x) = w·x + b` and its per-epoch objective.
#[derive(Clone, Debug, PartialEq)]
pub struct BinaryModel {
    pub weights: Vec<f64>,
    pub bias: f64,
    /// Objective of the retained iterate after each epoch.
    pub trace: Vec<f64>,
}

/// Seeded per-epoch visiting orders.
pub fn epoch_orders(n: usize, epochs: usize, seed: u64) -> Vec<Vec<usize>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..epochs)
        .map(|_| {
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut rng);
            order
        })
        .collect()
}

/// `½‖w‖² + C Σ_i s_i ℓ(y_i (w·x_i + b))`, summed in the order given.
#[allow(clippy::too_many_arguments)]
pub fn binary_objective(
    weights: &[f64],
    bias: f64,
    x: &[SparseVector],
    y: &[bool],
    sample_weights: &[f64],
    c: f64,
    loss: Loss,
    order: impl IntoIterator<Item = usize>,
) -> f64 {
    let reg = 0.5 * weights.iter().map(|w| w * w).sum::<f64>();
    let data: f64 = order
        .into_iter()
        .map(|i| sample_weights[i] * loss.value(sign(y[i]) * (x[i].dot_dense(weights) + bias)))
        .sum();
    reg + c * data
}

fn sign(positive: bool) -> f64 {
    if positive {
        1.0
    } else {
        -1.0
    }
}

/// Weight vector with lazy scaling and lazy averaging.
///
/// The current iterate is `w / w_div`; the running average is
/// `(a + w_frac · w) / a_div`.
struct Averaged {
    w: Vec<f64>,
    w_div: f64,
    a: Vec<f64>,
    a_div: f64,
    w_frac: f64,
    bias: f64,
    avg_bias: f64,
}

impl Averaged {
    fn new(dim: usize) -> Self {
        Averaged {
            w: vec![0.0; dim],
            w_div: 1.0,
            a: vec![0.0; dim],
            a_div: 1.0,
            w_frac: 0.0,
            bias: 0.0,
            avg_bias: 0.0,
        }
    }

    fn renorm(&mut self) {
        if self.w_div != 1.0 || self.a_div != 1.0 || self.w_frac != 0.0 {
            for (a, w) in self.a.iter_mut().zip(&self.w) {
                *a = (*a + self.w_frac * w) / self.a_div;
            }
            for w in &mut self.w {
                *w /= self.w_div;
            }
            self.w_div = 1.0;
            self.a_div = 1.0;
            self.w_frac = 0.0;
        }
    }

    /// One step on example `(x, y)` with step size `eta`, regularization
    /// `lambda`, example weight `s` and averaging rate `mu`.
    #[allow(clippy::too_many_arguments)]
    fn step(&mut self, x: &SparseVector, y: f64, s: f64, eta: f64, lambda: f64, mu: f64, loss: Loss) {
        let score = x.dot_dense(&self.w) / self.w_div + self.bias;
        self.w_div /= 1.0 - eta * lambda;
        if self.w_div > RENORM_LIMIT {
            self.renorm();
        }
        let d = s * loss.neg_derivative(y * score);
        let etd = eta * d * y * self.w_div;
        if d != 0.0 {
            for (i, v) in x.iter() {
                self.w[i] += etd * v;
            }
        }
        if mu >= 1.0 {
            self.a.iter_mut().for_each(|a| *a = 0.0);
            self.a_div = self.w_div;
            self.w_frac = 1.0;
        } else if mu > 0.0 {
            if d != 0.0 {
                for (i, v) in x.iter() {
                    self.a[i] -= self.w_frac * etd * v;
                }
            }
            self.a_div /= 1.0 - mu;
            if self.a_div > RENORM_LIMIT || self.w_div > RENORM_LIMIT {
                self.renorm();
            }
            self.w_frac += mu * self.a_div / self.w_div;
        }
        self.bias += eta * d * y;
        self.avg_bias += mu.min(1.0) * (self.bias - self.avg_bias);
    }

    fn averaged(&self) -> Vec<f64> {
        self.a
            .iter()
            .zip(&self.w)
            .map(|(a, w)| (a + self.w_frac * w) / self.a_div)
            .collect()
    }

    fn current(&self) -> Vec<f64> {
        self.w.iter().map(|w| w / self.w_div).collect()
    }
}

struct Problem<'a> {
    x: &'a [SparseVector],
    y: &'a [bool],
    s: &'a [f64],
    dim: usize,
    c: f64,
    lambda: f64,
    loss: Loss,
}

impl Problem<'_> {
    fn objective(&self, w: &[f64], b: f64, order: &[usize]) -> f64 {
        binary_objective(w, b, self.x, self.y, self.s, self.c, self.loss, order.iter().copied())
    }

    /// Plain SGD pass over a prefix of the first order, to rank `eta0` candidates.
    fn trial(&self, eta0: f64, sample: &[usize]) -> f64 {
        let mut state = Averaged::new(self.dim);
        for (t, &i) in sample.iter().enumerate() {
            let eta = eta0 / (1.0 + self.lambda * eta0 * t as f64);
            state.step(&self.x[i], sign(self.y[i]), self.s[i], eta, self.lambda, 0.0, self.loss);
        }
        let w = state.current();
        let obj = self.objective(&w, state.bias, sample);
        if obj.is_finite() {
            obj
        } else {
            f64::INFINITY
        }
    }

    fn calibrate(&self, order: &[usize]) -> f64 {
        let sample = &order[..order.len().min(CALIBRATION_SAMPLES)];
        let cap = 0.5 / self.lambda;
        let mut best = (f64::INFINITY, 1.0f64.min(cap));
        for k in -10..=10 {
            let eta0 = 2f64.powi(k);
            if eta0 > cap {
                break;
            }
            let obj = self.trial(eta0, sample);
            if obj < best.0 {
                best = (obj, eta0);
            }
        }
        best.1
    }
}

/// Trains `min_w,b ½‖w‖² + C Σ_i s_i ℓ(y_i (w·x_i + b))` with shuffled
/// epochs, step `η_t = 1/(λ(t + t0))` where `λ = 1/(C n)`, and iterate
/// averaging from the second epoch on. The bias is not regularized.
pub fn train_binary(
    x: &[SparseVector],
    y: &[bool],
    sample_weights: Option<&[f64]>,
    cfg: &TrainConfig,
) -> Result<BinaryModel, ClassifierError> {
    let orders = epoch_orders(x.len(), cfg.epochs, cfg.seed);
    train_binary_ordered(x, y, sample_weights, cfg, &orders)
}

/// Like [`train_binary`] with explicit visiting orders, one per epoch.
///
/// `t0` comes from the best `η0 = 1/(λ t0)` among powers of two on a
/// prefix of the first order. At each epoch end the averaged iterate is
/// kept only if it lowers the objective, so the trace never increases.
pub fn train_binary_ordered(
    x: &[SparseVector],
    y: &[bool],
    sample_weights: Option<&[f64]>,
    cfg: &TrainConfig,
    orders: &[Vec<usize>],
) -> Result<BinaryModel, ClassifierError> {
    cfg.validate()?;
    let n = x.len();
    if n < 2 {
        return Err(ClassifierError::TooFewExamples(n));
    }
    if y.len() != n {
        return Err(ClassifierError::LengthMismatch { features: n, labels: y.len() });
    }
    let dim = x[0].dim();
    if let Some(bad) = x.iter().find(|v| v.dim() != dim) {
        return Err(ClassifierError::DimensionMismatch { expected: dim, found: bad.dim() });
    }
    let uniform = vec![1.0; n];
    let s = sample_weights.unwrap_or(&uniform);
    if s.len() != n || s.iter().any(|w| !(*w > 0.0 && w.is_finite())) {
        return Err(ClassifierError::InvalidConfig("sample weights must be positive, one per example".into()));
    }
    if orders.is_empty() || orders.iter().any(|o| !is_permutation(o, n)) {
        return Err(ClassifierError::InvalidConfig("each epoch order must be a permutation of 0..n".into()));
    }

    let lambda = 1.0 / (cfg.c * n as f64);
    let problem = Problem { x, y, s, dim, c: cfg.c, lambda, loss: cfg.loss };
    let eta0 = problem.calibrate(&orders[0]);
    let t0 = 1.0 / (lambda * eta0);

    let mut state = Averaged::new(dim);
    let mut t = 0usize;
    let mut kept = (vec![0.0; dim], 0.0, problem.objective(&vec![0.0; dim], 0.0, &orders[0]));
    let mut trace = Vec::with_capacity(orders.len());
    for (epoch, order) in orders.iter().enumerate() {
        for (k, &i) in order.iter().enumerate() {
            let eta = 1.0 / (lambda * (t as f64 + t0));
            // Uniform averaging over every step from the second epoch on.
            let mu = if epoch == 0 { 0.0 } else { 1.0 / ((epoch - 1) * n + k + 1) as f64 };
            state.step(&x[i], sign(y[i]), s[i], eta, lambda, mu, cfg.loss);
            t += 1;
        }
        let (w, b) = if epoch == 0 {
            (state.current(), state.bias)
        } else {
            (state.averaged(), state.avg_bias)
        };
        let obj = problem.objective(&w, b, &orders[0]);
        if obj <= kept.2 {
            kept = (w, b, obj);
        }
        trace.push(kept.2);
    }

    let (weights, bias, _) = kept;
    if weights.iter().any(|w| !w.is_finite()) || !bias.is_finite() {
        return Err(ClassifierError::InvalidModel("training diverged".into()));
    }
    Ok(BinaryModel { weights, bias, trace })
}

fn is_permutation(order: &[usize], n: usize) -> bool {
    if order.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    order.iter().all(|&i| i < n && !std::mem::replace(&mut seen[i], true))
}
