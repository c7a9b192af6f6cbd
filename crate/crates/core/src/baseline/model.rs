//! Multinomial logistic regression over sparse features.

#![allow(clippy::needless_range_loop)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::features::SparseVector;
use crate::error::{Error, Result};
use crate::label::Label;

pub const N_CLASSES: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainParams {
    pub epochs: usize,
    pub learning_rate: f64,
    pub l2: f64,
    pub batch_size: usize,
}

impl Default for TrainParams {
    fn default() -> Self {
        TrainParams {
            epochs: 40,
            learning_rate: 0.2,
            l2: 1e-4,
            batch_size: 32,
        }
    }
}

/// Weights are stored class-major: row `c` holds the weights of class `c`
/// in [`Label::ALL`] order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    pub n_features: usize,
    pub weights: Vec<f64>,
    pub bias: [f64; N_CLASSES],
    pub params: TrainParams,
    /// Regularized mean training loss after each epoch.
    pub loss_history: Vec<f64>,
}

fn softmax(logits: [f64; N_CLASSES]) -> [f64; N_CLASSES] {
    let max = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut out = logits.map(|z| (z - max).exp());
    let sum: f64 = out.iter().sum();
    out.iter_mut().for_each(|p| *p /= sum);
    out
}

/// Unaveraged gradient of the cross-entropy, without regularization.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientSum {
    pub loss: f64,
    pub weights: Vec<f64>,
    pub bias: [f64; N_CLASSES],
}

impl LinearModel {
    pub fn zeros(n_features: usize, params: TrainParams) -> Self {
        LinearModel {
            n_features,
            weights: vec![0.0; N_CLASSES * n_features],
            bias: [0.0; N_CLASSES],
            params,
            loss_history: Vec::new(),
        }
    }

    pub fn logits(&self, x: &SparseVector) -> [f64; N_CLASSES] {
        let mut z = self.bias;
        for (i, v) in x.iter() {
            if i >= self.n_features {
                continue;
            }
            for (c, zc) in z.iter_mut().enumerate() {
                *zc += self.weights[c * self.n_features + i] * v;
            }
        }
        z
    }

    pub fn predict_proba(&self, x: &SparseVector) -> [f64; N_CLASSES] {
        softmax(self.logits(x))
    }

    /// Most probable class; ties resolve to the earlier class.
    pub fn predict(&self, x: &SparseVector) -> Label {
        let z = self.logits(x);
        let mut best = 0;
        for c in 1..N_CLASSES {
            if z[c] > z[best] {
                best = c;
            }
        }
        Label::from_index(best).expect("class index")
    }

    fn residual(&self, x: &SparseVector, y: Label) -> ([f64; N_CLASSES], f64) {
        let p = self.predict_proba(x);
        let loss = -p[y.index()].max(f64::MIN_POSITIVE).ln();
        let mut r = p;
        r[y.index()] -= 1.0;
        (r, loss)
    }

    /// Σ over examples of the cross-entropy and its gradient.
    pub fn gradient_sum(&self, xs: &[&SparseVector], ys: &[Label]) -> GradientSum {
        let residuals: Vec<([f64; N_CLASSES], f64)> = xs
            .par_iter()
            .zip(ys.par_iter())
            .with_min_len(64)
            .map(|(x, y)| self.residual(x, *y))
            .collect();
        let mut g = GradientSum {
            loss: 0.0,
            weights: vec![0.0; self.weights.len()],
            bias: [0.0; N_CLASSES],
        };
        for (x, (r, loss)) in xs.iter().zip(&residuals) {
            g.loss += loss;
            for c in 0..N_CLASSES {
                g.bias[c] += r[c];
                for (i, v) in x.iter() {
                    if i < self.n_features {
                        g.weights[c * self.n_features + i] += r[c] * v;
                    }
                }
            }
        }
        g
    }

    /// Mean cross-entropy plus `l2 / 2 * |W|^2` (biases are not penalized).
    pub fn objective(&self, xs: &[&SparseVector], ys: &[Label], l2: f64) -> f64 {
        let losses: Vec<f64> = xs
            .par_iter()
            .zip(ys.par_iter())
            .with_min_len(64)
            .map(|(x, y)| self.residual(x, *y).1)
            .collect();
        let n = xs.len().max(1) as f64;
        losses.iter().sum::<f64>() / n + 0.5 * l2 * self.weights.iter().map(|w| w * w).sum::<f64>()
    }

    /// Gradient of [`LinearModel::objective`].
    pub fn objective_gradient(
        &self,
        xs: &[&SparseVector],
        ys: &[Label],
        l2: f64,
    ) -> (Vec<f64>, [f64; N_CLASSES]) {
        let g = self.gradient_sum(xs, ys);
        let n = xs.len().max(1) as f64;
        let gw = g
            .weights
            .iter()
            .zip(&self.weights)
            .map(|(g, w)| g / n + l2 * w)
            .collect();
        (gw, g.bias.map(|b| b / n))
    }
}

/// Mini-batch gradient descent on the L2-regularized cross-entropy.
///
/// After every epoch the full objective is evaluated; an epoch that would
/// increase it is rolled back and the step size halved, so the recorded
/// loss never goes up.
pub fn train(
    features: &[SparseVector],
    labels: &[Label],
    n_features: usize,
    params: TrainParams,
    seed: u64,
) -> Result<LinearModel> {
    if features.len() != labels.len() {
        return Err(Error::Config("features and labels differ in length".into()));
    }
    for label in Label::ALL {
        if !labels.contains(&label) {
            return Err(Error::MissingClass(label));
        }
    }
    if params.epochs == 0 || params.batch_size == 0 || params.learning_rate.is_nan() || params.learning_rate <= 0.0 {
        return Err(Error::Config(
            "epochs, batch size and learning rate must be positive".into(),
        ));
    }
    let xs: Vec<&SparseVector> = features.iter().collect();
    let mut model = LinearModel::zeros(n_features, params);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..features.len()).collect();
    let mut lr = params.learning_rate;
    let mut loss = model.objective(&xs, labels, params.l2);

    for _ in 0..params.epochs {
        let snapshot = (model.weights.clone(), model.bias);
        order.shuffle(&mut rng);
        for batch in order.chunks(params.batch_size) {
            let bx: Vec<&SparseVector> = batch.iter().map(|&i| xs[i]).collect();
            let by: Vec<Label> = batch.iter().map(|&i| labels[i]).collect();
            let g = model.gradient_sum(&bx, &by);
            let scale = lr / batch.len() as f64;
            let decay = 1.0 - lr * params.l2;
            for (w, gw) in model.weights.iter_mut().zip(&g.weights) {
                *w = *w * decay - scale * gw;
            }
            for c in 0..N_CLASSES {
                model.bias[c] -= scale * g.bias[c];
            }
        }
        let next = model.objective(&xs, labels, params.l2);
        if next.is_finite() && next <= loss {
            loss = next;
        } else {
            (model.weights, model.bias) = snapshot;
            lr *= 0.5;
        }
        model.loss_history.push(loss);
    }
    Ok(model)
}

/// Largest relative error between the analytic gradient of the objective
/// and central finite differences, at random weights drawn from `seed`.
///
/// Relative error is `|a - n| / max(|a|, |n|, 1e-6)`.
pub fn gradient_check(
    n_features: usize,
    features: &[SparseVector],
    labels: &[Label],
    l2: f64,
    seed: u64,
) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut model = LinearModel::zeros(n_features, TrainParams::default());
    model.weights.iter_mut().for_each(|w| *w = rng.gen_range(-1.0..1.0));
    model.bias.iter_mut().for_each(|b| *b = rng.gen_range(-1.0..1.0));
    let xs: Vec<&SparseVector> = features.iter().collect();
    let (gw, gb) = model.objective_gradient(&xs, labels, l2);

    let h = 1e-5;
    let rel = |a: f64, n: f64| (a - n).abs() / a.abs().max(n.abs()).max(1e-6);
    let mut worst: f64 = 0.0;
    for k in 0..model.weights.len() {
        let orig = model.weights[k];
        model.weights[k] = orig + h;
        let up = model.objective(&xs, labels, l2);
        model.weights[k] = orig - h;
        let down = model.objective(&xs, labels, l2);
        model.weights[k] = orig;
        worst = worst.max(rel(gw[k], (up - down) / (2.0 * h)));
    }
    for c in 0..N_CLASSES {
        let orig = model.bias[c];
        model.bias[c] = orig + h;
        let up = model.objective(&xs, labels, l2);
        model.bias[c] = orig - h;
        let down = model.objective(&xs, labels, l2);
        model.bias[c] = orig;
        worst = worst.max(rel(gb[c], (up - down) / (2.0 * h)));
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense(v: &[f64]) -> SparseVector {
        SparseVector::from_dense(v)
    }

    #[test]
    fn separable_toy_set_is_fit_exactly() {
        let xs = vec![
            dense(&[1.0, 0.0]),
            dense(&[0.0, 1.0]),
            dense(&[0.0, 0.0]),
            dense(&[1.0, 1.0]),
        ];
        let ys = Label::ALL.to_vec();
        let params = TrainParams {
            epochs: 300,
            learning_rate: 1.0,
            l2: 0.0,
            batch_size: 2,
        };
        let m = train(&xs, &ys, 2, params, 1).unwrap();
        for (x, y) in xs.iter().zip(&ys) {
            assert_eq!(m.predict(x), *y);
        }
    }

    #[test]
    fn constant_features_converge_to_class_priors() {
        // priors 0.1, 0.2, 0.3, 0.4
        let mut ys = Vec::new();
        for (label, n) in Label::ALL.iter().zip([10, 20, 30, 40]) {
            ys.extend(std::iter::repeat_n(*label, n));
        }
        let xs = vec![dense(&[1.0, 1.0]); ys.len()];
        let params = TrainParams {
            epochs: 200,
            learning_rate: 0.5,
            l2: 1e-3,
            batch_size: 100,
        };
        let m = train(&xs, &ys, 2, params, 3).unwrap();
        let p = m.predict_proba(&xs[0]);
        for (got, want) in p.iter().zip([0.1, 0.2, 0.3, 0.4]) {
            assert!((got - want).abs() < 1e-3, "{p:?}");
        }
    }

    #[test]
    fn missing_class_is_fatal() {
        let xs = vec![dense(&[1.0]); 3];
        let ys = vec![Label::Contrasting, Label::Entailment, Label::Neutral];
        assert!(matches!(
            train(&xs, &ys, 1, TrainParams::default(), 0),
            Err(Error::MissingClass(Label::Reasoning))
        ));
    }

    #[test]
    fn loss_history_never_increases() {
        let xs: Vec<_> = (0..40)
            .map(|i| dense(&[(i % 3) as f64, (i % 5) as f64, (i % 7) as f64]))
            .collect();
        let ys: Vec<_> = (0..40).map(|i| Label::ALL[(i * 7) % 4]).collect();
        let params = TrainParams {
            epochs: 30,
            learning_rate: 5.0,
            l2: 1e-3,
            batch_size: 4,
        };
        let m = train(&xs, &ys, 3, params, 0).unwrap();
        assert_eq!(m.loss_history.len(), 30);
        for w in m.loss_history.windows(2) {
            assert!(w[1] <= w[0] + 1e-6, "{:?}", m.loss_history);
        }
    }

    #[test]
    fn gradient_at_origin_is_frequency_difference() {
        let xs = vec![dense(&[1.0, 2.0]); 4];
        let ys = Label::ALL.to_vec();
        let m = LinearModel::zeros(2, TrainParams::default());
        let refs: Vec<_> = xs.iter().collect();
        let (_, gb) = m.objective_gradient(&refs, &ys, 0.0);
        assert_eq!(gb, [0.0; 4]);
        let ys = vec![Label::Neutral; 4];
        let (_, gb) = m.objective_gradient(&refs, &ys, 0.0);
        assert_eq!(gb, [0.25, 0.25, -0.75, 0.25]);
    }

    #[test]
    fn duplicated_example_doubles_the_gradient_sum() {
        let mut m = LinearModel::zeros(3, TrainParams::default());
        m.weights.iter_mut().enumerate().for_each(|(i, w)| *w = (i as f64 * 0.37).sin());
        let x = dense(&[0.5, 0.0, 2.0]);
        let once = m.gradient_sum(&[&x], &[Label::Reasoning]);
        let twice = m.gradient_sum(&[&x, &x], &[Label::Reasoning, Label::Reasoning]);
        assert_eq!(twice.bias, once.bias.map(|b| 2.0 * b));
        let doubled: Vec<f64> = once.weights.iter().map(|w| 2.0 * w).collect();
        assert_eq!(twice.weights, doubled);
        assert_eq!(twice.loss, 2.0 * once.loss);
    }

    #[test]
    fn analytic_gradient_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let xs: Vec<_> = (0..5)
            .map(|_| dense(&(0..4).map(|_| rng.gen_range(0..3) as f64).collect::<Vec<_>>()))
            .collect();
        let ys: Vec<_> = (0..5).map(|_| Label::ALL[rng.gen_range(0..4)]).collect();
        assert!(gradient_check(4, &xs, &ys, 0.01, 5) < 1e-4);
    }
}
