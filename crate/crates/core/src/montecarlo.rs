//! Simulation of AR(p) processes and the replicate experiments that check
//! every closed-form result against its empirical counterpart.
//!
//! Replicates run in parallel (feature `parallel`) with one ChaCha stream per
//! replicate, keyed by `(seed, replicate)`; aggregation walks the collected
//! vector in index order with pairwise summation, so results are bit-for-bit
//! reproducible regardless of schedule.

use crate::error::{Error, Result};
use crate::error_models::ErrorModel;
use crate::estimate::fit_ee;
use crate::exec::{keyed_map, pairwise_mean, pairwise_sum};
use crate::linalg::Mat;
use crate::model::ArModel;
use crate::series::Series;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

/// What to simulate: the model, the retained length, burn-in, and the seed.
#[derive(Debug, Clone, PartialEq)]
pub struct SimSpec {
    pub model: ArModel,
    pub t: usize,
    pub burn_in: usize,
    pub seed: u64,
}

impl SimSpec {
    pub fn new(model: ArModel, t: usize, seed: u64) -> Self {
        SimSpec {
            model,
            t,
            burn_in: 500,
            seed,
        }
    }

    pub fn with_burn_in(mut self, burn_in: usize) -> Self {
        self.burn_in = burn_in;
        self
    }
}

/// Simulates `burn_in + t` steps of the AR recursion with Gaussian
/// innovations, starting from the stationary mean, and keeps the last `t`.
pub fn simulate_ar(spec: &SimSpec) -> Result<Series> {
    spec.model.require_stationary()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    simulate_ar_with_rng(&spec.model, spec.t, spec.burn_in, &mut rng)
}

pub(crate) fn simulate_ar_with_rng<R: rand::Rng>(
    model: &ArModel,
    t: usize,
    burn_in: usize,
    rng: &mut R,
) -> Result<Series> {
    if t == 0 {
        return Err(Error::EmptyInput);
    }
    let p = model.p();
    let innov = Normal::new(0.0, model.sigma_eps2.sqrt())
        .map_err(|_| Error::InvalidParameter("invalid innovation variance".into()))?;
    let mut window = vec![model.mean(); p];
    let mut out = Vec::with_capacity(t);
    for step in 0..burn_in + t {
        let mut x = model.phi0;
        for (j, &c) in model.phi.iter().enumerate() {
            x += c * window[p - 1 - j];
        }
        x += innov.sample(rng);
        window.rotate_left(1);
        window[p - 1] = x;
        if step >= burn_in {
            out.push(x);
        }
    }
    Series::new(out)
}

/// Componentwise means and standard deviations of the naive estimator across
/// replicates of simulate -> contaminate -> naive fit.
#[derive(Debug, Clone, PartialEq)]
pub struct NaiveExperiment {
    /// Mean of (phi0*, phi*_1..phi*_p, sigma_eps2*) estimates.
    pub means: Vec<f64>,
    pub sds: Vec<f64>,
    pub reps: usize,
}

/// Runs the naive analysis on `reps` contaminated replicates.
pub fn naive_limit_experiment(
    spec: &SimSpec,
    err: &ErrorModel,
    reps: usize,
) -> Result<NaiveExperiment> {
    if reps < 50 {
        return Err(Error::InvalidParameter(
            "need at least 50 replicates".into(),
        ));
    }
    spec.model.require_stationary()?;
    let p = spec.model.p();
    let rows: Vec<Result<Vec<f64>>> = keyed_map(reps, |rep| {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        rng.set_stream(rep as u64 + 1);
        let clean = simulate_ar_with_rng(&spec.model, spec.t, spec.burn_in, &mut rng)?;
        let surrogate = err.contaminate_with_rng(&clean, &mut rng);
        let fit = fit_ee(&surrogate.autocov_summary(p)?)?;
        Ok(fit.param_vec())
    });
    let rows: Vec<Vec<f64>> = rows.into_iter().collect::<Result<_>>()?;
    let dim = p + 2;
    let mut means = vec![0.0; dim];
    let mut sds = vec![0.0; dim];
    for d in 0..dim {
        let col: Vec<f64> = rows.iter().map(|r| r[d]).collect();
        means[d] = pairwise_mean(&col);
        let sq: Vec<f64> = col
            .iter()
            .map(|v| (v - means[d]) * (v - means[d]))
            .collect();
        sds[d] = (pairwise_sum(&sq) / (reps as f64 - 1.0)).sqrt();
    }
    Ok(NaiveExperiment { means, sds, reps })
}

/// Sample covariance, across replicates, of
/// `sqrt(T) * (gamma*_hat_0, ..., gamma*_hat_p)` on contaminated series.
/// Matches the corresponding Q matrix as `reps` and T grow.
pub fn covariance_experiment(
    spec: &SimSpec,
    err: &ErrorModel,
    p: usize,
    reps: usize,
) -> Result<Mat> {
    if reps < 1000 {
        return Err(Error::InvalidParameter(
            "need at least 1000 replicates".into(),
        ));
    }
    spec.model.require_stationary()?;
    let rows: Vec<Result<Vec<f64>>> = keyed_map(reps, |rep| {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        rng.set_stream(rep as u64 + 1);
        let clean = simulate_ar_with_rng(&spec.model, spec.t, spec.burn_in, &mut rng)?;
        let surrogate = err.contaminate_with_rng(&clean, &mut rng);
        let summary = surrogate.autocov_summary(p)?;
        let scale = (spec.t as f64).sqrt();
        Ok(summary.gammas.iter().map(|g| g * scale).collect())
    });
    let rows: Vec<Vec<f64>> = rows.into_iter().collect::<Result<_>>()?;
    let dim = p + 1;
    let means: Vec<f64> = (0..dim)
        .map(|d| pairwise_mean(&rows.iter().map(|r| r[d]).collect::<Vec<_>>()))
        .collect();
    let mut cov = Mat::zeros(dim);
    for a in 0..dim {
        for b in a..dim {
            let prods: Vec<f64> = rows
                .iter()
                .map(|r| (r[a] - means[a]) * (r[b] - means[b]))
                .collect();
            let v = pairwise_sum(&prods) / (reps as f64 - 1.0);
            cov[(a, b)] = v;
            cov[(b, a)] = v;
        }
    }
    Ok(cov)
}
