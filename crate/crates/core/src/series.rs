//! Time-series container and empirical moments.
//!
//! `Series` stores an ordered run of finite observations plus bookkeeping for
//! how many times it has been differenced. The calendar origin is metadata
//! only; all computations are index based.

use crate::error::{Error, Result};
use crate::linalg::Mat;

/// Ordered real-valued observations.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    values: Vec<f64>,
    /// ISO-8601 date of the first observation, if known.
    pub origin: Option<String>,
    /// Number of `difference` applications minus `integrate` applications.
    pub diff_order: u32,
}

impl Series {
    /// Builds a series, rejecting empty or non-finite input.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyInput);
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Series {
            values,
            origin: None,
            diff_order: 0,
        })
    }

    pub fn with_origin(mut self, origin: impl Into<String>) -> Self {
        self.origin = Some(origin.into());
        self
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.values.iter().all(|&v| v == self.values[0])
    }

    /// Sample mean `(1/T) * sum(X_t)`.
    pub fn mean_hat(&self) -> f64 {
        crate::exec::pairwise_mean(&self.values)
    }

    /// Lag-k sample autocovariance with the 1/(T-k) normalization:
    /// `(1/(T-k)) * sum_{t=k+1..T} (X_t - mu_hat)(X_{t-k} - mu_hat)`.
    pub fn autocov_hat(&self, k: usize) -> Result<f64> {
        let t = self.values.len();
        if k >= t {
            return Err(Error::LagExceedsLength { lag: k, len: t });
        }
        let mu = self.mean_hat();
        let products: Vec<f64> = (k..t)
            .map(|i| (self.values[i] - mu) * (self.values[i - k] - mu))
            .collect();
        Ok(crate::exec::pairwise_sum(&products) / (t - k) as f64)
    }

    /// Mean and autocovariances through lag `p`.
    pub fn autocov_summary(&self, p: usize) -> Result<AutocovSummary> {
        if p == 0 {
            return Err(Error::InvalidParameter("lag order must be positive".into()));
        }
        let gammas = (0..=p)
            .map(|k| self.autocov_hat(k))
            .collect::<Result<Vec<f64>>>()?;
        Ok(AutocovSummary {
            mu_hat: self.mean_hat(),
            gammas,
            p,
        })
    }

    /// First difference; output[t] = s[t+1] - s[t], length T-1.
    pub fn difference(&self) -> Result<Series> {
        if self.values.len() < 2 {
            return Err(Error::TooShort {
                len: self.values.len(),
                required: 2,
            });
        }
        Ok(Series {
            values: self.values.windows(2).map(|w| w[1] - w[0]).collect(),
            origin: self.origin.clone(),
            diff_order: self.diff_order + 1,
        })
    }

    /// Cumulative sum anchored at `anchor`; inverse of `difference`.
    pub fn integrate(&self, anchor: f64) -> Result<Series> {
        if self.diff_order == 0 {
            return Err(Error::NegativeDiffOrder);
        }
        let mut values = Vec::with_capacity(self.values.len() + 1);
        values.push(anchor);
        for &d in &self.values {
            values.push(values.last().unwrap() + d);
        }
        Ok(Series {
            values,
            origin: self.origin.clone(),
            diff_order: self.diff_order - 1,
        })
    }
}

/// Empirical mean and autocovariances `gamma_hat_0..gamma_hat_p` of a series.
#[derive(Debug, Clone, PartialEq)]
pub struct AutocovSummary {
    pub mu_hat: f64,
    /// `gammas[k]` is the lag-k autocovariance, k = 0..=p.
    pub gammas: Vec<f64>,
    pub p: usize,
}

impl AutocovSummary {
    pub fn new(mu_hat: f64, gammas: Vec<f64>) -> Result<Self> {
        if gammas.len() < 2 {
            return Err(Error::InvalidParameter(
                "need gamma_0 and at least gamma_1".into(),
            ));
        }
        let p = gammas.len() - 1;
        Ok(AutocovSummary { mu_hat, gammas, p })
    }

    /// Symmetric Toeplitz matrix built from `gammas[0..p-1]`.
    pub fn toeplitz(&self) -> Mat {
        Mat::toeplitz(&self.gammas[..self.p])
    }

    /// `(gamma_1, ..., gamma_p)`.
    pub fn gamma_vec(&self) -> &[f64] {
        &self.gammas[1..]
    }

    pub fn gamma0(&self) -> f64 {
        self.gammas[0]
    }
}
