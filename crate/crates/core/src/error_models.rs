//! Additive and multiplicative measurement-error mechanisms.
//!
//! Additive: `X*_t = alpha0 + alpha1 X_t + e_t`, `e_t` i.i.d. mean zero with
//! variance `sigma_e2`. Multiplicative: `X*_t = beta0 u_t X_t`, `u_t` i.i.d.
//! with mean one and variance `sigma_u2`.

use crate::error::{Error, Result};
use crate::series::Series;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, LogNormal, Normal};

/// Rate of observations missed entirely (asymptomatic infections); the
/// meta-analysis value behind the default scale `1/(1 - TAU_A)`.
pub const TAU_A_DEFAULT: f64 = 0.46;

/// Scale linking reported to true rates when a fraction `tau_a` of cases is
/// never observed: `alpha1` or `beta0` = `1 / (1 - tau_a)`.
pub fn scale_from_tau_a(tau_a: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&tau_a) {
        return Err(Error::InvalidParameter(format!(
            "tau_a must lie in [0, 1), got {tau_a}"
        )));
    }
    Ok(1.0 / (1.0 - tau_a))
}

/// Distribution family for the mean-one multiplicative noise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseDist {
    Lognormal,
    Gamma,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdditiveError {
    /// Systematic offset alpha0.
    pub alpha0: f64,
    /// Scale alpha1; nonzero.
    pub alpha1: f64,
    /// Variance of e_t.
    pub sigma_e2: f64,
    /// Fourth moment E(e^4); defaults to the Gaussian 3 sigma_e^4.
    pub e4: f64,
}

impl AdditiveError {
    pub fn new(alpha0: f64, alpha1: f64, sigma_e2: f64) -> Result<Self> {
        if alpha1 == 0.0 {
            return Err(Error::InvalidParameter("alpha1 must be nonzero".into()));
        }
        if sigma_e2 < 0.0 {
            return Err(Error::InvalidParameter("sigma_e2 must be >= 0".into()));
        }
        Ok(AdditiveError {
            alpha0,
            alpha1,
            sigma_e2,
            e4: 3.0 * sigma_e2 * sigma_e2,
        })
    }

    /// Override the Gaussian fourth moment; must respect E(e^4) >= sigma_e2^2.
    pub fn with_e4(mut self, e4: f64) -> Result<Self> {
        if e4 < self.sigma_e2 * self.sigma_e2 {
            return Err(Error::InvalidParameter(
                "E(e^4) must be at least sigma_e2^2".into(),
            ));
        }
        self.e4 = e4;
        Ok(self)
    }

    /// Identity mechanism: no offset, unit scale, no noise.
    pub fn identity() -> Self {
        AdditiveError::new(0.0, 1.0, 0.0).unwrap()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiplicativeError {
    /// Positive scale beta0.
    pub beta0: f64,
    /// Variance of u_t; the coefficient of variation of u is
    /// `sqrt(sigma_u2) * 100%` since E(u) = 1.
    pub sigma_u2: f64,
    pub dist: NoiseDist,
}

impl MultiplicativeError {
    pub fn new(beta0: f64, sigma_u2: f64, dist: NoiseDist) -> Result<Self> {
        if beta0 <= 0.0 || beta0.is_nan() {
            return Err(Error::InvalidParameter("beta0 must be positive".into()));
        }
        if sigma_u2 < 0.0 {
            return Err(Error::InvalidParameter("sigma_u2 must be >= 0".into()));
        }
        Ok(MultiplicativeError {
            beta0,
            sigma_u2,
            dist,
        })
    }

    /// `E(u^3)`, analytic for the chosen family at mean 1, variance sigma_u2.
    pub fn u3(&self) -> f64 {
        let v = self.sigma_u2;
        match self.dist {
            NoiseDist::Lognormal => (1.0 + v).powi(3),
            NoiseDist::Gamma => (1.0 + v) * (1.0 + 2.0 * v),
        }
    }

    /// `E(u^4)` for the chosen family.
    pub fn u4(&self) -> f64 {
        let v = self.sigma_u2;
        match self.dist {
            NoiseDist::Lognormal => (1.0 + v).powi(6),
            NoiseDist::Gamma => (1.0 + v) * (1.0 + 2.0 * v) * (1.0 + 3.0 * v),
        }
    }
}

/// Either measurement-error mechanism.
#[derive(Debug, Clone, PartialEq)]
pub enum ErrorModel {
    Additive(AdditiveError),
    Multiplicative(MultiplicativeError),
}

impl ErrorModel {
    /// Surrogate mean `mu* = alpha0 + alpha1 mu` or `beta0 mu`.
    pub fn surrogate_mean(&self, mu: f64) -> f64 {
        match self {
            ErrorModel::Additive(a) => a.alpha0 + a.alpha1 * mu,
            ErrorModel::Multiplicative(m) => m.beta0 * mu,
        }
    }

    /// Surrogate variance `alpha1^2 gamma0 + sigma_e2` or
    /// `beta0^2 {(sigma_u2 + 1) gamma0 + sigma_u2 mu^2}`.
    pub fn surrogate_var(&self, gamma0: f64, mu: f64) -> f64 {
        match self {
            ErrorModel::Additive(a) => a.alpha1 * a.alpha1 * gamma0 + a.sigma_e2,
            ErrorModel::Multiplicative(m) => {
                m.beta0 * m.beta0 * ((m.sigma_u2 + 1.0) * gamma0 + m.sigma_u2 * mu * mu)
            }
        }
    }

    /// Checks the variance bound implied by the observed surrogate
    /// variability: `sigma_e2 < Var(X*)` or `sigma_u2 < Var(X*)/(beta0^2 mu^2)`.
    /// `mu` is the true-series mean (in practice its corrected estimate).
    pub fn validate_bounds(&self, observed_var_star: f64, mu: f64) -> bool {
        match self {
            ErrorModel::Additive(a) => a.sigma_e2 < observed_var_star,
            ErrorModel::Multiplicative(m) => {
                let denom = m.beta0 * m.beta0 * mu * mu;
                if denom == 0.0 {
                    // Zero mean puts no ceiling on sigma_u2.
                    true
                } else {
                    m.sigma_u2 < observed_var_star / denom
                }
            }
        }
    }

    /// Applies the mechanism to a series with noise drawn from a private
    /// generator; deterministic given `seed`.
    pub fn contaminate(&self, s: &Series, seed: u64) -> Series {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.contaminate_with_rng(s, &mut rng)
    }

    /// Same mechanism, drawing noise from a caller-owned generator. Used by
    /// replicate loops that keep one keyed stream per replicate.
    pub fn contaminate_with_rng<R: rand::Rng>(&self, s: &Series, rng: &mut R) -> Series {
        let values = match self {
            ErrorModel::Additive(a) => {
                if a.sigma_e2 == 0.0 {
                    s.values()
                        .iter()
                        .map(|&x| a.alpha0 + a.alpha1 * x)
                        .collect()
                } else {
                    let noise = Normal::new(0.0, a.sigma_e2.sqrt()).unwrap();
                    s.values()
                        .iter()
                        .map(|&x| a.alpha0 + a.alpha1 * x + noise.sample(rng))
                        .collect()
                }
            }
            ErrorModel::Multiplicative(m) => {
                if m.sigma_u2 == 0.0 {
                    s.values().iter().map(|&x| m.beta0 * x).collect()
                } else {
                    match m.dist {
                        NoiseDist::Lognormal => {
                            // ln u ~ N(-s2/2, s2) with s2 = ln(1 + sigma_u2)
                            // gives E u = 1, Var u = sigma_u2.
                            let s2 = (1.0 + m.sigma_u2).ln();
                            let noise = LogNormal::new(-s2 / 2.0, s2.sqrt()).unwrap();
                            s.values()
                                .iter()
                                .map(|&x| m.beta0 * noise.sample(rng) * x)
                                .collect()
                        }
                        NoiseDist::Gamma => {
                            // shape 1/sigma_u2, scale sigma_u2.
                            let noise = Gamma::new(1.0 / m.sigma_u2, m.sigma_u2).unwrap();
                            s.values()
                                .iter()
                                .map(|&x| m.beta0 * noise.sample(rng) * x)
                                .collect()
                        }
                    }
                }
            }
        };
        let mut out = Series::new(values).expect("contaminated series stays finite");
        out.origin = s.origin.clone();
        out.diff_order = s.diff_order;
        out
    }

    pub fn is_identity(&self) -> bool {
        match self {
            ErrorModel::Additive(a) => a.alpha0 == 0.0 && a.alpha1 == 1.0 && a.sigma_e2 == 0.0,
            ErrorModel::Multiplicative(m) => m.beta0 == 1.0 && m.sigma_u2 == 0.0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn add(a0: f64, a1: f64, s2: f64) -> ErrorModel {
        ErrorModel::Additive(AdditiveError::new(a0, a1, s2).unwrap())
    }

    fn mult(b0: f64, s2: f64) -> ErrorModel {
        ErrorModel::Multiplicative(MultiplicativeError::new(b0, s2, NoiseDist::Lognormal).unwrap())
    }

    #[test]
    fn surrogate_mean_cases() {
        assert_eq!(add(0.0, 1.0, 0.3).surrogate_mean(3.0), 3.0);
        assert_eq!(add(1.0, 2.0, 0.0).surrogate_mean(3.0), 7.0);
        let b0 = scale_from_tau_a(TAU_A_DEFAULT).unwrap();
        assert!((mult(b0, 0.1).surrogate_mean(2.0) - 3.7037).abs() < 1e-3);
    }

    #[test]
    fn surrogate_var_cases() {
        assert_eq!(add(0.0, 1.0, 0.0).surrogate_var(1.7, 0.0), 1.7);
        assert_eq!(add(0.0, 2.0, 3.0).surrogate_var(1.0, 0.0), 7.0);
        assert!((mult(1.0, 0.5).surrogate_var(1.0, 2.0) - 3.5).abs() < 1e-14);
    }

    #[test]
    fn bounds() {
        assert!(add(0.0, 1.0, 0.5).validate_bounds(1.0, 0.0));
        assert!(!add(0.0, 1.0, 1.5).validate_bounds(1.0, 0.0));
        assert!(add(0.0, 1.0, 0.0).validate_bounds(0.1, 5.0));
        // 0.3 < 1/(4*1) = 0.25 is false.
        assert!(!mult(2.0, 0.3).validate_bounds(1.0, 1.0));
        assert!(mult(2.0, 0.2).validate_bounds(1.0, 1.0));
    }

    #[test]
    fn identity_contamination_is_identity() {
        let s = Series::new(vec![1.0, -2.0, 0.5]).unwrap();
        let c = add(0.0, 1.0, 0.0).contaminate(&s, 9);
        assert_eq!(c.values(), s.values());
    }

    #[test]
    fn noiseless_multiplicative_is_exact_scaling() {
        let s = Series::new(vec![1.0, -2.0, 0.5]).unwrap();
        let c = mult(2.0, 0.0).contaminate(&s, 9);
        assert_eq!(c.values(), &[2.0, -4.0, 1.0]);
    }

    #[test]
    fn same_seed_bit_identical() {
        let s = Series::new(vec![0.4; 200]).unwrap();
        let m = add(0.0, 1.0, 0.7);
        assert_eq!(
            m.contaminate(&s, 42).values(),
            m.contaminate(&s, 42).values()
        );
        let m2 = mult(1.5, 0.4);
        assert_eq!(
            m2.contaminate(&s, 42).values(),
            m2.contaminate(&s, 42).values()
        );
    }

    #[test]
    fn lognormal_moments_match_family() {
        let m = MultiplicativeError::new(1.0, 0.5, NoiseDist::Lognormal).unwrap();
        assert!((m.u3() - 1.5f64.powi(3)).abs() < 1e-12);
        assert!((m.u4() - 1.5f64.powi(6)).abs() < 1e-12);
        let g = MultiplicativeError::new(1.0, 0.5, NoiseDist::Gamma).unwrap();
        assert!((g.u3() - 1.5 * 2.0).abs() < 1e-12);
        assert!((g.u4() - 1.5 * 2.0 * 2.5).abs() < 1e-12);
    }

    #[test]
    fn simulated_noise_moments_close_to_spec() {
        let s = Series::new(vec![1.0; 100_000]).unwrap();
        for dist in [NoiseDist::Lognormal, NoiseDist::Gamma] {
            let m = MultiplicativeError::new(1.0, 0.4, dist).unwrap();
            let c = ErrorModel::Multiplicative(m).contaminate(&s, 10);
            let mean = c.mean_hat();
            let var = c.autocov_hat(0).unwrap();
            assert!((mean - 1.0).abs() < 0.01, "{dist:?} mean {mean}");
            assert!((var - 0.4).abs() < 0.02 * 0.4, "{dist:?} var {var}");
        }
    }

    #[test]
    fn invalid_parameters_rejected() {
        assert!(AdditiveError::new(0.0, 0.0, 1.0).is_err());
        assert!(MultiplicativeError::new(0.0, 0.1, NoiseDist::Lognormal).is_err());
        assert!(AdditiveError::new(0.0, 1.0, 1.0)
            .unwrap()
            .with_e4(0.5)
            .is_err());
    }
}
