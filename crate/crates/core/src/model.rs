//! AR(p) model parameters: drift, lag coefficients, innovation variance, and
//! the innovation kurtosis ratio used by the autocovariance-covariance
//! formula.

use crate::eigen::companion_roots;
use crate::error::{Error, Result};
use crate::linalg::Mat;

/// `X_t = phi0 + phi_1 X_{t-1} + ... + phi_p X_{t-p} + eps_t`.
#[derive(Debug, Clone, PartialEq)]
pub struct ArModel {
    pub phi0: f64,
    pub phi: Vec<f64>,
    /// Innovation variance, `Var(eps_t)`.
    pub sigma_eps2: f64,
    /// `E(eps^4) / sigma_eps^4`; 3 for Gaussian innovations.
    pub eta: f64,
}

impl ArModel {
    pub fn new(phi0: f64, phi: Vec<f64>, sigma_eps2: f64) -> Result<Self> {
        if phi.is_empty() {
            return Err(Error::InvalidParameter("lag order must be positive".into()));
        }
        if sigma_eps2 < 0.0 || !sigma_eps2.is_finite() {
            return Err(Error::InvalidParameter(
                "innovation variance must be finite and non-negative".into(),
            ));
        }
        if phi.iter().any(|c| !c.is_finite()) || !phi0.is_finite() {
            return Err(Error::InvalidParameter(
                "coefficients must be finite".into(),
            ));
        }
        Ok(ArModel {
            phi0,
            phi,
            sigma_eps2,
            eta: 3.0,
        })
    }

    pub fn with_eta(mut self, eta: f64) -> Self {
        self.eta = eta;
        self
    }

    pub fn p(&self) -> usize {
        self.phi.len()
    }

    /// Largest modulus among the roots of `z^p - phi_1 z^{p-1} - ... - phi_p`,
    /// computed from the eigenvalues of the companion matrix.
    pub fn max_root_modulus(&self) -> Result<f64> {
        // Trailing zero coefficients only lower the effective order.
        let mut coeffs = self.phi.clone();
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Ok(0.0);
        }
        let roots = companion_roots(&coeffs)?;
        Ok(roots.iter().map(|z| z.norm()).fold(0.0, f64::max))
    }

    /// True iff every characteristic root lies strictly inside the unit circle.
    pub fn is_stationary(&self) -> bool {
        matches!(self.max_root_modulus(), Ok(m) if m < 1.0)
    }

    pub fn require_stationary(&self) -> Result<()> {
        let m = self.max_root_modulus()?;
        if m < 1.0 {
            Ok(())
        } else {
            Err(Error::NonStationary { max_modulus: m })
        }
    }

    /// Stationary mean `phi0 / (1 - sum phi_j)`.
    pub fn mean(&self) -> f64 {
        self.phi0 / (1.0 - self.phi.iter().sum::<f64>())
    }

    /// Stationary autocovariances `gamma_0..gamma_{n-1}` from the Yule-Walker
    /// relations: `gamma_k = sum_j phi_j gamma_{k-j}` for k >= 1 and
    /// `gamma_0 = sum_j phi_j gamma_j + sigma_eps2`.
    pub fn autocovariances(&self, n: usize) -> Result<Vec<f64>> {
        self.require_stationary()?;
        let p = self.p();
        let dim = p + 1;
        let mut a = Mat::zeros(dim);
        let mut b = vec![0.0; dim];
        // Unknowns gamma_0..gamma_p.
        for k in 0..=p {
            a[(k, k)] += 1.0;
            for (j, &phi) in self.phi.iter().enumerate() {
                let lag = (k as i64 - (j + 1) as i64).unsigned_abs() as usize;
                a[(k, lag)] -= phi;
            }
        }
        b[0] = self.sigma_eps2;
        let mut gammas = a.solve(&b)?;
        while gammas.len() < n {
            let k = gammas.len();
            let next: f64 = self
                .phi
                .iter()
                .enumerate()
                .map(|(j, &phi)| phi * gammas[k - j - 1])
                .sum();
            gammas.push(next);
        }
        gammas.truncate(n);
        Ok(gammas)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ar(phi0: f64, phi: &[f64], s2: f64) -> ArModel {
        ArModel::new(phi0, phi.to_vec(), s2).unwrap()
    }

    #[test]
    fn ar1_stationarity_boundary() {
        assert!(ar(0.0, &[0.5], 1.0).is_stationary());
        assert!(!ar(0.0, &[1.0], 1.0).is_stationary());
        assert!(!ar(0.0, &[-1.2], 1.0).is_stationary());
    }

    #[test]
    fn ar2_triangle_examples() {
        assert!(ar(0.0, &[0.5, 0.3], 1.0).is_stationary());
        assert!(!ar(0.0, &[0.5, 0.6], 1.0).is_stationary());
    }

    #[test]
    fn stationary_mean_formula() {
        let m = ar(1.0, &[0.5], 1.0);
        assert!((m.mean() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn ar1_autocovariances_are_geometric() {
        let m = ar(0.0, &[0.5], 1.0);
        let g = m.autocovariances(4).unwrap();
        let g0 = 1.0 / (1.0 - 0.25);
        for (k, &gk) in g.iter().enumerate() {
            assert!((gk - g0 * 0.5f64.powi(k as i32)).abs() < 1e-12, "lag {k}");
        }
    }

    #[test]
    fn ar2_autocovariances_satisfy_recursion() {
        let m = ar(0.3, &[0.5, -0.3], 1.0);
        let g = m.autocovariances(8).unwrap();
        for k in 3..8 {
            let want = 0.5 * g[k - 1] - 0.3 * g[k - 2];
            assert!((g[k] - want).abs() < 1e-12);
        }
        // gamma_0 identity.
        let want0 = 0.5 * g[1] - 0.3 * g[2] + 1.0;
        assert!((g[0] - want0).abs() < 1e-12);
    }

    #[test]
    fn nonstationary_autocovariances_rejected() {
        let m = ar(0.0, &[1.01], 1.0);
        assert!(matches!(
            m.autocovariances(3),
            Err(Error::NonStationary { .. })
        ));
    }

    #[test]
    fn trailing_zero_coefficients_ignored() {
        let m = ar(0.0, &[0.5, 0.0, 0.0], 1.0);
        assert!(m.is_stationary());
        assert!((m.max_root_modulus().unwrap() - 0.5).abs() < 1e-12);
    }
}
