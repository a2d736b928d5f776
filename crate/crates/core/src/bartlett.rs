//! Asymptotic covariance of sample autocovariances.
//!
//! For a clean stationary linear process the (j,k) element is
//! `q_jk = (eta - 3) gamma_j gamma_k + sum_i (gamma_i gamma_{i-j+k} + gamma_{i+k} gamma_{i-j})`.
//! Measurement error inflates these elements; `q1_element` covers the
//! additive model and `q2_element` the multiplicative model, the latter
//! requiring third/fourth mixed moments of the latent process supplied
//! through a [`MomentSet`].

use crate::error::{Error, Result};
use crate::error_models::{AdditiveError, MultiplicativeError};
use crate::linalg::Mat;
use crate::series::Series;
use std::collections::BTreeMap;

/// Hard ceiling on the truncation window of the infinite sums.
const MAX_WINDOW: usize = 1 << 22;

/// Default relative tail tolerance.
pub const DEFAULT_TOL: f64 = 1e-10;

/// `q_jk` for the error-free process, truncating the two-sided sum once the
/// estimated remaining tail of `sum |gamma_i|` drops below `tol * gamma_0^2`.
pub fn bartlett_q<F: Fn(usize) -> f64>(
    gamma: F,
    eta: f64,
    j: usize,
    k: usize,
    tol: f64,
) -> Result<f64> {
    let g = |i: i64| gamma(i.unsigned_abs() as usize);
    let g0 = gamma(0);
    let scale = tol * g0 * g0;
    let (j, k) = (j as i64, k as i64);
    let term = |i: i64| g(i) * g(i - j + k) + g(i + k) * g(i - j);

    let mut sum = term(0);
    let mut i: i64 = 1;
    let mut prev_block_abs = f64::INFINITY;
    loop {
        let block = 64.min(MAX_WINDOW as i64);
        let mut block_abs = 0.0;
        for _ in 0..block {
            sum += term(i) + term(-i);
            block_abs += g(i).abs();
            i += 1;
        }
        // Geometric extrapolation of the remaining |gamma| mass.
        let ratio = (block_abs / prev_block_abs).min(0.999_999);
        let tail = if block_abs == 0.0 {
            0.0
        } else {
            block_abs * ratio / (1.0 - ratio)
        };
        if block_abs <= scale && tail <= scale {
            break;
        }
        if i as usize >= MAX_WINDOW {
            return Err(Error::TruncationFailure { window: i as usize });
        }
        prev_block_abs = block_abs;
    }
    Ok((eta - 3.0) * g(j) * g(k) + sum)
}

/// `sum_{h=-inf}^{inf} gamma_h` with the same truncation rule.
pub fn sum_gammas<F: Fn(usize) -> f64>(gamma: F, tol: f64) -> Result<f64> {
    let g0 = gamma(0);
    let scale = tol * g0.abs().max(f64::MIN_POSITIVE);
    let mut sum = g0;
    let mut h = 1usize;
    let mut prev_block_abs = f64::INFINITY;
    loop {
        let mut block_abs = 0.0;
        for _ in 0..64 {
            let gh = gamma(h);
            sum += 2.0 * gh;
            block_abs += gh.abs();
            h += 1;
        }
        let ratio = (block_abs / prev_block_abs).min(0.999_999);
        let tail = if block_abs == 0.0 {
            0.0
        } else {
            block_abs * ratio / (1.0 - ratio)
        };
        if block_abs <= scale && tail <= scale {
            return Ok(sum);
        }
        if h >= MAX_WINDOW {
            return Err(Error::TruncationFailure { window: h });
        }
        prev_block_abs = block_abs;
    }
}

/// Element (j,k) of the additive-error covariance matrix Q1.
pub fn q1_element<F: Fn(usize) -> f64>(
    gamma: F,
    eta: f64,
    j: usize,
    k: usize,
    err: &AdditiveError,
    tol: f64,
) -> Result<f64> {
    let a2 = err.alpha1 * err.alpha1;
    let a4 = a2 * a2;
    let s2 = err.sigma_e2;
    let q = bartlett_q(&gamma, eta, j, k, tol)?;
    let (lo, hi) = (j.min(k), j.max(k));
    Ok(if lo == 0 && hi == 0 {
        a4 * q + 4.0 * a2 * gamma(0) * s2 + err.e4 - s2 * s2
    } else if lo == 0 {
        a4 * q + 4.0 * a2 * gamma(hi) * s2
    } else if lo == hi {
        a4 * q + 2.0 * a2 * s2 * (gamma(0) + gamma(2 * hi)) + s2 * s2
    } else {
        a4 * q + 2.0 * a2 * s2 * (gamma(hi - lo) + gamma(hi + lo))
    })
}

/// Third and fourth central mixed moments of the latent process, indexed by
/// normalized lag patterns, plus the Cesaro limits
/// `v_p = lim (1/T) sum_t sum_s E{Y_t Y_{t+p} Y_s}`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSet {
    /// `E{Y_0 Y_a Y_b}` keyed by (a, b), 0 <= a <= b.
    thirds: BTreeMap<(usize, usize), f64>,
    /// `E{Y_0 Y_a Y_b Y_c}` keyed by (a, b, c), 0 <= a <= b <= c.
    fourths: BTreeMap<(usize, usize, usize), f64>,
    v: BTreeMap<usize, f64>,
}

fn normalize3(offsets: [i64; 3]) -> (usize, usize) {
    let min = offsets.iter().copied().min().unwrap();
    let mut rel: Vec<i64> = offsets.iter().map(|o| o - min).collect();
    rel.sort_unstable();
    (rel[1] as usize, rel[2] as usize)
}

fn normalize4(offsets: [i64; 4]) -> (usize, usize, usize) {
    let min = offsets.iter().copied().min().unwrap();
    let mut rel: Vec<i64> = offsets.iter().map(|o| o - min).collect();
    rel.sort_unstable();
    (rel[1] as usize, rel[2] as usize, rel[3] as usize)
}

type ThirdPatterns = Vec<(usize, usize)>;
type FourthPatterns = Vec<(usize, usize, usize)>;

/// Lag patterns touched by any Q2 element with indices up to `max_lag`.
fn required_patterns(max_lag: usize) -> (ThirdPatterns, FourthPatterns, Vec<usize>) {
    let mut thirds = std::collections::BTreeSet::new();
    let mut fourths = std::collections::BTreeSet::new();
    let mut vs = std::collections::BTreeSet::new();
    vs.insert(0);
    thirds.insert((0usize, 0usize));
    fourths.insert((0usize, 0usize, 0usize));
    for p in 1..=max_lag {
        vs.insert(p);
        // (0, p)
        fourths.insert(normalize4([0, 0, 0, p as i64]));
        fourths.insert(normalize4([0, p as i64, p as i64, p as i64]));
        thirds.insert(normalize3([0, 0, p as i64]));
        thirds.insert(normalize3([0, p as i64, p as i64]));
        // (p, p)
        let pi = p as i64;
        fourths.insert(normalize4([0, 0, pi, pi]));
        fourths.insert(normalize4([0, pi, pi, 2 * pi]));
        thirds.insert(normalize3([0, pi, 2 * pi]));
        for r in 1..=max_lag {
            if r == p {
                continue;
            }
            let ri = r as i64;
            fourths.insert(normalize4([0, 0, pi, ri]));
            fourths.insert(normalize4([0, pi, pi, pi + ri]));
            fourths.insert(normalize4([-ri, 0, 0, pi]));
            fourths.insert(normalize4([0, pi - ri, pi, pi]));
            thirds.insert(normalize3([-ri, 0, pi]));
            thirds.insert(normalize3([0, pi - ri, pi]));
            thirds.insert(normalize3([0, pi, ri]));
            thirds.insert(normalize3([0, pi, pi + ri]));
        }
    }
    (
        thirds.into_iter().collect(),
        fourths.into_iter().collect(),
        vs.into_iter().collect(),
    )
}

impl MomentSet {
    /// Moments of a Gaussian stationary process: third moments vanish and
    /// fourth moments follow the pair-product identity
    /// `E{Y_a Y_b Y_c Y_d} = g(a-b)g(c-d) + g(a-c)g(b-d) + g(a-d)g(b-c)`.
    pub fn gaussian<F: Fn(usize) -> f64>(gamma: F, max_lag: usize) -> MomentSet {
        let g = |a: usize, b: usize| gamma(a.abs_diff(b));
        let (t3, t4, vs) = required_patterns(max_lag);
        let thirds = t3.into_iter().map(|p| (p, 0.0)).collect();
        let fourths = t4
            .into_iter()
            .map(|(a, b, c)| {
                let m = g(0, a) * g(b, c) + g(0, b) * g(a, c) + g(0, c) * g(a, b);
                ((a, b, c), m)
            })
            .collect();
        let v = vs.into_iter().map(|p| (p, 0.0)).collect();
        MomentSet { thirds, fourths, v }
    }

    /// Plug-in estimates from a long clean series.
    pub fn estimate(s: &Series, max_lag: usize) -> Result<MomentSet> {
        let t = s.len();
        if t < 10 * max_lag.max(1) {
            return Err(Error::TooShort {
                len: t,
                required: 10 * max_lag.max(1),
            });
        }
        let mu = s.mean_hat();
        let y: Vec<f64> = s.values().iter().map(|v| v - mu).collect();
        let (t3, t4, vs) = required_patterns(max_lag);

        let third_avg = |a: usize, b: usize| -> f64 {
            let n = t - b;
            let vals: Vec<f64> = (0..n).map(|i| y[i] * y[i + a] * y[i + b]).collect();
            crate::exec::pairwise_mean(&vals)
        };
        let thirds: BTreeMap<_, _> = t3
            .into_iter()
            .map(|(a, b)| ((a, b), third_avg(a, b)))
            .collect();
        let fourths: BTreeMap<_, _> = t4
            .into_iter()
            .map(|(a, b, c)| {
                let n = t - c;
                let vals: Vec<f64> = (0..n)
                    .map(|i| y[i] * y[i + a] * y[i + b] * y[i + c])
                    .collect();
                ((a, b, c), crate::exec::pairwise_mean(&vals))
            })
            .collect();

        // Window for the Cesaro sums: extend until the autocovariance has
        // decayed well below gamma_0.
        let g0 = s.autocov_hat(0)?;
        let mut window = 4 * max_lag.max(1);
        let cap = (t / 4).min(256);
        while window < cap {
            let g = s.autocov_hat(window)?;
            if g.abs() < 1e-3 * g0 {
                break;
            }
            window += 1;
        }
        let wi = window as i64;
        let v: BTreeMap<usize, f64> = vs
            .into_iter()
            .map(|p| {
                let pi = p as i64;
                let parts = crate::exec::keyed_map(2 * window + 1, |idx| {
                    let d = idx as i64 - wi;
                    let (a, b) = normalize3([0, pi, d]);
                    let n = t - b;
                    let vals: Vec<f64> = (0..n).map(|i| y[i] * y[i + a] * y[i + b]).collect();
                    crate::exec::pairwise_mean(&vals)
                });
                (p, crate::exec::pairwise_sum(&parts))
            })
            .collect();

        Ok(MomentSet { thirds, fourths, v })
    }

    pub fn third(&self, offsets: [i64; 3]) -> Result<f64> {
        let key = normalize3(offsets);
        self.thirds
            .get(&key)
            .copied()
            .ok_or_else(|| Error::MissingMoment(format!("third (0,{},{})", key.0, key.1)))
    }

    pub fn fourth(&self, offsets: [i64; 4]) -> Result<f64> {
        let key = normalize4(offsets);
        self.fourths.get(&key).copied().ok_or_else(|| {
            Error::MissingMoment(format!("fourth (0,{},{},{})", key.0, key.1, key.2))
        })
    }

    pub fn v(&self, p: usize) -> Result<f64> {
        self.v
            .get(&p)
            .copied()
            .ok_or_else(|| Error::MissingMoment(format!("v_{p}")))
    }
}

/// Element (j,k) of the multiplicative-error covariance matrix Q2.
///
/// Each element combines the clean-process `q_jk` with correction terms in
/// the moments of `u` and mixed third/fourth moments of the latent process;
/// the Monte Carlo covariance experiment reproduces every element.
#[allow(clippy::too_many_arguments)]
pub fn q2_element<F: Fn(usize) -> f64>(
    gamma: F,
    eta: f64,
    j: usize,
    k: usize,
    err: &MultiplicativeError,
    mu: f64,
    moments: &MomentSet,
    tol: f64,
) -> Result<f64> {
    let b4 = err.beta0.powi(4);
    let su2 = err.sigma_u2;
    let m2 = 1.0 + su2;
    let m3 = err.u3();
    let m4 = err.u4();
    // Central moments of u.
    let u3c = m3 - 3.0 * m2 + 2.0; // E(u-1)^3
    let u4c = m4 - 4.0 * m3 + 6.0 * m2 - 3.0; // E(u-1)^4
    let q = bartlett_q(&gamma, eta, j, k, tol)?;
    let (lo, hi) = (j.min(k), j.max(k));

    if lo == 0 && hi == 0 {
        let y4 = moments.fourth([0, 0, 0, 0])?;
        let y3 = moments.third([0, 0, 0])?;
        let v0 = moments.v(0)?;
        let s = sum_gammas(&gamma, tol)?;
        let g0 = gamma(0);
        return Ok(b4
            * (m2 * m2 * q
                + (m4 - m2 * m2) * y4
                + 4.0 * mu * m2 * su2 * v0
                + 4.0 * mu * (m4 - m3 - m2 * su2) * y3
                + 2.0 * mu * mu * (m4 - 2.0 * m3 + 1.0 - su2 * su2) * g0
                + 4.0 * mu * mu * (su2 * su2 * s + (m4 - 2.0 * m3 + m2 - su2 * su2) * g0)
                + mu.powi(4) * (u4c - su2 * su2)));
    }

    if lo == 0 {
        let p = hi as i64;
        let y31 = moments.fourth([0, 0, 0, p])? + moments.fourth([0, p, p, p])?;
        let y21 = moments.third([0, 0, p])? + moments.third([0, p, p])?;
        let vp = moments.v(hi)?;
        let gp = gamma(hi);
        return Ok(b4
            * (m2 * q
                + (m3 - m2) * y31
                + 2.0 * mu * su2 * vp
                + mu * (3.0 * m3 - 3.0 * m2 - 2.0 * su2) * y21
                + 6.0 * mu * mu * u3c * gp
                + 4.0 * mu * mu * su2 * gp));
    }

    if lo == hi {
        let p = hi as i64;
        let m_sq = moments.fourth([0, 0, p, p])?;
        let n_cross = moments.fourth([0, p, p, 2 * p])?;
        let e2x = moments.third([0, 0, p])?;
        let e3x = moments.third([0, p, p])?;
        let e4x = moments.third([0, p, 2 * p])?;
        let g0 = gamma(0);
        let gp = gamma(hi);
        let g2p = gamma(2 * hi);
        return Ok(b4
            * (q + (su2 * su2 + 2.0 * su2) * m_sq
                + 2.0 * su2 * n_cross
                + 2.0 * mu * su2 * (2.0 * e4x + m2 * (e2x + e3x))
                + 2.0 * mu * mu * su2 * su2 * gp
                + 2.0 * mu * mu * su2 * (g0 + g2p)
                + 2.0 * mu * mu * su2 * su2 * g0
                + mu.powi(4) * su2 * su2));
    }

    let (p, r) = (j as i64, k as i64);
    let f_sum = moments.fourth([0, 0, p, r])?
        + moments.fourth([0, p, p, p + r])?
        + moments.fourth([-r, 0, 0, p])?
        + moments.fourth([0, p - r, p, p])?;
    let c_sum = moments.third([-r, 0, p])?
        + moments.third([0, p - r, p])?
        + moments.third([0, p, r])?
        + moments.third([0, p, p + r])?;
    let g_pr = gamma(j.abs_diff(k));
    let g_ppr = gamma(j + k);
    Ok(b4 * (q + su2 * f_sum + 2.0 * mu * su2 * c_sum + 2.0 * mu * mu * su2 * (g_pr + g_ppr)))
}

/// Full (p+1)x(p+1) matrix of `bartlett_q` values.
pub fn bartlett_matrix<F: Fn(usize) -> f64>(gamma: F, eta: f64, p: usize, tol: f64) -> Result<Mat> {
    fill_symmetric(p, |j, k| bartlett_q(&gamma, eta, j, k, tol))
}

/// Full Q1 matrix for the additive error model.
pub fn q1_matrix<F: Fn(usize) -> f64>(
    gamma: F,
    eta: f64,
    p: usize,
    err: &AdditiveError,
    tol: f64,
) -> Result<Mat> {
    fill_symmetric(p, |j, k| q1_element(&gamma, eta, j, k, err, tol))
}

/// Full Q2 matrix for the multiplicative error model.
#[allow(clippy::too_many_arguments)]
pub fn q2_matrix<F: Fn(usize) -> f64>(
    gamma: F,
    eta: f64,
    p: usize,
    err: &MultiplicativeError,
    mu: f64,
    moments: &MomentSet,
    tol: f64,
) -> Result<Mat> {
    fill_symmetric(p, |j, k| {
        q2_element(&gamma, eta, j, k, err, mu, moments, tol)
    })
}

fn fill_symmetric(p: usize, f: impl Fn(usize, usize) -> Result<f64>) -> Result<Mat> {
    let n = p + 1;
    let mut m = Mat::zeros(n);
    for j in 0..n {
        for k in j..n {
            let v = f(j, k)?;
            m[(j, k)] = v;
            m[(k, j)] = v;
        }
    }
    Ok(m)
}
