//! Eigenvalues of small real Hessenberg matrices via the shifted complex QR
//! algorithm. Used to locate roots of AR characteristic polynomials through
//! the companion matrix; orders stay below a dozen.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Eigenvalues of the companion matrix of the monic polynomial
/// `z^p - c[0] z^{p-1} - ... - c[p-1]`.
pub fn companion_roots(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    let p = coeffs.len();
    if p == 0 {
        return Ok(Vec::new());
    }
    if p == 1 {
        return Ok(vec![Complex64::new(coeffs[0], 0.0)]);
    }
    // Companion of z^p - c1 z^{p-1} - ... - cp: first row holds the c's,
    // ones on the subdiagonal.
    let mut h = vec![vec![Complex64::new(0.0, 0.0); p]; p];
    for (j, &c) in coeffs.iter().enumerate() {
        h[0][j] = Complex64::new(c, 0.0);
    }
    for i in 1..p {
        h[i][i - 1] = Complex64::new(1.0, 0.0);
    }
    hessenberg_eigenvalues(h)
}

/// Shifted QR iteration on a complex upper Hessenberg matrix.
fn hessenberg_eigenvalues(mut h: Vec<Vec<Complex64>>) -> Result<Vec<Complex64>> {
    let n = h.len();
    let mut eigs = Vec::with_capacity(n);
    let mut hi = n; // exclusive upper bound of the active block
    let mut iters_this_eig = 0usize;
    let mut total_iters = 0usize;
    let max_total = 200 * n.max(1);

    while hi > 0 {
        if hi == 1 {
            eigs.push(h[0][0]);
            hi = 0;
            continue;
        }
        // Deflate negligible subdiagonals inside the active range.
        let mut deflated = false;
        for i in (1..hi).rev() {
            let tol = f64::EPSILON * (h[i - 1][i - 1].norm() + h[i][i].norm()) + f64::MIN_POSITIVE;
            if h[i][i - 1].norm() <= tol {
                h[i][i - 1] = Complex64::new(0.0, 0.0);
                if i == hi - 1 {
                    eigs.push(h[hi - 1][hi - 1]);
                    hi -= 1;
                    iters_this_eig = 0;
                    deflated = true;
                    break;
                }
            }
        }
        if deflated {
            continue;
        }
        // Start of the unreduced trailing block.
        let mut lo = hi - 1;
        while lo > 0 && h[lo][lo - 1].norm() != 0.0 {
            lo -= 1;
        }

        total_iters += 1;
        iters_this_eig += 1;
        if total_iters > max_total {
            return Err(Error::EigenNoConvergence);
        }

        let shift = if iters_this_eig.is_multiple_of(12) {
            // Exceptional shift to break rare oscillation.
            let m = hi - 1;
            Complex64::new(h[m][m - 1].norm() + 0.75 * h[m][m].norm(), 0.0)
        } else {
            wilkinson_shift(&h, hi)
        };

        qr_step(&mut h, lo, hi, shift);
    }
    eigs.reverse();
    Ok(eigs)
}

/// Eigenvalue of the trailing 2x2 block closest to its bottom-right entry.
fn wilkinson_shift(h: &[Vec<Complex64>], hi: usize) -> Complex64 {
    let m = hi - 1;
    let a = h[m - 1][m - 1];
    let b = h[m - 1][m];
    let c = h[m][m - 1];
    let d = h[m][m];
    let tr = a + d;
    let det = a * d - b * c;
    let disc = (tr * tr - 4.0 * det).sqrt();
    let l1 = (tr + disc) / 2.0;
    let l2 = (tr - disc) / 2.0;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// One implicit `H - sI = QR; H <- RQ + sI` sweep on rows/cols `lo..hi`.
#[allow(clippy::needless_range_loop)]
fn qr_step(h: &mut [Vec<Complex64>], lo: usize, hi: usize, shift: Complex64) {
    let m = hi - lo;
    if m < 2 {
        return;
    }
    for i in lo..hi {
        h[i][i] -= shift;
    }
    // Forward pass: rotations annihilating the subdiagonal.
    let mut rots = Vec::with_capacity(m - 1);
    for i in lo..hi - 1 {
        let a = h[i][i];
        let b = h[i + 1][i];
        let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
        let (ca, sb) = if r == 0.0 {
            (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
        } else {
            (a.conj() / r, b.conj() / r)
        };
        rots.push((ca, sb));
        for j in i..hi {
            let x = h[i][j];
            let y = h[i + 1][j];
            h[i][j] = ca * x + sb * y;
            h[i + 1][j] = -sb.conj() * x + ca.conj() * y;
        }
    }
    // Backward pass: multiply by the adjoints on the right.
    for (k, &(ca, sb)) in rots.iter().enumerate() {
        let i = lo + k;
        let row_end = (i + 2).min(hi);
        for r in lo..row_end {
            let x = h[r][i];
            let y = h[r][i + 1];
            h[r][i] = x * ca.conj() + y * sb.conj();
            h[r][i + 1] = -x * sb + y * ca;
        }
    }
    for i in lo..hi {
        h[i][i] += shift;
    }
}
