//! Cyclic Jacobi eigensolver for complex Hermitian matrices.
//!
//! Chosen over faster factorizations for auditability: every step is a
//! plane rotation, convergence is quadratic, and accuracy is uniformly good
//! at the dimensions this crate targets.

use num_complex::Complex;

use super::matrix::{ComplexMatrix, C64, ZERO};
use crate::error::{Error, Result};
use crate::tolerance::ToleranceConfig;

const MAX_SWEEPS: usize = 100;
/// Off-diagonal Frobenius mass below this fraction of the input norm counts
/// as diagonal.
const CONVERGENCE: f64 = 1e-13;

/// A complex Jacobi rotation zeroing the off-diagonal element of the
/// Hermitian 2×2 block `[[a, b], [conj(b), d]]`.
///
/// Returns `(c, s, phase)` such that the unitary
/// `G = [[c, s·phase], [-s·conj(phase), c]]` satisfies `(G† M G)₀₁ = 0`,
/// with `c, s` real and `|phase| = 1`.
pub(crate) fn jacobi_rotation(a: f64, d: f64, b: C64) -> (f64, f64, C64) {
    let absb = b.norm();
    let phase = b / absb;
    let tau = (d - a) / (2.0 * absb);
    let t = if tau == 0.0 {
        1.0
    } else {
        tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    (c, t * c, phase)
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Returns eigenvalues in descending order and the matching orthonormal
/// eigenvectors as matrix columns, so `M·v_k = λ_k·v_k`.
///
/// Errors if the input deviates from Hermiticity beyond
/// `tolerances.hermiticity` or if the sweep budget is exhausted.
pub fn hermitian_eigh(
    m: &ComplexMatrix,
    tolerances: &ToleranceConfig,
) -> Result<(Vec<f64>, ComplexMatrix)> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            context: "hermitian_eigh",
            expected: m.rows(),
            got: m.cols(),
        });
    }
    let dev = m.hermiticity_deviation();
    if dev > tolerances.hermiticity {
        return Err(Error::NotHermitian {
            deviation: dev,
            tolerance: tolerances.hermiticity,
        });
    }

    let n = m.rows();
    let mut a = m.hermitize();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();
    if scale == 0.0 {
        return Ok((vec![0.0; n], v));
    }

    let mut converged = false;
    for _sweep in 0..MAX_SWEEPS {
        let mut off_sq = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off_sq += a[(p, q)].norm_sqr();
            }
        }
        if (2.0 * off_sq).sqrt() <= CONVERGENCE * scale {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let absb = apq.norm();
                if absb <= f64::EPSILON * CONVERGENCE * scale {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let (c, s, phase) = jacobi_rotation(app, aqq, apq);
                let t = s / c;
                let phase_conj = phase.conj();

                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    let new_kp = akp * c - akq * (phase_conj * s);
                    let new_kq = akp * (phase * s) + akq * c;
                    a[(k, p)] = new_kp;
                    a[(p, k)] = new_kp.conj();
                    a[(k, q)] = new_kq;
                    a[(q, k)] = new_kq.conj();
                }
                a[(p, p)] = Complex::new(app - t * absb, 0.0);
                a[(q, q)] = Complex::new(aqq + t * absb, 0.0);
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;

                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * c - vkq * (phase_conj * s);
                    v[(k, q)] = vkp * (phase * s) + vkq * c;
                }
            }
        }
    }
    if !converged {
        return Err(Error::ConvergenceFailure {
            algorithm: "cyclic Jacobi eigensolver",
            sweeps: MAX_SWEEPS,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.partial_cmp(&a[(i, i)].re).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok((eigenvalues, eigenvectors))
}
