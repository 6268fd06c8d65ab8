//! One-sided Jacobi SVD for dense complex matrices.
//!
//! Column pairs are orthogonalized with the same plane rotations as the
//! Hermitian eigensolver, applied to the implicit Gram matrix. Singular
//! values come out as column norms, which keeps small values accurate —
//! exactly what Schmidt tracking near degeneracies needs.

use super::eigen::jacobi_rotation;
use super::matrix::{complete_orthonormal_basis, ComplexMatrix, ZERO};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 60;
/// Column pairs count as orthogonal when `|⟨w_p|w_q⟩| ≤ PAIR_TOL·‖w_p‖‖w_q‖`.
const PAIR_TOL: f64 = 1e-14;
/// Columns with norm below this fraction of the input norm carry only
/// rounding noise; they are excluded from rotations (their direction is
/// meaningless and would never pass the relative pair test).
const NULL_SKIP: f64 = 1e-15;
/// Columns with norm below this fraction of the input norm get their left
/// singular vector from orthonormal completion rather than normalization.
const NULL_COLUMN: f64 = 1e-14;

#[derive(Debug, Clone)]
pub struct Svd {
    /// Left singular vectors, full `rows × rows`.
    pub u: ComplexMatrix,
    /// Singular values, descending, length `min(rows, cols)`.
    pub s: Vec<f64>,
    /// Right singular vectors, full `cols × cols`; `M = U·diag(s)·V†`.
    pub v: ComplexMatrix,
}

/// Full SVD `M = U·diag(s)·V†` with `s` descending and ≥ 0.
pub fn svd(m: &ComplexMatrix) -> Result<Svd> {
    if m.rows() < m.cols() {
        // Decompose the adjoint and swap factors: M† = U Σ V† ⇒ M = V Σ U†.
        let t = svd(&m.dagger())?;
        return Ok(Svd {
            u: t.v,
            s: t.s,
            v: t.u,
        });
    }

    let rows = m.rows();
    let cols = m.cols();
    let mut w = m.clone();
    let mut v = ComplexMatrix::identity(cols);
    let scale = m.frobenius_norm();

    if scale > 0.0 {
        let mut converged = false;
        for _sweep in 0..MAX_SWEEPS {
            let mut rotated = false;
            for p in 0..cols {
                for q in (p + 1)..cols {
                    let mut alpha = 0.0;
                    let mut beta = 0.0;
                    let mut gamma = ZERO;
                    for i in 0..rows {
                        let wp = w[(i, p)];
                        let wq = w[(i, q)];
                        alpha += wp.norm_sqr();
                        beta += wq.norm_sqr();
                        gamma += wp.conj() * wq;
                    }
                    if alpha.sqrt() <= NULL_SKIP * scale || beta.sqrt() <= NULL_SKIP * scale {
                        continue;
                    }
                    if gamma.norm() <= PAIR_TOL * (alpha * beta).sqrt() {
                        continue;
                    }
                    rotated = true;
                    let (c, s, phase) = jacobi_rotation(alpha, beta, gamma);
                    let phase_conj = phase.conj();
                    for i in 0..rows {
                        let wp = w[(i, p)];
                        let wq = w[(i, q)];
                        w[(i, p)] = wp * c - wq * (phase_conj * s);
                        w[(i, q)] = wp * (phase * s) + wq * c;
                    }
                    for i in 0..cols {
                        let vp = v[(i, p)];
                        let vq = v[(i, q)];
                        v[(i, p)] = vp * c - vq * (phase_conj * s);
                        v[(i, q)] = vp * (phase * s) + vq * c;
                    }
                }
            }
            if !rotated {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::ConvergenceFailure {
                algorithm: "one-sided Jacobi SVD",
                sweeps: MAX_SWEEPS,
            });
        }
    }

    let mut norms: Vec<f64> = (0..cols)
        .map(|j| (0..rows).map(|i| w[(i, j)].norm_sqr()).sum::<f64>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&a, &b| norms[b].partial_cmp(&norms[a]).unwrap());
    norms = order.iter().map(|&j| norms[j]).collect();

    let v_sorted = ComplexMatrix::from_fn(cols, cols, |i, j| v[(i, order[j])]);

    let mut u_cols = Vec::with_capacity(cols);
    for (k, &j) in order.iter().enumerate() {
        if norms[k] > NULL_COLUMN * scale && norms[k] > 0.0 {
            let col: Vec<_> = (0..rows).map(|i| w[(i, j)] / norms[k]).collect();
            u_cols.push(col);
        } else {
            break; // remaining columns are numerically null; completion fills in
        }
    }
    let u = complete_orthonormal_basis(&u_cols, rows)?;

    Ok(Svd {
        u,
        s: norms,
        v: v_sorted,
    })
}
