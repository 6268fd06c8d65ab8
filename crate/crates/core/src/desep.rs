//! Entanglement growth out of initially separating states.
//!
//! For a product state `φ₀ ⊗ Φ₀` evolving under `H`, the largest Schmidt
//! weight departs from 1 quadratically, `p₀(t) ≈ 1 - A t²` — time-reversal
//! symmetry forbids a linear term. The deseparation parameter
//!
//! ```text
//! A = Σ_{j≠0, m≠0} |⟨jm|H|00⟩|²
//! ```
//!
//! (index pairs over product states `φⱼΦₘ`) measures the rate at which
//! entanglement arises, while
//!
//! ```text
//! B = Σ_{jm≠00} |⟨jm|H|00⟩|² ≥ A
//! ```
//!
//! measures the total change of the global state, including the "classical"
//! drift of a time-dependent product. Both are independent of how the bases
//! are completed beyond their 0-columns: `A` is
//! `‖(1-P_φ₀)⊗(1-P_Φ₀) H|00⟩‖²`.
//!
//! [`robustness_scan`] compares `A` across candidate initial states of a
//! coupled-oscillator pair; coherent states come out markedly more robust
//! than number states of equal mean occupation.

use crate::dynamics::{track_schmidt, EvolutionConfig};
use crate::error::{Error, Result};
use crate::hilbert::{
    complete_orthonormal_basis, kron_vec, product_basis_elements, BipartiteState, ComplexMatrix,
};
use crate::models::{CoupledOscillators, OscillatorState};
use crate::schmidt::schmidt_decompose;

/// Minimum sample count for the small-time fit window.
const MIN_FIT_SAMPLES: usize = 10;
/// Floor in the denominator of `relative_error` when `A` vanishes.
const RELATIVE_ERROR_FLOOR: f64 = 1e-12;

/// Small-time entanglement-growth report for one evolution.
#[derive(Debug, Clone)]
pub struct DeseparationReport {
    /// `A`: perturbative coefficient of the `t²` weight decay (1/time²).
    pub a_param: f64,
    /// `B ≥ A`: total second-order change of the global state (1/time²).
    pub b_param: f64,
    /// Least-squares coefficient of `1 - a t²` fitted to the tracked `p₀(t)`.
    pub fitted_a: f64,
    /// Linear coefficient from the diagnostic `b·t + c·t²` fit; should be
    /// noise.
    pub linear_coeff: f64,
    /// Time window the fit used.
    pub fit_window: (f64, f64),
    /// `|fitted_a - a_param| / max(a_param, floor)`.
    pub relative_error: f64,
}

fn validate_bases(
    basis_a: &ComplexMatrix,
    basis_b: &ComplexMatrix,
    h: &ComplexMatrix,
) -> Result<()> {
    for basis in [basis_a, basis_b] {
        let dev = basis.orthonormality_deviation();
        if dev > crate::ToleranceConfig::default().orthonormality {
            return Err(Error::NonOrthonormalBasis { deviation: dev });
        }
    }
    let dim = basis_a.rows() * basis_b.rows();
    if h.rows() != dim || !h.is_square() {
        return Err(Error::DimensionMismatch {
            context: "deseparation",
            expected: dim,
            got: h.rows(),
        });
    }
    Ok(())
}

fn coupling_elements(
    h: &ComplexMatrix,
    basis_a: &ComplexMatrix,
    basis_b: &ComplexMatrix,
) -> Result<Vec<Vec<num_complex::Complex<f64>>>> {
    validate_bases(basis_a, basis_b, h)?;
    let start = kron_vec(&basis_a.column(0), &basis_b.column(0));
    let h_start = h.matvec(&start);
    Ok(product_basis_elements(basis_a, basis_b, &h_start))
}

fn entangling_sum(elem: &[Vec<num_complex::Complex<f64>>]) -> f64 {
    let mut total = 0.0;
    for row in elem.iter().skip(1) {
        for z in row.iter().skip(1) {
            total += z.norm_sqr();
        }
    }
    total
}

/// Deseparation parameter `A = Σ_{j≠0, m≠0} |⟨jm|H|00⟩|²`.
///
/// `basis_a` / `basis_b` are orthonormal bases whose 0-columns are the
/// initial factors `φ₀`, `Φ₀`; the completion beyond column 0 does not
/// affect the value.
pub fn deseparation_a(
    h: &ComplexMatrix,
    basis_a: &ComplexMatrix,
    basis_b: &ComplexMatrix,
) -> Result<f64> {
    Ok(entangling_sum(&coupling_elements(h, basis_a, basis_b)?))
}

/// Total-change parameter `B = Σ_{jm≠00} |⟨jm|H|00⟩|²`.
///
/// Computed as `A` plus the single-factor (`j=0` or `m=0`) terms, so
/// `B ≥ A` holds exactly, term by term.
pub fn deseparation_b(
    h: &ComplexMatrix,
    basis_a: &ComplexMatrix,
    basis_b: &ComplexMatrix,
) -> Result<f64> {
    let elem = coupling_elements(h, basis_a, basis_b)?;
    let mut total = entangling_sum(&elem);
    for z in elem[0].iter().skip(1) {
        total += z.norm_sqr();
    }
    for row in elem.iter().skip(1) {
        total += row[0].norm_sqr();
    }
    Ok(total)
}

/// Evolve a separable state, track its largest Schmidt weight, and fit the
/// small-time law `p₀(t) ≈ 1 - A t²` over `window = (t_min, t_max)`.
///
/// Errors if the initial state is not separable to tolerance, if the window
/// holds fewer than 10 samples, or if the diagnostic fit finds a linear term
/// above tolerance (the law is even in `t`).
pub fn fit_small_time(
    psi0: &BipartiteState,
    cfg: &EvolutionConfig,
    window: (f64, f64),
) -> Result<DeseparationReport> {
    let tol = cfg.tolerances();
    let dec = schmidt_decompose(psi0, tol)?;
    if dec.coeffs()[0] < 1.0 - tol.state_norm {
        return Err(Error::InvalidParameter(format!(
            "initial state is not separable: largest Schmidt coefficient {}",
            dec.coeffs()[0]
        )));
    }

    let basis_a = complete_orthonormal_basis(&[dec.basis_a().column(0)], psi0.dim_a())?;
    let basis_b = complete_orthonormal_basis(&[dec.basis_b().column(0)], psi0.dim_b())?;
    let a_param = deseparation_a(cfg.hamiltonian(), &basis_a, &basis_b)?;
    let b_param = deseparation_b(cfg.hamiltonian(), &basis_a, &basis_b)?;

    let traj = track_schmidt(psi0, cfg, false)?;
    let samples: Vec<(f64, f64)> = traj
        .times
        .iter()
        .zip(&traj.coeff_tracks)
        .filter(|(t, _)| window.0 <= **t && **t <= window.1)
        .map(|(t, row)| (*t, row[0] * row[0]))
        .collect();
    if samples.len() < MIN_FIT_SAMPLES {
        return Err(Error::WindowTooShort {
            samples: samples.len(),
            required: MIN_FIT_SAMPLES,
        });
    }

    // One-parameter fit of y = 1 - a t².
    let mut num = 0.0;
    let mut den = 0.0;
    for &(t, y) in &samples {
        let t2 = t * t;
        num += t2 * (1.0 - y);
        den += t2 * t2;
    }
    let fitted_a = if den > 0.0 { num / den } else { 0.0 };

    // Diagnostic fit y - 1 = b t + c t² + d t⁴: the linear part must be
    // noise. The quartic basis function absorbs the next even order of the
    // true signal, which would otherwise leak into b. Fitted in the scaled
    // variable τ = t / t_ref for conditioning.
    let t_ref = samples.iter().map(|&(t, _)| t).fold(0.0, f64::max).max(1e-300);
    let mut g = [[0.0f64; 3]; 3];
    let mut rhs = [0.0f64; 3];
    for &(t, y) in &samples {
        let tau = t / t_ref;
        let basis = [tau, tau * tau, tau.powi(4)];
        let d = y - 1.0;
        for i in 0..3 {
            for j in 0..3 {
                g[i][j] += basis[i] * basis[j];
            }
            rhs[i] += basis[i] * d;
        }
    }
    let linear_coeff = solve3(&mut g, &mut rhs).map_or(0.0, |x| x[0] / t_ref);
    if linear_coeff.abs() > tol.linear_term {
        return Err(Error::LinearTermDetected {
            coefficient: linear_coeff,
            tolerance: tol.linear_term,
        });
    }

    Ok(DeseparationReport {
        a_param,
        b_param,
        fitted_a,
        linear_coeff,
        fit_window: window,
        relative_error: (fitted_a - a_param).abs() / a_param.max(RELATIVE_ERROR_FLOOR),
    })
}

/// Gaussian elimination with partial pivoting for the 3×3 diagnostic fit.
#[allow(clippy::needless_range_loop)]
fn solve3(g: &mut [[f64; 3]; 3], rhs: &mut [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let pivot = (col..3).max_by(|&a, &b| {
            g[a][col].abs().partial_cmp(&g[b][col].abs()).unwrap()
        })?;
        if g[pivot][col].abs() < f64::MIN_POSITIVE {
            return None;
        }
        g.swap(col, pivot);
        rhs.swap(col, pivot);
        for row in (col + 1)..3 {
            let f = g[row][col] / g[col][col];
            for k in col..3 {
                g[row][k] -= f * g[col][k];
            }
            rhs[row] -= f * rhs[col];
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let mut acc = rhs[row];
        for k in (row + 1)..3 {
            acc -= g[row][k] * x[k];
        }
        x[row] = acc / g[row][row];
    }
    Some(x)
}

/// One candidate state's result in a robustness scan.
#[derive(Debug, Clone)]
pub struct RobustnessEntry {
    pub label: String,
    pub a_param: f64,
    pub b_param: f64,
    /// Truncation leakage of the candidate state.
    pub leakage: f64,
}

/// Compute `A` for each candidate system state coupled to the oscillator
/// environment in its vacuum, and rank ascending by `A` (most robust first).
///
/// Errors if any candidate's truncation leakage exceeds `leakage_threshold`.
pub fn robustness_scan(
    model: &CoupledOscillators,
    states: &[OscillatorState],
    leakage_threshold: f64,
) -> Result<Vec<RobustnessEntry>> {
    let h = model.hamiltonian()?;
    let levels = model.levels();
    let env = model.vacuum();
    let basis_b = complete_orthonormal_basis(&[env], levels)?;

    let mut out = Vec::with_capacity(states.len());
    for state in states {
        if state.leakage() > leakage_threshold {
            return Err(Error::TruncationLeakage {
                label: state.label().to_string(),
                leakage: state.leakage(),
                threshold: leakage_threshold,
            });
        }
        let basis_a = complete_orthonormal_basis(&[state.amplitudes().to_vec()], levels)?;
        out.push(RobustnessEntry {
            label: state.label().to_string(),
            a_param: deseparation_a(&h, &basis_a, &basis_b)?,
            b_param: deseparation_b(&h, &basis_a, &basis_b)?,
            leakage: state.leakage(),
        });
    }
    out.sort_by(|x, y| {
        x.a_param
            .partial_cmp(&y.a_param)
            .unwrap()
            .then_with(|| x.label.cmp(&y.label))
    });
    Ok(out)
}
