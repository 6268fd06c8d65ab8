//! Schmidt canonical form of bipartite pure states.
//!
//! `ψ = Σᵢ √pᵢ φᵢ ⊗ Φᵢ` with both bases orthonormal and the coefficients
//! real, nonnegative and descending. The decomposition diagonalizes both
//! reduced density matrices at once, so entanglement entropy and the
//! avoided-crossing dynamics of the weights read off directly.
//!
//! Inside a degenerate weight block the bases are only defined up to a joint
//! rotation; [`align_to_reference`] resolves that freedom (and the per-vector
//! phase freedom) against a reference decomposition, which is what makes
//! coefficient trajectories continuous in time.

use crate::error::{Error, Result};
use crate::hilbert::{
    svd, BipartiteState, ComplexMatrix, DensityOperator, Subsystem, C64, ZERO,
};
use crate::tolerance::ToleranceConfig;

#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    /// Coefficients `√pᵢ ≥ 0`, descending in [`schmidt_decompose`] output
    /// (an aligned decomposition keeps the reference ordering instead).
    coeffs: Vec<f64>,
    /// Columns `φᵢ`, orthonormal, `dim_a × r`.
    basis_a: ComplexMatrix,
    /// Columns `Φᵢ`, orthonormal, `dim_b × r`.
    basis_b: ComplexMatrix,
    /// `flags[i]` marks `|pᵢ - pᵢ₊₁|` below the degeneracy threshold.
    degeneracy_flags: Vec<bool>,
}

impl SchmidtDecomposition {
    pub fn rank(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Schmidt weights `pᵢ = coeffᵢ²`.
    pub fn weights(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c * c).collect()
    }

    pub fn basis_a(&self) -> &ComplexMatrix {
        &self.basis_a
    }

    pub fn basis_b(&self) -> &ComplexMatrix {
        &self.basis_b
    }

    pub fn degeneracy_flags(&self) -> &[bool] {
        &self.degeneracy_flags
    }

    pub fn dim_a(&self) -> usize {
        self.basis_a.rows()
    }

    pub fn dim_b(&self) -> usize {
        self.basis_b.rows()
    }

    /// `Σᵢ √pᵢ φᵢ ⊗ Φᵢ` as a state vector.
    pub fn reconstruct(&self) -> BipartiteState {
        let (da, db) = (self.dim_a(), self.dim_b());
        let mut amps = vec![ZERO; da * db];
        for k in 0..self.rank() {
            let c = self.coeffs[k];
            if c == 0.0 {
                continue;
            }
            for ia in 0..da {
                let x = self.basis_a[(ia, k)] * c;
                if x == ZERO {
                    continue;
                }
                for ib in 0..db {
                    amps[ia * db + ib] += x * self.basis_b[(ib, k)];
                }
            }
        }
        BipartiteState::from_parts_unchecked(da, db, amps)
    }

    /// `max` amplitude deviation between the reconstruction and `psi`.
    pub fn reconstruction_error(&self, psi: &BipartiteState) -> f64 {
        self.reconstruct()
            .amplitudes()
            .iter()
            .zip(psi.amplitudes())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Compute the Schmidt decomposition of a normalized bipartite state.
///
/// The amplitude matrix is factored by SVD; each `φᵢ` gets its phase pinned
/// so that its first component of modulus above `tolerances.phase_pivot` is
/// real and positive, with the conjugate phase absorbed into `Φᵢ`.
pub fn schmidt_decompose(
    psi: &BipartiteState,
    tolerances: &ToleranceConfig,
) -> Result<SchmidtDecomposition> {
    let m = psi.amplitude_matrix();
    let f = svd(&m)?;
    let r = psi.dim_a().min(psi.dim_b());
    let mut basis_a = f.u.truncate_columns(r);
    let mut basis_b = f.v.conjugate().truncate_columns(r);
    let coeffs = f.s;

    for k in 0..r {
        let pivot = (0..basis_a.rows())
            .find(|&i| basis_a[(i, k)].norm() > tolerances.phase_pivot)
            .unwrap_or(0);
        let z = basis_a[(pivot, k)];
        if z == ZERO {
            continue;
        }
        let phase = z / z.norm();
        let inv = phase.conj();
        for i in 0..basis_a.rows() {
            basis_a[(i, k)] *= inv;
        }
        for i in 0..basis_b.rows() {
            basis_b[(i, k)] *= phase;
        }
    }

    let flags = gap_flags(&coeffs, tolerances.degeneracy_gap);
    Ok(SchmidtDecomposition {
        coeffs,
        basis_a,
        basis_b,
        degeneracy_flags: flags,
    })
}

fn gap_flags(coeffs: &[f64], threshold: f64) -> Vec<bool> {
    let r = coeffs.len();
    (0..r)
        .map(|i| i + 1 < r && (coeffs[i] * coeffs[i] - coeffs[i + 1] * coeffs[i + 1]).abs() < threshold)
        .collect()
}

/// `ρ = Σᵢ pᵢ |φᵢ⟩⟨φᵢ|` (or the `Φ` version), the reduced density operator
/// in its diagonalizing basis.
pub fn reduced_density(dec: &SchmidtDecomposition, which: Subsystem) -> DensityOperator {
    let basis = match which {
        Subsystem::A => &dec.basis_a,
        Subsystem::B => &dec.basis_b,
    };
    let dim = basis.rows();
    let mut m = ComplexMatrix::zeros(dim, dim);
    for k in 0..dec.rank() {
        let p = dec.coeffs[k] * dec.coeffs[k];
        if p == 0.0 {
            continue;
        }
        for i in 0..dim {
            let x = basis[(i, k)] * p;
            for j in 0..dim {
                m[(i, j)] += x * basis[(j, k)].conj();
            }
        }
    }
    DensityOperator::from_matrix_unchecked(m)
}

/// Entanglement entropy `-Σ pᵢ ln pᵢ` in nats; weights below the configured
/// floor are dropped.
pub fn entanglement_entropy(dec: &SchmidtDecomposition, tolerances: &ToleranceConfig) -> f64 {
    dec.weights()
        .iter()
        .filter(|&&p| p >= tolerances.entropy_weight_floor)
        .map(|&p| -p * p.ln())
        .sum()
}

/// Permute, re-phase and (inside degenerate blocks) rotate `dec` to follow
/// `reference` as continuously as possible.
///
/// The permutation maximizes `Σᵢ |⟨φᵢ_ref|φᵢ⟩|`; each matched vector is then
/// phase-aligned, and every degenerate block gets the orthonormal rotation
/// closest to the reference block (a Procrustes fit), applied jointly to the
/// `φ` and (conjugated) `Φ` sides so the reconstructed state is untouched.
/// Coefficients travel with their vectors: the output keeps the reference
/// ordering, not the descending one.
pub fn align_to_reference(
    dec: &SchmidtDecomposition,
    reference: &SchmidtDecomposition,
    tolerances: &ToleranceConfig,
) -> Result<SchmidtDecomposition> {
    let r = dec.rank();
    if reference.rank() != r || reference.dim_a() != dec.dim_a() || reference.dim_b() != dec.dim_b()
    {
        return Err(Error::DimensionMismatch {
            context: "align_to_reference",
            expected: reference.rank(),
            got: r,
        });
    }

    // Score ref row i against current column j by φ overlap magnitude.
    let score: Vec<Vec<f64>> = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| {
                    let mut o = ZERO;
                    for k in 0..dec.dim_a() {
                        o += reference.basis_a[(k, i)].conj() * dec.basis_a[(k, j)];
                    }
                    o.norm()
                })
                .collect()
        })
        .collect();
    let perm = max_assignment(&score);

    let mut coeffs: Vec<f64> = perm.iter().map(|&j| dec.coeffs[j]).collect();
    let mut basis_a = ComplexMatrix::from_fn(dec.dim_a(), r, |i, k| dec.basis_a[(i, perm[k])]);
    let mut basis_b = ComplexMatrix::from_fn(dec.dim_b(), r, |i, k| dec.basis_b[(i, perm[k])]);

    // Degenerate blocks by weight chaining (order-independent).
    for block in degenerate_blocks(&coeffs, tolerances.degeneracy_gap) {
        if block.len() == 1 {
            let k = block[0];
            // Rotate the joint phase so ⟨φ_ref|φ⟩ is real and positive.
            let mut o = ZERO;
            for i in 0..dec.dim_a() {
                o += basis_a[(i, k)].conj() * reference.basis_a[(i, k)];
            }
            if o.norm() < 1e-14 {
                continue; // orthogonal to the reference: phase is arbitrary
            }
            let w = o / o.norm();
            apply_block_rotation(&mut basis_a, &mut basis_b, &[k], &[w]);
        } else {
            // Procrustes: W = U V† of X†R maximizes Re tr(W† X† R).
            let k = block.len();
            let x_dag_r = ComplexMatrix::from_fn(k, k, |a, b| {
                let mut acc = ZERO;
                for i in 0..dec.dim_a() {
                    acc += basis_a[(i, block[a])].conj() * reference.basis_a[(i, block[b])];
                }
                acc
            });
            let f = svd(&x_dag_r)?;
            let w = &f.u * &f.v.dagger();
            let w_flat: Vec<C64> = (0..k * k).map(|idx| w[(idx / k, idx % k)]).collect();
            apply_block_rotation(&mut basis_a, &mut basis_b, &block, &w_flat);
        }
    }

    // Exact coefficient carry-over; only order may change.
    let flags = gap_flags(&coeffs, tolerances.degeneracy_gap);
    coeffs.shrink_to_fit();
    Ok(SchmidtDecomposition {
        coeffs,
        basis_a,
        basis_b,
        degeneracy_flags: flags,
    })
}

/// Overlap of matched columns `|⟨φᵢ_ref|φᵢ⟩|` per track, used to flag
/// identity-interchange events.
pub fn track_overlaps(dec: &SchmidtDecomposition, reference: &SchmidtDecomposition) -> Vec<f64> {
    (0..dec.rank())
        .map(|k| {
            let mut o = ZERO;
            for i in 0..dec.dim_a() {
                o += reference.basis_a[(i, k)].conj() * dec.basis_a[(i, k)];
            }
            o.norm()
        })
        .collect()
}

fn apply_block_rotation(
    basis_a: &mut ComplexMatrix,
    basis_b: &mut ComplexMatrix,
    block: &[usize],
    w: &[C64],
) {
    let k = block.len();
    debug_assert_eq!(w.len(), k * k);
    for (mat, conjugate) in [(basis_a, false), (basis_b, true)] {
        let rows = mat.rows();
        let old: Vec<Vec<C64>> = block.iter().map(|&c| mat.column(c)).collect();
        for (bi, &col) in block.iter().enumerate() {
            for row in 0..rows {
                let mut acc = ZERO;
                for (aj, old_col) in old.iter().enumerate() {
                    let wij = w[aj * k + bi];
                    let wij = if conjugate { wij.conj() } else { wij };
                    acc += old_col[row] * wij;
                }
                mat[(row, col)] = acc;
            }
        }
    }
}

/// Groups of indices whose weights chain within `threshold` of each other.
fn degenerate_blocks(coeffs: &[f64], threshold: f64) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..coeffs.len()).collect();
    order.sort_by(|&a, &b| coeffs[b].partial_cmp(&coeffs[a]).unwrap());
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut current: Vec<usize> = Vec::new();
    let mut prev_p = f64::NAN;
    for &idx in &order {
        let p = coeffs[idx] * coeffs[idx];
        if !current.is_empty() && (prev_p - p).abs() >= threshold {
            blocks.push(std::mem::take(&mut current));
        }
        current.push(idx);
        prev_p = p;
    }
    if !current.is_empty() {
        blocks.push(current);
    }
    blocks
}

/// Maximum-score assignment (Kuhn–Munkres with potentials). Returns, for
/// each row `i`, the column `perm[i]` of the optimal matching.
fn max_assignment(score: &[Vec<f64>]) -> Vec<usize> {
    let n = score.len();
    if n == 0 {
        return Vec::new();
    }
    let cost = |i: usize, j: usize| -score[i][j];
    let inf = f64::INFINITY;
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut matched = vec![0usize; n + 1]; // matched[j] = row occupying column j (1-based)
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        matched[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![inf; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = matched[j0];
            let mut delta = inf;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[matched[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if matched[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            matched[j0] = matched[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut perm = vec![0usize; n];
    for j in 1..=n {
        if matched[j] != 0 {
            perm[matched[j] - 1] = j - 1;
        }
    }
    perm
}
