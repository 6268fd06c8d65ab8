//! Bipartite pure states, density operators, partial traces, observables.

use super::eigen::hermitian_eigh;
use super::matrix::{kron_vec, vec_norm, ComplexMatrix, C64, ZERO};
use crate::error::{Error, Result};
use crate::tolerance::ToleranceConfig;

/// Which tensor factor an operation refers to. `A` is the system (φ side),
/// `B` the environment (Φ side).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Normalized pure state on `H_A ⊗ H_B`.
///
/// Amplitudes are flattened row-major: the pair `(i_a, i_b)` lives at
/// `i_a * dim_b + i_b`.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteState {
    dim_a: usize,
    dim_b: usize,
    amplitudes: Vec<C64>,
}

impl BipartiteState {
    /// Validating constructor; requires `‖ψ‖² = 1` within the configured
    /// tolerance.
    pub fn new(dim_a: usize, dim_b: usize, amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.len() != dim_a * dim_b {
            return Err(Error::DimensionMismatch {
                context: "BipartiteState::new",
                expected: dim_a * dim_b,
                got: amplitudes.len(),
            });
        }
        let tol = ToleranceConfig::default();
        let norm_sq: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > tol.state_norm {
            return Err(Error::NotNormalized {
                deviation: (norm_sq - 1.0).abs(),
                tolerance: tol.state_norm,
            });
        }
        Ok(Self {
            dim_a,
            dim_b,
            amplitudes,
        })
    }

    /// Product state `φ ⊗ Φ`; the factors are normalized first.
    pub fn from_product(phi: &[C64], big_phi: &[C64]) -> Result<Self> {
        let na = vec_norm(phi);
        let nb = vec_norm(big_phi);
        if na == 0.0 || nb == 0.0 {
            return Err(Error::InvalidParameter(
                "product factors must be nonzero".into(),
            ));
        }
        let a: Vec<C64> = phi.iter().map(|z| z / na).collect();
        let b: Vec<C64> = big_phi.iter().map(|z| z / nb).collect();
        Self::new(phi.len(), big_phi.len(), kron_vec(&a, &b))
    }

    pub(crate) fn from_parts_unchecked(dim_a: usize, dim_b: usize, amplitudes: Vec<C64>) -> Self {
        Self {
            dim_a,
            dim_b,
            amplitudes,
        }
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn total_dim(&self) -> usize {
        self.dim_a * self.dim_b
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, i_a: usize, i_b: usize) -> C64 {
        self.amplitudes[i_a * self.dim_b + i_b]
    }

    pub fn norm(&self) -> f64 {
        vec_norm(&self.amplitudes)
    }

    pub(crate) fn renormalize(&mut self) {
        let n = self.norm();
        for z in self.amplitudes.iter_mut() {
            *z /= n;
        }
    }

    /// The `dim_a × dim_b` amplitude matrix `M[i_a, i_b] = ψ(i_a, i_b)`,
    /// whose singular values are the Schmidt coefficients.
    pub fn amplitude_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_vec(self.dim_a, self.dim_b, self.amplitudes.clone())
            .expect("length enforced by construction")
    }

    /// `⟨self|other⟩`.
    pub fn overlap(&self, other: &Self) -> C64 {
        super::matrix::vec_inner(&self.amplitudes, &other.amplitudes)
    }
}

/// Density operator: Hermitian, unit trace, positive semidefinite within
/// tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
}

impl DensityOperator {
    /// Validating constructor: checks Hermiticity, unit trace, and that all
    /// eigenvalues are ≥ `-eigenvalue_floor`.
    pub fn new(matrix: ComplexMatrix, tolerances: &ToleranceConfig) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                context: "DensityOperator::new",
                expected: matrix.rows(),
                got: matrix.cols(),
            });
        }
        let dev = matrix.hermiticity_deviation();
        if dev > tolerances.hermiticity {
            return Err(Error::InvalidDensity {
                reason: format!("not Hermitian: deviation {dev:.3e}"),
            });
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > tolerances.state_norm || tr.im.abs() > tolerances.state_norm {
            return Err(Error::InvalidDensity {
                reason: format!("trace {tr} differs from 1"),
            });
        }
        let (vals, _) = hermitian_eigh(&matrix, tolerances)?;
        if let Some(&min) = vals.last() {
            if min < -tolerances.eigenvalue_floor {
                return Err(Error::InvalidDensity {
                    reason: format!("negative eigenvalue {min:.3e}"),
                });
            }
        }
        Ok(Self { matrix })
    }

    /// `|ψ⟩⟨ψ|` for a normalized vector.
    pub fn from_pure(psi: &[C64]) -> Self {
        let n = psi.len();
        Self {
            matrix: ComplexMatrix::from_fn(n, n, |i, j| psi[i] * psi[j].conj()),
        }
    }

    pub(crate) fn from_matrix_unchecked(matrix: ComplexMatrix) -> Self {
        Self { matrix }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// `tr ρ²`, 1 exactly for pure states.
    pub fn purity(&self) -> f64 {
        let m = &self.matrix;
        let mut acc = 0.0;
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                // tr ρ² = Σ_ij ρ_ij ρ_ji = Σ_ij |ρ_ij|² for Hermitian ρ.
                acc += (m[(i, j)] * m[(j, i)]).re;
            }
        }
        acc
    }

    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self, tolerances: &ToleranceConfig) -> Result<Vec<f64>> {
        Ok(hermitian_eigh(&self.matrix, tolerances)?.0)
    }
}

/// Reduced density operator of a pure bipartite state.
pub fn partial_trace_state(psi: &BipartiteState, keep: Subsystem) -> DensityOperator {
    let (da, db) = (psi.dim_a(), psi.dim_b());
    let m = match keep {
        Subsystem::A => ComplexMatrix::from_fn(da, da, |i, j| {
            let mut acc = ZERO;
            for b in 0..db {
                acc += psi.amplitude(i, b) * psi.amplitude(j, b).conj();
            }
            acc
        }),
        Subsystem::B => ComplexMatrix::from_fn(db, db, |i, j| {
            let mut acc = ZERO;
            for a in 0..da {
                acc += psi.amplitude(a, i) * psi.amplitude(a, j).conj();
            }
            acc
        }),
    };
    DensityOperator::from_matrix_unchecked(m)
}

/// Reduced density operator of a density operator on `H_A ⊗ H_B` with factor
/// dimensions `dims = (dim_a, dim_b)`.
///
/// Errors if `dim_a · dim_b` disagrees with the operator dimension.
pub fn partial_trace(
    rho: &DensityOperator,
    dims: (usize, usize),
    keep: Subsystem,
) -> Result<DensityOperator> {
    let (da, db) = dims;
    if da * db != rho.dim() {
        return Err(Error::DimensionMismatch {
            context: "partial_trace",
            expected: rho.dim(),
            got: da * db,
        });
    }
    let m = rho.matrix();
    let out = match keep {
        Subsystem::A => ComplexMatrix::from_fn(da, da, |i, j| {
            let mut acc = ZERO;
            for b in 0..db {
                acc += m[(i * db + b, j * db + b)];
            }
            acc
        }),
        Subsystem::B => ComplexMatrix::from_fn(db, db, |i, j| {
            let mut acc = ZERO;
            for a in 0..da {
                acc += m[(a * db + i, a * db + j)];
            }
            acc
        }),
    };
    Ok(DensityOperator::from_matrix_unchecked(out))
}

/// `tr(ρ A)` for a Hermitian observable; the imaginary residue is checked
/// against tolerance and discarded.
pub fn expectation_value(
    rho: &DensityOperator,
    observable: &ComplexMatrix,
    tolerances: &ToleranceConfig,
) -> Result<f64> {
    if !observable.is_hermitian(tolerances.hermiticity) {
        return Err(Error::NotHermitian {
            deviation: observable.hermiticity_deviation(),
            tolerance: tolerances.hermiticity,
        });
    }
    if observable.rows() != rho.dim() {
        return Err(Error::DimensionMismatch {
            context: "expectation_value",
            expected: rho.dim(),
            got: observable.rows(),
        });
    }
    let m = rho.matrix();
    let mut acc = ZERO;
    for i in 0..m.rows() {
        for k in 0..m.cols() {
            acc += m[(i, k)] * observable[(k, i)];
        }
    }
    check_real(acc, "expectation_value", tolerances)
}

/// `⟨ψ|A|ψ⟩` for a normalized vector.
pub fn expectation_value_pure(
    psi: &[C64],
    observable: &ComplexMatrix,
    tolerances: &ToleranceConfig,
) -> Result<f64> {
    if !observable.is_hermitian(tolerances.hermiticity) {
        return Err(Error::NotHermitian {
            deviation: observable.hermiticity_deviation(),
            tolerance: tolerances.hermiticity,
        });
    }
    if observable.cols() != psi.len() {
        return Err(Error::DimensionMismatch {
            context: "expectation_value_pure",
            expected: psi.len(),
            got: observable.cols(),
        });
    }
    let a_psi = observable.matvec(psi);
    let acc = super::matrix::vec_inner(psi, &a_psi);
    check_real(acc, "expectation_value_pure", tolerances)
}

/// `⟨φ_a ⊗ Φ_b | v⟩` for all column pairs of two bases on the respective
/// factors, with `v` a vector on the product space in the `(i_a, i_b)`
/// flattening. The workhorse for matrix elements in Schmidt product bases.
pub(crate) fn product_basis_elements(
    basis_a: &ComplexMatrix,
    basis_b: &ComplexMatrix,
    v: &[C64],
) -> Vec<Vec<C64>> {
    let (da, db) = (basis_a.rows(), basis_b.rows());
    debug_assert_eq!(v.len(), da * db);
    let (na, nb) = (basis_a.cols(), basis_b.cols());
    let mut out = vec![vec![ZERO; nb]; na];
    // Contract the A side first: w_a[ib] = Σ_ia conj(φ_a[ia]) v[ia, ib].
    for (a, row_out) in out.iter_mut().enumerate() {
        let mut w = vec![ZERO; db];
        for ia in 0..da {
            let f = basis_a[(ia, a)].conj();
            if f == ZERO {
                continue;
            }
            let row = &v[ia * db..(ia + 1) * db];
            for (ib, x) in row.iter().enumerate() {
                w[ib] += f * x;
            }
        }
        for (b, slot) in row_out.iter_mut().enumerate() {
            *slot = super::matrix::vec_inner(&basis_b.column(b), &w);
        }
    }
    out
}

fn check_real(z: C64, context: &'static str, tolerances: &ToleranceConfig) -> Result<f64> {
    if z.im.abs() > tolerances.hermiticity {
        return Err(Error::NumericalInvariant {
            context,
            detail: format!("imaginary residue {:.3e}", z.im),
        });
    }
    Ok(z.re)
}

/// Observable `A = Σ_n |n⟩ a_n ⟨n|` from an orthonormal eigenbasis (matrix
/// columns) and a real measurement scale.
pub fn build_observable(
    basis: &ComplexMatrix,
    scale: &[f64],
    tolerances: &ToleranceConfig,
) -> Result<ComplexMatrix> {
    if scale.len() != basis.cols() {
        return Err(Error::DimensionMismatch {
            context: "build_observable",
            expected: basis.cols(),
            got: scale.len(),
        });
    }
    let dev = basis.orthonormality_deviation();
    if dev > tolerances.orthonormality {
        return Err(Error::NonOrthonormalBasis { deviation: dev });
    }
    let mut out = ComplexMatrix::zeros(basis.rows(), basis.rows());
    for (n, &a) in scale.iter().enumerate() {
        for i in 0..basis.rows() {
            for j in 0..basis.rows() {
                out[(i, j)] += basis[(i, n)] * a * basis[(j, n)].conj();
            }
        }
    }
    Ok(out)
}
