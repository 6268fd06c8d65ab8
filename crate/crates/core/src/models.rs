//! Preset physical scenarios wired into the dynamics and analysis machinery.
//!
//! These are the models the CLI exposes by name: a qubit measured by a bath
//! of pointer qubits (pure decoherence), a perturbed Bell pair (degenerate
//! Schmidt spectrum), a pair of exchange-coupled truncated oscillators
//! (robustness scans), and a branch-counting model for outcome-frequency
//! statistics over repeated ideal measurements.

use std::f64::consts::FRAC_PI_2;

use crate::dynamics::EvolutionConfig;
use crate::error::{Error, Result};
use crate::hilbert::{
    basis_vector, kron_vec, partial_trace_state, sigma_x, sigma_y, sigma_z, tensor_product,
    vec_inner, vec_norm, BipartiteState, ComplexMatrix, DensityOperator, Subsystem, C64, ONE,
    ZERO,
};

/// Largest environment-qubit count for state-vector paths (2^(n+1)
/// amplitudes must stay desk-sized).
pub const MAX_VECTOR_ENV: usize = 20;

/// A named scenario: initial state plus a ready-to-run evolution problem.
#[derive(Debug, Clone)]
pub struct ScenarioPreset {
    pub name: String,
    pub psi0: BipartiteState,
    pub evolution: EvolutionConfig,
}

/// A qubit system measured by `n_env` pointer qubits without recoil.
///
/// `H = coupling · Σ_k |1⟩⟨1| ⊗ σ_x^(k)` commutes with the system pointer
/// projectors, so the interaction writes the system bit into every
/// environment qubit while the pointer populations stay frozen (pure
/// decoherence). At `t = π/(2·coupling)` the two environment branch states
/// are exactly orthogonal and the measurement is ideal.
///
/// The two branches stay products over environment qubits for all `t`, so
/// the model carries closed forms for the branch states and the coherence
/// factor; these power the large-`n_env` paths where a dense Hamiltonian
/// would be unbuildable.
#[derive(Debug, Clone)]
pub struct VonNeumannModel {
    c0: C64,
    c1: C64,
    n_env: usize,
    coupling: f64,
}

impl VonNeumannModel {
    pub fn new(c: &[C64], n_env: usize, coupling: f64) -> Result<Self> {
        if c.len() != 2 {
            return Err(Error::InvalidParameter(format!(
                "system amplitudes must be a qubit (got length {})",
                c.len()
            )));
        }
        let norm = vec_norm(c);
        if (norm * norm - 1.0).abs() > crate::ToleranceConfig::default().state_norm {
            return Err(Error::NotNormalized {
                deviation: (norm * norm - 1.0).abs(),
                tolerance: crate::ToleranceConfig::default().state_norm,
            });
        }
        if n_env == 0 {
            return Err(Error::InvalidParameter("n_env must be ≥ 1".into()));
        }
        if n_env > MAX_VECTOR_ENV {
            return Err(Error::InvalidParameter(format!(
                "n_env = {n_env} exceeds the state-vector cap {MAX_VECTOR_ENV}"
            )));
        }
        if !coupling.is_finite() || coupling <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "coupling must be > 0, got {coupling}"
            )));
        }
        Ok(Self {
            c0: c[0],
            c1: c[1],
            n_env,
            coupling,
        })
    }

    pub fn n_env(&self) -> usize {
        self.n_env
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn system_amplitudes(&self) -> [C64; 2] {
        [self.c0, self.c1]
    }

    /// Environment dimension `2^n_env`.
    pub fn dim_env(&self) -> usize {
        1usize << self.n_env
    }

    /// Per-qubit branch states `(Φ₀ᵏ(t), Φ₁ᵏ(t))`: the environment qubit
    /// stays `|0⟩` against the system `|0⟩` branch and precesses under
    /// `σ_x` against the `|1⟩` branch.
    pub fn branch_qubit_states(&self, t: f64) -> (Vec<C64>, Vec<C64>) {
        let angle = self.coupling * t;
        let phi0 = vec![ONE, ZERO];
        let phi1 = vec![C64::new(angle.cos(), 0.0), C64::new(0.0, -angle.sin())];
        (phi0, phi1)
    }

    /// `Π_k ⟨Φ₀ᵏ(t)|Φ₁ᵏ(t)⟩`, the coherence factor multiplying the
    /// off-diagonal reduced-density element.
    pub fn overlap_product(&self, t: f64) -> C64 {
        let (phi0, phi1) = self.branch_qubit_states(t);
        let per_qubit = vec_inner(&phi0, &phi1);
        let mut total = ONE;
        for _ in 0..self.n_env {
            total *= per_qubit;
        }
        total
    }

    /// Per-qubit deflections `ε_k(t) = 1 - |⟨Φ₀ᵏ|Φ₁ᵏ⟩|`.
    pub fn epsilons(&self, t: f64) -> Vec<f64> {
        let (phi0, phi1) = self.branch_qubit_states(t);
        let eps = 1.0 - vec_inner(&phi0, &phi1).norm();
        vec![eps; self.n_env]
    }

    /// The exact global state at time `t`, assembled from the two product
    /// branches. Scales to `n_env = 20` (a vector, never a matrix).
    pub fn global_state(&self, t: f64) -> BipartiteState {
        let db = self.dim_env();
        let (_, chi) = self.branch_qubit_states(t);
        let mut branch1 = vec![ONE];
        for _ in 0..self.n_env {
            branch1 = kron_vec(&branch1, &chi);
        }
        let mut amps = vec![ZERO; 2 * db];
        amps[0] = self.c0; // branch 0 stays |0…0⟩
        for (ib, z) in branch1.iter().enumerate() {
            amps[db + ib] = self.c1 * z;
        }
        BipartiteState::from_parts_unchecked(2, db, amps)
    }

    /// Reduced system state at time `t` via honest partial trace of the
    /// global state vector.
    pub fn reduced_system(&self, t: f64) -> DensityOperator {
        partial_trace_state(&self.global_state(t), Subsystem::A)
    }

    /// Dense Hamiltonian `coupling · Σ_k |1⟩⟨1| ⊗ σ_x^(k)`; errors past the
    /// tensor-product dimension cap.
    pub fn hamiltonian(&self) -> Result<ComplexMatrix> {
        let p1 = {
            let mut m = ComplexMatrix::zeros(2, 2);
            m[(1, 1)] = ONE;
            m
        };
        let id2 = ComplexMatrix::identity(2);
        let dim = 2 * self.dim_env();
        let mut h = ComplexMatrix::zeros(dim, dim);
        for k in 0..self.n_env {
            let mut term = p1.clone();
            for j in 0..self.n_env {
                let factor = if j == k { sigma_x() } else { id2.clone() };
                term = tensor_product(&term, &factor)?;
            }
            h = &h + &term;
        }
        Ok(h.scale(C64::new(self.coupling, 0.0)))
    }

    /// Scenario preset with the dense Hamiltonian and a recommended grid
    /// covering one decoherence/recoherence period.
    pub fn preset(&self) -> Result<ScenarioPreset> {
        let h = self.hamiltonian()?;
        let t_max = std::f64::consts::PI / self.coupling;
        let dt = t_max / 200.0;
        let psi0 = self.global_state(0.0);
        Ok(ScenarioPreset {
            name: "von_neumann_measurement".into(),
            psi0,
            evolution: EvolutionConfig::new(h, t_max, dt)?,
        })
    }
}

/// Measurement-chain preset; see [`VonNeumannModel`].
pub fn von_neumann_measurement(c: &[C64], n_env: usize, coupling: f64) -> Result<ScenarioPreset> {
    VonNeumannModel::new(c, n_env, coupling)?.preset()
}

/// Product of slightly-disturbed subsystem overlaps against its exponential
/// approximation.
#[derive(Debug, Clone, Copy)]
pub struct OverlapDecay {
    /// `Π (1 - ε_i)`.
    pub product: f64,
    /// `exp(-Σ ε_i)`.
    pub exponential_approx: f64,
    /// `|product - exponential_approx|`.
    pub gap: f64,
}

/// Evaluate `Π(1-ε_i)` and its `exp(-Σε_i)` approximation for per-subsystem
/// deflections `ε_i ∈ [0, 1)`. Many slight disturbances multiply up to
/// near-orthogonality — the overlap mechanism behind collective symmetry
/// breaking and decoherence alike.
pub fn overlap_product_decay(epsilons: &[f64]) -> Result<OverlapDecay> {
    for &e in epsilons {
        if !(0.0..1.0).contains(&e) {
            return Err(Error::InvalidParameter(format!(
                "ε must lie in [0, 1), got {e}"
            )));
        }
    }
    let product: f64 = epsilons.iter().map(|e| 1.0 - e).product();
    let exponential_approx = (-epsilons.iter().sum::<f64>()).exp();
    Ok(OverlapDecay {
        product,
        exponential_approx,
        gap: (product - exponential_approx).abs(),
    })
}

/// The singlet `(|01⟩ - |10⟩)/√2` with a fixed generic perturbation
/// `H = perturbation · H_gen`.
///
/// The Schmidt spectrum starts exactly degenerate; a generic coupling lifts
/// the degeneracy immediately, which is what this preset is for: stressing
/// degenerate-spectrum handling (the explicit rate equations must refuse,
/// SVD tracking must not care).
pub fn bell_preset(perturbation: f64) -> Result<ScenarioPreset> {
    if !perturbation.is_finite() || perturbation < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "perturbation must be ≥ 0, got {perturbation}"
        )));
    }
    let r = C64::new(0.5f64.sqrt(), 0.0);
    let psi0 = BipartiteState::new(2, 2, vec![ZERO, r, -r, ZERO])?;

    let id2 = ComplexMatrix::identity(2);
    let mut h = ComplexMatrix::zeros(4, 4);
    for (weight, left, right) in [
        (1.0, sigma_x(), sigma_x()),
        (0.6, sigma_z(), sigma_x()),
        (0.4, sigma_y(), sigma_y()),
        (0.3, sigma_z(), id2.clone()),
        (0.2, id2, sigma_x()),
    ] {
        let term = tensor_product(&left, &right)?;
        h = &h + &term.scale(C64::new(weight, 0.0));
    }
    let h = h.scale(C64::new(perturbation, 0.0));
    Ok(ScenarioPreset {
        name: "bell".into(),
        psi0,
        evolution: EvolutionConfig::new(h, 2.0, 0.005)?,
    })
}

/// Total squared norm of measurement branches whose recorded outcome
/// frequency `k/n` deviates from the single-outcome weight `p` by more than
/// `delta`, after `n` ideal measurements on identically prepared qubits.
///
/// Computed by binomial tail summation; for `n ≤ 20` the explicit branch
/// enumeration runs as well and is cross-checked to `1e-12`. The norm of
/// such "maverick" branches shrinks toward zero as the series grows.
pub fn maverick_norm(p: f64, n: usize, delta: f64) -> Result<f64> {
    validate_maverick(p, n, delta)?;
    let by_sum = maverick_norm_binomial(p, n, delta)?;
    if n <= 20 {
        let by_enum = maverick_norm_enumerated(p, n, delta)?;
        if (by_sum - by_enum).abs() > 1e-12 {
            return Err(Error::NumericalInvariant {
                context: "maverick_norm",
                detail: format!(
                    "enumeration {by_enum:.15e} disagrees with summation {by_sum:.15e}"
                ),
            });
        }
    }
    Ok(by_sum)
}

fn validate_maverick(p: f64, n: usize, delta: f64) -> Result<()> {
    if !(0.0 < p && p < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "p must be in (0,1), got {p}"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("n must be ≥ 1".into()));
    }
    if !(0.0 < delta && delta < p.max(1.0 - p)) {
        return Err(Error::InvalidParameter(format!(
            "delta must be in (0, max(p, 1-p)), got {delta}"
        )));
    }
    Ok(())
}

/// Binomial-tail route: `Σ_{|k/n - p| > δ} C(n,k) p^k (1-p)^(n-k)`.
pub fn maverick_norm_binomial(p: f64, n: usize, delta: f64) -> Result<f64> {
    validate_maverick(p, n, delta)?;
    let q = 1.0 - p;
    // pmf recurrence: term_{k+1} = term_k · (n-k)/(k+1) · p/q.
    let mut term = q.powi(n as i32);
    let mut total = 0.0;
    for k in 0..=n {
        if (k as f64 / n as f64 - p).abs() > delta {
            total += term;
        }
        if k < n {
            term *= (n - k) as f64 / (k + 1) as f64 * (p / q);
        }
    }
    Ok(total)
}

/// Branch-enumeration route: run the two-qubit measurement interaction to
/// its ideal point, read off the two branch weights, then walk all `2^n`
/// outcome records and accumulate those with deviant frequencies.
pub fn maverick_norm_enumerated(p: f64, n: usize, delta: f64) -> Result<f64> {
    validate_maverick(p, n, delta)?;
    if n > 20 {
        return Err(Error::InvalidParameter(format!(
            "enumeration supports n ≤ 20, got {n}"
        )));
    }
    // One ideal measurement, realized dynamically: the pointer qubit ends
    // perfectly correlated with the system qubit.
    let c = [C64::new(p.sqrt(), 0.0), C64::new((1.0 - p).sqrt(), 0.0)];
    let model = VonNeumannModel::new(&c, 1, 1.0)?;
    let chi = model.global_state(FRAC_PI_2);
    let w0 = chi.amplitude(0, 0).norm_sqr();
    let w1 = chi.amplitude(1, 1).norm_sqr();
    let off = chi.amplitude(0, 1).norm() + chi.amplitude(1, 0).norm();
    if off > 1e-12 {
        return Err(Error::NumericalInvariant {
            context: "maverick_norm_enumerated",
            detail: format!("measurement not ideal: off-branch amplitude {off:.3e}"),
        });
    }

    let mut total = 0.0;
    for record in 0u64..(1u64 << n) {
        let mut weight = 1.0;
        let mut ones = 0usize;
        for bit in 0..n {
            if record >> bit & 1 == 1 {
                weight *= w1;
                ones += 1;
            } else {
                weight *= w0;
            }
        }
        if (ones as f64 / n as f64 - p).abs() > delta {
            total += weight;
        }
    }
    Ok(total)
}

/// Two identical truncated harmonic oscillators with bilinear exchange
/// coupling `g (a†⊗b + a⊗b†)`.
#[derive(Debug, Clone, Copy)]
pub struct CoupledOscillators {
    levels: usize,
    coupling: f64,
}

impl CoupledOscillators {
    pub fn new(levels: usize, coupling: f64) -> Result<Self> {
        if levels < 2 {
            return Err(Error::InvalidParameter(format!(
                "need at least 2 oscillator levels, got {levels}"
            )));
        }
        if !coupling.is_finite() {
            return Err(Error::InvalidParameter("coupling must be finite".into()));
        }
        Ok(Self { levels, coupling })
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    /// `g (a†⊗b + a⊗b†)` on the truncated Fock spaces.
    pub fn hamiltonian(&self) -> Result<ComplexMatrix> {
        let a = annihilation(self.levels);
        let ad = a.dagger();
        let exchange = &tensor_product(&ad, &a)? + &tensor_product(&a, &ad)?;
        Ok(exchange.scale(C64::new(self.coupling, 0.0)))
    }

    /// Environment ground state `|0⟩`.
    pub fn vacuum(&self) -> Vec<C64> {
        basis_vector(self.levels, 0)
    }
}

/// Truncated annihilation operator: `a|n⟩ = √n |n-1⟩`.
pub fn annihilation(levels: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(levels, levels);
    for n in 1..levels {
        m[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
    }
    m
}

/// A labeled oscillator state with its truncation leakage.
#[derive(Debug, Clone)]
pub struct OscillatorState {
    label: String,
    amplitudes: Vec<C64>,
    leakage: f64,
}

impl OscillatorState {
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn leakage(&self) -> f64 {
        self.leakage
    }

    /// Mean occupation `⟨n⟩` of the (renormalized) truncated state.
    pub fn mean_occupation(&self) -> f64 {
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(n, z)| n as f64 * z.norm_sqr())
            .sum()
    }
}

/// Number state `|n⟩`; exact in any truncation that contains it.
pub fn fock_state(n: usize, levels: usize) -> Result<OscillatorState> {
    if n >= levels {
        return Err(Error::InvalidParameter(format!(
            "Fock level {n} outside truncation {levels}"
        )));
    }
    Ok(OscillatorState {
        label: format!("fock_{n}"),
        amplitudes: basis_vector(levels, n),
        leakage: 0.0,
    })
}

/// Coherent state from the truncated displacement series, renormalized; the
/// discarded weight is reported as leakage.
pub fn coherent_state(alpha: f64, levels: usize) -> Result<OscillatorState> {
    if !alpha.is_finite() {
        return Err(Error::InvalidParameter("alpha must be finite".into()));
    }
    let mut amps = Vec::with_capacity(levels);
    let mut c = (-alpha * alpha / 2.0).exp();
    for n in 0..levels {
        amps.push(C64::new(c, 0.0));
        c *= alpha / ((n + 1) as f64).sqrt();
    }
    let kept: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
    let leakage = (1.0 - kept).max(0.0);
    let scale = kept.sqrt();
    for z in amps.iter_mut() {
        *z /= scale;
    }
    Ok(OscillatorState {
        label: format!("coherent_{alpha:.6}"),
        amplitudes: amps,
        leakage,
    })
}
