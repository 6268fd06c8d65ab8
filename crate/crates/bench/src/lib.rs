//! Deterministic input generators shared by the benchmark targets.

use decoh_core::hilbert::{vec_norm, BipartiteState, ComplexMatrix, C64};

/// Small deterministic LCG so benches never depend on an RNG crate.
pub struct Lcg(u64);

impl Lcg {
    pub fn new(seed: u64) -> Self {
        Self(seed)
    }

    pub fn next_f64(&mut self) -> f64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        ((self.0 >> 11) as f64) / ((1u64 << 53) as f64) - 0.5
    }

    pub fn next_c64(&mut self) -> C64 {
        C64::new(self.next_f64(), self.next_f64())
    }
}

pub fn random_state(lcg: &mut Lcg, dim_a: usize, dim_b: usize) -> BipartiteState {
    let raw: Vec<C64> = (0..dim_a * dim_b).map(|_| lcg.next_c64()).collect();
    let norm = vec_norm(&raw);
    BipartiteState::new(dim_a, dim_b, raw.iter().map(|z| z / norm).collect())
        .expect("normalized by construction")
}

pub fn random_hermitian(lcg: &mut Lcg, n: usize) -> ComplexMatrix {
    let raw: Vec<C64> = (0..n * n).map(|_| lcg.next_c64()).collect();
    ComplexMatrix::from_vec(n, n, raw).unwrap().hermitize()
}
