//! Deterministic fixtures shared by the criterion benchmarks.

use carrel_core::models::seeded_random_hermitian;
use carrel_core::{
    AntisymmetricMatrix, CVector, ExcitationVector, OneParticleSpace, QuasifreeState,
    SelfDualHamiltonian, C64,
};

/// Dense antisymmetric matrix with smooth pseudo-random entries.
pub fn antisymmetric(order: usize) -> AntisymmetricMatrix {
    AntisymmetricMatrix::from_upper(order, |j, k| {
        let x = (j * 31 + k * 17) as f64;
        C64::new(x.sin(), (0.7 * x).cos())
    })
}

pub fn hamiltonian(n: usize, seed: u64) -> SelfDualHamiltonian {
    let space = OneParticleSpace::canonical(n).expect("n > 0");
    let h0 = seeded_random_hermitian(n, seed).expect("n > 0");
    SelfDualHamiltonian::embed(&space, &h0).expect("embedded generators are self-dual")
}

pub fn kms_state(n: usize, seed: u64, beta: f64) -> (SelfDualHamiltonian, QuasifreeState) {
    let h = hamiltonian(n, seed);
    let state = QuasifreeState::kms(&h, beta).expect("positive beta");
    (h, state)
}

/// `m` generic admissible excitations.
pub fn family(h: &SelfDualHamiltonian, m: usize) -> Vec<ExcitationVector> {
    let dim = h.space().dim();
    (0..m)
        .map(|k| {
            let v = CVector::from_fn(dim, |i, _| {
                let x = (i * 7 + k * 13 + 1) as f64;
                C64::new(x.cos(), (1.3 * x).sin())
            });
            ExcitationVector::symmetrize(h.space(), &v, format!("f{k}")).expect("generic vector")
        })
        .collect()
}
