//! Model generators: tight-binding chains and seeded random Hermitian matrices.

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, CVector, C64};
use crate::one_particle::{ExcitationVector, OneParticleSpace};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Open chain with hopping `-t` between neighbours and `-mu` on the diagonal.
pub fn chain_hamiltonian(n: usize, hopping: f64, mu: f64) -> Result<CMatrix> {
    if n == 0 {
        return Err(Error::InvalidDimension(
            "chain needs at least one site".into(),
        ));
    }
    let mut h0 = CMatrix::zeros(n, n);
    for i in 0..n {
        h0[(i, i)] = C64::from(-mu);
        if i + 1 < n {
            h0[(i, i + 1)] = C64::from(-hopping);
            h0[(i + 1, i)] = C64::from(-hopping);
        }
    }
    Ok(h0)
}

/// Gaussian Hermitian matrix `(A + A^dagger)/2` with i.i.d. standard complex normal entries.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    let a = CMatrix::from_fn(n, n, |_, _| gaussian(rng));
    (&a + a.adjoint()).scale(0.5)
}

/// Convenience wrapper for a reproducible random model.
pub fn seeded_random_hermitian(n: usize, seed: u64) -> Result<CMatrix> {
    use rand::SeedableRng;
    if n == 0 {
        return Err(Error::InvalidDimension(
            "random model needs at least one mode".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(random_hermitian(&mut rng, n))
}

pub fn random_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CVector {
    CVector::from_fn(dim, |_, _| gaussian(rng))
}

/// Random admissible excitation vector (symmetrized Gaussian vector).
pub fn random_excitation<R: Rng + ?Sized>(
    rng: &mut R,
    space: &OneParticleSpace,
    label: impl Into<String>,
) -> ExcitationVector {
    let label = label.into();
    loop {
        let v = random_vector(rng, space.dim());
        if let Ok(f) = ExcitationVector::symmetrize(space, &v, label.clone()) {
            return f;
        }
    }
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im)
}
