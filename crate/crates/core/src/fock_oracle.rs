//! Fock-space oracle: an explicit irreducible representation of the self-dual CAR
//! algebra on `C^{2^n}`, Gibbs densities and Umegaki relative entropies.
//!
//! Mode operators `a_j` are Jordan-Wigner matrices; bit `j` of a basis index is
//! the occupation of the `j`-th positive-energy mode of `h` (ascending energy).
//! The representation sends `B(e_j) -> a_j^dagger` and `B(Gamma e_j) -> a_j`,
//! which is the choice that reproduces the ground two-point function
//! `<Gamma f, P g>` in the vacuum. `H = sum_j eps_j a_j^dagger a_j` is diagonal in
//! the occupation basis and annihilates the vacuum.
//!
//! Dynamics act as `alpha_t(X) = U_t X U_t^dagger` with `U_t = exp(-i t H)`, so
//! that `alpha_t(pi(B(f))) = pi(B(u_t f))`.
//!
//! Memory is `O(n 4^n)`; keep `n` at desk scale.

use crate::error::{Error, Result};
use crate::linalg::{inner, CMatrix, CVector, HermitianEigen, C64, I, ONE, ZERO};
use crate::one_particle::{ExcitationVector, OneParticleSpace, SelfDualHamiltonian};

pub const DEFAULT_MAX_MODES: usize = 10;

/// Tolerances a density matrix must satisfy on construction.
pub const DENSITY_TOLERANCE: f64 = 1e-12;

/// Reference densities with an eigenvalue at or below this are rejected by [`umegaki`].
pub const SUPPORT_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone)]
pub struct FockRep {
    space: OneParticleSpace,
    annihilators: Vec<CMatrix>,
    hamiltonian: CMatrix,
    energies: Vec<f64>,
    mode_energies: Vec<f64>,
    mode_vectors: Vec<CVector>,
    gamma_vectors: Vec<CVector>,
}

impl FockRep {
    pub fn new(h: &SelfDualHamiltonian) -> Result<Self> {
        Self::with_max_modes(h, DEFAULT_MAX_MODES)
    }

    pub fn with_max_modes(h: &SelfDualHamiltonian, max_modes: usize) -> Result<Self> {
        if h.has_zero_modes() {
            return Err(Error::ZeroMode {
                energy: h.smallest_magnitude(),
            });
        }
        let n = h.modes().len();
        if n > max_modes {
            return Err(Error::ResourceLimit(format!(
                "Fock oracle needs 2^{n} states, above the cap of {max_modes} modes"
            )));
        }
        let dim = 1usize << n;
        let annihilators = (0..n).map(|j| jordan_wigner(n, j)).collect();
        let mode_energies: Vec<f64> = h.modes().iter().map(|m| m.energy).collect();
        let energies: Vec<f64> = (0..dim)
            .map(|b| {
                (0..n)
                    .filter(|&j| b & (1 << j) != 0)
                    .map(|j| mode_energies[j])
                    .sum()
            })
            .collect();
        let hamiltonian = CMatrix::from_diagonal(&CVector::from_iterator(
            dim,
            energies.iter().map(|&e| C64::from(e)),
        ));
        let mode_vectors: Vec<CVector> = h.modes().iter().map(|m| m.vector.clone()).collect();
        let gamma_vectors = mode_vectors.iter().map(|e| h.space().gamma(e)).collect();
        Ok(Self {
            space: h.space().clone(),
            annihilators,
            hamiltonian,
            energies,
            mode_energies,
            mode_vectors,
            gamma_vectors,
        })
    }

    pub fn modes(&self) -> usize {
        self.annihilators.len()
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    pub fn space(&self) -> &OneParticleSpace {
        &self.space
    }

    pub fn annihilators(&self) -> &[CMatrix] {
        &self.annihilators
    }

    pub fn hamiltonian(&self) -> &CMatrix {
        &self.hamiltonian
    }

    /// Diagonal of `H` in the occupation basis.
    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn mode_energies(&self) -> &[f64] {
        &self.mode_energies
    }

    pub fn mode_vectors(&self) -> &[CVector] {
        &self.mode_vectors
    }

    /// The empty-occupation state.
    pub fn vacuum(&self) -> CVector {
        let mut v = CVector::zeros(self.dim());
        v[0] = ONE;
        v
    }

    pub fn number_operator(&self, j: usize) -> CMatrix {
        self.annihilators[j].adjoint() * &self.annihilators[j]
    }

    /// `pi(B(f))`, complex-linear in `f`.
    pub fn represent(&self, f: &CVector) -> Result<CMatrix> {
        self.space.check_vector(f)?;
        let mut out = CMatrix::zeros(self.dim(), self.dim());
        for (j, a) in self.annihilators.iter().enumerate() {
            let creation = inner(&self.mode_vectors[j], f);
            let annihilation = inner(&self.gamma_vectors[j], f);
            if creation != ZERO {
                out += a.adjoint() * creation;
            }
            if annihilation != ZERO {
                out += a * annihilation;
            }
        }
        Ok(out)
    }

    /// `pi(B(f_1) ... B(f_n))` for admissible vectors.
    pub fn product(&self, fs: &[ExcitationVector]) -> Result<CMatrix> {
        let mut out = CMatrix::identity(self.dim(), self.dim());
        for f in fs {
            f.check_against(&self.space)?;
            out *= self.represent(f.components())?;
        }
        Ok(out)
    }

    /// `pi(exp(i B(f))) = cos(1) + i sin(1) pi(B(f))`.
    pub fn exponential_unitary(&self, f: &ExcitationVector) -> Result<CMatrix> {
        let b = self.product(std::slice::from_ref(f))?;
        let id = CMatrix::identity(self.dim(), self.dim());
        Ok(id * C64::from(1.0_f64.cos()) + b * (I * 1.0_f64.sin()))
    }

    /// `U_t = exp(-i t H)`.
    pub fn propagator(&self, t: f64) -> CMatrix {
        CMatrix::from_diagonal(&CVector::from_iterator(
            self.dim(),
            self.energies.iter().map(|&e| C64::from_polar(1.0, -t * e)),
        ))
    }

    /// `exp(-beta H) / Tr exp(-beta H)`.
    pub fn gibbs_density(&self, beta: f64) -> Result<DensityMatrix> {
        crate::one_particle::check_beta(beta)?;
        let min = self.energies.iter().cloned().fold(f64::INFINITY, f64::min);
        let weights: Vec<f64> = self
            .energies
            .iter()
            .map(|e| (-beta * (e - min)).exp())
            .collect();
        let z: f64 = weights.iter().sum();
        let matrix = CMatrix::from_diagonal(&CVector::from_iterator(
            self.dim(),
            weights.iter().map(|w| C64::from(w / z)),
        ));
        Ok(DensityMatrix { matrix })
    }

    /// `F rho F^dagger` with `F = pi(B(f_1) ... B(f_n))`.
    pub fn excited_density(
        &self,
        rho: &DensityMatrix,
        fs: &[ExcitationVector],
    ) -> Result<DensityMatrix> {
        let f = self.product(fs)?;
        Ok(rho.conjugated(&f))
    }

    /// `Tr(rho F [H, F^dagger])`.
    pub fn commutator_entropy(&self, rho: &DensityMatrix, fs: &[ExcitationVector]) -> Result<f64> {
        let f = self.product(fs)?;
        let fd = f.adjoint();
        let comm = &self.hamiltonian * &fd - &fd * &self.hamiltonian;
        let value = (rho.matrix() * f * comm).trace();
        if value.im.abs() > 1e-10 * value.re.abs().max(1.0) {
            return Err(Error::ComplexResidue(value.im));
        }
        Ok(value.re)
    }

    /// `alpha_z(X) = exp(-i z H) X exp(i z H)` for complex `z`.
    pub fn evolve(&self, x: &CMatrix, z: C64) -> CMatrix {
        let e = &self.energies;
        CMatrix::from_fn(self.dim(), self.dim(), |r, c| {
            x[(r, c)] * (-I * z * (e[r] - e[c])).exp()
        })
    }

    /// `|Tr(rho A alpha_t(B)) - Tr(rho alpha_{t + i beta}(B) A)|` for an arbitrary `rho`.
    pub fn kms_residual(
        &self,
        rho: &DensityMatrix,
        beta: f64,
        a: &CMatrix,
        b: &CMatrix,
        t: f64,
    ) -> f64 {
        let lhs = (rho.matrix() * a * self.evolve(b, C64::from(t))).trace();
        let rhs = (rho.matrix() * self.evolve(b, C64::new(t, beta)) * a).trace();
        (lhs - rhs).norm()
    }

    /// KMS residual of the Gibbs state at `beta`.
    pub fn verify_kms(&self, beta: f64, a: &CMatrix, b: &CMatrix, t: f64) -> Result<f64> {
        let rho = self.gibbs_density(beta)?;
        Ok(self.kms_residual(&rho, beta, a, b, t))
    }

    /// Whether `t -> (Omega, A alpha_t(B) Omega)` only carries nonnegative frequencies
    /// for the vacuum `Omega`.
    pub fn verify_ground_state(&self, a: &CMatrix, b: &CMatrix) -> bool {
        ground_state_frequencies(&self.hamiltonian, &self.vacuum(), a, b)
            .iter()
            .all(|&w| w >= -1e-12)
    }

    /// `rho^{it} X rho^{-it}`.
    pub fn modular_conjugate(&self, rho: &DensityMatrix, x: &CMatrix, t: f64) -> Result<CMatrix> {
        let eig = HermitianEigen::new(rho.matrix());
        if eig.values[0] <= SUPPORT_FLOOR {
            return Err(Error::Support(eig.values[0]));
        }
        let fwd = eig.map(|p| C64::from_polar(1.0, t * p.ln()));
        let back = fwd.adjoint();
        Ok(fwd * x * back)
    }
}

fn jordan_wigner(n: usize, j: usize) -> CMatrix {
    let dim = 1usize << n;
    let mut a = CMatrix::zeros(dim, dim);
    let lower = (1usize << j) - 1;
    for b in 0..dim {
        if b & (1 << j) != 0 {
            let sign = if (b & lower).count_ones().is_multiple_of(2) {
                1.0
            } else {
                -1.0
            };
            a[(b ^ (1 << j), b)] = C64::from(sign);
        }
    }
    a
}

/// Frequencies `E_n - E_k` carried by `t -> (psi, A exp(-itH) B exp(itH) psi)`, keeping only
/// terms with non-negligible amplitude.
pub fn ground_state_frequencies(
    hamiltonian: &CMatrix,
    psi: &CVector,
    a: &CMatrix,
    b: &CMatrix,
) -> Vec<f64> {
    let eig = HermitianEigen::new(hamiltonian);
    let v = &eig.vectors;
    let left = (a.adjoint() * psi).adjoint() * v; // (psi, A v_n)
    let right = v.adjoint() * psi; // (v_k, psi)
    let middle = v.adjoint() * b * v; // (v_n, B v_k)
    let mut out = Vec::new();
    for n in 0..eig.values.len() {
        for k in 0..eig.values.len() {
            let amp = left[n] * middle[(n, k)] * right[k];
            if amp.norm() > 1e-12 {
                out.push(eig.values[n] - eig.values[k]);
            }
        }
    }
    out
}

/// A positive unit-trace matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                found: matrix.ncols(),
            });
        }
        let asym = (&matrix - matrix.adjoint()).norm();
        if asym > DENSITY_TOLERANCE {
            return Err(Error::InvalidDensity(format!("not Hermitian ({asym:e})")));
        }
        let trace = matrix.trace();
        if (trace - ONE).norm() > DENSITY_TOLERANCE {
            return Err(Error::InvalidDensity(format!("trace {trace} != 1")));
        }
        let eig = HermitianEigen::new(&matrix);
        if eig.values[0] < -DENSITY_TOLERANCE {
            return Err(Error::InvalidDensity(format!(
                "negative eigenvalue {}",
                eig.values[0]
            )));
        }
        Ok(Self { matrix })
    }

    /// Pure state `|psi><psi|` for a unit vector.
    pub fn pure(psi: &CVector) -> Result<Self> {
        Self::new(psi * psi.adjoint())
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// `U rho U^dagger` for unitary `U`.
    pub fn conjugated(&self, u: &CMatrix) -> Self {
        let m = u * &self.matrix * u.adjoint();
        Self {
            matrix: (&m + m.adjoint()).scale(0.5),
        }
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        HermitianEigen::new(&self.matrix).values
    }

    /// `Tr(rho X)`.
    pub fn expectation(&self, x: &CMatrix) -> C64 {
        (&self.matrix * x).trace()
    }
}

/// Umegaki relative entropy `Tr(sigma (log sigma - log tau))`, with `0 log 0 = 0`.
pub fn umegaki(sigma: &DensityMatrix, tau: &DensityMatrix) -> Result<f64> {
    if sigma.matrix.nrows() != tau.matrix.nrows() {
        return Err(Error::DimensionMismatch {
            expected: sigma.matrix.nrows(),
            found: tau.matrix.nrows(),
        });
    }
    let ts = HermitianEigen::new(&tau.matrix);
    if ts.values[0] <= SUPPORT_FLOOR {
        return Err(Error::Support(ts.values[0]));
    }
    let ss = HermitianEigen::new(&sigma.matrix);
    let self_term: f64 = ss
        .values
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| p * p.ln())
        .sum();
    // Tr(sigma log tau) = sum_k log(t_k) <v_k | sigma | v_k>
    let projected = ts.vectors.adjoint() * &sigma.matrix * &ts.vectors;
    let mut cross = C64::from(0.0);
    for (k, &t) in ts.values.iter().enumerate() {
        cross += projected[(k, k)] * t.ln();
    }
    if cross.im.abs() > 1e-10 * cross.re.abs().max(1.0) {
        return Err(Error::ComplexResidue(cross.im));
    }
    Ok(self_term - cross.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{random_excitation, random_hermitian, random_vector};
    use crate::one_particle::BasePolarization;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn diag_h(energies: &[f64]) -> SelfDualHamiltonian {
        let n = energies.len();
        let space = OneParticleSpace::canonical(n).unwrap();
        let h0 = CMatrix::from_diagonal(&CVector::from_iterator(
            n,
            energies.iter().map(|&e| C64::from(e)),
        ));
        SelfDualHamiltonian::embed(&space, &h0).unwrap()
    }

    fn random_rep(seed: u64, n: usize) -> (ChaCha8Rng, SelfDualHamiltonian, FockRep) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let space = OneParticleSpace::canonical(n).unwrap();
        let h = SelfDualHamiltonian::embed(&space, &random_hermitian(&mut rng, n)).unwrap();
        let rep = FockRep::new(&h).unwrap();
        (rng, h, rep)
    }

    fn close(a: &CMatrix, b: &CMatrix, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn single_mode_hamiltonian() {
        let rep = FockRep::new(&diag_h(&[1.0])).unwrap();
        assert_eq!(rep.dim(), 2);
        let expected = CMatrix::from_row_slice(2, 2, &[ZERO, ZERO, ZERO, ONE]);
        assert_eq!(rep.hamiltonian(), &expected);
        assert_eq!(rep.hamiltonian() * rep.vacuum(), CVector::zeros(2));
    }

    #[test]
    fn zero_modes_and_size_cap() {
        assert!(matches!(
            FockRep::new(&diag_h(&[0.0, 1.0])),
            Err(Error::ZeroMode { .. })
        ));
        assert!(matches!(
            FockRep::with_max_modes(&diag_h(&[1.0, 2.0, 3.0]), 2),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn mode_operators_satisfy_car() {
        let (_, _, rep) = random_rep(1, 4);
        let id = CMatrix::identity(rep.dim(), rep.dim());
        let a = rep.annihilators();
        for j in 0..4 {
            for k in 0..4 {
                let ac = &a[j] * a[k].adjoint() + a[k].adjoint() * &a[j];
                let expected = if j == k { id.clone() } else { id.scale(0.0) };
                assert!(close(&ac, &expected, 1e-12));
                let aa = &a[j] * &a[k] + &a[k] * &a[j];
                assert!(aa.norm() < 1e-12);
            }
        }
    }

    #[test]
    fn represented_generators_satisfy_self_dual_car() {
        let (mut rng, h, rep) = random_rep(2, 3);
        let space = h.space();
        let id = CMatrix::identity(rep.dim(), rep.dim());
        for _ in 0..5 {
            let f = random_vector(&mut rng, 6);
            let g = random_vector(&mut rng, 6);
            let bf = rep.represent(&f).unwrap();
            let bg = rep.represent(&g).unwrap();
            // B(f)* = B(Gamma f)
            assert!(close(
                &bf.adjoint(),
                &rep.represent(&space.gamma(&f)).unwrap(),
                1e-12
            ));
            let ac = bf.adjoint() * &bg + &bg * bf.adjoint();
            assert!(close(&ac, &(&id * inner(&f, &g)), 1e-12));
        }
    }

    #[test]
    fn basis_vectors_map_to_mode_operators() {
        let (_, h, rep) = random_rep(3, 3);
        for (j, m) in h.modes().iter().enumerate() {
            let b = rep.represent(&m.vector).unwrap();
            assert!(close(&b, &rep.annihilators()[j].adjoint(), 1e-12));
        }
    }

    #[test]
    fn vacuum_reproduces_ground_two_point() {
        let (mut rng, h, rep) = random_rep(4, 3);
        let p = BasePolarization::ground(&h).unwrap();
        let omega = rep.vacuum();
        for _ in 0..5 {
            let f = random_vector(&mut rng, 6);
            let g = random_vector(&mut rng, 6);
            let bf = rep.represent(&f).unwrap();
            let bg = rep.represent(&g).unwrap();
            let val = inner(&omega, &(bf * bg * &omega));
            assert!((val - p.two_point(&f, &g).unwrap()).norm() < 1e-12);
        }
    }

    #[test]
    fn admissible_generators_are_self_adjoint_unitaries() {
        let (mut rng, h, rep) = random_rep(5, 3);
        let id = CMatrix::identity(rep.dim(), rep.dim());
        for _ in 0..5 {
            let f = random_excitation(&mut rng, h.space(), "f");
            let b = rep.represent(f.components()).unwrap();
            assert!(close(&b, &b.adjoint(), 1e-12));
            assert!(close(&(&b * &b), &id, 1e-12));
            assert!(close(&(&b * b.adjoint()), &id, 1e-12));
        }
    }

    #[test]
    fn flow_is_implemented_by_propagator() {
        let (mut rng, h, rep) = random_rep(6, 3);
        let f = random_vector(&mut rng, 6);
        for t in [-1.2, 0.35, 2.0] {
            let u = rep.propagator(t);
            let lhs = &u * rep.represent(&f).unwrap() * u.adjoint();
            let rhs = rep.represent(&(h.propagator(t) * &f)).unwrap();
            assert!(close(&lhs, &rhs, 1e-10));
            // U_t Omega = Omega
            assert!((&u * rep.vacuum() - rep.vacuum()).norm() < 1e-12);
        }
    }

    #[test]
    fn gibbs_single_mode() {
        let rep = FockRep::new(&diag_h(&[1.0])).unwrap();
        let rho = rep.gibbs_density(1.0).unwrap();
        let z = 1.0 + (-1.0_f64).exp();
        assert!((rho.matrix()[(0, 0)].re - 1.0 / z).abs() < 1e-15);
        assert!((rho.matrix()[(1, 1)].re - (-1.0_f64).exp() / z).abs() < 1e-15);
        assert!((rho.matrix()[(0, 0)].re - 0.731).abs() < 1e-3);
        assert!(matches!(rep.gibbs_density(0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn fermi_dirac_occupation() {
        let (_, _, rep) = random_rep(7, 3);
        for beta in [0.5, 1.0, 3.0] {
            let rho = rep.gibbs_density(beta).unwrap();
            for j in 0..3 {
                let eps = rep.mode_energies()[j];
                let occ = rho.expectation(&rep.number_operator(j));
                assert!((occ.re - 1.0 / ((beta * eps).exp() + 1.0)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn gibbs_approaches_vacuum() {
        let rep = FockRep::new(&diag_h(&[1.0, 1.5, 2.0])).unwrap();
        let rho = rep.gibbs_density(64.0).unwrap();
        let vac = DensityMatrix::pure(&rep.vacuum()).unwrap();
        assert!(close(rho.matrix(), vac.matrix(), 1e-10));
    }

    #[test]
    fn gibbs_two_point_is_q_beta() {
        for n in 1..=4 {
            let (mut rng, h, rep) = random_rep(10 + n as u64, n);
            for beta in [0.25, 1.0, 4.0] {
                let rho = rep.gibbs_density(beta).unwrap();
                let q = BasePolarization::kms(&h, beta).unwrap();
                let f = random_vector(&mut rng, 2 * n);
                let g = random_vector(&mut rng, 2 * n);
                let val =
                    rho.expectation(&(rep.represent(&f).unwrap() * rep.represent(&g).unwrap()));
                assert!((val - q.two_point(&f, &g).unwrap()).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn excited_density_properties() {
        let h = diag_h(&[1.0]);
        let rep = FockRep::new(&h).unwrap();
        let f = ExcitationVector::spectral(&h, 0).unwrap();
        let vac = DensityMatrix::pure(&rep.vacuum()).unwrap();
        let excited = rep.excited_density(&vac, &[f]).unwrap();
        let expected = CMatrix::from_row_slice(2, 2, &[ZERO, ZERO, ZERO, ONE]);
        assert!(close(excited.matrix(), &expected, 1e-14));

        let (mut rng, h, rep) = random_rep(8, 3);
        let rho = rep.gibbs_density(1.0).unwrap();
        assert_eq!(rep.excited_density(&rho, &[]).unwrap(), rho);
        let fs: Vec<_> = (0..2)
            .map(|_| random_excitation(&mut rng, h.space(), "f"))
            .collect();
        let tilde = rep.excited_density(&rho, &fs).unwrap();
        assert!((tilde.matrix().trace() - ONE).norm() < 1e-12);
        for (a, b) in tilde.eigenvalues().iter().zip(rho.eigenvalues()) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn umegaki_examples() {
        let rho = DensityMatrix::new(CMatrix::from_row_slice(
            2,
            2,
            &[
                C64::from(0.3),
                C64::new(0.1, 0.1),
                C64::new(0.1, -0.1),
                C64::from(0.7),
            ],
        ))
        .unwrap();
        assert!(umegaki(&rho, &rho).unwrap().abs() < 1e-14);

        let sigma =
            DensityMatrix::new(CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, ZERO])).unwrap();
        let tau = DensityMatrix::new(CMatrix::identity(2, 2).scale(0.5)).unwrap();
        // 1 * (log 1 - log 1/2)
        assert!((umegaki(&sigma, &tau).unwrap() - 2.0_f64.ln()).abs() < 1e-14);
        assert!(matches!(umegaki(&tau, &sigma), Err(Error::Support(_))));
    }

    #[test]
    fn umegaki_single_mode_matches_closed_form() {
        let h = diag_h(&[1.0]);
        let rep = FockRep::new(&h).unwrap();
        let rho = rep.gibbs_density(1.0).unwrap();
        let f = ExcitationVector::spectral(&h, 0).unwrap();
        let tilde = rep.excited_density(&rho, &[f]).unwrap();
        assert!((umegaki(&rho, &tilde).unwrap() - 0.5_f64.tanh()).abs() < 1e-12);
    }

    #[test]
    fn umegaki_is_positive_off_diagonal() {
        let (mut rng, h, rep) = random_rep(9, 3);
        let rho = rep.gibbs_density(0.7).unwrap();
        for _ in 0..5 {
            let f = random_excitation(&mut rng, h.space(), "f");
            let tilde = rep.excited_density(&rho, &[f]).unwrap();
            assert!(umegaki(&rho, &tilde).unwrap() > 1e-10);
            assert!(umegaki(&tilde, &rho).unwrap() > 1e-10);
        }
    }

    #[test]
    fn commutator_entropy_matches_umegaki() {
        let (mut rng, h, rep) = random_rep(12, 3);
        let rho = rep.gibbs_density(1.0).unwrap();
        assert_eq!(rep.commutator_entropy(&rho, &[]).unwrap(), 0.0);
        for m in 1..=3 {
            let fs: Vec<_> = (0..m)
                .map(|_| random_excitation(&mut rng, h.space(), "f"))
                .collect();
            let tilde = rep.excited_density(&rho, &fs).unwrap();
            let a = rep.commutator_entropy(&rho, &fs).unwrap();
            let b = umegaki(&rho, &tilde).unwrap();
            assert!((a - b).abs() < 1e-10, "{a} {b}");
        }
    }

    #[test]
    fn kms_condition() {
        let (mut rng, h, rep) = random_rep(13, 3);
        let a = rep
            .represent(random_excitation(&mut rng, h.space(), "a").components())
            .unwrap();
        let b = rep
            .represent(random_excitation(&mut rng, h.space(), "b").components())
            .unwrap();
        assert!(rep.verify_kms(1.0, &a, &b, 0.0).unwrap() <= 1e-9);
        assert!(rep.verify_kms(1.0, &a, &b, 0.7).unwrap() <= 1e-9);
        assert!(rep.verify_kms(2.5, &a, &b, -1.3).unwrap() <= 1e-9);
        let wrong = rep.gibbs_density(2.0).unwrap();
        assert!(rep.kms_residual(&wrong, 1.0, &a, &b, 0.7) > 1e-3);
    }

    #[test]
    fn ground_state_checks() {
        let (mut rng, h, rep) = random_rep(14, 3);
        let f = rep
            .represent(random_excitation(&mut rng, h.space(), "f").components())
            .unwrap();
        assert!(rep.verify_ground_state(&f, &f));

        // push the first mode below the vacuum
        let shift = rep.mode_energies().iter().cloned().fold(0.0, f64::max) + 1.0;
        let bad_h = rep.hamiltonian() - rep.number_operator(0).scale(shift);
        let g = rep
            .represent(&(&h.modes()[0].vector + h.space().gamma(&h.modes()[0].vector)))
            .unwrap();
        let freqs = ground_state_frequencies(&bad_h, &rep.vacuum(), &g, &g);
        assert!(freqs.iter().any(|&w| w < 0.0));
    }

    #[test]
    fn modular_flow_matches_one_particle_flow() {
        let (mut rng, h, rep) = random_rep(15, 3);
        let rho = rep.gibbs_density(1.0).unwrap();
        let f = random_vector(&mut rng, 6);
        let bf = rep.represent(&f).unwrap();
        for t in [-0.9, 0.4, 1.6] {
            let lhs = rep.modular_conjugate(&rho, &bf, t).unwrap();
            let rhs = rep.represent(&(h.propagator(t) * &f)).unwrap();
            assert!(close(&lhs, &rhs, 1e-10));
        }
    }
}
