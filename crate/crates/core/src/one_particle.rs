//! One-particle data of a self-dual CAR algebra.
//!
//! The one-particle space `K = C^{2n}` carries an antiunitary involution
//! `Gamma`, stored as `Gamma v = C * conj(v)` with a unitary matrix `C`
//! satisfying `C * conj(C) = 1`. A one-particle flow `u_t = exp(-i t h)` is
//! compatible with `Gamma` exactly when `Gamma h Gamma = -h`; such generators
//! are wrapped in [`SelfDualHamiltonian`] together with their spectral data.
//!
//! Base polarizations `Q` encode the two-point function of a state through
//! `W2(f, g) = <Gamma f, Q g>` and always satisfy `0 <= Q <= 1` and
//! `Q + Gamma Q Gamma = 1`. Vectors `f` with `Gamma f = f` and `<f, f> = 2`
//! generate self-adjoint unitaries `B(f)` and are represented by
//! [`ExcitationVector`].

use std::borrow::Borrow;

use crate::error::{Error, Result};
use crate::linalg::{
    conj_matrix, conj_vector, inner, logistic, relative_norm, CMatrix, CVector, HermitianEigen,
    C64, ONE,
};

/// Default relative Frobenius tolerance for structural validation.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// The space `K = C^{2n}` with its conjugation.
#[derive(Debug, Clone, PartialEq)]
pub struct OneParticleSpace {
    conj: CMatrix,
}

impl OneParticleSpace {
    /// `K = H + conj(H)` with `Gamma(x + y) = conj(y) + conj(x)`.
    pub fn canonical(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDimension(
                "a one-particle space needs at least one mode".into(),
            ));
        }
        let mut conj = CMatrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            conj[(i, n + i)] = ONE;
            conj[(n + i, i)] = ONE;
        }
        Ok(Self { conj })
    }

    /// Wraps an arbitrary conjugation matrix after checking that it is unitary and
    /// squares (as an antilinear map) to the identity.
    pub fn with_conjugation(conj: CMatrix, tolerance: f64) -> Result<Self> {
        let dim = conj.nrows();
        if dim == 0 || !dim.is_multiple_of(2) || conj.ncols() != dim {
            return Err(Error::InvalidDimension(format!(
                "conjugation matrix must be square of even positive order, got {}x{}",
                conj.nrows(),
                conj.ncols()
            )));
        }
        let id = CMatrix::identity(dim, dim);
        let unitarity = (&conj * conj.adjoint() - &id).norm();
        if unitarity > tolerance * (dim as f64).sqrt() {
            return Err(Error::InvalidConjugation(format!(
                "C is not unitary: |C C^dagger - 1| = {unitarity:e}"
            )));
        }
        let involution = (&conj * conj_matrix(&conj) - &id).norm();
        if involution > tolerance * (dim as f64).sqrt() {
            return Err(Error::InvalidConjugation(format!(
                "Gamma^2 != 1: |C conj(C) - 1| = {involution:e}"
            )));
        }
        Ok(Self { conj })
    }

    pub fn dim(&self) -> usize {
        self.conj.nrows()
    }

    /// Number of fermionic modes `n = dim / 2`.
    pub fn modes(&self) -> usize {
        self.dim() / 2
    }

    pub fn conj_matrix(&self) -> &CMatrix {
        &self.conj
    }

    /// `Gamma v`.
    pub fn gamma(&self, v: &CVector) -> CVector {
        &self.conj * conj_vector(v)
    }

    /// `Gamma M Gamma`, which is a complex-linear operator again.
    pub fn gamma_sandwich(&self, m: &CMatrix) -> CMatrix {
        &self.conj * conj_matrix(m) * conj_matrix(&self.conj)
    }

    pub(crate) fn check_vector(&self, v: &CVector) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: v.len(),
            });
        }
        Ok(())
    }

    pub(crate) fn check_matrix(&self, m: &CMatrix) -> Result<()> {
        if m.nrows() != self.dim() || m.ncols() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: if m.nrows() != self.dim() {
                    m.nrows()
                } else {
                    m.ncols()
                },
            });
        }
        Ok(())
    }
}

/// A positive-energy eigenmode of `h`.
#[derive(Debug, Clone)]
pub struct Mode {
    pub energy: f64,
    /// Unit eigenvector, phase-fixed so that its largest-magnitude component is real positive.
    pub vector: CVector,
}

/// Hermitian generator `h` with `Gamma h Gamma = -h`, plus its spectral data.
#[derive(Debug, Clone)]
pub struct SelfDualHamiltonian {
    space: OneParticleSpace,
    matrix: CMatrix,
    eigen: HermitianEigen,
    modes: Vec<Mode>,
    zero_modes: usize,
    tolerance: f64,
}

impl SelfDualHamiltonian {
    /// Validates `h` against the default tolerance.
    pub fn new(space: &OneParticleSpace, h: CMatrix) -> Result<Self> {
        Self::with_tolerance(space, h, DEFAULT_TOLERANCE)
    }

    /// Accepts `h` iff `h = h^dagger` and `Gamma h Gamma = -h` within `tolerance`
    /// (relative Frobenius norm).
    pub fn with_tolerance(space: &OneParticleSpace, h: CMatrix, tolerance: f64) -> Result<Self> {
        space.check_matrix(&h)?;
        let asym = relative_norm(&(&h - h.adjoint()), &h);
        if asym > tolerance {
            return Err(Error::NotHermitian(asym));
        }
        let anti = relative_norm(&(space.gamma_sandwich(&h) + &h), &h);
        if anti > tolerance {
            return Err(Error::NotSelfDual(anti));
        }
        let eigen = HermitianEigen::new(&h);
        let scale = eigen.values.iter().fold(1.0_f64, |acc, v| acc.max(v.abs()));
        let zero_threshold = tolerance * scale;
        let zero_modes = eigen
            .values
            .iter()
            .filter(|v| v.abs() <= zero_threshold)
            .count();
        let modes = positive_modes(&eigen, zero_threshold);
        Ok(Self {
            space: space.clone(),
            matrix: h,
            eigen,
            modes,
            zero_modes,
            tolerance,
        })
    }

    /// Doubles an `n x n` Hermitian `h0` into `h = h0 + (-conj(h0))` on the canonical space.
    pub fn embed(space: &OneParticleSpace, h0: &CMatrix) -> Result<Self> {
        let n = space.modes();
        if h0.nrows() != n || h0.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: h0.nrows(),
            });
        }
        let asym = relative_norm(&(h0 - h0.adjoint()), h0);
        if asym > DEFAULT_TOLERANCE {
            return Err(Error::NotHermitian(asym));
        }
        let mut h = CMatrix::zeros(2 * n, 2 * n);
        h.view_mut((0, 0), (n, n)).copy_from(h0);
        h.view_mut((n, n), (n, n)).copy_from(&(-conj_matrix(h0)));
        Self::new(space, h)
    }

    pub fn space(&self) -> &OneParticleSpace {
        &self.space
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// All eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigen.values
    }

    pub fn eigen(&self) -> &HermitianEigen {
        &self.eigen
    }

    /// Positive-energy modes sorted by ascending energy.
    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn zero_mode_count(&self) -> usize {
        self.zero_modes
    }

    pub fn has_zero_modes(&self) -> bool {
        self.zero_modes > 0
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// `u_t = exp(-i t h)`.
    pub fn propagator(&self, t: f64) -> CMatrix {
        self.eigen.map(|e| C64::from_polar(1.0, -t * e))
    }

    pub fn apply(&self, v: &CVector) -> CVector {
        &self.matrix * v
    }

    /// Smallest eigenvalue magnitude, used to report zero modes.
    pub(crate) fn smallest_magnitude(&self) -> f64 {
        self.eigen
            .values
            .iter()
            .fold(f64::INFINITY, |acc, v| acc.min(v.abs()))
    }
}

fn positive_modes(eigen: &HermitianEigen, zero_threshold: f64) -> Vec<Mode> {
    let positive: Vec<usize> = (0..eigen.values.len())
        .filter(|&k| eigen.values[k] > zero_threshold)
        .collect();
    let mut modes: Vec<Mode> = Vec::with_capacity(positive.len());
    let mut start = 0;
    while start < positive.len() {
        // cluster of (nearly) equal energies
        let e0 = eigen.values[positive[start]];
        let mut end = start + 1;
        while end < positive.len()
            && (eigen.values[positive[end]] - e0).abs() <= 1e-8 * e0.abs().max(1.0)
        {
            end += 1;
        }
        let cluster_begin = modes.len();
        for &k in &positive[start..end] {
            let mut v = eigen.column(k);
            for prev in &modes[cluster_begin..] {
                let overlap = inner(&prev.vector, &v);
                v -= &prev.vector * overlap;
            }
            let norm = v.norm();
            v /= C64::from(norm);
            modes.push(Mode {
                energy: eigen.values[k],
                vector: fix_phase(v),
            });
        }
        start = end;
    }
    modes
}

/// Rotates `v` so its largest-magnitude component (first one on ties) is real positive.
pub(crate) fn fix_phase(v: CVector) -> CVector {
    let mut best = 0;
    let mut best_abs = -1.0;
    for (i, z) in v.iter().enumerate() {
        if z.norm() > best_abs * (1.0 + 1e-12) {
            best = i;
            best_abs = z.norm();
        }
    }
    if best_abs <= 0.0 {
        return v;
    }
    let phase = v[best].conj() / best_abs;
    v * phase
}

/// Where a base polarization came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Provenance {
    Explicit,
    /// `Q = (1 + exp(-beta h))^{-1}`.
    Kms {
        beta: f64,
    },
    /// Spectral projector of `h` onto `(0, inf)`.
    Ground,
}

/// A base polarization `Q` with `0 <= Q = Q^dagger <= 1` and `Q + Gamma Q Gamma = 1`.
#[derive(Debug, Clone)]
pub struct BasePolarization {
    space: OneParticleSpace,
    matrix: CMatrix,
    provenance: Provenance,
}

impl BasePolarization {
    /// The KMS polarization `Q_(beta) = (1 + exp(-beta h))^{-1}` by spectral calculus.
    pub fn kms(h: &SelfDualHamiltonian, beta: f64) -> Result<Self> {
        check_beta(beta)?;
        let matrix = h.eigen.map(|e| C64::from(logistic(beta * e)));
        Ok(Self {
            space: h.space.clone(),
            matrix,
            provenance: Provenance::Kms { beta },
        })
    }

    /// The ground polarization `P = E((0, inf))`; requires absence of zero modes.
    pub fn ground(h: &SelfDualHamiltonian) -> Result<Self> {
        if h.has_zero_modes() {
            return Err(Error::ZeroMode {
                energy: h.smallest_magnitude(),
            });
        }
        let dim = h.space.dim();
        let mut matrix = CMatrix::zeros(dim, dim);
        for mode in &h.modes {
            matrix += &mode.vector * mode.vector.adjoint();
        }
        Ok(Self {
            space: h.space.clone(),
            matrix,
            provenance: Provenance::Ground,
        })
    }

    /// Validates a user-supplied polarization.
    pub fn explicit(space: &OneParticleSpace, q: CMatrix, tolerance: f64) -> Result<Self> {
        space.check_matrix(&q)?;
        let asym = relative_norm(&(&q - q.adjoint()), &q);
        if asym > tolerance {
            return Err(Error::InvalidPolarization(format!(
                "Q is not Hermitian (deviation {asym:e})"
            )));
        }
        let eig = HermitianEigen::new(&q);
        let (lo, hi) = (eig.values[0], eig.values[eig.values.len() - 1]);
        if lo < -tolerance || hi > 1.0 + tolerance {
            return Err(Error::InvalidPolarization(format!(
                "spectrum [{lo}, {hi}] leaves [0, 1]"
            )));
        }
        let id = CMatrix::identity(space.dim(), space.dim());
        let dev = (&q + space.gamma_sandwich(&q) - id).norm();
        if dev > tolerance * (space.dim() as f64).sqrt() {
            return Err(Error::InvalidPolarization(format!(
                "Q + Gamma Q Gamma != 1 (deviation {dev:e})"
            )));
        }
        Ok(Self {
            space: space.clone(),
            matrix: q,
            provenance: Provenance::Explicit,
        })
    }

    pub fn space(&self) -> &OneParticleSpace {
        &self.space
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// Two-point function `W2(f, g) = <Gamma f, Q g>`.
    pub fn two_point(&self, f: &CVector, g: &CVector) -> Result<C64> {
        self.space.check_vector(f)?;
        self.space.check_vector(g)?;
        Ok(inner(&self.space.gamma(f), &(&self.matrix * g)))
    }
}

pub(crate) fn check_beta(beta: f64) -> Result<()> {
    if !beta.is_finite() || beta <= 0.0 {
        return Err(Error::Domain(format!(
            "inverse temperature must be finite and positive, got {beta}"
        )));
    }
    Ok(())
}

/// A vector `f` with `Gamma f = f` and `<f, f> = 2`, so that `B(f)` is a self-adjoint unitary.
#[derive(Debug, Clone, PartialEq)]
pub struct ExcitationVector {
    components: CVector,
    label: String,
}

impl ExcitationVector {
    pub fn new(
        space: &OneParticleSpace,
        components: CVector,
        label: impl Into<String>,
    ) -> Result<Self> {
        check_admissible(space, &components, DEFAULT_TOLERANCE)?;
        Ok(Self {
            components,
            label: label.into(),
        })
    }

    /// `f = e + Gamma e` for the unit eigenvector `e` of the selected positive mode.
    pub fn spectral(h: &SelfDualHamiltonian, mode: usize) -> Result<Self> {
        let m = h.modes.get(mode).ok_or(Error::ModeOutOfRange {
            index: mode,
            available: h.modes.len(),
        })?;
        let components = &m.vector + h.space.gamma(&m.vector);
        Self::new(&h.space, components, format!("mode{mode}"))
    }

    /// Projects `v` onto the admissible set: `f = c (v + Gamma v)` with `c > 0` fixing `<f, f> = 2`.
    pub fn symmetrize(
        space: &OneParticleSpace,
        v: &CVector,
        label: impl Into<String>,
    ) -> Result<Self> {
        space.check_vector(v)?;
        let sum = v + space.gamma(v);
        let norm = sum.norm();
        if norm <= DEFAULT_TOLERANCE * v.norm().max(1.0) {
            return Err(Error::Degenerate(
                "v + Gamma v vanishes; the vector is Gamma-antisymmetric".into(),
            ));
        }
        let components = sum * C64::from(2.0_f64.sqrt() / norm);
        Self::new(space, components, label)
    }

    pub fn components(&self) -> &CVector {
        &self.components
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub(crate) fn check_against(&self, space: &OneParticleSpace) -> Result<()> {
        check_admissible(space, &self.components, DEFAULT_TOLERANCE)
    }
}

impl AsRef<CVector> for ExcitationVector {
    fn as_ref(&self) -> &CVector {
        &self.components
    }
}

impl Borrow<CVector> for ExcitationVector {
    fn borrow(&self) -> &CVector {
        &self.components
    }
}

fn check_admissible(space: &OneParticleSpace, v: &CVector, tolerance: f64) -> Result<()> {
    space.check_vector(v)?;
    let fixed = (space.gamma(v) - v).norm();
    if fixed > tolerance {
        return Err(Error::Inadmissible(format!(
            "Gamma f != f (deviation {fixed:e})"
        )));
    }
    let norm2 = inner(v, v).re;
    if (norm2 - 2.0).abs() > tolerance {
        return Err(Error::Inadmissible(format!("<f, f> = {norm2}, expected 2")));
    }
    Ok(())
}

/// `Q + Gamma Q Gamma - 1`, exposed for invariant checks.
pub fn polarization_defect(q: &BasePolarization) -> CMatrix {
    let dim = q.space.dim();
    q.matrix.clone() + q.space.gamma_sandwich(&q.matrix) - CMatrix::identity(dim, dim)
}
