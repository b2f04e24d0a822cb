//! Quasifree states: every n-point function is fixed by the base polarization.
//!
//! Odd n-point functions vanish and the `2m`-point function is the Pfaffian of
//! the antisymmetric matrix whose upper entries are the two-point functions
//! `W2(f_j, f_k)`, `j < k`.

use std::borrow::Borrow;

use crate::error::{Error, Result};
use crate::linalg::{CVector, C64, ZERO};
use crate::one_particle::{BasePolarization, OneParticleSpace, Provenance, SelfDualHamiltonian};
use crate::pfaffian::{pfaffian, pfaffian_reference, AntisymmetricMatrix};

/// Largest list accepted by [`QuasifreeState::n_point_reference`].
pub const REFERENCE_MAX_POINTS: usize = 12;

/// The dynamics a state is tied to.
#[derive(Debug, Clone)]
pub struct Flow {
    hamiltonian: SelfDualHamiltonian,
    kind: FlowKind,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FlowKind {
    Kms { beta: f64 },
    Ground,
}

impl Flow {
    pub fn hamiltonian(&self) -> &SelfDualHamiltonian {
        &self.hamiltonian
    }

    pub fn kind(&self) -> FlowKind {
        self.kind
    }
}

#[derive(Debug, Clone)]
pub struct QuasifreeState {
    polarization: BasePolarization,
    flow: Option<Flow>,
}

impl QuasifreeState {
    /// State defined by an arbitrary base polarization, with no dynamics attached.
    pub fn from_polarization(polarization: BasePolarization) -> Self {
        Self {
            polarization,
            flow: None,
        }
    }

    /// The quasifree KMS state of `u_t = exp(-i t h)` at inverse temperature `beta`.
    ///
    /// With zero modes present the KMS state is not unique; this always picks the
    /// quasifree one with polarization `Q_(beta)`.
    pub fn kms(h: &SelfDualHamiltonian, beta: f64) -> Result<Self> {
        let polarization = BasePolarization::kms(h, beta)?;
        Ok(Self {
            polarization,
            flow: Some(Flow {
                hamiltonian: h.clone(),
                kind: FlowKind::Kms { beta },
            }),
        })
    }

    /// The quasifree ground state `P = E((0, inf))`.
    pub fn ground(h: &SelfDualHamiltonian) -> Result<Self> {
        let polarization = BasePolarization::ground(h)?;
        Ok(Self {
            polarization,
            flow: Some(Flow {
                hamiltonian: h.clone(),
                kind: FlowKind::Ground,
            }),
        })
    }

    /// Tags `polarization` as the KMS state of `h` at `beta` after recomputing
    /// `Q_(beta)` and comparing within the tolerance of `h`.
    pub fn with_kms_flow(
        polarization: BasePolarization,
        h: &SelfDualHamiltonian,
        beta: f64,
    ) -> Result<Self> {
        if polarization.space() != h.space() {
            return Err(Error::DimensionMismatch {
                expected: h.space().dim(),
                found: polarization.space().dim(),
            });
        }
        let expected = BasePolarization::kms(h, beta)?;
        let dev = (polarization.matrix() - expected.matrix()).norm();
        if dev > h.tolerance() * (h.space().dim() as f64).sqrt() {
            return Err(Error::FlowMismatch(dev));
        }
        Ok(Self {
            polarization,
            flow: Some(Flow {
                hamiltonian: h.clone(),
                kind: FlowKind::Kms { beta },
            }),
        })
    }

    pub fn polarization(&self) -> &BasePolarization {
        &self.polarization
    }

    pub fn space(&self) -> &OneParticleSpace {
        self.polarization.space()
    }

    pub fn flow(&self) -> Option<&Flow> {
        self.flow.as_ref()
    }

    /// `(h, beta)` for a KMS-tagged state.
    pub fn kms_flow(&self) -> Result<(&SelfDualHamiltonian, f64)> {
        match &self.flow {
            Some(Flow {
                hamiltonian,
                kind: FlowKind::Kms { beta },
            }) => Ok((hamiltonian, *beta)),
            _ => Err(Error::MissingFlow),
        }
    }

    pub fn two_point(&self, f: &CVector, g: &CVector) -> Result<C64> {
        self.polarization.two_point(f, g)
    }

    /// `W_n(f_1, ..., f_n) = omega(B(f_1) ... B(f_n))`.
    pub fn n_point<V: Borrow<CVector>>(&self, fs: &[V]) -> Result<C64> {
        for f in fs {
            self.space().check_vector(f.borrow())?;
        }
        if fs.len() % 2 == 1 {
            return Ok(ZERO);
        }
        pfaffian(&self.correlation_matrix(fs)?)
    }

    /// Same as [`n_point`](Self::n_point) but through the explicit signed permutation sum.
    pub fn n_point_reference<V: Borrow<CVector>>(&self, fs: &[V]) -> Result<C64> {
        if fs.len() > REFERENCE_MAX_POINTS {
            return Err(Error::SizeLimit(format!(
                "reference n-point function limited to {REFERENCE_MAX_POINTS} vectors, got {}",
                fs.len()
            )));
        }
        for f in fs {
            self.space().check_vector(f.borrow())?;
        }
        if fs.len() % 2 == 1 {
            return Ok(ZERO);
        }
        pfaffian_reference(&self.correlation_matrix(fs)?)
    }

    /// Antisymmetric matrix with upper entries `W2(f_j, f_k)`.
    pub fn correlation_matrix<V: Borrow<CVector>>(&self, fs: &[V]) -> Result<AntisymmetricMatrix> {
        let q = self.polarization.matrix();
        let space = self.space();
        let gammas: Vec<CVector> = fs.iter().map(|f| space.gamma(f.borrow())).collect();
        let qs: Vec<CVector> = fs.iter().map(|f| q * f.borrow()).collect();
        Ok(AntisymmetricMatrix::from_upper(fs.len(), |j, k| {
            gammas[j].dotc(&qs[k])
        }))
    }

    pub fn provenance(&self) -> Provenance {
        self.polarization.provenance()
    }
}
