//! Relative entropies of excitation states with respect to a quasifree KMS state.
//!
//! Argument order follows the Araki convention used throughout this crate:
//! `S(omega_f || omega)` is `-(Omega, log Delta_{F Omega, Omega} Omega)`, which in
//! a type-I representation equals `Tr(rho (log rho - log rho_f))` with the
//! *reference* density `rho` in front. Many texts write the same quantity with
//! the arguments swapped.
//!
//! The formulas are derived for the `beta = 1` KMS state of `u_t = exp(-i t h)`.
//! A KMS state at inverse temperature `beta` for `h` is the `beta = 1` KMS state
//! for `beta h`, so every formula below is evaluated with the rescaled generator.
//!
//! * single excitation: `S = <f, Q_(beta) (beta h) f>`
//! * `m` excitations: `S = 1/2 Tr(A^{-1} [[0, a], [-a^T, 0]])`, where `A` is the
//!   antisymmetric matrix of two-point functions of `(f_1 .. f_m, f_m .. f_1)`
//!   and `a[j][k] = <f_j, Q_(beta) (beta h) f_{m+1-k}>`. This is `i d/dt Pf(A(t))`
//!   at `t = 0` with the second half of the list evolved by `u_t`.

use crate::error::{Error, Result};
use crate::linalg::{condition_number, inner, CMatrix, CVector, C64};
use crate::one_particle::ExcitationVector;
use crate::pfaffian::{pfaffian, AntisymmetricMatrix, MAX_CONDITION};
use crate::quasifree::QuasifreeState;

/// Largest imaginary part tolerated in a real-valued entropy (scaled by `max(1, |S|)`).
pub const IMAGINARY_RESIDUE_LIMIT: f64 = 1e-9;

/// Two excitation vectors closer than this are treated as identical.
pub const DUPLICATE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntropyMethod {
    ClosedFormSingle,
    PfaffianTrace,
    Concatenation,
    Exponential,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Diagnostics {
    /// Condition number of the two-point matrix `A`.
    pub condition: Option<f64>,
    /// `|Pf(A) - 1|`.
    pub pfaffian_residual: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyResult {
    /// Relative entropy in nats.
    pub value: f64,
    pub method: EntropyMethod,
    pub diagnostics: Diagnostics,
}

fn real_part(z: C64) -> Result<f64> {
    if z.im.abs() > IMAGINARY_RESIDUE_LIMIT * z.re.abs().max(1.0) {
        return Err(Error::ComplexResidue(z.im));
    }
    Ok(z.re)
}

fn check_family(state: &QuasifreeState, fs: &[ExcitationVector]) -> Result<()> {
    fs.iter().try_for_each(|f| f.check_against(state.space()))
}

/// `Q_(beta) (beta h) v`.
fn energy_weighted(state: &QuasifreeState, v: &CVector) -> Result<CVector> {
    let (h, beta) = state.kms_flow()?;
    Ok(state.polarization().matrix() * h.apply(v) * C64::from(beta))
}

/// Relative entropy of the single-excitation state `omega_f` with respect to `omega`.
pub fn relent_single(state: &QuasifreeState, f: &ExcitationVector) -> Result<EntropyResult> {
    state.kms_flow()?;
    f.check_against(state.space())?;
    let value = inner(f.components(), &energy_weighted(state, f.components())?);
    Ok(EntropyResult {
        value: real_part(value)?,
        method: EntropyMethod::ClosedFormSingle,
        diagnostics: Diagnostics::default(),
    })
}

/// The two-point matrix `A` of `(f_1 .. f_m, f_m .. f_1)` and the `m x m` matrix `a`
/// with `a[j][k] = <f_j, Q (beta h) f_{m+1-k}>` (columns reversed).
pub fn build_entropy_matrices(
    state: &QuasifreeState,
    fs: &[ExcitationVector],
) -> Result<(AntisymmetricMatrix, CMatrix)> {
    state.kms_flow()?;
    check_family(state, fs)?;
    let m = fs.len();
    let list: Vec<&CVector> = fs
        .iter()
        .chain(fs.iter().rev())
        .map(|f| f.components())
        .collect();
    let big = state.correlation_matrix(&list)?;
    let weighted = fs
        .iter()
        .map(|f| energy_weighted(state, f.components()))
        .collect::<Result<Vec<_>>>()?;
    let small = CMatrix::from_fn(m, m, |j, k| inner(fs[j].components(), &weighted[m - 1 - k]));
    Ok((big, small))
}

/// Removes adjacent identical pairs, which cancel because `B(f)^2 = 1`.
fn cancel_adjacent_duplicates(fs: &[ExcitationVector]) -> Vec<ExcitationVector> {
    let mut stack: Vec<ExcitationVector> = Vec::with_capacity(fs.len());
    for f in fs {
        let duplicate = stack
            .last()
            .is_some_and(|top| (top.components() - f.components()).norm() <= DUPLICATE_TOLERANCE);
        if duplicate {
            stack.pop();
        } else {
            stack.push(f.clone());
        }
    }
    stack
}

/// Relative entropy of the multi-excitation state `omega_{f_1 ... f_m}` with respect to `omega`.
pub fn relent_multi(state: &QuasifreeState, fs: &[ExcitationVector]) -> Result<EntropyResult> {
    state.kms_flow()?;
    check_family(state, fs)?;
    let reduced = cancel_adjacent_duplicates(fs);
    if reduced.is_empty() {
        return Ok(EntropyResult {
            value: 0.0,
            method: EntropyMethod::PfaffianTrace,
            diagnostics: Diagnostics {
                condition: Some(1.0),
                pfaffian_residual: Some(0.0),
            },
        });
    }
    let (big, small) = build_entropy_matrices(state, &reduced)?;
    let m = reduced.len();
    let condition = condition_number(big.matrix());
    if condition.is_nan() || condition > MAX_CONDITION {
        return Err(Error::Singular {
            condition,
            hint: "; consider removing repeated excitations",
        });
    }
    let inv = big.matrix().clone().try_inverse().ok_or(Error::Singular {
        condition,
        hint: "; consider removing repeated excitations",
    })?;
    let residual = (pfaffian(&big)? - C64::from(1.0)).norm();

    // Tr(A^{-1} M) with M = [[0, a], [-a^T, 0]]
    let mut trace = C64::from(0.0);
    for i in 0..m {
        for j in 0..m {
            // M[j, m + i] = a[j, i] and M[m + i, j] = -a[j, i]
            trace += inv[(m + i, j)] * small[(j, i)];
            trace -= inv[(j, m + i)] * small[(j, i)];
        }
    }
    Ok(EntropyResult {
        value: real_part(trace * 0.5)?,
        method: EntropyMethod::PfaffianTrace,
        diagnostics: Diagnostics {
            condition: Some(condition),
            pfaffian_residual: Some(residual),
        },
    })
}

/// `S(omega_{f_1..f_n} || omega_{g_1..g_m}) = S(omega_{g_m..g_1 f_1..f_n} || omega)`.
pub fn relent_between(
    state: &QuasifreeState,
    fs: &[ExcitationVector],
    gs: &[ExcitationVector],
) -> Result<EntropyResult> {
    let joined: Vec<ExcitationVector> = gs.iter().rev().chain(fs.iter()).cloned().collect();
    let mut result = relent_multi(state, &joined)?;
    result.method = EntropyMethod::Concatenation;
    Ok(result)
}

/// Relative entropy of the state generated by the unitary `exp(i B(f))`, which
/// equals `sin^2(1)` times the single-excitation entropy.
pub fn relent_exponential(state: &QuasifreeState, f: &ExcitationVector) -> Result<EntropyResult> {
    let single = relent_single(state, f)?;
    Ok(EntropyResult {
        value: exponential_factor() * single.value,
        method: EntropyMethod::Exponential,
        diagnostics: single.diagnostics,
    })
}

/// `sin^2(1)`.
pub fn exponential_factor() -> f64 {
    1.0_f64.sin().powi(2)
}

/// `Pf(A(t))` for the list `(f_1 .. f_m, u_t f_m .. u_t f_1)` with `u_t = exp(-i t beta h)`.
/// Its derivative at `t = 0` times `i` is the multi-excitation entropy.
pub fn evolved_pfaffian(state: &QuasifreeState, fs: &[ExcitationVector], t: f64) -> Result<C64> {
    let (h, beta) = state.kms_flow()?;
    check_family(state, fs)?;
    let u = h.propagator(beta * t);
    let mut list: Vec<CVector> = fs.iter().map(|f| f.components().clone()).collect();
    list.extend(fs.iter().rev().map(|f| &u * f.components()));
    pfaffian(&state.correlation_matrix(&list)?)
}
