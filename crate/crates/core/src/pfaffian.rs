//! Pfaffians of complex antisymmetric matrices.
//!
//! [`pfaffian`] uses Parlett-Reid tridiagonalization with partial pivoting;
//! [`pfaffian_reference`] evaluates the defining signed sum over pairings and
//! is kept as an independent check for small orders.

use crate::error::{Error, Result};
use crate::linalg::{condition_number, CMatrix, C64, ONE, ZERO};

/// Relative tolerance on `|A + A^T|` accepted at ingestion.
pub const ANTISYMMETRY_TOLERANCE: f64 = 1e-10;

/// Largest condition number accepted before inverting.
pub const MAX_CONDITION: f64 = 1e12;

/// Largest half-order `m` accepted by the combinatorial reference.
pub const REFERENCE_MAX_HALF_ORDER: usize = 6;

/// A complex matrix with `A^T = -A`.
#[derive(Debug, Clone, PartialEq)]
pub struct AntisymmetricMatrix {
    matrix: CMatrix,
}

impl AntisymmetricMatrix {
    /// Checks antisymmetry up to [`ANTISYMMETRY_TOLERANCE`] and stores `(A - A^T)/2`.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                found: matrix.ncols(),
            });
        }
        let defect = (&matrix + matrix.transpose()).norm() / matrix.norm().max(1.0);
        if defect > ANTISYMMETRY_TOLERANCE {
            return Err(Error::NotAntisymmetric(defect));
        }
        let matrix = (&matrix - matrix.transpose()).scale(0.5);
        Ok(Self { matrix })
    }

    /// Builds the matrix from its strictly upper triangular entries `upper(j, k)`, `j < k`.
    pub fn from_upper<F: FnMut(usize, usize) -> C64>(order: usize, mut upper: F) -> Self {
        let mut matrix = CMatrix::zeros(order, order);
        for j in 0..order {
            for k in j + 1..order {
                let v = upper(j, k);
                matrix[(j, k)] = v;
                matrix[(k, j)] = -v;
            }
        }
        Self { matrix }
    }

    pub fn order(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }
}

fn check_even(order: usize) -> Result<()> {
    if !order.is_multiple_of(2) {
        return Err(Error::Domain(format!(
            "the Pfaffian needs an even order, got {order}"
        )));
    }
    Ok(())
}

/// Pfaffian via Parlett-Reid `L T L^T` reduction with partial pivoting, O(m^3).
pub fn pfaffian(a: &AntisymmetricMatrix) -> Result<C64> {
    let n = a.order();
    check_even(n)?;
    let mut m = a.matrix.clone();
    let mut pf = ONE;
    for k in (0..n.saturating_sub(1)).step_by(2) {
        let mut pivot = k + 1;
        let mut best = m[(k + 1, k)].norm();
        for i in k + 2..n {
            let v = m[(i, k)].norm();
            if v > best {
                best = v;
                pivot = i;
            }
        }
        if pivot != k + 1 {
            m.swap_rows(k + 1, pivot);
            m.swap_columns(k + 1, pivot);
            pf = -pf;
        }
        if m[(k + 1, k)] == ZERO {
            return Ok(ZERO);
        }
        let head = m[(k, k + 1)];
        pf *= head;
        if k + 2 < n {
            let tau: Vec<C64> = (k + 2..n).map(|j| m[(k, j)] / head).collect();
            let col: Vec<C64> = (k + 2..n).map(|i| m[(i, k + 1)]).collect();
            for (ii, i) in (k + 2..n).enumerate() {
                for (jj, j) in (k + 2..n).enumerate() {
                    m[(i, j)] += tau[ii] * col[jj] - col[ii] * tau[jj];
                }
            }
        }
    }
    Ok(pf)
}

/// Signed sum `(-1)^{m(m-1)/2} sum_p sgn(p) prod_j A[p(j), p(j+m)]` over permutations with
/// `p(1) < ... < p(m)` and `p(j) < p(j+m)`.
pub fn pfaffian_reference(a: &AntisymmetricMatrix) -> Result<C64> {
    let n = a.order();
    check_even(n)?;
    let m = n / 2;
    if m > REFERENCE_MAX_HALF_ORDER {
        return Err(Error::SizeLimit(format!(
            "reference Pfaffian limited to order {}, got {n}",
            2 * REFERENCE_MAX_HALF_ORDER
        )));
    }
    let mut used = vec![false; n];
    let mut pairs = Vec::with_capacity(m);
    let mut total = ZERO;
    enumerate_pairings(&a.matrix, &mut used, &mut pairs, &mut total);
    let sign = if (m * m.saturating_sub(1) / 2).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    };
    Ok(total * sign)
}

fn enumerate_pairings(
    a: &CMatrix,
    used: &mut [bool],
    pairs: &mut Vec<(usize, usize)>,
    total: &mut C64,
) {
    let Some(first) = used.iter().position(|u| !u) else {
        // pairs are already ordered by their first element
        let m = pairs.len();
        let mut perm = Vec::with_capacity(2 * m);
        perm.extend(pairs.iter().map(|p| p.0));
        perm.extend(pairs.iter().map(|p| p.1));
        let mut term = if permutation_is_odd(&perm) { -ONE } else { ONE };
        for &(i, j) in pairs.iter() {
            term *= a[(i, j)];
        }
        *total += term;
        return;
    };
    used[first] = true;
    for second in first + 1..used.len() {
        if used[second] {
            continue;
        }
        used[second] = true;
        pairs.push((first, second));
        enumerate_pairings(a, used, pairs, total);
        pairs.pop();
        used[second] = false;
    }
    used[first] = false;
}

fn permutation_is_odd(perm: &[usize]) -> bool {
    let mut inversions = 0usize;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2 == 1
}

/// `d/dt Pf(A(t)) = Pf(A) Tr(A^{-1} A') / 2` at a point where `A(t) = a` and `A'(t) = adot`.
pub fn pfaffian_derivative(a: &AntisymmetricMatrix, adot: &AntisymmetricMatrix) -> Result<C64> {
    if a.order() != adot.order() {
        return Err(Error::DimensionMismatch {
            expected: a.order(),
            found: adot.order(),
        });
    }
    let pf = pfaffian(a)?;
    let inv = checked_inverse(a.matrix())?;
    let trace = (inv * adot.matrix()).trace();
    Ok(pf * trace * 0.5)
}

/// Inverse of `m` after a condition-number gate at [`MAX_CONDITION`].
pub(crate) fn checked_inverse(m: &CMatrix) -> Result<CMatrix> {
    let condition = condition_number(m);
    if condition.is_nan() || condition > MAX_CONDITION {
        return Err(Error::Singular {
            condition,
            hint: "",
        });
    }
    m.clone().try_inverse().ok_or(Error::Singular {
        condition,
        hint: "",
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::random_vector;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_antisymmetric(rng: &mut ChaCha8Rng, order: usize) -> AntisymmetricMatrix {
        let v = random_vector(rng, order * order);
        AntisymmetricMatrix::from_upper(order, |j, k| v[j * order + k])
    }

    fn fixture_4x4() -> AntisymmetricMatrix {
        let upper = [[0., 1., 2., 3.], [0., 0., 4., 5.], [0., 0., 0., 6.]];
        AntisymmetricMatrix::from_upper(4, |j, k| C64::from(upper[j][k]))
    }

    #[test]
    fn two_by_two() {
        let a = AntisymmetricMatrix::from_upper(2, |_, _| C64::from(3.5));
        assert_eq!(pfaffian(&a).unwrap(), C64::from(3.5));
        assert_eq!(pfaffian_reference(&a).unwrap(), C64::from(3.5));
    }

    #[test]
    fn four_by_four_fixture() {
        let a = fixture_4x4();
        assert!((pfaffian(&a).unwrap() - C64::from(8.0)).norm() <= 1e-12);
        assert!((pfaffian_reference(&a).unwrap() - C64::from(8.0)).norm() <= 1e-12);
        let det = a.matrix().clone().determinant();
        assert!((det - C64::from(64.0)).norm() < 1e-10);
    }

    #[test]
    fn empty_matrix_has_unit_pfaffian() {
        let a = AntisymmetricMatrix::from_upper(0, |_, _| ZERO);
        assert_eq!(pfaffian(&a).unwrap(), ONE);
        assert_eq!(pfaffian_reference(&a).unwrap(), ONE);
    }

    #[test]
    fn odd_order_is_a_domain_error() {
        let a = AntisymmetricMatrix::from_upper(3, |_, _| ONE);
        assert!(matches!(pfaffian(&a), Err(Error::Domain(_))));
        assert!(matches!(pfaffian_reference(&a), Err(Error::Domain(_))));
    }

    #[test]
    fn ingestion_checks_antisymmetry() {
        let m = CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]);
        assert!(matches!(
            AntisymmetricMatrix::new(m),
            Err(Error::NotAntisymmetric(_))
        ));
        let mut m = fixture_4x4().into_matrix();
        m[(0, 1)] += C64::from(1e-15);
        let a = AntisymmetricMatrix::new(m).unwrap();
        assert_eq!(a.matrix()[(0, 1)], -a.matrix()[(1, 0)]);
    }

    #[test]
    fn reference_size_limit() {
        let a = AntisymmetricMatrix::from_upper(14, |_, _| ONE);
        assert!(matches!(pfaffian_reference(&a), Err(Error::SizeLimit(_))));
    }

    #[test]
    fn zero_row_gives_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut m = random_antisymmetric(&mut rng, 6).into_matrix();
        for i in 0..6 {
            m[(2, i)] = ZERO;
            m[(i, 2)] = ZERO;
        }
        let a = AntisymmetricMatrix::new(m).unwrap();
        assert_eq!(pfaffian_reference(&a).unwrap(), ZERO);
        assert!(pfaffian(&a).unwrap().norm() < 1e-14);
    }

    #[test]
    fn parlett_reid_matches_reference() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for order in [2, 4, 6, 8, 10, 12] {
            for _ in 0..3 {
                let a = random_antisymmetric(&mut rng, order);
                let fast = pfaffian(&a).unwrap();
                let slow = pfaffian_reference(&a).unwrap();
                assert!((fast - slow).norm() <= 1e-10 * slow.norm(), "{order}");
            }
        }
    }

    #[test]
    fn derivative_examples() {
        let a = AntisymmetricMatrix::from_upper(2, |_, _| ONE);
        let adot = AntisymmetricMatrix::from_upper(2, |_, _| C64::from(0.25));
        assert!((pfaffian_derivative(&a, &adot).unwrap() - C64::from(0.25)).norm() < 1e-15);
        let zero = AntisymmetricMatrix::from_upper(2, |_, _| ZERO);
        assert_eq!(pfaffian_derivative(&a, &zero).unwrap(), ZERO);
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let a = random_antisymmetric(&mut rng, 4);
        let adot = random_antisymmetric(&mut rng, 4);
        let eps = 1e-6;
        let plus = AntisymmetricMatrix::new(a.matrix() + adot.matrix().scale(eps)).unwrap();
        let minus = AntisymmetricMatrix::new(a.matrix() - adot.matrix().scale(eps)).unwrap();
        let fd = (pfaffian(&plus).unwrap() - pfaffian(&minus).unwrap()) / (2.0 * eps);
        let exact = pfaffian_derivative(&a, &adot).unwrap();
        assert!((fd - exact).norm() < 1e-6);
    }

    #[test]
    fn derivative_rejects_singular() {
        let a =
            AntisymmetricMatrix::from_upper(4, |j, k| if (j, k) == (0, 1) { ONE } else { ZERO });
        let adot = AntisymmetricMatrix::from_upper(4, |_, _| ONE);
        assert!(matches!(
            pfaffian_derivative(&a, &adot),
            Err(Error::Singular { .. })
        ));
        let b = AntisymmetricMatrix::from_upper(2, |_, _| ONE);
        assert!(matches!(
            pfaffian_derivative(&b, &adot),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
