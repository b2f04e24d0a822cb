//! Dense complex helpers shared by the other modules.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// `<a|b>`, conjugate-linear in the first slot.
pub fn inner(a: &CVector, b: &CVector) -> C64 {
    a.dotc(b)
}

/// Entrywise complex conjugate.
pub fn conj_matrix(m: &CMatrix) -> CMatrix {
    m.map(|z| z.conj())
}

pub fn conj_vector(v: &CVector) -> CVector {
    v.map(|z| z.conj())
}

/// Frobenius norm scaled so that the result is a relative measure for `reference`.
pub fn relative_norm(diff: &CMatrix, reference: &CMatrix) -> f64 {
    diff.norm() / reference.norm().max(1.0)
}

/// Largest singular value divided by the smallest one (infinite when singular).
pub fn condition_number(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 1.0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let max = sv.max();
    let min = sv.min();
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Spectral decomposition of a Hermitian matrix with eigenvalues sorted ascending.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, in the order of `values`.
    pub vectors: CMatrix,
}

impl HermitianEigen {
    /// Decomposes the Hermitian part `(m + m^dagger)/2` of `m`.
    pub fn new(m: &CMatrix) -> Self {
        let n = m.nrows();
        let herm = (m + m.adjoint()).scale(0.5);
        if is_diagonal(&herm) {
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&a, &b| herm[(a, a)].re.total_cmp(&herm[(b, b)].re));
            let values = order.iter().map(|&k| herm[(k, k)].re).collect();
            let mut vectors = CMatrix::zeros(n, n);
            for (dst, &src) in order.iter().enumerate() {
                vectors[(src, dst)] = ONE;
            }
            return Self { values, vectors };
        }
        let eig = SymmetricEigen::new(herm);
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let mut vectors = CMatrix::zeros(n, n);
        for (dst, &src) in order.iter().enumerate() {
            vectors.set_column(dst, &eig.eigenvectors.column(src));
        }
        Self { values, vectors }
    }

    /// `V diag(f(lambda)) V^dagger`.
    pub fn map<F: Fn(f64) -> C64>(&self, f: F) -> CMatrix {
        let mut scaled = self.vectors.clone();
        for (k, &lambda) in self.values.iter().enumerate() {
            let mut col = scaled.column_mut(k);
            col *= f(lambda);
        }
        scaled * self.vectors.adjoint()
    }

    pub fn column(&self, k: usize) -> CVector {
        self.vectors.column(k).into_owned()
    }
}

fn is_diagonal(m: &CMatrix) -> bool {
    let n = m.nrows();
    (0..n).all(|j| (0..n).all(|i| i == j || m[(i, j)] == ZERO))
}

/// Logistic function `1/(1 + e^{-x})` evaluated without overflow.
pub fn logistic(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inner_is_conjugate_linear_in_first_argument() {
        let a = CVector::from_vec(vec![I, ZERO]);
        let b = CVector::from_vec(vec![ONE, ZERO]);
        assert_eq!(inner(&a, &b), -I);
        assert_eq!(inner(&b, &a), I);
    }

    #[test]
    fn eigen_sorted_and_reconstructs() {
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[
                C64::new(2.0, 0.0),
                C64::new(0.0, 1.0),
                C64::new(0.0, -1.0),
                C64::new(-1.0, 0.0),
            ],
        );
        let eig = HermitianEigen::new(&m);
        assert!(eig.values[0] < eig.values[1]);
        let back = eig.map(C64::from);
        assert!((back - &m).norm() < 1e-13);
    }

    #[test]
    fn diagonal_fast_path() {
        let m = CMatrix::from_diagonal(&CVector::from_vec(vec![
            C64::from(3.0),
            C64::from(-1.0),
            C64::from(2.0),
        ]));
        let eig = HermitianEigen::new(&m);
        assert_eq!(eig.values, vec![-1.0, 2.0, 3.0]);
        assert_eq!(eig.map(C64::from), m);
    }

    #[test]
    fn logistic_is_stable() {
        assert_eq!(logistic(0.0), 0.5);
        assert!((logistic(1.0) - 0.731_058_578_630_004_9).abs() < 1e-15);
        assert_eq!(logistic(-1000.0), 0.0);
        assert_eq!(logistic(1000.0), 1.0);
    }

    #[test]
    fn condition_of_singular_matrix_is_infinite() {
        let m = CMatrix::from_element(2, 2, ONE);
        assert!(condition_number(&m) > 1e15);
    }
}
