use carrel_core::models::random_vector;
use carrel_core::{pfaffian, pfaffian_reference, AntisymmetricMatrix, CMatrix, C64};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random_antisymmetric(seed: u64, order: usize) -> AntisymmetricMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let upper = random_vector(&mut rng, order * order);
    AntisymmetricMatrix::from_upper(order, |j, k| upper[j * order + k])
}

fn random_square(seed: u64, order: usize) -> CMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = random_vector(&mut rng, order * order);
    CMatrix::from_fn(order, order, |r, c| v[r * order + c])
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn square_is_determinant(seed in any::<u64>(), half in 1usize..=5) {
        let a = random_antisymmetric(seed, 2 * half);
        let pf = pfaffian(&a).unwrap();
        let det = a.matrix().determinant();
        prop_assert!(rel(pf * pf, det) <= 1e-8, "pf^2 {} det {}", pf * pf, det);
    }

    #[test]
    fn agrees_with_pairing_sum(seed in any::<u64>(), half in 1usize..=5) {
        let a = random_antisymmetric(seed, 2 * half);
        let fast = pfaffian(&a).unwrap();
        let slow = pfaffian_reference(&a).unwrap();
        prop_assert!(rel(fast, slow) <= 1e-10);
    }

    #[test]
    fn congruence(seed in any::<u64>(), half in 1usize..=4) {
        let order = 2 * half;
        let a = random_antisymmetric(seed, order);
        let b = random_square(seed ^ 0x5eed, order);
        let moved = AntisymmetricMatrix::new(&b * a.matrix() * b.transpose()).unwrap();
        let lhs = pfaffian(&moved).unwrap();
        let rhs = b.determinant() * pfaffian(&a).unwrap();
        prop_assert!(rel(lhs, rhs) <= 1e-8);
    }

    #[test]
    fn row_swap_flips_sign(seed in any::<u64>(), half in 1usize..=4) {
        let order = 2 * half;
        let a = random_antisymmetric(seed, order);
        let mut p = CMatrix::identity(order, order);
        p.swap_rows(0, order - 1);
        let swapped = AntisymmetricMatrix::new(&p * a.matrix() * p.transpose()).unwrap();
        prop_assert!(rel(pfaffian(&swapped).unwrap(), -pfaffian(&a).unwrap()) <= 1e-10);
    }
}

#[test]
fn twelve_by_twelve_against_reference() {
    for seed in 0..4 {
        let a = random_antisymmetric(seed, 12);
        assert!(rel(pfaffian(&a).unwrap(), pfaffian_reference(&a).unwrap()) <= 1e-10);
    }
}
