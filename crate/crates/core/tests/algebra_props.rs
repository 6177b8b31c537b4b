mod common;

use num_traits::One;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{fraction_field_rank, random_matrix};
use twistkit::algebra::{invariant_factors, minors_gcd, rank, smith_normal_form};
use twistkit::{LaurentPoly, PolyMatrix, Rational};

fn poly_strategy(max_len: usize) -> impl Strategy<Value = LaurentPoly> {
    (-3i64..=3, prop::collection::vec((-10i64..=10, 1i64..=10), 0..=max_len)).prop_map(|(min_exp, cs)| {
        LaurentPoly::new(min_exp, cs.into_iter().map(|(n, d)| Rational::new(n.into(), d.into())).collect())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn normalization_is_idempotent_and_unit_blind(
        p in poly_strategy(5),
        (n, d) in (-10i64..=10, 1i64..=10),
        shift in -5i64..=5,
    ) {
        let once = p.normalize_unit();
        prop_assert_eq!(once.normalize_unit(), once.clone());
        prop_assume!(n != 0);
        let unit = LaurentPoly::monomial(Rational::new(n.into(), d.into()), shift);
        prop_assert_eq!((&p * &unit).normalize_unit(), once.clone());
        if !p.is_zero() {
            prop_assert_eq!(once.min_exp(), 0);
            prop_assert!(once.coeffs().iter().all(|c| c.is_integer()));
        }
    }

    #[test]
    fn division_with_remainder(a in poly_strategy(6), b in poly_strategy(4)) {
        prop_assume!(!b.is_zero());
        let (q, r) = a.div_rem(&b).unwrap();
        prop_assert_eq!(&(&q * &b) + &r, a.clone());
        if !r.is_zero() {
            prop_assert!(r.breadth() < b.breadth());
        }
    }

    #[test]
    fn gcd_divides_and_is_maximal(a in poly_strategy(4), b in poly_strategy(4), c in poly_strategy(3)) {
        prop_assume!(!c.is_zero());
        let (ac, bc) = (&a * &c, &b * &c);
        let g = ac.gcd(&bc);
        prop_assert!(g.divides(&ac) && g.divides(&bc));
        prop_assert!(c.divides(&g));
    }

    #[test]
    fn smith_form_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_matrix(&mut rng, 4, 3);
        let s = smith_normal_form(&a);
        prop_assert_eq!(&(&s.u * &s.d) * &s.v, a.clone());
        for w in s.diagonal.windows(2) {
            prop_assert!(w[0].divides(&w[1]));
        }
        prop_assert!(s.diagonal.iter().all(|d| d.normalize_unit() == *d));
        prop_assert_eq!(s.rank(), fraction_field_rank(&a));
        prop_assert_eq!(rank(&a), s.rank());
        prop_assert_eq!(invariant_factors(&a), s.diagonal.clone());
    }

    #[test]
    fn minors_determine_invariant_factors(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_matrix(&mut rng, 3, 2);
        let factors = invariant_factors(&a);
        let mut prefix = LaurentPoly::one();
        for size in 1..=a.rows().min(a.cols()) {
            let g = minors_gcd(&a, size).unwrap();
            if size <= factors.len() {
                prefix = (&prefix * &factors[size - 1]).normalize_unit();
                prop_assert_eq!(g, prefix.clone());
            } else {
                prop_assert!(g.is_zero());
            }
        }
    }
}

#[test]
fn unimodular_transforms_have_unit_determinants() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let a = random_matrix(&mut rng, 4, 2);
        let s = smith_normal_form(&a);
        assert!(s.u.determinant().unwrap().is_unit());
        assert!(s.v.determinant().unwrap().is_unit());
    }
}

#[test]
fn zero_and_empty_matrices() {
    assert_eq!(fraction_field_rank(&PolyMatrix::zeros(3, 2)), 0);
    assert_eq!(rank(&PolyMatrix::zeros(0, 4)), 0);
    assert!(invariant_factors(&PolyMatrix::zeros(2, 0)).is_empty());
}
