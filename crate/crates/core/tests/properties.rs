//! Property tests for the combinatorial identities and structural invariants.

use num_traits::ToPrimitive;
use proptest::prelude::*;

use haarspec::combinatorics::{
    big_ln, double_factorial, eval_df_binomial_identity, eval_nested_df_identity, factorial,
    log_double_factorial,
};
use haarspec::harmonic::{poly_to_symvector, Poly};
use haarspec::moments::{lex_index, lex_tuple, DEFAULT_MATRIX_CAP};
use haarspec::spectra::{binary_phase_spectrum, real_haar_spectrum};
use haarspec::Rat;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn df_binomial_identity_holds(n in 0u64..=12, p in 0u64..=12, q in 0u64..=12) {
        let (lhs, rhs) = eval_df_binomial_identity(n, p, q);
        prop_assert_eq!(lhs, rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn nested_df_identity_holds(d in 2u64..=5, k0 in 0u64..=8, p in 0u64..=8, q in 0u64..=8) {
        let (lhs, rhs) = eval_nested_df_identity(d, k0, p, q).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

proptest! {
    #[test]
    fn double_factorial_pairing(n in 1i64..=200) {
        prop_assert_eq!(
            double_factorial(n).unwrap() * double_factorial(n - 1).unwrap(),
            factorial(n as u64)
        );
    }

    #[test]
    fn log_path_matches_exact_path(n in 0u64..=2000) {
        let exact = big_ln(&double_factorial(n as i64).unwrap());
        let logged = log_double_factorial(n);
        let scale = exact.abs().max(1.0);
        prop_assert!((logged - exact).abs() <= 1e-12 * scale, "{logged} vs {exact}");
    }

    #[test]
    fn eigenvalue_ratio_recurrence(d in 2u64..=8, t in 2u64..=10) {
        let s = real_haar_spectrum(d, t).unwrap();
        for w in s.lines.windows(2) {
            let k = w[0].k;
            let expected = haarspec::combinatorics::rat(
                (d + 2 * t - 2 * k - 2) as i64,
                (2 * k + 2) as i64,
            );
            prop_assert_eq!(&w[1].eigenvalue / &w[0].eigenvalue, expected);
        }
    }

    #[test]
    fn real_spectrum_invariants(d in 2u64..=6, t in 1u64..=8) {
        real_haar_spectrum(d, t).unwrap().validate().unwrap();
    }

    #[test]
    fn binary_spectrum_unit_trace_and_smallest_class(d in 2u64..=6, t_offset in 0u64..=5) {
        let t = 1 + t_offset.min(d - 1);
        let s = binary_phase_spectrum(d, t).unwrap();
        s.validate().unwrap();
        // the full-odd-profile class has exactly t! elements
        let dt = Rat::new(num_bigint::BigInt::from(d).pow(t as u32), 1.into());
        let smallest = s.entries.last().unwrap().0.clone() * dt;
        prop_assert_eq!(smallest, Rat::from(num_bigint::BigInt::from(factorial(t))));
    }

    #[test]
    fn symvector_images_are_permutation_invariant(
        seed in 0u64..1000,
        d in 2u64..=3,
        t in 2u64..=4,
    ) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
        let mut exps = vec![0u64; d as usize];
        for _ in 0..t {
            exps[rng.random_range(0..d as usize)] += 1;
        }
        let p = Poly::monomial(d as usize, exps, haarspec::combinatorics::rat(3, 7));
        let v = poly_to_symvector(&p, DEFAULT_MATRIX_CAP).unwrap();
        // swapping any two tensor positions fixes the vector
        let (a, b) = (rng.random_range(0..t as usize), rng.random_range(0..t as usize));
        for idx in 0..v.coefficients.len() {
            let mut tuple = lex_tuple(idx, d, t);
            tuple.swap(a, b);
            let swapped = lex_index(&tuple, d);
            prop_assert_eq!(&v.coefficients[idx], &v.coefficients[swapped]);
        }
    }

    #[test]
    fn multiplicity_sum_telescopes(d in 2u64..=10, t in 1u64..=10) {
        let s = real_haar_spectrum(d, t).unwrap();
        let total: haarspec::BigNat = s.lines.iter().map(|l| l.multiplicity.clone()).sum();
        prop_assert_eq!(total.to_u128().unwrap(), {
            // C(d+t−1, t) by direct product
            let mut acc: u128 = 1;
            for i in 1..=t as u128 {
                acc = acc * (d as u128 + t as u128 - i) / i;
            }
            acc
        });
    }
}
