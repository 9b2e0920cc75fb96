use carries_core::carries::{
    add_columns, is_stochastically_monotone, is_tp2, stationary, transition_matrix,
};
use carries_core::exact::{format_rational, parse_rational, ratio};
use carries_core::typeb::{stationary_b, transition_matrix_b};
use carries_core::veronese::sectioning_agrees;
use carries_core::HVector;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn carries_matrix_is_a_monotone_tp2_kernel(n in 1u32..9, b in 2u64..12) {
        let p = transition_matrix(n, b).unwrap();
        prop_assert!(p.is_row_stochastic());
        prop_assert!(is_stochastically_monotone(&p));
        prop_assert!(is_tp2(&p));
        let pi = stationary(n).unwrap();
        prop_assert_eq!(p.left_mul(pi.entries()).unwrap(), pi.entries().to_vec());
    }

    #[test]
    fn type_b_matrix_fixes_its_eulerian_law(n in 1u32..7, b in 1u64..5) {
        let p = transition_matrix_b(n, b).unwrap();
        prop_assert!(p.is_row_stochastic());
        let pi = stationary_b(n).unwrap();
        prop_assert_eq!(p.left_mul(pi.entries()).unwrap(), pi.entries().to_vec());
    }

    #[test]
    fn column_addition_matches_integer_addition(xs in prop::collection::vec(0u64..1_000_000_000, 2..6)) {
        let digits: Vec<Vec<u64>> = xs
            .iter()
            .map(|x| x.to_string().bytes().map(|c| u64::from(c - b'0')).collect())
            .collect();
        let trace = add_columns(&digits, 10).unwrap();
        prop_assert!(trace.is_consistent());
        prop_assert_eq!(trace.sum_string(), xs.iter().sum::<u64>().to_string());
        prop_assert!(trace.carries().iter().all(|&c| c < xs.len() as u64));
    }

    #[test]
    fn veronese_matrix_agrees_with_sectioning(
        coeffs in prop::collection::vec(-20i64..20, 3..7),
        b in 1u64..6,
    ) {
        let h = HVector::from_integers(&coeffs).unwrap();
        prop_assert!(sectioning_agrees(&h, b, 10).unwrap());
    }

    #[test]
    fn rationals_round_trip_through_text(num in -10_000i64..10_000, den in 1i64..10_000) {
        let q = ratio(num, den);
        prop_assert_eq!(parse_rational(&format_rational(&q)).unwrap(), q);
    }
}
