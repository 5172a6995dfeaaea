mod common;

use common::params_and_point;
use lyness::map::{jacobian, jacobian_det, lyness_inverse, lyness_power, lyness_step, two_periodic_point};
use lyness::{Params, Rat};
use num_traits::Signed;
use proptest::prelude::*;

const KS: &[usize] = &[3, 4, 5, 6, 7, 8];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn inverse_undoes_step((k, a, x) in params_and_point(KS)) {
        let p = Params::new(k, a).unwrap();
        let y = lyness_step(&p, &x).unwrap();
        prop_assert_eq!(lyness_inverse(&p, &y).unwrap(), x.clone());
        prop_assert_eq!(lyness_step(&p, &lyness_inverse(&p, &x).unwrap()).unwrap(), x);
    }

    #[test]
    fn determinant_matches_closed_form((k, a, x) in params_and_point(KS)) {
        let p = Params::new(k, a).unwrap();
        prop_assert_eq!(jacobian(&p, &x).unwrap().determinant().unwrap(), jacobian_det(&p, &x).unwrap());
    }

    #[test]
    fn step_preserves_positivity((k, a, x) in params_and_point(KS)) {
        let p = Params::new(k, a).unwrap();
        let y = lyness_power(&p, &x, 3).unwrap();
        prop_assert!(y.iter().all(Signed::is_positive));
    }

    #[test]
    fn curves_of_two_periodic_points(
        k in prop::sample::select(&[3usize, 5][..]),
        a in 0i64..=20,
        num in 1i64..=80,
        den in 1i64..=9,
    ) {
        let p = Params::from_i64(k, a).unwrap();
        let offset = if k == 3 { 1 } else { 2 };
        let x = Rat::from_integer(offset.into()) + Rat::new(num.into(), den.into());
        let q = two_periodic_point(&p, x).unwrap();
        prop_assert_eq!(lyness_power(&p, &q, 2).unwrap(), q);
    }
}
