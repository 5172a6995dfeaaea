mod common;

use common::params_and_point;
use lyness::invariants::{eval_invariant, eval_pi, eval_v1, eval_v3, eval_v3_via_w, eval_w, eval_z, Invariant};
use lyness::map::{jacobian_det, lyness_power, lyness_step};
use lyness::{Params, Scalar};
use num_traits::Zero;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn v1_and_v2_are_invariant((k, a, x) in params_and_point(&[3, 4, 5, 6, 7, 8])) {
        let p = Params::new(k, a).unwrap();
        let y = lyness_step(&p, &x).unwrap();
        for w in [Invariant::V1, Invariant::V2] {
            prop_assert_eq!(eval_invariant(&p, w, &y).unwrap(), eval_invariant(&p, w, &x).unwrap());
        }
    }

    #[test]
    fn odd_k_laws((k, a, x) in params_and_point(&[3, 5, 7])) {
        let p = Params::new(k, a).unwrap();
        let y = lyness_step(&p, &x).unwrap();
        let det = jacobian_det(&p, &x).unwrap();
        let (w, wf) = (eval_w(&p, &x).unwrap(), eval_w(&p, &y).unwrap());
        let z = eval_z(&p, &x).unwrap();

        prop_assert_eq!(eval_v3(&p, &y).unwrap(), eval_v3(&p, &x).unwrap());
        prop_assert_eq!(eval_v3(&p, &x).unwrap(), eval_v3_via_w(&p, &x).unwrap());
        prop_assert_eq!(eval_w(&p, &lyness_power(&p, &x, 2).unwrap()).unwrap(), w.clone());
        prop_assert_eq!(eval_v1(&p, &x).unwrap(), &w * &wf);
        prop_assert_eq!(eval_z(&p, &y).unwrap(), &det * &z);
        prop_assert_eq!(eval_pi(&p, &y).unwrap(), -&det * eval_pi(&p, &x).unwrap());
        // W is only a 2-integral: W∘F = W exactly when Z = 0.
        prop_assert_eq!(wf == w, z.is_zero());
        if !z.is_zero() {
            prop_assert_eq!(eval_z(&p, &y).unwrap().sign(), -z.sign());
        }
    }

    #[test]
    fn even_k_product_law((k, a, x) in params_and_point(&[4, 6, 8])) {
        let p = Params::new(k, a).unwrap();
        let y = lyness_step(&p, &x).unwrap();
        let det = jacobian_det(&p, &x).unwrap();
        prop_assert_eq!(eval_pi(&p, &y).unwrap(), det * eval_pi(&p, &x).unwrap());
        prop_assert!(eval_v3(&p, &x).is_err());
    }
}
