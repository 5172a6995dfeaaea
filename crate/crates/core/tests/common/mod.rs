#![allow(dead_code)]

use lyness::Rat;
use proptest::prelude::*;

/// Positive rational with numerator in 1..=50 and denominator in 1..=10.
pub fn positive_rat() -> impl Strategy<Value = Rat> {
    (1i64..=50, 1i64..=10).prop_map(|(p, q)| Rat::new(p.into(), q.into()))
}

/// Signed rational with small numerator and denominator.
pub fn any_rat() -> impl Strategy<Value = Rat> {
    (-60i64..=60, 1i64..=12).prop_map(|(p, q)| Rat::new(p.into(), q.into()))
}

pub fn point(k: usize) -> impl Strategy<Value = Vec<Rat>> {
    prop::collection::vec(positive_rat(), k)
}

/// `(k, a, x)` with `k` in `ks`, `a` a non-negative rational and `x` a
/// random rational point.
pub fn params_and_point(ks: &'static [usize]) -> impl Strategy<Value = (usize, Rat, Vec<Rat>)> {
    (prop::sample::select(ks), 0i64..=30, 1i64..=4)
        .prop_flat_map(|(k, p, q)| (Just(k), Just(Rat::new(p.into(), q.into())), point(k)))
}
