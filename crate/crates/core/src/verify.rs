//! Seeded exact verification suites.
//!
//! Each identity is checked at random rational points in exact arithmetic.
//! The point for trial `t` of identity `id` at `(k, a)` comes from its own
//! generator stream, so reports are identical for any thread count.

use std::fmt;

use num_traits::Zero;
use rayon::prelude::*;

use crate::dynamics::measure_density_residual;
use crate::error::{Error, Result};
use crate::invariants::{eval_pi, eval_v1, eval_v3, eval_w, eval_z, Invariant, eval_invariant};
use crate::map::{det_unchecked, lyness_power, step_unchecked, Params};
use crate::reduction::semiconjugacy_residual;
use crate::sampling::{random_point, seeded_rng, stream_id};
use crate::scalar::{format_rat, Rat, Scalar};
use crate::symmetry::{
    annihilation_residual, annihilation_supported, claim_residual, compatibility_residual, lie_residual,
    shift_residual,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Identity {
    Lie,
    Shift,
    Compatibility,
    AnnihilateV1,
    AnnihilateV2,
    AnnihilateV3,
    Claim,
    InvariantV1,
    InvariantV2,
    InvariantV3,
    WTwoIntegral,
    V3Decomposition,
    V1Factorization,
    ZLaw,
    PiLaw,
    SignFlip,
    MeasureDensity,
    Semiconjugacy,
}

impl Identity {
    pub const ALL: [Identity; 18] = [
        Identity::Lie,
        Identity::Shift,
        Identity::Compatibility,
        Identity::AnnihilateV1,
        Identity::AnnihilateV2,
        Identity::AnnihilateV3,
        Identity::Claim,
        Identity::InvariantV1,
        Identity::InvariantV2,
        Identity::InvariantV3,
        Identity::WTwoIntegral,
        Identity::V3Decomposition,
        Identity::V1Factorization,
        Identity::ZLaw,
        Identity::PiLaw,
        Identity::SignFlip,
        Identity::MeasureDensity,
        Identity::Semiconjugacy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Identity::Lie => "lie-symmetry",
            Identity::Shift => "shift-relations",
            Identity::Compatibility => "compatibility",
            Identity::AnnihilateV1 => "X-annihilates-V1",
            Identity::AnnihilateV2 => "X-annihilates-V2",
            Identity::AnnihilateV3 => "X-annihilates-V3",
            Identity::Claim => "claim-factorization",
            Identity::InvariantV1 => "V1",
            Identity::InvariantV2 => "V2",
            Identity::InvariantV3 => "V3",
            Identity::WTwoIntegral => "W-2-integral",
            Identity::V3Decomposition => "V3=W+W.F",
            Identity::V1Factorization => "V1=W*W.F",
            Identity::ZLaw => "Z.F=det*Z",
            Identity::PiLaw => "Pi.F=-det*Pi",
            Identity::SignFlip => "sign-Z-flip",
            Identity::MeasureDensity => "measure-density",
            Identity::Semiconjugacy => "semiconjugacy",
        }
    }

    /// `Err(reason)` when the identity is not asserted in dimension `k`.
    pub fn applicable(self, k: usize) -> std::result::Result<(), &'static str> {
        let odd = k % 2 == 1;
        let ok = match self {
            Identity::Lie | Identity::Shift | Identity::Compatibility => k >= 3,
            Identity::AnnihilateV1 => annihilation_supported(k, Invariant::V1),
            Identity::AnnihilateV2 => annihilation_supported(k, Invariant::V2),
            Identity::AnnihilateV3 => annihilation_supported(k, Invariant::V3),
            Identity::Claim => k >= 6,
            Identity::InvariantV1 | Identity::InvariantV2 => true,
            Identity::InvariantV3
            | Identity::WTwoIntegral
            | Identity::V3Decomposition
            | Identity::V1Factorization
            | Identity::ZLaw
            | Identity::PiLaw
            | Identity::SignFlip
            | Identity::MeasureDensity => {
                if !odd {
                    return Err("n/a (even k)");
                }
                true
            }
            Identity::Semiconjugacy => k == 3 || k == 5,
        };
        if ok {
            Ok(())
        } else {
            Err(match self {
                Identity::Lie | Identity::Shift | Identity::Compatibility => "n/a (k < 3)",
                Identity::Claim => "n/a (k < 6)",
                Identity::Semiconjugacy => "n/a (k not in {3, 5})",
                _ => "n/a",
            })
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Checks one identity at one point; `Ok(false)` is a genuine failure.
pub fn check_identity(p: &Params<Rat>, id: Identity, x: &[Rat], reduction_steps: usize) -> Result<bool> {
    let zero = |v: Rat| v.is_zero();
    let invariant = |which| -> Result<bool> {
        Ok(eval_invariant(p, which, &step_unchecked(p, x))? == eval_invariant(p, which, x)?)
    };
    p.check_point(x)?;
    Ok(match id {
        Identity::Lie => lie_residual(p, x)?.into_iter().all(zero),
        Identity::Shift => {
            for i in 1..p.k {
                if !shift_residual(p, x, i)?.is_zero() {
                    return Ok(false);
                }
            }
            true
        }
        Identity::Compatibility => zero(compatibility_residual(p, x)?),
        Identity::AnnihilateV1 => zero(annihilation_residual(p, x, Invariant::V1)?),
        Identity::AnnihilateV2 => zero(annihilation_residual(p, x, Invariant::V2)?),
        Identity::AnnihilateV3 => zero(annihilation_residual(p, x, Invariant::V3)?),
        Identity::Claim => zero(claim_residual(p, x)?),
        Identity::InvariantV1 => invariant(Invariant::V1)?,
        Identity::InvariantV2 => invariant(Invariant::V2)?,
        Identity::InvariantV3 => invariant(Invariant::V3)?,
        Identity::WTwoIntegral => eval_w(p, &lyness_power(p, x, 2)?)? == eval_w(p, x)?,
        Identity::V3Decomposition => eval_v3(p, x)? == eval_w(p, x)? + eval_w(p, &step_unchecked(p, x))?,
        Identity::V1Factorization => eval_v1(p, x)? == eval_w(p, x)? * eval_w(p, &step_unchecked(p, x))?,
        Identity::ZLaw => eval_z(p, &step_unchecked(p, x))? == det_unchecked(p, x) * eval_z(p, x)?,
        Identity::PiLaw => eval_pi(p, &step_unchecked(p, x))? == -det_unchecked(p, x) * eval_pi(p, x)?,
        Identity::SignFlip => {
            let z = eval_z(p, x)?;
            z.is_zero() || eval_z(p, &step_unchecked(p, x))?.sign() == -z.sign()
        }
        Identity::MeasureDensity => {
            let (a, b) = measure_density_residual(p, x)?;
            a.is_zero() && b.is_zero()
        }
        Identity::Semiconjugacy => zero(semiconjugacy_residual(p, x, reduction_steps)?),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub ks: Vec<usize>,
    pub a_values: Vec<Rat>,
    pub trials: usize,
    pub seed: u64,
    pub identities: Vec<Identity>,
    /// Steps of `F∘F` per semiconjugacy trial.
    pub reduction_steps: usize,
    /// Cap on semiconjugacy trials, which are far costlier than the rest.
    pub reduction_trials: usize,
}

impl VerifyConfig {
    pub fn new(ks: Vec<usize>, a_values: Vec<Rat>, trials: usize, seed: u64) -> Self {
        VerifyConfig {
            ks,
            a_values,
            trials,
            seed,
            identities: Identity::ALL.to_vec(),
            reduction_steps: 100,
            reduction_trials: 20,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Checked { passed: usize, failed: usize },
    NotApplicable(&'static str),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tally {
    pub k: usize,
    pub a: Rat,
    pub identity: Identity,
    pub outcome: Outcome,
    /// First failing point, if any.
    pub counterexample: Option<Vec<Rat>>,
}

impl Tally {
    pub fn passed(&self) -> bool {
        !matches!(self.outcome, Outcome::Checked { failed, .. } if failed > 0)
    }
}

impl fmt::Display for Tally {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k={} a={} {}: ", self.k, format_rat(&self.a), self.identity)?;
        match &self.outcome {
            Outcome::Checked { passed, failed } => {
                let verdict = if *failed == 0 { "PASS" } else { "FAIL" };
                write!(f, "{verdict} {passed}/{}", passed + failed)
            }
            Outcome::NotApplicable(why) => f.write_str(why),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub seed: u64,
    pub tallies: Vec<Tally>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.tallies.iter().all(Tally::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Tally> {
        self.tallies.iter().filter(|t| !t.passed())
    }
}

fn label_hash(text: &str) -> u64 {
    stream_id(&text.bytes().map(u64::from).collect::<Vec<_>>())
}

/// Generator for trial `trial` of `id` at `(k, a)`.
pub fn trial_point(seed: u64, k: usize, a: &Rat, id: Identity, trial: usize) -> Vec<Rat> {
    let stream = stream_id(&[
        k as u64,
        label_hash(&format_rat(a)),
        label_hash(id.name()),
        trial as u64,
    ]);
    random_point(&mut seeded_rng(seed, stream), k)
}

/// Runs every configured identity over the `(k, a)` grid.
///
/// Trials run in parallel; the report order is `k`, then `a`, then identity
/// in configuration order. Evaluation errors (points hitting a pole or
/// leaving the orthant) are reported as failures.
pub fn run_suite(cfg: &VerifyConfig) -> Result<VerifyReport> {
    if let Some(&k) = cfg.ks.iter().find(|&&k| k < 3) {
        return Err(Error::UnsupportedDimension {
            k,
            what: "the verification suites need k >= 3",
        });
    }
    let mut cells = Vec::new();
    for &k in &cfg.ks {
        for a in &cfg.a_values {
            let p = Params::new(k, a.clone())?;
            for &id in &cfg.identities {
                cells.push((p.clone(), id));
            }
        }
    }
    let tallies = cells
        .par_iter()
        .map(|(p, id)| {
            let (k, id) = (p.k, *id);
            let tally = |outcome, counterexample| Tally {
                k,
                a: p.a.clone(),
                identity: id,
                outcome,
                counterexample,
            };
            if let Err(why) = id.applicable(k) {
                return tally(Outcome::NotApplicable(why), None);
            }
            let trials = if id == Identity::Semiconjugacy {
                cfg.trials.min(cfg.reduction_trials)
            } else {
                cfg.trials
            };
            let results: Vec<(bool, Vec<Rat>)> = (0..trials)
                .into_par_iter()
                .map(|t| {
                    let x = trial_point(cfg.seed, k, &p.a, id, t);
                    let ok = check_identity(p, id, &x, cfg.reduction_steps).unwrap_or(false);
                    (ok, x)
                })
                .collect();
            let passed = results.iter().filter(|r| r.0).count();
            let counterexample = results.into_iter().find(|r| !r.0).map(|r| r.1);
            tally(
                Outcome::Checked {
                    passed,
                    failed: trials - passed,
                },
                counterexample,
            )
        })
        .collect();
    Ok(VerifyReport { seed: cfg.seed, tallies })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::ints;

    #[test]
    fn applicability() {
        assert!(Identity::InvariantV3.applicable(4).is_err());
        assert_eq!(Identity::InvariantV3.applicable(4), Err("n/a (even k)"));
        assert!(Identity::Claim.applicable(5).is_err());
        assert!(Identity::Claim.applicable(6).is_ok());
        assert!(Identity::AnnihilateV3.applicable(5).is_ok());
        assert!(Identity::AnnihilateV1.applicable(6).is_err());
    }

    #[test]
    fn golden_point_passes_everything_applicable() {
        let p = Params::from_i64(5, 1).unwrap();
        let x = ints(&[1, 2, 3, 4, 5]);
        for id in Identity::ALL {
            if id.applicable(5).is_ok() {
                assert!(check_identity(&p, id, &x, 10).unwrap(), "{id}");
            }
        }
    }

    #[test]
    fn small_suite_is_deterministic_and_green() {
        let mut cfg = VerifyConfig::new(vec![3, 4], ints(&[1]), 5, 42);
        cfg.reduction_steps = 5;
        let r1 = run_suite(&cfg).unwrap();
        let r2 = run_suite(&cfg).unwrap();
        assert_eq!(r1, r2);
        assert!(r1.all_passed(), "{:?}", r1.failures().collect::<Vec<_>>());
        let v3_even = r1
            .tallies
            .iter()
            .find(|t| t.k == 4 && t.identity == Identity::InvariantV3)
            .unwrap();
        assert_eq!(v3_even.outcome, Outcome::NotApplicable("n/a (even k)"));
    }

    #[test]
    fn k2_is_rejected() {
        let cfg = VerifyConfig::new(vec![2], ints(&[1]), 1, 1);
        assert!(run_suite(&cfg).is_err());
    }
}
