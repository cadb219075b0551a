//! Shared helpers for the integration suites: deterministic random
//! representations and rationals.

use cantor_atlas::basis::BaseSpec;
use cantor_atlas::codec::{normalize, Polarity, Representation, Tail};
use cantor_atlas::numerics::{int, Rational, SplitMix64};
use num_bigint::BigInt;

/// Uniform-ish rational in `[lo, hi]` with moderate denominators.
pub fn random_rational_in(
    rng: &mut SplitMix64,
    lo: &Rational,
    hi: &Rational,
) -> Rational {
    let denom = 1 + rng.below(9_999);
    let numer = rng.below(denom + 1);
    let t = Rational::new(BigInt::from(numer), BigInt::from(denom));
    lo + (hi - lo) * t
}

/// Smallest alphabet a periodic block digit meets across all its
/// occurrence levels (`level`, `level + block_len`, ...).
pub fn min_base_over_occurrences(
    spec: &BaseSpec,
    polarity: Polarity,
    level: usize,
    block_len: usize,
) -> u32 {
    if matches!(polarity, Polarity::NegaConstant) {
        return spec.cap;
    }
    let reps = spec.preperiod.len() / block_len + 2;
    (0..=reps)
        .map(|t| spec.base_at(level + t * block_len))
        .min()
        .unwrap()
}

/// Random canonical periodic-tail representation over `spec`.
pub fn random_periodic_rep(
    rng: &mut SplitMix64,
    spec: &BaseSpec,
    polarity: Polarity,
) -> Representation {
    let base_at = |level: usize| -> u32 {
        match polarity {
            Polarity::NegaConstant => spec.cap,
            _ => spec.base_at(level),
        }
    };
    let explicit = rng.below(5) as usize;
    let digits: Vec<u32> = (1..=explicit)
        .map(|k| rng.below(base_at(k) as u64) as u32)
        .collect();
    let lam = spec.period.len() * 2;
    let block_len = lam * (1 + rng.below(2) as usize);
    let block: Vec<u32> = (1..=block_len)
        .map(|j| {
            let b = min_base_over_occurrences(spec, polarity, explicit + j, block_len);
            rng.below(b as u64) as u32
        })
        .collect();
    let rep = Representation::new(spec.clone(), polarity, digits, Tail::Periodic(block))
        .expect("digits drawn from the level alphabets");
    normalize(&rep)
}

/// `10^-k` as an exact rational.
pub fn pow10_neg(k: usize) -> Rational {
    Rational::new(BigInt::from(1), num_traits::pow(BigInt::from(10), k))
}

#[allow(dead_code)]
pub fn one() -> Rational {
    int(1)
}
