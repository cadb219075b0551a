//! Digit representations in three numeral systems over a base sequence
//! `Q = (q_k)`:
//!
//! * positive Cantor series  `x = sum ε_k / (q_1 ... q_k)` on `[0,1]`,
//! * alternating Cantor series `x = sum (-1)^k ε_k / (q_1 ... q_k)` on
//!   `[a0 - 1, a0]` (a numeral system with negative bases), and
//! * the nega-q expansion `x = sum ε_k / (-q)^k` (constant base `q = cap`)
//!   on `[-q/(q+1), 1/(q+1)]`.
//!
//! Provides exact decoding (closed geometric forms for eventually periodic
//! digit streams), greedy encoding with remainder-cycle detection, the
//! two-representations duality of rational points, canonical normalization,
//! cylinders, and the shift operator.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::basis::BaseSpec;
use crate::error::{Error, Result};
use crate::numerics::{int, Enclosure, Rational};

/// Which series a digit string stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarity {
    /// `sum ε_k / (q_1 ... q_k)`
    Positive,
    /// `sum (-1)^k ε_k / (q_1 ... q_k)`
    Alternating,
    /// `sum ε_k / (-cap)^k` (base `cap` at every level)
    NegaConstant,
}

/// Digits beyond the explicit prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tail {
    /// All further digits are zero.
    Zeros,
    /// The block repeats forever (stored sign- and period-aligned).
    Periodic(Vec<u32>),
    /// Nothing is known beyond the prefix; decoding yields the cylinder hull.
    Truncated,
}

/// A point of the chosen system: explicit digits `ε_1 ... ε_m` plus a tail
/// rule. Digit validity against the level alphabets is enforced on
/// construction; periodic tails are stored aligned so that bases and signs
/// repeat along the block.
#[derive(Debug, Clone)]
pub struct Representation {
    spec: BaseSpec,
    polarity: Polarity,
    digits: Vec<u32>,
    tail: Tail,
}

impl Representation {
    pub fn new(spec: BaseSpec, polarity: Polarity, digits: Vec<u32>, tail: Tail) -> Result<Self> {
        spec.validate()?;
        let mut rep = Self { spec, polarity, digits, tail };
        rep.align()?;
        rep.check_digits()?;
        Ok(rep)
    }

    pub fn spec(&self) -> &BaseSpec {
        &self.spec
    }

    pub fn polarity(&self) -> Polarity {
        self.polarity
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn tail(&self) -> &Tail {
        &self.tail
    }

    /// Base of the digit alphabet at 1-based `level`.
    pub fn base_at(&self, level: usize) -> u32 {
        match self.polarity {
            Polarity::NegaConstant => self.spec.cap,
            _ => self.spec.base_at(level),
        }
    }

    /// Digit at 1-based `level`; `None` beyond a truncated prefix.
    pub fn digit_at(&self, level: usize) -> Option<u32> {
        assert!(level >= 1);
        if level <= self.digits.len() {
            return Some(self.digits[level - 1]);
        }
        match &self.tail {
            Tail::Zeros => Some(0),
            Tail::Periodic(block) => Some(block[(level - self.digits.len() - 1) % block.len()]),
            Tail::Truncated => None,
        }
    }

    /// Effective period of the digit stream beyond the explicit prefix
    /// (1 for `Zeros`; `None` for `Truncated`).
    fn tail_period(&self) -> Option<usize> {
        match &self.tail {
            Tail::Zeros => Some(1),
            Tail::Periodic(b) => Some(b.len()),
            Tail::Truncated => None,
        }
    }

    /// Rewrites storage so that (a) the explicit prefix covers the preperiod
    /// whenever levels matter to the tail and (b) periodic blocks have even,
    /// period-aligned length.
    fn align(&mut self) -> Result<()> {
        let Tail::Periodic(block) = &mut self.tail else {
            return Ok(());
        };
        if block.is_empty() {
            return Err(Error::Validation(vec!["empty periodic tail block".into()]));
        }
        if self.polarity != Polarity::NegaConstant {
            while self.digits.len() < self.spec.preperiod.len() {
                self.digits.push(block[0]);
                block.rotate_left(1);
            }
        }
        let needed = match self.polarity {
            Polarity::Positive => self.spec.period.len().lcm(&2),
            Polarity::Alternating => self.spec.period.len().lcm(&2),
            Polarity::NegaConstant => 2,
        };
        let target = block.len().lcm(&needed);
        let copies = target / block.len();
        let base_block = block.clone();
        for _ in 1..copies {
            block.extend_from_slice(&base_block);
        }
        Ok(())
    }

    fn check_digits(&self) -> Result<()> {
        for (i, &d) in self.digits.iter().enumerate() {
            let b = self.base_at(i + 1);
            if d >= b {
                return Err(Error::InvalidDigit { digit: d, level: i + 1, base: b });
            }
        }
        if let Tail::Periodic(block) = &self.tail {
            let m = self.digits.len();
            for (j, &d) in block.iter().enumerate() {
                let b = self.base_at(m + j + 1);
                if d >= b {
                    return Err(Error::InvalidDigit { digit: d, level: m + j + 1, base: b });
                }
            }
        }
        Ok(())
    }

    /// Exact partial sum of the first `n` terms.
    pub fn partial_value(&self, n: usize) -> Result<Rational> {
        let mut sum = int(0);
        let mut prod = BigInt::one();
        for k in 1..=n {
            let d = self
                .digit_at(k)
                .ok_or_else(|| Error::Domain(format!("digit {k} beyond truncated prefix")))?;
            prod *= BigInt::from(self.base_at(k));
            let mut term = Rational::new(BigInt::from(d), prod.clone());
            if self.signed() && k % 2 == 1 {
                term = -term;
            }
            sum += term;
        }
        Ok(sum)
    }

    fn signed(&self) -> bool {
        !matches!(self.polarity, Polarity::Positive)
    }

    /// Enclosure of the series value: exact (width zero) for `Zeros` and
    /// `Periodic` tails, the cylinder hull for `Truncated`.
    pub fn value(&self) -> Enclosure {
        let m = self.digits.len();
        let partial = self.partial_value(m).expect("explicit digits are present");
        let prod_m = self.spec_product(m);
        let unit = {
            let mut u = Rational::new(BigInt::one(), prod_m);
            if self.signed() && m % 2 == 1 {
                u = -u;
            }
            u
        };
        match &self.tail {
            Tail::Zeros => Enclosure::exact(partial),
            Tail::Periodic(block) => {
                // one tail block relative to level m, then a geometric series
                let mut rel = int(0);
                let mut q = BigInt::one();
                for (j, &d) in block.iter().enumerate() {
                    q *= BigInt::from(self.base_at(m + j + 1));
                    let mut term = Rational::new(BigInt::from(d), q.clone());
                    if self.signed() && (j + 1) % 2 == 1 {
                        term = -term;
                    }
                    rel += term;
                }
                let ratio = Rational::new(BigInt::one(), q);
                let tail_rel = rel / (int(1) - ratio);
                Enclosure::exact(partial + unit * tail_rel)
            }
            Tail::Truncated => {
                let (range_lo, range_hi) = self.remainder_range(m);
                let lo = &partial + &unit * &range_lo;
                let hi = &partial + &unit * &range_hi;
                if lo <= hi {
                    Enclosure::new(lo, hi).unwrap()
                } else {
                    Enclosure::new(hi, lo).unwrap()
                }
            }
        }
    }

    /// Range of the normalized remainder after `m` digits (what the shifted
    /// value `σ^m(x)` may still contribute, before scaling by the unit).
    fn remainder_range(&self, m: usize) -> (Rational, Rational) {
        match self.polarity {
            Polarity::Positive => (int(0), int(1)),
            Polarity::Alternating => {
                let a0 = self.spec.shifted(m).a0_exact();
                (&a0 - int(1), a0)
            }
            Polarity::NegaConstant => {
                let q = self.spec.cap as i64;
                (Rational::new(BigInt::from(-q), BigInt::from(q + 1)), Rational::new(BigInt::one(), BigInt::from(q + 1)))
            }
        }
    }

    fn spec_product(&self, m: usize) -> BigInt {
        match self.polarity {
            Polarity::NegaConstant => num_traits::pow(BigInt::from(self.spec.cap), m),
            _ => self.spec.product(m),
        }
    }

    /// Horizon beyond which two exact-tail streams are determined by their
    /// periodic parts.
    fn comparison_horizon(&self, other: &Representation) -> Option<usize> {
        let ja = self.tail_period()?;
        let jb = other.tail_period()?;
        Some(self.digits.len().max(other.digits.len()).max(self.spec.preperiod.len()) + ja.lcm(&jb))
    }
}

impl PartialEq for Representation {
    /// Digit-stream equality (same system, same digit at every level).
    fn eq(&self, other: &Self) -> bool {
        if self.polarity != other.polarity || self.spec != other.spec {
            return false;
        }
        match (&self.tail, &other.tail) {
            (Tail::Truncated, Tail::Truncated) => self.digits == other.digits,
            (Tail::Truncated, _) | (_, Tail::Truncated) => false,
            _ => {
                let h = self.comparison_horizon(other).expect("exact tails");
                (1..=h).all(|k| self.digit_at(k) == other.digit_at(k))
            }
        }
    }
}

impl Eq for Representation {}

/// Outcome of the duality test: either the point has a unique representation
/// or the second member of its dual pair is returned.
#[derive(Debug, Clone, PartialEq)]
pub enum DualStatus {
    NotDual,
    Dual(Representation),
}

/// Builds a representation from an explicit prefix plus a level-indexed tail
/// pattern, materializing enough digits that the stored block is periodic.
fn pattern_rep(
    spec: &BaseSpec,
    polarity: Polarity,
    mut prefix: Vec<u32>,
    pattern: impl Fn(usize) -> u32,
) -> Result<Representation> {
    let pre = match polarity {
        Polarity::NegaConstant => 0,
        _ => spec.preperiod.len(),
    };
    let start = prefix.len();
    let m = start.max(pre);
    for level in start + 1..=m {
        prefix.push(pattern(level));
    }
    let block_len = match polarity {
        Polarity::NegaConstant => 2,
        _ => spec.alignment(),
    };
    let block: Vec<u32> = (1..=block_len).map(|j| pattern(m + j)).collect();
    Representation::new(spec.clone(), polarity, prefix, Tail::Periodic(block))
}

/// The canonical representation of `a0` (domain right endpoint): digits
/// `0, q_2 - 1, 0, q_4 - 1, ...`.
pub fn a0_representation(spec: &BaseSpec) -> Result<Representation> {
    let s = spec.clone();
    pattern_rep(spec, Polarity::Alternating, Vec::new(), move |lvl| {
        if lvl % 2 == 0 {
            s.base_at(lvl) - 1
        } else {
            0
        }
    })
}

/// The representation of `a0 - 1` (domain left endpoint): digits
/// `q_1 - 1, 0, q_3 - 1, 0, ...`.
pub fn left_end_representation(spec: &BaseSpec) -> Result<Representation> {
    let s = spec.clone();
    pattern_rep(spec, Polarity::Alternating, Vec::new(), move |lvl| {
        if lvl % 2 == 1 {
            s.base_at(lvl) - 1
        } else {
            0
        }
    })
}

/// Keep-form dual tail after a prefix of length `n`:
/// `ε_1 ... ε_n [q_{n+1}-1] 0 [q_{n+3}-1] 0 ...`. This is the canonical
/// member of each dual pair.
pub fn keep_form(
    spec: &BaseSpec,
    polarity: Polarity,
    prefix: &[u32],
) -> Result<Representation> {
    let n = prefix.len();
    let cap = spec.cap;
    let s = spec.clone();
    let eff = move |lvl: usize| match polarity {
        Polarity::NegaConstant => cap,
        _ => s.base_at(lvl),
    };
    pattern_rep(spec, polarity, prefix.to_vec(), move |lvl| {
        if (lvl - n) % 2 == 1 {
            eff(lvl) - 1
        } else {
            0
        }
    })
}

/// Decremented dual form of the same point:
/// `ε_1 ... [ε_n - 1] 0 [q_{n+2}-1] 0 ...`. Rejected by `normalize`.
pub fn decrement_form(
    spec: &BaseSpec,
    polarity: Polarity,
    prefix: &[u32],
) -> Result<Representation> {
    let n = prefix.len();
    if n == 0 {
        return Err(Error::Domain("decrement form needs a nonempty prefix".into()));
    }
    if prefix[n - 1] == 0 {
        return Err(Error::Domain("cannot decrement a zero digit".into()));
    }
    let mut p = prefix.to_vec();
    p[n - 1] -= 1;
    let cap = spec.cap;
    let s = spec.clone();
    let eff = move |lvl: usize| match polarity {
        Polarity::NegaConstant => cap,
        _ => s.base_at(lvl),
    };
    pattern_rep(spec, polarity, p, move |lvl| {
        if (lvl - n) % 2 == 1 {
            0
        } else {
            eff(lvl) - 1
        }
    })
}

/// Series value of a representation (exact for `Zeros`/`Periodic` tails,
/// cylinder hull for `Truncated`).
pub fn decode(rep: &Representation) -> Enclosure {
    rep.value()
}

/// Checks `digit_at(k) == pattern(k)` for all `k > m`, deciding equality of
/// the two eventually periodic streams on a sufficient horizon.
fn matches_pattern(
    rep: &Representation,
    m: usize,
    pattern: impl Fn(usize) -> u32,
    pattern_period: usize,
) -> bool {
    let Some(j) = rep.tail_period() else {
        return false;
    };
    let settle = rep.digits.len().max(rep.spec.preperiod.len()).max(m);
    let horizon = settle + j.lcm(&pattern_period);
    (m + 1..=horizon).all(|k| rep.digit_at(k) == Some(pattern(k)))
}

fn scan_limit(rep: &Representation) -> usize {
    rep.digits.len() + rep.tail_period().unwrap_or(0)
}

/// Detects whether the represented value admits the second representation of
/// the dual pair and returns it when it exists.
pub fn is_rational_point(rep: &Representation) -> DualStatus {
    if matches!(rep.tail, Tail::Truncated) {
        return DualStatus::NotDual;
    }
    match rep.polarity {
        Polarity::Positive => {
            // trailing zeros <-> trailing all-(q_k - 1)
            for m in 0..=scan_limit(rep) {
                if matches_pattern(rep, m, |_| 0, 1) {
                    if m == 0 {
                        return DualStatus::NotDual; // x = 0
                    }
                    let d = rep.digit_at(m).unwrap();
                    if d == 0 {
                        continue; // not the minimal switch position
                    }
                    let mut prefix: Vec<u32> = (1..=m).map(|k| rep.digit_at(k).unwrap()).collect();
                    prefix[m - 1] -= 1;
                    let spec = rep.spec.clone();
                    let dual = pattern_rep(&rep.spec, Polarity::Positive, prefix, move |lvl| {
                        spec.base_at(lvl) - 1
                    })
                    .expect("dual construction");
                    return DualStatus::Dual(dual);
                }
                let spec = rep.spec.clone();
                let all_max = move |lvl: usize| spec.base_at(lvl) - 1;
                if matches_pattern(rep, m, all_max, rep.spec.period.len()) {
                    if m == 0 {
                        return DualStatus::NotDual; // x = 1
                    }
                    let d = rep.digit_at(m).unwrap();
                    if d == rep.base_at(m) - 1 {
                        continue;
                    }
                    let mut prefix: Vec<u32> = (1..=m).map(|k| rep.digit_at(k).unwrap()).collect();
                    prefix[m - 1] += 1;
                    let dual =
                        Representation::new(rep.spec.clone(), Polarity::Positive, prefix, Tail::Zeros)
                            .expect("dual construction");
                    return DualStatus::Dual(dual);
                }
            }
            DualStatus::NotDual
        }
        Polarity::Alternating | Polarity::NegaConstant => {
            let pattern_period = match rep.polarity {
                Polarity::NegaConstant => 2,
                _ => rep.spec.alignment(),
            };
            for m in 0..=scan_limit(rep) {
                // keep-form: max at odd offsets -> dual is the decremented form
                let keep = |lvl: usize| {
                    if (lvl - m) % 2 == 1 {
                        rep.base_at(lvl) - 1
                    } else {
                        0
                    }
                };
                if matches_pattern(rep, m, keep, pattern_period) {
                    if m == 0 || rep.digit_at(m).unwrap() == 0 {
                        return DualStatus::NotDual; // endpoint pattern, no second form
                    }
                    let prefix: Vec<u32> = (1..=m).map(|k| rep.digit_at(k).unwrap()).collect();
                    let dual = decrement_form(&rep.spec, rep.polarity, &prefix)
                        .expect("dual construction");
                    return DualStatus::Dual(dual);
                }
                // decremented form: zeros at odd offsets -> dual is the keep form
                let dec = |lvl: usize| {
                    if (lvl - m) % 2 == 1 {
                        0
                    } else {
                        rep.base_at(lvl) - 1
                    }
                };
                if matches_pattern(rep, m, dec, pattern_period) {
                    if m == 0 || rep.digit_at(m).unwrap() + 1 > rep.base_at(m) - 1 {
                        return DualStatus::NotDual;
                    }
                    let mut prefix: Vec<u32> = (1..=m).map(|k| rep.digit_at(k).unwrap()).collect();
                    prefix[m - 1] += 1;
                    let dual =
                        keep_form(&rep.spec, rep.polarity, &prefix).expect("dual construction");
                    return DualStatus::Dual(dual);
                }
            }
            DualStatus::NotDual
        }
    }
}

/// True iff the representation is the canonical member of its dual pair
/// (trailing zeros for the positive system; the keep form for the signed
/// systems). Unique representations are canonical by definition.
pub fn is_canonical(rep: &Representation) -> bool {
    match is_rational_point(rep) {
        DualStatus::NotDual => true,
        DualStatus::Dual(_) => match rep.polarity {
            // non-canonical: eventually all-max
            Polarity::Positive => {
                let spec = rep.spec.clone();
                let all_max = move |lvl: usize| spec.base_at(lvl) - 1;
                !(0..=scan_limit(rep))
                    .any(|m| matches_pattern(rep, m, all_max.clone(), rep.spec.period.len()))
            }
            // non-canonical: the decremented form (zeros at odd offsets)
            Polarity::Alternating | Polarity::NegaConstant => {
                let pattern_period = match rep.polarity {
                    Polarity::NegaConstant => 2,
                    _ => rep.spec.alignment(),
                };
                !(0..=scan_limit(rep)).any(|m| {
                    let dec = |lvl: usize| {
                        if (lvl - m) % 2 == 1 {
                            0
                        } else {
                            rep.base_at(lvl) - 1
                        }
                    };
                    matches_pattern(rep, m, dec, pattern_period)
                        && m >= 1
                        && rep.digit_at(m).unwrap() + 1 <= rep.base_at(m) - 1
                })
            }
        },
    }
}

/// Returns the canonical member of the dual pair; idempotent.
pub fn normalize(rep: &Representation) -> Representation {
    if is_canonical(rep) {
        rep.clone()
    } else {
        match is_rational_point(rep) {
            DualStatus::Dual(d) => d,
            DualStatus::NotDual => rep.clone(),
        }
    }
}

/// Greedy positive-Cantor encoding of `x in [0,1]` with remainder-cycle
/// detection, so that every rational terminates in an exact tail within the
/// digit budget or is returned truncated.
pub fn encode_positive(x: &Rational, spec: &BaseSpec, max_digits: usize) -> Result<Representation> {
    spec.validate()?;
    if x.is_negative() || x > &int(1) {
        return Err(Error::Domain(format!("{x} outside [0, 1]")));
    }
    if x == &int(1) {
        let s = spec.clone();
        return pattern_rep(spec, Polarity::Positive, Vec::new(), move |lvl| s.base_at(lvl) - 1);
    }
    let pre = spec.preperiod.len();
    let lp = spec.period.len();
    let mut digits: Vec<u32> = Vec::new();
    let mut r = x.clone();
    let mut seen: HashMap<(usize, Rational), usize> = HashMap::new();
    for k in 1..=max_digits {
        if r.is_zero() {
            return Representation::new(spec.clone(), Polarity::Positive, digits, Tail::Zeros);
        }
        if k > pre {
            let phase = (k - pre - 1) % lp;
            if let Some(&i) = seen.get(&(phase, r.clone())) {
                let block = digits[i..].to_vec();
                digits.truncate(i);
                return Representation::new(
                    spec.clone(),
                    Polarity::Positive,
                    digits,
                    Tail::Periodic(block),
                );
            }
            seen.insert((phase, r.clone()), digits.len());
        }
        let b = spec.base_at(k);
        let scaled = &r * int(b as i64);
        let d = scaled.floor().to_integer();
        let d_u32 = u32::try_from(&d).map_err(|_| Error::Internal("digit overflow".into()))?;
        digits.push(d_u32);
        r = scaled - Rational::from_integer(d);
    }
    Representation::new(spec.clone(), Polarity::Positive, digits, Tail::Truncated)
}

/// Alternating-Cantor encoding of `x in [a0 - 1, a0]`.
///
/// Maintains the exact remainder `r_k = σ^k(x)`; the digit at each level is
/// the unique (at boundaries: the larger, canonical-tail-producing) digit
/// that keeps the next remainder inside the shifted domain. Endpoint
/// remainders and remainder cycles terminate in exact periodic tails.
pub fn encode_alternating(
    x: &Rational,
    spec: &BaseSpec,
    max_digits: usize,
) -> Result<Representation> {
    spec.validate()?;
    let a0 = spec.a0_exact();
    let lo = &a0 - int(1);
    if x < &lo || x > &a0 {
        return Err(Error::Domain(format!("{x} outside [{lo}, {a0}]")));
    }
    let pre = spec.preperiod.len();
    let lp = spec.period.len();
    // a0 of the system shifted by k, cached by phase for k >= pre
    let mut phase_a0: Vec<Option<Rational>> = vec![None; lp];
    let mut a0_shift = |k: usize| -> Rational {
        if k >= pre {
            let phase = (k - pre) % lp;
            if phase_a0[phase].is_none() {
                phase_a0[phase] = Some(spec.shifted(k).a0_exact());
            }
            phase_a0[phase].clone().unwrap()
        } else {
            spec.shifted(k).a0_exact()
        }
    };
    let mut digits: Vec<u32> = Vec::new();
    let mut r = x.clone();
    let mut seen: HashMap<(usize, Rational), usize> = HashMap::new();
    for k in 1..=max_digits {
        if k > pre {
            let phase = (k - pre - 1) % lp;
            if let Some(&i) = seen.get(&(phase, r.clone())) {
                let block = digits[i..].to_vec();
                digits.truncate(i);
                return Representation::new(
                    spec.clone(),
                    Polarity::Alternating,
                    digits,
                    Tail::Periodic(block),
                );
            }
            seen.insert((phase, r.clone()), digits.len());
        }
        let b = int(spec.base_at(k) as i64);
        let a0n = a0_shift(k);
        // digit candidates are the integers in [c, c+1], c = -q_k r - a0(k);
        // at a boundary tie the larger digit continues the canonical tail
        let c = -(&b * &r) - &a0n;
        let eps = if c.is_integer() {
            let lo_c = c.to_integer();
            let hi_c = &lo_c + BigInt::one();
            let max_digit = BigInt::from(spec.base_at(k) - 1);
            if hi_c <= max_digit {
                hi_c
            } else {
                lo_c
            }
        } else {
            c.ceil().to_integer()
        };
        if eps.is_negative() || eps > BigInt::from(spec.base_at(k) - 1) {
            return Err(Error::Domain(format!(
                "remainder escaped the shifted domain at level {k}"
            )));
        }
        let eps_u32 = u32::try_from(&eps).unwrap();
        digits.push(eps_u32);
        r = -(&b * &r) - Rational::from_integer(eps);
        // exact endpoint tails
        if r.is_zero() {
            return Representation::new(spec.clone(), Polarity::Alternating, digits, Tail::Zeros);
        }
        let a0k = a0_shift(k);
        if r == &a0k - int(1) {
            return keep_form(spec, Polarity::Alternating, &digits);
        }
        if r == a0k {
            // right endpoint: digits continue 0, q-1, 0, ...
            let n = digits.len();
            let s = spec.clone();
            return pattern_rep(spec, Polarity::Alternating, digits, move |lvl| {
                if (lvl - n) % 2 == 0 {
                    s.base_at(lvl) - 1
                } else {
                    0
                }
            });
        }
    }
    Representation::new(spec.clone(), Polarity::Alternating, digits, Tail::Truncated)
}

/// Drops the first `n` digits (the shift operator `σ^n` on representations).
/// The result lives over the shifted base sequence.
pub fn shift(rep: &Representation, n: usize) -> Result<Representation> {
    if matches!(rep.polarity, Polarity::Positive) {
        return Err(Error::Domain("shift is defined for the signed systems".into()));
    }
    if n == 0 {
        return Ok(rep.clone());
    }
    let spec = rep.spec.shifted(n);
    let m = rep.digits.len();
    if n <= m {
        return Representation::new(spec, rep.polarity, rep.digits[n..].to_vec(), rep.tail.clone());
    }
    match &rep.tail {
        Tail::Zeros => Representation::new(spec, rep.polarity, Vec::new(), Tail::Zeros),
        Tail::Periodic(block) => {
            let r = (n - m) % block.len();
            let mut b = block.clone();
            b.rotate_left(r);
            Representation::new(spec, rep.polarity, Vec::new(), Tail::Periodic(b))
        }
        Tail::Truncated => Err(Error::Domain(format!(
            "cannot shift a truncated representation by {n} > {m} digits"
        ))),
    }
}

/// A rank-`m` cylinder: all points whose first `m` digits equal `base`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cylinder {
    spec: BaseSpec,
    polarity: Polarity,
    base: Vec<u32>,
}

impl Cylinder {
    pub fn new(spec: BaseSpec, polarity: Polarity, base: Vec<u32>) -> Result<Self> {
        if matches!(polarity, Polarity::Positive) {
            return Err(Error::Domain(
                "cylinders are used for the signed systems here".into(),
            ));
        }
        if base.is_empty() {
            return Err(Error::Domain("cylinder rank must be at least 1".into()));
        }
        spec.validate()?;
        let cyl = Self { spec, polarity, base };
        for (i, &d) in cyl.base.iter().enumerate() {
            let b = cyl.base_at(i + 1);
            if d >= b {
                return Err(Error::InvalidDigit { digit: d, level: i + 1, base: b });
            }
        }
        Ok(cyl)
    }

    pub fn rank(&self) -> usize {
        self.base.len()
    }

    pub fn base(&self) -> &[u32] {
        &self.base
    }

    pub fn spec(&self) -> &BaseSpec {
        &self.spec
    }

    pub fn polarity(&self) -> Polarity {
        self.polarity
    }

    fn base_at(&self, level: usize) -> u32 {
        match self.polarity {
            Polarity::NegaConstant => self.spec.cap,
            _ => self.spec.base_at(level),
        }
    }

    fn as_truncated(&self) -> Representation {
        Representation::new(
            self.spec.clone(),
            self.polarity,
            self.base.clone(),
            Tail::Truncated,
        )
        .expect("validated base digits")
    }

    /// Exact `(inf, sup)` endpoints. The interval length is
    /// `1 / (q_1 ... q_m)` (alternating) or `cap^-m` (nega-constant).
    pub fn interval(&self) -> (Enclosure, Enclosure) {
        let hull = self.as_truncated().value();
        (Enclosure::exact(hull.lo().clone()), Enclosure::exact(hull.hi().clone()))
    }

    /// Exact interval length.
    pub fn length(&self) -> Rational {
        self.as_truncated().value().width()
    }

    /// Representation of the left endpoint (infimum).
    pub fn inf_representation(&self) -> Representation {
        let m = self.rank();
        if m % 2 == 0 {
            keep_form(&self.spec, self.polarity, &self.base).expect("valid base")
        } else {
            self.sup_or_inf_right_pattern()
        }
    }

    /// Representation of the right endpoint (supremum).
    pub fn sup_representation(&self) -> Representation {
        let m = self.rank();
        if m % 2 == 1 {
            keep_form(&self.spec, self.polarity, &self.base).expect("valid base")
        } else {
            self.sup_or_inf_right_pattern()
        }
    }

    fn sup_or_inf_right_pattern(&self) -> Representation {
        // tail 0 [q_{m+2}-1] 0 [q_{m+4}-1] ... after the base digits
        let n = self.rank();
        let cap = self.spec.cap;
        let s = self.spec.clone();
        let polarity = self.polarity;
        let eff = move |lvl: usize| match polarity {
            Polarity::NegaConstant => cap,
            _ => s.base_at(lvl),
        };
        pattern_rep(&self.spec, self.polarity, self.base.to_vec(), move |lvl| {
            if (lvl - n) % 2 == 0 {
                eff(lvl) - 1
            } else {
                0
            }
        })
        .expect("valid base")
    }
}

/// Parses the CLI digit-string format: `"0,2,0,2"` (finite, zero tail),
/// `"1,2|1,2"` (periodic tail after the bar), `"1,2,.."` (truncated).
pub fn parse_digit_string(s: &str) -> Result<(Vec<u32>, Tail)> {
    let s = s.trim();
    let parse_list = |part: &str| -> Result<Vec<u32>> {
        if part.trim().is_empty() {
            return Ok(Vec::new());
        }
        part.split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Domain(format!("bad digit token {tok:?}")))
            })
            .collect()
    };
    if let Some((head, tail)) = s.split_once('|') {
        let block = parse_list(tail)?;
        if block.is_empty() {
            return Err(Error::Domain("empty periodic block after '|'".into()));
        }
        return Ok((parse_list(head)?, Tail::Periodic(block)));
    }
    if let Some(head) = s.strip_suffix(",..").or_else(|| s.strip_suffix("..")) {
        return Ok((parse_list(head.trim_end_matches(','))?, Tail::Truncated));
    }
    Ok((parse_list(s)?, Tail::Zeros))
}

/// Inverse of [`parse_digit_string`].
pub fn format_digit_string(digits: &[u32], tail: &Tail) -> String {
    let list = |d: &[u32]| d.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
    match tail {
        Tail::Zeros => list(digits),
        Tail::Periodic(b) => format!("{}|{}", list(digits), list(b)),
        Tail::Truncated => format!("{},..", list(digits)),
    }
}
