//! Exact rational arithmetic, certified enclosures, geometric tail bounds,
//! a guarded bisection root-finder, and certified enclosures for ln/exp/pow
//! of rationals. Everything here is exact: an [`Enclosure`] returned by any
//! function contains the mathematical value it certifies.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational in canonical reduced form
/// (positive denominator, gcd(|numerator|, denominator) = 1).
pub type Rational = num_rational::BigRational;

/// Shorthand for a small rational.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Shorthand for an integer rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `base^exp` for a nonnegative integer exponent.
pub fn bigint_pow(base: u64, exp: usize) -> BigInt {
    num_traits::pow(BigInt::from(base), exp)
}

/// `r^exp` for a (possibly negative) integer exponent.
pub fn rational_pow(r: &Rational, exp: i64) -> Rational {
    if exp >= 0 {
        num_traits::pow(r.clone(), exp as usize)
    } else {
        num_traits::pow(r.recip(), (-exp) as usize)
    }
}

/// Parses `"p/q"`, integer, plain decimal (`"0.25"`, `"-3.5"`) and scientific
/// (`"1e-9"`, `"2.5e3"`) forms into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Domain("empty rational literal".into()));
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num
            .trim()
            .parse()
            .map_err(|_| Error::Domain(format!("bad numerator in {s:?}")))?;
        let d: BigInt = den
            .trim()
            .parse()
            .map_err(|_| Error::Domain(format!("bad denominator in {s:?}")))?;
        if d.is_zero() {
            return Err(Error::Domain(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(n, d));
    }
    let (mantissa, exp10) = match s.split_once(['e', 'E']) {
        Some((m, e)) => {
            let e: i64 = e
                .parse()
                .map_err(|_| Error::Domain(format!("bad exponent in {s:?}")))?;
            (m, e)
        }
        None => (s, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    let digits = format!("{int_part}{frac_part}");
    let n: BigInt = digits
        .parse()
        .map_err(|_| Error::Domain(format!("bad rational literal {s:?}")))?;
    let shift = exp10 - frac_part.len() as i64;
    let ten = int(10);
    Ok(Rational::from_integer(n) * rational_pow(&ten, shift))
}

/// Renders `r` as a decimal string with `sig` significant digits
/// (round half up, trailing zeros stripped). Used for display only;
/// exact values always travel as `"p/q"` strings.
pub fn decimal_string(r: &Rational, sig: usize) -> String {
    assert!(sig > 0);
    if r.is_zero() {
        return "0".into();
    }
    let neg = r.is_negative();
    let a = r.abs();
    // decimal exponent d with 10^d <= a < 10^(d+1)
    let ten = int(10);
    let mut d: i64 = (a.numer().to_string().len() as i64) - (a.denom().to_string().len() as i64);
    while a < rational_pow(&ten, d) {
        d -= 1;
    }
    while a >= rational_pow(&ten, d + 1) {
        d += 1;
    }
    let scaled = &a * rational_pow(&ten, sig as i64 - 1 - d) + rat(1, 2);
    let mut k = scaled.floor().to_integer();
    if k == bigint_pow(10, sig) {
        k /= BigInt::from(10);
        d += 1;
    }
    let digits = k.to_string();
    debug_assert_eq!(digits.len(), sig);
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    if d >= 0 && (d as usize) < sig + 3 && d < 15 {
        let ip = d as usize + 1;
        if ip >= sig {
            out.push_str(&digits);
            out.push_str(&"0".repeat(ip - sig));
        } else {
            out.push_str(&digits[..ip]);
            let frac = digits[ip..].trim_end_matches('0');
            if !frac.is_empty() {
                out.push('.');
                out.push_str(frac);
            }
        }
    } else if d < 0 && d >= -4 {
        out.push_str("0.");
        out.push_str(&"0".repeat((-d - 1) as usize));
        out.push_str(digits.trim_end_matches('0'));
    } else {
        out.push_str(&digits[..1]);
        let frac = digits[1..].trim_end_matches('0');
        if !frac.is_empty() {
            out.push('.');
            out.push_str(frac);
        }
        out.push('e');
        out.push_str(&d.to_string());
    }
    out
}

/// A pair of exact rationals certifying `lo <= value <= hi`.
///
/// The universal return type for real values: every evaluation routine in
/// this crate returns an `Enclosure` that provably contains the exact real
/// number in question, with width zero whenever the value is itself rational
/// and computed in closed form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enclosure {
    lo: Rational,
    hi: Rational,
}

impl Enclosure {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo > hi {
            return Err(Error::Domain(format!(
                "enclosure endpoints out of order: {lo} > {hi}"
            )));
        }
        Ok(Self { lo, hi })
    }

    /// Width-zero enclosure of an exactly known value.
    pub fn exact(v: Rational) -> Self {
        Self { lo: v.clone(), hi: v }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / int(2)
    }

    pub fn contains(&self, v: &Rational) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn contains_enclosure(&self, other: &Enclosure) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn overlaps(&self, other: &Enclosure) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn add(&self, other: &Enclosure) -> Enclosure {
        Enclosure {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    pub fn sub(&self, other: &Enclosure) -> Enclosure {
        Enclosure {
            lo: &self.lo - &other.hi,
            hi: &self.hi - &other.lo,
        }
    }

    pub fn neg(&self) -> Enclosure {
        Enclosure {
            lo: -self.hi.clone(),
            hi: -self.lo.clone(),
        }
    }

    pub fn mul(&self, other: &Enclosure) -> Enclosure {
        let cands = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = cands.iter().min().unwrap().clone();
        let hi = cands.iter().max().unwrap().clone();
        Enclosure { lo, hi }
    }

    /// Multiplies by an exact rational.
    pub fn scale(&self, k: &Rational) -> Enclosure {
        if k.is_negative() {
            Enclosure {
                lo: &self.hi * k,
                hi: &self.lo * k,
            }
        } else {
            Enclosure {
                lo: &self.lo * k,
                hi: &self.hi * k,
            }
        }
    }

    pub fn shift(&self, k: &Rational) -> Enclosure {
        Enclosure {
            lo: &self.lo + k,
            hi: &self.hi + k,
        }
    }

    /// Division by an enclosure that excludes zero.
    pub fn div(&self, other: &Enclosure) -> Result<Enclosure> {
        if other.contains_zero() {
            return Err(Error::Domain("division by enclosure containing zero".into()));
        }
        let cands = [
            &self.lo / &other.lo,
            &self.lo / &other.hi,
            &self.hi / &other.lo,
            &self.hi / &other.hi,
        ];
        let lo = cands.iter().min().unwrap().clone();
        let hi = cands.iter().max().unwrap().clone();
        Ok(Enclosure { lo, hi })
    }

    pub fn abs(&self) -> Enclosure {
        if self.contains_zero() {
            Enclosure {
                lo: int(0),
                hi: self.lo.abs().max(self.hi.abs()),
            }
        } else {
            let a = self.lo.abs();
            let b = self.hi.abs();
            Enclosure {
                lo: a.clone().min(b.clone()),
                hi: a.max(b),
            }
        }
    }

    pub fn intersect(&self, other: &Enclosure) -> Option<Enclosure> {
        let lo = self.lo.clone().max(other.lo.clone());
        let hi = self.hi.clone().min(other.hi.clone());
        (lo <= hi).then_some(Enclosure { lo, hi })
    }

    /// Largest absolute value attained over the enclosure.
    pub fn max_abs(&self) -> Rational {
        self.lo.abs().max(self.hi.abs())
    }

    /// Rounds outward to dyadic endpoints with denominator `2^bits`,
    /// keeping numbers small between certified steps. Widens by at most
    /// `2^(1-bits)`.
    pub fn round_out(&self, bits: u32) -> Enclosure {
        Enclosure {
            lo: dyadic_floor(&self.lo, bits),
            hi: dyadic_ceil(&self.hi, bits),
        }
    }
}

/// Largest dyadic `k/2^bits` not exceeding `r`.
pub fn dyadic_floor(r: &Rational, bits: u32) -> Rational {
    let scale = bigint_pow(2, bits as usize);
    let k = (r * Rational::from_integer(scale.clone())).floor().to_integer();
    Rational::new(k, scale)
}

/// Smallest dyadic `k/2^bits` at least `r`.
pub fn dyadic_ceil(r: &Rational, bits: u32) -> Rational {
    let scale = bigint_pow(2, bits as usize);
    let k = (r * Rational::from_integer(scale.clone())).ceil().to_integer();
    Rational::new(k, scale)
}

/// Dyadic precision sufficient for rounding slack well below `tol`.
fn tol_bits(tol: &Rational) -> u32 {
    let mut bits = 8u32;
    let mut step = rat(1, 256);
    let target = tol / int(16);
    while step > target && bits < 8192 {
        bits += 8;
        step /= int(256);
    }
    bits
}

impl std::fmt::Display for Enclosure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Upper bound on `|sum of t_k|` for any series with `|t_0| <= first_term_abs`
/// and `|t_{k+1}| <= ratio_abs * |t_k|`, namely `first_term_abs / (1 - ratio_abs)`.
pub fn geometric_tail_bound(first_term_abs: &Rational, ratio_abs: &Rational) -> Result<Rational> {
    if first_term_abs.is_negative() {
        return Err(Error::Domain("negative first term magnitude".into()));
    }
    if ratio_abs.is_negative() || ratio_abs >= &int(1) {
        return Err(Error::Domain("non-contracting tail".into()));
    }
    Ok(first_term_abs / (int(1) - ratio_abs))
}

/// Number of bisection steps needed to shrink `width` below `tol`, plus slack.
fn bisection_cap(width: &Rational, tol: &Rational) -> usize {
    let mut t = tol.clone();
    let mut k = 0usize;
    while &t < width {
        t *= int(2);
        k += 1;
    }
    k + 8
}

/// Guarded bisection on a strictly monotone rational-valued map.
///
/// Requires a sign change between `lo` and `hi`; returns an enclosure of
/// width at most `tol` containing the unique root, with the sign change
/// preserved at the output endpoints.
pub fn bisect_root<F>(f: F, lo: &Rational, hi: &Rational, tol: &Rational) -> Result<Enclosure>
where
    F: Fn(&Rational) -> Rational,
{
    if !tol.is_positive() {
        return Err(Error::Domain("tolerance must be positive".into()));
    }
    if lo >= hi {
        return Err(Error::Bracket("empty bracket".into()));
    }
    let mut a = lo.clone();
    let mut b = hi.clone();
    let mut fa = f(&a);
    let fb = f(&b);
    if fa.is_zero() {
        return Ok(Enclosure::exact(a));
    }
    if fb.is_zero() {
        return Ok(Enclosure::exact(b));
    }
    if fa.is_positive() == fb.is_positive() {
        return Err(Error::Bracket(
            "same-sign endpoints: no certified root in bracket".into(),
        ));
    }
    let cap = bisection_cap(&(&b - &a), tol);
    for _ in 0..cap {
        if &b - &a <= *tol {
            return Enclosure::new(a, b);
        }
        let mid = (&a + &b) / int(2);
        let fm = f(&mid);
        if fm.is_zero() {
            return Ok(Enclosure::exact(mid));
        }
        if fm.is_positive() == fa.is_positive() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    if &b - &a <= *tol {
        return Enclosure::new(a, b);
    }
    Err(Error::IterationLimit(format!(
        "bisection did not reach tolerance {tol} within {cap} steps"
    )))
}

/// Certified enclosure of `ln 2`.
fn ln2_enclosure(tol: &Rational) -> Enclosure {
    // atanh series: ln 2 = 2 * atanh(1/3)
    atanh_series(&rat(1, 3), tol)
}

/// Enclosure of `2*atanh(z) = ln((1+z)/(1-z))` for `0 <= z < 1` via the
/// odd power series with a geometric tail bound.
fn atanh_series(z: &Rational, tol: &Rational) -> Enclosure {
    let z2 = z * z;
    let one_minus = int(1) - &z2;
    let mut sum = int(0);
    let mut zpow = z.clone(); // z^(2j+1)
    let mut j = 0i64;
    loop {
        sum += int(2) * &zpow / int(2 * j + 1);
        let next = &zpow * &z2;
        // all remaining terms are bounded by 2*z^(2j+3)/((2j+3)(1-z^2)) * geometric
        let bound = int(2) * &next / (int(2 * j + 3) * &one_minus);
        if &bound <= tol {
            return Enclosure::new(sum.clone(), sum + bound).unwrap();
        }
        zpow = next;
        j += 1;
    }
}

/// `ln y` for `y >= 1` with small (dyadic) endpoints.
fn ln_core(y: &Rational, tol: &Rational) -> Enclosure {
    debug_assert!(y >= &int(1));
    // reduce to [1,2): y = z * 2^k
    let mut z = y.clone();
    let mut k = 0u32;
    let two = int(2);
    while z >= two {
        z /= &two;
        k += 1;
    }
    let inner_tol = tol / int(2 * (k as i64 + 1));
    let arg = (&z - int(1)) / (&z + int(1));
    let series = atanh_series(&arg, &inner_tol);
    if k == 0 {
        return series;
    }
    let ln2 = ln2_enclosure(&inner_tol);
    series.add(&ln2.scale(&int(k as i64)))
}

/// Certified enclosure of `ln x` for a positive rational `x`.
///
/// The input is rounded outward to dyadic precision derived from `tol`
/// before the series evaluation, so arbitrarily hairy rationals stay cheap.
pub fn ln_enclosure(x: &Rational, tol: &Rational) -> Result<Enclosure> {
    if !x.is_positive() {
        return Err(Error::Domain("ln of non-positive rational".into()));
    }
    if !tol.is_positive() {
        return Err(Error::Domain("tolerance must be positive".into()));
    }
    if x < &int(1) {
        return Ok(ln_enclosure(&x.recip(), tol)?.neg());
    }
    let bits = tol_bits(tol);
    let xl = dyadic_floor(x, bits);
    let xh = dyadic_ceil(x, bits);
    let inner = tol / int(4);
    let lo = ln_core(&xl, &inner);
    let hi = ln_core(&xh, &inner);
    Ok(Enclosure::new(lo.lo().clone(), hi.hi().clone())?.round_out(bits))
}

/// `exp y` at one (dyadic) point.
fn exp_core(y: &Rational, tol: &Rational, bits: u32) -> Enclosure {
    // reduce |y| <= 1, then square k times
    let mut k = 0u32;
    let mut v = y.clone();
    while v.abs() > int(1) {
        v /= int(2);
        k += 1;
    }
    let mut inner_tol = tol.clone();
    for _ in 0..k {
        inner_tol /= int(16);
    }
    inner_tol = inner_tol.min(rat(1, 100));
    let mut sum = int(1);
    let mut term = int(1);
    let mut j: i64 = 1;
    let mut enc = loop {
        term = term * &v / int(j);
        sum += &term;
        let bound = int(2) * term.abs() * v.abs() / int(j + 1);
        if &bound <= &inner_tol {
            break Enclosure::new(&sum - &bound, &sum + &bound).unwrap();
        }
        j += 1;
    };
    debug_assert!(enc.lo().is_positive());
    let extra = bits + 4 * (k + 1);
    for _ in 0..k {
        enc = enc.mul(&enc).round_out(extra);
    }
    enc
}

/// Certified enclosure of `exp x` for rational `x`, with outward dyadic
/// rounding of the argument and the result.
pub fn exp_enclosure(x: &Rational, tol: &Rational) -> Result<Enclosure> {
    if !tol.is_positive() {
        return Err(Error::Domain("tolerance must be positive".into()));
    }
    let bits = tol_bits(tol);
    let xl = dyadic_floor(x, bits);
    let xh = dyadic_ceil(x, bits);
    let inner = tol / int(4);
    let lo = exp_core(&xl, &inner, bits);
    let hi = exp_core(&xh, &inner, bits);
    Ok(Enclosure::new(lo.lo().clone(), hi.hi().clone())?.round_out(bits))
}

/// Certified enclosure of `base^expo` for a positive rational base and
/// rational exponent, of width at most `tol`.
pub fn pow_enclosure(base: &Rational, expo: &Rational, tol: &Rational) -> Result<Enclosure> {
    if !base.is_positive() {
        return Err(Error::Domain("power of non-positive base".into()));
    }
    if expo.is_zero() || base.is_one() {
        return Ok(Enclosure::exact(int(1)));
    }
    if expo.is_integer() {
        if let Some(e) = expo.to_integer().to_i64() {
            return Ok(Enclosure::exact(rational_pow(base, e)));
        }
    }
    let mut inner = tol.clone().min(rat(1, 16));
    loop {
        let ln_b = ln_enclosure(base, &inner)?;
        let arg = ln_b.scale(expo);
        let lo = exp_enclosure(arg.lo(), &inner)?;
        let hi = exp_enclosure(arg.hi(), &inner)?;
        let enc = Enclosure::new(lo.lo().clone(), hi.hi().clone())?;
        if &enc.width() <= tol {
            return Ok(enc);
        }
        inner /= int(16);
    }
}

/// Deterministic splitmix64 generator for reproducible sampling in scans
/// and tests. Not cryptographic.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform value in `0..n` (n > 0).
    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }
}
