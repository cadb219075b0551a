//! The digit map `f` from the alternating Cantor system over `Q = (q_k)`
//! into the nega-q system with the constant base `q = cap`:
//!
//! `f( sum (-1)^k ε_k / (q_1 ... q_k) ) = sum ε_k / (-q)^k`.
//!
//! Structural operations: range membership, one-sided limits and jumps at
//! dual points, discontinuity classification, strict monotonicity witnesses,
//! the infinite functional-equation system, cylinder increment ratios
//! (singularity evidence), and two independent integral routes.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::basis::BaseSpec;
use crate::cells::{sort_cells, GraphCell};
use crate::codec::{
    self, a0_representation, decrement_form, is_canonical, keep_form, normalize, Polarity,
    Representation, Tail,
};
use crate::error::{Error, Result};
use crate::numerics::{int, Enclosure, Rational};

/// Default enumeration budget for cylinder sweeps.
pub const DEFAULT_MAX_CELLS: u64 = 10_000_000;

/// Builds the nega-q image representation of a canonical alternating
/// representation (same digit stream, constant base `cap`).
pub fn f_image(rep: &Representation) -> Result<Representation> {
    if rep.polarity() != Polarity::Alternating {
        return Err(Error::Domain("f expects an alternating representation".into()));
    }
    if !is_canonical(rep) {
        return Err(Error::NonCanonical(
            "the decremented dual form is outside the domain convention of f".into(),
        ));
    }
    image_of_any(rep)
}

/// Digit-map image without the canonicity gate; used internally to evaluate
/// one-sided limits at the rejected dual form.
fn image_of_any(rep: &Representation) -> Result<Representation> {
    Representation::new(
        rep.spec().clone(),
        Polarity::NegaConstant,
        rep.digits().to_vec(),
        rep.tail().clone(),
    )
}

/// Evaluates `f` at a canonical alternating representation. Exact for
/// periodic tails; a certified interval for truncated ones.
pub fn eval_f(rep: &Representation) -> Result<Enclosure> {
    Ok(f_image(rep)?.value())
}

/// `sum_{k>=1} (q_{n+k} - 1) / cap^k`, exactly (eventual periodicity).
pub fn positive_tail_sum(spec: &BaseSpec, n: usize) -> Rational {
    let cap = spec.cap as u64;
    let explicit = spec.preperiod.len().saturating_sub(n);
    let block_len = spec.period.len();
    let mut sum = int(0);
    let mut p = BigInt::one();
    for k in 1..=explicit {
        p *= BigInt::from(cap);
        sum += Rational::new(BigInt::from(spec.base_at(n + k) - 1), p.clone());
    }
    let scale = Rational::new(BigInt::one(), p);
    let mut block = int(0);
    let mut bp = BigInt::one();
    for j in 1..=block_len {
        bp *= BigInt::from(cap);
        block += Rational::new(BigInt::from(spec.base_at(n + explicit + j) - 1), bp.clone());
    }
    let ratio = Rational::new(BigInt::one(), bp);
    sum + scale * (block / (int(1) - ratio))
}

/// Image value of the endpoint tail pattern after level `m`:
/// `sum_{j>=1} (-1)^j d_j / cap^j` with `d_j = q_{m+j} - 1` at odd offsets
/// (`max_at_odd = true`, the infimum-side pattern for even ranks) or at even
/// offsets otherwise. Exact.
fn nega_cap_tail_value(spec: &BaseSpec, m: usize, max_at_odd: bool) -> Rational {
    let cap = spec.cap as u64;
    let explicit = spec.preperiod.len().saturating_sub(m);
    let lam = spec.alignment();
    let digit = |j: usize| -> u32 {
        if (j % 2 == 1) == max_at_odd {
            spec.base_at(m + j) - 1
        } else {
            0
        }
    };
    let mut sum = int(0);
    let mut p = BigInt::one();
    for j in 1..=explicit {
        p *= BigInt::from(cap);
        let mut t = Rational::new(BigInt::from(digit(j)), p.clone());
        if j % 2 == 1 {
            t = -t;
        }
        sum += t;
    }
    let scale = Rational::new(BigInt::one(), p);
    let mut block = int(0);
    let mut q = BigInt::one();
    for j in explicit + 1..=explicit + lam {
        q *= BigInt::from(cap);
        let mut t = Rational::new(BigInt::from(digit(j)), q.clone());
        if j % 2 == 1 {
            t = -t;
        }
        block += t;
    }
    let ratio = Rational::new(BigInt::one(), q);
    sum + scale * (block / (int(1) - ratio))
}

/// Side classification of a nega-q digit string against the level alphabets
/// of `Q` (the image-range analysis of the digit map).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RangeMembership {
    InRange,
    /// Some digit `ε_n ∈ {q_n, ..., q-1}` at a level with `q_n < q`.
    ExcludedC1 { level: usize },
    /// The decremented-tail shape (the rejected dual form over `Q`).
    ExcludedC2,
}

fn stream_matches(
    digit_at: impl Fn(usize) -> Option<u32>,
    pattern: impl Fn(usize) -> u32,
    from_exclusive: usize,
    horizon: usize,
) -> bool {
    (from_exclusive + 1..=horizon).all(|k| digit_at(k) == Some(pattern(k)))
}

/// Digit-bound membership test for an image digit string.
///
/// For a constant sequence (`q_n = q` throughout) every string is in range.
/// Otherwise a digit exceeding its level alphabet is `ExcludedC1`, and the
/// decremented-tail shape (with the `Q`-level maxima) is `ExcludedC2`. The
/// source condition for `C1` is stated ambiguously, so this is a syntactic
/// classification of the given digit string under the digit-bound reading.
pub fn range_membership(y: &Representation, spec: &BaseSpec) -> Result<RangeMembership> {
    if y.polarity() != Polarity::NegaConstant {
        return Err(Error::Domain("range test expects a nega-q representation".into()));
    }
    if y.spec().cap != spec.cap {
        return Err(Error::Domain("cap mismatch between image and base spec".into()));
    }
    if spec.is_constant_cap() {
        return Ok(RangeMembership::InRange);
    }
    let m = y.digits().len();
    let tail_period = match y.tail() {
        Tail::Zeros => 1,
        Tail::Periodic(b) => b.len(),
        Tail::Truncated => 1,
    };
    let lam = spec.alignment();
    let horizon = m.max(spec.preperiod.len()) + num_integer::lcm(tail_period, lam) + lam;
    for k in 1..=horizon {
        match y.digit_at(k) {
            Some(d) if d >= spec.base_at(k) => return Ok(RangeMembership::ExcludedC1 { level: k }),
            Some(_) => {}
            None => break,
        }
    }
    if matches!(y.tail(), Tail::Truncated) {
        return Ok(RangeMembership::InRange);
    }
    // zeros at odd offsets, Q-level maxima at even offsets after some level
    for m0 in 1..=m + tail_period {
        let pat = |k: usize| {
            if (k - m0) % 2 == 1 {
                0
            } else {
                spec.base_at(k) - 1
            }
        };
        let decrementable = y
            .digit_at(m0)
            .map(|d| d + 1 <= spec.base_at(m0) - 1)
            .unwrap_or(false);
        if decrementable && stream_matches(|k| y.digit_at(k), pat, m0, horizon + m0) {
            return Ok(RangeMembership::ExcludedC2);
        }
    }
    Ok(RangeMembership::InRange)
}

/// Residual of the reflection identity `f(x) + f(a0 - x) - f(a0)`.
///
/// `f(a0 - x)` is evaluated through the positive-expansion mirror of the
/// digit stream (`ε_k` at odd levels, `q_k - 1 - ε_k` at even levels, mapped
/// into base `cap`), which is the series the identity equates. Exact zero
/// for periodic tails.
pub fn symmetry_residual(x: &Representation) -> Result<Enclosure> {
    let fx = eval_f(x)?;
    let mirror = mirror_value(x)?;
    let fa0 = eval_f(&a0_representation(x.spec())?)?;
    Ok(fx.add(&mirror).sub(&fa0))
}

/// `sum m_k / cap^k` with `m_k = ε_k` (odd levels), `q_k - 1 - ε_k` (even).
fn mirror_value(x: &Representation) -> Result<Enclosure> {
    if x.polarity() != Polarity::Alternating {
        return Err(Error::Domain("mirror value expects an alternating representation".into()));
    }
    let spec = x.spec().clone();
    let cap_spec = BaseSpec::constant(spec.cap)?;
    let m = x.digits().len();
    let mirror_digit = |k: usize, d: u32| -> u32 {
        if k % 2 == 0 {
            spec.base_at(k) - 1 - d
        } else {
            d
        }
    };
    let digits: Vec<u32> = x
        .digits()
        .iter()
        .enumerate()
        .map(|(i, &d)| mirror_digit(i + 1, d))
        .collect();
    let tail = match x.tail() {
        Tail::Truncated => Tail::Truncated,
        Tail::Zeros => {
            let block_len = num_integer::lcm(spec.alignment(), 2)
                .max(spec.preperiod.len().saturating_sub(m) + spec.alignment());
            let block: Vec<u32> = (1..=block_len).map(|j| mirror_digit(m + j, 0)).collect();
            Tail::Periodic(block)
        }
        Tail::Periodic(b) => Tail::Periodic(
            b.iter()
                .enumerate()
                .map(|(j, &d)| mirror_digit(m + j + 1, d))
                .collect(),
        ),
    };
    Ok(Representation::new(cap_spec, Polarity::Positive, digits, tail)?.value())
}

/// Residual of the shift-commutation identity `f(σ^k(x)) - σ^k(f(x))`;
/// exact zero for periodic tails.
pub fn commute_shift_residual(x: &Representation, k: usize) -> Result<Enclosure> {
    let lhs = eval_f(&codec::shift(x, k)?)?;
    let rhs = codec::shift(&f_image(x)?, k)?.value();
    Ok(lhs.sub(&rhs))
}

/// One jump report at a dual (nega-Q-rational) point.
#[derive(Debug, Clone)]
pub struct JumpReport {
    /// Canonical representation of the point.
    pub position: Representation,
    /// Switch level of the dual pair.
    pub level: usize,
    pub left_limit: Enclosure,
    pub right_limit: Enclosure,
    /// `right_limit - left_limit` (enclosure arithmetic).
    pub jump: Enclosure,
}

/// One-sided limits of `f` at a dual point with switch level `n`, from the
/// digit-map values of the two dual tails. The right limit is the image of
/// the decremented form for odd `n` and of the keep form for even `n`
/// (cylinder orientation alternates with rank parity).
pub fn jump_at(point: &Representation, n: usize) -> Result<JumpReport> {
    if point.polarity() != Polarity::Alternating {
        return Err(Error::Domain("jump analysis expects an alternating representation".into()));
    }
    if n == 0 {
        return Err(Error::Domain("switch level must be at least 1".into()));
    }
    let canon = normalize(point);
    let spec = canon.spec().clone();
    let tail_period = match canon.tail() {
        Tail::Zeros => 1,
        Tail::Periodic(b) => b.len(),
        Tail::Truncated => {
            return Err(Error::Domain("cannot certify a dual point from a truncated tail".into()))
        }
    };
    let horizon = canon.digits().len().max(spec.preperiod.len()).max(n)
        + num_integer::lcm(tail_period, spec.alignment());
    let keep_pat = |k: usize| {
        if (k - n) % 2 == 1 {
            spec.base_at(k) - 1
        } else {
            0
        }
    };
    let matches = stream_matches(|k| canon.digit_at(k), keep_pat, n, horizon);
    if !matches || canon.digit_at(n).unwrap_or(0) == 0 {
        return Err(Error::Domain(format!(
            "point is not nega-Q-rational with dual switch at level {n}"
        )));
    }
    let prefix: Vec<u32> = (1..=n).map(|k| canon.digit_at(k).unwrap()).collect();
    let keep = keep_form(&spec, Polarity::Alternating, &prefix)?;
    let dec = decrement_form(&spec, Polarity::Alternating, &prefix)?;
    debug_assert_eq!(keep.value(), dec.value());
    let keep_img = image_of_any(&keep)?.value();
    let dec_img = image_of_any(&dec)?.value();
    let (right_limit, left_limit) = if n % 2 == 1 {
        (dec_img, keep_img)
    } else {
        (keep_img, dec_img)
    };
    let jump = right_limit.sub(&left_limit);
    Ok(JumpReport { position: keep, level: n, left_limit, right_limit, jump })
}

/// The jump magnitude in closed form:
/// `1/q^n - (1/q^n) * sum_{k>=1} (q_{n+k} - 1)/q^k`; zero iff the tail bases
/// all equal the cap.
pub fn jump_closed_form(spec: &BaseSpec, n: usize) -> Rational {
    let unit = Rational::new(BigInt::one(), num_traits::pow(BigInt::from(spec.cap), n));
    &unit * (int(1) - positive_tail_sum(spec, n))
}

/// How large the set of discontinuities of `f` is; decidable from the
/// preperiod/period structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiscontinuityClass {
    Empty,
    Finite,
    Infinite,
}

pub fn classify_discontinuities(spec: &BaseSpec) -> DiscontinuityClass {
    let period_all_cap = spec.period.iter().all(|&q| q == spec.cap);
    if !period_all_cap {
        return DiscontinuityClass::Infinite;
    }
    if spec.preperiod.iter().all(|&q| q == spec.cap) {
        DiscontinuityClass::Empty
    } else {
        DiscontinuityClass::Finite
    }
}

/// True iff `sign(f(x2) - f(x1)) = sign(x2 - x1)` with exact values.
/// Errors when either value is not exactly known (truncated tails) or when
/// the points coincide.
pub fn monotone_witness(x1: &Representation, x2: &Representation) -> Result<bool> {
    let v1 = x1.value();
    let v2 = x2.value();
    if !v1.is_exact() || !v2.is_exact() {
        return Err(Error::Domain("ambiguous comparison: truncated enclosures".into()));
    }
    if v1 == v2 {
        return Err(Error::Domain("points coincide".into()));
    }
    let f1 = eval_f(x1)?;
    let f2 = eval_f(x2)?;
    let dv = v2.lo() - v1.lo();
    let df = f2.lo() - f1.lo();
    Ok(dv.is_positive() == df.is_positive() && !df.is_zero())
}

/// Max over `k <= kmax` of the residual enclosure of the functional system
/// `f(σ^{k-1} x) = -ε_k/q - (1/q) f(σ^k x)`. Exact `[0,0]` for periodic
/// tails.
pub fn functional_system_residual(x: &Representation, kmax: usize) -> Result<Enclosure> {
    let q = int(x.spec().cap as i64);
    let mut worst = Enclosure::exact(int(0));
    let mut cur = x.clone();
    for k in 1..=kmax {
        let eps = cur
            .digit_at(1)
            .ok_or_else(|| Error::Domain(format!("digit {k} beyond truncated prefix")))?;
        let next = codec::shift(&cur, 1)?;
        let lhs = eval_f(&cur)?;
        let rhs = eval_f(&next)?
            .scale(&(-q.clone().recip()))
            .shift(&(-int(eps as i64) / &q));
        let res = lhs.sub(&rhs);
        if res.max_abs() > worst.max_abs() {
            worst = res;
        }
        cur = next;
    }
    Ok(worst)
}

/// The telescoped reconstruction `sum_{n<=k} ε_n/(-q)^n + (-q)^{-k} f(σ^k x)`.
/// Constant in `k` and equal to `f(x)` (uniqueness of the bounded solution
/// of the functional system).
pub fn functional_reconstruction(x: &Representation, k: usize) -> Result<Enclosure> {
    let image = f_image(x)?;
    let partial = image.partial_value(k)?;
    let shifted = codec::shift(x, k)?;
    let tail_val = eval_f(&shifted)?;
    let mut scale = Rational::new(BigInt::one(), num_traits::pow(BigInt::from(x.spec().cap), k));
    if k % 2 == 1 {
        scale = -scale;
    }
    Ok(tail_val.scale(&scale).shift(&partial))
}

/// Exact cylinder increment ratio `μ_f(Δ)/|Δ| = (q_1...q_m / q^m) *
/// sum_{k>=1} (q_{m+k}-1)/q^k` for a rank-`m` alternating cylinder. Decays
/// geometrically whenever the period contains an entry below the cap.
pub fn derivative_ratio(cyl: &codec::Cylinder) -> Result<Enclosure> {
    if cyl.polarity() != Polarity::Alternating {
        return Err(Error::Domain("increment ratios are defined on alternating cylinders".into()));
    }
    let spec = cyl.spec();
    let m = cyl.rank();
    let scale = Rational::new(spec.product(m), num_traits::pow(BigInt::from(spec.cap), m));
    Ok(Enclosure::exact(scale * positive_tail_sum(spec, m)))
}

/// The series `sum_{k>=1} (q_k - 1) / (2 q^k)` in closed form (the reported
/// integral identity; compare against [`integral_riemann`], which certifies
/// the integral independently).
pub fn integral_closed_form(spec: &BaseSpec) -> Enclosure {
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    Enclosure::exact(half * positive_tail_sum(spec, 0))
}

/// Certified Darboux enclosure of the Lebesgue integral of `f` over
/// `[a0-1, a0]` at cylinder depth `m`: strict monotonicity makes the
/// cylinder endpoint values lower/upper sums, so the output provably
/// brackets the integral and its width shrinks like `1/(q_1...q_m)`.
pub fn integral_riemann(spec: &BaseSpec, depth: usize, max_cells: u64) -> Result<Enclosure> {
    spec.validate()?;
    if depth == 0 {
        return Err(Error::Domain("depth must be at least 1".into()));
    }
    let count = spec.product(depth);
    if count > BigInt::from(max_cells) {
        return Err(Error::ResourceBound(format!(
            "{count} cylinders of rank {depth} exceed the budget of {max_cells}"
        )));
    }
    let cap = BigInt::from(spec.cap);
    let cap_pow_m = num_traits::pow(cap.clone(), depth);
    // enumerate all rank-`depth` bases, accumulating the image partial values
    // as integers scaled by cap^depth
    let mut total = BigInt::from(0);
    let mut leaves: u64 = 0;
    let mut stack: Vec<(usize, BigInt)> = vec![(0, BigInt::from(0))];
    while let Some((level, g)) = stack.pop() {
        if level == depth {
            total += g;
            leaves += 1;
            continue;
        }
        let k = level + 1;
        let b = spec.base_at(k);
        let step = num_traits::pow(cap.clone(), depth - k);
        for d in 0..b {
            let mut term = BigInt::from(d) * &step;
            if k % 2 == 1 {
                term = -term;
            }
            stack.push((k, &g + term));
        }
    }
    let t_sum = Rational::new(total, cap_pow_m);
    let n_leaves = int(leaves as i64);
    let t_left = nega_cap_tail_value(spec, depth, true);
    let t_right = nega_cap_tail_value(spec, depth, false);
    let mut unit = Rational::new(BigInt::one(), num_traits::pow(BigInt::from(spec.cap), depth));
    if depth % 2 == 1 {
        unit = -unit;
    }
    let (inf_tail, sup_tail) = if depth % 2 == 0 {
        (t_left, t_right)
    } else {
        (t_right, t_left)
    };
    let sum_lo = &t_sum + &n_leaves * &unit * inf_tail;
    let sum_hi = &t_sum + &n_leaves * &unit * sup_tail;
    let width = Rational::new(BigInt::one(), spec.product(depth));
    Enclosure::new(sum_lo * &width, sum_hi * &width)
}

/// One row per rank-`depth` alternating cylinder: exact x-interval and the
/// exact image interval `[f(inf), f(sup)]`, sorted by `x_lo`.
pub fn f_graph_cells(spec: &BaseSpec, depth: usize, max_cells: u64) -> Result<Vec<GraphCell>> {
    spec.validate()?;
    if depth == 0 {
        return Err(Error::Domain("depth must be at least 1".into()));
    }
    let count = spec.product(depth);
    if count > BigInt::from(max_cells) {
        return Err(Error::ResourceBound(format!(
            "{count} cylinders of rank {depth} exceed the budget of {max_cells}"
        )));
    }
    let prod_m = spec.product(depth);
    let cap_pow_m = num_traits::pow(BigInt::from(spec.cap), depth);
    let a0m = spec.shifted(depth).a0_exact();
    let t_left = nega_cap_tail_value(spec, depth, true);
    let t_right = nega_cap_tail_value(spec, depth, false);
    let mut x_unit = Rational::new(BigInt::one(), prod_m.clone());
    let mut y_unit = Rational::new(BigInt::one(), cap_pow_m.clone());
    if depth % 2 == 1 {
        x_unit = -x_unit;
        y_unit = -y_unit;
    }
    let (x_rem_lo, x_rem_hi) = (&a0m - int(1), a0m.clone());
    let mut cells = Vec::new();
    // stack entries: (level, x-partial * prod_m, y-partial * cap^depth)
    let mut stack: Vec<(usize, BigInt, BigInt)> = vec![(0, BigInt::from(0), BigInt::from(0))];
    while let Some((level, sx, sy)) = stack.pop() {
        if level == depth {
            let x_part = Rational::new(sx, prod_m.clone());
            let y_part = Rational::new(sy, cap_pow_m.clone());
            let (mut x_a, mut x_b) = (&x_part + &x_unit * &x_rem_lo, &x_part + &x_unit * &x_rem_hi);
            if x_a > x_b {
                std::mem::swap(&mut x_a, &mut x_b);
            }
            let (mut y_a, mut y_b) = (&y_part + &y_unit * &t_left, &y_part + &y_unit * &t_right);
            if y_a > y_b {
                std::mem::swap(&mut y_a, &mut y_b);
            }
            cells.push(GraphCell::new(x_a, x_b, y_a, y_b));
            continue;
        }
        let k = level + 1;
        let b = spec.base_at(k);
        let x_step = &prod_m / spec.product(k);
        let y_step = num_traits::pow(BigInt::from(spec.cap), depth - k);
        for d in 0..b {
            let mut tx = BigInt::from(d) * &x_step;
            let mut ty = BigInt::from(d) * &y_step;
            if k % 2 == 1 {
                tx = -tx;
                ty = -ty;
            }
            stack.push((k, &sx + tx, &sy + ty));
        }
    }
    sort_cells(&mut cells);
    Ok(cells)
}
