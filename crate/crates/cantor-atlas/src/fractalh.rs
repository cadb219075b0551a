//! The run-decoding map `h` on nega-q digit strings: points whose expansion
//! is a concatenation of blocks `u...u α` (a run of `α - 1` copies of the
//! marker digit `u` followed by `α` itself, `α ∈ Θ = {1,...,q-1} \ {u}`) map
//! to the string of their block values,
//!
//! `h( Δ^{-q}_{u^{α_1-1} α_1 u^{α_2-1} α_2 ...} ) = Δ^{-q}_{α_1 α_2 ...}`.
//!
//! The domain is a self-similar digit-restriction fractal; this module
//! provides run parsing, both closed-form and digit-decode value routes,
//! the inverse map, Moran-equation and log-ratio dimension solvers, exact
//! cover counting of the graph, a grid box-counting slope estimator, and
//! exact difference-quotient probes.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::basis::BaseSpec;
use crate::cells::{sort_cells, GraphCell};
use crate::codec::{self, Polarity, Representation, Tail};
use crate::error::{Error, Result};
use crate::numerics::{
    bisect_root, int, ln_enclosure, pow_enclosure, rat, rational_pow, Enclosure, Rational,
    SplitMix64,
};

/// The pair `(q, u)`: base `q >= 4` and marker digit `u ∈ {0,...,q-1}`.
/// The block-value alphabet is `Θ = {1,...,q-1} \ {u}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FractalParams {
    pub q: u32,
    pub u: u32,
}

impl FractalParams {
    pub fn new(q: u32, u: u32) -> Result<Self> {
        let mut problems = Vec::new();
        if q < 4 {
            problems.push(format!("q must exceed 3, got {q}"));
        }
        if u >= q {
            problems.push(format!("u must lie in 0..{q}, got {u}"));
        }
        if problems.is_empty() {
            Ok(Self { q, u })
        } else {
            Err(Error::Validation(problems))
        }
    }

    /// The block-value alphabet in increasing order.
    pub fn theta(&self) -> Vec<u32> {
        (1..self.q).filter(|&d| d != self.u).collect()
    }

    /// `|Θ|`: `q - 1` when `u = 0`, else `q - 2`.
    pub fn theta_size(&self) -> u32 {
        if self.u == 0 {
            self.q - 1
        } else {
            self.q - 2
        }
    }

    pub fn theta_contains(&self, d: u32) -> bool {
        d >= 1 && d < self.q && d != self.u
    }

    fn spec(&self) -> BaseSpec {
        BaseSpec::constant(self.q).expect("q >= 4")
    }
}

/// Tail rule for a run-structured point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RunTail {
    /// The block of alphas repeats forever.
    Periodic(Vec<u32>),
    /// Only the listed alphas are known.
    Truncated,
}

/// A point of the domain of `h`, recorded by its block values `α_1 α_2 ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunDigits {
    params: FractalParams,
    alphas: Vec<u32>,
    tail: RunTail,
}

impl RunDigits {
    pub fn new(params: FractalParams, alphas: Vec<u32>, tail: RunTail) -> Result<Self> {
        for &a in &alphas {
            if !params.theta_contains(a) {
                return Err(Error::InvalidDigit { digit: a, level: 0, base: params.q });
            }
        }
        if let RunTail::Periodic(block) = &tail {
            if block.is_empty() {
                return Err(Error::Validation(vec!["empty periodic alpha block".into()]));
            }
            for &a in block {
                if !params.theta_contains(a) {
                    return Err(Error::InvalidDigit { digit: a, level: 0, base: params.q });
                }
            }
        }
        Ok(Self { params, alphas, tail })
    }

    pub fn params(&self) -> FractalParams {
        self.params
    }

    pub fn alphas(&self) -> &[u32] {
        &self.alphas
    }

    pub fn tail(&self) -> &RunTail {
        &self.tail
    }
}

/// Parse outcome: either a member prefix or the 1-based position of the
/// first offending digit (one past the end for an unterminated run).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseOutcome {
    Member(RunDigits),
    NotMember { position: usize },
}

/// Greedily consumes maximal `u`-runs: a run of length `r` followed by a
/// digit `d != u` is a valid block iff `d = r + 1` (and then `d ∈ Θ`
/// automatically). Digits outside `0..q` are a precondition violation.
pub fn parse_run_structure(raw: &[u32], params: FractalParams) -> Result<ParseOutcome> {
    for (i, &d) in raw.iter().enumerate() {
        if d >= params.q {
            return Err(Error::InvalidDigit { digit: d, level: i + 1, base: params.q });
        }
    }
    let mut alphas = Vec::new();
    let mut i = 0usize;
    while i < raw.len() {
        let mut run = 0u32;
        while i < raw.len() && raw[i] == params.u {
            run += 1;
            i += 1;
        }
        if i == raw.len() {
            if run == 0 {
                break;
            }
            return Ok(ParseOutcome::NotMember { position: raw.len() + 1 });
        }
        let d = raw[i];
        if d != run + 1 || !params.theta_contains(d) {
            return Ok(ParseOutcome::NotMember { position: i + 1 });
        }
        alphas.push(d);
        i += 1;
    }
    Ok(ParseOutcome::Member(RunDigits::new(params, alphas, RunTail::Truncated)?))
}

/// Raw nega-q digits of a block list: `u^{α-1} α` per alpha.
pub fn expand_alphas(alphas: &[u32], params: FractalParams) -> Vec<u32> {
    let mut raw = Vec::new();
    for &a in alphas {
        for _ in 1..a {
            raw.push(params.u);
        }
        raw.push(a);
    }
    raw
}

/// The nega-q representation of the point itself (raw digits).
pub fn raw_representation(x: &RunDigits) -> Result<Representation> {
    let spec = x.params.spec();
    let digits = expand_alphas(&x.alphas, x.params);
    let tail = match &x.tail {
        RunTail::Periodic(block) => Tail::Periodic(expand_alphas(block, x.params)),
        RunTail::Truncated => Tail::Truncated,
    };
    Representation::new(spec, Polarity::NegaConstant, digits, tail)
}

/// `h` itself: the image is the nega-q string of the block values.
pub fn h_forward(x: &RunDigits) -> Result<Representation> {
    let spec = x.params.spec();
    let tail = match &x.tail {
        RunTail::Periodic(block) => Tail::Periodic(block.clone()),
        RunTail::Truncated => Tail::Truncated,
    };
    Representation::new(spec, Polarity::NegaConstant, x.alphas.clone(), tail)
}

/// Point value via the raw digit expansion.
pub fn x_value(x: &RunDigits) -> Result<Enclosure> {
    Ok(raw_representation(x)?.value())
}

/// Point value via the closed form
/// `x = -u/(q+1) + sum_n (α_n - u) / (-q)^(α_1 + ... + α_n)`.
/// Exact for periodic tails; the raw cylinder hull for truncated ones.
pub fn x_value_closed_form(x: &RunDigits) -> Result<Enclosure> {
    let q = x.params.q as i64;
    let u = x.params.u as i64;
    let base = rat(-u, q + 1);
    let mut sum = base;
    let mut s: i64 = 0;
    for &a in &x.alphas {
        s += a as i64;
        sum += int(a as i64 - u) * rational_pow(&rat(-1, q), s);
    }
    match &x.tail {
        RunTail::Truncated => Ok(raw_representation(x)?.value()),
        RunTail::Periodic(block) => {
            let mut block_sum = int(0);
            let mut t: i64 = 0;
            for &a in block {
                t += a as i64;
                block_sum += int(a as i64 - u) * rational_pow(&rat(-1, q), t);
            }
            let ratio = rational_pow(&rat(-1, q), t);
            let tail_val = block_sum / (int(1) - ratio);
            Ok(Enclosure::exact(sum + tail_val * rational_pow(&rat(-1, q), s)))
        }
    }
}

/// The inverse map: a digit string over `Θ` pulls back to the run-structured
/// point. The x-value is computed by both the raw-digit decode and the
/// closed form, which must agree exactly for exact tails.
pub fn h_inverse(y: &Representation, params: FractalParams) -> Result<(RunDigits, Enclosure)> {
    if y.polarity() != Polarity::NegaConstant || y.spec().cap != params.q {
        return Err(Error::Domain("inverse expects a nega-q string over the same base".into()));
    }
    let check = |d: u32| -> Result<()> {
        if !params.theta_contains(d) {
            return Err(Error::Domain(format!(
                "digit {d} outside the block alphabet (u = {}, q = {})",
                params.u, params.q
            )));
        }
        Ok(())
    };
    for &d in y.digits() {
        check(d)?;
    }
    let tail = match y.tail() {
        Tail::Zeros => {
            return Err(Error::Domain("digit 0 outside the block alphabet".into()));
        }
        Tail::Periodic(b) => {
            for &d in b {
                check(d)?;
            }
            RunTail::Periodic(b.clone())
        }
        Tail::Truncated => RunTail::Truncated,
    };
    let run = RunDigits::new(params, y.digits().to_vec(), tail)?;
    let via_digits = x_value(&run)?;
    let via_closed = x_value_closed_form(&run)?;
    if via_digits != via_closed {
        return Err(Error::Internal(format!(
            "closed form {via_closed} disagrees with raw decode {via_digits}"
        )));
    }
    Ok((run, via_digits))
}

/// How a dimension value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DimensionMethod {
    MoranRoot,
    LogRatio,
    BoxSlope,
}

/// A dimension value with its method and (for Moran roots) the certified
/// residual bound `|equation value - 1|` at the enclosure midpoint.
#[derive(Debug, Clone)]
pub struct DimensionResult {
    pub value: Enclosure,
    pub method: DimensionMethod,
    pub residual: Rational,
}

/// Enclosure of the Moran sum `sum_{p ∈ Θ} q^(-p α)` at a rational `α`.
pub fn moran_lhs_enclosure(
    params: FractalParams,
    alpha: &Rational,
    tol: &Rational,
) -> Result<Enclosure> {
    let theta = params.theta();
    let per_term = tol / int(theta.len() as i64);
    let base = Rational::new(BigInt::one(), BigInt::from(params.q));
    let mut acc = Enclosure::exact(int(0));
    for p in theta {
        let e = pow_enclosure(&base, &(alpha * int(p as i64)), &per_term)?;
        acc = acc.add(&e);
    }
    Ok(acc)
}

/// Hausdorff dimension of the domain: the root `α_0 ∈ (0,1)` of
/// `sum_{p ∈ Θ} q^(-p α) = 1`.
///
/// Solved through the strictly increasing polynomial substitute `t = q^(-α)`
/// (`sum t^p = 1` over exact rationals), then transported back through
/// certified logarithm enclosures; the returned enclosure has width at most
/// `tol` and the Moran sum brackets 1 at its endpoints.
pub fn dim_d(params: FractalParams, tol: &Rational) -> Result<DimensionResult> {
    if !tol.is_positive() {
        return Err(Error::Domain("tolerance must be positive".into()));
    }
    let theta = params.theta();
    let poly = |t: &Rational| -> Rational {
        let mut s = int(-1);
        for &p in &theta {
            s += rational_pow(t, p as i64);
        }
        s
    };
    let mut inner = tol / int(64);
    loop {
        let root = bisect_root(poly, &int(0), &int(1), &inner)?;
        // widen so the endpoints straddle the root with certified margin
        let t_lo = (root.lo() - &inner).max(Rational::new(BigInt::one(), BigInt::from(4 * params.q as u64)));
        let t_hi = (root.hi() + &inner).min(rat(99, 100));
        let ln_q = ln_enclosure(&int(params.q as i64), &inner)?;
        let num_hi = ln_enclosure(&t_lo, &inner)?.neg();
        let num_lo = ln_enclosure(&t_hi, &inner)?.neg();
        let alpha_hi = num_hi.div(&ln_q)?;
        let alpha_lo = num_lo.div(&ln_q)?;
        let value = Enclosure::new(alpha_lo.lo().clone(), alpha_hi.hi().clone())?;
        if &value.width() <= tol {
            let lhs = moran_lhs_enclosure(params, &value.midpoint(), &(tol.clone() / int(4)))?;
            let residual = lhs.sub(&Enclosure::exact(int(1))).max_abs();
            return Ok(DimensionResult { value, method: DimensionMethod::MoranRoot, residual });
        }
        inner /= int(16);
    }
}

/// Hausdorff dimension of the image set: `log_q |Θ|`, bracketed to `tol` by
/// exact integer power comparisons `|Θ|^(2^s)` vs `q^a` (no transcendental
/// evaluation). Tolerances below `2^-30` are rejected as impractically
/// large integer powers.
pub fn dim_e(params: FractalParams, tol: &Rational) -> Result<DimensionResult> {
    if !tol.is_positive() {
        return Err(Error::Domain("tolerance must be positive".into()));
    }
    let mut s: u32 = 0;
    while rat(1, 1i64 << s) > *tol {
        s += 1;
        if s > 30 {
            return Err(Error::Domain(
                "tolerance below 2^-30 is impractical for integer-power bracketing".into(),
            ));
        }
    }
    let tau = params.theta_size();
    let target = num_traits::pow(BigInt::from(tau), 1usize << s);
    // q^(2^i) ladder, then set bits of the exponent from the top
    let mut ladder = Vec::with_capacity(s as usize);
    let mut cur = BigInt::from(params.q);
    for _ in 0..s {
        ladder.push(cur.clone());
        cur = &cur * &cur;
    }
    let mut acc = BigInt::one();
    let mut a: u64 = 0;
    for i in (0..s).rev() {
        let cand = &acc * &ladder[i as usize];
        if cand <= target {
            acc = cand;
            a += 1 << i;
        }
    }
    let denom = BigInt::from(1u64 << s);
    let value = if acc == target {
        Enclosure::exact(Rational::new(BigInt::from(a), denom))
    } else {
        Enclosure::new(
            Rational::new(BigInt::from(a), denom.clone()),
            Rational::new(BigInt::from(a + 1), denom),
        )?
    };
    Ok(DimensionResult { value, method: DimensionMethod::LogRatio, residual: int(0) })
}

/// Monotonicity of `h` on its domain, by the marker digit alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonotoneClass {
    Decreasing,
    Increasing,
    NonMonotone,
}

pub fn monotonicity_class(params: FractalParams) -> MonotoneClass {
    if params.u <= 1 {
        MonotoneClass::Decreasing
    } else if params.u + 2 >= params.q {
        MonotoneClass::Increasing
    } else {
        MonotoneClass::NonMonotone
    }
}

/// Result of an exact order-comparison scan over random periodic points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessReport {
    pub class: MonotoneClass,
    /// Every sampled pair ordered as the class demands (monotone cases), or
    /// both orderings were exhibited (non-monotone case).
    pub consistent: bool,
    pub saw_order_preserving: bool,
    pub saw_order_reversing: bool,
    /// False when too few usable pairs were drawn to witness the class.
    pub conclusive: bool,
    pub pairs_tested: usize,
}

/// Samples pairs of random periodic run-points, compares exact x-order with
/// exact y-order, and checks the outcome against [`monotonicity_class`].
pub fn monotonicity_witness_scan(
    params: FractalParams,
    samples: usize,
    seed: u64,
) -> Result<WitnessReport> {
    let theta = params.theta();
    let mut rng = SplitMix64::new(seed);
    let draw = |rng: &mut SplitMix64| -> Result<(Rational, Rational)> {
        let len = 1 + rng.below(5) as usize;
        let alphas: Vec<u32> =
            (0..len).map(|_| theta[rng.below(theta.len() as u64) as usize]).collect();
        let run = RunDigits::new(params, alphas.clone(), RunTail::Periodic(alphas))?;
        let x = x_value_closed_form(&run)?;
        let y = h_forward(&run)?.value();
        Ok((x.lo().clone(), y.lo().clone()))
    };
    let mut saw_preserving = false;
    let mut saw_reversing = false;
    let mut pairs = 0usize;
    for _ in 0..samples {
        let (x1, y1) = draw(&mut rng)?;
        let (x2, y2) = draw(&mut rng)?;
        if x1 == x2 {
            continue;
        }
        pairs += 1;
        let same = (x1 < x2) == (y1 < y2);
        if same {
            saw_preserving = true;
        } else {
            saw_reversing = true;
        }
    }
    let class = monotonicity_class(params);
    let (consistent, conclusive) = match class {
        MonotoneClass::Decreasing => (!saw_preserving, pairs > 0),
        MonotoneClass::Increasing => (!saw_reversing, pairs > 0),
        MonotoneClass::NonMonotone => {
            let both = saw_preserving && saw_reversing;
            (both, both)
        }
    };
    Ok(WitnessReport {
        class,
        consistent,
        saw_order_preserving: saw_preserving,
        saw_order_reversing: saw_reversing,
        conclusive,
        pairs_tested: pairs,
    })
}

/// Residual of `h(σ^{α_1+...+α_n}(x)) - σ^n(h(x))`: the raw shift by a whole
/// number of blocks against the image shift by the block count. Exact zero
/// for periodic tails.
pub fn shift_commutation_residual(x: &RunDigits, n: usize) -> Result<Enclosure> {
    if n > x.alphas.len() {
        return Err(Error::Domain(format!(
            "shift by {n} blocks exceeds the {} explicit blocks",
            x.alphas.len()
        )));
    }
    let s_n: usize = x.alphas[..n].iter().map(|&a| a as usize).sum();
    let raw_shifted = codec::shift(&raw_representation(x)?, s_n)?;
    let rest = RunDigits::new(x.params, x.alphas[n..].to_vec(), x.tail.clone())?;
    if raw_shifted != raw_representation(&rest)? {
        return Err(Error::Internal("raw shift does not land on a block boundary".into()));
    }
    let lhs = h_forward(&rest)?.value();
    let rhs = codec::shift(&h_forward(x)?, n)?.value();
    Ok(lhs.sub(&rhs))
}

fn theta_pow(params: FractalParams, m: u32) -> u128 {
    (params.theta_size() as u128).pow(m)
}

/// Enumerates all alpha-prefixes of length `m` (the rank-`m` cover
/// rectangles of the graph) and returns their number, which equals `|Θ|^m`.
pub fn count_graph_squares(params: FractalParams, m: u32, max_cells: u64) -> Result<u64> {
    if m == 0 {
        return Err(Error::Domain("rank must be at least 1".into()));
    }
    let expected = theta_pow(params, m);
    if expected > max_cells as u128 {
        return Err(Error::ResourceBound(format!(
            "{expected} prefixes of rank {m} exceed the budget of {max_cells}"
        )));
    }
    let theta = params.theta();
    let mut odometer = vec![0usize; m as usize];
    let mut count: u64 = 0;
    loop {
        count += 1;
        // advance the least significant position
        let mut i = 0;
        loop {
            if i == odometer.len() {
                debug_assert_eq!(count as u128, expected);
                return Ok(count);
            }
            odometer[i] += 1;
            if odometer[i] < theta.len() {
                break;
            }
            odometer[i] = 0;
            i += 1;
        }
    }
}

/// One rectangle per alpha-prefix of length `depth`: the raw-digit cylinder
/// hull on the x-axis against the image cylinder hull on the y-axis.
pub fn h_graph_cells(
    params: FractalParams,
    depth: u32,
    max_cells: u64,
) -> Result<Vec<GraphCell>> {
    if depth == 0 {
        return Err(Error::Domain("depth must be at least 1".into()));
    }
    let expected = theta_pow(params, depth);
    if expected > max_cells as u128 {
        return Err(Error::ResourceBound(format!(
            "{expected} prefixes of depth {depth} exceed the budget of {max_cells}"
        )));
    }
    let theta = params.theta();
    let mut odometer = vec![0usize; depth as usize];
    let mut cells = Vec::with_capacity(expected as usize);
    loop {
        let alphas: Vec<u32> = odometer.iter().map(|&i| theta[i]).collect();
        let run = RunDigits::new(params, alphas, RunTail::Truncated)?;
        let x_hull = raw_representation(&run)?.value();
        let y_hull = h_forward(&run)?.value();
        cells.push(GraphCell::new(
            x_hull.lo().clone(),
            x_hull.hi().clone(),
            y_hull.lo().clone(),
            y_hull.hi().clone(),
        ));
        let mut i = 0;
        loop {
            if i == odometer.len() {
                sort_cells(&mut cells);
                return Ok(cells);
            }
            odometer[i] += 1;
            if odometer[i] < theta.len() {
                break;
            }
            odometer[i] = 0;
            i += 1;
        }
    }
}

fn column_range(lo: &Rational, hi: &Rational, delta: &Rational) -> (i64, i64) {
    let nlo = lo / delta;
    let nhi = hi / delta;
    let imin = if nlo.is_integer() {
        nlo.to_integer() - BigInt::one()
    } else {
        nlo.floor().to_integer()
    };
    let imax = nhi.floor().to_integer();
    (
        imin.to_i64().expect("grid index fits i64"),
        imax.to_i64().expect("grid index fits i64"),
    )
}

/// Counts the closed grid squares of side `q^-m` that intersect the union of
/// the given rectangles. Exact interval arithmetic on the rational
/// endpoints; squares touching a rectangle boundary count as intersecting.
pub fn box_count_cells(cells: &[GraphCell], q: u32, m: u32) -> u64 {
    let delta = rational_pow(&rat(1, q as i64), m as i64);
    // per grid column, merge the row-index intervals of every rectangle
    let mut columns: HashMap<i64, Vec<(i64, i64)>> = HashMap::new();
    for c in cells {
        let (c0, c1) = column_range(&c.x_lo, &c.x_hi, &delta);
        let (r0, r1) = column_range(&c.y_lo, &c.y_hi, &delta);
        for i in c0..=c1 {
            columns.entry(i).or_default().push((r0, r1));
        }
    }
    let mut total: u64 = 0;
    for (_, mut spans) in columns {
        spans.sort_unstable();
        let mut cur: Option<(i64, i64)> = None;
        for (a, b) in spans {
            match cur {
                Some((lo, hi)) if a <= hi + 1 => cur = Some((lo, hi.max(b))),
                Some((lo, hi)) => {
                    total += (hi - lo + 1) as u64;
                    cur = Some((a, b));
                }
                None => cur = Some((a, b)),
            }
        }
        if let Some((lo, hi)) = cur {
            total += (hi - lo + 1) as u64;
        }
    }
    total
}

/// Endpoint-fit slope `ln(N_hi/N_lo) / ((m_hi - m_lo) ln q)` as a certified
/// enclosure.
pub fn box_slope_from_counts(
    n_lo: u64,
    n_hi: u64,
    m_lo: u32,
    m_hi: u32,
    q: u32,
) -> Result<Enclosure> {
    if m_hi <= m_lo {
        return Err(Error::Domain("need m_hi > m_lo".into()));
    }
    if n_lo == 0 || n_hi == 0 {
        return Err(Error::Domain("counts must be positive".into()));
    }
    let tol = rat(1, 1_000_000_000);
    let num = ln_enclosure(&Rational::new(BigInt::from(n_hi), BigInt::from(n_lo)), &tol)?;
    let den = ln_enclosure(&int(q as i64), &tol)?.scale(&int((m_hi - m_lo) as i64));
    num.div(&den)
}

/// Grid box-counting slope of the graph over scales `q^-m`, `m ∈ [m_lo,
/// m_hi]`, using the exact rank-`m` cover rectangles (monotone marker
/// digits only, where the cover is reliable at desk scale).
pub fn box_dim_estimate(
    params: FractalParams,
    m_lo: u32,
    m_hi: u32,
    max_cells: u64,
) -> Result<DimensionResult> {
    if monotonicity_class(params) == MonotoneClass::NonMonotone {
        return Err(Error::Domain(
            "box-counting slope is restricted to monotone marker digits".into(),
        ));
    }
    if m_lo == 0 || m_hi <= m_lo {
        return Err(Error::Domain("need 1 <= m_lo < m_hi".into()));
    }
    let n_lo = box_count_cells(&h_graph_cells(params, m_lo, max_cells)?, params.q, m_lo);
    let n_hi = box_count_cells(&h_graph_cells(params, m_hi, max_cells)?, params.q, m_hi);
    let value = box_slope_from_counts(n_lo, n_hi, m_lo, m_hi, params.q)?;
    Ok(DimensionResult { value, method: DimensionMethod::BoxSlope, residual: int(0) })
}

/// One probe quotient of the non-differentiability approach family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeQuotient {
    /// Perturbed block index `n` (1-based).
    pub index: usize,
    pub quotient: Rational,
    /// Exponent of the predicted growth factor
    /// `q^(c_1 + ... + c_{n-1} + alt + c - n)`.
    pub predicted_exponent: i64,
}

/// Exact difference quotients `(h(x_n) - h(x_0)) / (x_n - x_0)` for the
/// approach family that swaps block `n` between `c` and `alt` after the
/// prefix `c_1 ... c_{n-1}`, with the tail `(c)` repeating beyond. With an
/// all-ones prefix the quotient is constant; every prefix entry above 1
/// multiplies the magnitude by a power of `q`.
pub fn nondiff_probe_h(
    prefix: &[u32],
    c: u32,
    alt: u32,
    params: FractalParams,
) -> Result<Vec<ProbeQuotient>> {
    if c == alt {
        return Err(Error::Domain("the two block values must differ".into()));
    }
    for &d in prefix.iter().chain([c, alt].iter()) {
        if !params.theta_contains(d) {
            return Err(Error::InvalidDigit { digit: d, level: 0, base: params.q });
        }
    }
    let tail = RunTail::Periodic(vec![c]);
    let mut out = Vec::new();
    for n in 1..=prefix.len() + 1 {
        let mut base_alphas = prefix[..n - 1].to_vec();
        base_alphas.push(c);
        let mut alt_alphas = prefix[..n - 1].to_vec();
        alt_alphas.push(alt);
        let x0 = RunDigits::new(params, base_alphas, tail.clone())?;
        let xn = RunDigits::new(params, alt_alphas, tail.clone())?;
        let v0 = x_value_closed_form(&x0)?;
        let vn = x_value_closed_form(&xn)?;
        let y0 = h_forward(&x0)?.value();
        let yn = h_forward(&xn)?.value();
        let dx = vn.lo() - v0.lo();
        if dx.is_zero() {
            return Err(Error::Domain(format!("degenerate perturbation at block {n}")));
        }
        let quotient = (yn.lo() - y0.lo()) / dx;
        let s_prefix: i64 = prefix[..n - 1].iter().map(|&a| a as i64).sum();
        out.push(ProbeQuotient {
            index: n,
            quotient,
            predicted_exponent: s_prefix + alt as i64 + c as i64 - n as i64,
        });
    }
    Ok(out)
}
