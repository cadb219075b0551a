//! Salem-type function families driven by a matrix `P = ||p_{i,n}||` with
//! unit column sums: the plain family on positive Cantor digits, the
//! even-swapped variant on alternating digits, and the odd-swapped variant
//! on nega-q digits,
//!
//! `F(x) = β_{ε_1,1} + sum_{k>=2} β̂_{ε_k,k} * prod_{n<k} p̂_{ε_n,n}`,
//!
//! where the hat applies the mode's index reflection `i -> q_n - 1 - i` at
//! even (or odd) levels. Includes matrix validation, theorem-condition
//! predicates on the eventually periodic structure, and exact
//! difference-quotient probes.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::basis::BaseSpec;
use crate::cells::{sort_cells, GraphCell};
use crate::codec::{Polarity, Representation, Tail};
use crate::error::{Error, Result};
use crate::numerics::{int, Enclosure, Rational};

/// Which levels reflect their digit index before indexing into `P`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwapMode {
    /// No reflection; argument digits come from the positive Cantor system.
    Plain,
    /// Reflect at even levels; argument digits come from the alternating
    /// system (the offset representation `x = sum (1+ε_n)(-1)^{n+1}/(q_1...q_n)`).
    EvenSwap,
    /// Reflect at odd levels; argument digits come from the nega-q system.
    OddSwap,
}

impl SwapMode {
    /// The digit actually used to index column `n`.
    pub fn reflect(self, digit: u32, base: u32, level: usize) -> u32 {
        let swap = match self {
            SwapMode::Plain => false,
            SwapMode::EvenSwap => level % 2 == 0,
            SwapMode::OddSwap => level % 2 == 1,
        };
        if swap {
            base - 1 - digit
        } else {
            digit
        }
    }

    /// Digit system a representation must use for this mode.
    pub fn polarity(self) -> Polarity {
        match self {
            SwapMode::Plain => Polarity::Positive,
            SwapMode::EvenSwap => Polarity::Alternating,
            SwapMode::OddSwap => Polarity::NegaConstant,
        }
    }
}

/// Eventually periodic column matrix: columns before `period_start` occur
/// once, the rest repeat forever. Column `n` lists `p_{0,n} ... p_{q_n-1,n}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SalemMatrix {
    columns: Vec<Vec<Rational>>,
    period_start: usize,
}

impl SalemMatrix {
    pub fn new(columns: Vec<Vec<Rational>>, period_start: usize) -> Result<Self> {
        if columns.is_empty() {
            return Err(Error::Validation(vec!["matrix needs at least one column".into()]));
        }
        if period_start >= columns.len() {
            return Err(Error::Validation(vec![format!(
                "period_start {period_start} leaves no repeating columns (have {})",
                columns.len()
            )]));
        }
        Ok(Self { columns, period_start })
    }

    /// One column repeated at every level.
    pub fn constant(column: Vec<Rational>) -> Result<Self> {
        Self::new(vec![column], 0)
    }

    /// The uniform matrix `p_{i,n} = 1/q_n` for a base sequence.
    pub fn uniform(spec: &BaseSpec) -> Result<Self> {
        let mut columns = Vec::new();
        for &q in spec.preperiod.iter().chain(&spec.period) {
            columns.push(vec![Rational::new(BigInt::one(), BigInt::from(q)); q as usize]);
        }
        Self::new(columns, spec.preperiod.len())
    }

    pub fn columns(&self) -> &[Vec<Rational>] {
        &self.columns
    }

    pub fn period_start(&self) -> usize {
        self.period_start
    }

    pub fn period_len(&self) -> usize {
        self.columns.len() - self.period_start
    }

    /// Column at 1-based `level`.
    pub fn column_at(&self, level: usize) -> &[Rational] {
        assert!(level >= 1);
        let idx = level - 1;
        if idx < self.period_start {
            &self.columns[idx]
        } else {
            &self.columns[self.period_start + (idx - self.period_start) % self.period_len()]
        }
    }

    /// `max |p_{i,n}|` across all stored columns.
    pub fn bound(&self) -> Rational {
        self.columns
            .iter()
            .flatten()
            .map(|p| p.abs())
            .max()
            .expect("nonempty matrix")
    }

    /// Checks the defining conditions exactly: entries in `(-1,1)` (1°),
    /// unit column sums (2°), `max |p| < 1` which forces the digit products
    /// to vanish on the periodic structure (3°), and `β_{0,n} = 0 < β_{i,n}
    /// < 1` for `i != 0` (4°).
    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        let one = int(1);
        for (c, col) in self.columns.iter().enumerate() {
            if col.is_empty() {
                problems.push(format!("column {c} is empty"));
                continue;
            }
            for (i, p) in col.iter().enumerate() {
                if p.abs() >= one {
                    problems.push(format!("1°: |p_{{{i},{c}}}| >= 1 (value {p})"));
                }
            }
            let sum: Rational = col.iter().sum();
            if sum != one {
                problems.push(format!("2°: column {c} sums to {sum}, not 1"));
            }
            let mut beta_acc = int(0);
            for (i, p) in col.iter().enumerate() {
                if i > 0 && (!beta_acc.is_positive() || beta_acc >= one) {
                    problems.push(format!("4°: β_{{{i},{c}}} = {beta_acc} outside (0,1)"));
                }
                beta_acc += p;
            }
        }
        if problems.is_empty() && self.bound() >= one {
            problems.push("3°: max |p| >= 1, digit products need not vanish".into());
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(problems))
        }
    }
}

/// `β_{i,n} = sum_{j<i} p_{j,n}` (zero for `i = 0`).
pub fn beta(p: &SalemMatrix, digit: u32, level: usize) -> Result<Rational> {
    let col = p.column_at(level);
    if digit as usize >= col.len() {
        return Err(Error::InvalidDigit { digit, level, base: col.len() as u32 });
    }
    Ok(col[..digit as usize].iter().sum())
}

fn swapped_entry(
    p: &SalemMatrix,
    mode: SwapMode,
    digit: u32,
    level: usize,
) -> Result<(Rational, Rational)> {
    let col = p.column_at(level);
    let base = col.len() as u32;
    if digit >= base {
        return Err(Error::InvalidDigit { digit, level, base });
    }
    let idx = mode.reflect(digit, base, level);
    let b = col[..idx as usize].iter().sum();
    Ok((b, col[idx as usize].clone()))
}

fn check_alignment(p: &SalemMatrix, x: &Representation) -> Result<()> {
    let spec = x.spec();
    let horizon =
        spec.preperiod.len().max(p.period_start()) + spec.period.len().lcm(&p.period_len());
    for level in 1..=horizon {
        let want = x.base_at(level) as usize;
        let have = p.column_at(level).len();
        if want != have {
            return Err(Error::Domain(format!(
                "matrix/spec level-count mismatch at level {level}: column has {have} entries, alphabet has {want}"
            )));
        }
    }
    Ok(())
}

/// Evaluates the Salem-type series on the digit stream of `x`.
///
/// Exact for zero/periodic tails (the tail telescopes into a geometric
/// block sum). For truncated tails the first `min(trunc, len)` digits give
/// the partial sum and the certified bound
/// `prod_{j<=m} |p̂_{ε_j,j}| / (1 - max|p|)` widens the enclosure.
pub fn eval_salem(
    x: &Representation,
    p: &SalemMatrix,
    mode: SwapMode,
    trunc: usize,
) -> Result<Enclosure> {
    if x.polarity() != mode.polarity() {
        return Err(Error::Domain(format!(
            "mode {mode:?} expects {:?} digits, got {:?}",
            mode.polarity(),
            x.polarity()
        )));
    }
    p.validate()?;
    check_alignment(p, x)?;
    let spec = x.spec();
    let mut acc = int(0);
    let mut prod = int(1);
    match x.tail() {
        Tail::Truncated => {
            let m = x.digits().len().min(trunc);
            for k in 1..=m {
                let (b, pe) = swapped_entry(p, mode, x.digits()[k - 1], k)?;
                acc += &b * &prod;
                prod *= pe;
            }
            let tail = prod.abs() / (int(1) - p.bound());
            Enclosure::new(&acc - &tail, &acc + &tail)
        }
        Tail::Zeros | Tail::Periodic(_) => {
            // consume explicit digits, then everything up to the point where
            // digits, columns, bases, and swap parity all repeat together
            let tail_j = match x.tail() {
                Tail::Periodic(b) => b.len(),
                _ => 1,
            };
            let settle = spec
                .preperiod
                .len()
                .max(p.period_start())
                .max(x.digits().len());
            for k in 1..=settle {
                let d = x.digit_at(k).expect("exact tail");
                let (b, pe) = swapped_entry(p, mode, d, k)?;
                acc += &b * &prod;
                prod *= pe;
            }
            let block_j = tail_j
                .lcm(&p.period_len())
                .lcm(&spec.period.len())
                .lcm(&2);
            let mut block_sum = int(0);
            let mut block_prod = int(1);
            for j in 1..=block_j {
                let k = settle + j;
                let d = x.digit_at(k).expect("exact tail");
                let (b, pe) = swapped_entry(p, mode, d, k)?;
                block_sum += &b * &block_prod;
                block_prod *= pe;
            }
            if block_prod.abs() >= int(1) {
                return Err(Error::Internal("non-contracting block product".into()));
            }
            let tail_value = &prod * block_sum / (int(1) - block_prod);
            Ok(Enclosure::exact(acc + tail_value))
        }
    }
}

/// The x-coordinate a digit string stands for under each mode: the positive
/// Cantor value (Plain), the offset alternating value `a0 - sum (-1)^k ε_k / ...`
/// (EvenSwap), or the nega-q value (OddSwap).
pub fn point_value(x: &Representation, mode: SwapMode) -> Result<Enclosure> {
    if x.polarity() != mode.polarity() {
        return Err(Error::Domain(format!(
            "mode {mode:?} expects {:?} digits, got {:?}",
            mode.polarity(),
            x.polarity()
        )));
    }
    match mode {
        SwapMode::Plain | SwapMode::OddSwap => Ok(x.value()),
        SwapMode::EvenSwap => {
            let a0 = x.spec().a0_exact();
            Ok(Enclosure::exact(a0).sub(&x.value()))
        }
    }
}

/// Limit behavior of `prod_k q_k p_{i,k}` along the periodic structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProductClass {
    ToZero,
    NonZeroConstant,
    Divergent,
    Oscillating,
}

fn classify_product(pre_factors: &[Rational], block: &Rational) -> ProductClass {
    if pre_factors.iter().any(|f| f.is_zero()) || block.is_zero() {
        return ProductClass::ToZero;
    }
    let one = int(1);
    if block.abs() < one {
        ProductClass::ToZero
    } else if block == &one {
        ProductClass::NonZeroConstant
    } else if block == &(-one) {
        ProductClass::Oscillating
    } else {
        ProductClass::Divergent
    }
}

/// Predicate report for the non-differentiability theorem hypotheses,
/// decidable on the eventually periodic structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoremConditions {
    /// `p_{ε,n} * p_{ε-1,n} < 0` for all levels and ε != 0.
    pub alternation_holds: bool,
    /// First few violating (level, digit) pairs.
    pub alternation_violations: Vec<(usize, u32)>,
    /// Class of `prod q_k p_{0,k}`.
    pub product_first: ProductClass,
    /// Class of `prod q_k p_{q_k-1,k}`.
    pub product_last: ProductClass,
    /// The endpoint-slope disjunction `q_n p_{q_n-1,n} >= 1 or <= 1`, read
    /// with the undefined subscript replaced by `q_n`; trivially true under
    /// that reading (reported for completeness).
    pub endpoint_slope_disjunction: bool,
    /// Sign alternation holds and both limit products avoid zero.
    pub satisfied: bool,
}

/// Evaluates the theorem hypotheses on one structural period: sign
/// alternation down every column, and the classification of the first- and
/// last-entry products `prod q_k p_{.,k}` (the "limit != 0" requirement is
/// met exactly when the class is not `ToZero`).
pub fn theorem_conditions(p: &SalemMatrix, spec: &BaseSpec) -> Result<TheoremConditions> {
    p.validate()?;
    spec.validate()?;
    let pre = spec.preperiod.len().max(p.period_start());
    let lam = spec.period.len().lcm(&p.period_len());
    let horizon = pre + lam;
    for level in 1..=horizon {
        if p.column_at(level).len() != spec.base_at(level) as usize {
            return Err(Error::Domain(format!(
                "matrix/spec level-count mismatch at level {level}"
            )));
        }
    }
    let mut violations = Vec::new();
    for level in 1..=horizon {
        let col = p.column_at(level);
        for eps in 1..col.len() {
            if !(&col[eps] * &col[eps - 1]).is_negative() && violations.len() < 16 {
                violations.push((level, eps as u32));
            }
        }
    }
    let factor = |level: usize, last: bool| -> Rational {
        let col = p.column_at(level);
        let q = int(spec.base_at(level) as i64);
        let entry = if last { col.last().unwrap() } else { &col[0] };
        q * entry
    };
    let pre_first: Vec<Rational> = (1..=pre).map(|l| factor(l, false)).collect();
    let pre_last: Vec<Rational> = (1..=pre).map(|l| factor(l, true)).collect();
    let block_first: Rational = (pre + 1..=pre + lam).map(|l| factor(l, false)).product();
    let block_last: Rational = (pre + 1..=pre + lam).map(|l| factor(l, true)).product();
    let product_first = classify_product(&pre_first, &block_first);
    let product_last = classify_product(&pre_last, &block_last);
    let alternation_holds = violations.is_empty();
    let satisfied = alternation_holds
        && product_first != ProductClass::ToZero
        && product_last != ProductClass::ToZero;
    Ok(TheoremConditions {
        alternation_holds,
        alternation_violations: violations,
        product_first,
        product_last,
        endpoint_slope_disjunction: true,
        satisfied,
    })
}

/// One exact difference quotient of the approach family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientSample {
    /// Sample index `n`; the perturbed digit position is `n + 1`.
    pub level: usize,
    pub quotient: Rational,
}

/// Materializes the first `upto` digits of an exact-tail representation,
/// returning the remaining tail (rotated periodic block or zeros).
fn materialize_prefix(x: &Representation, upto: usize) -> Result<(Vec<u32>, Tail)> {
    let m = x.digits().len();
    let digits: Vec<u32> = (1..=upto)
        .map(|k| {
            x.digit_at(k)
                .ok_or_else(|| Error::Domain("prefix extends beyond truncated digits".into()))
        })
        .collect::<Result<_>>()?;
    let tail = match x.tail() {
        Tail::Zeros => Tail::Zeros,
        Tail::Truncated => Tail::Truncated,
        Tail::Periodic(b) => {
            if upto <= m {
                Tail::Periodic(b.clone())
            } else {
                let mut rb = b.clone();
                rb.rotate_left((upto - m) % b.len());
                Tail::Periodic(rb)
            }
        }
    };
    Ok((digits, tail))
}

/// Exact difference quotients `(F(x_n) - F(x_0)) / (x_n - x_0)` for the
/// approach family: `x_n` agrees with `x_0` through `n` digits and differs
/// minimally at digit `n+1` (same tail beyond), `n = 1..=depth`.
pub fn difference_quotient_probe(
    p: &SalemMatrix,
    mode: SwapMode,
    x0: &Representation,
    depth: usize,
) -> Result<Vec<QuotientSample>> {
    if matches!(x0.tail(), Tail::Truncated) {
        return Err(Error::Domain("exact quotients need an exact-tail base point".into()));
    }
    let f0 = eval_salem(x0, p, mode, 0)?;
    let v0 = point_value(x0, mode)?;
    let mut out = Vec::new();
    for n in 1..=depth {
        let pos = n + 1;
        let (mut digits, tail) = materialize_prefix(x0, pos)?;
        let base = x0.base_at(pos);
        let d = digits[pos - 1];
        digits[pos - 1] = if d + 1 < base { d + 1 } else { d - 1 };
        let xn = Representation::new(x0.spec().clone(), x0.polarity(), digits, tail)?;
        let fn_val = eval_salem(&xn, p, mode, 0)?;
        let vn = point_value(&xn, mode)?;
        let dx = vn.lo() - v0.lo();
        if dx.is_zero() {
            return Err(Error::Domain(format!("degenerate perturbation at digit {pos}")));
        }
        out.push(QuotientSample { level: n, quotient: (fn_val.lo() - f0.lo()) / dx });
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn graph_walk(
    p: &SalemMatrix,
    mode: SwapMode,
    spec: &BaseSpec,
    depth: usize,
    digits: &mut Vec<u32>,
    acc: Rational,
    prod: Rational,
    all_nonneg: bool,
    bound: &Rational,
    a0: &Rational,
    cells: &mut Vec<GraphCell>,
) -> Result<()> {
    if digits.len() == depth {
        let x_rep =
            Representation::new(spec.clone(), mode.polarity(), digits.clone(), Tail::Truncated)?;
        let hull = x_rep.value();
        let (x_lo, x_hi) = match mode {
            SwapMode::EvenSwap => (a0 - hull.hi(), a0 - hull.lo()),
            _ => (hull.lo().clone(), hull.hi().clone()),
        };
        let (y_lo, y_hi) = if all_nonneg {
            (acc.clone(), &acc + &prod)
        } else {
            let t = prod.abs() / (int(1) - bound);
            (&acc - &t, &acc + &t)
        };
        cells.push(GraphCell::new(x_lo, x_hi, y_lo, y_hi));
        return Ok(());
    }
    let level = digits.len() + 1;
    let b = match mode.polarity() {
        Polarity::NegaConstant => spec.cap,
        _ => spec.base_at(level),
    };
    for d in 0..b {
        let (bta, pe) = swapped_entry(p, mode, d, level)?;
        digits.push(d);
        graph_walk(
            p,
            mode,
            spec,
            depth,
            digits,
            &acc + &bta * &prod,
            &prod * &pe,
            all_nonneg,
            bound,
            a0,
            cells,
        )?;
        digits.pop();
    }
    Ok(())
}

/// One row per length-`depth` digit prefix: exact x-interval of the prefix
/// cylinder under the mode's system and an exact enclosure of the family
/// values over that cylinder, sorted by `x_lo`. For all-nonnegative
/// matrices the y-interval is the exact image hull `[A, A + prod p]`.
pub fn salem_graph_cells(
    p: &SalemMatrix,
    mode: SwapMode,
    spec: &BaseSpec,
    depth: usize,
    max_cells: u64,
) -> Result<Vec<GraphCell>> {
    spec.validate()?;
    p.validate()?;
    if depth == 0 {
        return Err(Error::Domain("depth must be at least 1".into()));
    }
    let mut count = BigInt::one();
    for k in 1..=depth {
        let b = match mode.polarity() {
            Polarity::NegaConstant => spec.cap,
            _ => spec.base_at(k),
        };
        count *= BigInt::from(b);
    }
    if count > BigInt::from(max_cells) {
        return Err(Error::ResourceBound(format!(
            "{count} prefixes of length {depth} exceed the budget of {max_cells}"
        )));
    }
    let all_nonneg = p.columns().iter().flatten().all(|e| !e.is_negative());
    let bound = p.bound();
    let a0 = spec.a0_exact();
    let mut cells: Vec<GraphCell> = Vec::new();
    let mut digits: Vec<u32> = Vec::new();
    graph_walk(
        p, mode, spec, depth, &mut digits, int(0), int(1), all_nonneg, &bound, &a0, &mut cells,
    )?;
    sort_cells(&mut cells);
    Ok(cells)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rat;

    fn classic() -> SalemMatrix {
        SalemMatrix::constant(vec![rat(1, 4), rat(3, 4)]).unwrap()
    }

    fn spec2() -> BaseSpec {
        BaseSpec::constant(2).unwrap()
    }

    fn pos_rep(spec: &BaseSpec, digits: Vec<u32>, tail: Tail) -> Representation {
        Representation::new(spec.clone(), Polarity::Positive, digits, tail).unwrap()
    }

    #[test]
    fn validate_matrix_cases() {
        assert!(classic().validate().is_ok());
        let bad_sum = SalemMatrix::constant(vec![rat(1, 2), rat(1, 2), rat(1, 2)]).unwrap();
        match bad_sum.validate() {
            Err(Error::Validation(msgs)) => assert!(msgs.iter().any(|m| m.starts_with("2°"))),
            other => panic!("expected 2° violation, got {other:?}"),
        }
        let bad_beta = SalemMatrix::constant(vec![rat(-1, 4), rat(1, 2), rat(3, 4)]).unwrap();
        match bad_beta.validate() {
            Err(Error::Validation(msgs)) => {
                assert!(msgs.iter().any(|m| m.starts_with("4°")));
                assert!(!msgs.iter().any(|m| m.starts_with("1°")));
                assert!(!msgs.iter().any(|m| m.starts_with("2°")));
            }
            other => panic!("expected 4° violation, got {other:?}"),
        }
    }

    #[test]
    fn beta_values() {
        let p = classic();
        assert_eq!(beta(&p, 0, 1).unwrap(), int(0));
        assert_eq!(beta(&p, 1, 3).unwrap(), rat(1, 4));
        let p3 = SalemMatrix::constant(vec![rat(1, 6), rat(1, 3), rat(1, 2)]).unwrap();
        assert_eq!(beta(&p3, 2, 1).unwrap(), rat(1, 2));
        assert!(beta(&p3, 3, 1).is_err());
    }

    #[test]
    fn classic_salem_values() {
        let p = classic();
        let spec = spec2();
        // digits 1,0,0,... stand for 1/2
        let x = pos_rep(&spec, vec![1], Tail::Zeros);
        assert_eq!(eval_salem(&x, &p, SwapMode::Plain, 0).unwrap(), Enclosure::exact(rat(1, 4)));
        // digits 1,1,0,... stand for 3/4
        let x = pos_rep(&spec, vec![1, 1], Tail::Zeros);
        assert_eq!(eval_salem(&x, &p, SwapMode::Plain, 0).unwrap(), Enclosure::exact(rat(7, 16)));
        // endpoints
        let zero = pos_rep(&spec, vec![], Tail::Zeros);
        assert_eq!(eval_salem(&zero, &p, SwapMode::Plain, 0).unwrap(), Enclosure::exact(int(0)));
        let one = pos_rep(&spec, vec![], Tail::Periodic(vec![1]));
        assert_eq!(one.value(), Enclosure::exact(int(1)));
        assert_eq!(eval_salem(&one, &p, SwapMode::Plain, 0).unwrap(), Enclosure::exact(int(1)));
    }

    #[test]
    fn uniform_matrix_is_identity() {
        let spec = BaseSpec::new(vec![2, 3], vec![2, 3], 3).unwrap();
        let p = SalemMatrix::uniform(&spec).unwrap();
        for digits in [vec![1u32, 2, 1], vec![0, 1], vec![1, 0, 0, 2]] {
            let x = pos_rep(&spec, digits, Tail::Zeros);
            assert_eq!(eval_salem(&x, &p, SwapMode::Plain, 0).unwrap(), x.value());
        }
    }

    #[test]
    fn truncated_enclosures_nest() {
        let p = classic();
        let spec = spec2();
        let digits = vec![1u32, 0, 1, 1, 0, 1];
        let full =
            Representation::new(spec.clone(), Polarity::Positive, digits, Tail::Truncated).unwrap();
        let mut prev: Option<Enclosure> = None;
        for m in 1..=6 {
            let enc = eval_salem(&full, &p, SwapMode::Plain, m).unwrap();
            if let Some(p_enc) = prev {
                assert!(p_enc.contains_enclosure(&enc), "m={m}");
            }
            prev = Some(enc);
        }
    }

    #[test]
    fn theorem_condition_examples() {
        let spec = spec2();
        // classic monotone matrix: alternation fails (3/16 > 0)
        let rep = theorem_conditions(&classic(), &spec).unwrap();
        assert!(!rep.alternation_holds);
        assert!(!rep.satisfied);

        // signed column over q = 3: alternation holds, products diverge
        let spec3 = BaseSpec::constant(3).unwrap();
        let p = SalemMatrix::constant(vec![rat(1, 2), rat(-1, 4), rat(3, 4)]).unwrap();
        assert!(p.validate().is_ok());
        let rep = theorem_conditions(&p, &spec3).unwrap();
        assert!(rep.alternation_holds);
        assert_eq!(rep.product_first, ProductClass::Divergent); // 3 * 1/2 = 3/2
        assert_eq!(rep.product_last, ProductClass::Divergent); // 3 * 3/4 = 9/4
        assert!(rep.satisfied);

        // uniform matrix: q * (1/q) = 1 exactly
        let pu = SalemMatrix::uniform(&spec3).unwrap();
        let rep = theorem_conditions(&pu, &spec3).unwrap();
        assert_eq!(rep.product_first, ProductClass::NonZeroConstant);
        assert!(!rep.alternation_holds);
    }

    #[test]
    fn difference_quotients_classic() {
        let p = classic();
        let spec = spec2();
        let x0 = pos_rep(&spec, vec![], Tail::Zeros);
        let samples = difference_quotient_probe(&p, SwapMode::Plain, &x0, 6).unwrap();
        // quotients (1/2)^(n+1), shrinking to zero
        for s in &samples {
            let expected = crate::numerics::rational_pow(&rat(1, 2), s.level as i64 + 1);
            assert_eq!(s.quotient, expected);
        }
    }

    #[test]
    fn difference_quotients_uniform_are_one() {
        let spec = BaseSpec::constant(3).unwrap();
        let p = SalemMatrix::uniform(&spec).unwrap();
        let x0 = pos_rep(&spec, vec![1, 2, 0, 1], Tail::Zeros);
        for s in difference_quotient_probe(&p, SwapMode::Plain, &x0, 5).unwrap() {
            assert_eq!(s.quotient, int(1));
        }
    }

    #[test]
    fn odd_swap_uniform_equals_constant_shift() {
        // with uniform columns the odd-swapped family collapses to
        // y + q/(q+1): digit complement at odd levels in base q
        let q = 4u32;
        let spec = BaseSpec::constant(q).unwrap();
        let p = SalemMatrix::uniform(&spec).unwrap();
        let shift = rat(q as i64, q as i64 + 1);
        for (digits, tail) in [
            (vec![], Tail::Zeros),
            (vec![1u32, 3], Tail::Zeros),
            (vec![2], Tail::Periodic(vec![0, 3])),
            (vec![], Tail::Periodic(vec![1, 2])),
        ] {
            let y =
                Representation::new(spec.clone(), Polarity::NegaConstant, digits, tail).unwrap();
            let lhs = eval_salem(&y, &p, SwapMode::OddSwap, 0).unwrap();
            let rhs = y.value().shift(&shift);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn even_swap_point_value() {
        // x = 1/3 = a0 over the dyadic alternating system, so the offset
        // representation stands for a0 - a0 = 0
        let spec = spec2();
        let x = Representation::new(
            spec.clone(),
            Polarity::Alternating,
            vec![],
            Tail::Periodic(vec![0, 1]),
        )
        .unwrap();
        let v = point_value(&x, SwapMode::EvenSwap).unwrap();
        assert_eq!(v, Enclosure::exact(int(0)));
    }

    #[test]
    fn graph_cells_plain_depth3() {
        let p = classic();
        let spec = spec2();
        let cells = salem_graph_cells(&p, SwapMode::Plain, &spec, 3, 1 << 20).unwrap();
        assert_eq!(cells.len(), 8);
        for w in cells.windows(2) {
            assert!(w[0].x_lo <= w[1].x_lo);
        }
        let lows: Vec<Rational> = cells.iter().map(|c| c.y_lo.clone()).collect();
        assert!(lows.contains(&int(0)));
        assert!(lows.contains(&rat(1, 4)));
        assert!(lows.contains(&rat(7, 16)));
    }

    #[test]
    fn reflection_is_involutive() {
        for mode in [SwapMode::EvenSwap, SwapMode::OddSwap] {
            for level in 1..=6usize {
                for base in [2u32, 3, 5] {
                    for d in 0..base {
                        let once = mode.reflect(d, base, level);
                        assert_eq!(mode.reflect(once, base, level), d);
                    }
                }
            }
        }
    }
}
