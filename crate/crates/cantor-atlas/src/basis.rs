//! Base sequences `Q = (q_k)`: eventually periodic positive-integer
//! sequences with every entry at least 2, together with a cap `q >= q_k`.
//! The cap is the constant base of the image system of the digit map.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{int, Enclosure, Rational};

/// An eventually periodic base sequence plus its cap.
///
/// The effective sequence is `preperiod` followed by `period` repeated
/// forever; levels are 1-based. A constant sequence is a period of length 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BaseSpec {
    pub preperiod: Vec<u32>,
    pub period: Vec<u32>,
    pub cap: u32,
}

impl BaseSpec {
    pub fn new(preperiod: Vec<u32>, period: Vec<u32>, cap: u32) -> Result<Self> {
        let spec = Self { preperiod, period, cap };
        spec.validate()?;
        Ok(spec)
    }

    /// The constant sequence `q, q, q, ...` with cap `q`.
    pub fn constant(q: u32) -> Result<Self> {
        Self::new(Vec::new(), vec![q], q)
    }

    /// Checks every structural invariant, reporting all violations at once.
    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if self.period.is_empty() {
            problems.push("period must be nonempty".to_string());
        }
        for (i, &q) in self.preperiod.iter().enumerate() {
            if q <= 1 {
                problems.push(format!("q_{} <= 1 (preperiod entry {q})", i + 1));
            }
            if q > self.cap {
                problems.push(format!("cap {} < q_{} = {q}", self.cap, i + 1));
            }
        }
        for (i, &q) in self.period.iter().enumerate() {
            if q <= 1 {
                problems.push(format!(
                    "q_{} <= 1 (period entry {q})",
                    self.preperiod.len() + i + 1
                ));
            }
            if q > self.cap {
                problems.push(format!(
                    "cap {} < q_{} = {q}",
                    self.cap,
                    self.preperiod.len() + i + 1
                ));
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(problems))
        }
    }

    /// Base at 1-based level `k`.
    pub fn base_at(&self, level: usize) -> u32 {
        assert!(level >= 1, "levels are 1-based");
        let idx = level - 1;
        if idx < self.preperiod.len() {
            self.preperiod[idx]
        } else {
            self.period[(idx - self.preperiod.len()) % self.period.len()]
        }
    }

    /// Digit alphabet at level `k`.
    pub fn alphabet(&self, level: usize) -> Alphabet {
        Alphabet {
            level,
            size: self.base_at(level),
        }
    }

    /// The spec whose effective sequence drops the first `n` entries
    /// (rotating the period as needed); cap unchanged.
    pub fn shifted(&self, n: usize) -> BaseSpec {
        if n == 0 {
            return self.clone();
        }
        if n < self.preperiod.len() {
            return BaseSpec {
                preperiod: self.preperiod[n..].to_vec(),
                period: self.period.clone(),
                cap: self.cap,
            };
        }
        let r = (n - self.preperiod.len()) % self.period.len();
        let mut period = self.period.clone();
        period.rotate_left(r);
        BaseSpec {
            preperiod: Vec::new(),
            period,
            cap: self.cap,
        }
    }

    /// True iff every entry equals the cap (the image system coincides with
    /// the source system level by level).
    pub fn is_constant_cap(&self) -> bool {
        self.preperiod.iter().chain(&self.period).all(|&q| q == self.cap)
    }

    /// `q_1 q_2 ... q_m`.
    pub fn product(&self, m: usize) -> BigInt {
        let mut p = BigInt::one();
        for k in 1..=m {
            p *= BigInt::from(self.base_at(k));
        }
        p
    }

    /// Sign-aligned structural period: the effective sequence repeats with
    /// this period beyond the preperiod, and it is even so that the signs of
    /// the alternating expansion repeat along with the bases.
    pub fn alignment(&self) -> usize {
        self.period.len().lcm(&2)
    }

    /// Right endpoint of the alternating system's domain,
    /// `a0 = sum_{k>=1} (q_{2k} - 1) / (q_1 ... q_{2k})`, in closed form.
    ///
    /// Eventual periodicity makes this a finite sum plus one geometric
    /// series over an even-aligned block, hence exact.
    pub fn a0_exact(&self) -> Rational {
        // explicit even-position terms up to N (N even, tail fully periodic)
        let pre = self.preperiod.len();
        let n_explicit = pre + (pre & 1);
        let mut sum = int(0);
        let mut prod = BigInt::one();
        for k in 1..=n_explicit {
            prod *= BigInt::from(self.base_at(k));
            if k % 2 == 0 {
                sum += Rational::new(BigInt::from(self.base_at(k) - 1), prod.clone());
            }
        }
        // one even-aligned period block starting at level N+1
        let block_len = self.alignment();
        let mut block = int(0);
        let mut bp = BigInt::one();
        for j in 1..=block_len {
            bp *= BigInt::from(self.base_at(n_explicit + j));
            if j % 2 == 0 {
                block += Rational::new(BigInt::from(self.base_at(n_explicit + j) - 1), bp.clone());
            }
        }
        let ratio = Rational::new(BigInt::one(), bp); // 1 / (q_{N+1} ... q_{N+block})
        let tail = block / (int(1) - ratio);
        sum + tail * Rational::new(BigInt::one(), prod)
    }

    /// Enclosure form of [`Self::a0_exact`]; always width zero here since the
    /// sequence is eventually periodic. `tol` must be positive.
    pub fn a0(&self, tol: &Rational) -> Result<Enclosure> {
        if !num_traits::Signed::is_positive(tol) {
            return Err(Error::Domain("tolerance must be positive".into()));
        }
        Ok(Enclosure::exact(self.a0_exact()))
    }

    /// The closed domain `[a0 - 1, a0]` of the alternating expansion.
    pub fn domain(&self) -> (Rational, Rational) {
        let a0 = self.a0_exact();
        (&a0 - int(1), a0)
    }
}

/// The digit alphabet `{0, 1, ..., q_n - 1}` of one level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    pub level: usize,
    pub size: u32,
}

impl Alphabet {
    pub fn digits(&self) -> impl Iterator<Item = u32> {
        0..self.size
    }

    pub fn contains(&self, digit: u32) -> bool {
        digit < self.size
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rat;

    #[test]
    fn validation() {
        assert!(BaseSpec::new(vec![], vec![2], 2).is_ok());
        assert!(BaseSpec::new(vec![2, 3], vec![2, 3], 3).is_ok());
        match BaseSpec::new(vec![1], vec![2], 2) {
            Err(Error::Validation(msgs)) => {
                assert!(msgs.iter().any(|m| m.contains("q_1 <= 1")));
            }
            other => panic!("expected validation error, got {other:?}"),
        }
        assert!(BaseSpec::new(vec![], vec![], 2).is_err());
        assert!(BaseSpec::new(vec![], vec![5], 3).is_err());
    }

    #[test]
    fn a0_closed_forms() {
        assert_eq!(BaseSpec::constant(2).unwrap().a0_exact(), rat(1, 3));
        for q in 2..=7u32 {
            let spec = BaseSpec::constant(q).unwrap();
            assert_eq!(spec.a0_exact(), rat(1, q as i64 + 1));
        }
        let spec23 = BaseSpec::new(vec![], vec![2, 3], 3).unwrap();
        assert_eq!(spec23.a0_exact(), rat(2, 5));
        let pre = BaseSpec::new(vec![2], vec![3], 3).unwrap();
        assert_eq!(pre.a0_exact(), rat(3, 8));
    }

    #[test]
    fn a0_brute_force_agreement() {
        // partial sums of the defining series vs the closed form
        for spec in [
            BaseSpec::constant(2).unwrap(),
            BaseSpec::new(vec![], vec![2, 3], 3).unwrap(),
            BaseSpec::new(vec![5, 2], vec![4, 2, 3], 5).unwrap(),
        ] {
            let mut partial = int(0);
            for k in 1..=40usize {
                partial += Rational::new(
                    BigInt::from(spec.base_at(2 * k) - 1),
                    spec.product(2 * k),
                );
            }
            let exact = spec.a0_exact();
            assert!(&exact - &partial >= int(0));
            assert!(&exact - &partial < rat(1, 1_000_000_000));
        }
    }

    #[test]
    fn a0_recurrence_in_first_two_levels() {
        // a0(Q) = (q2 - 1)/(q1 q2) + a0(shift 2)/(q1 q2)
        for spec in [
            BaseSpec::new(vec![2, 4], vec![3, 2], 4).unwrap(),
            BaseSpec::new(vec![], vec![2, 3, 4], 4).unwrap(),
            BaseSpec::constant(5).unwrap(),
        ] {
            let q1 = int(spec.base_at(1) as i64);
            let q2 = int(spec.base_at(2) as i64);
            let lhs = spec.a0_exact();
            let rhs = (&q2 - int(1)) / (&q1 * &q2) + spec.shifted(2).a0_exact() / (&q1 * &q2);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn a0_in_unit_interval() {
        for spec in [
            BaseSpec::constant(2).unwrap(),
            BaseSpec::new(vec![2], vec![3], 3).unwrap(),
            BaseSpec::new(vec![], vec![2, 3], 3).unwrap(),
        ] {
            let a0 = spec.a0_exact();
            assert!(a0 > int(0) && a0 < int(1));
        }
    }

    #[test]
    fn shifted_sequences() {
        let spec = BaseSpec::new(vec![2, 3], vec![4, 5], 5).unwrap();
        assert_eq!(spec.shifted(0), spec);
        assert_eq!(
            spec.shifted(2),
            BaseSpec { preperiod: vec![], period: vec![4, 5], cap: 5 }
        );
        let rot = BaseSpec::new(vec![], vec![2, 3], 3).unwrap().shifted(1);
        for k in 1..=10 {
            assert_eq!(rot.base_at(k), if k % 2 == 1 { 3 } else { 2 });
        }
    }
}
