//! Exact rational arithmetic for the coefficient tables.
//!
//! Thin wrapper over `num::BigRational` plus a small bivariate polynomial
//! type used to carry the rational coefficient tables into either `f64` or
//! interval evaluation.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

use crate::verified::Interval;

/// Arbitrary-precision rational, always in reduced form with positive
/// denominator (enforced by the underlying representation).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ExactRational(pub BigRational);

impl ExactRational {
    pub fn from_integers(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_int(n: i64) -> Self {
        Self(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    pub fn one() -> Self {
        Self(BigRational::one())
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().expect("rational out of f64 range")
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// Tightest representable enclosure of the exact value.
    pub fn to_interval(&self) -> Interval {
        let x = self.to_f64();
        // f64 conversion rounds to nearest; one ulp on each side encloses it.
        Interval::new(next_down(x), next_up(x)).expect("finite rational")
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Self(&self.0 + &rhs.0)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        Self(&self.0 - &rhs.0)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        Self(&self.0 * &rhs.0)
    }

    pub fn div(&self, rhs: &Self) -> Self {
        assert!(!rhs.0.is_zero(), "division by zero rational");
        Self(&self.0 / &rhs.0)
    }
}

impl std::fmt::Display for ExactRational {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub(crate) fn next_up(x: f64) -> f64 {
    if x.is_nan() || x == f64::INFINITY {
        return x;
    }
    let bits = if x == 0.0 { 1 } else if x > 0.0 { x.to_bits() + 1 } else { x.to_bits() - 1 };
    f64::from_bits(bits)
}

pub(crate) fn next_down(x: f64) -> f64 {
    if x.is_nan() || x == f64::NEG_INFINITY {
        return x;
    }
    if x == 0.0 {
        return -f64::from_bits(1);
    }
    let bits = if x > 0.0 { x.to_bits() - 1 } else { x.to_bits() + 1 };
    f64::from_bits(bits)
}

/// Exact weight `omega_n^alpha` for rational `alpha` in `[0, 1)`:
/// `-binom(alpha, n) (-1)^n` for positive `alpha`, `1/n` for `alpha = 0`.
pub fn weight_exact(alpha: &ExactRational, n: u32) -> ExactRational {
    assert!(n >= 1, "weights are indexed from n = 1");
    if alpha.0.is_zero() {
        return ExactRational::from_integers(1, n as i64);
    }
    // binom(alpha, n) = alpha (alpha-1) ... (alpha-n+1) / n!
    let mut b = BigRational::one();
    for i in 0..n {
        b *= &alpha.0 - BigRational::from_integer(BigInt::from(i));
        b /= BigRational::from_integer(BigInt::from(i + 1));
    }
    let sign = if n % 2 == 0 { -1 } else { 1 };
    ExactRational(b * BigRational::from_integer(BigInt::from(sign)))
}

/// Polynomial in two variables with exact rational coefficients,
/// `coeffs[i][j]` multiplying `s^i q^j`.
#[derive(Debug, Clone, PartialEq)]
pub struct BiPoly {
    pub coeffs: Vec<Vec<BigRational>>,
}

impl BiPoly {
    pub fn zero() -> Self {
        Self { coeffs: vec![] }
    }

    pub fn constant(c: BigRational) -> Self {
        Self { coeffs: vec![vec![c]] }
    }

    pub fn from_term(c: BigRational, s_pow: usize, q_pow: usize) -> Self {
        let mut coeffs = vec![vec![BigRational::zero(); q_pow + 1]; s_pow + 1];
        coeffs[s_pow][q_pow] = c;
        Self { coeffs }
    }

    fn get(&self, i: usize, j: usize) -> BigRational {
        self.coeffs
            .get(i)
            .and_then(|row| row.get(j))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let ni = self.coeffs.len().max(rhs.coeffs.len());
        let nj = self
            .coeffs
            .iter()
            .chain(rhs.coeffs.iter())
            .map(|r| r.len())
            .max()
            .unwrap_or(0);
        let mut out = vec![vec![BigRational::zero(); nj]; ni];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, c) in row.iter_mut().enumerate() {
                *c = self.get(i, j) + rhs.get(i, j);
            }
        }
        Self { coeffs: out }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Self::zero();
        }
        let ni = self.coeffs.len() + rhs.coeffs.len() - 1;
        let nj = self.coeffs.iter().map(|r| r.len()).max().unwrap_or(1)
            + rhs.coeffs.iter().map(|r| r.len()).max().unwrap_or(1)
            - 1;
        let mut out = vec![vec![BigRational::zero(); nj]; ni];
        for (i1, row1) in self.coeffs.iter().enumerate() {
            for (j1, c1) in row1.iter().enumerate() {
                if c1.is_zero() {
                    continue;
                }
                for (i2, row2) in rhs.coeffs.iter().enumerate() {
                    for (j2, c2) in row2.iter().enumerate() {
                        if c2.is_zero() {
                            continue;
                        }
                        out[i1 + i2][j1 + j2] += c1 * c2;
                    }
                }
            }
        }
        Self { coeffs: out }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .map(|row| row.iter().map(|x| x * c).collect())
                .collect(),
        }
    }

    /// Substitutes `s -> 1 - s`, exactly.
    pub fn sub_one_minus_s(&self) -> Self {
        let mut out = Self::zero();
        // (1-s)^i expanded by the binomial theorem
        for (i, row) in self.coeffs.iter().enumerate() {
            let mut pow = BiPoly::constant(BigRational::one());
            let one_minus_s = BiPoly {
                coeffs: vec![vec![BigRational::one()], vec![-BigRational::one()]],
            };
            for _ in 0..i {
                pow = pow.mul(&one_minus_s);
            }
            for (j, c) in row.iter().enumerate() {
                if !c.is_zero() {
                    out = out.add(&pow.mul(&BiPoly::from_term(c.clone(), 0, j)));
                }
            }
        }
        out
    }

    /// Divides by `q`, panicking if any `q^0` coefficient is nonzero.
    pub fn div_q(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|row| {
                if let Some(c0) = row.first() {
                    assert!(c0.is_zero(), "polynomial not divisible by q");
                }
                row.iter().skip(1).cloned().collect()
            })
            .collect();
        Self { coeffs }
    }

    pub fn d_ds(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        Self {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, row)| {
                    row.iter()
                        .map(|c| c * BigRational::from_integer(BigInt::from(i)))
                        .collect()
                })
                .collect(),
        }
    }

    pub fn d_dq(&self) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .skip(1)
                        .map(|(j, c)| c * BigRational::from_integer(BigInt::from(j)))
                        .collect()
                })
                .collect(),
        }
    }

    pub fn eval_exact(&self, s: &ExactRational, q: &ExactRational) -> ExactRational {
        let mut acc = BigRational::zero();
        for row in self.coeffs.iter().rev() {
            let mut racc = BigRational::zero();
            for c in row.iter().rev() {
                racc = racc * &q.0 + c;
            }
            acc = acc * &s.0 + racc;
        }
        ExactRational(acc)
    }

    pub fn eval_f64(&self, s: f64, q: f64) -> f64 {
        let mut acc = 0.0;
        for row in self.coeffs.iter().rev() {
            let mut racc = 0.0;
            for c in row.iter().rev() {
                racc = racc * q + c.to_f64().unwrap();
            }
            acc = acc * s + racc;
        }
        acc
    }

    /// Conversion for interval evaluation: each coefficient becomes its
    /// tightest `f64` enclosure.
    pub fn to_interval_coeffs(&self) -> Vec<Vec<Interval>> {
        self.coeffs
            .iter()
            .map(|row| {
                row.iter()
                    .map(|c| ExactRational(c.clone()).to_interval())
                    .collect()
            })
            .collect()
    }
}
