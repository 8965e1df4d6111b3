use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// Exact element `(a + b√d) / c` of a real quadratic field, `d > 0` not a square.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticSurd {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl QuadraticSurd {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::Domain("surd with zero denominator".into()));
        }
        if !d.is_positive() {
            return Err(Error::Domain("surd needs d > 0".into()));
        }
        let r = num_integer::Roots::sqrt(&d);
        if &r * &r == d {
            return Err(Error::Domain(format!("d = {d} is a perfect square")));
        }
        Ok(QuadraticSurd { a, b, c, d })
    }

    /// Product within the same field.
    pub fn mul(&self, other: &QuadraticSurd) -> Result<QuadraticSurd> {
        if self.d != other.d {
            return Err(Error::Domain("surds from different fields".into()));
        }
        let a = &self.a * &other.a + &self.b * &other.b * &self.d;
        let b = &self.a * &other.b + &self.b * &other.a;
        let c = &self.c * &other.c;
        Ok(QuadraticSurd { a, b, c, d: self.d.clone() }.reduced())
    }

    fn reduced(self) -> QuadraticSurd {
        let g = num_integer::Integer::gcd(&num_integer::Integer::gcd(&self.a, &self.b), &self.c);
        if g.is_zero() || g == BigInt::from(1) {
            return self;
        }
        QuadraticSurd { a: &self.a / &g, b: &self.b / &g, c: &self.c / &g, d: self.d }
    }

    /// Floating-point value, evaluated without subtractive cancellation.
    ///
    /// When `a` and `b√d` have opposite signs the value is rewritten through the
    /// conjugate as `(a² - b²d) / (c (a - b√d))`.
    pub fn to_f64(&self) -> f64 {
        let sd = self.d.to_f64().unwrap_or(f64::INFINITY).sqrt();
        let af = self.a.to_f64().unwrap_or(f64::NAN);
        let bf = self.b.to_f64().unwrap_or(f64::NAN);
        let cf = self.c.to_f64().unwrap_or(f64::NAN);
        if self.a.is_zero() || self.b.is_zero() || self.a.is_positive() == self.b.is_positive() {
            return (af + bf * sd) / cf;
        }
        let num = &self.a * &self.a - &self.b * &self.b * &self.d;
        num.to_f64().unwrap_or(f64::NAN) / (cf * (af - bf * sd))
    }
}

impl fmt::Display for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}*sqrt({}))/{}", self.a, self.b, self.d, self.c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(a: i64, b: i64, c: i64, d: i64) -> QuadraticSurd {
        QuadraticSurd::new(a.into(), b.into(), c.into(), d.into()).unwrap()
    }

    #[test]
    fn golden_ratio_inverse() {
        let g = s(-1, 1, 2, 5);
        assert!((g.to_f64() - 0.618_033_988_749_894_8).abs() < 1e-16);
        let g2 = g.mul(&g).unwrap();
        // g^2 = 1 - g
        assert!((g2.to_f64() - (1.0 - 0.618_033_988_749_894_8)).abs() < 1e-16);
    }

    #[test]
    fn cancellation_free() {
        // sqrt(10^16 + 1) - 10^8 ~ 5e-9
        let x = QuadraticSurd::new(
            BigInt::from(-100_000_000i64),
            1.into(),
            1.into(),
            BigInt::from(10_000_000_000_000_001i64),
        )
        .unwrap();
        assert!((x.to_f64() / 5e-9 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_squares() {
        assert!(QuadraticSurd::new(0.into(), 1.into(), 1.into(), 9.into()).is_err());
    }
}
