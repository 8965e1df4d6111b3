use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::dd::Dd;

const COUNT: usize = 64;

/// `B_{2k}/(2k)!` for `k = 1..=COUNT`, exact, then rounded to double-double.
fn table() -> &'static Vec<(Dd, Dd)> {
    static TABLE: OnceLock<Vec<(Dd, Dd)>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let b = bernoulli_numbers(2 * COUNT);
        let mut fact = BigInt::one();
        let mut out = Vec::with_capacity(COUNT);
        for k in 1..=COUNT {
            let n = 2 * k;
            fact *= BigInt::from((n - 1) * n);
            let plain = &b[n];
            let scaled = plain / BigRational::from_integer(fact.clone());
            out.push((rational_to_dd(plain), rational_to_dd(&scaled)));
        }
        out
    })
}

/// Bernoulli numbers `B_0..=B_n` (with `B_1 = -1/2`) via the Akiyama-Tanigawa recurrence.
fn bernoulli_numbers(n: usize) -> Vec<BigRational> {
    let mut a: Vec<BigRational> = Vec::with_capacity(n + 1);
    let mut out = Vec::with_capacity(n + 1);
    for m in 0..=n {
        a.push(BigRational::new(BigInt::one(), BigInt::from(m + 1)));
        for j in (1..=m).rev() {
            let diff = &a[j - 1] - &a[j];
            a[j - 1] = diff * BigRational::from_integer(BigInt::from(j));
        }
        out.push(a[0].clone());
    }
    // The recurrence yields B_1 = +1/2.
    if n >= 1 {
        out[1] = -out[1].clone();
    }
    out
}

fn bigint_to_dd(n: &BigInt) -> Dd {
    if n.is_zero() {
        return Dd::ZERO;
    }
    let hi = n.to_f64().unwrap_or(f64::INFINITY);
    if !hi.is_finite() {
        return Dd::from_f64(hi);
    }
    let rest = n - float_to_bigint(hi);
    let lo = rest.to_f64().unwrap_or(0.0);
    Dd { hi, lo } + Dd::ZERO
}

fn float_to_bigint(x: f64) -> BigInt {
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let mant = if exp == 0 { (bits & ((1 << 52) - 1)) << 1 } else { (bits & ((1 << 52) - 1)) | (1 << 52) };
    let e = exp - 1075;
    let mut v = BigInt::from(mant);
    if e >= 0 {
        v <<= e as usize;
    } else {
        v >>= (-e) as usize;
    }
    if x < 0.0 {
        -v
    } else {
        v
    }
}

fn rational_to_dd(r: &BigRational) -> Dd {
    let num = bigint_to_dd(r.numer());
    let den = bigint_to_dd(r.denom());
    num / den
}

/// `B_{2k}` and `B_{2k}/(2k)!` in double precision, `1 <= k <= 64`.
pub fn bernoulli_2k(k: usize) -> (f64, f64) {
    let (b, s) = table()[k - 1];
    (b.to_f64(), s.to_f64())
}

/// `B_{2k}/(2k)!` in double-double precision, `1 <= k <= 64`.
pub fn bernoulli_2k_dd(k: usize) -> Dd {
    table()[k - 1].1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_values() {
        let b = bernoulli_numbers(12);
        assert_eq!(b[2], BigRational::new(1.into(), 6.into()));
        assert_eq!(b[4], BigRational::new((-1).into(), 30.into()));
        assert_eq!(b[12], BigRational::new((-691).into(), 2730.into()));
        assert!(b[3].is_zero());
        assert_eq!(bernoulli_2k(1).0, 1.0 / 6.0);
        assert!((bernoulli_2k(6).0 + 691.0 / 2730.0).abs() < 1e-16);
    }

    #[test]
    fn scaled_values_match_double() {
        // B_20/20! = -174611/330 / 20!
        let expect = -174611.0 / 330.0 / 2432902008176640000.0;
        assert!((bernoulli_2k(10).1 / expect - 1.0).abs() < 1e-15);
    }
}
