//! Double-double arithmetic (about 32 significant digits).
//!
//! Used where f64 loses too much to cancellation: assembly of the
//! monomial-basis operator matrix and the Bessel power series at large
//! argument. Values are unevaluated sums `hi + lo` with `|lo| <= ulp(hi)/2`.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

pub const PI: Dd = Dd { hi: std::f64::consts::PI, lo: 1.224646799147353207e-16 };
pub const TWO_PI: Dd = Dd { hi: std::f64::consts::TAU, lo: 2.449293598294706414e-16 };
pub const HALF_PI: Dd = Dd { hi: std::f64::consts::FRAC_PI_2, lo: 6.123233995736766036e-17 };
pub const LN2: Dd = Dd { hi: std::f64::consts::LN_2, lo: 2.319046813846299558e-17 };

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    #[inline]
    pub const fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    /// Exact for integers below 2^106.
    pub fn from_u128(n: u128) -> Dd {
        let hi = n as f64;
        // `hi` may round up past n, so take the signed difference.
        let diff = n as i128 - hi as i128;
        let (h, l) = quick_two_sum(hi, diff as f64);
        Dd { hi: h, lo: l }
    }

    pub fn from_i64(n: i64) -> Dd {
        let hi = n as f64;
        let diff = n as i128 - hi as i128;
        let (h, l) = quick_two_sum(hi, diff as f64);
        Dd { hi: h, lo: l }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn abs(self) -> Dd {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    #[inline]
    pub fn mul_f64(self, b: f64) -> Dd {
        let (p, e) = two_prod(self.hi, b);
        let e = e + self.lo * b;
        let (h, l) = quick_two_sum(p, e);
        Dd { hi: h, lo: l }
    }

    #[inline]
    pub fn sqr(self) -> Dd {
        self * self
    }

    pub fn recip(self) -> Dd {
        Dd::ONE / self
    }

    pub fn sqrt(self) -> Dd {
        if self.hi <= 0.0 {
            return Dd::ZERO;
        }
        let x = 1.0 / self.hi.sqrt();
        let ax = self.hi * x;
        let (p, e) = two_prod(ax, ax);
        let diff = (self - Dd { hi: p, lo: e }).hi;
        let (h, l) = two_sum(ax, diff * (x * 0.5));
        Dd { hi: h, lo: l }
    }

    pub fn ldexp(self, e: i32) -> Dd {
        let f = 2f64.powi(e);
        Dd { hi: self.hi * f, lo: self.lo * f }
    }

    pub fn exp(self) -> Dd {
        if self.hi > 709.0 {
            return Dd::from_f64(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return Dd::ZERO;
        }
        let k = (self.hi / LN2.hi).round();
        let r = self - LN2.mul_f64(k);
        // exp(r) = (exp(r / 512))^512, computed on expm1 to keep digits.
        let r = r.ldexp(-9);
        let mut term = r;
        let mut sum = r;
        let mut i = 2.0;
        loop {
            term = (term * r) / Dd::from_f64(i);
            sum = sum + term;
            if term.hi.abs() < 1e-35 * sum.hi.abs().max(1e-300) || i > 30.0 {
                break;
            }
            i += 1.0;
        }
        for _ in 0..9 {
            sum = sum.mul_f64(2.0) + sum.sqr();
        }
        (sum + Dd::ONE).ldexp(k as i32)
    }

    /// Natural logarithm of a positive value.
    pub fn ln(self) -> Dd {
        if self.hi <= 0.0 {
            return Dd::from_f64(f64::NAN);
        }
        let mut y = Dd::from_f64(self.hi.ln());
        for _ in 0..2 {
            y = y + self * (-y).exp() - Dd::ONE;
        }
        y
    }

    /// Simultaneous sine and cosine.
    pub fn sin_cos(self) -> (Dd, Dd) {
        let q = (self.hi / TWO_PI.hi).round();
        let r = self - TWO_PI.mul_f64(q);
        let k = (r.hi / HALF_PI.hi).round();
        let r = r - HALF_PI.mul_f64(k);
        let (s, c) = sin_cos_taylor(r);
        match (k as i64).rem_euclid(4) {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }
}

fn sin_cos_taylor(r: Dd) -> (Dd, Dd) {
    let r2 = r.sqr();
    let mut term = r;
    let mut s = r;
    let mut i = 1.0;
    loop {
        term = -(term * r2) / Dd::from_f64((i + 1.0) * (i + 2.0));
        s = s + term;
        i += 2.0;
        if term.hi.abs() < 1e-36 || i > 60.0 {
            break;
        }
    }
    let mut term = Dd::ONE;
    let mut c = Dd::ONE;
    let mut i = 0.0;
    loop {
        term = -(term * r2) / Dd::from_f64((i + 1.0) * (i + 2.0));
        c = c + term;
        i += 2.0;
        if term.hi.abs() < 1e-36 || i > 60.0 {
            break;
        }
    }
    (s, c)
}

impl Add for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, b: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let s2 = s2 + t1;
        let (s1, s2) = quick_two_sum(s1, s2);
        let s2 = s2 + t2;
        let (h, l) = quick_two_sum(s1, s2);
        Dd { hi: h, lo: l }
    }
}

impl Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Neg for Dd {
    type Output = Dd;
    #[inline]
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Mul for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, b: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (h, l) = quick_two_sum(p, e);
        Dd { hi: h, lo: l }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (h, l) = quick_two_sum(q1, q2);
        Dd { hi: h, lo: l } + Dd::from_f64(q3)
    }
}

/// Complex number with double-double parts.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CDd {
    pub re: Dd,
    pub im: Dd,
}

impl CDd {
    pub const ZERO: CDd = CDd { re: Dd::ZERO, im: Dd::ZERO };
    pub const ONE: CDd = CDd { re: Dd::ONE, im: Dd::ZERO };

    pub fn new(re: Dd, im: Dd) -> CDd {
        CDd { re, im }
    }

    pub fn from_c64(z: Complex64) -> CDd {
        CDd { re: Dd::from_f64(z.re), im: Dd::from_f64(z.im) }
    }

    pub fn from_real(x: Dd) -> CDd {
        CDd { re: x, im: Dd::ZERO }
    }

    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn scale(self, k: Dd) -> CDd {
        CDd { re: self.re * k, im: self.im * k }
    }

    pub fn norm_sqr(self) -> Dd {
        self.re.sqr() + self.im.sqr()
    }

    pub fn abs_f64(self) -> f64 {
        self.re.to_f64().hypot(self.im.to_f64())
    }

    pub fn exp(self) -> CDd {
        let m = self.re.exp();
        let (s, c) = self.im.sin_cos();
        CDd { re: m * c, im: m * s }
    }

    /// `n^(-z)` for a positive integer base given its logarithm.
    pub fn pow_neg_from_ln(z: CDd, ln_n: Dd) -> CDd {
        CDd { re: -(z.re * ln_n), im: -(z.im * ln_n) }.exp()
    }
}

impl Add for CDd {
    type Output = CDd;
    #[inline]
    fn add(self, b: CDd) -> CDd {
        CDd { re: self.re + b.re, im: self.im + b.im }
    }
}

impl Sub for CDd {
    type Output = CDd;
    #[inline]
    fn sub(self, b: CDd) -> CDd {
        CDd { re: self.re - b.re, im: self.im - b.im }
    }
}

impl Neg for CDd {
    type Output = CDd;
    fn neg(self) -> CDd {
        CDd { re: -self.re, im: -self.im }
    }
}

impl Mul for CDd {
    type Output = CDd;
    #[inline]
    fn mul(self, b: CDd) -> CDd {
        CDd { re: self.re * b.re - self.im * b.im, im: self.re * b.im + self.im * b.re }
    }
}

impl Div for CDd {
    type Output = CDd;
    fn div(self, b: CDd) -> CDd {
        let d = b.norm_sqr();
        let re = (self.re * b.re + self.im * b.im) / d;
        let im = (self.im * b.re - self.re * b.im) / d;
        CDd { re, im }
    }
}
