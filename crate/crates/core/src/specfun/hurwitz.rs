use std::sync::OnceLock;

use num_complex::Complex64;

use super::bernoulli::{bernoulli_2k, bernoulli_2k_dd};
use super::dd::{CDd, Dd};
use crate::{Error, Result};

/// Hurwitz zeta `ζ(w, q) = Σ_{n>=0} (n+q)^{-w}` for real `q > 0`, `w != 1`.
///
/// Euler-Maclaurin summation: direct terms until `q + N` is comfortably larger
/// than `|w|`, then the integral, half-term and Bernoulli corrections.
pub fn hurwitz_zeta(w: Complex64, q: f64) -> Result<Complex64> {
    if !(q > 0.0) || !q.is_finite() {
        return Err(Error::Domain(format!("hurwitz_zeta needs q > 0, got {q}")));
    }
    if w == Complex64::new(1.0, 0.0) {
        return Err(Error::Pole("hurwitz_zeta at w = 1".into()));
    }
    if !(w.re.is_finite() && w.im.is_finite()) {
        return Err(Error::Domain(format!("hurwitz_zeta of non-finite {w}")));
    }
    let start = 30f64.max(1.5 * w.norm() + 10.0);
    let n = (start - q).ceil().max(0.0) as usize;
    let mut direct = Complex64::new(0.0, 0.0);
    for k in (0..n).rev() {
        direct += (-w * (q + k as f64).ln()).exp();
    }
    let a = q + n as f64;
    let ln_a = a.ln();
    let a_mw = (-w * ln_a).exp();
    let mut tail = a * a_mw / (w - 1.0) + 0.5 * a_mw;
    // term_k = B_{2k}/(2k)! (w)_{2k-1} a^{-w-2k+1}
    let mut rising = w;
    let mut pow = a_mw / a;
    let mut converged = false;
    for k in 1..=40 {
        let term = bernoulli_2k(k).1 * rising * pow;
        tail += term;
        // values near the underflow threshold are only resolved absolutely
        let total = (direct + tail).norm();
        if term.norm() < 1e-17 * total || total < 1e-280 {
            converged = true;
            break;
        }
        let kk = 2.0 * k as f64;
        rising *= (w + (kk - 1.0)) * (w + kk);
        pow /= a * a;
    }
    if !converged {
        return Err(Error::NonConvergence(format!("hurwitz_zeta({w}, {q})")));
    }
    let z = direct + tail;
    crate::check_finite(z, "hurwitz_zeta")
}

/// Riemann zeta `ζ(s)` for `s != 1`.
pub fn riemann_zeta(s: Complex64) -> Result<Complex64> {
    hurwitz_zeta(s, 1.0)
}

fn ln_table() -> &'static Vec<Dd> {
    static T: OnceLock<Vec<Dd>> = OnceLock::new();
    T.get_or_init(|| (0..512).map(|n| if n == 0 { Dd::ZERO } else { Dd::from_f64(n as f64).ln() }).collect())
}

fn ln_int(n: u64) -> Dd {
    let t = ln_table();
    if (n as usize) < t.len() {
        t[n as usize]
    } else {
        Dd::from_f64(n as f64).ln()
    }
}

/// `ζ(w, q)` for a positive integer `q`, in double-double precision.
pub fn hurwitz_zeta_dd(w: CDd, q: u64) -> Result<CDd> {
    if q == 0 {
        return Err(Error::Domain("hurwitz_zeta_dd needs q >= 1".into()));
    }
    let wm1 = w - CDd::ONE;
    if wm1.re.hi == 0.0 && wm1.im.hi == 0.0 {
        return Err(Error::Pole("hurwitz_zeta_dd at w = 1".into()));
    }
    let wabs = w.abs_f64();
    let start = 50f64.max(1.5 * wabs + 10.0);
    let n = (start - q as f64).ceil().max(0.0) as u64;
    let mut direct = CDd::ZERO;
    for k in (0..n).rev() {
        direct = direct + CDd::pow_neg_from_ln(w, ln_int(q + k));
    }
    let a = q + n;
    let ad = Dd::from_f64(a as f64);
    let a_mw = CDd::pow_neg_from_ln(w, ln_int(a));
    let mut tail = a_mw.scale(ad) / wm1 + a_mw.scale(Dd::from_f64(0.5));
    let inv_a = ad.recip();
    let inv_a2 = inv_a.sqr();
    let mut rising = w;
    let mut pow = a_mw.scale(inv_a);
    let mut converged = false;
    for k in 1..=64 {
        let term = (rising * pow).scale(bernoulli_2k_dd(k));
        tail = tail + term;
        let total = (direct + tail).abs_f64();
        if term.abs_f64() < 1e-34 * total {
            converged = true;
            break;
        }
        let kk = Dd::from_f64(2.0 * k as f64);
        let f1 = w + CDd::from_real(kk - Dd::ONE);
        let f2 = w + CDd::from_real(kk);
        rising = rising * f1 * f2;
        pow = pow.scale(inv_a2);
    }
    if !converged {
        return Err(Error::NonConvergence("hurwitz_zeta_dd".into()));
    }
    Ok(direct + tail)
}

/// `ζ(w) - 1 = ζ(w, 2)` without subtractive cancellation.
pub fn zeta_minus_one_dd(w: CDd) -> Result<CDd> {
    hurwitz_zeta_dd(w, 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn reference_values() {
        // Reference values from an independent arbitrary-precision evaluation.
        let cases = [
            (c(2.0, 0.0), 1.0, c(1.6449340668482264365, 0.0)),
            (c(2.0, 3.0), 2.5, c(-0.16142885306795439375, 0.04650541606102417331)),
            (c(1.5, 100.0), 1.0, c(1.310259881673752173, -0.067266335221653206014)),
            (c(3.3, 0.0), 1000.5, c(5.4735870159098783303e-8, 0.0)),
            (c(2.0, -1.0), 0.25, c(3.6342207988247355212, -15.195370185570540548)),
            (c(3.0, 4.0), 1.0, c(0.89055490696507325814, -0.0080759454243272598468)),
            (c(1.1, 0.0), 1.0, c(10.584448464950800951, 0.0)),
        ];
        for (w, q, want) in cases {
            let got = hurwitz_zeta(w, q).unwrap();
            assert!((got - want).norm() < 1e-13 * want.norm(), "{w} {q}: {got} vs {want}");
        }
    }

    #[test]
    fn first_riemann_zero() {
        let z = riemann_zeta(c(0.5, 14.134725141734693790)).unwrap();
        assert!(z.norm() < 1e-13);
    }

    #[test]
    fn errors() {
        assert!(matches!(hurwitz_zeta(c(1.0, 0.0), 1.0), Err(Error::Pole(_))));
        assert!(matches!(hurwitz_zeta(c(2.0, 0.0), 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn double_double_agrees_and_is_sharper() {
        let w = CDd::from_c64(c(2.0, 0.0));
        let z = hurwitz_zeta_dd(w, 1).unwrap();
        // pi^2/6 = 1.644934066848226436472415166646025...
        let want = Dd { hi: 1.6449340668482264, lo: 3.040672350398476e-17 };
        assert!((z.re - want).to_f64().abs() < 1e-30);
        for &(re, im) in &[(2.0, 19.0), (1.0, 19.0), (60.0, 3.0), (127.0, 0.0)] {
            let w = c(re, im);
            let a = hurwitz_zeta_dd(CDd::from_c64(w), 2).unwrap().to_c64();
            let b = hurwitz_zeta(w, 2.0).unwrap();
            assert!((a - b).norm() <= 1e-14 * a.norm(), "{w}");
        }
    }
}
