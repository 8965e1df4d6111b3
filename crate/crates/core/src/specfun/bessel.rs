use num_complex::Complex64;

use super::dd::{CDd, Dd};
use super::gamma::log_gamma;
use crate::{Error, Result};

const MAX_TERMS: usize = 10_000;

/// Bessel function `J_ν(u)` of complex order and argument.
///
/// Power series `(u/2)^ν / Γ(ν+1) Σ (-u²/4)^k / (k! (ν+1)_k)`, with the sum
/// accumulated in double-double to absorb the cancellation at moderate `|u|`.
/// For `Re u > 0` and `|u| >= 25 + |ν|²` the Hankel asymptotic expansion is
/// used instead.
pub fn bessel_j(nu: Complex64, u: Complex64) -> Result<Complex64> {
    if !(nu.re.is_finite() && nu.im.is_finite() && u.re.is_finite() && u.im.is_finite()) {
        return Err(Error::Domain("bessel_j of non-finite input".into()));
    }
    // Negative integer order: J_{-n} = (-1)^n J_n.
    if nu.im == 0.0 && nu.re < 0.0 && nu.re == nu.re.round() {
        let n = -nu.re;
        let sign = if (n as i64) % 2 == 0 { 1.0 } else { -1.0 };
        return Ok(sign * bessel_j(Complex64::new(n, 0.0), u)?);
    }
    if u == Complex64::new(0.0, 0.0) {
        return Ok(if nu == Complex64::new(0.0, 0.0) { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) });
    }
    if u.re > 0.0 && u.norm() >= 25.0 + nu.norm_sqr() {
        if let Some(v) = hankel(nu, u) {
            return crate::check_finite(v, "bessel_j");
        }
    }
    let x = CDd::from_c64(-(u * u) / 4.0);
    let nu_dd = CDd::from_c64(nu);
    let half_u = u.norm() / 2.0;
    let mut term = CDd::ONE;
    let mut sum = CDd::ONE;
    let mut k = 0usize;
    loop {
        k += 1;
        if k > MAX_TERMS {
            return Err(Error::NonConvergence(format!("bessel_j({nu}, {u}) series")));
        }
        let kd = Dd::from_f64(k as f64);
        let denom = (nu_dd + CDd::from_real(kd)).scale(kd);
        term = term * x / denom;
        sum = sum + term;
        if (k as f64) > half_u && term.abs_f64() < 1e-17 * sum.abs_f64() {
            break;
        }
    }
    let pre = (nu * (u / 2.0).ln() - log_gamma(nu + 1.0)?).exp();
    crate::check_finite(pre * sum.to_c64(), "bessel_j")
}

/// `sqrt(2/(πu)) (P cos ω - Q sin ω)`, `ω = u - νπ/2 - π/4`; `None` if the
/// asymptotic terms stop shrinking before reaching double precision.
fn hankel(nu: Complex64, u: Complex64) -> Option<Complex64> {
    let mu = 4.0 * nu * nu;
    let mut p = Complex64::new(1.0, 0.0);
    let mut q = Complex64::new(0.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    let mut prev = f64::INFINITY;
    let mut k = 1usize;
    loop {
        let odd = (2 * k - 1) as f64;
        term *= (mu - odd * odd) / (k as f64 * 8.0 * u);
        let mag = term.norm();
        if mag > prev {
            return None;
        }
        prev = mag;
        // a_k / u^k enters P (even k) or Q (odd k) with sign (-1)^floor(k/2).
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * term;
        } else {
            q += sign * term;
        }
        if mag < 1e-17 * p.norm().max(q.norm()) {
            break;
        }
        k += 1;
        if k > 200 {
            return None;
        }
    }
    let omega = u - nu * std::f64::consts::FRAC_PI_2 - std::f64::consts::FRAC_PI_4;
    Some((2.0 / (std::f64::consts::PI * u)).sqrt() * (p * omega.cos() - q * omega.sin()))
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
            (c(1.0, 0.0), c(1.0, 0.0), c(0.44005058574493351596, 0.0)),
            (c(1.0, 0.0), c(50.0, 0.0), c(-0.097511828125175137661, 0.0)),
            (c(1.0, 4.0), c(2.0, 0.0), c(-22.544496455781636743, 6.829898016400563941)),
            (c(1.0, 4.0), c(30.0, 0.0), c(-21.61198096544735365, 26.25588870252379352)),
            (c(2.0, 0.0), c(10.0, 0.0), c(0.25463031368512062253, 0.0)),
            (c(0.5, 2.0), c(3.0, 1.0), c(0.77703975088702636726, 0.82644168405895409042)),
            (c(0.0, 0.0), c(20.0, 0.0), c(0.16702466434058315473, 0.0)),
        ];
        for (nu, u, want) in cases {
            let got = bessel_j(nu, u).unwrap();
            assert!((got - want).norm() < 1e-12 * want.norm(), "J_{nu}({u}) = {got} vs {want}");
        }
    }

    #[test]
    fn series_and_asymptotic_agree_at_switch() {
        for &(nu, x) in &[(c(1.0, 4.0), 42.5), (c(0.0, 0.0), 25.5), (c(2.0, 1.0), 30.5)] {
            let a = bessel_j(nu, c(x, 0.0)).unwrap();
            let b = bessel_j(nu, c(x - 1e-9, 0.0)).unwrap();
            assert!((a - b).norm() < 1e-8 * a.norm().max(1e-3), "{nu} {x}: {a} {b}");
        }
    }

    #[test]
    fn negative_integer_order() {
        let a = bessel_j(c(-3.0, 0.0), c(2.5, 0.0)).unwrap();
        let b = bessel_j(c(3.0, 0.0), c(2.5, 0.0)).unwrap();
        assert!((a + b).norm() < 1e-15);
    }
}
