use std::cell::RefCell;

use super::orbit::{
    orbit_sum_capped, orbit_sum_completed, weight_from_trace, weight_series, CompletedOptions, OrbitWeight,
};
use super::{TraceMethod, TraceReport};
use crate::operator::{matrix_monomial, require_convergent, DiscDomain};
use crate::parallel::{map_indexed, KahanSum};
use crate::quadrature::integrate;
use crate::specfun::dd::{CDd, Dd};
use crate::specfun::{bessel_j, gamma, hurwitz_zeta, hurwitz_zeta_dd};
use crate::{ComplexPoint, Error, Result};

/// Branches summed explicitly before the analytic completion takes over.
const CLOSED_FORM_SWITCH: u64 = 24;

/// `x_n^{2s} / (1 + x_n²)` for the fixed point `x_n = [0; n, n, ...]` of the
/// `n`-th branch.
fn fixed_point_term(s: ComplexPoint, n: u64) -> ComplexPoint {
    weight_from_trace(s, 1, OrbitWeight::Trace, n as f64)
}

/// `tr L_s = Σ_n x_n^{2s} / (1 + x_n²)`.
///
/// Terms `n <= n_cap` are summed directly. The remainder is added analytically:
/// the summand is `Σ_j a_j (-1)^j n^{-2s-2j}`, so the tail is a combination of
/// Hurwitz zeta values. `tail_bound` covers the truncation of that expansion
/// plus rounding.
pub fn trace_closed_form(s: ComplexPoint, n_cap: u64) -> Result<TraceReport> {
    require_convergent(s)?;
    let mut acc = KahanSum::default();
    let mut abs = 0.0;
    let start = n_cap.max(CLOSED_FORM_SWITCH);
    for n in 1..=start {
        let t = fixed_point_term(s, n);
        acc.add(t);
        abs += t.norm();
    }
    let q = start as f64 + 1.0;
    // coefficients grow like 4^j, terms shrink like q^{-2j}
    let terms = ((1e-18f64.ln() / (4.0 / (q * q)).ln()).ceil() as usize + 2).max(3);
    let coeffs = weight_series(s, OrbitWeight::Trace, terms + 1);
    let mut tail = ComplexPoint::new(0.0, 0.0);
    let mut sign = 1.0;
    for (j, c) in coeffs.iter().take(terms).enumerate() {
        tail += sign * c * hurwitz_zeta(2.0 * s + 2.0 * j as f64, q)?;
        sign = -sign;
    }
    let last = coeffs[terms].norm() * hurwitz_zeta(ComplexPoint::new(2.0 * s.re + 2.0 * terms as f64, 0.0), q)?.re;
    acc.add(tail);
    let value = crate::check_finite(acc.value(), "closed-form trace")?;
    Ok(TraceReport {
        s,
        n: 1,
        value,
        method: TraceMethod::ClosedForm,
        tail_bound: 2.0 * last + 1e-16 * (abs + tail.norm()) + 1e-17,
    })
}

/// [`trace_closed_form`] with the direct terms and the Hurwitz tail in
/// double-double arithmetic. The tail coefficients stay in `f64`; they
/// multiply values that are small against the total once `n_cap` is large.
pub fn trace_closed_form_dd(s: ComplexPoint, n_cap: u64) -> Result<TraceReport> {
    require_convergent(s)?;
    let two_s = CDd::from_c64(2.0 * s);
    let start = n_cap.max(CLOSED_FORM_SWITCH);
    let mut acc = CDd::ZERO;
    for n in (1..=start).rev() {
        // 1/x_n = (n + sqrt(n² + 4))/2
        let nd = Dd::from_f64(n as f64);
        let inv_x = (nd + (nd.sqr() + Dd::from_f64(4.0)).sqrt()).mul_f64(0.5);
        let x2 = inv_x.sqr().recip();
        let term = CDd::pow_neg_from_ln(two_s, inv_x.ln());
        acc = acc + term.scale((Dd::ONE + x2).recip());
    }
    let q = start as f64 + 1.0;
    let terms = ((1e-34f64.ln() / (4.0 / (q * q)).ln()).ceil() as usize + 2).max(3);
    let coeffs = weight_series(s, OrbitWeight::Trace, terms + 1);
    let mut sign = 1.0;
    for (j, c) in coeffs.iter().take(terms).enumerate() {
        let w = CDd::from_c64(2.0 * s) + CDd::from_real(Dd::from_f64(2.0 * j as f64));
        acc = acc + CDd::from_c64(sign * c) * hurwitz_zeta_dd(w, start + 1)?;
        sign = -sign;
    }
    let last = coeffs[terms].norm() * hurwitz_zeta(ComplexPoint::new(2.0 * s.re + 2.0 * terms as f64, 0.0), q)?.re;
    let value = crate::check_finite(acc.to_c64(), "closed-form trace")?;
    Ok(TraceReport {
        s,
        n: 1,
        value,
        method: TraceMethod::ClosedForm,
        tail_bound: 2.0 * last + 1e-16 * q.powf(1.0 - 2.0 * s.re) * value.norm() + 1e-30,
    })
}

/// `tr L_s^n` by summing over all digit words of length `n` with digits
/// `<= max_digit`; `tail_bound` is the certified bound on words with a larger digit.
pub fn trace_orbit_sum(s: ComplexPoint, n: usize, max_digit: u32) -> Result<TraceReport> {
    let r = orbit_sum_capped(s, n, OrbitWeight::Trace, max_digit)?;
    Ok(TraceReport { s, n, value: r.value, method: TraceMethod::OrbitSum, tail_bound: r.tail_bound })
}

/// `tr L_s^n` over all words, digits above the cutoff summed analytically.
pub fn trace_orbit_sum_completed(s: ComplexPoint, n: usize, opts: Option<CompletedOptions>) -> Result<TraceReport> {
    let opts = opts.unwrap_or_else(|| CompletedOptions::default_for(n));
    let r = orbit_sum_completed(s, n, OrbitWeight::Trace, opts)?;
    Ok(TraceReport { s, n, value: r.value, method: TraceMethod::OrbitSum, tail_bound: r.tail_bound })
}

/// `tr A^n` for the order-`order` monomial truncation. `tail_bound` is the
/// change against the half-order truncation (an estimate, not a bound).
pub fn trace_matrix(s: ComplexPoint, n: usize, order: usize, disc: &DiscDomain) -> Result<TraceReport> {
    if n == 0 {
        return Err(Error::Domain("power must be at least 1".into()));
    }
    let a = matrix_monomial(s, order, disc)?;
    let value = a.power_trace(n);
    let delta =
        if order >= 2 { (matrix_monomial(s, order / 2, disc)?.power_trace(n) - value).norm() } else { f64::INFINITY };
    Ok(TraceReport {
        s,
        n,
        value: crate::check_finite(value, "matrix trace")?,
        method: TraceMethod::MatrixTrace,
        tail_bound: delta,
    })
}

const KERNEL_ABS_TOL: f64 = 1e-13;
const KERNEL_REL_TOL: f64 = 1e-12;
const KERNEL_MAX_INTERVALS: usize = 4000;

/// Constant `K` with `|J_{2s-1}(2t)| <= K t^{2σ-1}` for `t > 0`, from the
/// Poisson integral.
fn bessel_envelope(s: ComplexPoint) -> Result<f64> {
    let a = 2.0 * s.re - 1.0;
    let num = gamma(ComplexPoint::new(a + 0.5, 0.0))?.re;
    let den = gamma(2.0 * s - 0.5)?.norm() * gamma(ComplexPoint::new(a + 1.0, 0.0))?.re;
    Ok(num / den)
}

/// Upper bound for `∫_T^∞ t^a e^{-λt} dt`, valid when `λ > a/T`.
fn exp_power_tail(a: f64, lambda: f64, t: f64) -> f64 {
    let rate = lambda - a.max(0.0) / t;
    if rate <= 0.0 {
        return f64::INFINITY;
    }
    t.powf(a) * (-lambda * t).exp() / rate
}

/// Integrates `weight(t) J_{2s-1}(2t)` over `[0, b]`.
fn bessel_quad<W>(s: ComplexPoint, b: f64, weight: W) -> Result<(ComplexPoint, f64)>
where
    W: Fn(f64) -> f64,
{
    let nu = 2.0 * s - 1.0;
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let f = |t: f64| -> ComplexPoint {
        if t == 0.0 {
            return ComplexPoint::new(0.0, 0.0);
        }
        match bessel_j(nu, ComplexPoint::new(2.0 * t, 0.0)) {
            Ok(j) => j * weight(t),
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                ComplexPoint::new(0.0, 0.0)
            }
        }
    };
    let r = integrate(f, 0.0, b, KERNEL_ABS_TOL, KERNEL_REL_TOL, KERNEL_MAX_INTERVALS)?;
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok((r.value, r.error))
}

/// `∫_0^∞ e^{-nt} J_{2s-1}(2t) dt` by quadrature on `[0, 40/n]`, with the
/// quadrature error estimate plus a bound on the cut-off piece.
pub fn kernel_term(s: ComplexPoint, n: u64) -> Result<(ComplexPoint, f64)> {
    require_convergent(s)?;
    if n == 0 {
        return Err(Error::Domain("kernel term index starts at 1".into()));
    }
    let nf = n as f64;
    let b = 40.0 / nf;
    let (v, e) = bessel_quad(s, b, |t| (-nf * t).exp())?;
    let a = 2.0 * s.re - 1.0;
    let cut = bessel_envelope(s)? * exp_power_tail(a, nf, b);
    Ok((v, e + cut))
}

/// `tr K_s = Σ_{n <= n_cap} ∫_0^∞ e^{-nt} J_{2s-1}(2t) dt`, each term by
/// quadrature. `tail_bound` covers quadrature, cut-off and all `n > n_cap`:
/// `Σ_{n > N} |I_n| <= Γ(2σ - 1/2)/|Γ(2s - 1/2)| ζ(2σ, N + 1)`.
pub fn trace_kernel_integral(s: ComplexPoint, n_cap: u64) -> Result<TraceReport> {
    require_convergent(s)?;
    let parts: Vec<Result<(ComplexPoint, f64)>> = map_indexed(n_cap as usize, |i| kernel_term(s, i as u64 + 1));
    let mut acc = KahanSum::default();
    let mut err = 0.0;
    for p in parts {
        let (v, e) = p?;
        acc.add(v);
        err += e;
    }
    let sigma2 = ComplexPoint::new(2.0 * s.re, 0.0);
    let coef = gamma(ComplexPoint::new(2.0 * s.re - 0.5, 0.0))?.re / gamma(2.0 * s - 0.5)?.norm();
    let tail = coef * hurwitz_zeta(sigma2, n_cap as f64 + 1.0)?.re;
    Ok(TraceReport { s, n: 1, value: acc.value(), method: TraceMethod::KernelIntegral, tail_bound: err + tail })
}

/// Kernel trace with the terms beyond `n_cap` folded back into one integral:
/// `1/(e^t - 1) = Σ_{n <= N} e^{-nt} + e^{-Nt}/(e^t - 1)`, so
/// `tr K_s = Σ_{n <= N} I_n + ∫_0^∞ e^{-Nt} J_{2s-1}(2t)/(e^t - 1) dt`.
/// The remainder integral is taken over `[0, 40]` and the rest bounded.
pub fn trace_kernel_resummed(s: ComplexPoint, n_cap: u64) -> Result<TraceReport> {
    let head = trace_kernel_integral(s, n_cap)?;
    let coef_head = {
        let sigma2 = ComplexPoint::new(2.0 * s.re, 0.0);
        let c = gamma(ComplexPoint::new(2.0 * s.re - 0.5, 0.0))?.re / gamma(2.0 * s - 0.5)?.norm();
        c * hurwitz_zeta(sigma2, n_cap as f64 + 1.0)?.re
    };
    let head_err = head.tail_bound - coef_head;
    let nf = n_cap as f64;
    let b = 40.0;
    let (rem, rem_err) = bessel_quad(s, b, |t| (-nf * t).exp() / t.exp_m1())?;
    let a = 2.0 * s.re - 1.0;
    let cut = bessel_envelope(s)? / (1.0 - (-b).exp()) * exp_power_tail(a, nf + 1.0, b);
    Ok(TraceReport {
        s,
        n: 1,
        value: head.value + rem,
        method: TraceMethod::KernelIntegral,
        tail_bound: head_err + rem_err + cut,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> ComplexPoint {
        ComplexPoint::new(re, im)
    }

    #[test]
    fn closed_form_reference_value() {
        let r = trace_closed_form(c(1.0, 0.0), 100).unwrap();
        assert!((r.value.re - 0.771_125_523_655_658_9).abs() < 1e-14, "{}", r.value);
        assert!(r.tail_bound < 1e-14);
    }

    #[test]
    fn double_double_closed_form_agrees() {
        for &s in &[c(1.0, 0.0), c(2.0, 0.0), c(1.0, 2.0), c(0.75, 9.0)] {
            let a = trace_closed_form(s, 100).unwrap().value;
            let b = trace_closed_form_dd(s, 100).unwrap().value;
            assert!((a - b).norm() < 1e-14 * a.norm().max(1e-3), "{s}: {a} vs {b}");
        }
    }

    #[test]
    fn closed_form_independent_of_switch() {
        let s = c(1.2, 3.0);
        let a = trace_closed_form(s, 10).unwrap();
        let b = trace_closed_form(s, 5000).unwrap();
        assert!((a.value - b.value).norm() < 1e-13);
    }

    #[test]
    fn kernel_term_matches_fixed_point() {
        for &(s, n) in &[(c(1.0, 0.0), 1u64), (c(1.5, 0.0), 2), (c(1.0, 2.0), 3), (c(0.8, 0.0), 1)] {
            let (v, e) = kernel_term(s, n).unwrap();
            let exact = fixed_point_term(s, n);
            assert!((v - exact).norm() < 1e-11, "s = {s}, n = {n}: {v} vs {exact}");
            assert!(e < 1e-10);
        }
    }

    #[test]
    fn empty_kernel_sum_is_covered_by_bound() {
        let r = trace_kernel_integral(c(1.0, 0.0), 0).unwrap();
        assert_eq!(r.value, c(0.0, 0.0));
        assert!(r.tail_bound >= 0.771);
    }

    #[test]
    fn kernel_tail_bound_is_honest() {
        let s = c(1.5, 0.0);
        let exact = trace_closed_form(s, 100).unwrap().value;
        let r = trace_kernel_integral(s, 5).unwrap();
        let gap = (r.value - exact).norm();
        assert!(gap <= r.tail_bound && gap > 0.05 * r.tail_bound, "gap {gap} bound {}", r.tail_bound);
    }

    #[test]
    fn resummed_kernel_matches_closed_form() {
        let s = c(2.0, 0.0);
        let r = trace_kernel_resummed(s, 3).unwrap();
        let exact = trace_closed_form(s, 100).unwrap().value;
        assert!((r.value - exact).norm() < 1e-10, "{} vs {}", r.value, exact);
    }
}
