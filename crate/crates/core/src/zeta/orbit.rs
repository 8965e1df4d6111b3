use super::words::{is_canonical, period, pruned_word_sum, trace_of};
use super::{ZetaRoute, ZetaValue};
use crate::dynamics::orbit_product_from_trace;
use crate::operator::require_convergent;
use crate::spectral::{
    newton_coefficients, orbit_sum_capped, orbit_sum_completed, CompletedOptions, OrbitSum, OrbitTruncation,
    OrbitWeight,
};
use crate::{ComplexPoint, Error, Result};

fn plain_sum(s: ComplexPoint, n: usize, traces: OrbitTruncation) -> Result<OrbitSum> {
    match traces {
        OrbitTruncation::DigitCap(cap) => orbit_sum_capped(s, n, OrbitWeight::Plain, cap),
        OrbitTruncation::Completed => orbit_sum_completed(s, n, OrbitWeight::Plain, CompletedOptions::default_for(n)),
    }
}

/// `1/value` from the power sums `p_m` (the cycle expansion of
/// `exp(-Σ p_m z^m / m)` truncated at order `p.len()`, evaluated at `z = 1`),
/// with the last-coefficient and propagated trace-error estimates.
fn cycle_expansion(p: &[ComplexPoint], p_err: &[f64]) -> Result<(ComplexPoint, f64)> {
    let c = newton_coefficients(p);
    let inv: ComplexPoint = c.iter().sum();
    if inv.norm() == 0.0 {
        return Err(Error::Pole("cycle expansion vanishes".into()));
    }
    let value = 1.0 / inv;
    let last = c[c.len() - 1].norm() * value.norm() * value.norm();
    let propagated = value.norm() * p_err.iter().enumerate().map(|(i, e)| e / (i + 1) as f64).sum::<f64>();
    Ok((value, last + propagated))
}

/// `ξ(s)` from orbit sums `Σ_{x ∈ Fix T^n} Π (T^k x)^{2s}` for `n <= n_max`.
/// The exponential is evaluated as the cycle expansion of `1/ξ`; `tail` is
/// the size of the last expansion term plus the orbit-sum error propagated.
pub fn xi_orbit(s: ComplexPoint, n_max: usize, traces: OrbitTruncation) -> Result<ZetaValue> {
    require_convergent(s)?;
    if n_max == 0 {
        return Err(Error::Domain("n_max must be at least 1".into()));
    }
    let mut p = Vec::with_capacity(n_max);
    let mut e = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let r = plain_sum(s, n, traces)?;
        p.push(r.value);
        e.push(r.tail_bound);
    }
    let (value, tail) = cycle_expansion(&p, &e)?;
    Ok(ZetaValue::new(s, value, ZetaRoute::OrbitSeries, &caps(n_max, traces), Some(tail)))
}

/// `η(s)` from orbit sums of even length only; odd lengths have no fixed
/// points for the extended map and are never computed.
pub fn eta_orbit(s: ComplexPoint, n_max: usize, traces: OrbitTruncation) -> Result<ZetaValue> {
    require_convergent(s)?;
    if n_max < 2 {
        return Err(Error::Domain("n_max must be at least 2".into()));
    }
    let mut p = Vec::new();
    let mut e = Vec::new();
    for n in (2..=n_max).step_by(2) {
        let r = plain_sum(s, n, traces)?;
        p.push(r.value);
        e.push(r.tail_bound);
    }
    let (value, tail) = cycle_expansion(&p, &e)?;
    Ok(ZetaValue::new(s, value, ZetaRoute::OrbitSeries, &caps(n_max, traces), Some(tail)))
}

fn caps(n_max: usize, traces: OrbitTruncation) -> Vec<(&'static str, f64)> {
    let mut c = vec![("n_max", n_max as f64)];
    if let OrbitTruncation::DigitCap(d) = traces {
        c.push(("max_digit", d as f64));
    }
    c
}

const GOLDEN_INV: f64 = 0.618_033_988_749_894_9;

/// Euler product for `η` over primitive periodic orbits of the Gauss map with
/// period `<= max_period` and digits `<= max_digit`.
///
/// An orbit of even period contributes `(1 - P^{2s})^{-2}`; an orbit of odd
/// period `p` only returns to the same sign after `2p` steps and contributes
/// `(1 - P^{4s})^{-1}`. Orbits whose product bound `Π i^{-2σ}` is below
/// `tau` are skipped. `tail` bounds the skipped orbits and the orbits with a
/// digit above the cap (both within the period range); longer periods are not
/// covered.
pub fn eta_euler_product(s: ComplexPoint, max_period: usize, max_digit: u32, tau: f64) -> Result<ZetaValue> {
    require_convergent(s)?;
    if max_period == 0 || max_period > 16 || max_digit == 0 {
        return Err(Error::Domain("need 1 <= max_period <= 16 and max_digit >= 1".into()));
    }
    let two_sigma = 2.0 * s.re;
    let zeta2 = crate::specfun::hurwitz_zeta(ComplexPoint::new(two_sigma, 0.0), 1.0)?.re;
    let head: f64 = crate::specfun::hurwitz_zeta(ComplexPoint::new(two_sigma, 0.0), max_digit as f64 + 1.0)
        .map(|t| zeta2 - t.re)?;
    let mut log = ComplexPoint::new(0.0, 0.0);
    let mut skipped = 0.0;
    for p in 1..=max_period {
        let r = pruned_word_sum(p, max_digit, two_sigma, tau, |w| {
            if !is_canonical(w) || period(w) != p {
                return ComplexPoint::new(0.0, 0.0);
            }
            let x = orbit_product_from_trace(trace_of(w), p);
            let lx = x.ln();
            if p % 2 == 0 {
                -2.0 * (1.0 - (2.0 * s * lx).exp()).ln()
            } else {
                -(1.0 - (4.0 * s * lx).exp()).ln()
            }
        });
        log += r.value;
        // |log factor| <= 2 x / (1 - x) with x <= P^{2σ}; each orbit has p rotations
        let x_max = GOLDEN_INV.powf(two_sigma * p as f64);
        let scale = 2.0 / (1.0 - x_max) / p as f64;
        let capped = zeta2.powi(p as i32) - head.powi(p as i32);
        skipped += scale * (r.pruned_mass + capped);
    }
    let value = log.exp();
    let tail = value.norm() * skipped.exp_m1();
    Ok(ZetaValue::new(
        s,
        crate::check_finite(value, "eta Euler product")?,
        ZetaRoute::EulerProduct,
        &[("max_period", max_period as f64), ("max_digit", max_digit as f64), ("tau", tau)],
        Some(tail),
    ))
}
