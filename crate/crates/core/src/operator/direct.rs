use num_complex::Complex64;
use serde::Serialize;

use super::{require_convergent, DiscDomain};
use crate::format::{ser_complex, ser_f64};
use crate::quadrature::integrate;
use crate::specfun::{bernoulli_2k, hurwitz_zeta};
use crate::{ComplexPoint, Error, Result};

/// Direct evaluation of `L_s f(z)`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct DirectValue {
    /// Partial sum plus the Euler-Maclaurin estimate of the omitted tail.
    #[serde(serialize_with = "ser_complex")]
    pub value: ComplexPoint,
    /// `Σ_{n <= n_cap}` alone.
    #[serde(serialize_with = "ser_complex")]
    pub partial_sum: ComplexPoint,
    /// Bound on the omitted tail `|Σ_{n > n_cap}|` (uncorrected).
    #[serde(serialize_with = "ser_f64")]
    pub tail_bound: f64,
    /// Estimated error of `value` after the tail correction.
    #[serde(serialize_with = "ser_f64")]
    pub correction_error: f64,
}

#[derive(Clone, Copy, Debug)]
pub struct ApplyOptions {
    pub n_cap: u64,
    /// Skip the Euler-Maclaurin tail correction.
    pub raw: bool,
}

impl Default for ApplyOptions {
    fn default() -> Self {
        ApplyOptions { n_cap: 64, raw: false }
    }
}

/// `L_s f(z)` by summing the branches `n <= n_cap` and correcting for the rest.
pub fn apply_direct<F>(s: ComplexPoint, f: F, z: ComplexPoint, disc: &DiscDomain, n_cap: u64) -> Result<DirectValue>
where
    F: Fn(ComplexPoint) -> ComplexPoint,
{
    apply_direct_with(s, f, z, disc, ApplyOptions { n_cap, raw: false })
}

pub fn apply_direct_with<F>(
    s: ComplexPoint,
    f: F,
    z: ComplexPoint,
    disc: &DiscDomain,
    opts: ApplyOptions,
) -> Result<DirectValue>
where
    F: Fn(ComplexPoint) -> ComplexPoint,
{
    require_convergent(s)?;
    if !disc.contains(z) {
        return Err(Error::Domain(format!("z = {z} lies outside the disc of radius {}", disc.radius())));
    }
    let n_cap = opts.n_cap.max(1);
    let two_s = 2.0 * s;
    let g = |x: Complex64| -> Complex64 {
        let w = z + x;
        (-two_s * w.ln()).exp() * f(1.0 / w)
    };
    let mut partial = ComplexPoint::new(0.0, 0.0);
    for n in (1..=n_cap).rev() {
        partial += g(ComplexPoint::new(n as f64, 0.0));
    }
    crate::check_finite(partial, "apply_direct partial sum")?;

    let r = disc.radius();
    let sup = sup_on_boundary(&f, disc);
    let theta = (r / (n_cap as f64 + 2.0 - r)).min(1.0).asin();
    let tail_bound = sup
        * (2.0 * s.im.abs() * theta).exp()
        * hurwitz_zeta(ComplexPoint::new(2.0 * s.re, 0.0), n_cap as f64 + 2.0 - r)?.re;

    if opts.raw {
        return Ok(DirectValue { value: partial, partial_sum: partial, tail_bound, correction_error: tail_bound });
    }
    if n_cap < 16 {
        return Err(Error::Domain("tail correction needs n_cap >= 16".into()));
    }
    let (tail, err) = euler_maclaurin_tail(&g, n_cap as f64)?;
    Ok(DirectValue { value: partial + tail, partial_sum: partial, tail_bound, correction_error: err })
}

/// First `count` Taylor coefficients at `z = 1` of `L_s f`, from direct
/// evaluation on the circle `|z - 1| = rho` (trapezoidal Cauchy integral with
/// `nodes` points; exact up to aliasing from coefficient `count + nodes` on).
pub fn direct_taylor_coefficients<F>(
    s: ComplexPoint,
    f: F,
    count: usize,
    disc: &DiscDomain,
    rho: f64,
    nodes: usize,
) -> Result<Vec<ComplexPoint>>
where
    F: Fn(ComplexPoint) -> ComplexPoint,
{
    if !(rho > 0.0 && rho < disc.radius()) || nodes < count {
        return Err(Error::Domain("need 0 < rho < r and nodes >= count".into()));
    }
    let mut values = Vec::with_capacity(nodes);
    for j in 0..nodes {
        let th = 2.0 * std::f64::consts::PI * j as f64 / nodes as f64;
        let z = ComplexPoint::new(1.0 + rho * th.cos(), rho * th.sin());
        values.push(apply_direct(s, &f, z, disc, ApplyOptions::default().n_cap)?.value);
    }
    Ok((0..count)
        .map(|m| {
            let mut acc = ComplexPoint::new(0.0, 0.0);
            for (j, v) in values.iter().enumerate() {
                let th = -2.0 * std::f64::consts::PI * (j * m) as f64 / nodes as f64;
                acc += v * ComplexPoint::new(th.cos(), th.sin());
            }
            acc / (nodes as f64 * rho.powi(m as i32))
        })
        .collect())
}

fn sup_on_boundary<F: Fn(ComplexPoint) -> ComplexPoint>(f: &F, disc: &DiscDomain) -> f64 {
    let r = disc.radius() * (1.0 - 1e-9);
    (0..256)
        .map(|j| {
            let th = 2.0 * std::f64::consts::PI * j as f64 / 256.0;
            f(ComplexPoint::new(1.0 + r * th.cos(), r * th.sin())).norm()
        })
        .fold(0.0, f64::max)
}

/// `Σ_{n > N} g(n)` by Euler-Maclaurin at `N`, with the integral done by
/// quadrature after `x = N/u` and the odd derivatives by Cauchy integrals on
/// the circle `|x - N| = N/2`.
fn euler_maclaurin_tail<G: Fn(Complex64) -> Complex64>(g: &G, n: f64) -> Result<(Complex64, f64)> {
    let gn = g(Complex64::new(n, 0.0));
    let integrand = |u: f64| -> Complex64 {
        if u <= 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        g(Complex64::new(n / u, 0.0)) * (n / (u * u))
    };
    let scale = gn.norm() * n;
    let quad = integrate(integrand, 0.0, 1.0, 1e-17 * scale.max(1e-300), 1e-15, 4000)?;

    const P: usize = 64;
    let rho = n / 2.0;
    let samples: Vec<(Complex64, Complex64)> = (0..P)
        .map(|j| {
            let th = 2.0 * std::f64::consts::PI * j as f64 / P as f64;
            let e = Complex64::new(th.cos(), th.sin());
            (e, g(n + rho * e))
        })
        .collect();
    let mut corr = Complex64::new(0.0, 0.0);
    let mut last = 0.0;
    let mut fact = 1.0; // (2k-1)!
    for k in 1..=8 {
        let m = 2 * k - 1;
        if k > 1 {
            fact *= ((m - 1) * m) as f64;
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, v) in &samples {
            acc += v * e.powi(-(m as i32));
        }
        let deriv = acc * fact / (P as f64 * rho.powi(m as i32));
        let term = bernoulli_2k(k).1 * deriv;
        corr += term;
        last = term.norm();
    }
    let tail = quad.value - 0.5 * gn - corr;
    Ok((tail, quad.error + last + 1e-16 * quad.value.norm()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::HolomorphicSample;

    fn c(re: f64, im: f64) -> ComplexPoint {
        ComplexPoint::new(re, im)
    }

    #[test]
    fn telescoping_identity() {
        // Σ 1/((z+n)(z+n+1)) = 1/(z+1)
        let disc = DiscDomain::default();
        let v = apply_direct(c(1.0, 0.0), |w| 1.0 / (1.0 + w), c(1.0, 0.0), &disc, 64).unwrap();
        assert!((v.value - c(0.5, 0.0)).norm() < 1e-14, "{}", v.value);
        assert!((v.partial_sum - c(0.5 - 1.0 / 66.0, 0.0)).norm() < 1e-14);
        assert!(v.tail_bound >= 1.0 / 66.0);
    }

    #[test]
    fn perron_eigenfunction_on_grid() {
        let disc = DiscDomain::default();
        let h = |w: ComplexPoint| 1.0 / (1.0 + w);
        for z in HolomorphicSample::grid(&disc) {
            let v = apply_direct(c(1.0, 0.0), h, z, &disc, 64).unwrap();
            assert!((v.value - h(z)).norm() < 1e-13, "{z}");
        }
    }

    #[test]
    fn constant_function_gives_hurwitz_zeta() {
        let disc = DiscDomain::default();
        let s = c(1.3, 0.7);
        let v = apply_direct(s, |_| c(1.0, 0.0), c(1.2, 0.0), &disc, 32).unwrap();
        let want = hurwitz_zeta(2.0 * s, 2.2).unwrap();
        assert!((v.value - want).norm() < 1e-13);
    }

    #[test]
    fn rejects_outside_points() {
        let disc = DiscDomain::default();
        assert!(apply_direct(c(1.0, 0.0), |w| w, c(3.0, 0.0), &disc, 64).is_err());
        assert!(apply_direct(c(0.4, 0.0), |w| w, c(1.0, 0.0), &disc, 64).is_err());
    }
}
