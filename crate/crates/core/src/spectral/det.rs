use serde::Serialize;

use super::orbit::{orbit_sum_capped, orbit_sum_completed, CompletedOptions, OrbitWeight};
use crate::format::{ser_complex, ser_f64, ser_opt_complex, ser_opt_f64};
use crate::linalg::{determinant, eigenvalues, sort_spectrum, CMatrix};
use crate::operator::{matrix_monomial, require_convergent, require_matrix_domain, DiscDomain};
use crate::{ComplexPoint, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DetMethod {
    TraceSeries,
    FiniteDet,
}

/// Which determinant of the truncated operator `A`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DetKind {
    /// `det(1 - A)`
    Minus,
    /// `det(1 + A)`
    Plus,
    /// `det(1 - A²)`
    MinusSquare,
}

impl std::str::FromStr for DetKind {
    type Err = Error;

    fn from_str(text: &str) -> Result<DetKind> {
        match text {
            "minus" => Ok(DetKind::Minus),
            "plus" => Ok(DetKind::Plus),
            "minus-square" => Ok(DetKind::MinusSquare),
            other => Err(Error::Domain(format!("unknown determinant kind {other:?}"))),
        }
    }
}

/// How orbit traces inside the determinant series are truncated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrbitTruncation {
    /// Words with every digit `<= cap`; certified digit-cap bounds.
    DigitCap(u32),
    /// All words; large digits summed analytically.
    Completed,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct DetReport {
    #[serde(serialize_with = "ser_complex")]
    pub s: ComplexPoint,
    #[serde(serialize_with = "ser_complex")]
    pub value: ComplexPoint,
    pub method: DetMethod,
    pub kind: DetKind,
    /// Matrix order for finite determinants.
    pub order: Option<usize>,
    /// Highest orbit length for trace series.
    pub n_max: Option<usize>,
    /// Trace series: magnitude of the last series term. Finite determinants:
    /// `|value - value at order/2|` when computed.
    #[serde(serialize_with = "ser_opt_f64")]
    pub truncation_indicator: Option<f64>,
    /// Trace series: accumulated error bound of the orbit traces, propagated to first order.
    #[serde(serialize_with = "ser_opt_f64")]
    pub trace_error: Option<f64>,
}

impl DetReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// `det(1 - sign L_s)` from orbit traces. The expansion
/// `det(1 - zL) = exp(-Σ z^n tr L^n / n) = Σ_k c_k z^k` is truncated at
/// `k <= n_max` (Newton's recursion `k c_k = -Σ_{j<=k} p_j c_{k-j}`),
/// which converges much faster than truncating the exponent.
pub fn fredholm_det_series(s: ComplexPoint, sign: i32, n_max: usize, traces: OrbitTruncation) -> Result<DetReport> {
    require_convergent(s)?;
    if sign != 1 && sign != -1 {
        return Err(Error::Domain(format!("sign must be +1 or -1, got {sign}")));
    }
    if n_max == 0 {
        return Err(Error::Domain("n_max must be at least 1".into()));
    }
    let mut p = Vec::with_capacity(n_max);
    let mut p_err = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let r = match traces {
            OrbitTruncation::DigitCap(cap) => orbit_sum_capped(s, n, OrbitWeight::Trace, cap)?,
            OrbitTruncation::Completed => {
                orbit_sum_completed(s, n, OrbitWeight::Trace, CompletedOptions::default_for(n))?
            }
        };
        let sgn = if sign == 1 || n % 2 == 0 { 1.0 } else { -1.0 };
        p.push(r.value * sgn);
        p_err.push(r.tail_bound);
    }
    let c = newton_coefficients(&p);
    let value: ComplexPoint = c.iter().sum();
    // d(det)/d(p_n) of the untruncated expression is -det/n.
    let trace_error = value.norm() * p_err.iter().enumerate().map(|(i, e)| e / (i + 1) as f64).sum::<f64>();
    Ok(DetReport {
        s,
        value: crate::check_finite(value, "determinant series")?,
        method: DetMethod::TraceSeries,
        kind: if sign == 1 { DetKind::Minus } else { DetKind::Plus },
        order: None,
        n_max: Some(n_max),
        truncation_indicator: Some(c[n_max].norm()),
        trace_error: Some(trace_error),
    })
}

/// Coefficients `c_0..=c_N` of `exp(-Σ p_n z^n / n)` from power sums `p_1..p_N`.
pub(crate) fn newton_coefficients(p: &[ComplexPoint]) -> Vec<ComplexPoint> {
    let n = p.len();
    let mut c = vec![ComplexPoint::new(0.0, 0.0); n + 1];
    c[0] = ComplexPoint::new(1.0, 0.0);
    for k in 1..=n {
        let mut acc = ComplexPoint::new(0.0, 0.0);
        for j in 1..=k {
            acc += p[j - 1] * c[k - j];
        }
        c[k] = -acc / k as f64;
    }
    c
}

fn finite_from_matrix(a: &CMatrix, kind: DetKind) -> Result<ComplexPoint> {
    let n = a.nrows();
    let id = CMatrix::identity(n, n);
    let m = match kind {
        DetKind::Minus => &id - a,
        DetKind::Plus => &id + a,
        DetKind::MinusSquare => &id - a * a,
    };
    determinant(&m)
}

/// Determinant of `1 - A`, `1 + A` or `1 - A²` for the order-`order`
/// monomial truncation on the default disc.
pub fn det_finite(s: ComplexPoint, kind: DetKind, order: usize) -> Result<DetReport> {
    let disc = DiscDomain::default();
    let a = matrix_monomial(s, order, &disc)?;
    let value = finite_from_matrix(&a.entries, kind)?;
    Ok(DetReport {
        s,
        value,
        method: DetMethod::FiniteDet,
        kind,
        order: Some(order),
        n_max: None,
        truncation_indicator: None,
        trace_error: None,
    })
}

/// [`det_finite`] plus the change against order `order/2`.
pub fn det_finite_checked(s: ComplexPoint, kind: DetKind, order: usize) -> Result<DetReport> {
    let mut r = det_finite(s, kind, order)?;
    if order >= 2 {
        let half = det_finite(s, kind, order / 2)?;
        r.truncation_indicator = Some((half.value - r.value).norm());
    }
    Ok(r)
}

/// The `k` largest eigenvalues of the order-`order` truncation, by decreasing
/// magnitude (near-ties by increasing argument).
pub fn spectrum(s: ComplexPoint, order: usize, k: usize) -> Result<Vec<ComplexPoint>> {
    if k == 0 || k > order {
        return Err(Error::Domain(format!("need 1 <= k <= order, got k = {k}, order = {order}")));
    }
    let a = matrix_monomial(s, order, &DiscDomain::default())?;
    let mut ev = eigenvalues(&a.entries)?;
    sort_spectrum(&mut ev);
    ev.truncate(k);
    Ok(ev)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ZeroReport {
    #[serde(serialize_with = "ser_complex")]
    pub root: ComplexPoint,
    /// `|det|` at the root.
    #[serde(serialize_with = "ser_f64")]
    pub residual: f64,
    /// `|root - root at order/2|`, when the half-order search converged.
    #[serde(serialize_with = "ser_opt_f64")]
    pub displacement: Option<f64>,
    #[serde(serialize_with = "ser_opt_complex")]
    pub half_order_root: Option<ComplexPoint>,
    pub iterations: usize,
    pub kind: DetKind,
    pub order: usize,
}

impl ZeroReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

const SECANT_MAX_ITER: usize = 100;
const PROJECTION_MARGIN: f64 = 0.05;
/// Largest accepted `|det|` at a root, relative to `max(1, |det(start)|)`.
const RESIDUAL_FRACTION: f64 = 1e-6;

fn secant(start: ComplexPoint, kind: DetKind, order: usize, tol: f64) -> Result<(ComplexPoint, f64, usize)> {
    let f = |s: ComplexPoint| -> Result<ComplexPoint> {
        require_matrix_domain(s)?;
        Ok(det_finite(s, kind, order)?.value)
    };
    let mut s0 = start;
    let mut f0 = f(s0)?;
    let scale = f0.norm().max(1.0);
    let h = (1e-3 * start.norm()).max(1e-4);
    let mut s1 = start + ComplexPoint::new(h, 0.0);
    let mut f1 = f(s1)?;
    for it in 1..=SECANT_MAX_ITER {
        let denom = f1 - f0;
        if denom.norm() == 0.0 {
            if f1.norm() == 0.0 {
                return Ok((s1, 0.0, it));
            }
            return Err(Error::NonConvergence(format!("secant stalled at s = {s1}")));
        }
        let step = f1 * (s1 - s0) / denom;
        let mut s2 = s1 - step;
        if !(s2.re.is_finite() && s2.im.is_finite()) {
            return Err(Error::NonConvergence("secant produced a non-finite iterate".into()));
        }
        if s2.re < 0.5 - PROJECTION_MARGIN {
            return Err(Error::Domain(format!("secant iterate left Re(s) >= 1/2: s = {s2}")));
        }
        // Zeros on the critical line are approached from both sides; small
        // excursions are projected back onto the line.
        if s2.re < 0.5 - 1e-9 {
            s2.re = 0.5;
        }
        let f2 = f(s2)?;
        if step.norm() <= tol {
            // a vanishing step with a large residual is a stall, not a root
            if f2.norm() > RESIDUAL_FRACTION * scale {
                return Err(Error::NonConvergence(format!(
                    "secant stalled at s = {s2} with |det| = {:.3e}",
                    f2.norm()
                )));
            }
            return Ok((s2, f2.norm(), it));
        }
        s0 = s1;
        f0 = f1;
        s1 = s2;
        f1 = f2;
    }
    Err(Error::NonConvergence(format!("secant did not converge in {SECANT_MAX_ITER} iterations (last s = {s1})")))
}

/// Zero of `s ↦ det_finite(s, kind, order)` by complex secant iteration from
/// `start`, repeated at order `order/2` from the root to measure stability.
pub fn find_zero(start: ComplexPoint, kind: DetKind, order: usize, tol: f64) -> Result<ZeroReport> {
    if !(tol > 0.0) {
        return Err(Error::Domain("tolerance must be positive".into()));
    }
    if !(start.re.is_finite() && start.im.is_finite()) || start.re < 0.5 {
        return Err(Error::Domain(format!("start must satisfy Re(s) >= 1/2, got {start}")));
    }
    let (root, residual, iterations) = secant(start, kind, order, tol)?;
    let half_order_root = if order >= 2 { secant(root, kind, order / 2, tol).ok().map(|r| r.0) } else { None };
    Ok(ZeroReport {
        root,
        residual,
        displacement: half_order_root.map(|h| (h - root).norm()),
        half_order_root,
        iterations,
        kind,
        order,
    })
}
