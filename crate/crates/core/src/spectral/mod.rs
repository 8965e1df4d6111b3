//! Traces, Fredholm determinants, spectra and zeros of the transfer operator.
//!
//! Four independent trace routes are provided: the fixed-point closed form,
//! sums over periodic orbits, the Bessel-kernel integral, and the truncated
//! matrix. Determinants come either from the trace series or from the
//! truncated matrix directly.

mod det;
mod orbit;
mod trace;

pub(crate) use det::newton_coefficients;
pub use det::{
    det_finite, det_finite_checked, find_zero, fredholm_det_series, spectrum, DetKind, DetMethod, DetReport,
    OrbitTruncation, ZeroReport,
};
pub use orbit::{orbit_sum_capped, orbit_sum_completed, weight_from_trace, CompletedOptions, OrbitSum, OrbitWeight};
pub use trace::{
    kernel_term, trace_closed_form, trace_closed_form_dd, trace_kernel_integral, trace_kernel_resummed, trace_matrix,
    trace_orbit_sum, trace_orbit_sum_completed,
};

use serde::Serialize;

use crate::format::{ser_complex, ser_f64};
use crate::ComplexPoint;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TraceMethod {
    ClosedForm,
    OrbitSum,
    KernelIntegral,
    MatrixTrace,
}

/// `tr L_s^n` from one route.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct TraceReport {
    #[serde(serialize_with = "ser_complex")]
    pub s: ComplexPoint,
    pub n: usize,
    #[serde(serialize_with = "ser_complex")]
    pub value: ComplexPoint,
    pub method: TraceMethod,
    /// Bound on (or, for completed and matrix routes, estimate of) `|exact - value|`.
    #[serde(serialize_with = "ser_f64")]
    pub tail_bound: f64,
}

impl TraceReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}
