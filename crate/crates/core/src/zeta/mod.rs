//! Dynamical zeta functions `ξ`, `η` and the Selberg zeta function `Z` of the
//! modular group, each by several independent routes.
//!
//! * `ξ(s) = exp(Σ_n (1/n) Σ_{x ∈ Fix T^n} Π_k (T^k x)^{2s})`
//!   `= det(1 + L_{s+1}) / det(1 - L_s)`.
//! * `η(s) = exp(2 Σ_{n even} (1/n) Σ_{x ∈ Fix T^n} Π_k (T^k x)^{2s})`
//!   `= det(1 - L²_{s+1}) / det(1 - L²_s)`.
//! * `Z(s) = Π_γ Π_{k>=0} (1 - N(γ)^{-s-k}) = det(1 - L_s²)`.

mod orbit;
mod ratio;
mod selberg;
mod words;

pub use orbit::{eta_euler_product, eta_orbit, xi_orbit};
pub use ratio::{eta_det_ratio, selberg_det_identity, shifted_eta_product, xi_det_ratio, TelescopedProduct};
pub use selberg::{default_k_max, lewis_zagier_log_z, lewis_zagier_with, selberg_euler_product, DEFAULT_TAU};

use std::collections::BTreeMap;

use serde::Serialize;

use crate::format::{ser_complex, ser_opt_f64};
use crate::ComplexPoint;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ZetaRoute {
    DetRatio,
    EulerProduct,
    DetIdentity,
    ReducedSum,
    /// Cycle expansion of the defining orbit exponential.
    OrbitSeries,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum ZetaStatus {
    Regular,
    /// The denominator determinant vanishes to working accuracy.
    Pole {
        #[serde(serialize_with = "ser_complex")]
        numerator: ComplexPoint,
        #[serde(serialize_with = "ser_complex")]
        denominator: ComplexPoint,
    },
}

/// Threshold on `|denominator|` for reporting a pole.
pub const POLE_THRESHOLD: f64 = 1e-13;

#[derive(Clone, Debug, Serialize)]
pub struct ZetaValue {
    #[serde(serialize_with = "ser_complex")]
    pub s: ComplexPoint,
    #[serde(serialize_with = "ser_complex")]
    pub value: ComplexPoint,
    pub route: ZetaRoute,
    /// Truncation parameters (matrix order, caps, lengths).
    pub caps: BTreeMap<String, f64>,
    /// Bound or estimate of the omitted part, as documented per route.
    #[serde(serialize_with = "ser_opt_f64")]
    pub tail: Option<f64>,
    pub status: ZetaStatus,
}

impl ZetaValue {
    fn new(
        s: ComplexPoint,
        value: ComplexPoint,
        route: ZetaRoute,
        caps: &[(&str, f64)],
        tail: Option<f64>,
    ) -> ZetaValue {
        ZetaValue {
            s,
            value,
            route,
            caps: caps.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            tail,
            status: ZetaStatus::Regular,
        }
    }

    pub fn is_pole(&self) -> bool {
        matches!(self.status, ZetaStatus::Pole { .. })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("zeta value serializes")
    }
}

/// `numerator / denominator` with the pole indicator.
fn ratio_value(
    s: ComplexPoint,
    numerator: ComplexPoint,
    denominator: ComplexPoint,
    route: ZetaRoute,
    caps: &[(&str, f64)],
    tail: Option<f64>,
) -> ZetaValue {
    let mut v = ZetaValue::new(s, numerator / denominator, route, caps, tail);
    if denominator.norm() < POLE_THRESHOLD {
        v.status = ZetaStatus::Pole { numerator, denominator };
    }
    v
}
