use serde::Serialize;

use super::{ratio_value, ZetaRoute, ZetaValue};
use crate::format::ser_complex;
use crate::operator::require_convergent;
use crate::spectral::{det_finite, DetKind};
use crate::{ComplexPoint, Result};

/// `ξ(s) = det(1 + A_{s+1}) / det(1 - A_s)` for order-`order` truncations.
pub fn xi_det_ratio(s: ComplexPoint, order: usize) -> Result<ZetaValue> {
    require_convergent(s)?;
    let num = det_finite(s + 1.0, DetKind::Plus, order)?.value;
    let den = det_finite(s, DetKind::Minus, order)?.value;
    Ok(ratio_value(s, num, den, ZetaRoute::DetRatio, &[("order", order as f64)], None))
}

/// `η(s) = det(1 - A²_{s+1}) / det(1 - A²_s)`.
pub fn eta_det_ratio(s: ComplexPoint, order: usize) -> Result<ZetaValue> {
    require_convergent(s)?;
    let num = det_finite(s + 1.0, DetKind::MinusSquare, order)?.value;
    let den = det_finite(s, DetKind::MinusSquare, order)?.value;
    Ok(ratio_value(s, num, den, ZetaRoute::DetRatio, &[("order", order as f64)], None))
}

/// `Z(s) = det(1 - A_s²)`, defined wherever the matrix route is.
pub fn selberg_det_identity(s: ComplexPoint, order: usize) -> Result<ZetaValue> {
    let v = det_finite(s, DetKind::MinusSquare, order)?.value;
    Ok(ZetaValue::new(s, v, ZetaRoute::DetIdentity, &[("order", order as f64)], None))
}

/// `Π_{l=0}^{L} η(s + l)` next to its telescoped form
/// `det(1 - A²_{s+L+1}) / det(1 - A²_s)`.
#[derive(Clone, Debug, Serialize)]
pub struct TelescopedProduct {
    pub product: ZetaValue,
    #[serde(serialize_with = "ser_complex")]
    pub telescoped: ComplexPoint,
}

/// Partial product of `η(s + l)`, `l = 0..=shifts`, whose limit is `1/Z(s)`.
pub fn shifted_eta_product(s: ComplexPoint, shifts: usize, order: usize) -> Result<TelescopedProduct> {
    require_convergent(s)?;
    let mut prod = ComplexPoint::new(1.0, 0.0);
    for l in 0..=shifts {
        prod *= eta_det_ratio(s + l as f64, order)?.value;
    }
    let top = det_finite(s + (shifts + 1) as f64, DetKind::MinusSquare, order)?.value;
    let bottom = det_finite(s, DetKind::MinusSquare, order)?.value;
    let caps = [("order", order as f64), ("shifts", shifts as f64)];
    // |det(1 - A²_{s+L+1}) - 1| measures how far the partial product is from 1/Z(s).
    let mut product = ratio_value(s, top, bottom, ZetaRoute::DetRatio, &caps, Some((top - 1.0).norm()));
    product.value = prod;
    Ok(TelescopedProduct { product, telescoped: top / bottom })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> ComplexPoint {
        ComplexPoint::new(re, im)
    }

    #[test]
    fn telescoping() {
        for &(s, l) in &[(c(2.0, 0.0), 0usize), (c(1.7, 0.4), 3)] {
            let t = shifted_eta_product(s, l, 24).unwrap();
            assert!((t.product.value - t.telescoped).norm() < 1e-12 * t.telescoped.norm());
        }
        let single = shifted_eta_product(c(2.0, 0.0), 0, 24).unwrap();
        let eta = eta_det_ratio(c(2.0, 0.0), 24).unwrap();
        assert!((single.product.value - eta.value).norm() < 1e-14);
    }

    #[test]
    fn pole_at_one() {
        let v = xi_det_ratio(c(1.0, 0.0), 48).unwrap();
        assert!(v.is_pole());
        let v = xi_det_ratio(c(2.0, 0.0), 48).unwrap();
        assert!(!v.is_pole());
    }
}
