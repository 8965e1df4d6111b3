use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use super::{require_matrix_domain, DiscDomain};
use crate::format::fmt17;
use crate::linalg::CMatrix;
use crate::parallel::map_indexed;
use crate::specfun::dd::{CDd, Dd};
use crate::specfun::{hurwitz_zeta_dd, log_gamma, riemann_zeta};
use crate::{ComplexPoint, Error, Result};

/// Largest supported truncation order.
pub const MAX_ORDER: usize = 128;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Basis {
    /// Powers `(z - 1)^k` centred at the disc centre.
    MonomialAtOne,
    /// Powers `z^k`; the image of `z^k` is the Hurwitz function `ζ(2s+k, z+1)`.
    HurwitzBasis,
}

/// Truncated `M x M` representation `a_{mk}` with `L_s e_k = Σ_m a_{mk} e_m`.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    pub s: ComplexPoint,
    pub order: usize,
    pub basis: Basis,
    pub entries: CMatrix,
    pub disc: DiscDomain,
}

impl OperatorMatrix {
    pub fn trace(&self) -> ComplexPoint {
        self.entries.diagonal().iter().sum()
    }

    /// Trace of the `n`-th power.
    pub fn power_trace(&self, n: usize) -> ComplexPoint {
        if n == 0 {
            return ComplexPoint::new(self.order as f64, 0.0);
        }
        let mut p = self.entries.clone();
        for _ in 1..n {
            p = &p * &self.entries;
        }
        p.diagonal().iter().sum()
    }

    /// Copy with the sign of entry `(m, k)` reversed; used by negative controls.
    pub fn with_flipped_sign(&self, m: usize, k: usize) -> OperatorMatrix {
        let mut out = self.clone();
        out.entries[(m, k)] = -out.entries[(m, k)];
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("matrix serializes")
    }

    pub fn from_json(text: &str) -> Result<OperatorMatrix> {
        let v: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::Domain(format!("bad matrix JSON: {e}")))?;
        let pair = |x: &serde_json::Value| -> Result<ComplexPoint> {
            let a = x.as_array().filter(|a| a.len() == 2).ok_or_else(|| Error::Domain("expected [re, im]".into()))?;
            let re = a[0].as_f64().ok_or_else(|| Error::Domain("bad real part".into()))?;
            let im = a[1].as_f64().ok_or_else(|| Error::Domain("bad imaginary part".into()))?;
            Ok(ComplexPoint::new(re, im))
        };
        let s = pair(&v["s"])?;
        let order = v["order"].as_u64().ok_or_else(|| Error::Domain("missing order".into()))? as usize;
        let basis = match v["basis"].as_str() {
            Some("MonomialAtOne") => Basis::MonomialAtOne,
            Some("HurwitzBasis") => Basis::HurwitzBasis,
            other => return Err(Error::Domain(format!("unknown basis {other:?}"))),
        };
        let entries = v["entries"].as_array().ok_or_else(|| Error::Domain("missing entries".into()))?;
        if entries.len() != order * order {
            return Err(Error::Domain("entry count does not match order".into()));
        }
        let vals = entries.iter().map(pair).collect::<Result<Vec<_>>>()?;
        let radius = v["radius"].as_f64().unwrap_or(super::disc::DEFAULT_RADIUS);
        Ok(OperatorMatrix {
            s,
            order,
            basis,
            entries: CMatrix::from_row_slice(order, order, &vals),
            disc: DiscDomain::new(radius)?,
        })
    }
}

impl Serialize for OperatorMatrix {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let raw = |x: f64| serde_json::value::RawValue::from_string(fmt17(x)).expect("number");
        let mut st = ser.serialize_struct("OperatorMatrix", 5)?;
        st.serialize_field("s", &[raw(self.s.re), raw(self.s.im)])?;
        st.serialize_field("order", &self.order)?;
        st.serialize_field("basis", &self.basis)?;
        let mut flat = Vec::with_capacity(self.order * self.order);
        for m in 0..self.order {
            for k in 0..self.order {
                let z = self.entries[(m, k)];
                flat.push([raw(z.re), raw(z.im)]);
            }
        }
        st.serialize_field("entries", &flat)?;
        st.serialize_field("radius", &raw(self.disc.radius()))?;
        st.end()
    }
}

fn check_order(order: usize) -> Result<()> {
    if order == 0 || order > MAX_ORDER {
        return Err(Error::Domain(format!("order must lie in 1..={MAX_ORDER}, got {order}")));
    }
    Ok(())
}

fn binomials(n: usize) -> Vec<Vec<u128>> {
    let mut c = vec![vec![0u128; n]; n];
    for k in 0..n {
        c[k][0] = 1;
        for j in 1..=k {
            c[k][j] = c[k - 1][j - 1] + if j < k { c[k - 1][j] } else { 0 };
        }
    }
    c
}

/// Matrix in the basis `(z-1)^k`:
///
/// `a_{mk} = Σ_{j<=k} C(k,j) (-1)^{m+k-j} (2s+j)_m / m! (ζ(2s+j+m) - 1)`.
///
/// The binomial sum cancels heavily (terms grow like `3^k` while entries
/// decay), so it is accumulated in double-double with exact binomials,
/// double-double rising factorials and `ζ(w) - 1 = ζ(w, 2)` evaluated
/// directly; entries are rounded to double at the end.
pub fn matrix_monomial(s: ComplexPoint, order: usize, disc: &DiscDomain) -> Result<OperatorMatrix> {
    require_matrix_domain(s)?;
    check_order(order)?;
    let two_s = CDd::from_c64(s) + CDd::from_c64(s);
    // zeta(2s + q, 2) for q = 0..2M-2
    let zetas: Vec<Result<CDd>> =
        map_indexed(2 * order - 1, |q| hurwitz_zeta_dd(two_s + CDd::from_real(Dd::from_f64(q as f64)), 2));
    let zetas = zetas.into_iter().collect::<Result<Vec<_>>>()?;
    // rising[j][m] = (2s+j)_m / m!
    let rising: Vec<Vec<CDd>> = map_indexed(order, |j| {
        let base = two_s + CDd::from_real(Dd::from_f64(j as f64));
        let mut row = Vec::with_capacity(order);
        let mut r = CDd::ONE;
        row.push(r);
        for m in 1..order {
            let f = base + CDd::from_real(Dd::from_f64((m - 1) as f64));
            r = (r * f).scale(Dd::ONE / Dd::from_f64(m as f64));
            row.push(r);
        }
        row
    });
    let binom = binomials(order);
    let rows: Vec<Vec<ComplexPoint>> = map_indexed(order, |m| {
        (0..order)
            .map(|k| {
                let mut acc = CDd::ZERO;
                for j in 0..=k {
                    let term = (rising[j][m] * zetas[j + m]).scale(Dd::from_u128(binom[k][j]));
                    if (m + k - j) % 2 == 0 {
                        acc = acc + term;
                    } else {
                        acc = acc - term;
                    }
                }
                acc.to_c64()
            })
            .collect()
    });
    let mut entries = CMatrix::zeros(order, order);
    for (m, row) in rows.into_iter().enumerate() {
        for (k, v) in row.into_iter().enumerate() {
            entries[(m, k)] = crate::check_finite(v, "matrix entry")?;
        }
    }
    Ok(OperatorMatrix { s, order, basis: Basis::MonomialAtOne, entries, disc: *disc })
}

/// Matrix in the basis `z^k`: `a_{mk} = (-1)^m / m! Γ(2s+k+m)/Γ(2s+k) ζ(2s+k+m)`,
/// the Taylor coefficients at 0 of `L_s z^k = ζ(2s+k, z+1)`.
///
/// These expansions converge only for `|z| < 1`, which does not contain the
/// disc, so truncations of this matrix do not approximate the spectrum.
pub fn matrix_hurwitz(s: ComplexPoint, order: usize, disc: &DiscDomain) -> Result<OperatorMatrix> {
    require_matrix_domain(s)?;
    check_order(order)?;
    let rows: Vec<Result<Vec<ComplexPoint>>> = map_indexed(order, |m| {
        (0..order)
            .map(|k| {
                let a = 2.0 * s + k as f64;
                let lg = log_gamma(a + m as f64)? - log_gamma(a)? - log_gamma(ComplexPoint::new(m as f64 + 1.0, 0.0))?;
                let z = riemann_zeta(a + m as f64)?;
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                crate::check_finite(sign * lg.exp() * z, "matrix entry")
            })
            .collect()
    });
    let mut entries = CMatrix::zeros(order, order);
    for (m, row) in rows.into_iter().enumerate() {
        for (k, v) in row?.into_iter().enumerate() {
            entries[(m, k)] = v;
        }
    }
    Ok(OperatorMatrix { s, order, basis: Basis::HurwitzBasis, entries, disc: *disc })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> ComplexPoint {
        ComplexPoint::new(re, im)
    }

    #[test]
    fn first_entries() {
        let a = matrix_monomial(c(1.0, 0.0), 4, &DiscDomain::default()).unwrap();
        // a_00 = zeta(2) - 1, a_10 = -2 (zeta(3) - 1)
        assert!((a.entries[(0, 0)].re - 0.644_934_066_848_226_4).abs() < 1e-15);
        assert!((a.entries[(1, 0)].re + 2.0 * 0.202_056_903_159_594_3).abs() < 1e-15);
        assert_eq!(a.basis, Basis::MonomialAtOne);
    }

    #[test]
    fn json_roundtrip() {
        let a = matrix_monomial(c(1.5, 0.25), 6, &DiscDomain::default()).unwrap();
        let b = OperatorMatrix::from_json(&a.to_json()).unwrap();
        assert_eq!(a, b);
        assert!(a.to_json().starts_with(
            r#"{"s":[1.5000000000000000e0,2.5000000000000000e-1],"order":6,"basis":"MonomialAtOne","entries":[["#
        ));
    }

    #[test]
    fn domain_checks() {
        let d = DiscDomain::default();
        assert!(matches!(matrix_monomial(c(0.4, 0.0), 8, &d), Err(Error::Domain(_))));
        assert!(matches!(matrix_monomial(c(0.5, 0.0), 8, &d), Err(Error::Pole(_))));
        assert!(matrix_monomial(c(0.5, 9.5), 8, &d).is_ok());
        assert!(matrix_monomial(c(1.0, 0.0), 0, &d).is_err());
    }

    #[test]
    fn hurwitz_columns_reproduce_the_operator() {
        use crate::operator::apply_direct;
        let d = DiscDomain::default();
        let s = c(1.25, 0.5);
        let a = matrix_hurwitz(s, 60, &d).unwrap();
        for &z in &[c(0.3, 0.0), c(0.1, 0.4), c(-0.2, -0.3)] {
            for k in 0..4 {
                let series: ComplexPoint = (0..60).map(|m| a.entries[(m, k)] * z.powu(m as u32)).sum();
                let direct = apply_direct(s, |w| w.powu(k as u32), z, &d, 64).unwrap().value;
                assert!((series - direct).norm() < 1e-10 * direct.norm(), "z = {z}, k = {k}");
            }
        }
    }

    #[test]
    fn hurwitz_truncations_do_not_approximate_the_spectrum() {
        let d = DiscDomain::default();
        let lead = |a: &OperatorMatrix| {
            let ev = crate::linalg::eigenvalues(&a.entries).unwrap();
            ev.iter().map(|l| l.norm()).fold(0.0, f64::max)
        };
        assert!((lead(&matrix_monomial(c(1.0, 0.0), 32, &d).unwrap()) - 1.0).abs() < 1e-10);
        assert!(lead(&matrix_hurwitz(c(1.0, 0.0), 32, &d).unwrap()) > 1e6);
    }

    #[test]
    fn monomial_columns_are_taylor_coefficients_of_the_image() {
        use crate::operator::direct_taylor_coefficients;
        let d = DiscDomain::default();
        let s = c(1.5, -1.0);
        let a = matrix_monomial(s, 16, &d).unwrap();
        for k in 0..4i32 {
            let t = direct_taylor_coefficients(s, |z| (z - 1.0).powi(k), 10, &d, 0.75, 64).unwrap();
            for (m, v) in t.iter().enumerate() {
                assert!((a.entries[(m, k as usize)] - v).norm() < 1e-12, "m = {m}, k = {k}");
            }
        }
    }
}
