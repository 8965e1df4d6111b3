//! The transfer operator `L_s f(z) = Σ_{n>=1} (z+n)^{-2s} f(1/(z+n))` on
//! holomorphic functions on the disc `D_r = {|z - 1| < r}`.

mod direct;
mod disc;
mod matrix;

pub use direct::{apply_direct, apply_direct_with, direct_taylor_coefficients, ApplyOptions, DirectValue};
pub use disc::{contains_image, image_disc, DiscDomain, HolomorphicSample};
pub use matrix::{matrix_hurwitz, matrix_monomial, Basis, OperatorMatrix};

use crate::{ComplexPoint, Error, Result};

/// Series and orbit routes need the defining series to converge.
pub(crate) fn require_convergent(s: ComplexPoint) -> Result<()> {
    if !(s.re.is_finite() && s.im.is_finite()) || s.re <= 0.5 {
        return Err(Error::Domain(format!("need Re(s) > 1/2, got s = {s}")));
    }
    Ok(())
}

/// Matrix routes use the analytic continuation of the entries and accept the
/// closed half-plane `Re(s) >= 1/2` except the pole at `s = 1/2`.
pub(crate) fn require_matrix_domain(s: ComplexPoint) -> Result<()> {
    if !(s.re.is_finite() && s.im.is_finite()) || s.re < 0.5 - 1e-9 {
        return Err(Error::Domain(format!("need Re(s) >= 1/2, got s = {s}")));
    }
    if (s - ComplexPoint::new(0.5, 0.0)).norm() < 1e-12 {
        return Err(Error::Pole("matrix entries have a pole at s = 1/2".into()));
    }
    Ok(())
}
