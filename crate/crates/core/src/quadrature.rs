//! Adaptive Gauss-Kronrod (7/15) quadrature for complex-valued integrands.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::{ComplexPoint, Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_0,
];
const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

#[derive(Clone, Copy, Debug)]
pub struct QuadResult {
    pub value: ComplexPoint,
    pub error: f64,
    pub intervals: usize,
}

struct Piece {
    a: f64,
    b: f64,
    value: ComplexPoint,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk15<F: Fn(f64) -> ComplexPoint>(f: &F, a: f64, b: f64) -> Piece {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        kron += s * WGK[j];
        if j % 2 == 1 {
            gauss += s * WG[j / 2];
        }
    }
    let value = kron * h;
    let error = ((kron - gauss) * h).norm();
    Piece { a, b, value, error }
}

/// Integrates `f` over `[a, b]`, bisecting the interval with the largest error
/// estimate until the total estimate is below `max(abs_tol, rel_tol |I|)`.
pub fn integrate<F>(f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64, max_intervals: usize) -> Result<QuadResult>
where
    F: Fn(f64) -> ComplexPoint,
{
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain("integration limits must be finite".into()));
    }
    if a == b {
        return Ok(QuadResult { value: ComplexPoint::new(0.0, 0.0), error: 0.0, intervals: 0 });
    }
    let mut heap = BinaryHeap::new();
    let first = gk15(&f, a, b);
    let mut total = first.value;
    let mut err = first.error;
    heap.push(first);
    let mut count = 1;
    loop {
        let target = abs_tol.max(rel_tol * total.norm());
        if err <= target {
            break;
        }
        if count >= max_intervals {
            return Err(Error::Quadrature(format!(
                "error estimate {err:.3e} above tolerance {target:.3e} after {count} intervals"
            )));
        }
        let worst = heap.pop().expect("non-empty heap");
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            return Err(Error::Quadrature("interval collapsed below machine resolution".into()));
        }
        let l = gk15(&f, worst.a, mid);
        let r = gk15(&f, mid, worst.b);
        total += l.value + r.value - worst.value;
        err += l.error + r.error - worst.error;
        heap.push(l);
        heap.push(r);
        count += 1;
    }
    // Re-sum to drop the drift of the running updates.
    let mut value = ComplexPoint::new(0.0, 0.0);
    let mut error = 0.0;
    for p in heap.iter() {
        value += p.value;
        error += p.error;
    }
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(Error::Quadrature("non-finite integrand".into()));
    }
    Ok(QuadResult { value, error, intervals: count })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_and_exponential() {
        let r = integrate(|x| ComplexPoint::new(x * x, 0.0), 0.0, 3.0, 1e-14, 0.0, 100).unwrap();
        assert!((r.value.re - 9.0).abs() < 1e-13);
        let r = integrate(|x| ComplexPoint::new(0.0, x).exp(), 0.0, std::f64::consts::PI, 1e-13, 0.0, 100).unwrap();
        assert!((r.value - ComplexPoint::new(0.0, 2.0)).norm() < 1e-13);
    }

    #[test]
    fn endpoint_singularity() {
        // ∫_0^1 x^{-1/2} dx = 2
        let r = integrate(|x| ComplexPoint::new(x.powf(-0.5), 0.0), 0.0, 1.0, 1e-10, 0.0, 2000).unwrap();
        assert!((r.value.re - 2.0).abs() < 1e-9);
    }

    #[test]
    fn tolerance_failure_reported() {
        let r = integrate(|x| ComplexPoint::new((1.0 / x).sin() / x, 0.0), 1e-8, 1.0, 1e-14, 0.0, 5);
        assert!(matches!(r, Err(Error::Quadrature(_))));
    }
}
