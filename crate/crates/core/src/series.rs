//! Truncated complex power series.

use num_complex::Complex64;

/// Coefficients `c_0..c_{n-1}` of a power series truncated at order `n`.
pub type Series = Vec<Complex64>;

pub fn mul(a: &[Complex64], b: &[Complex64], n: usize) -> Series {
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for (i, &ai) in a.iter().enumerate().take(n) {
        if ai == Complex64::new(0.0, 0.0) {
            continue;
        }
        for (j, &bj) in b.iter().enumerate().take(n - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Reciprocal of a series with non-zero constant term.
pub fn recip(a: &[Complex64], n: usize) -> Series {
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    let inv0 = 1.0 / a[0];
    out[0] = inv0;
    for k in 1..n {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 1..=k.min(a.len() - 1) {
            acc += a[j] * out[k - j];
        }
        out[k] = -acc * inv0;
    }
    out
}

/// `log a` for a series with `a_0 = 1`.
pub fn log(a: &[Complex64], n: usize) -> Series {
    // (log a)' = a'/a
    let mut da = vec![Complex64::new(0.0, 0.0); n];
    for k in 1..n.min(a.len()) {
        da[k - 1] = a[k] * k as f64;
    }
    let q = mul(&da, &recip(a, n), n);
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for k in 1..n {
        out[k] = q[k - 1] / k as f64;
    }
    out
}

/// `exp a` for a series with `a_0 = 0`.
pub fn exp(a: &[Complex64], n: usize) -> Series {
    // e' = a' e, so k e_k = Σ_{j=1}^k j a_j e_{k-j}
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    out[0] = Complex64::new(1.0, 0.0);
    for k in 1..n {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 1..=k.min(a.len() - 1) {
            acc += a[j] * out[k - j] * j as f64;
        }
        out[k] = acc / k as f64;
    }
    out
}

/// `a^p` for a series with `a_0 = 1` and complex exponent `p`.
pub fn pow(a: &[Complex64], p: Complex64, n: usize) -> Series {
    let l: Series = log(a, n).into_iter().map(|c| c * p).collect();
    exp(&l, n)
}

/// Evaluates the series at `z` (Horner).
pub fn eval(a: &[Complex64], z: Complex64) -> Complex64 {
    a.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(v: &[f64]) -> Series {
        v.iter().map(|&x| Complex64::new(x, 0.0)).collect()
    }

    #[test]
    fn geometric_reciprocal() {
        let r = recip(&re(&[1.0, -1.0]), 6);
        for c in r {
            assert!((c.re - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn exp_log_inverse() {
        let a = re(&[1.0, 0.3, -0.2, 0.05]);
        let b = exp(&log(&a, 8), 8);
        for k in 0..8 {
            let want = if k < a.len() { a[k] } else { Complex64::new(0.0, 0.0) };
            assert!((b[k] - want).norm() < 1e-14);
        }
    }

    #[test]
    fn square_root_of_square() {
        let a = re(&[1.0, 2.0, 1.0]);
        let r = pow(&a, Complex64::new(0.5, 0.0), 6);
        assert!((r[0].re - 1.0).abs() < 1e-15 && (r[1].re - 1.0).abs() < 1e-15);
        for c in &r[2..] {
            assert!(c.norm() < 1e-14);
        }
    }
}
