//! Dense complex determinants and eigenvalues.
//!
//! LU and the complex Schur decomposition come from nalgebra; balancing
//! (Parlett-Reinsch, powers of two) is applied before the eigenvalue solve
//! because truncated operator matrices have rows spanning many decades.

use nalgebra::DMatrix;

use crate::{ComplexPoint, Error, Result};

pub type CMatrix = DMatrix<ComplexPoint>;

/// Determinant by partial-pivot LU.
pub fn determinant(m: &CMatrix) -> Result<ComplexPoint> {
    if !m.is_square() {
        return Err(Error::Domain("determinant of non-square matrix".into()));
    }
    if m.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::Overflow("non-finite matrix entry".into()));
    }
    let d = m.clone().lu().determinant();
    crate::check_finite(d, "determinant")
}

/// Diagonal similarity by powers of two that equalises row and column norms.
pub fn balance(m: &mut CMatrix) {
    let n = m.nrows();
    let radix = 2.0f64;
    let mut converged = false;
    let mut sweeps = 0;
    while !converged && sweeps < 100 {
        converged = true;
        sweeps += 1;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += m[(j, i)].norm();
                    r += m[(i, j)].norm();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut cc = c;
            let mut rr = r;
            while cc < rr / radix {
                cc *= radix;
                rr /= radix;
                f *= radix;
            }
            while cc >= rr * radix {
                cc /= radix;
                rr *= radix;
                f /= radix;
            }
            if (cc + rr) < 0.95 * s {
                converged = false;
                for j in 0..n {
                    m[(i, j)] /= f;
                    m[(j, i)] *= f;
                }
            }
        }
    }
}

/// All eigenvalues (balanced complex Schur form), unsorted.
pub fn eigenvalues(m: &CMatrix) -> Result<Vec<ComplexPoint>> {
    if !m.is_square() {
        return Err(Error::Domain("eigenvalues of non-square matrix".into()));
    }
    let mut b = m.clone();
    balance(&mut b);
    let n = b.nrows();
    let schur = nalgebra::linalg::Schur::try_new(b, 1e-15, 100 * n.max(10))
        .ok_or_else(|| Error::Eigensolver(format!("Schur iteration did not converge for n = {n}")))?;
    let (_, t) = schur.unpack();
    let ev: Vec<ComplexPoint> = (0..n).map(|i| t[(i, i)]).collect();
    if ev.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::Eigensolver("non-finite eigenvalue".into()));
    }
    Ok(ev)
}

/// Sorts by decreasing magnitude; near-ties by increasing argument in `(-π, π]`.
pub fn sort_spectrum(ev: &mut [ComplexPoint]) {
    ev.sort_by(|a, b| {
        let (na, nb) = (a.norm(), b.norm());
        let scale = na.max(nb).max(1e-300);
        if (na - nb).abs() <= 1e-12 * scale {
            a.arg().total_cmp(&b.arg())
        } else {
            nb.total_cmp(&na)
        }
    });
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> ComplexPoint {
        ComplexPoint::new(re, im)
    }

    #[test]
    fn small_determinant() {
        let m = CMatrix::from_row_slice(2, 2, &[c(1.0, 1.0), c(2.0, 0.0), c(0.0, 3.0), c(4.0, 0.0)]);
        // (1+i)4 - 2(3i) = 4 - 2i
        assert!((determinant(&m).unwrap() - c(4.0, -2.0)).norm() < 1e-14);
    }

    #[test]
    fn triangular_eigenvalues_survive_bad_scaling() {
        let n = 6;
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c(1.0 / (i + 1) as f64, 0.0);
            for j in i + 1..n {
                m[(i, j)] = c(10f64.powi((j - i) as i32 * 3), 0.0);
            }
        }
        let mut ev = eigenvalues(&m).unwrap();
        sort_spectrum(&mut ev);
        for (i, z) in ev.iter().enumerate() {
            assert!((z - c(1.0 / (i + 1) as f64, 0.0)).norm() < 1e-10, "{i}: {z}");
        }
    }

    #[test]
    fn rotation_ties_by_argument() {
        let m = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        let mut ev = eigenvalues(&m).unwrap();
        sort_spectrum(&mut ev);
        assert!((ev[0] - c(0.0, -1.0)).norm() < 1e-14);
        assert!((ev[1] - c(0.0, 1.0)).norm() < 1e-14);
    }
}
