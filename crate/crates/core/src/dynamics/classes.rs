use serde::Serialize;

use super::word::{canonical_rotation, primitive_period, word_matrix, CfWord};
use super::WORD_LIMIT;
use crate::format::fmt17;
use crate::{Error, Result};

/// Hyperbolic conjugacy class of the modular group labelled by a reduced word
/// of even length, up to rotation.
///
/// A rotation class whose root word has even period carries two
/// `SL(2, Z)` conjugacy classes (the two words related by an odd shift are
/// conjugate only by a determinant -1 matrix), recorded in `sl2_classes`.
/// If the root has odd period the class is a single one and its primitive
/// element is the square of the root's matrix, so `primitivity_k = |w| / (2p)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HyperbolicClass {
    pub word: CfWord,
    pub matrix: [u128; 4],
    pub trace: u128,
    pub norm: f64,
    pub length_l: usize,
    pub primitivity_k: usize,
    pub sl2_classes: usize,
    pub geodesic_length: f64,
}

impl HyperbolicClass {
    pub fn is_primitive(&self) -> bool {
        self.primitivity_k == 1
    }
}

/// Norm `N = ρ²` with `ρ = (t + sqrt(t² - 4)) / 2` the larger eigenvalue.
pub fn norm_from_trace(t: f64) -> f64 {
    let rho = (t + (t * t - 4.0).sqrt()) / 2.0;
    rho * rho
}

/// Class of the word (which must have even length), keyed by its canonical rotation.
pub fn reduced_matrix(word: &CfWord) -> Result<HyperbolicClass> {
    let n = word.len();
    if n % 2 != 0 {
        return Err(Error::Parity(format!("word {word} has odd length {n}")));
    }
    let canon = canonical_rotation(word);
    let matrix = word_matrix(&canon)?;
    let trace = matrix[0] + matrix[3];
    let t = trace as f64;
    let rho = (t + (t * t - 4.0).sqrt()) / 2.0;
    let p = primitive_period(&canon);
    let (primitivity_k, sl2_classes) = if p % 2 == 0 { (n / p, 2) } else { (n / (2 * p), 1) };
    Ok(HyperbolicClass {
        word: canon,
        matrix,
        trace,
        norm: rho * rho,
        length_l: n / 2,
        primitivity_k,
        sl2_classes,
        geodesic_length: 2.0 * rho.ln(),
    })
}

/// All classes with norm at most `norm_cap` whose words have length at most
/// `length_cap`, sorted by trace then word.
///
/// Words are enumerated depth first. A prefix matrix `P` is abandoned once
/// `tr(P F^r)` exceeds the trace cap, where `F = [[0,1],[1,1]]` and `r` is the
/// number of digits still to choose: every completion has entrywise larger
/// factors, so this bounds the trace of all extensions from below.
pub fn enumerate_classes(norm_cap: f64, length_cap: usize) -> Result<Vec<HyperbolicClass>> {
    if !(norm_cap > 1.0) {
        return Err(Error::Domain(format!("norm_cap must exceed 1, got {norm_cap}")));
    }
    if length_cap < 2 {
        return Err(Error::Domain("length_cap must be at least 2".into()));
    }
    let sqrt_cap = norm_cap.sqrt();
    let trace_cap = (sqrt_cap + 1.0 / sqrt_cap).floor() as u128;
    let mut out = Vec::new();
    let mut visited: u128 = 0;
    for n in (2..=length_cap).step_by(2) {
        let mut digits = Vec::with_capacity(n);
        dfs(n, trace_cap, [1, 0, 0, 1], &mut digits, &mut |d: &[u32]| -> Result<()> {
            visited += 1;
            if visited > WORD_LIMIT {
                return Err(Error::Resource("class enumeration exceeded the word limit".into()));
            }
            let word = CfWord::new(d.to_vec())?;
            if canonical_rotation(&word) == word {
                let class = reduced_matrix(&word)?;
                if class.norm <= norm_cap {
                    out.push(class);
                }
            }
            Ok(())
        })?;
    }
    out.sort_by(|a, b| a.trace.cmp(&b.trace).then_with(|| a.word.cmp(&b.word)));
    Ok(out)
}

fn fib_bound(m: [u128; 4], r: usize) -> u128 {
    // trace of m * F^r, F = [[0,1],[1,1]]
    let (mut a, mut b, mut c, mut d) = (m[0], m[1], m[2], m[3]);
    for _ in 0..r {
        let (na, nb) = (b, a.saturating_add(b));
        let (nc, nd) = (d, c.saturating_add(d));
        a = na;
        b = nb;
        c = nc;
        d = nd;
    }
    a.saturating_add(d)
}

fn dfs<F>(n: usize, cap: u128, m: [u128; 4], digits: &mut Vec<u32>, visit: &mut F) -> Result<()>
where
    F: FnMut(&[u32]) -> Result<()>,
{
    if digits.len() == n {
        if m[0] + m[3] <= cap {
            visit(digits)?;
        }
        return Ok(());
    }
    let remaining = n - digits.len() - 1;
    let mut i: u128 = 1;
    loop {
        let nb = i.saturating_mul(m[1]).saturating_add(m[0]);
        let nd = i.saturating_mul(m[3]).saturating_add(m[2]);
        let next = [m[1], nb, m[3], nd];
        if fib_bound(next, remaining) > cap {
            break;
        }
        digits.push(i as u32);
        dfs(n, cap, next, digits, visit)?;
        digits.pop();
        i += 1;
    }
    Ok(())
}

/// Census table with columns `word,trace,norm,length_l,primitivity_k,geodesic_length`.
pub fn census_csv(classes: &[HyperbolicClass]) -> String {
    let mut s = String::from("word,trace,norm,length_l,primitivity_k,geodesic_length\n");
    for c in classes {
        s.push_str(&format!(
            "{},{},{},{},{},{}\n",
            c.word,
            c.trace,
            fmt17(c.norm),
            c.length_l,
            c.primitivity_k,
            fmt17(c.geodesic_length)
        ));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{enumerate_fix_words, word_trace};
    use std::collections::BTreeSet;

    fn w(d: &[u32]) -> CfWord {
        CfWord::new(d.to_vec()).unwrap()
    }

    #[test]
    fn golden_class() {
        let c = reduced_matrix(&w(&[1, 1])).unwrap();
        assert_eq!(c.matrix, [1, 1, 1, 2]);
        assert_eq!(c.trace, 3);
        assert!((c.norm - 6.854_101_966_249_685).abs() < 1e-12);
        assert_eq!(c.primitivity_k, 1);
        assert_eq!(c.sl2_classes, 1);
        let c4 = reduced_matrix(&w(&[1, 1, 1, 1])).unwrap();
        assert_eq!(c4.trace, 7);
        assert_eq!(c4.primitivity_k, 2);
        let c12 = reduced_matrix(&w(&[2, 1, 2, 1])).unwrap();
        assert_eq!(c12.word, w(&[1, 2, 1, 2]));
        assert_eq!(c12.primitivity_k, 2);
        assert!(matches!(reduced_matrix(&w(&[1, 2, 3])), Err(Error::Parity(_))));
    }

    #[test]
    fn smallest_norm() {
        let cs = enumerate_classes(7.0, 4).unwrap();
        assert_eq!(cs.len(), 1);
        assert_eq!(cs[0].word, w(&[1, 1]));
    }

    #[test]
    fn matches_brute_force() {
        // Any digit exceeds the trace, so digits up to the trace cap suffice.
        let cap: f64 = 200.0;
        let tmax = cap.sqrt() + 1.0;
        let mut brute = BTreeSet::new();
        for n in [2usize, 4, 6] {
            for word in enumerate_fix_words(n, tmax as u32).unwrap() {
                let t = word_trace(&word).unwrap() as f64;
                if norm_from_trace(t) <= cap {
                    brute.insert(canonical_rotation(&word));
                }
            }
        }
        let got: BTreeSet<CfWord> = enumerate_classes(cap, 6).unwrap().into_iter().map(|c| c.word).collect();
        assert_eq!(got, brute);
    }

    #[test]
    fn census_format() {
        let cs = enumerate_classes(7.0, 2).unwrap();
        let csv = census_csv(&cs);
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "word,trace,norm,length_l,primitivity_k,geodesic_length");
        assert!(lines.next().unwrap().starts_with("1-1,3,6.8541019662496"));
    }
}
