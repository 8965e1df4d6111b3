use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::surd::QuadraticSurd;
use super::WORD_LIMIT;
use crate::{Error, Result};

/// Finite word of continued-fraction digits, each at least 1.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CfWord(Vec<u32>);

impl CfWord {
    pub fn new(digits: Vec<u32>) -> Result<Self> {
        if digits.is_empty() {
            return Err(Error::Domain("empty continued-fraction word".into()));
        }
        if digits.contains(&0) {
            return Err(Error::Domain("continued-fraction digits must be >= 1".into()));
        }
        Ok(CfWord(digits))
    }

    pub fn digits(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Word rotated left by `k` positions.
    pub fn rotated(&self, k: usize) -> CfWord {
        let n = self.0.len();
        let k = k % n;
        let mut d = self.0[k..].to_vec();
        d.extend_from_slice(&self.0[..k]);
        CfWord(d)
    }

    /// Word repeated `times` times.
    pub fn repeated(&self, times: usize) -> CfWord {
        CfWord(self.0.repeat(times))
    }
}

impl fmt::Display for CfWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|d| d.to_string()).collect();
        write!(f, "{}", parts.join("-"))
    }
}

impl std::str::FromStr for CfWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let digits = s
            .split(['-', ','])
            .map(|p| p.trim().parse::<u32>().map_err(|_| Error::Domain(format!("bad digit '{p}' in word '{s}'"))))
            .collect::<Result<Vec<_>>>()?;
        CfWord::new(digits)
    }
}

/// Gauss map `T(x) = 1/x - floor(1/x)` on `(0, 1]`.
pub fn gauss_map(x: f64) -> Result<f64> {
    if !(x > 0.0 && x <= 1.0) {
        return Err(Error::Domain(format!("gauss_map needs 0 < x <= 1, got {x}")));
    }
    let y = 1.0 / x;
    Ok(y - y.floor())
}

/// `[[a, b], [c, d]] = Π_k [[0, 1], [1, i_k]]`, exact; errors on `u128` overflow.
pub fn word_matrix(word: &CfWord) -> Result<[u128; 4]> {
    let (mut a, mut b, mut c, mut d) = (1u128, 0u128, 0u128, 1u128);
    for &i in word.digits() {
        let i = i as u128;
        let nb = i.checked_mul(b).and_then(|x| x.checked_add(a));
        let nd = i.checked_mul(d).and_then(|x| x.checked_add(c));
        match (nb, nd) {
            (Some(nb), Some(nd)) => {
                a = b;
                b = nb;
                c = d;
                d = nd;
            }
            _ => return Err(Error::Overflow(format!("word matrix of {word}"))),
        }
    }
    Ok([a, b, c, d])
}

/// Trace of [`word_matrix`].
pub fn word_trace(word: &CfWord) -> Result<u128> {
    let m = word_matrix(word)?;
    m[0].checked_add(m[3]).ok_or_else(|| Error::Overflow(format!("trace of {word}")))
}

/// Purely periodic point `[0; i_1, ..., i_n, i_1, ...]` as an exact surd.
///
/// It is the attracting fixed point of `x -> (ax + b)/(cx + d)` for the word
/// matrix, the positive root of `c x² + (d - a) x - b = 0`.
pub fn periodic_point(word: &CfWord) -> Result<QuadraticSurd> {
    let [a, b, c, d] = word_matrix(word)?;
    let (a, b, c, d) = (BigInt::from(a), BigInt::from(b), BigInt::from(c), BigInt::from(d));
    let disc = (&a - &d) * (&a - &d) + BigInt::from(4) * &b * &c;
    QuadraticSurd::new(&a - &d, BigInt::from(1), BigInt::from(2) * &c, disc)
}

/// `Π_{k<n} T^k x` over the periodic orbit of the word, from the exact surds of
/// all rotations.
pub fn orbit_product(word: &CfWord) -> Result<f64> {
    let mut acc = periodic_point(word)?;
    for k in 1..word.len() {
        acc = acc.mul(&periodic_point(&word.rotated(k))?)?;
    }
    Ok(acc.to_f64())
}

/// Orbit product from the trace `t` of the word matrix of a word of length `n`:
/// `2 / (t + sqrt(t² - 4 (-1)^n))`.
pub fn orbit_product_from_trace(t: f64, n: usize) -> f64 {
    let eps = if n % 2 == 0 { 1.0 } else { -1.0 };
    2.0 / (t + (t * t - 4.0 * eps).sqrt())
}

/// Lexicographically least rotation; equal for words labelling the same periodic orbit.
pub fn canonical_rotation(word: &CfWord) -> CfWord {
    (0..word.len()).map(|k| word.rotated(k)).min().expect("non-empty word")
}

/// Smallest `p` with `word = u^(n/p)` for a word `u` of length `p`.
pub fn primitive_period(word: &CfWord) -> usize {
    let d = word.digits();
    let n = d.len();
    (1..=n).find(|&p| n % p == 0 && (p..n).all(|i| d[i] == d[i - p])).unwrap_or(n)
}

/// All words of length `n` with digits in `1..=max_digit`, in lexicographic order.
pub fn enumerate_fix_words(n: usize, max_digit: u32) -> Result<Vec<CfWord>> {
    if n == 0 || max_digit == 0 {
        return Err(Error::Domain("need n >= 1 and max_digit >= 1".into()));
    }
    let count = (max_digit as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if count > WORD_LIMIT {
        return Err(Error::Resource(format!("{count} words of length {n} exceed the limit {WORD_LIMIT}")));
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut cur = vec![1u32; n];
    loop {
        out.push(CfWord(cur.clone()));
        let mut pos = n;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            if cur[pos] < max_digit {
                cur[pos] += 1;
                for c in cur.iter_mut().skip(pos + 1) {
                    *c = 1;
                }
                break;
            }
        }
    }
}

/// The trace of `Π_k [[0, 1], [1, x_k]]` as a multilinear polynomial in the
/// digits `x_0..x_{n-1}`.
///
/// Each term is a bit mask of the variables it contains and a positive integer
/// coefficient. The monomials are the complements of matchings of the
/// `n`-cycle, so for `n = 2` the constant term is 2 and for `n = 3` the
/// polynomial is `x0 x1 x2 + x0 + x1 + x2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TracePolynomial {
    pub n: usize,
    pub terms: Vec<(u32, u64)>,
}

/// Builds the [`TracePolynomial`] for words of length `n <= 31`.
pub fn trace_polynomial(n: usize) -> TracePolynomial {
    assert!((1..32).contains(&n), "trace polynomial needs 1 <= n < 32");
    type Poly = BTreeMap<u32, u64>;
    fn mul(a: &Poly, b: &Poly) -> Poly {
        let mut out = Poly::new();
        for (&ma, &ca) in a {
            for (&mb, &cb) in b {
                *out.entry(ma | mb).or_insert(0) += ca * cb;
            }
        }
        out
    }
    fn add(a: &Poly, b: &Poly) -> Poly {
        let mut out = a.clone();
        for (&m, &c) in b {
            *out.entry(m).or_insert(0) += c;
        }
        out
    }
    let one: Poly = [(0u32, 1u64)].into_iter().collect();
    let zero = Poly::new();
    let mut m = [one.clone(), zero.clone(), zero, one.clone()];
    for k in 0..n {
        let x: Poly = [(1u32 << k, 1u64)].into_iter().collect();
        // [a b; c d] * [0 1; 1 x] = [b, a + b x; d, c + d x]
        let nb = add(&m[0], &mul(&m[1], &x));
        let nd = add(&m[2], &mul(&m[3], &x));
        m = [m[1].clone(), nb, m[3].clone(), nd];
    }
    let tr = add(&m[0], &m[3]);
    TracePolynomial { n, terms: tr.into_iter().filter(|&(_, c)| c != 0).collect() }
}

impl TracePolynomial {
    pub fn eval(&self, digits: &[u64]) -> u128 {
        self.terms
            .iter()
            .map(|&(mask, c)| {
                let mut v = c as u128;
                for (k, &d) in digits.iter().enumerate() {
                    if mask & (1 << k) != 0 {
                        v *= d as u128;
                    }
                }
                v
            })
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(d: &[u32]) -> CfWord {
        CfWord::new(d.to_vec()).unwrap()
    }

    #[test]
    fn golden_orbit() {
        let g = (5f64.sqrt() - 1.0) / 2.0;
        assert!((periodic_point(&w(&[1])).unwrap().to_f64() - g).abs() < 2e-16);
        assert!((orbit_product(&w(&[1])).unwrap() - g).abs() < 2e-16);
        assert!((orbit_product(&w(&[1, 1])).unwrap() - g * g).abs() < 2e-16);
    }

    #[test]
    fn period_two_orbit() {
        // x = [0; 1, 2, 1, 2, ...] = sqrt(3) - 1
        let x = periodic_point(&w(&[1, 2])).unwrap().to_f64();
        assert!((x - (3f64.sqrt() - 1.0)).abs() < 1e-15);
        let p = orbit_product(&w(&[1, 2])).unwrap();
        assert!((p - orbit_product_from_trace(4.0, 2)).abs() < 1e-16);
    }

    #[test]
    fn gauss_map_moves_along_orbit() {
        let word = w(&[3, 1, 4, 1, 5]);
        let x0 = periodic_point(&word).unwrap().to_f64();
        let x1 = periodic_point(&word.rotated(1)).unwrap().to_f64();
        assert!((gauss_map(x0).unwrap() - x1).abs() < 1e-12);
        assert!(gauss_map(0.0).is_err());
    }

    #[test]
    fn rotations_and_periods() {
        assert_eq!(canonical_rotation(&w(&[3, 1, 2])), w(&[1, 2, 3]));
        assert_eq!(primitive_period(&w(&[1, 1, 1])), 1);
        assert_eq!(primitive_period(&w(&[1, 2, 1, 2])), 2);
        assert_eq!(primitive_period(&w(&[1, 2, 2])), 3);
        assert_eq!(w(&[1, 12, 3]).to_string(), "1-12-3");
        assert_eq!("1-12-3".parse::<CfWord>().unwrap(), w(&[1, 12, 3]));
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_fix_words(3, 4).unwrap().len(), 64);
        assert!(matches!(enumerate_fix_words(8, 40), Err(Error::Resource(_))));
    }

    #[test]
    fn trace_polynomials() {
        assert_eq!(trace_polynomial(1).terms, vec![(1, 1)]);
        assert_eq!(trace_polynomial(2).terms, vec![(0, 2), (3, 1)]);
        assert_eq!(trace_polynomial(3).terms, vec![(1, 1), (2, 1), (4, 1), (7, 1)]);
        for n in 1..=6 {
            let p = trace_polynomial(n);
            for word in enumerate_fix_words(n, 3).unwrap() {
                let d: Vec<u64> = word.digits().iter().map(|&x| x as u64).collect();
                assert_eq!(p.eval(&d), word_trace(&word).unwrap());
            }
        }
    }

    #[test]
    fn overflow_detected() {
        let big = CfWord::new(vec![u32::MAX; 10]).unwrap();
        assert!(matches!(word_matrix(&big), Err(Error::Overflow(_))));
    }
}
