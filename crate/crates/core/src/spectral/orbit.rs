//! Sums of orbit weights over all words of a fixed length.
//!
//! For a word of length `n` with word-matrix trace `t` the orbit product is
//! `P = 2 / (t + sqrt(t² - 4ε))`, `ε = (-1)^n`, so every weight used here is a
//! function of `t` alone. Writing `x = ε/t²` and `C(x) = 2/(1 + sqrt(1-4x))`
//! (the Catalan generating function) gives `P = C(x)/t`, `1 - εP² = 2 - C(x)`,
//! hence convergent expansions
//!
//! * `P^{2s} / (1 - εP²) = Σ_j a_j ε^j t^{-2s-2j}` (trace weight),
//! * `P^{2s} = Σ_j b_j ε^j t^{-2s-2j}` (plain weight).
//!
//! The trace is multilinear in the digits. Splitting digit space by which
//! positions exceed a cutoff `K`, a region with large positions `L` has
//! `t = A Π_{l∈L}(i_l + c_l) (1 + X)`, where `X` only contains monomials of
//! degree at least two in `1/(i_l + c_l)`. Expanding `(1+X)^{-w}` and summing
//! each shifted power over `i_l > K` gives products of Hurwitz zeta values.
//! Digits up to `K` are enumerated exactly.

use std::collections::BTreeMap;

use crate::dynamics::{trace_polynomial, TracePolynomial, WORD_LIMIT};
use crate::parallel::{map_indexed, KahanSum};
use crate::series;
use crate::specfun::hurwitz_zeta;
use crate::{ComplexPoint, Error, Result};

/// Which function of the orbit product is summed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrbitWeight {
    /// `P^{2s} / (1 - (-1)^n P²)`, the summand of `tr L_s^n`.
    Trace,
    /// `P^{2s}`.
    Plain,
}

/// Result of an orbit sum.
#[derive(Clone, Copy, Debug)]
pub struct OrbitSum {
    pub value: ComplexPoint,
    /// Bound (digit-capped sums) or estimate (completed sums) of `|exact - value|`.
    pub tail_bound: f64,
    /// Number of words enumerated exactly.
    pub words: u128,
    pub cutoff: u32,
}

const GOLDEN_INV: f64 = 0.618_033_988_749_894_9;

fn eps(n: usize) -> f64 {
    if n % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Weight of a single word of length `n` from its trace.
pub fn weight_from_trace(s: ComplexPoint, n: usize, weight: OrbitWeight, t: f64) -> ComplexPoint {
    let e = eps(n);
    let p = 2.0 / (t + (t * t - 4.0 * e).sqrt());
    let p2s = (2.0 * s * p.ln()).exp();
    match weight {
        OrbitWeight::Trace => p2s / (1.0 - e * p * p),
        OrbitWeight::Plain => p2s,
    }
}

/// Upper bound on `|weight| / Π i_k^{-2σ}`.
fn weight_constant(n: usize, weight: OrbitWeight) -> f64 {
    match weight {
        OrbitWeight::Trace if n % 2 == 0 => 1.0 / (1.0 - GOLDEN_INV.powi(2 * n as i32)),
        _ => 1.0,
    }
}

/// Coefficients `a_j` (or `b_j`) of the expansion in `x = ε/t²`.
pub(super) fn weight_series(s: ComplexPoint, weight: OrbitWeight, terms: usize) -> Vec<ComplexPoint> {
    let mut catalan = vec![ComplexPoint::new(1.0, 0.0); terms];
    for k in 1..terms {
        let prev = catalan[k - 1].re;
        catalan[k] = ComplexPoint::new(prev * (2.0 * (2 * k - 1) as f64) / (k + 1) as f64, 0.0);
    }
    let cp = series::pow(&catalan, 2.0 * s, terms);
    match weight {
        OrbitWeight::Plain => cp,
        OrbitWeight::Trace => {
            let mut two_minus_c: Vec<ComplexPoint> = catalan.iter().map(|c| -c).collect();
            two_minus_c[0] = ComplexPoint::new(1.0, 0.0);
            series::mul(&cp, &series::recip(&two_minus_c, terms), terms)
        }
    }
}

fn check_args(s: ComplexPoint, n: usize) -> Result<()> {
    crate::operator::require_convergent(s)?;
    if n == 0 || n > 16 {
        return Err(Error::Domain(format!("word length must lie in 1..=16, got {n}")));
    }
    Ok(())
}

/// Sum over the digit cube `{1..=max_digit}^n`, with the certified bound
/// `c_n (ζ(2σ)^n - H(2σ)^n)` on all words having a larger digit, where
/// `H(2σ) = Σ_{i <= max_digit} i^{-2σ}`.
pub fn orbit_sum_capped(s: ComplexPoint, n: usize, weight: OrbitWeight, max_digit: u32) -> Result<OrbitSum> {
    check_args(s, n)?;
    if max_digit == 0 {
        return Err(Error::Domain("max_digit must be at least 1".into()));
    }
    let count = (max_digit as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if count > WORD_LIMIT {
        return Err(Error::Resource(format!("{count} words exceed the enumeration limit {WORD_LIMIT}")));
    }
    let (value, abs_sum) = cube_sum(s, n, weight, max_digit as u64);
    let two_sigma = ComplexPoint::new(2.0 * s.re, 0.0);
    let zeta = hurwitz_zeta(two_sigma, 1.0)?.re;
    let tail = hurwitz_zeta(two_sigma, max_digit as f64 + 1.0)?.re;
    let head = zeta - tail;
    // ζ^n - H^n = Σ_{k<n} ζ^{n-1-k} H^k (ζ - H), avoiding cancellation.
    let mut diff = 0.0;
    for k in 0..n {
        diff += zeta.powi((n - 1 - k) as i32) * head.powi(k as i32);
    }
    diff *= tail;
    let bound = weight_constant(n, weight) * diff + 1e-16 * abs_sum;
    Ok(OrbitSum { value, tail_bound: bound, words: count, cutoff: max_digit })
}

/// Exact sum over all words with digits in `1..=k`; also returns `Σ |term|`.
fn cube_sum(s: ComplexPoint, n: usize, weight: OrbitWeight, k: u64) -> (ComplexPoint, f64) {
    // Split on the first one or two digits for parallel work.
    let split = if n >= 2 { 2 } else { 1 };
    let chunks = (k as usize).pow(split as u32);
    let parts: Vec<(ComplexPoint, f64)> = map_indexed(chunks, |idx| {
        let mut m = [1u128, 0, 0, 1];
        let mut rest = idx;
        let mut prefix = Vec::with_capacity(split);
        for _ in 0..split {
            prefix.push((rest % k as usize) as u64 + 1);
            rest /= k as usize;
        }
        for &d in prefix.iter().rev() {
            m = step(m, d);
        }
        let mut acc = KahanSum::default();
        let mut abs = 0.0;
        dfs_cube(s, n, weight, k, n - split, m, &mut acc, &mut abs);
        (acc.value(), abs)
    });
    let mut acc = KahanSum::default();
    let mut abs = 0.0;
    for (v, a) in parts {
        acc.add(v);
        abs += a;
    }
    (acc.value(), abs)
}

#[inline]
fn step(m: [u128; 4], d: u64) -> [u128; 4] {
    let d = d as u128;
    [m[1], m[0] + d * m[1], m[3], m[2] + d * m[3]]
}

#[allow(clippy::too_many_arguments)]
fn dfs_cube(
    s: ComplexPoint,
    n: usize,
    weight: OrbitWeight,
    k: u64,
    remaining: usize,
    m: [u128; 4],
    acc: &mut KahanSum,
    abs: &mut f64,
) {
    if remaining == 0 {
        let w = weight_from_trace(s, n, weight, (m[0] + m[3]) as f64);
        acc.add(w);
        *abs += w.norm();
        return;
    }
    for d in 1..=k {
        dfs_cube(s, n, weight, k, remaining - 1, step(m, d), acc, abs);
    }
}

/// Options for [`orbit_sum_completed`].
#[derive(Clone, Copy, Debug)]
pub struct CompletedOptions {
    /// Digits up to `cutoff` are enumerated; larger ones are summed analytically.
    pub cutoff: u32,
    /// Target relative accuracy of the series truncations.
    pub rel_tol: f64,
}

impl CompletedOptions {
    /// Cutoff keeping the exactly enumerated cube near a few million words.
    pub fn default_for(n: usize) -> CompletedOptions {
        let cutoff = match n {
            1 | 2 => 100,
            3 => 60,
            4 => 24,
            5 => 12,
            6 => 8,
            7 => 6,
            8 => 5,
            _ => 4,
        };
        CompletedOptions { cutoff, rel_tol: 1e-17 }
    }
}

/// Sum over all words of length `n` (every digit in `1..`), with digits above
/// the cutoff summed through Hurwitz zeta tails. See the module docs.
pub fn orbit_sum_completed(s: ComplexPoint, n: usize, weight: OrbitWeight, opts: CompletedOptions) -> Result<OrbitSum> {
    check_args(s, n)?;
    let k = opts.cutoff;
    if k < 4 {
        return Err(Error::Domain("completed orbit sums need a cutoff of at least 4".into()));
    }
    let count = (k as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if count > WORD_LIMIT {
        return Err(Error::Resource(format!("{count} words exceed the enumeration limit {WORD_LIMIT}")));
    }
    let ctx = Ctx::new(s, n, weight, k, opts.rel_tol)?;
    let (cube, cube_abs) = cube_sum(s, n, weight, k as u64);
    let mut acc = KahanSum::default();
    acc.add(cube);
    let mut err = 1e-16 * cube_abs;
    for lmask in 1u32..(1 << n) {
        let (v, e) = ctx.region_sum(lmask)?;
        acc.add(v);
        err += e;
    }
    Ok(OrbitSum { value: acc.value(), tail_bound: err, words: count, cutoff: k })
}

struct TermInfo {
    /// Index of `mask ∩ L` within the subsets of `L`.
    large_idx: usize,
    small_mask: u32,
    coef: f64,
}

struct Ctx {
    s: ComplexPoint,
    n: usize,
    eps: f64,
    k: u32,
    poly: TracePolynomial,
    coeffs: Vec<ComplexPoint>,
    series_err: f64,
    zeta_table: Vec<ComplexPoint>,
    rel_tol: f64,
}

const TABLE_LEN: usize = 240;

impl Ctx {
    fn new(s: ComplexPoint, n: usize, weight: OrbitWeight, k: u32, rel_tol: f64) -> Result<Ctx> {
        let q0 = k as f64 + 1.0;
        // |x| <= 1/(K+1)² in every region with a large digit; coefficients grow like 4^j.
        let ratio = 4.0 / (q0 * q0);
        let mut terms = ((rel_tol.ln() / ratio.ln()).ceil() as usize + 3).max(4);
        terms = terms.min(60);
        let coeffs = weight_series(s, weight, terms + 4);
        let c0 = coeffs[0].norm();
        let series_err =
            (terms..terms + 4).map(|j| coeffs[j].norm() / c0 * (1.0 / (q0 * q0)).powi(j as i32)).fold(0.0, f64::max)
                * 2.0;
        let coeffs = coeffs[..terms].to_vec();
        let zeta_table: Vec<Result<ComplexPoint>> = map_indexed(TABLE_LEN, |j| hurwitz_zeta(2.0 * s + j as f64, q0));
        let zeta_table = zeta_table.into_iter().collect::<Result<Vec<_>>>()?;
        Ok(Ctx { s, n, eps: eps(n), k, poly: trace_polynomial(n), coeffs, series_err, zeta_table, rel_tol })
    }

    /// `ζ(2s + j, K + 1 + c)` from the integer-shift table when `c` is small.
    fn hz(&self, j: usize, c: f64) -> Result<ComplexPoint> {
        if c == 0.0 {
            if j < TABLE_LEN {
                return Ok(self.zeta_table[j]);
            }
            return hurwitz_zeta(2.0 * self.s + j as f64, self.k as f64 + 1.0);
        }
        let q0 = self.k as f64 + 1.0;
        if c <= 0.25 * q0 {
            // ζ(W, q0 + c) = Σ_μ (-c)^μ (W)_μ/μ! ζ(W + μ, q0)
            let w = 2.0 * self.s + j as f64;
            let mut coef = ComplexPoint::new(1.0, 0.0);
            let mut sum = self.zeta_table[j.min(TABLE_LEN - 1)];
            if j < TABLE_LEN {
                for mu in 0.. {
                    let idx = j + mu + 1;
                    if idx >= TABLE_LEN {
                        break;
                    }
                    coef *= -c * (w + mu as f64) / (mu + 1) as f64;
                    let term = coef * self.zeta_table[idx];
                    sum += term;
                    if term.norm() < 1e-18 * sum.norm() {
                        return Ok(sum);
                    }
                }
            }
        }
        hurwitz_zeta(2.0 * self.s + j as f64, q0 + c)
    }

    fn region_sum(&self, lmask: u32) -> Result<(ComplexPoint, f64)> {
        let n = self.n;
        let large: Vec<usize> = (0..n).filter(|&p| lmask & (1 << p) != 0).collect();
        let small: Vec<usize> = (0..n).filter(|&p| lmask & (1 << p) == 0).collect();
        let m = large.len();
        let terms: Vec<TermInfo> = self
            .poly
            .terms
            .iter()
            .map(|&(mask, coef)| {
                let mut idx = 0usize;
                for (b, &p) in large.iter().enumerate() {
                    if mask & (1 << p) != 0 {
                        idx |= 1 << b;
                    }
                }
                TermInfo { large_idx: idx, small_mask: mask & !lmask, coef: coef as f64 }
            })
            .collect();
        let k = self.k as usize;
        let ns = small.len();
        let chunks = if ns == 0 { 1 } else { k.pow(ns.min(2) as u32) };
        let parts: Vec<Result<(ComplexPoint, f64)>> = map_indexed(chunks, |chunk| {
            let mut digits = vec![0u64; n];
            let mut rest = chunk;
            let fixed = ns.min(2);
            for &p in small.iter().take(fixed) {
                digits[p] = (rest % k) as u64 + 1;
                rest /= k;
            }
            let free: Vec<usize> = small.iter().skip(fixed).copied().collect();
            for &p in &free {
                digits[p] = 1;
            }
            let mut acc = KahanSum::default();
            let mut err = 0.0;
            loop {
                let (v, e) = self.region_point(&terms, m, &digits)?;
                acc.add(v);
                err += e;
                // odometer over the free small positions
                let mut i = 0;
                loop {
                    if i == free.len() {
                        return Ok((acc.value(), err));
                    }
                    let p = free[i];
                    if digits[p] < k as u64 {
                        digits[p] += 1;
                        break;
                    }
                    digits[p] = 1;
                    i += 1;
                }
            }
        });
        let mut acc = KahanSum::default();
        let mut err = 0.0;
        for p in parts {
            let (v, e) = p?;
            acc.add(v);
            err += e;
        }
        Ok((acc.value(), err))
    }

    /// Sum over `i_l > K` for `l ∈ L` with the small digits fixed.
    fn region_point(&self, terms: &[TermInfo], m: usize, digits: &[u64]) -> Result<(ComplexPoint, f64)> {
        let full = (1usize << m) - 1;
        let mut q = vec![0.0f64; 1 << m];
        for t in terms {
            let mut v = t.coef;
            let mut sm = t.small_mask;
            while sm != 0 {
                let p = sm.trailing_zeros() as usize;
                v *= digits[p] as f64;
                sm &= sm - 1;
            }
            q[t.large_idx] += v;
        }
        let a = q[full];
        let shifts: Vec<f64> = (0..m).map(|l| q[full & !(1 << l)] / a).collect();
        // Coefficients in the shifted variables v_l = i_l + c_l.
        let mut qs = vec![0.0f64; 1 << m];
        for (v, slot) in qs.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (u, &qu) in q.iter().enumerate() {
                if u & v != v || qu == 0.0 {
                    continue;
                }
                let mut prod = qu;
                let mut extra = u & !v;
                while extra != 0 {
                    let l = extra.trailing_zeros() as usize;
                    prod *= -shifts[l];
                    extra &= extra - 1;
                }
                acc += prod;
            }
            *slot = acc;
        }
        let q0 = self.k as f64 + 1.0;
        // X = Σ_V (q'_V / A) Π_{l ∉ V} y_l over |V| <= m - 2; exponents packed 8 bits per variable.
        let mut x_terms: Vec<(u128, u32, f64)> = Vec::new();
        let mut xi = 0.0;
        for (v, &qv) in qs.iter().enumerate() {
            let deg = m - (v.count_ones() as usize);
            if deg < 2 || qv == 0.0 {
                continue;
            }
            let r = qv / a;
            if r.abs() < 1e-300 {
                continue;
            }
            let mut key = 0u128;
            for l in 0..m {
                if v & (1 << l) == 0 {
                    key |= 1u128 << (8 * l);
                }
            }
            xi += r.abs() * q0.powi(-(deg as i32));
            x_terms.push((key, deg as u32, r));
        }
        if xi >= 0.5 {
            return Err(Error::NonConvergence(format!(
                "orbit-sum region expansion does not converge (|X| <= {xi:.3}); raise the cutoff"
            )));
        }
        // Powers X^p, truncated by magnitude; entries (key, degree, coefficient).
        let pmax = if x_terms.is_empty() { 0 } else { ((self.rel_tol.ln() / xi.ln()).ceil() as usize).max(1) };
        let mut by_exp: BTreeMap<u128, Vec<(usize, f64)>> = BTreeMap::new();
        by_exp.insert(0, vec![(0, 1.0)]);
        let mut prev: BTreeMap<u128, (u32, f64)> = BTreeMap::new();
        prev.insert(0, (0, 1.0));
        for p in 1..=pmax {
            let mut next: BTreeMap<u128, (u32, f64)> = BTreeMap::new();
            for (&e, &(d, c)) in &prev {
                for &(f, df, r) in &x_terms {
                    let coef = c * r;
                    let deg = d + df;
                    if coef.abs() * q0.powi(-(deg as i32)) < 1e-22 {
                        continue;
                    }
                    next.entry(e + f).or_insert((deg, 0.0)).1 += coef;
                }
            }
            for (&e, &(_, c)) in &next {
                by_exp.entry(e).or_default().push((p, c));
            }
            prev = next;
        }
        // Terms needed: |x| <= 1/t_min² with t_min >= A Π (K + 1 + c_l) (1 - |X|).
        let mut t_min = a * (1.0 - xi);
        for &c in &shifts {
            t_min *= q0 + c;
        }
        let x_max = 1.0 / (t_min * t_min);
        let c0 = self.coeffs[0].norm();
        let mut jn = self.coeffs.len();
        for (j, cj) in self.coeffs.iter().enumerate().skip(1) {
            if cj.norm() * x_max.powi(j as i32) < 0.1 * self.rel_tol * c0 {
                jn = j;
                break;
            }
        }
        let max_e = by_exp
            .keys()
            .map(|&e| (0..m).map(|l| ((e >> (8 * l)) & 0xff) as usize).max().unwrap_or(0))
            .max()
            .unwrap_or(0);
        let kmax = 2 * (jn - 1) + max_e;
        let mut memo: Vec<Vec<Option<ComplexPoint>>> = vec![vec![None; kmax + 1]; m];
        let mut hz = |l: usize, k: usize| -> Result<ComplexPoint> {
            if let Some(v) = memo[l][k] {
                return Ok(v);
            }
            let v = self.hz(k, shifts[l])?;
            memo[l][k] = Some(v);
            Ok(v)
        };
        let ln_a = a.ln();
        let mut total = ComplexPoint::new(0.0, 0.0);
        let mut eps_pow = 1.0;
        let mut binom = Vec::with_capacity(pmax + 1);
        for (j, &cj) in self.coeffs.iter().take(jn).enumerate() {
            let w = 2.0 * self.s + 2.0 * j as f64;
            // C(-w, p) = (-1)^p (w)_p / p!
            binom.clear();
            let mut b = ComplexPoint::new(1.0, 0.0);
            binom.push(b);
            for p in 1..=pmax {
                b *= -(w + (p - 1) as f64) / p as f64;
                binom.push(b);
            }
            let mut inner = ComplexPoint::new(0.0, 0.0);
            for (&e, list) in &by_exp {
                let mut prod = ComplexPoint::new(0.0, 0.0);
                for &(p, c) in list {
                    prod += binom[p] * c;
                }
                for l in 0..m {
                    prod *= hz(l, 2 * j + ((e >> (8 * l)) & 0xff) as usize)?;
                }
                inner += prod;
            }
            total += cj * eps_pow * (-w * ln_a).exp() * inner;
            eps_pow *= self.eps;
        }
        let series_err = if jn < self.coeffs.len() { 0.1 * self.rel_tol } else { self.series_err };
        let err = total.norm()
            * (series_err + 2.0 * xi.powi(pmax as i32 + 1) * (1.0 + self.s.norm()).powi(pmax as i32 + 1))
            + 1e-16 * total.norm();
        Ok((total, err))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> ComplexPoint {
        ComplexPoint::new(re, im)
    }

    #[test]
    fn series_reproduces_weight() {
        for &(weight, n) in &[(OrbitWeight::Trace, 1), (OrbitWeight::Trace, 2), (OrbitWeight::Plain, 3)] {
            let s = c(1.3, 0.4);
            let coeffs = weight_series(s, weight, 30);
            let t = 7.0;
            let x = eps(n) / (t * t);
            let mut approx = ComplexPoint::new(0.0, 0.0);
            for (j, cj) in coeffs.iter().enumerate() {
                approx += cj * x.powi(j as i32);
            }
            approx *= (-2.0 * s * t.ln()).exp();
            let exact = weight_from_trace(s, n, weight, t);
            assert!((approx - exact).norm() < 1e-15, "{weight:?} {n}");
        }
    }

    #[test]
    fn capped_bound_covers_completion() {
        let s = c(2.0, 0.0);
        for n in 1..=3 {
            let capped = orbit_sum_capped(s, n, OrbitWeight::Trace, 20).unwrap();
            let full =
                orbit_sum_completed(s, n, OrbitWeight::Trace, CompletedOptions { cutoff: 12, rel_tol: 1e-17 }).unwrap();
            let gap = (full.value - capped.value).norm();
            assert!(gap <= capped.tail_bound, "n = {n}: gap {gap} bound {}", capped.tail_bound);
            assert!(gap > 0.01 * capped.tail_bound);
        }
    }

    #[test]
    fn completion_independent_of_cutoff() {
        for &(s, n) in &[(c(1.0, 0.0), 1), (c(1.0, 0.0), 2), (c(1.0, 0.0), 3), (c(1.5, 1.0), 4), (c(1.0, 0.0), 4)] {
            let a =
                orbit_sum_completed(s, n, OrbitWeight::Trace, CompletedOptions { cutoff: 8, rel_tol: 1e-17 }).unwrap();
            let b =
                orbit_sum_completed(s, n, OrbitWeight::Trace, CompletedOptions { cutoff: 13, rel_tol: 1e-17 }).unwrap();
            assert!((a.value - b.value).norm() < 1e-13, "s = {s}, n = {n}: {} vs {}", a.value, b.value);
        }
    }

    #[test]
    fn plain_weight_single_digit() {
        // Σ_i (golden-type fixed point)^{2s} for n = 1 at s = 3 against direct summation.
        let s = c(3.0, 0.0);
        let full =
            orbit_sum_completed(s, 1, OrbitWeight::Plain, CompletedOptions { cutoff: 10, rel_tol: 1e-17 }).unwrap();
        let mut direct = 0.0;
        for i in (1..200_000u64).rev() {
            let x = ((i * i + 4) as f64).sqrt() - i as f64;
            direct += (x / 2.0).powi(6);
        }
        assert!((full.value.re - direct).abs() < 1e-15);
    }
}
