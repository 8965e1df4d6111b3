//! Depth-first enumeration of digit words with pruning by the product bound
//! `Π i_k^{-2σ}`, which dominates `|P^{2s}|` for the word's orbit product `P`.

use crate::parallel::map_indexed;
use crate::ComplexPoint;

pub(crate) struct PrunedSum {
    pub value: ComplexPoint,
    /// `Σ Π i_k^{-2σ}` over all words (digits `<= max_digit`) that were skipped.
    pub pruned_mass: f64,
    pub words: u64,
}

/// Sums `f(word)` over words of length `n` with digits `<= max_digit` whose
/// product bound is at least `tau`.
pub(crate) fn pruned_word_sum<F>(n: usize, max_digit: u32, two_sigma: f64, tau: f64, f: F) -> PrunedSum
where
    F: Fn(&[u32]) -> ComplexPoint + Sync,
{
    let d = max_digit as usize;
    // tails[i] = Σ_{i <= k <= D} k^{-2σ}, tails[1] = H_D(2σ)
    let mut tails = vec![0.0f64; d + 2];
    for k in (1..=d).rev() {
        tails[k] = tails[k + 1] + (k as f64).powf(-two_sigma);
    }
    let head = tails[1];
    let parts = map_indexed(d, |i| {
        let first = i as u32 + 1;
        let b = (first as f64).powf(-two_sigma);
        let mut state = Dfs {
            n,
            max_digit,
            two_sigma,
            tau,
            tails: &tails,
            head,
            f: &f,
            word: vec![first],
            acc: ComplexPoint::new(0.0, 0.0),
            pruned: 0.0,
            words: 0,
        };
        if b < tau {
            // only reached when the whole subtree of this first digit is pruned
            state.pruned += b * head.powi(n as i32 - 1);
        } else {
            state.walk(b);
        }
        (state.acc, state.pruned, state.words)
    });
    let mut out = PrunedSum { value: ComplexPoint::new(0.0, 0.0), pruned_mass: 0.0, words: 0 };
    for (v, p, w) in parts {
        out.value += v;
        out.pruned_mass += p;
        out.words += w;
    }
    out
}

struct Dfs<'a, F> {
    n: usize,
    max_digit: u32,
    two_sigma: f64,
    tau: f64,
    tails: &'a [f64],
    head: f64,
    f: &'a F,
    word: Vec<u32>,
    acc: ComplexPoint,
    pruned: f64,
    words: u64,
}

impl<F: Fn(&[u32]) -> ComplexPoint> Dfs<'_, F> {
    fn walk(&mut self, bound: f64) {
        if self.word.len() == self.n {
            self.acc += (self.f)(&self.word);
            self.words += 1;
            return;
        }
        let rest = (self.n - self.word.len() - 1) as i32;
        for digit in 1..=self.max_digit {
            let b = bound * (digit as f64).powf(-self.two_sigma);
            if b < self.tau {
                self.pruned += bound * self.tails[digit as usize] * self.head.powi(rest);
                break;
            }
            self.word.push(digit);
            self.walk(b);
            self.word.pop();
        }
    }
}

/// Whether `word` is the lexicographically smallest of its rotations.
pub(crate) fn is_canonical(word: &[u32]) -> bool {
    let n = word.len();
    (1..n).all(|r| {
        for k in 0..n {
            let a = word[k];
            let b = word[(k + r) % n];
            if a != b {
                return a < b;
            }
        }
        true
    })
}

/// Smallest period `p` with `word` equal to its rotation by `p`.
pub(crate) fn period(word: &[u32]) -> usize {
    let n = word.len();
    (1..=n).find(|&p| n % p == 0 && (0..n).all(|k| word[k] == word[(k + p) % n])).unwrap_or(n)
}

/// Trace of `Π [[0,1],[1,i_k]]`.
pub(crate) fn trace_of(word: &[u32]) -> f64 {
    let mut m = [1u128, 0, 0, 1];
    for &d in word {
        let d = d as u128;
        m = [m[1], m[0] + d * m[1], m[3], m[2] + d * m[3]];
    }
    (m[0] + m[3]) as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pruned_mass_accounts_for_every_word() {
        // with f = product bound, kept + pruned = H_D(2σ)^n exactly
        let two_sigma = 3.0;
        let d = 12u32;
        let f = |w: &[u32]| ComplexPoint::new(w.iter().map(|&i| (i as f64).powf(-two_sigma)).product(), 0.0);
        let r = pruned_word_sum(3, d, two_sigma, 1e-5, f);
        let h: f64 = (1..=d).map(|i| (i as f64).powf(-two_sigma)).sum();
        assert!((r.value.re + r.pruned_mass - h.powi(3)).abs() < 1e-14);
        assert!(r.pruned_mass > 0.0 && (r.words as u32) < d.pow(3));
    }

    #[test]
    fn rotation_helpers() {
        assert!(is_canonical(&[1, 1, 2]));
        assert!(!is_canonical(&[1, 2, 1]));
        assert_eq!(period(&[1, 2, 1, 2]), 2);
        assert_eq!(period(&[1, 2, 2]), 3);
        assert_eq!(trace_of(&[1, 1]), 3.0);
    }
}
