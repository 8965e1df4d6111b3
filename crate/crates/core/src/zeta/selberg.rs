use super::words::{pruned_word_sum, trace_of};
use super::{ZetaRoute, ZetaValue};
use crate::dynamics::{enumerate_classes, norm_from_trace};
use crate::{ComplexPoint, Error, Result};

/// Norm of the shortest class, `((3 + √5)/2)²`.
const N0: f64 = 6.854_101_966_249_685;
const GOLDEN_INV: f64 = 0.618_033_988_749_894_9;

/// `⌈40 / ln N₀⌉` terms of the inner product over `k`.
pub fn default_k_max() -> usize {
    (40.0 / N0.ln()).ceil() as usize
}

fn require_euler_domain(s: ComplexPoint) -> Result<()> {
    if !(s.re.is_finite() && s.im.is_finite()) || s.re <= 1.0 {
        return Err(Error::Domain(format!("Euler product needs Re(s) > 1, got s = {s}")));
    }
    Ok(())
}

/// Longest word whose trace can stay below `trace_cap` (the all-ones word has
/// the smallest trace for its length, the Lucas number `L_n`).
fn length_cap_for(trace_cap: f64) -> usize {
    let (mut a, mut b) = (2.0f64, 1.0f64); // L_0, L_1
    let mut n = 1;
    while b <= trace_cap {
        let c = a + b;
        a = b;
        b = c;
        n += 1;
    }
    n.max(2)
}

/// `Z(s) = Π_γ Π_{k=0}^{k_max} (1 - N(γ)^{-s-k})` over primitive classes with
/// `N(γ) <= norm_cap`, each counted with its number of `SL(2, Z)` classes.
/// `tail` estimates the omitted classes as `|Z| count cap^{-σ} / (σ - 1)`,
/// from the class count growing like `x / ln x`.
pub fn selberg_euler_product(s: ComplexPoint, norm_cap: f64, k_max: Option<usize>) -> Result<ZetaValue> {
    require_euler_domain(s)?;
    let k_max = k_max.unwrap_or_else(default_k_max);
    let trace_cap = norm_cap.sqrt() + 1.0 / norm_cap.sqrt();
    let classes = enumerate_classes(norm_cap, length_cap_for(trace_cap) + 2)?;
    let mut log = ComplexPoint::new(0.0, 0.0);
    let mut count = 0.0;
    for c in classes.iter().filter(|c| c.is_primitive()) {
        let ln_n = c.norm.ln();
        let mult = c.sl2_classes as f64;
        count += mult;
        for k in 0..=k_max {
            let x = (-(s + k as f64) * ln_n).exp();
            log += mult * (1.0 - x).ln();
        }
    }
    let value = log.exp();
    let tail = if count > 0.0 {
        value.norm() * count * norm_cap.powf(-s.re) / (s.re - 1.0)
    } else {
        value.norm() * N0.powf(-s.re) * 2.0
    };
    Ok(ZetaValue::new(
        s,
        crate::check_finite(value, "Selberg Euler product")?,
        ZetaRoute::EulerProduct,
        &[("norm_cap", norm_cap), ("k_max", k_max as f64), ("classes", count)],
        Some(tail),
    ))
}

/// Default product-bound threshold for [`lewis_zagier_log_z`].
pub const DEFAULT_TAU: f64 = 1e-13;

/// `Z(s)` from `-log Z(s) = Σ_{l <= l_max} (1/l) Σ_w N(w)^{-s} / (1 - N(w)^{-1})`
/// over reduced words `w` of length `2l` with digits `<= max_digit`, where
/// `N(w)` is the norm of the word matrix. Returned as `exp(-sum)`.
///
/// Words whose product bound `Π i^{-2σ}` is below [`DEFAULT_TAU`] are
/// skipped; `tail` bounds their effect on the returned value.
pub fn lewis_zagier_log_z(s: ComplexPoint, l_max: usize, max_digit: u32) -> Result<ZetaValue> {
    lewis_zagier_with(s, l_max, max_digit, DEFAULT_TAU)
}

/// [`lewis_zagier_log_z`] with an explicit skip threshold (`0` keeps every word).
pub fn lewis_zagier_with(s: ComplexPoint, l_max: usize, max_digit: u32, tau: f64) -> Result<ZetaValue> {
    require_euler_domain(s)?;
    if l_max == 0 || l_max > 8 || max_digit == 0 {
        return Err(Error::Domain("need 1 <= l_max <= 8 and max_digit >= 1".into()));
    }
    let two_sigma = 2.0 * s.re;
    let mut sum = ComplexPoint::new(0.0, 0.0);
    let mut skipped = 0.0;
    for l in 1..=l_max {
        let n = 2 * l;
        if tau == 0.0 {
            let words = (max_digit as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
            if words > crate::dynamics::WORD_LIMIT {
                return Err(Error::Resource(format!("{words} words exceed the enumeration limit")));
            }
        }
        let r = pruned_word_sum(n, max_digit, two_sigma, tau, |w| {
            let norm = norm_from_trace(trace_of(w));
            (-s * norm.ln()).exp() / (1.0 - 1.0 / norm)
        });
        sum += r.value / l as f64;
        skipped += r.pruned_mass / (1.0 - GOLDEN_INV.powi(2 * n as i32)) / l as f64;
    }
    let value = (-sum).exp();
    Ok(ZetaValue::new(
        s,
        crate::check_finite(value, "reduced-word sum")?,
        ZetaRoute::ReducedSum,
        &[("l_max", l_max as f64), ("max_digit", max_digit as f64), ("tau", tau)],
        Some(value.norm() * skipped.exp_m1()),
    ))
}
