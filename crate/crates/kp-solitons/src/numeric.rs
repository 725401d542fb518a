//! Shared numeric helpers: logs of big rationals, stable log-sum-exp, and the
//! fixed significant-digit rounding used for deterministic JSON output.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// ln of a positive big integer, robust to values outside f64 range.
pub fn ln_bigint(x: &BigInt) -> f64 {
    debug_assert!(x.is_positive());
    if let Some(v) = x.to_f64() {
        if v.is_finite() {
            return v.ln();
        }
    }
    // Take the top 64 bits as a mantissa and account for the rest as a shift.
    let bits = x.bits();
    let shift = bits.saturating_sub(64);
    let top: BigInt = x >> shift;
    let m = top.to_f64().expect("top 64 bits fit in f64");
    m.ln() + (shift as f64) * std::f64::consts::LN_2
}

/// ln |r| for a nonzero rational.
pub fn ln_rational_abs(r: &BigRational) -> f64 {
    debug_assert!(!r.is_zero());
    ln_bigint(&r.numer().abs()) - ln_bigint(&r.denom().abs())
}

/// Round to `digits` significant decimal digits. Going through a decimal
/// string picks the double nearest the rounded decimal, so the shortest
/// round-trip representation (what serde prints) never exceeds `digits`
/// significant digits and repeated runs emit byte-identical JSON.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{:.*e}", digits - 1, x).parse().expect("decimal form parses back")
}

/// log(Σ exp(v_i)) for possibly large exponents. Empty input yields -inf.
pub fn log_sum_exp(values: &[f64]) -> f64 {
    let m = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return m;
    }
    let s: f64 = values.iter().map(|v| (v - m).exp()).sum();
    m + s.ln()
}

/// log |Σ s_i exp(v_i)| together with the sign of the sum.
pub fn signed_log_sum_exp(terms: &[(f64, f64)]) -> (f64, f64) {
    let m = terms.iter().map(|&(_, v)| v).fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return (f64::NEG_INFINITY, 1.0);
    }
    let s: f64 = terms.iter().map(|&(sg, v)| sg * (v - m).exp()).sum();
    if s == 0.0 {
        (f64::NEG_INFINITY, 1.0)
    } else {
        (m + s.abs().ln(), s.signum())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn ln_matches_f64_in_range() {
        let r = BigRational::new(BigInt::from(355), BigInt::from(113));
        let expect = (355f64 / 113f64).ln();
        assert!((ln_rational_abs(&r) - expect).abs() < 1e-12);
    }

    #[test]
    fn ln_handles_huge_values() {
        let big = BigInt::one() << 2000usize;
        let expect = 2000.0 * std::f64::consts::LN_2;
        assert!((ln_bigint(&big) - expect).abs() < 1e-6);
    }

    #[test]
    fn rounding_is_stable() {
        assert_eq!(round_sig(1.0 / 3.0, 12), 0.333333333333);
        assert_eq!(round_sig(-123456.789, 5), -123460.0);
        assert_eq!(round_sig(0.0, 12), 0.0);
    }

    #[test]
    fn lse_agrees_with_direct_sum() {
        let vals = [0.1f64, -2.0, 3.5];
        let direct: f64 = vals.iter().map(|v| f64::exp(*v)).sum();
        assert!((log_sum_exp(&vals) - direct.ln()).abs() < 1e-12);
    }

    #[test]
    fn signed_lse_tracks_sign() {
        let (l, s) = signed_log_sum_exp(&[(1.0, 1.0), (-1.0, 2.0)]);
        let direct = 1f64.exp() - 2f64.exp();
        assert_eq!(s, -1.0);
        assert!((l - direct.abs().ln()).abs() < 1e-12);
    }
}
