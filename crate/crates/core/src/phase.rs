//! Phase arithmetic modulo 2π.
//!
//! `k * nu mod 2π` for large integer `k` cannot be formed naively: the
//! product carries an absolute error of order `k * ulp(nu)` and the reduction
//! by the rounded value of 2π adds `m * 2.4e-16` more. Here the product is
//! kept as an exact double-double (via FMA) and reduced against a
//! double-double 2π, so the result is accurate to a few ulps of 2π for any
//! `k` below 2^53.

use std::f64::consts::TAU;

/// Low-order part of 2π, so that `TAU + TAU_LO` carries ~106 bits.
const TAU_LO: f64 = 2.449_293_598_294_706_4e-16;

/// `x mod 2π` in `[0, 2π)`.
pub fn wrap(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// `x mod 2π` in `[-π, π)`; exact for `|x| < π`.
pub fn wrap_signed(x: f64) -> f64 {
    if (-std::f64::consts::PI..std::f64::consts::PI).contains(&x) {
        return x;
    }
    let r = wrap(x);
    if r >= std::f64::consts::PI {
        r - TAU
    } else {
        r
    }
}

/// `k * nu mod 2π` in `[0, 2π)`, with `k` an exactly representable integer.
pub fn mul_mod_tau(k: f64, nu: f64) -> f64 {
    debug_assert!(k.fract() == 0.0 && k.abs() < 9.007_199_254_740_992e15);
    let p = k * nu;
    if !p.is_finite() {
        return f64::NAN;
    }
    let p_err = k.mul_add(nu, -p);
    let m = (p / TAU).floor();
    let q = m * TAU;
    let q_err = m.mul_add(TAU, -q);
    // p - q is exact by Sterbenz once |p| > 2π
    let r = (p - q) + (p_err - q_err) - m * TAU_LO;
    wrap(r)
}

/// Shortest distance between two angles on the circle, in `[0, π]`.
pub fn circular_distance(a: f64, b: f64) -> f64 {
    let d = wrap(a - b);
    d.min(TAU - d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signed_wrap() {
        assert_eq!(wrap_signed(-1e-17), -1e-17);
        assert_eq!(wrap_signed(3.5), 3.5 - TAU);
        assert_eq!(wrap_signed(-std::f64::consts::PI), -std::f64::consts::PI);
        assert!((wrap_signed(TAU + 0.25) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn small_multiples_agree_with_naive() {
        for k in 0..1000 {
            let nu = 0.7390851332151607;
            let naive = wrap(k as f64 * nu);
            let got = mul_mod_tau(k as f64, nu);
            let d = circular_distance(naive, got);
            assert!(d < 1e-12, "k={k}");
        }
    }

    #[test]
    fn exact_multiples_of_tau() {
        // TAU / 5 differs from 2π/5 by under an ulp, so k nu drifts from 0 by at most ~k ulp
        let nu = TAU / 5.0;
        for k in [5.0, 10.0, 1e6] {
            let r = mul_mod_tau(k, nu);
            assert!(circular_distance(r, 0.0) < k * 1e-15);
        }
    }

    #[test]
    fn large_k_against_integer_periods() {
        // nu = 1 rad: compare k mod 2π against a high-precision reference.
        // 10^8 mod 2π from 50-digit arithmetic
        let r = mul_mod_tau(1e8, 1.0);
        assert!((r - 1.942_695_134_504_014_5).abs() < 1e-12);
    }

    #[test]
    fn distance_properties() {
        assert_eq!(circular_distance(0.0, 0.0), 0.0);
        assert!((circular_distance(0.1, TAU - 0.1) - 0.2).abs() < 1e-15);
        assert!((circular_distance(0.0, std::f64::consts::PI) - std::f64::consts::PI).abs() < 1e-15);
    }
}
