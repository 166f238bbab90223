//! Continued-fraction convergents of a double.
//!
//! A finite double is exactly `m / 2^e`, so its continued fraction can be
//! expanded with integer arithmetic and the convergents are exact. This is
//! used to decide whether a ratio of spectrum coefficients is "rational" at a
//! stated tolerance, and to check that a rotation number has no small exact
//! period inside a simulation horizon.

/// Convergent `p / q` with its absolute error against the input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Convergent {
    pub p: i128,
    pub q: u64,
    /// `|x - p/q|` in floating point; may round to zero for inexact convergents.
    pub error: f64,
    /// `p / q` equals `x` exactly.
    pub exact: bool,
}

/// Exact numerator/denominator of `x`, or `None` when the denominator would
/// not fit (|x| below ~2^-60) or the value is not finite.
fn exact_ratio(x: f64) -> Option<(i128, i128)> {
    if !x.is_finite() {
        return None;
    }
    if x == 0.0 {
        return Some((0, 1));
    }
    let bits = x.to_bits();
    let sign: i128 = if bits >> 63 == 0 { 1 } else { -1 };
    let exp_bits = ((bits >> 52) & 0x7ff) as i32;
    let frac = (bits & ((1u64 << 52) - 1)) as i128;
    let (mant, exp) = if exp_bits == 0 { (frac, -1074) } else { (frac | (1i128 << 52), exp_bits - 1075) };
    if exp >= 0 {
        if exp > 70 {
            return None;
        }
        return Some((sign * (mant << exp), 1));
    }
    let shift = -exp;
    // strip common factors of two so the denominator stays small
    let tz = (mant.trailing_zeros() as i32).min(shift);
    let mant = mant >> tz;
    let shift = shift - tz;
    if shift > 120 {
        return None;
    }
    Some((sign * mant, 1i128 << shift))
}

/// All convergents of `x` with denominator at most `q_max`, in order.
///
/// The last element is `x` itself when its continued fraction terminates
/// within the bound.
pub fn convergents(x: f64, q_max: u64) -> Vec<Convergent> {
    let Some((mut num, mut den)) = exact_ratio(x) else {
        if x.is_finite() && x.abs() < 1.0 {
            return vec![Convergent { p: 0, q: 1, error: x.abs(), exact: false }];
        }
        return Vec::new();
    };
    let mut out = Vec::new();
    // h_{-2}, h_{-1} = 0, 1 and k_{-2}, k_{-1} = 1, 0
    let (mut h_prev, mut h) = (0i128, 1i128);
    let (mut k_prev, mut k) = (1i128, 0i128);
    while den != 0 {
        let a = num.div_euclid(den);
        let rem = num - a * den;
        let next = |a: i128, cur: i128, prev: i128| a.checked_mul(cur).and_then(|v| v.checked_add(prev));
        let (Some(h_new), Some(k_new)) = (next(a, h, h_prev), next(a, k, k_prev)) else {
            break;
        };
        if k_new > q_max as i128 {
            break;
        }
        h_prev = h;
        k_prev = k;
        h = h_new;
        k = k_new;
        let exact = rem == 0;
        let error = if exact { 0.0 } else { (x - h as f64 / k as f64).abs() };
        out.push(Convergent { p: h, q: k as u64, error, exact });
        num = den;
        den = rem;
    }
    out
}

/// First convergent of `x` with denominator `<= q_max` that approximates it
/// within `tol`.
pub fn best_rational(x: f64, tol: f64, q_max: u64) -> Option<Convergent> {
    convergents(x, q_max).into_iter().find(|c| c.error < tol)
}

/// Denominator of `x` if it is exactly a fraction with denominator `<= q_max`.
pub fn exact_period(x: f64, q_max: u64) -> Option<u64> {
    convergents(x, q_max).last().filter(|c| c.exact).map(|c| c.q)
}
