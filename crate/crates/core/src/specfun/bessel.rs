//! Bessel functions of the first kind, integer order.
//!
//! Small arguments use the ascending power series; larger arguments use
//! Miller's backward recurrence normalized with `J_0 + 2 Σ J_2k = 1`.
//! Both paths hold an absolute error below 1e-13 on `[0, 200]`.

use crate::error::{invalid, BilliardError, Result};

/// Arguments at or below this value are evaluated with the power series.
const SERIES_LIMIT: f64 = 8.0;

/// Scan step used when isolating zeros. Consecutive zeros of `J_m` are
/// always more than 2 apart, so a quarter step never skips a pair.
const ZERO_SCAN_STEP: f64 = 0.25;

/// `J_m(x)` for `m >= 0`, `x >= 0`.
pub fn bessel_j(order: u32, x: f64) -> Result<f64> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(invalid("x", format!("Bessel argument must be finite and >= 0, got {x}")));
    }
    Ok(jn(order, x))
}

/// `J_m'(x)` for `m >= 0`, `x >= 0`.
pub fn bessel_j_prime(order: u32, x: f64) -> Result<f64> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(invalid("x", format!("Bessel argument must be finite and >= 0, got {x}")));
    }
    Ok(jn_prime(order, x))
}

/// Unchecked `J_m(x)`; callers guarantee `x >= 0`.
pub(crate) fn jn(order: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if order == 0 { 1.0 } else { 0.0 };
    }
    if x <= SERIES_LIMIT {
        series(order, x)
    } else {
        miller(order as usize, x)[order as usize]
    }
}

pub(crate) fn jn_prime(order: u32, x: f64) -> f64 {
    let j = ladder(order as usize + 1, x);
    if order == 0 {
        -j[1]
    } else {
        0.5 * (j[order as usize - 1] - j[order as usize + 1])
    }
}

/// `[J_0(x), J_1(x), ..., J_max(x)]`.
pub fn ladder(max_order: usize, x: f64) -> Vec<f64> {
    if x == 0.0 {
        let mut out = vec![0.0; max_order + 1];
        out[0] = 1.0;
        return out;
    }
    if x <= SERIES_LIMIT {
        (0..=max_order).map(|m| series(m as u32, x)).collect()
    } else {
        let mut all = miller(max_order, x);
        all.truncate(max_order + 1);
        all
    }
}

fn series(order: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let q = half * half;
    // (x/2)^m / m!
    let mut term = 1.0;
    for i in 1..=order {
        term *= half / f64::from(i);
    }
    let mut sum = term;
    let m = f64::from(order);
    let mut k = 1.0;
    loop {
        term *= -q / (k * (k + m));
        sum += term;
        if term.abs() <= 1e-18 * sum.abs().max(1e-300) && k > half {
            break;
        }
        k += 1.0;
        if k > 500.0 {
            break;
        }
    }
    sum
}

/// Backward recurrence from an order well above both `max_order` and `x`.
/// Returns at least `max_order + 1` normalized values.
fn miller(max_order: usize, x: f64) -> Vec<f64> {
    let top = (max_order as f64).max(x);
    let mut start = (top + 20.0 + (60.0 * top).sqrt()) as usize;
    start += start % 2;
    let mut vals = vec![0.0; start + 2];
    vals[start + 1] = 0.0;
    vals[start] = 1e-300;
    let two_over_x = 2.0 / x;
    for k in (1..=start).rev() {
        let prev = (k as f64) * two_over_x * vals[k] - vals[k + 1];
        vals[k - 1] = prev;
        if prev.abs() > 1e250 {
            for v in vals[k - 1..].iter_mut() {
                *v *= 1e-250;
            }
        }
    }
    let mut norm = vals[0];
    for k in (2..=start).step_by(2) {
        norm += 2.0 * vals[k];
    }
    for v in vals.iter_mut() {
        *v /= norm;
    }
    vals
}

/// The `n`-th positive zero of `J_m` (`n >= 1`).
///
/// Zeros are isolated by scanning sign changes upward from the origin, so the
/// returned root is guaranteed to be the `n`-th one; the bracket is then
/// tightened by bisection and polished with Newton steps.
pub fn bessel_zero(order: u32, index: u32) -> Result<f64> {
    if index == 0 {
        return Err(invalid("n", "zero index starts at 1"));
    }
    let m = f64::from(order);
    // McMahon: a_{m,n} ~ (n + m/2 - 1/4) pi; the scan limit sits well past it.
    let mcmahon = (f64::from(index) + 0.5 * m - 0.25) * std::f64::consts::PI;
    let limit = mcmahon + m + 2.0 * std::f64::consts::PI + 5.0;

    let mut lo = if order == 0 { ZERO_SCAN_STEP } else { m.max(ZERO_SCAN_STEP) };
    let mut f_lo = jn(order, lo);
    let mut found = 0;
    let mut bracket = None;
    while lo < limit {
        let hi = lo + ZERO_SCAN_STEP;
        let f_hi = jn(order, hi);
        if f_lo == 0.0 || f_lo.signum() != f_hi.signum() {
            found += 1;
            if found == index {
                bracket = Some((lo, hi, f_lo));
                break;
            }
        }
        lo = hi;
        f_lo = f_hi;
    }
    let (mut a, mut b, fa) = bracket.ok_or(BilliardError::ZeroBracket {
        order,
        index,
        found,
        limit,
    })?;
    if fa == 0.0 {
        return Ok(a);
    }
    let sign_a = fa.signum();
    for _ in 0..60 {
        let mid = 0.5 * (a + b);
        let fm = jn(order, mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == sign_a {
            a = mid;
        } else {
            b = mid;
        }
        if b - a < 1e-10 {
            break;
        }
    }
    let mut x = 0.5 * (a + b);
    for _ in 0..4 {
        let f = jn(order, x);
        let df = jn_prime(order, x);
        if df == 0.0 {
            break;
        }
        let next = x - f / df;
        if !(next > a - 1e-9 && next < b + 1e-9) {
            break;
        }
        x = next;
    }
    Ok(x)
}
