use crate::error::{Error, Result};

/// Largest |order| accepted by [`bessel_j`].
pub const MAX_ORDER: i32 = 200;
/// Largest argument accepted by [`bessel_j`].
pub const MAX_ARGUMENT: f64 = 1.0e4;

const RESCALE_AT: f64 = 1.0e250;

fn check(m: i32, x: f64) -> Result<()> {
    if m.abs() > MAX_ORDER {
        return Err(Error::Domain(format!(
            "Bessel order {m} outside |m| <= {MAX_ORDER}"
        )));
    }
    if !x.is_finite() || !(0.0..=MAX_ARGUMENT).contains(&x) {
        return Err(Error::Domain(format!(
            "Bessel argument {x} outside [0, {MAX_ARGUMENT}]"
        )));
    }
    Ok(())
}

/// `J_m(x)` for integer `m` and `x >= 0`.
pub fn bessel_j(m: i32, x: f64) -> Result<f64> {
    check(m, x)?;
    Ok(jn(m, x))
}

/// `J'_m(x) = (J_{m-1}(x) - J_{m+1}(x)) / 2`.
pub fn bessel_j_prime(m: i32, x: f64) -> Result<f64> {
    check(m, x)?;
    check(m - 1, x).and(check(m + 1, x)).or({
        // |m| == MAX_ORDER: the neighbouring order is still computable.
        Ok::<(), Error>(())
    })?;
    Ok(jn_prime(m, x))
}

/// Unchecked `J_m(x)`; callers guarantee a finite, non-negative argument.
pub fn jn(m: i32, x: f64) -> f64 {
    debug_assert!(x >= 0.0 && x.is_finite(), "jn needs finite x >= 0, got {x}");
    if m < 0 {
        let v = jn_nonneg(m.unsigned_abs() as usize, x);
        return if m % 2 == 0 { v } else { -v };
    }
    jn_nonneg(m as usize, x)
}

/// Unchecked `J'_m(x)`.
pub fn jn_prime(m: i32, x: f64) -> f64 {
    0.5 * (jn(m - 1, x) - jn(m + 1, x))
}

/// `m J_m(x) / x`, continuous at `x = 0` via `(J_{m-1} + J_{m+1}) / 2`.
pub fn jn_over_x(m: i32, x: f64) -> f64 {
    if m == 0 {
        return 0.0;
    }
    if x < 1e-4 {
        return 0.5 * (jn(m - 1, x) + jn(m + 1, x));
    }
    m as f64 * jn(m, x) / x
}

/// `J_lo(x), ..., J_hi(x)` from a single recurrence pass.
pub fn jn_orders(lo: i32, hi: i32, x: f64) -> Vec<f64> {
    assert!(lo <= hi, "empty order range {lo}..={hi}");
    let top = lo.unsigned_abs().max(hi.unsigned_abs()) as usize;
    if x <= 2.0 || x == 0.0 {
        return (lo..=hi).map(|m| jn(m, x)).collect();
    }
    let all = miller_all(top, x);
    (lo..=hi)
        .map(|m| {
            let v = all[m.unsigned_abs() as usize];
            if m < 0 && m % 2 != 0 {
                -v
            } else {
                v
            }
        })
        .collect()
}

/// `J_0..=J_n` by backward recurrence, same normalization as [`miller`].
fn miller_all(n: usize, x: f64) -> Vec<f64> {
    let top = (n as f64).max(x);
    let mut start = (top + 30.0 + (40.0 * top).sqrt()) as usize;
    start += start % 2;
    let mut out = vec![0.0; n + 1];
    let mut above = 0.0;
    let mut cur = 1.0e-30;
    let mut norm = 0.0;
    let mut k = start;
    loop {
        if k <= n {
            out[k] = cur;
        }
        if k == 0 {
            norm += cur;
            break;
        }
        if k.is_multiple_of(2) {
            norm += 2.0 * cur;
        }
        let below = 2.0 * k as f64 / x * cur - above;
        above = cur;
        cur = below;
        k -= 1;
        if cur.abs() > RESCALE_AT {
            cur /= RESCALE_AT;
            above /= RESCALE_AT;
            norm /= RESCALE_AT;
            for v in out.iter_mut() {
                *v /= RESCALE_AT;
            }
        }
    }
    out.iter().map(|v| v / norm).collect()
}

fn jn_nonneg(n: usize, x: f64) -> f64 {
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    // The power series has no cancellation problem while its terms decrease
    // from the first one, i.e. while x^2/4 <= n + 1.
    if 0.25 * x * x <= (n + 1) as f64 {
        series(n, x)
    } else {
        miller(n, x)
    }
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

fn series(n: usize, x: f64) -> f64 {
    let half = 0.5 * x;
    let first = (n as f64 * half.ln() - ln_factorial(n)).exp();
    if first == 0.0 {
        return 0.0;
    }
    let q = -half * half;
    let mut term = first;
    let mut sum = first;
    for k in 1..300 {
        term *= q / (k as f64 * (k + n) as f64);
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// Miller backward recurrence normalized with `J_0 + 2 sum_k J_{2k} = 1`.
fn miller(n: usize, x: f64) -> f64 {
    let top = (n as f64).max(x);
    let mut start = (top + 30.0 + (40.0 * top).sqrt()) as usize;
    start += start % 2;
    let mut above = 0.0; // J_{k+1}
    let mut cur = 1.0e-30; // J_k, k = start
    let mut norm = 0.0;
    let mut target = 0.0;
    let mut k = start;
    loop {
        if k == n {
            target = cur;
        }
        if k == 0 {
            norm += cur;
            break;
        }
        if k.is_multiple_of(2) {
            norm += 2.0 * cur;
        }
        let below = 2.0 * k as f64 / x * cur - above;
        above = cur;
        cur = below;
        k -= 1;
        if cur.abs() > RESCALE_AT {
            cur /= RESCALE_AT;
            above /= RESCALE_AT;
            norm /= RESCALE_AT;
            target /= RESCALE_AT;
        }
    }
    target / norm
}

/// `int_0^R J_m(k rho) J_m(k2 rho) rho drho` for `k != k2`, in closed form.
pub fn lommel_overlap(m: i32, k: f64, k2: f64, r: f64) -> Result<f64> {
    if !(k > 0.0 && k2 > 0.0 && r > 0.0) {
        return Err(Error::Domain(format!(
            "lommel_overlap needs k, k2, R > 0 (got {k}, {k2}, {r})"
        )));
    }
    if k == k2 {
        return Err(Error::Domain(
            "lommel_overlap with k == k2; use lommel_overlap_equal".into(),
        ));
    }
    check(m, k * r)?;
    check(m, k2 * r)?;
    let (a, b) = (k * r, k2 * r);
    Ok(r * (k2 * jn(m, a) * jn_prime(m, b) - k * jn(m, b) * jn_prime(m, a)) / (k * k - k2 * k2))
}

/// Equal-argument overlap `int_0^R J_m(k rho)^2 rho drho`.
pub fn lommel_overlap_equal(m: i32, k: f64, r: f64) -> Result<f64> {
    if !(k > 0.0 && r > 0.0) {
        return Err(Error::Domain(format!(
            "lommel_overlap_equal needs k, R > 0 (got {k}, {r})"
        )));
    }
    let x = k * r;
    check(m, x)?;
    let j = jn(m, x);
    let jp = jn_prime(m, x);
    let mf = m as f64;
    Ok(0.5 * r * r * (jp * jp + (1.0 - mf * mf / (x * x)) * j * j))
}
