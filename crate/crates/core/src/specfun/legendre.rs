use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Largest degree accepted by [`assoc_legendre`].
pub const MAX_DEGREE: u32 = 200;

/// Associated Legendre function `P_j^m(x)` with the Condon–Shortley phase,
/// by upward recurrence in `j`.
///
/// Large `m` overflows `f64` near `x = 0`; that is reported as a domain error.
pub fn assoc_legendre(j: u32, m: u32, x: f64) -> Result<f64> {
    if m > j {
        return Err(Error::Domain(format!(
            "associated Legendre needs m <= j (got j={j}, m={m})"
        )));
    }
    if j > MAX_DEGREE {
        return Err(Error::Domain(format!(
            "associated Legendre degree {j} above {MAX_DEGREE}"
        )));
    }
    if !(x.abs() <= 1.0) {
        return Err(Error::Domain(format!(
            "associated Legendre argument {x} outside [-1, 1]"
        )));
    }
    let v = plm(j, m, x);
    if !v.is_finite() {
        return Err(Error::Domain(format!("P_{j}^{m}({x}) overflows f64")));
    }
    Ok(v)
}

fn plm(j: u32, m: u32, x: f64) -> f64 {
    if m > j {
        return 0.0;
    }
    let s = ((1.0 - x) * (1.0 + x)).max(0.0).sqrt();
    let mut pmm = 1.0;
    let mut odd = 1.0;
    for _ in 0..m {
        pmm *= -odd * s;
        odd += 2.0;
    }
    if j == m {
        return pmm;
    }
    let mut p_prev = pmm;
    let mut p = x * (2 * m + 1) as f64 * pmm;
    for l in (m + 2)..=j {
        let next = (x * (2 * l - 1) as f64 * p - (l + m - 1) as f64 * p_prev) / (l - m) as f64;
        p_prev = p;
        p = next;
    }
    p
}

/// `dP_j^m/dx` for `|x| < 1`.
pub fn assoc_legendre_deriv(j: u32, m: u32, x: f64) -> Result<f64> {
    if !(x.abs() < 1.0) {
        return Err(Error::Domain(format!(
            "Legendre derivative needs |x| < 1 (got {x})"
        )));
    }
    let p = assoc_legendre(j, m, x)?;
    let p_below = if j >= 1 && j > m {
        plm(j - 1, m, x)
    } else {
        0.0
    };
    Ok((j as f64 * x * p - (j + m) as f64 * p_below) / (x * x - 1.0))
}

/// `d/dk_z P_j^m(c k_z / omega)` at fixed `omega`, i.e. `(c/omega) dP/dx`.
pub fn assoc_legendre_dkz(j: u32, m: u32, kz: f64, omega: f64, c: f64) -> Result<f64> {
    if !(omega > 0.0) || !(c > 0.0) {
        return Err(Error::Domain("omega and c must be positive".into()));
    }
    let x = c * kz / omega;
    if !(x.abs() < 1.0) {
        return Err(Error::Domain(format!(
            "|c k_z| = {} must be below omega = {omega}",
            (c * kz).abs()
        )));
    }
    Ok(c / omega * assoc_legendre_deriv(j, m, x)?)
}

/// Orthonormalized `Pbar_l^m(x) = sqrt((2l+1)/(4 pi) (l-m)!/(l+m)!) P_l^m(x)`
/// for `l = 0..=l_max` (zero for `l < m`). Stable for large degrees.
pub fn normalized_legendre_column(l_max: u32, m: u32, x: f64) -> Vec<f64> {
    normalized_legendre_column_sc(l_max, m, x, ((1.0 - x) * (1.0 + x)).max(0.0).sqrt())
}

/// As [`normalized_legendre_column`] with `sqrt(1 - x^2)` supplied by the
/// caller, which keeps full precision near `x = +-1` when the polar angle is known.
pub(crate) fn normalized_legendre_column_sc(l_max: u32, m: u32, x: f64, s: f64) -> Vec<f64> {
    let mut out = vec![0.0; l_max as usize + 1];
    if m > l_max {
        return out;
    }
    let mut pmm = (0.25 / PI).sqrt();
    for k in 1..=m {
        let kf = k as f64;
        pmm *= -((2.0 * kf + 1.0) / (2.0 * kf)).sqrt() * s;
    }
    out[m as usize] = pmm;
    if m == l_max {
        return out;
    }
    let mf = m as f64;
    out[m as usize + 1] = x * (2.0 * mf + 3.0).sqrt() * pmm;
    let a = |l: f64| ((4.0 * l * l - 1.0) / (l * l - mf * mf)).sqrt();
    for l in (m + 2)..=l_max {
        let lf = l as f64;
        let li = l as usize;
        out[li] = a(lf) * (x * out[li - 1] - out[li - 2] / a(lf - 1.0));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::gauss_legendre;

    fn factorial(n: u32) -> f64 {
        (1..=n).map(|k| k as f64).product()
    }

    #[test]
    fn low_degree_closed_forms() {
        for &x in &[-0.9, -0.2, 0.0, 0.5, 0.77] {
            assert_eq!(assoc_legendre(0, 0, x).unwrap(), 1.0);
            assert!((assoc_legendre(1, 0, x).unwrap() - x).abs() < 1e-15);
        }
        let x: f64 = 0.5;
        let want = -3.0 * x * (1.0 - x * x).sqrt();
        assert!((assoc_legendre(2, 1, x).unwrap() - want).abs() < 1e-14);
        let want33 = -15.0 * (1.0 - x * x).powf(1.5);
        assert!((assoc_legendre(3, 3, x).unwrap() - want33).abs() < 1e-13);
    }

    #[test]
    fn order_above_degree_is_rejected() {
        assert!(assoc_legendre(2, 3, 0.1).is_err());
        assert!(assoc_legendre(2, 1, 1.5).is_err());
    }

    #[test]
    fn orthogonality_by_gauss_quadrature() {
        let (xs, ws) = gauss_legendre(40);
        for m in 0..=4u32 {
            for j in m..=20 {
                for jp in m..=20 {
                    let s: f64 = xs
                        .iter()
                        .zip(&ws)
                        .map(|(&x, &w)| w * plm(j, m, x) * plm(jp, m, x))
                        .sum();
                    let want = if j == jp {
                        2.0 * factorial(j + m) / ((2 * j + 1) as f64 * factorial(j - m))
                    } else {
                        0.0
                    };
                    let scale = (2.0 * factorial(j + m) / ((2 * j + 1) as f64 * factorial(j - m))
                        * 2.0
                        * factorial(jp + m)
                        / ((2 * jp + 1) as f64 * factorial(jp - m)))
                    .sqrt();
                    assert!(
                        (s - want).abs() < 1e-10 * scale,
                        "j={j} j'={jp} m={m}: {s} vs {want}"
                    );
                }
            }
        }
    }

    #[test]
    fn normalized_column_matches_plain_recurrence() {
        let x = 0.37;
        for m in 0..6u32 {
            let col = normalized_legendre_column(25, m, x);
            for l in m..=25 {
                let norm =
                    ((2 * l + 1) as f64 / (4.0 * PI) * factorial(l - m) / factorial(l + m)).sqrt();
                let want = norm * plm(l, m, x);
                assert!(
                    (col[l as usize] - want).abs() < 1e-12 * want.abs().max(1e-3),
                    "l={l} m={m}"
                );
            }
        }
    }

    #[test]
    fn derivative_low_degree() {
        assert!((assoc_legendre_dkz(1, 0, 0.3, 1.0, 1.0).unwrap() - 1.0).abs() < 1e-14);
        assert!((assoc_legendre_dkz(1, 0, 0.3, 2.0, 1.0).unwrap() - 0.5).abs() < 1e-14);
        assert_eq!(assoc_legendre_dkz(0, 0, 0.3, 1.0, 1.0).unwrap(), 0.0);
        assert!(assoc_legendre_dkz(1, 0, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn dkz_matches_finite_difference() {
        let h = 1e-6;
        let fd = (assoc_legendre(3, 1, 0.3 + h).unwrap() - assoc_legendre(3, 1, 0.3 - h).unwrap())
            / (2.0 * h);
        assert!((assoc_legendre_dkz(3, 1, 0.3, 1.0, 1.0).unwrap() - fd).abs() < 1e-8);
    }
}
