//! Closed-form predictors: `c`-values, the fixed point `t_c`, the predicted
//! top Betti number and its threshold `c_d`, and quadratic growth fits.

use crate::error::{Error, Result};
use crate::simplicial::binomial;

/// `n f / C(n, d+1)`.
pub fn c_value(n: usize, f: f64, d: usize) -> f64 {
    n as f64 * f / binomial(n, d + 1) as f64
}

fn fixed_point_gap(t: f64, c: f64, d: usize) -> f64 {
    t - (-c * (1.0 - t).powi(d as i32)).exp()
}

const TC_GRID: usize = 20_000;

/// Smallest positive root of `t = exp(-c (1 - t)^d)`.
pub fn t_c_solve(c: f64, d: usize) -> f64 {
    let mut prev = 0.0;
    for i in 1..TC_GRID {
        let t = i as f64 / TC_GRID as f64;
        if fixed_point_gap(t, c, d) >= 0.0 {
            let (mut lo, mut hi) = (prev, t);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if fixed_point_gap(mid, c, d) >= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            return hi;
        }
        prev = t;
    }
    1.0
}

/// `c t (1-t)^d + c/(d+1) (1-t)^{d+1} - (1-t)` at `t = t_c(c)`.
pub fn threshold_bracket(c: f64, d: usize) -> f64 {
    let t = t_c_solve(c, d);
    let s = 1.0 - t;
    c * t * s.powi(d as i32) + c / (d as f64 + 1.0) * s.powi(d as i32 + 1) - s
}

/// Predicted `β_d` of `Y_d(n, c/n C(n, d+1))`.
pub fn predicted_betti_d(n: usize, c: f64, d: usize) -> f64 {
    binomial(n, d) as f64 * threshold_bracket(c, d)
}

/// Smallest `c` at which the predicted `β_d` becomes positive.
pub fn c_d_solve(d: usize) -> f64 {
    let step = 1e-3;
    let mut lo = 0.5;
    let mut hi = lo;
    while threshold_bracket(hi, d) <= 1e-12 {
        lo = hi;
        hi += step;
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if threshold_bracket(mid, d) > 1e-12 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Least-squares `a n^2 + b n + c`; returns `[a, b, c]`.
pub fn quadratic_fit(points: &[(f64, f64)]) -> Result<[f64; 3]> {
    if points.len() < 3 {
        return Err(Error::SingularFit);
    }
    let k = points.len() as f64;
    let mu = points.iter().map(|p| p.0).sum::<f64>() / k;
    let sd = (points.iter().map(|p| (p.0 - mu).powi(2)).sum::<f64>() / k).sqrt();
    if !(sd > 0.0) {
        return Err(Error::SingularFit);
    }
    // normal equations in the standardized variable
    let mut m = [[0.0f64; 4]; 3];
    for &(x, y) in points {
        let z = (x - mu) / sd;
        let basis = [z * z, z, 1.0];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] += basis[i] * basis[j];
            }
            m[i][3] += basis[i] * y;
        }
    }
    for col in 0..3 {
        let piv = (col..3)
            .max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))
            .unwrap();
        if m[piv][col].abs() < 1e-10 * k {
            return Err(Error::SingularFit);
        }
        m.swap(col, piv);
        for r in 0..3 {
            if r != col {
                let f = m[r][col] / m[col][col];
                for c in col..4 {
                    m[r][c] -= f * m[col][c];
                }
            }
        }
    }
    let (p, q, r) = (m[0][3] / m[0][0], m[1][3] / m[1][1], m[2][3] / m[2][2]);
    // p z^2 + q z + r with z = (x - mu) / sd
    let a = p / (sd * sd);
    let b = q / sd - 2.0 * p * mu / (sd * sd);
    let c = r - q * mu / sd + p * mu * mu / (sd * sd);
    Ok([a, b, c])
}

pub fn predict(coeffs: &[f64; 3], n: f64) -> f64 {
    (coeffs[0] * n + coeffs[1]) * n + coeffs[2]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c_values() {
        assert!((c_value(50, 1061.413, 2) - 2.70769).abs() < 1e-5);
        assert!((c_value(110, 5362.723, 2) - 2.73330).abs() < 1e-5);
        assert!((c_value(30, 4060.0, 2) - 30.0).abs() < 1e-12);
    }

    #[test]
    fn t_c_values() {
        assert_eq!(t_c_solve(0.5, 2), 1.0);
        let t = t_c_solve(3.0, 2);
        assert!(fixed_point_gap(t, 3.0, 2).abs() < 1e-12);
        assert!(t < 0.1 && t > 0.05);
        // nothing smaller is a root
        for i in 1..1000 {
            let s = t * i as f64 / 1000.0;
            assert!(fixed_point_gap(s, 3.0, 2) < 0.0);
        }
        let mut last = 1.0;
        for c in [4.0, 6.0, 10.0, 20.0, 40.0] {
            let t = t_c_solve(c, 2);
            assert!(t < last);
            if c >= 10.0 {
                assert!((t / f64::exp(-c) - 1.0).abs() < 0.01);
            }
            last = t;
        }
    }

    #[test]
    fn threshold_constants() {
        let c2 = c_d_solve(2);
        assert!((c2 - 2.7538).abs() < 1e-3);
        assert!((c2 - 2.75383).abs() < 2e-4);
        for (c, sign) in [(c2 - 0.05, -1.0), (c2 - 0.005, -1.0), (c2 + 0.005, 1.0), (c2 + 0.05, 1.0)] {
            let b = threshold_bracket(c, 2);
            assert!(b * sign >= 0.0, "c={c} bracket={b}");
        }
        assert!(predicted_betti_d(50, 3.0, 2) > 0.0);
    }

    #[test]
    fn quadratic() {
        let fit = [0.0328109, -2.0328, 32.2885];
        assert!((predict(&fit, 150.0) - 465.61).abs() < 0.01);
        assert!((predict(&fit, 200.0) - 938.16).abs() < 0.01);
        let exact = [0.5, -3.0, 7.0];
        let pts: Vec<(f64, f64)> = (0..8).map(|i| {
            let x = 50.0 + 10.0 * i as f64;
            (x, predict(&exact, x))
        }).collect();
        let fit = quadratic_fit(&pts).unwrap();
        for i in 0..3 {
            assert!((fit[i] - exact[i]).abs() < 1e-9 * exact[i].abs().max(1.0), "{fit:?}");
        }
        assert!(matches!(quadratic_fit(&pts[..2]), Err(Error::SingularFit)));
        assert!(matches!(quadratic_fit(&[(1.0, 1.0), (1.0, 2.0), (1.0, 3.0)]), Err(Error::SingularFit)));
        assert!(matches!(quadratic_fit(&[(1.0, 1.0), (2.0, 2.0), (1.0, 3.0), (2.0, 0.0)]), Err(Error::SingularFit)));
    }
}
