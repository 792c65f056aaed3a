//! Special functions used by the closed forms and the kernels.

use std::f64::consts::PI;
use std::sync::OnceLock;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Exponential integral `E1(x)` for `x > 0`.
pub fn exp1(x: f64) -> f64 {
    assert!(x > 0.0, "exp1 requires x > 0");
    if x <= 1.0 {
        exp1_series(x)
    } else {
        exp1_cf(x) * (-x).exp()
    }
}

/// Scaled exponential integral `e^x E1(x)` for `x > 0`, finite for large `x`.
pub fn exp1_scaled(x: f64) -> f64 {
    assert!(x > 0.0, "exp1_scaled requires x > 0");
    if x <= 1.0 {
        exp1_series(x) * x.exp()
    } else {
        exp1_cf(x)
    }
}

fn exp1_series(x: f64) -> f64 {
    let mut sum = 0.0;
    let mut term = 1.0;
    for k in 1..200 {
        term *= -x / k as f64;
        let add = -term / k as f64;
        sum += add;
        if add.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    -EULER_GAMMA - x.ln() + sum
}

// Modified Lentz evaluation of the continued fraction for e^x E1(x).
fn exp1_cf(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..500 {
        let an = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h
}

/// Legendre chi function `χ₂(z) = Σ z^(2k+1)/(2k+1)²` for `0 ≤ z ≤ 1`.
pub fn chi2(z: f64) -> f64 {
    assert!(
        (0.0..=1.0).contains(&z),
        "chi2 requires 0 <= z <= 1, got {z}"
    );
    if z <= 0.5 {
        chi2_series(z)
    } else if z == 1.0 {
        PI * PI / 8.0
    } else {
        // Landen-type reflection maps (0.5, 1) into (0, 1/3).
        let x = (1.0 - z) / (1.0 + z);
        PI * PI / 8.0 - 0.5 * x.ln() * z.ln() - chi2_series(x)
    }
}

fn chi2_series(z: f64) -> f64 {
    let z2 = z * z;
    let mut p = z;
    let mut sum = 0.0;
    for k in 0..200 {
        let d = (2 * k + 1) as f64;
        let add = p / (d * d);
        sum += add;
        if add < 1e-17 * sum {
            break;
        }
        p *= z2;
    }
    sum
}

/// Real dilogarithm `Li₂(z)` for `-1 ≤ z ≤ 1`.
pub fn dilog(z: f64) -> f64 {
    assert!(
        (-1.0..=1.0).contains(&z),
        "dilog requires -1 <= z <= 1, got {z}"
    );
    if z == 1.0 {
        PI * PI / 6.0
    } else if z > 0.5 {
        PI * PI / 6.0 - z.ln() * (-z).ln_1p() - dilog_series(1.0 - z)
    } else if z < -0.5 {
        let l = (-z).ln_1p();
        -dilog_series(z / (z - 1.0)) - 0.5 * l * l
    } else {
        dilog_series(z)
    }
}

fn dilog_series(z: f64) -> f64 {
    let mut p = z;
    let mut sum = 0.0;
    for k in 1..400 {
        let kf = k as f64;
        let add = p / (kf * kf);
        sum += add;
        if add.abs() < 1e-17 * sum.abs() {
            break;
        }
        p *= z;
    }
    sum
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, dp)
}

/// Cached 8-point Gauss–Legendre rule mapped to `[0, 1]`.
pub fn gl8_unit() -> &'static ([f64; 8], [f64; 8]) {
    static RULE: OnceLock<([f64; 8], [f64; 8])> = OnceLock::new();
    RULE.get_or_init(|| {
        let (x, w) = gauss_legendre(8);
        let mut xs = [0.0; 8];
        let mut ws = [0.0; 8];
        for i in 0..8 {
            xs[i] = 0.5 * (x[i] + 1.0);
            ws[i] = 0.5 * w[i];
        }
        (xs, ws)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp1_reference_values() {
        // Abramowitz & Stegun table 5.1.
        assert!((exp1(0.5) - 0.559_773_594_776_160_8).abs() < 1e-14);
        assert!((exp1(1.0) - 0.219_383_934_395_520_3).abs() < 1e-14);
        assert!((exp1(2.0) - 0.048_900_510_708_061_1).abs() < 1e-15);
        assert!((exp1_scaled(10.0) - 0.091_563_333_939_788_08).abs() < 1e-14);
    }

    #[test]
    fn chi2_branches_agree() {
        for &z in &[0.49f64, 0.5, 0.51, 0.7, 0.9, 0.999] {
            let direct: f64 = (0..200_000)
                .map(|k| {
                    let d = (2 * k + 1) as f64;
                    z.powi(2 * k + 1) / (d * d)
                })
                .sum();
            assert!((chi2(z) - direct).abs() < 1e-10, "z={z}");
        }
    }

    #[test]
    fn dilog_values_and_chi2_identity() {
        assert!((dilog(-1.0) + PI * PI / 12.0).abs() < 1e-15);
        assert!((dilog(0.5) - (PI * PI / 12.0 - 0.5 * 2f64.ln().powi(2))).abs() < 1e-15);
        for &z in &[0.1, 0.45, 0.6, 0.8, 0.99] {
            let chi = 0.5 * (dilog(z) - dilog(-z));
            assert!((chi - chi2(z)).abs() < 1e-14, "z={z}");
        }
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(8);
        for deg in 0..16 {
            let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg)).sum();
            let exact = if deg % 2 == 1 {
                0.0
            } else {
                2.0 / (deg as f64 + 1.0)
            };
            assert!((q - exact).abs() < 1e-14, "degree {deg}");
        }
    }
}
