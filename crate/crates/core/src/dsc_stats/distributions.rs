//! Distribution functions used by the tests: chi-square and studentized-range
//! upper tails, the Kolmogorov limiting distribution and the normal CDF.

use std::f64::consts::{PI, SQRT_2};

use super::quadrature::integrate;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of the gamma function for `x > 0` (Lanczos approximation).
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // reflection
        return (PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

const GAMMA_EPS: f64 = 1e-15;
const GAMMA_MAX_ITER: usize = 10_000;

fn gamma_p_series(a: f64, x: f64) -> f64 {
    let mut ap = a;
    let mut del = 1.0 / a;
    let mut sum = del;
    for _ in 0..GAMMA_MAX_ITER {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if del.abs() < sum.abs() * GAMMA_EPS {
            break;
        }
    }
    sum * (-x + a * x.ln() - ln_gamma(a)).exp()
}

fn gamma_q_continued_fraction(a: f64, x: f64) -> f64 {
    // modified Lentz
    let tiny = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..GAMMA_MAX_ITER {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < tiny {
            d = tiny;
        }
        c = b + an / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < GAMMA_EPS {
            break;
        }
    }
    (-x + a * x.ln() - ln_gamma(a)).exp() * h
}

/// Regularized upper incomplete gamma `Q(a, x) = Γ(a, x) / Γ(a)`.
pub fn gamma_q(a: f64, x: f64) -> f64 {
    assert!(a > 0.0, "gamma_q needs a > 0");
    if x <= 0.0 {
        return 1.0;
    }
    if x < a + 1.0 {
        (1.0 - gamma_p_series(a, x)).clamp(0.0, 1.0)
    } else {
        gamma_q_continued_fraction(a, x).clamp(0.0, 1.0)
    }
}

/// Upper tail `P(X > x)` of the chi-square distribution.
pub fn chi_square_sf(x: f64, df: f64) -> f64 {
    gamma_q(0.5 * df, 0.5 * x)
}

pub fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / SQRT_2)
}

/// Absolute accuracy target for the studentized-range quadrature.
pub const PTUKEY_ABS_TOL: f64 = 1e-8;

/// Upper tail `P(Q > q)` of the range of `k` independent standard normals
/// (studentized range with infinite degrees of freedom).
///
/// Evaluated as `k ∫ φ(z) [Φ(z)^{k-1} - (Φ(z) - Φ(z-q))^{k-1}] dz`, which equals
/// `1 - k ∫ φ(z) [Φ(z) - Φ(z-q)]^{k-1} dz` but keeps precision in the far tail.
pub fn studentized_range_sf(q: f64, k: usize) -> f64 {
    assert!(k >= 2, "studentized range needs k >= 2");
    if q <= 0.0 {
        return 1.0;
    }
    let km1 = (k - 1) as i32;
    let integrand = |z: f64| {
        let upper = normal_cdf(z);
        let inner = (upper - normal_cdf(z - q)).max(0.0);
        normal_pdf(z) * (upper.powi(km1) - inner.powi(km1))
    };
    let v = k as f64 * integrate(integrand, -8.0, 8.0 + q, PTUKEY_ABS_TOL / k as f64);
    v.clamp(0.0, 1.0)
}

pub fn studentized_range_cdf(q: f64, k: usize) -> f64 {
    1.0 - studentized_range_sf(q, k)
}

/// Limiting Kolmogorov survival function `P(K > λ) = 2 Σ (-1)^{i-1} e^{-2 i² λ²}`.
///
/// For small `λ` the alternating series converges slowly, so the equivalent
/// theta-function form of the CDF is used there.
pub fn kolmogorov_sf(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    if lambda < 1.18 {
        let w = (2.0 * PI).sqrt() / lambda;
        let s = -PI * PI / (8.0 * lambda * lambda);
        let cdf: f64 = (1..=20)
            .map(|i| {
                let m = (2 * i - 1) as f64;
                (m * m * s).exp()
            })
            .sum::<f64>()
            * w;
        (1.0 - cdf).clamp(0.0, 1.0)
    } else {
        let mut sum = 0.0;
        let mut sign = 1.0;
        for i in 1..=100 {
            let term = (-2.0 * (i * i) as f64 * lambda * lambda).exp();
            sum += sign * term;
            if term < 1e-17 {
                break;
            }
            sign = -sign;
        }
        (2.0 * sum).clamp(0.0, 1.0)
    }
}
