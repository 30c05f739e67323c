//! Gamma function and friends.
//!
//! `gamma` uses a Lanczos sum (g = 607/128) with reflection below 1/2.
//! `log_gamma` switches to Taylor expansions about 1 and 2 on [0.5, 2.5] so
//! that the relative error stays small close to the zeros at 1 and 2.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 607.0 / 128.0;
const LANCZOS_COEF: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_747,
    -0.491_913_816_097_620_2,
    0.339_946_499_848_118_9e-4,
    0.465_236_289_270_485_8e-4,
    -0.983_744_753_048_795_6e-4,
    0.158_088_703_224_912_5e-3,
    -0.210_264_441_724_104_9e-3,
    0.217_439_618_115_212_6e-3,
    -0.164_318_106_536_763_9e-3,
    0.844_182_239_838_527_4e-4,
    -0.261_908_384_015_814_1e-4,
    0.368_991_826_595_316_2e-5,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Largest argument for which Γ(x) is representable.
pub const GAMMA_MAX_ARG: f64 = 171.624_376_956_302_7;

fn lanczos_sum(z: f64) -> f64 {
    // z is the shifted argument (x - 1)
    LANCZOS_COEF[1..]
        .iter()
        .enumerate()
        .fold(LANCZOS_COEF[0], |acc, (k, c)| acc + c / (z + (k + 1) as f64))
}

/// sin(πx) with exact zeros at the integers.
pub fn sin_pi(x: f64) -> f64 {
    let mut r = x % 2.0;
    if r > 1.0 {
        r -= 2.0;
    } else if r < -1.0 {
        r += 2.0;
    }
    if r > 0.5 {
        r = 1.0 - r;
    } else if r < -0.5 {
        r = -1.0 - r;
    }
    (PI * r).sin()
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

/// Γ(x) for real x away from the poles.
pub fn gamma(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::domain("gamma of NaN"));
    }
    if is_nonpositive_integer(x) {
        return Err(Error::Pole(x));
    }
    if x > GAMMA_MAX_ARG {
        return Err(Error::Overflow(format!("gamma({x}) exceeds f64 range")));
    }
    if x < 0.5 {
        let s = sin_pi(x);
        let one_minus = 1.0 - x;
        if one_minus > GAMMA_MAX_ARG {
            let ln_mag = PI.ln() - s.abs().ln() - log_gamma_pos(one_minus);
            return Ok(s.signum() * ln_mag.exp());
        }
        return Ok(PI / (s * gamma(one_minus)?));
    }
    if x == x.round() && x <= 23.0 {
        // exact factorials
        let n = x as u32;
        return Ok((1..n).fold(1.0, |acc, k| acc * k as f64));
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    let half = t.powf(0.5 * (z + 0.5));
    Ok((2.0 * PI).sqrt() * half * (half * (-t).exp()) * lanczos_sum(z))
}

/// Table of ζ(k) − 1 for k = 2..ZETA_TERMS, via Euler–Maclaurin with N = 10.
fn zeta_minus_one() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        const N: f64 = 10.0;
        // B_{2j}/(2j)!
        const BERN: [f64; 6] = [
            1.0 / 12.0,
            -1.0 / 720.0,
            1.0 / 30240.0,
            -1.0 / 1209600.0,
            1.0 / 47900160.0,
            -691.0 / 1307674368000.0,
        ];
        (0..ZETA_TERMS + 1)
            .map(|k| {
                if k < 2 {
                    return f64::NAN;
                }
                let s = k as f64;
                let head: f64 = (2..10).map(|n| (n as f64).powf(-s)).sum();
                let mut tail = N.powf(1.0 - s) / (s - 1.0) + 0.5 * N.powf(-s);
                // rising product s(s+1)...(s+2j-2)
                let mut rising = s;
                let mut npow = N.powf(-s - 1.0);
                for (j, b) in BERN.iter().enumerate() {
                    tail += b * rising * npow;
                    let j = j as f64 + 1.0;
                    rising *= (s + 2.0 * j - 1.0) * (s + 2.0 * j);
                    npow /= N * N;
                }
                head + tail
            })
            .collect()
    })
}

const ZETA_TERMS: usize = 90;

/// ln Γ(1 + e) for |e| ≤ 1/2.
fn log_gamma_near_one(e: f64) -> f64 {
    let zm1 = zeta_minus_one();
    let mut sum = -EULER_GAMMA * e;
    let mut pow = -e;
    for (k, zk) in zm1.iter().enumerate().take(ZETA_TERMS + 1).skip(2) {
        pow *= -e;
        let term = (zk + 1.0) * pow / k as f64;
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(f64::MIN_POSITIVE) {
            break;
        }
    }
    sum
}

/// ln Γ(2 + e) for |e| ≤ 1/2.
fn log_gamma_near_two(e: f64) -> f64 {
    let zm1 = zeta_minus_one();
    let mut sum = (1.0 - EULER_GAMMA) * e;
    let mut pow = -e;
    for (k, zk) in zm1.iter().enumerate().take(ZETA_TERMS + 1).skip(2) {
        pow *= -e;
        let term = zk * pow / k as f64;
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(f64::MIN_POSITIVE) {
            break;
        }
    }
    sum
}

fn log_gamma_pos(x: f64) -> f64 {
    if x < 0.5 {
        return log_gamma_near_one(x) - x.ln();
    }
    if x <= 1.5 {
        return log_gamma_near_one(x - 1.0);
    }
    if x <= 2.5 {
        return log_gamma_near_two(x - 2.0);
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (z + 0.5) * t.ln() - t + lanczos_sum(z).ln()
}

/// ln Γ(x) for x > 0.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("log_gamma requires x > 0, got {x}")));
    }
    Ok(log_gamma_pos(x))
}

/// ln|Γ(x)| and the sign of Γ(x) for any real non-pole x.
pub fn ln_gamma_signed(x: f64) -> Result<(f64, f64)> {
    if is_nonpositive_integer(x) {
        return Err(Error::Pole(x));
    }
    if x > 0.0 {
        return Ok((log_gamma_pos(x), 1.0));
    }
    let s = sin_pi(x);
    Ok((PI.ln() - s.abs().ln() - log_gamma_pos(1.0 - x), s.signum()))
}

/// ln|1/Γ(x)| and sign of 1/Γ(x); the sign is 0 at the poles of Γ.
pub fn ln_rgamma_signed(x: f64) -> (f64, f64) {
    match ln_gamma_signed(x) {
        Ok((l, s)) => (-l, s),
        Err(_) => (f64::NEG_INFINITY, 0.0),
    }
}

/// Rising factorial (a)_k.
pub fn pochhammer(a: f64, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (a + j as f64))
}

/// Euler beta function B(a, b) for a, b > 0.
pub fn beta(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::domain(format!("beta requires positive arguments, got ({a}, {b})")));
    }
    Ok((log_gamma_pos(a) + log_gamma_pos(b) - log_gamma_pos(a + b)).exp())
}

/// Binomial coefficient C(n, k) as f64.
pub fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// ln Γ(z) for complex z off the poles, up to an additive multiple of 2πi.
pub(crate) fn ln_gamma_complex(z: Complex64) -> Complex64 {
    // B_{2j} / (2j (2j-1))
    const STIRLING: [f64; 8] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360360.0,
        1.0 / 156.0,
        -3617.0 / 122400.0,
    ];
    let mut shift = Complex64::new(0.0, 0.0);
    let mut w = z;
    while w.re < 12.0 && w.norm() < 16.0 || w.re < 0.5 {
        shift += w.ln();
        w += 1.0;
    }
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut p = inv;
    for c in STIRLING {
        series += p * c;
        p *= inv2;
    }
    (w - 0.5) * w.ln() - w + LN_SQRT_2PI + series - shift
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn gamma_basic_values() {
        assert_eq!(gamma(1.0).unwrap(), 1.0);
        assert!(rel(gamma(0.5).unwrap(), PI.sqrt()) < 1e-15);
        // 6.5·5.5·…·0.5·Γ(0.5)
        let recur = (0..7).fold(PI.sqrt(), |acc, k| acc * (0.5 + k as f64));
        assert!(rel(gamma(7.5).unwrap(), recur) < 1e-14);
        assert!(rel(gamma(-0.5).unwrap(), -2.0 * PI.sqrt()) < 1e-14);
        assert!(rel(gamma(170.5).unwrap(), (log_gamma(170.5).unwrap()).exp()) < 1e-12);
    }

    #[test]
    fn gamma_errors() {
        assert!(matches!(gamma(0.0), Err(Error::Pole(_))));
        assert!(matches!(gamma(-3.0), Err(Error::Pole(_))));
        assert!(matches!(gamma(172.0), Err(Error::Overflow(_))));
        assert!(log_gamma(0.0).is_err());
        assert!(log_gamma(-1.5).is_err());
    }

    #[test]
    fn log_gamma_values() {
        assert_eq!(log_gamma(1.0).unwrap(), 0.0);
        assert_eq!(log_gamma(2.0).unwrap(), 0.0);
        assert!(rel(log_gamma(10.0).unwrap(), 362880f64.ln()) < 1e-15);
        // mpmath: loggamma(1.25), loggamma(0.1), loggamma(1.999)
        assert!(rel(log_gamma(1.25).unwrap(), -0.098_271_836_421_813_17) < 1e-14);
        assert!(rel(log_gamma(0.1).unwrap(), 2.252_712_651_734_206) < 1e-14);
        assert!(rel(log_gamma(1.999).unwrap(), -4.224_618_006_921_538e-4) < 1e-12);
    }

    #[test]
    fn signed_and_reciprocal() {
        let (l, s) = ln_gamma_signed(-2.5).unwrap();
        assert!(rel(s * l.exp(), gamma(-2.5).unwrap()) < 1e-14);
        assert_eq!(ln_rgamma_signed(-2.0).1, 0.0);
    }

    #[test]
    fn pochhammer_values() {
        assert_eq!(pochhammer(3.0, 0), 1.0);
        assert_eq!(pochhammer(-2.0, 3), 0.0);
        assert_eq!(pochhammer(0.5, 3), 1.875);
    }

    #[test]
    fn complex_log_gamma_matches_real_axis() {
        for &x in &[0.3, 1.0, 2.5, 7.25, 30.0] {
            let c = ln_gamma_complex(Complex64::new(x, 0.0));
            assert!((c.re - log_gamma(x).unwrap()).abs() < 1e-13, "x = {x}");
        }
        // |Γ(1/2 + it)|² = π / cosh(πt)
        let t = 3.0;
        let c = ln_gamma_complex(Complex64::new(0.5, t));
        assert!(rel((2.0 * c.re).exp(), PI / (PI * t).cosh()) < 1e-12);
    }
}
