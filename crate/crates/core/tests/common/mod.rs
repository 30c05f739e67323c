//! Reference implementations used as oracles by the integration tests.
//! None of these call into the library.

#![allow(dead_code)]

use std::f64::consts::PI;

/// Double-exponential (tanh-sinh) quadrature on [a, b], refined by step
/// halving until successive levels agree to `tol`.
pub fn tanh_sinh(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let r = (b - a) / 2.0;
    let node = |t: f64| {
        let s = PI / 2.0 * t.sinh();
        let ch = s.cosh();
        // distance to the nearer endpoint, computed without cancellation
        let gap = r / (s.abs().exp() * ch);
        let x = if s < 0.0 { a + gap } else { b - gap };
        let w = r * PI / 2.0 * t.cosh() / (ch * ch);
        (x, w)
    };
    de_sum(f, node, 4.0, tol, |x| x > a && x < b)
}

/// Double-exponential (exp-sinh) quadrature on [a, ∞).
pub fn exp_sinh(f: impl Fn(f64) -> f64, a: f64, tol: f64) -> f64 {
    let node = |t: f64| {
        let e = (PI / 2.0 * t.sinh()).exp();
        (a + e, PI / 2.0 * t.cosh() * e)
    };
    de_sum(f, node, 4.5, tol, |x| x.is_finite() && x > a)
}

fn de_sum(f: impl Fn(f64) -> f64, node: impl Fn(f64) -> (f64, f64), t_max: f64, tol: f64, inside: impl Fn(f64) -> bool) -> f64 {
    let eval = |t: f64| {
        let (x, w) = node(t);
        if !inside(x) || w == 0.0 {
            return 0.0;
        }
        let v = f(x) * w;
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    let mut h = 0.5;
    let mut sum = eval(0.0);
    let mut k = 1;
    while (k as f64) * h <= t_max {
        sum += eval(k as f64 * h) + eval(-(k as f64) * h);
        k += 1;
    }
    let mut prev = sum * h;
    for _ in 0..12 {
        h /= 2.0;
        // add the new midpoints only
        let mut k = 1;
        while (k as f64) * h <= t_max {
            sum += eval(k as f64 * h) + eval(-(k as f64) * h);
            k += 2;
        }
        let cur = sum * h;
        if (cur - prev).abs() <= tol * cur.abs() {
            return cur;
        }
        prev = cur;
    }
    prev
}

/// Modified Bessel function K₁ by its ascending series (fine for x ≲ 10).
pub fn bessel_k1(x: f64) -> f64 {
    const EULER: f64 = 0.577_215_664_901_532_9;
    let q = x * x / 4.0;
    let mut i1 = 0.0;
    let mut s = 0.0;
    // term = (x²/4)^k / (k!(k+1)!)
    let mut term = 1.0;
    let mut h_k = 0.0; // harmonic number H_k
    for k in 0..200 {
        let kf = k as f64;
        if k > 0 {
            term *= q / (kf * (kf + 1.0));
            h_k += 1.0 / kf;
        }
        let psi_sum = -2.0 * EULER + 2.0 * h_k + 1.0 / (kf + 1.0);
        i1 += term;
        s += psi_sum * term;
        if term < 1e-18 * i1 {
            break;
        }
    }
    1.0 / x + (x / 2.0) * i1 * (x / 2.0).ln() - (x / 4.0) * s
}

/// F_D(a; b1, b2; c; x1, x2) by its double power series, |x_i| < 1.
pub fn lauricella_fd2(a: f64, b1: f64, b2: f64, c: f64, x1: f64, x2: f64) -> f64 {
    let mut total = 0.0;
    // outer over k, inner over j; coefficient (a)_{j+k}(b1)_j(b2)_k/((c)_{j+k} j! k!)
    let mut row = 1.0; // j = 0 coefficient for the current k
    for k in 0..400 {
        let kf = k as f64;
        if k > 0 {
            row *= (a + kf - 1.0) * (b2 + kf - 1.0) / ((c + kf - 1.0) * kf) * x2;
        }
        let mut t = row;
        let mut s = 0.0;
        for j in 0..400 {
            let jf = j as f64;
            if j > 0 {
                t *= (a + kf + jf - 1.0) * (b1 + jf - 1.0) / ((c + kf + jf - 1.0) * jf) * x1;
            }
            s += t;
            if t.abs() < 1e-18 * s.abs() && j > 2 {
                break;
            }
        }
        total += s;
        if s.abs() < 1e-18 * total.abs() && k > 2 {
            break;
        }
    }
    total
}

/// Gauss ₂F₁ by its power series, |x| < 1.
pub fn hyp2f1_series(a: f64, b: f64, c: f64, x: f64) -> f64 {
    let mut t = 1.0;
    let mut s = 1.0;
    for k in 0..5000 {
        let kf = k as f64;
        t *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * x;
        s += t;
        if t.abs() < 1e-18 * s.abs() {
            break;
        }
    }
    s
}

pub fn rel(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        (a - b).abs() / b.abs()
    }
}
