//! Bessel functions `J0`, `J1` of real argument and the zeros of `J0`.
//!
//! Power series for small arguments, Miller's backward recurrence in the
//! intermediate range and the Hankel asymptotic expansion beyond
//! [`ASYMPTOTIC_FROM`]. All three branches are accurate to a few ulps times
//! the magnitude of the neighbouring terms.

use std::f64::consts::{FRAC_PI_4, PI};

const SERIES_BELOW: f64 = 2.0;
const ASYMPTOTIC_FROM: f64 = 25.0;

/// `(J0(x), J1(x))`.
pub fn j0_j1(x: f64) -> (f64, f64) {
    let ax = x.abs();
    let (j0, j1) = if ax < SERIES_BELOW {
        series(ax)
    } else if ax < ASYMPTOTIC_FROM {
        miller(ax)
    } else {
        (hankel(0, ax), hankel(1, ax))
    };
    // J0 is even, J1 odd.
    if x < 0.0 {
        (j0, -j1)
    } else {
        (j0, j1)
    }
}

pub fn j0(x: f64) -> f64 {
    j0_j1(x).0
}

pub fn j1(x: f64) -> f64 {
    j0_j1(x).1
}

fn series(x: f64) -> (f64, f64) {
    let q = -0.25 * x * x;
    let (mut t0, mut s0) = (1.0, 1.0);
    let (mut t1, mut s1) = (0.5 * x, 0.5 * x);
    for k in 1..40 {
        let kf = k as f64;
        t0 *= q / (kf * kf);
        t1 *= q / (kf * (kf + 1.0));
        s0 += t0;
        s1 += t1;
        if t0.abs() < 1e-18 * s0.abs() && t1.abs() < 1e-18 * s1.abs().max(1e-300) {
            break;
        }
    }
    (s0, s1)
}

fn miller(x: f64) -> (f64, f64) {
    let start = (x + 20.0 + 2.0 * (40.0 * x).sqrt()) as usize;
    let m = start + start % 2;
    let two_over_x = 2.0 / x;
    let (mut next, mut cur) = (0.0_f64, 1e-30_f64);
    let mut norm = 0.0;
    let mut j1 = 0.0;
    for k in (1..=m).rev() {
        let prev = k as f64 * two_over_x * cur - next;
        next = cur;
        cur = prev;
        // `cur` now holds J_{k-1}.
        if k - 1 == 1 {
            j1 = cur;
        }
        if (k - 1) % 2 == 0 && k - 1 > 0 {
            norm += 2.0 * cur;
        }
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            next *= 1e-250;
            norm *= 1e-250;
            j1 *= 1e-250;
        }
    }
    norm += cur;
    (cur / norm, j1 / norm)
}

fn hankel(order: u32, x: f64) -> f64 {
    let mu = 4.0 * (order * order) as f64;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0_f64;
    let mut last = f64::INFINITY;
    for k in 1..60 {
        let odd = (2 * k - 1) as f64;
        term *= (mu - odd * odd) / (k as f64 * 8.0 * x);
        if term.abs() >= last {
            break;
        }
        last = term.abs();
        // a_k/x^k enters P for even k and Q for odd k, with alternating sign.
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if term.abs() < 1e-17 {
            break;
        }
    }
    let chi = x - (2 * order + 1) as f64 * FRAC_PI_4;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

/// The `n`-th positive zero of `J0` (`n ≥ 1`).
pub fn j0_zero(n: usize) -> f64 {
    assert!(n >= 1, "zeros are numbered from 1");
    let beta = (n as f64 - 0.25) * PI;
    let b2 = beta * beta;
    let mut x = beta + 1.0 / (8.0 * beta) - 31.0 / (384.0 * beta * b2)
        + 3779.0 / (15360.0 * beta * b2 * b2);
    for _ in 0..3 {
        let (f, d) = j0_j1(x);
        // J0' = -J1
        x += f / d;
    }
    x
}

/// Index of the first zero of `J0` strictly greater than `x`.
pub fn first_zero_above(x: f64) -> usize {
    let mut n = ((x / PI + 0.25).floor() as usize).max(1);
    while n > 1 && j0_zero(n - 1) > x {
        n -= 1;
    }
    while j0_zero(n) <= x {
        n += 1;
    }
    n
}
