//! Reference computations used only by the test suites.
//!
//! Everything here is deliberately independent of the library's numerical
//! path: the error function comes from its Maclaurin series and Laplace
//! continued fraction, and the noncentral t CDF comes from adaptive
//! Gauss-Kronrod quadrature of the normal/chi mixture representation.

#![allow(dead_code)]

use std::f64::consts::PI;

/// erf(x) from the Maclaurin series, for |x| <= 3.
pub fn erf_series(x: f64) -> f64 {
    let mut term = x;
    let mut sum = x;
    let x2 = x * x;
    let mut n = 0.0;
    loop {
        n += 1.0;
        term *= -x2 / n;
        let contrib = term / (2.0 * n + 1.0);
        sum += contrib;
        if contrib.abs() <= 1e-18 * sum.abs() {
            break;
        }
    }
    2.0 / PI.sqrt() * sum
}

/// erfc(x) for x > 0 from the Laplace continued fraction, evaluated bottom-up.
pub fn erfc_cf(x: f64) -> f64 {
    // erfc(x) = exp(-x²)/√π · 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + 2/(x + ...)))))
    let mut tail = x;
    for k in (1..=200).rev() {
        tail = x + (k as f64 / 2.0) / tail;
    }
    (-x * x).exp() / PI.sqrt() / tail
}

pub fn normal_cdf(z: f64) -> f64 {
    let x = z / 2f64.sqrt();
    if x.abs() <= 3.0 {
        0.5 * (1.0 + erf_series(x))
    } else if x > 0.0 {
        1.0 - 0.5 * erfc_cf(x)
    } else {
        0.5 * erfc_cf(-x)
    }
}

/// Quantile by bisection over the oracle CDF.
pub fn normal_quantile(p: f64) -> f64 {
    bisect(|z| normal_cdf(z) - p, -40.0, 40.0)
}

pub fn bisect(mut f: impl FnMut(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let pair = f(c - dx) + f(c + dx);
        kron += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

/// Globally adaptive Gauss-Kronrod (7, 15) quadrature: repeatedly bisects the
/// panel with the largest error estimate until the summed estimate is below
/// `tol` or the panel budget runs out.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let mut panels = vec![{
        let (v, e) = gk15(&f, a, b);
        (a, b, v, e)
    }];
    for _ in 0..2000 {
        let total_err: f64 = panels.iter().map(|p| p.3).sum();
        let total: f64 = panels.iter().map(|p| p.2).sum();
        if total_err <= tol.max(1e-15 * total.abs()) {
            break;
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.partial_cmp(&y.1 .3).unwrap())
            .unwrap();
        let (lo, hi, _, _) = panels.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(&f, lo, mid);
        let (v2, e2) = gk15(&f, mid, hi);
        panels.push((lo, mid, v1, e1));
        panels.push((mid, hi, v2, e2));
    }
    panels.iter().map(|p| p.2).sum()
}

/// Noncentral t CDF as `E[Φ(x S - δ)]` with `S = sqrt(χ²_ν / ν)`, integrating
/// over the (numerically normalized) density of S.
pub fn noncentral_t_cdf(x: f64, df: f64, ncp: f64) -> f64 {
    let mode = ((df - 1.0).max(0.0) / df).sqrt();
    let log_mode = if df > 1.0 { (df - 1.0) * mode.ln() - 0.5 * df * mode * mode } else { 0.0 };
    let log_g = move |s: f64| {
        if s <= 0.0 {
            return f64::NEG_INFINITY;
        }
        (df - 1.0) * s.ln() - 0.5 * df * s * s - log_mode
    };
    let spread = 1.0 / (2.0 * df).sqrt();
    let lo = (mode - 40.0 * spread).max(0.0);
    let hi = mode + 40.0 * spread + 1.0 / df;

    // split around the mode so the peak lies on a panel boundary
    let mut knots = vec![lo];
    for k in [-8.0, -3.0, -1.0, 0.0, 1.0, 3.0, 8.0] {
        let s = mode + k * spread;
        if s > lo && s < hi {
            knots.push(s);
        }
    }
    knots.push(hi);

    let mut mass = 0.0;
    let mut weighted = 0.0;
    for w in knots.windows(2) {
        mass += integrate(|s| log_g(s).exp(), w[0], w[1], 1e-14);
        weighted += integrate(|s| normal_cdf(x * s - ncp) * log_g(s).exp(), w[0], w[1], 1e-14);
    }
    weighted / mass
}

pub fn student_t_cdf(x: f64, df: f64) -> f64 {
    noncentral_t_cdf(x, df, 0.0)
}

/// ln C(n, k) via summed logs, exact enough for n up to a few thousand.
fn ln_choose(n: u64, k: u64) -> f64 {
    let k = k.min(n - k);
    (0..k).map(|i| ((n - i) as f64).ln() - ((i + 1) as f64).ln()).sum()
}

pub fn binomial_pmf(n: u64, k: u64, p: f64) -> f64 {
    (ln_choose(n, k) + k as f64 * p.ln() + (n - k) as f64 * (1.0 - p).ln()).exp()
}

/// Exact rejection probability of the two-sided score test `|p̂ - p0| / sqrt(p0 q0 / n) >= z`
/// when the true proportion is `p_true`.
pub fn score_test_exact_power(n: u64, p0: f64, p_true: f64, alpha: f64) -> f64 {
    let z = normal_quantile(1.0 - alpha / 2.0);
    let se = (p0 * (1.0 - p0) / n as f64).sqrt();
    (0..=n)
        .filter(|&k| ((k as f64 / n as f64 - p0) / se).abs() >= z)
        .map(|k| binomial_pmf(n, k, p_true))
        .sum()
}

/// Upper tail `P(X >= k)` for X ~ Binomial(n, p).
pub fn binomial_upper_tail(n: u64, k: u64, p: f64) -> f64 {
    (k..=n).map(|j| binomial_pmf(n, j, p)).sum()
}
