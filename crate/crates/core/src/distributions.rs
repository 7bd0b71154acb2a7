//! Standard normal, central Student t and noncentral Student t probability
//! functions.
//!
//! All functions are pure. The noncentral t CDF sums the Poisson-weighted
//! incomplete-beta series outward from the Poisson mode in both directions, so
//! large noncentrality parameters do not underflow the leading weight.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{domain, Error, Result};
use crate::roots::solve_increasing;
use crate::special::{beta_reg_pair, ln_beta, ln_beta_front, ln_gamma};

/// Accuracy envelope of a distribution function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistributionAccuracy {
    /// Absolute error bound on returned probabilities.
    pub abs_tolerance: f64,
    pub max_df_supported: f64,
    pub max_ncp_supported: f64,
}

impl DistributionAccuracy {
    pub const NORMAL: Self = Self {
        abs_tolerance: 1e-10,
        max_df_supported: f64::INFINITY,
        max_ncp_supported: 0.0,
    };
    pub const CENTRAL_T: Self = Self {
        abs_tolerance: 1e-10,
        max_df_supported: 1e9,
        max_ncp_supported: 0.0,
    };
    pub const NONCENTRAL_T: Self = Self {
        abs_tolerance: 1e-8,
        max_df_supported: 1e9,
        max_ncp_supported: 200.0,
    };
}

impl Default for DistributionAccuracy {
    fn default() -> Self {
        Self::NONCENTRAL_T
    }
}

const SERIES_EPS: f64 = 1e-15;
const SERIES_MAX_TERMS: u64 = 100_000;

fn check_finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("{name} must be finite, got {v}")))
    }
}

fn check_df(df: f64) -> Result<()> {
    if df.is_nan() || df < 1.0 {
        return Err(domain(format!("degrees of freedom must be >= 1, got {df}")));
    }
    if df > DistributionAccuracy::CENTRAL_T.max_df_supported {
        return Err(Error::Range(format!(
            "degrees of freedom {df} exceed the supported maximum {:e}",
            DistributionAccuracy::CENTRAL_T.max_df_supported
        )));
    }
    Ok(())
}

fn check_probability(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(domain(format!("probability must lie in (0, 1), got {p}")))
    }
}

/// Standard normal CDF Φ(x).
pub fn normal_cdf(x: f64) -> Result<f64> {
    check_finite("x", x)?;
    Ok(phi(x))
}

#[inline]
pub(crate) fn phi(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

/// Inverse of the standard normal CDF.
pub fn normal_quantile(p: f64) -> Result<f64> {
    check_probability(p)?;
    Ok(normal_quantile_unchecked(p))
}

pub(crate) fn normal_quantile_unchecked(p: f64) -> f64 {
    if p == 0.5 {
        return 0.0;
    }
    let lower = p.min(1.0 - p);
    // rational starting point, |error| < 4.5e-4
    let t = (-2.0 * lower.ln()).sqrt();
    let mut z = -(t
        - (2.515_517 + 0.802_853 * t + 0.010_328 * t * t)
            / (1.0 + 1.432_788 * t + 0.189_269 * t * t + 0.001_308 * t * t * t));
    // Halley refinement on the lower tail
    for _ in 0..4 {
        let e = phi(z) - lower;
        let u = e * (2.0 * PI).sqrt() * (0.5 * z * z).exp();
        let step = u / (1.0 + 0.5 * z * u);
        z -= step;
        if step.abs() <= 1e-16 * z.abs().max(1.0) {
            break;
        }
    }
    if p < 0.5 {
        z
    } else {
        -z
    }
}

/// Central Student t CDF.
pub fn student_t_cdf(x: f64, df: f64) -> Result<f64> {
    check_finite("x", x)?;
    check_df(df)?;
    student_t_cdf_unchecked(x, df)
}

fn student_t_cdf_unchecked(x: f64, df: f64) -> Result<f64> {
    if x == 0.0 {
        return Ok(0.5);
    }
    let x2 = x * x;
    let tail = 0.5 * beta_reg_pair(0.5 * df, 0.5, df / (df + x2), x2 / (df + x2))?;
    Ok(if x > 0.0 { 1.0 - tail } else { tail })
}

/// Central Student t density.
pub fn student_t_pdf(x: f64, df: f64) -> Result<f64> {
    check_finite("x", x)?;
    check_df(df)?;
    Ok(t_pdf(x, df))
}

fn t_pdf(x: f64, df: f64) -> f64 {
    let ln = -0.5 * df.ln() - ln_beta(0.5 * df, 0.5) - 0.5 * (df + 1.0) * (x * x / df).ln_1p();
    ln.exp()
}

/// Inverse of the central Student t CDF.
pub fn student_t_quantile(p: f64, df: f64) -> Result<f64> {
    check_probability(p)?;
    check_df(df)?;
    if p == 0.5 {
        return Ok(0.0);
    }
    let lower = p.min(1.0 - p);
    let sign = if p < 0.5 { 1.0 } else { -1.0 };

    let t = if df == 1.0 {
        (PI * (lower - 0.5)).tan()
    } else if df == 2.0 {
        (2.0 * lower - 1.0) / (2.0 * lower * (1.0 - lower)).sqrt()
    } else {
        // Cornish-Fisher start, then bracket and polish on the CDF
        let z = normal_quantile_unchecked(lower);
        let z3 = z * z * z;
        let z5 = z3 * z * z;
        let guess = z + (z3 + z) / (4.0 * df) + (5.0 * z5 + 16.0 * z3 + 3.0 * z) / (96.0 * df * df);
        let f = |t: f64| Ok(student_t_cdf_unchecked(t, df)? - lower);
        let mut hi = guess.min(-1e-3) * 0.5;
        while f(hi)? < 0.0 {
            hi *= 0.5;
        }
        let mut lo = guess * 1.5 - 1.0;
        while f(lo)? > 0.0 {
            lo *= 2.0;
        }
        let root = solve_increasing(f, lo, hi, 1e-15 * guess.abs().max(1.0), 1e-17)?;
        polish_t(root, lower, df)?
    };
    Ok(sign * t)
}

/// One Newton step from a bracketed root, accepted only if it improves the residual.
fn polish_t(t: f64, target: f64, df: f64) -> Result<f64> {
    let r0 = student_t_cdf_unchecked(t, df)? - target;
    let next = t - r0 / t_pdf(t, df);
    let r1 = student_t_cdf_unchecked(next, df)? - target;
    Ok(if r1.abs() < r0.abs() { next } else { t })
}

/// Noncentral Student t CDF `P(T' <= x)` with `df` degrees of freedom and
/// noncentrality `ncp`.
pub fn noncentral_t_cdf(x: f64, df: f64, ncp: f64) -> Result<f64> {
    check_finite("x", x)?;
    check_df(df)?;
    check_finite("ncp", ncp)?;
    let limit = DistributionAccuracy::NONCENTRAL_T.max_ncp_supported;
    if ncp.abs() > limit {
        return Err(Error::Range(format!(
            "noncentrality {ncp} exceeds the supported range |ncp| <= {limit}"
        )));
    }
    if ncp == 0.0 {
        return student_t_cdf_unchecked(x, df);
    }
    let p = if x >= 0.0 {
        nct_nonnegative(x, df, ncp)?
    } else {
        1.0 - nct_nonnegative(-x, df, -ncp)?
    };
    Ok(p.clamp(0.0, 1.0))
}

/// Noncentral t CDF for `t >= 0`:
/// `Φ(-δ) + ½ Σ_i [P_i I_x(i + ½, ν/2) + Q_i I_x(i + 1, ν/2)]`, `x = t²/(ν + t²)`.
fn nct_nonnegative(t: f64, df: f64, delta: f64) -> Result<f64> {
    let base = phi(-delta);
    let t2 = t * t;
    let x = t2 / (df + t2);
    let y = df / (df + t2);
    if x == 0.0 {
        return Ok(base);
    }

    let lambda = 0.5 * delta * delta;
    let b = 0.5 * df;
    let k = lambda.floor();
    let ln_lambda = lambda.ln();

    let p_k = (-lambda + k * ln_lambda - ln_gamma(k + 1.0)).exp();
    let q_k = delta * FRAC_1_SQRT_2 * (-lambda + k * ln_lambda - ln_gamma(k + 1.5)).exp();
    let ip_k = beta_reg_pair(k + 0.5, b, x, y)?;
    let iq_k = beta_reg_pair(k + 1.0, b, x, y)?;
    // G(a) = x^a y^b / (a B(a, b)) links I_x(a, b) and I_x(a + 1, b)
    let gp_k = ln_beta_front(k + 0.5, b, x, y).exp();
    let gq_k = ln_beta_front(k + 1.0, b, x, y).exp();

    let mut sum = p_k * ip_k + q_k * iq_k;

    // upward from the mode
    let (mut p, mut q, mut ip, mut iq, mut gp, mut gq) = (p_k, q_k, ip_k, iq_k, gp_k, gq_k);
    let mut i = k;
    loop {
        let ap = i + 0.5;
        let aq = i + 1.0;
        ip -= gp;
        iq -= gq;
        gp *= x * (ap + b) / (ap + 1.0);
        gq *= x * (aq + b) / (aq + 1.0);
        i += 1.0;
        p *= lambda / i;
        q *= lambda / (i + 0.5);
        let magnitude = p * ip.max(0.0) + q.abs() * iq.max(0.0);
        sum += p * ip + q * iq;
        let ratio = lambda / (i + 1.0);
        if ratio < 1.0 && magnitude * ratio / (1.0 - ratio) < SERIES_EPS {
            break;
        }
        if i - k > SERIES_MAX_TERMS as f64 {
            return Err(Error::Convergence("noncentral t upward series"));
        }
    }

    // downward from the mode
    let (mut p, mut q, mut ip, mut iq, mut gp, mut gq) = (p_k, q_k, ip_k, iq_k, gp_k, gq_k);
    let mut i = k;
    while i >= 1.0 {
        let ap = i + 0.5;
        let aq = i + 1.0;
        gp *= ap / (x * (ap + b - 1.0));
        gq *= aq / (x * (aq + b - 1.0));
        ip += gp;
        iq += gq;
        p *= i / lambda;
        q *= (i + 0.5) / lambda;
        i -= 1.0;
        sum += p * ip + q * iq;
        let ratio = i / lambda;
        if (p + q.abs()) * ratio / (1.0 - ratio).max(f64::MIN_POSITIVE) < SERIES_EPS {
            break;
        }
    }

    Ok(base + 0.5 * sum)
}
