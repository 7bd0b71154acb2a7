//! Power, sample size and minimum detectable effect for one-sample means,
//! two-sample means and one proportion.
//!
//! Mean designs use exact noncentral t power (not the normal approximation),
//! so small-sample corrections are reproduced. The proportion design uses the
//! score statistic with the variance evaluated under the null.

use serde::{Deserialize, Serialize};

use crate::distributions::{
    noncentral_t_cdf, normal_quantile_unchecked, phi, student_t_quantile, DistributionAccuracy,
};
use crate::error::{domain, Error, Result};
use crate::roots::{smallest_satisfying, solve_increasing};

/// Sample sizes above this are reported as infeasible.
pub const MAX_SAMPLE_SIZE: u64 = 100_000_000;
/// Effects smaller than this in standardized units are treated as no effect.
pub const MIN_DETECTABLE_DELTA: f64 = 1e-6;
/// Upper end of the standardized-effect bracket searched for target means.
pub const MAX_TARGET_DELTA: f64 = 50.0;
/// Power tolerance of the target-mean solver.
pub const TARGET_POWER_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sides {
    OneSided,
    #[default]
    TwoSided,
}

/// Side of the null on which the alternative lies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// Alternative mean below the null; better impact under inverted percentiles.
    #[default]
    Lower,
    Upper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolvedFor {
    Power,
    SampleSize,
    TargetMean,
}

/// A one-sample mean design. Exactly one of `mua`, `n` and the requested
/// `power` is the unknown, depending on which solver is called.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerQuery {
    pub mu0: f64,
    pub mua: Option<f64>,
    pub sd: f64,
    pub n: Option<u64>,
    pub alpha: f64,
    pub power: f64,
    pub sides: Sides,
    pub direction: Direction,
}

impl Default for PowerQuery {
    fn default() -> Self {
        Self {
            mu0: 50.0,
            mua: None,
            sd: 28.87,
            n: None,
            alpha: 0.05,
            power: 0.80,
            sides: Sides::TwoSided,
            direction: Direction::Lower,
        }
    }
}

impl PowerQuery {
    pub fn with_alternative(mut self, mua: f64) -> Self {
        self.mua = Some(mua);
        self
    }

    pub fn with_n(mut self, n: u64) -> Self {
        self.n = Some(n);
        self
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_power(mut self, power: f64) -> Self {
        self.power = power;
        self
    }

    pub fn with_sd(mut self, sd: f64) -> Self {
        self.sd = sd;
        self
    }

    pub fn with_null(mut self, mu0: f64) -> Self {
        self.mu0 = mu0;
        self
    }

    pub fn with_sides(mut self, sides: Sides) -> Self {
        self.sides = sides;
        self
    }

    pub fn with_direction(mut self, direction: Direction) -> Self {
        self.direction = direction;
        self
    }

    fn validate(&self, needs_power: bool) -> Result<()> {
        check_level(self.alpha, self.power, needs_power)?;
        check_finite("mu0", self.mu0)?;
        check_sd(self.sd)?;
        if let Some(mua) = self.mua {
            check_finite("mua", mua)?;
        }
        Ok(())
    }

    fn require_alternative(&self) -> Result<f64> {
        self.mua
            .ok_or_else(|| Error::Validation("the alternative mean (mua) is required".into()))
    }

    fn require_n(&self) -> Result<u64> {
        self.n
            .ok_or_else(|| Error::Validation("the sample size (n) is required".into()))
    }
}

/// Result of a one-sample solve, echoing the inputs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerSolution {
    pub solved_for: SolvedFor,
    pub n: u64,
    pub achieved_power: f64,
    pub delta: f64,
    pub mua: f64,
    pub mu0: f64,
    pub sd: f64,
    pub alpha: f64,
    /// Requested power; absent when power was the unknown.
    pub requested_power: Option<f64>,
    pub sides: Sides,
    pub direction: Direction,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoSampleQuery {
    pub mu1: f64,
    pub mu2: f64,
    pub sd: f64,
    pub n1: Option<u64>,
    /// Explicit second-group size; derived as `ceil(ratio * n1)` when absent.
    pub n2: Option<u64>,
    /// n2 / n1.
    pub ratio: f64,
    pub alpha: f64,
    pub power: f64,
    pub sides: Sides,
}

impl Default for TwoSampleQuery {
    fn default() -> Self {
        Self {
            mu1: 50.0,
            mu2: 50.0,
            sd: 28.87,
            n1: None,
            n2: None,
            ratio: 1.0,
            alpha: 0.05,
            power: 0.80,
            sides: Sides::TwoSided,
        }
    }
}

impl TwoSampleQuery {
    pub fn new(mu1: f64, mu2: f64, sd: f64) -> Self {
        Self { mu1, mu2, sd, ..Self::default() }
    }

    pub fn with_sizes(mut self, n1: u64, n2: u64) -> Self {
        self.n1 = Some(n1);
        self.n2 = Some(n2);
        self
    }

    fn validate(&self, needs_power: bool) -> Result<()> {
        check_level(self.alpha, self.power, needs_power)?;
        check_finite("mu1", self.mu1)?;
        check_finite("mu2", self.mu2)?;
        check_sd(self.sd)?;
        if !(self.ratio > 0.0 && self.ratio.is_finite()) {
            return Err(domain(format!("ratio must be positive, got {}", self.ratio)));
        }
        Ok(())
    }

    fn second_size(&self, n1: u64) -> u64 {
        self.n2.unwrap_or_else(|| group_size(self.ratio, n1))
    }
}

fn group_size(ratio: f64, n1: u64) -> u64 {
    // guard against 1.0000000000000002 style rounding pushing the ceiling up
    (ratio * n1 as f64 - 1e-9).ceil().max(1.0) as u64
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoSampleSolution {
    pub solved_for: SolvedFor,
    pub n1: u64,
    pub n2: u64,
    pub achieved_power: f64,
    pub delta: f64,
    pub mu1: f64,
    pub mu2: f64,
    pub sd: f64,
    pub alpha: f64,
    pub requested_power: Option<f64>,
    pub sides: Sides,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProportionQuery {
    /// Null share; 0.10 is the expected share of top-10% papers.
    pub p0: f64,
    pub pa: f64,
    pub n: Option<u64>,
    pub alpha: f64,
    pub power: f64,
    pub sides: Sides,
}

impl Default for ProportionQuery {
    fn default() -> Self {
        Self { p0: 0.10, pa: 0.10, n: None, alpha: 0.05, power: 0.80, sides: Sides::TwoSided }
    }
}

impl ProportionQuery {
    pub fn new(p0: f64, pa: f64) -> Self {
        Self { p0, pa, ..Self::default() }
    }

    pub fn with_n(mut self, n: u64) -> Self {
        self.n = Some(n);
        self
    }

    fn validate(&self, needs_power: bool) -> Result<()> {
        check_level(self.alpha, self.power, needs_power)?;
        for (name, p) in [("p0", self.p0), ("pa", self.pa)] {
            if !(p > 0.0 && p < 1.0) {
                return Err(domain(format!("{name} must lie strictly between 0 and 1, got {p}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProportionSolution {
    pub solved_for: SolvedFor,
    pub n: u64,
    pub achieved_power: f64,
    pub p0: f64,
    pub pa: f64,
    pub alpha: f64,
    pub requested_power: Option<f64>,
    pub sides: Sides,
}

fn check_finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("{name} must be finite, got {v}")))
    }
}

fn check_sd(sd: f64) -> Result<()> {
    if sd > 0.0 && sd.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("standard deviation must be positive, got {sd}")))
    }
}

fn check_level(alpha: f64, power: f64, needs_power: bool) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(domain(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    if needs_power {
        if !(power > 0.0 && power < 1.0) {
            return Err(domain(format!("power must lie in (0, 1), got {power}")));
        }
        if power <= alpha {
            return Err(domain(format!(
                "power ({power}) must exceed alpha ({alpha}); otherwise the design is vacuous"
            )));
        }
    }
    Ok(())
}

/// Standardized effect `(mua - mu0) / sd`.
pub fn effect_size(mu0: f64, mua: f64, sd: f64) -> Result<f64> {
    check_finite("mu0", mu0)?;
    check_finite("mua", mua)?;
    check_sd(sd)?;
    Ok((mua - mu0) / sd)
}

/// Which rejection tail(s) a t or z test uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tail {
    Both,
    Lower,
    Upper,
}

/// One-sided tests reject on the side of the effect; with no effect the
/// configured direction decides.
fn tail_for(sides: Sides, effect: f64, direction: Direction) -> Tail {
    match sides {
        Sides::TwoSided => Tail::Both,
        Sides::OneSided if effect < 0.0 => Tail::Lower,
        Sides::OneSided if effect > 0.0 => Tail::Upper,
        Sides::OneSided => match direction {
            Direction::Lower => Tail::Lower,
            Direction::Upper => Tail::Upper,
        },
    }
}

/// Exact t-test power with `df` degrees of freedom and noncentrality `ncp`.
fn t_power(df: f64, ncp: f64, alpha: f64, tail: Tail) -> Result<f64> {
    if ncp.abs() > DistributionAccuracy::NONCENTRAL_T.max_ncp_supported {
        return Err(Error::Range(format!(
            "noncentrality {ncp:.3} is beyond the certified range; the design is overpowered \
             far past any requested power"
        )));
    }
    let p = match tail {
        Tail::Both => {
            let crit = student_t_quantile(1.0 - alpha / 2.0, df)?;
            (1.0 - noncentral_t_cdf(crit, df, ncp)?) + noncentral_t_cdf(-crit, df, ncp)?
        }
        Tail::Upper => {
            let crit = student_t_quantile(1.0 - alpha, df)?;
            1.0 - noncentral_t_cdf(crit, df, ncp)?
        }
        Tail::Lower => {
            let crit = student_t_quantile(1.0 - alpha, df)?;
            noncentral_t_cdf(-crit, df, ncp)?
        }
    };
    Ok(p.clamp(0.0, 1.0))
}

fn one_mean_power(delta: f64, n: u64, alpha: f64, tail: Tail) -> Result<f64> {
    if n < 2 {
        return Err(domain(format!("a one-sample t test needs n >= 2, got {n}")));
    }
    t_power((n - 1) as f64, delta * (n as f64).sqrt(), alpha, tail)
}

/// Power of the one-sample t test; needs `n` and `mua`.
pub fn power_one_mean(q: &PowerQuery) -> Result<f64> {
    q.validate(false)?;
    let mua = q.require_alternative()?;
    let n = q.require_n()?;
    let delta = effect_size(q.mu0, mua, q.sd)?;
    one_mean_power(delta, n, q.alpha, tail_for(q.sides, delta, q.direction))
}

/// Power solve packaged as a [`PowerSolution`].
pub fn solve_power_one_mean(q: &PowerQuery) -> Result<PowerSolution> {
    let achieved = power_one_mean(q)?;
    let mua = q.require_alternative()?;
    Ok(PowerSolution {
        solved_for: SolvedFor::Power,
        n: q.require_n()?,
        achieved_power: achieved,
        delta: (mua - q.mu0) / q.sd,
        mua,
        mu0: q.mu0,
        sd: q.sd,
        alpha: q.alpha,
        requested_power: None,
        sides: q.sides,
        direction: q.direction,
    })
}

fn z_sum(alpha: f64, power: f64, sides: Sides) -> f64 {
    let a = match sides {
        Sides::TwoSided => alpha / 2.0,
        Sides::OneSided => alpha,
    };
    normal_quantile_unchecked(1.0 - a) + normal_quantile_unchecked(power)
}

fn too_small_effect(delta: f64) -> Result<()> {
    if delta.abs() < MIN_DETECTABLE_DELTA {
        return Err(Error::Infeasible(format!(
            "standardized effect {delta:e} is too small; the sample size would exceed {MAX_SAMPLE_SIZE}"
        )));
    }
    Ok(())
}

/// Smallest n with one-sample t power at least the requested power.
pub fn sample_size_one_mean(q: &PowerQuery) -> Result<PowerSolution> {
    q.validate(true)?;
    let mua = q.require_alternative()?;
    let delta = effect_size(q.mu0, mua, q.sd)?;
    too_small_effect(delta)?;
    let tail = tail_for(q.sides, delta, q.direction);

    let guess = (z_sum(q.alpha, q.power, q.sides) / delta).powi(2).min(MAX_SAMPLE_SIZE as f64);
    let n = smallest_satisfying(
        |n| Ok(one_mean_power(delta, n, q.alpha, tail)? >= q.power),
        guess as u64,
        2,
        MAX_SAMPLE_SIZE,
    )?
    .ok_or_else(|| ceiling_error())?;

    Ok(PowerSolution {
        solved_for: SolvedFor::SampleSize,
        n,
        achieved_power: one_mean_power(delta, n, q.alpha, tail)?,
        delta,
        mua,
        mu0: q.mu0,
        sd: q.sd,
        alpha: q.alpha,
        requested_power: Some(q.power),
        sides: q.sides,
        direction: q.direction,
    })
}

fn ceiling_error() -> Error {
    Error::Infeasible(format!("the requested power needs more than {MAX_SAMPLE_SIZE} observations"))
}

/// Alternative mean detected with the requested power at fixed n (the minimum
/// detectable difference), on the side of the null given by `direction`.
pub fn target_mean_one_mean(q: &PowerQuery) -> Result<PowerSolution> {
    q.validate(true)?;
    let n = q.require_n()?;
    if n < 2 {
        return Err(domain(format!("a one-sample t test needs n >= 2, got {n}")));
    }
    let tail = match (q.sides, q.direction) {
        (Sides::TwoSided, _) => Tail::Both,
        (Sides::OneSided, Direction::Lower) => Tail::Lower,
        (Sides::OneSided, Direction::Upper) => Tail::Upper,
    };
    let sign = match q.direction {
        Direction::Lower => -1.0,
        Direction::Upper => 1.0,
    };
    let root_n = (n as f64).sqrt();
    // power as a function of the effect magnitude
    let power_at = |magnitude: f64| one_mean_power(sign * magnitude, n, q.alpha, tail);

    let cap = MAX_TARGET_DELTA.min(DistributionAccuracy::NONCENTRAL_T.max_ncp_supported / root_n);
    let mut hi = (2.0 * z_sum(q.alpha, q.power, q.sides) / root_n).min(cap);
    while power_at(hi)? < q.power {
        if hi >= cap {
            return Err(Error::Infeasible(format!(
                "power {} is unreachable with n = {n} at alpha = {} for effects up to {cap:.3} sd",
                q.power, q.alpha
            )));
        }
        hi = (2.0 * hi).min(cap);
    }
    let magnitude = solve_increasing(
        |d| Ok(power_at(d)? - q.power),
        0.0,
        hi,
        1e-13,
        TARGET_POWER_TOLERANCE * 1e-3,
    )?;

    let mua = q.mu0 + sign * magnitude * q.sd;
    Ok(PowerSolution {
        solved_for: SolvedFor::TargetMean,
        n,
        achieved_power: power_at(magnitude)?,
        delta: (mua - q.mu0) / q.sd,
        mua,
        mu0: q.mu0,
        sd: q.sd,
        alpha: q.alpha,
        requested_power: Some(q.power),
        sides: q.sides,
        direction: q.direction,
    })
}

fn two_means_power(q: &TwoSampleQuery, n1: u64, n2: u64) -> Result<f64> {
    if n1 < 2 || n2 < 2 {
        return Err(domain(format!("each group needs at least 2 observations, got {n1} and {n2}")));
    }
    let se = q.sd * (1.0 / n1 as f64 + 1.0 / n2 as f64).sqrt();
    let ncp = (q.mu2 - q.mu1) / se;
    let tail = tail_for(q.sides, q.mu2 - q.mu1, Direction::Upper);
    t_power((n1 + n2 - 2) as f64, ncp, q.alpha, tail)
}

/// Pooled-variance two-sample t power; needs `n1` (and `n2` or `ratio`).
pub fn power_two_means(q: &TwoSampleQuery) -> Result<f64> {
    q.validate(false)?;
    let n1 = q
        .n1
        .ok_or_else(|| Error::Validation("the first group size (n1) is required".into()))?;
    two_means_power(q, n1, q.second_size(n1))
}

pub fn solve_power_two_means(q: &TwoSampleQuery) -> Result<TwoSampleSolution> {
    let achieved = power_two_means(q)?;
    let n1 = q.n1.unwrap_or_default();
    Ok(TwoSampleSolution {
        solved_for: SolvedFor::Power,
        n1,
        n2: q.second_size(n1),
        achieved_power: achieved,
        delta: (q.mu2 - q.mu1) / q.sd,
        mu1: q.mu1,
        mu2: q.mu2,
        sd: q.sd,
        alpha: q.alpha,
        requested_power: None,
        sides: q.sides,
    })
}

/// Smallest n1 (with `n2 = ceil(ratio * n1)`) reaching the requested power.
pub fn sample_size_two_means(q: &TwoSampleQuery) -> Result<TwoSampleSolution> {
    q.validate(true)?;
    let delta = effect_size(q.mu1, q.mu2, q.sd)?;
    too_small_effect(delta)?;
    let ratio = q.ratio;
    let mut floor = 2;
    while group_size(ratio, floor) < 2 {
        floor += 1;
    }
    let guess = (z_sum(q.alpha, q.power, q.sides) / delta).powi(2) * (1.0 + 1.0 / ratio);
    let n1 = smallest_satisfying(
        |n1| Ok(two_means_power(q, n1, group_size(ratio, n1))? >= q.power),
        guess.min(MAX_SAMPLE_SIZE as f64) as u64,
        floor,
        MAX_SAMPLE_SIZE,
    )?
    .ok_or_else(|| ceiling_error())?;
    let n2 = group_size(ratio, n1);
    Ok(TwoSampleSolution {
        solved_for: SolvedFor::SampleSize,
        n1,
        n2,
        achieved_power: two_means_power(q, n1, n2)?,
        delta,
        mu1: q.mu1,
        mu2: q.mu2,
        sd: q.sd,
        alpha: q.alpha,
        requested_power: Some(q.power),
        sides: q.sides,
    })
}

fn proportion_power(p0: f64, pa: f64, n: u64, alpha: f64, sides: Sides) -> Result<f64> {
    if n < 1 {
        return Err(domain("a proportion test needs n >= 1"));
    }
    let nf = n as f64;
    let s0 = (p0 * (1.0 - p0) / nf).sqrt();
    let sa = (pa * (1.0 - pa) / nf).sqrt();
    let d = pa - p0;
    let p = match tail_for(sides, d, Direction::Upper) {
        Tail::Both => {
            let z = normal_quantile_unchecked(1.0 - alpha / 2.0);
            phi((d - z * s0) / sa) + phi((-d - z * s0) / sa)
        }
        Tail::Upper => phi((d - normal_quantile_unchecked(1.0 - alpha) * s0) / sa),
        Tail::Lower => phi((-d - normal_quantile_unchecked(1.0 - alpha) * s0) / sa),
    };
    Ok(p.clamp(0.0, 1.0))
}

/// Score-test power for H0: p = p0 when the true share is `pa`.
pub fn power_one_proportion(q: &ProportionQuery) -> Result<f64> {
    q.validate(false)?;
    let n = q.n.ok_or_else(|| Error::Validation("the sample size (n) is required".into()))?;
    proportion_power(q.p0, q.pa, n, q.alpha, q.sides)
}

pub fn solve_power_one_proportion(q: &ProportionQuery) -> Result<ProportionSolution> {
    let achieved = power_one_proportion(q)?;
    Ok(ProportionSolution {
        solved_for: SolvedFor::Power,
        n: q.n.unwrap_or_default(),
        achieved_power: achieved,
        p0: q.p0,
        pa: q.pa,
        alpha: q.alpha,
        requested_power: None,
        sides: q.sides,
    })
}

/// Smallest n at which the score test reaches the requested power.
pub fn sample_size_one_proportion(q: &ProportionQuery) -> Result<ProportionSolution> {
    q.validate(true)?;
    if q.pa == q.p0 {
        return Err(domain("pa must differ from p0 to solve for a sample size"));
    }
    let a = match q.sides {
        Sides::TwoSided => q.alpha / 2.0,
        Sides::OneSided => q.alpha,
    };
    let za = normal_quantile_unchecked(1.0 - a);
    let zb = normal_quantile_unchecked(q.power);
    let closed = ((za * (q.p0 * (1.0 - q.p0)).sqrt() + zb * (q.pa * (1.0 - q.pa)).sqrt())
        / (q.pa - q.p0))
        .powi(2);
    let n = smallest_satisfying(
        |n| Ok(proportion_power(q.p0, q.pa, n, q.alpha, q.sides)? >= q.power),
        closed.min(MAX_SAMPLE_SIZE as f64) as u64,
        1,
        MAX_SAMPLE_SIZE,
    )?
    .ok_or_else(|| ceiling_error())?;
    Ok(ProportionSolution {
        solved_for: SolvedFor::SampleSize,
        n,
        achieved_power: proportion_power(q.p0, q.pa, n, q.alpha, q.sides)?,
        p0: q.p0,
        pa: q.pa,
        alpha: q.alpha,
        requested_power: Some(q.power),
        sides: q.sides,
    })
}
