//! Bootstrap inference for means and Monte Carlo power simulation.
//!
//! Replicate `r` always draws from its own ChaCha8 stream derived from
//! `(seed, r)`, so results are bit-identical regardless of thread count or
//! scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distributions::{normal_quantile_unchecked, phi, student_t_quantile};
use crate::error::{domain, Error, Result};
use crate::inference::{mean, ConfidenceInterval};
use crate::power::{Direction, PowerQuery, Sides, TwoSampleQuery};

pub const DEFAULT_SEED: u64 = 2015;
pub const MIN_REPLICATES: usize = 100;
pub const MIN_BOOTSTRAP_SAMPLE: usize = 10;
pub const MIN_SIMULATION_REPS: usize = 1000;

/// Independent generator for replicate `r` of a run seeded with `seed`.
pub fn replicate_rng(seed: u64, r: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(r);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CiMethod {
    #[default]
    Percentile,
    NormalApprox,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BootstrapConfig {
    pub replicates: usize,
    pub seed: u64,
    pub ci_method: CiMethod,
    pub level: f64,
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        Self { replicates: 2000, seed: DEFAULT_SEED, ci_method: CiMethod::Percentile, level: 0.95 }
    }
}

impl BootstrapConfig {
    fn validate(&self) -> Result<()> {
        if self.replicates < MIN_REPLICATES {
            return Err(Error::Config(format!(
                "at least {MIN_REPLICATES} bootstrap replicates are required, got {}",
                self.replicates
            )));
        }
        if !(self.level > 0.0 && self.level < 1.0) {
            return Err(Error::Config(format!("level must lie in (0, 1), got {}", self.level)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BootstrapResult {
    pub point_estimate: f64,
    pub std_error: f64,
    pub ci: ConfidenceInterval,
    /// Two-sided p-value for H0: mean = mu0, clamped to `[2/B, 1]`.
    pub p_value_vs_mu0: f64,
    pub mu0: f64,
    pub replicates: usize,
    pub seed: u64,
    pub ci_method: CiMethod,
}

/// Type-7 (linear interpolation) quantile of sorted data.
fn sorted_quantile(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

fn replicate_means(sample: &[f64], replicates: usize, seed: u64) -> Vec<f64> {
    let n = sample.len();
    (0..replicates as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = replicate_rng(seed, r);
            let total: f64 = (0..n).map(|_| sample[rng.random_range(0..n)]).sum();
            total / n as f64
        })
        .collect()
}

/// Nonparametric bootstrap of the sample mean.
///
/// The percentile p-value recentres the resampled means on `mu0` and counts
/// how often they land at least as far out as the observed mean on its side,
/// doubled for a two-sided test.
pub fn bootstrap_mean(sample: &[f64], mu0: f64, cfg: &BootstrapConfig) -> Result<BootstrapResult> {
    cfg.validate()?;
    if sample.len() < MIN_BOOTSTRAP_SAMPLE {
        return Err(domain(format!(
            "bootstrap needs at least {MIN_BOOTSTRAP_SAMPLE} observations, got {}",
            sample.len()
        )));
    }
    if let Some(bad) = sample.iter().find(|v| !v.is_finite()) {
        return Err(domain(format!("sample contains a non-finite value {bad}")));
    }
    if !mu0.is_finite() {
        return Err(domain("mu0 must be finite"));
    }

    let b = cfg.replicates;
    let estimate = mean(sample);
    let mut means = replicate_means(sample, b, cfg.seed);
    let centre = mean(&means);
    let se = (means.iter().map(|m| (m - centre) * (m - centre)).sum::<f64>() / (b - 1) as f64).sqrt();

    let floor = 2.0 / b as f64;
    let distance = estimate - mu0;
    let (ci, p) = match cfg.ci_method {
        CiMethod::Percentile => {
            let p = if distance == 0.0 {
                1.0
            } else {
                let side = distance.signum();
                let hits = means.iter().filter(|&&m| side * (m - estimate) >= distance.abs()).count();
                2.0 * hits as f64 / b as f64
            };
            means.sort_by(f64::total_cmp);
            let tail = (1.0 - cfg.level) / 2.0;
            let ci = ConfidenceInterval {
                lower: sorted_quantile(&means, tail),
                upper: sorted_quantile(&means, 1.0 - tail),
                level: cfg.level,
            };
            (ci, p)
        }
        CiMethod::NormalApprox => {
            let z = normal_quantile_unchecked(0.5 + cfg.level / 2.0);
            let ci = ConfidenceInterval { lower: estimate - z * se, upper: estimate + z * se, level: cfg.level };
            let p = if distance == 0.0 {
                1.0
            } else if se == 0.0 {
                0.0
            } else {
                2.0 * phi(-distance.abs() / se)
            };
            (ci, p)
        }
    };

    Ok(BootstrapResult {
        point_estimate: estimate,
        std_error: se,
        ci,
        p_value_vs_mu0: p.clamp(floor, 1.0),
        mu0,
        replicates: b,
        seed: cfg.seed,
        ci_method: cfg.ci_method,
    })
}

/// Bootstrap of a share, e.g. the top-10% share of an institution's papers.
pub fn bootstrap_proportion(hits: &[bool], p0: f64, cfg: &BootstrapConfig) -> Result<BootstrapResult> {
    let as_f64: Vec<f64> = hits.iter().map(|&h| if h { 1.0 } else { 0.0 }).collect();
    bootstrap_mean(&as_f64, p0, cfg)
}

/// Distribution that synthetic observations are drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Population {
    /// Continuous uniform with the design's mean and sd (support mean ± sd√3).
    #[default]
    Uniform,
    Normal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimulationDesign {
    OneMean(PowerQuery),
    TwoMeans(TwoSampleQuery),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub reps: usize,
    pub seed: u64,
    pub population: Population,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self { reps: 10_000, seed: DEFAULT_SEED, population: Population::Uniform }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationResult {
    pub empirical_power: f64,
    pub mc_std_error: f64,
    pub reps: usize,
    pub seed: u64,
    pub population: Population,
    pub warnings: Vec<String>,
}

#[derive(Clone, Copy)]
struct Group {
    mean: f64,
    sd: f64,
    n: usize,
}

impl Group {
    fn draw_mean_and_ss(&self, population: Population, rng: &mut ChaCha8Rng) -> (f64, f64) {
        let half_width = self.sd * 3f64.sqrt();
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for _ in 0..self.n {
            let dev = match population {
                Population::Uniform => half_width * (2.0 * rng.random::<f64>() - 1.0),
                Population::Normal => self.sd * rng.sample::<f64, _>(StandardNormal),
            };
            sum += dev;
            sum_sq += dev * dev;
        }
        let nf = self.n as f64;
        let dev_mean = sum / nf;
        (self.mean + dev_mean, sum_sq - nf * dev_mean * dev_mean)
    }

    fn support_warning(&self, population: Population, label: &str) -> Option<String> {
        let half_width = self.sd * 3f64.sqrt();
        match population {
            Population::Uniform if self.mean - half_width < 0.0 || self.mean + half_width > 100.0 => {
                Some(format!(
                    "{label} population support [{:.3}, {:.3}] extends outside the percentile range [0, 100]",
                    self.mean - half_width,
                    self.mean + half_width
                ))
            }
            Population::Normal => Some(format!(
                "{label} normal population is unbounded and extends outside [0, 100]"
            )),
            _ => None,
        }
    }
}

#[derive(Clone, Copy)]
enum Rejection {
    Both(f64),
    Below(f64),
    Above(f64),
}

impl Rejection {
    fn new(sides: Sides, effect: f64, direction: Direction, alpha: f64, df: f64) -> Result<Self> {
        Ok(match sides {
            Sides::TwoSided => Rejection::Both(student_t_quantile(1.0 - alpha / 2.0, df)?),
            Sides::OneSided => {
                let crit = student_t_quantile(1.0 - alpha, df)?;
                let lower = effect < 0.0 || (effect == 0.0 && direction == Direction::Lower);
                if lower {
                    Rejection::Below(-crit)
                } else {
                    Rejection::Above(crit)
                }
            }
        })
    }

    fn rejects(self, t: f64) -> bool {
        match self {
            Rejection::Both(c) => t.abs() > c,
            Rejection::Below(c) => t < c,
            Rejection::Above(c) => t > c,
        }
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(domain(format!("alpha must lie in (0, 1), got {alpha}")))
    }
}

/// Empirical rejection rate of the t test over `cfg.reps` synthetic studies.
pub fn simulate_power(design: &SimulationDesign, cfg: &SimulationConfig) -> Result<SimulationResult> {
    if cfg.reps < MIN_SIMULATION_REPS {
        return Err(Error::Config(format!(
            "at least {MIN_SIMULATION_REPS} simulation replications are required, got {}",
            cfg.reps
        )));
    }
    let mut warnings = Vec::new();
    let population = cfg.population;

    let rejections: usize = match *design {
        SimulationDesign::OneMean(q) => {
            check_alpha(q.alpha)?;
            let mua = q.mua.ok_or_else(|| Error::Validation("simulation needs the alternative mean".into()))?;
            let n = q.n.ok_or_else(|| Error::Validation("simulation needs the sample size".into()))?;
            if n < 2 {
                return Err(domain(format!("a one-sample t test needs n >= 2, got {n}")));
            }
            if !(q.sd > 0.0 && q.sd.is_finite()) {
                return Err(domain(format!("standard deviation must be positive, got {}", q.sd)));
            }
            let group = Group { mean: mua, sd: q.sd, n: n as usize };
            warnings.extend(group.support_warning(population, "sampled"));
            let rule = Rejection::new(q.sides, mua - q.mu0, q.direction, q.alpha, (n - 1) as f64)?;
            let nf = n as f64;
            (0..cfg.reps as u64)
                .into_par_iter()
                .filter(|&r| {
                    let mut rng = replicate_rng(cfg.seed, r);
                    let (m, ss) = group.draw_mean_and_ss(population, &mut rng);
                    let se = (ss / (nf - 1.0) / nf).sqrt();
                    rule.rejects((m - q.mu0) / se)
                })
                .count()
        }
        SimulationDesign::TwoMeans(q) => {
            check_alpha(q.alpha)?;
            let n1 = q.n1.ok_or_else(|| Error::Validation("simulation needs n1".into()))?;
            let n2 = q.n2.unwrap_or_else(|| (q.ratio * n1 as f64 - 1e-9).ceil() as u64);
            if n1 < 2 || n2 < 2 {
                return Err(domain(format!("each group needs at least 2 observations, got {n1} and {n2}")));
            }
            if !(q.sd > 0.0 && q.sd.is_finite()) {
                return Err(domain(format!("standard deviation must be positive, got {}", q.sd)));
            }
            let g1 = Group { mean: q.mu1, sd: q.sd, n: n1 as usize };
            let g2 = Group { mean: q.mu2, sd: q.sd, n: n2 as usize };
            warnings.extend(g1.support_warning(population, "first"));
            warnings.extend(g2.support_warning(population, "second"));
            let df = (n1 + n2 - 2) as f64;
            let rule = Rejection::new(q.sides, q.mu2 - q.mu1, Direction::Upper, q.alpha, df)?;
            let scale = (1.0 / n1 as f64 + 1.0 / n2 as f64).sqrt();
            (0..cfg.reps as u64)
                .into_par_iter()
                .filter(|&r| {
                    let mut rng = replicate_rng(cfg.seed, r);
                    let (m1, ss1) = g1.draw_mean_and_ss(population, &mut rng);
                    let (m2, ss2) = g2.draw_mean_and_ss(population, &mut rng);
                    let pooled = ((ss1 + ss2) / df).sqrt();
                    rule.rejects((m2 - m1) / (pooled * scale))
                })
                .count()
        }
    };

    let p = rejections as f64 / cfg.reps as f64;
    Ok(SimulationResult {
        empirical_power: p,
        mc_std_error: (p * (1.0 - p) / cfg.reps as f64).sqrt(),
        reps: cfg.reps,
        seed: cfg.seed,
        population,
        warnings,
    })
}
