//! Classical tests on percentile data: one- and two-sample t tests and the
//! one-proportion score test.
//!
//! Confidence intervals are always two-sided at the requested level, whatever
//! the alternative used for the p-value.

use serde::{Deserialize, Serialize};

use crate::distributions::{normal_quantile_unchecked, phi, student_t_cdf, student_t_quantile};
use crate::error::{domain, Error, Result};
use crate::power::{Direction, Sides};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Alternative {
    #[default]
    TwoSided,
    /// True value below the null.
    Less,
    /// True value above the null.
    Greater,
}

impl Alternative {
    pub fn from_sides(sides: Sides, direction: Direction) -> Self {
        match (sides, direction) {
            (Sides::TwoSided, _) => Alternative::TwoSided,
            (Sides::OneSided, Direction::Lower) => Alternative::Less,
            (Sides::OneSided, Direction::Upper) => Alternative::Greater,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceInterval {
    pub lower: f64,
    pub upper: f64,
    pub level: f64,
}

impl ConfidenceInterval {
    pub fn contains(&self, v: f64) -> bool {
        self.lower <= v && v <= self.upper
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub statistic: f64,
    pub df: Option<f64>,
    pub p_value: f64,
    pub ci: ConfidenceInterval,
    pub estimate: f64,
    pub effect_size: Option<f64>,
    pub alternative: Alternative,
}

fn check_level(level: f64) -> Result<()> {
    if level > 0.0 && level < 1.0 {
        Ok(())
    } else {
        Err(domain(format!("confidence level must lie in (0, 1), got {level}")))
    }
}

fn check_sample(name: &str, sample: &[f64]) -> Result<()> {
    if sample.len() < 2 {
        return Err(domain(format!("{name} needs at least 2 observations, got {}", sample.len())));
    }
    if let Some(bad) = sample.iter().find(|v| !v.is_finite()) {
        return Err(domain(format!("{name} contains a non-finite value {bad}")));
    }
    Ok(())
}

pub(crate) fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sum of squared deviations from the mean (two-pass).
fn centered_ss(xs: &[f64], m: f64) -> f64 {
    xs.iter().map(|x| (x - m) * (x - m)).sum()
}

pub(crate) fn sample_sd(xs: &[f64]) -> f64 {
    let m = mean(xs);
    (centered_ss(xs, m) / (xs.len() - 1) as f64).sqrt()
}

fn t_p_value(t: f64, df: f64, alternative: Alternative) -> Result<f64> {
    let p = match alternative {
        Alternative::TwoSided => 2.0 * student_t_cdf(-t.abs(), df)?,
        Alternative::Less => student_t_cdf(t, df)?,
        Alternative::Greater => student_t_cdf(-t, df)?,
    };
    Ok(p.min(1.0))
}

fn z_p_value(z: f64, alternative: Alternative) -> f64 {
    let p = match alternative {
        Alternative::TwoSided => 2.0 * phi(-z.abs()),
        Alternative::Less => phi(z),
        Alternative::Greater => phi(-z),
    };
    p.min(1.0)
}

/// One-sample t test of H0: mean = `mu0`.
pub fn one_sample_t(sample: &[f64], mu0: f64, alternative: Alternative, level: f64) -> Result<TestResult> {
    check_sample("sample", sample)?;
    check_level(level)?;
    let n = sample.len() as f64;
    let m = mean(sample);
    let sd = sample_sd(sample);
    if sd == 0.0 {
        return Err(Error::DegenerateSample { value: m });
    }
    let se = sd / n.sqrt();
    let df = n - 1.0;
    let t = (m - mu0) / se;
    let q = student_t_quantile(0.5 + level / 2.0, df)?;
    Ok(TestResult {
        statistic: t,
        df: Some(df),
        p_value: t_p_value(t, df, alternative)?,
        ci: ConfidenceInterval { lower: m - q * se, upper: m + q * se, level },
        estimate: m,
        effect_size: Some((m - mu0) / sd),
        alternative,
    })
}

/// Pooled-variance two-sample t test of H0: mean(a) = mean(b). The estimate
/// and interval refer to `mean(a) - mean(b)`.
pub fn two_sample_t(a: &[f64], b: &[f64], alternative: Alternative, level: f64) -> Result<TestResult> {
    check_sample("first sample", a)?;
    check_sample("second sample", b)?;
    check_level(level)?;
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (ma, mb) = (mean(a), mean(b));
    let df = na + nb - 2.0;
    let pooled = ((centered_ss(a, ma) + centered_ss(b, mb)) / df).sqrt();
    if pooled == 0.0 {
        if ma == mb {
            return Err(Error::DegenerateSample { value: ma });
        }
        return Err(domain(format!(
            "both samples are constant ({ma} and {mb}); the t statistic is unbounded"
        )));
    }
    let se = pooled * (1.0 / na + 1.0 / nb).sqrt();
    let diff = ma - mb;
    let t = diff / se;
    let q = student_t_quantile(0.5 + level / 2.0, df)?;
    Ok(TestResult {
        statistic: t,
        df: Some(df),
        p_value: t_p_value(t, df, alternative)?,
        ci: ConfidenceInterval { lower: diff - q * se, upper: diff + q * se, level },
        estimate: diff,
        effect_size: Some(diff / pooled),
        alternative,
    })
}

/// Score test of H0: p = `p0`, with the Wilson score interval.
pub fn one_proportion_test(
    successes: u64,
    n: u64,
    p0: f64,
    alternative: Alternative,
    level: f64,
) -> Result<TestResult> {
    if n == 0 {
        return Err(domain("a proportion test needs n >= 1"));
    }
    if successes > n {
        return Err(domain(format!("successes ({successes}) exceed trials ({n})")));
    }
    if !(p0 > 0.0 && p0 < 1.0) {
        return Err(domain(format!("p0 must lie strictly between 0 and 1, got {p0}")));
    }
    check_level(level)?;
    let nf = n as f64;
    let phat = successes as f64 / nf;
    let null_sd = (p0 * (1.0 - p0)).sqrt();
    let z = (phat - p0) / (null_sd / nf.sqrt());

    let zc = normal_quantile_unchecked(0.5 + level / 2.0);
    let z2n = zc * zc / nf;
    let centre = (phat + z2n / 2.0) / (1.0 + z2n);
    let half = zc / (1.0 + z2n) * (phat * (1.0 - phat) / nf + z2n / (4.0 * nf)).sqrt();
    Ok(TestResult {
        statistic: z,
        df: None,
        p_value: z_p_value(z, alternative),
        ci: ConfidenceInterval {
            lower: (centre - half).max(0.0),
            upper: (centre + half).min(1.0),
            level,
        },
        estimate: phat,
        effect_size: Some((phat - p0) / null_sd),
        alternative,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_computed_one_sample() {
        let r = one_sample_t(&[44.0, 46.0, 48.0, 50.0, 52.0], 50.0, Alternative::TwoSided, 0.95).unwrap();
        assert!((r.estimate - 48.0).abs() < 1e-12);
        assert!((r.statistic + 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(r.df, Some(4.0));
        // two-sided p for t = -√2 on 4 df; CDF of t_4 is closed form
        let t: f64 = 2f64.sqrt();
        let cdf4 = 0.5 + t * (t * t + 6.0) / (2.0 * (t * t + 4.0).powf(1.5));
        assert!((r.p_value - 2.0 * (1.0 - cdf4)).abs() < 1e-12);
        // 97.5% quantile of t_4
        let half = 2.776_445_105_197_799 * 2f64.sqrt();
        assert!((r.ci.lower - (48.0 - half)).abs() < 1e-9);
        assert!((r.ci.upper - (48.0 + half)).abs() < 1e-9);
        assert!((r.effect_size.unwrap() + 2.0 / 10f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn mean_at_null() {
        let r = one_sample_t(&[40.0, 50.0, 60.0], 50.0, Alternative::TwoSided, 0.95).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.p_value, 1.0);
    }

    #[test]
    fn degenerate_samples() {
        assert_eq!(
            one_sample_t(&[7.0; 5], 50.0, Alternative::TwoSided, 0.95),
            Err(Error::DegenerateSample { value: 7.0 })
        );
        assert!(matches!(
            two_sample_t(&[3.0; 4], &[3.0; 6], Alternative::TwoSided, 0.95),
            Err(Error::DegenerateSample { .. })
        ));
        assert!(one_sample_t(&[1.0], 0.0, Alternative::TwoSided, 0.95).is_err());
    }

    #[test]
    fn two_sample_identical_and_swapped() {
        let a = [10.0, 22.0, 35.0, 41.0, 58.0];
        let b = [12.0, 30.0, 49.0, 66.0, 70.0, 81.0];
        let same = two_sample_t(&a, &a, Alternative::TwoSided, 0.95).unwrap();
        assert_eq!(same.statistic, 0.0);
        assert_eq!(same.p_value, 1.0);
        let ab = two_sample_t(&a, &b, Alternative::TwoSided, 0.95).unwrap();
        let ba = two_sample_t(&b, &a, Alternative::TwoSided, 0.95).unwrap();
        assert!((ab.statistic + ba.statistic).abs() < 1e-12);
        assert!((ab.p_value - ba.p_value).abs() < 1e-12);
        assert_eq!(ab.df, Some(9.0));
    }

    #[test]
    fn proportion_at_null() {
        let r = one_proportion_test(20, 200, 0.10, Alternative::TwoSided, 0.95).unwrap();
        assert!(r.statistic.abs() < 1e-12);
        assert!((r.p_value - 1.0).abs() < 1e-12);
        assert!(r.ci.contains(0.10));
        assert!(one_proportion_test(20, 10, 0.1, Alternative::TwoSided, 0.95).is_err());
        assert!(one_proportion_test(2, 10, 1.0, Alternative::TwoSided, 0.95).is_err());
    }

    #[test]
    fn one_sided_p_values_split_two_sided() {
        let s = [41.0, 45.5, 38.0, 52.0, 47.0, 44.0, 39.5];
        let two = one_sample_t(&s, 50.0, Alternative::TwoSided, 0.95).unwrap();
        let less = one_sample_t(&s, 50.0, Alternative::Less, 0.95).unwrap();
        let greater = one_sample_t(&s, 50.0, Alternative::Greater, 0.95).unwrap();
        assert!((less.p_value * 2.0 - two.p_value).abs() < 1e-12);
        assert!((less.p_value + greater.p_value - 1.0).abs() < 1e-12);
    }
}
