use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use bibliopower::error::Error;
use bibliopower::inference::{self, Alternative};
use bibliopower::percentile::{self, PublicationRecord, ReferenceKey, ReferenceSet};
use bibliopower::power::{self, Direction, PowerQuery, ProportionQuery, Sides, TwoSampleQuery};
use bibliopower::resampling::{self, BootstrapConfig, CiMethod, Population, SimulationConfig, SimulationDesign};
use bibliopower::{cli, distributions};

fn to_py(e: Error) -> PyErr {
    if e.is_validation() {
        PyValueError::new_err(e.to_string())
    } else {
        PyRuntimeError::new_err(e.to_string())
    }
}

fn sides(s: &str) -> PyResult<Sides> {
    match s {
        "two_sided" | "two" => Ok(Sides::TwoSided),
        "one_sided" | "one" => Ok(Sides::OneSided),
        _ => Err(PyValueError::new_err(format!("sides must be 'two_sided' or 'one_sided', got {s:?}"))),
    }
}

fn direction(s: &str) -> PyResult<Direction> {
    match s {
        "lower" => Ok(Direction::Lower),
        "upper" => Ok(Direction::Upper),
        _ => Err(PyValueError::new_err(format!("direction must be 'lower' or 'upper', got {s:?}"))),
    }
}

fn alternative(s: &str) -> PyResult<Alternative> {
    match s {
        "two_sided" => Ok(Alternative::TwoSided),
        "less" => Ok(Alternative::Less),
        "greater" => Ok(Alternative::Greater),
        _ => Err(PyValueError::new_err(format!(
            "alternative must be 'two_sided', 'less' or 'greater', got {s:?}"
        ))),
    }
}

fn sides_name(s: Sides) -> String {
    match s {
        Sides::TwoSided => "two_sided".into(),
        Sides::OneSided => "one_sided".into(),
    }
}

/// Result of a one-sample planning solve.
#[pyclass(frozen, get_all, skip_from_py_object, module = "bibliopower_py")]
#[derive(Debug, Clone)]
struct PowerSolution {
    solved_for: String,
    n: u64,
    achieved_power: f64,
    delta: f64,
    mua: f64,
    mu0: f64,
    sd: f64,
    alpha: f64,
    requested_power: Option<f64>,
    sides: String,
}

impl From<power::PowerSolution> for PowerSolution {
    fn from(s: power::PowerSolution) -> Self {
        Self {
            solved_for: format!("{:?}", s.solved_for).to_lowercase(),
            n: s.n,
            achieved_power: s.achieved_power,
            delta: s.delta,
            mua: s.mua,
            mu0: s.mu0,
            sd: s.sd,
            alpha: s.alpha,
            requested_power: s.requested_power,
            sides: sides_name(s.sides),
        }
    }
}

#[pymethods]
impl PowerSolution {
    fn __repr__(&self) -> String {
        format!(
            "PowerSolution(n={}, achieved_power={:.6}, delta={:.6}, mua={:.6}, alpha={})",
            self.n, self.achieved_power, self.delta, self.mua, self.alpha
        )
    }
}

#[pyclass(frozen, get_all, skip_from_py_object, module = "bibliopower_py")]
#[derive(Debug, Clone)]
struct TwoSampleSolution {
    n1: u64,
    n2: u64,
    achieved_power: f64,
    delta: f64,
    mu1: f64,
    mu2: f64,
    sd: f64,
    alpha: f64,
}

#[pymethods]
impl TwoSampleSolution {
    fn __repr__(&self) -> String {
        format!("TwoSampleSolution(n1={}, n2={}, achieved_power={:.6})", self.n1, self.n2, self.achieved_power)
    }
}

#[pyclass(frozen, get_all, skip_from_py_object, module = "bibliopower_py")]
#[derive(Debug, Clone)]
struct ProportionSolution {
    n: u64,
    achieved_power: f64,
    p0: f64,
    pa: f64,
    alpha: f64,
}

#[pymethods]
impl ProportionSolution {
    fn __repr__(&self) -> String {
        format!("ProportionSolution(n={}, achieved_power={:.6})", self.n, self.achieved_power)
    }
}

#[pyclass(frozen, get_all, skip_from_py_object, module = "bibliopower_py")]
#[derive(Debug, Clone)]
struct TestResult {
    statistic: f64,
    df: Option<f64>,
    p_value: f64,
    ci_lower: f64,
    ci_upper: f64,
    level: f64,
    estimate: f64,
    effect_size: Option<f64>,
}

impl From<inference::TestResult> for TestResult {
    fn from(r: inference::TestResult) -> Self {
        Self {
            statistic: r.statistic,
            df: r.df,
            p_value: r.p_value,
            ci_lower: r.ci.lower,
            ci_upper: r.ci.upper,
            level: r.ci.level,
            estimate: r.estimate,
            effect_size: r.effect_size,
        }
    }
}

#[pymethods]
impl TestResult {
    fn __repr__(&self) -> String {
        format!(
            "TestResult(statistic={:.6}, p_value={:.6}, ci=({:.6}, {:.6}))",
            self.statistic, self.p_value, self.ci_lower, self.ci_upper
        )
    }
}

#[pyclass(frozen, get_all, skip_from_py_object, module = "bibliopower_py")]
#[derive(Debug, Clone)]
struct BootstrapResult {
    point_estimate: f64,
    std_error: f64,
    ci_lower: f64,
    ci_upper: f64,
    p_value_vs_mu0: f64,
    replicates: usize,
    seed: u64,
}

#[pymethods]
impl BootstrapResult {
    fn __repr__(&self) -> String {
        format!(
            "BootstrapResult(point_estimate={:.6}, std_error={:.6}, ci=({:.6}, {:.6}), p_value_vs_mu0={:.6})",
            self.point_estimate, self.std_error, self.ci_lower, self.ci_upper, self.p_value_vs_mu0
        )
    }
}

#[pyclass(frozen, get_all, skip_from_py_object, module = "bibliopower_py")]
#[derive(Debug, Clone)]
struct SimulationResult {
    empirical_power: f64,
    mc_std_error: f64,
    reps: usize,
    seed: u64,
    warnings: Vec<String>,
}

#[pymethods]
impl SimulationResult {
    fn __repr__(&self) -> String {
        format!(
            "SimulationResult(empirical_power={:.6}, mc_std_error={:.6}, reps={})",
            self.empirical_power, self.mc_std_error, self.reps
        )
    }
}

#[pyclass(frozen, get_all, skip_from_py_object, module = "bibliopower_py")]
#[derive(Debug, Clone)]
struct PercentileScore {
    paper_id: String,
    inverted_percentile: f64,
    subject: String,
    pub_year: i32,
}

#[pymethods]
impl PercentileScore {
    fn __repr__(&self) -> String {
        format!(
            "PercentileScore(paper_id={:?}, inverted_percentile={}, reference_set='{}/{}')",
            self.paper_id, self.inverted_percentile, self.subject, self.pub_year
        )
    }
}

#[pyfunction]
fn normal_cdf(x: f64) -> PyResult<f64> {
    distributions::normal_cdf(x).map_err(to_py)
}

#[pyfunction]
fn normal_quantile(p: f64) -> PyResult<f64> {
    distributions::normal_quantile(p).map_err(to_py)
}

#[pyfunction]
fn student_t_cdf(x: f64, df: f64) -> PyResult<f64> {
    distributions::student_t_cdf(x, df).map_err(to_py)
}

#[pyfunction]
fn student_t_quantile(p: f64, df: f64) -> PyResult<f64> {
    distributions::student_t_quantile(p, df).map_err(to_py)
}

#[pyfunction]
fn noncentral_t_cdf(x: f64, df: f64, ncp: f64) -> PyResult<f64> {
    distributions::noncentral_t_cdf(x, df, ncp).map_err(to_py)
}

#[allow(clippy::too_many_arguments)]
fn one_mean_query(
    mu0: f64,
    mua: Option<f64>,
    sd: f64,
    n: Option<u64>,
    alpha: f64,
    power: f64,
    sides_: &str,
    direction_: &str,
) -> PyResult<PowerQuery> {
    let mut q = PowerQuery::default()
        .with_null(mu0)
        .with_sd(sd)
        .with_alpha(alpha)
        .with_power(power)
        .with_sides(sides(sides_)?)
        .with_direction(direction(direction_)?);
    q.mua = mua;
    q.n = n;
    Ok(q)
}

/// Power of the one-sample t test.
#[pyfunction]
#[pyo3(signature = (mua, n, mu0=50.0, sd=28.87, alpha=0.05, sides="two_sided", direction="lower"))]
fn power_one_mean(mua: f64, n: u64, mu0: f64, sd: f64, alpha: f64, sides: &str, direction: &str) -> PyResult<f64> {
    let q = one_mean_query(mu0, Some(mua), sd, Some(n), alpha, 0.8, sides, direction)?;
    power::power_one_mean(&q).map_err(to_py)
}

/// Smallest n whose one-sample t power reaches `power`.
#[pyfunction]
#[pyo3(signature = (mua, mu0=50.0, sd=28.87, alpha=0.05, power=0.8, sides="two_sided", direction="lower"))]
fn sample_size_one_mean(
    mua: f64,
    mu0: f64,
    sd: f64,
    alpha: f64,
    power: f64,
    sides: &str,
    direction: &str,
) -> PyResult<PowerSolution> {
    let q = one_mean_query(mu0, Some(mua), sd, None, alpha, power, sides, direction)?;
    power::sample_size_one_mean(&q).map(Into::into).map_err(to_py)
}

/// Minimum detectable alternative mean at fixed n.
#[pyfunction]
#[pyo3(signature = (n, mu0=50.0, sd=28.87, alpha=0.05, power=0.8, sides="two_sided", direction="lower"))]
fn target_mean_one_mean(
    n: u64,
    mu0: f64,
    sd: f64,
    alpha: f64,
    power: f64,
    sides: &str,
    direction: &str,
) -> PyResult<PowerSolution> {
    let q = one_mean_query(mu0, None, sd, Some(n), alpha, power, sides, direction)?;
    power::target_mean_one_mean(&q).map(Into::into).map_err(to_py)
}

fn two_sample(s: power::TwoSampleSolution) -> TwoSampleSolution {
    TwoSampleSolution {
        n1: s.n1,
        n2: s.n2,
        achieved_power: s.achieved_power,
        delta: s.delta,
        mu1: s.mu1,
        mu2: s.mu2,
        sd: s.sd,
        alpha: s.alpha,
    }
}

#[pyfunction]
#[pyo3(signature = (mu1, mu2, n1, n2=None, sd=28.87, alpha=0.05, sides="two_sided"))]
fn power_two_means(mu1: f64, mu2: f64, n1: u64, n2: Option<u64>, sd: f64, alpha: f64, sides: &str) -> PyResult<f64> {
    let mut q = TwoSampleQuery::new(mu1, mu2, sd);
    q.n1 = Some(n1);
    q.n2 = n2;
    q.alpha = alpha;
    q.sides = self::sides(sides)?;
    power::power_two_means(&q).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (mu1, mu2, sd=28.87, alpha=0.05, power=0.8, ratio=1.0, sides="two_sided"))]
fn sample_size_two_means(
    mu1: f64,
    mu2: f64,
    sd: f64,
    alpha: f64,
    power: f64,
    ratio: f64,
    sides: &str,
) -> PyResult<TwoSampleSolution> {
    let mut q = TwoSampleQuery::new(mu1, mu2, sd);
    q.alpha = alpha;
    q.power = power;
    q.ratio = ratio;
    q.sides = self::sides(sides)?;
    power::sample_size_two_means(&q).map(two_sample).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (pa, n, p0=0.10, alpha=0.05, sides="two_sided"))]
fn power_one_proportion(pa: f64, n: u64, p0: f64, alpha: f64, sides: &str) -> PyResult<f64> {
    let mut q = ProportionQuery::new(p0, pa).with_n(n);
    q.alpha = alpha;
    q.sides = self::sides(sides)?;
    power::power_one_proportion(&q).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (pa, p0=0.10, alpha=0.05, power=0.8, sides="two_sided"))]
fn sample_size_one_proportion(pa: f64, p0: f64, alpha: f64, power: f64, sides: &str) -> PyResult<ProportionSolution> {
    let mut q = ProportionQuery::new(p0, pa);
    q.alpha = alpha;
    q.power = power;
    q.sides = self::sides(sides)?;
    let s = power::sample_size_one_proportion(&q).map_err(to_py)?;
    Ok(ProportionSolution { n: s.n, achieved_power: s.achieved_power, p0: s.p0, pa: s.pa, alpha: s.alpha })
}

#[pyfunction]
#[pyo3(signature = (sample, mu0=50.0, alternative="two_sided", level=0.95))]
fn one_sample_t(sample: Vec<f64>, mu0: f64, alternative: &str, level: f64) -> PyResult<TestResult> {
    inference::one_sample_t(&sample, mu0, self::alternative(alternative)?, level)
        .map(Into::into)
        .map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (a, b, alternative="two_sided", level=0.95))]
fn two_sample_t(a: Vec<f64>, b: Vec<f64>, alternative: &str, level: f64) -> PyResult<TestResult> {
    inference::two_sample_t(&a, &b, self::alternative(alternative)?, level)
        .map(Into::into)
        .map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (successes, n, p0=0.10, alternative="two_sided", level=0.95))]
fn one_proportion_test(successes: u64, n: u64, p0: f64, alternative: &str, level: f64) -> PyResult<TestResult> {
    inference::one_proportion_test(successes, n, p0, self::alternative(alternative)?, level)
        .map(Into::into)
        .map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (sample, mu0=50.0, replicates=2000, seed=resampling::DEFAULT_SEED, ci_method="percentile", level=0.95))]
fn bootstrap_mean(
    sample: Vec<f64>,
    mu0: f64,
    replicates: usize,
    seed: u64,
    ci_method: &str,
    level: f64,
) -> PyResult<BootstrapResult> {
    let ci_method = match ci_method {
        "percentile" => CiMethod::Percentile,
        "normal_approx" | "normal" => CiMethod::NormalApprox,
        other => return Err(PyValueError::new_err(format!("unknown ci_method {other:?}"))),
    };
    let cfg = BootstrapConfig { replicates, seed, ci_method, level };
    let r = resampling::bootstrap_mean(&sample, mu0, &cfg).map_err(to_py)?;
    Ok(BootstrapResult {
        point_estimate: r.point_estimate,
        std_error: r.std_error,
        ci_lower: r.ci.lower,
        ci_upper: r.ci.upper,
        p_value_vs_mu0: r.p_value_vs_mu0,
        replicates: r.replicates,
        seed: r.seed,
    })
}

/// Monte Carlo power of the one-sample t test.
#[pyfunction]
#[pyo3(signature = (mua, n, mu0=50.0, sd=28.87, alpha=0.05, sides="two_sided", reps=10_000, seed=resampling::DEFAULT_SEED, population="uniform"))]
#[allow(clippy::too_many_arguments)]
fn simulate_power_one_mean(
    mua: f64,
    n: u64,
    mu0: f64,
    sd: f64,
    alpha: f64,
    sides: &str,
    reps: usize,
    seed: u64,
    population: &str,
) -> PyResult<SimulationResult> {
    let q = one_mean_query(mu0, Some(mua), sd, Some(n), alpha, 0.8, sides, "lower")?;
    let population = match population {
        "uniform" => Population::Uniform,
        "normal" => Population::Normal,
        other => return Err(PyValueError::new_err(format!("unknown population {other:?}"))),
    };
    let r = resampling::simulate_power(&SimulationDesign::OneMean(q), &SimulationConfig { reps, seed, population })
        .map_err(to_py)?;
    Ok(SimulationResult {
        empirical_power: r.empirical_power,
        mc_std_error: r.mc_std_error,
        reps: r.reps,
        seed: r.seed,
        warnings: r.warnings,
    })
}

#[pyfunction]
fn uniform_population_sd(low: f64, high: f64) -> PyResult<f64> {
    percentile::uniform_population_sd(low, high).map_err(to_py)
}

/// Inverted percentile of a paper with `citations` among `reference_counts`.
#[pyfunction]
fn inverted_percentile(citations: u64, reference_counts: Vec<u64>) -> PyResult<f64> {
    let key = ReferenceKey { subject: String::new(), pub_year: 0 };
    let set = ReferenceSet::new(key, reference_counts).map_err(to_py)?;
    Ok(percentile::inverted_percentile(citations, &set))
}

/// Scores `(paper_id, pub_year, subject, citations)` tuples; results are sorted by paper_id.
#[pyfunction]
fn score_records(records: Vec<(String, i32, String, u64)>) -> PyResult<Vec<PercentileScore>> {
    let records: Vec<PublicationRecord> = records
        .into_iter()
        .map(|(id, year, subject, citations)| PublicationRecord::new(id, year, subject, citations))
        .collect();
    for r in &records {
        r.validate().map_err(to_py)?;
    }
    let scored = percentile::score_records(&records).map_err(to_py)?;
    Ok(scored
        .scores
        .into_iter()
        .map(|s| PercentileScore {
            paper_id: s.paper_id,
            inverted_percentile: s.inverted_percentile,
            subject: s.reference_key.subject,
            pub_year: s.reference_key.pub_year,
        })
        .collect())
}

/// Share of inverted percentiles strictly below `threshold`.
#[pyfunction]
#[pyo3(signature = (percentiles, threshold=10.0))]
fn top_share(percentiles: Vec<f64>, threshold: f64) -> PyResult<f64> {
    let scores: Vec<percentile::PercentileScore> = percentiles
        .into_iter()
        .map(|p| percentile::PercentileScore {
            paper_id: String::new(),
            inverted_percentile: p,
            reference_key: ReferenceKey { subject: String::new(), pub_year: 0 },
        })
        .collect();
    percentile::top_share(&scores, threshold).map_err(to_py)
}

#[pyfunction]
fn parse_numlist(text: &str) -> PyResult<Vec<f64>> {
    cli::parse_numlist(text).map_err(to_py)
}

#[pymodule]
fn bibliopower_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PowerSolution>()?;
    m.add_class::<TwoSampleSolution>()?;
    m.add_class::<ProportionSolution>()?;
    m.add_class::<TestResult>()?;
    m.add_class::<BootstrapResult>()?;
    m.add_class::<SimulationResult>()?;
    m.add_class::<PercentileScore>()?;
    m.add_function(wrap_pyfunction!(normal_cdf, m)?)?;
    m.add_function(wrap_pyfunction!(normal_quantile, m)?)?;
    m.add_function(wrap_pyfunction!(student_t_cdf, m)?)?;
    m.add_function(wrap_pyfunction!(student_t_quantile, m)?)?;
    m.add_function(wrap_pyfunction!(noncentral_t_cdf, m)?)?;
    m.add_function(wrap_pyfunction!(power_one_mean, m)?)?;
    m.add_function(wrap_pyfunction!(sample_size_one_mean, m)?)?;
    m.add_function(wrap_pyfunction!(target_mean_one_mean, m)?)?;
    m.add_function(wrap_pyfunction!(power_two_means, m)?)?;
    m.add_function(wrap_pyfunction!(sample_size_two_means, m)?)?;
    m.add_function(wrap_pyfunction!(power_one_proportion, m)?)?;
    m.add_function(wrap_pyfunction!(sample_size_one_proportion, m)?)?;
    m.add_function(wrap_pyfunction!(one_sample_t, m)?)?;
    m.add_function(wrap_pyfunction!(two_sample_t, m)?)?;
    m.add_function(wrap_pyfunction!(one_proportion_test, m)?)?;
    m.add_function(wrap_pyfunction!(bootstrap_mean, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_power_one_mean, m)?)?;
    m.add_function(wrap_pyfunction!(uniform_population_sd, m)?)?;
    m.add_function(wrap_pyfunction!(inverted_percentile, m)?)?;
    m.add_function(wrap_pyfunction!(score_records, m)?)?;
    m.add_function(wrap_pyfunction!(top_share, m)?)?;
    m.add_function(wrap_pyfunction!(parse_numlist, m)?)?;
    Ok(())
}
