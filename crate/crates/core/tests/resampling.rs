use bibliopower::inference::{one_sample_t, Alternative};
use bibliopower::power::{power_one_mean, PowerQuery, TwoSampleQuery};
use bibliopower::resampling::{
    bootstrap_mean, bootstrap_proportion, replicate_rng, simulate_power, BootstrapConfig, CiMethod,
    Population, SimulationConfig, SimulationDesign,
};
use proptest::prelude::*;
use rand::Rng;

fn uniform_draws(seed: u64, n: usize) -> Vec<f64> {
    let mut rng = replicate_rng(seed, 0);
    (0..n).map(|_| 100.0 * rng.random::<f64>()).collect()
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(f)
}

#[test]
fn bootstrap_independent_of_thread_count() {
    let sample = uniform_draws(5, 300);
    let cfg = BootstrapConfig { seed: 8, ..Default::default() };
    let one = in_pool(1, || bootstrap_mean(&sample, 50.0, &cfg).unwrap());
    let four = in_pool(4, || bootstrap_mean(&sample, 50.0, &cfg).unwrap());
    assert_eq!(one, four);
}

#[test]
fn simulation_independent_of_thread_count() {
    let design = SimulationDesign::OneMean(PowerQuery::default().with_alternative(45.0).with_n(100));
    let cfg = SimulationConfig { reps: 5000, seed: 3, ..Default::default() };
    let one = in_pool(1, || simulate_power(&design, &cfg).unwrap());
    let three = in_pool(3, || simulate_power(&design, &cfg).unwrap());
    assert_eq!(one, three);
}

#[test]
fn bootstrap_matches_t_interval() {
    let sample = uniform_draws(500, 500);
    let t = one_sample_t(&sample, 50.0, Alternative::TwoSided, 0.95).unwrap();
    let b = bootstrap_mean(&sample, 50.0, &BootstrapConfig { seed: 500, ..Default::default() }).unwrap();
    assert!((b.ci.lower - t.ci.lower).abs() < 0.5, "{:?} vs {:?}", b.ci, t.ci);
    assert!((b.ci.upper - t.ci.upper).abs() < 0.5, "{:?} vs {:?}", b.ci, t.ci);
    let normal = bootstrap_mean(
        &sample,
        50.0,
        &BootstrapConfig { seed: 500, ci_method: CiMethod::NormalApprox, ..Default::default() },
    )
    .unwrap();
    assert_eq!(normal.std_error, b.std_error);
    assert!((normal.ci.lower - t.ci.lower).abs() < 0.5);
    // the standard error of a mean of n uniforms is sd / √n
    let expected_se = t.ci.upper - t.estimate;
    assert!((b.std_error * 1.96 - expected_se).abs() < 0.1 * expected_se);
}

#[test]
fn interval_narrows_with_sample_size() {
    let cfg = BootstrapConfig { seed: 12, ..Default::default() };
    let widths: Vec<f64> = [50, 200, 800]
        .into_iter()
        .map(|n| {
            let r = bootstrap_mean(&uniform_draws(n as u64, n), 50.0, &cfg).unwrap();
            r.ci.upper - r.ci.lower
        })
        .collect();
    assert!(widths[0] > widths[1] && widths[1] > widths[2], "{widths:?}");
}

#[test]
fn proportion_bootstrap() {
    let hits: Vec<bool> = (0..200).map(|i| i % 5 == 0).collect();
    let r = bootstrap_proportion(&hits, 0.10, &BootstrapConfig::default()).unwrap();
    assert!((r.point_estimate - 0.2).abs() < 1e-12);
    assert!(r.ci.lower > 0.10 && r.ci.upper < 0.30);
    assert!(r.p_value_vs_mu0 < 0.01);
}

#[test]
fn simulated_size_is_alpha() {
    let design = SimulationDesign::OneMean(PowerQuery::default().with_alternative(50.0).with_n(40));
    let r = simulate_power(&design, &SimulationConfig { reps: 40_000, seed: 9, ..Default::default() }).unwrap();
    assert!((r.empirical_power - 0.05).abs() < 3.0 * r.mc_std_error, "{r:?}");

    let two = SimulationDesign::TwoMeans(TwoSampleQuery::new(50.0, 50.0, 28.87).with_sizes(20, 30));
    let r = simulate_power(&two, &SimulationConfig { reps: 40_000, seed: 9, ..Default::default() }).unwrap();
    assert!((r.empirical_power - 0.05).abs() < 3.0 * r.mc_std_error, "{r:?}");
}

#[test]
fn simulated_power_grows_with_n() {
    let cfg = SimulationConfig { reps: 20_000, seed: 21, ..Default::default() };
    let at = |n| {
        let d = SimulationDesign::OneMean(PowerQuery::default().with_alternative(40.0).with_n(n));
        simulate_power(&d, &cfg).unwrap()
    };
    let (small, large) = (at(50), at(68));
    let se = (small.mc_std_error.powi(2) + large.mc_std_error.powi(2)).sqrt();
    assert!(large.empirical_power - small.empirical_power > 2.0 * se);
}

#[test]
fn normal_population_option() {
    let q = PowerQuery::default().with_alternative(45.0).with_n(264);
    let d = SimulationDesign::OneMean(q);
    let cfg = SimulationConfig { reps: 40_000, seed: 4, population: Population::Normal };
    let r = simulate_power(&d, &cfg).unwrap();
    let analytic = power_one_mean(&q).unwrap();
    assert!((r.empirical_power - analytic).abs() < 4.0 * r.mc_std_error);
}

#[test]
fn simulation_tracks_analytic_power_on_both_ladders() {
    let cfg = SimulationConfig { reps: 200_000, seed: 1049, ..Default::default() };
    let rows = [
        (0.05, 47.5, 1049),
        (0.05, 45.0, 264),
        (0.05, 42.5, 119),
        (0.05, 40.0, 68),
        (0.01, 47.5, 1988),
        (0.01, 45.0, 500),
        (0.01, 42.5, 224),
        (0.01, 40.0, 128),
    ];
    for (alpha, mua, n) in rows {
        let q = PowerQuery::default().with_alternative(mua).with_alpha(alpha).with_n(n);
        let analytic = power_one_mean(&q).unwrap();
        let r = simulate_power(&SimulationDesign::OneMean(q), &cfg).unwrap();
        assert!((r.empirical_power - analytic).abs() <= 0.01, "alpha={alpha} mua={mua}: {} vs {analytic}", r.empirical_power);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn bootstrap_output_invariants(
        sample in prop::collection::vec(0.0f64..100.0, 10..80),
        mu0 in 0.0f64..100.0,
        seed in any::<u64>(),
        normal in any::<bool>(),
    ) {
        let cfg = BootstrapConfig {
            replicates: 200,
            seed,
            ci_method: if normal { CiMethod::NormalApprox } else { CiMethod::Percentile },
            ..Default::default()
        };
        let r = bootstrap_mean(&sample, mu0, &cfg).unwrap();
        prop_assert!(r.ci.lower <= r.ci.upper);
        prop_assert!(r.p_value_vs_mu0 >= 2.0 / 200.0 && r.p_value_vs_mu0 <= 1.0);
        prop_assert!(r.std_error >= 0.0);
        prop_assert_eq!(r, bootstrap_mean(&sample, mu0, &cfg).unwrap());
    }
}
