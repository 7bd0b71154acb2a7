mod oracle;

use bibliopower::distributions::{
    noncentral_t_cdf, normal_cdf, normal_quantile, student_t_cdf, student_t_quantile,
};
use proptest::prelude::*;

#[test]
fn oracle_erf_matches_its_taylor_expansion_near_zero() {
    for x in [1e-6, 1e-4, 1e-3] {
        let taylor = 2.0 / std::f64::consts::PI.sqrt() * (x - x * x * x / 3.0);
        assert!((oracle::erf_series(x) - taylor).abs() < 1e-15);
    }
    // series and continued fraction agree where both are accurate
    for x in [2.5, 3.0] {
        let a = 1.0 - oracle::erf_series(x);
        let b = oracle::erfc_cf(x);
        assert!((a - b).abs() < 1e-13, "x={x}: {a} vs {b}");
    }
}

#[test]
fn oracle_quadrature_integrates_polynomials_exactly() {
    let v = oracle::integrate(|x| x.powi(6) - 3.0 * x * x + 1.0, -1.0, 2.0, 1e-14);
    let exact = (2f64.powi(7) + 1.0) / 7.0 - (8.0 + 1.0) + 3.0;
    assert!((v - exact).abs() < 1e-12);
}

#[test]
fn normal_cdf_against_oracle() {
    for z in [-8.0, -5.0, -1.959_964, -0.3, 0.0, 0.7, 1.959_964, 4.2, 9.0] {
        let got = normal_cdf(z).unwrap();
        let want = oracle::normal_cdf(z);
        assert!((got - want).abs() < 1e-10, "z={z}: {got} vs {want}");
    }
    assert!((oracle::normal_cdf(1.959_964) - 0.975).abs() < 1e-6);
}

#[test]
fn normal_quantile_against_bisection_oracle() {
    let want = oracle::normal_quantile(0.975);
    let got = normal_quantile(0.975).unwrap();
    assert!((got - want).abs() < 1e-9);
    assert!((got - 1.959_964).abs() < 1e-5);
}

#[test]
fn student_t_cdf_against_quadrature() {
    // df = 3 has density 2 / (π √3) (1 + t²/3)^-2
    let c = 2.0 / (std::f64::consts::PI * 3f64.sqrt());
    let direct = 0.5 + oracle::integrate(|t| c * (1.0 + t * t / 3.0).powi(-2), 0.0, 1.5, 1e-14);
    let got = student_t_cdf(1.5, 3.0).unwrap();
    assert!((got - direct).abs() < 1e-10, "{got} vs {direct}");
    assert!((oracle::student_t_cdf(1.5, 3.0) - direct).abs() < 1e-10);

    for &(x, df) in &[(-2.5, 2.0), (0.4, 10.0), (1.97, 199.0), (-1.0, 1048.0), (3.3, 1e5)] {
        let got = student_t_cdf(x, df).unwrap();
        let want = oracle::student_t_cdf(x, df);
        assert!((got - want).abs() < 1e-10, "x={x} df={df}: {got} vs {want}");
    }
}

#[test]
fn student_t_quantile_against_bisection() {
    let want = oracle::bisect(|t| student_t_cdf(t, 199.0).unwrap() - 0.975, 0.0, 10.0);
    let got = student_t_quantile(0.975, 199.0).unwrap();
    assert!((got - want).abs() < 1e-10);
    let independent = oracle::bisect(|t| oracle::student_t_cdf(t, 199.0) - 0.975, 0.0, 10.0);
    assert!((got - independent).abs() < 1e-8);
}

#[test]
fn noncentral_against_quadrature_at_power_point() {
    let want = oracle::noncentral_t_cdf(1.6449, 199.0, 2.8);
    let got = noncentral_t_cdf(1.6449, 199.0, 2.8).unwrap();
    assert!((got - want).abs() < 1e-10, "{got} vs {want}");
}

#[test]
fn noncentral_against_quadrature_grid() {
    for df in [2.0, 10.0, 199.0, 1048.0, 1e5] {
        for ncp in [-5.0, -0.5, 0.0, 0.5, 5.0] {
            for x in [-3.0, -1.0, 0.0, 1.6449, 3.0, 7.0] {
                let got = noncentral_t_cdf(x, df, ncp).unwrap();
                let want = oracle::noncentral_t_cdf(x, df, ncp);
                assert!(
                    (got - want).abs() < 1e-8,
                    "x={x} df={df} ncp={ncp}: {got} vs {want}"
                );
            }
        }
    }
}

#[test]
fn noncentral_against_quadrature_large_ncp() {
    for &(x, df, ncp) in &[(30.0, 40.0, 25.0), (48.0, 5000.0, 50.0), (-20.0, 60.0, -22.0)] {
        let got = noncentral_t_cdf(x, df, ncp).unwrap();
        let want = oracle::noncentral_t_cdf(x, df, ncp);
        assert!((got - want).abs() < 1e-8, "x={x} df={df} ncp={ncp}: {got} vs {want}");
    }
}

#[test]
fn noncentral_matches_central_on_grid() {
    for i in 0..100 {
        let x = -6.0 + 0.12 * i as f64;
        let df = 1.0 + (i % 17) as f64 * 3.7;
        let a = noncentral_t_cdf(x, df, 0.0).unwrap();
        let b = student_t_cdf(x, df).unwrap();
        assert!((a - b).abs() <= 1e-10);
    }
}

proptest! {
    #[test]
    fn cdfs_are_monotone_and_bounded(
        mut xs in prop::collection::vec(-30.0f64..30.0, 2..12),
        df in 1.0f64..5000.0,
        ncp in -20.0f64..20.0,
    ) {
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut prev = (0.0, 0.0, 0.0);
        for &x in &xs {
            let n = normal_cdf(x).unwrap();
            let t = student_t_cdf(x, df).unwrap();
            let nc = noncentral_t_cdf(x, df, ncp).unwrap();
            for v in [n, t, nc] {
                prop_assert!((0.0..=1.0).contains(&v));
            }
            prop_assert!(n >= prev.0 && t >= prev.1 && nc + 1e-12 >= prev.2);
            prev = (n, t, nc);
        }
    }

    #[test]
    fn quantile_cdf_round_trip(p in 1e-6f64..(1.0 - 1e-6), df in 1.0f64..1e4) {
        let z = normal_quantile(p).unwrap();
        prop_assert!((normal_cdf(z).unwrap() - p).abs() < 1e-10);
        let t = student_t_quantile(p, df).unwrap();
        prop_assert!((student_t_cdf(t, df).unwrap() - p).abs() < 1e-10);
    }
}

#[test]
#[ignore = "prints the frozen oracle grid used by the acceptance suite"]
fn print_frozen_grid() {
    for df in [2.0, 10.0, 199.0, 1048.0, 1e5] {
        for ncp in [-5.0, -0.5, 0.0, 0.5, 5.0] {
            for x in [-3.0, -1.0, 0.0, 1.6449, 3.0, 7.0] {
                println!("    ({x:?}, {df:?}, {ncp:?}, {:.15e}),", oracle::noncentral_t_cdf(x, df, ncp));
            }
        }
    }
}
