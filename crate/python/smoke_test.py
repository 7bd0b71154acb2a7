"""Smoke test for the bibliopower_py extension module.

Build and install the wheel first:

    cd crates/python && maturin build --release && pip install ../../target/wheels/*.whl
"""

import math

import bibliopower_py as bp


def close(a, b, tol):
    return abs(a - b) <= tol


def main():
    ladder = [47.5, 45.0, 42.5, 40.0]
    sizes = [bp.sample_size_one_mean(m).n for m in ladder]
    assert sizes == [1049, 264, 119, 68], sizes

    stringent = [bp.sample_size_one_mean(m, alpha=0.01, power=0.9).n for m in ladder]
    assert stringent == [1988, 500, 224, 128], stringent

    target = bp.target_mean_one_mean(200, alpha=0.05)
    assert close(target.mua, 44.25, 0.01), target
    assert close(target.delta, -0.1991, 0.0005), target

    assert close(bp.power_one_mean(50.0, 200, alpha=0.05), 0.05, 1e-9)
    assert close(bp.uniform_population_sd(0, 100), 28.8675, 5e-4)
    assert bp.parse_numlist("47.5(-2.5)40") == ladder

    t = bp.one_sample_t([44, 46, 48, 50, 52], mu0=50)
    assert close(t.statistic, -math.sqrt(2), 1e-12), t
    assert t.df == 4

    sample = [float(i * 37 % 101) for i in range(200)]
    b1 = bp.bootstrap_mean(sample, mu0=50, seed=7)
    b2 = bp.bootstrap_mean(sample, mu0=50, seed=7)
    assert (b1.ci_lower, b1.ci_upper, b1.p_value_vs_mu0) == (b2.ci_lower, b2.ci_upper, b2.p_value_vs_mu0)

    sim = bp.simulate_power_one_mean(45.0, 264, reps=20_000, seed=1)
    assert close(sim.empirical_power, 0.8006, 4 * sim.mc_std_error + 1e-3), sim

    assert bp.inverted_percentile(2, [1, 2, 3, 4]) == 50.0
    scores = bp.score_records([("b", 2001, "A", 3), ("a", 2001, "A", 9), ("c", 2001, "A", 0)])
    assert [s.paper_id for s in scores] == ["a", "b", "c"]
    assert bp.top_share([s.inverted_percentile for s in scores], 10) == 1 / 3

    try:
        bp.score_records([])
    except ValueError as e:
        assert "empty" in str(e)
    else:
        raise AssertionError("empty dataset accepted")

    print("bibliopower_py smoke test passed")


if __name__ == "__main__":
    main()
