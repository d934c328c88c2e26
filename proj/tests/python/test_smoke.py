"""Smoke tests for the python extension: imports, determinism, and a few
values checked against independent numpy oracles."""

import math
import sys

import numpy as np

import maxsum as ms


def approx(a, b, tol=1e-10):
    assert abs(a - b) <= tol * max(1.0, abs(a), abs(b)), (a, b)


def midranks(y):
    order = np.argsort(y, kind="stable")
    ranks = np.empty(len(y))
    i = 0
    while i < len(y):
        j = i
        while j + 1 < len(y) and y[order[j + 1]] == y[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2 + 1
        i = j + 1
    return ranks


def test_ranks_and_scores():
    y = np.array([3.0, 1.0, 2.0, 2.0])
    got = ms.rank(y)
    assert np.array_equal(got, np.array([4.0, 1.0, 2.5, 2.5]))

    rng = np.random.default_rng(1)
    y = rng.normal(size=57)
    assert np.array_equal(ms.rank(y), midranks(y))

    e = ms.wilcoxon_scores(y)
    n = len(y)
    expected = math.sqrt(12) * (midranks(y) / (n + 1) - 0.5)
    assert np.allclose(e, expected, atol=1e-12)
    approx(e.sum(), 0.0, 1e-12)
    approx((e**2).sum(), n * (n - 1) / (n + 1), 1e-10)


def test_sum_statistic_oracle():
    rng = np.random.default_rng(2)
    X = rng.normal(size=(12, 4))
    y = rng.normal(size=12)
    e = ms.wilcoxon_scores(y)
    n = len(y)
    total = 0.0
    for i in range(n):
        for k in range(n):
            if i != k:
                total += X[i] @ X[k] * e[i] * e[k]
    approx(ms.rank_sum_ustat(X, y), total / (n * (n - 1)), 1e-12)

    # trace estimator equals its brute-force twin
    small = rng.normal(size=(7, 3))
    approx(ms.trace_sigma2_hat(small), ms.trace_sigma2_bruteforce(small), 1e-10)


def test_max_coords_oracle():
    rng = np.random.default_rng(3)
    X = rng.normal(size=(9, 5))
    y = rng.normal(size=9)
    e = ms.wilcoxon_scores(y)
    n = 9
    c_n = math.sqrt((n + 1) / (n - 1))
    centered = X - X.mean(axis=0)
    expected = c_n * (centered.T @ e) / np.linalg.norm(centered, axis=0)
    assert np.allclose(ms.marginal_coords(X, y), expected, atol=1e-12)

    omega = np.diag([1.0, 4.0, 9.0, 0.25, 2.0])
    transformed = X @ omega
    centered_t = transformed - transformed.mean(axis=0)
    expected_w = c_n * (centered_t.T @ e) / np.sqrt(n * np.diag(omega))
    assert np.allclose(ms.precision_coords(X, y, omega), expected_w, atol=1e-12)


def test_calibrations():
    approx(ms.gumbel_pvalue(2 * math.log(200) - math.log(math.log(200)), 200),
           1 - math.exp(-1 / math.sqrt(math.pi)), 1e-12)

    combined = ms.cauchy_combine([0.05, 0.5])
    approx(combined["t_combined"], 3.1568757573375206, 1e-12)
    approx(combined["p_combined"], 0.09764767391504592, 1e-12)
    approx(ms.cauchy_combine([0.3, 0.3])["p_combined"], 0.3, 1e-12)
    approx(ms.minp_combine(0.5, 0.9)["p_combined"], 0.75, 1e-14)

    try:
        ms.cauchy_combine([0.0, 0.5])
    except ValueError:
        pass
    else:
        raise AssertionError("expected ValueError for p = 0")


def test_generate_and_run_tests_deterministic():
    beta = np.zeros(30)
    X1, y1 = ms.generate(80, 0.7, 30, beta, "E2", 99)
    X2, y2 = ms.generate(80, 0.7, 30, beta, "E2", 99)
    assert np.array_equal(X1, X2) and np.array_equal(y1, y2)

    reports = ms.run_tests(X1, y1, methods=["RS", "RM1", "EB", "MAX", "RC1"],
                           seed=11, bootstrap_B=200, perm_B=200)
    by_method = {r["method"]: r for r in reports}
    assert set(by_method) == {"RS", "RM1", "EB", "MAX", "RC1"}
    for r in reports:
        assert 0.0 <= r["pvalue"] <= 1.0

    again = ms.run_tests(X1, y1, methods=["RS", "RM1", "EB", "MAX", "RC1"],
                         seed=11, bootstrap_B=200, perm_B=200)
    assert [r["pvalue"] for r in reports] == [r["pvalue"] for r in again]


def test_precision_contract():
    rng = np.random.default_rng(4)
    X = rng.normal(size=(120, 15))
    estimate = ms.estimate_precision(X, splits=20, kmax=5, seed=7)
    omega = estimate["omega_hat"]
    target = ms.band(ms.sample_covariance(X), estimate["band_k"])
    target = target + estimate["ridge_tau"] * np.eye(15)
    assert np.abs(target @ omega - np.eye(15)).max() <= 1e-8


def test_small_campaign():
    rows = ms.run_size(40, 12, 0.5, "E1", ["RS", "MAX"], 50, seed=5,
                       bootstrap_B=100, perm_B=100, workers=2)
    assert len(rows) == 2
    for row in rows:
        assert row["replications"] == 50
        assert 0.0 <= row["frequency"] <= 1.0
    again = ms.run_size(40, 12, 0.5, "E1", ["RS", "MAX"], 50, seed=5,
                        bootstrap_B=100, perm_B=100, workers=1)
    assert [r["rejections"] for r in rows] == [r["rejections"] for r in again]


def main():
    tests = [value for name, value in globals().items() if name.startswith("test_")]
    for test in tests:
        test()
        print(f"ok {test.__name__}")
    print(f"{len(tests)} smoke tests passed")


if __name__ == "__main__":
    sys.exit(main())
