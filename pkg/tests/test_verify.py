import numpy as np
import pytest

from knuckle_crane import coriolis_matrix
from knuckle_crane.verify import THRESHOLDS, run_property_suite, sample_states


def test_sample_box():
    q, qd, _ = sample_states(500, seed=3)
    assert q.shape == qd.shape == (500, 6)
    lim = np.radians(80)
    assert np.all(np.abs(q[:, [1, 2, 4, 5]]) <= lim)
    assert np.all((q[:, 3] >= 0.1) & (q[:, 3] <= 10))
    assert np.array_equal(q, sample_states(500, seed=3)[0])


def test_suite_passes_on_production_model():
    report = run_property_suite(samples=200, seed=7)
    assert report.passed, "\n".join(report.lines())
    assert {r.name for r in report.results} == set(THRESHOLDS)


def test_single_sample_is_deterministic():
    a = run_property_suite(samples=1, seed=11)
    b = run_property_suite(samples=1, seed=11)
    assert [r.worst for r in a.results] == [r.worst for r in b.results]


def test_perturbed_coriolis_is_caught():
    def broken(p, q, qd):
        C = coriolis_matrix(p, q, qd).copy()
        C[0, 1] *= 1.001
        return C

    report = run_property_suite(samples=50, seed=0, coriolis=broken)
    assert not report.passed
    failing = {r.name for r in report.results if not r.passed}
    assert "skew_symmetry" in failing
    assert any("worst state" in line for line in report.lines())


def test_worst_state_recorded():
    report = run_property_suite(samples=20, seed=0)
    for r in report.results:
        assert r.worst_state is not None and r.worst_state.shape == (12,)
        assert r.worst <= r.threshold or r.threshold == 0.0
