import time

import numpy as np
import pytest

from knuckle_crane import CraneParams, SimulationAborted, preset, run_scenario


@pytest.fixture(scope="session")
def params():
    return CraneParams()


class _Runs:
    """Full-length scenario runs, computed once per session on demand."""

    def __init__(self):
        self._cache = {}

    def get(self, number, controller="pd"):
        key = (number, controller)
        if key not in self._cache:
            cfg = preset(number, controller=controller)
            start = time.perf_counter()
            try:
                log, error = run_scenario(cfg, keep_partial=True), None
            except SimulationAborted as exc:
                log, error = exc.log, exc.cause
            self._cache[key] = (cfg, log, error, time.perf_counter() - start)
        return self._cache[key]


@pytest.fixture(scope="session")
def runs():
    return _Runs()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
