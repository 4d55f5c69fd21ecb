"""Shared fixtures: the default field and a session cache of built code pairs."""

import pytest

from splitconv.basecode import search_points
from splitconv.construction import build_final_code, build_initial_code, derive_params
from splitconv.field import GF256


def sweep_shapes():
    """Every (nI, kI, nF, kF) in the standard parameter sweep."""
    out = []
    for lam in (2, 3):
        for kf in range(2, 6):
            for rf in range(1, kf):
                for ri in range(1, 5):
                    out.append((lam * kf + ri, lam * kf, kf + rf, kf))
    return out


SWEEP = sweep_shapes()


@pytest.fixture(scope="session")
def field():
    return GF256()


class PairCache:
    """Builds (params, points, initial, final) once per shape per session."""

    def __init__(self, field):
        self.field = field
        self._store = {}

    def get(self, ni, ki, nf, kf):
        key = (ni, ki, nf, kf)
        if key not in self._store:
            params = derive_params(ni, ki, nf, kf)
            points = search_points(params.ni, params.ki, params.max_parity, self.field)
            initial = build_initial_code(params, points, self.field)
            final = build_final_code(params, points, self.field)
            self._store[key] = (params, points, initial, final)
        return self._store[key]


@pytest.fixture(scope="session")
def pairs(field):
    return PairCache(field)
