"""Shared, cached tilings.  Generation dominates the run time, so every
(seed, schedule, depth, master_seed) combination is built once per session."""

from __future__ import annotations

from functools import lru_cache

import pytest

from rphtiling.gpsp import Schedule, run_sequence, seed_tiling

ALL_L = "LLLLLLLLLL"
ALL_R = "RRRRRRRRRR"


@lru_cache(maxsize=None)
def build(seed: str = "R", schedule: str = ALL_L, depth: int = 3, master_seed: int = 0):
    t, _ = run_sequence(seed_tiling(seed), Schedule.parse(schedule), depth, master_seed)
    return t


@lru_cache(maxsize=None)
def history(seed: str = "R", schedule: str = ALL_L, depth: int = 4):
    _, _, hist = run_sequence(seed_tiling(seed), Schedule.parse(schedule), depth, keep_history=True)
    return tuple(hist)


@pytest.fixture(scope="session")
def tiling():
    return build
