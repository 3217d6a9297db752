"""Randomized search for short measurement sequences with maximal circuit
distance.

Candidate checks are drawn uniformly from the row space of H_D; a candidate
schedule is accepted when a branch-and-bound exclusion certifies that no
propagating error lighter than the data-code distance exists.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .circuit import MeasurementSchedule
from .distance import circuit_distance, exclude_propagating_below
from .gf2 import BitMatrix, sample_row_space


@dataclass(frozen=True)
class SearchConfig:
    """Parameters of the randomized schedule search."""

    min_length: int
    max_length: int
    attempts_per_length: int = 200
    seed: int = 0
    time_budget: Optional[float] = None  # seconds, for the whole search
    allow_zero_checks: bool = False


@dataclass
class AttemptRecord:
    """One candidate schedule and the verdict of its distance check."""

    length: int
    attempt: int
    checks: Tuple[int, ...]
    achieved: Optional[int]  # weight of the lightest propagating error found
    accepted: bool


@dataclass
class SearchResult:
    """Outcome of the randomized search."""

    schedule: Optional[MeasurementSchedule]
    d_circ: Optional[int]
    attempts: List[AttemptRecord] = field(default_factory=list)
    elapsed: float = 0.0
    exhausted: bool = False  # all lengths tried without success

    @property
    def num_attempts(self) -> int:
        return len(self.attempts)


def sample_schedule(
    h_d: BitMatrix,
    length: int,
    rng: np.random.Generator,
    allow_zero_checks: bool = False,
) -> MeasurementSchedule:
    """Draw a schedule of `length` uniform row-space elements of H_D."""
    checks = []
    while len(checks) < length:
        c = sample_row_space(h_d, rng)
        if c == 0 and not allow_zero_checks:
            continue
        checks.append(c)
    return MeasurementSchedule(h_d, tuple(checks))


def search(
    h_d: BitMatrix,
    d_d: int,
    config: SearchConfig,
) -> SearchResult:
    """Look for the shortest schedule with circuit distance d_D.

    Lengths are scanned in increasing order; for each, up to
    `attempts_per_length` candidates are drawn. A candidate is accepted when
    the exclusion search proves no propagating error of weight < d_D exists,
    after which the full circuit distance is recomputed independently on the
    winner. Deterministic for a fixed seed: candidate (length, attempt) uses
    the seed stream spawn_key=(length, attempt).
    """
    if config.min_length < 1 or config.max_length < config.min_length:
        raise ValueError("need 1 <= min_length <= max_length")
    if d_d < 1:
        raise ValueError("d_d must be >= 1")
    t0 = time.monotonic()
    result = SearchResult(schedule=None, d_circ=None)
    for length in range(config.min_length, config.max_length + 1):
        for attempt in range(config.attempts_per_length):
            if (
                config.time_budget is not None
                and time.monotonic() - t0 > config.time_budget
            ):
                result.elapsed = time.monotonic() - t0
                return result
            rng = np.random.default_rng(
                np.random.SeedSequence(config.seed, spawn_key=(length, attempt))
            )
            cand = sample_schedule(
                h_d, length, rng, allow_zero_checks=config.allow_zero_checks
            )
            report = exclude_propagating_below(cand, d_d)
            accepted = report.d_circ is None and report.complete
            result.attempts.append(
                AttemptRecord(length, attempt, cand.checks, report.d_circ, accepted)
            )
            if accepted:
                # Independent confirmation with the full distance search.
                confirm = circuit_distance(cand, d_d)
                if confirm.d_circ != d_d:
                    raise AssertionError(
                        "exclusion certificate disagrees with the distance search"
                    )
                result.schedule = cand
                result.d_circ = confirm.d_circ
                result.elapsed = time.monotonic() - t0
                return result
    result.exhausted = True
    result.elapsed = time.monotonic() - t0
    return result
