"""Randomized schedule search: determinism, acceptance, sampling."""

import numpy as np
import pytest

from ftec import codes
from ftec.distance import circuit_distance, is_propagating
from ftec.gf2 import in_row_space
from ftec.search import SearchConfig, sample_schedule, search


def test_sample_schedule_checks_in_row_space():
    h = codes.hamming_h()
    rng = np.random.default_rng(7)
    sched = sample_schedule(h, 6, rng)
    assert sched.n_m == 6
    for c in sched.checks:
        assert c != 0
        assert in_row_space(c, h.rows, 7)


def test_sample_schedule_coefficient_stream_is_deterministic():
    h = codes.hamming_h()
    a = sample_schedule(h, 5, np.random.default_rng(42)).checks
    b = sample_schedule(h, 5, np.random.default_rng(42)).checks
    assert a == b


def test_sample_schedule_zero_checks_opt_in():
    h = codes.hamming_h()
    rng = np.random.default_rng(0)
    seen_zero = False
    for _ in range(200):
        sched = sample_schedule(h, 3, rng, allow_zero_checks=True)
        seen_zero = seen_zero or any(c == 0 for c in sched.checks)
    assert seen_zero


def test_search_finds_short_hamming_schedule():
    # At most six measurements suffice for circuit distance 3 on the
    # [7,4,3] code, and 200 attempts per length find one.
    config = SearchConfig(min_length=1, max_length=6, attempts_per_length=200, seed=0)
    result = search(codes.hamming_h(), 3, config)
    assert result.schedule is not None
    assert result.d_circ == 3
    assert result.schedule.n_m <= 6
    # independent re-check of the winner
    assert circuit_distance(result.schedule, 3).d_circ == 3


def test_search_is_deterministic():
    config = SearchConfig(min_length=1, max_length=6, attempts_per_length=200, seed=0)
    a = search(codes.hamming_h(), 3, config)
    b = search(codes.hamming_h(), 3, config)
    assert a.schedule.checks == b.schedule.checks
    assert a.num_attempts == b.num_attempts
    assert [r.checks for r in a.attempts] == [r.checks for r in b.attempts]


def test_search_records_failed_attempts():
    config = SearchConfig(min_length=1, max_length=2, attempts_per_length=5, seed=1)
    result = search(codes.hamming_h(), 3, config)
    # one or two measurements can never reach distance 3
    assert result.schedule is None
    assert result.exhausted
    assert result.num_attempts == 10
    assert all(not r.accepted for r in result.attempts)
    assert all(r.achieved is not None and r.achieved < 3 for r in result.attempts)


def test_search_respects_time_budget():
    config = SearchConfig(
        min_length=1, max_length=6, attempts_per_length=10**6, seed=0, time_budget=0.0
    )
    result = search(codes.hamming_h(), 3, config)
    assert result.schedule is None
    assert not result.exhausted


def test_search_rejects_bad_config():
    with pytest.raises(ValueError):
        search(codes.hamming_h(), 3, SearchConfig(min_length=0, max_length=3))
    with pytest.raises(ValueError):
        search(codes.hamming_h(), 3, SearchConfig(min_length=4, max_length=3))
    with pytest.raises(ValueError):
        search(codes.hamming_h(), 0, SearchConfig(min_length=1, max_length=3))


def test_rejected_candidates_have_light_propagating_errors():
    # The 'achieved' field on a rejected attempt is a genuine witness weight.
    config = SearchConfig(min_length=3, max_length=3, attempts_per_length=3, seed=5)
    result = search(codes.hamming_h(), 3, config)
    from ftec.circuit import MeasurementSchedule
    from ftec.distance import exclude_propagating_below

    for rec in result.attempts:
        if rec.accepted:
            continue
        sched = MeasurementSchedule(codes.hamming_h(), rec.checks)
        report = exclude_propagating_below(sched, 3)
        assert report.d_circ == rec.achieved
        assert is_propagating(sched, report.witness)
