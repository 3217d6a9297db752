"""Storage-lifetime Monte Carlo: trivial cases, invariants, statistics."""

import math

import numpy as np
import pytest

from ftec import codes
from ftec.decoder import build_truncated_decoder
from ftec.storage import (
    CENSORED,
    LOSS_TIE,
    LOSS_WRONG_CODEWORD,
    NoiseParams,
    _SiteStream,
    _trial_rng,
    average_lifetime,
    prop1_empirical_check,
    pseudo_threshold,
    run_trial,
    sample_cycle,
    unencoded_baseline,
)


@pytest.fixture(scope="module")
def setup633():
    code = codes.hamming_code()
    dec = build_truncated_decoder(codes.hamming_schedule_633(), 3)
    return code, dec


# Noise parameters -----------------------------------------------------------


def test_noise_params_validate():
    with pytest.raises(ValueError, match="p_m"):
        NoiseParams(0.1, 1.5, 0.1)
    u = NoiseParams.uniform(0.25)
    assert (u.p_s, u.p_m, u.p_f) == (0.25, 0.25, 0.25)


def test_unencoded_baseline():
    assert unencoded_baseline(0.01) == 100.0
    with pytest.raises(ValueError):
        unencoded_baseline(0.0)


# Cycle sampling --------------------------------------------------------------


def test_sample_cycle_noiseless(setup633):
    _, dec = setup633
    eps, m = sample_cycle(dec.sched, NoiseParams(0, 0, 0), _trial_rng(0, 0))
    assert eps.weight == 0 and m == 0


def test_sample_cycle_outcome_consistent(setup633):
    # The sampled outcome must equal re-simulating the sampled error.
    from ftec.circuit import simulate_outcome

    _, dec = setup633
    rng = _trial_rng(11, 0)
    for _ in range(200):
        eps, m = sample_cycle(dec.sched, NoiseParams(0.05, 0.05, 0.05), rng)
        assert simulate_outcome(dec.sched, eps) == m


def test_sample_cycle_internal_flips_on_support_only(setup633):
    _, dec = setup633
    rng = _trial_rng(13, 0)
    for _ in range(200):
        eps, _ = sample_cycle(dec.sched, NoiseParams(0, 0.3, 0), rng)
        for i, check in enumerate(dec.sched.checks):
            assert eps.e[i + 1] & ~check == 0
        assert eps.e[0] == 0 and eps.f == 0


def test_sample_cycle_rates(setup633):
    # Empirical flip rates within 4 sigma of each mechanism's probability.
    _, dec = setup633
    rng = _trial_rng(17, 0)
    p = 0.1
    n = 2000
    s_flips = m_flips = f_flips = 0
    sites_m = sum(bin(c).count("1") for c in dec.sched.checks)
    for _ in range(n):
        eps, _ = sample_cycle(dec.sched, NoiseParams.uniform(p), rng)
        s_flips += eps.e[0].bit_count()
        m_flips += sum(x.bit_count() for x in eps.e[1:])
        f_flips += eps.f.bit_count()
    for count, sites in [(s_flips, 7), (m_flips, sites_m), (f_flips, 6)]:
        total = n * sites
        sigma = math.sqrt(total * p * (1 - p))
        assert abs(count - total * p) < 4 * sigma


# Site streams -----------------------------------------------------------------


def test_site_stream_matches_dense_bernoulli():
    # The geometric-gap stream reproduces the iid site sequence of the same
    # generator draws in distribution: check the mean flip count per round.
    p, n, rounds = 0.07, 5, 4000
    stream = _SiteStream(p, n, _trial_rng(23, 0))
    flips = 0
    t = 1
    while t <= rounds:
        nxt = stream.next_round()
        if nxt > rounds:
            break
        flips += len(stream.flips_in_round(nxt))
        t = nxt + 1
    total = rounds * n
    sigma = math.sqrt(total * p * (1 - p))
    assert abs(flips - total * p) < 4 * sigma


def test_site_stream_inactive():
    stream = _SiteStream(0.0, 10, _trial_rng(0, 0))
    assert stream.next_round() > 10**9
    assert stream.flips_in_round(1) == []


# Trials -----------------------------------------------------------------------


def test_trial_noiseless_runs_to_horizon(setup633):
    code, dec = setup633
    res = run_trial(code, dec, NoiseParams(0, 0, 0), 50, _trial_rng(1, 0))
    assert res.lifetime == 50
    assert res.loss_mode == CENSORED
    assert res.rectangle_violations == 0


def test_trial_certain_loss_is_immediate(setup633):
    # p_s = 1 flips every bit each round; correction cannot keep up.
    code, dec = setup633
    res = run_trial(code, dec, NoiseParams(1.0, 0, 0), 100, _trial_rng(2, 0))
    assert res.lifetime <= 2
    assert res.loss_mode in (LOSS_WRONG_CODEWORD, LOSS_TIE)


def test_trial_deterministic_replay(setup633):
    code, dec = setup633
    noise = NoiseParams.uniform(5e-3)
    a = run_trial(code, dec, noise, 10_000, _trial_rng(42, 7))
    b = run_trial(code, dec, noise, 10_000, _trial_rng(42, 7))
    assert (a.lifetime, a.loss_mode, a.rectangle_violations) == (
        b.lifetime,
        b.loss_mode,
        b.rectangle_violations,
    )


def test_rectangle_invariant(setup633):
    # Whenever no adjacent pair of rounds violates the rectangle bound the
    # word must survive; equivalently a loss implies an earlier violation.
    code, dec = setup633
    noise = NoiseParams.uniform(2e-2)
    for trial in range(300):
        res = run_trial(code, dec, noise, 2_000, _trial_rng(100, trial))
        if res.loss_mode != CENSORED:
            assert res.rectangle_violations >= 1
            assert res.first_violation_round is not None
            assert res.first_violation_round <= res.lifetime


def test_rectangle_invariant_bulk(setup633):
    # Larger sample at lower noise: every lost trial shows a violation first.
    code, dec = setup633
    noise = NoiseParams.uniform(1e-2)
    lost = 0
    for trial in range(10_000):
        res = run_trial(code, dec, noise, 400, _trial_rng(200, trial))
        if res.loss_mode != CENSORED:
            lost += 1
            assert res.rectangle_violations >= 1
            assert res.first_violation_round <= res.lifetime
    assert lost > 100  # the regime is noisy enough to exercise the check


# Aggregation ------------------------------------------------------------------


def test_average_lifetime_worker_independence(setup633):
    code, dec = setup633
    noise = NoiseParams.uniform(1e-2)
    a = average_lifetime(code, dec, noise, 200, 5_000, master_seed=31, workers=1)
    b = average_lifetime(code, dec, noise, 200, 5_000, master_seed=31, workers=4)
    assert a.mean == b.mean
    assert a.stderr == b.stderr
    assert a.censored == b.censored


def test_average_lifetime_rejects_bad_trials(setup633):
    code, dec = setup633
    with pytest.raises(ValueError):
        average_lifetime(code, dec, NoiseParams.uniform(0.1), 0, 10, 0)


def test_baseline_agreement():
    # An unencoded bit's mean lifetime is 1/p_s: simulate directly.
    p = 0.02
    rng = _trial_rng(7, 0)
    n = 20_000
    lifetimes = rng.geometric(p, size=n)
    mean = lifetimes.mean()
    sigma = lifetimes.std(ddof=1) / math.sqrt(n)
    assert abs(mean - unencoded_baseline(p)) < 3 * sigma


def test_flipped_outcomes_alone_are_absorbed(setup633):
    # Outcome flips never corrupt the stored word by themselves, but they do
    # trigger corrections; fault tolerance keeps the word intact as long as
    # each round carries at most one flip. At tiny p_f losses never happen.
    code, dec = setup633
    stats = average_lifetime(
        code, dec, NoiseParams(0, 0, 1e-3), 50, 10_000, master_seed=5
    )
    assert stats.censored == 50


def test_noise_sensitivity_ordering(setup633):
    # Internal measurement flips hit several data bits per check; outcome
    # flips touch none. Scaling p_m hurts more than scaling p_f.
    code, dec = setup633
    base = 1e-3
    hi = 1e-2
    m_stats = average_lifetime(
        code, dec, NoiseParams(base, hi, base), 2_000, 100_000, master_seed=61, workers=4
    )
    f_stats = average_lifetime(
        code, dec, NoiseParams(base, base, hi), 2_000, 100_000, master_seed=62, workers=4
    )
    gap = f_stats.mean - m_stats.mean
    assert gap > 3 * math.hypot(m_stats.stderr, f_stats.stderr)


def test_storage_flip_sensitivity(setup633):
    # Scaling p_s also shortens the lifetime by a clear margin.
    code, dec = setup633
    base = 1e-3
    s_stats = average_lifetime(
        code, dec, NoiseParams(1e-2, base, base), 2_000, 100_000, master_seed=63, workers=4
    )
    u_stats = average_lifetime(
        code, dec, NoiseParams.uniform(base), 2_000, 100_000, master_seed=64, workers=4
    )
    assert u_stats.mean - s_stats.mean > 3 * math.hypot(s_stats.stderr, u_stats.stderr)


# Analytic-bound comparison ------------------------------------------------------


def test_prop1_empirical_below_bound(setup633):
    code, dec = setup633
    noise = NoiseParams.uniform(2e-3)
    empirical, bound = prop1_empirical_check(
        code, dec, noise, n_rounds=20, trials=4_000, master_seed=9, workers=4
    )
    assert empirical <= bound
    assert bound > 0


def test_prop1_check_requires_uniform_noise(setup633):
    code, dec = setup633
    with pytest.raises(ValueError, match="uniform"):
        prop1_empirical_check(code, dec, NoiseParams(0.1, 0.2, 0.1), 5, 10, 0)


# Pseudo-threshold ----------------------------------------------------------------


def test_pseudo_threshold_smoke(setup633):
    code, dec = setup633
    res = pseudo_threshold(
        code,
        dec,
        trials=400,
        master_seed=303,
        p_lo=2e-4,
        p_hi=2e-2,
        iterations=4,
        workers=4,
    )
    assert res.crossing_found
    assert 1e-4 < res.p_th < 1e-2
    assert res.bracket[0] <= res.p_th <= res.bracket[1]


def test_pseudo_threshold_no_crossing(setup633):
    code, dec = setup633
    res = pseudo_threshold(
        code, dec, trials=100, master_seed=1, p_lo=1e-4, p_hi=2e-4, iterations=2
    )
    assert not res.crossing_found
    assert res.p_th is None


def test_pseudo_threshold_validates_bracket(setup633):
    code, dec = setup633
    with pytest.raises(ValueError):
        pseudo_threshold(code, dec, 10, 0, p_lo=0.0, p_hi=0.1)
