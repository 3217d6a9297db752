"""Monte-Carlo estimation of storage lifetime under circuit-level noise.

A stored word alternates between a passive storage round (iid bit flips with
probability p_s) and a measurement cycle in which measured bits flip with
probability p_m (restricted to each check's support), and outcomes flip with
probability p_f. After each cycle the decoder's correction is applied and the
information-loss test asks whether 0 is still the unique closest codeword.

Trials are replayable: trial t uses the stream seeded by
(master_seed, spawn_key=(t,)), so statistics are independent of scheduling
and worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from .circuit import CircuitError, MeasurementSchedule, residual, simulate_outcome
from .decoder import TruncatedDecoder
from .gf2 import CosetTable, LinearCode, build_coset_table, dot, support, syndrome

LOSS_WRONG_CODEWORD = "wrong-codeword"
LOSS_TIE = "tie-ambiguous"
CENSORED = "censored-at-t_max"


@dataclass(frozen=True)
class NoiseParams:
    """Per-site flip probabilities of the storage noise model."""

    p_s: float  # storage flip, per data bit per storage round
    p_m: float  # internal flip, per measured bit per check
    p_f: float  # outcome flip, per check

    def __post_init__(self):
        for name in ("p_s", "p_m", "p_f"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} = {p} outside [0, 1]")

    @classmethod
    def uniform(cls, p: float) -> "NoiseParams":
        return cls(p, p, p)


@dataclass
class TrialResult:
    """One storage trial: first loss round and rectangle-method bookkeeping."""

    lifetime: int
    loss_mode: str
    rectangle_violations: int
    first_violation_round: Optional[int] = None


@dataclass
class LifetimeStats:
    """Aggregated lifetime statistics with the parameters echoed."""

    mean: float
    stderr: float
    trials: int
    censored: int
    noise: NoiseParams
    t_max: int
    master_seed: int


def sample_cycle(
    sched: MeasurementSchedule,
    noise: NoiseParams,
    rng: np.random.Generator,
    v_in: int = 0,
) -> Tuple[CircuitError, int]:
    """Sample one storage round plus measurement cycle.

    The storage flips form e^0; outcome i is computed from the state before
    e^i (internal errors occur after their measurement) and flipped with
    probability p_f; e^i is then drawn on the support of check i only.
    """
    n_d, n_m = sched.n_d, sched.n_m
    e = [0] * (n_m + 1)
    e[0] = _bernoulli_mask(rng, noise.p_s, n_d)
    f = 0
    m = 0
    state = v_in ^ e[0]
    for i, check in enumerate(sched.checks):
        bit = dot(check, state)
        if noise.p_f > 0 and rng.random() < noise.p_f:
            bit ^= 1
            f |= 1 << i
        if bit:
            m |= 1 << i
        if noise.p_m > 0:
            flips = 0
            for j in support(check):
                if rng.random() < noise.p_m:
                    flips |= 1 << j
            e[i + 1] = flips
            state ^= flips
    return CircuitError(tuple(e), f), m


def _bernoulli_mask(rng: np.random.Generator, p: float, n: int) -> int:
    if p <= 0.0:
        return 0
    mask = 0
    for j in range(n):
        if rng.random() < p:
            mask |= 1 << j
    return mask


def _measured_sites(sched: MeasurementSchedule) -> List[Tuple[int, int]]:
    """Flattened (check index, data column) list of internal-flip sites."""
    sites = []
    for i, check in enumerate(sched.checks):
        for j in support(check):
            sites.append((i, j))
    return sites


def unencoded_baseline(p_s: float) -> float:
    """Expected lifetime 1/p_s of a single unencoded bit."""
    if not 0.0 < p_s <= 1.0:
        raise ValueError("p_s must lie in (0, 1]")
    return 1.0 / p_s


class _NoiselessDynamics:
    """Deterministic round map v -> v + correction(outcome(v)), memoized.

    For each state it records whether the orbit stays intact forever (reaches
    an intact fixed point or cycle), so runs of noise-free rounds can be
    skipped in one step.
    """

    def __init__(self, sched: MeasurementSchedule, dec: TruncatedDecoder, coset: CosetTable):
        self.sched = sched
        self.dec = dec
        self.coset = coset
        self._step: Dict[int, int] = {}
        self._safe: Dict[int, bool] = {}

    def outcome(self, v: int) -> int:
        m = 0
        for i, check in enumerate(self.sched.checks):
            if dot(check, v):
                m |= 1 << i
        return m

    def intact(self, v: int) -> bool:
        s = syndrome(self.coset.H, v)
        return self.coset.leader(s) == v and not self.coset.tie(s)

    def step(self, v: int) -> int:
        nxt = self._step.get(v)
        if nxt is None:
            nxt = v ^ self.dec.decode(self.outcome(v))
            self._step[v] = nxt
        return nxt

    def forever_safe(self, v: int) -> bool:
        """Whether every state on the orbit of v is intact."""
        cached = self._safe.get(v)
        if cached is not None:
            return cached
        orbit = []
        cur = v
        seen = set()
        safe = True
        while cur not in seen:
            seen.add(cur)
            orbit.append(cur)
            if not self.intact(cur):
                safe = False
                break
            cur = self.step(cur)
        if cur in self._safe:
            safe = safe and self._safe[cur]
        for state in orbit:
            self._safe[state] = safe
        return safe


def run_trial(
    code_d: LinearCode,
    dec: TruncatedDecoder,
    noise: NoiseParams,
    t_max: int,
    rng: np.random.Generator,
    coset: Optional[CosetTable] = None,
    dynamics: Optional[_NoiselessDynamics] = None,
) -> TrialResult:
    """Simulate storage rounds until loss of information or t_max.

    Noise-free stretches are skipped by drawing geometric gaps over the
    per-round flip sites of each noise type and fast-forwarding the
    deterministic correction dynamics in between.
    """
    sched = dec.sched
    if coset is None:
        coset = build_coset_table(code_d.H)
    if dynamics is None:
        dynamics = _NoiselessDynamics(sched, dec, coset)
    rho = (code_d.d - 1) // 2 if code_d.d is not None else 0
    sites_m = _measured_sites(sched)
    streams = [
        _SiteStream(noise.p_s, sched.n_d, rng),
        _SiteStream(noise.p_f, sched.n_m, rng),
        _SiteStream(noise.p_m, len(sites_m), rng),
    ]
    v = 0
    prev_internal = 0  # |eps(t-1)| - |e^0(t-1)| of the previous round
    violations = 0
    first_violation = None
    t = 1
    while t <= t_max:
        next_noisy = min(s.next_round() for s in streams)
        if next_noisy > t:
            # Noise-free rounds t .. min(next_noisy, t_max+1) - 1.
            stop = min(next_noisy, t_max + 1)
            if prev_internal > rho:
                violations += 1
                if first_violation is None:
                    first_violation = t
            prev_internal = 0
            if dynamics.forever_safe(v):
                while t < stop:
                    nxt = dynamics.step(v)
                    if nxt == v:
                        t = stop
                        break
                    v = nxt
                    t += 1
                if t > t_max:
                    break
                continue
            # Orbit hits a lost state: walk round by round.
            while t < stop:
                v = dynamics.step(v)
                mode = _loss_mode(coset, v)
                if mode is not None:
                    return TrialResult(t, mode, violations, first_violation)
                t += 1
            continue
        # Noisy round t: collect this round's flips from each stream.
        e0 = 0
        for j in streams[0].flips_in_round(t):
            e0 |= 1 << j
        f = 0
        for i in streams[1].flips_in_round(t):
            f |= 1 << i
        internal = [0] * sched.n_m
        for k in streams[2].flips_in_round(t):
            ci, col = sites_m[k]
            internal[ci] |= 1 << col
        e = (e0,) + tuple(internal)
        eps = CircuitError(e, f)
        m = simulate_outcome(sched, eps, v_in=v)
        v = v ^ residual(eps) ^ dec.decode(m)
        if prev_internal + eps.weight > rho:
            violations += 1
            if first_violation is None:
                first_violation = t
        prev_internal = eps.weight - e0.bit_count()
        mode = _loss_mode(coset, v)
        if mode is not None:
            return TrialResult(t, mode, violations, first_violation)
        t += 1
    return TrialResult(t_max, CENSORED, violations, first_violation)


def _loss_mode(coset: CosetTable, v: int) -> Optional[str]:
    s = syndrome(coset.H, v)
    if coset.tie(s):
        return LOSS_TIE
    if coset.leader(s) != v:
        return LOSS_WRONG_CODEWORD
    return None


class _SiteStream:
    """Global Bernoulli site sequence with geometric gap skipping.

    Sites are numbered consecutively round by round; the stream reports the
    round of its next flip and enumerates the flips inside a given round.
    """

    def __init__(self, p: float, sites_per_round: int, rng: np.random.Generator):
        self.p = p
        self.n = max(sites_per_round, 1)
        self.active = p > 0.0 and sites_per_round > 0
        self.rng = rng
        self.pos = -1  # global index of the most recent flip
        if self.active:
            self._advance()

    def _advance(self) -> None:
        if self.p >= 1.0:
            self.pos += 1
            return
        u = self.rng.random()
        gap = int(math.floor(math.log1p(-u) / math.log1p(-self.p)))
        self.pos += 1 + gap

    def next_round(self) -> int:
        if not self.active:
            return 1 << 62
        return self.pos // self.n + 1  # rounds are 1-based

    def flips_in_round(self, t: int) -> List[int]:
        out = []
        if not self.active:
            return out
        lo, hi = (t - 1) * self.n, t * self.n
        while lo <= self.pos < hi:
            out.append(self.pos - lo)
            self._advance()
        return out


def _trial_rng(master_seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=(trial,)))


def _run_chunk(args) -> List[Tuple[int, str]]:
    code_d, dec, noise, t_max, master_seed, lo, hi = args
    coset = build_coset_table(code_d.H)
    dynamics = _NoiselessDynamics(dec.sched, dec, coset)
    out = []
    for trial in range(lo, hi):
        res = run_trial(
            code_d, dec, noise, t_max, _trial_rng(master_seed, trial), coset, dynamics
        )
        out.append((res.lifetime, res.loss_mode))
    return out


def average_lifetime(
    code_d: LinearCode,
    dec: TruncatedDecoder,
    noise: NoiseParams,
    trials: int,
    t_max: int,
    master_seed: int,
    workers: int = 1,
) -> LifetimeStats:
    """Mean lifetime with standard error; censored trials count at t_max."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    results: List[Tuple[int, str]] = []
    if workers <= 1:
        results = _run_chunk((code_d, dec, noise, t_max, master_seed, 0, trials))
    else:
        bounds = np.linspace(0, trials, workers + 1, dtype=int)
        chunks = [
            (code_d, dec, noise, t_max, master_seed, int(lo), int(hi))
            for lo, hi in zip(bounds, bounds[1:])
            if hi > lo
        ]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_run_chunk, chunks):
                results.extend(part)
    lifetimes = np.array([r[0] for r in results], dtype=float)
    censored = sum(1 for r in results if r[1] == CENSORED)
    mean = float(lifetimes.mean())
    stderr = float(lifetimes.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    return LifetimeStats(mean, stderr, trials, censored, noise, t_max, master_seed)


@dataclass
class ThresholdResult:
    """Bisection estimate of the pseudo-threshold."""

    p_th: Optional[float]
    bracket: Tuple[float, float]
    evaluations: List[Tuple[float, float, float]]  # (p, mean lifetime, stderr)
    crossing_found: bool


def pseudo_threshold(
    code_d: LinearCode,
    dec: TruncatedDecoder,
    trials: int,
    master_seed: int,
    p_lo: float,
    p_hi: float,
    iterations: int = 8,
    workers: int = 1,
    t_max: Optional[int] = None,
) -> ThresholdResult:
    """Locate the crossing of the encoded mean lifetime with 1/p.

    Uniform noise p on all three mechanisms; g(p) = mean lifetime - 1/p is
    bisected with fresh trial streams per evaluation. The horizon defaults to
    about thirty unencoded lifetimes so that censoring never hides the sign.
    """
    if not 0.0 < p_lo <= p_hi <= 1.0:
        raise ValueError("need 0 < p_lo <= p_hi <= 1")
    evals: List[Tuple[float, float, float]] = []
    eval_index = 0

    def g(p: float) -> float:
        nonlocal eval_index
        horizon = t_max if t_max is not None else max(100, int(30.0 / p))
        stats = average_lifetime(
            code_d,
            dec,
            NoiseParams.uniform(p),
            trials,
            horizon,
            master_seed + eval_index,
            workers=workers,
        )
        eval_index += 1
        evals.append((p, stats.mean, stats.stderr))
        return stats.mean - 1.0 / p

    g_lo = g(p_lo)
    if p_lo == p_hi:
        return ThresholdResult(None, (p_lo, p_hi), evals, False)
    g_hi = g(p_hi)
    if g_lo * g_hi > 0:
        return ThresholdResult(None, (p_lo, p_hi), evals, False)
    lo, hi = p_lo, p_hi
    for _ in range(iterations):
        mid = math.sqrt(lo * hi)  # geometric midpoint: p spans decades
        if g(mid) * g_lo > 0:
            lo = mid
        else:
            hi = mid
    return ThresholdResult(math.sqrt(lo * hi), (lo, hi), evals, True)


def prop1_empirical_check(
    code_d: LinearCode,
    dec: TruncatedDecoder,
    noise: NoiseParams,
    n_rounds: int,
    trials: int,
    master_seed: int,
    workers: int = 1,
) -> Tuple[float, float]:
    """Empirical P(lifetime < n_rounds) next to the analytic bound."""
    from .distance import prop1_bound

    if not (noise.p_s == noise.p_m == noise.p_f):
        raise ValueError("the analytic bound assumes uniform noise")
    if code_d.d is None:
        raise ValueError("code_d must carry its distance")
    stats_results = _collect(code_d, dec, noise, n_rounds, trials, master_seed, workers)
    early = sum(1 for life, mode in stats_results if mode != CENSORED and life < n_rounds)
    empirical = early / trials
    bound = prop1_bound(dec.sched.n_d, dec.sched.n_m, code_d.d, noise.p_s, n_rounds)
    return empirical, bound


def _collect(code_d, dec, noise, t_max, trials, master_seed, workers):
    if workers <= 1:
        return _run_chunk((code_d, dec, noise, t_max, master_seed, 0, trials))
    bounds = np.linspace(0, trials, workers + 1, dtype=int)
    chunks = [
        (code_d, dec, noise, t_max, master_seed, int(lo), int(hi))
        for lo, hi in zip(bounds, bounds[1:])
        if hi > lo
    ]
    out = []
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for part in pool.map(_run_chunk, chunks):
            out.extend(part)
    return out
