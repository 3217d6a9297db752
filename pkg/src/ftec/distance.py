"""Propagating errors, exact circuit distance, truncation regions and the
analytic bounds on lifetime and on random-schedule quality."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

import numpy as np

from .circuit import (
    AccumulatedError,
    CircuitError,
    MeasurementSchedule,
    _accumulated_components,
    _accumulated_vertex_levels,
    accumulate,
    accumulated_levels_connect,
    simulate_outcome,
)
from .gf2 import BitMatrix, kernel_basis, parity, support, weight


class SearchBudgetError(RuntimeError):
    """Raised when an enumeration exceeds its candidate budget."""

    def __init__(self, message: str, candidates_examined: int):
        super().__init__(message)
        self.candidates_examined = candidates_examined


@dataclass(frozen=True)
class Region:
    """A set of sequential-Tanner-graph vertices."""

    vertices: FrozenSet[int]
    kind: str = "custom"

    def __contains__(self, v: int) -> bool:
        return v in self.vertices

    def complement(self, sched: MeasurementSchedule, kind: str = "custom") -> "Region":
        universe = range(sched.num_vertices)
        return Region(frozenset(v for v in universe if v not in self.vertices), kind)


def input_region(sched: MeasurementSchedule) -> Region:
    return Region(
        frozenset(sched.data_vertex(0, j) for j in range(sched.n_d)), "V_in"
    )


def output_region(sched: MeasurementSchedule) -> Region:
    return Region(
        frozenset(sched.data_vertex(sched.n_m, j) for j in range(sched.n_d)), "V_out"
    )


@dataclass
class DistanceReport:
    """Result of a circuit-distance search."""

    d_circ: Optional[int]
    witness: Optional[CircuitError]
    candidates_examined: int
    elapsed: float
    complete: bool
    search_bound: int  # exhaustive exclusion certified for weights < this

    def __str__(self) -> str:
        if self.d_circ is None:
            head = f"d_circ > {self.search_bound - 1} (no propagating error found)"
        else:
            head = f"d_circ = {self.d_circ}"
        state = "complete" if self.complete else "INCOMPLETE"
        return (
            f"{head} [{state}; {self.candidates_examined} candidates, "
            f"{self.elapsed:.3f}s]"
        )


def is_propagating(sched: MeasurementSchedule, eps: CircuitError) -> bool:
    """True iff the outcome is trivial and the accumulated support connects
    the input and output vertex rows."""
    if simulate_outcome(sched, eps) != 0:
        return False
    levels = _accumulated_vertex_levels(eps)
    return accumulated_levels_connect(sched.checks, levels)


def _forced_f_prefix_table(sched: MeasurementSchedule) -> List[List[int]]:
    """P[v][l] = number of checks among 1..l whose parity with v is odd.

    This is the outcome-flip weight forced on an error whose accumulated
    value stays at v across those levels.
    """
    n_d, n_m = sched.n_d, sched.n_m
    size = 1 << n_d
    idx = np.arange(size, dtype=np.uint32)
    table = np.zeros((size, n_m + 1), dtype=np.uint16)
    for l, check in enumerate(sched.checks, start=1):
        x = idx & np.uint32(check)
        x ^= x >> 16
        x ^= x >> 8
        x ^= x >> 4
        x ^= x >> 2
        x ^= x >> 1
        table[:, l] = table[:, l - 1] + (x & 1).astype(np.uint16)
    return table.tolist()


def _subsets_by_weight(n: int, max_w: int) -> List[List[int]]:
    out: List[List[int]] = [[0]]
    for w in range(1, max_w + 1):
        masks = []
        for supp in combinations(range(n), w):
            m = 0
            for j in supp:
                m |= 1 << j
            masks.append(m)
        out.append(masks)
    return out


def _min_weight_codeword(h_d: BitMatrix) -> int:
    """Minimum-weight nonzero vector in the kernel of H_D."""
    basis = kernel_basis(h_d.rows, h_d.ncols)
    best = None
    word = 0
    prev = 0
    for i in range(1, 1 << len(basis)):
        gray = i ^ (i >> 1)
        word ^= basis[(gray ^ prev).bit_length() - 1]
        prev = gray
        if best is None or word.bit_count() < best.bit_count():
            best = word
    if best is None:
        raise ValueError("H_D has trivial kernel; no codewords to propagate")
    return best


def _witness_from_flips(
    sched: MeasurementSchedule, flips: Sequence[Tuple[int, int]]
) -> CircuitError:
    """Assemble the circuit error with the given data flips and forced f."""
    n_m = sched.n_m
    e = [0] * (n_m + 1)
    for level, mask in flips:
        e[level] ^= mask
    eps0 = CircuitError(tuple(e), 0)
    f = simulate_outcome(sched, eps0)
    return CircuitError(tuple(e), f)


def _propagating_search(
    sched: MeasurementSchedule,
    bound: int,
    seed_flips: Optional[List[Tuple[int, int]]],
    time_budget: Optional[float],
    t0: float,
):
    """Branch-and-bound over data-flip patterns with forced outcome flips.

    Finds the minimum-weight propagating error of weight < bound (or below
    the seed's weight when seed_flips is given). Returns
    (best, best_flips, examined, complete).
    """
    n_d, n_m = sched.n_d, sched.n_m
    checks = sched.checks
    prefix = _forced_f_prefix_table(sched)
    subsets = _subsets_by_weight(n_d, max(0, bound - 1))
    examined = 0
    complete = True
    best = bound
    best_flips = list(seed_flips) if seed_flips is not None else None
    flips: List[Tuple[int, int]] = []

    def propagation_check() -> bool:
        levels = [0] * (n_m + 1)
        acc = 0
        pos = 0
        for lv, mask in flips:
            for l in range(pos, lv):
                levels[l] = acc
            acc ^= mask
            pos = lv
        for l in range(pos, n_m + 1):
            levels[l] = acc
        return accumulated_levels_connect(checks, levels)

    def rec(level: int, ebar: int, w: int) -> None:
        nonlocal best, best_flips, examined, complete
        examined += 1
        if time_budget is not None and examined % 4096 == 0:
            if time.monotonic() - t0 > time_budget:
                complete = False
                raise TimeoutError
        row = prefix[ebar]
        # Option: no further data flips; pay the remaining forced f weight.
        total = w + row[n_m] - row[level]
        if total < best and propagation_check():
            best = total
            best_flips = list(flips)
        # Option: place the next data flip at a later level.
        for l2 in range(level + 1, n_m + 1):
            travel = row[l2] - row[level]
            w2 = w + travel
            if w2 + 1 >= best:
                break  # travel is nondecreasing in l2
            for ew in range(1, best - w2):
                for mask in subsets[ew]:
                    nb = ebar ^ mask
                    if nb == 0 or (ebar & nb) == 0:
                        continue  # no vertical edge could cross this boundary
                    flips.append((l2, mask))
                    rec(l2, nb, w2 + ew)
                    flips.pop()

    try:
        for ew in range(1, best):
            for mask in subsets[ew]:
                flips.append((0, mask))
                rec(0, mask, ew)
                flips.pop()
    except TimeoutError:
        pass
    return best, best_flips, examined, complete


def circuit_distance(
    sched: MeasurementSchedule,
    d_d: int,
    time_budget: Optional[float] = None,
) -> DistanceReport:
    """Exact circuit distance with a minimum-weight propagating witness.

    A minimum-weight codeword taken as a pure input error gives the starting
    upper bound d_D; the branch-and-bound then either certifies exclusion of
    lighter propagating errors or improves the witness.
    """
    if d_d < 1:
        raise ValueError("d_d must be >= 1")
    t0 = time.monotonic()
    codeword = _min_weight_codeword(sched.h_d)
    if codeword.bit_count() != d_d:
        raise ValueError(
            f"d_d = {d_d} does not match the data-code distance "
            f"{codeword.bit_count()}"
        )
    best, best_flips, examined, complete = _propagating_search(
        sched, d_d, [(0, codeword)], time_budget, t0
    )
    witness = _witness_from_flips(sched, best_flips)
    assert witness.weight == best
    assert is_propagating(sched, witness)
    return DistanceReport(
        d_circ=best,
        witness=witness,
        candidates_examined=examined,
        elapsed=time.monotonic() - t0,
        complete=complete,
        search_bound=best,
    )


def exclude_propagating_below(
    sched: MeasurementSchedule,
    bound: int,
    time_budget: Optional[float] = None,
) -> DistanceReport:
    """Search for a propagating error of weight < bound.

    Returns a report with d_circ=None when none exists (exclusion certified);
    otherwise d_circ is the minimum propagating weight below the bound. Used
    by the randomized schedule search, where only the comparison with d_D
    matters.
    """
    t0 = time.monotonic()
    best, best_flips, examined, complete = _propagating_search(
        sched, bound, None, time_budget, t0
    )
    witness = None
    if best_flips is not None:
        witness = _witness_from_flips(sched, best_flips)
        assert is_propagating(sched, witness)
    return DistanceReport(
        d_circ=None if witness is None else best,
        witness=witness,
        candidates_examined=examined,
        elapsed=time.monotonic() - t0,
        complete=complete,
        search_bound=bound if witness is None else best,
    )


def enumerate_errors(
    sched: MeasurementSchedule,
    max_weight: int,
    max_candidates: Optional[int] = None,
):
    """Yield every circuit error with 1 <= weight <= max_weight.

    Positions are the sequential-Tanner-graph vertex indices in canonical
    order; supports are produced in lexicographic order per weight class.
    """
    n = sched.num_vertices
    count = 0
    for w in range(1, max_weight + 1):
        for supp in combinations(range(n), w):
            count += 1
            if max_candidates is not None and count > max_candidates:
                raise SearchBudgetError(
                    f"error enumeration exceeded {max_candidates} candidates",
                    count,
                )
            yield CircuitError.from_vertex_set(sched, set(supp))


def _trivial_outcome_errors(
    sched: MeasurementSchedule,
    max_weight: int,
    max_candidates: Optional[int],
):
    """Yield every circuit error with trivial outcome and weight <= max_weight.

    The data-flip pattern determines the outcome flips (f_i is the parity of
    check i against the accumulated error), so only data supports are
    enumerated; patterns whose total weight exceeds the cap are dropped.
    """
    n = (sched.n_m + 1) * sched.n_d
    count = 0
    for w in range(1, max_weight + 1):
        for supp in combinations(range(n), w):
            count += 1
            if max_candidates is not None and count > max_candidates:
                raise SearchBudgetError(
                    f"region enumeration exceeded {max_candidates} candidates",
                    count,
                )
            e = [0] * (sched.n_m + 1)
            for v in supp:
                e[v // sched.n_d] |= 1 << (v % sched.n_d)
            base = CircuitError(tuple(e), 0)
            f = simulate_outcome(sched, base)
            if w + f.bit_count() <= max_weight:
                yield CircuitError(tuple(e), f)


def compute_regions(
    sched: MeasurementSchedule,
    d_d: int,
    max_candidates: Optional[int] = 5_000_000,
) -> Tuple[Region, Region]:
    """The truncation regions S_in and S_out.

    S_in gathers the supports of every connected, outcome-trivial circuit
    error of weight up to d_D - 1 that touches an input vertex; S_out those
    whose accumulated support touches an output vertex. Connectivity is read
    on the accumulated error's graph; outcome-flip positions participate in
    the supports.
    """
    if d_d < 1:
        raise ValueError("d_d must be >= 1")
    s_in: Set[int] = set()
    s_out: Set[int] = set()
    for eps in _trivial_outcome_errors(sched, d_d - 1, max_candidates):
        comps = _accumulated_components(sched, eps)
        if len(comps) != 1:
            continue
        verts = eps.vertex_set(sched)
        if eps.e[0] != 0:
            s_in |= verts
        acc = accumulate(eps)
        if acc.ebar[-1] != 0:
            s_out |= verts
    return Region(frozenset(s_in), "S_in"), Region(frozenset(s_out), "S_out")


@dataclass(frozen=True)
class PreconditionReport:
    """Outcome of the truncation-region overlap test."""

    ok: bool
    v_in_clear: bool  # V_in does not meet S_out (equivalent to d_circ = d_D)
    overlap: FrozenSet[int]
    s_in: Region
    s_out: Region

    def __bool__(self) -> bool:
        return self.ok


def ft_precondition(
    sched: MeasurementSchedule,
    d_d: int,
    max_candidates: Optional[int] = 5_000_000,
) -> PreconditionReport:
    """Check (V_in + S_in) does not meet S_out."""
    s_in, s_out = compute_regions(sched, d_d, max_candidates)
    v_in = input_region(sched).vertices
    overlap = (v_in | s_in.vertices) & s_out.vertices
    return PreconditionReport(
        ok=not overlap,
        v_in_clear=not (v_in & s_out.vertices),
        overlap=frozenset(overlap),
        s_in=s_in,
        s_out=s_out,
    )


def repeat_schedule(sched: MeasurementSchedule, times: int) -> MeasurementSchedule:
    """Concatenate the check sequence `times` times."""
    if times < 1:
        raise ValueError("times must be >= 1")
    origin = None
    if sched.origin is not None:
        rows = tuple(
            _repeat_word(row, sched.n_m, times) for row in sched.origin.rows
        )
        origin = BitMatrix(rows, sched.n_m * times)
    return MeasurementSchedule(sched.h_d, sched.checks * times, origin=origin)


def _repeat_word(word: int, length: int, times: int) -> int:
    out = 0
    for t in range(times):
        out |= word << (t * length)
    return out


def dcirc_upper_bound(d_d: int, n_d: int, d_m: int) -> int:
    """min(d_D, n_D + d_M)."""
    return min(d_d, n_d + d_m)


def _log_binomial(n: int, k: int) -> float:
    if k < 0 or k > n:
        return -math.inf
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def prop1_bound(
    n_d: int, n_m: int, d_d: int, p: float, n_rounds: int
) -> float:
    """Upper bound on P(lifetime < n_rounds): N * C(m, s) * p^s.

    Here m = 2 n_M + 2 n_D n_M + n_D counts flip sites over two consecutive
    rounds and s = (d_D + 1) / 2, rounded up when d_D is even.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    if p == 0.0:
        return 0.0
    s = d_d // 2 + 1
    m = 2 * n_m + 2 * n_d * n_m + n_d
    log_val = math.log(n_rounds) + _log_binomial(m, s) + s * math.log(p)
    return math.exp(log_val)


def thm2_expectation_bound(n_d: int, n_m: int, d_d: int) -> float:
    """Expected number of low-weight propagating errors for a random
    schedule: d_D * C(n_D n_M, d_D) * 2^(-n_M), computed in log space."""
    if min(n_d, n_m, d_d) < 1:
        raise ValueError("all arguments must be positive")
    log_val = (
        math.log(d_d)
        + _log_binomial(n_d * n_m, d_d)
        - n_m * math.log(2.0)
    )
    return math.exp(log_val)
