"""Truncated minimum-weight-error decoding: per-outcome coset leaders over
circuit errors, truncation to the early region, and the exhaustive
fault-tolerance verifier."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .circuit import CircuitError, MeasurementSchedule, clusters, residual, simulate_outcome
from .distance import (
    PreconditionReport,
    Region,
    enumerate_errors,
    ft_precondition,
)
from .gf2 import DimensionError, TableSizeError, support, word_to_string

OUTCOME_TABLE_MAX_CHECKS = 24


@dataclass(frozen=True)
class _Generator:
    """A single-position circuit error: its vertex, outcome and residual."""

    vertex: int
    outcome: int
    residual_bit: int  # 0 for outcome flips


def _generators(sched: MeasurementSchedule) -> List[_Generator]:
    """Single-position generators in canonical vertex order."""
    gens = []
    for level in range(sched.n_m + 1):
        for col in range(sched.n_d):
            outcome = 0
            for i in range(level + 1, sched.n_m + 1):
                if (sched.checks[i - 1] >> col) & 1:
                    outcome |= 1 << (i - 1)
            gens.append(
                _Generator(sched.data_vertex(level, col), outcome, 1 << col)
            )
    for i in range(1, sched.n_m + 1):
        gens.append(_Generator(sched.outcome_vertex(i), 1 << (i - 1), 0))
    return gens


@dataclass(frozen=True)
class OutcomeTable:
    """Minimum-weight circuit-error leaders for every outcome."""

    sched: MeasurementSchedule
    weights: Tuple[int, ...]
    pred_outcome: Tuple[int, ...]
    pred_generator: Tuple[int, ...]

    def leader_weight(self, m: int) -> int:
        return self.weights[m]

    def leader_vertices(self, m: int) -> Set[int]:
        gens = _generators(self.sched)
        verts: Set[int] = set()
        while m:
            g = gens[self.pred_generator[m]]
            verts.add(g.vertex)
            m = self.pred_outcome[m]
        return verts

    def leader(self, m: int) -> CircuitError:
        """Reconstruct the canonical minimum-weight error for an outcome."""
        return CircuitError.from_vertex_set(self.sched, self.leader_vertices(m))


def build_outcome_table(
    sched: MeasurementSchedule, max_checks: int = OUTCOME_TABLE_MAX_CHECKS
) -> OutcomeTable:
    """Breadth-first fill of the outcome space with single-position
    generators, tried in canonical vertex order.

    The outcome map is linear in the circuit error, so the BFS distance from
    the zero outcome is the minimum leader weight, and the predecessor chain
    reconstructs a canonical leader.
    """
    n_m = sched.n_m
    if n_m > max_checks:
        raise TableSizeError(
            f"{n_m} measurements exceed the outcome-table cap of {max_checks}"
        )
    size = 1 << n_m
    gens = _generators(sched)
    weights = [-1] * size
    pred_outcome = [0] * size
    pred_generator = [-1] * size
    weights[0] = 0
    queue = deque([0])
    filled = 1
    while queue and filled < size:
        m = queue.popleft()
        for gi, g in enumerate(gens):
            nm = m ^ g.outcome
            if weights[nm] < 0:
                weights[nm] = weights[m] + 1
                pred_outcome[nm] = m
                pred_generator[nm] = gi
                filled += 1
                queue.append(nm)
    if filled < size:
        raise ValueError("outcome space not fully reachable; degenerate schedule")
    return OutcomeTable(sched, tuple(weights), tuple(pred_outcome), tuple(pred_generator))


@dataclass(frozen=True)
class TruncatedDecoder:
    """Constant-time decoder: outcome -> residual correction table."""

    sched: MeasurementSchedule
    region: Region  # the support A kept by the truncation
    table: Tuple[int, ...]
    precondition: Optional[PreconditionReport] = None

    def decode(self, m: int) -> int:
        if m >> self.sched.n_m:
            raise DimensionError(
                f"outcome does not fit in {self.sched.n_m} bits"
            )
        return self.table[m]


class PreconditionError(ValueError):
    """Raised when the truncation regions overlap."""

    def __init__(self, report: PreconditionReport):
        verts = sorted(report.overlap)
        super().__init__(
            f"(V_in + S_in) meets S_out at vertices {verts}; "
            "repeat the measurement sequence and retry"
        )
        self.report = report


def _correction_table(
    sched: MeasurementSchedule, outcomes: OutcomeTable, region: Region
) -> Tuple[int, ...]:
    """Residual of each leader restricted to the kept region, per outcome."""
    size = 1 << sched.n_m
    gens = _generators(sched)
    table = [0] * size
    # Predecessor chains are shorter by one at each step, so filling in
    # leader-weight order guarantees table[prev] is already final.
    order = sorted(range(1, size), key=lambda m: outcomes.weights[m])
    for m in order:
        prev = outcomes.pred_outcome[m]
        g = gens[outcomes.pred_generator[m]]
        contrib = g.residual_bit if g.vertex in region.vertices else 0
        table[m] = table[prev] ^ contrib
    return tuple(table)


def build_truncated_decoder(
    sched: MeasurementSchedule,
    d_d: int,
    force: bool = False,
    outcomes: Optional[OutcomeTable] = None,
) -> TruncatedDecoder:
    """Build the decoder truncated to the complement of S_out.

    Refuses when (V_in + S_in) meets S_out, unless force=True (the table is
    still well defined, but the fault-tolerance guarantee is void).
    """
    report = ft_precondition(sched, d_d)
    if not report.ok and not force:
        raise PreconditionError(report)
    region = report.s_out.complement(sched, "A")
    if outcomes is None:
        outcomes = build_outcome_table(sched)
    table = _correction_table(sched, outcomes, region)
    return TruncatedDecoder(sched, region, table, report)


def build_untruncated_decoder(
    sched: MeasurementSchedule, outcomes: Optional[OutcomeTable] = None
) -> TruncatedDecoder:
    """The plain MWE decoder (kept region = all vertices); not fault-tolerant."""
    region = Region(frozenset(range(sched.num_vertices)), "V")
    if outcomes is None:
        outcomes = build_outcome_table(sched)
    table = _correction_table(sched, outcomes, region)
    return TruncatedDecoder(sched, region, table, None)


@dataclass
class FaultToleranceReport:
    """Exhaustive check of the decoder against the amplification bound."""

    ok: bool
    max_weight: int
    counts_per_weight: Dict[int, int]
    counterexample: Optional[CircuitError]

    def __str__(self) -> str:
        verdict = "PASS" if self.ok else "FAIL"
        per_w = ", ".join(
            f"w={w}: {c}" for w, c in sorted(self.counts_per_weight.items())
        )
        return f"{verdict} (all weight <= {self.max_weight}; {per_w})"


def verify_fault_tolerance(
    sched: MeasurementSchedule,
    dec: TruncatedDecoder,
    d_d: int,
) -> FaultToleranceReport:
    """Enumerate every circuit error of weight <= floor((d_D-1)/2) and check
    |residual + correction| <= |error| - |input part|."""
    max_w = (d_d - 1) // 2
    counts: Dict[int, int] = {w: 0 for w in range(max_w + 1)}
    counts[0] = 1  # the zero error trivially satisfies 0 <= 0
    for eps in enumerate_errors(sched, max_w):
        w = eps.weight
        counts[w] += 1
        m = simulate_outcome(sched, eps)
        after = residual(eps) ^ dec.decode(m)
        if after.bit_count() > w - eps.e[0].bit_count():
            return FaultToleranceReport(False, max_w, counts, eps)
    return FaultToleranceReport(True, max_w, counts, None)


def write_decoder_table(dec: TruncatedDecoder) -> str:
    """Portable text export: one line per outcome,
    '<outcome bits> <residual-correction bits>'."""
    n_m, n_d = dec.sched.n_m, dec.sched.n_d
    lines = []
    for m in range(1 << n_m):
        lines.append(
            f"{word_to_string(m, n_m)} {word_to_string(dec.table[m], n_d)}"
        )
    return "\n".join(lines) + "\n"


def read_decoder_table(text: str, sched: MeasurementSchedule) -> TruncatedDecoder:
    """Parse the text export back into a lookup decoder.

    The truncation region is not stored in the file; the returned decoder
    carries an empty region marker.
    """
    from .gf2 import word_from_string

    size = 1 << sched.n_m
    table = [None] * size
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = stripped.split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected two columns")
        m = word_from_string(parts[0])
        if len(parts[0]) != sched.n_m or len(parts[1]) != sched.n_d:
            raise ValueError(f"line {lineno}: wrong field lengths")
        table[m] = word_from_string(parts[1])
    if any(entry is None for entry in table):
        raise ValueError("decoder table is missing outcomes")
    return TruncatedDecoder(sched, Region(frozenset(), "custom"), tuple(table), None)
