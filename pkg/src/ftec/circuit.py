"""Circuit-level error model: measurement schedules, outcomes, accumulated
errors, the sequential Tanner graph and its cluster decomposition.

Vertex layout for a schedule with n_D data bits and n_M checks:
  data vertex (level i, column j)  -> index i * n_D + j        (0 <= i <= n_M)
  outcome vertex for check i       -> index (n_M + 1) * n_D + i - 1   (1 <= i <= n_M)
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

from .gf2 import BitMatrix, DimensionError, dot, in_row_space, support, weight


@dataclass(frozen=True)
class MeasurementSchedule:
    """Ordered sequence of parity checks drawn from the row space of H_D."""

    h_d: BitMatrix
    checks: Tuple[int, ...]
    origin: Optional[BitMatrix] = None  # generator matrix G_M, k_M x n_M

    def __post_init__(self):
        object.__setattr__(self, "checks", tuple(self.checks))
        for i, c in enumerate(self.checks):
            if c >> self.n_d:
                raise DimensionError(f"check {i + 1} does not fit in {self.n_d} columns")
            if not in_row_space(c, self.h_d.rows, self.n_d):
                raise ValueError(
                    f"check {i + 1} is not a linear combination of the rows of H_D"
                )
        if self.origin is not None:
            if self.origin.nrows != self.h_d.nrows:
                raise DimensionError("G_M must have k_M = r_D rows")
            if self.origin.ncols != self.n_m:
                raise DimensionError("G_M column count must equal the sequence length")
            derived = self.origin.transpose().matmul(self.h_d)
            if derived.rows != self.checks:
                raise ValueError("H_m != G_M^T H_D for the given origin matrix")

    @property
    def n_d(self) -> int:
        return self.h_d.ncols

    @property
    def n_m(self) -> int:
        return len(self.checks)

    @property
    def h_m(self) -> BitMatrix:
        return BitMatrix(self.checks, self.n_d)

    @classmethod
    def from_measurement_code(cls, h_d: BitMatrix, g_m: BitMatrix) -> "MeasurementSchedule":
        """Build the schedule H_m = G_M^T H_D from a measurement-code generator."""
        h_m = g_m.transpose().matmul(h_d)
        return cls(h_d, h_m.rows, origin=g_m)

    # Vertex indexing -----------------------------------------------------

    @property
    def num_vertices(self) -> int:
        return (self.n_d + 1) * (self.n_m + 1) - 1

    def data_vertex(self, level: int, col: int) -> int:
        return level * self.n_d + col

    def outcome_vertex(self, check: int) -> int:
        """Vertex for the outcome flip of check i (1-based)."""
        return (self.n_m + 1) * self.n_d + check - 1

    def vertex_kind(self, v: int) -> Tuple[str, int, int]:
        """Decode a vertex index to ('data', level, col) or ('outcome', check, -1)."""
        split = (self.n_m + 1) * self.n_d
        if v < split:
            return ("data", v // self.n_d, v % self.n_d)
        return ("outcome", v - split + 1, -1)


@dataclass(frozen=True)
class CircuitError:
    """A circuit error: data-flip levels e^0..e^{n_M} plus outcome flips f."""

    e: Tuple[int, ...]
    f: int

    def __post_init__(self):
        object.__setattr__(self, "e", tuple(self.e))

    @property
    def n_levels(self) -> int:
        return len(self.e)

    @property
    def weight(self) -> int:
        return sum(level.bit_count() for level in self.e) + self.f.bit_count()

    def __add__(self, other: "CircuitError") -> "CircuitError":
        if len(self.e) != len(other.e):
            raise DimensionError("circuit errors have different level counts")
        return CircuitError(
            tuple(a ^ b for a, b in zip(self.e, other.e)), self.f ^ other.f
        )

    @classmethod
    def zero(cls, sched: MeasurementSchedule) -> "CircuitError":
        return cls((0,) * (sched.n_m + 1), 0)

    def vertex_set(self, sched: MeasurementSchedule) -> Set[int]:
        """Support of the error as sequential-Tanner-graph vertex indices."""
        verts: Set[int] = set()
        for level, word in enumerate(self.e):
            for col in support(word):
                verts.add(sched.data_vertex(level, col))
        for i in support(self.f):
            verts.add(sched.outcome_vertex(i + 1))
        return verts

    @classmethod
    def from_vertex_set(cls, sched: MeasurementSchedule, verts: Set[int]) -> "CircuitError":
        e = [0] * (sched.n_m + 1)
        f = 0
        for v in verts:
            kind, a, b = sched.vertex_kind(v)
            if kind == "data":
                e[a] |= 1 << b
            else:
                f |= 1 << (a - 1)
        return cls(tuple(e), f)

    def restrict(self, sched: MeasurementSchedule, region: Set[int]) -> "CircuitError":
        """Restriction of the support to a vertex set."""
        return CircuitError.from_vertex_set(sched, self.vertex_set(sched) & region)


@dataclass(frozen=True)
class AccumulatedError:
    """Prefix-XOR of the data-flip levels: ebar^i = e^0 + ... + e^i."""

    ebar: Tuple[int, ...]
    f: int

    @property
    def residual(self) -> int:
        return self.ebar[-1]


def accumulate(eps: CircuitError) -> AccumulatedError:
    acc = 0
    ebar = []
    for level in eps.e:
        acc ^= level
        ebar.append(acc)
    return AccumulatedError(tuple(ebar), eps.f)


def residual(eps: CircuitError) -> int:
    """Residual data error pi(eps) = sum of all data-flip levels."""
    acc = 0
    for level in eps.e:
        acc ^= level
    return acc


def simulate_outcome(sched: MeasurementSchedule, eps: CircuitError, v_in: int = 0) -> int:
    """Observed outcome: m_i = <check_i, v_in + ebar^{i-1}> + f_i."""
    if len(eps.e) != sched.n_m + 1:
        raise DimensionError(
            f"error has {len(eps.e)} levels, schedule needs {sched.n_m + 1}"
        )
    if eps.f >> sched.n_m:
        raise DimensionError(f"outcome flips do not fit in {sched.n_m} bits")
    m = eps.f
    state = v_in
    for i, check in enumerate(sched.checks):
        state ^= eps.e[i]  # e^{i} occurs after measurement i; here it enters before check i+1
        if dot(check, state):
            m ^= 1 << i
    return m


def _accumulated_vertex_levels(eps: CircuitError) -> List[int]:
    """Column bitsets of the accumulated error, one per level."""
    acc = 0
    levels = []
    for level in eps.e:
        acc ^= level
        levels.append(acc)
    return levels


class _UnionFind:
    def __init__(self):
        self.parent: Dict[int, int] = {}

    def add(self, x: int) -> None:
        self.parent.setdefault(x, x)

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb


def _accumulated_components(
    sched: MeasurementSchedule, eps: CircuitError
) -> List[Tuple[List[int], int]]:
    """Connected components of the graph induced by the accumulated error.

    Returns one (column bitset per level, outcome flip bitset) pair per
    component of V(ebar), using the three edge rules of the sequential
    Tanner graph.
    """
    ebar = _accumulated_vertex_levels(eps)
    n_m = sched.n_m
    uf = _UnionFind()
    for i, cols in enumerate(ebar):
        for j in support(cols):
            uf.add(_dv(sched, i, j))
    for i in support(eps.f):
        uf.add(_ov(sched, i + 1))
    # rule (i): vertical edges
    for i in range(n_m):
        both = ebar[i] & ebar[i + 1]
        for j in support(both):
            uf.union(_dv(sched, i, j), _dv(sched, i + 1, j))
    # rules (ii) and (iii): same-level check cliques and check-to-outcome edges
    for i in range(n_m):
        check = sched.checks[i]
        cols = support(ebar[i] & check)
        for a, b in zip(cols, cols[1:]):
            uf.union(_dv(sched, i, a), _dv(sched, i, b))
        if (eps.f >> i) & 1 and cols:
            uf.union(_ov(sched, i + 1), _dv(sched, i, cols[0]))
    comps: Dict[int, Tuple[List[int], List[int]]] = {}
    for i, cols in enumerate(ebar):
        for j in support(cols):
            root = uf.find(_dv(sched, i, j))
            entry = comps.setdefault(root, ([0] * (n_m + 1), [0]))
            entry[0][i] |= 1 << j
    for i in support(eps.f):
        root = uf.find(_ov(sched, i + 1))
        entry = comps.setdefault(root, ([0] * (n_m + 1), [0]))
        entry[1][0] |= 1 << i
    return [(levels, fpart[0]) for levels, fpart in comps.values()]


def _dv(sched: MeasurementSchedule, level: int, col: int) -> int:
    return sched.data_vertex(level, col)


def _ov(sched: MeasurementSchedule, check: int) -> int:
    return sched.outcome_vertex(check)


def _deaccumulate(levels: Sequence[int], f: int) -> CircuitError:
    """Invert the prefix-XOR: e^i = ebar^i + ebar^{i-1}."""
    e = []
    prev = 0
    for cur in levels:
        e.append(cur ^ prev)
        prev = cur
    return CircuitError(tuple(e), f)


def clusters(sched: MeasurementSchedule, eps: CircuitError) -> List[CircuitError]:
    """Cluster decomposition of a circuit error.

    Components of the accumulated error's graph are de-accumulated back into
    circuit errors, so that the clusters sum to eps and each cluster's
    accumulated error is one connected component.
    """
    comps = _accumulated_components(sched, eps)
    out = [_deaccumulate(levels, f) for levels, f in comps]
    # Deterministic order: by smallest vertex index of the accumulated support.
    def comp_key(pair):
        levels, f = pair
        for i, cols in enumerate(levels):
            if cols:
                return (0, i, cols & -cols)
        return (1, f & -f, 0)

    order = sorted(range(len(comps)), key=lambda t: comp_key(comps[t]))
    return [out[t] for t in order]


def is_connected(sched: MeasurementSchedule, eps: CircuitError) -> bool:
    """Whether the accumulated error induces a single connected component."""
    if eps.weight == 0:
        return False
    return len(_accumulated_components(sched, eps)) == 1


def accumulated_levels_connect(
    checks: Sequence[int], levels: Sequence[int]
) -> bool:
    """True when the induced graph on the accumulated data support has a path
    from a level-0 vertex to a last-level vertex.

    ``levels`` holds one column bitset per level 0..n_M; ``checks[i]`` is the
    support of check i+1, supplying the same-level clique edges at level i.
    """
    n_m = len(checks)
    if levels[0] == 0 or levels[n_m] == 0:
        return False
    # Breadth-first search over (level, column-bitset) reach sets, allowing
    # upward and downward moves; iterate to a fixed point.
    reach = [0] * (n_m + 1)
    reach[0] = levels[0]
    changed = True
    while changed:
        changed = False
        for i in range(n_m + 1):
            r = reach[i]
            if not r:
                continue
            if i < n_m and (r & checks[i]):
                grown = r | (levels[i] & checks[i])
                if grown != r:
                    reach[i] = r = grown
                    changed = True
            if i + 1 <= n_m:
                down = r & levels[i + 1]
                if down & ~reach[i + 1]:
                    reach[i + 1] |= down
                    changed = True
            if i > 0:
                up = r & levels[i - 1]
                if up & ~reach[i - 1]:
                    reach[i - 1] |= up
                    changed = True
        if reach[n_m]:
            return True
    return bool(reach[n_m])
