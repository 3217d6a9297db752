"""Circuit error model: schedules, outcomes, accumulation, clusters."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ftec import codes
from ftec.circuit import (
    AccumulatedError,
    CircuitError,
    MeasurementSchedule,
    accumulate,
    clusters,
    is_connected,
    residual,
    simulate_outcome,
)
from ftec.gf2 import BitMatrix, DimensionError, word_from_string


@pytest.fixture
def s633():
    return codes.hamming_schedule_633()


@pytest.fixture
def s532():
    return codes.hamming_schedule_532()


def _errors(sched, max_examples=None):
    strategy = st.tuples(
        st.lists(
            st.integers(min_value=0, max_value=(1 << sched.n_d) - 1),
            min_size=sched.n_m + 1,
            max_size=sched.n_m + 1,
        ),
        st.integers(min_value=0, max_value=(1 << sched.n_m) - 1),
    ).map(lambda t: CircuitError(tuple(t[0]), t[1]))
    return strategy


# Schedule construction --------------------------------------------------------


def test_schedule_dimensions(s633):
    assert s633.n_d == 7
    assert s633.n_m == 6
    assert s633.num_vertices == 8 * 7 - 1


def test_hm1_rows_from_g1(s633):
    expected = ["1010101", "0110011", "0001111", "1100110", "1011010", "0111100"]
    assert s633.h_m.to_strings() == expected


def test_hm2_rows_from_g2():
    s = codes.hamming_schedule_1035()
    expected = [
        "1010101", "0110011", "0001111", "1101001", "0111100",
        "1011010", "1101001", "0001111", "0110011", "1010101",
    ]
    assert s.h_m.to_strings() == expected


def test_schedule_rejects_non_row_space_check():
    h = codes.hamming_h()
    with pytest.raises(ValueError, match="linear combination"):
        MeasurementSchedule(h, (word_from_string("1000000"),))


def test_schedule_rejects_mismatched_origin():
    h = codes.hamming_h()
    bad = BitMatrix((0b1, 0b10, 0b100), 6)  # wrong product
    with pytest.raises(ValueError, match="G_M"):
        MeasurementSchedule(h, codes.hamming_schedule_633().checks, origin=bad)


# Vertex indexing --------------------------------------------------------------


def test_vertex_bijection(s633):
    seen = set()
    for level in range(s633.n_m + 1):
        for col in range(s633.n_d):
            v = s633.data_vertex(level, col)
            assert s633.vertex_kind(v) == ("data", level, col)
            seen.add(v)
    for i in range(1, s633.n_m + 1):
        v = s633.outcome_vertex(i)
        assert s633.vertex_kind(v) == ("outcome", i, -1)
        seen.add(v)
    assert seen == set(range(s633.num_vertices))


def test_error_vertex_round_trip(s633):
    eps = CircuitError((0b1, 0, 0b1000000, 0, 0, 0, 0b10), 0b100001)
    back = CircuitError.from_vertex_set(s633, eps.vertex_set(s633))
    assert back == eps
    assert eps.weight == len(eps.vertex_set(s633))


# Outcomes: frozen oracles -----------------------------------------------------


def test_outcome_single_pass_example():
    # Three checks of H measured once; input flip on bit 4 (0-indexed),
    # internal flip on bit 2 after the second measurement, outcome flip on
    # check 3. Observed m = 100.
    sched = codes.hamming_schedule_single_pass()
    eps = CircuitError(
        (word_from_string("0000100"), 0, word_from_string("0010000"), 0),
        word_from_string("001"),
    )
    assert simulate_outcome(sched, eps) == word_from_string("100")


def test_outcome_zero_error_is_syndrome(s532):
    v = word_from_string("0000100")
    m = simulate_outcome(s532, CircuitError.zero(s532), v_in=v)
    expected = 0
    for i, check in enumerate(s532.checks):
        if bin(check & v).count("1") % 2:
            expected |= 1 << i
    assert m == expected


def test_outcome_dimension_checks(s532):
    with pytest.raises(DimensionError):
        simulate_outcome(s532, CircuitError((0,) * 3, 0))
    with pytest.raises(DimensionError):
        simulate_outcome(s532, CircuitError((0,) * 6, 1 << 5))


def test_terminal_flip_invisible(s532):
    # e^{n_M} occurs after the last measurement: outcome is trivial.
    eps = CircuitError((0, 0, 0, 0, 0, 0b1111111), 0)
    assert simulate_outcome(s532, eps) == 0
    assert residual(eps) == 0b1111111


@given(data=st.data())
def test_outcome_linearity(data):
    sched = codes.hamming_schedule_532()
    a = data.draw(_errors(sched))
    b = data.draw(_errors(sched))
    assert simulate_outcome(sched, a + b) == simulate_outcome(sched, a) ^ simulate_outcome(sched, b)


@given(data=st.data())
def test_outcome_affine_in_input(data):
    sched = codes.hamming_schedule_532()
    eps = data.draw(_errors(sched))
    v = data.draw(st.integers(min_value=0, max_value=(1 << 7) - 1))
    base = simulate_outcome(sched, CircuitError.zero(sched), v_in=v)
    assert simulate_outcome(sched, eps, v_in=v) == simulate_outcome(sched, eps) ^ base


# Accumulation -----------------------------------------------------------------


def test_accumulate_prefix_xor():
    eps = CircuitError((0b1, 0b10, 0b1, 0), 0)
    acc = accumulate(eps)
    assert acc.ebar == (0b1, 0b11, 0b10, 0b10)
    assert acc.residual == residual(eps) == 0b10


@given(data=st.data())
def test_residual_is_last_accumulated(data):
    sched = codes.hamming_schedule_532()
    eps = data.draw(_errors(sched))
    assert accumulate(eps).residual == residual(eps)


# Clusters ---------------------------------------------------------------------


def test_clusters_sum_to_error(s633):
    eps = CircuitError((0b1, 0, 0b1000000, 0, 0b10000, 0, 0), 0b000100)
    parts = clusters(s633, eps)
    total = CircuitError.zero(s633)
    for part in parts:
        total = total + part
    assert total == eps


def test_clusters_singleton_connected(s633):
    eps = CircuitError((0b1, 0, 0, 0, 0, 0, 0), 0)
    assert is_connected(s633, eps)
    assert len(clusters(s633, eps)) == 1


def test_cancelling_pair_is_one_cluster(s633):
    # e^0 and e^2 on the same column: the accumulated support is one column
    # segment, a single component, even though the flips sit two levels apart.
    eps = CircuitError((0b1000, 0, 0b1000, 0, 0, 0, 0), 0)
    assert len(clusters(s633, eps)) == 1


def test_far_apart_flips_are_two_clusters(s633):
    # Distinct columns never joined by any check clique at their levels.
    eps = CircuitError((0b1, 0, 0, 0, 0, 0, 0b1000000), 0)
    parts = clusters(s633, eps)
    assert len(parts) == 2


def test_outcome_flip_attaches_to_cluster(s633):
    # A lone outcome flip forms its own cluster.
    eps = CircuitError((0,) * 7, 0b1)
    parts = clusters(s633, eps)
    assert len(parts) == 1
    assert parts[0].f == 0b1


def test_cluster_outcomes_trivial_when_total_trivial(s633):
    # First clustering lemma: m(eps) = 0 forces m on every cluster to vanish.
    # A cancelling pair on a column the first check does not read gives an
    # outcome-trivial error.
    eps = CircuitError((0b1000, 0b1000, 0, 0, 0, 0, 0), 0)
    assert simulate_outcome(s633, eps) == 0
    for part in clusters(s633, eps):
        assert simulate_outcome(s633, part) == 0


def test_cluster_no_output_contact_no_residual(s633):
    # Second clustering lemma on a concrete decomposition.
    eps = CircuitError((0b1000, 0b1000, 0, 0, 0, 0, 0b1000000), 0)
    for part in clusters(s633, eps):
        acc = accumulate(part)
        if acc.ebar[-1] == 0:
            assert residual(part) == 0


@settings(deadline=None)
@given(data=st.data())
def test_cluster_decomposition_partitions_support(data):
    sched = codes.hamming_schedule_532()
    eps = data.draw(_errors(sched))
    parts = clusters(sched, eps)
    total = CircuitError.zero(sched)
    seen = set()
    for part in parts:
        verts = part.vertex_set(sched)
        assert not (verts & seen)
        seen |= verts
        total = total + part
    assert total == eps
