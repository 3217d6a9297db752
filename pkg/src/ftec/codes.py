"""Bundled code and schedule fixtures used throughout the examples and tests.

All matrices live as text files under ``ftec/data`` in the portable matrix
format ('0'/'1' rows, '#' comments) and are parsed on first use.
"""

from __future__ import annotations

from importlib import resources

from .circuit import MeasurementSchedule
from .gf2 import BitMatrix, LinearCode, parse_matrix_text


def load_matrix(name: str) -> BitMatrix:
    """Load one of the bundled matrix files by file name."""
    text = resources.files("ftec.data").joinpath(name).read_text()
    return parse_matrix_text(text, source=name)


def hamming_h() -> BitMatrix:
    """3x7 parity-check matrix of the [7,4,3] Hamming code."""
    return load_matrix("hamming_h.txt")


def hamming_code() -> LinearCode:
    return LinearCode.from_parity_checks(hamming_h(), d=3)


def g1_633() -> BitMatrix:
    """Generator of the [6,3,3] measurement code."""
    return load_matrix("g1_633.txt")


def g2_1035() -> BitMatrix:
    """Generator of the [10,3,5] measurement code."""
    return load_matrix("g2_1035.txt")


def g_532() -> BitMatrix:
    """Generator of the [5,3,2] measurement code."""
    return load_matrix("g_532.txt")


def hamming_schedule_633() -> MeasurementSchedule:
    """Six-measurement schedule for the Hamming code, from the [6,3,3] code."""
    return MeasurementSchedule.from_measurement_code(hamming_h(), g1_633())


def hamming_schedule_1035() -> MeasurementSchedule:
    """Ten-measurement schedule for the Hamming code, from the [10,3,5] code."""
    return MeasurementSchedule.from_measurement_code(hamming_h(), g2_1035())


def hamming_schedule_532() -> MeasurementSchedule:
    """Five-measurement schedule for the Hamming code, from the [5,3,2] code."""
    return MeasurementSchedule.from_measurement_code(hamming_h(), g_532())


def hamming_schedule_single_pass() -> MeasurementSchedule:
    """The three rows of H itself, measured once each; not fault-tolerant."""
    h = hamming_h()
    return MeasurementSchedule(h, h.rows)


def bch_g() -> BitMatrix:
    """7x15 generator of the [15,7,5] BCH code, standard form."""
    return load_matrix("bch_15_7_5_g.txt")


def bch_code() -> LinearCode:
    return LinearCode.from_generator(bch_g(), d=5)


def bch_h() -> BitMatrix:
    """8x15 parity-check matrix of the [15,7,5] BCH code.

    Any basis of the dual code is a valid parity check, but the circuit
    distance of a schedule depends on which basis the checks are expressed
    in. This basis was found by local search so that the schedule built
    from :func:`bch_gm` reaches circuit distance 5.
    """
    return load_matrix("bch_15_7_5_h.txt")


def bch_gm() -> BitMatrix:
    """8x16 measurement-code generator reaching circuit distance 5."""
    return load_matrix("bch_gm_8x16.txt")


def bch_schedule() -> MeasurementSchedule:
    """Sixteen-measurement schedule for the BCH code with d_circ = 5."""
    return MeasurementSchedule.from_measurement_code(bch_h(), bch_gm())
