# Why the decoder must be truncated
# =================================
#
# The minimum-weight-error (MWE) decoder looks up, for each observed outcome,
# a lightest circuit error producing it, and undoes that error's residual.
# Trying to undo flips that happened near the end of the sequence is a trap:
# an internal flip just before the last measurement is indistinguishable from
# an outcome flip of that measurement, and correcting the wrong one injects a
# fresh error. The fix is to truncate: only the part of the estimate outside
# the late region S_out is applied.

from ftec import codes
from ftec.decoder import (
    build_outcome_table,
    build_truncated_decoder,
    build_untruncated_decoder,
    verify_fault_tolerance,
)
from ftec.distance import ft_precondition

sched = codes.hamming_schedule_633()

# The truncation is sound when the early region (V_in plus S_in) does not
# meet the late region S_out.
pre = ft_precondition(sched, 3)
print(f"S_in  vertices: {sorted(pre.s_in.vertices)}")
print(f"S_out vertices: {sorted(pre.s_out.vertices)}")
print(f"regions overlap: {sorted(pre.overlap) or 'no'}")

table = build_outcome_table(sched)
truncated = build_truncated_decoder(sched, 3, outcomes=table)
plain = build_untruncated_decoder(sched, outcomes=table)

# Exhaustive verification over every circuit error within the correction
# radius (d_D - 1) / 2 = 1. The plain decoder fails; the truncated passes.
print("truncated  :", verify_fault_tolerance(sched, truncated, 3))
report = verify_fault_tolerance(sched, plain, 3)
print("untruncated:", report)
print("counterexample amplified by the untruncated decoder:",
      report.counterexample)
