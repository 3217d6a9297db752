# Finding short schedules by randomized search
# =============================================
#
# How many measurements does fault tolerance require? Drawing each check
# uniformly from the row space of H_D and certifying the candidate with the
# branch-and-bound exclusion finds surprisingly short schedules. The
# expected number of low-weight propagating errors decays exponentially in
# the schedule length, so random draws succeed quickly once the length is
# past the threshold.

from ftec import codes
from ftec.distance import thm2_expectation_bound
from ftec.search import SearchConfig, search
from ftec.gf2 import word_to_string

h = codes.hamming_h()

for n_m in (5, 10, 20):
    bound = thm2_expectation_bound(7, n_m, 3)
    print(f"expected light propagating errors at n_M={n_m:>2}: {bound:.3g}")

config = SearchConfig(min_length=1, max_length=6, attempts_per_length=200, seed=0)
result = search(h, 3, config)

print(f"\nsearch over lengths 1..6, 200 attempts each, seed 0:")
print(f"  attempts used: {result.num_attempts}, elapsed {result.elapsed:.2f}s")
print(f"  found n_M = {result.schedule.n_m} with d_circ = {result.d_circ}:")
for check in result.schedule.checks:
    print(f"    {word_to_string(check, 7)}")

# Rejected candidates record the weight of the lightest propagating error
# that disqualified them.
light = [r.achieved for r in result.attempts if not r.accepted]
print(f"  rejected candidates and their defect weights: {light[:10]} ...")
