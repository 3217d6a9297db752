# Storage lifetime under circuit-level noise
# ===========================================
#
# A round of storage is one step of passive noise (each data bit flips with
# probability p_s) followed by a full measurement cycle (measured bits flip
# with p_m, outcomes flip with p_f) and the truncated decoder's correction.
# The lifetime is the first round after which the stored word is no longer
# the unique closest codeword. Encoding pays off once the mean lifetime
# beats the unencoded baseline 1/p: the crossing point is the
# pseudo-threshold.

from ftec import codes
from ftec.decoder import build_truncated_decoder
from ftec.storage import (
    NoiseParams,
    average_lifetime,
    pseudo_threshold,
    unencoded_baseline,
)

code = codes.hamming_code()
dec = build_truncated_decoder(codes.hamming_schedule_532(), 3)

# Lifetime vs uniform noise strength. Trials are modest here; the CLI's
# `simulate` and `sweep` subcommands run the full-size versions.
print(f"{'p':>8} {'mean lifetime':>14} {'1/p baseline':>13}")
for p in (1e-2, 3e-3, 1e-3, 3e-4):
    stats = average_lifetime(
        code, dec, NoiseParams.uniform(p),
        trials=500, t_max=int(100 / p), master_seed=7, workers=4,
    )
    print(f"{p:8.0e} {stats.mean:14.1f} {unencoded_baseline(p):13.1f}")

# Bisect the crossing. Few trials keep the demo quick; expect roughly
# p_th ~ 1.7e-3 at full statistics.
result = pseudo_threshold(
    code, dec, trials=1000, master_seed=11,
    p_lo=3e-4, p_hi=1e-2, iterations=5, workers=4,
)
print(f"\npseudo-threshold estimate: {result.p_th:.2e} "
      f"(bracket [{result.bracket[0]:.2e}, {result.bracket[1]:.2e}])")

# Sensitivity: internal measurement flips (p_m) hurt much more than outcome
# flips (p_f), because each faulty check can corrupt several data bits.
base = NoiseParams(1e-3, 1e-4, 1e-4)
for name, noise in [
    ("baseline", base),
    ("p_m x10 ", NoiseParams(1e-3, 1e-3, 1e-4)),
    ("p_f x10 ", NoiseParams(1e-3, 1e-4, 1e-3)),
]:
    stats = average_lifetime(code, dec, noise, trials=1000, t_max=100_000,
                             master_seed=13, workers=4)
    print(f"{name}: mean lifetime {stats.mean:9.1f} +- {stats.stderr:.1f}")
