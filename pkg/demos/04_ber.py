"""Bit error rate through amplifier and noise.

The "Ideal" row skips the amplifier and should follow Q(sqrt(2 Eb/N0)).
The other rows pass through the Rapp SSPA at 4.1 dB back-off.
"""

import math

from papr_admm import OfdmConfig, SspaParams, ber_experiment

cfg = OfdmConfig()
grid = [2.0, 4.0, 6.0, 8.0]
n = 200


def q(x):
    return 0.5 * math.erfc(x / math.sqrt(2))


print("Eb/N0 " + "".join(f"{g:>10.0f}" for g in grid))
print("theory" + "".join(f"{q(math.sqrt(2 * 10 ** (g / 10))):10.2e}" for g in grid))
rows = [("Ideal", "none", None)] + [(m, m, SspaParams()) for m in ("none", "T-ADMM", "TCU-ADMM", "ICF")]
for label, method, amp in rows:
    recs = ber_experiment(method, cfg, sspa_params=amp, ebn0_grid=grid, n_symbols=n, seed=4)
    print(f"{label:6s}" + "".join(f"{r.ber:10.2e}" for r in recs))
