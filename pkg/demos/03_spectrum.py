"""Out-of-band emission before and after the amplifier.

Clipping in time spreads power outside the N data bins; ICF filters it away,
the ADMM solvers do not. The Rapp amplifier then adds its own regrowth to
every method. Printed values are the highest out-of-band PSD level relative
to the in-band peak.
"""

import numpy as np

from papr_admm import Method, OfdmConfig, apply_method, random_symbol, sspa, synthesize
from papr_admm.metrics import oobe, psd

cfg = OfdmConfig()
rng = np.random.default_rng(3)
symbols = [synthesize(random_symbol(rng, cfg)[1], cfg) for _ in range(300)]

print(f"{'method':10s} {'pre-SSPA':>10s} {'post-SSPA':>10s}")
for m in Method:
    tx = [apply_method(m, x, cfg) for x in symbols]
    pre = oobe(psd(tx), cfg)
    post = oobe(psd(sspa(x) for x in tx), cfg)
    print(f"{m.value:10s} {pre:9.1f}  {post:9.1f}   dB")
