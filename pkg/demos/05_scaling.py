"""Cost per iteration as the signal grows.

The solvers touch each sample a fixed number of times, so doubling lN
roughly doubles the time. ICF pays for two transforms per iteration, so its
cost relative to the solver creeps up with lN.
"""

from papr_admm import ExperimentConfig
from papr_admm.experiments import scaling_timings

config = ExperimentConfig()
t = scaling_timings(config)
print(f"{'lN':>6s} {'T-ADMM':>10s} {'TCU-ADMM':>10s} {'ICF':>10s}  ns/iteration")
for n in config.scaling_lengths:
    print(f"{n:6d} {t['T_ADMM', n]:10.0f} {t['TCU_ADMM', n]:10.0f} {t['ICF', n]:10.0f}"
          f"   ICF/T = {t['ICF', n] / t['T_ADMM', n]:.2f}")
