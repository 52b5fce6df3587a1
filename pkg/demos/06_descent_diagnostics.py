"""Where the augmented Lagrangian goes up and down.

Each iteration lowers L in the u- and x-steps and raises it in the
multiplier step by exactly ||dy||^2 / rho. We print the three parts for the
first iterations of one symbol, plus the flags for every checked inequality.
"""

import numpy as np

from papr_admm import OfdmConfig, SolverParams, Variant, random_symbol, synthesize
from papr_admm.admm import diagnose, iterate

cfg = OfdmConfig()
x_o = synthesize(random_symbol(np.random.default_rng(6), cfg)[1], cfg)
states = list(iterate(x_o, SolverParams(variant=Variant.T_ADMM), 12))
rep = diagnose(states, x_o)

print(" k   delta_u     delta_x     delta_y     L^{k+1}")
for k in range(len(rep)):
    print(f"{k + 1:2d} {rep.delta_u[k]:11.3e} {rep.delta_x[k]:11.3e} "
          f"{rep.delta_y[k]:11.3e} {rep.lagrangian[k]:11.3e}")
for name, flags in rep.flags.items():
    print(f"{name:24s} violated on {int(flags.sum())} of {len(rep)} iterations")
