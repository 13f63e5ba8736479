"""Fidelity loss from two-photon detuning and from asymmetry mismatch."""
import warnings

import numpy as np

from excitonmem import (ControlSchedule, MediumParams, TwoResonanceModel, gaussian_pulse,
                        memory_regime, round_trip, transparency_point, uniform_grid)
from excitonmem.response import ResponsePoint

G, W, width = 1.0, 1e-2, 10.0
z = uniform_grid(400.0, 2048)
pulse = gaussian_pulse(z, width)


def fidelity(params):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        vg = memory_regime(params).branch.vg_plus
    sched = ControlSchedule.write_store_read(np.sqrt(W), 0.0, 0.0, width / vg)
    return round_trip(pulse, sched, params).fidelity


print("nu/|Om|   fidelity")
for r in np.linspace(0, 0.3, 7):
    print(f"{r:7.2f}   {fidelity(MediumParams(G, W, nu=r * np.sqrt(W))):.6f}")

print("\nzeta      fidelity")
x = np.linspace(-1, 2, 3001)
for zeta in np.linspace(0, 0.3, 7):
    m = TwoResonanceModel(0.2, 0.2, 7, 4, zeta, zeta)
    x0 = transparency_point(x, m)
    r = ResponsePoint.from_beta(complex(m.beta1(x0)), complex(m.b(x0)))
    print(f"{zeta:7.2f}   {fidelity(MediumParams(G, W, r)):.6f}")
