"""Response functions of two Fano resonances across the transparency window."""
import numpy as np

from excitonmem import MediumParams, TwoResonanceModel, small_k, transparency_point, wavenumbers
from excitonmem.response import ResponsePoint

x = np.linspace(-1, 2, 601)

for q1, q2 in ((7, 4), (8, 6)):
    model = TwoResonanceModel(0.2, 0.2, q1, q2, zeta1=0.1, zeta2=0.1)
    beta1 = model.beta1(x)
    b = model.b(x)

    # absorption is Re beta1; the window between the two levels is where it vanishes
    x0 = transparency_point(x, model)
    print(f"q = ({q1}, {q2})")
    print(f"  transparency at x = {x0:.3f}, beta1 = {complex(model.beta1(x0)):.4g}")
    print(f"  largest |beta1| at x = {x[np.argmax(np.abs(beta1))]:.3f}")
    print(f"  largest |b|     at x = {x[np.argmax(np.abs(b))]:.3f}")

    # how slowly the response returns to the bare value pi
    for far in (50, 500, 5000):
        dev = abs(model.beta1(far) / np.pi - 1)
        print(f"  |beta1({far})/pi - 1| = {dev:.3g}")

    # gain/loss per unit length relative to the slow speed at that operating point
    r = ResponsePoint.from_beta(complex(model.beta1(x0)), complex(model.b(x0)))
    params = MediumParams(n_g2=1.0, omega_ctrl2=1e-2, response=r)
    br = small_k(wavenumbers(params))
    print(f"  chi+/vg+ = {br.chi_plus / br.vg_plus:.3g}\n")
