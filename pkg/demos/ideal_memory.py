"""Store a Gaussian pulse as a spin wave and read it back out."""
import numpy as np

from excitonmem import ControlSchedule, MediumParams, gaussian_pulse, round_trip, uniform_grid

G, W = 1.0, 1e-4                  # Ng^2 and |Om|^2 in the rate unit
params = MediumParams(n_g2=G, omega_ctrl2=W)

z = uniform_grid(400.0, 4096)
pulse = gaussian_pulse(z, width=10.0, center=-50.0)

# control on while writing, off for storage, on again for the read
sched = ControlSchedule.write_store_read(np.sqrt(W), write=0.0, storage=50.0, read=1e6)

for method in ("formula", "exact"):
    rep = round_trip(pulse, sched, params, method=method)
    print(f"{method:8s} fidelity {rep.fidelity:.6f}  amplitude {rep.amplitude_ratio:.4f}  "
          f"delay {rep.delay:.3f} (expected {rep.expected_delay:.3f})")

# the exact slow wave carries a small photonic part and a k^2 term,
# which is what separates the two lines above
print(f"slow speed v_g = {rep.branch.vg_plus:.3e} c (W/G = {W / G:.1e})")
