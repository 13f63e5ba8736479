import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from excitonmem import FanoModel, MediumParams, ResponsePoint, TwoResonanceModel

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")


def as_point(r) -> ResponsePoint:
    """Scalar ResponsePoint from a 0-d array-valued one."""
    return ResponsePoint(*(complex(np.asarray(getattr(r, n)))
                           for n in ("beta1", "beta1L", "beta2", "b", "f")))


@pytest.fixture
def fig3_models():
    return [TwoResonanceModel(0.2, 0.2, q1, q2, 0.1, 0.1) for q1, q2 in ((7, 4), (8, 6))]


@pytest.fixture
def generic_params():
    m = FanoModel.two_resonance(0.1, 0.15, 3.0, -2.0, 0.05, 0.08)
    return MediumParams(n_g2=1.0, omega_ctrl2=0.05, response=as_point(m.response(0.35)),
                        gamma_c=0.01, nu=0.02, n_atoms=4.0, ctrl_phase=0.3)
