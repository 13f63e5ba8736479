"""Acceptance criteria, each at its stated tolerance and runtime budget.

Run with ``pytest tests/test_acceptance.py -v`` (a PASS/FAIL line per
criterion appears in the terminal summary) or ``python tests/test_acceptance.py``.
"""
import sys
import time
import warnings
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent))
from conftest import ACCEPTANCE, as_point  # noqa: E402

from excitonmem import dispersion as dsp  # noqa: E402
from excitonmem import dynamics as dyn  # noqa: E402
from excitonmem import memory as mem  # noqa: E402
from excitonmem.dispersion import MediumParams  # noqa: E402
from excitonmem.fano import Resonance  # noqa: E402
from excitonmem.response import (  # noqa: E402
    FanoModel,
    ResponsePoint,
    TwoResonanceModel,
    beta_quadrature,
    transparency_point,
)

FIG3 = ((7.0, 4.0), (8.0, 6.0))
X_FIG3 = np.linspace(-1.0, 2.0, 601)


def _record(n, ok, detail):
    ACCEPTANCE[n] = (bool(ok), detail)
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


def _random_media(rng, n):
    out = []
    for _ in range(n):
        beta1 = complex(rng.uniform(0.2, 3), rng.uniform(-3, 3))
        b = complex(rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3))
        out.append(MediumParams(
            n_g2=rng.uniform(0.2, 2), omega_ctrl2=rng.uniform(0.01, 0.5),
            response=ResponsePoint.from_beta(beta1, b),
            gamma_c=rng.uniform(0, 0.1), nu=rng.uniform(-0.1, 0.1),
            n_atoms=rng.uniform(0.5, 5), ctrl_phase=rng.uniform(-np.pi, np.pi)))
    return out


def test_criterion_1_fig3_curves():
    t0 = time.perf_counter()
    far, features = [], []
    for q1, q2 in FIG3:
        m = TwoResonanceModel(0.2, 0.2, q1, q2, 0.1, 0.1)
        b1 = m.beta1(X_FIG3)
        bb = m.b(X_FIG3)
        mag = np.abs(b1)
        peaks = X_FIG3[1:-1][(mag[1:-1] > mag[:-2]) & (mag[1:-1] > mag[2:])]
        features.append(bool(peaks.size and np.min(np.abs(peaks)) < 0.2
                             and np.min(np.abs(peaks - 1)) < 0.2 and np.all(np.isfinite(bb))))
        far.append(float(np.max(np.abs(m.beta1(np.array([-50.0, 50.0])) / np.pi - 1))))
    dt = time.perf_counter() - t0
    ok = all(features) and max(far) < 1e-2 and dt < 1.0
    _record(1, ok, f"features near x=0,1: {features}; max|beta1(+-50)/pi - 1| = "
                   f"{max(far):.3g} (limit 1e-2); {dt:.3f} s")


def test_criterion_2_chi_over_vg():
    t0 = time.perf_counter()
    ratios = []
    for q1, q2 in FIG3:
        m = TwoResonanceModel(0.2, 0.2, q1, q2, 0.1, 0.1)
        x0 = transparency_point(X_FIG3, m)
        p = MediumParams(1.0, 1e-2, as_point(m.response(x0)))
        br = dsp.small_k(dsp.wavenumbers(p))
        ratios.append(br.chi_plus / br.vg_plus)
    dt = time.perf_counter() - t0
    ok = all(1e-3 <= abs(r) <= 1e-1 for r in ratios) and dt < 1.0
    _record(2, ok, f"chi+/vg+ = {[f'{r:.3g}' for r in ratios]} (range [1e-3, 1e-1]); {dt:.3f} s")


def test_criterion_3_analytic_vs_rk4():
    rng = np.random.default_rng(2024)
    media = _random_media(rng, 50)
    times = np.linspace(0.0, 10.0, 21)
    t0 = time.perf_counter()
    worst = 0.0
    for p in media:
        k = rng.uniform(-3, 3, 10)
        s0 = dyn.ModeState(k, rng.normal(size=10) + 1j * rng.normal(size=10),
                           rng.normal(size=10) + 1j * rng.normal(size=10))
        state = s0
        for a, b in zip(times[:-1], times[1:]):
            state = dyn.ode_oracle(state, p, b - a)
            ref = dyn.evolve_mode_analytic(s0, p, b)
            num = np.hypot(np.abs(state.alpha - ref.alpha), np.abs(state.sigma21 - ref.sigma21))
            den = np.hypot(np.abs(ref.alpha), np.abs(ref.sigma21))
            worst = max(worst, float(np.max(num / den)))
    dt = time.perf_counter() - t0
    _record(3, worst < 1e-6 and dt < 10.0,
            f"worst relative error {worst:.2e} over 50 draws, t in [0, 10] (limit 1e-6); {dt:.2f} s")


def test_criterion_4_eigenvalues():
    rng = np.random.default_rng(7)
    media = _random_media(rng, 200)
    t0 = time.perf_counter()
    worst = 0.0
    for p in media:
        k = rng.uniform(-20, 20, 10)
        wp, wm = dsp.omega_pm(k, dsp.wavenumbers(p), p.c, check_continuity=False)
        eig = np.linalg.eigvals(dsp.system_matrix(k, p))
        mine = np.sort_complex(np.stack([-1j * wp, -1j * wm], axis=-1))
        ref = np.sort_complex(eig)
        rel = np.max(np.abs(mine - ref), axis=1) / np.max(np.abs(ref), axis=1)
        worst = max(worst, float(rel.max()))
    dt = time.perf_counter() - t0
    _record(4, worst < 1e-10 and dt < 5.0,
            f"worst relative residual {worst:.2e} over 2000 samples (limit 1e-10); {dt:.2f} s")


def test_criterion_5_identities():
    rng = np.random.default_rng(11)
    worst = {"k1+k2=2k0~'": 0.0, "chi-=-chi+": 0.0, "f|b1|^2=b conj(b1)": 0.0, "zeta=0": 0.0}
    for p in _random_media(rng, 300):
        wn = dsp.wavenumbers(p)
        worst["k1+k2=2k0~'"] = max(worst["k1+k2=2k0~'"], abs(wn.k1 + wn.k2 - 2 * wn.k0_tilde_prime)
                                   / max(abs(wn.k1), abs(wn.k2)))
        br = dsp.small_k(wn)
        worst["chi-=-chi+"] = max(worst["chi-=-chi+"], abs(br.chi_minus + br.chi_plus))
    for _ in range(300):
        m = FanoModel.two_resonance(rng.uniform(0.01, 0.3), rng.uniform(0.01, 0.3),
                                    rng.uniform(-9, 9), rng.uniform(-9, 9),
                                    rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3))
        x, g2 = rng.uniform(-2, 3), rng.uniform(0, 0.5)
        r = m.response(x, g2)
        b1 = complex(r.beta1)
        lhs, rhs = complex(r.f) * abs(b1) ** 2, complex(r.b) * b1.conjugate()
        worst["f|b1|^2=b conj(b1)"] = max(worst["f|b1|^2=b conj(b1)"],
                                          abs(lhs - rhs) / max(abs(rhs), 1e-300))
        m0 = FanoModel([Resonance(r_.e_tilde, r_.gamma_tilde, r_.q) for r_ in m.resonances])
        z = m0.response(x, g2)
        scale = abs(complex(z.beta1))
        worst["zeta=0"] = max(worst["zeta=0"], abs(complex(z.b)),
                              abs(complex(z.beta1L - z.beta1)) / scale,
                              abs(complex(z.beta2 - z.beta1)) / scale)
    ok = all(v < 1e-12 for v in worst.values())
    _record(5, ok, "; ".join(f"{k}: {v:.1e}" for k, v in worst.items()) + " (limit 1e-12)")


def test_criterion_6_ideal_round_trip():
    t0 = time.perf_counter()
    G, W = 1.0, 1e-4
    p = MediumParams(G, W)
    z = dyn.uniform_grid(400.0, 4096)
    pulse = dyn.gaussian_pulse(z, 10.0, -50.0)
    sched = mem.ControlSchedule.write_store_read(np.sqrt(W), 0.0, 5.0, 1e6)
    rep = mem.round_trip(pulse, sched, p)
    vg_exact = dsp.small_k(dsp.wavenumbers(p)).vg_plus
    vg_err = abs(vg_exact / p.c - W / G) / (W / G)
    cell = z[1] - z[0]
    delay_err = abs(rep.delay - rep.branch.vg_plus * 1e6)
    dt = time.perf_counter() - t0
    ok = rep.fidelity > 0.999 and delay_err <= cell and vg_err < 1e-3 and dt < 30
    _record(6, ok, f"fidelity {rep.fidelity:.6f}; delay error {delay_err / cell:.2g} cells; "
                   f"vg/c vs W/G relative {vg_err:.1e}; {dt:.2f} s")


def _sweep_fidelity(params_list, width=10.0):
    z = dyn.uniform_grid(400.0, 2048)
    pulse = dyn.gaussian_pulse(z, width)
    out = []
    for p in params_list:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            vg = dsp.memory_regime(p).branch.vg_plus
        sched = mem.ControlSchedule.write_store_read(np.sqrt(p.omega_ctrl2), 0.0, 0.0, width / vg)
        out.append(mem.round_trip(pulse, sched, p).fidelity)
    return np.array(out)


def test_criterion_7_large_q_quadrature():
    errs = {}
    for q in (10.0, 50.0):
        m = FanoModel([Resonance(0.0, 1.0, q)])
        closed = complex(m.beta1(1.0))
        errs[q] = abs(beta_quadrature(1.0, m) - closed) / abs(closed)
    ok = errs[50.0] < 0.05 and errs[50.0] < errs[10.0]
    _record(7, ok, f"relative error q=10: {errs[10.0]:.2e}, q=50: {errs[50.0]:.2e} "
                   "(limit 5e-2 and decreasing)")


def test_criterion_8_degradation():
    G, W = 1.0, 1e-2
    nus = np.linspace(0, 0.3, 10) * np.sqrt(W)
    f_nu = _sweep_fidelity([MediumParams(G, W, nu=nu) for nu in nus])
    zetas = np.linspace(0, 0.3, 10)
    x = np.linspace(-1, 2, 3001)
    media = []
    for zeta in zetas:
        m = TwoResonanceModel(0.2, 0.2, 7, 4, zeta, zeta)
        media.append(MediumParams(G, W, as_point(m.response(transparency_point(x, m)))))
    f_zeta = _sweep_fidelity(media)
    ok = bool(np.all(np.diff(f_nu) < 0) and np.all(np.diff(f_zeta) < 0))
    _record(8, ok, f"fidelity nu sweep {f_nu[0]:.6f} -> {f_nu[-1]:.6f}, zeta sweep "
                   f"{f_zeta[0]:.6f} -> {f_zeta[-1]:.6f}; strictly decreasing: {ok}")


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
