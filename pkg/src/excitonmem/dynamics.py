"""Mean-field evolution of field and coherence amplitudes.

Each spatial Fourier mode evolves independently under the 2x2 linear system
of :func:`excitonmem.dispersion.system_matrix`.  Two solvers are provided:

* :func:`evolve_mode_analytic` - the closed-form two-wave solution, a slow
  (``+``) and a fast (``-``) wave with frequencies ``omega_pm(k)``;
* :func:`ode_oracle` - classical fixed-step RK4 on the same system, used as an
  independent check.

Pulses live on a uniform periodic ``z`` grid and are mapped to modes with the
FFT, using ``alpha(z) = sum_k A_k exp(i k z)`` so that ``exp(-i k v t)``
translates by ``+v t``.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Literal

import numpy as np

from .dispersion import MediumParams, Wavenumbers, omega_pm, system_matrix, wavenumbers
from .errors import GridResolutionError, SingularDispersionError, StepSizeError, ValidationError

Branch = Literal["both", "slow", "fast"]


@dataclass(frozen=True)
class ModeState:
    k: np.ndarray
    alpha: np.ndarray
    sigma21: np.ndarray

    def __post_init__(self):
        for name in ("k", "alpha", "sigma21"):
            object.__setattr__(self, name, np.asarray(getattr(self, name)))
        if not (np.all(np.isfinite(self.alpha)) and np.all(np.isfinite(self.sigma21))):
            raise ValidationError("mode amplitudes must be finite")

    def vector(self):
        return np.stack(np.broadcast_arrays(self.alpha, self.sigma21), axis=-1).astype(complex)


@dataclass(frozen=True)
class PulseState:
    z: np.ndarray
    alpha: np.ndarray
    sigma21: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        z = np.asarray(self.z, dtype=float)
        a = np.asarray(self.alpha, dtype=complex)
        s = np.asarray(self.sigma21, dtype=complex)
        if z.ndim != 1 or z.size < 2:
            raise ValidationError("z grid must be 1-D with at least two points")
        if a.shape != z.shape or s.shape != z.shape:
            raise ValidationError("alpha and sigma21 must match the z grid")
        dz = np.diff(z)
        if not np.allclose(dz, dz[0], rtol=1e-9, atol=0) or dz[0] <= 0:
            raise ValidationError("z grid must be uniform and increasing")
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "sigma21", s)

    @property
    def dz(self) -> float:
        return float(self.z[1] - self.z[0])

    @property
    def length(self) -> float:
        return self.dz * self.z.size


def uniform_grid(length: float, n: int, start: float | None = None) -> np.ndarray:
    """Periodic grid of ``n`` points covering ``[start, start + length)``."""
    start = -0.5 * length if start is None else start
    return start + length * np.arange(n) / n


def gaussian_pulse(z, width: float, center: float = 0.0, amplitude: complex = 1.0,
                   sigma21=None, t: float = 0.0) -> PulseState:
    """``amplitude * exp(-(z - center)^2 / (2 width^2))``."""
    z = np.asarray(z, dtype=float)
    a = amplitude * np.exp(-0.5 * ((z - center) / width) ** 2)
    s = np.zeros_like(a) if sigma21 is None else sigma21
    return PulseState(z, a, s, t)


# ---------------------------------------------------------------------------
# z <-> k

def to_kspace(pulse: PulseState) -> ModeState:
    """Fourier amplitudes, normalised so a constant field maps to one ``k = 0`` mode."""
    n = pulse.z.size
    k = 2 * np.pi * np.fft.fftfreq(n, d=pulse.dz)
    phase = np.exp(-1j * k * pulse.z[0])  # grid may not start at z = 0
    return ModeState(k, np.fft.fft(pulse.alpha) / n * phase,
                     np.fft.fft(pulse.sigma21) / n * phase)


def to_zspace(modes: ModeState, z, t: float = 0.0) -> PulseState:
    z = np.asarray(z, dtype=float)
    n = z.size
    phase = np.exp(1j * modes.k * z[0])
    return PulseState(z, np.fft.ifft(modes.alpha * phase) * n,
                      np.fft.ifft(modes.sigma21 * phase) * n, t)


def spectral_tail_fraction(modes: ModeState, k_max: float) -> float:
    """Fraction of field + coherence spectral energy at ``|k| > k_max``."""
    e = np.abs(modes.alpha) ** 2 + np.abs(modes.sigma21) ** 2
    total = e.sum()
    if total == 0:
        return 0.0
    return float(e[np.abs(modes.k) > k_max].sum() / total)


def edge_fraction(pulse: PulseState, margin: float = 0.0625) -> float:
    """Fraction of ``|alpha|^2 + |sigma21|^2`` within ``margin * L`` of either domain edge."""
    e = np.abs(pulse.alpha) ** 2 + np.abs(pulse.sigma21) ** 2
    total = e.sum()
    if total == 0:
        return 0.0
    m = max(1, int(round(margin * pulse.z.size)))
    return float((e[:m].sum() + e[-m:].sum()) / total)


# ---------------------------------------------------------------------------
# per-mode solvers

def branch_weights(k, params: MediumParams, wn: Wavenumbers | None = None,
                   unprimed_field_weight: bool = False):
    """Projector entries of the two waves at wavenumber(s) ``k``.

    Returns ``(S, w_aa, w_as, w_sa, w_ss)`` for the slow wave; the fast wave has
    ``1 - w_aa``, ``-w_as``, ``-w_sa``, ``1 - w_ss``.  The field weight uses
    ``k0~'`` (the eigen-decomposition of the mode equations);
    ``unprimed_field_weight=True`` uses ``k0~`` instead, which differs when
    ``nu`` or ``gamma_c`` is nonzero.
    """
    wn = wavenumbers(params) if wn is None else wn
    k = np.asarray(k, dtype=float)
    s = wn.sqrt_branch(k)
    scale = max(abs(wn.k1), abs(wn.k2), abs(wn.k0), 1.0)
    if np.any(np.abs(s) < 1e-13 * scale):
        raise SingularDispersionError("mode at a branch collision: sqrt((k-k1)(k-k2)) = 0")
    c = params.c
    b2 = complex(params.response.beta2)
    om = params.omega_ctrl
    k_field = wn.k0_tilde if unprimed_field_weight else wn.k0_tilde_prime
    w_aa = 0.5 * (1 + (k - k_field) / s)
    w_ss = 0.5 * (1 - (k - wn.k0_tilde_prime) / s)
    w_as = -1j / c * b2 * params.n_atoms * params.g * om / s
    w_sa = -1j / c * b2 * params.g * np.conj(om) / s
    return s, w_aa, w_as, w_sa, w_ss


def evolve_mode_analytic(state: ModeState, params: MediumParams, t: float,
                         branch: Branch = "both",
                         unprimed_field_weight: bool = False) -> ModeState:
    """Closed-form evolution of mode amplitudes over time ``t`` (noise-free).

    ``branch`` selects the slow wave (``"slow"``), the fast wave (``"fast"``)
    or their sum.
    """
    if branch not in ("both", "slow", "fast"):
        raise ValidationError(f"unknown branch {branch!r}")
    wn = wavenumbers(params)
    k = np.asarray(state.k, dtype=float)
    s, w_aa, w_as, w_sa, w_ss = branch_weights(k, params, wn, unprimed_field_weight)
    wp, wm = omega_pm(k, wn, params.c, check_continuity=False)
    a0, s0 = np.asarray(state.alpha), np.asarray(state.sigma21)
    alpha = np.zeros(np.broadcast(k, a0).shape, dtype=complex)
    sigma = np.zeros_like(alpha)
    if branch in ("both", "slow"):
        e = np.exp(-1j * wp * t)
        alpha = alpha + e * (w_aa * a0 + w_as * s0)
        sigma = sigma + e * (w_sa * a0 + w_ss * s0)
    if branch in ("both", "fast"):
        e = np.exp(-1j * wm * t)
        alpha = alpha + e * ((1 - w_aa) * a0 - w_as * s0)
        sigma = sigma + e * (-w_sa * a0 + (1 - w_ss) * s0)
    return ModeState(k, alpha, sigma)


def ode_oracle(state: ModeState, params: MediumParams, t: float,
               dt: float | None = None, max_step: float = 0.1) -> ModeState:
    """Fixed-step classical RK4 on the mode equations.

    ``dt`` defaults to ``0.02 / max|omega|``; it is shortened so an integer
    number of steps lands exactly on ``t``.  A step with
    ``dt * max|omega| >= max_step`` is rejected.
    """
    k = np.asarray(state.k, dtype=float)
    m = system_matrix(k, params)
    lam = np.abs(np.linalg.eigvals(m)).max() if m.size else 0.0
    if dt is None:
        dt = 0.02 / lam if lam > 0 else t
    if t == 0:
        return ModeState(k, np.array(state.alpha, dtype=complex),
                         np.array(state.sigma21, dtype=complex))
    n = max(1, int(np.ceil(abs(t) / dt - 1e-12)))
    h = t / n
    if abs(h) * lam >= max_step:
        raise StepSizeError(f"dt*max|omega| = {abs(h) * lam:.3g} >= {max_step}")
    y = state.vector()
    if y.ndim == 1:
        y = y[None]
        m = np.broadcast_to(m, (1, 2, 2))
    y = np.broadcast_to(y, m.shape[:-1]).copy()

    def f(v):
        return np.einsum("...ij,...j->...i", m, v)

    for _ in range(n):
        k1 = f(y)
        k2 = f(y + 0.5 * h * k1)
        k3 = f(y + 0.5 * h * k2)
        k4 = f(y + h * k3)
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    y = y.reshape(np.broadcast(k, state.alpha).shape + (2,))
    return ModeState(k, y[..., 0], y[..., 1])


# ---------------------------------------------------------------------------
# pulse propagation

def check_resolution(modes: ModeState, k_max: float | None = None,
                     tol: float = 1e-6) -> float:
    """Raise if more than ``tol`` of the spectral energy lies beyond ``k_max``.

    ``k_max`` defaults to half the Nyquist wavenumber.
    """
    if k_max is None:
        k_max = 0.5 * np.abs(modes.k).max()
    frac = spectral_tail_fraction(modes, k_max)
    if frac >= tol:
        raise GridResolutionError(
            f"spectral energy beyond |k| = {k_max:.4g} is {frac:.2e} (limit {tol:g}); "
            "refine the z grid (at least double the number of points)")
    return frac


def propagate_pulse(pulse: PulseState, params: MediumParams, t: float,
                    branch: str = "both", k_max: float | None = None,
                    unprimed_field_weight: bool = False) -> PulseState:
    """Evolve a pulse for time ``t`` with the control field on.

    ``branch`` is ``"both"``, ``"slow_only"`` (slow wave only) or
    ``"fast_only"``.
    """
    mapping = {"both": "both", "slow_only": "slow", "slow": "slow",
               "fast_only": "fast", "fast": "fast"}
    if branch not in mapping:
        raise ValidationError(f"unknown branch {branch!r}")
    modes = to_kspace(pulse)
    check_resolution(modes, k_max)
    out = evolve_mode_analytic(modes, params, t, mapping[branch], unprimed_field_weight)
    return replace(to_zspace(out, pulse.z), t=pulse.t + t)
