"""Two-branch dispersion of the coupled field / spin-wave modes.

Per spatial Fourier mode ``k`` the mean-field amplitudes obey::

    d sigma/dt = (i mu - W beta1L) sigma - conj(Om) g beta2 alpha
    d alpha/dt = -(i k c + G beta1) alpha - N g Om beta2 sigma

with ``G = N g^2``, ``W = |Om|^2`` and ``mu = nu + i gamma_c/2``.  The
eigenvalues are ``-i omega_pm(k)`` with

    omega_pm(k) = (c/2) (k - k0 +- S(k)),   S(k) = sqrt((k - k1)(k - k2)).

The sign of ``S`` is fixed at ``k = 0`` so that ``omega_plus(0)`` is the root of
smaller modulus (the slow, dark-polariton branch) and continued along the
real ``k`` axis as ``S(k) = s0 * sqrt(k - k1) * sqrt(k - k2)`` with principal
roots.  This product is analytic on the real line whenever ``k1`` and ``k2``
are off the real axis, so it coincides with step-by-step sign continuation.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import (
    BranchDiscontinuityError,
    SingularDispersionError,
    ValidationError,
)
from .response import ResponsePoint

DEFAULT_THRESHOLD = 0.1


@dataclass(frozen=True)
class MediumParams:
    """Medium and control parameters in scaled units (``c = 1``, rate unit ``G``).

    ``n_atoms`` and ``ctrl_phase`` only fix how ``G = N g^2`` and ``Om`` split
    into the individual couplings, which sets the scale of ``sigma21``
    relative to ``alpha``; the dispersion depends on ``G`` and ``|Om|^2`` alone.
    """

    n_g2: float
    omega_ctrl2: float
    response: ResponsePoint = field(default_factory=ResponsePoint.ideal)
    gamma_c: float = 0.0
    nu: float = 0.0
    gamma2: float = 0.0
    c: float = 1.0
    n_atoms: float = 1.0
    ctrl_phase: float = 0.0

    def __post_init__(self):
        if not self.n_g2 > 0:
            raise ValidationError("n_g2 must be > 0")
        if self.omega_ctrl2 < 0:
            raise ValidationError("omega_ctrl2 must be >= 0")
        if self.gamma_c < 0 or self.gamma2 < 0:
            raise ValidationError("decay rates must be >= 0")
        if not self.c > 0 or not self.n_atoms > 0:
            raise ValidationError("c and n_atoms must be > 0")

    @property
    def g(self) -> float:
        return float(np.sqrt(self.n_g2 / self.n_atoms))

    @property
    def omega_ctrl(self) -> complex:
        return complex(np.sqrt(self.omega_ctrl2) * np.exp(1j * self.ctrl_phase))

    @property
    def mu(self) -> complex:
        return self.nu + 0.5j * self.gamma_c

    def with_control(self, omega_ctrl2: float) -> "MediumParams":
        return replace(self, omega_ctrl2=omega_ctrl2)


@dataclass(frozen=True)
class Wavenumbers:
    k0: complex
    k1: complex
    k2: complex
    k0_tilde: complex
    k0_tilde_prime: complex
    sign: float = 1.0  # branch sign s0 of sqrt((k-k1)(k-k2))

    def sqrt_branch(self, k):
        """Continuous branch of ``sqrt((k - k1)(k - k2))`` for real ``k``."""
        k = np.asarray(k, dtype=complex)
        return self.sign * np.sqrt(k - self.k1) * np.sqrt(k - self.k2)


@dataclass(frozen=True)
class BranchPoint:
    omega_plus: complex
    omega_minus: complex
    vg_plus: float
    vg_minus: float
    chi_plus: float
    chi_minus: float

    def as_dict(self):
        return {
            "omega_plus": [self.omega_plus.real, self.omega_plus.imag],
            "omega_minus": [self.omega_minus.real, self.omega_minus.imag],
            "vg_plus": self.vg_plus, "vg_minus": self.vg_minus,
            "chi_plus": self.chi_plus, "chi_minus": self.chi_minus,
        }


def wavenumbers(params: MediumParams) -> Wavenumbers:
    """Characteristic wavenumbers ``k0, k1, k2, k0~, k0~'`` and the branch sign."""
    r = params.response
    c = params.c
    W, G = params.omega_ctrl2, params.n_g2
    b1, b1L, b2 = complex(r.beta1), complex(r.beta1L), complex(r.beta2)
    mu = params.mu
    couple = 2j * b2 * np.sqrt(G * W)
    k1 = -1j / c * (b1L * W - b1 * G + couple - 1j * mu)
    k2 = -1j / c * (b1L * W - b1 * G - couple - 1j * mu)
    k0 = 1j / c * (b1L * W + b1 * G - 1j * mu)
    k0t = -1j / c * (b1L * W - b1 * G + 1j * mu)
    k0tp = -1j / c * (b1L * W - b1 * G - 1j * mu)

    s_at_0 = np.sqrt(-k1) * np.sqrt(-k2)
    plus = abs(-k0 + s_at_0)
    minus = abs(-k0 - s_at_0)
    sign = 1.0 if plus <= minus else -1.0
    return Wavenumbers(k0=k0, k1=k1, k2=k2, k0_tilde=k0t, k0_tilde_prime=k0tp, sign=sign)


def system_matrix(k, params: MediumParams) -> np.ndarray:
    """Coefficient matrix ``M(k)`` of ``d/dt [alpha, sigma21] = M [alpha, sigma21]``.

    Shape ``k.shape + (2, 2)``.
    """
    k = np.asarray(k, dtype=float)
    r = params.response
    om = params.omega_ctrl
    g = params.g
    b1, b1L, b2 = complex(r.beta1), complex(r.beta1L), complex(r.beta2)
    m = np.empty(k.shape + (2, 2), dtype=complex)
    m[..., 0, 0] = -1j * k * params.c - params.n_g2 * b1
    m[..., 0, 1] = -params.n_atoms * g * om * b2
    m[..., 1, 0] = -np.conj(om) * g * b2
    m[..., 1, 1] = 1j * params.mu - params.omega_ctrl2 * b1L
    return m


def omega_pm(k, wn: Wavenumbers, c: float = 1.0, check_continuity: bool = True):
    """Branch frequencies ``(omega_plus, omega_minus)`` at real wavenumber(s) ``k``.

    For a 1-D sweep the result is checked for branch jumps.  A branch point
    on the real axis inside the sweep is an error.  Each grid interval is
    also checked at its midpoint: both end values of ``S`` must lie closer
    to ``S(mid)`` than to ``-S(mid)``, otherwise the branch jumps or the grid
    is too coarse to follow it.
    """
    k = np.asarray(k, dtype=float)
    s = wn.sqrt_branch(k)
    base = k - wn.k0
    wp = 0.5 * c * (base + s)
    wm = 0.5 * c * (base - s)
    if check_continuity and k.ndim == 1 and k.size > 1:
        ks = np.sort(k)
        scale = max(abs(wn.k1), abs(wn.k2), 1e-300)
        for kb in (wn.k1, wn.k2):
            if abs(kb.imag) < 1e-13 * scale and ks[0] <= kb.real <= ks[-1]:
                raise BranchDiscontinuityError(
                    f"branch point k = {kb.real:.6g} lies on the real sweep")
        ss = wn.sqrt_branch(ks)
        mid = wn.sqrt_branch(0.5 * (ks[1:] + ks[:-1]))
        lo, hi = ss[:-1], ss[1:]
        bad = np.flatnonzero((np.abs(lo + mid) < np.abs(lo - mid))
                             | (np.abs(hi + mid) < np.abs(hi - mid)))
        if bad.size:
            raise BranchDiscontinuityError(
                f"branch jump between k = {ks[bad[0]]:.6g} and {ks[bad[0] + 1]:.6g}; "
                "refine the k grid")
    return wp, wm


def small_k(wn: Wavenumbers, c: float = 1.0) -> BranchPoint:
    """Linear expansion ``omega_pm(k) = omega_pm(0) + (v_pm + i chi_pm) k``.

    ``v_pm = (c/2)(1 -+ Re(k0~'/S0))`` and ``chi_pm = -+(c/2) Im(k0~'/S0)`` with
    ``S0 = S(0)``, so ``v + i chi`` is exactly ``d omega / dk`` at ``k = 0``.
    """
    s0 = complex(wn.sqrt_branch(0.0))
    scale = max(abs(wn.k0), abs(wn.k0_tilde_prime), abs(wn.k1), abs(wn.k2), 1e-300)
    if abs(s0) < 1e-12 * scale:
        raise SingularDispersionError("sqrt(k1 k2) vanishes: the branches collide at k = 0")
    ratio = wn.k0_tilde_prime / s0
    return BranchPoint(
        omega_plus=0.5 * c * (-wn.k0 + s0),
        omega_minus=0.5 * c * (-wn.k0 - s0),
        vg_plus=0.5 * c * (1 - ratio.real),
        vg_minus=0.5 * c * (1 + ratio.real),
        chi_plus=-0.5 * c * ratio.imag,
        chi_minus=0.5 * c * ratio.imag,
    )


# ---------------------------------------------------------------------------
# memory-regime approximations and regime checks

@dataclass
class ConditionReport:
    ratios: dict
    threshold: float
    passed: dict

    @property
    def all_passed(self) -> bool:
        return all(self.passed.values())

    def failures(self):
        return [k for k, ok in self.passed.items() if not ok]

    def as_dict(self):
        return {
            "threshold": self.threshold,
            "conditions": {k: {"ratio": float(v), "passed": bool(self.passed[k])}
                           for k, v in self.ratios.items()},
            "all_passed": self.all_passed,
        }


def check_conditions(params: MediumParams, pulse_duration: float | None = None,
                     model=None, threshold: float = DEFAULT_THRESHOLD,
                     thresholds: dict | None = None) -> ConditionReport:
    """Evaluate every "much less than one" regime ratio against a threshold.

    ``asymmetry_mismatch``  max |zeta_v|                      (needs ``model``)
    ``detuning``            |nu + i gamma_c/2| / |Om|
    ``memory``              |Om|^2 / G
    ``eit``                 1 / (|Om|^2 |beta1| T)            (needs ``pulse_duration``)
    ``isolation``           max G_k / (E_2 - E_1)             (needs ``model``)
    """
    thresholds = dict(thresholds or {})
    ratios = {}
    if model is not None:
        ratios["asymmetry_mismatch"] = float(np.max(np.abs(model.zetas)))
    om = np.sqrt(params.omega_ctrl2)
    ratios["detuning"] = float(abs(params.mu) / om) if om > 0 else (
        0.0 if params.mu == 0 else np.inf)
    ratios["memory"] = params.omega_ctrl2 / params.n_g2
    if pulse_duration is not None:
        denom = params.omega_ctrl2 * abs(complex(params.response.beta1)) * pulse_duration
        ratios["eit"] = float(1.0 / denom) if denom > 0 else np.inf
    if model is not None:
        ratios["isolation"] = float(np.max(model.p))
    passed = {k: bool(v < thresholds.get(k, threshold)) for k, v in ratios.items()}
    return ConditionReport(ratios=ratios, threshold=threshold, passed=passed)


@dataclass
class MemoryRegimeResult:
    branch: BranchPoint
    report: ConditionReport

    @property
    def warnings(self):
        return [f"regime condition '{k}' violated (ratio {self.report.ratios[k]:.3g})"
                for k in self.report.failures()]


def memory_regime(params: MediumParams, model=None,
                  threshold: float = DEFAULT_THRESHOLD) -> MemoryRegimeResult:
    """Leading-order branch data for ``G >> |Om|^2``.

    ``omega_plus(0)`` is taken as 0.  In ``omega_minus(0)`` the decoherence and
    ``Re b`` corrections are read as separate additive terms.  ``v_minus`` is
    written with ``nu / G`` in its detuning term, which makes
    ``v_plus + v_minus = c (1 - |Om|^2/G)`` to first order, consistent with the
    exact sum ``c``.  Violated regime conditions raise a ``RuntimeWarning``;
    the values are returned regardless.
    """
    r = params.response
    b1 = complex(r.beta1)
    bb = complex(r.b)
    f = complex(r.f)
    G, W, c = params.n_g2, params.omega_ctrl2, params.c
    nu, gc2 = params.nu, 0.5 * params.gamma_c
    a2 = abs(b1) ** 2
    if W == 0:
        raise SingularDispersionError("memory-regime formulas need a nonzero control field")

    wm = (G * (b1.imag + W / G * bb.imag - nu / G)
          - 1j * G * (b1.real + gc2 / G + W / G * bb.real))
    vp = c * W / G * (1 + f.real + gc2 * b1.real / (W * a2) - nu / W * b1.imag / a2)
    chi = c * W / G * (f.imag - gc2 * b1.imag / (W * a2) - nu / W * b1.real / a2)
    vm = c * (1 - W / G * f.real - gc2 * b1.real / (G * a2) + nu / G * b1.imag / a2)
    branch = BranchPoint(omega_plus=0j, omega_minus=complex(wm), vg_plus=float(vp),
                         vg_minus=float(vm), chi_plus=float(chi), chi_minus=float(-chi))
    report = check_conditions(params, model=model, threshold=threshold)
    report.ratios.pop("eit", None)
    result = MemoryRegimeResult(branch=branch, report=report)
    for msg in result.warnings:
        warnings.warn(msg, RuntimeWarning, stacklevel=2)
    return result


def dispersion_sweep(k, params: MediumParams):
    """Branch frequencies over a k grid plus the eigenvalue-oracle residual.

    The residual column is ``max |{-i w+, -i w-} - eig M(k)| / max|eig|``
    after optimal matching of the two pairs.
    """
    k = np.asarray(k, dtype=float)
    wn = wavenumbers(params)
    wp, wm = omega_pm(k, wn, params.c)
    eig = np.linalg.eigvals(system_matrix(k, params))
    lp, lm = -1j * wp, -1j * wm
    direct = np.maximum(np.abs(lp - eig[:, 0]), np.abs(lm - eig[:, 1]))
    swapped = np.maximum(np.abs(lp - eig[:, 1]), np.abs(lm - eig[:, 0]))
    scale = np.maximum(np.abs(eig).max(axis=1), 1e-300)
    return wp, wm, np.minimum(direct, swapped) / scale
