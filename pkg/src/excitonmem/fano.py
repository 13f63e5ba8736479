"""Dressed exciton resonances: poles, phase shifts, Beutler-Fano profiles.

A set of ``n`` dressed resonances (energies ``E_v``, widths ``G_v``, Fano
parameters ``q_v``) defines three polynomials in the energy variable ``lam``::

    A(lam)   = prod_v (lam - E_v)
    B_w(lam) = sum_v w_v G_v prod_{k != v} (lam - E_k)
    P(lam)   = A(lam) - (i/2) B_1(lam)           # resonance polynomial
    N_q(lam) = A(lam) + (1/2) B_q(lam)           # profile numerator

The roots ``s_v`` of ``P`` are the complex resonance poles (all with
``Im s_v > 0`` for positive widths) and the real roots of ``N_q`` are the
Fano windows.  For real ``lam`` one has ``|P(lam)|^2 = A^2 + B_1^2 / 4``,
which is the denominator of the profile ratio.

Energies may be given in any unit; tolerances are applied in the scaled unit
returned by :func:`energy_unit` (the spacing ``E_2 - E_1`` of the two lowest
levels when there are several resonances, the width for a single one).
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Literal, Sequence

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import (
    ModelViolationError,
    PoleError,
    RootFindingError,
    SingularConfigurationError,
    ValidationError,
)

Which = Literal["signal", "control"]

POLE_TOL = 1e-10
WINDOW_TOL = 1e-8
NEAR_SINGULAR = 1e-6


@dataclass(frozen=True)
class Resonance:
    """One dressed exciton level.

    ``zeta`` is the relative mismatch of the control-transition asymmetry,
    ``q_control = q * (1 + zeta)``.
    """

    e_tilde: float
    gamma_tilde: float
    q: float
    zeta: float = 0.0

    def __post_init__(self):
        if not np.isfinite(self.gamma_tilde) or self.gamma_tilde <= 0:
            raise ValidationError(
                f"resonance width must be > 0 (got {self.gamma_tilde!r}); "
                "zero-width levels put a pole on the real axis"
            )
        for name in ("e_tilde", "q", "zeta"):
            if not np.isfinite(getattr(self, name)):
                raise ValidationError(f"resonance {name} must be finite")

    @property
    def q_control(self) -> float:
        return self.q * (1.0 + self.zeta)

    def asymmetry(self, which: Which = "signal") -> float:
        if which == "signal":
            return self.q
        if which == "control":
            return self.q_control
        raise ValidationError(f"which must be 'signal' or 'control', not {which!r}")


@dataclass(frozen=True)
class BareResonancePair:
    """Two bare levels mixed through a common continuum."""

    e1: float
    e2: float
    gamma1: float
    gamma2: float
    delta1: float = 0.0
    delta2: float = 0.0
    delta12: complex = 0.0

    def __post_init__(self):
        if self.gamma1 < 0 or self.gamma2 < 0:
            raise ValidationError("bare widths must be >= 0")


@dataclass(frozen=True)
class PoleSet:
    poles: np.ndarray
    residuals: np.ndarray = field(repr=False)
    near_singular: bool = False

    def __len__(self):
        return len(self.poles)

    def __iter__(self):
        return iter(self.poles)


# ---------------------------------------------------------------------------
# two-level diagonalisation

def effective_levels(pair: BareResonancePair):
    """Dressed energies and widths of two bare levels sharing a continuum.

    Returns ``(e_tilde, gamma_tilde)`` as two length-2 arrays with
    ``e_tilde[0] <= e_tilde[1]``.

    The level splitting uses ``|delta12|**2`` under the square root (a plain
    2x2 Hermitian diagonalisation would give ``4*|delta12|**2``).  The dressed
    energies are computed first and then substituted once into the width
    formulas; no self-consistent iteration.
    Widths are ``G_k |1 + (delta12/D_k) sqrt(G_l/G_k)|**2 * D_k**2/(D_k**2 + |delta12|**2)``,
    written as ``|sqrt(G_k) + (delta12/D_k) sqrt(G_l)|**2`` so a zero bare
    width is harmless.  For real ``delta12`` this is identical to squaring
    the bracket.
    """
    e1 = pair.e1 + pair.delta1
    e2 = pair.e2 + pair.delta2
    d12sq = abs(pair.delta12) ** 2
    root = np.sqrt((e2 - e1) ** 2 + d12sq)
    et1 = 0.5 * (e1 + e2 - root)
    et2 = 0.5 * (e1 + e2 + root)

    den1 = et1 - pair.e2 - pair.delta2
    den2 = et2 - pair.e1 - pair.delta1
    scale = max(abs(e2 - e1), np.sqrt(d12sq), pair.gamma1, pair.gamma2, 1e-300)
    if abs(den1) <= 1e-14 * scale or abs(den2) <= 1e-14 * scale:
        raise SingularConfigurationError(
            "degenerate denominator in dressed-width formula "
            f"(E~1 - E2 - D2 = {den1:.3g}, E~2 - E1 - D1 = {den2:.3g})"
        )
    g1, g2 = np.sqrt(pair.gamma1), np.sqrt(pair.gamma2)
    gt1 = den1**2 / (den1**2 + d12sq) * abs(g1 + pair.delta12 / den1 * g2) ** 2
    gt2 = den2**2 / (den2**2 + d12sq) * abs(g2 + pair.delta12 / den2 * g1) ** 2
    return np.array([et1, et2]), np.array([gt1, gt2])


# ---------------------------------------------------------------------------
# polynomial plumbing (ascending coefficients, numpy.polynomial convention)

def _arrays(resonances: Sequence[Resonance]):
    if len(resonances) == 0:
        raise ValidationError("at least one resonance is required")
    e = np.array([r.e_tilde for r in resonances], dtype=float)
    g = np.array([r.gamma_tilde for r in resonances], dtype=float)
    return e, g


def energy_unit(resonances: Sequence[Resonance]) -> float:
    """Scaled energy unit: spacing of the two lowest levels, else the width."""
    e, g = _arrays(resonances)
    if len(e) >= 2:
        es = np.sort(e)
        de = es[1] - es[0]
        if de > 0:
            return float(de)
        return float(np.ptp(e)) if np.ptp(e) > 0 else float(g.max())
    return float(g[0])


def normalized(resonances: Sequence[Resonance], origin: float | None = None,
               unit: float | None = None) -> list[Resonance]:
    """Copy of ``resonances`` in scaled units ``(E - origin)/unit``."""
    e, _ = _arrays(resonances)
    origin = float(e.min()) if origin is None else origin
    unit = energy_unit(resonances) if unit is None else unit
    return [replace(r, e_tilde=(r.e_tilde - origin) / unit,
                    gamma_tilde=r.gamma_tilde / unit) for r in resonances]


def _cofactor_sum(e, weights):
    """Coefficients of sum_v weights_v prod_{k != v} (lam - e_k)."""
    out = np.zeros(max(len(e), 1), dtype=complex if np.iscomplexobj(weights) else float)
    for v, w in enumerate(weights):
        if w == 0:
            continue
        others = np.delete(e, v)
        c = npoly.polyfromroots(others) if len(others) else np.array([1.0])
        out[: len(c)] += w * c
    return out


def structure_polynomials(resonances: Sequence[Resonance], which: Which = "signal"):
    """Return ``(A, B_1, N_q)`` as ascending coefficient arrays."""
    e, g = _arrays(resonances)
    q = np.array([r.asymmetry(which) for r in resonances], dtype=float)
    a = npoly.polyfromroots(e)
    b1 = _cofactor_sum(e, g)
    nq = npoly.polyadd(a, 0.5 * _cofactor_sum(e, q * g))
    return a, b1, nq


def resonance_polynomial(resonances: Sequence[Resonance]) -> np.ndarray:
    a, b1, _ = structure_polynomials(resonances)
    return npoly.polysub(a.astype(complex), 0.5j * b1)


def numerator(lam, resonances: Sequence[Resonance], which: Which = "signal"):
    """Profile numerator ``N_q(lam)``; accepts complex ``lam``."""
    _, _, nq = structure_polynomials(resonances, which)
    return npoly.polyval(lam, nq)


def numerator_shift(lam, resonances: Sequence[Resonance]):
    """``sum_j q_j zeta_j G_j prod_{k != j}(lam - E_k)`` (control minus signal, times 2)."""
    e, g = _arrays(resonances)
    w = np.array([r.q * r.zeta for r in resonances]) * g
    return npoly.polyval(lam, _cofactor_sum(e, w))


# ---------------------------------------------------------------------------
# public operations

def poles(resonances: Sequence[Resonance], tol: float = POLE_TOL) -> PoleSet:
    """Complex resonance poles, ordered by real part.

    Degree 1 and 2 use closed forms; higher degrees use the eigenvalues of
    the companion matrix, followed by one Newton polish step.  The residual
    ``|P(s)|`` is checked in scaled units.
    """
    e, g = _arrays(resonances)
    unit = energy_unit(resonances)
    origin = float(e.min())
    scaled = normalized(resonances, origin, unit)
    es, gs = _arrays(scaled)
    n = len(es)
    coeffs = resonance_polynomial(scaled)

    if n == 1:
        roots = np.array([es[0] + 0.5j * gs[0]])
    elif n == 2:
        # monic: s^2 + b s + c
        c0, b, _ = coeffs
        disc = np.sqrt(b * b - 4 * c0)
        # avoid cancellation: pick the larger-modulus root first
        big = (-b - disc) / 2 if abs(-b - disc) >= abs(-b + disc) else (-b + disc) / 2
        small = c0 / big if big != 0 else (-b + disc) / 2
        roots = np.array([big, small])
    else:
        roots = np.linalg.eigvals(npoly.polycompanion(coeffs))
        dcoeffs = npoly.polyder(coeffs)
        roots = roots - npoly.polyval(roots, coeffs) / npoly.polyval(roots, dcoeffs)

    residuals = np.abs(npoly.polyval(roots, coeffs))
    if not np.all(residuals < tol):
        raise RootFindingError(
            f"pole residuals {residuals} exceed tolerance {tol:g} (scaled units)",
            residuals=residuals,
        )
    if np.any(roots.imag <= 0):
        raise ModelViolationError(f"pole with Im s <= 0: {roots}")

    order = np.argsort(roots.real, kind="stable")
    roots = roots[order]
    near = bool(np.min(roots.imag) < NEAR_SINGULAR)
    return PoleSet(poles=origin + unit * roots, residuals=residuals[order],
                   near_singular=near)


@dataclass(frozen=True)
class PhaseShift:
    deltas: np.ndarray
    delta: float
    z: float


def phase_shift(lam: float, resonances: Sequence[Resonance]) -> PhaseShift:
    """Partial and total phase shifts at energy ``lam``.

    ``tan(delta_v) = -(G_v/2)/(lam - E_v)`` and ``tan(delta) = sum_v tan(delta_v)
    = -pi/z(lam)``, all angles on the principal branch.
    """
    e, g = _arrays(resonances)
    detuning = lam - e
    if np.any(detuning == 0):
        v = int(np.flatnonzero(detuning == 0)[0])
        raise PoleError(f"energy {lam} sits on resonance {v}: delta_v = +-pi/2")
    tans = -0.5 * g / detuning
    total = tans.sum()
    inv = np.sum(g / (2 * np.pi) / detuning)
    z = np.inf if inv == 0 else 1.0 / inv
    return PhaseShift(deltas=np.arctan(tans), delta=float(np.arctan(total)), z=float(z))


def fano_profile(lam, resonances: Sequence[Resonance], which: Which = "signal",
                 pole_set: PoleSet | None = None):
    """Beutler-Fano ratio ``N_q(lam)^2 / prod_v |lam - s_v|^2`` for real ``lam``."""
    lam = np.asarray(lam, dtype=float)
    ps = poles(resonances) if pole_set is None else pole_set
    num = numerator(lam, resonances, which)
    den = np.ones_like(lam)
    for s in ps.poles:
        den = den * np.abs(lam - s) ** 2
    return num**2 / den


def fano_windows(resonances: Sequence[Resonance], which: Which = "signal",
                 tol: float = WINDOW_TOL) -> np.ndarray:
    """Real zeros of the profile numerator, sorted.

    Complex-conjugate pairs (no real window) are dropped, so at most ``n``
    values are returned.
    """
    e, _ = _arrays(resonances)
    unit = energy_unit(resonances)
    origin = float(e.min())
    scaled = normalized(resonances, origin, unit)
    _, _, nq = structure_polynomials(scaled, which)
    if len(nq) == 2:
        roots = np.array([-nq[0] / nq[1]], dtype=complex)
    else:
        roots = npoly.polyroots(nq)
    real = np.sort(roots[np.abs(roots.imag) < 1e-9].real)
    if len(real):
        # a few Newton steps tighten roots of clustered polynomials
        dn = npoly.polyder(nq)
        for _ in range(3):
            d = npoly.polyval(real, dn)
            step = np.where(d != 0, npoly.polyval(real, nq) / np.where(d != 0, d, 1), 0)
            real = real - step
        res = np.abs(npoly.polyval(real, nq))
        if not np.all(res < tol):
            raise RootFindingError(f"Fano-window residuals {res} exceed {tol:g}", residuals=res)
    return origin + unit * real
