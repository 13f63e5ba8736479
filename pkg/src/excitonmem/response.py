"""Complex response functions of the Fano medium.

All functions are returned in units where the bare continuum value is ``pi``
(the response tends to ``pi`` far from every resonance).  The frequency
variable is the dimensionless detuning ``x``::

    x = (omega - (E_1 - eps2)) / unit,     probe energy  eps2 + omega = E_1 + x * unit

where ``unit`` is the level spacing ``E_2 - E_1`` (or the width of a single
resonance).

Two evaluation routes are provided:

* :class:`FanoModel` - the general ``n``-resonance pole sum, obtained by
  closing the ``lam`` contour around the conjugate poles ``s_v*`` of the
  profile ratio.
* :class:`TwoResonanceModel` - the closed forms for two isolated resonances
  with small ``p_k = G_k / (E_2 - E_1)``, in which ``gamma2`` does not appear.

:func:`beta_quadrature` integrates the profile kernel directly and serves as
an independent check on the pole sum.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence, Union

import numpy as np
from scipy import integrate

from . import fano
from .errors import NumericalError, ValidationError
from .fano import Resonance


@dataclass(frozen=True)
class ResponsePoint:
    """Response functions at one or many frequencies (arrays broadcast)."""

    beta1: complex
    beta1L: complex
    beta2: complex
    b: complex
    f: complex

    @classmethod
    def from_beta(cls, beta1, b=0.0):
        """Build a point from ``beta1`` and ``b`` using the small-mismatch relations."""
        beta1 = np.asarray(beta1, dtype=complex)
        b = np.asarray(b, dtype=complex)
        return cls(beta1=beta1, beta1L=beta1 + b, beta2=beta1 + 0.5 * b, b=b,
                   f=f_from(b, beta1))

    @classmethod
    def ideal(cls, beta1=np.pi):
        return cls.from_beta(beta1, 0.0)

    def at(self, i) -> "ResponsePoint":
        return ResponsePoint(*(np.asarray(getattr(self, n))[i] for n in _FIELDS))

    def as_dict(self):
        return {n: complex(np.asarray(getattr(self, n))) for n in _FIELDS}


_FIELDS = ("beta1", "beta1L", "beta2", "b", "f")


def f_from(b, beta1):
    """``f = b * conj(beta1) / |beta1|^2``."""
    beta1 = np.asarray(beta1, dtype=complex)
    return np.asarray(b) * np.conj(beta1) / np.abs(beta1) ** 2


# ---------------------------------------------------------------------------
# generic pole-sum model

class FanoModel:
    """General ``n``-resonance medium.

    Parameters
    ----------
    resonances : sequence of Resonance
    eps2 : float
        Energy of lower level 2; only the combination ``eps2 + omega`` matters.
    """

    def __init__(self, resonances: Sequence[Resonance], eps2: float = 0.0):
        self.resonances = tuple(resonances)
        if not self.resonances:
            raise ValidationError("FanoModel needs at least one resonance")
        self.eps2 = float(eps2)
        self.pole_set = fano.poles(self.resonances)
        s = self.pole_set.poles
        gaps = np.abs(s[:, None] - s[None, :])[~np.eye(len(s), dtype=bool)]
        if gaps.size and gaps.min() < 1e-12 * self.unit:
            raise NumericalError("coincident poles: cross-pole products vanish")

    @classmethod
    def two_resonance(cls, p1, p2, q1, q2, zeta1=0.0, zeta2=0.0):
        """Levels at 0 and 1 with widths ``p1``, ``p2`` (spacing is the unit)."""
        return cls([Resonance(0.0, p1, q1, zeta1), Resonance(1.0, p2, q2, zeta2)])

    @cached_property
    def unit(self) -> float:
        return fano.energy_unit(self.resonances)

    @property
    def e_ref(self) -> float:
        return min(r.e_tilde for r in self.resonances)

    @property
    def zetas(self):
        return np.array([r.zeta for r in self.resonances])

    @property
    def p(self):
        return np.array([r.gamma_tilde for r in self.resonances]) / self.unit

    def probe_energy(self, x):
        """``eps2 + omega`` for dimensionless detuning ``x``."""
        return self.e_ref + np.asarray(x, dtype=float) * self.unit

    def omega(self, x):
        return self.probe_energy(x) - self.eps2

    def x_of_omega(self, omega):
        return (np.asarray(omega, dtype=float) + self.eps2 - self.e_ref) / self.unit

    @cached_property
    def _pole_terms(self):
        """Per-pole factors that do not depend on frequency."""
        s = self.pole_set.poles
        sc = np.conj(s)
        cross = np.ones(len(s), dtype=complex)
        for v in range(len(s)):
            for k in range(len(s)):
                if k != v:
                    cross[v] *= (sc[v] - s[k]) * (sc[v] - np.conj(s[k]))
        n_sig = fano.numerator(sc, self.resonances, "signal")
        n_ctl = fano.numerator(sc, self.resonances, "control")
        dn = fano.numerator_shift(sc, self.resonances)
        return s, cross, n_sig, n_ctl, dn

    def _pole_sum(self, x, gamma2, which):
        if gamma2 < 0:
            raise ValidationError("gamma2 must be >= 0")
        w = np.atleast_1d(self.probe_energy(x))[..., None]
        s, cross, n_sig, n_ctl, dn = self._pole_terms
        den = (s.real - w - 1j * (0.5 * gamma2 + s.imag)) * cross
        num = {"beta1": n_sig**2, "beta1L": n_ctl**2, "beta2": n_ctl * n_sig,
               "b": n_sig * dn}[which]
        total = np.sum(num / (s.imag * den), axis=-1)
        return total.reshape(np.shape(x))

    def beta1(self, x, gamma2=0.0):
        return np.pi * (1 - 1j * self._pole_sum(x, gamma2, "beta1"))

    def beta1L(self, x, gamma2=0.0):
        return np.pi * (1 - 1j * self._pole_sum(x, gamma2, "beta1L"))

    def beta2(self, x, gamma2=0.0):
        return np.pi * (1 - 1j * self._pole_sum(x, gamma2, "beta2"))

    def b(self, x, gamma2=0.0):
        return -1j * np.pi * self._pole_sum(x, gamma2, "b")

    def response(self, x, gamma2=0.0) -> ResponsePoint:
        b1 = self.beta1(x, gamma2)
        bb = self.b(x, gamma2)
        return ResponsePoint(beta1=b1, beta1L=self.beta1L(x, gamma2),
                             beta2=self.beta2(x, gamma2), b=bb, f=f_from(bb, b1))


# ---------------------------------------------------------------------------
# two-resonance closed forms

@dataclass(frozen=True)
class TwoResonanceModel:
    """Closed-form response of two isolated resonances (levels at x=0, x=1)."""

    p1: float
    p2: float
    q1: float
    q2: float
    zeta1: float = 0.0
    zeta2: float = 0.0

    unit = 1.0

    @property
    def zetas(self):
        return np.array([self.zeta1, self.zeta2])

    @property
    def p(self):
        return np.array([self.p1, self.p2])

    def to_generic(self) -> FanoModel:
        return FanoModel.two_resonance(self.p1, self.p2, self.q1, self.q2,
                                       self.zeta1, self.zeta2)

    def _denoms(self, x):
        x = np.asarray(x, dtype=float)
        d1 = x + 1j * self.p1 * (x + 0.5)
        d2 = x - 1 - 1j * self.p2 * (x - 1.5)
        return d1, d2

    @staticmethod
    def _check(gamma2):
        if gamma2 != 0:
            raise ValidationError("the two-resonance closed form has no gamma2 dependence; "
                                  "use FanoModel for gamma2 > 0")

    def beta1(self, x, gamma2=0.0):
        self._check(gamma2)
        d1, d2 = self._denoms(x)
        return np.pi * (1 - 0.5j * self.p1 * (1 + 1j * self.q1) ** 2 / d1
                        - 0.5j * self.p2 * (1 + 1j * self.q2) ** 2 / d2)

    def b(self, x, gamma2=0.0):
        self._check(gamma2)
        d1, d2 = self._denoms(x)
        return np.pi * (self.p1 * self.q1 * (1 + 1j * self.q1) / d1 * self.zeta1
                        + self.p2 * self.q2 * (1 + 1j * self.q2) / d2 * self.zeta2)

    def beta1L(self, x, gamma2=0.0):
        return self.beta1(x, gamma2) + self.b(x, gamma2)

    def beta2(self, x, gamma2=0.0):
        return self.beta1(x, gamma2) + 0.5 * self.b(x, gamma2)

    def response(self, x, gamma2=0.0) -> ResponsePoint:
        return ResponsePoint.from_beta(self.beta1(x, gamma2), self.b(x, gamma2))


Model = Union[FanoModel, TwoResonanceModel]


# module-level operations -----------------------------------------------------

def beta1(x, model: Model, gamma2=0.0):
    return model.beta1(x, gamma2)


def beta1L(x, model: Model, gamma2=0.0):
    return model.beta1L(x, gamma2)


def beta2(x, model: Model, gamma2=0.0):
    return model.beta2(x, gamma2)


def b_func(x, model: Model, gamma2=0.0):
    return model.b(x, gamma2)


def f_func(x, model: Model, gamma2=0.0):
    return f_from(model.b(x, gamma2), model.beta1(x, gamma2))


def response(x, model: Model, gamma2=0.0) -> ResponsePoint:
    return model.response(x, gamma2)


def transparency_point(x, model: Model, gamma2=0.0) -> float:
    """Grid point of least relative absorption ``Re beta1 / |beta1|``.

    Only points with ``Re beta1 >= 0`` qualify: the closed forms can dip
    slightly below zero near a window, which would be gain rather than
    transparency.  If no grid point qualifies, the smallest ``|Re beta1|``
    is used.
    """
    x = np.asarray(x, dtype=float)
    if x.size == 0:
        raise ValidationError("empty x grid")
    b1 = model.beta1(x, gamma2)
    score = np.abs(b1.real) / np.abs(b1)
    if np.any(b1.real >= 0):
        score = np.where(b1.real >= 0, score, np.inf)
    return float(x[np.argmin(score)])


# ---------------------------------------------------------------------------
# quadrature oracle

def beta_quadrature(x: float, model: FanoModel, gamma2: float = 0.0,
                    which: str = "signal", span: float = 50.0,
                    epsabs: float = 1e-8, limit: int = 2000) -> complex:
    """``-i * integral F(lam) / (lam - w - i gamma2/2) dlam`` by adaptive quadrature.

    ``F`` is the Beutler-Fano profile ratio and ``w = eps2 + omega``.  The
    range is ``[E_min - span*unit, E_max + span*unit]``.  For ``gamma2 == 0``
    the integral is split into a principal value (QUADPACK Cauchy weight) and
    ``i*pi*F(w)``.  The exact pole sum is the infinite-range limit, so the
    difference measures truncation of the energy window.
    """
    res = model.resonances
    e = np.array([r.e_tilde for r in res])
    lo = e.min() - span * model.unit
    hi = e.max() + span * model.unit
    w = float(model.probe_energy(x))
    ps = model.pole_set

    def prof(lam):
        return fano.fano_profile(lam, res, which, ps)

    pts = sorted(set(np.concatenate([e, [w]]).tolist()))
    pts = [p for p in pts if lo < p < hi]
    if gamma2 > 0:
        eta = 0.5 * gamma2

        def re(lam):
            return prof(lam) * (lam - w) / ((lam - w) ** 2 + eta**2)

        def im(lam):
            return prof(lam) * eta / ((lam - w) ** 2 + eta**2)

        ir = integrate.quad(re, lo, hi, points=pts, epsabs=epsabs, epsrel=0, limit=limit)[0]
        ii = integrate.quad(im, lo, hi, points=pts, epsabs=epsabs, epsrel=0, limit=limit)[0]
        integral = ir + 1j * ii
    else:
        if not lo < w < hi:
            raise ValidationError("probe energy outside the quadrature window")
        pv = integrate.quad(prof, lo, hi, weight="cauchy", wvar=w,
                            epsabs=epsabs, epsrel=0, limit=limit)[0]
        integral = pv + 1j * np.pi * float(prof(w))
    return -1j * integral
