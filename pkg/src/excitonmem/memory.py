"""Write / store / retrieve protocol with instantaneous control switching.

Timeline (piecewise-constant control):

1. *write* - control on; the input pulse travels as a slow polariton;
2. switch-off - the field is mapped onto the lower-level coherence and the
   field amplitude is set to zero;
3. *storage* - control off; ``sigma21`` only picks up ``exp(i (nu + i gamma_c/2) t)``;
4. *read* - control on again; the slow field component is regenerated.

Two retrieval models:

``"formula"``
    closed form: a constant amplitude prefactor, the gain/loss factor
    ``exp(k chi t)`` and translation by ``v_g t``, with ``v_g`` and ``chi``
    from the memory-regime expressions (or from the exact small-k expansion
    when ``velocities="small_k"``).
``"exact"``
    slow-wave part of the analytic mode solution started from
    ``alpha = 0``, ``sigma21 = stored``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .dispersion import (
    BranchPoint,
    ConditionReport,
    MediumParams,
    check_conditions,
    memory_regime,
    small_k,
    wavenumbers,
)
from .dynamics import (
    ModeState,
    PulseState,
    check_resolution,
    evolve_mode_analytic,
    to_kspace,
    to_zspace,
)
from .errors import ValidationError

Method = Literal["formula", "exact"]
NOISE_FLOOR = 1e-15


@dataclass(frozen=True)
class ControlSchedule:
    """Ordered, non-overlapping segments ``(t_start, t_end, omega)``.

    Gaps between segments are control-off intervals.
    """

    segments: tuple

    def __post_init__(self):
        segs = tuple((float(a), float(b), complex(o)) for a, b, o in self.segments)
        for a, b, _ in segs:
            if b < a:
                raise ValidationError(f"segment ends before it starts: ({a}, {b})")
        for (a0, b0, _), (a1, _, _) in zip(segs, segs[1:]):
            if a1 < b0:
                raise ValidationError("control segments overlap or are out of order")
        object.__setattr__(self, "segments", segs)

    @classmethod
    def write_store_read(cls, omega: complex, write: float, storage: float,
                         read: float) -> "ControlSchedule":
        """Control on for ``write``, off for ``storage``, on again (at t = 0) for ``read``."""
        return cls(((-storage - write, -storage, omega), (0.0, read, omega)))

    def phases(self):
        """``(write_duration, storage_duration, read_duration, omega_write, omega_read)``."""
        on = [s for s in self.segments if abs(s[2]) > 0]
        if len(on) != 2:
            raise ValidationError("the protocol needs exactly two control-on segments "
                                  f"(write and read), got {len(on)}")
        (a0, b0, o0), (a1, b1, o1) = on
        return b0 - a0, a1 - b0, b1 - a1, o0, o1


@dataclass
class MemoryReport:
    stored: PulseState
    retrieved: PulseState
    fidelity: float
    amplitude_ratio: float
    delay: float
    expected_delay: float
    absorption_length: float
    effective_length: float
    chi_over_vg: float
    branch: BranchPoint
    conditions: ConditionReport
    warnings: list = field(default_factory=list)

    def as_dict(self):
        return {
            "fidelity": self.fidelity,
            "amplitude_ratio": self.amplitude_ratio,
            "delay": self.delay,
            "expected_delay": self.expected_delay,
            "absorption_length_l": self.absorption_length,
            "effective_length_L": self.effective_length,
            "chi_over_vg": self.chi_over_vg,
            "branch": self.branch.as_dict(),
            "conditions": self.conditions.as_dict(),
            "warnings": list(self.warnings),
        }


# ---------------------------------------------------------------------------

def storage_factor(params: MediumParams) -> complex:
    """``1 - f/2 - (gamma_c/2 - i nu) / (|Om|^2 beta1)`` mapping field to coherence."""
    r = params.response
    return complex(1 - 0.5 * complex(r.f)
                   - (0.5 * params.gamma_c - 1j * params.nu)
                   / (params.omega_ctrl2 * complex(r.beta1)))


def retrieval_prefactor(params: MediumParams) -> complex:
    """``1 - |Om|^2 f / G + i (nu + i gamma_c/2) / (beta1 |Om|^2)``."""
    r = params.response
    return complex(1 - params.omega_ctrl2 / params.n_g2 * complex(r.f)
                   + 1j / complex(r.beta1) * params.mu / params.omega_ctrl2)


def _need_control(params):
    if params.omega_ctrl2 <= 0:
        raise ValidationError("the control field must be on for this stage")


def eit_ratio(params: MediumParams, duration: float) -> float:
    return float(params.omega_ctrl2 * abs(complex(params.response.beta1)) * duration)


def write_stage(pulse: PulseState, params: MediumParams, duration: float | None = None,
                threshold: float = 0.1):
    """Coherence left in the medium when the control is switched off.

    Returns ``(stored, warnings)``; ``stored`` has ``alpha = 0`` and
    ``sigma21 = -storage_factor * g * alpha / Om``.  If ``duration`` is given the
    adiabatic condition ``|Om|^2 |beta1| T >> 1`` is checked.
    """
    _need_control(params)
    notes = []
    if duration is not None:
        ratio = eit_ratio(params, duration)
        if ratio <= 0 or 1 / ratio >= threshold:
            notes.append(f"EIT condition weak: |Om|^2 |beta1| T = {ratio:.3g}")
    sigma = -storage_factor(params) * params.g * pulse.alpha / params.omega_ctrl
    return PulseState(pulse.z, np.zeros_like(pulse.alpha), sigma, pulse.t), notes


def store(stored: PulseState, params: MediumParams, duration: float) -> PulseState:
    """Control-off interval: ``sigma21 *= exp(i (nu + i gamma_c/2) duration)``."""
    if duration < 0:
        raise ValidationError("storage duration must be >= 0")
    return PulseState(stored.z, stored.alpha, stored.sigma21 * np.exp(1j * params.mu * duration),
                      stored.t + duration)


def _velocities(params, velocities):
    if velocities == "memory":
        import warnings
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            return memory_regime(params).branch
    if velocities == "small_k":
        return small_k(wavenumbers(params), params.c)
    raise ValidationError(f"velocities must be 'memory' or 'small_k', not {velocities!r}")


def _gain_translate(modes_alpha, k, branch: BranchPoint, t):
    a = modes_alpha.copy()
    if branch.chi_plus * t != 0:
        floor = NOISE_FLOOR * np.abs(a).max()
        a[np.abs(a) < floor] = 0.0
    return a * np.exp(k * branch.chi_plus * t) * np.exp(-1j * k * branch.vg_plus * t)


def retrieve_stage(stored: PulseState, params: MediumParams, t: float,
                   method: Method = "formula", velocities: str = "memory",
                   k_max: float | None = None) -> PulseState:
    """Field regenerated ``t`` after the control is switched back on.

    The returned pulse carries the slow field component in ``alpha`` and the
    slow coherence in ``sigma21`` (the latter only for ``method="exact"``; the
    closed form describes the field only and leaves ``sigma21`` at zero).
    """
    _need_control(params)
    modes = to_kspace(stored)
    check_resolution(modes, k_max)
    k = modes.k
    if method == "exact":
        start = ModeState(k, np.zeros_like(modes.sigma21), modes.sigma21)
        out = evolve_mode_analytic(start, params, t, branch="slow")
    elif method == "formula":
        alpha0 = -modes.sigma21 * params.omega_ctrl / (params.g * storage_factor(params))
        branch = _velocities(params, velocities)
        a = retrieval_prefactor(params) * _gain_translate(alpha0, k, branch, t)
        out = ModeState(k, a, np.zeros_like(a))
    else:
        raise ValidationError(f"unknown retrieval method {method!r}")
    return to_zspace(out, stored.z, stored.t + t)


def free_propagate(pulse: PulseState, params: MediumParams, t: float,
                   method: Method = "formula", velocities: str = "memory") -> PulseState:
    """Slow-polariton transport during the write phase.

    ``formula`` applies gain and translation without the amplitude prefactor;
    ``exact`` uses the slow wave of the analytic solution with the coherence
    initialised on the adiabatic value.
    """
    if t == 0:
        return pulse
    modes = to_kspace(pulse)
    check_resolution(modes)
    if method == "formula":
        branch = _velocities(params, velocities)
        a = _gain_translate(modes.alpha, modes.k, branch, t)
        return to_zspace(ModeState(modes.k, a, np.zeros_like(a)), pulse.z, pulse.t + t)
    sigma0 = -storage_factor(params) * params.g * modes.alpha / params.omega_ctrl
    out = evolve_mode_analytic(ModeState(modes.k, modes.alpha, sigma0), params, t, "slow")
    return to_zspace(out, pulse.z, pulse.t + t)


# ---------------------------------------------------------------------------
# diagnostics

def shifted_overlap(reference: PulseState, candidate: PulseState):
    """Best normalised overlap of ``candidate`` with ``reference`` over shifts.

    Returns ``(fidelity, shift)`` where the fidelity is
    ``|<ref(z - shift), cand>|^2 / (||ref||^2 ||cand||^2)`` maximised over a
    continuous periodic shift; the phase-sensitive complex overlap is used.
    """
    a = np.asarray(reference.alpha)
    b = np.asarray(candidate.alpha)
    na, nb = np.vdot(a, a).real, np.vdot(b, b).real
    if na == 0 or nb == 0:
        raise ValidationError("cannot compare an empty pulse")
    n = a.size
    fa, fb = np.fft.fft(a), np.fft.fft(b)
    k = 2 * np.pi * np.fft.fftfreq(n, d=reference.dz)

    def overlap(shift):
        # <a shifted by +shift, b>
        return abs(np.sum(np.conj(fa * np.exp(-1j * k * shift)) * fb)) ** 2 / (n * n)

    corr = np.abs(np.fft.ifft(np.conj(fa) * fb)) ** 2
    j = int(np.argmax(corr))
    s0 = (j if j <= n // 2 else j - n) * reference.dz
    res = minimize_scalar(lambda s: -overlap(s), bounds=(s0 - reference.dz, s0 + reference.dz),
                          method="bounded", options={"xatol": 1e-10 * reference.dz})
    best = min(1.0, -res.fun / (na * nb))
    return float(best), float(res.x)


def fidelity(reference: PulseState, candidate: PulseState) -> float:
    """Shift-maximised normalised overlap, in [0, 1]."""
    return shifted_overlap(reference, candidate)[0]


def round_trip(pulse: PulseState, schedule: ControlSchedule, params: MediumParams,
               method: Method = "formula", velocities: str = "memory",
               pulse_duration: float | None = None, model=None,
               threshold: float = 0.1) -> MemoryReport:
    """Run write, storage and read through ``schedule`` and score the output.

    ``params.omega_ctrl2`` is replaced by ``|omega|^2`` of each on-segment.
    ``pulse_duration`` (the input pulse duration ``T``) defaults to the
    pulse rms width divided by ``v_g``; it sets ``k_char = 1/(v_g T)`` for the
    absorption-length criterion.
    """
    if not np.any(np.abs(pulse.alpha) > 0):
        raise ValidationError("input pulse is empty")
    t_write, t_store, t_read, om_w, om_r = schedule.phases()
    p_write = _with_omega(params, om_w)
    p_read = _with_omega(params, om_r)
    notes = []

    branch = _velocities(p_read, velocities)
    if pulse_duration is None:
        pulse_duration = rms_width(pulse) / branch.vg_plus

    moved = free_propagate(pulse, p_write, t_write, method, velocities)
    stored, w = write_stage(moved, p_write, pulse_duration, threshold)
    notes.extend(w)
    stored = store(stored, params, t_store)
    out = retrieve_stage(stored, p_read, t_read, method, velocities)

    fid, delay = shifted_overlap(pulse, out)
    amp = float(np.linalg.norm(out.alpha) / np.linalg.norm(pulse.alpha))
    v_write = _velocities(p_write, velocities).vg_plus
    expected = v_write * t_write + branch.vg_plus * t_read

    chi_v = branch.chi_plus / branch.vg_plus
    k_char = 1.0 / (branch.vg_plus * pulse_duration)
    big_l = 1.0 / k_char
    small_l = np.inf if chi_v == 0 else 1.0 / (k_char * abs(chi_v))
    conds = check_conditions(p_read, pulse_duration, model, threshold)
    conds.ratios["reconstruction"] = abs(chi_v)
    conds.passed["reconstruction"] = bool(abs(chi_v) < threshold)
    notes.extend(f"regime condition '{k}' violated (ratio {conds.ratios[k]:.3g})"
                 for k in conds.failures())
    return MemoryReport(stored=stored, retrieved=out, fidelity=fid, amplitude_ratio=amp,
                        delay=delay, expected_delay=expected, absorption_length=small_l,
                        effective_length=big_l, chi_over_vg=chi_v, branch=branch,
                        conditions=conds, warnings=notes)


def rms_width(pulse: PulseState) -> float:
    """Rms width of ``|alpha|`` (equals ``w`` for ``exp(-z^2/(2 w^2))``)."""
    w = np.abs(pulse.alpha)
    tot = w.sum()
    mean = np.sum(pulse.z * w) / tot
    return float(np.sqrt(np.sum((pulse.z - mean) ** 2 * w) / tot))


def _with_omega(params: MediumParams, omega: complex) -> MediumParams:
    from dataclasses import replace
    return replace(params, omega_ctrl2=abs(omega) ** 2,
                   ctrl_phase=float(np.angle(omega)) if omega != 0 else params.ctrl_phase)
