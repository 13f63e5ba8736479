"""Scenario configuration, presets and the four analyses behind the CLI.

A scenario is a YAML mapping.  Every number is in scaled units and the
``units`` block is mandatory::

    units: {system: scaled, c: 1.0}
    model:                       # optional; omitted -> ideal response beta1 = pi
      kind: closed_form          # closed_form | pole_sum
      resonances:                # for closed_form: exactly two, levels at x = 0 and 1
        - {e: 0.0, gamma: 0.2, q: 7, zeta: 0.1}
        - {e: 1.0, gamma: 0.2, q: 4, zeta: 0.1}
      # or bare_pair: {e1, e2, gamma1, gamma2, delta1, delta2, delta12, q: [q1, q2], zeta: [..]}
      eps2: 0.0
    medium: {n_g2: 1.0, omega_ctrl2: 1.0e-4, gamma_c: 0, nu: 0, gamma2: 0,
             operating_x: transparency}     # or a number
    grids:
      x: {start: -1, stop: 2, num: 601}
      k: {start: -0.5, stop: 0.5, num: 201}
      z: {length: 400, num: 4096}
    pulse: {shape: gaussian, width: 10, center: -50}   # or shape: custom, samples: [[re, im], ...]
    schedule: {write: 0, storage: 5, read: 1.0e6}      # durations
    # or schedule: {segments: [[t0, t1, re, im], ...]}
    simulate: {method: formula, velocities: memory, snapshots: 5}
    tolerances: {threshold: 0.1}
"""
from __future__ import annotations

import copy
import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any

import numpy as np
import yaml

from . import memory
from .dispersion import (
    MediumParams,
    check_conditions,
    dispersion_sweep,
    memory_regime,
    small_k,
    wavenumbers,
)
from .dynamics import PulseState, gaussian_pulse, uniform_grid
from .errors import ValidationError
from .fano import BareResonancePair, Resonance, effective_levels
from .response import FanoModel, ResponsePoint, TwoResonanceModel, transparency_point

log = logging.getLogger(__name__)

PRESETS = ("fig3", "ideal", "custom")

UNITS_NOTE = {
    "units": "scaled",
    "c": "speed of light, set to 1",
    "rate": "n_g2 = N g^2; omega_ctrl2 = |Om|^2, nu, gamma_c, gamma2 in the same rate unit",
    "x": "(omega - (E1 - eps2)) / (E2 - E1); single resonance: width as unit",
    "z,t": "lengths in c / rate, times in 1 / rate",
}

_BASE = {
    "units": {"system": "scaled", "c": 1.0},
    "medium": {"n_g2": 1.0, "omega_ctrl2": 1.0e-4, "gamma_c": 0.0, "nu": 0.0,
               "gamma2": 0.0, "operating_x": "transparency"},
    "grids": {"x": {"start": -1.0, "stop": 2.0, "num": 601},
              "k": {"start": -0.5, "stop": 0.5, "num": 201},
              "z": {"length": 400.0, "num": 4096}},
    "pulse": {"shape": "gaussian", "width": 10.0, "center": -50.0, "amplitude": 1.0},
    "schedule": {"write": 0.0, "storage": 5.0, "read": 1.0e6},
    "simulate": {"method": "formula", "velocities": "memory", "snapshots": 5},
    "tolerances": {"threshold": 0.1},
}

FIG3_SETS = ((7.0, 4.0), (8.0, 6.0))


def _fig3_model(q1, q2):
    return {"kind": "closed_form", "eps2": 0.0, "resonances": [
        {"e": 0.0, "gamma": 0.2, "q": q1, "zeta": 0.1},
        {"e": 1.0, "gamma": 0.2, "q": q2, "zeta": 0.1}]}


def preset(name: str) -> dict:
    """Raw mapping of a named preset (``custom`` is the bare defaults)."""
    if name not in PRESETS:
        raise ValidationError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    raw = copy.deepcopy(_BASE)
    if name == "fig3":
        raw["model"] = _fig3_model(*FIG3_SETS[0])
        raw["model_sets"] = [_fig3_model(*qs) for qs in FIG3_SETS]
        raw["medium"]["omega_ctrl2"] = 1.0e-2
        raw["grids"]["z"] = {"length": 4000.0, "num": 4096}
        raw["pulse"].update(width=100.0, center=-500.0)
        raw["schedule"] = {"write": 0.0, "storage": 5.0, "read": 1.0e4}
    return raw


def _merge(base: dict, extra: dict) -> dict:
    out = copy.deepcopy(base)
    for k, v in extra.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = _merge(out[k], v)
        else:
            out[k] = copy.deepcopy(v)
    return out


# ---------------------------------------------------------------------------

@dataclass
class ScenarioConfig:
    raw: dict
    models: list                    # [(label, model or None)]
    base_params: MediumParams
    operating_x: Any
    x: np.ndarray
    k: np.ndarray
    z: np.ndarray
    pulse: PulseState
    schedule: memory.ControlSchedule
    method: str
    velocities: str
    snapshots: int
    threshold: float
    thresholds: dict = field(default_factory=dict)

    @property
    def model(self):
        return self.models[0][1]

    def params_for(self, model) -> tuple[MediumParams, float | None]:
        """Medium parameters with the response evaluated at the operating point."""
        if model is None:
            return self.base_params, None
        op = self.operating_x
        x0 = transparency_point(self.x, model, self.base_params.gamma2) \
            if op == "transparency" else float(op)
        r = model.response(x0, self.base_params.gamma2)
        r = ResponsePoint(*(complex(np.asarray(getattr(r, n))) for n in
                            ("beta1", "beta1L", "beta2", "b", "f")))
        return replace(self.base_params, response=r), x0


def _num(d, key, default=None, positive=False, nonneg=False):
    v = d.get(key, default)
    if v is None:
        raise ValidationError(f"missing required value '{key}'")
    try:
        v = float(v)
    except (TypeError, ValueError):
        raise ValidationError(f"'{key}' must be a number, got {v!r}") from None
    if not np.isfinite(v):
        raise ValidationError(f"'{key}' must be finite")
    if positive and v <= 0:
        raise ValidationError(f"'{key}' must be > 0")
    if nonneg and v < 0:
        raise ValidationError(f"'{key}' must be >= 0")
    return v


def _complex(v):
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise ValidationError(f"complex values are [re, im] pairs, got {v!r}")
        return complex(float(v[0]), float(v[1]))
    return complex(v)


def _grid(block, name):
    if not isinstance(block, dict):
        raise ValidationError(f"grid '{name}' must be a mapping")
    n = int(_num(block, "num"))
    if n < 1:
        raise ValidationError(f"grid '{name}' is empty")
    return np.linspace(_num(block, "start"), _num(block, "stop"), n)


def _build_model(block):
    if block is None:
        return None
    kind = block.get("kind", "pole_sum")
    if "bare_pair" in block:
        bp = block["bare_pair"]
        pair = BareResonancePair(
            e1=_num(bp, "e1"), e2=_num(bp, "e2"),
            gamma1=_num(bp, "gamma1", nonneg=True), gamma2=_num(bp, "gamma2", nonneg=True),
            delta1=_num(bp, "delta1", 0.0), delta2=_num(bp, "delta2", 0.0),
            delta12=_complex(bp.get("delta12", 0.0)))
        e, g = effective_levels(pair)
        qs = bp.get("q", [0.0, 0.0])
        zs = bp.get("zeta", [0.0, 0.0])
        res = [Resonance(float(e[i]), float(g[i]), float(qs[i]), float(zs[i])) for i in range(2)]
    else:
        items = block.get("resonances")
        if not items:
            raise ValidationError("model needs 'resonances' or 'bare_pair'")
        res = [Resonance(_num(r, "e"), _num(r, "gamma", positive=True),
                         _num(r, "q"), _num(r, "zeta", 0.0)) for r in items]
    eps2 = _num(block, "eps2", 0.0)
    if kind == "pole_sum":
        return FanoModel(res, eps2)
    if kind == "closed_form":
        if len(res) != 2:
            raise ValidationError("closed_form needs exactly two resonances")
        (r1, r2) = sorted(res, key=lambda r: r.e_tilde)
        unit = r2.e_tilde - r1.e_tilde
        if unit <= 0:
            raise ValidationError("closed_form needs two distinct levels")
        if abs(r1.e_tilde) > 1e-12 or abs(unit - 1) > 1e-12 or eps2 != 0:
            raise ValidationError("closed_form is written for levels at 0 and 1 with eps2 = 0")
        return TwoResonanceModel(r1.gamma_tilde, r2.gamma_tilde, r1.q, r2.q, r1.zeta, r2.zeta)
    raise ValidationError(f"model kind must be 'closed_form' or 'pole_sum', not {kind!r}")


def _label(model, i):
    if model is None:
        return "ideal"
    if isinstance(model, TwoResonanceModel):
        return f"q{model.q1:g}_q{model.q2:g}"
    return f"set{i}"


def _schedule(block, omega):
    if not isinstance(block, dict):
        raise ValidationError("'schedule' must be a mapping")
    if "segments" in block:
        segs = []
        for s in block["segments"]:
            if len(s) not in (3, 4):
                raise ValidationError(
                    "segments are [t_start, t_end, re] or [t_start, t_end, re, im]")
            om = complex(s[2], s[3] if len(s) == 4 else 0.0)
            segs.append((float(s[0]), float(s[1]), om))
        return memory.ControlSchedule(tuple(segs))
    return memory.ControlSchedule.write_store_read(
        omega, _num(block, "write", nonneg=True), _num(block, "storage", nonneg=True),
        _num(block, "read", nonneg=True))


def _pulse(block, z):
    shape = block.get("shape", "gaussian")
    if shape == "gaussian":
        return gaussian_pulse(z, _num(block, "width", positive=True), _num(block, "center", 0.0),
                              _complex(block.get("amplitude", 1.0)))
    if shape == "custom":
        samples = np.array([_complex(v) for v in block.get("samples", [])])
        if samples.shape != z.shape:
            raise ValidationError(f"custom pulse needs {z.size} samples, got {samples.size}")
        return PulseState(z, samples, np.zeros_like(samples))
    raise ValidationError(f"pulse shape must be 'gaussian' or 'custom', not {shape!r}")


def from_mapping(raw: dict) -> ScenarioConfig:
    """Validate a raw mapping and build the scenario."""
    if not isinstance(raw, dict):
        raise ValidationError("configuration must be a mapping")
    units = raw.get("units")
    if not isinstance(units, dict):
        raise ValidationError("the 'units' block is mandatory")
    if units.get("system") != "scaled":
        raise ValidationError("only scaled units are accepted (units.system: scaled)")
    c = _num(units, "c", 1.0, positive=True)

    med = raw.get("medium", {})
    base = MediumParams(n_g2=_num(med, "n_g2", positive=True),
                        omega_ctrl2=_num(med, "omega_ctrl2", nonneg=True),
                        gamma_c=_num(med, "gamma_c", 0.0, nonneg=True),
                        nu=_num(med, "nu", 0.0),
                        gamma2=_num(med, "gamma2", 0.0, nonneg=True), c=c)
    op = med.get("operating_x", "transparency")
    if op != "transparency":
        op = _num(med, "operating_x")

    sets = raw.get("model_sets") or [raw.get("model")]
    built = [_build_model(s) for s in sets]
    if any(isinstance(m, TwoResonanceModel) for m in built) and base.gamma2 != 0:
        raise ValidationError("closed_form responses assume gamma2 = 0; use kind: pole_sum")
    models = [(_label(m, i), m) for i, m in enumerate(built)]

    grids = raw.get("grids", {})
    x = _grid(grids.get("x"), "x")
    k = _grid(grids.get("k"), "k")
    zs = grids.get("z", {})
    z = uniform_grid(_num(zs, "length", positive=True), int(_num(zs, "num", positive=True)))

    sim = raw.get("simulate", {})
    method = sim.get("method", "formula")
    velocities = sim.get("velocities", "memory")
    if method not in ("formula", "exact"):
        raise ValidationError("simulate.method must be 'formula' or 'exact'")
    if velocities not in ("memory", "small_k"):
        raise ValidationError("simulate.velocities must be 'memory' or 'small_k'")
    tol = raw.get("tolerances", {})
    threshold = _num(tol, "threshold", 0.1, positive=True)
    thresholds = {k: float(v) for k, v in tol.items() if k != "threshold"}

    cfg = ScenarioConfig(
        raw=raw, models=models, base_params=base, operating_x=op, x=x, k=k, z=z,
        pulse=_pulse(raw.get("pulse", {}), z),
        schedule=_schedule(raw.get("schedule", {}), np.sqrt(base.omega_ctrl2)),
        method=method, velocities=velocities,
        snapshots=int(_num(sim, "snapshots", 5, positive=True)),
        threshold=threshold, thresholds=thresholds)
    _log_ratios(cfg)
    return cfg


def _log_ratios(cfg: ScenarioConfig):
    for label, model in cfg.models:
        params, _ = cfg.params_for(model)
        rep = check_conditions(params, model=model, threshold=cfg.threshold,
                               thresholds=cfg.thresholds)
        for name, ratio in rep.ratios.items():
            level = logging.INFO if rep.passed[name] else logging.WARNING
            log.log(level, "%s: regime ratio %s = %.3g", label, name, ratio)


def load(path: str | Path | None = None, preset_name: str = "custom") -> ScenarioConfig:
    """Preset defaults overridden by the YAML file at ``path``."""
    raw = preset(preset_name)
    if path is not None:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ValidationError(f"cannot read config {path}: {exc}") from None
        try:
            user = yaml.safe_load(text) or {}
        except yaml.YAMLError as exc:
            raise ValidationError(f"malformed YAML in {path}: {exc}") from None
        if not isinstance(user, dict):
            raise ValidationError("configuration must be a mapping")
        if "units" not in user:
            raise ValidationError("the 'units' block is mandatory")
        if "model" in user:
            raw.pop("model_sets", None)
        raw = _merge(raw, user)
    elif preset_name == "custom":
        raise ValidationError("the custom preset needs --config")
    return from_mapping(raw)


# ---------------------------------------------------------------------------
# analyses (return plain data; cli.py writes files)

def spectra(cfg: ScenarioConfig):
    """Per model set: ``(label, columns dict, meta dict)``."""
    if cfg.x.size == 0:
        raise ValidationError("empty x grid")
    out = []
    for label, model in cfg.models:
        if model is None:
            raise ValidationError("spectra need a model (resonances or bare_pair)")
        g2 = cfg.base_params.gamma2
        r = model.response(cfg.x, g2)
        cols = {"x": cfg.x}
        for name in ("beta1", "beta1L", "beta2", "b", "f"):
            v = np.asarray(getattr(r, name))
            cols[f"re_{name}"] = v.real
            cols[f"im_{name}"] = v.imag
        far = model.beta1(np.array([-50.0, 50.0]), g2) / np.pi - 1
        meta = {"model": label, "asymptote_beta1_over_pi_minus_1": {
            "x=-50": [far[0].real, far[0].imag], "x=+50": [far[1].real, far[1].imag]}}
        out.append((label, cols, meta))
    return out


def dispersion(cfg: ScenarioConfig):
    out = []
    for label, model in cfg.models:
        params, x0 = cfg.params_for(model)
        wp, wm, resid = dispersion_sweep(cfg.k, params)
        cols = {"k": cfg.k, "re_omega_plus": wp.real, "im_omega_plus": wp.imag,
                "re_omega_minus": wm.real, "im_omega_minus": wm.imag, "eig_residual": resid}
        wn = wavenumbers(params)
        meta = {"model": label, "operating_x": x0,
                "response": params.response.as_dict(),
                "wavenumbers": {n: getattr(wn, n) for n in
                                ("k0", "k1", "k2", "k0_tilde", "k0_tilde_prime")},
                "small_k": small_k(wn, params.c).as_dict(),
                "max_eig_residual": float(resid.max()),
                "conditions": check_conditions(params, model=model, threshold=cfg.threshold,
                                               thresholds=cfg.thresholds).as_dict()}
        if params.omega_ctrl2 > 0:
            import warnings
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", RuntimeWarning)
                meta["memory_regime"] = memory_regime(params, model, cfg.threshold).branch.as_dict()
        out.append((label, cols, meta))
    return out


def simulate(cfg: ScenarioConfig):
    """Round trip for the first model set plus field snapshots during the read."""
    label, model = cfg.models[0]
    params, x0 = cfg.params_for(model)
    report = memory.round_trip(cfg.pulse, cfg.schedule, params, cfg.method, cfg.velocities,
                               model=model, threshold=cfg.threshold)
    _, _, t_read, _, om_r = cfg.schedule.phases()
    p_read = replace(params, omega_ctrl2=abs(om_r) ** 2)
    rows = [("input", 0.0, cfg.pulse), ("stored", 0.0, report.stored)]
    for t in np.linspace(0.0, t_read, cfg.snapshots + 1)[1:]:
        rows.append(("read", float(t), memory.retrieve_stage(
            report.stored, p_read, float(t), cfg.method, cfg.velocities)))
    stage, time, zz, a, s = [], [], [], [], []
    for name, t, p in rows:
        stage += [name] * p.z.size
        time.append(np.full(p.z.size, t))
        zz.append(p.z)
        a.append(p.alpha)
        s.append(p.sigma21)
    a = np.concatenate(a)
    s = np.concatenate(s)
    cols = {"stage": np.array(stage), "t": np.concatenate(time), "z": np.concatenate(zz),
            "re_alpha": a.real, "im_alpha": a.imag, "re_sigma21": s.real,
            "im_sigma21": s.imag, "abs_alpha2": np.abs(a) ** 2}
    meta = {"model": label, "operating_x": x0, "method": cfg.method,
            "velocities": cfg.velocities, "report": report.as_dict()}
    return label, cols, meta


def check(cfg: ScenarioConfig):
    out = {}
    for label, model in cfg.models:
        params, x0 = cfg.params_for(model)
        branch = small_k(wavenumbers(params), params.c) if params.omega_ctrl2 > 0 else None
        duration = None
        if branch is not None and branch.vg_plus > 0:
            duration = memory.rms_width(cfg.pulse) / branch.vg_plus
        rep = check_conditions(params, duration, model, cfg.threshold, cfg.thresholds)
        entry = {"operating_x": x0, "pulse_duration": duration, **rep.as_dict()}
        if branch is not None:
            entry["chi_over_vg"] = branch.chi_plus / branch.vg_plus
        out[label] = entry
    return out
