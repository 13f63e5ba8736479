"""Command-line driver: ``excitonmem {spectra,dispersion,simulate,check}``.

Exit codes: 0 success, 1 invalid input, 2 numerical failure.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import scenario
from .errors import NumericalError, ValidationError

log = logging.getLogger("excitonmem")


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, np.ndarray):
        return _jsonable(v.tolist())
    if isinstance(v, (complex, np.complexfloating)):
        return [float(v.real), float(v.imag)]
    if isinstance(v, np.generic):
        return v.item()
    if isinstance(v, float) and not np.isfinite(v):
        return str(v)
    return v


def _header(meta: dict):
    lines = [f"# {k}: {v}" for k, v in scenario.UNITS_NOTE.items()]
    lines += [f"# {k}: {json.dumps(_jsonable(v), sort_keys=True)}" for k, v in sorted(meta.items())]
    return lines


def write_csv(path: Path, columns: dict, meta: dict):
    names = list(columns)
    n = len(next(iter(columns.values())))
    cells = []
    for name in names:
        col = columns[name]
        if col.dtype.kind in "fc":
            cells.append([format(float(v), ".17g") for v in col])
        else:
            cells.append([str(v) for v in col])
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(_header(meta)) + "\n")
        fh.write(",".join(names) + "\n")
        for i in range(n):
            fh.write(",".join(c[i] for c in cells) + "\n")


def write_json(path: Path, data: dict):
    payload = {"units": scenario.UNITS_NOTE, **_jsonable(data)}
    with open(path, "w") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2)
        fh.write("\n")


def _outdir(path: str) -> Path:
    out = Path(path)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ValidationError(f"cannot create output directory {out}: {exc}") from None
    if not out.is_dir():
        raise ValidationError(f"output path {out} is not a directory")
    probe = out / ".write_test"
    try:
        probe.write_text("")
        probe.unlink()
    except OSError as exc:
        raise ValidationError(f"output directory {out} is not writable: {exc}") from None
    return out


def cmd_spectra(cfg, out: Path):
    written, summary = [], {}
    for label, cols, meta in scenario.spectra(cfg):
        name = f"spectra_{label}.csv"
        write_csv(out / name, cols, meta)
        written.append(name)
        summary[label] = meta
    write_json(out / "spectra.json", {"files": written, "sets": summary})
    return written + ["spectra.json"]


def cmd_dispersion(cfg, out: Path):
    written, summary = [], {}
    for label, cols, meta in scenario.dispersion(cfg):
        name = f"dispersion_{label}.csv"
        write_csv(out / name, cols, {"model": label})
        written.append(name)
        summary[label] = meta
    write_json(out / "dispersion.json", {"files": written, "sets": summary})
    return written + ["dispersion.json"]


def cmd_simulate(cfg, out: Path):
    label, cols, meta = scenario.simulate(cfg)
    write_csv(out / "snapshots.csv", cols, {"model": label})
    write_json(out / "memory_report.json", meta)
    return ["snapshots.csv", "memory_report.json"]


def cmd_check(cfg, out: Path):
    write_json(out / "check.json", {"sets": scenario.check(cfg)})
    return ["check.json"]


COMMANDS = {"spectra": cmd_spectra, "dispersion": cmd_dispersion,
            "simulate": cmd_simulate, "check": cmd_check}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # usage errors are input errors: exit 1, keeping 2 for numerical failures
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="excitonmem",
                 description="Fano-exciton quantum memory analyses")
    ap.add_argument("-v", "--verbose", action="store_true", help="log regime ratios")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="YAML scenario (scaled units)")
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--preset", choices=scenario.PRESETS, default=None,
                       help="starting point; a --config overrides its values")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    preset = args.preset or ("custom" if args.config else "ideal")
    try:
        cfg = scenario.load(args.config, preset)
        out = _outdir(args.out)
        for name in COMMANDS[args.command](cfg, out):
            print(out / name)
    except ValidationError as exc:
        log.error("%s", exc)
        return 1
    except NumericalError as exc:
        log.error("numerical failure: %s", exc)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
