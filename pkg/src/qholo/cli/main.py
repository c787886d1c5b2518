"""``qholo`` command line: run presets or configs, list presets, validate configs."""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from ..io import dumps, write_json
from .config import ConfigError, from_document, load_document, validate_document
from .report import RunReport
from .scenarios import PRESETS

EXIT_OK, EXIT_ERROR, EXIT_EXPECTATION = 0, 1, 2

# shortcut flags -> parameter keys (a scalar flag fills a list parameter with one item)
_SHORTCUTS = {"omega": "omega", "kappa": "kappa", "g1": "g1"}


def list_presets() -> list:
    return [{"name": p.name, "description": p.description, "budget_s": p.budget_s}
            for p in PRESETS.values()]


def _parse_set(items) -> dict:
    out = {}
    for item in items or ():
        key, sep, raw = item.partition("=")
        if not sep or not key:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        try:
            out[key] = json.loads(raw)
        except json.JSONDecodeError:
            out[key] = raw
    return out


def _document_from_args(args) -> dict:
    if args.config:
        doc = load_document(args.config)
    else:
        doc = {"scenario": args.preset}
    if not doc.get("scenario"):
        raise ConfigError("scenario: give --preset NAME or a config file")
    params = dict(doc.get("params", {}))
    name = doc["scenario"]
    defaults = PRESETS[name].defaults if name in PRESETS else {}
    for flag, key in _SHORTCUTS.items():
        val = getattr(args, flag)
        if val is None:
            continue
        if key not in defaults:
            raise ConfigError(f"--{flag} does not apply to preset {name!r}")
        params[key] = [val] if isinstance(defaults[key], list) else val
    params.update(_parse_set(args.set))
    doc["params"] = params
    integ = dict(doc.get("integrator", {}))
    if args.dt is not None:
        integ["dt"] = args.dt
    if integ:
        doc["integrator"] = integ
    traj = dict(doc.get("trajectories", {}))
    if args.n_traj is not None:
        traj["n_traj"] = args.n_traj
    if args.seed is not None:
        traj["seed"] = args.seed
    if traj:
        doc["trajectories"] = traj
    out = dict(doc.get("output", {}))
    if args.out:
        out["dir"] = args.out
    doc["output"] = out
    return doc


def run(doc: dict) -> RunReport:
    validate_document(doc, PRESETS)
    preset = PRESETS[doc["scenario"]]
    cfg = from_document(doc, preset.defaults)
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    report = RunReport(cfg.scenario, cfg.as_dict(), cfg.seed)
    t0 = time.perf_counter()
    preset.runner(cfg, report, out)
    report.wall_time_s = time.perf_counter() - t0
    if "json" in cfg.formats:
        write_json(out / f"{cfg.scenario}_report.json", report.as_dict())
    return report


def _print_report(report: RunReport):
    print(f"{report.scenario}: {'PASS' if report.passed else 'FAIL'} ({report.wall_time_s:.1f} s)")
    for s in report.scalars:
        mark = {True: "ok  ", False: "FAIL", None: "    "}[s.passed]
        exp = ""
        if s.comparison:
            tol = f" tol {s.tolerance:g}" if s.tolerance is not None else ""
            exp = f"  [{s.comparison} {s.expected:.6g}{tol}; {s.source}]"
        print(f"  {mark} {s.name} = {s.value:.10g} {s.unit}{exp}")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qholo", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run a preset or config file")
    r.add_argument("config", nargs="?", help="JSON or TOML scenario config")
    r.add_argument("--preset")
    r.add_argument("--omega", type=float)
    r.add_argument("--kappa", type=float)
    r.add_argument("--g1", type=float)
    r.add_argument("--n-traj", type=int)
    r.add_argument("--dt", type=float)
    r.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a preset parameter")
    r.add_argument("--out", help="output directory")
    r.add_argument("--seed", type=int)
    r.add_argument("--json", action="store_true", help="print the report as JSON")
    ls = sub.add_parser("list", help="list presets")
    ls.add_argument("--json", action="store_true")
    v = sub.add_parser("validate", help="schema-check a config file")
    v.add_argument("config")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "list":
        items = list_presets()
        if args.json:
            print(dumps(items))
        else:
            for it in items:
                print(f"{it['name']:<13} {it['description']}")
        return EXIT_OK
    try:
        if args.command == "validate":
            doc = load_document(args.config)
            validate_document(doc, PRESETS)
            print(f"{args.config}: valid ({doc['scenario']})")
            return EXIT_OK
        if args.preset and args.config:
            raise ConfigError("give either --preset or a config file, not both")
        report = run(_document_from_args(args))
    except (ConfigError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    if args.json:
        print(dumps(report.as_dict()))
    else:
        _print_report(report)
    return EXIT_OK if report.passed else EXIT_EXPECTATION


if __name__ == "__main__":
    sys.exit(main())
