"""Command-line interface: ``phaseloc {grid,measures,verify,report}``.

Runs are described by a JSON config (``--config``) whose fields can be
overridden by flags.  Recognised keys::

    {
      "states": ["vacuum", "coherent:1", ...],
      "cutoff": 63,
      "grid": {"R": "auto", "N": 256},
      "relations": ["entropy_relation", "collision_case", ...],
      "r_orders": [2, 3, 4, 8, "inf"],
      "q_orders": [0.5, 1, 2, 3, 5, "inf"],
      "p1_q_orders": [1, 2, "inf"],
      "output": {"dir": "phaseloc_out", "formats": ["json", "table"]},
      "workers": 1
    }

Exit status: 0 success, 1 a verdict failed, 2 bad configuration,
3 numerical validity error.
"""

from __future__ import annotations

import argparse
import copy
import json
import math
import re
import sys
from pathlib import Path

import numpy as np

from . import fieldio
from .battery import DEFAULT_BATTERY
from .engine import PhaseGrid, auto_grid, check_order, husimi_q, integrate, order_smooth, wigner_w
from .errors import ConfigError, NumericalValidityError
from .fock import make_state, parse_descriptor
from .inequalities import (
    DEFAULT_P1_ORDERS,
    DEFAULT_R_ORDERS,
    RELATIONS,
    BatteryConfig,
    run_battery,
    summarize,
    verdict_table,
)
from .measures import MeasureConfig, StateAnalysis, build_measure_report, format_exponent, parse_exponent

EXIT_OK, EXIT_FAILED, EXIT_CONFIG, EXIT_NUMERICAL = 0, 1, 2, 3
FORMATS = ("csv", "bin", "json", "table")
_KEYS = {"states", "cutoff", "grid", "relations", "r_orders", "q_orders", "p1_q_orders", "output", "workers"}

DEFAULTS = {
    "states": None,
    "cutoff": 63,
    "grid": {"R": "auto", "N": 256},
    "relations": list(RELATIONS),
    "r_orders": [format_exponent(r) for r in DEFAULT_R_ORDERS],
    "q_orders": [format_exponent(q) for q in MeasureConfig().q_orders],
    "p1_q_orders": [format_exponent(q) for q in DEFAULT_P1_ORDERS],
    "output": {"dir": "phaseloc_out", "formats": None},
    "workers": 1,
}
_DEFAULT_FORMATS = {"grid": ["csv"], "measures": ["json", "table"], "verify": ["json", "table"], "report": ["json", "table"]}


# -- JSON -------------------------------------------------------------------


def to_jsonable(obj):
    """Plain JSON types; infinities become ``"inf"``/``"-inf"``, NaN becomes null."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return None
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if isinstance(obj, complex):
        return {"re": to_jsonable(obj.real), "im": to_jsonable(obj.imag)}
    if obj is None or isinstance(obj, str):
        return obj
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    return str(obj)


def dump_json(obj) -> str:
    return json.dumps(to_jsonable(obj), indent=2, allow_nan=False) + "\n"


# -- config -----------------------------------------------------------------


def _merge(base: dict, extra: dict) -> dict:
    out = copy.deepcopy(base)
    for k, v in extra.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = _merge(out[k], v)
        else:
            out[k] = copy.deepcopy(v)
    return out


def _load_config(path) -> dict:
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    unknown = sorted(set(data) - _KEYS)
    if unknown:
        raise ConfigError(f"unknown config key(s) {unknown}; allowed: {sorted(_KEYS)}")
    return data


def _orders(values, name) -> list:
    if not isinstance(values, list) or not values:
        raise ConfigError(f"{name} must be a non-empty list")
    return [format_exponent(parse_exponent(v)) for v in values]


def resolve_config(args, command: str) -> dict:
    """Defaults, then the config file, then command-line flags."""
    cfg = copy.deepcopy(DEFAULTS)
    if args.config:
        cfg = _merge(cfg, _load_config(args.config))
    if args.state:
        cfg["states"] = list(args.state)
    if args.cutoff is not None:
        cfg["cutoff"] = args.cutoff
    if args.grid_N is not None:
        cfg["grid"]["N"] = args.grid_N
    if args.grid_R is not None:
        cfg["grid"]["R"] = args.grid_R
    if args.out is not None:
        cfg["output"]["dir"] = args.out
    if args.format:
        cfg["output"]["formats"] = list(dict.fromkeys(args.format))
    if getattr(args, "workers", None) is not None:
        cfg["workers"] = args.workers

    if cfg["states"] is None:
        cfg["states"] = list(DEFAULT_BATTERY)
    if not isinstance(cfg["states"], list) or not cfg["states"]:
        raise ConfigError("the state list is empty")
    for desc in cfg["states"]:
        parse_descriptor(desc)
    cfg["states"] = [parse_descriptor(d).to_json() if isinstance(d, dict) else d for d in cfg["states"]]

    cutoff = cfg["cutoff"]
    if isinstance(cutoff, bool) or not isinstance(cutoff, int) or cutoff < 1:
        raise ConfigError(f"cutoff must be a positive integer, got {cutoff!r}")
    grid = cfg["grid"]
    n = grid.get("N")
    if isinstance(n, bool) or not isinstance(n, int) or n < 16 or n % 2:
        raise ConfigError(f"grid N must be an even integer >= 16, got {n!r}")
    r = grid.get("R", "auto")
    if isinstance(r, str):
        if r.strip().lower() != "auto":
            try:
                r = float(r)
            except ValueError:
                raise ConfigError(f"grid R must be a number or 'auto', got {r!r}") from None
        else:
            r = "auto"
    if r != "auto" and not (isinstance(r, (int, float)) and math.isfinite(r) and r > 0):
        raise ConfigError(f"grid R must be a positive number or 'auto', got {r!r}")
    grid["R"] = r
    if not isinstance(cfg["relations"], list) or not cfg["relations"]:
        raise ConfigError("relations must be a non-empty list")
    unknown = [x for x in cfg["relations"] if x not in RELATIONS]
    if unknown:
        raise ConfigError(f"unknown relation(s) {unknown}; choose from {list(RELATIONS)}")
    for key in ("r_orders", "q_orders", "p1_q_orders"):
        cfg[key] = _orders(cfg[key], key)
    formats = cfg["output"].get("formats") or _DEFAULT_FORMATS[command]
    bad = [f for f in formats if f not in FORMATS]
    if bad:
        raise ConfigError(f"unknown output format(s) {bad}; choose from {list(FORMATS)}")
    cfg["output"]["formats"] = formats
    workers = cfg["workers"]
    if isinstance(workers, bool) or not isinstance(workers, int) or workers < 1:
        raise ConfigError(f"workers must be a positive integer, got {workers!r}")
    return cfg


def _grid_for(cfg, rho) -> PhaseGrid:
    r, n = cfg["grid"]["R"], cfg["grid"]["N"]
    return auto_grid(rho, n) if r == "auto" else PhaseGrid(r, n)


def _slug(tag: str) -> str:
    return re.sub(r"[^A-Za-z0-9.+-]+", "_", tag).strip("_")


def _echo(cfg, resolved_extents: dict) -> dict:
    out = copy.deepcopy(cfg)
    out["grid"]["resolved_R"] = resolved_extents
    return out


def _out_dir(cfg) -> Path:
    path = Path(cfg["output"]["dir"])
    path.mkdir(parents=True, exist_ok=True)
    return path


# -- commands ---------------------------------------------------------------


def cmd_grid(args) -> int:
    s = check_order(args.order)
    cfg = resolve_config(args, "grid")
    if len(cfg["states"]) != 1:
        raise ConfigError(f"grid needs exactly one state, got {len(cfg['states'])}")
    rho = make_state(cfg["states"][0], cfg["cutoff"])
    grid = _grid_for(cfg, rho)
    if s == 0:
        field = wigner_w(rho, grid)
    elif s == -1:
        field = husimi_q(rho, grid)
    else:
        field = order_smooth(wigner_w(rho, grid), s)
    norm = integrate(field)
    values = np.asarray(field.values)
    out = _out_dir(cfg)
    stem = f"field_{_slug(rho.tag)}_s{s:g}"
    written = []
    formats = cfg["output"]["formats"]
    if "csv" in formats:
        written.append(fieldio.write_csv(field, out / f"{stem}.csv"))
    if "bin" in formats:
        written.append(fieldio.write_binary(field, out / f"{stem}.bin"))
    meta = {
        "config": _echo(cfg, {rho.tag: grid.half_extent}),
        "state_tag": rho.tag,
        "order": s,
        "grid": grid.to_dict(),
        "normalisation": norm.value,
        "normalisation_error": norm.error,
        "min": float(values.min()),
        "max": float(values.max()),
        "n_max": rho.n_max,
        "tail_mass": rho.tail_mass,
    }
    if "json" in formats:
        path = out / f"{stem}.json"
        path.write_text(dump_json(meta))
        written.append(path)
    print(f"state {rho.tag}  order {s:g}  R {grid.half_extent:g}  N {grid.points}")
    print(f"normalisation {norm.value:.15g}  error {norm.error:.3e}")
    for path in written:
        print(f"wrote {path}")
    return EXIT_OK


def _measure_config(cfg) -> MeasureConfig:
    r = cfg["grid"]["R"]
    return MeasureConfig(
        q_orders=tuple(parse_exponent(q) for q in cfg["q_orders"]),
        points=cfg["grid"]["N"],
        half_extent=None if r == "auto" else float(r),
    )


def _measure_reports(cfg):
    mcfg = _measure_config(cfg)
    reports, extents = [], {}
    for desc in cfg["states"]:
        rho = make_state(desc, cfg["cutoff"])
        analysis = StateAnalysis(rho, mcfg.grid_for(rho))
        extents[rho.tag] = analysis.grid.half_extent
        reports.append(build_measure_report(rho, mcfg, analysis))
    return reports, extents


def measures_table(reports) -> str:
    head = f"{'state':<34} {'wehrl':>12} {'R_2':>12} {'R_inf':>12} {'S_delta':>12} {'C_rho':>12} {'purity':>10}"
    rows = [head, "-" * len(head)]
    for rep in reports:
        renyi = {q: v for q, v in rep.renyi_wehrl}
        r2 = renyi.get(2.0, math.nan)
        rinf = renyi.get(math.inf, math.nan)
        rows.append(
            f"{rep.state_tag[:34]:<34} {rep.wehrl:>12.8f} {r2:>12.8f} {rinf:>12.8f} "
            f"{rep.suessmann_entropy:>12.8f} {rep.nonclassicality:>12.8f} {rep.purity:>10.6f}"
        )
    return "\n".join(rows) + "\n"


def _write_measures(cfg, reports, extents, out):
    formats = cfg["output"]["formats"]
    echo = _echo(cfg, extents)
    if "json" in formats:
        for i, rep in enumerate(reports):
            payload = {"config": echo, "report": rep.to_dict()}
            (out / f"measures_{i:02d}_{_slug(rep.state_tag)}.json").write_text(dump_json(payload))
    table = measures_table(reports)
    if "table" in formats:
        (out / "measures_table.txt").write_text(table)
    return table


def cmd_measures(args) -> int:
    cfg = resolve_config(args, "measures")
    reports, extents = _measure_reports(cfg)
    table = _write_measures(cfg, reports, extents, _out_dir(cfg))
    sys.stdout.write(table)
    return EXIT_OK


def _battery_config(cfg) -> BatteryConfig:
    r = cfg["grid"]["R"]
    return BatteryConfig(
        relations=tuple(cfg["relations"]),
        r_orders=tuple(parse_exponent(x) for x in cfg["r_orders"]),
        p1_q_orders=tuple(parse_exponent(x) for x in cfg["p1_q_orders"]),
        cutoff=cfg["cutoff"],
        points=cfg["grid"]["N"],
        half_extent=None if r == "auto" else float(r),
    )


def _verify(cfg):
    bcfg = _battery_config(cfg)
    verdicts = run_battery(cfg["states"], bcfg, workers=cfg["workers"])
    extents = {}
    for desc in cfg["states"]:
        try:
            rho = make_state(desc, cfg["cutoff"])
            extents[rho.tag] = bcfg.grid_for(rho).half_extent
        except Exception:  # noqa: BLE001 - the verdicts already carry the error
            extents[str(desc)] = None
    return verdicts, extents


def _verify_status(verdicts) -> int:
    numerical = ("NumericalValidityError", "GridError")
    if any(v.error and v.error.split(":", 1)[0] in numerical for v in verdicts):
        return EXIT_NUMERICAL
    return EXIT_OK if all(v.passed for v in verdicts) else EXIT_FAILED


def _write_verdicts(cfg, verdicts, extents, out):
    formats = cfg["output"]["formats"]
    table = verdict_table(verdicts)
    if "json" in formats:
        payload = {
            "config": _echo(cfg, extents),
            "summary": summarize(verdicts),
            "verdicts": [v.to_dict() for v in verdicts],
        }
        (out / "verdicts.json").write_text(dump_json(payload))
    if "table" in formats:
        (out / "verdicts_table.txt").write_text(table)
    return table


def cmd_verify(args) -> int:
    cfg = resolve_config(args, "verify")
    verdicts, extents = _verify(cfg)
    table = _write_verdicts(cfg, verdicts, extents, _out_dir(cfg))
    sys.stdout.write(table)
    summary = summarize(verdicts)
    print(f"{summary['passed']} passed, {summary['failed']} failed")
    return _verify_status(verdicts)


def cmd_report(args) -> int:
    cfg = resolve_config(args, "report")
    out = _out_dir(cfg)
    reports, extents = _measure_reports(cfg)
    m_table = _write_measures(cfg, reports, extents, out)
    verdicts, v_extents = _verify(cfg)
    v_table = _write_verdicts(cfg, verdicts, v_extents, out)
    if "json" in cfg["output"]["formats"]:
        bundle = {
            "config": _echo(cfg, extents),
            "measures": [r.to_dict() for r in reports],
            "summary": summarize(verdicts),
            "verdicts": [v.to_dict() for v in verdicts],
        }
        (out / "report.json").write_text(dump_json(bundle))
    sys.stdout.write(m_table + "\n" + v_table)
    summary = summarize(verdicts)
    print(f"{summary['passed']} passed, {summary['failed']} failed")
    return _verify_status(verdicts)


# -- entry point ------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON run configuration")
    common.add_argument("--state", action="append", help="state descriptor (repeatable)")
    common.add_argument("--cutoff", type=int, help="Fock cutoff n_max")
    common.add_argument("--grid-N", dest="grid_N", type=int, help="points per axis (even, >= 16)")
    common.add_argument("--grid-R", dest="grid_R", help="half extent, or 'auto'")
    common.add_argument("--out", help="output directory")
    common.add_argument("--format", action="append", choices=FORMATS, help="output format (repeatable)")

    parser = argparse.ArgumentParser(prog="phaseloc", description="Phase-space localisation measures and inequalities.")
    sub = parser.add_subparsers(dest="command", required=True)
    g = sub.add_parser("grid", parents=[common], help="sample W, Q or an intermediate ordering on a grid")
    g.add_argument("--order", type=float, default=0.0, help="ordering s in [-1, 0] (0 = Wigner, -1 = Husimi)")
    g.set_defaults(func=cmd_grid)
    for name, func, text in (
        ("measures", cmd_measures, "localisation measures per state"),
        ("verify", cmd_verify, "check the inequality battery"),
        ("report", cmd_report, "measures and verification together"),
    ):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--workers", type=int, help="processes for the battery")
        p.set_defaults(func=func)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalValidityError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
