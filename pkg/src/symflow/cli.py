"""Batch front end: config parsing, campaign dispatch, report emission.

Usage:

    symflow <command> --config <path> [--seed N] [--out DIR]
    symflow --list-catalog

Commands: verify-symmetries, classify, reduce, invert, simulate, audit.

Config schema (JSON):

    {
      "command": "verify-symmetries",
      "H": 1.0, "gravity": 1.0, "seed": 12345,
      "H_values": [0.5, 1.0, 2.0],
      "tolerances": {"defect": 1e-7, "residual": 1e-5, "newton": 1e-12},
      "catalog": ["pair-c1", "pair-c2", "pair-c3", "bessel-c316"],
      "grid": {"t0": 1.0, "t1": 2.0, "x0": 0.0, "x1": 1.0,
               "nx": 200, "cfl": 0.4, "resolutions": [100, 200, 400]},
      "reduce": {"a": 1.0, "p0": 0.0, "state0": [0.0, 1.0], "p_end": 0.5},
      "n_jets": 200, "n_classify": 1000, "n_orbit_trials": 32
    }

All keys except "command" are optional.  Exit status is 0 iff no check
failed (flagged audit findings do not fail a run).
"""

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .campaigns import COMMANDS, run_campaign
from .errors import ConfigurationError
from .report import emit_artifacts, emit_report
from .solutions import catalog_ids

__all__ = ["Campaign", "load_config", "main"]

DEFAULT_TOLERANCES = {"defect": 1e-7, "residual": 1e-5, "newton": 1e-12}
DEFAULT_GRID = {"t0": 1.0, "t1": 2.0, "x0": 0.0, "x1": 1.0,
                "nx": 200, "cfl": 0.4, "resolutions": [100, 200, 400]}
DEFAULT_REDUCE = {"a": 1.0, "p0": 0.0, "state0": [0.0, 1.0], "p_end": 0.5}

_KNOWN_KEYS = {"command", "H", "gravity", "seed", "H_values", "tolerances",
               "catalog", "grid", "reduce", "n_jets", "n_classify",
               "n_orbit_trials"}


@dataclass
class Campaign:
    command: str
    H: float = 1.0
    gravity: float = 1.0
    seed: int = 12345
    h_values: list = field(default_factory=list)
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    catalog: list = field(default_factory=list)
    grid: dict = field(default_factory=lambda: dict(DEFAULT_GRID))
    reduce: dict = field(default_factory=lambda: dict(DEFAULT_REDUCE))
    n_jets: int = 200
    n_classify: int = 1000
    n_orbit_trials: int = 32

    def __post_init__(self):
        if not self.h_values:
            self.h_values = [self.H]


def _fail(path, message):
    raise ConfigurationError(f"config field {path}: {message}")


def _require_number(value, path, positive=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        _fail(path, f"expected a number, got {value!r}")
    if positive and value <= 0:
        _fail(path, f"must be positive, got {value!r}")
    return float(value)


def load_config(path) -> Campaign:
    """Parse and validate a campaign configuration file."""
    p = Path(path)
    if not p.exists():
        raise ConfigurationError(f"config file not found: {p}")
    try:
        raw = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"config is not valid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise ConfigurationError("config must be a JSON object")
    unknown = set(raw) - _KNOWN_KEYS
    if unknown:
        _fail(sorted(unknown)[0], "unknown key")
    if "command" not in raw:
        _fail("command", "is required")
    if raw["command"] not in COMMANDS:
        _fail("command", f"must be one of {sorted(COMMANDS)}, "
                         f"got {raw['command']!r}")

    cfg = Campaign(command=raw["command"])
    if "H" in raw:
        cfg.H = _require_number(raw["H"], "H")
    if "gravity" in raw:
        cfg.gravity = _require_number(raw["gravity"], "gravity", positive=True)
    if "seed" in raw:
        if isinstance(raw["seed"], bool) or not isinstance(raw["seed"], int):
            _fail("seed", f"expected an integer, got {raw['seed']!r}")
        cfg.seed = raw["seed"]
    if "H_values" in raw:
        if not isinstance(raw["H_values"], list) or not raw["H_values"]:
            _fail("H_values", "expected a non-empty list")
        cfg.h_values = [_require_number(v, f"H_values[{i}]")
                        for i, v in enumerate(raw["H_values"])]
    else:
        cfg.h_values = [cfg.H]

    tol = dict(DEFAULT_TOLERANCES)
    for key, value in raw.get("tolerances", {}).items():
        if key not in DEFAULT_TOLERANCES:
            _fail(f"tolerances.{key}", "unknown tolerance")
        tol[key] = _require_number(value, f"tolerances.{key}", positive=True)
    cfg.tolerances = tol

    known_ids = catalog_ids()
    ids = raw.get("catalog", known_ids)
    if not isinstance(ids, list):
        _fail("catalog", "expected a list of ids")
    for i, cid in enumerate(ids):
        if cid not in known_ids:
            _fail(f"catalog[{i}]", f"unknown catalog id: {cid!r}")
    cfg.catalog = list(ids)

    grid = dict(DEFAULT_GRID)
    for key in raw.get("grid", {}):
        if key not in DEFAULT_GRID:
            _fail(f"grid.{key}", "unknown key")
    grid.update(raw.get("grid", {}))
    for key in ("t0", "t1", "x0", "x1", "cfl"):
        grid[key] = _require_number(grid[key], f"grid.{key}")
    if not grid["t0"] < grid["t1"]:
        _fail("grid.t1", "needs t0 < t1")
    if not grid["x0"] < grid["x1"]:
        _fail("grid.x1", "needs x0 < x1")
    if not 0.0 < grid["cfl"] <= 0.9:
        _fail("grid.cfl", f"must lie in (0, 0.9], got {grid['cfl']}")
    if not isinstance(grid["nx"], int) or grid["nx"] < 4:
        _fail("grid.nx", f"expected an integer >= 4, got {grid['nx']!r}")
    res = grid["resolutions"]
    if (not isinstance(res, list) or len(res) < 3
            or not all(isinstance(n, int) and n >= 4 for n in res)):
        _fail("grid.resolutions", f"expected >= 3 integers >= 4, got {res!r}")
    cfg.grid = grid

    red = dict(DEFAULT_REDUCE)
    for key in raw.get("reduce", {}):
        if key not in DEFAULT_REDUCE:
            _fail(f"reduce.{key}", "unknown key")
    red.update(raw.get("reduce", {}))
    for key in ("a", "p0", "p_end"):
        red[key] = _require_number(red[key], f"reduce.{key}")
    state0 = red["state0"]
    if (not isinstance(state0, (list, tuple)) or len(state0) != 2):
        _fail("reduce.state0", "expected [u, h]")
    red["state0"] = [_require_number(state0[0], "reduce.state0[0]"),
                     _require_number(state0[1], "reduce.state0[1]",
                                     positive=True)]
    cfg.reduce = red

    for key in ("n_jets", "n_classify", "n_orbit_trials"):
        if key in raw:
            if isinstance(raw[key], bool) or not isinstance(raw[key], int) \
                    or raw[key] < 1:
                _fail(key, f"expected a positive integer, got {raw[key]!r}")
            setattr(cfg, key, raw[key])
    return cfg


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="symflow",
        description="verification campaigns for the modified shallow-water "
                    "symmetry laboratory")
    parser.add_argument("command", nargs="?", choices=sorted(COMMANDS),
                        help="campaign to run")
    parser.add_argument("--config", help="path to the JSON configuration")
    parser.add_argument("--seed", type=int, help="override the config seed")
    parser.add_argument("--out", default="out",
                        help="output directory (default: ./out)")
    parser.add_argument("--list-catalog", action="store_true",
                        help="print catalog entry ids and exit")
    args = parser.parse_args(argv)

    if args.list_catalog:
        for cid in catalog_ids():
            print(cid)
        return 0
    if args.command is None:
        parser.error("a command is required (or --list-catalog)")
    if args.config is None:
        parser.error("--config is required")

    try:
        cfg = load_config(args.config)
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if cfg.command != args.command:
        print(f"error: config names command {cfg.command!r}, "
              f"CLI asked for {args.command!r}", file=sys.stderr)
        return 2
    if args.seed is not None:
        cfg.seed = args.seed

    report = run_campaign(cfg)
    paths = emit_report(report, "json", args.out)
    paths += emit_report(report, "csv-summary", args.out)
    paths += emit_artifacts(report, args.out)

    for c in report.checks:
        print(f"[{c.status:>4}] {c.name}  value={c.value:.3e}  "
              f"tol={c.tol:.1e}  ({c.anchor})")
    s = report.summary
    print(f"summary: {s['pass']} pass, {s['flag']} flag, {s['fail']} fail")
    for p in paths:
        print(f"wrote {p}")
    return 0 if s["fail"] == 0 else 1


if __name__ == "__main__":
    raise SystemExit(main())
