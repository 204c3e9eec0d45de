"""Run configuration shared by the CLI and the scenario runners."""

from __future__ import annotations

import copy
import json
from pathlib import Path

from .analytic import GridSpec
from .errors import SchemaError
from .report import config_hash
from .zalcman import WeightFn

DEFAULTS = {
    "grid": {"counts": [48, 96], "refine": True},
    "B_used": 4.5,
    "t0": 4.0,
    "eps0": 2.5,
    "form_R": 2000.0,
    "delta_grid": [32, 64],
    "pj_tol": 1e-6,
}


def load_config(path=None, overrides: dict | None = None) -> dict:
    cfg = copy.deepcopy(DEFAULTS)
    if path is not None:
        try:
            user = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}: invalid JSON ({exc})") from exc
        if not isinstance(user, dict):
            raise SchemaError("config must be a JSON object")
        unknown = set(user) - set(DEFAULTS)
        if unknown:
            raise SchemaError(f"unknown config key(s) {sorted(unknown)}")
        cfg.update(user)
    cfg.update(overrides or {})
    grid_spec(cfg)  # validate early
    weight(cfg)
    return cfg


def grid_spec(cfg: dict) -> GridSpec:
    g = cfg["grid"]
    try:
        return GridSpec("polar-disk-grid", tuple(int(n) for n in g["counts"]), bool(g.get("refine", True)))
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"bad grid config: {exc}") from exc


def weight(cfg: dict) -> WeightFn:
    try:
        return WeightFn("LogSquared", t0=float(cfg["t0"]))
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc


def chash(cfg: dict) -> str:
    return config_hash(cfg)
