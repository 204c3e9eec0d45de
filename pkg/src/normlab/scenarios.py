"""Witness families run end to end through the verification pipelines.

Each scenario is declared in ``data/scenarios.json`` and refers to a fn-dsl
source in ``data/functions.json``; the runner returns a list of
:class:`CheckReport` in a fixed order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from . import analytic as an
from . import config as cfgmod
from .constants import theorem4_witness_check
from .dsl import FnSource, load_fn_file
from .errors import HypothesisFailed, HypothesisUnchecked, NormlabError, SchemaError
from .report import FAIL, HYPOTHESIS_FAILED, PASS, CheckReport, combine, stopwatch
from .roots import verify_lemma7
from .zalcman import default_eps_schedule, rescaled, run_sequence
from .zerofree import extract_form, verify_form_bounds

PROBE = 0.3j
ARG_TOL = 0.05
MOD_TOL = 0.05
STAND_IN_NOTE = ("stand-in dynamics: only the mechanical min/max pattern is checked; "
                 "the function of the original contradiction argument cannot exist")


def data_path(name: str):
    return resources.files("normlab") / "data" / name


def bundled_sources() -> dict[str, FnSource]:
    with resources.as_file(data_path("functions.json")) as p:
        return {s.name: s for s in load_fn_file(p)}


@dataclass(frozen=True)
class Scenario:
    id: str
    kind: str
    family: FnSource
    schedule: dict = field(hash=False)
    checks: tuple = ()
    expected: str = PASS


def load_scenarios(path=None) -> list[Scenario]:
    import json

    sources = bundled_sources()
    if path is None:
        with resources.as_file(data_path("scenarios.json")) as p:
            doc = json.loads(p.read_text(encoding="utf-8"))
    else:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    out, seen = [], set()
    for entry in doc:
        sid = entry["id"]
        if sid in seen:
            raise SchemaError(f"duplicate scenario id {sid!r}")
        seen.add(sid)
        if entry["kind"] not in RUNNERS:
            raise SchemaError(f"{sid}: unknown scenario kind {entry['kind']!r}")
        if entry["family"] not in sources:
            raise SchemaError(f"{sid}: unknown family {entry['family']!r}")
        unknown = [c for c in entry.get("checks", []) if c not in CHECKS[entry["kind"]]]
        if unknown:
            raise SchemaError(f"{sid}: unknown check id(s) {unknown}")
        out.append(Scenario(sid, entry["kind"], sources[entry["family"]], dict(entry["schedule"]),
                            tuple(entry.get("checks", ())), entry.get("expected", PASS)))
    return out


def _increasing(xs) -> bool:
    return all(b > a for a, b in zip(xs, xs[1:]))


def _ks(schedule: dict, minimum: int = 1) -> list:
    ks = list(schedule["ks"])
    if len(ks) < minimum:
        raise ValueError(f"schedule needs at least {minimum} values of k")
    if not _increasing(ks):
        raise ValueError("ks must be strictly increasing")
    return ks


# ---------------------------------------------------------------------------
# dichotomy across the line of 1-points


def scenario_dichotomy(src: FnSource, ks, cfg: dict | None = None) -> list[CheckReport]:
    """Sides of the real axis and the exponential shape of the rescaled limits."""
    cfg = cfg or cfgmod.load_config()
    ks = _ks({"ks": ks}, 3)
    grid = cfgmod.grid_spec(cfg)
    up = [src.build(k=k).log_abs(PROBE) for k in ks]
    down = [src.build(k=k).log_abs(-PROBE) for k in ks]
    if _increasing(up) and _increasing([-d for d in down]):
        side, ok_sides = "infinity_above", True
    elif _increasing(down) and _increasing([-u for u in up]):
        side, ok_sides = "infinity_below", True
    else:
        side, ok_sides = "none", False
    sides = CheckReport(
        "dichotomy.sides", PASS if ok_sides else FAIL,
        {"log_abs_upper": up, "log_abs_lower": down}, {"ks": ks, "probe": PROBE, "side": side},
        sample=None if ok_sides else {"log_abs_upper": up, "log_abs_lower": down})

    run = run_sequence(lambda k: src.build(k=k), 0j, default_eps_schedule(cfg["eps0"]),
                       cfgmod.weight(cfg), ks, grid)
    forms, cs = [], []
    for row in run.rows:
        f = src.build(k=row.k)
        g = rescaled(f, row.z, row.rho)
        form = extract_form(g, cfg["form_R"], cfg["B_used"], grid, strict=False)
        rep = verify_form_bounds(form, tuple(cfg["delta_grid"])).to_check()
        rep.check = "dichotomy.form"
        rep.meta.update({"k": row.k, "c_form": form.c, "b": form.b, "rho": row.rho,
                         "R_sequence": row.R})
        forms.append(rep)
        cs.append(form.c)
    # the limit is exp(c z) with |c| = 2; the side where it is large fixes the sign of arg c
    target = -math.pi / 2 if side == "infinity_above" else math.pi / 2
    arg_err = [abs(math.remainder(np.angle(c) - target, 2 * math.pi)) for c in cs]
    mod_err = [abs(abs(c) - 2) for c in cs]
    ok = arg_err[-1] <= ARG_TOL and mod_err[-1] <= MOD_TOL and ok_sides
    arg_c = CheckReport(
        "dichotomy.arg_c", PASS if ok else FAIL,
        {"arg_error": arg_err, "modulus_error": mod_err},
        {"ks": ks, "target_arg": target, "c": cs, "tolerance": [ARG_TOL, MOD_TOL]},
        sample=None if ok else {"k": ks[-1], "c": cs[-1]})
    return [sides, *forms, arg_c]


# ---------------------------------------------------------------------------
# blow-up at the origin


def scenario_origin_blowup(src: FnSource, ks, centered: bool = False,
                           cfg: dict | None = None) -> list[CheckReport]:
    """``f_k = k^2 (z - a_k)`` with ``a_k = 1/k`` (or 0): spherical derivatives explode
    near 0 and stay bounded on ``0.2 <= |z| <= 0.8``."""
    cfg = cfg or cfgmod.load_config()
    ks = _ks({"ks": ks}, 2)
    grid = cfgmod.grid_spec(cfg)
    sup_center, at_zero, annulus = [], [], []
    n_r, n_t = grid.counts[0], grid.counts[-1]
    rad = np.linspace(0.2, 0.8, n_r)
    ring = np.outer(rad, np.exp(2j * np.pi * np.arange(n_t) / n_t)).ravel()
    for k in ks:
        a = 0.0 if centered else 1.0 / k
        f = src.build(c=float(k * k), a=a)
        fs = an.spherical_fn(f)
        sup_center.append(an.maximize_on_disk(fs, 0j, 0.05, grid).value)
        at_zero.append(float(fs(np.array([a]))[0]))
        annulus.append(float(np.max(fs(ring))))
    exact = all(abs(v - k * k) <= 1e-9 * k * k for v, k in zip(at_zero, ks))
    ok_c = _increasing(sup_center) and exact
    bound = 1.0
    ok_a = max(annulus) <= bound
    center = CheckReport("blowup.center", PASS if ok_c else FAIL,
                         {"sup_fsharp": sup_center, "fsharp_at_zero_of_f": at_zero},
                         {"ks": ks, "disk_radius": 0.05, "centered": centered},
                         sample=None if ok_c else {"sup_fsharp": sup_center})
    ann = CheckReport("blowup.annulus", PASS if ok_a else FAIL,
                      {"max_fsharp": annulus, "slack": bound - max(annulus)},
                      {"ks": ks, "annulus": [0.2, 0.8], "bound": bound},
                      sample=None if ok_a else {"max_fsharp": annulus})
    return [center, ann]


# ---------------------------------------------------------------------------
# factored form f_k = (z - a_k) g_k


def _deflate(coeffs, root: complex):
    """Synthetic division of an ascending coefficient list by ``(z - root)``."""
    desc = list(reversed(coeffs))
    out = [desc[0]]
    for c in desc[1:]:
        out.append(c + root * out[-1])
    return list(reversed(out[:-1])), out[-1]


def scenario_theorem2_form(src: FnSource, ks, cfg: dict | None = None) -> list[CheckReport]:
    cfg = cfg or cfgmod.load_config()
    ks = _ks({"ks": ks}, 2)
    if any(k < 2 for k in ks):
        raise ValueError("k must be at least 2 so that a_k = 1/k stays inside the disk")
    mins, remainders, aks, lemma = [], [], [], []
    for k in ks:
        a = 1.0 / k
        f = src.build(c=float(k * k), a=a)
        if not isinstance(f.node, an.Poly):
            raise SchemaError("theorem2_form needs a polynomial family")
        q, rem = _deflate(list(f.node.coeffs), a)
        g = an.polynomial(q)
        remainders.append(abs(rem))
        mins.append(an.min_modulus_on_circle(g, 0.9).value)
        aks.append(a)
        try:
            rep = verify_lemma7(f, 0.5)
            lemma.append((k, rep.verdict if rep.hypothesis_ok else HYPOTHESIS_FAILED, rep))
        except HypothesisUnchecked as exc:
            lemma.append((k, HYPOTHESIS_FAILED, str(exc)))
    ok = (all(r <= 1e-12 * k * k for r, k in zip(remainders, ks)) and _increasing(mins)
          and _increasing([-a for a in aks]))
    factor = CheckReport("form0a.factor", PASS if ok else FAIL,
                         {"remainder": remainders, "min_abs_g_on_0.9": mins}, {"ks": ks, "a_k": aks},
                         sample=None if ok else {"remainder": remainders, "min": mins})
    verdicts = [v for _, v, _ in lemma]
    lem_v = combine(PASS if v in ("OnePair", "Empty") else
                    (HYPOTHESIS_FAILED if v == HYPOTHESIS_FAILED else FAIL) for v in verdicts)
    lem = CheckReport("form0a.lemma7", lem_v, {},
                      {"ks": ks, "r": 0.5, "verdicts": verdicts,
                       "reports": [rep for _, _, rep in lemma]},
                      sample=None if lem_v != FAIL else {"verdicts": verdicts})
    return [factor, lem]


# ---------------------------------------------------------------------------
# min/max pattern on |z| = 1/2 after rescaling


def scenario_0a1_rescale(src: FnSource, radii, cfg: dict | None = None) -> list[CheckReport]:
    cfg = cfg or cfgmod.load_config()
    radii = [float(r) for r in radii]
    if len(radii) < 2 or not _increasing(radii):
        raise ValueError("radii must be strictly increasing (at least two)")
    grid = cfgmod.grid_spec(cfg)
    f = src.build()
    mins, maxs = [], []
    for r in radii:
        fk = f.compose_affine(2 * r, 0)
        mins.append(an.min_modulus_on_circle(fk, 0.5, grid=grid).value)
        maxs.append(an.max_modulus_on_circle(fk, 0.5, grid=grid).value)
    min_ok = all(m <= 1 + 1e-12 for m in mins)
    diverging = _increasing(maxs) and maxs[-1] >= 10 * maxs[0]
    ok = min_ok and diverging
    detail = STAND_IN_NOTE if ok else STAND_IN_NOTE + "; premise failed: maxima do not diverge"
    if not min_ok:
        detail = STAND_IN_NOTE + "; premise failed: min modulus above 1"
    return [CheckReport("minmax.pattern", PASS if ok else FAIL,
                        {"min_on_half": mins, "max_on_half": maxs}, {"radii": radii},
                        sample=None if ok else {"max_on_half": maxs, "min_on_half": mins},
                        detail=detail)]


def scenario_theorem4_witness(src: FnSource, r: float, cfg: dict | None = None):
    try:
        return [theorem4_witness_check(src.build(), r)]
    except HypothesisFailed as exc:
        return [CheckReport("theorem4_witness", HYPOTHESIS_FAILED, {}, {"r": r}, detail=str(exc))]


RUNNERS = {
    "dichotomy": lambda sc, cfg: scenario_dichotomy(sc.family, sc.schedule["ks"], cfg),
    "origin_blowup": lambda sc, cfg: scenario_origin_blowup(
        sc.family, sc.schedule["ks"], bool(sc.schedule.get("centered", False)), cfg),
    "theorem2_form": lambda sc, cfg: scenario_theorem2_form(sc.family, sc.schedule["ks"], cfg),
    "minmax_rescale": lambda sc, cfg: scenario_0a1_rescale(sc.family, sc.schedule["radii"], cfg),
    "theorem4_witness": lambda sc, cfg: scenario_theorem4_witness(sc.family, sc.schedule["r"], cfg),
}

CHECKS = {
    "dichotomy": {"dichotomy.sides", "dichotomy.form", "dichotomy.arg_c"},
    "origin_blowup": {"blowup.center", "blowup.annulus"},
    "theorem2_form": {"form0a.factor", "form0a.lemma7"},
    "minmax_rescale": {"minmax.pattern"},
    "theorem4_witness": {"theorem4_witness"},
}


def run_scenario(sc: Scenario, cfg: dict | None = None) -> list[CheckReport]:
    """Run one scenario; the last report compares the observed verdict to ``expected``."""
    cfg = cfg or cfgmod.load_config()
    with stopwatch() as sw:
        try:
            reports = RUNNERS[sc.kind](sc, cfg)
        except NormlabError as exc:
            reports = [CheckReport(f"{sc.id}.error", FAIL, {}, {},
                                   sample={"error": f"{type(exc).__name__}: {exc}"})]
    observed = combine(r.verdict for r in reports)
    missing = [c for c in sc.checks if c not in {r.check for r in reports}]
    ok = observed == sc.expected and not missing
    h = cfgmod.chash(cfg)
    for r in reports:
        r.meta["scenario"] = sc.id
        r.meta["config_hash"] = h
    summary = CheckReport(
        f"scenario:{sc.id}", PASS if ok else FAIL, {},
        {"observed": observed, "expected": sc.expected, "family": sc.family.to_json(),
         "schedule": sc.schedule, "config_hash": h},
        sw[0], None if ok else {"observed": observed, "missing_checks": missing})
    return [*reports, summary]
