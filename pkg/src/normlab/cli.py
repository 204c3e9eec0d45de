"""Command-line front end: ``normlab <subcommand> ...``.

Reports go to stdout as JSON lines.  Exit status: 0 when every report passes,
1 on any failure, 2 on usage or input errors, 3 when a verdict is indeterminate.
"""

from __future__ import annotations

import argparse
import csv
import sys
from concurrent.futures import ProcessPoolExecutor

import mpmath
import numpy as np

from . import analytic as an
from . import config as cfgmod
from .analytic import Disk
from .constants import (hempel_lai_A, max_feasible_C, poisson_jensen_check, theorem4_feasible,
                        theorem4_witness_check)
from .dsl import load_fn_file
from .errors import (HypothesisFailed, HypothesisUnchecked, Indeterminate, NormlabError,
                     ParseError, SchemaError)
from .report import FAIL, HYPOTHESIS_FAILED, INDETERMINATE, PASS, CheckReport, stopwatch
from .roots import count_a_points, locate_a_points, verify_lemma7
from .scenarios import bundled_sources, load_scenarios, run_scenario
from .zalcman import default_eps_schedule, find_rescaling, run_sequence
from .zerofree import extract_form, verify_form_bounds

PRINTED_A_DIGITS = "4.3768796"

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INDETERMINATE = 0, 1, 2, 3


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# argument helpers


def _complex(text: str) -> complex:
    parts = [p.strip() for p in text.split(",")]
    try:
        if len(parts) == 1:
            return complex(parts[0].replace("i", "j")) if "i" in parts[0] else complex(float(parts[0]))
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"expected 're' or 're,im', got {text!r}")


def _disk(text: str) -> Disk:
    try:
        x, y, r = (float(p) for p in text.split(","))
        return Disk(complex(x, y), r)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected 'cx,cy,r', got {text!r}") from exc


def _floats(text: str) -> list[float]:
    try:
        vals = [float(p) for p in text.split(",") if p.strip()]
        return [int(v) if v.is_integer() else v for v in vals]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _param(text: str):
    name, _, value = text.partition("=")
    try:
        return name.strip(), float(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected name=value, got {text!r}") from exc


def _load_fn(args):
    if args.fn in ("@bundled", None):
        sources = bundled_sources()
    else:
        sources = {s.name: s for s in load_fn_file(args.fn)}
    if args.name not in sources:
        raise UsageError(f"no function named {args.name!r} (have: {', '.join(sorted(sources))})")
    return sources[args.name]


def _add_fn_args(p, with_params: bool = True):
    p.add_argument("--fn", default="@bundled", help="JSON function file ('@bundled' for the built-in set)")
    p.add_argument("--name", required=True, help="function name inside the file")
    if with_params:
        p.add_argument("--param", type=_param, action="append", default=[],
                       help="override a parameter, name=value (repeatable)")


def _build(args):
    return _load_fn(args).build(**dict(args.param))


# ---------------------------------------------------------------------------
# subcommands


def cmd_constants(args, cfg):
    out = []
    with stopwatch() as sw:
        A = hempel_lai_A()
    target = mpmath.mpf(PRINTED_A_DIGITS)
    rel = float(abs(A.value - target) / target)
    ok = rel <= 5e-7  # seven significant figures
    out.append(CheckReport("constants.A", PASS if ok else FAIL,
                           {"relative_to_printed": rel},
                           {"A": A, "printed": PRINTED_A_DIGITS}, sw[0],
                           None if ok else {"A": A.digits(12)}))
    for C in args.C:
        with stopwatch() as sw:
            try:
                v = theorem4_feasible(C)
            except Indeterminate as exc:
                out.append(CheckReport("constants.feasible", INDETERMINATE, {}, {"C": C}, sw[0],
                                       detail=str(exc)))
                continue
        out.append(CheckReport("constants.feasible", PASS,
                               {"margin": float(v.margin)},
                               {"verdict": v, "feasible": v.feasible}, sw[0]))
    if args.bisect:
        with stopwatch() as sw:
            cstar = max_feasible_C(args.tol)
        out.append(CheckReport("constants.critical_C", PASS, {"C_star": cstar},
                               {"tol": args.tol, "bracket": ["0.000024", "0.000025"]}, sw[0]))
    return out


def cmd_count(args, cfg):
    f = _build(args)
    with stopwatch() as sw:
        rc = count_a_points(f, args.a, args.disk)
        roots = locate_a_points(f, args.a, args.disk) if args.locate else None
    meta = {"function": f.pretty(), "count": rc}
    if roots is not None:
        meta["roots"] = roots
    return [CheckReport("count", PASS, {"count": rc.count, "winding_residual": rc.winding_residual},
                        meta, sw[0])]


def cmd_rescale(args, cfg):
    src = _load_fn(args)
    grid, phi = cfgmod.grid_spec(cfg), cfgmod.weight(cfg)
    out = []
    if args.ks:
        with stopwatch() as sw:
            run = run_sequence(lambda k: src.build(**{**dict(args.param), args.family_param: k}),
                               args.z0, default_eps_schedule(cfg["eps0"]), phi, args.ks, grid,
                               on_error="record")
        for row in run.rows:
            ok = row.error is None and row.rescaled_margin >= -1e-6 and row.linear_margin >= -1e-6
            out.append(CheckReport("rescale.row", PASS if ok else FAIL,
                                   {} if row.error else {"rescaled_bound": row.rescaled_margin,
                                                         "bound_linear": row.linear_margin,
                                                         "normalization": row.normalization},
                                   {"row": row}, None, None if ok else {"row": row}))
        out.append(CheckReport("rescale.R_increasing",
                               PASS if run.R_strictly_increasing else FAIL,
                               {"R": [r.R for r in run.ok_rows]}, {"ks": args.ks}, sw[0],
                               None if run.R_strictly_increasing else {"R": [r.R for r in run.ok_rows]}))
        return out
    if args.eps is None:
        raise UsageError("rescale needs --eps (single run) or --ks (sequence)")
    f = src.build(**dict(args.param))
    with stopwatch() as sw:
        cert = find_rescaling(f, args.a, args.eps, phi, grid, strict=False)
    bad = cert.invariant_violations()
    ok = not bad and cert.bound_margin >= -1e-6
    return [CheckReport("rescale", PASS if ok else FAIL, {"rescaled_bound": cert.bound_margin},
                        {"certificate": cert}, sw[0],
                        None if ok else {"violations": bad, "margin": cert.bound_margin})]


def cmd_form(args, cfg):
    g = _build(args)
    R = args.R if args.R is not None else cfg["form_R"]
    B = args.B if args.B is not None else cfg["B_used"]
    with stopwatch() as sw:
        try:
            form = extract_form(g, R, B, cfgmod.grid_spec(cfg), strict=args.strict)
        except HypothesisFailed as exc:
            return [CheckReport("form_bounds", HYPOTHESIS_FAILED, {}, {"R": R, "B_used": B},
                                detail=str(exc))]
        rep = verify_form_bounds(form, tuple(cfg["delta_grid"]))
    check = rep.to_check(sw[0])
    check.meta.update({"form": form, "report": rep})
    return [check]


def cmd_lemma7(args, cfg):
    f = _build(args)
    with stopwatch() as sw:
        try:
            rep = verify_lemma7(f, args.r)
        except HypothesisUnchecked as exc:
            return [CheckReport("lemma7", HYPOTHESIS_FAILED, {}, {"r": args.r}, detail=str(exc))]
    if not rep.hypothesis_ok:
        verdict = HYPOTHESIS_FAILED
    else:
        verdict = FAIL if rep.verdict == "Violation" else PASS
    return [CheckReport("lemma7", verdict, {"min_modulus": rep.min_modulus},
                        {"report": rep, "outcome": rep.verdict}, sw[0],
                        {"report": rep} if verdict == FAIL else None,
                        "Violation" if rep.verdict == "Violation" else "")]


def cmd_pj(args, cfg):
    f = _build(args)
    with stopwatch() as sw:
        rep = poisson_jensen_check(f, args.b, args.r, tol=cfg["pj_tol"])
    rep.timing = sw[0]
    return [rep]


def cmd_witness(args, cfg):
    f = _build(args)
    with stopwatch() as sw:
        try:
            rep = theorem4_witness_check(f, args.r, check_hypothesis=not args.no_hypothesis)
        except HypothesisFailed as exc:
            return [CheckReport("theorem4_witness", HYPOTHESIS_FAILED, {}, {"r": args.r},
                                detail=str(exc))]
    rep.timing = sw[0]
    return [rep]


def _scenario_job(payload):
    sc, cfg = payload
    return run_scenario(sc, cfg)


def cmd_scenario(args, cfg):
    scenarios = load_scenarios(args.scenarios)
    if args.list:
        return [CheckReport("scenario.list", PASS, {}, {"ids": [s.id for s in scenarios]})]
    if args.id == "all":
        chosen = scenarios
    else:
        chosen = [s for s in scenarios if s.id == args.id]
        if not chosen:
            raise UsageError(f"unknown scenario {args.id!r}")
    if args.ks:
        from dataclasses import replace
        chosen = [replace(s, schedule={**s.schedule, "ks": args.ks}) for s in chosen]
    if args.jobs > 1 and len(chosen) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            results = list(ex.map(_scenario_job, [(s, cfg) for s in chosen]))
    else:
        results = [run_scenario(s, cfg) for s in chosen]
    return [r for rs in results for r in rs]


def cmd_grid(args, cfg):
    if not args.out:
        raise UsageError("grid needs --out PATH")
    f = _build(args)
    n_r, n_t = args.n
    d = args.disk
    radii = d.radius * np.arange(0, n_r + 1) / n_r
    th = 2 * np.pi * np.arange(n_t) / n_t
    pts = np.concatenate([[d.center], (d.center + np.outer(radii[1:], np.exp(1j * th))).ravel()])
    with np.errstate(over="ignore"):
        absf = np.exp(f.log_abs(pts))
    sph = an.spherical_derivative(f, pts)
    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["re", "im", "absf", "sphderiv"])
        for z, a, s in zip(pts, absf, sph):
            w.writerow([repr(float(z.real)), repr(float(z.imag)), repr(float(a)), repr(float(s))])
    return [CheckReport("grid", PASS, {}, {"path": args.out, "points": int(pts.size),
                                           "function": f.pretty()})]


# ---------------------------------------------------------------------------
# parser and entry point


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file (grid densities, tolerances, B_used, t0)")
    common.add_argument("--deterministic", action="store_true", help="omit timing fields")
    common.add_argument("--jobs", type=int, default=1, help="parallel workers for independent checks")
    common.add_argument("--out", help="output path for CSV grids")

    p = argparse.ArgumentParser(prog="normlab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("constants", parents=[common], help="A, feasibility at C, critical C")
    s.add_argument("--C", type=float, action="append", default=[])
    s.add_argument("--bisect", action="store_true", help="also bisect for the critical C")
    s.add_argument("--tol", type=float, default=1e-12)
    s.set_defaults(func=cmd_constants)

    s = sub.add_parser("count", parents=[common], help="count (and locate) a-points")
    _add_fn_args(s)
    s.add_argument("--a", type=_complex, default=0j)
    s.add_argument("--disk", type=_disk, required=True, help="cx,cy,r")
    s.add_argument("--locate", action="store_true")
    s.set_defaults(func=cmd_count)

    s = sub.add_parser("rescale", parents=[common], help="rescaling certificate(s)")
    _add_fn_args(s)
    s.add_argument("--a", type=_complex, default=0j)
    s.add_argument("--eps", type=float)
    s.add_argument("--ks", type=_floats, help="run the family over these k")
    s.add_argument("--family-param", default="k")
    s.add_argument("--z0", type=_complex, default=0j)
    s.set_defaults(func=cmd_rescale)

    s = sub.add_parser("form", parents=[common], help="exponential form and its bounds")
    _add_fn_args(s)
    s.add_argument("--R", type=float)
    s.add_argument("--B", type=float)
    s.add_argument("--strict", action="store_true", help="stop at the first failed pre-check")
    s.set_defaults(func=cmd_form)

    s = sub.add_parser("lemma7", parents=[common], help="zero/1-point configuration check")
    _add_fn_args(s)
    s.add_argument("--r", type=float, required=True)
    s.set_defaults(func=cmd_lemma7)

    s = sub.add_parser("pj", parents=[common], help="Poisson-Jensen residual")
    _add_fn_args(s)
    s.add_argument("--b", type=_complex, default=0j)
    s.add_argument("--r", type=float, required=True)
    s.set_defaults(func=cmd_pj)

    s = sub.add_parser("witness", parents=[common], help="radial zero/1-point witness")
    _add_fn_args(s)
    s.add_argument("--r", type=float, required=True)
    s.add_argument("--no-hypothesis", action="store_true")
    s.set_defaults(func=cmd_witness)

    s = sub.add_parser("scenario", parents=[common], help="bundled scenarios")
    s.add_argument("id", nargs="?", default="all")
    s.add_argument("--ks", type=_floats)
    s.add_argument("--list", action="store_true")
    s.add_argument("--scenarios", help="alternative scenario table (JSON)")
    s.set_defaults(func=cmd_scenario)

    s = sub.add_parser("grid", parents=[common], help="CSV samples of |f| and f#")
    _add_fn_args(s)
    s.add_argument("--disk", type=_disk, default=Disk(0j, 1.0))
    s.add_argument("--n", type=lambda t: tuple(int(x) for x in t.split(",")), default=(32, 64),
                   help="radii,angles")
    s.set_defaults(func=cmd_grid)
    return p


def exit_code(reports, cmd: str) -> int:
    if cmd == "scenario":
        reports = [r for r in reports if r.check.startswith("scenario:")] or reports
    verdicts = {r.verdict for r in reports}
    if FAIL in verdicts or HYPOTHESIS_FAILED in verdicts:
        return EXIT_FAIL
    if INDETERMINATE in verdicts:
        return EXIT_INDETERMINATE
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cfg = cfgmod.load_config(args.config)
        reports = args.func(args, cfg)
    except (UsageError, SchemaError, ParseError, OSError, ValueError) as exc:
        print(f"normlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Indeterminate as exc:
        print(f"normlab: indeterminate: {exc}", file=sys.stderr)
        return EXIT_INDETERMINATE
    except NormlabError as exc:
        rep = CheckReport(args.cmd, FAIL, {}, {}, sample={"error": f"{type(exc).__name__}: {exc}"})
        reports = [rep]
    h = cfgmod.chash(cfg)
    for r in reports:
        r.meta.setdefault("config_hash", h)
        sys.stdout.write(r.dumps(args.deterministic) + "\n")
    sys.stdout.flush()
    return exit_code(reports, args.cmd)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
