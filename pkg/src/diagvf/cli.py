"""Command-line front end.

Subcommands mirror the pipeline stages so each is independently invokable:
characterize, roots, lattice, expand, scan, eval, tilt.  Configs are JSON
read from a file argument or stdin; numbers may be decimals or exact
rational strings "p/q".  Exit codes: 0 ok/admissible, 1 rejected, 2 input
error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

import numpy as np

from ._num import format_number, parse_number
from .errors import ConfigError, DiagVFError
from .model import (LatticeMatrix, admissibility_verdict, candidate_model,
                    make_model, star_condition)
from .measure import cumulant_eval, realize_measure, tilt_member
from .pipeline import emit_report, parse_config, run_characterize
from .roots import classify_root_pattern, solve_quartic, build_characteristic_quartic
from .series import EliminationForm, expand_series, magnitude_scan

EXIT_OK = 0
EXIT_REJECTED = 1
EXIT_INPUT = 2


def _read_config(path: str):
    text = sys.stdin.read() if path == "-" else open(path).read()
    return parse_config(text)


def _emit(obj, as_json: bool, human_lines):
    if as_json:
        print(json.dumps(obj, sort_keys=True, indent=2))
    else:
        for line in human_lines:
            print(line)


def _model_from_config(cfg, tol):
    """Accept either explicit atoms/weights/r or params+weights."""
    if "atoms" in cfg:
        atoms = [(parse_number(a[0]), parse_number(a[1])) for a in cfg["atoms"]]
        weights = [parse_number(w) for w in cfg["weights"]]
        r = parse_number(cfg["r"])
        return make_model(atoms, weights, r)
    if "params" in cfg and "weights" in cfg:
        return candidate_model(cfg["params"], cfg["weights"], tol)
    raise ConfigError("config needs 'atoms'/'weights'/'r' or 'params'+'weights'")


def cmd_characterize(args) -> int:
    cfg = _read_config(args.config)
    rep = run_characterize(cfg, tol=args.tol, grid_n=args.grid,
                           depth=args.depth, bound=args.bound,
                           extra_thetas=_seed_thetas(args))
    if args.json:
        print(emit_report(rep))
    else:
        print(f"pattern: {rep.pattern}  n_r={rep.n_r}")
        print(f"quartic: {rep.quartic}")
        if rep.atoms:
            print(f"atoms: {[(a['lambda'], a['nu']) for a in rep.atoms]}  r={rep.r}")
        if rep.verdict:
            print(f"verdict: {rep.verdict['case']}"
                  + (f"(N={rep.verdict['N']})" if rep.verdict.get("N") else "")
                  + (f" reason: {rep.verdict['reason']}" if rep.verdict.get("reason") else ""))
        if rep.diag_check:
            print(f"diag check: max dev {rep.diag_check['max_dev']:.3e} "
                  f"pass={rep.diag_check['pass']}")
        if rep.regression:
            print(f"regression: max dev {rep.regression['max_dev']:.3e} "
                  f"pass={rep.regression['pass']}")
        print(f"status: {rep.status}")
    return EXIT_REJECTED if rep.status == "Rejected" else EXIT_OK


def _seed_thetas(args):
    if args.seed is None:
        return None
    rng = np.random.default_rng(args.seed)
    return [tuple(t) for t in rng.uniform(-1.0, 1.0, size=(args.grid, 2))]


def cmd_roots(args) -> int:
    cfg = _read_config(args.config)
    q = cfg.get("quartic")
    if q is None:
        if "params" not in cfg:
            raise ConfigError("roots needs 'params' or 'quartic'")
        q = build_characteristic_quartic(cfg["params"])
    rs = solve_quartic(q, args.tol)
    pattern = classify_root_pattern(rs)
    entries = [{"re": format_number(v) if not isinstance(v, complex) else float(v.real),
                "im": 0 if not isinstance(v, complex) else float(v.imag),
                "mult": mlt} for v, mlt in rs.entries]
    _emit({"quartic": [format_number(c) for c in q.coeffs],
           "roots": entries, "pattern": pattern.value, "n_r": rs.n_r},
          args.json,
          [f"quartic: {[format_number(c) for c in q.coeffs]}",
           *(f"root {e['re']}{'+' + str(e['im']) + 'i' if e['im'] else ''} "
             f"(mult {e['mult']})" for e in entries),
           f"pattern: {pattern.value}  n_r={rs.n_r}"])
    return EXIT_OK


def cmd_lattice(args) -> int:
    cfg = _read_config(args.config)
    if "matrix" not in cfg:
        raise ConfigError("lattice needs 'matrix': 3x3 rational rows")
    rows = tuple(tuple(Fraction(parse_number(x)) for x in row)
                 for row in cfg["matrix"])
    rep = star_condition(LatticeMatrix(rows), bound=args.bound)
    _emit({"holds": rep.holds,
           "witness": list(rep.witness) if rep.witness else None,
           "method": rep.method},
          args.json,
          [f"star condition holds: {rep.holds} (method {rep.method})"
           + (f", witness {rep.witness}" if rep.witness else "")])
    return EXIT_OK if rep.holds else EXIT_REJECTED


def cmd_expand(args) -> int:
    cfg = _read_config(args.config)
    m = _model_from_config(cfg, args.tol)
    rep = expand_series(m, args.depth)
    terms = {f"({format_number(k[0])},{format_number(k[1])})": format_number(v)
             for k, v in rep.terms.items()}
    fneg = None if rep.first_negative is None else {
        "point": [format_number(x) for x in rep.first_negative[0]],
        "coefficient": format_number(rep.first_negative[1])}
    _emit({"depth": rep.depth, "terms": terms, "first_negative": fneg,
           "pivot": rep.pivot},
          args.json,
          [f"depth {rep.depth}, pivot atom {rep.pivot}",
           *(f"  {k}: {v}" for k, v in terms.items()),
           f"first negative: {fneg}"])
    return EXIT_OK if fneg is None else EXIT_REJECTED


def cmd_scan(args) -> int:
    cfg = _read_config(args.config)
    form = EliminationForm(
        poly=tuple(parse_number(x) for x in cfg.get("poly", [])),
        exp_terms=tuple(tuple(parse_number(x) for x in t)
                        for t in cfg.get("exp_terms", [])),
        linexp=tuple(parse_number(x) for x in cfg["linexp"])
        if cfg.get("linexp") else None,
        osc_blocks=tuple(tuple(parse_number(x) for x in b)
                         for b in cfg.get("osc_blocks", [])),
    )
    r = parse_number(cfg.get("r", 1))
    t_max = float(cfg.get("t_max", 50.0))
    n = int(cfg.get("n_grid", 2001))
    grid = np.linspace(-t_max, t_max, n)
    grid = grid[np.argsort(np.abs(grid), kind="stable")]
    witness = magnitude_scan(form, r, grid)
    _emit({"witness": witness},
          args.json,
          ["no unboundedness witness found" if witness is None
           else f"witness t={witness}: |f(it)|^r exceeds 1"])
    return EXIT_OK


def cmd_eval(args) -> int:
    cfg = _read_config(args.config)
    m = _model_from_config(cfg, args.tol)
    theta = tuple(parse_number(x) for x in cfg.get("theta", (0, 0)))
    k, mean, cov = cumulant_eval(m, theta)
    _emit({"theta": [float(t) for t in theta], "k": k,
           "mean": [float(x) for x in mean],
           "variance": [[float(x) for x in row] for row in cov]},
          args.json,
          [f"k({float(theta[0])},{float(theta[1])}) = {k}",
           f"mean = {tuple(mean)}",
           f"variance = {cov.tolist()}"])
    return EXIT_OK


def cmd_tilt(args) -> int:
    cfg = _read_config(args.config)
    m = _model_from_config(cfg, args.tol)
    verdict = admissibility_verdict(m)
    if not verdict.accepted:
        print(f"model not admissible: {verdict.reason}", file=sys.stderr)
        return EXIT_REJECTED
    mu = realize_measure(m, verdict)
    theta = tuple(parse_number(x) for x in cfg.get("theta", (0, 0)))
    tilted = tilt_member(mu, theta)
    entries = [{"point": [format_number(x) for x in pt],
                "mass": format_number(ms)}
               for pt, ms in zip(tilted.support, tilted.masses)]
    _emit({"theta": [float(t) for t in theta], "measure": entries,
           "degenerate": tilted.degenerate},
          args.json,
          [f"tilted measure at theta={theta}:",
           *(f"  {e['point']}: {e['mass']}" for e in entries)])
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="diagvf",
        description="Bivariate NEF quadratic-diagonal variance function toolkit")
    sub = ap.add_subparsers(dest="command", required=True)
    commands = {
        "characterize": (cmd_characterize, "run the full pipeline"),
        "roots": (cmd_roots, "solve and classify the characteristic quartic"),
        "lattice": (cmd_lattice, "mixed-sign kernel check on an explicit matrix"),
        "expand": (cmd_expand, "series expansion around the dominant atom"),
        "scan": (cmd_scan, "characteristic-function magnitude scan"),
        "eval": (cmd_eval, "cumulant, mean, and variance at a point"),
        "tilt": (cmd_tilt, "exponentially tilted family member"),
    }
    for name, (fn, help_) in commands.items():
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("config", nargs="?", default="-",
                        help="config file path, or '-' for stdin")
        sp.add_argument("--tol", type=float, default=1e-8)
        sp.add_argument("--grid", type=int, default=11)
        sp.add_argument("--depth", type=int, default=8)
        sp.add_argument("--bound", type=int, default=50)
        sp.add_argument("--json", action="store_true")
        sp.add_argument("--seed", type=int, default=None)
        sp.set_defaults(func=fn)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, FileNotFoundError, KeyError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DiagVFError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_REJECTED


if __name__ == "__main__":
    sys.exit(main())
