"""Full characterization pipeline and its machine-readable report.

Config documents are JSON objects; every numeric field accepts a decimal
number or an exact rational string "p/q".  Rational inputs are echoed back
bit-exactly in reports so exact-arithmetic paths survive round trips.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Optional

from ._num import format_number, parse_number
from .errors import ConfigError, NRootDeficit, WeightCountMismatch
from .model import admissibility_verdict, candidate_model
from .measure import (diag_variance_check, realize_measure, regression_check)
from .roots import (DiagonalVFParams, Quartic, build_characteristic_quartic,
                    classify_root_pattern, solve_quartic)
from .series import expand_series
from .errors import NoDominantAtom

__all__ = ["PipelineReport", "parse_params", "parse_config", "run_characterize",
           "report_to_dict", "report_from_dict", "emit_report"]

PARAM_KEYS = ("A", "a", "b", "c", "d", "e", "f")


@dataclass
class PipelineReport:
    params: Optional[dict]
    quartic: list
    roots: list                  # of {re, im, mult}
    pattern: str
    n_r: int
    atoms: list = field(default_factory=list)     # of {lambda, nu}
    weights: list = field(default_factory=list)
    r: object = None
    verdict: Optional[dict] = None                # {case, N, reason}
    star: Optional[dict] = None                   # {holds, witness, method}
    diag_check: Optional[dict] = None             # {max_dev, pass}
    regression: Optional[dict] = None             # {max_dev, pass}
    series: Optional[dict] = None                 # {depth, first_negative}
    status: str = "Rejected"
    degenerate: bool = False


def parse_params(obj) -> DiagonalVFParams:
    if isinstance(obj, DiagonalVFParams):
        return obj
    try:
        vals = {k: parse_number(obj[k]) for k in PARAM_KEYS}
    except KeyError as exc:
        raise ConfigError(f"missing parameter field {exc}") from exc
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    try:
        return DiagonalVFParams(**vals)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def parse_config(doc):
    """Parse a config document (dict or JSON text)."""
    if isinstance(doc, str):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    out = dict(doc)
    if "params" in doc:
        out["params"] = parse_params(doc["params"])
    if "weights" in doc:
        try:
            out["weights"] = tuple(parse_number(w) for w in doc["weights"])
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad weights: {exc}") from exc
    if "quartic" in doc and not isinstance(doc["quartic"], Quartic):
        try:
            coeffs = tuple(parse_number(c) for c in doc["quartic"])
            out["quartic"] = Quartic(coeffs)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad quartic: {exc}") from exc
    return out


def _roots_json(rs):
    out = []
    for v, mlt in rs.entries:
        if isinstance(v, complex):
            out.append({"re": float(v.real), "im": float(v.imag), "mult": mlt})
        else:
            out.append({"re": format_number(v), "im": 0, "mult": mlt})
    return out


def _search_weights(p, n_r, denominator, tol):
    """Grid search over the weight simplex with resolution 1/denominator."""
    D = int(denominator)
    for ns in product(range(D + 1), repeat=n_r):
        if sum(ns) != D or 0 in ns:
            continue
        weights = tuple(Fraction(n, D) for n in ns)
        m = candidate_model(p, weights, tol)
        v = admissibility_verdict(m, tol=1e-9)
        if v.accepted:
            return weights
    return None


def run_characterize(config, tol: float = 1e-8, grid_n: int = 11,
                     depth: int = 8, bound: int = 50,
                     extra_thetas=None) -> PipelineReport:
    """Run the whole pipeline: quartic -> roots -> model -> verdict -> checks."""
    cfg = parse_config(config)
    p = cfg.get("params")
    q = cfg.get("quartic")
    if q is None:
        if p is None:
            raise ConfigError("config needs 'params' (or a diagnostic 'quartic')")
        q = build_characteristic_quartic(p)
    rs = solve_quartic(q, tol)
    pattern = classify_root_pattern(rs)
    report = PipelineReport(
        params={k: format_number(v) for k, v in
                zip(PARAM_KEYS, p.as_tuple())} if p else None,
        quartic=[format_number(c) for c in q.coeffs],
        roots=_roots_json(rs),
        pattern=pattern.value,
        n_r=rs.n_r,
    )

    if rs.n_r < 2:
        report.verdict = {"case": "Rejected", "N": None,
                          "reason": "NRootDeficit: fewer than two distinct real roots"}
        report.status = "Rejected"
        return report
    if p is None:
        report.status = "Inconclusive"
        report.verdict = {"case": "Inconclusive", "N": None,
                          "reason": "diagnostic quartic mode: no parameters, "
                          "no ordinates can be derived"}
        return report

    weights = cfg.get("weights")
    if weights is None and "weight_search" in cfg:
        den = cfg["weight_search"].get("denominator", 4)
        weights = _search_weights(p, rs.n_r, den, tol)
        if weights is None:
            report.verdict = {"case": "Rejected", "N": None,
                              "reason": f"no admissible weights on the 1/{den} grid"}
            report.status = "Rejected"
            return report
    if weights is None:
        raise ConfigError("config needs 'weights' or 'weight_search'")

    try:
        m = candidate_model(p, weights, tol)
    except (NRootDeficit, WeightCountMismatch) as exc:
        report.verdict = {"case": "Rejected", "N": None,
                          "reason": f"{type(exc).__name__}: {exc}"}
        report.status = "Rejected"
        return report

    report.atoms = [{"lambda": format_number(a[0]), "nu": format_number(a[1])}
                    for a in m.atoms]
    report.weights = [format_number(w) for w in m.weights]
    report.r = format_number(m.r)

    verdict = admissibility_verdict(m, tol=1e-9, bound=bound)
    report.verdict = {"case": verdict.outcome, "N": verdict.N,
                      "reason": verdict.reason}
    if verdict.star is not None:
        report.star = {"holds": verdict.star.holds,
                       "witness": list(verdict.star.witness)
                       if verdict.star.witness else None,
                       "method": verdict.star.method}
    if not verdict.accepted:
        report.status = "Inconclusive" if verdict.inconclusive else "Rejected"
        return report

    mu = realize_measure(m, verdict)
    report.degenerate = mu.degenerate

    axis = [(-1.0 + 2.0 * i / (grid_n - 1)) for i in range(grid_n)] \
        if grid_n > 1 else [0.0]
    thetas = [(t1, t2) for t1 in axis for t2 in axis]
    if extra_thetas:
        thetas.extend(extra_thetas)
    diag = diag_variance_check(m, p, thetas, tol)
    report.diag_check = {"max_dev": float(diag.max_dev), "pass": bool(diag.passed)}

    reg = regression_check(mu, p, tol=max(tol, 1e-10))
    report.regression = {"max_dev": float(reg.max_dev), "pass": bool(reg.passed),
                         "exact": bool(reg.exact)}

    try:
        ser = expand_series(m, depth)
        report.series = {
            "depth": ser.depth,
            "first_negative": None if ser.first_negative is None else {
                "point": [format_number(x) for x in ser.first_negative[0]],
                "coefficient": format_number(ser.first_negative[1])},
        }
    except NoDominantAtom as exc:
        report.series = {"depth": depth, "first_negative": None,
                         "error": str(exc)}

    if diag.passed and reg.passed:
        report.status = "Degenerate-Admissible" if mu.degenerate else "Admissible"
    else:
        report.status = "Rejected"
    return report


def report_to_dict(rep: PipelineReport) -> dict:
    return {
        "params": rep.params,
        "quartic": rep.quartic,
        "roots": rep.roots,
        "pattern": rep.pattern,
        "n_r": rep.n_r,
        "atoms": rep.atoms,
        "weights": rep.weights,
        "r": rep.r,
        "verdict": rep.verdict,
        "star": rep.star,
        "diag_check": rep.diag_check,
        "regression": rep.regression,
        "series": rep.series,
        "status": rep.status,
        "degenerate": rep.degenerate,
    }


def report_from_dict(d: dict) -> PipelineReport:
    return PipelineReport(
        params=d.get("params"), quartic=d["quartic"], roots=d["roots"],
        pattern=d["pattern"], n_r=d["n_r"], atoms=d.get("atoms", []),
        weights=d.get("weights", []), r=d.get("r"), verdict=d.get("verdict"),
        star=d.get("star"), diag_check=d.get("diag_check"),
        regression=d.get("regression"), series=d.get("series"),
        status=d["status"], degenerate=d.get("degenerate", False))


def emit_report(rep: PipelineReport) -> str:
    return json.dumps(report_to_dict(rep), sort_keys=True, indent=2)
