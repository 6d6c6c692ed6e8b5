"""Scenario files: loading, validation, batch evaluation and reports.

A scenario is a JSON object::

    {
      "name": "torus",
      "immersion": {"builtin": "product_torus", "params": {"a": 1, "b": 2}},
      "sampling": {"mode": "random", "count": 20, "seed": 0},
      "tolerances": {"slack": 1e-7}
    }

or, for an immersion written out by hand::

    {
      "ambient": {"kind": "euclidean", "dim": 3},
      "base":  {"names": ["t"],  "box": [[0, 3]],      "metric": ["1 + cos(t)^2"]},
      "fiber": {"names": ["th"], "box": [[0.2, 6.0]],  "metric": ["1"]},
      "warp": "2 + sin(t)",
      "immersion": {"components": ["(2 + sin(t)) * cos(th)", "(2 + sin(t)) * sin(th)", "t"]}
    }

``metric`` is a list (diagonal entries) or a full square matrix of
expression strings. The builtin ``warped_identity`` maps the declared
warped product onto its own chart.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import catalog, chen, exprlang
from . import geometry as geo
from . import tolerances as tol
from .ambient import AmbientError, make_ambient
from .geometry import MetricField
from .immersion import ImmersionMap, IsometryError
from .warped import WarpError, WarpedProduct, build

ISOMETRY_SPOT_CHECKS = 5
REGULARITY_SAMPLES = 64
CSV_FIELDS = ("delta_f_over_f", "H2", "h_norm2", "inf_K", "sup_K", "upper_slack", "lower_slack",
              "mixed_tg", "traces_equal", "mixed_planes_extremal")

EXIT_OK, EXIT_INVALID, EXIT_VIOLATION, EXIT_EVAL_ERROR = 0, 1, 2, 3


class ScenarioError(ValueError):
    """A scenario failed to parse or violates a load-time invariant."""


@dataclass
class Sampling:
    mode: str = "random"
    count: int = 20
    seed: int = 0


@dataclass
class Scenario:
    name: str
    immersion: ImmersionMap
    sampling: Sampling
    tolerances: dict = field(default_factory=dict)
    source: dict = field(default_factory=dict)

    @property
    def domain(self) -> WarpedProduct:
        return self.immersion.domain

    def tol(self, key: str) -> float:
        defaults = {"slack": tol.SLACK, "equality": tol.EQUALITY, "isometry": tol.ISOMETRY}
        return float(self.tolerances.get(key, defaults[key]))


# ------------------------------------------------------------------ loading


def _metric_block(spec: dict, label: str) -> MetricField:
    try:
        names = list(spec["names"])
        box = [tuple(float(v) for v in iv) for iv in spec["box"]]
        entries = spec["metric"]
    except (KeyError, TypeError) as exc:
        raise ScenarioError(f"{label}: needs 'names', 'box' and 'metric' ({exc})") from None
    if len(box) != len(names):
        raise ScenarioError(f"{label}: box has {len(box)} intervals for {len(names)} coordinates")
    for name, (lo, hi) in zip(names, box):
        if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
            raise ScenarioError(f"{label}: box for {name!r} must be a finite nonempty interval, got [{lo}, {hi}]")
    try:
        return MetricField.from_exprs(names, entries, box)
    except exprlang.ExprError as exc:
        raise ScenarioError(f"{label} metric: {exc}") from None
    except ValueError as exc:
        raise ScenarioError(f"{label} metric: {exc}") from None


def _ambient(spec: dict):
    spec = dict(spec)
    kind = spec.pop("kind", None)
    try:
        return make_ambient(kind, **spec)
    except (AmbientError, KeyError, TypeError) as exc:
        raise ScenarioError(f"ambient: {exc}") from None


def _immersion(doc: dict) -> ImmersionMap:
    spec = doc.get("immersion")
    if not isinstance(spec, dict):
        raise ScenarioError("missing 'immersion' object")
    name = spec.get("builtin")
    if name is not None and name != "warped_identity":
        try:
            return catalog.builtin(name, **spec.get("params", {}))
        except exprlang.ExprError as exc:
            raise ScenarioError(f"immersion {name}: {exc}") from None
        except (ValueError, TypeError) as exc:
            raise ScenarioError(f"immersion {name}: {exc}") from None

    base = _metric_block(doc.get("base") or {}, "base")
    fiber = _metric_block(doc["fiber"], "fiber") if doc.get("fiber") else None
    overlap = set(base.names) & set(fiber.names if fiber else [])
    if overlap:
        raise ScenarioError(f"base and fiber share coordinate names {sorted(overlap)}")
    try:
        dom = build(base, fiber, doc.get("warp", "1"))
    except exprlang.ExprError as exc:
        raise ScenarioError(f"warp: {exc}") from None
    except WarpError as exc:
        raise ScenarioError(f"warp: {exc}") from None
    if name == "warped_identity":
        return catalog.warped_identity(dom)

    amb = _ambient(doc.get("ambient") or {})
    comps = spec.get("components")
    if not isinstance(comps, list):
        raise ScenarioError("immersion needs 'builtin' or a 'components' list")
    if len(comps) != amb.dim:
        raise ScenarioError(f"immersion has {len(comps)} components but the ambient has dimension {amb.dim}")
    try:
        return catalog.explicit(dom, amb, comps)
    except exprlang.ExprError as exc:
        raise ScenarioError(f"immersion: {exc}") from None


def _check_regular(imm: ImmersionMap, rng) -> None:
    """Sampled check that metric, warp and map are finite and nondegenerate on the box."""
    box = imm.domain.box
    corners = itertools.islice(itertools.product(*box), REGULARITY_SAMPLES)
    pts = list(corners) + list(imm.domain.total.sample_box(REGULARITY_SAMPLES, rng))
    for p in pts:
        try:
            imm.domain.total.at(p)
            y = imm.image(p)
            if not np.all(np.isfinite(y)):
                raise ScenarioError(f"immersion is not finite at {list(map(float, p))}")
            imm.ambient.metric.at(y)
        except geo.GeometryError as exc:
            raise ScenarioError(f"singular chart at {list(map(float, p))}: {exc}") from None
        except (exprlang.ExprEvalError, ArithmeticError) as exc:
            raise ScenarioError(f"expression undefined at {list(map(float, p))}: {exc}") from None


def from_dict(doc: dict, name: str = "scenario") -> Scenario:
    """Build and validate a :class:`Scenario` from parsed JSON."""
    if not isinstance(doc, dict):
        raise ScenarioError("scenario must be a JSON object")
    imm = _immersion(doc)
    if imm.domain.n2 < 1:
        raise ScenarioError("domain must be a warped product with a fiber of dimension >= 1")
    if imm.domain.box is None:
        raise ScenarioError("domain chart box is required")
    if imm.domain.n2 and imm.domain.base.box is not None:
        try:
            imm.domain.check_positive()
        except WarpError as exc:
            raise ScenarioError(str(exc)) from None
    s = doc.get("sampling", {})
    sampling = Sampling(s.get("mode", "random"), int(s.get("count", 20)), int(s.get("seed", 0)))
    if sampling.mode not in ("random", "grid") or sampling.count < 1:
        raise ScenarioError(f"sampling must be mode 'random' or 'grid' with count >= 1, got {s}")
    sc = Scenario(doc.get("name", name), imm, sampling, dict(doc.get("tolerances", {})), doc)

    rng = np.random.default_rng(sampling.seed)
    _check_regular(imm, rng)
    iso_tol = sc.tol("isometry")
    for p in imm.domain.total.sample_box(ISOMETRY_SPOT_CHECKS, rng):
        r = imm.isometry_residual(p)
        if not r <= iso_tol:
            raise ScenarioError(f"immersion is not isometric: residual {r:.3e} at {p.tolist()}")
    return sc


def load(path) -> Scenario:
    """Read a JSON scenario file and validate it."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}: JSON parse error at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return from_dict(doc, name=str(path))


# ---------------------------------------------------------------- sampling


def sample_points(sc: Scenario, count: int | None = None, seed: int | None = None) -> np.ndarray:
    """Random points in the box, or cell centers of a regular grid.

    A grid uses ``k = max(2, round(count ** (1/n)))`` cells per axis.
    """
    count = sc.sampling.count if count is None else count
    seed = sc.sampling.seed if seed is None else seed
    box = sc.domain.box
    if sc.sampling.mode == "grid":
        n = len(box)
        k = max(2, round(count ** (1.0 / n)))
        axes = [lo + (np.arange(k) + 0.5) / k * (hi - lo) for lo, hi in box]
        return np.array(list(itertools.product(*axes)))
    return sc.domain.total.sample_box(count, np.random.default_rng(seed))


# ------------------------------------------------------------------ running


@dataclass
class RunResult:
    scenario: Scenario
    reports: list
    errors: list
    summary: dict

    @property
    def exit_code(self) -> int:
        if self.summary["violations"]:
            return EXIT_VIOLATION
        if self.errors:
            return EXIT_EVAL_ERROR
        return EXIT_OK


def run(sc: Scenario, samples: int | None = None, seed: int | None = None,
        tol_slack: float | None = None) -> RunResult:
    """Evaluate both slacks at every sample point, in point order."""
    slack_tol = sc.tol("slack") if tol_slack is None else float(tol_slack)
    eq_tol = sc.tol("equality")
    pts = sample_points(sc, samples, seed)
    reports, errors = [], []
    for idx, p in enumerate(pts):
        try:
            reports.append((idx, chen.evaluate_point(sc.immersion, p, eq_tol=eq_tol)))
        except (geo.GeometryError, IsometryError, ArithmeticError, exprlang.ExprEvalError) as exc:
            errors.append({"index": idx, "point": [float(x) for x in p], "error": str(exc)})
    return RunResult(sc, reports, errors, _summary(sc, [r for _, r in reports], errors, slack_tol))


def _summary(sc: Scenario, reports, errors, slack_tol: float) -> dict:
    imm = sc.immersion
    out = {
        "immersion": imm.name,
        "ambient": imm.ambient.kind,
        "n1": imm.domain.n1, "n2": imm.domain.n2, "m": imm.m,
        "points": len(reports) + len(errors),
        "evaluated": len(reports),
        "failed": len(errors),
        "tol_slack": slack_tol,
    }
    if not reports:
        out.update(violations=0, status="error")
        return out
    up = [r.upper_slack for r in reports]
    lo = [r.lower_slack for r in reports]
    out.update(
        min_upper_slack=min(up),
        min_lower_slack=min(lo),
        max_H2=max(r.H2 for r in reports),
        max_h_norm2=max(r.h_norm2 for r in reports),
        min_tau=min(r.tau for r in reports),
        max_tau=max(r.tau for r in reports),
        equality_points=sum(1 for r in reports if r.upper_slack < slack_tol),
        all_conditions_points=sum(1 for r in reports if r.diagnostics.mixed_tg
                                  and r.diagnostics.traces_equal and r.diagnostics.mixed_planes_extremal),
        violations=sum(1 for u, l in zip(up, lo) if u < -slack_tol or l < -slack_tol),
    )
    if imm.ambient.c_high is not None:
        cors = [chen.corollary_slacks(imm, r) for r in reports]
        out["c"] = cors[0].c
        out["c_bar"] = cors[0].c_bar
        out["min_corollary_upper_slack"] = min(c.upper for c in cors)
        out["min_corollary_lower_slack"] = min(c.lower for c in cors)
    out["status"] = "violation" if out["violations"] else ("partial" if errors else "ok")
    return out


# ---------------------------------------------------------------- emitting


def _record(names, r: chen.SlackReport) -> dict:
    d = {name: v for name, v in zip(names, r.point)}
    d.update(delta_f_over_f=r.delta_f_over_f, H2=r.H2, h_norm2=r.h_norm2, tau=r.tau,
             inf_K=r.inf_K, sup_K=r.sup_K, upper_slack=r.upper_slack, lower_slack=r.lower_slack,
             mixed_tg=r.diagnostics.mixed_tg, traces_equal=r.diagnostics.traces_equal,
             mixed_planes_extremal=r.diagnostics.mixed_planes_extremal)
    return d


def to_json(result: RunResult) -> str:
    names = result.scenario.domain.names
    doc = {
        "scenario": result.scenario.name,
        "coordinates": list(names),
        "summary": result.summary,
        "points": [dict(index=i, **_record(names, r)) for i, r in result.reports],
        "errors": result.errors,
    }
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def to_csv(result: RunResult) -> str:
    names = list(result.scenario.domain.names)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(names + list(CSV_FIELDS))
    for _, r in result.reports:
        rec = _record(names, r)
        row = []
        for key in names + list(CSV_FIELDS):
            v = rec[key]
            row.append(("true" if v else "false") if isinstance(v, bool) else repr(float(v)))
        w.writerow(row)
    return buf.getvalue()
