"""Upper and lower bounds for the Laplacian of the warping function.

For an isometric immersion of ``B x_f F`` (dims ``n1``, ``n2``) into any
Riemannian manifold:

    upper slack = n^2/(4 n2) H^2 + n1 sup K - (Laplacian f)/f      >= 0
    lower slack = (Laplacian f)/f - n1 n^2/(2(n-1)) H^2
                  + (n1/2) |h|^2 - n1 inf K                        >= 0

with ``sup K`` and ``inf K`` the extremes of the ambient sectional
curvature over 2-planes tangent to the image.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import geometry as geo
from . import tolerances as tol
from .ambient import optimize_planes
from .immersion import ImmersionMap, ImmersionPoint, evaluate, mean_curvature, sff_norms
from .warped import _delta_from

RANDOM_MIXED_PLANES = 8


class NotMinimal(ValueError):
    def __init__(self, max_H: float, point):
        self.max_H = max_H
        self.point = [float(x) for x in point]
        super().__init__(f"immersion is not minimal: |H| = {max_H:.3e} at {self.point}")


@dataclass
class Diagnostics:
    mixed_tg: bool
    traces_equal: bool
    mixed_planes_extremal: bool
    mixed_block_norm: float = 0.0
    trace_gap: float = 0.0
    mixed_plane_gap: float = 0.0


@dataclass
class SlackReport:
    point: list
    n1: int
    n2: int
    delta_f_over_f: float
    H2: float
    h_norm2: float
    tau: float
    inf_K: float
    sup_K: float
    upper_slack: float
    lower_slack: float
    diagnostics: Diagnostics = field(default=None)

    @property
    def n(self) -> int:
        return self.n1 + self.n2

    @property
    def upper_bound(self) -> float:
        return self.delta_f_over_f + self.upper_slack

    @property
    def lower_bound(self) -> float:
        return self.delta_f_over_f - self.lower_slack

    def as_dict(self) -> dict:
        return asdict(self)


def upper_bound(n1: int, n2: int, H2: float, sup_K: float) -> float:
    n = n1 + n2
    return n * n / (4.0 * n2) * H2 + n1 * sup_K


def lower_bound(n1: int, n2: int, H2: float, h_norm2: float, inf_K: float) -> float:
    n = n1 + n2
    return n1 * n * n / (2.0 * (n - 1)) * H2 - 0.5 * n1 * h_norm2 + n1 * inf_K


def _require_warped(imm: ImmersionMap) -> None:
    if imm.domain.n2 < 1:
        raise ValueError("the inequalities need a warped product with a nontrivial fiber (n2 >= 1)")


def delta_at(pt: ImmersionPoint, imm: ImmersionMap) -> float:
    return _delta_from(imm.domain, pt.domain_jet, pt.domain_curvature.christoffel, pt.point,
                       pt.frame.tangent)


def tangent_extremes(pt: ImmersionPoint, n_starts: int = 32, seed: int = 0):
    """inf/sup of ambient K over planes in the image tangent space, plus the frame tensor."""
    Rw = pt.ambient_in_frame()
    kmin, kmax, _, _ = optimize_planes(Rw, n_starts, seed)
    return kmin, kmax, Rw


def equality_diagnostics(pt: ImmersionPoint, sup_K: float, Rw: np.ndarray | None = None,
                         tolerance: float = tol.EQUALITY, seed: int = 0) -> Diagnostics:
    """Conditions of the upper-bound equality case at one point.

    Mixed planes checked: all frame pairs ``e_i ^ e_s`` (``i <= n1 < s``)
    plus a few seeded random unit pairs ``X in D1``, ``Y in D2``.
    """
    if Rw is None:
        Rw = pt.ambient_in_frame()
    norms = sff_norms(pt.sff)
    n1 = pt.frame.n1
    n = Rw.shape[0]
    trace_gap = float(np.max(np.abs(norms.trace_base - norms.trace_fiber))) if norms.trace_base.size else 0.0
    ks = [Rw[i, s, s, i] for i in range(n1) for s in range(n1, n)]
    rng = np.random.default_rng(seed)
    for _ in range(RANDOM_MIXED_PLANES):
        x = np.zeros(n)
        y = np.zeros(n)
        x[:n1] = rng.standard_normal(n1)
        y[n1:] = rng.standard_normal(n - n1)
        x /= np.linalg.norm(x)
        y /= np.linalg.norm(y)
        ks.append(np.einsum("abcd,a,b,c,d->", Rw, x, y, y, x))
    plane_gap = float(max(abs(k - sup_K) for k in ks))
    return Diagnostics(
        mixed_tg=norms.mixed_block_norm < tolerance,
        traces_equal=trace_gap < tolerance,
        mixed_planes_extremal=plane_gap < tolerance,
        mixed_block_norm=norms.mixed_block_norm,
        trace_gap=trace_gap,
        mixed_plane_gap=plane_gap,
    )


def evaluate_point(imm: ImmersionMap, p, n_starts: int = 32, seed: int = 0,
                   eq_tol: float = tol.EQUALITY) -> SlackReport:
    """Both slacks, their ingredients and the equality diagnostics at ``p``."""
    _require_warped(imm)
    pt = evaluate(imm, p)
    return report_from(imm, pt, n_starts, seed, eq_tol)


def report_from(imm: ImmersionMap, pt: ImmersionPoint, n_starts: int = 32, seed: int = 0,
                eq_tol: float = tol.EQUALITY) -> SlackReport:
    n1, n2 = imm.domain.n1, imm.domain.n2
    delta = delta_at(pt, imm)
    _, H2 = mean_curvature(pt.sff)
    h_norm2 = sff_norms(pt.sff).h_norm2
    kmin, kmax, Rw = tangent_extremes(pt, n_starts, seed)
    tau = geo.scalar_curvature_from(pt.domain_curvature, pt.frame.tangent)
    return SlackReport(
        point=[float(x) for x in pt.point],
        n1=n1, n2=n2,
        delta_f_over_f=delta, H2=H2, h_norm2=h_norm2, tau=tau,
        inf_K=kmin, sup_K=kmax,
        upper_slack=upper_bound(n1, n2, H2, kmax) - delta,
        lower_slack=delta - lower_bound(n1, n2, H2, h_norm2, kmin),
        diagnostics=equality_diagnostics(pt, kmax, Rw, eq_tol, seed),
    )


def upper_slack(imm: ImmersionMap, p, **kw) -> float:
    return evaluate_point(imm, p, **kw).upper_slack


def lower_slack(imm: ImmersionMap, p, **kw) -> float:
    return evaluate_point(imm, p, **kw).lower_slack


def space_form_upper_slack(report: SlackReport, c: float) -> float:
    """Slack of the constant-curvature inequality ``Lf/f <= n^2/(4 n2) H^2 + n1 c``."""
    return upper_bound(report.n1, report.n2, report.H2, c) - report.delta_f_over_f


# --------------------------------------------------------------- the lemma


@dataclass
class LemmaResult:
    holds_hypothesis: bool
    holds_conclusion: bool | None
    is_equality: bool | None


def solve_lemma_c(a) -> float:
    """The ``c`` making ``(sum a)^2 = (n - 1)(sum a^2 + c)`` hold."""
    a = np.asarray(a, dtype=float)
    return float(a.sum() ** 2 / (a.size - 1) - a @ a)


def lemma_check(a, c: float, tolerance: float = tol.ARITHMETIC * 100) -> LemmaResult:
    """Check ``2 a1 a2 >= c`` under ``(sum a)^2 = (n-1)(sum a^2 + c)``.

    Equality is flagged when ``a1 + a2 = a3 = ... = an`` within ``tolerance``.
    If the hypothesis fails the conclusion is reported as ``None``.
    """
    a = np.asarray(a, dtype=float)
    n = a.size
    if n < 2:
        raise ValueError("the lemma needs n >= 2")
    lhs = a.sum() ** 2
    rhs = (n - 1) * (a @ a + c)
    if abs(lhs - rhs) > tolerance * max(1.0, abs(lhs), abs(rhs)):
        return LemmaResult(False, None, None)
    conclusion = 2 * a[0] * a[1] >= c - tolerance
    b = np.concatenate([[a[0] + a[1]], a[2:]])
    equal = bool(np.all(np.abs(b - b[0]) <= tolerance * max(1.0, float(np.max(np.abs(b))))))
    return LemmaResult(True, bool(conclusion), equal)


# ------------------------------------------------------------- corollaries


def catalog_envelope(imm: ImmersionMap) -> tuple[float, float]:
    """``(c, c-bar)``: global lower/upper bounds of the ambient sectional curvature."""
    amb = imm.ambient
    if amb.c_low is None or amb.c_high is None:
        raise ValueError(f"ambient kind {amb.kind!r} has no catalog curvature bounds")
    if amb.kind in ("product_space_forms", "clifford"):
        return min(amb.c_low, 0.0), max(amb.c_high, 0.0)
    return amb.c_low, amb.c_high


@dataclass
class CorollarySlacks:
    c: float
    c_bar: float
    upper: float
    lower: float
    theorem_upper: float
    theorem_lower: float


def corollary_slacks(imm: ImmersionMap, report: SlackReport) -> CorollarySlacks:
    """Slacks of the bounds with ``sup K``/``inf K`` replaced by the catalog envelope."""
    c, c_bar = catalog_envelope(imm)
    up = upper_bound(report.n1, report.n2, report.H2, c_bar) - report.delta_f_over_f
    lo = report.delta_f_over_f - lower_bound(report.n1, report.n2, report.H2, report.h_norm2, c)
    return CorollarySlacks(c, c_bar, up, lo, report.upper_slack, report.lower_slack)


@dataclass
class NonexistenceReport:
    c_bar: float
    n1: int
    max_delta: float
    margin: float
    consistent: bool
    points: list


def nonexistence_witness(imm: ImmersionMap, points, minimal_tol: float = tol.MINIMAL_H2,
                         slack_tol: float = tol.SLACK) -> NonexistenceReport:
    """For a minimal immersion, confirm ``Lf/f <= n1 c-bar`` at every point.

    Raises :class:`NotMinimal` if ``H^2 >= minimal_tol`` anywhere.
    """
    _require_warped(imm)
    _, c_bar = catalog_envelope(imm)
    n1 = imm.domain.n1
    evaluated = []
    worst_H, worst_p = -1.0, None
    for p in points:
        pt = evaluate(imm, p)
        _, H2 = mean_curvature(pt.sff)
        if H2 > worst_H:
            worst_H, worst_p = H2, pt.point
        evaluated.append((pt, delta_at(pt, imm)))
    if worst_H >= minimal_tol:
        raise NotMinimal(math.sqrt(worst_H), worst_p)
    deltas = [d for _, d in evaluated]
    max_delta = max(deltas) if deltas else -math.inf
    margin = n1 * c_bar - max_delta
    return NonexistenceReport(c_bar, n1, max_delta, margin, margin >= -slack_tol,
                              [[float(x) for x in pt.point] for pt, _ in evaluated])
