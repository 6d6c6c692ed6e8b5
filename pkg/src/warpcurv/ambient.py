"""Ambient spaces with known curvature, and extremal sectional curvature search.

Sphere charts use hyperspherical angles ``psi_1..psi_k``::

    x_1 = cos psi_1
    x_2 = sin psi_1 cos psi_2
    ...
    x_k = sin psi_1 ... sin psi_{k-1} cos psi_k
    x_{k+1} = sin psi_1 ... sin psi_k

with metric ``r^2 (dpsi_1^2 + sin^2 psi_1 dpsi_2^2 + ...)``. Chart boxes
keep every angle but the last inside ``[0.15, pi - 0.15]``.
Hyperbolic factors use the upper half-space ``(dx^2 + dy^2) / (|c| y^2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import adscalar as ad
from . import geometry as geo
from .geometry import MetricField

ANGLE_MARGIN = 0.15
KINDS = ("euclidean", "space_form", "product_space_forms", "clifford", "chart")


class AmbientError(ValueError):
    pass


# ------------------------------------------------------------ chart metrics


def euclidean_metric(dim: int, prefix: str = "x") -> MetricField:
    def func(coords):
        out = [[0.0] * dim for _ in range(dim)]
        for i in range(dim):
            out[i][i] = 1.0
        return out

    box = [(-2.0, 2.0)] * dim
    return MetricField(dim, func, [f"{prefix}{k + 1}" for k in range(dim)], box)


def sphere_metric(dim: int, radius: float = 1.0, prefix: str = "psi") -> MetricField:
    """Round metric of ``S^dim(radius)`` in hyperspherical angles."""
    r2 = float(radius) ** 2

    def func(coords):
        out = [[0.0] * dim for _ in range(dim)]
        w = r2
        for k in range(dim):
            out[k][k] = w
            if k + 1 < dim:
                s = ad.sin(coords[k])
                w = w * s * s
        return out

    box = [(ANGLE_MARGIN, math.pi - ANGLE_MARGIN)] * (dim - 1) + [(ANGLE_MARGIN, 2 * math.pi - ANGLE_MARGIN)]
    return MetricField(dim, func, [f"{prefix}{k + 1}" for k in range(dim)], box)


def hyperbolic_metric(dim: int, c: float, prefix: str = "y") -> MetricField:
    """Constant curvature ``c < 0`` on the upper half-space (last coordinate > 0)."""
    scale = 1.0 / abs(c)

    def func(coords):
        h = coords[-1]
        w = scale / (h * h)
        out = [[0.0] * dim for _ in range(dim)]
        for k in range(dim):
            out[k][k] = w
        return out

    box = [(-1.0, 1.0)] * (dim - 1) + [(0.5, 2.0)]
    return MetricField(dim, func, [f"{prefix}{k + 1}" for k in range(dim)], box)


def space_form_metric(dim: int, c: float, prefix: str = "q") -> MetricField:
    if c > 0:
        return sphere_metric(dim, 1.0 / math.sqrt(c), prefix)
    if c < 0:
        return hyperbolic_metric(dim, c, prefix)
    return euclidean_metric(dim, prefix)


def sphere_point(angles: Sequence[ad.Number]) -> list[ad.Number]:
    """Unit vector in R^{k+1} with hyperspherical angles ``angles``."""
    out = []
    prod = 1.0
    for a in angles:
        out.append(prod * ad.cos(a))
        prod = prod * ad.sin(a)
    out.append(prod)
    return out


def sphere_angles(x: Sequence[ad.Number]) -> list[ad.Number]:
    """Inverse of :func:`sphere_point` for a unit vector of length ``N``."""
    N = len(x)
    angles = []
    for k in range(N - 2):
        tail = x[k + 1] * x[k + 1]
        for j in range(k + 2, N):
            tail = tail + x[j] * x[j]
        angles.append(ad.atan2(ad.sqrt(tail), x[k]))
    angles.append(ad.atan2(x[N - 1], x[N - 2]))
    return angles


# ----------------------------------------------------------- ambient spaces


@dataclass
class AmbientSpace:
    kind: str
    params: dict
    metric: MetricField
    exact_K_values: tuple | None = None
    # global bounds of sectional curvature (c and c-bar for product spaces)
    c_low: float | None = None
    c_high: float | None = None
    extra: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.metric.dim


def make_ambient(kind: str, **params) -> AmbientSpace:
    """Catalog ambient space.

    * ``euclidean``: ``dim``
    * ``space_form``: ``dim``, ``c``
    * ``product_space_forms``: ``dims=(k1, k2)``, ``c=(c1, c2)``
    * ``clifford``: ``m1``, ``m2`` (``m = m1 + m2 >= 4``, ``2 <= m1 <= m - 2``)
    * ``chart``: ``metric`` (any :class:`MetricField`; no exact curvature data)
    """
    if kind == "euclidean":
        dim = int(params["dim"])
        if dim < 1:
            raise AmbientError("dimension must be positive")
        return AmbientSpace(kind, {"dim": dim}, euclidean_metric(dim), (0.0,), 0.0, 0.0)
    if kind == "space_form":
        dim, c = int(params["dim"]), float(params["c"])
        if dim < 2:
            raise AmbientError("a space form needs dimension >= 2")
        return AmbientSpace(kind, {"dim": dim, "c": c}, space_form_metric(dim, c), (c,), c, c)
    if kind == "product_space_forms":
        k1, k2 = (int(d) for d in params["dims"])
        c1, c2 = (float(c) for c in params["c"])
        if k1 < 1 or k2 < 1:
            raise AmbientError("factor dimensions must be positive")
        metric = geo.block_metric(space_form_metric(k1, c1, "a"), space_form_metric(k2, c2, "b"))
        values = {0.0}
        if k1 >= 2:
            values.add(c1)
        if k2 >= 2:
            values.add(c2)
        return AmbientSpace(kind, {"dims": (k1, k2), "c": (c1, c2)}, metric,
                            tuple(sorted(values)), min(c1, c2, 0.0), max(c1, c2, 0.0))
    if kind == "clifford":
        m1, m2 = int(params["m1"]), int(params["m2"])
        m = m1 + m2
        if m < 4 or m1 < 2 or m1 > m - 2:
            raise AmbientError(f"Clifford torus needs m >= 4 and 2 <= m1 <= m - 2, got ({m1}, {m2})")
        r1, r2 = math.sqrt(m1 / m), math.sqrt(m2 / m)
        metric = geo.block_metric(sphere_metric(m1, r1, "u"), sphere_metric(m2, r2, "v"))
        values = (0.0, m / m1, m / m2)
        return AmbientSpace(kind, {"m1": m1, "m2": m2}, metric, values, 0.0, max(m / m1, m / m2),
                            {"radii": (r1, r2)})
    if kind == "chart":
        metric = params["metric"]
        return AmbientSpace(kind, {"dim": metric.dim}, metric)
    raise AmbientError(f"unknown ambient kind {kind!r}; expected one of {KINDS}")


# ------------------------------------------------------------- Clifford torus


@dataclass
class CliffordRecord:
    m1: int
    m2: int
    principal_curvatures: list[float]
    h_norm2: float
    H2: float
    tau: float
    sectional_values: list[float]
    numeric: dict | None = None


def clifford_extrinsic(m1: int, m2: int, points: int = 3, seed: int = 0) -> CliffordRecord:
    """Closed-form extrinsic data of the Clifford torus in ``S^{m+1}(1)``,
    recomputed numerically from its embedding at a few chart points.

    The numeric record orients the unit normal so that the principal
    curvature along the first factor is positive.
    """
    make_ambient("clifford", m1=m1, m2=m2)  # validates (m1, m2)
    m = m1 + m2
    k1, k2 = math.sqrt(m2 / m1), -math.sqrt(m1 / m2)
    record = CliffordRecord(
        m1, m2,
        principal_curvatures=[k1] * m1 + [k2] * m2,
        h_norm2=float(m), H2=0.0, tau=m * (m - 2) / 2.0,
        sectional_values=sorted({0.0, m / m1, m / m2}),
    )
    if points:
        record.numeric = _clifford_numeric(m1, m2, points, seed)
    return record


def _clifford_numeric(m1: int, m2: int, points: int, seed: int) -> dict:
    from . import catalog, immersion

    imm = catalog.clifford_embedded(m1, m2)
    rng = np.random.default_rng(seed)
    out = {"points": [], "principal_curvatures": [], "h_norm2": [], "H2": [], "tau": [],
           "sectional_values": [], "gauss_residual": []}
    for p in imm.domain.total.sample_box(points, rng):
        pt = immersion.evaluate(imm, p)
        shape = pt.sff.coeffs[0]
        if np.trace(shape[:m1, :m1]) < 0:
            shape = -shape
        eig = np.sort(np.linalg.eigvalsh(0.5 * (shape + shape.T)))[::-1]
        norms = immersion.sff_norms(pt.sff)
        _, H2 = immersion.mean_curvature(pt.sff)
        rf = pt.domain_curvature.in_frame(pt.frame.tangent)
        ks = [float(rf[a, b, b, a]) for a in range(m1 + m2) for b in range(a + 1, m1 + m2)]
        out["points"].append(p.tolist())
        out["principal_curvatures"].append(eig.tolist())
        out["h_norm2"].append(norms.h_norm2)
        out["H2"].append(H2)
        out["tau"].append(geo.scalar_curvature_from(pt.domain_curvature, pt.frame.tangent))
        out["sectional_values"].append(ks)
        out["gauss_residual"].append(immersion.gauss_residual_from(pt).tensor)
    return out


def ricci_formula(m1: int, m2: int, x: float, y: float) -> float:
    """The closed-form Ricci expression quoted for ``x e_1 + y e_2``.

    ``m - 1 - (m2/m1 x^2 + m1/m2 y^2 + m^2/(m1 m2) x^2 y^2)``
    """
    m = m1 + m2
    return m - 1 - (m2 / m1 * x * x + m1 / m2 * y * y + m * m / (m1 * m2) * x * x * y * y)


def ricci_lower_bound(m1: int, m2: int) -> float:
    m = m1 + m2
    return m - 1 - (m2 / m1 + m1 / m2)


def ricci_bound_check(m1: int, m2: int, x: float, y: float, eq_tol: float = 1e-9):
    """Evaluate the Ricci expression against its lower bound.

    Returns ``(ric, bound, is_equality)``; ``x^2 + y^2`` must be 1.
    """
    if abs(x * x + y * y - 1.0) > 1e-12:
        raise AmbientError(f"(x, y) must be a unit vector, got x^2 + y^2 = {x * x + y * y!r}")
    ric = ricci_formula(m1, m2, x, y)
    bound = ricci_lower_bound(m1, m2)
    return ric, bound, abs(ric - bound) <= eq_tol


# ------------------------------------------------------ extremal sectional K


@dataclass
class ExtremalK:
    inf_val: float
    sup_val: float
    argmin: tuple | None
    argmax: tuple | None
    method: str


def _plane_value(R, X):
    x, y = X[:, 0], X[:, 1]
    return float(np.einsum("abcd,a,b,c,d->", R, x, y, y, x, optimize=False))


def _plane_grad(R, X):
    x, y = X[:, 0], X[:, 1]
    py = np.einsum("abcd,b,c->ad", R, y, y)
    qx = np.einsum("abcd,a,d->bc", R, x, x)
    return np.column_stack([py @ x + py.T @ x, qx @ y + qx.T @ y])


def _polar(A):
    U, _, Vt = np.linalg.svd(A, full_matrices=False)
    return U @ Vt


def _jacobi(R, x):
    """``J[b, c] = R(x, b, c, x)``, so that ``K(x ^ y) = y^T J y`` for orthonormal x, y."""
    J = np.tensordot(np.tensordot(R, x, axes=([0], [0])), x, axes=([2], [0]))
    return 0.5 * (J + J.T)


def _best_partner(R, x, sign):
    """Unit ``y`` orthogonal to ``x`` extremizing ``sign * K(x ^ y)``, and that value."""
    w = x.shape[0]
    Q = np.linalg.qr(np.column_stack([x, np.eye(w)]))[0][:, 1:w]
    vals, vecs = np.linalg.eigh(Q.T @ _jacobi(R, x) @ Q)
    k = -1 if sign > 0 else 0
    return Q @ vecs[:, k], float(vals[k])


def _ascend(R, X, sign, ftol=1e-11, max_iter=500, polish=20):
    """Local ascent of ``sign * K`` over orthonormal pairs.

    Alternates exact partner updates (each one an eigenproblem of the
    Jacobi operator on the orthogonal complement), stopping when the
    improvement drops below ``ftol``; then a few projected-gradient steps
    with a polar retraction as a stationarity polish.
    """
    x, y = X[:, 0], X[:, 1]
    f = sign * _plane_value(R, X)
    for it in range(max_iter):
        if it % 2 == 0:
            y, k = _best_partner(R, x, sign)
        else:
            x, k = _best_partner(R, y, sign)
        fn = sign * k
        done = fn - f < ftol
        f = max(f, fn)
        if done:
            break
    X = np.column_stack([x, y])
    f = sign * _plane_value(R, X)
    step = 1.0
    for _ in range(polish):
        G = sign * _plane_grad(R, X)
        D = G - X @ (0.5 * (X.T @ G + G.T @ X))
        gn2 = float(np.sum(D * D))
        if gn2 < 1e-26:
            break
        t = step
        while True:
            Xn = _polar(X + t * D)
            fn = sign * _plane_value(R, Xn)
            if fn >= f + 1e-4 * t * gn2 or t < 1e-14:
                break
            t *= 0.5
        if fn - f < ftol:
            if fn > f:
                X, f = Xn, fn
            break
        X, f = Xn, fn
        step = min(2.0 * t, 1e3)
    return sign * f, X


def optimize_planes(R: np.ndarray, n_starts: int = 32, seed: int = 0):
    """inf/sup of ``R(x, y, y, x)`` over orthonormal pairs of R^w.

    ``R`` is a curvature tensor in an orthonormal basis. Starts: every
    coordinate pair, topped up with seeded random pairs to ``n_starts``.
    Returns ``(inf, sup, argmin, argmax)`` with pairs as ``(x, y)``.
    """
    w = R.shape[0]
    if w < 2:
        raise geo.RankDeficient("need at least a 2-dimensional subspace")
    if w == 2:
        X = np.eye(2)
        k = _plane_value(R, X)
        return k, k, (X[:, 0], X[:, 1]), (X[:, 0], X[:, 1])
    starts = []
    eye = np.eye(w)
    for a in range(w):
        for b in range(a + 1, w):
            starts.append(np.column_stack([eye[a], eye[b]]))
    rng = np.random.default_rng(seed)
    while len(starts) < n_starts:
        starts.append(_polar(rng.standard_normal((w, 2))))
    best_min, best_max = (math.inf, None), (-math.inf, None)
    # reduction by min/max makes the result independent of start order
    for X0 in starts:
        kmax, Xmax = _ascend(R, X0, +1.0)
        if kmax > best_max[0]:
            best_max = (kmax, Xmax)
        kmin, Xmin = _ascend(R, X0, -1.0)
        if kmin < best_min[0]:
            best_min = (kmin, Xmin)
    (kmin, Xmin), (kmax, Xmax) = best_min, best_max
    return kmin, kmax, (Xmin[:, 0], Xmin[:, 1]), (Xmax[:, 0], Xmax[:, 1])


def extremal_from_curvature(curv: geo.CurvatureAtPoint, basis=None, exact_values=None,
                            n_starts: int = 32, seed: int = 0) -> ExtremalK:
    """Extremal sectional curvature over 2-planes inside ``span(basis)``."""
    dim = curv.metric.shape[0]
    if basis is None:
        basis = np.eye(dim)
    basis = np.asarray(basis, dtype=float)
    if basis.ndim == 1 or basis.shape[0] != dim:
        raise geo.RankDeficient("basis vectors must be columns of length dim")
    E = geo.orthonormalize(curv.metric, basis)
    w = E.shape[1]
    if w < 2:
        raise geo.RankDeficient("subspace must have dimension >= 2")
    if exact_values is not None and w == dim:
        return ExtremalK(min(exact_values), max(exact_values), None, None, "exact_catalog")
    Rw = curv.in_frame(E)
    kmin, kmax, pmin, pmax = optimize_planes(Rw, n_starts, seed)
    to_amb = lambda pair: (E @ pair[0], E @ pair[1])
    return ExtremalK(kmin, kmax, to_amb(pmin), to_amb(pmax), "numeric")


def extremal_sectional(ambient: AmbientSpace, p, basis=None, n_starts: int = 32, seed: int = 0,
                       use_catalog: bool = True) -> ExtremalK:
    """inf/sup of the ambient sectional curvature over planes in ``span(basis)`` at ``p``.

    Catalog values are returned when the subspace is the whole tangent
    space and the ambient has exact curvature data; otherwise the planes
    are searched numerically.
    """
    curv = geo.curvature(ambient.metric, p)
    exact = ambient.exact_K_values if use_catalog else None
    return extremal_from_curvature(curv, basis, exact, n_starts, seed)


def restricted_extremes(Rw: np.ndarray, n_starts: int = 32, seed: int = 0) -> tuple[float, float]:
    """inf/sup over planes of a tensor already expressed in an orthonormal frame."""
    kmin, kmax, _, _ = optimize_planes(Rw, n_starts, seed)
    return kmin, kmax

