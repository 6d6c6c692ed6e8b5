"""Intrinsic Riemannian geometry of a coordinate chart.

Conventions used throughout the package:

* ``dg[k, i, j] = d_k g_ij`` and ``ddg[k, l, i, j] = d_k d_l g_ij``.
* Christoffel symbols ``gamma[k, i, j]`` are the Levi-Civita coefficients
  of ``nabla_{d_i} d_j = gamma[k, i, j] d_k``.
* ``R(X, Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z`` and
  the lowered tensor is ``Rm[i, j, k, l] = <R(d_i, d_j) d_k, d_l>``, so the
  sectional curvature of an orthonormal pair is ``Rm(X, Y, Y, X)``.
* Scalar curvature ``tau`` sums sectional curvatures over *unordered*
  frame pairs, i.e. half of the trace of the Ricci tensor.
* The Laplacian is ``sum_i ((nabla_{e_i} e_i) f - e_i(e_i f))``, the
  negative of the Laplace-Beltrami operator. A round sphere therefore has
  ``Laplacian(cos theta) = +2 cos theta``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import adscalar as ad
from . import exprlang
from . import tolerances as tol


class GeometryError(ValueError):
    pass


class MetricError(GeometryError):
    """The metric is not symmetric positive definite at a point."""


class DegeneratePlane(GeometryError):
    pass


class RankDeficient(GeometryError):
    pass


MetricFunc = Callable[[Sequence[ad.Number]], Sequence[Sequence[ad.Number]]]


class MetricField:
    """A smooth map from chart points to symmetric positive-definite matrices.

    ``func`` receives a list of coordinates (floats or Scalar2) and returns
    a ``dim x dim`` nested sequence. ``box`` is a list of ``(lo, hi)`` pairs
    bounding the chart region where the metric is known to be regular.
    """

    def __init__(self, dim: int, func: MetricFunc, names: Sequence[str] | None = None,
                 box: Sequence[tuple[float, float]] | None = None):
        if dim < 1:
            raise ValueError("metric dimension must be positive")
        self.dim = dim
        self.func = func
        self.names = list(names) if names is not None else [f"x{k}" for k in range(dim)]
        self.box = [tuple(map(float, b)) for b in box] if box is not None else None
        if len(self.names) != dim or (self.box is not None and len(self.box) != dim):
            raise ValueError("names/box length must equal the dimension")

    @classmethod
    def from_exprs(cls, names: Sequence[str], entries, box=None) -> "MetricField":
        """Metric from expression strings: a list (diagonal) or a square matrix."""
        names = list(names)
        n = len(names)
        if entries and all(isinstance(e, str) for e in entries):
            if len(entries) != n:
                raise ValueError(f"diagonal metric needs {n} entries, got {len(entries)}")
            fns = {(i, i): exprlang.compile_expr(e, names) for i, e in enumerate(entries)}
        else:
            if len(entries) != n or any(len(row) != n for row in entries):
                raise ValueError(f"metric matrix must be {n}x{n}")
            fns = {}
            for i in range(n):
                for j in range(n):
                    text = str(entries[i][j]).strip()
                    if text not in ("0", "0.0"):
                        fns[(i, j)] = exprlang.compile_expr(text, names)

        def func(coords):
            out = [[0.0] * n for _ in range(n)]
            for (i, j), fn in fns.items():
                out[i][j] = fn(coords)
            return out

        m = cls(n, func, names, box)
        m.sources = entries
        return m

    def __call__(self, coords):
        return self.func(coords)

    def at(self, p) -> np.ndarray:
        """Metric matrix at ``p`` (plain floats), validated."""
        rows = self.func([float(x) for x in p])
        g = np.array([[ad.value(e) for e in row] for row in rows], dtype=float)
        _validate(g, p)
        return g

    def jet(self, p) -> "MetricJet":
        p = np.asarray(p, dtype=float)
        n = self.dim
        rows = self.func(ad.lift(p))
        g = np.empty((n, n))
        dg = np.empty((n, n, n))
        ddg = np.empty((n, n, n, n))
        for i in range(n):
            for j in range(n):
                v, gr, h = ad.jet(rows[i][j], n)
                g[i, j] = v
                dg[:, i, j] = gr
                ddg[:, :, i, j] = h
        _validate(g, p)
        return MetricJet(p, g, dg, ddg)

    def sample_box(self, count: int, rng: np.random.Generator) -> np.ndarray:
        if self.box is None:
            raise GeometryError("metric has no chart box to sample from")
        lo = np.array([b[0] for b in self.box])
        hi = np.array([b[1] for b in self.box])
        return lo + (hi - lo) * rng.random((count, self.dim))


def _validate(g: np.ndarray, p) -> None:
    if not np.all(np.isfinite(g)):
        raise MetricError(f"metric not finite at {np.asarray(p).tolist()}")
    asym = np.max(np.abs(g - g.T)) if g.size else 0.0
    if asym > tol.ARITHMETIC * max(1.0, np.max(np.abs(g))):
        raise MetricError(f"metric asymmetric by {asym:.3e} at {np.asarray(p).tolist()}")
    try:
        np.linalg.cholesky(g)
    except np.linalg.LinAlgError:
        raise MetricError(f"metric not positive definite at {np.asarray(p).tolist()}") from None


def block_metric(*blocks: MetricField, names=None) -> MetricField:
    """Direct sum (product metric) of metrics on consecutive coordinate blocks."""
    dims = [b.dim for b in blocks]
    n = sum(dims)
    offsets = np.cumsum([0] + dims)

    def func(coords):
        out = [[0.0] * n for _ in range(n)]
        for b, lo, hi in zip(blocks, offsets[:-1], offsets[1:]):
            sub = b.func(coords[lo:hi])
            for i in range(hi - lo):
                for j in range(hi - lo):
                    out[lo + i][lo + j] = sub[i][j]
        return out

    if names is None:
        names = [nm for b in blocks for nm in b.names]
    box = None
    if all(b.box is not None for b in blocks):
        box = [bx for b in blocks for bx in b.box]
    return MetricField(n, func, names, box)


@dataclass(frozen=True)
class MetricJet:
    point: np.ndarray
    g: np.ndarray
    dg: np.ndarray
    ddg: np.ndarray


@dataclass(frozen=True)
class CurvatureAtPoint:
    point: np.ndarray
    metric: np.ndarray
    christoffel: np.ndarray
    riemann: np.ndarray

    def tensor(self, X, Y, Z, W) -> float:
        return float(np.einsum("ijkl,i,j,k,l->", self.riemann, X, Y, Z, W))

    def sectional(self, X, Y) -> float:
        X = np.asarray(X, dtype=float)
        Y = np.asarray(Y, dtype=float)
        g = self.metric
        gram = (X @ g @ X) * (Y @ g @ Y) - (X @ g @ Y) ** 2
        if gram <= tol.DEGENERATE_PLANE:
            raise DegeneratePlane(f"vectors span no plane (Gram determinant {gram:.3e})")
        return self.tensor(X, Y, Y, X) / gram

    def in_frame(self, E: np.ndarray) -> np.ndarray:
        """Lowered curvature tensor in the frame whose vectors are the columns of E."""
        return np.einsum("ijkl,ia,jb,kc,ld->abcd", self.riemann, E, E, E, E, optimize=True)


def _christoffel_parts(jet: MetricJet):
    ginv = np.linalg.inv(jet.g)
    ginv = 0.5 * (ginv + ginv.T)
    dg = jet.dg
    # first kind: gamma1[l, i, j] = 1/2 (d_i g_jl + d_j g_il - d_l g_ij)
    gamma1 = 0.5 * (np.einsum("ijl->lij", dg) + np.einsum("jil->lij", dg) - dg)
    gamma = np.einsum("kl,lij->kij", ginv, gamma1)
    return ginv, gamma1, gamma


def christoffel_from_jet(jet: MetricJet) -> np.ndarray:
    return _christoffel_parts(jet)[2]


def curvature_from_jet(jet: MetricJet) -> CurvatureAtPoint:
    ginv, gamma1, gamma = _christoffel_parts(jet)
    dg, ddg = jet.dg, jet.ddg
    # d_m gamma1[l, i, j]
    dgamma1 = 0.5 * (np.einsum("mijl->mlij", ddg) + np.einsum("mjil->mlij", ddg)
                     - np.einsum("mlij->mlij", ddg))
    dginv = -np.einsum("ka,mab,bl->mkl", ginv, dg, ginv)
    # dgamma[m, k, i, j] = d_m gamma^k_ij
    dgamma = np.einsum("mkl,lij->mkij", dginv, gamma1) + np.einsum("kl,mlij->mkij", ginv, dgamma1)
    # R^l_{ijk} = d_i G^l_jk - d_j G^l_ik + G^l_im G^m_jk - G^l_jm G^m_ik, stored as r_up[i, j, k, l]
    r_up = (np.einsum("iljk->ijkl", dgamma) - np.einsum("jlik->ijkl", dgamma)
            + np.einsum("lim,mjk->ijkl", gamma, gamma) - np.einsum("ljm,mik->ijkl", gamma, gamma))
    rm = np.einsum("ijkm,ml->ijkl", r_up, jet.g)
    return CurvatureAtPoint(jet.point, jet.g, gamma, rm)


def christoffel(m: MetricField, p) -> np.ndarray:
    """Levi-Civita symbols ``gamma[k, i, j]`` at ``p``."""
    return christoffel_from_jet(m.jet(p))


def curvature(m: MetricField, p) -> CurvatureAtPoint:
    return curvature_from_jet(m.jet(p))


def riemann(m: MetricField, p) -> np.ndarray:
    """Lowered Riemann tensor ``Rm[i, j, k, l] = <R(d_i, d_j) d_k, d_l>``."""
    return curvature(m, p).riemann


def sectional(m: MetricField, p, X, Y) -> float:
    return curvature(m, p).sectional(X, Y)


# ----------------------------------------------------------------- frames


@dataclass(frozen=True)
class Frame:
    """Orthonormal vectors (columns of ``vectors``) w.r.t. the Gram matrix ``metric``."""

    vectors: np.ndarray
    metric: np.ndarray

    def __len__(self):
        return self.vectors.shape[1]

    def __getitem__(self, k):
        return self.vectors[:, k]

    def orthonormality_error(self) -> float:
        E = self.vectors
        return float(np.max(np.abs(E.T @ self.metric @ E - np.eye(E.shape[1]))))


def orthonormalize(G: np.ndarray, seeds, skip_dependent: bool = False, limit: int | None = None,
                   rel_tol: float = 1e-8) -> np.ndarray:
    """Gram-Schmidt w.r.t. ``G``; keeps the span filtration of ``seeds``.

    Dependent seeds raise :class:`RankDeficient` unless ``skip_dependent``.
    Each vector is orthogonalized twice, which keeps the result orthonormal
    to ~1e-15 even for badly scaled metrics.
    """
    seeds = np.atleast_2d(np.asarray(seeds, dtype=float))
    if seeds.shape[0] != G.shape[0]:
        seeds = seeds.T
    out: list[np.ndarray] = []
    for k in range(seeds.shape[1]):
        if limit is not None and len(out) == limit:
            break
        v = seeds[:, k].copy()
        norm0 = np.sqrt(max(v @ G @ v, 0.0))
        for _ in range(2):
            for e in out:
                v -= (e @ G @ v) * e
        norm = np.sqrt(max(v @ G @ v, 0.0))
        if norm0 == 0.0 or norm <= rel_tol * norm0:
            if skip_dependent:
                continue
            raise RankDeficient(f"seed {k} is linearly dependent on the previous ones")
        out.append(v / norm)
    if not out:
        return np.zeros((G.shape[0], 0))
    return np.stack(out, axis=1)


def gram_schmidt(m: MetricField, p, seeds=None) -> Frame:
    """Orthonormal frame at ``p`` from ``seeds`` (default: coordinate basis)."""
    G = m.at(p)
    if seeds is None:
        seeds = np.eye(m.dim)
    return Frame(orthonormalize(G, seeds), G)


def scalar_curvature(m: MetricField, p) -> float:
    """Sum of sectional curvatures over unordered pairs of an orthonormal frame."""
    curv = curvature(m, p)
    return scalar_curvature_from(curv)


def scalar_curvature_from(curv: CurvatureAtPoint, E: np.ndarray | None = None) -> float:
    if E is None:
        E = orthonormalize(curv.metric, np.eye(curv.metric.shape[0]))
    rf = curv.in_frame(E)
    n = E.shape[1]
    return float(sum(rf[i, j, j, i] for i in range(n) for j in range(i + 1, n)))


def ricci(m: MetricField, p, X) -> float:
    """Sum of ``K(X ^ u)`` over an orthonormal completion ``{X, u_2, ..., u_n}``."""
    curv = curvature(m, p)
    return ricci_from(curv, X)


def ricci_from(curv: CurvatureAtPoint, X) -> float:
    G = curv.metric
    X = np.asarray(X, dtype=float)
    nx = X @ G @ X
    if abs(nx - 1.0) > tol.ORTHONORMAL * 100:
        raise DegeneratePlane(f"ricci needs a unit vector, got |X|^2 = {nx!r}")
    seeds = np.column_stack([X, np.eye(G.shape[0])])
    E = orthonormalize(G, seeds, skip_dependent=True, limit=G.shape[0])
    rf = curv.in_frame(E)
    return float(sum(rf[0, j, j, 0] for j in range(1, E.shape[1])))


def scalar_jet(f, p, names: Sequence[str] | None = None):
    """(value, gradient, Hessian) of an expression or callable at ``p``."""
    coords = ad.lift(p)
    if isinstance(f, str):
        f = exprlang.parse(f, names or [])
    if callable(f):
        out = f(coords)
    else:
        out = exprlang.evaluate(f, dict(zip(names, coords)))
    return ad.jet(out, len(coords))


def laplacian_from(gamma: np.ndarray, E: np.ndarray, df: np.ndarray, ddf: np.ndarray) -> float:
    """``sum_i (nabla_{e_i} e_i) f - e_i(e_i f)`` over the columns of E.

    With a frame field ``e_i = E^a d_a`` the terms containing derivatives of
    ``E`` cancel, so only the frame at the point enters.
    """
    total = 0.0
    for i in range(E.shape[1]):
        e = E[:, i]
        nabla_ee = np.einsum("kab,a,b->k", gamma, e, e)
        total += nabla_ee @ df - e @ ddf @ e
    return float(total)


def laplacian_paper(m: MetricField, f, p) -> float:
    """Laplacian with the sign ``sum((nabla_{e_i} e_i) f - e_i^2 f)``.

    This is minus the analyst's Laplace-Beltrami operator: on the flat
    plane ``f = x^2`` gives ``-2``.
    """
    jet = m.jet(p)
    gamma = christoffel_from_jet(jet)
    E = orthonormalize(jet.g, np.eye(m.dim))
    _, df, ddf = scalar_jet(f, p, m.names)
    return laplacian_from(gamma, E, df, ddf)
