"""Extrinsic geometry of an isometric immersion given in coordinates.

An :class:`ImmersionMap` sends chart points of a warped product into the
chart of an ambient space. At a point the second fundamental form is

    h^a_ij = d_i d_j phi^a + Gbar^a_bc d_i phi^b d_j phi^c - G^k_ij d_k phi^a

(all second derivatives from hyper-dual arithmetic), contracted against an
orthonormal normal frame whose first vector points along the mean
curvature vector whenever that vector is nonzero.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from . import adscalar as ad
from . import exprlang
from . import geometry as geo
from . import tolerances as tol
from .ambient import AmbientSpace
from .warped import WarpedProduct, split_frame


class IsometryError(geo.GeometryError):
    def __init__(self, residual: float, point):
        self.residual = residual
        self.point = np.asarray(point, dtype=float).tolist()
        super().__init__(f"map is not isometric at {self.point}: |J^T gbar J - g| = {residual:.3e}")


class ImmersionMap:
    """Coordinate map ``phi`` from a warped-product chart into an ambient chart.

    ``phi`` is either a callable taking the list of domain coordinates and
    returning ambient coordinates, or a sequence of expressions (strings or
    trees) over the domain variable names.
    """

    def __init__(self, domain: WarpedProduct, ambient: AmbientSpace, phi, name: str = "custom",
                 params: dict | None = None):
        self.domain = domain
        self.ambient = ambient
        self.name = name
        self.params = dict(params or {})
        if callable(phi):
            self.phi = phi
        else:
            names = list(domain.names)
            trees = [exprlang.parse(c, names) if isinstance(c, str) else c for c in phi]
            sources = [c if isinstance(c, str) else exprlang.to_text(c) for c in phi]
            if len(trees) != ambient.dim:
                raise ValueError(f"immersion has {len(trees)} components, ambient dimension is {ambient.dim}")

            def fn(coords):
                env = dict(zip(names, coords))
                return [exprlang.evaluate(t, env, s) for t, s in zip(trees, sources)]

            self.phi = fn
        if domain.n > ambient.dim:
            raise ValueError("domain dimension exceeds ambient dimension")

    @property
    def n(self) -> int:
        return self.domain.n

    @property
    def m(self) -> int:
        return self.ambient.dim

    def image(self, p) -> np.ndarray:
        return np.array([ad.value(c) for c in self.phi([float(x) for x in p])])

    def jet(self, p):
        """Image point, Jacobian ``J[a, i]`` and Hessians ``H[a, i, j]``."""
        p = np.asarray(p, dtype=float)
        n = p.shape[0]
        comps = self.phi(ad.lift(p))
        if len(comps) != self.m:
            raise ValueError(f"immersion returned {len(comps)} components, expected {self.m}")
        y = np.empty(self.m)
        J = np.empty((self.m, n))
        H = np.empty((self.m, n, n))
        for a, c in enumerate(comps):
            y[a], J[a], H[a] = ad.jet(c, n)
        return y, J, H

    def isometry_residual(self, p) -> float:
        y, J, _ = self.jet(p)
        G = self.domain.total.at(p)
        Gbar = self.ambient.metric.at(y)
        return float(np.max(np.abs(J.T @ Gbar @ J - G)))


@dataclass
class AdaptedFrame:
    """Orthonormal frame adapted to the immersion at one point.

    ``tangent`` columns are domain-coordinate vectors (base block first),
    ``pushed`` their images ``J @ tangent`` and ``normal`` columns ambient
    vectors orthogonal to them.
    """

    tangent: np.ndarray
    pushed: np.ndarray
    normal: np.ndarray
    n1: int
    mean_dir_first: bool
    ambient_metric: np.ndarray

    def orthonormality_error(self) -> float:
        full = np.column_stack([self.pushed, self.normal])
        return float(np.max(np.abs(full.T @ self.ambient_metric @ full - np.eye(full.shape[1]))))

    def with_normals(self, normal: np.ndarray, mean_dir_first: bool | None = None) -> "AdaptedFrame":
        return AdaptedFrame(self.tangent, self.pushed, normal, self.n1,
                            self.mean_dir_first if mean_dir_first is None else mean_dir_first,
                            self.ambient_metric)


@dataclass
class SecondFF:
    """Coefficients ``coeffs[r, i, j] = <h(e_i, e_j), e_{n+1+r}>``."""

    coeffs: np.ndarray
    frame: AdaptedFrame

    @property
    def n(self) -> int:
        return self.coeffs.shape[1]

    @property
    def n1(self) -> int:
        return self.frame.n1

    def symmetry_error(self) -> float:
        c = self.coeffs
        return float(np.max(np.abs(c - np.swapaxes(c, 1, 2)))) if c.size else 0.0


class SFFNorms(NamedTuple):
    h_norm2: float
    trace_base: np.ndarray
    trace_fiber: np.ndarray
    mixed_block_norm: float


class GaussResidual(NamedTuple):
    tensor: float
    contracted: float


@dataclass
class ImmersionPoint:
    """Everything computed about an immersion at one domain point."""

    point: np.ndarray
    image: np.ndarray
    jacobian: np.ndarray
    domain_curvature: geo.CurvatureAtPoint
    ambient_curvature: geo.CurvatureAtPoint
    h_vectors: np.ndarray  # h(e_i, e_j) as ambient vectors, shape (m, n, n)
    frame: AdaptedFrame
    sff: SecondFF
    isometry_residual: float
    domain_jet: geo.MetricJet

    def ambient_in_frame(self) -> np.ndarray:
        return self.ambient_curvature.in_frame(self.frame.pushed)


def _normal_seeds(Gbar: np.ndarray, T: np.ndarray, count: int, seeds=None) -> np.ndarray:
    m = Gbar.shape[0]
    if seeds is None:
        seeds = np.eye(m)
    out: list[np.ndarray] = []
    for k in range(seeds.shape[1]):
        if len(out) == count:
            break
        v = seeds[:, k].copy()
        n0 = np.sqrt(max(v @ Gbar @ v, 0.0))
        for _ in range(2):
            for t in T.T:
                v -= (t @ Gbar @ v) * t
            for e in out:
                v -= (e @ Gbar @ v) * e
        nv = np.sqrt(max(v @ Gbar @ v, 0.0))
        if n0 == 0.0 or nv <= 1e-6 * n0:
            continue
        out.append(v / nv)
    if len(out) != count:
        raise geo.RankDeficient(f"could only build {len(out)} of {count} normal vectors")
    return np.stack(out, axis=1) if out else np.zeros((m, 0))


def _coefficients(h_vectors: np.ndarray, normal: np.ndarray, Gbar: np.ndarray) -> np.ndarray:
    return np.einsum("ar,ab,bij->rij", normal, Gbar, h_vectors)


def evaluate(imm: ImmersionMap, p, check_isometry: bool = True) -> ImmersionPoint:
    """Frame, second fundamental form and both curvature tensors at ``p``."""
    p = np.asarray(p, dtype=float)
    y, J, Hphi = imm.jet(p)
    djet = imm.domain.total.jet(p)
    dcurv = geo.curvature_from_jet(djet)
    acurv = geo.curvature(imm.ambient.metric, y)
    Gbar = acurv.metric
    residual = float(np.max(np.abs(J.T @ Gbar @ J - djet.g)))
    if check_isometry and residual > tol.ISOMETRY:
        raise IsometryError(residual, p)
    if np.linalg.matrix_rank(J) < imm.n:
        raise geo.RankDeficient(f"Jacobian has rank < {imm.n} at {p.tolist()}")

    E = split_frame(imm.domain, djet.g)
    T = J @ E
    hcoord = (Hphi + np.einsum("abc,bi,cj->aij", acurv.christoffel, J, J)
              - np.einsum("kij,ak->aij", dcurv.christoffel, J))
    hvec = np.einsum("aij,ip,jq->apq", hcoord, E, E)

    count = imm.m - imm.n
    N = _normal_seeds(Gbar, T, count)
    frame = AdaptedFrame(E, T, N, imm.domain.n1, False, Gbar)
    coeffs = _coefficients(hvec, N, Gbar)
    if count:
        Hr = np.einsum("rii->r", coeffs) / imm.n
        Hnorm = float(np.sqrt(Hr @ Hr))
        if Hnorm > tol.MEAN_DIRECTION:
            seeds = np.column_stack([N @ (Hr / Hnorm), N])
            N = _normal_seeds(Gbar, T, count, seeds)
            frame = frame.with_normals(N, True)
            coeffs = _coefficients(hvec, N, Gbar)
    sff = SecondFF(coeffs, frame)
    return ImmersionPoint(p, y, J, dcurv, acurv, hvec, frame, sff, residual, djet)


def adapted_frame(imm: ImmersionMap, p) -> AdaptedFrame:
    return evaluate(imm, p).frame


def second_ff(imm: ImmersionMap, p, frame: AdaptedFrame | None = None) -> SecondFF:
    """Second fundamental form at ``p``; a supplied ``frame`` overrides the normals."""
    pt = evaluate(imm, p)
    if frame is None:
        return pt.sff
    return SecondFF(_coefficients(pt.h_vectors, frame.normal, pt.frame.ambient_metric), frame)


def rotate_normals(pt: ImmersionPoint, Q: np.ndarray) -> ImmersionPoint:
    """Same point with the normal frame replaced by ``normal @ Q`` (Q orthogonal)."""
    N = pt.frame.normal @ Q
    frame = pt.frame.with_normals(N, False)
    sff = SecondFF(_coefficients(pt.h_vectors, N, frame.ambient_metric), frame)
    return ImmersionPoint(pt.point, pt.image, pt.jacobian, pt.domain_curvature, pt.ambient_curvature,
                          pt.h_vectors, frame, sff, pt.isometry_residual, pt.domain_jet)


def mean_curvature(sff: SecondFF) -> tuple[np.ndarray, float]:
    """Mean curvature components ``(1/n) tr h^r`` and ``H^2``."""
    Hr = np.einsum("rii->r", sff.coeffs) / sff.n
    return Hr, float(Hr @ Hr)


def sff_norms(sff: SecondFF) -> SFFNorms:
    c = sff.coeffs
    n1 = sff.n1
    diag = np.einsum("rii->ri", c)
    mixed = c[:, :n1, n1:]
    return SFFNorms(
        h_norm2=float(np.sum(c * c)),
        trace_base=diag[:, :n1].sum(axis=1),
        trace_fiber=diag[:, n1:].sum(axis=1),
        mixed_block_norm=float(np.sqrt(np.sum(mixed * mixed))),
    )


def mixed_tg(sff: SecondFF, tolerance: float = tol.EQUALITY) -> bool:
    """True when h vanishes on (base, fiber) pairs to within ``tolerance``."""
    return sff_norms(sff).mixed_block_norm < tolerance


def gauss_residual_from(pt: ImmersionPoint) -> GaussResidual:
    rd = pt.domain_curvature.in_frame(pt.frame.tangent)
    ra = pt.ambient_in_frame()
    h = pt.sff.coeffs
    hh = np.einsum("rad,rbc->abcd", h, h) - np.einsum("rac,rbd->abcd", h, h)
    tensor = float(np.max(np.abs(rd - ra - hh)))
    n = rd.shape[0]
    off = ~np.eye(n, dtype=bool)
    sum_kbar = float(np.einsum("abba->ab", ra)[off].sum())
    two_tau = float(np.einsum("abba->ab", rd)[off].sum())
    _, H2 = mean_curvature(pt.sff)
    h_norm2 = float(np.sum(h * h))
    contracted = abs(sum_kbar - (two_tau + h_norm2 - n * n * H2))
    return GaussResidual(tensor, contracted)


def gauss_residual(imm: ImmersionMap, p) -> GaussResidual:
    """Max frame-component error of the Gauss equation, plus its traced form."""
    return gauss_residual_from(evaluate(imm, p))


def check_isometry(imm: ImmersionMap, points: Sequence) -> float:
    """Largest isometry residual over ``points``; raise if any exceeds the tolerance."""
    worst = 0.0
    for p in points:
        r = imm.isometry_residual(p)
        if r > tol.ISOMETRY:
            raise IsometryError(r, p)
        worst = max(worst, r)
    return worst
