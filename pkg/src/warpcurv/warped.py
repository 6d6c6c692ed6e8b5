"""Warped products ``B x_f F`` with metric ``g_B + f^2 g_F``."""

from __future__ import annotations

import itertools

import numpy as np

from . import adscalar as ad
from . import exprlang
from . import geometry as geo
from .geometry import MetricField

POSITIVITY_GRID = 16


class WarpError(ValueError):
    pass


class WarpedProduct:
    """Warped product of ``base`` (dim n1) and ``fiber`` (dim n2).

    ``warp`` is an expression string or tree over the base coordinates, or a
    callable taking the list of base coordinates. A ``fiber`` of ``None``
    gives a bare base manifold (``n2 = 0``); such domains can be immersed
    but the warped-product inequalities do not apply to them.

    Coordinates of the total space are the base coordinates followed by
    the fiber coordinates, so frame vectors ``e_1..e_n1`` lie in the first
    block (the base distribution) and the rest in the fiber distribution.
    """

    def __init__(self, base: MetricField, fiber: MetricField | None, warp=1.0):
        self.base = base
        self.fiber = fiber
        self.n1 = base.dim
        self.n2 = fiber.dim if fiber is not None else 0
        self.n = self.n1 + self.n2
        if isinstance(warp, str):
            warp = exprlang.parse(warp, base.names)
        if isinstance(warp, (int, float)):
            const = float(warp)
            self.warp_source = repr(const)
            self.warp = lambda coords: const
        elif callable(warp):
            self.warp_source = getattr(warp, "source", "<callable>")
            self.warp = warp
        else:
            unknown = exprlang.free_vars(warp) - set(base.names)
            if unknown:
                raise WarpError(f"warp uses non-base variables {sorted(unknown)}")
            tree = warp
            names = list(base.names)
            self.warp_source = exprlang.to_text(tree)
            self.warp = lambda coords: exprlang.evaluate(tree, dict(zip(names, coords)))
        self.total = self._assemble()

    def _assemble(self) -> MetricField:
        n1, n2, n = self.n1, self.n2, self.n
        base, fiber, warp = self.base, self.fiber, self.warp

        def func(coords):
            out = [[0.0] * n for _ in range(n)]
            gb = base.func(coords[:n1])
            for i in range(n1):
                for j in range(n1):
                    out[i][j] = gb[i][j]
            if n2:
                f = warp(coords[:n1])
                f2 = f * f
                gf = fiber.func(coords[n1:])
                for i in range(n2):
                    for j in range(n2):
                        e = gf[i][j]
                        if not (isinstance(e, float) and e == 0.0):
                            out[n1 + i][n1 + j] = f2 * e
            return out

        names = list(self.base.names) + (list(self.fiber.names) if self.fiber else [])
        box = None
        if self.base.box is not None and (self.fiber is None or self.fiber.box is not None):
            box = list(self.base.box) + (list(self.fiber.box) if self.fiber else [])
        return MetricField(n, func, names, box)

    @property
    def names(self):
        return self.total.names

    @property
    def box(self):
        return self.total.box

    def warp_value(self, p) -> float:
        return ad.value(self.warp([float(x) for x in np.asarray(p)[: self.n1]]))

    def warp_jet(self, p):
        """(f, grad f, Hess f) in total coordinates (fiber entries are zero)."""
        coords = ad.lift(np.asarray(p, dtype=float))
        return ad.jet(self.warp(coords[: self.n1]), self.n)

    def check_positive(self, points: int = POSITIVITY_GRID) -> None:
        """Sample ``f`` on a ``points^n1`` grid over the base box; raise if ``f <= 0``."""
        if self.base.box is None:
            raise WarpError("base has no chart box; cannot check f > 0")
        axes = [np.linspace(lo, hi, points) for lo, hi in self.base.box]
        for q in itertools.product(*axes):
            q = tuple(float(x) for x in q)
            try:
                v = ad.value(self.warp(list(q)))
            except (ad.DomainError, exprlang.ExprEvalError) as exc:
                raise WarpError(f"warping function undefined at {list(q)}: {exc}") from None
            if not v > 0.0:
                raise WarpError(f"warping function f = {v!r} <= 0 at base point {list(q)}")


def build(base: MetricField, fiber: MetricField | None, warp=1.0, check: bool = True) -> WarpedProduct:
    """Assemble ``g_B + f^2 g_F``; by default reject ``f <= 0`` on the base box."""
    wp = WarpedProduct(base, fiber, warp)
    if check and wp.n2 and wp.base.box is not None:
        wp.check_positive()
    return wp


def split_frame(wp: WarpedProduct, G: np.ndarray) -> np.ndarray:
    """Orthonormal frame: base coordinates first, then fiber coordinates."""
    return geo.orthonormalize(G, np.eye(wp.n))


def warp_connection_check(wp: WarpedProduct, p, X, Y) -> float:
    """Residual of ``nabla_X Y = nabla_Y X = (X ln f) Y`` for lifted fields.

    ``X`` (base block) and ``Y`` (fiber block) are extended to the
    constant-coefficient lifts of base/fiber fields.
    """
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    n1 = wp.n1
    if np.any(X[n1:] != 0.0) or np.any(Y[:n1] != 0.0):
        raise WarpError("X must lie in the base block and Y in the fiber block")
    jet = wp.total.jet(p)
    gamma = geo.christoffel_from_jet(jet)
    f, df, _ = wp.warp_jet(p)
    x_ln_f = (X @ df) / f
    nabla_xy = np.einsum("kij,i,j->k", gamma, X, Y)
    nabla_yx = np.einsum("kij,i,j->k", gamma, Y, X)
    G = jet.g
    r1 = nabla_xy - x_ln_f * Y
    r2 = nabla_yx - x_ln_f * Y
    return float(max(np.sqrt(abs(r1 @ G @ r1)), np.sqrt(abs(r2 @ G @ r2))))


def delta_f_over_f(wp: WarpedProduct, p) -> float:
    """``(1/f) sum_{i<=n1} ((nabla_{e_i} e_i) f - e_i^2 f)`` with a base frame."""
    jet = wp.total.jet(p)
    return _delta_from(wp, jet, geo.christoffel_from_jet(jet), p)


def _delta_from(wp: WarpedProduct, jet, gamma, p, E: np.ndarray | None = None) -> float:
    if E is None:
        E = split_frame(wp, jet.g)
    f, df, ddf = wp.warp_jet(p)
    return geo.laplacian_from(gamma, E[:, : wp.n1], df, ddf) / f


def mixed_plane_sums(wp: WarpedProduct, p) -> np.ndarray:
    """``sum_{i<=n1} K(e_i ^ e_j)`` for every fiber frame index ``j``."""
    curv = geo.curvature(wp.total, p)
    E = split_frame(wp, curv.metric)
    rf = curv.in_frame(E)
    n1 = wp.n1
    return np.array([sum(rf[i, j, j, i] for i in range(n1)) for j in range(n1, wp.n)])
