"""Builtin immersions of warped products with known geometry.

Every builtin returns an :class:`ImmersionMap` whose domain metric is the
exact induced metric, so the isometry check holds to rounding error.
"""

from __future__ import annotations

import math

from . import adscalar as ad
from . import exprlang
from .ambient import (AmbientSpace, make_ambient, space_form_metric,
                      sphere_angles, sphere_metric, sphere_point)
from .geometry import MetricField
from .immersion import ImmersionMap
from .warped import WarpedProduct, build

HALF_PI = 0.5 * math.pi
CIRCLE_BOX = (0.15, 2.0 * math.pi - 0.15)


def _line(name: str, entry: str, box) -> MetricField:
    return MetricField.from_exprs([name], [entry], [box])


def _identity(coords):
    return list(coords)


def circle(a: float = 1.0) -> ImmersionMap:
    """Circle of radius ``a`` in the plane; a bare 1-dimensional domain."""
    a = float(a)
    if a <= 0:
        raise ValueError("radius must be positive")
    dom = WarpedProduct(_line("t", repr(a * a), CIRCLE_BOX), None)
    amb = make_ambient("euclidean", dim=2)
    return ImmersionMap(dom, amb, lambda c: [a * ad.cos(c[0]), a * ad.sin(c[0])],
                        "circle", {"a": a})


def product_torus(a: float = 1.0, b: float = 1.0) -> ImmersionMap:
    """``S^1(a) x S^1(b)`` in R^4 as a warped product with ``f = 1``."""
    a, b = float(a), float(b)
    if a <= 0 or b <= 0:
        raise ValueError("radii must be positive")
    dom = build(_line("t", repr(a * a), CIRCLE_BOX), _line("s", repr(b * b), CIRCLE_BOX), 1.0)
    amb = make_ambient("euclidean", dim=4)

    def phi(c):
        t, s = c
        return [a * ad.cos(t), a * ad.sin(t), b * ad.cos(s), b * ad.sin(s)]

    return ImmersionMap(dom, amb, phi, "product_torus", {"a": a, "b": b})


def clifford_domain(m1: int, m2: int) -> WarpedProduct:
    m = m1 + m2
    r1, r2 = math.sqrt(m1 / m), math.sqrt(m2 / m)
    return build(sphere_metric(m1, r1, "u"), sphere_metric(m2, r2, "v"), 1.0)


def clifford_identity(m1: int = 2, m2: int = 2) -> ImmersionMap:
    """The Clifford torus as ``S^m1 x_1 S^m2`` mapped identically onto itself."""
    amb = make_ambient("clifford", m1=m1, m2=m2)
    return ImmersionMap(clifford_domain(m1, m2), amb, _identity, "clifford_identity",
                        {"m1": m1, "m2": m2})


def clifford_embedded(m1: int = 2, m2: int = 2) -> ImmersionMap:
    """The Clifford torus in ``S^{m+1}(1)`` via ``(r1 u, r2 v)``, written in sphere angles."""
    make_ambient("clifford", m1=m1, m2=m2)
    m = m1 + m2
    r1, r2 = math.sqrt(m1 / m), math.sqrt(m2 / m)
    amb = make_ambient("space_form", dim=m + 1, c=1.0)

    def phi(c):
        u = sphere_point(c[:m1])
        v = sphere_point(c[m1:])
        return sphere_angles([r1 * x for x in u] + [r2 * x for x in v])

    return ImmersionMap(clifford_domain(m1, m2), amb, phi, "clifford_embedded", {"m1": m1, "m2": m2})


def clifford_subtorus(m1: int = 2, m2: int = 2, k1: int = 1, k2: int = 1) -> ImmersionMap:
    """Totally geodesic ``S^k1 x S^k2`` inside the Clifford torus.

    The leading ``m1 - k1`` (resp. ``m2 - k2``) angles of each factor are
    fixed at pi/2, which cuts out a great subsphere.
    """
    if not (1 <= k1 <= m1 and 1 <= k2 <= m2):
        raise ValueError("need 1 <= k1 <= m1 and 1 <= k2 <= m2")
    amb = make_ambient("clifford", m1=m1, m2=m2)
    m = m1 + m2
    r1, r2 = math.sqrt(m1 / m), math.sqrt(m2 / m)
    dom = build(sphere_metric(k1, r1, "u"), sphere_metric(k2, r2, "v"), 1.0)

    def phi(c):
        return [HALF_PI] * (m1 - k1) + list(c[:k1]) + [HALF_PI] * (m2 - k2) + list(c[k1:])

    return ImmersionMap(dom, amb, phi, "clifford_subtorus", {"m1": m1, "m2": m2, "k1": k1, "k2": k2})


def surface_of_revolution(f: str = "2 + sin(t)", box=(0.0, 3.0)) -> ImmersionMap:
    """Graph of ``f(t)`` rotated about the z-axis: ``(f cos th, f sin th, t)``.

    Induced metric ``(1 + f'^2) dt^2 + f^2 dth^2``; the base metric uses the
    symbolic derivative of ``f``.
    """
    tree = exprlang.parse(f, ["t"])
    df = exprlang.to_text(exprlang.diff(tree, "t"))
    base = _line("t", f"1 + ({df})^2", box)
    dom = build(base, _line("th", "1", CIRCLE_BOX), tree)
    amb = make_ambient("euclidean", dim=3)

    def phi(c):
        t, th = c
        r = exprlang.evaluate(tree, {"t": t}, f)
        return [r * ad.cos(th), r * ad.sin(th), t]

    return ImmersionMap(dom, amb, phi, "surface_of_revolution", {"f": f, "box": list(box)})


def equator(k: int = 1) -> ImmersionMap:
    """Great ``S^k`` inside ``S^{k+1}`` (first ambient angle = pi/2).

    For ``k >= 2`` the domain is ``[0.15, pi-0.15] x_{sin} S^{k-1}``.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    amb = make_ambient("space_form", dim=k + 1, c=1.0)
    if k == 1:
        dom = WarpedProduct(_line("w1", "1", CIRCLE_BOX), None)
    else:
        base = _line("w1", "1", (0.15, math.pi - 0.15))
        dom = build(base, sphere_metric(k - 1, 1.0, "z"), "sin(w1)")
    return ImmersionMap(dom, amb, lambda c: [HALF_PI] + list(c), "equator", {"k": k})


def sphere_umbilic(n: int = 2, r: float = 1.0) -> ImmersionMap:
    """Round ``S^n(r)`` in R^{n+1}: base ``r^2 dpsi^2``, fiber unit ``S^{n-1}``, ``f = r sin psi``."""
    r = float(r)
    if n < 2 or r <= 0:
        raise ValueError("need n >= 2 and r > 0")
    base = _line("psi", repr(r * r), (0.15, math.pi - 0.15))
    dom = build(base, sphere_metric(n - 1, 1.0, "z"), f"{r!r} * sin(psi)")
    amb = make_ambient("euclidean", dim=n + 1)
    return ImmersionMap(dom, amb, lambda c: [r * x for x in sphere_point(c)], "sphere_umbilic",
                        {"n": n, "r": r})


def rotational_s3(rho: str = "0.5 + 0.2 * sin(t)", box=(0.3, 1.2)) -> ImmersionMap:
    """Rotational surface ``(s cos t, s sin t, rho cos th, rho sin th)`` in ``S^3``, ``s = sqrt(1 - rho^2)``.

    Needs ``0 < rho(t) < 1``. Induced metric
    ``(1 - rho^2 + rho'^2 / (1 - rho^2)) dt^2 + rho^2 dth^2``.
    """
    tree = exprlang.parse(rho, ["t"])
    r = exprlang.to_text(tree)
    dr = exprlang.to_text(exprlang.diff(tree, "t"))
    base = _line("t", f"1 - {r}^2 + {dr}^2 / (1 - {r}^2)", box)
    dom = build(base, _line("th", "1", CIRCLE_BOX), tree)
    amb = make_ambient("space_form", dim=3, c=1.0)

    def phi(c):
        t, th = c
        p = exprlang.evaluate(tree, {"t": t}, rho)
        s = ad.sqrt(1.0 - p * p)
        return sphere_angles([s * ad.cos(t), s * ad.sin(t), p * ad.cos(th), p * ad.sin(th)])

    return ImmersionMap(dom, amb, phi, "rotational_s3", {"rho": rho, "box": list(box)})


def product_space_forms_identity(dims=(2, 2), c=(1.0, -1.0)) -> ImmersionMap:
    """``M(c1) x M(c2)`` mapped identically onto itself (``f = 1``)."""
    amb = make_ambient("product_space_forms", dims=dims, c=c)
    k1, k2 = amb.params["dims"]
    c1, c2 = amb.params["c"]
    dom = build(space_form_metric(k1, c1, "a"), space_form_metric(k2, c2, "b"), 1.0)
    return ImmersionMap(dom, amb, _identity, "product_space_forms_identity",
                        {"dims": [k1, k2], "c": [c1, c2]})


def warped_identity(wp: WarpedProduct) -> ImmersionMap:
    """Any warped product mapped identically onto its own chart."""
    amb = make_ambient("chart", metric=wp.total)
    return ImmersionMap(wp, amb, _identity, "warped_identity")


def explicit(domain: WarpedProduct, ambient: AmbientSpace, components) -> ImmersionMap:
    """Immersion from expression strings over the domain coordinate names."""
    return ImmersionMap(domain, ambient, list(components), "explicit")


BUILTINS = {
    "circle": circle,
    "product_torus": product_torus,
    "clifford_identity": clifford_identity,
    "clifford_embedded": clifford_embedded,
    "clifford_subtorus": clifford_subtorus,
    "surface_of_revolution": surface_of_revolution,
    "equator": equator,
    "sphere_umbilic": sphere_umbilic,
    "rotational_s3": rotational_s3,
    "product_space_forms_identity": product_space_forms_identity,
}


def builtin(name: str, **params) -> ImmersionMap:
    try:
        factory = BUILTINS[name]
    except KeyError:
        raise ValueError(f"unknown builtin immersion {name!r}; known: {sorted(BUILTINS)}") from None
    return factory(**params)
