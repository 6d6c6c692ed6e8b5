import math

import numpy as np
import pytest

from warpcurv import ambient as am
from warpcurv import catalog, immersion
from warpcurv import geometry as geo


def test_make_ambient_examples():
    e = am.make_ambient("euclidean", dim=3)
    assert np.array_equal(e.metric.at([0.1, 0.2, 0.3]), np.eye(3))
    assert e.exact_K_values == (0.0,)
    c = am.make_ambient("clifford", m1=2, m2=2)
    assert c.extra["radii"] == pytest.approx((math.sqrt(0.5), math.sqrt(0.5)))
    assert sorted(c.exact_K_values) == [0.0, 2.0, 2.0]
    p = am.make_ambient("product_space_forms", dims=(2, 2), c=(1.0, -1.0))
    assert set(p.exact_K_values) == {1.0, -1.0, 0.0}
    assert (p.c_low, p.c_high) == (-1.0, 1.0)


@pytest.mark.parametrize("m1,m2", [(1, 3), (1, 2), (3, 1), (0, 4)])
def test_clifford_constraints(m1, m2):
    with pytest.raises(am.AmbientError):
        am.make_ambient("clifford", m1=m1, m2=m2)


def test_unknown_kind():
    with pytest.raises(am.AmbientError):
        am.make_ambient("torus", dim=2)


def test_sphere_chart_round_trip():
    rng = np.random.default_rng(0)
    for k in (2, 3, 5):
        ang = rng.uniform(0.2, 2.9, k)
        x = am.sphere_point(list(ang))
        assert sum(v * v for v in x) == pytest.approx(1.0)
        assert am.sphere_angles(x) == pytest.approx(list(ang), rel=1e-12)


@pytest.mark.parametrize("m1,m2", [(2, 2), (2, 3), (3, 3)])
def test_clifford_extrinsic_closed_form_and_numeric(m1, m2):
    m = m1 + m2
    rec = am.clifford_extrinsic(m1, m2, points=3, seed=1)
    assert rec.h_norm2 == m
    assert rec.tau == m * (m - 2) / 2
    assert sum(rec.principal_curvatures) == pytest.approx(0.0, abs=1e-14)
    for pcs in rec.numeric["principal_curvatures"]:
        assert np.allclose(sorted(pcs), sorted(rec.principal_curvatures), atol=1e-6)
    assert np.allclose(rec.numeric["h_norm2"], m, atol=1e-6)
    assert np.allclose(rec.numeric["tau"], m * (m - 2) / 2, atol=1e-6)
    assert np.max(rec.numeric["H2"]) < 1e-12
    for ks in rec.numeric["sectional_values"]:
        assert all(min(abs(k - v) for v in rec.sectional_values) < 1e-6 for k in ks)


def test_clifford_2_3_values():
    rec = am.clifford_extrinsic(2, 3, points=0)
    assert sorted(rec.principal_curvatures) == pytest.approx(
        sorted([math.sqrt(1.5)] * 2 + [-math.sqrt(2 / 3)] * 3))
    assert rec.h_norm2 == 5 and rec.tau == 7.5


def test_ricci_bound_examples():
    r = 1 / math.sqrt(2)
    ric, bound, eq = am.ricci_bound_check(2, 2, r, r)
    assert ric == pytest.approx(1.0) and bound == pytest.approx(1.0) and eq
    ric, bound, eq = am.ricci_bound_check(2, 2, 1.0, 0.0)
    assert ric == pytest.approx(2.0) and not eq
    x, y = math.sqrt(3 / 5), math.sqrt(2 / 5)
    ric, bound, eq = am.ricci_bound_check(2, 3, x, y)
    assert ric == pytest.approx(11 / 6) and bound == pytest.approx(11 / 6) and eq
    with pytest.raises(am.AmbientError):
        am.ricci_bound_check(2, 2, 1.0, 1.0)


@pytest.mark.parametrize("m1,m2", [(2, 2), (2, 3)])
def test_engine_ricci_follows_gauss_equation(m1, m2):
    """Ricci of the torus from its own metric against (m - 1) - |A X|^2 from the embedding."""
    m = m1 + m2
    emb = catalog.clifford_embedded(m1, m2)
    rng = np.random.default_rng(4)
    p = emb.domain.total.sample_box(1, rng)[0]
    pt = immersion.evaluate(emb, p)
    A = pt.sff.coeffs[0]
    if np.trace(A[:m1, :m1]) < 0:
        A = -A
    E = pt.frame.tangent
    for th in rng.uniform(0, 2 * math.pi, 5):
        x, y = math.cos(th), math.sin(th)
        a = np.zeros(m)
        a[0], a[m1] = x, y
        X = E @ a
        gauss = (m - 1) - float(np.sum((A @ a) ** 2))
        engine = geo.ricci_from(pt.domain_curvature, X)
        assert engine == pytest.approx(gauss, abs=1e-9)
        assert engine == pytest.approx(m - 1 - (m2 / m1 * x * x + m1 / m2 * y * y), abs=1e-9)


def test_extremal_on_spheres_any_subspace():
    amb = am.make_ambient("space_form", dim=4, c=0.25)
    rng = np.random.default_rng(2)
    p = amb.metric.sample_box(1, rng)[0]
    for w in (2, 3):
        basis = rng.standard_normal((4, w))
        ext = am.extremal_sectional(amb, p, basis)
        assert ext.method == "numeric"
        assert ext.inf_val == pytest.approx(0.25, abs=1e-10)
        assert ext.sup_val == pytest.approx(0.25, abs=1e-10)


@pytest.mark.parametrize("kind,params,expected", [
    ("clifford", {"m1": 2, "m2": 2}, (0.0, 2.0)),
    ("clifford", {"m1": 2, "m2": 3}, (0.0, 2.5)),
    ("product_space_forms", {"dims": (2, 3), "c": (1.0, -1.0)}, (-1.0, 1.0)),
    ("product_space_forms", {"dims": (2, 2), "c": (2.0, 0.5)}, (0.0, 2.0)),
])
def test_numeric_full_space_recovers_catalog(kind, params, expected):
    amb = am.make_ambient(kind, **params)
    rng = np.random.default_rng(6)
    for p in amb.metric.sample_box(10, rng):
        exact = am.extremal_sectional(amb, p)
        assert exact.method == "exact_catalog"
        assert (exact.inf_val, exact.sup_val) == pytest.approx(expected)
        num = am.extremal_sectional(amb, p, use_catalog=False)
        assert num.inf_val == pytest.approx(expected[0], abs=1e-6)
        assert num.sup_val == pytest.approx(expected[1], abs=1e-6)
        assert num.inf_val <= num.sup_val


def test_random_subspace_sandwich():
    rng = np.random.default_rng(12)
    for kind, params in [("clifford", {"m1": 3, "m2": 2}), ("product_space_forms", {"dims": (2, 2), "c": (1.0, -0.5)})]:
        amb = am.make_ambient(kind, **params)
        lo, hi = min(amb.exact_K_values), max(amb.exact_K_values)
        for p in amb.metric.sample_box(5, rng):
            for w in (2, 3):
                ext = am.extremal_sectional(amb, p, rng.standard_normal((amb.dim, w)))
                assert lo - 1e-8 <= ext.inf_val <= ext.sup_val <= hi + 1e-8


def test_optimizer_reports_attaining_planes():
    amb = am.make_ambient("clifford", m1=2, m2=3)
    p = amb.metric.sample_box(1, np.random.default_rng(3))[0]
    curv = geo.curvature(amb.metric, p)
    ext = am.extremal_sectional(amb, p, use_catalog=False)
    assert curv.sectional(*ext.argmax) == pytest.approx(ext.sup_val, abs=1e-10)
    assert curv.sectional(*ext.argmin) == pytest.approx(ext.inf_val, abs=1e-10)


def test_optimizer_is_start_order_independent():
    amb = am.make_ambient("product_space_forms", dims=(2, 3), c=(0.7, -0.3))
    p = amb.metric.sample_box(1, np.random.default_rng(0))[0]
    R = geo.curvature(amb.metric, p).in_frame(geo.orthonormalize(amb.metric.at(p), np.eye(5)))
    a = am.restricted_extremes(R, seed=1)
    b = am.restricted_extremes(R, seed=99)
    assert a == pytest.approx(b, abs=1e-9)


def test_subspace_rank_checks():
    amb = am.make_ambient("euclidean", dim=3)
    with pytest.raises(geo.RankDeficient):
        am.extremal_sectional(amb, [0, 0, 0], np.array([[1.0, 0, 0]]).T)
    with pytest.raises(geo.RankDeficient):
        am.extremal_sectional(amb, [0, 0, 0], np.array([[1.0, 0, 0], [2.0, 0, 0]]).T)
