import math

import numpy as np
import pytest
import sympy as sp

from warpcurv import catalog, immersion
from warpcurv import geometry as geo
from warpcurv.ambient import make_ambient
from warpcurv.warped import build

CATALOG = [
    catalog.circle(1.5),
    catalog.product_torus(1.0, 2.0),
    catalog.clifford_identity(2, 2),
    catalog.clifford_embedded(2, 2),
    catalog.clifford_embedded(2, 3),
    catalog.clifford_subtorus(3, 2, 2, 1),
    catalog.surface_of_revolution(),
    catalog.equator(1),
    catalog.equator(3),
    catalog.sphere_umbilic(3, 2.0),
    catalog.rotational_s3(),
    catalog.product_space_forms_identity((2, 2), (1.0, -1.0)),
]


def points(imm, count, seed=0):
    return imm.domain.total.sample_box(count, np.random.default_rng(seed))


def test_circle_frame_and_curvature():
    a = 1.5
    imm = catalog.circle(a)
    for t in (0.4, 2.0, 5.1):
        pt = immersion.evaluate(imm, [t])
        assert pt.frame.mean_dir_first
        assert pt.frame.pushed[:, 0] == pytest.approx([-math.sin(t), math.cos(t)])
        assert pt.frame.normal[:, 0] == pytest.approx([-math.cos(t), -math.sin(t)])
        assert pt.sff.coeffs[0, 0, 0] == pytest.approx(1 / a, rel=1e-12)


def test_totally_geodesic_examples():
    for imm in (catalog.equator(1), catalog.equator(3), catalog.clifford_subtorus(2, 2, 1, 1)):
        for p in points(imm, 5):
            pt = immersion.evaluate(imm, p)
            assert np.max(np.abs(pt.sff.coeffs)) < 1e-12
            assert not pt.frame.mean_dir_first


@pytest.mark.parametrize("n,r", [(2, 1.0), (3, 2.0), (4, 0.7)])
def test_round_sphere_is_umbilic(n, r):
    imm = catalog.sphere_umbilic(n, r)
    for p in points(imm, 4):
        sff = immersion.evaluate(imm, p).sff
        _, H2 = immersion.mean_curvature(sff)
        assert H2 == pytest.approx(1 / r**2, rel=1e-11)
        assert immersion.sff_norms(sff).h_norm2 == pytest.approx(n / r**2, rel=1e-11)
        assert np.allclose(sff.coeffs[0], np.eye(n) / r, atol=1e-11)


@pytest.mark.parametrize("m1,m2", [(2, 2), (2, 3), (3, 3)])
def test_clifford_principal_curvatures(m1, m2):
    m = m1 + m2
    imm = catalog.clifford_embedded(m1, m2)
    for p in points(imm, 3):
        sff = immersion.evaluate(imm, p).sff
        pcs = np.linalg.eigvalsh(sff.coeffs[0])
        if pcs[-1] < -pcs[0]:
            pcs = -pcs[::-1]
        want = sorted([-math.sqrt(m1 / m2)] * m2 + [math.sqrt(m2 / m1)] * m1)
        assert pcs == pytest.approx(want, abs=1e-10)
        assert immersion.mean_curvature(sff)[1] < 1e-20
        assert immersion.sff_norms(sff).h_norm2 == pytest.approx(m, rel=1e-11)


def test_flat_torus_is_mixed_totally_geodesic():
    imm = catalog.product_torus(1.0, 2.0)
    for p in points(imm, 5):
        sff = immersion.evaluate(imm, p).sff
        assert immersion.mixed_tg(sff)
        norms = immersion.sff_norms(sff)
        assert norms.mixed_block_norm < 1e-14
        # h(e1, e1) and h(e2, e2) are orthogonal with lengths 1/a and 1/b
        assert immersion.mean_curvature(sff)[1] == pytest.approx((1 + 0.25) / 4, rel=1e-12)


def test_surface_of_revolution_against_sympy():
    t, th = sp.symbols("t th")
    f = 2 + sp.sin(t)
    X = sp.Matrix([f * sp.cos(th), f * sp.sin(th), t])
    Xt, Xth = X.diff(t), X.diff(th)
    nvec = Xt.cross(Xth)
    nvec = nvec / sp.sqrt(nvec.dot(nvec))
    E, F, G = Xt.dot(Xt), Xt.dot(Xth), Xth.dot(Xth)
    L, M, N = X.diff(t, 2).dot(nvec), X.diff(t, th).dot(nvec), X.diff(th, 2).dot(nvec)
    H = (E * N - 2 * F * M + G * L) / (2 * (E * G - F * F))
    K = (L * N - M * M) / (E * G - F * F)
    fn = sp.lambdify((t, th), [H, K], "math")
    imm = catalog.surface_of_revolution()
    for p in points(imm, 6):
        Hs, Ks = fn(*p)
        sff = immersion.evaluate(imm, p).sff
        _, H2 = immersion.mean_curvature(sff)
        assert H2 == pytest.approx(Hs * Hs, rel=1e-10, abs=1e-13)
        assert immersion.sff_norms(sff).h_norm2 == pytest.approx(4 * Hs * Hs - 2 * Ks, rel=1e-10, abs=1e-13)


@pytest.mark.parametrize("imm", CATALOG, ids=lambda i: f"{i.name}-{i.n}-{i.m}")
def test_structural_identities_on_catalog(imm):
    for p in points(imm, 20, seed=3):
        pt = immersion.evaluate(imm, p)
        assert pt.isometry_residual < 1e-10
        assert pt.sff.symmetry_error() < 1e-9
        assert pt.frame.orthonormality_error() < 1e-10
        res = immersion.gauss_residual_from(pt)
        assert res.tensor < 1e-7 and res.contracted < 1e-7


def test_normal_frame_invariants():
    rng = np.random.default_rng(5)
    for imm in (catalog.clifford_subtorus(3, 3, 2, 1), catalog.rotational_s3()):
        for p in points(imm, 4, seed=1):
            pt = immersion.evaluate(imm, p)
            k = pt.frame.normal.shape[1]
            Q, _ = np.linalg.qr(rng.standard_normal((k, k)))
            rot = immersion.rotate_normals(pt, Q)
            a, b = immersion.sff_norms(pt.sff), immersion.sff_norms(rot.sff)
            assert b.h_norm2 == pytest.approx(a.h_norm2, abs=1e-8)
            assert b.mixed_block_norm == pytest.approx(a.mixed_block_norm, abs=1e-8)
            assert immersion.mean_curvature(rot.sff)[1] == pytest.approx(
                immersion.mean_curvature(pt.sff)[1], abs=1e-8)
            assert rot.frame.orthonormality_error() < 1e-10


def test_mean_direction_comes_first():
    imm = catalog.product_torus(1.0, 2.0)
    for p in points(imm, 5):
        sff = immersion.evaluate(imm, p).sff
        Hr, H2 = immersion.mean_curvature(sff)
        assert H2 > 0.1 and Hr[0] > 0
        assert np.max(np.abs(Hr[1:])) < 1e-12


def test_second_ff_with_supplied_frame():
    imm = catalog.rotational_s3()
    p = points(imm, 1)[0]
    pt = immersion.evaluate(imm, p)
    flipped = pt.frame.with_normals(-pt.frame.normal)
    sff = immersion.second_ff(imm, p, flipped)
    assert np.allclose(sff.coeffs, -pt.sff.coeffs)


def test_non_isometric_map_is_rejected():
    dom = build(geo.MetricField.from_exprs(["t"], ["1"], [(0.1, 1.0)]),
                geo.MetricField.from_exprs(["s"], ["1"], [(0.0, 1.0)]), 1.0)
    imm = immersion.ImmersionMap(dom, make_ambient("euclidean", dim=3), ["2 * t", "s", "0"])
    with pytest.raises(immersion.IsometryError) as exc:
        immersion.evaluate(imm, [0.5, 0.5])
    assert exc.value.residual == pytest.approx(3.0)
    with pytest.raises(immersion.IsometryError):
        immersion.check_isometry(imm, [[0.5, 0.5]])
    assert immersion.check_isometry(catalog.product_torus(), points(catalog.product_torus(), 3)) < 1e-12


def test_rank_deficient_jacobian():
    dom = build(geo.MetricField.from_exprs(["t"], ["1"], [(0.1, 1.0)]),
                geo.MetricField.from_exprs(["s"], ["1"], [(0.0, 1.0)]), 1.0)
    imm = immersion.ImmersionMap(dom, make_ambient("euclidean", dim=3), ["t", "t", "0"])
    with pytest.raises(geo.RankDeficient):
        immersion.evaluate(imm, [0.5, 0.5], check_isometry=False)


def test_component_count_checked():
    dom = catalog.product_torus().domain
    with pytest.raises(ValueError):
        immersion.ImmersionMap(dom, make_ambient("euclidean", dim=4), ["t", "s"])
