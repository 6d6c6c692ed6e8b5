import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from warpcurv import catalog, chen
from warpcurv import geometry as geo
from warpcurv.warped import build

import families

SLACK = 1e-7


def test_bound_formulas():
    assert chen.upper_bound(2, 2, 1.0, 3.0) == pytest.approx(16 / 8 + 6)
    assert chen.lower_bound(1, 2, 1.0, 4.0, -1.0) == pytest.approx(9 / 4 - 2 - 1)


def test_clifford_identity_goldens():
    imm = catalog.clifford_identity(2, 2)
    for p in families.sample(imm, 3, 0):
        r = chen.evaluate_point(imm, p)
        assert r.delta_f_over_f == 0.0 and r.H2 == 0.0 and r.h_norm2 == 0.0
        assert r.sup_K == pytest.approx(2.0, abs=1e-9) and r.inf_K == pytest.approx(0.0, abs=1e-9)
        assert r.upper_slack == pytest.approx(4.0, abs=1e-9)
        assert r.lower_slack == pytest.approx(0.0, abs=1e-9)
        assert r.tau == pytest.approx(4.0, rel=1e-12)


def test_clifford_embedded_goldens():
    imm = catalog.clifford_embedded(2, 2)
    r = chen.evaluate_point(imm, families.sample(imm, 1, 0)[0])
    assert r.h_norm2 == pytest.approx(4.0, rel=1e-12)
    assert r.tau == pytest.approx(4.0, rel=1e-12)
    assert r.H2 < 1e-20
    # the ambient is the unit sphere, so both extremes are 1
    assert (r.inf_K, r.sup_K) == pytest.approx((1.0, 1.0), abs=1e-12)
    assert r.upper_slack == pytest.approx(2.0, abs=1e-10)
    assert r.lower_slack == pytest.approx(2.0, abs=1e-10)


@pytest.mark.parametrize("a,b", [(1.0, 2.0), (0.5, 0.7), (1.0, 1.0)])
def test_flat_torus_goldens(a, b):
    imm = catalog.product_torus(a, b)
    r = chen.evaluate_point(imm, [1.0, 2.0])
    H2 = (1 / a**2 + 1 / b**2) / 4
    assert r.H2 == pytest.approx(H2, rel=1e-12)
    assert r.upper_slack == pytest.approx(H2, rel=1e-12)  # n^2/(4 n2) = 1
    assert r.lower_slack == pytest.approx(0.0, abs=1e-12)
    assert r.diagnostics.mixed_tg
    # the two traces are orthogonal normal vectors even when a == b
    assert not r.diagnostics.traces_equal


@pytest.mark.parametrize("n,r", [(3, 2.0), (4, 1.0)])
def test_round_sphere_upper_slack(n, r):
    imm = catalog.sphere_umbilic(n, r)
    rep = chen.evaluate_point(imm, families.sample(imm, 1, 2)[0])
    assert rep.delta_f_over_f == pytest.approx(1 / r**2, rel=1e-10)
    assert rep.upper_slack == pytest.approx((n - 2) ** 2 / (4 * (n - 1) * r**2), rel=1e-9)


def test_round_s2_identity_lower_equality():
    wp = geo.MetricField.from_exprs(["w"], ["1"], [(0.3, 2.8)])
    fib = geo.MetricField.from_exprs(["z"], ["1"], [(0.1, 6.0)])
    imm = catalog.warped_identity(build(wp, fib, "sin(w)"))
    for p in families.sample(imm, 4, 0):
        r = chen.evaluate_point(imm, p)
        assert r.delta_f_over_f == pytest.approx(1.0, rel=1e-12)
        assert r.lower_slack == pytest.approx(0.0, abs=1e-12)
        assert r.upper_slack == pytest.approx(0.0, abs=1e-12)


def test_surface_lower_slack_vanishes():
    # n1 = n2 = 1: the lower bound is an identity for surfaces in R^3
    imm = catalog.surface_of_revolution()
    for p in families.sample(imm, 5, 0):
        assert chen.lower_slack(imm, p) == pytest.approx(0.0, abs=1e-12)


def test_equator_is_an_equality_case():
    imm = catalog.equator(3)
    for p in families.sample(imm, 4, 1):
        r = chen.evaluate_point(imm, p)
        assert abs(r.upper_slack) < 1e-10 and abs(r.lower_slack) < 1e-10
        d = r.diagnostics
        assert d.mixed_tg and d.traces_equal and d.mixed_planes_extremal


def test_nontrivial_fiber_required():
    with pytest.raises(ValueError):
        chen.evaluate_point(catalog.circle(), [1.0])


def test_slacks_nonnegative_and_sandwich_on_random_families():
    imms = families.random_immersions(35, seed=11)
    assert len({i.name for i in imms}) >= 7
    for k, imm in enumerate(imms):
        for p in families.sample(imm, 4, k):
            r = chen.evaluate_point(imm, p)
            assert r.upper_slack >= -SLACK, (imm.name, p)
            assert r.lower_slack >= -SLACK, (imm.name, p)
            assert r.lower_bound <= r.delta_f_over_f + SLACK
            assert r.delta_f_over_f <= r.upper_bound + SLACK
            assert r.inf_K <= r.sup_K
            if r.upper_slack < SLACK:
                d = r.diagnostics
                assert d.mixed_tg and d.traces_equal and d.mixed_planes_extremal, (imm.name, p)


def test_restricted_extremes_lie_inside_catalog_envelope():
    imm = catalog.clifford_subtorus(3, 3, 2, 1)
    for p in families.sample(imm, 4, 0):
        r = chen.evaluate_point(imm, p)
        c, c_bar = chen.catalog_envelope(imm)
        assert c - 1e-9 <= r.inf_K <= r.sup_K <= c_bar + 1e-9


def test_space_form_reduction():
    for k, imm in enumerate(families.space_form_immersions(10, seed=3)):
        c = imm.ambient.c_high
        for p in families.sample(imm, 3, k):
            r = chen.evaluate_point(imm, p)
            assert chen.space_form_upper_slack(r, c) == pytest.approx(r.upper_slack, abs=1e-9)


@pytest.mark.parametrize("a,c,expected", [
    ((1.0, 1.0), 2.0, (True, True, True)),
    ((1.0, 1.0, 2.0), 2.0, (True, True, True)),
    ((3.0, 1.0, 2.0), 4.0, (True, True, False)),
])
def test_lemma_examples(a, c, expected):
    assert chen.solve_lemma_c(a) == pytest.approx(c)
    res = chen.lemma_check(a, c)
    assert (res.holds_hypothesis, res.holds_conclusion, res.is_equality) == expected


def test_lemma_hypothesis_failure():
    res = chen.lemma_check([1.0, 2.0, 3.0], 0.0)
    assert not res.holds_hypothesis and res.holds_conclusion is None
    with pytest.raises(ValueError):
        chen.lemma_check([1.0], 0.0)


@settings(max_examples=300, deadline=None)
@given(st.lists(st.floats(-10, 10, allow_nan=False), min_size=2, max_size=8))
def test_lemma_property(a):
    c = chen.solve_lemma_c(a)
    res = chen.lemma_check(a, c)
    assert res.holds_hypothesis
    assert 2 * a[0] * a[1] >= c - 1e-9 * max(1.0, abs(c))
    b = [a[0] + a[1]] + list(a[2:])
    scale = max(1.0, max(abs(x) for x in b))
    assert res.is_equality == all(abs(x - b[0]) <= 1e-10 * scale for x in b)


def test_lemma_planted_equality():
    rng = np.random.default_rng(0)
    for n in range(2, 9):
        s = rng.uniform(-3, 3)
        u = rng.uniform(-3, 3)
        a = [u, s - u] + [s] * (n - 2)
        assert chen.lemma_check(a, chen.solve_lemma_c(a)).is_equality


@pytest.mark.parametrize("imm,c,c_bar", [
    (catalog.clifford_identity(2, 2), 0.0, 2.0),
    (catalog.clifford_identity(2, 3), 0.0, 2.5),
    (catalog.product_space_forms_identity((2, 2), (1.0, -1.0)), -1.0, 1.0),
    (catalog.product_space_forms_identity((2, 2), (2.0, 0.5)), 0.0, 2.0),
    (catalog.clifford_embedded(2, 2), 1.0, 1.0),
    (catalog.product_torus(), 0.0, 0.0),
])
def test_catalog_envelope(imm, c, c_bar):
    assert chen.catalog_envelope(imm) == pytest.approx((c, c_bar))


def test_envelope_unavailable_for_charts():
    imm = families.random_immersions(5, seed=0)[4]
    assert imm.ambient.kind == "chart"
    with pytest.raises(ValueError):
        chen.catalog_envelope(imm)


def test_corollary_slacks_dominate():
    imms = [i for i in families.random_immersions(21, seed=5) if i.ambient.kind != "chart"]
    imms += families.minimal_catalog()
    for k, imm in enumerate(imms):
        for p in families.sample(imm, 3, k):
            r = chen.evaluate_point(imm, p)
            cs = chen.corollary_slacks(imm, r)
            assert cs.upper >= cs.theorem_upper - 1e-9
            assert cs.lower >= cs.theorem_lower - 1e-9


def test_clifford_corollary_values():
    imm = catalog.clifford_identity(2, 2)
    r = chen.evaluate_point(imm, families.sample(imm, 1, 0)[0])
    cs = chen.corollary_slacks(imm, r)
    assert cs.upper == pytest.approx(4.0) and cs.lower == pytest.approx(0.0)


@pytest.mark.parametrize("imm", families.minimal_catalog(), ids=lambda i: f"{i.name}-{i.n}")
def test_nonexistence_on_minimal_catalog(imm):
    rep = chen.nonexistence_witness(imm, families.grid(imm))
    assert rep.consistent
    assert rep.max_delta <= rep.n1 * rep.c_bar + 1e-7


def test_nonexistence_rejects_non_minimal():
    imm = catalog.product_torus()
    with pytest.raises(chen.NotMinimal) as exc:
        chen.nonexistence_witness(imm, families.grid(imm))
    assert exc.value.max_H == pytest.approx(math.sqrt(0.5))
