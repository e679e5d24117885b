"""Continued-fraction approximants, quadrature rules, and reference measures."""

import cmath
import math

import numpy as np
import pytest

from cmvkit.caratheodory import (
    CONVERGENCE_SCENARIOS,
    QuadratureRule,
    approximant_routes,
    cf_approximant,
    modified_approximant,
    oracle_F,
    oracle_moments,
    resolvent_value,
    scenario_rows,
    szego_rule,
)
from cmvkit.circle import FiniteSpectrum
from cmvkit.errors import BranchPointError, DomainError, PoleError, ValidationError
from cmvkit.schur import Constant


# --------------------------------------------------------------------------
# closed-form references
# --------------------------------------------------------------------------


def test_lebesgue_oracle_inside_outside():
    assert oracle_F("lebesgue", 0.5) == 1.0
    assert oracle_F("lebesgue", 0.3 - 0.6j) == 1.0
    assert oracle_F("lebesgue", 2.0) == -1.0
    with pytest.raises(DomainError):
        oracle_F("lebesgue", cmath.exp(0.3j))


def test_geronimus_oracle_closed_form():
    # a = 1/2, z = 1/2: f solves f^2 - 2f - 2 = 0, bounded root 1 - sqrt(3),
    # so F = 2 sqrt(3) - 3
    val = oracle_F("geronimus:0.5", 0.5)
    assert val == pytest.approx(2.0 * math.sqrt(3.0) - 3.0, abs=1e-12)

    # a = 1/2, z = 0.3: bounded root (0.7 - sqrt(0.79)) / 0.3
    f = (0.7 - math.sqrt(0.79)) / 0.3
    expected = (1.0 + 0.3 * f) / (1.0 - 0.3 * f)
    val3 = oracle_F(("geronimus", 0.5), 0.3)
    assert val3 == pytest.approx(expected, abs=1e-12)
    assert val3 == pytest.approx(0.6823412620901682, abs=1e-12)


def test_geronimus_oracle_reflection_and_zero():
    # F(1/conj(z)) = -conj(F(z)) off the circle, F(0) = 1
    inner = oracle_F(("geronimus", 0.4 + 0.1j), 0.3 + 0.2j)
    outer = oracle_F(("geronimus", 0.4 + 0.1j), 1.0 / (0.3 - 0.2j))
    assert outer == pytest.approx(-inner.conjugate(), abs=1e-12)
    assert oracle_F(("geronimus", 0.37), 0.0) == pytest.approx(1.0, abs=1e-15)


def test_geronimus_oracle_on_circle_gap():
    # support is the arc at angles >= pi/3 from +1; the gap point e^{i pi/6}
    # is reachable, points on the arc and near its endpoints are rejected
    val = oracle_F(("geronimus", 0.5), cmath.exp(1j * math.pi / 6.0))
    assert abs(val.imag) > 0.0
    with pytest.raises(DomainError):
        oracle_F(("geronimus", 0.5), cmath.exp(2.0j))
    with pytest.raises(BranchPointError):
        oracle_F(("geronimus", 0.5), cmath.exp(1j * math.pi / 3.0))
    with pytest.raises(DomainError):
        oracle_F(("geronimus", 1.0), 0.3)
    with pytest.raises(DomainError):
        oracle_F("unknown-measure", 0.3)


def test_oracle_moments_lebesgue_and_geronimus():
    leb = oracle_moments("lebesgue", 5)
    assert leb[0] == 1.0
    assert np.max(np.abs(leb[1:])) <= 1e-13

    # a = 1/2: m_1 = -1/2, m_2 = -1/8, m_3 = 1/16 (series of the bounded root)
    ger = oracle_moments(("geronimus", 0.5), 3)
    assert np.allclose(ger, [1.0, -0.5, -0.125, 0.0625], atol=1e-12)

    # complex a: m_1 = -conj(a), m_2 = a conj(a)^2 - conj(a) + conj(a)^2
    a = 0.3 + 0.4j
    ac = a.conjugate()
    ger2 = oracle_moments(("geronimus", a), 2)
    assert ger2[1] == pytest.approx(-ac, abs=1e-12)
    assert ger2[2] == pytest.approx(a * ac * ac - ac + ac * ac, abs=1e-12)


def test_oracle_moments_validation():
    with pytest.raises(DomainError):
        oracle_moments("lebesgue", -1)
    with pytest.raises(DomainError):
        oracle_moments("lebesgue", 3, radius=1.0)
    with pytest.raises(DomainError):
        oracle_moments("lebesgue", 300, samples=512)


# --------------------------------------------------------------------------
# the three evaluation routes
# --------------------------------------------------------------------------


def test_cf_approximant_by_hand():
    # index 0 is the constant 1; indices 2 and 3 for a_1 = 1/2 reduce to
    # small rational values
    assert cf_approximant([0.5], 0, None, 0.3).value == 1.0
    assert cf_approximant([0.5], 2, None, 0.5).value == pytest.approx(0.6, abs=1e-15)
    assert cf_approximant([0.5], 3, None, 2.0).value == pytest.approx(-0.6, abs=1e-15)
    # tail weight w: (A_1 + w A_0) / (B_1 + w B_0) = (z - 2z + w) / (z + w)
    assert cf_approximant([0.5], 1, 1.0, 0.5).value == pytest.approx(1.0 / 3.0, abs=1e-15)


def test_cf_approximant_errors():
    with pytest.raises(DomainError):
        cf_approximant([0.5], -1, None, 0.3)
    with pytest.raises(DomainError):
        cf_approximant([0.5], 6, None, 0.3)
    with pytest.raises(DomainError):
        cf_approximant([1.5], 2, None, 0.3)
    # B_2 = conj(a) z + 1 vanishes at z = -2
    with pytest.raises(PoleError):
        cf_approximant([0.5], 2, None, -2.0)


def test_modified_approximant_order_one():
    # n = 1 has empty coefficient prefix: K = (u - z) / (u + z)
    for u, z in [(1.0, 0.5), (1j, 0.25 - 0.3j), (-1.0, 2.0)]:
        val = modified_approximant([], u, 1, z).value
        assert val == pytest.approx((u - z) / (u + z), abs=1e-15)


def test_modified_approximant_free_family():
    # a = 0: K_{2n}(z) = (1 - u^{-1} z^n) / (1 + u^{-1} z^n) for u = 1
    val = modified_approximant([0.0, 0.0], 1.0, 3, 0.5).value
    assert val == pytest.approx(7.0 / 9.0, abs=1e-15)
    assert modified_approximant([0.0], 1.0, 2, 0.0).value == pytest.approx(1.0, abs=1e-15)


def test_modified_approximant_errors():
    with pytest.raises(DomainError):
        modified_approximant([], 1.0, 0, 0.5)
    with pytest.raises(DomainError):
        modified_approximant([0.5], 0.5, 2, 0.3)
    with pytest.raises(DomainError):
        modified_approximant([], 1.0, 2, 0.3)
    # z^4 + 1 vanishes at the order-4 truncation spectrum
    with pytest.raises(PoleError):
        modified_approximant([0.0, 0.0, 0.0], 1.0, 4, cmath.exp(1j * math.pi / 4.0))


def test_resolvent_value_free_family():
    val = resolvent_value([0.0, 0.0, 0.0], 1.0, 4, 0.5).value
    assert val == pytest.approx(15.0 / 17.0, abs=1e-12)
    with pytest.raises(PoleError):
        resolvent_value([0.0, 0.0, 0.0], 1.0, 4, cmath.exp(1j * math.pi / 4.0))


def test_three_routes_agree():
    rng = np.random.default_rng(77)
    for _ in range(25):
        n = int(rng.integers(1, 24))
        vals = rng.uniform(-0.55, 0.55, (n - 1, 2)) if n > 1 else np.zeros((0, 2))
        prefix = vals[:, 0] + 1j * vals[:, 1]
        u = cmath.exp(2j * math.pi * rng.uniform())
        z = complex(rng.uniform(-0.8, 0.8), rng.uniform(-0.8, 0.8))
        a, b, c = approximant_routes(prefix, u, n, z)
        assert a.order == b.order == c.order == 2 * n
        scale = max(1.0, abs(b.value))
        assert abs(a.value - b.value) <= 1e-9 * scale
        assert abs(c.value - b.value) <= 1e-9 * scale
        assert {a.route, b.route, c.route} == {
            "cf-recurrence", "polynomial-quotient", "resolvent",
        }


def test_approximant_positive_real_part_inside():
    # approximants of a positive-measure moment function keep Re K >= 0 in
    # the open disk
    rng = np.random.default_rng(12)
    for _ in range(40):
        n = int(rng.integers(1, 30))
        vals = rng.uniform(-0.6, 0.6, (max(n - 1, 1), 2))
        prefix = (vals[:, 0] + 1j * vals[:, 1])[: n - 1]
        u = cmath.exp(2j * math.pi * rng.uniform())
        z = 0.95 * math.sqrt(rng.uniform()) * cmath.exp(2j * math.pi * rng.uniform())
        val = modified_approximant(prefix, u, n, z).value
        assert val.real >= -1e-9


# --------------------------------------------------------------------------
# quadrature
# --------------------------------------------------------------------------


def test_quadrature_rule_validation():
    nodes = FiniteSpectrum.from_points([1.0, -1.0])
    QuadratureRule(order=2, nodes=nodes, weights=[0.5, 0.5])
    with pytest.raises(ValidationError):
        QuadratureRule(order=2, nodes=nodes, weights=[0.5, 0.25, 0.25])
    with pytest.raises(ValidationError):
        QuadratureRule(order=2, nodes=nodes, weights=[1.0, 0.0])
    with pytest.raises(ValidationError):
        QuadratureRule(order=2, nodes=nodes, weights=[0.7, 0.7])


def test_quadrature_rule_moment_and_integrate():
    rule = QuadratureRule(
        order=2,
        nodes=FiniteSpectrum.from_points([1.0, -1.0]),
        weights=[0.25, 0.75],
    )
    assert rule.moment(0) == pytest.approx(1.0)
    assert rule.moment(1) == pytest.approx(-0.5)
    assert rule.moment(-1) == pytest.approx(-0.5)
    assert rule.integrate(lambda z: z * z) == pytest.approx(rule.moment(2))
    rows = rule.to_csv_rows()
    assert rows[0] == ["re", "im", "angle", "weight"]
    assert len(rows) == 3
    d = rule.to_json_dict()
    assert d["order"] == 2
    assert d["weights"] == [0.25, 0.75]


def test_szego_rule_free_family():
    # a = 0, u = 1: nodes are the 4th roots of -1, weights uniform
    rule = szego_rule(np.zeros(3, dtype=complex), 1.0, 4)
    assert np.allclose(rule.weights, 0.25, atol=1e-14)
    angles = sorted(p.angle for p in rule.nodes)
    assert angles == pytest.approx(
        [math.pi / 4.0, 3.0 * math.pi / 4.0, 5.0 * math.pi / 4.0, 7.0 * math.pi / 4.0],
        abs=1e-12,
    )
    for k in range(-3, 4):
        target = 1.0 if k == 0 else 0.0
        assert abs(rule.moment(k) - target) <= 1e-13


def test_szego_rule_constant_half():
    # order-2 rule of the constant-1/2 family with u = -1: nodes {1, -1},
    # weights {1/4, 3/4}
    rule = szego_rule(Constant(0.5), -1.0, 2)
    pts = rule.nodes.as_array()
    assert pts[0] == pytest.approx(1.0, abs=1e-12)
    assert pts[1] == pytest.approx(-1.0, abs=1e-12)
    assert rule.weights[0] == pytest.approx(0.25, abs=1e-12)
    assert rule.weights[1] == pytest.approx(0.75, abs=1e-12)
    assert rule.moment(1) == pytest.approx(-0.5, abs=1e-12)


def test_szego_rule_exactness_against_moments():
    # moment(k) of an order-n rule equals conj(m_k) for |k| <= n - 1,
    # independent of the boundary parameter
    a = 0.3 + 0.4j
    ms = oracle_moments(("geronimus", a), 4)
    for u in (1.0, 1j, cmath.exp(0.7j)):
        rule = szego_rule(Constant(a), u, 5)
        for k in range(5):
            assert abs(rule.moment(k) - ms[k].conjugate()) <= 1e-10
            assert abs(rule.moment(-k) - ms[k]) <= 1e-10


def test_szego_rule_validation():
    with pytest.raises(DomainError):
        szego_rule(np.zeros(0, dtype=complex), 1.0, 0)


# --------------------------------------------------------------------------
# named convergence scenarios
# --------------------------------------------------------------------------


def test_scenario_table_structure():
    assert set(CONVERGENCE_SCENARIOS) == {
        "modulus-to-one", "alternating-phase", "band-split", "ratio-limit",
    }
    for name, sc in CONVERGENCE_SCENARIOS.items():
        assert sc.name == name
        assert len(sc.grid) >= 5
        assert len(sc.orders) >= 5
        assert sc.region


def test_ratio_limit_scenario_converges_to_oracle():
    rows = scenario_rows(CONVERGENCE_SCENARIOS["ratio-limit"])
    errs = {}
    for n, _, _, _, _, err in rows:
        errs.setdefault(n, []).append(err)
    orders = sorted(errs)
    assert max(errs[orders[-1]]) <= 1e-12
    assert max(errs[orders[-1]]) < max(errs[orders[0]])
