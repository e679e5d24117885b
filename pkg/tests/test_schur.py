"""Coefficient families: generation, parsing, derived quantities."""

import cmath
import math

import numpy as np
import pytest

from cmvkit.errors import DomainError, ValidationError
from cmvkit.schur import (
    Constant,
    Explicit,
    Parity,
    ParamPrefix,
    PrimeRule,
    RandomArc,
    RandomHalfPlane,
    RandomSet,
    Rotated,
    Rule,
    SplitMix64,
    TwoPeriodic,
    expand,
    format_complex,
    k_metric,
    parse_complex,
    parse_schur_spec,
    rho,
    rotate,
)


def test_rho_basic_values():
    assert rho(0.0) == 1.0
    assert rho(0.5) == pytest.approx(math.sqrt(0.75))
    assert rho(0.6 + 0.8j * 0.5) == pytest.approx(math.sqrt(1.0 - 0.36 - 0.16))


def test_rho_boundary_and_rejection():
    assert rho(1.0) == 0.0
    with pytest.raises(DomainError):
        rho(1.1)


def test_constant_and_two_periodic_generation():
    assert np.allclose(Constant(0.25).generate(3), [0.25, 0.25, 0.25])
    vals = TwoPeriodic(0.25, 0.75).generate(5)
    assert np.allclose(vals, [0.25, 0.75, 0.25, 0.75, 0.25])


def test_prefix_validates_and_precomputes_rhos():
    prefix = expand(Constant(0.5), 4)
    assert len(prefix) == 4
    assert np.allclose(prefix.rhos, math.sqrt(0.75))
    with pytest.raises(ValidationError):
        ParamPrefix(values=np.array([0.5, 1.0 + 0.0j]), rhos=np.array([1.0, 1.0]))


def test_phi_norm_is_product_of_rhos():
    prefix = expand(Constant(0.5), 6)
    assert prefix.phi_norm(4) == pytest.approx(0.75 ** 2)


def test_splitmix_is_deterministic():
    a = SplitMix64(1234)
    b = SplitMix64(1234)
    xs = [a.uniform() for _ in range(16)]
    ys = [b.uniform() for _ in range(16)]
    assert xs == ys
    assert all(0.0 <= x < 1.0 for x in xs)
    assert len(set(xs)) == 16


def test_random_halfplane_respects_constraint():
    spec = RandomHalfPlane(u=1.0 + 0.0j, cos_alpha0=0.5, seed=99)
    vals = spec.generate(500)
    assert np.all(np.abs(vals) < 1.0)
    assert np.all(vals.real >= 0.5 - 1e-15)
    again = spec.generate(500)
    assert np.array_equal(vals, again)


def test_random_halfplane_rotated_direction():
    spec = RandomHalfPlane(u=-1j, cos_alpha0=0.25, seed=7)
    vals = spec.generate(300)
    # Re(conj(u) a) = Re(i conj(a))... direction check via the defining inequality
    assert np.all((np.conj(complex(0.0, -1.0)) * vals).real >= 0.25 - 1e-15)


def test_random_arc_stays_on_radius():
    spec = RandomArc(a=0.25, half_width=math.pi / 2.0, seed=5)
    vals = spec.generate(200)
    assert np.allclose(np.abs(vals), 0.25)
    assert np.all(np.abs(np.angle(vals)) <= math.pi / 2.0 + 1e-12)


def test_random_set_draws_from_given_values():
    opts = (0.5, -0.25j)
    vals = RandomSet(values=opts, seed=11).generate(400)
    assert set(np.round(vals, 12)) <= {complex(round(o.real if isinstance(o, complex) else o, 12), round(o.imag if isinstance(o, complex) else 0.0, 12)) for o in map(complex, opts)}
    # both values should actually appear
    assert len(set(vals)) == 2


def test_parity_interleaves_independent_families():
    spec = Parity(odd=Constant(0.1), even=Constant(0.8))
    vals = spec.generate(6)
    assert np.allclose(vals[0::2], 0.1)
    assert np.allclose(vals[1::2], 0.8)


def test_prime_rule_indices():
    spec = PrimeRule(a_prime=0.5, a_other=-0.25)
    vals = spec.generate(10)
    primes = {2, 3, 5, 7}
    for idx, v in enumerate(vals, start=1):
        assert v == (0.5 if idx in primes else -0.25)


def test_rule_family_evaluates_callable():
    spec = Rule(fn=lambda k: k / (k + 1.0), name="rule:ramp")
    assert np.allclose(spec.generate(3), [0.5, 2.0 / 3.0, 0.75])


def test_rotated_family_scales_phases():
    lam = cmath.exp(0.4j)
    base = Constant(0.5)
    vals = Rotated(lam=lam, inner=base).generate(4)
    expected = [0.5 * lam ** (-k) for k in range(1, 5)]
    assert np.allclose(vals, expected)


def test_rotate_prefix_matches_rotated_family():
    lam = cmath.exp(0.4j)
    direct = expand(Rotated(lam=lam, inner=Constant(0.5)), 6)
    via_rotate = rotate(expand(Constant(0.5), 6), lam)
    assert np.allclose(direct.values, via_rotate.values)
    assert np.allclose(direct.rhos, via_rotate.rhos)


def test_k_metric_matches_block_difference():
    # the metric between coefficients equals the operator norm of the
    # difference of their 2x2 unitary dilations
    from cmvkit.cmv import theta_block

    rng = np.random.default_rng(3)
    for _ in range(25):
        x1 = complex(*rng.uniform(-0.7, 0.7, 2))
        x2 = complex(*rng.uniform(-0.7, 0.7, 2))
        gap = np.linalg.norm(theta_block(x1) - theta_block(x2), ord=2)
        assert k_metric(x1, x2) == pytest.approx(gap, abs=1e-12)


def test_parse_complex_forms():
    assert parse_complex("0.5") == 0.5
    assert parse_complex("-1") == -1.0
    assert parse_complex("0+1i") == 1j
    assert parse_complex("-0.3-0.2i") == pytest.approx(-0.3 - 0.2j)


def test_format_complex_round_trips():
    for z in (0.5 + 0.0j, -1.0 + 0.0j, 0.25 - 0.75j, cmath.exp(1j * math.pi / 3.0)):
        assert parse_complex(format_complex(z)) == pytest.approx(z, abs=0.0)


def test_parse_schur_spec_grammar():
    assert isinstance(parse_schur_spec("constant:0.5"), Constant)
    tp = parse_schur_spec("two-periodic:0.25,0.75")
    assert isinstance(tp, TwoPeriodic)
    assert (tp.a_odd, tp.a_even) == (0.25, 0.75)
    ex = parse_schur_spec("explicit:0.1|0.2|0.3")
    assert isinstance(ex, Explicit)
    assert np.allclose(ex.generate(3), [0.1, 0.2, 0.3])
    pr = parse_schur_spec("parity:constant:0.1;constant:0.8")
    assert isinstance(pr, Parity)
    rh = parse_schur_spec("random-halfplane:1:0.5:42")
    assert isinstance(rh, RandomHalfPlane)
    assert rh.seed == 42
    with pytest.raises(DomainError):
        parse_schur_spec("unknown:1")
    with pytest.raises(DomainError):
        parse_schur_spec("constant:1.5")


def test_labels_round_trip_through_parser():
    specs = [
        "constant:0.5",
        "two-periodic:0.25,0.75",
        "random-halfplane:1:0.5:1007",
        "random-arc:0.25:1.5:1009",
    ]
    for text in specs:
        spec = parse_schur_spec(text)
        reparsed = parse_schur_spec(spec.label())
        assert np.array_equal(spec.generate(50), reparsed.generate(50))
