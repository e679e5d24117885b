"""Approximation of the moment-generating function of a circle measure.

For a measure ``mu`` on the unit circle, the function

    F(z) = integral of (w + z)/(w - z) d(mu)(w)

is analytic off the support with F(0) = 1 and positive real part in the open
unit disk.  Three computable routes approximate it from a coefficient prefix:

* ``cf-recurrence``: the forward three-term recurrence of a continued
  fraction whose partial numerators/denominators interleave the monic
  first- and second-kind polynomials, optionally closed with a tail weight;
* ``polynomial-quotient``: the quotient -psi^u / phi^u of boundary-parameter
  combinations of the monic polynomials;
* ``resolvent``: 1 - 2z * ((zI - C)^{-1} e_1)_1 for the five-diagonal
  truncation C.

All three produce the same even-order approximant; the quadrature rule below
is its partial-fraction form (nodes = truncation spectrum, positive weights
summing to 1).  Closed-form reference values ship for the normalized
arc-length measure and for the constant-coefficient family.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .circle import FiniteSpectrum
from .cmv import build_truncation, solve_shifted
from .errors import (
    BranchPointError,
    DomainError,
    PoleError,
    SingularShiftError,
    ValidationError,
)
from .opuc import PhaseU, USequenceSpec, WRecurrence, gen_u_sequence
from .schur import Constant, ParamPrefix, Parity, Rule, SchurSpec, TwoPeriodic, expand

__all__ = [
    "ApproximantValue",
    "QuadratureRule",
    "cf_approximant",
    "modified_approximant",
    "resolvent_value",
    "approximant_routes",
    "szego_rule",
    "oracle_F",
    "oracle_moments",
    "CfScenario",
    "CONVERGENCE_SCENARIOS",
    "scenario_rows",
]

# Joint rescale threshold for forward recurrences; quotients are invariant
# under common rescaling, so only overflow protection is needed.
_RESCALE_AT = 1e150
_POLE_RTOL = 1e-15
_UNIT_ATOL = 1e-9


@dataclass(frozen=True)
class ApproximantValue:
    """One approximant evaluation; ``route`` names the computation path."""

    order: int
    at: complex
    value: complex
    route: str


def _unit(u: complex, what: str = "u") -> complex:
    u = complex(u)
    m = abs(u)
    if abs(m - 1.0) > _UNIT_ATOL:
        raise DomainError(f"{what} must have unit modulus, got |{what}| = {m!r}")
    return u / m


def _coeff_array(source, need: int, what: str) -> np.ndarray:
    """Coefficients as a complex array; moduli up to 1 are allowed here."""
    if isinstance(source, ParamPrefix):
        vals = source.values
    else:
        vals = np.asarray(list(source), dtype=np.complex128)
        mods = np.abs(vals)
        if vals.size and float(np.max(mods)) > 1.0 + 1e-12:
            raise DomainError("coefficients must have modulus <= 1")
    if len(vals) < need:
        raise DomainError(f"{what} needs {need} coefficients, got {len(vals)}")
    return vals


def cf_approximant(prefix, m: int, w_mod, z) -> ApproximantValue:
    """The m-th (optionally tail-weighted) approximant of the continued fraction.

    Runs the forward recurrence ``X_j = beta_j X_{j-1} + alpha_j X_{j-2}`` with

        beta_0 = 1; alpha_1 = -2z, beta_1 = z;
        alpha_{2k} = 1,          beta_{2k} = conj(a_k);
        alpha_{2k+1} = rho_k^2 z, beta_{2k+1} = a_k z;

    and returns ``(A_m + w A_{m-1}) / (B_m + w B_{m-1})`` (plain ``A_m/B_m``
    when ``w_mod`` is None).  Coefficients of modulus exactly 1 are accepted,
    so a boundary parameter may be appended as a final coefficient.
    """
    if m < 0:
        raise DomainError("approximant index must be nonnegative")
    z = complex(z)
    vals = _coeff_array(prefix, m // 2, "an order-m fraction")
    a_prev, b_prev = 1.0 + 0.0j, 0.0 + 0.0j
    a_curr, b_curr = 1.0 + 0.0j, 1.0 + 0.0j
    for j in range(1, m + 1):
        if j == 1:
            alpha, beta = -2.0 * z, z
        elif j % 2 == 0:
            a = complex(vals[j // 2 - 1])
            alpha, beta = 1.0 + 0.0j, a.conjugate()
        else:
            a = complex(vals[(j - 1) // 2 - 1])
            alpha, beta = (1.0 - abs(a) ** 2) * z, a * z
        a_curr, a_prev = beta * a_curr + alpha * a_prev, a_curr
        b_curr, b_prev = beta * b_curr + alpha * b_prev, b_curr
        s = max(abs(a_curr), abs(a_prev), abs(b_curr), abs(b_prev))
        if s > _RESCALE_AT or 0.0 < s < 1.0 / _RESCALE_AT:
            inv = 1.0 / s
            a_curr *= inv
            a_prev *= inv
            b_curr *= inv
            b_prev *= inv
    if w_mod is None:
        num, den = a_curr, b_curr
        den_size = abs(b_curr)
    else:
        w = complex(w_mod)
        num = a_curr + w * a_prev
        den = b_curr + w * b_prev
        den_size = abs(b_curr) + abs(w) * abs(b_prev)
    if den == 0.0 or abs(den) <= _POLE_RTOL * den_size:
        raise PoleError(f"fraction denominator vanishes at z = {z!r}", at=z)
    return ApproximantValue(order=m, at=z, value=num / den, route="cf-recurrence")


def modified_approximant(prefix, u, n: int, z) -> ApproximantValue:
    """The even-order approximant as a quotient of boundary combinations.

    Evaluates the monic first- and second-kind pairs through order n-1 by the
    joint forward recurrence and returns

        -(z psi_{n-1} - u psi*_{n-1}) / (z phi_{n-1} + u phi*_{n-1}).

    The denominator is the characteristic polynomial of the order-n
    truncation, so evaluation at one of its zeros raises a pole error.
    """
    if n < 1:
        raise DomainError("order must be >= 1")
    u = _unit(u)
    z = complex(z)
    vals = _coeff_array(prefix, n - 1, "an order-n approximant")
    phi = phs = psi = pss = 1.0 + 0.0j
    for k in range(n - 1):
        a = complex(vals[k])
        ac = a.conjugate()
        zphi = z * phi
        zpsi = z * psi
        phi, phs = zphi + a * phs, phs + ac * zphi
        psi, pss = zpsi - a * pss, pss - ac * zpsi
        s = max(abs(phi), abs(phs), abs(psi), abs(pss))
        if s > _RESCALE_AT:
            inv = 1.0 / s
            phi *= inv
            phs *= inv
            psi *= inv
            pss *= inv
    den = z * phi + u * phs
    num = z * psi - u * pss
    den_size = abs(z * phi) + abs(phs)
    if den == 0.0 or abs(den) <= _POLE_RTOL * den_size:
        raise PoleError(f"approximant pole at z = {z!r}", at=z)
    return ApproximantValue(order=2 * n, at=z, value=-num / den, route="polynomial-quotient")


def _as_prefix(source, need: int) -> ParamPrefix:
    if isinstance(source, ParamPrefix):
        return source
    if isinstance(source, SchurSpec):
        return expand(source, need)
    vals = np.asarray(list(source), dtype=np.complex128)
    mods = np.abs(vals)
    rhos = np.sqrt(np.maximum(0.0, 1.0 - mods * mods))
    return ParamPrefix(values=vals, rhos=rhos)


def resolvent_value(prefix, u, n: int, z) -> ApproximantValue:
    """The same even-order approximant through the truncation resolvent.

    Builds the order-n five-diagonal truncation C and returns
    ``1 - 2z * x_1`` where ``(zI - C) x = e_1``; ``z`` must keep chordal
    distance above 1e-10 from the truncation spectrum.
    """
    if n < 1:
        raise DomainError("order must be >= 1")
    u = _unit(u)
    z = complex(z)
    C = build_truncation(_as_prefix(prefix, n - 1), u, n)
    e1 = np.zeros(n, dtype=np.complex128)
    e1[0] = 1.0
    try:
        x = solve_shifted(C, z, e1)
    except SingularShiftError as exc:
        raise PoleError(f"shift z = {z!r} is at or near an eigenvalue", at=z) from exc
    return ApproximantValue(order=2 * n, at=z, value=1.0 - 2.0 * z * complex(x[0]), route="resolvent")


def approximant_routes(prefix, u, n: int, z) -> tuple:
    """Evaluate the order-2n approximant along all three routes.

    The fraction route appends ``u`` as a final modulus-1 coefficient and
    takes the plain approximant of index 2n; the three values agree to
    roundoff wherever all are defined.
    """
    u = _unit(u)
    vals = _coeff_array(prefix, n - 1, "an order-n approximant")
    appended = list(np.asarray(vals[: n - 1], dtype=np.complex128)) + [u]
    return (
        cf_approximant(appended, 2 * n, None, z),
        modified_approximant(prefix, u, n, z),
        resolvent_value(prefix, u, n, z),
    )


# --------------------------------------------------------------------------
# Quadrature
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights of the discrete measure attached to one truncation.

    Weights are strictly positive and sum to 1 (validated to 1e-12); the rule
    integrates the monomials ``z^k`` exactly against the underlying measure
    for ``|k| <= order - 1``.
    """

    order: int
    nodes: FiniteSpectrum
    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        if len(w) != self.order or self.nodes.order != self.order:
            raise ValidationError("node and weight counts must equal the rule order")
        if np.any(w <= 0.0):
            raise ValidationError("quadrature weights must be strictly positive")
        total = float(np.sum(w))
        if abs(total - 1.0) > 1e-12:
            raise ValidationError(f"weights sum to {total!r}, expected 1 within 1e-12")
        object.__setattr__(self, "weights", w)

    def moment(self, k: int) -> complex:
        """``sum_j w_j z_j^k`` for any integer ``k``."""
        zs = self.nodes.as_array()
        return complex(np.sum(self.weights * zs ** k))

    def integrate(self, fn) -> complex:
        return complex(sum(w * fn(complex(z)) for w, z in zip(self.weights, self.nodes.as_array())))

    def to_csv_rows(self):
        """Rows of (re, im, angle, weight), one per node."""
        rows = [["re", "im", "angle", "weight"]]
        for z, w in zip(self.nodes, self.weights):
            rows.append([z.value.real, z.value.imag, z.angle, float(w)])
        return rows

    def to_json_dict(self) -> dict:
        return {
            "order": self.order,
            "nodes": [[p.value.real, p.value.imag] for p in self.nodes],
            "weights": [float(w) for w in self.weights],
        }


def szego_rule(source, u, n: int, refine: bool = True) -> QuadratureRule:
    """Quadrature rule with the order-n truncation spectrum as nodes.

    The weight at node ``z_j`` is ``1 / sum_{k=0}^{n-1} |phi_k(z_j)|^2``,
    accumulated by running the orthonormal recurrence at the nodes.  The
    running pair is jointly rescaled by powers of two where it grows beyond
    2^200; the partial sum is rescaled along with it, so each weight is exact
    up to roundoff regardless of how large the terms get.
    """
    from .eig import sigma_n

    if n < 1:
        raise DomainError("order must be >= 1")
    prefix = _as_prefix(source, n if isinstance(source, SchurSpec) else n - 1)
    result = sigma_n(prefix, u, n, refine=refine)
    zs = result.spectrum.as_array()
    phi = np.ones_like(zs)
    phs = np.ones_like(zs)
    total = np.ones(len(zs), dtype=np.float64)
    scale = np.zeros(len(zs), dtype=np.int64)
    for k in range(n - 1):
        a = complex(prefix.values[k])
        r = float(prefix.rhos[k])
        zphi = zs * phi
        phi, phs = (zphi + a * phs) / r, (phs + a.conjugate() * zphi) / r
        mags = np.maximum(np.abs(phi), np.abs(phs))
        big = mags > 2.0 ** 200
        if np.any(big):
            _, e = np.frexp(mags)
            e = np.where(big, e, 0).astype(np.int64)
            f = np.ldexp(1.0, -e)
            phi = phi * f
            phs = phs * f
            total = total * f * f
            scale += e
        total += np.abs(phi) ** 2
    weights = np.array(
        [math.ldexp(1.0 / total[j], -2 * int(scale[j])) for j in range(len(zs))]
    )
    return QuadratureRule(order=n, nodes=result.spectrum, weights=weights)


# --------------------------------------------------------------------------
# Closed-form references
# --------------------------------------------------------------------------


def _parse_measure(measure):
    """Accept 'lebesgue', 'geronimus:A', or ('geronimus', a)."""
    if isinstance(measure, str):
        text = measure.strip()
        if text == "lebesgue":
            return "lebesgue", 0.0 + 0.0j
        head, sep, rest = text.partition(":")
        if head == "geronimus" and sep:
            from .schur import parse_complex

            return "geronimus", parse_complex(rest)
        raise DomainError(f"unknown measure {measure!r}")
    if isinstance(measure, (tuple, list)) and len(measure) == 2 and measure[0] == "geronimus":
        return "geronimus", complex(measure[1])
    raise DomainError(f"unknown measure {measure!r}")


def _geronimus_roots(a: complex, z: complex) -> tuple[complex, complex]:
    # a z f^2 - (1 - z) f - conj(a) = 0
    disc = cmath.sqrt((1.0 - z) ** 2 + 4.0 * (abs(a) ** 2) * z)
    den = 2.0 * a * z
    return ((1.0 - z) + disc) / den, ((1.0 - z) - disc) / den


def _geronimus_inside(a: complex, z: complex) -> complex:
    # The bounded branch: the two roots have modulus product 1/|z| > 1, and
    # exactly one stays within the closed unit disk.
    if z == 0.0:
        return -a.conjugate()
    f1, f2 = _geronimus_roots(a, z)
    return f1 if abs(f1) <= abs(f2) else f2


def _geronimus_on_circle(a: complex, w: complex) -> complex:
    """Continue the bounded branch radially from 0.9w out to the circle.

    Step sizes shrink geometrically with the remaining distance so root
    tracking stays unambiguous right up to the 1e-6 branch-point guard.
    """
    theta0 = 2.0 * math.asin(min(1.0, abs(a)))
    edges = (cmath.exp(1j * theta0), cmath.exp(-1j * theta0))
    d_edge = min(abs(w - edges[0]), abs(w - edges[1]))
    if d_edge < 1e-6:
        raise BranchPointError(
            f"z = {w!r} is within 1e-6 of a branch point (support-arc endpoint)"
        )
    if abs(cmath.phase(w)) >= theta0:
        raise DomainError(f"z = {w!r} lies on the support arc")
    r = 0.9
    f = _geronimus_inside(a, r * w)
    while 1.0 - r > 0.25 * d_edge:
        r += 0.25 * (1.0 - r)
        f1, f2 = _geronimus_roots(a, r * w)
        f = f1 if abs(f1 - f) <= abs(f2 - f) else f2
    f1, f2 = _geronimus_roots(a, w)
    return f1 if abs(f1 - f) <= abs(f2 - f) else f2


def _geronimus_value(a: complex, z: complex) -> complex:
    if abs(a) >= 1.0:
        raise DomainError("constant-coefficient measures need |a| < 1")
    if a == 0.0:
        return _lebesgue_value(z)
    m = abs(z)
    if m > 1.0 + _UNIT_ATOL:
        return -complex(_geronimus_value(a, 1.0 / z.conjugate())).conjugate()
    if m >= 1.0 - _UNIT_ATOL:
        f = _geronimus_on_circle(a, z / m)
    else:
        f = _geronimus_inside(a, z)
    zf = z * f
    if abs(1.0 - zf) <= 1e-12 * (1.0 + abs(zf)):
        raise PoleError(f"mass point of the measure at z = {z!r}", at=z)
    return (1.0 + zf) / (1.0 - zf)


def _lebesgue_value(z: complex) -> complex:
    m = abs(complex(z))
    if m < 1.0 - _UNIT_ATOL:
        return 1.0 + 0.0j
    if m > 1.0 + _UNIT_ATOL:
        return -1.0 + 0.0j
    raise DomainError("the normalized arc-length measure is supported on the whole circle")


def oracle_F(measure, z) -> complex:
    """Closed-form F for the reference measures.

    ``measure`` is ``"lebesgue"`` (normalized arc length: F = 1 inside, -1
    outside) or ``("geronimus", a)`` / ``"geronimus:A"`` (constant coefficient
    sequence ``a_n = a``): F = (1 + zf)/(1 - zf) with f the bounded root of
    ``a z f^2 - (1 - z) f - conj(a) = 0``.  On-circle geronimus values are
    taken in the open gap by radial continuation; points on the support raise
    a domain error and near-branch-point evaluations a branch-point error.
    """
    kind, a = _parse_measure(measure)
    z = complex(z)
    if kind == "lebesgue":
        return _lebesgue_value(z)
    return _geronimus_value(a, z)


def oracle_moments(measure, count: int, radius: float = 0.9, samples: int = 1024) -> np.ndarray:
    """Taylor-derived moments ``m_0 .. m_count`` of a reference measure.

    F(z) = 1 + 2 * sum_{k>=1} m_k z^k with ``m_k`` the integral of z^{-k};
    coefficients are recovered from equispaced samples of F on the circle of
    the given radius (discrete Fourier transform, aliasing below 1e-40 at the
    defaults).  ``moment(k)`` of an exact rule reproduces ``conj(m_k)`` for
    ``|k| < order``.
    """
    if count < 0:
        raise DomainError("count must be nonnegative")
    if not 0.0 < radius < 1.0:
        raise DomainError("radius must lie in (0, 1)")
    if samples < 4 * max(count, 1):
        raise DomainError("need at least 4*count samples")
    zs = radius * np.exp(2j * np.pi * np.arange(samples) / samples)
    fv = np.array([oracle_F(measure, z) for z in zs], dtype=np.complex128)
    coeff = np.fft.fft(fv) / samples
    out = np.empty(count + 1, dtype=np.complex128)
    out[0] = 1.0
    for k in range(1, count + 1):
        out[k] = coeff[k] / (2.0 * radius ** k)
    return out


# --------------------------------------------------------------------------
# Named convergence scenarios
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class CfScenario:
    """A runnable approximant-convergence experiment.

    ``region`` records where the sequence of order-2n approximants is
    guaranteed to converge to F; the grid samples that region.  ``oracle`` is
    a measure key for closed-form comparison, or None (consistency between
    successive orders is then the only diagnostic).
    """

    name: str
    description: str
    schur: SchurSpec
    u: USequenceSpec
    grid: tuple
    orders: tuple
    oracle: object
    region: str


_S38 = math.sin(3.0 * math.pi / 8.0)


CONVERGENCE_SCENARIOS = {
    "modulus-to-one": CfScenario(
        name="modulus-to-one",
        description="|a_n| increasing to 1 with the phase boundary rule",
        schur=Rule(fn=lambda k: k / (k + 1.0), name="rule:ramp-to-one"),
        u=PhaseU(),
        grid=(
            0.3 + 0.0j,
            -0.25 + 0.4j,
            0.55j,
            cmath.exp(1j * math.pi / 3.0),
            cmath.exp(-0.9j),
            1.9 + 0.0j,
            -0.8 + 1.7j,
        ),
        orders=(10, 20, 40, 80, 160),
        oracle=None,
        region="everywhere off the support; its derived set is the single point -1",
    ),
    "alternating-phase": CfScenario(
        name="alternating-phase",
        description="two-periodic coefficients with the phase boundary rule",
        schur=TwoPeriodic(_S38 * cmath.exp(-1j * math.pi / 3.0), _S38 * cmath.exp(1j * math.pi / 3.0)),
        u=PhaseU(),
        grid=(
            0.4 + 0.0j,
            -0.3 + 0.3j,
            cmath.exp(0.3j),
            cmath.exp(-0.3j),
            cmath.exp(0.6j),
            cmath.exp(1j * (math.pi - 0.9)),
            1.6 * cmath.exp(0.2j),
        ),
        orders=(10, 25, 50, 100, 200),
        oracle=None,
        region=(
            "off the support and off the two closed arcs complementary to gaps of "
            "half-widths 0.8804 around 1 and 1.8251 around -1"
        ),
    ),
    "band-split": CfScenario(
        name="band-split",
        description="odd/even coefficient limits separated by a band, fixed-zero rule",
        schur=Parity(Constant(0.1 + 0.0j), Constant(0.8 + 0.0j)),
        u=WRecurrence(-1.0 + 0.0j),
        grid=(
            0.5 + 0.0j,
            0.3 - 0.6j,
            2.2 + 0.0j,
            cmath.exp(1j * (math.pi - 0.4)),
            cmath.exp(1j * (math.pi + 0.55)),
        ),
        orders=(10, 25, 50, 100, 200),
        oracle=None,
        region=(
            "off the circle, plus the gap of half-width 0.7227 around -1 minus the "
            "pinned zero at -1 itself"
        ),
    ),
    "ratio-limit": CfScenario(
        name="ratio-limit",
        description="constant coefficients (ratio limit 1), fixed-zero rule",
        schur=Constant(0.5 + 0.0j),
        u=WRecurrence(1.0 + 0.0j),
        grid=(
            0.3 + 0.0j,
            -0.45 + 0.3j,
            0.7j,
            cmath.exp(1j * math.pi / 6.0),
            cmath.exp(-1j * math.pi / 5.0),
            2.4 + 0.0j,
            -2.0j,
        ),
        orders=(10, 25, 50, 100, 150, 200),
        oracle=("geronimus", 0.5),
        region="everywhere off the support arc (gap half-width pi/3 around 1) and off the pinned zero at 1",
    ),
}


def scenario_rows(scenario: CfScenario) -> list:
    """Evaluate a scenario: rows (n, re z, im z, re K, im K, |K - oracle| or '')."""
    top = max(scenario.orders)
    prefix = expand(scenario.schur, top)
    us = gen_u_sequence(scenario.u, prefix, top)
    rows = []
    for n in scenario.orders:
        u = complex(us[n - 1])
        for z in scenario.grid:
            val = modified_approximant(prefix, u, n, z).value
            if scenario.oracle is not None:
                err = abs(val - oracle_F(scenario.oracle, z))
            else:
                err = ""
            rows.append([n, complex(z).real, complex(z).imag, val.real, val.imag, err])
    return rows
