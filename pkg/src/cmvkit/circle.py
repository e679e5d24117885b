"""Points, arcs and finite point sets on circles in the complex plane.

Distances are always chordal (plain Euclidean distance in the plane).  Arcs are
described by a center point ``c`` (any nonzero complex number, the arc lives on
the circle of radius ``|c|``), an angular half-width in ``[0, pi]`` and a
closed/open flag.  The two arc shapes used throughout the package are, for a
unit point ``w`` and ``alpha`` in ``[0, pi]``:

* ``gamma`` arcs: centered at ``w`` with half-width ``alpha`` (open or closed);
* ``delta`` arcs: the closed complementary arc, centered at ``-w`` with
  half-width ``pi - alpha``.

These two tile the circle: a point is in the open gamma arc iff it is not in
the delta arc (endpoints excepted).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

__all__ = [
    "ANGLE_TOL",
    "RADIUS_RTOL",
    "UnitPoint",
    "Arc",
    "FiniteSpectrum",
    "make_arc",
    "arc_contains",
    "set_distance",
    "principal_angle",
]

TWO_PI = 2.0 * math.pi

# Absolute tolerance for all angular membership comparisons.
ANGLE_TOL = 1e-12
# Relative tolerance for radius agreement in membership tests.
RADIUS_RTOL = 1e-9
# Modulus slack accepted when constructing a UnitPoint directly.
UNIT_ATOL = 1e-9


def principal_angle(z: complex) -> float:
    """Argument of ``z`` normalized to ``[0, 2*pi)``."""
    a = cmath.phase(z)
    if a < 0.0:
        a += TWO_PI
    if a >= TWO_PI:
        a = 0.0
    return a


def _wrapped_angle_between(z: complex, center: complex) -> float:
    """Signed angle from the direction of ``center`` to ``z``, in ``(-pi, pi]``."""
    return cmath.phase(z * center.conjugate())


@dataclass(frozen=True)
class UnitPoint:
    """A point on the unit circle (modulus within 1e-9 of 1)."""

    value: complex

    def __post_init__(self):
        v = complex(self.value)
        if abs(abs(v) - 1.0) > UNIT_ATOL:
            raise DomainError(f"not a unit point: |{v!r}| = {abs(v)!r}")
        object.__setattr__(self, "value", v)

    @classmethod
    def project(cls, z: complex) -> "UnitPoint":
        """Radially project a nonzero complex number onto the circle."""
        z = complex(z)
        m = abs(z)
        if m == 0.0:
            raise DomainError("cannot project 0 onto the unit circle")
        return cls(z / m)

    @property
    def angle(self) -> float:
        """Principal argument in ``[0, 2*pi)``."""
        return principal_angle(self.value)

    def __complex__(self) -> complex:
        return self.value


@dataclass(frozen=True)
class Arc:
    """A circular arc: points ``center * exp(i*phi)`` with ``|phi| <= half_width``.

    ``center`` is a point ON the arc's circle (so ``radius == abs(center)``),
    marking the arc's midpoint.  ``half_width == pi`` is the full circle,
    ``half_width == 0`` a single point.
    """

    center: complex
    half_width: float
    closed: bool = True

    def __post_init__(self):
        c = complex(self.center)
        h = float(self.half_width)
        if abs(c) == 0.0:
            raise DomainError("arc center must be nonzero")
        if not 0.0 <= h <= math.pi + ANGLE_TOL:
            raise DomainError(f"half_width must lie in [0, pi], got {h!r}")
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "half_width", min(h, math.pi))

    @property
    def radius(self) -> float:
        return abs(self.center)

    @property
    def endpoints(self) -> tuple[complex, complex]:
        """The two extreme points ``center * exp(+/- i*half_width)``."""
        rot = cmath.exp(1j * self.half_width)
        return (self.center * rot, self.center * rot.conjugate())

    def contains(self, z: complex) -> bool:
        return arc_contains(z, self)

    def distance(self, z: complex) -> float:
        """Chordal distance from ``z`` (anywhere in the plane) to the arc's closure."""
        z = complex(z)
        beta = _wrapped_angle_between(z, self.center) if z != 0.0 else 0.0
        if abs(beta) <= self.half_width:
            return abs(abs(z) - self.radius)
        e1, e2 = self.endpoints
        return min(abs(z - e1), abs(z - e2))


def make_arc(kind: str, w: complex, alpha: float) -> Arc:
    """Build one of the standard arcs anchored at a unit point ``w``.

    kind:
        ``"gamma-open"``   open arc of half-width ``alpha`` centered at ``w``;
        ``"gamma-closed"`` its closure;
        ``"delta"``        the closed complement, centered at ``-w`` with
                           half-width ``pi - alpha``.
    """
    w = complex(w)
    if abs(abs(w) - 1.0) > UNIT_ATOL:
        raise DomainError(f"w must be a unit point, got |w| = {abs(w)!r}")
    alpha = float(alpha)
    if not 0.0 <= alpha <= math.pi + ANGLE_TOL:
        raise DomainError(f"alpha must lie in [0, pi], got {alpha!r}")
    alpha = min(alpha, math.pi)
    if kind == "gamma-open":
        return Arc(w, alpha, closed=False)
    if kind == "gamma-closed":
        return Arc(w, alpha, closed=True)
    if kind == "delta":
        return Arc(-w, math.pi - alpha, closed=True)
    raise DomainError(f"unknown arc kind {kind!r}")


def arc_contains(z: complex, arc: Arc) -> bool:
    """Membership of ``z`` in ``arc``; ``|z|`` must match the arc's radius.

    Angular comparisons use the absolute tolerance ``ANGLE_TOL``; points whose
    modulus differs from the arc radius by more than ``RADIUS_RTOL`` relative
    raise ``DomainError``.
    """
    z = complex(z)
    r = arc.radius
    if abs(abs(z) - r) > RADIUS_RTOL * r:
        raise DomainError(f"|z| = {abs(z)!r} does not lie on the arc circle of radius {r!r}")
    beta = abs(_wrapped_angle_between(z, arc.center))
    if arc.closed:
        return beta <= arc.half_width + ANGLE_TOL
    return beta < arc.half_width - ANGLE_TOL


@dataclass(frozen=True)
class FiniteSpectrum:
    """A finite set of unit points, stored sorted by principal argument."""

    points: tuple[UnitPoint, ...]

    def __post_init__(self):
        pts = tuple(self.points)
        if not pts:
            raise DomainError("a finite spectrum must contain at least one point")
        angles = np.array([p.angle for p in pts])
        order = np.argsort(angles, kind="stable")
        object.__setattr__(self, "points", tuple(pts[i] for i in order))

    @classmethod
    def from_points(cls, values, project: bool = True) -> "FiniteSpectrum":
        mk = UnitPoint.project if project else UnitPoint
        return cls(tuple(mk(complex(v)) for v in values))

    @property
    def order(self) -> int:
        return len(self.points)

    def as_array(self) -> np.ndarray:
        return np.array([p.value for p in self.points], dtype=np.complex128)

    def distance(self, z: complex) -> float:
        return set_distance(z, self)

    def __iter__(self):
        return iter(self.points)

    def __len__(self) -> int:
        return len(self.points)


def set_distance(z: complex, target) -> float:
    """Chordal distance from ``z`` to a spectrum, an arc, or a union of arcs.

    ``target`` may be a FiniteSpectrum, an Arc, or an iterable of either.
    Every distance is attained by endpoint/projection case analysis, never by
    sampling.  An empty target raises ``DomainError``.
    """
    z = complex(z)
    if isinstance(target, FiniteSpectrum):
        return float(np.min(np.abs(target.as_array() - z)))
    if isinstance(target, Arc):
        return target.distance(z)
    if isinstance(target, UnitPoint):
        return abs(z - target.value)
    try:
        items = list(target)
    except TypeError:
        raise DomainError(f"unsupported distance target {target!r}") from None
    if not items:
        raise DomainError("cannot take the distance to an empty set")
    return min(set_distance(z, item) for item in items)
