"""Coefficient sequences in the open unit disk and their generators.

A measure on the unit circle is encoded by its sequence of reflection
coefficients ``a_1, a_2, ...`` with ``|a_n| < 1``; everything downstream
(orthogonal polynomials, five-diagonal truncations, spectra) is driven by a
finite prefix of such a sequence.  This module provides the parametric
families used by the command line and the tests, a platform-reproducible
random stream, and the small amount of geometry attached to the coefficients
(``rho``, the metric ``disk`` distance used for perturbation bounds, rigid
rotations).
"""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, ValidationError

__all__ = [
    "SplitMix64",
    "SchurSpec",
    "Constant",
    "TwoPeriodic",
    "Rotated",
    "Explicit",
    "RandomHalfPlane",
    "RandomArc",
    "RandomSet",
    "Rule",
    "Parity",
    "PrimeRule",
    "ShiftedScaled",
    "ParamPrefix",
    "expand",
    "rotate",
    "rho",
    "k_metric",
    "parse_complex",
    "format_complex",
    "parse_schur_spec",
]

_MASK64 = (1 << 64) - 1

# Margin below 1 enforced when *sampling* moduli, so generated values always
# satisfy the strict |a| < 1 constraint even after later arithmetic.
_SAMPLE_MARGIN = 1e-12


class SplitMix64:
    """SplitMix-style 64-bit generator mapped to uniform doubles in [0, 1).

    The update is the standard gamma increment / xor-shift-multiply mix, done
    in masked Python integers, so streams are identical on every platform.
    """

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = int(seed) & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def uniform(self) -> float:
        """Uniform double in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * 2.0 ** -53


class SchurSpec:
    """Base class for coefficient-sequence generators (1-based index)."""

    def generate(self, count: int) -> np.ndarray:
        """Return coefficients ``a_1 .. a_count`` as a complex array."""
        raise NotImplementedError

    def label(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class Constant(SchurSpec):
    a: complex

    def generate(self, count: int) -> np.ndarray:
        return np.full(count, complex(self.a), dtype=np.complex128)

    def label(self) -> str:
        return f"constant:{format_complex(self.a)}"


@dataclass(frozen=True)
class TwoPeriodic(SchurSpec):
    """Alternating coefficients: ``a_odd`` at odd indices, ``a_even`` at even."""

    a_odd: complex
    a_even: complex

    def generate(self, count: int) -> np.ndarray:
        out = np.empty(count, dtype=np.complex128)
        out[0::2] = complex(self.a_odd)
        out[1::2] = complex(self.a_even)
        return out

    def label(self) -> str:
        return f"two-periodic:{format_complex(self.a_odd)},{format_complex(self.a_even)}"


@dataclass(frozen=True)
class Rotated(SchurSpec):
    """``a_n = conj(lam)^n * inner_n`` for a unit number ``lam``."""

    lam: complex
    inner: SchurSpec

    def __post_init__(self):
        if abs(abs(complex(self.lam)) - 1.0) > 1e-12:
            raise DomainError("rotation factor must have unit modulus")

    def generate(self, count: int) -> np.ndarray:
        theta = cmath.phase(complex(self.lam))
        factors = np.exp(-1j * theta * np.arange(1, count + 1))
        return factors * self.inner.generate(count)

    def label(self) -> str:
        return f"rotated:{format_complex(self.lam)}:{self.inner.label()}"


@dataclass(frozen=True)
class Explicit(SchurSpec):
    """A finite, explicitly listed prefix."""

    values: tuple

    def generate(self, count: int) -> np.ndarray:
        if count > len(self.values):
            raise DomainError(
                f"explicit sequence has {len(self.values)} values, {count} requested"
            )
        return np.asarray(self.values[:count], dtype=np.complex128)

    def label(self) -> str:
        return "explicit:" + "|".join(format_complex(v) for v in self.values)


@dataclass(frozen=True)
class RandomHalfPlane(SchurSpec):
    """Uniform draws from ``{z in D : Re(conj(u) z) >= cos_alpha0}``.

    Draw order (documented for reproducibility): real part then imaginary
    part, each as ``2*U - 1``; the pair is rejected unless it lies strictly
    inside the disk (``|z|^2 <= 1 - 1e-12``) and inside the half-plane.
    """

    u: complex
    cos_alpha0: float
    seed: int

    def __post_init__(self):
        if abs(abs(complex(self.u)) - 1.0) > 1e-12:
            raise DomainError("half-plane direction must have unit modulus")
        if not -1.0 <= float(self.cos_alpha0) < 1.0:
            raise DomainError("cos_alpha0 must lie in [-1, 1)")

    def generate(self, count: int) -> np.ndarray:
        rng = SplitMix64(self.seed)
        u = complex(self.u)
        out = np.empty(count, dtype=np.complex128)
        for k in range(count):
            while True:
                re = 2.0 * rng.uniform() - 1.0
                im = 2.0 * rng.uniform() - 1.0
                z = complex(re, im)
                if re * re + im * im > 1.0 - _SAMPLE_MARGIN:
                    continue
                if (u.conjugate() * z).real >= self.cos_alpha0:
                    out[k] = z
                    break
        return out

    def label(self) -> str:
        return (
            f"random-halfplane:{format_complex(self.u)}:"
            f"{format_float(self.cos_alpha0)}:{self.seed}"
        )


@dataclass(frozen=True)
class RandomArc(SchurSpec):
    """Uniform draws from the arc ``{a * exp(i t) : |t| <= half_width}``.

    One uniform per element: ``t = (2*U - 1) * half_width``.
    """

    a: complex
    half_width: float
    seed: int

    def __post_init__(self):
        if not abs(complex(self.a)) < 1.0:
            raise DomainError("arc center must lie strictly inside the unit disk")
        if not 0.0 <= float(self.half_width) <= math.pi:
            raise DomainError("arc half-width must lie in [0, pi]")

    def generate(self, count: int) -> np.ndarray:
        rng = SplitMix64(self.seed)
        a = complex(self.a)
        out = np.empty(count, dtype=np.complex128)
        for k in range(count):
            t = (2.0 * rng.uniform() - 1.0) * self.half_width
            out[k] = a * cmath.exp(1j * t)
        return out

    def label(self) -> str:
        return (
            f"random-arc:{format_complex(self.a)}:"
            f"{format_float(self.half_width)}:{self.seed}"
        )


@dataclass(frozen=True)
class RandomSet(SchurSpec):
    """Independent uniform picks from a finite set of disk values.

    One uniform per element; index ``min(floor(U * len), len - 1)``.
    """

    values: tuple
    seed: int

    def __post_init__(self):
        if len(self.values) < 2:
            raise DomainError("random-set needs at least two values")
        if any(abs(complex(v)) >= 1.0 for v in self.values):
            raise DomainError("random-set values must lie strictly inside the unit disk")

    def generate(self, count: int) -> np.ndarray:
        rng = SplitMix64(self.seed)
        vals = [complex(v) for v in self.values]
        n = len(vals)
        out = np.empty(count, dtype=np.complex128)
        for k in range(count):
            j = min(int(rng.uniform() * n), n - 1)
            out[k] = vals[j]
        return out

    def label(self) -> str:
        return (
            "random-set:"
            + "|".join(format_complex(v) for v in self.values)
            + f":{self.seed}"
        )


@dataclass(frozen=True)
class Rule(SchurSpec):
    """Programmatic family: ``a_n = fn(n)`` for 1-based ``n``."""

    fn: object
    name: str = "rule"

    def generate(self, count: int) -> np.ndarray:
        return np.array([complex(self.fn(n)) for n in range(1, count + 1)], dtype=np.complex128)

    def label(self) -> str:
        return self.name


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class PrimeRule(SchurSpec):
    """``a_n = a_prime`` when ``n`` is prime, else ``a_other``."""

    a_prime: complex
    a_other: complex

    def generate(self, count: int) -> np.ndarray:
        p, o = complex(self.a_prime), complex(self.a_other)
        return np.array([p if _is_prime(n) else o for n in range(1, count + 1)], dtype=np.complex128)

    def label(self) -> str:
        return f"prime-rule:{format_complex(self.a_prime)}:{format_complex(self.a_other)}"


@dataclass(frozen=True)
class Parity(SchurSpec):
    """Interleave two families: odd indices from ``odd``, even from ``even``.

    Each sub-family consumes its own index stream, so ``a_1, a_3, a_5, ...``
    are ``odd``'s elements 1, 2, 3, ... (likewise for ``even``).
    """

    odd: SchurSpec
    even: SchurSpec

    def generate(self, count: int) -> np.ndarray:
        n_odd = (count + 1) // 2
        n_even = count // 2
        out = np.empty(count, dtype=np.complex128)
        if n_odd:
            out[0::2] = self.odd.generate(n_odd)
        if n_even:
            out[1::2] = self.even.generate(n_even)
        return out

    def label(self) -> str:
        return f"parity:{self.odd.label()};{self.even.label()}"


@dataclass(frozen=True)
class ShiftedScaled(SchurSpec):
    """``a_n = scale * inner_(n + shift)``: the tail of a family, rescaled."""

    inner: SchurSpec
    shift: int
    scale: complex

    def generate(self, count: int) -> np.ndarray:
        full = self.inner.generate(count + self.shift)
        return complex(self.scale) * full[self.shift:]

    def label(self) -> str:
        return f"shifted:{self.shift}:{format_complex(self.scale)}:{self.inner.label()}"


@dataclass(frozen=True)
class ParamPrefix:
    """A validated finite prefix ``a_1 .. a_N`` with cached ``rho_n``.

    ``rhos[n-1] == sqrt(1 - |values[n-1]|^2)`` to machine accuracy; every
    modulus is strictly below 1.
    """

    values: np.ndarray
    rhos: np.ndarray
    spec: SchurSpec | None = field(default=None, compare=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.complex128)
        mods = np.abs(v)
        bad = np.nonzero(mods >= 1.0)[0]
        if bad.size:
            raise ValidationError(
                f"coefficient a_{bad[0] + 1} has modulus {mods[bad[0]]!r} >= 1"
            )
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "rhos", np.asarray(self.rhos, dtype=np.float64))

    def __len__(self) -> int:
        return len(self.values)

    def phi_norm(self, n: int) -> float:
        """``prod(rho_1 .. rho_n)``: the leading-normalization factor at order n."""
        return float(np.prod(self.rhos[:n]))


def expand(spec: SchurSpec, count: int) -> ParamPrefix:
    """Materialize ``a_1 .. a_count`` from a family (count >= 0)."""
    if count < 0:
        raise DomainError("count must be nonnegative")
    values = spec.generate(count)
    mods = np.abs(values)
    rhos = np.sqrt(np.maximum(0.0, 1.0 - mods * mods))
    return ParamPrefix(values=values, rhos=rhos, spec=spec)


def rho(a: complex) -> float:
    """``sqrt(1 - |a|^2)`` for ``|a| <= 1``."""
    m = abs(complex(a))
    if m > 1.0 + 1e-12:
        raise DomainError(f"|a| = {m!r} exceeds 1")
    return math.sqrt(max(0.0, 1.0 - m * m))


def k_metric(x1: complex, x2: complex) -> float:
    """Distance ``sqrt(|x1-x2|^2 + (rho(x1)-rho(x2))^2)`` on the closed disk.

    Equals the spectral norm of the difference of the 2x2 reflection blocks
    built from ``x1`` and ``x2``.
    """
    y1 = rho(x1)
    y2 = rho(x2)
    d = complex(x1) - complex(x2)
    return math.sqrt(abs(d) ** 2 + (y1 - y2) ** 2)


def rotate(prefix: ParamPrefix, lam: complex) -> ParamPrefix:
    """Rigid rotation ``a_n -> conj(lam)^n a_n`` with ``|lam| = 1``.

    The moduli are preserved (to an ulp) and the cached rhos are carried over
    unchanged, bit for bit.
    """
    lam = complex(lam)
    if abs(abs(lam) - 1.0) > 1e-12:
        raise DomainError("rotation factor must have unit modulus")
    theta = cmath.phase(lam)
    n = len(prefix)
    factors = np.exp(-1j * theta * np.arange(1, n + 1))
    spec = Rotated(lam, prefix.spec) if prefix.spec is not None else None
    return ParamPrefix(values=prefix.values * factors, rhos=prefix.rhos.copy(), spec=spec)


# --------------------------------------------------------------------------
# Text grammar
# --------------------------------------------------------------------------

_COMPLEX_RE = re.compile(
    r"""^\s*
        (?P<re>[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
        (?:(?P<im>[+-](?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)i)?
        \s*$""",
    re.VERBOSE,
)


def parse_complex(text: str) -> complex:
    """Parse the ``RE[+IMi]`` literal used throughout the CLI grammar."""
    m = _COMPLEX_RE.match(text)
    if not m:
        raise DomainError(f"malformed complex literal {text!r} (expected RE[+IMi])")
    re_part = float(m.group("re"))
    im_part = float(m.group("im")) if m.group("im") else 0.0
    return complex(re_part, im_part)


def format_float(x: float) -> str:
    return repr(float(x))


def format_complex(z: complex) -> str:
    z = complex(z)
    if z.imag == 0.0:
        return format_float(z.real)
    sign = "+" if z.imag >= 0 else "-"
    return f"{format_float(z.real)}{sign}{format_float(abs(z.imag))}i"


def _load_explicit_file(path: str) -> Explicit:
    values = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split(",")
            if len(parts) != 2:
                raise DomainError(f"expected 're,im' per line in {path!r}, got {line!r}")
            values.append(complex(float(parts[0]), float(parts[1])))
    if not values:
        raise DomainError(f"no coefficients found in {path!r}")
    return Explicit(tuple(values))


def parse_schur_spec(text: str) -> SchurSpec:
    """Parse the coefficient-family grammar.

    Productions::

        constant:RE[+IMi]
        two-periodic:A,B
        rotated:LAMBDA:SPEC
        file:PATH
        random-halfplane:U:COS_A0:SEED
        random-arc:A:XI:SEED
        random-set:V1|V2|...:SEED
        explicit:V1|V2|...
        parity:ODDSPEC;EVENSPEC
        prime-rule:A:B
    """
    text = text.strip()
    head, sep, rest = text.partition(":")
    if not sep:
        raise DomainError(f"malformed coefficient spec {text!r}")
    head = head.strip()
    if head == "constant":
        return Constant(_disk_value(rest))
    if head == "two-periodic":
        parts = rest.split(",")
        if len(parts) != 2:
            raise DomainError(f"two-periodic expects 'A,B', got {rest!r}")
        return TwoPeriodic(_disk_value(parts[0]), _disk_value(parts[1]))
    if head == "rotated":
        lam_text, sep2, inner_text = rest.partition(":")
        if not sep2:
            raise DomainError(f"rotated expects 'LAMBDA:SPEC', got {rest!r}")
        return Rotated(parse_complex(lam_text), parse_schur_spec(inner_text))
    if head == "file":
        return _load_explicit_file(rest)
    if head == "random-halfplane":
        parts = rest.split(":")
        if len(parts) != 3:
            raise DomainError(f"random-halfplane expects 'U:COS_A0:SEED', got {rest!r}")
        return RandomHalfPlane(parse_complex(parts[0]), float(parts[1]), int(parts[2]))
    if head == "random-arc":
        parts = rest.split(":")
        if len(parts) != 3:
            raise DomainError(f"random-arc expects 'A:XI:SEED', got {rest!r}")
        return RandomArc(parse_complex(parts[0]), float(parts[1]), int(parts[2]))
    if head == "random-set":
        parts = rest.rsplit(":", 1)
        if len(parts) != 2:
            raise DomainError(f"random-set expects 'V1|V2|...:SEED', got {rest!r}")
        values = tuple(parse_complex(v) for v in parts[0].split("|"))
        return RandomSet(values, int(parts[1]))
    if head == "explicit":
        return Explicit(tuple(parse_complex(v) for v in rest.split("|")))
    if head == "parity":
        odd_text, sep2, even_text = rest.partition(";")
        if not sep2:
            raise DomainError(f"parity expects 'ODD;EVEN', got {rest!r}")
        return Parity(parse_schur_spec(odd_text), parse_schur_spec(even_text))
    if head == "prime-rule":
        parts = rest.split(":")
        if len(parts) != 2:
            raise DomainError(f"prime-rule expects 'A:B', got {rest!r}")
        return PrimeRule(_disk_value(parts[0]), _disk_value(parts[1]))
    raise DomainError(f"unknown coefficient family {head!r}")


def _disk_value(text: str) -> complex:
    z = parse_complex(text)
    if abs(z) >= 1.0:
        raise DomainError(f"coefficient {text!r} must lie strictly inside the unit disk")
    return z
