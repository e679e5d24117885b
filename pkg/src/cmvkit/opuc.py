"""Orthogonal polynomials on the unit circle and their paired evaluations.

For a coefficient prefix ``a_1 .. a_N`` (moduli < 1, ``rho_n = sqrt(1-|a_n|^2)``)
the orthonormal polynomials ``phi_n`` and their reversed mates
``phi_n^*(z) = z^n conj(phi_n(1/conj(z)))`` satisfy the joint forward recurrence

    rho_n phi_n(z)   = z phi_{n-1}(z) + a_n phi_{n-1}^*(z)
    rho_n phi_n^*(z) = phi_{n-1}^*(z) + conj(a_n) z phi_{n-1}(z)

with ``phi_0 = phi_0^* = 1``.  The second-kind family ``psi_n`` runs the same
recurrence with ``a_n`` replaced by ``-a_n``; the monic variants drop the
``rho_n`` division.  Everything here is evaluated by running this recurrence
at the requested points (never through coefficient expansion); a joint
power-of-two rescaling keeps evaluations finite even where the polynomials
grow exponentially, with the factored-out exponent reported alongside.

The boundary-parameter combinations

    p_n^u(z) = z phi_{n-1}(z) + u phi_{n-1}^*(z)      (|u| = 1)
    q_n^u(z) = phi_n^*(z) - conj(u) phi_n(z)

have all their zeros simple and on the unit circle; they are the
characteristic polynomials of the unitary truncations built in
:mod:`cmvkit.cmv`.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateCombinationError, DomainError
from .schur import ParamPrefix

__all__ = [
    "PolyEval",
    "eval_phi_pair",
    "eval_second_kind",
    "eval_para",
    "uv_transform",
    "USequenceSpec",
    "ConstU",
    "PhaseU",
    "WRecurrence",
    "MixedU",
    "parse_u_spec",
    "gen_u_sequence",
    "u_seq_mixed",
    "phi_coefficients",
    "para_coefficients",
]

_BIG = 2.0 ** 400
_TINY = 2.0 ** -400
_UNIT_ATOL = 1e-9

# Largest order accepted by the coefficient-expansion helpers; beyond this the
# expanded coefficients are not trustworthy and recurrence evaluation must be
# used instead.
MAX_COEFF_ORDER = 16


def _check_unit(u: complex, what: str = "u") -> complex:
    u = complex(u)
    m = abs(u)
    if abs(m - 1.0) > _UNIT_ATOL:
        raise DomainError(f"{what} must have unit modulus, got |{what}| = {m!r}")
    return u / m


def _rescale(arrays: list[np.ndarray], scale_log2: np.ndarray) -> None:
    """Divide all arrays elementwise by a power of two when any grows too large.

    The same factor is applied to every array at a given point, so ratios of
    tracked quantities are unaffected.
    """
    m = np.abs(arrays[0])
    for a in arrays[1:]:
        np.maximum(m, np.abs(a), out=m)
    need = (m > _BIG) | ((m > 0.0) & (m < _TINY))
    if not np.any(need):
        return
    _, e = np.frexp(m)
    e = np.where(need, e, 0).astype(np.int64)
    f = np.ldexp(1.0, -e)
    for a in arrays:
        a *= f
    scale_log2 += e


def _forward(
    values: np.ndarray,
    rhos: np.ndarray,
    n: int,
    z,
    *,
    sign: float = 1.0,
    monic: bool = False,
    deriv: bool = False,
):
    """Run the joint recurrence to order ``n`` at (vector of) points ``z``.

    Returns ``(phi, phi_star, dphi, dphi_star, scale_log2)``; the true values
    are the returned mantissas times ``2**scale_log2``.  Derivative slots are
    None unless requested.
    """
    zf = np.atleast_1d(np.asarray(z, dtype=np.complex128)).ravel()
    phi = np.ones_like(zf)
    phs = np.ones_like(zf)
    dph = np.zeros_like(zf) if deriv else None
    dps = np.zeros_like(zf) if deriv else None
    scale = np.zeros(zf.shape, dtype=np.int64)
    # Running envelope max_k (|z phi_k| + |phi_k^*|), kept in the current
    # mantissa frame.  Forward-recurrence rounding errors are bounded relative
    # to this envelope, not to the (possibly much smaller) final magnitude.
    env = np.abs(zf) + 1.0
    tracked = [phi, phs] + ([dph, dps] if deriv else [])
    for k in range(n):
        a = sign * values[k]
        ac = np.conj(a)
        r = 1.0 if monic else rhos[k]
        zphi = zf * phi
        if deriv:
            t = phi + zf * dph
            dph, dps = (t + a * dps) / r, (dps + ac * t) / r
        phi, phs = (zphi + a * phs) / r, (phs + ac * zphi) / r
        tracked = [phi, phs] + ([dph, dps] if deriv else [])
        before = scale.copy()
        _rescale(tracked, scale)
        shift = scale - before
        if np.any(shift):
            env *= np.exp2(-shift.astype(np.float64))
        np.maximum(env, np.abs(zf * phi) + np.abs(phs), out=env)
    return phi, phs, dph, dps, scale, env


def _recombine(mantissa: complex, scale_log2: int) -> tuple[complex, float]:
    """Fold the power-of-two exponent back in when the result stays finite."""
    if scale_log2 == 0:
        return mantissa, 0.0
    m = abs(mantissa)
    if m == 0.0:
        return mantissa, 0.0
    total = math.log2(m) + scale_log2
    if -980.0 < total < 980.0:
        return mantissa * math.ldexp(1.0, int(scale_log2)), 0.0
    return mantissa, float(scale_log2)


@dataclass(frozen=True)
class PolyEval:
    """Joint evaluation ``(phi_n, phi_n^*)`` at a point.

    ``phi``/``phi_star`` are exact values whenever ``scale_log2 == 0`` (the
    overwhelmingly common case); otherwise they are mantissas and the true
    values are ``phi * 2**scale_log2`` etc., kept split to avoid overflow.
    """

    order: int
    at: complex
    phi: complex
    phi_star: complex
    scale_log2: float = 0.0


def _eval_pair(prefix: ParamPrefix, n: int, z: complex, sign: float, monic: bool) -> PolyEval:
    if n < 0:
        raise DomainError("order must be nonnegative")
    if n > len(prefix):
        raise DomainError(f"order {n} exceeds prefix length {len(prefix)}")
    phi, phs, _, _, scale, _ = _forward(prefix.values, prefix.rhos, n, z, sign=sign, monic=monic)
    s = int(scale[0])
    p, s1 = _recombine(complex(phi[0]), s)
    q, s2 = _recombine(complex(phs[0]), s)
    # Keep a common exponent: recombine only when both slots allow it.
    if s1 != s2:
        return PolyEval(n, complex(z), complex(phi[0]), complex(phs[0]), float(s))
    return PolyEval(n, complex(z), p, q, s1)


def eval_phi_pair(prefix: ParamPrefix, n: int, z: complex, *, monic: bool = False) -> PolyEval:
    """Evaluate ``(phi_n, phi_n^*)`` (or the monic pair) at ``z``."""
    return _eval_pair(prefix, n, z, 1.0, monic)


def eval_second_kind(prefix: ParamPrefix, n: int, z: complex, *, monic: bool = False) -> PolyEval:
    """Evaluate the second-kind pair ``(psi_n, psi_n^*)`` at ``z``."""
    return _eval_pair(prefix, n, z, -1.0, monic)


def eval_para(prefix: ParamPrefix, n: int, u: complex, z: complex, which: str = "p") -> complex:
    """Evaluate a boundary-parameter combination at ``z``.

    ``which="p"``: ``z*phi_{n-1}(z) + u*phi_{n-1}^*(z)`` (degree n, zeros on the
    circle); ``which="q"``: ``phi_n^*(z) - conj(u)*phi_n(z)``.  The value is
    recombined to a plain complex number; for extreme orders far from the
    circle this may overflow to inf, in which case use the batch internals.
    """
    u = _check_unit(u)
    if which == "p":
        if n < 1:
            raise DomainError("p-combination needs order >= 1")
        ev = eval_phi_pair(prefix, n - 1, z)
        val = complex(z) * ev.phi + u * ev.phi_star
    elif which == "q":
        if n < 0:
            raise DomainError("order must be nonnegative")
        ev = eval_phi_pair(prefix, n, z)
        val = ev.phi_star - u.conjugate() * ev.phi
    else:
        raise DomainError(f"which must be 'p' or 'q', got {which!r}")
    if ev.scale_log2 != 0.0:
        val = val * math.ldexp(1.0, int(ev.scale_log2)) if abs(ev.scale_log2) < 1020 else val * math.inf
    return val


def para_batch(
    prefix: ParamPrefix, n: int, u: complex, z, *, deriv: bool = False
) -> tuple[np.ndarray, np.ndarray | None, np.ndarray, np.ndarray]:
    """Vectorized ``p_n^u`` with shared rescaling.

    Returns ``(p, dp, scale_log2, magnitude)`` where the true values are
    ``p * 2**scale_log2`` and ``magnitude`` (same exponent) is the running
    envelope ``max_k (|z phi_k| + |phi_k^*|)`` of the recurrence: rounding
    errors in ``p`` are proportional to it, so ``|p|/magnitude`` is the
    smallest residual double precision can certify.
    """
    u = _check_unit(u)
    if n < 1:
        raise DomainError("p-combination needs order >= 1")
    if n - 1 > len(prefix):
        raise DomainError(f"order {n} exceeds prefix length {len(prefix)} + 1")
    zf = np.atleast_1d(np.asarray(z, dtype=np.complex128)).ravel()
    phi, phs, dph, dps, scale, env = _forward(prefix.values, prefix.rhos, n - 1, zf, deriv=deriv)
    p = zf * phi + u * phs
    dp = (phi + zf * dph + u * dps) if deriv else None
    return p, dp, scale, env


def uv_transform(u: complex, a: complex) -> complex:
    """The boundary-parameter involution ``v = -u (1 - a conj(u)) / (1 - conj(a) u)``.

    For ``|u| = 1`` and ``|a| < 1`` the result is again unimodular, and p- and
    q-combinations built from the pair ``(u, v)`` are proportional:
    ``rho_n p_n^u = (u - a_n) q_n^v``.
    """
    u = _check_unit(u)
    a = complex(a)
    if not abs(a) < 1.0:
        raise DomainError(f"|a| = {abs(a)!r} must be < 1")
    v = -u * (1.0 - a * u.conjugate()) / (1.0 - a.conjugate() * u)
    return v / abs(v)


# --------------------------------------------------------------------------
# Boundary-parameter sequences
# --------------------------------------------------------------------------


class USequenceSpec:
    """Base class for boundary-parameter sequence generators."""

    def label(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class ConstU(USequenceSpec):
    u: complex

    def label(self) -> str:
        from .schur import format_complex

        return f"const:{format_complex(self.u)}"


@dataclass(frozen=True)
class PhaseU(USequenceSpec):
    """``u_n = a_n / |a_n|``, with a fixed fallback where ``a_n`` vanishes."""

    fallback: complex = 1.0 + 0.0j

    def label(self) -> str:
        return "phase"


@dataclass(frozen=True)
class WRecurrence(USequenceSpec):
    """``u_{n+1} = w u_n (1 - a_n conj(u_n)) / (1 - conj(a_n) u_n)``.

    With the default start ``u_1 = -w`` every combination ``p_n^{u_n}`` has a
    zero pinned at ``w``; an explicit ``u1`` runs the same recurrence from an
    arbitrary start.
    """

    w: complex
    u1: complex | None = None

    def label(self) -> str:
        from .schur import format_complex

        if self.u1 is None:
            return f"fixed-zero:{format_complex(self.w)}"
        return f"target:{format_complex(self.w)}:{format_complex(self.u1)}"


@dataclass(frozen=True)
class MixedU(USequenceSpec):
    """Parameters from the combination ``c1*phi + i*c2*psi`` evaluated at ``w``.

    ``u_n = -w p_{n-1}(w) / p_{n-1}^*(w)`` with ``p_k = c1 phi_k + i c2 psi_k``
    and ``p_k^* = c1 phi_k^* - i c2 psi_k^*``.  With ``c2 = 0`` this reduces to
    the w-recurrence started at ``u_1 = -w``.
    """

    w: complex
    c1: float
    c2: float

    def label(self) -> str:
        from .schur import format_complex, format_float

        return f"mixed:{format_complex(self.w)}:{format_float(self.c1)}:{format_float(self.c2)}"


def parse_u_spec(text: str) -> USequenceSpec:
    """Parse the boundary-parameter grammar.

    Productions::

        const:U
        phase
        fixed-zero:W
        target:W:U1
        mixed:W:C1:C2
    """
    from .schur import parse_complex

    text = text.strip()
    if text == "phase":
        return PhaseU()
    head, sep, rest = text.partition(":")
    if not sep:
        raise DomainError(f"malformed u-sequence spec {text!r}")
    if head == "const":
        return ConstU(_check_unit(parse_complex(rest)))
    if head == "fixed-zero":
        return WRecurrence(_check_unit(parse_complex(rest), "w"))
    if head == "target":
        parts = rest.split(":")
        if len(parts) != 2:
            raise DomainError(f"target expects 'W:U1', got {rest!r}")
        return WRecurrence(
            _check_unit(parse_complex(parts[0]), "w"),
            _check_unit(parse_complex(parts[1]), "u1"),
        )
    if head == "mixed":
        parts = rest.split(":")
        if len(parts) != 3:
            raise DomainError(f"mixed expects 'W:C1:C2', got {rest!r}")
        return MixedU(
            _check_unit(parse_complex(parts[0]), "w"), float(parts[1]), float(parts[2])
        )
    raise DomainError(f"unknown u-sequence mode {head!r}")


def gen_u_sequence(spec: USequenceSpec, prefix: ParamPrefix, count: int) -> np.ndarray:
    """Generate ``u_1 .. u_count`` (unit moduli, renormalized at every step)."""
    if count < 1:
        raise DomainError("count must be >= 1")
    if isinstance(spec, ConstU):
        u = _check_unit(spec.u)
        return np.full(count, u, dtype=np.complex128)
    if isinstance(spec, PhaseU):
        if len(prefix) < count:
            raise DomainError("phase mode needs a coefficient prefix of the same length")
        fallback = _check_unit(spec.fallback, "fallback")
        vals = prefix.values[:count]
        mods = np.abs(vals)
        out = np.where(mods < 1e-14, fallback, vals / np.where(mods == 0.0, 1.0, mods))
        return out.astype(np.complex128)
    if isinstance(spec, WRecurrence):
        if len(prefix) < count - 1:
            raise DomainError("w-recurrence needs coefficients a_1 .. a_{count-1}")
        w = _check_unit(spec.w, "w")
        u1 = -w if spec.u1 is None else _check_unit(spec.u1, "u1")
        out = np.empty(count, dtype=np.complex128)
        out[0] = u1
        for k in range(1, count):
            a = prefix.values[k - 1]
            u = out[k - 1]
            u = w * u * (1.0 - a * np.conj(u)) / (1.0 - np.conj(a) * u)
            out[k] = u / abs(u)
        return out
    if isinstance(spec, MixedU):
        return u_seq_mixed(prefix, spec.w, spec.c1, spec.c2, count)
    raise DomainError(f"unsupported u-sequence spec {spec!r}")


def u_seq_mixed(prefix: ParamPrefix, w: complex, c1: float, c2: float, count: int) -> np.ndarray:
    """Parameters ``u_n = -w p_{n-1}(w)/p_{n-1}^*(w)`` for ``p = c1 phi + i c2 psi``.

    Runs the first- and second-kind recurrences jointly at the single point
    ``w``; raises ``DegenerateCombinationError`` if the reversed combination
    ``p_k^*`` vanishes (below 1e-14 of its natural size) along the way.
    """
    w = _check_unit(w, "w")
    c1 = float(c1)
    c2 = float(c2)
    if c1 == 0.0 and c2 == 0.0:
        raise DomainError("c1 and c2 must not both vanish")
    if count < 1:
        raise DomainError("count must be >= 1")
    if len(prefix) < count - 1:
        raise DomainError("mixed mode needs coefficients a_1 .. a_{count-1}")
    phi = phs = psi = pss = 1.0 + 0.0j
    out = np.empty(count, dtype=np.complex128)
    for k in range(count):
        p = c1 * phi + 1j * c2 * psi
        ps = c1 * phs - 1j * c2 * pss
        scale = abs(c1) * abs(phs) + abs(c2) * abs(pss)
        if abs(ps) < 1e-14 * scale or abs(p) < 1e-14 * (abs(c1) * abs(phi) + abs(c2) * abs(psi)):
            raise DegenerateCombinationError(
                f"combination degenerates at step {k + 1}: |p*| = {abs(ps)!r}"
            )
        u = -w * p / ps
        out[k] = u / abs(u)
        if k + 1 >= count:
            break
        a = complex(prefix.values[k])
        r = prefix.rhos[k]
        wphi = w * phi
        wpsi = w * psi
        phi, phs = (wphi + a * phs) / r, (phs + np.conj(a) * wphi) / r
        psi, pss = (wpsi - a * pss) / r, (pss - np.conj(a) * wpsi) / r
        m = max(abs(phi), abs(phs), abs(psi), abs(pss))
        if m > _BIG:
            # Joint renormalization: u_n depends only on ratios.
            inv = 1.0 / m
            phi *= inv
            phs *= inv
            psi *= inv
            pss *= inv
    return out


# --------------------------------------------------------------------------
# Coefficient expansion (test oracle; small orders only)
# --------------------------------------------------------------------------


def phi_coefficients(
    prefix: ParamPrefix, n: int, *, second_kind: bool = False, monic: bool = False
) -> tuple[np.ndarray, np.ndarray]:
    """Monomial coefficients (ascending) of ``phi_n`` and ``phi_n^*``.

    Restricted to ``n <= 16``: meant as an independent cross-check for tests,
    not as an evaluation path.
    """
    if n < 0 or n > MAX_COEFF_ORDER:
        raise DomainError(f"coefficient expansion limited to 0 <= n <= {MAX_COEFF_ORDER}")
    if n > len(prefix):
        raise DomainError(f"order {n} exceeds prefix length {len(prefix)}")
    sign = -1.0 if second_kind else 1.0
    c = np.zeros(n + 1, dtype=np.complex128)
    cs = np.zeros(n + 1, dtype=np.complex128)
    c[0] = 1.0
    cs[0] = 1.0
    for k in range(n):
        a = sign * prefix.values[k]
        r = 1.0 if monic else prefix.rhos[k]
        shifted = np.zeros(n + 1, dtype=np.complex128)
        shifted[1:] = c[:-1]
        c = (shifted + a * cs) / r
        cs = (cs + np.conj(a) * shifted) / r
    return c, cs


def para_coefficients(prefix: ParamPrefix, n: int, u: complex) -> np.ndarray:
    """Monomial coefficients (ascending) of ``p_n^u``; test oracle, ``n <= 16``."""
    u = _check_unit(u)
    if n < 1:
        raise DomainError("p-combination needs order >= 1")
    c, cs = phi_coefficients(prefix, n - 1)
    out = np.zeros(n + 1, dtype=np.complex128)
    out[1:] += c
    out[: n] += u * cs
    return out
