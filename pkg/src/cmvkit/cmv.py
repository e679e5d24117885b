"""Finite unitary five-diagonal truncations and banded linear algebra.

A coefficient sequence ``s_1 .. s_n`` with ``|s_j| <= 1`` defines two
block-diagonal unitaries built from the 2x2 reflection blocks

    Theta(a) = [[-a, rho], [rho, conj(a)]],    rho = sqrt(1 - |a|^2):

``F_odd`` carries ``Theta(s_1), Theta(s_3), ...`` starting at row 1 and
``F_even`` carries a leading 1 followed by ``Theta(s_2), Theta(s_4), ...``;
a trailing block that does not fit is truncated to its ``(-s_n)`` corner.
The product ``C = F_odd @ F_even`` is unitary exactly when the final
coefficient has unit modulus, and its characteristic polynomial is then the
boundary combination ``p_n^u`` built from ``a_1 .. a_{n-1}`` and ``u = s_n``.

Everything is stored in diagonal-band form (offsets -2 .. +2); dense matrices
are materialized only where a dense eigensolver requires them.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import DomainError, SingularShiftError, ValidationError
from .schur import ParamPrefix, SchurSpec, Constant, ShiftedScaled, TwoPeriodic

__all__ = [
    "theta_block",
    "BandedUnitary",
    "build_cmv",
    "build_truncation",
    "cofinite_params",
    "JacobiBand",
    "build_jacobi",
    "matvec",
    "solve_shifted",
    "unitarity_defect",
]

_UNIT_ATOL = 1e-9


def theta_block(a: complex) -> np.ndarray:
    """The 2x2 unitary reflection block for ``|a| <= 1``."""
    a = complex(a)
    m = abs(a)
    if m > 1.0 + 1e-12:
        raise DomainError(f"|a| = {m!r} exceeds 1")
    r = np.sqrt(max(0.0, 1.0 - m * m))
    return np.array([[-a, r], [r, np.conj(a)]], dtype=np.complex128)


@dataclass
class BandedUnitary:
    """A five-diagonal matrix in band storage.

    ``bands[k][i] == C[i, i+k]`` for offsets ``k`` in -2..2, zero-padded so all
    five arrays have length ``order``.  ``provenance`` records the coefficient
    data the matrix was built from (needed to evaluate characteristic-polynomial
    residuals later); shifted-solve factorizations are cached per shift.
    """

    order: int
    bands: dict
    provenance: tuple | None = None
    _lu_cache: dict = field(default_factory=dict, repr=False, compare=False)
    _lu_lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)

    def matvec(self, x: np.ndarray) -> np.ndarray:
        return matvec(self, x)

    def dense(self) -> np.ndarray:
        out = np.zeros((self.order, self.order), dtype=np.complex128)
        for k, band in self.bands.items():
            if k >= 0:
                idx = np.arange(self.order - k)
                out[idx, idx + k] = band[: self.order - k]
            else:
                idx = np.arange(-k, self.order)
                out[idx, idx + k] = band[-k:]
        return out

    def unitarity_defect(self) -> float:
        return unitarity_defect(self)

    def dump_csv(self, fh) -> None:
        """Write nonzero entries as ``i,j,re,im`` rows (zero-based indices)."""
        fh.write("i,j,re,im\n")
        for i in range(self.order):
            for k in range(-2, 3):
                j = i + k
                if 0 <= j < self.order:
                    v = self.bands[k][i]
                    if v != 0.0:
                        fh.write(f"{i},{j},{v.real:.17g},{v.imag:.17g}\n")


def _empty_bands(n: int, offsets) -> dict:
    return {k: np.zeros(n, dtype=np.complex128) for k in offsets}


def _factor_bands(values: np.ndarray, start_odd: bool) -> dict:
    """Band form of one block-diagonal factor of the truncation.

    ``start_odd`` selects the factor whose first block sits at row 0 (it uses
    the odd-indexed coefficients s_1, s_3, ...); the other factor starts with a
    1x1 identity and uses the even-indexed coefficients.
    """
    n = len(values)
    bands = _empty_bands(n, (-1, 0, 1))
    if start_odd:
        js = range(0, n, 2)
    else:
        bands[0][0] = 1.0
        js = range(1, n, 2)
    for j in js:
        a = complex(values[j])
        if j + 1 < n:
            m = abs(a)
            r = np.sqrt(max(0.0, 1.0 - m * m))
            bands[0][j] = -a
            bands[0][j + 1] = np.conj(a)
            bands[1][j] = r
            bands[-1][j + 1] = r
        else:
            # Trailing block truncated to its upper-left corner.
            bands[0][j] = -a
    return bands


def _band_multiply(a_bands: dict, b_bands: dict, n: int) -> dict:
    """Product of two band matrices, as bands (valid offsets only)."""
    offsets = sorted({ka + kb for ka in a_bands for kb in b_bands})
    out = _empty_bands(n, offsets)
    for ka, ab in a_bands.items():
        for kb, bb in b_bands.items():
            m = ka + kb
            # contribution[i] = A[i, i+ka] * B[i+ka, i+m] for all valid i
            lo = max(0, -ka, -m)
            hi = min(n, n - ka, n - m)
            if lo >= hi:
                continue
            out[m][lo:hi] += ab[lo:hi] * bb[lo + ka : hi + ka]
    return out


def build_cmv(values, provenance: tuple | None = None) -> BandedUnitary:
    """Five-diagonal matrix from raw coefficients ``s_1 .. s_n`` (``|s_j| <= 1``).

    The matrix is unitary iff ``|s_n| = 1``; interior coefficients of modulus
    one split it into a direct sum.  Entries outside offsets -2..2 are exactly
    zero by construction.
    """
    values = np.asarray(values, dtype=np.complex128)
    n = len(values)
    if n < 1:
        raise DomainError("need at least one coefficient")
    mods = np.abs(values)
    if np.any(mods > 1.0 + 1e-12):
        raise ValidationError("coefficients must satisfy |s_j| <= 1")
    f_odd = _factor_bands(values, start_odd=True)
    f_even = _factor_bands(values, start_odd=False)
    prod = _band_multiply(f_odd, f_even, n)
    bands = _empty_bands(n, (-2, -1, 0, 1, 2))
    for k in range(-2, 3):
        if k in prod:
            bands[k] = prod[k]
    return BandedUnitary(order=n, bands=bands, provenance=provenance)


def build_truncation(prefix: ParamPrefix, u: complex, n: int) -> BandedUnitary:
    """Unitary truncation of order ``n`` from ``a_1 .. a_{n-1}`` and unit ``u``.

    Its spectrum is the zero set of ``p_n^u(z) = z phi_{n-1}(z) + u phi_{n-1}^*(z)``:
    ``n`` simple points on the unit circle.
    """
    if n < 1:
        raise DomainError("order must be >= 1")
    if len(prefix) < n - 1:
        raise DomainError(f"need {n - 1} coefficients, prefix has {len(prefix)}")
    u = complex(u)
    m = abs(u)
    if abs(m - 1.0) > _UNIT_ATOL:
        raise DomainError(f"u must have unit modulus, got |u| = {m!r}")
    u = u / m
    seq = np.empty(n, dtype=np.complex128)
    seq[: n - 1] = prefix.values[: n - 1]
    seq[n - 1] = u
    return build_cmv(seq, provenance=(prefix, u, n))


def matvec(C: BandedUnitary, x: np.ndarray) -> np.ndarray:
    """Banded matrix-vector product in O(n)."""
    x = np.asarray(x, dtype=np.complex128)
    if x.shape != (C.order,):
        raise DomainError(f"vector length {x.shape} does not match order {C.order}")
    n = C.order
    y = np.zeros(n, dtype=np.complex128)
    for k, band in C.bands.items():
        if k >= 0:
            y[: n - k] += band[: n - k] * x[k:]
        else:
            y[-k:] += band[-k:] * x[: n + k]
    return y


def _adjoint_bands(C: BandedUnitary) -> dict:
    """Bands of the conjugate transpose: ``(C*)[i, i+k] = conj(C[i+k, i])``."""
    n = C.order
    out = _empty_bands(n, (-2, -1, 0, 1, 2))
    for k in range(-2, 3):
        src = C.bands[-k]
        dst = out[k]
        if k >= 0:
            dst[: n - k] = np.conj(src[k:])
        else:
            dst[-k:] = np.conj(src[: n + k])
    return out


def unitarity_defect(C: BandedUnitary) -> float:
    """``max |(C C* - I)_{ij}|`` computed entirely in band form (O(n))."""
    prod = _band_multiply(C.bands, _adjoint_bands(C), C.order)
    defect = 0.0
    for k, band in prod.items():
        if k == 0:
            defect = max(defect, float(np.max(np.abs(band - 1.0))))
        else:
            if k >= 0:
                seg = band[: C.order - k]
            else:
                seg = band[-k:]
            if seg.size:
                defect = max(defect, float(np.max(np.abs(seg))))
    return defect


def cofinite_params(spec: SchurSpec, n: int, u: complex) -> SchurSpec:
    """Family generating ``conj(u) * a_{n+j}`` for ``j >= 1``.

    Dropping ``n`` leading coefficients and rotating the rest by ``conj(u)``
    describes the complementary block that appears when an interior
    coefficient is pushed to modulus one.  Constant and two-periodic families
    simplify in place; anything else is wrapped.
    """
    if n < 0:
        raise DomainError("n must be nonnegative")
    u = complex(u)
    m = abs(u)
    if abs(m - 1.0) > _UNIT_ATOL:
        raise DomainError(f"u must have unit modulus, got |u| = {m!r}")
    u = u / m
    uc = u.conjugate()
    if n == 0 and uc == 1.0:
        return spec
    if isinstance(spec, Constant):
        return Constant(uc * complex(spec.a))
    if isinstance(spec, TwoPeriodic):
        a, b = complex(spec.a_odd), complex(spec.a_even)
        if n % 2 == 1:
            a, b = b, a
        return TwoPeriodic(uc * a, uc * b)
    return ShiftedScaled(inner=spec, shift=n, scale=uc)


@dataclass(frozen=True)
class JacobiBand:
    """Real symmetric tridiagonal comparison matrix for a coefficient prefix.

    ``diagonal = (1-|a_1|, |a_1|-|a_2|, ...)`` and ``offdiagonal = (rho_1, ...)``;
    its norm controls how far the truncation spectra can spread around a
    reference point.
    """

    order: int
    diagonal: np.ndarray
    offdiagonal: np.ndarray

    def dense(self) -> np.ndarray:
        out = np.diag(self.diagonal.astype(np.float64))
        idx = np.arange(self.order - 1)
        out[idx, idx + 1] = self.offdiagonal
        out[idx + 1, idx] = self.offdiagonal
        return out


def build_jacobi(prefix: ParamPrefix, n: int) -> JacobiBand:
    """Leading ``n`` rows of the comparison tridiagonal (needs ``a_1 .. a_n``)."""
    if n < 1:
        raise DomainError("order must be >= 1")
    if len(prefix) < n:
        raise DomainError(f"need {n} coefficients, prefix has {len(prefix)}")
    mods = np.abs(prefix.values[:n])
    prev = np.concatenate(([1.0], mods[:-1]))
    return JacobiBand(order=n, diagonal=prev - mods, offdiagonal=prefix.rhos[: n - 1].copy())


# --------------------------------------------------------------------------
# Shifted solves
# --------------------------------------------------------------------------

_gbtrf, _gbtrs = scipy.linalg.get_lapack_funcs(
    ("gbtrf", "gbtrs"), (np.empty(0, dtype=np.complex128),)
)

_KL = 2
_KU = 2


def _shifted_ab(C: BandedUnitary, z: complex) -> np.ndarray:
    """LAPACK band storage for ``z I - C`` (extra rows for pivoting fill)."""
    n = C.order
    ab = np.zeros((2 * _KL + _KU + 1, n), dtype=np.complex128)
    for k in range(-2, 3):
        row = _KL + _KU - k
        if k >= 0:
            ab[row, k:] = -C.bands[k][: n - k]
        else:
            ab[row, : n + k] = -C.bands[k][-k:]
    ab[_KL + _KU, :] += z
    return ab


def _factorization(C: BandedUnitary, z: complex):
    key = complex(z)
    fact = C._lu_cache.get(key)
    if fact is None:
        lu, piv, info = _gbtrf(_shifted_ab(C, key), _KL, _KU)
        if info != 0:
            raise SingularShiftError(f"z = {key!r}: exact singular pivot at step {info}")
        # A benign duplicated computation is possible across threads; the
        # cached value is identical either way.
        with C._lu_lock:
            C._lu_cache[key] = (lu, piv)
        fact = (lu, piv)
    return fact


def solve_shifted(C: BandedUnitary, z: complex, b: np.ndarray) -> np.ndarray:
    """Solve ``(z I - C) x = b`` via banded LU with partial pivoting.

    The factorization is cached on ``C`` per shift.  One refinement step is
    applied; if the residual still exceeds ``1e-10 * ||b||`` the shift is
    declared numerically singular.
    """
    b = np.asarray(b, dtype=np.complex128)
    if b.shape != (C.order,):
        raise DomainError(f"rhs length {b.shape} does not match order {C.order}")
    z = complex(z)
    lu, piv = _factorization(C, z)
    x, info = _gbtrs(lu, _KL, _KU, b, piv)
    if info != 0:
        raise SingularShiftError(f"z = {z!r}: back substitution failed (info={info})")
    bnorm = float(np.linalg.norm(b))
    if bnorm == 0.0:
        return np.zeros_like(b)

    def residual(xv):
        return b - (z * xv - matvec(C, xv))

    r = residual(x)
    if float(np.linalg.norm(r)) > 1e-10 * bnorm:
        dx, info = _gbtrs(lu, _KL, _KU, r, piv)
        if info == 0:
            x = x + dx
            r = residual(x)
    if float(np.linalg.norm(r)) > 1e-10 * bnorm:
        raise SingularShiftError(
            f"z = {z!r} is too close to the spectrum: residual {float(np.linalg.norm(r))!r}"
        )
    return x
