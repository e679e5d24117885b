"""Spectra of unitary truncations.

The eigenvalues of an order-``n`` truncation built from ``a_1 .. a_{n-1}`` and
a unit coefficient ``u`` are the ``n`` simple zeros of

    p_n^u(z) = z phi_{n-1}(z) + u phi_{n-1}^*(z),

all on the unit circle.  A dense QR eigensolve provides starting points; a
Newton iteration in the angle variable polishes them against the boundary
polynomial itself, which is evaluated in rescaled mantissa form so residuals
stay meaningful at orders where the raw values overflow.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circle import FiniteSpectrum, principal_angle
from .errors import DomainError, StationaryPointError, ValidationError
from .opuc import gen_u_sequence, para_batch
from .schur import ParamPrefix, SchurSpec, expand

__all__ = ["SpectrumResult", "newton_refine", "eigen_unitary", "sigma_n"]

_UNITARITY_GATE = 1e-10
_NEWTON_TOL = 1e-12
_NEWTON_MAX_ITER = 50
_STATIONARY_FLOOR = 1e-14


@dataclass(frozen=True)
class SpectrumResult:
    """Spectrum of one truncation plus numerical evidence.

    ``residuals[j]`` is ``|p_n^u(lambda_j)|`` relative to the running envelope
    ``max_k (|lambda phi_k| + |phi_k^*|)`` of the evaluation at the same point:
    a backward-error style measure that stays finite at any order and is the
    tightest residual double precision can certify when the recurrence peaks
    mid-sequence.  ``raw`` keeps the unpolished eigensolver output in the same
    ordering as ``spectrum``.
    """

    order: int
    spectrum: FiniteSpectrum
    residuals: np.ndarray | None
    iterations: int
    converged: bool
    raw: np.ndarray
    unitarity: float

    @property
    def angles(self) -> np.ndarray:
        return np.array([pt.angle for pt in self.spectrum])

    @property
    def points(self) -> np.ndarray:
        return self.spectrum.as_array()

    @property
    def max_residual(self) -> float:
        if self.residuals is None or len(self.residuals) == 0:
            return 0.0
        return float(np.max(self.residuals))


def _neighbor_limits(angles: np.ndarray) -> np.ndarray:
    """Half the circular distance to each point's nearest neighbor."""
    n = len(angles)
    if n == 1:
        return np.array([np.pi])
    order = np.argsort(angles)
    srt = angles[order]
    gaps = np.diff(np.concatenate([srt, [srt[0] + 2.0 * np.pi]]))
    gaps = np.maximum(gaps, 1e-300)
    near = np.minimum(np.roll(gaps, 1), gaps)
    limits = np.empty(n, dtype=np.float64)
    limits[order] = 0.5 * near
    return limits


def newton_refine(
    prefix: ParamPrefix,
    n: int,
    u: complex,
    angles: np.ndarray,
    max_iter: int = _NEWTON_MAX_ITER,
    tol: float = _NEWTON_TOL,
):
    """Polish approximate eigenvalue angles against the boundary polynomial.

    Newton in the angle: with z = e^{i theta}, d/dtheta p(z) = i z p'(z) and the
    real part of the complex step keeps the iterate on the circle.  Steps are
    clamped so no point can wander past the midpoint to its starting neighbor.

    Returns ``(angles, relative_residuals, iterations, converged)``.
    """
    th = np.array(angles, dtype=np.float64, copy=True)
    th0 = th.copy()
    limits = _neighbor_limits(th0)
    iterations = 0
    rel = None
    for iterations in range(1, max_iter + 1):
        z = np.exp(1j * th)
        p, dp, _, mag = para_batch(prefix, n, u, z, deriv=True)
        absp = np.abs(p)
        rel = absp / np.maximum(mag, 1e-300)
        active = rel > tol
        if not np.any(active):
            return th, rel, iterations, True
        denom = 1j * z * dp
        dead = active & (np.abs(denom) < _STATIONARY_FLOOR * np.maximum(mag, 1e-300))
        if np.any(dead):
            idx = int(np.argmax(dead))
            raise StationaryPointError(
                f"derivative vanished at angle {th[idx]!r} with residual {rel[idx]!r}"
            )
        step = np.zeros_like(th)
        step[active] = np.real(p[active] / denom[active])
        # clamp the cumulative displacement, not just the step
        disp = th - step - th0
        disp = np.clip(disp, -limits, limits)
        moved = np.max(np.abs(th0 + disp - th))
        th = th0 + disp
        if moved <= 1e-15:
            # numerical fixed point: residuals are at the evaluation noise
            # floor and further iterations cannot improve them
            break
    z = np.exp(1j * th)
    p, _, _, mag = para_batch(prefix, n, u, z, deriv=False)
    rel = np.abs(p) / np.maximum(mag, 1e-300)
    return th, rel, iterations, bool(np.all(rel <= tol))


def eigen_unitary(C, refine: bool = True) -> SpectrumResult:
    """Spectrum of a banded unitary truncation.

    The matrix must be unitary to within 1e-10 in the max norm; eigenvalues are
    computed densely, projected onto the circle, and (when the matrix knows the
    coefficient data it came from) Newton-polished against ``p_n^u``.
    """
    defect = C.unitarity_defect()
    if defect > _UNITARITY_GATE:
        raise ValidationError(
            f"matrix is not unitary (defect {defect!r}); spectrum would be off-circle"
        )
    raw = np.linalg.eigvals(C.dense())
    angles = np.array([principal_angle(v) for v in raw])
    residuals = None
    iterations = 0
    converged = True
    if refine and C.provenance is not None:
        prefix, u, n = C.provenance
        angles, residuals, iterations, converged = newton_refine(prefix, n, u, angles)
    order = np.argsort(angles, kind="stable")
    angles = angles[order]
    raw = raw[order]
    if residuals is not None:
        residuals = residuals[order]
    points = np.exp(1j * angles)
    spectrum = FiniteSpectrum.from_points(points, project=False)
    return SpectrumResult(
        order=C.order,
        spectrum=spectrum,
        residuals=residuals,
        iterations=iterations,
        converged=bool(converged),
        raw=raw,
        unitarity=defect,
    )


def sigma_n(source, u_source, n: int, refine: bool = True) -> SpectrumResult:
    """Spectrum of the order-``n`` truncation for a coefficient source.

    ``source`` is a coefficient family or an already-expanded prefix (which
    must then hold at least ``n - 1`` values, or ``n`` when the boundary rule
    needs one more).  ``u_source`` is either a unit scalar or a boundary-
    coefficient rule; rules are evaluated along the sequence and the ``n``-th
    entry is used.
    """
    from .cmv import build_truncation

    if n < 1:
        raise DomainError("order must be >= 1")
    if isinstance(source, SchurSpec):
        prefix = expand(source, n)
    elif isinstance(source, ParamPrefix):
        prefix = source
    else:
        raise DomainError(f"cannot interpret {type(source).__name__} as a coefficient source")
    if isinstance(u_source, (complex, float, int)):
        u_n = complex(u_source)
    else:
        u_n = complex(gen_u_sequence(u_source, prefix, n)[n - 1])
    C = build_truncation(prefix, u_n, n)
    return eigen_unitary(C, refine=refine)
