"""Support approximation from truncation spectra, and closed-form arc bounds.

Two independent tools for locating the support of the measure attached to a
coefficient sequence:

* a sampling pipeline: compute the spectra of truncations at consecutive
  orders (n, n+1) and keep the points that persist across both orders of
  every supplied pair ("double" candidates) versus those that appear only
  sporadically ("weak-only");
* closed-form bounds: arcs that must contain the derived set of the support,
  computed from limit data of the coefficient sequence (band and half-plane
  confinement, diagonal comparison, ratio limits, two-periodic comparison).

All bound results use the convention that ``delta(lam, alpha)`` denotes the
closed arc complementary to the open arc of half-width ``alpha`` centered at
``lam``; support statements are unions of such arcs.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .circle import Arc, UnitPoint, make_arc, principal_angle
from .errors import DomainError
from .opuc import MixedU, WRecurrence
from .schur import ParamPrefix, SchurSpec, expand, rho

__all__ = [
    "SupportCandidate",
    "SupportEstimate",
    "double_limit_filter",
    "approximate_support",
    "ArcBound",
    "bound_band",
    "bound_halfplane",
    "best_halfplane",
    "DiagonalLimitData",
    "bound_diagonal",
    "bound_ratio",
    "bound_two_periodic",
    "GapRefinement",
    "bound_weak_limit",
    "projection_norm",
    "estimate_alpha0",
    "LimitSetEstimate",
    "estimate_limit_set",
]


# --------------------------------------------------------------------------
# Double / weak-only classification of truncation spectra
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SupportCandidate:
    """One persistent or sporadic spectral location.

    ``match_distance`` is the smallest over all supplied pairs (n, n+1) of the
    larger of the two chordal distances from ``point`` to the order-n and the
    order-(n+1) spectrum; a double candidate keeps it below the matching
    tolerance.  ``pair_bases`` lists the base orders n of the pairs in which
    the candidate was detected, ``spread`` the chordal diameter of the matched
    cluster, and ``exceptional_distance`` the distance to the declared
    exceptional set of the boundary rule (None when that set is unknown).
    """

    point: UnitPoint
    kind: str
    match_distance: float
    pair_bases: tuple
    spread: float
    exceptional_distance: float | None = None

    @property
    def angle(self) -> float:
        return self.point.angle


@dataclass(frozen=True)
class SupportEstimate:
    orders: tuple
    pair_bases: tuple
    epsilon: float
    candidates: tuple
    exceptional: tuple = ()

    @property
    def doubles(self) -> tuple:
        return tuple(c for c in self.candidates if c.kind == "double")

    @property
    def weak_only(self) -> tuple:
        return tuple(c for c in self.candidates if c.kind == "weak-only")

    def to_json_dict(self) -> dict:
        return {
            "orders": list(self.orders),
            "pair_bases": list(self.pair_bases),
            "epsilon": self.epsilon,
            "exceptional": [[z.real, z.imag] for z in self.exceptional],
            "candidates": [
                {
                    "re": complex(c.point).real,
                    "im": complex(c.point).imag,
                    "angle": c.angle,
                    "class": c.kind,
                    "match_distance": c.match_distance,
                    "spread": c.spread,
                    "pair_bases": list(c.pair_bases),
                    "exceptional_distance": c.exceptional_distance,
                }
                for c in self.candidates
            ],
        }

    def to_csv_rows(self):
        """Rows of (re, im, class, match_distance), one per candidate."""
        rows = [["re", "im", "class", "match_distance"]]
        for c in self.candidates:
            z = complex(c.point)
            rows.append([z.real, z.imag, c.kind, c.match_distance])
        return rows


def _spectrum_points(entry):
    """Accept a spectrum result or an (order, points) pair."""
    if hasattr(entry, "order") and hasattr(entry, "points"):
        return int(entry.order), np.asarray(entry.points, dtype=np.complex128)
    order, pts = entry
    return int(order), np.asarray(list(pts), dtype=np.complex128)


def _pair_up(spectra):
    by_order = {}
    for entry in spectra:
        n, pts = _spectrum_points(entry)
        if n in by_order:
            raise DomainError(f"duplicate spectrum for order {n}")
        by_order[n] = pts
    orders = sorted(by_order)
    pairs = [(n, by_order[n], by_order[n + 1]) for n in orders if n + 1 in by_order]
    for n in orders:
        if n + 1 not in by_order and n - 1 not in by_order:
            raise DomainError(
                f"order {n} has no consecutive partner; "
                "spectra must come in (n, n+1) pairs"
            )
    return tuple(orders), pairs


def _min_dist(z: complex, pts: np.ndarray) -> float:
    return float(np.min(np.abs(pts - z)))


def _cluster_on_circle(items, link: float):
    """Chain-cluster circle points: split where consecutive chordal gap > link.

    ``items`` is a list of (complex point, payload).  Returns a list of member
    lists; the chain wraps around 2*pi.
    """
    if not items:
        return []
    ang = np.array([principal_angle(p) for p, _ in items])
    order = np.argsort(ang, kind="stable")
    pts = np.array([items[i][0] for i in order])
    n = len(pts)
    if n == 1:
        return [[items[order[0]]]]
    gap_after = np.abs(np.roll(pts, -1) - pts)  # gap_after[i]: i -> i+1 (cyclic)
    breaks = [i for i in range(n) if gap_after[i] > link]
    if not breaks:
        return [[items[i] for i in order]]
    clusters = []
    for b, nxt in zip(breaks, breaks[1:] + [breaks[0] + n]):
        member_idx = [order[(j + 1) % n] for j in range(b, nxt)]
        clusters.append([items[i] for i in member_idx])
    return clusters


def double_limit_filter(spectra, epsilon: float, exceptional=()) -> SupportEstimate:
    """Classify persistent versus sporadic points across (n, n+1) spectra pairs.

    A point of the order-(n+1) spectrum is a persistent candidate for the pair
    when its chordal distance to the order-n spectrum is at most ``epsilon``.
    All candidates, matched and unmatched, are chain-clustered on the circle
    together; a cluster is classified ``double`` only when it holds a matched
    representative from every supplied pair, otherwise ``weak-only``.  Matched
    points are averaged and projected back to the circle.
    """
    if epsilon <= 0.0:
        raise DomainError("epsilon must be positive")
    orders, pairs = _pair_up(spectra)
    bases = tuple(m for m, _, _ in pairs)
    items = []      # (point, (base order, matched within the pair?))
    for m, low, high in pairs:
        for z in high:
            j = int(np.argmin(np.abs(low - z)))
            d = abs(low[j] - z)
            if d <= epsilon:
                rep = 0.5 * (z + low[j])
                rep /= abs(rep)
                items.append((rep, (m, True)))
            else:
                items.append((z, (m, False)))
        for z in low:
            if _min_dist(z, high) > epsilon:
                items.append((z, (m, False)))

    spectra_by_base = {m: (low, high) for m, low, high in pairs}

    def build(cluster) -> SupportCandidate:
        pts = np.array([p for p, _ in cluster])
        seen = tuple(sorted({b for _, (b, _) in cluster}))
        matched = tuple(sorted({b for _, (b, ok) in cluster if ok}))
        rep = pts.mean()
        if rep == 0.0:
            rep = pts[0]
        rep /= abs(rep)
        spread = float(np.max(np.abs(pts[:, None] - pts[None, :]))) if len(pts) > 1 else 0.0
        md = math.inf
        for m in bases:
            low, high = spectra_by_base[m]
            md = min(md, max(_min_dist(rep, low), _min_dist(rep, high)))
        kind = "double" if matched == bases and md <= epsilon else "weak-only"
        exc = min(abs(rep - e) for e in exceptional) if exceptional else None
        return SupportCandidate(
            point=UnitPoint.project(rep),
            kind=kind,
            match_distance=md,
            pair_bases=seen,
            spread=spread,
            exceptional_distance=exc,
        )

    candidates = [build(c) for c in _cluster_on_circle(items, epsilon)]
    candidates.sort(key=lambda c: c.angle)
    return SupportEstimate(
        orders=orders,
        pair_bases=bases,
        epsilon=float(epsilon),
        candidates=tuple(candidates),
        exceptional=tuple(complex(e) for e in exceptional),
    )


def _exceptional_set(u_source) -> tuple:
    """Declared limit set of (u_{n+1}/u_n)(1 - conj(a_n) u_n)/(1 - a_n conj(u_n)).

    Known in closed form for the boundary rules that pin a zero at w: the set
    is exactly {w}.  For other rules it is left undeclared.
    """
    if isinstance(u_source, (WRecurrence, MixedU)):
        return (complex(u_source.w),)
    return ()


def approximate_support(
    source,
    u_source,
    orders,
    epsilon: float | None = None,
    threads: int | None = None,
    refine: bool = True,
) -> SupportEstimate:
    """Compute spectra over (n, n+1) pairs and run the persistence filter.

    ``orders`` is a list of base orders n (each expanded to the pair (n, n+1))
    or a list of explicit consecutive pairs.  The default matching tolerance
    is pi/(4*max(n)): a quarter of the typical eigenvalue spacing at the
    largest order.  Candidates near the declared exceptional set of the
    boundary rule are annotated, never removed.
    """
    from .eig import sigma_n

    bases = []
    for entry in orders:
        if isinstance(entry, (tuple, list)):
            m, mm = int(entry[0]), int(entry[1])
            if mm != m + 1:
                raise DomainError(f"pair {entry!r} is not consecutive")
            bases.append(m)
        else:
            bases.append(int(entry))
    if not bases:
        raise DomainError("need at least one order pair")
    bases = sorted(set(bases))
    if any(b < 1 for b in bases):
        raise DomainError("orders must be >= 1")
    needed = sorted({n for b in bases for n in (b, b + 1)})
    if isinstance(source, SchurSpec):
        prefix = expand(source, max(needed))
    elif isinstance(source, ParamPrefix):
        prefix = source
    else:
        raise DomainError(f"cannot interpret {type(source).__name__} as a coefficient source")
    if epsilon is None:
        epsilon = math.pi / (4.0 * max(bases))

    def compute(n):
        return sigma_n(prefix, u_source, n, refine=refine)

    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(compute, needed))
    else:
        results = [compute(n) for n in needed]
    return double_limit_filter(results, epsilon, exceptional=_exceptional_set(u_source))


# --------------------------------------------------------------------------
# Closed-form arc bounds
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ArcBound:
    """A region (union of arcs) guaranteed to contain the derived support set.

    ``conclusive`` is False exactly when the hypothesis of the underlying
    criterion fails, in which case ``arcs`` is the full circle and the bound
    carries no information.
    """

    arcs: tuple
    hypothesis: str
    parameters: dict = field(default_factory=dict)
    conclusive: bool = True

    def contains(self, z) -> bool:
        return any(arc.contains(z) for arc in self.arcs)

    def distance(self, z) -> float:
        return min(arc.distance(z) for arc in self.arcs)

    def to_json_dict(self) -> dict:
        def enc(v):
            if isinstance(v, complex):
                return [v.real, v.imag]
            if isinstance(v, (tuple, list)):
                return [enc(x) for x in v]
            return v

        return {
            "hypothesis": self.hypothesis,
            "conclusive": self.conclusive,
            "parameters": {k: enc(v) for k, v in self.parameters.items()},
            "arcs": [
                {
                    "center_re": a.center.real,
                    "center_im": a.center.imag,
                    "half_width": a.half_width,
                    "closed": a.closed,
                }
                for a in self.arcs
            ],
        }


def _as_unit(lam) -> complex:
    z = complex(lam)
    m = abs(z)
    if abs(m - 1.0) > 1e-9:
        raise DomainError(f"expected a unit-modulus point, got modulus {m!r}")
    return z / m


def _full_circle(lam: complex) -> tuple:
    return (Arc(center=-lam, half_width=math.pi, closed=True),)


def _inconclusive(hypothesis: str, lam: complex, parameters: dict) -> ArcBound:
    return ArcBound(
        arcs=_full_circle(lam),
        hypothesis=hypothesis,
        parameters=parameters,
        conclusive=False,
    )


def bound_band(lam, alpha1: float, alpha2: float) -> ArcBound:
    """Arc bound when odd/even coefficient limit points are band-separated.

    Hypothesis: with u = -lam, the band cos(alpha2) <= Re(conj(u) z) <= cos(alpha1)
    contains no limit point of the coefficients, while the odd-index limit
    points lie on one side and the even-index ones on the other.  Conclusion:
    the derived support set leaves a gap of half-width ``alpha`` around ``lam``,
    i.e. lies in the complementary closed arc, with
    sin(alpha/2) = max(sin(alpha2/2) - sin(alpha1/2), cos(alpha1/2) - cos(alpha2/2)).
    """
    lam = _as_unit(lam)
    if not (0.0 <= alpha1 < alpha2 <= math.pi):
        raise DomainError(f"need 0 <= alpha1 < alpha2 <= pi, got ({alpha1!r}, {alpha2!r})")
    s = max(
        math.sin(alpha2 / 2.0) - math.sin(alpha1 / 2.0),
        math.cos(alpha1 / 2.0) - math.cos(alpha2 / 2.0),
    )
    params = {"lambda": lam, "alpha1": alpha1, "alpha2": alpha2, "sin_half_alpha": s}
    if s <= 0.0:
        return _inconclusive("band", lam, params)
    alpha = 2.0 * math.asin(min(1.0, s))
    params["alpha"] = alpha
    return ArcBound(arcs=(make_arc("delta", lam, alpha),), hypothesis="band",
                    parameters=params)


def bound_halfplane(u, alpha0: float) -> ArcBound:
    """Arc bound when all coefficient limit points lie in Re(conj(u) z) >= cos(alpha0).

    The derived support set then leaves a gap of half-width ``alpha`` around
    ``u`` itself, cos(alpha/2) = sqrt(sin(alpha0)).  Conclusive for
    alpha0 < pi/2; a wider half-plane carries no information (inconclusive
    result, not an error).
    """
    u = _as_unit(u)
    if alpha0 < 0.0 or alpha0 > math.pi:
        raise DomainError(f"alpha0 must lie in [0, pi], got {alpha0!r}")
    params = {"u": u, "alpha0": alpha0}
    if alpha0 >= math.pi / 2.0:
        return _inconclusive("halfplane", u, params)
    c = math.sqrt(math.sin(alpha0))
    alpha = 2.0 * math.acos(min(1.0, c))
    params["alpha"] = alpha
    return ArcBound(arcs=(make_arc("delta", u, alpha),), hypothesis="halfplane",
                    parameters=params)


def best_halfplane(points) -> ArcBound:
    """Half-plane bound from one or two declared coefficient limit points.

    For two limit points a, b (both nonzero) the smallest usable half-plane
    Re(conj(u) z) >= cos(alpha0) is selected by the two-case rule: order so
    that |a| <= |b| and write (b - a)/|b - a| = (a/|a|) e^{i theta}; then
    u = a/|a| with cos(alpha0) = |a| when |theta| <= pi/2, otherwise
    u = -sign(theta) i (b - a)/|b - a| with cos(alpha0) = |a| sin|theta|.
    Opposite phases (theta = pi) leave alpha0 = pi/2: inconclusive.
    """
    pts = [complex(p) for p in points]
    if not 1 <= len(pts) <= 2:
        raise DomainError("the half-plane selector takes one or two limit points")
    if any(p == 0 for p in pts):
        raise DomainError("limit points must be nonzero")
    if len(pts) == 1 or pts[0] == pts[1]:
        a = pts[0]
        u = a / abs(a)
        cos_a0 = abs(a)
        theta = 0.0
    else:
        a, b = sorted(pts, key=abs)
        direction = (b - a) / abs(b - a)
        theta = math.atan2((direction / (a / abs(a))).imag, (direction / (a / abs(a))).real)
        if abs(theta) <= math.pi / 2.0:
            u = a / abs(a)
            cos_a0 = abs(a)
        else:
            u = -math.copysign(1.0, theta) * 1j * direction
            cos_a0 = abs(a) * math.sin(abs(theta))
    alpha0 = math.acos(max(-1.0, min(1.0, cos_a0)))
    out = bound_halfplane(u, alpha0)
    merged = dict(out.parameters)
    merged.update({"theta": theta, "points": tuple(pts)})
    return ArcBound(arcs=out.arcs, hypothesis=out.hypothesis, parameters=merged,
                    conclusive=out.conclusive)


@dataclass(frozen=True)
class DiagonalLimitData:
    """Declared limit data of a coefficient sequence for the diagonal bound.

    ``mod_diff`` is limsup of the modulus increments ||a_{n+1}| - |a_n||,
    ``rho_odd``/``rho_even`` the limsups of sqrt(1 - |a_n|^2) over odd/even n,
    ``om_odd``/``om_even`` the limsups of 1 - |a_n| over odd/even n, and
    ``phase_limits`` the limit set of the consecutive phase ratios
    conj(u_n) u_{n+1} where a_n = |a_n| u_n.  ``liminf_mod`` with
    ``modulus_one_parity=True`` declares that one parity class of |a_n| tends
    to 1, unlocking the sharper cos(alpha) = -liminf |a_n| rate.
    ``enclosing`` optionally declares (lam0, zeta) with all phase limits in the
    closed arc of half-width zeta around lam0.
    """

    mod_diff: float
    rho_odd: float
    rho_even: float
    om_odd: float
    om_even: float
    phase_limits: tuple = (1.0 + 0.0j,)
    liminf_mod: float = 0.0
    modulus_one_parity: bool = False
    enclosing: tuple | None = None
    label: str = "declared"

    @classmethod
    def from_constant(cls, a) -> "DiagonalLimitData":
        a = complex(a)
        r = rho(a)
        return cls(
            mod_diff=0.0,
            rho_odd=r,
            rho_even=r,
            om_odd=1.0 - abs(a),
            om_even=1.0 - abs(a),
            phase_limits=(1.0 + 0.0j,),
            liminf_mod=abs(a),
        )


def bound_diagonal(data: DiagonalLimitData) -> ArcBound:
    """Arc bound by comparison with the diagonal matrix of coefficient phases.

    c1 = (mod_diff + rho_odd + rho_even)/2 and c2 = sqrt(om_odd/2) + sqrt(om_even/2);
    with c = min(c1, c2) < 1 the derived support set lies in the union over the
    declared phase limits lam of the complementary arcs of half-width alpha,
    cos(alpha/2) = c.  A declared modulus-one parity class sharpens to
    cos(alpha) = -liminf |a_n|; a declared enclosing arc of half-width zeta
    around lam0 shrinks the union to the single arc of half-width alpha - zeta.
    """
    for name in ("mod_diff", "rho_odd", "rho_even", "om_odd", "om_even"):
        v = getattr(data, name)
        if v < 0.0 or not math.isfinite(v):
            raise DomainError(f"{name} must be a finite nonnegative real, got {v!r}")
    if not data.phase_limits:
        raise DomainError("phase_limits must be nonempty")
    limits = tuple(_as_unit(p) for p in data.phase_limits)
    c1 = 0.5 * (data.mod_diff + data.rho_odd + data.rho_even)
    c2 = math.sqrt(data.om_odd / 2.0) + math.sqrt(data.om_even / 2.0)
    c = min(c1, c2)
    params = {"c1": c1, "c2": c2, "c": c, "phase_limits": limits, "source": data.label}
    if c >= 1.0 and not data.modulus_one_parity:
        return _inconclusive("diagonal", limits[0], params)
    alpha = 2.0 * math.acos(max(0.0, c)) if c < 1.0 else 0.0
    if data.modulus_one_parity:
        if not 0.0 <= data.liminf_mod <= 1.0:
            raise DomainError("liminf_mod must lie in [0, 1]")
        alpha_sharp = math.acos(-data.liminf_mod)
        params["alpha_sharp"] = alpha_sharp
        alpha = max(alpha, alpha_sharp)
    if alpha <= 0.0:
        return _inconclusive("diagonal", limits[0], params)
    params["alpha"] = alpha
    if data.enclosing is not None:
        lam0, zeta = complex(data.enclosing[0]), float(data.enclosing[1])
        if zeta < 0.0:
            raise DomainError("enclosing half-width must be nonnegative")
        if zeta < alpha:
            params["enclosing"] = (_as_unit(lam0), zeta)
            arcs = (make_arc("delta", _as_unit(lam0), alpha - zeta),)
            return ArcBound(arcs=arcs, hypothesis="diagonal", parameters=params)
    arcs = tuple(make_arc("delta", lam, alpha) for lam in limits)
    return ArcBound(arcs=arcs, hypothesis="diagonal", parameters=params)


def bound_ratio(ratio_limits, liminf_mod: float) -> ArcBound:
    """Arc bound from the limit set of consecutive coefficient ratios.

    Under |a_{n+1}/a_n| -> 1 the derived support set lies in the union over the
    ratio limit points lam of the complementary arcs of half-width alpha with
    sin(alpha/2) = liminf |a_n|.  Vanishing liminf is inconclusive.
    """
    limits = tuple(_as_unit(p) for p in ratio_limits)
    if not limits:
        raise DomainError("ratio limit set must be nonempty")
    if not 0.0 <= liminf_mod <= 1.0:
        raise DomainError(f"liminf_mod must lie in [0, 1], got {liminf_mod!r}")
    params = {"ratio_limits": limits, "liminf_mod": liminf_mod}
    if liminf_mod <= 0.0:
        return _inconclusive("ratio", limits[0], params)
    alpha = 2.0 * math.asin(min(1.0, liminf_mod))
    params["alpha"] = alpha
    arcs = tuple(make_arc("delta", lam, alpha) for lam in limits)
    return ArcBound(arcs=arcs, hypothesis="ratio", parameters=params)


def bound_two_periodic(lam, a_odd, a_even, xi_odd: float = 0.0, xi_even: float = 0.0) -> ArcBound:
    """Arc bound by comparison with an exactly 2-periodic sequence.

    The comparison spectrum is the intersection of the complementary arcs of
    half-widths alpha_plus around lam and alpha_minus around -lam, where
    cos(alpha_pm) = rho_o rho_e -+ Re(conj(a_odd) a_even).  When the odd/even
    limit points only lie within arcs of half-widths xi around a_odd/a_even,
    each conclusion that survives s = |a_odd| sin(xi_odd/2) + |a_even| sin(xi_even/2)
    < sin(alpha_pm/2) is widened by zeta with sin(zeta/2) = s.  The returned
    region is the intersection of the surviving conclusions, expressed as a
    union of explicit arcs.
    """
    lam = _as_unit(lam)
    a_o, a_e = complex(a_odd), complex(a_even)
    if abs(a_o) > 1.0 + 1e-12 or abs(a_e) > 1.0 + 1e-12:
        raise DomainError("comparison coefficients must have modulus <= 1")
    if not (0.0 <= xi_odd <= math.pi and 0.0 <= xi_even <= math.pi):
        raise DomainError("arc half-widths must lie in [0, pi]")
    rr = rho(a_o) * rho(a_e)
    cross = (np.conj(a_o) * a_e).real
    alpha_p = math.acos(max(-1.0, min(1.0, rr - cross)))
    alpha_m = math.acos(max(-1.0, min(1.0, rr + cross)))
    s = abs(a_o) * math.sin(xi_odd / 2.0) + abs(a_e) * math.sin(xi_even / 2.0)
    zeta = 2.0 * math.asin(min(1.0, s))
    params = {
        "lambda": lam, "a_odd": a_o, "a_even": a_e,
        "xi_odd": xi_odd, "xi_even": xi_even,
        "alpha_plus": alpha_p, "alpha_minus": alpha_m, "s": s, "zeta": zeta,
    }
    keep_p = s < math.sin(alpha_p / 2.0)
    keep_m = s < math.sin(alpha_m / 2.0)
    params["plus_conclusive"] = keep_p
    params["minus_conclusive"] = keep_m
    if keep_p and keep_m:
        # Intersection of the two complementary-arc conclusions: the circle
        # minus both open gaps, i.e. two closed arcs between the gap edges.
        gp = alpha_p - zeta
        gm = alpha_m - zeta
        tau = principal_angle(lam)
        half = (math.pi - gp - gm) / 2.0
        if half <= 0.0:
            return _inconclusive("two-periodic", lam, params)
        c1 = np.exp(1j * (tau + gp + half))
        c2 = np.exp(1j * (tau - gp - half))
        arcs = (
            Arc(center=complex(c1), half_width=half, closed=True),
            Arc(center=complex(c2), half_width=half, closed=True),
        )
        return ArcBound(arcs=arcs, hypothesis="two-periodic", parameters=params)
    if keep_p:
        return ArcBound(arcs=(make_arc("delta", lam, alpha_p - zeta),),
                        hypothesis="two-periodic", parameters=params)
    if keep_m:
        return ArcBound(arcs=(make_arc("delta", -lam, alpha_m - zeta),),
                        hypothesis="two-periodic", parameters=params)
    return _inconclusive("two-periodic", lam, params)


@dataclass(frozen=True)
class GapRefinement:
    """Refined confinement of spurious weak limit points inside one gap."""

    center: complex
    alpha: float
    beta: float | None

    @property
    def conclusive(self) -> bool:
        return self.beta is not None


def bound_weak_limit(gaps, alpha0: float):
    """Confinement of off-support weak limit points gap by gap.

    ``gaps`` lists (w_j, alpha_j): open arcs of half-width alpha_j around w_j
    free of the derived support set.  For each gap with alpha_j > alpha0 the
    spurious weak limit points avoid the inner arc of half-width beta_j,
    cos(beta_j/2) = cos(alpha_j/2)/cos(alpha0/2); gaps with alpha_j <= alpha0
    yield no conclusion.
    """
    if not 0.0 <= alpha0 <= math.pi:
        raise DomainError(f"alpha0 must lie in [0, pi], got {alpha0!r}")
    out = []
    for w, alpha in gaps:
        w = _as_unit(w)
        if not 0.0 < alpha <= math.pi:
            raise DomainError(f"gap half-width must lie in (0, pi], got {alpha!r}")
        if alpha > alpha0:
            ratio = math.cos(alpha / 2.0) / math.cos(alpha0 / 2.0)
            beta = 2.0 * math.acos(max(-1.0, min(1.0, ratio)))
            out.append(GapRefinement(center=w, alpha=alpha, beta=beta))
        else:
            out.append(GapRefinement(center=w, alpha=alpha, beta=None))
    return out


def projection_norm(a_n, u) -> float:
    """Norm of the skew projection attached to one truncation step.

    Equals sqrt(1 + |u - a_n|^2 / (1 - |a_n|^2)); requires |a_n| < 1 and
    |u| = 1.
    """
    a = complex(a_n)
    if abs(a) >= 1.0:
        raise DomainError(f"|a_n| must be < 1, got {abs(a)!r}")
    u = _as_unit(u)
    r2 = 1.0 - abs(a) * abs(a)
    return math.sqrt(1.0 + abs(u - a) ** 2 / r2)


def estimate_alpha0(values, u_values) -> float:
    """Tail estimate of the projection-norm angle alpha0 (labeled: estimate).

    cos(alpha0/2) is the liminf of the reciprocal projection norms; the tail
    infimum over the supplied window stands in for the liminf.
    """
    values = np.asarray(values, dtype=np.complex128)
    u_values = np.asarray(u_values, dtype=np.complex128)
    if values.shape != u_values.shape or values.size == 0:
        raise DomainError("need matching nonempty value and boundary-coefficient arrays")
    inv = [1.0 / projection_norm(a, u) for a, u in zip(values, u_values)]
    c = max(0.0, min(1.0, min(inv)))
    return 2.0 * math.acos(c)


@dataclass(frozen=True)
class LimitSetEstimate:
    """Numerically clustered tail of a sequence (labeled: estimate)."""

    points: tuple
    window: int
    radius: float
    label: str = "estimate"


def estimate_limit_set(values, window: int | None = None, radius: float = 1e-3) -> LimitSetEstimate:
    """Cluster the tail of a sequence to approximate its limit set.

    Uses the last ``window`` elements (default min(200, N/2)) and greedy
    clustering with the given radius; cluster means are reported sorted by
    angle then modulus.  This is an estimate of an analytic limit set and is
    labeled as such.
    """
    values = np.asarray(values, dtype=np.complex128)
    n = values.size
    if n < 2:
        raise DomainError("need at least two values to estimate a limit set")
    if window is None:
        window = min(200, n // 2)
    window = max(1, min(int(window), n))
    tail = values[n - window :]
    centers: list[complex] = []
    counts: list[int] = []
    for z in tail:
        placed = False
        for i, c in enumerate(centers):
            if abs(z - c) <= radius:
                counts[i] += 1
                centers[i] = c + (z - c) / counts[i]
                placed = True
                break
        if not placed:
            centers.append(complex(z))
            counts.append(1)
    centers.sort(key=lambda c: (principal_angle(c) if c != 0 else 0.0, abs(c)))
    return LimitSetEstimate(points=tuple(centers), window=window, radius=radius)
