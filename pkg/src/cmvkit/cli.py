"""Command-line front end.

Subcommands::

    params    expand a coefficient family and dump the prefix
    spectrum  truncation spectra at the requested orders
    support   persistent/sporadic classification across (n, n+1) spectra pairs
    bounds    evaluate a closed-form arc bound from declared limit data
    cf        approximant sweep over a z-grid (named scenario or custom family)
    quad      quadrature rules and their moment-error report
    figure    named presets rendered to an image file plus a data file

Common flag grammar::

    --params SPEC --u USPEC --n N1,N2,... [--pairs] --eps E --seed S
    --out PATH --format csv|json|svg [--full]

Complex literals are written ``RE[+IMi]`` (e.g. ``0.5``, ``0+1i``, ``-0.3-0.2i``).
Exit codes: 0 success, 2 invalid configuration (no output written), 3 numerical
or I/O failure (no partial output left behind).  ``CMV_THREADS`` caps how many
orders are computed in parallel.
"""

from __future__ import annotations

import argparse
import cmath
import io
import json
import math
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .caratheodory import (
    CONVERGENCE_SCENARIOS,
    modified_approximant,
    oracle_F,
    oracle_moments,
    scenario_rows,
    szego_rule,
)
from .circle import FiniteSpectrum
from .eig import sigma_n
from .errors import CmvError, DomainError, ValidationError
from .opuc import gen_u_sequence, parse_u_spec
from .schur import Constant, expand, format_complex, format_float, parse_complex, parse_schur_spec
from .support import (
    DiagonalLimitData,
    SupportEstimate,
    approximate_support,
    best_halfplane,
    bound_band,
    bound_diagonal,
    bound_halfplane,
    bound_ratio,
    bound_two_periodic,
    bound_weak_limit,
)

__all__ = ["main", "run", "svg_emit", "figure_preset", "FIGURE_IDS", "SCHEMA_VERSION"]

SCHEMA_VERSION = 1

_NUMERIC_EXIT = 3
_CONFIG_EXIT = 2

FIGURE_IDS = tuple(f"fig{k}" for k in range(1, 13))

_FIGURE_BASE_ORDERS = (50, 51, 200, 201)
_FIGURE_FULL_ORDERS = (50, 51, 200, 201, 1000, 1001)

# Default evaluation grid for custom approximant sweeps: two rings, off the
# unit circle on both sides.
DEFAULT_CF_GRID = tuple(0.5 * cmath.exp(1j * k * math.pi / 4.0) for k in range(8)) + tuple(
    2.0 * cmath.exp(1j * k * math.pi / 2.0) for k in range(4)
)


def _fmt(v) -> str:
    """One CSV cell: 17 significant digits for floats, plain text otherwise."""
    if isinstance(v, float):
        return "%.17g" % v
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return str(v)


def _csv_text(rows) -> str:
    return "".join(",".join(_fmt(c) for c in row) + "\n" for row in rows)


def _json_text(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _write_atomic(path: str, data) -> None:
    """Write bytes/text via a sibling temp file and rename into place."""
    directory = os.path.dirname(os.path.abspath(path)) or "."
    mode = "wb" if isinstance(data, bytes) else "w"
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".cmvkit-")
    try:
        with os.fdopen(fd, mode) as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


# --------------------------------------------------------------------------
# SVG emitter
# --------------------------------------------------------------------------

_PANEL = 600
_CENTER = 300.0
_RADIUS = 250.0


def _svg_panels(items) -> list:
    """Normalize emitter input to (label, [(x, y, shade), ...]) panels."""
    if isinstance(items, SupportEstimate):
        pts = []
        for c in items.candidates:
            z = complex(c.point)
            pts.append((z.real, z.imag, "black" if c.kind == "double" else "#888888"))
        label = "orders " + ",".join(str(o) for o in items.orders)
        return [(label, pts)]
    panels = []
    for entry in items:
        if hasattr(entry, "spectrum") and hasattr(entry, "order"):
            label = f"n = {entry.order}"
            values = entry.spectrum.as_array()
        elif isinstance(entry, FiniteSpectrum):
            label = f"n = {entry.order}"
            values = entry.as_array()
        else:
            label, values = entry
            values = np.asarray(list(values), dtype=np.complex128)
            label = str(label)
        panels.append((label, [(z.real, z.imag, "black") for z in values]))
    return panels


def svg_emit(spectra, path: str) -> None:
    """Write an SVG 1.1 document of unit-circle panels.

    Each panel is a 600x600 canvas: the unit circle as a stroked circle at
    (300, 300) with radius 250, and one filled disk of radius 2 per point at
    (300 + 250*Re, 300 - 250*Im).  Multiple spectra become a two-column grid
    of panels, each labeled with its order.
    """
    panels = _svg_panels(spectra)
    if not panels or all(not label and not pts for label, pts in panels):
        raise DomainError("nothing to emit")
    cols = 2 if len(panels) > 1 else 1
    rows = (len(panels) + cols - 1) // cols
    width = cols * _PANEL
    height = rows * _PANEL
    out = io.StringIO()
    out.write('<?xml version="1.0" encoding="UTF-8"?>\n')
    out.write(
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width}" height="{height}" viewBox="0 0 {width} {height}">\n'
    )
    for idx, (label, pts) in enumerate(panels):
        dx = (idx % cols) * _PANEL
        dy = (idx // cols) * _PANEL
        out.write(f'<g transform="translate({dx},{dy})">\n')
        out.write(
            f'<circle cx="{_fmt(_CENTER)}" cy="{_fmt(_CENTER)}" r="{_fmt(_RADIUS)}" '
            'fill="none" stroke="black" stroke-width="1"/>\n'
        )
        out.write(
            f'<text x="12" y="24" font-family="monospace" font-size="14">{label}</text>\n'
        )
        for x, y, shade in pts:
            cx = _CENTER + _RADIUS * x
            cy = _CENTER - _RADIUS * y
            out.write(f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="2" fill="{shade}"/>\n')
        out.write("</g>\n")
    out.write("</svg>\n")
    _write_atomic(path, out.getvalue())


# --------------------------------------------------------------------------
# Configuration
# --------------------------------------------------------------------------


@dataclass
class RunConfig:
    """A fully validated invocation; building one performs no heavy compute."""

    subcommand: str
    params: object = None
    u: object = None
    orders: tuple = ()
    pairs: tuple = ()
    epsilon: float | None = None
    seed: int | None = None
    out: str | None = None
    fmt: str = "csv"
    full: bool = False
    extra: dict = field(default_factory=dict)


def _parse_orders(text: str, as_pairs: bool) -> tuple:
    try:
        values = tuple(int(p) for p in text.split(","))
    except ValueError:
        raise DomainError(f"--n expects comma-separated integers, got {text!r}")
    if not values or any(v < 1 for v in values):
        raise DomainError("orders must be integers >= 1")
    if not as_pairs:
        return values, ()
    if len(values) % 2 != 0:
        raise DomainError("--pairs needs an even count of orders")
    pairs = tuple((values[i], values[i + 1]) for i in range(0, len(values), 2))
    for lo, hi in pairs:
        if hi != lo + 1:
            raise DomainError(f"pair ({lo}, {hi}) is not consecutive")
    return values, pairs


def _threads(n_jobs: int) -> int:
    cap = os.environ.get("CMV_THREADS", "")
    try:
        cap_n = int(cap) if cap else (os.cpu_count() or 1)
    except ValueError:
        raise DomainError(f"CMV_THREADS must be an integer, got {cap!r}")
    return max(1, min(n_jobs, cap_n, os.cpu_count() or 1))


def _map_orders(fn, orders):
    workers = _threads(len(orders))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, orders))
    return [fn(n) for n in orders]


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="cmvkit", description=__doc__,
                                  formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = top.add_subparsers(dest="subcommand", required=True)

    def common(p: argparse.ArgumentParser):
        p.add_argument("--params", default=None, help="coefficient family spec")
        p.add_argument("--u", default=None, help="boundary-parameter spec")
        p.add_argument("--n", default=None, help="comma-separated orders")
        p.add_argument("--pairs", action="store_true",
                       help="interpret --n as explicit consecutive pairs")
        p.add_argument("--eps", type=float, default=None, help="matching tolerance")
        p.add_argument("--seed", type=int, default=None, help="seed override for presets")
        p.add_argument("--out", default=None, help="output path (default: stdout)")
        p.add_argument("--format", dest="fmt", choices=("csv", "json", "svg"), default="csv")
        p.add_argument("--full", action="store_true", help="include the 1000-order panels")

    common(sub.add_parser("params", help="expand a coefficient family"))
    common(sub.add_parser("spectrum", help="truncation spectra"))
    common(sub.add_parser("support", help="persistent-point filter over order pairs"))
    p_bounds = sub.add_parser("bounds", help="closed-form arc bounds from declared data")
    common(p_bounds)
    p_bounds.add_argument("kind", choices=(
        "band", "halfplane", "best-halfplane", "diagonal", "ratio",
        "two-periodic", "weak-limit"))
    p_bounds.add_argument("assign", nargs="*", metavar="KEY=VALUE",
                          help="declared limit data for the chosen bound")
    p_cf = sub.add_parser("cf", help="approximant sweep")
    common(p_cf)
    p_cf.add_argument("scenario", nargs="?", default=None,
                      choices=sorted(CONVERGENCE_SCENARIOS), metavar="SCENARIO",
                      help="named convergence scenario (else --params/--u/--n)")
    common(sub.add_parser("quad", help="quadrature rule + moment errors"))
    p_fig = sub.add_parser("figure", help="named figure presets")
    common(p_fig)
    p_fig.add_argument("figid", choices=FIGURE_IDS, metavar="FIGID")
    return top


def _build_config(ns: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(subcommand=ns.subcommand, epsilon=ns.eps, seed=ns.seed,
                    out=ns.out, fmt=ns.fmt, full=ns.full)
    if ns.params is not None:
        cfg.params = parse_schur_spec(ns.params)
        cfg.extra["params_label"] = cfg.params.label()
    if ns.u is not None:
        cfg.u = parse_u_spec(ns.u)
        cfg.extra["u_label"] = cfg.u.label()
    if ns.n is not None:
        cfg.orders, cfg.pairs = _parse_orders(ns.n, ns.pairs)
    if cfg.epsilon is not None and cfg.epsilon <= 0.0:
        raise DomainError("--eps must be positive")

    sc = ns.subcommand
    needs = {
        "params": ("params",),
        "spectrum": ("params", "u"),
        "support": ("params", "u"),
        "quad": ("params", "u"),
    }
    for attr in needs.get(sc, ()):
        if getattr(cfg, attr) is None:
            raise DomainError(f"{sc} requires --{attr}")
    if sc in ("params", "spectrum", "support", "quad") and not cfg.orders:
        raise DomainError(f"{sc} requires --n")
    if sc in ("params", "bounds", "cf") and cfg.fmt == "svg":
        raise DomainError(f"{sc} has no svg output")
    if cfg.fmt == "svg" and cfg.out is None:
        raise DomainError("svg output requires --out")
    if sc == "bounds":
        cfg.extra["kind"] = ns.kind
        cfg.extra["assign"] = _parse_assignments(ns.assign)
    if sc == "cf":
        cfg.extra["scenario"] = ns.scenario
        if ns.scenario is None:
            if cfg.params is None or cfg.u is None or not cfg.orders:
                raise DomainError("cf requires a scenario name or --params/--u/--n")
    if sc == "figure":
        cfg.extra["figid"] = ns.figid
        if cfg.out is None:
            raise DomainError("figure requires --out")
    return cfg


def _parse_assignments(tokens) -> dict:
    out = {}
    for tok in tokens:
        key, sep, val = tok.partition("=")
        if not sep or not key:
            raise DomainError(f"expected KEY=VALUE, got {tok!r}")
        out[key.strip()] = val.strip()
    return out


# --------------------------------------------------------------------------
# Figure presets
# --------------------------------------------------------------------------


def figure_preset(figid: str, seed: int | None = None) -> dict:
    """The coefficient family, boundary rule and orders of one named preset.

    Random families carry pinned seeds so reruns are reproducible; ``seed``
    replaces them (a parity preset uses ``seed`` and ``seed + 1000``).
    """
    if figid not in FIGURE_IDS:
        raise DomainError(f"unknown figure id {figid!r}")
    s = math.sin(3.0 * math.pi / 8.0)
    a_plus = format_complex(s * cmath.exp(1j * math.pi / 3.0))
    a_minus = format_complex(s * cmath.exp(-1j * math.pi / 3.0))
    e3 = format_complex(cmath.exp(1j * math.pi / 3.0))
    half_pi = format_float(math.pi / 2.0)
    s1 = seed if seed is not None else None
    table = {
        "fig1": ("constant:0.5", "fixed-zero:1"),
        "fig2": ("constant:0.5", "fixed-zero:-1"),
        "fig3": ("constant:0.5", "phase"),
        "fig4": ("two-periodic:0.25,0.75", "fixed-zero:1"),
        "fig5": ("two-periodic:0.25,0.75", "fixed-zero:0+1i"),
        "fig6": ("two-periodic:0.25,0.75", "phase"),
        "fig7": (f"random-halfplane:1:0.5:{s1 if s1 is not None else 1007}", "fixed-zero:-1"),
        "fig8": (
            "parity:random-halfplane:-1:-0.25:%d;random-halfplane:1:0.75:%d"
            % ((s1, s1 + 1000) if s1 is not None else (1008, 2008)),
            "fixed-zero:1",
        ),
        "fig9": (
            f"parity:random-arc:0.25:{half_pi}:{s1 if s1 is not None else 1009};constant:0.75",
            "fixed-zero:0+1i",
        ),
        "fig10": (f"prime-rule:{a_plus}:{a_minus}", f"fixed-zero:{e3}"),
        "fig11": (f"random-set:{a_plus}|{a_minus}:{s1 if s1 is not None else 1011}",
                  f"fixed-zero:{e3}"),
        "fig12": (f"two-periodic:{a_minus},{a_plus}", f"fixed-zero:{e3}"),
    }
    params, u = table[figid]
    return {"figid": figid, "params": params, "u": u}


# --------------------------------------------------------------------------
# Subcommand payloads
# --------------------------------------------------------------------------


def _run_params(cfg: RunConfig):
    count = max(cfg.orders)
    prefix = expand(cfg.params, count)
    rows = [["n", "re", "im", "rho"]]
    for k, (v, r) in enumerate(zip(prefix.values, prefix.rhos), start=1):
        rows.append([k, float(v.real), float(v.imag), float(r)])
    payload = {
        "schema_version": SCHEMA_VERSION,
        "subcommand": "params",
        "params": cfg.extra["params_label"],
        "count": count,
        "values": [[float(v.real), float(v.imag)] for v in prefix.values],
        "rhos": [float(r) for r in prefix.rhos],
    }
    return rows, payload, None


def _spectrum_rows(results):
    rows = [["n", "re", "im", "angle", "residual"]]
    for res in results:
        residuals = res.residuals if res.residuals is not None else [float("nan")] * res.order
        for p, r in zip(res.spectrum, residuals):
            rows.append([res.order, p.value.real, p.value.imag, p.angle, float(r)])
    return rows


def _spectrum_payload(results, head: dict) -> dict:
    head = dict(head)
    head["schema_version"] = SCHEMA_VERSION
    head["spectra"] = [
        {
            "order": res.order,
            "points": [[p.value.real, p.value.imag] for p in res.spectrum],
            "angles": [p.angle for p in res.spectrum],
            "residuals": None if res.residuals is None else [float(r) for r in res.residuals],
            "unitarity_defect": res.unitarity,
            "converged": bool(res.converged),
        }
        for res in results
    ]
    return head


def _run_spectrum(cfg: RunConfig):
    prefix = expand(cfg.params, max(cfg.orders))
    results = _map_orders(lambda n: sigma_n(prefix, cfg.u, n), cfg.orders)
    head = {
        "subcommand": "spectrum",
        "params": cfg.extra["params_label"],
        "u": cfg.extra["u_label"],
        "orders": list(cfg.orders),
    }
    return _spectrum_rows(results), _spectrum_payload(results, head), results


def _run_support(cfg: RunConfig):
    orders = list(cfg.pairs) if cfg.pairs else list(cfg.orders)
    est = approximate_support(cfg.params, cfg.u, orders, epsilon=cfg.epsilon,
                              threads=_threads(2 * len(orders)))
    payload = {
        "schema_version": SCHEMA_VERSION,
        "subcommand": "support",
        "params": cfg.extra["params_label"],
        "u": cfg.extra["u_label"],
    }
    payload.update(est.to_json_dict())
    return est.to_csv_rows(), payload, est


def _get(assign: dict, key: str, conv, default=None, required=False):
    if key not in assign:
        if required:
            raise DomainError(f"bound needs {key}=...")
        return default
    try:
        return conv(assign[key])
    except (ValueError, TypeError) as exc:
        raise DomainError(f"bad value for {key}: {assign[key]!r}") from exc


def _parse_points(text: str) -> tuple:
    return tuple(parse_complex(p) for p in text.split("|"))


def _parse_gaps(text: str) -> tuple:
    gaps = []
    for part in text.split("|"):
        w_text, sep, a_text = part.partition("@")
        if not sep:
            raise DomainError(f"gap entries are W@ALPHA, got {part!r}")
        gaps.append((parse_complex(w_text), float(a_text)))
    return tuple(gaps)


def _bounds_result(kind: str, assign: dict):
    if kind == "band":
        return bound_band(
            _get(assign, "lam", parse_complex, required=True),
            _get(assign, "alpha1", float, required=True),
            _get(assign, "alpha2", float, required=True),
        )
    if kind == "halfplane":
        return bound_halfplane(
            _get(assign, "u", parse_complex, required=True),
            _get(assign, "alpha0", float, required=True),
        )
    if kind == "best-halfplane":
        return best_halfplane(_get(assign, "points", _parse_points, required=True))
    if kind == "diagonal":
        if "a" in assign:
            data = DiagonalLimitData.from_constant(_get(assign, "a", parse_complex))
        else:
            data = DiagonalLimitData(
                mod_diff=_get(assign, "mod_diff", float, required=True),
                rho_odd=_get(assign, "rho_odd", float, required=True),
                rho_even=_get(assign, "rho_even", float, required=True),
                om_odd=_get(assign, "om_odd", float, required=True),
                om_even=_get(assign, "om_even", float, required=True),
                phase_limits=_get(assign, "phase_limits", _parse_points, default=(1.0 + 0.0j,)),
                liminf_mod=_get(assign, "liminf_mod", float, default=0.0),
                modulus_one_parity=bool(_get(assign, "modulus_one_parity", int, default=0)),
            )
        return bound_diagonal(data)
    if kind == "ratio":
        return bound_ratio(
            _get(assign, "limits", _parse_points, required=True),
            _get(assign, "liminf", float, required=True),
        )
    if kind == "two-periodic":
        return bound_two_periodic(
            _get(assign, "lam", parse_complex, default=1.0 + 0.0j),
            _get(assign, "a_odd", parse_complex, required=True),
            _get(assign, "a_even", parse_complex, required=True),
            _get(assign, "xi_odd", float, default=0.0),
            _get(assign, "xi_even", float, default=0.0),
        )
    if kind == "weak-limit":
        return bound_weak_limit(
            _get(assign, "gaps", _parse_gaps, required=True),
            _get(assign, "alpha0", float, required=True),
        )
    raise DomainError(f"unknown bound kind {kind!r}")


def _run_bounds(cfg: RunConfig):
    kind = cfg.extra["kind"]
    result = _bounds_result(kind, cfg.extra["assign"])
    if kind == "weak-limit":
        rows = [["center_re", "center_im", "alpha", "beta", "conclusive"]]
        for g in result:
            rows.append([g.center.real, g.center.imag, g.alpha,
                         g.beta if g.beta is not None else "", int(g.conclusive)])
        payload = {
            "schema_version": SCHEMA_VERSION,
            "subcommand": "bounds",
            "kind": kind,
            "gaps": [
                {
                    "center": [g.center.real, g.center.imag],
                    "alpha": g.alpha,
                    "beta": g.beta,
                    "conclusive": g.conclusive,
                }
                for g in result
            ],
        }
        return rows, payload, None
    rows = [["hypothesis", "conclusive", "center_re", "center_im", "half_width", "closed"]]
    for arc in result.arcs:
        rows.append([result.hypothesis, int(result.conclusive), arc.center.real,
                     arc.center.imag, arc.half_width, int(arc.closed)])
    payload = {"schema_version": SCHEMA_VERSION, "subcommand": "bounds", "kind": kind}
    payload.update(result.to_json_dict())
    return rows, payload, None


def _cf_oracle(spec):
    if isinstance(spec, Constant):
        a = complex(spec.a)
        return "lebesgue" if a == 0.0 else ("geronimus", a)
    return None


def _run_cf(cfg: RunConfig):
    name = cfg.extra.get("scenario")
    if name is not None:
        sc = CONVERGENCE_SCENARIOS[name]
        rows = [["n", "re_z", "im_z", "re_K", "im_K", "err"]] + scenario_rows(sc)
        payload = {
            "schema_version": SCHEMA_VERSION,
            "subcommand": "cf",
            "scenario": sc.name,
            "description": sc.description,
            "params": sc.schur.label(),
            "u": sc.u.label(),
            "orders": list(sc.orders),
            "region": sc.region,
            "rows": [
                {"n": r[0], "z": [r[1], r[2]], "value": [r[3], r[4]],
                 "err": (None if r[5] == "" else r[5])}
                for r in rows[1:]
            ],
        }
        return rows, payload, None
    top = max(cfg.orders)
    prefix = expand(cfg.params, top)
    us = gen_u_sequence(cfg.u, prefix, top)
    oracle = _cf_oracle(cfg.params)
    rows = [["n", "re_z", "im_z", "re_K", "im_K", "err"]]
    for n in cfg.orders:
        u = complex(us[n - 1])
        for z in DEFAULT_CF_GRID:
            val = modified_approximant(prefix, u, n, z).value
            err = abs(val - oracle_F(oracle, z)) if oracle is not None else ""
            rows.append([n, z.real, z.imag, val.real, val.imag, err])
    payload = {
        "schema_version": SCHEMA_VERSION,
        "subcommand": "cf",
        "params": cfg.extra["params_label"],
        "u": cfg.extra["u_label"],
        "orders": list(cfg.orders),
        "oracle": "constant-coefficient reference" if oracle is not None else None,
        "rows": [
            {"n": r[0], "z": [r[1], r[2]], "value": [r[3], r[4]],
             "err": (None if r[5] == "" else r[5])}
            for r in rows[1:]
        ],
    }
    return rows, payload, None


def _run_quad(cfg: RunConfig):
    oracle = _cf_oracle(cfg.params)
    rules = _map_orders(lambda n: szego_rule(cfg.params, cfg.u, n), cfg.orders)
    rows = [["n", "re", "im", "angle", "weight", "max_moment_error"]]
    report = []
    for rule in rules:
        err = ""
        if oracle is not None:
            mm = oracle_moments(oracle, rule.order - 1)
            worst = abs(rule.moment(0) - 1.0)
            for k in range(1, rule.order):
                worst = max(worst, abs(rule.moment(k) - mm[k].conjugate()))
                worst = max(worst, abs(rule.moment(-k) - mm[k]))
            err = float(worst)
        for p, w in zip(rule.nodes, rule.weights):
            rows.append([rule.order, p.value.real, p.value.imag, p.angle, float(w), err])
        entry = rule.to_json_dict()
        entry["max_moment_error"] = None if err == "" else err
        report.append(entry)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "subcommand": "quad",
        "params": cfg.extra["params_label"],
        "u": cfg.extra["u_label"],
        "rules": report,
    }
    return rows, payload, [r.nodes for r in rules]


def _run_figure(cfg: RunConfig):
    preset = figure_preset(cfg.extra["figid"], cfg.seed)
    orders = _FIGURE_FULL_ORDERS if cfg.full else _FIGURE_BASE_ORDERS
    spec = parse_schur_spec(preset["params"])
    u_spec = parse_u_spec(preset["u"])
    prefix = expand(spec, max(orders))
    results = _map_orders(lambda n: sigma_n(prefix, u_spec, n), orders)
    head = {
        "subcommand": "figure",
        "figure": preset["figid"],
        "params": preset["params"],
        "u": preset["u"],
        "orders": list(orders),
    }
    return _spectrum_rows(results), _spectrum_payload(results, head), results


_RUNNERS = {
    "params": _run_params,
    "spectrum": _run_spectrum,
    "support": _run_support,
    "bounds": _run_bounds,
    "cf": _run_cf,
    "quad": _run_quad,
    "figure": _run_figure,
}


def _emit(cfg: RunConfig, rows, payload, drawable) -> None:
    if cfg.fmt == "svg":
        if drawable is None:
            raise DomainError(f"{cfg.subcommand} has no svg output")
        svg_emit(drawable, cfg.out)
        return
    text = _csv_text(rows) if cfg.fmt == "csv" else _json_text(payload)
    if cfg.out is None:
        sys.stdout.write(text)
    else:
        _write_atomic(cfg.out, text)


def _render_figure_png(cfg: RunConfig, results) -> str:
    from .plots import render_panels

    base, _ = os.path.splitext(cfg.out)
    png_path = base + ".png"
    directory = os.path.dirname(os.path.abspath(png_path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".cmvkit-", suffix=".png")
    os.close(fd)
    try:
        render_panels(
            [(f"n = {res.order}", res.spectrum.as_array()) for res in results],
            tmp,
            suptitle=cfg.extra["figid"],
        )
        os.replace(tmp, png_path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise
    return png_path


def run(argv=None) -> int:
    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else _CONFIG_EXIT
        return 0 if code == 0 else _CONFIG_EXIT
    try:
        cfg = _build_config(ns)
    except CmvError as exc:
        print(f"cmvkit: invalid configuration: {exc}", file=sys.stderr)
        return _CONFIG_EXIT
    try:
        rows, payload, drawable = _RUNNERS[cfg.subcommand](cfg)
    except (DomainError, ValidationError) as exc:
        print(f"cmvkit: invalid configuration: {exc}", file=sys.stderr)
        return _CONFIG_EXIT
    except CmvError as exc:
        print(f"cmvkit: numerical failure: {exc}", file=sys.stderr)
        return _NUMERIC_EXIT
    try:
        if cfg.subcommand == "figure":
            png = _render_figure_png(cfg, drawable)
            data_cfg = cfg
            if os.path.abspath(cfg.out) == os.path.abspath(png):
                # .png out path: keep the image there, data goes alongside
                ext = ".svg" if cfg.fmt == "svg" else f".{cfg.fmt}"
                data_cfg = replace(cfg, out=os.path.splitext(cfg.out)[0] + ext)
            _emit(data_cfg, rows, payload, drawable)
            print(f"cmvkit: wrote {data_cfg.out} and {png}", file=sys.stderr)
        else:
            _emit(cfg, rows, payload, drawable)
    except DomainError as exc:
        print(f"cmvkit: invalid configuration: {exc}", file=sys.stderr)
        return _CONFIG_EXIT
    except OSError as exc:
        print(f"cmvkit: cannot write output: {exc}", file=sys.stderr)
        return _NUMERIC_EXIT
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
