"""Command line front end.

nevlab check   --config cfg.ini            validate a configuration
nevlab compute --config cfg.ini --r 10     one radius, full CSV row
nevlab sweep   --config cfg.ini [--out f]  CSV over the config's radius grid
nevlab verify <name> --config cfg.ini      one of: cartan, lemma55, prop62,
                                           growth, mcquillan, identities

Exit status is nonzero only for hard failures: bad configuration, degenerate
curves, exact identities with nonzero residual, or unconverged quadrature.
A negative inequality margin is reported, never treated as an error.
"""

from __future__ import annotations

import argparse
import configparser
import io
import itertools
import math
import sys
from dataclasses import dataclass, replace
from typing import Optional, Sequence, Tuple

import numpy as np

from .curve import (
    CurveLift,
    DegenerateCurveError,
    associated,
    leibniz_partner,
    normalize,
)
from .exterior import multi_indices, two_row_identity_sign, wedge_rows
from .gauss import GaussPoly, GaussRational, PolyParseError, parse_poly, parse_rational
from .harness import (
    HyperplaneConfig,
    full_sweep,
    general_position_tuples,
    mcquillan_monitor,
    verify_cartan,
    verify_height_growth,
    verify_lemma55,
    verify_prop62,
)
from .nevanlinna import QUAD_TOL

__all__ = ["RunConfig", "parse_config", "serialize_config", "run", "main"]

VERIFY_NAMES = ("cartan", "lemma55", "prop62", "growth", "mcquillan", "identities")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    """Parsed run configuration: the curve lift, the hyperplane forms, and
    the radius grid (log-spaced between r_min and r_max)."""

    curve: Tuple[GaussPoly, ...]
    hyperplanes: Tuple[Tuple[GaussRational, ...], ...]
    r_min: float
    r_max: float
    r_points: int
    tol: float = QUAD_TOL

    @property
    def n(self) -> int:
        return len(self.curve) - 1

    def radii(self) -> list:
        return list(
            np.logspace(math.log10(self.r_min), math.log10(self.r_max),
                        self.r_points)
        )


def parse_config(text: str) -> RunConfig:
    """Parse an INI configuration.

    [curve]       coords = p0; p1; ...            polynomial grammar
    [hyperplanes] forms  = a0, a1, ...; b0, ...    one form per semicolon
    [sweep]       r_min, r_max, r_points, tol
    """
    cp = configparser.ConfigParser()
    try:
        cp.read_string(text)
    except configparser.Error as e:
        raise ConfigError(f"bad INI syntax: {e}") from e
    for section in ("curve", "hyperplanes", "sweep"):
        if section not in cp:
            raise ConfigError(f"missing [{section}] section")

    raw_coords = cp["curve"].get("coords")
    if not raw_coords:
        raise ConfigError("[curve] needs a 'coords' entry")
    try:
        coords = tuple(
            parse_poly(part) for part in raw_coords.split(";") if part.strip()
        )
    except PolyParseError as e:
        raise ConfigError(f"in [curve] coords: {e}") from e
    if len(coords) < 2:
        raise ConfigError("curve needs at least two coordinates")
    n = len(coords) - 1

    raw_forms = cp["hyperplanes"].get("forms")
    if not raw_forms:
        raise ConfigError("[hyperplanes] needs a 'forms' entry")
    forms = []
    for part in raw_forms.split(";"):
        if not part.strip():
            continue
        try:
            form = tuple(parse_rational(c) for c in part.split(","))
        except PolyParseError as e:
            raise ConfigError(f"in [hyperplanes] forms: {e}") from e
        if len(form) != n + 1:
            raise ConfigError(
                f"form has {len(form)} coefficients, curve needs {n + 1}"
            )
        forms.append(form)
    if not forms:
        raise ConfigError("empty hyperplane family")

    sweep = cp["sweep"]
    try:
        r_min = sweep.getfloat("r_min")
        r_max = sweep.getfloat("r_max")
        r_points = sweep.getint("r_points")
        tol = sweep.getfloat("tol", fallback=QUAD_TOL)
    except ValueError as e:
        raise ConfigError(f"in [sweep]: {e}") from e
    if r_min is None or r_max is None or r_points is None:
        raise ConfigError("[sweep] needs r_min, r_max, r_points")
    if r_min <= 0:
        raise ConfigError("r_min must be positive")
    if r_max <= r_min:
        raise ConfigError("r_max must exceed r_min")
    if r_points < 2:
        raise ConfigError("r_points must be at least 2")
    if tol <= 0:
        raise ConfigError("tol must be positive")
    return RunConfig(curve=coords, hyperplanes=tuple(forms), r_min=r_min,
                     r_max=r_max, r_points=r_points, tol=tol)


def serialize_config(cfg: RunConfig) -> str:
    """Canonical text form; parse_config(serialize_config(c)) == c."""
    lines = [
        "[curve]",
        "coords = " + "; ".join(str(p) for p in cfg.curve),
        "",
        "[hyperplanes]",
        "forms = " + "; ".join(
            ", ".join(str(c) for c in f) for f in cfg.hyperplanes
        ),
        "",
        "[sweep]",
        f"r_min = {cfg.r_min!r}",
        f"r_max = {cfg.r_max!r}",
        f"r_points = {cfg.r_points}",
        f"tol = {cfg.tol!r}",
        "",
    ]
    return "\n".join(lines)


def _build(cfg: RunConfig):
    x = normalize(list(cfg.curve))
    if not x.is_nondegenerate():
        raise DegenerateCurveError(
            "curve image lies in a hyperplane (Wronskian vanishes identically)"
        )
    hp = general_position_tuples(cfg.hyperplanes, cfg.n)
    return x, hp


def _emit(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _cmd_check(cfg: RunConfig, out: Optional[str]) -> int:
    buf = io.StringIO()
    x = normalize(list(cfg.curve))
    primitive = tuple(x.coords) == tuple(cfg.curve)
    buf.write(f"curve: n={cfg.n}, degrees="
              f"{[p.degree for p in x.coords]}\n")
    buf.write(f"primitive lift given: {'yes' if primitive else 'no (reduced)'}\n")
    code = 0
    if x.is_nondegenerate():
        buf.write("nondegenerate: yes (Wronskian not identically zero)\n")
    else:
        buf.write("nondegenerate: NO (image lies in a hyperplane)\n")
        code = 1
    try:
        hp = general_position_tuples(cfg.hyperplanes, cfg.n)
        buf.write(f"hyperplanes: {len(hp.forms)} forms, "
                  f"{len(hp.tuples)} general-position tuples\n")
        buf.write("common zero of all forms: none\n")
    except ValueError as e:
        buf.write(f"hyperplanes: ERROR: {e}\n")
        code = 1
    buf.write(f"radius grid: {cfg.r_points} points in "
              f"[{cfg.r_min:g}, {cfg.r_max:g}], tol={cfg.tol:g}\n")
    _emit(buf.getvalue(), out)
    return code


def _report_exit(report) -> int:
    return 0 if report.all_converged() else 2


def _cmd_identities(cfg: RunConfig, out: Optional[str]) -> int:
    """Exact identity battery on the configured curve: the derivative of each
    derived-curve coordinate vector against its closed form, and the two-row
    minor identity for every distance-one pair at every level."""
    x, hp = _build(cfg)
    n = x.n
    rows = ["identity,level,detail,residual_zero"]
    failures = 0
    wedges = {d: associated(x, d) for d in range(n + 2)}
    for d in range(1, n + 1):
        partner = leibniz_partner(x, d)
        for (ia, p), (ib, q) in zip(wedges[d].coords, partner.coords):
            ok = p.derivative() == q
            failures += not ok
            rows.append(f"derivative,{d},{ia.elements},{int(ok)}")
    for d in range(1, n + 1):
        Xd = wedges[d]
        Yp = leibniz_partner(x, d)
        lower, upper = wedges[d - 1], wedges[d + 1]
        idx = multi_indices(n, d)
        for ia, jb in itertools.combinations(idx, 2):
            if len(set(ia.elements) ^ set(jb.elements)) != 2:
                continue
            inter = tuple(sorted(set(ia.elements) & set(jb.elements)))
            union = tuple(sorted(set(ia.elements) | set(jb.elements)))
            sign = two_row_identity_sign(ia, jb)
            lhsp = (Xd.coord(ia.elements) * Yp.coord(jb.elements)
                    - Xd.coord(jb.elements) * Yp.coord(ia.elements))
            rhsp = lower.coord(inter) * upper.coord(union)
            diff = lhsp - rhsp.scale(GaussRational.of(sign))
            ok = diff.is_zero()
            failures += not ok
            rows.append(
                f"two_row,{d},{ia.elements}|{jb.elements},{int(ok)}"
            )
    _emit("\n".join(rows) + "\n", out)
    return 0 if failures == 0 else 2


def run(command: str, cfg: RunConfig, r: Optional[float] = None,
        out: Optional[str] = None, tol: Optional[float] = None,
        verify_name: Optional[str] = None) -> int:
    if tol is not None:
        if tol <= 0:
            raise ConfigError("tol must be positive")
        cfg = replace(cfg, tol=tol)
    if command == "check":
        return _cmd_check(cfg, out)

    if command == "compute":
        if r is None:
            raise ConfigError("compute needs --r")
        if r <= 0:
            raise ConfigError("--r must be positive")
        x, hp = _build(cfg)
        report = full_sweep(x, hp, [r], tol=cfg.tol)
        _emit(report.to_csv(), out)
        return _report_exit(report)

    if command == "sweep":
        x, hp = _build(cfg)
        report = full_sweep(x, hp, cfg.radii(), tol=cfg.tol)
        _emit(report.to_csv(), out)
        return _report_exit(report)

    if command == "verify":
        if verify_name not in VERIFY_NAMES:
            raise ConfigError(
                f"unknown verify target {verify_name!r}; "
                f"choose from {', '.join(VERIFY_NAMES)}"
            )
        if verify_name == "identities":
            return _cmd_identities(cfg, out)
        x, hp = _build(cfg)
        radii = [r] if r is not None else cfg.radii()
        if verify_name == "cartan":
            report = verify_cartan(x, hp, radii, tol=cfg.tol)
        elif verify_name == "lemma55":
            report = verify_lemma55(x, hp, None, radii, tol=cfg.tol)
        elif verify_name == "growth":
            report = verify_height_growth(x, radii, tol=cfg.tol)
        elif verify_name == "mcquillan":
            report = mcquillan_monitor(x, hp, radii, tol=cfg.tol)
        else:  # prop62, all levels stacked with a level column
            parts = []
            code = 0
            for d in range(1, x.n + 1):
                rep = verify_prop62(x, hp, d, radii, tol=cfg.tol)
                for row in rep.rows:
                    row.values["d"] = d
                parts.append(rep)
                code = max(code, _report_exit(rep))
            merged = parts[0]
            merged.columns = ("d",) + tuple(parts[0].columns)
            merged.rows = [row for p in parts for row in p.rows]
            _emit(merged.to_csv(), out)
            return code
        _emit(report.to_csv(), out)
        return _report_exit(report)

    raise ConfigError(f"unknown command {command!r}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="nevlab",
        description="Heights, proximities and derived-curve inequality "
                    "checks for polynomial curves in projective space.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("check", "compute", "sweep"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True)
        p.add_argument("--r", type=float, default=None)
        p.add_argument("--out", default=None)
        p.add_argument("--tol", type=float, default=None)
    p = sub.add_parser("verify")
    p.add_argument("name", choices=VERIFY_NAMES)
    p.add_argument("--config", required=True)
    p.add_argument("--r", type=float, default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--tol", type=float, default=None)
    args = parser.parse_args(argv)

    try:
        with open(args.config, encoding="utf-8") as fh:
            cfg = parse_config(fh.read())
        return run(args.command, cfg, r=args.r, out=args.out, tol=args.tol,
                   verify_name=getattr(args, "name", None))
    except (ConfigError, DegenerateCurveError, ValueError, OSError) as e:
        print(f"nevlab: error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
