"""Verification harness: hyperplane configurations, index-pair collections,
the telescoping identity, and the radial inequality checks (Cartan-style
defect bound, the derived-curve comparison at each level, height growth, and
the tautological-inequality monitor).

All radial functionals for one report row are integrated on shared quadrature
nodes, so identities that hold pointwise in theta survive to the reported
numbers up to float rounding.
"""

from __future__ import annotations

import io
import itertools
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .curve import (
    CurveLift,
    DegenerateCurveError,
    associated,
    coordinate_gcd,
    leibniz_partner,
)
from .exterior import MultiIndex, det_exact, multi_indices
from .gauss import Divisor, GaussRational, roots
from .nevanlinna import (
    QUAD_TOL,
    SelectorContext,
    adaptive_midpoint,
    counting,
)

__all__ = [
    "HyperplaneConfig",
    "general_position_tuples",
    "BalancedResult",
    "balanced_check",
    "PairCollection",
    "distance_one_collection",
    "telescoping_identity",
    "MarginReport",
    "SweepReport",
    "Evaluator",
    "verify_cartan",
    "verify_lemma55",
    "verify_prop62",
    "verify_height_growth",
    "mcquillan_monitor",
    "full_sweep",
]


@dataclass(frozen=True)
class HyperplaneConfig:
    """A family of linear forms on P^n together with the (n+1)-tuples of
    indices that are in general position (coefficient matrix invertible)."""

    n: int
    forms: Tuple[Tuple[GaussRational, ...], ...]
    tuples: Tuple[Tuple[int, ...], ...]


def general_position_tuples(forms: Sequence[Sequence[GaussRational]],
                            n: int) -> HyperplaneConfig:
    """Enumerate all (n+1)-subsets of the forms with nonzero determinant.

    Errors when no such tuple exists; that is equivalent to the forms having
    a common zero in P^n, which makes the whole pipeline inapplicable.
    """
    forms = tuple(tuple(f) for f in forms)
    if not forms:
        raise ValueError("need at least one linear form")
    for f in forms:
        if len(f) != n + 1:
            raise ValueError(f"form has {len(f)} coefficients, expected {n + 1}")
        if not any(f):
            raise ValueError("zero linear form in configuration")
    tuples = []
    for t in itertools.combinations(range(len(forms)), n + 1):
        mat = [list(forms[i]) for i in t]
        if det_exact(mat):
            tuples.append(t)
    if not tuples:
        raise ValueError(
            "no general-position tuple: the forms have a common zero"
        )
    return HyperplaneConfig(n=n, forms=forms, tuples=tuple(tuples))


@dataclass(frozen=True)
class BalancedResult:
    balanced: bool
    counts: Tuple[Tuple[object, int], ...]
    empty: bool


def balanced_check(pairs: Sequence[Tuple[object, object]]) -> BalancedResult:
    """Whether every member index set occurs in the same number of pairs."""
    counts: Dict[object, int] = {}
    for a, b in pairs:
        counts[a] = counts.get(a, 0) + 1
        counts[b] = counts.get(b, 0) + 1
    if not counts:
        return BalancedResult(balanced=False, counts=(), empty=True)
    freqs = set(counts.values())
    return BalancedResult(
        balanced=len(freqs) == 1,
        counts=tuple(sorted(counts.items(), key=str)),
        empty=False,
    )


@dataclass(frozen=True)
class PairCollection:
    """Unordered pairs of size-d index sets in {0..n} at distance one
    (symmetric difference of size two)."""

    n: int
    degree: int
    pairs: Tuple[Tuple[MultiIndex, MultiIndex], ...]


def distance_one_collection(n: int, d: int) -> PairCollection:
    idx = multi_indices(n, d)
    pairs = []
    for a, b in itertools.combinations(idx, 2):
        if len(set(a.elements) ^ set(b.elements)) == 2:
            pairs.append((a, b))
    return PairCollection(n=n, degree=d, pairs=tuple(pairs))


def telescoping_identity(a: Sequence) -> Tuple[object, object]:
    """lhs = sum_{d=1}^{n} (n+1-d) * (-a_{d-1} + 2 a_d - a_{d+1}) against
    rhs = -n a_0 + (n+1) a_1 - a_{n+1}, for a sequence a_0 .. a_{n+1}."""
    if len(a) < 2:
        raise ValueError("telescoping identity needs a_0 .. a_{n+1}, n >= 0")
    n = len(a) - 2
    lhs = a[0] - a[0]
    for d in range(1, n + 1):
        lhs = lhs + (n + 1 - d) * (-a[d - 1] + 2 * a[d] - a[d + 1])
    rhs = -n * a[0] + (n + 1) * a[1] - a[n + 1]
    return lhs, rhs


@dataclass
class MarginReport:
    """One radius of a verification: margin = rhs - lhs, so the inequality
    under test reads margin >= -slack."""

    r: float
    lhs: float
    rhs: float
    margin: float
    converged: bool
    values: Dict[str, float] = field(default_factory=dict)


@dataclass
class SweepReport:
    columns: Tuple[str, ...]
    rows: List[MarginReport]

    def _cell(self, row: MarginReport, col: str):
        if col == "r":
            return row.r
        if col in ("lhs", "rhs", "margin"):
            return getattr(row, col)
        if col == "converged":
            return int(row.converged)
        return row.values[col]

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(",".join(self.columns) + "\n")
        for row in self.rows:
            cells = []
            for col in self.columns:
                v = self._cell(row, col)
                cells.append(str(v) if isinstance(v, int) else f"{v:.12g}")
            buf.write(",".join(cells) + "\n")
        return buf.getvalue()

    def all_converged(self) -> bool:
        return all(row.converged for row in self.rows)


def _validate_radii(radii: Sequence[float]) -> List[float]:
    radii = [float(r) for r in radii]
    if not radii:
        raise ValueError("empty radius grid")
    if any(r <= 0 for r in radii):
        raise ValueError("radii must be positive")
    if any(b <= a for a, b in zip(radii, radii[1:])):
        raise ValueError("radii must be strictly increasing")
    return radii


class Evaluator:
    """Caches the derived-curve data of one lift and integrates any requested
    set of radial components on shared quadrature nodes."""

    def __init__(self, x: CurveLift, config: Optional[HyperplaneConfig] = None,
                 tol: float = QUAD_TOL):
        self.x = x
        self.n = x.n
        self.tol = tol
        self.config = config
        self.ctx = SelectorContext.from_config(config) if config else None
        if config is not None and config.n != x.n:
            raise ValueError("hyperplane configuration dimension mismatch")
        self._wedges: Dict[int, object] = {}
        self._partners: Dict[int, object] = {}
        self._arrays: Dict[object, list] = {}
        self._divisors: Dict[int, Divisor] = {}
        self._pair_pos: Dict[int, List[Tuple[int, int]]] = {}

    # -- exact/cached data ---------------------------------------------

    def wedge(self, d: int):
        if d not in self._wedges:
            X = associated(self.x, d)
            if X.is_zero():
                raise DegenerateCurveError(f"curve degenerate at level d={d}")
            self._wedges[d] = X
        return self._wedges[d]

    def partner(self, d: int):
        if d not in self._partners:
            self._partners[d] = leibniz_partner(self.x, d)
        return self._partners[d]

    def _coeffs(self, key, wedgevec) -> list:
        if key not in self._arrays:
            self._arrays[key] = [p.complex_coeffs() for p in wedgevec.polys()]
        return self._arrays[key]

    def level_divisor(self, d: int) -> Divisor:
        if d not in self._divisors:
            g = coordinate_gcd(self.wedge(d).polys())
            self._divisors[d] = Divisor.empty() if g.is_constant() else roots(g)
        return self._divisors[d]

    def counting_d(self, d: int, r: float) -> float:
        return counting(self.level_divisor(d), r)

    def pair_positions(self, d: int) -> List[Tuple[int, int]]:
        """Lexicographic positions of the full distance-one collection."""
        if d not in self._pair_pos:
            idx = multi_indices(self.n, d)
            where = {ia: k for k, ia in enumerate(idx)}
            coll = distance_one_collection(self.n, d)
            self._pair_pos[d] = [(where[a], where[b]) for a, b in coll.pairs]
        return self._pair_pos[d]

    # -- shared-node radial integration ----------------------------------

    def radial(self, r: float, names: Sequence[str],
               pair_sets: Optional[Dict[int, List[Tuple[int, int]]]] = None):
        """Integrate the named components at radius r on shared nodes.

        Component names: 'hbar:d', 'm:d', 'cartan', 'mumax', 'pairlam:d'
        (mean pair Weil function on y wedge y' for y = X^d), 'hbarpair:d'
        (log norm of y wedge y').  Returns ({name: (value, converged)}, nodes).
        """
        names = list(names)
        pair_sets = pair_sets or {}
        x_arrays = self._coeffs("x", self.wedge(1))
        if any(nm in ("mumax",) for nm in names):
            xd_arrays = [p.derivative().complex_coeffs() for p in self.x.coords]

        def stack(arrays, z):
            return np.vstack(
                [np.polynomial.polynomial.polyval(z, a) for a in arrays]
            )

        def g(theta: np.ndarray) -> np.ndarray:
            z = r * np.exp(1j * theta)
            cache: Dict[object, np.ndarray] = {}

            def wedge_vals(d):
                key = ("w", d)
                if key not in cache:
                    cache[key] = (
                        stack(x_arrays, z) if d == 1
                        else stack(self._coeffs(("w", d), self.wedge(d)), z)
                    )
                return cache[key]

            def partner_vals(d):
                key = ("p", d)
                if key not in cache:
                    cache[key] = stack(self._coeffs(("p", d), self.partner(d)), z)
                return cache[key]

            def selection():
                if "sel" not in cache:
                    if self.ctx is None:
                        raise ValueError("component needs a hyperplane config")
                    cache["sel"], cache["smax"] = self.ctx.select(wedge_vals(1))
                return cache["sel"]

            def pair_norm(d):
                key = ("pn", d)
                if key not in cache:
                    G, H = wedge_vals(d), partner_vals(d)
                    ai, bi = np.triu_indices(G.shape[0], 1)
                    if len(ai):
                        M = G[ai] * H[bi] - G[bi] * H[ai]
                        cache[key] = (np.abs(M) ** 2).sum(axis=0)
                    else:
                        cache[key] = np.zeros(G.shape[1])
                return cache[key]

            rows = []
            with np.errstate(divide="ignore", invalid="ignore"):
                for nm in names:
                    if nm == "cartan":
                        selection()
                        rows.append(cache["smax"])
                    elif nm == "mumax":
                        rows.append(self._mumax(stack(x_arrays, z),
                                                stack(xd_arrays, z)))
                    elif nm.startswith("hbarpair:"):
                        d = int(nm.split(":")[1])
                        rows.append(0.5 * np.log(pair_norm(d)))
                    elif nm.startswith("hbar:"):
                        d = int(nm.split(":")[1])
                        if d == 0:
                            rows.append(np.zeros(len(z)))
                        else:
                            w = wedge_vals(d)
                            rows.append(0.5 * np.log((np.abs(w) ** 2).sum(axis=0)))
                    elif nm.startswith("m:"):
                        d = int(nm.split(":")[1])
                        if d == 0:
                            rows.append(np.zeros(len(z)))
                        else:
                            sel = selection()
                            rows.append(
                                self.ctx.level_lambda_mean(d, wedge_vals(d), sel)
                            )
                    elif nm.startswith("pairlam:"):
                        d = int(nm.split(":")[1])
                        sel = selection()
                        positions = pair_sets.get(d) or self.pair_positions(d)
                        rows.append(
                            self._pair_lambda_mean(
                                d, wedge_vals(d), partner_vals(d),
                                pair_norm(d), sel, positions,
                            )
                        )
                    else:
                        raise ValueError(f"unknown radial component {nm!r}")
            return np.vstack(rows)

        values, converged, nodes = adaptive_midpoint(g, tol=self.tol)
        out = {
            nm: (float(v), bool(c))
            for nm, v, c in zip(names, values, converged)
        }
        return out, nodes

    def _pair_lambda_mean(self, d, G, H, pair_norm2, sel, positions):
        """Mean over the pair collection of the Weil function of the wedged
        pair of tuple forms applied to y wedge y'."""
        lognorm = 0.5 * np.log(pair_norm2)
        minors = self.ctx.minors(d)
        out = np.empty(G.shape[1])
        for t in np.unique(sel):
            mask = sel == t
            A = minors[t] @ G[:, mask]
            B = minors[t] @ H[:, mask]
            acc = np.zeros(mask.sum())
            for i, j in positions:
                acc += np.log(np.abs(A[i] * B[j] - A[j] * B[i]))
            out[mask] = lognorm[mask] - acc / len(positions)
        return out

    def _mumax(self, xv: np.ndarray, xpv: np.ndarray) -> np.ndarray:
        """Pointwise max over tuples of the generalized Weil function of the
        tuple divisor, in the chart of the largest tuple coordinate."""
        if self.ctx is None:
            raise ValueError("mumax needs a hyperplane config")
        best = np.full(xv.shape[1], -np.inf)
        for mat in self.ctx.tuple_mats:
            y = mat @ xv
            yd = mat @ xpv
            k0 = np.argmax(np.abs(y), axis=0)[None, :]
            y0 = np.take_along_axis(y, k0, axis=0)
            y0d = np.take_along_axis(yd, k0, axis=0)
            wp = (yd * y0 - y * y0d) / y0 ** 2
            num = (np.abs(wp) ** 2).sum(axis=0)
            den = (np.abs(wp / np.where(y == 0, np.nan, y / y0)) ** 2).sum(axis=0)
            mu_t = -0.5 * np.log(num / den)
            best = np.fmax(best, mu_t)
        return best


def _margin_rows(evaluator, radii, builder) -> List[MarginReport]:
    rows = []
    for r in _validate_radii(radii):
        rows.append(builder(r))
    return rows


def verify_cartan(x: CurveLift, config: HyperplaneConfig,
                  radii: Sequence[float], tol: float = QUAD_TOL) -> SweepReport:
    """Defect-relation check: integral of the largest tuple Weil sum against
    (n+1) T_f(r) - N_W(r).  Also records (n+1) m_1 as a cross check; the
    selector makes it equal to the lhs up to quadrature."""
    ev = Evaluator(x, config, tol)
    n = x.n
    n_w = ev.level_divisor(n + 1)
    n_1 = ev.level_divisor(1)

    def build(r):
        vals, _ = ev.radial(r, ["cartan", "hbar:1", "m:1"])
        t1 = vals["hbar:1"][0] - counting(n_1, r)
        lhs = vals["cartan"][0]
        nw = counting(n_w, r)
        rhs = (n + 1) * t1 - nw
        conv = all(c for _, c in vals.values())
        return MarginReport(
            r=r, lhs=lhs, rhs=rhs, margin=rhs - lhs, converged=conv,
            values={
                "T_1": t1,
                "N_W": nw,
                "m_1": vals["m:1"][0],
                "sum_check": (n + 1) * vals["m:1"][0],
            },
        )

    return SweepReport(
        columns=("r", "lhs", "rhs", "margin", "T_1", "N_W", "m_1",
                 "sum_check", "converged"),
        rows=_margin_rows(ev, radii, build),
    )


def verify_lemma55(x: CurveLift, config: HyperplaneConfig,
                   pairs: Optional[Sequence[Tuple[int, int]]] = None,
                   radii: Sequence[float] = (),
                   tol: float = QUAD_TOL) -> SweepReport:
    """Second-main-theorem seed: 2 m_1 - m_C against 2 Tbar - Tbar_{x wedge x'}
    for a balanced collection C of index pairs inside a tuple."""
    ev = Evaluator(x, config, tol)
    if pairs is None:
        positions = ev.pair_positions(1)
    else:
        positions = [tuple(sorted(p)) for p in pairs]
        check = balanced_check(positions)
        if check.empty:
            raise ValueError("empty pair collection")
        if not check.balanced:
            raise ValueError("pair collection is not balanced")
        if any(a == b or not (0 <= a <= x.n and 0 <= b <= x.n)
               for a, b in positions):
            raise ValueError("pair indices out of range")

    def build(r):
        vals, _ = ev.radial(
            r, ["m:1", "pairlam:1", "hbar:1", "hbarpair:1"],
            pair_sets={1: positions},
        )
        lhs = 2 * vals["m:1"][0] - vals["pairlam:1"][0]
        rhs = 2 * vals["hbar:1"][0] - vals["hbarpair:1"][0]
        conv = all(c for _, c in vals.values())
        return MarginReport(
            r=r, lhs=lhs, rhs=rhs, margin=rhs - lhs, converged=conv,
            values={
                "m_1": vals["m:1"][0],
                "m_C": vals["pairlam:1"][0],
                "hbar_1": vals["hbar:1"][0],
                "hbar_pair": vals["hbarpair:1"][0],
            },
        )

    return SweepReport(
        columns=("r", "lhs", "rhs", "margin", "m_1", "m_C", "hbar_1",
                 "hbar_pair", "converged"),
        rows=_margin_rows(ev, radii, build),
    )


def verify_prop62(x: CurveLift, config: HyperplaneConfig, d: int,
                  radii: Sequence[float], tol: float = QUAD_TOL) -> SweepReport:
    """Level-d second-difference comparison, computed by two routes on shared
    quadrature nodes: directly (-m_{d-1} + 2 m_d - m_{d+1} against the same
    second difference of bare heights) and through the pair collection on the
    level-d derived curve.  route_gap records their disagreement."""
    if not (1 <= d <= x.n):
        raise ValueError(f"level d={d} out of range 1..{x.n}")
    ev = Evaluator(x, config, tol)
    coll = distance_one_collection(x.n, d)
    check = balanced_check(coll.pairs)
    if check.empty or not check.balanced:
        raise ValueError("distance-one collection unbalanced or empty")

    names = [f"m:{d-1}", f"m:{d}", f"m:{d+1}",
             f"hbar:{d-1}", f"hbar:{d}", f"hbar:{d+1}",
             f"pairlam:{d}", f"hbarpair:{d}"]

    def build(r):
        vals, _ = ev.radial(r, names)
        m = [vals[f"m:{k}"][0] for k in (d - 1, d, d + 1)]
        h = [vals[f"hbar:{k}"][0] for k in (d - 1, d, d + 1)]
        lhs1 = -m[0] + 2 * m[1] - m[2]
        rhs1 = -h[0] + 2 * h[1] - h[2]
        lhs2 = 2 * m[1] - vals[f"pairlam:{d}"][0]
        rhs2 = 2 * h[1] - vals[f"hbarpair:{d}"][0]
        conv = all(c for _, c in vals.values())
        return MarginReport(
            r=r, lhs=lhs1, rhs=rhs1, margin=rhs1 - lhs1, converged=conv,
            values={
                "lhs_pair": lhs2,
                "rhs_pair": rhs2,
                "margin_pair": rhs2 - lhs2,
                "route_gap": abs((rhs1 - lhs1) - (rhs2 - lhs2)),
                "m_C": vals[f"pairlam:{d}"][0],
                "hbar_pair": vals[f"hbarpair:{d}"][0],
            },
        )

    return SweepReport(
        columns=("r", "lhs", "rhs", "margin", "lhs_pair", "rhs_pair",
                 "margin_pair", "route_gap", "m_C", "hbar_pair", "converged"),
        rows=_margin_rows(ev, radii, build),
    )


def verify_height_growth(x: CurveLift, radii: Sequence[float],
                         slack: float = 2.0,
                         tol: float = QUAD_TOL) -> SweepReport:
    """Checks T_{d,f}(r) <= 2^{d-1} T_f(r) + slack for every level d."""
    ev = Evaluator(x, None, tol)
    levels = list(range(1, x.n + 2))
    divisors = {d: ev.level_divisor(d) for d in levels}

    def build(r):
        vals, _ = ev.radial(r, [f"hbar:{d}" for d in levels])
        t = {d: vals[f"hbar:{d}"][0] - counting(divisors[d], r) for d in levels}
        excess = {d: t[d] - 2 ** (d - 1) * t[1] for d in levels}
        worst = max(excess.values())
        conv = all(c for _, c in vals.values())
        values = {f"T_{d}": t[d] for d in levels}
        values.update({f"excess_{d}": excess[d] for d in levels})
        return MarginReport(r=r, lhs=worst, rhs=slack, margin=slack - worst,
                            converged=conv, values=values)

    cols = (["r", "lhs", "rhs", "margin"]
            + [f"T_{d}" for d in levels]
            + [f"excess_{d}" for d in levels] + ["converged"])
    return SweepReport(columns=tuple(cols), rows=_margin_rows(ev, radii, build))


def mcquillan_monitor(x: CurveLift, config: HyperplaneConfig,
                      radii: Sequence[float],
                      tol: float = QUAD_TOL) -> SweepReport:
    """M(r) = [T_{f wedge f'}(r) - 2 T_f(r)] + circle average of the largest
    tuple mu + N_Ram(r); the tautological inequality predicts M(r) stays
    below a small multiple of max(1, log r)."""
    if x.n < 1:
        raise ValueError("monitor needs n >= 1")
    ev = Evaluator(x, config, tol)
    n_1 = ev.level_divisor(1)
    n_ram = ev.level_divisor(2)

    def build(r):
        vals, _ = ev.radial(r, ["hbar:1", "hbar:2", "mumax"])
        t1 = vals["hbar:1"][0] - counting(n_1, r)
        nram = counting(n_ram, r)
        t2 = vals["hbar:2"][0] - nram
        mu_int = vals["mumax"][0]
        m = (t2 - 2 * t1) + mu_int + nram
        conv = all(c for _, c in vals.values())
        return MarginReport(
            r=r, lhs=m, rhs=0.0, margin=-m, converged=conv,
            values={"T_1": t1, "T_2": t2, "mu_int": mu_int, "N_Ram": nram,
                    "normalized": m / max(1.0, math.log(r))},
        )

    return SweepReport(
        columns=("r", "lhs", "rhs", "margin", "T_1", "T_2", "mu_int",
                 "N_Ram", "normalized", "converged"),
        rows=_margin_rows(ev, radii, build),
    )


def full_sweep(x: CurveLift, config: HyperplaneConfig,
               radii: Sequence[float], tol: float = QUAD_TOL) -> SweepReport:
    """Everything at once: all heights and proximities, the ramification and
    Wronskian counting functions, and the defect-relation margin."""
    ev = Evaluator(x, config, tol)
    n = x.n
    levels = list(range(1, n + 2))
    divisors = {d: ev.level_divisor(d) for d in levels}
    names = [f"hbar:{d}" for d in levels] + [f"m:{d}" for d in levels] + ["cartan"]

    def build(r):
        vals, _ = ev.radial(r, names)
        t = {d: vals[f"hbar:{d}"][0] - counting(divisors[d], r) for d in levels}
        nw = counting(divisors[n + 1], r)
        nram = counting(divisors[2], r) if n >= 1 else 0.0
        lhs = vals["cartan"][0]
        rhs = (n + 1) * t[1] - nw
        conv = all(c for _, c in vals.values())
        values = {f"T_{d}": t[d] for d in levels}
        values["m_0"] = 0.0
        values.update({f"m_{d}": vals[f"m:{d}"][0] for d in levels})
        values["N_W"] = nw
        values["N_Ram"] = nram
        return MarginReport(r=r, lhs=lhs, rhs=rhs, margin=rhs - lhs,
                            converged=conv, values=values)

    cols = (["r"] + [f"T_{d}" for d in levels]
            + [f"m_{d}" for d in range(0, n + 2)]
            + ["N_W", "N_Ram", "lhs", "rhs", "margin", "converged"])
    return SweepReport(columns=tuple(cols), rows=_margin_rows(ev, radii, build))
