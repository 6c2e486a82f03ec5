"""Analytic functionals: counting functions, circle quadrature, heights,
Weil functions, proximity averages, and the log-derivative comparison.

Quadrature is a composite midpoint rule with node doubling; midpoint nodes
sit at half-steps so they never land on theta = 2*pi*k/N.  A node that still
hits a singularity is offset by a further half-step; if that fails too the
result is flagged unconverged rather than patched silently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .curve import CurveLift, DegenerateCurveError, associated, coordinate_gcd
from .exterior import WedgeForm, WedgeVector, det_exact, multi_indices
from .gauss import Divisor, GaussPoly, roots

__all__ = [
    "RadialValue",
    "QUAD_TOL",
    "QUAD_INITIAL_NODES",
    "QUAD_NODE_CAP",
    "counting",
    "circle_integral",
    "adaptive_midpoint",
    "height_bar",
    "height_T",
    "weil",
    "SelectorContext",
    "proximity_m",
    "proximity_hyperplane",
    "mu",
    "pointwise_logderiv_check",
]

QUAD_TOL = 1e-6
QUAD_INITIAL_NODES = 256
QUAD_NODE_CAP = 2 ** 20


@dataclass(frozen=True)
class RadialValue:
    """A value of a radial functional, with its quadrature provenance."""

    r: float
    value: float
    quadrature_nodes: int
    converged: bool


def counting(D: Divisor, r: float) -> float:
    """N(r) = ord_0 * log r + sum over 0 < |rho| <= r of mult * log(r / |rho|)."""
    if r <= 0:
        raise ValueError("counting function needs r > 0")
    total = D.ord_at_zero * math.log(r)
    for rho, mult in D.points:
        a = abs(rho)
        if a <= r:
            total += mult * math.log(r / a)
    return total


def _sample(g, nodes: np.ndarray, h: float):
    """Evaluate a vector integrand; offset singular nodes by a half-step."""
    vals = np.atleast_2d(np.asarray(g(nodes), dtype=float))
    bad = ~np.isfinite(vals)
    if bad.any():
        cols = np.unique(np.nonzero(bad)[1])
        retry = np.atleast_2d(np.asarray(g(nodes[cols] + h / 2), dtype=float))
        patch = vals[:, cols]
        finite_retry = np.isfinite(retry)
        vals[:, cols] = np.where(finite_retry & ~np.isfinite(patch), retry, patch)
    clean = np.isfinite(vals).all(axis=1)
    return vals, clean


def adaptive_midpoint(
    g: Callable[[np.ndarray], np.ndarray],
    tol: float = QUAD_TOL,
    initial: int = QUAD_INITIAL_NODES,
    cap: int = QUAD_NODE_CAP,
):
    """Midpoint circle averages (1/2pi integral) of a vector integrand.

    g maps an array of theta nodes to an array of shape (k, len(nodes)).
    Returns (values, converged, nodes_used) with per-component flags.
    """
    prev = None
    n = initial
    while True:
        h = 2 * math.pi / n
        nodes = (np.arange(n) + 0.5) * h
        vals, clean = _sample(g, nodes, h)
        if not np.isfinite(vals).all():
            vals = np.where(np.isfinite(vals), vals, 0.0)
        est = vals.mean(axis=1)
        if prev is not None and len(prev) == len(est):
            converged = (np.abs(est - prev) < tol) & clean
            if converged.all() or 2 * n > cap:
                return est, converged, n
        elif 2 * n > cap:
            return est, clean & False, n
        prev = est
        n *= 2


def circle_integral(
    g: Callable[[np.ndarray], np.ndarray],
    tol: float = QUAD_TOL,
    r: float = 1.0,
) -> RadialValue:
    """Circle average of a scalar integrand g(theta); g should accept arrays."""

    def gv(nodes: np.ndarray) -> np.ndarray:
        out = np.asarray(g(nodes), dtype=float)
        if out.shape != nodes.shape:
            out = np.array([g(t) for t in nodes], dtype=float)
        return out.reshape(1, -1)

    values, converged, nodes = adaptive_midpoint(gv, tol=tol)
    return RadialValue(r=r, value=float(values[0]), quadrature_nodes=nodes,
                       converged=bool(converged[0]))


def _wedge_coeff_arrays(X) -> list:
    if isinstance(X, GaussPoly):
        return [X.complex_coeffs()]
    return [p.complex_coeffs() for p in X.polys()]


def _eval_stack(arrays: Sequence[np.ndarray], z: np.ndarray) -> np.ndarray:
    return np.vstack([np.polynomial.polynomial.polyval(z, a) for a in arrays])


def height_bar(X, r: float, tol: float = QUAD_TOL) -> RadialValue:
    """Circle average of log |X(r e^{i theta})| (Euclidean norm of the
    Pluecker coordinates).  X may be a WedgeVector or a bare GaussPoly."""
    if r <= 0:
        raise ValueError("height_bar needs r > 0")
    if isinstance(X, GaussPoly):
        if X.is_zero():
            raise ValueError("height of the zero polynomial")
    elif X.is_zero():
        raise ValueError("height of the zero wedge")
    arrays = _wedge_coeff_arrays(X)

    def g(theta: np.ndarray) -> np.ndarray:
        z = r * np.exp(1j * theta)
        vals = _eval_stack(arrays, z)
        with np.errstate(divide="ignore"):
            return 0.5 * np.log((np.abs(vals) ** 2).sum(axis=0)).reshape(1, -1)

    values, converged, nodes = adaptive_midpoint(g, tol=tol)
    return RadialValue(r=r, value=float(values[0]), quadrature_nodes=nodes,
                       converged=bool(converged[0]))


def level_divisor(x: CurveLift, d: int) -> Divisor:
    """Divisor of the exact gcd of the Pluecker coordinates of X^d."""
    X = associated(x, d)
    if X.is_zero():
        raise DegenerateCurveError(f"curve degenerate at level d={d}")
    g = coordinate_gcd(X.polys())
    return Divisor.empty() if g.is_constant() else roots(g)


def height_T(x: CurveLift, d: int, r: float, tol: float = QUAD_TOL) -> float:
    """T_{d,f}(r) = mean of log|X^d| minus the counting function of the
    common-zero divisor of X^d; T_{0,f} is identically zero."""
    if d == 0:
        return 0.0
    X = associated(x, d)
    if X.is_zero():
        raise DegenerateCurveError(f"curve degenerate at level d={d}")
    return height_bar(X, r, tol).value - counting(level_divisor(x, d), r)


def weil(F: WedgeForm, v) -> float:
    """-log(|F(v)| / |v|) with Euclidean norms on Pluecker coordinates.

    v is a complex coordinate vector in lexicographic multi-index order (or a
    WedgeVector evaluated elsewhere).  Returns +inf when v lies on F = 0.
    """
    vec = np.asarray(v, dtype=complex).ravel()
    coeffs = F.coeff_array()
    if len(vec) != len(coeffs):
        raise ValueError("coordinate count mismatch in Weil function")
    norm = float(np.linalg.norm(vec))
    if norm == 0:
        raise ValueError("Weil function of the zero vector")
    fv = abs(complex(coeffs @ vec))
    if fv == 0.0:
        return math.inf
    return -math.log(fv / norm)


class SelectorContext:
    """Per-theta tuple selection and wedge-form evaluation for a hyperplane
    configuration (the single map from C into the tuple set, chosen by the
    level-1 maximum with lowest-index tie break)."""

    def __init__(self, n: int, forms: Sequence, tuples: Sequence):
        if not tuples:
            raise ValueError("selector needs at least one tuple")
        self.n = n
        self.forms = [tuple(f) for f in forms]
        self.tuples = [tuple(t) for t in tuples]
        self.tuple_mats = [
            np.array([[complex(c) for c in self.forms[i]] for i in t], dtype=complex)
            for t in self.tuples
        ]
        self._minors: dict = {}

    @classmethod
    def from_config(cls, config) -> "SelectorContext":
        return cls(config.n, config.forms, config.tuples)

    def minors(self, d: int) -> np.ndarray:
        """Exact minor matrices per tuple: entry [t, a, b] pairs the wedge of
        tuple t's forms at index set I_a with Pluecker coordinate M_b."""
        if d not in self._minors:
            idx = multi_indices(self.n, d)
            mats = []
            for t in self.tuples:
                rows = []
                for ia in idx:
                    wf = [self.forms[t[i]] for i in ia.elements]
                    rows.append(
                        [
                            complex(det_exact([[f[j] for j in mb.elements] for f in wf]))
                            if d > 0
                            else 1.0
                            for mb in idx
                        ]
                    )
                mats.append(rows)
            self._minors[d] = np.array(mats, dtype=complex)
        return self._minors[d]

    def scores(self, xvals: np.ndarray) -> np.ndarray:
        """Level-1 Weil sums per tuple: sum_i lambda_i(x) at each node."""
        lognorm = 0.5 * np.log((np.abs(xvals) ** 2).sum(axis=0))
        out = np.empty((len(self.tuples), xvals.shape[1]))
        with np.errstate(divide="ignore"):
            for k, mat in enumerate(self.tuple_mats):
                lv = mat @ xvals
                out[k] = (self.n + 1) * lognorm - np.log(np.abs(lv)).sum(axis=0)
        return out

    def select(self, xvals: np.ndarray):
        """Argmax tuple per node (ties go to the lowest index) and the max."""
        s = self.scores(xvals)
        sel = np.argmax(s, axis=0)
        return sel, s[sel, np.arange(s.shape[1])]

    def level_lambda_mean(self, d: int, wedge_vals: np.ndarray,
                          sel: np.ndarray) -> np.ndarray:
        """Mean over all size-d index sets I of lambda_I(X^d) per node, using
        the selected tuple at each node."""
        lognorm = 0.5 * np.log((np.abs(wedge_vals) ** 2).sum(axis=0))
        out = np.empty(wedge_vals.shape[1])
        minors = self.minors(d)
        with np.errstate(divide="ignore"):
            for t in np.unique(sel):
                mask = sel == t
                lv = minors[t] @ wedge_vals[:, mask]
                out[mask] = lognorm[mask] - np.log(np.abs(lv)).mean(axis=0)
        return out


def proximity_m(x: CurveLift, d: int, L, r: float,
                tol: float = QUAD_TOL) -> RadialValue:
    """m_{d,f}(L, r): circle average of the mean over all size-d subsets I of
    the Weil function of the wedge form L_{z,I} applied to X^d, the tuple at
    each node chosen by the level-1 selector.  m_0 is identically zero."""
    if r <= 0:
        raise ValueError("proximity needs r > 0")
    if d == 0:
        return RadialValue(r=r, value=0.0, quadrature_nodes=0, converged=True)
    if not (1 <= d <= x.n + 1):
        raise ValueError(f"proximity level d={d} out of range")
    X = associated(x, d)
    if X.is_zero():
        raise DegenerateCurveError(f"curve degenerate at level d={d}")
    ctx = L if isinstance(L, SelectorContext) else SelectorContext.from_config(L)
    x_arrays = [p.complex_coeffs() for p in x.coords]
    w_arrays = _wedge_coeff_arrays(X)

    def g(theta: np.ndarray) -> np.ndarray:
        z = r * np.exp(1j * theta)
        xv = _eval_stack(x_arrays, z)
        sel, _ = ctx.select(xv)
        wv = xv if d == 1 else _eval_stack(w_arrays, z)
        return ctx.level_lambda_mean(d, wv, sel).reshape(1, -1)

    values, converged, nodes = adaptive_midpoint(g, tol=tol)
    return RadialValue(r=r, value=float(values[0]), quadrature_nodes=nodes,
                       converged=bool(converged[0]))


def proximity_hyperplane(x: CurveLift, form, r: float,
                         tol: float = QUAD_TOL) -> RadialValue:
    """Classical single-hyperplane proximity m_f(H, r) for a linear form."""
    arrays = [p.complex_coeffs() for p in x.coords]
    coeffs = np.array([complex(c) for c in form], dtype=complex)

    def g(theta: np.ndarray) -> np.ndarray:
        z = r * np.exp(1j * theta)
        xv = _eval_stack(arrays, z)
        with np.errstate(divide="ignore"):
            lam = 0.5 * np.log((np.abs(xv) ** 2).sum(axis=0)) - np.log(
                np.abs(coeffs @ xv)
            )
        return lam.reshape(1, -1)

    values, converged, nodes = adaptive_midpoint(g, tol=tol)
    return RadialValue(r=r, value=float(values[0]), quadrature_nodes=nodes,
                       converged=bool(converged[0]))


def _chart_derivatives(x: CurveLift, tuple_forms, z: complex):
    """Tuple-coordinate values and chart-ratio derivatives at a point.

    Applies the n+1 forms to the lift, takes the chart of the maximum-modulus
    coordinate (the ratios then all have modulus <= 1), and differentiates the
    ratios w_i = y_i / y_k0.
    """
    ys = []
    for f in tuple_forms:
        acc = GaussPoly.zero()
        for c, p in zip(f, x.coords):
            if c and not p.is_zero():
                acc = acc + p.scale(c)
        ys.append(acc)
    yv = np.array([p.eval(z) for p in ys], dtype=complex)
    ydv = np.array([p.derivative().eval(z) for p in ys], dtype=complex)
    k0 = int(np.argmax(np.abs(yv)))
    if yv[k0] == 0:
        raise ValueError("curve point is the zero vector in tuple coordinates")
    w = []
    wp = []
    for i in range(len(ys)):
        if i == k0:
            continue
        w.append(yv[i] / yv[k0])
        wp.append((ydv[i] * yv[k0] - yv[i] * ydv[k0]) / yv[k0] ** 2)
    return np.array(w), np.array(wp)


def mu(x: CurveLift, tuple_forms, z: complex) -> float:
    """Generalized Weil function for the divisor of an (n+1)-tuple of forms:
    -1/2 log( sum |w_i'|^2 / sum |w_i'/w_i|^2 ) in the chart of the
    maximum-modulus tuple coordinate.  Nonnegative away from the divisor;
    -inf signals a point where every chart derivative vanishes."""
    w, wp = _chart_derivatives(x, tuple_forms, z)
    num = float((np.abs(wp) ** 2).sum())
    if num == 0.0:
        return -math.inf
    if np.any(w == 0):
        return math.inf
    den = float((np.abs(wp / w) ** 2).sum())
    return -0.5 * math.log(num / den)


def _logplus(v: float) -> float:
    return 0.5 * math.log(v) if v > 1.0 else 0.0


def pointwise_logderiv_check(x: CurveLift, tuple_forms, z: complex):
    """Both sides of the pointwise log-derivative comparison
    log+ ||Tf|| + mu(f') - lambda_[0](g) <= log+ ||T_D f||_D + O(1),
    in the explicit chart coordinates.  Returns (lhs, rhs)."""
    w, wp = _chart_derivatives(x, tuple_forms, z)
    num = float((np.abs(wp) ** 2).sum())
    if num == 0.0:
        raise ValueError("all chart derivatives vanish at this point")
    if np.any(w == 0):
        raise ValueError("point lies on the tuple divisor")
    den = float((np.abs(wp / w) ** 2).sum())
    log_tf = _logplus(num)
    lam0 = _logplus(1.0 / num)
    mu_val = -0.5 * math.log(num / den)
    lhs = log_tf + mu_val - lam0
    rhs = _logplus(den)
    return lhs, rhs
