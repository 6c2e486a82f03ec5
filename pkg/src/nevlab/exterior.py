"""Exterior algebra over V = C^{n+1} with exact polynomial coordinates.

Wedge (Pluecker) coordinates of row matrices, the determinant pairing of a
wedge of linear forms against a wedge vector, and the two-row determinant
identity relating neighbouring exterior powers.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .gauss import GR_ONE, GR_ZERO, GaussPoly, GaussRational

__all__ = [
    "MultiIndex",
    "WedgeVector",
    "WedgeForm",
    "multi_indices",
    "wedge_rows",
    "pair",
    "index_distance",
    "two_row_identity_sign",
    "pluecker_relations_check",
    "det_exact",
    "merge_sign",
]


@dataclass(frozen=True)
class MultiIndex:
    """A strictly increasing d-subset of {0, ..., n}."""

    elements: tuple
    n: int

    def __post_init__(self):
        for a, b in zip(self.elements, self.elements[1:]):
            if a >= b:
                raise ValueError("multi-index must be strictly increasing")
        if self.elements and not (
            0 <= self.elements[0] and self.elements[-1] <= self.n
        ):
            raise ValueError("multi-index element out of range")

    @staticmethod
    def of(elements, n: int) -> "MultiIndex":
        return MultiIndex(tuple(elements), n)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)


def multi_indices(n: int, d: int) -> list:
    """All size-d multi-indices in {0,...,n}, lexicographic order."""
    return [MultiIndex(c, n) for c in itertools.combinations(range(n + 1), d)]


def det_exact(rows: Sequence[Sequence]) -> object:
    """Determinant by cofactor expansion; works over GaussPoly or GaussRational."""
    m = len(rows)
    if m == 0:
        raise ValueError("empty determinant")
    if any(len(r) != m for r in rows):
        raise ValueError("determinant of a non-square matrix")
    if m == 1:
        return rows[0][0]
    first = rows[0]
    rest = rows[1:]
    acc = None
    for j in range(m):
        entry = first[j]
        if not entry:
            continue
        minor = det_exact([r[:j] + r[j + 1:] for r in rest])
        term = entry * minor
        if j % 2:
            term = -term
        acc = term if acc is None else acc + term
    if acc is None:
        acc = first[0] * GaussPoly.zero() if isinstance(first[0], GaussPoly) else (
            first[0] - first[0]
        )
    return acc


@dataclass(frozen=True)
class WedgeVector:
    """Element of wedge^d V with GaussPoly Pluecker coordinates.

    coords maps every size-d MultiIndex (lexicographic key order) to a
    polynomial; the degree-0 wedge has a single coordinate at the empty index.
    """

    n: int
    degree: int
    coords: tuple  # tuple of (MultiIndex, GaussPoly), lexicographic

    def __post_init__(self):
        expected = multi_indices(self.n, self.degree)
        keys = [mi for mi, _ in self.coords]
        if keys != expected:
            raise ValueError("wedge coordinates must cover all multi-indices in order")

    @staticmethod
    def from_dict(n: int, degree: int, mapping: dict) -> "WedgeVector":
        coords = tuple(
            (mi, mapping.get(mi.elements, mapping.get(mi, GaussPoly.zero())))
            for mi in multi_indices(n, degree)
        )
        return WedgeVector(n, degree, coords)

    def coord(self, elements) -> GaussPoly:
        key = tuple(elements)
        for mi, p in self.coords:
            if mi.elements == key:
                return p
        raise KeyError(key)

    def polys(self) -> list:
        return [p for _, p in self.coords]

    def is_zero(self) -> bool:
        return all(p.is_zero() for _, p in self.coords)

    def eval_many(self, z: np.ndarray) -> np.ndarray:
        """Float coordinates at the points z; shape (n_coords, len(z))."""
        return np.vstack([p.eval_many(np.asarray(z)) for _, p in self.coords])


@dataclass(frozen=True)
class WedgeForm:
    """Wedge of d linear forms on V, kept in the given order.

    Linearly dependent component forms are allowed; the pairing then
    degenerates to zero rather than erroring.
    """

    n: int
    forms: tuple  # d vectors, each a length-(n+1) tuple of GaussRational

    def __post_init__(self):
        for f in self.forms:
            if len(f) != self.n + 1:
                raise ValueError("form length must be n+1")

    @property
    def degree(self) -> int:
        return len(self.forms)

    def pluecker_coords(self) -> list:
        """Exact minor determinants, one per size-d multi-index (lex order)."""
        d = self.degree
        if d == 0:
            return [GR_ONE]
        out = []
        for mi in multi_indices(self.n, d):
            minor = [[f[j] for j in mi.elements] for f in self.forms]
            out.append(det_exact(minor))
        return out

    def apply(self, X: WedgeVector) -> GaussPoly:
        """Exact pairing with a wedge vector via the Pluecker expansion."""
        if X.degree != self.degree:
            raise ValueError("degree mismatch in wedge pairing")
        acc = GaussPoly.zero()
        for c, (_, p) in zip(self.pluecker_coords(), X.coords):
            if c and not p.is_zero():
                acc = acc + p.scale(c)
        return acc

    def coeff_array(self) -> np.ndarray:
        return np.array([complex(c) for c in self.pluecker_coords()], dtype=complex)


def wedge_rows(rows: Sequence[Sequence[GaussPoly]], n: int) -> WedgeVector:
    """Pluecker coordinates of the d x (n+1) row matrix: the coordinate at I
    is the exact determinant of the minor with columns I.  d = 0 gives the
    scalar wedge 1."""
    d = len(rows)
    if d > n + 1:
        raise ValueError("more rows than the ambient dimension allows")
    rows = [list(r) for r in rows]
    for r in rows:
        if len(r) != n + 1:
            raise ValueError("ragged rows: each row must have length n+1")
    coords = []
    for mi in multi_indices(n, d):
        if d == 0:
            coords.append((mi, GaussPoly.one()))
        else:
            minor = [[r[j] for j in mi.elements] for r in rows]
            coords.append((mi, det_exact(minor)))
    return WedgeVector(n, d, tuple(coords))


def pair(F: WedgeForm, X: WedgeVector, at: complex) -> complex:
    """Numeric value of the determinant pairing at a point, computed via the
    Pluecker expansion sum over multi-indices."""
    if F.degree != X.degree:
        raise ValueError("degree mismatch in wedge pairing")
    return F.apply(X).eval(at)


def index_distance(I: MultiIndex, J: MultiIndex) -> int:
    """Number of elements in which two same-size multi-indices differ."""
    if len(I) != len(J):
        raise ValueError("multi-indices must have the same size")
    return len(set(I.elements) - set(J.elements))


def merge_sign(sequence: Sequence[int]) -> int:
    """Parity sign (+1/-1) of the permutation sorting a sequence of distinct ints."""
    inv = 0
    seq = list(sequence)
    for a, b in itertools.combinations(range(len(seq)), 2):
        if seq[a] > seq[b]:
            inv += 1
    return -1 if inv % 2 else 1


def two_row_identity_sign(I: MultiIndex, J: MultiIndex) -> int:
    """Sign eps in (L_I wedge L_J)(y wedge y') = eps * L_{I&J}(X^{d-1}) * L_{I|J}(X^{d+1}).

    With K = I&J, i the element of I\\J and j the element of J\\I, the sign is
    the product of the merge parities of (K, i), (K, j), and (K, i, j): each
    bordered determinant in the two-row identity carries the row order
    (K..., extra), and the (d+1)-level determinant carries (K..., i, j).
    """
    if index_distance(I, J) != 1:
        raise ValueError("two-row identity requires index distance 1")
    K = sorted(set(I.elements) & set(J.elements))
    i = next(iter(set(I.elements) - set(J.elements)))
    j = next(iter(set(J.elements) - set(I.elements)))
    return (
        merge_sign(K + [i]) * merge_sign(K + [j]) * merge_sign(K + [i, j])
    )


def pluecker_relations_check(X: WedgeVector) -> bool:
    """True iff all quadratic Pluecker relations vanish identically (exact)."""
    n, d = X.n, X.degree
    if not (1 <= d <= n):
        raise ValueError("relations check requires 1 <= d <= n")
    lookup = {mi.elements: p for mi, p in X.coords}

    def signed(elements) -> tuple:
        """(sign, coordinate) with antisymmetric sign; zero on repeats."""
        if len(set(elements)) != len(elements):
            return 0, GaussPoly.zero()
        return merge_sign(elements), lookup[tuple(sorted(elements))]

    for S in itertools.combinations(range(n + 1), d - 1):
        for T in itertools.combinations(range(n + 1), d + 1):
            acc = GaussPoly.zero()
            for k, t in enumerate(T):
                s1, p1 = signed(list(S) + [t])
                if s1 == 0:
                    continue
                rest = T[:k] + T[k + 1:]
                p2 = lookup[rest]
                term = (p1 * p2).scale(GaussRational.of(s1))
                if k % 2:
                    term = -term
                acc = acc + term
            if not acc.is_zero():
                return False
    return True
