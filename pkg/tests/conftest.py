import random
from fractions import Fraction

import pytest

from nevlab.gauss import GR_ONE, GR_ZERO, GaussPoly, GaussRational, parse_poly
from nevlab.curve import normalize
from nevlab.harness import general_position_tuples


def rand_rational(rng, span=4):
    re = Fraction(rng.randint(-span, span), rng.randint(1, span))
    im = Fraction(rng.randint(-span, span), rng.randint(1, span))
    return GaussRational(re, im)


def rand_poly(rng, max_deg=4, span=4, nonzero=False):
    deg = rng.randint(0, max_deg)
    coeffs = [rand_rational(rng, span) for _ in range(deg + 1)]
    p = GaussPoly(tuple(coeffs))
    if nonzero and p.is_zero():
        return GaussPoly((GaussRational(Fraction(1), Fraction(0)),))
    return p


def rand_forms(rng, n, count=None, span=3):
    """Random forms on P^n; retries until some (n+1)-subset is invertible."""
    count = count or n + 1
    while True:
        forms = [tuple(rand_rational(rng, span) for _ in range(n + 1))
                 for _ in range(count)]
        try:
            return general_position_tuples(forms, n)
        except ValueError:
            continue


def monomial_lift(*exponents):
    """Lift with coordinates z^e for the given exponents."""
    coords = []
    for e in exponents:
        c = [GR_ZERO] * e + [GR_ONE]
        coords.append(GaussPoly(tuple(c)))
    return normalize(coords)


@pytest.fixture
def rng():
    return random.Random(20260826)


def corpus():
    """The three reference curves with their hyperplane families."""
    one, zero = GR_ONE, GR_ZERO
    line = normalize([parse_poly("1"), parse_poly("z")])
    line_cfg = general_position_tuples(
        [(one, zero), (zero, one), (one, one)], 1)
    conic = normalize([parse_poly("1"), parse_poly("z"), parse_poly("z^2")])
    conic_cfg = general_position_tuples(
        [(one, zero, zero), (zero, one, zero), (zero, zero, one),
         (one, one, one)], 2)
    ramified = normalize([parse_poly("1"), parse_poly("z^2")])
    ram_cfg = general_position_tuples(
        [(one, zero), (zero, one), (one, one)], 1)
    return {
        "line": (line, line_cfg),
        "conic": (conic, conic_cfg),
        "ramified": (ramified, ram_cfg),
    }
