import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from nevlab.gauss import (
    GR_I,
    GR_ONE,
    GR_ZERO,
    Divisor,
    GaussPoly,
    GaussRational,
    PolyParseError,
    RootFindingError,
    parse_poly,
    parse_rational,
    poly_gcd,
    roots,
    squarefree_decomposition,
)

from conftest import rand_poly, rand_rational


fracs = st.fractions(min_value=-50, max_value=50, max_denominator=20)
rationals = st.builds(GaussRational, fracs, fracs)
polys = st.builds(
    lambda coeffs: GaussPoly(tuple(coeffs)),
    st.lists(rationals, min_size=0, max_size=6),
)


class TestRational:
    def test_field_ops(self):
        a = GaussRational(Fraction(1, 2), Fraction(-3))
        b = GaussRational(Fraction(2), Fraction(1, 3))
        assert complex(a * b) == pytest.approx(complex(a) * complex(b))
        assert complex(a / b) == pytest.approx(complex(a) / complex(b))
        assert a * b / b == a
        assert not GR_ZERO
        assert GR_I * GR_I == -GR_ONE

    def test_division_by_zero(self):
        with pytest.raises(ZeroDivisionError):
            GR_ONE / GR_ZERO

    @given(rationals, rationals)
    def test_mul_commutes(self, a, b):
        assert a * b == b * a


class TestPoly:
    def test_canonical_trim(self):
        p = GaussPoly((GR_ONE, GR_ZERO, GR_ZERO))
        assert p.degree == 0
        assert GaussPoly.zero().degree == -1

    def test_divmod(self):
        p = parse_poly("z^3 - 2z + 5")
        d = parse_poly("z - 1")
        q, r = p.divmod(d)
        assert q * d + r == p
        assert r.degree < d.degree

    @given(polys, polys)
    @settings(max_examples=60)
    def test_ring_distributes(self, p, q):
        r = parse_poly("1 + z")
        assert (p + q) * r == p * r + q * r

    @given(polys)
    def test_derivative_linear_in_shift(self, p):
        assert (p + p).derivative() == p.derivative() + p.derivative()

    def test_eval_matches_complex_horner(self, rng):
        for _ in range(20):
            p = rand_poly(rng, max_deg=6)
            z = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
            want = sum(complex(c) * z ** k for k, c in enumerate(p.coeffs))
            assert p.eval(z) == pytest.approx(want, abs=1e-12)


class TestGcd:
    def test_common_factor(self):
        a = parse_poly("(z - 1)*(z + 2)")
        b = parse_poly("(z - 1)*(z - 3)")
        g = poly_gcd(a, b)
        assert g == parse_poly("z - 1").monic()

    def test_coprime(self):
        g = poly_gcd(parse_poly("z - 1"), parse_poly("z + 1"))
        assert g.degree == 0

    @given(polys, polys)
    @settings(max_examples=40)
    def test_gcd_divides_both(self, p, q):
        if p.is_zero() or q.is_zero():
            return
        g = poly_gcd(p, q)
        assert (p % g).is_zero()
        assert (q % g).is_zero()


class TestSquarefree:
    def test_yun_multiplicities(self):
        p = parse_poly("(z - 1)^2 * (z + 1) * (z - 2)^3")
        parts = squarefree_decomposition(p)
        by_mult = {m: f for f, m in parts}
        assert by_mult[1].monic() == parse_poly("z + 1").monic()
        assert by_mult[2].monic() == parse_poly("z - 1").monic()
        assert by_mult[3].monic() == parse_poly("z - 2").monic()

    def test_reassembles(self, rng):
        for _ in range(10):
            p = rand_poly(rng, max_deg=3, nonzero=True) * rand_poly(
                rng, max_deg=2, nonzero=True)
            prod = GaussPoly((p.coeffs[-1],))
            for f, m in squarefree_decomposition(p):
                prod = prod * f.monic() ** m
            assert prod == p.monic().scale(p.coeffs[-1])


class TestRoots:
    def test_multiplicities_and_values(self):
        p = parse_poly("(z - 2)^2 * (z + 3) * z^2")
        d = roots(p)
        assert d.ord_at_zero == 2
        pts = {complex(round(r.real), round(r.imag)): m for r, m in d.points}
        assert pts == {(2 + 0j): 2, (-3 + 0j): 1}

    def test_constant_poly_empty_divisor(self):
        assert roots(parse_poly("3")).is_empty()
        with pytest.raises(ValueError):
            roots(GaussPoly.zero())

    def test_against_sympy(self, rng):
        z = sympy.symbols("z")
        for _ in range(15):
            p = rand_poly(rng, max_deg=5, nonzero=True)
            if p.degree < 1:
                continue
            expr = sum(
                (sympy.Rational(c.re) + sympy.Rational(c.im) * sympy.I)
                * z ** k
                for k, c in enumerate(p.coeffs)
            )
            want = sorted(
                (complex(r) for r in sympy.Poly(expr, z).nroots(n=30)),
                key=lambda c: (round(c.real, 6), round(c.imag, 6)),
            )
            mine = roots(p)
            got = sorted(
                [complex(r) for r, m in mine.points for _ in range(m)]
                + [0j] * mine.ord_at_zero,
                key=lambda c: (round(c.real, 6), round(c.imag, 6)),
            )
            assert len(got) == len(want)
            for g, w in zip(got, want):
                assert g == pytest.approx(w, abs=1e-7)

    def test_divisor_total(self):
        p = parse_poly("z^4 - 1")
        assert roots(p).total_multiplicity() == 4


class TestParser:
    @pytest.mark.parametrize(
        "text,expect",
        [
            ("1/2 + z", ("1/2", "1")),
            ("i*z^2", ("0", "0", "i")),
            ("(1+2i)*(z - 1)", None),
            ("-z^3", ("0", "0", "0", "-1")),
        ],
    )
    def test_grammar(self, text, expect):
        p = parse_poly(text)
        if expect is not None:
            assert len(p.coeffs) == len(expect)

    def test_round_trip(self, rng):
        for _ in range(25):
            p = rand_poly(rng, max_deg=5)
            assert parse_poly(str(p)) == p

    def test_error_has_position(self):
        with pytest.raises(PolyParseError) as exc:
            parse_poly("z^ + 1")
        assert "column" in str(exc.value)
        assert exc.value.pos >= 0

    def test_rational_round_trip(self, rng):
        for _ in range(20):
            c = rand_rational(rng)
            assert parse_rational(str(c)) == c
