import math

import numpy as np
import pytest
from scipy.integrate import quad

from nevlab.curve import associated, normalize
from nevlab.exterior import WedgeForm
from nevlab.gauss import GR_I, GR_ONE, GR_ZERO, Divisor, parse_poly, roots
from nevlab.harness import general_position_tuples
from nevlab.nevanlinna import (
    QUAD_TOL,
    RadialValue,
    SelectorContext,
    adaptive_midpoint,
    circle_integral,
    counting,
    height_T,
    height_bar,
    mu,
    pointwise_logderiv_check,
    proximity_hyperplane,
    proximity_m,
    weil,
)

from conftest import corpus, monomial_lift


ONE, ZERO = GR_ONE, GR_ZERO


class TestCounting:
    def test_weights(self):
        d = Divisor(2, ((3 + 0j, 1), (-5 + 0j, 2)))
        r = 10.0
        want = 2 * math.log(r) + math.log(r / 3) + 2 * math.log(r / 5)
        assert counting(d, r) == pytest.approx(want, abs=1e-14)

    def test_points_outside_radius_ignored(self):
        d = Divisor(0, ((4 + 0j, 1),))
        assert counting(d, 2.0) == 0.0

    def test_needs_positive_radius(self):
        with pytest.raises(ValueError):
            counting(Divisor.empty(), 0.0)


class TestQuadrature:
    def test_matches_scipy_on_smooth_integrand(self):
        def g(t):
            return np.exp(np.cos(t)) * np.cos(np.sin(t))

        rv = circle_integral(g, tol=1e-9)
        want, _ = quad(g, 0, 2 * math.pi)
        assert rv.converged
        assert rv.value == pytest.approx(want / (2 * math.pi), abs=1e-9)

    def test_log_singularity_on_circle(self):
        # mean of log|e^{it} - 1| over the circle is 0 (Jensen); the
        # integrand blows up at t = 0 but no midpoint node hits it exactly
        def g(t):
            return np.log(np.abs(np.exp(1j * t) - 1))

        rv = circle_integral(g, tol=1e-6)
        assert rv.converged
        assert rv.value == pytest.approx(0.0, abs=1e-5)

    def test_singular_node_offset(self):
        # integrand infinite exactly at the first midpoint node of every
        # refinement; the half-step offset must keep the estimate finite
        def g(t):
            with np.errstate(divide="ignore"):
                out = np.log(np.abs(t - t[0])) if len(t) else t
            return out.reshape(1, -1)

        values, converged, _ = adaptive_midpoint(g, tol=1e-3, cap=2048)
        assert np.isfinite(values).all()

    def test_unconverged_flag(self):
        rng_state = {"k": 0}

        def g(t):
            # deliberately non-Cauchy sequence of estimates
            rng_state["k"] += 1
            return np.full((1, len(t)), float(rng_state["k"]))

        values, converged, nodes = adaptive_midpoint(g, tol=1e-12, cap=1024)
        assert not converged.all()
        assert nodes <= 1024


class TestHeightBar:
    def test_jensen_single_root_inside(self):
        rv = height_bar(parse_poly("z - 2"), 5.0)
        assert rv.value == pytest.approx(math.log(5), abs=1e-9)

    def test_jensen_single_root_outside(self):
        rv = height_bar(parse_poly("z - 2"), 1.0)
        assert rv.value == pytest.approx(math.log(2), abs=1e-9)

    def test_line_closed_form(self):
        x = monomial_lift(0, 1)
        for r in (0.5, 2.0, 40.0):
            rv = height_bar(associated(x, 1), r)
            assert rv.value == pytest.approx(0.5 * math.log(1 + r * r), abs=1e-8)

    def test_zero_rejected(self):
        from nevlab.gauss import GaussPoly
        with pytest.raises(ValueError):
            height_bar(GaussPoly.zero(), 2.0)


class TestHeightT:
    def test_level_zero_is_zero(self):
        assert height_T(monomial_lift(0, 1), 0, 7.0) == 0.0

    def test_wronskian_level_constant_curve(self):
        # for (1, z) the Wronskian is 1, so T at the top level is 0
        assert height_T(monomial_lift(0, 1), 2, 9.0) == pytest.approx(0.0, abs=1e-9)

    def test_common_zero_subtracted(self):
        # (1, z^2): x wedge x' = (2z), so T_2 = hbar_2 - log r = log 2
        x = monomial_lift(0, 2)
        r = 25.0
        t2 = height_T(x, 2, r)
        assert t2 == pytest.approx(math.log(2), abs=1e-8)

    def test_growth_in_r(self):
        x = monomial_lift(0, 1, 2)
        assert height_T(x, 1, 50.0) > height_T(x, 1, 5.0)


class TestWeil:
    def test_positive_away_from_hyperplane(self):
        F = WedgeForm(1, ((ONE, ZERO),))
        # v = (1, 3): |F(v)|/|v| < 1 so the Weil function is positive
        assert weil(F, [1, 3]) > 0

    def test_infinite_on_hyperplane(self):
        F = WedgeForm(1, ((ONE, ZERO),))
        assert weil(F, [0, 1]) == math.inf

    def test_scaling_invariance(self):
        F = WedgeForm(1, ((ONE, GR_I),))
        v = np.array([1 + 2j, 0.5 - 1j])
        assert weil(F, v) == pytest.approx(weil(F, 10 * v), abs=1e-12)


class TestProximity:
    def setup_method(self):
        self.x, self.cfg = corpus()["conic"]
        self.ctx = SelectorContext.from_config(self.cfg)

    def test_level_zero(self):
        rv = proximity_m(self.x, 0, self.cfg, 3.0)
        assert rv.value == 0.0 and rv.converged

    def test_nonnegative_up_to_quadrature(self):
        for d in (1, 2, 3):
            rv = proximity_m(self.x, d, self.ctx, 4.0)
            assert rv.converged
            assert rv.value > -1e-6

    def test_selector_reused_across_levels(self):
        # the level-1 argmax is a single map; scores of the selected tuple
        # must dominate at every sampled point
        theta = np.linspace(0.1, 6.2, 50)
        z = 3.0 * np.exp(1j * theta)
        xv = np.vstack([p.eval_many(z) for p in self.x.coords])
        scores = self.ctx.scores(xv)
        sel, smax = self.ctx.select(xv)
        assert np.all(smax >= scores - 1e-12)

    def test_fmt_constancy_single_hyperplane(self):
        x = monomial_lift(0, 1)
        form = (ONE, ONE)
        div = roots(parse_poly("1 + z"))
        vals = []
        for r in (2.0, 7.0, 30.0):
            m = proximity_hyperplane(x, form, r).value
            vals.append(m + counting(div, r) - height_T(x, 1, r))
        assert max(vals) - min(vals) < 1e-8


class TestMu:
    def test_line_standard_forms(self):
        x = monomial_lift(0, 1)
        forms = [(ONE, ZERO), (ZERO, ONE)]
        assert mu(x, forms, 2.0) == pytest.approx(math.log(2), abs=1e-12)
        assert mu(x, forms, 0.5) == pytest.approx(math.log(2), abs=1e-12)

    def test_nonnegative_off_divisor(self, rng):
        x = monomial_lift(0, 1, 2)
        forms = [(ONE, ZERO, ZERO), (ZERO, ONE, ZERO), (ZERO, ZERO, ONE)]
        for _ in range(25):
            z = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
            if abs(z) < 1e-3:
                continue
            v = mu(x, forms, z)
            assert v >= -1e-12

    def test_infinite_on_divisor(self):
        x = monomial_lift(0, 1)
        forms = [(ONE, ZERO), (ZERO, ONE)]
        # z = 0 lies on the hyperplane of the second form
        assert mu(x, forms, 0.0) == math.inf


class TestLogDerivComparison:
    def test_inequality_holds_pointwise(self, rng):
        x = monomial_lift(0, 1, 2)
        forms = [(ONE, ZERO, ZERO), (ZERO, ONE, ZERO), (ZERO, ZERO, ONE)]
        checked = 0
        for _ in range(40):
            z = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
            if abs(z) < 1e-2:
                continue
            lhs, rhs = pointwise_logderiv_check(x, forms, z)
            assert lhs <= rhs + 1e-10
            checked += 1
        assert checked > 20
