"""Tests for the extended operator ring.

The rewrite engine is validated against the monomial-action oracle, which
is implemented straight from the defining actions of d, J, delta and A_i
and shares no code with the product rules.
"""

from fractions import Fraction

from hypothesis import given, settings, strategies as st

import pytest

from odonf.coeffs import GaussianRational, PolyRing
import odonf.opalg as O
from odonf.opalg import (
    ExtMonomial,
    ExtOp,
    KIND_D,
    KIND_DELTA,
    KIND_INT,
    NotHCP,
    OpContext,
    act_on_monomial,
    act_on_poly,
    b_op,
    commutator,
    d_op,
    delta_op,
    dilation_op,
    ext_mul,
    from_gform,
    from_standard_form,
    gamma_op,
    identity_op,
    int_op,
    render_ext_op,
    structure_checks,
    to_gform,
    to_standard_form,
    x_op,
)

RING = PolyRing(("c0",))
CTX = OpContext(RING)
I = GaussianRational(0, 1)


def fe(x):
    return CTX.field(x)


def compose_actions(p, q, n):
    """Act with q, then with p, using only the oracle."""
    out = {}
    for m, c in act_on_monomial(q, n).items():
        for mm, cc in act_on_monomial(p, m).items():
            v = cc * c
            out[mm] = out.get(mm, fe(0)) + v
    return {m: c for m, c in out.items() if c}


def monomial_keys(max_x=3, max_b=3):
    kinds = st.sampled_from([KIND_D, KIND_INT, KIND_DELTA])

    def build(a, i, kind, b):
        if kind == KIND_INT and b == 0:
            b = 1
        return (a, i, kind, b)

    return st.builds(
        build,
        st.integers(min_value=0, max_value=max_x),
        st.integers(min_value=0, max_value=3),
        kinds,
        st.integers(min_value=0, max_value=max_b),
    )


def single_op(key, coeff):
    a, i, kind, b = key
    return ExtOp.single(CTX, coeff, a, i, kind, b)


class TestActionOracle:
    def test_delta_kills_positive_powers(self):
        dl = delta_op(CTX)
        assert act_on_monomial(dl, 0) == {0: fe(1)}
        for n in range(1, 6):
            assert act_on_monomial(dl, n) == {}

    def test_integration_is_zero_based(self):
        J = int_op(CTX)
        assert act_on_monomial(J, 3) == {4: fe(Fraction(1, 4))}
        assert act_on_monomial(int_op(CTX, 2), 0) == {2: fe(Fraction(1, 2))}

    def test_dilation_scales_by_root_of_unity(self):
        assert act_on_monomial(dilation_op(CTX, 2), 3) == {3: fe(-1)}
        assert act_on_monomial(dilation_op(CTX, 1), 1) == {1: fe(I)}

    def test_projector_b2_extracts_linear_part(self):
        img = act_on_poly(b_op(CTX, 2), {0: fe(1), 1: fe(5)})
        assert img == {1: fe(5)}

    def test_euler_operator_multiplies_by_degree(self):
        g = gamma_op(CTX)
        for n in range(5):
            want = {n: fe(n)} if n else {}
            assert act_on_monomial(g, n) == want

    def test_level_minus_two_gform_action(self):
        # level -2 component with Euler polynomial 3 - 2*Gamma at i = 0 and
        # dilation coefficients (I-1), -1, (-I-1), all scaled by c0/8
        c0 = RING.var("c0")
        s = fe(c0) * Fraction(1, 8)
        comp = O.GFormComponent(
            -2,
            {
                0: [s * 3, s * (-2)],
                1: [s * (I - GaussianRational(1, 0))],
                2: [-s],
                3: [s * (GaussianRational(-1, 0) - I)],
            },
            {},
        )
        p = from_gform(CTX, [comp])
        img = act_on_monomial(p, 2)
        asm = {"c0": Fraction(8)}
        assert set(img) == {4}
        assert img[4].num.eval(asm) / img[4].den.eval(asm) == \
            GaussianRational(Fraction(-2, 3), 0)
        # engine product agrees with composed oracle action
        q = ext_mul(p, d_op(CTX, 1))
        for n in range(7):
            assert act_on_monomial(q, n) == compose_actions(p, d_op(CTX), n)


class TestExtMul:
    def test_delta_after_x_vanishes(self):
        assert ext_mul(delta_op(CTX), x_op(CTX)).is_zero()

    def test_derivative_of_integral(self):
        assert ext_mul(d_op(CTX), int_op(CTX)) == identity_op(CTX)

    def test_integral_of_derivative(self):
        want = identity_op(CTX) - delta_op(CTX)
        assert ext_mul(int_op(CTX), d_op(CTX)) == want

    def test_dilation_past_x(self):
        lhs = ext_mul(dilation_op(CTX, 1), x_op(CTX))
        rhs = ext_mul(x_op(CTX), dilation_op(CTX, 1)).scale(I)
        assert lhs == rhs

    def test_double_integral_of_derivative(self):
        # J^2 d = J - x delta
        lhs = ext_mul(int_op(CTX, 2), d_op(CTX))
        want = int_op(CTX) - ExtOp.single(CTX, 1, x_pow=1, kind=KIND_DELTA)
        assert lhs == want

    def test_integral_power_of_delta(self):
        # J^3 delta = x^3 delta / 3!
        lhs = ext_mul(int_op(CTX, 3), delta_op(CTX))
        want = ExtOp.single(CTX, Fraction(1, 6), x_pow=3, kind=KIND_DELTA)
        assert lhs == want

    def test_fourth_derivative_past_x(self):
        lhs = ext_mul(d_op(CTX, 4), x_op(CTX))
        want = ext_mul(x_op(CTX), d_op(CTX, 4)) + d_op(CTX, 3).scale(4)
        assert lhs == want

    def test_dilations_commute_with_d4(self):
        for i in range(4):
            assert commutator(dilation_op(CTX, i), d_op(CTX, 4)).is_zero()

    @settings(max_examples=1000, deadline=None)
    @given(
        monomial_keys(),
        monomial_keys(),
        st.integers(min_value=-3, max_value=3),
        st.integers(min_value=-3, max_value=3),
    )
    def test_products_match_composed_actions(self, k1, k2, c1, c2):
        p = single_op(k1, fe(c1))
        q = single_op(k2, fe(c2))
        prod = ext_mul(p, q)
        for n in range(13):
            assert act_on_monomial(prod, n) == compose_actions(p, q, n)

    @settings(max_examples=200, deadline=None)
    @given(monomial_keys(2, 2), monomial_keys(2, 2), monomial_keys(2, 2))
    def test_associativity(self, k1, k2, k3):
        p, q, r = (single_op(k, fe(1)) for k in (k1, k2, k3))
        assert ext_mul(ext_mul(p, q), r) == ext_mul(p, ext_mul(q, r))

    @settings(max_examples=200, deadline=None)
    @given(monomial_keys(), monomial_keys())
    def test_grading_is_additive(self, k1, k2):
        prod = ext_mul(single_op(k1, fe(1)), single_op(k2, fe(1)))
        want = O._key_level(k1) + O._key_level(k2)
        assert all(r == want for r in prod.levels)


class TestTruncation:
    def test_floor_tracks_through_products(self):
        p = d_op(CTX, 4).truncate(-3)
        q = int_op(CTX, 2)
        prod = ext_mul(p, q)
        assert prod.ord_floor == -3 + (-2)
        with pytest.raises(O.TruncationExceeded):
            prod.component(prod.ord_floor - 1)

    def test_truncated_levels_are_unknown_not_zero(self):
        p = (d_op(CTX, 2) + delta_op(CTX)).truncate(0)
        assert p.component(1) == {}
        with pytest.raises(O.TruncationExceeded):
            p.component(-1)


class TestStandardAndGForm:
    def test_pure_power_standard_form(self):
        levels = to_standard_form(d_op(CTX, 4))
        assert len(levels) == 1
        lev = levels[0]
        assert lev.d_power == 4
        assert lev.f == {(0, 0): fe(1)}
        assert lev.g == {}

    def test_euler_monomial_is_gamma(self):
        comp = to_gform(gamma_op(CTX))[0]
        assert comp.d_power == 0
        assert comp.gamma_coeffs == {0: [fe(0), fe(1)]}

    def test_cubic_euler_expansion(self):
        # x^3 d^3 = Gamma(Gamma-1)(Gamma-2) = Gamma^3 - 3 Gamma^2 + 2 Gamma
        p = ExtOp.single(CTX, 1, x_pow=3, power=3)
        comp = to_gform(p)[0]
        assert comp.gamma_coeffs == {0: [fe(0), fe(2), fe(-3), fe(1)]}

    def test_low_delta_power_has_no_b_form(self):
        p = ExtOp.single(CTX, 1, x_pow=2, kind=KIND_DELTA, power=1)
        with pytest.raises(NotHCP):
            to_standard_form(p)

    def test_b_with_negative_power_rejected(self):
        lev = O.StdLevel(-1, {}, {2: fe(1)})
        with pytest.raises(NotHCP):
            from_standard_form(CTX, [lev])

    @settings(max_examples=200, deadline=None)
    @given(st.lists(
        st.tuples(monomial_keys(), st.integers(min_value=-4, max_value=4)),
        min_size=1, max_size=5))
    def test_round_trip_through_gform(self, raw):
        monos = []
        for (a, i, kind, b), c in raw:
            if kind == KIND_DELTA:
                b = a + b  # keep the d-power at least the x-power
            monos.append(ExtMonomial(a, i, kind, b, fe(c)))
        p = ExtOp.from_monomials(CTX, monos)
        assert from_gform(CTX, to_gform(p)) == p
        assert from_standard_form(CTX, to_standard_form(p)) == p


class TestStructureChecks:
    def test_pure_sixth_power(self):
        rep = structure_checks(d_op(CTX, 6), q=4)
        assert rep == {
            "is_monic": True,
            "totally_free_of_B": True,
            "in_centralizer_of": True,
        }

    def test_x_times_power_fails_centralizer(self):
        rep = structure_checks(ext_mul(x_op(CTX), d_op(CTX, 4)), q=4)
        assert rep["in_centralizer_of"] is False

    def test_dilation_term_passes_centralizer(self):
        p = d_op(CTX, 6) + ext_mul(dilation_op(CTX, 2), d_op(CTX, 2))
        assert structure_checks(p, q=4)["in_centralizer_of"] is True

    def test_b_term_detected(self):
        p = d_op(CTX, 2) + b_op(CTX, 3)
        rep = structure_checks(p, q=4)
        assert rep["totally_free_of_B"] is False

    def test_non_monic_top(self):
        p = d_op(CTX, 4).scale(2)
        assert structure_checks(p, q=4)["is_monic"] is False


class TestRendering:
    def test_simple_forms(self):
        assert render_ext_op(d_op(CTX, 6)) == "D^6"
        assert render_ext_op(CTX.zero()) == "0"

    def test_gamma_and_dilation_terms(self):
        p = d_op(CTX, 6) + ext_mul(
            (dilation_op(CTX, 1) + dilation_op(CTX, 3)).scale(Fraction(1, 2)),
            d_op(CTX, 3))
        s = render_ext_op(p)
        assert s == "D^6 + ((1/2)*A_1 + (1/2)*A_3)*D^3"

    def test_rendering_is_deterministic(self):
        p = gamma_op(CTX) + b_op(CTX, 2) + d_op(CTX, 1).scale(-3)
        assert render_ext_op(p) == render_ext_op(p)
