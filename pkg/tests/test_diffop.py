import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from odonf.coeffs import GaussianRational, PolyRing, RatFunc, inv
from odonf.diffop import (BranchViolation, DiffOp, InconsistentParameters,
                          KIND_NSA, KIND_SA, MissingParameter, NotMonic,
                          NotOrderFour, OperatorFamily, TruncationExceeded,
                          apply_family_constraints, bc_residual, build_L4,
                          build_L6, commutator_diffop, generic_order4,
                          split_order4, _taylor_div)

ONE = GaussianRational(1)


def gr(n, m=0):
    return GaussianRational(n, m)


def op_from(coeffs, trunc=30):
    lifted = {b: {e: gr(c) for e, c in f.items()} for b, f in coeffs.items()}
    return DiffOp(lifted, trunc, ONE)


small = st.integers(min_value=-4, max_value=4)


@st.composite
def diff_ops(draw, max_d=3, max_x=3):
    coeffs = {}
    for b in range(draw(st.integers(min_value=0, max_value=max_d)) + 1):
        f = {}
        for e in range(max_x + 1):
            c = draw(small)
            if c:
                f[e] = c
        if f:
            coeffs[b] = f
    return op_from(coeffs)


class TestArithmetic:
    @given(diff_ops(), diff_ops(), st.integers(min_value=0, max_value=6))
    @settings(max_examples=120, deadline=None)
    def test_product_agrees_with_composed_action(self, p, q, n):
        lhs = (p * q).apply({n: ONE})
        rhs = p.apply(q.apply({n: ONE}))
        assert lhs == rhs

    @given(diff_ops(), diff_ops(), diff_ops())
    @settings(max_examples=40, deadline=None)
    def test_associativity(self, p, q, r):
        assert ((p * q) * r).coeffs == (p * (q * r)).coeffs

    @given(diff_ops())
    @settings(max_examples=60, deadline=None)
    def test_adjoint_is_an_involution(self, p):
        assert p.adjoint().adjoint() == p

    @given(diff_ops(), diff_ops())
    @settings(max_examples=60, deadline=None)
    def test_adjoint_antihomomorphism(self, p, q):
        assert (p * q).adjoint() == q.adjoint() * p.adjoint()

    def test_adjoint_of_derivative_flips_sign(self):
        d = DiffOp.d(1, 10, ONE)
        assert d.adjoint() == -d

    def test_ord_is_additive(self):
        p = op_from({2: {0: 1, 1: 3}, 0: {2: 5}})
        q = op_from({3: {0: 2}, 1: {4: 1}})
        assert p.ord() == 2 and q.ord() == 3
        assert (p * q).ord() == 5

    def test_ord_counts_x_valuation(self):
        p = op_from({2: {3: 1}, 1: {0: 2}})
        assert p.ord() == 1

    def test_hom_components_sum_back(self):
        p = op_from({2: {0: 1, 1: 3, 2: 7}, 0: {0: 4, 1: 1}})
        total = op_from({})
        for m in range(-25, 3):
            total = total + p.hom_component(m)
        assert total == p

    def test_hom_component_beyond_truncation_raises(self):
        p = DiffOp({4: {0: ONE}}, 5, ONE)
        with pytest.raises(TruncationExceeded):
            p.hom_component(-2)

    def test_coefficient_beyond_truncation_raises(self):
        p = DiffOp({0: {0: ONE}}, 4, ONE)
        with pytest.raises(TruncationExceeded):
            p.coefficient(0, 5)

    def test_truncation_shrinks_through_products(self):
        p = DiffOp({4: {0: ONE}}, 16, ONE)
        q = DiffOp({2: {0: ONE}}, 16, ONE)
        assert (p * q).x_trunc == 12
        assert (q * p).x_trunc == 14

    def test_monicity(self):
        assert DiffOp.d(4, 8, ONE).is_monic()
        assert not op_from({4: {0: 2}}).is_monic()
        assert not op_from({4: {0: 1, 1: 1}}).is_monic()


class TestSeriesDivision:
    @given(st.lists(small, min_size=1, max_size=5),
           st.lists(small, min_size=1, max_size=5))
    @settings(max_examples=60, deadline=None)
    def test_division_inverts_multiplication(self, a, b):
        num = {i: gr(c) for i, c in enumerate(a) if c}
        den = {i: gr(c) for i, c in enumerate(b) if c}
        if not den:
            return
        from odonf.diffop import _smul
        prod = _smul(num, den, 1 << 30)
        quot = _taylor_div(prod, den, 10, ONE)
        expect = {e: c for e, c in num.items() if e <= 10}
        assert quot == expect


class TestOrderSixBuilder:
    def setup_method(self):
        names = ["c0", "c1", "b"] + ["d%d" % i for i in range(1, 13)]
        self.ring = PolyRing(names)
        self.l4 = generic_order4(self.ring)
        self.l6 = build_L6(self.l4)

    def g(self, name):
        return RatFunc.of(self.ring.var(name))

    def test_roundtrip_split(self):
        c2, c1, c0 = split_order4(self.l4)
        assert c2[0] == self.g("c0")
        assert c2[5] == self.g("d10")

    def test_slot_relations(self):
        g = self.g
        one = RatFunc.of(self.ring.one())

        def q(num, den):
            return one * num * inv(one * den)

        c0, c1, b = g("c0"), g("c1"), g("b")
        d = {i: g("d%d" % i) for i in range(1, 13)}
        expected = {
            (4, 1): q(3, 2) * c1,
            (3, 0): q(3, 2) * (c1 + (b + c1)),
            (4, 2): q(3, 2) * d[1],
            (3, 1): q(3, 2) * (d[1] * 2 + d[2]),
            (2, 0): q(3, 8) * c0 * c0 + q(5, 2) * d[1] + q(3, 2) * d[2]
                    + q(3, 2) * d[3],
            (4, 3): q(3, 2) * d[4],
            (3, 2): q(9, 2) * d[4] + q(3, 2) * d[5],
            (2, 1): q(3, 4) * (c0 * c1 + (d[4] * 5 + d[5] * 2 + d[6]) * 2),
            (1, 0): q(1, 4) * (c0 * (b + c1) * 3 + d[5] * 10 + d[6] * 6),
            (4, 4): q(3, 2) * d[7],
            (3, 3): d[7] * 6 + q(3, 2) * d[8],
            (2, 2): q(3, 8) * c1 * c1 + q(3, 4) * c0 * d[1] + d[7] * 15
                    + q(9, 2) * d[8] + q(3, 2) * d[9],
            # the two slots involving b are stated for the half-difference
            # (c2 - c1)/2 in the source table; written out in full b here
            (1, 1): q(3, 4) * b * c1 + q(3, 4) * c1 * c1
                    + q(3, 4) * c0 * d[2] + q(15, 2) * d[8] + d[9] * 3,
            (0, 0): q(3, 8) * b * b - q(1, 16) * c0 ** 3 + q(3, 8) * b * c1
                    - q(1, 8) * c1 * c1 - q(1, 2) * c0 * d[1]
                    + q(3, 4) * c0 * d[3] - d[7] * 3 + q(5, 2) * d[9],
        }
        for (dexp, xexp), want in expected.items():
            got = self.l6.coefficient(dexp, xexp)
            assert got == want, "slot d^%d x^%d" % (dexp, xexp)

    def test_rejects_wrong_order(self):
        with pytest.raises(NotOrderFour):
            build_L6(DiffOp.d(3, 16, RatFunc.of(self.ring.one())))

    def test_rejects_non_monic(self):
        one = RatFunc.of(self.ring.one())
        bad = DiffOp({4: {0: one * 2}}, 16, one)
        with pytest.raises(NotMonic):
            build_L6(bad)
        bad = DiffOp({4: {0: one}, 3: {0: one}}, 16, one)
        with pytest.raises(NotMonic):
            build_L6(bad)


class TestSelfAdjointConstraints:
    def setup_method(self):
        self.ring = PolyRing(["a", "w0", "w1", "w2", "w3", "w4"])

    def g(self, name):
        return RatFunc.of(self.ring.var(name))

    def fam(self, nu, **params):
        return OperatorFamily(KIND_SA, nu, params)

    def test_nu0_even_coefficient(self):
        a, w0, w1 = self.g("a"), self.g("w0"), self.g("w1")
        w2, w3 = self.g("w2"), self.g("w3")
        fam = self.fam(0, a=a, w0=w0, w1=w1, w2=w2, w3=w3, w4=self.g("w4"))
        out = apply_family_constraints(fam)
        want = (a * 8 + w0 ** 3 + w2 * w2 * 2 - w1 * w3 * 6) \
            * inv(w1 * w1)
        assert out.param("v0") == want

    def test_nu1_solves_the_zeroth_constraint(self):
        w0, w2, w3, w4 = (self.g(n) for n in ("w0", "w2", "w3", "w4"))
        fam = self.fam(1, w0=w0, w2=w2, w3=w3, w4=w4)
        out = apply_family_constraints(fam)
        one = RatFunc.of(self.ring.one())
        assert out.param("a") == -(w0 ** 3 + w2 * w2 * 2) * inv(one * 8)
        assert out.param("v0") == (w0 * w0 - w4 * 8) * 3 * inv(w2 * 4)

    def test_nu2_pins_the_quartic_tail(self):
        w0, w3 = self.g("w0"), self.g("w3")
        one = RatFunc.of(self.ring.one())
        out = apply_family_constraints(self.fam(2, w0=w0, w3=w3))
        assert out.param("a") == -(w0 ** 3) * inv(one * 8)
        assert out.param("w4") == w0 * w0 * inv(one * 8)

    def test_nu3_kills_the_next_coefficient(self):
        w0 = self.g("w0")
        out = apply_family_constraints(self.fam(3, w0=w0))
        assert not out.param("w5")
        assert out.param("w4") == w0 * w0 * inv(RatFunc.of(self.ring.one()) * 8)

    def test_constant_potential_forces_the_split_branch(self):
        out = apply_family_constraints(self.fam(3, w0=0, a=0))
        assert not out.param("a")
        with pytest.raises(InconsistentParameters):
            apply_family_constraints(self.fam(3, w0=2, w4=0))
        with pytest.raises(BranchViolation):
            apply_family_constraints(self.fam(3, w0=0, w6=1))

    def test_branch_violations(self):
        with pytest.raises(BranchViolation):
            apply_family_constraints(self.fam(0, a=1, w0=1, w2=1))
        with pytest.raises(BranchViolation):
            apply_family_constraints(self.fam(1, w1=1, w2=1))
        with pytest.raises(InconsistentParameters):
            apply_family_constraints(self.fam(1, w0=2, w2=1, a=5))

    def test_builder_requires_constraints(self):
        with pytest.raises(MissingParameter):
            build_L4(self.fam(0, a=1, w1=1))

    def test_missing_parameter(self):
        with pytest.raises(MissingParameter):
            apply_family_constraints(self.fam(0, w1=1))


class TestNonSelfAdjointConstraints:
    def setup_method(self):
        self.ring = PolyRing(["f1", "f2", "f3", "v0", "v1", "v2",
                              "K10", "K11", "K12"])

    def g(self, name):
        return RatFunc.of(self.ring.var(name))

    def test_nu0_solved_block(self):
        p = {n: self.g(n) for n in ("f1", "f2", "v0", "v1", "v2",
                                    "K10", "K11", "K12")}
        fam = OperatorFamily(KIND_NSA, 0, p)
        out = apply_family_constraints(fam)
        one = RatFunc.of(self.ring.one())
        f1, f2 = p["f1"], p["f2"]
        v0, v1, v2 = p["v0"], p["v1"], p["v2"]
        k10, k11, k12 = p["K10"], p["K11"], p["K12"]
        k14 = k10 * k11 + k12 * k12 * 3
        f3 = (k14 + f2 * f2 * 4 - f1 * f1 * v0 * 2) * inv(f1 * 12)
        assert out.param("K14") == k14
        assert out.param("f3") == f3
        assert out.param("f4") == (-(f2 * v0 * 4) - f1 * v1 - k10) \
            * inv(one * 24)
        assert out.param("f5") == (f1 * k12 * 3 - f1 * v2 - f3 * v0 * 6
                                   - f2 * v1 * 3) * inv(one * 60)
        # the Taylor division must reproduce the inputs it was solved from
        assert out.param("v0") == v0
        assert out.param("v1") == v1
        assert out.param("v2") == v2

    def test_nu1_derives_the_cubic_constant(self):
        p = {n: self.g(n) for n in ("f2", "f3", "v0", "v1", "K11", "K12")}
        out = apply_family_constraints(OperatorFamily(KIND_NSA, 1, p))
        one = RatFunc.of(self.ring.one())
        f2, k11, k12 = p["f2"], p["K11"], p["K12"]
        k10 = -(f2 * f2 * 4 + k12 * k12 * 3) * inv(k11)
        assert out.param("K10") == k10
        assert out.param("K14") == -(f2 * f2 * 4)
        assert out.param("f4") == (-(f2 * p["v0"] * 4) - k10) * inv(one * 24)
        assert out.param("f5") == -(p["f3"] * p["v0"] * 2 + f2 * p["v1"]) \
            * inv(one * 20)

    def test_nu2_forces_the_even_coefficient(self):
        p = {"f3": self.g("f3"), "f5": self.g("f2"),
             "K10": self.g("K10"), "K12": self.g("K12")}
        out = apply_family_constraints(OperatorFamily(KIND_NSA, 2, p))
        one = RatFunc.of(self.ring.one())
        assert out.param("f4") == -p["K10"] * inv(one * 24)
        assert out.param("K11") == -(p["K12"] ** 2 * 3) * inv(p["K10"])
        assert out.param("v0") == -(p["f5"] * 10) * inv(p["f3"])

    def test_nu2_cusp(self):
        fam = OperatorFamily(KIND_NSA, 2,
                             {"f3": 1, "f5": 2, "K10": 0, "K11": 3})
        out = apply_family_constraints(fam)
        assert not out.param("f4")
        assert not out.param("a")
        with pytest.raises(InconsistentParameters):
            apply_family_constraints(OperatorFamily(
                KIND_NSA, 2, {"f3": 1, "K10": 0, "K12": 1, "K11": 3}))

    def test_nu3_pins_everything(self):
        fam = OperatorFamily(KIND_NSA, 3, {"f4": 1, "K12": 2})
        out = apply_family_constraints(fam)
        assert out.param("K10") == GaussianRational(-24)
        assert out.param("K11") == GaussianRational(1, 0) / 2
        assert not out.param("f5")

    def test_nu_shape_enforced(self):
        with pytest.raises(BranchViolation):
            apply_family_constraints(OperatorFamily(
                KIND_NSA, 1, {"f1": 1, "f2": 1, "v0": 0, "v1": 0,
                              "K11": 1, "K12": 0}))


def _numeric_cases():
    return [
        ("sa nu=0", OperatorFamily(KIND_SA, 0, {
            "a": 2, "w0": 1, "w1": 3, "w2": -1, "w3": 2, "w4": 1})),
        ("sa nu=1", OperatorFamily(KIND_SA, 1, {
            "w0": 2, "w2": 3, "w3": 1, "w4": -2})),
        ("sa nu=2", OperatorFamily(KIND_SA, 2, {
            "w0": 2, "w3": 5, "w5": 1})),
        ("sa nu=3", OperatorFamily(KIND_SA, 3, {"w0": 4, "w6": 1})),
        ("sa split", OperatorFamily(KIND_SA, 3, {
            "w0": 0, "a": 0, "v0": 2, "v1": -1, "v3": 1})),
        ("nsa nu=0", OperatorFamily(KIND_NSA, 0, {
            "f1": 1, "f2": 2, "v0": -1, "v1": 3, "v2": 1,
            "K10": 2, "K11": -1, "K12": 3, "f6": 1})),
        ("nsa nu=1", OperatorFamily(KIND_NSA, 1, {
            "f2": 1, "f3": 2, "v0": 1, "v1": -2, "K11": 4, "K12": 2})),
        ("nsa nu=2", OperatorFamily(KIND_NSA, 2, {
            "f3": 1, "f5": 2, "K10": 3, "K12": 1, "f6": 1})),
        ("nsa nu=2 cusp", OperatorFamily(KIND_NSA, 2, {
            "f3": 1, "f5": 1, "K10": 0, "K11": 2})),
        ("nsa nu=3", OperatorFamily(KIND_NSA, 3, {
            "f4": 1, "K12": 2, "f7": 1})),
    ]


class TestCommutingPair:
    @pytest.mark.parametrize("label,fam", _numeric_cases(),
                             ids=[c[0] for c in _numeric_cases()])
    def test_pair_satisfies_the_curve(self, label, fam):
        out = apply_family_constraints(fam, x_trunc=16)
        l4 = build_L4(out, x_trunc=16)
        l6 = build_L6(l4)
        res = bc_residual(l4, l6, out.param("a"))
        assert not res, "nonzero residual in %s: %r" % (label, res.coeffs)

    @pytest.mark.parametrize("label,fam", _numeric_cases()[:4],
                             ids=[c[0] for c in _numeric_cases()[:4]])
    def test_pair_commutes(self, label, fam):
        out = apply_family_constraints(fam, x_trunc=16)
        l4 = build_L4(out, x_trunc=16)
        l6 = build_L6(l4)
        assert not commutator_diffop(l4, l6)

    def test_self_adjointness_of_the_even_family(self):
        out = apply_family_constraints(_numeric_cases()[0][1], x_trunc=12)
        l4 = build_L4(out, x_trunc=12)
        adj = l4.adjoint()
        assert l4.truncated(adj.x_trunc) == adj

    def test_odd_family_breaks_self_adjointness_by_its_odd_part(self):
        out = apply_family_constraints(_numeric_cases()[5][1], x_trunc=12)
        l4 = build_L4(out, x_trunc=12)
        adj = l4.adjoint()
        diff = l4.truncated(adj.x_trunc) - adj
        f = out.series("f", start=1)
        from odonf.diffop import _sdiff, _sscale
        df = _sdiff(f, 1)
        t = diff.x_trunc
        want = DiffOp.from_series(_sscale(df, ONE * 4), t, ONE, d_exp=1) \
            + DiffOp.from_series(_sscale(_sdiff(f, 2), ONE * 2), t, ONE)
        assert diff == want


class TestSlotDictionary:
    """The translation between family data (V, W, f, K) and the graded slots
    of the order-4 operator in standard form.  The table is normalized so
    that vhat = V/2; rows below are asserted against the built operator."""

    def test_self_adjoint_rows(self):
        ring = PolyRing(["a", "w0", "w1", "w2", "w3", "w4"])
        p = {n: RatFunc.of(ring.var(n))
             for n in ("a", "w0", "w1", "w2", "w3", "w4")}
        out = apply_family_constraints(OperatorFamily(KIND_SA, 0, p))
        l4 = build_L4(out)
        one = RatFunc.of(ring.one())
        half = inv(one * 2)
        v = {i: out.get("v%d" % i, one - one) for i in range(6)}
        vh = {i: v[i] * half for i in range(6)}
        w = p
        slots = {
            ("c0", 2, 0): vh[0] * 2,
            ("c1", 2, 1): vh[1] * 2,
            ("c2", 1, 0): vh[1] * 2,
            ("d1", 2, 2): vh[2] * 2,
            ("d2", 1, 1): vh[2] * 4,
            ("d3", 0, 0): vh[0] * vh[0] + vh[2] * 2 + w["w0"],
            ("d4", 2, 3): vh[3] * 2,
            ("d5", 1, 2): vh[3] * 6,
            ("d6", 0, 1): vh[0] * vh[1] * 2 + vh[3] * 6 + w["w1"],
            ("d7", 2, 4): vh[4] * 2,
            ("d8", 1, 3): vh[4] * 8,
            ("d9", 0, 2): vh[1] * vh[1] + vh[0] * vh[2] * 2 + vh[4] * 12
                          + w["w2"],
            ("d10", 2, 5): vh[5] * 2,
            ("d11", 1, 4): vh[5] * 10,
            ("d12", 0, 3): vh[0] * vh[3] * 2 + vh[1] * vh[2] * 2
                           + vh[5] * 20 + w["w3"],
        }
        for (name, dexp, xexp), want in slots.items():
            assert l4.coefficient(dexp, xexp) == want, name

    def test_odd_rows(self):
        ring = PolyRing(["f1", "f2", "v0", "v1", "v2",
                         "K10", "K11", "K12"])
        p = {n: RatFunc.of(ring.var(n)) for n in ring.names}
        out = apply_family_constraints(OperatorFamily(KIND_NSA, 0, p))
        l4 = build_L4(out)
        one = RatFunc.of(ring.one())
        half = inv(one * 2)
        v = {i: out.get("v%d" % i, one - one) for i in range(6)}
        f = {i: out.get("f%d" % i, one - one) for i in range(1, 6)}
        k11, k12 = p["K11"], p["K12"]
        slots = {
            ("c0", 2, 0): v[0],
            ("c1", 2, 1): v[1],
            ("c2", 1, 0): v[1] + f[1] * 2,
            ("d2", 1, 1): (f[2] * 2 + v[2]) * 2,
            ("d6", 0, 1): (k11 * f[1] * 2 + f[3] * 12 + v[0] * v[1]
                           + v[3] * 6) * half,
            ("d11", 1, 4): (f[5] * 2 + v[5]) * 5,
            ("d12", 0, 3): (f[1] * f[2] * (-4) + k11 * f[3] * 2
                            + f[5] * 40 + v[1] * v[2] + v[0] * v[3]
                            + v[5] * 20) * half,
        }
        for (name, dexp, xexp), want in slots.items():
            assert l4.coefficient(dexp, xexp) == want, name
