"""Exact arithmetic in an extended ring of ordinary differential operators.

The ring is generated, over a field of rational functions in parameters, by

    x            multiplication by x
    d            differentiation d/dx
    J            integration from 0:  J x^n = x^(n+1)/(n+1)
    delta        evaluation at 0:     delta f = f(0)
    A_i          dilations:           A_i x^n = xi^(i*n) x^n

where xi is a fixed primitive k-th root of unity.  Every element is a sum
of canonical monomials  coeff * x^a * A_i * core  with core one of d^b,
J^b, or delta*d^b; products of canonical monomials are finite sums of
canonical monomials, so the whole ring has exact computable arithmetic.

Operators are graded by level = (d-power) - (x-power) - (J-power), with
delta*d^b given level b - a like d^b.  An operator stores one bucket of
monomials per level plus a floor below which levels are untracked (an
exact operator has floor None).

``act_on_monomial`` evaluates an operator on x^n directly from the
definitions above, with no rewriting involved; it is the independent
oracle the rewrite rules are tested against.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
import math

from .coeffs import (
    GaussianRational,
    MultiPoly,
    PolyRing,
    QI_ONE,
    RatFunc,
)


class TruncationExceeded(Exception):
    """An operation needed levels below an operator's tracked floor."""


class NotHCP(Exception):
    """A level does not fit the homogeneous-component shape."""


KIND_D = "d"
KIND_INT = "int"
KIND_DELTA = "delta"

DEFAULT_ORD_FLOOR = -12


@dataclass(frozen=True)
class OpContext:
    """Shared read-only configuration: coefficient ring, dilation order k,
    and the root of unity xi = exp(2*pi*I/k) as an exact field element."""

    ring: PolyRing
    k: int = 4
    xi: GaussianRational = GaussianRational(0, 1)

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be positive")
        acc = QI_ONE
        for _ in range(self.k):
            acc = acc * self.xi
        if acc != QI_ONE:
            raise ValueError("xi is not a k-th root of unity")

    def xi_pow(self, e):
        return self.xi ** (e % self.k)

    def field(self, x):
        return RatFunc.of(x, self.ring)

    def zero(self):
        return ExtOp(self, {}, None)


@dataclass(frozen=True)
class ExtMonomial:
    """coeff * x^x_pow * A_dilation * core, with core encoded by kind:
    KIND_D is d^power, KIND_INT is J^power, KIND_DELTA is delta*d^power.
    Delta monomials always carry dilation 0 because A_i delta = delta."""

    x_pow: int
    dilation: int
    kind: str
    power: int
    coeff: RatFunc

    def key(self):
        return (self.x_pow, self.dilation, self.kind, self.power)

    def level(self):
        return _key_level(self.key())


def _key_level(key):
    a, _i, kind, b = key
    if kind == KIND_INT:
        return -b - a
    return b - a


def _norm_key(ctx, key):
    a, i, kind, b = key
    if a < 0 or b < 0:
        raise ValueError("negative exponent in monomial key")
    if kind == KIND_INT and b == 0:
        kind = KIND_D
    if kind == KIND_DELTA:
        i = 0
    else:
        i %= ctx.k
    return (a, i, kind, b)


class ExtOp:
    """Operator as level -> {monomial key -> coefficient}.  ord_floor None
    means every level is tracked exactly; an integer floor means levels
    below it are unknown (not zero)."""

    __slots__ = ("ctx", "levels", "ord_floor")

    def __init__(self, ctx, levels, ord_floor=None):
        clean = {}
        for r, bucket in levels.items():
            keep = {}
            for key, c in bucket.items():
                key = _norm_key(ctx, key)
                if _key_level(key) != r:
                    raise ValueError("monomial %r stored at wrong level %d"
                                     % (key, r))
                c = ctx.field(c)
                if c:
                    keep[key] = keep[key] + c if key in keep else c
                    if not keep[key]:
                        del keep[key]
            if keep and (ord_floor is None or r >= ord_floor):
                clean[r] = keep
        self.ctx = ctx
        self.levels = clean
        self.ord_floor = ord_floor

    # -- constructors --------------------------------------------------------

    @staticmethod
    def from_monomials(ctx, monomials, ord_floor=None):
        levels = {}
        for m in monomials:
            key = _norm_key(ctx, m.key())
            r = _key_level(key)
            bucket = levels.setdefault(r, {})
            c = ctx.field(m.coeff)
            bucket[key] = bucket[key] + c if key in bucket else c
        return ExtOp(ctx, levels, ord_floor)

    @staticmethod
    def single(ctx, coeff, x_pow=0, dilation=0, kind=KIND_D, power=0,
               ord_floor=None):
        key = (x_pow, dilation, kind, power)
        return ExtOp(ctx, {_key_level(key): {key: coeff}}, ord_floor)

    # -- views ---------------------------------------------------------------

    def monomials(self):
        out = []
        for r in sorted(self.levels, reverse=True):
            for key in sorted(self.levels[r]):
                a, i, kind, b = key
                out.append(ExtMonomial(a, i, kind, b, self.levels[r][key]))
        return out

    def ord(self):
        """Highest nonzero level, or None for (the tracked part of) zero."""
        return max(self.levels) if self.levels else None

    def component(self, r):
        if self.ord_floor is not None and r < self.ord_floor:
            raise TruncationExceeded(
                "level %d is below the tracked floor %d" % (r, self.ord_floor))
        return dict(self.levels.get(r, {}))

    def top(self):
        r = self.ord()
        return {} if r is None else dict(self.levels[r])

    def is_zero(self):
        """True when every tracked level vanishes."""
        return not self.levels

    def is_exact(self):
        return self.ord_floor is None

    # -- linear structure ----------------------------------------------------

    def _merge_floor(self, other):
        if self.ord_floor is None:
            return other.ord_floor
        if other.ord_floor is None:
            return self.ord_floor
        return max(self.ord_floor, other.ord_floor)

    def __add__(self, other):
        if not isinstance(other, ExtOp):
            return NotImplemented
        if other.ctx is not self.ctx and other.ctx != self.ctx:
            raise ValueError("mixed operator contexts")
        levels = {r: dict(b) for r, b in self.levels.items()}
        for r, bucket in other.levels.items():
            mine = levels.setdefault(r, {})
            for key, c in bucket.items():
                mine[key] = mine[key] + c if key in mine else c
        return ExtOp(self.ctx, levels, self._merge_floor(other))

    def __neg__(self):
        levels = {r: {k: -c for k, c in b.items()}
                  for r, b in self.levels.items()}
        return ExtOp(self.ctx, levels, self.ord_floor)

    def __sub__(self, other):
        if not isinstance(other, ExtOp):
            return NotImplemented
        return self + (-other)

    def scale(self, c):
        c = self.ctx.field(c)
        levels = {r: {k: v * c for k, v in b.items()}
                  for r, b in self.levels.items()}
        return ExtOp(self.ctx, levels, self.ord_floor)

    def __mul__(self, other):
        if isinstance(other, ExtOp):
            return ext_mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        if isinstance(other, ExtOp):
            return NotImplemented
        return self.scale(other)

    def truncate(self, floor):
        """Forget levels below ``floor`` and remember the coarser budget."""
        if self.ord_floor is not None and floor < self.ord_floor:
            floor = self.ord_floor
        levels = {r: b for r, b in self.levels.items() if r >= floor}
        return ExtOp(self.ctx, levels, floor)

    def __eq__(self, other):
        if not isinstance(other, ExtOp):
            return NotImplemented
        return (self.levels == other.levels
                and self.ord_floor == other.ord_floor)

    def __repr__(self):
        return "ExtOp(%s)" % render_ext_op(self)


# -- primitive operators ------------------------------------------------------


def identity_op(ctx):
    return ExtOp.single(ctx, 1)


def x_op(ctx, a=1):
    return ExtOp.single(ctx, 1, x_pow=a)


def d_op(ctx, b=1):
    return ExtOp.single(ctx, 1, power=b)


def int_op(ctx, b=1):
    return ExtOp.single(ctx, 1, kind=KIND_INT, power=b)


def delta_op(ctx, b=0):
    return ExtOp.single(ctx, 1, kind=KIND_DELTA, power=b)


def dilation_op(ctx, i):
    return ExtOp.single(ctx, 1, dilation=i)


def gamma_op(ctx):
    """The Euler operator x*d."""
    return ExtOp.single(ctx, 1, x_pow=1, power=1)


def b_op(ctx, n):
    """B_n = x^(n-1) delta d^(n-1) / (n-1)!, the level-0 delta monomials."""
    if n < 1:
        raise ValueError("B_n wants n >= 1")
    c = Fraction(1, math.factorial(n - 1))
    return ExtOp.single(ctx, c, x_pow=n - 1, kind=KIND_DELTA, power=n - 1)


# -- the independent action oracle -------------------------------------------
# Everything here follows directly from the closed-form actions
#   d x^n = n x^(n-1),  J x^n = x^(n+1)/(n+1),  delta x^n = [n == 0],
#   A_i x^n = xi^(i n) x^n
# and never consults the rewrite engine below.


def _act_key(ctx, key, n):
    """Image of x^n under the canonical monomial ``key``: (scalar, exponent)
    with scalar a GaussianRational, or None when the image is zero."""
    a, i, kind, b = key
    if kind == KIND_D:
        if b > n:
            return None
        scalar = GaussianRational(
            Fraction(math.factorial(n), math.factorial(n - b)), 0)
        m = n - b
    elif kind == KIND_INT:
        scalar = GaussianRational(
            Fraction(math.factorial(n), math.factorial(n + b)), 0)
        m = n + b
    else:
        if n != b:
            return None
        scalar = GaussianRational(math.factorial(n), 0)
        m = 0
    scalar = scalar * ctx.xi_pow(i * m)
    return scalar, m + a


def act_on_monomial(p, n, max_degree=None):
    """Image of x^n under ``p`` as {exponent: coefficient}."""
    if n < 0:
        raise ValueError("monomial exponent must be >= 0")
    out = {}
    for bucket in p.levels.values():
        for key, c in bucket.items():
            hit = _act_key(p.ctx, key, n)
            if hit is None:
                continue
            scalar, m = hit
            if max_degree is not None and m > max_degree:
                raise TruncationExceeded(
                    "image degree %d exceeds budget %d" % (m, max_degree))
            v = c * scalar
            if m in out:
                v = out[m] + v
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return out


def act_on_poly(p, poly, max_degree=None):
    """Image of a polynomial {exponent: coefficient} under ``p``."""
    out = {}
    for n, c in poly.items():
        img = act_on_monomial(p, n, max_degree)
        for m, v in img.items():
            v = v * c
            if m in out:
                v = out[m] + v
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return out


# -- the rewrite engine --------------------------------------------------------
# Products of canonical monomials reduce to finite sums through three exact
# steps: push the left core past x^a2, push it past A_i2, then merge cores.
# Each identity used here is covered by the oracle-equivalence tests.


def _falling(n, j):
    out = 1
    for t in range(j):
        out *= n - t
    return out


def _binom_general(alpha, j):
    """Binomial coefficient with possibly negative integer upper index."""
    return Fraction(_falling(alpha, j), math.factorial(j))


def _core_past_x(kind, b, a2):
    """core * x^a2 as [(scalar, x_power, kind', power')]."""
    if a2 == 0:
        return [(Fraction(1), 0, kind, b)]
    out = []
    if kind == KIND_D:
        for j in range(min(b, a2) + 1):
            s = _binom_general(b, j) * _falling(a2, j)
            out.append((s, a2 - j, KIND_D, b - j))
    elif kind == KIND_INT:
        for j in range(a2 + 1):
            s = _binom_general(-b, j) * _falling(a2, j)
            out.append((s, a2 - j, KIND_INT, b + j))
    else:
        if b >= a2:
            out.append((Fraction(_falling(b, a2)), 0, KIND_DELTA, b - a2))
    return [t for t in out if t[0]]


def _core_mul(kind1, b1, kind2, b2):
    """core1 * core2 as [(scalar, x_power, kind, power)]; the x_power sits
    to the left of the resulting delta when integration spills one out."""
    if kind1 == KIND_D:
        if kind2 == KIND_D:
            return [(Fraction(1), 0, KIND_D, b1 + b2)]
        if kind2 == KIND_INT:
            if b1 >= b2:
                return [(Fraction(1), 0, KIND_D, b1 - b2)]
            return [(Fraction(1), 0, KIND_INT, b2 - b1)]
        if b1 >= 1:
            return []
        return [(Fraction(1), 0, KIND_DELTA, b2)]
    if kind1 == KIND_INT:
        if kind2 == KIND_D:
            out = []
            if b2 >= b1:
                out.append((Fraction(1), 0, KIND_D, b2 - b1))
            else:
                out.append((Fraction(1), 0, KIND_INT, b1 - b2))
            for t in range(1, min(b1, b2) + 1):
                s = Fraction(-1, math.factorial(b1 - t))
                out.append((s, b1 - t, KIND_DELTA, b2 - t))
            return out
        if kind2 == KIND_INT:
            return [(Fraction(1), 0, KIND_INT, b1 + b2)]
        return [(Fraction(1, math.factorial(b1)), b1, KIND_DELTA, b2)]
    # kind1 == KIND_DELTA
    if kind2 == KIND_D:
        return [(Fraction(1), 0, KIND_DELTA, b1 + b2)]
    if kind2 == KIND_INT:
        if b1 > b2:
            return [(Fraction(1), 0, KIND_DELTA, b1 - b2)]
        if b1 == b2:
            return [(Fraction(1), 0, KIND_DELTA, 0)]
        return []
    if b1 >= 1:
        return []
    return [(Fraction(1), 0, KIND_DELTA, b2)]


def _mul_keys(ctx, key1, key2):
    """Product of canonical monomials as [(key, GaussianRational scalar)]."""
    a1, i1, k1, b1 = key1
    a2, i2, k2, b2 = key2
    out = []
    for s1, m1, kk, bb in _core_past_x(k1, b1, a2):
        # x^a1 A_i1 x^m1 kk(bb) A_i2 k2(b2)
        scalar = GaussianRational(s1, 0) * ctx.xi_pow(i1 * m1)
        if kk == KIND_INT:
            scalar = scalar * ctx.xi_pow(-i2 * bb)
        else:
            scalar = scalar * ctx.xi_pow(i2 * bb)
        dil = (i1 + i2) % ctx.k
        for s2, m2, kind, power in _core_mul(kk, bb, k2, b2):
            s = scalar * GaussianRational(s2, 0) * ctx.xi_pow(dil * m2)
            key = _norm_key(ctx, (a1 + m1 + m2, dil, kind, power))
            if s:
                out.append((key, s))
    return out


def ext_mul(p, q):
    """Exact product; the result floor is the best level down to which all
    contributing terms are known, max(floor_p + ord_q, floor_q + ord_p)."""
    ctx = p.ctx
    if q.ctx is not ctx and q.ctx != ctx:
        raise ValueError("mixed operator contexts")
    if p.is_zero() or q.is_zero():
        floor = None
        if p.ord_floor is not None or q.ord_floor is not None:
            raise TruncationExceeded(
                "product with a truncated operator whose tracked part "
                "vanishes has no reliable levels")
        return ctx.zero()
    floor = None
    cands = []
    if p.ord_floor is not None:
        cands.append(p.ord_floor + q.ord())
    if q.ord_floor is not None:
        cands.append(q.ord_floor + p.ord())
    if cands:
        floor = max(cands)
    levels = {}
    for r1, b1 in p.levels.items():
        for r2, b2 in q.levels.items():
            if floor is not None and r1 + r2 < floor:
                continue
            for key1, c1 in b1.items():
                for key2, c2 in b2.items():
                    c = c1 * c2
                    for key, s in _mul_keys(ctx, key1, key2):
                        r = _key_level(key)
                        if floor is not None and r < floor:
                            continue
                        bucket = levels.setdefault(r, {})
                        v = c * s
                        if key in bucket:
                            v = bucket[key] + v
                        if v:
                            bucket[key] = v
                        else:
                            del bucket[key]
    return ExtOp(ctx, levels, floor)


def commutator(p, q):
    return ext_mul(p, q) - ext_mul(q, p)


# -- standard form and G-form --------------------------------------------------


@dataclass
class StdLevel:
    """One level of standard form: sum over (l, i) of f[(l, i)] x^l A_i d^l
    plus sum over j of g[j] B_j, all times D^d_power."""

    d_power: int
    f: dict
    g: dict


@dataclass
class GFormComponent:
    """One level in G-form: sum over i of (polynomial in the Euler operator
    with coefficients gamma_coeffs[i], low power first) A_i, plus
    sum over j of b_coeffs[j] B_j, all times D^d_power."""

    d_power: int
    gamma_coeffs: dict
    b_coeffs: dict


def to_standard_form(p):
    """Exact standard-form decomposition of every tracked level."""
    out = []
    for r in sorted(p.levels, reverse=True):
        f = {}
        g = {}
        for key, c in p.levels[r].items():
            a, i, kind, b = key
            if kind == KIND_DELTA:
                if b < a:
                    raise NotHCP(
                        "delta monomial x^%d delta d^%d at level %d has no "
                        "B_j form" % (a, b, r))
                j = a + 1
                v = c * GaussianRational(math.factorial(a), 0)
                g[j] = g[j] + v if j in g else v
            else:
                li = (a, i)
                f[li] = f[li] + c if li in f else c
        f = {k: v for k, v in f.items() if v}
        g = {k: v for k, v in g.items() if v}
        out.append(StdLevel(r, f, g))
    return out


def from_standard_form(ctx, std_levels, ord_floor=None):
    levels = {}
    for lev in std_levels:
        r = lev.d_power
        bucket = levels.setdefault(r, {})
        for (l, i), c in lev.f.items():
            b = l + r
            if b >= 0:
                key = (l, i, KIND_D, b)
            else:
                key = (l, i, KIND_INT, -b)
            c = ctx.field(c)
            bucket[key] = bucket[key] + c if key in bucket else c
        for j, c in lev.g.items():
            if r < 0:
                raise NotHCP("B_%d D^%d is zero for negative powers" % (j, r))
            key = (j - 1, 0, KIND_DELTA, j - 1 + r)
            v = ctx.field(c) * Fraction(1, math.factorial(j - 1))
            bucket[key] = bucket[key] + v if key in bucket else v
    return ExtOp(ctx, levels, ord_floor)


@lru_cache(maxsize=None)
def _falling_factorial_coeffs(l):
    """Power-basis coefficients (low first) of G(G-1)...(G-l+1)."""
    coeffs = [1]
    for t in range(l):
        shifted = [0] + coeffs
        coeffs = [shifted[m] - t * (coeffs[m] if m < len(coeffs) else 0)
                  for m in range(len(shifted))]
    return tuple(coeffs)


def standard_to_gform(ctx, lev):
    """x^l A_i d^l pieces rewritten as polynomials in the Euler operator."""
    gamma = {}
    for (l, i), c in lev.f.items():
        c = ctx.field(c)
        base = _falling_factorial_coeffs(l)
        cur = gamma.setdefault(i, [])
        while len(cur) < len(base):
            cur.append(ctx.field(0))
        for m, s in enumerate(base):
            if s:
                cur[m] = cur[m] + c * s
    gamma = {i: cs for i, cs in gamma.items() if any(cs)}
    b_coeffs = {j: ctx.field(c) for j, c in lev.g.items()}
    return GFormComponent(lev.d_power, gamma, b_coeffs)


def gform_to_standard(ctx, comp):
    """Inverse conversion; falling-factorial division is exact because the
    leading coefficient of each factorial polynomial is 1."""
    f = {}
    for i, cs in comp.gamma_coeffs.items():
        rem = [ctx.field(c) for c in cs]
        while rem and not rem[-1]:
            rem.pop()
        while rem:
            l = len(rem) - 1
            lead = rem[-1]
            base = _falling_factorial_coeffs(l)
            for m, s in enumerate(base):
                if s:
                    rem[m] = rem[m] - lead * s
            while rem and not rem[-1]:
                rem.pop()
            if lead:
                f[(l, i)] = f.get((l, i), ctx.field(0)) + lead
    f = {k: v for k, v in f.items() if v}
    g = dict(comp.b_coeffs)
    return StdLevel(comp.d_power, f, g)


def to_gform(p):
    return [standard_to_gform(p.ctx, lev) for lev in to_standard_form(p)]


def from_gform(ctx, comps, ord_floor=None):
    return from_standard_form(
        ctx, [gform_to_standard(ctx, c) for c in comps], ord_floor)


# -- structure checks -----------------------------------------------------------


def structure_checks(p, q=4):
    """Report {is_monic, totally_free_of_B, in_centralizer_of}: monic means
    the top level is exactly d^ord; B-freeness means no delta monomials;
    the centralizer check tests commutation with d^q on tracked levels."""
    r = p.ord()
    monic = False
    if r is not None and r >= 0:
        top = p.levels[r]
        key = (0, 0, KIND_D, r)
        monic = set(top) == {key} and top[key] == p.ctx.field(1)
    free_of_b = all(key[2] != KIND_DELTA
                    for bucket in p.levels.values() for key in bucket)
    comm = commutator(p, d_op(p.ctx, q))
    return {
        "is_monic": monic,
        "totally_free_of_B": free_of_b,
        "in_centralizer_of": comm.is_zero(),
    }


# -- rendering -------------------------------------------------------------------


def _coeff_str(c):
    s = str(c)
    if ("+" in s[1:] or "-" in s[1:] or "/" in s or "*" in s
            or " " in s):
        return "(%s)" % s
    return s


def _gamma_poly_str(cs):
    parts = []
    for m in range(len(cs) - 1, -1, -1):
        c = cs[m]
        if not c:
            continue
        var = "" if m == 0 else "Γ_%d" % m
        cstr = _coeff_str(c)
        if var and cstr == "1":
            term = var
        elif var and cstr == "-1":
            term = "-" + var
        else:
            term = cstr + ("*" + var if var else "")
        parts.append(term)
    if not parts:
        return "0"
    out = parts[0]
    for t in parts[1:]:
        out += " - " + t[1:] if t.startswith("-") else " + " + t
    return out


def render_ext_op(p):
    """Deterministic one-line rendering of all tracked levels in G-form,
    highest level first, using A_i, Γ_m, B_j and D^r."""
    comps = to_gform(p)
    pieces = []
    for comp in comps:
        inner = []
        for i in sorted(comp.gamma_coeffs):
            poly = _gamma_poly_str(comp.gamma_coeffs[i])
            if i == 0:
                inner.append(poly)
            elif poly == "1":
                inner.append("A_%d" % i)
            elif " + " in poly or " - " in poly:
                inner.append("(%s)*A_%d" % (poly, i))
            else:
                inner.append("%s*A_%d" % (poly, i))
        for j in sorted(comp.b_coeffs):
            c = _coeff_str(comp.b_coeffs[j])
            inner.append("%s*B_%d" % (c, j) if c != "1" else "B_%d" % j)
        body = " + ".join(inner)
        if comp.d_power == 0:
            pieces.append(body if len(inner) == 1 else "(%s)" % body)
        elif body == "1":
            pieces.append("D^%d" % comp.d_power)
        else:
            wrap = body if (len(inner) == 1 and "+" not in body
                            and " - " not in body) else "(%s)" % body
            pieces.append("%s*D^%d" % (wrap, comp.d_power))
    if not pieces:
        rendered = "0"
    else:
        rendered = " + ".join(pieces)
    if p.ord_floor is not None:
        rendered += "  [levels >= %d]" % p.ord_floor
    return rendered


__all__ = [
    "TruncationExceeded",
    "NotHCP",
    "KIND_D",
    "KIND_INT",
    "KIND_DELTA",
    "DEFAULT_ORD_FLOOR",
    "OpContext",
    "ExtMonomial",
    "ExtOp",
    "identity_op",
    "x_op",
    "d_op",
    "int_op",
    "delta_op",
    "dilation_op",
    "gamma_op",
    "b_op",
    "act_on_monomial",
    "act_on_poly",
    "ext_mul",
    "commutator",
    "StdLevel",
    "GFormComponent",
    "to_standard_form",
    "from_standard_form",
    "standard_to_gform",
    "gform_to_standard",
    "to_gform",
    "from_gform",
    "structure_checks",
    "render_ext_op",
]
