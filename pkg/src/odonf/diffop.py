"""Differential operators with truncated power-series coefficients.

This layer works in the plain (untwisted) operator ring: an operator is a
finite sum  sum_b f_b(x) d^b  where each f_b is a polynomial in x tracked up
to a truncation degree.  On top of the arithmetic it provides the two
builders used everywhere downstream:

* ``build_L4`` assembles the order-4 operator of a family, either
  self-adjoint  (d^2 + V/2)^2 + W  or non-self-adjoint
  (d^2 + V/2)^2 + f'd + df' + (-f^2 + K11 f + K12).
* ``build_L6`` produces the monic order-6 operator commuting with a given
  order-4 one, so that L6^2 = L4^3 - a holds on the family slice.

``apply_family_constraints`` turns a bag of free parameters into a complete
family: it enforces the branch shape selected by ``nu`` (the vanishing order
of W' resp. f'), solves for the pinned parameters, and performs the exact
Taylor division that defines the even coefficient function V.
"""

import math
from dataclasses import dataclass, field, replace

from .coeffs import (GaussianRational, MultiPoly, PolyRing, RatFunc, inv,
                     is_zero, specialize)

KIND_SA = "self_adjoint"
KIND_NSA = "non_self_adjoint"


class TruncationExceeded(Exception):
    """A coefficient beyond the tracked x-degree was requested."""


class MissingParameter(KeyError):
    """A family parameter needed by a builder is absent."""


class NotOrderFour(Exception):
    pass


class NotMonic(Exception):
    pass


class BranchViolation(Exception):
    """Supplied parameters contradict the declared branch (nu, kind)."""


class InconsistentParameters(ValueError):
    """A user-supplied value conflicts with one forced by the constraints."""


# -- truncated power series as plain dicts {x_exponent: field element} -------

def _strip(f):
    return {e: c for e, c in f.items() if not is_zero(c)}


def _sadd(f, g):
    out = dict(f)
    for e, c in g.items():
        s = out.get(e)
        out[e] = c if s is None else s + c
    return _strip(out)


def _sneg(f):
    return {e: -c for e, c in f.items()}


def _sscale(f, c):
    if is_zero(c):
        return {}
    return _strip({e: v * c for e, v in f.items()})


def _smul(f, g, trunc):
    out = {}
    for e1, c1 in f.items():
        for e2, c2 in g.items():
            e = e1 + e2
            if e > trunc:
                continue
            p = c1 * c2
            s = out.get(e)
            out[e] = p if s is None else s + p
    return _strip(out)


def _sdiff(f, n=1):
    for _ in range(n):
        f = {e - 1: c * e for e, c in f.items() if e > 0}
    return _strip(f)


def _sval(f):
    """x-valuation; None for the zero series."""
    return min(f) if f else None


def _scoef(f, e, zero):
    return f.get(e, zero)


def _taylor_div(num, den, trunc, one):
    """Exact division of power series, num/den up to x^trunc.

    Requires val(num) >= val(den); the caller is responsible for having
    checked that the low-order coefficients of num vanish accordingly.
    """
    dv = _sval(den)
    if dv is None:
        raise ZeroDivisionError("series division by zero")
    nv = _sval(num)
    if nv is not None and nv < dv:
        raise InconsistentParameters(
            "numerator valuation %d below denominator valuation %d"
            % (nv, dv))
    zero = one - one
    d0 = den[dv]
    d0i = inv(d0)
    quot = {}
    for m in range(0, trunc + 1):
        acc = num.get(m + dv, zero)
        for j, qj in quot.items():
            acc = acc - qj * den.get(m - j + dv, zero)
        qm = acc * d0i
        if not is_zero(qm):
            quot[m] = qm
    return quot


# -- operators ----------------------------------------------------------------

class DiffOp:
    """sum_b f_b(x) d^b with coefficients tracked up to x-degree x_trunc."""

    __slots__ = ("coeffs", "x_trunc", "one")

    def __init__(self, coeffs, x_trunc, one):
        clean = {}
        for b, f in coeffs.items():
            f = {e: c for e, c in f.items() if e <= x_trunc and not is_zero(c)}
            if f:
                clean[b] = f
        self.coeffs = clean
        self.x_trunc = x_trunc
        self.one = one

    @staticmethod
    def from_scalar(c, x_trunc, one):
        return DiffOp({0: {0: one * c if isinstance(c, int) else c}},
                      x_trunc, one)

    @staticmethod
    def d(b, x_trunc, one):
        return DiffOp({b: {0: one}}, x_trunc, one)

    @staticmethod
    def from_series(f, x_trunc, one, d_exp=0):
        return DiffOp({d_exp: dict(f)}, x_trunc, one)

    def d_degree(self):
        return max(self.coeffs) if self.coeffs else None

    def series(self, b):
        return dict(self.coeffs.get(b, {}))

    def coefficient(self, d_exp, x_exp):
        if x_exp > self.x_trunc:
            raise TruncationExceeded(
                "x^%d is beyond the tracked degree %d" % (x_exp, self.x_trunc))
        zero = self.one - self.one
        return self.coeffs.get(d_exp, {}).get(x_exp, zero)

    def ord(self):
        """Grading by derivative exponent minus x-valuation; None if zero."""
        if not self.coeffs:
            return None
        return max(b - _sval(f) for b, f in self.coeffs.items())

    def hom_component(self, m):
        """The part of grade m, i.e. monomials x^(b-m) d^b."""
        deg = self.d_degree()
        if deg is not None and deg - m > self.x_trunc:
            raise TruncationExceeded(
                "grade %d needs x-degrees beyond the tracked %d"
                % (m, self.x_trunc))
        out = {}
        for b, f in self.coeffs.items():
            e = b - m
            if e >= 0 and e in f:
                out[b] = {e: f[e]}
        return DiffOp(out, self.x_trunc, self.one)

    def is_monic(self):
        deg = self.d_degree()
        if deg is None:
            return False
        top = self.coeffs[deg]
        return self.ord() == deg and top.get(0) == self.one and len(top) == 1

    def __add__(self, other):
        if isinstance(other, int):
            other = DiffOp.from_scalar(other, self.x_trunc, self.one)
        out = {b: dict(f) for b, f in self.coeffs.items()}
        for b, f in other.coeffs.items():
            out[b] = _sadd(out.get(b, {}), f)
        return DiffOp(out, min(self.x_trunc, other.x_trunc), self.one)

    __radd__ = __add__

    def __neg__(self):
        return DiffOp({b: _sneg(f) for b, f in self.coeffs.items()},
                      self.x_trunc, self.one)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        if isinstance(c, int):
            c = self.one * c
        return DiffOp({b: _sscale(f, c) for b, f in self.coeffs.items()},
                      self.x_trunc, self.one)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        deg = self.d_degree()
        if deg is None or other.d_degree() is None:
            return DiffOp({}, min(self.x_trunc, other.x_trunc), self.one)
        trunc = min(self.x_trunc, other.x_trunc - deg)
        out = {}
        for b, f in self.coeffs.items():
            for b2, g in other.coeffs.items():
                gj = g
                for j in range(0, b + 1):
                    if j > 0:
                        gj = _sdiff(gj, 1)
                        if not gj:
                            break
                    term = _smul(f, gj, trunc)
                    if not term:
                        continue
                    if j > 0:
                        term = _sscale(term, self.one * math.comb(b, j))
                    e = b - j + b2
                    out[e] = _sadd(out.get(e, {}), term)
                    if j == 0 and not g:
                        break
        return DiffOp(out, trunc, self.one)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power of a differential operator")
        acc = DiffOp.from_scalar(1, self.x_trunc, self.one)
        for _ in range(n):
            acc = acc * self
        return acc

    def __eq__(self, other):
        if not isinstance(other, DiffOp):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def truncated(self, new_trunc):
        """Relabel (and refilter) to a smaller tracked x-degree."""
        if new_trunc > self.x_trunc:
            raise ValueError("cannot extend the tracked degree")
        return DiffOp(self.coeffs, new_trunc, self.one)

    def adjoint(self):
        """Formal adjoint  sum (-1)^b d^b o f_b.  Differentiating the
        coefficients costs tracked x-degree, one per derivative order."""
        out = {}
        deg = self.d_degree()
        for b, f in self.coeffs.items():
            sign = 1 if b % 2 == 0 else -1
            fj = f
            for j in range(0, b + 1):
                if j > 0:
                    fj = _sdiff(fj, 1)
                    if not fj:
                        break
                term = _sscale(fj, self.one * (sign * math.comb(b, j)))
                out[b - j] = _sadd(out.get(b - j, {}), term)
        return DiffOp(out, self.x_trunc - (deg or 0), self.one)

    def apply(self, poly):
        """Action on a polynomial given as {x_exponent: element}."""
        zero = self.one - self.one
        out = {}
        for b, f in self.coeffs.items():
            for n, c in poly.items():
                fall = 1
                for i in range(b):
                    fall *= (n - i)
                if fall == 0:
                    continue
                for e, fc in f.items():
                    m = n - b + e
                    acc = out.get(m, zero) + fc * c * fall
                    out[m] = acc
        return {e: c for e, c in out.items() if not is_zero(c)}

    def __repr__(self):
        deg = self.d_degree()
        return "DiffOp(d_degree=%s, ord=%s, x_trunc=%d)" % (
            deg, self.ord(), self.x_trunc)


def mul_diffop(p, q):
    return p * q


def commutator_diffop(p, q):
    return p * q - q * p


# -- families -----------------------------------------------------------------

@dataclass
class OperatorFamily:
    """A branch of the commuting-pair family.

    kind is KIND_SA or KIND_NSA, nu the vanishing order of W' (resp. f') at
    the origin, and parameters maps names like "w0", "f2", "K11", "v0", "a"
    to field elements.  nu is always declared explicitly by the caller and
    validated against the leading coefficients; it is never inferred.
    """

    kind: str
    nu: int
    parameters: dict
    one: object = field(default=None)

    def __post_init__(self):
        if self.kind not in (KIND_SA, KIND_NSA):
            raise ValueError("unknown family kind %r" % (self.kind,))
        if self.one is None:
            one = None
            for v in self.parameters.values():
                if isinstance(v, (RatFunc, MultiPoly)):
                    one = RatFunc.of(v.ring.one())
                    break
            self.one = one if one is not None else GaussianRational(1)
        self.parameters = {k: self._lift(v)
                           for k, v in self.parameters.items()}

    def _lift(self, v):
        if isinstance(v, int):
            return self.one * v
        if isinstance(v, MultiPoly):
            return RatFunc.of(v)
        return v

    def param(self, name):
        try:
            return self.parameters[name]
        except KeyError:
            raise MissingParameter(name)

    def get(self, name, default=None):
        return self.parameters.get(name, default)

    def has(self, name):
        return name in self.parameters

    def series(self, prefix, start=0, stop=64):
        """Collect prefix0, prefix1, ... into {exponent: element}."""
        out = {}
        for i in range(start, stop):
            v = self.parameters.get(prefix + str(i))
            if v is not None and not is_zero(v):
                out[i] = v
        return out

    def with_parameters(self, extra):
        params = dict(self.parameters)
        params.update(extra)
        return replace(self, parameters=params)


def _forced(fam, updates, name, value):
    """Record a solved parameter, rejecting a conflicting user value."""
    old = fam.get(name)
    if old is not None and old != value:
        raise InconsistentParameters(
            "%s is pinned to a different value on this branch" % name)
    updates[name] = value


def _require_zero(fam, name):
    v = fam.get(name)
    if v is not None and not is_zero(v):
        raise BranchViolation("%s must vanish on the nu=%d branch"
                              % (name, fam.nu))


def _require_nonzero(fam, name):
    v = fam.get(name)
    if v is None or is_zero(v):
        raise BranchViolation("%s must be nonzero on the nu=%d branch"
                              % (name, fam.nu))


def _sa_numerator(w, a, one):
    """8a + W^3 - W''' W' + (1/2) W''^2 as a finite series."""
    big = 1 << 60
    n = _smul(_smul(w, w, big), w, big)
    n = _sadd(n, _sneg(_smul(_sdiff(w, 3), _sdiff(w, 1), big)))
    n = _sadd(n, _sscale(_smul(_sdiff(w, 2), _sdiff(w, 2), big),
                         inv(one * 2)))
    return _sadd(n, {0: a * 8} if not is_zero(a) else {})


def _nsa_numerator(f, k10, k11, k12, k14, one):
    """K14 - 2 K10 f + 6 K12 f^2 + 2 K11 f^3 - f^4 + f''^2 - 2 f' f'''."""
    big = 1 << 60
    f2 = _smul(f, f, big)
    f3 = _smul(f2, f, big)
    f4 = _smul(f2, f2, big)
    n = {0: k14} if not is_zero(k14) else {}
    n = _sadd(n, _sscale(f, k10 * (-2)))
    n = _sadd(n, _sscale(f2, k12 * 6))
    n = _sadd(n, _sscale(f3, k11 * 2))
    n = _sadd(n, _sneg(f4))
    n = _sadd(n, _smul(_sdiff(f, 2), _sdiff(f, 2), big))
    n = _sadd(n, _sscale(_smul(_sdiff(f, 1), _sdiff(f, 3), big), one * (-2)))
    return n


def _check_low_orders(num, need, what):
    v = _sval(num)
    if v is not None and v < need:
        raise InconsistentParameters(
            "%s: coefficient of x^%d does not vanish" % (what, v))


def _store_v(fam, updates, vser, x_trunc, one):
    zero = one - one
    for i in range(0, x_trunc + 1):
        val = vser.get(i, zero)
        old = fam.get("v" + str(i))
        if old is not None and old != val:
            raise InconsistentParameters(
                "v%d conflicts with the value forced by the branch" % i)
        if i == 0 or not is_zero(val) or old is not None:
            updates["v" + str(i)] = val


def _constrain_sa(fam, x_trunc):
    one = fam.one
    updates = {}
    w = fam.series("w")
    nu = fam.nu
    if nu == 0:
        _require_nonzero(fam, "w1")
        a = fam.param("a")
    elif nu == 1:
        _require_zero(fam, "w1")
        _require_nonzero(fam, "w2")
        w0 = fam.get("w0", one - one)
        w2 = fam.param("w2")
        a = -(w0 ** 3 + w2 * w2 * 2) * inv(one * 8)
        _forced(fam, updates, "a", a)
    elif nu == 2:
        _require_zero(fam, "w1")
        _require_zero(fam, "w2")
        _require_nonzero(fam, "w3")
        w0 = fam.get("w0", one - one)
        a = -(w0 ** 3) * inv(one * 8)
        _forced(fam, updates, "a", a)
        _forced(fam, updates, "w4", w0 * w0 * inv(one * 8))
    elif nu == 3:
        _require_zero(fam, "w1")
        _require_zero(fam, "w2")
        _require_zero(fam, "w3")
        w0 = fam.get("w0", one - one)
        if is_zero(w0):
            # on the fixed curve slice, w0 = 0 here collapses the whole
            # potential, leaving the split family with V free and a = 0
            if any(e >= 1 for e in w):
                raise BranchViolation(
                    "with w0 = 0 the slice forces the potential tail "
                    "to vanish")
            a = fam.get("a")
            if a is not None and not is_zero(a):
                raise InconsistentParameters("the split family forces a = 0")
            updates["a"] = one - one
            return fam.with_parameters(updates)
        a = -(w0 ** 3) * inv(one * 8)
        _forced(fam, updates, "a", a)
        _forced(fam, updates, "w4", w0 * w0 * inv(one * 8))
        _forced(fam, updates, "w5", one - one)
    else:
        raise BranchViolation("nu must be 0..3, got %r" % (nu,))
    fam2 = fam.with_parameters(updates)
    w = fam2.series("w")
    num = _sa_numerator(w, fam2.param("a"), one)
    dw = _sdiff(w, 1)
    den = _smul(dw, dw, 1 << 60)
    _check_low_orders(num, 2 * nu, "self-adjoint branch constraints")
    vser = _taylor_div(num, den, x_trunc, one)
    _store_v(fam2, updates, vser, x_trunc, one)
    return fam.with_parameters(updates)


def _constrain_nsa(fam, x_trunc):
    one = fam.one
    zero = one - one
    updates = {}
    nu = fam.nu
    if nu == 0:
        _require_nonzero(fam, "f1")
        f1 = fam.param("f1")
        f2 = fam.get("f2", zero)
        v0 = fam.param("v0")
        v1 = fam.param("v1")
        v2 = fam.param("v2")
        k10 = fam.param("K10")
        k11 = fam.param("K11")
        k12 = fam.param("K12")
        k14 = k10 * k11 + k12 * k12 * 3
        _forced(fam, updates, "K14", k14)
        f3 = (k14 + f2 * f2 * 4 - f1 * f1 * v0 * 2) * inv(f1 * 12)
        _forced(fam, updates, "f3", f3)
        f4 = (-(f2 * v0 * 4) - f1 * v1 - k10) * inv(one * 24)
        _forced(fam, updates, "f4", f4)
        f5 = (f1 * k12 * 3 - f1 * v2 - f3 * v0 * 6 - f2 * v1 * 3) \
            * inv(one * 60)
        _forced(fam, updates, "f5", f5)
    elif nu == 1:
        _require_zero(fam, "f1")
        _require_nonzero(fam, "f2")
        f2 = fam.param("f2")
        f3 = fam.get("f3", zero)
        v0 = fam.param("v0")
        v1 = fam.param("v1")
        k11 = fam.get("K11")
        k12 = fam.param("K12")
        quad = f2 * f2 * 4 + k12 * k12 * 3
        if k11 is not None and not is_zero(k11):
            k10 = -quad * inv(k11)
            _forced(fam, updates, "K10", k10)
        else:
            if not is_zero(quad):
                raise InconsistentParameters(
                    "with K11 = 0 the branch needs 4 f2^2 + 3 K12^2 = 0")
            if k11 is None:
                updates["K11"] = zero
            k10 = fam.param("K10")
        k14 = -(f2 * f2 * 4)
        _forced(fam, updates, "K14", k14)
        f4 = (-(f2 * v0 * 4) - k10) * inv(one * 24)
        _forced(fam, updates, "f4", f4)
        f5 = -(f3 * v0 * 2 + f2 * v1) * inv(one * 20)
        _forced(fam, updates, "f5", f5)
    elif nu == 2:
        _require_zero(fam, "f1")
        _require_zero(fam, "f2")
        _require_nonzero(fam, "f3")
        k10 = fam.get("K10", zero)
        k12 = fam.get("K12", zero)
        if is_zero(k10):
            if not is_zero(k12):
                raise InconsistentParameters(
                    "with K10 = 0 the nu=2 branch forces K12 = 0")
            k11 = fam.param("K11")
            updates.setdefault("K10", zero)
            updates.setdefault("K12", zero)
        else:
            k11 = -(k12 * k12 * 3) * inv(k10)
            _forced(fam, updates, "K11", k11)
        _forced(fam, updates, "K14", zero)
        _forced(fam, updates, "f4", -k10 * inv(one * 24))
    elif nu == 3:
        _require_zero(fam, "f1")
        _require_zero(fam, "f2")
        _require_zero(fam, "f3")
        _require_nonzero(fam, "f4")
        f4 = fam.param("f4")
        _forced(fam, updates, "f5", zero)
        k10 = -(f4 * 24)
        _forced(fam, updates, "K10", k10)
        k12 = fam.get("K12", zero)
        k11 = -(k12 * k12 * 3) * inv(k10)
        _forced(fam, updates, "K11", k11)
        _forced(fam, updates, "K14", zero)
    else:
        raise BranchViolation("nu must be 0..3, got %r" % (nu,))

    fam2 = fam.with_parameters(updates)
    k10 = fam2.param("K10")
    k11 = fam2.param("K11")
    k12 = fam2.param("K12")
    k14 = fam2.param("K14")
    g2 = k12 * k12 * 3 + k10 * k11 - k14
    if not is_zero(g2):
        raise InconsistentParameters(
            "the quartic integration constant left the fixed curve slice")
    g3 = (k10 * k11 * k12 * 2 + k12 ** 3 * 4
          + k14 * (k11 * k11 + k12 * 4) - k10 * k10) * inv(one * 4)
    _forced(fam, updates, "a", g3 * inv(one * 4))
    fam2 = fam.with_parameters(updates)
    f = fam2.series("f", start=1)
    num = _nsa_numerator(f, k10, k11, k12, k14, one)
    df = _sdiff(f, 1)
    den = _sscale(_smul(df, df, 1 << 60), one * 2)
    _check_low_orders(num, 2 * nu, "non-self-adjoint branch constraints")
    vser = _taylor_div(num, den, x_trunc, one)
    _store_v(fam2, updates, vser, x_trunc, one)
    return fam.with_parameters(updates)


def apply_family_constraints(fam, x_trunc=16):
    """Resolve a family branch: validate the nu-shape, solve the pinned
    parameters, and attach the Taylor coefficients of V.  Returns a new
    OperatorFamily; the input is left untouched."""
    if fam.kind == KIND_SA:
        return _constrain_sa(fam, x_trunc)
    return _constrain_nsa(fam, x_trunc)


def build_L4(fam, x_trunc=16):
    """Assemble the order-4 operator of a constrained family."""
    one = fam.one
    half = inv(one * 2)
    vser = fam.series("v")
    if fam.kind == KIND_SA:
        w = fam.series("w")
        if not fam.has("v0") and any(e >= 1 for e in w):
            raise MissingParameter(
                "v0 (apply_family_constraints must run first)")
        m = DiffOp.d(2, x_trunc, one) + DiffOp.from_series(
            _sscale(vser, half), x_trunc, one)
        return m * m + DiffOp.from_series(w, x_trunc, one)
    if not fam.has("v0"):
        raise MissingParameter("v0 (apply_family_constraints must run first)")
    k11 = fam.param("K11")
    k12 = fam.param("K12")
    f = fam.series("f", start=1)
    m = DiffOp.d(2, x_trunc, one) + DiffOp.from_series(
        _sscale(vser, half), x_trunc, one)
    big = 1 << 60
    w_eff = _sadd(_sadd(_sneg(_smul(f, f, big)), _sscale(f, k11)),
                  {0: k12} if not is_zero(k12) else {})
    df = _sdiff(f, 1)
    out = m * m
    out = out + DiffOp.from_series(_sscale(df, one * 2), x_trunc, one, d_exp=1)
    out = out + DiffOp.from_series(_sdiff(f, 2), x_trunc, one)
    out = out + DiffOp.from_series(w_eff, x_trunc, one)
    return out


def split_order4(l4):
    """Recover (C2, C1, C0) from a monic order-4 operator written as
    (d^2 + C2/2)^2 + 2 C1 d + C1' + C0, i.e. from
    d^4 + C2 d^2 + (C2' + 2 C1) d + (C2''/2 + C2^2/4 + C1' + C0)."""
    one = l4.one
    if l4.d_degree() != 4:
        raise NotOrderFour("expected derivative degree 4, got %r"
                           % (l4.d_degree(),))
    top = l4.series(4)
    if top != {0: one}:
        raise NotMonic("leading coefficient must be the constant 1")
    if l4.series(3):
        raise NotMonic("the d^3 coefficient must vanish in normalized form")
    half = inv(one * 2)
    quarter = inv(one * 4)
    c2 = l4.series(2)
    c1 = _sscale(_sadd(l4.series(1), _sneg(_sdiff(c2, 1))), half)
    c0 = _sadd(l4.series(0), _sneg(_sscale(_sdiff(c2, 2), half)))
    c0 = _sadd(c0, _sneg(_sscale(_smul(c2, c2, l4.x_trunc), quarter)))
    c0 = _sadd(c0, _sneg(_sdiff(c1, 1)))
    return c2, c1, c0


def build_L6(l4):
    """The monic order-6 operator commuting with l4 on the family slice,
    satisfying L6^2 = L4^3 - a there."""
    one = l4.one
    trunc = l4.x_trunc
    c2, c1, c0 = split_order4(l4)
    half = inv(one * 2)

    def frac(p, q):
        return (one * p) * inv(one * q)

    big = trunc
    c2p = _sdiff(c2, 1)
    c2pp = _sdiff(c2, 2)
    t4 = _sscale(c2, frac(3, 2))
    t3 = _sadd(_sscale(c1, one * 3), _sscale(c2p, one * 3))
    t2 = _sadd(_sadd(_sscale(c0, frac(3, 2)),
                     _sscale(_smul(c2, c2, big), frac(3, 4))),
               _sadd(_sscale(_sdiff(c1, 1), frac(9, 2)),
                     _sscale(c2pp, frac(7, 2))))
    t1 = _sadd(_sadd(_sscale(_smul(c1, c2, big), frac(3, 2)),
                     _sscale(_sdiff(c0, 1), frac(3, 2))),
               _sadd(_sscale(_smul(c2p, c2, big), frac(3, 2)),
                     _sadd(_sscale(_sdiff(c1, 2), one * 4),
                           _sscale(_sdiff(c2, 3), one * 2))))
    t0 = _sadd(_sscale(_smul(c1, c1, big), frac(3, 2)),
               _sscale(_smul(c0, c2, big), frac(3, 4)))
    t0 = _sadd(t0, _sscale(_smul(_smul(c2, c2, big), c2, big), frac(1, 8)))
    t0 = _sadd(t0, _sscale(_smul(_sdiff(c1, 1), c2, big), frac(3, 4)))
    t0 = _sadd(t0, _sscale(_smul(c1, c2p, big), frac(3, 4)))
    t0 = _sadd(t0, _sscale(_smul(c2p, c2p, big), half))
    t0 = _sadd(t0, _sscale(_sdiff(c0, 2), frac(5, 4)))
    t0 = _sadd(t0, _sscale(_smul(c2pp, c2, big), frac(3, 4)))
    t0 = _sadd(t0, _sscale(_sdiff(c1, 3), frac(5, 4)))
    t0 = _sadd(t0, _sscale(_sdiff(c2, 4), half))
    # the four series derivatives above shrink the reliable x-degree
    out = DiffOp.d(6, trunc - 4, one)
    for b, t in ((4, t4), (3, t3), (2, t2), (1, t1), (0, t0)):
        out = out + DiffOp.from_series(t, trunc - 4, one, d_exp=b)
    return out


def bc_residual(l4, l6, a):
    """L6^2 - L4^3 + a; vanishes on tracked degrees for a family pair."""
    res = l6 * l6 - l4 * l4 * l4
    return res + DiffOp.from_scalar(a, res.x_trunc, l4.one)


def generic_order4(ring, x_trunc=16):
    """The order-4 operator with free graded slots: d^4 + c0 d^2 +
    (c1 x d + c2) d + sum_m (d_{3m+1} x^{m+2} d^2 + d_{3m+2} x^{m+1} d +
    d_{3m+3} x^m), using c2 = b + c1.  Variables c0, c1, b, d1..d12 must be
    ring generators."""
    one = RatFunc.of(ring.one())

    def g(name):
        return RatFunc.of(ring.var(name))

    c2ser = {0: g("c0"), 1: g("c1")}
    c1ser = {0: g("b") + g("c1")}
    c0ser = {}
    for m, (di, dj, dk) in enumerate((("d1", "d2", "d3"),
                                      ("d4", "d5", "d6"),
                                      ("d7", "d8", "d9"),
                                      ("d10", "d11", "d12"))):
        c2ser[m + 2] = g(di)
        c1ser[m + 1] = g(dj)
        c0ser[m] = g(dk)
    return DiffOp({4: {0: one}, 2: c2ser, 1: c1ser, 0: c0ser},
                  x_trunc, one)


def specialize_diffop(op, assignment):
    """Evaluate every coefficient at an exact parameter assignment."""
    coeffs = {}
    for b, row in op.coeffs.items():
        new = {}
        for e, c in row.items():
            v = specialize(c, assignment)
            if not is_zero(v):
                new[e] = v
        if new:
            coeffs[b] = new
    return DiffOp(coeffs, op.x_trunc, GaussianRational(1, 0))
