"""Exact scalar arithmetic: Gaussian rationals, sparse multivariate
polynomials, and normalized rational functions.

Everything downstream is generic over a "field element": a value supporting
+, -, *, / (true division), unary -, ** with a nonnegative int, and == .
Three concrete fields are provided here:

    GaussianRational          Q(I), pairs of stdlib Fractions with I^2 = -1
    MultiPoly                 the ring Q(I)[x1,...,xn]  (not a field; used
                              as numerator/denominator data)
    RatFunc                   Q(I)(x1,...,xn), always kept in canonical form

Canonical form for RatFunc: gcd(num, den) is constant and the denominator's
leading coefficient under graded lexicographic order is 1.  Equality of
canonical forms is therefore representational, which is what makes exact
regression fixtures and byte-deterministic reports possible.

>>> R = PolyRing(("a", "w0"))
>>> a, w0 = R.var("a"), R.var("w0")
>>> f = (w0 ** 3 + 8 * a) / (w0 * w0)
>>> f * w0 ** 2 == w0 ** 3 + 8 * a
True
"""

from __future__ import annotations

from fractions import Fraction

__all__ = [
    "DivisionByZero",
    "DenominatorVanishes",
    "GaussianRational",
    "QI_ZERO",
    "QI_ONE",
    "QI_I",
    "gaussian",
    "PolyRing",
    "MultiPoly",
    "RatFunc",
    "poly_gcd",
    "inv",
    "is_zero",
    "specialize",
    "draw_assignment",
]


class DivisionByZero(ZeroDivisionError):
    """Division by the zero element of a field."""


class DenominatorVanishes(ValueError):
    """A specialization sent some denominator to zero."""


def _fr(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError("expected int or Fraction, got %r" % (x,))


class GaussianRational:
    """An element re + im*I of Q(I), with exact Fraction parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", _fr(re))
        object.__setattr__(self, "im", _fr(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    # -- arithmetic ---------------------------------------------------------

    @staticmethod
    def _coerce(x):
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, (int, Fraction)):
            return GaussianRational(x)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )

    __rmul__ = __mul__

    def inv(self):
        n = self.re * self.re + self.im * self.im
        if n == 0:
            raise DivisionByZero("inverse of 0 in Q(I)")
        return GaussianRational(self.re / n, -self.im / n)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inv()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inv()

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inv() ** (-n)
        out = QI_ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    # -- structure ----------------------------------------------------------

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __str__(self):
        if not self.im:
            return str(self.re)
        if self.im > 0:
            ims = "+" + _coef_str(self.im, "I")
        else:
            ims = "-" + _coef_str(-self.im, "I")
        if not self.re:
            return ims.lstrip("+")
        return str(self.re) + ims

    def __repr__(self):
        return "gaussian(%r, %r)" % (str(self.re), str(self.im))


def _coef_str(c, sym):
    # c is a positive Fraction; render c*sym compactly
    return sym if c == 1 else "%s*%s" % (c, sym)


def gaussian(re, im=0):
    """Build a GaussianRational; string fractions like "1/2" are accepted."""
    if isinstance(re, str):
        re = Fraction(re)
    if isinstance(im, str):
        im = Fraction(im)
    return GaussianRational(re, im)


QI_ZERO = GaussianRational(0)
QI_ONE = GaussianRational(1)
QI_I = GaussianRational(0, 1)


# ---------------------------------------------------------------------------
# sparse multivariate polynomials over Q(I)
# ---------------------------------------------------------------------------


def _grlex_key(expvec):
    # graded lexicographic: compare total degree first, then lexicographic
    return (sum(expvec), expvec)


class PolyRing:
    """An ordered tuple of variable names; the context every MultiPoly
    carries.  Two MultiPolys interoperate iff their rings compare equal."""

    __slots__ = ("names", "_index")

    def __init__(self, names):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError("duplicate variable names")
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "_index", {n: i for i, n in enumerate(names)})

    def __setattr__(self, name, value):
        raise AttributeError("PolyRing is immutable")

    def __eq__(self, other):
        return isinstance(other, PolyRing) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return "PolyRing(%r)" % (self.names,)

    def var(self, name):
        i = self._index[name]
        ev = tuple(1 if j == i else 0 for j in range(len(self.names)))
        return MultiPoly(self, {ev: QI_ONE})

    def vars(self):
        return tuple(self.var(n) for n in self.names)

    def const(self, c):
        c = _as_gaussian(c)
        if not c:
            return MultiPoly(self, {})
        return MultiPoly(self, {(0,) * len(self.names): c})

    def zero(self):
        return MultiPoly(self, {})

    def one(self):
        return self.const(1)


def _as_gaussian(c):
    if isinstance(c, GaussianRational):
        return c
    if isinstance(c, (int, Fraction)):
        return GaussianRational(c)
    raise TypeError("not a scalar: %r" % (c,))


class MultiPoly:
    """Sparse polynomial: dict from exponent tuple to nonzero coefficient."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms):
        nv = len(ring.names)
        clean = {}
        for ev, c in terms.items():
            if len(ev) != nv:
                raise ValueError("exponent tuple of wrong length: %r" % (ev,))
            if not isinstance(c, GaussianRational):
                c = GaussianRational(c, 0)
            if c:
                clean[ev] = c
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("MultiPoly is immutable")

    # -- coercion -----------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            if other.ring != self.ring:
                raise ValueError("mixed polynomial rings")
            return other
        if isinstance(other, (int, Fraction, GaussianRational)):
            return self.ring.const(other)
        return None

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        terms = dict(self.terms)
        for ev, c in o.terms.items():
            s = terms.get(ev, QI_ZERO) + c
            if s:
                terms[ev] = s
            else:
                terms.pop(ev, None)
        return MultiPoly(self.ring, terms)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.ring, {ev: -c for ev, c in self.terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        terms = {}
        for ev1, c1 in self.terms.items():
            for ev2, c2 in o.terms.items():
                ev = tuple(a + b for a, b in zip(ev1, ev2))
                s = terms.get(ev, QI_ZERO) + c1 * c2
                if s:
                    terms[ev] = s
                else:
                    terms.pop(ev, None)
        return MultiPoly(self.ring, terms)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        out = self.ring.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __truediv__(self, other):
        # exact: lands in RatFunc
        return RatFunc.of(self) / other

    def __rtruediv__(self, other):
        return other * RatFunc.of(self).inv()

    # -- structure ----------------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self):
        return hash((self.ring, tuple(sorted(self.terms.items(),
                                             key=lambda t: _grlex_key(t[0])))))

    def total_degree(self):
        if not self.terms:
            return -1
        return max(sum(ev) for ev in self.terms)

    def leading(self):
        """(exponent vector, coefficient) of the graded-lex leading term."""
        if not self.terms:
            raise ValueError("leading term of zero polynomial")
        ev = max(self.terms, key=_grlex_key)
        return ev, self.terms[ev]

    def is_constant(self):
        return all(sum(ev) == 0 for ev in self.terms)

    def constant_value(self):
        return self.terms.get((0,) * len(self.ring.names), QI_ZERO)

    def coefficient(self, **exps):
        """Coefficient of a named monomial: p.coefficient(a=1, w0=2)."""
        ev = [0] * len(self.ring.names)
        for n, e in exps.items():
            ev[self.ring._index[n]] = e
        return self.terms.get(tuple(ev), QI_ZERO)

    def divexact(self, other):
        """Exact division; raises ValueError when the division is not exact."""
        o = self._coerce(other)
        if not o:
            raise DivisionByZero("exact division by zero polynomial")
        rem = self
        qterms = {}
        dev, dc = o.leading()
        dcinv = dc.inv()
        while rem.terms:
            rev, rc = rem.leading()
            qev = tuple(a - b for a, b in zip(rev, dev))
            if any(e < 0 for e in qev):
                raise ValueError("division is not exact")
            qc = rc * dcinv
            qterms[qev] = qterms.get(qev, QI_ZERO) + qc
            rem = rem - MultiPoly(self.ring, {qev: qc}) * o
        return MultiPoly(self.ring, {ev: c for ev, c in qterms.items() if c})

    def eval(self, assignment):
        """Evaluate at a dict name -> scalar; every variable must be bound."""
        out = QI_ZERO
        vals = [
            _as_gaussian(assignment[n]) for n in self.ring.names
        ]
        for ev, c in self.terms.items():
            t = c
            for v, e in zip(vals, ev):
                if e:
                    t = t * v ** e
            out = out + t
        return out

    def subs(self, assignment):
        """Substitute some variables by scalars, staying in the ring."""
        out = self.ring.zero()
        for ev, c in self.terms.items():
            t = self.ring.const(c)
            for name, e in zip(self.ring.names, ev):
                if not e:
                    continue
                if name in assignment:
                    t = t * self.ring.const(_as_gaussian(assignment[name]) ** e)
                else:
                    t = t * self.ring.var(name) ** e
            out = out + t
        return out

    # -- gcd ----------------------------------------------------------------

    def monic(self):
        if not self.terms:
            return self
        _, lc = self.leading()
        return self * lc.inv()

    def __str__(self):
        return _poly_str(self)

    def __repr__(self):
        return "<MultiPoly %s>" % (self,)


def _poly_str(p):
    if not p.terms:
        return "0"
    bits = []
    for ev in sorted(p.terms, key=_grlex_key, reverse=True):
        c = p.terms[ev]
        mono = "*".join(
            (n if e == 1 else "%s^%d" % (n, e))
            for n, e in zip(p.ring.names, ev)
            if e
        )
        if not mono:
            t = str(c)
        elif c == QI_ONE:
            t = mono
        elif c == -QI_ONE:
            t = "-" + mono
        else:
            cs = str(c)
            if "+" in cs[1:] or "-" in cs[1:]:
                cs = "(%s)" % cs
            t = "%s*%s" % (cs, mono)
        if bits and not t.startswith("-"):
            bits.append("+")
            bits.append(t)
        elif bits:
            bits.append("-")
            bits.append(t[1:])
        else:
            bits.append(t)
    return " ".join(bits)


def _to_recursive(p, k):
    """View p as a univariate poly in variable #k with MultiPoly coefficients
    (in the same ring, exponent 0 at slot k).  Returns dict deg -> MultiPoly."""
    out = {}
    for ev, c in p.terms.items():
        d = ev[k]
        rest = ev[:k] + (0,) + ev[k + 1:]
        co = out.get(d)
        t = MultiPoly(p.ring, {rest: c})
        out[d] = t if co is None else co + t
    return {d: q for d, q in out.items() if q}


def _from_recursive(ring, k, coeffs):
    terms = {}
    for d, q in coeffs.items():
        for ev, c in q.terms.items():
            terms[ev[:k] + (d,) + ev[k + 1:]] = c
    return MultiPoly(ring, terms)


def _min_expvec(p):
    its = iter(p.terms)
    m = list(next(its))
    for ev in its:
        for i, e in enumerate(ev):
            if e < m[i]:
                m[i] = e
    return tuple(m)


def _shift_exps(p, delta):
    """Divide p by the monomial with exponent vector -delta (delta <= 0)."""
    return MultiPoly(p.ring, {
        tuple(a + b for a, b in zip(ev, delta)): c for ev, c in p.terms.items()
    })


def _rec_norm(rec):
    return {d: q for d, q in rec.items() if q}


# -- integer-pair polynomial kernel for the PRS core ------------------------
# Inside the pseudo-remainder sequence every coefficient is a polynomial over
# the Gaussian integers, stored as {expvec: (re, im)} with plain ints: this
# sidesteps Fraction normalization, which otherwise dominates the runtime.


def _zrec_from(rec):
    """Recursive dict deg -> MultiPoly, to deg -> integer-pair poly with one
    overall denominator-clearing scale (a common factor is irrelevant for
    the gcd, but per-slot scaling would change the polynomial)."""
    from math import gcd as _igcd
    lcm = 1
    for q in rec.values():
        for c in q.terms.values():
            for den in (c.re.denominator, c.im.denominator):
                lcm = lcm // _igcd(lcm, den) * den
    return {
        d: {ev: (int(c.re * lcm), int(c.im * lcm))
            for ev, c in q.terms.items()}
        for d, q in rec.items()
    }


def _zp_to_multipoly(zp, ring):
    return MultiPoly(ring, {
        ev: GaussianRational(re, im) for ev, (re, im) in zp.items()})


def _zp_mul(a, b):
    out = {}
    for ev1, (x1, y1) in a.items():
        for ev2, (x2, y2) in b.items():
            ev = tuple(u + v for u, v in zip(ev1, ev2))
            re = x1 * x2 - y1 * y2
            im = x1 * y2 + y1 * x2
            cur = out.get(ev)
            if cur is not None:
                re += cur[0]
                im += cur[1]
            if re or im:
                out[ev] = (re, im)
            else:
                out.pop(ev, None)
    return out


def _zp_pow(a, n):
    if n == 0:
        nv = len(next(iter(a))) if a else 0
        return {(0,) * nv: (1, 0)}
    out = None
    base = a
    while n:
        if n & 1:
            out = base if out is None else _zp_mul(out, base)
        n >>= 1
        if n:
            base = _zp_mul(base, base)
    return out


def _zi_divexact(a, b):
    """Exact division of Gaussian-integer pairs; None when not exact."""
    n = b[0] * b[0] + b[1] * b[1]
    re = a[0] * b[0] + a[1] * b[1]
    im = a[1] * b[0] - a[0] * b[1]
    if re % n or im % n:
        return None
    return (re // n, im // n)


def _zp_divexact(a, b):
    """Exact division of integer-pair polys; raises ValueError if not exact."""
    if not b:
        raise DivisionByZero("zp division by zero")
    rem = dict(a)
    bev = max(b, key=_grlex_key)
    blc = b[bev]
    out = {}
    while rem:
        rev = max(rem, key=_grlex_key)
        qev = tuple(u - v for u, v in zip(rev, bev))
        if any(e < 0 for e in qev):
            raise ValueError("zp division not exact")
        qc = _zi_divexact(rem[rev], blc)
        if qc is None:
            raise ValueError("zp division not exact")
        out[qev] = qc
        for ev2, c2 in b.items():
            ev = tuple(u + v for u, v in zip(qev, ev2))
            re = qc[0] * c2[0] - qc[1] * c2[1]
            im = qc[0] * c2[1] + qc[1] * c2[0]
            cur = rem.get(ev, (0, 0))
            cur = (cur[0] - re, cur[1] - im)
            if cur == (0, 0):
                rem.pop(ev, None)
            else:
                rem[ev] = cur
    return out


def _prem_rec(a, b):
    """Pseudo-remainder on recursive dicts deg -> integer-pair poly."""
    da, db = max(a), max(b)
    lb = b[db]
    r = dict(a)
    steps = 0
    while r and max(r) >= db:
        dr = max(r)
        lr = r.pop(dr)
        nr = {d: _zp_mul(c, lb) for d, c in r.items()}
        for d, c in b.items():
            if d == db:
                continue
            dd = d + dr - db
            t = _zp_mul(c, lr)
            cur = nr.get(dd)
            if cur is None:
                nr[dd] = {ev: (-re, -im) for ev, (re, im) in t.items()}
            else:
                for ev, (re, im) in t.items():
                    c0 = cur.get(ev, (0, 0))
                    c0 = (c0[0] - re, c0[1] - im)
                    if c0 == (0, 0):
                        cur.pop(ev, None)
                    else:
                        cur[ev] = c0
                if cur:
                    nr[dd] = cur
                else:
                    nr.pop(dd, None)
        r = {d: c for d, c in nr.items() if c}
        steps += 1
    for _ in range(da - db + 1 - steps):
        r = {d: _zp_mul(c, lb) for d, c in r.items()}
    return r


def _subresultant_prs(A, B, nv):
    """Last nonzero subresultant remainder of recursive dicts A, B of
    integer-pair polys; None when the sequence ends at degree 0."""
    if max(A) < max(B):
        A, B = B, A
    one = {(0,) * nv: (1, 0)}
    gg, hh = one, one
    while True:
        if not B:
            return A
        if max(B) == 0:
            return None
        delta = max(A) - max(B)
        R = _prem_rec(A, B)
        if not R:
            return B
        divisor = _zp_mul(gg, _zp_pow(hh, delta))
        A = B
        B = {d: _zp_divexact(q, divisor) for d, q in R.items()}
        B = {d: q for d, q in B.items() if q}
        gg = A[max(A)]
        if delta > 0:
            hh = _zp_divexact(_zp_pow(gg, delta), _zp_pow(hh, delta - 1)) \
                if delta > 1 else gg


def _euclid_fracfield(A, B):
    """Monic Euclid on dicts deg -> RatFunc; coefficients live in the fraction
    field of the remaining variables and stay reduced, so there is no
    pseudo-remainder coefficient blowup."""
    while B:
        da, db = max(A), max(B)
        if da < db:
            A, B = B, A
            continue
        lbinv = B[db].inv()
        bm = {d: c * lbinv for d, c in B.items() if d != db}
        R = dict(A)
        while R and max(R) >= db:
            dr = max(R)
            lr = R.pop(dr)
            for d, c in bm.items():
                dd = d + dr - db
                t = c * lr
                s = R.get(dd)
                s = -t if s is None else s - t
                if s:
                    R[dd] = s
                else:
                    R.pop(dd, None)
        A, B = B, R
    return A


def _zi_clear(rec):
    """Univariate dict deg -> constant MultiPoly, to Gaussian-integer pairs."""
    from math import gcd as _igcd
    lcm = 1
    vals = {}
    for d, q in rec.items():
        c = q.constant_value()
        vals[d] = c
        for den in (c.re.denominator, c.im.denominator):
            lcm = lcm // _igcd(lcm, den) * den
    return {d: (int(c.re * lcm), int(c.im * lcm)) for d, c in vals.items()}


def _zi_content_strip(r):
    from math import gcd as _igcd
    g = 0
    for re, im in r.values():
        g = _igcd(g, _igcd(abs(re), abs(im)))
        if g == 1:
            return r
    if g <= 1:
        return r
    return {d: (re // g, im // g) for d, (re, im) in r.items()}


def _euclid_const_rec(a, b):
    """gcd (up to a constant) for univariate dicts with constant coefficients,
    via a primitive pseudo-remainder sequence over the Gaussian integers.
    Returns a dict deg -> GaussianRational."""
    a, b = _zi_clear(a), _zi_clear(b)
    a, b = _zi_content_strip(a), _zi_content_strip(b)
    while b:
        da, db = max(a), max(b)
        if da < db:
            a, b = b, a
            continue
        lb = b[db]
        r = dict(a)
        while r and max(r) >= db:
            dr = max(r)
            lr = r.pop(dr)
            nr = {}
            for d, (re, im) in r.items():
                nr[d] = (re * lb[0] - im * lb[1], re * lb[1] + im * lb[0])
            for d, (re, im) in b.items():
                if d == db:
                    continue
                dd = d + dr - db
                tre = re * lr[0] - im * lr[1]
                tim = re * lr[1] + im * lr[0]
                cur = nr.get(dd, (0, 0))
                cur = (cur[0] - tre, cur[1] - tim)
                if cur == (0, 0):
                    nr.pop(dd, None)
                else:
                    nr[dd] = cur
            r = _zi_content_strip(nr)
        a, b = b, r
    return {d: GaussianRational(re, im) for d, (re, im) in a.items()}


def _content_rec(rec, ring):
    """gcd of the coefficient polys of a recursive dict."""
    cont = None
    for d in sorted(rec):
        q = rec[d]
        cont = q.monic() if cont is None else _gcd_poly(cont, q)
        if cont.is_constant():
            return ring.one()
    return cont


# Modular images live in GF(p^2) = GF(p)[i], exact because p = 3 (mod 4)
# keeps i^2 = -1 irreducible; machine-sized ints keep the Euclid cheap.
_BOUND_PRIME = 2 ** 31 - 1

# multivariate gcd core: "prs" (subresultant) or "fracfield"
_GCD_CORE = "prs"


def _mod_scalar(c, p):
    """GaussianRational -> (re, im) mod p, or None if p divides a denominator."""
    dr, di = c.re.denominator % p, c.im.denominator % p
    if dr == 0 or di == 0:
        return None
    re = c.re.numerator * pow(dr, p - 2, p) % p
    im = c.im.numerator * pow(di, p - 2, p) % p
    return (re, im)


def _mod_image(poly, k, point, p):
    """Substitute every variable except #k by ints mod p; returns a dict
    deg -> (re, im) or None when a denominator reduces to zero or the
    degree in #k drops."""
    out = {}
    top = max(ev[k] for ev in poly.terms)
    powcache = {}
    for ev, c in poly.terms.items():
        s = _mod_scalar(c, p)
        if s is None:
            return None
        re, im = s
        for j, e in enumerate(ev):
            if j == k or not e:
                continue
            key = (j, e)
            v = powcache.get(key)
            if v is None:
                v = pow(point[j], e, p)
                powcache[key] = v
            re = re * v % p
            im = im * v % p
        d = ev[k]
        cur = out.get(d)
        if cur is None:
            cur = (re, im)
        else:
            cur = ((cur[0] + re) % p, (cur[1] + im) % p)
        if cur == (0, 0):
            out.pop(d, None)
        else:
            out[d] = cur
    if top not in out:
        return None
    return out


def _mod_inv2(c, p):
    re, im = c
    n = (re * re + im * im) % p
    ni = pow(n, p - 2, p)
    return (re * ni % p, (p - im) * ni % p)


def _mod_euclid_deg(a, b, p):
    """Degree of gcd of univariate dicts over GF(p^2); -1 for gcd of zeros."""
    while b:
        da, db = max(a), max(b)
        if da < db:
            a, b = b, a
            continue
        lbi = _mod_inv2(b[db], p)
        r = dict(a)
        while r and max(r) >= db:
            dr = max(r)
            lr = r.pop(dr)
            fr = (lr[0] * lbi[0] - lr[1] * lbi[1]) % p
            fi = (lr[0] * lbi[1] + lr[1] * lbi[0]) % p
            for d, c in b.items():
                if d == db:
                    continue
                dd = d + dr - db
                tr = (c[0] * fr - c[1] * fi) % p
                ti = (c[0] * fi + c[1] * fr) % p
                cur = r.get(dd)
                if cur is None:
                    cur = ((p - tr) % p, (p - ti) % p)
                else:
                    cur = ((cur[0] - tr) % p, (cur[1] - ti) % p)
                if cur == (0, 0):
                    r.pop(dd, None)
                else:
                    r[dd] = cur
        a, b = b, r
    return max(a) if a else -1


def _image_gcd_bound(F, G, k, rng):
    """Upper bound for deg_k(gcd(F, G)) via a modular univariate image.

    Exact, not probabilistic: when the specialized, reduced images keep the
    x_k-degrees of F and G, the (monic, hence p-integral) gcd survives into
    both images, so the image gcd degree bounds deg_k(gcd) from above.
    Returns None when no degree-preserving image was found."""
    p = _BOUND_PRIME
    nv = len(F.ring.names)
    for _ in range(6):
        point = [rng.randint(2, p - 2) for _ in range(nv)]
        fi = _mod_image(F, k, point, p)
        if fi is None:
            continue
        gi = _mod_image(G, k, point, p)
        if gi is None:
            continue
        return _mod_euclid_deg(fi, gi, p)
    return None


def _gcd_poly(f, g):
    """gcd in Q(I)[vars], normalized monic w.r.t. graded lex.

    Strategy: strip common monomial content, special-case constants and
    univariate inputs (plain Euclid over the field), certify coprimality via
    univariate images when possible, and run a subresultant pseudo-remainder
    sequence on the variable of smallest degree bound otherwise."""
    if not f:
        return g.monic()
    if not g:
        return f.monic()
    ring = f.ring
    nv = len(ring.names)
    mf, mg = _min_expvec(f), _min_expvec(g)
    mc = tuple(min(a, b) for a, b in zip(mf, mg))
    F = _shift_exps(f, tuple(-e for e in mf)) if any(mf) else f
    G = _shift_exps(g, tuple(-e for e in mg)) if any(mg) else g
    mono = MultiPoly(ring, {mc: QI_ONE})
    if F.is_constant() or G.is_constant():
        return mono.monic() if any(mc) else ring.one()
    usedF = [k for k in range(nv) if any(ev[k] for ev in F.terms)]
    usedG = [k for k in range(nv) if any(ev[k] for ev in G.terms)]
    common = sorted(set(usedF) & set(usedG))
    if not common:
        return mono.monic() if any(mc) else ring.one()
    def vdeg(p, k):
        return max(ev[k] for ev in p.terms)
    if len(usedF) == 1 and len(usedG) == 1:
        # univariate over Q(I): primitive integer PRS
        k = common[0]
        Fk, Gk = _rec_norm(_to_recursive(F, k)), _rec_norm(_to_recursive(G, k))
        res = _euclid_const_rec(Fk, Gk)
        if not res or max(res) == 0:
            core = ring.one()
        else:
            core = MultiPoly(ring, {
                tuple(d if i == k else 0 for i in range(nv)): c
                for d, c in res.items()})
        return (mono * core).monic()
    # univariate-image degree bounds: certify coprimality cheaply when the
    # arguments share no factor, which is the dominant case in normalization
    import random as _random
    rng = _random.Random(0x5eed)
    bounds = {}
    for kk in common:
        b = _image_gcd_bound(F, G, kk, rng)
        bounds[kk] = b
        if b is None:
            bounds[kk] = max(vdeg(F, kk), vdeg(G, kk))
    if all(b == 0 for b in bounds.values()):
        return mono.monic() if any(mc) else ring.one()
    # main variable: smallest positive degree bound (a zero bound means the
    # gcd hides in the coefficient contents, so such a variable makes a poor
    # elimination variable); ties broken by smallest actual degree
    def rank(kk):
        b = bounds[kk]
        return (b if b > 0 else 10 ** 9, max(vdeg(F, kk), vdeg(G, kk)))
    k = min(common, key=rank)
    Fk, Gk = _rec_norm(_to_recursive(F, k)), _rec_norm(_to_recursive(G, k))
    contF = _content_rec(Fk, ring)
    contG = _content_rec(Gk, ring)
    cont = _gcd_poly(contF, contG)
    if _GCD_CORE == "prs":
        A = _zrec_from({d: q.divexact(contF) for d, q in Fk.items()})
        B = _zrec_from({d: q.divexact(contG) for d, q in Gk.items()})
        cand = _subresultant_prs(A, B, nv)
        if cand is None or max(cand) == 0:
            core = ring.one()
        else:
            cmp_ = {d: _zp_to_multipoly(q, ring) for d, q in cand.items()}
            ccont = _content_rec(cmp_, ring)
            core = _from_recursive(
                ring, k, {d: q.divexact(ccont) for d, q in cmp_.items()})
        return (mono * cont * core).monic()
    A = {d: RatFunc.of(q.divexact(contF)) for d, q in Fk.items()}
    B = {d: RatFunc.of(q.divexact(contG)) for d, q in Gk.items()}
    cand = _euclid_fracfield(A, B)
    if not cand or max(cand) == 0:
        core = ring.one()
    else:
        # clear denominators, then strip the content in the other variables
        dens = ring.one()
        for c in cand.values():
            dens = dens * c.den.divexact(_gcd_poly(dens, c.den))
        cleared = _rec_norm(
            {d: c.num * dens.divexact(c.den) for d, c in cand.items()})
        ccont = _content_rec(cleared, ring)
        core = _from_recursive(
            ring, k, {d: q.divexact(ccont) for d, q in cleared.items()})
    return (mono * cont * core).monic()


def poly_gcd(f, g):
    """Monic gcd of two MultiPolys (over the field Q(I))."""
    if isinstance(f, MultiPoly) and isinstance(g, MultiPoly):
        if f.ring != g.ring:
            raise ValueError("mixed polynomial rings")
        return _gcd_poly(f, g)
    raise TypeError("poly_gcd wants MultiPoly arguments")


# ---------------------------------------------------------------------------
# rational functions, canonical form
# ---------------------------------------------------------------------------


class RatFunc:
    """num/den with gcd removed and den monic under graded lex."""

    __slots__ = ("num", "den")

    def __init__(self, num, den):
        if not isinstance(num, MultiPoly) or not isinstance(den, MultiPoly):
            raise TypeError("RatFunc wants MultiPoly num and den")
        if num.ring != den.ring:
            raise ValueError("mixed polynomial rings")
        if not den:
            raise DivisionByZero("zero denominator")
        if not num:
            den = den.ring.one()
        elif den.is_constant():
            c = den.constant_value()
            if c != QI_ONE:
                num = num * c.inv()
            den = den.ring.one()
        else:
            g = _gcd_poly(num, den)
            if not g.is_constant():
                num = num.divexact(g)
                den = den.divexact(g)
            _, lc = den.leading()
            if lc != QI_ONE:
                li = lc.inv()
                num = num * li
                den = den * li
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RatFunc is immutable")

    @staticmethod
    def of(x, ring=None):
        if isinstance(x, RatFunc):
            return x
        if isinstance(x, MultiPoly):
            return RatFunc(x, x.ring.one())
        if ring is not None and isinstance(x, (int, Fraction, GaussianRational)):
            return RatFunc(ring.const(x), ring.one())
        raise TypeError("cannot lift %r to RatFunc" % (x,))

    @staticmethod
    def _mk(num, den):
        """Wrap a pair already known to be reduced, normalizing only the
        denominator scale.  Arithmetic below maintains reducedness the way
        Henrici's algorithms do, so the full gcd in __init__ is skipped."""
        if not num:
            den = den.ring.one()
        elif den.is_constant():
            c = den.constant_value()
            if c != QI_ONE:
                num = num * c.inv()
            den = den.ring.one()
        else:
            _, lc = den.leading()
            if lc != QI_ONE:
                li = lc.inv()
                num = num * li
                den = den * li
        out = object.__new__(RatFunc)
        object.__setattr__(out, "num", num)
        object.__setattr__(out, "den", den)
        return out

    @property
    def ring(self):
        return self.num.ring

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            if other.ring != self.ring:
                raise ValueError("mixed polynomial rings")
            return other
        if isinstance(other, MultiPoly):
            return RatFunc.of(other)
        if isinstance(other, (int, Fraction, GaussianRational)):
            return RatFunc.of(self.ring.const(other))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.num, self.den
        c, d = o.num, o.den
        # den == 1 is the common case and (a + c*b)/b stays reduced
        if d.is_constant():
            return RatFunc._mk(a + c * b, b)
        if b.is_constant():
            return RatFunc._mk(c + a * d, d)
        g = _gcd_poly(b, d)
        if g.is_constant():
            return RatFunc._mk(a * d + c * b, b * d)
        bp = b.divexact(g)
        t = a * d.divexact(g) + c * bp
        if not t:
            return RatFunc._mk(t, b.ring.one())
        h = _gcd_poly(t, g)
        if h.is_constant():
            return RatFunc._mk(t, bp * d)
        return RatFunc._mk(t.divexact(h), bp * d.divexact(h))

    __radd__ = __add__

    def __neg__(self):
        return RatFunc._mk(-self.num, self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.num, self.den
        c, d = o.num, o.den
        if not a or not c:
            return RatFunc._mk(b.ring.zero(), b.ring.one())
        if not a.is_constant() and not d.is_constant():
            g1 = _gcd_poly(a, d)
            if not g1.is_constant():
                a = a.divexact(g1)
                d = d.divexact(g1)
        if not c.is_constant() and not b.is_constant():
            g2 = _gcd_poly(c, b)
            if not g2.is_constant():
                c = c.divexact(g2)
                b = b.divexact(g2)
        return RatFunc._mk(a * c, b * d)

    __rmul__ = __mul__

    def inv(self):
        if not self.num:
            raise DivisionByZero("inverse of zero rational function")
        return RatFunc._mk(self.den, self.num)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inv()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inv()

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inv() ** (-n)
        if n == 0:
            return RatFunc.of(self.ring.one())
        # powers of a reduced fraction need no new gcd
        return RatFunc._mk(self.num ** n, self.den ** n)

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        # canonical form makes this representational
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((hash(self.num), hash(self.den)))

    def eval(self, assignment):
        d = self.den.eval(assignment)
        if not d:
            raise DenominatorVanishes(
                "denominator %s vanishes at %s" % (self.den, assignment))
        return self.num.eval(assignment) / d

    def __str__(self):
        ns = str(self.num)
        if self.den == self.den.ring.one():
            return ns
        if len(self.num.terms) > 1:
            ns = "(%s)" % ns
        ds = str(self.den)
        if len(self.den.terms) > 1:
            ds = "(%s)" % ds
        return "%s/%s" % (ns, ds)

    def __repr__(self):
        return "<RatFunc %s>" % (self,)


# ---------------------------------------------------------------------------
# generic helpers over any field element
# ---------------------------------------------------------------------------


def inv(x):
    """Multiplicative inverse of a field element."""
    if isinstance(x, (int, Fraction)):
        if x == 0:
            raise DivisionByZero("inverse of 0")
        return GaussianRational(Fraction(1, 1) / x)
    if isinstance(x, MultiPoly):
        return RatFunc.of(x).inv()
    return x.inv()


def is_zero(x):
    """True when a field element is the zero element."""
    if isinstance(x, (int, Fraction)):
        return x == 0
    return not bool(x)


def specialize(x, assignment):
    """Map a field element to a GaussianRational under name -> scalar.

    Raises DenominatorVanishes when the assignment kills a denominator;
    callers that draw random assignments are expected to resample (see
    draw_assignment)."""
    if isinstance(x, (int, Fraction)):
        return GaussianRational(x)
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, MultiPoly):
        return x.eval(assignment)
    if isinstance(x, RatFunc):
        return x.eval(assignment)
    raise TypeError("cannot specialize %r" % (x,))


def draw_assignment(names, rng, lo=-20, hi=20, reject=None, retries=10):
    """Draw an integer point for the given variable names.

    The sampling policy used by every randomized identity check in the test
    suite and the CLI: coordinates are uniform integers in [lo, hi]; if the
    predicate `reject` (e.g. "some denominator vanishes here") fires, a fresh
    point is drawn, giving up after `retries` attempts."""
    for _ in range(retries):
        asg = {n: GaussianRational(rng.randint(lo, hi)) for n in names}
        if reject is None or not reject(asg):
            return asg
    raise DenominatorVanishes("no admissible specialization point found "
                              "after %d retries" % retries)
