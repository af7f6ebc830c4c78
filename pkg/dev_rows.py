"""Dev scratch: symbolic generic-slot comparison of the computed rows
against the printed table, via the scalar-ansatz recursion
Y_t = (L6 S)_t - sum_{u<=-2} S_u Y_{t-u}, to isolate the gauge."""

import time
from fractions import Fraction

from odonf.coeffs import GaussianRational, PolyRing, RatFunc, is_zero
from odonf.diffop import build_L6, generic_order4
from odonf.schur import (_gl_product, _gp_eval, _gp_neg, _gp_add, _gp_scale,
                         diffop_glevels, extop_glevels, solve_schur)
from dev_ctable import expected_table

I = GaussianRational(0, 1)
ONE = GaussianRational(1, 0)

NAMES = ("c0", "c1", "b", "d1", "d2", "d3", "d4", "d5", "d6",
         "d7", "d8", "d9", "d10", "d11", "d12")
ring = PolyRing(NAMES)
l4 = generic_order4(ring)
l6 = build_L6(l4)

DEPTH = 9
t0 = time.time()
sol = solve_schur(l4, DEPTH)
print("solve_schur depth %d symbolic: %.2fs" % (DEPTH, time.time() - t0))
ctx = sol.s.ctx

s_gl = extop_glevels(sol.s)
l6_gl, _ = diffop_glevels(ctx, l6)
t0 = time.time()
ls = _gl_product(ctx, l6_gl, s_gl)
print("L6*S product: %.2fs" % (time.time() - t0))

v = {nm: RatFunc.of(ring.var(nm)) for nm in NAMES}
tab, cands = expected_table(v)

y = {}  # level -> {dil: scalar RatFunc}
mine = {}
for t in range(6, -4, -1):
    acc = dict(ls.get(t, {}))
    for u, su in s_gl.items():
        if u >= 0 or (t - u) not in y:
            continue
        yemb = {t - u: {j: {0: c} for j, c in y[t - u].items() if c}}
        prod = _gl_product(ctx, {u: su}, yemb).get(t, {})
        for j, g in prod.items():
            s = _gp_add(acc.get(j, {}), _gp_neg(g))
            if s:
                acc[j] = s
            else:
                acc.pop(j, None)
    row = {}
    for j in range(4):
        g = acc.get(j, {})
        nonconst = {m: c for m, c in g.items() if m != 0 and c}
        if nonconst:
            print("level %d dil %d: NONCONSTANT, degrees %s"
                  % (t, j, sorted(nonconst)))
        row[j] = g.get(0, ctx.field(0))
    y[t] = row
    mine[t] = row

print()
print("=== row comparison (printed - computed) ===")
for t in range(4, -4, -1):
    for j in range(4):
        want = tab.get((t, j))
        if want is None:
            continue
        want = want if isinstance(want, RatFunc) else ctx.field(want)
        got = mine[t][j]
        d = want - got
        if is_zero(d):
            print("row (%d,%d): MATCH" % (t, j))
        else:
            print("row (%d,%d): DIFF = %s" % (t, j, d))
