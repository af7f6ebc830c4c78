"""Dev scratch: (1) oracle-verify the intertwining L6 S = S H with the
extended-ring engine; (2) solve for the centralizer unit U with
U^{-1} H_mine U = H_table on a numeric case, to identify the authors'
normalization of the deeper S levels."""

import time
from fractions import Fraction

import sympy

from odonf.coeffs import GaussianRational
from odonf.diffop import OperatorFamily, apply_family_constraints, build_L4, build_L6
from odonf.schur import (conjugate_normal_form, diffop_glevels, extop_glevels,
                         glevels_to_extop, normal_form_constants, solve_schur)
from dev_ctable import expected_table, slot_values

I = GaussianRational(0, 1)
ONE = GaussianRational(1, 0)


# -- a numeric self-adjoint nu=1 case (mismatching rows in the table check)
fam = apply_family_constraints(OperatorFamily("self_adjoint", 1, {
    "w0": GaussianRational(2, 0), "w2": GaussianRational(3, 0),
    "w3": GaussianRational(1, 0), "w4": GaussianRational(-2, 0)}), 16)
l4 = build_L4(fam, 16)
l6 = build_L6(l4)
sol = solve_schur(l4, 9)
h = conjugate_normal_form(l6, sol, l4=l4)
ctx = h.ctx

# (1) oracle: L6 S - S H == 0 on reliable levels via the ExtOp engine
l6_ext = glevels_to_extop(ctx, diffop_glevels(ctx, l6)[0])
lhs = l6_ext * sol.s
rhs = sol.s * h
diff = lhs - rhs
print("intertwining residual levels:", sorted(diff.levels), " floor", diff.ord_floor)
ok = all(r < -3 for r in diff.levels)
print("L6 S == S H on levels >= -3:", ok)

# (2) find U = 1 + sum u_{l,i} A_i D^{-l} with U H_tab = H_mine U
consts_mine = {lev: {j: c.num.constant_value() for j, c in row.items()}
               for lev, row in normal_form_constants(h).items()}
tab, _ = expected_table(slot_values(l4))
consts_tab = {}
for (lev, j), val in tab.items():
    if val != GaussianRational(0, 0):
        consts_tab.setdefault(lev, {})[j] = val
consts_tab.setdefault(6, {})[0] = ONE


def to_sym(g):
    return sympy.Rational(g.re) + sympy.I * sympy.Rational(g.im)


XI = sympy.I


def conv(p, q, v):
    """(sum_i p_i A_i D^v) (sum_k q_k A_k D^u) dilation vector at D^{v+u}."""
    out = [sympy.Integer(0)] * 4
    for i, pc in enumerate(p):
        if pc == 0:
            continue
        for k, qc in enumerate(q):
            if qc == 0:
                continue
            out[(i + k) % 4] += pc * qc * XI ** ((k * v) % 4)
    return [sympy.expand(x) for x in out]


def vec(consts, lev, subs=None):
    row = consts.get(lev, {})
    return [to_sym(row.get(j, GaussianRational(0, 0))) for j in range(4)]


hm = {lev: vec(consts_mine, lev) for lev in range(-3, 7)}
ht = {lev: vec(consts_tab, lev) for lev in range(-3, 7)}

u = {l: [sympy.Symbol("u_%d_%d" % (l, i)) for i in range(4)] for l in range(1, 10)}
U = {0: [sympy.Integer(1), 0, 0, 0]}
for l, row in u.items():
    U[-l] = row

eqs = []
for lam in range(5, -4, -1):
    acc = [sympy.Integer(0)] * 4
    for uu, urow in U.items():
        # H_mine * U at level lam: v + uu = lam
        v = lam - uu
        if v in hm:
            c = conv(hm[v], urow, v)
            acc = [a + x for a, x in zip(acc, c)]
        # - U * H_tab
        if v in ht:
            c = conv(urow, ht[v], uu)
            acc = [a - x for a, x in zip(acc, c)]
    for j in range(4):
        e = sympy.expand(acc[j])
        if e != 0:
            eqs.append(e)

unknowns = [s for l in range(1, 10) for s in u[l]]
solset = sympy.linsolve(eqs, unknowns)
print("solutions:", len(solset))
for solvec in solset:
    subs = dict(zip(unknowns, solvec))
    print("U components (nonzero):")
    for l in range(1, 10):
        row = [sympy.simplify(subs[u[l][i]]) for i in range(4)]
        if any(x != 0 for x in row):
            print("  level -%d:" % l, row)
    free = [s for s in unknowns if subs[s] == s]
    print("  free symbols left:", free)
    break
