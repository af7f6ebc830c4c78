"""Dev scratch: exact search for an honest centralizer unit
U = 1 + kappa (A0 - A2) D^-1 + gamma (A0 + I A1 - A2 - I A3) D^-3
with H_mine U = U H_tab on commuting numeric draws, one run per candidate
value of the ambiguous weight-6 table term.  Honest units must satisfy the
position (delta-freeness) constraints, which cut the gauge group down to
exactly these two directions once rows 6..4 are pinned."""

import random
import time

from odonf.coeffs import GaussianRational, PolyRing, RatFunc
from odonf.diffop import build_L4, build_L6
from odonf.opalg import OpContext
from odonf.schur import (_gl_product, conjugate_normal_form,
                         normal_form_constants, solve_schur)
from dev_ctable import Fr, I, ONE, draw_family, expected_table, slot_values

ZERO = GaussianRational(0, 0)


def lin_solve(rows, rhs):
    """Exact Gaussian elimination over the Gaussian rationals; returns
    (consistent, particular-with-free-vars-zero, rank, free-count)."""
    m = len(rows)
    n = len(rows[0]) if m else 0
    aug = [list(r) + [v] for r, v in zip(rows, rhs)]
    pivots = []
    row = 0
    for col in range(n):
        piv = next((r for r in range(row, m) if aug[r][col] != ZERO), None)
        if piv is None:
            continue
        aug[row], aug[piv] = aug[piv], aug[row]
        inv = ONE / aug[row][col]
        aug[row] = [x * inv for x in aug[row]]
        for r in range(m):
            if r != row and aug[r][col] != ZERO:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[row])]
        pivots.append(col)
        row += 1
        if row == m:
            break
    for r in range(row, m):
        if aug[r][n] != ZERO:
            return False, None, len(pivots), n - len(pivots)
    sol = [ZERO] * n
    for r, col in enumerate(pivots):
        sol[col] = aug[r][n]
    return True, sol, len(pivots), n - len(pivots)


LVLS = list(range(1, 10))
KNAMES = tuple("k_%d_%d" % (i, j) for i in LVLS for j in range(4)) + ("tau",)
kring = PolyRing(KNAMES)
kctx = OpContext(kring, 4, I)
NV = len(KNAMES)


def field(x):
    return RatFunc.of(x, ring=kring)


def scalars_glevels(table):
    return {lev: {j: {0: field(c)} for j, c in row.items() if c != ZERO}
            for lev, row in table.items() if row}


rng = random.Random(20260815)
picked = []
seen = set()
while len(picked) < 4:
    try:
        kind, nu, fam = draw_family(rng)
    except Exception:
        continue
    if (kind, nu) in seen:
        continue
    seen.add((kind, nu))
    picked.append((kind, nu, fam))

for kind, nu, fam in picked:
    l4n = build_L4(fam, 16)
    l6n = build_L6(l4n)
    v = slot_values(l4n)
    t0 = time.time()
    soln = solve_schur(l4n, 9)
    hn = conjugate_normal_form(l6n, soln, l4=l4n)
    hm = {lev: {j: c.num.constant_value() for j, c in row.items()}
          for lev, row in normal_form_constants(hn).items()}
    tab, cands = expected_table(v)
    print("== %s nu=%d (pipeline %.2fs) ==" % (kind, nu, time.time() - t0))
    hm_gl = scalars_glevels(hm)
    u_gl = {0: {0: {0: field(ONE)}}}
    for i in LVLS:
        u_gl[-i] = {j: {0: field(kring.var("k_%d_%d" % (i, j)))}
                    for j in range(4)}
    lhs = _gl_product(kctx, hm_gl, u_gl)

    def build_htab(tau_entry):
        htab = {6: {0: {0: field(ONE)}}}
        for (lev, j), val in tab.items():
            entry = field(val)
            if lev == 0 and j in (1, 3):
                pref = (ONE - I) if j == 1 else (ONE + I)
                entry = entry + field(pref * Fr(1, 32)) * tau_entry
            if entry:
                htab.setdefault(lev, {})[j] = {0: entry}
        return htab

    def solve_range(rhs, lev_min, note):
        rows = []
        vals = []
        for lev in range(6, lev_min - 1, -1):
            for j in range(4):
                a = lhs.get(lev, {}).get(j, {})
                b = rhs.get(lev, {}).get(j, {})
                poly = {}
                for mdeg in set(a) | set(b):
                    diff = a.get(mdeg, field(ZERO)) - b.get(mdeg, field(ZERO))
                    if diff:
                        poly[mdeg] = diff
                if not poly:
                    continue
                assert set(poly) <= {0}, (lev, j, sorted(poly))
                num = poly[0].num
                coeffs = [ZERO] * NV
                const = ZERO
                for exps, c in num.terms.items():
                    tot = sum(exps)
                    if tot == 0:
                        const = c
                    elif tot == 1:
                        coeffs[exps.index(1)] = c
                    else:
                        raise AssertionError(
                            "nonlinear term at %s" % ((lev, j),))
                rows.append(coeffs)
                vals.append(-const)
        ok, sol, rank, free = lin_solve(rows, vals)
        msg = ("consistent, rank %d, %d free" % (rank, free)
               if ok else "NO SOLUTION (rank %d)" % rank)
        print("   %-24s levels 6..%d: %d eqs -> %s"
              % (note, lev_min, len(rows), msg))
        if ok:
            nz = [(KNAMES[idx], c) for idx, c in enumerate(sol) if c != ZERO]
            for nm, c in nz:
                print("        %s = %s" % (nm, c))
        return ok

    rhs_c = _gl_product(kctx, u_gl, build_htab(field(ZERO)))
    for lev_min in (0, -1, -2, -3):
        if not solve_range(rhs_c, lev_min, "corrected table"):
            break
