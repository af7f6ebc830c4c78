"""Dev scratch: treat the weight-6 entries of the printed level-0 row and the
deep rows as unknowns (e20, e21, e30, t1, t3), impose printed rows elsewhere
plus the composite relations, and solve the linear components of
H^2 = D^12 - a over the rational-function field in the fifteen slots.
Reports whether a unique completion exists and diffs it against the printed
deep rows and the weight-6 bracket terms."""

from odonf.coeffs import GaussianRational, PolyRing, RatFunc, is_zero
from odonf.opalg import OpContext
from odonf.schur import _gl_product
from dev_ctable import Fr, I, ONE, expected_table

SLOTS = ("c0", "c1", "b", "d1", "d2", "d3", "d4", "d5", "d6",
         "d7", "d8", "d9", "d10", "d11", "d12")
UNK = ("e20", "e21", "e30", "t1", "t3", "r11")
NAMES = SLOTS + UNK
ring = PolyRing(NAMES)
ctx = OpContext(ring, 4, I)
ZERO = GaussianRational(0, 0)


def field(x):
    return RatFunc.of(x, ring=ring)


v = {nm: field(ring.var(nm)) for nm in SLOTS}
tab, _ = expected_table(v)
u = {nm: field(ring.var(nm)) for nm in UNK}

rows = {6: {0: field(ONE)}}
for (lev, j), val in tab.items():
    if lev <= -2 or (lev == 0 and j in (1, 3)):
        continue
    entry = val if isinstance(val, RatFunc) else field(val)
    if entry:
        rows.setdefault(lev, {})[j] = entry
rows[0][1] = u["t1"]
rows[0][3] = u["t3"]
rows[-1][1] = u["r11"]
rows[-1][3] = -rows[-1][0] - u["r11"] - rows[-1][2]
rows[-2] = {0: u["e20"], 1: u["e21"],
            2: I * u["e20"] - (ONE - I) * u["e21"],
            3: (-ONE - I) * u["e20"] - I * u["e21"]}
rows[-3] = {0: u["e30"], 1: I * u["e30"], 2: -u["e30"], 3: -I * u["e30"]}

hgl = {lev: {j: {0: c} for j, c in by.items() if c}
       for lev, by in rows.items()}
sq = _gl_product(ctx, hgl, hgl)


def linear_parts(val):
    """Split a RatFunc that is affine in the unknowns into
    (coeff-vector, constant)."""
    coeffs = [field(ring.zero()) for _ in UNK]
    const_terms = {}
    den = field(val.den)
    for exps, c in val.num.terms.items():
        extra = exps[len(SLOTS):]
        tot = sum(extra)
        assert tot <= 1, exps
        slot_mono = ring.const(c)
        for idx, e in enumerate(exps[:len(SLOTS)]):
            if e:
                slot_mono = slot_mono * ring.var(SLOTS[idx]) ** e
        if tot == 0:
            const_terms[exps] = slot_mono
        else:
            k = list(extra).index(1)
            coeffs[k] = coeffs[k] + field(slot_mono) / den
    const = field(ring.zero())
    for mono in const_terms.values():
        const = const + field(mono) / den
    return coeffs, const


eqs = []
for lev in (4, 3, 2, 1, 0):
    for j in range(4):
        if lev == 0 and j in (0, 2):
            continue
        g = sq.get(lev, {}).get(j, {})
        assert set(g) <= {0}, (lev, j)
        val = g.get(0)
        if not val:
            continue
        coeffs, const = linear_parts(val)
        if all(is_zero(c) for c in coeffs) and is_zero(const):
            continue
        eqs.append(((lev, j), coeffs, const))

print("nontrivial equations:", [k for k, _, _ in eqs])

n = len(UNK)
aug = [[*coeffs, -const] for _, coeffs, const in eqs]
labels = [k for k, _, _ in eqs]
pivots = []
row = 0
for col in range(n):
    piv = None
    for r in range(row, len(aug)):
        if not is_zero(aug[r][col]):
            piv = r
            break
    if piv is None:
        continue
    aug[row], aug[piv] = aug[piv], aug[row]
    labels[row], labels[piv] = labels[piv], labels[row]
    inv = field(ring.one()) / aug[row][col]
    aug[row] = [x * inv for x in aug[row]]
    for r in range(len(aug)):
        if r != row and not is_zero(aug[r][col]):
            f = aug[r][col]
            aug[r] = [a - f * b for a, b in zip(aug[r], aug[row])]
    pivots.append(col)
    row += 1

print("rank:", len(pivots), "of", n, "unknowns;", len(aug), "equations")
bad = [labels[r] for r in range(row, len(aug)) if not is_zero(aug[r][n])]
if bad:
    print("INCONSISTENT at equations:", bad)
    for r in range(row, len(aug)):
        if not is_zero(aug[r][n]):
            print("  residual", labels[r], "=", aug[r][n])
else:
    sol = {}
    for r, col in enumerate(pivots):
        sol[UNK[col]] = aug[r][n]
    printed = {"e20": field(tab[(-2, 0)]), "e21": field(tab[(-2, 1)]),
               "e30": field(tab[(-3, 0)]), "r11": field(tab[(-1, 1)])}
    for nm in ("e20", "e21", "e30", "r11"):
        diff = sol[nm] - printed[nm]
        print("%s: matches printed: %s" % (nm, is_zero(diff)),
              "" if is_zero(diff) else " diff = %s" % diff)
    for nm, j in (("t1", 1), ("t3", 3)):
        pref = (ONE - I) if j == 1 else (ONE + I)
        base = field(tab[(0, j)])
        print("%s  = %s" % (nm, sol[nm]))
        print("%s - printed_sans_4b1 = %s" % (nm, sol[nm] - base))
        print("  as bracket units (x32/pref):",
              (sol[nm] - base) * field(Fr(32)) / field(pref))
