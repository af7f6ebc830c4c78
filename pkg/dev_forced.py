"""Dev scratch: take the printed rows 6..-1 as given (weight-6 ambiguity as
tau), impose the printed composite relations on rows -2/-3, and solve the
level-4/level-3 components of H^2 = D^12 - a for the deep-row leaders.
Comparing with the printed deep rows isolates any transcription slip."""

from fractions import Fraction

from odonf.coeffs import GaussianRational, PolyRing, RatFunc, is_zero
from odonf.opalg import OpContext
from odonf.schur import _gl_product
from dev_ctable import Fr, I, ONE, expected_table

NAMES = ("c0", "c1", "b", "d1", "d2", "d3", "d4", "d5", "d6",
         "d7", "d8", "d9", "d10", "d11", "d12", "e20", "e21", "e30", "tau")
ring = PolyRing(NAMES)
ctx = OpContext(ring, 4, I)


def field(x):
    return RatFunc.of(x, ring=ring)


v = {nm: field(ring.var(nm)) for nm in NAMES[:15]}
tab, _ = expected_table(v)
e20 = field(ring.var("e20"))
e21 = field(ring.var("e21"))
e30 = field(ring.var("e30"))
tau = field(ring.var("tau"))

rows = {6: {0: field(ONE)}}
for (lev, j), val in tab.items():
    if lev <= -2:
        continue
    entry = val if isinstance(val, RatFunc) else field(val)
    if lev == 0 and j in (1, 3):
        pref = (ONE - I) if j == 1 else (ONE + I)
        entry = entry + field(pref * Fr(1, 32)) * tau
    if entry:
        rows.setdefault(lev, {})[j] = entry
rows[-2] = {0: e20, 1: e21,
            2: I * e20 - (ONE - I) * e21,
            3: (-ONE - I) * e20 - I * e21}
rows[-3] = {0: e30, 1: I * e30, 2: -e30, 3: -I * e30}

hgl = {lev: {j: {0: c} for j, c in by.items() if c}
       for lev, by in rows.items()}
sq = _gl_product(ctx, hgl, hgl)

printed = {"e20": field(tab[(-2, 0)]), "e21": field(tab[(-2, 1)]),
           "e30": field(tab[(-3, 0)])}


def tau_required(val):
    """Substitute printed deep rows into a linear H^2 component and solve
    for tau; returns (kind, payload)."""
    num = val.num
    buckets = {}
    for exps, c in num.terms.items():
        slot = exps[:15]
        extra = exps[15:]
        tot = sum(extra)
        assert tot <= 1, exps
        key = "1" if tot == 0 else NAMES[15 + list(extra).index(1)]
        mono = dict(buckets.get(key, {}))
        mono[slot] = mono.get(slot, GaussianRational(0, 0)) + c
        buckets[key] = mono
    def as_rf(key):
        mono = buckets.get(key, {})
        p = ring.zero()
        for slot, c in mono.items():
            term = ring.const(c)
            for idx, e in enumerate(slot):
                if e:
                    term = term * ring.var(NAMES[idx]) ** e
            p = p + term
        return field(p) / field(val.den)
    const = as_rf("1")
    for nm in ("e20", "e21", "e30"):
        const = const + as_rf(nm) * printed[nm]
    tcoef = as_rf("tau")
    if is_zero(tcoef):
        return ("residual", const)
    return ("tau", -const / tcoef)


for lev in (4, 3):
    for j in range(4):
        g = sq.get(lev, {}).get(j, {})
        assert set(g) <= {0}
        val = g.get(0)
        if not val:
            print("H^2 level %d dil %d: trivially 0" % (lev, j))
            continue
        kind, payload = tau_required(val)
        if kind == "residual":
            print("H^2 level %d dil %d: no tau; residual zero: %s"
                  % (lev, j, is_zero(payload)), "" if is_zero(payload)
                  else payload)
        else:
            print("H^2 level %d dil %d: requires tau = %s" % (lev, j, payload))
