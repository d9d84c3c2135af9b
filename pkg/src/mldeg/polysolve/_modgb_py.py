"""Pure-Python prime-field Buchberger kernel on packed monomials.

Same interface and algorithm as the compiled ``_modgb`` extension; selected
automatically when the extension is not built (or when
``MLDEG_PURE_PYTHON=1``).

A monomial is an int whose fixed-width bit fields hold the exponents plus
one or more degree fields (see :class:`mldeg.polysolve.modgb.Layout`).
Fields carry a guard bit, so divisibility is ``((b | G) - a) & G == G`` and
monomial multiplication is integer addition.  The order key is
``m ^ keyxor``.  A polynomial is a pair of lists ``(mons, coefs)`` sorted by
decreasing key with coefficients in ``[1, p)``.
"""

from __future__ import annotations

import heapq

IMPLEMENTATION = "python"
MAX_FIELDS = None  # unbounded


class _Ctx:
    __slots__ = ("p", "kx", "guard", "var_shifts", "deg_groups", "fmask", "bits")

    def __init__(self, layout, p):
        bits, nvars, var_shifts, deg_groups, keyxor, guard = layout
        self.p = p
        self.kx = keyxor
        self.guard = guard
        self.var_shifts = var_shifts
        self.deg_groups = deg_groups
        self.bits = bits
        self.fmask = (1 << bits) - 1

    def degree(self, m):
        f = self.fmask
        return sum((m >> s) & f for s in self.var_shifts)

    def lcm(self, a, b):
        f = self.fmask
        out = 0
        exps = []
        for s in self.var_shifts:
            x = max((a >> s) & f, (b >> s) & f)
            exps.append(x)
            out |= x << s
        for shift, idx in self.deg_groups:
            out |= sum(exps[i] for i in idx) << shift
        return out

    def coprime(self, a, b):
        f = self.fmask
        for s in self.var_shifts:
            if (a >> s) & f and (b >> s) & f:
                return False
        return True


def _divides(a, b, G):
    return ((b | G) - a) & G == G


def _sub_mul(hm, hc, hs, c, m, gm, gc, ctx):
    """(hm, hc)[hs:] - c * x^m * (gm, gc)[1:]"""
    p, kx, G = ctx.p, ctx.kx, ctx.guard
    om, oc = [], []
    i, nh = hs, len(hm)
    j, ng = 1, len(gm)
    negc = p - c
    while i < nh and j < ng:
        gmon = gm[j] + m
        hk = hm[i] ^ kx
        gk = gmon ^ kx
        if hk > gk:
            om.append(hm[i])
            oc.append(hc[i])
            i += 1
        elif hk < gk:
            if gmon & G:
                raise OverflowError("exponent overflow in packed monomial")
            om.append(gmon)
            oc.append(negc * gc[j] % p)
            j += 1
        else:
            v = (hc[i] + negc * gc[j]) % p
            if v:
                om.append(hm[i])
                oc.append(v)
            i += 1
            j += 1
    if i < nh:
        om.extend(hm[i:])
        oc.extend(hc[i:])
    while j < ng:
        gmon = gm[j] + m
        if gmon & G:
            raise OverflowError("exponent overflow in packed monomial")
        om.append(gmon)
        oc.append(negc * gc[j] % p)
        j += 1
    return om, oc


def _find_reducer(lm, leads, lens, G):
    best = -1
    for k, a in enumerate(leads):
        if ((lm | G) - a) & G == G:
            if best < 0 or lens[k] < lens[best]:
                best = k
    return best


def _reduce(hm, hc, basis, ctx, full):
    leads = [g[0][0] for g in basis]
    lens = [len(g[0]) for g in basis]
    G = ctx.guard
    p = ctx.p
    rm, rc = [], []
    while hm:
        lm = hm[0]
        k = _find_reducer(lm, leads, lens, G)
        if k < 0:
            if not full:
                return hm, hc
            rm.append(lm)
            rc.append(hc[0])
            hm, hc = hm[1:], hc[1:]
            continue
        gm, gc = basis[k]
        c = hc[0] * pow(gc[0], -1, p) % p if gc[0] != 1 else hc[0]
        hm, hc = _sub_mul(hm, hc, 1, c, lm - gm[0], gm, gc, ctx)
    return rm, rc


def _monic(m, c, p):
    if c[0] == 1:
        return m, c
    inv = pow(c[0], -1, p)
    return m, [x * inv % p for x in c]


def _spoly(f, g, ctx):
    L = ctx.lcm(f[0][0], g[0][0])
    mf = L - f[0][0]
    mg = L - g[0][0]
    fm = [x + mf for x in f[0][1:]]
    if any(x & ctx.guard for x in fm) or L & ctx.guard:
        raise OverflowError("exponent overflow in packed monomial")
    # f, g monic: S = x^mf f - x^mg g
    return _sub_mul(fm, f[1][1:], 0, 1, mg, g[0], g[1], ctx)


def _normalize_input(poly, ctx):
    mons, coefs = poly
    p = ctx.p
    terms = sorted(((m, c % p) for m, c in zip(mons, coefs) if c % p), key=lambda t: t[0] ^ ctx.kx,
                   reverse=True)
    return [t[0] for t in terms], [t[1] for t in terms]


def groebner(gens, layout, p):
    """Reduced Gröbner basis over Z/p of packed polynomials ``gens``."""
    ctx = _Ctx(layout, p)
    kx = ctx.kx
    basis = []  # list of (mons, coefs)
    sugar = []
    active = []
    pairs = []
    counter = 0

    def active_polys():
        return [g for g, a in zip(basis, active) if a]

    def update(h, s):
        nonlocal counter
        hl = h[0][0]
        idx = len(basis)
        basis.append(h)
        sugar.append(s)
        active.append(True)
        C = [(i, ctx.lcm(basis[i][0][0], hl), ctx.coprime(basis[i][0][0], hl))
             for i in range(idx) if active[i]]
        D = []
        G = ctx.guard
        while C:
            i, L, cop = C.pop(0)
            if cop or (not any(_divides(L2, L, G) for _, L2, _ in C)
                       and not any(_divides(L2, L, G) for _, L2, _ in D)):
                D.append((i, L, cop))
        kept = [t for t in D if not t[2]]
        newpairs = []
        for item in pairs:
            _, _, _, i, j, L = item
            if (_divides(hl, L, G) and ctx.lcm(basis[i][0][0], hl) != L
                    and ctx.lcm(basis[j][0][0], hl) != L):
                continue
            newpairs.append(item)
        pairs[:] = newpairs
        heapq.heapify(pairs)
        dh = ctx.degree(hl)
        for i, L, _ in kept:
            dL = ctx.degree(L)
            sg = max(sugar[i] + dL - ctx.degree(basis[i][0][0]), s + dL - dh)
            counter += 1
            heapq.heappush(pairs, (sg, L ^ kx, counter, i, idx, L))
        for i in range(idx):
            if active[i] and _divides(hl, basis[i][0][0], G):
                active[i] = False

    polys = [_normalize_input(g, ctx) for g in gens]
    polys = [g for g in polys if g[0]]
    polys.sort(key=lambda g: g[0][0] ^ kx)
    for hm, hc in polys:
        s = max(ctx.degree(m) for m in hm)
        hm, hc = _reduce(hm, hc, active_polys(), ctx, full=False)
        if hm:
            update(_monic(hm, hc, p), s)
    while pairs:
        sg, _, _, i, j, L = heapq.heappop(pairs)
        hm, hc = _spoly(basis[i], basis[j], ctx)
        hm, hc = _reduce(hm, hc, active_polys(), ctx, full=False)
        if hm:
            update(_monic(hm, hc, p), sg)
    return _interreduce(active_polys(), ctx)


def _interreduce(G, ctx):
    guard = ctx.guard
    keep = []
    for a, g in enumerate(G):
        la = g[0][0]
        if any(b != a and _divides(h[0][0], la, guard) and (h[0][0] != la or b < a)
               for b, h in enumerate(G)):
            continue
        keep.append(g)
    out = []
    for a, g in enumerate(keep):
        others = [h for b, h in enumerate(keep) if b != a]
        tm, tc = _reduce(g[0][1:], g[1][1:], others, ctx, full=True)
        out.append(_monic([g[0][0]] + tm, [g[1][0]] + tc, ctx.p))
    out.sort(key=lambda g: g[0][0] ^ ctx.kx)
    return out


def normal_form(poly, basis, layout, p):
    ctx = _Ctx(layout, p)
    hm, hc = _normalize_input(poly, ctx)
    return _reduce(hm, hc, basis, ctx, full=True)


def criterion_holds(basis, layout, p):
    """True when every S-polynomial of ``basis`` reduces to zero."""
    ctx = _Ctx(layout, p)
    for a in range(len(basis)):
        for b in range(a + 1, len(basis)):
            if ctx.coprime(basis[a][0][0], basis[b][0][0]):
                continue
            sm, sc = _spoly(basis[a], basis[b], ctx)
            rm, _ = _reduce(sm, sc, basis, ctx, full=True)
            if rm:
                return False
    return True
