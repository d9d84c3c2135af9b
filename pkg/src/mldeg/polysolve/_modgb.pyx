# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled prime-field Buchberger kernel.

Monomials are packed into one ``unsigned __int128`` with 8-bit fields (7
value bits plus a guard bit), coefficients live in ``uint64`` below a prime
``p < 2**31``.  The interface matches :mod:`._modgb_py`.
"""

from libc.stdlib cimport malloc, realloc, free
from libc.stdint cimport uint64_t
import heapq

cdef extern from *:
    """
    typedef unsigned __int128 mld_u128;
    """
    ctypedef unsigned long long u128 "mld_u128"

IMPLEMENTATION = "cython"
FIELD_BITS = 8
MAX_FIELDS = 16

cdef u128 MASK64 = 0xFFFFFFFFFFFFFFFF


cdef inline u128 from_py(object x) except? 0:
    cdef unsigned long long lo = x & 0xFFFFFFFFFFFFFFFF
    cdef unsigned long long hi = x >> 64
    return ((<u128>hi) << 64) | (<u128>lo)


cdef inline object to_py(u128 x):
    cdef unsigned long long lo = <unsigned long long>(x & MASK64)
    cdef unsigned long long hi = <unsigned long long>(x >> 64)
    return (<object>hi << 64) | <object>lo


cdef struct Ctx:
    u128 kx
    u128 guard
    uint64_t p
    int nvars
    int var_shift[16]
    int ndeg
    int deg_shift[2]
    int deg_members[2][16]


cdef int make_ctx(Ctx* ctx, object layout, object p) except -1:
    bits, nvars, var_shifts, deg_groups, keyxor, guard = layout
    if bits != FIELD_BITS or nvars + len(deg_groups) > MAX_FIELDS or len(deg_groups) > 2:
        raise OverflowError("layout does not fit the packed 128-bit monomial")
    if p >= (1 << 31):
        raise ValueError("prime must be below 2**31")
    ctx.p = p
    ctx.kx = from_py(keyxor)
    ctx.guard = from_py(guard)
    ctx.nvars = nvars
    cdef int i, g
    for i in range(nvars):
        ctx.var_shift[i] = var_shifts[i]
    ctx.ndeg = len(deg_groups)
    for g in range(ctx.ndeg):
        shift, members = deg_groups[g]
        ctx.deg_shift[g] = shift
        for i in range(16):
            ctx.deg_members[g][i] = 0
        for i in members:
            ctx.deg_members[g][i] = 1
    return 0


cdef inline bint divides(u128 a, u128 b, u128 G):
    return (((b | G) - a) & G) == G


cdef inline int mdegree(Ctx* ctx, u128 m):
    cdef int i, s = 0
    for i in range(ctx.nvars):
        s += <int>((m >> ctx.var_shift[i]) & 0xFF)
    return s


cdef inline bint coprime(Ctx* ctx, u128 a, u128 b):
    cdef int i
    for i in range(ctx.nvars):
        if ((a >> ctx.var_shift[i]) & 0xFF) and ((b >> ctx.var_shift[i]) & 0xFF):
            return False
    return True


cdef u128 mlcm(Ctx* ctx, u128 a, u128 b) except? 0:
    cdef int i, g
    cdef u128 out = 0
    cdef unsigned int x, y
    cdef unsigned int exps[16]
    cdef unsigned int d
    for i in range(ctx.nvars):
        x = <unsigned int>((a >> ctx.var_shift[i]) & 0xFF)
        y = <unsigned int>((b >> ctx.var_shift[i]) & 0xFF)
        if y > x:
            x = y
        exps[i] = x
        out |= (<u128>x) << ctx.var_shift[i]
    for g in range(ctx.ndeg):
        d = 0
        for i in range(ctx.nvars):
            if ctx.deg_members[g][i]:
                d += exps[i]
        if d > 0x7F:
            raise OverflowError("exponent overflow in packed monomial")
        out |= (<u128>d) << ctx.deg_shift[g]
    return out


cdef class KPoly:
    cdef u128* m
    cdef uint64_t* c
    cdef Py_ssize_t n

    def __dealloc__(self):
        free(self.m)
        free(self.c)

    def __len__(self):
        return self.n


cdef KPoly kpoly_alloc(Py_ssize_t n):
    cdef KPoly P = KPoly.__new__(KPoly)
    P.n = n
    P.m = <u128*>malloc((n if n > 0 else 1) * sizeof(u128))
    P.c = <uint64_t*>malloc((n if n > 0 else 1) * sizeof(uint64_t))
    if P.m == NULL or P.c == NULL:
        raise MemoryError()
    return P


cdef KPoly kpoly_from_py(Ctx* ctx, object poly):
    mons, coefs = poly
    cdef uint64_t p = ctx.p
    terms = [(m, c % p) for m, c in zip(mons, coefs) if c % p]
    kx = to_py(ctx.kx)
    terms.sort(key=lambda t: t[0] ^ kx, reverse=True)
    cdef KPoly P = kpoly_alloc(len(terms))
    cdef Py_ssize_t k
    for k in range(P.n):
        P.m[k] = from_py(terms[k][0])
        P.c[k] = terms[k][1]
    return P


cdef object kpoly_to_py(KPoly P):
    cdef Py_ssize_t k
    return [to_py(P.m[k]) for k in range(P.n)], [P.c[k] for k in range(P.n)]


cdef struct Buf:
    u128* m
    uint64_t* c
    Py_ssize_t n
    Py_ssize_t cap


cdef int buf_reserve(Buf* b, Py_ssize_t cap) except -1:
    if cap <= b.cap:
        return 0
    cdef Py_ssize_t newcap = 2 * b.cap
    if newcap < cap:
        newcap = cap
    if newcap < 64:
        newcap = 64
    cdef u128* m = <u128*>realloc(b.m, newcap * sizeof(u128))
    if m == NULL:
        raise MemoryError()
    b.m = m
    cdef uint64_t* c = <uint64_t*>realloc(b.c, newcap * sizeof(uint64_t))
    if c == NULL:
        raise MemoryError()
    b.c = c
    b.cap = newcap
    return 0


cdef class Work:
    """Scratch buffers and the current reducer set."""
    cdef Ctx ctx
    cdef Buf a
    cdef Buf b
    cdef Buf r
    cdef list polys
    cdef u128* leads
    cdef Py_ssize_t* lens
    cdef Py_ssize_t nred

    def __cinit__(self):
        self.a.m = NULL; self.a.c = NULL; self.a.n = 0; self.a.cap = 0
        self.b.m = NULL; self.b.c = NULL; self.b.n = 0; self.b.cap = 0
        self.r.m = NULL; self.r.c = NULL; self.r.n = 0; self.r.cap = 0
        self.leads = NULL
        self.lens = NULL
        self.nred = 0
        self.polys = []

    def __dealloc__(self):
        free(self.a.m); free(self.a.c)
        free(self.b.m); free(self.b.c)
        free(self.r.m); free(self.r.c)
        free(self.leads); free(self.lens)

    cdef int set_reducers(self, list polys) except -1:
        cdef Py_ssize_t k, n = len(polys)
        free(self.leads)
        free(self.lens)
        self.leads = <u128*>malloc((n if n > 0 else 1) * sizeof(u128))
        self.lens = <Py_ssize_t*>malloc((n if n > 0 else 1) * sizeof(Py_ssize_t))
        if self.leads == NULL or self.lens == NULL:
            raise MemoryError()
        cdef KPoly g
        for k in range(n):
            g = <KPoly>polys[k]
            self.leads[k] = g.m[0]
            self.lens[k] = g.n
        self.polys = polys
        self.nred = n
        return 0

    cdef int load_a(self, KPoly P, Py_ssize_t start) except -1:
        cdef Py_ssize_t k, n = P.n - start
        if n < 0:
            n = 0
        buf_reserve(&self.a, n)
        for k in range(n):
            self.a.m[k] = P.m[start + k]
            self.a.c[k] = P.c[start + k]
        self.a.n = n
        return 0

    cdef int sub_mul(self, Py_ssize_t hs, uint64_t c, u128 m, KPoly g) except -1:
        """b = a[hs:] - c * x^m * g[1:], then swap a and b."""
        cdef Ctx* ctx = &self.ctx
        cdef uint64_t p = ctx.p
        cdef u128 kx = ctx.kx
        cdef u128 G = ctx.guard
        buf_reserve(&self.b, self.a.n - hs + g.n)
        cdef u128* am = self.a.m
        cdef uint64_t* ac = self.a.c
        cdef u128* om = self.b.m
        cdef uint64_t* oc = self.b.c
        cdef u128* gm = g.m
        cdef uint64_t* gc = g.c
        cdef Py_ssize_t i = hs, j = 1, k = 0, nh = self.a.n, ng = g.n
        cdef uint64_t negc = p - c
        cdef uint64_t v
        cdef u128 mon, hk, gk
        while i < nh and j < ng:
            mon = gm[j] + m
            hk = am[i] ^ kx
            gk = mon ^ kx
            if hk > gk:
                om[k] = am[i]
                oc[k] = ac[i]
                k += 1
                i += 1
            elif hk < gk:
                if mon & G:
                    raise OverflowError("exponent overflow in packed monomial")
                om[k] = mon
                oc[k] = (negc * gc[j]) % p
                k += 1
                j += 1
            else:
                v = (ac[i] + negc * gc[j]) % p
                if v:
                    om[k] = am[i]
                    oc[k] = v
                    k += 1
                i += 1
                j += 1
        while i < nh:
            om[k] = am[i]
            oc[k] = ac[i]
            k += 1
            i += 1
        while j < ng:
            mon = gm[j] + m
            if mon & G:
                raise OverflowError("exponent overflow in packed monomial")
            om[k] = mon
            oc[k] = (negc * gc[j]) % p
            k += 1
            j += 1
        self.b.n = k
        cdef Buf t = self.a
        self.a = self.b
        self.b = t
        return 0

    cdef Py_ssize_t find_reducer(self, u128 lm):
        cdef Py_ssize_t k, best = -1
        cdef u128 G = self.ctx.guard
        cdef u128* leads = self.leads
        for k in range(self.nred):
            if (((lm | G) - leads[k]) & G) == G:
                if best < 0 or self.lens[k] < self.lens[best]:
                    best = k
        return best

    cdef int reduce_a(self, bint full) except -1:
        """Reduce the polynomial in ``a``.  Top reduction leaves the result in
        ``a``; full reduction leaves it in ``r``."""
        cdef Py_ssize_t hs = 0, k
        cdef KPoly g
        cdef u128 lm
        self.r.n = 0
        while hs < self.a.n:
            lm = self.a.m[hs]
            k = self.find_reducer(lm)
            if k < 0:
                if not full:
                    break
                buf_reserve(&self.r, self.r.n + 1)
                self.r.m[self.r.n] = lm
                self.r.c[self.r.n] = self.a.c[hs]
                self.r.n += 1
                hs += 1
                continue
            g = <KPoly>self.polys[k]
            self.sub_mul(hs + 1, self.a.c[hs], lm - g.m[0], g)
            hs = 0
        return 0

    cdef KPoly monic_from(self, Buf* src, Py_ssize_t prefix_n, KPoly prefix):
        """New monic polynomial: prefix[:prefix_n] followed by src."""
        cdef Py_ssize_t k, n = prefix_n + src.n
        cdef KPoly P = kpoly_alloc(n)
        for k in range(prefix_n):
            P.m[k] = prefix.m[k]
            P.c[k] = prefix.c[k]
        for k in range(src.n):
            P.m[prefix_n + k] = src.m[k]
            P.c[prefix_n + k] = src.c[k]
        cdef uint64_t p = self.ctx.p
        cdef uint64_t inv
        if n and P.c[0] != 1:
            inv = pow(<object>P.c[0], -1, <object>p)
            for k in range(n):
                P.c[k] = (P.c[k] * inv) % p
        return P

    cdef int spoly_into_a(self, KPoly f, KPoly g) except -1:
        cdef Ctx* ctx = &self.ctx
        cdef u128 L = mlcm(ctx, f.m[0], g.m[0])
        cdef u128 mf = L - f.m[0]
        cdef u128 mg = L - g.m[0]
        cdef Py_ssize_t k
        buf_reserve(&self.a, f.n)
        for k in range(1, f.n):
            self.a.m[k - 1] = f.m[k] + mf
            if self.a.m[k - 1] & ctx.guard:
                raise OverflowError("exponent overflow in packed monomial")
            self.a.c[k - 1] = f.c[k]
        self.a.n = f.n - 1
        self.sub_mul(0, 1, mg, g)
        return 0


def groebner(gens, layout, p):
    """Reduced Gröbner basis over Z/p of packed polynomials ``gens``."""
    cdef Work W = Work()
    make_ctx(&W.ctx, layout, p)
    cdef Ctx* ctx = &W.ctx
    cdef list basis = []
    cdef list sugar = []
    cdef list active = []
    cdef list pairs = []
    cdef Py_ssize_t counter = 0
    cdef Py_ssize_t i, j, k, t
    cdef int s
    cdef KPoly h
    kx = to_py(ctx.kx)
    polys = [kpoly_from_py(ctx, q) for q in gens]
    polys = [q for q in polys if len(q)]
    polys.sort(key=lambda q: _lead_key(q, kx))
    for q in polys:
        h = <KPoly>q
        s = 0
        for k in range(h.n):
            if mdegree(ctx, h.m[k]) > s:
                s = mdegree(ctx, h.m[k])
        W.load_a(h, 0)
        W.reduce_a(False)
        if W.a.n == 0:
            continue
        _update(W, basis, sugar, active, pairs, (W.monic_from(&W.a, 0, None), s), &counter, kx)
        W.set_reducers([basis[t] for t in range(len(basis)) if active[t]])
    while pairs:
        item = heapq.heappop(pairs)
        s = item[0]
        i = item[3]
        j = item[4]
        W.spoly_into_a(<KPoly>basis[i], <KPoly>basis[j])
        W.reduce_a(False)
        if W.a.n == 0:
            continue
        _update(W, basis, sugar, active, pairs, (W.monic_from(&W.a, 0, None), s), &counter, kx)
        W.set_reducers([basis[t] for t in range(len(basis)) if active[t]])
    final = [basis[t] for t in range(len(basis)) if active[t]]
    return [kpoly_to_py(q) for q in _interreduce(W, final, kx)]


def _lead_key(KPoly q, kx):
    return to_py(q.m[0]) ^ kx


cdef int _update(Work W, list basis, list sugar, list active, list pairs, tuple new,
                 Py_ssize_t* counter, object kx) except -1:
    cdef Ctx* ctx = &W.ctx
    cdef u128 G = ctx.guard
    cdef KPoly h = <KPoly>new[0]
    cdef int s = new[1]
    cdef u128 hl = h.m[0]
    cdef Py_ssize_t idx = len(basis)
    cdef Py_ssize_t t, a, b, n = 0, i, j
    cdef u128 L
    cdef KPoly gi, gj
    basis.append(h)
    sugar.append(s)
    active.append(True)
    cdef u128* Ls = <u128*>malloc((idx + 1) * sizeof(u128))
    cdef int* cop = <int*>malloc((idx + 1) * sizeof(int))
    cdef int* keep = <int*>malloc((idx + 1) * sizeof(int))
    cdef Py_ssize_t* ids = <Py_ssize_t*>malloc((idx + 1) * sizeof(Py_ssize_t))
    if Ls == NULL or cop == NULL or keep == NULL or ids == NULL:
        free(Ls); free(cop); free(keep); free(ids)
        raise MemoryError()
    cdef bint ok
    try:
        for t in range(idx):
            if active[t]:
                gi = <KPoly>basis[t]
                ids[n] = t
                Ls[n] = mlcm(ctx, gi.m[0], hl)
                cop[n] = coprime(ctx, gi.m[0], hl)
                n += 1
        # sequential Gebauer-Moeller pruning of the new pairs
        for a in range(n):
            keep[a] = 0
            if cop[a]:
                keep[a] = 1
                continue
            ok = True
            for b in range(a + 1, n):
                if divides(Ls[b], Ls[a], G):
                    ok = False
                    break
            if ok:
                for b in range(a):
                    if keep[b] and divides(Ls[b], Ls[a], G):
                        ok = False
                        break
            if ok:
                keep[a] = 1
        # criterion B on the old pairs
        kept_pairs = []
        for item in pairs:
            i = item[3]
            j = item[4]
            gi = <KPoly>basis[i]
            gj = <KPoly>basis[j]
            L = mlcm(ctx, gi.m[0], gj.m[0])
            if (divides(hl, L, G) and mlcm(ctx, gi.m[0], hl) != L
                    and mlcm(ctx, gj.m[0], hl) != L):
                continue
            kept_pairs.append(item)
        pairs[:] = kept_pairs
        heapq.heapify(pairs)
        dh = mdegree(ctx, hl)
        for a in range(n):
            if not keep[a] or cop[a]:
                continue
            t = ids[a]
            gi = <KPoly>basis[t]
            dL = mdegree(ctx, Ls[a])
            sg = max(sugar[t] + dL - mdegree(ctx, gi.m[0]), s + dL - dh)
            counter[0] += 1
            heapq.heappush(pairs, (sg, to_py(Ls[a]) ^ kx, counter[0], t, idx))
        for t in range(idx):
            if active[t]:
                gi = <KPoly>basis[t]
                if divides(hl, gi.m[0], G):
                    active[t] = False
    finally:
        free(Ls); free(cop); free(keep); free(ids)
    return 0


cdef list _interreduce(Work W, list G, object kx):
    cdef Ctx* ctx = &W.ctx
    cdef u128 guard = ctx.guard
    cdef Py_ssize_t a, b, n = len(G)
    cdef KPoly g, h
    cdef list keep = []
    cdef bint drop
    for a in range(n):
        g = <KPoly>G[a]
        drop = False
        for b in range(n):
            h = <KPoly>G[b]
            if b != a and divides(h.m[0], g.m[0], guard) and (h.m[0] != g.m[0] or b < a):
                drop = True
                break
        if not drop:
            keep.append(g)
    cdef list out = []
    for a in range(len(keep)):
        g = <KPoly>keep[a]
        W.set_reducers([keep[b] for b in range(len(keep)) if b != a])
        W.load_a(g, 1)
        W.reduce_a(True)
        out.append(W.monic_from(&W.r, 1, g))
    out.sort(key=lambda q: _lead_key(q, kx))
    return out


def normal_form(poly, basis, layout, p):
    cdef Work W = Work()
    make_ctx(&W.ctx, layout, p)
    W.set_reducers([kpoly_from_py(&W.ctx, bp) for bp in basis])
    cdef KPoly h = kpoly_from_py(&W.ctx, poly)
    W.load_a(h, 0)
    W.reduce_a(True)
    cdef Py_ssize_t k
    return [to_py(W.r.m[k]) for k in range(W.r.n)], [W.r.c[k] for k in range(W.r.n)]


def criterion_holds(basis, layout, p):
    """True when every S-polynomial of ``basis`` reduces to zero."""
    cdef Work W = Work()
    make_ctx(&W.ctx, layout, p)
    polys = [kpoly_from_py(&W.ctx, bp) for bp in basis]
    W.set_reducers(polys)
    cdef Py_ssize_t a, b, n = len(polys)
    cdef KPoly f, g
    for a in range(n):
        for b in range(a + 1, n):
            f = <KPoly>polys[a]
            g = <KPoly>polys[b]
            if coprime(&W.ctx, f.m[0], g.m[0]):
                continue
            W.spoly_into_a(f, g)
            W.reduce_a(True)
            if W.r.n:
                return False
    return True
