"""Solving zero-dimensional systems: torus saturation, solution counts,
eliminants and counting real positive solutions.

Counting works over Z/p by default (two large primes must agree, a third
breaks ties) and exactly over the coefficient field on request.  Counts with
multiplicity come from the number of standard monomials; distinct counts
from the squarefree part of the minimal polynomial of a random linear form.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction
from math import gcd, isqrt
from typing import Callable, Sequence

from sympy import prevprime

from .groebner import GroebnerBasis, groebner_basis
from .multipoly import DEGREVLEX, GF, MonomialOrder, MultiPoly, common_vars, lex_order
from .univariate import (QPoly, RationalFunction, isolate_real_roots, poly_gcd, sign_at_root,
                         squarefree_part, sturm_sequence, refine_root)


class GenericityFailure(RuntimeError):
    """Random choices kept landing on a non-generic configuration."""


class NotZeroDimensional(ValueError):
    """The ideal has infinitely many solutions."""


FINITE, INFINITE, EMPTY = "finite", "infinite", "empty"

_PRIMES: list[int] = []


def large_primes(k: int) -> list[int]:
    """The ``k`` largest primes below 2**31 (deterministic)."""
    while len(_PRIMES) < k:
        _PRIMES.append(prevprime(_PRIMES[-1] if _PRIMES else 2 ** 31))
    return _PRIMES[:k]


@dataclass(frozen=True)
class SolutionCount:
    """Outcome of counting the solutions of a polynomial system.

    ``distinct`` counts points; ``quotient_dim`` counts them with
    multiplicity.  Both are 0 for an inconsistent system and ``None`` when
    the solution set is infinite.
    """

    kind: str
    distinct: int | None = None
    quotient_dim: int | None = None

    @classmethod
    def finite(cls, distinct: int, quotient_dim: int) -> "SolutionCount":
        if distinct > quotient_dim:
            raise ValueError("distinct count exceeds the quotient dimension")
        return cls(FINITE, distinct, quotient_dim)

    @classmethod
    def infinite(cls) -> "SolutionCount":
        return cls(INFINITE)

    @classmethod
    def empty(cls) -> "SolutionCount":
        return cls(EMPTY, 0, 0)

    @property
    def is_finite(self) -> bool:
        return self.kind != INFINITE

    def __str__(self):
        return "inf" if self.kind == INFINITE else str(self.distinct)


# --- saturation ---------------------------------------------------------------

def _one_like(polys: Sequence[MultiPoly]):
    for p in polys:
        for c in p.terms.values():
            return c * 0 + 1 if not isinstance(c, Fraction) else Fraction(1)
    return Fraction(1)


def _fresh_name(vars: Sequence[str], base: str = "y") -> str:
    name = base
    k = 0
    while name in vars:
        k += 1
        name = f"{base}{k}"
    return name


def rabinowitsch_system(gens: Sequence[MultiPoly], sat_vars: Sequence[str]):
    """Adjoin ``y`` with ``y * prod(sat_vars) - 1``; returns (polys, vars, y)."""
    vars = common_vars(gens)
    if not sat_vars:
        return list(gens), vars, None
    y = _fresh_name(vars)
    ext = (y,) + tuple(vars)
    one = _one_like(gens)
    lifted = [g.change_vars(ext) for g in gens]
    e = [0] * len(ext)
    e[0] = 1
    for v in sat_vars:
        e[ext.index(v)] += 1
    rel = MultiPoly(ext, {tuple(e): one, (0,) * len(ext): -one})
    return lifted + [rel], ext, y


def saturate_torus(gens: Sequence[MultiPoly], vars: Sequence[str] | None = None, *,
                   modulus: int | None = None) -> list[MultiPoly]:
    """Generators of ``(gens) : (prod vars)^infinity``.

    Eliminates the Rabinowitsch variable with a block order; the result is a
    Gröbner basis of the saturation for the degrevlex order on the remaining
    variables.
    """
    base = common_vars(gens)
    sat = tuple(base if vars is None else vars)
    if not sat:
        return list(groebner_basis(gens, DEGREVLEX, modulus=modulus).generators)
    ext_gens, ext, y = rabinowitsch_system(gens, sat)
    order = MonomialOrder("elim", tuple(range(len(ext))), 1)
    gb = groebner_basis(ext_gens, order, modulus=modulus)
    out = []
    for g in gb.generators:
        if g.degree_in(y) <= 0:
            out.append(g.change_vars(base))
    return out


# --- linear algebra helpers -----------------------------------------------------

class _Field:
    """Arithmetic on plain ints modulo p, or on exact Python field elements."""

    def __init__(self, p: int | None):
        self.p = p

    def norm(self, x):
        return x % self.p if self.p else x

    def inv(self, x):
        return pow(x, -1, self.p) if self.p else 1 / x

    def mul(self, a, b):
        return a * b % self.p if self.p else a * b

    def sub(self, a, b):
        return (a - b) % self.p if self.p else a - b


class _Echelon:
    """Incremental row echelon form that remembers how each stored row was
    combined from the inserted vectors."""

    def __init__(self, F: _Field):
        self.F = F
        self.rows: list[tuple[int, dict, dict]] = []  # (pivot, vector, combination)

    def reduce(self, vec: dict, combo: dict):
        F = self.F
        vec, combo = dict(vec), dict(combo)
        for piv, rv, rc in self.rows:
            a = vec.get(piv)
            if not a:
                continue
            for k, x in rv.items():
                v = F.sub(vec.get(k, 0), F.mul(a, x))
                if v:
                    vec[k] = v
                else:
                    vec.pop(k, None)
            for k, x in rc.items():
                v = F.sub(combo.get(k, 0), F.mul(a, x))
                if v:
                    combo[k] = v
                else:
                    combo.pop(k, None)
        return vec, combo

    def insert(self, vec: dict, combo: dict) -> bool:
        """Add a vector; False (and nothing stored) if it is dependent."""
        vec, combo = self.reduce(vec, combo)
        if not vec:
            return False
        F = self.F
        piv = min(vec)
        inv = F.inv(vec[piv])
        vec = {k: F.mul(x, inv) for k, x in vec.items()}
        combo = {k: F.mul(x, inv) for k, x in combo.items()}
        # keep stored rows reduced at the new pivot
        new_rows = []
        for p2, rv, rc in self.rows:
            a = rv.get(piv)
            if a:
                rv = dict(rv)
                rc = dict(rc)
                for k, x in vec.items():
                    v = F.sub(rv.get(k, 0), F.mul(a, x))
                    if v:
                        rv[k] = v
                    else:
                        rv.pop(k, None)
                for k, x in combo.items():
                    v = F.sub(rc.get(k, 0), F.mul(a, x))
                    if v:
                        rc[k] = v
                    else:
                        rc.pop(k, None)
            new_rows.append((p2, rv, rc))
        new_rows.append((piv, vec, combo))
        self.rows = new_rows
        return True

    def express(self, vec: dict) -> dict | None:
        """Coefficients of ``vec`` in the inserted vectors, or None."""
        F = self.F
        rest, combo = self.reduce(vec, {})
        if rest:
            return None
        return {k: (F.norm(-x) if F.p else -x) for k, x in combo.items()}


# --- quotient ring access -------------------------------------------------------

class _Quotient:
    """Normal forms in R/I as sparse vectors over the standard monomials."""

    def __init__(self, gb: GroebnerBasis):
        self.gb = gb
        self.vars = gb.vars
        self.p = gb.modulus
        self.F = _Field(self.p)
        self.std = gb.standard_monomials()
        self.index = {e: i for i, e in enumerate(self.std)}
        self.packed = None
        if self.p is not None:
            from .modgb import PackedReducer
            self.packed = PackedReducer(gb)
            self._lay = self.packed.layout
            self._pindex = {self._lay.pack(e): i for e, i in self.index.items()}

    @property
    def dim(self) -> int:
        return len(self.std)

    # mod p fast path works on packed polynomials
    def _nf_packed(self, poly):
        return self.packed.normal_form_packed(poly)

    def _vec_packed(self, poly) -> dict:
        mons, coefs = poly
        return {self._pindex[m]: c for m, c in zip(mons, coefs)}

    def _mul_linear_packed(self, poly, form):
        """poly * sum(r_i x_i) as a packed polynomial (unsorted, merged)."""
        p = self.p
        acc: dict = {}
        mons, coefs = poly
        for xi, r in form:
            for m, c in zip(mons, coefs):
                k = m + xi
                acc[k] = (acc.get(k, 0) + r * c) % p
        items = [(m, c) for m, c in acc.items() if c]
        return [m for m, _ in items], [c for _, c in items]

    def krylov(self, form: Sequence, extra: Sequence[MultiPoly] = ()):
        """Minimal polynomial of the linear form acting on 1, plus the
        coordinates of each ``extra`` element in the Krylov basis (when the
        Krylov space is the whole quotient).

        ``form`` lists coefficients per variable.  Returns (minpoly
        coefficients low to high, monic; list of coordinate dicts or None).
        """
        F = self.F
        ech = _Echelon(F)
        relation = None
        if self.packed is not None:
            lay = self._lay
            pform = []
            for i, r in enumerate(form):
                if r:
                    e = [0] * len(self.vars)
                    e[i] = 1
                    pform.append((lay.pack(e), r % self.p))
            one = self.packed.pack(MultiPoly.constant(self.vars, 1))
            cur = self._nf_packed(one)
            k = 0
            while True:
                vec = self._vec_packed(cur)
                if not ech.insert(vec, {k: 1}):
                    relation = ech.express(vec)
                    break
                k += 1
                cur = self._nf_packed(self._mul_linear_packed(cur, pform))
            coords = []
            for g in extra:
                v = self._vec_packed(self._nf_packed(self.packed.pack(g)))
                coords.append(ech.express(v))
        else:
            lin = MultiPoly(self.vars, {tuple(int(j == i) for j in range(len(self.vars))): r
                                        for i, r in enumerate(form) if r})
            one = _one_like(self.gb.generators)
            cur = self.gb.normal_form(MultiPoly.constant(self.vars, one))
            k = 0
            while True:
                vec = {self.index[e]: c for e, c in cur.terms.items()}
                if not ech.insert(vec, {k: one}):
                    relation = ech.express(vec)
                    break
                k += 1
                cur = self.gb.normal_form(cur * lin)
            coords = []
            for g in extra:
                nf = self.gb.normal_form(g)
                coords.append(ech.express({self.index[e]: c for e, c in nf.terms.items()}))
        # x^k = sum relation[j] x^j  ->  minpoly = x^k - sum relation[j] x^j
        deg = k
        zero = 0 if self.p is not None else _one_like(self.gb.generators) * 0
        mp = [zero] * (deg + 1)
        for j, c in relation.items():
            mp[j] = F.norm(-c) if self.p is not None else -c
        mp[deg] = 1 if self.p is not None else _one_like(self.gb.generators)
        return mp, coords


def _poly_mod_p_sqfree_degree(coeffs: list[int], p: int) -> int:
    """Degree of the squarefree part of a polynomial over Z/p (p > degree)."""
    f = list(coeffs)
    df = [(i * c) % p for i, c in enumerate(f)][1:]
    g = _gcd_mod(f, df, p)
    return (len(f) - 1) - (len(g) - 1)


def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _gcd_mod(a, b, p):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a = _mod_poly(a, b, p)
        a, b = b, a
    if not a:
        return [0]
    inv = pow(a[-1], -1, p)
    return [x * inv % p for x in a]


def _mod_poly(a, b, p):
    a = list(a)
    inv = pow(b[-1], -1, p)
    db = len(b) - 1
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k] * inv % p
        if c:
            for j in range(db + 1):
                a[k - db + j] = (a[k - db + j] - c * b[j]) % p
    return _trim(a[:db])


def _has_root_mod_p(coeffs: list[int], p: int) -> bool:
    """Whether the integer polynomial has a root in Z/p (``gcd(x^p - x, f)``)."""
    f = _trim([c % p for c in coeffs])
    if len(f) <= 1:
        return not f
    if f[0] == 0:
        return True
    acc, base, e = [1], [0, 1], p
    while e:
        if e & 1:
            acc = _mod_poly(_mul_plain(acc, base, p), f, p)
        base = _mod_poly(_mul_plain(base, base, p), f, p)
        e >>= 1
    acc = acc + [0] * (2 - len(acc))
    acc[1] = (acc[1] - 1) % p
    return len(_gcd_mod(f, _trim(acc), p)) > 1


def _mul_plain(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return [x % p for x in out]


def _sqfree_degree_exact(coeffs) -> int:
    if any(isinstance(c, RationalFunction) for c in coeffs):
        return _sqfree_degree_field(coeffs)
    q = QPoly([Fraction(c) for c in coeffs])
    return squarefree_part(q).degree


def _sqfree_degree_field(coeffs) -> int:
    """Squarefree degree over a generic field (Q(t)) by Euclid on lists."""
    f = list(coeffs)

    def trim(a):
        while a and not a[-1]:
            a.pop()
        return a

    def rem(a, b):
        a = list(a)
        db = len(b) - 1
        inv = 1 / b[-1]
        for k in range(len(a) - 1, db - 1, -1):
            c = a[k] * inv
            if c:
                for j in range(db + 1):
                    a[k - db + j] = a[k - db + j] - c * b[j]
        return trim(a[:db])

    df = trim([c * i for i, c in enumerate(f)][1:])
    a, b = trim(f), df
    while b:
        a, b = b, rem(a, b)
    return (len(f) - 1) - (len(a) - 1)


# --- counting --------------------------------------------------------------------

def _random_form(rng: random.Random, n: int, hi: int = 10 ** 4) -> list[int]:
    return [rng.randint(1, hi) for _ in range(n)]


def _count_with_basis(gb: GroebnerBasis, form_vars: int, rng: random.Random) -> SolutionCount:
    if gb.is_unit:
        return SolutionCount.empty()
    if not gb.is_zero_dimensional():
        return SolutionCount.infinite()
    Q = _Quotient(gb)
    D = Q.dim
    n = len(gb.vars)

    def distinct_once():
        form = [0] * (n - form_vars) + _random_form(rng, form_vars)
        mp, _ = Q.krylov(form)
        if gb.modulus is not None:
            return _poly_mod_p_sqfree_degree(mp, gb.modulus)
        return _sqfree_degree_exact(mp)

    a = distinct_once()
    b = distinct_once()
    if a != b:
        a = max(a, b, distinct_once())
    return SolutionCount.finite(a, D)


def count_torus_solutions(gens: Sequence[MultiPoly], vars: Sequence[str] | None = None, *,
                          seed: int = 0, modular: bool = True,
                          saturate: Sequence[str] | None = None) -> SolutionCount:
    """Count the solutions of ``gens`` with all coordinates in ``vars`` nonzero.

    ``saturate`` restricts the Rabinowitsch factor to a subset of ``vars``
    (callers that can prove the other coordinates never vanish use this to
    keep the ring small).  The count is taken directly in the extended ring,
    where solutions correspond one-to-one to torus solutions.

    Over Q the default is modular: the computation runs modulo two primes
    near 2**31 and a third prime settles any disagreement.  Coefficients in
    Q(t) (or ``modular=False``) use exact arithmetic.
    """
    base = common_vars(gens)
    sat = tuple(base if vars is None else vars) if saturate is None else tuple(saturate)
    ext_gens, ext, y = rabinowitsch_system(gens, sat)
    nform = len(base)
    rng = random.Random(seed)
    exact_field = not modular or any(isinstance(c, RationalFunction)
                                     for g in gens for c in g.terms.values())
    if exact_field:
        gb = groebner_basis(ext_gens, DEGREVLEX)
        return _count_with_basis(gb, nform, rng)
    results = []
    for p in large_primes(8):
        try:
            gb = groebner_basis(ext_gens, DEGREVLEX, modulus=p)
        except (ZeroDivisionError, ValueError):
            continue  # a denominator vanishes modulo p
        results.append(_count_with_basis(gb, nform, rng))
        if len(results) >= 2:
            for r in results:
                if results.count(r) >= 2:
                    return r
    if not results:
        raise GenericityFailure("no usable prime for modular counting")
    return max(results, key=results.count)


# --- eliminants ------------------------------------------------------------------

def _clear_univariate(poly: MultiPoly, var: str) -> MultiPoly:
    """Scale a univariate polynomial to integer (or Z[t]) primitive coefficients
    with positive leading coefficient."""
    coeffs = poly.univariate_coeffs(var)
    vals = list(coeffs.values())
    if any(isinstance(c, RationalFunction) for c in vals):
        rfs = {k: c if isinstance(c, RationalFunction) else RationalFunction(c) for k, c in coeffs.items()}
        den = QPoly([1])
        for c in rfs.values():
            den = den * c.den // poly_gcd(den, c.den)
        nums = {k: (c.num * den) // c.den for k, c in rfs.items()}
        g = None
        for q in nums.values():
            g = q if g is None else poly_gcd(g, q)
        nums = {k: q // g for k, q in nums.items()}
        # integer content and sign
        top = nums[max(nums)]
        dens = 1
        for q in nums.values():
            for x in q.c:
                dens = dens * x.denominator // gcd(dens, x.denominator)
        ints = 0
        for q in nums.values():
            for x in q.c:
                ints = gcd(ints, int(x * dens))
        scale = Fraction(dens, ints) * (1 if top.lc() > 0 else -1)
        return MultiPoly(poly.vars, {tuple(k if v == var else 0 for v in poly.vars):
                                     RationalFunction(q * scale) for k, q in nums.items()})
    fr = {k: Fraction(_as_fraction(c)) for k, c in coeffs.items()}
    dens = 1
    for x in fr.values():
        dens = dens * x.denominator // gcd(dens, x.denominator)
    ints = 0
    for x in fr.values():
        ints = gcd(ints, int(x * dens))
    sign = 1 if fr[max(fr)] > 0 else -1
    scale = Fraction(dens * sign, ints)
    return MultiPoly(poly.vars, {tuple(k if v == var else 0 for v in poly.vars): x * scale
                                 for k, x in fr.items()})


def _as_fraction(c):
    if isinstance(c, GF):
        return c.v
    return c


def eliminant(gens: Sequence[MultiPoly], keep_var: str,
              order: MonomialOrder | Sequence[str] | None = None, *,
              modulus: int | None = None, method: str = "krylov") -> MultiPoly:
    """Generator of ``(gens) ∩ k[keep_var]``, cleared to integer (Z[t] over
    Q(t)) primitive coefficients.

    The generator does not depend on a term order.  ``method="krylov"``
    takes the minimal polynomial of multiplication by ``keep_var`` on the
    quotient of a degrevlex basis, which stays cheap where a direct lex
    basis blows up.  ``method="lex"`` reads it off a lex basis with
    ``keep_var`` smallest; ``order`` may then be a lex order or variable
    names from most to least significant, ending with ``keep_var``.
    """
    vars = common_vars(gens)
    if order is not None and not isinstance(order, MonomialOrder) and list(order)[-1] != keep_var:
        raise ValueError("the kept variable must be the smallest in the lex order")
    if method == "krylov":
        gb = groebner_basis(gens, DEGREVLEX, modulus=modulus)
        if gb.is_unit:
            return MultiPoly.constant(vars, _one_like(gens))
        if not gb.is_zero_dimensional():
            raise NotZeroDimensional("the ideal is not zero-dimensional")
        k = vars.index(keep_var)
        mp, _ = _Quotient(gb).krylov([int(i == k) for i in range(len(vars))])
        if modulus is not None:
            mp = [GF(c, modulus) for c in mp]
        g = MultiPoly(vars, {tuple(j if i == k else 0 for i in range(len(vars))): c
                             for j, c in enumerate(mp) if c})
        return g if modulus is not None else _clear_univariate(g, keep_var)
    if method != "lex":
        raise ValueError(f"unknown method {method!r}")
    if order is None:
        order = lex_order(vars, [v for v in vars if v != keep_var] + [keep_var])
    elif not isinstance(order, MonomialOrder):
        order = lex_order(vars, list(order))
    gb = groebner_basis(gens, order, modulus=modulus)
    if gb.is_unit:
        return MultiPoly.constant(vars, _one_like(gens))
    if not gb.is_zero_dimensional():
        raise NotZeroDimensional("the ideal is not zero-dimensional")
    k = vars.index(keep_var)
    for g in gb.generators:
        if all(all(x == 0 for j, x in enumerate(e) if j != k) for e in g.terms):
            return g if modulus is not None else _clear_univariate(g, keep_var)
    raise NotZeroDimensional("no univariate eliminant found")  # pragma: no cover


# --- rational univariate representation -------------------------------------------

def _crt(r1: int, m1: int, r2: int, m2: int) -> int:
    return (r1 + m1 * ((r2 - r1) * pow(m1, -1, m2) % m2)) % (m1 * m2)


def rational_reconstruction(a: int, m: int) -> Fraction | None:
    """The fraction n/d with |n|, d <= sqrt(m/2) and n ≡ a d (mod m), if any."""
    bound = isqrt(m // 2)
    r0, r1 = m, a % m
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound or gcd(r1, abs(s1)) != 1:
        return None
    return Fraction(r1, s1)


@dataclass
class RUR:
    """Rational univariate representation of a radical zero-dimensional ideal.

    The solutions are ``x_i = coords[x_i](T) / chi'(T)`` over the roots ``T``
    of ``chi``, where ``T`` is the value of the linear form ``form``.  Using
    ``chi'`` as common denominator keeps the coefficients far smaller than
    coordinates written in the power basis.
    """

    vars: tuple[str, ...]
    form: list[int]
    chi: QPoly
    coords: dict[str, QPoly]
    primes_used: int = 0
    verified: bool = False

    @property
    def degree(self) -> int:
        return self.chi.degree

    @property
    def denominator(self) -> QPoly:
        return self.chi.derivative() if self.chi.degree > 0 else QPoly([1])

    @cached_property
    def squarefree_chi(self) -> QPoly:
        return squarefree_part(self.chi) if self.chi.degree > 0 else self.chi

    @cached_property
    def sturm(self) -> list[QPoly]:
        return sturm_sequence(self.squarefree_chi)

    def point(self, T: Fraction) -> dict[str, Fraction]:
        """Coordinates at a (rational or approximate) value of ``T``."""
        den = self.denominator(T)
        return {v: h(T) / den for v, h in self.coords.items()}


def _quotient_mod_p(ext_gens, p: int):
    gb = groebner_basis(ext_gens, DEGREVLEX, modulus=p)
    if gb.is_unit:
        return None
    if not gb.is_zero_dimensional():
        raise NotZeroDimensional("the ideal is not zero-dimensional")
    return _Quotient(gb)


def _mul_mod(a, b, m, p):
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _mod_poly(out, m, p) if len(out) >= len(m) else _trim(out)


def _rur_mod_p(Q: "_Quotient", form: list[int], ext_vars):
    """Minimal polynomial of ``form`` and the numerators ``h_i * chi' mod chi``
    of the coordinates, or None when ``form`` does not separate the points."""
    extra = [MultiPoly.variable(ext_vars, v, 1) for v in ext_vars]
    mp, coords = Q.krylov(form, extra)
    if len(mp) - 1 != Q.dim or any(c is None for c in coords):
        return None
    p = Q.p
    mp = [int(x) % p for x in mp]
    dchi = _trim([(i * c) % p for i, c in enumerate(mp)][1:])
    nums = []
    for c in coords:
        h = _trim([int(c.get(k, 0)) % p for k in range(Q.dim)])
        g = _mul_mod(h, dchi, mp, p)
        nums.append(g + [0] * (Q.dim - len(g)))
    return mp, nums


def _candidate_forms(rng: random.Random, nbase: int, nlead: int, retries: int):
    """Single coordinates first, then random forms with growing coefficients
    (small coefficients keep the lifted representation short)."""
    for i in range(nbase):
        yield [0] * nlead + [int(k == i) for k in range(nbase)]
    for attempt in range(retries):
        yield [0] * nlead + _random_form(rng, nbase, hi=10 ** (attempt + 1))


def _residue(q: Fraction, p: int) -> int | None:
    d = q.denominator % p
    return q.numerator * pow(d, -1, p) % p if d else None


def _verify_rur(ext_gens, ext_vars, chi: QPoly, nums: list[QPoly]) -> bool:
    """Exact check that every generator vanishes at ``(g_i(T) / chi'(T))``
    modulo ``chi``, after clearing the denominator."""
    dchi = chi.derivative()
    # remainders modulo a scalar multiple of chi are the same
    chi_q = QPoly(chi.ints())
    powers: dict[tuple[int, int], QPoly] = {}

    def pw(i, k):
        key = (i, k)
        if key not in powers:
            base = nums[i] if i >= 0 else dchi
            powers[key] = QPoly([1]) if k == 0 else (pw(i, k - 1) * base) % chi_q
        return powers[key]

    for g in ext_gens:
        top = max(sum(e) for e in g.terms)
        acc = QPoly()
        for e, c in g.terms.items():
            term = pw(-1, top - sum(e)) * Fraction(c)
            for i, k in enumerate(e):
                if k:
                    term = (term * pw(i, k)) % chi_q
            acc = acc + term
        if acc % chi_q:
            return False
    return True


def rational_univariate_representation(gens: Sequence[MultiPoly], vars: Sequence[str] | None = None,
                                       *, seed: int = 0, saturate: Sequence[str] | None = None,
                                       max_primes: int = 400, retries: int = 5,
                                       exact_limit: int | None = 24, confirmations: int = 3) -> RUR:
    """RUR of the torus part of a zero-dimensional radical ideal over Q.

    Computed modulo a sequence of primes and lifted by CRT and rational
    reconstruction.  Up to degree ``exact_limit`` (``None``: always) the
    candidate is accepted only once it satisfies every generator exactly
    (``verified``).  Above it, exact substitution is too costly in pure
    Python, and the candidate is accepted after ``confirmations`` further
    fresh primes reproduce it.  Raises :class:`GenericityFailure` when no
    linear form among the coordinates and ``retries`` random forms separates
    the solutions.
    """
    base = common_vars(gens)
    sat = tuple(base if vars is None else vars) if saturate is None else tuple(saturate)
    ext_gens, ext, y = rabinowitsch_system(gens, sat)
    rng = random.Random(seed)
    nlead = len(ext) - len(base)
    form = None
    residues: list = []
    modulus = 1
    dim = None
    recon = None
    used, checkpoint, confirmed = 0, 1, 0
    for k, p in enumerate(large_primes(max_primes)):
        try:
            Q = _quotient_mod_p(ext_gens, p)
            if Q is None:
                return RUR(tuple(base), [0] * len(base), QPoly([1]), {}, 1, True)
            if dim is not None and Q.dim != dim:
                if Q.dim < dim:
                    continue  # unlucky prime
                residues, modulus, recon, used, checkpoint, confirmed = [], 1, None, 0, 1, 0
            dim = Q.dim
            if form is None:
                for cand in _candidate_forms(rng, len(base), nlead, retries):
                    res = _rur_mod_p(Q, cand, ext)
                    if res is not None:
                        form = cand
                        break
                else:
                    raise GenericityFailure(f"no separating linear form after {retries} attempts")
            else:
                res = _rur_mod_p(Q, form, ext)
                if res is None:
                    continue
        except ZeroDivisionError:
            continue
        mp, coords = res
        flat = list(mp) + [x for c in coords for x in c]
        if recon is not None:
            # a candidate that also matches this fresh prime is checked exactly
            if all(_residue(r, p) == x for r, x in zip(recon, flat)):
                exact = exact_limit is None or dim <= exact_limit
                confirmed += 1
                if exact or confirmed >= confirmations:
                    chi = QPoly(recon[:dim + 1])
                    cs = [QPoly(recon[dim + 1 + j * dim: dim + 1 + (j + 1) * dim]) for j in range(len(ext))]
                    if not exact or _verify_rur(ext_gens, ext, chi, cs):
                        coords = {v: cs[i] for i, v in enumerate(ext) if v in base}
                        return RUR(tuple(base), form[nlead:], chi, coords, primes_used=k + 1, verified=exact)
                else:
                    continue
            recon, confirmed = None, 0
        if not residues:
            residues, modulus = flat, p
        else:
            residues = [_crt(r, modulus, x, p) for r, x in zip(residues, flat)]
            modulus *= p
        used += 1
        if used >= checkpoint:
            checkpoint = max(checkpoint + 1, int(checkpoint * 1.25))
            cand = []
            for r in residues:
                q = rational_reconstruction(r, modulus)
                if q is None:
                    break
                cand.append(q)
            else:
                recon = cand
    raise GenericityFailure("rational reconstruction did not stabilize")


@dataclass
class RealRoot:
    """One real solution: isolating interval for ``T`` and coordinate signs."""

    interval: tuple[Fraction, Fraction]
    signs: dict[str, int]


def real_solutions(rur: RUR) -> list[RealRoot]:
    out = []
    chi, seq = rur.squarefree_chi, rur.sturm
    den = rur.denominator
    for a, b in isolate_real_roots(chi, seq):
        ds = sign_at_root(den, chi, a, b, seq)
        signs = {v: ds * sign_at_root(h, chi, a, b, seq) for v, h in rur.coords.items()}
        out.append(RealRoot((a, b), signs))
    return out


def refine_coordinates(rur: RUR, root: RealRoot, bits: int = 80) -> dict[str, Fraction]:
    """Approximate coordinate values at a real root (interval refinement)."""
    chi, seq = rur.squarefree_chi, rur.sturm
    a, b = root.interval
    for _ in range(bits):
        a, b = refine_root(chi, seq, a, b)
    return rur.point((a + b) / 2)


def exact_rational_root(rur: RUR, root: RealRoot, bits: int = 200) -> Fraction | None:
    """The root ``T`` itself when it is rational (checked exactly)."""
    chi = rur.squarefree_chi
    a, b = root.interval
    if chi.sign_at(b) == 0:
        return b
    # a rational root of chi is a root of one of its linear factors over Z,
    # so its denominator divides the leading coefficient
    lc = chi.ints()[-1]
    if chi.degree == 1:
        return -chi.c[0] / chi.c[1]
    # a rational root a/b has b | lc, so it survives reduction modulo any
    # prime not dividing lc; no root mod such a prime rules it out
    for q in large_primes(3):
        if lc % q and not _has_root_mod_p(chi.ints(), q):
            return None
    seq = rur.sturm
    for step in range(bits):
        a, b = refine_root(chi, seq, a, b)
        if chi.sign_at(b) == 0:
            return b
        if step % 8 == 7:
            cand = ((a + b) / 2).limit_denominator(min(abs(lc), 2 ** (step // 2)))
            if a < cand <= b and chi.sign_at(cand) == 0:
                return cand
            if (b - a) * lc * lc < 1:
                return None
    return None


def real_positive_count(gens: Sequence[MultiPoly], vars: Sequence[str] | None = None, *,
                        seed: int = 0, positive: Callable[[dict[str, int]], bool] | None = None,
                        saturate: Sequence[str] | None = None) -> int:
    """Number of real solutions whose coordinate signs satisfy ``positive``
    (default: every coordinate positive)."""
    rur = rational_univariate_representation(gens, vars, seed=seed, saturate=saturate)
    test = positive or (lambda s: all(x > 0 for x in s.values()))
    return sum(1 for r in real_solutions(rur) if test(r.signs))
