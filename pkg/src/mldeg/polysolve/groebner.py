"""Buchberger's algorithm over any exact field whose elements support
``+ - * /`` (Fraction, RationalFunction, GF).

This is the reference engine.  The prime-field kernel in :mod:`.modgb`
implements the same algorithm on packed monomials and is what the counting
routines use by default.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Sequence

from .multipoly import DEGREVLEX, MonomialOrder, MultiPoly, as_order, common_vars

Term = tuple  # (key, exponent, coefficient)


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _coprime(a, b) -> bool:
    return not any(x and y for x, y in zip(a, b))


class _Engine:
    def __init__(self, nvars: int, order: MonomialOrder):
        self.n = nvars
        self.key = order.key_function(nvars)

    def internal(self, p: MultiPoly) -> list[Term]:
        key = self.key
        return sorted(((key(e), e, c) for e, c in p.terms.items()), reverse=True,
                      key=lambda t: t[0])

    def sub_mul(self, h: list[Term], c, m, g: list[Term], start_h=1, start_g=1) -> list[Term]:
        """h[start_h:] - c * x^m * g[start_g:]"""
        key = self.key
        out = []
        i, j = start_h, start_g
        nh, ng = len(h), len(g)
        gi = None
        while True:
            if gi is None and j < ng:
                _, ge, gc = g[j]
                e = tuple(a + b for a, b in zip(ge, m))
                gi = (key(e), e, -(c * gc))
            if i >= nh:
                if gi is None:
                    break
                out.append(gi)
                gi = None
                j += 1
                continue
            if gi is None:
                out.extend(h[i:])
                break
            hk = h[i][0]
            if hk > gi[0]:
                out.append(h[i])
                i += 1
            elif hk < gi[0]:
                out.append(gi)
                gi = None
                j += 1
            else:
                s = h[i][2] + gi[2]
                if s:
                    out.append((hk, h[i][1], s))
                i += 1
                gi = None
                j += 1
        return out

    def monic(self, h: list[Term]) -> list[Term]:
        inv = 1 / h[0][2]
        return [(k, e, c * inv) for k, e, c in h]

    def reduce(self, h: list[Term], basis: Sequence[list[Term]], full: bool) -> list[Term]:
        done: list[Term] = []
        while h:
            k, e, c = h[0]
            red = None
            for g in basis:
                if _divides(g[0][1], e):
                    if red is None or len(g) < len(red):
                        red = g
            if red is None:
                if not full:
                    return h
                done.append(h[0])
                h = h[1:]
                continue
            h = self.sub_mul(h, c / red[0][2], _sub(e, red[0][1]), red)
        return done

    def spoly(self, f: list[Term], g: list[Term]) -> list[Term]:
        L = _lcm(f[0][1], g[0][1])
        mf = _sub(L, f[0][1])
        mg = _sub(L, g[0][1])
        key = self.key
        lhs = [(key(t), t, c) for t, c in ((tuple(a + b for a, b in zip(e, mf)), c) for _, e, c in f[1:])]
        return self.sub_mul([None] + lhs, f[0][2] / g[0][2], mg, g)

    def buchberger(self, gens: list[list[Term]]) -> list[list[Term]]:
        G: list[list[Term]] = []
        sugar: list[int] = []
        active: list[bool] = []
        pairs: list = []
        counter = 0
        key = self.key

        def update(h, s):
            nonlocal counter
            hl = h[0][1]
            idx = len(G)
            G.append(h)
            sugar.append(s)
            active.append(True)
            cand = []
            for i in range(idx):
                if not active[i]:
                    continue
                gl = G[i][0][1]
                cand.append((i, _lcm(gl, hl), _coprime(gl, hl)))
            # Gebauer-Moeller: criteria M and F on the new pairs, then the product criterion
            C = list(cand)
            D = []
            while C:
                i, L, cop = C.pop(0)
                if cop or not any(_divides(L2, L) for _, L2, _ in C) and \
                        not any(_divides(L2, L) for _, L2, _ in D):
                    D.append((i, L, cop))
            kept = [t for t in D if not t[2]]
            # criterion B on old pairs
            nonlocal_pairs = []
            for item in pairs:
                _, _, _, i, j, L = item
                if (_divides(hl, L) and _lcm(G[i][0][1], hl) != L and _lcm(G[j][0][1], hl) != L):
                    continue
                nonlocal_pairs.append(item)
            pairs[:] = nonlocal_pairs
            heapq.heapify(pairs)
            for i, L, cop in kept:
                di = sum(L) - sum(G[i][0][1])
                dh = sum(L) - sum(hl)
                sg = max(sugar[i] + di, s + dh)
                counter += 1
                heapq.heappush(pairs, (sg, key(L), counter, i, idx, L))
            for i in range(idx):
                if active[i] and _divides(hl, G[i][0][1]):
                    active[i] = False

        for f in sorted(gens, key=lambda p: p[0][0]):
            s = max(sum(e) for _, e, _ in f)
            h = self.reduce(f, [g for g, a in zip(G, active) if a], full=False)
            if h:
                update(self.monic(h), s)
        while pairs:
            sg, _, _, i, j, L = heapq.heappop(pairs)
            h = self.spoly(G[i], G[j])
            h = self.reduce(h, [g for g, a in zip(G, active) if a], full=False)
            if h:
                update(self.monic(h), sg)
        return self.interreduce([g for g, a in zip(G, active) if a])

    def interreduce(self, G: list[list[Term]]) -> list[list[Term]]:
        G = [g for g in G if not any(h is not g and _divides(h[0][1], g[0][1]) and
                                     (h[0][1] != g[0][1] or id(h) < id(g)) for h in G)]
        out = []
        for g in G:
            others = [h for h in G if h is not g]
            r = [g[0]] + self.reduce(g[1:], others, full=True) if len(g) > 1 else g
            out.append(self.monic(r))
        out.sort(key=lambda p: p[0][0])
        return out


@dataclass
class GroebnerBasis:
    """Reduced Gröbner basis; generators are monic and sorted by leading term."""

    generators: list[MultiPoly]
    order: MonomialOrder
    vars: tuple[str, ...]
    modulus: int | None = None
    _internal: list = field(default=None, repr=False)

    @property
    def is_unit(self) -> bool:
        return any(all(x == 0 for x in g.leading_term(self.order)[0]) for g in self.generators)

    def leading_monomials(self) -> list[tuple[int, ...]]:
        return [g.leading_term(self.order)[0] for g in self.generators]

    def normal_form(self, f: MultiPoly) -> MultiPoly:
        if self.modulus is not None:
            from .modgb import normal_form_modular
            return normal_form_modular(self, f)
        eng = _Engine(len(self.vars), self.order)
        basis = [eng.internal(g) for g in self.generators]
        h = eng.reduce(eng.internal(f), basis, full=True)
        return MultiPoly(self.vars, {e: c for _, e, c in h})

    def contains(self, f: MultiPoly) -> bool:
        return self.normal_form(f).is_zero()

    def is_zero_dimensional(self) -> bool:
        if self.is_unit:
            return True
        lms = self.leading_monomials()
        n = len(self.vars)
        for i in range(n):
            if not any(e[i] > 0 and all(e[j] == 0 for j in range(n) if j != i) for e in lms):
                return False
        return True

    def standard_monomials(self) -> list[tuple[int, ...]]:
        """Monomials outside the initial ideal (requires zero-dimensionality)."""
        if not self.is_zero_dimensional():
            raise ValueError("ideal is not zero-dimensional")
        if self.is_unit:
            return []
        lms = self.leading_monomials()
        n = len(self.vars)
        bounds = []
        for i in range(n):
            bounds.append(min(e[i] for e in lms if e[i] > 0 and all(e[j] == 0 for j in range(n) if j != i)))
        out = []

        def rec(prefix):
            k = len(prefix)
            if k == n:
                out.append(tuple(prefix))
                return
            for a in range(bounds[k]):
                cand = prefix + [a]
                # prune: any leading monomial dividing the partial monomial padded with zeros
                pad = tuple(cand) + (0,) * (n - k - 1)
                if any(_divides(m, pad) for m in lms):
                    break
                rec(cand)

        rec([])
        key = self.order.key_function(n)
        out.sort(key=key)
        return out

    def quotient_dimension(self) -> int:
        return len(self.standard_monomials())

    def check_buchberger_criterion(self) -> bool:
        """Every S-polynomial reduces to zero modulo the basis."""
        if self.modulus is not None:
            from .modgb import check_criterion_modular
            return check_criterion_modular(self)
        eng = _Engine(len(self.vars), self.order)
        basis = [eng.internal(g) for g in self.generators]
        for a in range(len(basis)):
            for b in range(a + 1, len(basis)):
                s = eng.spoly(basis[a], basis[b])
                if eng.reduce(s, basis, full=True):
                    return False
        return True

    def __iter__(self):
        return iter(self.generators)

    def __len__(self):
        return len(self.generators)


def groebner_basis(gens: Sequence[MultiPoly], order: MonomialOrder | str = DEGREVLEX,
                   *, modulus: int | None = None) -> GroebnerBasis:
    """Reduced Gröbner basis of the ideal generated by ``gens``.

    With ``modulus`` set, coefficients are mapped to Z/p and the compiled (or
    pure-Python fallback) prime-field kernel is used.
    """
    order = as_order(order)
    vars = common_vars(gens)
    if modulus is not None:
        from .modgb import groebner_modular
        return groebner_modular(list(gens), order, modulus)
    eng = _Engine(len(vars), order)
    internal = [eng.internal(g) for g in gens if g]
    if not internal:
        return GroebnerBasis([], order, vars)
    G = eng.buchberger(internal)
    polys = [MultiPoly(vars, {e: c for _, e, c in g}) for g in G]
    polys.sort(key=lambda p: order.key_function(len(vars))(p.leading_term(order)[0]))
    return GroebnerBasis(polys, order, vars)
