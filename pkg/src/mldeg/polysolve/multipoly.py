"""Sparse multivariate polynomials with exact coefficients and monomial orders."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

Monomial = tuple[int, ...]


class GF:
    """Element of the prime field Z/p."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def __add__(self, o):
        return GF(self.v + _gfv(o, self.p), self.p)

    __radd__ = __add__

    def __sub__(self, o):
        return GF(self.v - _gfv(o, self.p), self.p)

    def __rsub__(self, o):
        return GF(_gfv(o, self.p) - self.v, self.p)

    def __mul__(self, o):
        return GF(self.v * _gfv(o, self.p), self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return GF(-self.v, self.p)

    def __truediv__(self, o):
        w = _gfv(o, self.p)
        if w == 0:
            raise ZeroDivisionError("division by zero in GF(p)")
        return GF(self.v * pow(w, -1, self.p), self.p)

    def __rtruediv__(self, o):
        return GF(_gfv(o, self.p), self.p) / self

    def __bool__(self):
        return self.v != 0

    def __eq__(self, o):
        if isinstance(o, GF):
            return self.v == o.v and self.p == o.p
        if isinstance(o, int):
            return self.v == o % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.v, self.p))

    def __repr__(self):
        return f"{self.v} mod {self.p}"


def _gfv(o, p: int) -> int:
    if isinstance(o, GF):
        return o.v
    if isinstance(o, Fraction):
        return o.numerator * pow(o.denominator, -1, p)
    return int(o)


# --- monomial orders --------------------------------------------------------

@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order on exponent tuples.

    ``kind`` is ``"degrevlex"``, ``"lex"`` or ``"elim"``.  ``perm`` lists the
    variable indices from most to least significant (lex) or gives the
    variable sequence whose last entry is the cheapest (degrevlex).  For
    ``"elim"`` the first ``block`` entries of ``perm`` are eliminated: they
    are compared first with degrevlex, then the rest with degrevlex.
    """

    kind: str
    perm: tuple[int, ...] | None = None
    block: int = 0

    def key_function(self, nvars: int) -> Callable[[Monomial], tuple]:
        perm = self.perm if self.perm is not None else tuple(range(nvars))
        if sorted(perm) != list(range(nvars)):
            raise ValueError(f"order permutation {perm} does not match {nvars} variables")
        if self.kind == "lex":
            if self.perm is None:
                return lambda e: e
            return lambda e: tuple(e[i] for i in perm)
        if self.kind == "degrevlex":
            rev = tuple(reversed(perm))
            return lambda e: (sum(e),) + tuple(-e[i] for i in rev)
        if self.kind == "elim":
            first, rest = perm[:self.block], perm[self.block:]
            rf, rr = tuple(reversed(first)), tuple(reversed(rest))

            def key(e):
                return ((sum(e[i] for i in first),) + tuple(-e[i] for i in rf)
                        + (sum(e[i] for i in rest),) + tuple(-e[i] for i in rr))
            return key
        raise ValueError(f"unknown monomial order {self.kind!r}")

    def __str__(self):
        return self.kind if self.perm is None else f"{self.kind}{list(self.perm)}"


DEGREVLEX = MonomialOrder("degrevlex")
LEX = MonomialOrder("lex")


def lex_order(vars: Sequence[str], significance: Sequence[str]) -> MonomialOrder:
    """Lex order with ``significance[0]`` the largest variable."""
    return MonomialOrder("lex", tuple(vars.index(v) for v in significance))


def as_order(order) -> MonomialOrder:
    if isinstance(order, MonomialOrder):
        return order
    if order in ("degrevlex", "grevlex"):
        return DEGREVLEX
    if order == "lex":
        return LEX
    raise ValueError(f"unknown monomial order {order!r}")


# --- polynomials ------------------------------------------------------------

class MultiPoly:
    """Polynomial in named variables; ``terms`` maps exponent tuples to nonzero
    coefficients (Fraction, RationalFunction or GF)."""

    __slots__ = ("vars", "terms")

    def __init__(self, vars: Sequence[str], terms: Mapping[Monomial, object] | None = None):
        self.vars = tuple(vars)
        n = len(self.vars)
        t = {}
        for e, c in (terms or {}).items():
            if len(e) != n:
                raise ValueError(f"exponent {e} does not match {n} variables")
            if c:
                t[tuple(e)] = c
        self.terms = t

    @classmethod
    def _raw(cls, vars, terms) -> "MultiPoly":
        p = cls.__new__(cls)
        p.vars, p.terms = vars, terms
        return p

    @classmethod
    def constant(cls, vars: Sequence[str], c) -> "MultiPoly":
        return cls(vars, {(0,) * len(vars): c})

    @classmethod
    def variable(cls, vars: Sequence[str], name: str, coeff=Fraction(1)) -> "MultiPoly":
        e = [0] * len(vars)
        e[list(vars).index(name)] = 1
        return cls(vars, {tuple(e): coeff})

    @classmethod
    def monomial(cls, vars: Sequence[str], exp: Sequence[int], coeff=Fraction(1)) -> "MultiPoly":
        return cls(vars, {tuple(exp): coeff})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def _check(self, other: "MultiPoly"):
        if other.vars != self.vars:
            raise ValueError(f"variable mismatch: {self.vars} vs {other.vars}")

    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        return MultiPoly.constant(self.vars, other)

    def __add__(self, other):
        other = self._coerce(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            s = t.get(e)
            if s is None:
                t[e] = c
            else:
                s = s + c
                if s:
                    t[e] = s
                else:
                    del t[e]
        return MultiPoly._raw(self.vars, t)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            if not other:
                return MultiPoly._raw(self.vars, {})
            return MultiPoly._raw(self.vars, {e: c * other for e, c in self.terms.items()})
        self._check(other)
        t: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = t.get(e)
                t[e] = c1 * c2 if s is None else s + c1 * c2
        return MultiPoly._raw(self.vars, {e: c for e, c in t.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = MultiPoly.constant(self.vars, Fraction(1))
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.vars == other.vars and self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, var: str) -> int:
        i = self.vars.index(var)
        return max((e[i] for e in self.terms), default=-1)

    def variables_used(self) -> set[str]:
        return {v for i, v in enumerate(self.vars) if any(e[i] for e in self.terms)}

    def diff(self, var: str) -> "MultiPoly":
        i = self.vars.index(var)
        t = {}
        for e, c in self.terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                t[tuple(f)] = c * e[i]
        return MultiPoly._raw(self.vars, t)

    def euler_derivative(self, var: str) -> "MultiPoly":
        """``var * d/d var``."""
        i = self.vars.index(var)
        return MultiPoly._raw(self.vars, {e: c * e[i] for e, c in self.terms.items() if e[i]})

    def map_coeffs(self, fn: Callable) -> "MultiPoly":
        return MultiPoly(self.vars, {e: fn(c) for e, c in self.terms.items()})

    def evaluate(self, point: Mapping[str, object]):
        """Evaluate at a full assignment of all variables."""
        vals = [point[v] for v in self.vars]
        acc = None
        for e, c in self.terms.items():
            term = c
            for x, k in zip(vals, e):
                if k:
                    term = term * x ** k
            acc = term if acc is None else acc + term
        return acc if acc is not None else 0

    def partial_evaluate(self, point: Mapping[str, object]) -> "MultiPoly":
        idx = [i for i, v in enumerate(self.vars) if v in point]
        t: dict = {}
        for e, c in self.terms.items():
            f = list(e)
            for i in idx:
                if e[i]:
                    c = c * point[self.vars[i]] ** e[i]
                f[i] = 0
            f = tuple(f)
            s = t.get(f)
            t[f] = c if s is None else s + c
        return MultiPoly(self.vars, {e: c for e, c in t.items() if c})

    def change_vars(self, new_vars: Sequence[str]) -> "MultiPoly":
        """Re-express over a different variable list (must contain the used ones)."""
        new_vars = tuple(new_vars)
        pos = {v: i for i, v in enumerate(new_vars)}
        used = self.variables_used()
        missing = used - set(new_vars)
        if missing:
            raise ValueError(f"variables {sorted(missing)} not in target ring")
        t = {}
        for e, c in self.terms.items():
            f = [0] * len(new_vars)
            for i, k in enumerate(e):
                if k:
                    f[pos[self.vars[i]]] = k
            t[tuple(f)] = c
        return MultiPoly._raw(new_vars, t)

    def multiply_monomial(self, exp: Sequence[int]) -> "MultiPoly":
        return MultiPoly._raw(self.vars, {tuple(a + b for a, b in zip(e, exp)): c
                                          for e, c in self.terms.items()})

    def min_exponents(self) -> tuple[int, ...]:
        if not self.terms:
            return (0,) * len(self.vars)
        return tuple(min(col) for col in zip(*self.terms))

    def sorted_terms(self, order: MonomialOrder | str = DEGREVLEX) -> list[tuple[Monomial, object]]:
        key = as_order(order).key_function(len(self.vars))
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    def leading_term(self, order: MonomialOrder | str = DEGREVLEX) -> tuple[Monomial, object]:
        key = as_order(order).key_function(len(self.vars))
        e = max(self.terms, key=key)
        return e, self.terms[e]

    def univariate_coeffs(self, var: str) -> dict[int, object]:
        """Coefficients of a polynomial involving only ``var``."""
        i = self.vars.index(var)
        out = {}
        for e, c in self.terms.items():
            if any(k for j, k in enumerate(e) if j != i):
                raise ValueError(f"polynomial is not univariate in {var}")
            out[e[i]] = c
        return out

    def to_str(self, order: MonomialOrder | str = DEGREVLEX) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms(order):
            mon = "*".join(v if k == 1 else f"{v}^{k}" for v, k in zip(self.vars, e) if k)
            cs = str(c)
            if not mon:
                parts.append(cs)
            elif cs == "1":
                parts.append(mon)
            elif cs == "-1":
                parts.append("-" + mon)
            else:
                if any(ch in cs for ch in "+ ") or ("-" in cs[1:]):
                    cs = f"({cs})"
                parts.append(f"{cs}*{mon}")
        s = " + ".join(parts)
        return s.replace("+ -", "- ")

    def __repr__(self):
        return f"MultiPoly({self.to_str()})"


def polynomial_ring(names: Sequence[str]) -> list[MultiPoly]:
    """Convenience: the variables of Q[names] as polynomials."""
    return [MultiPoly.variable(names, v) for v in names]


def parse_poly(text: str, vars: Sequence[str]) -> MultiPoly:
    """Parse a polynomial with rational coefficients from a Python-like string.

    Only ``+ - * / ** ^``, parentheses, integers and the given variable names
    are accepted.
    """
    import ast

    tree = ast.parse(text.replace("^", "**"), mode="eval")
    gens = {v: MultiPoly.variable(vars, v) for v in vars}

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.BinOp):
            a, b = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return a + b
            if isinstance(node.op, ast.Sub):
                return a - b
            if isinstance(node.op, ast.Mult):
                return a * b
            if isinstance(node.op, ast.Div):
                if isinstance(b, MultiPoly):
                    raise ValueError("division by a polynomial")
                return a * (1 / Fraction(b))
            if isinstance(node.op, ast.Pow):
                if not isinstance(b, (int, Fraction)) or Fraction(b).denominator != 1:
                    raise ValueError("non-integer exponent")
                return a ** int(b) if isinstance(a, MultiPoly) else Fraction(a) ** int(b)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return Fraction(node.value)
        if isinstance(node, ast.Name) and node.id in gens:
            return gens[node.id]
        raise ValueError(f"unsupported expression: {ast.dump(node)}")

    out = ev(tree)
    if not isinstance(out, MultiPoly):
        out = MultiPoly.constant(vars, Fraction(out))
    return out


def common_vars(polys: Iterable[MultiPoly]) -> tuple[str, ...]:
    polys = list(polys)
    if not polys:
        raise ValueError("empty generator list")
    vs = polys[0].vars
    if any(p.vars != vs for p in polys):
        raise ValueError("generators live in different rings")
    return vs
