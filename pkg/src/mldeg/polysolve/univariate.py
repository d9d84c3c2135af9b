"""Dense univariate polynomials over Q, the rational function field Q(t), and
exact real-root isolation with Sturm sequences."""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence


def _trim(c: list) -> list:
    while c and c[-1] == 0:
        c.pop()
    return c


class QPoly:
    """Immutable univariate polynomial with Fraction coefficients, low degree first."""

    __slots__ = ("c", "_ints")

    def __init__(self, coeffs: Iterable = ()):
        self.c = tuple(_trim([Fraction(x) for x in coeffs]))
        self._ints = None

    def ints(self) -> list[int]:
        """Integer coefficients of a positive multiple of ``self``."""
        if self._ints is None:
            den = 1
            for x in self.c:
                den = den * x.denominator // gcd(den, x.denominator)
            self._ints = _primitive([x.numerator * (den // x.denominator) for x in self.c])
        return self._ints

    def sign_at(self, x: Fraction) -> int:
        """Sign of ``self(x)`` computed in integers."""
        c = self.ints()
        if not c:
            return 0
        x = Fraction(x)
        n, d = x.numerator, x.denominator
        acc = c[-1]
        dp = 1
        for a in reversed(c[:-1]):
            dp *= d
            acc = acc * n + a * dp
        return (acc > 0) - (acc < 0)

    def eval_exact(self, x: Fraction) -> Fraction:
        x = Fraction(x)
        n, d = x.numerator, x.denominator
        if not self.c:
            return Fraction(0)
        den = 1
        for y in self.c:
            den = den * y.denominator // gcd(den, y.denominator)
        c = [y.numerator * (den // y.denominator) for y in self.c]
        acc = c[-1]
        dp = 1
        for a in reversed(c[:-1]):
            dp *= d
            acc = acc * n + a * dp
        return Fraction(acc, den * dp)

    @classmethod
    def constant(cls, a) -> "QPoly":
        return cls([a])

    @classmethod
    def monomial(cls, k: int, a=1) -> "QPoly":
        return cls([0] * k + [a])

    @property
    def degree(self) -> int:
        return len(self.c) - 1

    def __bool__(self):
        return bool(self.c)

    def __eq__(self, other):
        if isinstance(other, QPoly):
            return self.c == other.c
        if isinstance(other, (int, Fraction)):
            return self.c == QPoly([other]).c
        return NotImplemented

    def __hash__(self):
        return hash(self.c)

    def lc(self) -> Fraction:
        return self.c[-1] if self.c else Fraction(0)

    def __add__(self, other):
        other = _qp(other)
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        return QPoly([x + y for x, y in zip(a, b)] + list(a[len(b):]))

    __radd__ = __add__

    def __neg__(self):
        return QPoly([-x for x in self.c])

    def __sub__(self, other):
        return self + (-_qp(other))

    def __rsub__(self, other):
        return _qp(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QPoly([x * other for x in self.c])
        other = _qp(other)
        if not self.c or not other.c:
            return QPoly()
        out = [Fraction(0)] * (len(self.c) + len(other.c) - 1)
        for i, x in enumerate(self.c):
            if x:
                for j, y in enumerate(other.c):
                    out[i + j] += x * y
        return QPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out, base = QPoly([1]), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def divmod(self, other: "QPoly") -> tuple["QPoly", "QPoly"]:
        if not other.c:
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.c)
        q = [Fraction(0)] * max(len(r) - len(other.c) + 1, 0)
        lc = other.c[-1]
        dg = len(other.c) - 1
        for k in range(len(r) - 1, dg - 1, -1):
            a = r[k]
            if a:
                f = a / lc
                q[k - dg] = f
                for j, b in enumerate(other.c):
                    r[k - dg + j] -= f * b
        return QPoly(q), QPoly(r[:dg])

    def __floordiv__(self, other):
        return self.divmod(_qp(other))[0]

    def __mod__(self, other):
        return self.divmod(_qp(other))[1]

    def monic(self) -> "QPoly":
        return self * (1 / self.c[-1]) if self.c else self

    def derivative(self) -> "QPoly":
        return QPoly([i * x for i, x in enumerate(self.c)][1:])

    def __call__(self, x):
        if isinstance(x, (int, Fraction)):
            return self.eval_exact(x)
        acc = 0 * x if not isinstance(x, (int, Fraction)) else Fraction(0)
        for a in reversed(self.c):
            acc = acc * x + a
        return acc

    def valuation(self) -> int:
        """Order of vanishing at 0 (raises on the zero polynomial)."""
        for i, x in enumerate(self.c):
            if x:
                return i
        raise ValueError("valuation of zero")

    def compose_power(self, n: int) -> "QPoly":
        """Substitute t -> t**n."""
        out = [Fraction(0)] * (n * self.degree + 1) if self.c else []
        for i, x in enumerate(self.c):
            out[i * n] = x
        return QPoly(out)

    def content_primitive(self) -> tuple[Fraction, list[int]]:
        """``self = content * primitive`` with primitive integer coefficients
        and positive leading coefficient."""
        if not self.c:
            return Fraction(0), []
        den = 1
        for x in self.c:
            den = den * x.denominator // gcd(den, x.denominator)
        ints = [int(x * den) for x in self.c]
        g = 0
        for x in ints:
            g = gcd(g, x)
        if ints[-1] < 0:
            g = -g
        return Fraction(g, den), [x // g for x in ints]

    def __repr__(self):
        return f"QPoly({[str(x) for x in self.c]})"

    def to_str(self, var: str = "t") -> str:
        if not self.c:
            return "0"
        parts = []
        for i in range(len(self.c) - 1, -1, -1):
            a = self.c[i]
            if not a:
                continue
            mon = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
            if mon and abs(a) == 1:
                s = mon
            else:
                s = str(abs(a)) + ("*" + mon if mon else "")
            parts.append(("-" if a < 0 else "+", s))
        head = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        return head + "".join(f" {sg} {s}" for sg, s in parts[1:])


def _qp(x) -> QPoly:
    if isinstance(x, QPoly):
        return x
    return QPoly([x])


def _prem(a: list[int], b: list[int]) -> list[int]:
    """Remainder of ``k * a`` by ``b`` for some positive integer ``k``."""
    r = list(a)
    db = len(b) - 1
    lc = b[-1]
    alc, sg = abs(lc), (1 if lc > 0 else -1)
    for k in range(len(r) - 1, db - 1, -1):
        c = r[k]
        if c:
            r = [x * alc for x in r]
            c *= sg
            off = k - db
            for j, y in enumerate(b):
                r[off + j] -= c * y
        r.pop()
    return _trim(r)


def _primitive(a: list[int]) -> list[int]:
    """Divide by the positive content (signs are kept)."""
    g = 0
    for x in a:
        g = gcd(g, x)
        if g == 1:
            return a
    return [x // g for x in a] if g else a


def _int_gcd(a: list[int], b: list[int]) -> list[int]:
    while b:
        a, b = b, _primitive(_prem(a, b))
    return a


_GCD_PRIME = 2 ** 61 - 1


def _gcd_degree_mod_p(a: list[int], b: list[int], p: int) -> int:
    a = _trim([x % p for x in a])
    b = _trim([x % p for x in b])
    while b:
        inv = pow(b[-1], -1, p)
        db = len(b) - 1
        while len(a) > db:
            c = a[-1] * inv % p
            off = len(a) - 1 - db
            for j, y in enumerate(b):
                a[off + j] = (a[off + j] - c * y) % p
            a = _trim(a)
            if not a:
                break
        a, b = b, a
    return len(a) - 1


def poly_gcd(a: QPoly, b: QPoly) -> QPoly:
    """Monic gcd (zero if both are zero)."""
    if not a.c or not b.c:
        return (a if a.c else b).monic()
    if a.degree == 0 or b.degree == 0:
        return QPoly([1])
    ai, bi = a.ints(), b.ints()
    # common power of the variable first; the rest is usually coprime
    va = next(i for i, x in enumerate(ai) if x)
    vb = next(i for i, x in enumerate(bi) if x)
    v = min(va, vb)
    ai, bi = ai[va:], bi[vb:]
    if len(ai) == 1 or len(bi) == 1:
        rest = [1]
    elif ai[-1] % _GCD_PRIME and bi[-1] % _GCD_PRIME and _gcd_degree_mod_p(ai, bi, _GCD_PRIME) == 0:
        # a modular gcd bounds the degree of the true gcd from above
        rest = [1]
    else:
        rest = _int_gcd(ai, bi)
    return QPoly([0] * v + list(rest)).monic()


def squarefree_part(a: QPoly) -> QPoly:
    return (a // poly_gcd(a, a.derivative())).monic()


class RationalFunction:
    """Element of Q(t): reduced quotient with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, _reduced: bool = False):
        num = _qp(num)
        den = QPoly([1]) if den is None else _qp(den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not _reduced:
            if not num:
                den = QPoly([1])
            elif den.degree > 0:
                g = poly_gcd(num, den)
                if g.degree > 0:
                    num, den = num // g, den // g
            lc = den.c[-1]
            if lc != 1:
                num, den = num * (1 / lc), den * (1 / lc)
        self.num, self.den = num, den

    @classmethod
    def t(cls) -> "RationalFunction":
        return cls(QPoly([0, 1]))

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RationalFunction(other)
        if isinstance(other, QPoly):
            other = RationalFunction(other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other):
        other = _rf(other)
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        return self + (-_rf(other))

    def __rsub__(self, other):
        return _rf(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return RationalFunction(self.num * other, self.den, _reduced=bool(other))
        other = _rf(other)
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _rf(other)
        if not other:
            raise ZeroDivisionError("division by zero in Q(t)")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return _rf(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return RationalFunction(1) / self ** (-k)
        return RationalFunction(self.num ** k, self.den ** k, _reduced=True)

    def valuation(self) -> int:
        """t-adic valuation (order at t = 0)."""
        return self.num.valuation() - self.den.valuation()

    def evaluate(self, t0):
        d = self.den(Fraction(t0))
        if d == 0:
            raise ZeroDivisionError(f"denominator vanishes at t = {t0}")
        return self.num(Fraction(t0)) / d

    def compose_power(self, n: int) -> "RationalFunction":
        return RationalFunction(self.num.compose_power(n), self.den.compose_power(n))

    def is_constant(self) -> bool:
        return self.num.degree <= 0 and self.den.degree == 0

    def __repr__(self):
        if self.den.degree == 0:
            return f"RF({self.num.to_str()})"
        return f"RF(({self.num.to_str()})/({self.den.to_str()}))"

    def __str__(self):
        if self.den.degree == 0:
            return self.num.to_str()
        return f"({self.num.to_str()})/({self.den.to_str()})"


def _rf(x) -> RationalFunction:
    if isinstance(x, RationalFunction):
        return x
    return RationalFunction(x)


# --- real roots -----------------------------------------------------------

def _sign(x) -> int:
    return (x > 0) - (x < 0)


def sturm_sequence(p: QPoly) -> list[QPoly]:
    """Sturm sequence of ``p``, each member scaled by a positive constant to
    primitive integer coefficients (sign variations are unaffected)."""
    if not p.c:
        return []
    seq = [p.ints()]
    d = p.derivative()
    if d.c:
        seq.append(d.ints())
    while len(seq) >= 2 and len(seq[-1]) > 1:
        r = _prem(seq[-2], seq[-1])
        if not r:
            break
        seq.append(_primitive([-x for x in r]))
    return [QPoly(q) for q in seq]


def _variations(seq: Sequence[QPoly], x: Fraction) -> int:
    signs = [q.sign_at(x) for q in seq]
    signs = [s for s in signs if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots(seq: Sequence[QPoly], a: Fraction, b: Fraction) -> int:
    """Distinct real roots of ``seq[0]`` in the half-open interval (a, b]."""
    return _variations(seq, a) - _variations(seq, b)


def root_bound(p: QPoly) -> Fraction:
    """Cauchy bound: all complex roots have modulus < the returned value."""
    lc = abs(p.lc())
    return 1 + max((abs(x) / lc for x in p.c[:-1]), default=Fraction(0))


def isolate_real_roots(p: QPoly, seq: Sequence[QPoly] | None = None) -> list[tuple[Fraction, Fraction]]:
    """Disjoint intervals (a, b], each containing exactly one real root of the
    squarefree part of ``p``; sorted left to right.  A precomputed Sturm
    sequence ``seq`` implies ``p`` is already squarefree."""
    if p.degree <= 0:
        return []
    q = p if seq is not None else squarefree_part(p)
    seq = seq if seq is not None else sturm_sequence(q)
    B = root_bound(q)
    # a power of two keeps the bisection points dyadic
    B = Fraction(2) ** max(0, (B.numerator // B.denominator + 1).bit_length())
    out = []
    stack = [(-B, B)]
    while stack:
        a, b = stack.pop()
        n = count_roots(seq, a, b)
        if n == 0:
            continue
        if n == 1:
            out.append((a, b))
            continue
        m = (a + b) / 2
        stack.append((m, b))
        stack.append((a, m))
    return sorted(out)


def refine_root(p: QPoly, seq: Sequence[QPoly], a: Fraction, b: Fraction) -> tuple[Fraction, Fraction]:
    """Halve an isolating interval of ``p`` once."""
    m = (a + b) / 2
    if count_roots(seq, a, m) == 1:
        return a, m
    return m, b


def _taylor_sign(c: list[int], a: Fraction, b: Fraction) -> int:
    """Sign of the integer polynomial ``c`` on [a, b] when the expansion at
    the midpoint proves it constant there, else 0.

    With ``m = n / D`` the midpoint, ``D**deg * c(m + z / D)`` has integer
    coefficients ``G``; the sign is ``sign(G[0])`` once
    ``|G[0]| > sum |G[k]| R**k`` for ``R = D * (b - a) / 2``.
    """
    m, r = (a + b) / 2, (b - a) / 2
    n, D = m.numerator, m.denominator
    deg = len(c) - 1
    g = [x * D ** (deg - k) for k, x in enumerate(c)]
    # Taylor shift by n (repeated synthetic division)
    for i in range(deg):
        for k in range(deg - 1, i - 1, -1):
            g[k] += n * g[k + 1]
    R = r * D
    Rn, Rd = R.numerator, R.denominator
    tail = sum(abs(g[k]) * Rn ** k * Rd ** (deg - k) for k in range(1, deg + 1))
    if abs(g[0]) * Rd ** deg > tail:
        return _sign(g[0])
    return 0


def sign_at_root(h: QPoly, p: QPoly, a: Fraction, b: Fraction,
                 pseq: Sequence[QPoly] | None = None) -> int:
    """Sign of ``h`` at the unique root of squarefree ``p`` in (a, b].

    Returns 0 exactly when ``h`` vanishes at that root.
    """
    if p.degree > 0 and h.degree >= p.degree:
        h = h % p
    if not h:
        return 0
    if h.degree == 0:
        return _sign(h.c[0])
    pseq = pseq if pseq is not None else sturm_sequence(p)
    hc = h.ints()
    steps = 0
    while True:
        s = _taylor_sign(hc, a, b)
        if s:
            return s
        steps += 1
        if steps == 24:
            g = poly_gcd(p, h)
            if g.degree > 0 and count_roots(sturm_sequence(g), a, b) == 1:
                return 0
        a, b = refine_root(p, pseq, a, b)
