"""Likelihood equations deformed by a parameter ``t``: off-face monomials and
data entries get positive ``t``-weights, so ``t = 1`` gives the original
system and ``t = 0`` the system of a facial submodel.

Coefficients live in Q(t).  Rational weights are made integral by the
substitution ``t -> t**N``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Mapping, Sequence

from .likelihood import likelihood_system, theta_names
from .models import ScaledModel, parse_rational
from .polysolve.multipoly import MultiPoly
from .polysolve.solve import SolutionCount, count_torus_solutions, eliminant
from .polysolve.univariate import QPoly, RationalFunction
from .polytope import (FaceDescriptor, PointConfiguration, cayley_configuration, face_lattice,
                       is_triangulation, regular_subdivision)


class WeightDomainMismatch(ValueError):
    pass


def _t_power(k: int, c=1) -> RationalFunction:
    return RationalFunction(QPoly.monomial(k, Fraction(c)))


@dataclass(frozen=True)
class TropicalWeights:
    """Monomial weights ``w`` and data weights ``w_prime`` for the columns off
    the face ``face`` (keys are column indices)."""

    w: Mapping[int, Fraction]
    w_prime: Mapping[int, Fraction]
    face: FaceDescriptor

    def __post_init__(self):
        object.__setattr__(self, "w", {int(k): parse_rational(v) for k, v in self.w.items()})
        object.__setattr__(self, "w_prime", {int(k): parse_rational(v) for k, v in self.w_prime.items()})
        for name, ws in (("w", self.w), ("w_prime", self.w_prime)):
            bad = [k for k, v in ws.items() if v <= 0]
            if bad:
                raise WeightDomainMismatch(f"{name} must be positive, got {bad}")

    def check(self, n: int):
        off = set(range(n)) - set(self.face.member_indices)
        for name, ws in (("w", self.w), ("w_prime", self.w_prime)):
            if set(ws) != off:
                raise WeightDomainMismatch(
                    f"{name} keys {sorted(ws)} differ from the off-face columns {sorted(off)}")

    @property
    def scale(self) -> int:
        """Smallest ``N`` making every weight times ``N`` an integer."""
        N = 1
        for v in list(self.w.values()) + list(self.w_prime.values()):
            N = lcm(N, v.denominator)
        return N

    @classmethod
    def random(cls, M: ScaledModel, face: FaceDescriptor, seed: int = 0, lo: int = 1, hi: int = 1000):
        rng = random.Random(f"weights:{seed}")
        off = [j for j in range(M.n) if j not in set(face.member_indices)]
        w = {j: Fraction(rng.randint(lo, hi)) for j in off}
        wp = {j: Fraction(rng.randint(lo, hi)) for j in off}
        return cls(w, wp, face)


@dataclass(frozen=True)
class TropicalSystem:
    model: ScaledModel
    face: FaceDescriptor
    vars: tuple[str, ...]
    f_hat: MultiPoly
    u_hat: tuple[RationalFunction, ...]
    sufficient: tuple[RationalFunction, ...]
    equations: tuple[MultiPoly, ...]
    scale: int
    shift: tuple[int, ...]

    def specialize(self, t0) -> tuple[MultiPoly, ...]:
        """Equations with ``t`` replaced by the rational number ``t0``."""
        t0 = Fraction(t0)
        return tuple(e.map_coeffs(lambda c: _at(c, t0)) for e in self.equations)

    def facial_limit(self) -> tuple[tuple[MultiPoly, ...], tuple[str, ...]]:
        """The ``t = 0`` system with vanishing equations dropped, restricted to
        the variables that still occur."""
        eqs = [e for e in self.specialize(0) if e]
        used = sorted(set().union(*(e.variables_used() for e in eqs)), key=self.vars.index)
        return tuple(e.change_vars(used) for e in eqs), tuple(used)


def _at(c, t0: Fraction) -> Fraction:
    if isinstance(c, RationalFunction):
        return c.evaluate(t0)
    return Fraction(c)


def _face_of(M: ScaledModel, F: FaceDescriptor | Sequence[int]) -> FaceDescriptor:
    if isinstance(F, FaceDescriptor):
        return F
    target = tuple(sorted(F))
    for G in face_lattice(M.configuration()):
        if G.member_indices == target:
            return G
    raise WeightDomainMismatch(f"columns {list(target)} are not a face")


def tropical_system(M: ScaledModel, u: Sequence, F: FaceDescriptor | Sequence[int],
                    W: TropicalWeights) -> TropicalSystem:
    F = _face_of(M, F)
    W.check(M.n)
    u = [parse_rational(x) for x in u]
    if len(u) != M.n:
        raise WeightDomainMismatch(f"{len(u)} data entries for {M.n} columns")
    on = set(F.member_indices)
    if sum(u[j] for j in on) == 0:
        raise WeightDomainMismatch("data on the face must have nonzero sum")
    N = W.scale
    d = M.d
    vars = theta_names(d)
    cols = M.columns()
    shift = tuple(max(0, -min(col[i] for col in cols)) for i in range(1, d + 1))
    terms: dict[tuple[int, ...], RationalFunction] = {}
    for j, (cj, col) in enumerate(zip(M.c, cols)):
        k = 0 if j in on else int(W.w[j] * N)
        e = (0,) + tuple(a + s for a, s in zip(col[1:], shift))
        terms[e] = terms.get(e, RationalFunction(0)) + _t_power(k, cj)
    f_hat = MultiPoly(vars, terms)
    u_hat = tuple(RationalFunction(u[j]) if j in on else _t_power(int(W.w_prime[j] * N), u[j])
                  for j in range(M.n))
    u_plus = sum(u_hat, RationalFunction(0))
    suff = tuple(sum((u_hat[j] * col[i] for j, col in enumerate(cols)), RationalFunction(0)) / u_plus
                 for i in range(1, d + 1))
    one = RationalFunction(1)
    mono = MultiPoly(vars, {(0,) + shift: one})
    th0 = MultiPoly.variable(vars, vars[0], one)
    eqs = [th0 * f_hat - mono]
    for i in range(1, d + 1):
        e_i = f_hat.euler_derivative(vars[i]) - f_hat * RationalFunction(shift[i - 1])
        eqs.append(th0 * e_i - mono * suff[i - 1])
    return TropicalSystem(M, F, vars, f_hat, u_hat, suff, tuple(eqs), N, shift)


def check_t1_recovery(S: TropicalSystem, u: Sequence) -> bool:
    """``t = 1`` gives exactly the ordinary likelihood equations."""
    return S.specialize(1) == likelihood_system(S.model, u).equations


def tropical_eliminant(S: TropicalSystem | Sequence[MultiPoly], keep_var: str,
                       order: Sequence[str] | None = None) -> MultiPoly:
    """Univariate polynomial in ``keep_var`` generating the elimination ideal;
    coefficients are cleared to primitive polynomials in Z[t]."""
    eqs = S.equations if isinstance(S, TropicalSystem) else tuple(S)
    return eliminant(list(eqs), keep_var, order)


def tropical_solution_count(S: TropicalSystem, seed: int = 0) -> SolutionCount:
    """Distinct solutions over the algebraic closure of Q(t) with every
    coordinate nonzero."""
    return count_torus_solutions(S.equations, S.vars, seed=seed, modular=False)


def equal_up_to_unit(p: MultiPoly, q: MultiPoly) -> bool:
    """Whether ``p = r * q`` for a nonzero constant ``r`` of the coefficient field."""
    if set(p.terms) != set(q.terms):
        return False
    if not p.terms:
        return True
    e0 = next(iter(p.terms))
    r = _rf(p.terms[e0]) / _rf(q.terms[e0])
    return all(_rf(p.terms[e]) == r * _rf(q.terms[e]) for e in p.terms)


def _rf(c) -> RationalFunction:
    return c if isinstance(c, RationalFunction) else RationalFunction(Fraction(c))


# --- the Cayley subdivision criterion ---------------------------------------------------

@dataclass(frozen=True)
class CheckResult:
    is_triangulation: bool
    cells: tuple[tuple[int, ...], ...]
    max_cell_size: int
    configuration: PointConfiguration
    lifts: tuple[int, ...]


def euler_polynomials(S: TropicalSystem) -> list[MultiPoly]:
    """``theta_i d f_hat / d theta_i - b_i`` for ``i = 1..d`` with ``theta0``
    dropped, in the variables ``theta_1..theta_d``."""
    inner = S.vars[1:]
    f = S.f_hat.change_vars(inner) if S.f_hat.variables_used() <= set(inner) else None
    if f is None:  # pragma: no cover - f_hat never involves theta0
        raise ValueError("f_hat involves theta0")
    shift = S.shift
    out = []
    for i, v in enumerate(inner):
        e = f.euler_derivative(v) - f * RationalFunction(shift[i])
        out.append(e - MultiPoly(inner, {shift: S.sufficient[i]}))
    return out


def cayley_subdivision_check(M: ScaledModel, F: FaceDescriptor | Sequence[int], W: TropicalWeights,
                             u: Sequence | None = None) -> CheckResult:
    """Regular subdivision of the Cayley configuration of the Newton polytopes
    of the Euler polynomials, lifted by the ``t``-adic valuations of their
    coefficients.  Data default to all ones."""
    u = [1] * M.n if u is None else u
    S = tropical_system(M, u, F, W)
    polys = [p for p in euler_polynomials(S) if p]
    configs, lifts = [], []
    for p in polys:
        mons = sorted(p.terms)
        configs.append(PointConfiguration.from_points(mons))
        lifts.extend(_rf(p.terms[m]).valuation() for m in mons)
    P = cayley_configuration(configs, drop_last=True)
    sub = regular_subdivision(P, lifts)
    return CheckResult(is_triangulation(sub, P), sub.cells, max(len(c) for c in sub.cells), P,
                       tuple(lifts))
