"""Toric likelihood equations and everything computed from them: ML degrees,
solution counts for data with zeros, Birch certificates, and the
facet/flag reports checking that ML degrees never increase on faces."""

from __future__ import annotations

import random
import signal
import threading
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .lattice_core import affine_rank
from .models import ScaledModel, facial_submodel
from .polysolve.multipoly import MultiPoly
from .polysolve.solve import (GenericityFailure, SolutionCount, count_torus_solutions,
                              exact_rational_root, rational_univariate_representation, real_solutions,
                              refine_coordinates)
from .polytope import face_lattice, lattice_normalized_volume


class ZeroDataSum(ValueError):
    pass


class LengthMismatch(ValueError):
    pass


class NonpositiveProbability(ValueError):
    pass


class NotAFlag(ValueError):
    pass


def theta_names(d: int) -> tuple[str, ...]:
    return tuple(f"theta{i}" for i in range(d + 1))


@dataclass(frozen=True)
class LikelihoodSystem:
    """``{theta0 f - 1} + {theta0 theta_i df/dtheta_i - (Au)_i / u_+}``.

    ``f`` and the equations are polynomials: when ``A`` has negative entries
    each equation is multiplied by the smallest monomial clearing them.
    ``sufficient`` holds ``(Au)_i / u_+`` for ``i = 1..d``.
    """

    model: ScaledModel
    data: tuple[Fraction, ...]
    equations: tuple[MultiPoly, ...]
    u_plus: Fraction
    vars: tuple[str, ...]
    f: MultiPoly
    sufficient: tuple[Fraction, ...]
    shift: tuple[int, ...]

    def zero_coordinates(self) -> tuple[str, ...]:
        """Variables that may vanish on a solution (all others provably
        cannot); used to keep the saturation small."""
        if any(self.shift):
            return self.vars[1:]
        return tuple(v for v, b in zip(self.vars[1:], self.sufficient) if b == 0)


def _as_fractions(u: Sequence) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in u)


def likelihood_system(M: ScaledModel, u: Sequence) -> LikelihoodSystem:
    u = _as_fractions(u)
    if len(u) != M.n:
        raise LengthMismatch(f"{len(u)} data entries for {M.n} columns")
    up = sum(u)
    if up == 0:
        raise ZeroDataSum("data must have nonzero sum")
    d = M.d
    vars = theta_names(d)
    cols = M.columns()
    shift = tuple(max(0, -min(col[i] for col in cols)) for i in range(1, d + 1))
    f_terms = {}
    for cj, col in zip(M.c, cols):
        e = (0,) + tuple(a + s for a, s in zip(col[1:], shift))
        f_terms[e] = f_terms.get(e, 0) + cj
    f = MultiPoly(vars, f_terms)
    mono = MultiPoly(vars, {(0,) + shift: Fraction(1)})
    th0 = MultiPoly.variable(vars, vars[0])
    suff = tuple(sum(col[i] * x for col, x in zip(cols, u)) / up for i in range(1, d + 1))
    eqs = [th0 * f - mono]
    for i in range(1, d + 1):
        # theta_i d/dtheta_i of the Laurent f equals that of the shifted f minus shift_i * f
        e_i = f.euler_derivative(vars[i]) - f * shift[i - 1]
        eqs.append(th0 * e_i - mono * suff[i - 1])
    return LikelihoodSystem(M, u, tuple(eqs), up, vars, f, suff, shift)


def random_data(n: int, rng: random.Random, hi: int = 10 ** 4, lo: int = 1) -> tuple[Fraction, ...]:
    return tuple(Fraction(rng.randint(lo, hi)) for _ in range(n))


def _count(S: LikelihoodSystem, seed: int, modular: bool, torus: bool) -> SolutionCount:
    sat = S.zero_coordinates() if torus else ()
    return count_torus_solutions(S.equations, S.vars, seed=seed, modular=modular, saturate=sat)


def ml_degree(M: ScaledModel, seed: int = 0, *, modular: bool = True) -> int:
    """Number of torus critical points for seeded generic positive data.

    Two independent draws must agree; otherwise a third draw from a larger
    range decides, and disagreement with both raises GenericityFailure.
    """
    if M.d == 0:
        return 1
    rng = random.Random(f"mldeg:{seed}")
    counts = []
    for hi in (10 ** 4, 10 ** 4, 10 ** 8):
        u = random_data(M.n, rng, hi)
        r = _count(likelihood_system(M, u), rng.randrange(2 ** 32), modular, True)
        if not r.is_finite:
            raise GenericityFailure("generic data produced infinitely many critical points")
        counts.append(r.distinct)
        if len(counts) >= 2 and counts.count(counts[-1]) >= 2:
            return counts[-1]
    raise GenericityFailure(f"ML degree draws disagree: {counts}")


def count_solutions(M: ScaledModel, u: Sequence, seed: int = 0, *, modular: bool = True,
                    torus: bool = False) -> SolutionCount:
    """Solutions of the likelihood equations for specific data (zeros allowed).

    By default every solution with ``theta0 != 0`` counts, which is the
    convention the data-zero tables use; ``torus=True`` additionally discards
    solutions with some ``theta_i = 0``.
    """
    S = likelihood_system(M, u)
    return _count(S, seed, modular, torus)


# --- Birch certificates --------------------------------------------------------------

@dataclass(frozen=True)
class BirchCertificate:
    """Outcome of checking Birch's theorem for one positive data vector.

    ``p_hat`` is exact when ``exact`` is set and otherwise a midpoint of the
    refined isolating box.  ``residual`` is the largest entry of
    ``|A p_hat - A u / u_+|`` (zero when exact).  ``rur_verified`` is unset
    when the representation was accepted on multi-prime agreement rather than
    exact substitution.
    """

    positive_count: int
    real_count: int
    complex_count: int
    p_hat: tuple[Fraction, ...]
    exact: bool
    residual: Fraction
    moment_match: bool
    log_likelihood: float
    other_log_likelihoods: tuple[float, ...]
    rur_verified: bool = True

    @property
    def ok(self) -> bool:
        return (self.positive_count == 1 and self.moment_match
                and all(self.log_likelihood >= x for x in self.other_log_likelihoods))


def _probabilities(M: ScaledModel, theta: dict[str, Fraction], vars) -> tuple[Fraction, ...]:
    out = []
    for cj, col in zip(M.c, M.columns()):
        v = Fraction(cj) * theta[vars[0]]
        for name, a in zip(vars[1:], col[1:]):
            v *= theta[name] ** a
        out.append(v)
    return tuple(out)


def _sign_of_column(cj, col, signs: dict[str, int], vars) -> int:
    s = (1 if cj > 0 else -1) * signs[vars[0]]
    for name, a in zip(vars[1:], col[1:]):
        if a % 2:
            s *= signs[name]
    return s


def verify_birch(M: ScaledModel, u: Sequence, seed: int = 0, *, tol_bits: int = 60,
                 exact_limit: int | None = 24) -> BirchCertificate:
    """Check that exactly one real critical point has all ``p_j > 0`` and that
    it matches the sufficient statistics.

    Solutions come from an exact rational univariate representation; signs are
    decided on isolating intervals, so the count is exact.  When the root of
    the minimal polynomial is irrational the moment check holds to
    ``2**-tol_bits``.  Above ``exact_limit`` solutions the representation is
    accepted on agreement across extra primes.
    """
    u = _as_fractions(u)
    if any(x <= 0 for x in u):
        raise NonpositiveProbability("Birch data must be strictly positive")
    S = likelihood_system(M, u)
    rur = rational_univariate_representation(S.equations, S.vars, seed=seed, saturate=S.vars[1:],
                                             exact_limit=exact_limit)
    roots = real_solutions(rur)
    cols = M.columns()
    positive = [r for r in roots
                if all(_sign_of_column(cj, col, r.signs, S.vars) > 0 for cj, col in zip(M.c, cols))]
    target = [sum(col[i] * x for col, x in zip(cols, u)) / S.u_plus for i in range(M.d + 1)]

    def point(r):
        T = exact_rational_root(rur, r)
        if T is not None:
            theta = rur.point(T)
            return _probabilities(M, theta, S.vars), True
        for bits in (tol_bits + 40, 2 * tol_bits + 80, 4 * tol_bits + 160, 8 * tol_bits + 320):
            p = _probabilities(M, refine_coordinates(rur, r, bits=bits), S.vars)
            moments = [sum(col[i] * x for col, x in zip(cols, p)) for i in range(M.d + 1)]
            if max(abs(a - b) for a, b in zip(moments, target)) < Fraction(1, 2 ** tol_bits):
                break
        return p, False

    if not positive:
        return BirchCertificate(0, len(roots), rur.degree, (), False, Fraction(0), False, float("nan"), (),
                                rur.verified)
    p_hat, exact = point(positive[0])
    moments = [sum(col[i] * p for col, p in zip(cols, p_hat)) for i in range(M.d + 1)]
    residual = max(abs(a - b) for a, b in zip(moments, target))
    match = residual == 0 if exact else residual < Fraction(1, 2 ** tol_bits)
    others = tuple(log_likelihood(point(r)[0], u) for r in positive[1:])
    return BirchCertificate(len(positive), len(roots), rur.degree, p_hat, exact, residual, match,
                            log_likelihood(p_hat, u), others, rur.verified)


def log_likelihood(p: Sequence, u: Sequence, digits: int = 50) -> float:
    """``sum u_i log p_i - u_+ log p_+`` evaluated with ``digits`` significant digits."""
    import mpmath

    p = _as_fractions(p)
    u = _as_fractions(u)
    if len(p) != len(u):
        raise LengthMismatch(f"{len(p)} probabilities for {len(u)} data entries")
    if any(x <= 0 for x in p):
        raise NonpositiveProbability("probabilities must be positive")
    if sum(u) == 0:
        raise ZeroDataSum("data must have nonzero sum")
    with mpmath.workdps(digits):
        def mp(x: Fraction):
            return mpmath.mpf(x.numerator) / x.denominator

        val = mpmath.fsum(mp(ui) * mpmath.log(mp(pi)) for ui, pi in zip(u, p) if ui)
        val -= mp(sum(u)) * mpmath.log(mp(sum(p)))
        return float(val)


# --- face reports ----------------------------------------------------------------------

@dataclass
class FaceRow:
    face_id: int
    dimension: int
    members: tuple[int, ...]
    ml_degree: int | None
    degree: int | None
    seconds: float = 0.0
    error: str | None = None


@dataclass
class MLReport:
    """ML degrees of a collection of faces.  ``rows[0]`` is the model itself.

    ``edges`` lists ``(face, coface)`` row-index pairs whose ML degrees must
    not increase from coface to face.
    """

    rows: list[FaceRow]
    seed: int
    edges: list[tuple[int, int]] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ml_degree(self) -> int | None:
        return self.rows[0].ml_degree

    def violations(self) -> list[tuple[FaceRow, FaceRow]]:
        out = []
        for i, j in self.edges:
            a, b = self.rows[i], self.rows[j]
            if a.ml_degree is not None and b.ml_degree is not None and a.ml_degree > b.ml_degree:
                out.append((a, b))
        return out

    @property
    def monotone(self) -> bool:
        return not self.violations()


class Timeout(TimeoutError):
    pass


@contextmanager
def time_limit(seconds: float | None):
    """Raise :class:`Timeout` inside the block after ``seconds`` (main thread
    on POSIX only; elsewhere the limit is ignored)."""
    usable = (seconds and hasattr(signal, "setitimer")
              and threading.current_thread() is threading.main_thread())
    if not usable:
        yield
        return

    def fire(signum, frame):
        raise Timeout(f"exceeded {seconds} s")

    old = signal.signal(signal.SIGALRM, fire)
    signal.setitimer(signal.ITIMER_REAL, seconds)
    try:
        yield
    finally:
        signal.setitimer(signal.ITIMER_REAL, 0)
        signal.signal(signal.SIGALRM, old)


def _face_seed(seed: int, face_id: int) -> int:
    return random.Random(f"face:{seed}:{face_id}").randrange(2 ** 63)


def _face_row(face_id: int, sub: Callable[[], ScaledModel], seed: int, modular: bool,
              members: Sequence[int], dim: int, timeout: float | None = None) -> FaceRow:
    t0 = time.perf_counter()
    row = FaceRow(face_id, dim, tuple(members), None, None)
    try:
        with time_limit(timeout):
            S = sub()
            row.degree = lattice_normalized_volume(S.configuration())
            row.ml_degree = ml_degree(S, _face_seed(seed, face_id), modular=modular)
    except (GenericityFailure, ArithmeticError, ValueError, Timeout) as exc:
        row.error = f"{type(exc).__name__}: {exc}"
    row.seconds = time.perf_counter() - t0
    return row


def monotonicity_report(M: ScaledModel, depth: int = 1, seed: int = 0, *,
                        modular: bool = True, timeout: float | None = None) -> MLReport:
    """ML degrees of the model and of all faces of codimension ``<= depth``."""
    t0 = time.perf_counter()
    P = M.configuration()
    top = P.affine_dimension()
    if depth < 0 or depth > top:
        raise ValueError(f"depth {depth} outside 0..{top}")
    faces = [F for F in face_lattice(P) if top - F.face_dim <= depth] if depth else []
    if not faces:
        full = tuple(range(M.n))
        rows = [_face_row(0, lambda: M, seed, modular, full, top, timeout)]
        return MLReport(rows, seed, [], time.perf_counter() - t0)
    rows = []
    for k, F in enumerate(faces):
        make = (lambda: M) if k == 0 else (lambda F=F: facial_submodel(M, F))
        rows.append(_face_row(k, make, seed, modular, F.member_indices, F.face_dim, timeout))
    sets = [frozenset(F.member_indices) for F in faces]
    edges = [(i, j) for i in range(len(faces)) for j in range(len(faces))
             if faces[j].face_dim == faces[i].face_dim + 1 and sets[i] < sets[j]]
    return MLReport(rows, seed, edges, time.perf_counter() - t0)


def flag_report(M: ScaledModel, flag: Sequence[Sequence[int]], seed: int = 0, *,
                modular: bool = True, timeout: float | None = None) -> MLReport:
    """ML degrees and degrees along a chain of faces given by column indices.

    Each member must be a face of the polytope of its predecessor (the first
    one a face of ``conv(A)``).
    """
    t0 = time.perf_counter()
    P = M.configuration()
    chain: list[tuple[int, ...]] = []
    prev = tuple(range(M.n))
    for k, idx in enumerate(flag):
        cur = tuple(sorted(set(idx)))
        if not cur or not set(cur) <= set(prev):
            raise NotAFlag(f"member {k} is not contained in its predecessor")
        sub = P.restrict([P.labels[i] for i in prev])
        target = tuple(sorted(P.labels[i] for i in cur))
        if target != tuple(sorted(sub.labels)) and not any(
                F.member_indices == target for F in face_lattice(sub)):
            raise NotAFlag(f"member {k} is not a face of its predecessor")
        chain.append(cur)
        prev = cur
    rows = []
    for k, cur in enumerate(chain):
        pts = [P.points[i] for i in cur]
        make = (lambda cur=cur: M if len(cur) == M.n else facial_submodel(M, list(cur)))
        rows.append(_face_row(k, make, seed, modular, cur, affine_rank(pts), timeout))
    edges = [(k + 1, k) for k in range(len(chain) - 1)]
    return MLReport(rows, seed, edges, time.perf_counter() - t0)
