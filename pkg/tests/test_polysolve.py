import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from mldeg.likelihood import count_solutions, likelihood_system
from mldeg.polysolve import modgb
from mldeg.polysolve.groebner import groebner_basis
from mldeg.polysolve.multipoly import DEGREVLEX, MultiPoly, lex_order, parse_poly
from mldeg.polysolve.solve import (INFINITE, NotZeroDimensional, SolutionCount, count_torus_solutions,
                                   eliminant, large_primes, rabinowitsch_system,
                                   exact_rational_root, rational_reconstruction,
                                   rational_univariate_representation, real_positive_count,
                                   real_solutions, saturate_torus)
from mldeg.polysolve.univariate import (QPoly, RationalFunction, isolate_real_roots, poly_gcd,
                                        sign_at_root, squarefree_part, sturm_sequence, count_roots)
from mldeg.polytope import face_lattice
from mldeg.tropical import TropicalWeights, tropical_eliminant, tropical_system

from conftest import GOLDEN, golden, positive_data


def P(text, vars):
    return parse_poly(text, vars)


def polys(texts, vars):
    return [P(t, vars) for t in texts]


# --- Gröbner bases --------------------------------------------------------------------

def test_groebner_lex_example():
    gb = groebner_basis(polys(["x^2 - 1", "x*y - 1"], ("x", "y")), lex_order(("x", "y"), ("y", "x")))
    assert set(gb.generators) == set(polys(["x^2 - 1", "y - x"], ("x", "y")))


def test_groebner_single_and_unit():
    gb = groebner_basis(polys(["x"], ("x", "y")))
    assert gb.generators == polys(["x"], ("x", "y"))
    gb = groebner_basis(polys(["x - 1", "x - 2"], ("x",)))
    assert gb.is_unit and gb.generators == polys(["1"], ("x",))


def test_groebner_over_rational_functions():
    t = RationalFunction.t()
    vars = ("x", "y")
    x, y = MultiPoly.variable(vars, "x", RationalFunction(1)), MultiPoly.variable(vars, "y", RationalFunction(1))
    gb = groebner_basis([x * x - MultiPoly.constant(vars, t), y * t - x], lex_order(vars, ("y", "x")))
    assert gb.check_buchberger_criterion()
    one = RationalFunction(1)
    assert set(gb.generators) == {MultiPoly(vars, {(2, 0): one, (0, 0): -t}),
                                  MultiPoly(vars, {(0, 1): one, (1, 0): -one / t})}


# --- saturation and counting ----------------------------------------------------------

def test_saturation_examples():
    v = ("theta0", "theta1")
    assert groebner_basis(saturate_torus(polys(["theta0*theta1"], v), v)).is_unit
    sat = saturate_torus(polys(["theta1^2 - theta1"], ("theta1",)), ("theta1",))
    assert sat == polys(["theta1 - 1"], ("theta1",))


def test_saturated_zero_pattern_is_positive_dimensional():
    M = golden("independence_c2")
    rng = random.Random(0)
    u = [rng.randint(1, 100) for _ in range(3)] + [0] * 6
    S = likelihood_system(M, u)
    sat = saturate_torus(S.equations, S.vars)
    assert not groebner_basis(sat).is_zero_dimensional()
    assert count_solutions(M, u, torus=True).kind == INFINITE


def test_count_examples():
    x = ("x",)
    for modular in (True, False):
        assert count_torus_solutions(polys(["x^2 - 1"], x), modular=modular) == SolutionCount.finite(2, 2)
        assert count_torus_solutions(polys(["(x - 1)^2"], x), modular=modular) == SolutionCount.finite(1, 2)
    M = golden("independence_c6")
    rng = random.Random(5)
    u = [rng.randint(1, 10 ** 4) for _ in range(2)] + [0, rng.randint(1, 10 ** 4)] + [0] * 5
    assert count_solutions(M, u).distinct == 2


def test_infinite_and_empty():
    v = ("x", "y")
    assert count_torus_solutions(polys(["x*y - 1"], v)).kind == INFINITE
    assert count_torus_solutions(polys(["x - 1", "x - 2"], v)).kind == "empty"


@pytest.mark.parametrize("name", ["independence_c3", "independence_c6", "cube_ones", "square", "segre_tropical"])
def test_count_order_independent(name):
    M = golden(name)
    S = likelihood_system(M, positive_data(M.n, 1))
    ref = count_torus_solutions(S.equations, S.vars)
    rng = random.Random(name)
    for _ in range(3):
        perm = list(S.vars)
        rng.shuffle(perm)
        eqs = [e.change_vars(perm) for e in S.equations]
        assert count_torus_solutions(eqs, perm) == ref


@pytest.mark.parametrize("name", [n for n in sorted(GOLDEN) if n not in ("binary_4cycle", "cube_generic")])
def test_generic_points_are_simple(name):
    M = golden(name)
    S = likelihood_system(M, positive_data(M.n, 2))
    r = count_torus_solutions(S.equations, S.vars)
    assert r.distinct == r.quotient_dim


def test_exact_and_modular_counts_agree():
    for name in ("independence_c5", "cube_ones", "segre_tropical"):
        M = golden(name)
        S = likelihood_system(M, positive_data(M.n, 3))
        assert (count_torus_solutions(S.equations, S.vars, modular=False)
                == count_torus_solutions(S.equations, S.vars, modular=True))


# --- Buchberger criterion and kernels ---------------------------------------------------

@pytest.mark.parametrize("name", ["independence_c4", "cube_ones", "square", "segre_tropical", "segment"])
def test_buchberger_criterion_on_golden(name):
    M = golden(name)
    S = likelihood_system(M, positive_data(M.n, 4))
    ext, _, _ = rabinowitsch_system(S.equations, S.vars[1:])
    p = large_primes(1)[0]
    gb = groebner_basis(ext, DEGREVLEX, modulus=p)
    assert gb.check_buchberger_criterion()
    if M.n <= 9:
        exact = groebner_basis(ext, DEGREVLEX)
        assert exact.check_buchberger_criterion()
        assert exact.leading_monomials() == gb.leading_monomials()
        assert all(exact.contains(g) for g in ext)


@pytest.mark.skipif("cython" not in modgb.available_kernels(), reason="compiled kernel not built")
@pytest.mark.parametrize("name", ["independence_c6", "cube_ones", "cube_generic"])
def test_kernels_agree(name):
    M = golden(name)
    S = likelihood_system(M, positive_data(M.n, 5))
    ext, _, _ = rabinowitsch_system(S.equations, S.vars[1:])
    p = large_primes(2)[1]
    bases = []
    for kernel in ("cython", "python"):
        with modgb.use_kernel(kernel):
            bases.append(groebner_basis(ext, DEGREVLEX, modulus=p).generators)
    assert bases[0] == bases[1]


# --- eliminants ------------------------------------------------------------------------

def test_eliminant_trivial():
    v = ("theta1", "theta2")
    e = eliminant(polys(["theta1^2 - 1", "theta2 - theta1"], v), "theta2")
    assert e == P("theta2^2 - 1", v)


def test_eliminant_not_zero_dimensional():
    with pytest.raises(NotZeroDimensional):
        eliminant(polys(["x*y - 1"], ("x", "y")), "x")


def _segre_system():
    M = golden("segre_tropical")
    F = next(F for F in face_lattice(M.configuration()) if F.member_indices == (0, 1))
    W = TropicalWeights({2: 1, 3: 3}, {2: 2, 3: 4}, F)
    return M, tropical_system(M, [1, 2, 3, 4], F, W)


def test_segre_eliminant_at_one():
    M, S = _segre_system()
    e = eliminant(list(S.specialize(1)), "theta1", ["theta0", "theta2", "theta1"])
    assert e == P("14*theta1^2 - theta1 - 9", S.vars)


@pytest.mark.parametrize("t0", [Fraction(1), Fraction(1, 2), Fraction(2)])
def test_specialization_commutes(t0):
    _, S = _segre_system()
    order = ["theta0", "theta2", "theta1"]
    generic = tropical_eliminant(S, "theta1", order)
    special = eliminant(list(S.specialize(t0)), "theta1", order)
    at = generic.map_coeffs(lambda c: c.evaluate(t0))
    ratio = {e: at.terms[e] / special.terms[e] for e in special.terms}
    assert set(at.terms) == set(special.terms) and len(set(ratio.values())) == 1


@pytest.mark.parametrize("name, modulus", [("segre_tropical", None), ("independence_c2", large_primes(1)[0])])
def test_eliminant_degree_matches_distinct(name, modulus):
    M = golden(name)
    S = likelihood_system(M, positive_data(M.n, 6))
    rng = random.Random(1)
    vars = S.vars + ("z",)
    form = MultiPoly(vars, {tuple(int(j == i) for j in range(len(vars))): Fraction(rng.randint(1, 100))
                            for i in range(1, len(S.vars))})
    eqs = [e.change_vars(vars) for e in S.equations] + [form - MultiPoly.variable(vars, "z")]
    e = eliminant(eqs, "z", modulus=modulus)
    coeffs = e.univariate_coeffs("z")
    if modulus is None:
        q = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for _, c in sorted(coeffs.items(), reverse=True)], X)
        sqf = q.sqf_part().degree()
    else:
        q = sympy.Poly([int(c.v) for _, c in sorted(coeffs.items(), reverse=True)], X, modulus=modulus)
        sqf = q.sqf_part().degree()
    assert sqf == count_torus_solutions(S.equations, S.vars).distinct == e.degree_in("z")


# --- real solutions ----------------------------------------------------------------------

def test_real_positive_examples():
    x = ("x",)
    assert real_positive_count(polys(["x^2 - 2"], x), x) == 1
    assert real_positive_count(polys(["x^2 + 1"], x), x) == 0
    assert real_positive_count(polys(["x^2 - 1", "x*y - 2", "y^2 - 4"], ("x", "y")), ("x", "y")) == 1


def test_rur_points_satisfy_system():
    M = golden("independence_c4")
    S = likelihood_system(M, positive_data(M.n, 7))
    rur = rational_univariate_representation(S.equations, S.vars, saturate=S.vars[1:])
    assert rur.verified and rur.degree == 4
    assert len(real_solutions(rur)) <= 4


def test_rational_reconstruction():
    m = large_primes(2)[0] * large_primes(2)[1]
    for q in (Fraction(-3, 7), Fraction(12345, 678), Fraction(0)):
        a = q.numerator * pow(q.denominator, -1, m) % m
        assert rational_reconstruction(a, m) == q


# --- univariate arithmetic ----------------------------------------------------------------

small_polys = st.lists(st.integers(-6, 6), min_size=1, max_size=7).map(QPoly)
X = sympy.Symbol("x")


def to_sympy(p: QPoly):
    return sympy.Poly(list(reversed([sympy.Rational(c.numerator, c.denominator) for c in p.c])) or [0], X)


@settings(max_examples=150, deadline=None)
@given(small_polys, small_polys, small_polys)
def test_gcd_against_sympy(a, b, c):
    a, b = a * c, b * c
    g = poly_gcd(a, b)
    ref = sympy.gcd(to_sympy(a), to_sympy(b))
    if not a.c and not b.c:
        return
    ref = ref.monic() if not ref.is_zero else ref
    assert [Fraction(int(x.p), int(x.q)) for x in reversed(ref.all_coeffs())] == list(g.c)


@settings(max_examples=80, deadline=None)
@given(small_polys)
def test_sturm_counts_against_sympy(p):
    if p.degree < 1:
        return
    ref = len(sympy.real_roots(to_sympy(p).sqf_part()))
    assert len(isolate_real_roots(p)) == ref
    seq = sturm_sequence(p)
    for a, b in isolate_real_roots(p):
        assert count_roots(seq, a, b) == 1


def test_rur_multi_prime_agrees_with_exact():
    M = golden("cube_ones")
    S = likelihood_system(M, positive_data(M.n, 5))
    exact = rational_univariate_representation(S.equations, S.vars, saturate=S.vars[1:])
    loose = rational_univariate_representation(S.equations, S.vars, saturate=S.vars[1:], exact_limit=0)
    assert exact.verified and not loose.verified
    assert (loose.chi, loose.coords) == (exact.chi, exact.coords)


@settings(max_examples=80, deadline=None)
@given(small_polys, small_polys)
def test_sign_at_root_against_sympy(p, h):
    if p.degree < 1:
        return
    q = squarefree_part(p)
    roots = sympy.Poly(to_sympy(q)).real_roots()
    for (a, b), r in zip(isolate_real_roots(q), roots):
        ref = sympy.sign(sympy.simplify(to_sympy(h).as_expr().subs(X, r)))
        assert sign_at_root(h, q, a, b) == int(ref)


def test_exact_rational_root():
    rur = rational_univariate_representation(
        [parse_poly("x^2 - 4", ["x", "y"]), parse_poly("y - x - 1", ["x", "y"])], ["x", "y"])
    points = sorted(rur.point(exact_rational_root(rur, r))["x"] for r in real_solutions(rur))
    assert points == [-2, 2]
    irr = rational_univariate_representation(
        [parse_poly("x^2 - 2", ["x", "y"]), parse_poly("y - 1", ["x", "y"])], ["x", "y"])
    assert all(exact_rational_root(irr, r) is None for r in real_solutions(irr))


def test_rational_function_normalizes():
    t = RationalFunction.t()
    r = (t * t - RationalFunction(1)) / (t - RationalFunction(1))
    assert r == t + RationalFunction(1) and r.den == QPoly([1])
    big = RationalFunction(QPoly.monomial(900, Fraction(3)) + QPoly([0, 0, 5]), QPoly.monomial(400, Fraction(2)))
    assert big.den == QPoly.monomial(398, Fraction(1)) and big.valuation() == -398


def test_lex_and_krylov_eliminants_agree():
    _, S = _segre_system()
    order = ["theta0", "theta2", "theta1"]
    assert (eliminant(list(S.equations), "theta1", order, method="lex")
            == eliminant(list(S.equations), "theta1", order, method="krylov"))
