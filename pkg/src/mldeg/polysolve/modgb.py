"""Gröbner bases over Z/p on packed monomials.

Two kernels implement the same algorithm: the compiled ``_modgb`` extension
(128-bit monomials, 8-bit exponent fields) and the pure-Python ``_modgb_py``.
The compiled one is used when it was built, unless ``MLDEG_PURE_PYTHON=1``.
Computations that do not fit the 128-bit packing (too many variables or an
exponent above 127) rerun on the Python kernel with wider fields.
"""

from __future__ import annotations

import os
from contextlib import contextmanager
from typing import Sequence

from . import _modgb_py
from .multipoly import GF, MonomialOrder, MultiPoly, _gfv, common_vars

try:  # pragma: no cover - depends on the build
    from . import _modgb as _compiled
except ImportError:  # pragma: no cover
    _compiled = None

_force_python = os.environ.get("MLDEG_PURE_PYTHON", "") not in ("", "0")


def available_kernels() -> list[str]:
    return (["cython"] if _compiled is not None else []) + ["python"]


def active_kernel() -> str:
    return "python" if _force_python or _compiled is None else "cython"


@contextmanager
def use_kernel(name: str):
    """Temporarily select ``"cython"`` or ``"python"`` (used by benchmarks)."""
    global _force_python
    if name not in available_kernels():
        raise ValueError(f"kernel {name!r} is not available")
    old = _force_python
    _force_python = name == "python"
    try:
        yield
    finally:
        _force_python = old


class Layout:
    """Bit layout of a packed monomial for a given order.

    Fields from most to least significant: for degrevlex a total-degree field
    and then the variables from cheapest to most expensive; for an
    elimination order the same pattern once per block; for lex the variables
    by significance.  Degrevlex-type fields are stored complemented in the
    order key (``m ^ keyxor``), so comparing keys as integers compares
    monomials.
    """

    def __init__(self, nvars: int, order: MonomialOrder, bits: int):
        perm = order.perm if order.perm is not None else tuple(range(nvars))
        fields: list[tuple[str, object]] = []  # most significant first
        if order.kind == "lex":
            fields = [("var", i) for i in perm]
        elif order.kind == "degrevlex":
            fields = [("deg", tuple(perm))] + [("var", i) for i in reversed(perm)]
        elif order.kind == "elim":
            first, rest = perm[:order.block], perm[order.block:]
            for block in (first, rest):
                if block:
                    fields.append(("deg", tuple(block)))
                    fields.extend(("var", i) for i in reversed(block))
        else:
            raise ValueError(f"unknown monomial order {order.kind!r}")
        self.bits = bits
        self.nvars = nvars
        self.nfields = len(fields)
        self.var_shifts = [0] * nvars
        self.deg_groups = []
        keyxor = 0
        guard = 0
        valmask = (1 << (bits - 1)) - 1
        for pos, (kind, what) in enumerate(reversed(fields)):
            shift = pos * bits
            guard |= 1 << (shift + bits - 1)
            if kind == "var":
                self.var_shifts[what] = shift
                if order.kind != "lex":
                    keyxor |= valmask << shift
            else:
                self.deg_groups.append((shift, list(what)))
        self.keyxor = keyxor
        self.guard = guard
        self.limit = 1 << (bits - 1)

    def as_tuple(self):
        return (self.bits, self.nvars, self.var_shifts, self.deg_groups, self.keyxor, self.guard)

    def pack(self, exp: Sequence[int]) -> int:
        m = 0
        for e, s in zip(exp, self.var_shifts):
            if e >= self.limit:
                raise OverflowError("exponent does not fit the packed field")
            m |= e << s
        for shift, idx in self.deg_groups:
            d = sum(exp[i] for i in idx)
            if d >= self.limit:
                raise OverflowError("degree does not fit the packed field")
            m |= d << shift
        return m

    def unpack(self, m: int) -> tuple[int, ...]:
        mask = (1 << self.bits) - 1
        return tuple((m >> s) & mask for s in self.var_shifts)

    def key(self, m: int) -> int:
        return m ^ self.keyxor


def _to_packed(f: MultiPoly, layout: Layout, p: int):
    mons, coefs = [], []
    for e, c in f.terms.items():
        v = _gfv(c, p) % p
        if v:
            mons.append(layout.pack(e))
            coefs.append(v)
    return mons, coefs


def _from_packed(poly, layout: Layout, vars, p: int) -> MultiPoly:
    mons, coefs = poly
    return MultiPoly(vars, {layout.unpack(m): GF(c, p) for m, c in zip(mons, coefs)})


def _run(fn_name: str, nvars: int, order: MonomialOrder, p: int, make_args):
    """Run a kernel entry point, widening the packing on overflow."""
    attempts = []
    if active_kernel() == "cython":
        attempts.append((_compiled, 8))
    attempts += [(_modgb_py, 16), (_modgb_py, 32), (_modgb_py, 64)]
    last = None
    for kernel, bits in attempts:
        layout = Layout(nvars, order, bits)
        if kernel is _compiled and layout.nfields > _compiled.MAX_FIELDS:
            continue
        try:
            args = make_args(layout)
            return getattr(kernel, fn_name)(*args, layout.as_tuple(), p), layout
        except OverflowError as exc:
            last = exc
    raise OverflowError(f"exponents too large for every packing: {last}")


def groebner_modular(gens: Sequence[MultiPoly], order: MonomialOrder, p: int):
    """Reduced Gröbner basis of ``gens`` over Z/p (coefficients become GF)."""
    from .groebner import GroebnerBasis

    gens = [g for g in gens if g]
    vars = common_vars(gens) if gens else ()
    if not gens:
        return GroebnerBasis([], order, vars, modulus=p)
    n = len(vars)
    basis, layout = _run("groebner", n, order, p,
                         lambda lay: ([_to_packed(g, lay, p) for g in gens],))
    polys = [_from_packed(b, layout, vars, p) for b in basis]
    return GroebnerBasis(polys, order, vars, modulus=p, _internal=(layout, basis))


def normal_form_modular(gb, f: MultiPoly) -> MultiPoly:
    p = gb.modulus
    n = len(gb.vars)

    def args(lay):
        return (_to_packed(f, lay, p), [_to_packed(g, lay, p) for g in gb.generators])

    nf, layout = _run("normal_form", n, gb.order, p, args)
    return _from_packed(nf, layout, gb.vars, p)


def check_criterion_modular(gb) -> bool:
    p = gb.modulus
    if not gb.generators:
        return True
    ok, _ = _run("criterion_holds", len(gb.vars), gb.order, p,
                 lambda lay: ([_to_packed(g, lay, p) for g in gb.generators],))
    return ok


class PackedReducer:
    """Repeated normal forms modulo one fixed basis, avoiding re-conversion.

    Used by the counting routines, which reduce many products of a linear
    form with standard monomials.
    """

    def __init__(self, gb):
        self.gb = gb
        self.p = gb.modulus
        self.vars = gb.vars
        layout, _ = gb._internal
        self.layout = layout
        # 8-bit layouts only come from the compiled kernel
        self.kernel = _compiled if layout.bits == 8 else _modgb_py
        self.packed = [_to_packed(g, layout, self.p) for g in gb.generators]
        self.lt = self.layout.as_tuple()

    def pack(self, f: MultiPoly):
        return _to_packed(f, self.layout, self.p)

    def normal_form_packed(self, poly):
        return self.kernel.normal_form(poly, self.packed, self.lt, self.p)

    def to_poly(self, poly) -> MultiPoly:
        return _from_packed(poly, self.layout, self.vars, self.p)
