"""Constructors for scaled toric models ``(A, c)``: independence, dilated
cubes, discrete graphical models, quasi-independence models, facial and
column-deleted submodels, and the JSON model-spec format."""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .lattice_core import IntMatrix, affine_lattice_coordinates, affine_rank, validate_design_matrix
from .polytope import FaceDescriptor, FaceMismatch, PointConfiguration

SCHEMA_VERSION = 1


class ScalingLengthMismatch(ValueError):
    pass


class SpanCollapse(ValueError):
    """Deleting columns lowered the dimension of the polytope."""


class SpecError(ValueError):
    """A model spec is malformed."""


def parse_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise SpecError(f"not a rational: {x!r}")


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class ScaledModel:
    """Design matrix ``A`` (all-ones first row, full rank, lattice index one)
    with nonzero rational scalings ``c``."""

    A: IntMatrix
    c: tuple[Fraction, ...]
    provenance: str = ""

    def __post_init__(self):
        if len(self.c) != self.A.cols:
            raise ScalingLengthMismatch(f"{len(self.c)} scalings for {self.A.cols} columns")
        if any(x == 0 for x in self.c):
            raise ValueError("scalings must be nonzero")
        report = validate_design_matrix(self.A)
        if not report.ok:
            raise ValueError("invalid design matrix: " + "; ".join(report.failures()))

    @property
    def n(self) -> int:
        return self.A.cols

    @property
    def d(self) -> int:
        return self.A.rows - 1

    def configuration(self) -> PointConfiguration:
        return PointConfiguration.from_design_matrix(self.A)

    def with_scaling(self, c: Sequence, provenance: str | None = None) -> "ScaledModel":
        return ScaledModel(self.A, tuple(parse_rational(x) for x in c),
                           self.provenance if provenance is None else provenance)

    def columns(self) -> list[tuple[int, ...]]:
        return self.A.columns()


def _scaling(c, n: int) -> tuple[Fraction, ...]:
    if c is None or (isinstance(c, str) and c == "ones"):
        return (Fraction(1),) * n
    vals = tuple(parse_rational(x) for x in c)
    if len(vals) != n:
        raise ScalingLengthMismatch(f"{len(vals)} scalings for {n} columns")
    return vals


def design_matrix_from_points(points: Sequence[Sequence[int]]) -> IntMatrix:
    """``[1; coordinates]`` where the coordinates express the points in the
    affine lattice they generate (full rank, lattice index one)."""
    coords = affine_lattice_coordinates(points)
    k = len(coords[0]) if coords else 0
    rows = [[1] * len(points)] + [[c[r] for c in coords] for r in range(k)]
    return IntMatrix.from_rows(rows, len(points))


def model_from_points(points: Sequence[Sequence[int]], c=None, provenance: str = "") -> ScaledModel:
    return ScaledModel(design_matrix_from_points(points), _scaling(c, len(points)), provenance)


def explicit_model(matrix: Sequence[Sequence[int]], c=None, provenance: str = "explicit") -> ScaledModel:
    """Model from a given design matrix, used as is (it must already be valid)."""
    A = IntMatrix.from_rows(matrix)
    return ScaledModel(A, _scaling(c, A.cols), provenance)


# --- independence models ---------------------------------------------------------

def independence_model(m: int, k: int, c=None) -> ScaledModel:
    """Two variables with ``m`` and ``k`` states; columns are the states
    ``(i, j)`` with ``i`` varying slowest.  Rows: ones, indicators of
    ``X = i`` for ``i < m - 1``, indicators of ``Y = j`` for ``j < k - 1``."""
    if m < 2 or k < 2:
        raise ValueError("independence model needs at least two states per variable")
    cols = [(i, j) for i in range(m) for j in range(k)]
    rows = [[1] * len(cols)]
    rows += [[int(i == a) for i, _ in cols] for a in range(m - 1)]
    rows += [[int(j == b) for _, j in cols] for b in range(k - 1)]
    A = IntMatrix.from_rows(rows)
    return ScaledModel(A, _scaling(c, len(cols)), f"independence({m},{k})")


# Scalings realizing every ML degree 1..6 of the 3x3 independence model;
# grid entry (i, j) scales the column of state (i, j).
SCALING_GRIDS_3X3 = {
    "c1": [[1, 1, 1], [1, 1, 1], [1, 1, 1]],
    "c2": [[1, 1, 1], [1, 1, 2], [1, 1, 2]],
    "c3": [[1, 1, 1], [1, 2, 3], [1, 2, 3]],
    "c4": [[1, 1, 1], [1, 2, 3], [1, 2, 1]],
    "c5": [[1, 1, 1], [1, 2, 3], [1, 3, 5]],
    "c6": [[1, 1, 1], [1, 2, 3], [2, 3, 1]],
}


def scaling_preset(name: str) -> tuple[Fraction, ...]:
    """Preset ``"c1"`` ... ``"c6"`` flattened in the column order of
    :func:`independence_model` (row of the grid = state of the first
    variable)."""
    try:
        grid = SCALING_GRIDS_3X3[name]
    except KeyError:
        raise SpecError(f"unknown scaling preset {name!r}") from None
    return tuple(Fraction(x) for row in grid for x in row)


# --- dilated cubes -----------------------------------------------------------------

def cube_points(dim: int, dilation: int) -> list[tuple[int, ...]]:
    """Lattice points of ``[0, dilation]^dim``, first coordinate fastest."""
    return [tuple(reversed(p)) for p in itertools.product(range(dilation + 1), repeat=dim)]


def dilated_cube_model(dim: int, dilation: int, c=None) -> ScaledModel:
    if dim < 1 or dilation < 1:
        raise ValueError("dimension and dilation must be positive")
    pts = cube_points(dim, dilation)
    rows = [[1] * len(pts)] + [[p[r] for p in pts] for r in range(dim)]
    return ScaledModel(IntMatrix.from_rows(rows), _scaling(c, len(pts)),
                       f"cube(dim={dim},dilation={dilation})")


# --- graphical models --------------------------------------------------------------

@dataclass(frozen=True)
class MarkedGraph:
    vertices: tuple
    edges: frozenset
    state_counts: tuple[int, ...]

    def __post_init__(self):
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise ValueError("duplicate vertex labels")
        for e in self.edges:
            if len(e) != 2 or not set(e) <= vs:
                raise ValueError(f"edge {tuple(e)} references unknown vertices")
        if len(self.state_counts) != len(self.vertices) or any(s < 2 for s in self.state_counts):
            raise ValueError("every vertex needs a state count of at least two")

    @classmethod
    def build(cls, vertices: Sequence, edges: Iterable[Sequence], states: int | Sequence[int] = 2):
        vertices = tuple(vertices)
        sc = (states,) * len(vertices) if isinstance(states, int) else tuple(states)
        return cls(vertices, frozenset(frozenset(e) for e in edges), sc)

    def neighbors(self, v) -> set:
        return {w for e in self.edges if v in e for w in e if w != v}

    def induced(self, keep: Sequence) -> "MarkedGraph":
        keep = [v for v in self.vertices if v in set(keep)]
        idx = {v: i for i, v in enumerate(self.vertices)}
        return MarkedGraph(tuple(keep), frozenset(e for e in self.edges if e <= set(keep)),
                           tuple(self.state_counts[idx[v]] for v in keep))


def cycle_graph(n: int, states: int = 2) -> MarkedGraph:
    return MarkedGraph.build(range(1, n + 1), [(i, i % n + 1) for i in range(1, n + 1)], states)


def maximal_cliques(G: MarkedGraph) -> list[tuple]:
    """Bron–Kerbosch with pivoting; cliques as tuples in vertex order."""
    order = {v: i for i, v in enumerate(G.vertices)}
    nbrs = {v: G.neighbors(v) for v in G.vertices}
    out = []

    def bk(R, P, X):
        if not P and not X:
            out.append(tuple(sorted(R, key=order.get)))
            return
        pivot = max(P | X, key=lambda u: len(nbrs[u] & P))
        for v in sorted(P - nbrs[pivot], key=order.get):
            bk(R | {v}, P & nbrs[v], X & nbrs[v])
            P = P - {v}
            X = X | {v}

    bk(set(), set(G.vertices), set())
    return sorted(out, key=lambda c: [order[v] for v in c])


def graphical_raw_matrix(G: MarkedGraph) -> tuple[list[list[int]], list[tuple[int, ...]]]:
    """Clique parametrization: one row per (maximal clique, clique state),
    one column per joint state (lexicographic)."""
    states = list(itertools.product(*[range(s) for s in G.state_counts]))
    pos = {v: i for i, v in enumerate(G.vertices)}
    rows = []
    for C in maximal_cliques(G):
        idx = [pos[v] for v in C]
        for cs in itertools.product(*[range(G.state_counts[i]) for i in idx]):
            rows.append([int(all(x[i] == s for i, s in zip(idx, cs))) for x in states])
    return rows, states


def graphical_model_matrix(G: MarkedGraph, c=None) -> ScaledModel:
    rows, states = graphical_raw_matrix(G)
    cols = [tuple(r[j] for r in rows) for j in range(len(states))]
    return model_from_points(cols, c, f"graphical({len(G.vertices)} vertices, {len(G.edges)} edges)")


# --- quasi-independence models -----------------------------------------------------

@dataclass(frozen=True)
class BipartiteSupport:
    m: int
    k: int
    S: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if not self.S:
            raise ValueError("support must be nonempty")
        for i, j in self.S:
            if not (0 <= i < self.m and 0 <= j < self.k):
                raise ValueError(f"pair {(i, j)} out of bounds")

    @classmethod
    def build(cls, m: int, k: int, S: Iterable[Sequence[int]]):
        return cls(m, k, tuple(sorted({(int(i), int(j)) for i, j in S})))


def quasi_independence_matrix(B: BipartiteSupport, c=None) -> ScaledModel:
    cols = [tuple(int(a == i) for a in range(B.m)) + tuple(int(b == j) for b in range(B.k))
            for i, j in B.S]
    return model_from_points(cols, c, f"quasi_independence({B.m}x{B.k}, |S|={len(B.S)})")


# --- submodels ------------------------------------------------------------------------

def facial_submodel(M: ScaledModel, F: FaceDescriptor | Sequence[int]) -> ScaledModel:
    """Restrict to the columns on a face, re-expressed in their own lattice."""
    P = M.configuration()
    if isinstance(F, FaceDescriptor):
        from .polytope import lattice_points_of_face
        idx = lattice_points_of_face(P, F)
    else:
        idx = sorted(F)
        if not _is_face(P, idx):
            raise FaceMismatch(f"columns {idx} do not form a face")
    pts = [P.points[i] for i in idx]
    return model_from_points(pts, [M.c[i] for i in idx], f"{M.provenance} face {list(idx)}")


def _is_face(P: PointConfiguration, idx: Sequence[int]) -> bool:
    from .polytope import face_lattice
    target = tuple(sorted(P.labels[i] for i in idx))
    return any(f.member_indices == target for f in face_lattice(P))


def delete_columns(M: ScaledModel, idx: Iterable[int]) -> ScaledModel:
    drop = set(idx)
    keep = [j for j in range(M.n) if j not in drop]
    if not drop:
        return M
    P = M.configuration()
    pts = [P.points[j] for j in keep]
    if not pts or affine_rank(pts) < affine_rank(P.points):
        raise SpanCollapse("remaining columns span a lower-dimensional polytope")
    return model_from_points(pts, [M.c[j] for j in keep], f"{M.provenance} minus {sorted(drop)}")


def rescale_by_torus(M: ScaledModel, lam: Sequence) -> ScaledModel:
    """Scalings ``c_j * prod(lam_i ** a_ij)`` over the non-homogenizing rows."""
    lam = [parse_rational(x) for x in lam]
    out = []
    for j, col in enumerate(M.columns()):
        v = M.c[j]
        for l, a in zip(lam, col[1:]):
            v *= l ** a
        out.append(v)
    return M.with_scaling(out, f"{M.provenance} torus-rescaled")


def random_scaling(n: int, seed: int, lo: int = 1, hi: int = 1000) -> tuple[Fraction, ...]:
    rng = random.Random(seed)
    return tuple(Fraction(rng.randint(lo, hi)) for _ in range(n))


# --- JSON model specs -----------------------------------------------------------------

def _resolve_scaling(spec_scaling, n: int, seed: int):
    if spec_scaling is None or spec_scaling == "ones":
        return None
    if isinstance(spec_scaling, str):
        if spec_scaling == "random":
            return random_scaling(n, seed)
        return scaling_preset(spec_scaling)
    if isinstance(spec_scaling, Mapping) and "random" in spec_scaling:
        lo, hi = spec_scaling["random"]
        return random_scaling(n, seed, int(lo), int(hi))
    if isinstance(spec_scaling, list):
        return [parse_rational(x) for x in spec_scaling]
    raise SpecError(f"unsupported scaling {spec_scaling!r}")


def model_from_spec(spec: Mapping, seed: int = 0) -> ScaledModel:
    """Build a model from a parsed JSON spec.

    ``{"schema_version": 1, "type": ..., "scaling": "ones" | "c1".."c6" |
    "random" | ["p/q", ...], ...}`` with per-type fields
    ``independence: m, k``; ``cube: dim, dilation``;
    ``graphical: vertices, edges, states``;
    ``quasi_independence: m, k, support`` (0-based pairs);
    ``explicit: matrix``.
    """
    if not isinstance(spec, Mapping):
        raise SpecError("spec must be a JSON object")
    version = spec.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise SpecError(f"unsupported schema_version {version}")
    kind = spec.get("type")
    try:
        if kind == "independence":
            base = independence_model(int(spec["m"]), int(spec["k"]))
        elif kind == "cube":
            base = dilated_cube_model(int(spec["dim"]), int(spec["dilation"]))
        elif kind == "graphical":
            G = MarkedGraph.build(spec["vertices"], spec["edges"], spec.get("states", 2))
            base = graphical_model_matrix(G)
        elif kind == "quasi_independence":
            B = BipartiteSupport.build(int(spec["m"]), int(spec["k"]), spec["support"])
            base = quasi_independence_matrix(B)
        elif kind == "explicit":
            base = explicit_model(spec["matrix"])
        else:
            raise SpecError(f"unknown model type {kind!r}")
    except KeyError as exc:
        raise SpecError(f"missing field {exc.args[0]!r} for type {kind!r}") from None
    except (TypeError, ValueError) as exc:
        if isinstance(exc, SpecError):
            raise
        raise SpecError(str(exc)) from None
    c = _resolve_scaling(spec.get("scaling"), base.n, seed)
    name = spec.get("name", base.provenance)
    try:
        return base.with_scaling(c, name) if c is not None else base.with_scaling(base.c, name)
    except ValueError as exc:
        raise SpecError(str(exc)) from None


def load_spec(path: str | Path) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise SpecError(f"{path}: invalid JSON ({exc})") from None


SPEC_DIR = Path(__file__).parent / "specs"


def golden_spec_paths() -> list[Path]:
    return sorted(SPEC_DIR.glob("*.json"))
