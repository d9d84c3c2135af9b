"""Lattice polytope combinatorics for point configurations: faces with all
their lattice points, normalized volume, Cayley embeddings and regular
subdivisions.  Everything is exact integer/rational arithmetic."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

from .lattice_core import IntMatrix, _row_echelon, affine_lattice_coordinates, affine_rank, determinant


class DegenerateConfiguration(ValueError):
    """The points do not affinely span their ambient space."""


class FaceMismatch(ValueError):
    """A face descriptor is inconsistent with the configuration."""


class DimensionMismatch(ValueError):
    pass


class WeightLengthMismatch(ValueError):
    pass


@dataclass(frozen=True)
class PointConfiguration:
    """Lattice points ``points[i]`` carrying column labels ``labels[i]``."""

    dim: int
    points: tuple[tuple[int, ...], ...]
    labels: tuple[int, ...]

    def __post_init__(self):
        if any(len(p) != self.dim for p in self.points):
            raise ValueError("all points must have length dim")
        if len(set(self.labels)) != len(self.labels) or len(self.labels) != len(self.points):
            raise ValueError("labels must be distinct, one per point")

    @classmethod
    def from_points(cls, points: Sequence[Sequence[int]], labels: Sequence[int] | None = None):
        pts = tuple(tuple(int(x) for x in p) for p in points)
        dim = len(pts[0]) if pts else 0
        return cls(dim, pts, tuple(range(len(pts))) if labels is None else tuple(labels))

    @classmethod
    def from_design_matrix(cls, A) -> "PointConfiguration":
        """Columns of ``A`` without the leading row of ones."""
        M = A if isinstance(A, IntMatrix) else IntMatrix.from_rows(A)
        cols = M.columns()
        return cls.from_points([c[1:] for c in cols])

    def __len__(self):
        return len(self.points)

    def affine_dimension(self) -> int:
        return affine_rank(self.points)

    def position(self, label: int) -> int:
        return self.labels.index(label)

    def restrict(self, labels: Sequence[int]) -> "PointConfiguration":
        pos = [self.position(l) for l in labels]
        return PointConfiguration(self.dim, tuple(self.points[i] for i in pos), tuple(labels))

    def lattice_coordinates(self) -> "PointConfiguration":
        """Affinely isomorphic full-dimensional copy in the lattice generated by
        the points (same labels)."""
        coords = affine_lattice_coordinates(self.points)
        k = len(coords[0]) if coords else 0
        return PointConfiguration(k, tuple(coords), self.labels)


@dataclass(frozen=True)
class FaceDescriptor:
    """Face ``{p : <normal, p> = offset}`` of conv(P), where every point
    satisfies ``<normal, p> >= offset``; ``member_indices`` are the labels of
    all configuration points on it."""

    normal: tuple[int, ...]
    offset: int
    member_indices: tuple[int, ...]
    face_dim: int

    def value(self, p: Sequence[int]) -> int:
        return sum(a * b for a, b in zip(self.normal, p))


# --- small exact linear algebra ------------------------------------------------------

def _nullspace(rows: list[list[Fraction]], n: int) -> list[list[Fraction]]:
    red = _row_echelon([list(r) for r in rows]) if rows else []
    pivots = []
    for r in red:
        pivots.append(next(j for j, x in enumerate(r) if x != 0))
    free = [j for j in range(n) if j not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for r, pc in zip(red, pivots):
            v[pc] = -r[f]
        basis.append(v)
    return basis


def _primitive(v: Sequence) -> tuple[int, ...]:
    den = 1
    for x in v:
        den = lcm(den, Fraction(x).denominator)
    ints = [int(Fraction(x) * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return tuple(x // g for x in ints) if g else tuple(ints)


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


# --- double description ----------------------------------------------------------------

def _extreme_rays(rows: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    """Extreme rays of the pointed cone ``{x : <r, x> >= 0 for r in rows}``.

    ``rows`` must have full column rank.  Double description method with the
    combinatorial adjacency test.
    """
    n = len(rows[0])
    # initial basis of n independent rows
    basis_idx: list[int] = []
    current: list[list[Fraction]] = []
    for i, r in enumerate(rows):
        trial = current + [[Fraction(x) for x in r]]
        if len(_row_echelon([list(t) for t in trial])) == len(trial):
            current = trial
            basis_idx.append(i)
            if len(basis_idx) == n:
                break
    if len(basis_idx) < n:
        raise DegenerateConfiguration("constraint matrix is not of full rank")
    # rays of the simplicial cone: columns of the inverse of the basis rows
    B = [list(rows[i]) for i in basis_idx]
    rays = []
    for k in range(n):
        # x with <B_j, x> = delta_jk
        others = [[Fraction(x) for x in B[j]] for j in range(n) if j != k]
        ns = _nullspace(others, n)
        x = ns[0]
        if _dot(B[k], x) < 0:
            x = [-t for t in x]
        rays.append(_primitive(x))
    processed = list(basis_idx)
    zero_sets = []
    for r in rays:
        zs = 0
        for j in processed:
            if _dot(rows[j], r) == 0:
                zs |= 1 << j
        zero_sets.append(zs)
    for i in range(len(rows)):
        if i in basis_idx:
            continue
        a = rows[i]
        vals = [_dot(a, r) for r in rays]
        pos = [k for k, v in enumerate(vals) if v > 0]
        neg = [k for k, v in enumerate(vals) if v < 0]
        zer = [k for k, v in enumerate(vals) if v == 0]
        new_rays = [rays[k] for k in pos + zer]
        new_zs = [zero_sets[k] | (1 << i if vals[k] == 0 else 0) for k in pos + zer]
        for p in pos:
            for q in neg:
                common = zero_sets[p] & zero_sets[q]
                if bin(common).count("1") < n - 2:
                    continue
                adjacent = True
                for k in range(len(rays)):
                    if k != p and k != q and (zero_sets[k] & common) == common:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                vp, vq = vals[p], vals[q]
                r = tuple(vp * y - vq * x for x, y in zip(rays[p], rays[q]))
                r = _primitive(r)
                new_rays.append(r)
                new_zs.append(common | (1 << i))
        rays, zero_sets = new_rays, new_zs
        processed.append(i)
    return rays


def facet_inequalities(P: PointConfiguration) -> list[tuple[tuple[int, ...], int]]:
    """Facets of a full-dimensional configuration as ``(normal, offset)``."""
    k = P.dim
    if P.affine_dimension() != k:
        raise DegenerateConfiguration("configuration is not full-dimensional")
    if k == 0:
        return []
    rows = [(1,) + p for p in P.points]
    out = []
    for ray in _extreme_rays(rows):
        b, n = ray[0], ray[1:]
        out.append((tuple(n), -b))
    return sorted(set(out))


# --- faces --------------------------------------------------------------------------

def _span_normal(P: PointConfiguration, members: Sequence[int]) -> tuple[int, ...]:
    """A normal vector in the direction space of P that is constant on the
    member points (positions)."""
    p0 = P.points[0]
    dirs = [[Fraction(x - y) for x, y in zip(p, p0)] for p in P.points[1:]]
    D = _row_echelon([list(r) for r in dirs]) if dirs else []
    m0 = P.points[members[0]]
    fdirs = [[x - y for x, y in zip(P.points[m], m0)] for m in members[1:]]
    # lambda with <sum lambda_j D_j, f> = 0 for every facet direction f
    eqs = [[_dot(Dj, f) for Dj in D] for f in fdirs]
    ns = _nullspace(eqs, len(D))
    if len(ns) != 1:
        raise FaceMismatch("member set is not a facet")
    lam = ns[0]
    n = [sum(l * Dj[c] for l, Dj in zip(lam, D)) for c in range(P.dim)]
    return _primitive(n)


def facets(P: PointConfiguration) -> list[FaceDescriptor]:
    """Facets of conv(P) (P may be lower-dimensional in its ambient space)."""
    k = P.affine_dimension()
    if k <= 0:
        return []
    Q = P.lattice_coordinates() if k < P.dim else P
    out = []
    for normal_q, off_q in facet_inequalities(Q):
        members = [i for i, q in enumerate(Q.points) if _dot(normal_q, q) == off_q]
        if k < P.dim:
            n = _span_normal(P, members)
            vals = [_dot(n, p) for p in P.points]
            off = vals[members[0]]
            if min(vals) < off:
                n = tuple(-x for x in n)
                off = -off
        else:
            n, off = normal_q, off_q
        labels = tuple(sorted(P.labels[i] for i in members))
        out.append(FaceDescriptor(tuple(n), off, labels, k - 1))
    out.sort(key=lambda f: f.member_indices)
    return out


def face_lattice(P: PointConfiguration) -> list[FaceDescriptor]:
    """All nonempty faces of conv(P) including conv(P) itself, with every
    configuration point on each face listed.  Sorted by decreasing
    dimension, then by member labels."""
    if not P.points:
        raise ValueError("empty configuration")
    k = P.affine_dimension()
    full = FaceDescriptor((0,) * P.dim, 0, tuple(sorted(P.labels)), k)
    F = facets(P)
    if not F:
        return [full]
    by_members: dict[frozenset, list[int]] = {}
    facet_sets = [frozenset(f.member_indices) for f in F]
    for j, s in enumerate(facet_sets):
        by_members.setdefault(s, []).append(j)
    frontier = list(by_members)
    while frontier:
        nxt = []
        for s in frontier:
            for t in facet_sets:
                u = s & t
                if u and u != s and u not in by_members:
                    by_members[u] = []
                    nxt.append(u)
        frontier = nxt
    faces = [full]
    for s in by_members:
        containing = [j for j, t in enumerate(facet_sets) if s <= t]
        normal = tuple(sum(F[j].normal[c] for j in containing) for c in range(P.dim))
        offset = sum(F[j].offset for j in containing)
        members = tuple(sorted(s))
        pts = [P.points[P.position(l)] for l in members]
        faces.append(FaceDescriptor(normal, offset, members, affine_rank(pts)))
    faces.sort(key=lambda f: (-f.face_dim, f.member_indices))
    return faces


def f_vector(faces: Sequence[FaceDescriptor]) -> list[int]:
    top = max(f.face_dim for f in faces)
    return [sum(1 for f in faces if f.face_dim == d) for d in range(top + 1)]


def lattice_points_of_face(P: PointConfiguration, F: FaceDescriptor) -> list[int]:
    """Labels of the configuration points on ``F`` (validated against P)."""
    if len(F.normal) != P.dim:
        raise FaceMismatch("normal has the wrong length")
    on = []
    for p, l in zip(P.points, P.labels):
        v = F.value(p)
        if v < F.offset:
            raise FaceMismatch("supporting inequality violated by a point")
        if v == F.offset:
            on.append(l)
    if tuple(sorted(on)) != tuple(sorted(F.member_indices)):
        raise FaceMismatch("member indices do not match the supporting inequality")
    return sorted(on)


# --- volume ---------------------------------------------------------------------------

def placing_triangulation(P: PointConfiguration, order: Sequence[int] | None = None) -> list[tuple[int, ...]]:
    """Simplices (tuples of positions) of the placing triangulation that
    inserts the points in ``order``; P must be full-dimensional."""
    k = P.dim
    if P.affine_dimension() != k:
        raise DegenerateConfiguration("normalized volume needs a full-dimensional configuration")
    order = list(range(len(P.points))) if order is None else list(order)
    pts = P.points
    if k == 0:
        return [(order[0],)]

    def orient(idx: Sequence[int]) -> int:
        base = pts[idx[0]]
        det = determinant([[x - y for x, y in zip(pts[i], base)] for i in idx[1:]])
        return (det > 0) - (det < 0)

    # initial simplex
    simplex = [order[0]]
    for i in order[1:]:
        if affine_rank([pts[j] for j in simplex + [i]]) == len(simplex):
            simplex.append(i)
            if len(simplex) == k + 1:
                break
    simplices = [tuple(simplex)]
    boundary: dict[frozenset, tuple[tuple[int, ...], int]] = {}
    for v in simplex:
        facet = tuple(x for x in simplex if x != v)
        boundary[frozenset(facet)] = (facet, v)
    used = set(simplex)
    for i in order:
        if i in used:
            continue
        visible = []
        for key, (facet, opp) in boundary.items():
            s_opp = orient(facet + (opp,))
            s_new = orient(facet + (i,))
            if s_new != 0 and s_new != s_opp:
                visible.append(key)
        if not visible:
            continue
        used.add(i)
        added: dict[frozenset, tuple[tuple[int, ...], int]] = {}
        for key in visible:
            facet, _ = boundary.pop(key)
            simplices.append(facet + (i,))
            for v in facet:
                nf = tuple(x for x in facet if x != v) + (i,)
                fk = frozenset(nf)
                if fk in added:
                    del added[fk]
                else:
                    added[fk] = (nf, v)
        boundary.update(added)
    return simplices


def simplex_volume(P: PointConfiguration, simplex: Sequence[int]) -> int:
    base = P.points[simplex[0]]
    return abs(determinant([[x - y for x, y in zip(P.points[i], base)] for i in simplex[1:]]))


def normalized_volume(P: PointConfiguration, order: Sequence[int] | None = None) -> int:
    """``dim! * vol(conv(P))`` via a placing triangulation."""
    if P.dim == 0:
        if not P.points:
            raise DegenerateConfiguration("empty configuration")
        return 1
    return sum(simplex_volume(P, s) for s in placing_triangulation(P, order))


def lattice_normalized_volume(P: PointConfiguration) -> int:
    """Normalized volume measured in the affine lattice generated by P (works
    for lower-dimensional configurations; this is the degree of the toric
    variety of P)."""
    return normalized_volume(P.lattice_coordinates())


# --- Cayley configurations and regular subdivisions -------------------------------------

def cayley_configuration(Ps: Sequence[PointConfiguration], drop_last: bool = False) -> PointConfiguration:
    """Point ``p`` of the i-th configuration becomes ``(p, e_i)``.  Labels
    become consecutive integers in block order."""
    if not Ps:
        raise ValueError("no configurations")
    dim = Ps[0].dim
    if any(P.dim != dim for P in Ps):
        raise DimensionMismatch("configurations live in different dimensions")
    r = len(Ps) - (1 if drop_last else 0)
    pts = []
    for i, P in enumerate(Ps):
        e = tuple(int(i == j) for j in range(r))
        for p in P.points:
            pts.append(tuple(p) + e)
    return PointConfiguration.from_points(pts)


@dataclass(frozen=True)
class Subdivision:
    """Cells as sorted tuples of positions into the configuration."""

    cells: tuple[tuple[int, ...], ...]


def regular_subdivision(P: PointConfiguration, w: Sequence) -> Subdivision:
    """Projection of the lower faces of ``conv{(p_i, w_i)}``."""
    if len(w) != len(P.points):
        raise WeightLengthMismatch(f"{len(w)} weights for {len(P.points)} points")
    ws = [Fraction(x) for x in w]
    den = 1
    for x in ws:
        den = lcm(den, x.denominator)
    wi = [int(x * den) for x in ws]
    Q = P.lattice_coordinates() if P.affine_dimension() < P.dim else P
    lifted = PointConfiguration(Q.dim + 1, tuple(q + (h,) for q, h in zip(Q.points, wi)),
                                tuple(range(len(wi))))
    if lifted.affine_dimension() == Q.dim:
        return Subdivision((tuple(range(len(wi))),))
    cells = []
    for normal, off in facet_inequalities(lifted):
        if normal[-1] > 0:
            cells.append(tuple(i for i, q in enumerate(lifted.points) if _dot(normal, q) == off))
    return Subdivision(tuple(sorted(cells)))


def is_triangulation(S: Subdivision, P: PointConfiguration) -> bool:
    """Every cell is a simplex: its size is its affine dimension plus one."""
    return all(len(c) == affine_rank([P.points[i] for i in c]) + 1 for c in S.cells)
