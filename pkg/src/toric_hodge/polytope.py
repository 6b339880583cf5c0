"""Exact lattice polytopes.

A :class:`Polytope` carries an irredundant vertex list, integral facet
inequalities ``<normal, x> + offset >= 0`` and the vertex/facet incidence.
Faces are identified by the bitmask of their vertices.  Lattice points of
dilated faces are counted in an intrinsic chart of each face, so low
dimensional faces of high dimensional polytopes stay cheap.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from math import comb, gcd
from typing import Optional, Sequence

from .errors import DimensionMismatch, EmptyFace, NotFullDimensional, NotReflexive
from .exactlin import (
    LatticeChart,
    _invert,
    affine_chart,
    dot,
    primitive,
    rank,
)


def _bits(mask: int):
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


# ---------------------------------------------------------------------------
# double description


def cone_facets(generators: Sequence[Sequence[int]]) -> list[tuple[tuple, int]]:
    """Facets of the full-dimensional pointed cone spanned by ``generators``.

    Returns a list of ``(normal, mask)`` where ``normal`` is the primitive
    inner normal and ``mask`` the bitset of generators lying on the facet.
    Incremental double description over the integers.
    """
    gens = [tuple(g) for g in generators]
    dim = len(gens[0])
    basis, rows = [], []
    for i, g in enumerate(gens):
        if rank(rows + [g]) > len(rows):
            rows.append(g)
            basis.append(i)
            if len(rows) == dim:
                break
    if len(rows) < dim:
        raise NotFullDimensional(f"generators span a cone of dimension {len(rows)} < {dim}")

    inv = _invert([[Fraction(x) for x in r] for r in rows])
    rays = []
    allbasis = sum(1 << i for i in basis)
    for j in range(dim):
        col = [inv[i][j] for i in range(dim)]
        den = 1
        for x in col:
            den = den * x.denominator // gcd(den, x.denominator)
        vec = primitive([int(x * den) for x in col])
        rays.append((vec, allbasis & ~(1 << basis[j])))

    done = set(basis)
    for i, g in enumerate(gens):
        if i in done:
            continue
        bit = 1 << i
        plus, zero, minus = [], [], []
        for r in rays:
            s = dot(r[0], g)
            if s > 0:
                plus.append((r, s))
            elif s < 0:
                minus.append((r, s))
            else:
                zero.append(r)
        new = [r for r, _ in plus] + [(v, z | bit) for v, z in zero]
        if minus:
            zsets = [r[1] for r in rays]
            for pi, (p, sp) in enumerate(plus):
                for (q, sq) in minus:
                    common = p[1] & q[1]
                    if common.bit_count() < dim - 2:
                        continue
                    # combinatorial adjacency: no third ray is tight on all of `common`
                    hits = 0
                    for z in zsets:
                        if common & ~z == 0:
                            hits += 1
                            if hits > 2:
                                break
                    if hits > 2:
                        continue
                    vec = primitive([sp * b - sq * a for a, b in zip(p[0], q[0])])
                    new.append((vec, common | bit))
        rays = new
        done.add(i)
    return rays


def _extreme_generators(gens, facets) -> list[int]:
    dim = len(gens[0])
    out = []
    seen = set()
    for i, g in enumerate(gens):
        if g in seen:
            continue
        tight = [f[0] for f in facets if f[1] >> i & 1]
        if rank(tight) == dim - 1:
            out.append(i)
            seen.add(g)
    return out


# ---------------------------------------------------------------------------
# polytopes


@dataclass(frozen=True)
class Face:
    vertex_set: int
    facet_set: int
    dim: int

    @property
    def is_empty(self) -> bool:
        return self.dim == -1


class FaceLattice:
    """All faces of a polytope, graded by dimension, with containment."""

    def __init__(self, faces: list[Face], top_dim: int):
        self.faces = sorted(faces, key=lambda f: (f.dim, f.vertex_set))
        self.top_dim = top_dim
        self.index = {f.vertex_set: i for i, f in enumerate(self.faces)}
        n = len(self.faces)
        self.by_dim = {d: [] for d in range(-1, top_dim + 1)}
        for i, f in enumerate(self.faces):
            self.by_dim[f.dim].append(i)
        # up[i]: faces containing face i; down[i]: faces contained in face i
        self.up = [0] * n
        self.down = [0] * n
        for i, f in enumerate(self.faces):
            for j, g in enumerate(self.faces):
                if f.vertex_set & ~g.vertex_set == 0 and f.dim <= g.dim:
                    self.up[i] |= 1 << j
                    self.down[j] |= 1 << i
        self.bottom = self.index[0]
        self.top = n - 1

    def __len__(self):
        return len(self.faces)

    def __iter__(self):
        return iter(self.faces)

    def face(self, i: int) -> Face:
        return self.faces[i]

    def of_dim(self, d: int) -> list[Face]:
        return [self.faces[i] for i in self.by_dim.get(d, [])]

    def leq(self, i: int, j: int) -> bool:
        return bool(self.up[i] >> j & 1)

    def between(self, i: int, j: int) -> list[int]:
        return list(_bits(self.up[i] & self.down[j]))

    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(self.by_dim[d]) for d in range(-1, self.top_dim + 1))

    def comparable_pairs(self):
        for i in range(len(self.faces)):
            for j in _bits(self.up[i]):
                yield i, j


class EhrhartData:
    """Lattice point counts of all dilates of one lattice polytope of dimension d.

    Stores the numerator ``S`` of the Ehrhart series; counts for any dilation
    factor follow from it.
    """

    def __init__(self, dim: int, s_coeffs: Sequence[int]):
        self.dim = dim
        self.s = tuple(s_coeffs)

    def points(self, k: int) -> int:
        d = self.dim
        if k == 0:
            return 1
        return sum(c * comb(k - j + d, d) for j, c in enumerate(self.s) if k - j >= 0)

    def interior(self, k: int) -> int:
        # T(t) = t^(d+1) S(1/t)
        d = self.dim
        total = 0
        for j, c in enumerate(self.s):
            jt = d + 1 - j
            if k - jt >= 0:
                total += c * comb(k - jt + d, d)
        return total


class Polytope:
    """Lattice polytope with exact V- and H-representation.

    ``facets`` are pairs ``(normal, offset)`` meaning ``<normal, x> + offset >= 0``.
    For polytopes that are not full dimensional the inequalities are only
    meaningful on the affine hull.
    """

    def __init__(self, vertices, facets, affine_dim: int):
        self.vertices = tuple(tuple(int(x) for x in v) for v in vertices)
        self.facets = tuple((tuple(n), int(b)) for n, b in facets)
        self.ambient_dim = len(self.vertices[0])
        self.affine_dim = affine_dim
        self.facet_masks = tuple(
            sum(1 << i for i, v in enumerate(self.vertices) if dot(n, v) + b == 0)
            for n, b in self.facets
        )
        self._lattice: Optional[FaceLattice] = None
        self._ehrhart: dict[int, EhrhartData] = {}
        self._lock = threading.Lock()

    def __repr__(self):
        return (f"Polytope(dim={self.affine_dim}, ambient={self.ambient_dim}, "
                f"vertices={len(self.vertices)}, facets={len(self.facets)})")

    @property
    def full_mask(self) -> int:
        return (1 << len(self.vertices)) - 1

    @property
    def is_full_dimensional(self) -> bool:
        return self.affine_dim == self.ambient_dim

    def vertex_set(self) -> frozenset:
        return frozenset(self.vertices)

    def contains(self, x) -> bool:
        if not all(dot(n, x) + b >= 0 for n, b in self.facets):
            return False
        if self.is_full_dimensional:
            return True
        try:
            self._chart().coords(x)
        except ValueError:
            return False
        return True

    def _chart(self) -> LatticeChart:
        if not hasattr(self, "_chart_cache"):
            self._chart_cache = affine_chart(self.vertices)
        return self._chart_cache

    # faces ---------------------------------------------------------------

    def face_lattice(self) -> FaceLattice:
        if self._lattice is None:
            self._lattice = _build_face_lattice(self)
        return self._lattice

    def face_of(self, vertex_set: int) -> Face:
        lat = self.face_lattice()
        return lat.faces[lat.index[vertex_set]]

    def full_face(self) -> Face:
        return self.face_lattice().faces[-1]

    def face_vertices(self, face: Face) -> list[tuple]:
        return [self.vertices[i] for i in _bits(face.vertex_set)]

    def facet_set_of(self, vertex_set: int) -> int:
        out = 0
        for j, m in enumerate(self.facet_masks):
            if vertex_set & ~m == 0:
                out |= 1 << j
        return out

    # counting ------------------------------------------------------------

    def ehrhart(self, face: Face) -> EhrhartData:
        if face.dim < 0:
            raise EmptyFace("the empty face has no lattice points")
        data = self._ehrhart.get(face.vertex_set)
        if data is None:
            data = _face_ehrhart(self.face_vertices(face), face.dim)
            with self._lock:
                self._ehrhart.setdefault(face.vertex_set, data)
        return data

    def count_points(self, face: Optional[Face] = None, k: int = 1) -> int:
        face = self.full_face() if face is None else face
        if face.dim < 0:
            raise EmptyFace("the empty face has no lattice points")
        return self.ehrhart(face).points(k)

    def count_interior(self, face: Optional[Face] = None, k: int = 1) -> int:
        face = self.full_face() if face is None else face
        if face.dim < 0:
            raise EmptyFace("the empty face has no lattice points")
        return self.ehrhart(face).interior(k)

    def lattice_points(self, face: Optional[Face] = None) -> list[tuple]:
        face = self.full_face() if face is None else face
        verts = self.face_vertices(face)
        chart = affine_chart(verts)
        if chart.dim == 0:
            return [verts[0]]
        q = convex_hull([chart.coords(v) for v in verts])
        return [chart.point(c) for c in _FiberCounter(q).enumerate(1)]

    def is_reflexive(self) -> bool:
        return is_reflexive(self)


def vertex_count(face: Face) -> int:
    if face.dim < 0:
        raise EmptyFace("the empty face has no vertices")
    return face.vertex_set.bit_count()


def count_points(p: Polytope, face: Optional[Face] = None, k: int = 1) -> int:
    return p.count_points(face, k)


def count_interior(p: Polytope, face: Optional[Face] = None, k: int = 1) -> int:
    return p.count_interior(face, k)


def face_lattice(p: Polytope) -> FaceLattice:
    return p.face_lattice()


def _build_face_lattice(p: Polytope) -> FaceLattice:
    full = p.full_mask
    top = Face(full, p.facet_set_of(full), p.affine_dim)
    faces = {full: top}
    level = [top]
    for d in range(p.affine_dim - 1, -2, -1):
        nxt = {}
        for f in level:
            cands = set()
            for j, m in enumerate(p.facet_masks):
                if f.facet_set >> j & 1:
                    continue
                cands.add(f.vertex_set & m)
            for c in cands:
                if any(c != o and c & ~o == 0 for o in cands):
                    continue
                if c not in nxt:
                    nxt[c] = Face(c, p.facet_set_of(c) if c else (1 << len(p.facets)) - 1, d)
        if d == -1 and not nxt:
            nxt[0] = Face(0, (1 << len(p.facets)) - 1, -1)
        faces.update(nxt)
        level = list(nxt.values())
    if 0 not in faces:
        faces[0] = Face(0, (1 << len(p.facets)) - 1, -1)
    return FaceLattice(list(faces.values()), p.affine_dim)


# ---------------------------------------------------------------------------
# construction


def hull(points: Sequence[Sequence[int]]) -> Polytope:
    """Convex hull of a full-dimensional lattice point set."""
    pts = _dedupe(points)
    chart = affine_chart(pts)
    if chart.dim < len(pts[0]):
        raise NotFullDimensional(
            f"points span a {chart.dim}-dimensional affine subspace of a "
            f"{len(pts[0])}-dimensional space")
    return _full_hull(pts)


def _dedupe(points):
    seen, out = set(), []
    for p in points:
        p = tuple(int(x) for x in p)
        if p not in seen:
            seen.add(p)
            out.append(p)
    if not out:
        raise ValueError("no points given")
    return out


def _full_hull(pts) -> Polytope:
    dim = len(pts[0])
    if dim == 0:
        return Polytope([()], [], 0)
    homog = [p + (1,) for p in pts]
    facets = cone_facets(homog)
    ext = _extreme_generators(homog, facets)
    vertices = [pts[i] for i in ext]
    ineqs = []
    for normal, _ in facets:
        a, b = normal[:-1], normal[-1]
        g = 0
        for x in a:
            g = gcd(g, x)
        ineqs.append((tuple(x // g for x in a), b // g))
    return Polytope(vertices, ineqs, dim)


def convex_hull(points: Sequence[Sequence[int]]) -> Polytope:
    """Convex hull of any nonempty lattice point set, full dimensional or not."""
    pts = _dedupe(points)
    chart = affine_chart(pts)
    if chart.dim == len(pts[0]):
        return _full_hull(pts)
    if chart.dim == 0:
        return Polytope(pts[:1], [], 0)
    local = _full_hull([chart.coords(p) for p in pts])
    vertices = [chart.point(v) for v in local.vertices]
    ineqs = []
    for a, b in local.facets:
        alpha = chart.pushforward_functional(a)
        i = next(i for i, x in enumerate(a) if x)
        scale = dot(alpha, chart.basis[i]) // a[i]
        off = scale * b - dot(alpha, chart.origin)
        g = gcd(*alpha, off) if alpha else 1
        ineqs.append((tuple(x // g for x in alpha), off // g))
    p = Polytope(vertices, ineqs, chart.dim)
    p._chart_cache = chart
    return p


def is_reflexive(p: Polytope) -> bool:
    if not p.is_full_dimensional:
        return False
    return all(b == 1 for _, b in p.facets)


def polar(p: Polytope) -> Polytope:
    """Polar of a reflexive polytope; vertices are the facet normals in order."""
    if not is_reflexive(p):
        raise NotReflexive("polar is only defined here for reflexive polytopes")
    return Polytope([n for n, _ in p.facets], [(v, 1) for v in p.vertices], p.affine_dim)


def minkowski_sum(a: Polytope, b: Polytope) -> Polytope:
    if a.ambient_dim != b.ambient_dim:
        raise DimensionMismatch(f"ambient dimensions {a.ambient_dim} and {b.ambient_dim} differ")
    pts = [tuple(x + y for x, y in zip(u, v)) for u in a.vertices for v in b.vertices]
    return convex_hull(pts)


def sublattice_restrict(points: Sequence[Sequence[int]]) -> tuple[Polytope, LatticeChart]:
    """Rewrite the hull of ``points`` in coordinates of the affine lattice they generate.

    The chart is based at the first point, so including the origin first
    keeps it at the coordinate origin.
    """
    pts = _dedupe(points)
    chart = affine_chart(pts, saturate=False)
    local = [chart.coords(p) for p in pts]
    if chart.dim == 0:
        return Polytope([()], [], 0), chart
    return _full_hull(local), chart


def same_polytope(a: Polytope, b: Polytope) -> bool:
    return a.vertex_set() == b.vertex_set()


# ---------------------------------------------------------------------------
# counting


def _face_ehrhart(verts: list[tuple], dim: int) -> EhrhartData:
    if dim == 0:
        return EhrhartData(0, (1,))
    chart = affine_chart(verts)
    if chart.dim != dim:
        raise AssertionError(f"face dimension {dim} disagrees with its span {chart.dim}")
    q = convex_hull([chart.coords(v) for v in verts])
    counter = _FiberCounter(q)
    kmax = (dim + 1) // 2
    xs, ys = [0], [1]
    for k in range(1, kmax + 1):
        pts, inner = counter.count(k)
        xs += [k, -k]
        ys += [pts, (-1) ** dim * inner]
    values = [_interpolate(xs, ys, k) for k in range(dim + 1)]
    s = []
    for j in range(dim + 1):
        s.append(sum((-1) ** i * comb(dim + 1, i) * values[j - i] for i in range(j + 1)))
    return EhrhartData(dim, _trim(s))


def _trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _interpolate(xs, ys, x) -> int:
    total = Fraction(0)
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        term = Fraction(yi)
        for j, xj in enumerate(xs):
            if j != i:
                term *= Fraction(x - xj, xi - xj)
        total += term
    if total.denominator != 1:
        raise AssertionError("Ehrhart interpolation produced a non-integer")
    return int(total)


class _FiberCounter:
    """Enumerate lattice points of dilates of a full-dimensional polytope.

    Coordinates are visited one at a time; the admissible range of the j-th
    coordinate comes from the H-description of the projection onto the first
    j coordinates, so every visited prefix has a nonempty fiber.
    """

    def __init__(self, q: Polytope):
        m = q.ambient_dim
        widths = []
        for c in range(m):
            vals = [v[c] for v in q.vertices]
            widths.append(max(vals) - min(vals))
        self.order = sorted(range(m), key=lambda c: widths[c])
        verts = [tuple(v[c] for c in self.order) for v in q.vertices]
        self.m = m
        self.levels = []
        for j in range(1, m + 1):
            proj = _full_hull([v[:j] for v in verts]) if j < m else _full_hull(verts)
            self.levels.append([(a[:-1], a[-1], b) for a, b in proj.facets])

    def _walk(self, k, collect):
        m = self.m
        levels = self.levels
        total = 0
        inner = 0
        found = []
        prefix = []

        def rec(j):
            nonlocal total, inner
            lo = hi = None
            last = j == m - 1
            if last:
                lo_s = hi_s = None
                strict_ok = True
            for a, c, b in levels[j]:
                s = k * b
                for x, y in zip(a, prefix):
                    s += x * y
                if c > 0:
                    v = -(s // c)
                    if lo is None or v > lo:
                        lo = v
                    if last:
                        v = -((s - 1) // c)
                        if lo_s is None or v > lo_s:
                            lo_s = v
                elif c < 0:
                    v = s // (-c)
                    if hi is None or v < hi:
                        hi = v
                    if last:
                        v = (s - 1) // (-c)
                        if hi_s is None or v < hi_s:
                            hi_s = v
                elif last and s < 1:
                    strict_ok = False
            if lo is None or hi is None or hi < lo:
                return
            if last:
                if collect:
                    for x in range(lo, hi + 1):
                        found.append(tuple(prefix) + (x,))
                total += hi - lo + 1
                if strict_ok and hi_s >= lo_s:
                    inner += hi_s - lo_s + 1
                return
            for x in range(lo, hi + 1):
                prefix.append(x)
                rec(j + 1)
                prefix.pop()

        rec(0)
        return total, inner, found

    def count(self, k: int) -> tuple[int, int]:
        total, inner, _ = self._walk(k, False)
        return total, inner

    def enumerate(self, k: int) -> list[tuple]:
        _, _, found = self._walk(k, True)
        inv = [0] * self.m
        for pos, c in enumerate(self.order):
            inv[c] = pos
        return [tuple(p[inv[c]] for c in range(self.m)) for p in found]


def brute_force_points(p: Polytope, face: Optional[Face] = None, k: int = 1) -> tuple[int, int]:
    """Reference counter: scan the bounding box of ``k*face`` in ambient coordinates.

    Returns ``(points, relative_interior_points)``.  Only for small inputs.
    """
    from itertools import product

    face = p.full_face() if face is None else face
    verts = [tuple(k * x for x in v) for v in p.face_vertices(face)]
    dim = p.ambient_dim
    lo = [min(v[i] for v in verts) for i in range(dim)]
    hi = [max(v[i] for v in verts) for i in range(dim)]
    # inequalities of the face: facets of p containing it are equations
    eqs = [(n, b) for j, (n, b) in enumerate(p.facets) if face.facet_set >> j & 1]
    rest = [(n, b) for j, (n, b) in enumerate(p.facets) if not face.facet_set >> j & 1]
    chart = affine_chart(verts) if len(verts) > 1 else None
    total = inner = 0
    for x in product(*[range(a, b + 1) for a, b in zip(lo, hi)]):
        if any(dot(n, x) + k * b != 0 for n, b in eqs):
            continue
        if any(dot(n, x) + k * b < 0 for n, b in rest):
            continue
        if chart is not None:
            try:
                chart.coords(x)
            except ValueError:
                continue
        elif x != verts[0]:
            continue
        total += 1
        if all(dot(n, x) + k * b > 0 for n, b in rest):
            inner += 1
    return total, inner
