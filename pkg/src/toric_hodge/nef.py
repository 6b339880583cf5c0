"""Nef partitions, Cayley polytopes and the duality between their faces."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional, Sequence

from .errors import InvalidPartition, NonLatticeDual, NotNef, NotReflexive
from .polytope import (
    Face,
    Polytope,
    _extreme_generators,
    cone_facets,
    convex_hull,
    is_reflexive,
    minkowski_sum,
    polar,
    sublattice_restrict,
)


@dataclass
class NefPartition:
    delta: Polytope
    parts: tuple
    part_polytopes: tuple
    nabla_polar: Polytope

    @property
    def n(self) -> int:
        return self.delta.ambient_dim

    @property
    def r(self) -> int:
        return len(self.parts)


def validate_nef_partition(delta: Polytope, parts: Sequence[Sequence[int]]) -> NefPartition:
    """Check that ``parts`` (0-based vertex indices) define a nef partition of ``delta``."""
    if not is_reflexive(delta):
        raise NotReflexive("the polytope is not reflexive")
    nv = len(delta.vertices)
    seen = set()
    clean = []
    for k, part in enumerate(parts):
        part = tuple(sorted(set(part)))
        if not part:
            raise InvalidPartition(f"part {k + 1} is empty")
        for i in part:
            if not 0 <= i < nv:
                raise InvalidPartition(f"vertex index {i + 1} out of range 1..{nv}")
            if i in seen:
                raise InvalidPartition(f"vertex {i + 1} appears in more than one part")
            seen.add(i)
        clean.append(part)
    if len(seen) != nv:
        missing = sorted(set(range(nv)) - seen)
        raise InvalidPartition(f"vertices {[i + 1 for i in missing]} are in no part")
    origin = (0,) * delta.ambient_dim
    polys = tuple(convex_hull([delta.vertices[i] for i in part] + [origin]) for part in clean)
    total = polys[0]
    for q in polys[1:]:
        total = minkowski_sum(total, q)
    if not is_reflexive(total):
        raise NotNef("the Minkowski sum of the parts is not reflexive")
    return NefPartition(delta, tuple(clean), polys, total)


@dataclass
class CayleyPair:
    """The Cayley polytope ``p_star`` and its dual ``p`` with face duality.

    Facet ``i`` of ``p`` corresponds to vertex ``i`` of ``p_star`` and facet
    ``j`` of ``p_star`` to vertex ``j`` of ``p``, so the dual of a face is
    read off its facet set.
    """

    p_star: Polytope
    p: Polytope
    n: int
    r: int
    nef: Optional[NefPartition] = None
    swapped_roles: bool = False
    _dual_cache: dict = field(default_factory=dict, repr=False)

    def dual(self, face: Face) -> Face:
        """``y -> y^vee``: face of ``p`` to the dual face of ``p_star``."""
        return self.p_star.face_of(face.facet_set) if face.dim >= 0 else self.p_star.full_face()

    def dual_of_star(self, face: Face) -> Face:
        return self.p.face_of(face.facet_set) if face.dim >= 0 else self.p.full_face()

    def swapped(self) -> "CayleyPair":
        """Exchange the roles of ``p`` and ``p_star`` (the dual nef partition)."""
        if "swapped" not in self._dual_cache:
            other = CayleyPair(self.p, self.p_star, self.n, self.r, self.nef,
                               not self.swapped_roles)
            other._dual_cache["swapped"] = self
            self._dual_cache["swapped"] = other
        return self._dual_cache["swapped"]


def cayley(np: NefPartition) -> CayleyPair:
    """Build ``P* = Conv(Delta_i x e_i)`` and the dual Cayley polytope ``P``."""
    n, r = np.n, np.r
    gens = []
    for i, q in enumerate(np.part_polytopes):
        e = tuple(int(j == i) for j in range(r))
        for v in q.vertices:
            gens.append(v + e)
    facets = cone_facets(gens)
    ext = _extreme_generators(gens, facets)
    star_vertices = [gens[i] for i in ext]
    p_vertices = []
    for w, _ in facets:
        s = sum(w[n:])
        if s <= 0 or any(x % s for x in w):
            raise NonLatticeDual(f"dual Cayley polytope has a non-integral vertex {w}/{s}")
        p_vertices.append(tuple(x // s for x in w))
    p_star = Polytope(star_vertices, [(w, 0) for w, _ in facets], n + r - 1)
    p = Polytope(p_vertices, [(u, 0) for u in star_vertices], n + r - 1)
    return CayleyPair(p_star, p, n, r, np)


def hypersurface_pair(delta: Polytope) -> CayleyPair:
    """The ``r = 1`` pair without the Cayley construction: ``P* = Delta``, ``P = Delta polar``."""
    return CayleyPair(delta, polar(delta), delta.ambient_dim, 1, None)


def dual_nef_parts(cp: CayleyPair) -> list[Polytope]:
    """``nabla_i``: slices of ``p`` at ``x_i = 1``, ``x_j = 0``, projected to M."""
    n, r = cp.n, cp.r
    out = []
    for i in range(r):
        e = tuple(int(j == i) for j in range(r))
        pts = [v[:n] for v in cp.p.vertices if v[n:] == e]
        out.append(convex_hull(pts))
    if cp.nef is not None and not cp.swapped_roles:
        total = out[0]
        for q in out[1:]:
            total = minkowski_sum(total, q)
        dpolar = polar(cp.nef.delta)
        assert total.vertex_set() == dpolar.vertex_set(), "sum of dual parts is not the polar"
        union = convex_hull([v for q in out for v in q.vertices])
        assert union.vertex_set() == polar(cp.nef.nabla_polar).vertex_set()
    return out


def is_indecomposable(np: NefPartition) -> bool:
    """No proper subset of parts sums to a polytope reflexive in its generated lattice."""
    r = np.r
    origin = (0,) * np.n
    for size in range(1, r):
        for subset in combinations(range(r), size):
            q = np.part_polytopes[subset[0]]
            for i in subset[1:]:
                q = minkowski_sum(q, np.part_polytopes[i])
            pts = [origin] + [x for x in q.lattice_points() if x != origin]
            local, _ = sublattice_restrict(pts)
            if is_reflexive(local):
                return False
    return True
