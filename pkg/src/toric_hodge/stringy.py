"""Stringy E-function of a Cayley cone and closed-form Hodge numbers.

Closed forms are returned as :class:`TermBreakdown` objects whose terms are
kept separately, in the order they are usually printed, so that the
individual sums can be compared and rendered as ``8 - 7 - 0 + ... = 1``.
"""
from __future__ import annotations

from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil
from typing import Optional

from .ehrhart import s_poly
from .errors import (
    AmpleConditionViolated,
    Decomposable,
    DimensionMismatch,
    MalformedE,
    NotPolynomial,
    NotReflexive,
    RelationViolated,
    WrongDimension,
)
from .exactlin import affine_chart, dot
from .nef import CayleyPair, NefPartition, cayley, dual_nef_parts, hypersurface_pair, is_indecomposable
from .polytope import Face, Polytope, _bits, convex_hull, is_reflexive, minkowski_sum, polar
from .poset import LaurentBiPoly, engine_for


@dataclass(frozen=True)
class Term:
    name: str
    sign: int
    amount: int

    @property
    def value(self) -> int:
        return self.sign * self.amount


@dataclass
class TermBreakdown:
    terms: list[Term]

    @property
    def total(self) -> int:
        return sum(t.value for t in self.terms)

    @property
    def values(self) -> tuple[int, ...]:
        return tuple(t.value for t in self.terms)

    @property
    def amounts(self) -> tuple[int, ...]:
        return tuple(t.amount for t in self.terms)

    def render(self) -> str:
        parts = []
        for k, t in enumerate(self.terms):
            amount = str(t.amount) if t.amount >= 0 else f"({t.amount})"
            if k == 0:
                parts.append(amount if t.sign > 0 else f"-{amount}")
            else:
                parts.append(("+ " if t.sign > 0 else "- ") + amount)
        return " ".join(parts) + f" = {self.total}"

    def as_json(self) -> list[dict]:
        return [{"name": t.name, "value": t.value} for t in self.terms]


@dataclass
class HodgeDiamond:
    n_minus_r: int
    h: list[list[int]]
    e: LaurentBiPoly = field(repr=False)
    diagnostics: list[str] = field(default_factory=list)

    def __getitem__(self, pq):
        p, q = pq
        return self.h[p][q]

    @property
    def h11(self) -> int:
        return self.h[1][1]

    @property
    def h21(self) -> int:
        return self.h[2][1]

    def is_symmetric(self) -> bool:
        d = self.n_minus_r
        return all(self.h[p][q] == self.h[q][p] == self.h[d - p][d - q]
                   for p in range(d + 1) for q in range(d + 1))

    def pretty(self) -> str:
        d = self.n_minus_r
        rows = []
        width = max(len(str(x)) for row in self.h for x in row) + 2
        for s in range(2 * d, -1, -1):
            entries = [self.h[p][s - p] for p in range(d, -1, -1) if 0 <= s - p <= d]
            line = "".join(str(x).center(width) for x in entries)
            rows.append(line.center(width * (d + 1)).rstrip())
        return "\n".join(rows)


# ---------------------------------------------------------------------------
# per-face counts


class _Counts:
    """Lattice point counts of the faces of a polytope, by face."""

    def __init__(self, p: Polytope):
        self.p = p

    def l(self, f: Face) -> int:
        return self.p.count_points(f, 1)

    def ls(self, f: Face, k: int = 1) -> int:
        return self.p.count_interior(f, k)


def _require(cp: CayleyPair, n: int, r: int):
    if cp.n != n or cp.r != r:
        raise WrongDimension(f"formula needs n={n}, r={r}; got n={cp.n}, r={cp.r}")


# ---------------------------------------------------------------------------
# E-function


def e_poly(cp: CayleyPair, memo: bool = True, threads: int = 1,
           check: bool = True) -> LaurentBiPoly:
    """Generating function of stringy Hodge numbers, summed over all pairs x <= y.

    The sum runs over comparable faces of ``cp.p`` including the empty face
    and ``cp.p`` itself.  With ``check`` the result must be a polynomial of
    total degree ``2(n - r)``.
    """
    lat = cp.p.face_lattice()
    eng = engine_for(lat, memo)
    faces = lat.faces
    s_dual = []
    s_self = []
    for i, f in enumerate(faces):
        yv = cp.dual(f) if i != lat.top else None
        s_dual.append(s_poly(cp.p_star, yv).coeffs if yv is not None and yv.dim >= 0 else (1,))
        s_self.append(s_poly(cp.p, f).coeffs if f.dim >= 0 else (1,))

    def row(x: int) -> dict:
        inner = defaultdict(int)
        for y in _bits(lat.up[x]):
            b = eng.b(x, y)
            sy = s_dual[y]
            shift = 1 + faces[y].dim
            for (a, bb), c in b.items():
                # B(1/u, v) * u^(1 + dim y) * S_{y^vee}(uv)
                a0 = shift - a
                for j, sc in enumerate(sy):
                    if sc:
                        inner[(a0 + j, bb + j)] += c * sc
        sign = -1 if faces[x].dim % 2 == 0 else 1  # (-1)^(1 + dim x)
        out = defaultdict(int)
        for i, sc in enumerate(s_self[x]):
            if not sc:
                continue
            for (a, bb), c in inner.items():
                if c:
                    out[(a - i, bb + i)] += sign * sc * c
        return out

    order = list(range(len(faces)))
    if threads and threads > 1:
        # fill the shared memo first so worker threads only read it
        for x in order:
            for y in _bits(lat.up[x]):
                eng.b(x, y)
        with ThreadPoolExecutor(max_workers=threads) as ex:
            rows = list(ex.map(row, order))
    else:
        rows = [row(x) for x in order]
    total = defaultdict(int)
    for part in rows:
        for k, c in part.items():
            total[k] += c
    r = cp.r
    e = LaurentBiPoly({(a - r, b - r): c for (a, b), c in total.items()})
    if check:
        if not e.is_polynomial():
            raise NotPolynomial(f"negative exponents survive: {e.min_exponents()}")
        want = 2 * (cp.n - cp.r)
        if e.total_degree() != want:
            raise NotPolynomial(f"total degree {e.total_degree()} != {want}")
    return e


def pair_term(cp: CayleyPair, x: int, y: int, memo: bool = True) -> LaurentBiPoly:
    """The (x, y) summand of the E-function before division by ``(uv)^r``."""
    lat = cp.p.face_lattice()
    eng = engine_for(lat, memo)
    fx, fy = lat.faces[x], lat.faces[y]
    sx = s_poly(cp.p, fx) if fx.dim >= 0 else s_poly(cp.p, None)
    sy = s_poly(cp.p_star, cp.dual(fy)) if y != lat.top else s_poly(cp.p_star, None)
    term = LaurentBiPoly.from_uni(sx, -1, 1) * LaurentBiPoly.from_uni(sy, 1, 1)
    term = term * LaurentBiPoly(eng.b(x, y)).invert_u()
    return term.shift(1 + fy.dim, 0) * (-1 if fx.dim % 2 == 0 else 1)


def hodge_from_e(e: LaurentBiPoly, n: int, r: int) -> HodgeDiamond:
    """Read ``h^{p,q} = (-1)^(p+q) [u^p v^q] E``."""
    d = n - r
    for (a, b) in e.terms:
        if not (0 <= a <= d and 0 <= b <= d):
            raise MalformedE(f"monomial u^{a} v^{b} outside [0, {d}]^2")
    h = [[(-1) ** (p + q) * e[(p, q)] for q in range(d + 1)] for p in range(d + 1)]
    negative = [f"h{p}{q} = {h[p][q]}" for p in range(d + 1) for q in range(d + 1) if h[p][q] < 0]
    if negative:
        raise MalformedE("negative Hodge numbers: " + ", ".join(negative))
    notes = []
    if h[0][0] != 1:
        # decomposable partitions give disconnected varieties
        notes.append(f"h00 = {h[0][0]}, the variety is not connected")
    return HodgeDiamond(d, h, e, notes)


def hodge_diamond(cp: CayleyPair, memo: bool = True, threads: int = 1) -> HodgeDiamond:
    return hodge_from_e(e_poly(cp, memo=memo, threads=threads), cp.n, cp.r)


# ---------------------------------------------------------------------------
# hypersurfaces


def h11_hypersurface(delta: Polytope) -> TermBreakdown:
    """h^{1,1} of a generic anticanonical hypersurface for a 4-dimensional reflexive polytope."""
    if delta.ambient_dim != 4 or not delta.is_full_dimensional:
        raise WrongDimension(f"need a 4-dimensional polytope, got {delta.affine_dim}")
    if not is_reflexive(delta):
        raise NotReflexive("the polytope is not reflexive")
    cp = hypersurface_pair(delta)
    return _h11_hyper_terms(cp, delta.count_points())


def _h11_hyper_terms(cp: CayleyPair, l_star_total: int) -> TermBreakdown:
    p, ps = _Counts(cp.p), _Counts(cp.p_star)
    lat = cp.p.face_lattice()
    s0 = sum(ps.ls(cp.dual(y)) for y in lat.of_dim(0))
    s1 = sum(p.ls(y) * ps.ls(cp.dual(y)) for y in lat.of_dim(1))
    return TermBreakdown([
        Term("l(P*)", 1, l_star_total),
        Term("const", -1, 5),
        Term("sum_{dim y=0} l*(y^)", -1, s0),
        Term("sum_{dim y=1} l*(y) l*(y^)", 1, s1),
    ])


def h11_hypersurface_cayley(cp: CayleyPair) -> TermBreakdown:
    """Same formula evaluated on an ``r = 1`` Cayley pair."""
    _require(cp, 4, 1)
    return _h11_hyper_terms(cp, cp.p_star.count_points())


# ---------------------------------------------------------------------------
# complete intersections, n = 5, r = 2


def h11_ci_generic(cp: CayleyPair) -> TermBreakdown:
    """h^{1,1} of a bipartite complete intersection threefold, any nef partition."""
    _require(cp, 5, 2)
    p, ps = _Counts(cp.p), _Counts(cp.p_star)
    lat = cp.p.face_lattice()
    dual = cp.dual
    t0 = sum(ps.ls(dual(y), 2) - 6 * ps.ls(dual(y)) for y in lat.of_dim(0))
    t1 = sum(ps.ls(dual(y)) for y in lat.of_dim(1))
    t2 = sum(p.ls(y) * (ps.ls(dual(y), 2) - 5 * ps.ls(dual(y))) for y in lat.of_dim(1))
    t3 = sum((p.l(y) - p.ls(y) - 3) * ps.ls(dual(y)) for y in lat.of_dim(2))
    t4 = _flag_sum(cp)
    t5 = sum((p.ls(y, 2) - 4 * p.ls(y)) * ps.ls(dual(y)) for y in lat.of_dim(3))
    return TermBreakdown([
        Term("l(P*)", 1, cp.p_star.count_points()),
        Term("const", -1, 7),
        Term("sum_{dim y=0} [l*(2y^) - 6 l*(y^)]", -1, t0),
        Term("sum_{dim y=1} l*(y^)", 1, t1),
        Term("sum_{dim y=1} l*(y) [l*(2y^) - 5 l*(y^)]", 1, t2),
        Term("sum_{dim y=2} [l(y) - l*(y) - 3] l*(y^)", -1, t3),
        Term("sum_{x<y, dim x=2, dim y=3} l*(x) l*(y^)", -1, t4),
        Term("sum_{dim y=3} [l*(2y) - 4 l*(y)] l*(y^)", 1, t5),
    ])


def _flag_sum(cp: CayleyPair) -> int:
    p, ps = _Counts(cp.p), _Counts(cp.p_star)
    lat = cp.p.face_lattice()
    total = 0
    for yi in lat.by_dim[3]:
        y = lat.faces[yi]
        lsy = ps.ls(cp.dual(y))
        if not lsy:
            continue
        for xi in lat.by_dim[2]:
            if lat.leq(xi, yi):
                total += p.ls(lat.faces[xi]) * lsy
    return total


def h11_ci_indecomposable(cp: CayleyPair, check: bool = True) -> TermBreakdown:
    """h^{1,1} for an indecomposable nef partition; eight terms in print order."""
    _require(cp, 5, 2)
    if check and cp.nef is not None and not is_indecomposable(cp.nef):
        raise Decomposable("the nef partition is decomposable")
    p, ps = _Counts(cp.p), _Counts(cp.p_star)
    lat = cp.p.face_lattice()
    dual = cp.dual
    t0 = sum(ps.ls(dual(y), 2) for y in lat.of_dim(0))
    t1 = sum(ps.ls(dual(y)) for y in lat.of_dim(1))
    t2 = sum(p.ls(y) * ps.ls(dual(y), 2) for y in lat.of_dim(1))
    t3 = _flag_sum(cp)
    t4 = sum(p.ls(y, 2) * ps.ls(dual(y)) for y in lat.of_dim(2))
    t5 = sum(p.ls(y, 2) * ps.ls(dual(y)) for y in lat.of_dim(3))
    return TermBreakdown([
        Term("l(P*)", 1, cp.p_star.count_points()),
        Term("const", -1, 7),
        Term("sum_{dim y=0} l*(2y^)", -1, t0),
        Term("sum_{dim y=1} l*(y^)", 1, t1),
        Term("sum_{dim y=1} l*(y) l*(2y^)", 1, t2),
        Term("sum_{x<y, dim x=2, dim y=3} l*(x) l*(y^)", -1, t3),
        Term("sum_{dim y=2} l*(2y) l*(y^)", -1, t4),
        Term("sum_{dim y=3} l*(2y) l*(y^)", 1, t5),
    ])


def h21_ci(cp: CayleyPair, mode: str = "indecomposable") -> TermBreakdown:
    """h^{2,1}: the h^{1,1} formula with the roles of P and P* exchanged."""
    if mode == "generic":
        return h11_ci_generic(cp.swapped())
    if mode == "indecomposable":
        return h11_ci_indecomposable(cp.swapped())
    raise ValueError(f"unknown mode {mode!r}")


def auxiliary_hodge(cp: CayleyPair) -> tuple[TermBreakdown, TermBreakdown, TermBreakdown]:
    """Closed forms for h^{3,3}, h^{2,3} and h^{3,2}."""
    _require(cp, 5, 2)
    p, ps = _Counts(cp.p), _Counts(cp.p_star)
    lat = cp.p.face_lattice()
    dual = cp.dual
    h33 = TermBreakdown([
        Term("const", 1, 1),
        Term("sum_{dim y=1} l*(y) l*(y^)", 1, sum(p.ls(y) * ps.ls(dual(y)) for y in lat.of_dim(1))),
        Term("sum_{dim y=0} l*(y^)", -1, sum(ps.ls(dual(y)) for y in lat.of_dim(0))),
    ])
    h23 = TermBreakdown([
        Term("sum_{dim y=2} l*(y) l*(y^)", 1, sum(p.ls(y) * ps.ls(dual(y)) for y in lat.of_dim(2))),
    ])
    h32 = TermBreakdown([
        Term("sum_{dim y=2} [l(y) + 3 l*(y) - 3 - l*(2y)] l*(y^)", -1,
             sum((p.l(y) + 3 * p.ls(y) - 3 - p.ls(y, 2)) * ps.ls(dual(y))
                 for y in lat.of_dim(2))),
    ])
    return h33, h23, h32


@dataclass
class Relation:
    name: str
    lhs: int
    rhs: int

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs


def consistency_relations(cp: CayleyPair, raise_on_failure: bool = True) -> list[Relation]:
    """Relations that hold for indecomposable partitions, plus face-wise checks."""
    _require(cp, 5, 2)
    if cp.nef is not None and not is_indecomposable(cp.nef):
        raise Decomposable("relations only hold for indecomposable nef partitions")
    p, ps = _Counts(cp.p), _Counts(cp.p_star)
    lat = cp.p.face_lattice()
    dual = cp.dual
    rels = [
        Relation("sum_1 l*(y)l*(y^) = sum_0 l*(y^)",
                 sum(p.ls(y) * ps.ls(dual(y)) for y in lat.of_dim(1)),
                 sum(ps.ls(dual(y)) for y in lat.of_dim(0))),
        Relation("sum_2 l*(y)l*(y^) = 0",
                 sum(p.ls(y) * ps.ls(dual(y)) for y in lat.of_dim(2)), 0),
        Relation("sum_2 l*(2y)l*(y^) = sum_2 [l(y)-3]l*(y^)",
                 sum(p.ls(y, 2) * ps.ls(dual(y)) for y in lat.of_dim(2)),
                 sum((p.l(y) - 3) * ps.ls(dual(y)) for y in lat.of_dim(2))),
    ]
    failures = [r for r in rels if not r.holds]
    if failures and raise_on_failure:
        raise RelationViolated(f"relation failed: {failures[0].name} "
                               f"({failures[0].lhs} != {failures[0].rhs})")
    for y in lat.faces:
        if y.dim < 0 or y.vertex_set == lat.faces[lat.top].vertex_set:
            continue
        prod = p.ls(y) * ps.ls(dual(y))
        if prod and raise_on_failure:
            raise RelationViolated(f"l*(y) l*(y^) = {prod} != 0", face=y)
        if y.dim == 2 and p.ls(y) == 0 and ps.ls(dual(y)) != 0:
            if p.ls(y, 2) != p.l(y) - 3 and raise_on_failure:
                raise RelationViolated("Pick identity fails on a 2-face", face=y)
    return rels


# ---------------------------------------------------------------------------
# ample case


def minkowski_summand_factor(a: Polytope, b: Polytope) -> Optional[int]:
    """Smallest tested ``mu`` with ``mu * b = a + D`` for a lattice polytope D, else None."""
    if a.ambient_dim != b.ambient_dim:
        raise DimensionMismatch(f"ambient dimensions {a.ambient_dim} and {b.ambient_dim} differ")
    if len(a.vertices) == 1:
        return 1
    if not b.is_full_dimensional:
        if b.affine_dim == 0:
            return None
        chart = affine_chart(b.vertices)
        a0 = a.vertices[0]
        try:
            la = [chart.coords(tuple(x - y + o for x, y, o in zip(v, a0, chart.origin)))
                  for v in a.vertices]
        except ValueError:
            return None
        lb = [chart.coords(v) for v in b.vertices]
        return minkowski_summand_factor(convex_hull(la), convex_hull(lb))
    image = {}
    for i, v in enumerate(b.vertices):
        w = [0] * b.ambient_dim
        for j, (nrm, _) in enumerate(b.facets):
            if b.facet_masks[j] >> i & 1:
                w = [x + y for x, y in zip(w, nrm)]
        vals = [dot(w, u) for u in a.vertices]
        best = min(vals)
        winners = [u for u, val in zip(a.vertices, vals) if val == best]
        if len(winners) != 1:
            return None
        image[v] = winners[0]
    ratio = Fraction(0)
    for e in b.face_lattice().of_dim(1):
        v1, v2 = b.face_vertices(e)
        db = [y - x for x, y in zip(v1, v2)]
        da = [y - x for x, y in zip(image[v1], image[v2])]
        k = next(i for i, x in enumerate(db) if x)
        lam = Fraction(da[k], db[k])
        if lam < 0 or any(Fraction(x) != lam * y for x, y in zip(da, db)):
            return None
        ratio = max(ratio, lam)
    mu = max(1, ceil(ratio))
    rest = convex_hull([tuple(mu * x - y for x, y in zip(v, image[v])) for v in b.vertices])
    total = minkowski_sum(a, rest)
    if total.vertex_set() != {tuple(mu * x for x in v) for v in b.vertices}:
        return None
    return mu


def is_minkowski_summand(a: Polytope, b: Polytope) -> bool:
    """Whether ``a`` is a Minkowski summand of ``b`` (``mu b = a + D``)."""
    return minkowski_summand_factor(a, b) is not None


def _dilate_sum(polys, coeffs) -> Polytope:
    pts = [()]
    for q, c in zip(polys, coeffs):
        pts = [p + (tuple(c * x for x in v),) for p in pts for v in q.vertices]
    return convex_hull([tuple(sum(z) for z in zip(*p)) for p in pts])


def ample_case_hodge(np: NefPartition, cp: Optional[CayleyPair] = None
                     ) -> tuple[TermBreakdown, TermBreakdown]:
    """h^{1,1} and h^{2,1} when the dual-partition divisors are ample."""
    if np.r != 2:
        raise AmpleConditionViolated("the ample-case formulas need a two-part nef partition")
    if np.n != 5:
        raise WrongDimension(f"need a 5-dimensional polytope, got {np.n}")
    cp = cayley(np) if cp is None else cp
    delta = np.delta
    dpol = polar(delta)
    nablas = dual_nef_parts(cp)
    for q in nablas:
        if not is_minkowski_summand(dpol, q):
            raise AmpleConditionViolated("polar polytope is not a Minkowski summand of a dual part")
    lat = delta.face_lattice()

    def split(theta: Face):
        """theta* and its summands theta_i* (as faces of the nabla_i)."""
        star = dpol.face_of(theta.facet_set)
        w = [sum(z) for z in zip(*delta.face_vertices(theta))]
        pieces = []
        for q in nablas:
            vals = [dot(w, u) for u in q.vertices]
            best = min(vals)
            mask = sum(1 << i for i, val in enumerate(vals) if val == best)
            f = q.face_of(mask)
            if f.dim != star.dim:
                raise AmpleConditionViolated("dual face does not split into faces of equal dimension")
            pieces.append(f)
        summed = _dilate_sum([convex_hull(q.face_vertices(f)) for q, f in zip(nablas, pieces)],
                             [1, 1])
        if summed.vertex_set() != set(dpol.face_vertices(star)):
            raise AmpleConditionViolated("dual face is not the Minkowski sum of its pieces")
        return star, pieces

    def bracket(theta: Face) -> int:
        star, pieces = split(theta)
        return dpol.count_interior(star) - sum(q.count_interior(f) for q, f in zip(nablas, pieces))

    # run the decomposition check on every face up front
    for d in range(0, 5):
        for theta in lat.of_dim(d):
            split(theta)

    h11 = TermBreakdown([
        Term("l(Delta)", 1, delta.count_points()),
        Term("const", -1, 6),
        Term("sum_{dim t=4} l*(t)", -1, sum(delta.count_interior(t) for t in lat.of_dim(4))),
        Term("sum_{dim t=3} l*(t)", -1, sum(delta.count_interior(t) for t in lat.of_dim(3))),
        Term("sum_{dim t=2} l*(t) [l*(t*) - l*(t1*) - l*(t2*)]", 1,
             sum(delta.count_interior(t) * bracket(t) for t in lat.of_dim(2)
                 if delta.count_interior(t))),
    ])
    n1, n2 = nablas
    big = (_dilate_sum(nablas, [2, 1]).count_interior() - n1.count_interior(k=2)
           + _dilate_sum(nablas, [1, 2]).count_interior() - n2.count_interior(k=2))
    h21 = TermBreakdown([
        Term("l*(2N1+N2) - l*(2N1) + l*(N1+2N2) - l*(2N2)", 1, big),
        Term("const", -1, 7),
        Term("sum_{dim t=0} [l*(t*) - l*(t1*) - l*(t2*)]", -1,
             sum(bracket(t) for t in lat.of_dim(0))),
        Term("sum_{dim t=1} l*(t) [l*(t*) - l*(t1*) - l*(t2*)]", 1,
             sum(delta.count_interior(t) * bracket(t) for t in lat.of_dim(1)
                 if delta.count_interior(t))),
    ])
    return h11, h21
