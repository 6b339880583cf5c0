"""Eulerian intervals of face lattices and their H, G and B polynomials.

The recursions only depend on chain statistics of an interval, so results
are memoized under the interval's flag f-vector and shared between all
isomorphic intervals (also across polytopes).  ``memo=False`` switches the
key to the concrete pair of faces, which is the reference mode used to check
that the flag-vector sharing never changes a result.
"""
from __future__ import annotations

import threading
from collections import defaultdict
from dataclasses import dataclass
from math import comb
from typing import Iterable

from .errors import NotComparable
from .polytope import Face, FaceLattice, _bits


class UniPoly:
    """Integer polynomial in one variable; ``coeffs[i]`` multiplies ``t**i``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def one(cls):
        return cls((1,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __eq__(self, other):
        if isinstance(other, int):
            other = UniPoly((other,))
        return isinstance(other, UniPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"UniPoly({list(self.coeffs)})"

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return UniPoly((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n))

    def __neg__(self):
        return UniPoly(-x for x in self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return UniPoly(x * other for x in self.coeffs)
        return UniPoly(_mul(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __call__(self, t):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def truncate_below(self, bound) -> "UniPoly":
        """Keep the terms ``a_k t^k`` with ``k < bound``."""
        return UniPoly(c for k, c in enumerate(self.coeffs) if k < bound)

    def reversed_in(self, degree: int) -> "UniPoly":
        """``t**degree * p(1/t)``."""
        out = [0] * (degree + 1)
        for k, c in enumerate(self.coeffs):
            out[degree - k] = c
        return UniPoly(out)

    def is_palindromic(self, degree: int) -> bool:
        return self.degree == degree and self == self.reversed_in(degree)


def _mul(a, b):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


class LaurentBiPoly:
    """Integer Laurent polynomial in ``u, v``: a map ``(a, b) -> coefficient``."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {k: c for k, c in (terms or {}).items() if c}

    @classmethod
    def one(cls):
        return cls({(0, 0): 1})

    @classmethod
    def monomial(cls, a: int, b: int, c: int = 1):
        return cls({(a, b): c})

    @classmethod
    def from_uni(cls, p: UniPoly, du: int, dv: int) -> "LaurentBiPoly":
        """Substitute ``t -> u**du * v**dv`` into ``p``."""
        return cls({(k * du, k * dv): c for k, c in enumerate(p.coeffs)})

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentBiPoly({(0, 0): other})
        return isinstance(other, LaurentBiPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return f"LaurentBiPoly({dict(sorted(self.terms.items()))})"

    def __getitem__(self, key):
        return self.terms.get(key, 0)

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return LaurentBiPoly(out)

    def __neg__(self):
        return LaurentBiPoly({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return LaurentBiPoly({k: c * other for k, c in self.terms.items()})
        return LaurentBiPoly(_bimul(self.terms, other.terms))

    __rmul__ = __mul__

    def shift(self, da: int, db: int) -> "LaurentBiPoly":
        return LaurentBiPoly({(a + da, b + db): c for (a, b), c in self.terms.items()})

    def invert_u(self) -> "LaurentBiPoly":
        return LaurentBiPoly({(-a, b): c for (a, b), c in self.terms.items()})

    def invert_both(self) -> "LaurentBiPoly":
        return LaurentBiPoly({(-a, -b): c for (a, b), c in self.terms.items()})

    def is_polynomial(self) -> bool:
        return all(a >= 0 and b >= 0 for a, b in self.terms)

    def degree_v(self) -> int:
        return max((b for _, b in self.terms), default=-1)

    def degree_u(self) -> int:
        return max((a for a, _ in self.terms), default=-1)

    def min_exponents(self) -> tuple[int, int]:
        return (min((a for a, _ in self.terms), default=0),
                min((b for _, b in self.terms), default=0))

    def total_degree(self) -> int:
        return max((a + b for a, b in self.terms), default=-1)


def _bimul(x: dict, y: dict) -> dict:
    out = defaultdict(int)
    for (a1, b1), c1 in x.items():
        for (a2, b2), c2 in y.items():
            out[(a1 + a2, b1 + b2)] += c1 * c2
    return out


# ---------------------------------------------------------------------------
# intervals


@dataclass
class Interval:
    lattice: FaceLattice
    bottom: int
    top: int
    rank: int
    elements: list[int]
    flag_vector: tuple

    @property
    def bottom_face(self) -> Face:
        return self.lattice.faces[self.bottom]

    @property
    def top_face(self) -> Face:
        return self.lattice.faces[self.top]


def interval(lattice: FaceLattice, x, y) -> Interval:
    """The subposet ``[x, y]``; ``x`` and ``y`` are faces or face indices."""
    i = x if isinstance(x, int) else lattice.index[x.vertex_set]
    j = y if isinstance(y, int) else lattice.index[y.vertex_set]
    if not lattice.leq(i, j):
        raise NotComparable(f"face {i} is not contained in face {j}")
    eng = engine_for(lattice)
    return Interval(lattice, i, j, lattice.faces[j].dim - lattice.faces[i].dim,
                    lattice.between(i, j), eng.flag_key(i, j))


def mobius(lattice: FaceLattice, x: int, y: int) -> int:
    """Möbius function by the defining recursion (independent of the engine)."""
    elems = sorted(lattice.between(x, y), key=lambda z: lattice.faces[z].dim)
    mu = {}
    for z in elems:
        if z == x:
            mu[z] = 1
        else:
            mu[z] = -sum(mu[w] for w in elems if w != z and w in mu and lattice.leq(w, z))
    return mu[y]


def is_eulerian_interval(lattice: FaceLattice, x: int, y: int) -> bool:
    d = lattice.faces[y].dim - lattice.faces[x].dim
    return mobius(lattice, x, y) == (-1) ** d


# ---------------------------------------------------------------------------
# H, G, B


_SHARED: dict = {}
_SHARED_LOCK = threading.Lock()

_T_MINUS_1_POWERS: list = [(1,)]


def _t_minus_1_pow(k: int):
    while len(_T_MINUS_1_POWERS) <= k:
        _T_MINUS_1_POWERS.append(tuple(_mul(_T_MINUS_1_POWERS[-1], (-1, 1))))
    return _T_MINUS_1_POWERS[k]


class PosetEngine:
    """Memoized H/G/B computations over the intervals of one face lattice."""

    def __init__(self, lattice: FaceLattice, memo: bool = True):
        self.lattice = lattice
        self.memo = memo
        self._flags: dict = {}
        self._local: dict = {}
        self._lock = threading.Lock()
        self.dims = [f.dim for f in lattice.faces]

    # keys ----------------------------------------------------------------

    def _flags_from(self, x: int) -> None:
        lat = self.lattice
        dims = self.dims
        above = sorted(_bits(lat.up[x]), key=lambda z: dims[z])
        cnt = {}
        for z in above:
            if z == x:
                cnt[z] = {0: 1}
                continue
            acc = defaultdict(int)
            acc[0] = 1
            for w in _bits(lat.up[x] & lat.down[z]):
                if w == x or w == z:
                    continue
                bit = 1 << (dims[w] - dims[x])
                for s, c in cnt[w].items():
                    acc[s | bit] += c
            cnt[z] = acc
        with self._lock:
            for z in above:
                self._flags[(x, z)] = (dims[z] - dims[x], tuple(sorted(cnt[z].items())))

    def flag_vector(self, x: int, y: int) -> tuple:
        key = self._flags.get((x, y))
        if key is None:
            self._flags_from(x)
            key = self._flags[(x, y)]
        return key

    def flag_key(self, x: int, y: int):
        if self.memo:
            return self.flag_vector(x, y)
        return (x, y)

    def _table(self):
        return _SHARED if self.memo else self._local

    def _get(self, kind, x, y):
        key = (kind, self.flag_key(x, y))
        return key, self._table().get(key)

    def _put(self, key, value):
        table = self._table()
        if self.memo:
            with _SHARED_LOCK:
                return table.setdefault(key, value)
        return table.setdefault(key, value)

    # polynomials ---------------------------------------------------------

    def rank(self, x: int, y: int) -> int:
        return self.dims[y] - self.dims[x]

    def h(self, x: int, y: int) -> tuple:
        key, val = self._get("H", x, y)
        if val is not None:
            return val
        d = self.rank(x, y)
        if d == 0:
            return self._put(key, (1,))
        lat = self.lattice
        acc = [0] * d
        for w in _bits(lat.up[x] & lat.down[y]):
            if w == x:
                continue
            term = _mul(_t_minus_1_pow(self.dims[w] - self.dims[x] - 1), self.g(w, y))
            for i, c in enumerate(term):
                acc[i] += c
        return self._put(key, tuple(UniPoly(acc).coeffs))

    def g(self, x: int, y: int) -> tuple:
        key, val = self._get("G", x, y)
        if val is not None:
            return val
        d = self.rank(x, y)
        if d == 0:
            return self._put(key, (1,))
        hh = self.h(x, y)
        one_minus_t_h = _mul((1, -1), hh)
        out = UniPoly(c for k, c in enumerate(one_minus_t_h) if 2 * k < d)
        return self._put(key, out.coeffs)

    def b(self, x: int, y: int) -> dict:
        key, val = self._get("B", x, y)
        if val is not None:
            return val
        d = self.rank(x, y)
        if d == 0:
            return self._put(key, {(0, 0): 1})
        acc = defaultdict(int)
        for k, c in enumerate(self.g(x, y)):
            acc[(k, k)] += c
        lat = self.lattice
        for z in _bits(lat.up[x] & lat.down[y]):
            if z == y:
                continue
            rz = self.dims[z] - self.dims[x]
            gz = self.g(z, y)
            bz = self.b(x, z)
            # B_[x,z](u,v) * u^(d - rz) * G_[z,y](v/u)
            for k, gc in enumerate(gz):
                if not gc:
                    continue
                du = d - rz - k
                for (a, bb), c in bz.items():
                    acc[(a + du, bb + k)] -= c * gc
        return self._put(key, {k: c for k, c in acc.items() if c})


_ENGINES: dict = {}


def engine_for(lattice: FaceLattice, memo: bool = True) -> PosetEngine:
    key = (id(lattice), memo)
    eng = _ENGINES.get(key)
    if eng is None or eng.lattice is not lattice:
        eng = PosetEngine(lattice, memo)
        _ENGINES[key] = eng
    return eng


def clear_shared_memo() -> None:
    with _SHARED_LOCK:
        _SHARED.clear()


def h_poly(i: Interval, memo: bool = True) -> UniPoly:
    return UniPoly(engine_for(i.lattice, memo).h(i.bottom, i.top))


def g_poly(i: Interval, memo: bool = True) -> UniPoly:
    return UniPoly(engine_for(i.lattice, memo).g(i.bottom, i.top))


def b_poly(i: Interval, memo: bool = True) -> LaurentBiPoly:
    return LaurentBiPoly(engine_for(i.lattice, memo).b(i.bottom, i.top))


def eval_b_at(i: Interval, memo: bool = True) -> LaurentBiPoly:
    """``B_[x,y](1/u, v)``."""
    return b_poly(i, memo).invert_u()


def defining_identity_holds(i: Interval, memo: bool = True) -> bool:
    """Recheck the convolution that defines B on the interval."""
    eng = engine_for(i.lattice, memo)
    x, y = i.bottom, i.top
    d = i.rank
    lhs = LaurentBiPoly()
    for z in i.elements:
        rz = eng.rank(x, z)
        gz = UniPoly(eng.g(z, y))
        term = LaurentBiPoly(eng.b(x, z)) * LaurentBiPoly.from_uni(gz, -1, 1)
        lhs = lhs + term.shift(d - rz, 0)
    return lhs == LaurentBiPoly.from_uni(UniPoly(eng.g(x, y)), 1, 1)


def polygon_b(k: int) -> LaurentBiPoly:
    """Closed form of B for the face poset of a k-gon."""
    # 1 + [k - (k-3) v](u^2 - u) - u^3
    return LaurentBiPoly({(0, 0): 1, (2, 0): k, (1, 0): -k, (2, 1): -(k - 3),
                          (1, 1): k - 3, (3, 0): -1})


def low_rank_b(d: int) -> LaurentBiPoly:
    """``(1 - u)**d``."""
    return LaurentBiPoly({(i, 0): (-1) ** i * comb(d, i) for i in range(d + 1)})
