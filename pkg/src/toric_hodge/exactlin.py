"""Exact integer and rational linear algebra.

Vectors are tuples of Python ints and matrices are lists of such rows, so
everything is arbitrary precision and hashable.  Rationals are
:class:`fractions.Fraction`, which is always stored reduced with a positive
denominator.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

from .errors import ZeroVector

IntVector = tuple
IntMatrix = list


def dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def vec_gcd(v: Sequence[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, x)
    return g


def primitive(v: Sequence[int]) -> IntVector:
    """Divide ``v`` by the gcd of its entries, keeping its direction."""
    g = vec_gcd(v)
    if g == 0:
        raise ZeroVector(f"cannot normalize the zero vector {tuple(v)}")
    return tuple(x // g for x in v)


def identity(n: int) -> IntMatrix:
    return [tuple(int(i == j) for j in range(n)) for i in range(n)]


def transpose(m: Sequence[Sequence[int]]) -> IntMatrix:
    return [tuple(col) for col in zip(*m)]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> IntMatrix:
    bt = transpose(b)
    return [tuple(dot(row, col) for col in bt) for row in a]


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    # returns (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        return -a, -s0, -t0
    return a, s0, t0


def hermite_form(m: Sequence[Sequence[int]]) -> tuple[IntMatrix, IntMatrix]:
    """Row Hermite normal form.

    Returns ``(H, U)`` with ``U`` unimodular and ``U @ m == H``.  ``H`` is in
    upper echelon form with positive pivots, entries above each pivot reduced
    into ``[0, pivot)``, and zero rows at the bottom.
    """
    rows = len(m)
    cols = len(m[0]) if rows else 0
    h = [list(r) for r in m]
    u = [list(r) for r in identity(rows)]
    pr = 0
    for c in range(cols):
        if pr == rows:
            break
        for i in range(pr + 1, rows):
            b = h[i][c]
            if b == 0:
                continue
            a = h[pr][c]
            g, s, t = _xgcd(a, b)
            p, q = -b // g, a // g
            for mat in (h, u):
                rp, ri = mat[pr], mat[i]
                mat[pr] = [s * x + t * y for x, y in zip(rp, ri)]
                mat[i] = [p * x + q * y for x, y in zip(rp, ri)]
        piv = h[pr][c]
        if piv == 0:
            continue
        if piv < 0:
            h[pr] = [-x for x in h[pr]]
            u[pr] = [-x for x in u[pr]]
            piv = -piv
        for i in range(pr):
            q = h[i][c] // piv
            if q:
                h[i] = [x - q * y for x, y in zip(h[i], h[pr])]
                u[i] = [x - q * y for x, y in zip(u[i], u[pr])]
        pr += 1
    return [tuple(r) for r in h], [tuple(r) for r in u]


def rank(m: Sequence[Sequence[int]]) -> int:
    if not m:
        return 0
    h, _ = hermite_form(m)
    return sum(1 for r in h if any(r))


def det(m: Sequence[Sequence[int]]) -> int:
    """Exact determinant of a square integer matrix (fraction-free Bareiss)."""
    n = len(m)
    a = [list(r) for r in m]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1] if n else 1


def solve_rational(a: Sequence[Sequence[int]], b: Sequence[int]) -> Optional[list[Fraction]]:
    """Return one exact solution of ``a x = b``, or None if inconsistent.

    Free variables are set to zero.
    """
    rows = len(a)
    cols = len(a[0]) if rows else 0
    aug = [[Fraction(x) for x in a[i]] + [Fraction(b[i])] for i in range(rows)]
    pivots = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if aug[i][c] != 0), None)
        if p is None:
            continue
        aug[r], aug[p] = aug[p], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(rows):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    for i in range(r, rows):
        if aug[i][cols] != 0:
            return None
    x = [Fraction(0)] * cols
    for i, c in enumerate(pivots):
        x[c] = aug[i][cols]
    return x


def integer_kernel(m: Sequence[Sequence[int]], ncols: Optional[int] = None) -> IntMatrix:
    """Basis (as rows) of the lattice ``{x in Z^n : m x = 0}``."""
    if not m:
        return identity(ncols)
    h, u = hermite_form(transpose(m))
    return [u[i] for i in range(len(h)) if not any(h[i])]


def saturated_basis(vectors: Sequence[Sequence[int]], dim: int) -> IntMatrix:
    """Basis of ``span(vectors) ∩ Z^dim``, the saturation of what they generate."""
    vectors = [v for v in vectors if any(v)]
    if not vectors:
        return []
    ortho = integer_kernel(vectors, dim)
    if not ortho:
        return identity(dim)
    basis = integer_kernel(ortho, dim)
    return lll_reduce(basis)


def generated_basis(vectors: Sequence[Sequence[int]]) -> IntMatrix:
    """Basis of the lattice generated by ``vectors`` (nonzero HNF rows)."""
    vectors = [tuple(v) for v in vectors]
    if not vectors:
        return []
    h, _ = hermite_form(vectors)
    return [r for r in h if any(r)]


def lll_reduce(basis: Sequence[Sequence[int]], delta: Fraction = Fraction(3, 4)) -> IntMatrix:
    """LLL reduction with exact rationals.

    Only used to keep coordinate systems of faces small; the lattice is
    unchanged.
    """
    b = [list(v) for v in basis]
    n = len(b)
    if n <= 1:
        return [tuple(v) for v in b]

    def gram_schmidt():
        bstar, mu = [], [[Fraction(0)] * n for _ in range(n)]
        norms = []
        for i in range(n):
            v = [Fraction(x) for x in b[i]]
            for j in range(i):
                mu[i][j] = sum(x * y for x, y in zip(b[i], bstar[j])) / norms[j]
                v = [x - mu[i][j] * y for x, y in zip(v, bstar[j])]
            bstar.append(v)
            norms.append(sum(x * x for x in v))
        return bstar, mu, norms

    bstar, mu, norms = gram_schmidt()
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                b[k] = [x - q * y for x, y in zip(b[k], b[j])]
                bstar, mu, norms = gram_schmidt()
        if norms[k] >= (delta - mu[k][k - 1] ** 2) * norms[k - 1]:
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            bstar, mu, norms = gram_schmidt()
            k = max(k - 1, 1)
    return [tuple(v) for v in b]


class LatticeChart:
    """Affine coordinates ``x = origin + sum c_i basis_i`` on a lattice.

    ``basis`` rows must be linearly independent.  ``coords`` maps a point of
    the affine lattice to its integer coordinates and raises ValueError for
    points outside it.
    """

    def __init__(self, origin: Sequence[int], basis: Sequence[Sequence[int]]):
        self.origin = tuple(origin)
        self.basis = [tuple(v) for v in basis]
        self.dim = len(self.basis)
        # choose columns on which the basis is invertible
        self._cols = []
        if self.dim:
            cols = []
            bt = transpose(self.basis)
            probe = []
            for c, col in enumerate(bt):
                if rank(probe + [col]) > len(probe):
                    probe.append(col)
                    cols.append(c)
                    if len(cols) == self.dim:
                        break
            self._cols = cols
            sub = [[Fraction(self.basis[i][c]) for i in range(self.dim)] for c in cols]
            self._inv = _invert(sub)

    def coords(self, x: Sequence[int]) -> IntVector:
        d = [xi - oi for xi, oi in zip(x, self.origin)]
        if not self.dim:
            if any(d):
                raise ValueError("point not in the affine lattice")
            return ()
        rhs = [d[c] for c in self._cols]
        c = [sum(row[j] * rhs[j] for j in range(self.dim)) for row in self._inv]
        if any(ci.denominator != 1 for ci in c):
            raise ValueError("point not in the affine lattice")
        c = tuple(int(ci) for ci in c)
        back = self.point(c)
        if back != tuple(x):
            raise ValueError("point not in the affine span")
        return c

    def point(self, c: Sequence[int]) -> IntVector:
        out = list(self.origin)
        for ci, v in zip(c, self.basis):
            if ci:
                for j, vj in enumerate(v):
                    out[j] += ci * vj
        return tuple(out)

    def pullback_functional(self, a: Sequence[int]) -> tuple[IntVector, int]:
        """Express the ambient functional ``<a, x>`` in chart coordinates.

        Returns ``(coeffs, constant)`` with ``<a, x> = <coeffs, c> + constant``.
        """
        return tuple(dot(a, v) for v in self.basis), dot(a, self.origin)

    def pushforward_functional(self, coeffs: Sequence[int]) -> IntVector:
        """An ambient integer functional restricting to ``coeffs`` on the basis, up to scaling."""
        sol = solve_rational(self.basis, list(coeffs))
        den = 1
        for s in sol:
            den = den * s.denominator // gcd(den, s.denominator)
        return tuple(int(s * den) for s in sol)


def _invert(m: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(m)
    aug = [row[:] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for c in range(n):
        p = next(i for i in range(c, n) if aug[i][c] != 0)
        aug[c], aug[p] = aug[p], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    return [row[n:] for row in aug]


def affine_chart(points: Sequence[Sequence[int]], saturate: bool = True) -> LatticeChart:
    """Chart on the affine lattice spanned (``saturate``) or generated by ``points``."""
    points = [tuple(p) for p in points]
    o = points[0]
    diffs = [tuple(x - y for x, y in zip(p, o)) for p in points[1:]]
    if saturate:
        basis = saturated_basis(diffs, len(o))
    else:
        basis = generated_basis(diffs)
    return LatticeChart(o, basis)
