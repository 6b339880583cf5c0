"""S and T polynomials of lattice polytopes and their faces."""
from __future__ import annotations

from math import comb
from typing import Optional

from .errors import EmptyFace
from .polytope import Face, Polytope
from .poset import UniPoly

EMPTY = None  # stands for the empty face, whose S polynomial is 1


def s_poly(p: Polytope, face: Optional[Face] = EMPTY) -> UniPoly:
    """``(1-t)^(d+1) * sum_k l(k F) t^k``; ``S`` of the empty face is 1.

    Pass ``face=p.full_face()`` for the polytope itself.
    """
    if face is None or face.dim < 0:
        return UniPoly.one()
    return UniPoly(p.ehrhart(face).s)


def t_poly(p: Polytope, face: Face) -> UniPoly:
    """``T(t) = t^(d+1) S(1/t)``."""
    if face is None or face.dim < 0:
        raise EmptyFace("T is not defined for the empty face")
    return s_poly(p, face).reversed_in(face.dim + 1)


def t_poly_direct(p: Polytope, face: Face) -> UniPoly:
    """T from interior counts of the dilates ``k F``, ``k = 1..d+1``.

    Does not use reciprocity; the counts come from an independent walk over
    each dilate.
    """
    if face is None or face.dim < 0:
        raise EmptyFace("T is not defined for the empty face")
    from .polytope import _FiberCounter, convex_hull
    from .exactlin import affine_chart

    d = face.dim
    verts = p.face_vertices(face)
    if d == 0:
        inner = [1] * (d + 2)
    else:
        chart = affine_chart(verts)
        counter = _FiberCounter(convex_hull([chart.coords(v) for v in verts]))
        inner = [0] + [counter.count(k)[1] for k in range(1, d + 2)]
    if d == 0:
        inner[0] = 0
    out = []
    for j in range(d + 2):
        out.append(sum((-1) ** i * comb(d + 1, i) * inner[j - i] for i in range(j + 1)))
    return UniPoly(out)


def s_poly_direct(p: Polytope, face: Face) -> UniPoly:
    """S from point counts of ``k F`` for ``k = 0..d`` without reciprocity."""
    from .polytope import _FiberCounter, convex_hull
    from .exactlin import affine_chart

    d = face.dim
    if d <= 0:
        return UniPoly.one()
    verts = p.face_vertices(face)
    chart = affine_chart(verts)
    counter = _FiberCounter(convex_hull([chart.coords(v) for v in verts]))
    pts = [1] + [counter.count(k)[0] for k in range(1, d + 1)]
    return UniPoly(sum((-1) ** i * comb(d + 1, i) * pts[j - i] for i in range(j + 1))
                   for j in range(d + 1))


def gorenstein_index_check(p: Polytope, r: int) -> bool:
    """Whether ``p`` is Gorenstein of index ``r``, via palindromicity of S."""
    d = p.affine_dim
    s = s_poly(p, p.full_face())
    return s.is_palindromic(d - r + 1)
