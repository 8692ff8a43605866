"""Cones of homology directions, dual cones, Euler class, norm face data.

All cone computations are exact double description over the rationals.
Rays and facets are kept as primitive integer vectors; a cone is the
nonnegative span of its generators plus the full span of its lineality
basis, and equals the set where every facet functional is >= 0 (the
facet list contains both signs of the equality constraints, so the sign
test alone decides membership).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

from .cusps import CuspStructure
from .dual import DualGraph, dual_graph
from .errors import ClassOutsideCone, InternalInconsistency, UnfilledMode
from .homology import FilledHomology, fill
from .linalg import frac_rank
from .tri import TautTriangulation


def _dot(a, b):
    return sum(Fraction(x) * Fraction(y) for x, y in zip(a, b))


def _primitive(vec):
    """Clear denominators, divide by the content, keep the direction."""
    fr = [Fraction(x) for x in vec]
    den = 1
    for f in fr:
        den = den * f.denominator // gcd(den, f.denominator)
    ints = [int(f * den) for f in fr]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    if g > 1:
        ints = [x // g for x in ints]
    return tuple(ints)


def _canon_line(vec):
    vec = _primitive(vec)
    for x in vec:
        if x:
            return vec if x > 0 else tuple(-y for y in vec)
    return vec


def halfspace_rays(ineqs, dim):
    """Extreme rays and lineality basis of {x : a.x >= 0 for every a}.

    Incremental double description.  Rays carry the set of processed
    inequalities tight on them; adjacency of two rays is decided by the
    standard combinatorial test (no third ray is tight on the common
    tight set).  Lineality directions are peeled off first, which keeps
    earlier tight sets valid because the pivot direction is orthogonal
    to every inequality processed so far.
    """
    lin = [tuple(1 if j == i else 0 for j in range(dim)) for i in range(dim)]
    rays = []               # (primitive vector, frozen tight set)
    for idx, a in enumerate(ineqs):
        pivot = None
        for l in lin:
            if _dot(a, l) != 0:
                pivot = l
                break
        if pivot is not None:
            if _dot(a, pivot) < 0:
                pivot = tuple(-x for x in pivot)
            pa = _dot(a, pivot)
            new_lin = []
            for l in lin:
                if l is pivot or l == tuple(-x for x in pivot):
                    continue
                c = _dot(a, l) / pa
                red = _primitive(tuple(Fraction(x) - c * p
                                       for x, p in zip(l, pivot)))
                if any(red):
                    new_lin.append(red)
            lin = new_lin
            # every old ray lands on the new hyperplane, so idx is tight
            rays = [(_primitive(tuple(Fraction(x) - (_dot(a, r) / pa) * p
                                      for x, p in zip(r, pivot))), t | {idx})
                    for r, t in rays]
            rays.append((pivot, frozenset(range(idx))))
            continue
        plus, zero, minus = [], [], []
        for r, t in rays:
            d = _dot(a, r)
            if d > 0:
                plus.append((r, t))
            elif d == 0:
                zero.append((r, t | {idx}))
            else:
                minus.append((r, t))
        combos = []
        for rp, tp in plus:
            for rm, tm in minus:
                common = tp & tm
                ok = True
                for r, t in rays:
                    if r is rp or r is rm or r == rp or r == rm:
                        continue
                    if common <= t:
                        ok = False
                        break
                if not ok:
                    continue
                vec = _primitive(tuple(
                    _dot(a, rp) * Fraction(m) - _dot(a, rm) * Fraction(p)
                    for p, m in zip(rp, rm)))
                if any(vec):
                    combos.append((vec, (common | {idx})))
        rays = plus + zero + combos
        seen = set()
        dedup = []
        for r, t in rays:
            if r not in seen:
                seen.add(r)
                dedup.append((r, t))
        rays = dedup
    return tuple(sorted(r for r, _ in rays)), \
        tuple(sorted(_canon_line(l) for l in lin))


@dataclass(frozen=True)
class RationalCone:
    ambient_dim: int
    generators: tuple       # primitive integral extreme rays
    facets: tuple           # primitive integral functionals, all >= 0 inside
    lineality_dim: int
    lineality: tuple        # primitive basis of the lineality space

    def contains(self, v) -> bool:
        if len(v) != self.ambient_dim:
            raise ValueError("wrong dimension")
        return all(_dot(f, v) >= 0 for f in self.facets)

    def violated_facet(self, v):
        for f in self.facets:
            if _dot(f, v) < 0:
                return f
        return None


def _facets_from(rays, lin, dim):
    duals, dlin = halfspace_rays(list(rays) + list(lin) +
                                 [tuple(-x for x in l) for l in lin], dim)
    return tuple(duals) + tuple(dlin) + \
        tuple(tuple(-x for x in l) for l in dlin)


def cone_from_generators(gens, dim) -> RationalCone:
    facets = _facets_from([_primitive(g) for g in gens if any(g)], (), dim)
    rays, lin = halfspace_rays(facets, dim)
    return RationalCone(ambient_dim=dim, generators=rays, facets=facets,
                        lineality_dim=len(lin), lineality=lin)


def cone_from_inequalities(ineqs, dim) -> RationalCone:
    rays, lin = halfspace_rays([_primitive(a) for a in ineqs], dim)
    return RationalCone(ambient_dim=dim, generators=rays,
                        facets=_facets_from(rays, lin, dim),
                        lineality_dim=len(lin), lineality=lin)


def dual_cone(C: RationalCone) -> RationalCone:
    """{f : f >= 0 on all of C}, computed from the generator description."""
    ineqs = list(C.generators) + list(C.lineality) + \
        [tuple(-x for x in l) for l in C.lineality]
    if not ineqs:
        # dual of the origin is the whole dual space
        ineqs = []
    return cone_from_inequalities(ineqs, C.ambient_dim) if ineqs else \
        _full_space(C.ambient_dim)


def _full_space(dim) -> RationalCone:
    rays, lin = halfspace_rays([], dim)
    return RationalCone(ambient_dim=dim, generators=rays,
                        facets=_facets_from(rays, lin, dim),
                        lineality_dim=len(lin), lineality=lin)


def same_cone(A: RationalCone, B: RationalCone) -> bool:
    if A.ambient_dim != B.ambient_dim:
        return False
    if sorted(A.generators) != sorted(B.generators):
        return False
    stack = list(A.lineality) + list(B.lineality)
    r = frac_rank([list(v) for v in stack]) if stack else 0
    return r == A.lineality_dim == B.lineality_dim


# ------------------------------------------------------------- flow cones

def flow_cone(g: DualGraph) -> RationalCone:
    """Nonnegative circulations on the dual graph.

    Inequalities are coordinate signs; conservation at each vertex is a
    pair of opposite inequalities.  Extreme rays are exactly the simple
    directed cycles.
    """
    nf = len(g.tails)
    ineqs = [tuple(1 if j == f else 0 for j in range(nf)) for f in range(nf)]
    for t in range(g.n):
        row = [0] * nf
        for f in g.in_edges[t]:
            row[f] += 1
        for f in g.out_edges[t]:
            row[f] -= 1
        ineqs.append(tuple(row))
        ineqs.append(tuple(-x for x in row))
    return cone_from_inequalities(ineqs, nf)


def homology_directions(tri: TautTriangulation, fillings=None,
                        fh: Optional[FilledHomology] = None) -> RationalCone:
    """Cone spanned by the classes of directed dual cycles.

    Classes are taken in the free part of H1 (filled when fillings are
    given), so the ambient space is H1(M; R) in the emitted basis.
    """
    if fh is None:
        fh = fill(tri, fillings or {})
    basis = fh.h1_filled
    rank = basis.rank
    if rank == 0:
        return cone_from_generators([], 0)
    gens = []
    for ray in flow_cone(dual_graph(tri)).generators:
        free, _ = basis.class_of(list(ray))
        gens.append(free)
    return cone_from_generators(gens, rank)


# ------------------------------------------------------------ euler class

@dataclass(frozen=True)
class EulerClass:
    h1_class: tuple         # Fractions in the emitted free basis
    per_cusp_index: dict    # cusp -> 2 - prongs of the filling slope

    def pair(self, alpha) -> Fraction:
        """<e, alpha> for a functional alpha in dual coordinates."""
        return _dot(self.h1_class, alpha)


def euler_class(tri: TautTriangulation, fillings,
                cs: Optional[CuspStructure] = None,
                fh: Optional[FilledHomology] = None) -> EulerClass:
    """Half the sum of cusp indices times filling-core classes."""
    if not fillings:
        raise UnfilledMode("euler class needs every cusp filled")
    if cs is None:
        cs = CuspStructure(tri)
    if fh is None:
        fh = fill(tri, fillings, cs)
    idx = {}
    total = [Fraction(0)] * fh.h1_filled.rank
    for (c, slope), core in zip(fh.fillings, fh.core_classes):
        ind = 2 - cs.prongs(c, slope)
        if ind > -1:
            raise InternalInconsistency("cusp index above -1 after the "
                                        "prong gate")
        idx[c] = ind
        for j, x in enumerate(core[0]):
            total[j] += Fraction(ind, 2) * x
    return EulerClass(h1_class=tuple(total), per_cusp_index=idx)


# -------------------------------------------------------------- norm face

@dataclass(frozen=True)
class NormFaceReport:
    cone_sigma: RationalCone
    face_codim: int
    face_dim: int           # -1 when sigma is the empty face
    sample_norms: tuple     # (integral class, exact norm value)


def norm_value(ec: EulerClass, cone_sigma: RationalCone, alpha) -> Fraction:
    """x(alpha) = <-e, alpha>, certified only on the dual cone."""
    bad = cone_sigma.violated_facet(alpha)
    if bad is not None:
        raise ClassOutsideCone(
            "class pairs negatively with a homology direction",
            certificate=bad)
    return -ec.pair(alpha)


def norm_face(tri: TautTriangulation, fillings,
              samples: Sequence = ()) -> NormFaceReport:
    """Dual cone of the homology directions with norm values on it.

    face_codim is the lineality dimension of the direction cone; the
    sample list defaults to the dual cone's extreme rays, which are the
    minimal integral points on their rays.
    """
    cs = CuspStructure(tri)
    fh = fill(tri, fillings, cs)
    ct = homology_directions(tri, fillings, fh=fh)
    sigma = dual_cone(ct)
    ec = euler_class(tri, fillings, cs=cs, fh=fh)
    span = list(sigma.generators) + list(sigma.lineality)
    dim = frac_rank([list(v) for v in span]) if span else 0
    values = []
    for alpha in (tuple(samples) or sigma.generators):
        values.append((tuple(alpha), norm_value(ec, sigma, alpha)))
    return NormFaceReport(cone_sigma=sigma, face_codim=ct.lineality_dim,
                          face_dim=dim - 1, sample_norms=tuple(values))
