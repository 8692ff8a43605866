"""Homology of the 2-skeleton spine, with and without filling relations.

The spine complex has one 0-cell per tetrahedron, one 1-cell per face class
(oriented from the tet below the face to the tet above it) and one 2-cell
per edge class.  d1(face) = above - below; d2(edge) = (side a) - (side b).
H1 of the spine is H1 of the manifold.  Filling appends the meridian
crossing words as extra relation cycles and recomputes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

from .cusps import CuspStructure
from .errors import InternalInconsistency, PreconditionFailed, ProngsTooSmall
from .linalg import kernel_basis, mat_vec, smith_normal_form, solve_integer, transpose
from .tri import TautTriangulation


def boundary_matrices(tri: TautTriangulation):
    """(d1, d2) for the spine complex; d1 @ d2 == 0."""
    nf = len(tri.face_classes)
    ne = len(tri.edge_classes)
    d1 = [[0] * nf for _ in range(tri.n)]
    for fc in range(nf):
        d1[tri.tet_above_face(fc)][fc] += 1
        d1[tri.tet_below_face(fc)][fc] -= 1
    d2 = [[0] * ne for _ in range(nf)]
    for e in range(ne):
        star = tri.edge_star(e)
        for fc, _, _ in star.side_a:
            d2[fc][e] += 1
        for fc, _, _ in star.side_b:
            d2[fc][e] -= 1
    for t in range(tri.n):
        for e in range(ne):
            assert sum(d1[t][f] * d2[f][e] for f in range(nf)) == 0
    return d1, d2


class HomologyBasis:
    """H1 presented as Z^k / relations, with explicit cycle representatives.

    class_of maps a 1-cycle (integer vector over face classes) to a pair
    (free coordinates, torsion coordinates).  cycle_reps[j] is an integer
    cycle whose class is the j-th free basis vector.
    """

    def __init__(self, tri: TautTriangulation,
                 extra_relations: Sequence[Sequence[int]] = ()):
        self.tri = tri
        self.d1, self.d2 = boundary_matrices(tri)
        nf = len(tri.face_classes)
        kb = kernel_basis(self.d1, ncols=nf)
        self.k = len(kb)
        self.K = transpose(kb) if kb else [[] for _ in range(nf)]
        rel_cols = [ [self.d2[f][e] for f in range(nf)]
                     for e in range(len(tri.edge_classes)) ]
        rel_cols += [list(map(int, r)) for r in extra_relations]
        self.relation_cycles = rel_cols
        R_cols = []
        for col in rel_cols:
            x = solve_integer(self.K, col)
            if x is None:
                raise InternalInconsistency("relation is not a cycle")
            R_cols.append(x)
        R = transpose(R_cols) if R_cols else [[] for _ in range(self.k)]
        sf = smith_normal_form(R) if R and R[0] else None
        if sf is None:
            self.diag = [0] * self.k
            self.U = [[1 if i == j else 0 for j in range(self.k)] for i in range(self.k)]
            U_inv = self.U
        else:
            self.diag = [sf.diag[i] if i < len(sf.diag) else 0 for i in range(self.k)]
            self.U = sf.U
            U_inv = sf.U_inv
        self.free_positions = [i for i in range(self.k) if self.diag[i] == 0]
        self.torsion_positions = [i for i in range(self.k) if self.diag[i] > 1]
        self.free_rank = len(self.free_positions)
        self.torsion = [self.diag[i] for i in self.torsion_positions]
        C = [[sum(self.K[i][a] * U_inv[a][j] for a in range(self.k))
              for j in range(self.k)] for i in range(nf)]
        self.cycle_reps = [[C[i][j] for i in range(nf)] for j in self.free_positions]

    def is_cycle(self, z: Sequence[int]) -> bool:
        return all(v == 0 for v in mat_vec(self.d1, list(z)))

    def class_of(self, z: Sequence[int]):
        z = list(map(int, z))
        if not self.is_cycle(z):
            raise ValueError("not a 1-cycle")
        x = solve_integer(self.K, z)
        if x is None:
            raise InternalInconsistency("cycle outside the kernel lattice")
        y = mat_vec(self.U, x)
        free = tuple(y[i] for i in self.free_positions)
        tors = tuple(y[i] % self.diag[i] for i in self.torsion_positions)
        return free, tors

    def pair(self, w: Sequence) -> tuple:
        """Evaluate a 1-cocycle (functional on face classes) on the free basis.

        Requires w to vanish on every relation cycle, otherwise the value
        would depend on the representative.
        """
        for col in self.relation_cycles:
            if sum(wi * ci for wi, ci in zip(w, col)) != 0:
                raise ValueError("functional does not vanish on relations")
        return tuple(sum(wi * ri for wi, ri in zip(w, rep))
                     for rep in self.cycle_reps)

    @property
    def rank(self) -> int:
        return self.free_rank

    @property
    def basis_lift(self):
        return self.cycle_reps


def homology_basis(tri: TautTriangulation,
                   extra_relations: Sequence[Sequence[int]] = ()) -> HomologyBasis:
    return HomologyBasis(tri, extra_relations)


def star_relator(tri: TautTriangulation, e: int) -> list[int]:
    """Net face-crossing vector of the walk around edge e.

    Computed from crossing directions alone (up through a top face is +1),
    not from the side decomposition, so it can cross-check d2.
    """
    nf = len(tri.face_classes)
    out = [0] * nf
    star = tri.edge_star(e)
    for (t, f) in star.faces:
        fc = tri.face_index[(t, f)]
        out[fc] += 1 if tri.is_top_face(t, f) else -1
    return out


@dataclass(frozen=True)
class SpineComplex:
    """Chain complex of the 2-skeleton spine, boundary maps as tuples."""

    d1: tuple
    d2: tuple
    rank_c0: int
    rank_c1: int
    rank_c2: int


def spine_complex(tri: TautTriangulation) -> SpineComplex:
    d1, d2 = boundary_matrices(tri)
    return SpineComplex(d1=tuple(map(tuple, d1)), d2=tuple(map(tuple, d2)),
                        rank_c0=tri.n, rank_c1=len(tri.face_classes),
                        rank_c2=len(tri.edge_classes))


def h1_unfilled(tri: TautTriangulation) -> HomologyBasis:
    return HomologyBasis(tri)


# ------------------------------------------------------ peripheral classes

def _path_ends(tri, fc, s):
    a, b = tri.tet_below_face(fc), tri.tet_above_face(fc)
    return (a, b) if s > 0 else (b, a)


def _connector(tri, a, b):
    """Shortest dual path from tet a to tet b, crossings signed by direction."""
    prev = {a: None}
    frontier = [a]
    while b not in prev:
        if not frontier:
            raise InternalInconsistency("dual graph disconnected")
        step = []
        for t in frontier:
            for f in range(4):
                fc = tri.face_index[(t, f)]
                if tri.tet_below_face(fc) == t:
                    o = tri.tet_above_face(fc)
                    if o not in prev:
                        prev[o] = (t, fc, 1)
                        step.append(o)
                if tri.tet_above_face(fc) == t:
                    o = tri.tet_below_face(fc)
                    if o not in prev:
                        prev[o] = (t, fc, -1)
                        step.append(o)
        frontier = step
    path = []
    t = b
    while prev[t] is not None:
        t0, fc, s = prev[t]
        path.append((fc, s))
        t = t0
    path.reverse()
    return path


def _repeat(word, times):
    if times < 0:
        word = [(fc, -s) for fc, s in reversed(word)]
    return list(word) * abs(times)


@dataclass(frozen=True)
class PeripheralClass:
    cusp: int
    slope: tuple
    crossing_word: tuple    # signed face classes, a closed dual path
    h1_class: tuple


def peripheral_class(tri: TautTriangulation, cusp: int, slope,
                     cs: Optional[CuspStructure] = None,
                     basis: Optional[HomologyBasis] = None) -> PeripheralClass:
    """Pushed-in curve of the given slope as a signed crossing word.

    Consecutive crossings share the tetrahedron the curve runs through
    between them, so the word is a closed dual path.  Built from the
    cusp basis words; when both coefficients are nonzero the second
    block is conjugated by a connector path, which cancels in homology.
    """
    p, q = slope
    if p == 0 and q == 0:
        raise ValueError("slope (0, 0) is not a curve")
    if cs is None:
        cs = CuspStructure(tri)
    if basis is None:
        basis = HomologyBasis(tri)
    cb = cs.bases[cusp]
    blocks = []
    if p:
        blocks.append(_repeat(cb.mu, p))
    if q:
        blocks.append(_repeat(cb.lam, q))
    if len(blocks) == 1:
        word = blocks[0]
    else:
        first, second = blocks
        conn = _connector(tri, _path_ends(tri, *first[-1])[1],
                          _path_ends(tri, *second[0])[0])
        word = first + conn + second + \
            [(fc, -s) for fc, s in reversed(conn)]
    for i in range(len(word)):
        if _path_ends(tri, *word[i])[1] != \
                _path_ends(tri, *word[(i + 1) % len(word)])[0]:
            raise InternalInconsistency("crossing word is not a dual path")
    z = [0] * len(tri.face_classes)
    for fc, s in word:
        z[fc] += s
    return PeripheralClass(cusp=cusp, slope=(p, q),
                           crossing_word=tuple(word),
                           h1_class=basis.class_of(z))


# ----------------------------------------------------------------- filling

def _xgcd(a, b):
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        k = old_r // r
        old_r, r = r, old_r - k * r
        old_s, s = s, old_s - k * s
        old_t, t = t, old_t - k * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


@dataclass(frozen=True)
class FilledHomology:
    """H1 after Dehn filling, plus the classes of the filling cores.

    Functionals on the filled H1 are handled through h1_filled.pair, so
    second homology never needs cells of its own here.
    """

    fillings: tuple         # (cusp, (p, q)) pairs; empty when unfilled
    h1_filled: HomologyBasis
    meridians: tuple        # face-class vectors of the filling slopes
    core_classes: tuple     # class of each filling core, per cusp


def fill(tri: TautTriangulation, fillings,
         cs: Optional[CuspStructure] = None) -> FilledHomology:
    """Quotient H1 by the meridians of a complete filling.

    fillings maps cusp to a primitive slope; an empty map means no
    filling at all and returns the unfilled presentation.  Partial
    fillings are refused, as is any slope spinning fewer than three
    times around its cusp.

    The core of a filling torus is represented by a companion curve
    crossing the meridian once, pushed in; its class is independent of
    the companion because the difference is a meridian multiple.
    """
    items = sorted(dict(fillings).items())
    if not items:
        return FilledHomology(fillings=(), h1_filled=HomologyBasis(tri),
                              meridians=(), core_classes=())
    if [c for c, _ in items] != list(range(tri.num_cusps)):
        raise PreconditionFailed("fill every cusp or none")
    if cs is None:
        cs = CuspStructure(tri)
    meridians = []
    for c, (p, q) in items:
        if gcd(p, q) != 1:
            raise ValueError(f"slope {(p, q)} on cusp {c} is not primitive")
        pr = cs.prongs(c, (p, q))
        if pr < 3:
            raise ProngsTooSmall(c, pr)
        meridians.append(cs.peripheral_cycle(c, p, q))
    hb = HomologyBasis(tri, extra_relations=meridians)
    for z in meridians:
        free, tors = hb.class_of(z)
        if any(free) or any(tors):
            raise InternalInconsistency("meridian class does not vanish")
    cores = []
    for c, (p, q) in items:
        # companion (r, s) with det sign(p): then the longitude reads as
        # |p| cores once the meridian is killed
        _, a, b = _xgcd(p, q)
        sgn = 1 if p > 0 else -1
        r, s = -sgn * b, sgn * a
        if p * s - q * r != sgn:
            raise InternalInconsistency("companion determinant is off")
        cores.append(hb.class_of(cs.peripheral_cycle(c, r, s)))
    return FilledHomology(fillings=tuple(items), h1_filled=hb,
                          meridians=tuple(tuple(m) for m in meridians),
                          core_classes=tuple(cores))


def h1_via_pi1(tri: TautTriangulation,
               extra_words: Sequence[Sequence[int]] = ()):
    """(rank, torsion) of H1 from the dual presentation.

    Spanning tree of the dual graph, one generator per non-tree face, one
    relator per edge class (star walk word), plus any extra words (e.g.
    meridians when filling).  Independent of the chain-complex route.
    """
    nf = len(tri.face_classes)
    in_tree = [False] * nf
    seen = [False] * tri.n
    seen[0] = True
    frontier = [0]
    while frontier:
        t = frontier.pop()
        for f in range(4):
            fc = tri.face_index[(t, f)]
            other = tri.tet_above_face(fc)
            if other == t:
                other = tri.tet_below_face(fc)
            if not seen[other]:
                seen[other] = True
                in_tree[fc] = True
                frontier.append(other)
    if not all(seen):
        raise InternalInconsistency("dual graph disconnected")
    gens = [fc for fc in range(nf) if not in_tree[fc]]
    gpos = {fc: i for i, fc in enumerate(gens)}
    rel_rows = []
    for e in range(len(tri.edge_classes)):
        w = star_relator(tri, e)
        rel_rows.append([w[fc] for fc in gens])
    for word in extra_words:
        rel_rows.append([word[fc] for fc in gens])
    R = transpose(rel_rows)  # gens x relators
    if not R or not R[0]:
        return len(gens), []
    sf = smith_normal_form(R)
    diag = [sf.diag[i] if i < len(sf.diag) else 0 for i in range(len(gens))]
    rank = sum(1 for d in diag if d == 0)
    torsion = sorted(d for d in diag if d > 1)
    return rank, torsion
