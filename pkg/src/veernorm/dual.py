"""Dual graph, face train tracks, and normal loops in the two-skeleton.

Every face carries two one-switch train tracks.  The stable one merges
toward the bottom edge of the tetrahedron above the face, the unstable
one toward the top edge of the tetrahedron below it.  Both switch
positions are recomputed from the veers of the three boundary edges and
the two derivations must agree before anything downstream runs.

A normal loop is a cyclic run through faces that crosses an edge after
every step.  Its classification reads off where the exit and entry
pages of each crossing sit in the stacks of faces on either side of the
crossed edge: stable loops exit below the top of the stack and enter at
the top, unstable loops exit at the bottom and enter above it, branch
loops do both at once.  Loops that wind a shorter loop several times
trace the same curve again, so enumeration reports primitive loops
only, one per rotation class.
"""

from dataclasses import dataclass, field
from typing import Optional

from .cusps import LEFT, VeerData, veer_and_hinge
from .errors import InternalInconsistency, NotStronglyConnected
from .tri import EDGE_VERTS, TautTriangulation, edge_slot

LADDERPOLE = "ladderpole"
RUNG_UP = "rung-up"
RUNG_DOWN = "rung-down"


# ------------------------------------------------------------- dual graph

@dataclass
class DualGraph:
    """Tetrahedra joined along cooriented face classes, faces pointing up."""

    n: int
    tails: tuple            # tet below each face class
    heads: tuple            # tet above each face class
    out_edges: tuple = field(init=False)
    in_edges: tuple = field(init=False)

    def __post_init__(self):
        out = [[] for _ in range(self.n)]
        inc = [[] for _ in range(self.n)]
        for fc, (t, h) in enumerate(zip(self.tails, self.heads)):
            out[t].append(fc)
            inc[h].append(fc)
        self.out_edges = tuple(map(tuple, out))
        self.in_edges = tuple(map(tuple, inc))

    def cycle_space_rank(self) -> int:
        # connected graph: edges minus vertices plus one
        return len(self.tails) - self.n + 1

    def is_cycle(self, faces) -> bool:
        """Do the faces chain head to tail, wrapping around?"""
        faces = tuple(faces)
        if not faces:
            return False
        return all(self.heads[faces[i - 1]] == self.tails[faces[i]]
                   for i in range(len(faces)))

    def cycle_tets(self, faces) -> tuple:
        return tuple(self.tails[fc] for fc in faces)


def is_strongly_connected(g: DualGraph) -> bool:
    if g.n == 0:
        return False
    for edges, ends in ((g.out_edges, g.heads), (g.in_edges, g.tails)):
        seen = {0}
        todo = [0]
        while todo:
            for fc in edges[todo.pop()]:
                if ends[fc] not in seen:
                    seen.add(ends[fc])
                    todo.append(ends[fc])
        if len(seen) < g.n:
            return False
    return True


def dual_graph(tri: TautTriangulation) -> DualGraph:
    m = len(tri.face_classes)
    g = DualGraph(n=tri.n,
                  tails=tuple(tri.tet_below_face(fc) for fc in range(m)),
                  heads=tuple(tri.tet_above_face(fc) for fc in range(m)))
    if not is_strongly_connected(g):
        raise NotStronglyConnected(
            "dual graph of the input is not strongly connected")
    return g


# ------------------------------------------------------------ face tracks

def chart_slot(tri: TautTriangulation, t: int, f: int, u: int, v: int) -> int:
    """Slot of edge {u, v} in the chart of the face class of (t, f)."""
    fc = tri.face_index[(t, f)]
    tb, fb = tri.face_rep_below(fc)
    if (t, f) != (tb, fb):
        p = tri.glue[t][f][2]
        u, v = p[u], p[v]
    return _slot_of(tri.face_ccw(tb, fb), {u, v})


def _slot_of(verts, pair):
    for j in range(3):
        if {verts[j], verts[(j + 1) % 3]} == pair:
            return j
    raise InternalInconsistency("edge is not on the face")


@dataclass(frozen=True)
class FaceTrack:
    """Both switches of one face, in the chart of the tetrahedron below.

    Slots index the boundary edges counterclockwise as seen from above;
    the corner across from slot j sits at position (j + 2) % 3.
    """

    face: int
    below: tuple            # (tet, face) rep with the face on top
    above: tuple
    verts: tuple            # ccw vertex labels of the below rep
    above_verts: tuple      # the same corners in the labels of the tet above
    edges: tuple            # edge class in each slot
    stable_slot: int
    unstable_slot: int

    @property
    def stable_target(self) -> int:
        return self.edges[self.stable_slot]

    @property
    def unstable_target(self) -> int:
        return self.edges[self.unstable_slot]

    def tip_below(self, pos: int) -> tuple:
        return self.below[0], self.verts[pos]

    def tip_above(self, pos: int) -> tuple:
        return self.above[0], self.above_verts[pos]


@dataclass(frozen=True)
class FaceTrackData:
    tracks: tuple

    def __getitem__(self, fc: int) -> FaceTrack:
        return self.tracks[fc]

    def __len__(self):
        return len(self.tracks)

    def __iter__(self):
        return iter(self.tracks)

    def tip_type(self, fc: int, pos: int) -> str:
        """Ladderpole, rung-up, or rung-down for one corner of a face.

        The cusp wedge of a switch opens away from its target edge, so
        the up rung tip is the corner across from the stable slot and
        the down rung tip the corner across from the unstable slot.
        """
        tr = self.tracks[fc]
        if pos == (tr.stable_slot + 2) % 3:
            return RUNG_UP
        if pos == (tr.unstable_slot + 2) % 3:
            return RUNG_DOWN
        return LADDERPOLE


def face_tracks(tri: TautTriangulation,
                veer: Optional[VeerData] = None) -> FaceTrackData:
    """Both train tracks on every face, derived twice and cross-checked.

    The switch slots come once from dual position and once from the
    veers of the boundary edges.  Any disagreement, or a face whose
    three edges veer the same way, raises InternalInconsistency.
    """
    if veer is None:
        veer = veer_and_hinge(tri)
    tracks = []
    for fc in range(len(tri.face_classes)):
        tb, fb = tri.face_rep_below(fc)
        ta, fa = tri.face_rep_above(fc)
        verts = tri.face_ccw(tb, fb)
        edges = tuple(
            tri.edge_index[(tb, edge_slot(verts[j], verts[(j + 1) % 3]))]
            for j in range(3))

        into_b = tri.glue[ta][fa][2]
        stable = _slot_of(
            verts, {into_b[u] for u in EDGE_VERTS[tri.bottom_slot[ta]]})
        unstable = _slot_of(verts, set(EDGE_VERTS[tri.top_slot[tb]]))
        if stable == unstable:
            raise InternalInconsistency(
                "face %d points both switches at one edge" % fc)

        veers = [veer.veer[e] for e in edges]
        kinds = set(veers)
        if len(kinds) != 2:
            raise InternalInconsistency("face %d has a single veer" % fc)
        maj = max(kinds, key=veers.count)
        i, j = (s for s in range(3) if veers[s] == maj)
        # e2 is the ccw successor of e1 within the same-veer pair
        e1 = i if (i + 1) % 3 == j else j
        e2 = j if e1 == i else i
        if (stable, unstable) != ((e1, e2) if maj == LEFT else (e2, e1)):
            raise InternalInconsistency(
                "face %d: dual position and veer disagree" % fc)

        into_a = tri.glue[tb][fb][2]
        tracks.append(FaceTrack(
            face=fc, below=(tb, fb), above=(ta, fa), verts=verts,
            above_verts=tuple(into_a[w] for w in verts), edges=edges,
            stable_slot=stable, unstable_slot=unstable))
    return FaceTrackData(tracks=tuple(tracks))


# ------------------------------------------------------------------ pages

class EdgePages:
    """Placement of every page of every face around its edge.

    A page is a pair (face class, chart slot).  Each edge class carries
    two stacks of pages, one per side, indexed upward from the bottom
    sheet of the fan.  Veering input gives every stack at least two
    pages.
    """

    def __init__(self, tri: TautTriangulation):
        self.tri = tri
        self.where = {}     # page -> (edge, side, height)
        self.stacks = {}    # (edge, side) -> pages bottom to top
        for e in range(len(tri.edge_classes)):
            star = tri.edge_star(e)
            d = len(star.corners)
            for side, (i, j) in enumerate(((star.below, star.above),
                                           (star.above, star.below))):
                ks = []
                while i != j:
                    ks.append(i)
                    i = (i + 1) % d
                if side:
                    ks.reverse()
                stack = []
                for k in ks:
                    t, f = star.faces[k]
                    _, u, v = star.corners[k]
                    page = (tri.face_index[(t, f)],
                            chart_slot(tri, t, f, u, v))
                    if page in self.where:
                        raise InternalInconsistency(
                            "page appears twice around the edges")
                    self.where[page] = (e, side, len(stack))
                    stack.append(page)
                if len(stack) < 2:
                    raise InternalInconsistency("side stack of height one")
                self.stacks[(e, side)] = tuple(stack)
        if len(self.where) != 3 * len(tri.face_classes):
            raise InternalInconsistency("page count is off")

    def edge_of(self, page) -> int:
        return self.where[page][0]

    def placement(self, page):
        """(side stack, height) for the side holding the page."""
        e, side, h = self.where[page]
        return self.stacks[(e, side)], h


def _topmost(pages, page):
    stack, h = pages.placement(page)
    return h == len(stack) - 1


def _bottommost(pages, page):
    return pages.placement(page)[1] == 0


def _not_topmost(pages, page):
    return not _topmost(pages, page)


def _not_bottommost(pages, page):
    return not _bottommost(pages, page)


# ------------------------------------------------------------------ loops

@dataclass(frozen=True)
class NormalLoop:
    """Cyclic run of (face, entry slot, exit slot) steps.

    Each flag records that every crossing of the run satisfies the
    matching height rule, so a loop is stable and unstable at once
    exactly when it is a branch loop.
    """

    steps: tuple
    edges: tuple            # edge class crossed after each step
    stable: bool
    unstable: bool
    shallow_stable: bool
    shallow_unstable: bool

    def __len__(self):
        return len(self.steps)


def _classify(pages: EdgePages, steps) -> NormalLoop:
    edges = []
    st = un = sst = sun = True
    for i, (fc, a, b) in enumerate(steps):
        if a == b:
            raise InternalInconsistency("step enters and leaves by one slot")
        f2, a2, _ = steps[(i + 1) % len(steps)]
        out_page, in_page = (fc, b), (f2, a2)
        e = pages.edge_of(out_page)
        if pages.edge_of(in_page) != e or out_page == in_page:
            raise InternalInconsistency("steps do not chain across an edge")
        edges.append(e)
        stack1, h1 = pages.placement(out_page)
        stack2, h2 = pages.placement(in_page)
        z1, z2 = len(stack1), len(stack2)
        st = st and h1 < z1 - 1 and h2 == z2 - 1
        un = un and h1 == 0 and h2 > 0
        sst = sst and h1 == z1 - 2 and h2 == z2 - 1
        sun = sun and h1 == 0 and h2 == 1
    return NormalLoop(steps=tuple(steps), edges=tuple(edges), stable=st,
                      unstable=un, shallow_stable=sst, shallow_unstable=sun)


def _closed_walks(nodes, succs, max_len):
    """Primitive closed walks, one tuple per rotation class.

    Each walk is found rooted at its least node and may pass through
    that node again on the way; powers of shorter walks are dropped.
    """
    order = {v: i for i, v in enumerate(nodes)}
    found = set()

    def emit(path):
        w = tuple(path)
        if any(w == w[i:] + w[:i] for i in range(1, len(w))):
            return
        found.add(min(w[i:] + w[:i] for i in range(len(w))))

    def grow(v, path):
        for w in succs[path[-1]]:
            if order[w] < order[v]:
                continue
            if w == v:
                emit(path)
            if len(path) < max_len:
                path.append(w)
                grow(v, path)
                path.pop()

    for v in nodes:
        grow(v, [v])
    return sorted(found, key=lambda w: (len(w), w))


def _restricted_walks(tri, pages, entry_ok, exit_ok, max_len):
    # a step is admissible iff its entry page passes entry_ok and its
    # exit page passes exit_ok; crossings then chain page to page
    nodes = sorted(
        (fc, a, b)
        for fc in range(len(tri.face_classes))
        for a in range(3) for b in range(3)
        if a != b and entry_ok(pages, (fc, a)) and exit_ok(pages, (fc, b)))
    by_edge = {}
    for v in nodes:
        by_edge.setdefault(pages.edge_of((v[0], v[1])), []).append(v)
    succs = {}
    for v in nodes:
        out_page = (v[0], v[2])
        succs[v] = [w for w in by_edge.get(pages.edge_of(out_page), ())
                    if (w[0], w[1]) != out_page]
    return _closed_walks(nodes, succs, max_len)


def stable_loops(tri: TautTriangulation, max_len: int):
    """Primitive stable loops of at most max_len steps, up to rotation."""
    pages = EdgePages(tri)
    walks = _restricted_walks(tri, pages, _topmost, _not_topmost, max_len)
    return [_classify(pages, w) for w in walks]


def unstable_loops(tri: TautTriangulation, max_len: int):
    """Primitive unstable loops of at most max_len steps, up to rotation."""
    pages = EdgePages(tri)
    walks = _restricted_walks(tri, pages, _not_bottommost, _bottommost,
                              max_len)
    return [_classify(pages, w) for w in walks]


# ---------------------------------------------------------- branch curves

@dataclass(frozen=True)
class BranchCurve:
    """A branch loop with its push-off cycles through the fans."""

    loop: NormalLoop
    pushup: tuple           # dual cycle of the fan faces above the loop
    pushdown: tuple


def _push(pages: EdgePages, steps, up: bool) -> tuple:
    cyc = []
    k = len(steps)
    for i, (fc, _, b) in enumerate(steps):
        f2, a2, _ = steps[(i + 1) % k]
        stack, h = pages.placement((fc, b) if up else (f2, a2))
        cyc.extend(p[0] for p in (stack[h + 1:] if up else stack[:h]))
    return tuple(cyc)


def pushup_cycle(tri: TautTriangulation, loop: NormalLoop) -> tuple:
    """Faces of the dual cycle swept out above a stable loop."""
    if not loop.stable:
        raise ValueError("pushing up needs a stable loop")
    return _push(EdgePages(tri), loop.steps, True)


def pushdown_cycle(tri: TautTriangulation, loop: NormalLoop) -> tuple:
    """Faces of the dual cycle swept out below an unstable loop."""
    if not loop.unstable:
        raise ValueError("pushing down needs an unstable loop")
    return _push(EdgePages(tri), loop.steps, False)


def two_sided(pages: EdgePages, loop: NormalLoop) -> bool:
    """Whether every crossing switches to the other side of its edge.

    A loop may leave an edge through the same side stack it entered
    when one face is doubly incident there; its push-offs then need not
    run along the branch curves, so smoothness statements are made for
    two-sided loops only.
    """
    k = len(loop.steps)
    for i, (fc, _, b) in enumerate(loop.steps):
        f2, a2, _ = loop.steps[(i + 1) % k]
        if pages.where[(fc, b)][:2] == pages.where[(f2, a2)][:2]:
            return False
    return True


def branch_cycles(tri: TautTriangulation, upper: bool = True,
                  veer: Optional[VeerData] = None) -> tuple:
    """Branch curves of one smoothing of the dual complex, as face cycles.

    The branched surface dual to the 2-skeleton has its branch locus
    along the whole dual graph, split into smooth strands by a local
    choice at each tetrahedron: the strand entering through a bottom
    face leaves through the top face cut off by the equatorial edge
    whose veer differs from the tetrahedron's bottom edge (upper
    smoothing) resp. top edge (lower smoothing).  The two rules agree
    at non-hinge tetrahedra and pick transverse pairs at hinge ones.
    Every face lies on exactly one cycle, and the push-offs of
    two-sided branch loops run along these cycles.

    Cycles come back rotated to start at their smallest face, sorted.
    """
    if veer is None:
        veer = veer_and_hinge(tri)
    tracks = face_tracks(tri, veer)
    succ = {}
    for fc in range(len(tri.face_classes)):
        t, v = tracks[fc].above
        ref = veer.veer[tri.edge_index[
            (t, tri.bottom_slot[t] if upper else tri.top_slot[t])]]
        top = set(EDGE_VERTS[tri.top_slot[t]])
        picks = [w for w in range(4) if w not in top and w != v
                 and veer.veer[tri.edge_index[
                     (t, edge_slot(*sorted(set(range(4)) - {v, w})))]] != ref]
        # the two equatorial edges of a bottom face have opposite veers
        if len(picks) != 1:
            raise InternalInconsistency("smoothing germ is not unique")
        succ[fc] = tri.face_index[(t, picks[0])]
    if sorted(succ.values()) != sorted(succ):
        raise InternalInconsistency("smoothing is not a permutation")
    cycles, seen = [], set()
    for fc in sorted(succ):
        if fc in seen:
            continue
        cyc, x = [], fc
        while x not in seen:
            seen.add(x)
            cyc.append(x)
            x = succ[x]
        cycles.append(tuple(cyc))
    return tuple(cycles)


def branch_curves(tri: TautTriangulation, max_len: Optional[int] = None):
    """Branch loops up to max_len steps, default four per tetrahedron.

    Each comes with the dual cycles obtained by pushing the loop up
    resp. down through the fans beside the crossed edges.
    """
    if max_len is None:
        max_len = 4 * tri.n
    pages = EdgePages(tri)
    g = dual_graph(tri)
    out = []
    for w in _restricted_walks(tri, pages, _topmost, _bottommost, max_len):
        lp = _classify(pages, w)
        if not (lp.stable and lp.unstable):
            raise InternalInconsistency("branch walk fails a height rule")
        up = _push(pages, w, True)
        down = _push(pages, w, False)
        if not (g.is_cycle(up) and g.is_cycle(down)):
            raise InternalInconsistency("push-off is not a dual cycle")
        out.append(BranchCurve(loop=lp, pushup=up, pushdown=down))
    return out
