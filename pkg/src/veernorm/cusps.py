"""Cusp cross sections of a taut triangulation.

Each ideal vertex of a tetrahedron cuts out a triangle (a "tip") in the
torus cross section of its cusp.  The taut angles make every tip a wedge:
one corner carries angle pi, the other two are flat.  For a veering
structure the tiling of the torus by tips organises into ladders, annular
strips joined along rungs, with consecutive strips meeting along pole
curves.  This module builds that decomposition, checks it, orients it,
and derives the per-edge handedness, the hinge tetrahedra and a
peripheral homology basis for each cusp.

Conventions.  Pictures are drawn as seen from the cusp looking in, with
the coorientation of the faces pointing up the page.  A pole curve is
"left" or "right" as a boundary component of the downward ladder it
bounds, for an observer inside the manifold; that observer sees the
mirror of the drawn picture, so "left" here means the curve sits on the
right of the downward ladder's upward-oriented core in the drawing.
"""

from dataclasses import dataclass
from fractions import Fraction
import re

from .errors import (
    InconsistentVeer,
    InternalInconsistency,
    NotPseudohyperbolic,
    ParseError,
)
from .tri import EDGE_VERTS, TautTriangulation

LEFT = "left"
RIGHT = "right"


@dataclass(frozen=True)
class Tip:
    """One cusp triangle: vertex `vert` of tetrahedron `tet`.

    face_00 is the side opposite the pi corner (both of its ends are flat
    corners); faces_0pi are the two sides meeting the pi corner.  `up`
    records whether the pi corner lies on the tetrahedron's top edge.
    """

    tet: int
    vert: int
    cusp: int
    up: bool
    face_00: int
    faces_0pi: tuple


@dataclass
class Ladder:
    index: int
    cusp: int
    up: bool
    tips: tuple          # (tet, vert) keys in rung-successor order
    curves: tuple = ()   # the two pole curve ids along its boundary
    left_pole: int = -1
    right_pole: int = -1


@dataclass
class PoleCurve:
    index: int
    cusp: int
    edges: tuple         # pole edge ids in cyclic order
    switches: tuple      # switch keys, switches[i] between edges[i-1], edges[i]
    handed: str = ""
    up_ladder: int = -1
    down_ladder: int = -1


@dataclass(frozen=True)
class CuspBasis:
    """Peripheral basis (mu, lam) with intersection number +1.

    lam runs up a single ladder crossing every rung of that ladder; mu
    crosses every ladder and every pole curve of the cusp exactly once.
    Words list (face class, sign) crossings; a slope p/q means the curve
    p*mu + q*lam.
    """

    cusp: int
    mu: tuple
    lam: tuple
    mu_tips: tuple
    lam_tips: tuple
    ladder_order: tuple


class CuspStructure:
    """Ladder decomposition of every cusp of a veering candidate.

    Raises NotPseudohyperbolic (with a witness) if the taut angles do not
    organise the cusp tilings into ladders, and InconsistentVeer if the
    two ends of an edge see pole curves of different handedness.
    """

    def __init__(self, tri: TautTriangulation):
        self.tri = tri
        self._build_tips()
        self._build_rungs()
        self._build_ladders()
        self._build_switch_tables()
        self._build_pole_curves()
        self._orient_ladders()
        self._veer_and_fans()
        self._build_bases()

    # ------------------------------------------------------------ tips

    def _build_tips(self):
        tri = self.tri
        self.tip = {}
        self.tips_of_cusp = [[] for _ in range(tri.num_cusps)]
        for t in range(tri.n):
            top = set(EDGE_VERTS[tri.top_slot[t]])
            for v in range(4):
                up = v in top
                pi_slot = tri.top_slot[t] if up else tri.bottom_slot[t]
                a, b = EDGE_VERTS[pi_slot]
                x_pi = b if a == v else a
                zero = tuple(f for f in range(4) if f not in (v, x_pi))
                tip = Tip(tet=t, vert=v, cusp=tri.cusp_index[(t, v)],
                          up=up, face_00=x_pi, faces_0pi=zero)
                self.tip[(t, v)] = tip
                self.tips_of_cusp[tip.cusp].append((t, v))

    def _partner_side(self, side):
        t, v, f = side
        t2, f2, p = self.tri.glue[t][f]
        return (t2, p[v], f2)

    def _side_class(self, side):
        return min(side, self._partner_side(side))

    # ----------------------------------------------------------- rungs

    def _build_rungs(self):
        """Glue each tip's 00 side; it must land on a 0-pi side."""
        self.pred = {}
        self.succ = {}
        received = {key: [] for key in self.tip}
        for key, tip in self.tip.items():
            side = (tip.tet, tip.vert, tip.face_00)
            t2, v2, f2 = self._partner_side(side)
            other = self.tip[(t2, v2)]
            if f2 == other.face_00:
                raise NotPseudohyperbolic(
                    "two flat-flat sides are glued together",
                    witness={"side": side, "partner": (t2, v2, f2)})
            if other.up != tip.up:
                raise InternalInconsistency(
                    "rung joins tips of opposite direction")
            self.pred[key] = (t2, v2)
            received[(t2, v2)].append(f2)
        for key, faces in received.items():
            if len(faces) != 1:
                raise NotPseudohyperbolic(
                    "tip does not receive exactly one rung",
                    witness={"tip": key, "rung_faces": sorted(faces)})
        self.rung_in_face = {key: faces[0] for key, faces in received.items()}
        self.pole_face = {}
        for key, tip in self.tip.items():
            rest = [f for f in tip.faces_0pi if f != self.rung_in_face[key]]
            assert len(rest) == 1
            self.pole_face[key] = rest[0]
        for key in self.tip:
            t, v = self.pred[key]
            self.succ[(t, v)] = key

    # --------------------------------------------------------- ladders

    def _build_ladders(self):
        self.ladders = []
        self.ladder_of = {}
        seen = set()
        for start in sorted(self.tip):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            cur = self.succ[start]
            while cur != start:
                cyc.append(cur)
                seen.add(cur)
                cur = self.succ[cur]
            tip0 = self.tip[start]
            if any(self.tip[k].up != tip0.up for k in cyc):
                raise InternalInconsistency("mixed directions in one ladder")
            idx = len(self.ladders)
            self.ladders.append(Ladder(index=idx, cusp=tip0.cusp,
                                       up=tip0.up, tips=tuple(cyc)))
            for k in cyc:
                self.ladder_of[k] = idx
            self._check_strip_is_annulus(self.ladders[-1])

    def _check_strip_is_annulus(self, lad):
        """Glue the strip along its rungs only and count corner classes.

        m triangles and m rung gluings leave 2m edges, so the strip is an
        annulus exactly when it has m corner classes.
        """
        parent = {}

        def find(x):
            while parent.get(x, x) != x:
                parent[x] = parent.get(parent[x], parent[x])
                x = parent[x]
            return x

        def union(x, y):
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[rx] = ry

        for (t, v) in lad.tips:
            for x in range(4):
                if x != v:
                    parent.setdefault((t, v, x), (t, v, x))
        for (t, v) in lad.tips:
            tip = self.tip[(t, v)]
            side = (t, v, tip.face_00)
            t2, v2, f2 = self._partner_side(side)
            p = self.tri.glue[t][tip.face_00][2]
            for x in tip.faces_0pi:
                union((t, v, x), (t2, v2, p[x]))
        classes = {find(c) for c in parent}
        if len(classes) != len(lad.tips):
            raise NotPseudohyperbolic(
                "ladder strip is not an annulus",
                witness={"ladder_tips": lad.tips,
                         "corner_classes": len(classes)})

    # ------------------------------------------------- switch rotations

    def _build_switch_tables(self):
        """Cyclic order of tip corners around each cusp vertex.

        A switch is an end of an edge class, keyed (edge, end) with end 0
        the u track of the star corners (t, u, v).  Around end 0 the star
        order is the drawn counterclockwise order; around end 1 it is the
        reverse.  Gap i of a rotation holds the side crossed between
        corners i and i+1.
        """
        tri = self.tri
        self.corner_end = {}
        self.rotation = {}
        self.switches = []
        for e in range(len(tri.edge_classes)):
            star = tri.edge_star(e)
            d = len(star.corners)
            for (t, u, v) in star.corners:
                self.corner_end[(t, u, v)] = (e, 0)
                self.corner_end[(t, v, u)] = (e, 1)
            rot0 = [(t, u, v) for (t, u, v) in star.corners]
            gaps0 = [(star.corners[i][0], star.corners[i][1],
                      star.faces[i][1]) for i in range(d)]
            rot1 = []
            gaps1 = []
            for j in range(d):
                i = d - 1 - j
                t, u, v = star.corners[i]
                rot1.append((t, v, u))
                # between corners i and i-1 we cross the entry face of
                # corner i; that is the partner of corner i-1's exit side
                ti, ui, vi = star.corners[(i - 1) % d]
                prev_exit = (ti, vi, star.faces[(i - 1) % d][1])
                gaps1.append(self._partner_side(prev_exit))
            self.rotation[(e, 0)] = (rot0, gaps0)
            self.rotation[(e, 1)] = (rot1, gaps1)
            self.switches.extend([(e, 0), (e, 1)])
        self.cusp_of_switch = {}
        for s in self.switches:
            t, v, _ = self.rotation[s][0][0]
            self.cusp_of_switch[s] = tri.cusp_index[(t, v)]

    # ------------------------------------------------------ pole curves

    def _build_pole_curves(self):
        # pole sides pair off; each pair is one edge of the cusp tiling
        self.pole_edges = []
        self.pole_edge_of = {}
        edge_index = {}
        for key in sorted(self.tip):
            side = (key[0], key[1], self.pole_face[key])
            cls = self._side_class(side)
            if cls in edge_index:
                continue
            other = self._partner_side(side)
            okey = (other[0], other[1])
            if self.pole_face.get(okey) != other[2]:
                raise InternalInconsistency(
                    "pole side glued to a non-pole side")
            idx = len(self.pole_edges)
            edge_index[cls] = idx
            self.pole_edges.append((side, other))
            self.pole_edge_of[key] = idx
            self.pole_edge_of[okey] = idx

        def side_switches(side):
            t, v, f = side
            xs = [x for x in range(4) if x not in (v, f)]
            return tuple(self.corner_end[(t, v, x)] for x in xs)

        self.pole_edge_ends = []
        ends_at = {s: [] for s in self.switches}
        for idx, (side, other) in enumerate(self.pole_edges):
            sw = side_switches(side)
            if sorted(sw) != sorted(side_switches(other)):
                raise InternalInconsistency("pole edge ends disagree "
                                            "between its two sides")
            self.pole_edge_ends.append(sw)
            ends_at[sw[0]].append((idx, 0))
            ends_at[sw[1]].append((idx, 1))
        for s in self.switches:
            if len(ends_at[s]) != 2:
                raise NotPseudohyperbolic(
                    "switch does not lie on exactly one pole curve",
                    witness={"switch": s, "pole_ends": ends_at[s]})

        self.curves = []
        self.curve_of_switch = {}
        self.curve_of_pole_edge = {}
        visited = set()
        for e0 in range(len(self.pole_edges)):
            if e0 in visited:
                continue
            edges = []
            switches = []
            # state (idx, k): travelling along edge idx, entered at end k
            cur = (e0, 0)
            while True:
                idx, k = cur
                visited.add(idx)
                edges.append(idx)
                s = self.pole_edge_ends[idx][1 - k]
                switches.append(s)
                a, b = ends_at[s]
                nxt = b if a == (idx, 1 - k) else a
                cur = nxt
                if cur == (e0, 0):
                    break
            # switches[i] sits between edges[i] and edges[i+1]; rotate so
            # switches[i] precedes edges[i]
            switches = switches[-1:] + switches[:-1]
            cidx = len(self.curves)
            cusp = self.cusp_of_switch[switches[0]]
            self.curves.append(PoleCurve(index=cidx, cusp=cusp,
                                         edges=tuple(edges),
                                         switches=tuple(switches)))
            for s in switches:
                if self.curve_of_switch.get(s, cidx) != cidx:
                    raise InternalInconsistency("switch on two pole curves")
                self.curve_of_switch[s] = cidx
            for i in edges:
                self.curve_of_pole_edge[i] = cidx
        for s in self.switches:
            if s not in self.curve_of_switch:
                raise InternalInconsistency("switch missed by pole curves")

    # -------------------------------------------------- ladder handedness

    def _orient_ladders(self):
        """Attach pole curves to ladders and hand the curves."""
        curves_of_ladder = [dict() for _ in self.ladders]
        for key in self.tip:
            lad = self.ladder_of[key]
            c = self.curve_of_pole_edge[self.pole_edge_of[key]]
            curves_of_ladder[lad][c] = curves_of_ladder[lad].get(c, 0) + 1
        for lad in self.ladders:
            cs = sorted(curves_of_ladder[lad.index])
            if len(cs) != 2:
                raise InternalInconsistency(
                    "ladder does not touch exactly two pole curves")
            lad.curves = tuple(cs)
            for c in cs:
                cur = self.curves[c]
                if lad.up:
                    if cur.up_ladder not in (-1, lad.index):
                        raise InternalInconsistency("pole curve with two "
                                                    "upward ladders")
                    cur.up_ladder = lad.index
                else:
                    if cur.down_ladder not in (-1, lad.index):
                        raise InternalInconsistency("pole curve with two "
                                                    "downward ladders")
                    cur.down_ladder = lad.index
        for cur in self.curves:
            if cur.up_ladder < 0 or cur.down_ladder < 0:
                raise InternalInconsistency("pole curve missing a ladder")

        # Handedness from the apex picture of each downward tip: in the
        # drawn rotation the gap before the pi corner is the tip's upper
        # right side.  A pole there puts the curve right of the core in
        # the drawing, which is the observer's left from inside.
        for cur in self.curves:
            votes = set()
            for key in self.ladders[cur.down_ladder].tips:
                if self.curve_of_pole_edge[self.pole_edge_of[key]] != cur.index:
                    continue
                votes.add(LEFT if self._pole_is_before_apex(key) else RIGHT)
            if len(votes) != 1:
                raise InternalInconsistency(
                    "pole curve with mixed handedness votes")
            cur.handed = votes.pop()
        for lad in self.ladders:
            h = {self.curves[c].handed for c in lad.curves}
            if h != {LEFT, RIGHT}:
                raise InternalInconsistency(
                    "ladder without one pole curve of each hand")
            for c in lad.curves:
                if self.curves[c].handed == LEFT:
                    lad.left_pole = c
                else:
                    lad.right_pole = c

    def _pole_is_before_apex(self, key):
        t, v = key
        tip = self.tip[key]
        apex = (t, v, tip.face_00)
        sw = self.corner_end[apex]
        corners, gaps = self.rotation[sw]
        j = corners.index(apex)
        pole_cls = self._side_class((t, v, self.pole_face[key]))
        before = self._side_class(gaps[j - 1]) == pole_cls
        after = self._side_class(gaps[j]) == pole_cls
        if before == after:
            raise InternalInconsistency("apex gaps do not flank the pole")
        return before

    # ------------------------------------------------------ veer, fans

    def _veer_and_fans(self):
        tri = self.tri
        self.veer = []
        for e in range(len(tri.edge_classes)):
            hands = [self.curves[self.curve_of_switch[(e, end)]].handed
                     for end in (0, 1)]
            if hands[0] != hands[1]:
                raise InconsistentVeer(
                    "edge %d ends on pole curves of opposite handedness" % e)
            self.veer.append(hands[0])
        self.hinge = []
        for t in range(tri.n):
            top = tri.edge_index[(t, tri.top_slot[t])]
            bot = tri.edge_index[(t, tri.bottom_slot[t])]
            self.hinge.append(self.veer[top] != self.veer[bot])
        for e in range(len(tri.edge_classes)):
            for tets, _ in self.fans(e):
                if not tets:
                    raise NotPseudohyperbolic(
                        "edge with circularly adjacent pi corners",
                        witness={"edge": e})

    def fans(self, e: int):
        """The two runs of flat corners around edge e, with length tags."""
        star = self.tri.edge_star(e)
        d = len(star.corners)

        def run(i, j):
            out = []
            k = (i + 1) % d
            while k != j:
                out.append(star.corners[k][0])
                k = (k + 1) % d
            return tuple(out)

        fan_a = run(star.below, star.above)
        fan_b = run(star.above, star.below)
        tag = lambda f: "short" if len(f) == 1 else "long"
        return ((fan_a, tag(fan_a)), (fan_b, tag(fan_b)))

    # ------------------------------------------------- peripheral basis

    def _crossing(self, key, f):
        """Crossing datum for leaving tip `key` through its side f."""
        t, v = key
        fc = self.tri.face_index[(t, f)]
        sign = 1 if self.tri.is_top_face(t, f) else -1
        return (fc, sign)

    def _pole_crossing_direction(self, key, curve):
        """+1 when leaving tip `key` across `curve` moves drawn-rightward."""
        lad = self.ladders[self.ladder_of[key]]
        if lad.up:
            return 1 if self.curves[curve].handed == RIGHT else -1
        return 1 if self.curves[curve].handed == LEFT else -1

    def _build_bases(self):
        self.bases = []
        for c in range(self.tri.num_cusps):
            self.bases.append(self._basis_for_cusp(c))

    def _ladder_order(self, cusp):
        lads = [l.index for l in self.ladders if l.cusp == cusp]
        start = min(lads, key=lambda i: min(self.ladders[i].tips))
        order = [start]
        exit_curves = [min(self.ladders[start].curves)]
        while True:
            cur = self.curves[exit_curves[-1]]
            lad = self.ladders[order[-1]]
            nxt = cur.down_ladder if lad.up else cur.up_ladder
            if nxt == start:
                break
            order.append(nxt)
            a, b = self.ladders[nxt].curves
            exit_curves.append(b if a == exit_curves[-1] else a)
        if len(order) != len(lads) or len(order) % 2 != 0:
            raise InternalInconsistency("ladders of one cusp do not close "
                                        "into a single alternating cycle")
        if set(self.ladders[start].curves) != {exit_curves[0],
                                               exit_curves[-1]}:
            raise InternalInconsistency("ladder cycle does not close on "
                                        "the starting ladder's curves")
        return order, exit_curves

    def _basis_for_cusp(self, cusp):
        order, exits = self._ladder_order(cusp)
        k = len(order)
        # exits[i] separates order[i] from order[i+1]; the start edge lies
        # on the curve between the last ladder and the first
        e_start = min(self.curves[exits[-1]].edges)
        side0, side1 = self.pole_edges[e_start]
        entry = (side0[0], side0[1])
        if self.ladder_of[entry] != order[0]:
            entry = (side1[0], side1[1])
        if self.ladder_of[entry] != order[0]:
            raise InternalInconsistency("start pole edge misses the "
                                        "first ladder")
        mu_word = []
        mu_tips = []
        direction = None
        for i in range(k):
            key = entry
            steps = 0
            while True:
                mu_tips.append(key)
                own_edge = self.pole_edge_of[key]
                if i == k - 1:
                    done = own_edge == e_start
                else:
                    done = self.curve_of_pole_edge[own_edge] == exits[i]
                if done:
                    break
                mu_word.append(self._crossing(
                    key, self.rung_in_face[key]))
                key = self.succ[key]
                steps += 1
                if steps > len(self.tip):
                    raise InternalInconsistency("transversal walk lost")
            d = self._pole_crossing_direction(
                key, self.curve_of_pole_edge[self.pole_edge_of[key]])
            if direction is None:
                direction = d
            elif d != direction:
                raise InternalInconsistency("transversal changes direction")
            mu_word.append(self._crossing(key, self.pole_face[key]))
            t2, v2, _ = self._partner_side(
                (key[0], key[1], self.pole_face[key]))
            entry = (t2, v2)
        if entry != mu_tips[0]:
            raise InternalInconsistency("transversal does not close up")

        # lam: the core of an upward ladder, which crosses its own rungs
        # positively; reverse it when mu runs drawn-leftward so that the
        # pair (mu, lam) has intersection +1
        ups = [self.ladders[i] for i in order if self.ladders[i].up]
        lam_lad = min(ups, key=lambda l: min(l.tips))
        first = min(lam_lad.tips)
        lam_tips = []
        lam_word = []
        key = first
        while True:
            lam_tips.append(key)
            step = self._crossing(key, self.rung_in_face[key])
            if step[1] != 1:
                raise InternalInconsistency("upward core crossing a rung "
                                            "downward")
            lam_word.append(step)
            key = self.succ[key]
            if key == first:
                break
        if direction < 0:
            lam_word = [(fc, -s) for (fc, s) in reversed(lam_word)]
            lam_tips = list(reversed(lam_tips))
        return CuspBasis(cusp=cusp, mu=tuple(mu_word), lam=tuple(lam_word),
                         mu_tips=tuple(mu_tips), lam_tips=tuple(lam_tips),
                         ladder_order=tuple(order))

    # ---------------------------------------------------------- queries

    def num_ladders(self, cusp: int) -> int:
        return sum(1 for l in self.ladders if l.cusp == cusp)

    def prongs(self, cusp: int, slope) -> Fraction:
        """Spinning count of the slope: half its crossings with the poles."""
        p, _ = slope
        return Fraction(self.num_ladders(cusp) * abs(p), 2)

    def peripheral_cycle(self, cusp: int, p: int, q: int):
        """Face chain of p*mu + q*lam as a vector over face classes."""
        z = [0] * len(self.tri.face_classes)
        basis = self.bases[cusp]
        for fc, s in basis.mu:
            z[fc] += p * s
        for fc, s in basis.lam:
            z[fc] += q * s
        return z

    def ladderpole_slope(self, cusp: int):
        return (0, 1)


@dataclass(frozen=True)
class Slope:
    cusp: int
    coordinates: tuple


@dataclass
class BoundaryTrack:
    """The cusp cross section before any veering checks.

    adjacency pairs each tip side with the side it is glued to; switches
    are the ends of the edge classes meeting this cusp.
    """

    cusp: int
    tips: tuple
    adjacency: dict
    switches: tuple
    tri: TautTriangulation


@dataclass
class VeerData:
    veer: dict      # edge class -> "left" | "right"
    hinge: dict     # tetrahedron -> "hinge" | "non-hinge"
    fans: dict      # edge class -> ((tets, tag), (tets, tag))


def boundary_track(tri: TautTriangulation, cusp: int) -> BoundaryTrack:
    """Tips and side pairings of one cusp.  Never raises on taut input."""
    tips = []
    adjacency = {}
    for t in range(tri.n):
        top = set(EDGE_VERTS[tri.top_slot[t]])
        for v in range(4):
            if tri.cusp_index[(t, v)] != cusp:
                continue
            up = v in top
            pi_slot = tri.top_slot[t] if up else tri.bottom_slot[t]
            a, b = EDGE_VERTS[pi_slot]
            x_pi = b if a == v else a
            zero = tuple(f for f in range(4) if f not in (v, x_pi))
            tips.append(Tip(tet=t, vert=v, cusp=cusp, up=up,
                            face_00=x_pi, faces_0pi=zero))
            for f in range(4):
                if f == v:
                    continue
                t2, f2, p = tri.glue[t][f]
                adjacency[(t, v, f)] = (t2, p[v], f2)
    switches = []
    for e, orbit in enumerate(tri.edge_classes):
        star = tri.edge_star(e)
        t0, u0, v0 = star.corners[0]
        for end, vert in ((0, u0), (1, v0)):
            if tri.cusp_index[(t0, vert)] == cusp:
                switches.append((e, end))
    return BoundaryTrack(cusp=cusp, tips=tuple(tips), adjacency=adjacency,
                         switches=tuple(switches), tri=tri)


def ladder_decomposition(track: BoundaryTrack):
    """Ladders of one cusp; raises NotPseudohyperbolic with a witness."""
    cs = CuspStructure(track.tri)
    return [lad for lad in cs.ladders if lad.cusp == track.cusp]


def is_veering(tri: TautTriangulation):
    """Whether the taut angles are veering, with a per-cusp report."""
    try:
        cs = CuspStructure(tri)
    except (NotPseudohyperbolic, InconsistentVeer) as err:
        report = {"error": str(err),
                  "witness": getattr(err, "witness", None)}
        return False, report
    report = {}
    for c in range(tri.num_cusps):
        lads = [lad for lad in cs.ladders if lad.cusp == c]
        report[c] = {
            "ladders": len(lads),
            "triangles_per_ladder": [len(lad.tips) for lad in lads],
            "ladderpole_slope": cs.ladderpole_slope(c),
        }
    return True, report


def veer_and_hinge(tri: TautTriangulation) -> VeerData:
    cs = CuspStructure(tri)
    veer = {e: cs.veer[e] for e in range(len(tri.edge_classes))}
    hinge = {t: "hinge" if cs.hinge[t] else "non-hinge"
             for t in range(tri.n)}
    fans = {e: cs.fans(e) for e in range(len(tri.edge_classes))}
    return VeerData(veer=veer, hinge=hinge, fans=fans)


def prongs(track: BoundaryTrack, s) -> int:
    """i_g(s, union of ladderpoles) / 2, computed from slope coordinates."""
    if isinstance(s, Slope):
        if s.cusp != track.cusp:
            raise ValueError("slope lives on a different cusp")
        p, q = s.coordinates
    else:
        p, q = s
    cs = CuspStructure(track.tri)
    val = cs.prongs(track.cusp, (p, q))
    assert val.denominator == 1
    return int(val)


def parse_filling(spec: str):
    """Parse one "cusp=p/q" filling instruction."""
    m = re.fullmatch(r"\s*(\d+)\s*=\s*(-?\d+)\s*/\s*(-?\d+)\s*", spec)
    if not m:
        raise ParseError("filling must look like CUSP=P/Q, got %r" % spec)
    c, p, q = (int(g) for g in m.groups())
    if p == 0 and q == 0:
        raise ParseError("slope 0/0 names no curve")
    from math import gcd
    if gcd(p, q) != 1:
        raise ParseError("slope %d/%d is not primitive" % (p, q))
    return c, (p, q)


def parse_fillings(specs, num_cusps: int):
    out = {}
    for spec in specs:
        c, pq = parse_filling(spec)
        if c >= num_cusps or c < 0:
            raise ParseError("cusp %d out of range" % c)
        if c in out:
            raise ParseError("cusp %d filled twice" % c)
        out[c] = pq
    return out
