"""Taut ideal triangulations: gluing tables, census strings, edge stars.

A tetrahedron has vertices 0..3; face f is the face opposite vertex f.
Edge slots follow the standard numbering

    0 = {0,1}, 1 = {0,2}, 2 = {0,3}, 3 = {1,2}, 4 = {1,3}, 5 = {2,3}

so slots e and 5-e are opposite.  A taut structure assigns each tetrahedron
one opposite pair of pi edges; the transverse orientation (which of the
pair is the top edge) is derived here, not stored in input records.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Optional

from .errors import ParseError, ValidationError

EDGE_VERTS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))

_SLOT = {}
for _i, (_u, _v) in enumerate(EDGE_VERTS):
    _SLOT[(_u, _v)] = _i
    _SLOT[(_v, _u)] = _i


def edge_slot(u: int, v: int) -> int:
    return _SLOT[(u, v)]


def psign(p) -> int:
    s = 1
    for i in range(4):
        for j in range(i + 1, 4):
            if p[i] > p[j]:
                s = -s
    return s


def pcompose(p, q):
    """(p o q)[i] = p[q[i]]"""
    return tuple(p[q[i]] for i in range(4))


def pinv(p):
    out = [0] * 4
    for i in range(4):
        out[p[i]] = i
    return tuple(out)


# Census strings index gluing permutations into S4 in lexicographic order.
PERMS_LEX = tuple(itertools.permutations(range(4)))

SCHARS = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789+-"
_SVAL = {c: i for i, c in enumerate(SCHARS)}


@dataclass
class EdgeStar:
    """The cyclic fan of tetrahedron corners around one edge class.

    corners[i] = (tet, u, v): the edge seen as the ordered pair (u, v) in
    that tetrahedron.  faces[i] is the (tet, face) we leave corner i through
    on the way to corner i+1.  below/above index the two pi corners: at
    `below` the edge is the tetrahedron's top edge (the tet sits under the
    edge), at `above` it is the bottom edge.  side_a and side_b list the
    faces of the two sides in bottom-to-top order as (class id, tet, face),
    always with the representative for which the face is a top face.
    """

    edge: int
    corners: list
    faces: list
    below: int
    above: int
    side_a: list
    side_b: list


class TautTriangulation:
    """Ideal triangulation with a taut angle structure.

    glue[t][f] = (t2, f2, perm) with perm a vertex map t -> t2, perm[f] = f2.
    pi_digit[t] in {0,1,2}: edge slots (digit, 5-digit) carry angle pi.
    Everything else (classes, orientations, stars) is derived.
    """

    def __init__(self, n: int, glue, pi_digit, name: str = ""):
        self.n = n
        self.name = name
        self.glue = glue
        self.pi_digit = list(pi_digit)
        self._stars: dict[int, EdgeStar] = {}
        self.validate()

    # ------------------------------------------------------------ structure

    def validate(self):
        n = self.n
        if n < 1 or len(self.glue) != n or len(self.pi_digit) != n:
            raise ValidationError("sizes inconsistent", axiom="shape")
        for t in range(n):
            if self.pi_digit[t] not in (0, 1, 2):
                raise ValidationError(
                    f"tet {t}: pi edges not an opposite pair", axiom="pi edges opposite")
            for f in range(4):
                g = self.glue[t][f]
                if g is None:
                    raise ValidationError(
                        f"face {f} of tet {t} unglued: boundary is not all tori",
                        axiom="edges unclosed")
                t2, f2, p = g
                if not (0 <= t2 < n) or p[f] != f2 or sorted(p) != [0, 1, 2, 3]:
                    raise ParseError(f"bad gluing at tet {t} face {f}")
                back = self.glue[t2][f2]
                if back is None or back[0] != t or back[1] != f or back[2] != pinv(p):
                    raise ValidationError(
                        f"gluing at tet {t} face {f} is not an involution",
                        axiom="involution")
                if t2 == t and f2 == f:
                    raise ValidationError(
                        f"face {f} of tet {t} glued to itself", axiom="involution")
        self._build_classes()
        self._orientations()
        self._coorientation()
        self._check_angles()
        self._check_stars()
        self._check_links()

    def _build_classes(self):
        n = self.n
        # face classes: orbits are just the glued pairs
        self.face_index = {}
        self.face_classes = []
        for t in range(n):
            for f in range(4):
                if (t, f) in self.face_index:
                    continue
                t2, f2, _ = self.glue[t][f]
                i = len(self.face_classes)
                self.face_classes.append(((t, f), (t2, f2)))
                self.face_index[(t, f)] = i
                self.face_index[(t2, f2)] = i
        # edge classes: orbits of (tet, slot) under crossing any adjacent face
        self.edge_index = {}
        self.edge_classes = []
        for t in range(n):
            for e in range(6):
                if (t, e) in self.edge_index:
                    continue
                i = len(self.edge_classes)
                orbit = []
                stack = [(t, e)]
                self.edge_index[(t, e)] = i
                while stack:
                    tt, ee = stack.pop()
                    orbit.append((tt, ee))
                    u, v = EDGE_VERTS[ee]
                    for f in range(4):
                        if f in (u, v):
                            continue
                        t2, _, p = self.glue[tt][f]
                        key = (t2, edge_slot(p[u], p[v]))
                        if key not in self.edge_index:
                            self.edge_index[key] = i
                            stack.append(key)
                self.edge_classes.append(orbit)
        # cusps: orbits of (tet, vertex)
        self.cusp_index = {}
        self.cusps = []
        for t in range(n):
            for v in range(4):
                if (t, v) in self.cusp_index:
                    continue
                i = len(self.cusps)
                orbit = []
                stack = [(t, v)]
                self.cusp_index[(t, v)] = i
                while stack:
                    tt, vv = stack.pop()
                    orbit.append((tt, vv))
                    for f in range(4):
                        if f == vv:
                            continue
                        t2, _, p = self.glue[tt][f]
                        key = (t2, p[vv])
                        if key not in self.cusp_index:
                            self.cusp_index[key] = i
                            stack.append(key)
                self.cusps.append(orbit)
        self.num_cusps = len(self.cusps)

    def _orientations(self):
        # sign[t] = +-1 with gluings orientation-reversing on the boundary
        n = self.n
        sign = [0] * n
        sign[0] = 1
        stack = [0]
        while stack:
            t = stack.pop()
            for f in range(4):
                t2, _, p = self.glue[t][f]
                want = -sign[t] * psign(p)
                if sign[t2] == 0:
                    sign[t2] = want
                    stack.append(t2)
                elif sign[t2] != want:
                    raise ValidationError("manifold is not orientable",
                                          axiom="orientable")
        if 0 in sign:
            raise ValidationError("triangulation is not connected", axiom="connected")
        self.sign = sign

    def _coorientation(self):
        # x[t] = 0 when the top edge is slot pi_digit[t], 1 for slot 5-digit.
        # A face is a top face iff its index lies on the bottom edge.
        n = self.n
        x = [None] * n
        x[0] = 0
        stack = [0]

        def top_slot(t, xt):
            d = self.pi_digit[t]
            return d if xt == 0 else 5 - d

        def is_top_face(t, f, xt):
            return f in EDGE_VERTS[5 - top_slot(t, xt)]

        while stack:
            t = stack.pop()
            for f in range(4):
                t2, f2, _ = self.glue[t][f]
                # top face of t must meet a bottom face of t2
                here_top = is_top_face(t, f, x[t])
                want = next(b for b in (0, 1)
                            if is_top_face(t2, f2, b) != here_top)
                if x[t2] is None:
                    x[t2] = want
                    stack.append(t2)
                elif x[t2] != want:
                    raise ValidationError(
                        "taut structure is not transversely orientable",
                        axiom="coorientation")
        self.top_slot = [top_slot(t, x[t]) for t in range(n)]
        self.bottom_slot = [5 - s for s in self.top_slot]

    def is_top_face(self, t: int, f: int) -> bool:
        return f in EDGE_VERTS[self.bottom_slot[t]]

    def top_faces(self, t: int):
        return EDGE_VERTS[self.bottom_slot[t]]

    def bottom_faces(self, t: int):
        return EDGE_VERTS[self.top_slot[t]]

    def _check_angles(self):
        for i, orbit in enumerate(self.edge_classes):
            pis = [(t, e) for (t, e) in orbit
                   if e == self.top_slot[t] or e == self.bottom_slot[t]]
            if len(pis) != 2:
                raise ValidationError(
                    f"edge class {i} has angle sum {len(pis)}*pi, not 2*pi",
                    axiom="angle sum")

    def _check_stars(self):
        for e, orbit in enumerate(self.edge_classes):
            star = self.edge_star(e)
            if len(star.corners) != len(orbit):
                raise ValidationError(
                    f"edge class {e} is identified with itself in reverse",
                    axiom="edge star")
            for _, t, f in star.side_a + star.side_b:
                assert self.is_top_face(t, f)
        # the intrinsic ccw cycle of a face must be a class invariant
        for (t, f), (t2, f2) in self.face_classes:
            p = self.glue[t][f][2]
            a, b, c = self.face_ccw(t, f)
            img = (p[a], p[b], p[c])
            other = self.face_ccw(t2, f2)
            rots = {other, other[1:] + other[:1], other[2:] + other[:2]}
            assert img in rots, "face orientation rule is inconsistent"

    def _check_links(self):
        # cusp link: triangles = tips, vertices = edge-end orbits; chi must be 0
        end_index = {}
        n_ends_at = [0] * self.num_cusps
        for t in range(self.n):
            for e in range(6):
                for v in EDGE_VERTS[e]:
                    if (t, e, v) in end_index:
                        continue
                    cusp = self.cusp_index[(t, v)]
                    n_ends_at[cusp] += 1
                    idx = len(end_index)
                    stack = [(t, e, v)]
                    end_index[(t, e, v)] = idx
                    while stack:
                        tt, ee, vv = stack.pop()
                        uu, ww = EDGE_VERTS[ee]
                        other = ww if vv == uu else uu
                        for f in range(4):
                            if f in (vv, other):
                                continue
                            t2, _, p = self.glue[tt][f]
                            key = (t2, edge_slot(p[vv], p[other]), p[vv])
                            if key not in end_index:
                                end_index[key] = idx
                                stack.append(key)
        for c, orbit in enumerate(self.cusps):
            chi = n_ends_at[c] - len(orbit) // 2
            if len(orbit) % 2 or chi != 0:
                raise ValidationError(
                    f"cusp {c} link has chi = {chi}, not a torus",
                    axiom="torus links")
        # ideal triangulation bookkeeping these imply
        assert len(self.face_classes) == 2 * self.n
        assert len(self.edge_classes) == self.n

    # ----------------------------------------------------------- taut data

    def tet_above_face(self, fc: int) -> int:
        """The tetrahedron having this face class as a bottom face."""
        for (t, f) in self.face_classes[fc]:
            if not self.is_top_face(t, f):
                return t
        raise AssertionError("face with two top sides")

    def tet_below_face(self, fc: int) -> int:
        for (t, f) in self.face_classes[fc]:
            if self.is_top_face(t, f):
                return t
        raise AssertionError("face with two bottom sides")

    def face_rep_above(self, fc: int):
        """(t, f) with the face a bottom face of t."""
        for (t, f) in self.face_classes[fc]:
            if not self.is_top_face(t, f):
                return (t, f)
        raise AssertionError

    def face_rep_below(self, fc: int):
        for (t, f) in self.face_classes[fc]:
            if self.is_top_face(t, f):
                return (t, f)
        raise AssertionError

    def face_ccw(self, t: int, f: int):
        """Vertices of face f of tet t in its intrinsic ccw cycle.

        Fixed by sign(f,a,b,c) = sign[t] for top faces and -sign[t] for
        bottom faces; the cycle is a class invariant of the glued face.
        """
        a, b, c = (v for v in range(4) if v != f)
        want = self.sign[t] if self.is_top_face(t, f) else -self.sign[t]
        if psign((f, a, b, c)) == want:
            return (a, b, c)
        return (a, c, b)

    def edge_star(self, e: int) -> EdgeStar:
        if e in self._stars:
            return self._stars[e]
        t0, s0 = min(self.edge_classes[e])
        u0, v0 = EDGE_VERTS[s0]
        corners = []
        faces = []
        # exit face w2 from corner (t, u, v) entered via w1 has
        # sign(u, v, w1, w2) = sign[t]; any start face works for a cycle
        t, u, v = t0, u0, v0
        w1, w2 = (w for w in range(4) if w not in (u, v))
        if psign((u, v, w1, w2)) != self.sign[t]:
            w1, w2 = w2, w1
        start = (t, u, v, w1)
        while True:
            corners.append((t, u, v))
            faces.append((t, w2))
            t2, _, p = self.glue[t][w2]
            t, u, v, w1 = t2, p[u], p[v], p[w2]
            w2 = next(w for w in range(4) if w not in (u, v, w1))
            if (t, u, v, w1) == start:
                break
        below = above = None
        for i, (tt, uu, vv) in enumerate(corners):
            s = edge_slot(uu, vv)
            if s == self.top_slot[tt]:
                below = i
            elif s == self.bottom_slot[tt]:
                above = i
        if below is None or above is None:
            raise AssertionError("pi corners missing from edge star")
        d = len(corners)

        def arc(i, j):
            out = []
            k = i
            while k != j:
                out.append(k)
                k = (k + 1) % d
            return out

        # side entries use the representative under the face (its top-face
        # side), so walking down side b we flip each exit to the other rep
        side_a = [(self.face_index[faces[k]],) + faces[k]
                  for k in arc(below, above)]
        side_b = []
        for k in arc(above, below):
            t2, f2, _ = self.glue[faces[k][0]][faces[k][1]]
            side_b.append((self.face_index[faces[k]], t2, f2))
        side_b.reverse()
        star = EdgeStar(edge=e, corners=corners, faces=faces,
                        below=below, above=above,
                        side_a=side_a, side_b=side_b)
        self._stars[e] = star
        return star

    # ------------------------------------------------------------------ io

    def to_json(self) -> dict:
        gl = []
        for t in range(self.n):
            for f in range(4):
                t2, f2, p = self.glue[t][f]
                gl.append([t, f, t2, f2, list(p)])
        return {
            "format": "taut-gluing-table/1",
            "name": self.name,
            "tetrahedra": self.n,
            "gluings": gl,
            "pi_edges": [[d, 5 - d] for d in self.pi_digit],
            "coorientation": list(self.top_slot),
        }


def from_json(obj) -> TautTriangulation:
    if isinstance(obj, str):
        try:
            obj = json.loads(obj)
        except json.JSONDecodeError as e:
            raise ParseError(f"bad json: {e}") from None
    if not isinstance(obj, dict) or obj.get("format") != "taut-gluing-table/1":
        raise ParseError("not a taut-gluing-table/1 record")
    try:
        n = int(obj["tetrahedra"])
        glue = [[None] * 4 for _ in range(n)]
        for t, f, t2, f2, p in obj["gluings"]:
            p = tuple(p)
            if glue[t][f] is not None and glue[t][f] != (t2, f2, p):
                raise ParseError(f"conflicting gluings for tet {t} face {f}")
            glue[t][f] = (t2, f2, p)
            back = (t, f, pinv(p))
            if glue[t2][f2] is not None and glue[t2][f2] != back:
                raise ParseError(f"conflicting gluings for tet {t2} face {f2}")
            glue[t2][f2] = back
        pi = []
        for pair in obj["pi_edges"]:
            a, b = sorted(pair)
            if b != 5 - a:
                raise ValidationError(
                    f"pi edges {pair} are not an opposite pair",
                    axiom="pi edges opposite")
            pi.append(a)
    except (KeyError, IndexError, TypeError, ValueError) as e:
        raise ParseError(f"malformed record: {e!r}") from None
    tri = TautTriangulation(n, glue, pi, name=obj.get("name", ""))
    if "coorientation" in obj and list(obj["coorientation"]) != tri.top_slot \
            and [5 - s for s in obj["coorientation"]] != tri.top_slot:
        raise ParseError("stored coorientation does not match the derived one")
    return tri


def from_census_string(line: str) -> TautTriangulation:
    """Decode `signature_angles`.

    The signature part is the standard isomorphism signature for closed-in
    ideal triangulations: size, then 2-bit facet actions packed three per
    character, then destination characters for the type-2 joins, then one
    permutation character each (lexicographic S4 index).  The angle part
    is one digit per tetrahedron selecting the pi edge pair.
    """
    line = line.strip()
    if "_" not in line:
        raise ParseError("census record needs signature_angles")
    sig, angles = line.rsplit("_", 1)
    if not sig or any(c not in _SVAL for c in sig):
        raise ParseError("bad signature characters")
    vals = [_SVAL[c] for c in sig]
    n = vals[0]
    if n == 0:
        raise ParseError("empty triangulation")
    if n >= 63:
        raise ParseError("extended size encoding not supported")
    pos = 1
    actions = []
    covered = 0
    bits = []
    while covered < 4 * n:
        if not bits:
            if pos >= len(vals):
                raise ParseError("signature truncated in facet actions")
            v = vals[pos]
            pos += 1
            bits = [v & 3, (v >> 2) & 3, (v >> 4) & 3]
        a = bits.pop(0)
        if a == 3:
            raise ParseError("unsupported facet action")
        actions.append(a)
        covered += 1 if a == 0 else 2
    if covered > 4 * n:
        raise ParseError("facet actions overrun")
    k = sum(1 for a in actions if a == 2)
    if pos + 2 * k != len(vals):
        raise ParseError("signature length mismatch")
    dests = vals[pos:pos + k]
    perms = vals[pos + k:pos + 2 * k]
    if any(d >= n for d in dests) or any(q >= 24 for q in perms):
        raise ParseError("signature indices out of range")

    glue = [[None] * 4 for _ in range(n)]
    used = 1
    ai = 0
    ti = 0
    for s in range(n):
        for f in range(4):
            if glue[s][f] is not None:
                continue
            if ai >= len(actions):
                raise ParseError("signature truncated")
            a = actions[ai]
            ai += 1
            if a == 0:
                continue  # boundary facet: left unglued, validation rejects
            if a == 1:
                if used >= n:
                    raise ParseError("signature references too many simplices")
                d = used
                used += 1
                ident = (0, 1, 2, 3)
                glue[s][f] = (d, f, ident)
                glue[d][f] = (s, f, ident)
            else:
                d = dests[ti]
                p = PERMS_LEX[perms[ti]]
                ti += 1
                if d >= used:
                    raise ParseError("join to an unseen simplex")
                f2 = p[f]
                if glue[d][f2] is not None:
                    raise ParseError("join target already glued")
                glue[s][f] = (d, f2, p)
                glue[d][f2] = (s, f, pinv(p))
    if used != n:
        raise ParseError("signature describes fewer simplices than declared")
    if len(angles) != n or any(c not in "012" for c in angles):
        raise ParseError("angle string must give one digit in 0..2 per tet")
    pi = [int(c) for c in angles]
    return TautTriangulation(n, glue, pi, name=line)


def load_record(text: str) -> TautTriangulation:
    """Accept either a census line or a json gluing table."""
    text = text.strip()
    if text.startswith("{"):
        return from_json(text)
    return from_census_string(text)
