"""Dual graph and face-level data of the two branched surfaces.

The loop tests lean on a brute-force enumerator that rebuilds the page
stacks around every edge from raw star data, so the production digraph
walks are compared against the definitions, not against themselves.
"""

import pytest

from cover_util import cyclic_cover
from test_tri import CENSUS, FIG8, SISTER
from veernorm import dual
from veernorm.cusps import CuspStructure, veer_and_hinge
from veernorm.errors import NotStronglyConnected, VeernormError
from veernorm.tri import EDGE_VERTS, from_census_string


def records():
    yield from_census_string(FIG8)
    yield from_census_string(SISTER)
    yield cyclic_cover(from_census_string(FIG8), 2)
    yield cyclic_cover(from_census_string(SISTER), 3)


def census_records():
    for sig in CENSUS:
        yield from_census_string(sig)
    yield cyclic_cover(from_census_string(FIG8), 2)
    yield cyclic_cover(from_census_string(SISTER), 3)


# ----------------------------------------------------------------- oracle

def canon_slot(tri, t, f, u, v):
    """Edge {u, v} of face f of tet t as a slot of the face chart."""
    fc = tri.face_index[(t, f)]
    tb, fb = tri.face_rep_below(fc)
    if (t, f) != (tb, fb):
        p = tri.glue[t][f][2]
        u, v = p[u], p[v]
    verts = tri.face_ccw(tb, fb)
    for j in range(3):
        if {verts[j], verts[(j + 1) % 3]} == {u, v}:
            return j
    raise AssertionError("edge not on face")


def brute_pages(tri):
    """(face, slot) -> (edge, side, height, side size), from the stars."""
    pos = {}
    for e in range(len(tri.edge_classes)):
        star = tri.edge_star(e)
        d = len(star.corners)

        def arc(i, j):
            while i != j:
                yield i
                i = (i + 1) % d

        for side, (i, j) in enumerate(
                ((star.below, star.above), (star.above, star.below))):
            ks = list(arc(i, j))
            if side == 1:
                ks.reverse()
            for h, k in enumerate(ks):
                t, f = star.faces[k]
                _, u, v = star.corners[k]
                key = (tri.face_index[(t, f)], canon_slot(tri, t, f, u, v))
                assert key not in pos
                pos[key] = (e, side, h, len(ks))
    assert len(pos) == 3 * len(tri.face_classes)
    return pos


def brute_normal_loops(tri, max_len):
    """Every primitive normal loop of at most max_len steps, up to rotation.

    Powers of a shorter loop trace the same curve again and are dropped.
    A walk may revisit nodes freely, including the one it is rooted at.
    """
    pos = brute_pages(tri)
    of_edge = {}
    for key, (e, _, _, _) in pos.items():
        of_edge.setdefault(e, []).append(key)
    nodes = sorted((fc, a, b) for fc in range(len(tri.face_classes))
                   for a in range(3) for b in range(3) if a != b)
    order = {v: i for i, v in enumerate(nodes)}

    def succs(node):
        fc, _, b = node
        for f2, a2 in of_edge[pos[(fc, b)][0]]:
            if (f2, a2) != (fc, b):
                for b2 in range(3):
                    if b2 != a2:
                        yield (f2, a2, b2)

    out = set()

    def add(w):
        if any(w == w[i:] + w[:i] for i in range(1, len(w))):
            return
        out.add(min(w[i:] + w[:i] for i in range(len(w))))

    def dfs(v, path):
        for w in succs(path[-1]):
            if order[w] < order[v]:
                continue
            if w == v:
                add(tuple(path))
            if len(path) < max_len:
                dfs(v, path + [w])

    for v in nodes:
        dfs(v, [v])
    return pos, out


def crossings(pos, steps):
    for i, (fc, _, b) in enumerate(steps):
        f2, a2, _ = steps[(i + 1) % len(steps)]
        e1, _, h1, z1 = pos[(fc, b)]
        e2, _, h2, z2 = pos[(f2, a2)]
        assert e1 == e2
        yield h1, z1, h2, z2


def is_stable(pos, steps):
    return all(h1 < z1 - 1 and h2 == z2 - 1
               for h1, z1, h2, z2 in crossings(pos, steps))


def is_shallow_stable(pos, steps):
    return all(h1 == z1 - 2 and h2 == z2 - 1
               for h1, z1, h2, z2 in crossings(pos, steps))


def is_unstable(pos, steps):
    return all(h1 == 0 and h2 > 0 for h1, z1, h2, z2 in crossings(pos, steps))


def is_shallow_unstable(pos, steps):
    return all(h1 == 0 and h2 == 1 for h1, z1, h2, z2 in crossings(pos, steps))


def is_branch(pos, steps):
    return all(h1 == 0 and h2 == z2 - 1
               for h1, z1, h2, z2 in crossings(pos, steps))


def brute_stacks(tri):
    """(edge, side) -> pages bottom to top, regrouped from brute_pages."""
    stacks = {}
    for key, (e, side, h, z) in brute_pages(tri).items():
        stacks.setdefault((e, side), dict())[h] = key
    return {k: tuple(d[h] for h in range(len(d))) for k, d in stacks.items()}


def simulate_pushes(tri, steps):
    """Independent pushup/pushdown of a branch loop through the fans."""
    pos = brute_pages(tri)
    stacks = brute_stacks(tri)
    up, down = [], []
    for i, (fc, _, b) in enumerate(steps):
        f2, a2, _ = steps[(i + 1) % len(steps)]
        e, s1, h1, _ = pos[(fc, b)]
        _, s2, h2, _ = pos[(f2, a2)]
        up.extend(p[0] for p in stacks[(e, s1)][h1 + 1:])
        down.extend(p[0] for p in stacks[(e, s2)][:h2])
    return tuple(up), tuple(down)


# ------------------------------------------------------------- dual graph

def test_dual_graph_fig8():
    # direct construction: both tets of the pair glue every face to the
    # other tet, so the four dual edges split two and two by direction
    g = dual.dual_graph(from_census_string(FIG8))
    assert g.n == 2
    assert len(g.tails) == 4
    pairs = sorted(zip(g.tails, g.heads))
    assert pairs == [(0, 1), (0, 1), (1, 0), (1, 0)]


def test_dual_graph_invariants():
    for tri in records():
        g = dual.dual_graph(tri)
        assert len(g.tails) == len(tri.face_classes)
        for fc in range(len(g.tails)):
            assert g.tails[fc] == tri.tet_below_face(fc)
            assert g.heads[fc] == tri.tet_above_face(fc)
        for t in range(g.n):
            assert len(g.out_edges[t]) == 2
            assert len(g.in_edges[t]) == 2
        # connected digraph: rank of the cycle space is E - V + 1
        assert g.cycle_space_rank() == tri.n + 1


def test_disconnected_graph_rejected():
    g = dual.DualGraph(n=2, tails=(0, 0, 1, 1), heads=(0, 0, 1, 1))
    assert not dual.is_strongly_connected(g)
    assert issubclass(NotStronglyConnected, VeernormError)


def test_gamma_cycle_helpers():
    tri = from_census_string(FIG8)
    g = dual.dual_graph(tri)
    pairs = sorted(range(4), key=lambda fc: (g.tails[fc], g.heads[fc]))
    cyc = (pairs[0], pairs[2])  # a 0->1 edge then a 1->0 edge
    assert g.is_cycle(cyc)
    assert set(g.cycle_tets(cyc)) == {0, 1}
    assert not g.is_cycle((pairs[0], pairs[1]))


# ------------------------------------------------------------ face tracks

def test_face_tracks_dual_position():
    # the switch targets straight from the definition: the stable track
    # points at the bottom edge of the tet above, the unstable track at
    # the top edge of the tet below
    for tri in records():
        data = dual.face_tracks(tri)
        for fc in range(len(tri.face_classes)):
            tr = data[fc]
            ta = tri.tet_above_face(fc)
            tb = tri.tet_below_face(fc)
            assert tr.stable_target == tri.edge_index[(ta, tri.bottom_slot[ta])]
            assert tr.unstable_target == tri.edge_index[(tb, tri.top_slot[tb])]
            assert tr.stable_slot != tr.unstable_slot


def test_face_tracks_veer_reconstruction():
    # two same-veer edges e1, e2 with e2 the ccw successor of e1: left
    # puts the stable switch on e1, right on e2, unstable the other way
    for tri in records():
        cs = CuspStructure(tri)
        data = dual.face_tracks(tri, veer_and_hinge(tri))
        for fc in range(len(tri.face_classes)):
            tr = data[fc]
            veers = [cs.veer[e] for e in tr.edges]
            assert len(set(veers)) == 2
            maj = max(set(veers), key=veers.count)
            i, j = (s for s in range(3) if veers[s] == maj)
            e1 = i if (i + 1) % 3 == j else j
            e2 = j if e1 == i else i
            if maj == "left":
                assert (tr.stable_slot, tr.unstable_slot) == (e1, e2)
            else:
                assert (tr.stable_slot, tr.unstable_slot) == (e2, e1)


def trichotomy_mismatches(tri, data=None):
    """Face-track tip labels against the ladder tiling, one face at a time.

    Returns [(face, tip position, track label, cusp label)] for every tip
    where the two routes disagree; empty means the trichotomy holds.
    """
    cs = CuspStructure(tri)
    if data is None:
        data = dual.face_tracks(tri)
    bad = []
    for fc in range(len(tri.face_classes)):
        tr = data[fc]
        for pos in range(3):
            tb, vb = tr.tip_below(pos)
            ta, va = tr.tip_above(pos)
            fb = tri.face_rep_below(fc)[1]
            fa = tri.face_rep_above(fc)[1]
            if cs.pole_face[(tb, vb)] == fb:
                assert cs.pole_face[(ta, va)] == fa
                truth = "ladderpole"
            elif cs.tip[(ta, va)].face_00 == fa:
                assert cs.ladders[cs.ladder_of[(ta, va)]].up
                truth = "rung-up"
            else:
                assert cs.tip[(tb, vb)].face_00 == fb
                assert not cs.ladders[cs.ladder_of[(tb, vb)]].up
                truth = "rung-down"
            if data.tip_type(fc, pos) != truth:
                bad.append((fc, pos, data.tip_type(fc, pos), truth))
    return bad


def test_tip_trichotomy():
    for tri in records():
        data = dual.face_tracks(tri)
        assert trichotomy_mismatches(tri, data) == []
        for fc in range(len(tri.face_classes)):
            labels = {data.tip_type(fc, pos) for pos in range(3)}
            assert labels == {"ladderpole", "rung-up", "rung-down"}


# ------------------------------------------------------------------ loops

def loop_steps(loops):
    return {lp.steps for lp in loops}


def test_stable_loops_fig8_frozen():
    tri = from_census_string(FIG8)
    pos, every = brute_normal_loops(tri, 4)
    assert len(every) == 2836
    want_stable = {w for w in every if is_stable(pos, w)}
    want_shallow = {w for w in every if is_shallow_stable(pos, w)}
    assert len(want_stable) == 90
    assert len(want_shallow) == 10

    got = dual.stable_loops(tri, 4)
    assert loop_steps(got) == want_stable
    assert {lp.steps for lp in got if lp.shallow_stable} == want_shallow
    # a shallow stable loop of length <= 4 exists, here already at 2
    assert min(len(w) for w in want_shallow) == 2


def test_unstable_loops_fig8_frozen():
    tri = from_census_string(FIG8)
    pos, every = brute_normal_loops(tri, 4)
    want = {w for w in every if is_unstable(pos, w)}
    want_shallow = {w for w in every if is_shallow_unstable(pos, w)}
    assert (len(want), len(want_shallow)) == (90, 10)

    got = dual.unstable_loops(tri, 4)
    assert loop_steps(got) == want
    assert {lp.steps for lp in got if lp.shallow_unstable} == want_shallow


def test_loops_sister_against_brute():
    tri = from_census_string(SISTER)
    pos, every = brute_normal_loops(tri, 4)
    assert len(every) == 2836
    assert loop_steps(dual.stable_loops(tri, 4)) == \
        {w for w in every if is_stable(pos, w)}
    assert loop_steps(dual.unstable_loops(tri, 4)) == \
        {w for w in every if is_unstable(pos, w)}


def test_loop_flags_recheck():
    # flags carried by returned loops agree with a direct definition
    # recheck, and shallow implies the plain flag
    for sig in (FIG8, SISTER):
        tri = from_census_string(sig)
        pos = brute_pages(tri)
        for lp in dual.stable_loops(tri, 3) + dual.unstable_loops(tri, 3):
            assert lp.stable == is_stable(pos, lp.steps)
            assert lp.unstable == is_unstable(pos, lp.steps)
            assert lp.shallow_stable == is_shallow_stable(pos, lp.steps)
            assert lp.shallow_unstable == is_shallow_unstable(pos, lp.steps)
            if lp.shallow_stable:
                assert lp.stable
            if lp.shallow_unstable:
                assert lp.unstable
            for i, (fc, a, b) in enumerate(lp.steps):
                assert a != b
                nxt = lp.steps[(i + 1) % len(lp.steps)]
                assert lp.edges[i] == pos[(fc, b)][0]
                assert pos[(nxt[0], nxt[1])][0] == lp.edges[i]


def test_branch_curves_fig8_frozen():
    tri = from_census_string(FIG8)
    pos, every = brute_normal_loops(tri, 4)
    want = {w for w in every if is_branch(pos, w)}
    assert len(want) == 16
    assert sorted(len(w) for w in want) == \
        [1, 1, 1, 1, 2, 2, 3, 3, 3, 3, 4, 4, 4, 4, 4, 4]

    got = dual.branch_curves(tri, 4)
    assert {bc.loop.steps for bc in got} == want
    for bc in got:
        assert bc.loop.stable and bc.loop.unstable


def test_branch_push_cycles():
    for tri in records():
        g = dual.dual_graph(tri)
        for bc in dual.branch_curves(tri, 4):
            up, down = simulate_pushes(tri, bc.loop.steps)
            assert bc.pushup == up
            assert bc.pushdown == down
            assert g.is_cycle(bc.pushup)
            assert g.is_cycle(bc.pushdown)


def test_branch_curves_default_bound():
    tri = from_census_string(FIG8)
    pos = brute_pages(tri)
    got = dual.branch_curves(tri)
    assert max(len(bc.loop.steps) for bc in got) <= 4 * tri.n
    assert {bc.loop.steps for bc in got if len(bc.loop.steps) <= 4} == \
        {bc.loop.steps for bc in dual.branch_curves(tri, 4)}
    for bc in got:
        assert is_branch(pos, bc.loop.steps)


def test_push_requires_matching_flag():
    tri = from_census_string(FIG8)
    lp = next(l for l in dual.stable_loops(tri, 2) if not l.unstable)
    with pytest.raises(ValueError):
        dual.pushdown_cycle(tri, lp)
    assert dual.pushup_cycle(tri, lp)


# ----------------------------------------------------------- branch cycles

def strand_succ(cycles):
    succ = {}
    for c in cycles:
        for i, f in enumerate(c):
            succ[f] = c[(i + 1) % len(c)]
    return succ


def test_branch_cycles_frozen():
    for sig, want_up, want_lo in (
            (FIG8, ((0, 1), (2, 3)), ((0, 3), (1, 2))),
            (SISTER, ((0, 3, 2, 1),), ((0, 1, 2, 3),)),
            ("dLQacccjsnk_200", ((0, 2, 1, 4, 3, 5),), ((0, 2, 1, 5, 3, 4),)),
            ("eLMkbcddddedde_2100",
             ((0, 1, 7, 6, 3, 2), (4, 5)), ((0, 2, 5, 6, 7, 4), (1, 3)))):
        tri = from_census_string(sig)
        assert dual.branch_cycles(tri, upper=True) == want_up
        assert dual.branch_cycles(tri, upper=False) == want_lo


def test_branch_cycles_partition_and_cross_on_hinges():
    for tri in census_records():
        g = dual.dual_graph(tri)
        cs = CuspStructure(tri)
        ft = dual.face_tracks(tri)
        succs = {}
        for upper in (True, False):
            cycles = dual.branch_cycles(tri, upper)
            assert sorted(f for c in cycles for f in c) == \
                sorted(range(len(tri.face_classes)))
            for c in cycles:
                assert g.is_cycle(c)
            succs[upper] = strand_succ(cycles)
        # the two germs agree exactly away from hinge tetrahedra
        for f in succs[True]:
            t = ft[f].above[0]
            assert (succs[True][f] == succs[False][f]) == (not cs.hinge[t])


def test_branch_cycles_meet_hinge_tets():
    # every smoothed branch curve passes through a hinge tetrahedron:
    # away from hinges the chosen equatorial edge has the other veer,
    # whose fan is long, and the strand climbs it to its hinge top
    for tri in census_records():
        g = dual.dual_graph(tri)
        cs = CuspStructure(tri)
        for upper in (True, False):
            for c in dual.branch_cycles(tri, upper):
                assert any(cs.hinge[t] for t in g.cycle_tets(c))


def test_two_sided_push_offs_run_along_branch_cycles():
    total = 0
    for tri in census_records():
        pages = dual.EdgePages(tri)
        up = strand_succ(dual.branch_cycles(tri, upper=True))
        lo = strand_succ(dual.branch_cycles(tri, upper=False))
        for bc in dual.branch_curves(tri, 4 if tri.n >= 5 else 5):
            if not dual.two_sided(pages, bc.loop):
                continue
            total += 1
            assert all(up[bc.pushup[i - 1]] == bc.pushup[i]
                       for i in range(len(bc.pushup)))
            assert all(lo[bc.pushdown[i - 1]] == bc.pushdown[i]
                       for i in range(len(bc.pushdown)))
    assert total == 30


def test_same_side_push_off_can_leave_branch_cycles():
    # a loop may exit an edge through the side it entered; the push-off
    # is still a dual cycle but need not stay smooth in the branch locus
    tri = from_census_string(FIG8)
    pages = dual.EdgePages(tri)
    up = strand_succ(dual.branch_cycles(tri, upper=True))
    same = [bc for bc in dual.branch_curves(tri, 4)
            if not dual.two_sided(pages, bc.loop)]
    assert ((0, 0, 2), (2, 2, 1)) in {bc.loop.steps for bc in same}
    broken = [bc for bc in same
              if any(up[bc.pushup[i - 1]] != bc.pushup[i]
                     for i in range(len(bc.pushup)))]
    assert broken


def test_one_edge_loop_push_off_misses_hinges():
    # the short fan here has no hinge tet, so the corrected statement
    # really needs the branch cycles, not bare push-offs
    tri = from_census_string("dLQacccjsnk_200")
    g = dual.dual_graph(tri)
    cs = CuspStructure(tri)
    bc = {b.loop.steps: b for b in dual.branch_curves(tri, 1)}[((2, 0, 2),)]
    assert bc.pushup == bc.pushdown == (2,)
    assert not any(cs.hinge[t] for t in g.cycle_tets(bc.pushup))
