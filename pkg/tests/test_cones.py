"""Direction cones, dualization, Euler class, and the norm face.

Flow cones are checked against a DFS enumeration of simple directed
cycles written here from scratch, and cone membership is decided twice,
by facet signs and by an exact feasibility LP, so the double-description
engine never certifies itself.
"""

import random
from fractions import Fraction

import pytest

from test_tri import CENSUS, FIG8
from veernorm.cones import (
    RationalCone,
    cone_from_generators,
    cone_from_inequalities,
    dual_cone,
    euler_class,
    flow_cone,
    homology_directions,
    norm_face,
    norm_value,
    same_cone,
)
from veernorm.dual import DualGraph, dual_graph
from veernorm.errors import ClassOutsideCone, UnfilledMode
from veernorm.homology import fill
from veernorm.linalg import cone_contains
from veernorm.tri import from_census_string

FILLED_FIXTURE = ("eLMkbcddddedde_2100", {0: (5, -9), 1: (5, 1)})

# extreme-ray count of the flow cone, equal to the simple cycle count
CYCLE_COUNTS = {
    FIG8: 4,
    "cPcbbbdxm_10": 4,
    "dLQacccjsnk_200": 5,
    "dLQbccchhsj_122": 8,
    "dLQbccchhfo_122": 8,
    "eLAkaccddjsnak_2001": 6,
    "eLAkbccddhhsqs_1220": 9,
    "eLMkbcddddedde_2100": 6,
    "fLLQcbecdeepuwsua_20102": 7,
    "gLLAQbecdfffhhnkqnc_120012": 33,
}

# unfilled direction cones in the emitted free basis
DIRECTIONS = {
    FIG8: ((1,),),
    "cPcbbbdxm_10": ((1,),),
    "dLQacccjsnk_200": ((-1,),),
    "dLQbccchhsj_122": ((1,),),
    "dLQbccchhfo_122": ((1,),),
    "eLAkaccddjsnak_2001": ((1,),),
    "eLAkbccddhhsqs_1220": ((-1,),),
    "eLMkbcddddedde_2100": ((-1, 0), (1, 2)),
    "fLLQcbecdeepuwsua_20102": ((-1, 2), (0, 1)),
    "gLLAQbecdfffhhnkqnc_120012": ((-1,),),
}


def simple_cycles(g):
    """Support vectors of the simple directed cycles, by plain DFS."""
    nf = len(g.tails)
    out = set()
    for start in range(g.n):
        stack = [(start, [], frozenset({start}))]
        while stack:
            v, path, seen = stack.pop()
            for f in range(nf):
                if g.tails[f] != v:
                    continue
                w = g.heads[f]
                if w == start:
                    vec = [0] * nf
                    for x in path + [f]:
                        vec[x] += 1
                    out.add(tuple(vec))
                elif w > start and w not in seen:
                    stack.append((w, path + [f], seen | {w}))
    return out


def test_quadrant_round_trip():
    C = cone_from_inequalities([(1, 0), (0, 1)], 2)
    assert sorted(C.generators) == [(0, 1), (1, 0)]
    assert C.lineality_dim == 0
    D = dual_cone(C)
    assert sorted(D.generators) == [(0, 1), (1, 0)]
    assert same_cone(C, dual_cone(D))


def test_degenerate_duals():
    full = cone_from_generators([(1, 0), (-1, 0), (0, 1), (0, -1)], 2)
    assert full.lineality_dim == 2 and full.generators == ()
    origin = dual_cone(full)
    assert origin.generators == () and origin.lineality_dim == 0
    assert same_cone(dual_cone(origin), full)
    assert origin.contains((0, 0)) and not origin.contains((1, 0))


def test_two_loop_digraph():
    g = DualGraph(n=1, tails=(0, 0), heads=(0, 0))
    C = flow_cone(g)
    assert sorted(C.generators) == [(0, 1), (1, 0)]
    assert C.lineality_dim == 0


def test_flow_cone_rays_are_simple_cycles():
    for sig in CENSUS:
        g = dual_graph(from_census_string(sig))
        C = flow_cone(g)
        assert set(C.generators) == simple_cycles(g)
        assert len(C.generators) == CYCLE_COUNTS[sig]
        assert C.lineality_dim == 0
        for ray in C.generators:
            assert all(isinstance(x, int) for x in ray)


def test_direction_cones_frozen():
    for sig, want in DIRECTIONS.items():
        ct = homology_directions(from_census_string(sig))
        assert ct.generators == want
        assert ct.lineality_dim == 0


def test_double_dual_is_identity():
    for sig in CENSUS:
        ct = homology_directions(from_census_string(sig))
        assert same_cone(ct, dual_cone(dual_cone(ct)))
    tri = from_census_string(FILLED_FIXTURE[0])
    ct = homology_directions(tri, FILLED_FIXTURE[1])
    assert same_cone(ct, dual_cone(dual_cone(ct)))


def test_membership_lp_agrees_with_facets():
    rng = random.Random(11)
    cones = []
    for sig in ("eLMkbcddddedde_2100", "fLLQcbecdeepuwsua_20102"):
        ct = homology_directions(from_census_string(sig))
        cones.append(ct)
        cones.append(dual_cone(ct))
    for C in cones:
        gens = list(C.generators) + list(C.lineality) + \
            [tuple(-x for x in l) for l in C.lineality]
        for _ in range(100):
            v = tuple(rng.randint(-10, 10) for _ in range(C.ambient_dim))
            assert C.contains(v) == cone_contains(gens, v)


def test_euler_class_from_cores():
    sig, fillings = FILLED_FIXTURE
    tri = from_census_string(sig)
    fh = fill(tri, fillings)
    assert fh.core_classes == (((1,), ()), ((3,), ()))
    ec = euler_class(tri, fillings)
    assert ec.per_cusp_index == {0: -3, 1: -3}
    # -3/2 * [core_0] - 3/2 * [core_1] = -3/2 - 9/2
    assert ec.h1_class == (Fraction(-6),)
    with pytest.raises(UnfilledMode):
        euler_class(tri, {})


def test_euler_index_matches_prongs():
    tri = from_census_string(FIG8)
    ec = euler_class(tri, {0: (2, 1)})
    assert ec.per_cusp_index == {0: -2}
    assert ec.h1_class == ()   # filled H1 has rank zero
    ec = euler_class(from_census_string("cPcbbbdxm_10"), {0: (3, 1)})
    assert ec.per_cusp_index == {0: -1}


def test_norm_face_filled_fixture():
    sig, fillings = FILLED_FIXTURE
    tri = from_census_string(sig)
    rep = norm_face(tri, fillings)
    assert rep.cone_sigma.generators == ((1,),)
    assert rep.face_codim == 0 and rep.face_dim == 0
    assert rep.sample_norms == (((1,), Fraction(6)),)
    ec = euler_class(tri, fillings)
    assert norm_value(ec, rep.cone_sigma, (0,)) == 0
    for k in range(1, 6):
        assert norm_value(ec, rep.cone_sigma, (k,)) == 6 * k
    with pytest.raises(ClassOutsideCone) as ei:
        norm_value(ec, rep.cone_sigma, (-1,))
    assert ei.value.certificate == (1,)


def test_norm_face_empty_face():
    # every direction dies in the filled homology, so sigma is empty
    rep = norm_face(from_census_string(FIG8), {0: (2, 1)})
    assert rep.cone_sigma.ambient_dim == 0
    assert rep.face_dim == -1
    assert rep.sample_norms == ()
