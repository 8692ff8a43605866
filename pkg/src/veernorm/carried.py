"""Surfaces carried by the two-skeleton.

A candidate surface is a nonnegative integer weight on each face class.
The weight vector is carried when, at every edge, the faces on the two
sides of the edge star carry equal totals; the sheets then stack in the
coorientation direction and glue up along the edges into an embedded
surface.  Each glued pair of sheet levels is a rod of the surface, and
the boundary multicurve on each cusp can be walked straight off the
stacking data: rod endpoints are the vertices, truncated sheet corners
are the arcs.

Boundary families are classified cusp by cusp.  A family is empty,
nulhomologous of ladderpole slope, parallel to a filling slope
(meridional), or, in unfilled mode only, transversal with some other
slope.  Filled mode caps each meridional family with disks in the
filling torus; a cap of slope s runs over prongs(s) upward-ladder rungs
and raises chi by one.  Anything else cannot be capped.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor, gcd
from typing import Optional

from .cones import dual_cone, euler_class, flow_cone, homology_directions
from .cusps import CuspStructure
from .dual import dual_graph
from .errors import (ClassOutsideCone, InternalInconsistency, NotCappable,
                     NotFoundWithinBudget, PreconditionFailed)
from .homology import fill
from .linalg import kernel_basis, simplex_solve, solve_integer
from .tri import edge_slot


def branch_matrix(tri):
    """One row per edge class: side-a face counts minus side-b counts.

    A weight vector is carried iff it is nonnegative and every row
    pairs to zero with it.  The rows span the same lattice as the face
    boundary map, so carried vectors are nonnegative relative cycles.
    """
    rows = []
    for e in range(len(tri.edge_classes)):
        star = tri.edge_star(e)
        row = [0] * len(tri.face_classes)
        for fc, _, _ in star.side_a:
            row[fc] += 1
        for fc, _, _ in star.side_b:
            row[fc] -= 1
        rows.append(row)
    return rows


@dataclass(frozen=True)
class WeightVector:
    """Validated carried weights, one per face class."""

    weights: tuple

    @classmethod
    def of(cls, tri, seq) -> "WeightVector":
        w = tuple(int(x) for x in seq)
        if len(w) != len(tri.face_classes):
            raise PreconditionFailed(
                f"expected {len(tri.face_classes)} weights, got {len(w)}")
        if any(x < 0 for x in w):
            raise PreconditionFailed("weights must be nonnegative")
        for e, row in enumerate(branch_matrix(tri)):
            if sum(r * x for r, x in zip(row, w)) != 0:
                raise PreconditionFailed(f"branch equation fails at edge {e}")
        return cls(weights=w)

    def __iter__(self):
        return iter(self.weights)

    def __len__(self):
        return len(self.weights)


@dataclass(frozen=True)
class BoundaryFamily:
    """Boundary components of a carried surface on one cusp.

    kind is "empty", "ladderpole", "meridional", or "transversal".
    net_class is the total boundary class in the (mu, lambda) basis of
    the cusp, up to one overall sign; slope is the primitive direction
    (the filling slope for meridional families).  rungs_up and
    rungs_down list per component how many upward- and downward-ladder
    rung arcs it traverses.
    """

    cusp: int
    kind: str
    net_class: tuple
    slope: Optional[tuple]
    components: int
    rungs_up: tuple
    rungs_down: tuple


@dataclass(frozen=True)
class Cap:
    """One family of meridional disks pushed into a filling torus."""

    cusp: int
    slope: tuple
    count: int
    rungs_each: int


@dataclass(frozen=True)
class CarriedSurface:
    weights: WeightVector
    boundary: tuple
    chi_unfilled: int
    caps: tuple
    chi_filled: int
    h2_class: tuple
    certificate: Optional[dict] = None

    def as_dict(self) -> dict:
        return {
            "weights": list(self.weights),
            "class": list(self.h2_class),
            "chi_unfilled": self.chi_unfilled,
            "chi_filled": self.chi_filled,
            "boundary": [
                {"cusp": f.cusp, "kind": f.kind,
                 "net_class": list(f.net_class),
                 "slope": None if f.slope is None else list(f.slope),
                 "components": f.components,
                 "rungs_up": list(f.rungs_up),
                 "rungs_down": list(f.rungs_down)}
                for f in self.boundary],
            "caps": [
                {"cusp": c.cusp, "slope": list(c.slope), "count": c.count,
                 "rungs_each": c.rungs_each}
                for c in self.caps],
            "certificate": self.certificate,
        }


def _arc(i, j, d):
    out, k = [], i
    while k != j:
        out.append(k)
        k = (k + 1) % d
    return out


def _edge_tables(tri, w):
    """Stacking data per edge plus the corner lookup for the walk.

    For each edge: side stacks of (star position, sheet) listed bottom
    to top, the level offset of each star position, and which side it
    sits on.  slot_table maps (tet, face slot, edge slot) to the edge,
    star position, and vertex-to-end map of the corner exiting through
    that face, registered under both representatives of the face.
    """
    info = {}
    slot_table = {}
    for e in range(len(tri.edge_classes)):
        star = tri.edge_star(e)
        d = len(star.corners)
        pos_a = _arc(star.below, star.above, d)
        pos_b = list(reversed(_arc(star.above, star.below, d)))
        ends = {}
        fcs = {}
        for k in range(d):
            _, u, v = star.corners[k]
            tf = star.faces[k]
            fcs[k] = tri.face_index[tf]
            ends[k] = (tf[0], tf[1], u, v)
            slot_table[(tf[0], tf[1], edge_slot(u, v))] = (e, k, {u: 0, v: 1})
            t2, f2, p = tri.glue[tf[0]][tf[1]]
            slot_table[(t2, f2, edge_slot(p[u], p[v]))] = (e, k, {p[u]: 0,
                                                                 p[v]: 1})
        stack_a, stack_b, off = [], [], {}
        for k in pos_a:
            off[k] = len(stack_a)
            stack_a.extend((k, s) for s in range(w[fcs[k]]))
        for k in pos_b:
            off[k] = len(stack_b)
            stack_b.extend((k, s) for s in range(w[fcs[k]]))
        if len(stack_a) != len(stack_b):
            raise InternalInconsistency(f"unbalanced stacks at edge {e}")
        side_of = {k: "a" for k in pos_a}
        side_of.update({k: "b" for k in pos_b})
        info[e] = (ends, fcs, stack_a, stack_b, side_of, off)
    return info, slot_table


def _components(tri, cs, w):
    """Walk the boundary multicurve off the stacking data.

    Vertices are rod endpoints (edge, level, end); each meets one sheet
    corner arc per side, so following arcs on alternating sides closes
    the components.  Every arc runs along one side of a tip's triangle
    and is a rung arc iff that side is a rung of the cusp's ladder
    decomposition, counted with the ladder's direction.
    """
    info, slot_table = _edge_tables(tri, w)
    visited = set()
    comps = []
    for e0 in sorted(info):
        for lvl0 in range(len(info[e0][2])):
            for eps0 in (0, 1):
                if (e0, lvl0, eps0) in visited:
                    continue
                arcs = up = down = 0
                cusp = None
                e, lvl, eps, enter = e0, lvl0, eps0, "a"
                while (e, lvl, eps) not in visited:
                    visited.add((e, lvl, eps))
                    ends, fcs, stack_a, stack_b, side_of, off = info[e]
                    k, s = (stack_b if enter == "a" else stack_a)[lvl]
                    t, fsl, u, v = ends[k]
                    y = (u, v)[eps]
                    c = tri.cusp_index[(t, y)]
                    if cusp is None:
                        cusp = c
                    elif cusp != c:
                        raise InternalInconsistency(
                            "boundary component changes cusp")
                    tip = cs.tip[(t, y)]
                    t2, f2, p = tri.glue[t][fsl]
                    partner = cs.tip[(t2, p[y])]
                    if fsl == tip.face_00 or f2 == partner.face_00:
                        if cs.ladders[cs.ladder_of[(t, y)]].up:
                            up += 1
                        else:
                            down += 1
                    arcs += 1
                    x3 = next(x for x in range(4) if x not in (fsl, u, v))
                    e2, k2, emap = slot_table[(t, fsl, edge_slot(y, x3))]
                    ends2, fcs2, sa2, sb2, side2, off2 = info[e2]
                    if fcs2[k2] != fcs[k]:
                        raise InternalInconsistency("corner lookup mismatch")
                    lvl2 = off2[k2] + s
                    e, lvl, eps = e2, lvl2, emap[y]
                    enter = side2[k2]
                comps.append((cusp, arcs, up, down))
    return comps


def _net_class(cs, w, cusp):
    # intersection with the peripheral basis, up to one global sign
    mu = cs.peripheral_cycle(cusp, 1, 0)
    lam = cs.peripheral_cycle(cusp, 0, 1)
    return (sum(wi * zi for wi, zi in zip(w, lam)),
            -sum(wi * zi for wi, zi in zip(w, mu)))


def boundary_families(tri, w, fillings=None, cs=None):
    """Classify the boundary multicurve of a carried weight vector.

    Filled cusps admit only empty, nulhomologous, or filling-parallel
    families; anything else raises NotCappable.  Unfilled cusps report
    other nonzero families as transversal.  Component counts and
    upward-rung counts are recomputed from the walk and checked against
    the net class and the prongs of the slope.
    """
    if cs is None:
        cs = CuspStructure(tri)
    fillings = dict(fillings or {})
    comps = _components(tri, cs, w)
    fams = []
    for c in range(tri.num_cusps):
        cc = [x for x in comps if x[0] == c]
        net = _net_class(cs, w, c)
        if not cc:
            if net != (0, 0):
                raise InternalInconsistency(
                    f"cusp {c} has class {net} but no boundary arcs")
            fams.append(BoundaryFamily(c, "empty", net, None, 0, (), ()))
            continue
        if net == (0, 0):
            # nulhomologous families ride the ladderpoles, no rungs
            if any(x[2] or x[3] for x in cc):
                raise InternalInconsistency(
                    f"nulhomologous family on cusp {c} crosses rungs")
            fams.append(BoundaryFamily(c, "ladderpole", net,
                                       cs.ladderpole_slope(c), len(cc),
                                       (0,) * len(cc), (0,) * len(cc)))
            continue
        g = gcd(net[0], net[1])
        s0 = (net[0] // g, net[1] // g)
        if c in fillings:
            p, q = fillings[c]
            if net[0] * q - net[1] * p != 0:
                raise NotCappable(
                    f"cusp {c} boundary class {net} is not parallel to "
                    f"the filling slope {(p, q)}")
            kind, slope = "meridional", (p, q)
        else:
            kind, slope = "transversal", s0
        pr = cs.prongs(c, s0)
        if pr.denominator != 1:
            raise InternalInconsistency("fractional prong count")
        if len(cc) != g:
            raise InternalInconsistency(
                f"cusp {c}: {len(cc)} components for class {net}")
        for x in cc:
            if x[2] != int(pr):
                raise InternalInconsistency(
                    f"cusp {c}: component runs {x[2]} upward rungs, "
                    f"prongs is {int(pr)}")
        fams.append(BoundaryFamily(c, kind, net, slope, len(cc),
                                   tuple(x[2] for x in cc),
                                   tuple(x[3] for x in cc)))
    return tuple(fams)


def _chi_cellular(tri, w):
    """Euler characteristic of the truncated surface from cell counts.

    Hexagonal sheets are the faces, three boundary arcs each; every rod
    contributes one interior edge and its two endpoint vertices, and no
    further identifications happen.
    """
    info, _ = _edge_tables(tri, w)
    hexes = sum(w)
    rods = sum(len(entry[2]) for entry in info.values())
    return 2 * rods - (rods + 3 * hexes) + hexes


def _assemble(tri, cs, fh, w, alpha):
    chi_u = _chi_cellular(tri, w)
    if 2 * chi_u != -sum(w):
        raise InternalInconsistency(
            f"cellular chi {chi_u} does not match weight total {sum(w)}")
    fams = boundary_families(tri, w, dict(fh.fillings), cs)
    caps = tuple(Cap(f.cusp, f.slope, f.components, f.rungs_up[0])
                 for f in fams if f.kind == "meridional")
    ncaps = sum(c.count for c in caps)
    return CarriedSurface(weights=WeightVector(tuple(w)), boundary=fams,
                          chi_unfilled=chi_u, caps=caps,
                          chi_filled=chi_u + ncaps, h2_class=tuple(alpha))


def class_of_carried(tri, w, fillings=None, cs=None, fh=None):
    """Class represented by a carried weight vector, in filled H1 dual.

    Validates the weights, rejects weight vectors whose boundary cannot
    be capped in the given filling, and pairs against the homology
    basis.  The pairing is the signed weight total over any directed
    dual cycle representing the class.
    """
    wv = w if isinstance(w, WeightVector) else WeightVector.of(tri, w)
    if cs is None:
        cs = CuspStructure(tri)
    if fh is None:
        fh = fill(tri, fillings or {}, cs)
    boundary_families(tri, tuple(wv), dict(fh.fillings), cs)
    return fh.h1_filled.pair(list(wv))


def euler_characteristic(surface: CarriedSurface):
    """(chi of the truncated surface, chi after capping)."""
    return surface.chi_unfilled, surface.chi_filled


def _box(base, kern, budget):
    # bounds for the leading kernel coefficient over the polytope
    # w = base + kern . c >= 0, sum w <= budget, by two exact solves
    d = len(kern)
    nf = len(base)
    rows, rhs = [], []
    for f in range(nf):
        rows.append([kern[i][f] for i in range(d)] +
                    [-kern[i][f] for i in range(d)] +
                    [-1 if g == f else 0 for g in range(nf)] + [0])
        rhs.append(-base[f])
    rows.append([0] * (2 * d) + [1] * nf + [1])
    rhs.append(budget)
    c = [0] * (2 * d + nf + 1)
    c[0], c[d] = 1, -1
    lo = simplex_solve(c, rows, rhs)
    if lo.status != "optimal":
        return None
    c[0], c[d] = -1, 1
    hi = simplex_solve(c, rows, rhs)
    if hi.status != "optimal":
        return None
    return ceil(lo.value), floor(-hi.value)


def _lattice_minimum(w0, K, budget):
    """Least (total weight, lex) nonnegative point of w0 + ZK in budget.

    Depth-first over kernel coefficients, re-bounding the remaining
    coefficients by exact linear programming at every level so the
    search tree stays near the feasible set.
    """
    best = None

    def rec(base, kern):
        nonlocal best
        if not kern:
            if all(x >= 0 for x in base) and sum(base) <= budget:
                key = (sum(base), tuple(base))
                if best is None or key < best:
                    best = key
            return
        bounds = _box(base, kern, budget)
        if bounds is None:
            return
        for c0 in range(bounds[0], bounds[1] + 1):
            rec([x + c0 * k for x, k in zip(base, kern[0])], kern[1:])

    rec(list(w0), [list(k) for k in K])
    return None if best is None else list(best[1])


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def solve_carried(tri, fillings, alpha, budget=None, cs=None, fh=None):
    """Minimal carried representative of an integral class.

    The class is checked against the dual of the homology direction
    cone first; a violated facet is returned as the certificate of
    ClassOutsideCone.  Inside the cone, the branch equations, meridian
    conditions, and pairing constraints form an integer system whose
    solution lattice is enumerated within a total-weight budget.  Least
    total weight wins, ties broken lexicographically by face id.  The
    default budget is 8 times the largest pairing of the class with a
    directed dual cycle class, and failure reports the budget rather
    than claiming nonexistence.
    """
    if cs is None:
        cs = CuspStructure(tri)
    if fh is None:
        fh = fill(tri, fillings or {}, cs)
    basis = fh.h1_filled
    alpha = tuple(int(a) for a in alpha)
    if len(alpha) != basis.rank:
        raise PreconditionFailed(
            f"class has {len(alpha)} coordinates, filled H1 rank is "
            f"{basis.rank}")
    sigma = dual_cone(homology_directions(tri, fh=fh))
    facet = sigma.violated_facet(list(alpha))
    if facet is not None:
        raise ClassOutsideCone(
            "class pairs negatively with a homology direction",
            certificate=tuple(facet))

    cycle_classes = [basis.class_of(list(r))[0]
                     for r in flow_cone(dual_graph(tri)).generators]
    if budget is None:
        budget = 8 * max([1] + [abs(_dot(alpha, g)) for g in cycle_classes])
    budget = int(budget)

    nf = len(tri.face_classes)
    rows = [list(r) for r in branch_matrix(tri)]
    rhs = [0] * len(rows)
    for m in fh.meridians:
        rows.append(list(m))
        rhs.append(0)
    for rep, aj in zip(basis.cycle_reps, alpha):
        rows.append(list(rep))
        rhs.append(aj)
    w0 = solve_integer(rows, rhs)
    if w0 is None:
        raise NotFoundWithinBudget(
            "the class has no integral weight solution at all",
            budget=budget)
    K = kernel_basis(rows, ncols=nf)
    w = _lattice_minimum(w0, K, budget)
    if w is None:
        raise NotFoundWithinBudget(
            f"no nonnegative carried solution with total weight <= "
            f"{budget}", budget=budget)

    surf = _assemble(tri, cs, fh, w, alpha)
    if tuple(basis.pair(w)) != alpha:
        raise InternalInconsistency("solved weights represent a "
                                    "different class")
    cert = {
        "alpha": list(alpha),
        "mode": "filled" if fh.fillings else "unfilled",
        "cone": "inside",
        "budget": budget,
        "sum_w": sum(w),
        "chi_unfilled": surf.chi_unfilled,
        "caps": sum(c.count for c in surf.caps),
        "chi_filled": surf.chi_filled,
        "boundary_kinds": [f.kind for f in surf.boundary],
        "euler_pairing": None,
        "taut": None,
    }
    if fh.fillings:
        ec = euler_class(tri, dict(fh.fillings), cs=cs, fh=fh)
        pairing = -ec.pair(list(alpha))
        cert["euler_pairing"] = str(pairing)
        cert["taut"] = (-surf.chi_filled == pairing)
        if not cert["taut"]:
            raise InternalInconsistency(
                f"chi {surf.chi_filled} misses the euler pairing {pairing}")
    return CarriedSurface(weights=surf.weights, boundary=surf.boundary,
                          chi_unfilled=surf.chi_unfilled, caps=surf.caps,
                          chi_filled=surf.chi_filled, h2_class=surf.h2_class,
                          certificate=cert)
