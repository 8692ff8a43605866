"""Exact integer and rational linear algebra.

Everything in this module runs over Z or over fractions.Fraction; no floats
anywhere.  Matrices are plain lists of lists, rows first.  The Smith normal
form keeps both unimodular transforms and their inverses, because the
homology layer needs to convert cycles to normal-form coordinates and back.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence


def mat_identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(A, B):
    """Matrix product, exact."""
    if A and B and len(A[0]) != len(B):
        raise ValueError("shape mismatch")
    inner = len(B)
    cols = len(B[0]) if B else 0
    out = []
    for row in A:
        out.append([sum(row[k] * B[k][j] for k in range(inner)) for j in range(cols)])
    return out


def mat_vec(A, x):
    if A and len(A[0]) != len(x):
        raise ValueError("shape mismatch")
    return [sum(row[k] * x[k] for k in range(len(x))) for row in A]


def transpose(A):
    if not A:
        return []
    return [[A[i][j] for i in range(len(A))] for j in range(len(A[0]))]


@dataclass
class SmithForm:
    """U @ A @ V == D with U, V unimodular over Z.

    `diag` lists the diagonal of D (length min(m, n)), nonnegative, each
    entry dividing the next; `rank` counts the nonzero ones.
    """

    D: list[list[int]]
    U: list[list[int]]
    V: list[list[int]]
    U_inv: list[list[int]]
    V_inv: list[list[int]]
    diag: list[int]
    rank: int


def smith_normal_form(A: Sequence[Sequence[int]]) -> SmithForm:
    M = [list(map(int, row)) for row in A]
    m = len(M)
    n = len(M[0]) if M else 0
    U = mat_identity(m)
    U_inv = mat_identity(m)
    V = mat_identity(n)
    V_inv = mat_identity(n)

    # Elementary ops keep U*A0*V == M; inverses get the opposite-side op.
    def row_swap(i, j):
        M[i], M[j] = M[j], M[i]
        U[i], U[j] = U[j], U[i]
        for r in U_inv:
            r[i], r[j] = r[j], r[i]

    def row_neg(i):
        M[i] = [-x for x in M[i]]
        U[i] = [-x for x in U[i]]
        for r in U_inv:
            r[i] = -r[i]

    def row_add(i, j, q):
        # row i += q * row j
        M[i] = [a + q * b for a, b in zip(M[i], M[j])]
        U[i] = [a + q * b for a, b in zip(U[i], U[j])]
        for r in U_inv:
            r[j] -= q * r[i]

    def col_swap(i, j):
        for r in M:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]
        V_inv[i], V_inv[j] = V_inv[j], V_inv[i]

    def col_neg(i):
        for r in M:
            r[i] = -r[i]
        for r in V:
            r[i] = -r[i]
        V_inv[i] = [-x for x in V_inv[i]]

    def col_add(i, j, q):
        # col j += q * col i
        for r in M:
            r[j] += q * r[i]
        for r in V:
            r[j] += q * r[i]
        V_inv[i] = [a - q * b for a, b in zip(V_inv[i], V_inv[j])]

    def pivot_search(s):
        best = None
        for i in range(s, m):
            for j in range(s, n):
                v = abs(M[i][j])
                if v and (best is None or v < best[0]):
                    best = (v, i, j)
        return best

    s = 0
    while s < min(m, n):
        found = pivot_search(s)
        if found is None:
            break
        _, pi, pj = found
        if pi != s:
            row_swap(s, pi)
        if pj != s:
            col_swap(s, pj)
        if M[s][s] < 0:
            row_neg(s)
        dirty = True
        while dirty:
            dirty = False
            for i in range(s + 1, m):
                if M[i][s]:
                    q = M[i][s] // M[s][s]
                    row_add(i, s, -q)
                    if M[i][s]:
                        row_swap(s, i)
                        if M[s][s] < 0:
                            row_neg(s)
                        dirty = True
            for j in range(s + 1, n):
                if M[s][j]:
                    q = M[s][j] // M[s][s]
                    col_add(s, j, -q)
                    if M[s][j]:
                        col_swap(s, j)
                        if M[s][s] < 0:
                            col_neg(s)
                        dirty = True
        # entries not divisible by the pivot fold back into its row
        for i in range(s + 1, m):
            for j in range(s + 1, n):
                if M[i][j] % M[s][s]:
                    row_add(s, i, 1)
                    dirty = True
                    break
            if dirty:
                break
        if dirty:
            continue
        s += 1

    diag = [M[i][i] for i in range(min(m, n))]
    rank = sum(1 for d in diag if d)
    return SmithForm(D=M, U=U, V=V, U_inv=U_inv, V_inv=V_inv, diag=diag, rank=rank)


def kernel_basis(A: Sequence[Sequence[int]], ncols: Optional[int] = None) -> list[list[int]]:
    """Basis of the integer kernel lattice of A (saturated by construction)."""
    if not A:
        n = ncols if ncols is not None else 0
        return [[1 if i == j else 0 for i in range(n)] for j in range(n)]
    sf = smith_normal_form(A)
    n = len(A[0])
    cols = []
    for j in range(sf.rank, n):
        cols.append([sf.V[i][j] for i in range(n)])
    return cols


def solve_integer(A: Sequence[Sequence[int]], b: Sequence[int]) -> Optional[list[int]]:
    """One integer solution of A x = b, or None."""
    if not A:
        return []
    sf = smith_normal_form(A)
    m = len(A)
    n = len(A[0])
    c = mat_vec(sf.U, list(b))
    y = [0] * n
    for i in range(min(m, n)):
        d = sf.diag[i]
        if d:
            if c[i] % d:
                return None
            y[i] = c[i] // d
        elif c[i]:
            return None
    for i in range(min(m, n), m):
        if c[i]:
            return None
    return mat_vec(sf.V, y)


# ---------------------------------------------------------------- rational

def _to_frac_matrix(A):
    return [[Fraction(x) for x in row] for row in A]


def frac_rref(A):
    """Reduced row echelon form; returns (R, pivot_columns)."""
    R = _to_frac_matrix(A)
    m = len(R)
    n = len(R[0]) if R else 0
    pivots = []
    r = 0
    for c in range(n):
        pr = next((i for i in range(r, m) if R[i][c] != 0), None)
        if pr is None:
            continue
        R[r], R[pr] = R[pr], R[r]
        pv = R[r][c]
        R[r] = [x / pv for x in R[r]]
        for i in range(m):
            if i != r and R[i][c] != 0:
                f = R[i][c]
                R[i] = [a - f * b for a, b in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return R, pivots


def frac_rank(A) -> int:
    return len(frac_rref(A)[1])


def frac_kernel(A, ncols: Optional[int] = None):
    """Basis of the rational nullspace."""
    n = len(A[0]) if A else (ncols or 0)
    if not A:
        return [[Fraction(1 if i == j else 0) for i in range(n)] for j in range(n)]
    R, pivots = frac_rref(A)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -R[r][fc]
        basis.append(v)
    return basis


def frac_solve(A, b):
    """One rational solution of A x = b, or None."""
    if not A:
        return []
    n = len(A[0])
    aug = [list(map(Fraction, row)) + [Fraction(bv)] for row, bv in zip(A, b)]
    R, pivots = frac_rref(aug)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for r, pc in enumerate(pivots):
        x[pc] = R[r][n]
    return x


# ----------------------------------------------------------------- simplex

class LPResult:
    __slots__ = ("status", "x", "value")

    def __init__(self, status, x=None, value=None):
        self.status = status  # "optimal" | "infeasible" | "unbounded"
        self.x = x
        self.value = value


def simplex_solve(c, A, b) -> LPResult:
    """Minimize c.x subject to A x = b, x >= 0.  Exact two-phase simplex.

    Bland's rule throughout, so cycling cannot happen.  All arithmetic in
    Fraction; inputs may be ints.
    """
    m = len(A)
    n = len(A[0]) if A else len(c)
    if m == 0:
        # no constraints: optimum 0 iff c >= 0, else unbounded below
        if any(Fraction(ci) < 0 for ci in c):
            return LPResult("unbounded")
        return LPResult("optimal", [Fraction(0)] * n, Fraction(0))
    # rows laid out as [original vars | artificials | rhs]
    T = []
    basis = []
    for i, (row, bv) in enumerate(zip(A, b)):
        r = [Fraction(x) for x in row]
        rhs = Fraction(bv)
        if rhs < 0:
            r = [-x for x in r]
            rhs = -rhs
        r += [Fraction(0)] * m + [rhs]
        r[n + i] = Fraction(1)
        T.append(r)
        basis.append(n + i)

    def pivot(width, cost, basis, T):
        while True:
            enter = None
            for j in range(width):
                if cost[j] < 0:
                    enter = j
                    break
            if enter is None:
                return "optimal"
            leave = None
            best = None
            for i in range(len(T)):
                if T[i][enter] > 0:
                    ratio = T[i][-1] / T[i][enter]
                    if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                        best = ratio
                        leave = i
            if leave is None:
                return "unbounded"
            pv = T[leave][enter]
            T[leave] = [x / pv for x in T[leave]]
            for i in range(len(T)):
                if i != leave and T[i][enter] != 0:
                    f = T[i][enter]
                    T[i] = [a - f * bx for a, bx in zip(T[i], T[leave])]
            f = cost[enter]
            if f != 0:
                for j in range(width + 1):
                    cost[j] -= f * T[leave][j]
            basis[leave] = enter

    width = n + m
    cost1 = [Fraction(0)] * (width + 1)
    for j in range(n):
        cost1[j] = -sum(T[i][j] for i in range(m))
    cost1[-1] = -sum(T[i][-1] for i in range(m))
    pivot(width, cost1, basis, T)
    if -cost1[-1] != 0:
        return LPResult("infeasible")
    # force artificials out of the basis where possible, drop dead rows
    keep = []
    for i in range(m):
        if basis[i] >= n:
            enter = next((j for j in range(n) if T[i][j] != 0), None)
            if enter is None:
                continue  # redundant constraint row
            pv = T[i][enter]
            T[i] = [x / pv for x in T[i]]
            for k in range(m):
                if k != i and T[k][enter] != 0:
                    f = T[k][enter]
                    T[k] = [a - f * bx for a, bx in zip(T[k], T[i])]
            basis[i] = enter
        keep.append(i)
    T = [T[i][: n] + [T[i][-1]] for i in keep]
    basis = [basis[i] for i in keep]
    # phase 2
    cost2 = [Fraction(x) for x in c] + [Fraction(0)]
    for i, bv in enumerate(basis):
        f = cost2[bv]
        if f != 0:
            for j in range(n + 1):
                cost2[j] -= f * T[i][j]
    st = pivot(n, cost2, basis, T)
    if st == "unbounded":
        return LPResult("unbounded")
    x = [Fraction(0)] * n
    for i, bv in enumerate(basis):
        x[bv] = T[i][-1]
    val = sum(Fraction(ci) * xi for ci, xi in zip(c, x))
    return LPResult("optimal", x, val)


def cone_contains(rays, v) -> bool:
    """Is v a nonnegative combination of the given rays?  LP feasibility."""
    if not rays:
        return all(Fraction(x) == 0 for x in v)
    A = transpose(rays)
    res = simplex_solve([0] * len(rays), A, list(v))
    return res.status == "optimal"
