import random
from fractions import Fraction

from veernorm.linalg import (
    cone_contains,
    frac_kernel,
    frac_rank,
    frac_solve,
    kernel_basis,
    mat_identity,
    mat_mul,
    mat_vec,
    simplex_solve,
    smith_normal_form,
    solve_integer,
    transpose,
)


def check_smith(A):
    sf = smith_normal_form(A)
    m = len(A)
    n = len(A[0]) if A else 0
    assert mat_mul(mat_mul(sf.U, [list(r) for r in A]), sf.V) == sf.D
    assert mat_mul(sf.U, sf.U_inv) == mat_identity(m)
    assert mat_mul(sf.V, sf.V_inv) == mat_identity(n)
    for i in range(m):
        for j in range(n):
            if i != j:
                assert sf.D[i][j] == 0
    for i in range(len(sf.diag) - 1):
        if sf.diag[i + 1]:
            assert sf.diag[i] != 0 and sf.diag[i + 1] % sf.diag[i] == 0
    assert all(d >= 0 for d in sf.diag)
    return sf


def test_smith_hand_cases():
    # gcd 2, |det| 8 forces diag (2, 4)
    assert check_smith([[2, 4], [6, 8]]).diag == [2, 4]
    assert check_smith([[1, 0], [0, 1]]).diag == [1, 1]
    assert check_smith([[0, 0], [0, 0]]).diag == [0, 0]
    assert check_smith([[6]]).diag == [6]
    assert check_smith([[2, 0], [0, 3]]).diag == [1, 6]


def test_smith_random_shapes():
    rng = random.Random(7)
    for _ in range(60):
        m = rng.randrange(1, 6)
        n = rng.randrange(1, 6)
        A = [[rng.randrange(-9, 10) for _ in range(n)] for _ in range(m)]
        check_smith(A)


def test_kernel_is_saturated():
    A = [[1, 2, 3]]
    K = kernel_basis(A)
    assert len(K) == 2
    for v in K:
        assert mat_vec(A, v) == [0]
    # saturation: the kernel basis extends to a basis of Z^3
    sf = smith_normal_form(transpose(K))
    assert sf.diag[:2] == [1, 1]


def test_solve_integer():
    assert solve_integer([[2]], [4]) == [2]
    assert solve_integer([[2]], [3]) is None
    A = [[1, 2], [3, 4]]
    x = solve_integer(A, [5, 11])
    assert x is not None and mat_vec(A, x) == [5, 11]
    assert solve_integer(A, [5, 6]) is None


def test_solve_integer_random_roundtrip():
    rng = random.Random(11)
    for _ in range(40):
        m = rng.randrange(1, 5)
        n = rng.randrange(1, 5)
        A = [[rng.randrange(-5, 6) for _ in range(n)] for _ in range(m)]
        x0 = [rng.randrange(-4, 5) for _ in range(n)]
        b = mat_vec(A, x0)
        x = solve_integer(A, b)
        assert x is not None
        assert mat_vec(A, x) == b


def test_frac_ops():
    A = [[1, 2], [2, 4]]
    assert frac_rank(A) == 1
    k = frac_kernel(A)
    assert len(k) == 1
    assert mat_vec(A, k[0]) == [0, 0]
    x = frac_solve([[2, 0], [0, 3]], [1, 1])
    assert x == [Fraction(1, 2), Fraction(1, 3)]
    assert frac_solve([[1], [1]], [1, 2]) is None


def test_simplex_known_optima():
    r = simplex_solve([1, 1], [[1, 1]], [1])
    assert r.status == "optimal" and r.value == 1
    r = simplex_solve([-1, 0], [[1, -1]], [0])
    assert r.status == "unbounded"
    r = simplex_solve([0], [[1]], [-1])
    assert r.status == "infeasible"
    # min x+2y st x+y=2, x-y=0 -> x=y=1, value 3
    r = simplex_solve([1, 2], [[1, 1], [1, -1]], [2, 0])
    assert r.status == "optimal" and r.value == 3 and r.x == [1, 1]


def test_cone_membership_against_brute_force():
    rays = [[1, 0, 0], [0, 1, 0], [1, 1, 1]]
    rng = random.Random(3)
    for _ in range(50):
        lam = [rng.randrange(0, 5) for _ in rays]
        v = [sum(l * r[i] for l, r in zip(lam, rays)) for i in range(3)]
        assert cone_contains(rays, v)
    assert not cone_contains(rays, [0, 0, -1])
    assert not cone_contains(rays, [-1, 0, 0])
    assert cone_contains(rays, [0, 0, 0])
    assert not cone_contains([], [1, 0])
    assert cone_contains([], [0, 0])
