import random
from fractions import Fraction

from prymdeg.intlinalg import (
    det,
    elementary_divisors,
    hnf_basis,
    hnf_transform,
    is_positive_definite,
    kernel_basis,
    mat_inverse,
    mat_mul,
    mat_eq,
    identity,
    primitive,
    rank,
    snf_transform,
    solve_left_integral,
    solve_left_rational,
    sqrt_ceil_frac,
    sqrt_floor_frac,
    vec_mat,
)

RNG = random.Random(20240101)


def random_matrix(m, n, bound=5):
    return tuple(tuple(RNG.randint(-bound, bound) for _ in range(n)) for _ in range(m))


def test_hnf_properties():
    for _ in range(200):
        m, n = RNG.randint(1, 5), RNG.randint(1, 5)
        A = random_matrix(m, n)
        H, U = hnf_transform(A)
        assert mat_eq(mat_mul(U, A), H)
        assert abs(det(U)) == 1
        # echelon with positive pivots and reduced entries above
        pivots = []
        for row in H:
            nz = [j for j, x in enumerate(row) if x]
            if nz:
                pivots.append(nz[0])
        assert pivots == sorted(pivots) and len(set(pivots)) == len(pivots)
        for i, row in enumerate(H):
            nz = [j for j, x in enumerate(row) if x]
            if not nz:
                continue
            p = nz[0]
            assert row[p] > 0
            for k in range(i):
                assert 0 <= H[k][p] < row[p]


def test_hnf_canonical_under_row_shuffle():
    for _ in range(100):
        m, n = RNG.randint(1, 5), RNG.randint(1, 5)
        A = list(random_matrix(m, n))
        B = A[:]
        RNG.shuffle(B)
        assert hnf_basis(tuple(A)) == hnf_basis(tuple(B))


def test_kernel():
    for _ in range(100):
        A = random_matrix(RNG.randint(1, 5), RNG.randint(1, 5))
        K = kernel_basis(A)
        for k in K:
            assert all(x == 0 for x in vec_mat(k, A))
        assert len(K) == len(A) - rank(A)


def test_snf_properties():
    for _ in range(200):
        A = random_matrix(RNG.randint(1, 5), RNG.randint(1, 5))
        D, U, V = snf_transform(A)
        assert mat_eq(mat_mul(mat_mul(U, A), V), D)
        assert abs(det(U)) == 1 and abs(det(V)) == 1
        divs = [D[i][i] for i in range(min(len(D), len(D[0])))]
        for i in range(len(divs) - 1):
            if divs[i]:
                assert divs[i + 1] % divs[i] == 0
            else:
                assert divs[i + 1] == 0
        for i, row in enumerate(D):
            for j, x in enumerate(row):
                if i != j:
                    assert x == 0


def test_snf_known():
    A = ((2, 4, 4), (-6, 6, 12), (10, 4, 16))
    assert elementary_divisors(A) == (2, 2, 156)


def test_solve_left():
    for _ in range(200):
        m, n = RNG.randint(1, 4), RNG.randint(1, 4)
        A = random_matrix(m, n)
        x = tuple(RNG.randint(-4, 4) for _ in range(m))
        b = vec_mat(x, A)
        xr = solve_left_rational(A, b)
        assert xr is not None
        assert tuple(vec_mat(xr, A)) == tuple(Fraction(v) for v in b)
        xi = solve_left_integral(A, b)
        assert xi is not None
        assert tuple(vec_mat(xi, A)) == b


def test_solve_left_no_integral_solution():
    A = ((2, 0), (0, 2))
    assert solve_left_integral(A, (1, 0)) is None
    assert solve_left_rational(A, (1, 0)) == (Fraction(1, 2), Fraction(0))


def test_inverse_and_det():
    for _ in range(50):
        n = RNG.randint(1, 4)
        A = random_matrix(n, n)
        d = det(A)
        if d == 0:
            continue
        Ainv = mat_inverse(A)
        assert mat_eq(mat_mul(A, Ainv), identity(n))


def test_positive_definite():
    assert is_positive_definite(((2, 1), (1, 1)))
    assert not is_positive_definite(((1, 2), (2, 1)))
    assert is_positive_definite(())


def test_sqrt_bounds():
    for _ in range(200):
        x = Fraction(RNG.randint(0, 400), RNG.randint(1, 20))
        lo, hi = sqrt_floor_frac(x), sqrt_ceil_frac(x)
        assert lo * lo <= x <= hi * hi
        assert hi - lo <= 1


def test_primitive():
    assert primitive((2, -4, 6)) == (1, -2, 3)
    assert primitive((-2, 4)) == (1, -2)
    assert primitive((0, 0)) == (0, 0)
