"""Exact integer and rational linear algebra.

Conventions used throughout the package:

* vectors are row tuples, matrices are tuples of row tuples;
* a matrix acts on the right, ``x' = x @ A``;
* everything is ``int`` or ``fractions.Fraction`` -- no floats.

Hermite and Smith normal forms are implemented directly: the matrices
here are tiny (rank <= a dozen) and we need the transforms and the exact
echelon shape, so rolling our own keeps the code path fully transparent.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt

Vec = tuple
Mat = tuple


def vec_add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(u, c):
    return tuple(c * a for a in u)


def vec_dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def is_zero_vec(u):
    return all(a == 0 for a in u)


def mat_mul(A, B):
    if not A:
        return ()
    cols = list(zip(*B))
    return tuple(tuple(vec_dot(row, col) for col in cols) for row in A)


def mat_vec(A, v):
    """A @ v with v a column; returns a tuple."""
    return tuple(vec_dot(row, v) for row in A)


def vec_mat(v, A):
    """v @ A with v a row; returns a tuple."""
    if not A:
        return ()
    cols = list(zip(*A))
    return tuple(vec_dot(v, col) for col in cols)


def transpose(A):
    return tuple(zip(*A)) if A else ()


def identity(n):
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def mat_eq(A, B):
    return tuple(map(tuple, A)) == tuple(map(tuple, B))


def _xgcd(a, b):
    """g, s, t with s*a + t*b == g == gcd(a, b) >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def hnf_transform(rows):
    """Row-style Hermite normal form.

    Returns (H, U) with U unimodular, U @ rows == H, H in row echelon
    form: positive pivots, entries above a pivot reduced into [0, pivot),
    zero rows at the bottom.
    """
    A = [list(map(int, r)) for r in rows]
    m = len(A)
    n = len(A[0]) if m else 0
    U = [list(r) for r in identity(m)]
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        U[r], U[piv] = U[piv], U[r]
        for i in range(r + 1, m):
            if A[i][c] == 0:
                continue
            g, s, t = _xgcd(A[r][c], A[i][c])
            ar, ai = A[r][c] // g, A[i][c] // g
            A[r], A[i] = (
                [s * x + t * y for x, y in zip(A[r], A[i])],
                [-ai * x + ar * y for x, y in zip(A[r], A[i])],
            )
            U[r], U[i] = (
                [s * x + t * y for x, y in zip(U[r], U[i])],
                [-ai * x + ar * y for x, y in zip(U[r], U[i])],
            )
        if A[r][c] < 0:
            A[r] = [-x for x in A[r]]
            U[r] = [-x for x in U[r]]
        for j in range(r):
            q = A[j][c] // A[r][c]
            if q:
                A[j] = [x - q * y for x, y in zip(A[j], A[r])]
                U[j] = [x - q * y for x, y in zip(U[j], U[r])]
        r += 1
    return tuple(map(tuple, A)), tuple(map(tuple, U))


def hnf_basis(rows):
    """Canonical basis (nonzero HNF rows) of the integer row lattice."""
    H, _ = hnf_transform(rows)
    return tuple(row for row in H if not is_zero_vec(row))


def kernel_basis(A):
    """Basis of the left integer kernel {x : x @ A == 0}. Saturated."""
    H, U = hnf_transform(A)
    return tuple(u for h, u in zip(H, U) if is_zero_vec(h))


def right_kernel_basis(A):
    """Basis (rows) of {y : A @ y^T == 0}."""
    return kernel_basis(transpose(A))


def rank(A):
    if not A:
        return 0
    return len(hnf_basis(A))


def snf_transform(A):
    """Smith normal form: (D, U, V) with U @ A @ V == D diagonal,
    d1 | d2 | ..., U and V unimodular, nonnegative diagonal."""
    A = [list(map(int, r)) for r in A]
    m = len(A)
    n = len(A[0]) if m else 0
    U = [list(r) for r in identity(m)]
    V = [list(r) for r in identity(n)]

    def row_op(i, j):
        # clear A[j][piv_col] against pivot row i; plain subtraction when
        # divisible so the pivot row is not disturbed (avoids livelock)
        a, b = A[i][piv_col], A[j][piv_col]
        if a and b % a == 0:
            q = b // a
            A[j] = [y - q * x for x, y in zip(A[i], A[j])]
            U[j] = [y - q * x for x, y in zip(U[i], U[j])]
            return
        g, s, t = _xgcd(a, b)
        ai, aj = a // g, b // g
        A[i], A[j] = (
            [s * x + t * y for x, y in zip(A[i], A[j])],
            [-aj * x + ai * y for x, y in zip(A[i], A[j])],
        )
        U[i], U[j] = (
            [s * x + t * y for x, y in zip(U[i], U[j])],
            [-aj * x + ai * y for x, y in zip(U[i], U[j])],
        )

    def col_op(i, j):
        a, b = A[piv_row][i], A[piv_row][j]
        if a and b % a == 0:
            q = b // a
            for M in (A, V):
                for row in M:
                    row[j] -= q * row[i]
            return
        g, s, t = _xgcd(a, b)
        ai, aj = a // g, b // g
        for M in (A, V):
            for row in M:
                x, y = row[i], row[j]
                row[i] = s * x + t * y
                row[j] = -aj * x + ai * y

    t = 0
    while t < min(m, n):
        piv = next(((i, j) for i in range(t, m) for j in range(t, n) if A[i][j]), None)
        if piv is None:
            break
        A[t], A[piv[0]] = A[piv[0]], A[t]
        U[t], U[piv[0]] = U[piv[0]], U[t]
        for M in (A, V):
            for row in M:
                row[t], row[piv[1]] = row[piv[1]], row[t]
        while True:
            piv_col = t
            for i in range(t + 1, m):
                if A[i][t]:
                    row_op(t, i)
            piv_row = t
            for j in range(t + 1, n):
                if A[t][j]:
                    col_op(t, j)
            if any(A[i][t] for i in range(t + 1, m)):
                continue
            # pivot must divide the trailing block; fold an offender in
            bad = next(
                (i for i in range(t + 1, m)
                 if any(x % A[t][t] for x in A[i][t + 1:])),
                None,
            )
            if bad is None:
                break
            A[t] = [x + y for x, y in zip(A[t], A[bad])]
            U[t] = [x + y for x, y in zip(U[t], U[bad])]
        t += 1
    for i in range(min(m, n)):
        if A[i][i] < 0:
            A[i] = [-x for x in A[i]]
            U[i] = [-x for x in U[i]]
    return tuple(map(tuple, A)), tuple(map(tuple, U)), tuple(map(tuple, V))


def elementary_divisors(A):
    D, _, _ = snf_transform(A)
    return tuple(D[i][i] for i in range(min(len(D), len(D[0]) if D else 0)) if D[i][i])


def solve_left_rational(A, b):
    """Rational x with x @ A == b, or None if no solution exists.

    A may be rank deficient; any one solution is returned.
    """
    m = len(A)
    if m == 0:
        return () if is_zero_vec(b) else None
    n = len(A[0])
    # gaussian elimination on the system A^T x^T = b^T
    M = [[Fraction(A[i][j]) for i in range(m)] + [Fraction(b[j])] for j in range(n)]
    piv_cols = []
    r = 0
    for c in range(m):
        piv = next((i for i in range(r, n) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        M[r] = [x / M[r][c] for x in M[r]]
        for i in range(n):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        piv_cols.append(c)
        r += 1
    for i in range(r, n):
        if M[i][m]:
            return None
    x = [Fraction(0)] * m
    for row_idx, c in enumerate(piv_cols):
        x[c] = M[row_idx][m]
    return tuple(x)


def solve_left_integral(A, b):
    """Integer x with x @ A == b, or None."""
    H, U = hnf_transform(A)
    # solve y @ H == b by echelon substitution
    m = len(H)
    y = [0] * m
    rem = list(b)
    for i in range(m):
        piv = next((j for j in range(len(rem)) if H[i][j]), None)
        if piv is None:
            break
        if rem[piv] % H[i][piv]:
            # fall through; remaining rows cannot fix an earlier column
            return None
        q = rem[piv] // H[i][piv]
        y[i] = q
        rem = [x - q * h for x, h in zip(rem, H[i])]
    if any(rem):
        return None
    return tuple(vec_mat(tuple(y), U))


def det(A):
    """Exact determinant (Fraction-safe bareiss-free gaussian)."""
    n = len(A)
    if n == 0:
        return 1
    M = [[Fraction(x) for x in row] for row in A]
    d = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            d = -d
        d *= M[c][c]
        inv = 1 / M[c][c]
        for i in range(c + 1, n):
            if M[i][c]:
                f = M[i][c] * inv
                M[i] = [x - f * y for x, y in zip(M[i], M[c])]
    return d


def mat_inverse(A):
    """Exact inverse of a square rational matrix."""
    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(A)]
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c]), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        M[c], M[piv] = M[piv], M[c]
        M[c] = [x / M[c][c] for x in M[c]]
        for i in range(n):
            if i != c and M[i][c]:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[c])]
    return tuple(tuple(row[n:]) for row in M)


def gram_fraction(vectors, weights=None):
    """Gram matrix sum_k w_k v_i[k] v_j[k] as Fractions."""
    n = len(vectors)
    if weights is None:
        weights = [1] * (len(vectors[0]) if n else 0)
    return tuple(
        tuple(
            sum(Fraction(w) * Fraction(vi) * Fraction(vj)
                for w, vi, vj in zip(weights, u, v))
            for v in vectors
        )
        for u in vectors
    )


def is_positive_definite(G):
    """Leading principal minors test, exact."""
    n = len(G)
    for k in range(1, n + 1):
        mk = det(tuple(row[:k] for row in G[:k]))
        if mk <= 0:
            return False
    return True


def frac_floor(x):
    if isinstance(x, Fraction):
        return x.numerator // x.denominator
    return int(x)


def frac_ceil(x):
    if isinstance(x, Fraction):
        return -((-x.numerator) // x.denominator)
    return int(x)


def sqrt_floor_frac(x):
    """Largest integer t with t*t <= x (x a nonnegative Fraction)."""
    if x < 0:
        raise ValueError("negative radicand")
    num, den = Fraction(x).numerator, Fraction(x).denominator
    # floor(sqrt(num/den)) = floor(sqrt(num*den)/den)
    return isqrt(num * den) // den


def sqrt_ceil_frac(x):
    t = sqrt_floor_frac(x)
    return t if t * t == Fraction(x) else t + 1


def lcm(a, b):
    return abs(a * b) // gcd(a, b) if a and b else abs(a or b)


def content(vec):
    """gcd of the entries (0 for the zero vector)."""
    g = 0
    for x in vec:
        g = gcd(g, abs(int(x)))
    return g


def primitive(vec):
    """vec divided by its content, sign normalized to first nonzero > 0."""
    g = content(vec)
    if g == 0:
        return tuple(vec)
    v = tuple(int(x) // g for x in vec)
    lead = next((x for x in v if x), 0)
    return v if lead > 0 else tuple(-x for x in v)
