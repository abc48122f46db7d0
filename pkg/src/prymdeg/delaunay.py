"""Periodic regular subdivisions from convex heights, exactly.

The central construction: given a height H on Z^n with positive
definite leading quadratic part and a period lattice Y under which H is
quadratically periodic, the lower convex hull of {(x, H(x))} projects
to a Y-periodic polytopal decomposition of R^n.  With H(x) = q(x) this
is the classical Delaunay decomposition of the form q; with a residue
correction it is the semi-Delaunay decomposition of a non-principal
degeneration.

Everything is certified: every produced cell carries a supporting
affine function that is re-verified *globally* (over the whole infinite
lattice, by enumerating the integer points of the sublevel ellipsoid),
and the set of cells is closed under passing to ridge-neighbors, which
pins down completeness.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .errors import DegenerateSystem, InternalError, PrymdegError, RankTooLarge
from .geometry import (
    PeriodicDecomposition,
    affine_rank,
    build_complex,
    canonical_translate,
    coset_representatives,
    direction_kernel,
    frac_point,
    period_inverse,
    polytope_facets,
    polytope_vertices,
    vec_dot_point,
)
from .intlinalg import (
    det,
    frac_ceil,
    frac_floor,
    is_positive_definite,
    mat_inverse,
    mat_mul,
    solve_left_integral,
    solve_left_rational,
    sqrt_ceil_frac,
    sqrt_floor_frac,
    vec_mat,
)

DELAUNAY_RANK_CAP = 6
SEMI_DELAUNAY_RANK_CAP = 4


class WindowTooSmall(PrymdegError):
    pass


@dataclass(frozen=True)
class HeightFunction:
    """H(x) = x.G.x/2 + linear.x + r(x mod period) on Z^n.

    ``residues`` lists one (representative, value) pair per coset of the
    period lattice; the representative 0 should carry value 0 so that
    the quadratic part alone has H(0) = 0.
    """

    gram: tuple
    linear: tuple
    period: tuple
    residues: tuple

    @property
    def dim(self):
        return len(self.gram)

    def quadratic_value(self, x):
        q = Fraction(0)
        for i, a in enumerate(x):
            if not a:
                continue
            for j, b in enumerate(x):
                if b:
                    q += Fraction(a) * Fraction(b) * self.gram[i][j]
        return q / 2 + sum(Fraction(l) * Fraction(v) for l, v in zip(self.linear, x))

    def residue_value(self, x):
        key, table = _residue_table(self)
        return table[tuple(v % d for v, d in zip(vec_mat(tuple(x), key[0]), key[1]))]

    def value(self, x):
        return self.quadratic_value(x) + self.residue_value(x)


_RESIDUE_CACHE = {}


def _residue_table(height: HeightFunction):
    """Coset classifier: the Smith transform V of the period plus the
    divisor tuple identify x mod period as (x.V mod d)."""
    cache_key = (height.period, height.residues)
    hit = _RESIDUE_CACHE.get(cache_key)
    if hit is not None:
        return hit
    from .intlinalg import snf_transform

    n = len(height.period)
    D, _, V = snf_transform(height.period)
    divisors = tuple(max(D[i][i], 1) for i in range(n))
    table = {}
    for rep, val in height.residues:
        k = tuple(v % d for v, d in zip(vec_mat(tuple(rep), V), divisors))
        if k in table:
            raise DegenerateSystem(f"duplicate residue class for representative {rep}")
        table[k] = Fraction(val)
    out = ((V, divisors), table)
    _RESIDUE_CACHE[cache_key] = out
    return out


def quadratic_height(gram, dim=None) -> HeightFunction:
    """Plain Delaunay height q(x)/2 with trivial period Z^n."""
    gram = tuple(tuple(Fraction(x) for x in row) for row in gram)
    n = len(gram) if dim is None else dim
    eye = tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
    return HeightFunction(gram, (Fraction(0),) * n, eye, (((0,) * n, Fraction(0)),))


def make_height(gram, linear, period, residue_map) -> HeightFunction:
    gram = tuple(tuple(Fraction(x) for x in row) for row in gram)
    n = len(gram)
    if not is_positive_definite(gram):
        raise DegenerateSystem("leading quadratic part is not positive definite")
    period = tuple(tuple(int(x) for x in row) for row in period)
    index = abs(int(det(period)))
    reps = tuple((tuple(int(x) for x in r), Fraction(v)) for r, v in residue_map)
    if len(reps) != index:
        raise DegenerateSystem(
            f"need one residue value per coset: got {len(reps)}, index is {index}"
        )
    return HeightFunction(gram, tuple(Fraction(x) for x in linear), period, reps)


# ---------------------------------------------------------------------------
# integer points of quadratic sublevel sets (exact Fincke-Pohst)


def ldl_decompose(Q):
    n = len(Q)
    A = [[Fraction(x) for x in row] for row in Q]
    diag = [Fraction(0)] * n
    upper = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        diag[i] = A[i][i]
        if diag[i] <= 0:
            raise DegenerateSystem("matrix is not positive definite")
        for j in range(i + 1, n):
            upper[i][j] = A[i][j] / diag[i]
        for j in range(i + 1, n):
            for k in range(j, n):
                A[j][k] -= diag[i] * upper[i][j] * upper[i][k]
                A[k][j] = A[j][k]
    return diag, upper


def integer_points_in_ellipsoid(Q, center, rhs):
    """All y in Z^n with (y-c).Q.(y-c) <= rhs, exactly."""
    n = len(Q)
    if rhs < 0:
        return []
    if n == 0:
        return [()]
    diag, upper = ldl_decompose(Q)
    center = frac_point(center)
    out = []
    y = [0] * n

    def rec(i, budget):
        # coordinates y_{i+1..} fixed; w_i = z_i + sum_{j>i} u_ij z_j
        if i < 0:
            out.append(tuple(y))
            return
        offset = sum(upper[i][j] * (y[j] - center[j]) for j in range(i + 1, n))
        # diag[i] * (y_i - c_i + offset)^2 <= budget
        bound = budget / diag[i]
        root = sqrt_floor_frac(bound)
        lo = frac_ceil(center[i] - offset - root - 1)
        hi = frac_floor(center[i] - offset + root + 1)
        for yi in range(lo, hi + 1):
            w = yi - center[i] + offset
            term = diag[i] * w * w
            if term <= budget:
                y[i] = yi
                rec(i - 1, budget - term)
        y[i] = 0

    rec(n - 1, Fraction(rhs))
    return out


def quadratic_sublevel_points(G, c, d):
    """Integer points with x.G.x/2 + c.x + d <= 0 (G positive definite)."""
    n = len(G)
    Ginv = mat_inverse(G)
    center = tuple(-x for x in vec_mat(tuple(Fraction(v) for v in c), Ginv))
    fmin = Fraction(d) + sum(Fraction(a) * b for a, b in zip(c, center)) / 2
    if fmin > 0:
        return []
    # x.G.x/2 + c.x + d = (x-c0).G.(x-c0)/2 + fmin
    return integer_points_in_ellipsoid(G, center, -2 * fmin)


# ---------------------------------------------------------------------------
# lower hull of lifted lattice points


def _window_points(height: HeightFunction, pad):
    n = height.dim
    # bounding box of the period's fundamental parallelepiped
    bound = [0] * n
    for row in height.period:
        for i, x in enumerate(row):
            bound[i] += abs(int(x))
    ranges = [range(-pad - b, b + pad + 1) for b in bound]
    return [tuple(p) for p in product(*ranges)]


def _support_from_points(height, pts):
    """Affine (a, b) with a.p + b == H(p) on the given points."""
    n = height.dim
    rows = [tuple(p) + (1,) for p in pts]
    vals = tuple(height.value(p) for p in pts)
    sol = solve_left_rational(tuple(zip(*rows)), vals)
    if sol is None:
        raise InternalError("support interpolation failed")
    return tuple(sol[:n]), sol[n]


def _tight_set(points, hvals, a, b):
    return [
        p for p, h in zip(points, hvals) if vec_dot_point(a, p) + b == h
    ]


def _initial_facet(points, hvals, n):
    """Grow a globally supporting affine function to a full-dim tight set."""
    pool = sorted(zip(hvals, points))
    a = tuple(Fraction(0) for _ in range(n))
    b = pool[0][0]
    tight = _tight_set(points, hvals, a, b)
    while affine_rank(tight) < n:
        anchor = frac_point(tight[0])
        g = next(
            (k for k in direction_kernel(tight)
             if any(vec_dot_point(k, p) != vec_dot_point(k, anchor) for p in points)),
            None,
        )
        if g is None:
            raise WindowTooSmall("window points are not full dimensional")
        rotated = False
        for gg in (g, tuple(-x for x in g)):
            gv = vec_dot_point(gg, anchor)
            best = None
            for p, h in zip(points, hvals):
                gp = vec_dot_point(gg, p) - gv
                if gp < 0:
                    slack = h - vec_dot_point(a, p) - b
                    t = slack / (-gp)
                    if best is None or t < best:
                        best = t
            if best is not None:
                a = tuple(x - best * Fraction(y) for x, y in zip(a, gg))
                b = b + best * gv
                tight = _tight_set(points, hvals, a, b)
                rotated = True
                break
        if not rotated:
            raise WindowTooSmall("cannot grow initial facet inside the window")
    return a, b, tight


def _rotate_across_ridge(points, hvals, a, b, verts, tight, ridge_pts):
    """The neighboring lower-hull facet through the given ridge."""
    kers = direction_kernel(ridge_pts)
    if len(kers) != 1:
        raise InternalError("ridge is not of codimension one")
    g = kers[0]
    gv = vec_dot_point(g, ridge_pts[0])
    # orient g to vanish on the ridge and be positive on the current cell
    inner = next((v for v in verts if vec_dot_point(g, v) != gv), None)
    if inner is None:
        raise InternalError("degenerate ridge")
    if vec_dot_point(g, inner) < gv:
        g = tuple(-x for x in g)
        gv = -gv
    best = None
    for p, h in zip(points, hvals):
        gp = vec_dot_point(g, p) - gv
        if gp < 0:
            slack = h - vec_dot_point(a, p) - b
            t = slack / (-gp)
            if best is None or t < best:
                best = t
    if best is None:
        raise WindowTooSmall("ridge rotation left the window")
    a2 = tuple(x - best * Fraction(y) for x, y in zip(a, g))
    b2 = b + best * gv
    return a2, b2, _tight_set(points, hvals, a2, b2)


# ---------------------------------------------------------------------------
# certificates


def certify_global_support(height: HeightFunction, a, b, cell_points):
    """H(x) >= a.x + b for every x in Z^n, equality exactly on cell_points.

    Reduced per residue class to enumerating an integer quadratic
    sublevel set; raises InternalError if the certificate fails.
    """
    n = height.dim
    cell_set = set(map(tuple, cell_points))
    found = set()
    Y = height.period
    for rep, rval in height.residues:
        # x = rep + z.Y, z in Z^n
        G2 = mat_mul(mat_mul(Y, height.gram), tuple(zip(*Y)))
        grep = vec_mat(frac_point(rep), height.gram)
        c2 = tuple(
            vec_dot_point(row, grep) + vec_dot_point(row, height.linear)
            - vec_dot_point(row, a)
            for row in Y
        )
        d2 = (
            height.quadratic_value(rep) + rval
            - vec_dot_point(a, rep) - Fraction(b)
        )
        for z in quadratic_sublevel_points(G2, c2, d2):
            x = tuple(int(r) + int(v) for r, v in zip(rep, vec_mat(z, Y)))
            val = height.value(x) - vec_dot_point(a, x) - Fraction(b)
            if val < 0:
                raise InternalError(f"support fails below lattice point {x}")
            if val == 0:
                if x not in cell_set:
                    raise InternalError(
                        f"lattice point {x} lies on the cell's support plane "
                        "but is not a recorded cell point"
                    )
                found.add(x)
    if found != cell_set:
        raise InternalError("cell points missing from the support-tight set")


def empty_ellipsoid_certificate(gram, cell_vertices):
    """Classical Delaunay predicate for the form ``gram`` at one cell.

    Returns the (center, radius^2) of the circumscribed ellipsoid and
    raises InternalError if any other lattice point is inside or on it.
    """
    height = quadratic_height(gram)
    a, b = _support_from_points(height, cell_vertices)
    certify_global_support(height, a, b, cell_vertices)
    Ginv = mat_inverse(gram)
    center = vec_mat(a, Ginv)
    rsq = vec_dot_point(vec_mat(center, gram), center) / 2 + Fraction(b)
    return center, rsq


# ---------------------------------------------------------------------------
# the subdivision itself


def _pad_radius(gram):
    n = len(gram)
    if n == 0:
        return 1
    lam_max = max(sum(abs(Fraction(x)) for x in row) for row in gram)
    gersh = min(
        Fraction(row[i]) - sum(abs(Fraction(x)) for j, x in enumerate(row) if j != i)
        for i, row in enumerate(gram)
    )
    if gersh > 0:
        lam_min = gersh
    else:
        lam_min = det(gram) / lam_max ** (n - 1) if n > 1 else Fraction(gram[0][0])
    return sqrt_ceil_frac(Fraction(n) * lam_max / lam_min) + 1


def regular_subdivision(height: HeightFunction, rank_cap=DELAUNAY_RANK_CAP,
                        deadline=None) -> PeriodicDecomposition:
    """The Y-periodic polytopal decomposition induced by the height.

    Cells are certified: globally supporting affine functions, and
    closure of the orbit set under ridge adjacency.
    """
    n = height.dim
    if n > rank_cap:
        raise RankTooLarge(f"rank {n} exceeds cap {rank_cap}")
    if n == 0:
        return PeriodicDecomposition(0, (((),),), ())
    if not is_positive_definite(height.gram):
        raise DegenerateSystem("height has indefinite leading form")

    pad = _pad_radius(height.gram)
    for attempt in range(4):
        try:
            return _regular_subdivision_window(height, pad, deadline)
        except WindowTooSmall:
            pad *= 2
    raise InternalError("window growth failed to converge")


def _regular_subdivision_window(height, pad, deadline):
    n = height.dim
    points = _window_points(height, pad)
    hvals = [height.value(p) for p in points]
    period = tuple(tuple(int(x) for x in row) for row in height.period)
    pinv = period_inverse(period)

    def canonical_facet(cell_verts):
        return canonical_translate(cell_verts, period, pinv)

    a, b, tight = _initial_facet(points, hvals, n)
    first = canonical_facet(polytope_vertices(tight))
    # re-anchor the facet at its canonical translate
    a, b = _support_from_points(height, first)
    tight = _tight_set(points, hvals, a, b)

    seen = {first}
    queue = [(a, b, tight)]
    tops = [first]
    while queue:
        if deadline is not None and time.monotonic() > deadline:
            raise PrymdegError("decomposition deadline exceeded")
        a, b, tight = queue.pop()
        verts = polytope_vertices(tight)
        certify_global_support(height, a, b, tight)
        for ridge in polytope_facets(verts):
            a2, b2, tight2 = _rotate_across_ridge(points, hvals, a, b, tight, ridge)
            if affine_rank(tight2) != n:
                raise WindowTooSmall("neighbor facet clipped by the window")
            key = canonical_facet(polytope_vertices(tight2))
            if key in seen:
                continue
            seen.add(key)
            a3, b3 = _support_from_points(height, key)
            tight3 = _tight_set(points, hvals, a3, b3)
            if affine_rank(tight3) != n:
                raise WindowTooSmall("canonical translate clipped by the window")
            queue.append((a3, b3, tight3))
            tops.append(key)
    return build_complex(tops, n, period)


def delaunay_decomposition(gram, rank_cap=DELAUNAY_RANK_CAP,
                           deadline=None) -> PeriodicDecomposition:
    """Delaunay decomposition of Z^n for a positive definite Gram matrix,
    with every cell certified by the exact empty-ellipsoid predicate."""
    gram = tuple(tuple(Fraction(x) for x in row) for row in gram)
    if gram and not is_positive_definite(gram):
        raise DegenerateSystem("form is not positive definite")
    decomp = regular_subdivision(quadratic_height(gram), rank_cap, deadline)
    for cell in decomp.top_cells():
        empty_ellipsoid_certificate(gram, cell)
    return decomp


def semi_delaunay_from_height(height: HeightFunction,
                              rank_cap=SEMI_DELAUNAY_RANK_CAP,
                              deadline=None) -> PeriodicDecomposition:
    return regular_subdivision(height, rank_cap, deadline)
