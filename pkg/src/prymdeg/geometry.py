"""Shared exact polyhedral machinery.

Points are tuples of Fractions (or ints) in the coordinates of some
lattice basis.  Cells of periodic decompositions are stored as sorted
tuples of their vertices, translated to a canonical representative
modulo the period lattice.  Everything is exact; there is no floating
point anywhere in a predicate.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InternalError
from .intlinalg import (
    frac_floor,
    kernel_basis,
    lcm,
    mat_inverse,
    rank,
    snf_transform,
    vec_mat,
    vec_sub,
)


def frac_point(p):
    return tuple(Fraction(x) for x in p)


def scale_to_int_rows(diffs):
    den = 1
    for d in diffs:
        for x in d:
            den = lcm(den, Fraction(x).denominator)
    return tuple(tuple(int(Fraction(x) * den) for x in d) for d in diffs)


def affine_rank(points):
    if len(points) <= 1:
        return 0
    p0 = points[0]
    diffs = [vec_sub(frac_point(p), frac_point(p0)) for p in points[1:]]
    return rank(scale_to_int_rows(diffs))


def direction_kernel(points):
    """Integer covectors vanishing on all differences of the point set."""
    p0 = frac_point(points[0])
    diffs = [vec_sub(frac_point(p), p0) for p in points[1:]]
    if not diffs:
        n = len(p0)
        return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
    rows = scale_to_int_rows(diffs)
    return kernel_basis(tuple(zip(*rows)))


# ---------------------------------------------------------------------------
# exact gift-wrapping for polytopes given by a finite point set


def vec_dot_point(w, p):
    return sum(Fraction(a) * Fraction(b) for a, b in zip(w, p))


def _support_data(points, w):
    vals = [vec_dot_point(w, p) for p in points]
    c = max(vals)
    tight = [i for i, v in enumerate(vals) if v == c]
    return c, tight, vals


def _grow_supporting_face(points, w, target_rank):
    """Rotate the supporting hyperplane of `w` until its tight set has
    affine rank target_rank.  Returns (w, c, tight indices)."""
    w = tuple(Fraction(x) for x in w)
    c, tight, vals = _support_data(points, w)
    while affine_rank([points[i] for i in tight]) < target_rank:
        anchor = points[tight[0]]
        g = next(
            (k for k in direction_kernel([points[i] for i in tight])
             if any(vec_dot_point(k, p) != vec_dot_point(k, anchor) for p in points)),
            None,
        )
        if g is None:
            raise InternalError("point set has no full-rank supporting face")
        rotated = False
        for gg in (g, tuple(-x for x in g)):
            gv = vec_dot_point(gg, anchor)
            cand = []
            for i, p in enumerate(points):
                dp = vec_dot_point(gg, p)
                if dp > gv:
                    cand.append(Fraction(c - vals[i]) / (dp - gv))
            if cand:
                t_star = min(cand)
                w = tuple(Fraction(x) + t_star * Fraction(y) for x, y in zip(w, gg))
                c, tight, vals = _support_data(points, w)
                rotated = True
                break
        if not rotated:
            raise InternalError("cannot rotate supporting hyperplane")
    return w, c, tight


def polytope_vertices(points):
    """Extreme points of conv(points), exact."""
    points = [frac_point(p) for p in points]
    uniq = sorted(set(points))
    d = affine_rank(uniq)
    if d == 0:
        return tuple(uniq)
    if d == 1:
        return (uniq[0], uniq[-1])
    out = set()
    for face in polytope_facets(uniq):
        out.update(polytope_vertices(face))
    return tuple(sorted(out))


def polytope_facets(points):
    """Facets of conv(points) as point subsets (all given points on the
    facet, not only its vertices).  Requires affine rank >= 1."""
    points = [frac_point(p) for p in points]
    uniq = sorted(set(points))
    d = affine_rank(uniq)
    if d == 0:
        return []
    if d == 1:
        return [[uniq[0]], [uniq[-1]]]

    n = len(uniq[0])
    # initial supporting direction: any covector not constant on the set
    w0 = None
    for j in range(n):
        if any(p[j] != uniq[0][j] for p in uniq):
            w0 = tuple(Fraction(int(i == j)) for i in range(n))
            break
    w, c, tight = _grow_supporting_face(uniq, w0, d - 1)

    facets = set()
    queue = [tuple(sorted(tight))]
    facets.add(queue[0])
    result = [queue[0]]
    while queue:
        f_idx = queue.pop()
        fpoints = [uniq[i] for i in f_idx]
        # ridges: facets of the facet, one recursion level down
        for ridge in polytope_facets(fpoints):
            nb = _neighbor_facet(uniq, list(f_idx), ridge)
            key = tuple(sorted(nb))
            if key not in facets:
                facets.add(key)
                result.append(key)
                queue.append(key)
    return [[uniq[i] for i in f] for f in result]


def _neighbor_facet(points, f_idx, ridge_points):
    """The other facet of conv(points) through the given ridge."""
    # supporting data of the current facet
    ridge_set = set(map(tuple, ridge_points))
    kers = direction_kernel(ridge_points)
    fpoint = next(
        points[i] for i in f_idx if tuple(points[i]) not in ridge_set
    )
    g = next(
        (k for k in kers
         if vec_dot_point(k, fpoint) != vec_dot_point(k, ridge_points[0])),
        None,
    )
    if g is None:
        raise InternalError("ridge is not a ridge of the facet")
    gamma = vec_dot_point(g, ridge_points[0])
    # orient g negatively on the current facet
    if vec_dot_point(g, fpoint) > gamma:
        g = tuple(-x for x in g)
        gamma = -gamma
    # among points on the positive side, the neighbor facet maximizes the
    # rotation angle: it is the support of g relative to the facet plane
    w_f, c_f = _facet_hyperplane(points, f_idx)
    best = None
    for i, p in enumerate(points):
        gp = vec_dot_point(g, p)
        if gp <= gamma:
            continue
        slope = (c_f - vec_dot_point(w_f, p)) / (gp - gamma)
        if best is None or slope < best[0]:
            best = (slope, i)
    if best is None:
        raise InternalError("ridge has no neighbor; polytope not full-dim?")
    t_star = best[0]
    w_new = tuple(Fraction(a) + t_star * Fraction(b) for a, b in zip(w_f, g))
    c_new = c_f + t_star * gamma
    tight = [
        i for i, p in enumerate(points) if vec_dot_point(w_new, p) == c_new
    ]
    return tight


def _facet_hyperplane(points, f_idx):
    """(w, c) with w.p == c on the facet and w.p <= c on all points."""
    fpoints = [points[i] for i in f_idx]
    kers = direction_kernel(fpoints)
    others = [p for i, p in enumerate(points) if i not in set(f_idx)]
    for k in kers:
        gamma = vec_dot_point(k, fpoints[0])
        vals = [vec_dot_point(k, p) for p in others]
        if all(v == gamma for v in vals):
            continue
        if all(v <= gamma for v in vals):
            return tuple(Fraction(x) for x in k), gamma
        if all(v >= gamma for v in vals):
            return tuple(-Fraction(x) for x in k), -gamma
    raise InternalError("facet hyperplane not found")


def is_parallelepiped(verts):
    """True iff the vertex set is {v0 + sum of subset of d generators}."""
    from itertools import combinations

    verts = sorted(frac_point(v) for v in verts)
    d = affine_rank(verts)
    if len(verts) != 2 ** d:
        return False
    if d == 0:
        return True
    v0 = verts[0]
    diffs = [vec_sub(v, v0) for v in verts[1:]]
    for gens in combinations(diffs, d):
        span = set()
        for mask in range(2 ** d):
            s = v0
            for i in range(d):
                if mask >> i & 1:
                    s = tuple(a + b for a, b in zip(s, gens[i]))
            span.add(s)
        if span == set(verts):
            return True
    return False


# ---------------------------------------------------------------------------
# periodic cell complexes


@dataclass(frozen=True)
class PeriodicDecomposition:
    """Cell complex in R^n, periodic under an integer period lattice.

    ``cells`` holds one canonical representative per translation orbit,
    for every dimension (closed under taking faces).  A cell is a sorted
    tuple of its vertices; vertices are Fraction tuples.
    """

    dimension: int
    cells: tuple
    period: tuple  # HNF rows of the period lattice (integers)

    def cells_of_dim(self, d):
        return tuple(c for c in self.cells if affine_rank(c) == d)

    def top_cells(self):
        return self.cells_of_dim(self.dimension)

    def vertices(self):
        return tuple(c[0] for c in self.cells if len(c) == 1 and affine_rank(c) == 0)

    def census(self):
        counts = {}
        for c in self.cells:
            d = affine_rank(c)
            counts[d] = counts.get(d, 0) + 1
        return dict(sorted(counts.items()))

    def shape_summary(self):
        """Multiset of (dim, #vertices, parallelepiped?) over top cells."""
        out = {}
        for c in self.top_cells():
            key = (affine_rank(c), len(c), is_parallelepiped(c))
            out[key] = out.get(key, 0) + 1
        return dict(sorted(out.items()))


def period_inverse(period):
    return mat_inverse(period)


def canonical_translate(verts, period, pinv):
    """Translate the cell so its lexicographically least vertex has
    period-coordinates in [0, 1)^n."""
    verts = sorted(frac_point(v) for v in verts)
    if not period:
        return tuple(verts)
    anchor = verts[0]
    coords = vec_mat(anchor, pinv)
    shift_coords = tuple(frac_floor(c) for c in coords)
    if all(s == 0 for s in shift_coords):
        return tuple(verts)
    shift = vec_mat(shift_coords, period)
    return tuple(vec_sub(v, frac_point(shift)) for v in verts)


def build_complex(top_cells, dimension, period):
    """Assemble a PeriodicDecomposition from top-cell vertex sets.

    Faces are generated by intersecting cells with translated cells;
    for a face-to-face periodic tiling this yields the full face poset.
    """
    if dimension == 0:
        # a single point; its only cell is the origin vertex
        return PeriodicDecomposition(0, (((),),), ())
    period = tuple(tuple(int(x) for x in row) for row in period)
    pinv = period_inverse(period)
    tops = sorted({canonical_translate(c, period, pinv) for c in top_cells})

    # translates of top cells that can touch a canonical representative
    radius_box = _touch_radius(tops, period, pinv)
    translates = []
    for cell in tops:
        for shift in radius_box:
            translates.append(
                tuple(sorted(tuple(a + b for a, b in zip(v, shift)) for v in cell))
            )

    cells = set(tops)
    frontier = set(tops)
    while frontier:
        new = set()
        for cell in frontier:
            cset = set(cell)
            for other in translates:
                inter = cset.intersection(other)
                if not inter or len(inter) == len(cell):
                    continue
                can = canonical_translate(tuple(inter), period, pinv)
                if can not in cells:
                    new.add(can)
        cells.update(new)
        frontier = new
    return PeriodicDecomposition(dimension, tuple(sorted(cells)), period)


def _touch_radius(tops, period, pinv):
    """Integer translation vectors large enough to cover cell contacts."""
    lo = [Fraction(0)] * len(period)
    hi = [Fraction(0)] * len(period)
    for cell in tops:
        for v in cell:
            coords = vec_mat(frac_point(v), pinv)
            for i, c in enumerate(coords):
                lo[i] = min(lo[i], c)
                hi[i] = max(hi[i], c)
    from itertools import product

    ranges = [
        range(frac_floor(l - h) - 1, frac_floor(h - l) + 2)
        for l, h in zip(lo, hi)
    ]
    out = []
    for combo in product(*ranges):
        out.append(frac_point(vec_mat(combo, period)))
    return out


def coset_representatives(sub_rows, sup_rows):
    """Representatives of sup/sub as integer vectors in ambient coords.

    Both arguments are bases (rows) of full-rank lattices with
    sub contained in sup.
    """
    from .intlinalg import solve_left_integral

    coords = []
    for row in sub_rows:
        c = solve_left_integral(sup_rows, tuple(row))
        if c is None:
            raise ValueError("not a sublattice")
        coords.append(c)
    D, U, V = snf_transform(tuple(coords))
    r = len(sup_rows)
    vinv = mat_inverse(V)
    from itertools import product

    reps = []
    for combo in product(*[range(max(D[i][i], 1)) for i in range(r)]):
        y = vec_mat(combo, vinv)
        y = tuple(int(x) for x in y)
        reps.append(tuple(int(v) for v in vec_mat(y, sup_rows)))
    return reps


def refine_period(decomp: PeriodicDecomposition, new_period):
    """Re-express the complex with a finer period lattice (a sublattice
    of the current one); orbit representatives multiply accordingly."""
    if decomp.dimension == 0:
        return decomp
    new_period = tuple(tuple(int(x) for x in r) for r in new_period)
    reps = coset_representatives(new_period, decomp.period)
    pinv = period_inverse(new_period)
    cells = set()
    for cell in decomp.cells:
        for t in reps:
            shifted = tuple(
                tuple(a + b for a, b in zip(v, frac_point(t))) for v in cell
            )
            cells.add(canonical_translate(shifted, new_period, pinv))
    return PeriodicDecomposition(decomp.dimension, tuple(sorted(cells)), new_period)
