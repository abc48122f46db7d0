"""Exact sublattice algebra in the (half-integral) chain space.

Every lattice is stored as a Hermite-normal-form integer basis in
coordinates scaled by a denominator ``den`` (1 for integral lattices,
2 for images of the half-difference projection), with the denominator
reduced as far as possible.  That makes equality a plain field-by-field
comparison and keeps all arithmetic in Z.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import InternalError, PrymdegError
from .intlinalg import (
    content,
    hnf_basis,
    identity,
    kernel_basis,
    lcm,
    mat_mul,
    snf_transform,
    solve_left_integral,
    solve_left_rational,
    vec_mat,
)


class NonTwoTorsionQuotient(PrymdegError):
    pass


@dataclass(frozen=True)
class IntegerLattice:
    ambient_dim: int
    den: int
    basis: tuple  # HNF rows, integer entries, den-scaled coordinates

    @property
    def rank(self):
        return len(self.basis)

    def vectors(self):
        """Basis vectors as Fraction tuples in true (unscaled) coordinates."""
        return tuple(
            tuple(Fraction(x, self.den) for x in row) for row in self.basis
        )

    def contains_vector(self, v):
        scaled = [Fraction(x) * self.den for x in v]
        if any(x.denominator != 1 for x in scaled):
            return False
        target = tuple(int(x) for x in scaled)
        if not self.basis:
            return all(x == 0 for x in target)
        return solve_left_integral(self.basis, target) is not None

    def contains_lattice(self, other: "IntegerLattice") -> bool:
        return all(self.contains_vector(v) for v in other.vectors())

    def coordinates(self, v):
        """Integer coordinates of v in this basis, or None."""
        scaled = [Fraction(x) * self.den for x in v]
        if any(x.denominator != 1 for x in scaled):
            return None
        if not self.basis:
            return () if all(x == 0 for x in scaled) else None
        return solve_left_integral(self.basis, tuple(int(x) for x in scaled))

    def rational_coordinates(self, v):
        scaled = tuple(Fraction(x) * self.den for x in v)
        if not self.basis:
            return () if all(x == 0 for x in scaled) else None
        return solve_left_rational(self.basis, scaled)

    def from_coordinates(self, coords):
        """Lattice vector (Fraction tuple) with the given basis coordinates."""
        if not self.basis:
            return tuple(Fraction(0) for _ in range(self.ambient_dim))
        v = vec_mat(tuple(coords), self.basis)
        return tuple(Fraction(x, self.den) for x in v)

    def scaled(self, k):
        """The lattice k * L (k a positive integer or Fraction)."""
        k = Fraction(k)
        rows = [
            tuple(x * k.numerator for x in row) for row in self.basis
        ]
        return make_lattice_scaled(rows, self.ambient_dim, self.den * k.denominator)


def make_lattice_scaled(int_rows, ambient_dim, den) -> IntegerLattice:
    basis = hnf_basis(tuple(tuple(int(x) for x in r) for r in int_rows)) if int_rows else ()
    if not basis:
        return IntegerLattice(ambient_dim, 1, ())
    g = den
    for row in basis:
        g = gcd(g, content(row))
    if g > 1:
        basis = tuple(tuple(x // g for x in row) for row in basis)
        den //= g
    return IntegerLattice(ambient_dim, den, basis)


def make_lattice(vectors, ambient_dim) -> IntegerLattice:
    """Lattice generated by rational row vectors."""
    vectors = [tuple(Fraction(x) for x in v) for v in vectors]
    den = 1
    for v in vectors:
        for x in v:
            den = lcm(den, x.denominator)
    rows = [tuple(int(x * den) for x in v) for v in vectors]
    return make_lattice_scaled(rows, ambient_dim, den)


def lattice_sum(a: IntegerLattice, b: IntegerLattice) -> IntegerLattice:
    assert a.ambient_dim == b.ambient_dim
    return make_lattice(a.vectors() + b.vectors(), a.ambient_dim)


def lattice_intersection(a: IntegerLattice, b: IntegerLattice) -> IntegerLattice:
    assert a.ambient_dim == b.ambient_dim
    den = lcm(a.den, b.den)
    arows = [tuple(x * (den // a.den) for x in row) for row in a.basis]
    brows = [tuple(x * (den // b.den) for x in row) for row in b.basis]
    if not arows or not brows:
        return IntegerLattice(a.ambient_dim, 1, ())
    stacked = tuple(arows) + tuple(tuple(-x for x in row) for row in brows)
    ker = kernel_basis(stacked)
    rows = [vec_mat(k[: len(arows)], tuple(arows)) for k in ker]
    return make_lattice_scaled(rows, a.ambient_dim, den)


def index_in(sub: IntegerLattice, sup: IntegerLattice) -> int:
    """[sup : sub] for a finite-index sublattice; raises otherwise."""
    if sub.rank != sup.rank:
        raise ValueError("infinite index: ranks differ")
    coords = []
    for v in sub.vectors():
        c = sup.coordinates(v)
        if c is None:
            raise ValueError("not a sublattice")
        coords.append(c)
    if not coords:
        return 1
    D, _, _ = snf_transform(tuple(coords))
    idx = 1
    for i in range(len(D)):
        idx *= D[i][i]
    return idx


def inclusion_divisors(sub: IntegerLattice, sup: IntegerLattice):
    """Elementary divisors of sub inside sup (both must have equal rank)."""
    coords = tuple(sup.coordinates(v) for v in sub.vectors())
    if any(c is None for c in coords):
        raise ValueError("not a sublattice")
    if not coords:
        return ()
    D, _, _ = snf_transform(coords)
    return tuple(D[i][i] for i in range(min(len(D), len(D[0]))))


def saturation(lat: IntegerLattice) -> IntegerLattice:
    """Ambient integer lattice intersected with the rational span."""
    if not lat.basis:
        return IntegerLattice(lat.ambient_dim, 1, ())
    # x in span(basis) iff x kills the right kernel of the basis matrix
    ker = kernel_basis(tuple(zip(*lat.basis)))  # right kernel as rows
    if not ker:
        return make_lattice_scaled(identity(lat.ambient_dim), lat.ambient_dim, 1)
    rows = kernel_basis(tuple(zip(*ker)))
    return make_lattice_scaled(rows, lat.ambient_dim, 1)


# ---------------------------------------------------------------------------
# involution eigenstructure


@dataclass(frozen=True)
class InvolutionBlockProfile:
    k: int
    l: int
    m: int


def full_h1_lattice(hom) -> IntegerLattice:
    return make_lattice_scaled(hom.cycles.basis, hom.chain.n_edges, 1)


def eigenlattice(hom, sign: int) -> IntegerLattice:
    """[X]^+ or [X]^- as a saturated sublattice of the chain space."""
    B = hom.cycles.basis
    if not B:
        return IntegerLattice(hom.chain.n_edges, 1, ())
    iota1 = hom.involution.iota1
    imgs = mat_mul(B, iota1)
    diff = tuple(
        tuple(x - sign * y for x, y in zip(img, row))
        for img, row in zip(imgs, B)
    )
    ker = kernel_basis(diff)
    rows = [vec_mat(k, B) for k in ker]
    return make_lattice_scaled(rows, hom.chain.n_edges, 1)


def minus_projection_lattice(hom) -> IntegerLattice:
    """X^- = { (x - iota(x))/2 : x in H1 }, stored over denominator 2."""
    B = hom.cycles.basis
    iota1 = hom.involution.iota1
    rows = [
        tuple(x - y for x, y in zip(row, vec_mat(row, iota1)))
        for row in B
    ]
    return make_lattice_scaled(rows, hom.chain.n_edges, 2)


def fixed_chain_lattice(hom) -> IntegerLattice:
    """[C1]^+ : chains fixed by the involution."""
    iota1 = hom.involution.iota1
    n = hom.chain.n_edges
    diff = tuple(
        tuple(iota1[i][j] - (1 if i == j else 0) for j in range(n))
        for i in range(n)
    )
    return make_lattice_scaled(kernel_basis(diff), n, 1)


def klm_invariants(hom) -> InvolutionBlockProfile:
    """Block profile (k, l, m) of the involution on H1.

    m is read off the 2-group X^-/[X]^-; the consistency identities
    k+l+2m = rank X, k+m = rank [X]^+, l+m = rank [X]^- are enforced.
    """
    xplus = eigenlattice(hom, +1)
    xminus_br = eigenlattice(hom, -1)
    xminus = minus_projection_lattice(hom)
    divisors = inclusion_divisors(xminus_br, xminus)
    if any(d not in (1, 2) for d in divisors):
        raise NonTwoTorsionQuotient(
            f"X^-/[X]^- has invariants {divisors}; expected only 1 and 2"
        )
    m = sum(1 for d in divisors if d == 2)
    k = xplus.rank - m
    l = xminus_br.rank - m
    if k < 0 or l < 0 or k + l + 2 * m != hom.rank:
        raise InternalError(
            f"inconsistent block profile k={k} l={l} m={m} rank={hom.rank}"
        )
    if xminus.rank != l + m:
        raise InternalError("rank X^- != l + m")
    return InvolutionBlockProfile(k, l, m)


def cokernel_torsion_data(M):
    """Torsion of Z^r/(1+iota)Z^r with an explicit quotient map.

    Returns (rank, tau) where tau maps an integer vector in cycle
    coordinates to its class in (Z/2)^rank.
    """
    r = len(M)
    one_plus = tuple(
        tuple((1 if i == j else 0) + M[i][j] for j in range(r)) for i in range(r)
    )
    D, U, V = snf_transform(one_plus)
    divisors = [D[i][i] for i in range(r)]
    torsion_pos = [i for i, d in enumerate(divisors) if d >= 2]
    if any(divisors[i] != 2 for i in torsion_pos):
        raise InternalError(
            f"torsion of X/(1+iota)X has invariants {divisors}; expected 2-torsion"
        )

    def tau(y):
        w = vec_mat(tuple(y), V)
        return tuple(w[i] % 2 for i in torsion_pos)

    return len(torsion_pos), tau


def prym_cokernel_torsion(hom) -> int:
    """2-rank of the torsion of X/(1+iota)X; must equal k."""
    k_tor, _ = cokernel_torsion_data(hom.involution.iotaX)
    profile = klm_invariants(hom)
    if k_tor != profile.k:
        raise InternalError(
            f"torsion rank {k_tor} disagrees with block profile k={profile.k}"
        )
    return k_tor


# ---------------------------------------------------------------------------
# the second period lattice Y^-


@dataclass(frozen=True)
class YMinusResult:
    """Y^- when a structural rule pins it down, else certified bounds.

    status: 'exact' (lattice known), 'index_only' (only [X^- : Y^-]
    known), or 'unknown'.  The bounds 2X^- and [X]^- always hold in the
    sense that 2X^- is contained in Y^- and Y^- injects into [X]^-.
    """

    status: str
    lattice: IntegerLattice | None
    index_in_x_minus: int | None
    lower_bound: IntegerLattice
    upper_bound: IntegerLattice
    rule: str

    @property
    def is_exact(self):
        return self.status == "exact"


def y_minus_lattice(curve, hom, xminus: IntegerLattice) -> YMinusResult:
    from .curve import NON_FIXED, SWAPPING  # local import to avoid cycle noise

    classes = curve.classes()
    counts = {NON_FIXED: 0, SWAPPING: 0, "branchwise_fixed": 0}
    for _, cls in curve.node_class:
        counts[cls] += 1
    smooth = sum(c.smooth_fixed_points for c in curve.components)
    two_xminus = xminus.scaled(2)
    upper = eigenlattice(hom, -1)

    if counts[SWAPPING] == 0 and smooth == 0:
        return YMinusResult("exact", two_xminus, None, two_xminus, upper,
                            "no_swapping_nodes_no_smooth_fixed_points")

    n_comp = len(curve.components)
    vmap = curve.vmap()
    kinds = {cls for _, cls in curve.node_class}
    if counts[SWAPPING] >= 1:
        irreducible_shape = n_comp == 1 and kinds <= {
            NON_FIXED, SWAPPING
        } or (n_comp == 1 and kinds <= {"branchwise_fixed", SWAPPING})
        exchanged_pair_shape = (
            n_comp == 2
            and all(vmap[c.id] != c.id for c in curve.components)
            and kinds == {SWAPPING}
        )
        if irreducible_shape or exchanged_pair_shape:
            if smooth > 0:
                return YMinusResult("exact", xminus, 1, two_xminus, upper,
                                    "swapping_dichotomy_with_smooth_fixed_points")
            return YMinusResult("index_only", None, 2, two_xminus, upper,
                                "swapping_dichotomy_no_smooth_fixed_points")

    return YMinusResult("unknown", None, None, two_xminus, upper,
                        "outside_rule_table")
