"""Chain complex of the dual graph and the induced involution on H1.

Coordinates on C1 are indexed by the canonical (sorted) edge order of a
validated curve, using the normalized orientations.  The boundary of an
edge is tail - head.  The sign rules for the chain involution: an edge
goes to minus itself exactly when it is a swapping node (a fixed loop
with exchanged branches, or a fixed edge with exchanged endpoints);
branchwise fixed edges are preserved; non-fixed edges map to their
partner with a plus sign thanks to the orientation normalization.
"""

from __future__ import annotations

from dataclasses import dataclass

from .curve import BRANCHWISE, NON_FIXED, SWAPPING, CurveWithInvolution, validate_and_classify
from .errors import InternalError
from .intlinalg import is_zero_vec, mat_eq, mat_mul, vec_mat


@dataclass(frozen=True)
class ChainSpace:
    edge_order: tuple[str, ...]
    vertex_order: tuple[str, ...]
    boundary: tuple  # one row per edge: tail - head in vertex coordinates

    @property
    def n_edges(self):
        return len(self.edge_order)

    def edge_index(self, eid):
        return self.edge_order.index(eid)


@dataclass(frozen=True)
class CycleBasis:
    chain: ChainSpace
    basis: tuple          # rows in C1 coordinates, one per non-tree edge
    spanning_tree: tuple  # edge ids
    non_tree_edges: tuple

    @property
    def rank(self):
        return len(self.basis)


@dataclass(frozen=True)
class InvolutionOnH1:
    iota0: tuple        # vertex permutation matrix
    iota1: tuple        # signed permutation matrix on C1
    iotaX: tuple        # matrix of the involution on the cycle basis


def chain_space(curve: CurveWithInvolution) -> ChainSpace:
    if not curve.validated:
        curve = validate_and_classify(curve)
    vids = curve.vertex_ids()
    vidx = {v: i for i, v in enumerate(vids)}
    rows = []
    for n in curve.nodes:
        row = [0] * len(vids)
        if not n.is_loop:
            row[vidx[n.tail]] += 1
            row[vidx[n.head]] -= 1
        rows.append(tuple(row))
    return ChainSpace(curve.edge_ids(), vids, tuple(rows))


def cycle_basis(curve: CurveWithInvolution) -> CycleBasis:
    """Fundamental cycles of a BFS spanning tree rooted at the first vertex.

    Each basis vector has coordinate 1 at its own non-tree edge and 0 at
    every other non-tree edge, which exhibits unimodularity directly.
    """
    if not curve.validated:
        curve = validate_and_classify(curve)
    chain = chain_space(curve)
    vids = chain.vertex_order
    root = vids[0]

    adj = {v: [] for v in vids}
    for n in curve.nodes:
        if n.is_loop:
            continue
        adj[n.tail].append((n.head, n.id, +1))
        adj[n.head].append((n.tail, n.id, -1))
    for v in adj:
        adj[v].sort(key=lambda t: (t[1], t[2]))

    # BFS; parent[v] = (previous vertex, edge id, direction of traversal)
    parent = {root: None}
    order = [root]
    queue = [root]
    tree = set()
    while queue:
        v = queue.pop(0)
        for w, eid, sign in adj[v]:
            if w not in parent:
                parent[w] = (v, eid, sign)
                tree.add(eid)
                order.append(w)
                queue.append(w)
    if len(parent) != len(vids):
        raise InternalError("spanning tree failed on a connected graph")

    def path_to_root(v):
        """C1 chain of the tree path from v up to the root."""
        coeff = {}
        while parent[v] is not None:
            prev, eid, sign = parent[v]
            # traversing from v back to prev goes against `sign`
            coeff[eid] = coeff.get(eid, 0) - sign
            v = prev
        return coeff

    non_tree = [n for n in curve.nodes if n.id not in tree]
    basis = []
    eidx = {e: i for i, e in enumerate(chain.edge_order)}
    for n in non_tree:
        vec = [0] * chain.n_edges
        vec[eidx[n.id]] = 1
        if not n.is_loop:
            # close up: walk head -> root -> tail along the tree
            for eid, c in path_to_root(n.head).items():
                vec[eidx[eid]] += c
            for eid, c in path_to_root(n.tail).items():
                vec[eidx[eid]] -= c
        row = tuple(vec)
        if not is_zero_vec(vec_mat(row, chain.boundary)):
            raise InternalError(f"fundamental cycle of {n.id!r} is not a cycle")
        basis.append(row)

    return CycleBasis(
        chain,
        tuple(basis),
        tuple(sorted(tree)),
        tuple(n.id for n in non_tree),
    )


def involution_on_chains(curve: CurveWithInvolution) -> tuple:
    """The signed permutation iota1 on C1 (rows: image of each edge)."""
    if not curve.validated:
        curve = validate_and_classify(curve)
    eids = curve.edge_ids()
    eidx = {e: i for i, e in enumerate(eids)}
    emap = curve.emap()
    classes = curve.classes()
    rows = []
    for eid in eids:
        row = [0] * len(eids)
        cls = classes[eid]
        if cls == SWAPPING:
            row[eidx[eid]] = -1
        elif cls == BRANCHWISE:
            row[eidx[eid]] = 1
        else:
            row[eidx[emap[eid]]] = 1
        rows.append(tuple(row))
    return tuple(rows)


def involution_on_vertices(curve: CurveWithInvolution) -> tuple:
    vids = curve.vertex_ids()
    vidx = {v: i for i, v in enumerate(vids)}
    vmap = curve.vmap()
    rows = []
    for v in vids:
        row = [0] * len(vids)
        row[vidx[vmap[v]]] = 1
        rows.append(tuple(row))
    return tuple(rows)


def involution_on_H1(basis: CycleBasis, iota1) -> tuple:
    """Matrix M with M @ basis == basis @ iota1 and M*M == I."""
    B = basis.basis
    eidx = {e: i for i, e in enumerate(basis.chain.edge_order)}
    cols = [eidx[e] for e in basis.non_tree_edges]
    images = tuple(vec_mat(b, iota1) for b in B)
    M = tuple(tuple(img[c] for c in cols) for img in images)
    if not mat_eq(mat_mul(M, B), images):
        raise InternalError("chain involution does not preserve the cycle space")
    if not mat_eq(mat_mul(M, M), tuple(
        tuple(1 if i == j else 0 for j in range(len(M))) for i in range(len(M))
    )):
        raise InternalError("induced map on H1 is not an involution")
    return M


@dataclass(frozen=True)
class HomologyData:
    """Bundle of everything downstream modules consume."""

    curve: CurveWithInvolution
    chain: ChainSpace
    cycles: CycleBasis
    involution: InvolutionOnH1

    @property
    def rank(self):
        return self.cycles.rank


def chain_vector(curve: CurveWithInvolution, coeffs) -> tuple:
    """C1 vector in canonical coordinates from a dict of edge coefficients
    given with respect to the *input* orientations."""
    flipped = dict(curve.flipped)
    out = []
    for n in curve.nodes:
        c = coeffs.get(n.id, 0)
        out.append(-c if flipped[n.id] else c)
    return tuple(out)


def homology_data(curve: CurveWithInvolution) -> HomologyData:
    if not curve.validated:
        curve = validate_and_classify(curve)
    cyc = cycle_basis(curve)
    iota0 = involution_on_vertices(curve)
    iota1 = involution_on_chains(curve)
    if not mat_eq(mat_mul(iota1, cyc.chain.boundary),
                  mat_mul(cyc.chain.boundary, iota0)):
        raise InternalError("iota1 does not commute with the boundary map")
    iotaX = involution_on_H1(cyc, iota1)
    return HomologyData(curve, cyc.chain, cyc, InvolutionOnH1(iota0, iota1, iotaX))
