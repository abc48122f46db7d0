"""Decorated dual graphs of nodal curves with involution.

A curve is encoded purely combinatorially: vertices are irreducible
components (with genus and a count of smooth involution-fixed points),
edges are nodes.  The involution acts on both.  Validation classifies
every node as branchwise fixed, swapping, or non-fixed, and normalizes
edge orientations so that the image of an oriented edge runs between the
image vertices in the same tail-to-head order.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .errors import (
    Disconnected,
    EndpointMismatch,
    InvolutionNotOrder2,
    MissingLoopTypeFlag,
    NonIntegralQuotientGenus,
    ParityViolation,
    ParseError,
    ValidationError,
)

BRANCHWISE = "branchwise_fixed"
SWAPPING = "swapping"
NON_FIXED = "non_fixed"

_LOOP_TYPES = {"branchwise": BRANCHWISE, "swapping": SWAPPING}


@dataclass(frozen=True)
class ComponentSpec:
    id: str
    genus: int
    smooth_fixed_points: int
    involution_nontrivial: bool = True


@dataclass(frozen=True)
class NodeSpec:
    id: str
    tail: str
    head: str
    fixed_loop_type: str | None = None

    @property
    def is_loop(self):
        return self.tail == self.head


@dataclass(frozen=True)
class InvolutionSpec:
    vertex_map: tuple[tuple[str, str], ...]
    edge_map: tuple[tuple[str, str], ...]

    def vmap(self):
        return dict(self.vertex_map)

    def emap(self):
        return dict(self.edge_map)


@dataclass(frozen=True)
class CurveWithInvolution:
    components: tuple[ComponentSpec, ...]
    nodes: tuple[NodeSpec, ...]
    involution: InvolutionSpec
    # derived by validate_and_classify
    node_class: tuple[tuple[str, str], ...] = ()
    flipped: tuple[tuple[str, bool], ...] = ()
    validated: bool = False

    def component(self, cid):
        return next(c for c in self.components if c.id == cid)

    def node(self, nid):
        return next(n for n in self.nodes if n.id == nid)

    def classes(self):
        return dict(self.node_class)

    def vmap(self):
        return self.involution.vmap()

    def emap(self):
        return self.involution.emap()

    def edge_ids(self):
        return tuple(n.id for n in self.nodes)

    def vertex_ids(self):
        return tuple(c.id for c in self.components)

    def nodes_of_class(self, cls):
        d = self.classes()
        return tuple(n for n in self.nodes if d[n.id] == cls)

    def fixed_vertices(self):
        vm = self.vmap()
        return tuple(c.id for c in self.components if vm[c.id] == c.id)

    def branch_preimage_count(self, cid):
        """Fixed points on the normalization N_i coming from branchwise
        fixed nodes: one per incident branch, so loops count twice."""
        d = self.classes()
        count = 0
        for n in self.nodes:
            if d[n.id] != BRANCHWISE:
                continue
            count += (n.tail == cid) + (n.head == cid)
        return count


def _expect(cond, path, message):
    if not cond:
        raise ParseError(path, message)


def parse_curve(doc) -> CurveWithInvolution:
    """Parse a plain-dict document (the JSON input format) into a curve.

    Only schema-level checks happen here; mathematical consistency is
    the job of validate_and_classify.
    """
    _expect(isinstance(doc, dict), "$", "document must be an object")
    for key in ("components", "nodes"):
        _expect(key in doc, "$", f"missing required key {key!r}")
    _expect(isinstance(doc["components"], list) and doc["components"],
            "components", "must be a non-empty array")
    _expect(isinstance(doc["nodes"], list), "nodes", "must be an array")

    comps = []
    seen = set()
    for i, c in enumerate(doc["components"]):
        path = f"components[{i}]"
        _expect(isinstance(c, dict), path, "must be an object")
        _expect("id" in c, path, "missing id")
        cid = c["id"]
        _expect(isinstance(cid, str) and cid, f"{path}.id", "must be a non-empty string")
        _expect(cid not in seen, f"{path}.id", f"duplicate component id {cid!r}")
        seen.add(cid)
        genus = c.get("genus")
        _expect(isinstance(genus, int) and genus >= 0 and not isinstance(genus, bool),
                f"{path}.genus", "must be a nonnegative integer")
        sfp = c.get("smooth_fixed_points", 0)
        _expect(isinstance(sfp, int) and sfp >= 0 and not isinstance(sfp, bool),
                f"{path}.smooth_fixed_points", "must be a nonnegative integer")
        nontriv = c.get("involution_nontrivial", True)
        _expect(isinstance(nontriv, bool), f"{path}.involution_nontrivial",
                "must be a boolean")
        comps.append(ComponentSpec(cid, genus, sfp, nontriv))
    comp_ids = {c.id for c in comps}

    nodes = []
    seen = set()
    for i, n in enumerate(doc["nodes"]):
        path = f"nodes[{i}]"
        _expect(isinstance(n, dict), path, "must be an object")
        for key in ("id", "tail", "head"):
            _expect(key in n, path, f"missing {key}")
        nid = n["id"]
        _expect(isinstance(nid, str) and nid, f"{path}.id", "must be a non-empty string")
        _expect(nid not in seen, f"{path}.id", f"duplicate node id {nid!r}")
        seen.add(nid)
        for key in ("tail", "head"):
            _expect(n[key] in comp_ids, f"{path}.{key}",
                    f"unknown component id {n[key]!r}")
        flt = n.get("fixed_loop_type")
        _expect(flt is None or flt in _LOOP_TYPES, f"{path}.fixed_loop_type",
                "must be 'branchwise' or 'swapping'")
        nodes.append(NodeSpec(nid, n["tail"], n["head"], flt))
    node_ids = {n.id for n in nodes}

    inv = doc.get("involution", {})
    _expect(isinstance(inv, dict), "involution", "must be an object")
    vmap_in = inv.get("vertices", {})
    emap_in = inv.get("edges", {})
    for name, mp, ids in (("vertices", vmap_in, comp_ids), ("edges", emap_in, node_ids)):
        _expect(isinstance(mp, dict), f"involution.{name}", "must be an object")
        for k, v in mp.items():
            _expect(k in ids, f"involution.{name}.{k}", "unknown id")
            _expect(v in ids, f"involution.{name}.{k}", f"unknown image id {v!r}")
    # omitted entries are fixed points of the involution
    vmap = {c.id: vmap_in.get(c.id, c.id) for c in comps}
    emap = {n.id: emap_in.get(n.id, n.id) for n in nodes}

    comps.sort(key=lambda c: c.id)
    nodes.sort(key=lambda n: n.id)
    involution = InvolutionSpec(
        tuple(sorted(vmap.items())), tuple(sorted(emap.items()))
    )
    return CurveWithInvolution(tuple(comps), tuple(nodes), involution)


def _check_involutive(mp, what):
    for k, v in mp.items():
        if mp.get(v) != k:
            raise InvolutionNotOrder2(
                f"{what} map is not an involution at {k!r} -> {v!r} -> {mp.get(v)!r}"
            )


def _check_connected(curve):
    ids = curve.vertex_ids()
    if not ids:
        raise Disconnected("curve has no components")
    adj = {v: set() for v in ids}
    for n in curve.nodes:
        adj[n.tail].add(n.head)
        adj[n.head].add(n.tail)
    seen = {ids[0]}
    stack = [ids[0]]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    if len(seen) != len(ids):
        raise Disconnected(
            f"dual graph is disconnected ({len(seen)} of {len(ids)} components reachable)"
        )


def quotient_genus(genus, fixed_points_on_normalization):
    """g' with 2g - 2 = 2(2g' - 2) + f (Riemann-Hurwitz for a double cover)."""
    num = 2 * genus + 2 - fixed_points_on_normalization
    if num % 4:
        raise NonIntegralQuotientGenus(
            f"no integral quotient genus for genus {genus} with "
            f"{fixed_points_on_normalization} fixed points"
        )
    g = num // 4
    if g < 0:
        raise NonIntegralQuotientGenus(
            f"negative quotient genus for genus {genus} with "
            f"{fixed_points_on_normalization} fixed points"
        )
    return g


def validate_and_classify(curve: CurveWithInvolution) -> CurveWithInvolution:
    """Enforce all invariants, classify nodes, normalize orientations.

    Idempotent.  Raises a ValidationError subclass on inconsistent input.
    """
    vmap = curve.vmap()
    emap = curve.emap()
    _check_involutive(vmap, "vertex")
    _check_involutive(emap, "edge")
    _check_connected(curve)

    by_id = {n.id: n for n in curve.nodes}
    classes = {}
    for n in curve.nodes:
        img = emap[n.id]
        ends = {vmap[n.tail], vmap[n.head]}
        img_ends = {by_id[img].tail, by_id[img].head}
        if ends != img_ends:
            raise EndpointMismatch(
                f"edge {n.id!r} maps to {img!r} but endpoint images "
                f"{sorted(ends)} != {sorted(img_ends)}"
            )
        if img != n.id:
            classes[n.id] = NON_FIXED
            if n.fixed_loop_type is not None:
                raise MissingLoopTypeFlag(
                    f"edge {n.id!r} is not a fixed loop; fixed_loop_type must be omitted"
                )
            continue
        if n.is_loop:
            if vmap[n.tail] != n.tail:
                raise EndpointMismatch(
                    f"fixed loop {n.id!r} sits at a vertex moved by the involution"
                )
            if n.fixed_loop_type is None:
                raise MissingLoopTypeFlag(
                    f"fixed loop {n.id!r} requires fixed_loop_type"
                )
            classes[n.id] = _LOOP_TYPES[n.fixed_loop_type]
            continue
        if n.fixed_loop_type is not None:
            raise MissingLoopTypeFlag(
                f"edge {n.id!r} is not a fixed loop; fixed_loop_type must be omitted"
            )
        if vmap[n.tail] == n.tail and vmap[n.head] == n.head:
            classes[n.id] = BRANCHWISE
        elif vmap[n.tail] == n.head and vmap[n.head] == n.tail:
            classes[n.id] = SWAPPING
        else:
            raise EndpointMismatch(
                f"fixed edge {n.id!r} has endpoints neither fixed nor exchanged"
            )

    # orientation normalization: orbit representative (smaller id) keeps its
    # input orientation, the partner is oriented compatibly; fixed edges keep
    # the input orientation
    nodes = []
    flipped = {}
    for n in curve.nodes:
        img = emap[n.id]
        if img == n.id or n.id < img:
            nodes.append(n)
            flipped[n.id] = False
            continue
        rep = by_id[img]
        want_tail, want_head = vmap[rep.tail], vmap[rep.head]
        if (n.tail, n.head) == (want_tail, want_head):
            nodes.append(n)
            flipped[n.id] = False
        elif (n.head, n.tail) == (want_tail, want_head):
            nodes.append(replace(n, tail=want_tail, head=want_head))
            flipped[n.id] = True
        else:
            raise EndpointMismatch(
                f"edge {n.id!r} endpoints incompatible with image of {img!r}"
            )

    # re-validating a canonical curve must not erase the record of which
    # input orientations were flipped
    flip_record = curve.flipped if curve.validated else tuple(sorted(flipped.items()))
    out = replace(
        curve,
        nodes=tuple(nodes),
        node_class=tuple(sorted(classes.items())),
        flipped=flip_record,
        validated=True,
    )

    for c in out.components:
        if vmap[c.id] != c.id and c.smooth_fixed_points:
            raise ValidationError(
                f"component {c.id!r} is moved by the involution but declares "
                f"{c.smooth_fixed_points} smooth fixed points"
            )
        if vmap[c.id] == c.id and c.involution_nontrivial:
            f = c.smooth_fixed_points + out.branch_preimage_count(c.id)
            if f % 2:
                raise ParityViolation(
                    f"component {c.id!r} has odd fixed point count {f} "
                    "on its normalization"
                )
            quotient_genus(c.genus, f)  # raises if non-integral
    return out


@dataclass(frozen=True)
class QuotientGraph:
    """Dual graph of the quotient curve, with quotient genera.

    One vertex per component orbit, one edge per branchwise fixed node
    and per orbit of non-fixed nodes; swapping nodes disappear (their
    image is a smooth point).
    """

    vertices: tuple[tuple[str, int], ...]      # (orbit id, quotient genus)
    edges: tuple[tuple[str, str, str], ...]    # (edge id, tail orbit, head orbit)
    vertex_orbit: tuple[tuple[str, str], ...]  # component id -> orbit id

    def genus_map(self):
        return dict(self.vertices)

    def first_betti(self):
        return len(self.edges) - len(self.vertices) + 1

    def arithmetic_genus(self):
        return sum(g for _, g in self.vertices) + self.first_betti()


def quotient_graph(curve: CurveWithInvolution) -> QuotientGraph:
    if not curve.validated:
        curve = validate_and_classify(curve)
    vmap = curve.vmap()
    emap = curve.emap()
    classes = curve.classes()

    orbit = {}
    for c in curve.components:
        orbit[c.id] = min(c.id, vmap[c.id])
    vertices = []
    for oid in sorted(set(orbit.values())):
        c = curve.component(oid)
        if vmap[oid] == oid:
            if c.involution_nontrivial:
                f = c.smooth_fixed_points + curve.branch_preimage_count(oid)
                g = quotient_genus(c.genus, f)
            else:
                g = c.genus
        else:
            g = c.genus
        vertices.append((oid, g))

    edges = []
    for n in curve.nodes:
        cls = classes[n.id]
        if cls == SWAPPING:
            continue
        if cls == NON_FIXED and emap[n.id] < n.id:
            continue  # one edge per orbit
        edges.append((n.id, orbit[n.tail], orbit[n.head]))

    return QuotientGraph(
        tuple(vertices), tuple(edges), tuple(sorted(orbit.items()))
    )
