import json

import pytest

from conftest import corpus_curve, corpus_doc, corpus_names

from prymdeg.curve import (
    BRANCHWISE,
    NON_FIXED,
    SWAPPING,
    parse_curve,
    quotient_genus,
    quotient_graph,
    validate_and_classify,
)
from prymdeg.errors import (
    Disconnected,
    EndpointMismatch,
    InvolutionNotOrder2,
    MissingLoopTypeFlag,
    NonIntegralQuotientGenus,
    ParityViolation,
    ParseError,
    ValidationError,
)


def test_parse_fs_a2():
    c = parse_curve(corpus_doc("fs_a2"))
    assert len(c.components) == 2
    assert len(c.nodes) == 4
    assert not c.validated


def test_parse_degenerate_single_component():
    c = parse_curve({
        "components": [{"id": "C", "genus": 0, "smooth_fixed_points": 2}],
        "nodes": [],
        "involution": {},
    })
    v = validate_and_classify(c)
    assert v.validated and not v.nodes


def test_parse_missing_vertex_reference():
    doc = corpus_doc("fs_a2")
    doc["nodes"][0]["tail"] = "nope"
    with pytest.raises(ParseError) as exc:
        parse_curve(doc)
    assert "nodes[0].tail" in str(exc.value)


def test_parse_duplicate_id():
    doc = corpus_doc("fs_a2")
    doc["components"].append(dict(doc["components"][0]))
    with pytest.raises(ParseError) as exc:
        parse_curve(doc)
    assert "duplicate" in str(exc.value)


def test_classification_fs_a2():
    c = corpus_curve("fs_a2")
    assert set(c.classes().values()) == {NON_FIXED}


def test_classification_threecomp():
    c = corpus_curve("threecomp")
    assert set(c.classes().values()) == {NON_FIXED}
    vm = c.vmap()
    assert vm["E"] == "E" and vm["C1"] == "C2"


def test_classification_swapping_edge_between_exchanged_components():
    c = corpus_curve("mixed_533b")
    assert set(c.classes().values()) == {SWAPPING}


def test_classification_mixed():
    c = corpus_curve("mixed_533a")
    d = c.classes()
    assert d == {"e1": BRANCHWISE, "f1": SWAPPING, "f2": SWAPPING}


def test_involution_not_order_two():
    doc = corpus_doc("fs_a2")
    doc["involution"]["edges"] = {"e1": "e2", "e2": "e3", "e3": "e1", "e4": "e4"}
    # e4 is now a fixed non-loop edge with fixed endpoints; the 3-cycle on
    # e1,e2,e3 must be rejected first
    with pytest.raises(InvolutionNotOrder2):
        validate_and_classify(parse_curve(doc))


def test_endpoint_mismatch():
    doc = corpus_doc("threecomp")
    # e3 touches E and C1; mapping it to e1 (between C1 and C2) is incompatible
    doc["involution"]["edges"] = {"e3": "e1", "e1": "e3", "e2": "e4", "e4": "e2"}
    with pytest.raises(EndpointMismatch):
        validate_and_classify(parse_curve(doc))


def test_missing_loop_type_flag():
    doc = corpus_doc("beauville")
    del doc["nodes"][0]["fixed_loop_type"]
    with pytest.raises(MissingLoopTypeFlag):
        validate_and_classify(parse_curve(doc))


def test_spurious_loop_type_flag():
    doc = corpus_doc("fs_a2")
    doc["nodes"][0]["fixed_loop_type"] = "branchwise"
    with pytest.raises(MissingLoopTypeFlag):
        validate_and_classify(parse_curve(doc))


def test_parity_violation():
    doc = corpus_doc("dollar")
    doc["components"][0]["smooth_fixed_points"] = 2
    with pytest.raises(ParityViolation):
        validate_and_classify(parse_curve(doc))


def test_disconnected():
    doc = {
        "components": [{"id": "A", "genus": 1}, {"id": "B", "genus": 1}],
        "nodes": [],
        "involution": {},
    }
    with pytest.raises(Disconnected):
        validate_and_classify(parse_curve(doc))


def test_moved_component_with_smooth_fixed_points():
    doc = corpus_doc("exchanged_a2")
    doc["components"][0]["smooth_fixed_points"] = 2
    with pytest.raises(ValidationError):
        validate_and_classify(parse_curve(doc))


def test_non_integral_quotient_genus():
    # genus 2 with four fixed points on the normalization has no integral
    # quotient genus
    doc = {
        "components": [{"id": "C1", "genus": 2, "smooth_fixed_points": 2}],
        "nodes": [{"id": "f1", "tail": "C1", "head": "C1",
                   "fixed_loop_type": "branchwise"}],
        "involution": {},
    }
    with pytest.raises(NonIntegralQuotientGenus):
        validate_and_classify(parse_curve(doc))


def test_quotient_genus_arithmetic():
    assert quotient_genus(3, 4) == 1
    assert quotient_genus(1, 0) == 1
    assert quotient_genus(1, 4) == 0
    with pytest.raises(NonIntegralQuotientGenus):
        quotient_genus(2, 0)


def test_validate_idempotent():
    c = corpus_curve("threecomp")
    assert validate_and_classify(c) == c


def test_edge_order_invariance():
    doc = corpus_doc("threecomp")
    doc["nodes"] = list(reversed(doc["nodes"]))
    a = validate_and_classify(parse_curve(doc))
    b = corpus_curve("threecomp")
    assert a.node_class == b.node_class
    assert a.nodes == b.nodes


@pytest.mark.parametrize("name", corpus_names())
def test_nonfixed_count_even_and_quotient_edge_count(name):
    c = corpus_curve(name)
    classes = list(c.classes().values())
    n_nonfixed = classes.count(NON_FIXED)
    assert n_nonfixed % 2 == 0
    q = quotient_graph(c)
    assert len(q.edges) == classes.count(BRANCHWISE) + n_nonfixed // 2


def test_quotient_graph_threecomp():
    q = quotient_graph(corpus_curve("threecomp"))
    assert len(q.vertices) == 2
    assert len(q.edges) == 2
    assert dict(q.vertices) == {"C1": 1, "E": 1}
    # one loop at the image of C1=C2 and one edge joining it to E
    kinds = sorted((t == h) for _, t, h in q.edges)
    assert kinds == [False, True]


def test_quotient_graph_branchwise_loop():
    doc = {
        "components": [{"id": "C1", "genus": 3, "smooth_fixed_points": 2}],
        "nodes": [{"id": "f1", "tail": "C1", "head": "C1",
                   "fixed_loop_type": "branchwise"}],
        "involution": {},
    }
    q = quotient_graph(validate_and_classify(parse_curve(doc)))
    assert q.vertices == (("C1", 1),)
    assert len(q.edges) == 1 and q.edges[0][1] == q.edges[0][2]


def test_quotient_graph_drops_swapping():
    q = quotient_graph(corpus_curve("mixed_533b"))
    assert len(q.vertices) == 1
    assert q.edges == ()
