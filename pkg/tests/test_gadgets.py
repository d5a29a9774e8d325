import pytest

from upbook.core import build_dag, single_source_sink
from upbook.errors import InvalidK
from upbook.exact import domination_number, exact_ubt, min_pages_for_order
from upbook.gadgets import (
    build_auxiliary,
    build_reduction,
    check_gadget_properties,
    forced_spine_order,
    forward_witness,
)
from upbook.layout import BookEmbedding, validate


def test_auxiliary_k1_shape():
    h = build_auxiliary(1)
    assert len(h.vertices) == 12
    s, t = single_source_sink(h)
    assert (s, t) == ("u01", "z01")


def test_auxiliary_size_formula():
    for k in (1, 2, 3):
        h = build_auxiliary(k)
        assert len(h.vertices) == 4 * k + 8


def test_auxiliary_rejects_bad_k():
    with pytest.raises(InvalidK):
        build_auxiliary(0)


def test_auxiliary_order_is_forced():
    for k in (1, 2):
        h = build_auxiliary(k)
        order = forced_spine_order(h)
        assert len(order) == len(h.vertices)
        pos = {v: i for i, v in enumerate(order)}
        assert all(pos[a] < pos[b] for a, b in h.edges)


def test_auxiliary_exact_page_number():
    # the order is forced, so the page number is the chromatic number of the
    # single conflict graph
    for k, expect in ((1, 3), (2, 4)):
        h = build_auxiliary(k)
        pages, _ = min_pages_for_order(h, forced_spine_order(h))
        assert pages == expect
        res = exact_ubt(h, expect, kmin=1)
        assert res.ubt == expect


def test_reduction_sizes_linear():
    for k in (1, 2):
        for n_extra in (1, 3):
            g = build_dag(
                [f"n{i}" for i in range(n_extra)],
                [(f"n{i}", f"n{i + 1}") for i in range(n_extra - 1)],
            )
            gd = build_reduction(g, k)
            assert len(gd.g_prime.vertices) == len(g.vertices) + 4 * k + 8
            assert len(gd.g_prime.edges) == len(g.edges) + len(gd.h.edges) + 2 * len(g.vertices)
            s, t = single_source_sink(gd.g_prime)
            assert s == "u01" and t == f"z{k:02d}"


def test_reduction_single_vertex_k1():
    g = build_dag(["x"], [])
    gd = build_reduction(g, 1)
    assert len(gd.g_prime.vertices) == 13
    single_source_sink(gd.g_prime)


def test_forward_witness_valid_and_properties():
    g = build_dag(["x", "y", "z"], [("x", "y"), ("y", "z")])
    base = exact_ubt(g, 1)
    assert base.ubt == 1
    gd = build_reduction(g, 1)
    fw = forward_witness(gd, base.witness)
    assert validate(gd.g_prime, fw, max_pages=3).ok
    rep = check_gadget_properties(gd, fw)
    assert rep.ok


def test_gadget_iff_p3_positive():
    g = build_dag(["x", "y", "z"], [("x", "y"), ("y", "z")])
    gd = build_reduction(g, 1)
    res = exact_ubt(gd.g_prime, 3, kmin=3)
    assert res.ubt == 3
    assert check_gadget_properties(gd, res.witness).ok


def test_gadget_iff_diamond_negative():
    dia = build_dag(["p", "q", "r", "s"], [("p", "q"), ("p", "r"), ("q", "s"), ("r", "s")])
    gd = build_reduction(dia, 1)
    res = exact_ubt(gd.g_prime, 3, kmin=3)
    assert res.ubt == ">3"


def test_corrupted_witness_fails():
    g = build_dag(["x", "y"], [("x", "y")])
    gd = build_reduction(g, 1)
    fw = forward_witness(gd, exact_ubt(g, 1).witness)
    # move an original vertex before v_k on the spine
    order = list(fw.order)
    gx = order.index("g:x")
    vk = order.index("v01")
    order.insert(vk, order.pop(gx))
    bad = BookEmbedding(tuple(order), dict(fw.pages))
    rep = validate(gd.g_prime, bad)
    props = check_gadget_properties(gd, bad)
    assert not rep.ok or not props.ok


def test_domination_bound_k1():
    g = build_dag(["x", "y", "z"], [("x", "y"), ("y", "z")])
    gd = build_reduction(g, 1)
    k = 1
    gamma = domination_number(gd.g_prime, 2 * (k + 2) + 1)
    assert gamma <= 2 * (k + 2) + 1
    # explicit dominating set: every third vertex of each path plus c
    explicit = {"a", "d", "e", "h", "c", "u01", "z01"}
    covered = set()
    adj = gd.g_prime.und_adj()
    for v in explicit:
        covered |= {v, *adj[v]}
    assert covered == set(gd.g_prime.vertices)
