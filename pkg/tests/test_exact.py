import itertools

import pytest

from upbook.core import build_dag, topological_order
from upbook.errors import ExceedsBound, NotTopological
from upbook.exact import domination_number, exact_ubt, min_pages_for_order
from upbook.generators import GenSpec, generate
from upbook.layout import validate


def naive_min_pages(dag, order):
    """Independent oracle: try all k^m page assignments, smallest k first."""
    edges = sorted(dag.edges)
    if not edges:
        return 0
    pos = {v: i for i, v in enumerate(order)}
    conf = {}
    for e1, e2 in itertools.combinations(edges, 2):
        a1, b1 = sorted((pos[e1[0]], pos[e1[1]]))
        a2, b2 = sorted((pos[e2[0]], pos[e2[1]]))
        if a2 < a1:
            a1, b1, a2, b2 = a2, b2, a1, b1
        conf[(e1, e2)] = a1 < a2 < b1 < b2
    for k in range(1, len(edges) + 1):
        for assign in itertools.product(range(k), repeat=len(edges)):
            ok = True
            for (i, e1), (j, e2) in itertools.combinations(enumerate(edges), 2):
                if assign[i] == assign[j] and conf[(e1, e2)]:
                    ok = False
                    break
            if ok:
                return k
    raise AssertionError("unreachable")


def test_exact_path_is_one_page():
    d = build_dag(["a", "b", "c", "d"], [("a", "b"), ("b", "c"), ("c", "d")])
    res = exact_ubt(d, 3)
    assert res.ubt == 1
    assert validate(d, res.witness).ok


def test_exact_diamond_is_two_pages():
    d = build_dag(["a", "b", "c", "d"], [("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")])
    res = exact_ubt(d, 3)
    assert res.ubt == 2
    assert validate(d, res.witness).ok
    assert res.witness.pages_used() == 2


def test_exact_cycles_at_most_two_pages():
    from upbook.generators import enumerate_small

    for n in (3, 4, 5, 6):
        for d in enumerate_small("cycle", n):
            res = exact_ubt(d, 2)
            assert res.decided and res.ubt <= 2


def test_exact_edgeless():
    d = build_dag(["a", "b"], [])
    res = exact_ubt(d, 2)
    assert res.ubt == 0
    assert res.witness.pages_used() == 0


def test_exact_beyond_budget():
    d = build_dag(["a", "b", "c", "d"], [("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")])
    res = exact_ubt(d, 1)
    assert res.ubt == ">1"
    assert res.witness is None


def test_exact_warns_on_large_input():
    verts = [f"v{i:02d}" for i in range(14)]
    d = build_dag(verts, [(verts[i], verts[i + 1]) for i in range(13)])
    with pytest.warns(UserWarning):
        exact_ubt(d, 1)


def test_witness_always_validates_with_ubt_pages():
    for seed in range(20):
        r = generate(GenSpec("random_dag", 7, seed, (("p", 35),)))
        res = exact_ubt(r.dag, 4)
        if res.decided and res.witness is not None:
            rep = validate(r.dag, res.witness)
            assert rep.ok
            assert rep.pages_used == res.ubt or res.ubt == 0


def test_exact_monotone_under_edge_deletion():
    for seed in range(10):
        r = generate(GenSpec("random_dag", 6, seed, (("p", 40),)))
        full = exact_ubt(r.dag, 5).ubt
        assert isinstance(full, int)
        for e in sorted(r.dag.edges)[:3]:
            sub = build_dag(r.dag.vertices, sorted(set(r.dag.edges) - {e}))
            assert exact_ubt(sub, 5).ubt <= full


def test_min_pages_examples():
    d = build_dag(["a", "b", "c"], [("a", "b"), ("b", "c")])
    assert min_pages_for_order(d, ("a", "b", "c"))[0] == 1
    d2 = build_dag(["a", "b", "c", "d"], [("a", "c"), ("b", "d")])
    assert min_pages_for_order(d2, ("a", "b", "c", "d"))[0] == 2
    verts = [f"v{i}" for i in range(8)]
    twist = build_dag(verts, [(f"v{i}", f"v{i + 4}") for i in range(4)])
    assert min_pages_for_order(twist, verts)[0] == 4


def test_min_pages_rejects_non_topological():
    d = build_dag(["a", "b"], [("a", "b")])
    with pytest.raises(NotTopological):
        min_pages_for_order(d, ("b", "a"))


def test_min_pages_matches_naive_oracle():
    checked = 0
    for seed in range(40):
        r = generate(GenSpec("random_dag", 5, seed, (("p", 45),)))
        if len(r.dag.edges) > 8:
            continue
        order = topological_order(r.dag)
        got, assign = min_pages_for_order(r.dag, order)
        expect = naive_min_pages(r.dag, order)
        assert got == expect, (seed, got, expect)
        checked += 1
    assert checked >= 20


def test_solver_nodes_counter_exposed():
    d = build_dag(["a", "b", "c"], [("a", "b"), ("b", "c")])
    res = exact_ubt(d, 2)
    assert res.nodes_explored > 0


def test_domination_star_and_path():
    star = build_dag(
        ["c"] + [f"x{i}" for i in range(5)], [("c", f"x{i}") for i in range(5)]
    )
    assert domination_number(star, 3) == 1
    p4 = build_dag(["a", "b", "c", "d"], [("a", "b"), ("b", "c"), ("c", "d")])
    assert domination_number(p4, 3) == 2


def test_domination_exceeds_bound():
    # three disjoint edges need 3 dominators
    d = build_dag(
        ["a", "b", "c", "d", "e", "f"], [("a", "b"), ("c", "d"), ("e", "f")]
    )
    with pytest.raises(ExceedsBound):
        domination_number(d, 2)
