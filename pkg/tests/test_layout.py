import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from upbook.core import build_dag
from upbook.errors import (
    DomainMismatch,
    OverlappingSupports,
    PreconditionViolated,
    VertexAbsent,
)
from upbook.layout import (
    BookEmbedding,
    _crossings_interval_stab,
    check_uv_consecutive,
    concat,
    extends,
    find_crossings,
    merge,
    normalize_pages,
    restrict,
    split_at,
    splice_at_edge,
    validate,
)


def test_concat_basic():
    assert concat([["v1", "v2"], ["v3", "v4"]]) == ("v1", "v2", "v3", "v4")
    assert concat([[], ["a"]]) == ("a",)
    with pytest.raises(OverlappingSupports):
        concat([["a"], ["a"]])


def test_split_at():
    assert split_at(["a", "b", "c"], "b") == (("a",), ("c",))
    assert split_at(["a", "b", "c"], "a") == ((), ("b", "c"))
    with pytest.raises(VertexAbsent):
        split_at(["a"], "x")


def test_merge_examples():
    assert merge(["x", "u", "v", "y"], ["u", "m", "v"]) == ("x", "u", "m", "v", "y")
    assert merge(["u", "v"], ["u", "v"]) == ("u", "v")
    with pytest.raises(PreconditionViolated):
        merge(["u", "x", "v"], ["u", "m", "v"])


def test_extends_examples():
    assert extends(["a", "b", "c"], ["a", "c"])
    assert not extends(["a", "b", "c"], ["c", "a"])
    assert extends(["a", "b", "c"], [])


@st.composite
def merge_inputs(draw):
    n_pi = draw(st.integers(min_value=2, max_value=6))
    n_mid = draw(st.integers(min_value=0, max_value=4))
    pi = [f"p{i}" for i in range(n_pi)]
    cut = draw(st.integers(min_value=0, max_value=n_pi - 2))
    u, v = pi[cut], pi[cut + 1]
    pi_prime = [u] + [f"m{i}" for i in range(n_mid)] + [v]
    return pi, pi_prime


@given(merge_inputs())
@settings(max_examples=60)
def test_merge_extends_both(data):
    pi, pi_prime = data
    merged = merge(pi, pi_prime)
    assert extends(merged, pi)
    assert extends(merged, pi_prime)


@given(st.lists(st.integers(0, 20), min_size=1, max_size=10, unique=True),
       st.integers(0, 9))
@settings(max_examples=60)
def test_split_concat_roundtrip(vals, idx):
    order = [f"v{x}" for x in vals]
    u = order[idx % len(order)]
    pre, suf = split_at(order, u)
    assert concat([pre, [u], suf]) == tuple(order)


def test_splice_at_edge_generalizes_merge():
    big = ("x", "u", "v", "y")
    small = ("a", "u", "m", "v", "b")
    out = splice_at_edge(big, small, "u", "v")
    assert out == ("x", "a", "u", "m", "v", "b", "y")
    assert extends(out, big) and extends(out, small)


def _path_embedding():
    d = build_dag(["a", "b", "c"], [("a", "b"), ("b", "c")])
    emb = BookEmbedding(("a", "b", "c"), {("a", "b"): 1, ("b", "c"): 1})
    return d, emb


def test_validate_path_ok():
    d, emb = _path_embedding()
    rep = validate(d, emb, max_pages=1)
    assert rep.ok and rep.pages_used == 1


def test_validate_detects_crossing():
    d = build_dag(["a", "b", "c", "d"], [("a", "c"), ("b", "d")])
    emb = BookEmbedding(("a", "b", "c", "d"), {("a", "c"): 1, ("b", "d"): 1})
    rep = validate(d, emb)
    assert not rep.ok
    assert rep.crossings == [(("a", "c"), ("b", "d"))]


def test_validate_detects_backward_edge():
    d = build_dag(["a", "b"], [("b", "a")])
    emb = BookEmbedding(("a", "b"), {("b", "a"): 1})
    assert not validate(d, emb).topological_ok


def test_validate_domain_mismatch():
    d, emb = _path_embedding()
    with pytest.raises(DomainMismatch):
        validate(d, BookEmbedding(("a", "b"), {("a", "b"): 1}))
    with pytest.raises(DomainMismatch):
        validate(d, BookEmbedding(("a", "b", "c"), {("a", "b"): 1}))


def test_shared_endpoints_never_cross():
    d = build_dag(["a", "b", "c"], [("a", "b"), ("a", "c"), ("b", "c")])
    emb = BookEmbedding(("a", "b", "c"), {e: 1 for e in d.edges})
    assert validate(d, emb).ok


@st.composite
def random_embedding(draw):
    n = draw(st.integers(min_value=2, max_value=8))
    verts = [f"v{i}" for i in range(n)]
    pairs = [(verts[i], verts[j]) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), max_size=12, unique=True))
    d = build_dag(verts, chosen)
    pages = {e: draw(st.integers(1, 3)) for e in d.edges}
    return d, BookEmbedding(tuple(verts), pages)


@given(random_embedding())
@settings(max_examples=80)
def test_naive_crossings_match_interval_stab(data):
    d, emb = data
    naive = {tuple(sorted(p)) for p in find_crossings(d, emb)}
    stab = {tuple(sorted(p)) for p in _crossings_interval_stab(d, emb)}
    assert naive == stab


def test_check_uv_consecutive_single_triangle_fan():
    d = build_dag(["s", "a", "t"], [("s", "a"), ("a", "t"), ("s", "t")])
    emb = BookEmbedding(("s", "a", "t"), {e: 1 for e in d.edges})
    rep = check_uv_consecutive(d, emb, ("s", "a"), "s", "t")
    assert rep.ok


def test_check_uv_consecutive_reports_reasons():
    d = build_dag(["s", "a", "b", "t"],
                  [("s", "a"), ("s", "b"), ("a", "t"), ("b", "t"), ("s", "t")])
    emb = BookEmbedding(("s", "a", "b", "t"),
                        {("s", "a"): 1, ("s", "b"): 2, ("a", "t"): 2, ("b", "t"): 1, ("s", "t"): 3})
    rep = check_uv_consecutive(d, emb, ("s", "b"), "s", "t")
    assert not rep.ok
    assert any(r.startswith("(i)") for r in rep.reasons)
    assert any(r.startswith("(ii)") for r in rep.reasons)


def test_restrict_and_normalize():
    d = build_dag(["a", "b", "c"], [("a", "b"), ("b", "c")])
    emb = BookEmbedding(("a", "b", "c"), {("a", "b"): 3, ("b", "c"): 5})
    sub = build_dag(["a", "b"], [("a", "b")])
    r = restrict(emb, sub)
    assert r.order == ("a", "b") and r.pages == {("a", "b"): 3}
    nz = normalize_pages(emb)
    assert sorted(set(nz.pages.values())) == [1, 2]
