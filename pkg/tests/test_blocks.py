import pytest

from upbook.blocks import (
    augment_cactus,
    embed_biconnected_st_outerplanar,
    embed_cactus,
    embed_cycle_dag,
    embed_st_blocks,
    triangulate_st_outerplanar,
)
from upbook.core import build_bc_tree, build_dag, recover_outer_embedding
from upbook.errors import AnchorNotSourceOrSink, NotBiconnected
from upbook.generators import GenSpec, enumerate_small, generate
from upbook.layout import restrict, validate
from upbook.core import classify_vertices, SOURCE, SINK


def test_triangulate_fixpoint():
    d = build_dag(["s", "a", "t"], [("s", "a"), ("a", "t"), ("s", "t")])
    assert triangulate_st_outerplanar(d) == d


def test_triangulate_diamond_adds_chord():
    d = build_dag(["s", "a", "b", "t"], [("s", "a"), ("s", "b"), ("a", "t"), ("b", "t")])
    tri = triangulate_st_outerplanar(d)
    assert len(tri.edges) == len(d.edges) + 1
    assert ("s", "t") in tri.edges
    emb = recover_outer_embedding(tri)
    assert emb.triangulated()


def test_triangulate_structural_invariants():
    for seed in range(20):
        r = generate(GenSpec("biconnected_st_outerplanar", 6 + seed, seed))
        tri = triangulate_st_outerplanar(r.dag)
        assert set(r.dag.edges) <= set(tri.edges)
        emb = recover_outer_embedding(tri)
        assert emb.triangulated()
        n, m = len(tri.vertices), len(tri.edges)
        assert len(emb.inner_faces) == m - n + 1
        # outer face unchanged: added edges are inner
        orig_emb = recover_outer_embedding(r.dag)
        for e in set(tri.edges) - set(r.dag.edges):
            assert emb.is_inner_edge(e)
        assert set(orig_emb.outer_cycle) == set(emb.outer_cycle)


def test_triangulate_rejects_non_biconnected():
    d = build_dag(["a", "b", "c"], [("a", "b"), ("b", "c")])
    with pytest.raises(NotBiconnected):
        triangulate_st_outerplanar(d)


def test_embed_biconnected_fan_two_pages():
    d = build_dag(
        ["a01", "b01", "s", "t"],
        [("s", "a01"), ("a01", "t"), ("s", "b01"), ("b01", "t"), ("s", "t")],
    )
    emb = embed_biconnected_st_outerplanar(d)
    assert validate(d, emb, max_pages=2).ok


def test_embed_biconnected_bound():
    for seed in range(60):
        r = generate(GenSpec("biconnected_st_outerplanar", 4 + seed % 40, seed))
        emb = embed_biconnected_st_outerplanar(r.dag)
        assert validate(r.dag, emb, max_pages=4).ok


def test_restriction_of_valid_embedding_stays_valid():
    for seed in range(15):
        r = generate(GenSpec("biconnected_st_outerplanar", 10, seed))
        tri = triangulate_st_outerplanar(r.dag)
        emb = embed_biconnected_st_outerplanar(tri)
        assert validate(tri, emb).ok
        cut = restrict(emb, r.dag)
        assert validate(r.dag, cut).ok


def test_embed_st_blocks_single_block():
    r = generate(GenSpec("biconnected_st_outerplanar", 9, 5))
    ps = embed_st_blocks(r.dag)
    assert validate(r.dag, ps.embedding, max_pages=4).ok


def test_embed_st_blocks_two_triangles_internal_cut():
    edges = [
        ("a1", "c"), ("c", "a2"), ("a1", "a2"),
        ("b1", "c"), ("c", "b2"), ("b1", "b2"),
    ]
    d = build_dag(sorted({v for e in edges for v in e}), edges)
    ps = embed_st_blocks(d)
    rep = validate(d, ps.embedding, max_pages=8)
    assert rep.ok
    assert all(len(p) <= 4 for p in ps.block_pages.values())


def test_embed_st_blocks_star_of_trivial_blocks():
    edges = [("c", f"x{i}") for i in range(5)]
    d = build_dag(sorted({v for e in edges for v in e}), edges)
    ps = embed_st_blocks(d)
    rep = validate(d, ps.embedding)
    assert rep.ok
    assert rep.pages_used == 1


def test_embed_st_blocks_bound_and_separation():
    for seed in range(60):
        r = generate(GenSpec("st_blocks", 4 + seed % 40, seed))
        ps = embed_st_blocks(r.dag)
        assert validate(r.dag, ps.embedding, max_pages=8).ok
        assert all(len(p) <= 4 for p in ps.block_pages.values())


def test_augment_cactus_single_edge():
    d = build_dag(["u", "v"], [("u", "v")])
    aug = augment_cactus(d)
    assert len(aug.vertices) == 3
    assert len(aug.edges) == 3
    bc = build_bc_tree(aug)
    assert len(bc.blocks) == 1 and not bc.is_trivial(0)


def test_augment_cactus_all_cycles_fixpoint():
    edges = [("a", "b"), ("b", "c"), ("a", "c")]
    d = build_dag(["a", "b", "c"], edges)
    assert augment_cactus(d) == d


def test_augment_cactus_tree():
    d = build_dag(["a", "b", "c", "d"], [("a", "b"), ("b", "c"), ("b", "d")])
    aug = augment_cactus(d)
    bc = build_bc_tree(aug)
    assert len(bc.blocks) == 3
    assert all(not bc.is_trivial(i) for i in range(3))
    assert bc.cut_vertices == frozenset({"b"})


def test_embed_cycle_dag_triangle():
    d = build_dag(["s", "a", "t"], [("s", "a"), ("a", "t"), ("s", "t")])
    emb = embed_cycle_dag(d, ("s", "first"))
    assert emb.order[0] == "s"
    assert validate(d, emb, max_pages=2).ok


def test_embed_cycle_dag_diamond():
    d = build_dag(["s", "a", "b", "t"], [("s", "a"), ("s", "b"), ("a", "t"), ("b", "t")])
    emb = embed_cycle_dag(d, ("s", "first"))
    assert emb.order[0] == "s"
    assert validate(d, emb, max_pages=2).ok


def test_embed_cycle_dag_rejects_internal_anchor():
    d = build_dag(["s", "a", "t"], [("s", "a"), ("a", "t"), ("s", "t")])
    with pytest.raises(AnchorNotSourceOrSink):
        embed_cycle_dag(d, ("a", "first"))


def test_embed_cycle_dag_all_enumerated_anchors():
    for n in (4, 5, 6, 7):
        for d in enumerate_small("cycle", n):
            cls = classify_vertices(d)
            for v, role in sorted(cls.items()):
                if role == SOURCE:
                    emb = embed_cycle_dag(d, (v, "first"))
                    assert emb.order[0] == v and validate(d, emb, max_pages=2).ok
                elif role == SINK:
                    emb = embed_cycle_dag(d, (v, "last"))
                    assert emb.order[-1] == v and validate(d, emb, max_pages=2).ok


def test_embed_cactus_single_cycle():
    d = build_dag(["s", "a", "b", "t"], [("s", "a"), ("s", "b"), ("a", "t"), ("b", "t")])
    ps = embed_cactus(d)
    assert validate(d, ps.embedding, max_pages=2).ok


def test_embed_cactus_bound_and_separation():
    for seed in range(60):
        r = generate(GenSpec("cactus", 1 + seed % 50, seed))
        ps = embed_cactus(r.dag)
        if not r.dag.edges:
            continue
        assert validate(r.dag, ps.embedding, max_pages=6).ok
        assert all(len(p) <= 2 for p in ps.block_pages.values())


def test_augmented_cactus_cycles_share_at_most_one_vertex():
    for seed in range(15):
        r = generate(GenSpec("cactus", 3 + seed * 3, seed))
        aug = augment_cactus(r.dag)
        bc = build_bc_tree(aug)
        for i in range(len(bc.blocks)):
            assert len(bc.blocks[i]) == len(bc.block_vertices(i))  # all cycles
            for j in range(i + 1, len(bc.blocks)):
                shared = bc.block_vertices(i) & bc.block_vertices(j)
                assert len(shared) <= 1


def test_embed_cactus_two_internal_children():
    edges = [
        ("x1", "c"), ("c", "y1"), ("x1", "y1"),
        ("x2", "c"), ("c", "y2"), ("x2", "y2"),
        ("c", "z1"), ("z1", "z2"), ("c", "z2"),
    ]
    d = build_dag(sorted({v for e in edges for v in e}), edges)
    ps = embed_cactus(d)
    assert validate(d, ps.embedding, max_pages=6).ok
    assert all(len(p) <= 2 for p in ps.block_pages.values())
