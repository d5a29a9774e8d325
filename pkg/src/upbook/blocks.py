"""Embedders for outerplanar graphs assembled from biconnected blocks.

Biconnected st-outerplanar graphs are triangulated, a dual path through
the face tree is embedded as a primary outerpath, and the remaining
one-sided pieces are inserted at their separation edges (4 pages).  Graphs
whose blocks are st-DAGs and cacti are handled by composing block layouts
along the BC-tree: children attach around their cut vertex (sink-side
before, source-side after, internal children nested), and pages are
assigned to whole blocks' local page classes by first-fit over the exact
conflict graph of the composed order, within the 8- or 6-page pool.
"""
from __future__ import annotations

from dataclasses import dataclass

from .core import (
    BcTree,
    Dag,
    Edge,
    OuterEmbedding,
    build_bc_tree,
    build_dag,
    classify_vertices,
    induced_by_edges,
    recover_outer_embedding,
    reverse_dag,
    single_source_sink,
    INTERNAL,
    SINK,
    SOURCE,
)
from .errors import (
    AnchorNotSourceOrSink,
    BimodalityViolation,
    BlockNotStDag,
    InternalInvariantError,
    MultiSourceSink,
    NotBiconnected,
    NotCactus,
    UpbookError,
)
from .layout import BookEmbedding, _edges_cross, restrict, validate
from .outerpath import (
    _Faces,
    _fan_decomposition,
    embed_primary_outerpath,
    insert_one_sided,
)


# ---------------------------------------------------------------------------
# triangulating augmentation


def _face_source(dag: Dag, face) -> str:
    srcs = []
    n = len(face)
    for i, v in enumerate(face):
        a = face[(i - 1) % n]
        b = face[(i + 1) % n]
        out_a = (v, a) in dag.edges
        out_b = (v, b) in dag.edges
        if out_a and out_b:
            srcs.append(v)
    if len(srcs) != 1:
        raise InternalInvariantError(f"face {face} has {len(srcs)} sources")
    return srcs[0]


def triangulate_st_outerplanar(dag: Dag) -> Dag:
    """Augment a biconnected st-outerplanar graph to an internally
    triangulated one by fanning every inner face from its unique face
    source.  Only inner edges are added; acyclicity and the single
    source/sink are preserved."""
    emb = recover_outer_embedding(dag)
    bc = build_bc_tree(dag)
    if len(bc.blocks) != 1 or len(dag.vertices) < 3:
        raise NotBiconnected("triangulation needs a biconnected graph")
    single_source_sink(dag)
    new_edges = set(dag.edges)
    for face in emb.inner_faces:
        if len(face) == 3:
            continue
        fs = _face_source(dag, face)
        for v in face:
            if v != fs and not dag.has_und_edge(fs, v):
                new_edges.add((fs, v))
    return build_dag(dag.vertices, sorted(new_edges))


# ---------------------------------------------------------------------------
# biconnected st-outerplanar graphs on 4 pages


def _dual_tree_neighbors(emb: OuterEmbedding) -> dict[int, list[int]]:
    nbrs: dict[int, list[int]] = {i: [] for i in range(len(emb.inner_faces))}
    for a, b in sorted(emb.dual_edges):
        nbrs[a].append(b)
        nbrs[b].append(a)
    return nbrs


def _tree_path(nbrs, a, b) -> list[int] | None:
    prev = {a: None}
    queue = [a]
    while queue:
        x = queue.pop(0)
        if x == b:
            path = [b]
            while prev[path[-1]] is not None:
                path.append(prev[path[-1]])
            return list(reversed(path))
        for y in nbrs[x]:
            if y not in prev:
                prev[y] = x
                queue.append(y)
    return None


def _hanging_components(dag: Dag, emb: OuterEmbedding, spine: list[int]):
    """For each face outside the dual path, group the hanging subtree and
    find the edge it shares with the path's primal graph."""
    nbrs = _dual_tree_neighbors(emb)
    on_path = set(spine)
    comps = []
    seen = set()
    for start in range(len(emb.inner_faces)):
        if start in on_path or start in seen:
            continue
        group = [start]
        seen.add(start)
        attach_face = None
        i = 0
        while i < len(group):
            for y in nbrs[group[i]]:
                if y in on_path:
                    attach_face = (group[i], y)
                elif y not in seen:
                    seen.add(y)
                    group.append(y)
            i += 1
        if attach_face is None:
            raise InternalInvariantError("hanging face group without attachment")
        inner, path_face = attach_face
        shared = set(_face_dir_edges(dag, emb.inner_faces[inner])) & set(
            _face_dir_edges(dag, emb.inner_faces[path_face])
        )
        if len(shared) != 1:
            raise InternalInvariantError("attachment is not a single edge")
        edges = set()
        for f in group:
            edges |= set(_face_dir_edges(dag, emb.inner_faces[f]))
        comps.append((induced_by_edges(dag, edges), next(iter(shared))))
    return comps


def _face_dir_edges(dag: Dag, face) -> list[Edge]:
    n = len(face)
    return [dag.directed(face[i], face[(i + 1) % n]) for i in range(n)]


def embed_biconnected_st_outerplanar(dag: Dag) -> BookEmbedding:
    """4-page layout of a biconnected st-outerplanar graph: triangulate,
    embed the primal of a dual path from a source face to a sink face, and
    insert every hanging one-sided piece at its separation edge; the
    augmentation chords are dropped at the end."""
    bc = build_bc_tree(dag)
    if len(dag.vertices) == 2 and len(dag.edges) == 1:
        return BookEmbedding(tuple(single_source_sink(dag)), {e: 1 for e in dag.edges})
    if len(bc.blocks) != 1:
        raise NotBiconnected("input must be biconnected")
    s, t = single_source_sink(dag)
    tri = triangulate_st_outerplanar(dag)
    emb = recover_outer_embedding(tri)
    nbrs = _dual_tree_neighbors(emb)
    s_faces = sorted(i for i, f in enumerate(emb.inner_faces) if s in f)
    t_faces = sorted(i for i, f in enumerate(emb.inner_faces) if t in f)

    def run_ends(faces):
        # the faces around a vertex form a path in the dual tree; prefer its
        # ends so the spine swallows as much of the run as possible
        fs = set(faces)
        ends = [i for i in faces if sum(1 for y in nbrs[i] if y in fs) <= 1]
        return ends or faces

    candidates = []
    for fs in run_ends(s_faces):
        for ft in run_ends(t_faces):
            candidates.append((fs, ft))
    for fs in s_faces:
        for ft in t_faces:
            if (fs, ft) not in candidates:
                candidates.append((fs, ft))

    last_err = None
    for fs, ft in candidates:
        spine = _tree_path(nbrs, fs, ft)
        try:
            result = _embed_along_spine(tri, emb, spine)
        except UpbookError as ex:
            last_err = ex
            continue
        final = restrict(result, dag)
        if validate(dag, final, max_pages=4).ok:
            return final
    raise InternalInvariantError(f"no dual path yields a 4-page layout: {last_err}")


def _embed_along_spine(tri: Dag, emb: OuterEmbedding, spine: list[int]) -> BookEmbedding:
    faces = [emb.inner_faces[i] for i in spine]
    edges = set()
    for f in faces:
        edges |= set(_face_dir_edges(tri, f))
    primal = induced_by_edges(tri, edges)
    fp = _Faces(primal, faces)
    fd = _fan_decomposition(fp)
    comps = _hanging_components(tri, emb, spine)
    attach_set = {uv for _, uv in comps}
    last = fd.fans[-1]
    outer = fp.outer_edges()
    elig = sorted(
        e for e in last.edges
        if e in outer and e != (last.source, last.sink) and e not in attach_set
    )
    if not elig:
        elig = sorted(
            e for e in last.edges if e in outer and e != (last.source, last.sink)
        )
    base = embed_primary_outerpath(primal, fd, elig[0])
    if comps:
        _, base = insert_one_sided(primal, base, comps)
    return base


# ---------------------------------------------------------------------------
# block-tree composition shared by the 8-page and 6-page embedders


@dataclass
class PageSeparatedEmbedding:
    embedding: BookEmbedding
    block_pages: dict[int, frozenset[int]]


def _rooted_children(bc: BcTree, root: int):
    """parent cut of each block and children (cut, block) lists per block."""
    inc = bc.incidence()
    parent: dict[int, tuple[str, int] | None] = {root: None}
    children: dict[int, dict[str, list[int]]] = {i: {} for i in range(len(bc.blocks))}
    queue = [root]
    visited = {root}
    while queue:
        b = queue.pop(0)
        for c in sorted(v for v in bc.block_vertices(b) if v in bc.cut_vertices):
            for nb in inc[c]:
                if nb not in visited:
                    visited.add(nb)
                    parent[nb] = (c, b)
                    children[b].setdefault(c, []).append(nb)
                    queue.append(nb)
    return parent, children


def _cut_role(dag: Dag, block_edges, c: str) -> str:
    has_in = any(h == c for _, h in block_edges)
    has_out = any(t == c for t, _ in block_edges)
    if has_in and has_out:
        return INTERNAL
    return SINK if has_in else SOURCE


def _compose_block_tree(dag: Dag, bc: BcTree, root: int, local_embs) -> tuple[str, ...]:
    """Compose the block orders along the rooted BC-tree: at each cut,
    sink-side children go right before it, source-side right after, and
    internal children nest around it."""
    _, children = _rooted_children(bc, root)

    def compose(b: int) -> tuple[str, ...]:
        order = local_embs[b].order
        for c in sorted(children[b]):
            sink_parts, source_parts, internal_parts = [], [], []
            for nb in children[b][c]:
                sub = compose(nb)
                role = _cut_role(dag, bc.blocks[nb], c)
                if role == SINK:
                    if sub[-1] != c:
                        raise InternalInvariantError("sink-side child does not end at the cut")
                    sink_parts.append(sub[:-1])
                elif role == SOURCE:
                    if sub[0] != c:
                        raise InternalInvariantError("source-side child does not start at the cut")
                    source_parts.append(sub[1:])
                else:
                    ci = sub.index(c)
                    internal_parts.append((sub[:ci], sub[ci + 1 :]))
            ci = order.index(c)
            before: list[str] = []
            after: list[str] = []
            for left, right in reversed(internal_parts):
                before = list(left) + before
                after = after + list(right)
            mid_before = [v for part in sink_parts for v in part]
            mid_after = [v for part in source_parts for v in part]
            order = (
                order[:ci]
                + tuple(before)
                + tuple(mid_before)
                + (c,)
                + tuple(mid_after)
                + tuple(after)
                + order[ci + 1 :]
            )
        return order

    return compose(root)


def _color_units(dag: Dag, order, local_embs, budget: int) -> dict[Edge, int]:
    """Assign pages to the blocks' local page classes: classes whose edges
    interleave in the composed order must differ; first-fit with
    backtracking inside the page budget."""
    pos = {v: i for i, v in enumerate(order)}
    units: list[list[Edge]] = []
    unit_block: list[int] = []
    for b in sorted(local_embs):
        by_page: dict[int, list[Edge]] = {}
        for e, p in local_embs[b].pages.items():
            by_page.setdefault(p, []).append(e)
        for p in sorted(by_page):
            units.append(sorted(by_page[p]))
            unit_block.append(b)
    n = len(units)
    conflict: list[set[int]] = [set() for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if any(_edges_cross(pos, e, f) for e in units[i] for f in units[j]):
                conflict[i].add(j)
                conflict[j].add(i)
    color: dict[int, int] = {}

    def bt(i: int) -> bool:
        if i == n:
            return True
        banned = {color[j] for j in conflict[i] if j in color}
        same_block = {
            color[j] for j in range(i) if unit_block[j] == unit_block[i]
        }
        for p in range(1, budget + 1):
            if p in banned or p in same_block:
                continue
            color[i] = p
            if bt(i + 1):
                return True
            del color[i]
        return False

    if not bt(0):
        raise InternalInvariantError(f"page classes do not fit in {budget} pages")
    pages: dict[Edge, int] = {}
    for i, es in enumerate(units):
        for e in es:
            pages[e] = color[i]
    return pages


def _pick_root(dag: Dag, bc: BcTree) -> int:
    """Prefer a root leaving at most one internal child block per cut; the
    composition then never stacks two mutually-crossing children."""
    inc = bc.incidence()
    best = None
    for cand in range(len(bc.blocks)):
        parent, children = _rooted_children(bc, cand)
        bad = 0
        for b, per_cut in children.items():
            for c, kids in per_cut.items():
                internal_kids = sum(
                    1 for nb in kids if _cut_role(dag, bc.blocks[nb], c) == INTERNAL
                )
                bad += max(0, internal_kids - 1)
        key = (bad, sorted(bc.block_vertices(cand)))
        if best is None or key < best[0]:
            best = (key, cand)
    return best[1]


# ---------------------------------------------------------------------------
# graphs whose blocks are st-DAGs, 8 pages


def embed_st_blocks(dag: Dag) -> PageSeparatedEmbedding:
    """8-page layout of a connected upward outerplanar graph whose blocks
    are st-DAGs, with at most 4 pages per block."""
    bc = build_bc_tree(dag)
    local_embs: dict[int, BookEmbedding] = {}
    for b in range(len(bc.blocks)):
        sub = induced_by_edges(dag, bc.blocks[b])
        try:
            single_source_sink(sub)
        except MultiSourceSink as ex:
            raise BlockNotStDag(str(ex)) from ex
        local_embs[b] = embed_biconnected_st_outerplanar(sub)
    root = _pick_root(dag, bc)
    order = _compose_block_tree(dag, bc, root, local_embs)
    pages = _color_units(dag, order, local_embs, budget=8)
    emb = BookEmbedding(order, pages)
    block_pages = {
        b: frozenset(pages[e] for e in bc.blocks[b]) for b in range(len(bc.blocks))
    }
    for b, ps in block_pages.items():
        if len(ps) > 4:
            raise InternalInvariantError("block uses more than 4 pages")
    return PageSeparatedEmbedding(emb, block_pages)


# ---------------------------------------------------------------------------
# cacti: augmentation, anchored cycles, 6 pages


def augment_cactus(dag: Dag) -> Dag:
    """Replace every trivial block uv by the triangle u->w->v (keeping uv),
    so that all blocks become cycles."""
    bc = build_bc_tree(dag)
    _check_cactus(bc)
    edges = set(dag.edges)
    vertices = list(dag.vertices)
    for b in range(len(bc.blocks)):
        if bc.is_trivial(b):
            (u, v) = next(iter(bc.blocks[b]))
            w = f"w:{u}:{v}"
            if w in vertices:
                raise InternalInvariantError(f"augmentation name {w!r} collides")
            vertices.append(w)
            edges.add((u, w))
            edges.add((w, v))
    return build_dag(sorted(vertices), sorted(edges))


def _check_cactus(bc: BcTree) -> None:
    for b in range(len(bc.blocks)):
        blk = bc.blocks[b]
        if len(blk) == 1:
            continue
        if len(blk) != len(bc.block_vertices(b)):
            raise NotCactus("non-trivial block is not a simple cycle")


def _cycle_sequence(block_edges, start: str) -> list[str]:
    adj: dict[str, list[str]] = {}
    for t, h in block_edges:
        adj.setdefault(t, []).append(h)
        adj.setdefault(h, []).append(t)
    seq = [start]
    prev = None
    while True:
        nxt = sorted(w for w in adj[seq[-1]] if w != prev)
        if not nxt:
            raise NotCactus("block is not a cycle")
        prev = seq[-1]
        seq.append(nxt[0])
        if seq[-1] == start:
            seq.pop()
            return seq
        if len(seq) > len(adj) + 1:
            raise NotCactus("block is not a simple cycle")


def _lay_path_one_page(dag: Dag, path: list[str], flipped: bool) -> list[str]:
    """Non-crossing topological order of a path-shaped DAG with its first
    vertex placed first; the first vertex must be a local source (under the
    current orientation)."""

    def forward(a, b):
        return ((a, b) in dag.edges) != flipped

    if len(path) == 1:
        return list(path)
    if not forward(path[0], path[1]):
        raise InternalInvariantError("path end is not a local source")
    j = 1
    while j < len(path) and forward(path[j - 1], path[j]):
        j += 1
    if j == len(path):
        return list(path)
    # peak at index j-1: the run before it comes first, the rest nests under
    # the (path[j-2], path[j-1]) arc, and the peak lands last
    rest = path[j:]
    if len(rest) == 1 or forward(rest[0], rest[1]):
        block = _lay_path_one_page(dag, rest, flipped)
    else:
        # rest[0] is a sink end: lay it under the flipped orientation (where
        # it is a source end) and reverse, so rest[0] comes out last, right
        # next to the peak it feeds
        block = list(reversed(_lay_path_one_page(dag, rest, not flipped)))
    return path[: j - 1] + block + [path[j - 1]]


def embed_cycle_dag(dag: Dag, anchor: tuple[str, str]) -> BookEmbedding:
    """2-page layout of a DAG whose underlying graph is a cycle, with the
    anchor vertex first (it must be a source) or last (a sink): one
    anchor-incident edge moves to page 2 and the remaining path gets a
    1-page layout."""
    vertex, where = anchor
    if where not in ("first", "last"):
        raise AnchorNotSourceOrSink("anchor position must be 'first' or 'last'")
    bc = build_bc_tree(dag)
    if len(bc.blocks) != 1 or bc.is_trivial(0) or len(dag.edges) != len(dag.vertices):
        raise NotCactus("input is not a single cycle")
    cls = classify_vertices(dag)
    if where == "first" and cls.get(vertex) != SOURCE:
        raise AnchorNotSourceOrSink(f"{vertex!r} is not a source")
    if where == "last" and cls.get(vertex) != SINK:
        raise AnchorNotSourceOrSink(f"{vertex!r} is not a sink")
    if where == "last":
        rev = embed_cycle_dag(reverse_dag(dag), (vertex, "first"))
        return BookEmbedding(
            tuple(reversed(rev.order)), {(b, a): p for (a, b), p in rev.pages.items()}
        )
    seq = _cycle_sequence(dag.edges, vertex)
    # remove the anchor-incident edge toward the smaller neighbor id
    w = min(seq[1], seq[-1])
    if seq[1] == w:
        path = [vertex] + list(reversed(seq[1:]))
    else:
        path = seq
    removed = dag.directed(vertex, w)
    order = _lay_path_one_page(dag, path, False)
    pages = {e: 1 for e in dag.edges}
    pages[removed] = 2
    return BookEmbedding(tuple(order), pages)


def embed_cactus(dag: Dag) -> PageSeparatedEmbedding:
    """6-page layout of an upward outerplanar cactus with at most 2 pages
    per block: augment away trivial blocks, lay every cycle on 2 pages
    anchored at its attachment cut, compose along the BC-tree, and restrict
    back to the original edges."""
    if len(dag.vertices) == 1:
        return PageSeparatedEmbedding(BookEmbedding(dag.vertices, {}), {})
    bc0 = build_bc_tree(dag)
    _check_cactus(bc0)
    aug = augment_cactus(dag)
    bc = build_bc_tree(aug)
    root = _pick_root(aug, bc)
    parent, _ = _rooted_children(bc, root)

    for c in sorted(bc.cut_vertices):
        internal_blocks = 0
        for b in range(len(bc.blocks)):
            if c in bc.block_vertices(b) and _cut_role(aug, bc.blocks[b], c) == INTERNAL:
                internal_blocks += 1
        if internal_blocks > 2:
            raise BimodalityViolation(f"cut {c!r} internal in {internal_blocks} blocks")

    local_embs: dict[int, BookEmbedding] = {}
    for b in range(len(bc.blocks)):
        sub = induced_by_edges(aug, bc.blocks[b])
        if parent[b] is None:
            anchor = (min(v for v, k in classify_vertices(sub).items() if k == SOURCE), "first")
        else:
            c, _ = parent[b]
            role = _cut_role(aug, bc.blocks[b], c)
            if role == SINK:
                anchor = (c, "last")
            elif role == SOURCE:
                anchor = (c, "first")
            else:
                anchor = (min(v for v, k in classify_vertices(sub).items() if k == SOURCE), "first")
        local_embs[b] = embed_cycle_dag(sub, anchor)
    order = _compose_block_tree(aug, bc, root, local_embs)
    pages = _color_units(aug, order, local_embs, budget=6)
    emb = restrict(BookEmbedding(order, pages), dag)
    block_pages = {}
    for b0 in range(len(bc0.blocks)):
        block_pages[b0] = frozenset(emb.pages[e] for e in bc0.blocks[b0])
        if len(block_pages[b0]) > 2:
            raise InternalInvariantError("cactus block uses more than 2 pages")
    return PageSeparatedEmbedding(emb, block_pages)