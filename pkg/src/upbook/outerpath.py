"""Embedders for internally-triangulated upward outerpaths.

The pipeline is built bottom-up: 1-page layouts of one-sided graphs,
2-page fan layouts, 4-page primary-outerpath layouts assembled along a
fan decomposition, appendage insertion, and finally the 16-page embedder
driven by an outerpath decomposition and its bundles.

Compositions normally go through :func:`upbook.layout.splice_at_edge`,
inserting one order into another around a shared edge whose endpoints the
previous stage kept adjacent; this uniformly covers both the "merge into
the gap" and "append after the old sink" situations.  When a requested
adjacency forces a layout that gives that gap up, the attachment falls
back to explicit placements whose page classes are checked exactly.
"""
from __future__ import annotations

from dataclasses import dataclass

from .core import (
    Dag,
    Edge,
    induced_by_edges,
    is_outerplanar,
    recover_outer_embedding,
    reverse_dag,
    single_source_sink,
)
from .errors import (
    AttachEdgeConflict,
    EdgeIsSt,
    IneligibleEdge,
    InternalInvariantError,
    MultiSourceSink,
    NotFan,
    NotOneSided,
    NotOuterpath,
    NotPrimary,
    NotStOuterpath,
    NotTriangulated,
    UpbookError,
)
from .layout import (
    BookEmbedding,
    _edges_cross,
    check_uv_consecutive,
    splice_at_edge,
    validate,
)

# ---------------------------------------------------------------------------
# face machinery


class _Faces:
    """Triangular faces of an outerpath in dual-path order, with shared edges."""

    def __init__(self, dag: Dag, faces: list[tuple[str, ...]]):
        self.dag = dag
        self.faces = faces
        self.face_edges: list[frozenset[Edge]] = []
        for f in faces:
            es = set()
            for i in range(len(f)):
                a, b = f[i], f[(i + 1) % len(f)]
                es.add(dag.directed(a, b))
            self.face_edges.append(frozenset(es))
        self.shared: list[Edge] = []
        for i in range(len(faces) - 1):
            common = self.face_edges[i] & self.face_edges[i + 1]
            if len(common) != 1:
                raise InternalInvariantError("consecutive faces must share one edge")
            self.shared.append(next(iter(common)))

    @classmethod
    def from_dag(cls, dag: Dag) -> "_Faces":
        emb = recover_outer_embedding(dag)
        if not emb.is_outerpath():
            raise NotOuterpath("weak dual is not a path")
        if not emb.triangulated():
            raise NotTriangulated("inner faces must all be triangles")
        order = emb.dual_path_order()
        return cls(dag, [emb.inner_faces[i] for i in order])

    def union_edges(self, lo: int, hi: int) -> frozenset[Edge]:
        es: set[Edge] = set()
        for i in range(lo, hi):
            es |= self.face_edges[i]
        return frozenset(es)

    def subdag(self, lo: int, hi: int) -> Dag:
        return induced_by_edges(self.dag, self.union_edges(lo, hi))

    def reversed(self) -> "_Faces":
        return _Faces(self.dag, list(reversed(self.faces)))

    def outer_edges(self) -> frozenset[Edge]:
        counts: dict[Edge, int] = {}
        for es in self.face_edges:
            for e in es:
                counts[e] = counts.get(e, 0) + 1
        return frozenset(e for e, c in counts.items() if c == 1)


def _group_sources_sinks(dag: Dag, edges) -> tuple[list[str], list[str]]:
    verts = {v for e in edges for v in e}
    has_in = {v: False for v in verts}
    has_out = {v: False for v in verts}
    for t, h in edges:
        has_out[t] = True
        has_in[h] = True
    srcs = sorted(v for v in verts if not has_in[v])
    snks = sorted(v for v in verts if not has_out[v])
    return srcs, snks


def _is_st_group(fp: _Faces, positions: list[int]) -> tuple[str, str] | None:
    edges = set()
    for i in positions:
        edges |= fp.face_edges[i]
    srcs, snks = _group_sources_sinks(fp.dag, edges)
    if len(srcs) == 1 and len(snks) == 1:
        return srcs[0], snks[0]
    return None


def _is_fan_group(fp: _Faces, positions: list[int]) -> tuple[str, str] | None:
    """(source, sink) if the contiguous face group forms an st-fan."""
    st = _is_st_group(fp, positions)
    if st is None:
        return None
    s, _ = st
    for i in range(len(positions) - 1):
        a, b = positions[i], positions[i + 1]
        shared = fp.face_edges[a] & fp.face_edges[b]
        e = next(iter(shared))
        if s not in e:
            return None
    return st


def _greedy_fan_partition(fp: _Faces, positions: list[int]) -> list[list[int]]:
    groups: list[list[int]] = []
    cur = [positions[0]]
    for f in positions[1:]:
        if _is_fan_group(fp, cur + [f]):
            cur.append(f)
        else:
            groups.append(cur)
            cur = [f]
    groups.append(cur)
    return groups


# ---------------------------------------------------------------------------
# one-sided graphs (1 page) and fans (2 pages)


def embed_one_sided(dag: Dag, s: str | None = None, t: str | None = None,
                    _trusted: bool = False) -> BookEmbedding:
    """1-page layout of a one-sided st-outerplanar graph: the spine is the
    outer path from s to t avoiding the edge st, i.e. the unique
    topological order."""
    if len(dag.vertices) == 1:
        return BookEmbedding(dag.vertices, {})
    gs, gt = single_source_sink(dag)
    if s is not None and (s, t) != (gs, gt):
        raise NotOneSided(f"designated ({s!r}, {t!r}) are not the source/sink")
    s, t = gs, gt
    if (s, t) not in dag.edges:
        raise NotOneSided("edge st missing")
    order = _unique_topological(dag)
    if order is None:
        raise NotOneSided("outer st-path is not a Hamiltonian directed path")
    if not _trusted and not is_outerplanar(dag):
        raise NotOneSided("graph is not outerplanar")
    return BookEmbedding(order, {e: 1 for e in dag.edges})


def _unique_topological(dag: Dag) -> tuple[str, ...] | None:
    indeg = {v: 0 for v in dag.vertices}
    adj = dag.out_adj()
    for _, h in dag.edges:
        indeg[h] += 1
    ready = [v for v in dag.vertices if indeg[v] == 0]
    order = []
    while ready:
        if len(ready) != 1:
            return None
        v = ready.pop()
        order.append(v)
        for w in adj[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                ready.append(w)
    return tuple(order) if len(order) == len(dag.vertices) else None


@dataclass(frozen=True)
class _FanShape:
    s: str
    t: str
    path: tuple[str, ...]  # the non-apex vertices in underlying-path order

    @property
    def one_sided(self) -> bool:
        return self.t in (self.path[0], self.path[-1])


def _fan_shape(dag: Dag) -> _FanShape:
    s, t = single_source_sink(dag)
    others = sorted(set(dag.vertices) - {s})
    if not others:
        raise NotFan("a fan needs at least one non-apex vertex")
    if len(dag.edges) != 2 * len(dag.vertices) - 3:
        raise NotFan("edge count does not match a triangulated fan")
    adj: dict[str, list[str]] = {v: [] for v in others}
    for a, b in dag.edges:
        if a == s or b == s:
            continue
        adj[a].append(b)
        adj[b].append(a)
    for v in others:
        if not dag.has_und_edge(s, v):
            raise NotFan(f"apex not adjacent to {v!r}")
    if len(others) == 1:
        raise NotFan("single edge is not a fan")
    ends = sorted(v for v in others if len(adj[v]) == 1)
    if len(ends) != 2 or any(len(adj[v]) > 2 for v in others):
        raise NotFan("non-apex vertices do not form a path")
    path = [ends[0]]
    prev = None
    while len(path) < len(others):
        nxt = [w for w in adj[path[-1]] if w != prev]
        if len(nxt) != 1:
            raise NotFan("non-apex vertices do not form a path")
        prev = path[-1]
        path.append(nxt[0])
    return _FanShape(s, t, tuple(path))


def embed_st_fan(dag: Dag, uv: Edge) -> BookEmbedding:
    """2-page uv-consecutive layout of an st-fan: the side holding uv is
    placed first when uv leaves the apex, second when it enters the sink;
    only one sink-incident edge escapes to page 2."""
    shape = _fan_shape(dag)
    s, t, path = shape.s, shape.t, list(shape.path)
    u, v = uv
    if (u, v) not in dag.edges:
        raise IneligibleEdge(f"({u!r}, {v!r}) is not an edge")
    if (u, v) == (s, t):
        raise EdgeIsSt("uv must differ from st")
    outer_pairs = {frozenset((s, path[0])), frozenset((s, path[-1]))}
    outer_pairs.update(frozenset((path[i], path[i + 1])) for i in range(len(path) - 1))
    if frozenset((u, v)) not in outer_pairs:
        raise IneligibleEdge(f"({u!r}, {v!r}) is not an outer edge of the fan")
    if shape.one_sided:
        return embed_one_sided(dag, s, t, _trusted=True)
    ti = path.index(t)
    side_a = path[:ti]
    side_b = list(reversed(path[ti + 1 :]))  # ordered from the outer end toward t
    if u == s:
        uv_side = side_a if v == side_a[0] else side_b
        first, second = uv_side, (side_b if uv_side is side_a else side_a)
    elif v == t:
        uv_side = side_a if u == side_a[-1] else side_b
        first, second = (side_b if uv_side is side_a else side_a), uv_side
    else:
        uv_side = side_a if u in side_a else side_b
        first, second = uv_side, (side_b if uv_side is side_a else side_a)
    order = [s] + first + second + [t]
    page2_edge = dag.directed(first[-1], t)
    pages = {e: 1 for e in dag.edges}
    pages[page2_edge] = 2
    return BookEmbedding(tuple(order), pages)


# ---------------------------------------------------------------------------
# appendage split and fan decomposition


@dataclass(frozen=True)
class AppendageSplit:
    primary_part: Dag
    appendage: Dag | None
    attach_edge: Edge | None
    primary_positions: tuple[int, ...]  # face positions of the primary part


def _split_appendage(fp: _Faces) -> AppendageSplit:
    dag = fp.dag
    s, t = single_source_sink(dag)
    h = len(fp.faces)
    s_faces = [i for i in range(h) if s in fp.faces[i]]
    if not s_faces:
        raise InternalInvariantError("source not on any face")
    if s_faces != list(range(s_faces[0], s_faces[-1] + 1)):
        raise InternalInvariantError("faces at the source are not contiguous")
    if 0 in s_faces or h - 1 in s_faces:
        return AppendageSplit(dag, None, None, tuple(range(h)))
    p, q = s_faces[0], s_faces[-1]
    for cut_lo, cut_hi, g_range, h_range in (
        (p - 1, p, (p, h), (0, p)),
        (q, q + 1, (0, q + 1), (q + 1, h)),
    ):
        shared = fp.face_edges[cut_lo] & fp.face_edges[cut_hi]
        e = next(iter(shared))
        g_dag = fp.subdag(*g_range)
        h_dag = fp.subdag(*h_range)
        try:
            gs, gt = single_source_sink(g_dag)
            hs, ht = single_source_sink(h_dag)
        except MultiSourceSink:
            continue
        if (gs, gt) == (s, t) and (hs, ht) == e:
            return AppendageSplit(g_dag, h_dag, e, tuple(range(*g_range)))
    raise NotStOuterpath("no separation edge yields a primary part plus a one-sided appendage")


def split_appendage(dag: Dag) -> AppendageSplit:
    """Split an st-outerpath into its primary part and (possibly) the
    one-sided appendage hanging at a separation edge of the source fan."""
    try:
        fp = _Faces.from_dag(dag)
    except (NotOuterpath, NotTriangulated) as ex:
        raise NotStOuterpath(str(ex)) from ex
    single_source_sink(dag)
    return _split_appendage(fp)


@dataclass(frozen=True)
class Fan:
    edges: frozenset[Edge]
    source: str
    sink: str
    positions: tuple[int, ...]


@dataclass(frozen=True)
class FanDecomposition:
    fans: tuple[Fan, ...]
    shared_edges: tuple[Edge, ...]


def fan_decomposition(dag: Dag) -> FanDecomposition:
    """Greedy face sweep from the source-extreme face; validates every
    decomposition clause on the output."""
    try:
        fp = _Faces.from_dag(dag)
    except (NotOuterpath, NotTriangulated) as ex:
        raise NotPrimary(str(ex)) from ex
    return _fan_decomposition(fp)


def _fan_decomposition(fp: _Faces) -> FanDecomposition:
    dag = fp.dag
    s, t = single_source_sink(dag)
    h = len(fp.faces)
    if s not in fp.faces[0]:
        if s in fp.faces[-1]:
            fp = fp.reversed()
        else:
            raise NotPrimary("no extreme face is incident to the source")
    groups = _greedy_fan_partition(fp, list(range(h)))
    fans: list[Fan] = []
    for g in groups:
        st = _is_fan_group(fp, g)
        if st is None:
            raise InternalInvariantError("greedy fan group is not an st-fan")
        edges = frozenset().union(*(fp.face_edges[i] for i in g))
        fans.append(Fan(edges, st[0], st[1], tuple(g)))
    shared = tuple(fp.shared[g[-1]] for g in groups[:-1])
    _validate_fan_decomposition(fp, fans, shared, s)
    return FanDecomposition(tuple(fans), shared)


def _validate_fan_decomposition(fp, fans, shared, s):
    if fans[0].source != s:
        raise InternalInvariantError("first fan source differs from graph source")
    union = set()
    for i, fan in enumerate(fans):
        union |= fan.edges
        for j in range(i + 1, len(fans)):
            common = fan.edges & fans[j].edges
            if j == i + 1:
                if common != {shared[i]}:
                    raise InternalInvariantError("consecutive fans must share exactly e_i")
            elif common:
                raise InternalInvariantError("non-consecutive fans share an edge")
    if union != set(fp.dag.edges):
        raise InternalInvariantError("fans do not cover the graph")
    for i, e in enumerate(shared):
        if e[0] != fans[i + 1].source:
            raise InternalInvariantError("tail of the shared edge is not the next source")
        if e == (fans[i].source, fans[i].sink):
            raise InternalInvariantError("shared edge equals the apex-sink edge")
    # prefix unions stay single-source / single-sink (used by the induction)
    for i in range(1, len(fans) + 1):
        pos = [p for fan in fans[:i] for p in fan.positions]
        if _is_st_group(fp, sorted(set(pos))) is None:
            raise InternalInvariantError("prefix union is not single-source/single-sink")


# ---------------------------------------------------------------------------
# primary-outerpath assembly: 4 pages along the fan decomposition


def _fan_subdag(dag: Dag, fan: Fan) -> Dag:
    return induced_by_edges(dag, fan.edges)


def embed_primary_outerpath(dag: Dag, fd: FanDecomposition, e: Edge) -> BookEmbedding:
    """4-page e-consecutive layout of a primary st-outerpath, assembled fan
    by fan.  When the new fan closes back onto the current sink it is merged
    into the gap of the shared edge reusing its page; otherwise it is
    appended on two pages disjoint from the pages at the current sink."""
    return _assemble_primary(dag, fd, e, None)


def _keep_first(candidates, keep):
    """Order candidate spine tuples so those keeping ``keep`` adjacent come
    first (stable otherwise)."""
    if keep is None:
        return list(candidates)

    def keeps(cand):
        cpos = {x: j for j, x in enumerate(cand)}
        if keep[0] not in cpos or keep[1] not in cpos:
            return False
        return abs(cpos[keep[0]] - cpos[keep[1]]) == 1

    return sorted(candidates, key=lambda c: not keeps(c))


def _assemble_primary(dag: Dag, fd: FanDecomposition, e: Edge,
                      fan1_target: Edge | None,
                      keep: Edge | None = None) -> BookEmbedding:
    # fan1_target overrides the first fan's layout target (normally the
    # first shared edge); keep biases flexible placements toward
    # preserving that edge's spine adjacency
    fans, shared = fd.fans, fd.shared_edges
    k = len(fans)
    e = dag.directed(*e)
    last = fans[-1]
    if e not in last.edges:
        raise IneligibleEdge("target edge must lie in the last fan")
    if e == (last.source, last.sink):
        raise IneligibleEdge("target edge must differ from the apex-sink edge of the last fan")
    if k > 1 and e == shared[-1]:
        raise IneligibleEdge("target edge must be an outer edge of the graph")

    target0 = shared[0] if k > 1 else e
    if fan1_target is not None and fan1_target in fans[0].edges:
        target0 = dag.directed(*fan1_target)
    f0 = _fan_subdag(dag, fans[0])
    shape0 = _fan_shape(f0)
    if shape0.one_sided:
        emb = embed_one_sided(f0, _trusted=True)
    else:
        emb = embed_st_fan(f0, target0)
    order, pages = emb.order, dict(emb.pages)

    for i in range(1, k):
        fan = fans[i]
        attach = shared[i - 1]
        target = shared[i] if i < k - 1 else e
        sub = _fan_subdag(dag, fan)
        pos = {v: j for j, v in enumerate(order)}
        adjacent = pos[attach[1]] - pos[attach[0]] == 1
        if fan.sink == attach[1]:
            # the fan closes back onto the prefix: it is one-sided with
            # st-edge equal to the shared edge, so it merges into that gap
            # (or, when the gap is not free, next to one of its endpoints
            # on any page that stays crossing-free) reusing a single page
            sub_emb = embed_one_sided(sub, _trusted=True)
            new_edges = [fe for fe in fan.edges if fe != attach]
            if adjacent:
                order = splice_at_edge(order, sub_emb.order, attach[0], attach[1])
                for fe in new_edges:
                    pages[fe] = pages[attach]
            else:
                interior = tuple(x for x in sub_emb.order if x not in attach)
                iu, iv = pos[attach[0]], pos[attach[1]]
                placed = None
                for cand in _keep_first(
                    (
                        order[: iu + 1] + interior + order[iu + 1 :],
                        order[:iv] + interior + order[iv:],
                    ),
                    keep,
                ):
                    cpos = {x: j for j, x in enumerate(cand)}
                    for p in [pages[attach]] + [q for q in (1, 2, 3, 4) if q != pages[attach]]:
                        page_edges = [fe for fe, q in pages.items() if q == p]
                        if not _page_conflict(cpos, new_edges, page_edges):
                            placed = (cand, p)
                            break
                    if placed:
                        break
                if placed is None:
                    raise IneligibleEdge("no crossing-free placement for a closing fan")
                order = placed[0]
                for fe in new_edges:
                    pages[fe] = placed[1]
        else:
            # the fan brings a new sink; the shared edge's head must then be
            # the prefix sink (single-sink prefix invariant), i.e. the last
            # spine vertex.  The fan's two pages must avoid every old edge
            # reaching past the attach tail (with the tail second-to-last
            # this is exactly the at-most-two pages at the old sink).
            t_prev = attach[1]
            if order[-1] != t_prev:
                raise InternalInvariantError("appending fan but attach head is not the prefix sink")
            shape = _fan_shape(sub)
            if shape.one_sided:
                sub_emb = embed_one_sided(sub, _trusted=True)
            else:
                sub_emb = embed_st_fan(sub, target)
            local = sorted(set(sub_emb.pages.values()))
            if adjacent:
                # the construction's own case: fresh pages avoid every old
                # edge reaching past the attach tail (= the pages at the old
                # sink when the tail is second-to-last)
                cut = pos[attach[0]]
                danger = {p for (x, y), p in pages.items() if pos[y] > cut}
                fresh = [p for p in (1, 2, 3, 4) if p not in danger]
                if len(fresh) < len(local):
                    raise IneligibleEdge("not enough free pages to append the fan")
                remap = {lp: fresh[j] for j, lp in enumerate(local)}
                order = splice_at_edge(order, sub_emb.order, attach[0], attach[1])
            else:
                # the attach gap was given up for another adjacency: place
                # the fan's interior right before the old sink or right
                # after the attach tail, page classes checked exactly
                su = sub_emb.order.index(attach[0])
                sv = sub_emb.order.index(attach[1])
                if su != 0:
                    raise InternalInvariantError("fan source is not first in its layout")
                mid = sub_emb.order[su + 1 : sv]
                suffix = sub_emb.order[sv + 1 :]
                iu = pos[attach[0]]
                candidates = _keep_first(
                    [
                        order[:-1] + mid + (t_prev,) + suffix,
                        order[: iu + 1] + mid + order[iu + 1 : -1] + (t_prev,) + suffix,
                    ],
                    keep,
                )
                by_class = {lp: [] for lp in local}
                for fe, lp in sub_emb.pages.items():
                    if fe != attach:
                        by_class[lp].append(fe)
                placed = None
                for cand in candidates:
                    cpos = {x: j for j, x in enumerate(cand)}
                    allowed = {}
                    for lp in local:
                        allowed[lp] = [
                            p for p in (1, 2, 3, 4)
                            if not _page_conflict(
                                cpos, by_class[lp],
                                [fe for fe, q in pages.items() if q == p],
                            )
                        ]
                    for p1 in allowed[local[0]]:
                        rest_ok = True
                        chosen = {local[0]: p1}
                        used = {p1}
                        for lp in local[1:]:
                            nxt = [p for p in allowed[lp] if p not in used]
                            if not nxt:
                                rest_ok = False
                                break
                            chosen[lp] = nxt[0]
                            used.add(nxt[0])
                        if rest_ok:
                            placed = (cand, chosen)
                            break
                    if placed:
                        break
                if placed is None:
                    raise IneligibleEdge("no crossing-free placement to append the fan")
                order = placed[0]
                remap = placed[1]
            for fe, lp in sub_emb.pages.items():
                if fe != attach:
                    pages[fe] = remap[lp]
    return BookEmbedding(order, pages)


# ---------------------------------------------------------------------------
# appendage / one-sided component insertion


def _page_conflict(pos, new_edges, page_edges) -> bool:
    for ne in new_edges:
        for oe in page_edges:
            if _edges_cross(pos, ne, oe):
                return True
    return False


def insert_one_sided(base_dag: Dag, base: BookEmbedding, components,
                     keep_adjacent: Edge | None = None) -> tuple[Dag, BookEmbedding]:
    """Insert one-sided uv-outerplanar components, each sharing exactly its
    attach edge with the base graph.  A component whose attach endpoints are
    adjacent on the spine merges into that gap on the attach edge's page;
    otherwise its interior goes right after u (the construction's default),
    falling back to the placement before v and to other pages when the
    default would cross.  ``keep_adjacent`` biases the placement choice so
    that edge's endpoints stay adjacent when possible."""
    comps = sorted(components, key=lambda c: c[1])
    attach_edges = [c[1] for c in comps]
    if len(set(attach_edges)) != len(attach_edges):
        raise AttachEdgeConflict("duplicate attach edges")
    order = base.order
    pages = dict(base.pages)
    all_edges = set(base_dag.edges)
    all_vertices = list(base_dag.vertices)

    for hdag, uv in comps:
        uv = base_dag.directed(*uv)
        if uv not in all_edges:
            raise AttachEdgeConflict(f"attach edge {uv} not in the base graph")
        overlap = set(hdag.vertices) & set(all_vertices)
        if overlap != set(uv):
            raise AttachEdgeConflict("component shares more than the attach edge")
        if set(hdag.edges) & all_edges != {uv}:
            raise AttachEdgeConflict("component shares more than the attach edge")
        u, v = uv
        h_emb = embed_one_sided(hdag, u, v, _trusted=True)
        interior = tuple(x for x in h_emb.order if x not in (u, v))
        pos = {x: i for i, x in enumerate(order)}
        new_edges = [fe for fe in hdag.edges if fe != uv]
        placed = None
        if abs(pos[u] - pos[v]) == 1:
            new_order = splice_at_edge(order, h_emb.order, u, v)
            placed = (new_order, pages[uv])
        else:
            iu, iv = pos[u], pos[v]
            candidates = [
                order[: iu + 1] + interior + order[iu + 1 :],
                order[:iv] + interior + order[iv:],
            ]
            page_candidates = [pages[uv]] + [p for p in (1, 2, 3, 4) if p != pages[uv]]
            valid = []
            for cand in candidates:
                cpos = {x: i for i, x in enumerate(cand)}
                for p in page_candidates:
                    page_edges = [fe for fe, q in pages.items() if q == p]
                    if not _page_conflict(cpos, new_edges, page_edges):
                        valid.append((cand, p, cpos))
                        break
            if not valid:
                raise AttachEdgeConflict(
                    f"no crossing-free placement for the component at {uv}"
                )
            placed = valid[0][:2]
            if keep_adjacent is not None and keep_adjacent in hdag.edges:
                for cand, p, cpos in valid:
                    ka, kb = keep_adjacent
                    if abs(cpos[ka] - cpos[kb]) == 1:
                        placed = (cand, p)
                        break
            new_order = placed[0]
        order = new_order
        page = placed[1]
        for fe in new_edges:
            pages[fe] = page
        all_edges |= set(hdag.edges)
        all_vertices.extend(x for x in hdag.vertices if x not in (u, v))

    union = induced_by_edges(base_dag, all_edges)
    if len(union.vertices) != len(order):
        raise InternalInvariantError("insertion lost vertices")
    return union, BookEmbedding(order, pages)


# ---------------------------------------------------------------------------
# general entry point: any st-outerpath, 4 pages


def _eligible_targets(fp: _Faces, split: AppendageSplit, fd: FanDecomposition) -> dict[Edge, str]:
    """Map of eligible target edges to the branch handling them."""
    outer = fp.outer_edges()
    last = fd.fans[-1]
    first = fd.fans[0]
    out: dict[Edge, str] = {}
    for e in last.edges:
        if e in outer and e != (last.source, last.sink):
            out[e] = "direct"
    if split.appendage is not None:
        for e in split.appendage.edges:
            if e in outer:
                out.setdefault(e, "reversed")
    else:
        for e in first.edges:
            if e in outer and e != (first.source, first.sink):
                out.setdefault(e, "reversed")
    return out


def embed_st_outerpath(dag: Dag, e: Edge | None = None, _allow_reverse: bool = True) -> BookEmbedding:
    """4-page e-consecutive layout of an internally-triangulated
    st-outerpath.  Targets in the far fan are handled by the direct fan
    assembly.  Targets in the appendage or the source fan are served by a
    validated cascade: edge reversal first, then direct assemblies that
    keep the requested adjacency as a side effect (the reversal alone does
    not cover source/sink sharing an extreme face)."""
    try:
        fp = _Faces.from_dag(dag)
    except (NotOuterpath, NotTriangulated) as ex:
        raise NotStOuterpath(str(ex)) from ex
    try:
        s, t = single_source_sink(dag)
    except MultiSourceSink as ex:
        raise NotStOuterpath(str(ex)) from ex
    split = _split_appendage(fp)
    prim_fp = _Faces(split.primary_part, [fp.faces[i] for i in split.primary_positions])
    fd = _fan_decomposition(prim_fp)
    targets = _eligible_targets(fp, split, fd)

    def direct(target: Edge, fan1_target: Edge | None = None,
               keep: Edge | None = None) -> BookEmbedding:
        emb = _assemble_primary(split.primary_part, fd, target, fan1_target, keep=keep)
        if split.appendage is not None:
            _, emb = insert_one_sided(
                split.primary_part, emb, [(split.appendage, split.attach_edge)],
                keep_adjacent=keep,
            )
        return emb

    if e is None:
        e = sorted(te for te, branch in targets.items() if branch == "direct")[0]
    else:
        e = dag.directed(*e)
        if e not in targets:
            raise IneligibleEdge(f"{e} is not an eligible target edge")
    if targets[e] == "direct":
        return direct(e)

    default = sorted(te for te, branch in targets.items() if branch == "direct")[0]
    makers = []
    if _allow_reverse:
        makers.append(lambda: _reversed_route(dag, e, s))
    makers.append(lambda: direct(default, keep=e))
    if len(fd.fans) > 1:
        makers.append(lambda: direct(default, fan1_target=e, keep=e))
    last_err = None
    for make in makers:
        try:
            emb = make()
        except UpbookError as ex:
            last_err = ex
            continue
        rep = validate(dag, emb, max_pages=4)
        cc = check_uv_consecutive(dag, emb, e, s, t)
        if rep.ok and cc.ok:
            return emb
    raise IneligibleEdge(
        f"no construction realizes an e-consecutive layout for {e}: {last_err}"
    )


def _reversed_route(dag: Dag, e: Edge, s: str) -> BookEmbedding:
    rdag = reverse_dag(dag)
    remb = embed_st_outerpath(rdag, (e[1], e[0]), _allow_reverse=False)
    order = tuple(reversed(remb.order))
    pages = {(b, a): p for (a, b), p in remb.pages.items()}
    emb = BookEmbedding(order, pages)
    return _consolidate_source_pages(dag, emb, s)


def _consolidate_source_pages(dag: Dag, emb: BookEmbedding, s: str) -> BookEmbedding:
    """After reversal the source's edges may sit on two pages; move them all
    onto one page when some page admits it (they pairwise share s, so only
    conflicts with foreign edges matter)."""
    s_edges = [e for e in dag.edges if s in e]
    used = sorted({emb.pages[e] for e in s_edges})
    if len(used) <= 1:
        return emb
    pos = emb.position()
    for p in used + [q for q in (1, 2, 3, 4) if q not in used]:
        others = [e for e, q in emb.pages.items() if q == p and s not in e]
        if not _page_conflict(pos, s_edges, others):
            pages = dict(emb.pages)
            for e in s_edges:
                pages[e] = p
            return BookEmbedding(emb.order, pages)
    return emb


# ---------------------------------------------------------------------------
# outerpath decomposition (greedy + repair) and bundles


@dataclass(frozen=True)
class SubOuterpath:
    positions: tuple[int, ...]
    edges: frozenset[Edge]
    source: str
    sink: str
    proper: bool  # proper iff not a single st-fan


@dataclass(frozen=True)
class Bundle:
    kind: str  # "edge" or "vertex"
    lo: int
    hi: int  # inclusive path indices; consecutive bundles overlap in one path
    shared: str | Edge


@dataclass(frozen=True)
class OuterpathDecomposition:
    paths: tuple[SubOuterpath, ...]
    shared_edges: tuple[Edge, ...]
    bundles: tuple[Bundle, ...]


def outerpath_decomposition(dag: Dag) -> OuterpathDecomposition:
    """Greedy single-source-single-sink face sweep, then repeated repair of
    pairs whose shared edge coincides with the apex-sink edge of the
    previous path's last fan (the fan moves to the next path)."""
    fp = _Faces.from_dag(dag)  # raises NotOuterpath / NotTriangulated
    groups: list[list[int]] = []
    cur = [0]
    for f in range(1, len(fp.faces)):
        if _is_st_group(fp, cur + [f]):
            cur.append(f)
        else:
            groups.append(cur)
            cur = [f]
    groups.append(cur)

    guard = 4 * len(fp.faces) * max(1, len(groups)) + 16
    while True:
        guard -= 1
        if guard < 0:
            raise InternalInvariantError("repair loop did not terminate")
        violation = None
        for j in range(len(groups) - 1):
            e_j = fp.shared[groups[j][-1]]
            fans = _greedy_fan_partition(fp, groups[j])
            st = _is_fan_group(fp, fans[-1])
            if st is None:
                raise InternalInvariantError("fan partition produced a non-fan")
            if e_j == (st[0], st[1]):
                violation = (j, fans)
                break
        if violation is None:
            break
        j, fans = violation
        if len(fans) < 2:
            raise InternalInvariantError("violating path consists of a single fan")
        moved = fans[-1]
        groups[j] = [p for p in groups[j] if p not in moved]
        groups[j + 1] = moved + groups[j + 1]
        if _is_st_group(fp, groups[j]) is None or _is_st_group(fp, groups[j + 1]) is None:
            raise InternalInvariantError("repair broke the single-source/single-sink property")

    paths = []
    for g in groups:
        st = _is_st_group(fp, g)
        edges = frozenset().union(*(fp.face_edges[i] for i in g))
        proper = _is_fan_group(fp, g) is None
        paths.append(SubOuterpath(tuple(g), edges, st[0], st[1], proper))
    shared = tuple(fp.shared[g[-1]] for g in groups[:-1])
    _validate_outerpath_decomposition(fp, paths, shared)
    bundles = _compute_bundles(paths)
    return OuterpathDecomposition(tuple(paths), shared, tuple(bundles))


def _validate_outerpath_decomposition(fp, paths, shared):
    union = set()
    for i, p in enumerate(paths):
        union |= p.edges
        for j in range(i + 1, len(paths)):
            common = p.edges & paths[j].edges
            if j == i + 1:
                if common != {shared[i]}:
                    raise InternalInvariantError("consecutive paths must share exactly e_i")
            elif common:
                raise InternalInvariantError("non-consecutive paths share an edge")
    if union != set(fp.dag.edges):
        raise InternalInvariantError("paths do not cover the graph")
    for i, e in enumerate(shared):
        fans = _greedy_fan_partition(fp, list(paths[i].positions))
        st = _is_fan_group(fp, fans[-1])
        if e == (st[0], st[1]):
            raise InternalInvariantError("shared edge equals the last fan's apex-sink edge")


def _compute_bundles(paths) -> list[Bundle]:
    m = len(paths)
    if m <= 1:
        return []
    vset = [set(v for e in p.edges for v in e) for p in paths]
    bundles = []
    c = 0
    while c < m - 1:
        common = vset[c] & vset[c + 1]
        j = c + 1
        while j + 1 < m and common & vset[j + 1]:
            common = common & vset[j + 1]
            j += 1
        if j >= c + 2:
            bundles.append(Bundle("vertex", c, j, min(sorted(common))))
        else:
            e = next(iter(paths[c].edges & paths[c + 1].edges))
            bundles.append(Bundle("edge", c, j, e))
        c = j
    return bundles


# ---------------------------------------------------------------------------
# 16-page embedder for upward outerpaths


def embed_upward_outerpath(dag: Dag) -> BookEmbedding:
    """16-page layout of an internally-triangulated upward outerpath.

    The sub-outerpaths of the decomposition are spliced one after the other
    at their shared edges, each on at most 4 pages.  Page sets are then
    chosen per path so that paths whose edges actually interleave get
    disjoint sets, first-fit over the 16-page pool; the bundle structure
    keeps those conflicts local, which is what bounds the fit."""
    od = outerpath_decomposition(dag)
    paths, shared = od.paths, od.shared_edges
    m = len(paths)

    sub_embs: list[BookEmbedding] = []
    for i, p in enumerate(paths):
        sub = induced_by_edges(dag, p.edges)
        target = shared[i] if i < m - 1 else None
        sub_embs.append(embed_st_outerpath(sub, target))

    order = sub_embs[0].order
    for i in range(1, m):
        attach = shared[i - 1]
        order = splice_at_edge(order, sub_embs[i].order, attach[0], attach[1])
    pos = {v: i for i, v in enumerate(order)}

    # each edge is owned by the first path containing it (shared edges keep
    # the earlier path's page)
    owned: list[list[Edge]] = []
    seen: set[Edge] = set()
    for p in paths:
        own = sorted(e for e in p.edges if e not in seen)
        seen |= set(own)
        owned.append(own)

    conflicts: dict[int, set[int]] = {i: set() for i in range(m)}
    for i in range(m):
        for j in range(i + 1, m):
            if _owned_conflict(pos, owned[i], owned[j]):
                conflicts[i].add(j)
                conflicts[j].add(i)

    assigned: list[dict[int, int] | None] = [None] * m  # local page -> global page
    page_sets: list[frozenset[int]] = [frozenset()] * m
    pages: dict[Edge, int] = {}
    for i in range(m):
        local = sorted({sub_embs[i].pages[e] for e in owned[i]})
        forbidden: set[int] = set()
        for j in conflicts[i]:
            if assigned[j] is not None:
                forbidden |= set(page_sets[j])
        free = [p for p in range(1, 17) if p not in forbidden]
        if len(free) < len(local):
            raise InternalInvariantError("page demand exceeds the 16-page pool")
        mapping = {lp: free[x] for x, lp in enumerate(local)}
        assigned[i] = mapping
        page_sets[i] = frozenset(mapping.values())
        for e in owned[i]:
            pages[e] = mapping[sub_embs[i].pages[e]]
    return BookEmbedding(order, pages)


def _owned_conflict(pos, edges_i, edges_j) -> bool:
    for e in edges_i:
        for f in edges_j:
            if _edges_cross(pos, e, f):
                return True
    return False
