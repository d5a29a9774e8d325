"""Directed-graph foundation: DAGs, outerplanar embeddings, BC-trees.

Vertex ids are opaque strings. All derived structures break ties
lexicographically so that every operation is deterministic; golden tests
rely on that.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field

import networkx as nx

from .errors import (
    CycleDetected,
    Disconnected,
    DuplicateEdge,
    InternalInvariantError,
    MultiSourceSink,
    NotOuterplanar,
    UnknownVertex,
)

Edge = tuple[str, str]

SOURCE = "source"
SINK = "sink"
INTERNAL = "internal"
SOURCE_AND_SINK = "source-and-sink"


@dataclass(frozen=True)
class Dag:
    """An acyclic digraph: ordered vertex tuple plus a set of (tail, head) edges."""

    vertices: tuple[str, ...]
    edges: frozenset[Edge]

    def out_adj(self) -> dict[str, list[str]]:
        adj: dict[str, list[str]] = {v: [] for v in self.vertices}
        for t, h in sorted(self.edges):
            adj[t].append(h)
        return adj

    def in_adj(self) -> dict[str, list[str]]:
        adj: dict[str, list[str]] = {v: [] for v in self.vertices}
        for t, h in sorted(self.edges):
            adj[h].append(t)
        return adj

    def und_adj(self) -> dict[str, list[str]]:
        adj: dict[str, set[str]] = {v: set() for v in self.vertices}
        for t, h in self.edges:
            adj[t].add(h)
            adj[h].add(t)
        return {v: sorted(ns) for v, ns in adj.items()}

    def has_und_edge(self, u: str, v: str) -> bool:
        return (u, v) in self.edges or (v, u) in self.edges

    def directed(self, u: str, v: str) -> Edge:
        """Return the edge between u and v as it is actually oriented."""
        if (u, v) in self.edges:
            return (u, v)
        if (v, u) in self.edges:
            return (v, u)
        raise UnknownVertex(f"no edge between {u!r} and {v!r}")


def build_dag(vertices, edges) -> Dag:
    """Validate and freeze a DAG; rejects duplicates, self-loops and cycles."""
    verts: list[str] = []
    seen = set()
    for v in vertices:
        if v in seen:
            raise DuplicateEdge(f"vertex {v!r} listed twice")
        seen.add(v)
        verts.append(v)
    edge_set: set[Edge] = set()
    for t, h in edges:
        if t not in seen or h not in seen:
            raise UnknownVertex(f"edge ({t!r}, {h!r}) has an endpoint outside the vertex set")
        if t == h:
            raise CycleDetected([t])
        if (t, h) in edge_set:
            raise DuplicateEdge(f"edge ({t!r}, {h!r}) listed twice")
        edge_set.add((t, h))
    for t, h in edge_set:
        if (h, t) in edge_set and (t, h) < (h, t):
            raise CycleDetected([t, h])
    dag = Dag(tuple(verts), frozenset(edge_set))
    cycle = _find_cycle(dag)
    if cycle is not None:
        raise CycleDetected(cycle)
    return dag


def _find_cycle(dag: Dag):
    adj = dag.out_adj()
    state = {v: 0 for v in dag.vertices}  # 0 new, 1 on stack, 2 done
    parent: dict[str, str] = {}
    for root in dag.vertices:
        if state[root]:
            continue
        stack = [(root, iter(adj[root]))]
        state[root] = 1
        while stack:
            v, it = stack[-1]
            advanced = False
            for w in it:
                if state[w] == 0:
                    state[w] = 1
                    parent[w] = v
                    stack.append((w, iter(adj[w])))
                    advanced = True
                    break
                if state[w] == 1:
                    cyc = [w]
                    x = v
                    while x != w:
                        cyc.append(x)
                        x = parent[x]
                    cyc.reverse()
                    return cyc
            if not advanced:
                state[v] = 2
                stack.pop()
    return None


def classify_vertices(dag: Dag) -> dict[str, str]:
    """Map each vertex to source / sink / internal (isolated: source-and-sink)."""
    indeg = {v: 0 for v in dag.vertices}
    outdeg = {v: 0 for v in dag.vertices}
    for t, h in dag.edges:
        outdeg[t] += 1
        indeg[h] += 1
    out = {}
    for v in dag.vertices:
        if indeg[v] == 0 and outdeg[v] == 0:
            out[v] = SOURCE_AND_SINK
        elif indeg[v] == 0:
            out[v] = SOURCE
        elif outdeg[v] == 0:
            out[v] = SINK
        else:
            out[v] = INTERNAL
    return out


def sources(dag: Dag) -> list[str]:
    cls = classify_vertices(dag)
    return sorted(v for v, c in cls.items() if c in (SOURCE, SOURCE_AND_SINK))


def sinks(dag: Dag) -> list[str]:
    cls = classify_vertices(dag)
    return sorted(v for v, c in cls.items() if c in (SINK, SOURCE_AND_SINK))


def single_source_sink(dag: Dag) -> tuple[str, str]:
    ss, tt = sources(dag), sinks(dag)
    if len(ss) != 1 or len(tt) != 1:
        raise MultiSourceSink(f"sources={ss} sinks={tt}")
    return ss[0], tt[0]


def topological_order(dag: Dag) -> tuple[str, ...]:
    """Kahn's algorithm with a min-id heap; deterministic."""
    indeg = {v: 0 for v in dag.vertices}
    adj = dag.out_adj()
    for _, h in dag.edges:
        indeg[h] += 1
    heap = [v for v in dag.vertices if indeg[v] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        v = heapq.heappop(heap)
        order.append(v)
        for w in adj[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                heapq.heappush(heap, w)
    if len(order) != len(dag.vertices):
        raise CycleDetected(["<unreachable>"])
    return tuple(order)


def induced_by_edges(dag: Dag, edges) -> Dag:
    """Sub-DAG on an edge subset (vertices = endpoints, sorted)."""
    es = frozenset(edges)
    vs = sorted({v for e in es for v in e})
    return Dag(tuple(vs), es)


def reverse_dag(dag: Dag) -> Dag:
    return Dag(dag.vertices, frozenset((h, t) for t, h in dag.edges))


def is_connected(dag: Dag) -> bool:
    if not dag.vertices:
        return True
    adj = dag.und_adj()
    seen = {dag.vertices[0]}
    stack = [dag.vertices[0]]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(dag.vertices)


# ---------------------------------------------------------------------------
# BC-tree


@dataclass(frozen=True)
class BcTree:
    """Block/cut-vertex decomposition. Blocks are edge subsets, ordered
    lexicographically by their sorted vertex tuple."""

    blocks: tuple[frozenset[Edge], ...]
    cut_vertices: frozenset[str]
    root: int | None = None

    def block_vertices(self, i: int) -> frozenset[str]:
        return frozenset(v for e in self.blocks[i] for v in e)

    def is_trivial(self, i: int) -> bool:
        return len(self.blocks[i]) == 1

    def incidence(self) -> dict[str, list[int]]:
        """cut vertex -> sorted indices of blocks containing it."""
        inc: dict[str, list[int]] = {c: [] for c in sorted(self.cut_vertices)}
        for i in range(len(self.blocks)):
            for c in self.block_vertices(i):
                if c in self.cut_vertices:
                    inc[c].append(i)
        return inc


def build_bc_tree(dag: Dag) -> BcTree:
    """Hopcroft-Tarjan block decomposition (iterative) of the underlying graph."""
    if not is_connected(dag):
        raise Disconnected("underlying graph is not connected")
    adj = dag.und_adj()
    disc: dict[str, int] = {}
    low: dict[str, int] = {}
    parent: dict[str, str | None] = {}
    cut: set[str] = set()
    blocks: list[set[Edge]] = []
    edge_stack: list[tuple[str, str]] = []
    timer = 0

    for root in dag.vertices:
        if root in disc:
            continue
        parent[root] = None
        stack = [(root, iter(adj[root]))]
        disc[root] = low[root] = timer
        timer += 1
        root_children = 0
        while stack:
            v, it = stack[-1]
            advanced = False
            for w in it:
                if w not in disc:
                    parent[w] = v
                    edge_stack.append((v, w))
                    disc[w] = low[w] = timer
                    timer += 1
                    if v == root:
                        root_children += 1
                    stack.append((w, iter(adj[w])))
                    advanced = True
                    break
                elif w != parent[v] and disc[w] < disc[v]:
                    edge_stack.append((v, w))
                    low[v] = min(low[v], disc[w])
            if not advanced:
                stack.pop()
                if stack:
                    u = stack[-1][0]
                    low[u] = min(low[u], low[v])
                    if low[v] >= disc[u]:
                        blk: set[Edge] = set()
                        while edge_stack:
                            a, b = edge_stack.pop()
                            blk.add(dag.directed(a, b))
                            if (a, b) == (u, v):
                                break
                        blocks.append(blk)
                        if u != root or root_children > 1:
                            cut.add(u)

    ordered = sorted((frozenset(b) for b in blocks), key=lambda b: sorted({v for e in b for v in e}))
    covered = {v for b in ordered for e in b for v in e}
    if len(dag.vertices) > 1 and covered != set(dag.vertices):
        raise InternalInvariantError("block decomposition does not cover the graph")
    return BcTree(tuple(ordered), frozenset(cut))


# ---------------------------------------------------------------------------
# Outerplanar embedding recovery


@dataclass(frozen=True)
class OuterEmbedding:
    """Combinatorial outerplanar embedding.

    ``outer_cycle`` visits every vertex exactly once: for non-biconnected
    graphs it is the first-appearance order of a walk around the outer
    boundary (consecutive pairs may be virtual, i.e. not actual edges).
    ``inner_faces`` are vertex cycles in canonical rotation; ``dual_edges``
    join faces sharing an edge, which makes the dual a tree per biconnected
    component (a forest overall).
    """

    dag: Dag
    outer_cycle: tuple[str, ...]
    inner_faces: tuple[tuple[str, ...], ...]
    dual_edges: frozenset[tuple[int, int]]
    _edge_faces: dict[frozenset, list[int]] = field(
        default=None, compare=False, repr=False, hash=False
    )

    def face_und_edges(self, i: int) -> list[frozenset]:
        f = self.inner_faces[i]
        return [frozenset((f[j], f[(j + 1) % len(f)])) for j in range(len(f))]

    def edge_faces(self) -> dict[frozenset, list[int]]:
        """Undirected edge -> indices of incident inner faces."""
        if self._edge_faces is not None:
            return self._edge_faces
        ef: dict[frozenset, list[int]] = {frozenset(e): [] for e in self.dag.edges}
        for i in range(len(self.inner_faces)):
            for ue in self.face_und_edges(i):
                ef[ue].append(i)
        object.__setattr__(self, "_edge_faces", ef)
        return ef

    def is_inner_edge(self, e: Edge) -> bool:
        return len(self.edge_faces()[frozenset(e)]) == 2

    def dual_degree(self, i: int) -> int:
        return sum(1 for a, b in self.dual_edges if i in (a, b))

    def is_outerpath(self) -> bool:
        if len(self.inner_faces) <= 1:
            return True
        degs = [self.dual_degree(i) for i in range(len(self.inner_faces))]
        return (
            max(degs) <= 2
            and degs.count(1) == 2
            and len(self.dual_edges) == len(self.inner_faces) - 1
            and _dual_connected(self)
        )

    def dual_path_order(self) -> list[int]:
        """Face indices ordered along the dual path. Tie-break: the extreme
        face with the smallest incident vertex id (then smallest face tuple)
        comes first."""
        n = len(self.inner_faces)
        if n == 0:
            return []
        if n == 1:
            return [0]
        if not self.is_outerpath():
            raise InternalInvariantError("dual is not a path")
        nbrs: dict[int, list[int]] = {i: [] for i in range(n)}
        for a, b in self.dual_edges:
            nbrs[a].append(b)
            nbrs[b].append(a)
        ends = sorted(
            (i for i in range(n) if len(nbrs[i]) == 1),
            key=lambda i: (min(self.inner_faces[i]), sorted(self.inner_faces[i])),
        )
        start = ends[0]
        order = [start]
        prev = None
        cur = start
        while len(order) < n:
            nxt = [x for x in nbrs[cur] if x != prev]
            prev, cur = cur, nxt[0]
            order.append(cur)
        return order

    def triangulated(self) -> bool:
        return all(len(f) == 3 for f in self.inner_faces)


def _dual_connected(emb: OuterEmbedding) -> bool:
    n = len(emb.inner_faces)
    if n <= 1:
        return True
    nbrs: dict[int, set[int]] = {i: set() for i in range(n)}
    for a, b in emb.dual_edges:
        nbrs[a].add(b)
        nbrs[b].add(a)
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for w in nbrs[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == n


def is_outerplanar(dag: Dag) -> bool:
    try:
        _check_outerplanar(dag)
        return True
    except NotOuterplanar:
        return False


def _check_outerplanar(dag: Dag) -> None:
    """Apex test: G is outerplanar iff G plus a vertex joined to all of V is planar."""
    g = nx.Graph()
    g.add_nodes_from(sorted(dag.vertices))
    g.add_edges_from(sorted((min(e), max(e)) for e in dag.edges))
    apex = "\x00apex"
    g.add_edges_from((apex, v) for v in sorted(dag.vertices))
    ok, cert = nx.check_planarity(g, counterexample=True)
    if not ok:
        witness = sorted(
            (min(u, v), max(u, v)) for u, v in cert.edges() if apex not in (u, v)
        )
        raise NotOuterplanar("K4 or K_{2,3} obstruction found", witness=witness)


def _block_outer_cycle(dag: Dag, block_vertices: frozenset[str]) -> tuple[str, ...]:
    """Hamiltonian outer cycle of a biconnected outerplanar block, canonical
    rotation (smallest vertex first, then smaller second element)."""
    verts = sorted(block_vertices)
    block_edges = {
        (min(t, h), max(t, h))
        for t, h in dag.edges
        if t in block_vertices and h in block_vertices
    }
    g = nx.Graph(sorted(block_edges))
    apex = "\x00apex"
    g.add_edges_from((apex, v) for v in verts)
    ok, emb = nx.check_planarity(g)
    if not ok:
        raise NotOuterplanar(f"block {verts} is not outerplanar")
    rotation = list(emb.neighbors_cw_order(apex))
    if len(rotation) != len(verts):
        raise InternalInvariantError("apex rotation misses block vertices")
    return _canonical_cycle(rotation)


def _canonical_cycle(cycle) -> tuple[str, ...]:
    cyc = list(cycle)
    i = cyc.index(min(cyc))
    cyc = cyc[i:] + cyc[:i]
    if len(cyc) > 2 and cyc[-1] < cyc[1]:
        cyc = [cyc[0]] + cyc[1:][::-1]
    return tuple(cyc)


def _rotate_normalize(cycle) -> tuple[str, ...]:
    """Rotation-only normal form (keeps orientation)."""
    cyc = list(cycle)
    i = cyc.index(min(cyc))
    return tuple(cyc[i:] + cyc[:i])


def _block_faces(dag: Dag, cycle: tuple[str, ...]) -> list[tuple[str, ...]]:
    """Inner faces of a biconnected outerplanar block given its outer cycle.

    Builds the rotation system of the convex drawing (vertices on a circle,
    chords inside) and walks faces; the face tracing the outer cycle in
    reverse is dropped.
    """
    n = len(cycle)
    pos = {v: i for i, v in enumerate(cycle)}
    und: dict[str, list[str]] = {v: [] for v in cycle}
    for t, h in dag.edges:
        if t in pos and h in pos:
            und[t].append(h)
            und[h].append(t)
    rot = {v: sorted(und[v], key=lambda q: (pos[q] - pos[v]) % n) for v in cycle}
    idx = {v: {q: i for i, q in enumerate(rot[v])} for v in cycle}
    visited: set[tuple[str, str]] = set()
    faces = []
    for v in cycle:
        for w in rot[v]:
            if (v, w) in visited:
                continue
            walk = []
            cur = (v, w)
            while cur not in visited:
                visited.add(cur)
                a, b = cur
                walk.append(a)
                r = rot[b]
                cur = (b, r[(idx[b][a] - 1) % len(r)])
            faces.append(tuple(walk))
    # in the convex drawing the outer face is the one walked clockwise,
    # i.e. the reversed outer cycle (orientation-sensitive comparison)
    outer_rev = _rotate_normalize(reversed(cycle))
    inner = [f for f in faces if _rotate_normalize(f) != outer_rev]
    if len(inner) != len(faces) - 1:
        raise InternalInvariantError("expected exactly one outer face per block")
    return [_canonical_cycle(f) for f in inner]


def recover_outer_embedding(dag: Dag) -> OuterEmbedding:
    """Recover the outerplanar embedding: outer cycle, inner faces, weak dual.

    Fails with NotOuterplanar when the underlying graph is not outerplanar.
    For non-biconnected graphs the outer cycle is the first-appearance order
    of a deterministic walk of the block tree (enter each block at its
    attachment cut vertex, traverse its outer cycle in canonical direction).
    """
    if not is_connected(dag):
        raise Disconnected("underlying graph is not connected")
    if len(dag.vertices) == 1:
        return OuterEmbedding(dag, (dag.vertices[0],), (), frozenset())
    _check_outerplanar(dag)
    bc = build_bc_tree(dag)

    block_cycles: list[tuple[str, ...]] = []
    all_faces: list[tuple[str, ...]] = []
    for i, blk in enumerate(bc.blocks):
        bverts = bc.block_vertices(i)
        if len(blk) == 1:
            t, h = next(iter(blk))
            block_cycles.append((min(t, h), max(t, h)))
        else:
            cyc = _block_outer_cycle(dag, bverts)
            block_cycles.append(cyc)
            all_faces.extend(_block_faces(dag, cyc))

    all_faces.sort(key=lambda f: (min(f), f))
    dual: set[tuple[int, int]] = set()
    ef: dict[frozenset, list[int]] = {}
    for i, f in enumerate(all_faces):
        for j in range(len(f)):
            ue = frozenset((f[j], f[(j + 1) % len(f)]))
            ef.setdefault(ue, []).append(i)
    for ue, fs in ef.items():
        if len(fs) == 2:
            dual.add((min(fs), max(fs)))
        elif len(fs) > 2:
            raise InternalInvariantError("edge on more than two inner faces")

    outer_cycle = _compose_outer_cycle(dag, bc, block_cycles)
    return OuterEmbedding(dag, outer_cycle, tuple(all_faces), frozenset(dual))


def _compose_outer_cycle(dag: Dag, bc: BcTree, block_cycles) -> tuple[str, ...]:
    by_vertex: dict[str, list[int]] = {v: [] for v in dag.vertices}
    for i in range(len(bc.blocks)):
        for v in bc.block_vertices(i):
            by_vertex[v].append(i)
    root = min(range(len(bc.blocks)), key=lambda i: sorted(bc.block_vertices(i)))
    out: list[str] = []
    done_blocks: set[int] = set()

    def walk_block(i: int, entry: str) -> None:
        done_blocks.add(i)
        cyc = list(block_cycles[i])
        k = cyc.index(entry)
        order = cyc[k:] + cyc[:k]
        for v in order:
            if v not in out:
                out.append(v)
            for j in sorted(by_vertex[v]):
                if j not in done_blocks:
                    walk_block(j, v)

    entry = min(bc.block_vertices(root))
    walk_block(root, entry)
    if len(out) != len(dag.vertices):
        raise InternalInvariantError("outer walk missed vertices")
    return tuple(out)


# ---------------------------------------------------------------------------
# Bimodality at cut vertices


@dataclass(frozen=True)
class BimodalityReport:
    internal_counts: dict[str, int]
    violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def check_bimodality_at_cuts(emb: OuterEmbedding, bc: BcTree) -> BimodalityReport:
    """Count, per cut vertex, the blocks in which it is internal; more than
    two is impossible in an upward outerplanar graph and gets reported."""
    counts: dict[str, int] = {}
    for c in sorted(bc.cut_vertices):
        cnt = 0
        for i, blk in enumerate(bc.blocks):
            if c not in bc.block_vertices(i):
                continue
            has_in = any(h == c for _, h in blk)
            has_out = any(t == c for t, _ in blk)
            if has_in and has_out:
                cnt += 1
        counts[c] = cnt
    violations = tuple(c for c, n in sorted(counts.items()) if n > 2)
    return BimodalityReport(counts, violations)
