"""Desk-scale exact oracles: upward book thickness and domination number.

The page-number search enumerates topological orders with a DFS that
assigns pages to edges as soon as both endpoints are placed, pruning dead
prefixes early.  Two symmetry breaks keep the factorial in check: vertices
with identical in/out neighborhoods are placed in ascending id order, and
a fresh page may only be opened as max-used-plus-one.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from itertools import combinations

from .core import Dag, Edge
from .errors import ExceedsBound, NotTopological
from .layout import BookEmbedding

SIZE_WARN_THRESHOLD = 13


@dataclass
class ExactResult:
    ubt: int | str  # minimal page count, or ">kmax"
    witness: BookEmbedding | None
    nodes_explored: int

    @property
    def decided(self) -> bool:
        return isinstance(self.ubt, int)


def _swap_signatures(dag: Dag) -> dict[str, tuple]:
    ins: dict[str, set[str]] = {v: set() for v in dag.vertices}
    outs: dict[str, set[str]] = {v: set() for v in dag.vertices}
    for t, h in dag.edges:
        outs[t].add(h)
        ins[h].add(t)
    return {v: (tuple(sorted(ins[v])), tuple(sorted(outs[v]))) for v in dag.vertices}


def _has_clique(adj: dict, cand: list, size: int) -> bool:
    """True if ``cand`` (vertices of the crossing graph) contains a clique
    of the given size; plain branch and filter, fine at desk scale."""
    if size <= 0:
        return True
    if len(cand) < size:
        return False
    for i, v in enumerate(cand):
        rest = [w for w in cand[i + 1 :] if w in adj[v]]
        if _has_clique(adj, rest, size - 1):
            return True
    return False


def _search_k_pages(dag: Dag, k: int, counter: list[int]) -> BookEmbedding | None:
    """Find any k-page UBE by interleaved order/page DFS, or prove none exists."""
    n = len(dag.vertices)
    in_nbrs = {v: [] for v in dag.vertices}
    out_nbrs = {v: [] for v in dag.vertices}
    for t, h in dag.edges:
        in_nbrs[h].append(t)
        out_nbrs[t].append(h)
    sig = _swap_signatures(dag)

    placed: list[str] = []
    pos: dict[str, int] = {}
    page_of: dict[Edge, int] = {}
    # interleaving graph over the closed edges, kept incrementally: it
    # drives both the clique pruning and the final bounded coloring
    span: dict[Edge, tuple[int, int]] = {}
    crossing: dict[Edge, set[Edge]] = {}
    remaining_in = {v: len(in_nbrs[v]) for v in dag.vertices}

    def available() -> list[str]:
        avail = [v for v in dag.vertices if v not in pos and remaining_in[v] == 0]
        # canonical order among swap-equivalent vertices: smallest id first
        chosen = []
        for v in avail:
            if any(u < v and sig[u] == sig[v] for u in avail):
                continue
            chosen.append(v)
        return sorted(chosen)

    def close_edge(e: Edge) -> bool:
        """Register the interleaving neighbors of a newly closed edge;
        False when it completes a (k+1)-clique of pairwise-crossing edges."""
        a, b = pos[e[0]], pos[e[1]]
        span[e] = (a, b)
        nbrs = set()
        for f, (lo, hi) in span.items():
            # b is the newest position, so f interleaves e iff it straddles
            # e's tail; equal endpoints mean a shared vertex, never a cross
            if f is not e and hi != b and lo < a < hi:
                nbrs.add(f)
        crossing[e] = nbrs
        for f in nbrs:
            crossing[f].add(e)
        if len(nbrs) >= k and _has_clique(crossing, sorted(nbrs), k):
            return False
        return True

    def drop_edge(e: Edge) -> None:
        for f in crossing[e]:
            crossing[f].discard(e)
        del crossing[e]
        del span[e]

    def place_next() -> bool:
        if len(placed) == n:
            assignment = _color_bounded(crossing, k)
            if assignment is not None:
                page_of.clear()
                page_of.update(assignment)
                return True
            return False
        for v in available():
            counter[0] += 1
            placed.append(v)
            pos[v] = len(placed) - 1
            for w in out_nbrs[v]:
                remaining_in[w] -= 1
            closed = sorted(((u, v) for u in in_nbrs[v]), key=lambda e: pos[e[0]])
            feasible = True
            registered = []
            for e in closed:
                registered.append(e)
                if not close_edge(e):
                    feasible = False
                    break
            if feasible and place_next():
                return True
            for e in reversed(registered):
                drop_edge(e)
            for w in out_nbrs[v]:
                remaining_in[w] += 1
            del pos[v]
            placed.pop()
        return False

    if place_next():
        return BookEmbedding(tuple(placed), dict(page_of))
    return None


def _color_bounded(conflict: dict, k: int) -> dict | None:
    """k-coloring of the crossing graph, most-constrained-first with the
    fresh-color symmetry break; None when no k-coloring exists."""
    nodes = sorted(conflict, key=lambda e: (-len(conflict[e]), e))
    color: dict = {}

    def bt(i: int, used: int) -> bool:
        if i == len(nodes):
            return True
        e = nodes[i]
        banned = {color[f] for f in conflict[e] if f in color}
        for p in range(1, min(used + 1, k) + 1):
            if p in banned:
                continue
            color[e] = p
            if bt(i + 1, max(used, p)):
                return True
            del color[e]
        return False

    if bt(0, 0):
        return dict(color)
    return None


def exact_ubt(dag: Dag, kmax: int, kmin: int = 1) -> ExactResult:
    """Minimal k <= kmax such that a k-page UBE exists, with witness.

    ``kmin`` is a caller-provable lower bound on the answer (for instance
    from a forced-order subgraph); the search then skips the exhaustive
    refutations below it."""
    if len(dag.vertices) > SIZE_WARN_THRESHOLD:
        warnings.warn(
            f"exact_ubt on {len(dag.vertices)} vertices may be slow", stacklevel=2
        )
    counter = [0]
    if not dag.edges:
        order = tuple(dag.vertices)
        return ExactResult(0, BookEmbedding(order, {}), 0)
    for k in range(max(1, kmin), kmax + 1):
        emb = _search_k_pages(dag, k, counter)
        if emb is not None:
            return ExactResult(k, emb, counter[0])
    return ExactResult(f">{kmax}", None, counter[0])


def min_pages_for_order(dag: Dag, order) -> tuple[int, dict[Edge, int]]:
    """Exact chromatic number of the crossing-conflict graph of the edges
    under a fixed spine order, via backtracking."""
    order = tuple(order)
    pos = {v: i for i, v in enumerate(order)}
    for t, h in dag.edges:
        if pos[t] >= pos[h]:
            raise NotTopological(f"edge ({t!r}, {h!r}) goes backwards")
    edges = sorted(dag.edges, key=lambda e: (pos[e[0]], pos[e[1]]))
    m = len(edges)
    if m == 0:
        return 0, {}
    conflicts: dict[Edge, set[Edge]] = {e: set() for e in edges}
    for e1, e2 in combinations(edges, 2):
        a1, b1 = sorted((pos[e1[0]], pos[e1[1]]))
        a2, b2 = sorted((pos[e2[0]], pos[e2[1]]))
        if a2 < a1:
            a1, b1, a2, b2 = a2, b2, a1, b1
        if a1 < a2 < b1 < b2:
            conflicts[e1].add(e2)
            conflicts[e2].add(e1)
    nodes = sorted(edges, key=lambda e: (-len(conflicts[e]), e))
    best_count = m + 1
    best: dict[Edge, int] = {}
    color: dict[Edge, int] = {}

    def bt(i: int, used: int) -> None:
        nonlocal best_count, best
        if used >= best_count:
            return
        if i == m:
            best_count = used
            best = dict(color)
            return
        e = nodes[i]
        banned = {color[f] for f in conflicts[e] if f in color}
        for p in range(1, min(used + 1, best_count - 1) + 1):
            if p in banned:
                continue
            color[e] = p
            bt(i + 1, max(used, p))
            del color[e]

    bt(0, 0)
    return best_count, best


def domination_number(dag: Dag, bound: int) -> int:
    """Minimum dominating set size of the underlying undirected graph,
    by subset enumeration of increasing size."""
    verts = sorted(dag.vertices)
    if not verts:
        return 0
    closed: dict[str, frozenset[str]] = {}
    adj = dag.und_adj()
    for v in verts:
        closed[v] = frozenset(adj[v]) | {v}
    full = frozenset(verts)
    for size in range(0, bound + 1):
        for cand in combinations(verts, size):
            covered = set()
            for v in cand:
                covered |= closed[v]
            if covered == full:
                return size
    raise ExceedsBound(f"no dominating set of size <= {bound}")
