"""Book-embedding model, ordering algebra, and the validator every test uses.

A book embedding is a total vertex order (the spine) plus an edge-to-page
assignment; it is valid when the order is topological and no two same-page
edges interleave. Crossing detection is the naive pairwise check per page:
at desk scale it doubles as its own oracle.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .core import Dag, Edge
from .errors import (
    DomainMismatch,
    OverlappingSupports,
    PreconditionViolated,
    VertexAbsent,
)


@dataclass
class BookEmbedding:
    """Spine order plus page assignment. Treated as immutable after construction."""

    order: tuple[str, ...]
    pages: dict[Edge, int]
    k: int = 0

    def __post_init__(self):
        self.order = tuple(self.order)
        if not self.k:
            self.k = max(self.pages.values(), default=0)

    def position(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.order)}

    def pages_used(self) -> int:
        return max(self.pages.values(), default=0)

    def page_set(self) -> frozenset[int]:
        return frozenset(self.pages.values())


# ---------------------------------------------------------------------------
# Ordering algebra


def concat(orders) -> tuple[str, ...]:
    """Concatenate pairwise-disjoint vertex lists."""
    out: list[str] = []
    seen: set[str] = set()
    for part in orders:
        for v in part:
            if v in seen:
                raise OverlappingSupports(f"vertex {v!r} appears in two operands")
            seen.add(v)
            out.append(v)
    return tuple(out)


def split_at(order, u) -> tuple[tuple[str, ...], tuple[str, ...]]:
    """Split an order around u: prefix, suffix with prefix + [u] + suffix = order."""
    order = tuple(order)
    if u not in order:
        raise VertexAbsent(f"{u!r} not in order")
    i = order.index(u)
    return order[:i], order[i + 1 :]


def merge(pi, pi_prime) -> tuple[str, ...]:
    """Merge two orders sharing exactly {u, v}, with u,v consecutive in pi and
    u first / v last in pi_prime.  Result extends both."""
    pi, pi_prime = tuple(pi), tuple(pi_prime)
    shared = set(pi) & set(pi_prime)
    if not pi_prime:
        raise PreconditionViolated("second order is empty")
    u, v = pi_prime[0], pi_prime[-1]
    if len(pi_prime) == 1:
        if shared != {u}:
            raise PreconditionViolated("single-vertex merge must share exactly that vertex")
        return pi
    if shared != {u, v}:
        raise PreconditionViolated(f"supports must intersect exactly in endpoints, got {sorted(shared)}")
    iu = pi.index(u)
    if iu + 1 >= len(pi) or pi[iu + 1] != v:
        raise PreconditionViolated(f"{u!r}, {v!r} not consecutive in first order")
    return pi[:iu] + pi_prime + pi[iu + 2 :]


def extends(big_order, small_order) -> bool:
    """True iff big_order preserves the relative order of every pair in small_order."""
    pos = {v: i for i, v in enumerate(big_order)}
    small = list(small_order)
    if any(v not in pos for v in small):
        raise VertexAbsent("small order has vertices outside the big order")
    return all(pos[small[i]] < pos[small[i + 1]] for i in range(len(small) - 1))


def splice_at_edge(big, small, u, v) -> tuple[str, ...]:
    """Common extension of two orders sharing exactly {u, v}: u,v must be
    consecutive in ``big`` and u before v in ``small``.  ``small``'s prefix
    goes right before u, its middle into the u-v gap, its suffix right
    after v.  Generalizes :func:`merge`."""
    big, small = tuple(big), tuple(small)
    iu = big.index(u)
    if iu + 1 >= len(big) or big[iu + 1] != v:
        raise PreconditionViolated(f"{u!r}, {v!r} not consecutive in big order")
    su, sv = small.index(u), small.index(v)
    if su >= sv:
        raise PreconditionViolated(f"{u!r} must precede {v!r} in small order")
    return (
        big[:iu]
        + small[:su]
        + (u,)
        + small[su + 1 : sv]
        + (v,)
        + small[sv + 1 :]
        + big[iu + 2 :]
    )


# ---------------------------------------------------------------------------
# Validation


@dataclass
class ValidationReport:
    topological_ok: bool
    crossings: list[tuple[Edge, Edge]] = field(default_factory=list)
    pages_used: int = 0
    per_page_edge_counts: dict[int, int] = field(default_factory=dict)
    within_page_limit: bool | None = None

    @property
    def ok(self) -> bool:
        return self.topological_ok and not self.crossings and self.within_page_limit is not False


def _edges_cross(pos, e1: Edge, e2: Edge) -> bool:
    a1, b1 = sorted((pos[e1[0]], pos[e1[1]]))
    a2, b2 = sorted((pos[e2[0]], pos[e2[1]]))
    if a2 < a1:
        a1, b1, a2, b2 = a2, b2, a1, b1
    return a1 < a2 < b1 < b2


def find_crossings(dag: Dag, emb: BookEmbedding) -> list[tuple[Edge, Edge]]:
    """All same-page interleaving pairs, naive O(m^2) per page."""
    pos = emb.position()
    by_page: dict[int, list[Edge]] = {}
    for e, p in emb.pages.items():
        by_page.setdefault(p, []).append(e)
    out = []
    for p in sorted(by_page):
        es = sorted(by_page[p])
        for i in range(len(es)):
            for j in range(i + 1, len(es)):
                if _edges_cross(pos, es[i], es[j]):
                    out.append((es[i], es[j]))
    return out


def _crossings_interval_stab(dag: Dag, emb: BookEmbedding) -> list[tuple[Edge, Edge]]:
    """Sweep variant used as the naive check's counterpart in property tests:
    walk the spine keeping per-page open-edge sets and report an interleave
    whenever an edge closes across an open one that started later."""
    pos = emb.position()
    by_page: dict[int, list[Edge]] = {}
    for e, p in emb.pages.items():
        by_page.setdefault(p, []).append(e)
    out = []
    for p in sorted(by_page):
        intervals = sorted(
            ((min(pos[t], pos[h]), max(pos[t], pos[h]), (t, h)) for t, h in by_page[p])
        )
        open_edges: list[tuple[int, int, Edge]] = []
        for lo, hi, e in intervals:
            open_edges = [iv for iv in open_edges if iv[1] > lo]
            for lo2, hi2, e2 in open_edges:
                if lo2 < lo < hi2 < hi:
                    out.append(tuple(sorted((e2, e))))
            open_edges.append((lo, hi, e))
    return sorted(set(out))


def validate(dag: Dag, emb: BookEmbedding, max_pages: int | None = None) -> ValidationReport:
    """Check topological order and same-page crossings; raises DomainMismatch
    when the embedding does not cover exactly the graph."""
    if sorted(emb.order) != sorted(dag.vertices) or len(set(emb.order)) != len(emb.order):
        raise DomainMismatch("order is not a permutation of the vertex set")
    if set(emb.pages) != set(dag.edges):
        raise DomainMismatch("page assignment does not cover exactly the edge set")
    pos = emb.position()
    topological_ok = all(pos[t] < pos[h] for t, h in dag.edges)
    crossings = find_crossings(dag, emb)
    counts: dict[int, int] = {}
    for p in emb.pages.values():
        counts[p] = counts.get(p, 0) + 1
    used = emb.pages_used()
    within = None if max_pages is None else used <= max_pages
    return ValidationReport(topological_ok, crossings, used, counts, within)


@dataclass
class ConsecutiveReport:
    ok: bool
    reasons: list[str] = field(default_factory=list)


def check_uv_consecutive(dag: Dag, emb: BookEmbedding, uv: Edge, s: str, t: str) -> ConsecutiveReport:
    """Three-clause check for a uv-consecutive embedding of an st-graph:
    (i) u,v adjacent on the spine, (ii) s-incident edges on one page,
    (iii) t-incident edges on at most two pages."""
    u, v = uv
    pos = emb.position()
    reasons = []
    if abs(pos[u] - pos[v]) != 1:
        reasons.append(f"(i) {u!r},{v!r} not consecutive on the spine")
    s_pages = {p for e, p in emb.pages.items() if s in e}
    if len(s_pages) > 1:
        reasons.append(f"(ii) edges at source {s!r} use pages {sorted(s_pages)}")
    t_pages = {p for e, p in emb.pages.items() if t in e}
    if len(t_pages) > 2:
        reasons.append(f"(iii) edges at sink {t!r} use pages {sorted(t_pages)}")
    return ConsecutiveReport(not reasons, reasons)


def restrict(emb: BookEmbedding, dag: Dag) -> BookEmbedding:
    """Restriction of an embedding to a subgraph: drop foreign vertices and pages."""
    keep = set(dag.vertices)
    order = tuple(v for v in emb.order if v in keep)
    pages = {e: p for e, p in emb.pages.items() if e in dag.edges}
    return BookEmbedding(order, pages)


def remap_pages(emb: BookEmbedding, mapping: dict[int, int]) -> BookEmbedding:
    return BookEmbedding(emb.order, {e: mapping.get(p, p) for e, p in emb.pages.items()})


def normalize_pages(emb: BookEmbedding) -> BookEmbedding:
    """Renumber pages to 1..k preserving ascending order."""
    used = sorted(set(emb.pages.values()))
    mapping = {p: i + 1 for i, p in enumerate(used)}
    return remap_pages(emb, mapping)
