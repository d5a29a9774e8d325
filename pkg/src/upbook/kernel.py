"""Vertex-cover parameterization: the tau-page fallback, the type-based
reduction rule, kernel extraction, embedding lifting and the FPT decision
procedure.

Non-cover vertices with the same cover neighborhood and edge orientations
are interchangeable; once a type class holds more than 2*k^tau + 1 of
them, removing one cannot change k-page embeddability, and removed
vertices are re-inserted next to a page-equivalent representative."""
from __future__ import annotations

from dataclasses import dataclass, field

from .core import Dag, Edge, topological_order
from .errors import NoPageEquivalentTriple, ResourceLimit
from .exact import exact_ubt
from .layout import BookEmbedding

EXACT_KERNEL_LIMIT = 14


@dataclass
class CoverContext:
    cover: tuple[str, ...]  # sorted
    types: dict[tuple, tuple[str, ...]] = field(default_factory=dict)

    @property
    def tau(self) -> int:
        return len(self.cover)


@dataclass
class KernelInstance:
    reduced: Dag
    removed: list[tuple[str, tuple, str]]  # (vertex, type signature, representative)
    k: int
    cover: tuple[str, ...] = ()


def _cover_ok(dag: Dag, cover: set[str]) -> bool:
    return all(t in cover or h in cover for t, h in dag.edges)


def vertex_cover(dag: Dag, taumax: int) -> CoverContext | None:
    """Minimum vertex cover by degree branching; None if it exceeds taumax."""
    und = {v: set(ns) for v, ns in dag.und_adj().items()}

    best: list[set[str] | None] = [None]

    def search(adj: dict[str, set[str]], chosen: set[str], budget: int):
        if best[0] is not None and len(chosen) >= len(best[0]):
            return
        live = {v: ns for v, ns in adj.items() if ns}
        if not live:
            if best[0] is None or len(chosen) < len(best[0]):
                best[0] = set(chosen)
            return
        if budget <= 0:
            return
        # degree-1 rule: take the neighbor
        for v in sorted(live):
            if len(live[v]) == 1:
                w = next(iter(live[v]))
                search(_without(adj, w), chosen | {w}, budget - 1)
                return
        v = max(sorted(live), key=lambda x: len(live[x]))
        search(_without(adj, v), chosen | {v}, budget - 1)
        ns = sorted(live[v])
        if len(ns) <= budget:
            search(_without_many(adj, ns), chosen | set(ns), budget - len(ns))

    def _without(adj, v):
        out = {x: set(ns) for x, ns in adj.items()}
        for w in out.pop(v, set()):
            out[w].discard(v)
        return out

    def _without_many(adj, vs):
        out = adj
        for v in vs:
            out = _without(out, v)
        return out

    limit = min(taumax, len(dag.vertices))
    search(und, set(), limit)
    if best[0] is None:
        return None
    cover = tuple(sorted(best[0]))
    ctx = CoverContext(cover)
    return compute_types(dag, ctx)


def compute_types(dag: Dag, ctx: CoverContext) -> CoverContext:
    """Partition non-cover vertices by (cover neighbor, orientation) signature."""
    cset = set(ctx.cover)
    if not _cover_ok(dag, cset):
        raise ValueError("given set is not a vertex cover")
    groups: dict[tuple, list[str]] = {}
    for v in dag.vertices:
        if v in cset:
            continue
        sig = []
        for c in ctx.cover:
            if (c, v) in dag.edges:
                sig.append((c, "in"))
            elif (v, c) in dag.edges:
                sig.append((c, "out"))
        groups.setdefault(tuple(sig), []).append(v)
    ctx.types = {sig: tuple(sorted(vs)) for sig, vs in groups.items()}
    return ctx


def tau_page_embedding(dag: Dag, ctx: CoverContext) -> BookEmbedding:
    """tau pages: any topological order; the edge between u and the i-th
    cover vertex goes on page i (taking the larger index when both ends are
    in the cover), so every page is a star."""
    order = topological_order(dag)
    index = {c: i + 1 for i, c in enumerate(ctx.cover)}
    pages: dict[Edge, int] = {}
    for t, h in dag.edges:
        pages[(t, h)] = max(index.get(t, 0), index.get(h, 0))
    return BookEmbedding(order, pages)


def _threshold(k: int, tau: int) -> int | None:
    """2 * k^tau + 2, or None when it overflows any realistic class size."""
    if k <= 0:
        return 2
    try:
        val = 2 * k**tau + 2
    except OverflowError:
        return None
    if val > 2**31:
        return None
    return val


def kernelize(dag: Dag, ctx: CoverContext, k: int) -> KernelInstance:
    """Apply the class-size reduction rule exhaustively: while some type
    class exceeds 2*k^tau + 1 vertices, drop its largest-id member."""
    ctx = compute_types(dag, ctx)
    thr = _threshold(k, ctx.tau)
    removed: list[tuple[str, tuple, str]] = []
    cur = dag
    if thr is not None:
        types = {sig: list(vs) for sig, vs in ctx.types.items()}
        while True:
            target = None
            for sig in sorted(types):
                if len(types[sig]) >= thr:
                    target = sig
                    break
            if target is None:
                break
            vs = types[target]
            victim = vs[-1]  # largest id; smaller ids stay as representatives
            removed.append((victim, target, vs[0]))
            vs.pop()
            keep = [v for v in cur.vertices if v != victim]
            edges = [e for e in cur.edges if victim not in e]
            cur = Dag(tuple(keep), frozenset(edges))
    return KernelInstance(cur, removed, k, ctx.cover)


def lift_embedding(kernel: KernelInstance, emb: BookEmbedding) -> BookEmbedding:
    """Re-insert removed vertices in reverse removal order, each right after
    a member of a page-equivalent triple of its class, copying that member's
    edge pages."""
    k = kernel.k
    cover = set(kernel.cover)
    order = list(emb.order)
    pages = dict(emb.pages)
    present: set[str] = set(order)
    for victim, sig, _rep in reversed(kernel.removed):
        incident: dict[str, set[Edge]] = {v: set() for v in present}
        for e in pages:
            for v in e:
                incident[v].add(e)
        groups: dict[tuple, list[str]] = {}
        for v in sorted(present - cover):
            if v == victim:
                continue
            # same type exactly: the candidate's edges are precisely the
            # signature's cover edges
            sig_edges = {
                (c, v) if direction == "in" else (v, c) for c, direction in sig
            }
            if incident[v] != sig_edges:
                continue
            vec = tuple(
                pages[(c, v) if direction == "in" else (v, c)] for c, direction in sig
            )
            groups.setdefault(vec, []).append(v)
        rep = None
        for vec in sorted(groups):
            if len(groups[vec]) >= 3:
                rep = groups[vec][0]
                break
        if rep is None:
            raise NoPageEquivalentTriple(
                f"no page-equivalent triple for {victim!r}; the kernel embedding "
                f"is invalid or exceeds {k} pages"
            )
        i = order.index(rep)
        order.insert(i + 1, victim)
        for c, direction in sig:
            if direction == "in":
                pages[(c, victim)] = pages[(c, rep)]
            else:
                pages[(victim, c)] = pages[(rep, c)]
        present.add(victim)
    return BookEmbedding(tuple(order), pages)


def fpt_decide(dag: Dag, k: int) -> tuple[bool, BookEmbedding | None]:
    """Decide whether a k-page upward book embedding exists: immediately yes
    via the tau-page fallback when k >= tau, otherwise kernelize and run the
    exact search on the kernel, lifting its witness back."""
    ctx = vertex_cover(dag, len(dag.vertices))
    if k >= ctx.tau:
        return True, tau_page_embedding(dag, ctx)
    kern = kernelize(dag, ctx, k)
    if len(kern.reduced.vertices) > EXACT_KERNEL_LIMIT:
        raise ResourceLimit(
            f"kernel has {len(kern.reduced.vertices)} vertices; exact search capped at "
            f"{EXACT_KERNEL_LIMIT}"
        )
    res = exact_ubt(kern.reduced, k)
    if not res.decided:
        return False, None
    lifted = lift_embedding(kern, res.witness)
    return True, lifted