"""Seeded random generators for every input family the embedders need.

Membership is certified by construction (the certificate is the build
trace), never by recognition.  The PRNG is SplitMix64, fixed across
platforms; identical (family, n, seed, extras) always yields an identical
graph.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .core import (
    Dag,
    OuterEmbedding,
    build_dag,
    classify_vertices,
    recover_outer_embedding,
    INTERNAL,
)
from .errors import InfeasibleSpec, TooLarge

MASK64 = (1 << 64) - 1

FAMILIES = (
    "one_sided",
    "st_fan",
    "primary_outerpath",
    "st_outerpath",
    "upward_outerpath",
    "biconnected_st_outerplanar",
    "st_blocks",
    "cactus",
    "random_dag",
)


class SplitMix64:
    """SplitMix64 PRNG (Steele/Lea/Flood); pure integer arithmetic, so the
    stream is identical on every platform."""

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def randint(self, lo: int, hi: int) -> int:
        """Uniform in [lo, hi] inclusive."""
        if hi < lo:
            raise ValueError("empty range")
        return lo + self.next_u64() % (hi - lo + 1)

    def choice(self, seq):
        return seq[self.randint(0, len(seq) - 1)]

    def chance(self, pct: int) -> bool:
        return self.randint(0, 99) < pct

    def shuffle(self, items: list) -> list:
        for i in range(len(items) - 1, 0, -1):
            j = self.randint(0, i)
            items[i], items[j] = items[j], items[i]
        return items


@dataclass(frozen=True)
class GenSpec:
    family: str
    n: int
    seed: int
    extras: tuple = ()  # sorted (key, value) pairs

    def extra(self, key, default=None):
        return dict(self.extras).get(key, default)


@dataclass
class GenResult:
    dag: Dag
    embedding: OuterEmbedding | None
    certificate: dict = field(default_factory=dict)


def generate(spec: GenSpec) -> GenResult:
    if spec.family not in FAMILIES:
        raise InfeasibleSpec(f"unknown family {spec.family!r}")
    rng = SplitMix64(spec.seed * 0x100000001B3 + _family_tag(spec.family))
    fn = globals()[f"_gen_{spec.family}"]
    return fn(spec.n, rng, spec)


def _family_tag(family: str) -> int:
    tag = 0
    for ch in family:
        tag = (tag * 131 + ord(ch)) & MASK64
    return tag


def _names(n: int) -> list[str]:
    return [f"v{i:03d}" for i in range(n)]


# ---------------------------------------------------------------------------
# simple families


def _gen_one_sided(n, rng, spec):
    if n < 2:
        raise InfeasibleSpec("one_sided needs n >= 2")
    vs = _names(n)
    edges = {(vs[i], vs[i + 1]) for i in range(n - 1)}
    if n >= 3:
        edges.add((vs[0], vs[n - 1]))
    chords = []

    def triangulate(lo, hi):
        if hi - lo < 2:
            return
        m = rng.randint(lo + 1, hi - 1)
        for a, b in ((lo, m), (m, hi)):
            if b - a >= 2 and (a, b) != (0, n - 1):
                if rng.chance(70):
                    chords.append((a, b))
        triangulate(lo, m)
        triangulate(m, hi)

    if n >= 4:
        triangulate(0, n - 1)
    edges.update((vs[a], vs[b]) for a, b in chords)
    dag = build_dag(vs, sorted(edges))
    cert = {"family": "one_sided", "s": vs[0], "t": vs[-1], "chords": sorted(chords)}
    return GenResult(dag, recover_outer_embedding(dag), cert)


def _gen_st_fan(n, rng, spec):
    if n < 3:
        raise InfeasibleSpec("st_fan needs n >= 3")
    left = rng.randint(1, n - 2)
    right = n - 2 - left
    return _build_fan(left, right)


def _build_fan(left: int, right: int) -> GenResult:
    s, t = "s", "t"
    a = [f"a{i:02d}" for i in range(1, left + 1)]
    b = [f"b{i:02d}" for i in range(1, right + 1)]
    edges = set()
    for path in (a, b):
        prev = s
        for v in path:
            edges.add((prev, v))
            prev = v
        edges.add((prev, t))
    # the apex is adjacent to every vertex: st is outer when one side is
    # empty, an inner chord otherwise
    edges.add((s, t))
    edges.update((s, v) for v in a[1:])
    edges.update((s, v) for v in b[1:])
    vs = sorted([s, t] + a + b)
    dag = build_dag(vs, sorted(edges))
    cert = {"family": "st_fan", "s": s, "t": t, "left": a, "right": b}
    return GenResult(dag, recover_outer_embedding(dag), cert)


# ---------------------------------------------------------------------------
# outerpath families: grow triangles face by face


class _Growth:
    """Triangulated outerplanar growth state with per-vertex rotations."""

    def __init__(self, names):
        self.names = names
        self.used = 0
        self.edges: set[tuple[str, str]] = set()
        self.faces: list[tuple[str, str, str]] = []
        self.rot: dict[str, list[str]] = {}
        self.outer: set[frozenset] = set()

    def fresh(self) -> str:
        v = self.names[self.used]
        self.used += 1
        return v

    def start_triangle(self, rng, mode: str):
        x, y, z = self.fresh(), self.fresh(), self.fresh()
        if mode == "st":
            s, mid, t = x, y, z
            self.edges = {(s, mid), (mid, t), (s, t)}
        else:
            order = rng.shuffle([x, y, z])
            s, mid, t = order
            self.edges = {(s, mid), (mid, t), (s, t)}
        self.faces.append((x, y, z))
        for v in (x, y, z):
            self.rot[v] = [u for u in (x, y, z) if u != v]
        for pair in ((x, y), (y, z), (x, z)):
            self.outer.add(frozenset(pair))
        return s, t

    def direction(self, u, v):
        return (u, v) if (u, v) in self.edges else (v, u)

    def is_bimodal(self, v) -> bool:
        dirs = []
        for u in self.rot[v]:
            dirs.append(0 if (v, u) in self.edges else 1)
        if len(dirs) <= 2:
            return True
        changes = sum(1 for i in range(len(dirs)) if dirs[i] != dirs[i - 1])
        return changes <= 2

    def attach(self, und_edge: frozenset, orient: str, s, t, check_bimodal=False):
        """Glue a fresh triangle onto an outer edge.  ``orient`` is one of
        'internal' (tail->z->head), 'sink' (z becomes the sink; only legal
        when head is the current sink), 'source' (z becomes the source; only
        legal when tail is the current source).  Returns (z, s, t) or None
        if the bimodality check rejects the move."""
        u, v = sorted(und_edge)
        te, he = self.direction(u, v)
        z = self.names[self.used]
        if orient == "internal":
            new_edges = [(te, z), (z, he)]
        elif orient == "sink":
            new_edges = [(te, z), (he, z)]
            t = z
        elif orient == "source":
            new_edges = [(z, te), (z, he)]
            s = z
        else:
            raise ValueError(orient)
        # tentatively extend rotations (new edge sits at the wedge end next
        # to the attach edge, which stops being outer)
        for w, other in ((te, he), (he, te)):
            if self.rot[w][0] == other:
                self.rot[w].insert(0, z)
            else:
                self.rot[w].append(z)
        self.edges.update(new_edges)
        if check_bimodal and not (self.is_bimodal(te) and self.is_bimodal(he)):
            self.edges.difference_update(new_edges)
            for w in (te, he):
                if self.rot[w][0] == z:
                    self.rot[w].pop(0)
                else:
                    self.rot[w].pop()
            return None
        self.used += 1
        self.rot[z] = [te, he]
        self.faces.append((te, he, z))
        self.outer.discard(und_edge)
        self.outer.add(frozenset((te, z)))
        self.outer.add(frozenset((he, z)))
        return z, s, t

    def to_result(self, family, s=None, t=None) -> GenResult:
        vs = sorted(self.rot)
        dag = build_dag(vs, sorted(self.edges))
        cert = {"family": family, "faces": [tuple(f) for f in self.faces]}
        if s is not None:
            cert["s"], cert["t"] = s, t
        return GenResult(dag, recover_outer_embedding(dag), cert)


def _grow_outerpath(n, rng, allow_source_moves, allow_sink_moves, family):
    if n < 3:
        raise InfeasibleSpec(f"{family} needs n >= 3")
    g = _Growth(_names(n))
    s, t = g.start_triangle(rng, "st")
    while g.used < n:
        last = g.faces[-1]
        candidates = []
        for i in range(3):
            ue = frozenset((last[i], last[(i + 1) % 3]))
            if ue in g.outer:
                candidates.append(ue)
        ue = candidates[rng.randint(0, len(candidates) - 1)]
        te, he = g.direction(*sorted(ue))
        orients = ["internal"]
        if allow_sink_moves and he == t:
            orients.append("sink")
        if allow_source_moves and te == s:
            orients.append("source")
        orient = orients[rng.randint(0, len(orients) - 1)]
        res = g.attach(ue, orient, s, t)
        z, s, t = res
    return g.to_result(family, s, t)


def _gen_primary_outerpath(n, rng, spec):
    return _grow_outerpath(n, rng, False, True, "primary_outerpath")


def _gen_st_outerpath(n, rng, spec):
    return _grow_outerpath(n, rng, True, True, "st_outerpath")


def _gen_upward_outerpath(n, rng, spec):
    if n < 3:
        raise InfeasibleSpec("upward_outerpath needs n >= 3")
    g = _Growth(_names(n))
    g.start_triangle(rng, "any")
    while g.used < n:
        last = g.faces[-1]
        candidates = []
        for i in range(3):
            ue = frozenset((last[i], last[(i + 1) % 3]))
            if ue in g.outer:
                candidates.append(ue)
        ue = candidates[rng.randint(0, len(candidates) - 1)]
        # sink/source moves are unconstrained here (z becomes a local
        # sink/source); only bimodality can reject the move, and the
        # internal orientation always passes
        for orient in rng.shuffle(["internal", "sink", "source"]):
            if g.attach(ue, orient, None, None, check_bimodal=True) is not None:
                break
    return g.to_result("upward_outerpath")


def _gen_biconnected_st_outerplanar(n, rng, spec):
    if n < 3:
        raise InfeasibleSpec("biconnected_st_outerplanar needs n >= 3")
    g = _Growth(_names(n))
    s, t = g.start_triangle(rng, "st")
    while g.used < n:
        ue = rng.choice(sorted(tuple(sorted(e)) for e in g.outer))
        ue = frozenset(ue)
        te, he = g.direction(*sorted(ue))
        orients = ["internal"]
        if he == t:
            orients.append("sink")
        if te == s:
            orients.append("source")
        orient = orients[rng.randint(0, len(orients) - 1)]
        z, s, t = g.attach(ue, orient, s, t)
    # optional de-triangulation: drop inner chords that keep s/t unique
    dag = build_dag(sorted(g.rot), sorted(g.edges))
    emb = recover_outer_embedding(dag)
    edges = set(dag.edges)
    for e in sorted(dag.edges):
        if not emb.is_inner_edge(e):
            continue
        if not rng.chance(25):
            continue
        te, he = e
        outdeg = sum(1 for a, b in edges if a == te)
        indeg = sum(1 for a, b in edges if b == he)
        if outdeg >= 2 and indeg >= 2:
            edges.discard(e)
    dag = build_dag(sorted(g.rot), sorted(edges))
    cert = {"family": "biconnected_st_outerplanar", "s": s, "t": t}
    return GenResult(dag, recover_outer_embedding(dag), cert)


# ---------------------------------------------------------------------------
# block-composed families


def _gen_st_blocks(n, rng, spec):
    if n < 2:
        raise InfeasibleSpec("st_blocks needs n >= 2")
    counter = [0]

    def fresh():
        counter[0] += 1
        return f"v{counter[0] - 1:03d}"

    edges: set[tuple[str, str]] = set()
    vertices: list[str] = []
    internal_count: dict[str, int] = {}
    blocks_cert = []

    def make_block(size):
        """Return (vertex list, edge list, s, t, internals) with fresh names."""
        if size == 2:
            a, b = fresh(), fresh()
            return [a, b], [(a, b)], a, b, []
        sub = generate(GenSpec("biconnected_st_outerplanar", size, rng.next_u64()))
        mapping = {v: fresh() for v in sub.dag.vertices}
        vs = [mapping[v] for v in sub.dag.vertices]
        es = [(mapping[a], mapping[b]) for a, b in sorted(sub.dag.edges)]
        cls = classify_vertices(sub.dag)
        internals = sorted(mapping[v] for v, c in cls.items() if c == INTERNAL)
        return vs, es, mapping[sub.certificate["s"]], mapping[sub.certificate["t"]], internals

    first_size = min(n, rng.randint(2, max(2, min(n, 8))))
    vs, es, bs, bt, internals = make_block(first_size)
    vertices.extend(vs)
    edges.update(es)
    for v in internals:
        internal_count[v] = internal_count.get(v, 0) + 1
    blocks_cert.append({"vertices": vs, "s": bs, "t": bt})

    while len(vertices) < n:
        c = rng.choice(sorted(vertices))
        remaining = n - len(vertices)
        size = 2 if remaining == 1 or rng.chance(30) else min(remaining + 1, rng.randint(3, 8))
        vs, es, bs, bt, internals = make_block(size)
        roles = ["source", "sink"]
        if internal_count.get(c, 0) < 2 and internals:
            roles.append("internal")
        role = rng.choice(roles)
        if role == "source":
            target = bs
        elif role == "sink":
            target = bt
        else:
            target = rng.choice(internals)
        rename = {target: c}
        vs2 = [rename.get(v, v) for v in vs if v != target]
        es2 = [(rename.get(a, a), rename.get(b, b)) for a, b in es]
        vertices.extend(vs2)
        edges.update(es2)
        if role == "internal":
            internal_count[c] = internal_count.get(c, 0) + 1
        for v in internals:
            if v != target:
                internal_count[v] = internal_count.get(v, 0) + 1
        blocks_cert.append(
            {"vertices": sorted(set(vs2) | {c}), "s": rename.get(bs, bs), "t": rename.get(bt, bt)}
        )

    dag = build_dag(sorted(vertices), sorted(edges))
    cert = {"family": "st_blocks", "blocks": blocks_cert}
    return GenResult(dag, recover_outer_embedding(dag), cert)


def _gen_cactus(n, rng, spec):
    if n < 1:
        raise InfeasibleSpec("cactus needs n >= 1")
    counter = [0]

    def fresh():
        counter[0] += 1
        return f"v{counter[0] - 1:03d}"

    if n == 1:
        v = fresh()
        dag = build_dag([v], [])
        return GenResult(dag, recover_outer_embedding(dag), {"family": "cactus", "blocks": []})

    edges: set[tuple[str, str]] = set()
    vertices: list[str] = [fresh()]
    internal_count: dict[str, int] = {}
    blocks_cert = []

    def oriented_cycle(vs, anchor_role, anchor):
        """Random acyclic orientation of the cycle on vs, with the anchor's
        role (source/sink/internal within the block) forced."""
        r = len(vs)
        prios = rng.shuffle(list(range(r)))
        prio = dict(zip(vs, prios))
        ai = vs.index(anchor)
        if anchor_role == "source":
            lowest = min(vs, key=lambda v: prio[v])
            prio[anchor], prio[lowest] = prio[lowest], prio[anchor]
        elif anchor_role == "sink":
            highest = max(vs, key=lambda v: prio[v])
            prio[anchor], prio[highest] = prio[highest], prio[anchor]
        else:
            lo = prio[vs[ai - 1]]
            hi = prio[vs[(ai + 1) % r]]
            if not (min(lo, hi) < prio[anchor] < max(lo, hi)):
                # swap with a vertex whose priority lies strictly between
                want = sorted([lo, hi])
                for w in vs:
                    if w != anchor and want[0] < prio[w] < want[1]:
                        prio[anchor], prio[w] = prio[w], prio[anchor]
                        break
        es = []
        for i in range(r):
            a, b = vs[i], vs[(i + 1) % r]
            es.append((a, b) if prio[a] < prio[b] else (b, a))
        return es

    while len(vertices) < n:
        c = rng.choice(sorted(vertices))
        remaining = n - len(vertices)
        trivial = remaining == 1 or rng.chance(35)
        if trivial:
            z = fresh()
            vertices.append(z)
            e = (c, z) if rng.chance(50) else (z, c)
            edges.add(e)
            blocks_cert.append({"cycle": False, "vertices": sorted((c, z))})
            continue
        size = min(remaining + 1, rng.randint(3, 7))
        ring = [c] + [fresh() for _ in range(size - 1)]
        vertices.extend(ring[1:])
        roles = ["source", "sink"]
        if internal_count.get(c, 0) < 2:
            roles.append("internal")
        role = rng.choice(roles)
        es = oriented_cycle(ring, role, c)
        for v in ring:
            has_in = any(b == v for a, b in es)
            has_out = any(a == v for a, b in es)
            if has_in and has_out:
                internal_count[v] = internal_count.get(v, 0) + 1
        edges.update(es)
        blocks_cert.append({"cycle": True, "vertices": sorted(ring)})

    dag = build_dag(sorted(vertices), sorted(edges))
    cert = {"family": "cactus", "blocks": blocks_cert}
    return GenResult(dag, recover_outer_embedding(dag), cert)


def _gen_random_dag(n, rng, spec):
    if n < 1:
        raise InfeasibleSpec("random_dag needs n >= 1")
    vs = _names(n)
    order = rng.shuffle(list(vs))
    rank = {v: i for i, v in enumerate(order)}
    pct = spec.extra("p", 30)
    max_tau = spec.extra("max_tau")
    edges = []
    if max_tau:
        cover = vs[: min(max_tau, n)]
        for c in cover:
            for v in vs:
                if v == c:
                    continue
                if v in cover and v < c:
                    continue  # handle each cover pair once
                if rng.chance(pct):
                    a, b = (c, v) if rank[c] < rank[v] else (v, c)
                    edges.append((a, b))
    else:
        for i in range(n):
            for j in range(i + 1, n):
                if rng.chance(pct):
                    a, b = (vs[i], vs[j]) if rank[vs[i]] < rank[vs[j]] else (vs[j], vs[i])
                    edges.append((a, b))
    dag = build_dag(vs, sorted(set(edges)))
    return GenResult(dag, None, {"family": "random_dag"})


# ---------------------------------------------------------------------------
# exhaustive small enumerations


def enumerate_small(family: str, n: int):
    """Deterministic stream of all non-isomorphic family members up to n
    vertices (exactly n for cycles and fans)."""
    if n > 8:
        raise TooLarge("enumerate_small supports n <= 8")
    if family == "cycle":
        yield from _enum_cycles(n)
    elif family == "st_fan":
        yield from _enum_fans(n)
    elif family == "one_sided":
        yield from _enum_one_sided(n)
    else:
        raise InfeasibleSpec(f"no exhaustive enumerator for {family!r}")


def _enum_cycles(n):
    if n < 3:
        raise InfeasibleSpec("cycles need n >= 3")
    seen = set()
    vs = _names(n)
    for bits in range(1, (1 << n) - 1):  # skip the two cyclic orientations
        s = tuple((bits >> i) & 1 for i in range(n))
        canon = _necklace_canon(s)
        if canon in seen:
            continue
        seen.add(canon)
        edges = []
        for i in range(n):
            a, b = vs[i], vs[(i + 1) % n]
            edges.append((a, b) if s[i] else (b, a))
        yield build_dag(vs, edges)


def _necklace_canon(s):
    n = len(s)
    best = None
    rev = tuple(1 - x for x in reversed(s))
    for cand in (s, rev):
        for r in range(n):
            rot = cand[r:] + cand[:r]
            if best is None or rot < best:
                best = rot
    return best


def _enum_fans(n):
    if n < 3:
        raise InfeasibleSpec("fans need n >= 3")
    for left in range(1, n - 1):
        right = n - 2 - left
        if right > left:
            continue  # mirror image of (right, left)
        if right < 0:
            continue
        yield _build_fan(left, right).dag


def _enum_one_sided(n):
    if n < 2:
        raise InfeasibleSpec("one_sided needs n >= 2")
    vs = _names(n)
    base = [(i, i + 1) for i in range(n - 1)]
    if n >= 3:
        base.append((0, n - 1))
    all_chords = [
        (i, j)
        for i in range(n)
        for j in range(i + 2, n)
        if (i, j) != (0, n - 1)
    ]

    def crossing(c1, c2):
        (a1, b1), (a2, b2) = sorted((c1, c2))
        return a1 < a2 < b1 < b2

    def rec(idx, chosen):
        if idx == len(all_chords):
            yield list(chosen)
            return
        yield from rec(idx + 1, chosen)
        c = all_chords[idx]
        if all(not crossing(c, d) for d in chosen):
            chosen.append(c)
            yield from rec(idx + 1, chosen)
            chosen.pop()

    for chords in rec(0, []):
        edges = [(vs[a], vs[b]) for a, b in base + chords]
        yield build_dag(vs, sorted(edges))
