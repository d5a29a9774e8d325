"""Hardness-reduction gadget: the auxiliary graph whose spine order is
forced and the reduction that sandwiches an arbitrary DAG between its two
hub vertices.

The auxiliary graph is two directed paths joined into a single Hamiltonian
path plus two interleaved matchings; its page number is k+2, and in any
(k+2)-page layout the hub edges are forced onto the two extra pages."""
from __future__ import annotations

from dataclasses import dataclass, field

from .core import Dag, build_dag
from .errors import InvalidK
from .layout import BookEmbedding


@dataclass
class Gadget:
    h: Dag
    g_prime: Dag
    k: int
    roles: dict[str, str] = field(default_factory=dict)
    original_vertices: tuple[str, ...] = ()


def _role_names(k: int) -> dict[str, str]:
    roles = {}
    for i in range(1, k + 1):
        roles[f"u{i}"] = f"u{i:02d}"
        roles[f"v{i}"] = f"v{i:02d}"
        roles[f"w{i}"] = f"w{i:02d}"
        roles[f"z{i}"] = f"z{i:02d}"
    for x in "abcdefgh":
        roles[x] = x
    return roles


def build_auxiliary(k: int) -> Dag:
    """The forced-order auxiliary graph on 4k+8 vertices: path p1 through
    u_1..u_k, a, b, c, d, v_1..v_k; path p2 through w_1..w_k, e, f, g, h,
    z_1..z_k; matchings u_i v_i and w_i z_i; and the five joining edges."""
    if k < 1:
        raise InvalidK("k must be at least 1")
    r = _role_names(k)
    p1 = [r[f"u{i}"] for i in range(1, k + 1)] + [r["a"], r["b"], r["c"], r["d"]] + [
        r[f"v{i}"] for i in range(1, k + 1)
    ]
    p2 = [r[f"w{i}"] for i in range(1, k + 1)] + [r["e"], r["f"], r["g"], r["h"]] + [
        r[f"z{i}"] for i in range(1, k + 1)
    ]
    edges = []
    for path in (p1, p2):
        edges.extend(zip(path, path[1:]))
    edges.extend((r[f"u{i}"], r[f"v{i}"]) for i in range(1, k + 1))
    edges.extend((r[f"w{i}"], r[f"z{i}"]) for i in range(1, k + 1))
    edges.append((r["a"], r["e"]))
    edges.append((r["b"], r[f"w{1}"]))
    edges.append((r["d"], r["h"]))
    edges.append((r[f"v{k}"], r[f"w{1}"]))
    edges.append((r[f"v{k}"], r["g"]))
    return build_dag(sorted(set(p1 + p2)), sorted(set(edges)))


def build_reduction(g: Dag, k: int) -> Gadget:
    """G' = G union the auxiliary graph plus edges c->v and v->f for every
    original vertex v; original vertices are prefixed to keep role names
    addressable."""
    h = build_auxiliary(k)
    r = _role_names(k)
    renamed = {v: f"g:{v}" for v in g.vertices}
    vertices = sorted(set(h.vertices) | set(renamed.values()))
    edges = set(h.edges)
    edges.update((renamed[t], renamed[hd]) for t, hd in g.edges)
    for v in sorted(renamed.values()):
        edges.add((r["c"], v))
        edges.add((v, r["f"]))
    g_prime = build_dag(vertices, sorted(edges))
    return Gadget(h, g_prime, k, dict(r), tuple(sorted(renamed.values())))


@dataclass
class GadgetReport:
    property1_ok: bool
    property2_ok: bool
    details: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.property1_ok and self.property2_ok


def check_gadget_properties(gd: Gadget, witness: BookEmbedding) -> GadgetReport:
    """On a (k+2)-page layout of G': the two pairs of long edges must share
    pages (ae with bw1, dh with v_k g), and every original vertex must sit
    strictly between v_k and w_1 on the spine."""
    r = gd.roles
    k = gd.k
    details = []
    sigma = witness.pages
    p1_ok = True
    pair1 = (sigma.get((r["a"], r["e"])), sigma.get((r["b"], r[f"w{1}"])))
    pair2 = (sigma.get((r["d"], r["h"])), sigma.get((r[f"v{k}"], r["g"])))
    if pair1[0] != pair1[1]:
        p1_ok = False
        details.append(f"pages of ae and bw1 differ: {pair1}")
    if pair2[0] != pair2[1]:
        p1_ok = False
        details.append(f"pages of dh and v_k g differ: {pair2}")
    pos = witness.position()
    vk, w1 = pos[r[f"v{k}"]], pos[r[f"w{1}"]]
    p2_ok = True
    for v in gd.original_vertices:
        if not (vk < pos[v] < w1):
            p2_ok = False
            details.append(f"{v!r} not strictly between v_k and w_1")
    return GadgetReport(p1_ok, p2_ok, details)


def forced_spine_order(h: Dag) -> tuple[str, ...]:
    """The unique topological order of the auxiliary graph (all its vertices
    lie on one directed Hamiltonian path)."""
    from .outerpath import _unique_topological

    order = _unique_topological(h)
    if order is None:
        raise InvalidK("auxiliary graph order is not forced")
    return order


def forward_witness(gd: Gadget, g_emb: BookEmbedding) -> BookEmbedding:
    """Lift a k-page layout of G to a (k+2)-page layout of G' following the
    construction: G between the two paths, matchings on pages 1..k, joining
    edges on k+1, hub edges cv on k+1 and vf on k+2."""
    r = gd.roles
    k = gd.k
    h_order = forced_spine_order(gd.h)
    p1 = [v for v in h_order if v in _p1_set(gd)]
    p2 = [v for v in h_order if v not in _p1_set(gd)]
    order = tuple(p1) + tuple(f"g:{v}" for v in g_emb.order) + tuple(p2)
    pages = {}
    for (t, hd), p in g_emb.pages.items():
        pages[(f"g:{t}", f"g:{hd}")] = p
    for path in (p1, p2):
        for e in zip(path, path[1:]):
            pages[e] = 1
    # the long path edge joining the two halves nests around the block of
    # original vertices, crossing nothing on page 1
    pages[(r[f"v{k}"], r[f"w{1}"])] = 1
    for i in range(1, k + 1):
        pages[(r[f"u{i}"], r[f"v{i}"])] = i
        pages[(r[f"w{i}"], r[f"z{i}"])] = i
    pages[(r["a"], r["e"])] = k + 1
    pages[(r["b"], r[f"w{1}"])] = k + 1
    pages[(r["d"], r["h"])] = k + 2
    pages[(r[f"v{k}"], r["g"])] = k + 2
    for v in gd.original_vertices:
        pages[(r["c"], v)] = k + 1
        pages[(v, r["f"])] = k + 2
    return BookEmbedding(order, pages)


def _p1_set(gd: Gadget) -> set[str]:
    r = gd.roles
    k = gd.k
    return (
        {r[f"u{i}"] for i in range(1, k + 1)}
        | {r[f"v{i}"] for i in range(1, k + 1)}
        | {r["a"], r["b"], r["c"], r["d"]}
    )