"""JSON document formats for graphs and embeddings, plus DOT export.

Keys are sorted and edge keys use the exact "tail->head" form, so a
document serializes to identical bytes on every run.
"""
from __future__ import annotations

import json

from .core import Dag, build_dag, recover_outer_embedding
from .errors import DomainMismatch
from .layout import BookEmbedding

EDGE_SEP = "->"


def graph_to_document(dag: Dag, outer_face=None) -> dict:
    doc = {
        "vertices": list(dag.vertices),
        "edges": [[t, h] for t, h in sorted(dag.edges)],
    }
    if outer_face is not None:
        doc["outer_face"] = list(outer_face)
    return doc


def graph_from_document(doc: dict) -> Dag:
    dag = build_dag(doc["vertices"], [tuple(e) for e in doc["edges"]])
    if "outer_face" in doc:
        emb = recover_outer_embedding(dag)
        if not _same_cycle(tuple(doc["outer_face"]), emb.outer_cycle):
            raise DomainMismatch("outer_face does not match the recovered outer cycle")
    return dag


def _same_cycle(a, b) -> bool:
    if len(a) != len(b) or set(a) != set(b):
        return False
    if len(a) <= 2:
        return True
    doubled = b + b
    rev = tuple(reversed(b)) + tuple(reversed(b))
    for i in range(len(b)):
        if doubled[i : i + len(a)] == a or rev[i : i + len(a)] == a:
            return True
    return False


def embedding_to_document(emb: BookEmbedding, meta: dict | None = None) -> dict:
    return {
        "order": list(emb.order),
        "pages": {f"{t}{EDGE_SEP}{h}": p for (t, h), p in sorted(emb.pages.items())},
        "num_pages": emb.pages_used(),
        "meta": meta or {},
    }


def embedding_from_document(doc: dict) -> BookEmbedding:
    pages = {}
    for key, p in doc["pages"].items():
        t, _, h = key.partition(EDGE_SEP)
        pages[(t, h)] = int(p)
    return BookEmbedding(tuple(doc["order"]), pages)


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def loads(text: str) -> dict:
    return json.loads(text)


# DOT export: vertices in spine order, edges colored by page

_PAGE_COLORS = (
    "black", "red", "blue", "forestgreen", "darkorange", "purple", "brown",
    "deeppink", "cadetblue", "olive", "navy", "firebrick", "teal", "magenta",
    "gold3", "gray40",
)


def to_dot(dag: Dag, emb: BookEmbedding | None = None) -> str:
    lines = ["digraph upbook {", "  rankdir=LR;"]
    if emb is not None:
        if sorted(emb.order) != sorted(dag.vertices):
            raise DomainMismatch("embedding order does not cover the graph")
        for v in emb.order:
            lines.append(f'  "{v}";')
        lines.append("  { rank=same; }")
        for t, h in sorted(dag.edges):
            p = emb.pages[(t, h)]
            color = _PAGE_COLORS[(p - 1) % len(_PAGE_COLORS)]
            lines.append(f'  "{t}" -> "{h}" [color={color}, label="{p}"];')
    else:
        for v in dag.vertices:
            lines.append(f'  "{v}";')
        for t, h in sorted(dag.edges):
            lines.append(f'  "{t}" -> "{h}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
