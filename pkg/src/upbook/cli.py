"""Command-line surface.

Exit codes: 0 success; 1 invalid embedding (verify); 2 family mismatch;
3 I/O failure; 4 internal invariant breach.
"""
from __future__ import annotations

import os
import sys

import click

from . import documents
from .core import recover_outer_embedding, single_source_sink
from .errors import InternalInvariantError, UpbookError
from .exact import domination_number, exact_ubt
from .gadgets import build_reduction
from .generators import FAMILIES, GenSpec, generate
from .kernel import fpt_decide, kernelize, vertex_cover
from .layout import check_uv_consecutive, validate
from .blocks import embed_biconnected_st_outerplanar, embed_cactus, embed_st_blocks
from .outerpath import embed_one_sided, embed_st_fan, embed_st_outerpath, embed_upward_outerpath

CLASS_BOUNDS = {
    "one-sided": 1,
    "fan": 2,
    "st-outerpath": 4,
    "outerpath": 16,
    "st-outerplanar": 4,
    "st-blocks": 8,
    "cactus": 6,
}

EXIT_INVALID = 1
EXIT_FAMILY = 2
EXIT_IO = 3
EXIT_INTERNAL = 4


def _read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return documents.loads(fh.read())
    except (OSError, ValueError) as ex:
        click.echo(f"error: cannot read {path}: {ex}", err=True)
        sys.exit(EXIT_IO)


def _write_text(path, text):
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as ex:
        click.echo(f"error: cannot write {path}: {ex}", err=True)
        sys.exit(EXIT_IO)


def _load_graph(path):
    doc = _read_json(path)
    try:
        return documents.graph_from_document(doc)
    except UpbookError as ex:
        click.echo(f"error: bad graph document: {ex}", err=True)
        sys.exit(EXIT_IO)


def _parse_edge(text):
    u, _, v = text.partition(",")
    if not u or not v:
        click.echo("error: edge must be given as u,v", err=True)
        sys.exit(EXIT_IO)
    return (u, v)


@click.group()
def main():
    """Upward book embeddings of outerplanar DAG families."""


@main.command()
@click.option("--class", "family", required=True,
              type=click.Choice(sorted(CLASS_BOUNDS)))
@click.option("--in", "infile", required=True, type=click.Path())
@click.option("--out", "outfile", required=True, type=click.Path())
@click.option("--edge", "edge", default=None, help="target edge u,v for uv-consecutive classes")
def embed(family, infile, outfile, edge):
    """Embed a graph of the given class; prints pages used and the bound."""
    dag = _load_graph(infile)
    target = _parse_edge(edge) if edge else None
    try:
        emb, meta = _dispatch_embed(dag, family, target)
    except InternalInvariantError as ex:
        click.echo(f"internal error: {ex}", err=True)
        sys.exit(EXIT_INTERNAL)
    except UpbookError as ex:
        click.echo(f"error: input is not a valid '{family}' instance: {ex}", err=True)
        sys.exit(EXIT_FAMILY)
    rep = validate(dag, emb, max_pages=CLASS_BOUNDS[family])
    if not rep.ok:
        click.echo("internal error: embedder output failed validation", err=True)
        sys.exit(EXIT_INTERNAL)
    meta["algorithm"] = family
    meta["bound"] = CLASS_BOUNDS[family]
    _write_text(outfile, documents.dumps(documents.embedding_to_document(emb, meta)))
    click.echo(f"pages={rep.pages_used} bound={CLASS_BOUNDS[family]}")


def _dispatch_embed(dag, family, target):
    meta = {}
    if family == "one-sided":
        emb = embed_one_sided(dag)
    elif family == "fan":
        if target is None:
            emb_obj = recover_outer_embedding(dag)
            s, t = single_source_sink(dag)
            outer = sorted(
                e for e in dag.edges if not emb_obj.is_inner_edge(e) and e != (s, t)
            )
            target = outer[0]
        emb = embed_st_fan(dag, target)
    elif family == "st-outerpath":
        emb = embed_st_outerpath(dag, target)
    elif family == "outerpath":
        emb = embed_upward_outerpath(dag)
    elif family == "st-outerplanar":
        emb = embed_biconnected_st_outerplanar(dag)
    elif family == "st-blocks":
        ps = embed_st_blocks(dag)
        emb = ps.embedding
        meta["page_separation"] = {
            str(b): sorted(pages) for b, pages in ps.block_pages.items()
        }
    elif family == "cactus":
        ps = embed_cactus(dag)
        emb = ps.embedding
        meta["page_separation"] = {
            str(b): sorted(pages) for b, pages in ps.block_pages.items()
        }
    else:  # pragma: no cover
        raise UpbookError(f"unknown class {family}")
    return emb, meta


@main.command()
@click.option("--graph", "graph_path", required=True, type=click.Path())
@click.option("--embedding", "emb_path", required=True, type=click.Path())
@click.option("--max-pages", type=int, default=None)
@click.option("--consecutive", default=None, help="check uv-consecutiveness for edge u,v")
@click.option("--source", default=None)
@click.option("--sink", default=None)
def verify(graph_path, emb_path, max_pages, consecutive, source, sink):
    """Validate an embedding document against its graph."""
    dag = _load_graph(graph_path)
    emb = documents.embedding_from_document(_read_json(emb_path))
    try:
        rep = validate(dag, emb, max_pages=max_pages)
    except UpbookError as ex:
        click.echo(f"error: {ex}", err=True)
        sys.exit(EXIT_IO)
    report = {
        "topological_ok": rep.topological_ok,
        "crossings": [[list(e1), list(e2)] for e1, e2 in rep.crossings],
        "pages_used": rep.pages_used,
        "per_page_edge_counts": {str(k): v for k, v in sorted(rep.per_page_edge_counts.items())},
    }
    ok = rep.ok
    if consecutive:
        uv = _parse_edge(consecutive)
        if not source or not sink:
            click.echo("error: --consecutive needs --source and --sink", err=True)
            sys.exit(EXIT_IO)
        cc = check_uv_consecutive(dag, emb, uv, source, sink)
        report["consecutive_ok"] = cc.ok
        report["consecutive_reasons"] = cc.reasons
        ok = ok and cc.ok
    click.echo(documents.dumps(report), nl=False)
    sys.exit(0 if ok else EXIT_INVALID)


@main.command()
@click.option("--in", "infile", required=True, type=click.Path())
@click.option("--max-pages", "kmax", required=True, type=int)
@click.option("--witness-out", default=None, type=click.Path())
def exact(infile, kmax, witness_out):
    """Exact upward book thickness up to a page budget."""
    dag = _load_graph(infile)
    res = exact_ubt(dag, kmax)
    click.echo(f"ubt={res.ubt} nodes={res.nodes_explored}")
    if res.witness is not None and witness_out:
        _write_text(
            witness_out,
            documents.dumps(
                documents.embedding_to_document(res.witness, {"algorithm": "exact"})
            ),
        )


@main.command()
@click.option("--in", "infile", required=True, type=click.Path())
@click.option("--k", "k", required=True, type=int)
@click.option("--out", "outfile", required=True, type=click.Path())
def gadget(infile, k, outfile):
    """Build the hardness-reduction graph for the given page target."""
    dag = _load_graph(infile)
    try:
        gd = build_reduction(dag, k)
    except UpbookError as ex:
        click.echo(f"error: {ex}", err=True)
        sys.exit(EXIT_FAMILY)
    _write_text(outfile, documents.dumps(documents.graph_to_document(gd.g_prime)))
    click.echo(
        f"vertices={len(gd.g_prime.vertices)} edges={len(gd.g_prime.edges)} k={k}"
    )


@main.command()
@click.option("--in", "infile", required=True, type=click.Path())
@click.option("--k", "k", required=True, type=int)
@click.option("--out", "outfile", required=True, type=click.Path())
def kernel(infile, k, outfile):
    """Kernelize an instance for the k-page decision."""
    dag = _load_graph(infile)
    ctx = vertex_cover(dag, len(dag.vertices))
    kern = kernelize(dag, ctx, k)
    _write_text(outfile, documents.dumps(documents.graph_to_document(kern.reduced)))
    click.echo(
        f"tau={ctx.tau} kernel_vertices={len(kern.reduced.vertices)} removed={len(kern.removed)}"
    )


@main.command()
@click.option("--in", "infile", required=True, type=click.Path())
@click.option("--k", "k", required=True, type=int)
@click.option("--witness-out", default=None, type=click.Path())
def decide(infile, k, witness_out):
    """FPT decision: does a k-page upward book embedding exist?"""
    dag = _load_graph(infile)
    try:
        ok, witness = fpt_decide(dag, k)
    except UpbookError as ex:
        click.echo(f"error: {ex}", err=True)
        sys.exit(EXIT_INTERNAL)
    click.echo(f"answer={'yes' if ok else 'no'}")
    if ok and witness is not None and witness_out:
        _write_text(
            witness_out,
            documents.dumps(
                documents.embedding_to_document(witness, {"algorithm": "fpt"})
            ),
        )
    sys.exit(0)


@main.command()
@click.option("--family", required=True, type=click.Choice(FAMILIES))
@click.option("--n", "n", required=True, type=int)
@click.option("--seed", "seed", default=None, type=int,
              help="defaults to $UPBOOK_SEED or 0")
@click.option("--out", "outfile", required=True, type=click.Path())
def gen(family, n, seed, outfile):
    """Generate a seeded instance of a family."""
    if seed is None:
        seed = int(os.environ.get("UPBOOK_SEED", "0"))
    try:
        res = generate(GenSpec(family, n, seed))
    except UpbookError as ex:
        click.echo(f"error: {ex}", err=True)
        sys.exit(EXIT_FAMILY)
    outer = res.embedding.outer_cycle if res.embedding else None
    _write_text(outfile, documents.dumps(documents.graph_to_document(res.dag, outer)))
    click.echo(f"family={family} n={len(res.dag.vertices)} edges={len(res.dag.edges)} seed={seed}")


@main.command()
@click.option("--graph", "graph_path", required=True, type=click.Path())
@click.option("--embedding", "emb_path", default=None, type=click.Path())
@click.option("--out", "outfile", required=True, type=click.Path())
def dot(graph_path, emb_path, outfile):
    """Export Graphviz DOT, vertices in spine order when an embedding is given."""
    dag = _load_graph(graph_path)
    emb = None
    if emb_path:
        emb = documents.embedding_from_document(_read_json(emb_path))
    try:
        text = documents.to_dot(dag, emb)
    except UpbookError as ex:
        click.echo(f"error: {ex}", err=True)
        sys.exit(EXIT_IO)
    _write_text(outfile, text)
    click.echo(f"wrote {outfile}")


@main.command()
@click.option("--in", "infile", required=True, type=click.Path())
@click.option("--bound", "bound", required=True, type=int)
def dominate(infile, bound):
    """Exact domination number up to a bound."""
    dag = _load_graph(infile)
    try:
        gamma = domination_number(dag, bound)
    except UpbookError as ex:
        click.echo(f"error: {ex}", err=True)
        sys.exit(EXIT_FAMILY)
    click.echo(f"gamma={gamma}")


if __name__ == "__main__":
    main()
