"""Upward book embeddings of outerplanar DAG families.

Constructive constant-page embedders for outerpaths, st-outerplanar block
graphs and cacti, an exact page-number oracle, a domination-number oracle,
a hardness-reduction gadget builder, and a vertex-cover kernelization with
an FPT decision procedure.
"""

__version__ = "0.1.0"
