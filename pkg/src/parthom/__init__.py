"""Exact evaluation and complexity classification of partition functions Z_A(G)
for real symmetric (rational) matrices A."""
from __future__ import annotations

from .classify import TractabilityWitness, Verdict, classify
from .core import DiagMatrix, Multigraph, PdpfInstance, SymMatrix
from .evaluate import HardMatrixError, eval_tractable, evaluate
from .formats import ParseError, parse_graph, parse_matrix
from .oracle import OracleGuardError, eval_pdpf_bruteforce, eval_plain_bruteforce

__version__ = "0.1.0"

__all__ = [
    "DiagMatrix",
    "HardMatrixError",
    "Multigraph",
    "OracleGuardError",
    "ParseError",
    "PdpfInstance",
    "SymMatrix",
    "TractabilityWitness",
    "Verdict",
    "classify",
    "eval_pdpf_bruteforce",
    "eval_plain_bruteforce",
    "eval_tractable",
    "evaluate",
    "parse_graph",
    "parse_matrix",
]
