"""Exact workbench for ends of fundamental groups of graphs of finite p-groups.

Submodules:

- ``fpcore``     finite p-groups as multiplication tables
- ``fplinalg``   dense exact linear algebra over GF(p)
- ``gmodules``   modules over the group algebra, Nakayama counts
- ``cohomology`` H^0/H^1 via explicit cochains, lemma checks
- ``graphs``     multigraphs, matchings, the 2M + 9T edge bound
- ``gog``        graphs of groups, presentations, witness search
- ``ends``       level-wise module of ends, Fox-calculus oracle
- ``cli``        subcommands and canonical JSON reports
- ``corpus``     built-in fixtures
"""

from .fplinalg import (
    KERNEL,
    FpMatrix,
    NoSolution,
    NotASubspace,
    Subspace,
    quotient_dim,
    rank_profile,
    solve,
)

__version__ = "0.1.0"

__all__ = [
    "KERNEL",
    "FpMatrix",
    "Subspace",
    "NotASubspace",
    "NoSolution",
    "quotient_dim",
    "rank_profile",
    "solve",
    "__version__",
]
