"""treeglue: decorated Bienayme-Galton-Watson trees and their stable limits.

Sampling of size- and leaf-conditioned trees, exact glued metrics on
decorated trees, continuum marginals by iterative spine gluing, and the
quantitative checks (generating-function counts, moment identities,
distance oracles, dimension estimates) that tie the two together.
"""

__version__ = "0.1.0"

from . import errors
from .trees import (
    LukasiewiczPath,
    PlaneTree,
    ancestors,
    from_lukasiewicz,
    lca,
    lca_by_walk,
    lukasiewicz,
)

__all__ = [
    "errors",
    "PlaneTree",
    "LukasiewiczPath",
    "lukasiewicz",
    "from_lukasiewicz",
    "lca",
    "lca_by_walk",
    "ancestors",
]
