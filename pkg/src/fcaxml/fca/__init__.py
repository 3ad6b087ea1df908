from .context import FormalContext, closure, derive_extent, derive_intent
from .dot import to_dot
from .incremental import insert_object
from .lattice import ConceptLattice, FormalConcept, build_lattice, upper_neighborhood

__all__ = [
    "ConceptLattice",
    "FormalConcept",
    "FormalContext",
    "build_lattice",
    "closure",
    "derive_extent",
    "derive_intent",
    "insert_object",
    "to_dot",
    "upper_neighborhood",
]
