"""Index XML documents with formal concept analysis and answer queries by
inserting a query concept into the resulting concept lattice."""

from .builder import (GeneralizedView, build_generalized_view, build_parent_context,
                      conceptual_classification)
from .fca import (ConceptLattice, FormalConcept, FormalContext, build_lattice, closure,
                  derive_extent, derive_intent, insert_object, upper_neighborhood)
from .query import build_query_concept, parse_query
from .retrieval import answer_to_elements, insert_query, is_relevant, run_query, search_answers
from .store import build_index, load_index, save_index
from .xmlmodel import XmlTree, canonical_tag_key, extract_leaf_data, parent_nodes_bottom_up, parse_document

__version__ = "0.1.0"
