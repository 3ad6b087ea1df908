from .evaluate import (
    QueryConcept,
    build_query_concept,
    direct_elements,
    eval_conditional,
    eval_return,
    eval_search_path,
    plan_query,
)
from .parser import Conditional, ParsedQuery, Step, parse_query, unparse

__all__ = [
    "Conditional",
    "ParsedQuery",
    "QueryConcept",
    "Step",
    "build_query_concept",
    "direct_elements",
    "eval_conditional",
    "eval_return",
    "eval_search_path",
    "parse_query",
    "plan_query",
    "unparse",
]
