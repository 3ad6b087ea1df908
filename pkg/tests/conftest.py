import sys
from pathlib import Path

import pytest

from fcaxml.builder import build_generalized_view, conceptual_classification
from fcaxml.xmlmodel import extract_leaf_data, parse_document

DATA = Path(__file__).parent / "data"
BIB_PATH = DATA / "bib.xml"


@pytest.fixture(scope="session")
def bib_bytes():
    return BIB_PATH.read_bytes()


@pytest.fixture(scope="session")
def bib_tree(bib_bytes):
    return parse_document(bib_bytes)


@pytest.fixture(scope="session")
def bib_items(bib_tree):
    return extract_leaf_data(bib_tree)


@pytest.fixture(scope="session")
def bib_classification(bib_tree, bib_items):
    return conceptual_classification(bib_tree, bib_items)


@pytest.fixture(scope="session")
def bib_view(bib_tree, bib_items, bib_classification):
    return build_generalized_view(bib_tree, bib_items, bib_classification)


@pytest.fixture(scope="session")
def node_by_path(bib_tree):
    return {bib_tree.path_key(n.node_id): n.node_id for n in bib_tree}


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
