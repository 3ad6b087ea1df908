import pytest
from hypothesis import given, settings

from fcaxml.errors import InvalidConcept
from fcaxml.fca import FormalContext, build_lattice, to_dot, upper_neighborhood
from fcaxml.fca.lattice import FormalConcept

from oracles import brute_force_concepts, brute_force_covers
from strategies import contexts
from test_context import BOOKS, ROOT_ATTRS, root_pairs

DATA = [f"D{i}" for i in range(1, 12)]
BOOK0_PAIRS = {("D1", "level"), ("D2", "title"), ("D3", "author[0]"), ("D4", "publisher")}


def C(extent, intent):
    return FormalConcept(frozenset(extent), frozenset(intent))


@pytest.fixture
def root_lattice():
    ctx = FormalContext.from_pairs(BOOKS, ROOT_ATTRS, root_pairs())
    return build_lattice(ctx)


def test_root_lattice(root_lattice):
    common = {"level", "title", "author[0]", "publisher"}
    expected = {
        C(BOOKS, common),
        C(["book[1]"], common | {"author[1]"}),
        C(["book[2]"], common | {"lang"}),
        C([], ROOT_ATTRS),
    }
    assert root_lattice.concept_set() == expected
    assert len(root_lattice.cover_edges) == 4
    assert root_lattice.concepts[root_lattice.top].extent == set(BOOKS)
    assert root_lattice.concepts[root_lattice.bottom].intent == set(ROOT_ATTRS)


def test_book0_lattice():
    ctx = FormalContext.from_pairs(DATA, ROOT_ATTRS, BOOK0_PAIRS)
    lat = build_lattice(ctx)
    expected = {C(DATA, []), C([], ROOT_ATTRS)} | {C([g], [m]) for g, m in BOOK0_PAIRS}
    assert lat.concept_set() == expected
    assert {(c.extent, c.intent) for c in lat.concepts} == brute_force_concepts(
        DATA, ROOT_ATTRS, BOOK0_PAIRS)


def test_empty_context():
    lat = build_lattice(FormalContext((), (), ()))
    assert lat.concepts == (C([], []),)
    assert lat.cover_edges == ()
    assert lat.top == lat.bottom == 0


def test_deterministic_order(root_lattice):
    sizes = [len(c.extent) for c in root_lattice.concepts]
    assert sizes == sorted(sizes)
    ctx = FormalContext.from_pairs(BOOKS, ROOT_ATTRS, root_pairs())
    assert build_lattice(ctx) == root_lattice


@settings(max_examples=300, deadline=None)
@given(contexts(max_g=6, max_m=6))
def test_matches_brute_force(ctx_pairs):
    ctx, pairs = ctx_pairs
    lat = build_lattice(ctx)
    oracle = brute_force_concepts(ctx.objects, ctx.attributes, pairs)
    got = {(c.extent, c.intent) for c in lat.concepts}
    assert got == oracle
    assert len(lat.concepts) == len(got)
    edges = {((lat[a].extent, lat[a].intent), (lat[b].extent, lat[b].intent))
             for a, b in lat.cover_edges}
    assert edges == brute_force_covers(oracle)


@settings(max_examples=100, deadline=None)
@given(contexts(max_g=7, max_m=7))
def test_cover_edges_are_a_transitive_reduction(ctx_pairs):
    lat = build_lattice(ctx_pairs[0])
    for lo, hi in lat.cover_edges:
        assert lat[lo].extent < lat[hi].extent
        assert not any(lat[lo].extent < c.extent < lat[hi].extent for c in lat.concepts)


def test_upper_neighborhood(root_lattice):
    lat = root_lattice
    first = upper_neighborhood(lat, lat.bottom, 1)
    assert {next(iter(lat[i].extent)) for i in first} == {"book[1]", "book[2]"}
    assert all(len(lat[i].extent) == 1 for i in first)
    assert upper_neighborhood(lat, lat.bottom, 2) == {lat.top}
    assert upper_neighborhood(lat, lat.bottom, 3) == set()
    assert upper_neighborhood(lat, lat.top, 0) == {lat.top}
    assert upper_neighborhood(lat, lat.top, 1) == set()


def test_upper_neighborhood_uses_shortest_distance():
    # chain a < b < c plus a shortcut a < d < c' ... built from a context where
    # the top is reachable in 2 steps along one side and 3 along the other
    ctx = FormalContext.from_pairs(
        ["g1", "g2", "g3"], ["x", "y", "z"],
        {("g1", "x"), ("g1", "y"), ("g2", "x"), ("g3", "z")})
    lat = build_lattice(ctx)
    levels = {}
    for k in range(5):
        for i in upper_neighborhood(lat, lat.bottom, k):
            levels[i] = k
    assert len(levels) == len(lat.concepts)
    assert levels[lat.top] == 2  # bottom -> ({g3},{z}) -> top


def test_upper_neighborhood_errors(root_lattice):
    with pytest.raises(InvalidConcept):
        upper_neighborhood(root_lattice, 99, 0)
    with pytest.raises(ValueError):
        upper_neighborhood(root_lattice, 0, -1)


def test_dot_export(root_lattice):
    dot = to_dot(root_lattice, BOOKS, ROOT_ATTRS, name="bib")
    assert dot.count("[label=") == 4
    assert dot.count("->") == 4
    assert '"book[0], book[1], book[2] | level, title, author[0], publisher"' in dot
    single = build_lattice(FormalContext((), (), ()))
    dot = to_dot(single)
    assert dot.count("[label=") == 1 and "->" not in dot
