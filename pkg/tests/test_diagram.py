from hypothesis import given
from hypothesis import strategies as st

from compreach.diagram import DiagramStore

maps = st.integers(0, 4).flatmap(
    lambda n: st.tuples(
        st.just(n),
        st.dictionaries(st.integers(0, (1 << n) - 1), st.frozensets(st.integers(0, 5), max_size=3)),
    )
)


def test_from_map_and_lookup():
    s = DiagramStore(2)
    root = s.from_map({0b01: {1}, 0b11: {2, 3}})
    assert s.lookup(root, 0b01) == {1}
    assert s.lookup(root, 0b11) == {2, 3}
    assert s.lookup(root, 0b00) == frozenset()
    assert s.lookup(root, 0b10) == frozenset()


def test_hash_consing_gives_equal_nodes():
    s = DiagramStore(3)
    a = s.from_map({5: {1}, 2: {0}})
    b = s.from_map({2: {0}, 5: {1}})
    assert a == b
    assert s.from_map({}) == s.empty
    # a function that ignores a variable does not test it
    c = s.from_map({0: {1}, 1: {1}})
    assert s.var(c) != 0


def test_cube_leaves_free_variables_untested():
    s = DiagramStore(3)
    c = s.cube([(1, 1)], {7})
    assert {bits for bits in range(8) if s.lookup(c, bits)} == {2, 3, 6, 7}
    assert list(s.cubes(c)) == [(((1, 0),), frozenset()), (((1, 1),), frozenset({7}))]


def test_leaves_in_order_follows_least_label():
    s = DiagramStore(2)
    root = s.from_map({0: {9}, 1: {4}, 2: {4}, 3: {1}})
    assert s.leaves_in_order(root) == [{9}, {4}, {1}]


@given(maps)
def test_lookup_matches_dense_table(data):
    n, mapping = data
    s = DiagramStore(n)
    root = s.from_map(mapping)
    for bits in range(1 << n):
        assert s.lookup(root, bits) == mapping.get(bits, frozenset())


@given(maps, maps)
def test_union_is_pointwise(d1, d2):
    n = max(d1[0], d2[0])
    s = DiagramStore(n)
    a, b = s.from_map(d1[1]), s.from_map(d2[1])
    u = s.union(a, b)
    for bits in range(1 << n):
        assert s.lookup(u, bits) == d1[1].get(bits, frozenset()) | d2[1].get(bits, frozenset())
    assert s.union(b, a) == u
    assert s.union(u, a) == u


@given(maps)
def test_serialise_is_canonical_across_stores(data):
    n, mapping = data
    s1, s2 = DiagramStore(n), DiagramStore(n)
    s2.from_map({0: {42}})  # different allocation history
    r1, r2 = s1.from_map(mapping), s2.from_map(mapping)
    assert s1.serialise(r1) == s2.serialise(r2)
    copied = s2.transplant(s1, r1)
    assert copied == r2


@given(maps)
def test_cubes_cover_the_function(data):
    n, mapping = data
    s = DiagramStore(n)
    root = s.from_map(mapping)
    rebuilt = {}
    for assignment, value in s.cubes(root):
        fixed = dict(assignment)
        for bits in range(1 << n):
            if all((bits >> v & 1) == b for v, b in fixed.items()):
                assert bits not in rebuilt
                rebuilt[bits] = value
    assert rebuilt == {bits: mapping.get(bits, frozenset()) for bits in range(1 << n)}
