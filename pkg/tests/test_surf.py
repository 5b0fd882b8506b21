from __future__ import annotations

import itertools

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cobalt import combinat
from cobalt.surf import (
    ClosedSurfaceClass,
    CrossinglessMatching,
    DecoratedSurface,
    closed_euler_characteristic,
    degree,
    enumerate_Am,
    enumerate_crossingless,
    enumerate_matchings,
    enumerate_spanning,
    euler_characteristic,
    euler_characteristic_graph,
    glue,
    is_noncrossing,
    matching_from_partition,
    meander_circles,
    meander_h1h2,
    partition_from_matching,
    set_partitions,
    sort_canonical,
)

# ----------------------------------------------------------------- counting


@pytest.mark.parametrize(
    "K,counts",
    [(1, [1, 1, 2, 5, 15, 52]), (2, [1, 2, 6, 22, 94, 454]), (3, [1, 3, 12, 57, 309])],
)
def test_spanning_counts(K, counts):
    assert [len(enumerate_spanning(n, K)) for n in range(len(counts))] == counts


@pytest.mark.parametrize(
    "m,counts",
    [(1, [1, 2, 5, 14, 43, 142, 499, 1850]), (2, [1, 3, 11, 46]), (3, [1, 4, 19])],
)
def test_Am_counts(m, counts):
    assert [len(enumerate_Am(n, m)) for n in range(len(counts))] == counts


def test_Am_membership_rule():
    for s in enumerate_Am(4, 2):
        assert all(g + len(b) <= 3 for b, g in zip(s.blocks, s.genus))


@pytest.mark.parametrize("n", range(1, 9))
def test_crossingless_counts_and_noncrossing(n):
    surfaces = enumerate_crossingless(n)
    assert len(surfaces) == combinat.catalan(n)
    assert all(is_noncrossing(s.blocks) for s in surfaces)
    assert len(enumerate_matchings(n)) == combinat.catalan(n)


def test_is_noncrossing():
    assert is_noncrossing([(1, 4), (2, 3)])
    assert not is_noncrossing([(1, 3), (2, 4)])


def test_enumeration_is_canonical_and_unique():
    spans = enumerate_spanning(4, 2)
    assert len(set(spans)) == len(spans)
    assert sort_canonical(reversed(spans)) == spans
    # partitions in descending restricted-growth order, genus labels ascending
    assert set_partitions(3) == [((1,), (2,), (3,)), ((1,), (2, 3)), ((1, 3), (2,)), ((1, 2), (3,)), ((1, 2, 3),)]
    assert [str(s) for s in enumerate_spanning(2, 2)] == [
        "{1:g0}{2:g0}", "{1:g0}{2:g1}", "{1:g1}{2:g0}", "{1:g1}{2:g1}", "{1,2:g0}", "{1,2:g1}",
    ]


# ------------------------------------------------------------------ literals


def test_parse_and_print():
    s = DecoratedSurface.parse("{1,4,6:g2}{2,3:g0}{5:g1}")
    assert s.n == 6 and s.genus == (2, 0, 1)
    assert str(s) == "{1,4,6:g2}{2,3:g0}{5:g1}"
    assert DecoratedSurface.parse("{2,3}{1}") == DecoratedSurface.parse("{1:g0}{2,3:g0}")
    assert DecoratedSurface.parse("{}").n == 0


@pytest.mark.parametrize("text", ["{1,2}{2}", "{1,3}", "{1:gx}", "1,2"])
def test_parse_rejects_bad_literals(text):
    with pytest.raises(ValueError):
        DecoratedSurface.parse(text)


@given(st.integers(1, 5).flatmap(lambda n: st.sampled_from(enumerate_spanning(n, 3))))
def test_literal_round_trip(s):
    assert DecoratedSurface.parse(str(s)) == s
    assert DecoratedSurface.from_rgs(s.rgs(), s.genus) == s


def test_crossing_matching_rejected():
    with pytest.raises(ValueError):
        CrossinglessMatching(2, ((1, 3), (2, 4)))


# --------------------------------------------------------------- bijection


@pytest.mark.parametrize("n", range(1, 8))
def test_matching_partition_bijection(n):
    surfaces = enumerate_crossingless(n)
    matchings = {matching_from_partition(s) for s in surfaces}
    assert len(matchings) == len(surfaces)
    assert matchings == set(enumerate_matchings(n))
    for s in surfaces:
        assert partition_from_matching(matching_from_partition(s)) == s


# ------------------------------------------------------------------ gluing


def _glue_oracle(a: DecoratedSurface, b: DecoratedSurface) -> list[int]:
    """Glued genera via networkx: one graph per side, circles as edges."""
    G = nx.MultiGraph()
    G.add_nodes_from([("a", i) for i in range(len(a.blocks))] + [("b", j) for j in range(len(b.blocks))])
    for c in range(a.n):
        G.add_edge(("a", a.labels[c]), ("b", b.labels[c]))
    out = []
    for comp in nx.connected_components(G):
        H = G.subgraph(comp)
        loops = H.number_of_edges() - H.number_of_nodes() + 1
        out.append(loops + sum(a.genus[i] if side == "a" else b.genus[i] for side, i in comp))
    return sorted(out)


def test_glue_examples():
    disks = DecoratedSurface.parse("{1}{2}{3}")
    assert glue(disks, disks) == ClosedSurfaceClass((0, 0, 0))
    y = DecoratedSurface.parse("{1,2,3}")
    assert glue(y, y) == ClosedSurfaceClass((2,))
    assert glue(DecoratedSurface.parse("{1:g1}"), DecoratedSurface.parse("{1:g2}")) == ClosedSurfaceClass((3,))


def test_glue_mismatched_sizes():
    with pytest.raises(ValueError):
        glue(DecoratedSurface.parse("{1}"), DecoratedSurface.parse("{1,2}"))


@pytest.mark.parametrize("n,K", [(1, 3), (2, 3), (3, 3), (4, 2)])
def test_glue_matches_oracle_and_euler(n, K):
    surfaces = enumerate_spanning(n, K)
    for a, b in itertools.product(surfaces, repeat=2):
        c = glue(a, b)
        assert list(c.component_genera) == _glue_oracle(a, b)
        assert c == glue(b, a)
        # circles have Euler characteristic 0, so chi is additive under gluing
        assert closed_euler_characteristic(c) == euler_characteristic(a) + euler_characteristic(b)


@given(st.integers(1, 6).flatmap(lambda n: st.sampled_from(enumerate_spanning(n, 3))), st.permutations(range(1, 7)))
def test_glue_invariant_under_relabelling(s, perm):
    p = [x for x in perm if x <= s.n]
    t = s.permuted(p)
    assert glue(s, s) == glue(t, t)


# ------------------------------------------------------------------ Euler


@given(st.integers(1, 6).flatmap(lambda n: st.sampled_from(enumerate_spanning(n, 3))))
def test_euler_two_routes(s):
    assert euler_characteristic(s) == euler_characteristic_graph(s)
    assert degree(s) == s.n - euler_characteristic(s)


def test_degree_examples():
    assert degree(DecoratedSurface.parse("{1}{2}{3}")) == 0
    assert degree(DecoratedSurface.parse("{1,2,3,4}")) == 6
    assert degree(DecoratedSurface.parse("{1:g1}")) == 2


@pytest.mark.parametrize("n", range(1, 7))
def test_crossingless_degrees_even(n):
    assert all(degree(s) % 2 == 0 and degree(s) >= 0 for s in enumerate_crossingless(n))


# ----------------------------------------------------------------- meanders


def test_meander_adjacent_pairs():
    for n in range(1, 6):
        a = CrossinglessMatching(n, tuple((2 * i - 1, 2 * i) for i in range(1, n + 1)))
        assert meander_h1h2(a, a) == (1, n)


def test_meander_two_arcs_make_one_circle():
    a = CrossinglessMatching(2, ((1, 2), (3, 4)))
    b = CrossinglessMatching(2, ((1, 4), (2, 3)))
    assert len(meander_circles(a, b)) == 1
    assert meander_h1h2(a, b) == (1, 1)


def test_meander_nested_circles():
    a = CrossinglessMatching(2, ((1, 4), (2, 3)))
    assert meander_h1h2(a, a) == (2, 1)


def test_meander_mismatched_sizes():
    with pytest.raises(ValueError):
        meander_h1h2(CrossinglessMatching(1, ((1, 2),)), CrossinglessMatching(2, ((1, 2), (3, 4))))


@pytest.mark.parametrize("n", range(1, 6))
def test_meander_region_count_and_genus(n):
    surfaces = enumerate_crossingless(n)
    for a, b in itertools.product(surfaces, repeat=2):
        ma, mb = matching_from_partition(a), matching_from_partition(b)
        h1, h2 = meander_h1h2(ma, mb)
        assert h1 + h2 == len(meander_circles(ma, mb)) + 1
        c = glue(a, b)
        assert (h1 == 1) == all(g == 0 for g in c.component_genera)
        if h1 == 1:
            assert c.components() == h2
