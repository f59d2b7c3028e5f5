"""Opposition-diagram catalog, symbol grammar, polar closedness."""

import random

import pytest

from polaris.diagrams import (
    OppDiagram,
    catalog,
    empty_diagram,
    extraction,
    identity_perm,
    match_catalog,
    parse_symbol,
)

ALL_TYPES = [("A", n) for n in range(2, 9)] + [
    ("B", n) for n in range(2, 9)
] + [("C", n) for n in range(2, 9)] + [("D", n) for n in range(4, 9)]


def closed_oracle(d: OppDiagram) -> bool:
    """Independent closed-form answer for polar closedness."""
    if d.out_of_engine:
        return False
    if d.family == "A":
        return d.j == 1 and d.t == 2          # the flip-orbit shapes, any i
    if d.family == "B":
        return d.j == 2 or d.i % 2 == 0 or d.i == d.n
    if d.family == "C":
        return d.j == 1
    # D: every even-i first-shape diagram and every second-shape diagram
    return d.j == 2 or d.i % 2 == 0


def test_catalog_B3():
    syms = sorted(str(d) for d in catalog("B", 3))
    assert syms == sorted(["B3;0^1", "B3;1^1", "B3;2^1", "B3;3^1", "B3;1^2"])


def test_catalog_C2():
    syms = sorted(str(d) for d in catalog("C", 2))
    assert syms == sorted(["C2;0^1", "C2;1^1", "C2;2^1", "C2;1^2", "2C2;1^1"])
    flip = [d for d in catalog("C", 2) if d.t == 2]
    assert len(flip) == 1 and flip[0].out_of_engine
    assert flip[0].orbits == frozenset({frozenset({1, 2})})


def test_catalog_D4():
    syms = sorted(str(d) for d in catalog("D", 4))
    assert syms == sorted(
        [
            "D4;0^1", "D4;2^1", "D4;4^1", "2D4;1^1", "2D4;3^1",
            "D4;1^2", "D4;2^2", "3D4;1^2", "3D4;2^1",
        ]
    )
    tri = [d for d in catalog("D", 4) if d.t == 3]
    assert {str(d) for d in tri} == {"3D4;1^2", "3D4;2^1"}
    assert all(d.out_of_engine for d in tri)


def test_catalog_D7_example():
    (d,) = [x for x in catalog("D", 7) if str(x) == "2D7;2^2"]
    assert d.nodes == frozenset({2, 4})
    assert d.sigma == (1, 2, 3, 4, 5, 7, 6)
    assert d.is_type_preserving


def test_fork_extreme_shapes():
    (d,) = [x for x in catalog("D", 6) if str(x) == "D6;3^2"]
    assert d.nodes == frozenset({2, 4, 6})
    (d,) = [x for x in catalog("D", 7) if str(x) == "2D7;3^2"]
    assert d.nodes == frozenset({2, 4, 6, 7})
    assert frozenset({6, 7}) in d.orbits
    (d,) = [x for x in catalog("D", 5) if str(x) == "2D5;4^1"]
    assert d.nodes == frozenset({1, 2, 3, 4, 5})
    assert frozenset({4, 5}) in d.orbits
    assert d.is_type_preserving
    (d,) = [x for x in catalog("D", 5) if str(x) == "D5;5^1"]
    assert not d.is_type_preserving   # its type map swaps the fork


def test_single_empty_diagram_per_type():
    for fam, n in ALL_TYPES:
        empties = [d for d in catalog(fam, n) if d.is_empty]
        assert len(empties) == 1
        assert empty_diagram(fam, n) == empties[0]


def test_symbols_unique_and_parseable():
    for fam, n in ALL_TYPES:
        entries = catalog(fam, n)
        syms = [str(d) for d in entries]
        assert len(set(syms)) == len(syms)
        keys = [(d.orbits, d.sigma) for d in entries]
        assert len(set(keys)) == len(keys)
        for d in entries:
            assert parse_symbol(str(d)) == d
            assert match_catalog(fam, n, d.orbits, d.sigma) == d


def test_parse_twist_inference():
    assert parse_symbol("B2;1^1").t == 1
    assert parse_symbol("2B2;1^1").t == 2
    assert parse_symbol("D4;2^1").t == 1
    assert parse_symbol("3D4;2^1").t == 3
    assert parse_symbol("A4;2^1").t == 2     # only the flip shape has i=2
    with pytest.raises(ValueError):
        parse_symbol("C3;5^1")
    with pytest.raises(ValueError):
        parse_symbol("E6;1^1")
    with pytest.raises(ValueError):
        parse_symbol("B3-1")
    with pytest.raises(ValueError):
        parse_symbol("2B3;1^1")   # no twisted B shape above rank 2


def test_type_preserving_sets():
    tp = {str(d) for d in catalog("D", 5) if d.is_type_preserving}
    assert tp == {"2D5;0^1", "2D5;2^1", "2D5;4^1", "2D5;1^2", "2D5;2^2"}
    tp = {str(d) for d in catalog("D", 4) if d.is_type_preserving}
    assert tp == {"D4;0^1", "D4;2^1", "D4;4^1", "D4;1^2", "D4;2^2"}
    assert all(
        d.is_type_preserving for d in catalog("B", 4) + catalog("C", 4) if d.t == 1
    )


def test_rank_bounds():
    with pytest.raises(ValueError):
        catalog("D", 3)
    with pytest.raises(ValueError):
        catalog("E", 6)


def test_polar_closed_matches_oracle():
    for fam, n in ALL_TYPES:
        for d in catalog(fam, n):
            assert d.is_polar_closed() == closed_oracle(d), str(d)


def test_polar_closed_key_examples():
    assert parse_symbol("B5;4^1").is_polar_closed()
    assert not parse_symbol("B5;3^1").is_polar_closed()
    assert parse_symbol("B5;5^1").is_polar_closed()
    assert parse_symbol("C4;3^1").is_polar_closed()
    assert not parse_symbol("C4;2^2").is_polar_closed()
    assert not parse_symbol("A5;5^1").is_polar_closed()
    assert parse_symbol("2A6;3^1").is_polar_closed()
    assert not parse_symbol("A5;2^2").is_polar_closed()
    assert parse_symbol("D4;4^1").is_polar_closed()
    assert not parse_symbol("D5;5^1").is_polar_closed()    # odd-rank full shape
    assert parse_symbol("2D5;4^1").is_polar_closed()
    assert not parse_symbol("2D4;3^1").is_polar_closed()
    assert parse_symbol("D6;3^2").is_polar_closed()
    assert parse_symbol("2D7;3^2").is_polar_closed()
    assert not parse_symbol("2B2;1^1").is_polar_closed()
    assert not parse_symbol("3D4;1^2").is_polar_closed()
    assert not parse_symbol("3D4;2^1").is_polar_closed()


def test_extraction_root_sets():
    def vecs(sym):
        return {r.vector for r in extraction(parse_symbol(sym)).roots}

    assert vecs("B5;4^1") == {
        (1, 1, 0, 0, 0), (1, -1, 0, 0, 0), (0, 0, 1, 1, 0), (0, 0, 1, -1, 0),
    }
    assert vecs("B3;3^1") == {(1, 1, 0), (1, -1, 0), (0, 0, 1)}
    assert vecs("C3;2^1") == {(2, 0, 0), (0, 2, 0)}
    assert vecs("C4;4^1") == {(2, 0, 0, 0), (0, 2, 0, 0), (0, 0, 2, 0), (0, 0, 0, 2)}
    assert vecs("B4;2^2") == {(1, 1, 0, 0), (0, 0, 1, 1)}
    assert vecs("D4;2^2") == {(1, 1, 0, 0), (0, 0, 1, 1)}
    assert vecs("D4;4^1") == {
        (1, 1, 0, 0), (1, -1, 0, 0), (0, 0, 1, 1), (0, 0, 1, -1),
    }
    assert vecs("2D5;4^1") == {
        (1, 1, 0, 0, 0), (1, -1, 0, 0, 0), (0, 0, 1, 1, 0), (0, 0, 1, -1, 0),
    }
    assert vecs("2A4;2^1") == {(1, 0, 0, 0, -1), (0, 1, 0, -1, 0)}
    assert vecs("C2;1^1") == {(2, 0)}
    assert vecs("B3;0^1") == set()


def test_extraction_order_independence():
    rng = random.Random(42)
    for fam, n in (("B", 4), ("B", 5), ("C", 4), ("D", 4), ("D", 5), ("D", 6), ("A", 5)):
        for d in catalog(fam, n):
            base = extraction(d)
            baseset = {r.vector for r in base.roots}
            for _ in range(8):
                order = list(range(1, n + 1))
                rng.shuffle(order)
                alt = extraction(d, order=order * 3)
                assert alt.closed == base.closed, str(d)
                assert {r.vector for r in alt.roots} == baseset, str(d)


def test_empty_diagram_is_closed_with_no_roots():
    for fam, n in ALL_TYPES:
        res = extraction(empty_diagram(fam, n))
        assert res.closed and res.roots == []


def test_pi_sigma_consistency():
    for fam, n in ALL_TYPES:
        for d in catalog(fam, n):
            # sigma is pi_0 . pi by definition; t is the order of sigma
            order = 1
            cur = d.sigma
            while cur != identity_perm(n):
                cur = tuple(d.sigma[c - 1] for c in cur)
                order += 1
            assert order == d.t, str(d)
            # encircled set is sigma-stable
            assert {d.sigma[v - 1] for v in d.nodes} == set(d.nodes)
