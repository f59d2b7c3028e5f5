"""Geometry of the canonical polar spaces: point counts, subspace streams,
opposition, corank, maximal families."""

import numpy as np
import pytest

from polaris.gf import GF
from polaris.spaces import (
    elliptic_space,
    hermitian_space,
    hyperbolic_space,
    parabolic_space,
    symplectic_space,
)


def gauss_binomial(n, k, q):
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (k - i) - 1
    assert num % den == 0
    return num // den


def test_point_counts_frozen():
    assert len(symplectic_space(2, GF(2)).points) == 15
    assert len(symplectic_space(2, GF(3)).points) == 40
    assert len(symplectic_space(3, GF(2)).points) == 63
    assert len(symplectic_space(4, GF(3)).points) == 3280
    assert len(parabolic_space(3, GF(3)).points) == 364
    assert len(parabolic_space(4, GF(3)).points) == 3280
    assert len(hyperbolic_space(4, GF(2)).points) == 135
    assert len(hermitian_space(2, GF(4)).points) == 45
    assert len(hermitian_space(3, GF(4)).points) == 693
    assert len(elliptic_space(2, GF(3)).points) == 112


def test_point_counts_match_formula():
    spaces = [
        symplectic_space(2, GF(4)),
        symplectic_space(3, GF(3)),
        parabolic_space(2, GF(5)),
        hyperbolic_space(4, GF(3)),
        hermitian_space(2, GF(9)),
        elliptic_space(2, GF(2)),
    ]
    for sp in spaces:
        assert len(sp.points) == sp.expected_point_count(), sp.descriptor()


def test_points_are_normalized_and_sorted():
    sp = parabolic_space(2, GF(3))
    P = sp.points
    keys = sp.point_keys(P)
    assert (np.diff(keys) > 0).all()
    for v in P:
        nz = np.nonzero(v)[0]
        assert v[nz[0]] == 1  # leading coefficient one


def test_point_index_ignores_scaling():
    sp = symplectic_space(2, GF(5))
    rng = np.random.default_rng(7)
    for _ in range(20):
        i = int(rng.integers(len(sp.points)))
        s = int(rng.integers(1, 5))
        v = sp.F.mul_table[s, sp.points[i]]
        assert sp.point_index(v) == i


def test_subspace_counts_symplectic():
    q = 2
    sp = symplectic_space(3, GF(q))
    # totally isotropic subspaces of vector dimension k:
    #   gauss_binomial(n, k, q) * prod_{i=n-k+1}^{n} (q^i + 1)
    expected = []
    for k in (1, 2, 3):
        e = gauss_binomial(3, k, q)
        for i in range(3 - k + 1, 4):
            e *= q**i + 1
        expected.append(e)
    assert expected == [63, 315, 135]
    assert [sp.count_singular_subspaces(d) for d in (0, 1, 2)] == expected


def test_subspace_counts_small():
    w32 = symplectic_space(2, GF(2))
    assert w32.count_singular_subspaces(0) == 15
    assert w32.count_singular_subspaces(1) == 15
    w33 = symplectic_space(2, GF(3))
    assert w33.count_singular_subspaces(0) == 40
    assert w33.count_singular_subspaces(1) == 40
    h34 = hermitian_space(2, GF(4))
    assert h34.count_singular_subspaces(1) == 27
    d42 = hyperbolic_space(4, GF(2))
    assert d42.count_singular_subspaces(3) == 270
    e23 = elliptic_space(2, GF(3))
    # lines of the rank-2 elliptic space: (q^3+1)(q^2+1)
    assert e23.count_singular_subspaces(1) == 280


def test_stream_yields_unique_rref_singular():
    sp = parabolic_space(3, GF(2))
    seen = set()
    for d in (0, 1, 2):
        for idx, M in sp.singular_subspace_stream(d):
            assert idx not in seen
            seen.add(idx)
            assert M.shape == (d + 1, sp.ambient_dim)
            # reduced row echelon: ascending pivots, unit leading entries
            pivots = [int(np.nonzero(r)[0][0]) for r in M]
            assert pivots == sorted(pivots)
            for r, p in zip(M, pivots):
                assert r[p] == 1
            # every vector in the span is singular: pairwise products vanish
            PG = sp.collinearity_products(M)
            for a in range(d + 1):
                for b in range(d + 1):
                    acc = 0
                    for c in range(sp.ambient_dim):
                        acc = sp.F.add(acc, sp.F.mul(int(PG[a, c]), int(M[b, c])))
                    assert acc == 0
            assert sp.singular_mask(M).all()


def test_opposite_matches_definition_exhaustive():
    sp = symplectic_space(2, GF(3))
    pts = sp.points
    lines = [M for _, M in sp.singular_subspace_stream(1)]
    assert len(lines) == 40
    for i in range(len(pts)):
        for j in range(len(pts)):
            X, Y = pts[i : i + 1], pts[j : j + 1]
            assert sp.opposite(X, Y) == sp.opposite_by_definition(X, Y)
    for L in lines[::4]:
        for M in lines:
            assert sp.opposite(L, M) == sp.opposite_by_definition(L, M)


def test_opposite_point_counts():
    sp = symplectic_space(3, GF(2))
    pts = sp.points
    p = pts[0:1]
    opp = sum(sp.opposite(p, pts[j : j + 1]) for j in range(len(pts)))
    assert opp == 32  # q^(2n-1)


def test_opposite_needs_matching_dimension():
    sp = symplectic_space(2, GF(2))
    pt = sp.points[0:1]
    line = next(sp.singular_subspace_stream(1))[1]
    with pytest.raises(ValueError):
        sp.opposite(pt, line)


def test_corank_of_perp_is_one():
    sp = symplectic_space(3, GF(2))
    pts = sp.points
    PG = sp.collinearity_products(pts[0:1])
    prods = PG.astype(np.int64) @ pts.astype(np.int64).T % 2
    perp = set(np.nonzero(prods[0] == 0)[0])
    t, witness = sp.corank_of_point_set(perp)
    assert t == 1
    assert witness is not None and sp.opposite(pts[0:1], witness)


def test_corank_extremes():
    sp = symplectic_space(2, GF(2))
    t, w = sp.corank_of_point_set(range(len(sp.points)))
    assert t == 0 and w is None
    t, w = sp.corank_of_point_set([])
    assert t == sp.n and w is not None


def test_maximal_classes_balanced():
    sp = hyperbolic_space(4, GF(2))
    classes = [sp.maximal_class(M) for _, M in sp.singular_subspace_stream(3)]
    assert classes[0] == 0
    assert classes.count(0) == 135 and classes.count(1) == 135


def test_maximal_class_flips_on_codim_one():
    sp = hyperbolic_space(4, GF(2))
    stream = sp.singular_subspace_stream(3)
    _, ref = next(stream)
    from polaris import linalg

    for _, M in stream:
        inter = linalg.intersect_row_spaces(sp.F, ref, M)
        codim = 4 - inter.shape[0]
        assert (sp.maximal_class(M) == 0) == (codim % 2 == 0)


def test_constructor_validation():
    with pytest.raises(ValueError):
        hyperbolic_space(3, GF(2))  # rank at least 4
    with pytest.raises(ValueError):
        hermitian_space(2, GF(3))  # needs square order
    with pytest.raises(ValueError):
        symplectic_space(1, GF(2))  # rank at least 2


def test_elliptic_plane_is_anisotropic():
    sp = elliptic_space(2, GF(5))
    t, d = sp.anisotropic_pair
    F = sp.F
    for u in range(5):
        for v in range(5):
            if (u, v) != (0, 0):
                val = F.add(F.sub(F.mul(u, u), F.mul(t, F.mul(u, v))), F.mul(d, F.mul(v, v)))
                assert val != 0


def test_descriptor_and_identity():
    a = symplectic_space(2, GF(3))
    b = symplectic_space(2, GF(3))
    c = parabolic_space(2, GF(3))
    assert a == b and hash(a) == hash(b)
    assert a != c
    d = a.descriptor()
    assert d["kind"] == "symplectic" and d["rank"] == 2 and d["field"]["q"] == 3


def test_is_large():
    assert symplectic_space(3, GF(3)).is_large
    assert not symplectic_space(2, GF(3)).is_large
    assert not symplectic_space(3, GF(2)).is_large


def test_subspace_arrays_match_stream():
    # the batched ladder must reproduce the reference stream exactly,
    # including order (lexicographic in the index tuples)
    for sp in [
        symplectic_space(3, GF(2)),
        parabolic_space(3, GF(3)),
        hermitian_space(2, GF(9)),
        hyperbolic_space(4, GF(2)),
    ]:
        for d in range(sp.n):
            idx, bases = sp.subspace_arrays(d)
            ref = list(sp.singular_subspace_stream(d))
            assert len(ref) == len(idx)
            for k in (0, len(ref) // 2, len(ref) - 1):
                assert tuple(idx[k]) == ref[k][0]
                assert np.array_equal(bases[k], ref[k][1])


def test_collinearity_matrix_symmetry():
    sp = symplectic_space(2, GF(3))
    col = sp.collinearity_matrix()
    assert col.shape == (40, 40)
    assert np.array_equal(col, col.T)  # the symplectic form is reflexive
    assert col.diagonal().all()  # every point is self-perpendicular
