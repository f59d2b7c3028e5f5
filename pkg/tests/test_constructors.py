"""Explicit automorphisms: frozen matrices, validity checks, search
exhaustion."""

import numpy as np
import pytest

from polaris import linalg
from polaris.collineation import point_permutation, similitude_factor
from polaris.constructors import (
    SearchExhausted,
    baer_involution,
    central_elation,
    elliptic_ffi,
    generic_unipotent,
    hermitian_ffi,
    homology_B,
    homology_C,
    hyperbolic_ffi,
    is_central_elation,
    root_elation,
    space_for_family,
    symplectic_ffi,
    torus_element,
)
from polaris.diagrams import parse_symbol
from polaris.gf import GF
from polaris.spaces import (
    hermitian_space,
    hyperbolic_space,
    parabolic_space,
    symplectic_space,
)


# ---- root elations --------------------------------------------------------


def test_root_elations_preserve_forms():
    rng = np.random.default_rng(11)
    cases = [
        (symplectic_space(3, GF(3)), [(2, 0, 0), (1, 1, 0), (1, -1, 0), (0, -2, 0), (-1, -1, 0)]),
        (parabolic_space(3, GF(5)), [(1, 0, 0), (0, 0, -1), (1, 1, 0), (1, -1, 0), (-1, -1, 0)]),
        (hyperbolic_space(4, GF(2)), [(1, 1, 0, 0), (1, -1, 0, 0), (-1, -1, 0, 0)]),
    ]
    for sp, roots in cases:
        for vec in roots:
            for _ in range(3):
                a = int(rng.integers(1, sp.F.q))
                A = root_elation(sp, vec, a)
                assert similitude_factor(sp, A) == 1
                # unipotent: (A - 1)^2 interacts nilpotently
                N = linalg.mat_add(sp.F, A, linalg.scalar_mul(sp.F, sp.F.neg(1), linalg.identity(sp.F, sp.ambient_dim)))
                N3 = linalg.matmul(sp.F, linalg.matmul(sp.F, N, N), N)
                assert not N3.any()


def test_root_elation_rejects_foreign_roots():
    with pytest.raises(ValueError):
        root_elation(symplectic_space(2, GF(3)), (1, 0))  # short root, wrong family
    with pytest.raises(ValueError):
        root_elation(parabolic_space(2, GF(3)), (2, 0))
    with pytest.raises(ValueError):
        root_elation(hyperbolic_space(4, GF(2)), (1, 0, 0, 0))


def test_root_elation_parameter_additivity():
    sp = parabolic_space(2, GF(7))
    F = sp.F
    for vec in [(1, 0), (1, 1)]:
        for a in range(1, 7):
            for b in range(1, 7):
                lhs = linalg.matmul(F, root_elation(sp, vec, a), root_elation(sp, vec, b))
                rhs = root_elation(sp, vec, (a + b) % 7)
                assert np.array_equal(lhs, rhs), (vec, a, b)


def test_central_elation_frozen_symplectic():
    sp = symplectic_space(3, GF(3))
    A = central_elation(sp, 1)
    expected = np.eye(6, dtype=np.uint8)
    expected[3, 0] = 1  # row action of x_{2e_1}(1)
    assert np.array_equal(A, expected)


def test_is_central_elation():
    for q in (2, 3):
        sp = symplectic_space(3, GF(q))
        ok, center = is_central_elation(sp, central_elation(sp))
        assert ok and center is not None
    sp = symplectic_space(2, GF(3))
    assert is_central_elation(sp, homology_C(2, 1, GF(3)))[0] is False
    assert is_central_elation(sp, np.eye(4, dtype=np.uint8))[0] is False


# ---- unipotents from diagrams ---------------------------------------------


def test_generic_unipotent_frozen_matrices():
    F = GF(3)
    spC = symplectic_space(3, F)
    u1 = generic_unipotent(spC, parse_symbol("C3;1^1"))
    e1 = np.eye(6, dtype=np.uint8)
    e1[3, 0] = 1
    assert np.array_equal(u1, e1)
    u2 = generic_unipotent(spC, parse_symbol("C3;2^1"))
    e2 = np.eye(6, dtype=np.uint8)
    e2[3, 0] = 1
    e2[4, 1] = 1
    assert np.array_equal(u2, e2)


def test_generic_unipotent_commuting_roots():
    # the extraction roots are pairwise orthogonal: any coefficient order
    # gives the same element
    F = GF(2)
    spD = hyperbolic_space(4, F)
    d = parse_symbol("D4;4^1")
    u = generic_unipotent(spD, d)
    assert similitude_factor(spD, u) == 1
    from polaris.diagrams import extraction

    roots = [r.vector for r in extraction(d).roots]
    assert len(roots) == 4
    rev = np.eye(8, dtype=np.uint8)
    for vec in reversed(roots):
        rev = linalg.matmul(F, rev, root_elation(spD, vec, 1))
    assert np.array_equal(u, rev)


def test_generic_unipotent_rejects():
    F = GF(3)
    spC = symplectic_space(3, F)
    with pytest.raises(ValueError):
        generic_unipotent(spC, parse_symbol("C3;1^2"))  # not polar closed
    with pytest.raises(ValueError):
        generic_unipotent(spC, parse_symbol("B3;1^1"))  # wrong family
    with pytest.raises(ValueError):
        generic_unipotent(spC, parse_symbol("C3;2^1"), coefficients=[1])


# ---- homologies and torus -------------------------------------------------


def test_homology_frozen_diagonals():
    F3, F5 = GF(3), GF(5)
    assert np.array_equal(np.diag(homology_B(3, 1, F3)), [2, 1, 1, 1, 1, 1, 1])
    assert np.array_equal(np.diag(homology_B(3, 2, F3)), [1, 2, 1, 1, 2, 1, 1])
    assert np.array_equal(np.diag(homology_B(4, 2, F5)), [1, 4, 1, 1, 1, 4, 1, 1, 1])
    assert np.array_equal(np.diag(homology_C(3, 1, F3)), [2, 1, 1, 2, 1, 1])
    assert np.array_equal(np.diag(homology_C(3, 2, F3)), [2, 2, 1, 2, 2, 1])
    for M in (homology_B(4, 3, F3), homology_C(4, 2, F3)):
        assert np.array_equal(linalg.matmul(F3, M, M), np.eye(M.shape[0], dtype=np.uint8))


def test_homology_needs_odd_order():
    with pytest.raises(ValueError):
        homology_B(3, 1, GF(2))
    with pytest.raises(ValueError):
        homology_C(3, 1, GF(4))
    with pytest.raises(ValueError):
        homology_B(3, 3, GF(3))  # i < n required


def test_torus_element_frozen():
    sp = symplectic_space(3, GF(5))
    t = torus_element(sp, 2)
    assert np.array_equal(t, np.diag(np.array([2, 1, 1, 3, 1, 1], dtype=np.uint8)))
    # h(t) h(t^-1) = 1
    t_inv = torus_element(sp, 3)
    assert np.array_equal(linalg.matmul(sp.F, t, t_inv), np.eye(6, dtype=np.uint8))
    with pytest.raises(ValueError):
        torus_element(sp, 0)


# ---- fixed-point-free constructions ---------------------------------------


def test_symplectic_ffi_least_multiplier():
    F3 = GF(3)
    A = symplectic_ffi(2, F3)
    expected = np.zeros((4, 4), dtype=np.uint8)
    expected[0, 3] = 1
    expected[1, 2] = 2
    expected[2, 1] = 1
    expected[3, 0] = 2
    assert np.array_equal(A, expected)
    # square is the scalar -b = -1 = 2
    sq = linalg.matmul(F3, A, A)
    assert np.array_equal(sq, F3.mul_table[2, np.eye(4, dtype=np.uint8)])
    # GF(5): -1 and -4 are squares, least valid multiplier is 2
    A5 = symplectic_ffi(2, GF(5))
    assert A5[2, 1] == 2 and A5[3, 0] == 3


def test_symplectic_ffi_validation():
    with pytest.raises(ValueError):
        symplectic_ffi(3, GF(3))  # odd rank
    with pytest.raises(ValueError):
        symplectic_ffi(2, GF(4))  # even order
    with pytest.raises(ValueError):
        symplectic_ffi(2, GF(3), b=2)  # -2 = 1 is a square


def test_symplectic_ffi_rank2_fixes_a_line_spread():
    # no fixed point, but every point lies on a unique fixed line
    F = GF(3)
    sp = symplectic_space(2, F)
    A = symplectic_ffi(2, F)
    perm = point_permutation(sp, A)
    assert not (perm == np.arange(len(perm))).any()
    fixed_lines = []
    for idx, M in sp.singular_subspace_stream(1):
        img = linalg.matmul(F, M, A)
        R, _ = linalg.rref(F, img)
        S, _ = linalg.rref(F, M.copy())
        if np.array_equal(R, S):
            fixed_lines.append(idx)
    assert len(fixed_lines) == 10
    # 10 disjoint lines x 4 points cover all 40 points: a spread
    pts_on_fixed = set()
    for idx, M in sp.singular_subspace_stream(1):
        if idx in fixed_lines:
            combos = sp._projective_combos(2)
            vecs = linalg.matmul(F, combos, M)
            pts_on_fixed.update(sp.point_index(v) for v in vecs)
    assert len(pts_on_fixed) == 40


def test_hyperbolic_ffi_frozen_gf2():
    F = GF(2)
    A = hyperbolic_ffi(4, F)
    blockA = A[np.ix_([0, 1], [0, 1])]
    assert np.array_equal(blockA, np.array([[0, 1], [1, 1]], dtype=np.uint8))
    blockB = A[np.ix_([4, 5], [4, 5])]
    assert np.array_equal(blockB, np.array([[1, 1], [1, 0]], dtype=np.uint8))
    sp = hyperbolic_space(4, F)
    perm = point_permutation(sp, A)
    assert not (perm == np.arange(len(perm))).any()


def test_hyperbolic_ffi_rejects_reducible_pair():
    with pytest.raises(ValueError):
        hyperbolic_ffi(4, GF(3), pair=(0, 2))  # x^2 + 2 = (x-1)(x+1)
    with pytest.raises(ValueError):
        hyperbolic_ffi(5, GF(2))


def test_hermitian_ffi_exhausts_with_witnesses():
    F = GF(4)
    sp = hermitian_space(2, F)
    with pytest.raises(SearchExhausted) as ei:
        hermitian_ffi(2, F)
    report = ei.value.report
    assert len(report) == 3
    fixed_entries = [e for e in report if "fixed_singular_point" in e]
    assert [e["r"] for e in fixed_entries] == [1]
    v = np.array(fixed_entries[0]["fixed_singular_point"], dtype=np.uint8)
    assert sp.singular_mask(v.reshape(1, -1))[0]
    with pytest.raises(SearchExhausted) as ei9:
        hermitian_ffi(2, GF(9))
    assert sum("fixed_singular_point" in e for e in ei9.value.report) == 2


def test_baer_involution_fixed_points():
    F = GF(4)
    sp = hermitian_space(3, F)
    th = baer_involution(3, F)
    perm = point_permutation(sp, th)
    assert int((perm == np.arange(len(perm))).sum()) == 63
    with pytest.raises(ValueError):
        baer_involution(3, GF(3))


def test_elliptic_ffi_fixed_point_free():
    for q in (2, 3):
        F = GF(q)
        from polaris.spaces import elliptic_space

        sp = elliptic_space(2, F)
        A = elliptic_ffi(2, F)
        assert similitude_factor(sp, A) == 1
        perm = point_permutation(sp, A)
        assert not (perm == np.arange(len(perm))).any()
    with pytest.raises(ValueError):
        elliptic_ffi(3, GF(2))


def test_space_for_family():
    assert space_for_family("C", 3, GF(2)) == symplectic_space(3, GF(2))
    assert space_for_family("B", 2, GF(3)) == parabolic_space(2, GF(3))
    assert space_for_family("D", 4, GF(2)) == hyperbolic_space(4, GF(2))
    with pytest.raises(ValueError):
        space_for_family("A", 3, GF(2))
