"""Semilinear maps, similitude detection, induced point permutations."""

import numpy as np
import pytest

from polaris.collineation import (
    Collineation,
    as_collineation,
    is_homology_pattern,
    point_permutation,
    similitude_factor,
)
from polaris.constructors import central_elation, homology_C
from polaris.gf import GF
from polaris.spaces import hermitian_space, parabolic_space, symplectic_space


def test_identity_and_scalar_similitude():
    sp = symplectic_space(2, GF(5))
    I = np.eye(4, dtype=np.uint8)
    assert similitude_factor(sp, I) == 1
    # scalar c: form scales by c^2
    A = sp.F.mul_table[2, I]
    assert similitude_factor(sp, A) == 4


def test_non_similitude_rejected():
    sp = parabolic_space(2, GF(3))
    A = np.eye(5, dtype=np.uint8)
    A[0, 1] = 1  # shear not preserving the quadric
    assert similitude_factor(sp, A) is None
    with pytest.raises(ValueError):
        point_permutation(sp, A)


def test_compose_apply_power():
    F = GF(3)
    sp = symplectic_space(2, F)
    a = Collineation(F, central_elation(sp))
    b = Collineation(F, homology_C(2, 1, F))
    v = np.array([1, 2, 0, 1], dtype=np.uint8)
    lhs = b.compose(a).apply(v)  # b after a
    rhs = b.apply(a.apply(v)[0])
    assert np.array_equal(lhs, rhs)
    sq = a.compose(a)
    assert np.array_equal(a.power(2).matrix, sq.matrix)
    assert a.power(0) == Collineation(F, np.eye(4, dtype=np.uint8))


def test_frobenius_composition_order():
    F = GF(4)
    sp = hermitian_space(2, F)
    frob = Collineation(F, np.eye(4, dtype=np.uint8), frob_exp=1)
    assert similitude_factor(sp, frob) == 1
    M = np.eye(4, dtype=np.uint8)
    M[0, 0] = 2  # entry that frobenius moves
    g = Collineation(F, M)
    v = np.zeros(4, dtype=np.uint8)
    v[0] = 2
    lhs = g.compose(frob).apply(v)
    rhs = g.apply(frob.apply(v)[0])
    assert np.array_equal(lhs, rhs)
    assert frob.compose(frob).is_linear  # squared frobenius of GF(4) is trivial


def test_point_permutation_central_elation():
    sp = symplectic_space(3, GF(2))
    perm = point_permutation(sp, central_elation(sp))
    assert sorted(perm) == list(range(63))
    fixed = int((perm == np.arange(63)).sum())
    assert fixed == 31  # the perp of the center: 1 + q(q^3-1)/(q-1) + ... = 31


def test_homology_pattern():
    F = GF(3)
    assert is_homology_pattern(F, homology_C(2, 1, F), 2, 2)
    assert not is_homology_pattern(F, central_elation(symplectic_space(2, F)), 2, 2)
    # scalar multiples of a homology still match
    M = F.mul_table[2, homology_C(2, 1, F)]
    assert is_homology_pattern(F, M, 2, 2)


def test_as_collineation_passthrough():
    F = GF(2)
    M = np.eye(4, dtype=np.uint8)
    c = as_collineation(F, M)
    assert isinstance(c, Collineation) and c.is_linear
    assert as_collineation(F, c) is c
