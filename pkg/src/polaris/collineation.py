"""Collineations of a polar space: a matrix together with a field twist.

A collineation acts on row vectors as  v  ->  frob^e(v) @ A,  where frob is
the absolute Frobenius x -> x^p of the field.  Linear collineations have
e = 0; the Baer involutions and the semilinear searches use e > 0.

``similitude_factor`` decides whether such a pair is a collineation of a
given polar space at all: the defining form must be preserved up to a
nonzero constant and the field twist, which for the Gram matrix G reads

    A G A^T = c * frob^e(G)          (bilinear kinds)
    conj(A) G A^T = c * frob^e(G)    (hermitian kind)

with, for the quadratic kinds, the additional condition on the quadratic
values of the rows of A.  The factor c is returned, or None if the form is
not preserved.
"""

from __future__ import annotations

import numpy as np

from . import linalg
from .gf import GF
from .spaces import PolarSpace


class Collineation:
    def __init__(self, F: GF, matrix: np.ndarray, frob_exp: int = 0):
        self.F = F
        self.matrix = np.asarray(matrix, dtype=np.uint8)
        assert self.matrix.ndim == 2 and self.matrix.shape[0] == self.matrix.shape[1]
        self.frob_exp = frob_exp % max(F.k, 1)

    @property
    def is_linear(self) -> bool:
        return self.frob_exp == 0

    def twist(self, V: np.ndarray) -> np.ndarray:
        out = np.asarray(V, dtype=np.uint8)
        for _ in range(self.frob_exp):
            out = self.F.frob_table[out]
        return out

    def apply(self, V: np.ndarray) -> np.ndarray:
        """Image of each row vector of V."""
        V = np.atleast_2d(np.asarray(V, dtype=np.uint8))
        return linalg.matmul(self.F, self.twist(V), self.matrix)

    def compose(self, other: "Collineation") -> "Collineation":
        """self . other : first other, then self (as maps on points)."""
        assert self.F is other.F
        # v -> frob^eo(v) Ao -> frob^es(frob^eo(v) Ao) As
        A = linalg.matmul(self.F, self.twist(other.matrix), self.matrix)
        return Collineation(self.F, A, self.frob_exp + other.frob_exp)

    def power(self, e: int) -> "Collineation":
        assert e >= 0
        out = Collineation(self.F, np.eye(self.matrix.shape[0], dtype=np.uint8))
        for _ in range(e):
            out = self.compose(out)
        return out

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Collineation)
            and self.F is other.F
            and self.frob_exp == other.frob_exp
            and np.array_equal(self.matrix, other.matrix)
        )

    def __repr__(self) -> str:
        tag = f", frob^{self.frob_exp}" if self.frob_exp else ""
        return f"<Collineation {self.matrix.shape[0]}x{self.matrix.shape[1]}{tag}>"


def as_collineation(F: GF, theta) -> Collineation:
    if isinstance(theta, Collineation):
        return theta
    return Collineation(F, np.asarray(theta, dtype=np.uint8))


def similitude_factor(space: PolarSpace, theta) -> int | None:
    """The constant by which a collineation scales the defining form,
    or None when the form is not preserved at all."""
    th = as_collineation(space.F, theta)
    F = space.F
    A = th.matrix
    G = space.gram
    twistG = G
    for _ in range(th.frob_exp):
        twistG = F.frob_table[twistG]
    left = F.conj_table[A] if space.kind == "hermitian" else A
    got = linalg.matmul(F, linalg.matmul(F, left, G), A.T.copy())
    nz = np.nonzero(twistG)
    if len(nz[0]) == 0:
        return None
    i0, j0 = int(nz[0][0]), int(nz[1][0])
    if got[i0, j0] == 0:
        return None
    c = F.div(int(got[i0, j0]), int(twistG[i0, j0]))
    if not np.array_equal(got, F.mul_table[c, twistG]):
        return None
    if space.quad is not None:
        # quadratic values of basis images must also scale by c
        qvals = space.quad_values(A)
        diag = np.diagonal(space.quad).copy()
        for _ in range(th.frob_exp):
            diag = F.frob_table[diag]
        if not np.array_equal(qvals, F.mul_table[c, diag]):
            return None
    return c


def point_permutation(space: PolarSpace, theta) -> np.ndarray:
    """The permutation a collineation induces on the canonical point list."""
    th = as_collineation(space.F, theta)
    if similitude_factor(space, th) is None:
        raise ValueError("not a collineation of this space: form not preserved")
    P = space.points
    images = th.apply(P)
    return index_rows(space, images)


def index_rows(space: PolarSpace, V: np.ndarray) -> np.ndarray:
    """Indices of the singular points given by the rows of V (vectorized)."""
    F = space.F
    lead = V[np.arange(V.shape[0]), np.argmax(V != 0, axis=1)]
    normed = F.mul_table[F.inv_table[lead][:, None], V]
    keys = space.point_keys(normed)
    allkeys = space.point_keys(space.points)
    pos = np.searchsorted(allkeys, keys)
    ok = (pos < len(allkeys)) & (allkeys[np.clip(pos, 0, len(allkeys) - 1)] == keys)
    if not ok.all():
        raise ValueError("some image vectors are not singular points")
    return pos


def is_homology_pattern(F: GF, M: np.ndarray, a: int, b: int) -> bool:
    """Does M (up to a scalar) have exactly two eigenspaces, of dimensions
    a and b with a + b the full dimension?"""
    n = M.shape[0]
    assert a + b == n
    for s in range(1, F.q):
        Ms = F.mul_table[s, M]
        dims = []
        for lam in range(1, F.q):
            d = linalg.eigenspace(F, Ms, lam).shape[0]
            if d:
                dims.append(d)
        if sorted(dims) == sorted([a, b]):
            return True
    return False
