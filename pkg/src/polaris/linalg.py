"""Dense linear algebra over the small fields in :mod:`polaris.gf`.

Matrices are numpy uint8 arrays of field elements.  Prime fields route
products through integer matmul + mod; extension fields go through the
field's operation tables.  Everything here runs on matrices of size at most a
few dozen, so the row-reduction loops are plain Python -- the performance
sensitive parts of the library (group closures, point-orbit kernels) never
call into this module per element.
"""

from __future__ import annotations

import numpy as np

from .gf import GF


def as_matrix(A) -> np.ndarray:
    M = np.asarray(A, dtype=np.uint8)
    assert M.ndim == 2
    return M


def identity(F: GF, n: int) -> np.ndarray:
    return np.eye(n, dtype=np.uint8)


def matmul(F: GF, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    if F.k == 1:
        return (A.astype(np.int64) @ B.astype(np.int64) % F.p).astype(np.uint8)
    prods = F.mul_table[A[:, :, None], B[None, :, :]]  # (m, r, n)
    acc = prods[:, 0, :]
    for t in range(1, prods.shape[1]):
        acc = F.add_table[acc, prods[:, t, :]]
    return acc


def matvec(F: GF, A: np.ndarray, v: np.ndarray) -> np.ndarray:
    return matmul(F, A, np.asarray(v, dtype=np.uint8).reshape(-1, 1))[:, 0]


def _bdet_prime(p: int, P: np.ndarray) -> np.ndarray:
    k = P.shape[1]
    if k == 1:
        return P[:, 0, 0] % p
    if k == 2:
        return (P[:, 0, 0] * P[:, 1, 1] - P[:, 0, 1] * P[:, 1, 0]) % p
    cols = list(range(k))
    acc = np.zeros(P.shape[0], dtype=np.int64)
    for j in range(k):
        minor = P[:, 1:, :][:, :, cols[:j] + cols[j + 1 :]]
        term = P[:, 0, j] * _bdet_prime(p, minor)
        acc += term if j % 2 == 0 else -term
    return acc % p


def _bdet_tables(F: GF, P: np.ndarray) -> np.ndarray:
    k = P.shape[1]
    if k == 1:
        return P[:, 0, 0]
    if k == 2:
        a = F.mul_table[P[:, 0, 0], P[:, 1, 1]]
        b = F.mul_table[P[:, 0, 1], P[:, 1, 0]]
        return F.add_table[a, F.neg_table[b]]
    cols = list(range(k))
    acc = np.zeros(P.shape[0], dtype=np.uint8)
    for j in range(k):
        minor = P[:, 1:, :][:, :, cols[:j] + cols[j + 1 :]]
        term = F.mul_table[P[:, 0, j], _bdet_tables(F, minor)]
        if j % 2 == 1:
            term = F.neg_table[term]
        acc = F.add_table[acc, term]
    return acc


def batched_det(F: GF, P: np.ndarray) -> np.ndarray:
    """Determinant of each (k, k) slice of a (B, k, k) stack, k <= 6.

    Cofactor expansion, fully vectorized over the batch axis; this is the
    inner loop of opposition-witness scans, where k is one more than the
    projective dimension under test.
    """
    assert P.ndim == 3 and P.shape[1] == P.shape[2]
    if P.shape[1] > 6:
        raise ValueError("batched determinants support size at most 6")
    if F.k == 1:
        return _bdet_prime(F.p, P.astype(np.int64)).astype(np.uint8)
    return _bdet_tables(F, np.asarray(P, dtype=np.uint8))


def mat_pow(F: GF, A: np.ndarray, e: int) -> np.ndarray:
    assert e >= 0
    acc = identity(F, A.shape[0])
    base = A
    while e:
        if e & 1:
            acc = matmul(F, acc, base)
        base = matmul(F, base, base)
        e >>= 1
    return acc


def scalar_mul(F: GF, c: int, A: np.ndarray) -> np.ndarray:
    return F.mul_table[c, A]


def mat_add(F: GF, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return F.add_table[A, B]


def mat_neg(F: GF, A: np.ndarray) -> np.ndarray:
    return F.neg_table[A]


def rref(F: GF, A: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns.  Zero rows are dropped."""
    M = [list(map(int, row)) for row in np.asarray(A, dtype=np.uint8)]
    nrows = len(M)
    ncols = len(M[0]) if nrows else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot_row = next((i for i in range(r, nrows) if M[i][c] != 0), None)
        if pivot_row is None:
            continue
        M[r], M[pivot_row] = M[pivot_row], M[r]
        inv = F.inv(M[r][c])
        M[r] = [F.mul(inv, x) for x in M[r]]
        for i in range(nrows):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    R = np.array([M[i] for i in range(r)], dtype=np.uint8).reshape(r, ncols)
    return R, pivots


def rank(F: GF, A: np.ndarray) -> int:
    return rref(F, A)[0].shape[0]


def det(F: GF, A: np.ndarray) -> int:
    M = [list(map(int, row)) for row in np.asarray(A, dtype=np.uint8)]
    n = len(M)
    assert n == 0 or n == len(M[0])
    acc = 1
    for c in range(n):
        pivot_row = None
        for i in range(c, n):
            if M[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            return 0
        if pivot_row != c:
            M[c], M[pivot_row] = M[pivot_row], M[c]
            acc = F.neg(acc)
        acc = F.mul(acc, M[c][c])
        inv = F.inv(M[c][c])
        for i in range(c + 1, n):
            if M[i][c] != 0:
                f = F.mul(inv, M[i][c])
                M[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(M[i], M[c])]
    return acc


def inverse(F: GF, A: np.ndarray) -> np.ndarray:
    n = A.shape[0]
    assert A.shape == (n, n)
    aug = np.concatenate([A, identity(F, n)], axis=1)
    R, pivots = rref(F, aug)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return R[:, n:].copy()


def kernel(F: GF, A: np.ndarray) -> np.ndarray:
    """Basis (rows) of the right null space {v : A v = 0}."""
    R, pivots = rref(F, A)
    ncols = A.shape[1]
    free = [c for c in range(ncols) if c not in pivots]
    basis = np.zeros((len(free), ncols), dtype=np.uint8)
    for bi, fc in enumerate(free):
        basis[bi, fc] = 1
        for ri, pc in enumerate(pivots):
            basis[bi, pc] = F.neg(int(R[ri, fc]))
    return basis


def eigenspace(F: GF, A: np.ndarray, lam: int) -> np.ndarray:
    """Basis (rows) of {v : A v = lam v}."""
    n = A.shape[0]
    shifted = mat_add(F, A, scalar_mul(F, F.neg(lam), identity(F, n)))
    return kernel(F, shifted)


def row_space_contains(F: GF, R: np.ndarray, pivots: list[int], v: np.ndarray) -> bool:
    """Membership test against an already-reduced basis (from rref)."""
    w = list(map(int, v))
    for ri, pc in enumerate(pivots):
        if w[pc] != 0:
            f = w[pc]
            w = [F.sub(x, F.mul(f, y)) for x, y in zip(w, R[ri])]
    return not any(w)


def intersect_row_spaces(F: GF, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Basis (rows, reduced) of rowspace(A) & rowspace(B)."""
    # Solutions (x, y) of x A - y B = 0 give intersection vectors x A.
    stacked = np.concatenate([A, mat_neg(F, B)], axis=0).T  # columns = rows of A, B
    ker = kernel(F, stacked)
    if ker.shape[0] == 0:
        return np.zeros((0, A.shape[1]), dtype=np.uint8)
    xs = ker[:, : A.shape[0]]
    vecs = matmul(F, xs, A)
    R, _ = rref(F, vecs)
    return R


def matrix_order(F: GF, A: np.ndarray, limit: int = 10**6) -> int:
    n = A.shape[0]
    I = identity(F, n)
    acc = np.array(A)
    for k in range(1, limit + 1):
        if np.array_equal(acc, I):
            return k
        acc = matmul(F, acc, A)
    raise ValueError(f"order exceeds {limit}")
