"""Finite classical polar spaces in canonical coordinates.

Five kinds are supported, each of rank n over GF(q) (the field of definition
of the matrix group; for kind ``hermitian`` the field must carry a quadratic
subfield structure):

======================  ==========  =====================================
kind                    ambient     form
======================  ==========  =====================================
symplectic              2n          b(x,y) = sum_i (x_i y_{n+i} - x_{n+i} y_i)
parabolic               2n+1        Q(x) = x_0^2 + sum_i x_i x_{n+i}
hyperbolic              2n          Q(x) = sum_i x_i x_{n+i}
elliptic                2n+2        n hyperbolic pairs + an anisotropic plane
hermitian               2n          h(x,y) = sum_k conj(x_k) y_{2n-1-k}
======================  ==========  =====================================

Indices i run from 1 to n; for the parabolic kind coordinates are numbered
0..2n with the pairs (i, n+i), for the other even-dimensional kinds 0-based
pairs (i, n+i) with i < n.  The elliptic anisotropic part lives on the last
two coordinates, with Gram data from the canonical rootless quadratic
u^2 - t*uv + d*v^2 of the field.

Singular points are enumerated once, normalized (first nonzero coordinate 1)
and ordered by their base-q big-endian integer key; everything downstream
(witness reports, sweep censuses) inherits determinism from this order.

Singular subspaces of projective dimension d are streamed as reduced
row-echelon matrices, generated without deduplication: a candidate point p
extends an echelon basis X exactly when its pivot lies strictly right of
X's pivots, X vanishes on p's pivot column, and p is perpendicular to X.
Every singular subspace has a unique echelon basis and is produced exactly
once, from its unique maximal proper echelon prefix.

Opposition of two singular subspaces of equal projective dimension d is
decided by one (d+1)x(d+1) determinant: U and W are opposite iff no point
of U is collinear with all of W, i.e. iff  X G W^T  is invertible for basis
matrices X, W (G the collinearity Gram matrix, conjugated on the left for
the hermitian kind).  A direct comparison against the definition (trivial
intersection with the perp) is part of the test suite.
"""

from __future__ import annotations

import numpy as np

from . import linalg
from .gf import GF, irreducible_quadratic

KINDS = ("symplectic", "parabolic", "hyperbolic", "elliptic", "hermitian")

# diagram family each kind's building belongs to
FAMILY = {
    "symplectic": "C",
    "parabolic": "B",
    "hyperbolic": "D",
    "elliptic": "B",
    "hermitian": "B",
}

_POINT_CAP = 2_000_000


class PolarSpace:
    def __init__(self, kind: str, n: int, F: GF):
        if kind not in KINDS:
            raise ValueError(f"unknown polar space kind {kind!r}")
        min_rank = 4 if kind == "hyperbolic" else 2
        if n < min_rank:
            raise ValueError(f"{kind} spaces need rank >= {min_rank}, got {n}")
        if kind == "hermitian" and F.conj_table is None:
            raise ValueError("hermitian spaces need a field of square order")
        self.kind = kind
        self.n = n
        self.F = F
        self.family = FAMILY[kind]
        self._build_forms()
        self._cache: dict = {}

    # ---- forms -------------------------------------------------------------

    def _build_forms(self) -> None:
        F, n = self.F, self.n
        if self.kind == "symplectic":
            N = 2 * n
            G = np.zeros((N, N), dtype=np.uint8)
            for i in range(n):
                G[i, n + i] = 1
                G[n + i, i] = F.neg(1)
            self.gram = G
            self.quad = None
        elif self.kind == "parabolic":
            N = 2 * n + 1
            U = np.zeros((N, N), dtype=np.uint8)
            U[0, 0] = 1
            for i in range(1, n + 1):
                U[i, n + i] = 1
            self.quad = U
            self.gram = self._polarize(U)
        elif self.kind == "hyperbolic":
            N = 2 * n
            U = np.zeros((N, N), dtype=np.uint8)
            for i in range(n):
                U[i, n + i] = 1
            self.quad = U
            self.gram = self._polarize(U)
        elif self.kind == "elliptic":
            N = 2 * n + 2
            t, d = irreducible_quadratic(F)
            U = np.zeros((N, N), dtype=np.uint8)
            for i in range(n):
                U[i, n + 1 + i] = 1
            U[n, n] = 1
            U[n, 2 * n + 1] = F.neg(t)
            U[2 * n + 1, 2 * n + 1] = d
            self.quad = U
            self.gram = self._polarize(U)
            self.anisotropic_pair = (t, d)
        else:  # hermitian
            N = 2 * n
            G = np.zeros((N, N), dtype=np.uint8)
            for k in range(N):
                G[k, N - 1 - k] = 1
            self.gram = G
            self.quad = None
        self.ambient_dim = self.gram.shape[0]

    def _polarize(self, U: np.ndarray) -> np.ndarray:
        return self.F.add_table[U, U.T]

    @property
    def is_large(self) -> bool:
        """Thick, rank at least three, no minimal residues: here q >= 3, n >= 3."""
        return self.n >= 3 and self.F.q >= 3

    # ---- evaluation of the forms ------------------------------------------

    def quad_values(self, V: np.ndarray) -> np.ndarray:
        """Q(v) for each row of V (quadratic kinds only)."""
        F = self.F
        U = self.quad
        assert U is not None
        if F.k == 1:
            vals = np.einsum(
                "ij,jk,ik->i", V.astype(np.int64), U.astype(np.int64), V.astype(np.int64)
            )
            return (vals % F.p).astype(np.uint8)
        acc = np.zeros(V.shape[0], dtype=np.uint8)
        for i, j in zip(*np.nonzero(U)):
            term = F.mul_table[F.mul_table[U[i, j], V[:, i]], V[:, j]]
            acc = F.add_table[acc, term]
        return acc

    def herm_values(self, V: np.ndarray) -> np.ndarray:
        """h(v, v) for each row of V (hermitian kind)."""
        F = self.F
        N = self.ambient_dim
        Vc = F.conj_table[V]
        acc = np.zeros(V.shape[0], dtype=np.uint8)
        for k in range(N):
            acc = F.add_table[acc, F.mul_table[Vc[:, k], V[:, N - 1 - k]]]
        return acc

    def singular_mask(self, V: np.ndarray) -> np.ndarray:
        if self.kind == "symplectic":
            return np.ones(V.shape[0], dtype=bool)
        if self.kind == "hermitian":
            return self.herm_values(V) == 0
        return self.quad_values(V) == 0

    def collinearity_products(self, V: np.ndarray) -> np.ndarray:
        """Rows v -> the vector v* G used in collinearity tests.

        For the hermitian kind the left argument is conjugated, so
        collinear(v, w)  <=>  (v* G) . w = 0 holds for every kind.
        """
        F = self.F
        Vl = F.conj_table[V] if self.kind == "hermitian" else V
        if F.k == 1:
            return (Vl.astype(np.int64) @ self.gram.astype(np.int64) % F.p).astype(
                np.uint8
            )
        return linalg.matmul(F, Vl, self.gram)

    # ---- points ------------------------------------------------------------

    def _normalized_vectors_by_key(self) -> np.ndarray:
        """All normalized representatives, ordered by big-endian base-q key."""
        F, N = self.F, self.ambient_dim
        count = (F.q**N - 1) // (F.q - 1)
        if count > _POINT_CAP:
            raise ValueError(
                f"{self!r}: {count} projective points exceed the enumeration cap"
            )
        blocks = []
        for pivot in range(N - 1, -1, -1):
            tail = N - pivot - 1
            m = F.q**tail
            block = np.zeros((m, N), dtype=np.uint8)
            block[:, pivot] = 1
            if tail:
                codes = np.arange(m, dtype=np.int64)
                for j in range(tail):
                    block[:, pivot + 1 + j] = (codes // F.q ** (tail - 1 - j)) % F.q
            blocks.append(block)
        return np.concatenate(blocks, axis=0)

    def point_keys(self, V: np.ndarray) -> np.ndarray:
        N = self.ambient_dim
        weights = self.F.q ** np.arange(N - 1, -1, -1, dtype=np.int64)
        return V.astype(np.int64) @ weights

    @property
    def points(self) -> np.ndarray:
        """Singular points, normalized, in canonical order.  Shape (P, N)."""
        if "points" not in self._cache:
            allv = self._normalized_vectors_by_key()
            pts = allv[self.singular_mask(allv)]
            self._cache["points"] = pts
            self._cache["pg"] = self.collinearity_products(pts)
            self._cache["pivots"] = np.argmax(pts != 0, axis=1)
            keys = self.point_keys(pts)
            assert np.all(np.diff(keys) > 0)
            self._cache["point_keys"] = keys
            self._cache["key_index"] = {int(k): i for i, k in enumerate(keys)}
        return self._cache["points"]

    @property
    def num_points(self) -> int:
        return self.points.shape[0]

    def point_index(self, v: np.ndarray) -> int:
        """Index of the (not necessarily normalized) singular vector v."""
        self.points
        w = self.normalize_vector(np.asarray(v, dtype=np.uint8))
        key = int(self.point_keys(w.reshape(1, -1))[0])
        try:
            return self._cache["key_index"][key]
        except KeyError:
            raise ValueError(f"{v} is not a singular point of {self!r}") from None

    def normalize_vector(self, v: np.ndarray) -> np.ndarray:
        nz = np.nonzero(v)[0]
        if len(nz) == 0:
            raise ValueError("zero vector has no projective point")
        lead = int(v[nz[0]])
        return self.F.mul_table[self.F.inv_table[lead], v]

    def expected_point_count(self) -> int:
        q, n = self.F.q, self.n
        if self.kind == "symplectic":
            return (q ** (2 * n) - 1) // (q - 1)
        if self.kind == "parabolic":
            return (q ** (2 * n) - 1) // (q - 1)
        if self.kind == "hyperbolic":
            return (q ** (n - 1) + 1) * (q**n - 1) // (q - 1)
        if self.kind == "elliptic":
            return (q ** (n + 1) + 1) * (q**n - 1) // (q - 1)
        r = int(round(q**0.5))
        assert r * r == q
        return (r ** (2 * n) - 1) * (r ** (2 * n - 1) + 1) // (q - 1)

    # ---- singular subspace streaming --------------------------------------

    def _point_data(self):
        P = self.points
        return P, self._cache["pg"], self._cache["pivots"]

    def singular_subspace_stream(self, d: int):
        """Yield (index_tuple, matrix) for every singular subspace of
        projective dimension d, each exactly once, in lexicographic order of
        the index tuples.  Matrices are reduced row-echelon bases."""
        if not 0 <= d <= self.n - 1:
            raise ValueError(f"projective dimension {d} out of range")
        P, PG, piv = self._point_data()
        F = self.F
        npts = P.shape[0]

        def perp_mask(i: int) -> np.ndarray:
            if F.k == 1:
                prods = P.astype(np.int64) @ PG[i].astype(np.int64) % F.p
                return prods == 0
            acc = np.zeros(npts, dtype=np.uint8)
            for c in range(P.shape[1]):
                acc = F.add_table[acc, F.mul_table[P[:, c], PG[i, c]]]
            return acc == 0

        def rec(rows: list[int], mask: np.ndarray):
            if len(rows) == d + 1:
                yield tuple(rows), P[list(rows)]
                return
            for i in np.nonzero(mask)[0]:
                i = int(i)
                # reduced basis: the earlier rows must vanish at the new pivot
                if rows and (P[rows, piv[i]] != 0).any():
                    continue
                newmask = (
                    mask
                    & perp_mask(i)
                    & (piv > piv[i])
                    & (P[:, piv[i]] == 0)
                )
                yield from rec(rows + [i], newmask)

        yield from rec([], np.ones(npts, dtype=bool))

    def singular_subspaces(self, d: int) -> list[tuple[tuple[int, ...], np.ndarray]]:
        key = ("subspaces", d)
        if key not in self._cache:
            self._cache[key] = list(self.singular_subspace_stream(d))
        return self._cache[key]

    def count_singular_subspaces(self, d: int) -> int:
        return len(self.subspace_arrays(d)[0])

    def collinearity_matrix(self) -> np.ndarray:
        """(num_points, num_points) bool: row i marks the points whose
        pairing with point i vanishes (the perp of point i)."""
        if "colmat" not in self._cache:
            P, PG, _ = self._point_data()
            F = self.F
            if F.k == 1:
                prods = PG.astype(np.int64) @ P.astype(np.int64).T % F.p
                col = prods == 0
            else:
                npts = P.shape[0]
                acc = np.zeros((npts, npts), dtype=np.uint8)
                for c in range(P.shape[1]):
                    acc = F.add_table[
                        acc, F.mul_table[np.ix_(PG[:, c], P[:, c])]
                    ]
                col = acc == 0
            self._cache["colmat"] = col
        return self._cache["colmat"]

    def subspace_arrays(self, d: int) -> tuple[np.ndarray, np.ndarray]:
        """All singular subspaces of projective dimension d, stacked:
        (index tuples as an (S, d+1) int32 array, bases as (S, d+1, N)).

        Built one dimension at a time: a subspace's reduced basis rows have
        strictly ascending pivots, so each d-space extends exactly one
        (d-1)-space by the basis row with the largest pivot.  The extension
        conditions are evaluated as whole boolean planes against the cached
        collinearity matrix, which keeps the enumeration order identical to
        ``singular_subspace_stream`` (lexicographic in the index tuples).
        """
        key = ("subarr", d)
        if key in self._cache:
            return self._cache[key]
        if not 0 <= d <= self.n - 1:
            raise ValueError(f"projective dimension {d} out of range")
        P, _, piv = self._point_data()
        npts = P.shape[0]
        if d == 0:
            idx = np.arange(npts, dtype=np.int32)[:, None]
            out = (idx, P[:, None, :].copy())
            self._cache[key] = out
            return out
        pidx, _ = self.subspace_arrays(d - 1)
        if "extmask" not in self._cache:
            # row j is the bitset of points that may extend a basis holding
            # row j: perp to it, vanishing at its pivot, and with row j
            # vanishing at the candidate's pivot; the second mask adds the
            # ascending-pivot condition for the row with the largest pivot
            COL = self.collinearity_matrix()
            Z = P[:, piv] == 0
            M1 = COL & Z & Z.T
            M2 = M1 & (piv[None, :] > piv[:, None])
            self._cache["extmask"] = (
                np.packbits(M1, axis=1),
                np.packbits(M2, axis=1),
            )
        M1P, M2P = self._cache["extmask"]
        chunk_rows = max(1, (1 << 25) // max(npts, 1))
        parents: list[np.ndarray] = []
        points: list[np.ndarray] = []
        for lo in range(0, len(pidx), chunk_rows):
            chunk = pidx[lo : lo + chunk_rows]
            cand = M2P[chunk[:, -1]]
            for r in range(d - 1):
                cand = cand & M1P[chunk[:, r]]
            bits = np.unpackbits(cand, axis=1, count=npts)
            cs, ps = np.nonzero(bits)
            parents.append(cs.astype(np.int64) + lo)
            points.append(ps)
        par = np.concatenate(parents) if parents else np.zeros(0, np.int64)
        pts = np.concatenate(points) if points else np.zeros(0, np.int64)
        idx = np.concatenate(
            [pidx[par], pts[:, None].astype(np.int32)], axis=1
        )
        out = (idx, P[idx])
        self._cache[key] = out
        return out

    def point_indices_of_spans(self, bases: np.ndarray) -> np.ndarray:
        """For stacked bases (S, k, N): the indices of all points in each
        span, shape (S, number of points of PG(k-1, q))."""
        F = self.F
        S, k, N = bases.shape
        combos = self._projective_combos(k)
        if F.k == 1:
            pts = (
                np.einsum("ck,skn->scn", combos.astype(np.int64), bases.astype(np.int64))
                % F.p
            ).astype(np.uint8)
        else:
            pts = np.zeros((S, combos.shape[0], N), dtype=np.uint8)
            for j in range(k):
                pts = F.add_table[
                    pts, F.mul_table[combos[None, :, j, None], bases[:, None, j, :]]
                ]
        flat = pts.reshape(-1, N)
        lead = flat[np.arange(len(flat)), np.argmax(flat != 0, axis=1)]
        flat = F.mul_table[F.inv_table[lead][:, None], flat]
        keys = self.point_keys(flat)
        self.points
        allkeys = self._cache["point_keys"]
        pos = np.searchsorted(allkeys, keys)
        assert (allkeys[pos] == keys).all(), "span contained a non-singular point"
        return pos.reshape(S, combos.shape[0]).astype(np.int32)

    def line_point_table(self) -> np.ndarray:
        """(L, q+1) table: the point indices on each singular line, ordered
        by the line enumeration."""
        if "line_points" not in self._cache:
            _, bases = self.subspace_arrays(1)
            self._cache["line_points"] = self.point_indices_of_spans(bases)
        return self._cache["line_points"]

    def line_through_table(self) -> np.ndarray:
        """(P, P) int32 table: index of the singular line through two
        distinct collinear points, -1 elsewhere."""
        if "line_through" not in self._cache:
            T = np.full((self.num_points, self.num_points), -1, dtype=np.int32)
            LP = self.line_point_table()
            for li in range(LP.shape[0]):
                row = LP[li]
                T[np.ix_(row, row)] = li
            np.fill_diagonal(T, -1)
            self._cache["line_through"] = T
        return self._cache["line_through"]

    # ---- opposition --------------------------------------------------------

    def pairing_matrix(self, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        """The matrix of collinearity pairings between bases X and Y."""
        F = self.F
        Xl = F.conj_table[X] if self.kind == "hermitian" else X
        if F.k == 1:
            M = (
                Xl.astype(np.int64)
                @ self.gram.astype(np.int64)
                @ Y.astype(np.int64).T
            ) % F.p
            return M.astype(np.uint8)
        return linalg.matmul(F, linalg.matmul(F, Xl, self.gram), Y.T.copy())

    def opposite(self, X: np.ndarray, Y: np.ndarray) -> bool:
        """Are the singular subspaces spanned by X and Y opposite?

        Both must have the same projective dimension.  Equivalent to: no
        point of one is collinear with the whole of the other.
        """
        X = np.atleast_2d(X)
        Y = np.atleast_2d(Y)
        if X.shape[0] != Y.shape[0]:
            raise ValueError("opposition compares subspaces of equal dimension")
        return linalg.det(self.F, self.pairing_matrix(X, Y)) != 0

    def opposite_by_definition(self, X: np.ndarray, Y: np.ndarray) -> bool:
        """Literal form of the opposition test, for cross-validation."""
        F = self.F
        M = self.pairing_matrix(X, Y)
        # a point sum_c c_x X_x collinear with all of Y <=> c M = 0
        if linalg.kernel(F, M.T.copy()).shape[0] > 0:
            return False
        Mt = self.pairing_matrix(Y, X)
        return linalg.kernel(F, Mt.T.copy()).shape[0] == 0

    # ---- corank of a point set --------------------------------------------

    def corank_of_point_set(self, indices) -> tuple[int, np.ndarray | None]:
        """Least t such that every singular subspace of projective dimension
        t meets the given point set, together with a witness subspace of
        dimension t-1 avoiding the set (None when t = 0).

        Returns (n, witness_maximal) when even the maximal singular
        subspaces can avoid the set.
        """
        inset = np.zeros(self.num_points, dtype=bool)
        inset[list(indices)] = True
        witness = None
        chunk = 1 << 15
        for t in range(self.n):
            _, bases = self.subspace_arrays(t)
            found_avoider = None
            for lo in range(0, len(bases), chunk):
                B = bases[lo : lo + chunk]
                spans = self.point_indices_of_spans(B)
                meets = inset[spans].any(axis=1)
                free = np.nonzero(~meets)[0]
                if len(free):
                    found_avoider = B[free[0]]
                    break
            if found_avoider is None:
                return t, witness
            witness = found_avoider
        return self.n, witness

    def _projective_combos(self, m: int) -> np.ndarray:
        """Normalized coefficient vectors of length m: one per projective point."""
        key = ("combos", m)
        if key not in self._cache:
            F = self.F
            rows = []
            for pivot in range(m):
                tail = m - pivot - 1
                for code in range(F.q**tail):
                    v = [0] * pivot + [1]
                    c = code
                    digits = []
                    for _ in range(tail):
                        c, r = divmod(c, F.q)
                        digits.append(r)
                    v += list(reversed(digits))
                    rows.append(v)
            self._cache[key] = np.array(rows, dtype=np.uint8)
        return self._cache[key]

    # ---- hyperbolic maximal classes ----------------------------------------

    def maximal_class(self, X: np.ndarray, ref: np.ndarray | None = None) -> int:
        """Which of the two families a maximal of a hyperbolic space is in.

        Class 0 is the family of the reference maximal (by default the first
        one in canonical order); two maximals are in the same family iff the
        codimension of their intersection is even.
        """
        assert self.kind == "hyperbolic"
        if ref is None:
            ref = self.reference_maximal()
        inter = linalg.intersect_row_spaces(self.F, X, ref)
        return (self.n - inter.shape[0]) % 2

    def reference_maximal(self) -> np.ndarray:
        if "refmax" not in self._cache:
            _, X = next(self.singular_subspace_stream(self.n - 1))
            self._cache["refmax"] = X
        return self._cache["refmax"]

    def maximal_class_array(self) -> np.ndarray:
        """Class of every maximal, aligned with subspace_arrays(n-1)."""
        if "maxclass" not in self._cache:
            ref = self.reference_maximal()
            _, bases = self.subspace_arrays(self.n - 1)
            self._cache["maxclass"] = np.array(
                [self.maximal_class(X, ref) for X in bases], dtype=np.int8
            )
        return self._cache["maxclass"]

    # ---- misc ---------------------------------------------------------------

    def descriptor(self) -> dict:
        return {"kind": self.kind, "rank": self.n, "field": self.F.descriptor()}

    def __repr__(self) -> str:
        return f"PolarSpace({self.kind!r}, n={self.n}, F=GF({self.F.q}))"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PolarSpace)
            and self.kind == other.kind
            and self.n == other.n
            and self.F is other.F
        )

    def __hash__(self):
        return hash((self.kind, self.n, self.F.q))


_SPACE_CACHE: dict[tuple[str, int, int], PolarSpace] = {}


def _cached_space(kind: str, n: int, F: GF) -> PolarSpace:
    # one instance per (kind, rank, field), so that enumerated geometry
    # (points, subspace arrays, incidence tables) is shared by all users
    key = (kind, n, F.q)
    sp = _SPACE_CACHE.get(key)
    if sp is None:
        sp = _SPACE_CACHE.setdefault(key, PolarSpace(kind, n, F))
    return sp


def symplectic_space(n: int, F: GF) -> PolarSpace:
    return _cached_space("symplectic", n, F)


def parabolic_space(n: int, F: GF) -> PolarSpace:
    return _cached_space("parabolic", n, F)


def hyperbolic_space(n: int, F: GF) -> PolarSpace:
    return _cached_space("hyperbolic", n, F)


def elliptic_space(n: int, F: GF) -> PolarSpace:
    return _cached_space("elliptic", n, F)


def hermitian_space(n: int, F: GF) -> PolarSpace:
    return _cached_space("hermitian", n, F)
