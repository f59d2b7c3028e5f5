"""Explicit collineations: root elations, homologies, torus elements, and
the fixed-point-free involutions of point-domestic type.

All matrices act on row vectors (v -> v A), matching
:class:`polaris.collineation.Collineation`.  Every constructor validates its
output against the space's form before returning -- a matrix that fails to
be a collineation, or an involution that unexpectedly fixes a singular
point, raises ``ValueError`` rather than returning quietly.

Root elations use the standard matrix realizations of the one-parameter
root subgroups, written against the canonical coordinates of
:mod:`polaris.spaces`:

* symplectic (pairs (i, n+i), 0-based):
    x_{e_i-e_j}(a) = 1 + a(E_{ij} - E_{n+j,n+i})
    x_{e_i+e_j}(a) = 1 + a(E_{i,n+j} + E_{j,n+i})
    x_{2e_k}(a)    = 1 + a E_{k,n+k}
* parabolic (coordinate 0 plus pairs (i, n+i), 1-based):
    x_{e_i-e_j}(a) = 1 + a(E_{ij} - E_{n+j,n+i})
    x_{e_i+e_j}(a) = 1 + a(E_{i,n+j} - E_{j,n+i})
    x_{e_k}(a)     = 1 + 2a E_{k,0} - a E_{0,n+k} - a^2 E_{k,n+k}
* hyperbolic (pairs (i, n+i), 0-based): as parabolic without short roots.

Negative roots use the transposed patterns.  (The matrices above are
written for the column action; the functions below return their row-action
transposes.)
"""

from __future__ import annotations

import numpy as np

from . import linalg
from .collineation import Collineation, point_permutation, similitude_factor
from .diagrams import OppDiagram, extraction
from .gf import GF
from .spaces import (
    PolarSpace,
    elliptic_space,
    hermitian_space,
    hyperbolic_space,
    parabolic_space,
    symplectic_space,
)


class SearchExhausted(Exception):
    """A deterministic constructor search provably ran out of candidates.

    Carries a structured report: one entry per candidate with the witness
    that disqualified it.
    """

    def __init__(self, message: str, report: list[dict]):
        super().__init__(message)
        self.report = report


def space_for_family(family: str, n: int, F: GF) -> PolarSpace:
    """The canonical polar space whose building has the given diagram family."""
    if family == "C":
        return symplectic_space(n, F)
    if family == "B":
        return parabolic_space(n, F)
    if family == "D":
        return hyperbolic_space(n, F)
    raise ValueError(f"no canonical polar space of family {family!r}")


# --------------------------------------------------------------------------
# root elations
# --------------------------------------------------------------------------


def _col_matrix_for_root(space: PolarSpace, root, a: int) -> np.ndarray:
    F, n = space.F, space.n
    N = space.ambient_dim
    vec = tuple(int(x) for x in root)
    if len(vec) != n:
        raise ValueError(f"root vector of length {len(vec)} for rank {n}")
    M = np.eye(N, dtype=np.uint8)
    nz = [(k + 1, v) for k, v in enumerate(vec) if v]  # 1-based indices

    def put(r, c, val):
        M[r, c] = F.add(int(M[r, c]), val)

    if space.kind == "parabolic":
        off = 0  # coordinate i is literally index i, 1-based
        idx = lambda i: i
        fdx = lambda i: n + i
    else:
        idx = lambda i: i - 1
        fdx = lambda i: n + i - 1

    neg_a = F.neg(a)
    if len(nz) == 2 and {abs(v) for _, v in nz} == {1}:
        (i, vi), (j, vj) = nz
        if vi == 1 and vj == -1:  # e_i - e_j
            put(idx(i), idx(j), a)
            put(fdx(j), fdx(i), neg_a)
        elif vi == -1 and vj == 1:  # e_j - e_i
            put(idx(j), idx(i), a)
            put(fdx(i), fdx(j), neg_a)
        elif vi == 1 and vj == 1:  # e_i + e_j
            if space.kind == "symplectic":
                put(idx(i), fdx(j), a)
                put(idx(j), fdx(i), a)
            else:
                put(idx(i), fdx(j), a)
                put(idx(j), fdx(i), neg_a)
        else:  # -(e_i + e_j)
            if space.kind == "symplectic":
                put(fdx(j), idx(i), a)
                put(fdx(i), idx(j), a)
            else:
                put(fdx(j), idx(i), a)
                put(fdx(i), idx(j), neg_a)
    elif len(nz) == 1 and abs(nz[0][1]) == 2:
        if space.kind != "symplectic":
            raise ValueError(f"root {vec} does not belong to {space.kind} spaces")
        k, v = nz[0]
        if v == 2:
            put(idx(k), fdx(k), a)
        else:
            put(fdx(k), idx(k), a)
    elif len(nz) == 1 and abs(nz[0][1]) == 1:
        if space.kind != "parabolic":
            raise ValueError(f"root {vec} does not belong to {space.kind} spaces")
        k, v = nz[0]
        two_a = F.add(a, a)
        asq = F.mul(a, a)
        if v == 1:
            put(idx(k), 0, two_a)
            put(0, fdx(k), neg_a)
            put(idx(k), fdx(k), F.neg(asq))
        else:
            put(fdx(k), 0, two_a)
            put(0, idx(k), neg_a)
            put(fdx(k), idx(k), F.neg(asq))
    else:
        raise ValueError(f"{vec} is not a root for {space.kind} spaces")
    return M


def root_elation(space: PolarSpace, root, a: int = 1) -> np.ndarray:
    """The root elation x_root(a) as a row-action matrix."""
    if space.kind not in ("symplectic", "parabolic", "hyperbolic"):
        raise ValueError(f"no root elations implemented for {space.kind} spaces")
    if a == 0:
        return np.eye(space.ambient_dim, dtype=np.uint8)
    M = _col_matrix_for_root(space, root, a % space.F.q)
    A = M.T.copy()
    assert similitude_factor(space, A) == 1, (root, a)
    return A


def generic_unipotent(space: PolarSpace, diagram: OppDiagram, coefficients=None):
    """The product of root elations attached to a polar-closed diagram.

    With default (all-one) coefficients this is the generic element of the
    unipotent family whose opposition diagram the given one is.
    """
    from .roots import RootSystem  # local: avoid import cycle at module load

    if diagram.family != space.family or diagram.n != space.n:
        raise ValueError(
            f"diagram {diagram} does not live on the building of {space!r}"
        )
    res = extraction(diagram)
    if not res.closed:
        raise ValueError(f"{diagram} is not polar closed: no unipotent realizes it")
    roots = [r.vector for r in res.roots]
    if coefficients is None:
        coefficients = [1] * len(roots)
    if len(coefficients) != len(roots) or any(c == 0 for c in coefficients):
        raise ValueError("need one nonzero coefficient per extraction root")
    A = np.eye(space.ambient_dim, dtype=np.uint8)
    for vec, c in zip(roots, coefficients):
        A = linalg.matmul(space.F, A, root_elation(space, vec, c))
    return A


def central_elation(space: PolarSpace, a: int = 1) -> np.ndarray:
    """The elation of the highest root: for symplectic spaces the standard
    point-central elation."""
    from .roots import RootSystem

    rs = RootSystem(space.family, space.n)
    return root_elation(space, rs.highest_root.vector, a)


def is_central_elation(space: PolarSpace, theta) -> tuple[bool, int | None]:
    """Is theta a nontrivial collineation fixing the perp of a point
    pointwise?  Returns (answer, index of a center)."""
    perm = point_permutation(space, theta)
    fixed = perm == np.arange(len(perm))
    if fixed.all():
        return False, None
    P = space.points
    F = space.F
    PG = space.collinearity_products(P)
    if F.k == 1:
        prods = PG.astype(np.int64) @ P.astype(np.int64).T % F.p
        coll = prods == 0
    else:
        coll = np.zeros((len(P), len(P)), dtype=np.uint8)
        for c in range(P.shape[1]):
            coll = F.add_table[coll, F.mul_table[PG[:, c][:, None], P[:, c][None, :]]]
        coll = coll == 0
    # a center must have its whole perp (which contains it) fixed
    bad = coll & ~fixed[None, :]
    centers = np.nonzero(fixed & ~bad.any(axis=1))[0]
    if len(centers) == 0:
        return False, None
    return True, int(centers[0])


# --------------------------------------------------------------------------
# homologies and torus elements
# --------------------------------------------------------------------------


def homology_B(n: int, i: int, F: GF) -> np.ndarray:
    """Diagonal involution of the parabolic space with eigenvalue pattern
    splitting the quadric: plus-eigenspace of codimension i."""
    if F.q % 2 == 0:
        raise ValueError("diagonal involutions need odd field order")
    if not 1 <= i < n:
        raise ValueError(f"need 1 <= i < n, got i={i}, n={n}")
    half = i // 2
    eps = 1 if i % 2 == 0 else F.neg(1)
    diag = [eps] + [F.neg(1)] * half + [1] * (n - half)
    diag += [F.neg(1)] * half + [1] * (n - half)
    A = np.diag(np.array(diag, dtype=np.uint8))
    space = parabolic_space(n, F)
    assert similitude_factor(space, A) == 1
    return A


def homology_C(n: int, i: int, F: GF) -> np.ndarray:
    """Diagonal involution of the symplectic space whose two eigenspaces
    are totally isotropic-paired: minus-eigenspace built from i pairs."""
    if F.q % 2 == 0:
        raise ValueError("diagonal involutions need odd field order")
    if not 1 <= i < n:
        raise ValueError(f"need 1 <= i < n, got i={i}, n={n}")
    diag = [F.neg(1)] * i + [1] * (n - i)
    diag = diag + diag
    A = np.diag(np.array(diag, dtype=np.uint8))
    space = symplectic_space(n, F)
    assert similitude_factor(space, A) == 1
    return A


def torus_element(space: PolarSpace, t: int, root=None) -> np.ndarray:
    """h_root(t), built from the standard six-elation word
    w(t) w(1)^{-1} with w(t) = x(t) x_-(-1/t) x(t)."""
    from .roots import RootSystem

    F = space.F
    if t == 0:
        raise ValueError("torus parameter must be a unit")
    if root is None:
        root = RootSystem(space.family, space.n).highest_root.vector
    neg = tuple(-x for x in root)
    tinv = F.inv(t)
    word = [
        (root, t),
        (neg, F.neg(tinv)),
        (root, t),
        (root, F.neg(1)),
        (neg, 1),
        (root, F.neg(1)),
    ]
    A = np.eye(space.ambient_dim, dtype=np.uint8)
    # rightmost factor of the written product acts first; with the row
    # convention that means multiplying in reversed order
    for vec, c in reversed(word):
        A = linalg.matmul(F, A, root_elation(space, vec, c))
    assert similitude_factor(space, A) == 1
    return A


# --------------------------------------------------------------------------
# fixed-point-free involutions (point-domestic families)
# --------------------------------------------------------------------------


def _has_fixed_singular_point(space: PolarSpace, theta) -> bool:
    th = theta if isinstance(theta, Collineation) else Collineation(space.F, theta)
    F = space.F
    if th.is_linear:
        for lam in range(1, F.q):
            basis = linalg.eigenspace(F, th.matrix.T.copy(), lam)
            if basis.shape[0] == 0:
                continue
            combos = space._projective_combos(basis.shape[0])
            vecs = linalg.matmul(F, combos, basis)
            if space.singular_mask(vecs).any():
                return True
        return False
    perm = point_permutation(space, th)
    return bool((perm == np.arange(len(perm))).any())


def symplectic_ffi(n: int, F: GF, b: int | None = None) -> np.ndarray:
    """Fixed-point-free involution-like element of a symplectic space of
    even rank: pairs of hyperbolic pairs are rotated with multiplier b,
    the square being the scalar -b.

    A projective fixed point exists precisely when -b is a square, so valid
    parameters are those with -b a nonsquare; the default is the least one.
    """
    if n % 2 != 0:
        raise ValueError("even rank required")
    if F.q % 2 == 0:
        raise ValueError(
            "no such element over fields of even order: every scalar is a square"
        )
    space = symplectic_space(n, F)

    def build(bb: int) -> np.ndarray:
        A = np.zeros((2 * n, 2 * n), dtype=np.uint8)
        for k in range(n // 2):
            ea, eb = 2 * k, 2 * k + 1
            fa, fb = n + ea, n + eb
            A[ea, fb] = 1                  # eps_a -> f_b
            A[fa, eb] = bb                 # f_a   -> b eps_b
            A[eb, fa] = F.neg(1)           # eps_b -> -f_a
            A[fb, ea] = F.neg(bb)          # f_b   -> -b eps_a
        return A

    candidates = [b] if b is not None else list(range(1, F.q))
    report = []
    for bb in candidates:
        if bb == 0:
            raise ValueError("b must be a unit")
        A = build(bb)
        assert similitude_factor(space, A) is not None
        sq = linalg.mat_pow(F, A, 2)
        assert np.array_equal(sq, F.mul_table[F.neg(bb), np.eye(2 * n, dtype=np.uint8)])
        if F.is_square(F.neg(bb)):
            report.append({"b": bb, "reason": "-b is a square: fixed point exists"})
            continue
        assert not _has_fixed_singular_point(space, A)
        return A
    if b is not None:
        raise ValueError(
            f"b={b}: -b is a square in GF({F.q}), the element fixes a point"
        )
    raise SearchExhausted("no valid multiplier found", report)


def hyperbolic_ffi(n: int, F: GF, pair: tuple[int, int] | None = None) -> np.ndarray:
    """Fixed-point-free collineation of a hyperbolic space of even rank.

    Built from 2x2 companion-style blocks of a rootless quadratic
    x^2 - t x + d: the blocks act on pairs of the totally singular
    coordinate frame, scaling the form by d.  Having no eigenvalue in the
    field, the matrix fixes no projective point at all; every point is
    mapped to a collinear one, so the element is point-domestic.
    """
    if n % 2 != 0:
        raise ValueError("even rank required")
    from .gf import irreducible_quadratic

    t, d = pair if pair is not None else irreducible_quadratic(F)
    for x in range(F.q):
        if F.add(F.sub(F.mul(x, x), F.mul(t, x)), d) == 0:
            raise ValueError(f"x^2 - {t}x + {d} has the root {x}: not rootless")
    space = hyperbolic_space(n, F)
    A = np.zeros((2 * n, 2 * n), dtype=np.uint8)
    for k in range(n // 2):
        ea, eb = 2 * k, 2 * k + 1
        fa, fb = n + ea, n + eb
        # eps_a -> eps_b ; eps_b -> -d eps_a + t eps_b
        A[ea, eb] = 1
        A[eb, ea] = F.neg(d)
        A[eb, eb] = t
        # f_a -> t f_a + d f_b ; f_b -> -f_a
        A[fa, fa] = t
        A[fa, fb] = d
        A[fb, fa] = F.neg(1)
    assert similitude_factor(space, A) == d
    assert not _has_fixed_singular_point(space, A)
    return A


def hermitian_ffi(n: int, F: GF):
    """Search for a fixed-point-free semilinear pairing flip of a hermitian
    space.  Candidates rotate consecutive coordinate pairs by
    [[0, 1], [-r, 0]] composed with conjugation.

    Over a finite field the relative norm onto the fixed subfield is
    surjective, so for every multiplier r some vector supported on a single
    coordinate pair -- automatically singular, its pairing partners lying
    outside the support -- is projectively fixed.  The search therefore
    always exhausts; it raises ``SearchExhausted`` carrying one witness per
    candidate.
    """
    if F.conj_table is None:
        raise ValueError("hermitian constructions need a field of square order")
    space = hermitian_space(n, F)
    N = 2 * n
    report = []
    for r in range(1, F.q):
        A = np.zeros((N, N), dtype=np.uint8)
        for k in range(n):
            a, b2 = 2 * k, 2 * k + 1
            # column action [[0,1],[-r,0]] on the pair, row action transposed
            A[a, b2] = F.neg(r)
            A[b2, a] = 1
        th = Collineation(F, A, frob_exp=F.k // 2)
        if similitude_factor(space, th) is None:
            # the flip scales the two slots of the form by r and conj(r):
            # a similitude forces r into the fixed subfield
            assert F.conj(r) != r
            report.append(
                {"r": r, "reason": "not a similitude: conj(r) != r"}
            )
            continue
        target = F.neg(r)
        witness = None
        for y in range(F.q):
            if F.mul(F.conj(y), y) == target:
                witness = np.zeros(N, dtype=np.uint8)
                witness[0], witness[1] = 1, y
                break
        assert witness is not None, "relative norm failed to be surjective"
        img = th.apply(witness)[0]
        assert space.point_index(img) == space.point_index(witness)
        report.append(
            {
                "r": r,
                "fixed_singular_point": [int(x) for x in witness],
                "reason": "norm equation conj(y)*y = -r is solvable",
            }
        )
    raise SearchExhausted(
        "every multiplier either breaks the form or fixes a singular point: "
        "the relative norm of a quadratic extension of finite fields maps "
        "onto the fixed subfield",
        report,
    )


def baer_involution(n: int, F: GF) -> Collineation:
    """The coordinatewise subfield involution of a hermitian space."""
    if F.conj_table is None or F.k % 2 != 0:
        raise ValueError("need a field of square order")
    return Collineation(F, np.eye(2 * n, dtype=np.uint8), frob_exp=F.k // 2)


def elliptic_ffi(n: int, F: GF) -> np.ndarray:
    """Fixed-point-free collineation of an elliptic space of even rank
    (experimental construction).

    Companion blocks of a rootless monic quadratic with constant term 1 act
    on pairs of singular frame coordinates (scaling the form by exactly 1),
    and a norm-one rotation of the anisotropic plane closes the matrix up
    to an isometry.  No eigenvalue exists on the singular frame; on the
    plane eigenvectors may exist but are never singular.
    """
    if n % 2 != 0:
        raise ValueError("even rank required")
    space = elliptic_space(n, F)
    t, d = space.anisotropic_pair
    # least t' with x^2 - t'x + 1 rootless
    tp = None
    for cand in range(F.q):
        if all(
            F.add(F.sub(F.mul(x, x), F.mul(cand, x)), 1) != 0 for x in range(F.q)
        ):
            tp = cand
            break
    assert tp is not None
    N = space.ambient_dim
    A = np.zeros((N, N), dtype=np.uint8)
    for k in range(n // 2):
        ea, eb = 2 * k, 2 * k + 1
        fa, fb = n + 1 + ea, n + 1 + eb
        A[ea, eb] = 1
        A[eb, ea] = F.neg(1)
        A[eb, eb] = tp
        A[fa, fa] = tp
        A[fa, fb] = 1
        A[fb, fa] = F.neg(1)
    # norm-one rotation of the anisotropic plane: a^2 - t a b + d b^2 = 1, b != 0
    found = None
    for a in range(F.q):
        for b2 in range(1, F.q):
            val = F.add(F.sub(F.mul(a, a), F.mul(F.mul(t, a), b2)), F.mul(d, F.mul(b2, b2)))
            if val == 1:
                found = (a, b2)
                break
        if found:
            break
    assert found is not None, "norm-one circle is never trivial"
    a, b2 = found
    u, v = n, 2 * n + 1
    A[u, u] = a
    A[u, v] = b2
    A[v, u] = F.neg(F.mul(b2, d))
    A[v, v] = F.sub(a, F.mul(b2, t))
    assert similitude_factor(space, A) == 1
    assert not _has_fixed_singular_point(space, A)
    return A
