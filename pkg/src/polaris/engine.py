"""Opposition diagrams of collineations, computed on the geometry.

Given a collineation theta of a polar space of rank n, the engine decides
for each node of the ambient diagram whether theta maps some simplex of
that type to an opposite simplex, collects the encircled sigma-orbits, and
matches them against the admissible catalog of :mod:`polaris.diagrams`.

Node k of families B and C corresponds to singular subspaces of projective
dimension k-1.  Hyperbolic spaces follow the oriflamme convention: nodes
1..n-2 to dimensions 0..n-3, nodes n-1 and n to the two families of
maximals, and subspaces of projective dimension n-2 carry no node at all.
theta induces a permutation pi of the diagram (possibly exchanging the two
fork nodes); sigma = pi0 . pi, where pi0 is the opposition involution.

A node scan streams the subspaces of the matching dimension: seeded random
probes first (fast exit when a witness exists), then an exhaustive chunked
pass whose silence certifies domesticity.  Opposition of a subspace and its
image is one batched determinant of the pairing matrix per candidate.

When sigma exchanges the fork nodes, the orbit {n-1, n} names a single
simplex type -- incident pairs of maximals {M, M'} -- and is tested as
such: the pair goes to an opposite simplex iff theta(M) is disjoint from M'
and theta(M') is disjoint from M.  Per-class vertex tests would always fail
in that situation, since disjointness of maximals constrains their classes
by the parity of n.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .collineation import Collineation, as_collineation, point_permutation, similitude_factor
from .diagrams import (
    OppDiagram,
    Perm,
    compose,
    identity_perm,
    match_catalog,
    pi0,
)
from .gf import GF
from .spaces import PolarSpace

_CHUNK = 1 << 15


# --------------------------------------------------------------------------
# batched primitives
# --------------------------------------------------------------------------


def _frob_bases(F: GF, X: np.ndarray, e: int) -> np.ndarray:
    for _ in range(e % F.k):
        X = F.frob_table[X]
    return X


def _image_bases(F: GF, bases: np.ndarray, A: np.ndarray, e: int) -> np.ndarray:
    X = _frob_bases(F, bases, e)
    S, k, N = X.shape
    flat = linalg.matmul(F, X.reshape(S * k, N), A)
    return flat.reshape(S, k, A.shape[1])


def _pairings(space: PolarSpace, B: np.ndarray, I: np.ndarray) -> np.ndarray:
    """P[s] = B[s]* G I[s]^T for stacked bases, shape (S, k, k)."""
    F = space.F
    left = F.conj_table[B] if space.kind == "hermitian" else B
    G = space.gram
    if F.k == 1:
        LG = left.astype(np.int64) @ G.astype(np.int64) % F.p
        return np.einsum("skn,sjn->skj", LG, I.astype(np.int64)) % F.p
    S, k, N = B.shape
    LG = np.zeros((S, k, N), dtype=np.uint8)
    for c in range(N):
        row = G[c]
        nz = np.nonzero(row)[0]
        if len(nz) == 0:
            continue
        LG[:, :, nz] = F.add_table[
            LG[:, :, nz], F.mul_table[left[:, :, c, None], row[nz][None, None, :]]
        ]
    P = np.zeros((S, k, k), dtype=np.uint8)
    for c in range(N):
        P = F.add_table[P, F.mul_table[LG[:, :, c][:, :, None], I[:, :, c][:, None, :]]]
    return P


def _opposite_flags(space: PolarSpace, B: np.ndarray, I: np.ndarray) -> np.ndarray:
    return linalg.batched_det(space.F, _pairings(space, B, I)) != 0


def _scan_rows(space, bases, A, e, rows) -> np.ndarray:
    """Opposition flags for the selected rows of a stacked basis array."""
    B = bases[rows]
    return _opposite_flags(space, B, _image_bases(space.F, B, A, e))


def _witness_scan(space, A, e, d, rng, probes, restrict=None):
    """First subspace of projective dimension d mapped to an opposite one,
    as an index tuple; None certifies there is none (exhaustive pass)."""
    idx, bases = space.subspace_arrays(d)
    pool = np.arange(len(bases)) if restrict is None else np.nonzero(restrict)[0]
    if len(pool) == 0:
        return None
    if probes and len(pool) > probes:
        pick = np.sort(rng.choice(len(pool), size=probes, replace=False))
        rows = pool[pick]
        flags = _scan_rows(space, bases, A, e, rows)
        hit = np.nonzero(flags)[0]
        if len(hit):
            return tuple(int(x) for x in idx[rows[hit[0]]])
    for lo in range(0, len(pool), _CHUNK):
        rows = pool[lo : lo + _CHUNK]
        flags = _scan_rows(space, bases, A, e, rows)
        hit = np.nonzero(flags)[0]
        if len(hit):
            return tuple(int(x) for x in idx[rows[hit[0]]])
    return None


# --------------------------------------------------------------------------
# hyperbolic fork helpers
# --------------------------------------------------------------------------


def _batch_left(F: GF, L: np.ndarray, B: np.ndarray) -> np.ndarray:
    """L . B[s] for a fixed (k, m) matrix L and stacked (S, m, N) bases."""
    if F.k == 1:
        prod = np.einsum("km,smn->skn", L.astype(np.int64), B.astype(np.int64))
        return (prod % F.p).astype(np.uint8)
    S, m, N = B.shape
    out = np.zeros((S, L.shape[0], N), dtype=np.uint8)
    for j in range(m):
        out = F.add_table[out, F.mul_table[L[:, j][None, :, None], B[:, j, :][:, None, :]]]
    return out


def _maximal_pairs(space: PolarSpace) -> tuple[np.ndarray, np.ndarray]:
    """Positions (into the maximal enumeration) of the two maximals through
    each singular subspace of projective dimension n-2: (pairs0, pairs1)
    with pairs0 in class 0.

    Each such subspace is a hyperplane of exactly two maximals, one per
    class, so the pairs are found by stacking every hyperplane of every
    maximal, canonicalizing by sorted point set, and matching equal rows.
    """
    if "fork_pairs" in space._cache:
        return space._cache["fork_pairs"]
    F, n = space.F, space.n
    _, mbases = space.subspace_arrays(n - 1)
    classes = space.maximal_class_array()
    S = len(mbases)
    normals = space._projective_combos(n)
    span_rows, pos_rows = [], []
    for u in normals:
        coeffs = linalg.kernel(F, u.reshape(1, -1).copy())
        W = _batch_left(F, coeffs, mbases)
        span_rows.append(np.sort(space.point_indices_of_spans(W), axis=1))
        pos_rows.append(np.arange(S, dtype=np.int32))
    spans = np.concatenate(span_rows)
    pos = np.concatenate(pos_rows)
    _, inverse, counts = np.unique(spans, axis=0, return_inverse=True, return_counts=True)
    assert (counts == 2).all(), "a next-to-maximal lies in exactly two maximals"
    order = np.argsort(inverse, kind="stable")
    pa, pb = pos[order[0::2]], pos[order[1::2]]
    flip = classes[pa] != 0
    pa, pb = np.where(flip, pb, pa), np.where(flip, pa, pb)
    assert (classes[pa] == 0).all() and (classes[pb] == 1).all()
    out = (pa.astype(np.int32), pb.astype(np.int32))
    space._cache["fork_pairs"] = out
    return out


def _merged_fork_scan(space, A, e, rng, probes):
    """Witness for the joint fork orbit: an incident maximal pair mapped to
    an opposite pair, or None (exhaustive)."""
    p0, p1 = _maximal_pairs(space)
    midx, mbases = space.subspace_arrays(space.n - 1)

    def flags_for(rows):
        MA = mbases[p0[rows]]
        MB = mbases[p1[rows]]
        IA = _image_bases(space.F, MA, A, e)
        IB = _image_bases(space.F, MB, A, e)
        return _opposite_flags(space, MB, IA) & _opposite_flags(space, MA, IB)

    S = len(p0)
    if probes and S > probes:
        pick = np.sort(rng.choice(S, size=probes, replace=False))
        flags = flags_for(pick)
        hit = np.nonzero(flags)[0]
        if len(hit):
            r = pick[hit[0]]
            return (tuple(map(int, midx[p0[r]])), tuple(map(int, midx[p1[r]])))
    for lo in range(0, S, _CHUNK):
        rows = np.arange(lo, min(lo + _CHUNK, S))
        flags = flags_for(rows)
        hit = np.nonzero(flags)[0]
        if len(hit):
            r = rows[hit[0]]
            return (tuple(map(int, midx[p0[r]])), tuple(map(int, midx[p1[r]])))
    return None


# --------------------------------------------------------------------------
# fixed structure
# --------------------------------------------------------------------------


def eigen_structure(space: PolarSpace, theta) -> dict[int, int]:
    """Eigenvalue -> eigenspace dimension, for linear collineations."""
    th = as_collineation(space.F, theta)
    if not th.is_linear:
        raise ValueError("eigen structure is defined for linear collineations")
    out = {}
    for lam in range(1, space.F.q):
        dim = linalg.eigenspace(space.F, th.matrix.T.copy(), lam).shape[0]
        if dim:
            out[lam] = dim
    return out


def fixed_singular_indices(space: PolarSpace, theta) -> list[int]:
    """Indices of the fixed singular points considered for corank: for a
    linear collineation those inside the largest eigenspace (ties to the
    smaller eigenvalue), for a semilinear one all fixed points."""
    F = space.F
    th = as_collineation(F, theta)
    if not th.is_linear:
        perm = point_permutation(space, th)
        return [int(i) for i in np.nonzero(perm == np.arange(len(perm)))[0]]
    best_lam, best_dim = None, 0
    for lam in range(1, F.q):
        dim = linalg.eigenspace(F, th.matrix.T.copy(), lam).shape[0]
        if dim > best_dim:
            best_lam, best_dim = lam, dim
    if best_lam is None:
        return []
    basis = linalg.eigenspace(F, th.matrix.T.copy(), best_lam)
    combos = space._projective_combos(basis.shape[0])
    vecs = linalg.matmul(F, combos, basis)
    mask = space.singular_mask(vecs)
    return sorted(space.point_index(v) for v in vecs[mask])


def fixed_set_corank(space: PolarSpace, theta) -> tuple[int, np.ndarray | None]:
    """Corank of the fixed-point structure: least t such that every singular
    subspace of projective dimension t meets it."""
    return space.corank_of_point_set(fixed_singular_indices(space, theta))


def has_pointwise_fixed_line(space: PolarSpace, theta) -> bool:
    perm = theta if isinstance(theta, np.ndarray) and theta.ndim == 1 else None
    if perm is None:
        perm = point_permutation(space, theta)
    fixed = perm == np.arange(len(perm))
    LP = space.line_point_table()
    return bool(fixed[LP].all(axis=1).any())


# --------------------------------------------------------------------------
# the opposition diagram of a collineation
# --------------------------------------------------------------------------


@dataclass
class OppositionResult:
    space: dict
    encircled: frozenset[int]
    witnesses: dict
    pi: Perm
    sigma: Perm
    diagram: OppDiagram | None
    symbol: str | None
    alias_symbol: str | None
    capped: bool
    fork_relabeled: bool
    classification: str
    fixed_point_count: int
    eigenvalue_dimensions: dict[int, int] | None
    corank: int | None
    probe_seed: int
    probe_count: int

    @property
    def is_domestic(self) -> bool:
        return self.classification in ("identity", "I", "II", "III")

    @property
    def is_point_domestic(self) -> bool:
        return 1 not in self.encircled

    def summary(self) -> str:
        sym = self.symbol or f"uncapped:{sorted(self.encircled)}"
        return f"{sym} [{self.classification}]"


def _node_set(space: PolarSpace) -> list[int]:
    if space.family == "D":
        return list(range(1, space.n - 1))
    return list(range(1, space.n + 1))


def opposition_diagram(
    space: PolarSpace,
    theta,
    *,
    seed: int = 0,
    probes: int = 512,
    with_corank: bool = False,
) -> OppositionResult:
    F, n = space.F, space.n
    th = as_collineation(F, theta)
    if similitude_factor(space, th) is None:
        raise ValueError("theta does not preserve the form of the space")
    perm = point_permutation(space, th)
    fixed_count = int((perm == np.arange(len(perm))).sum())
    is_identity = fixed_count == len(perm)
    rng = np.random.default_rng(seed)
    A, e = th.matrix, th.frob_exp

    encircled: set[int] = set()
    witnesses: dict = {}
    for k in _node_set(space):
        w = _witness_scan(space, A, e, k - 1, rng, probes)
        if w is not None:
            encircled.add(k)
            witnesses[k] = w

    pi = identity_perm(n)
    fork_relabeled = False
    if space.family == "D":
        ref = space.reference_maximal()
        img = _image_bases(F, ref[None, :, :], A, e)[0]
        img_cls = space.maximal_class(linalg.rref(F, img.copy())[0])
        if img_cls != 0:
            swapped = list(identity_perm(n))
            swapped[n - 2], swapped[n - 1] = n, n - 1
            pi = tuple(swapped)
        classes = space.maximal_class_array()
        fork_sigma_swaps = (n % 2 == 1) != (pi[n - 2] == n)
        if not fork_sigma_swaps:
            w0 = _witness_scan(space, A, e, n - 1, rng, probes, restrict=classes == 0)
            w1 = _witness_scan(space, A, e, n - 1, rng, probes, restrict=classes == 1)
            if w0 is not None:
                encircled.add(n - 1)
                witnesses[n - 1] = w0
            if w1 is not None:
                encircled.add(n)
                witnesses[n] = w1
            if (n - 1 in encircled) and (n not in encircled):
                # the labelling of the two families is a convention; the
                # catalog places a lone encircled fork node at n
                encircled.discard(n - 1)
                encircled.add(n)
                witnesses[n] = witnesses.pop(n - 1)
                fork_relabeled = True
        else:
            wp = _merged_fork_scan(space, A, e, rng, probes)
            if wp is not None:
                encircled |= {n - 1, n}
                witnesses[n - 1] = witnesses[n] = wp

    sigma = compose(pi0(space.family, n), pi)
    orbit_list = []
    skip = set()
    for k in sorted(encircled):
        if k in skip:
            continue
        mate = sigma[k - 1]
        if mate != k and mate in encircled:
            orbit_list.append(frozenset({k, mate}))
            skip.add(mate)
        else:
            orbit_list.append(frozenset({k}))
    orbits = frozenset(orbit_list)

    diagram = match_catalog(space.family, n, orbits, sigma)
    alias = None
    if F.q % 2 == 0 and space.kind in ("symplectic", "parabolic"):
        # for even q the symplectic and parabolic buildings coincide, so a
        # diagram has a second name in the sibling family
        sibling = "C" if space.family == "B" else "B"
        alias_diag = match_catalog(sibling, n, orbits, sigma)
        alias = alias_diag.symbol if alias_diag else None

    full = set(_node_set(space))
    if space.family == "D":
        full |= {n - 1, n}
    else:
        full = set(range(1, n + 1))
    if is_identity:
        classification = "identity"
    elif 1 not in encircled:
        classification = "II" if fixed_count else "III"
    elif encircled == full:
        classification = "not domestic"
    else:
        classification = "I"

    eig = eigen_structure(space, th) if th.is_linear else None
    corank = None
    if with_corank:
        corank = fixed_set_corank(space, th)[0]

    return OppositionResult(
        space=space.descriptor(),
        encircled=frozenset(encircled),
        witnesses=witnesses,
        pi=pi,
        sigma=sigma,
        diagram=diagram,
        symbol=diagram.symbol if diagram else None,
        alias_symbol=alias,
        capped=diagram is not None,
        fork_relabeled=fork_relabeled,
        classification=classification,
        fixed_point_count=fixed_count,
        eigenvalue_dimensions=eig,
        corank=corank,
        probe_seed=seed,
        probe_count=probes,
    )


# --------------------------------------------------------------------------
# chambers (families B/C, rank at most 3)
# --------------------------------------------------------------------------


def chamber_list(space: PolarSpace) -> list[tuple[int, ...]]:
    """All chambers (maximal flags) as tuples of enumeration indices, one
    slot per dimension.  Deterministic order."""
    if space.family == "D":
        raise ValueError("chamber enumeration is for families B and C")
    n = space.n
    if n == 2:
        LP = space.line_point_table()
        return [(int(p), l) for l in range(LP.shape[0]) for p in sorted(map(int, LP[l]))]
    if n == 3:
        LP = space.line_point_table()
        _, planes = space.subspace_arrays(2)
        plane_pts = [set(map(int, row)) for row in space.point_indices_of_spans(planes)]
        out = []
        for m, pts in enumerate(plane_pts):
            for l in range(LP.shape[0]):
                lpts = set(map(int, LP[l]))
                if lpts <= pts:
                    for p in sorted(lpts):
                        out.append((p, l, m))
        return out
    raise ValueError("chamber enumeration implemented for rank 2 and 3")


def chambers_opposite(space: PolarSpace, c1, c2) -> bool:
    """Componentwise opposition of two chambers: every slot of one opposite
    the same-dimension slot of the other."""
    for d, (i, j) in enumerate(zip(c1, c2)):
        _, bases = space.subspace_arrays(d)
        if not space.opposite(bases[i], bases[j]):
            return False
    return True


def chamber_distance_matrix(space: PolarSpace) -> tuple[list[tuple[int, ...]], np.ndarray]:
    """Chamber graph of a rank-2 space (adjacent = share a slot) with its
    full BFS distance matrix."""
    if space.n != 2:
        raise ValueError("the chamber graph oracle is for rank 2")
    chambers = chamber_list(space)
    C = len(chambers)
    adj = [[] for _ in range(C)]
    by_point: dict[int, list[int]] = {}
    by_line: dict[int, list[int]] = {}
    for i, (p, l) in enumerate(chambers):
        by_point.setdefault(p, []).append(i)
        by_line.setdefault(l, []).append(i)
    for group in list(by_point.values()) + list(by_line.values()):
        for i in group:
            for j in group:
                if i != j:
                    adj[i].append(j)
    dist = np.full((C, C), -1, dtype=np.int16)
    for s in range(C):
        dist[s, s] = 0
        frontier = [s]
        d = 0
        while frontier:
            d += 1
            nxt = []
            for u in frontier:
                for v in adj[u]:
                    if dist[s, v] < 0:
                        dist[s, v] = d
                        nxt.append(v)
            frontier = nxt
    assert (dist >= 0).all()
    return chambers, dist


# --------------------------------------------------------------------------
# subfield fixed geometry (for semilinear involutions)
# --------------------------------------------------------------------------


def subfield_fixed_report(space: PolarSpace, theta) -> dict:
    """Structure of the fixed-point set of a semilinear involution: counts,
    collinearity degrees, restricted line sizes, the polar-space axiom on
    the restricted geometry, and a maximal singular witness.

    The result certifies computationally that the fixed points form a polar
    space in their own right.
    """
    F = space.F
    th = as_collineation(F, theta)
    perm = point_permutation(space, th)
    fixed = np.nonzero(perm == np.arange(len(perm)))[0]
    P = space.points[fixed]
    PG = space.collinearity_products(P)
    if F.k == 1:
        prods = PG.astype(np.int64) @ P.astype(np.int64).T % F.p
    else:
        prods = np.zeros((len(P), len(P)), dtype=np.uint8)
        for c in range(P.shape[1]):
            prods = F.add_table[prods, F.mul_table[PG[:, c][:, None], P[:, c][None, :]]]
    adjacency = (prods == 0) & ~np.eye(len(P), dtype=bool)
    degrees = adjacency.sum(axis=1)

    LP = space.line_point_table()
    fixed_mask = np.zeros(space.num_points, dtype=bool)
    fixed_mask[fixed] = True
    per_line = fixed_mask[LP].sum(axis=1)
    sizes = sorted(set(map(int, per_line)))

    # polar-space axiom on the restricted geometry: a fixed point sees one
    # or all points of every restricted line
    restricted_lines = np.nonzero(per_line >= 2)[0]
    pos_of = {int(f): i for i, f in enumerate(fixed)}
    axiom_ok = True
    for l in restricted_lines:
        members = [pos_of[int(p)] for p in LP[l] if fixed_mask[p]]
        for i in range(len(fixed)):
            seen = sum(adjacency[i, m] or i == m for m in members)
            if seen not in (1, len(members)):
                axiom_ok = False
    # largest singular subspace carrying a full subfield sub-geometry: a
    # d-subspace counts when some member holds (q0^(d+1)-1)/(q0-1) fixed
    # points, q0 the fixed subfield's order
    q0 = F.p ** (F.k // 2) if F.k % 2 == 0 else F.p
    best_dim = -1
    for d in range(space.n):
        _, bases = space.subspace_arrays(d)
        spans = space.point_indices_of_spans(bases)
        need = (q0 ** (d + 1) - 1) // (q0 - 1)
        if (fixed_mask[spans].sum(axis=1) >= need).any():
            best_dim = d
    return {
        "fixed_points": int(len(fixed)),
        "degrees": sorted(set(map(int, degrees))),
        "restricted_line_sizes": [s for s in sizes if s >= 2],
        "restricted_line_count": int((per_line >= 2).sum()),
        "one_or_all": axiom_ok,
        "max_fixed_singular_dim": best_dim,
    }


def fixed_line_geometry(space: PolarSpace, theta) -> dict:
    """The geometry whose points are the theta-stable lines and whose
    lines are the theta-stable generators.

    For a point-domestic collineation with no fixed points every point
    lies on exactly one stable line (the join with its image), so the
    stable lines partition the point set and serve as the points of a
    derived geometry; stable generators, read as sets of the stable
    lines they contain, serve as its lines.  Two derived points are
    collinear when the joint span of the two stable lines is singular.
    The one-or-all flag reports the polar-space point-line axiom on the
    derived geometry.
    """
    F = space.F
    assert F.k == 1, "the derived geometry is computed over prime fields"
    perm = point_permutation(space, theta)
    npts = space.num_points
    lidx, lbases = space.subspace_arrays(1)
    lt = space.line_through_table()
    la = lidx[:, 0].astype(np.int64)
    lb = lidx[:, 1].astype(np.int64)
    limg = lt[perm[la], perm[lb]]
    assert (limg >= 0).all()  # collineations carry lines to lines
    stable = np.nonzero(limg == np.arange(len(la)))[0]
    dp = len(stable)

    spans_l = space.point_indices_of_spans(lbases[stable])
    mem = np.zeros((dp, npts), dtype=bool)
    mem[np.arange(dp)[:, None], spans_l] = True
    share = mem @ mem.T
    np.fill_diagonal(share, False)
    pairwise_disjoint = not share.any()

    B = lbases[stable].astype(np.int64)
    BG = B @ space.gram.astype(np.int64) % F.p
    cross = np.einsum("ikn,jmn->ijkm", BG, B) % F.p
    adj = (cross == 0).all(axis=(2, 3))
    np.fill_diagonal(adj, False)

    _, mbases = space.subspace_arrays(space.n - 1)
    spans_m = np.sort(space.point_indices_of_spans(mbases), axis=1)
    img_m = np.sort(perm[spans_m], axis=1)
    stable_m = np.nonzero((spans_m == img_m).all(axis=1))[0]
    dl = len(stable_m)

    memmax = np.zeros((dl, npts), dtype=bool)
    memmax[np.arange(dl)[:, None], spans_m[stable_m]] = True
    member = memmax[:, la[stable]] & memmax[:, lb[stable]]
    per_line = member.sum(axis=1)

    counts = member.astype(np.int32) @ adj.astype(np.int32)
    ok_cells = member | (counts == 1) | (counts == per_line[:, None])
    return {
        "derived_points": int(dp),
        "derived_lines": int(dl),
        "points_per_derived_line": sorted(set(per_line.tolist())),
        "pairwise_disjoint": bool(pairwise_disjoint),
        "one_or_all": bool(ok_cells.all()),
    }
