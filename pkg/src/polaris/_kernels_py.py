"""Pure-numpy evaluation kernel for group sweeps (prime fields).

The compiled twin :mod:`polaris._speedups` implements the same function
with identical semantics; :mod:`polaris.backend` picks whichever is
available.  Keep the two in lockstep — the parity test compares them on
random chunks.

``census_chunk`` takes a chunk of group elements (row-action matrices over
a prime field) together with precomputed geometry tables and returns, per
element, a bitmask of encircled nodes (bit d set when some singular
subspace of projective dimension d is mapped to an opposite one) and the
number of fixed points.

Table contract (all little helpers of the sweep build these):
  P          (Npts, N) uint8    singular points, canonical order
  powq       (N,) int64         big-endian base-q digit weights
  vec_lut    (q**N,) int32      packed vector -> point index, any scalar
                                multiple of a singular point; -1 elsewhere
  line_a/b   (L,) int32         two spanning point indices per line
  line_through (Npts*Npts,) int32  flattened joining-line index, -1 off
  opp_pt     (Npts, Npts) bool  point opposition (nonzero pairing)
  opp_line   (L, L) bool        line opposition (nondegenerate pairing)
  tri        (Pl, 3) int32      three spanning point indices per plane
                                (zero rows when the space has rank 2)
  plane_through (Npts**3,) int32 flattened plane through a spanning
                                point triple, -1 elsewhere
  opp_plane  (Pl, Pl) bool      plane opposition
"""

from __future__ import annotations

import numpy as np


def census_chunk(
    A: np.ndarray,
    p: int,
    P: np.ndarray,
    powq: np.ndarray,
    vec_lut: np.ndarray,
    line_a: np.ndarray,
    line_b: np.ndarray,
    line_through: np.ndarray,
    opp_pt: np.ndarray,
    opp_line: np.ndarray,
    tri: np.ndarray,
    plane_through: np.ndarray,
    opp_plane: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    B = A.shape[0]
    npts = P.shape[0]
    imgs = np.einsum("pn,bnm->bpm", P.astype(np.int64), A.astype(np.int64)) % p
    keys = imgs @ powq
    perm = vec_lut[keys]
    assert (perm >= 0).all(), "an element moved a singular point off the space"

    fixed = (perm == np.arange(npts)[None, :]).sum(axis=1).astype(np.int32)
    enc = np.zeros(B, dtype=np.uint8)
    pt_hit = opp_pt[np.arange(npts)[None, :], perm].any(axis=1)
    enc |= pt_hit.astype(np.uint8)

    la, lb = perm[:, line_a], perm[:, line_b]
    lperm = line_through[la * npts + lb]
    assert (lperm >= 0).all(), "line image lookup failed"
    nlines = len(line_a)
    line_hit = opp_line[np.arange(nlines)[None, :], lperm].any(axis=1)
    enc |= (line_hit.astype(np.uint8)) << 1

    if len(tri):
        ta = perm[:, tri[:, 0]]
        tb = perm[:, tri[:, 1]]
        tc = perm[:, tri[:, 2]]
        pperm = plane_through[(ta * npts + tb) * npts + tc]
        assert (pperm >= 0).all(), "plane image lookup failed"
        nplanes = len(tri)
        plane_hit = opp_plane[np.arange(nplanes)[None, :], pperm].any(axis=1)
        enc |= (plane_hit.astype(np.uint8)) << 2

    return enc, fixed


def point_perm_chunk(A: np.ndarray, p: int, P: np.ndarray, powq, vec_lut) -> np.ndarray:
    """Point permutations only, (B, Npts) int32."""
    imgs = np.einsum("pn,bnm->bpm", P.astype(np.int64), A.astype(np.int64)) % p
    perm = vec_lut[imgs @ powq]
    assert (perm >= 0).all()
    return perm.astype(np.int32)
