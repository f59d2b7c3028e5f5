# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled evaluation kernel for group sweeps (prime fields).

Same contract as polaris._kernels_py (the table layout is documented
there); this version walks each element with typed loops and exits a
node's scan at the first witness, which the vectorized fallback cannot do.
"""

import numpy as np

cimport numpy as cnp


def census_chunk(
    cnp.uint8_t[:, :, ::1] A,
    int p,
    cnp.uint8_t[:, ::1] P,
    cnp.int64_t[::1] powq,
    cnp.int32_t[::1] vec_lut,
    cnp.int32_t[::1] line_a,
    cnp.int32_t[::1] line_b,
    cnp.int32_t[::1] line_through,
    cnp.uint8_t[:, ::1] opp_pt,
    cnp.uint8_t[:, ::1] opp_line,
    cnp.int32_t[:, ::1] tri,
    cnp.int32_t[::1] plane_through,
    cnp.uint8_t[:, ::1] opp_plane,
):
    cdef Py_ssize_t B = A.shape[0]
    cdef Py_ssize_t N = A.shape[1]
    cdef Py_ssize_t npts = P.shape[0]
    cdef Py_ssize_t nlines = line_a.shape[0]
    cdef Py_ssize_t nplanes = tri.shape[0]

    enc_arr = np.zeros(B, dtype=np.uint8)
    fixed_arr = np.zeros(B, dtype=np.int32)
    perm_arr = np.empty(npts, dtype=np.int32)
    cdef cnp.uint8_t[::1] enc = enc_arr
    cdef cnp.int32_t[::1] fixed = fixed_arr
    cdef cnp.int32_t[::1] perm = perm_arr

    cdef Py_ssize_t b, i, j, k, l, q
    cdef long acc, key
    cdef cnp.int32_t pi, ia, ib, ic, limg, pimg
    cdef int nfix, bits, hit

    for b in range(B):
        nfix = 0
        bits = 0
        hit = 0
        for i in range(npts):
            key = 0
            for j in range(N):
                acc = 0
                for k in range(N):
                    acc += P[i, k] * A[b, k, j]
                key += (acc % p) * powq[j]
            pi = vec_lut[key]
            if pi < 0:
                raise ValueError("an element moved a singular point off the space")
            perm[i] = pi
            if pi == i:
                nfix += 1
            if hit == 0 and opp_pt[i, pi]:
                hit = 1
        if hit:
            bits |= 1
        fixed[b] = nfix

        for l in range(nlines):
            ia = perm[line_a[l]]
            ib = perm[line_b[l]]
            limg = line_through[ia * npts + ib]
            if limg < 0:
                raise ValueError("line image lookup failed")
            if opp_line[l, limg]:
                bits |= 2
                break

        for q in range(nplanes):
            ia = perm[tri[q, 0]]
            ib = perm[tri[q, 1]]
            ic = perm[tri[q, 2]]
            pimg = plane_through[(ia * npts + ib) * npts + ic]
            if pimg < 0:
                raise ValueError("plane image lookup failed")
            if opp_plane[q, pimg]:
                bits |= 4
                break

        enc[b] = <cnp.uint8_t> bits

    return enc_arr, fixed_arr


def point_perm_chunk(
    cnp.uint8_t[:, :, ::1] A,
    int p,
    cnp.uint8_t[:, ::1] P,
    cnp.int64_t[::1] powq,
    cnp.int32_t[::1] vec_lut,
):
    cdef Py_ssize_t B = A.shape[0]
    cdef Py_ssize_t N = A.shape[1]
    cdef Py_ssize_t npts = P.shape[0]
    out_arr = np.empty((B, npts), dtype=np.int32)
    cdef cnp.int32_t[:, ::1] out = out_arr
    cdef Py_ssize_t b, i, j, k
    cdef long acc, key
    cdef cnp.int32_t pi
    for b in range(B):
        for i in range(npts):
            key = 0
            for j in range(N):
                acc = 0
                for k in range(N):
                    acc += P[i, k] * A[b, k, j]
                key += (acc % p) * powq[j]
            pi = vec_lut[key]
            if pi < 0:
                raise ValueError("an element moved a singular point off the space")
            out[b, i] = pi
    return out_arr
