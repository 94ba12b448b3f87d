# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels.  Semantics match ``_kernels_py`` exactly."""

import numpy as np
cimport numpy as cnp

cnp.import_array()


def atom_sum(positions, weights, zs):
    cdef double[::1] pos = np.ascontiguousarray(positions, dtype=np.float64)
    cdef Py_ssize_t k = pos.shape[0]
    W_arr = np.ascontiguousarray(weights, dtype=np.complex128)
    cdef Py_ssize_t n = W_arr.shape[1] if W_arr.ndim == 3 else 1
    W_flat = W_arr.reshape(k, n * n)
    cdef double[:, ::1] Wr = np.ascontiguousarray(W_flat.real)
    cdef double[:, ::1] Wi = np.ascontiguousarray(W_flat.imag)
    z_arr = np.ascontiguousarray(zs, dtype=np.complex128)
    cdef double[::1] zr = np.ascontiguousarray(z_arr.real)
    cdef double[::1] zi = np.ascontiguousarray(z_arr.imag)
    cdef Py_ssize_t nz = zr.shape[0]
    cdef Py_ssize_t nn = n * n
    re_arr = np.zeros((nz, nn))
    im_arr = np.zeros((nz, nn))
    cdef double[:, ::1] ore = re_arr
    cdef double[:, ::1] oim = im_arr
    cdef double[::1] reg = np.empty(k)
    cdef Py_ssize_t m, j, e
    cdef double lam, dx, y, den, cr, ci
    for j in range(k):
        lam = pos[j]
        reg[j] = lam / (1.0 + lam * lam)
    with nogil:
        for m in range(nz):
            y = zi[m]
            for j in range(k):
                dx = pos[j] - zr[m]
                den = 1.0 / (dx * dx + y * y)
                # 1/(dx - i y) = (dx + i y)/(dx^2 + y^2)
                cr = dx * den - reg[j]
                ci = y * den
                for e in range(nn):
                    ore[m, e] += cr * Wr[j, e] - ci * Wi[j, e]
                    oim[m, e] += cr * Wi[j, e] + ci * Wr[j, e]
    return (re_arr + 1j * im_arr).reshape(nz, n, n)
