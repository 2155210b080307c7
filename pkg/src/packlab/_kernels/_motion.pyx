# cython: boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled kernels for rigid-motion orbit counting (see motion_py for the contract)."""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def multiplicity_counts(const cnp.int32_t[::1] g_ids, const cnp.int32_t[::1] z_ids,
                        const cnp.int32_t[::1] e_idx, const cnp.int32_t[:, ::1] perms,
                        const cnp.int32_t[:, ::1] add_table):
    cdef Py_ssize_t n = add_table.shape[0]
    out = np.zeros(n, dtype=np.int64)
    cdef cnp.int64_t[::1] lam = out
    cdef Py_ssize_t k, i
    cdef Py_ssize_t nm = g_ids.shape[0], ne = e_idx.shape[0]
    cdef cnp.int32_t g, z
    for k in range(nm):
        g = g_ids[k]
        z = z_ids[k]
        for i in range(ne):
            lam[add_table[z, perms[g, e_idx[i]]]] += 1
    return out


def orbit_mask(const cnp.int32_t[::1] g_ids, const cnp.int32_t[::1] z_ids,
               const cnp.int32_t[::1] e_idx, const cnp.int32_t[:, ::1] perms,
               const cnp.int32_t[:, ::1] add_table):
    cdef Py_ssize_t n = add_table.shape[0]
    out = np.zeros(n, dtype=np.uint8)
    cdef cnp.uint8_t[::1] mask = out
    cdef Py_ssize_t k, i
    cdef Py_ssize_t nm = g_ids.shape[0], ne = e_idx.shape[0]
    cdef cnp.int32_t g, z
    for k in range(nm):
        g = g_ids[k]
        z = z_ids[k]
        for i in range(ne):
            mask[add_table[z, perms[g, e_idx[i]]]] = 1
    return out.astype(bool)
