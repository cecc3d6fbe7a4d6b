# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled subset-lattice transforms.

Arrays are indexed by bitmask over m units (length 2^m).  Both transforms
run in O(m * 2^m) and are exact on integer-valued input.
"""

from libc.stdint cimport int64_t

BACKEND = "compiled"

ctypedef fused lattice_t:
    int64_t
    double


def zeta_in_place(lattice_t[::1] a, int m):
    """In place, a[X] <- sum of a[B] over all B subseteq X."""
    cdef Py_ssize_t size = a.shape[0]
    cdef Py_ssize_t bit, x
    cdef int i
    if size != (<Py_ssize_t> 1) << m:
        raise ValueError("array length must be 2**m")
    for i in range(m):
        bit = (<Py_ssize_t> 1) << i
        for x in range(size):
            if x & bit:
                a[x] += a[x ^ bit]


def mobius_in_place(lattice_t[::1] a, int m):
    """In place, inverse of :func:`zeta_in_place`."""
    cdef Py_ssize_t size = a.shape[0]
    cdef Py_ssize_t bit, x
    cdef int i
    if size != (<Py_ssize_t> 1) << m:
        raise ValueError("array length must be 2**m")
    for i in range(m):
        bit = (<Py_ssize_t> 1) << i
        for x in range(size):
            if x & bit:
                a[x] -= a[x ^ bit]
