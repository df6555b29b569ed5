# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled success-probability kernels.

Mirrors cmqsearch._kernels_py operation-for-operation; see that module for
the derivation notes.  Keep the two in sync.
"""

from libc.math cimport asin, cos, sin, sqrt

BACKEND = "cython"


cpdef double delta_angle(double phi, double lam):
    cdef double u = lam * (1.0 - cos(phi))
    return 2.0 * asin(sqrt(0.5 * u))


cpdef double p_success(long k, double phi, double lam):
    cdef double c = cos(phi)
    cdef double u = lam * (1.0 - c)
    cdef double d, a, b, p
    if u <= 0.0:
        return lam
    d = 2.0 * asin(sqrt(0.5 * u))
    a = (lam - 1.0) / (2.0 - u)
    b = (1.0 + lam * c) / (2.0 - u)
    p = a * cos((2 * k + 1) * d) + b
    if p < 0.0:
        return 0.0
    if p > 1.0:
        return 1.0
    return p


cpdef tuple p_coefficients(long k, double phi, double lam):
    cdef double c = cos(phi)
    cdef double u = lam * (1.0 - c)
    if u <= 0.0:
        return 0.0, lam
    return (lam - 1.0) / (2.0 - u), (1.0 + lam * c) / (2.0 - u)


cpdef double p_derivative(long k, double phi, double lam):
    cdef double c = cos(phi)
    cdef double u = lam * (1.0 - c)
    cdef double cd, d, sd, inner
    cdef long n
    if u <= 0.0:
        return 1.0
    cd = 1.0 - u
    d = 2.0 * asin(sqrt(0.5 * u))
    sd = sin(d)
    n = 2 * k + 1
    inner = (1.0 + c) * (1.0 + cos(n * d)) \
        - n * (c - cd) * (1.0 + cd) * (sin(n * d) / sd)
    return inner / ((1.0 + cd) * (1.0 + cd))


cpdef void p_success_many(long k, double phi, double[:] lams, double[:] out):
    cdef Py_ssize_t i
    for i in range(lams.shape[0]):
        out[i] = p_success(k, phi, lams[i])
