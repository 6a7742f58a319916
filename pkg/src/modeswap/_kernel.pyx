# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled RK4 Lindblad propagation kernel.

Same contract as the pure-Python fallback ``modeswap._kernel_py``: advance a
dense Hermitian density matrix by fixed RK4 steps under sparse (CSR)
Hamiltonian and jump operators.  Hermiticity of the right-hand side is
exploited by assembling it as M + M^H plus jump terms c (c rho)^H.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

ctypedef cnp.complex128_t cplx
ctypedef cnp.int64_t idx


cdef void _csr_left(cplx[:, ::1] out, idx[::1] indptr, idx[::1] indices,
                    cplx[::1] data, cplx[:, ::1] x, bint zero) nogil:
    """out (+)= A @ x with A in CSR form; zeroes out first when requested."""
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t i, j, p, k
    cdef cplx v
    for i in range(n):
        if zero:
            for j in range(n):
                out[i, j] = 0
        for p in range(indptr[i], indptr[i + 1]):
            v = data[p]
            k = indices[p]
            for j in range(n):
                out[i, j] = out[i, j] + v * x[k, j]


cdef void _rhs(cplx[:, ::1] out, cplx[:, ::1] x, double ga, double gb,
               idx[::1] hp, idx[::1] hi, cplx[::1] h1, cplx[::1] h2,
               double[::1] ndiag, cplx[:, ::1] m, list jumps):
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t i, j, p, k
    cdef cplx coef, v, acc
    cdef double s
    cdef idx[::1] jp, ji
    cdef cplx[::1] jd

    with nogil:
        # m = -i (ga H1 + gb H2) @ x - (ndiag/2) row scaling
        for i in range(n):
            s = -0.5 * ndiag[i]
            for j in range(n):
                m[i, j] = s * x[i, j]
            for p in range(hp[i], hp[i + 1]):
                coef = -1j * (ga * h1[p] + gb * h2[p])
                k = hi[p]
                for j in range(n):
                    m[i, j] = m[i, j] + coef * x[k, j]
        # out = m + m^H
        for i in range(n):
            for j in range(n):
                out[i, j] = m[i, j] + m[j, i].conjugate()

    # jump terms: T = c @ x, then out += T @ c^H (= c rho c^dag for Hermitian rho)
    for jump in jumps:
        jp = jump[0]
        ji = jump[1]
        jd = jump[2]
        with nogil:
            _csr_left(m, jp, ji, jd, x, True)
            for i in range(n):
                for j in range(n):
                    if jp[j] != jp[j + 1]:
                        acc = 0
                        for p in range(jp[j], jp[j + 1]):
                            acc = acc + m[i, ji[p]] * jd[p].conjugate()
                        out[i, j] = out[i, j] + acc


def propagate(rho, h_indptr, h_indices, h1_data, h2_data, jumps, ndiag,
              g1, g2, double dt, Py_ssize_t nsteps):
    """Advance rho by nsteps RK4 steps; couplings on the half-step grid."""
    cdef cnp.ndarray[cplx, ndim=2] r = np.array(rho, dtype=np.complex128, order="C")
    cdef Py_ssize_t n = r.shape[0]
    cdef cplx[:, ::1] rv = r
    cdef cplx[:, ::1] y = np.empty((n, n), dtype=np.complex128)
    cdef cplx[:, ::1] k = np.empty((n, n), dtype=np.complex128)
    cdef cplx[:, ::1] acc = np.empty((n, n), dtype=np.complex128)
    cdef cplx[:, ::1] m = np.empty((n, n), dtype=np.complex128)

    cdef idx[::1] hp = np.ascontiguousarray(h_indptr, dtype=np.int64)
    cdef idx[::1] hi = np.ascontiguousarray(h_indices, dtype=np.int64)
    cdef cplx[::1] h1 = np.ascontiguousarray(h1_data, dtype=np.complex128)
    cdef cplx[::1] h2 = np.ascontiguousarray(h2_data, dtype=np.complex128)
    cdef double[::1] nd = np.ascontiguousarray(ndiag, dtype=np.float64)
    cdef double[::1] g1v = np.ascontiguousarray(g1, dtype=np.float64)
    cdef double[::1] g2v = np.ascontiguousarray(g2, dtype=np.float64)
    cdef list jl = [
        (np.ascontiguousarray(a, dtype=np.int64),
         np.ascontiguousarray(b, dtype=np.int64),
         np.ascontiguousarray(c, dtype=np.complex128))
        for a, b, c in jumps
    ]

    cdef Py_ssize_t s, i, j
    cdef double h6 = dt / 6.0, h3 = dt / 3.0, h2t = dt / 2.0

    for s in range(nsteps):
        _rhs(k, rv, g1v[2 * s], g2v[2 * s], hp, hi, h1, h2, nd, m, jl)
        with nogil:
            for i in range(n):
                for j in range(n):
                    acc[i, j] = rv[i, j] + h6 * k[i, j]
                    y[i, j] = rv[i, j] + h2t * k[i, j]
        _rhs(k, y, g1v[2 * s + 1], g2v[2 * s + 1], hp, hi, h1, h2, nd, m, jl)
        with nogil:
            for i in range(n):
                for j in range(n):
                    acc[i, j] = acc[i, j] + h3 * k[i, j]
                    y[i, j] = rv[i, j] + h2t * k[i, j]
        _rhs(k, y, g1v[2 * s + 1], g2v[2 * s + 1], hp, hi, h1, h2, nd, m, jl)
        with nogil:
            for i in range(n):
                for j in range(n):
                    acc[i, j] = acc[i, j] + h3 * k[i, j]
                    y[i, j] = rv[i, j] + dt * k[i, j]
        _rhs(k, y, g1v[2 * s + 2], g2v[2 * s + 2], hp, hi, h1, h2, nd, m, jl)
        with nogil:
            for i in range(n):
                for j in range(n):
                    rv[i, j] = acc[i, j] + h6 * k[i, j]

    return r
