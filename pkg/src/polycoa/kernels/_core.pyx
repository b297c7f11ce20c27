# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled numerical kernels.

Mirrors polycoa.kernels.pure operation for operation; that module is the
readable reference. Keep the two in lockstep when changing either.
"""
import numpy as np

from libc.math cimport fabs, sqrt

BACKEND = "compiled"


cdef double _off_norm(double complex[:, ::1] a, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef double s = 0.0
    cdef double re, im
    for i in range(n):
        for j in range(n):
            if i != j:
                re = a[i, j].real
                im = a[i, j].imag
                s += re * re + im * im
    return sqrt(s)


def jacobi_eigh(h, bint compute_vectors=True, double off_tol=1e-12, int max_sweeps=100):
    """Cyclic Jacobi diagonalization of a complex Hermitian matrix.

    Returns (w, v, sweeps, converged); see polycoa.kernels.pure.jacobi_eigh.
    """
    a_arr = np.array(h, dtype=np.complex128, order="C")
    if a_arr.ndim != 2 or a_arr.shape[0] != a_arr.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a_arr.shape}")
    cdef Py_ssize_t n = a_arr.shape[0]
    v_arr = np.eye(n, dtype=np.complex128) if compute_vectors else None
    if n < 2:
        return np.diag(a_arr).real.copy(), v_arr, 0, True

    cdef double complex[:, ::1] a = a_arr
    cdef double complex[:, ::1] v = v_arr if compute_vectors else a
    cdef Py_ssize_t p, q, r
    cdef int sweeps = 0
    cdef bint converged
    cdef double skip = off_tol / (10.0 * n)
    cdef double ah, app, aqq, tau, t, c
    cdef double complex hpq, u, su, suc, xp, xq

    converged = _off_norm(a, n) < off_tol
    while not converged and sweeps < max_sweeps:
        for p in range(n - 1):
            for q in range(p + 1, n):
                hpq = a[p, q]
                ah = abs(hpq)
                if ah <= skip:
                    continue
                app = a[p, p].real
                aqq = a[q, q].real
                u = hpq / ah
                tau = (app - aqq) / (2.0 * ah)
                if tau == 0.0:
                    t = 1.0
                else:
                    t = (1.0 if tau > 0.0 else -1.0) / (fabs(tau) + sqrt(1.0 + tau * tau))
                c = 1.0 / sqrt(1.0 + t * t)
                su = (t * c) * u
                suc = su.conjugate()
                for r in range(n):
                    xp = a[p, r]
                    xq = a[q, r]
                    a[p, r] = c * xp + su * xq
                    a[q, r] = c * xq - suc * xp
                for r in range(n):
                    a[r, p] = a[p, r].conjugate()
                    a[r, q] = a[q, r].conjugate()
                a[p, p] = app + t * ah
                a[q, q] = aqq - t * ah
                a[p, q] = 0.0
                a[q, p] = 0.0
                if compute_vectors:
                    for r in range(n):
                        xp = v[r, p]
                        xq = v[r, q]
                        v[r, p] = c * xp + suc * xq
                        v[r, q] = c * xq - su * xp
        sweeps += 1
        converged = _off_norm(a, n) < off_tol
    return np.diag(a_arr).real.copy(), v_arr, sweeps, converged


def concurrence_each(members, int d1, int d2):
    """Homogeneous concurrence of each member row; see polycoa.kernels.pure."""
    m_arr = np.ascontiguousarray(members, dtype=np.complex128).reshape(-1, d1 * d2)
    cdef const double complex[:, ::1] m = m_arr
    cdef Py_ssize_t nmem = m.shape[0]
    out_arr = np.zeros(nmem)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t idx, i, j, k, l
    cdef double s
    cdef double complex minor
    for idx in range(nmem):
        s = 0.0
        for i in range(d1 - 1):
            for j in range(i + 1, d1):
                for k in range(d2 - 1):
                    for l in range(k + 1, d2):
                        minor = (m[idx, i * d2 + k] * m[idx, j * d2 + l]
                                 - m[idx, i * d2 + l] * m[idx, j * d2 + k])
                        s += minor.real * minor.real + minor.imag * minor.imag
        out[idx] = 2.0 * sqrt(s)
    return out_arr
