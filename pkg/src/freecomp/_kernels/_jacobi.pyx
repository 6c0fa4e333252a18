# cython: boundscheck=False, wraparound=False, cdivision=True
"""Cyclic Jacobi diagonalization for dense complex Hermitian matrices.

Compiled counterpart of freecomp._kernels.pyjacobi; both implement the
same rotation order so results agree to rounding.
"""

from libc.math cimport fabs, sqrt


def jacobi_cycle(double complex[:, ::1] a, double complex[:, ::1] v,
                 double tol, int max_sweeps):
    """Diagonalize Hermitian ``a`` in place, accumulating rotations in ``v``.

    ``v`` must be the identity on entry.  Returns the number of sweeps
    performed, or -1 if the off-diagonal mass did not drop below
    ``tol * ||a||_F`` within ``max_sweeps`` sweeps.
    """
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t p, q, k
    cdef int sweep
    cdef double norm_f = 0.0, off, m, app, aqq, tau, t, c, s
    cdef double complex g, ph, apk, aqk

    for p in range(n):
        for q in range(n):
            g = a[p, q]
            norm_f += g.real * g.real + g.imag * g.imag
    norm_f = sqrt(norm_f)
    if norm_f == 0.0:
        return 0

    for sweep in range(1, max_sweeps + 1):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                g = a[p, q]
                off += g.real * g.real + g.imag * g.imag
        if sqrt(2.0 * off) < tol * norm_f:
            return sweep - 1

        for p in range(n - 1):
            for q in range(p + 1, n):
                g = a[p, q]
                m = sqrt(g.real * g.real + g.imag * g.imag)
                if m == 0.0:
                    continue
                ph = g / m
                app = a[p, p].real
                aqq = a[q, q].real
                tau = (aqq - app) / (2.0 * m)
                if tau >= 0.0:
                    t = 1.0 / (tau + sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + sqrt(1.0 + tau * tau))
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c

                a[p, p] = app - t * m
                a[q, q] = aqq + t * m
                a[p, q] = 0.0
                a[q, p] = 0.0
                for k in range(n):
                    if k == p or k == q:
                        continue
                    apk = a[k, p]
                    aqk = a[k, q]
                    a[k, p] = c * apk - s * ph.conjugate() * aqk
                    a[k, q] = s * apk + c * ph.conjugate() * aqk
                    a[p, k] = a[k, p].conjugate()
                    a[q, k] = a[k, q].conjugate()
                for k in range(n):
                    apk = v[k, p]
                    aqk = v[k, q]
                    v[k, p] = c * apk - s * ph.conjugate() * aqk
                    v[k, q] = s * apk + c * ph.conjugate() * aqk
    return -1
