"""Pure-Python cyclic Jacobi diagonalization for complex Hermitian matrices.

Fallback used when the compiled extension (freecomp._kernels._jacobi) is
not built.  Mirrors the compiled kernel rotation for rotation.
"""

import math


def jacobi_cycle(a, v, tol, max_sweeps):
    """Diagonalize Hermitian ``a`` in place, accumulating rotations in ``v``.

    ``a`` and ``v`` are square complex128 ndarrays; ``v`` must be the
    identity on entry.  Returns the number of sweeps performed, or -1 if
    the off-diagonal mass did not drop below ``tol * ||a||_F`` within
    ``max_sweeps`` sweeps.
    """
    n = a.shape[0]
    norm_f = 0.0
    for p in range(n):
        for q in range(n):
            g = a[p, q]
            norm_f += g.real * g.real + g.imag * g.imag
    norm_f = math.sqrt(norm_f)
    if norm_f == 0.0:
        return 0

    for sweep in range(1, max_sweeps + 1):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                g = a[p, q]
                off += g.real * g.real + g.imag * g.imag
        if math.sqrt(2.0 * off) < tol * norm_f:
            return sweep - 1

        for p in range(n - 1):
            for q in range(p + 1, n):
                g = a[p, q]
                m = abs(g)
                if m == 0.0:
                    continue
                ph = g / m
                app = a[p, p].real
                aqq = a[q, q].real
                tau = (aqq - app) / (2.0 * m)
                if tau >= 0.0:
                    t = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c

                a[p, p] = app - t * m
                a[q, q] = aqq + t * m
                a[p, q] = 0.0
                a[q, p] = 0.0
                phc = ph.conjugate()
                for k in range(n):
                    if k == p or k == q:
                        continue
                    apk = a[k, p]
                    aqk = a[k, q]
                    a[k, p] = c * apk - s * phc * aqk
                    a[k, q] = s * apk + c * phc * aqk
                    a[p, k] = a[k, p].conjugate()
                    a[q, k] = a[k, q].conjugate()
                for k in range(n):
                    apk = v[k, p]
                    aqk = v[k, q]
                    v[k, p] = c * apk - s * phc * aqk
                    v[k, q] = s * apk + c * phc * aqk
    return -1
