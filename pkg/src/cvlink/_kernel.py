"""Compiled inner loop for repeated single-quadrature probing steps."""

import numba
import numpy as np


@numba.njit(cache=True)
def run_passes(a, sa, q, n_steps):  # pragma: no cover - compiled
    """Apply ``len(sa)`` probing passes ``n_steps`` times to the atomic covariance ``a`` in place.

    Pass ``j`` maps ``a`` to ``M = sa[j] a sa[j]^T + q[j]`` (last row/column is
    the detected quadrature) and eliminates that quadrature by a Schur
    complement. A zero detected variance leaves ``a`` unconditioned.
    """
    k, n1, na = sa.shape
    m = np.empty((n1, n1))
    tmp = np.empty((n1, na))
    for _ in range(n_steps):
        for j in range(k):
            s = sa[j]
            for i in range(n1):
                for col in range(na):
                    acc = 0.0
                    for u in range(na):
                        acc += s[i, u] * a[u, col]
                    tmp[i, col] = acc
            for i in range(n1):
                for col in range(i, n1):
                    acc = q[j, i, col]
                    for u in range(na):
                        acc += tmp[i, u] * s[col, u]
                    m[i, col] = acc
                    m[col, i] = acc
            b = m[na, na]
            for i in range(na):
                for col in range(na):
                    if b != 0.0:
                        a[i, col] = m[i, col] - m[i, na] * m[col, na] / b
                    else:
                        a[i, col] = m[i, col]
    return a
