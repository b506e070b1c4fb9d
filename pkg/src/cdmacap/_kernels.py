"""Compiled inner loops for exhaustive codeword enumeration.

Codeword index i maps to bit pattern g = i ^ (i >> 1); bit k of g set
means x_k = +1, clear means x_k = -1.  Consecutive indices differ in
exactly one bit, the lowest set bit of i.
"""

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def init_state(c, g):
    """Bits and interference fields f_k = sum_{i != k} c[k, i] x_i for pattern g."""
    K = c.shape[0]
    x = np.empty(K, np.int64)
    f = np.zeros(K, np.int64)
    for k in range(K):
        x[k] = 1 if (g >> k) & 1 else -1
    for k in range(K):
        s = 0
        for i in range(K):
            if i != k:
                s += c[k, i] * x[i]
        f[k] = s
    return x, f


@njit(cache=True, nogil=True)
def gray_walk(c, min_field, start, stop):
    """Count valid codewords over Gray indices [start, stop).

    A codeword is valid when x_k * f_k >= min_field for every k.  The
    number of violated constraints is maintained incrementally, so each
    step costs O(K) integer operations.  Returns the count together with
    the bits and fields of the last codeword visited.
    """
    K = c.shape[0]
    x, f = init_state(c, start ^ (start >> 1))
    viol = 0
    for k in range(K):
        if x[k] * f[k] < min_field:
            viol += 1
    count = 1 if viol == 0 else 0
    for idx in range(start + 1, stop):
        j = 0
        while not (idx >> j) & 1:
            j += 1
        fj = f[j]
        before = 1 if x[j] * fj < min_field else 0
        xj = -x[j]
        x[j] = xj
        viol += (1 if xj * fj < min_field else 0) - before
        step = 2 * xj
        for k in range(K):
            if k != j:
                xk = x[k]
                fk = f[k]
                before = 1 if xk * fk < min_field else 0
                fk += step * c[k, j]
                f[k] = fk
                viol += (1 if xk * fk < min_field else 0) - before
        if viol == 0:
            count += 1
    return count, x, f
