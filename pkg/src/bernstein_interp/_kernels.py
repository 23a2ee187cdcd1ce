"""Compiled inner loops for the O(n*m) kernel sums.

Every accumulation runs in a fixed index order with Neumaier compensation, so
results are bit-reproducible for identical inputs.
"""

import numba
import numpy as np


@numba.njit(cache=True, nogil=True)
def poisson_sums(px, py, xs):
    """Sum of py[j] / ((x - px[j])**2 + py[j]**2) for every x in xs.

    ``py`` must already hold ``|Im lambda|``.
    """
    m = xs.shape[0]
    n = px.shape[0]
    out = np.empty(m)
    for i in range(m):
        x = xs[i]
        s = 0.0
        c = 0.0
        for j in range(n):
            dx = x - px[j]
            t = py[j] / (dx * dx + py[j] * py[j])
            u = s + t
            if abs(s) >= abs(t):
                c += (s - u) + t
            else:
                c += (t - u) + s
            s = u
        out[i] = s + c
    return out


@numba.njit(cache=True, nogil=True)
def reflected_pair_sums(px, py):
    """For each i: sum over j != i of py[j] / |z_i - conj(z_j)|**2.

    Points are assumed to lie in one half-plane with ``py = |Im z| > 0``, so
    ``|z_i - conj(z_j)|**2 = (px_i - px_j)**2 + (py_i + py_j)**2``.
    """
    n = px.shape[0]
    out = np.empty(n)
    for i in range(n):
        xi = px[i]
        yi = py[i]
        s = 0.0
        c = 0.0
        for j in range(n):
            if j == i:
                continue
            dx = xi - px[j]
            dy = yi + py[j]
            t = py[j] / (dx * dx + dy * dy)
            u = s + t
            if abs(s) >= abs(t):
                c += (s - u) + t
            else:
                c += (t - u) + s
            s = u
        out[i] = s + c
    return out
