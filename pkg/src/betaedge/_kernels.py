"""Jitted O(n^2) pairwise sums for the particle SDE drifts.

The pairwise terms are antisymmetric in (i, j), so each pair is visited
once and pushed to both rows with opposite signs.
"""

import numba
import numpy as np


@numba.njit(cache=True, fastmath=False)
def pairwise_reciprocal(x):
    """out_i = sum_{j != i} 1/(x_i - x_j)."""
    n = x.size
    out = np.zeros(n)
    for i in range(n):
        for j in range(i + 1, n):
            v = 1.0 / (x[i] - x[j])
            out[i] += v
            out[j] -= v
    return out


@numba.njit(cache=True, fastmath=False)
def pairwise_weighted(x, f):
    """out_i = sum_{j != i} (f_i + f_j)/(x_i - x_j)."""
    n = x.size
    out = np.zeros(n)
    for i in range(n):
        for j in range(i + 1, n):
            v = (f[i] + f[j]) / (x[i] - x[j])
            out[i] += v
            out[j] -= v
    return out


@numba.njit(cache=True, fastmath=False)
def polyval(coeffs, x):
    out = np.zeros(x.size)
    for k in range(coeffs.size - 1, -1, -1):
        out = out * x + coeffs[k]
    return out


@numba.njit(cache=True, fastmath=False)
def stieltjes_sums(x, wr, wi, max_order):
    """S_k(w) = sum_i 1/(x_i - w)^{k+1} for k = 0..max_order at each
    complex w = wr + i wi; returns array (n_w, max_order+1) complex."""
    nw = wr.size
    out = np.zeros((nw, max_order + 1), dtype=np.complex128)
    for a in range(nw):
        w = complex(wr[a], wi[a])
        for i in range(x.size):
            inv = 1.0 / (x[i] - w)
            p = inv
            for k in range(max_order + 1):
                out[a, k] += p
                p *= inv
    return out


@numba.njit(cache=True, fastmath=False)
def pairwise_cross(x):
    """out_i = sum_{j != i} (x_i + x_j - 2 x_i x_j)/(x_i - x_j); the
    numerator is x_i(1-x_j) + x_j(1-x_i)."""
    n = x.size
    out = np.zeros(n)
    for i in range(n):
        for j in range(i + 1, n):
            v = (x[i] + x[j] - 2.0 * x[i] * x[j]) / (x[i] - x[j])
            out[i] += v
            out[j] -= v
    return out
