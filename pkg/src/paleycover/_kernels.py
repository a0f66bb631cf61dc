"""Hot counting loops, compiled with numba when available.

Set ``PALEYCOVER_DISABLE_NUMBA=1`` to force the pure-numpy path. Both paths
are always importable as ``*_numpy`` / ``*_numba`` so they can be compared.
"""
from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and os.environ.get("PALEYCOVER_DISABLE_NUMBA", "0") not in ("1", "true", "yes")


def theta_counts_numpy(tr_sq: np.ndarray, volt_sq: np.ndarray, p: int, ell: int) -> np.ndarray:
    """Exponent counts of the character sums over the squares.

    ``tr_sq[a, j]`` is ``tr(a * s_j)`` and ``volt_sq[j]`` the voltage of
    ``s_j``. Returns ``counts[a, k, u, v]``, the number of squares with
    ``tr(a s) = u`` and ``k * alpha(s) = v (mod ell)``.
    """
    q = tr_sq.shape[0]
    ks = np.arange(ell)
    v = (ks[:, None] * volt_sq[None, :]) % ell  # (ell, m)
    flat = tr_sq[:, None, :] * ell + v[None, :, :]  # (q, ell, m)
    offs = (np.arange(q * ell) * (p * ell)).reshape(q, ell, 1)
    counts = np.bincount((flat + offs).ravel(), minlength=q * ell * p * ell)
    return counts.reshape(q, ell, p, ell).astype(np.int64)


def m_counts_numpy(trace_products: np.ndarray, fvals: np.ndarray, p: int) -> np.ndarray:
    """``counts[x, y, u] = #{a : tr(f(a) y - a x) = u}``."""
    q = trace_products.shape[0]
    tf = trace_products[fvals]  # tf[a, y] = tr(f(a) y)
    counts = np.zeros((q, q, p), dtype=np.int64)
    for x in range(q):
        d = (tf - trace_products[:, x][:, None]) % p  # (a, y)
        for u in range(p):
            counts[x, :, u] = (d == u).sum(axis=0)
    return counts


if HAVE_NUMBA:

    @njit(cache=True)
    def theta_counts_numba(tr_sq, volt_sq, p, ell):
        q, m = tr_sq.shape
        counts = np.zeros((q, ell, p, ell), dtype=np.int64)
        for a in range(q):
            for j in range(m):
                u = tr_sq[a, j]
                for k in range(ell):
                    counts[a, k, u, (k * volt_sq[j]) % ell] += 1
        return counts

    @njit(cache=True)
    def m_counts_numba(trace_products, fvals, p):
        q = trace_products.shape[0]
        counts = np.zeros((q, q, p), dtype=np.int64)
        for x in range(q):
            for a in range(q):
                tax = trace_products[a, x]
                fa = fvals[a]
                for y in range(q):
                    u = (trace_products[fa, y] - tax) % p
                    counts[x, y, u] += 1
        return counts

else:  # pragma: no cover
    theta_counts_numba = theta_counts_numpy
    m_counts_numba = m_counts_numpy


def theta_counts(tr_sq, volt_sq, p, ell):
    tr_sq = np.ascontiguousarray(tr_sq, dtype=np.int64)
    volt_sq = np.ascontiguousarray(volt_sq, dtype=np.int64)
    if USE_NUMBA:
        return theta_counts_numba(tr_sq, volt_sq, p, ell)
    return theta_counts_numpy(tr_sq, volt_sq, p, ell)


def m_counts(trace_products, fvals, p):
    trace_products = np.ascontiguousarray(trace_products, dtype=np.int64)
    fvals = np.ascontiguousarray(fvals, dtype=np.int64)
    if USE_NUMBA:
        return m_counts_numba(trace_products, fvals, p)
    return m_counts_numpy(trace_products, fvals, p)


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"
