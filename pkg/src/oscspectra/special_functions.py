"""Stable evaluation of the classical families behind both oscillator
eigenbases: Laguerre polynomials and functions, orthonormal Hermite
functions, and Gegenbauer polynomials.

All evaluators are pure, vectorized over the argument, and run their
three-term recurrences on the normalized functions directly, so no bare
polynomial value or Gamma ratio is ever formed; this keeps k up to a few
hundred inside double-precision range.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DimensionMismatchError

__all__ = [
    "laguerre_poly",
    "laguerre_fn",
    "laguerre_fn_table",
    "hermite_fn",
    "hermite_table",
    "hermite_fn_multi",
    "gegenbauer",
]


def check_laguerre_order(beta: float) -> float:
    """Validate a Laguerre order; the family requires beta > -1."""
    beta = float(beta)
    if not beta > -1.0:
        raise ValueError(f"Laguerre order must satisfy beta > -1, got {beta}")
    return beta


def _check_degree(k: int) -> int:
    if int(k) != k or k < 0:
        raise ValueError(f"degree must be a nonnegative integer, got {k}")
    return int(k)


def _as_float_array(x):
    arr = np.asarray(x, dtype=float)
    return arr, arr.ndim == 0


def laguerre_poly(k: int, beta: float, t):
    """Laguerre polynomial L_k^beta(t), normalized so L_k^beta(0) = C(k+beta, k).

    Uses the forward recurrence
        (k+1) L_{k+1} = (2k+beta+1-t) L_k - (k+beta) L_{k-1},
    which is stable on t >= 0 where all quadrature nodes live.
    """
    k = _check_degree(k)
    beta = check_laguerre_order(beta)
    t, scalar = _as_float_array(t)
    if np.any(t < 0):
        raise ValueError("laguerre_poly requires t >= 0")
    prev = np.zeros_like(t)
    cur = np.ones_like(t)
    for j in range(k):
        prev, cur = cur, ((2 * j + beta + 1 - t) * cur - (j + beta) * prev) / (j + 1)
    return float(cur) if scalar else cur


def laguerre_fn_table(kmax: int, beta: float, r) -> np.ndarray:
    """Values ell_k^beta(r) for k = 0..kmax, shape (kmax+1,) + r.shape.

    ell_k^beta(r) = sqrt(2 k! / Gamma(k+beta+1)) L_k^beta(r^2) exp(-r^2/2),
    orthonormal in L2((0,inf), r^{2 beta + 1} dr).  The recurrence runs on
    the normalized values themselves,
        ell_{k+1} = [(2k+beta+1-t) ell_k - sqrt(k(k+beta)) ell_{k-1}]
                    / sqrt((k+1)(k+1+beta)),   t = r^2,
    seeded through log-Gamma so nothing overflows.
    """
    kmax = _check_degree(kmax)
    beta = check_laguerre_order(beta)
    r, _ = _as_float_array(r)
    if np.any(r < 0):
        raise ValueError("laguerre_fn is defined for r >= 0")
    t = r * r
    out = np.empty((kmax + 1,) + t.shape, dtype=float)
    out[0] = np.exp(0.5 * (math.log(2.0) - math.lgamma(beta + 1.0)) - 0.5 * t)
    if kmax >= 1:
        prev = np.zeros_like(t)
        cur = out[0]
        for k in range(kmax):
            nxt = ((2 * k + beta + 1 - t) * cur - math.sqrt(k * (k + beta)) * prev)
            nxt /= math.sqrt((k + 1) * (k + 1 + beta))
            prev, cur = cur, nxt
            out[k + 1] = cur
    return out


def laguerre_fn(k: int, beta: float, r):
    """Laguerre function ell_k^beta(r); r = 0 is the continuous extension."""
    r, scalar = _as_float_array(r)
    val = laguerre_fn_table(k, beta, r)[k]
    return float(val) if scalar else val


def hermite_table(kmax: int, x) -> np.ndarray:
    """Orthonormal Hermite-function values h_k(x), k = 0..kmax.

    h_k(x) = (2^k k! sqrt(pi))^{-1/2} H_k(x) exp(-x^2/2) with physicists'
    H_k, evaluated by the normalized recurrence
        h_{k+1} = x sqrt(2/(k+1)) h_k - sqrt(k/(k+1)) h_{k-1}.
    """
    kmax = _check_degree(kmax)
    x, _ = _as_float_array(x)
    out = np.empty((kmax + 1,) + x.shape, dtype=float)
    out[0] = math.pi ** -0.25 * np.exp(-0.5 * x * x)
    if kmax >= 1:
        prev = np.zeros_like(x)
        cur = out[0]
        for k in range(kmax):
            prev, cur = cur, x * math.sqrt(2.0 / (k + 1)) * cur - math.sqrt(k / (k + 1.0)) * prev
            out[k + 1] = cur
    return out


def hermite_fn(k: int, x):
    """Orthonormal Hermite function h_k(x) on the line."""
    x, scalar = _as_float_array(x)
    val = hermite_table(k, x)[k]
    return float(val) if scalar else val


def hermite_fn_multi(alpha, x):
    """Tensor Hermite function: the product of h_{alpha_i}(x_i) over axes.

    x may be a single point of length n or an array of shape (npts, n).
    """
    alpha = tuple(int(a) for a in alpha)
    if any(a < 0 for a in alpha):
        raise ValueError(f"multi-index entries must be nonnegative, got {alpha}")
    n = len(alpha)
    pts = np.asarray(x, dtype=float)
    single = pts.ndim == 1
    pts = np.atleast_2d(pts)
    if pts.shape[1] != n:
        raise DimensionMismatchError(
            f"point dimension {pts.shape[1]} != multi-index dimension {n}"
        )
    table = hermite_table(max(alpha), pts.ravel()).reshape((-1,) + pts.shape)
    vals = np.ones(pts.shape[0])
    for d, a in enumerate(alpha):
        vals = vals * table[a, :, d]
    return float(vals[0]) if single else vals


def gegenbauer(s: int, lam: float, t):
    """Gegenbauer polynomial C_s^lam(t) in the generating-function
    normalization: C_0 = 1, C_1 = 2 lam t,
        s C_s = 2 t (s+lam-1) C_{s-1} - (s+2 lam-2) C_{s-2}.
    """
    s = _check_degree(s)
    lam = float(lam)
    if not lam > 0:
        raise ValueError(f"Gegenbauer parameter must be positive, got {lam}")
    t, scalar = _as_float_array(t)
    if np.any(np.abs(t) > 1 + 1e-12):
        raise ValueError("gegenbauer argument must lie in [-1, 1]")
    prev = np.ones_like(t)
    if s == 0:
        return float(prev) if scalar else prev
    cur = 2.0 * lam * t
    for j in range(2, s + 1):
        prev, cur = cur, (2 * t * (j + lam - 1) * cur - (j + 2 * lam - 2) * prev) / j
    return float(cur) if scalar else cur
