"""Spectral projection kernel of the oscillator eigenvalue n + 2m, computed
two ways: the direct tensor-Hermite sum over all |alpha| = m, and the polar
zonal-collapsed sum with floor(m/2) + 1 terms.  Their pointwise equality is
the library's central certified identity, and the term-count asymmetry is
exposed as a benchmark.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import ResourceLimitError
from .harmonics import zonal
from .special_functions import hermite_table, laguerre_fn_table

__all__ = [
    "KernelResult",
    "multi_indices",
    "multi_index_count",
    "phi_direct",
    "phi_polar",
    "phi_direct_values",
    "phi_polar_values",
    "polar_term_count",
    "BenchRecord",
    "kernel_bench",
]

_INDEX_CAP = 10**7

# Above this level the polar term (two Laguerre factors times (ru)^s times a
# zonal value) is combined in log space before exponentiation.
_LOG_SPACE_LEVEL = 30


class KernelResult(NamedTuple):
    value: float
    terms_evaluated: int
    method: str


def multi_index_count(n: int, m: int) -> int:
    """Number of alpha in N^n with |alpha| = m: C(m+n-1, n-1)."""
    return math.comb(m + n - 1, n - 1)


def multi_indices(n: int, m: int) -> list[tuple[int, ...]]:
    """All multi-indices of length m in n variables, leading entry largest
    first (the order of (2,0), (1,1), (0,2) for n = 2, m = 2)."""
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    if m < 0:
        raise ValueError(f"level must be nonnegative, got {m}")
    count = multi_index_count(n, m)
    if count > _INDEX_CAP:
        raise ResourceLimitError(
            f"{count} multi-indices for (n={n}, m={m}) exceeds cap {_INDEX_CAP}"
        )
    return list(_gen(n, m))


def _gen(n, m):
    if n == 1:
        yield (m,)
        return
    for head in range(m, -1, -1):
        for tail in _gen(n - 1, m - head):
            yield (head,) + tail


def _index_array(n, m):
    return np.array(multi_indices(n, m), dtype=np.intp).reshape(-1, n)


def _check_points(n, x, y):
    x = np.asarray(x, dtype=float).reshape(-1, n)
    y = np.asarray(y, dtype=float).reshape(-1, n)
    if x.shape != y.shape:
        raise ValueError("x and y batches must have matching shapes")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise ValueError("kernel arguments must be finite")
    return x, y


def phi_direct_values(n: int, m: int, x, y) -> np.ndarray:
    """Direct kernel sum_{|alpha|=m} h_alpha(x) h_alpha(y) for point batches
    x, y of shape (npts, n)."""
    x, y = _check_points(n, x, y)
    alphas = _index_array(n, m)
    tx = hermite_table(m, x.ravel()).reshape(m + 1, -1, n)
    ty = hermite_table(m, y.ravel()).reshape(m + 1, -1, n)
    hx = np.ones((len(alphas), x.shape[0]))
    hy = np.ones_like(hx)
    for d in range(n):
        hx *= tx[alphas[:, d], :, d]
        hy *= ty[alphas[:, d], :, d]
    return np.einsum("ap,ap->p", hx, hy)


def phi_direct(n: int, m: int, x, y) -> KernelResult:
    """Kernel of the projection onto eigenvalue n + 2m by the direct
    Hermite sum; symmetric in (x, y)."""
    if m < 0:
        raise ValueError(f"level must be nonnegative, got {m}")
    vals = phi_direct_values(n, m, x, y)
    return KernelResult(float(vals[0]), multi_index_count(n, m), "direct")


def polar_term_count(m: int) -> int:
    return m // 2 + 1


def _signed_log(values):
    out = np.full(values.shape, -np.inf)
    nz = values != 0
    out[nz] = np.log(np.abs(values[nz]))
    return out, np.sign(values)


def phi_polar_values(n: int, m: int, x, y) -> np.ndarray:
    """Polar kernel sum over k <= floor(m/2) of
    ell_k(r) ell_k(u) (ru)^{m-2k} Z_{m-2k}(x'.y'), with r = |x|, u = |y|.

    At r = 0 or u = 0 only the degree-0 summand survives (the continuous
    limit); for n = 1 the summands of harmonic degree >= 2 vanish
    identically because those harmonic spaces are trivial.
    """
    x, y = _check_points(n, x, y)
    r = np.linalg.norm(x, axis=1)
    u = np.linalg.norm(y, axis=1)
    ru = r * u
    dot = np.sum(x * y, axis=1)
    t = np.divide(dot, ru, out=np.zeros_like(ru), where=ru > 0)
    t = np.clip(t, -1.0, 1.0)
    total = np.zeros_like(ru)
    log_space = m > _LOG_SPACE_LEVEL
    both = np.concatenate([r, u])
    for k in range(m // 2 + 1):
        s = m - 2 * k
        if n == 1 and s > 1:
            continue
        beta = n / 2.0 - 1.0 + s
        ell = laguerre_fn_table(k, beta, both)[k]
        lr, lu = ell[: len(r)], ell[len(r) :]
        z = np.asarray(zonal(n, s, t))
        if s == 0:
            total += lr * lu * z
        elif log_space:
            factors = np.stack([lr, lu, z])
            logs, signs = _signed_log(factors)
            pos = ru > 0
            logsum = np.sum(logs, axis=0) + s * np.log(np.where(pos, ru, 1.0))
            term = np.prod(signs, axis=0) * np.exp(logsum)
            total += np.where(pos, term, 0.0)
        else:
            total += lr * lu * ru**s * z
    return total


def phi_polar(n: int, m: int, x, y) -> KernelResult:
    """Kernel of the projection onto eigenvalue n + 2m by the zonal-collapsed
    polar sum; floor(m/2) + 1 terms regardless of n."""
    if m < 0:
        raise ValueError(f"level must be nonnegative, got {m}")
    vals = phi_polar_values(n, m, x, y)
    return KernelResult(float(vals[0]), polar_term_count(m), "polar")


@dataclass(frozen=True)
class BenchRecord:
    n: int
    m: int
    method: str
    terms: int
    nanos_per_eval: float
    max_rel_diff: float


def kernel_bench(n: int, m: int, trials: int, seed: int = 0) -> list[BenchRecord]:
    """Time both kernel evaluations over seeded random point pairs and
    report term counts plus the worst relative discrepancy,
    |direct - polar| / (1 + |direct|)."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    x = rng.uniform(-3.0, 3.0, size=(trials, n))
    y = rng.uniform(-3.0, 3.0, size=(trials, n))
    timings = {}
    values = {}
    for method, fn in (("direct", phi_direct_values), ("polar", phi_polar_values)):
        t0 = time.perf_counter_ns()
        values[method] = fn(n, m, x, y)
        timings[method] = (time.perf_counter_ns() - t0) / trials
    rel = np.abs(values["direct"] - values["polar"]) / (1.0 + np.abs(values["direct"]))
    max_rel = float(rel.max())
    return [
        BenchRecord(n, m, "direct", multi_index_count(n, m), timings["direct"], max_rel),
        BenchRecord(n, m, "polar", polar_term_count(m), timings["polar"], max_rel),
    ]
