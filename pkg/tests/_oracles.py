"""Independent oracles for the test suite: power-series evaluations and
finite-difference residuals, kept deliberately separate from the recurrence
implementations they check.

The series run in exact rational arithmetic (the orders used in the tests
are rational and a float argument is an exact binary rational), so the
oracle carries no cancellation error of its own."""

import math
from fractions import Fraction

import numpy as np


def laguerre_series(k, beta, t):
    """L_k^beta(t) = sum_i (-1)^i C(k+beta, k-i) t^i / i!  (series form)."""
    beta = Fraction(beta)
    t = Fraction(t)
    total = Fraction(0)
    for i in range(k + 1):
        binom = Fraction(1)
        for j in range(1, k - i + 1):
            binom *= (beta + i + j) / j
        total += (-1) ** i * binom * t**i / math.factorial(i)
    return float(total)


def gegenbauer_series(s, lam, t):
    """C_s^lam(t) from the generating-function expansion."""
    lam = Fraction(lam)
    t = Fraction(t)
    total = Fraction(0)
    for i in range(s // 2 + 1):
        coeff = Fraction(1)
        for j in range(s - i):  # Gamma(s-i+lam)/Gamma(lam) = prod of (lam+j)
            coeff *= lam + j
        coeff /= math.factorial(i) * math.factorial(s - 2 * i)
        total += (-1) ** i * coeff * (2 * t) ** (s - 2 * i)
    return float(total)


def hermite_phys(k, x):
    """Physicists' Hermite polynomial H_k by its plain recurrence."""
    prev, cur = 0.0, 1.0
    for j in range(k):
        prev, cur = cur, 2 * x * cur - 2 * j * prev
    return cur


def fd_second(fn, x, h):
    """Fourth-order central second derivative."""
    return (-fn(x + 2 * h) + 16 * fn(x + h) - 30 * fn(x) + 16 * fn(x - h) - fn(x - 2 * h)) / (
        12 * h * h
    )


def fd_first(fn, x, h):
    """Fourth-order central first derivative."""
    return (-fn(x + 2 * h) + 8 * fn(x + h) - 8 * fn(x - h) + fn(x - 2 * h)) / (12 * h)


def fd_laplacian(fn, pts, h):
    """Fourth-order Laplacian of fn at an (npts, n) array of points."""
    pts = np.atleast_2d(pts)
    total = np.zeros(len(pts))
    for d in range(pts.shape[1]):
        def along(offset, d=d):
            shifted = pts.copy()
            shifted[:, d] += offset
            return fn(shifted)

        total += (
            -along(2 * h) + 16 * along(h) - 30 * fn(pts) + 16 * along(-h) - along(-2 * h)
        ) / (12 * h * h)
    return total
