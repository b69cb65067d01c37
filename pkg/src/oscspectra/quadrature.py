"""Gauss-type quadrature rules for every integral the identity suites need:
a Gaussian-weight line rule, generalized radial rules for r^{2 beta + 1} dr
integrals, sphere rules for n in {1, 2, 3}, and tensor assembly on R^n.

Convention: integrands are supplied with their Gaussian factor included and
the rules divide the weight function out internally, so applying a rule to a
raw evaluator approximates the integral against the rule's plain measure
(dx on the line and on R^n, r^{2 beta + 1} dr radially, dsigma on the
sphere).  This avoids double-counting exp(-r^2) between Laguerre-type
functions and the weight.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import ContractViolationError, ResourceLimitError

__all__ = [
    "QuadratureRule",
    "gauss_hermite",
    "gauss_radial",
    "gauss_legendre",
    "radial_rule_compact",
    "sphere_rule",
    "tensor_rule",
    "LINE_N",
    "RADIAL_N",
]

# Default sizes: every identity test in the suite is band-limited enough for
# these to integrate it exactly.
LINE_N = 64
RADIAL_N = 80

_TENSOR_CAP = 10**7


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights with a domain descriptor.

    nodes has shape (npts,) for line/radial rules and (npts, n) for sphere
    and tensor rules.  weights are strictly positive and include the
    reciprocal of the rule's weight function at each node, so that
    ``rule.integrate(f)`` approximates the integral of a raw evaluator f
    against the rule's measure.
    """

    nodes: np.ndarray
    weights: np.ndarray
    domain_tag: str
    exactness_degree: int
    line: Optional["QuadratureRule"] = field(default=None, repr=False)
    ndim: int = 1

    def __post_init__(self):
        if len(self.nodes) != len(self.weights):
            raise ValueError("node/weight length mismatch")
        if np.any(self.weights <= 0) or not np.all(np.isfinite(self.weights)):
            raise ValueError(f"weights must be positive and finite ({self.domain_tag})")

    def integrate(self, fn: Callable) -> float:
        vals = np.asarray(fn(self.nodes), dtype=float)
        return float(self.weights @ vals)

    def to_csv(self, target) -> None:
        """Serialize as CSV: comment header, then x1[,x2,..],weight rows."""
        own = isinstance(target, (str, bytes)) or hasattr(target, "__fspath__")
        fh = open(target, "w", encoding="utf-8", newline="\n") if own else target
        try:
            pts = self.nodes.reshape(len(self.weights), -1)
            fh.write(f"# domain: {self.domain_tag}\n")
            fh.write(f"# exactness_degree: {self.exactness_degree}\n")
            fh.write(",".join(f"x{d + 1}" for d in range(pts.shape[1])) + ",weight\n")
            for row, w in zip(pts, self.weights):
                fh.write(",".join(repr(float(v)) for v in row) + f",{float(w)!r}\n")
        finally:
            if own:
                fh.close()


def _orthonormal_values(x, n_terms, a_fn, b_fn, mu0):
    """Orthonormal-polynomial values p_0..p_{n_terms} and p'_{n_terms} at x.

    Recurrence b_{k+1} p_{k+1} = (x - a_k) p_k - b_k p_{k-1},
    p_0 = mu0^{-1/2}.
    """
    x = np.asarray(x, dtype=float)
    p = np.empty((n_terms + 1,) + x.shape)
    dp = np.empty_like(p)
    p[0] = mu0 ** -0.5
    dp[0] = 0.0
    prev = np.zeros_like(x)
    dprev = np.zeros_like(x)
    for k in range(n_terms):
        bk1 = b_fn(k + 1)
        p[k + 1] = ((x - a_fn(k)) * p[k] - b_fn(k) * prev) / bk1
        dp[k + 1] = ((x - a_fn(k)) * dp[k] + p[k] - b_fn(k) * dprev) / bk1
        prev, dprev = p[k], dp[k]
    return p, dp


def _golub_welsch(n, a_fn, b_fn, mu0):
    """Gauss nodes/weights for the orthonormal family (a_k, b_k, mu0).

    Symmetric-tridiagonal eigensolve plus one Newton polish step on the
    degree-n orthonormal polynomial; weights from the Christoffel function,
    1 / sum_{k<n} p_k(x_i)^2.
    """
    diag = np.array([a_fn(k) for k in range(n)], dtype=float)
    off = np.array([b_fn(k) for k in range(1, n)], dtype=float)
    nodes, _ = eigh_tridiagonal(diag, off)
    p, dp = _orthonormal_values(nodes, n, a_fn, b_fn, mu0)
    nodes = nodes - p[n] / dp[n]
    p, _ = _orthonormal_values(nodes, n, a_fn, b_fn, mu0)
    weights = 1.0 / np.sum(p[:n] ** 2, axis=0)
    return nodes, weights


def gauss_hermite(n: int) -> QuadratureRule:
    """n-point Gauss rule on the line, exact for p(x) e^{-x^2}, deg p <= 2n-1.

    Stored weights carry the e^{x^2} factor, so raw Gaussian-decay
    evaluators integrate against plain dx.
    """
    if n < 1:
        raise ValueError("gauss_hermite requires n >= 1")
    nodes, w = _golub_welsch(n, lambda k: 0.0, lambda k: math.sqrt(k / 2.0), math.sqrt(math.pi))
    # enforce exact symmetry about the origin
    nodes = 0.5 * (nodes - nodes[::-1])
    w = 0.5 * (w + w[::-1])
    weights = w * np.exp(nodes * nodes)
    return QuadratureRule(nodes, weights, "gauss_hermite_line", 2 * n - 1)


def gauss_radial(n: int, beta: float) -> QuadratureRule:
    """n-point rule for integrals over (0, inf) against r^{2 beta + 1} dr.

    Built from the generalized Gauss-Laguerre rule of parameter beta via
    t = r^2 (an extra factor 1/2); exact whenever the integrand equals
    p(r^2) e^{-r^2} with deg p <= 2n-1.
    """
    if n < 1:
        raise ValueError("gauss_radial requires n >= 1")
    beta = float(beta)
    if not beta > -1.0:
        raise ValueError(f"gauss_radial requires beta > -1, got {beta}")
    mu0 = math.exp(math.lgamma(beta + 1.0))
    t, w = _golub_welsch(
        n,
        lambda k: 2 * k + beta + 1,
        lambda k: math.sqrt(k * (k + beta)),
        mu0,
    )
    nodes = np.sqrt(t)
    weights = 0.5 * w * np.exp(t)
    return QuadratureRule(nodes, weights, f"radial(beta={beta:g})", 2 * n - 1)


def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes/weights on [-1, 1] (weight function 1)."""
    if n < 1:
        raise ValueError("gauss_legendre requires n >= 1")
    return _golub_welsch(
        n, lambda k: 0.0, lambda k: k / math.sqrt(4.0 * k * k - 1.0) if k else 0.0, 2.0
    )


def radial_rule_compact(n: int, radius: float, panels: int = 4) -> QuadratureRule:
    """Composite Gauss-Legendre rule on [0, radius] against plain dr.

    Used for coefficient extraction of compactly supported fields, where the
    Laguerre-weight rule places its nodes far outside the support.  Radial
    measure factors (r^{n-1+s}) are applied by the caller.
    """
    if radius <= 0:
        raise ValueError("radius must be positive")
    if panels < 1:
        raise ValueError("panels must be >= 1")
    x, w = gauss_legendre(n)
    edges = np.linspace(0.0, radius, panels + 1)
    nodes = np.concatenate([(0.5 * (b - a)) * x + 0.5 * (a + b) for a, b in zip(edges, edges[1:])])
    weights = np.concatenate([(0.5 * (b - a)) * w for a, b in zip(edges, edges[1:])])
    return QuadratureRule(nodes, weights, f"radial_compact(R={radius:g})", 2 * n - 1)


def sphere_rule(n: int, degree: int) -> QuadratureRule:
    """Quadrature on the unit sphere in R^n against surface measure.

    n=1: the exact two-point counting rule on {-1, +1}.
    n=2: uniform (degree+1)-point circle rule, exact through trigonometric
         degree ``degree``.
    n=3: Gauss-Legendre in the polar cosine times uniform azimuth, exact for
         spherical polynomials of degree <= ``degree``.
    """
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    if n == 1:
        nodes = np.array([[-1.0], [1.0]])
        weights = np.array([1.0, 1.0])
        return QuadratureRule(nodes, weights, "sphere(1)", max(degree, 1), ndim=1)
    if n == 2:
        m = degree + 1
        theta = 2.0 * math.pi * np.arange(m) / m
        nodes = np.column_stack([np.cos(theta), np.sin(theta)])
        weights = np.full(m, 2.0 * math.pi / m)
        return QuadratureRule(nodes, weights, "sphere(2)", degree, ndim=2)
    if n == 3:
        nz = (degree + 2) // 2
        nphi = degree + 1
        z, wz = gauss_legendre(nz)
        phi = 2.0 * math.pi * np.arange(nphi) / nphi
        rho = np.sqrt(1.0 - z * z)
        x = np.outer(rho, np.cos(phi)).ravel()
        y = np.outer(rho, np.sin(phi)).ravel()
        zz = np.repeat(z, nphi)
        nodes = np.column_stack([x, y, zz])
        weights = np.repeat(wz * (2.0 * math.pi / nphi), nphi)
        return QuadratureRule(nodes, weights, "sphere(3)", degree, ndim=3)
    raise ValueError(f"sphere_rule supports n in {{1, 2, 3}}, got n={n}")


def tensor_rule(line: QuadratureRule, n: int) -> QuadratureRule:
    """n-fold product of a gauss_hermite line rule; N^n nodes, capped at 1e7."""
    if line.domain_tag != "gauss_hermite_line":
        raise ContractViolationError("tensor_rule requires a gauss_hermite line rule")
    if n < 1:
        raise ValueError("tensor dimension must be >= 1")
    npts = len(line.nodes)
    total = npts**n
    if total > _TENSOR_CAP:
        raise ResourceLimitError(f"tensor rule would have {total} nodes (cap {_TENSOR_CAP})")
    grids = np.meshgrid(*([line.nodes] * n), indexing="ij")
    nodes = np.column_stack([g.ravel() for g in grids])
    wgrids = np.meshgrid(*([line.weights] * n), indexing="ij")
    weights = np.ones(total)
    for g in wgrids:
        weights = weights * g.ravel()
    return QuadratureRule(nodes, weights, f"tensor({n})", line.exactness_degree, line=line, ndim=n)
