"""Coefficient extraction and spectral projection in both eigenbases,
the Hecke-Bochner closed form, the rotation-commutation check, Parseval
defects, and the coefficient-decay probe for compactly supported fields.

Functions enter as pure point-evaluators (ScalarField); nothing is gridded.
Coefficients of a field against the polar basis are computed exactly as the
polar factorization dictates: sphere-integrate f at each radial node to get
F_{s,j}(r), then take the radial inner product against ell_k with the r^s
factor folded into the radial weight (never dividing F by r^s).
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, Optional, Tuple

import numpy as np

from .errors import ContractViolationError, IntegrabilityError
from .fields import ScalarField, polar_eigenvalue
from .harmonics import SolidHarmonic, sph_basis
from .kernels import multi_indices
from .quadrature import (
    LINE_N,
    RADIAL_N,
    QuadratureRule,
    gauss_hermite,
    gauss_radial,
    radial_rule_compact,
    sphere_rule,
    tensor_rule,
)
from .special_functions import hermite_table, laguerre_fn_table

__all__ = [
    "PolarIndex",
    "SpectralCoefficients",
    "hermite_coeffs",
    "polar_coeffs",
    "project",
    "hecke_bochner",
    "rotation_commutes",
    "coefficient_decay_probe",
    "DecayProbe",
    "parseval_check",
    "field_norm_sq",
    "fd_oscillator_apply",
    "eigen_order_study",
    "default_radial_rules",
]

# Nodes for the compact-support radial rule (per panel).
_COMPACT_N = 48
_COMPACT_PANELS = 6

# Extra sphere-rule degree beyond the 2*m_max+2 Gram minimum, so fields with
# harmonic content moderately above the truncation still integrate exactly
# (projection below a field's band must see zeros, not aliases).
_SPHERE_BAND_MARGIN = 12


@dataclass(frozen=True)
class PolarIndex:
    """Index (k, s, j) of a polar eigenfunction; eigenvalue n + 2(s + 2k)."""

    k: int
    s: int
    j: int

    def eigenvalue(self, n: int) -> int:
        return polar_eigenvalue(n, self.k, self.s)


@dataclass
class SpectralCoefficients:
    """Expansion coefficients of a field, keyed by multi-index tuples
    (hermite) or (k, s, j) tuples (polar), up to truncation level m_max."""

    n: int
    basis: str
    entries: Dict[tuple, float]
    m_max: int

    def norm_sq(self) -> float:
        return float(sum(v * v for v in self.entries.values()))

    def level_indices(self, m: int) -> list[tuple]:
        if self.basis == "hermite":
            return [a for a in self.entries if sum(a) == m]
        return [(k, s, j) for (k, s, j) in self.entries if s + 2 * k == m]

    def level_norm_sq(self, m: int) -> float:
        return float(sum(self.entries[i] ** 2 for i in self.level_indices(m)))

    def eigenvalue_of(self, index: tuple) -> int:
        if self.basis == "hermite":
            return self.n + 2 * sum(index)
        k, s, _ = index
        return polar_eigenvalue(self.n, k, s)

    def sorted_items(self):
        return sorted(self.entries.items())

    def to_csv(self, target) -> None:
        """Serialize as CSV: basis, index (semicolon-joined), eigenvalue, value."""
        own = isinstance(target, (str, bytes)) or hasattr(target, "__fspath__")
        fh = open(target, "w", encoding="utf-8", newline="\n") if own else target
        try:
            fh.write("basis,index,eigenvalue,value\n")
            for index, value in self.sorted_items():
                joined = ";".join(str(i) for i in index)
                fh.write(f"{self.basis},{joined},{self.eigenvalue_of(index)},{float(value)!r}\n")
        finally:
            if own:
                fh.close()


def _thread_cap() -> int:
    raw = os.environ.get("OSC_SPECTRA_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _fanout(fn: Callable, items):
    cap = _thread_cap()
    if cap <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=cap) as pool:
        return list(pool.map(fn, items))


def hermite_coeffs(
    f: ScalarField, m_max: int, rule: Optional[QuadratureRule] = None
) -> SpectralCoefficients:
    """All <f, h_alpha> with |alpha| <= m_max via a tensor Gauss rule.

    The separable structure of the rule collapses the n-dimensional sums to
    one axis contraction per dimension.
    """
    n = f.n
    if n > 3:
        raise ValueError("hermite coefficient extraction is capped at n <= 3")
    if rule is None:
        rule = tensor_rule(gauss_hermite(LINE_N), n)
    if rule.line is None or rule.ndim != n:
        raise ContractViolationError("hermite_coeffs requires a tensor rule of dimension n")
    line = rule.line
    npts = len(line.nodes)
    vals = f(rule.nodes).reshape((npts,) * n)
    a = hermite_table(m_max, line.nodes) * line.weights
    if n == 1:
        c = a @ vals
    elif n == 2:
        c = np.einsum("ai,bj,ij->ab", a, a, vals, optimize=True)
    else:
        c = np.einsum("ai,bj,ck,ijk->abc", a, a, a, vals, optimize=True)
    entries = {alpha: float(c[alpha]) for m in range(m_max + 1) for alpha in multi_indices(n, m)}
    return SpectralCoefficients(n, "hermite", entries, m_max)


def _degree_range(n: int, m_max: int):
    top = min(1, m_max) if n == 1 else m_max
    return range(top + 1)


def default_radial_rules(
    n: int, m_max: int, support_radius: Optional[float] = None, radial_n: int = RADIAL_N
) -> Dict[int, QuadratureRule]:
    """Radial rule per harmonic degree s.

    Gaussian-decay fields get the generalized Laguerre-type rule of order
    beta = n/2 - 1 + s; compactly supported fields get a composite
    Gauss-Legendre rule on [0, R], whose nodes actually cover the support.
    """
    if support_radius is not None:
        rule = radial_rule_compact(_COMPACT_N, support_radius, panels=_COMPACT_PANELS)
        return {s: rule for s in _degree_range(n, m_max)}
    return {s: gauss_radial(radial_n, n / 2.0 - 1.0 + s) for s in _degree_range(n, m_max)}


def polar_coeffs(
    f: ScalarField,
    m_max: int,
    sphere: Optional[QuadratureRule] = None,
    radial_rules: Optional[Dict[int, QuadratureRule]] = None,
) -> SpectralCoefficients:
    """All <f, phi_{k,s,j}> with s + 2k <= m_max.

    For each degree s, F_{s,j}(r) = <f(r .), Y_{s,j}> is formed by sphere
    quadrature at every radial node, then paired with ell_k^{n/2-1+s}
    radially.  The r^{-s} deprojection of F is folded into the radial
    weight, so no division by a small radius ever happens.
    """
    n = f.n
    if n > 3:
        raise ValueError("polar coefficient extraction needs an explicit basis (n <= 3)")
    if sphere is None:
        sphere = sphere_rule(n, 2 * m_max + 2 + _SPHERE_BAND_MARGIN)
    if radial_rules is None:
        radial_rules = default_radial_rules(n, m_max, f.support_radius)
    entries: Dict[tuple, float] = {}
    sphere_pts = sphere.nodes
    fvals_cache: Dict[int, np.ndarray] = {}

    def values_at_radii(rule: QuadratureRule) -> np.ndarray:
        key = id(rule)
        if key not in fvals_cache:
            pts = (rule.nodes[:, None, None] * sphere_pts[None, :, :]).reshape(-1, n)
            fvals_cache[key] = f(pts).reshape(len(rule.nodes), len(sphere_pts))
        return fvals_cache[key]

    def channel(s: int):
        rule = radial_rules[s]
        basis = sph_basis(n, s)
        ysph = basis.evaluate_all(sphere_pts) * sphere.weights
        fv = values_at_radii(rule)
        fsj = fv @ ysph.T  # (radial, d_s)
        kmax = (m_max - s) // 2
        beta = n / 2.0 - 1.0 + s
        ell = laguerre_fn_table(kmax, beta, rule.nodes)
        if rule.domain_tag.startswith("radial_compact"):
            wfold = rule.weights * rule.nodes ** (n - 1 + s)
        else:
            wfold = rule.weights * rule.nodes ** (-s)
        coeffs = (ell * wfold) @ fsj  # (kmax+1, d_s)
        return s, coeffs

    for s, coeffs in _fanout(channel, list(_degree_range(n, m_max))):
        for k in range((m_max - s) // 2 + 1):
            for j in range(coeffs.shape[1]):
                entries[(k, s, j + 1)] = float(coeffs[k, j])
    return SpectralCoefficients(n, "polar", entries, m_max)


def project(
    f: ScalarField,
    m: int,
    basis: str = "polar",
    coeffs: Optional[SpectralCoefficients] = None,
) -> ScalarField:
    """Point-evaluator of the projection of f onto the eigenvalue n + 2m.

    With precomputed coefficients they must cover level m and match the
    basis; otherwise they are extracted here with m_max = m.
    """
    n = f.n
    if coeffs is None:
        coeffs = hermite_coeffs(f, m) if basis == "hermite" else polar_coeffs(f, m)
    if coeffs.basis != basis:
        raise ContractViolationError(f"coefficients are {coeffs.basis}, requested {basis}")
    if coeffs.m_max < m:
        raise ContractViolationError(f"coefficients truncated at {coeffs.m_max} < level {m}")
    if basis == "hermite":
        level = [(a, coeffs.entries[a]) for a in coeffs.level_indices(m)]

        def fn_h(pts):
            out = np.zeros(len(pts))
            if not level:
                return out
            table = hermite_table(m, pts.ravel()).reshape(-1, len(pts), n)
            for alpha, c in level:
                term = np.full(len(pts), c)
                for d, a in enumerate(alpha):
                    term = term * table[a, :, d]
                out += term
            return out

        return ScalarField(n, fn_h, label=f"proj[m={m},hermite]({f.label})")
    if basis != "polar":
        raise ValueError(f"unknown basis {basis!r}")
    channels = []
    for k in range(m // 2 + 1):
        s = m - 2 * k
        if n == 1 and s > 1:
            continue
        b = sph_basis(n, s)
        cvec = np.array([coeffs.entries.get((k, s, j + 1), 0.0) for j in range(b.dim)])
        channels.append((k, s, b, cvec))

    def fn_p(pts):
        out = np.zeros(len(pts))
        r = np.linalg.norm(pts, axis=1)
        pos = r > 0
        unit = np.zeros_like(pts)
        unit[:, 0] = 1.0
        unit[pos] = pts[pos] / r[pos, None]
        for k, s, b, cvec in channels:
            beta = n / 2.0 - 1.0 + s
            ell = laguerre_fn_table(k, beta, r)[k]
            yvals = cvec @ b.evaluate_all(unit)
            out += ell * r**s * yvals if s else ell * yvals
        return out

    return ScalarField(n, fn_p, label=f"proj[m={m},polar]({f.label})")


def hecke_bochner(
    f0: Callable,
    solid: SolidHarmonic,
    big_k: int,
    radial_rule: Optional[QuadratureRule] = None,
) -> Tuple[float, ScalarField]:
    """Radial coefficient c = <f0, ell_K^{n/2-1+M}> in L2(r^{n-1+2M} dr) and
    the closed-form field c * ell_K(|x|) Y(x).

    The contract: this field equals the projection of f0(|x|) Y(x) onto the
    eigenvalue n + 2(M + 2K), and the projections at every other level of
    matching data vanish.  Divergent radial integrands are rejected by a
    node-tail magnitude check.
    """
    n, big_m = solid.n, solid.degree
    beta = n / 2.0 - 1.0 + big_m
    rule = radial_rule or gauss_radial(RADIAL_N, beta)
    ell = laguerre_fn_table(big_k, beta, rule.nodes)[big_k]
    contrib = rule.weights * np.asarray(f0(rule.nodes), dtype=float) * ell
    scale = max(float(np.abs(contrib).max()), 1e-300)
    tail = float(np.abs(contrib[-3:]).max())
    if tail > 1e-6 * scale:
        raise IntegrabilityError(
            "radial integrand has non-negligible tail contributions; "
            "<f0, ell_K> does not converge on this rule"
        )
    c = float(np.sum(contrib))

    def fn(pts):
        r = np.linalg.norm(pts, axis=1)
        return c * laguerre_fn_table(big_k, beta, r)[big_k] * solid(pts)

    return c, ScalarField(n, fn, label=f"hecke(M={big_m},K={big_k})")


def rotation_commutes(
    f: ScalarField,
    g,
    m: int,
    points=None,
    seed: int = 0,
    extraction_level: Optional[int] = None,
) -> float:
    """Max pointwise discrepancy between projecting f(g .) and rotating the
    projection of f, at level m.  g must be orthogonal to 1e-12.

    Coefficients are extracted at ``extraction_level`` (default m); pass the
    band of f when it exceeds m, so the sphere rule resolves every harmonic
    the field actually carries.
    """
    g = np.asarray(g, dtype=float)
    n = f.n
    if g.shape != (n, n) or np.abs(g.T @ g - np.eye(n)).max() > 1e-12:
        raise ContractViolationError("g must be an orthogonal n x n matrix")
    level = max(m, extraction_level or m)
    rotated = ScalarField(n, lambda p: f(p @ g.T), support_radius=f.support_radius)
    proj_rotated = project(rotated, m, "polar", polar_coeffs(rotated, level))
    proj_plain = project(f, m, "polar", polar_coeffs(f, level))
    if points is None:
        points = np.random.default_rng(seed).uniform(-2.5, 2.5, size=(40, n))
    points = np.atleast_2d(np.asarray(points, dtype=float))
    return float(np.abs(proj_rotated(points) - proj_plain(points @ g.T)).max())


@dataclass
class DecayProbe:
    """Decay table rows (eigenvalue, k, s, max_j |coefficient|) and the
    log-log slope fitted over the top half of the eigenvalue range."""

    n: int
    rows: list
    slope: float
    fit_count: int


def coefficient_decay_probe(phi: ScalarField, levels: int) -> DecayProbe:
    """Tabulate max_j |<phi, phi_{k,s,j}>| against the eigenvalue n+2(s+2k)
    for s + 2k <= levels and fit the decay exponent.

    The slope is the least-squares fit of log max|coef| against log lambda
    over the upper half of the eigenvalue range (the constant in the decay
    bound pollutes small eigenvalues).  Rows whose coefficient is exactly
    zero (parity-annihilated channels at n = 1) stay in the table but
    cannot enter the log fit.
    """
    coeffs = polar_coeffs(phi, levels)
    n = phi.n
    by_ks: Dict[Tuple[int, int], float] = {}
    for (k, s, _j), v in coeffs.entries.items():
        key = (k, s)
        by_ks[key] = max(by_ks.get(key, 0.0), abs(v))
    rows = sorted(
        (polar_eigenvalue(n, k, s), k, s, v) for (k, s), v in by_ks.items()
    )
    lams = np.array([r[0] for r in rows], dtype=float)
    vals = np.array([r[3] for r in rows])
    mid = 0.5 * (lams.min() + lams.max())
    keep = (lams >= mid) & (vals > 0)
    if keep.sum() >= 2:
        slope = float(np.polyfit(np.log(lams[keep]), np.log(vals[keep]), 1)[0])
    else:
        slope = math.nan
    return DecayProbe(n, rows, slope, int(keep.sum()))


def parseval_check(f: ScalarField, coeffs: SpectralCoefficients, norm_sq: float) -> float:
    """Defect norm_sq - sum |coefficients|^2; nonnegative up to quadrature
    error and shrinking to zero as the truncation covers the band of f."""
    return float(norm_sq) - coeffs.norm_sq()


def field_norm_sq(
    f: ScalarField,
    sphere: Optional[QuadratureRule] = None,
    radial: Optional[QuadratureRule] = None,
    sphere_degree: int = 40,
) -> float:
    """Squared L2 norm of f by polar-factorized quadrature."""
    n = f.n
    if sphere is None:
        sphere = sphere_rule(n, sphere_degree)
    if radial is None:
        if f.support_radius is not None:
            radial = radial_rule_compact(_COMPACT_N, f.support_radius, panels=_COMPACT_PANELS)
        else:
            radial = gauss_radial(RADIAL_N, n / 2.0 - 1.0)
    pts = (radial.nodes[:, None, None] * sphere.nodes[None, :, :]).reshape(-1, n)
    vals = f(pts).reshape(len(radial.nodes), len(sphere.nodes))
    shell = (vals * vals) @ sphere.weights
    if radial.domain_tag.startswith("radial_compact"):
        return float(radial.weights @ (shell * radial.nodes ** (n - 1)))
    return float(radial.weights @ shell)


def fd_oscillator_apply(f: ScalarField, points, h: float) -> np.ndarray:
    """(-Laplacian + |x|^2) f at the given points by fourth-order central
    differences (five-point stencil along each axis)."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    n = f.n
    shifts = [pts]
    for d in range(n):
        for step in (h, -h, 2 * h, -2 * h):
            shifted = pts.copy()
            shifted[:, d] += step
            shifts.append(shifted)
    vals = f(np.concatenate(shifts)).reshape(4 * n + 1, len(pts))
    center = vals[0]
    lap = np.zeros(len(pts))
    for d in range(n):
        fp, fmn, fp2, fm2 = vals[1 + 4 * d : 5 + 4 * d]
        lap += (-fp2 + 16 * fp - 30 * center + 16 * fmn - fm2) / (12 * h * h)
    return -lap + np.sum(pts * pts, axis=1) * center


def eigen_order_study(
    f: ScalarField,
    eigenvalue: float,
    points,
    h0: float = 0.2,
    halvings: int = 2,
) -> Tuple[list, list]:
    """Max residual |(-Lap + |x|^2) f - lambda f| under step halving and the
    observed convergence orders between successive steps."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    target = eigenvalue * f(pts)
    residuals = []
    for i in range(halvings + 1):
        h = h0 / 2**i
        residuals.append(float(np.abs(fd_oscillator_apply(f, pts, h) - target).max()))
    orders = [
        math.log2(residuals[i] / residuals[i + 1]) if residuals[i + 1] > 0 else math.inf
        for i in range(halvings)
    ]
    return residuals, orders
