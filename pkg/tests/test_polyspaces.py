import io
import math

import numpy as np
import pytest

from oscspectra.errors import ResourceLimitError
from oscspectra.polyspaces import (
    PolySpan,
    dimension_identity,
    hermite_span,
    laguerre_harmonic_span,
    monomials,
    spans_equal,
)

from _oracles import hermite_phys, laguerre_series


def test_monomial_order_graded():
    monos = monomials(2, 2)
    assert monos == [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]


def test_hermite_span_n1_m2_coefficients():
    # H_2(x) = 4x^2 - 2: coefficients (-2, 0, 4) on (1, x, x^2)
    span = hermite_span(1, 2)
    assert span.monomials == ((0,), (1,), (2,))
    assert span.matrix.tolist() == [[-2.0, 0.0, 4.0]]
    # oracle agreement at a sample point
    assert span.matrix[0] @ [1.0, 1.3, 1.3**2] == pytest.approx(hermite_phys(2, 1.3))


def test_hermite_span_n2_m1_generators():
    span = hermite_span(2, 1)
    # generators H_1(x1) = 2 x1 and H_1(x2) = 2 x2
    x1 = span.monomials.index((1, 0))
    x2 = span.monomials.index((0, 1))
    assert span.matrix[0][x1] == 4.0 / 2 and span.matrix[1][x2] == 2.0
    assert np.count_nonzero(span.matrix) == 2


@pytest.mark.parametrize("n,m", [(1, 5), (2, 4), (3, 3), (3, 8)])
def test_hermite_span_rank_is_dim_pm(n, m):
    span = hermite_span(n, m)
    assert np.linalg.matrix_rank(span.matrix) == math.comb(n - 1 + m, n - 1)


def test_laguerre_harmonic_generator_n1_m2():
    # k=1, s=0 generator is 2^{-1/2} L_1^{-1/2}(x^2) with
    # L_1^{-1/2}(t) = 1/2 - t, per the series oracle
    span = laguerre_harmonic_span(1, 2)
    assert len(span.labels) == 1
    const = laguerre_series(1, -0.5, 0.0) / math.sqrt(2)
    quad = (laguerre_series(1, -0.5, 1.0) - laguerre_series(1, -0.5, 0.0)) / math.sqrt(2)
    assert span.matrix[0] @ [1, 0, 0] == pytest.approx(const, rel=1e-12)
    assert span.matrix[0] @ [0, 0, 1] == pytest.approx(quad, rel=1e-12)


def test_laguerre_harmonic_generators_have_degree_m():
    for n, m in ((2, 5), (3, 4)):
        span = laguerre_harmonic_span(n, m)
        for row in span.matrix:
            top = max(
                (sum(e) for e, c in zip(span.monomials, row) if abs(c) > 1e-12), default=0
            )
            assert top == m


def test_laguerre_harmonic_generator_count():
    from oscspectra.harmonics import dim_harmonic

    for n, m in ((1, 6), (2, 5), (3, 4)):
        span = laguerre_harmonic_span(n, m)
        want = sum(dim_harmonic(n, m - 2 * k) for k in range(m // 2 + 1))
        assert len(span.labels) == want


def test_spans_equal_reflexive():
    span = hermite_span(2, 3)
    assert spans_equal(span, span).equal


@pytest.mark.parametrize("n", (1, 2, 3))
def test_spans_coincide(n):
    for m in range(9):
        a = hermite_span(n, m)
        b = laguerre_harmonic_span(n, m)
        result = spans_equal(a, b, 1e-10)
        assert result.equal, (n, m, result)
        assert result.rank_a == math.comb(n - 1 + m, n - 1)


def test_spans_detect_planted_discrepancy():
    # replace one generator with x1^m: a pure power is not in the
    # Hermite-product span for m >= 2 (brute-force residual confirms)
    n, m = 2, 4
    a = hermite_span(n, m)
    b = laguerre_harmonic_span(n, m)
    planted = b.matrix.copy()
    planted[0] = 0.0
    planted[0][b.monomials.index((m, 0))] = 1.0
    b_bad = PolySpan(n, m, b.monomials, planted, b.labels)
    assert not spans_equal(a, b_bad, 1e-10).equal
    target = planted[0]
    sol, *_ = np.linalg.lstsq(a.matrix.T, target, rcond=None)
    assert np.abs(a.matrix.T @ sol - target).max() > 1e-2


def test_each_generator_lies_in_hermite_span():
    for n in (1, 2, 3):
        for m in range(9):
            a = hermite_span(n, m)
            b = laguerre_harmonic_span(n, m)
            for row in b.matrix:
                sol, *_ = np.linalg.lstsq(a.matrix.T, row, rcond=None)
                res = np.abs(a.matrix.T @ sol - row).max()
                assert res <= 1e-10 * max(np.abs(row).max(), 1.0)


def test_dimension_identity_examples():
    assert dimension_identity(3, 4) == (15, 15)
    assert dimension_identity(2, 5) == (6, 6)
    for m in (0, 3, 10):
        assert dimension_identity(1, m) == (1, 1)


def test_dimension_identity_exact_everywhere():
    for n in range(1, 9):
        for m in range(31):
            lhs, rhs = dimension_identity(n, m)
            assert lhs == rhs


def test_span_caps():
    with pytest.raises(ResourceLimitError):
        hermite_span(2, 13)
    with pytest.raises(ResourceLimitError):
        laguerre_harmonic_span(4, 2)


def test_span_csv_header():
    buf = io.StringIO()
    hermite_span(2, 2).to_csv(buf)
    lines = buf.getvalue().splitlines()
    assert lines[0].startswith("# monomial_order: graded lexicographic")
    assert lines[1].startswith("generator,")
    assert len(lines) == 2 + 3  # three generators at (n, m) = (2, 2)
