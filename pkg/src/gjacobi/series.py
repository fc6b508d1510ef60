"""Truncated power series helpers (coefficient lists, low-to-high).

Used for Laurent expansions at infinity after the substitution z = 1/lambda.
All routines work over any coefficient field (Fraction or float/complex).
"""

from __future__ import annotations


def series_mul(a, b, n):
    """First n coefficients of the product of two truncated series."""
    out = [0] * n
    for i, ca in enumerate(a[:n]):
        if not ca:
            continue
        for j, cb in enumerate(b[: n - i]):
            out[i + j] += ca * cb
    return out


def series_inv(c, n):
    """First n coefficients of 1/c by Newton iteration; needs c[0] != 0.

    Doubles the number of correct terms per step: y <- y*(2 - c*y).
    """
    if not c or not c[0]:
        raise ZeroDivisionError("series has no reciprocal: constant term is zero")
    one = c[0] / c[0]
    y = [one / c[0]]
    prec = 1
    while prec < n:
        prec = min(2 * prec, n)
        cy = series_mul(c[:prec], y, prec)
        # 2 - c*y
        corr = [-v for v in cy]
        corr[0] += 2 * one
        y = series_mul(y, corr, prec)
    return y[:n]
