"""Moment sequences, Hankel determinants and normal indices.

A moment sequence holds the coefficients s_0, s_1, ... of the series
-s_0/lambda - s_1/lambda^2 - ...  Exact sequences carry Fraction entries;
float sequences get a tolerance-based zero test (see FLOAT_ZERO_TOL).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import AllZero, InsufficientMoments

# Absolute zero tolerance for float sequences, applied after scaling the
# entries to unit max-norm.  The exact ring uses true equality.
FLOAT_ZERO_TOL = 1e-12


@dataclass(frozen=True)
class MomentSequence:
    """Finite prefix of real moments with a positive normalization factor."""

    coeffs: tuple
    scale: object = 1
    certified_up_to: int | None = None  # highest certified index, None = all

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(self.coeffs))
        if len(self.coeffs) < 1:
            raise ValueError("moment sequence must have at least one entry")

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, i):
        return self.coeffs[i]

    @property
    def is_exact(self):
        return all(isinstance(c, (Fraction, int)) for c in self.coeffs)

    def is_zero_entry(self, i):
        return _is_zero(self.coeffs[i], self.coeffs)

    def first_nonzero(self):
        """Index of the first nonzero entry, or None if all vanish."""
        for i in range(len(self.coeffs)):
            if not self.is_zero_entry(i):
                return i
        return None

    # -- serialization -------------------------------------------------
    def to_json(self):
        return json.dumps({"moments": [_scalar_str(c) for c in self.coeffs]})

    @classmethod
    def from_json(cls, text, exact_parse=False):
        data = json.loads(text)
        return cls(tuple(parse_scalar(v, exact_parse) for v in data["moments"]))


@dataclass(frozen=True)
class NormalIndexList:
    """Strictly increasing indices with nonzero Hankel determinant."""

    indices: tuple
    certified_up_to: int

    def __post_init__(self):
        idx = tuple(self.indices)
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise ValueError("normal indices must be strictly increasing")
        object.__setattr__(self, "indices", idx)

    def block_degrees(self):
        """Gaps k_j between consecutive normal indices (n_0 = 0)."""
        prev = 0
        out = []
        for n in self.indices:
            out.append(n - prev)
            prev = n
        return tuple(out)


def _is_zero(value, context):
    if isinstance(value, (Fraction, int)):
        return value == 0
    m = max(abs(float(c)) for c in context)
    if m == 0.0:
        return True
    return abs(float(value)) / m <= FLOAT_ZERO_TOL


def _scalar_str(c):
    if isinstance(c, (Fraction, int)):
        c = Fraction(c)
        return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
    return repr(float(c))


def parse_scalar(text, exact_parse=False):
    """Parse "p/q" as Fraction; decimal strings give floats unless promoted."""
    text = str(text).strip()
    if "/" in text:
        return Fraction(text)
    if ("." in text or "e" in text or "E" in text) and not exact_parse:
        return float(text)
    return Fraction(text)


def hankel_det(s: MomentSequence, n: int):
    """Determinant of the n x n Hankel matrix (s_{i+k})_{i,k=0}^{n-1}.

    Exact sequences use fraction-free Bareiss elimination; float sequences
    fall back to plain elimination with partial pivoting.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if 2 * n - 1 > len(s):
        raise InsufficientMoments(
            f"Hankel window needs {2 * n - 1} moments, have {len(s)}"
        )
    mat = [[s[i + k] for k in range(n)] for i in range(n)]
    if s.is_exact:
        return _bareiss_det([[Fraction(v) for v in row] for row in mat])
    return _float_det([[float(v) for v in row] for row in mat])


def _bareiss_det(m):
    n = len(m)
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def _float_det(m):
    n = len(m)
    det = 1.0
    for k in range(n):
        piv = max(range(k, n), key=lambda r: abs(m[r][k]))
        if m[piv][k] == 0.0:
            return 0.0
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            det = -det
        det *= m[k][k]
        for i in range(k + 1, n):
            f = m[i][k] / m[k][k]
            for j in range(k, n):
                m[i][j] -= f * m[k][j]
    return det


def normal_indices(s: MomentSequence, n_max: int) -> NormalIndexList:
    """All n <= n_max whose Hankel determinant is nonzero."""
    if 2 * n_max - 1 > len(s):
        raise InsufficientMoments(
            f"need {2 * n_max - 1} moments to certify up to {n_max}, have {len(s)}"
        )
    found = []
    exact = s.is_exact
    for n in range(1, n_max + 1):
        if exact:
            nonzero = hankel_det(s, n) != 0
        else:
            # scale the window to unit max-norm before the tolerance test
            win = [float(s[i]) for i in range(2 * n - 1)]
            m = max(abs(v) for v in win)
            if m == 0.0:
                nonzero = False
            else:
                mat = [[win[i + k] / m for k in range(n)] for i in range(n)]
                nonzero = abs(_float_det(mat)) > FLOAT_ZERO_TOL
        if nonzero:
            found.append(n)
    return NormalIndexList(tuple(found), certified_up_to=n_max)


def normalize(s: MomentSequence) -> MomentSequence:
    """Divide by the modulus of the first nonzero entry (which becomes +-1)."""
    i = s.first_nonzero()
    if i is None:
        raise AllZero("cannot normalize an identically zero sequence")
    c = abs(s.coeffs[i])
    if c == 1:
        return MomentSequence(s.coeffs, scale=s.scale * c,
                              certified_up_to=s.certified_up_to)
    return MomentSequence(tuple(v / c for v in s.coeffs), scale=s.scale * c,
                          certified_up_to=s.certified_up_to)
