"""Associated polynomials, transfer matrices and related exact identities.

All exact work lives in the monic-scaled sequences Phat_j, Qhat_j, which obey
uhat_{j+1} = p_j uhat_j - eps_{j-1} eps_j b_{j-1}^2 uhat_{j-1} and involve
only b^2.  The normalized P_j, Q_j (each Phat_j, Qhat_j divided by
b_0...b_{j-1}) exist only as float views, taken when evaluating.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import NotEnoughTerms, OutOfRange
from .pfraction import PFraction
from .poly import Polynomial, poly_gcd


@dataclass(frozen=True)
class OrthoSequences:
    """Monic-scaled first/second-kind polynomials with b^2 partial products."""

    Phat: tuple  # Phat[j] monic of degree n_j
    Qhat: tuple  # Qhat[j] of degree n_j - k_0
    b2_products: tuple  # b2_products[j] = prod_{i<j} b_i^2
    source: PFraction

    @property
    def j_max(self):
        return len(self.Phat) - 1

    def check_range(self, j, *, lo=0):
        if not lo <= j <= self.j_max:
            raise OutOfRange(f"j={j} outside generated range [{lo}, {self.j_max}]")


@dataclass(frozen=True)
class TransferMatrix:
    """2x2 polynomial matrix; products of single-step matrices have det 1."""

    entries: tuple  # ((w11, w12), (w21, w22)), float Polynomials

    def __call__(self, lam):
        (a, b), (c, d) = self.entries
        return ((a(lam), b(lam)), (c(lam), d(lam)))

    def det(self) -> Polynomial:
        (a, b), (c, d) = self.entries
        return a * d - b * c

    def matmul(self, other) -> "TransferMatrix":
        (a, b), (c, d) = self.entries
        (e, f), (g, h) = other.entries
        return TransferMatrix((
            (a * e + b * g, a * f + b * h),
            (c * e + d * g, c * f + d * h),
        ))


def generate(pf: PFraction, j_max: int) -> OrthoSequences:
    """Run the three-term recurrence up to index j_max (exact)."""
    if len(pf) < j_max:
        raise NotEnoughTerms(f"need {j_max} terms, P-fraction has {len(pf)}")
    if j_max < 1:
        raise ValueError("j_max must be >= 1")
    one = Polynomial.one()
    Phat = [one, pf[0].p]
    Qhat = [Polynomial.zero(), Polynomial((pf[0].epsilon,))]
    prods = [1, pf[0].b_squared]  # prods[j] = prod_{i<j} b_i^2; None if unknown
    for j in range(1, j_max):
        prev = pf[j - 1]
        cur = pf[j]
        if prev.b_squared is None:
            raise NotEnoughTerms(
                f"term {j - 1} has no coupling; cannot recurse past it"
            )
        c = prev.epsilon * cur.epsilon * prev.b_squared
        Phat.append(cur.p * Phat[j] - c * Phat[j - 1])
        Qhat.append(cur.p * Qhat[j] - c * Qhat[j - 1])
        b2 = cur.b_squared
        prods.append(None if b2 is None else prods[j] * b2)
    return OrthoSequences(tuple(Phat), tuple(Qhat), tuple(prods), pf)


def eval_normalized(seqs: OrthoSequences, j: int, lam):
    """(P_j(lam), Q_j(lam)) divided by sqrt(prod b_i^2), float/complex."""
    seqs.check_range(j)
    if seqs.b2_products[j] is None:
        raise OutOfRange(f"normalization of index {j} needs coupling b_{j - 1}")
    root = math.sqrt(float(seqs.b2_products[j]))
    return (complex(seqs.Phat[j](complex(lam))) / root,
            complex(seqs.Qhat[j](complex(lam))) / root)


def single_transfer(term) -> TransferMatrix:
    """W_j = [[0, -eps/b], [eps*b, p/b]] with float coefficients."""
    if term.b_squared is None:
        raise NotEnoughTerms("final term without coupling has no transfer matrix")
    b = math.sqrt(float(term.b_squared))
    eps = term.epsilon
    return TransferMatrix((
        (Polynomial.zero(), Polynomial((-eps / b,))),
        (Polynomial((eps * b,)), term.p.as_float().scale(1.0 / b)),
    ))


def transfer_product(pf: PFraction, j: int) -> TransferMatrix:
    """W_[0,j] = W_0 ... W_j (float polynomial entries)."""
    if len(pf) < j + 1:
        raise NotEnoughTerms(f"need {j + 1} terms, have {len(pf)}")
    acc = single_transfer(pf[0])
    for i in range(1, j + 1):
        acc = acc.matmul(single_transfer(pf[i]))
    return acc


def lo_defect(seqs: OrthoSequences, j: int, lam) -> float:
    """|eps_j b_j (Q_{j+1} P_j - Q_j P_{j+1}) - 1| at lam (float)."""
    seqs.check_range(j + 1)
    term = seqs.source[j]
    if term.b_squared is None:
        raise OutOfRange(f"term {j} has no coupling b_j")
    # b_j (Q_{j+1}P_j - Q_jP_{j+1}) = (Qhat_{j+1}Phat_j - Qhat_jPhat_{j+1})
    # divided by prod_{i<j} b_i^2, so the whole combination is rational and
    # can be evaluated without float cancellation on exact data
    prods = seqs.b2_products[j]
    if isinstance(prods, (int, Fraction)):
        pairs = [p.eval_exact_pair(lam) for p in
                 (seqs.Phat[j], seqs.Qhat[j], seqs.Phat[j + 1], seqs.Qhat[j + 1])]
        if all(v is not None for v in pairs):
            (pr, pi), (qr, qi), (p1r, p1i), (q1r, q1i) = pairs
            wr = (q1r * pr - q1i * pi) - (qr * p1r - qi * p1i)
            wi = (q1r * pi + q1i * pr) - (qr * p1i + qi * p1r)
            dr = term.epsilon * wr / prods - 1
            di = term.epsilon * wi / prods
            return abs(complex(float(dr), float(di)))
    pj, qj = eval_normalized(seqs, j, lam)
    pj1, qj1 = eval_normalized(seqs, j + 1, lam)
    b = math.sqrt(float(term.b_squared))
    return abs(term.epsilon * b * (qj1 * pj - qj * pj1) - 1.0)


def lo_polynomial_residual(seqs: OrthoSequences, j: int) -> Polynomial:
    """eps_j (Qhat_{j+1} Phat_j - Qhat_j Phat_{j+1}) - prod_{i<j} b_i^2.

    Zero as an exact polynomial for every generated j (monic-scaled
    Liouville-Ostrogradsky identity).
    """
    seqs.check_range(j + 1)
    eps = seqs.source[j].epsilon
    wron = seqs.Qhat[j + 1] * seqs.Phat[j] - seqs.Qhat[j] * seqs.Phat[j + 1]
    return eps * wron - Polynomial((seqs.b2_products[j],))


@dataclass(frozen=True)
class CoprimalityReport:
    j: int
    gcd_P: Polynomial  # gcd(Phat_j, Phat_{j+1})
    gcd_Q: Polynomial  # gcd(Qhat_j, Qhat_{j+1})
    gcd_PQ: Polynomial  # gcd(Phat_j, Qhat_j)

    @property
    def all_coprime(self):
        return all(g.degree == 0 for g in (self.gcd_P, self.gcd_Q, self.gcd_PQ))


def coprimality_check(seqs: OrthoSequences, j: int) -> CoprimalityReport:
    """Exact gcds behind the no-common-zeros clauses (all must be constant)."""
    if j < 1:
        raise OutOfRange("coprimality clauses need j >= 1")
    seqs.check_range(j + 1)
    return CoprimalityReport(
        j=j,
        gcd_P=poly_gcd(seqs.Phat[j], seqs.Phat[j + 1]),
        gcd_Q=poly_gcd(seqs.Qhat[j], seqs.Qhat[j + 1]),
        gcd_PQ=poly_gcd(seqs.Phat[j], seqs.Qhat[j]),
    )
