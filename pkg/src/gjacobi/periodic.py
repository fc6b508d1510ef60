"""Periodic coefficient data: monodromy matrix, Floquet multipliers, and the
grid classification of the spectrum into the multiplier set E and the finite
point set E_p.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import BadRange
from .pfraction import PFraction
from .poly import Polynomial
from .polyrec import TransferMatrix, transfer_product
from .roots import all_roots

LABEL_RESOLVENT = "resolvent"
LABEL_E = "E"
LABEL_EP = "E_p"


@dataclass(frozen=True)
class PeriodicGJM:
    """One period of coefficient data, repeated cyclically."""

    terms: tuple  # s PFractionTerms, each with a coupling

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        if not self.terms:
            raise ValueError("period must contain at least one term")
        if any(t.b_squared is None for t in self.terms):
            raise ValueError("periodic data needs a coupling on every term")

    @property
    def period(self):
        return len(self.terms)

    def unroll(self, n_terms) -> PFraction:
        """PFraction of n_terms cyclic repetitions of the period."""
        s = self.period
        terms = tuple(self.terms[i % s] for i in range(n_terms))
        return PFraction(terms, degree_cap=max(t.degree for t in self.terms))


@dataclass(frozen=True)
class Monodromy:
    """Transfer matrix over one period and its trace polynomial.

    Entries: T = [[-eps b Q_{s-1}, -Q_s], [eps b P_{s-1}, P_s]] with
    eps = eps_{s-1}, b = b_{s-1}; the multipliers at lambda are the roots
    of w^2 - t(lambda) w + 1 = 0 where t = trace T.
    """

    T: TransferMatrix
    trace: Polynomial
    period: int
    det_defect: float  # coefficient max-norm of det T - 1

    def entry_values(self, lam):
        (a, b), (c, d) = self.T.entries
        lam = complex(lam)
        return (complex(a(lam)), complex(b(lam)),
                complex(c(lam)), complex(d(lam)))


def monodromy(pg: PeriodicGJM) -> Monodromy:
    s = pg.period
    pf = pg.unroll(s)
    T = transfer_product(pf, s - 1)
    (a, _), (_, d) = T.entries
    trace = a + d
    det = T.det()
    defect = max((abs(complex(c)) for c in (det - Polynomial.one()).coeffs),
                 default=0.0)
    if defect > 1e-10:
        raise ArithmeticError(f"monodromy determinant defect {defect} > 1e-10")
    return Monodromy(T=T, trace=trace, period=s, det_defect=defect)


def multipliers(mono: Monodromy, lam):
    """Floquet multipliers (w_1, w_2), |w_1| >= |w_2|, w_1 w_2 = 1."""
    t = complex(mono.trace(complex(lam)))
    return _quad_roots(t)


def _quad_roots(t):
    s = np.sqrt(complex(t) * t - 4.0)
    w1 = (t + s) / 2.0
    if abs(t - s) > abs(t + s):
        w1 = (t - s) / 2.0
    if w1 == 0:
        return 0j, 0j
    return w1, 1.0 / w1


def classify(mono: Monodromy, pg: PeriodicGJM, lam, tol) -> str:
    """Label lambda as E_p (eigenvalue), E (multiplier set) or resolvent.

    E_p: P_{s-1}(lambda) = 0 within tol (scaled) and the monodromy favors
    the decaying column, |b_{s-1} Q_{s-1}| > |P_s|.  E: trace within tol of
    the real interval [-2, 2].  Everything else: resolvent.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    lam = complex(lam)
    w11, _, w21, w22 = mono.entry_values(lam)
    # w21 = eps b P_{s-1}, w11 = -eps b Q_{s-1}
    b = math.sqrt(float(pg.terms[-1].b_squared))
    deg = max(d.degree for row in mono.T.entries for d in row)
    scale = b * max(1.0, abs(lam)) ** deg
    if abs(w21) <= tol * scale and abs(w11) > abs(w22) + tol * scale:
        return LABEL_EP
    t = complex(mono.trace(lam))
    if abs(t.imag) <= tol and -2.0 - tol <= t.real <= 2.0 + tol:
        return LABEL_E
    return LABEL_RESOLVENT


@dataclass(frozen=True)
class SpectrumScan:
    region: tuple        # (xmin, xmax, ymin, ymax)
    nx: int
    ny: int
    tol: float
    points: object       # complex array, shape (ny, nx), row-major by (row, col)
    labels: object       # string array matching points
    trace_values: object
    w1_abs: object
    w2_abs: object
    ep_points: tuple     # root-refined eigenvalue candidates

    def to_csv(self):
        lines = ["re,im,label,trace_re,trace_im,w1_abs,w2_abs"]
        for r in range(self.ny):
            for c in range(self.nx):
                z = self.points[r, c]
                t = self.trace_values[r, c]
                lines.append(
                    f"{float(z.real)!r},{float(z.imag)!r},{self.labels[r, c]},"
                    f"{float(t.real)!r},{float(t.imag)!r},"
                    f"{float(self.w1_abs[r, c])!r},{float(self.w2_abs[r, c])!r}"
                )
        return "\n".join(lines) + "\n"

    def summary_json(self):
        unique, counts = np.unique(self.labels, return_counts=True)
        return json.dumps({
            "region": list(self.region),
            "grid": [self.nx, self.ny],
            "tol": self.tol,
            "label_counts": {str(u): int(c) for u, c in zip(unique, counts)},
            "ep_points": [[z.real, z.imag] for z in self.ep_points],
        })


def scan(mono: Monodromy, pg: PeriodicGJM, region, nx, ny, tol,
         seed=0) -> SpectrumScan:
    """Classify a rectangular grid and root-refine the eigenvalue candidates.

    Grid labels are tolerance-dependent; candidate eigenvalues are the roots
    of P_{s-1} inside the region, kept only when the modulus inequality
    |b_{s-1} Q_{s-1}| > |P_s| holds at the refined root.
    """
    if nx < 2 or ny < 2:
        raise BadRange("grid must be at least 2x2")
    xmin, xmax, ymin, ymax = region
    xs = np.linspace(xmin, xmax, nx)
    ys = np.linspace(ymin, ymax, ny)
    Z = xs[None, :] + 1j * ys[:, None]

    (a, _), (c, d) = mono.T.entries
    w11 = _polyval(a, Z)
    w21 = _polyval(c, Z)
    w22 = _polyval(d, Z)
    t = _polyval(mono.trace, Z)

    s = np.sqrt(t * t - 4.0)
    plus, minus = (t + s) / 2.0, (t - s) / 2.0
    w1 = np.where(np.abs(plus) >= np.abs(minus), plus, minus)
    w1 = np.where(w1 == 0, 1.0, w1)  # t=+-2 double root guard
    w2 = 1.0 / w1

    b = math.sqrt(float(pg.terms[-1].b_squared))
    deg = max(e.degree for row in mono.T.entries for e in row)
    scale = b * np.maximum(1.0, np.abs(Z)) ** deg
    # the grid can only resolve the trace condition to within one cell, so
    # widen tol by how far the trace moves across half a cell diagonal
    half_diag = 0.5 * math.hypot((xmax - xmin) / (nx - 1), (ymax - ymin) / (ny - 1))
    t_slack = tol + np.abs(_polyval(_derivative(mono.trace), Z)) * half_diag
    is_ep = (np.abs(w21) <= tol * scale) & (np.abs(w11) > np.abs(w22) + tol * scale)
    is_e = (np.abs(t.imag) <= t_slack) & (t.real >= -2.0 - t_slack) & (t.real <= 2.0 + t_slack)
    labels = np.where(is_ep, LABEL_EP, np.where(is_e, LABEL_E, LABEL_RESOLVENT))

    # root-refined eigenvalue candidates: zeros of P_{s-1} = w21/(eps b)
    ep = []
    for z in all_roots([complex(v) for v in c.as_float().coeffs], seed=seed):
        if not (xmin - tol <= z.real <= xmax + tol
                and ymin - tol <= z.imag <= ymax + tol):
            continue
        v11, _, _, v22 = mono.entry_values(z)
        if abs(v11) > abs(v22):
            ep.append(z)
    return SpectrumScan(region=tuple(region), nx=nx, ny=ny, tol=tol,
                        points=Z, labels=labels, trace_values=t,
                        w1_abs=np.abs(w1), w2_abs=np.abs(w2),
                        ep_points=tuple(ep))


def _derivative(p: Polynomial) -> Polynomial:
    return Polynomial([i * c for i, c in enumerate(p.coeffs)][1:])


def _polyval(p: Polynomial, Z):
    acc = np.zeros_like(Z)
    for coeff in reversed(p.as_float().coeffs):
        acc = acc * Z + complex(coeff)
    if p.is_zero:
        acc = np.zeros_like(Z)
    return acc
