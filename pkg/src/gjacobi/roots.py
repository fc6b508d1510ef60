"""All-roots polynomial solver (Aberth simultaneous iteration).

Deterministic given the seed: initial points sit on a Cauchy-bound circle
and stagnation triggers a seeded random perturbation restart.
"""

from __future__ import annotations

import cmath
import random

TOL = 1e-12
MAX_ITERS = 200


def all_roots(coeffs, tol=TOL, max_iters=MAX_ITERS, seed=0):
    """Roots of sum coeffs[i] x^i (low-to-high), as a list of complex.

    Trailing zero coefficients are stripped; zero roots from vanishing
    low-order coefficients are deflated exactly.
    """
    c = [complex(v) for v in coeffs]
    while c and abs(c[-1]) == 0.0:
        c.pop()
    if len(c) <= 1:
        return []
    nzero = 0
    while abs(c[0]) == 0.0:
        c.pop(0)
        nzero += 1
    roots = [0j] * nzero
    n = len(c) - 1
    if n == 0:
        return roots
    if n == 1:
        return roots + [-c[0] / c[1]]
    rng = random.Random(seed)
    radius = 1.0 + max(abs(a / c[-1]) for a in c[:-1])
    z = [radius * cmath.exp(2j * cmath.pi * (k + 0.25) / n) for k in range(n)]
    dc = [i * c[i] for i in range(1, n + 1)]
    prev_step = float("inf")
    stall = 0
    for _ in range(max_iters):
        step = 0.0
        new = list(z)
        for k in range(n):
            p = _horner(c, z[k])
            if p == 0:
                continue
            dp = _horner(dc, z[k])
            if dp == 0:
                new[k] = z[k] * (1 + 1e-8) + 1e-8
                step = float("inf")
                continue
            ratio = p / dp
            s = sum(1.0 / (z[k] - z[i]) for i in range(n) if i != k)
            denom = 1.0 - ratio * s
            w = ratio if denom == 0 else ratio / denom
            new[k] = z[k] - w
            step = max(step, abs(w) / max(1.0, abs(z[k])))
        z = new
        if step <= tol:
            return roots + z
        # stagnation: no progress across several sweeps, jiggle and retry
        if step >= 0.5 * prev_step:
            stall += 1
            if stall >= 10:
                z = [v * (1.0 + 1e-6 * (rng.random() - 0.5))
                     + 1e-6 * (rng.random() - 0.5) for v in z]
                stall = 0
        else:
            stall = 0
        prev_step = step
    return roots + z


def _horner(c, x):
    acc = 0j
    for v in reversed(c):
        acc = acc * x + v
    return acc
