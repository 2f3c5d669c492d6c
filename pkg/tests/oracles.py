"""Reference computations that share no code path with the package.

Nothing here calls LAPACK eigen/SVD routines or the package's own helpers.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction

import numpy as np


def dft_entry(m: int, i: int, j: int) -> complex:
    return cmath.exp(2j * math.pi * i * j / m) / math.sqrt(m)


def deltas_by_recursion(r: int, n: int) -> list[Fraction]:
    """Solve the row-sum equations block by block in exact arithmetic.

    Block k: zero on (k-1)(n-1) columns, factor^2 = r - sum_{j<k} delta_j on the
    next n-1, delta_k on the remaining rn - k(n-1); with DFT entries of modulus
    squared 1/(rn) each row must sum to 1. The last block has no middle group.
    """
    out: list[Fraction] = []
    for k in range(1, r + 1):
        acc = sum(out, Fraction(0))
        if k < r:
            rest = r * n - k * (n - 1)
            out.append((Fraction(r * n) - (r - acc) * (n - 1)) / rest)
        else:
            rest = r * n - (r - 1) * (n - 1)
            out.append(Fraction(r * n, rest))
    return out


def _count_below(h: list[list[complex]], x: float) -> int:
    """Number of eigenvalues of Hermitian ``h`` below ``x``.

    Sylvester inertia of ``h - x I`` read off the pivots of Gaussian
    elimination without pivoting (ratios of consecutive leading principal
    minors, i.e. the Sturm sequence of characteristic polynomials).
    """
    size = len(h)
    a = [[h[i][j] - (x if i == j else 0.0) for j in range(size)] for i in range(size)]
    neg = 0
    for p in range(size):
        piv = a[p][p].real
        if piv == 0.0:
            piv = -1e-300
        if piv < 0:
            neg += 1
        for i in range(p + 1, size):
            f = a[i][p] / piv
            if f != 0:
                row_p = a[p]
                row_i = a[i]
                for j in range(p + 1, size):
                    row_i[j] -= f * row_p[j]
    return neg


def bisection_min_eigenvalue(h, tol: float = 1e-13) -> float:
    h = [[complex(z) for z in row] for row in np.asarray(h).tolist()]
    bound = max(sum(abs(z) for z in row) for row in h)
    lo, hi = -bound - 1.0, bound + 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _count_below(h, mid) >= 1:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def rayleigh_upper_bound(h, samples: int, rng: np.random.Generator, chunk: int = 200_000) -> float:
    """Min of ``a* H a`` over random unit vectors: an upper bound on lambda_min."""
    h = np.asarray(h, dtype=np.complex128)
    d = h.shape[0]
    best = math.inf
    done = 0
    while done < samples:
        m = min(chunk, samples - done)
        a = rng.standard_normal((m, d)) + 1j * rng.standard_normal((m, d))
        a /= np.sqrt(np.sum(np.abs(a) ** 2, axis=1))[:, None]
        q = np.sum(a.conj() * (a @ h.T), axis=1).real
        best = min(best, float(q.min()))
        done += m
    return best


def frame_rows(r: int, n: int) -> list[list[complex]]:
    """Rows of B from entrywise DFT values and the recursion deltas."""
    m = r * n
    d = deltas_by_recursion(r, n)
    rows = []
    for k in range(1, r + 1):
        acc = sum(d[: k - 1], Fraction(0))
        factors = []
        for c in range(m):
            if c < (k - 1) * (n - 1):
                factors.append(0.0)
            elif k < r and c < k * (n - 1):
                factors.append(math.sqrt(r - acc))
            else:
                factors.append(math.sqrt(d[k - 1]))
        for i in range(m):
            rows.append([factors[c] * dft_entry(m, i, c) for c in range(m)])
    return rows


def block_gram(rows: list[list[complex]], idx) -> list[list[complex]]:
    """``[<f_q, f_p>]`` by explicit sums."""
    return [[sum(rows[q][c] * rows[p][c].conjugate() for c in range(len(rows[0]))) for q in idx]
            for p in idx]


def brute_partition_value(rows, assignment, r: int) -> float:
    vals = []
    for j in range(r):
        idx = [i for i, a in enumerate(assignment) if a == j]
        if idx:
            vals.append(max(0.0, bisection_min_eigenvalue(block_gram(rows, idx))))
    return min(vals)
