"""The stacked scaled-DFT frame and its constant-diagonal projection.

For parameters ``(r, n)`` the frame matrix ``B`` has ``r**2 * n`` rows and
``r * n`` columns. It is ``r`` copies of the ``rn x rn`` DFT stacked on top of
each other, copy ``k`` having its columns scaled as

* columns ``0 .. (k-1)(n-1)-1``: 0
* the next ``n-1`` columns: ``sqrt(r - (delta_1 + ... + delta_{k-1}))``
  (absent for ``k == r``)
* all remaining columns: ``sqrt(delta_k)``

with ``delta_k = r^2 n / ([(r-k+1)n + k-1] [(r-k)n + k])``. Every row of
``B`` then has squared norm 1 and every column squared norm ``r``, so the
rows are a unit-norm ``r``-tight frame and ``B B* / r`` is a rank ``rn``
projection with constant diagonal ``1/r``.

Row indices, row blocks and column groups are 0-based here; the block index
``k`` (which selects ``delta_k``) is 1-based to match the formula.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from .dft import dft, scale_columns


@dataclass(frozen=True)
class FrameParams:
    r: int
    n: int

    def __post_init__(self):
        if not isinstance(self.r, (int, np.integer)) or self.r < 2:
            raise ValueError(f"r must be an integer >= 2, got {self.r!r}")
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise ValueError(f"n must be an integer >= 1, got {self.n!r}")

    @property
    def dim(self) -> int:
        """Number of columns, ``r*n``."""
        return self.r * self.n

    @property
    def size(self) -> int:
        """Number of frame vectors, ``r*r*n``."""
        return self.r * self.r * self.n


def _check_k(r: int, k: int, lo: int = 1) -> None:
    if not lo <= k <= r:
        raise ValueError(f"k must satisfy {lo} <= k <= r={r}, got {k}")


def _delta_terms(r: int, n: int, k: int) -> tuple[int, int]:
    return r * r * n, ((r - k + 1) * n + k - 1) * ((r - k) * n + k)


def delta_exact(r: int, n: int, k: int) -> Fraction:
    FrameParams(r, n)
    _check_k(r, k)
    num, den = _delta_terms(r, n, k)
    return Fraction(num, den)


def delta(r: int, n: int, k: int) -> float:
    """Scaling constant ``delta_k`` of the ``k``-th block (1-based)."""
    FrameParams(r, n)
    _check_k(r, k)
    num, den = _delta_terms(r, n, k)
    return num / den


def delta_partial_sum_exact(r: int, n: int, k: int) -> Fraction:
    FrameParams(r, n)
    _check_k(r, k, lo=0)
    return Fraction(r * k, (r - k) * n + k)


def delta_partial_sum(r: int, n: int, k: int) -> float:
    """Closed form of ``delta_1 + ... + delta_k``, i.e. ``rk / ((r-k)n + k)``."""
    FrameParams(r, n)
    _check_k(r, k, lo=0)
    return (r * k) / ((r - k) * n + k)


def column_groups(params: FrameParams) -> tuple[tuple[int, int], ...]:
    """Half-open column ranges: ``r-1`` groups of width ``n-1`` then the tail group."""
    r, n = params.r, params.n
    groups = [((k - 1) * (n - 1), k * (n - 1)) for k in range(1, r)]
    groups.append(((r - 1) * (n - 1), params.dim))
    return tuple(groups)


def row_blocks(params: FrameParams) -> tuple[range, ...]:
    """Row ranges ``D_k`` holding the rows of the ``k``-th DFT copy."""
    m = params.dim
    return tuple(range(k * m, (k + 1) * m) for k in range(params.r))


def block_factors(params: FrameParams, k: int) -> np.ndarray:
    """Column factors applied to the ``k``-th DFT copy."""
    r, n = params.r, params.n
    _check_k(r, k)
    s = np.empty(params.dim)
    zeroed = (k - 1) * (n - 1)
    s[:zeroed] = 0.0
    if k < r:
        middle = np.sqrt(r - delta_partial_sum(r, n, k - 1))
        s[zeroed:zeroed + n - 1] = middle
        s[zeroed + n - 1:] = np.sqrt(delta(r, n, k))
    else:
        s[zeroed:] = np.sqrt(delta(r, n, k))
    return s


def build_block(params: FrameParams, k: int) -> np.ndarray:
    return scale_columns(dft(params.dim), block_factors(params, k))


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class CounterexampleFrame:
    """The stacked matrix ``B`` plus the bookkeeping needed to analyse it."""

    params: FrameParams
    B: np.ndarray
    deltas: tuple[float, ...]
    deltas_exact: tuple[Fraction, ...]
    row_blocks: tuple[range, ...]
    column_groups: tuple[tuple[int, int], ...]
    factors: np.ndarray = field(repr=False)
    base: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return self.B.shape[0]

    @property
    def vectors(self) -> np.ndarray:
        """Frame vectors ``f_i`` (the rows of ``B``)."""
        return self.B

    def block_of_row(self, i: int) -> int:
        """1-based block index ``k`` with ``i`` in ``D_k``."""
        return i // self.params.dim + 1

    @cached_property
    def gram_full(self) -> np.ndarray:
        """``G[p, q] = <f_q, f_p>`` over all rows, so ``a* G a = ||sum a_i f_i||^2``."""
        return _readonly(np.conj(self.B) @ self.B.T)


def build_stack(params: FrameParams) -> CounterexampleFrame:
    r = params.r
    base = _readonly(dft(params.dim))
    factors = np.vstack([block_factors(params, k) for k in range(1, r + 1)])
    B = np.vstack([scale_columns(base, factors[k]) for k in range(r)])
    return CounterexampleFrame(
        params=params,
        B=_readonly(B),
        deltas=tuple(delta(r, params.n, k) for k in range(1, r + 1)),
        deltas_exact=tuple(delta_exact(r, params.n, k) for k in range(1, r + 1)),
        row_blocks=row_blocks(params),
        column_groups=column_groups(params),
        factors=_readonly(factors),
        base=base,
    )


def build_projection(params: FrameParams) -> np.ndarray:
    """``B B* / r``: orthogonal projection of rank ``rn`` with diagonal ``1/r``."""
    B = build_stack(params).B
    return (B @ np.conj(B).T) / params.r
