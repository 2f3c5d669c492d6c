"""Riesz lower bounds, paving norms and the Riesz/paving duality for projections.

Index sets are 0-based row indices into the frame. Riesz bounds computed by
:func:`riesz_lower_bound` use the unit-norm rows of ``B``; the projection side
(:func:`duality_check`) uses ``G = B B* / r``, whose compressions relate to the
Parseval rows ``B / sqrt(r)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .construction import CounterexampleFrame, build_projection
from .linalg import min_eigenvalue_hermitian, operator_norm

CLAMP_TOL = 1e-8
EMPTY_BOUND = math.inf


def index_set(indices: Iterable[int], size: int | None = None) -> tuple[int, ...]:
    """Sorted, duplicate-free tuple of indices, range-checked against ``size``."""
    idx = [int(i) for i in indices]
    s = tuple(sorted(set(idx)))
    if len(s) != len(idx):
        raise ValueError("index set contains duplicates")
    if s and (s[0] < 0 or (size is not None and s[-1] >= size)):
        raise ValueError(f"indices must lie in 0..{size - 1 if size else '?'}, got {s[0]}..{s[-1]}")
    return s


def clamp(value: float) -> float:
    return 0.0 if -CLAMP_TOL <= value < 0.0 else value


def gram(frame: CounterexampleFrame, S: Iterable[int]) -> np.ndarray:
    """Gram matrix ``[<f_q, f_p>]`` of the rows indexed by ``S`` (sorted order)."""
    s = index_set(S, frame.size)
    if not s:
        raise ValueError("gram of an empty index set is undefined")
    F = frame.B[list(s)]
    return np.conj(F) @ F.T


def riesz_lower_bound(frame: CounterexampleFrame, S: Iterable[int]) -> float:
    """Largest ``delta`` with ``||sum a_i f_i||^2 >= delta * sum |a_i|^2`` over ``S``.

    Empty sets impose no constraint and return ``inf``.
    """
    s = index_set(S, frame.size)
    if not s:
        return EMPTY_BOUND
    return clamp(min_eigenvalue_hermitian(gram(frame, s)))


def paving_norm(M: np.ndarray, S: Iterable[int]) -> float:
    """Operator norm of the principal submatrix ``M[S, S]``."""
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    s = index_set(S)
    if not s:
        return 0.0
    if s[-1] >= M.shape[0]:
        raise ValueError(f"index {s[-1]} out of range for a {M.shape[0]}x{M.shape[0]} matrix")
    return operator_norm(M[np.ix_(s, s)])


@dataclass(frozen=True)
class BoundReport:
    subset: tuple[int, ...]
    riesz_lower: float
    riesz_lower_raw: float
    paving_norm_complement: float
    duality_residual: float
    normalization: str = "projection"


def duality_check(frame: CounterexampleFrame, S: Iterable[int], G: np.ndarray | None = None) -> BoundReport:
    """Compare ``lambda_min(G[S,S])`` with ``||(I - G)[S,S]||``; they must sum to 1.

    ``G`` defaults to the frame's projection and may be passed in to avoid
    rebuilding it for many subsets.
    """
    s = index_set(S, frame.size)
    if not s:
        raise ValueError("duality check needs a nonempty index set")
    if G is None:
        G = build_projection(frame.params)
    raw = min_eigenvalue_hermitian(G[np.ix_(s, s)])
    complement = np.eye(G.shape[0]) - G
    pav = paving_norm(complement, s)
    return BoundReport(
        subset=s,
        riesz_lower=clamp(raw),
        riesz_lower_raw=raw,
        paving_norm_complement=pav,
        duality_residual=abs(raw + pav - 1.0),
    )
