"""Search over r-partitions of the frame rows.

A partition is a labeling of the ``r**2 * n`` rows with labels ``0..r-1``;
blocks may be empty. The value of a partition is the smallest Riesz lower
bound over its nonempty blocks, and the searches below try to make that
value as large as possible. Alongside, every evaluated partition is checked
against the construction's guarantee: for each ``k <= r-1`` some block ``j``
with ``|A_j & D_k| >= n`` has Riesz bound at most ``delta_k`` on ``A_j & D_k``.

Random streams come from numpy's PCG64 bit generator seeded through
``SeedSequence``, which is portable across platforms.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .analysis import EMPTY_BOUND, clamp, riesz_lower_bound
from .construction import CounterexampleFrame

DEFAULT_BUDGET = 10**7
DOMINANCE_TOL = 1e-8
RNG_NAME = "numpy.random.PCG64 via SeedSequence"


class BudgetExceeded(ValueError):
    pass


@dataclass(frozen=True)
class Partition:
    arity: int
    assignment: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "assignment", tuple(int(a) for a in self.assignment))
        if self.arity < 1:
            raise ValueError(f"arity must be >= 1, got {self.arity}")
        bad = [a for a in self.assignment if not 0 <= a < self.arity]
        if bad:
            raise ValueError(f"labels must lie in 0..{self.arity - 1}, got {bad[0]}")

    @property
    def size(self) -> int:
        return len(self.assignment)

    def block(self, j: int) -> tuple[int, ...]:
        return tuple(i for i, a in enumerate(self.assignment) if a == j)

    def blocks(self) -> list[tuple[int, ...]]:
        return [self.block(j) for j in range(self.arity)]


def stirling2(size: int, k: int) -> int:
    row = [1] + [0] * k
    for m in range(1, size + 1):
        for j in range(min(m, k), 0, -1):
            row[j] = j * row[j] + row[j - 1]
        row[0] = 0
    return row[k]


def partition_count(size: int, r: int, canonical: bool = False) -> int:
    """Number of labelings, or of labelings up to relabeling the blocks."""
    if not canonical:
        return r**size
    return sum(stirling2(size, k) for k in range(0, r + 1)) if size else 1


def _restricted_growth(size: int, r: int) -> Iterator[tuple[int, ...]]:
    a = [0] * size
    def rec(i: int, top: int):
        if i == size:
            yield tuple(a)
            return
        for label in range(min(top + 2, r)):
            a[i] = label
            yield from rec(i + 1, max(top, label))
    if size == 0:
        yield ()
        return
    yield from rec(1, 0)


def enumerate_partitions(size: int, r: int, budget: int = DEFAULT_BUDGET,
                         canonical: bool = False) -> Iterator[Partition]:
    """Yield every labeling in lexicographic order.

    With ``canonical=True`` only the first labeling of each relabeling class
    is produced (labels appear in order of first use).
    """
    count = partition_count(size, r, canonical)
    if count > budget:
        raise BudgetExceeded(
            f"{count} labelings exceed the budget of {budget}; use random or local search instead")
    source = _restricted_growth(size, r) if canonical else itertools.product(range(r), repeat=size)
    for labels in source:
        yield Partition(r, labels)


def pigeonhole_block(p: Partition, frame: CounterexampleFrame, k: int) -> int:
    """Smallest label ``j`` maximising ``|A_j & D_k|``; that size is always ``>= n``."""
    r = frame.params.r
    if not 1 <= k <= r:
        raise ValueError(f"k must satisfy 1 <= k <= {r}, got {k}")
    rows = frame.row_blocks[k - 1]
    labels = np.asarray(p.assignment[rows.start:rows.stop])
    counts = np.bincount(labels, minlength=p.arity)
    j = int(np.argmax(counts))
    assert counts[j] >= frame.params.n
    return j


def evaluate_partition(frame: CounterexampleFrame, p: Partition) -> float:
    """Min over nonempty blocks of the block's Riesz lower bound."""
    return min(riesz_lower_bound(frame, b) for b in p.blocks() if b)


class _Evaluator:
    """Memoised block spectra on top of the frame's full Gram matrix."""

    def __init__(self, frame: CounterexampleFrame):
        self.frame = frame
        self.G = frame.gram_full
        self.r = frame.params.r
        self.n = frame.params.n
        self.dim = frame.params.dim
        self.cache: dict[bytes, tuple[float, float]] = {}

    def spectra(self, idx: np.ndarray) -> tuple[float, float]:
        """(Riesz lower bound, excess-adjusted bound) of the rows ``idx``.

        The second entry skips the ``|idx| - dim`` eigenvalues forced to zero
        when a block has more rows than the ambient dimension; it is the lower
        frame bound of such a block and is only used to break ties.
        """
        key = idx.tobytes()
        hit = self.cache.get(key)
        if hit is None:
            w = np.linalg.eigvalsh(self.G[np.ix_(idx, idx)])
            hit = (clamp(float(w[0])), clamp(float(w[max(0, idx.size - self.dim)])))
            self.cache[key] = hit
        return hit

    def value(self, a: np.ndarray) -> tuple[float, float]:
        best, spread = EMPTY_BOUND, EMPTY_BOUND
        for j in range(self.r):
            idx = np.flatnonzero(a == j)
            if idx.size:
                lam, adj = self.spectra(idx)
                best = min(best, lam)
                spread = min(spread, adj)
        return best, spread

    def per_k(self, a: np.ndarray) -> list[float]:
        out = []
        for k in range(1, self.r):
            start = (k - 1) * self.dim
            labels = a[start:start + self.dim]
            worst = EMPTY_BOUND
            for j in range(self.r):
                idx = np.flatnonzero(labels == j)
                if idx.size >= self.n:
                    worst = min(worst, self.spectra(idx + start)[0])
            out.append(worst)
        return out


@dataclass
class _Tracker:
    frame: CounterexampleFrame
    evaluator: _Evaluator
    best_value: float = -1.0
    best_assignment: tuple[int, ...] | None = None
    evaluated: int = 0
    per_k: list[float] = field(default_factory=list)
    failures: int = 0

    def __post_init__(self):
        self.per_k = [-math.inf] * (self.frame.params.r - 1)
        self.bounds = self.frame.deltas[:-1]

    def visit(self, a: np.ndarray) -> tuple[float, float]:
        self.evaluated += 1
        key = self.evaluator.value(a)
        value = key[0]
        labels = tuple(int(x) for x in a)
        if value > self.best_value or (value == self.best_value and labels < self.best_assignment):
            self.best_value, self.best_assignment = value, labels
        violated = False
        for i, v in enumerate(self.evaluator.per_k(a)):
            self.per_k[i] = max(self.per_k[i], v)
            violated |= v > self.bounds[i] + DOMINANCE_TOL
        self.failures += violated
        return key

    def result(self, method: str, **settings) -> "SearchResult":
        return SearchResult(
            best_partition=Partition(self.frame.params.r, self.best_assignment),
            best_value=self.best_value,
            partitions_evaluated=self.evaluated,
            method=method,
            per_k_violations=tuple(self.per_k),
            bounds=tuple(self.bounds),
            dominance_failures=self.failures,
            params=(self.frame.params.r, self.frame.params.n),
            settings=settings,
        )


@dataclass(frozen=True)
class SearchResult:
    best_partition: Partition
    best_value: float
    partitions_evaluated: int
    method: str
    per_k_violations: tuple[float, ...]
    bounds: tuple[float, ...]
    dominance_failures: int
    params: tuple[int, int]
    settings: dict = field(default_factory=dict)

    @property
    def dominated(self) -> bool:
        """True when no evaluated partition beat ``delta_k`` on its pigeonhole block."""
        return self.dominance_failures == 0 and all(
            v <= b + DOMINANCE_TOL for v, b in zip(self.per_k_violations, self.bounds))

    @property
    def beats_delta1(self) -> bool:
        return self.best_value > self.bounds[0] + DOMINANCE_TOL


def exhaustive_search(frame: CounterexampleFrame, budget: int = DEFAULT_BUDGET,
                      canonical: bool = False) -> SearchResult:
    size, r = frame.size, frame.params.r
    tracker = _Tracker(frame, _Evaluator(frame))
    for p in enumerate_partitions(size, r, budget=budget, canonical=canonical):
        tracker.visit(np.asarray(p.assignment))
    settings = {"canonical": canonical, "budget": budget}
    if canonical:
        settings["reduction"] = Fraction(r**size, tracker.evaluated)
    return tracker.result("exhaustive", **settings)


def random_search(frame: CounterexampleFrame, samples: int, seed: int) -> SearchResult:
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    tracker = _Tracker(frame, _Evaluator(frame))
    for _ in range(samples):
        tracker.visit(rng.integers(0, frame.params.r, size=frame.size))
    return tracker.result("random", samples=samples, seed=seed, rng=RNG_NAME)


def local_search(frame: CounterexampleFrame, restarts: int, iters: int, seed: int,
                 swaps: bool = False) -> SearchResult:
    """Seeded-restart hill climbing on single-row relabelings.

    A move is accepted only when it strictly improves the pair
    (partition value, excess-adjusted bound) lexicographically, so the
    partition value never decreases along a run. ``swaps=True`` additionally
    proposes exchanging the labels of two rows every other iteration, which
    lets a run move between size-balanced partitions.
    """
    if restarts < 1 or iters < 1:
        raise ValueError("restarts and iters must be >= 1")
    r, size = frame.params.r, frame.size
    tracker = _Tracker(frame, _Evaluator(frame))
    for child in np.random.SeedSequence(seed).spawn(restarts):
        rng = np.random.Generator(np.random.PCG64(child))
        cur = rng.integers(0, r, size=size)
        cur_key = tracker.visit(cur)
        for it in range(iters):
            cand = cur.copy()
            if swaps and it % 2:
                i, j = rng.choice(size, size=2, replace=False)
                if cand[i] == cand[j]:
                    continue
                cand[i], cand[j] = cand[j], cand[i]
            else:
                i = rng.integers(size)
                cand[i] = (cand[i] + rng.integers(1, r)) % r
            key = tracker.visit(cand)
            if key > cur_key:
                cur, cur_key = cand, key
    return tracker.result("local_search", restarts=restarts, iters=iters, seed=seed,
                          swaps=swaps, rng=RNG_NAME)


def assignment_from_labels(labels: Sequence[int], r: int, one_based: bool = True) -> Partition:
    shift = 1 if one_based else 0
    return Partition(r, [int(x) - shift for x in labels])
