"""Explicit certificates that a block of a partition has a small Riesz bound.

Given a partition and ``k <= r-1``, pick the block ``j`` holding the most rows
of ``D_k`` (at least ``n`` of them). Rows of ``D_k`` vanish on the first
``(k-1)(n-1)`` columns, so killing the next ``n-1`` coordinates costs ``n-1``
linear conditions on at least ``n`` coefficients. A unit solution ``a`` leaves
``sum a_i f_i`` supported on columns where every row of ``D_k`` carries the
same factor ``sqrt(delta_k)``; hence ``||sum a_i f_i||^2 <= delta_k``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .construction import CounterexampleFrame
from .linalg import nullspace_vector
from .partition import Partition, pigeonhole_block

ZERO_TOL = 1e-12
NORM_TOL = 1e-12
BOUND_TOL = 1e-8
RECOMPUTE_TOL = 1e-9


class WitnessError(RuntimeError):
    """The construction did not have the structure the certificate relies on."""


@dataclass(frozen=True)
class CoordinateProjection:
    width: int
    ambient: int

    def __post_init__(self):
        if not 0 <= self.width <= self.ambient:
            raise ValueError(f"need 0 <= width <= ambient, got {self.width}, {self.ambient}")

    def complement(self, x: np.ndarray) -> np.ndarray:
        """``(I - P) x``: drop the first ``width`` coordinates."""
        out = np.array(x, dtype=np.complex128)
        out[: self.width] = 0
        return out


@dataclass(frozen=True, eq=False)
class RieszWitness:
    k: int
    j: int
    support: tuple[int, ...]
    coefficients: np.ndarray
    achieved: float
    bound: float
    bound_exact: Fraction
    diagnostics: dict = field(default_factory=dict)


def find_witness(frame: CounterexampleFrame, p: Partition, k: int) -> RieszWitness:
    r, n, m = frame.params.r, frame.params.n, frame.params.dim
    if not 1 <= k <= r - 1:
        raise ValueError(f"witnesses exist for 1 <= k <= r-1 = {r - 1}, got k={k}")
    if p.size != frame.size or p.arity != r:
        raise ValueError(f"partition of {p.size} rows into {p.arity} blocks does not fit a frame "
                         f"of {frame.size} rows with r={r}")

    j = pigeonhole_block(p, frame, k)
    rows = frame.row_blocks[k - 1]
    support = tuple(i for i in rows if p.assignment[i] == j)
    F = frame.B[list(support)]

    zeroed = (k - 1) * (n - 1)
    width = k * (n - 1)
    prefix = float(np.max(np.abs(F[:, :zeroed]))) if zeroed else 0.0
    if prefix > ZERO_TOL:
        raise WitnessError(f"rows of D_{k} are not zero on their first {zeroed} columns ({prefix:.3e})")
    tail = frame.factors[k - 1, width:]
    expected = np.sqrt(frame.deltas[k - 1])
    if tail.size and float(np.max(np.abs(tail - expected))) > ZERO_TOL:
        raise WitnessError(f"columns past {width} of block {k} are not uniformly scaled by sqrt(delta_{k})")

    # column c of the system holds coordinates zeroed..width-1 of f_{support[c]}
    system = F[:, zeroed:width].T
    a = nullspace_vector(system) if width > zeroed else _first_unit(len(support))
    if a is None:
        raise WitnessError(f"no nullspace for a {system.shape[0]}x{system.shape[1]} system")

    combo = a @ F
    achieved = float(np.vdot(combo, combo).real)

    g = a @ frame.base[[i - rows.start for i in support]]
    proj = CoordinateProjection(width, m)
    middle = frame.deltas[k - 1] * float(np.linalg.norm(proj.complement(g)) ** 2)
    diagnostics = {
        "constraint_residual": float(np.linalg.norm(combo[:width])),
        "prefix_max": prefix,
        "unscaled_tail_norm2": float(np.linalg.norm(proj.complement(g)) ** 2),
        "middle_step": middle,
        "middle_step_gap": abs(achieved - middle),
        "unscaled_norm2": float(np.linalg.norm(g) ** 2),
    }
    witness = RieszWitness(k=k, j=j, support=support, coefficients=a, achieved=achieved,
                           bound=frame.deltas[k - 1], bound_exact=frame.deltas_exact[k - 1],
                           diagnostics=diagnostics)
    if achieved > witness.bound + BOUND_TOL:
        raise WitnessError(f"witness achieves {achieved!r} > delta_{k} = {witness.bound!r}")
    return witness


def _first_unit(size: int) -> np.ndarray:
    v = np.zeros(size, dtype=np.complex128)
    v[0] = 1.0
    return v


def verify_witness(frame: CounterexampleFrame, w: RieszWitness) -> tuple[bool, dict]:
    """Independently recompute ``||sum a_i f_i||^2`` and check the certificate."""
    a = np.asarray(w.coefficients, dtype=np.complex128)
    info: dict = {}
    if a.shape != (len(w.support),):
        info["error"] = f"{a.shape[0] if a.ndim else 0} coefficients for {len(w.support)} support rows"
        return False, info
    if any(not 0 <= i < frame.size for i in w.support):
        info["error"] = "support index out of range"
        return False, info

    total = np.zeros(frame.B.shape[1], dtype=np.complex128)
    for coef, i in zip(a, w.support):
        total += coef * frame.B[i]
    recomputed = float(sum(abs(z) ** 2 for z in total))
    norm = float(np.sqrt(sum(abs(c) ** 2 for c in a)))
    info.update(recomputed=recomputed, coefficient_norm=norm,
                recompute_gap=abs(recomputed - w.achieved), bound=w.bound)

    blocks = {frame.block_of_row(i) for i in w.support}
    checks = {
        "support_in_block": blocks <= {w.k},
        "unit_norm": abs(norm - 1.0) <= NORM_TOL,
        "matches_achieved": abs(recomputed - w.achieved) <= RECOMPUTE_TOL,
        "within_bound": recomputed <= w.bound + BOUND_TOL,
    }
    info["checks"] = checks
    return all(checks.values()), info
