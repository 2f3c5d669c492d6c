"""DFT matrices and per-column scaling."""

from __future__ import annotations

from typing import Sequence

import numpy as np


def dft(m: int) -> np.ndarray:
    """Unitary ``m x m`` DFT with entries ``w**(i*j) / sqrt(m)``, ``w = exp(2*pi*i/m)``.

    Exponents run over ``0..m-1``. The exponent ``i*j`` is reduced mod ``m``
    before evaluating the root so large products keep full accuracy.
    """
    if m < 1:
        raise ValueError(f"DFT size must be >= 1, got {m}")
    idx = np.arange(m)
    exponents = np.outer(idx, idx) % m
    return np.exp(2j * np.pi * exponents / m) / np.sqrt(m)


def scale_columns(a: np.ndarray, factors: Sequence[float]) -> np.ndarray:
    """Multiply column ``j`` of ``a`` by ``factors[j]`` (non-negative reals)."""
    a = np.asarray(a)
    s = np.asarray(factors, dtype=float)
    if s.ndim != 1 or s.shape[0] != a.shape[1]:
        raise ValueError(f"need {a.shape[1]} column factors, got {s.shape[0] if s.ndim == 1 else s.shape}")
    if not np.all(np.isfinite(s)) or np.any(s < 0):
        raise ValueError("column factors must be finite and non-negative")
    return a * s[np.newaxis, :]
