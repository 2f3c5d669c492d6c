import dataclasses
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dftpaving.analysis import riesz_lower_bound
from dftpaving.construction import FrameParams, build_stack
from dftpaving.partition import Partition
from dftpaving.witness import CoordinateProjection, WitnessError, find_witness, verify_witness


def test_trivial_case(frames):
    f = frames(2, 1)
    w = find_witness(f, Partition(2, [0, 1, 1, 0]), 1)
    assert w.achieved <= 1 + 1e-8
    assert verify_witness(f, w)[0]


def test_hand_solvable_case(frames):
    f = frames(2, 2)
    p = Partition(2, [0, 0, 1, 1, 0, 1, 0, 1])
    w = find_witness(f, p, 1)
    assert w.j == 0 and w.support == (0, 1)
    # column 0 of rows 0 and 1 is sqrt(2)/2 for both, so a is (1, -1)/sqrt(2) up to phase
    a = w.coefficients / (w.coefficients[0] / abs(w.coefficients[0]))
    assert np.allclose(a, np.array([1, -1]) / np.sqrt(2), atol=1e-12)
    assert w.achieved <= 2 / 3 + 1e-8
    assert verify_witness(f, w)[0]


def test_three_block_frame(frames):
    f = frames(3, 2)
    rng = np.random.default_rng(11)
    for _ in range(20):
        p = Partition(3, rng.integers(0, 3, size=f.size))
        for k in (1, 2):
            w = find_witness(f, p, k)
            assert w.achieved <= f.deltas[k - 1] + 1e-8
            assert w.bound_exact == f.deltas_exact[k - 1]
    assert f.deltas_exact[1] == Fraction(9, 10)


def test_k_equal_r_rejected(frames):
    with pytest.raises(ValueError):
        find_witness(frames(2, 2), Partition(2, [0] * 8), 2)
    with pytest.raises(ValueError):
        find_witness(frames(2, 2), Partition(2, [0] * 4), 1)


def test_verify_rejects_tampering(frames):
    f = frames(2, 3)
    w = find_witness(f, Partition(2, [0, 1] * 6), 1)
    assert verify_witness(f, w)[0]
    doubled = dataclasses.replace(w, coefficients=2 * w.coefficients)
    ok, info = verify_witness(f, doubled)
    assert not ok and not info["checks"]["unit_norm"]
    lowered = dataclasses.replace(w, bound=w.achieved - 1e-3)
    ok, info = verify_witness(f, lowered)
    assert not ok and not info["checks"]["within_bound"]
    ok, info = verify_witness(f, dataclasses.replace(w, achieved=w.achieved + 1e-6))
    assert not ok and not info["checks"]["matches_achieved"]


def test_coordinate_projection():
    with pytest.raises(ValueError):
        CoordinateProjection(5, 4)
    x = np.arange(4, dtype=complex)
    assert np.array_equal(CoordinateProjection(2, 4).complement(x), [0, 0, 2, 3])


def test_broken_construction_is_detected(frames):
    f = frames(3, 2)
    B = f.B.copy()
    B[6, 0] = 0.1
    B.setflags(write=False)
    bad = dataclasses.replace(f, B=B)
    p = Partition(3, [1] * 18)
    with pytest.raises(WitnessError):
        find_witness(bad, p, 2)


@settings(max_examples=150, deadline=None)
@given(st.sampled_from([(2, 1), (2, 3), (3, 2), (3, 4), (4, 2), (4, 3)]), st.data())
def test_certificate_properties(rn, data):
    f = build_stack(FrameParams(*rn))
    r, n = rn
    labels = data.draw(st.lists(st.integers(0, r - 1), min_size=f.size, max_size=f.size))
    p = Partition(r, labels)
    k = data.draw(st.integers(1, r - 1))
    w = find_witness(f, p, k)
    rows = f.row_blocks[k - 1]
    # zero prefix of every row in D_k
    zeroed = (k - 1) * (n - 1)
    if zeroed:
        assert np.max(np.abs(f.B[rows.start:rows.stop, :zeroed])) <= 1e-12
    assert len(w.support) >= n
    assert set(w.support) <= set(rows)
    assert abs(np.linalg.norm(w.coefficients) - 1) <= 1e-12
    assert w.achieved <= f.deltas[k - 1] + 1e-8
    assert abs(w.achieved - w.diagnostics["middle_step"]) <= 1e-8
    assert w.diagnostics["unscaled_norm2"] == pytest.approx(1.0, abs=1e-12)
    assert w.achieved >= riesz_lower_bound(f, w.support) - 1e-8
    ok, info = verify_witness(f, w)
    assert ok, info
