import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from dvbtsim.errors import ParameterError, SizingError
from dvbtsim.interleave import (InterleaverParams, deinterleave_block, interleave_block,
                                permutation)


def test_index_map():
    perm = permutation()
    for r in range(12):
        for c in range(12):
            assert perm[r * 12 + c] == c * 12 + r
    assert perm[12] == 1
    assert perm[0] == 0 and perm[143] == 143


def test_constant_block_unchanged():
    x = np.full(144, 7)
    np.testing.assert_array_equal(interleave_block(x), x)


@settings(max_examples=100)
@given(st.integers(1, 4).flatmap(lambda b: arrays(np.int64, 144 * b)))
def test_inverse_and_involution(x):
    y = interleave_block(x)
    np.testing.assert_array_equal(deinterleave_block(y), x)
    np.testing.assert_array_equal(interleave_block(deinterleave_block(x)), x)
    np.testing.assert_array_equal(interleave_block(y), x)


@settings(max_examples=50)
@given(st.integers(1, 3).flatmap(lambda b: arrays(np.int64, 144 * b)))
def test_permutes_within_each_block(x):
    y = interleave_block(x)
    for b in range(x.size // 144):
        blk = slice(144 * b, 144 * (b + 1))
        assert sorted(y[blk]) == sorted(x[blk])


def test_bursts_spread_over_rows():
    for start in range(144 - 12 + 1):
        burst = np.zeros(144, dtype=bool)
        burst[start:start + 12] = True
        rows = np.flatnonzero(deinterleave_block(burst)) // 12
        assert len(set(rows.tolist())) == 12


def test_cells_with_bits():
    cells = np.arange(288 * 4).reshape(288, 4)
    out = interleave_block(cells, InterleaverParams(cell_bits=4))
    np.testing.assert_array_equal(out[12], cells[1])
    np.testing.assert_array_equal(out[144 + 12], cells[145])
    np.testing.assert_array_equal(deinterleave_block(out), cells)


def test_non_square_inverse():
    p = InterleaverParams(rows=3, cols=5)
    x = np.arange(30)
    np.testing.assert_array_equal(deinterleave_block(interleave_block(x, p), p), x)


def test_sizing():
    with pytest.raises(SizingError):
        interleave_block(np.zeros(143))
    with pytest.raises(SizingError):
        deinterleave_block(np.zeros(145))


def test_cell_bits_validated():
    with pytest.raises(ParameterError):
        InterleaverParams(cell_bits=3)
