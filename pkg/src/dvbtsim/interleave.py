"""12x12 block frequency interleaver on constellation cells.

Each block of ``rows * cols`` cells is written row by row and read column by
column.  For the square 12x12 array that is a transpose, so the permutation
is its own inverse.  A "cell" is any unit along the first axis: an integer
label, a row of ``cell_bits`` bits, or a row of per-bit LLRs.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, SizingError


@dataclass(frozen=True)
class InterleaverParams:
    rows: int = 12
    cols: int = 12
    cell_bits: int = 4

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ParameterError("interleaver dimensions must be positive")
        if self.cell_bits not in (2, 4, 6):
            raise ParameterError(f"cell_bits must be 2, 4 or 6, got {self.cell_bits}")

    @property
    def block_cells(self):
        return self.rows * self.cols


def _blocks(cells, p):
    cells = np.asarray(cells)
    if cells.shape[0] % p.block_cells:
        raise SizingError(f"{cells.shape[0]} cells is not a multiple of {p.block_cells}")
    return cells.reshape((-1, p.rows, p.cols) + cells.shape[1:])


def interleave_block(cells, p=InterleaverParams()):
    """Output index ``c * rows + r`` receives input index ``r * cols + c``."""
    cells = np.asarray(cells)
    b = _blocks(cells, p)
    return np.swapaxes(b, 1, 2).reshape(cells.shape)


def deinterleave_block(cells, p=InterleaverParams()):
    cells = np.asarray(cells)
    if cells.shape[0] % p.block_cells:
        raise SizingError(f"{cells.shape[0]} cells is not a multiple of {p.block_cells}")
    b = cells.reshape((-1, p.cols, p.rows) + cells.shape[1:])
    return np.swapaxes(b, 1, 2).reshape(cells.shape)


def permutation(p=InterleaverParams()):
    """``perm[j]`` is the input index that lands on output index ``j``."""
    return interleave_block(np.arange(p.block_cells), p)
