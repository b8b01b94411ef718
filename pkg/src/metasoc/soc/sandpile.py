"""Two-dimensional abelian sandpile with open boundaries.

Seed protocol: a single ``numpy.random.default_rng(seed)`` stream (PCG64)
draws all drop sites up front with one call,
``rng.integers(0, width * height, size=drops)``; site ``s`` is the cell at
row ``s // width``, column ``s % width``.

Toppling uses synchronous rounds: every unstable cell loses ``threshold``
grains at once and each of its von Neumann neighbours gains one.  The
avalanche size is the number of topplings (independent of toppling order)
and the duration is the number of rounds.  Grains pushed off the edge, and
with ``threshold > 4`` the ``threshold - 4`` grains per toppling that no
neighbour receives, are counted as lost.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .records import AvalancheRecord


@dataclass(frozen=True)
class SandpileConfig:
    width: int
    height: int
    drops: int
    seed: int
    threshold: int = 4
    boundary: str = "open"

    def __post_init__(self):
        if self.width < 2 or self.height < 2:
            raise ValueError("sandpile grid must be at least 2x2")
        if self.threshold < 4:
            # below 4 a toppling creates grains and relaxation need not terminate
            raise ValueError("threshold must be at least 4")
        if self.boundary != "open":
            raise ValueError("only open boundaries are supported")
        if self.drops < 0:
            raise ValueError("drops must be non-negative")


@njit(cache=False)
def _relax(grid, threshold, r0, c0, cur, nxt, queued):
    h, w = grid.shape
    if grid[r0, c0] < threshold:
        return 0, 0, 0
    ncur = 1
    cur[0] = r0 * w + c0
    queued[r0 * w + c0] = True
    topplings = 0
    rounds = 0
    lost = 0
    spill = threshold - 4
    while ncur > 0:
        rounds += 1
        for i in range(ncur):
            cell = cur[i]
            queued[cell] = False
            grid[cell // w, cell % w] -= threshold
        topplings += ncur
        lost += spill * ncur
        for i in range(ncur):
            r = cur[i] // w
            c = cur[i] % w
            if r > 0:
                grid[r - 1, c] += 1
            else:
                lost += 1
            if r < h - 1:
                grid[r + 1, c] += 1
            else:
                lost += 1
            if c > 0:
                grid[r, c - 1] += 1
            else:
                lost += 1
            if c < w - 1:
                grid[r, c + 1] += 1
            else:
                lost += 1
        nnext = 0
        for i in range(ncur):
            r = cur[i] // w
            c = cur[i] % w
            for k in range(5):
                rr, cc = r, c
                if k == 1:
                    rr = r - 1
                elif k == 2:
                    rr = r + 1
                elif k == 3:
                    cc = c - 1
                elif k == 4:
                    cc = c + 1
                if rr < 0 or rr >= h or cc < 0 or cc >= w:
                    continue
                cell = rr * w + cc
                if grid[rr, cc] >= threshold and not queued[cell]:
                    queued[cell] = True
                    nxt[nnext] = cell
                    nnext += 1
        for i in range(nnext):
            cur[i] = nxt[i]
        ncur = nnext
    return topplings, rounds, lost


class Sandpile:
    """Mutable sandpile state; ``add`` drops one grain and relaxes the grid."""

    def __init__(self, width: int, height: int, threshold: int = 4, grid=None):
        SandpileConfig(width, height, 0, 0, threshold)  # validation only
        self.threshold = threshold
        if grid is None:
            self.grid = np.zeros((height, width), dtype=np.int64)
        else:
            self.grid = np.array(grid, dtype=np.int64)
            if self.grid.shape != (height, width):
                raise ValueError("grid shape does not match width/height")
        self.added = int(self.grid.sum())
        self.lost = 0
        n = width * height
        self._cur = np.empty(n, dtype=np.int64)
        self._nxt = np.empty(n, dtype=np.int64)
        self._queued = np.zeros(n, dtype=np.bool_)

    @property
    def mass(self) -> int:
        return int(self.grid.sum())

    def add(self, row: int, col: int, grains: int = 1) -> tuple[int, int]:
        """Drop grains at (row, col); returns (topplings, rounds)."""
        self.grid[row, col] += grains
        self.added += grains
        return self.relax_at(row, col)

    def relax_at(self, row: int, col: int) -> tuple[int, int]:
        size, rounds, lost = _relax(self.grid, self.threshold, row, col,
                                    self._cur, self._nxt, self._queued)
        self.lost += int(lost)
        return int(size), int(rounds)

    def stabilize(self) -> int:
        """Relax every unstable cell (for arbitrary starting grids); returns topplings."""
        total = 0
        while True:
            unstable = np.argwhere(self.grid >= self.threshold)
            if len(unstable) == 0:
                return total
            r, c = unstable[0]
            total += self.relax_at(int(r), int(c))[0]


def drop_sites(config: SandpileConfig) -> np.ndarray:
    rng = np.random.default_rng(config.seed)
    return rng.integers(0, config.width * config.height, size=config.drops)


def run_sandpile(config: SandpileConfig, pile: Sandpile | None = None) -> list[AvalancheRecord]:
    """Drive an initially empty pile with ``config.drops`` random grains."""
    if pile is None:
        pile = Sandpile(config.width, config.height, config.threshold)
    records = []
    for step, site in enumerate(drop_sites(config)):
        size, rounds = pile.add(int(site) // config.width, int(site) % config.width)
        records.append(AvalancheRecord(step, size, rounds))
    return records
