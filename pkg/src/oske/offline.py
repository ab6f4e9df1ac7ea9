"""Exact offline optimum: the largest subset sum that fits in the unit knapsack."""

from __future__ import annotations

import math
from collections import defaultdict
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .errors import Inconsistent, OffGrid, TooLarge
from .model import CAPACITY_TOL, DEFAULT_GRID

BRUTE_LIMIT = 40


@dataclass(frozen=True)
class OptResult:
    value: float
    chosen: frozenset[int]
    method: str

    def to_dict(self) -> dict:
        return {"value": self.value, "chosen": sorted(self.chosen), "method": self.method}


def _half_sums(values: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
    sums = np.zeros(1)
    masks = np.zeros(1, dtype=np.int64)
    for j, v in enumerate(values):
        sums = np.concatenate([sums, sums + v])
        masks = np.concatenate([masks, masks | (1 << j)])
    return sums, masks


def opt_bruteforce(sizes: Sequence[float]) -> OptResult:
    """Meet-in-the-middle enumeration of all ``2^n`` subsets (``n <= 40``)."""
    n = len(sizes)
    if n > BRUTE_LIMIT:
        raise TooLarge(f"{n} items exceed the enumeration limit of {BRUTE_LIMIT}")
    if n == 0:
        return OptResult(0.0, frozenset(), "brute")
    half = n // 2
    left, right = list(sizes[:half]), list(sizes[half:])
    a_sums, a_masks = _half_sums(left)
    b_sums, b_masks = _half_sums(right)
    order = np.argsort(b_sums, kind="stable")
    b_sorted = b_sums[order]
    cap = 1.0 + CAPACITY_TOL

    idx = np.searchsorted(b_sorted, cap - a_sums, side="right") - 1
    ok = (a_sums <= cap) & (idx >= 0)
    totals = np.where(ok, a_sums + b_sorted[np.maximum(idx, 0)], -1.0)
    best = int(np.argmax(totals))
    a_mask = int(a_masks[best])
    b_mask = int(b_masks[order[idx[best]]])
    chosen = {j for j in range(half) if a_mask >> j & 1}
    chosen |= {half + j for j in range(n - half) if b_mask >> j & 1}
    return OptResult(math.fsum(sizes[i] for i in chosen), frozenset(chosen), "brute")


def _to_units(sizes: Sequence[float], grid: int) -> list[int]:
    units = []
    for i, s in enumerate(sizes):
        u = round(s * grid)
        if abs(s - u / grid) > 1e-12:
            raise OffGrid(f"size #{i} = {s!r} is not a multiple of 1/{grid}")
        units.append(u)
    return units


def opt_grid_dp(sizes: Sequence[float], grid: int = DEFAULT_GRID) -> OptResult:
    """Subset-sum reachability over capacities ``0..grid`` held in one big-int bitset.

    Equal sizes are merged and split into power-of-two bundles, so an
    adversary instance with thousands of identical tiny items costs a handful
    of shifts.
    """
    units = _to_units(sizes, grid)
    by_unit: dict[int, list[int]] = defaultdict(list)
    for i, u in enumerate(units):
        if 0 < u <= grid:
            by_unit[u].append(i)

    pieces: list[tuple[int, int]] = []  # (unit size, copies)
    for u in sorted(by_unit):
        count, m = len(by_unit[u]), 1
        while count > 0:
            take = min(m, count)
            pieces.append((u, take))
            count -= take
            m *= 2

    mask = (1 << (grid + 1)) - 1
    reach = 1
    history = []
    for u, copies in pieces:
        history.append(reach)
        reach = (reach | (reach << (u * copies))) & mask
    best = reach.bit_length() - 1

    taken: dict[int, int] = defaultdict(int)
    cur = best
    for (u, copies), before in zip(reversed(pieces), reversed(history)):
        if not before >> cur & 1:
            cur -= u * copies
            taken[u] += copies
    assert cur == 0
    chosen = frozenset(i for u, k in taken.items() for i in by_unit[u][:k])
    return OptResult(math.fsum(sizes[i] for i in chosen), chosen, "grid_dp")


def optimum(sizes: Sequence[float], grid: int = DEFAULT_GRID) -> OptResult:
    """Pick the cheaper exact method: enumeration for few nonzero items, else the grid DP."""
    nonzero = [i for i, s in enumerate(sizes) if s > 0]
    if len(nonzero) <= 20:
        res = opt_bruteforce([sizes[i] for i in nonzero])
        return OptResult(res.value, frozenset(nonzero[j] for j in res.chosen), res.method)
    return opt_grid_dp(sizes, grid)


def competitive_ratio(opt: float, gain: float) -> float:
    """``opt / gain``; infinity when nothing was gained but something could be."""
    if gain > opt + 1e-9:
        raise Inconsistent(f"online gain {gain!r} exceeds the optimum {opt!r}")
    if gain <= 0.0:
        return 1.0 if opt <= 0.0 else math.inf
    return opt / gain
