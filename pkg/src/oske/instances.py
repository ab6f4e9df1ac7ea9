"""Instance files and random instance generation.

Instance JSON::

    {"mode": "additive", "delta": 0.25, "removable": false,
     "items": [{"announced": 0.5, "actual": 0.3}, ...]}
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .errors import InstanceError
from .model import DEFAULT_GRID, Accuracy, Mode, snap, validate_reveal


@dataclass(frozen=True)
class Instance:
    accuracy: Accuracy
    removable: bool
    announced: tuple[float, ...]
    actual: tuple[float, ...]

    def to_dict(self) -> dict[str, Any]:
        return {
            "mode": self.accuracy.mode.value,
            "delta": self.accuracy.delta,
            "removable": self.removable,
            "items": [{"announced": a, "actual": x} for a, x in zip(self.announced, self.actual)],
        }

    def invalid_items(self, grid: int = DEFAULT_GRID) -> list[int]:
        return [
            i
            for i, (a, x) in enumerate(zip(self.announced, self.actual))
            if not (0.0 <= a <= 1.0 and validate_reveal(a, x, self.accuracy, grid))
        ]


def _number(value: Any, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InstanceError(f"{where}: expected a number, got {value!r}")
    return float(value)


def parse_instance(data: Any, source: str = "<instance>") -> Instance:
    if not isinstance(data, dict):
        raise InstanceError(f"{source}: top level must be an object")
    try:
        mode = Mode(data.get("mode", "additive"))
    except ValueError:
        raise InstanceError(f"{source}: mode must be 'additive' or 'multiplicative'") from None
    delta = _number(data.get("delta"), f"{source}: delta")
    if delta < 0:
        raise InstanceError(f"{source}: delta must be >= 0")
    removable = data.get("removable", False)
    if not isinstance(removable, bool):
        raise InstanceError(f"{source}: removable must be true or false")
    items = data.get("items")
    if not isinstance(items, list):
        raise InstanceError(f"{source}: items must be a list")
    announced, actual = [], []
    for i, item in enumerate(items):
        if not isinstance(item, dict):
            raise InstanceError(f"{source}: items[{i}] must be an object")
        announced.append(_number(item.get("announced"), f"{source}: items[{i}].announced"))
        actual.append(_number(item.get("actual"), f"{source}: items[{i}].actual"))
    return Instance(Accuracy(delta, mode), removable, tuple(announced), tuple(actual))


def load_instance(path: str | Path) -> Instance:
    path = Path(path)
    text = path.read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    return parse_instance(data, str(path))


def save_instance(instance: Instance, path: str | Path) -> None:
    Path(path).write_text(json.dumps(instance.to_dict(), indent=2) + "\n")


def _announced_pool(rng: random.Random, delta: float, marks: list[float]) -> float:
    roll = rng.random()
    if roll < 0.35 and marks:
        # cluster around the policies' decision thresholds
        return rng.choice(marks) + rng.uniform(-0.03, 0.03)
    if roll < 0.5:
        return rng.uniform(0.0, 0.1)
    return rng.random()


def random_instance(
    rng: random.Random,
    delta: float,
    *,
    n_max: int = 10,
    removable: bool = False,
    marks: list[float] | None = None,
    grid: int = DEFAULT_GRID,
) -> Instance:
    """A random additive instance on the grid.

    Announced sizes are drawn uniformly, near zero, or near the given
    ``marks``; actual sizes are uniform inside the band, or at one of its
    edges a third of the time.
    """
    n = rng.randint(1, n_max)
    d = math.floor(delta * grid + 1e-9) / grid
    announced, actual = [], []
    for _ in range(n):
        a = snap(min(max(_announced_pool(rng, delta, marks or []), 0.0), 1.0), grid)
        lo, hi = max(a - d, 0.0), min(a + d, 1.0)
        roll = rng.random()
        if roll < 1 / 6:
            x = lo
        elif roll < 1 / 3:
            x = hi
        else:
            x = snap(rng.uniform(lo, hi), grid)
        announced.append(a)
        actual.append(min(max(x, lo), hi))
    return Instance(Accuracy(delta), removable, tuple(announced), tuple(actual))
