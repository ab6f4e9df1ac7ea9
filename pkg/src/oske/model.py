"""Problem state for the online simple knapsack with item size estimates.

Sizes are plain floats. Adversaries and instance files keep every size on a
grid of resolution ``1/D`` so that the offline optimum can be computed
exactly; :func:`validate_reveal` allows a slack of ``2/D`` for values that
were snapped independently of their estimate.
"""

from __future__ import annotations

import json
import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any

from .errors import IllegalAction

DEFAULT_GRID = 10**6
# slack on the unit capacity, far below one grid step
CAPACITY_TOL = 1e-9


class Mode(str, Enum):
    ADDITIVE = "additive"
    MULTIPLICATIVE = "multiplicative"


@dataclass(frozen=True)
class Accuracy:
    """Error bound on the announced sizes."""

    delta: float
    mode: Mode = Mode.ADDITIVE

    def __post_init__(self) -> None:
        if not (math.isfinite(self.delta) and self.delta >= 0):
            raise ValueError(f"accuracy delta must be finite and >= 0, got {self.delta!r}")
        object.__setattr__(self, "mode", Mode(self.mode))

    def band(self, announced: float) -> tuple[float, float]:
        """Interval of legal actual sizes for an announced size, clamped to [0, 1]."""
        if self.mode is Mode.ADDITIVE:
            lo, hi = announced - self.delta, announced + self.delta
        else:
            lo, hi = announced / (1 + self.delta), announced * (1 + self.delta)
        return max(lo, 0.0), min(hi, 1.0)

    def to_dict(self) -> dict[str, Any]:
        return {"delta": self.delta, "mode": self.mode.value}


def snap(value: float, grid: int = DEFAULT_GRID) -> float:
    """Round ``value`` to the nearest multiple of ``1/grid``."""
    return round(value * grid) / grid


def grid_units(value: float, grid: int = DEFAULT_GRID) -> int:
    return round(value * grid)


def on_grid(value: float, grid: int = DEFAULT_GRID, tol: float = 1e-12) -> bool:
    return abs(value - round(value * grid) / grid) <= tol


def check_estimates(estimates: Iterable[float]) -> tuple[float, ...]:
    """Return the estimates as a tuple, rejecting sizes outside [0, 1]."""
    out = tuple(float(x) for x in estimates)
    for i, x in enumerate(out):
        if not 0.0 <= x <= 1.0:
            raise ValueError(f"announced size #{i} = {x!r} is outside [0, 1]")
    return out


def validate_reveal(
    announced: float, actual: float, acc: Accuracy, grid: int = DEFAULT_GRID
) -> bool:
    """True iff ``actual`` is a legal size for an item announced as ``announced``."""
    if not 0.0 <= actual <= 1.0:
        return False
    slack = 2.0 / grid
    lo, hi = acc.band(announced)
    return lo - slack <= actual <= hi + slack


@dataclass(frozen=True)
class RevealedItem:
    index: int
    actual: float


class ActionKind(str, Enum):
    REJECT = "reject"
    PACK = "pack"
    REMOVE_THEN_PACK = "remove_then_pack"
    REMOVE_ONLY = "remove_only"
    END = "end"


@dataclass(frozen=True)
class Action:
    kind: ActionKind
    remove: frozenset[int] = frozenset()

    @classmethod
    def reject(cls) -> Action:
        return cls(ActionKind.REJECT)

    @classmethod
    def pack(cls) -> Action:
        return cls(ActionKind.PACK)

    @classmethod
    def end(cls) -> Action:
        return cls(ActionKind.END)

    @classmethod
    def remove_then_pack(cls, indices: Iterable[int]) -> Action:
        return cls(ActionKind.REMOVE_THEN_PACK, frozenset(indices))

    @classmethod
    def remove_only(cls, indices: Iterable[int]) -> Action:
        return cls(ActionKind.REMOVE_ONLY, frozenset(indices))

    @property
    def packs(self) -> bool:
        return self.kind in (ActionKind.PACK, ActionKind.REMOVE_THEN_PACK)

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {"kind": self.kind.value}
        if self.remove:
            d["remove"] = sorted(self.remove)
        return d

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> Action:
        return cls(ActionKind(d["kind"]), frozenset(int(i) for i in d.get("remove", ())))


@dataclass(frozen=True)
class KnapsackState:
    """Packed items (index -> actual size) and whether the policy has ended."""

    packed: Mapping[int, float] = field(default_factory=dict)
    terminated: bool = False
    load: float = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "load", math.fsum(self.packed.values()))

    def fits(self, size: float) -> bool:
        return self.load + size <= 1.0 + CAPACITY_TOL


def apply_action(
    state: KnapsackState, action: Action, item: RevealedItem, removable: bool
) -> KnapsackState:
    """Play ``action`` on ``item``; removals happen before the pack."""
    if state.terminated:
        raise IllegalAction("the policy already ended the game")
    kind = action.kind
    if kind is ActionKind.REJECT:
        return state
    if kind is ActionKind.END:
        return replace(state, terminated=True)

    packed = dict(state.packed)
    if kind in (ActionKind.REMOVE_THEN_PACK, ActionKind.REMOVE_ONLY):
        if not removable:
            raise IllegalAction("removal is only legal in removability mode")
        missing = action.remove - packed.keys()
        if missing:
            raise IllegalAction(f"cannot remove unpacked items {sorted(missing)}")
        for i in action.remove:
            del packed[i]
        if kind is ActionKind.REMOVE_ONLY:
            return KnapsackState(packed)

    if item.index in packed:
        raise IllegalAction(f"item {item.index} is already packed")
    load = math.fsum(packed.values())
    if load + item.actual > 1.0 + CAPACITY_TOL:
        raise IllegalAction(
            f"item {item.index} of size {item.actual!r} does not fit on load {load!r}"
        )
    packed[item.index] = item.actual
    return KnapsackState(packed)


def _ratio_to_json(r: float) -> float | str:
    return "inf" if math.isinf(r) else r


def _ratio_from_json(r: float | str) -> float:
    return math.inf if r == "inf" else float(r)


@dataclass(frozen=True)
class Transcript:
    """Full record of one game."""

    accuracy: Accuracy
    removable: bool
    estimates: tuple[float, ...]
    reveals: tuple[RevealedItem, ...]
    actions: tuple[Action, ...]
    final_gain: float
    opt_value: float
    ratio: float
    policy: str = ""
    adversary: str | None = None
    case: str | None = None
    target_ratio: float | None = None

    @property
    def sizes(self) -> tuple[float, ...]:
        return tuple(r.actual for r in self.reveals)

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {
            "accuracy": self.accuracy.to_dict(),
            "removable": self.removable,
            "estimates": list(self.estimates),
            "reveals": [{"index": r.index, "actual": r.actual} for r in self.reveals],
            "actions": [a.to_dict() for a in self.actions],
            "final_gain": self.final_gain,
            "opt_value": self.opt_value,
            "ratio": _ratio_to_json(self.ratio),
            "policy": self.policy,
        }
        if self.adversary is not None:
            d["adversary"] = self.adversary
            d["case"] = self.case
            d["target_ratio"] = self.target_ratio
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> Transcript:
        acc = d["accuracy"]
        return cls(
            accuracy=Accuracy(float(acc["delta"]), Mode(acc["mode"])),
            removable=bool(d["removable"]),
            estimates=tuple(float(x) for x in d["estimates"]),
            reveals=tuple(RevealedItem(int(r["index"]), float(r["actual"])) for r in d["reveals"]),
            actions=tuple(Action.from_dict(a) for a in d["actions"]),
            final_gain=float(d["final_gain"]),
            opt_value=float(d["opt_value"]),
            ratio=_ratio_from_json(d["ratio"]),
            policy=d.get("policy", ""),
            adversary=d.get("adversary"),
            case=d.get("case"),
            target_ratio=d.get("target_ratio"),
        )

    @classmethod
    def from_json(cls, text: str) -> Transcript:
        return cls.from_dict(json.loads(text))


def replay(
    reveals: Sequence[RevealedItem], actions: Sequence[Action], removable: bool
) -> list[KnapsackState]:
    """States after each step; once the game has ended only rejects are accepted."""
    state = KnapsackState()
    states = []
    for item, action in zip(reveals, actions, strict=True):
        if state.terminated:
            if action.kind is not ActionKind.REJECT:
                raise IllegalAction(f"step {item.index}: {action.kind.value} after the game ended")
        else:
            state = apply_action(state, action, item, removable)
        states.append(state)
    return states


def audit_transcript(t: Transcript, grid: int = DEFAULT_GRID) -> list[str]:
    """Check a transcript against the simulator invariants; return the violations."""
    problems: list[str] = []
    n = len(t.estimates)
    if not (len(t.reveals) == len(t.actions) == n):
        return [f"length mismatch: {n} estimates, {len(t.reveals)} reveals, {len(t.actions)} actions"]
    for i, (announced, item) in enumerate(zip(t.estimates, t.reveals)):
        if item.index != i:
            problems.append(f"reveal #{i} carries index {item.index}")
        if not validate_reveal(announced, item.actual, t.accuracy, grid):
            problems.append(f"reveal #{i}: {item.actual!r} outside band of {announced!r}")
    try:
        states = replay(t.reveals, t.actions, t.removable)
    except IllegalAction as exc:
        return problems + [f"replay failed: {exc}"]
    prev: Mapping[int, float] = {}
    for i, s in enumerate(states):
        if not (-CAPACITY_TOL <= s.load <= 1.0 + CAPACITY_TOL):
            problems.append(f"step {i}: load {s.load!r} outside [0, 1]")
        if not t.removable and not prev.keys() <= s.packed.keys():
            problems.append(f"step {i}: packed set shrank without removability")
        prev = s.packed
    gain = states[-1].load if states else 0.0
    if gain != t.final_gain:
        problems.append(f"replayed gain {gain!r} != recorded {t.final_gain!r}")
    if t.final_gain > t.opt_value + 1e-9:
        problems.append(f"gain {t.final_gain!r} exceeds OPT {t.opt_value!r}")
    return problems
