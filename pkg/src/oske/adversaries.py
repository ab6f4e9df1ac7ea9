"""Adaptive adversaries from the lower-bound constructions.

Each adversary announces its estimates up front, then picks every actual
size after watching how the policy treated the previous items. All sizes are
snapped to the ``1/D`` grid. ``case`` names the branch of the construction
the duel went down, e.g. ``"1.2"`` or ``"2>1.1"`` (``2>1`` means the policy
rejected the first tiny item but packed a later one).
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

from .errors import ParamError
from .model import DEFAULT_GRID, Accuracy, Action, KnapsackState, snap
from .ratios import DELTA_STAR_ADD, ratio_bundle, x_additive


@dataclass(frozen=True)
class AdversaryParams:
    epsilon: float = 0.01
    grid: int = DEFAULT_GRID

    def __post_init__(self) -> None:
        if not 0.0 < self.epsilon < 1.0:
            raise ParamError(f"epsilon must lie in (0, 1), got {self.epsilon!r}")
        inv = 1.0 / self.epsilon
        if abs(inv - round(inv)) > 1e-9:
            raise ParamError(f"1/epsilon must be an integer, got 1/{self.epsilon!r} = {inv!r}")
        if self.grid < 1:
            raise ParamError("grid resolution must be a positive integer")

    @property
    def count(self) -> int:
        """Number of tiny items, ``1/epsilon``."""
        return round(1.0 / self.epsilon)


def lower_bound_tolerance(epsilon: float, grid: int = DEFAULT_GRID) -> float:
    """Allowed shortfall of a forced ratio below its asymptotic target."""
    return 8.0 * epsilon + 16.0 / grid


class Adversary:
    name = "adversary"
    removable = False
    target_ratio: float

    def __init__(self, delta: float, params: AdversaryParams | None = None):
        self.params = params or AdversaryParams()
        self.delta = delta
        self.accuracy = Accuracy(delta)
        self.case = "?"

    def _snap(self, value: float) -> float:
        return min(max(snap(value, self.params.grid), 0.0), 1.0)

    def _sizes(self) -> list[float]:
        raise NotImplementedError

    def announce(self) -> tuple[float, ...]:
        return tuple(self._snap(v) for v in self._sizes())

    def next_size(self, actions: Sequence[Action], state: KnapsackState) -> float:
        return self._snap(self._next(len(actions), state))

    def _next(self, i: int, state: KnapsackState) -> float:
        raise NotImplementedError

    def _tiny_prefix(self, state: KnapsackState, n: int) -> tuple[bool, str]:
        packed = any(j < n for j in state.packed)
        if 0 in state.packed:
            return packed, "1"
        return packed, "2>1" if packed else "2"


class PBound(Adversary):
    """Forces ``1/p``: ``1/eps`` tiny items, ``floor(kappa)`` halves, one item at ``1 - p - delta``."""

    name = "p"

    def __init__(self, delta, params=None):
        super().__init__(delta, params)
        if not 0.0 < delta < 0.5:
            raise ParamError(f"the p construction needs 0 < delta < 0.5, got {delta!r}")
        b = ratio_bundle(delta)
        self.p, self.k = b.p, b.kappa_floor
        eps = self.params.epsilon
        if not eps < min(self.p, delta):
            raise ParamError(f"epsilon {eps!r} must be below min(p, delta) = {min(self.p, delta)!r}")
        self.n = self.params.count
        self.target_ratio = 1.0 / self.p

    def _sizes(self):
        return [self.params.epsilon] * self.n + [0.5] * self.k + [1.0 - self.p - self.delta]

    def _next(self, i, state):
        n, k, p, eps = self.n, self.k, self.p, self.params.epsilon
        tiny_packed, prefix = self._tiny_prefix(state, n)
        if i < n:
            return 0.0 if tiny_packed else eps
        half_packed = any(n <= j < n + k for j in state.packed)
        self.case = f"{prefix}.{1 if half_packed else 2}"
        if half_packed:
            return 1.0 - p
        if i < n + k:
            return p if tiny_packed else p + eps
        return 1.0 - p - 2.0 * self.delta


class QBoundHigh(Adversary):
    """Forces ``1/q`` for ``3/16 < delta < 1/2``: tiny items, ``ceil(kappa)`` items at ``delta``, one at ``q + delta``."""

    name = "q-high"

    def __init__(self, delta, params=None):
        super().__init__(delta, params)
        if not 3.0 / 16.0 < delta < 0.5:
            raise ParamError(f"the high-delta q construction needs 3/16 < delta < 0.5, got {delta!r}")
        b = ratio_bundle(delta)
        self.q, self.k = b.q, b.kappa_ceil
        if 1.0 / self.k > 2.0 * delta + 1e-12:
            raise ParamError("an item announced at delta cannot be revealed as 1/ceil(kappa)")
        self.n = self.params.count
        self.target_ratio = 1.0 / self.q

    def _sizes(self):
        return [self.params.epsilon] * self.n + [self.delta] * self.k + [self.q + self.delta]

    def _next(self, i, state):
        n, k = self.n, self.k
        tiny_packed, prefix = self._tiny_prefix(state, n)
        if i < n:
            return 0.0 if tiny_packed else self.params.epsilon
        mid_packed = any(n <= j < n + k for j in state.packed)
        if not tiny_packed:
            self.case = "2"
            return 0.0 if i < n + k else self.q
        self.case = f"{prefix}.{1 if mid_packed else 2}"
        if i < n + k:
            return 0.0 if mid_packed else 1.0 / k
        return 1.0 - 1.0 / k if mid_packed else self.q


class QBoundLow(Adversary):
    """Forces ``1/q`` for ``1/12 < delta < 1/6`` with tiny items and three items at ``1/3 + delta``.

    Tiny items stop once the policy holds ``floor(a/eps) + 1`` of them,
    ``a = 1/3 - 2 delta``; that total lies in ``(a, a + eps]``.
    """

    name = "q-low"

    def __init__(self, delta, params=None):
        super().__init__(delta, params)
        if not 1.0 / 12.0 < delta < 1.0 / 6.0:
            raise ParamError(f"the low-delta q construction needs 1/12 < delta < 1/6, got {delta!r}")
        eps = self.params.epsilon
        self.a = 1.0 / 3.0 - 2.0 * delta
        if self.a + eps > 2.0 * delta + 1e-12:
            raise ParamError(f"epsilon {eps!r} too large: need 1/3 + a + eps <= 1/3 + 2 delta")
        self.quota = math.floor(self.a / eps + 1e-9) + 1
        self.n = self.params.count
        self.q = ratio_bundle(delta).q
        self.target_ratio = 1.0 / self.q

    def _sizes(self):
        return [self.params.epsilon] * self.n + [1.0 / 3.0 + self.delta] * 3

    def _next(self, i, state):
        n, eps = self.n, self.params.epsilon
        held = sum(1 for j, s in state.packed.items() if j < n and s > 0)
        if i < n:
            return 0.0 if held >= self.quota else eps
        big = sorted(j for j in state.packed if j >= n)
        counterpart = 1.0 / 3.0 + 2.0 * self.delta
        if held >= self.quota:
            if not big:
                self.case = "1.2"
                return 1.0 / 3.0
            self.case = "1.1" if big[0] == n else "1.2>1.1"
            return counterpart
        if big:
            self.case = "2.1"
            return counterpart
        self.case = "2.2"
        return 1.0 / 3.0 + (self.a - held * eps) + eps


class NonCompetitive(Adversary):
    """Two items announced at 1/2; with ``delta >= 1/2`` either can be anything in [0, 1]."""

    name = "noncomp"

    def __init__(self, delta, params=None):
        super().__init__(delta, params)
        if delta < 0.5:
            raise ParamError(f"the non-competitive construction needs delta >= 0.5, got {delta!r}")
        eps = self.params.epsilon
        self.target_ratio = (1.0 - eps / 2.0) / eps

    def _sizes(self):
        return [0.5, 0.5]

    def _next(self, i, state):
        eps = self.params.epsilon
        if i == 0:
            return eps
        if 0 in state.packed:
            self.case = "packed"
            return 1.0 - eps / 2.0
        self.case = "rejected"
        return 0.0


class RemovabilityBound(Adversary):
    """Forces ``1/x`` in the removable variant with four items.

    Announced ``(1-x, x+eps, x, 1-x-delta+eps)``. Case ``"0"`` is a policy
    holding neither of the first two items; it is answered like case 1.
    Case ``"2.0"`` is a policy that dropped everything on the third item.
    """

    name = "removability"
    removable = True

    def __init__(self, delta, params=None):
        super().__init__(delta, params)
        if not 0.0 < delta <= DELTA_STAR_ADD + 1e-12:
            raise ParamError(f"the removability construction needs 0 < delta <= {DELTA_STAR_ADD!r}, got {delta!r}")
        eps = self.params.epsilon
        if 2.0 * eps > delta:
            raise ParamError(f"epsilon {eps!r} too large: need x + 2 eps <= x + delta")
        self.x = x_additive(delta)
        self.target_ratio = 1.0 / self.x

    def _sizes(self):
        x, eps = self.x, self.params.epsilon
        return [1.0 - x, x + eps, x, 1.0 - x - self.delta + eps]

    def _next(self, i, state):
        x, eps = self.x, self.params.epsilon
        if i == 0:
            return 1.0 - x
        if i == 1:
            return x + eps
        if i == 2:
            if 1 in state.packed:
                self.case = "1"
            elif 0 in state.packed:
                self.case = "2"
            else:
                self.case = "0"
            return x + 2.0 * eps if self.case == "2" else x
        if self.case != "2":
            return 1.0 - x + eps
        if 2 in state.packed:
            self.case = "2.1"
            return 1.0 - x - eps
        if 0 in state.packed:
            self.case = "2.2"
            return 1.0 - x - 2.0 * self.delta + eps
        self.case = "2.0"
        return 1.0 - x - eps


ADVERSARIES = {
    "p": PBound,
    "q-high": QBoundHigh,
    "q-low": QBoundLow,
    "noncomp": NonCompetitive,
    "removability": RemovabilityBound,
}


def make_adversary(name: str, delta: float, params: AdversaryParams | None = None) -> Adversary:
    try:
        cls = ADVERSARIES[name]
    except KeyError:
        raise ParamError(f"unknown adversary {name!r}; choose from {', '.join(ADVERSARIES)}") from None
    return cls(delta, params)


def adv_p_bound(delta: float, params: AdversaryParams | None = None) -> PBound:
    return PBound(delta, params)


def adv_q_bound_high(delta: float, params: AdversaryParams | None = None) -> QBoundHigh:
    return QBoundHigh(delta, params)


def adv_q_bound_low(delta: float, params: AdversaryParams | None = None) -> QBoundLow:
    return QBoundLow(delta, params)


def adv_noncompetitive(delta: float, params: AdversaryParams | None = None) -> NonCompetitive:
    return NonCompetitive(delta, params)


def adv_removability(delta: float, params: AdversaryParams | None = None) -> RemovabilityBound:
    return RemovabilityBound(delta, params)
