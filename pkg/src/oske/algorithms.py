"""Online policies.

A policy is created empty, receives the announced sizes through
:meth:`Policy.init`, then answers one :meth:`Policy.decide` call per revealed
item. Policies see the estimates, the accuracy, the current item and the
knapsack; never future actual sizes.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence

from .errors import ConfigError
from .model import CAPACITY_TOL, Accuracy, Action, KnapsackState, Mode, RevealedItem, check_estimates
from .ratios import ratio_bundle, x_additive


class Policy:
    name = "policy"

    def init(self, accuracy: Accuracy, estimates: Sequence[float], removable: bool = False) -> None:
        self.accuracy = accuracy
        self.estimates = check_estimates(estimates)
        self.removable = removable

    def decide(self, item: RevealedItem, state: KnapsackState) -> Action:
        raise NotImplementedError


def _greedy(item: RevealedItem, state: KnapsackState) -> Action:
    return Action.pack() if state.fits(item.actual) else Action.reject()


class BlindGreedy(Policy):
    """Pack whatever fits, ignoring the estimates."""

    name = "blind-greedy"

    def decide(self, item, state):
        return _greedy(item, state)


class TakeFirst(Policy):
    """Pack the first nonzero item, then stop."""

    name = "take-first"

    def decide(self, item, state):
        if state.packed:
            return Action.end()
        return Action.pack() if item.actual > 0 else Action.reject()


class RejectAll(Policy):
    name = "reject-all"

    def decide(self, item, state):
        return Action.reject()


class GreedyLargest(Policy):
    """Wait for the largest announced item if it is at least 1/2, else pack greedily.

    Ties go to the first item with the maximum announced size.
    """

    name = "alg1"

    def init(self, accuracy, estimates, removable=False):
        super().init(accuracy, estimates, removable)
        largest = max(self.estimates, default=0.0)
        self.target = self.estimates.index(largest) if largest >= 0.5 else None
        self.done = False

    def decide(self, item, state):
        if self.target is None:
            return _greedy(item, state)
        if self.done:
            return Action.end()
        if item.index == self.target:
            self.done = True
            return Action.pack()
        return Action.reject()


class Refined(Policy):
    """The ``1/min(p, q)``-competitive policy.

    With ``r = min(p, q)``: an item announced at ``r + delta`` or more is
    waited for and packed alone; if every announced size is at most
    ``1 - r - delta`` it packs greedily. Otherwise ``x_l`` is the last item
    announced strictly inside ``(1 - r - delta, r + delta)``. Before ``x_l``
    an item ``y`` is skipped when the load ``m`` lies in ``[t, M]`` or
    ``y + m`` lies in ``(M, r)``, where ``t = r - (x_l' - delta)`` and
    ``M = 1 - (x_l' + delta)``; from ``x_l`` on it packs greedily.
    """

    name = "alg2"

    def init(self, accuracy, estimates, removable=False):
        super().init(accuracy, estimates, removable)
        delta = accuracy.delta
        if accuracy.mode is not Mode.ADDITIVE:
            raise ConfigError("alg2 is defined for additive accuracy only")
        if not 0.0 < delta < 0.5:
            raise ConfigError(f"alg2 needs 0 < delta < 0.5, got {delta!r}")
        r = ratio_bundle(delta).r
        self.r = r
        self.done = False
        self.target = None
        self.last = None
        self.branch = "greedy"
        est = self.estimates
        hit = [i for i, x in enumerate(est) if x >= r + delta]
        if hit:
            self.branch = "single"
            self.target = hit[0]
            return
        if all(x <= 1.0 - r - delta for x in est):
            return
        self.branch = "guarded"
        self.last = max(i for i, x in enumerate(est) if 1.0 - r - delta < x < r + delta)
        xl = est[self.last]
        self.tiny_cut = r - (xl - delta)  # t
        self.medium_cut = 1.0 - (xl + delta)  # M
        self.greedy = False

    def decide(self, item, state):
        if self.branch == "greedy":
            return _greedy(item, state)
        if self.branch == "single":
            if self.done:
                return Action.end()
            if item.index == self.target:
                self.done = True
                return Action.pack()
            return Action.reject()

        if item.index == self.last:
            self.greedy = True
        if self.greedy:
            return _greedy(item, state)
        m = state.load
        t, big_m = self.tiny_cut, self.medium_cut
        if t <= m <= big_m or big_m < item.actual + m < self.r:
            return Action.reject()
        return _greedy(item, state)


class Removable(Policy):
    """The ``1/x`` policy for the removable variant, ``x = (2 - 2 delta)/(3 - 2 delta)``.

    Sizes ``<= 1 - x`` are small, ``>= x`` large, the rest medium. While one
    medium item ``z`` is held, a new medium ``y`` that fits next to it ends
    the game; otherwise the policy keeps the smaller of the two, except at
    ``x_l`` (the last item announced above ``1 - x - delta``) where it keeps
    the larger. With ``keep_larger_at_last=False`` the swap rule is instead
    ``y < z or (y is x_l and y > z)``, which also swaps down at ``x_l``.

    Making room for a medium item removes packed small items largest first.
    """

    name = "alg3"

    def __init__(self, keep_larger_at_last: bool = True):
        self.keep_larger_at_last = keep_larger_at_last
        if not keep_larger_at_last:
            self.name = "alg3-literal"

    def init(self, accuracy, estimates, removable=True):
        super().init(accuracy, estimates, removable)
        if not removable:
            raise ConfigError("alg3 needs the removability variant")
        if accuracy.mode is not Mode.ADDITIVE:
            raise ConfigError("alg3 is defined for additive accuracy only")
        delta = accuracy.delta
        if not 0.0 < delta < 1.0:
            raise ConfigError(f"alg3 needs 0 < delta < 1, got {delta!r}")
        self.x = x = x_additive(delta)
        marked = [i for i, s in enumerate(self.estimates) if s > 1.0 - x - delta]
        self.last = marked[-1] if marked else None
        self.done = False

    def _is_small(self, s: float) -> bool:
        return s <= 1.0 - self.x

    def _is_medium(self, s: float) -> bool:
        return 1.0 - self.x < s < self.x

    def _pack_star(self, y: float, state: KnapsackState, remove: set[int]) -> Action:
        load = state.load - sum(state.packed[i] for i in remove)
        smalls = sorted(
            ((s, i) for i, s in state.packed.items() if i not in remove and self._is_small(s)),
            reverse=True,
        )
        for s, i in smalls:
            if load + y <= 1.0 + CAPACITY_TOL:
                break
            remove.add(i)
            load -= s
        return Action.remove_then_pack(remove) if remove else Action.pack()

    def decide(self, item, state):
        x = self.x
        if self.done or state.load >= x:
            return Action.end()
        y = item.actual
        if y >= x:
            self.done = True
            return Action.remove_then_pack(state.packed) if state.packed else Action.pack()
        if self._is_small(y):
            return _greedy(item, state)

        mediums = [(i, s) for i, s in state.packed.items() if self._is_medium(s)]
        if not mediums:
            return self._pack_star(y, state, set())
        z_index, z = mediums[0]
        if y + z <= 1.0 + CAPACITY_TOL:
            self.done = True
            others = [i for i in state.packed if i != z_index]
            return Action.remove_then_pack(others) if others else Action.pack()
        at_last = item.index == self.last
        if self.keep_larger_at_last:
            swap = y > z if at_last else y < z
        else:
            swap = y < z or (at_last and y > z)
        if swap:
            return self._pack_star(y, state, {z_index})
        return Action.reject()


POLICIES: dict[str, Callable[[], Policy]] = {
    "alg1": GreedyLargest,
    "alg2": Refined,
    "alg3": Removable,
    "alg3-literal": lambda: Removable(keep_larger_at_last=False),
    "blind-greedy": BlindGreedy,
    "take-first": TakeFirst,
    "reject-all": RejectAll,
}


def make_policy(name: str) -> Policy:
    try:
        return POLICIES[name]()
    except KeyError:
        raise ConfigError(f"unknown policy {name!r}; choose from {', '.join(POLICIES)}") from None


def alg1_greedy_largest(accuracy: Accuracy, estimates: Sequence[float]) -> GreedyLargest:
    policy = GreedyLargest()
    policy.init(accuracy, estimates)
    return policy


def alg2_refined(accuracy: Accuracy, estimates: Sequence[float]) -> Refined:
    policy = Refined()
    policy.init(accuracy, estimates)
    return policy


def alg3_removable(
    accuracy: Accuracy, estimates: Sequence[float], *, keep_larger_at_last: bool = True
) -> Removable:
    policy = Removable(keep_larger_at_last)
    policy.init(accuracy, estimates, removable=True)
    return policy


def baseline_blind_greedy() -> BlindGreedy:
    return BlindGreedy()


def baseline_take_first() -> TakeFirst:
    return TakeFirst()
