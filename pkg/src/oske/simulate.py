"""Play policies against fixed instances or adaptive adversaries."""

from __future__ import annotations

from collections.abc import Callable, Sequence

from .algorithms import Policy
from .model import (
    DEFAULT_GRID,
    Accuracy,
    Action,
    KnapsackState,
    RevealedItem,
    Transcript,
    apply_action,
    check_estimates,
)
from .offline import competitive_ratio, optimum

# Called with every finished transcript; the test suite audits through this.
observers: list[Callable[[Transcript], None]] = []

SizeSource = Callable[[Sequence[Action], KnapsackState], float]


def _play(
    policy: Policy,
    accuracy: Accuracy,
    estimates: Sequence[float],
    removable: bool,
    next_size: SizeSource,
) -> tuple[list[RevealedItem], list[Action], KnapsackState]:
    estimates = check_estimates(estimates)
    policy.init(accuracy, estimates, removable)
    state = KnapsackState()
    reveals: list[RevealedItem] = []
    actions: list[Action] = []
    for i in range(len(estimates)):
        item = RevealedItem(i, next_size(actions, state))
        reveals.append(item)
        if state.terminated:
            action = Action.reject()
        else:
            action = policy.decide(item, state)
            state = apply_action(state, action, item, removable)
        actions.append(action)
    return reveals, actions, state


def _finish(
    policy: Policy,
    accuracy: Accuracy,
    removable: bool,
    estimates: Sequence[float],
    reveals: list[RevealedItem],
    actions: list[Action],
    state: KnapsackState,
    grid: int,
    **extra,
) -> Transcript:
    opt = optimum([r.actual for r in reveals], grid)
    t = Transcript(
        accuracy=accuracy,
        removable=removable,
        estimates=tuple(estimates),
        reveals=tuple(reveals),
        actions=tuple(actions),
        final_gain=state.load,
        opt_value=opt.value,
        ratio=competitive_ratio(opt.value, state.load),
        policy=policy.name,
        **extra,
    )
    for observe in observers:
        observe(t)
    return t


def run_instance(
    policy: Policy,
    accuracy: Accuracy,
    estimates: Sequence[float],
    actuals: Sequence[float],
    removable: bool = False,
    grid: int = DEFAULT_GRID,
) -> Transcript:
    """Play a fixed instance; actual sizes are revealed in order."""
    if len(actuals) != len(estimates):
        raise ValueError("estimates and actual sizes differ in length")
    reveals, actions, state = _play(
        policy, accuracy, estimates, removable, lambda acts, _s: actuals[len(acts)]
    )
    return _finish(policy, accuracy, removable, estimates, reveals, actions, state, grid)


def duel(adversary, policy: Policy) -> Transcript:
    """Play ``policy`` against an adaptive adversary."""
    estimates = adversary.announce()
    reveals, actions, state = _play(
        policy, adversary.accuracy, estimates, adversary.removable, adversary.next_size
    )
    return _finish(
        policy,
        adversary.accuracy,
        adversary.removable,
        estimates,
        reveals,
        actions,
        state,
        adversary.params.grid,
        adversary=adversary.name,
        case=adversary.case,
        target_ratio=adversary.target_ratio,
    )
