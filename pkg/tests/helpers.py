"""Scripted and random policies used to steer adversaries down every branch."""

import random

from oske.algorithms import Policy
from oske.model import Action


class Scripted(Policy):
    """Delegates to ``rule(item, state, policy)``; packs are downgraded to rejects when they do not fit."""

    def __init__(self, rule, name="scripted"):
        self.rule = rule
        self.name = name

    def decide(self, item, state):
        action = self.rule(item, state, self)
        if action.packs:
            load = state.load - sum(state.packed[i] for i in action.remove)
            if load + item.actual > 1.0 + 1e-9:
                return Action.reject()
        return action


def pack_if(pred, name="scripted"):
    return Scripted(lambda item, state, _: Action.pack() if pred(item) else Action.reject(), name)


class RandomPolicy(Policy):
    """Legal random moves; removals only in removability mode."""

    name = "random"

    def __init__(self, seed):
        self.rng = random.Random(seed)

    def decide(self, item, state):
        rng = self.rng
        roll = rng.random()
        if roll < 0.05:
            return Action.end()
        if self.removable and state.packed and roll < 0.35:
            drop = {i for i in state.packed if rng.random() < 0.5}
            load = state.load - sum(state.packed[i] for i in drop)
            if load + item.actual <= 1.0 and rng.random() < 0.7:
                return Action.remove_then_pack(drop) if drop else Action.pack()
            return Action.remove_only(drop) if drop else Action.reject()
        if roll < 0.7 and state.fits(item.actual):
            return Action.pack()
        return Action.reject()
