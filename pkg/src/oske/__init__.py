"""Online simple knapsack with item size estimates."""

from .adversaries import AdversaryParams, make_adversary
from .algorithms import make_policy
from .model import Accuracy, Action, KnapsackState, Mode, RevealedItem, Transcript
from .offline import competitive_ratio, optimum
from .ratios import ratio_bundle, removability_bundle
from .simulate import duel, run_instance

__all__ = [
    "Accuracy",
    "Action",
    "AdversaryParams",
    "KnapsackState",
    "Mode",
    "RevealedItem",
    "Transcript",
    "competitive_ratio",
    "duel",
    "make_adversary",
    "make_policy",
    "optimum",
    "ratio_bundle",
    "removability_bundle",
    "run_instance",
]
