"""Acceptance gate: one group of checks per criterion, each at its stated tolerance.

The terminal summary prints one PASS/FAIL line per criterion.
"""

import math
import random
import time

import pytest

from conftest import AUDIT
from helpers import RandomPolicy
from oske.adversaries import AdversaryParams, lower_bound_tolerance, make_adversary
from oske.algorithms import make_policy
from oske.cli import sweep_rows
from oske.instances import random_instance
from oske.model import DEFAULT_GRID, Transcript, grid_units, replay
from oske.offline import opt_bruteforce, opt_grid_dp
from oske.ratios import (
    DELTA_STAR_ADD,
    PHI,
    delta_grid,
    kappa_bounds,
    ratio_bundle,
    verify_identities,
    x_additive,
    x_multiplicative,
)
from oske.simulate import duel, run_instance

EPS = 0.01
TOL = lower_bound_tolerance(EPS, DEFAULT_GRID)
FUZZ_DELTAS = [0.05, 0.15, 0.25, 0.35, 0.45]
FUZZ_PER_DELTA = 10_000


def criterion(n, title):
    return pytest.mark.criterion(n, title)


@criterion(1, "formula identities over delta = 0.005..0.495, under 1 s")
def test_criterion_1_identities():
    start = time.perf_counter()
    report = verify_identities(delta_grid(0.005, 0.495, 0.005))
    elapsed = time.perf_counter() - start
    print(f"identities: n={report.count} root={report.max_root_residual:.2e} "
          f"order={report.max_ordering_violation:.2e} t={elapsed:.3f}s")
    assert report.count == 99
    assert report.max_root_residual <= 1e-9
    assert report.max_ordering_violation <= 1e-12
    assert elapsed < 1.0


@criterion(2, "delta = 0.25 gives p = q = 0.25 and c = 4")
def test_criterion_2_spot_value():
    b = ratio_bundle(0.25)
    assert abs(b.p - 0.25) <= 1e-12
    assert abs(b.q - 0.25) <= 1e-12
    assert abs(b.c - 4.0) <= 1e-12


def _bounds(delta):
    b = ratio_bundle(delta)
    bounds = {"alg1": b.greedy_bound, "alg2": b.c}
    if delta <= DELTA_STAR_ADD:
        bounds["alg3"] = 1.0 / x_additive(delta)
    return bounds


def _marks(delta):
    b = ratio_bundle(delta)
    x = x_additive(delta)
    return [0.5, b.r, b.r + delta, 1 - b.r - delta, x, 1 - x, 1 - x - delta]


ADVERSARY_DELTAS = {
    "p": FUZZ_DELTAS,
    "q-high": [0.25, 0.35, 0.45],
    "q-low": [0.125, 0.15],
    "removability": [0.05, 0.1, 0.15],
}


@criterion(3, "upper bounds of the three algorithms hold on fuzzed and adversarial instances, under 60 s")
def test_criterion_3_upper_bounds():
    start = time.perf_counter()
    excess = []
    worst = {}
    for delta in FUZZ_DELTAS:
        rng = random.Random(f"fuzz-{delta}")
        bounds = _bounds(delta)
        marks = _marks(delta)
        for _ in range(FUZZ_PER_DELTA):
            inst = random_instance(rng, delta, marks=marks)
            for name, bound in bounds.items():
                removable = name == "alg3"
                t = run_instance(make_policy(name), inst.accuracy, inst.announced, inst.actual, removable)
                gap = t.ratio - bound
                worst[name, delta] = max(worst.get((name, delta), -math.inf), gap)
                if gap > TOL:
                    excess.append((name, delta, inst.announced, inst.actual, t.ratio, bound))
    for adv_name, deltas in ADVERSARY_DELTAS.items():
        for delta in deltas:
            for name, bound in _bounds(delta).items():
                if name == "alg3" and adv_name != "removability":
                    continue
                t = duel(make_adversary(adv_name, delta, AdversaryParams(EPS)), make_policy(name))
                if t.ratio - bound > TOL:
                    excess.append((name, delta, adv_name, t.case, t.ratio, bound))
    elapsed = time.perf_counter() - start
    for key in sorted(worst):
        print(f"worst ratio - bound {key}: {worst[key]:+.6f}")
    print(f"criterion 3 runtime {elapsed:.1f}s")
    assert not excess, excess[:5]
    assert elapsed < 60.0


LOWER_PAIRS = [
    (adv, delta, alg)
    for adv, delta, algs in [
        ("p", 0.25, ["alg1", "alg2", "blind-greedy", "take-first"]),
        ("q-high", 0.25, ["alg1", "alg2", "blind-greedy", "take-first"]),
        ("q-low", 0.125, ["alg1", "alg2", "blind-greedy", "take-first"]),
        ("noncomp", 0.5, ["alg1", "blind-greedy", "take-first"]),
        ("removability", 0.1, ["alg1", "alg2", "alg3", "blind-greedy", "take-first"]),
    ]
    for alg in algs
]
_lower_elapsed = []


def _shortfall(adv_name, delta, alg, eps):
    adv = make_adversary(adv_name, delta, AdversaryParams(eps))
    t = duel(adv, make_policy(alg))
    return adv.target_ratio - t.ratio, t


@criterion(4, "adversaries force target - (8 eps + 16/D) at eps = 0.01 and the gap shrinks at eps = 0.001")
@pytest.mark.parametrize("adv_name, delta, alg", LOWER_PAIRS, ids=[f"{a}-{g}" for a, _, g in LOWER_PAIRS])
def test_criterion_4_lower_bounds(adv_name, delta, alg):
    start = time.perf_counter()
    coarse, t = _shortfall(adv_name, delta, alg, 0.01)
    fine, _ = _shortfall(adv_name, delta, alg, 0.001)
    _lower_elapsed.append(time.perf_counter() - start)
    print(f"{adv_name} vs {alg}: case {t.case}, ratio {t.ratio:.6f}, target {t.target_ratio:.6f}, "
          f"gap {coarse:+.6f} -> {fine:+.6f}")
    if coarse > 0:
        assert fine < coarse, "gap did not shrink"
    else:
        assert fine <= lower_bound_tolerance(0.001)
    assert coarse <= TOL, f"forced ratio {t.ratio:.6f} is {coarse:.6f} below target, tolerance {TOL:.6f}"


@criterion(4, "adversaries force target - (8 eps + 16/D) at eps = 0.01 and the gap shrinks at eps = 0.001")
def test_criterion_4_runtime():
    assert len(_lower_elapsed) == len(LOWER_PAIRS)
    total = sum(_lower_elapsed)
    print(f"criterion 4 runtime {total:.2f}s")
    assert total < 30.0


@criterion(5, "no competitive ratio at delta >= 0.5")
@pytest.mark.parametrize("delta", [0.5, 0.8])
def test_criterion_5_noncompetitive(delta):
    coarse = duel(make_adversary("noncomp", delta, AdversaryParams(0.01)), make_policy("blind-greedy"))
    fine = duel(make_adversary("noncomp", delta, AdversaryParams(0.001)), make_policy("blind-greedy"))
    nothing = duel(make_adversary("noncomp", delta), make_policy("reject-all"))
    assert coarse.ratio >= 99
    assert fine.ratio >= 999
    assert math.isinf(nothing.ratio)


@criterion(6, "removability threshold and multiplicative limit")
def test_criterion_6_removability_threshold():
    assert abs(1.0 / x_additive(DELTA_STAR_ADD) - PHI) <= 1e-9
    assert abs(x_multiplicative(1e-6) - 2.0 / 3.0) <= 1e-5


@criterion(7, "grid DP equals brute force on 1000+ random instances")
def test_criterion_7_opt_oracles():
    rng = random.Random(2024)
    count = 0
    for _ in range(1500):
        n = rng.randint(0, 20)
        hi = rng.choice([10**6, 400_000, 120_000])
        sizes = [rng.randint(0, hi) / 10**6 for _ in range(n)]
        dp, brute = opt_grid_dp(sizes), opt_bruteforce(sizes)
        assert grid_units(dp.value) == grid_units(brute.value), sizes
        count += 1
    assert count >= 1000


def _cell(delta):
    _, lo, hi = kappa_bounds(delta)
    return lo, hi


@criterion(8, "swept ratio curve has the expected shape")
def test_criterion_8_curve_shape():
    h = 0.001
    rows = sweep_rows(h, 0.5 - h, h)
    assert rows[0][:4] == ["delta", "p", "q", "c"]
    curve = [(float(r[0]), float(r[3])) for r in rows[1:]]
    c = dict(curve)
    assert all(v >= 2.0 for _, v in curve)
    assert c[0.01] <= 2.1
    assert c[0.45] >= c[0.25]
    for (d0, c0), (d1, c1) in zip(curve, curve[1:]):
        # |dc/d delta| <= 2 c^2 inside a cell; allow twice that plus print rounding
        smooth = 4.0 * max(c0, c1) ** 2 * h + 1e-6 * max(c0, c1)
        if abs(c1 - c0) > smooth:
            assert _cell(d0) != _cell(d1), f"jump {c0} -> {c1} between {d0} and {d1} inside one kappa cell"


@criterion(9, "simulator soundness across all transcripts")
def test_criterion_9_property_suite():
    before = AUDIT["transcripts"]
    rng = random.Random(99)
    for i in range(3000):
        delta = rng.choice([0.02, 0.1, 0.19, 0.3, 0.45])
        removable = rng.random() < 0.5
        inst = random_instance(rng, delta, removable=removable, marks=_marks(delta))
        names = ["alg1", "alg2", "blind-greedy", "take-first", "reject-all"]
        if removable and delta <= DELTA_STAR_ADD:
            names += ["alg3", "alg3-literal"]
        policies = [make_policy(n) for n in names] + [RandomPolicy(i)]
        for policy in policies:
            t = run_instance(policy, inst.accuracy, inst.announced, inst.actual, removable)
            assert replay(t.reveals, t.actions, removable)[-1].load == t.final_gain
    for adv_name, deltas in {**ADVERSARY_DELTAS, "noncomp": [0.5, 1.0]}.items():
        for delta in deltas:
            for seed in range(20):
                a = duel(make_adversary(adv_name, delta), RandomPolicy(seed)).to_json()
                b = duel(make_adversary(adv_name, delta), RandomPolicy(seed)).to_json()
                assert a == b
                assert Transcript.from_json(a).to_json() == a
    print(f"audited {AUDIT['transcripts'] - before} transcripts in this check")
    assert AUDIT["transcripts"] - before > 20_000
    assert AUDIT["violations"] == []
