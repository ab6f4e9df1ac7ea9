"""Closed-form competitive ratios for the additive estimate model.

Without removability the optimal ratio for ``0 < delta < 1/2`` is
``1 / min(p, q)`` with ``kappa = 2 / (1 - 2 delta)``,
``p`` the positive root of ``floor(kappa) p^2 + p - (1 - 2 delta) = 0`` and
``q = 1 - 2 delta - 1 / ceil(kappa)``. With removability it is ``1/x`` for
``x = (2 - 2 delta) / (3 - 2 delta)``, capped at the golden ratio.
"""

from __future__ import annotations

import math
from collections.abc import Iterable
from dataclasses import dataclass

from .errors import OutOfRange

PHI = (1 + math.sqrt(5)) / 2
# 1/x_add(delta) == PHI
DELTA_STAR_ADD = (3 - math.sqrt(5)) / 4


def kappa_bounds(delta: float) -> tuple[float, int, int]:
    """``kappa`` with its floor and ceiling, taken after rounding to 12 decimals."""
    kappa = 2.0 / (1.0 - 2.0 * delta)
    rounded = round(kappa, 12)
    return kappa, math.floor(rounded), math.ceil(rounded)


def p_value(delta: float, k_floor: int) -> float:
    return -0.5 / k_floor + math.sqrt(1.0 / (4.0 * k_floor**2) + (1.0 - 2.0 * delta) / k_floor)


def q_value(delta: float, k_ceil: int) -> float:
    return 1.0 - 2.0 * delta - 1.0 / k_ceil


@dataclass(frozen=True)
class RatioBundle:
    delta: float
    kappa: float
    kappa_floor: int
    kappa_ceil: int
    p: float
    q: float
    r: float
    c: float
    greedy_bound: float

    @property
    def active(self) -> str:
        """Which bound determines ``c``: ``"p"`` or ``"q"``."""
        return "p" if self.p <= self.q else "q"

    def to_dict(self) -> dict:
        return {
            "delta": self.delta,
            "kappa": self.kappa,
            "kappa_floor": self.kappa_floor,
            "kappa_ceil": self.kappa_ceil,
            "p": self.p,
            "q": self.q,
            "r": self.r,
            "c": self.c,
            "greedy_bound": self.greedy_bound,
            "active": self.active,
        }


def ratio_bundle(delta: float) -> RatioBundle:
    if not 0.0 < delta < 0.5:
        raise OutOfRange(f"delta must lie in (0, 0.5), got {delta!r}; the problem is not competitive at delta >= 0.5")
    kappa, kf, kc = kappa_bounds(delta)
    p = p_value(delta, kf)
    q = q_value(delta, kc)
    r = min(p, q)
    return RatioBundle(
        delta=delta,
        kappa=kappa,
        kappa_floor=kf,
        kappa_ceil=kc,
        p=p,
        q=q,
        r=r,
        c=1.0 / r,
        greedy_bound=2.0 / (1.0 - 2.0 * delta),
    )


def x_additive(delta: float) -> float:
    return (2.0 - 2.0 * delta) / (3.0 - 2.0 * delta)


def x_multiplicative(delta: float) -> float:
    """``(sqrt(d^2 + 10 d + 9) + d - 3) / (4 d)``, rationalised so that d = 0 gives 2/3."""
    root = math.sqrt(delta * delta + 10.0 * delta + 9.0)
    return ((delta + 10.0) / (root + 3.0) + 1.0) / 4.0


def _bisect(f, lo: float, hi: float, tol: float = 1e-12) -> float:
    flo = f(lo)
    if flo * f(hi) > 0:
        raise ValueError("bisection bracket does not straddle a root")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


# 1/x_mult(delta) == PHI, found numerically
DELTA_STAR_MULT = _bisect(lambda d: 1.0 / x_multiplicative(d) - PHI, 1e-9, 10.0)


@dataclass(frozen=True)
class RemovabilityBundle:
    delta: float
    x_add: float
    x_mult: float
    phi: float
    effective_ratio_add: float
    effective_ratio_mult: float
    delta_star_add: float
    delta_star_mult: float

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def removability_bundle(delta: float) -> RemovabilityBundle:
    if not (math.isfinite(delta) and delta >= 0):
        raise OutOfRange(f"delta must be finite and >= 0, got {delta!r}")
    x_add = x_additive(delta)
    x_mult = x_multiplicative(delta)
    return RemovabilityBundle(
        delta=delta,
        x_add=x_add,
        x_mult=x_mult,
        phi=PHI,
        effective_ratio_add=1.0 / x_add if delta < DELTA_STAR_ADD else PHI,
        effective_ratio_mult=1.0 / x_mult if delta < DELTA_STAR_MULT else PHI,
        delta_star_add=DELTA_STAR_ADD,
        delta_star_mult=DELTA_STAR_MULT,
    )


@dataclass(frozen=True)
class IdentityReport:
    """Worst residuals of the p/q identities over a grid of deltas.

    ``max_root_residual`` is ``|floor(kappa) p / (1 - p - 2 delta) - 1/p|``;
    ``max_ordering_violation`` is the worst excess over the three relations
    ``1 - p - 2 delta <= p``, ``1 - q - 2 delta == 1/ceil(kappa)`` and
    ``1/ceil(kappa) <= q``.
    """

    count: int
    max_root_residual: float
    max_ordering_violation: float

    @property
    def passed(self) -> bool:
        return self.max_root_residual <= 1e-9 and self.max_ordering_violation <= 1e-12


def verify_identities(delta_grid: Iterable[float]) -> IdentityReport:
    count = 0
    root_res = 0.0
    order_viol = 0.0
    for delta in delta_grid:
        b = ratio_bundle(delta)
        count += 1
        gap = 1.0 - b.p - 2.0 * delta
        root_res = max(root_res, abs(b.kappa_floor * b.p / gap - 1.0 / b.p))
        inv_ceil = 1.0 / b.kappa_ceil
        order_viol = max(
            order_viol,
            gap - b.p,
            abs((1.0 - b.q - 2.0 * delta) - inv_ceil),
            inv_ceil - b.q,
        )
    return IdentityReport(count, root_res, order_viol)


def ratio_curve(delta_grid: Iterable[float]) -> list[tuple[float, float]]:
    """``(delta, c(delta))`` pairs of the optimal ratio without removability."""
    return [(d, ratio_bundle(d).c) for d in delta_grid]


def delta_grid(start: float, stop: float, step: float) -> list[float]:
    """Inclusive arithmetic grid, rounded to 12 decimals to keep endpoints exact."""
    if step <= 0:
        raise ValueError("step must be positive")
    n = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + i * step, 12) for i in range(max(n, 0))]
