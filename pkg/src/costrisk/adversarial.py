"""Relative error of an estimate and the worst-case posterior search.

The search is fully deterministic: structured two- and three-point
families first (these realize the closed-form constructions, including
the exact ties that our lowest-index tie-breaking turns into attained
maxima), then a full simplex grid for small spaces, then coordinate
hill climbing with a halving step.  Everything runs in exact rational
arithmetic, so re-evaluating a witness reproduces its value bit for
bit.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Callable, Union

from .errors import CostRiskError, DimensionMismatchError, NotNormalizedError
from .estimators import (
    bayes_estimate_exact,
    expected_cost_exact,
    mean_estimate,
    median_estimate,
    mode_estimate,
    nearest_state,
)
from .model import CostMatrix, Posterior, StateSpace, to_fraction

ExactValue = Union[Fraction, float]  # Fraction, or math.inf for unbounded

#: Grid sizes beyond this are skipped with a notice rather than attempted.
MAX_GRID_POINTS = 2_000_000

ESTIMATORS = ("mode", "mean_snapped", "median", "bayes")


@dataclass(frozen=True)
class SearchConfig:
    """Knobs for the worst-case search.

    resolution is the coarse simplex grid step; epsilon parameterizes
    the limit-construction witnesses; support_cap bounds the structured
    support size (2 = pairs only, >= 3 adds triples).
    """

    resolution: float = 0.05
    support_cap: int = 3
    refine_iterations: int = 20
    epsilon: float = 1e-4

    def __post_init__(self):
        if not 0 < self.resolution <= 0.5:
            raise CostRiskError("resolution must be in (0, 0.5]")
        if self.support_cap < 2:
            raise CostRiskError("support_cap must be at least 2")
        if self.refine_iterations < 0:
            raise CostRiskError("refine_iterations must be nonnegative")
        if not 0 < float(self.epsilon) < 1:
            raise CostRiskError("epsilon must be in (0, 1)")


@dataclass(frozen=True)
class WorstCase:
    """Best adversarial posterior found, with its audit trail."""

    value: float
    witness: Posterior
    estimator_state: int
    optimal_state: int
    method: str  # structured_pair | structured_triple | grid | refined

    @property
    def unbounded(self) -> bool:
        return math.isinf(self.value)


def relative_error_exact(
    estimate: int, post: Posterior, cost: CostMatrix
) -> ExactValue:
    if not cost.normalized:
        raise NotNormalizedError("relative error is defined on normalized costs")
    if len(post) != cost.size:
        raise DimensionMismatchError(
            f"posterior has {len(post)} entries, cost matrix is {cost.size}x{cost.size}"
        )
    _, minimum = bayes_estimate_exact(post, cost)
    c = expected_cost_exact(estimate, post, cost)
    if minimum == 0:
        return Fraction(0) if c == 0 else math.inf
    return (c - minimum) / minimum


def relative_error(estimate: int, post: Posterior, cost: CostMatrix) -> float:
    """Extra expected cost of the estimate relative to the best estimate.

    Returns math.inf when the best estimate costs nothing but this one
    does (the flagged unbounded case) and 0 when both cost nothing.
    """
    val = relative_error_exact(estimate, post, cost)
    return val if val == math.inf else float(val)


def _estimator_fn(
    name: str, cost: CostMatrix, space: StateSpace | None
) -> Callable[[Posterior], int]:
    if name == "mode":
        return mode_estimate
    if name == "bayes":
        return lambda post: bayes_estimate_exact(post, cost)[0]
    if name in ("mean_snapped", "median"):
        if space is None:
            raise CostRiskError(f"{name} estimation needs a state space")
        space.require_embedding()
        if name == "median":
            return lambda post: median_estimate(post, space)
        return lambda post: nearest_state(space, mean_estimate(post, space))
    raise CostRiskError(f"unknown estimator {name!r}; expected one of {ESTIMATORS}")


class _Best:
    __slots__ = ("value", "probs", "estimate", "optimal", "method")

    def __init__(self):
        self.value: ExactValue = -1
        self.probs: tuple[Fraction, ...] | None = None
        self.estimate = 0
        self.optimal = 0
        self.method = "grid"


def _grid_denominator(resolution: float) -> int:
    return max(2, round(1 / float(resolution)))


def _compositions(total: int, parts: int):
    """All nonnegative integer vectors of the given length summing to total,
    in lexicographic order."""
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for tail in _compositions(total - head, parts - 1):
            yield (head, *tail)


def worst_case(
    estimator: str,
    cost: CostMatrix,
    space: StateSpace | None = None,
    config: SearchConfig | None = None,
) -> WorstCase:
    """Search the probability simplex for the posterior that maximizes the
    estimator's relative error.

    Three deterministic phases: structured two- and three-point families
    (near-ties, exact ties, and vanishing-sliver patterns), a full
    simplex grid at the configured resolution for up to six states, and
    coordinate-wise hill climbing from the best candidate with a halving
    step.  The supremum is typically approached rather than attained, so
    the returned value is a certified lower bound on it; an unbounded
    estimate (math.inf) dominates any finite value.
    """
    cfg = config or SearchConfig()
    if not cost.normalized:
        raise NotNormalizedError("worst-case search needs a normalized cost matrix")
    if space is not None and len(space) != cost.size:
        raise DimensionMismatchError(
            f"state space has {len(space)} states, cost matrix is "
            f"{cost.size}x{cost.size}"
        )
    est = _estimator_fn(estimator, cost, space)
    n = cost.size
    eps = to_fraction(cfg.epsilon)
    best = _Best()

    def consider(probs: tuple[Fraction, ...], method: str) -> None:
        post = Posterior(probs)
        e_state = est(post)
        val = relative_error_exact(e_state, post, cost)
        if val > best.value:
            best.value = val
            best.probs = post.probs
            best.estimate = e_state
            best.optimal = bayes_estimate_exact(post, cost)[0]
            best.method = method

    def point(assignment: dict[int, Fraction]) -> tuple[Fraction, ...]:
        return tuple(assignment.get(i, Fraction(0)) for i in range(n))

    if n == 1:
        consider((Fraction(1),), "grid")
    else:
        den = _grid_denominator(cfg.resolution)

        # phase 1a: two-point supports, swept plus near-tie and sliver masses
        qs = sorted(
            {Fraction(k, den) for k in range(1, den)}
            | {Fraction(1, 2), (1 + eps) / 2, (1 - eps) / 2, eps, 1 - eps}
        )
        for i in range(n):
            for j in range(i + 1, n):
                for q in qs:
                    consider(point({i: q, j: 1 - q}), "structured_pair")

        # phase 1b: three-point supports with the limit patterns
        if cfg.support_cap >= 3 and n >= 3:
            third = Fraction(1, 3)
            near = (1 - eps) / 3
            top = (1 + 2 * eps) / 3
            for trio in combinations(range(n), 3):
                consider(point({s: third for s in trio}), "structured_triple")
                for m in trio:
                    rest = [s for s in trio if s != m]
                    consider(
                        point({m: top, rest[0]: near, rest[1]: near}),
                        "structured_triple",
                    )
                # vanishing sliver on t, near-tie between the other two
                for t in trio:
                    pair = [s for s in trio if s != t]
                    scale = 1 - eps
                    for s, u in (pair, pair[::-1]):
                        consider(
                            point(
                                {
                                    t: eps,
                                    s: scale * (1 + eps) / 2,
                                    u: scale * (1 - eps) / 2,
                                }
                            ),
                            "structured_triple",
                        )

        # phase 2: full simplex grid
        if n > 6:
            warnings.warn(
                f"simplex grid skipped for {n} states; "
                "using structured families and refinement only",
                stacklevel=2,
            )
        elif math.comb(den + n - 1, n - 1) > MAX_GRID_POINTS:
            warnings.warn(
                f"simplex grid at resolution {cfg.resolution} would need "
                f"{math.comb(den + n - 1, n - 1)} points; skipped",
                stacklevel=2,
            )
        else:
            for comp in _compositions(den, n):
                consider(tuple(Fraction(k, den) for k in comp), "grid")

        # phase 3: coordinate hill climbing with halving step
        if best.probs is not None and cfg.refine_iterations > 0:
            step = Fraction(1, den)
            for _ in range(cfg.refine_iterations):
                moved = True
                guard = 0
                while moved and guard < 200:
                    moved = False
                    guard += 1
                    current = best.probs
                    for i in range(n):
                        for j in range(n):
                            if i == j or current[j] < step:
                                continue
                            cand = list(current)
                            cand[i] += step
                            cand[j] -= step
                            before = best.value
                            consider(tuple(cand), "refined")
                            if best.value > before:
                                moved = True
                                break
                        if moved:
                            break
                step /= 2

    assert best.probs is not None
    value = best.value if best.value == math.inf else float(best.value)
    return WorstCase(
        value=value,
        witness=Posterior(best.probs),
        estimator_state=best.estimate,
        optimal_state=best.optimal,
        method=best.method,
    )
