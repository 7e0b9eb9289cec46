"""Ranking comparison: errors-in-sequence, measure of accuracy, capacity spread."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

from .errors import InvalidArgumentError

BETTER_LARGER = "larger"
BETTER_SMALLER = "smaller"


@dataclass(frozen=True)
class Ranking:
    """CA names in ascending expected performance (worst first)."""

    names: tuple[str, ...]
    criterion: str
    better: str
    ties: tuple[tuple[str, ...], ...] = ()


def rank_by_metric(
    values: Mapping[str, float], better: str, criterion: str = ""
) -> Ranking:
    """Order names by expected performance; value ties break lexicographically."""
    if better not in (BETTER_LARGER, BETTER_SMALLER):
        raise InvalidArgumentError(f"better must be 'larger' or 'smaller', got '{better}'")
    if len(values) < 2:
        raise InvalidArgumentError("ranking needs at least two entries")
    if better == BETTER_LARGER:
        items = sorted(values.items(), key=lambda kv: (kv[1], kv[0]))
    else:
        items = sorted(values.items(), key=lambda kv: (-kv[1], kv[0]))
    groups: dict[float, list[str]] = {}
    for name, value in items:
        groups.setdefault(value, []).append(name)
    ties = tuple(tuple(g) for g in groups.values() if len(g) > 1)
    return Ranking(tuple(name for name, _ in items), criterion, better, ties)


def eis(predicted: Ranking, reference: Ranking) -> int:
    """Number of unordered pairs whose relative order differs between the rankings."""
    if set(predicted.names) != set(reference.names):
        raise InvalidArgumentError("rankings must cover the same names")
    position = {name: k for k, name in enumerate(predicted.names)}
    names = reference.names
    errors = 0
    for i in range(len(names)):
        for j in range(i + 1, len(names)):
            if position[names[i]] > position[names[j]]:
                errors += 1
    return errors


def moa(eis_value: int, n: int) -> float:
    """Accuracy percentage: share of pairwise comparisons the prediction got right."""
    if n < 2:
        raise InvalidArgumentError(f"need at least two ranked items, got {n}")
    pairs = math.comb(n, 2)
    if not 0 <= eis_value <= pairs:
        raise InvalidArgumentError(f"eis {eis_value} outside [0, {pairs}] for n={n}")
    return (1.0 - eis_value / pairs) * 100.0


def round_moa(value: float) -> int:
    """Nearest-integer accuracy for reporting (half rounds up)."""
    return math.floor(value + 0.5)


def spread(estimate: float, observed: float) -> float:
    """Signed relative deviation of an estimate from the observed value, in percent."""
    if observed <= 0:
        raise InvalidArgumentError(f"observed value must be positive, got {observed}")
    return (estimate - observed) / observed * 100.0
