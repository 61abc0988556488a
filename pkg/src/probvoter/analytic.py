"""Closed-form availability of k replicated modules behind a threshold voter.

Each replica independently flips its output bit with probability p, and the
module input is uniform over all 2^n assignments.  With F ~ Binomial(k, p)
flipped replicas, a threshold-t voter recovers a golden 0 iff F <= t-1 and
a golden 1 iff F <= k-t, so the probability that the voted output is
correct is

    A(p) = w0 * P[F <= t-1] + w1 * P[F <= k-t]

with w0, w1 the fractions of 0-rows and 1-rows in the truth table.  All
arithmetic is over `Fraction`s, so results are exact for rational p.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

from .voter import ErrorProfile, VoterTable, synthesize_majority, synthesize_probabilistic


def _as_probability(p) -> Fraction:
    value = Fraction(p)
    if not 0 <= value <= 1:
        raise ValueError(f"probability must be in [0, 1], got {p!r}")
    return value


@dataclass(frozen=True)
class SystemModel:
    """One redundant system: error profile, voter, and per-replica flip rate."""

    profile: ErrorProfile
    voter: VoterTable
    p: Fraction

    def __post_init__(self):
        object.__setattr__(self, "p", _as_probability(self.p))

    @property
    def w0(self) -> Fraction:
        return Fraction(self.profile.n0, 1 << self.profile.n)

    @property
    def w1(self) -> Fraction:
        return Fraction(self.profile.n1, 1 << self.profile.n)


def module_availability(p) -> Fraction:
    """Probability a single unguarded replica is correct: 1 - p."""
    return 1 - _as_probability(p)


def _binomial_cdf(k: int, m: int, p: Fraction) -> Fraction:
    """P[Binomial(k, p) <= m], exact."""
    if m < 0:
        return Fraction(0)
    if m >= k:
        return Fraction(1)
    q = 1 - p
    return sum(comb(k, j) * p**j * q ** (k - j) for j in range(m + 1))


def system_availability(model: SystemModel) -> Fraction:
    k = model.voter.k
    t = model.voter.threshold
    return model.w0 * _binomial_cdf(k, t - 1, model.p) + model.w1 * _binomial_cdf(
        k, k - t, model.p
    )


def expected_errors(model: SystemModel, trials: int) -> Fraction:
    """Expected number of wrong voted outputs over `trials` uniform inputs."""
    if trials < 0:
        raise ValueError(f"trial count must be non-negative, got {trials}")
    return trials * (1 - system_availability(model))


@dataclass(frozen=True)
class ComparisonPoint:
    p: Fraction
    prob_availability: Fraction
    majority_availability: Fraction


@dataclass(frozen=True)
class CurveComparison:
    """Both voter curves over a probability grid, plus sign-change intervals.

    Each crossover is an open grid interval (a, b): the curves' difference
    has opposite (nonzero) signs at a and b, so they cross somewhere
    between.  Grid points where the difference is exactly zero separate the
    surrounding signs but are not themselves endpoints.
    """

    points: tuple[ComparisonPoint, ...]
    crossovers: tuple[tuple[Fraction, Fraction], ...]


def compare_and_crossover(
    profile: ErrorProfile,
    k: int,
    p_grid: Sequence,
    tie_policy: int | None = None,
) -> CurveComparison:
    grid = tuple(_as_probability(p) for p in p_grid)
    if not grid:
        raise ValueError("probability grid is empty")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("probability grid must be strictly ascending")
    prob_voter = synthesize_probabilistic(profile, k)
    majority_voter = synthesize_majority(k, tie_policy)
    points = []
    crossovers = []
    last_sign = 0
    last_signed_p = None
    for p in grid:
        a_prob = system_availability(SystemModel(profile, prob_voter, p))
        a_maj = system_availability(SystemModel(profile, majority_voter, p))
        points.append(ComparisonPoint(p, a_prob, a_maj))
        diff = a_prob - a_maj
        sign = (diff > 0) - (diff < 0)
        if sign != 0:
            if last_sign != 0 and sign != last_sign:
                crossovers.append((last_signed_p, p))
            last_sign = sign
            last_signed_p = p
    return CurveComparison(tuple(points), tuple(crossovers))
