"""Seeded Monte Carlo fault injection for replicated modules.

The random stream is pinned so that runs are bit-reproducible across
machines and versions: a SplitMix64 generator supplies 64-bit values, each
trial consumes exactly 1 + k draws (one to pick the input row, then one per
replica in index order to decide whether its output bit flips), and every
sweep cell runs on its own substream derived from the master seed.  Adding
or removing observers therefore never perturbs the stream, and each flip
probability sees freshly drawn inputs -- nothing is reused across cells.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .logic import TruthTable
from .voter import VoterTable

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_TO_UNIT = 2.0**-53


def rng_next(state: int) -> tuple[int, int]:
    """One SplitMix64 step: (new_state, 64-bit output)."""
    state = (state + _GOLDEN) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return state, z ^ (z >> 31)


def unit_interval(value: int) -> float:
    """Map a 64-bit output to [0, 1) with 53-bit resolution."""
    return (value >> 11) * _TO_UNIT


def substream_state(master_seed: int, index: int) -> int:
    """Initial state for sweep cell `index`: mix the seed once through the generator."""
    mixed = (master_seed ^ ((index + 1) * _GOLDEN & _MASK64)) & _MASK64
    return rng_next(mixed)[1]


def inject(bit: int, pe, state: int) -> tuple[int, int]:
    """Flip `bit` with probability pe, consuming exactly one draw."""
    state, value = rng_next(state)
    if unit_interval(value) < pe:
        bit ^= 1
    return bit, state


def flip_cutoff(pe: Fraction) -> int:
    """Integer c with (value >> 11) < c  iff  unit_interval(value) < pe.

    Both sides of the float comparison in `inject` are exact: the 53-bit
    draw is a dyadic rational and the comparison against a `Fraction`
    happens in exact arithmetic, so c = ceil(pe * 2^53) reproduces it with
    pure integers (used by the sweep's hot loop).
    """
    return -(-(pe.numerator << 53) // pe.denominator)


def run_trial(
    function: TruthTable,
    k: int,
    voters: Sequence[VoterTable],
    pe,
    state: int,
) -> tuple[tuple[bool, ...], bool, int]:
    """One fault-injection trial.

    Draws a uniform input row, computes the golden output, derives each
    replica's (possibly flipped) bit in order, and scores every voter plus
    the bare module (replica 1) against the golden bit.  Returns
    (per-voter correctness, module correctness, new rng state).
    """
    state, value = rng_next(state)
    golden = function.outputs[value & ((1 << function.arity) - 1)]
    bits = []
    for _ in range(k):
        bit, state = inject(golden, pe, state)
        bits.append(bit)
    flags = tuple(v.apply(bits) == golden for v in voters)
    return flags, bits[0] == golden, state


@dataclass(frozen=True)
class SimConfig:
    """A full sweep: one Monte Carlo cell per flip probability.

    `voters` pairs a label with a voter table; every record reports the
    bare module alongside all voters.  `pe_values` are normalised to exact
    `Fraction`s so the flip comparison is reproducible.
    """

    function: TruthTable
    k: int
    voters: tuple[tuple[str, VoterTable], ...]
    pe_values: tuple[Fraction, ...]
    trials: int = 5000
    master_seed: int = 0xC0FFEE

    def __post_init__(self):
        object.__setattr__(self, "voters", tuple(self.voters))
        object.__setattr__(
            self, "pe_values", tuple(Fraction(pe) for pe in self.pe_values)
        )
        if not 1 <= self.k <= 16:
            raise ValueError(f"replica count must be between 1 and 16, got {self.k}")
        labels = [label for label, _ in self.voters]
        if len(set(labels)) != len(labels):
            raise ValueError("voter labels must be unique")
        for label, voter in self.voters:
            if not label:
                raise ValueError("voter labels must be non-empty")
            if voter.k != self.k:
                raise ValueError(
                    f"voter {label!r} is for k={voter.k}, config says k={self.k}"
                )
        if not self.pe_values:
            raise ValueError("need at least one flip probability")
        if any(not 0 <= pe <= 1 for pe in self.pe_values):
            raise ValueError("flip probabilities must be in [0, 1]")
        if self.trials < 1:
            raise ValueError(f"trial count must be positive, got {self.trials}")
        if not 0 <= self.master_seed < 1 << 64:
            raise ValueError("master seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class AvailabilityRecord:
    """Counts of correct outputs for one sweep cell."""

    pe: Fraction
    trials: int
    module_correct: int
    voter_correct: dict[str, int] = field(hash=False)

    @property
    def module_availability(self) -> Fraction:
        return Fraction(self.module_correct, self.trials)

    @property
    def module_errors(self) -> int:
        return self.trials - self.module_correct

    def availability(self, label: str) -> Fraction:
        return Fraction(self.voter_correct[label], self.trials)

    def errors(self, label: str) -> int:
        return self.trials - self.voter_correct[label]


def _run_cell(config: SimConfig, index: int, pe: Fraction) -> AvailabilityRecord:
    # Inlined generator and threshold votes: identical draw-for-draw to a
    # run_trial chain (see the equivalence tests) but ~20x faster, which
    # keeps full sweeps interactive without leaving pure Python.
    state = substream_state(config.master_seed, index)
    outputs = config.function.outputs
    row_mask = (1 << config.function.arity) - 1
    k = config.k
    cutoff = flip_cutoff(pe)
    thresholds = [voter.threshold for _, voter in config.voters]
    counts = [0] * len(thresholds)
    module_correct = 0

    for _ in range(config.trials):
        state = (state + _GOLDEN) & _MASK64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        golden = outputs[(z ^ (z >> 31)) & row_mask]

        ones = 0
        first = golden
        for r in range(k):
            state = (state + _GOLDEN) & _MASK64
            z = state
            z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
            z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
            bit = golden ^ (((z ^ (z >> 31)) >> 11) < cutoff)
            ones += bit
            if r == 0:
                first = bit

        module_correct += first == golden
        for i, t in enumerate(thresholds):
            counts[i] += (1 if ones >= t else 0) == golden

    return AvailabilityRecord(
        pe=pe,
        trials=config.trials,
        module_correct=module_correct,
        voter_correct={label: counts[i] for i, (label, _) in enumerate(config.voters)},
    )


def run_sweep(config: SimConfig) -> list[AvailabilityRecord]:
    """Run every cell of the sweep; purely a function of the config.

    Cell i always uses substream i regardless of which cells exist, so a
    sub-grid of a larger sweep reproduces that sweep's cells only when the
    retained cells keep their original indices.
    """
    return [_run_cell(config, i, pe) for i, pe in enumerate(config.pe_values)]
