"""Finite-shot simulation of the measurement experiments.

Randomness comes from a counter-based Philox generator keyed by
(seed, experiment_index) through numpy's SeedSequence spawn keys, so every
sub-experiment has its own reproducible stream: identical inputs give
bit-identical counts across runs, platforms and threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .spin_core import Direction, EntangledState, Part, density, outcome_distribution
from .correlations import SignPair, _OUTCOME_SLOT


@dataclass(frozen=True)
class ShotCounts:
    """Counts of the four outcomes (+a,+b), (+a,-b), (-a,+b), (-a,-b)."""

    c1: int
    c2: int
    c3: int
    c4: int
    shots: int

    def __post_init__(self):
        counts = (self.c1, self.c2, self.c3, self.c4)
        if any(c < 0 for c in counts):
            raise ValueError("counts must be non-negative")
        if sum(counts) != self.shots:
            raise ValueError("counts must sum to shots")

    @property
    def counts(self) -> tuple[int, int, int, int]:
        return (self.c1, self.c2, self.c3, self.c4)

    def frequency(self, slot: int) -> float:
        return self.counts[slot] / self.shots


@dataclass(frozen=True)
class Estimate:
    """A frequency-based estimate with its plug-in binomial standard error."""

    value: float
    std_error: float
    shots: int

    def __post_init__(self):
        if self.std_error < 0.0:
            raise ValueError("std_error must be non-negative")


def experiment_generator(seed: int, experiment_index: int = 0) -> np.random.Generator:
    """Philox stream for one experiment of a seeded run."""
    root = np.random.SeedSequence(
        entropy=int(seed) & 0xFFFFFFFFFFFFFFFF, spawn_key=(int(experiment_index),)
    )
    return np.random.Generator(np.random.Philox(root))


def sample_outcomes(
    state: EntangledState,
    a: Direction,
    b: Direction,
    shots: int,
    seed: int,
    experiment_index: int = 0,
) -> ShotCounts:
    """Draw `shots` measurement outcomes along (a, b) from the full state.

    Sampling inverts the cumulative distribution of the four outcome
    probabilities (clamped at zero and renormalized); a uniform landing
    exactly on a boundary goes to the lower outcome index, and outcomes of
    zero probability can never occur.
    """
    if shots < 1:
        raise ValueError("shots must be at least 1")
    dist = outcome_distribution(density(state, Part.TOTAL), a, b)
    p = np.array(dist.probabilities)
    p /= p.sum()
    occupied = np.flatnonzero(p > 0.0)
    cdf = np.cumsum(p[occupied])
    cdf[-1] = 1.0
    rng = experiment_generator(seed, experiment_index)
    u = rng.random(shots)
    drawn = np.searchsorted(cdf, u, side="left")
    counts = [0, 0, 0, 0]
    for slot, count in zip(occupied, np.bincount(drawn, minlength=occupied.size)):
        counts[slot] = int(count)
    return ShotCounts(counts[0], counts[1], counts[2], counts[3], shots)


def estimate_number_correlation(
    state: EntangledState,
    signs: SignPair,
    a: Direction,
    b: Direction,
    shots: int,
    seed: int,
    experiment_index: int = 0,
) -> Estimate:
    """Frequency estimate of one number correlation N(signs; a, b)."""
    slot = _OUTCOME_SLOT[(signs.first, signs.second)]
    counts = sample_outcomes(state, a, b, shots, seed, experiment_index)
    p_hat = counts.frequency(slot)
    return Estimate(p_hat, math.sqrt(p_hat * (1.0 - p_hat) / shots), shots)


def estimate_wigner(
    state: EntangledState,
    signs: SignPair,
    a: Direction,
    b: Direction,
    c: Direction,
    shots_per_pair: int,
    seed: int,
) -> Estimate:
    """Finite-shot estimate of the Wigner correlator N(a,b) - N(a,c) - N(c,b).

    Runs three independent experiments (one per direction pair, experiment
    indices 0..2 under `seed`) and combines the frequencies; the standard
    error is the root-sum-square of the three binomial errors.  `shots`
    in the result is the per-pair count.
    """
    if shots_per_pair < 1:
        raise ValueError("shots_per_pair must be at least 1")
    if not signs.is_canonical(state.polarization):
        raise ValueError(
            f"sign pair {signs} is not canonical for {state.polarization.value} polarization"
        )
    value = 0.0
    variance = 0.0
    pairs = ((a, b), (a, c), (c, b))
    for index, (weight, (d1, d2)) in enumerate(zip((1.0, -1.0, -1.0), pairs)):
        term = estimate_number_correlation(
            state, signs, d1, d2, shots_per_pair, seed, experiment_index=index
        )
        value += weight * term.value
        variance += term.std_error**2
    return Estimate(value, math.sqrt(variance), shots_per_pair)
