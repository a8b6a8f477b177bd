"""Classical eight-population hidden-variable model for three directions.

Each particle pair is assigned one of the eight sign triples over the
measurement directions (a, b, c); a population weight says how often that
assignment occurs.  Pairwise correlations read off such a table always obey
the Wigner inequality, whatever the weights — `verify_wigner` checks both
detection orders and reports the slack.

`population_from_local_state` builds the table that reproduces the local
(classical) part of an entangled state's number correlations, which is what
makes the quantum violation attributable to the coherence part alone.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spin_core import Direction, EntangledState, Polarization

#: Row sign triples over directions (a, b, c); row i carries weight n{i+1}.
SIGN_TRIPLES = (
    (1, 1, 1),
    (1, 1, -1),
    (1, -1, 1),
    (1, -1, -1),
    (-1, 1, 1),
    (-1, 1, -1),
    (-1, -1, 1),
    (-1, -1, -1),
)

_DIRECTION_INDEX = {"a": 0, "b": 1, "c": 2}


@dataclass(frozen=True)
class Population8:
    """Non-negative weights of the eight sign-triple assignments."""

    n1: float
    n2: float
    n3: float
    n4: float
    n5: float
    n6: float
    n7: float
    n8: float

    def __post_init__(self):
        if any(w < 0.0 for w in self.weights):
            raise ValueError("population weights must be non-negative")
        if sum(self.weights) <= 0.0:
            raise ValueError("population weights must not all be zero")

    @property
    def weights(self) -> tuple[float, ...]:
        return (self.n1, self.n2, self.n3, self.n4, self.n5, self.n6, self.n7, self.n8)

    @classmethod
    def from_weights(cls, weights) -> "Population8":
        values = [float(w) for w in weights]
        if len(values) != 8:
            raise ValueError(f"expected 8 weights, got {len(values)}")
        return cls(*values)


def population_correlation(
    pop: Population8, sign1: int, dir1: str, sign2: int, dir2: str
) -> float:
    """Fraction of pairs with `sign1` on `dir1` (particle 1) and `sign2` on `dir2` (particle 2).

    Both particles of a pair share the row's sign triple, so this sums the
    weights of rows whose triple matches both requirements, normalized by
    the total weight.  Directions are named "a", "b", "c" and must differ;
    a same-direction query is not defined in this model.
    """
    if sign1 not in (1, -1) or sign2 not in (1, -1):
        raise ValueError("signs must be +1 or -1")
    i1 = _DIRECTION_INDEX.get(dir1)
    i2 = _DIRECTION_INDEX.get(dir2)
    if i1 is None or i2 is None:
        raise ValueError(f"directions must be 'a', 'b' or 'c', got {dir1!r}, {dir2!r}")
    if i1 == i2:
        raise ValueError("dir1 and dir2 must differ")
    weights = pop.weights
    selected = sum(
        w
        for w, triple in zip(weights, SIGN_TRIPLES)
        if triple[i1] == sign1 and triple[i2] == sign2
    )
    return selected / sum(weights)


def bridged_correlation(
    pop: Population8,
    polarization: Polarization,
    sign1: int,
    dir1: str,
    sign2: int,
    dir2: str,
) -> float:
    """Population correlation with the particle-2 convention of a polarization.

    For parallel polarization particle 2 shares the row triple and this is
    `population_correlation` itself.  For antiparallel polarization particle
    2's predetermined outcomes are the row triple with flipped signs, so the
    query flips `sign2`.
    """
    if polarization is Polarization.ANTIPARALLEL:
        sign2 = -sign2
    return population_correlation(pop, sign1, dir1, sign2, dir2)


@dataclass(frozen=True)
class WignerCheck:
    """Result of checking both detection orders of the Wigner inequality.

    ``slack_*`` is (right-hand side - left-hand side), normalized by the
    total weight; the inequality holds iff the slack is non-negative.
    """

    holds_plus_minus: bool
    holds_minus_plus: bool
    slack_plus_minus: float
    slack_minus_plus: float


def verify_wigner(pop: Population8) -> WignerCheck:
    """Check N(+a,-b) <= N(+a,-c) + N(+c,-b) and the sign-swapped version.

    Both inequalities hold for every non-negative population; the check
    computes the displayed sums rather than the algebraic slack, so it
    verifies the theorem instead of assuming it.
    """
    n1, n2, n3, n4, n5, n6, n7, n8 = pop.weights
    total = sum(pop.weights)
    # (+a,-b) <= (+a,-c) + (+c,-b)
    lhs_pm = n3 + n4
    rhs_pm = (n2 + n4) + (n3 + n7)
    # (-a,+b) <= (-a,+c) + (-c,+b)
    lhs_mp = n5 + n6
    rhs_mp = (n5 + n7) + (n2 + n6)
    slack_pm = (rhs_pm - lhs_pm) / total
    slack_mp = (rhs_mp - lhs_mp) / total
    return WignerCheck(
        holds_plus_minus=rhs_pm >= lhs_pm,
        holds_minus_plus=rhs_mp >= lhs_mp,
        slack_plus_minus=slack_pm,
        slack_minus_plus=slack_mp,
    )


def population_from_local_state(
    state: EntangledState, a: Direction, b: Direction, c: Direction
) -> Population8:
    """Hidden-variable population reproducing a state's local number correlations.

    The local density part is a two-branch classical mixture with weights
    sin^2(xi) and cos^2(xi); within a branch each particle yields + along a
    direction r with probability cos^2(theta_r/2) when its z-spin is up and
    sin^2(theta_r/2) when down.  Row weights are the particle-1 triple
    probabilities of that mixture.  Query the result through
    `bridged_correlation` (or directly, for parallel states): the pairwise
    marginals match the `correlations` local values for canonical sign
    pairs.
    """
    weight_up = np.sin(state.xi) ** 2   # particle 1 is z-up in this branch
    weight_down = np.cos(state.xi) ** 2
    plus_given_up = [np.cos(d.theta / 2.0) ** 2 for d in (a, b, c)]
    weights = []
    for triple in SIGN_TRIPLES:
        prob_up = 1.0
        prob_down = 1.0
        for s, p_up in zip(triple, plus_given_up):
            prob_up *= p_up if s == 1 else 1.0 - p_up
            # a z-down particle has the complementary + probability
            prob_down *= (1.0 - p_up) if s == 1 else p_up
        weights.append(weight_up * prob_up + weight_down * prob_down)
    return Population8.from_weights(weights)
