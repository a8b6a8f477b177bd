"""Measurement-outcome correlators for two-spin entangled states.

Every correlator comes in two independent routes:

* the *trace route* — diagonal elements of the density-matrix components in
  the measurement basis (`spin_correlation`, `number_correlation`,
  `wigner_w`, `chsh`), and
* the *closed-form route* — the analytic expressions in the measurement
  angles (`closed_*` functions below), which accept scalars or numpy
  arrays and broadcast.

The two routes agree to 1e-12 and the test suite enforces that; keep any
change to one side mirrored on the other.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spin_core import (
    Direction,
    EntangledState,
    Part,
    Polarization,
    density,
    outcome_distribution,
)

#: Absolute tolerance for analytic identities between the two routes.
ANALYTIC_TOL = 1e-12


@dataclass(frozen=True)
class CorrelationBreakdown:
    """A correlator split into its classical and coherence contributions.

    ``total`` is always ``local + nonlocal_``.  ``canonical`` is set by the
    particle-number correlators: True/False when a sign pair was involved,
    None for plain spin correlations.
    """

    local: float
    nonlocal_: float
    total: float
    canonical: bool | None = None

    def __post_init__(self):
        if abs(self.total - (self.local + self.nonlocal_)) > ANALYTIC_TOL:
            raise ValueError("total must equal local + nonlocal_")


@dataclass(frozen=True)
class SignPair:
    """Which spin sign is detected for particle 1 and particle 2."""

    first: int
    second: int

    def __post_init__(self):
        if self.first not in (1, -1) or self.second not in (1, -1):
            raise ValueError("sign components must be +1 or -1")

    @classmethod
    def from_string(cls, text: str) -> "SignPair":
        symbols = {"+": 1, "-": -1}
        if len(text) != 2 or text[0] not in symbols or text[1] not in symbols:
            raise ValueError(f"sign pair must be two of '+'/'-', got {text!r}")
        return cls(symbols[text[0]], symbols[text[1]])

    def __str__(self) -> str:
        return ("+" if self.first > 0 else "-") + ("+" if self.second > 0 else "-")

    def is_canonical(self, polarization: Polarization) -> bool:
        """Equal signs for antiparallel states, opposite for parallel."""
        if polarization is Polarization.ANTIPARALLEL:
            return self.first == self.second
        return self.first == -self.second


PLUS_PLUS = SignPair(1, 1)
PLUS_MINUS = SignPair(1, -1)
MINUS_PLUS = SignPair(-1, 1)
MINUS_MINUS = SignPair(-1, -1)

# outcome index in (p1, p2, p3, p4) for each (sign on a, sign on b)
_OUTCOME_SLOT = {(1, 1): 0, (1, -1): 1, (-1, 1): 2, (-1, -1): 3}


def canonical_sign_pairs(polarization: Polarization) -> tuple[SignPair, SignPair]:
    """The two detectable sign pairs for a polarization flavor."""
    if polarization is Polarization.ANTIPARALLEL:
        return (PLUS_PLUS, MINUS_MINUS)
    return (PLUS_MINUS, MINUS_PLUS)


# ---------------------------------------------------------------------------
# Trace route
# ---------------------------------------------------------------------------

def _split_distributions(state: EntangledState, a: Direction, b: Direction):
    local = outcome_distribution(density(state, Part.LOCAL), a, b)
    nonlocal_ = outcome_distribution(density(state, Part.NONLOCAL), a, b)
    return local, nonlocal_


def spin_correlation(
    state: EntangledState, a: Direction, b: Direction
) -> CorrelationBreakdown:
    """Expectation of the product of the two spin readouts along (a, b).

    Computed as the parity combination p1 - p2 - p3 + p4 of the outcome
    distribution, separately for the local and non-local density parts.
    """
    dist_local, dist_nonlocal = _split_distributions(state, a, b)
    local = dist_local.correlation()
    nonlocal_ = dist_nonlocal.correlation()
    total = local + nonlocal_
    if abs(total) > 1.0 + 1e-10:
        raise ValueError(f"spin correlation {total} outside [-1, 1]")
    return CorrelationBreakdown(local, nonlocal_, total)


def chsh_breakdown(
    state: EntangledState,
    a: Direction,
    b: Direction,
    c: Direction,
    d: Direction,
) -> CorrelationBreakdown:
    """Signed four-direction combination P(a,b) + P(a,c) + P(d,b) - P(d,c)."""
    p_ab = spin_correlation(state, a, b)
    p_ac = spin_correlation(state, a, c)
    p_db = spin_correlation(state, d, b)
    p_dc = spin_correlation(state, d, c)
    local = p_ab.local + p_ac.local + p_db.local - p_dc.local
    nonlocal_ = p_ab.nonlocal_ + p_ac.nonlocal_ + p_db.nonlocal_ - p_dc.nonlocal_
    return CorrelationBreakdown(local, nonlocal_, local + nonlocal_)


def chsh(
    state: EntangledState,
    a: Direction,
    b: Direction,
    c: Direction,
    d: Direction,
) -> float:
    """|P(a,b) + P(a,c) + P(d,b) - P(d,c)|, bounded by 2 classically."""
    return abs(chsh_breakdown(state, a, b, c, d).total)


def number_correlation(
    state: EntangledState, signs: SignPair, a: Direction, b: Direction
) -> CorrelationBreakdown:
    """Joint probability of detecting the given spin signs along (a, b).

    Reads the outcome-distribution entry selected by `signs` from the local
    and non-local parts.  Non-canonical sign pairs (equal signs on a
    parallel state, opposite on an antiparallel one) are perfectly valid
    matrix entries; they are returned with ``canonical=False``.
    """
    slot = _OUTCOME_SLOT[(signs.first, signs.second)]
    dist_local, dist_nonlocal = _split_distributions(state, a, b)
    local = dist_local.values[slot]
    nonlocal_ = dist_nonlocal.values[slot]
    return CorrelationBreakdown(
        local,
        nonlocal_,
        local + nonlocal_,
        canonical=signs.is_canonical(state.polarization),
    )


def wigner_w(
    state: EntangledState,
    signs: SignPair,
    a: Direction,
    b: Direction,
    c: Direction,
) -> CorrelationBreakdown:
    """Three-direction correlator N(a,b) - N(a,c) - N(c,b).

    Each term is the number correlation with `signs.first` detected on the
    first-listed direction and `signs.second` on the second.  The local
    component never exceeds zero (that is the local-realist inequality);
    any positive total is a quantum violation, at most 1/2.
    """
    slot = _OUTCOME_SLOT[(signs.first, signs.second)]
    rho_local = density(state, Part.LOCAL)
    rho_nonlocal = density(state, Part.NONLOCAL)
    local = 0.0
    nonlocal_ = 0.0
    for weight, (d1, d2) in zip((1.0, -1.0, -1.0), ((a, b), (a, c), (c, b))):
        local += weight * outcome_distribution(rho_local, d1, d2).values[slot]
        nonlocal_ += weight * outcome_distribution(rho_nonlocal, d1, d2).values[slot]
    return CorrelationBreakdown(
        local,
        nonlocal_,
        local + nonlocal_,
        canonical=signs.is_canonical(state.polarization),
    )


# ---------------------------------------------------------------------------
# Closed-form route (scalar or array arguments; arrays broadcast)
# ---------------------------------------------------------------------------

def closed_spin_local(theta_a, theta_b, polarization=Polarization.ANTIPARALLEL):
    """Local spin correlation: -cos(ta)cos(tb) antiparallel, +cos(ta)cos(tb) parallel."""
    sign = -1.0 if polarization is Polarization.ANTIPARALLEL else 1.0
    return sign * np.cos(theta_a) * np.cos(theta_b)


def closed_spin_nonlocal(
    xi, eta, theta_a, phi_a, theta_b, phi_b, polarization=Polarization.ANTIPARALLEL
):
    """Non-local spin correlation 2 sin(xi)cos(xi) sin(ta)sin(tb) cos(phase).

    The interference phase is ``phi_a - phi_b + 2 eta`` for antiparallel
    states and ``phi_a + phi_b + 2 eta`` for parallel ones.
    """
    if polarization is Polarization.ANTIPARALLEL:
        phase = phi_a - phi_b + 2.0 * eta
    else:
        phase = phi_a + phi_b + 2.0 * eta
    return (
        2.0 * np.sin(xi) * np.cos(xi) * np.sin(theta_a) * np.sin(theta_b) * np.cos(phase)
    )


def closed_number_local(
    xi, signs: SignPair, theta_a, theta_b, polarization=Polarization.ANTIPARALLEL
):
    """Local part of the number correlation for a canonical sign pair.

    Only canonical pairs have a closed form here; ask the trace route for
    the rest.
    """
    if not signs.is_canonical(polarization):
        raise ValueError(f"no closed form for non-canonical sign pair {signs}")
    ca, sa = np.cos(theta_a / 2.0) ** 2, np.sin(theta_a / 2.0) ** 2
    cb, sb = np.cos(theta_b / 2.0) ** 2, np.sin(theta_b / 2.0) ** 2
    sx2, cx2 = np.sin(xi) ** 2, np.cos(xi) ** 2
    if signs.first == 1:
        # (+,+) antiparallel and (+,-) parallel share this expression
        return sx2 * ca * sb + cx2 * sa * cb
    return sx2 * sa * cb + cx2 * ca * sb


def closed_number_nonlocal(
    xi, eta, theta_a, phi_a, theta_b, phi_b, polarization=Polarization.ANTIPARALLEL
):
    """Non-local part of the number correlation (same for both canonical pairs)."""
    amplitude = 0.5 * np.sin(xi) * np.cos(xi) * np.sin(theta_a) * np.sin(theta_b)
    if polarization is Polarization.ANTIPARALLEL:
        return amplitude * np.cos(phi_a - phi_b + 2.0 * eta)
    return -amplitude * np.cos(phi_a + phi_b + 2.0 * eta)


def closed_wigner_local(theta_a, theta_b, theta_c):
    """Local Wigner correlator in product-of-cosines form.

    Independent of the state parameters and of which canonical sign pair
    is detected; never positive.
    """
    ca, cb, cc = np.cos(theta_a), np.cos(theta_b), np.cos(theta_c)
    return 0.25 * (-1.0 - ca * cb + cc * cb + ca * cc)


def closed_wigner_local_half_angle(theta_a, theta_b, theta_c):
    """Local Wigner correlator in half-angle form (equal to `closed_wigner_local`)."""
    ca2 = np.cos(theta_a / 2.0) ** 2
    cb2 = np.cos(theta_b / 2.0) ** 2
    cc2 = np.cos(theta_c / 2.0) ** 2
    sa2 = np.sin(theta_a / 2.0) ** 2
    return -(ca2 - cc2) * cb2 - cc2 * sa2


def closed_wigner_nonlocal(
    xi,
    eta,
    theta_a,
    phi_a,
    theta_b,
    phi_b,
    theta_c,
    phi_c,
    polarization=Polarization.ANTIPARALLEL,
):
    """Non-local Wigner correlator; the source of any inequality violation."""
    sa, sb, sc = np.sin(theta_a), np.sin(theta_b), np.sin(theta_c)
    if polarization is Polarization.ANTIPARALLEL:
        bracket = (
            sa * sb * np.cos(phi_a - phi_b + 2.0 * eta)
            - sa * sc * np.cos(phi_a - phi_c + 2.0 * eta)
            - sc * sb * np.cos(phi_c - phi_b + 2.0 * eta)
        )
        return 0.25 * np.sin(2.0 * xi) * bracket
    bracket = (
        sa * sb * np.cos(phi_a + phi_b + 2.0 * eta)
        - sa * sc * np.cos(phi_a + phi_c + 2.0 * eta)
        - sc * sb * np.cos(phi_c + phi_b + 2.0 * eta)
    )
    return -0.25 * np.sin(2.0 * xi) * bracket


def closed_wigner_total(
    xi,
    eta,
    theta_a,
    phi_a,
    theta_b,
    phi_b,
    theta_c,
    phi_c,
    polarization=Polarization.ANTIPARALLEL,
):
    """Local plus non-local Wigner correlator."""
    return closed_wigner_local(theta_a, theta_b, theta_c) + closed_wigner_nonlocal(
        xi, eta, theta_a, phi_a, theta_b, phi_b, theta_c, phi_c, polarization
    )


def wigner_chain_bound(theta_a, theta_c):
    """-sin^2(tc/2) cos^2(ta/2): sits between 0 and the local Wigner correlator."""
    return -np.sin(theta_c / 2.0) ** 2 * np.cos(theta_a / 2.0) ** 2


def wigner_bound_F(theta_a, theta_b, theta_c):
    """Angle-only upper bound on the total Wigner correlator; at most 1/2.

    Accepts scalars or arrays; polar angles must lie in [0, pi].
    """
    ta, tb, tc = np.asarray(theta_a), np.asarray(theta_b), np.asarray(theta_c)
    for t in (ta, tb, tc):
        if np.any((t < 0.0) | (t > np.pi)):
            raise ValueError("polar angles must lie in [0, pi]")
    value = 0.25 * (
        -1.0 - np.cos(ta + tb) + np.cos(tc - tb) + np.cos(ta - tc)
    )
    if value.ndim == 0:
        return float(value)
    return value
