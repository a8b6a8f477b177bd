"""States, measurement bases, and outcome probabilities for two spin-1/2 particles.

Conventions used throughout the package:

* The z-axis is the initial spin-polarization axis.  Every measurement
  direction is a unit vector ``(sin θ cos φ, sin θ sin φ, cos θ)`` in this
  one frame, with polar angle ``θ ∈ [0, π]`` and azimuth ``φ ∈ [0, 2π)``.
* The two-particle product basis is ordered ``(|+,+>, |+,->, |-,+>, |-,->)``
  in the z eigenbasis of each particle.  All 4x4 matrices use this order.
* The measurement basis for a direction pair ``(a, b)`` is ordered
  ``(|+a,+b>, |+a,-b>, |-a,+b>, |-a,-b>)``; outcome probabilities
  ``p1..p4`` follow the same order.

All functions here are pure; the returned dataclasses are frozen and safe
to share across threads.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi

#: Absolute tolerance for analytic matrix identities (hermiticity, traces).
MATRIX_TOL = 1e-12
#: Eigenvalues of a total density matrix may dip this far below zero.
PSD_TOL = 1e-10
#: Probability sums are checked to this tolerance.
PROB_SUM_TOL = 1e-10
#: Individual probabilities may undershoot zero by this much before clamping.
PROB_TOL = 1e-12


def wrap_angle(x: float) -> float:
    """Reduce an angle into [0, 2*pi)."""
    y = x % TWO_PI
    # x slightly below a multiple of 2*pi can round up to exactly 2*pi
    if y >= TWO_PI:
        y = 0.0
    return y


def normalize_direction_angles(theta: float, phi: float) -> tuple[float, float]:
    """Reduce arbitrary real (theta, phi) to theta in [0, pi], phi in [0, 2*pi).

    The reduction preserves the unit vector: a polar angle beyond pi is
    reflected back and the azimuth shifted by pi.
    """
    t = wrap_angle(theta)
    p = phi
    if t > math.pi:
        t = TWO_PI - t
        p = p + math.pi
    return t, wrap_angle(p)


class Polarization(enum.Enum):
    """Which z-basis pair the entangled superposition lives on."""

    ANTIPARALLEL = "antiparallel"  # |+,-> and |-,+>
    PARALLEL = "parallel"          # |+,+> and |-,->


class Part(enum.Enum):
    """Component of a density matrix: full, diagonal, or coherence part."""

    TOTAL = "total"
    LOCAL = "local"
    NONLOCAL = "nonlocal"


@dataclass(frozen=True)
class Direction:
    """A measurement direction on the unit sphere.

    Parameters
    ----------
    theta, phi : float
        Polar and azimuthal angles in radians.  Any real values are
        accepted and reduced into the principal ranges [0, pi] and
        [0, 2*pi) without changing the direction they describe.
    """

    theta: float
    phi: float = 0.0

    def __post_init__(self):
        t, p = normalize_direction_angles(float(self.theta), float(self.phi))
        object.__setattr__(self, "theta", t)
        object.__setattr__(self, "phi", p)

    @property
    def unit_vector(self) -> np.ndarray:
        """Cartesian unit vector (sin t cos p, sin t sin p, cos t)."""
        st = math.sin(self.theta)
        return np.array(
            [st * math.cos(self.phi), st * math.sin(self.phi), math.cos(self.theta)]
        )

    def dot(self, other: "Direction") -> float:
        """Euclidean inner product of the two unit vectors."""
        return float(self.unit_vector @ other.unit_vector)


Z_AXIS = Direction(0.0, 0.0)


@dataclass(frozen=True)
class EntangledState:
    """A pure two-spin entangled state on one z-basis pair.

    The amplitudes are ``c1 = exp(i eta) sin(xi)`` on the first basis ket of
    the pair and ``c2 = exp(-i eta) cos(xi)`` on the second, so the state is
    normalized for every real ``(xi, eta)``.  Antiparallel polarization puts
    the pair on (|+,->, |-,+>), parallel polarization on (|+,+>, |-,->).
    """

    xi: float
    eta: float = 0.0
    polarization: Polarization = Polarization.ANTIPARALLEL

    def __post_init__(self):
        object.__setattr__(self, "xi", wrap_angle(float(self.xi)))
        object.__setattr__(self, "eta", wrap_angle(float(self.eta)))
        if not isinstance(self.polarization, Polarization):
            raise ValueError(f"not a Polarization: {self.polarization!r}")

    @property
    def c1(self) -> complex:
        return cmath.exp(1j * self.eta) * math.sin(self.xi)

    @property
    def c2(self) -> complex:
        return cmath.exp(-1j * self.eta) * math.cos(self.xi)


def singlet() -> EntangledState:
    """The two-spin singlet (|+,-> - |-,+>)/sqrt(2)."""
    return EntangledState(3.0 * math.pi / 4.0, 0.0, Polarization.ANTIPARALLEL)


def triplet() -> EntangledState:
    """The m = 0 triplet (|+,-> + |-,+>)/sqrt(2)."""
    return EntangledState(math.pi / 4.0, 0.0, Polarization.ANTIPARALLEL)


def bell_parallel() -> EntangledState:
    """The parallel-polarization Bell state (|+,+> + |-,->)/sqrt(2)."""
    return EntangledState(math.pi / 4.0, 0.0, Polarization.PARALLEL)


@dataclass(frozen=True)
class Spinor:
    """Single-particle spin state with components on (|+>, |->)."""

    up: complex
    down: complex

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.up, self.down])

    def inner(self, other: "Spinor") -> complex:
        """Hermitian inner product <self|other>."""
        return (
            self.up.conjugate() * other.up + self.down.conjugate() * other.down
        )

    def norm(self) -> float:
        return math.sqrt(abs(self.up) ** 2 + abs(self.down) ** 2)


def coherent_pair(direction: Direction) -> tuple[Spinor, Spinor]:
    """Orthonormal eigenstates of the spin projection along `direction`.

    Returns
    -------
    (plus, minus) : tuple of Spinor
        ``plus  = cos(t/2) |+> + sin(t/2) e^{i p} |->`` and
        ``minus = sin(t/2) |+> - cos(t/2) e^{i p} |->`` for eigenvalues
        +1 and -1 of sigma.r.  The global sign of `minus` is fixed by this
        expression so spinor-level results are deterministic.
    """
    half = 0.5 * direction.theta
    c, s = math.cos(half), math.sin(half)
    phase = cmath.exp(1j * direction.phi)
    return Spinor(c, s * phase), Spinor(s, -c * phase)


def measurement_basis(
    a: Direction, b: Direction
) -> tuple[tuple[Spinor, Spinor], ...]:
    """The four product states measured along directions (a, b).

    Ordered ``(+a,+b), (+a,-b), (-a,+b), (-a,-b)``; each element is the
    (particle-1, particle-2) spinor pair.
    """
    plus_a, minus_a = coherent_pair(a)
    plus_b, minus_b = coherent_pair(b)
    return (
        (plus_a, plus_b),
        (plus_a, minus_b),
        (minus_a, plus_b),
        (minus_a, minus_b),
    )


def basis_vectors(a: Direction, b: Direction) -> np.ndarray:
    """The measurement basis as a (4, 4) array of kets.

    Row ``i`` is the product vector of ``measurement_basis(a, b)[i]`` in the
    fixed z product basis.
    """
    pairs = measurement_basis(a, b)
    return np.array([np.kron(p1.vector, p2.vector) for p1, p2 in pairs])


@dataclass(frozen=True)
class DensityMatrix:
    """A 4x4 density-operator component in the fixed z product basis.

    ``part`` records which component this is; construction validates the
    matching invariants (hermiticity for all parts; unit trace and positive
    semidefiniteness for TOTAL; non-negative diagonal and zero off-diagonal
    for LOCAL; zero diagonal for NONLOCAL).
    """

    matrix: np.ndarray
    part: Part

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (4, 4):
            raise ValueError(f"expected a 4x4 matrix, got shape {m.shape}")
        if np.max(np.abs(m - m.conj().T)) > MATRIX_TOL:
            raise ValueError("matrix is not Hermitian")
        tr = float(np.real(np.trace(m)))
        diag = np.real(np.diagonal(m))
        if self.part is Part.TOTAL:
            if abs(tr - 1.0) > MATRIX_TOL:
                raise ValueError(f"total density trace {tr} != 1")
            if np.min(np.linalg.eigvalsh(m)) < -PSD_TOL:
                raise ValueError("total density is not positive semidefinite")
        elif self.part is Part.LOCAL:
            off = m - np.diag(np.diagonal(m))
            if np.max(np.abs(off)) > MATRIX_TOL:
                raise ValueError("local part must be diagonal in the fixed basis")
            if abs(tr - 1.0) > MATRIX_TOL:
                raise ValueError(f"local part trace {tr} != 1")
            if np.min(diag) < -MATRIX_TOL:
                raise ValueError("local part has a negative diagonal entry")
        else:
            if np.max(np.abs(np.diagonal(m))) > MATRIX_TOL:
                raise ValueError("non-local part must have zero diagonal")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def expectation(self, ket: np.ndarray) -> float:
        """Real quadratic form <ket| rho |ket>."""
        return float(np.real(ket.conj() @ self.matrix @ ket))


# z-basis index of the pair each polarization occupies: (sin^2 slot, cos^2 slot)
_PAIR_INDEX = {
    Polarization.ANTIPARALLEL: (1, 2),  # |+,->, |-,+>
    Polarization.PARALLEL: (0, 3),      # |+,+>, |-,->
}


def density(state: EntangledState, part: Part = Part.TOTAL) -> DensityMatrix:
    """Density-operator component of an entangled state.

    The LOCAL part carries the classical mixture ``sin^2(xi)`` / ``cos^2(xi)``
    on the state's basis pair; the NONLOCAL part carries the coherence
    ``sin(xi) cos(xi) e^{+-2i eta}`` between them; TOTAL is their sum.
    """
    i, j = _PAIR_INDEX[state.polarization]
    sx, cx = math.sin(state.xi), math.cos(state.xi)
    m = np.zeros((4, 4), dtype=complex)
    if part in (Part.TOTAL, Part.LOCAL):
        m[i, i] = sx * sx
        m[j, j] = cx * cx
    if part in (Part.TOTAL, Part.NONLOCAL):
        coherence = sx * cx * cmath.exp(2j * state.eta)
        m[i, j] = coherence
        m[j, i] = coherence.conjugate()
    return DensityMatrix(m, part)


@dataclass(frozen=True)
class OutcomeDistribution:
    """The four diagonal elements of a density component in a measurement basis.

    ``p1..p4`` correspond to outcomes (+a,+b), (+a,-b), (-a,+b), (-a,-b).
    For a TOTAL matrix these are probabilities summing to 1; for the LOCAL
    part alone they are the classical outcome probabilities; for the
    NONLOCAL part they are signed interference terms summing to 0.
    """

    p1: float
    p2: float
    p3: float
    p4: float
    part: Part = Part.TOTAL

    def __post_init__(self):
        total = self.p1 + self.p2 + self.p3 + self.p4
        values = (self.p1, self.p2, self.p3, self.p4)
        if self.part is Part.NONLOCAL:
            if abs(total) > PROB_SUM_TOL:
                raise ValueError(f"non-local entries sum to {total}, expected 0")
            return
        if abs(total - 1.0) > PROB_SUM_TOL:
            raise ValueError(f"probabilities sum to {total}, expected 1")
        for v in values:
            if v < -PROB_TOL:
                raise ValueError(f"negative probability {v}")
            if self.part is Part.TOTAL and v > 1.0 + PROB_TOL:
                raise ValueError(f"probability {v} exceeds 1")

    @property
    def values(self) -> tuple[float, float, float, float]:
        """Raw entries, unclamped (may be ~-1e-16 from rounding)."""
        return (self.p1, self.p2, self.p3, self.p4)

    @property
    def probabilities(self) -> tuple[float, float, float, float]:
        """Entries clamped into [0, 1]; use for anything fed downstream."""
        return tuple(min(max(v, 0.0), 1.0) for v in self.values)

    def correlation(self) -> float:
        """Parity combination p1 - p2 - p3 + p4."""
        return self.p1 - self.p2 - self.p3 + self.p4


def outcome_distribution(
    rho: DensityMatrix, a: Direction, b: Direction
) -> OutcomeDistribution:
    """Diagonal of `rho` in the measurement basis of directions (a, b)."""
    kets = basis_vectors(a, b)
    tmp = kets.conj() @ rho.matrix
    p = np.real(np.einsum("ij,ij->i", tmp, kets))
    return OutcomeDistribution(p[0], p[1], p[2], p[3], rho.part)
