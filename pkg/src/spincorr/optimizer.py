"""Search for maximal inequality violations over measurement angles.

Multi-start downhill-simplex descent on the negated closed-form correlator:
the objective is smooth, low-dimensional and multimodal, so a handful of
restarts from a seeded low-discrepancy sequence reliably finds the global
optimum.  Azimuthal angles and state parameters live on circles and are
wrapped mod 2*pi during the search; polar angles are reflected at the
[0, pi] boundary in the direction-preserving way, so the objective is
continuous across every seam.  Restarts with a common seed share the same
start-point prefix, which makes the best value non-decreasing in the number
of restarts and the whole search reproducible.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Iterator, Mapping, NamedTuple

import numpy as np
from scipy.stats import qmc

from .spin_core import (
    TWO_PI,
    Direction,
    EntangledState,
    Part,
    normalize_direction_angles,
    wrap_angle,
)
from .correlations import (
    SignPair,
    canonical_sign_pairs,
    chsh_breakdown,
    closed_spin_local,
    closed_spin_nonlocal,
    closed_wigner_local,
    closed_wigner_nonlocal,
    wigner_w,
)

DEFAULT_ROW_CAP = 10**7

#: Canonical ordering of the six Wigner scan angles.
ANGLE_NAMES = ("theta_a", "phi_a", "theta_b", "phi_b", "theta_c", "phi_c")


class ScanCapacityError(ValueError):
    """Raised when a requested grid exceeds the configured row cap."""


@dataclass(frozen=True)
class SearchConfig:
    """Knobs for the multi-start search."""

    restarts: int = 32
    tolerance: float = 1e-9
    max_iterations: int = 2000
    seed: int = 0
    fix_state: bool = True

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be at least 1")
        if self.tolerance <= 0.0:
            raise ValueError("tolerance must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")


@dataclass(frozen=True)
class OptimizationResult:
    """Best point found by a search."""

    best_value: float
    best_angles: tuple[Direction, ...]
    best_state: EntangledState
    restarts_used: int
    converged: bool


def _nelder_mead(fn, x0: np.ndarray, step: float, tolerance: float, max_iterations: int):
    """Minimize `fn` from `x0`; returns (x_best, f_best, converged).

    Classic reflect/expand/contract/shrink simplex descent; `converged`
    means the simplex diameter fell below `tolerance` within the iteration
    budget.
    """
    n = x0.size
    sim = np.repeat(x0[None, :], n + 1, axis=0)
    for i in range(n):
        sim[i + 1, i] += step
    fvals = np.array([fn(v) for v in sim])

    for _ in range(max_iterations):
        order = np.argsort(fvals, kind="stable")
        sim, fvals = sim[order], fvals[order]
        if np.max(np.abs(sim[1:] - sim[0])) < tolerance:
            return sim[0], fvals[0], True

        centroid = sim[:-1].mean(axis=0)
        reflected = centroid + (centroid - sim[-1])
        f_reflected = fn(reflected)
        if f_reflected < fvals[0]:
            expanded = centroid + 2.0 * (centroid - sim[-1])
            f_expanded = fn(expanded)
            if f_expanded < f_reflected:
                sim[-1], fvals[-1] = expanded, f_expanded
            else:
                sim[-1], fvals[-1] = reflected, f_reflected
        elif f_reflected < fvals[-2]:
            sim[-1], fvals[-1] = reflected, f_reflected
        else:
            if f_reflected < fvals[-1]:
                contracted = centroid + 0.5 * (reflected - centroid)
                f_contracted = fn(contracted)
                accept = f_contracted <= f_reflected
            else:
                contracted = centroid + 0.5 * (sim[-1] - centroid)
                f_contracted = fn(contracted)
                accept = f_contracted < fvals[-1]
            if accept:
                sim[-1], fvals[-1] = contracted, f_contracted
            else:
                sim[1:] = sim[0] + 0.5 * (sim[1:] - sim[0])
                fvals[1:] = [fn(v) for v in sim[1:]]

    order = np.argsort(fvals, kind="stable")
    return sim[order[0]], fvals[order[0]], False


def _sobol_starts(bounds: list[tuple[float, float]], restarts: int, seed: int) -> np.ndarray:
    sampler = qmc.Sobol(d=len(bounds), scramble=True, seed=seed)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UserWarning)  # non-power-of-2 draws are fine here
        unit = sampler.random(restarts)
    low = np.array([b[0] for b in bounds])
    high = np.array([b[1] for b in bounds])
    return low + unit * (high - low)


def _multi_start(fn, bounds, config: SearchConfig):
    """Run Nelder-Mead from each start; return (x, f, converged) of the best.

    Ties in the objective value go to the lowest restart index.
    """
    starts = _sobol_starts(bounds, config.restarts, config.seed)
    best = None
    for x0 in starts:
        x, f, converged = _nelder_mead(
            fn, np.asarray(x0, dtype=float), 0.3, config.tolerance, config.max_iterations
        )
        if best is None or f < best[1]:
            best = (x, f, converged)
    return best


def _state_parameters(x, offset: int, state: EntangledState, fix_state: bool):
    if fix_state:
        return state.xi, state.eta
    return wrap_angle(x[offset]), wrap_angle(x[offset + 1])


def _direction_bounds(n_directions: int) -> list[tuple[float, float]]:
    return [(0.0, math.pi), (0.0, TWO_PI)] * n_directions


def maximize_w(
    state: EntangledState,
    config: SearchConfig | None = None,
    part: Part = Part.TOTAL,
) -> OptimizationResult:
    """Maximize the Wigner correlator over three measurement directions.

    With ``config.fix_state`` false, the state parameters (xi, eta) are
    optimized too (the polarization flavor stays that of `state`).  `part`
    selects which component of the correlator is maximized; the default is
    the full quantum value, whose supremum is 1/2, while the LOCAL part can
    never exceed 0.
    """
    config = config or SearchConfig()
    polarization = state.polarization

    def objective(x):
        ta, pa = normalize_direction_angles(x[0], x[1])
        tb, pb = normalize_direction_angles(x[2], x[3])
        tc, pc = normalize_direction_angles(x[4], x[5])
        xi, eta = _state_parameters(x, 6, state, config.fix_state)
        value = 0.0
        if part in (Part.TOTAL, Part.LOCAL):
            value += closed_wigner_local(ta, tb, tc)
        if part in (Part.TOTAL, Part.NONLOCAL):
            value += closed_wigner_nonlocal(
                xi, eta, ta, pa, tb, pb, tc, pc, polarization
            )
        return -float(value)

    bounds = _direction_bounds(3)
    if not config.fix_state:
        bounds += [(0.0, TWO_PI), (0.0, TWO_PI)]
    x, _, converged = _multi_start(objective, bounds, config)

    angles = tuple(
        Direction(x[2 * k], x[2 * k + 1]) for k in range(3)
    )
    best_state = (
        state
        if config.fix_state
        else EntangledState(x[6], x[7], polarization)
    )
    signs = canonical_sign_pairs(polarization)[0]
    result = wigner_w(best_state, signs, *angles)
    best_value = {
        Part.TOTAL: result.total,
        Part.LOCAL: result.local,
        Part.NONLOCAL: result.nonlocal_,
    }[part]
    return OptimizationResult(best_value, angles, best_state, config.restarts, converged)


def maximize_chsh(
    state: EntangledState,
    config: SearchConfig | None = None,
    part: Part = Part.TOTAL,
) -> OptimizationResult:
    """Maximize |P(a,b) + P(a,c) + P(d,b) - P(d,c)| over four directions.

    The quantum maximum over entangled states is 2*sqrt(2); restricted to
    the LOCAL part the combination never exceeds 2.
    """
    config = config or SearchConfig()
    polarization = state.polarization

    def pair_correlation(xi, eta, t1, p1, t2, p2):
        value = 0.0
        if part in (Part.TOTAL, Part.LOCAL):
            value += float(closed_spin_local(t1, t2, polarization))
        if part in (Part.TOTAL, Part.NONLOCAL):
            value += float(
                closed_spin_nonlocal(xi, eta, t1, p1, t2, p2, polarization)
            )
        return value

    def objective(x):
        ta, pa = normalize_direction_angles(x[0], x[1])
        tb, pb = normalize_direction_angles(x[2], x[3])
        tc, pc = normalize_direction_angles(x[4], x[5])
        td, pd = normalize_direction_angles(x[6], x[7])
        xi, eta = _state_parameters(x, 8, state, config.fix_state)
        combination = (
            pair_correlation(xi, eta, ta, pa, tb, pb)
            + pair_correlation(xi, eta, ta, pa, tc, pc)
            + pair_correlation(xi, eta, td, pd, tb, pb)
            - pair_correlation(xi, eta, td, pd, tc, pc)
        )
        return -abs(combination)

    bounds = _direction_bounds(4)
    if not config.fix_state:
        bounds += [(0.0, TWO_PI), (0.0, TWO_PI)]
    x, _, converged = _multi_start(objective, bounds, config)

    angles = tuple(Direction(x[2 * k], x[2 * k + 1]) for k in range(4))
    best_state = (
        state
        if config.fix_state
        else EntangledState(x[8], x[9], polarization)
    )
    combo = chsh_breakdown(best_state, *angles)
    best_value = abs(
        {
            Part.TOTAL: combo.total,
            Part.LOCAL: combo.local,
            Part.NONLOCAL: combo.nonlocal_,
        }[part]
    )
    return OptimizationResult(best_value, angles, best_state, config.restarts, converged)


class ScanRow(NamedTuple):
    """One grid point of a Wigner scan."""

    theta_a: float
    phi_a: float
    theta_b: float
    phi_b: float
    theta_c: float
    phi_c: float
    w_local: float
    w_nonlocal: float
    w_total: float


def _resolve_ties(fixed: Mapping[str, float | str], free: set[str]) -> dict[str, str]:
    """Map each tied angle to the terminal angle it copies; reject cycles."""
    ties = {}
    for name, value in fixed.items():
        if not isinstance(value, str):
            continue
        target = value
        seen = {name}
        while True:
            if target not in ANGLE_NAMES:
                raise ValueError(f"unknown angle reference {target!r}")
            if target in seen:
                raise ValueError(f"circular angle reference involving {target!r}")
            seen.add(target)
            if target in free:
                break
            if target not in fixed:
                raise ValueError(f"{name!r} references unspecified angle {target!r}")
            nxt = fixed[target]
            if not isinstance(nxt, str):
                break  # terminal angle pinned to a value
            target = nxt
        ties[name] = target
    return ties


def scan_w(
    state: EntangledState,
    grid: Mapping[str, int],
    fixed: Mapping[str, float | str] | None = None,
    signs: SignPair | None = None,
    row_cap: int = DEFAULT_ROW_CAP,
) -> Iterator[ScanRow]:
    """Tabulate the Wigner correlator over a rectangular angle grid.

    `grid` gives the sample count (at least 2) for each free angle; `fixed`
    pins the remaining angles to values, or ties them to another angle by
    naming it.  Every angle in `ANGLE_NAMES` must be covered.  Polar angles
    sample [0, pi] inclusive, azimuthal angles [0, 2*pi) half-open.  Rows
    come out in lexicographic order of the free angles (canonical order,
    leftmost slowest) and each row is an exact `wigner_w` evaluation.
    """
    fixed = dict(fixed or {})
    grid = dict(grid)
    if signs is None:
        signs = canonical_sign_pairs(state.polarization)[0]

    for name in list(grid) + list(fixed):
        if name not in ANGLE_NAMES:
            raise ValueError(f"unknown angle name {name!r}")
    free = [name for name in ANGLE_NAMES if name in grid]
    for name in ANGLE_NAMES:
        covered = (name in grid) + (name in fixed)
        if covered == 0:
            raise ValueError(f"angle {name!r} is neither gridded nor fixed")
        if covered == 2:
            raise ValueError(f"angle {name!r} is both gridded and fixed")

    counts = [int(grid[name]) for name in free]
    for name, count in zip(free, counts):
        if count < 2:
            raise ValueError(f"grid count for {name!r} must be at least 2")
    rows = int(np.prod(counts)) if counts else 1
    if rows > row_cap:
        raise ScanCapacityError(f"grid has {rows} rows, cap is {row_cap}")

    ties = _resolve_ties(fixed, set(free))
    axes = []
    for name, count in zip(free, counts):
        if name.startswith("theta"):
            axes.append(np.linspace(0.0, math.pi, count))
        else:
            axes.append(np.linspace(0.0, TWO_PI, count, endpoint=False))

    def rows_iter():
        for index in np.ndindex(*counts):
            values = {name: float(fixed[name]) for name in fixed if name not in ties}
            for name, axis, k in zip(free, axes, index):
                values[name] = float(axis[k])
            for name, source in ties.items():
                values[name] = values[source]
            a = Direction(values["theta_a"], values["phi_a"])
            b = Direction(values["theta_b"], values["phi_b"])
            c = Direction(values["theta_c"], values["phi_c"])
            result = wigner_w(state, signs, a, b, c)
            yield ScanRow(
                values["theta_a"],
                values["phi_a"],
                values["theta_b"],
                values["phi_b"],
                values["theta_c"],
                values["phi_c"],
                result.local,
                result.nonlocal_,
                result.total,
            )

    return rows_iter()
