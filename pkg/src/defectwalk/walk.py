"""Exact state-vector evolution of the defected walk and its observables.

One step is (shift) o (coin): the coin rotation acts first at every site,
then the H component moves one site left and the V component one site
right.  Amplitudes departing the defect site are multiplied by exp(i*phi)
in both coin components before they move.  The amplitude window grows by
one site per side per step, so no boundary is ever encountered and the
evolution is exact on the infinite line.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._threads import grid_map
from .core import (
    CoinAngle,
    ConsistencyError,
    DefectSpec,
    PureState,
    ValidationError,
    WalkConfig,
    coin_matrix,
    make_initial,
)


@dataclass
class Distribution:
    """Position probabilities over a contiguous window of sites.

    probs[i] belongs to lattice site offset + i.  Entries are nonnegative
    and sum to 1 (within the evolution's norm tolerance).
    """

    offset: int
    probs: np.ndarray

    def __post_init__(self):
        self.probs = np.asarray(self.probs, dtype=float)
        if self.probs.ndim != 1:
            raise ValidationError(f"probs must be one-dimensional, got shape {self.probs.shape}")

    def positions(self) -> np.ndarray:
        return np.arange(self.offset, self.offset + len(self.probs))

    def prob_at(self, site: int) -> float:
        i = site - self.offset
        if 0 <= i < len(self.probs):
            return float(self.probs[i])
        return 0.0

    def total(self) -> float:
        return float(self.probs.sum())


@dataclass
class TrajectoryRecord:
    """Per-step record of an evolve() run, step 0 included.

    distributions has steps+1 entries; variances[t] and recurrences[t] are
    the variance and the probability at recurrence_site after t steps.
    """

    distributions: list
    variances: np.ndarray
    recurrences: np.ndarray
    recurrence_site: int

    @property
    def final_distribution(self) -> Distribution:
        return self.distributions[-1]

    @property
    def final_variance(self) -> float:
        return float(self.variances[-1])

    @property
    def final_recurrence(self) -> float:
        return float(self.recurrences[-1])


@dataclass
class SweepTable:
    """One row per grid point of a parameter sweep."""

    parameter: str
    values: np.ndarray
    variances: np.ndarray
    recurrences: np.ndarray

    def __len__(self) -> int:
        return len(self.values)


def apply_coin(state: PureState, coin: CoinAngle) -> PureState:
    """Rotate the coin at every site; support and norm are unchanged."""
    C = coin_matrix(coin)
    return PureState(state.offset, state.amps @ C.T)


def apply_shift(state: PureState, defect: DefectSpec | None = None) -> PureState:
    """Coin-conditioned shift with the defect phase applied at departure.

    H amplitude of site x lands on x-1, V amplitude lands on x+1.  When a
    defect sits at site n, both amplitudes leaving n carry an extra factor
    exp(i*phi).  The stored window grows by one site on each side.
    """
    S = state.num_sites
    new = np.zeros((S + 2, 2), dtype=complex)
    new[0:S, 0] = state.amps[:, 0]
    new[2 : S + 2, 1] = state.amps[:, 1]
    if defect is not None:
        i = defect.site - state.offset
        if 0 <= i < S:
            f = defect.phase_factor
            new[i, 0] *= f
            new[i + 2, 1] *= f
    return PureState(state.offset - 1, new)


def step(state: PureState, coin: CoinAngle, defect: DefectSpec | None = None) -> PureState:
    """One full walk step: coin first, then the shift."""
    return apply_shift(apply_coin(state, coin), defect)


def position_distribution(state: PureState) -> Distribution:
    p = np.abs(state.amps[:, 0]) ** 2 + np.abs(state.amps[:, 1]) ** 2
    return Distribution(state.offset, p)


def mean_position(dist: Distribution) -> float:
    return float(np.dot(dist.positions(), dist.probs))


def variance(dist: Distribution) -> float:
    """Second central moment of position."""
    x = dist.positions().astype(float)
    m = float(np.dot(x, dist.probs))
    return float(np.dot((x - m) ** 2, dist.probs))


def tv_distance(a: Distribution, b: Distribution) -> float:
    """Total-variation distance (1/2) sum |a - b| over the union support."""
    lo = min(a.offset, b.offset)
    hi = max(a.offset + len(a.probs), b.offset + len(b.probs))
    pa = np.zeros(hi - lo)
    pb = np.zeros(hi - lo)
    pa[a.offset - lo : a.offset - lo + len(a.probs)] = a.probs
    pb[b.offset - lo : b.offset - lo + len(b.probs)] = b.probs
    return 0.5 * float(np.abs(pa - pb).sum())


def evolve(config: WalkConfig, norm_tol: float = 1e-10) -> TrajectoryRecord:
    """Run the walk for config.steps steps, recording observables per step.

    The recurrence column tracks config.recurrence_site.  Norm is checked
    after every step; drift beyond norm_tol raises ConsistencyError.
    """
    state = make_initial(config.initial_site, config.initial_coin)
    site = config.recurrence_site

    dists = [position_distribution(state)]
    variances = [variance(dists[0])]
    recurrences = [dists[0].prob_at(site)]

    for _ in range(config.steps):
        state = step(state, config.coin, config.defect)
        d = position_distribution(state)
        dists.append(d)
        variances.append(variance(d))
        recurrences.append(d.prob_at(site))
    state.check_norm(norm_tol)

    return TrajectoryRecord(
        distributions=dists,
        variances=np.array(variances),
        recurrences=np.array(recurrences),
        recurrence_site=site,
    )


def _replace_defect(config: WalkConfig, defect: DefectSpec | None) -> WalkConfig:
    return WalkConfig(
        steps=config.steps,
        coin=config.coin,
        defect=defect,
        initial_site=config.initial_site,
        initial_coin=config.initial_coin,
        max_steps=config.max_steps,
    )


def sweep_phase(base: WalkConfig, phases_deg) -> SweepTable:
    """Evolve once per phase value; defect site is taken from base.

    base must carry a defect (its site anchors the sweep).  A phase of 0
    reproduces the defect-free walk exactly.
    """
    if base.defect is None:
        raise ValidationError("sweep_phase needs a base config with a defect site")
    phases = [float(p) for p in phases_deg]
    if not phases:
        raise ValidationError("empty phase grid")
    site = base.defect.site

    def run(phi):
        rec = evolve(_replace_defect(base, DefectSpec(site, phi)))
        return rec.final_variance, rec.final_recurrence

    rows = grid_map(run, phases)
    return SweepTable(
        parameter="phi_deg",
        values=np.array(phases),
        variances=np.array([r[0] for r in rows]),
        recurrences=np.array([r[1] for r in rows]),
    )


def sweep_coin(base: WalkConfig, angles_deg) -> SweepTable:
    """Evolve once per coin angle, defect and the rest held fixed."""
    angles = [float(a) for a in angles_deg]
    if not angles:
        raise ValidationError("empty coin-angle grid")

    def run(theta):
        cfg = WalkConfig(
            steps=base.steps,
            coin=CoinAngle(theta),
            defect=base.defect,
            initial_site=base.initial_site,
            initial_coin=base.initial_coin,
            max_steps=base.max_steps,
        )
        rec = evolve(cfg)
        return rec.final_variance, rec.final_recurrence

    rows = grid_map(run, angles)
    return SweepTable(
        parameter="theta_deg",
        values=np.array(angles),
        variances=np.array([r[0] for r in rows]),
        recurrences=np.array([r[1] for r in rows]),
    )
