"""Measurement-pipeline emulation: dephasing, finite counts, error bars.

The experiment this models reads out the walk by photon counting: each
step's distribution is estimated from roughly N coincidence counts, and
error bars come from Monte Carlo resampling.  Interferometric
imperfection is summarized by a single per-step visibility v, modeled
here as a coin-dephasing channel

    rho -> (1+v)/2 * rho + (1-v)/2 * Z_c rho Z_c

with Z_c the coin phase flip applied identically at every site.  The
channel multiplies the HV coherences by v and leaves populations alone;
one walk step built from it shows fringe visibility exactly v, and v=1
reproduces the pure-state engine bit for bit.

Randomness policy: every multinomial draw gets its own generator seeded
by the tuple (rng_seed, step, rep) through SeedSequence, so results are
reproducible and independent of evaluation order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

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
from .walk import Distribution, variance as dist_variance

RNG_ALGORITHM = "PCG64"
TRACE_TOL = 1e-8


@dataclass(frozen=True)
class EmulationConfig:
    """Knobs of the counting-statistics emulation.

    counts_per_step is the number of detection events used to estimate
    each step's distribution (default 18 000, i.e. 300 per second over a
    60 s acquisition).  mc_reps is the number of Monte Carlo repetitions
    behind each error bar.  visibility is the per-step coin coherence
    retention in [0, 1].
    """

    walk: WalkConfig
    counts_per_step: int = 18_000
    mc_reps: int = 1_000
    visibility: float = 0.998
    rng_seed: int = 0

    def __post_init__(self):
        if self.counts_per_step < 1:
            raise ValidationError(f"counts_per_step must be >= 1, got {self.counts_per_step!r}")
        if self.mc_reps < 1:
            raise ValidationError(f"mc_reps must be >= 1, got {self.mc_reps!r}")
        if not (0.0 <= self.visibility <= 1.0):
            raise ValidationError(f"visibility must lie in [0, 1], got {self.visibility!r}")


@dataclass
class DensityState:
    """Mixed walker+coin state over a contiguous site window.

    rho has shape (S, 2, S, 2), indexed (ket site, ket coin, bra site,
    bra coin); offset maps row 0 to its lattice position, as in PureState.
    """

    offset: int
    rho: np.ndarray

    def __post_init__(self):
        self.rho = np.ascontiguousarray(self.rho, dtype=complex)
        s = self.rho.shape
        if len(s) != 4 or s[1] != 2 or s[3] != 2 or s[0] != s[2]:
            raise ValidationError(f"rho must have shape (S, 2, S, 2), got {s}")

    @classmethod
    def from_pure(cls, state: PureState) -> "DensityState":
        a = state.amps.reshape(-1)
        rho = np.outer(a, a.conj()).reshape(
            state.num_sites, 2, state.num_sites, 2
        )
        return cls(state.offset, rho)

    @property
    def num_sites(self) -> int:
        return self.rho.shape[0]

    def trace(self) -> float:
        return float(np.einsum("xaxa->", self.rho).real)

    def matrix(self) -> np.ndarray:
        """Flattened (2S, 2S) view for eigenvalue checks."""
        S = self.num_sites
        return self.rho.reshape(2 * S, 2 * S)

    def check(self, trace_tol: float = TRACE_TOL, herm_tol: float = 1e-12) -> None:
        tr = self.trace()
        if abs(tr - 1.0) > trace_tol:
            raise ConsistencyError(f"density trace drifted to {tr!r} (tolerance {trace_tol})")
        m = self.matrix()
        h = float(np.abs(m - m.conj().T).max())
        if h > herm_tol:
            raise ConsistencyError(f"density matrix deviates from Hermitian by {h!r}")

    def position_distribution(self) -> Distribution:
        p = np.einsum("xaxa->x", self.rho).real
        return Distribution(self.offset, p)


def density_step(
    state: DensityState,
    coin: CoinAngle,
    defect: DefectSpec | None = None,
    visibility: float = 1.0,
) -> DensityState:
    """One walk step on a density matrix, followed by coin dephasing.

    The unitary part mirrors walk.step exactly: coin rotation, then the
    defect phase on amplitudes departing the defect site, then the
    coin-conditioned shift.  The dephasing channel scales the HV and VH
    coherence blocks by the visibility.
    """
    C = coin_matrix(coin)
    rho = np.einsum("ac,xcyd,bd->xayb", C, state.rho, C.conj())

    if defect is not None:
        i = defect.site - state.offset
        if 0 <= i < state.num_sites:
            f = defect.phase_factor
            rho[i, :, :, :] *= f
            rho[:, :, i, :] *= np.conj(f)

    S = state.num_sites
    new = np.zeros((S + 2, 2, S + 2, 2), dtype=complex)
    ket = (slice(0, S), slice(2, S + 2))     # H lands left, V lands right
    for a in range(2):
        for b in range(2):
            new[ket[a], a, ket[b], b] = rho[:, a, :, b]

    if visibility != 1.0:
        new[:, 0, :, 1] *= visibility
        new[:, 1, :, 0] *= visibility

    return DensityState(state.offset - 1, new)


def evolve_with_visibility(config: EmulationConfig) -> list:
    """Distributions of the dephased walk for steps 0..t.

    The density trace is checked after every step; drift past 1e-8 aborts
    with ConsistencyError.  At visibility 1 the output matches the
    pure-state engine to machine precision.
    """
    w = config.walk
    state = DensityState.from_pure(make_initial(w.initial_site, w.initial_coin))
    dists = [state.position_distribution()]
    for _ in range(w.steps):
        state = density_step(state, w.coin, w.defect, config.visibility)
        tr = state.trace()
        if abs(tr - 1.0) > TRACE_TOL:
            raise ConsistencyError(f"density trace drifted to {tr!r} after a step")
        dists.append(state.position_distribution())
    return dists


def rng_for(seed: int, *key: int) -> np.random.Generator:
    """Independent generator for one (seed, step, rep, ...) coordinate."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence((int(seed),) + tuple(int(k) for k in key))))


def sample_counts(dist: Distribution, n: int, rng) -> np.ndarray:
    """One multinomial draw of n events from a distribution.

    rng may be a Generator or an integer seed.  Tiny negative entries from
    density-matrix round-off are clipped before normalization.
    """
    if n < 1:
        raise ValidationError(f"need at least one count, got {n!r}")
    if not isinstance(rng, np.random.Generator):
        rng = rng_for(int(rng))
    p = np.clip(np.asarray(dist.probs, dtype=float), 0.0, None)
    return rng.multinomial(int(n), p / p.sum())


@dataclass
class StepCounts:
    """Sampled statistics of one step.

    counts is the first repetition's raw draw (it sums to counts_per_step);
    p_mean and p_std aggregate the per-site frequency estimates over all
    repetitions.  The std fields are None when only one repetition ran.
    """

    step: int
    offset: int
    counts: np.ndarray
    p_mean: np.ndarray
    p_std: np.ndarray | None
    var_mean: float
    var_std: float | None
    rec_mean: float
    rec_std: float | None


@dataclass
class CountTable:
    """Monte Carlo summary of the emulated measurement, step by step."""

    config: EmulationConfig
    steps: list
    std_available: bool
    algorithm: str = RNG_ALGORITHM

    @property
    def var_mean(self) -> np.ndarray:
        return np.array([s.var_mean for s in self.steps])

    @property
    def var_std(self) -> np.ndarray | None:
        if not self.std_available:
            return None
        return np.array([s.var_std for s in self.steps])

    @property
    def rec_mean(self) -> np.ndarray:
        return np.array([s.rec_mean for s in self.steps])

    @property
    def rec_std(self) -> np.ndarray | None:
        if not self.std_available:
            return None
        return np.array([s.rec_std for s in self.steps])


def estimate_with_errors(config: EmulationConfig) -> CountTable:
    """Sample every step's distribution mc_reps times and summarize.

    Per repetition and step, a multinomial draw of counts_per_step events
    is turned into frequency estimates, a variance estimate and a
    recurrence estimate; the table reports their means and sample
    standard deviations.  Each step is sampled independently, matching a
    readout that reconfigures per step.  Identical configs (seed included)
    produce identical tables.
    """
    dists = evolve_with_visibility(config)
    n = config.counts_per_step
    reps = config.mc_reps
    site = config.walk.recurrence_site
    rows = []
    for t, d in enumerate(dists):
        x = d.positions().astype(float)
        i_site = site - d.offset
        freqs = np.empty((reps, len(d.probs)))
        first = None
        for r in range(reps):
            c = sample_counts(d, n, rng_for(config.rng_seed, t, r))
            if r == 0:
                first = c
            freqs[r] = c / n
        means = freqs.mean(axis=0)
        mean_x = freqs @ x
        var_est = freqs @ (x**2) - mean_x**2
        rec_est = freqs[:, i_site] if 0 <= i_site < len(d.probs) else np.zeros(reps)
        if reps > 1:
            p_std = freqs.std(axis=0, ddof=1)
            var_std = float(var_est.std(ddof=1))
            rec_std = float(rec_est.std(ddof=1))
        else:
            p_std = var_std = rec_std = None
        rows.append(
            StepCounts(
                step=t,
                offset=d.offset,
                counts=first,
                p_mean=means,
                p_std=p_std,
                var_mean=float(var_est.mean()),
                var_std=var_std,
                rec_mean=float(rec_est.mean()),
                rec_std=rec_std,
            )
        )
    return CountTable(config=config, steps=rows, std_available=reps > 1)
