"""Domain types and elementary constructions for the defected coin walk.

Conventions used throughout the package:

* angles are degrees at every public interface and converted to radians
  exactly once, inside the constructors here;
* the coin basis is (H, V) with H = index 0; H-amplitude moves one site
  to the left per step, V-amplitude one site to the right;
* the defect multiplies every amplitude departing its site by exp(i*phi),
  identically for both coin components.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import math

import numpy as np

NORM_TOL = 1e-12
DEFAULT_MAX_STEPS = 10_000


class WalkError(Exception):
    """Base class for everything raised deliberately by this package."""


class ValidationError(WalkError):
    """A configuration value is outside its documented domain."""


class ConsistencyError(WalkError):
    """A numerical invariant (norm, trace, residual) drifted past tolerance."""


@dataclass(frozen=True)
class CoinAngle:
    """Half-wave-plate angle parameterizing the coin rotation.

    The physical rotation angle is 2*theta; theta = 22.5 degrees gives the
    Hadamard coin.  The walk degenerates to deterministic transport at the
    endpoints 0 and 45 degrees; those values are accepted and flagged via
    :attr:`is_degenerate` rather than rejected, since they make useful
    analytic test cases.
    """

    theta_deg: float

    def __post_init__(self):
        t = float(self.theta_deg)
        if not math.isfinite(t) or not (0.0 <= t <= 45.0):
            raise ValidationError(f"coin angle must lie in [0, 45] degrees, got {self.theta_deg!r}")
        object.__setattr__(self, "theta_deg", t)

    @property
    def theta_rad(self) -> float:
        return math.radians(self.theta_deg)

    @property
    def is_degenerate(self) -> bool:
        """True at the interval endpoints where the coin stops mixing."""
        return self.theta_deg in (0.0, 45.0)


@dataclass(frozen=True)
class DefectSpec:
    """A single lattice site whose departing amplitudes pick up a phase.

    The phase is stored normalized into [0, 360) degrees.  site is the
    lattice position n of the defect.
    """

    site: int
    phase_deg: float

    def __post_init__(self):
        if self.site != int(self.site):
            raise ValidationError(f"defect site must be an integer, got {self.site!r}")
        p = float(self.phase_deg)
        if not math.isfinite(p):
            raise ValidationError(f"defect phase must be finite, got {self.phase_deg!r}")
        object.__setattr__(self, "site", int(self.site))
        object.__setattr__(self, "phase_deg", p % 360.0)

    @property
    def phase_rad(self) -> float:
        return math.radians(self.phase_deg)

    @property
    def phase_factor(self) -> complex:
        """exp(i*phi), the multiplier applied to amplitudes leaving the site."""
        return complex(np.exp(1j * self.phase_rad))


@dataclass(frozen=True)
class CoinState:
    """Normalized two-component coin state (amp_h, amp_v)."""

    amp_h: complex
    amp_v: complex

    def __post_init__(self):
        h = complex(self.amp_h)
        v = complex(self.amp_v)
        n = abs(h) ** 2 + abs(v) ** 2
        if abs(n - 1.0) > NORM_TOL:
            raise ValidationError(f"coin state norm is {n!r}, must be 1 within {NORM_TOL}")
        object.__setattr__(self, "amp_h", h)
        object.__setattr__(self, "amp_v", v)

    @classmethod
    def from_amplitudes(cls, amp_h: complex, amp_v: complex) -> "CoinState":
        """Build a coin state from arbitrary amplitudes, normalizing them."""
        n = math.sqrt(abs(amp_h) ** 2 + abs(amp_v) ** 2)
        if n == 0.0:
            raise ValidationError("coin amplitudes cannot both be zero")
        return cls(amp_h / n, amp_v / n)

    def as_array(self) -> np.ndarray:
        return np.array([self.amp_h, self.amp_v], dtype=complex)


_SQ2 = 1.0 / math.sqrt(2.0)

#: Named coin states accepted at every public interface.  `antisym` is the
#: circular-type state (|H> - i|V>)/sqrt(2); `minus` is (|H> - |V>)/sqrt(2).
NAMED_STATES = {
    "antisym": CoinState(_SQ2, -1j * _SQ2),
    "minus": CoinState(_SQ2, -_SQ2),
    "h": CoinState(1.0, 0.0),
    "v": CoinState(0.0, 1.0),
}


def named_state(name: str) -> CoinState:
    try:
        return NAMED_STATES[name]
    except KeyError:
        known = ", ".join(sorted(NAMED_STATES))
        raise ValidationError(f"unknown coin state {name!r}; known names: {known}") from None


@dataclass
class PureState:
    """Walker+coin amplitudes over a contiguous window of lattice sites.

    amps has shape (S, 2): one row per stored site, columns indexed by coin
    (H=0, V=1).  offset is the lattice position of row 0, so row i holds the
    amplitudes of site offset + i.  The window is grown by the evolution as
    the light cone expands; sites outside it are exactly zero.
    """

    offset: int
    amps: np.ndarray

    def __post_init__(self):
        self.amps = np.ascontiguousarray(self.amps, dtype=complex)
        if self.amps.ndim != 2 or self.amps.shape[1] != 2:
            raise ValidationError(f"amps must have shape (S, 2), got {self.amps.shape}")

    @property
    def num_sites(self) -> int:
        return self.amps.shape[0]

    def positions(self) -> np.ndarray:
        """Lattice positions of the stored rows, in order."""
        return np.arange(self.offset, self.offset + self.num_sites)

    def norm(self) -> float:
        return float(np.sum(np.abs(self.amps) ** 2))

    def amplitude(self, site: int, coin: int) -> complex:
        """Amplitude at an arbitrary lattice site (zero outside the window)."""
        i = site - self.offset
        if 0 <= i < self.num_sites:
            return complex(self.amps[i, coin])
        return 0j

    def copy(self) -> "PureState":
        return PureState(self.offset, self.amps.copy())

    def check_norm(self, tol: float = 1e-10) -> None:
        n = self.norm()
        if abs(n - 1.0) > tol:
            raise ConsistencyError(f"state norm drifted to {n!r} (tolerance {tol})")


def make_initial(site: int, coin: CoinState) -> PureState:
    """All amplitude on one site, with the given coin state."""
    amps = np.zeros((1, 2), dtype=complex)
    amps[0, 0] = coin.amp_h
    amps[0, 1] = coin.amp_v
    return PureState(offset=int(site), amps=amps)


@dataclass(frozen=True)
class WalkConfig:
    """Full specification of one walk run."""

    steps: int
    coin: CoinAngle = field(default_factory=lambda: CoinAngle(22.5))
    defect: DefectSpec | None = None
    initial_site: int = 0
    initial_coin: CoinState = field(default_factory=lambda: NAMED_STATES["antisym"])
    max_steps: int = DEFAULT_MAX_STEPS

    def __post_init__(self):
        if self.steps != int(self.steps) or self.steps < 0:
            raise ValidationError(f"steps must be a nonnegative integer, got {self.steps!r}")
        object.__setattr__(self, "steps", int(self.steps))
        if self.steps > self.max_steps:
            raise ValidationError(
                f"steps={self.steps} exceeds the configured budget of {self.max_steps}; "
                "raise max_steps explicitly if this is intentional"
            )

    @property
    def recurrence_site(self) -> int:
        """Site whose return probability is tracked: the defect site when a
        defect exists, the initial site otherwise."""
        return self.defect.site if self.defect is not None else self.initial_site

    @property
    def degenerate_coin(self) -> bool:
        return self.coin.is_degenerate


def coin_matrix(coin: CoinAngle) -> np.ndarray:
    """The 2x2 coin rotation for a half-wave-plate angle.

    Returns [[cos 2t, sin 2t], [sin 2t, -cos 2t]] with t in radians.  The
    matrix is real symmetric orthogonal with determinant -1, hence its own
    inverse.  theta = 22.5 degrees yields the Hadamard matrix.
    """
    a = 2.0 * coin.theta_rad
    c, s = math.cos(a), math.sin(a)
    return np.array([[c, s], [s, -c]], dtype=float)
