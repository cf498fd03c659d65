"""Phase-space types for n unit balls in R^d.

Ball indices are 0-based everywhere in the package; pairs are written ``(j, k)``
with ``j < k``. Positions and velocities are stored as read-only ``(n, d)``
float arrays so a state can be shared between threads without copying.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Tuple

import numpy as np

from hardball.errors import InvalidState, UnsupportedGeometry

Pair = Tuple[int, int]


def _frozen(array: np.ndarray) -> np.ndarray:
    out = np.array(array, dtype=float, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class BallState:
    index: int
    center: np.ndarray
    velocity: np.ndarray


@dataclass(frozen=True, eq=False)
class SystemState:
    """Positions and velocities of all balls at one instant.

    ``velocities`` are the right-limit velocities v(t+) unless the state was
    produced by a left-sided evaluation.
    """

    time: float
    positions: np.ndarray
    velocities: np.ndarray

    def __post_init__(self) -> None:
        positions = _frozen(self.positions)
        velocities = _frozen(self.velocities)
        if positions.ndim != 2 or positions.shape != velocities.shape:
            raise InvalidState(f"positions {positions.shape} and velocities {velocities.shape} must be equal (n, d) arrays")
        n, d = positions.shape
        if n < 2:
            raise InvalidState(f"need at least 2 balls, got {n}")
        if d < 2:
            raise InvalidState(f"need dimension d >= 2, got {d}")
        if not (np.all(np.isfinite(positions)) and np.all(np.isfinite(velocities))):
            raise InvalidState("non-finite coordinates")
        object.__setattr__(self, "time", float(self.time))
        object.__setattr__(self, "positions", positions)
        object.__setattr__(self, "velocities", velocities)

    @classmethod
    def create(
        cls,
        centers: Sequence[Sequence[float]],
        velocities: Sequence[Sequence[float]],
        time: float = 0.0,
        masses: Optional[Sequence[float]] = None,
        radii: Optional[Sequence[float]] = None,
    ) -> "SystemState":
        """Build a state, rejecting anything but unit masses and unit radii."""
        for label, values in (("masses", masses), ("radii", radii)):
            if values is not None and any(float(v) != 1.0 for v in values):
                raise UnsupportedGeometry(f"all {label} must equal 1")
        return cls(time=time, positions=np.asarray(centers, dtype=float), velocities=np.asarray(velocities, dtype=float))

    @property
    def n(self) -> int:
        return int(self.positions.shape[0])

    @property
    def dimension(self) -> int:
        return int(self.positions.shape[1])

    @property
    def balls(self) -> Tuple[BallState, ...]:
        return tuple(BallState(i, self.positions[i], self.velocities[i]) for i in range(self.n))

    @property
    def phase_position(self) -> np.ndarray:
        """Bold x(t): all centres concatenated into one vector of R^{dn}."""
        return self.positions.reshape(-1)

    @property
    def phase_velocity(self) -> np.ndarray:
        return self.velocities.reshape(-1)

    @property
    def energy(self) -> float:
        """|v|^2 over the whole phase vector."""
        return float(np.sum(self.velocities * self.velocities))

    @property
    def momentum(self) -> np.ndarray:
        return self.velocities.sum(axis=0)

    @property
    def center_sum(self) -> np.ndarray:
        return self.positions.sum(axis=0)

    def pairs(self) -> Iterator[Pair]:
        for j in range(self.n - 1):
            for k in range(j + 1, self.n):
                yield j, k

    def distance(self, j: int, k: int) -> float:
        return float(np.linalg.norm(self.positions[j] - self.positions[k]))

    def pair_distances(self) -> np.ndarray:
        """Matrix of centre distances (diagonal set to +inf)."""
        diff = self.positions[:, None, :] - self.positions[None, :, :]
        dist = np.sqrt(np.sum(diff * diff, axis=-1))
        np.fill_diagonal(dist, np.inf)
        return dist

    def min_gap(self) -> float:
        """Smallest surface gap, min |x^j - x^k| - 2."""
        return float(self.pair_distances().min() - 2.0)

    def validate(self, overlap_tol: float) -> "SystemState":
        gap = self.min_gap()
        if gap < -overlap_tol:
            raise InvalidState(f"balls overlap: smallest gap {gap!r}")
        return self

    def advanced(self, dt: float) -> "SystemState":
        """Ballistic state dt later (dt may be negative)."""
        return SystemState(self.time + dt, self.positions + dt * self.velocities, self.velocities)

    def with_velocities(self, velocities: np.ndarray) -> "SystemState":
        return SystemState(self.time, self.positions, velocities)

    def shifted(self, offset: float) -> "SystemState":
        """Same phase point relabelled to time + offset."""
        return SystemState(self.time + offset, self.positions, self.velocities)


@dataclass(frozen=True, eq=False)
class ContactFrame:
    """Unit line of centres x^{jk} = (x^j - x^k)/|x^j - x^k| for a pair."""

    pair: Pair
    unit_axis: np.ndarray
    distance: float

    @classmethod
    def of(cls, state: SystemState, j: int, k: int) -> "ContactFrame":
        axis = state.positions[j] - state.positions[k]
        distance = float(np.linalg.norm(axis))
        if distance == 0.0:
            raise InvalidState(f"balls {j} and {k} share a centre")
        return cls(pair=(j, k), unit_axis=_frozen(axis / distance), distance=distance)
