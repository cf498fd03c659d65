"""Exception hierarchy shared by the simulator, the analysis layer and the CLI."""

from __future__ import annotations

from typing import TYPE_CHECKING, Sequence, Tuple

if TYPE_CHECKING:
    from hardball.engine.events import Trajectory

Pair = Tuple[int, int]


class HardballError(Exception):
    """Base class for all domain errors."""


class InvalidState(HardballError):
    """A phase point violates a state invariant (shape, finiteness, overlap)."""


class UnsupportedGeometry(InvalidState):
    """Masses or radii other than 1 were supplied."""


class ZeroEnergy(HardballError):
    """No relative motion is left after removing the centre-of-mass velocity."""


class NotInContact(HardballError):
    def __init__(self, pair: Pair, distance: float) -> None:
        super().__init__(f"balls {pair} are not in contact (distance {distance!r})")
        self.pair = pair
        self.distance = distance


class NotApproaching(HardballError):
    def __init__(self, pair: Pair, normal_speed: float) -> None:
        super().__init__(f"balls {pair} are not approaching (normal speed {normal_speed!r})")
        self.pair = pair
        self.normal_speed = normal_speed


class ZeroVector(HardballError):
    """An angle was requested against a vector of (numerically) zero length."""


class SimultaneousCollision(HardballError):
    def __init__(self, time: float, pairs: Sequence[Pair]) -> None:
        listed = ", ".join(f"{j}-{k}" for j, k in pairs)
        super().__init__(f"simultaneous collision at t={time!r} involving pairs {listed}")
        self.time = time
        self.pairs = tuple(pairs)


class EventBudgetExceeded(HardballError):
    def __init__(self, max_events: int, partial: "Trajectory") -> None:
        super().__init__(f"more than {max_events} collisions; partial log has {len(partial.events)} events")
        self.max_events = max_events
        self.partial = partial


class ContactDrift(HardballError):
    def __init__(self, pair: Pair, error: float) -> None:
        super().__init__(f"contact distance of {pair} drifted by {error!r}")
        self.pair = pair
        self.error = error


class OutOfSpan(HardballError):
    def __init__(self, time: float, span: Tuple[float, float]) -> None:
        super().__init__(f"t={time!r} outside simulated span [{span[0]!r}, {span[1]!r}]")
        self.time = time
        self.span = span


class NotBracketed(HardballError):
    """The simulated span does not contain the sign change of x·v."""


class NoGap(HardballError):
    """Single-linkage clustering left every ball in one cluster."""


class NoCollisions(HardballError):
    """The trajectory has no collision on the requested range."""


class InvalidInput(HardballError, ValueError):
    """Arguments outside the domain of a formula or generator."""


class SamplingExhausted(HardballError):
    def __init__(self, attempts: int) -> None:
        super().__init__(f"no admissible placement after {attempts} rejections")
        self.attempts = attempts


class SchemaVersionError(HardballError):
    def __init__(self, schema: str, version: int) -> None:
        super().__init__(f"unsupported event log {schema!r} version {version}")
        self.schema = schema
        self.version = version
