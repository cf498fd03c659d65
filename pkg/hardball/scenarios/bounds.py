"""Closed-form collision-count bounds and time scales.

Every bound is reported as log10. Where the factors are integers a second,
independent evaluation runs through Python big integers (``exact_log10``)
so the two can be compared; small enough values are also returned exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Tuple, Union

import numpy as np
import pandas as pd

from hardball.errors import InvalidInput

LN10 = math.log(10.0)
# exact values are materialised only up to this many bits
EXACT_BITS_LIMIT = 100_000
# factorials above this n only go through lgamma
EXACT_FACTORIAL_LIMIT = 20_000
SEPARATION_CONSTANT = 1.61

Exact = Union[int, float, None]


@dataclass(frozen=True)
class BoundReport:
    formula: str
    inputs: Dict[str, Any]
    log10_value: float
    exact_log10: Optional[float] = None
    exact_value: Exact = None
    extras: Dict[str, Any] = field(default_factory=dict)

    @property
    def value(self) -> float:
        """The bound as a float (inf when it overflows)."""
        if self.log10_value > 308:
            return math.inf
        return 10.0**self.log10_value


def _is_integral(x: float) -> bool:
    return float(x).is_integer()


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise InvalidInput(message)


def bfk_radius_bound(n: int, mass_ratio: float = 1.0, radius_ratio: float = 1.0) -> BoundReport:
    """(32·sqrt(m)·r·n^{3/2})^{n²} for mass ratio m and radius ratio r."""
    _require(n >= 2, f"n must be >= 2, got {n}")
    _require(mass_ratio >= 1 and radius_ratio >= 1, "mass and radius ratios must be >= 1")
    log10_value = n * n * (math.log10(32.0) + 0.5 * math.log10(mass_ratio) + math.log10(radius_ratio) + 1.5 * math.log10(n))

    exact_log10 = None
    exact_value: Exact = None
    if _is_integral(mass_ratio) and _is_integral(radius_ratio):
        # base² = 1024·m·r²·n³ is an integer
        base_sq = 1024 * int(mass_ratio) * int(radius_ratio) ** 2 * n**3
        exact_log10 = n * n * math.log10(base_sq) / 2.0
        root = math.isqrt(base_sq)
        if (n * n) % 2 == 0 and n * n // 2 * base_sq.bit_length() <= EXACT_BITS_LIMIT:
            exact_value = base_sq ** (n * n // 2)
        elif root * root == base_sq and n * n * root.bit_length() <= EXACT_BITS_LIMIT:
            exact_value = root ** (n * n)
    return BoundReport(
        "bfk_radius",
        {"n": n, "mass_ratio": mass_ratio, "radius_ratio": radius_ratio},
        log10_value,
        exact_log10,
        exact_value,
    )


def bfk_mass_bound(n: int, mass_ratio: float = 1.0) -> BoundReport:
    """(400·m·n²)^{2n⁴}, independent of the radii."""
    _require(n >= 2, f"n must be >= 2, got {n}")
    _require(mass_ratio >= 1, "mass ratio must be >= 1")
    exponent = 2 * n**4
    log10_value = exponent * (math.log10(400.0) + math.log10(mass_ratio) + 2.0 * math.log10(n))

    exact_log10 = None
    exact_value: Exact = None
    if _is_integral(mass_ratio):
        base = 400 * int(mass_ratio) * n * n
        exact_log10 = exponent * math.log10(base)
        if exponent * base.bit_length() <= EXACT_BITS_LIMIT:
            exact_value = base**exponent
    return BoundReport("bfk_mass", {"n": n, "mass_ratio": mass_ratio}, log10_value, exact_log10, exact_value)


def lower_bound_cubic(n: int) -> float:
    """n³/27, a lower bound on the worst-case count in the plane."""
    _require(n >= 3, f"n must be >= 3, got {n}")
    return n**3 / 27.0


def _log10_factorial_power(n: int, coefficient: int, power: float) -> float:
    """log10(coefficient^n · (n!)^power) through lgamma."""
    return n * math.log10(coefficient) + power * math.lgamma(n + 1) / LN10


def _exact_log10_factorial_power(n: int, coefficient: int, power: float) -> Optional[float]:
    if n > EXACT_FACTORIAL_LIMIT:
        return None
    return math.log10(coefficient**n) + power * math.log10(math.factorial(n))


def _phi_log10(n: int, coefficient: int, log10_scale: float) -> float:
    """log10 of coefficient^n (n!)^{3/2} (ln 5n)^n / scale."""
    return _log10_factorial_power(n, coefficient, 1.5) + n * math.log10(math.log(5 * n)) - log10_scale


def _phi_exact_log10(n: int, coefficient: int, log10_scale: float) -> Optional[float]:
    head = _exact_log10_factorial_power(n, coefficient, 1.5)
    if head is None:
        return None
    return head + n * math.log10(math.log(5 * n)) - log10_scale


def _log10_delta(delta: Optional[float], log10_delta: Optional[float]) -> float:
    if log10_delta is not None:
        _require(log10_delta <= 0.0, "delta must be at most 1")
        return log10_delta
    _require(delta is not None and 0.0 < delta <= 1.0, f"delta must lie in (0, 1], got {delta!r}")
    return math.log10(delta)


def thm_nf_bound(n: int, delta: Optional[float] = None, log10_delta: Optional[float] = None) -> BoundReport:
    """φ_δ(n) = 73^n (n!)^{3/2} (ln 5n)^n / δ.

    Bounds the collisions of n balls when, at every collision, all other
    pairs are more than δ apart. ``log10_delta`` replaces ``delta`` when δ
    underflows a float.
    """
    _require(n >= 3, f"n must be >= 3, got {n}")
    ld = _log10_delta(delta, log10_delta)
    return BoundReport(
        "phi_delta",
        {"n": n, "log10_delta": ld},
        _phi_log10(n, 73, ld),
        _phi_exact_log10(n, 73, ld),
        extras={"recursion_holds": nf_recursion_holds(n, 10.0**ld) if ld > -300 and n >= 3 else None},
    )


def _ln_phi(n: int, coefficient: int, ln_scale: float) -> float:
    return n * math.log(coefficient) + 1.5 * math.lgamma(n + 1) + n * math.log(math.log(5 * n)) - ln_scale


def nf_recursion_holds(n: int, delta: float) -> bool:
    """φ_δ(n) >= 4φ_δ(n-1) + 72 n^{3/2} max(34n³/δ, ln(5n) φ_δ(n-1)), compared in log space."""
    _require(n >= 3, f"n must be >= 3, got {n}")
    _require(0.0 < delta <= 1.0, f"delta must lie in (0, 1], got {delta!r}")
    ln_delta = math.log(delta)
    lhs = _ln_phi(n, 73, ln_delta)
    prev = _ln_phi(n - 1, 73, ln_delta)
    spread = max(math.log(34.0) + 3.0 * math.log(n) - ln_delta, math.log(math.log(5 * n)) + prev)
    rhs = np.logaddexp(math.log(4.0) + prev, math.log(72.0) + 1.5 * math.log(n) + spread)
    return bool(lhs >= rhs)


def thm_nc_bound(n: int, epsilon: float) -> BoundReport:
    """n^{5n/2 + εn}, valid for n >= exp(36/ε²).

    ``extras`` carries the smallest valid n and, for valid n, whether
    φ_δ(n) with δ = n^{-n} stays below n^{3n/2+εn}·n^n.
    """
    _require(n >= 2, f"n must be >= 2, got {n}")
    _require(epsilon > 0.0, f"epsilon must be positive, got {epsilon!r}")
    log10_value = (2.5 + epsilon) * n * math.log10(n)
    exponent_ln = 36.0 / (epsilon * epsilon)
    min_valid_n = math.ceil(math.exp(exponent_ln)) if exponent_ln < 700 else math.inf
    consistent = None
    if n >= 3 and n >= min_valid_n:
        phi = thm_nf_bound(n, log10_delta=-n * math.log10(n))
        consistent = phi.log10_value <= (1.5 + epsilon) * n * math.log10(n) + n * math.log10(n)
    return BoundReport(
        "thm_nc",
        {"n": n, "epsilon": epsilon},
        log10_value,
        extras={"min_valid_n": min_valid_n, "consistent": consistent},
    )


def partition_times(n: int, x0_norm: float) -> Tuple[float, float]:
    """T = 18·sqrt(n)(n-1)|x(0)| and T* = 100n³|x(0)|.

    Raises:
        InvalidInput: n < 2, |x(0)| below the no-overlap floor sqrt(2)/2, or
            T* < T(1 + 3·1.61·sqrt(n)(n-1)).
    """
    _require(n >= 2, f"n must be >= 2, got {n}")
    _require(x0_norm >= math.sqrt(2.0) / 2.0, f"|x(0)| must be >= sqrt(2)/2, got {x0_norm!r}")
    root_term = math.sqrt(n) * (n - 1)
    T = 18.0 * root_term * x0_norm
    T_star = 100.0 * n**3 * x0_norm
    _require(partition_times_consistent(n), f"T* does not dominate the settling time for n={n}")
    return T, T_star


def partition_times_consistent(n: int) -> bool:
    """100n³ >= 18·sqrt(n)(n-1)·(1 + 3·1.61·sqrt(n)(n-1)), i.e. T* covers the settling time."""
    root_term = math.sqrt(n) * (n - 1)
    return 100.0 * n**3 >= 18.0 * root_term * (1.0 + 3.0 * SEPARATION_CONSTANT * root_term)


def stopping_radius(n: int, x0_norm: float) -> float:
    """(1 + 100n³)|x(0)|: no cross-partition collision once |x(t)| exceeds it."""
    _require(n >= 2, f"n must be >= 2, got {n}")
    return (1.0 + 100.0 * n**3) * x0_norm


def upcrossing_bound(n: int, rho: float) -> BoundReport:
    """φ_ρ(n) - (n+1)²/2 with φ_ρ(n) = 38^n (n!)^{3/2} (ln 5n)^n / ρ."""
    _require(n >= 2, f"n must be >= 2, got {n}")
    _require(rho > 0.0, f"rho must be positive, got {rho!r}")
    log10_rho = math.log10(rho)
    log10_phi = _phi_log10(n, 38, log10_rho)
    offset = (n + 1) ** 2 / 2.0

    def minus_offset(lp: Optional[float]) -> Optional[float]:
        if lp is None:
            return None
        if lp > 300:
            return lp
        remainder = 1.0 - offset * 10.0**-lp
        return lp + math.log10(remainder) if remainder > 0.0 else -math.inf

    return BoundReport(
        "upcrossings",
        {"n": n, "rho": rho},
        minus_offset(log10_phi),
        minus_offset(_phi_exact_log10(n, 38, log10_rho)),
        extras={"log10_phi_rho": log10_phi},
    )


def upcrossing_recursion_holds(n: int, rho: float) -> bool:
    """M(n) >= 2M(n-1) + n² + max(601 n^{13/2}/ρ, 18 n^{3/2} ln(5n)(2M(n-1) + n²))
    for M(n) = φ_ρ(n) - (n+1)²/2, compared in log space."""
    _require(n >= 3, f"n must be >= 3, got {n}")
    _require(rho > 0.0, f"rho must be positive, got {rho!r}")
    ln_rho = math.log(rho)

    def ln_m(k: int) -> float:
        ln_phi = _ln_phi(k, 38, ln_rho)
        offset = (k + 1) ** 2 / 2.0
        return ln_phi + math.log1p(-offset * math.exp(-ln_phi)) if ln_phi < 700 else ln_phi

    prev = ln_m(n - 1)
    ln_n2 = 2.0 * math.log(n)
    carried = np.logaddexp(math.log(2.0) + prev, ln_n2)
    spread = max(
        math.log(601.0) + 6.5 * math.log(n) - ln_rho,
        math.log(18.0) + 1.5 * math.log(n) + math.log(math.log(5 * n)) + carried,
    )
    return bool(ln_m(n) >= np.logaddexp(carried, spread))


@dataclass(frozen=True)
class CoveringSchedule:
    times: tuple
    j_star: int
    bound: float

    @property
    def within_bound(self) -> bool:
        return self.j_star <= self.bound


def covering_schedule(n: int, x0_norm: float, radial_speed: float = 0.0) -> CoveringSchedule:
    """Times s_0 = 0, s_{j+1} = s_j + |x_0(s_j)| n^{-3/2}/4 up to T.

    |x_0(s)|² = |x(0)|² + 2s x(0)·v(0+) + s² on a unit-energy trajectory;
    ``radial_speed`` is x(0)·v(0+). j* counts the steps needed to pass T.
    """
    _require(n >= 2, f"n must be >= 2, got {n}")
    _require(x0_norm > 0.0, f"|x(0)| must be positive, got {x0_norm!r}")
    horizon = 18.0 * math.sqrt(n) * (n - 1) * x0_norm
    step = n**-1.5 / 4.0
    times: List[float] = [0.0]
    while times[-1] < horizon:
        s = times[-1]
        radius = math.sqrt(max(x0_norm * x0_norm + 2.0 * s * radial_speed + s * s, 0.0))
        times.append(s + radius * step)
    bound = 18.0 * n**1.5 * math.log(5 * n)
    return CoveringSchedule(tuple(times), len(times) - 1, bound)


def collision_budget(n: int, delta_observed: float) -> float:
    """log10 of the largest collision count compatible with the observed δ.

    Two balls collide at most once. δ_observed of inf (no other pair) is read
    as δ = 1, and a non-positive δ gives no bound.
    """
    _require(n >= 2, f"n must be >= 2, got {n}")
    if n == 2:
        return 0.0
    if delta_observed <= 0.0:
        return math.inf
    return thm_nf_bound(n, min(delta_observed, 1.0)).log10_value


TABLE_COLUMNS = [
    "n",
    "delta",
    "rho",
    "log10_bfk_radius",
    "log10_bfk_mass",
    "log10_phi_delta",
    "log10_phi_rho",
    "cubic_lower",
    "T",
    "T_star",
]


def bounds_table(n_values: Iterable[int], delta: float, rho: float, x0_norm: float = 1.0) -> pd.DataFrame:
    """One row per n of every closed-form quantity; T and T* at |x(0)| = ``x0_norm``."""
    rows = []
    for n in n_values:
        T, T_star = partition_times(n, x0_norm)
        rows.append(
            {
                "n": n,
                "delta": delta,
                "rho": rho,
                "log10_bfk_radius": bfk_radius_bound(n).log10_value,
                "log10_bfk_mass": bfk_mass_bound(n).log10_value,
                "log10_phi_delta": thm_nf_bound(n, delta).log10_value,
                "log10_phi_rho": _phi_log10(n, 38, math.log10(rho)),
                "cubic_lower": lower_bound_cubic(n),
                "T": T,
                "T_star": T_star,
            }
        )
    return pd.DataFrame(rows, columns=TABLE_COLUMNS)
