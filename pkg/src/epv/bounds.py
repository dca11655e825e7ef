"""Closed-form bounds on the energy per vertex of k-regular graphs."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import BadArgs, BadK
from .finitefield import is_prime_power, smallest_prime_power_at_least


def thm1_upper(k: int) -> float:
    """Maximum energy per vertex of a k-regular graph, attained by the
    incidence graphs of projective planes of order k - 1."""
    if k < 2:
        raise BadK(f"k must be >= 2, got {k}")
    return (k + (k * k - k) * math.sqrt(k - 1)) / (k * k - k + 1)


def cs_upper(k: int, m: int) -> float:
    """Cauchy-Schwarz bound for a connected k-regular bipartite graph on 2m vertices."""
    if not 1 <= k <= m:
        raise BadArgs(f"need 1 <= k <= m, got k={k}, m={m}")
    return k / m + math.sqrt((m - 1) * (m - k) * k) / m


def interlacing_lower(q: int, ell: int) -> float:
    """Lower bound for the pencil semiplane of order q with ell direction
    classes removed."""
    if is_prime_power(q) is None:
        raise BadArgs(f"{q} is not a prime power")
    if not 0 <= ell <= q - 2:
        raise BadArgs(f"ell must lie in [0, {q - 2}], got {ell}")
    num = 2 * q - ell + math.sqrt(q) * (q * q - 2 * q * ell + 2 * ell - q - 2)
    return num / ((q - 1) * (q + 1 - ell))


def thm2_lower(k: int) -> tuple[float, int, int]:
    """Energy per vertex guaranteed for some k-regular graph, with (q, ell)."""
    if k < 2:
        raise BadK(f"k must be >= 2, got {k}")
    q, ell = smallest_prime_power_at_least(k)
    num = 2 * k + ell + math.sqrt(k + ell) * (k * k - ell * ell + ell - k - 2)
    return num / ((k + 1) * (k + ell - 1)), q, ell


def corollary_floor(k: int) -> float:
    """sqrt(k) - k**(1/40); only meaningful for large k."""
    if k < 2:
        raise BadK(f"k must be >= 2, got {k}")
    return math.sqrt(k) - k ** (1 / 40)


def comparison_constants(k: int) -> dict[str, float]:
    if k < 1:
        raise BadK(f"k must be >= 1, got {k}")
    return {"km_nikiforov": math.sqrt(k / 2), "tree_limit": 4 / math.pi, "trivial_floor": 1.0}


@dataclass(frozen=True)
class BoundReport:
    k: int
    thm1_upper: float
    q: int
    ell: int
    thm2_lower: float
    corollary_floor: float
    cs_upper: float | None
    comparison: dict[str, float]
    notes: str


def bound_report(k: int, m: int | None = None) -> BoundReport:
    upper = thm1_upper(k)
    lower, q, ell = thm2_lower(k)
    notes = []
    floor = corollary_floor(k)
    if floor < 1:
        notes.append("corollary floor is asymptotic and vacuous here (below the trivial floor 1)")
    else:
        notes.append("corollary floor holds only for k large enough")
    if k == 2 or is_prime_power(k - 1):
        notes.append(f"upper bound attained by incidence graphs of projective planes of order {k - 1}")
    return BoundReport(
        k=k,
        thm1_upper=upper,
        q=q,
        ell=ell,
        thm2_lower=lower,
        corollary_floor=floor,
        cs_upper=cs_upper(k, m) if m is not None else None,
        comparison=comparison_constants(k),
        notes="; ".join(notes),
    )
