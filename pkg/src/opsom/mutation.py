"""Elite-position mutation: pull toward an archived personal best plus a
scaled difference of two random elite peers.

The j-th ranked elite moves toward the j-th entry of the phi archive, with
per-dimension uniform[0, 1] scaling of both terms.  Replacement is
unconditional; personal-best memory protects solution quality.  Velocities
are untouched.
"""

from __future__ import annotations

import numpy as np

from .objective import SearchBounds


def draw_partners(m: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """For each j in 0..m-1, draw a uniform pair (g, h) with j, g, h all distinct."""
    if m < 3:
        raise ValueError(f"need at least 3 elites to draw distinct partners, got {m}")
    j = np.arange(m)
    g = rng.integers(0, m - 1, size=m)
    g += g >= j
    lo = np.minimum(j, g)
    hi = np.maximum(j, g)
    h = rng.integers(0, m - 2, size=m)
    h += h >= lo
    h += h >= hi
    return g, h


def elite_mutate(
    j: int,
    phi_position: np.ndarray,
    elite_positions: np.ndarray,
    rng: np.random.Generator,
    bounds: SearchBounds,
    *,
    delta1: np.ndarray | None = None,
    delta2: np.ndarray | None = None,
    partners: tuple[int, int] | None = None,
) -> np.ndarray:
    """Mutated position for the j-th elite given the full elite snapshot.

    x' = x + delta1*(phi_j - x) + delta2*(x_g - x_h), clamped into the box.
    delta1/delta2/partners override the random draws (test hooks).
    """
    elite_positions = np.asarray(elite_positions, dtype=float)
    m, d = elite_positions.shape
    if m < 3:
        raise ValueError(f"elite subgroup must have at least 3 members, got {m}")
    if partners is None:
        pool = np.delete(np.arange(m), j)
        g, h = rng.choice(pool, size=2, replace=False)
    else:
        g, h = partners
        if g == h or g == j or h == j:
            raise ValueError("partners must be distinct from each other and from j")
    if delta1 is None:
        delta1 = rng.uniform(size=d)
    if delta2 is None:
        delta2 = rng.uniform(size=d)
    x = elite_positions[j]
    mutated = x + delta1 * (phi_position - x) + delta2 * (elite_positions[g] - elite_positions[h])
    return np.clip(mutated, bounds.lower, bounds.upper)


def mutate_elites(
    elite_positions: np.ndarray,
    phi_positions: np.ndarray,
    bounds: SearchBounds,
    rng: np.random.Generator,
    *,
    delta1: np.ndarray | None = None,
    delta2: np.ndarray | None = None,
    partners: tuple[np.ndarray, np.ndarray] | None = None,
) -> np.ndarray:
    """Vectorized mutation of the whole elite subgroup from one snapshot."""
    elite_positions = np.asarray(elite_positions, dtype=float)
    m, d = elite_positions.shape
    if partners is None:
        g, h = draw_partners(m, rng)
    else:
        g, h = partners
    if delta1 is None:
        delta1 = rng.uniform(size=(m, d))
    if delta2 is None:
        delta2 = rng.uniform(size=(m, d))
    mutated = (
        elite_positions
        + delta1 * (phi_positions - elite_positions)
        + delta2 * (elite_positions[g] - elite_positions[h])
    )
    return np.clip(mutated, bounds.lower, bounds.upper)
