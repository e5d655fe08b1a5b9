"""Scheme selection and the archive-guided velocity update for regular particles.

The three schemes share one update rule and differ only in which archive
supplies the guide: the representative with the best fitness wins, with ties
resolved in favor of phi, then psi, then chi.  The update replaces the fixed
inertia weight with a fresh uniform draw per dimension.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .archives import ArchiveEntry


class Scheme(enum.Enum):
    """Which archive supplied the guide for a regular-particle update."""

    PHI = 1
    PSI = 2
    CHI = 3


@dataclass(eq=False)
class SchemeChoice:
    which: Scheme
    guide_position: np.ndarray


def select_scheme(rep_phi: ArchiveEntry, rep_psi: ArchiveEntry, rep_chi: ArchiveEntry) -> SchemeChoice:
    """Pick the scheme whose representative has the best fitness.

    Ties go to the earlier archive in the order phi > psi > chi.
    """
    reps = (rep_phi, rep_psi, rep_chi)
    fits = [rep.fitness for rep in reps]
    if not all(np.isfinite(fits)):
        raise ValueError("representative fitnesses must be finite")
    k = fits.index(min(fits))
    return SchemeChoice(which=list(Scheme)[k], guide_position=reps[k].position)


def regular_velocity_update(
    velocity: np.ndarray,
    position: np.ndarray,
    guide_position: np.ndarray,
    gbest_position: np.ndarray,
    v_max: float,
    rng: np.random.Generator,
    *,
    r1: np.ndarray | None = None,
    r2: np.ndarray | None = None,
    r3: np.ndarray | None = None,
) -> np.ndarray:
    """New velocity r1*v + r2*(guide - x) + r3*(gbest - x), clamped to +-v_max.

    The r vectors are fresh per-dimension uniform[0, 1] draws unless supplied
    explicitly (test hook; also used to pin r1 to a fixed inertia weight).
    Works on a single (d,) particle or a stacked (m, d) batch.
    """
    shape = np.shape(velocity)
    if r1 is None:
        r1 = rng.uniform(size=shape)
    if r2 is None:
        r2 = rng.uniform(size=shape)
    if r3 is None:
        r3 = rng.uniform(size=shape)
    velocity = r1 * velocity + r2 * (guide_position - position) + r3 * (gbest_position - position)
    return np.clip(velocity, -v_max, v_max)
