"""The three bounded archives feeding the regular-subgroup learning schemes.

phi holds the personal bests of the half of the swarm with the best personal
bests, rebuilt from scratch every iteration.  psi collects personal bests that
strictly improved, chi collects global bests that strictly improved; both are
capped at the population size, evicting a uniformly random entry other than
the newest when full, so the latest global best is never lost from chi.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .swarm_core import SwarmState


@dataclass(eq=False)
class ArchiveEntry:
    """A stored (position, fitness) pair; the fitness is never re-evaluated."""

    position: np.ndarray
    fitness: float


class ArchiveSet:
    """The three archives for a swarm of a fixed even size."""

    def __init__(self, population_size: int):
        if population_size < 2 or population_size % 2:
            raise ValueError(f"population size must be even and >= 2, got {population_size}")
        self.phi_capacity = population_size // 2
        self.psi_capacity = population_size
        self.chi_capacity = population_size
        # phi is kept as arrays (it is rebuilt wholesale every iteration and
        # indexed by rank in the hot loop); psi/chi are event-driven lists
        self.phi_positions = np.empty((0, 0))
        self.phi_fitness = np.empty(0)
        self.psi: list[ArchiveEntry] = []
        self.chi: list[ArchiveEntry] = []

    @property
    def phi(self) -> list[ArchiveEntry]:
        return [
            ArchiveEntry(self.phi_positions[i].copy(), float(self.phi_fitness[i]))
            for i in range(len(self.phi_fitness))
        ]


def refresh_phi(archives: ArchiveSet, state: SwarmState) -> ArchiveSet:
    """Rebuild phi as the personal bests of the top half by personal-best fitness.

    Entries are stored in ascending fitness order (ties toward the lower
    particle index), so phi[j] pairs with the j-th ranked elite particle.
    """
    order = np.argsort(state.pbest_fitness, kind="stable")[: archives.phi_capacity]
    archives.phi_positions = state.pbest_positions[order].copy()
    archives.phi_fitness = state.pbest_fitness[order].copy()
    return archives


def _push(entries: list[ArchiveEntry], entry: ArchiveEntry, capacity: int, rng: np.random.Generator) -> None:
    entries.append(entry)
    while len(entries) > capacity:
        # evict uniformly at random among everything but the newest entry
        entries.pop(int(rng.integers(0, len(entries) - 1)))


def push_psi(archives: ArchiveSet, entry: ArchiveEntry, rng: np.random.Generator) -> ArchiveSet:
    """Record a personal best that strictly improved this iteration."""
    _push(archives.psi, entry, archives.psi_capacity, rng)
    return archives


def push_chi(archives: ArchiveSet, entry: ArchiveEntry, rng: np.random.Generator) -> ArchiveSet:
    """Record a global best that strictly improved this iteration."""
    _push(archives.chi, entry, archives.chi_capacity, rng)
    return archives


def sample_representatives(
    archives: ArchiveSet, rng: np.random.Generator
) -> tuple[ArchiveEntry, ArchiveEntry, ArchiveEntry]:
    """Draw one uniformly random entry from each archive, independently."""
    if len(archives.phi_fitness) == 0 or not archives.psi or not archives.chi:
        raise LookupError("cannot sample representatives from an empty archive")
    p = int(rng.integers(0, len(archives.phi_fitness)))
    q = int(rng.integers(0, len(archives.psi)))
    s = int(rng.integers(0, len(archives.chi)))
    rep_phi = ArchiveEntry(archives.phi_positions[p].copy(), float(archives.phi_fitness[p]))
    return rep_phi, archives.psi[q], archives.chi[s]
