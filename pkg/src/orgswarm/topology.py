"""Organizational communication designs as neighborhood structures.

Three designs constrain which "most fit" reference each agent can see:

* fully_networked -- one silo containing everyone; all agents share the same
  reference.
* siloed -- a fixed random balanced partition into disjoint silos; agents see
  only their own silo.
* dynamic -- siloed, but the partition is redrawn every ``reshuffle_interval``
  iterations.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ConfigError, InvalidParameterError, InvariantViolation


class DesignKind(str, Enum):
    FULLY_NETWORKED = "fully_networked"
    SILOED = "siloed"
    DYNAMIC = "dynamic"


@dataclass(frozen=True)
class OrgDesign:
    """Communication structure; ``silo_count``/``reshuffle_interval`` apply as noted."""

    kind: DesignKind
    silo_count: int = 1
    reshuffle_interval: int | None = None

    @classmethod
    def fully_networked(cls) -> "OrgDesign":
        return cls(DesignKind.FULLY_NETWORKED, silo_count=1)

    @classmethod
    def siloed(cls, silo_count: int = 5) -> "OrgDesign":
        return cls(DesignKind.SILOED, silo_count=silo_count)

    @classmethod
    def dynamic(cls, silo_count: int = 5, reshuffle_interval: int = 10) -> "OrgDesign":
        return cls(DesignKind.DYNAMIC, silo_count=silo_count,
                   reshuffle_interval=reshuffle_interval)

    def validate(self, agent_count: int) -> list[str]:
        """Return a list of offending field descriptions (empty when valid)."""
        problems = []
        if self.kind is DesignKind.FULLY_NETWORKED:
            if self.silo_count != 1:
                problems.append("silo_count (must be 1 for fully_networked)")
        else:
            if self.silo_count < 1 or self.silo_count > agent_count:
                problems.append(
                    f"silo_count (must be in [1, {agent_count}], got {self.silo_count})")
        if self.kind is DesignKind.DYNAMIC:
            if self.reshuffle_interval is None or self.reshuffle_interval < 1:
                problems.append(
                    f"reshuffle_interval (must be >= 1, got {self.reshuffle_interval})")
        return problems


@dataclass
class SiloAssignment:
    """Partition of agents into silos: ``silo_of[i]`` is agent i's silo index."""

    silo_of: np.ndarray
    silo_count: int

    def __post_init__(self):
        self.silo_of = np.asarray(self.silo_of, dtype=np.int64)
        sizes = self.sizes()
        if (sizes == 0).any():
            raise InvariantViolation("empty silo in assignment")
        if sizes.max() - sizes.min() > 1:
            raise InvariantViolation(f"unbalanced silo sizes {sizes.tolist()}")

    def sizes(self) -> np.ndarray:
        return np.bincount(self.silo_of, minlength=self.silo_count)

    def members(self) -> list[np.ndarray]:
        """Per-silo member index arrays, ascending within each silo."""
        return [np.flatnonzero(self.silo_of == s) for s in range(self.silo_count)]


def _balanced_sizes(agent_count: int, silo_count: int) -> np.ndarray:
    sizes = np.full(silo_count, agent_count // silo_count, dtype=np.int64)
    sizes[: agent_count % silo_count] += 1
    return sizes


def build_assignment(design: OrgDesign, agent_count: int,
                     rng: np.random.Generator) -> SiloAssignment:
    """Initial silo assignment for a design.

    Fully-networked puts everyone in silo 0 without consuming randomness;
    siloed/dynamic draw one random permutation and deal it into balanced
    silos, which makes the partition uniform over balanced partitions.
    """
    if agent_count < 1:
        raise InvalidParameterError(f"agent_count must be >= 1, got {agent_count}")
    if design.kind is DesignKind.FULLY_NETWORKED:
        return SiloAssignment(np.zeros(agent_count, dtype=np.int64), 1)
    if design.silo_count > agent_count:
        raise ConfigError(
            f"silo_count {design.silo_count} exceeds agent_count {agent_count}",
            fields=["silo_count"])
    return _random_partition(agent_count, design.silo_count, rng)


def _random_partition(agent_count: int, silo_count: int,
                      rng: np.random.Generator) -> SiloAssignment:
    sizes = _balanced_sizes(agent_count, silo_count)
    perm = rng.permutation(agent_count)
    silo_of = np.empty(agent_count, dtype=np.int64)
    offset = 0
    for silo, size in enumerate(sizes):
        silo_of[perm[offset:offset + size]] = silo
        offset += size
    return SiloAssignment(silo_of, silo_count)


def reshuffle(assignment: SiloAssignment, rng: np.random.Generator) -> SiloAssignment:
    """Redraw the partition with identical silo count and sizes."""
    return _random_partition(assignment.silo_of.size, assignment.silo_count, rng)


def silo_leaders(assignment: SiloAssignment, fitnesses: np.ndarray) -> np.ndarray:
    """Index of the fittest agent in each silo (ties -> lowest agent index)."""
    fitnesses = np.asarray(fitnesses)
    leaders = np.empty(assignment.silo_count, dtype=np.int64)
    for silo, members in enumerate(assignment.members()):
        if members.size == 0:
            raise InvariantViolation(f"silo {silo} is empty")
        leaders[silo] = members[np.argmin(fitnesses[members])]
    return leaders


def neighborhood_best(agent_index: int, assignment: SiloAssignment,
                      pbest_positions: np.ndarray,
                      pbest_fitnesses: np.ndarray) -> np.ndarray:
    """The reference position agent ``agent_index`` sees: the best personal
    best within its silo (ties broken toward the lowest agent index)."""
    leaders = silo_leaders(assignment, pbest_fitnesses)
    return np.asarray(pbest_positions)[leaders[assignment.silo_of[agent_index]]]


def neighborhood_best_all(assignment: SiloAssignment, pbest_positions: np.ndarray,
                          pbest_fitnesses: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized form: per-agent reference positions and their fitnesses."""
    leaders = silo_leaders(assignment, pbest_fitnesses)
    leader_of_agent = leaders[assignment.silo_of]
    pbest_positions = np.asarray(pbest_positions)
    pbest_fitnesses = np.asarray(pbest_fitnesses)
    return pbest_positions[leader_of_agent], pbest_fitnesses[leader_of_agent]
