"""Replicate engine: initialization, the synchronous iteration loop, results.

One replicate owns a single random stream derived from
``(master_seed, replicate_index)`` by SplitMix64 (see
:func:`derive_replicate_seed`) and feeds it to a Philox counter-based bit
generator. Draw order is fixed so identical configurations reproduce
bit-for-bit on any host:

* init: goal bits, then all agent positions as one (N, D) block, then the
  inertia / self-belief / prestige-bias vectors, then the silo permutation
  (siloed/dynamic only);
* each iteration: the reshuffle permutation when due, then (with
  ``stochastic_acceleration``) the two (N, D) acceleration multipliers, then
  the (N, D) binarization uniforms, row-major (agent-major, dimension order).

Iteration ``t=0`` is the evaluation of the initial positions; steps run at
``t = 1..max_iterations`` and stop early once every agent has hit the goal
at least once (group convergence).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, InvalidParameterError, InvariantViolation
from .kinematics import CoefficientTriple, clamp_velocity, sigmoid, update_velocity
from .policies import PolicyState, Tendency, perceptive_shift, reactive_shift
from .strategy import BIT_DTYPE, fitness_many, random_position, random_positions
from .topology import (DesignKind, OrgDesign, SiloAssignment, build_assignment,
                       reshuffle, silo_leaders)

_MASK64 = 0xFFFFFFFFFFFFFFFF

GBEST_MODES = ("historical", "instantaneous")
BINARIZATIONS = ("sigmoid-stochastic",)


def derive_replicate_seed(master_seed: int, replicate_index: int) -> int:
    """SplitMix64 output at counter ``replicate_index``, keyed by the master seed.

    This is the stated counter-based stream split: replicate streams are
    disjoint Philox keys, independent of scheduling or worker count.
    """
    z = (master_seed + (replicate_index + 1) * 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def replicate_rng(master_seed: int, replicate_index: int) -> np.random.Generator:
    return np.random.Generator(
        np.random.Philox(key=derive_replicate_seed(master_seed, replicate_index)))


@dataclass
class SimConfig:
    """Full parameterization of one experimental arm."""

    master_seed: int
    design: OrgDesign
    tendency: Tendency
    dim: int = 25
    agents: int = 20
    max_iterations: int = 1000
    replicates: int = 200
    v_max: float = 4.0
    delta: float = 0.1
    alpha: float = 0.1
    pressure_horizon: int | None = None
    coeff_min: float = 0.0
    coeff_max: float = 2.0
    inertia_init: tuple[float, float] = (0.9, 0.95)
    self_belief_init: tuple[float, float] = (0.5, 1.5)
    prestige_bias_init: tuple[float, float] = (1.5, 2.0)
    gbest_mode: str = "historical"
    stochastic_acceleration: bool = False
    binarization: str = "sigmoid-stochastic"
    freeze_on_goal: bool = False

    def __post_init__(self):
        if self.pressure_horizon is None:
            self.pressure_horizon = max(1, self.max_iterations // 4)

    def validate(self) -> None:
        """Raise :class:`ConfigError` naming every offending field."""
        bad: list[str] = []
        if not isinstance(self.master_seed, int) or not (0 <= self.master_seed < 2 ** 64):
            bad.append(f"master_seed (u64 required, got {self.master_seed})")
        for name, lo in (("dim", 1), ("agents", 1), ("max_iterations", 1),
                         ("replicates", 1), ("pressure_horizon", 1)):
            v = getattr(self, name)
            if not isinstance(v, int) or v < lo:
                bad.append(f"{name} (integer >= {lo} required, got {v})")
        if not (np.isfinite(self.v_max) and self.v_max > 0):
            bad.append(f"v_max (positive real required, got {self.v_max})")
        if not (np.isfinite(self.delta) and self.delta > 0):
            bad.append(f"delta (positive real required, got {self.delta})")
        if not (np.isfinite(self.alpha) and 0 < self.alpha <= 1):
            bad.append(f"alpha (in (0, 1] required, got {self.alpha})")
        if not (np.isfinite(self.coeff_min) and np.isfinite(self.coeff_max)
                and self.coeff_min <= self.coeff_max):
            bad.append(f"coeff bounds (min <= max required, got "
                       f"[{self.coeff_min}, {self.coeff_max}])")
        else:
            for name in ("inertia_init", "self_belief_init", "prestige_bias_init"):
                rng_pair = getattr(self, name)
                try:
                    lo, hi = float(rng_pair[0]), float(rng_pair[1])
                except (TypeError, ValueError, IndexError):
                    bad.append(f"{name} (pair of reals required, got {rng_pair})")
                    continue
                if not (np.isfinite(lo) and np.isfinite(hi) and lo <= hi
                        and self.coeff_min <= lo and hi <= self.coeff_max):
                    bad.append(f"{name} (range within [{self.coeff_min}, "
                               f"{self.coeff_max}] required, got [{lo}, {hi}])")
        if not isinstance(self.design, OrgDesign):
            bad.append(f"design (OrgDesign required, got {self.design!r})")
        elif isinstance(self.agents, int) and self.agents >= 1:
            bad.extend(self.design.validate(self.agents))
        if not isinstance(self.tendency, Tendency):
            bad.append(f"tendency (reactive|perceptive required, got {self.tendency!r})")
        if self.gbest_mode not in GBEST_MODES:
            bad.append(f"gbest_mode (one of {GBEST_MODES}, got {self.gbest_mode!r})")
        if self.binarization not in BINARIZATIONS:
            bad.append(f"binarization (one of {BINARIZATIONS}, got {self.binarization!r})")
        if bad:
            raise ConfigError("invalid config: " + "; ".join(bad), fields=bad)


@dataclass
class Agent:
    """Snapshot view of one agent's state (for inspection and tests)."""

    index: int
    position: np.ndarray
    velocity: np.ndarray
    pbest_position: np.ndarray
    pbest_fitness: int
    coeffs: CoefficientTriple
    policy: PolicyState


@dataclass
class SwarmState:
    """Mutable whole-swarm state for one replicate (struct-of-arrays)."""

    config: SimConfig
    rng: np.random.Generator
    goal: np.ndarray
    positions: np.ndarray          # (N, D) bits
    velocities: np.ndarray         # (N, D) float
    pbest_positions: np.ndarray    # (N, D) bits
    pbest_fitness: np.ndarray      # (N,) int
    fitness: np.ndarray            # (N,) int, current positions
    inertia: np.ndarray            # (N,) float, never adapted
    self_belief: np.ndarray        # (N,) float
    prestige_bias: np.ndarray      # (N,) float
    feedback_ema: np.ndarray       # (N,) float
    last_fitness: np.ndarray       # (N,) int
    assignment: SiloAssignment
    first_hit: np.ndarray          # (N,) int, -1 = never
    t: int = 0
    group_convergence: int | None = None
    trace_best: list = field(default_factory=list)
    trace_mean: list = field(default_factory=list)
    full_rows: list | None = None
    _members: list = field(default_factory=list)

    def agent(self, i: int) -> Agent:
        return Agent(
            index=i,
            position=self.positions[i].copy(),
            velocity=self.velocities[i].copy(),
            pbest_position=self.pbest_positions[i].copy(),
            pbest_fitness=int(self.pbest_fitness[i]),
            coeffs=CoefficientTriple(float(self.inertia[i]),
                                     float(self.self_belief[i]),
                                     float(self.prestige_bias[i])),
            policy=PolicyState(tendency=self.config.tendency,
                               last_fitness=int(self.last_fitness[i]),
                               pressure_horizon=self.config.pressure_horizon,
                               feedback_ema=float(self.feedback_ema[i])),
        )

    def _record_full_row(self):
        self.full_rows.append((
            self.t,
            self.fitness.copy(),
            self.assignment.silo_of.copy(),
            self.self_belief.copy(),
            self.prestige_bias.copy(),
        ))


@dataclass
class ReplicateResult:
    """Everything measured in one replicate."""

    replicate_index: int
    seed: int
    goal: np.ndarray
    first_hit: np.ndarray              # (N,), -1 = never
    group_convergence: int | None
    first_any_hit: int | None
    iterations_run: int
    max_iterations: int
    initial_best: int
    initial_mean: float
    trace_best: np.ndarray             # (iterations_run,), t = 1..iterations_run
    trace_mean: np.ndarray
    final_best_fitness: int            # min pbest fitness at termination
    full_trace: dict | None = None

    @property
    def success(self) -> bool:
        return self.group_convergence is not None


def init_swarm(config: SimConfig, rng: np.random.Generator,
               collect_full_trace: bool = False) -> SwarmState:
    """Build the initial swarm state; evaluates iteration t=0.

    Velocities start at zero, personal bests at the initial positions.
    """
    config.validate()
    goal = random_position(config.dim, rng)
    positions = random_positions(config.agents, config.dim, rng)
    inertia = rng.uniform(*config.inertia_init, config.agents)
    self_belief = rng.uniform(*config.self_belief_init, config.agents)
    prestige_bias = rng.uniform(*config.prestige_bias_init, config.agents)
    assignment = build_assignment(config.design, config.agents, rng)
    fit = fitness_many(positions, goal)
    first_hit = np.where(fit == 0, 0, -1).astype(np.int64)
    state = SwarmState(
        config=config,
        rng=rng,
        goal=goal,
        positions=positions,
        velocities=np.zeros((config.agents, config.dim)),
        pbest_positions=positions.copy(),
        pbest_fitness=fit.copy(),
        fitness=fit,
        inertia=inertia,
        self_belief=self_belief,
        prestige_bias=prestige_bias,
        feedback_ema=np.zeros(config.agents),
        last_fitness=fit.copy(),
        assignment=assignment,
        first_hit=first_hit,
    )
    state._members = assignment.members()
    if (first_hit >= 0).all():
        state.group_convergence = 0
    if collect_full_trace:
        state.full_rows = []
        state._record_full_row()
    return state


def step(state: SwarmState, t: int) -> SwarmState:
    """Advance the swarm by one synchronous iteration.

    Order: reshuffle when due -> neighborhood bests from the previous
    iteration's memory -> velocity update, clamp, stochastic binarization ->
    evaluation -> personal-best update (strict improvement) -> policy update
    -> bookkeeping. Mutates and returns ``state``.
    """
    cfg = state.config
    if t != state.t + 1:
        raise InvalidParameterError(f"expected iteration {state.t + 1}, got {t}")

    design = cfg.design
    if (design.kind is DesignKind.DYNAMIC and design.reshuffle_interval
            and t % design.reshuffle_interval == 0):
        state.assignment = reshuffle(state.assignment, state.rng)
        state._members = state.assignment.members()

    if cfg.gbest_mode == "historical":
        ref_fit, ref_pos = state.pbest_fitness, state.pbest_positions
    else:
        ref_fit, ref_pos = state.fitness, state.positions
    leaders = np.empty(state.assignment.silo_count, dtype=np.int64)
    for silo, members in enumerate(state._members):
        leaders[silo] = members[np.argmin(ref_fit[members])]
    gbest = ref_pos[leaders[state.assignment.silo_of]]

    c1 = state.self_belief[:, None]
    c2 = state.prestige_bias[:, None]
    if cfg.stochastic_acceleration:
        c1 = c1 * state.rng.random(state.positions.shape)
        c2 = c2 * state.rng.random(state.positions.shape)
    vel = update_velocity(state.velocities, state.positions,
                          state.pbest_positions, gbest,
                          state.inertia[:, None], c1, c2)
    vel = clamp_velocity(vel, cfg.v_max)
    draws = state.rng.random(state.positions.shape)
    new_pos = (draws < sigmoid(vel)).astype(BIT_DTYPE)

    if cfg.freeze_on_goal:
        frozen = state.first_hit >= 0
        new_pos[frozen] = state.positions[frozen]
        vel[frozen] = state.velocities[frozen]

    state.velocities = vel
    state.positions = new_pos
    fit = fitness_many(new_pos, state.goal)
    state.fitness = fit

    improved = fit < state.pbest_fitness
    state.pbest_positions[improved] = new_pos[improved]
    state.pbest_fitness[improved] = fit[improved]

    signal = state.last_fitness - fit
    lo, hi = cfg.coeff_min, cfg.coeff_max
    if cfg.freeze_on_goal:
        live = state.first_hit < 0
    else:
        live = slice(None)
    if cfg.tendency is Tendency.REACTIVE:
        c1n, c2n = reactive_shift(state.self_belief[live], state.prestige_bias[live],
                                  signal[live], cfg.delta, lo, hi)
        state.self_belief[live] = c1n
        state.prestige_bias[live] = c2n
    else:
        ema, c1n, c2n = perceptive_shift(
            state.feedback_ema[live], state.self_belief[live],
            state.prestige_bias[live], signal[live], t,
            cfg.pressure_horizon, cfg.alpha, cfg.delta, lo, hi)
        state.feedback_ema[live] = ema
        state.self_belief[live] = c1n
        state.prestige_bias[live] = c2n
    state.last_fitness = fit

    newly = (state.first_hit < 0) & (fit == 0)
    state.first_hit[newly] = t
    state.t = t
    state.trace_best.append(int(fit.min()))
    state.trace_mean.append(float(fit.mean()))
    if state.group_convergence is None and (state.first_hit >= 0).all():
        state.group_convergence = t
    if state.full_rows is not None:
        state._record_full_row()
    return state


def run_replicate(config: SimConfig, replicate_index: int,
                  trace_level: str = "group") -> ReplicateResult:
    """Run one seeded replicate to group convergence or the iteration budget."""
    if trace_level not in ("none", "group", "full"):
        raise InvalidParameterError(f"trace_level must be none|group|full, got {trace_level}")
    seed = derive_replicate_seed(config.master_seed, replicate_index)
    rng = np.random.Generator(np.random.Philox(key=seed))
    state = init_swarm(config, rng, collect_full_trace=(trace_level == "full"))
    initial_best = int(state.fitness.min())
    initial_mean = float(state.fitness.mean())
    while state.group_convergence is None and state.t < config.max_iterations:
        try:
            step(state, state.t + 1)
        except InvariantViolation as e:
            raise InvariantViolation(f"iteration {state.t + 1}: {e}") from e

    hits = state.first_hit[state.first_hit >= 0]
    full = None
    if state.full_rows is not None:
        full = {
            "iteration": np.array([r[0] for r in state.full_rows], dtype=np.int64),
            "fitness": np.stack([r[1] for r in state.full_rows]),
            "silo": np.stack([r[2] for r in state.full_rows]),
            "inertia": np.broadcast_to(state.inertia,
                                       (len(state.full_rows), config.agents)).copy(),
            "self_belief": np.stack([r[3] for r in state.full_rows]),
            "prestige_bias": np.stack([r[4] for r in state.full_rows]),
        }
    return ReplicateResult(
        replicate_index=replicate_index,
        seed=seed,
        goal=state.goal,
        first_hit=state.first_hit.copy(),
        group_convergence=state.group_convergence,
        first_any_hit=int(hits.min()) if hits.size else None,
        iterations_run=state.t,
        max_iterations=config.max_iterations,
        initial_best=initial_best,
        initial_mean=initial_mean,
        trace_best=np.asarray(state.trace_best, dtype=np.int64),
        trace_mean=np.asarray(state.trace_mean, dtype=float),
        final_best_fitness=int(state.pbest_fitness.min()),
        full_trace=full,
    )
