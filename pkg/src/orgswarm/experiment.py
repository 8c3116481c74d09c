"""Experiment grid: JSON config parsing, parallel replication, CSV outputs.

A config is a single strict JSON document (unknown keys are rejected). Only
``master_seed`` is required; everything else defaults. Without an ``arms``
list the standard 3 designs x 2 tendencies grid is expanded.

Outputs (all floats printed with 6 significant digits, rows fully sorted, so
identical specs produce byte-identical files regardless of worker count):

* ``summary.csv``   one row per replicate
* ``arms.csv``      one row per arm
* ``comparisons.csv`` one row per unordered arm pair
* ``curves/<arm>.csv`` per-iteration convergence curves (trace group|full)
* ``traces/<arm>/replicate_<i>.csv`` per-agent traces (trace full)
"""

from __future__ import annotations

import itertools
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .engine import (BINARIZATIONS, GBEST_MODES, ReplicateResult, SimConfig,
                     run_replicate)
from .errors import ConfigError, InvariantViolation
from .policies import Tendency
from .stats import (ArmComparison, ArmSummary, aggregate_arm, censored_values,
                    compare_arms, convergence_values)
from .strategy import to_bitstring
from .topology import DesignKind, OrgDesign

TRACE_LEVELS = ("none", "group", "full")

_GLOBAL_DEFAULTS = {
    "dim": 25,
    "agents": 20,
    "max_iterations": 1000,
    "replicates": 200,
    "v_max": 4.0,
    "delta": 0.1,
    "alpha": 0.1,
    "silo_count": 5,
    "reshuffle_interval": 10,
    "pressure_horizon": None,
    "coeff_min": 0.0,
    "coeff_max": 2.0,
    "inertia_init": (0.9, 0.95),
    "self_belief_init": (0.5, 1.5),
    "prestige_bias_init": (1.5, 2.0),
    "gbest_mode": "historical",
    "stochastic_acceleration": False,
    "binarization": "sigmoid-stochastic",
    "freeze_on_goal": False,
}

_TOP_LEVEL_KEYS = set(_GLOBAL_DEFAULTS) | {"master_seed", "out_dir", "trace",
                                           "workers", "arms"}
_ARM_KEYS = set(_GLOBAL_DEFAULTS) | {"design", "tendency", "label"}


@dataclass
class Arm:
    label: str
    config: SimConfig


@dataclass
class ExperimentSpec:
    arms: list[Arm]
    out_dir: str = "results"
    trace: str = "group"
    workers: int | None = None


def _design_from(params: dict) -> OrgDesign:
    kind = params["design"]
    try:
        kind = DesignKind(kind)
    except ValueError:
        raise ConfigError(
            f"design must be one of {[k.value for k in DesignKind]}, got {kind!r}",
            fields=["design"]) from None
    if kind is DesignKind.FULLY_NETWORKED:
        return OrgDesign.fully_networked()
    if kind is DesignKind.SILOED:
        return OrgDesign.siloed(params["silo_count"])
    return OrgDesign.dynamic(params["silo_count"], params["reshuffle_interval"])


def _tendency_from(value) -> Tendency:
    try:
        return Tendency(value)
    except ValueError:
        raise ConfigError(
            f"tendency must be one of {[t.value for t in Tendency]}, got {value!r}",
            fields=["tendency"]) from None


def _pairify(value, field_name: str) -> tuple[float, float]:
    try:
        lo, hi = value
        return (float(lo), float(hi))
    except (TypeError, ValueError):
        raise ConfigError(f"{field_name} must be a [low, high] pair, got {value!r}",
                          fields=[field_name]) from None


def parse_config_dict(data: dict) -> ExperimentSpec:
    """Build and validate an :class:`ExperimentSpec` from a config mapping."""
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    unknown = sorted(set(data) - _TOP_LEVEL_KEYS)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}", fields=unknown)
    if "master_seed" not in data:
        raise ConfigError("missing required field master_seed", fields=["master_seed"])

    base = dict(_GLOBAL_DEFAULTS)
    for key in _GLOBAL_DEFAULTS:
        if key in data:
            base[key] = data[key]
    master_seed = data["master_seed"]

    trace = data.get("trace", "group")
    if trace not in TRACE_LEVELS:
        raise ConfigError(f"trace must be one of {TRACE_LEVELS}, got {trace!r}",
                          fields=["trace"])
    workers = data.get("workers")
    if workers is not None and (not isinstance(workers, int) or workers < 1):
        raise ConfigError(f"workers must be a positive integer or null, got {workers!r}",
                          fields=["workers"])
    out_dir = data.get("out_dir", "results")
    if not isinstance(out_dir, str) or not out_dir:
        raise ConfigError(f"out_dir must be a non-empty string, got {out_dir!r}",
                          fields=["out_dir"])

    arm_entries = data.get("arms")
    if arm_entries is None:
        arm_entries = [{"design": design.value, "tendency": tendency.value}
                       for design in (DesignKind.DYNAMIC, DesignKind.FULLY_NETWORKED,
                                      DesignKind.SILOED)
                       for tendency in (Tendency.PERCEPTIVE, Tendency.REACTIVE)]
    if not isinstance(arm_entries, list) or not arm_entries:
        raise ConfigError("arms must be a non-empty list", fields=["arms"])

    arms: list[Arm] = []
    for i, entry in enumerate(arm_entries):
        if not isinstance(entry, dict):
            raise ConfigError(f"arm {i} must be an object", fields=["arms"])
        unknown = sorted(set(entry) - _ARM_KEYS)
        if unknown:
            raise ConfigError(f"arm {i}: unknown keys: {', '.join(unknown)}",
                              fields=unknown)
        for required in ("design", "tendency"):
            if required not in entry:
                raise ConfigError(f"arm {i}: missing {required}", fields=[required])
        params = dict(base)
        params.update({k: v for k, v in entry.items() if k in _GLOBAL_DEFAULTS})
        params["design"] = entry["design"]
        design = _design_from(params)
        tendency = _tendency_from(entry["tendency"])
        label = entry.get("label", f"{design.kind.value}+{tendency.value}")
        config = SimConfig(
            master_seed=master_seed,
            design=design,
            tendency=tendency,
            dim=params["dim"],
            agents=params["agents"],
            max_iterations=params["max_iterations"],
            replicates=params["replicates"],
            v_max=params["v_max"],
            delta=params["delta"],
            alpha=params["alpha"],
            pressure_horizon=params["pressure_horizon"],
            coeff_min=params["coeff_min"],
            coeff_max=params["coeff_max"],
            inertia_init=_pairify(params["inertia_init"], "inertia_init"),
            self_belief_init=_pairify(params["self_belief_init"], "self_belief_init"),
            prestige_bias_init=_pairify(params["prestige_bias_init"], "prestige_bias_init"),
            gbest_mode=params["gbest_mode"],
            stochastic_acceleration=params["stochastic_acceleration"],
            binarization=params["binarization"],
            freeze_on_goal=params["freeze_on_goal"],
        )
        config.validate()
        arms.append(Arm(label=label, config=config))

    labels = [arm.label for arm in arms]
    if len(set(labels)) != len(labels):
        dupes = sorted({l for l in labels if labels.count(l) > 1})
        raise ConfigError(f"duplicate arm labels: {', '.join(dupes)}", fields=["arms"])
    arms.sort(key=lambda arm: arm.label)
    return ExperimentSpec(arms=arms, out_dir=out_dir, trace=trace, workers=workers)


def parse_config(path) -> ExperimentSpec:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as e:
            raise ConfigError(f"config is not valid JSON: {e}") from None
    return parse_config_dict(data)


def serialize_spec(spec: ExperimentSpec) -> dict:
    """Canonical, fully resolved config mapping (round-trips through parsing)."""
    arms = []
    for arm in spec.arms:
        c = arm.config
        entry = {
            "label": arm.label,
            "design": c.design.kind.value,
            "tendency": c.tendency.value,
            "dim": c.dim,
            "agents": c.agents,
            "max_iterations": c.max_iterations,
            "replicates": c.replicates,
            "v_max": c.v_max,
            "delta": c.delta,
            "alpha": c.alpha,
            "pressure_horizon": c.pressure_horizon,
            "coeff_min": c.coeff_min,
            "coeff_max": c.coeff_max,
            "inertia_init": list(c.inertia_init),
            "self_belief_init": list(c.self_belief_init),
            "prestige_bias_init": list(c.prestige_bias_init),
            "gbest_mode": c.gbest_mode,
            "stochastic_acceleration": c.stochastic_acceleration,
            "binarization": c.binarization,
            "freeze_on_goal": c.freeze_on_goal,
        }
        if c.design.kind is not DesignKind.FULLY_NETWORKED:
            entry["silo_count"] = c.design.silo_count
        if c.design.kind is DesignKind.DYNAMIC:
            entry["reshuffle_interval"] = c.design.reshuffle_interval
        arms.append(entry)
    return {
        "master_seed": spec.arms[0].config.master_seed,
        "out_dir": spec.out_dir,
        "trace": spec.trace,
        "workers": spec.workers,
        "arms": arms,
    }


def _run_block(config: SimConfig, indices: list[int], trace_level: str
               ) -> list[ReplicateResult]:
    out = []
    for i in indices:
        try:
            out.append(run_replicate(config, i, trace_level))
        except InvariantViolation as e:
            raise InvariantViolation(f"replicate {i}: {e}") from e
    return out


def _fmt(value) -> str:
    """CSV cell formatting: 6 significant digits, empty cell for missing."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    v = float(value)
    if math.isnan(v):
        return "nan"
    return f"{v:.6g}"


@dataclass
class ExperimentOutput:
    spec: ExperimentSpec
    results: dict[str, list[ReplicateResult]]
    summaries: list[ArmSummary]
    comparisons: list[tuple[str, str, ArmComparison, float]]
    out_dir: Path


def run_experiment(spec: ExperimentSpec, out_dir=None) -> ExperimentOutput:
    """Run every arm x replicate, aggregate, and write all output files.

    Results are identical regardless of worker count: each replicate's stream
    depends only on (master_seed, replicate index), and every output row is
    sorted before writing.
    """
    out = Path(out_dir) if out_dir is not None else Path(spec.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    workers = spec.workers or os.cpu_count() or 1
    trace_level = spec.trace

    results: dict[str, list[ReplicateResult]] = {}
    if workers == 1:
        for arm in spec.arms:
            arm_results = _run_block(arm.config, list(range(arm.config.replicates)),
                                     trace_level)
            results[arm.label] = _collect(arm, arm_results, trace_level, out)
    else:
        chunk = 25
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = {}
            for arm in spec.arms:
                indices = list(range(arm.config.replicates))
                futures[arm.label] = [
                    pool.submit(_run_block, arm.config, indices[i:i + chunk], trace_level)
                    for i in range(0, len(indices), chunk)]
            for arm in spec.arms:
                arm_results = [r for f in futures[arm.label] for r in f.result()]
                results[arm.label] = _collect(arm, arm_results, trace_level, out)

    summaries = [aggregate_arm(results[arm.label], arm.label) for arm in spec.arms]
    comparisons = []
    for sa, sb in itertools.combinations(sorted(s.label for s in summaries), 2):
        comparisons.append((sa, sb, *_compare_pair(results[sa], results[sb])))

    _write_summary(out / "summary.csv", spec, results)
    _write_arms(out / "arms.csv", summaries)
    _write_comparisons(out / "comparisons.csv", comparisons)
    _write_goals(out / "goals.csv", spec, results)
    if trace_level != "none":
        _write_curves(out / "curves", summaries)
    return ExperimentOutput(spec, results, summaries, comparisons, out)


def _collect(arm: Arm, arm_results: list[ReplicateResult], trace_level: str,
             out: Path) -> list[ReplicateResult]:
    arm_results.sort(key=lambda r: r.replicate_index)
    if trace_level == "full":
        trace_dir = out / "traces" / arm.label
        trace_dir.mkdir(parents=True, exist_ok=True)
        for r in arm_results:
            _write_full_trace(trace_dir / f"replicate_{r.replicate_index}.csv", r)
            r.full_trace = None
    return arm_results


def _compare_pair(results_a, results_b) -> tuple[ArmComparison | None, float]:
    conv_a, conv_b = convergence_values(results_a), convergence_values(results_b)
    cens_a, cens_b = censored_values(results_a), censored_values(results_b)
    med_cb = float(np.median(cens_b))
    censored_ratio = float(np.median(cens_a)) / med_cb if med_cb else float("nan")
    if not conv_a or not conv_b:
        return None, censored_ratio
    return compare_arms(conv_a, conv_b), censored_ratio


def _write_rows(path: Path, header: str, rows: list[str]) -> None:
    path.write_text("\n".join([header] + rows) + "\n", encoding="utf-8")


def _write_summary(path: Path, spec: ExperimentSpec,
                   results: dict[str, list[ReplicateResult]]) -> None:
    rows = []
    for arm in spec.arms:
        for r in results[arm.label]:
            rows.append(",".join([
                arm.label,
                _fmt(r.replicate_index),
                _fmt(r.seed),
                _fmt(r.group_convergence),
                _fmt(r.first_any_hit),
                _fmt(r.success),
                _fmt(r.final_best_fitness),
            ]))
    _write_rows(path, "arm,replicate,seed,group_convergence,first_any_hit,"
                      "success,final_best_fitness", rows)


def _write_arms(path: Path, summaries: list[ArmSummary]) -> None:
    rows = []
    for s in sorted(summaries, key=lambda s: s.label):
        rows.append(",".join([
            s.label, _fmt(s.n), _fmt(s.success_rate),
            _fmt(s.median_group_convergence), _fmt(s.mean_group_convergence),
            _fmt(s.iqr_low), _fmt(s.iqr_high), _fmt(s.median_first_any_hit),
        ]))
    _write_rows(path, "arm,n,success_rate,median_group_convergence,"
                      "mean_group_convergence,iqr_low,iqr_high,median_first_any_hit",
                rows)


def _write_comparisons(path: Path, comparisons) -> None:
    rows = []
    for arm_a, arm_b, cmp_result, censored_ratio in comparisons:
        if cmp_result is None:
            rows.append(f"{arm_a},{arm_b},,,,{_fmt(censored_ratio)}")
        else:
            rows.append(",".join([
                arm_a, arm_b, _fmt(cmp_result.median_ratio),
                _fmt(cmp_result.u_statistic), _fmt(cmp_result.p_value),
                _fmt(censored_ratio),
            ]))
    _write_rows(path, "arm_a,arm_b,median_ratio,u_statistic,p_value,"
                      "censored_median_ratio", rows)


def _write_goals(path: Path, spec: ExperimentSpec,
                 results: dict[str, list[ReplicateResult]]) -> None:
    """Record each replicate's goal bitstring for reproducibility."""
    rows = [f"{arm.label},{r.replicate_index},{to_bitstring(r.goal)}"
            for arm in spec.arms for r in results[arm.label]]
    _write_rows(path, "arm,replicate,goal", rows)


def _write_curves(curve_dir: Path, summaries: list[ArmSummary]) -> None:
    curve_dir.mkdir(parents=True, exist_ok=True)
    for s in summaries:
        rows = [f"{t + 1},{_fmt(s.curve_best[t])},{_fmt(s.curve_mean[t])}"
                for t in range(s.curve_best.size)]
        _write_rows(curve_dir / f"{s.label}.csv",
                    "iteration,mean_best_fitness,mean_mean_fitness", rows)


def _write_full_trace(path: Path, r: ReplicateResult) -> None:
    ft = r.full_trace
    n_agents = ft["fitness"].shape[1]
    header = ["iteration", "best_fitness", "mean_fitness"]
    header += [f"fitness_of_agent_{i}" for i in range(n_agents)]
    header += [f"silo_of_agent_{i}" for i in range(n_agents)]
    header += [f"W_{i}" for i in range(n_agents)]
    header += [f"C1_{i}" for i in range(n_agents)]
    header += [f"C2_{i}" for i in range(n_agents)]
    rows = [f"# goal={to_bitstring(r.goal)}", ",".join(header)]
    for k, t in enumerate(ft["iteration"]):
        fit_row = ft["fitness"][k]
        cells = [str(int(t)), _fmt(int(fit_row.min())), _fmt(float(fit_row.mean()))]
        cells += [str(int(v)) for v in fit_row]
        cells += [str(int(v)) for v in ft["silo"][k]]
        cells += [_fmt(v) for v in ft["inertia"][k]]
        cells += [_fmt(v) for v in ft["self_belief"][k]]
        cells += [_fmt(v) for v in ft["prestige_bias"][k]]
        rows.append(",".join(cells))
    path.write_text("\n".join(rows) + "\n", encoding="utf-8")


def with_overrides(spec: ExperimentSpec, master_seed: int | None = None,
                   replicates: int | None = None, workers: int | None = None,
                   trace: str | None = None, out_dir: str | None = None
                   ) -> ExperimentSpec:
    """CLI-style overrides applied to every arm (returns a new spec)."""
    arms = spec.arms
    if master_seed is not None or replicates is not None:
        changes = {}
        if master_seed is not None:
            changes["master_seed"] = master_seed
        if replicates is not None:
            changes["replicates"] = replicates
        arms = [Arm(arm.label, replace(arm.config, **changes)) for arm in spec.arms]
        for arm in arms:
            arm.config.validate()
    if trace is not None and trace not in TRACE_LEVELS:
        raise ConfigError(f"trace must be one of {TRACE_LEVELS}, got {trace!r}",
                          fields=["trace"])
    return ExperimentSpec(
        arms=arms,
        out_dir=out_dir if out_dir is not None else spec.out_dir,
        trace=trace if trace is not None else spec.trace,
        workers=workers if workers is not None else spec.workers,
    )
