"""Run one seeded replicate and inspect what happened.

A replicate is one organization of 20 agents searching the 25-bit strategy
space until every member has touched the goal at least once (group
convergence) or the iteration budget runs out.
"""

import numpy as np

from orgswarm import OrgDesign, SimConfig, Tendency, run_replicate, to_bitstring

config = SimConfig(
    master_seed=2026,
    design=OrgDesign.fully_networked(),
    tendency=Tendency.REACTIVE,
)

result = run_replicate(config, replicate_index=0)

print(f"goal strategy : {to_bitstring(result.goal)}")
print(f"replicate seed: {result.seed}")
print(f"first agent hit the goal at iteration {result.first_any_hit}")
print(f"group converged at iteration {result.group_convergence} "
      f"(budget {result.max_iterations})")
print(f"per-agent first hits: {np.sort(result.first_hit).tolist()}")

# the group-level trace: best and mean Hamming distance per iteration
checkpoints = np.linspace(0, result.iterations_run - 1, 8, dtype=int)
print("\niteration  best  mean")
for t in checkpoints:
    print(f"{t + 1:9d}  {result.trace_best[t]:4d}  {result.trace_mean[t]:5.2f}")
