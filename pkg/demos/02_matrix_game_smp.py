"""Solve a random bilinear simplex-vs-spectahedron game with the two-prox method.

Compares the measured duality gap of the averaged solution against the
theoretical expected-error bound, for both the exact operator and the
single-sample randomized oracle.

Run:  python3 demos/02_matrix_game_smp.py
"""

import numpy as np

from smpx import bench, eigopt, solver, vi

payload = bench.build_instance_payload("eig_min", {"n": 12, "blocks": [3, 3]}, 42)
_, inst = bench.payload_to_instance(payload)
saddle = eigopt.build_saddle(inst)
problem = saddle.problem
radius = problem.setup.omega_radius
lip = problem.lip_l

print(f"instance: n={inst.n}, blocks={inst.structure.block_sizes}, "
      f"a_inf={inst.a_inf:.3f}, effective L={lip:.2f}")

t = 4000
checkpoints = [50, 200, 1000, 4000]

print("\n--- exact operator (no noise) ---")
gamma = solver.constant_stepsize(1.0, radius, lip, 0.0, t)
record = solver.smp_run(
    problem,
    vi.exact_oracle(problem),
    solver.StepsizePolicy(gamma, t),
    seed=0,
    checkpoints=checkpoints,
    error_fn=lambda z: {"gap": eigopt.objective_and_gap(inst, z)[1]},
)
print(f"{'t':>6} {'gap':>12} {'bound':>12}")
for cp, gap in zip(record.checkpoints, record.errors["gap"]):
    k0, _ = solver.theoretical_bounds(1.0, radius, lip, 0.0, 0.0, cp)
    print(f"{cp:>6} {gap:>12.6f} {k0:>12.6f}")

print("\n--- randomized single-sample oracle ---")
oracle = eigopt.averaged_oracle(inst, 1)
noise = vi.estimate_noise_level(oracle, problem, seed=7)
gamma = solver.constant_stepsize(1.0, radius, lip, noise, t)
consts = eigopt.regularity_constants(inst, 1)
print(f"tuned noise level {noise:.2f}; worst-case oracle constant {consts.noise:.1f}")
means = []
for cp in checkpoints:
    vals = []
    for seed in range(8):
        g = solver.constant_stepsize(1.0, radius, lip, noise, cp)
        rec = solver.smp_run(
            problem, oracle, solver.StepsizePolicy(g, cp), seed, [cp],
            error_fn=lambda z: {"gap": eigopt.objective_and_gap(inst, z)[1]},
        )
        vals.append(rec.errors["gap"][0])
    means.append(float(np.mean(vals)))
print(f"{'t':>6} {'mean gap':>12} {'bound':>12}")
for cp, m in zip(checkpoints, means):
    k0, _ = solver.theoretical_bounds(1.0, radius, lip, consts.noise, 0.0, cp)
    print(f"{cp:>6} {m:>12.6f} {k0:>12.1f}")
slope = np.polyfit(np.log(checkpoints), np.log(means), 1)[0]
print(f"log-log slope of the mean gap: {slope:.2f} (noise-dominated regime is ~ -0.5)")
