"""Pilot runs sizing the desk-scale acceptance experiments.

Prints per-run posterior diagnostics and wall times so step counts and
tolerances can be pinned before freezing the acceptance suite.
"""

import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from toy import ba_complex_problem, ba_simple_problem, star_problem  # noqa: E402

from netepi.estimation import bayes_estimate, distance_marginal  # noqa: E402
from netepi.inference import SabcConfig, sabc_run  # noqa: E402
from oracles import rejection_abc  # noqa: E402


def pilot_star(n_rej=200_000):
    problem, spec, theta0 = star_problem()
    t = time.perf_counter()
    sample = sabc_run(problem, spec, SabcConfig(population_size=200, max_steps=60, rng_seed=1))
    t_sabc = time.perf_counter() - t
    t = time.perf_counter()
    oracle = rejection_abc(problem, spec, n_rej, 0.001, seed=2)
    t_rej = time.perf_counter() - t
    om = float(np.mean([p.params[0] for p in oracle]))
    sm = float(sample.params_array[:, 0].mean())
    print(f"[star] sabc mean={sm:.4f} ({t_sabc:.0f}s)  rejection mean={om:.4f} ({t_rej:.0f}s, n={n_rej})  diff={abs(sm-om):.4f}", flush=True)


def pilot_ba_simple(reruns=3, steps=100):
    for k in range(reruns):
        problem, spec, true_seed = ba_simple_problem(net_seed=1, data_seed=100 + k)
        t = time.perf_counter()
        sample = sabc_run(problem, spec, SabcConfig(population_size=500, max_steps=steps, rng_seed=k))
        dt = time.perf_counter() - t
        mean = float(sample.params_array[:, 0].mean())
        marg = distance_marginal(sample, true_seed, problem.paths)
        mass1 = float(marg.masses[:2].sum())
        est = bayes_estimate(sample, problem.net, problem.paths)
        hop = problem.paths.distance(est.seed_node, true_seed)
        print(f"[ba-simple {k}] mean={mean:.3f} mass<=1hop={mass1:.2f} est_hop={hop} "
              f"steps={sample.steps_run} final_eps={sample.tolerances[-1]:.3f} ({dt:.0f}s)", flush=True)


def pilot_ba_complex(reruns=3, steps=60):
    for k in range(reruns):
        problem, spec, true_seed = ba_complex_problem(net_seed=1, data_seed=200 + k)
        t = time.perf_counter()
        sample = sabc_run(problem, spec, SabcConfig(population_size=500, max_steps=steps, rng_seed=k))
        dt = time.perf_counter() - t
        means = sample.params_array.mean(axis=0)
        print(f"[ba-complex {k}] beta_mean={means[0]:.3f} gamma_mean={means[1]:.3f} "
              f"steps={sample.steps_run} ({dt:.0f}s)", flush=True)


if __name__ == "__main__":
    which = sys.argv[1] if len(sys.argv) > 1 else "all"
    if which in ("star", "all"):
        pilot_star()
    if which in ("ba1", "all"):
        pilot_ba_simple()
    if which in ("ba2", "all"):
        pilot_ba_complex()
