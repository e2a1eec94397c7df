"""Ensemble sweeps: kernel-excess statistics and decision-tree statistics.

Samples are seeded independently from (base seed, n, sample index), so a
sweep is deterministic regardless of worker count; results are ordered
by (n, sample) before they are written anywhere.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import gf2
from .errors import GenerationError
from .instances import gen_locked_random
from .reduction import XorInfeasible, build_linear_system, reduce_instance
from .solvers import backtrack_count, gamma_estimate, optimize_permutation

SWEEP_MAX_FREE = 26

PROBLEM_ARITIES = {"occ1in3": (3, 1), "occ2in4": (4, 2)}


@dataclass(frozen=True)
class SweepConfig:
    problem: str  # occ1in3 | occ2in4 | custom
    n_list: tuple[int, ...]
    alpha: float
    samples: int
    seed: int = 0
    negation_prob: float = 0.5
    perm_trials: int = 100
    p: int | None = None  # custom problems only
    q: int | None = None
    threads: int = 1

    def __post_init__(self):
        if not self.n_list:
            raise ValueError("n_list must be nonempty")
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if self.problem not in PROBLEM_ARITIES and self.problem != "custom":
            raise ValueError(f"unknown problem {self.problem!r}")
        if self.problem == "custom" and (self.p is None or self.q is None):
            raise ValueError("custom problems need explicit p and q")

    @property
    def arity(self) -> tuple[int, int]:
        if self.problem == "custom":
            return int(self.p), int(self.q)
        return PROBLEM_ARITIES[self.problem]

    def clause_count(self, n: int) -> int:
        return int(math.floor(self.alpha * n))


def _sample_seeds(base_seed: int, n: int, sample: int):
    root = np.random.SeedSequence([base_seed, n, sample])
    gen_ss, opt_ss = root.spawn(2)
    fingerprint = int(root.generate_state(1)[0])
    return fingerprint, gen_ss, opt_ss


def _kernel_sample(task) -> dict:
    config, n, sample = task
    p, q = config.arity
    fingerprint, gen_ss, _ = _sample_seeds(config.seed, n, sample)
    base = dict(kind="sample", problem=config.problem, n=n, alpha=config.alpha,
                sample=sample, seed=fingerprint)
    try:
        inst = gen_locked_random(
            n, config.clause_count(n), p, q, config.negation_prob,
            seed=np.random.Generator(np.random.PCG64(gen_ss)),
        )
    except GenerationError as err:
        return dict(base, kind="failure", error=str(err))
    m_prime = gf2.rank(build_linear_system(inst).matrix)
    return dict(base, m=inst.m, m_prime=m_prime, k=n - m_prime, delta_k=inst.m - m_prime)


def _tree_sample(task) -> dict:
    config, n, sample = task
    p, q = config.arity
    fingerprint, gen_ss, opt_ss = _sample_seeds(config.seed, n, sample)
    base = dict(kind="sample", problem=config.problem, n=n, alpha=config.alpha,
                sample=sample, seed=fingerprint)
    try:
        inst = gen_locked_random(
            n, config.clause_count(n), p, q, config.negation_prob,
            seed=np.random.Generator(np.random.PCG64(gen_ss)),
        )
    except GenerationError as err:
        return dict(base, kind="failure", error=str(err))
    outcome = reduce_instance(inst)
    if isinstance(outcome, XorInfeasible):
        m_prime = gf2.rank(build_linear_system(inst).matrix)
        return dict(base, m=inst.m, m_prime=m_prime, k=n - m_prime,
                    delta_k=inst.m - m_prime, solutions=0, tree_nodes=0,
                    tree_nodes_unoptimized=0)
    k = outcome.free_count
    stats = dict(base, m=inst.m, m_prime=outcome.m_prime, k=k,
                 delta_k=inst.m - outcome.m_prime)
    if k > SWEEP_MAX_FREE:
        return dict(stats, kind="guard_skip")
    count, raw_tree = backtrack_count(inst, outcome)
    tree_nodes = raw_tree.total_nodes
    if config.perm_trials > 0:
        optimized = optimize_permutation(
            inst, outcome, trials=config.perm_trials,
            seed=np.random.Generator(np.random.PCG64(opt_ss)),
        )
        opt_count, opt_tree = backtrack_count(inst, optimized)
        tree_nodes = opt_tree.total_nodes
        assert opt_count == count
    return dict(stats, solutions=count, tree_nodes=tree_nodes,
                tree_nodes_unoptimized=raw_tree.total_nodes)


def _run(config: SweepConfig, worker) -> list[dict]:
    tasks = [(config, n, s) for n in config.n_list for s in range(config.samples)]
    if config.threads > 1:
        with ProcessPoolExecutor(max_workers=config.threads) as pool:
            rows = list(pool.map(worker, tasks, chunksize=max(1, len(tasks) // (8 * config.threads))))
    else:
        rows = [worker(t) for t in tasks]
    rows.sort(key=lambda r: (r["n"], r["sample"]))
    return rows


def kernel_sweep(config: SweepConfig) -> tuple[list[dict], list[dict]]:
    """Per-sample kernel-excess records plus per-n summaries of delta_k / n."""
    rows = _run(config, _kernel_sample)
    summaries = []
    for n in config.n_list:
        good = [r for r in rows if r["n"] == n and r["kind"] == "sample"]
        failures = sum(1 for r in rows if r["n"] == n and r["kind"] == "failure")
        ratios = [r["delta_k"] / n for r in good]
        summaries.append(
            dict(
                kind="summary", problem=config.problem, n=n, alpha=config.alpha,
                samples=len(good), failures=failures,
                mean_delta_k_per_n=float(np.mean(ratios)) if ratios else float("nan"),
                min_delta_k_per_n=min(ratios) if ratios else float("nan"),
                max_delta_k_per_n=max(ratios) if ratios else float("nan"),
                max_delta_k=max((r["delta_k"] for r in good), default=0),
            )
        )
    return rows, summaries


def tree_sweep(config: SweepConfig) -> tuple[list[dict], list[dict]]:
    """Per-sample decision-tree records plus per-n gamma summaries."""
    rows = _run(config, _tree_sample)
    summaries = []
    for n in config.n_list:
        good = [r for r in rows if r["n"] == n and r["kind"] == "sample"]
        skips = sum(1 for r in rows if r["n"] == n and r["kind"] == "guard_skip")
        failures = sum(1 for r in rows if r["n"] == n and r["kind"] == "failure")
        sizes = [r["tree_nodes"] for r in good]
        raw_sizes = [r["tree_nodes_unoptimized"] for r in good]
        summaries.append(
            dict(
                kind="summary", problem=config.problem, n=n, alpha=config.alpha,
                samples=len(good), failures=failures, guard_skips=skips,
                mean_sqrt_t=float(np.mean(np.sqrt(sizes))) if sizes else float("nan"),
                gamma=gamma_estimate(sizes, n) if sizes and max(sizes) > 0 else float("nan"),
                mean_sqrt_t_unoptimized=float(np.mean(np.sqrt(raw_sizes))) if raw_sizes else float("nan"),
                gamma_unoptimized=(
                    gamma_estimate(raw_sizes, n) if raw_sizes and max(raw_sizes) > 0 else float("nan")
                ),
            )
        )
    return rows, summaries
