"""Classical decision, counting, and backtracking solvers over the reduced space.

All solvers work on the affine space produced by `reduce_instance`; the
backtracking pair additionally exploits the standard form, fixing free
variables in index order (branch 0 before 1) and cutting a branch as
soon as any clause is violated under the induced partial assignment.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import gf2
from .bits import bit_block
from .errors import GuardExceeded
from .instances import (
    INDETERMINATE,
    ClauseStatus,
    Instance,
    clause_tables,
    eval_batch,
    eval_clause_partial,
)
from .reduction import Reduction, XorInfeasible, expand_batch, reduce_instance

ENUMERATION_MAX_FREE = 30
_ENUM_BLOCK = 1 << 16


@dataclass(frozen=True, eq=False)
class SolveOutcome:
    satisfiable: bool
    assignment: np.ndarray | None
    queries: int  # full-assignment evaluations performed


@dataclass(frozen=True)
class TreeStats:
    """Visited-node counts of a backtracking decision tree."""

    total_nodes: int
    nodes_per_depth: tuple[int, ...]


def _reduction_for(instance: Instance, reduction):
    if reduction is None:
        reduction = reduce_instance(instance)
    return reduction


def _check_enumeration_guard(k: int):
    if k > ENUMERATION_MAX_FREE:
        raise GuardExceeded("reduced-space dimension k", k, ENUMERATION_MAX_FREE)


def solve_enumerate(instance: Instance, reduction=None) -> SolveOutcome:
    """Check reduced-space candidates in lexicographic parameter order.

    Returns the first satisfying assignment, or Unsat after all 2^k
    candidates fail (queries reports how many were evaluated).
    """
    reduction = _reduction_for(instance, reduction)
    if isinstance(reduction, XorInfeasible):
        return SolveOutcome(False, None, 0)
    k = reduction.free_count
    _check_enumeration_guard(k)
    tables = clause_tables(instance)
    total = 1 << k
    for start in range(0, total, _ENUM_BLOCK):
        block = bit_block(start, min(start + _ENUM_BLOCK, total), k)
        good = eval_batch(instance, expand_batch(reduction, block), tables)
        hits = np.nonzero(good)[0]
        if hits.size:
            first = int(hits[0])
            assignment = expand_batch(reduction, block[first : first + 1])[0]
            return SolveOutcome(True, assignment, start + first + 1)
    return SolveOutcome(False, None, total)


def count_enumerate(instance: Instance, reduction=None) -> int:
    """Exact solution count by checking every reduced-space candidate."""
    reduction = _reduction_for(instance, reduction)
    if isinstance(reduction, XorInfeasible):
        return 0
    k = reduction.free_count
    _check_enumeration_guard(k)
    tables = clause_tables(instance)
    total = 1 << k
    count = 0
    for start in range(0, total, _ENUM_BLOCK):
        block = bit_block(start, min(start + _ENUM_BLOCK, total), k)
        count += int(eval_batch(instance, expand_batch(reduction, block), tables).sum())
    return count


class _BacktrackRun:
    """One depth-first walk of the standard-form decision tree.

    A dependent coordinate becomes determinate once every free variable
    in its row of the dependency map is fixed; a node is pruned when a
    clause containing a newly determined variable is violated.
    """

    def __init__(self, instance: Instance, reduction: Reduction, find_first: bool):
        self.instance = instance
        self.find_first = find_first
        sf = reduction.standard
        self.k = sf.free_count
        self.perm = sf.perm
        self.dep_offset = sf.dependent_offset
        self.supports = [np.nonzero(row)[0] for row in sf.h]
        ready_depth = [int(s.max()) + 1 if s.size else 0 for s in self.supports]
        self.deps_at: list[list[int]] = [[] for _ in range(self.k + 1)]
        for j, depth in enumerate(ready_depth):
            self.deps_at[depth].append(j)
        self.clauses_of_var: list[list[int]] = [[] for _ in range(instance.n)]
        for a, c in enumerate(instance.clauses):
            for lit in c.literals:
                self.clauses_of_var[lit.var].append(a)
        self.partial = np.full(instance.n, INDETERMINATE, dtype=np.int8)
        self.vbits = np.zeros(self.k, dtype=np.uint8)
        self.nodes_per_depth = [0] * (self.k + 1)
        self.solution_count = 0
        self.first_solution: np.ndarray | None = None

    def run(self) -> TreeStats:
        self._visit(0)
        return TreeStats(sum(self.nodes_per_depth), tuple(self.nodes_per_depth))

    def _visit(self, depth: int) -> bool:
        self.nodes_per_depth[depth] += 1
        newly_determined = []
        if depth > 0:
            var = int(self.perm[depth - 1])
            self.partial[var] = self.vbits[depth - 1]
            newly_determined.append(var)
        for j in self.deps_at[depth]:
            value = int(self.dep_offset[j])
            for c in self.supports[j]:
                value ^= int(self.vbits[c])
            var = int(self.perm[self.k + j])
            self.partial[var] = value
            newly_determined.append(var)

        done = False
        if not self._violates(newly_determined):
            if depth == self.k:
                self.solution_count += 1
                if self.first_solution is None:
                    self.first_solution = self.partial.astype(np.uint8).copy()
                done = self.find_first
            else:
                for bit in (0, 1):
                    self.vbits[depth] = bit
                    if self._visit(depth + 1):
                        done = True
                        break
        for var in newly_determined:
            self.partial[var] = INDETERMINATE
        return done

    def _violates(self, newly_determined) -> bool:
        seen = set()
        for var in newly_determined:
            for a in self.clauses_of_var[var]:
                if a in seen:
                    continue
                seen.add(a)
                status = eval_clause_partial(self.instance.clauses[a], self.partial)
                if status is ClauseStatus.VIOLATED:
                    return True
        return False


def backtrack_solve(instance: Instance, reduction) -> tuple[SolveOutcome, TreeStats]:
    """Depth-first search for one solution; returns the outcome and tree size.

    Queries counts the full assignments reached (depth-k nodes). For an
    XorInfeasible input no tree is built and T = 0.
    """
    if isinstance(reduction, XorInfeasible):
        return SolveOutcome(False, None, 0), TreeStats(0, ())
    run = _BacktrackRun(instance, reduction, find_first=True)
    stats = run.run()
    leaves = stats.nodes_per_depth[run.k]
    if run.first_solution is not None:
        return SolveOutcome(True, run.first_solution, leaves), stats
    return SolveOutcome(False, None, leaves), stats


def backtrack_count(instance: Instance, reduction) -> tuple[int, TreeStats]:
    """Exhaustive decision-tree walk; the tree size here is the T used for gamma."""
    if isinstance(reduction, XorInfeasible):
        return 0, TreeStats(0, ())
    run = _BacktrackRun(instance, reduction, find_first=False)
    stats = run.run()
    return run.solution_count, stats


def permutation_score(instance: Instance, reduction: Reduction) -> int:
    """Number of clauses containing at least one free-block variable."""
    free_vars = set(int(v) for v in reduction.standard.perm[: reduction.free_count])
    return sum(
        1 for c in instance.clauses if any(lit.var in free_vars for lit in c.literals)
    )


def optimize_permutation(
    instance: Instance,
    reduction: Reduction,
    trials: int = 100,
    seed: int | np.random.Generator = 0,
) -> Reduction:
    """Optimize the variable permutation for backtracking.

    Primary objective: the number of clauses containing at least one
    free-block variable, raised by `trials` greedy swap climbs (the
    first from the input's block, the rest from random full-rank
    blocks). Among the best-scoring blocks found, ties are broken toward
    standard forms whose dependent rows complete early, and the free
    block is ordered the same way, since early-determined coordinates
    are what lets the backtracker cut branches. The returned reduction
    never scores below the input and spans the same solution set;
    deterministic per seed.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    k, n = reduction.kernel.shape
    if k == 0 or k == n:
        return reduction
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    incidence = np.zeros((instance.m, n), dtype=np.int64)
    for a, c in enumerate(instance.clauses):
        for lit in c.literals:
            incidence[a, lit.var] = 1

    input_sel = [int(v) for v in reduction.standard.perm[:k]]
    candidates = {tuple(sorted(input_sel)): _selection_score(incidence, input_sel)}
    for trial in range(trials):
        sel = list(input_sel) if trial == 0 else _random_selection(reduction.kernel, rng)
        sel, score = _climb(reduction, incidence, sel)
        candidates.setdefault(tuple(sorted(sel)), score)
    best_score = max(candidates.values())
    finalists = sorted(sel for sel, score in candidates.items() if score == best_score)
    scored = []
    for sel in finalists:
        sf = gf2.standard_form(reduction.kernel, reduction.offset, selection=sel)
        scored.append((_readiness_penalty(sf), sel))
    _, chosen = min(scored)
    order = _readiness_order(reduction.kernel, reduction.offset, chosen)
    if order == input_sel:
        return reduction
    return reduction.with_standard(
        gf2.standard_form(reduction.kernel, reduction.offset, selection=order)
    )


def _readiness_penalty(sf: gf2.StandardForm) -> int:
    """Sum over dependent rows of the depth at which each becomes determined."""
    total = 0
    for row in sf.h:
        hits = np.nonzero(row)[0]
        total += int(hits.max()) + 1 if hits.size else 0
    return total


def _readiness_order(kernel, offset, selection) -> list[int]:
    """Order the free block so dependency rows complete as early as possible.

    Greedy: repeatedly append the variable that completes the most
    still-open dependent rows, then the one leaving the least remaining
    support, then the smallest index (deterministic).
    """
    sf = gf2.standard_form(kernel, offset, selection=selection)
    variables = list(selection)
    supports = [
        {variables[c] for c in np.nonzero(row)[0]} for row in sf.h if np.any(row)
    ]
    chosen: list[int] = []
    remaining = set(variables)
    while remaining:
        best = None
        best_key = None
        placed = set(chosen)
        for v in sorted(remaining):
            trial = placed | {v}
            completed = sum(1 for s in supports if v in s and s <= trial)
            leftover = sum(len(s - trial) for s in supports if not s <= placed)
            key = (-completed, leftover, v)
            if best_key is None or key < best_key:
                best, best_key = v, key
        chosen.append(best)
        remaining.discard(best)
    return chosen


def _selection_score(incidence, sel) -> int:
    return int((incidence[:, sel].sum(axis=1) > 0).sum())


def _random_selection(kernel, rng) -> list[int]:
    """A uniform-ish random set of k columns on which the kernel has full rank."""
    order = rng.permutation(kernel.shape[1])
    _, pivots = gf2.row_reduce(kernel[:, order])
    return [int(order[c]) for c in pivots]


def _climb(reduction, incidence, sel):
    """Best-improvement swaps until no valid swap raises the score."""
    while True:
        sf = gf2.standard_form(reduction.kernel, reduction.offset, selection=sel)
        k = sf.free_count
        free = [int(v) for v in sf.perm[:k]]
        dependent = [int(v) for v in sf.perm[k:]]
        score = _selection_score(incidence, free)
        if not dependent:
            return free, score
        counts = incidence[:, free].sum(axis=1)
        # counts[a] - in(a, out_var) + in(a, in_var), for every swap pair
        swapped = (
            counts[:, None, None]
            - incidence[:, free][:, :, None]
            + incidence[:, dependent][:, None, :]
        )
        scores = (swapped > 0).sum(axis=0)
        valid = sf.h.T.astype(bool)  # (k, n-k): swap keeps the block full-rank
        scores = np.where(valid, scores, -1)
        best = int(scores.max())
        if best <= score:
            return free, score
        c, j = np.unravel_index(int(scores.argmax()), scores.shape)
        sel = [v for v in free if v != free[c]] + [dependent[j]]


def gamma_estimate(tree_sizes, n: int) -> float:
    """Scaled tree-size exponent (1/n) * log2(mean(sqrt(T)))."""
    sizes = np.asarray(tree_sizes, dtype=np.float64)
    if sizes.size == 0:
        raise ValueError("tree_sizes must be nonempty")
    if n < 1:
        raise ValueError("n must be >= 1")
    return float(math.log2(np.sqrt(sizes).mean()) / n)
