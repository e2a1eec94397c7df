"""Grover search simulation over the reduced space, with cost and resource models.

The oracle acts on the 2^k parameter indices of a reduction: it flips
the phase of |v> exactly when the expanded assignment satisfies the
instance (or when v carries the artificial mark used for no-solution
certification). States are dense complex statevectors and the oracle is
applied as an index-wise phase flip; the gate-level structure of the
oracle is modeled separately by `oracle_resources`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .bits import bit_block, index_to_bits
from .errors import GuardExceeded
from .instances import Instance, clause_tables, eval_batch
from .reduction import Reduction, expand, expand_batch
from .solvers import SolveOutcome

SEARCH_MAX_FREE = 24
NORM_TOL = 1e-9
_MASK_BLOCK = 1 << 16

# The unknown-count schedule: per-round iteration cap grows by 6/5 until it
# reaches sqrt(N); Unsat is certified after this many artificial-only hits,
# so a satisfiable instance is misclassified with probability <= 2^-32.
SCHEDULE_GROWTH = 6 / 5
CERTIFY_REPEATS = 32

# total_gates <= RESOURCE_BOUND_CONSTANT * n^2 for the locked ensembles this
# package targets (clause arity fixed and small, M = O(n)): module I is at
# most (k+1)*n <= n*(n+1), and modules II-IV together are O(n log n).
RESOURCE_BOUND_CONSTANT = 3


@dataclass(eq=False)
class OracleSpec:
    """Phase-flip oracle over reduced-space indices.

    `artificial_marked`, when set, is one extra index the oracle accepts
    regardless of the instance; the unknown-count search uses it to
    certify unsatisfiability.
    """

    reduction: Reduction
    instance: Instance
    artificial_marked: int | None = None

    def __post_init__(self):
        k = self.reduction.free_count
        if self.artificial_marked is not None and not 0 <= self.artificial_marked < (1 << k):
            raise ValueError(f"artificial mark {self.artificial_marked} not in [0, 2^{k})")

    @property
    def free_count(self) -> int:
        return self.reduction.free_count

    @cached_property
    def solution_mask(self) -> np.ndarray:
        """Boolean mask over all 2^k indices: true where the expansion satisfies the instance."""
        k = self.free_count
        if k > SEARCH_MAX_FREE:
            raise GuardExceeded("reduced-space dimension k", k, SEARCH_MAX_FREE)
        tables = clause_tables(self.instance)
        total = 1 << k
        mask = np.zeros(total, dtype=bool)
        for start in range(0, total, _MASK_BLOCK):
            block = bit_block(start, min(start + _MASK_BLOCK, total), k)
            mask[start : start + block.shape[0]] = eval_batch(
                self.instance, expand_batch(self.reduction, block), tables
            )
        return mask

    @cached_property
    def marked_mask(self) -> np.ndarray:
        """solution_mask with the artificial index (if any) also marked."""
        if self.artificial_marked is None:
            return self.solution_mask
        mask = self.solution_mask.copy()
        mask[self.artificial_marked] = True
        return mask


def uniform_state(k: int) -> np.ndarray:
    """Equal superposition over 2^k indices."""
    n = 1 << k
    return np.full(n, 1.0 / math.sqrt(n), dtype=np.complex128)


def _check_normalized(state: np.ndarray):
    norm2 = float(np.vdot(state, state).real)
    if abs(norm2 - 1.0) > NORM_TOL:
        raise ValueError(f"state is not normalized: |s|^2 = {norm2}")


def flip_marked(state: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """Negate the amplitudes at the masked indices."""
    out = state.copy()
    out[mask] *= -1.0
    return out


def invert_about_mean(state: np.ndarray) -> np.ndarray:
    """Grover diffusion: reflect every amplitude about the mean amplitude."""
    return 2.0 * state.mean() - state


def apply_oracle(spec: OracleSpec, state: np.ndarray) -> np.ndarray:
    """Phase-flip the marked indices of a normalized state."""
    _check_normalized(state)
    return flip_marked(state, spec.marked_mask)


def grover_iterate(spec: OracleSpec, state: np.ndarray) -> np.ndarray:
    """One Grover iteration: oracle followed by inversion about the mean."""
    return invert_about_mean(apply_oracle(spec, state))


def grover_search_known(
    spec: OracleSpec, v_count: int, rng: int | np.random.Generator
) -> tuple[int, bool, int]:
    """Grover search with a known marked count: optimal iterations, one measurement.

    Runs floor(pi/4 * sqrt(2^k / v_count)) iterations from the uniform
    state and samples once; returns (measured index, whether it is
    marked, iterations used).
    """
    k = spec.free_count
    if k > SEARCH_MAX_FREE:
        raise GuardExceeded("reduced-space dimension k", k, SEARCH_MAX_FREE)
    total = 1 << k
    if not 1 <= v_count <= total:
        raise ValueError(f"marked count {v_count} not in [1, {total}]")
    rng = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    iterations = int(math.pi / 4 * math.sqrt(total / v_count))
    state = uniform_state(k)
    for _ in range(iterations):
        state = grover_iterate(spec, state)
    probs = np.abs(state) ** 2
    measured = int(rng.choice(total, p=probs / probs.sum()))
    return measured, bool(spec.marked_mask[measured]), iterations


def _round_hits_marked(theta: float, iterations: int, rng) -> bool:
    """Sample the measured class after `iterations` Grover steps from uniform.

    By symmetry every marked amplitude stays equal (likewise unmarked),
    so the measured class is Bernoulli with p = sin^2((2r+1) theta) and
    the index is uniform within the class; this matches the explicit
    statevector simulation exactly.
    """
    p_marked = math.sin((2 * iterations + 1) * theta) ** 2
    return bool(rng.random() < p_marked)


def grover_search_unknown(
    spec: OracleSpec,
    rng: int | np.random.Generator,
    growth: float = SCHEDULE_GROWTH,
    certify_repeats: int = CERTIFY_REPEATS,
) -> SolveOutcome:
    """Exponential-schedule search for an unknown number of solutions.

    Each round runs a random number of iterations (uniform below a cap
    that grows by `growth` up to sqrt(2^k)) from the uniform state and
    measures once; measured candidates are verified classically. One
    index (spec.artificial_marked, defaulting to 0) is always marked, so
    when no solution exists the search still terminates: after
    `certify_repeats` rounds that located only the artificial index, the
    instance is declared Unsat. Queries counts oracle applications.
    """
    k = spec.free_count
    if k > SEARCH_MAX_FREE:
        raise GuardExceeded("reduced-space dimension k", k, SEARCH_MAX_FREE)
    rng = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    artificial = spec.artificial_marked if spec.artificial_marked is not None else 0
    solution_mask = spec.solution_mask
    marked = solution_mask.copy()
    marked[artificial] = True
    marked_indices = np.nonzero(marked)[0]
    total = 1 << k
    theta = math.asin(math.sqrt(marked_indices.size / total))

    cap = 1.0
    max_cap = math.sqrt(total)
    queries = 0
    artificial_hits = 0
    while True:
        iterations = int(rng.integers(0, math.ceil(cap)))
        queries += iterations
        if _round_hits_marked(theta, iterations, rng):
            measured = int(marked_indices[rng.integers(marked_indices.size)])
            if solution_mask[measured]:
                assignment = expand(spec.reduction, index_to_bits(measured, k))
                return SolveOutcome(True, assignment, queries)
            artificial_hits += 1
            if artificial_hits >= certify_repeats:
                return SolveOutcome(False, None, queries)
        cap = min(growth * cap, max_cap)


def query_cost_decision(n: int, m_prime: int) -> float:
    """Worst-case decision query bound sqrt(2^(n - m_prime)), unit constant."""
    if m_prime > n:
        raise ValueError(f"m_prime {m_prime} exceeds n {n}")
    return 2.0 ** ((n - m_prime) / 2)


def query_cost_count(n: int, m_prime: int, v_count: int) -> float:
    """Counting query bound sqrt(V * 2^(n - m_prime))."""
    if m_prime > n:
        raise ValueError(f"m_prime {m_prime} exceeds n {n}")
    if not 0 <= v_count <= 2 ** (n - m_prime):
        raise ValueError(f"solution count {v_count} not in [0, 2^{n - m_prime}]")
    return math.sqrt(v_count) * 2.0 ** ((n - m_prime) / 2)


@dataclass(frozen=True)
class ResourceReport:
    """Gate and ancilla counts for the four-module oracle decomposition.

    Module I expands |v> into the assignment register (one CNOT per
    kernel bit, one NOT per offset bit); module II checks each clause
    (arity-p controlled ops plus an exactly-q comparator of cost
    p + ceil(log2(p+1))); module III counts satisfied clauses into
    ceil(log2(M+1)) ancillas; module IV is the final conditional phase.
    Every clause is checked, including parity-dependent ones.
    """

    ancillas: int
    gates_module_i: int
    gates_module_ii: int
    gates_module_iii: int
    gates_module_iv: int

    @property
    def total_gates(self) -> int:
        return (
            self.gates_module_i
            + self.gates_module_ii
            + self.gates_module_iii
            + self.gates_module_iv
        )


def _clause_check_cost(p: int) -> int:
    return 2 * p + p.bit_length()  # p.bit_length() == ceil(log2(p + 1))


def oracle_resources(spec: OracleSpec) -> ResourceReport:
    """Resource model of the oracle for the given reduction and instance."""
    m = spec.instance.m
    ancillas = m.bit_length()
    module_i = int(spec.reduction.kernel.sum()) + int(spec.reduction.offset.sum())
    module_ii = sum(_clause_check_cost(c.p) for c in spec.instance.clauses)
    module_iii = m * ancillas
    module_iv = 1 if m else 0
    return ResourceReport(
        ancillas=ancillas,
        gates_module_i=module_i,
        gates_module_ii=module_ii,
        gates_module_iii=module_iii,
        gates_module_iv=module_iv,
    )
