"""Parity-system construction, reduction outcomes, and expansion maps."""

from __future__ import annotations

import itertools

import numpy as np
import pytest

from xorsat_reduce import gf2
from xorsat_reduce.bits import bit_block
from xorsat_reduce.instances import (
    Clause,
    Instance,
    Literal,
    brute_force_solutions,
    clause,
    gen_locked_random,
)
from xorsat_reduce.reduction import (
    Reduction,
    XorInfeasible,
    build_linear_system,
    expand,
    expand_batch,
    expand_standard,
    kernel_excess,
    reduce_instance,
)


def xor_solutions(system):
    """Parity-system solution set by enumeration, as bit tuples."""
    m, n = system.matrix.shape
    out = set()
    for bits in itertools.product((0, 1), repeat=n):
        v = np.array(bits, dtype=np.uint8)
        if np.array_equal(gf2.matvec(system.matrix, v), system.rhs):
            out.add(bits)
    return out


class TestBuildLinearSystem:
    def test_chain(self, chain_instance):
        system = build_linear_system(chain_instance)
        assert system.matrix.tolist() == [
            [1, 1, 1, 0, 0],
            [0, 1, 1, 1, 0],
            [0, 0, 1, 1, 1],
        ]
        assert system.rhs.tolist() == [0, 0, 1]

    def test_all_negated_clause(self):
        inst = Instance(3, (clause([(0, True), (1, True), (2, True)], 1),))
        system = build_linear_system(inst)
        assert system.rhs.tolist() == [0]

    def test_degree_two_node_clause(self):
        inst = Instance(3, (clause([(0, False), (1, False), (2, False)], 2),))
        assert build_linear_system(inst).rhs.tolist() == [0]


class TestReduce:
    def test_chain_dimensions(self, chain_instance):
        r = reduce_instance(chain_instance)
        assert isinstance(r, Reduction)
        assert r.free_count == 2
        assert r.m_prime == 3
        system = build_linear_system(chain_instance)
        expansions = {tuple(expand(r, bits)) for bits in itertools.product((0, 1), repeat=2)}
        assert len(expansions) == 4
        assert expansions == xor_solutions(system)

    def test_contradictory_parity(self):
        inst = Instance(
            2,
            (
                clause([(0, False), (1, False)], 1),
                clause([(0, False), (1, False)], 2),
            ),
        )
        outcome = reduce_instance(inst)
        assert isinstance(outcome, XorInfeasible)
        assert outcome.witness == (0, 1)

    def test_witness_certifies(self):
        rng = np.random.default_rng(3)
        seen = 0
        for _ in range(200):
            n = int(rng.integers(4, 10))
            inst = gen_locked_random(n, n + 2, 3, 1, seed=int(rng.integers(1 << 30)))
            outcome = reduce_instance(inst)
            if not isinstance(outcome, XorInfeasible):
                continue
            seen += 1
            system = build_linear_system(inst)
            rows = system.matrix[list(outcome.witness)]
            assert not np.any(np.bitwise_xor.reduce(rows, axis=0))
            assert np.bitwise_xor.reduce(system.rhs[list(outcome.witness)]) == 1
        assert seen > 5

    def test_unconstrained(self):
        r = reduce_instance(Instance(4, ()))
        assert r.free_count == 4
        assert r.m_prime == 0
        assert not np.any(r.offset)

    def test_isolated_variable_is_free_direction(self):
        inst = Instance(4, (clause([(0, False), (1, False), (2, False)], 1),))
        r = reduce_instance(inst)
        assert r.free_count == 3
        hits = [row for row in r.kernel if row[3]]
        assert len(hits) == 1 and tuple(hits[0]) == (0, 0, 0, 1)


class TestExpand:
    def test_zero_parameter_gives_offset(self, chain_instance):
        r = reduce_instance(chain_instance)
        assert np.array_equal(expand(r, [0, 0]), r.offset)

    def test_unit_vectors(self, chain_instance):
        r = reduce_instance(chain_instance)
        assert np.array_equal(expand(r, [1, 0]), r.kernel[0] ^ r.offset)
        assert np.array_equal(expand(r, [0, 1]), r.kernel[1] ^ r.offset)

    def test_length_mismatch_rejected(self, chain_instance):
        r = reduce_instance(chain_instance)
        with pytest.raises(ValueError):
            expand(r, [0, 1, 1])

    def test_batch_matches_scalar(self, chain_instance):
        r = reduce_instance(chain_instance)
        block = bit_block(0, 4, 2)
        batch = expand_batch(r, block)
        for row, v in zip(batch, block):
            assert np.array_equal(row, expand(r, v))


class TestExpandStandard:
    def test_membership_for_all_parameters(self, chain_instance):
        r = reduce_instance(chain_instance)
        system = build_linear_system(chain_instance)
        for bits in itertools.product((0, 1), repeat=r.free_count):
            x = expand_standard(r, np.array(bits, dtype=np.uint8))
            assert np.array_equal(gf2.matvec(system.matrix, x), system.rhs)

    def test_same_set_as_plain_expansion(self, chain_instance):
        r = reduce_instance(chain_instance)
        plain = {tuple(expand(r, bits)) for bits in itertools.product((0, 1), repeat=2)}
        standard = {tuple(expand_standard(r, bits)) for bits in itertools.product((0, 1), repeat=2)}
        assert plain == standard

    def test_zero_parameter_is_valid_solution(self, chain_instance):
        r = reduce_instance(chain_instance)
        system = build_linear_system(chain_instance)
        x = expand_standard(r, [0, 0])
        assert np.array_equal(gf2.matvec(system.matrix, x), system.rhs)

    def test_free_block_equals_parameter(self, chain_instance):
        r = reduce_instance(chain_instance)
        sf = r.standard
        for bits in itertools.product((0, 1), repeat=2):
            x = expand_standard(r, bits)
            assert tuple(x[sf.perm[:2]]) == bits


class TestKernelExcess:
    def test_full_rank(self, chain_instance):
        r = reduce_instance(chain_instance)
        assert kernel_excess(chain_instance, r) == 0

    def test_duplicated_clause(self):
        c = clause([(0, False), (1, False), (2, False)], 1)
        inst = Instance(3, (c, c))
        r = reduce_instance(inst)
        assert kernel_excess(inst, r) >= 1

    def test_equals_row_dependency_count(self):
        rng = np.random.default_rng(41)
        for _ in range(30):
            n = int(rng.integers(5, 14))
            m = int(rng.integers(int(np.ceil(2 * n / 3)), 2 * n))
            inst = gen_locked_random(n, m, 3, 1, seed=int(rng.integers(1 << 30)))
            outcome = reduce_instance(inst)
            system = build_linear_system(inst)
            expected = inst.m - gf2.rank(system.matrix)
            if isinstance(outcome, Reduction):
                assert kernel_excess(inst, outcome) == expected
                assert kernel_excess(inst, outcome) >= 0


class TestEnsembleInvariants:
    def ensemble(self, count, seed):
        rng = np.random.default_rng(seed)
        for _ in range(count):
            n = int(rng.integers(5, 14))
            m = int(rng.integers(int(np.ceil(2 * n / 3)), int(1.3 * n) + 1))
            yield gen_locked_random(n, m, 3, 1, seed=int(rng.integers(1 << 30)))

    def test_containment_and_consistency(self):
        for inst in self.ensemble(40, seed=59):
            outcome = reduce_instance(inst)
            solutions = {tuple(s) for s in brute_force_solutions(inst)}
            if isinstance(outcome, XorInfeasible):
                assert not solutions
                continue
            system = build_linear_system(inst)
            k = outcome.free_count
            block = bit_block(0, 1 << k, k)
            expansions = expand_batch(outcome, block)
            for x in expansions:
                assert np.array_equal(gf2.matvec(system.matrix, x), system.rhs)
            expansion_set = {tuple(x) for x in expansions}
            assert len(expansion_set) == 1 << (inst.n - outcome.m_prime)
            assert solutions <= expansion_set
