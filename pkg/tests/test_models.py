"""Models: juntas, sparse polynomials, branching programs, Fourier."""

import random
from fractions import Fraction

import pytest

from prlab import models
from prlab.models import (
    BooleanFunction,
    BranchingProgram2,
    BPNode,
    Junta,
    Partition,
    SparsePolyF2,
    XorOfJuntas,
    decompose_2bp,
    eval_2bp,
    fourier_expand,
    is_set_multilinear,
    junta_bits,
    junta_to_sparse,
    l1_norm,
)
from prlab.errors import ArityTooLarge, UncoveredVariable

from oracles import bp2_walk_dict, fourier_coefficient_direct


def test_truth_table_and_eval_agree():
    f = BooleanFunction.parity(5)
    tt = f.truth_table()
    for x in range(32):
        assert (tt >> x) & 1 == x.bit_count() & 1


def test_table_cutoff():
    f = BooleanFunction.parity(25)
    with pytest.raises(ArityTooLarge):
        f.truth_table()


def test_junta_ignores_outside_coordinates():
    j = Junta(6, (1, 4), 0b0110)  # xor of the two support bits
    for x in range(64):
        expected = ((x >> 1) & 1) ^ ((x >> 4) & 1)
        assert j.eval(x) == expected


def test_xor_of_juntas():
    j1 = Junta(4, (0,), 0b10)
    j2 = Junta(4, (3,), 0b10)
    g = XorOfJuntas(4, (j1, j2))
    assert g.eval(0b1001) == 0
    assert g.eval(0b0001) == 1
    empty = XorOfJuntas(4, ())
    assert all(empty.eval(x) == 0 for x in range(16))


def test_sparse_poly_eval_and_cancellation():
    p = SparsePolyF2.make(4, [[0, 1], [2]], 0)
    assert p.eval(0b0111) == 0  # x0x1 + x2 at (1,1,1,0) = 1 + 1
    dup = SparsePolyF2.make(4, [[0, 1], [0, 1], [2]], 0)
    assert dup.monomials == frozenset({frozenset({2})})
    assert dup.degree == 1


def test_sparse_poly_empty_monomial_folds_into_constant():
    p = SparsePolyF2.make(3, [[], [0]], 0)
    assert p.constant == 1
    assert p.monomials == frozenset({frozenset({0})})


def test_set_multilinear_checks():
    p = SparsePolyF2.make(4, [[0, 1]])
    assert is_set_multilinear(p, Partition.make([{0}, {1}, {2}, {3}]))
    assert not is_set_multilinear(p, Partition.make([{0, 1}, {2, 3}]))
    q = SparsePolyF2.make(4, [[0, 1], [2]])
    assert is_set_multilinear(q, Partition.make([{0, 2}, {1}, {3}]))
    with pytest.raises(UncoveredVariable):
        is_set_multilinear(q, Partition.make([{0}, {1}]))


def test_junta_to_sparse_small_cases():
    dictator = Junta(3, (1,), 0b10)
    p = junta_to_sparse(dictator)
    assert p.monomials == frozenset({frozenset({1})}) and p.constant == 0
    and2 = Junta(4, (0, 2), 0b1000)
    p = junta_to_sparse(and2)
    assert p.monomials == frozenset({frozenset({0, 2})}) and p.constant == 0


def test_junta_to_sparse_random_agreement():
    rng = random.Random(17)
    for _ in range(30):
        j = Junta.random(8, 4, rng)
        p = junta_to_sparse(j)
        assert len(p.monomials) <= 16
        for x in range(256):
            assert p.eval(x) == j.eval(x)


def test_compose_juntas_width_closure():
    rng = random.Random(23)
    n = 16
    outer = Junta.random(3, 3, rng)
    outer = Junta(3, (0, 1, 2), outer.table)
    inners = [Junta.random(n, 2, rng) for _ in range(3)]
    composed = models.compose_juntas(outer, inners)
    assert composed.width <= 3 * 2
    for _ in range(200):
        x = rng.getrandbits(n)
        bits = junta_bits(inners, x)
        assert composed.eval(x) == (outer.table >> bits) & 1


# ---------------------------------------------------------------------------
# Branching programs


def and_program() -> BranchingProgram2:
    # Two layers, one read each: start at node 0; reach node 1 only if
    # both bits are 1.
    l0 = (BPNode((0,), 0b10), BPNode((0,), 0b10))
    l1 = (BPNode((1,), 0b00), BPNode((1,), 0b10))
    return BranchingProgram2(2, (l0, l1), start=0, accept=1)


def test_single_layer_identity_program():
    prog = BranchingProgram2(1, ((BPNode((0,), 0b10), BPNode((0,), 0b10)),))
    assert [eval_2bp(prog, x) for x in range(2)] == [0, 1]


def test_and_program_truth_table():
    prog = and_program()
    assert [eval_2bp(prog, x) for x in range(4)] == [0, 0, 0, 1]


def test_eval_matches_independent_interpreter():
    rng = random.Random(31)
    for _ in range(10):
        prog = BranchingProgram2.random(3, 5, 12, rng)
        blob = prog.to_json()
        for x in range(0, 1 << 12, 37):
            assert eval_2bp(prog, x) == bp2_walk_dict(blob, x)


def test_bp_json_round_trip():
    rng = random.Random(41)
    prog = BranchingProgram2.random(2, 4, 8, rng)
    again = BranchingProgram2.from_json(prog.to_json())
    assert again == prog


def test_decompose_dictator_reads():
    prog = and_program()
    core, juntas = decompose_2bp(prog)
    assert core.arity == 2 * prog.length
    assert len(juntas) == 2 * prog.length
    for node_layer in core.layers:
        for node in node_layer:
            assert len(node.reads) == 1
            assert node.table == 0b10
    for x in range(4):
        assert eval_2bp(prog, x) == eval_2bp(core, junta_bits(juntas, x))


def test_decompose_random_programs_exhaustive():
    rng = random.Random(53)
    for _ in range(10):
        prog = BranchingProgram2.random(3, 5, 12, rng)
        core, juntas = decompose_2bp(prog)
        for x in range(1 << 12):
            assert eval_2bp(prog, x) == eval_2bp(core, junta_bits(juntas, x))


def test_decompose_handles_repeated_reads():
    node = BPNode((2, 2), 0b1000)  # only patterns 00 and 11 are reachable
    prog = BranchingProgram2(3, ((node, node),))
    core, juntas = decompose_2bp(prog)
    assert juntas[0].support == (2,)
    for x in range(8):
        assert eval_2bp(prog, x) == eval_2bp(core, junta_bits(juntas, x))


# ---------------------------------------------------------------------------
# Fourier


def test_fourier_constant_zero():
    fe = fourier_expand(BooleanFunction.constant(3, 0))
    assert all(v == 0 for _, v in fe.items())


def test_fourier_dictator():
    fe = fourier_expand(BooleanFunction.dictator(1, 0))
    assert fe.as_dict() == {
        frozenset(): Fraction(1, 2),
        frozenset({0}): Fraction(-1, 2),
    }


def test_fourier_and2_matches_direct_oracle():
    f = BooleanFunction.from_callable(2, lambda x: int(x == 0b11))
    fe = fourier_expand(f)
    expected = {
        frozenset(): Fraction(1, 4),
        frozenset({0}): Fraction(-1, 4),
        frozenset({1}): Fraction(-1, 4),
        frozenset({0, 1}): Fraction(1, 4),
    }
    assert fe.as_dict() == expected
    for S in expected:
        direct = fourier_coefficient_direct(f.eval, 2, S)
        assert float(fe.coefficient(S)) == direct


def test_fourier_reconstruction_exact():
    rng = random.Random(61)
    f = BooleanFunction.from_table(6, rng.getrandbits(64))
    fe = fourier_expand(f)
    for x in range(64):
        assert fe.reconstruct(x) == f.eval(x)


def test_l1_examples():
    assert l1_norm(BooleanFunction.constant(4, 1)) == 1
    assert l1_norm(BooleanFunction.parity(7)) == 1
    and2 = BooleanFunction.from_callable(2, lambda x: int(x == 0b11))
    assert l1_norm(and2) == 1


def test_parseval_random_functions():
    rng = random.Random(71)
    for n in (4, 8, 12):
        f = BooleanFunction.from_table(n, rng.getrandbits(1 << n))
        lhs, rhs = models.parseval_check(f)
        assert lhs == rhs


def test_l1_bound_for_one_bit_reading_programs():
    rng = random.Random(83)
    for _ in range(50):
        t = rng.randrange(1, 9)
        n = rng.randrange(2, 11)
        prog = BranchingProgram2.random(1, t, n, rng)
        fe = fourier_expand(prog.as_function())
        # 2^n * L1 <= (t+1)/2 * 2^n, as integers.
        assert 2 * fe.l1_numerator() <= (t + 1) << n
