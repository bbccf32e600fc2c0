import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from anseq.coloring import kappa, kappa_min
from anseq.core import AutomataNetwork, omega
from anseq.errors import InputError, ResourceError
from anseq.procedural import (
    InstructionProgram,
    _SliceSearch,
    coloring_from_program,
    computes,
    ignore_unwritten,
    min_program_search,
    procedural_complexity_star,
    program_from_certificate,
    program_table,
    run_program,
    shortest_program,
)
from anseq.synthesis import SequentializationCertificate
from anseq.witnesses import gen_example1, gen_swap_network

SWAP = gen_swap_network(2, 2)


def xor_rule(m, q=2):
    z = np.arange(q**m)
    return (z % q + (z // q) % q) % q


def test_xor_swap_program():
    # three xor steps swap two bits
    p = InstructionProgram(2, 2, ((1, xor_rule(2)), (2, xor_rule(2)), (1, xor_rule(2))))
    assert [run_program(p, z) for z in range(4)] == [0, 2, 1, 3]
    assert computes(p, SWAP)
    assert len(p) == 3 and p.registers == [1, 2, 1]


def test_empty_program_is_identity():
    p = InstructionProgram(3, 2, ())
    assert list(program_table(p)) == list(range(8))
    assert computes(p, AutomataNetwork.identity(2, 2))
    assert computes(p, AutomataNetwork.identity(3, 2))
    assert not computes(p, SWAP)


def test_bad_instructions():
    with pytest.raises(InputError):
        InstructionProgram(2, 2, ((3, xor_rule(2)),))
    with pytest.raises(InputError):
        InstructionProgram(2, 2, ((1, [0, 1, 2, 0]),))
    with pytest.raises(InputError):
        InstructionProgram(2, 2, ((1, [0, 1]),))
    with pytest.raises(InputError):
        run_program(InstructionProgram(2, 2, ()), 4)


@pytest.mark.parametrize("m", [2, 3])
def test_swap_needs_three_steps(m):
    assert min_program_search(SWAP, m, 6) == 3
    p = shortest_program(SWAP, m, 6)
    assert len(p) == 3 and computes(p, SWAP)


def test_search_cutoff():
    assert min_program_search(SWAP, 2, 2) is None
    assert shortest_program(SWAP, 2, 2) is None


def test_identity_length_zero():
    assert min_program_search(AutomataNetwork.identity(2, 3), 2, 3) == 0
    assert procedural_complexity_star(AutomataNetwork.identity(3, 2)) == 0


def test_example1_programs():
    ex = gen_example1()
    pg = program_from_certificate(SequentializationCertificate(ex.h, ex.g, ex.v, 1))
    assert len(pg) == 7 and pg.m == 7
    pf = program_from_certificate(SequentializationCertificate(ex.h, ex.f, ex.w, 3))
    assert len(pf) == 9


def test_example1_star():
    ex = gen_example1()
    assert procedural_complexity_star(ex.h) == omega(ex.h) + 1 == 7


def test_certificate_program_skips_trivial_coordinates():
    h = AutomataNetwork.from_function(3, 2, lambda x: (x[1], x[0], x[2]))
    cert = SequentializationCertificate(h, *_extend(h))
    p = program_from_certificate(cert)
    assert 3 not in p.registers and len(p) == 3


def _extend(h):
    # one extra register copying x1 first, then (1, 2, 3)
    f = AutomataNetwork.from_function(4, 2, lambda y: (y[1], y[3], y[2], y[0]))
    return f, (4, 1, 2, 3), 1


def test_coloring_from_xor_program():
    p = InstructionProgram(2, 2, ((1, xor_rule(2)), (2, xor_rule(2)), (1, xor_rule(2))))
    order, c = coloring_from_program(SWAP, p)
    assert order == (2, 1)
    assert c.count <= 2


def test_coloring_from_program_rejects_wrong_program():
    with pytest.raises(InputError):
        coloring_from_program(SWAP, InstructionProgram(2, 2, ()))


def test_resource_guards():
    with pytest.raises(ResourceError):
        _SliceSearch(3, 2, 13)
    with pytest.raises(ResourceError):
        min_program_search(gen_example1().h, 7, 7)
    with pytest.raises(InputError):
        _SliceSearch(3, 2, 2)


tables = st.lists(st.integers(0, 3), min_size=4, max_size=4).map(lambda t: AutomataNetwork(2, 2, t))


@settings(max_examples=25)
@given(tables)
def test_search_matches_star(h):
    # the optimum over register counts equals Omega + kappa_min, and no m does better
    star = procedural_complexity_star(h)
    m_opt = h.n + kappa_min(h)[0]
    assert min_program_search(h, m_opt, star) == star
    for m in (2, 3):
        found = min_program_search(h, m, star)
        assert found is None or found >= star


@settings(max_examples=25)
@given(tables)
def test_program_coloring_direction(h):
    star = procedural_complexity_star(h)
    p = shortest_program(h, h.n + kappa_min(h)[0], star)
    order, c = coloring_from_program(h, p)
    finals = len(set(order) & set(p.registers))
    assert c.count <= 2 ** (len(p) - finals)
    assert kappa(h, order) <= len(p) - finals


def test_extras_must_not_leak():
    # copy register 3 into register 1: right only when the extra starts at 0
    z = np.arange(8)
    rule = (z // 4) % 2
    h = AutomataNetwork.from_function(2, 2, lambda x: (0, x[1]))
    p = InstructionProgram(3, 2, ((1, rule),))
    assert computes(p, h, zero_extra=True)
    assert not computes(p, h)
    assert computes(ignore_unwritten(p, 2), h)


@settings(max_examples=25)
@given(tables)
def test_search_programs_work_for_any_extra_contents(h):
    p = shortest_program(h, 3, procedural_complexity_star(h))
    assert computes(p, h) and computes(p, h, zero_extra=True)
