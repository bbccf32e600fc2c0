import itertools

import pytest
from hypothesis import given, strategies as st

from anseq.coloring import exact_chromatic_number, kappa
from anseq.confusion import build_confusion_graph
from anseq.core import digits_matrix, omega
from anseq.errors import DecodeError, InputError, VerificationError
from anseq.witnesses import (
    SubsetEncoding,
    build_h_from_encoding,
    clique_witness,
    decode_km2,
    decode_kms,
    encode_km2,
    encode_kms,
    gen_example1,
    gen_swap_network,
    kms_anchor,
    kms_length,
    kms_prefix_balance,
    kms_split,
    kms_trace,
)


@pytest.mark.parametrize("n,q", [(2, 2), (3, 2), (4, 2), (2, 3), (5, 3), (4, 3)])
def test_swap_kappa_and_clique(n, q):
    h = gen_swap_network(n, q)
    u = tuple(range(1, n + 1))
    assert kappa(h, u) == n // 2
    assert len(clique_witness(h, u)) == q ** (n // 2)


def test_swap_is_involution():
    h = gen_swap_network(5, 2)
    assert (h.table[h.table] == h.identity(5, 2).table).all()
    with pytest.raises(InputError):
        gen_swap_network(1, 2)


def test_swap_clique_exactly_when_kappa_full():
    # orders that update a pair back to back need fewer extra automata
    h = gen_swap_network(4, 2)
    for u in itertools.permutations(range(1, 5)):
        if kappa(h, u) == 2:
            assert len(clique_witness(h, u)) == 4
        else:
            with pytest.raises(VerificationError):
                clique_witness(h, u)


def test_example1_shape():
    ex = gen_example1()
    assert (ex.h.n, ex.f.n, ex.g.n) == (6, 9, 7)
    assert ex.h == gen_swap_network(6, 2)
    ex3 = gen_example1(3)
    assert ex3.g.q == 3


def test_km2_small():
    assert encode_km2(1, {1}) == (0, 1, 0)
    assert encode_km2(1, {2}) == (0, 0, 1)
    assert decode_km2(1, (1, 1, 0)) == {1}
    with pytest.raises(InputError):
        encode_km2(2, {1})
    with pytest.raises(InputError):
        encode_km2(1, {3})


ENCODINGS = [SubsetEncoding.km2(k, q) for k in (1, 2, 3) for q in (2, 3)] + [
    SubsetEncoding.kms(k, q) for k in (1, 2, 3) for q in (4, 5)
]


@pytest.mark.parametrize("enc", ENCODINGS, ids=lambda e: f"{e.family}-k{e.k}-q{e.q}")
def test_encoding_round_trip_and_disjoint(enc):
    seen = set()
    for E in enc.subsets():
        code = enc.code_set(E)
        assert len(code) == enc.q**enc.k
        assert seen.isdisjoint(code)
        seen.update(code)
        for fill in itertools.product(range(enc.q), repeat=enc.k):
            x = list(enc.encode(E))
            for p, d in zip(enc.positions(E), fill):
                x[p] = d
            assert enc.decode(x) == E


def test_kms_length():
    assert kms_length(4, 4) == 10
    assert kms_length(1, 4) == 3
    assert kms_length(3, 5) == 8
    with pytest.raises(InputError):
        SubsetEncoding.kms(2, 3)


def test_kms_worked_example():
    E = {2, 4, 5, 6}
    assert kms_prefix_balance(4, E) == [-1, -2, -1, -2, -1, 0, 1, 0]
    assert kms_anchor(4, E) == (6, 1)
    sp = kms_split(4, E)
    assert sp.E0 == {2, 4} and sp.E1 == (5, 6)
    assert sp.Ebar0 == {1, 3} and sp.Ebar1 == (7, 0)
    code = encode_kms(4, 4, E)
    assert [code[i] for i in range(8) if i not in E] == [3, 1, 0, 2]
    assert code[8:] == (2, 1)
    trace = kms_trace(4, 4, code)
    assert len(trace) == 9
    assert trace[0][4:] == (7, 0)
    I0, I1, Ib0, Ib1, cursor, mode = trace[-1]
    assert I0 | I1 == E and Ib0 | Ib1 == {0, 1, 3, 7}
    assert cursor == 7
    assert decode_kms(4, 4, code) == E


def test_kms_anchor_is_not_last_block_position():
    # the anchor maximizes the balance, so the element after it is never in E
    for k in (1, 2, 3, 4):
        for E in itertools.combinations(range(2 * k), k):
            m, _ = kms_anchor(k, E)
            assert (m + 1) % (2 * k) not in E


def test_kms_decode_rejects_bad_input():
    with pytest.raises(DecodeError):
        decode_kms(2, 4, (0, 0, 0, 0, 3))  # anchor 3, but the block matches no encoding
    with pytest.raises(DecodeError):
        decode_kms(1, 4, (0, 0, 3))  # anchor outside the block
    with pytest.raises(DecodeError):
        decode_kms(2, 4, (0, 0, 0))


def test_decode_rejects_everything_outside_code_sets():
    for enc in [SubsetEncoding.km2(2, 2), SubsetEncoding.kms(2, 4)]:
        covered = set()
        for E in enc.subsets():
            covered.update(enc.code_set(E))
        digits = digits_matrix(enc.n, enc.q)
        for idx in range(enc.q**enc.n):
            if idx in covered:
                continue
            with pytest.raises(DecodeError):
                enc.decode(digits[idx])


@given(st.integers(1, 4).flatmap(lambda k: st.tuples(st.just(k), st.sets(st.integers(0, 2 * k - 1), min_size=k, max_size=k))))
def test_kms_split_partitions(kE):
    k, E = kE
    sp = kms_split(k, E)
    assert sp.E0 | set(sp.E1) == E
    assert sp.Ebar0 | set(sp.Ebar1) == set(range(2 * k)) - E
    assert len(sp.E1) == len(sp.Ebar1)
    assert len(sp.E0) == len(sp.Ebar0)


@pytest.mark.parametrize("enc", [SubsetEncoding.km2(1, 2), SubsetEncoding.km2(1, 3), SubsetEncoding.kms(1, 4)],
                         ids=["km2-q2", "km2-q3", "kms-q4"])
def test_lower_bound_chain(enc):
    h = build_h_from_encoding(enc)
    for u in itertools.permutations(range(1, enc.n + 1)):
        clique = clique_witness(h, u, enc)
        assert len(clique) == enc.q**enc.k
        assert kappa(h, u) >= enc.k


def test_km2_k1_omega_and_chromatic():
    h = build_h_from_encoding(SubsetEncoding.km2(1, 2))
    assert omega(h) == 3
    g = build_confusion_graph(h, (1, 2, 3))
    assert exact_chromatic_number(g) >= 2


def test_km2_padding():
    enc = SubsetEncoding.km2(1, 2, n=4)
    assert enc.encode({1}) == (0, 1, 0, 0)
    h = build_h_from_encoding(enc)
    assert h.n == 4
    with pytest.raises(InputError):
        SubsetEncoding.km2(2, 2, n=5)


@pytest.mark.parametrize("k", [4, 5, 6])
def test_km2_round_trip_larger_k(k):
    # the bit convention of the scan is pinned down by this round trip
    enc = SubsetEncoding.km2(k, 2)
    for E in enc.subsets():
        base = list(enc.encode(E))
        for fill in itertools.product((0, 1), repeat=k):
            x = list(base)
            for p, d in zip(enc.positions(E), fill):
                x[p] = d
            assert decode_km2(k, x) == E
