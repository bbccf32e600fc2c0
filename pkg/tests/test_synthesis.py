import json

import pytest
from hypothesis import given

from anseq.coloring import Coloring, ceil_log, exact_coloring, is_k_colorable, kappa
from anseq.confusion import build_confusion_graph
from anseq.core import AutomataNetwork
from anseq.errors import InputError, VerificationError
from anseq.synthesis import (
    SequentializationCertificate,
    coloring_from_sequentialization,
    respects,
    synthesize_from_coloring,
    verify_sequentialization,
)
from anseq.witnesses import gen_example1, gen_swap_network

from conftest import network_with_order

SWAP = gen_swap_network(2, 2)


def test_respects():
    assert respects((1, 2, 3), (1, 2, 3))
    assert respects((7, 8, 9, 1, 2, 3, 4, 5, 6), tuple(range(1, 7)))
    assert not respects((2, 1), (1, 2))
    ex = gen_example1()
    assert not respects(ex.v, tuple(range(1, 7)))


def test_verify_examples():
    ex = gen_example1()
    assert verify_sequentialization(ex.h, ex.f, ex.w)
    assert verify_sequentialization(ex.h, ex.g, ex.v)
    assert not any(verify_sequentialization(SWAP, SWAP, w) for w in [(1, 2), (2, 1)])
    with pytest.raises(InputError):
        verify_sequentialization(SWAP, gen_swap_network(2, 3), (1, 2))


def test_certificate_rejects_bad_pair():
    with pytest.raises(VerificationError):
        SequentializationCertificate(SWAP, SWAP, (1, 2), 0)
    with pytest.raises(InputError):
        SequentializationCertificate(SWAP, gen_example1().g, (1, 2), 0)


def test_identity_zero_extra():
    h = AutomataNetwork.identity(2, 3)
    cert = synthesize_from_coloring(h, (1, 2), Coloring((0,) * 9, 1))
    assert cert.k == 0 and cert.f == h


def test_swap_one_extra():
    g = build_confusion_graph(SWAP, (1, 2))
    cert = synthesize_from_coloring(SWAP, (1, 2), exact_coloring(g))
    assert cert.k == 1 and cert.w == (3, 1, 2)
    back = coloring_from_sequentialization(SWAP, (1, 2), cert)
    assert back.is_proper(g) and back.count == 2


def test_example1_three_extra():
    ex = gen_example1()
    u = tuple(range(1, 7))
    g = build_confusion_graph(ex.h, u)
    c = exact_coloring(g)
    assert c.count == 8
    cert = synthesize_from_coloring(ex.h, u, c)
    assert cert.k == 3 and cert.f.size == 512


def test_example1_f_read_back():
    ex = gen_example1()
    u = tuple(range(1, 7))
    cert = SequentializationCertificate(ex.h, ex.f, ex.w, 3)
    c = coloring_from_sequentialization(ex.h, u, cert)
    assert c.is_proper(build_confusion_graph(ex.h, u)) and c.count <= 8
    with pytest.raises(InputError):
        coloring_from_sequentialization(ex.h, (2, 1, 3, 4, 5, 6), cert)


def test_improper_coloring_rejected():
    with pytest.raises(InputError):
        synthesize_from_coloring(SWAP, (1, 2), Coloring((0, 0, 0, 0), 1))


def test_zero_extra_coloring_constant():
    h = AutomataNetwork.from_function(2, 2, lambda x: (x[0], x[0]))
    assert kappa(h, (1, 2)) == 0
    cert = synthesize_from_coloring(h, (1, 2), Coloring((0,) * 4, 1))
    assert coloring_from_sequentialization(h, (1, 2), cert).count == 1


def test_json_round_trip():
    ex = gen_example1()
    cert = SequentializationCertificate(ex.h, ex.g, ex.v, 1)
    data = json.loads(cert.to_json())
    assert set(data) == {"h", "f", "w", "k"}
    again = SequentializationCertificate.from_json(cert.to_json())
    assert again == cert
    data["f"]["table"][3][6] ^= 1
    with pytest.raises(VerificationError):
        SequentializationCertificate.from_dict(data)


@given(network_with_order())
def test_round_trip(hu):
    h, u = hu
    g = build_confusion_graph(h, u)
    c = exact_coloring(g)
    cert = synthesize_from_coloring(h, u, c)
    assert cert.k == ceil_log(c.count, h.q) == kappa(h, u)
    assert respects(cert.w, u)
    back = coloring_from_sequentialization(h, u, cert)
    assert back.is_proper(g) and back.count <= h.q**cert.k
    # no sequentialization with one fewer automaton: the graph has no q^(k-1)-coloring
    if cert.k:
        assert is_k_colorable(g.adjacency_bits(), h.q ** (cert.k - 1)) is None


@given(network_with_order())
def test_any_proper_coloring_works(hu):
    h, u = hu
    g = build_confusion_graph(h, u)
    # one color per configuration is always proper
    c = Coloring(tuple(range(h.size)), h.size)
    cert = synthesize_from_coloring(h, u, c)
    assert cert.k == ceil_log(h.size, h.q)
    assert coloring_from_sequentialization(h, u, cert).is_proper(g)
