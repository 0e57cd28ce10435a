import pytest
from hypothesis import given, settings, strategies as st

from ttkit.gl2 import (A, B, ENTRY_BOUND, GL2Error, I, IntMat2, P, box, centralizes, commensurates,
                       conj, enumerate_box, example1_narrative, in_cyclic, normalizes)
from ttkit.verdict import Verdict

gl2_elements = st.sampled_from(list(box(3)))


def test_basic_arithmetic():
    assert A ** 2 == B
    assert A.det == -1 and B.det == 1
    assert A @ A.inv() == I
    assert P ** 4 == I and P ** 2 == -I
    assert A ** -3 == (A.inv()) ** 3


def test_large_powers_are_exact():
    m = A ** 200
    assert m.b == 280571172992510140037611932413038677189525
    assert m.det == 1


def test_non_unimodular_inverse_rejected():
    with pytest.raises(GL2Error):
        IntMat2(2, 0, 0, 1).inv()


def test_in_cyclic():
    assert in_cyclic(A ** 7, A) == 7
    assert in_cyclic(A ** -4, A) == -4
    assert in_cyclic(-(A ** 3), A) is None
    assert in_cyclic(-(A ** 3), A, up_to_sign=True) == 3
    assert in_cyclic(P, A) is None
    with pytest.raises(GL2Error):
        in_cyclic(A, P)


def test_the_conjugation_identities():
    assert conj(P, A) == -A.inv()
    assert conj(P, A ** 2) == A ** -2
    assert normalizes(P, A).verdict is Verdict.NO
    assert normalizes(P, A, 2).verdict is Verdict.YES
    res = commensurates(P, A)
    assert res.verdict is Verdict.YES and res.witness == (2, -2)


def test_commensurator_no_certificate():
    g = IntMat2(1, 1, 0, 1)
    res = commensurates(g, A)
    assert res.verdict is Verdict.NO
    assert "does not commute" in res.note


def test_centralizer():
    assert centralizes(A, A) and centralizes(-I, A)
    assert not centralizes(P, A)


def test_box_enumeration():
    rep = enumerate_box()
    assert rep.box_size == len(list(box(ENTRY_BOUND))) == 616
    assert rep.centralizer_matches
    assert len(rep.centralizing) == 18
    assert rep.cosets == 2 and rep.inconclusive == ()
    assert P in rep.commensurating
    assert rep.normalizes_square


def test_narrative_mentions_witnesses():
    text = "\n".join(example1_narrative())
    assert "(n, m) = (2, -2)" in text
    assert "616 elements" in text


@settings(max_examples=200)
@given(gl2_elements, gl2_elements)
def test_conjugation_is_a_homomorphism(g, h):
    assert conj(g, A @ B) == conj(g, A) @ conj(g, B)
    assert conj(g @ h, A) == conj(g, conj(h, A))
    assert (g @ h).det == g.det * h.det


@settings(max_examples=200)
@given(gl2_elements)
def test_centralizing_implies_commensurating(g):
    if centralizes(g, A):
        assert commensurates(g, A).verdict is Verdict.YES
