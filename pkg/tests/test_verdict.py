from hypothesis import given, strategies as st

from ttkit.verdict import Verdict, all_of, negate

verdicts = st.sampled_from(list(Verdict))


def test_of_and_str():
    assert Verdict.of(True) is Verdict.YES
    assert str(Verdict.INCONCLUSIVE) == "inconclusive"


def test_all_of_is_kleene_and():
    assert all_of([Verdict.YES, True]) is Verdict.YES
    assert all_of([Verdict.YES, Verdict.INCONCLUSIVE]) is Verdict.INCONCLUSIVE
    assert all_of([Verdict.INCONCLUSIVE, False]) is Verdict.NO


@given(verdicts)
def test_negate_is_an_involution(v):
    assert negate(negate(v)) is v


@given(st.lists(verdicts, max_size=5))
def test_all_of_order_independent(vs):
    assert all_of(vs) is all_of(list(reversed(vs)))
