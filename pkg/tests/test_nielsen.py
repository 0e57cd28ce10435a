import random

import pytest

from ttkit.graph import rose, tighten
from ttkit.graphmap import GraphMap, apply, power, transition_matrix
from ttkit.nielsen import (NielsenError, bcc_bound, cancellation, critical_constant, find_inps,
                           fixed_germs, has_pnp, path_length, verify_descriptor)
from ttkit.nielsen_oracle import descriptor_keys, oracle_with_periods
from ttkit.pf import is_primitive, pf_eigen
from ttkit.traintrack import is_train_track, rotationless_power
from ttkit.verdict import Verdict

from conftest import random_positive_automorphism, random_word


def test_psi_has_no_pnp(psi_map):
    res = find_inps(psi_map)
    assert res.status is Verdict.NO
    assert res.descriptors == ()
    assert res.periods == (1, 2, 3, 4, 5, 6)


def test_fibonacci_has_one_inp_orbit(fib_map):
    res = find_inps(fib_map)
    gr = fib_map.graph
    assert res.status is Verdict.YES
    assert len(res.orbits) == 1
    (d,) = res.descriptors
    assert d.period == 2
    assert sorted(gr.format(l.edges) for l in d.legs) == ["ab", "ba"]
    assert gr.format(d.rho(gr)) == "BAba"
    assert not verify_descriptor(fib_map, d, pf_eigen(transition_matrix(fib_map)))


def test_fibonacci_inp_is_fixed_by_the_square(fib_map):
    d = find_inps(fib_map).descriptors[0]
    gr = fib_map.graph
    rho = d.rho(gr)
    assert apply(power(fib_map, 2), rho) == rho
    assert apply(fib_map, rho) != rho


def test_primary_route_matches_oracle_on_fixtures(psi_map, fib_map):
    for g in (psi_map, fib_map):
        pf = pf_eigen(transition_matrix(g))
        res = find_inps(g, pf=pf)
        assert oracle_with_periods(g, pf, res.critical, rotationless_power(g)) == descriptor_keys(res)


def small_random_train_tracks(seed: int, count: int):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        rank = rng.choice((2, 2, 3))
        letters = "abc"[:rank]
        words = {c: "".join(rng.choice(letters + letters.upper()) for _ in range(rng.randint(1, 4)))
                 for c in letters}
        try:
            g = GraphMap.from_words(rose(rank), words)
        except ValueError:
            continue
        m = transition_matrix(g)
        if not is_train_track(g) or not is_primitive(m):
            continue
        pf = pf_eigen(m)
        if pf.lam > 1.0001:
            out.append((g, pf))
    return out


def test_primary_route_matches_oracle_on_random_maps():
    found = 0
    for g, pf in small_random_train_tracks(17, 60):
        res = find_inps(g, pf=pf)
        if res.status is Verdict.INCONCLUSIVE:
            continue
        oracle = oracle_with_periods(g, pf, res.critical, rotationless_power(g))
        assert oracle == descriptor_keys(res), str(g)
        found += bool(oracle)
    assert found > 0


def test_every_descriptor_reverifies():
    for g, pf in small_random_train_tracks(23, 40):
        res = find_inps(g, pf=pf)
        for d in res.descriptors:
            assert verify_descriptor(g, d, pf) == []


def test_budget_exhaustion_is_inconclusive(psi_map):
    res = find_inps(psi_map, budget=50)
    assert res.status is Verdict.INCONCLUSIVE
    assert "budget" in res.reason
    assert find_inps(psi_map, budget=0).status is Verdict.INCONCLUSIVE


def test_budget_from_environment(monkeypatch, psi_map):
    monkeypatch.setenv("TTKIT_BUDGET", "40")
    assert has_pnp(psi_map) is Verdict.INCONCLUSIVE
    monkeypatch.setenv("TTKIT_BUDGET", "not a number")
    assert has_pnp(psi_map) is Verdict.NO


def test_preconditions():
    r = rose(2)
    with pytest.raises(NielsenError, match="train track"):
        find_inps(GraphMap.from_words(r, {"a": "ab", "b": "A"}))
    with pytest.raises(NielsenError, match="primitive"):
        find_inps(GraphMap.from_words(r, {"a": "ab", "b": "b"}))


def test_fixed_germs_of_fibonacci_square(fib_map):
    h = power(fib_map, 2)
    pf = pf_eigen(transition_matrix(h))
    germs = fixed_germs(h, pf.lengths, pf.lam)
    # h(a) = bab, h(b) = babba: the fixed directions a and B plus interior fixed points
    assert any(gm.kind == "vertex" for gm in germs)
    assert all(0 <= gm.t for gm in germs)


def test_critical_constant_of_psi(psi_map):
    pf = pf_eigen(transition_matrix(psi_map))
    b = bcc_bound(psi_map, pf)
    assert b.value == pytest.approx(max(pf.lam / (pf.lam - 1), pf.lam))
    assert critical_constant(b) == pytest.approx(25.127, abs=1e-3)


def sampled_cancellations(g, pf, rng, samples):
    gr = g.graph
    for _ in range(samples):
        alpha = tighten(gr, random_word(rng, gr, rng.randint(1, 8)))
        beta = tighten(gr, random_word(rng, gr, rng.randint(1, 8)))
        if not alpha or not beta or tighten(gr, alpha + beta) != alpha + beta:
            continue
        yield cancellation(g, pf.lengths, alpha, beta)


@pytest.mark.parametrize("power_k", [1, 2, 5])
def test_bcc_never_violated(psi_map, fib_map, power_k):
    rng = random.Random(power_k)
    for base in (psi_map, fib_map):
        g = power(base, power_k)
        pf = pf_eigen(transition_matrix(g))
        bound = bcc_bound(g, pf).value
        assert max(sampled_cancellations(g, pf, rng, 400)) <= bound + 1e-9


def test_cancellation_of_a_legal_concatenation_is_zero(psi_map):
    pf = pf_eigen(transition_matrix(psi_map))
    gr = psi_map.graph
    assert cancellation(psi_map, pf.lengths, gr.word("ab"), gr.word("c")) == pytest.approx(0.0, abs=1e-12)
    assert path_length(pf.lengths, gr, gr.word("abc")) == pytest.approx(1.0)


def test_bcc_on_random_automorphisms():
    rng = random.Random(8)
    checked = 0
    while checked < 30:
        g = random_positive_automorphism(rng, rng.randint(2, 3))
        m = transition_matrix(g)
        if not is_primitive(m):
            continue
        pf = pf_eigen(m)
        bound = bcc_bound(g, pf).value
        assert all(c <= bound + 1e-9 for c in sampled_cancellations(g, pf, rng, 100))
        checked += 1
