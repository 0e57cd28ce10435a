import math
import random

import numpy as np
import pytest
from hypothesis import given, settings

from ttkit.graphmap import power, transition_matrix
from ttkit.nielsen import path_length
from ttkit.pf import (PFError, char_poly, discreteness_defect, irreducible_factors, is_irreducible,
                      is_primitive, pf_eigen, translation_length)

from conftest import positive_automorphisms, random_positive_automorphism


def plastic_number() -> float:
    # independent oracle: the real root of x^3 - x - 1 by bisection
    lo, hi = 1.0, 2.0
    for _ in range(200):
        mid = (lo + hi) / 2
        lo, hi = (mid, hi) if mid ** 3 - mid - 1 < 0 else (lo, mid)
    return lo


def test_psi_eigenvalue_is_plastic_number(psi_map):
    pf = pf_eigen(transition_matrix(psi_map))
    assert pf.lam == pytest.approx(plastic_number(), abs=1e-12)
    assert pf.char_poly == (1, 0, -1, -1)
    assert pf.min_poly == (1, 0, -1, -1)
    assert pf.root_certified
    assert pf.residual < 1e-9


def test_fibonacci_eigenvalue_is_golden_ratio(fib_map):
    pf = pf_eigen(transition_matrix(fib_map))
    assert pf.lam == pytest.approx((1 + math.sqrt(5)) / 2, abs=1e-12)
    assert pf.lengths[1] / pf.lengths[0] == pytest.approx(pf.lam)


def test_lengths_are_stretched_by_lambda(psi_map):
    pf = pf_eigen(transition_matrix(psi_map))
    gr = psi_map.graph
    for h in gr.edges:
        assert path_length(pf.lengths, gr, psi_map.edge_image[h]) == pytest.approx(
            pf.lam * pf.lengths[gr.edge_index(h)], rel=1e-12)
    assert pf.volume == pytest.approx(1.0)


def test_primitivity_and_irreducibility():
    perm = ((0, 1), (1, 0))
    assert is_irreducible(perm) and not is_primitive(perm)
    upper = ((1, 1), (0, 1))
    assert not is_irreducible(upper) and not is_primitive(upper)
    assert is_primitive(((0, 1), (1, 1)))
    with pytest.raises(PFError):
        pf_eigen(perm)


def test_negative_entries_rejected():
    with pytest.raises(PFError):
        is_primitive(((1, -1), (1, 1)))


def test_char_poly_factors():
    # [[2,1],[1,2]] has eigenvalues 1 and 3
    assert char_poly(((2, 1), (1, 2))) == (1, -4, 3)
    assert sorted(irreducible_factors((1, -4, 3))) == [(1, -3), (1, -1)]
    pf = pf_eigen(((2, 1), (1, 2)))
    assert pf.min_poly == (1, -3)
    assert pf.lam == pytest.approx(3.0, abs=1e-12)


def test_eigenvalue_matches_numpy_on_random_primitive_matrices():
    rng = random.Random(5)
    checked = 0
    while checked < 100:
        g = random_positive_automorphism(rng, rng.randint(2, 4))
        m = transition_matrix(g)
        if not is_primitive(m):
            continue
        oracle = max(abs(x) for x in np.linalg.eigvals(np.array(m, dtype=float)))
        assert pf_eigen(m).lam == pytest.approx(oracle, rel=1e-9)
        checked += 1


@settings(max_examples=100, deadline=None)
@given(positive_automorphisms())
def test_eigenvalue_of_power(g):
    m = transition_matrix(g)
    if not is_primitive(m):
        return
    lam = pf_eigen(m).lam
    for k in (2, 3):
        assert pf_eigen(transition_matrix(power(g, k))).lam == pytest.approx(lam ** k, abs=k * 1e-9 * lam ** k)


def test_translation_lengths(psi_map):
    pf = pf_eigen(transition_matrix(psi_map))
    t = translation_length(pf, 13)
    assert t.rho == pytest.approx(13 * math.log(plastic_number()))
    assert (t + -translation_length(pf, 3)).k == 10
    assert discreteness_defect(t.rho, pf.log_lambda) < 1e-12
    assert discreteness_defect(0.5 * pf.log_lambda, pf.log_lambda) == pytest.approx(0.5)
