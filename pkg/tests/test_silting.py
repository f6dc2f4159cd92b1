import random

import pytest
import sympy

from lambdapq.algebra import make_lambda
from lambdapq.complexes import g_vector, hom_dim, iso_in_homotopy, stalk
from lambdapq.silting import (
    FanError,
    NotTwoTerm,
    closed_form_pairs,
    det2,
    explore,
    fan,
    gaps_contain_gray,
    lambda_node,
    make_C,
    make_node,
    mutate,
    random_two_term,
    recursion_dims,
    silting_flags,
    build_tower,
    tower_checks,
)

from oracle import hom_dim_oracle


def test_recursion_dims_closed_forms():
    # p = 2: a_m = m + 1;  p = 3: a_m = F_{2m+2};  p = 1: period 6
    assert recursion_dims(2, 8) == list(range(1, 10))
    assert recursion_dims(3, 8) == [int(sympy.fibonacci(2 * m + 2)) for m in range(9)]
    assert recursion_dims(1, 6) == [1, 1, 0, -1, -1, 0, 1]
    # p = 4: a_m = U_m(2), Chebyshev of the second kind
    x = sympy.Symbol("x")
    assert recursion_dims(4, 6) == [int(sympy.chebyshevu(m, x).subs(x, 2)) for m in range(7)]


def test_tower_small_depths():
    T = build_tower(2, 4)
    assert T.dims == (1, 2, 3, 4, 5)
    c = tower_checks(T)
    assert c["quadratic"] and c["pi_iota_zero"] and all(c["invertible"].values())
    with pytest.raises(ValueError):
        build_tower(1, 3)


@pytest.mark.parametrize("p,q", [(2, 1), (3, 2)])
def test_c_m_g_vectors_and_rigidity(p, q):
    A = make_lambda(p, q)
    a = [0] + recursion_dims(p, 5)
    for m in range(0, 4):
        C = make_C(m, A)
        assert g_vector(C) == (-a[m], a[m + 1])
        assert hom_dim(C, C, 1) == 0
    assert hom_dim(make_C(1, A), make_C(1, A), 0) == hom_dim_oracle(make_C(1, A), make_C(1, A), 0)


def test_lambda_node_flags():
    A = make_lambda(2, 2)
    n = lambda_node(A)
    assert n.silting and n.tilting and n.g == ((1, 0), (0, 1))
    f = silting_flags(n.complex())
    assert f["tilting"] and len(f["summands"]) == 2
    # a single indecomposable is presilting but not silting
    g = silting_flags(stalk(A, (1, 0)))
    assert g["presilting"] and not g["silting"]


def test_mutation_round_trip_and_direction_error():
    A = make_lambda(2, 1)
    n0 = lambda_node(A)
    n1 = mutate(n0, 0, "+")
    assert set(n1.g) == {(0, 1), (-1, 2)}
    back = mutate(n1, 0, "-")
    assert set(back.g) == set(n0.g)
    assert iso_in_homotopy(back.summands[0], n0.summands[0])
    # mutating P_2 down from Λ leaves the two-term range
    with pytest.raises(NotTwoTerm):
        mutate(n0, 1, "-")


def test_walk_counts_small_cases():
    assert len(explore(1, 1, 6).nodes) == 6
    w = explore(2, 0, 4)
    assert w.keys() == set(closed_form_pairs(2, 0, 4))
    for n in w.nodes:
        assert abs(det2(*n.g)) == 1


def test_fan_detects_overlap():
    ok = fan([((1, 0), (0, 1)), ((0, 1), (-1, 0))])
    assert len(ok["arcs"]) == 2 and len(ok["gaps"]) == 1
    with pytest.raises(FanError):
        fan([((1, 0), (0, 1)), ((1, 1), (0, 1))])
    with pytest.raises(FanError):
        fan([((1, 0), (2, 0))])


def test_gray_gap_witness():
    w = explore(2, 2, 5)
    geo = fan(w.nodes)
    assert gaps_contain_gray(geo, 2, 2)
    assert not gaps_contain_gray({"gaps": []}, 2, 2)


def test_random_two_term_shapes():
    A = make_lambda(2, 3)
    rng = random.Random(0)
    X = random_two_term(A, 2, 3, rng)
    Y = random_two_term(A, 2, 3, rng, kind="beta")
    assert X.terms == {-1: (2, 0), 0: (0, 3)}
    assert Y.terms == {-1: (0, 2), 0: (3, 0)}
    assert make_node(make_C(0, A), make_C(1, A)).tilting
