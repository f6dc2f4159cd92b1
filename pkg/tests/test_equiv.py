import random

import pytest

from lambdapq.algebra import make_lambda
from lambdapq.complexes import direct_sum, g_vector, hom_dim, iso_in_homotopy, minimize, shift, stalk
from lambdapq.equiv import (
    AutoPair,
    ReductionError,
    apply_automorphism,
    check_comm,
    injective_resolution_complex,
    nakayama_nu,
    omega_inverse,
    reduce_to_two_term,
    ringel_omega,
)
from lambdapq.silting import make_C, random_two_term

from oracle import hom_dim_oracle


def sample(A, seed=0):
    rng = random.Random(seed)
    out = [stalk(A, (1, 0)), stalk(A, (0, 1)), random_two_term(A, 1, 2, rng)]
    if A.p >= 2:
        out.append(make_C(2, A))
    if A.q:
        out.append(random_two_term(A, 2, 1, rng, kind="beta"))
    return out


@pytest.mark.parametrize("p,q", [(1, 1), (2, 1), (1, 2), (2, 0), (0, 2)])
def test_omega_lands_in_ringel_dual_and_inverts(p, q):
    A = make_lambda(p, q)
    for X in sample(A):
        Y = ringel_omega(X)
        assert (Y.algebra.p, Y.algebra.q) == (q, p)
        assert iso_in_homotopy(omega_inverse(Y), X)


@pytest.mark.parametrize("p,q", [(2, 1), (1, 2), (2, 2)])
def test_omega_preserves_hom_dimensions(p, q):
    A = make_lambda(p, q)
    Xs = sample(A, seed=1)
    W = [ringel_omega(X) for X in Xs]
    for i, X in enumerate(Xs):
        for j, Y in enumerate(Xs):
            for r in (-1, 0, 1):
                assert hom_dim(X, Y, r) == hom_dim(W[i], W[j], r)


@pytest.mark.parametrize("p,q", [(1, 1), (2, 1)])
def test_serre_duality_against_bruteforce(p, q):
    A = make_lambda(p, q)
    objs = [stalk(A, (1, 0)), stalk(A, (0, 1)), make_C(1, A)]
    for X in objs:
        for Y in objs:
            nY = minimize(nakayama_nu(Y))
            assert hom_dim_oracle(X, nY, 0) == hom_dim_oracle(Y, X, 0)


def test_nu_of_projectives_is_injective_resolution():
    A = make_lambda(2, 1)
    for i, mult in ((1, (1, 0)), (2, (0, 1))):
        assert iso_in_homotopy(nakayama_nu(stalk(A, mult)), injective_resolution_complex(A, i))


def test_nu_directions_are_inverse():
    A = make_lambda(2, 2)
    for X in sample(A, seed=2):
        assert iso_in_homotopy(nakayama_nu(nakayama_nu(X), "-"), X)
    with pytest.raises(ValueError):
        nakayama_nu(stalk(A, (1, 0)), "x")


def test_reduce_to_two_term_examples():
    A = make_lambda(2, 1)
    T = direct_sum(make_C(0, A), make_C(1, A))
    m, Y = reduce_to_two_term(nakayama_nu(T, "-"))
    assert m == 1
    assert iso_in_homotopy(Y, T)
    # a single projective is not tilting
    with pytest.raises(ValueError):
        reduce_to_two_term(stalk(A, (1, 0)))
    with pytest.raises(ReductionError):
        reduce_to_two_term(nakayama_nu(nakayama_nu(shift(T, 3), "-"), "-"), max_steps=1)


def test_autopair_json_and_scalar():
    phi = AutoPair.random(2, 3, seed=4)
    psi = AutoPair.from_json(phi.to_json())
    assert psi.to_json() == phi.to_json()
    assert (phi.swap().p, phi.swap().q) == (3, 2)
    A = make_lambda(2, 3)
    X = random_two_term(A, 2, 2, random.Random(0))
    assert minimize(apply_automorphism(X, AutoPair.identity(2, 3))).dumps() == minimize(X).dumps()
    assert iso_in_homotopy(apply_automorphism(X, AutoPair.scalar(2, 3, 5)), X)


def test_check_comm_and_negative_control():
    r = check_comm(AutoPair.random(2, 2, seed=1), 2, 2, seed=1)
    assert r["passed"] and set(r["results"]) == {"P1", "P2", "R_alpha", "R_beta"}
    bad = [check_comm(AutoPair.random(2, 2, seed=s), 2, 2, seed=s, partner=AutoPair.identity(2, 2))["passed"]
           for s in range(6)]
    assert not all(bad)
    with pytest.raises(ValueError):
        check_comm(AutoPair.identity(2, 1), 2, 2)


def test_rigid_brick_list_needs_beta_arrows():
    # over Λ^{p,0}, P_2 is pretilting with End = k but its g-vector (0, 1)
    # is not among P_1, P_1[1], ω(P_1), ω^{-1}(P_1)[1]
    p = 2
    A, B = make_lambda(p, 0), make_lambda(0, p)
    X = stalk(A, (0, 1))
    assert hom_dim(X, X, 0) == 1 and hom_dim(X, X, 1) == 0 and hom_dim(X, X, -1) == 0
    listed = [stalk(A, (1, 0)), stalk(A, (1, 0), -1), ringel_omega(stalk(B, (1, 0))),
              shift(omega_inverse(stalk(B, (1, 0))), 1)]
    assert g_vector(X) not in {g_vector(minimize(L)) for L in listed}
