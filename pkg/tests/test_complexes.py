import json
import random

import pytest

from lambdapq.algebra import make_lambda
from lambdapq.complexes import (
    BlockShapeError,
    ChainMap,
    HomSpace,
    InvalidComplex,
    NotSquareZero,
    ProjComplex,
    ProjMap,
    cone,
    decompose,
    direct_sum,
    g_vector,
    hom_complex_dims,
    hom_dim,
    iso_in_homotopy,
    minimize,
    shift,
    stalk,
)
from lambdapq.linalg import Matrix
from lambdapq.silting import make_C, random_two_term

from oracle import hom_dim_oracle


def one(v):
    return Matrix.from_flat(1, 1, [v])


def alpha_arrow(A, coeffs):
    return ProjMap(A, (1, 0), (0, 1), {A.alpha(i): one(c) for i, c in enumerate(coeffs) if c})


def beta_arrow(A, coeffs):
    return ProjMap(A, (0, 1), (1, 0), {A.beta(j): one(c) for j, c in enumerate(coeffs) if c})


def three_term(A):
    """P_1 -α-> P_2 -β-> P_1, a complex because βα = 0."""
    return ProjComplex(A, {-1: (1, 0), 0: (0, 1), 1: (1, 0)},
                       {-1: alpha_arrow(A, [1] + [0] * (A.p - 1)),
                        0: beta_arrow(A, [1] + [0] * (A.q - 1))})


@pytest.mark.parametrize("p,q", [(1, 1), (2, 1), (1, 2), (2, 2)])
def test_hom_dims_match_bruteforce_oracle(p, q):
    A = make_lambda(p, q)
    rng = random.Random(f"oracle:{p}:{q}")
    Xs = [stalk(A, (1, 0)), stalk(A, (0, 1), -1), make_C(1, A), three_term(A),
          random_two_term(A, 1, 2, rng), random_two_term(A, 2, 1, rng, kind="beta")]
    for X in Xs:
        for Y in rng.sample(Xs, 3):
            for r in (-1, 0, 1):
                want = hom_dim_oracle(X, Y, r)
                assert hom_dim(X, Y, r) == want, (X, Y, r)
                assert hom_complex_dims(X, Y, r, generic=True)[2] == want


def test_shift_sign_and_square_zero():
    A = make_lambda(2, 1)
    X = three_term(A)
    Y = shift(X, 1)
    assert Y.lo == X.lo - 1
    assert Y.diff(-2) == -X.diff(-1)
    assert shift(Y, -1).diff(-1) == X.diff(-1)
    Y.check()


def test_not_square_zero_and_bad_shapes():
    A = make_lambda(2, 1)
    # α∘β = α_1β_1 is nonzero, so this is not a complex
    with pytest.raises(NotSquareZero):
        ProjComplex(A, {-1: (0, 1), 0: (1, 0), 1: (0, 1)},
                    {-1: beta_arrow(A, [1]), 0: alpha_arrow(A, [1, 0])})
    with pytest.raises(BlockShapeError):
        ProjComplex(A, {-1: (2, 0), 0: (0, 1)}, {-1: alpha_arrow(A, [1, 1])})
    with pytest.raises(InvalidComplex):
        ProjMap(A, (1, 0), (0, 1), {A.alpha(0): Matrix.zeros(2, 2)})
    with pytest.raises(BlockShapeError):
        ProjMap.from_blocks(A, (1, 0), (0, 1), [[[0, 0, 1]]])
    # an e1 coefficient cannot map P_1 -> P_2
    with pytest.raises(BlockShapeError):
        ProjMap.from_blocks(A, (1, 0), (0, 1), [[[1] + [0] * (A.dim - 1)]])


def test_json_round_trip_and_errors():
    A = make_lambda(2, 2)
    X = direct_sum(make_C(2, A), three_term(A))
    Y = ProjComplex.loads(X.dumps())
    assert Y.terms == X.terms and Y.diffs == X.diffs
    assert json.loads(Y.dumps()) == json.loads(X.dumps())
    with pytest.raises(InvalidComplex):
        ProjComplex.from_json({"terms": {}})
    with pytest.raises(InvalidComplex):
        ProjComplex.from_json({"algebra": {"p": 2, "q": 2}, "terms": {"0": [1, 2, 3]}})


def test_cone_of_identity_is_contractible():
    A = make_lambda(2, 1)
    X = make_C(2, A)
    C = cone(ChainMap.identity(X))
    assert minimize(C).is_zero()
    assert C.span == X.span + 1


def test_minimize_keeps_homotopy_type():
    A = make_lambda(2, 2)
    X = make_C(1, A)
    # X ⊕ (P_1 -id-> P_1) minimizes back to X
    triv = ProjComplex(A, {-2: (1, 0), -1: (1, 0)}, {-2: ProjMap.identity(A, (1, 0))})
    Z = direct_sum(X, triv)
    M = minimize(Z)
    assert M.terms == X.terms
    assert M.is_radical()
    assert iso_in_homotopy(M, X)


def test_decompose_and_g_vectors():
    A = make_lambda(2, 1)
    parts = [make_C(1, A), make_C(2, A), stalk(A, (1, 0), -1)]
    found = decompose(direct_sum(*parts))
    assert sorted(g_vector(P) for P in found) == sorted(g_vector(P) for P in parts)
    assert g_vector(make_C(2, A)) == (-2, 3)
    with pytest.raises(ValueError):
        g_vector(three_term(A))


def test_iso_negative_cases():
    A = make_lambda(2, 2)
    X = ProjComplex(A, {-1: (1, 0), 0: (0, 1)}, {-1: alpha_arrow(A, [1, 0])})
    Y = ProjComplex(A, {-1: (1, 0), 0: (0, 1)}, {-1: alpha_arrow(A, [0, 1])})
    W = ProjComplex(A, {-1: (1, 0), 0: (0, 1)}, {-1: alpha_arrow(A, [2, 0])})
    assert iso_in_homotopy(X, W)
    # different points of the P^1 family of α-combinations
    assert not iso_in_homotopy(X, Y)
    assert not iso_in_homotopy(X, shift(X, 1))


def test_hom_space_coordinates_reconstruct_maps():
    A = make_lambda(2, 1)
    X, Y = make_C(1, A), make_C(2, A)
    H = HomSpace(X, Y, 0)
    assert H.dim == hom_dim_oracle(X, Y, 0)
    rng = random.Random(5)
    for _ in range(5):
        c = [rng.randint(-3, 3) for _ in range(H.dim)]
        f = H.combination(c)
        assert [int(v) for v in H.coords(f)] == c
