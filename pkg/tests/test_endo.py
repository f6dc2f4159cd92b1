import pytest

from lambdapq.algebra import make_lambda
from lambdapq.complexes import stalk
from lambdapq.endo import compare, end_algebra, hom_dims_of, make_lambda_m, present
from lambdapq.silting import make_C, recursion_dims

from oracle import hom_dim_oracle


@pytest.mark.parametrize("p,q", [(1, 1), (2, 3), (3, 0)])
def test_presentation_of_lambda(p, q):
    P = present(make_lambda(p, q))
    assert P.arrow_counts()[(1, 2)] == p
    assert P.arrow_counts()[(2, 1)] == q
    assert P.relation_dim == p * q
    assert P.quadratic


def test_end_of_regular_module_is_lambda():
    A = make_lambda(2, 3)
    E = end_algebra([stalk(A, (1, 0)), stalk(A, (0, 1))])
    assert E.dim == A.dim
    assert hom_dims_of(E) == hom_dims_of(A)


def test_end_dims_match_bruteforce():
    A = make_lambda(2, 1)
    parts = [make_C(0, A), make_C(1, A)]
    E = end_algebra(parts)
    want = sum(hom_dim_oracle(X, Y, 0) for X in parts for Y in parts)
    assert E.dim == want == 19


@pytest.mark.parametrize("p,q,m", [(2, 1, 1), (2, 2, 2), (3, 1, 1)])
def test_lambda_m_dimension_formula(p, q, m):
    a = [0] + recursion_dims(p, m + 2)
    am = lambda k: a[k + 1]  # noqa: E731
    want = 2 + p + q * (am(m + 1) * am(m) + am(m) ** 2 + am(m + 1) * am(m - 1) + am(m) * am(m - 1))
    L = make_lambda_m(p, q, m)
    assert L.dim == want
    L.algebra.check()


def test_compare_detects_mismatch():
    A = make_lambda(2, 1)
    E = end_algebra([make_C(0, A), make_C(1, A)])
    assert compare(E, make_lambda_m(2, 1, 1))["match"]
    r = compare(E, make_lambda_m(2, 1, 2))
    assert not r["match"] and r["mismatches"]


def test_end_algebra_records_presilting_flag():
    A = make_lambda(2, 1)
    assert end_algebra([make_C(0, A), make_C(1, A)]).presilting
    E = end_algebra([stalk(A, (1, 0)), stalk(A, (1, 0), -1)])
    assert not E.presilting
    with pytest.raises(ValueError):
        end_algebra([])
