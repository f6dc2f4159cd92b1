from fractions import Fraction
from itertools import product

import pytest

from lambdapq.algebra import (
    cartan_matrix,
    find_idempotent,
    injective_module,
    make_lambda,
    projective_module,
    quasi_hereditary_data,
    radical,
    simple_module,
)

PQ = [(1, 1), (2, 1), (1, 2), (2, 2), (3, 2), (2, 0), (0, 3)]


def path_words(p, q):
    """Basis of kQ/(β α) as arrow words written in multiplication order, with
    (target, source) in the e_t x e_s convention."""
    words = [((), (1, 1)), ((), (2, 2))]
    words += [((f"a{i}",), (2, 1)) for i in range(p)]
    words += [((f"b{j}",), (1, 2)) for j in range(q)]
    words += [((f"a{i}", f"b{j}"), (2, 2)) for i in range(p) for j in range(q)]
    return words


def word_product(u, v):
    (wu, (tu, su)), (wv, (tv, sv)) = u, v
    if su != tv:
        return None
    w = wu + wv
    # the only relation: a β followed by an α vanishes
    if any(x[0] == "b" and y[0] == "a" for x, y in zip(w, w[1:])):
        return None
    return w, (tu, sv)


@pytest.mark.parametrize("p,q", PQ)
def test_structure_constants_match_path_oracle(p, q):
    A = make_lambda(p, q)
    words = path_words(p, q)
    assert A.dim == len(words) == 2 + p + q + p * q
    assert list(A.sides) == [ts for _, ts in words]
    index = {w: k for k, w in enumerate(words)}
    for i, j in product(range(A.dim), repeat=2):
        got = A.mult(A.basis_vector(i), A.basis_vector(j))
        w = word_product(words[i], words[j])
        want = [Fraction(0)] * A.dim
        if w is not None:
            want[index[w]] = Fraction(1)
        assert list(got) == want, (A.labels[i], A.labels[j])


@pytest.mark.parametrize("p,q", PQ)
def test_cartan_radical_and_modules(p, q):
    A = make_lambda(p, q)
    A.check()
    assert cartan_matrix(A) == [[1, q], [p, 1 + p * q]]
    assert radical(A).cols == A.dim - 2
    assert projective_module(A, 1).dim_vector == (1, q)
    assert projective_module(A, 2).dim_vector == (p, 1 + p * q)
    assert injective_module(A, 1).dim_vector == (1, p)
    assert injective_module(A, 2).dim_vector == (q, 1 + p * q)
    assert simple_module(A, 1).dim_vector == (1, 0)


def test_quasi_hereditary_dimension_vectors():
    A = make_lambda(2, 3)
    qh = quasi_hereditary_data(A)
    assert qh["standard"] == [(0, 1), (1, 3)]
    assert qh["costandard"] == [(1, 2), (0, 1)]


def test_opposite_reverses_products():
    A = make_lambda(2, 3)
    B = A.opposite()
    for i, j in product(range(A.dim), repeat=2):
        x, y = A.basis_vector(i), A.basis_vector(j)
        assert B.mult(x, y) == A.mult(y, x)


def test_find_idempotent_splits_lambda():
    A = make_lambda(1, 1)
    e = find_idempotent(A, seed=3)
    assert e is not None
    assert A.mult(e, e) == e
    assert e != A.unit and any(e)


def test_rejects_bad_parameters():
    with pytest.raises(ValueError):
        make_lambda(0, 0)
    with pytest.raises(ValueError):
        make_lambda(-1, 2)
