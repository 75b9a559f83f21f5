import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polarscope.geometry import (
    BudgetExceeded,
    Subspace,
    binomial,
    enumerate_subspaces,
    gaussian,
    hyperplane,
    nullspace,
    point_count,
    projective_space,
    q_binomial_identity_check,
    rank,
    rref,
)
from polarscope.gf import field_make


def brute_subspace_count(n, k, F):
    """Distinct RREF bases over all k-tuples of vectors of GF(q)^n."""
    vecs = list(itertools.product(range(F.q), repeat=n))
    seen = set()
    for rows in itertools.combinations(vecs, k):
        R, piv = rref(F, np.array(rows))
        if len(piv) == k:
            seen.add(R.tobytes())
    return len(seen)


@pytest.mark.parametrize("n,k,p", [(3, 1, 2), (3, 2, 2), (4, 2, 2), (3, 1, 3), (3, 2, 3), (4, 3, 2)])
def test_gaussian_against_brute_force(n, k, p):
    F = field_make(p)
    assert gaussian(n, k, F.q) == brute_subspace_count(n, k, F)


@pytest.mark.parametrize("n,k,p,h", [(4, 1, 2, 1), (4, 2, 3, 1), (3, 1, 2, 2), (5, 2, 2, 1)])
def test_enumeration_count_and_uniqueness(n, k, p, h):
    F = field_make(p, h)
    subs = list(enumerate_subspaces(n, k, F))
    assert len(subs) == gaussian(n + 1, k + 1, F.q)
    assert len(set(subs)) == len(subs)
    assert all(U.dim == k and Subspace.from_rows(F, n, U.basis) == U for U in subs)


def test_gaussian_edge_cases():
    assert gaussian(3, 1, 2) == 7 and gaussian(4, 2, 2) == 35
    assert gaussian(3, -1, 2) == 0 and gaussian(3, 4, 2) == 0
    assert gaussian(0, 0, 5) == 1
    assert point_count(2, 3) == 13 and point_count(-1, 3) == 0
    assert binomial(-1, 2) == 1 and binomial(0, 2) == 0 and binomial(5, 2) == 10


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_q_binomial_identity(q):
    assert all(q_binomial_identity_check(n, q, t) for n in range(9) for t in range(n + 2))


def test_q_binomial_identity_detects_wrong_side():
    # sanity: the identity is not vacuous, the right side really depends on q
    lhs = np.prod([1 + 2**l * 3 for l in range(4)])
    wrong = sum(3 ** binomial(l, 2) * gaussian(4, l, 3) * 3**l for l in range(5))
    assert lhs != wrong


def test_budget():
    F = field_make(2)
    with pytest.raises(BudgetExceeded):
        next(enumerate_subspaces(6, 3, F, budget=100))
    with pytest.raises(ValueError):
        next(enumerate_subspaces(3, 4, F))


def test_projective_space_index():
    F = field_make(3)
    pg = projective_space(3, F)
    assert pg.npoints == 40
    pts = list(enumerate_subspaces(3, 0, F))
    assert [Subspace.point(F, v) for v in pg.vectors] == pts
    for lam in (1, 2):
        assert (pg.index(F.mul(lam, pg.vectors)) == np.arange(40)).all()
    assert pg.index(np.zeros(4, dtype=np.int64)) == -1


def vec(F, n):
    return st.lists(st.integers(0, F.q - 1), min_size=n + 1, max_size=n + 1)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([(2, 1), (3, 1), (2, 2)]), st.data())
def test_span_intersection_dimension_formula(ph, data):
    F = field_make(*ph)
    n = 4
    A = Subspace.from_rows(F, n, data.draw(st.lists(vec(F, n), min_size=0, max_size=4)))
    B = Subspace.from_rows(F, n, data.draw(st.lists(vec(F, n), min_size=0, max_size=4)))
    S, I = A.span(B), A.intersect(B)
    assert S.dim + I.dim == A.dim + B.dim
    assert A in S and B in S and I in A and I in B
    # intersection against point sets
    pg = projective_space(n, F)
    common = np.intersect1d(pg.point_indices(A), pg.point_indices(B))
    assert np.array_equal(common, pg.point_indices(I))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([(2, 1), (3, 1), (5, 1), (2, 2)]), st.data())
def test_rref_canonical_and_nullspace(ph, data):
    F = field_make(*ph)
    M = np.array(data.draw(st.lists(vec(F, 4), min_size=1, max_size=5)), dtype=np.int64)
    R, piv = rref(F, M)
    assert np.array_equal(rref(F, R)[0], R)
    assert rank(F, M) == len(piv)
    N = nullspace(F, M)
    assert N.shape[0] == 5 - len(piv)
    if N.size:
        assert not F.matmul(M, N.T).any()
    # a random invertible change of rows keeps the canonical form
    lam = data.draw(st.integers(1, F.q - 1))
    assert np.array_equal(rref(F, F.mul(lam, M[::-1]))[0], R)


def test_hyperplane_and_points():
    F = field_make(2)
    H = hyperplane(F, [1, 1, 0, 0])
    assert H.dim == 2 and len(H.points()) == 7
    assert all(F.dot(np.array(P.basis[0]), np.array([1, 1, 0, 0])) == 0 for P in H.points())
    with pytest.raises(ValueError):
        hyperplane(F, [0, 0, 0, 0])


def test_mixed_spaces_rejected():
    F = field_make(2)
    with pytest.raises(ValueError):
        Subspace.whole(F, 2).span(Subspace.whole(F, 3))
    with pytest.raises(ValueError):
        Subspace.from_rows(F, 2, [[0, 2, 1]])
