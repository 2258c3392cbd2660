from itertools import combinations
from math import gcd
import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from weylkit import lattice as L


def minors_gcd(A, k):
    """k-th determinantal divisor: gcd of all k x k minors."""
    m, n = len(A), len(A[0])
    g = 0
    for rows in combinations(range(m), k):
        for cols in combinations(range(n), k):
            sub = [[A[i][j] for j in cols] for i in rows]
            g = gcd(g, L.det_bareiss(sub))
    return g


def snf_oracle(A):
    """Invariant factors from determinantal divisors d_k / d_{k-1}."""
    out, prev = [], 1
    for k in range(1, min(len(A), len(A[0])) + 1):
        dk = minors_gcd(A, k)
        if dk == 0:
            break
        out.append(dk // prev)
        prev = dk
    return out


int_matrices = st.integers(1, 4).flatmap(
    lambda m: st.integers(1, 4).flatmap(
        lambda n: st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n), min_size=m, max_size=m)
    )
)


def is_unimodular(M):
    return abs(L.det_bareiss(M)) == 1


@given(int_matrices)
def test_snf_reconstruction_and_oracle(A):
    s = L.smith_normal_form(A)
    assert L.matmul(L.matmul(s.U, s.D), s.V) == A
    assert is_unimodular(s.U) and is_unimodular(s.V)
    assert L.matmul(s.U, s.U_inv) == L.identity(len(A))
    assert L.matmul(s.V, s.V_inv) == L.identity(len(A[0]))
    nonzero = [d for d in s.diag if d]
    for a, b in zip(nonzero, nonzero[1:]):
        assert b % a == 0
    assert nonzero == snf_oracle(A)


def test_snf_examples():
    assert L.smith_normal_form([[1, 0], [0, 1]]).D == [[1, 0], [0, 1]]
    assert L.smith_normal_form([[2, 0], [0, 2]]).D == [[2, 0], [0, 2]]
    assert list(L.invariant_factors([[2, 4], [6, 8]])) == [2, 4]


def test_coinvariant_examples():
    assert L.coinvariants([[1]]).free_rank == 1
    assert L.coinvariants([[-1, 0], [0, -1]]).order == 4
    assert L.coinvariants([[0, -1], [1, -1]]).order == 3
    assert L.det_one_minus([[1, 0], [0, 1]]) == 0
    assert L.alt_exterior_trace([[-1]]) == 2
    assert L.alt_exterior_trace([[1, 0], [0, 1]]) == 0


def test_fixed_sublattice_examples():
    assert len(L.fixed_sublattice([[1, 0], [0, 1]])) == 2
    assert len(L.fixed_sublattice([[-1]])) == 0
    fx = L.fixed_sublattice([[-1, 0], [0, 1]])
    assert len(fx) == 1 and [abs(x) for x in fx[0]] == [0, 1]


def random_elliptic(rng):
    from weylkit.checks import random_elliptic_matrix

    return random_elliptic_matrix(rng)


@pytest.mark.parametrize("seed", range(40))
def test_coinvariant_order_three_ways(seed):
    u = random_elliptic(random.Random(seed))
    n = len(u)
    A = L.coinvariants(u)
    det = L.det_one_minus(u)
    # float oracle for the determinant
    assert round(np.linalg.det(np.eye(n) - np.array(u, dtype=float))) == det
    assert A.order == abs(det) == L.alt_exterior_trace(u)
    assert L.matrix_order(u) is not None
    H = L.hermite_normal_form(L.transpose(L.one_minus(u)))
    assert L.lattice_index(H, n) == abs(det)
    assert len(L.coset_representatives(H, n)) == abs(det)


@given(st.lists(st.integers(-5, 5), min_size=2, max_size=2), st.lists(st.integers(-5, 5), min_size=2, max_size=2))
def test_solve_integer(a, b):
    A = [[2, 1], [0, 3]]
    x = L.solve_integer(A, L.matvec(A, a))
    assert x is not None and L.matvec(A, x) == L.matvec(A, a)
    rhs = [b[0], 3 * b[1] + 1]
    assert L.solve_integer(A, rhs) is None


def test_hnf_reduce_canonical():
    H = L.hermite_normal_form([[2, 0], [1, 3]])
    reps = L.coset_representatives(H, 2)
    assert len(reps) == 6
    for r in reps:
        assert tuple(L.hnf_reduce(r, H)) == tuple(r)
        shifted = [r[0] + 2 * 5 + 1 * 2, r[1] + 3 * 2]
        assert tuple(L.hnf_reduce(shifted, H)) == tuple(r)
