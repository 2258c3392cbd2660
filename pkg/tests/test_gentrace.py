import random
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, strategies as st

from weylkit import gentrace as gt
from weylkit import linalg as la
from weylkit.cartan import build_root_datum
from weylkit.cyclotomic import Cyc, as_cyc
from weylkit.lattice import det_one_minus, one_minus

ZETA = Cyc.root_of_unity
NEG = gt.DeltaGroup([[-1]])
TRIVIAL = gt.FiniteDim([[[1]]], [[1]])
SIGN = gt.FiniteDim([[[-1]]], [[1]])
FREE1 = gt.Free([[1]])


def elt(G, lam, k=1):
    return gt.DeltaElt(G, tuple(lam), k)


# ---------------------------------------------------------------------------
# independent oracles


def free_trace_oracle(delta, V):
    """t_lam u^k on C[Lambda] (x) V: one fixed point iff lam in (1 - u^k) Lambda."""
    A = [[Fraction(x) for x in r] for r in one_minus(delta.group.u_power(delta.k))]
    mu = la.solve(A, [Fraction(x) for x in delta.lam])
    if mu is None or any(x.denominator != 1 for x in mu):
        return as_cyc(0)
    return la.trace(la.mat_pow([list(r) for r in V.V], delta.k))


def induced_rank_one_oracle(m, c, eps, lam):
    """Tr(t_lam u) on Ind_{mZ}^{Z} of the line with rho(m) = c, u = eps, for u = -1.

    Basis e_j = [j] (x) 1, j = 0..m-1, with [j + m] (x) 1 = c e_j.
    t_lam u sends e_j to eps [lam - j] (x) 1.
    """
    total = as_cyc(0)
    for j in range(m):
        q, r = divmod(lam - j, m)
        if r == j:
            total = total + as_cyc(eps) * as_cyc(c) ** q
    return total


def koszul_dims_numeric(M: gt.FiniteDim, r):
    """Homology dimensions of the Koszul complex with d = sum (-1)^t (rho(e_{i_t}) - 1), in floats."""
    d = M.dim
    R = [np.array([[x.to_complex() for x in row] for row in m]) for m in M.rho]
    subsets = [list(combinations(range(r), j)) for j in range(r + 1)]
    mats = []
    for j in range(1, r + 1):
        D = np.zeros((d * len(subsets[j - 1]), d * len(subsets[j])), dtype=complex)
        index = {s: i for i, s in enumerate(subsets[j - 1])}
        for col, s in enumerate(subsets[j]):
            for t, i in enumerate(s):
                rest = s[:t] + s[t + 1:]
                row = index[rest]
                D[row * d:(row + 1) * d, col * d:(col + 1) * d] += (-1) ** t * (R[i] - np.eye(d))
        mats.append(D)
    ranks = [np.linalg.matrix_rank(D, tol=1e-8) if D.size else 0 for D in mats]
    dims = []
    for j in range(r + 1):
        cj = d * len(subsets[j])
        ker = cj - (ranks[j - 1] if j >= 1 else 0)
        im = ranks[j] if j < r else 0
        dims.append(ker - im)
    return dims


def unipotent_part_trace(M: gt.FiniteDim):
    """Tr(U) on the joint generalized 1-eigenspace of the lattice action."""
    d = M.dim
    stacked = []
    for m in M.rho:
        N = la.mat_sub([list(r) for r in m], la.identity(d))
        stacked.extend(la.mat_pow(N, d))
    ker = la.kernel(stacked, d)
    if not ker:
        return as_cyc(0)
    return la.Subspace(d, ker).trace_of([list(r) for r in M.U])


# ---------------------------------------------------------------------------
# worked examples


def test_gen_trace_examples():
    G = gt.DeltaGroup([[0, -1], [1, -1]])
    triv3 = gt.FiniteDim([la.identity(3)] * 2, la.identity(3))
    assert gt.gen_trace(elt(G, (0, 0)), triv3) == 3
    assert gt.gen_trace(elt(NEG, (0,)), FREE1) == 1
    assert gt.gen_trace(elt(NEG, (1,)), FREE1) == 0


def test_homology_examples():
    h = gt.homology(NEG, TRIVIAL)
    assert [x.dim for x in h] == [1, 1]
    assert [x.trace() for x in h] == [1, -1]
    assert [x.dim for x in gt.homology(NEG, SIGN)] == [0, 0]
    h = gt.homology(NEG, gt.Free([[1, 0], [0, -1]]))
    assert [x.dim for x in h] == [2, 0]
    assert gt.trace_on_homology(NEG, TRIVIAL) == 2
    assert gt.trace_on_homology(NEG, FREE1) == 1
    assert gt.trace_on_homology(NEG, SIGN) == 0


def test_trace_formula_examples():
    for M, lhs, terms in [(TRIVIAL, 2, [1, 1]), (SIGN, 0, [1, -1]), (FREE1, 1, [1, 0])]:
        rep = gt.verify_trace_formula(M, NEG)
        assert rep.equal and rep.lhs == lhs
        assert [v for _, v in rep.terms] == terms
    with pytest.raises(ValueError):
        gt.verify_trace_formula(TRIVIAL, gt.DeltaGroup([[1]]))


def test_induced_examples():
    M = gt.induce([[2]], TRIVIAL)
    d = elt(NEG, (0,))
    assert gt.induced_trace(d, [[2]], TRIVIAL) == gt.gen_trace(d, M) == 2
    R = gt.finite_realization(NEG, M)
    assert R.dim == 2 and gt.plain_trace(d, R) == 2
    # Lambda_0 = Lambda: identity reduction
    assert gt.induced_trace(d, [[1]], SIGN) == gt.gen_trace(d, SIGN)
    Ms = gt.induce([[2]], SIGN)
    for lam in range(-3, 4):
        dl = elt(NEG, (lam,))
        assert gt.induced_trace(dl, [[2]], SIGN) == gt.gen_trace(dl, Ms)
    with pytest.raises(ValueError, match="not u-stable"):
        gt.induced_trace(elt(gt.DeltaGroup([[0, -1], [1, 0]]), (0, 0)), [[1, 0]], TRIVIAL)


def test_conjugation_examples():
    assert gt.conjugation_invariance_check((0,), elt(NEG, (0,)), FREE1)
    t = gt.translation(NEG, (1,))
    conj = t * elt(NEG, (0,)) * t.inverse()
    assert conj.lam == (2,) and gt.gen_trace(conj, FREE1) == 1
    assert gt.conjugation_invariance_check((1,), elt(NEG, (0,)), FREE1)


def test_weyl_averaging_examples():
    A1 = build_root_datum("A", 1)
    vals = gt.weyl_averaged_trace(gt.trivial_extended(A1))
    assert [(j, a) for j, a, _ in vals] == [(0, 1), (1, 0)]
    assert gt.alternating(vals) == 1
    A2 = build_root_datum("A", 2)
    reg = gt.regular_extended(A2, [1, 0], 3)
    gt.weyl_averaged_trace(reg)


def test_module_validation():
    with pytest.raises(ValueError):
        gt.FiniteDim([[[2]]], [[1]]).validate(NEG)  # u rho u^-1 must be rho(-1)
    with pytest.raises(ValueError):
        gt.DeltaGroup([[2]])
    with pytest.raises(ValueError):
        gt.DeltaGroup([[1, 1], [0, 1]])
    assert gt.DeltaGroup([[0, -1], [1, 0]]).order == 4


def test_semidirect_power_law():
    # (lam u)^n = u^n for elliptic u
    for u in ([[-1]], [[0, -1], [1, -1]], [[0, -1], [1, 0]], [[0, -1], [1, 1]]):
        G = gt.DeltaGroup(u)
        for lam in [(3,) * G.rank, tuple(range(1, G.rank + 1))]:
            x = elt(G, lam)
            assert (x ** G.order).lam == (0,) * G.rank


# ---------------------------------------------------------------------------
# oracle comparisons


@pytest.mark.parametrize("u", [[[-1]], [[0, -1], [1, -1]], [[0, -1], [1, 0]], [[0, -1], [1, 1]], [[-1, 0], [0, -1]]])
def test_free_matches_fixed_point_oracle(u):
    G = gt.DeltaGroup(u)
    V = gt.Free([[0, ZETA(3)], [1, 0]])
    for k in range(1, G.order):
        if gt._elliptic_power(G, k):
            for lam in [(0,) * G.rank, (1,) + (0,) * (G.rank - 1), (2,) * G.rank, (-1, 3)[: G.rank]]:
                d = elt(G, lam, k)
                assert gt.gen_trace(d, V) == free_trace_oracle(d, V)


@pytest.mark.parametrize("m", [1, 2, 3, 4])
@pytest.mark.parametrize("c,eps", [(1, 1), (-1, 1), (1, -1), (-1, -1)])
def test_induced_matches_explicit_matrices(m, c, eps):
    M = gt.Induced([[m]], gt.FiniteDim([[[c]]], [[eps]]))
    for lam in range(-2 * m, 2 * m + 1):
        want = induced_rank_one_oracle(m, c, eps, lam)
        d = elt(NEG, (lam,))
        assert gt.gen_trace(d, M) == want
        assert gt.induced_trace(d, [[m]], gt.FiniteDim([[[c]]], [[eps]])) == want


@given(st.integers(0, 10**6))
def test_finite_dim_homology_against_numeric_koszul(seed):
    rng = random.Random(seed)
    r = rng.choice([1, 2, 2, 3])
    G = gt.DeltaGroup(gt.random_elliptic_u(rng, r))
    M = gt.random_finite(G, rng)
    h = gt.homology(G, M)
    assert [x.dim for x in h] == koszul_dims_numeric(M, r)
    # Lefschetz on the part where every lattice vector acts unipotently
    assert gt.trace_on_homology(G, M) == unipotent_part_trace(M) * det_one_minus(G.umat)


# ---------------------------------------------------------------------------
# properties on random modules


def random_instance(seed):
    rng = random.Random(seed)
    order = rng.choice([2, 3, 4, 6])
    rank = rng.choice({2: [1, 2, 3], 3: [2], 4: [2], 6: [2]}[order])
    G = gt.DeltaGroup(gt.random_elliptic_u(rng, rank, (order,)))
    return rng, G, gt.random_module(G, rng)


@given(st.integers(0, 10**6))
def test_trace_formula_random(seed):
    _, G, M = random_instance(seed)
    rep = gt.verify_trace_formula(M, G)
    assert rep.equal


@given(st.integers(0, 10**6))
def test_additivity_and_twist(seed):
    rng, G, M = random_instance(seed)
    N = gt.random_module(G, rng, 1)
    S = gt.DirectSum([M, N])
    lam = tuple(rng.choice(G.class_representatives()))
    d = elt(G, lam)
    assert gt.gen_trace(d, S) == gt.gen_trace(d, M) + gt.gen_trace(d, N)
    assert gt.trace_on_homology(G, S) == gt.trace_on_homology(G, M) + gt.trace_on_homology(G, N)
    chi = ZETA(G.order, rng.randrange(G.order))
    assert gt.gen_trace(d, gt.Twist(M, chi)) == chi * gt.gen_trace(d, M)


@given(st.integers(0, 10**6))
def test_filtration_independence_and_stabilization(seed):
    from weylkit.checks import filtration_specs

    _, G, M = random_instance(seed)
    lam = (0,) * G.rank
    d = elt(G, lam)
    values = []
    specs, _ = filtration_specs(G, M)
    assert len(specs) >= 3
    for spec in specs:
        total, runs = gt.gen_trace_detail(d, M, spec)
        values.append(total)
        for run in runs:
            assert run.stable_from <= run.capture_bound <= run.stop_index
            assert all(v == run.value for v in run.sequence[run.stable_from:])
    assert all(v == values[0] for v in values)


@given(st.integers(0, 10**6))
def test_shapiro_and_realization(seed):
    rng, G, _ = random_instance(seed)
    basis = gt.random_sublattice(G, rng)
    sub = gt.DeltaGroup(gt.restrict_automorphism(G.umat, basis))
    M0 = gt.random_finite(sub, rng)
    M = gt.Induced(basis, M0)
    big = [h.dim for h in gt.homology(G, M)]
    small = [h.dim for h in gt.homology(sub, M0)]
    assert big == small + [0] * (len(big) - len(small))
    reps = G.class_representatives()[:3]
    index = abs(la.det([[Fraction(x) for x in v] for v in basis])) if len(basis) == G.rank else None
    if index is None or index * M0.dim > 24:
        for lam in reps:
            d = elt(G, lam)
            assert gt.gen_trace(d, M) == gt.induced_trace(d, basis, M0)
        return
    R = gt.finite_realization(G, M)
    R.validate(G)
    for lam in reps:
        d = elt(G, lam)
        assert gt.gen_trace(d, M) == gt.plain_trace(d, R) == gt.induced_trace(d, basis, M0)


@given(st.integers(0, 10**6))
def test_conjugation_invariance_random(seed):
    rng, G, M = random_instance(seed)
    lam = tuple(rng.randint(-2, 2) for _ in range(G.rank))
    mu = tuple(rng.randint(-2, 2) for _ in range(G.rank))
    assert gt.conjugation_invariance_check(mu, elt(G, lam), M)


@given(st.integers(0, 10**6))
def test_weyl_averaging_random(seed):
    rng = random.Random(seed)
    d = build_root_datum(*rng.choice([("A", 1), ("A", 2)]))
    perm = rng.choice(d.diagram_automorphisms)
    V = gt.random_extended(d, rng, perm)
    vals = gt.weyl_averaged_trace(V)
    assert all(a == b for _, a, b in vals)
