"""Integer lattice algebra: Smith and Hermite normal forms, coinvariants,
determinant identities and fixed sublattices.

All arithmetic is on Python ints, so entries never overflow.
Matrices are lists of rows.  A linear map acts on column vectors.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from math import gcd, prod
from typing import List, Optional, Sequence, Tuple

Matrix = List[List[int]]


def as_int_matrix(A) -> Matrix:
    return [[int(x) for x in row] for row in A]


def identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def matmul(A, B) -> Matrix:
    if not A:
        return []
    n = len(B[0]) if B else 0
    return [[sum(a * B[k][j] for k, a in enumerate(row) if a) for j in range(n)] for row in A]


def matvec(A, v) -> List[int]:
    return [sum(a * x for a, x in zip(row, v) if a) for row in A]


def transpose(A) -> Matrix:
    return [list(r) for r in zip(*A)]


def one_minus(u) -> Matrix:
    n = len(u)
    return [[(1 if i == j else 0) - u[i][j] for j in range(n)] for i in range(n)]


def mat_power(A, k: int) -> Matrix:
    out = identity(len(A))
    base = [list(r) for r in A]
    while k:
        if k & 1:
            out = matmul(out, base)
        base = matmul(base, base)
        k >>= 1
    return out


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SNF:
    """A = U * diag(d) * V with U, V unimodular; inverses kept alongside."""

    U: Matrix
    diag: Tuple[int, ...]
    V: Matrix
    U_inv: Matrix
    V_inv: Matrix
    shape: Tuple[int, int]

    @property
    def D(self) -> Matrix:
        m, n = self.shape
        out = [[0] * n for _ in range(m)]
        for i, d in enumerate(self.diag):
            out[i][i] = d
        return out

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diag if d)


def smith_normal_form(A) -> SNF:
    """Smith normal form of an integer matrix.

    Returns an :class:`SNF` with ``A == U @ D @ V``, the diagonal forming a
    divisibility chain of non-negative integers.
    """
    M = as_int_matrix(A)
    m = len(M)
    n = len(M[0]) if m else 0
    L, Linv = identity(m), identity(m)
    R, Rinv = identity(n), identity(n)

    def row_add(i, j, q):  # row_i += q * row_j
        if q == 0:
            return
        M[i] = [a + q * b for a, b in zip(M[i], M[j])]
        L[i] = [a + q * b for a, b in zip(L[i], L[j])]
        for r in Linv:  # col_j -= q * col_i
            r[j] -= q * r[i]

    def row_swap(i, j):
        if i == j:
            return
        M[i], M[j] = M[j], M[i]
        L[i], L[j] = L[j], L[i]
        for r in Linv:
            r[i], r[j] = r[j], r[i]

    def row_neg(i):
        M[i] = [-a for a in M[i]]
        L[i] = [-a for a in L[i]]
        for r in Linv:
            r[i] = -r[i]

    def col_add(i, j, q):  # col_i += q * col_j
        if q == 0:
            return
        for r in M:
            r[i] += q * r[j]
        for r in R:
            r[i] += q * r[j]
        Rinv[j] = [a - q * b for a, b in zip(Rinv[j], Rinv[i])]

    def col_swap(i, j):
        if i == j:
            return
        for r in M:
            r[i], r[j] = r[j], r[i]
        for r in R:
            r[i], r[j] = r[j], r[i]
        Rinv[i], Rinv[j] = Rinv[j], Rinv[i]

    diag = []
    for t in range(min(m, n)):
        while True:
            entries = [(abs(M[i][j]), i, j) for i in range(t, m) for j in range(t, n) if M[i][j]]
            if not entries:
                break
            _, pi, pj = min(entries)
            row_swap(t, pi)
            col_swap(t, pj)
            p = M[t][t]
            dirty = False
            for i in range(t + 1, m):
                if M[i][t]:
                    row_add(i, t, -(M[i][t] // p))
                    dirty = dirty or M[i][t] != 0
            for j in range(t + 1, n):
                if M[t][j]:
                    col_add(j, t, -(M[t][j] // p))
                    dirty = dirty or M[t][j] != 0
            if dirty:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if M[i][j] % p),
                None,
            )
            if bad is None:
                break
            row_add(t, bad, 1)
        if t < m and t < n:
            if M[t][t] < 0:
                row_neg(t)
            diag.append(M[t][t])
    return SNF(U=Linv, diag=tuple(diag), V=Rinv, U_inv=L, V_inv=R, shape=(m, n))


def invariant_factors(A) -> Tuple[int, ...]:
    return smith_normal_form(A).diag


# ---------------------------------------------------------------------------
# Hermite normal form


def hermite_normal_form(rows) -> Matrix:
    """Row-style Hermite normal form of the lattice spanned by ``rows``.

    The result is in row echelon form with positive pivots and the entries
    above each pivot reduced into ``[0, pivot)``.  Zero rows are dropped.
    """
    H = [list(map(int, r)) for r in rows if any(r)]
    if not H:
        return []
    ncols = len(H[0])
    out = []
    col = 0
    while H and col < ncols:
        nz = [r for r in H if r[col]]
        if not nz:
            col += 1
            continue
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            piv = nz[0]
            rest = []
            for r in nz[1:]:
                q = r[col] // piv[col]
                r2 = [a - q * b for a, b in zip(r, piv)]
                rest.append(r2)
            nz = [piv] + [r for r in rest if r[col]]
            H = [piv] + [r for r in rest if any(r)] + [r for r in H if not r[col]]
            H = _dedupe_rows(H)
            nz = [r for r in H if r[col]]
        piv = nz[0]
        if piv[col] < 0:
            piv = [-a for a in piv]
        out.append(piv)
        H = [r for r in H if not r[col] and any(r)]
        col += 1
    # reduce entries above pivots
    for i in range(len(out)):
        c = _pivot_col(out[i])
        p = out[i][c]
        for k in range(i):
            q = out[k][c] // p
            if q:
                out[k] = [a - q * b for a, b in zip(out[k], out[i])]
    return out


def _dedupe_rows(H):
    seen = []
    for r in H:
        if any(r):
            seen.append(r)
    return seen


def _pivot_col(row):
    return next(i for i, a in enumerate(row) if a)


def hnf_reduce(v, H) -> List[int]:
    """Canonical representative of v modulo the row lattice of an HNF matrix."""
    w = list(v)
    for row in H:
        c = _pivot_col(row)
        q = w[c] // row[c]
        if q:
            w = [a - q * b for a, b in zip(w, row)]
    return w


def in_lattice(v, H) -> bool:
    return not any(hnf_reduce(v, H))


def coset_representatives(H, n: int) -> List[Tuple[int, ...]]:
    """Representatives of Z^n / L for a full-rank HNF basis H of L."""
    if len(H) != n:
        raise ValueError("sublattice is not of finite index")
    pivots = [row[_pivot_col(row)] for row in H]
    return [tuple(x) for x in product(*(range(p) for p in pivots))]


def lattice_index(H, n: int) -> Optional[int]:
    if len(H) != n:
        return None
    return prod(row[_pivot_col(row)] for row in H)


# ---------------------------------------------------------------------------
# Finite abelian groups and coinvariants


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """Z/d_1 x ... x Z/d_k x Z^free_rank with d_1 | d_2 | ... and each d_i > 1."""

    invariant_factors: Tuple[int, ...] = ()
    free_rank: int = 0

    def __post_init__(self):
        facs = tuple(int(d) for d in self.invariant_factors)
        if any(d < 1 for d in facs):
            raise ValueError("invariant factors must be positive")
        facs = tuple(d for d in facs if d > 1)
        for a, b in zip(facs, facs[1:]):
            if b % a:
                raise ValueError(f"invariant factors {facs} do not form a divisibility chain")
        object.__setattr__(self, "invariant_factors", facs)

    @classmethod
    def from_diagonal(cls, diag, rank: int) -> "FiniteAbelianGroup":
        nonzero = [abs(d) for d in diag if d]
        return cls(tuple(nonzero), rank - len(nonzero))

    @property
    def order(self) -> Optional[int]:
        if self.free_rank:
            return None
        return prod(self.invariant_factors)

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def is_trivial(self) -> bool:
        return not self.invariant_factors and not self.free_rank

    def __str__(self):
        parts = [f"Z/{d}" for d in self.invariant_factors] + ["Z"] * self.free_rank
        return " x ".join(parts) or "0"


def cokernel(A, rank: Optional[int] = None) -> FiniteAbelianGroup:
    """Z^m / (column span of A) for an m x n matrix A."""
    m = len(A) if rank is None else rank
    snf = smith_normal_form(A) if A and A[0] else None
    diag = snf.diag if snf else ()
    return FiniteAbelianGroup.from_diagonal(diag, m)


# ---------------------------------------------------------------------------
# lattices and automorphisms


@dataclass(frozen=True)
class IntLattice:
    """Free abelian group of given rank; ``embedding`` has the basis as columns."""

    rank: int
    embedding: Optional[Tuple[Tuple[int, ...], ...]] = None

    def __post_init__(self):
        if self.embedding is not None:
            E = [list(r) for r in self.embedding]
            if E and smith_normal_form(E).rank != self.rank:
                raise ValueError("lattice basis is not of full rank")


@dataclass(frozen=True)
class LatticeAuto:
    """Integer automorphism of Z^r of finite order."""

    matrix: Tuple[Tuple[int, ...], ...]
    order: int = field(default=0)

    def __init__(self, matrix, order: Optional[int] = None, max_order: int = 1000):
        M = tuple(tuple(int(x) for x in row) for row in matrix)
        object.__setattr__(self, "matrix", M)
        n = len(M)
        if any(len(r) != n for r in M):
            raise ValueError("automorphism matrix must be square")
        if n and abs(det_bareiss([list(r) for r in M])) != 1:
            raise ValueError("matrix is not invertible over Z")
        if order is None:
            order = matrix_order([list(r) for r in M], max_order)
            if order is None:
                raise ValueError("matrix does not have finite order")
        elif mat_power([list(r) for r in M], order) != identity(n):
            raise ValueError(f"matrix^{order} is not the identity")
        object.__setattr__(self, "order", order)

    @property
    def rank(self) -> int:
        return len(self.matrix)

    def as_list(self) -> Matrix:
        return [list(r) for r in self.matrix]

    def is_elliptic(self) -> bool:
        return not fixed_sublattice(self.as_list())


def matrix_order(A, max_order: int = 1000) -> Optional[int]:
    n = len(A)
    I = identity(n)
    P = [list(r) for r in A]
    for k in range(1, max_order + 1):
        if P == I:
            return k
        P = matmul(P, A)
    return None


def _as_matrix(u) -> Matrix:
    if isinstance(u, LatticeAuto):
        return u.as_list()
    return as_int_matrix(u)


def det_bareiss(A) -> int:
    """Exact integer determinant by fraction-free elimination."""
    M = [list(r) for r in A]
    n = len(M)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k]), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def coinvariants(u, lattice: Optional[IntLattice] = None) -> FiniteAbelianGroup:
    """Lambda_u = Lambda / (1 - u) Lambda."""
    A = _as_matrix(u)
    return cokernel(one_minus(A), len(A))


def det_one_minus(u) -> int:
    return det_bareiss(one_minus(_as_matrix(u)))


def alt_exterior_trace(u) -> int:
    """sum_i (-1)^i Tr(u | wedge^i), via sums of principal minors."""
    A = _as_matrix(u)
    n = len(A)
    total = 0
    for k in range(n + 1):
        tr = sum(det_bareiss([[A[i][j] for j in S] for i in S]) for S in combinations(range(n), k))
        total += (-1) ** k * tr
    return total


def fixed_sublattice(u) -> Matrix:
    """Basis (as a list of vectors) of the saturated kernel of u - 1."""
    A = _as_matrix(u)
    n = len(A)
    if n == 0:
        return []
    B = [[A[i][j] - (1 if i == j else 0) for j in range(n)] for i in range(n)]
    snf = smith_normal_form(B)
    Vinv = snf.V_inv
    zero_cols = [j for j in range(n) if j >= len(snf.diag) or snf.diag[j] == 0]
    return [[Vinv[i][j] for i in range(n)] for j in zero_cols]


def kernel_basis(A) -> Matrix:
    """Saturated integer kernel of an m x n integer matrix (vectors of length n)."""
    if not A:
        return []
    n = len(A[0])
    snf = smith_normal_form(A)
    zero_cols = [j for j in range(n) if j >= len(snf.diag) or snf.diag[j] == 0]
    return [[snf.V_inv[i][j] for i in range(n)] for j in zero_cols]


def solve_integer(A, b) -> Optional[List[int]]:
    """An integer solution x of A x = b, or None."""
    snf = smith_normal_form(A)
    m, n = snf.shape
    c = matvec(snf.U_inv, b)
    y = [0] * n
    for i in range(m):
        d = snf.diag[i] if i < len(snf.diag) else 0
        if d == 0:
            if c[i]:
                return None
        else:
            if c[i] % d:
                return None
            y[i] = c[i] // d
    return matvec(snf.V_inv, y)


def snf_box_representatives(A) -> List[Tuple[int, ...]]:
    """Representatives of Z^m / (column span of A) from the SNF box U*[0,d_i).

    Requires finite cokernel.
    """
    snf = smith_normal_form(A)
    m = snf.shape[0]
    diag = list(snf.diag) + [0] * (m - len(snf.diag))
    if any(d == 0 for d in diag):
        raise ValueError("cokernel is infinite")
    reps = []
    for y in product(*(range(d) for d in diag)):
        reps.append(tuple(matvec(snf.U, list(y))))
    return reps


def snf_canonical(v, A) -> Tuple[int, ...]:
    """The box representative of v modulo column span of A (finite cokernel)."""
    snf = smith_normal_form(A)
    c = matvec(snf.U_inv, v)
    y = [ci % d for ci, d in zip(c, snf.diag)]
    return tuple(matvec(snf.U, y))


def gcd_list(xs: Sequence[int]) -> int:
    g = 0
    for x in xs:
        g = gcd(g, x)
    return g
