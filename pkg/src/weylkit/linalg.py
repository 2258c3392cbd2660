"""Exact dense linear algebra over a field.

Works for any scalar type closed under + - * / with an exact zero test:
``int``/``Fraction`` (over Q) and :class:`weylkit.cyclotomic.Cyc`.
Matrices are lists of rows.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations


def zeros(m, n):
    return [[0] * n for _ in range(m)]


def identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def transpose(A):
    return [list(r) for r in zip(*A)]


def mat_mul(A, B):
    if not A:
        return []
    Bt = list(zip(*B)) if B else []
    if not Bt:
        return [[] for _ in A]
    out = []
    for row in A:
        out_row = []
        for col in Bt:
            s = 0
            for a, b in zip(row, col):
                if a and b:
                    s = s + a * b
            out_row.append(s)
        out.append(out_row)
    return out


def mat_vec(A, v):
    out = []
    for row in A:
        s = 0
        for a, b in zip(row, v):
            if a and b:
                s = s + a * b
        out.append(s)
    return out


def mat_add(A, B):
    return [[a + b for a, b in zip(r, s)] for r, s in zip(A, B)]


def mat_sub(A, B):
    return [[a - b for a, b in zip(r, s)] for r, s in zip(A, B)]


def mat_scale(A, c):
    return [[c * a for a in r] for r in A]


def trace(A):
    s = 0
    for i, row in enumerate(A):
        s = s + row[i]
    return s


def mat_eq(A, B):
    return all(a == b for r, s in zip(A, B) for a, b in zip(r, s))


def is_identity(A):
    return all((a == 1) if i == j else (a == 0) for i, r in enumerate(A) for j, a in enumerate(r))


def block_diag(*blocks):
    n = sum(len(b) for b in blocks)
    out = zeros(n, n)
    k = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, a in enumerate(row):
                out[k + i][k + j] = a
        k += len(b)
    return out


def kron(A, B):
    return [[a * b for a in ra for b in rb] for ra in A for rb in B]


def rref(rows, ncols=None):
    """Reduced row echelon form. Returns (nonzero rows, pivot columns)."""
    M = [list(r) for r in rows]
    if ncols is None:
        ncols = len(M[0]) if M else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        p = M[r][c]
        if p != 1:
            inv = 1 / p if not isinstance(p, int) else Fraction(1, p)
            M[r] = [x * inv for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots


def rank(A):
    return len(rref(A)[1]) if A else 0


def kernel(A, ncols=None):
    """Basis (list of vectors) of {x : A x = 0}."""
    if ncols is None:
        ncols = len(A[0]) if A else 0
    if not A:
        return [[1 if i == j else 0 for i in range(ncols)] for j in range(ncols)]
    R, piv = rref(A, ncols)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for i, p in enumerate(piv):
            v[p] = -R[i][f]
        basis.append(v)
    return basis


def solve(A, b):
    """One solution x of A x = b, or None."""
    n = len(A[0]) if A else 0
    aug = [list(r) + [bi] for r, bi in zip(A, b)]
    R, piv = rref(aug, n + 1)
    if n in piv:
        return None
    x = [0] * n
    for i, p in enumerate(piv):
        x[p] = R[i][n]
    return x


def solve_rational(A, b):
    return solve([[Fraction(a) for a in r] for r in A], [Fraction(x) for x in b])


def inverse(A):
    n = len(A)
    aug = [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(A)]
    R, piv = rref(aug, 2 * n)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [r[n:] for r in R]


def mat_pow(A, k):
    if k < 0:
        return mat_pow(inverse(A), -k)
    n = len(A)
    result = identity(n)
    base = A
    while k:
        if k & 1:
            result = mat_mul(result, base)
        base = mat_mul(base, base)
        k >>= 1
    return result


def det(A):
    """Determinant by elimination (exact over any field)."""
    n = len(A)
    if n == 0:
        return 1
    M = [list(r) for r in A]
    d = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            d = -d
        p = M[c][c]
        d = d * p
        for i in range(c + 1, n):
            if M[i][c] != 0:
                f = M[i][c] / p if not isinstance(p, int) else M[i][c] * Fraction(1, p)
                M[i] = [x - f * y for x, y in zip(M[i], M[c])]
    return d


def exterior_power(A, k):
    """Matrix of the k-th exterior power on the basis of sorted k-subsets."""
    n = len(A)
    subsets = list(combinations(range(n), k))
    return [
        [det([[A[i][j] for j in J] for i in I]) for J in subsets]
        for I in subsets
    ]


class Subspace:
    """A subspace of K^n held as a reduced row echelon basis."""

    __slots__ = ("n", "rows", "pivots")

    def __init__(self, n, vectors=()):
        self.n = n
        vecs = [list(v) for v in vectors if any(x != 0 for x in v)]
        if vecs:
            self.rows, self.pivots = rref(vecs, n)
        else:
            self.rows, self.pivots = [], []

    @property
    def dim(self):
        return len(self.rows)

    def coords(self, v):
        """Coordinates of a vector known to lie in the subspace."""
        return [v[p] for p in self.pivots]

    def contains(self, v):
        w = list(v)
        for row, p in zip(self.rows, self.pivots):
            if w[p] != 0:
                f = w[p]
                w = [x - f * y for x, y in zip(w, row)]
        return all(x == 0 for x in w)

    def __add__(self, other):
        return Subspace(self.n, self.rows + other.rows)

    def __eq__(self, other):
        return self.n == other.n and self.pivots == other.pivots and mat_eq(self.rows, other.rows)

    def restrict(self, A):
        """Matrix of A on this (A-stable) subspace, in the echelon basis."""
        images = [mat_vec(A, r) for r in self.rows]
        return transpose([self.coords(w) for w in images]) if images else []

    def trace_of(self, A):
        s = 0
        for i, r in enumerate(self.rows):
            w = mat_vec(A, r)
            s = s + w[self.pivots[i]]
        return s

    def is_stable(self, A):
        return all(self.contains(mat_vec(A, r)) for r in self.rows)


def intersect(U: Subspace, V: Subspace) -> Subspace:
    """U ∩ V via the kernel of [U; -V]."""
    if U.dim == 0 or V.dim == 0:
        return Subspace(U.n)
    stacked = transpose(U.rows + [[-x for x in r] for r in V.rows])
    ker = kernel(stacked, U.dim + V.dim)
    vecs = []
    for k in ker:
        v = [0] * U.n
        for c, r in zip(k[: U.dim], U.rows):
            if c != 0:
                v = [a + c * b for a, b in zip(v, r)]
        vecs.append(v)
    return Subspace(U.n, vecs)


def quotient_action(ambient_basis, sub_basis, ops):
    """Matrices of operators on span(ambient)/span(sub).

    ``ambient_basis`` spans a space containing ``sub_basis``; both stable under
    every operator in ``ops``.  Returns (quotient dimension, list of matrices).
    """
    n = len(ambient_basis[0]) if ambient_basis else (len(sub_basis[0]) if sub_basis else 0)
    S = Subspace(n, sub_basis)
    comp = []
    running = Subspace(n, S.rows)
    for v in ambient_basis:
        if not running.contains(v):
            comp.append(list(v))
            running = Subspace(n, running.rows + [v])
    q = len(comp)
    if q == 0:
        return 0, [[] for _ in ops]
    basis = S.rows + comp
    cols = transpose(basis)
    mats = []
    for A in ops:
        M = []
        for v in comp:
            w = mat_vec(A, v)
            x = solve(cols, w)
            if x is None:
                raise ValueError("operator does not preserve the ambient subspace")
            M.append(x[S.dim:])
        mats.append(transpose(M))
    return q, mats
