"""Modules over Delta = Lambda x| <u>, generalized traces and homology.

The lattice is always ``Z^r`` with ``u`` an integer matrix acting on column
vectors.  Modules come from a closed constructive class:

* :class:`FiniteDim` -- commuting invertible matrices for the basis of
  Lambda together with a matrix for ``u``;
* :class:`Free` -- ``C[Lambda] (x) V`` for a representation ``V`` of ``<u>``;
* :class:`Induced` -- induction from a ``u``-stable sublattice;
* :class:`DirectSum` and :class:`Twist` (``u`` rescaled by a scalar).

Every module normalises to a direct sum of blocks ``Ind_{Lambda_0}^{Lambda} F``
with ``F`` finite dimensional over ``Lambda_0`` (a free module is induced from
the zero lattice).  Scalars are exact elements of cyclotomic fields.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import comb, lcm
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import linalg as la
from .cyclotomic import ONE, ZERO, Cyc, as_cyc
from .lattice import (
    FiniteAbelianGroup,
    coinvariants,
    det_bareiss,
    fixed_sublattice,
    hermite_normal_form,
    coset_representatives,
    matmul,
    matrix_order,
    matvec,
    one_minus,
    smith_normal_form,
    solve_integer,
    transpose,
)

IntMat = List[List[int]]


def cmat(A) -> list:
    """Matrix with Cyc entries."""
    return [[as_cyc(x) for x in row] for row in A]


def cid(n) -> list:
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def _is_identity(A) -> bool:
    return la.is_identity(A)


# ---------------------------------------------------------------------------
# the group


class DeltaGroup:
    """Lambda = Z^rank with a finite-order automorphism u."""

    def __init__(self, u):
        self.u = tuple(tuple(int(x) for x in row) for row in u)
        self.rank = len(self.u)
        if any(len(row) != self.rank for row in self.u):
            raise ValueError("u must be square")
        if self.rank and abs(det_bareiss(self.umat)) != 1:
            raise ValueError("u is not invertible over Z")
        order = matrix_order(self.umat) if self.rank else 1
        if order is None:
            raise ValueError("u does not have finite order")
        self.order = order
        self._uinv = _int_inverse(self.umat) if self.rank else []

    @property
    def umat(self) -> IntMat:
        return [list(r) for r in self.u]

    @property
    def elliptic(self) -> bool:
        return not fixed_sublattice(self.umat) if self.rank else True

    def u_power(self, k: int) -> IntMat:
        M = [[1 if i == j else 0 for j in range(self.rank)] for i in range(self.rank)]
        base = self.umat if k >= 0 else self._uinv
        for _ in range(abs(k) % self.order):
            M = matmul(base, M)
        return M

    def mul(self, a: "DeltaElt", b: "DeltaElt") -> "DeltaElt":
        lam = [x + y for x, y in zip(a.lam, matvec(self.u_power(a.k), list(b.lam)))]
        return DeltaElt(self, tuple(lam), a.k + b.k)

    def elt(self, lam=None, k: int = 1) -> "DeltaElt":
        lam = tuple(lam) if lam is not None else (0,) * self.rank
        return DeltaElt(self, lam, k)

    def coinvariants(self) -> FiniteAbelianGroup:
        return coinvariants(self.umat)

    def class_representatives(self) -> List[Tuple[int, ...]]:
        """Representatives of Lambda_u = Lambda/(1-u)Lambda from the Hermite box."""
        if not self.elliptic:
            raise ValueError("u is not elliptic")
        if self.rank == 0:
            return [()]
        H = hermite_normal_form(transpose(one_minus(self.umat)))
        return coset_representatives(H, self.rank)

    def __eq__(self, other):
        return isinstance(other, DeltaGroup) and self.u == other.u

    def __hash__(self):
        return hash(self.u)

    def __repr__(self):
        return f"DeltaGroup(u={self.umat})"


def _int_inverse(M):
    inv = la.inverse([[Fraction(x) for x in r] for r in M])
    return [[int(x) for x in r] for r in inv]


@dataclass(frozen=True)
class DeltaElt:
    """The element t_lam u^k of Delta."""

    group: DeltaGroup
    lam: Tuple[int, ...]
    k: int = 1

    def __mul__(self, other):
        return self.group.mul(self, other)

    def __pow__(self, n: int):
        out = DeltaElt(self.group, (0,) * self.group.rank, 0)
        for _ in range(n):
            out = out * self
        return out

    def inverse(self):
        g = self.group
        lam = matvec(g.u_power(-self.k), [-x for x in self.lam])
        return DeltaElt(g, tuple(lam), -self.k)

    def act_point(self, x):
        """t_lam u^k acting on a lattice point."""
        return tuple(a + b for a, b in zip(self.lam, matvec(self.group.u_power(self.k), list(x))))


def translation(group: DeltaGroup, lam) -> DeltaElt:
    return DeltaElt(group, tuple(lam), 0)


# ---------------------------------------------------------------------------
# modules


class DeltaModule:
    """Base class; subclasses are immutable value objects."""

    def blocks(self, group: DeltaGroup) -> List["Block"]:
        raise NotImplementedError

    def validate(self, group: DeltaGroup) -> None:
        for b in self.blocks(group):
            b.validate(group)


@dataclass(frozen=True)
class FiniteDim(DeltaModule):
    rho: tuple
    U: tuple

    def __init__(self, rho, U):
        object.__setattr__(self, "rho", tuple(tuple(tuple(as_cyc(x) for x in r) for r in m) for m in rho))
        object.__setattr__(self, "U", tuple(tuple(as_cyc(x) for x in r) for r in U))

    @property
    def dim(self) -> int:
        return len(self.U)

    def blocks(self, group):
        r = group.rank
        if len(self.rho) != r:
            raise ValueError(f"need {r} lattice matrices, got {len(self.rho)}")
        basis = tuple(tuple(1 if i == j else 0 for j in range(r)) for i in range(r))
        return [Block(basis, _lists(self.rho), _list(self.U))]


@dataclass(frozen=True)
class Free(DeltaModule):
    V: tuple

    def __init__(self, V):
        object.__setattr__(self, "V", tuple(tuple(as_cyc(x) for x in r) for r in V))

    def blocks(self, group):
        return [Block((), [], _list(self.V))]


@dataclass(frozen=True)
class Induced(DeltaModule):
    """Ind from the sublattice spanned by ``basis`` (vectors in Z^r)."""

    basis: tuple
    inner: DeltaModule

    def __init__(self, basis, inner):
        object.__setattr__(self, "basis", tuple(tuple(int(x) for x in v) for v in basis))
        object.__setattr__(self, "inner", inner)

    def subgroup(self, group: DeltaGroup) -> DeltaGroup:
        return DeltaGroup(restrict_automorphism(group.umat, [list(b) for b in self.basis]))

    def blocks(self, group):
        sub = self.subgroup(group)
        out = []
        for b in self.inner.blocks(sub):
            # compose: inner basis is in coordinates of self.basis
            new_basis = tuple(
                tuple(sum(z[i] * self.basis[i][j] for i in range(len(z))) for j in range(group.rank)) for z in b.basis
            )
            out.append(Block(new_basis, b.rho, b.U, b.gens))
        return out


@dataclass(frozen=True)
class DirectSum(DeltaModule):
    parts: tuple

    def __init__(self, parts):
        object.__setattr__(self, "parts", tuple(parts))

    def blocks(self, group):
        out = []
        for p in self.parts:
            out.extend(p.blocks(group))
        return out


@dataclass(frozen=True)
class Twist(DeltaModule):
    """M with u acting by chi * u."""

    inner: DeltaModule
    chi: Cyc

    def __init__(self, inner, chi):
        object.__setattr__(self, "inner", inner)
        object.__setattr__(self, "chi", as_cyc(chi))

    def blocks(self, group):
        return [Block(b.basis, b.rho, la.mat_scale(b.U, self.chi), b.gens) for b in self.inner.blocks(group)]


def _list(M):
    return [list(r) for r in M]


def _lists(Ms):
    return [_list(M) for M in Ms]


def restrict_automorphism(u: IntMat, basis: Sequence[Sequence[int]]) -> IntMat:
    """Matrix of u on span(basis) in that basis; raises if the span is not u-stable."""
    if not basis:
        return []
    B = transpose([list(b) for b in basis])
    cols = []
    for b in basis:
        y = solve_integer(B, matvec(u, list(b)))
        if y is None:
            raise ValueError("sublattice is not u-stable")
        cols.append(y)
    M = transpose(cols)
    if abs(det_bareiss(M)) != 1:
        raise ValueError("sublattice is not u-stable")
    return M


@dataclass
class Block:
    """Ind from span(basis) of a finite-dimensional module (rho on basis, U).

    ``gens`` optionally spans a U-stable subspace of the fiber generating it
    over the sublattice; default is the whole fiber.
    """

    basis: tuple
    rho: list
    U: list
    gens: Optional[list] = None

    @property
    def k(self) -> int:
        return len(self.basis)

    @property
    def dim(self) -> int:
        return len(self.U)

    def validate(self, group: DeltaGroup):
        d = self.dim
        u0 = restrict_automorphism(group.umat, [list(b) for b in self.basis])
        if any(len(m) != d for m in self.rho):
            raise ValueError("matrix sizes disagree")
        if d and la.det(self.U) == 0:
            raise ValueError("u acts non-invertibly")
        for m in self.rho:
            if la.det(m) == 0:
                raise ValueError("lattice acts non-invertibly")
        for a, b in combinations(self.rho, 2):
            if not la.mat_eq(la.mat_mul(a, b), la.mat_mul(b, a)):
                raise ValueError("lattice matrices do not commute")
        Uinv = la.inverse(self.U) if d else []
        for i in range(self.k):
            lhs = la.mat_mul(la.mat_mul(self.U, self.rho[i]), Uinv)
            col = [u0[j][i] for j in range(self.k)]
            if not la.mat_eq(lhs, rho_of(self.rho, col, d)):
                raise ValueError("U rho(e_i) U^-1 != rho(u e_i)")


def rho_of(rho: list, z: Sequence[int], d: int, inverses: Optional[list] = None):
    """prod rho_i^{z_i}."""
    out = cid(d)
    for i, e in enumerate(z):
        if e == 0:
            continue
        if e > 0:
            base = rho[i]
        else:
            base = inverses[i] if inverses is not None else la.inverse(rho[i])
        out = la.mat_mul(out, la.mat_pow(base, abs(e)))
    return out


# ---------------------------------------------------------------------------
# filtration specs and the filtration engine


@dataclass
class FiltrationSpec:
    """Monoid generators ``lambda1`` (u-stable) and optional per-block generating subspaces."""

    lambda1: Optional[list] = None
    generators: Optional[list] = None


def default_lambda1(group: DeltaGroup) -> List[Tuple[int, ...]]:
    """u-orbit closure of the standard basis vectors and their negatives, plus 0."""
    r = group.rank
    seeds = []
    for i in range(r):
        e = [0] * r
        e[i] = 1
        seeds.append(tuple(e))
        seeds.append(tuple(-x for x in e))
    return orbit_closure(group, seeds)


def orbit_closure(group: DeltaGroup, vectors) -> List[Tuple[int, ...]]:
    out = {(0,) * group.rank}
    for v in vectors:
        x = tuple(v)
        for _ in range(group.order):
            out.add(x)
            x = tuple(matvec(group.umat, list(x)))
    return sorted(out)


def check_lambda1(group: DeltaGroup, lambda1, steps: int = 12) -> None:
    S = {tuple(v) for v in lambda1}
    for v in S:
        if tuple(matvec(group.umat, list(v))) not in S:
            raise ValueError("lambda1 is not u-stable")
    reach = {(0,) * group.rank}
    targets = set()
    for i in range(group.rank):
        e = [0] * group.rank
        e[i] = 1
        targets.add(tuple(e))
        targets.add(tuple(-x for x in e))
    for _ in range(steps):
        reach = reach | {tuple(a + b for a, b in zip(x, y)) for x in reach for y in S}
        if targets <= reach:
            return
    raise ValueError("lambda1 does not generate the lattice as a monoid")


class _CosetCoords:
    """Canonical coset keys and representatives for Z^r / span(basis)."""

    def __init__(self, r: int, basis):
        self.r = r
        self.k = len(basis)
        if self.k:
            B = transpose([list(b) for b in basis])  # r x k
            snf = smith_normal_form(B)
            self.U = np.array(snf.U, dtype=np.int64)
            self.Uinv = np.array(snf.U_inv, dtype=np.int64)
            self.diag = np.array(snf.diag, dtype=np.int64)
            self.Vinv = snf.V_inv
            self.diag_list = list(snf.diag)
            if any(x == 0 for x in snf.diag):
                raise ValueError("sublattice basis is not independent")
        else:
            self.U = np.eye(r, dtype=np.int64)
            self.Uinv = np.eye(r, dtype=np.int64)
            self.diag = np.zeros(0, dtype=np.int64)
            self.Vinv = []
            self.diag_list = []

    def keys(self, X: np.ndarray) -> np.ndarray:
        C = X @ self.Uinv.T
        if self.k:
            C[:, : self.k] = np.mod(C[:, : self.k], self.diag)
        return C

    def rep(self, key) -> np.ndarray:
        return self.U @ np.asarray(key, dtype=np.int64)

    def sub_coords(self, beta) -> List[int]:
        """Coordinates in the sublattice basis of a vector known to lie in it."""
        c = [int(x) for x in self.Uinv @ np.asarray(beta, dtype=np.int64)]
        if any(c[self.k:]) or any(c[i] % self.diag_list[i] for i in range(self.k)):
            raise AssertionError("vector is not in the sublattice")
        y = [c[i] // self.diag_list[i] for i in range(self.k)]
        return matvec(self.Vinv, y) if self.k else []


def _code_bound(r: int) -> int:
    # largest coordinate magnitude with (2b+1)^r < 2^62
    b = 1
    while (2 * (2 * b) + 1) ** max(r, 1) < 2 ** 62:
        b *= 2
    return b


def _encode(X: np.ndarray, big: int) -> np.ndarray:
    """Injective int64 codes for integer rows with entries in [-big, big]."""
    if X.size and np.abs(X).max() > big:
        raise RuntimeError("lattice points exceed the filtration engine's coordinate range")
    base = 2 * big + 1
    out = np.zeros(len(X), dtype=np.int64)
    for j in range(X.shape[1]):
        out = out * base + (X[:, j] + big)
    return out


@dataclass
class TraceRun:
    value: Cyc
    sequence: list
    stop_index: int
    stable_from: int
    capture_bound: int


def _fixed_coset_keys_formula(group: DeltaGroup, delta: DeltaElt, block: Block, cc: _CosetCoords):
    """Fixed cosets of delta on Z^r/Lambda_0 via mu = (1-u^k)^{-1}(lam - beta)."""
    r = group.rank
    uk = group.u_power(delta.k)
    A = one_minus(uk)
    Afr = [[Fraction(x) for x in row] for row in A]
    sub_u = restrict_automorphism(uk, [list(b) for b in block.basis]) if block.k else []
    reps = _quotient_reps(sub_u)  # reps of Lambda_0/(1-u^k)Lambda_0 in sub coordinates
    keys = []
    for z in reps:
        beta = [sum(z[i] * block.basis[i][j] for i in range(block.k)) for j in range(r)]
        rhs = [Fraction(a - b) for a, b in zip(delta.lam, beta)]
        mu = la.solve(Afr, rhs)
        if mu is None or any(x.denominator != 1 for x in mu):
            continue
        mu = [int(x) for x in mu]
        keys.append(tuple(int(x) for x in cc.keys(np.array([mu], dtype=np.int64))[0]))
    return keys, reps


def _quotient_reps(sub_u: IntMat) -> List[Tuple[int, ...]]:
    k = len(sub_u)
    if k == 0:
        return [()]
    A = one_minus(sub_u)
    snf = smith_normal_form(A)
    if any(x == 0 for x in snf.diag):
        raise ValueError("delta is not elliptic on the sublattice")
    return [tuple(matvec(snf.U, list(y))) for y in product(*(range(d) for d in snf.diag))]


def run_filtration(delta: DeltaElt, block: Block, lambda1=None, max_steps: int = 200) -> TraceRun:
    """Generalized trace of delta on one block by simulating the filtration.

    ``X_n = O + S_n`` where ``O`` is the delta-orbit of 0 and ``S_n`` the
    sums of ``n`` elements of ``lambda1`` (which contains 0).  The filtered
    piece ``M_n`` is spanned by ``x . W`` for ``x`` in ``X_n``; its trace is
    the sum over delta-fixed cosets of ``Lambda_0`` met by ``X_n``.
    """
    group = delta.group
    r = group.rank
    if not _elliptic_power(group, delta.k):
        raise ValueError("the linear part of delta is not elliptic")
    L1 = np.array(lambda1 if lambda1 is not None else default_lambda1(group), dtype=np.int64).reshape(-1, r)
    if not (L1 == 0).all(axis=1).any():
        L1 = np.vstack([L1, np.zeros((1, r), dtype=np.int64)])
    cc = _CosetCoords(r, block.basis)
    d = block.dim
    uk = np.array(group.u_power(delta.k), dtype=np.int64).reshape(r, r)
    lam = np.array(delta.lam, dtype=np.int64)
    # delta-orbit of 0
    orbit = [np.zeros(r, dtype=np.int64)]
    while True:
        nxt = lam + uk @ orbit[-1]
        if not nxt.any():
            break
        orbit.append(nxt)
        if len(orbit) > 10 * group.order + 10:  # pragma: no cover
            raise AssertionError("delta-orbit of 0 does not close")
    O = np.array(orbit, dtype=np.int64).reshape(-1, r)
    predicted, _ = _fixed_coset_keys_formula(group, delta, block, cc)
    predicted = set(predicted)
    Ukd = la.mat_pow(block.U, delta.k) if d else []
    rho_inv = [la.inverse(m) for m in block.rho]
    general = block.gens is not None
    W = block.gens
    full_dim = d

    big = _code_bound(r)
    seen_keys = {}  # coset key -> first step it was met
    fixed_state = {}
    S_codes = np.zeros(1, dtype=np.int64) + _encode(np.zeros((1, r), dtype=np.int64), big)
    shell = np.zeros((1, r), dtype=np.int64)
    X_codes = np.zeros(0, dtype=np.int64)
    seq = []
    run_len = 0
    need_run = r + group.order
    capture = None
    for n in range(max_steps + 1):
        if n > 0:
            cand = (shell[:, None, :] + L1[None, :, :]).reshape(-1, r)
            codes, idx = np.unique(_encode(cand, big), return_index=True)
            fresh = ~np.isin(codes, S_codes, assume_unique=True)
            shell = cand[idx[fresh]]
            S_codes = np.union1d(S_codes, codes[fresh])
        Xc = (O[:, None, :] + shell[None, :, :]).reshape(-1, r)
        codes, idx = np.unique(_encode(Xc, big), return_index=True)
        fresh = ~np.isin(codes, X_codes, assume_unique=True)
        Xnew = Xc[idx[fresh]]
        X_codes = np.union1d(X_codes, codes[fresh])
        if len(Xnew) == 0:
            keys = np.zeros((0, r), dtype=np.int64)
        else:
            keys = cc.keys(Xnew)
        # new cosets: test for delta-fixedness in one pass
        kcodes, kidx = np.unique(_encode(keys, big), return_index=True)
        new_keys = [tuple(keys[i].tolist()) for i in kidx]
        new_keys = [kt for kt in new_keys if kt not in seen_keys]
        if new_keys:
            K = np.array(new_keys, dtype=np.int64).reshape(-1, r)
            reps = K @ cc.U.T
            imgs = lam[None, :] + reps @ uk.T
            fixed = (cc.keys(imgs) == K).all(axis=1)
            for kt, rep, img, f in zip(new_keys, reps, imgs, fixed):
                seen_keys[kt] = n
                if f:
                    z = cc.sub_coords(img - rep)
                    T = la.mat_mul(rho_of(block.rho, z, d, rho_inv), Ukd) if d else []
                    fixed_state[kt] = {"T": T, "rep": rep, "space": la.Subspace(d) if general else None}
        if general and fixed_state and len(Xnew):
            for x, key in zip(Xnew, keys):
                st = fixed_state.get(tuple(key.tolist()))
                if st is None or st["space"].dim >= full_dim:
                    continue
                z = cc.sub_coords(x - st["rep"])
                R = rho_of(block.rho, z, d, rho_inv)
                st["space"] = la.Subspace(d, st["space"].rows + [la.mat_vec(R, w) for w in W])
        # trace of delta on M_n
        total = ZERO
        for kt, st in fixed_state.items():
            if not general:
                total = total + la.trace(st["T"]) if d else total
            else:
                sp = st["space"]
                if sp.dim:
                    total = total + sp.trace_of(st["T"])
        seq.append(total)
        captured = predicted <= set(fixed_state)
        if general:
            captured = captured and all(fixed_state[k]["space"].dim == full_dim for k in predicted)
        if set(fixed_state) - predicted:
            raise AssertionError("filtration found a fixed coset missed by the closed form")
        if captured and capture is None:
            capture = n
        if n > 0 and seq[-1] == seq[-2]:
            run_len += 1
        else:
            run_len = 0
        if capture is not None and run_len >= need_run:
            stable_from = n
            while stable_from > 0 and seq[stable_from - 1] == seq[-1]:
                stable_from -= 1
            return TraceRun(seq[-1], seq, n, stable_from, capture)
    raise RuntimeError("generalized trace did not stabilise within the step bound")


def _elliptic_power(group: DeltaGroup, k: int) -> bool:
    if group.rank == 0:
        return True
    return not fixed_sublattice(group.u_power(k))


def gen_trace(delta: DeltaElt, M: DeltaModule, spec: Optional[FiltrationSpec] = None) -> Cyc:
    """Generalized trace of t_lam u^k on M, by running the length filtration."""
    return gen_trace_detail(delta, M, spec)[0]


def gen_trace_detail(delta: DeltaElt, M: DeltaModule, spec: Optional[FiltrationSpec] = None):
    group = delta.group
    blocks = M.blocks(group)
    lambda1 = None
    if spec is not None and spec.lambda1 is not None:
        lambda1 = [tuple(v) for v in spec.lambda1]
        check_lambda1(group, lambda1)
    runs = []
    total = ZERO
    for i, b in enumerate(blocks):
        if spec is not None and spec.generators is not None and spec.generators[i] is not None:
            b = Block(b.basis, b.rho, b.U, [list(map(as_cyc, v)) for v in spec.generators[i]])
            _check_generating(b)
        run = run_filtration(delta, b, lambda1)
        runs.append(run)
        total = total + run.value
    return total, runs


def _check_generating(b: Block):
    d = b.dim
    sp = la.Subspace(d, b.gens)
    if not sp.is_stable(b.U):
        raise ValueError("generating subspace is not u-stable")
    # generated Lambda_0-submodule must be everything
    cur = sp
    for _ in range(d + 1):
        vecs = list(cur.rows)
        for m in b.rho + [la.inverse(m) for m in b.rho]:
            vecs += [la.mat_vec(m, v) for v in cur.rows]
        nxt = la.Subspace(d, vecs)
        if nxt.dim == cur.dim:
            break
        cur = nxt
    if cur.dim != d:
        raise ValueError("subspace does not generate the module")


def induced_trace(delta: DeltaElt, basis, M0: DeltaModule) -> Cyc:
    """sum over mu in Lambda/Lambda_0 with mu^{-1} delta mu in Lambda_0 u^k of gen_trace(mu^{-1} delta mu, M0)."""
    group = delta.group
    r = group.rank
    basis = [list(map(int, b)) for b in basis]
    sub_u = restrict_automorphism(group.umat, basis)
    sub = DeltaGroup(sub_u)
    if not _elliptic_power(group, delta.k):
        raise ValueError("the linear part of delta is not elliptic")
    uk = group.u_power(delta.k)
    A = [[Fraction(x) for x in row] for row in one_minus(uk)]
    sub_uk = sub.u_power(delta.k)
    total = ZERO
    for z in _quotient_reps(sub_uk):
        beta = [sum(z[i] * basis[i][j] for i in range(len(basis))) for j in range(r)]
        mu = la.solve(A, [Fraction(a - b) for a, b in zip(delta.lam, beta)])
        if mu is None or any(x.denominator != 1 for x in mu):
            continue
        # mu^{-1} delta mu = t_{lam - (1-u^k) mu} u^k = t_beta u^k, beta in Lambda_0
        total = total + gen_trace(DeltaElt(sub, tuple(z), delta.k), M0)
    return total


def induce(basis, M0: DeltaModule) -> Induced:
    """Ind from the u-stable sublattice spanned by ``basis``."""
    return Induced([list(map(int, b)) for b in basis], M0)


def conjugation_invariance_check(lam, delta: DeltaElt, M: DeltaModule) -> bool:
    """Tr_gen(lam delta lam^{-1}) == Tr_gen(delta)."""
    g = delta.group
    t = translation(g, lam)
    conj = t * delta * t.inverse()
    return gen_trace(conj, M) == gen_trace(delta, M)


# ---------------------------------------------------------------------------
# homology via the Koszul complex of the logarithms


@dataclass
class HomologyGroup:
    """A finite-dimensional space with the induced action(s)."""

    dim: int
    ops: list  # matrices of the operators, in the order they were requested

    @property
    def U(self):
        return self.ops[0] if self.ops else []

    def trace(self, i: int = 0) -> Cyc:
        if self.dim == 0:
            return ZERO
        return la.trace(self.ops[i])


def _nilpotent_log(R):
    m = len(R)
    if m == 0:
        return []
    X = la.mat_sub(R, cid(m))
    out = [[ZERO] * m for _ in range(m)]
    P = X
    for t in range(1, m + 1):
        coef = Fraction((-1) ** (t + 1), t)
        out = la.mat_add(out, la.mat_scale(P, as_cyc(coef)))
        P = la.mat_mul(P, X)
        if all(x == 0 for row in P for x in row):
            break
    return out


def koszul_homology(rho: list, ops: Sequence[Tuple[list, IntMat]], d: int) -> List[HomologyGroup]:
    """H_j(Z^k, M) for j = 0..k with the action of each (G, A) in ``ops``.

    ``rho`` are the matrices of the basis of Z^k on M (dimension d).  Each
    operator G on M must satisfy G rho(x) G^{-1} = rho(A x).  Homology is
    computed on the generalized invariant part M_1 with the Koszul complex of
    the commuting nilpotents log rho_i; G acts on M_1 (x) wedge^j by
    G (x) wedge^j A.
    """
    k = len(rho)
    if d == 0:
        return [HomologyGroup(0, [[] for _ in ops]) for _ in range(k + 1)]
    if k:
        stacked = []
        for m in rho:
            X = la.mat_pow(la.mat_sub(m, cid(d)), d)
            stacked.extend(X)
        K = la.kernel(stacked, d)
    else:
        K = [[ONE if i == j else ZERO for i in range(d)] for j in range(d)]
    if not K:
        return [HomologyGroup(0, [[] for _ in ops]) for _ in range(k + 1)]
    sp = la.Subspace(d, K)
    m = sp.dim
    N = [_nilpotent_log(sp.restrict(r)) for r in rho]
    G_res = [sp.restrict(G) for G, _ in ops]
    subsets = [list(combinations(range(k), j)) for j in range(k + 1)]
    index = [{I: i for i, I in enumerate(s)} for s in subsets]
    dims = [m * len(s) for s in subsets]

    def boundary(j):
        # C_j -> C_{j-1}; returns dims[j-1] x dims[j] matrix
        rows, cols = dims[j - 1], dims[j]
        D = [[ZERO] * cols for _ in range(rows)]
        nJ, nJm = len(subsets[j]), len(subsets[j - 1])
        for Ii, I in enumerate(subsets[j]):
            for t, i in enumerate(I):
                rest = I[:t] + I[t + 1:]
                ri = index[j - 1][rest]
                sign = 1 if t % 2 == 0 else -1
                Ni = N[i]
                for a in range(m):
                    col = a * nJ + Ii
                    for b in range(m):
                        v = Ni[b][a]
                        if v != 0:
                            D[b * nJm + ri][col] = D[b * nJm + ri][col] + (v if sign > 0 else -v)
        return D

    Ds = [None] + [boundary(j) for j in range(1, k + 1)]
    out = []
    for j in range(k + 1):
        if j == 0:
            Z = [[ONE if i == t else ZERO for i in range(dims[0])] for t in range(dims[0])]
        else:
            Z = la.kernel(Ds[j], dims[j])
        if j < k:
            Bm = Ds[j + 1]
            Bvecs = la.transpose(Bm) if Bm else []
        else:
            Bvecs = []
        full_ops = []
        for (G, A), Gr in zip(ops, G_res):
            wedge = la.exterior_power([[as_cyc(x) for x in row] for row in A], j) if j else [[ONE]]
            full_ops.append(la.kron(Gr, wedge))
        if not Z:
            out.append(HomologyGroup(0, [[] for _ in ops]))
            continue
        q, mats = la.quotient_action(Z, Bvecs, full_ops)
        out.append(HomologyGroup(q, mats))
    return out


def block_homology(block: Block, group: DeltaGroup) -> List[HomologyGroup]:
    """H_*(Lambda, Ind block) = H_*(Lambda_0, F) (Shapiro), padded to length rank+1."""
    u0 = restrict_automorphism(group.umat, [list(b) for b in block.basis])
    hs = koszul_homology(block.rho, [(block.U, u0)], block.dim)
    while len(hs) < group.rank + 1:
        hs.append(HomologyGroup(0, [[]]))
    return hs


def homology(group: DeltaGroup, M: DeltaModule) -> List[HomologyGroup]:
    """H_j(Lambda, M) for j = 0..rank with the action of u."""
    parts = [block_homology(b, group) for b in M.blocks(group)]
    out = []
    for j in range(group.rank + 1):
        mats = [p[j].U for p in parts if p[j].dim]
        dim = sum(p[j].dim for p in parts)
        out.append(HomologyGroup(dim, [la.block_diag(*mats)] if mats else [[]]))
    return out


def trace_on_homology(group: DeltaGroup, M: DeltaModule) -> Cyc:
    """sum_j (-1)^j Tr(u, H_j(Lambda, M))."""
    total = ZERO
    for j, h in enumerate(homology(group, M)):
        t = h.trace()
        total = total + t if j % 2 == 0 else total - t
    return total


@dataclass
class TraceFormulaReport:
    lhs: Cyc
    rhs: Cyc
    terms: list = field(default_factory=list)  # (lam, value)

    @property
    def equal(self) -> bool:
        return self.lhs == self.rhs


def verify_trace_formula(M: DeltaModule, group: DeltaGroup, spec: Optional[FiltrationSpec] = None) -> TraceFormulaReport:
    """Compare Tr(u, H_*(Lambda, M)) with the sum of generalized traces over Lambda_u."""
    if not group.elliptic:
        raise ValueError("u is not elliptic")
    lhs = trace_on_homology(group, M)
    terms = []
    rhs = ZERO
    for lam in group.class_representatives():
        v = gen_trace(DeltaElt(group, tuple(lam), 1), M, spec)
        terms.append((tuple(lam), v))
        rhs = rhs + v
    return TraceFormulaReport(lhs, rhs, terms)


# ---------------------------------------------------------------------------
# explicit finite-dimensional realisations (test oracles)


def finite_realization(group: DeltaGroup, M: DeltaModule) -> FiniteDim:
    """The same module as an explicit FiniteDim when every block has finite index."""
    mats_rho = None
    mats_U = []
    parts = []
    for b in M.blocks(group):
        parts.append(_realize_block(group, b))
    r = group.rank
    rho = [la.block_diag(*[p[0][i] for p in parts]) for i in range(r)]
    U = la.block_diag(*[p[1] for p in parts])
    return FiniteDim(rho, U)


def _realize_block(group: DeltaGroup, b: Block):
    r = group.rank
    if b.k != r:
        raise ValueError("block is induced from a sublattice of infinite index")
    H = hermite_normal_form([list(v) for v in b.basis])
    reps = coset_representatives(H, r)
    from .lattice import hnf_reduce

    idx = {tuple(v): i for i, v in enumerate(reps)}
    B = transpose([list(v) for v in b.basis])
    d = b.dim
    n = len(reps) * d
    rho_inv = [la.inverse(m) for m in b.rho]

    def move(target):
        c = tuple(hnf_reduce(list(target), H))
        beta = [a - bb for a, bb in zip(target, c)]
        z = solve_integer(B, beta)
        return idx[c], rho_of(b.rho, z, d, rho_inv)

    def assemble(f):
        out = [[ZERO] * n for _ in range(n)]
        for a, nu in enumerate(reps):
            bi, R = f(nu)
            for i in range(d):
                for j in range(d):
                    out[bi * d + i][a * d + j] = R[i][j]
        return out

    rho = []
    for i in range(r):
        e = [1 if t == i else 0 for t in range(r)]
        rho.append(assemble(lambda nu, e=e: move([x + y for x, y in zip(nu, e)])))

    def u_map(nu):
        bi, R = move(matvec(group.umat, list(nu)))
        return bi, la.mat_mul(R, b.U)

    U = assemble(u_map)
    return rho, U


def plain_trace(delta: DeltaElt, M: FiniteDim) -> Cyc:
    """Tr(rho(lam) U^k) for a finite-dimensional module."""
    d = M.dim
    R = rho_of(_lists(M.rho), delta.lam, d)
    return la.trace(la.mat_mul(R, la.mat_pow(_list(M.U), delta.k)))


# ---------------------------------------------------------------------------
# extended modules and Weyl averaging


@dataclass
class ExtendedModule:
    """A representation of (Lambda x| W) x| <sigma> on a finite-dimensional space.

    ``rho``: matrices of the simple coroots; ``S``: matrices of the simple
    reflections; ``sigma``: matrix of sigma.  ``weyl``: the finite data as
    integer matrices on the coroot lattice (``s`` list, ``sigma_lat``).
    """

    rho: list
    S: list
    sigma: list
    s_lat: list
    sigma_lat: IntMat
    weyl_elements: list  # words (tuples of 0-based indices) of all elements of W

    @property
    def dim(self) -> int:
        return len(self.sigma)

    def check_relations(self):
        d = self.dim
        r = len(self.rho)
        for a, b in combinations(self.rho, 2):
            if not la.mat_eq(la.mat_mul(a, b), la.mat_mul(b, a)):
                raise ValueError("lattice matrices do not commute")
        gens = [(S, A) for S, A in zip(self.S, self.s_lat)] + [(self.sigma, self.sigma_lat)]
        for G, A in gens:
            Ginv = la.inverse(G)
            for i in range(r):
                col = [A[j][i] for j in range(r)]
                if not la.mat_eq(la.mat_mul(la.mat_mul(G, self.rho[i]), Ginv), rho_of(self.rho, col, d)):
                    raise ValueError("semidirect relation fails")
        for S in self.S:
            if not _is_identity(la.mat_mul(S, S)):
                raise ValueError("simple reflection does not square to 1")

    def word_matrix(self, word) -> Tuple[list, IntMat]:
        d = self.dim
        r = len(self.rho)
        G = cid(d)
        A = [[1 if i == j else 0 for j in range(r)] for i in range(r)]
        for i in word:
            G = la.mat_mul(G, self.S[i])
            A = matmul(A, self.s_lat[i])
        return G, A


def weyl_averaged_trace(V: ExtendedModule, j_range=None):
    """Return per-j values Tr(sigma, H_j(Lambda,V)^W) after checking they equal the W-average.

    Result is a list of (j, invariants_form, averaged_form); raises
    AssertionError if the two forms disagree.
    """
    V.check_relations()
    r = len(V.rho)
    js = range(r + 1) if j_range is None else j_range
    words = list(V.weyl_elements)
    ops = [(S, A) for S, A in zip(V.S, V.s_lat)] + [(V.sigma, V.sigma_lat)]
    for w in words:
        G, A = V.word_matrix(w)
        ops.append((la.mat_mul(G, V.sigma), matmul(A, V.sigma_lat)))
    hs = koszul_homology(V.rho, ops, V.dim)
    nS = len(V.S)
    out = []
    for j in js:
        h = hs[j]
        if h.dim == 0:
            out.append((j, ZERO, ZERO))
            continue
        # invariants form
        stacked = []
        for i in range(nS):
            stacked.extend(la.mat_sub(h.ops[i], cid(h.dim)))
        inv = la.kernel(stacked, h.dim) if stacked else [[ONE if a == b else ZERO for a in range(h.dim)] for b in range(h.dim)]
        if inv:
            sp = la.Subspace(h.dim, inv)
            inv_form = sp.trace_of(h.ops[nS])
        else:
            inv_form = ZERO
        avg = ZERO
        for t in range(len(words)):
            avg = avg + la.trace(h.ops[nS + 1 + t])
        avg = avg / len(words)
        if inv_form != avg:
            raise AssertionError(f"Weyl averaging identity fails in degree {j}: {inv_form} != {avg}")
        out.append((j, inv_form, avg))
    return out


def alternating(values) -> Cyc:
    total = ZERO
    for j, a, _ in values:
        total = total + a if j % 2 == 0 else total - a
    return total


# ---------------------------------------------------------------------------
# random generators for property tests and acceptance runs

_COMPANION = {
    2: [[-1]],
    3: [[0, -1], [1, -1]],
    4: [[0, -1], [1, 0]],
    6: [[0, -1], [1, 1]],
}


def random_unimodular(rng, r: int, steps: int = 3) -> IntMat:
    M = [[1 if i == j else 0 for j in range(r)] for i in range(r)]
    for _ in range(steps if r > 1 else 0):
        i, j = rng.sample(range(r), 2)
        c = rng.choice([-1, 1])
        for row in M:
            row[i] += c * row[j]
    return M


def random_elliptic_u(rng, rank: int, orders=(2, 3, 4, 6)) -> IntMat:
    """A conjugate of a block-diagonal companion matrix with order in ``orders``."""
    for _ in range(1000):
        blocks = []
        left = rank
        while left:
            choices = [n for n in _COMPANION if len(_COMPANION[n]) <= left]
            n = rng.choice(choices)
            blocks.append(_COMPANION[n])
            left -= len(_COMPANION[n])
        u = [[0] * rank for _ in range(rank)]
        off = 0
        for b in blocks:
            for i, row in enumerate(b):
                for j, x in enumerate(row):
                    u[off + i][off + j] = x
            off += len(b)
        if matrix_order(u) not in orders:
            continue
        P = random_unimodular(rng, rank)
        Pinv = _int_inverse(P)
        return matmul(matmul(P, u), Pinv)
    raise ValueError(f"no elliptic automorphism of rank {rank} with order in {tuple(orders)}")


def character_orbit_module(group: DeltaGroup, exps, N: int, wrap=ONE) -> FiniteDim:
    """FiniteDim on the u-orbit of the character e_i -> zeta_N^{exps[i]}.

    Basis v_0..v_{m-1}; rho(lam) v_j = xi(u^{-j} lam) v_j, U v_j = v_{j+1},
    U v_{m-1} = wrap * v_0.
    """
    r = group.rank
    uinv = group._uinv
    chars = [tuple(e % N for e in exps)]
    # xi o u^{-1} as exponent vector: (xi o A)(e_i) = sum_j A_ji exps_j
    while True:
        prev = chars[-1]
        nxt = tuple(sum(uinv[j][i] * prev[j] for j in range(r)) % N for i in range(r))
        if nxt == chars[0]:
            break
        chars.append(nxt)
    m = len(chars)
    rho = []
    for i in range(r):
        rho.append([[Cyc.root_of_unity(N, chars[j][i]) if a == j else ZERO for j in range(m)] for a in range(m)])
    U = [[ZERO] * m for _ in range(m)]
    for j in range(m - 1):
        U[j + 1][j] = ONE
    U[0][m - 1] = as_cyc(wrap)
    return FiniteDim(rho, U)


def unipotent_module(group: DeltaGroup, rng) -> Optional[FiniteDim]:
    """Two-dimensional unipotent module rho(lam) = [[1, f(lam)], [0, 1]], f u = eps f."""
    r = group.rank
    N = group.order
    for k in rng.sample(range(N), N):
        eps = Cyc.root_of_unity(N, k)
        A = [[as_cyc(group.u[j][i]) - (eps if i == j else ZERO) for j in range(r)] for i in range(r)]
        ker = la.kernel(A, r)  # f with u^T f = eps f
        if ker:
            f = ker[0]
            U = [[eps, ZERO], [ZERO, ONE]]
            rho = [[[ONE, f[i]], [ZERO, ONE]] for i in range(r)]
            return FiniteDim(rho, U)
    return None


def tensor(A: FiniteDim, B: FiniteDim) -> FiniteDim:
    rho = [la.kron(_list(a), _list(b)) for a, b in zip(A.rho, B.rho)]
    return FiniteDim(rho, la.kron(_list(A.U), _list(B.U)))


def random_finite(group: DeltaGroup, rng, max_dim: int = 6) -> FiniteDim:
    N = group.order
    exps = [rng.randrange(N) if rng.random() < 0.6 else 0 for _ in range(group.rank)]
    M = character_orbit_module(group, exps, N, wrap=Cyc.root_of_unity(N, rng.randrange(N)))
    if rng.random() < 0.4 and M.dim * 2 <= max_dim:
        J = unipotent_module(group, rng)
        if J is not None:
            M = tensor(M, J)
    return M


def random_free(group: DeltaGroup, rng) -> Free:
    N = group.order
    d = rng.choice([1, 1, 2])
    if d == 1:
        return Free([[Cyc.root_of_unity(N, rng.randrange(N))]])
    return Free([[ZERO, Cyc.root_of_unity(N, rng.randrange(N))], [ONE, ZERO]])


def random_sublattice(group: DeltaGroup, rng):
    """A u-stable sublattice basis: m*Lambda, (1 -+ u)Lambda or the span of a u-orbit."""
    r = group.rank
    kind = rng.choice(["scale", "poly", "orbit"])
    if kind == "scale":
        m = rng.choice([1, 2, 3])
        return [[m if i == j else 0 for j in range(r)] for i in range(r)]
    if kind == "poly":
        u = group.umat
        A = one_minus(u) if rng.random() < 0.5 else [[u[i][j] + (1 if i == j else 0) for j in range(r)] for i in range(r)]
        if det_bareiss(A) == 0:
            A = one_minus(u)
        return [list(v) for v in transpose(A)]
    v = [rng.randint(-1, 1) for _ in range(r)]
    if not any(v):
        v[0] = 1
    vecs = [v]
    for _ in range(group.order - 1):
        vecs.append(matvec(group.umat, vecs[-1]))
    H = hermite_normal_form(vecs)
    return [list(h) for h in H]


def random_module(group: DeltaGroup, rng, depth: int = 0) -> DeltaModule:
    kinds = ["finite", "free", "induced", "sum", "twist"] if depth < 2 else ["finite", "free"]
    kind = rng.choice(kinds)
    if kind == "finite":
        return random_finite(group, rng)
    if kind == "free":
        return random_free(group, rng)
    if kind == "induced":
        basis = random_sublattice(group, rng)
        sub = DeltaGroup(restrict_automorphism(group.umat, basis))
        return Induced(basis, random_module(sub, rng, depth + 1))
    if kind == "sum":
        return DirectSum([random_module(group, rng, depth + 1) for _ in range(2)])
    N = group.order
    return Twist(random_module(group, rng, depth + 1), Cyc.root_of_unity(N, rng.randrange(N)))


# ---------------------------------------------------------------------------
# extended modules built from a root datum (coroot lattice coordinates)


def coroot_reflections(datum) -> List[IntMat]:
    """s_i on the coroot lattice: s_i(a_j^v) = a_j^v - a_ji a_i^v."""
    C = datum.cartan_matrix
    n = datum.rank
    out = []
    for i in range(n):
        M = [[1 if a == b else 0 for b in range(n)] for a in range(n)]
        for j in range(n):
            M[i][j] -= C[j][i]
        out.append(M)
    return out


def _perm_matrix(perm) -> IntMat:
    n = len(perm)
    M = [[0] * n for _ in range(n)]
    for i, p in enumerate(perm):
        M[p][i] = 1
    return M


class _WeylData:
    def __init__(self, datum, perm=None):
        self.n = datum.rank
        self.s = coroot_reflections(datum)
        self.perm = tuple(perm) if perm is not None else tuple(range(self.n))
        self.sigma = _perm_matrix(self.perm)
        ident = tuple(tuple(1 if a == b else 0 for b in range(self.n)) for a in range(self.n))
        self.words = {ident: ()}
        frontier = [ident]
        while frontier:
            nxt = []
            for m in frontier:
                for i, s in enumerate(self.s):
                    w = tuple(map(tuple, matmul(s, [list(r) for r in m])))
                    if w not in self.words:
                        self.words[w] = (i,) + self.words[m]
                        nxt.append(w)
            frontier = nxt
        self.elements = sorted(self.words, key=lambda m: (len(self.words[m]), self.words[m]))
        self.index = {m: k for k, m in enumerate(self.elements)}


def _ext_from_parts(wd: _WeylData, rho, S, sigma) -> ExtendedModule:
    return ExtendedModule(rho, S, sigma, wd.s, wd.sigma, [wd.words[m] for m in wd.elements])


def trivial_extended(datum, perm=None, sign: int = 1, sigma_scalar=ONE) -> ExtendedModule:
    """One-dimensional module: Lambda trivial, s_i -> sign, sigma -> scalar."""
    wd = _WeylData(datum, perm)
    one = [[ONE]]
    return _ext_from_parts(wd, [one] * wd.n, [[[as_cyc(sign)]] for _ in wd.s], [[as_cyc(sigma_scalar)]])


def reflection_extended(datum, perm=None) -> ExtendedModule:
    """Lambda (x) Q with trivial Lambda-action."""
    wd = _WeylData(datum, perm)
    return _ext_from_parts(wd, [cid(wd.n)] * wd.n, [cmat(s) for s in wd.s], cmat(wd.sigma))


def augmentation_extended(datum, perm=None) -> ExtendedModule:
    """Q + Lambda (x) Q with rho(lam)(a, v) = (a, v + a lam): a unipotent extension."""
    wd = _WeylData(datum, perm)
    n = wd.n
    rho = []
    for i in range(n):
        M = cid(n + 1)
        M[i + 1][0] = ONE
        rho.append(M)
    S = [la.block_diag([[ONE]], cmat(s)) for s in wd.s]
    return _ext_from_parts(wd, rho, S, la.block_diag([[ONE]], cmat(wd.sigma)))


def regular_extended(datum, exps, N: int, perm=None) -> ExtendedModule:
    """Basis v_w; rho(lam) v_w = xi(w^{-1} lam) v_w, s_i v_w = v_{s_i w}, sigma v_w = v_{sigma w sigma^{-1}}.

    ``xi`` sends the i-th simple coroot to zeta_N^{exps[i]} and must be sigma-invariant.
    """
    wd = _WeylData(datum, perm)
    n = wd.n
    if any((exps[wd.perm[i]] - exps[i]) % N for i in range(n)):
        raise ValueError("character is not sigma-invariant")
    els = wd.elements
    m = len(els)
    rho = []
    for i in range(n):
        diag = []
        for w in els:
            winv = _int_inverse([list(r) for r in w])
            v = [winv[a][i] for a in range(n)]  # w^{-1} a_i^v
            diag.append(Cyc.root_of_unity(N, sum(e * x for e, x in zip(exps, v)) % N))
        rho.append([[diag[a] if a == b else ZERO for b in range(m)] for a in range(m)])

    def perm_op(f):
        M = [[ZERO] * m for _ in range(m)]
        for b, w in enumerate(els):
            M[wd.index[f(w)]][b] = ONE
        return M

    S = [perm_op(lambda w, s=s: tuple(map(tuple, matmul(s, [list(r) for r in w])))) for s in wd.s]
    sig, siginv = wd.sigma, _int_inverse(wd.sigma)
    sigma = perm_op(lambda w: tuple(map(tuple, matmul(matmul(sig, [list(r) for r in w]), siginv))))
    return _ext_from_parts(wd, rho, S, sigma)


def ext_sum(A: ExtendedModule, B: ExtendedModule) -> ExtendedModule:
    return ExtendedModule(
        [la.block_diag(a, b) for a, b in zip(A.rho, B.rho)],
        [la.block_diag(a, b) for a, b in zip(A.S, B.S)],
        la.block_diag(A.sigma, B.sigma),
        A.s_lat, A.sigma_lat, A.weyl_elements,
    )


def ext_tensor(A: ExtendedModule, B: ExtendedModule) -> ExtendedModule:
    return ExtendedModule(
        [la.kron(a, b) for a, b in zip(A.rho, B.rho)],
        [la.kron(a, b) for a, b in zip(A.S, B.S)],
        la.kron(A.sigma, B.sigma),
        A.s_lat, A.sigma_lat, A.weyl_elements,
    )


def random_extended(datum, rng, perm=None, max_dim: int = 12) -> ExtendedModule:
    """Sums and tensor products of the basic extended modules above."""
    n = datum.rank
    p = tuple(perm) if perm is not None else tuple(range(n))

    def basic():
        kind = rng.choice(["trivial", "sign", "reflection", "augmentation", "regular"])
        if kind == "trivial":
            return trivial_extended(datum, p, 1, rng.choice([ONE, -ONE]))
        if kind == "sign":
            return trivial_extended(datum, p, -1, rng.choice([ONE, -ONE]))
        if kind == "reflection":
            return reflection_extended(datum, p)
        if kind == "augmentation":
            return augmentation_extended(datum, p)
        N = rng.choice([1, 2, 3])
        exps = [rng.randrange(N) for _ in range(n)]
        for i in range(n):  # make it sigma-invariant
            exps[p[i]] = exps[i]
        return regular_extended(datum, exps, N, p)

    V = basic()
    for _ in range(rng.randint(0, 2)):
        W = basic()
        if rng.random() < 0.5 and V.dim * W.dim <= max_dim:
            V = ext_tensor(V, W)
        elif V.dim + W.dim <= max_dim:
            V = ext_sum(V, W)
    return V
