"""Frobenius twists of extended affine Weyl groups.

A twist ``sigma`` is a diagram automorphism ``pi`` of the Dynkin diagram
together with an integer matrix ``P`` on the ambient lattice sending the
fundamental coweight ``omega_i^vee`` to ``omega_{pi(i)}^vee``.  It acts on
``t_lam * w`` by ``(P lam, P w P^{-1})``.

A twisted element ``w~ sigma`` acts on the apartment by the affine map
``x -> wbar P x + lam``; its linear part ``L = wbar P`` drives everything
below.  Conjugation by a translation ``t_mu`` sends ``t_lam wbar sigma`` to
``t_{lam + (1 - L) mu} wbar sigma``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import lcm
from typing import Dict, List, Optional, Sequence, Tuple

from . import linalg
from .affine import ExtAffineWeylElt
from .cartan import RootDatum, WeylElt
from .lattice import (
    FiniteAbelianGroup,
    det_bareiss,
    fixed_sublattice,
    hermite_normal_form,
    identity,
    in_lattice,
    mat_power,
    matmul,
    matvec,
    one_minus,
    smith_normal_form,
    snf_box_representatives,
    snf_canonical,
    solve_integer,
    transpose,
)

Vec = Tuple[int, ...]


class NonEllipticError(ValueError):
    """Raised when an elliptic linear part is required but a fixed vector exists."""

    def __init__(self, fixed_vector):
        self.fixed_vector = list(fixed_vector)
        super().__init__(f"non-elliptic: fixed vector {self.fixed_vector}")


class FrobeniusTwist:
    """A finite-order automorphism of the based root datum."""

    def __init__(self, datum: RootDatum, diagram_perm: Optional[Sequence[int]] = None, lattice_map=None):
        r, d = datum.rank, datum.dim
        perm = tuple(range(r)) if diagram_perm is None else tuple(int(i) for i in diagram_perm)
        if sorted(perm) != list(range(r)):
            raise ValueError(f"{list(perm)} is not a permutation of the nodes")
        if perm not in datum.diagram_automorphisms:
            raise ValueError(f"{list(perm)} is not a diagram automorphism")
        if lattice_map is None:
            P = [[0] * d for _ in range(d)]
            for i in range(r):
                P[perm[i]][i] = 1
            for k in range(r, d):
                P[k][k] = 1
        else:
            P = [[int(x) for x in row] for row in lattice_map]
        if len(P) != d or any(len(row) != d for row in P):
            raise ValueError(f"lattice map must be {d}x{d}")
        if abs(det_bareiss(P)) != 1:
            raise ValueError("lattice map is not invertible over Z")
        self.datum = datum
        self.perm = perm
        self.P = tuple(tuple(row) for row in P)
        self.P_inv = tuple(tuple(row) for row in _int_inverse(P))
        self._w = WeylElt(self.P, self.P_inv)
        # compatibility with roots and lattices
        for i in range(r):
            if self._w.act_root(datum.simple_roots[i]) != datum.simple_roots[perm[i]]:
                raise ValueError("lattice map does not permute the simple roots as the diagram map")
            if self._w.act(datum.simple_coroots[i]) != datum.simple_coroots[perm[i]]:
                raise ValueError("lattice map does not permute the simple coroots")
        for b in datum.lambda_G_basis:
            if not datum.in_lambda_G(self._w.act(b)):
                raise ValueError("lattice map does not preserve the cocharacter lattice")
        self.order = self._compute_order()

    def _compute_order(self) -> int:
        P = [list(r) for r in self.P]
        I = identity(len(P))
        M = P
        for k in range(1, 1000):
            if M == I:
                return k
            M = matmul(M, P)
        raise ValueError("lattice map is not of finite order")

    @classmethod
    def trivial(cls, datum):
        return cls(datum)

    def is_trivial(self) -> bool:
        return self.order == 1

    def matrix(self) -> List[List[int]]:
        return [list(r) for r in self.P]

    def act_vec(self, x) -> Vec:
        return self._w.act(x)

    def act_weyl(self, w: WeylElt) -> WeylElt:
        return self._w * w * self._w.inverse()

    def __call__(self, x: ExtAffineWeylElt) -> ExtAffineWeylElt:
        return ExtAffineWeylElt(x.datum, self._w.act(x.t), self.act_weyl(x.w), check=False)

    def power_apply(self, x: ExtAffineWeylElt, k: int) -> ExtAffineWeylElt:
        for _ in range(k % self.order):
            x = self(x)
        return x

    def act_root(self, a) -> Vec:
        return self._w.act_root(a)

    def to_json(self) -> dict:
        return {"diagram_perm": [i + 1 for i in self.perm], "lattice_map": self.matrix()}

    def __eq__(self, other):
        return isinstance(other, FrobeniusTwist) and self.datum == other.datum and self.P == other.P

    def __hash__(self):
        return hash(self.P)

    def __repr__(self):
        return f"FrobeniusTwist(perm={[i + 1 for i in self.perm]}, order={self.order})"


def load_sigma(datum: RootDatum, obj) -> FrobeniusTwist:
    """Parse a twist from JSON: ``{"diagram_perm": [1-based], "lattice_map": [[...]]}``."""
    if obj is None:
        return FrobeniusTwist(datum)
    if isinstance(obj, str):
        text = obj
        if not obj.lstrip().startswith("{"):
            with open(obj) as fh:
                text = fh.read()
        obj = json.loads(text)
    perm = obj.get("diagram_perm")
    if perm is not None:
        perm = [int(i) - 1 for i in perm]
    return FrobeniusTwist(datum, perm, obj.get("lattice_map"))


def _int_inverse(M):
    inv = linalg.inverse([[Fraction(x) for x in r] for r in M])
    return [[int(x) for x in r] for r in inv]


@dataclass(frozen=True)
class TwistedElt:
    """The element ``base * sigma`` of the extended affine Weyl group twisted by sigma."""

    base: ExtAffineWeylElt
    sigma: FrobeniusTwist

    def __mul__(self, other: "TwistedElt"):
        # (x sigma)(y sigma) = x sigma(y) sigma^2 ; only used through powers
        raise TypeError("use power() for products in the twisted coset")

    def power(self, k: int):
        """(base sigma)^k = N_k(base) sigma^k, returned as (N_k(base), k mod order)."""
        return sigma_norm(self.base, k, self.sigma), k % self.sigma.order

    def linear_part(self) -> List[List[int]]:
        return linear_part(self.base.w, self.sigma)

    def is_torsion(self) -> bool:
        return is_sigma_torsion(self.base, self.sigma)

    def finite_image(self) -> WeylElt:
        return self.base.w


def linear_part(wbar: WeylElt, sigma: FrobeniusTwist) -> List[List[int]]:
    """Matrix of wbar * sigma on the ambient lattice."""
    return matmul(wbar.matrix, sigma.P)


def sigma_norm(w: ExtAffineWeylElt, k: int, sigma: FrobeniusTwist) -> ExtAffineWeylElt:
    """N_k(w) = w sigma(w) ... sigma^{k-1}(w)."""
    if k < 1:
        raise ValueError("k must be positive")
    out = w
    cur = w
    for _ in range(1, k):
        cur = sigma(cur)
        out = out * cur
    return out


def is_sigma_torsion(w: ExtAffineWeylElt, sigma: FrobeniusTwist) -> bool:
    """Whether the affine map x -> L x + lam has a fixed point over Q."""
    L = linear_part(w.w, sigma)
    A = [[Fraction(x) for x in row] for row in one_minus(L)]
    return linalg.solve(A, [Fraction(x) for x in w.t]) is not None


def linear_order(wbar: WeylElt, sigma: FrobeniusTwist) -> int:
    L = linear_part(wbar, sigma)
    I = identity(len(L))
    M = L
    for k in range(1, 10**5):
        if M == I:
            return k
        M = matmul(M, L)
    raise AssertionError("linear part of infinite order")  # pragma: no cover


def is_sigma_torsion_bruteforce(w: ExtAffineWeylElt, sigma: FrobeniusTwist) -> bool:
    """Search N_k(w) == 1 over k up to lcm(order of the linear part, order of sigma)."""
    m = lcm(linear_order(w.w, sigma), sigma.order)
    cur = ExtAffineWeylElt.identity(w.datum)
    x = w
    for k in range(1, m + 1):
        cur = cur * x
        x = sigma(x)
        if k % sigma.order == 0 and cur.is_identity():
            return True
    return False


def twisted_conjugate(mu: Sequence[int], x, sigma: FrobeniusTwist):
    """t_mu (x sigma) t_mu^{-1} = (t_mu x t_{-sigma(mu)}) sigma.

    Accepts either a :class:`TwistedElt` or a bare base element and returns
    the same kind.
    """
    base = x.base if isinstance(x, TwistedElt) else x
    d = base.datum
    mu = tuple(int(a) for a in mu)
    t_mu = ExtAffineWeylElt(d, mu)
    t_back = ExtAffineWeylElt(d, tuple(-a for a in sigma.act_vec(mu)), check=False)
    out = t_mu * base * t_back
    return TwistedElt(out, sigma) if isinstance(x, TwistedElt) else out


# ---------------------------------------------------------------------------
# ellipticity and class enumeration


def _lambda_matrix(datum: RootDatum, L) -> List[List[int]]:
    """Matrix of an ambient map preserving Lambda, in simple coroot coordinates."""
    cols = []
    for c in datum.simple_coroots:
        y = datum.lambda_coords(tuple(matvec(L, list(c))))
        if y is None:
            raise ValueError("map does not preserve the coroot lattice")
        cols.append(y)
    return transpose(cols)


def _lambda_G_matrix(datum: RootDatum, L) -> List[List[int]]:
    cols = []
    for b in datum.lambda_G_basis:
        y = datum.lambda_G_coords(tuple(matvec(L, list(b))))
        if y is None:
            raise ValueError("map does not preserve the cocharacter lattice")
        cols.append(y)
    return transpose(cols)


def _check_central(datum: RootDatum, sigma: FrobeniusTwist, lambda0):
    L0 = [tuple(int(x) for x in v) for v in lambda0 if any(v)]
    if not L0:
        return []
    span = linalg.Subspace(datum.dim, [[Fraction(x) for x in v] for v in L0])
    gens = [sigma._w] + list(datum.simple_reflections)
    for g in gens:
        for v in L0:
            if not span.contains([Fraction(x) for x in g.act(v)]):
                raise ValueError("sublattice Lambda_0 is not stable under sigma and W")
        for v in L0:
            if not datum.in_lambda_G(v):
                raise ValueError("Lambda_0 is not contained in the cocharacter lattice")
    return L0


def is_elliptic(wbar: WeylElt, sigma: FrobeniusTwist, lattice="lambda", lambda0=()) -> bool:
    """Whether wbar*sigma has no nonzero fixed vector on the chosen lattice.

    ``lattice`` is ``"lambda"`` (coroot lattice) or ``"quotient"`` for
    ``Lambda_G / Lambda_0`` with ``lambda0`` a list of spanning vectors.
    """
    return elliptic_witness(wbar, sigma, lattice, lambda0) is None


def elliptic_witness(wbar: WeylElt, sigma: FrobeniusTwist, lattice="lambda", lambda0=()):
    """A fixed vector witnessing non-ellipticity, or None."""
    d = sigma.datum
    L = linear_part(wbar, sigma)
    if lattice == "lambda":
        fixed = fixed_sublattice(_lambda_matrix(d, L))
        return d.from_lambda_coords(fixed[0]) if fixed else None
    if lattice != "quotient":
        raise ValueError(f"unknown lattice option {lattice!r}")
    L0 = _check_central(d, sigma, lambda0)
    fixed_V = fixed_sublattice(L)
    if not L0:
        return tuple(fixed_V[0]) if fixed_V else None
    U = linalg.Subspace(d.dim, [[Fraction(x) for x in v] for v in L0])
    fixed_U = linalg.intersect(U, linalg.Subspace(d.dim, [[Fraction(x) for x in v] for v in fixed_V]))
    if len(fixed_V) - fixed_U.dim == 0:
        return None
    for v in fixed_V:
        if not U.contains([Fraction(x) for x in v]):
            return tuple(v)
    return None  # pragma: no cover


def fiber_linear_map(wbar: WeylElt, sigma: FrobeniusTwist, acting: str = "lambda") -> List[List[int]]:
    """1 - L on the acting lattice, in its own basis."""
    d = sigma.datum
    L = linear_part(wbar, sigma)
    M = _lambda_matrix(d, L) if acting == "lambda" else _lambda_G_matrix(d, L)
    return one_minus(M)


def enumerate_fiber_classes(wbar: WeylElt, sigma: FrobeniusTwist, acting: str = "lambda") -> List[TwistedElt]:
    """One representative ``t_lam wbar sigma`` per conjugacy class of the acting lattice.

    With ``acting="lambda"`` the fiber lives in ``Lambda x| W`` and
    representatives have ``lam`` in the Smith box of ``(1 - L)`` on the
    coroot lattice.  With ``acting="lambda_G"`` the fiber and the acting
    group are both taken in the cocharacter lattice.
    """
    d = sigma.datum
    if acting not in ("lambda", "lambda_G"):
        raise ValueError(f"unknown acting lattice {acting!r}")
    L = linear_part(wbar, sigma)
    if acting == "lambda":
        fix = fixed_sublattice(_lambda_matrix(d, L))
        if fix:
            raise NonEllipticError(d.from_lambda_coords(fix[0]))
    else:
        fix = fixed_sublattice(L)
        if fix:
            raise NonEllipticError(fix[0])
    A = fiber_linear_map(wbar, sigma, acting)
    to_ambient = d.from_lambda_coords if acting == "lambda" else d.from_lambda_G_coords
    reps = snf_box_representatives(A) if A else [()]
    out = [TwistedElt(ExtAffineWeylElt(d, to_ambient(list(y)), wbar, check=False), sigma) for y in reps]
    return sorted(out, key=lambda x: x.base.sort_key())


def fiber_class_of(x: TwistedElt, acting: str = "lambda") -> Tuple[int, ...]:
    """Canonical box representative (in the acting lattice's coordinates) of x's class."""
    d = x.sigma.datum
    A = fiber_linear_map(x.base.w, x.sigma, acting)
    coords = d.lambda_coords(x.base.t) if acting == "lambda" else d.lambda_G_coords(x.base.t)
    if coords is None:
        raise ValueError("element is not in the fiber over the acting lattice")
    return snf_canonical(coords, A)


def count_fiber_classes(wbar: WeylElt, sigma: FrobeniusTwist, acting: str = "lambda") -> int:
    return abs(det_bareiss(fiber_linear_map(wbar, sigma, acting)))


def refine_by_larger_lattice(classes: Sequence[TwistedElt], sigma: FrobeniusTwist, lambda0=()) -> List[List[TwistedElt]]:
    """Group Lambda-classes into orbits of mu in Lambda_G with sigma(mu) - mu in Lambda.

    The classes must come from one fiber (same finite part).  Returns blocks
    in canonical order.  Raises AssertionError if the acting group does not
    act freely, since ellipticity forces uniqueness of mu modulo Lambda.
    """
    classes = list(classes)
    if not classes:
        return []
    d = sigma.datum
    wbar = classes[0].base.w
    if any(c.base.w != wbar for c in classes):
        raise ValueError("classes lie in different fibers")
    L0 = _check_central(d, sigma, lambda0)
    keys = [fiber_class_of(c) for c in classes]
    index = {k: i for i, k in enumerate(keys)}
    if len(index) != len(keys):
        raise ValueError("duplicate classes in input")
    A = fiber_linear_map(wbar, sigma, "lambda")
    L = linear_part(wbar, sigma)
    parent = list(range(len(classes)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    mus = _admissible_mus(d, sigma, L0)
    for mu in mus:
        shift = [a - b for a, b in zip(mu, matvec(L, list(mu)))]
        moved = 0
        for i, c in enumerate(classes):
            lam = [a + b for a, b in zip(c.base.t, shift)]
            y = d.lambda_coords(tuple(lam))
            if y is None:  # pragma: no cover - excluded by admissibility
                raise AssertionError("conjugate left the fiber")
            j = index.get(snf_canonical(y, A))
            if j is None:
                continue
            if j != i:
                moved += 1
            a, b = find(i), find(j)
            if a != b:
                parent[max(a, b)] = min(a, b)
        if any(mu) and not d.in_lambda(mu) and moved != len(classes) and len(classes) == len(keys) and _full_fiber(classes, A):
            raise AssertionError(f"mu={list(mu)} fixes a class; the action is not free")
    blocks: Dict[int, List[TwistedElt]] = {}
    for i, c in enumerate(classes):
        blocks.setdefault(find(i), []).append(c)
    return [blocks[k] for k in sorted(blocks)]


def _full_fiber(classes, A) -> bool:
    return len(classes) == abs(det_bareiss(A))


def _admissible_mus(d: RootDatum, sigma: FrobeniusTwist, L0) -> List[Vec]:
    """Representatives mu of Lambda_G / (Lambda + Lambda_0) with sigma(mu) - mu in Lambda."""
    gens = [list(c) for c in d.simple_coroots] + [list(v) for v in L0]
    inc = [d.lambda_G_coords(tuple(v)) for v in gens]
    A = transpose(inc)
    snf = smith_normal_form(A)
    m = d.dim
    diag = list(snf.diag) + [0] * (m - len(snf.diag))
    if any(x == 0 for x in diag):
        raise ValueError("Lambda_G / (Lambda + Lambda_0) is infinite; supply a central sublattice")
    out = []
    for y in product(*(range(x) for x in diag)):
        mu = d.from_lambda_G_coords(matvec(snf.U, list(y)))
        diff = tuple(a - b for a, b in zip(sigma.act_vec(mu), mu))
        if d.in_lambda(diff):
            out.append(mu)
    return out


def fundamental_group_fixed(d: RootDatum, sigma: FrobeniusTwist) -> List[Vec]:
    """Elements of Lambda_G/Lambda fixed by sigma (as ambient representatives)."""
    return _admissible_mus(d, sigma, [])


# ---------------------------------------------------------------------------
# serialisation


def finite_word(d: RootDatum, w: WeylElt) -> str:
    word = d.weyl_word(w)
    if not word:
        return "1"
    if d.rank == 1:
        return "*".join("s" for _ in word)
    return "*".join(f"s{i}" for i in word)


def parse_finite_word(d: RootDatum, text: str) -> WeylElt:
    text = text.strip()
    if text in ("", "1", "e"):
        return WeylElt.identity(d.dim)
    if text.lower() in ("cox", "coxeter"):
        return d.coxeter_element
    word = []
    for tok in text.split("*"):
        tok = tok.strip()
        if tok == "s":
            tok = "s1"
        if not (tok.startswith("s") and tok[1:].isdigit()):
            raise ValueError(f"cannot parse finite word letter {tok!r}")
        i = int(tok[1:])
        if not 1 <= i <= d.rank:
            raise ValueError(f"no finite simple reflection {tok}")
        word.append(i)
    return d.weyl_from_word(word)


def element_to_json(x: ExtAffineWeylElt) -> dict:
    """``{"t": cocharacter-basis coordinates, "w": finite part word}``."""
    d = x.datum
    return {"t": d.lambda_G_coords(x.t), "w": finite_word(d, x.w)}


def element_from_json(d: RootDatum, obj) -> ExtAffineWeylElt:
    t = obj.get("t")
    if t is None:
        t = [0] * d.dim
    if len(t) != d.dim:
        raise ValueError(f"translation must have {d.dim} coordinates")
    return ExtAffineWeylElt(d, d.from_lambda_G_coords([int(a) for a in t]), parse_finite_word(d, obj.get("w", "1")), check=False)
