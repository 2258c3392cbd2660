"""Root data of split reductive groups and their finite Weyl groups.

Conventions
-----------
The ambient lattice is the coweight lattice, written in the basis of
fundamental coweights, possibly extended by ``central_rank`` extra
coordinates on which all roots vanish.  In these coordinates

* the simple root ``alpha_i`` is the coordinate functional ``e_i``;
* the simple coroot ``alpha_i^vee`` is row ``i`` of the Cartan matrix;
* the Cartan matrix uses ``a_ij = <alpha_i^vee, alpha_j>``.

Roots are stored as integer functionals (tuples), coroots as integer vectors.
A Weyl group element is an integer matrix acting on column vectors; it acts on
a functional ``c`` by ``c -> c * M^{-1}``.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

from .lattice import (
    FiniteAbelianGroup,
    cokernel,
    hermite_normal_form,
    identity,
    in_lattice,
    matmul,
    matvec,
    smith_normal_form,
    solve_integer,
    transpose,
)

__all__ = [
    "FiniteAbelianGroup",
    "RootDatum",
    "WeylElt",
    "build_root_datum",
    "cartan_matrix",
    "fundamental_group",
    "weyl_group",
    "load_datum",
]

Vec = Tuple[int, ...]

_CLASSICAL_ORDER = {
    # order of the finite Weyl group, for sanity checks
    ("E", 6): 51840,
    ("E", 7): 2903040,
    ("E", 8): 696729600,
    ("F", 4): 1152,
    ("G", 2): 12,
}


def weyl_group_order(typ: str, n: int) -> int:
    from math import factorial

    if typ == "A":
        return factorial(n + 1)
    if typ in ("B", "C"):
        return 2**n * factorial(n)
    if typ == "D":
        return 2 ** (n - 1) * factorial(n)
    return _CLASSICAL_ORDER[(typ, n)]


def cartan_matrix(typ: str, n: int) -> List[List[int]]:
    """Cartan matrix in Bourbaki numbering, ``a_ij = <alpha_i^vee, alpha_j>``."""
    typ = typ.upper()
    valid = {
        "A": n >= 1,
        "B": n >= 2,
        "C": n >= 2,
        "D": n >= 4,
        "E": n in (6, 7, 8),
        "F": n == 4,
        "G": n == 2,
    }
    if typ not in valid:
        raise ValueError(f"unknown Cartan type {typ!r}")
    if not valid[typ]:
        raise ValueError(f"invalid rank {n} for type {typ}")
    C = [[2 if i == j else 0 for j in range(n)] for i in range(n)]

    def link(i, j, a_ij=-1, a_ji=-1):
        C[i][j] = a_ij
        C[j][i] = a_ji

    if typ in "ABC":
        for i in range(n - 1):
            link(i, i + 1)
        if typ == "B":  # alpha_n short
            link(n - 2, n - 1, -1, -2)
        elif typ == "C":  # alpha_n long
            link(n - 2, n - 1, -2, -1)
    elif typ == "D":
        for i in range(n - 2):
            link(i, i + 1)
        link(n - 3, n - 1)
    elif typ == "E":
        link(0, 2)
        link(1, 3)
        for i in range(2, n - 1):
            link(i, i + 1)
    elif typ == "F":  # alpha_1, alpha_2 long
        link(0, 1)
        link(1, 2, -1, -2)
        link(2, 3)
    elif typ == "G":  # alpha_1 short
        link(0, 1, -3, -1)
    return C


class WeylElt:
    """An element of a finite Weyl group, stored as an integer matrix."""

    __slots__ = ("matrix", "inv", "_hash")

    def __init__(self, matrix, inv=None):
        self.matrix = tuple(tuple(int(x) for x in r) for r in matrix)
        if inv is None:
            inv = _unimodular_inverse(self.matrix)
        self.inv = tuple(tuple(r) for r in inv)
        self._hash = hash(self.matrix)

    @classmethod
    def identity(cls, n: int) -> "WeylElt":
        I = tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
        return cls(I, I)

    def __mul__(self, other: "WeylElt") -> "WeylElt":
        return WeylElt(matmul(self.matrix, other.matrix), matmul(other.inv, self.inv))

    def inverse(self) -> "WeylElt":
        return WeylElt(self.inv, self.matrix)

    def __eq__(self, other):
        return isinstance(other, WeylElt) and self.matrix == other.matrix

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"WeylElt({[list(r) for r in self.matrix]})"

    def act(self, x: Sequence[int]) -> Vec:
        """Action on an ambient (coweight) vector."""
        return tuple(sum(a * b for a, b in zip(row, x)) for row in self.matrix)

    def act_root(self, c: Sequence[int]) -> Vec:
        """Action on a functional: c -> c * M^{-1}."""
        n = len(c)
        inv = self.inv
        return tuple(sum(c[k] * inv[k][j] for k in range(n) if c[k]) for j in range(n))

    def is_identity(self) -> bool:
        return all(a == (1 if i == j else 0) for i, r in enumerate(self.matrix) for j, a in enumerate(r))


def _unimodular_inverse(M):
    from .linalg import inverse

    inv = inverse([list(r) for r in M])
    out = []
    for r in inv:
        row = []
        for x in r:
            if getattr(x, "denominator", 1) != 1:
                raise ValueError("matrix is not invertible over Z")
            row.append(int(x))
        out.append(row)
    return out


class RootDatum:
    """A based root datum with ambient coweight coordinates.

    Parameters
    ----------
    cartan_type, rank:
        Type letter and rank of the semisimple part.
    lambda_G_basis:
        Basis of the cocharacter lattice, as integer vectors in ambient
        coordinates.
    central_rank:
        Number of extra ambient coordinates on which every root vanishes.
    """

    def __init__(self, cartan_type: str, rank: int, lambda_G_basis, central_rank: int = 0, isogeny_label: str = "custom"):
        self.cartan_type = cartan_type.upper()
        self.rank = rank
        self.central_rank = central_rank
        self.dim = rank + central_rank
        self.isogeny_label = isogeny_label
        C = cartan_matrix(self.cartan_type, rank)
        self.cartan_matrix = tuple(tuple(r) for r in C)
        d = self.dim
        self.simple_roots = tuple(tuple(1 if j == i else 0 for j in range(d)) for i in range(rank))
        self.simple_coroots = tuple(tuple(C[i]) + (0,) * central_rank for i in range(rank))
        self.lambda_basis = self.simple_coroots
        basis = [tuple(int(x) for x in v) for v in lambda_G_basis]
        if any(len(v) != d for v in basis):
            raise ValueError(f"cocharacter basis vectors must have length {d}")
        if smith_normal_form(basis).rank != d:
            raise ValueError("cocharacter basis is not of full rank")
        self.lambda_G_basis = tuple(basis)
        self._hnf_lambda = hermite_normal_form(self.lambda_basis)
        self._hnf_lambda_G = hermite_normal_form(self.lambda_G_basis)
        for c in self.simple_coroots:
            if not in_lattice(c, self._hnf_lambda_G):
                raise ValueError(f"cocharacter lattice does not contain the coroot {list(c)}")
        for s in self.simple_reflections:
            for b in self.lambda_G_basis:
                if not in_lattice(s.act(b), self._hnf_lambda_G):
                    raise ValueError("cocharacter lattice is not stable under the Weyl group")
        self._enumerate_roots()

    # -- basic data -----------------------------------------------------
    def __repr__(self):
        return f"RootDatum({self.cartan_type}{self.rank}, {self.isogeny_label})"

    def __eq__(self, other):
        return (
            isinstance(other, RootDatum)
            and self.cartan_type == other.cartan_type
            and self.rank == other.rank
            and self.central_rank == other.central_rank
            and self._hnf_lambda_G == other._hnf_lambda_G
        )

    def __hash__(self):
        return hash((self.cartan_type, self.rank, self.central_rank, tuple(map(tuple, self._hnf_lambda_G))))

    @cached_property
    def simple_reflections(self) -> Tuple[WeylElt, ...]:
        out = []
        d = self.dim
        for i in range(self.rank):
            c = self.simple_coroots[i]
            # s_i x = x - x_i * c_i
            M = [[(1 if r == k else 0) - (c[r] if k == i else 0) for k in range(d)] for r in range(d)]
            out.append(WeylElt(M, M))
        return tuple(out)

    def pairing(self, root: Sequence[int], x: Sequence[int]) -> int:
        return sum(a * b for a, b in zip(root, x))

    def _enumerate_roots(self):
        d = self.dim
        coroot_of: Dict[Vec, Vec] = {}
        queue = deque()
        for a, c in zip(self.simple_roots, self.simple_coroots):
            coroot_of[a] = c
            queue.append(a)
        while queue:
            a = queue.popleft()
            for s in self.simple_reflections:
                b = s.act_root(a)
                if b not in coroot_of:
                    coroot_of[b] = s.act(coroot_of[a])
                    queue.append(b)
        roots = sorted(coroot_of, key=lambda r: (-sum(r) if _is_pos(r) else sum(r) + 10**6, r))
        self.roots: Tuple[Vec, ...] = tuple(roots)
        self.positive_roots: Tuple[Vec, ...] = tuple(r for r in roots if _is_pos(r))
        self.coroot: Dict[Vec, Vec] = coroot_of
        self.root_index = {r: i for i, r in enumerate(roots)}
        self.highest_root = max(self.positive_roots, key=lambda r: (sum(r), r))
        if d and not all(2 == self.pairing(r, coroot_of[r]) for r in roots):
            raise AssertionError("root/coroot pairing is not 2")

    @property
    def highest_coroot(self) -> Vec:
        return self.coroot[self.highest_root]

    def is_positive(self, root: Sequence[int]) -> bool:
        return _is_pos(root)

    def reflection(self, root: Sequence[int]) -> WeylElt:
        """s_beta x = x - <beta, x> beta^vee."""
        beta = tuple(root)
        cv = self.coroot[beta]
        d = self.dim
        M = [[(1 if r == k else 0) - cv[r] * beta[k] for k in range(d)] for r in range(d)]
        return WeylElt(M, M)

    # -- lattices -------------------------------------------------------
    def in_lambda(self, x) -> bool:
        return in_lattice(list(x), self._hnf_lambda)

    def in_lambda_G(self, x) -> bool:
        return in_lattice(list(x), self._hnf_lambda_G)

    def lambda_coords(self, x) -> Optional[List[int]]:
        """Coordinates of x in the simple coroot basis (None if x not in Lambda)."""
        if self.central_rank:
            if any(x[self.rank:]):
                return None
            x = x[: self.rank]
            B = transpose([c[: self.rank] for c in self.simple_coroots])
        else:
            B = transpose(self.simple_coroots)
        return solve_integer(B, list(x))

    def lambda_G_coords(self, x) -> Optional[List[int]]:
        return solve_integer(transpose(self.lambda_G_basis), list(x))

    def from_lambda_G_coords(self, y) -> Vec:
        return tuple(matvec(transpose(self.lambda_G_basis), list(y)))

    def from_lambda_coords(self, y) -> Vec:
        return tuple(matvec(transpose(self.simple_coroots), list(y)))

    @cached_property
    def inclusion_matrix(self) -> List[List[int]]:
        """Columns: coordinates of the simple coroots in the cocharacter basis."""
        cols = [self.lambda_G_coords(c) for c in self.simple_coroots]
        return transpose(cols) if cols else [[] for _ in range(self.dim)]

    @cached_property
    def omega_representatives(self) -> Tuple[Vec, ...]:
        """Ambient representatives of the torsion part of Lambda_G / Lambda."""
        from itertools import product

        snf = smith_normal_form(self.inclusion_matrix) if self.rank else None
        diag = list(snf.diag) if snf else []
        reps = []
        ranges = [range(d) if d else range(1) for d in diag] + [range(1)] * (self.dim - len(diag))
        for y in product(*ranges):
            coords = matvec(snf.U, list(y)) if snf else list(y)
            reps.append(self.from_lambda_G_coords(coords))
        return tuple(sorted(reps))

    # -- Weyl group -----------------------------------------------------
    @cached_property
    def weyl_elements(self) -> Tuple[WeylElt, ...]:
        return tuple(weyl_group(self))

    @cached_property
    def weyl_words(self) -> Dict[WeylElt, Tuple[int, ...]]:
        """Reduced words (1-based simple reflection indices), smallest-index tie-break."""
        return {w: self.weyl_word(w) for w in self.weyl_elements}

    def weyl_length(self, w: WeylElt) -> int:
        return sum(1 for a in self.positive_roots if not _is_pos(w.act_root(a)))

    def weyl_word(self, w: WeylElt) -> Tuple[int, ...]:
        word = []
        cur = w
        while not cur.is_identity():
            for i, s in enumerate(self.simple_reflections):
                # left descent: cur^{-1}(alpha_i) < 0
                if not _is_pos(cur.inverse().act_root(self.simple_roots[i])):
                    word.append(i + 1)
                    cur = s * cur
                    break
            else:  # pragma: no cover
                raise AssertionError("no descent found for a non-identity element")
        return tuple(word)

    def weyl_from_word(self, word: Sequence[int]) -> WeylElt:
        w = WeylElt.identity(self.dim)
        for i in word:
            w = w * self.simple_reflections[i - 1]
        return w

    @cached_property
    def coxeter_element(self) -> WeylElt:
        return self.weyl_from_word(range(1, self.rank + 1))

    @cached_property
    def diagram_automorphisms(self) -> Tuple[Tuple[int, ...], ...]:
        """Permutations pi of the nodes with C[pi i][pi j] == C[i][j]."""
        from itertools import permutations

        C = self.cartan_matrix
        n = self.rank
        if n > 8:
            raise ValueError("diagram automorphism search limited to rank <= 8")
        out = []
        for p in permutations(range(n)):
            if all(C[p[i]][p[j]] == C[i][j] for i in range(n) for j in range(n)):
                out.append(p)
        return tuple(out)

    def to_json(self) -> dict:
        out = {"type": self.cartan_type, "rank": self.rank}
        if self.isogeny_label in ("sc", "adjoint") and not self.central_rank:
            out["isogeny"] = self.isogeny_label
        else:
            out["isogeny"] = {"custom": [list(v) for v in self.lambda_G_basis]}
            if self.central_rank:
                out["central_rank"] = self.central_rank
        return out


def _is_pos(root) -> bool:
    for x in root:
        if x > 0:
            return True
        if x < 0:
            return False
    return False


_ISOGENY_ALIASES = {
    "sc": "sc",
    "simply-connected": "sc",
    "simply_connected": "sc",
    "adjoint": "adjoint",
    "ad": "adjoint",
}


def build_root_datum(cartan_type: str, rank: int, isogeny="sc", central_rank: int = 0) -> RootDatum:
    """Build a root datum of the given type and isogeny class.

    ``isogeny`` is ``"sc"``, ``"adjoint"``, a custom list of basis vectors of
    the cocharacter lattice in ambient coordinates, or ``{"custom": [...]}``.
    """
    if isinstance(rank, bool) or not isinstance(rank, int) or rank < 1:
        raise ValueError(f"invalid rank {rank!r}")
    C = cartan_matrix(cartan_type, rank)
    d = rank + central_rank
    pad = lambda v: tuple(v) + (0,) * central_rank  # noqa: E731
    central = [tuple(1 if j == rank + k else 0 for j in range(d)) for k in range(central_rank)]
    if isinstance(isogeny, dict):
        if "custom" not in isogeny:
            raise ValueError(f"unrecognised isogeny {isogeny!r}")
        isogeny = isogeny["custom"]
    if isinstance(isogeny, str):
        label = _ISOGENY_ALIASES.get(isogeny.lower())
        if label is None:
            raise ValueError(f"unrecognised isogeny {isogeny!r}")
        if label == "sc":
            basis = [pad(r) for r in C] + central
        else:
            basis = [pad(r) for r in identity(rank)] + central
        return RootDatum(cartan_type, rank, basis, central_rank, label)
    return RootDatum(cartan_type, rank, isogeny, central_rank, "custom")


def load_datum(obj) -> RootDatum:
    """Build a datum from its JSON description (dict, JSON text or file path)."""
    if isinstance(obj, str):
        text = obj
        if not obj.lstrip().startswith("{"):
            with open(obj) as fh:
                text = fh.read()
        obj = json.loads(text)
    try:
        typ = obj["type"]
        rank = obj["rank"]
    except (KeyError, TypeError):
        raise ValueError("datum must provide 'type' and 'rank'") from None
    return build_root_datum(typ, rank, obj.get("isogeny", "sc"), obj.get("central_rank", 0))


def weyl_group(datum: RootDatum) -> List[WeylElt]:
    """All elements of W, ordered by (length, reduced word)."""
    e = WeylElt.identity(datum.dim)
    seen = {e: ()}
    frontier = [e]
    while frontier:
        nxt = []
        for w in frontier:
            for i, s in enumerate(datum.simple_reflections):
                x = w * s
                if x not in seen:
                    seen[x] = seen[w] + (i + 1,)
                    nxt.append(x)
        frontier = nxt
    return sorted(seen, key=lambda w: (len(seen[w]), seen[w]))


def fundamental_group(datum: RootDatum) -> FiniteAbelianGroup:
    """Lambda_G / Lambda via the Smith form of the inclusion."""
    if datum.rank == 0:
        return FiniteAbelianGroup((), datum.dim)
    return cokernel(datum.inclusion_matrix, datum.dim)


def weyl_action_on_fundamental_group_trivial(datum: RootDatum) -> bool:
    """Check that s_i(x) - x lies in Lambda for each basis vector x of Lambda_G."""
    for s in datum.simple_reflections:
        for b in datum.lambda_G_basis:
            diff = [a - c for a, c in zip(s.act(b), b)]
            if not datum.in_lambda(diff):
                return False
    return True
